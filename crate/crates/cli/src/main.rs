//! `balanced`: command-line front end.
//!
//! Exit status is 0 on success, 1 on a domain error (the error is printed as
//! `{"error": ...}` on stdout) and 2 on a usage error.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use balanced::certify;
use balanced::constructions::{self, JoinFamilySpec};
use balanced::decomposition::{decompose, hull_membership, HullMembership};
use balanced::enumeration::{
    compatibility_graph, compatible_cliques, count_components, enumerate_basic_with_limit, max_n_from_env,
    maximal_cliques, BasicCatalog,
};
use balanced::extrapolation::{extrapolate_right, LineFamily};
use balanced::graph::{generate, parse_simple_graph, to_dot, DistanceMatrix, DotOptions, Family, GraphDocument};
use balanced::measure::{self, parse_measure};
use balanced::rational::parse_rational;
use balanced::{Graph, Measure, SimpleGraph};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

#[derive(Parser)]
#[command(name = "balanced", version, about = "Exact balanced probability measures on graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Dot,
    Csv,
    Pretty,
}

#[derive(Args)]
struct Source {
    /// Graph file: JSON document or edge list.
    #[arg(long, conflicts_with = "gen_spec")]
    graph: Option<PathBuf>,
    /// Generator: a family term such as `cycle(4)`, or `example14`, `c4c4`,
    /// `join-family --l L --k K`, `gh --input h.json`.
    #[arg(long = "gen", value_name = "SPEC")]
    gen_spec: Option<String>,
}

#[derive(Args)]
struct Output {
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Write the document here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Emit a graph.
    Gen {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        output: Output,
    },
    /// Emit the distance matrix.
    Distances {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        output: Output,
    },
    /// Test a measure for balancedness.
    Check {
        #[command(flatten)]
        source: Source,
        /// Inline JSON array of fractions, or a file containing one.
        #[arg(long)]
        measure: String,
        #[command(flatten)]
        output: Output,
    },
    /// Energy `<mu, D mu>` and the transport costs.
    Energy {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        measure: String,
        #[command(flatten)]
        output: Output,
    },
    /// Greedy farthest-point sequence and its empirical measure.
    Greedy {
        #[command(flatten)]
        source: Source,
        /// Seed vertices, comma separated.
        #[arg(long, value_delimiter = ',', default_value = "0")]
        seed: Vec<usize>,
        #[arg(long, default_value_t = 100)]
        steps: usize,
        /// Report whether the final measure is epsilon-balanced.
        #[arg(long)]
        epsilon: Option<String>,
        #[command(flatten)]
        output: Output,
    },
    /// Catalog every basic balanced measure.
    Enumerate {
        #[command(flatten)]
        source: Source,
        /// Vertex cap; defaults to BALANCED_MAX_N or 16.
        #[arg(long)]
        max_n: Option<usize>,
        #[command(flatten)]
        output: Output,
    },
    /// Compatibility graph of the basic measures.
    Compat {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        max_n: Option<usize>,
        /// Also list all cliques up to this size.
        #[arg(long)]
        cliques: Option<usize>,
        #[command(flatten)]
        output: Output,
    },
    /// Decompose a balanced measure into compatible basic measures.
    Decompose {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        measure: String,
        #[command(flatten)]
        output: Output,
    },
    /// Extrapolate from `mu` past `nu` to the end of the balanced interval.
    Extrapolate {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        mu: String,
        #[arg(long)]
        nu: String,
        #[command(flatten)]
        output: Output,
    },
    /// Convex-hull membership against given measures or the whole catalog.
    Hull {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        measure: String,
        /// JSON array of measures; defaults to the graph's basic catalog.
        #[arg(long)]
        basics: Option<String>,
        #[command(flatten)]
        output: Output,
    },
    /// Run the suite of reference examples.
    VerifyPaper {
        #[command(flatten)]
        output: Output,
    },
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Domain(String),
}

impl From<balanced::Error> for CliError {
    fn from(e: balanced::Error) -> Self {
        CliError::Domain(e.to_string())
    }
}

type CliResult<T> = Result<T, CliError>;

/// The rendered document plus whether the command as a whole succeeded.
struct Rendered {
    text: String,
    ok: bool,
}

impl From<String> for Rendered {
    fn from(text: String) -> Self {
        Self { text, ok: true }
    }
}

#[derive(Parser)]
#[command(no_binary_name = true)]
enum GenSpec {
    JoinFamily {
        #[arg(long, default_value_t = 0)]
        l: usize,
        #[arg(long)]
        k: usize,
    },
    Example14,
    C4c4,
    Gh {
        #[arg(long)]
        input: PathBuf,
    },
}

const NAMED_GENERATORS: &[&str] = &["join-family", "example14", "c4c4", "gh"];

fn read_file(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|e| CliError::Domain(format!("{}: {e}", path.display())))
}

fn load_simple(source: &Source) -> CliResult<SimpleGraph> {
    match (&source.graph, &source.gen_spec) {
        (Some(path), _) => Ok(parse_simple_graph(&read_file(path)?)?),
        (None, Some(spec)) => generate_spec(spec),
        (None, None) => Err(CliError::Usage("one of --graph or --gen is required".into())),
    }
}

fn generate_spec(spec: &str) -> CliResult<SimpleGraph> {
    let tokens: Vec<&str> = spec.split_whitespace().collect();
    if !tokens.first().is_some_and(|t| NAMED_GENERATORS.contains(t)) {
        return Ok(generate(&Family::parse(spec)?)?);
    }
    let parsed = GenSpec::try_parse_from(&tokens).map_err(|e| CliError::Usage(format!("--gen `{spec}`: {e}")))?;
    Ok(match parsed {
        GenSpec::JoinFamily { l, k } => constructions::build_join_family(JoinFamilySpec { l, k })?.simple().clone(),
        GenSpec::Example14 => constructions::build_example_14().simple().clone(),
        GenSpec::C4c4 => constructions::c4c4().simple().clone(),
        GenSpec::Gh { input } => constructions::build_gh_simple(&parse_simple_graph(&read_file(&input)?)?),
    })
}

fn load_graph(source: &Source) -> CliResult<Graph> {
    Ok(Graph::new(load_simple(source)?)?)
}

fn load_text(arg: &str) -> CliResult<String> {
    if arg.trim_start().starts_with('[') {
        Ok(arg.to_string())
    } else {
        read_file(Path::new(arg))
    }
}

fn load_measure(arg: &str) -> CliResult<Measure> {
    Ok(parse_measure(&load_text(arg)?)?)
}

fn load_measures(arg: &str) -> CliResult<Vec<Measure>> {
    serde_json::from_str(&load_text(arg)?).map_err(|e| CliError::Domain(format!("parse error: {e}")))
}

/// Compact JSON with sorted keys, newline terminated.
fn to_json<T: serde::Serialize>(value: &T) -> String {
    let v = serde_json::to_value(value).expect("documents serialize");
    let mut s = serde_json::to_string(&v).expect("values serialize");
    s.push('\n');
    s
}

fn unsupported(format: Format, verb: &str) -> CliError {
    CliError::Usage(format!("format {format:?} is not supported by `{verb}`").to_lowercase())
}

fn catalog(dm: &DistanceMatrix, max_n: Option<usize>) -> CliResult<BasicCatalog> {
    Ok(enumerate_basic_with_limit(dm, max_n.unwrap_or_else(max_n_from_env))?)
}

fn fractions(m: &Measure) -> Vec<String> {
    m.to_strings()
}

fn run(command: Command) -> CliResult<(Rendered, Option<PathBuf>)> {
    let (rendered, out) = match command {
        Command::Gen { source, output } => {
            let g = load_simple(&source)?;
            let text = match output.format.unwrap_or(Format::Json) {
                Format::Json => to_json(&GraphDocument::from(&g)),
                Format::Dot => to_dot(&g, &DotOptions::default()),
                Format::Csv => g.edges().iter().map(|(u, v)| format!("{u},{v}\n")).collect(),
                Format::Pretty => {
                    let mut s = format!("{} vertices, {} edges\n", g.n(), g.edge_count());
                    for v in 0..g.n() {
                        let nb: Vec<String> = g.neighbors(v).iter().map(usize::to_string).collect();
                        let _ = writeln!(s, "{v}: {}", nb.join(" "));
                    }
                    s
                }
            };
            (text.into(), output.out)
        }
        Command::Distances { source, output } => {
            let g = load_graph(&source)?;
            let dm = g.distances();
            let text = match output.format.unwrap_or(Format::Json) {
                Format::Json => to_json(dm),
                Format::Csv => dm.to_csv(),
                Format::Pretty => dm
                    .rows()
                    .iter()
                    .map(|r| r.iter().map(|d| format!("{d:>3}")).collect::<String>() + "\n")
                    .collect(),
                f => return Err(unsupported(f, "distances")),
            };
            (text.into(), output.out)
        }
        Command::Check { source, measure: m, output } => {
            let g = load_graph(&source)?;
            let mu = load_measure(&m)?;
            let cert = measure::is_balanced(g.distances(), &mu)?;
            let mut doc = json!({"balanced": cert.balanced, "max_cost": cert.max_cost.to_string()});
            if !cert.violations.is_empty() {
                doc["violations"] = serde_json::to_value(&cert.violations).expect("serializable");
            }
            let text = match output.format.unwrap_or(Format::Json) {
                Format::Json => to_json(&doc),
                Format::Pretty => {
                    let mut s = format!("balanced: {}\nmax cost: {}\n", cert.balanced, cert.max_cost);
                    for v in &cert.violations {
                        let _ = writeln!(s, "vertex {} short by {}", v.vertex, v.deficit);
                    }
                    s
                }
                f => return Err(unsupported(f, "check")),
            };
            (text.into(), output.out)
        }
        Command::Energy { source, measure: m, output } => {
            let g = load_graph(&source)?;
            let mu = load_measure(&m)?;
            let energy = measure::energy(g.distances(), &mu)?;
            let cost = measure::transport_cost(g.distances(), &mu)?;
            let costs: Vec<String> = cost.costs().iter().map(ToString::to_string).collect();
            let text = match output.format.unwrap_or(Format::Json) {
                Format::Json => to_json(&json!({"energy": energy.to_string(), "costs": costs})),
                Format::Pretty => format!("energy: {energy}\ncosts: {}\n", costs.join(" ")),
                f => return Err(unsupported(f, "energy")),
            };
            (text.into(), output.out)
        }
        Command::Greedy {
            source,
            seed,
            steps,
            epsilon,
            output,
        } => {
            let g = load_graph(&source)?;
            let dm = g.distances();
            let run = measure::greedy_sequence(dm, &seed, steps)?;
            let last = run.last();
            let cert = measure::is_balanced(dm, &last)?;
            let deficit = cert
                .violations
                .iter()
                .map(|v| v.deficit.clone())
                .max()
                .unwrap_or_default();
            let mut doc = json!({
                "picks": run.picks,
                "counts": run.counts(),
                "empirical": fractions(&last),
                "steps": run.steps(),
                "deficit": deficit.to_string(),
            });
            if let Some(eps) = &epsilon {
                let eps = parse_rational(eps)?;
                doc["epsilon"] = json!(eps.to_string());
                doc["epsilon_balanced"] = json!(measure::epsilon_balanced(dm, &last, &eps)?);
            }
            let text = match output.format.unwrap_or(Format::Json) {
                Format::Json => to_json(&doc),
                Format::Csv => {
                    let mut s = String::from("step,vertex\n");
                    for (i, v) in run.picks.iter().enumerate() {
                        let _ = writeln!(s, "{},{v}", i + 1);
                    }
                    s
                }
                Format::Pretty => format!(
                    "steps: {}\nempirical: {}\nlargest deficit: {deficit}\n",
                    run.steps(),
                    fractions(&last).join(" ")
                ),
                f => return Err(unsupported(f, "greedy")),
            };
            (text.into(), output.out)
        }
        Command::Enumerate { source, max_n, output } => {
            let g = load_graph(&source)?;
            let cat = catalog(g.distances(), max_n)?;
            let text = match output.format.unwrap_or(Format::Json) {
                Format::Json => to_json(&cat),
                Format::Dot => compatibility_graph(&cat).to_dot(&cat),
                Format::Csv => {
                    let mut s = String::from("index,support,max_set,measure\n");
                    for (i, e) in cat.entries().iter().enumerate() {
                        let set = |v: Vec<usize>| v.iter().map(usize::to_string).collect::<Vec<_>>().join(" ");
                        let _ = writeln!(
                            s,
                            "{i},{},{},{}",
                            set(e.pair.support.to_vec()),
                            set(e.pair.max_set.to_vec()),
                            fractions(&e.measure).join(" ")
                        );
                    }
                    s
                }
                Format::Pretty => {
                    let mut s = format!("{} basic balanced measures on {} vertices\n", cat.len(), cat.n());
                    for (i, e) in cat.entries().iter().enumerate() {
                        let _ = writeln!(s, "{i:>4}  {}", fractions(&e.measure).join(" "));
                    }
                    s
                }
            };
            (text.into(), output.out)
        }
        Command::Compat {
            source,
            max_n,
            cliques,
            output,
        } => {
            let g = load_graph(&source)?;
            let cat = catalog(g.distances(), max_n)?;
            let cg = compatibility_graph(&cat);
            let text = match output.format.unwrap_or(Format::Json) {
                Format::Json => {
                    let mut doc = json!({
                        "count": cat.len(),
                        "edges": cg.edges(),
                        "components": count_components(&cg),
                        "maximal_cliques": maximal_cliques(&cg),
                        "basics": cat.entries().iter().map(|e| fractions(&e.measure)).collect::<Vec<_>>(),
                    });
                    if let Some(k) = cliques {
                        doc["cliques"] = json!(compatible_cliques(&cg, k));
                    }
                    to_json(&doc)
                }
                Format::Dot => cg.to_dot(&cat),
                Format::Pretty => format!(
                    "{} basic measures, {} compatible pairs, {} components\n",
                    cat.len(),
                    cg.edges().len(),
                    count_components(&cg)
                ),
                f => return Err(unsupported(f, "compat")),
            };
            (text.into(), output.out)
        }
        Command::Decompose { source, measure: m, output } => {
            let g = load_graph(&source)?;
            let mu = load_measure(&m)?;
            let d = decompose(g.distances(), &mu)?;
            let verified = d.verify(g.distances())?;
            let text = match output.format.unwrap_or(Format::Json) {
                Format::Json => to_json(&json!({
                    "parts": d.parts,
                    "chain_length": d.chain.len(),
                    "verified": verified,
                })),
                Format::Pretty => {
                    let mut s = String::new();
                    for p in &d.parts {
                        let _ = writeln!(s, "{:>8} x {}", p.coefficient.to_string(), fractions(&p.measure).join(" "));
                    }
                    let _ = writeln!(s, "chain length {}, verified {verified}", d.chain.len());
                    s
                }
                f => return Err(unsupported(f, "decompose")),
            };
            (text.into(), output.out)
        }
        Command::Extrapolate { source, mu, nu, output } => {
            let g = load_graph(&source)?;
            let fam = LineFamily::new(load_measure(&mu)?, load_measure(&nu)?)?;
            let ex = extrapolate_right(g.distances(), &fam)?;
            let text = match output.format.unwrap_or(Format::Json) {
                Format::Json => to_json(&json!({
                    "L": ex.interval.lower.to_string(),
                    "R": ex.interval.upper.to_string(),
                    "lambda_R": fractions(&ex.lambda_r),
                    "binding": ex.interval.binding_upper,
                })),
                Format::Pretty => format!(
                    "interval [{}, {}]\nlambda_R: {}\n",
                    ex.interval.lower,
                    ex.interval.upper,
                    fractions(&ex.lambda_r).join(" ")
                ),
                f => return Err(unsupported(f, "extrapolate")),
            };
            (text.into(), output.out)
        }
        Command::Hull {
            source,
            measure: m,
            basics,
            output,
        } => {
            let mu = load_measure(&m)?;
            let set = match basics {
                Some(arg) => load_measures(&arg)?,
                None => catalog(load_graph(&source)?.distances(), None)?.measures(),
            };
            let h = hull_membership(&mu, &set)?;
            let doc = match &h {
                HullMembership::Inside { coefficients } => json!({
                    "inside": true,
                    "coefficients": coefficients.iter().map(ToString::to_string).collect::<Vec<_>>(),
                }),
                HullMembership::Outside { certificate } => json!({
                    "inside": false,
                    "certificate": certificate.iter().map(ToString::to_string).collect::<Vec<_>>(),
                }),
            };
            let text = match output.format.unwrap_or(Format::Json) {
                Format::Json => to_json(&doc),
                Format::Pretty => format!("inside: {}\n", h.is_inside()),
                f => return Err(unsupported(f, "hull")),
            };
            (text.into(), output.out)
        }
        Command::VerifyPaper { output } => {
            let outcomes = certify::run_suite();
            let ok = outcomes.iter().all(|o| o.passed);
            let text = match output.format.unwrap_or(Format::Pretty) {
                Format::Json => to_json(&json!({"passed": ok, "checks": outcomes})),
                Format::Pretty => {
                    let width = outcomes.iter().map(|o| o.name.len()).max().unwrap_or(0);
                    let mut s = String::new();
                    for o in &outcomes {
                        let status = if o.passed { "PASS" } else { "FAIL" };
                        let _ = writeln!(s, "{status}  {:<width$}  {} [{}]", o.name, o.description, o.detail);
                    }
                    let passed = outcomes.iter().filter(|o| o.passed).count();
                    let _ = writeln!(s, "{passed}/{} checks passed", outcomes.len());
                    s
                }
                f => return Err(unsupported(f, "verify-paper")),
            };
            (Rendered { text, ok }, output.out)
        }
    };
    Ok((rendered, out))
}

fn emit(text: &str, out: Option<&Path>) -> Result<(), String> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|e| format!("{}: {e}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli.command) {
        Ok((rendered, out)) => match emit(&rendered.text, out.as_deref()) {
            Ok(()) => ExitCode::from(if rendered.ok { 0 } else { 1 }),
            Err(e) => {
                print!("{}", to_json(&json!({ "error": e })));
                ExitCode::from(1)
            }
        },
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Domain(msg)) => {
            print!("{}", to_json(&json!({ "error": msg })));
            ExitCode::from(1)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cli_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }

    #[test]
    fn named_generators() {
        assert_eq!(generate_spec("join-family --l 0 --k 2").unwrap().n(), 6);
        assert_eq!(generate_spec("c4c4").unwrap().n(), 16);
        assert_eq!(generate_spec("cycle(5)").unwrap().n(), 5);
        assert!(matches!(generate_spec("join-family --q 1"), Err(CliError::Usage(_))));
        assert!(matches!(generate_spec("wheel(4)"), Err(CliError::Domain(_))));
    }

    #[test]
    fn json_keys_are_sorted() {
        assert_eq!(to_json(&json!({"b": 1, "a": 2})), "{\"a\":2,\"b\":1}\n");
    }
}
