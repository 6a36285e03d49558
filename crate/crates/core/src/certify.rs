//! A named suite of reference computations with known answers.
//!
//! Each check recomputes a published or hand-derived fact from scratch and
//! reports whether it still holds. The CLI exposes the suite as
//! `verify-paper`; the integration tests run the same list.

use serde::Serialize;

use crate::constructions::{self, JoinFamilySpec};
use crate::decomposition::{decompose, hull_membership};
use crate::enumeration::{enumerate_basic, is_basic};
use crate::error::Result;
use crate::extrapolation::{extrapolate_right, LineFamily};
use crate::graph::{generators, DistanceMatrix, SimpleGraph};
use crate::measure::{self, Measure};
use crate::rational::{rat, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub description: &'static str,
    pub passed: bool,
    /// Failure details or a short summary of what was computed.
    pub detail: String,
}

struct Check {
    name: &'static str,
    description: &'static str,
    run: fn() -> Result<(bool, String)>,
}

const CHECKS: &[Check] = &[
    Check {
        name: "path-unique-basic",
        description: "P_n for n = 2..10 has one basic measure, 1/2 on each endpoint",
        run: path_unique_basic,
    },
    Check {
        name: "c4-two-basics",
        description: "C4 has exactly the two antipodal basic measures",
        run: c4_two_basics,
    },
    Check {
        name: "p4-endpoint-measure",
        description: "the P4 endpoint measure is balanced with maximal cost 3/2",
        run: p4_endpoint_measure,
    },
    Check {
        name: "join-family-counts",
        description: "joins of singletons and edgeless triples have 2^k - 1 basic measures, all block-constant",
        run: join_family_counts,
    },
    Check {
        name: "k33-uniform-basic",
        description: "the uniform measure on K_{3,3} is basic",
        run: k33_uniform_basic,
    },
    Check {
        name: "example14-cost-formula",
        description: "transport cost of mu_a on the 14-vertex graph has the closed form",
        run: example14_cost_formula,
    },
    Check {
        name: "example14-interval",
        description: "mu_a is balanced exactly for a in [1/18, 1/9]",
        run: example14_interval,
    },
    Check {
        name: "example14-extrapolation",
        description: "extrapolating from mu_{1/9} past mu_{1/12} stops at mu_{1/18} with a larger max-set",
        run: example14_extrapolation,
    },
    Check {
        name: "c4-extrapolation",
        description: "extrapolating from (1/2,0,1/2,0) past uniform stops at (0,1/2,0,1/2)",
        run: c4_extrapolation,
    },
    Check {
        name: "c8-hull-exclusion",
        description: "a basic measure on C8 is outside the hull of three other compatible basic measures",
        run: c8_hull_exclusion,
    },
    Check {
        name: "c8-decomposition",
        description: "the alternating measure on C8 decomposes into compatible basic measures",
        run: c8_decomposition,
    },
    Check {
        name: "c4c4-permutations",
        description: "all 24 permutation measures on C4 x C4 are balanced; the 16 not preserving antipodes are basic",
        run: c4c4_permutations,
    },
    Check {
        name: "gh-embedding",
        description: "G_H realises H in the compatibility graph for P3, C4, K4 and the star K_{1,3}",
        run: gh_embedding,
    },
];

pub fn check_names() -> Vec<&'static str> {
    CHECKS.iter().map(|c| c.name).collect()
}

/// Runs every check in order. Errors inside a check count as failures.
pub fn run_suite() -> Vec<CheckOutcome> {
    CHECKS
        .iter()
        .map(|c| {
            let (passed, detail) = match (c.run)() {
                Ok(r) => r,
                Err(e) => (false, format!("error: {e}")),
            };
            CheckOutcome {
                name: c.name,
                description: c.description,
                passed,
                detail,
            }
        })
        .collect()
}

fn m(w: &[&str]) -> Measure {
    Measure::from_fractions(w).expect("literal measure")
}

fn dist(g: SimpleGraph) -> Result<DistanceMatrix> {
    Ok(g.into_graph()?.distances().clone())
}

fn path_unique_basic() -> Result<(bool, String)> {
    for n in 2..=10 {
        let cat = enumerate_basic(&dist(generators::path(n)?)?)?;
        let mut expected = vec![Rational::from_integer(0.into()); n];
        expected[0] = rat(1, 2);
        expected[n - 1] = rat(1, 2);
        if cat.len() != 1 || cat.entries()[0].measure.weights() != &expected[..] {
            return Ok((false, format!("P{n}: {} basic measures", cat.len())));
        }
    }
    Ok((true, "9 paths".into()))
}

fn c4_two_basics() -> Result<(bool, String)> {
    let cat = enumerate_basic(&dist(generators::cycle(4)?)?)?;
    let expected = vec![m(&["1/2", "0", "1/2", "0"]), m(&["0", "1/2", "0", "1/2"])];
    Ok((cat.measures() == expected, format!("{} basic measures", cat.len())))
}

fn p4_endpoint_measure() -> Result<(bool, String)> {
    let cert = measure::is_balanced(&dist(generators::path(4)?)?, &m(&["1/2", "0", "0", "1/2"]))?;
    Ok((cert.balanced && cert.max_cost == rat(3, 2), format!("max cost {}", cert.max_cost)))
}

fn join_family_counts() -> Result<(bool, String)> {
    let mut summary = Vec::new();
    for (l, k) in [(0, 2), (1, 1), (0, 3), (1, 2), (0, 4)] {
        let spec = JoinFamilySpec { l, k };
        let g = constructions::build_join_family(spec)?;
        let cat = enumerate_basic(g.distances())?;
        let ok = cat.len() == (1 << k) - 1
            && cat
                .measures()
                .iter()
                .all(|mu| constructions::is_block_constant_triple_measure(spec, mu));
        summary.push(format!("(l={l},k={k}):{}", cat.len()));
        if !ok {
            return Ok((false, summary.join(" ")));
        }
    }
    Ok((true, summary.join(" ")))
}

fn k33_uniform_basic() -> Result<(bool, String)> {
    let g = constructions::build_join_family(JoinFamilySpec { l: 0, k: 2 })?;
    Ok((is_basic(g.distances(), &Measure::uniform(6))?, String::new()))
}

fn example14_cost_formula() -> Result<(bool, String)> {
    let dm = constructions::example_14_distances();
    for a in [rat(1, 18), rat(1, 12), rat(1, 9), rat(0, 1), rat(1, 6)] {
        let b = rat(1, 6) - &a;
        let block = (&a + &b) * rat(8, 1);
        let mut expected = vec![block.clone(); 14];
        expected[6] = &a * rat(9, 1) + &b * rat(6, 1);
        expected[13] = &a * rat(6, 1) + &b * rat(9, 1);
        let cost = measure::transport_cost(&dm, &constructions::mu_a(&a)?)?;
        if cost.costs() != &expected[..] {
            return Ok((false, format!("a = {a}")));
        }
    }
    Ok((true, "5 values of a".into()))
}

fn example14_interval() -> Result<(bool, String)> {
    let dm = constructions::example_14_distances();
    let eps = rat(1, 1000);
    let (lo, hi) = (rat(1, 18), rat(1, 9));
    let mut grid = vec![&lo - &eps, lo.clone(), rat(1, 20), &hi + &eps, hi.clone()];
    grid.extend((0..=12).map(|i| &lo + (&hi - &lo) * rat(i, 12)));
    grid.extend([rat(1, 8), rat(1, 6), rat(0, 1)]);
    for a in &grid {
        let balanced = measure::balanced(&dm, &constructions::mu_a(a)?);
        if balanced != (&lo <= a && a <= &hi) {
            return Ok((false, format!("a = {a}: balanced = {balanced}")));
        }
    }
    Ok((true, format!("{} grid points", grid.len())))
}

fn example14_extrapolation() -> Result<(bool, String)> {
    let dm = constructions::example_14_distances();
    let fam = LineFamily::new(constructions::mu_a(&rat(1, 9))?, constructions::mu_a(&rat(1, 12))?)?;
    let ex = extrapolate_right(&dm, &fam)?;
    let ok = ex.lambda_r == constructions::mu_a(&rat(1, 18))?
        && ex.lambda_pair.support == ex.nu_pair.support
        && ex.nu_pair.max_set.is_subset(&ex.lambda_pair.max_set)
        && ex.lambda_pair.max_set != ex.nu_pair.max_set
        && ex.reconstructs(&fam);
    Ok((ok, format!("R = {}", ex.r())))
}

fn c4_extrapolation() -> Result<(bool, String)> {
    let dm = dist(generators::cycle(4)?)?;
    let fam = LineFamily::new(m(&["1/2", "0", "1/2", "0"]), Measure::uniform(4))?;
    let ex = extrapolate_right(&dm, &fam)?;
    let ok = ex.lambda_r == m(&["0", "1/2", "0", "1/2"])
        && ex.lambda_pair.support.is_subset(&ex.nu_pair.support)
        && ex.lambda_pair.support != ex.nu_pair.support
        && ex.reconstructs(&fam);
    Ok((ok, format!("R = {}", ex.r())))
}

fn c8_measures() -> [Measure; 4] {
    [
        m(&["1/2", "0", "0", "0", "1/2", "0", "0", "0"]),
        m(&["0", "0", "1/2", "0", "0", "0", "1/2", "0"]),
        m(&["0", "0", "0", "1/2", "0", "0", "0", "1/2"]),
        m(&["0", "1/2", "0", "0", "0", "1/2", "0", "0"]),
    ]
}

fn c8_hull_exclusion() -> Result<(bool, String)> {
    let dm = dist(generators::cycle(8)?)?;
    let [mu, nu, rho, sigma] = c8_measures();
    let set = [mu, nu, rho];
    let mut all_basic = is_basic(&dm, &sigma)?;
    for x in &set {
        all_basic &= is_basic(&dm, x)?;
    }
    let compatible = measure::is_compatible(&dm, &set)?;
    let inside = hull_membership(&sigma, &set)?.is_inside();
    Ok((all_basic && compatible && !inside, format!("inside = {inside}")))
}

fn c8_decomposition() -> Result<(bool, String)> {
    let dm = dist(generators::cycle(8)?)?;
    let target = m(&["1/4", "0", "1/4", "0", "1/4", "0", "1/4", "0"]);
    let d = decompose(&dm, &target)?;
    Ok((d.verify(&dm)?, format!("{} parts", d.parts.len())))
}

fn c4c4_permutations() -> Result<(bool, String)> {
    let g = constructions::c4c4();
    let dm = g.distances();
    let mut perms = Vec::new();
    permutations(&mut vec![0, 1, 2, 3], 0, &mut perms);
    let (mut balanced, mut basic) = (0, 0);
    for p in &perms {
        let mu = constructions::permutation_measure_c4c4(p)?;
        if !measure::balanced(dm, &mu) {
            continue;
        }
        balanced += 1;
        let antipodal = (0..4).all(|i| p[(i + 2) % 4] == (p[i] + 2) % 4);
        if is_basic(dm, &mu)? == !antipodal {
            basic += usize::from(!antipodal);
        } else {
            return Ok((false, format!("{p:?}")));
        }
    }
    Ok((balanced == 24 && basic == 16, format!("{balanced} balanced, {basic} basic")))
}

fn permutations(p: &mut Vec<usize>, k: usize, out: &mut Vec<Vec<usize>>) {
    if k == p.len() {
        out.push(p.clone());
        return;
    }
    for i in k..p.len() {
        p.swap(k, i);
        permutations(p, k + 1, out);
        p.swap(k, i);
    }
}

fn gh_embedding() -> Result<(bool, String)> {
    let star = SimpleGraph::from_edges(4, &[(0, 1), (0, 2), (0, 3)])?;
    for h in [generators::path(3)?, generators::cycle(4)?, generators::complete(4)?, star] {
        let report = constructions::verify_gh_embedding(&h)?;
        if !report.holds() {
            return Ok((false, format!("{report:?}")));
        }
    }
    Ok((true, "4 graphs".into()))
}
