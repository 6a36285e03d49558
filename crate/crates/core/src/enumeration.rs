//! Exhaustive catalog of basic balanced measures.
//!
//! A pair `(S, M)` with `S ⊆ M` determines the linear system
//!
//! ```text
//!   mu_k = 0 for k ∉ S,   sum(mu) = 1,   (D mu)_i = c for i ∈ M
//! ```
//!
//! in the unknowns `mu_S` and the common cost `c`. A balanced measure is basic
//! exactly when the system of its own pair has a unique solution: the strict
//! conditions (`mu > 0` on `S`, `(D mu)_k < c` off `M`) are open, so any kernel
//! direction yields a second measure with the same pair, and conversely two
//! measures with the same pair differ by a kernel direction. Scanning all
//! `3^n` nested pairs and keeping the unique, strictly feasible solutions
//! therefore finds every basic measure exactly once, at its own pair.
//!
//! This completeness argument is derived rather than quoted; the crate's
//! acceptance tests check it against an independent LP oracle on small graphs.

use std::collections::HashSet;
use std::fmt::Write;

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::DistanceMatrix;
use crate::linalg::{fraction_free_reduce, normalize_sign, Echelon, ExactInt};
use crate::measure::{self, pairs_compatible, Measure, SupportMaxPair};
use crate::rational::Rational;
use crate::vertex_set::VertexSet;

pub const DEFAULT_MAX_N: usize = 16;
/// Environment variable overriding [`DEFAULT_MAX_N`].
pub const MAX_N_ENV: &str = "BALANCED_MAX_N";
/// Masks are `u32`; nothing above this is ever scanned.
const HARD_MAX_N: usize = 30;

pub fn max_n_from_env() -> usize {
    std::env::var(MAX_N_ENV)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_MAX_N)
}

/// Rows of the pair system over the unknowns `(mu_S, c)` followed by the
/// right-hand side.
fn pair_rows<T: ExactInt>(dm: &DistanceMatrix, s: &[usize], m: &[usize], with_rhs: bool) -> Vec<Vec<T>> {
    let k = s.len();
    let width = k + 1 + usize::from(with_rhs);
    let mut rows = Vec::with_capacity(m.len() + 1);
    for &i in m {
        let mut row = Vec::with_capacity(width);
        row.extend(s.iter().map(|&j| T::from_i64(i64::from(dm.get(i, j)))));
        row.push(T::from_i64(-1));
        if with_rhs {
            row.push(T::from_i64(0));
        }
        rows.push(row);
    }
    let mut norm = vec![T::unit(); k];
    norm.push(T::from_i64(0));
    if with_rhs {
        norm.push(T::unit());
    }
    rows.push(norm);
    rows
}

/// What the pair system says about one `(S, M)`.
enum Solved {
    /// Some unknown is free: the pair holds a segment of measures or none.
    Singular,
    /// No solution, or a unique one that is not a strictly positive balanced
    /// measure.
    Rejected,
    /// A unique solution, positive on `S`, with no vertex above the common
    /// cost. `max_set` is where the cost is attained; it contains `M`.
    Basic { max_set: VertexSet, weights: Vec<Rational> },
}

/// `None` on overflow.
fn solve_rows<T: ExactInt>(dm: &DistanceMatrix, s: &[usize], m: &[usize]) -> Option<Solved> {
    let k = s.len();
    let rhs = k + 1;
    let mut rows = pair_rows::<T>(dm, s, m, true);
    let pivots = fraction_free_reduce(&mut rows, k + 1)?;
    if rows[pivots.len()..].iter().any(|r| !r[rhs].is_nil()) {
        return Some(Solved::Rejected);
    }
    if pivots.len() < k + 1 {
        return Some(Solved::Singular);
    }
    // Full column rank: row j reads `det * x_j = rhs_j`, row k `det * c = rhs_k`.
    let det = rows[0][0].clone();
    let sd = det.sign();
    if rows[..k].iter().any(|r| r[rhs].sign() * sd <= 0) {
        return Some(Solved::Rejected);
    }
    let cost = &rows[k][rhs];
    let minus_one = T::from_i64(-1);
    let mut max_set = VertexSet::new();
    for v in 0..dm.n() {
        // det * ((D x)_v - c)
        let mut acc = T::from_i64(0).checked_mul_add(cost, &minus_one)?;
        for (j, &sj) in s.iter().enumerate() {
            acc = acc.checked_mul_add(&T::from_i64(i64::from(dm.get(v, sj))), &rows[j][rhs])?;
        }
        match acc.sign() * sd {
            0 => max_set.insert(v),
            x if x > 0 => return Some(Solved::Rejected),
            _ => {}
        }
    }
    let det = det.to_bigint();
    let mut weights = vec![Rational::from_integer(BigInt::from(0)); dm.n()];
    for (j, &sj) in s.iter().enumerate() {
        weights[sj] = Rational::new(rows[j][rhs].to_bigint(), det.clone());
    }
    Some(Solved::Basic { max_set, weights })
}

/// `i128` first, `BigInt` when that overflows.
fn solve_rows_exact(dm: &DistanceMatrix, s: &[usize], m: &[usize]) -> Solved {
    solve_rows::<i128>(dm, s, m)
        .unwrap_or_else(|| solve_rows::<BigInt>(dm, s, m).expect("BigInt never overflows"))
}

fn solve_pair_lists(dm: &DistanceMatrix, s: &[usize], m: &[usize]) -> Option<Measure> {
    match solve_rows_exact(dm, s, m) {
        Solved::Basic { max_set, weights } if max_set.to_vec() == m => {
            Some(Measure::new(weights).expect("pair solution is a probability measure"))
        }
        _ => None,
    }
}

/// The unique measure with support exactly `support` and max-set exactly
/// `max_set`, if there is one and it is isolated (i.e. basic).
pub fn solve_pair(dm: &DistanceMatrix, support: &VertexSet, max_set: &VertexSet) -> Result<Option<Measure>> {
    if support.is_empty() {
        return Err(Error::BadSubsets("support is empty".into()));
    }
    if !support.is_subset(max_set) {
        return Err(Error::BadSubsets("support is not contained in the max-set".into()));
    }
    if let Some(v) = max_set.iter().find(|&v| v >= dm.n()) {
        return Err(Error::VertexOutOfRange { vertex: v, n: dm.n() });
    }
    Ok(solve_pair_lists(dm, &support.to_vec(), &max_set.to_vec()))
}

/// Kernel of the homogeneous pair system, as directions in `R^n`. Each
/// direction sums to zero, vanishes off `pair.support` and keeps `D x`
/// constant on `pair.max_set`. Canonical basis, first nonzero entry positive.
pub fn pair_kernel(dm: &DistanceMatrix, pair: &SupportMaxPair) -> Vec<Vec<Rational>> {
    let s = pair.support.to_vec();
    let m = pair.max_set.to_vec();
    let rows = pair_rows::<BigInt>(dm, &s, &m, false);
    Echelon::new(rows, s.len() + 1)
        .nullspace()
        .into_iter()
        .map(|v| {
            let mut x = vec![Rational::from_integer(BigInt::from(0)); dm.n()];
            for (j, &sj) in s.iter().enumerate() {
                x[sj] = v[j].clone();
            }
            normalize_sign(&mut x);
            x
        })
        .collect()
}

/// True iff no other probability measure shares `mu`'s support and max-set.
pub fn is_basic(dm: &DistanceMatrix, mu: &Measure) -> Result<bool> {
    if !measure::is_balanced(dm, mu)?.balanced {
        return Err(Error::NotBalanced);
    }
    let pair = measure::pair(dm, mu)?;
    Ok(pair_kernel(dm, &pair).is_empty())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BasicEntry {
    pub measure: Measure,
    pub pair: SupportMaxPair,
}

impl Serialize for BasicEntry {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        let mut map = s.serialize_map(Some(3))?;
        map.serialize_entry("max_set", &self.pair.max_set)?;
        map.serialize_entry("mu", &self.measure)?;
        map.serialize_entry("support", &self.pair.support)?;
        map.end()
    }
}

/// Every basic balanced measure of one metric, sorted by
/// `(|S|, S bitmask, M bitmask)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BasicCatalog {
    n: usize,
    entries: Vec<BasicEntry>,
}

impl BasicCatalog {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[BasicEntry] {
        &self.entries
    }

    pub fn measures(&self) -> Vec<Measure> {
        self.entries.iter().map(|e| e.measure.clone()).collect()
    }

    pub fn position(&self, mu: &Measure) -> Option<usize> {
        self.entries.iter().position(|e| &e.measure == mu)
    }
}

impl Serialize for BasicCatalog {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        let mut map = s.serialize_map(Some(3))?;
        map.serialize_entry("basics", &self.entries)?;
        map.serialize_entry("count", &self.entries.len())?;
        map.serialize_entry("n", &self.n)?;
        map.end()
    }
}

pub fn enumerate_basic(dm: &DistanceMatrix) -> Result<BasicCatalog> {
    enumerate_basic_with_limit(dm, DEFAULT_MAX_N)
}

/// Finds every basic measure, one rayon task per support `S`.
///
/// When the system on the rows of `S` alone is nonsingular, its solution
/// already fixes the max-set, so a single solve settles every `M ⊇ S`. Only
/// singular supports need the scan over strict supersets `M`; the worst case
/// is the full `3^n`.
pub fn enumerate_basic_with_limit(dm: &DistanceMatrix, limit: usize) -> Result<BasicCatalog> {
    let n = dm.n();
    if n > limit.min(HARD_MAX_N) {
        return Err(Error::TooLarge {
            n,
            limit: limit.min(HARD_MAX_N),
        });
    }
    let full = (1u32 << n) - 1;
    let found: Vec<(u32, u32, Measure)> = (1u32..=full)
        .into_par_iter()
        .flat_map_iter(|s_mask| {
            let s = bits(s_mask);
            let mut out = Vec::new();
            let mut keep = |m_mask: u32, max_set: VertexSet, weights: Vec<Rational>| {
                if max_set == VertexSet::from_mask(u64::from(m_mask)) {
                    out.push((s_mask, m_mask, Measure::new(weights).expect("probability measure")));
                }
            };
            match solve_rows_exact(dm, &s, &s) {
                Solved::Basic { max_set, weights } => {
                    let m_mask = max_set.low_mask() as u32;
                    keep(m_mask, max_set, weights);
                }
                Solved::Singular => {
                    let rest = full & !s_mask;
                    let mut extra = rest;
                    while extra != 0 {
                        let m_mask = s_mask | extra;
                        if let Solved::Basic { max_set, weights } = solve_rows_exact(dm, &s, &bits(m_mask)) {
                            keep(m_mask, max_set, weights);
                        }
                        extra = (extra - 1) & rest;
                    }
                }
                Solved::Rejected => {}
            }
            out.into_iter()
        })
        .collect();

    let mut seen = HashSet::new();
    let mut entries: Vec<BasicEntry> = found
        .into_iter()
        .filter_map(|(s_mask, m_mask, mu)| {
            let pair = measure::pair(dm, &mu).expect("dimensions match");
            let scanned = SupportMaxPair {
                support: VertexSet::from_mask(u64::from(s_mask)),
                max_set: VertexSet::from_mask(u64::from(m_mask)),
            };
            (pair == scanned).then_some(BasicEntry { measure: mu, pair })
        })
        .collect();
    entries.sort_by(|a, b| a.pair.canonical_cmp(&b.pair));
    entries.retain(|e| seen.insert(e.measure.clone()));
    Ok(BasicCatalog { n, entries })
}

fn bits(mask: u32) -> Vec<usize> {
    (0..32).filter(|&i| mask & (1 << i) != 0).collect()
}

/// Basic measures as vertices, compatible pairs as edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompatibilityGraph {
    adjacency: Vec<Vec<bool>>,
}

impl CompatibilityGraph {
    pub fn len(&self) -> usize {
        self.adjacency.len()
    }

    pub fn is_empty(&self) -> bool {
        self.adjacency.is_empty()
    }

    pub fn adjacent(&self, i: usize, j: usize) -> bool {
        self.adjacency[i][j]
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        (0..n)
            .flat_map(|i| ((i + 1)..n).map(move |j| (i, j)))
            .filter(|&(i, j)| self.adjacency[i][j])
            .collect()
    }

    pub fn neighbors(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.len()).filter(move |&j| self.adjacency[i][j])
    }

    /// DOT rendering; each node is labelled with its measure's support.
    pub fn to_dot(&self, catalog: &BasicCatalog) -> String {
        let mut out = String::from("graph compatibility {\n");
        for (i, e) in catalog.entries().iter().enumerate() {
            let support: Vec<String> = e.pair.support.iter().map(|v| v.to_string()).collect();
            let mu: Vec<String> = e.measure.to_strings();
            let _ = writeln!(
                out,
                "  {i} [label=\"{{{}}}\", measure=\"{}\"];",
                support.join(","),
                mu.join(" ")
            );
        }
        for (i, j) in self.edges() {
            let _ = writeln!(out, "  {i} -- {j};");
        }
        out.push_str("}\n");
        out
    }
}

pub fn compatibility_graph(catalog: &BasicCatalog) -> CompatibilityGraph {
    let entries = catalog.entries();
    let k = entries.len();
    let adjacency = (0..k)
        .map(|i| {
            (0..k)
                .map(|j| i != j && pairs_compatible(&entries[i].pair, &entries[j].pair))
                .collect()
        })
        .collect();
    CompatibilityGraph { adjacency }
}

/// All cliques with at most `upto` vertices, by size and then
/// lexicographically.
pub fn compatible_cliques(cg: &CompatibilityGraph, upto: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut layer: Vec<Vec<usize>> = (0..cg.len()).map(|i| vec![i]).collect();
    let mut size = 1;
    while !layer.is_empty() && size <= upto {
        let next: Vec<Vec<usize>> = layer
            .iter()
            .flat_map(|c| {
                let last = *c.last().expect("nonempty clique");
                ((last + 1)..cg.len())
                    .filter(|&v| c.iter().all(|&u| cg.adjacent(u, v)))
                    .map(|v| {
                        let mut d = c.clone();
                        d.push(v);
                        d
                    })
                    .collect::<Vec<_>>()
            })
            .collect();
        out.append(&mut layer);
        layer = next;
        size += 1;
    }
    out
}

/// Maximal cliques (Bron-Kerbosch with pivoting), each sorted, in
/// lexicographic order.
pub fn maximal_cliques(cg: &CompatibilityGraph) -> Vec<Vec<usize>> {
    fn expand(cg: &CompatibilityGraph, r: &mut Vec<usize>, p: Vec<usize>, x: Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if p.is_empty() && x.is_empty() {
            let mut c = r.clone();
            c.sort_unstable();
            out.push(c);
            return;
        }
        let pivot = *p
            .iter()
            .chain(&x)
            .max_by_key(|&&u| p.iter().filter(|&&v| cg.adjacent(u, v)).count())
            .expect("p or x nonempty");
        let candidates: Vec<usize> = p.iter().copied().filter(|&v| !cg.adjacent(pivot, v)).collect();
        let (mut p, mut x) = (p, x);
        for v in candidates {
            r.push(v);
            let np = p.iter().copied().filter(|&u| cg.adjacent(v, u)).collect();
            let nx = x.iter().copied().filter(|&u| cg.adjacent(v, u)).collect();
            expand(cg, r, np, nx, out);
            r.pop();
            p.retain(|&u| u != v);
            x.push(v);
        }
    }
    let mut out = Vec::new();
    expand(cg, &mut Vec::new(), (0..cg.len()).collect(), Vec::new(), &mut out);
    out.sort();
    out
}

pub fn count_components(cg: &CompatibilityGraph) -> usize {
    let mut seen = vec![false; cg.len()];
    let mut components = 0;
    for start in 0..cg.len() {
        if seen[start] {
            continue;
        }
        components += 1;
        let mut stack = vec![start];
        seen[start] = true;
        while let Some(u) = stack.pop() {
            for v in cg.neighbors(u) {
                if !seen[v] {
                    seen[v] = true;
                    stack.push(v);
                }
            }
        }
    }
    components
}

/// Counting bounds for a catalog on `n` vertices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundsReport {
    pub n: usize,
    pub count: usize,
    /// `2^(2n) - 1`, as a decimal string.
    pub upper_bound: String,
    pub within_upper_bound: bool,
    /// `2^floor(n/3) - 1`.
    pub lower_bound: String,
    /// For join-family graphs: the expected count `2^k - 1`.
    pub join_family_expected: Option<usize>,
    pub join_family_matches: Option<bool>,
}

impl BoundsReport {
    pub fn holds(&self) -> bool {
        self.within_upper_bound && self.join_family_matches.unwrap_or(true)
    }
}

/// `triples` is the number `k` of three-vertex blocks when the catalog comes
/// from a join-family graph.
pub fn check_bounds(catalog: &BasicCatalog, triples: Option<usize>) -> BoundsReport {
    let n = catalog.n();
    let count = catalog.len();
    let upper: BigInt = (BigInt::from(1) << (2 * n)) - 1;
    let lower: BigInt = (BigInt::from(1) << (n / 3)) - 1;
    let expected = triples.map(|k| (1usize << k) - 1);
    BoundsReport {
        n,
        count,
        within_upper_bound: BigInt::from(count) <= upper,
        upper_bound: upper.to_string(),
        lower_bound: lower.to_string(),
        join_family_expected: expected,
        join_family_matches: expected.map(|e| e == count),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{generators, SimpleGraph};
    use crate::rational::rat;

    fn dm(g: SimpleGraph) -> DistanceMatrix {
        g.into_graph().unwrap().distances().clone()
    }

    fn set(v: &[usize]) -> VertexSet {
        v.iter().copied().collect()
    }

    #[test]
    fn solve_pair_examples() {
        let p4 = dm(generators::path(4).unwrap());
        let mu = solve_pair(&p4, &set(&[0, 3]), &set(&[0, 1, 2, 3])).unwrap().unwrap();
        assert_eq!(mu, Measure::from_fractions(&["1/2", "0", "0", "1/2"]).unwrap());
        assert_eq!(solve_pair(&p4, &set(&[0]), &set(&[0, 1, 2, 3])).unwrap(), None);
        let k3 = dm(generators::complete(3).unwrap());
        assert_eq!(
            solve_pair(&k3, &set(&[0, 1, 2]), &set(&[0, 1, 2])).unwrap(),
            Some(Measure::uniform(3))
        );
        assert!(matches!(
            solve_pair(&p4, &set(&[0, 1]), &set(&[0])),
            Err(Error::BadSubsets(_))
        ));
        assert!(matches!(solve_pair(&p4, &set(&[]), &set(&[0])), Err(Error::BadSubsets(_))));
    }

    #[test]
    fn c4_catalog() {
        let c4 = dm(generators::cycle(4).unwrap());
        let cat = enumerate_basic(&c4).unwrap();
        assert_eq!(
            cat.measures(),
            vec![
                Measure::from_fractions(&["1/2", "0", "1/2", "0"]).unwrap(),
                Measure::from_fractions(&["0", "1/2", "0", "1/2"]).unwrap(),
            ]
        );
        let cg = compatibility_graph(&cat);
        assert_eq!(cg.edges(), vec![(0, 1)]);
        assert_eq!(count_components(&cg), 1);
    }

    #[test]
    fn is_basic_examples() {
        let c4 = dm(generators::cycle(4).unwrap());
        assert!(is_basic(&c4, &Measure::from_fractions(&["1/2", "0", "1/2", "0"]).unwrap()).unwrap());
        assert!(!is_basic(&c4, &Measure::uniform(4)).unwrap());
        let kernel = pair_kernel(&c4, &measure::pair(&c4, &Measure::uniform(4)).unwrap());
        assert_eq!(kernel, vec![vec![rat(1, 1), rat(-1, 1), rat(1, 1), rat(-1, 1)]]);
        let k33 = dm(SimpleGraph::empty(3).join(&SimpleGraph::empty(3)));
        assert!(is_basic(&k33, &Measure::uniform(6)).unwrap());
        assert_eq!(is_basic(&c4, &Measure::point_mass(4, 0)), Err(Error::NotBalanced));
    }

    #[test]
    fn path_catalogs_have_one_entry() {
        for n in 2..=8 {
            let p = dm(generators::path(n).unwrap());
            let cat = enumerate_basic(&p).unwrap();
            assert_eq!(cat.len(), 1, "P{n}");
            let mut w = vec![rat(0, 1); n];
            w[0] = rat(1, 2);
            w[n - 1] = rat(1, 2);
            assert_eq!(cat.entries()[0].measure.weights(), &w[..]);
        }
    }

    #[test]
    fn enumeration_limit() {
        let p = dm(generators::path(5).unwrap());
        assert_eq!(
            enumerate_basic_with_limit(&p, 4),
            Err(Error::TooLarge { n: 5, limit: 4 })
        );
    }

    #[test]
    fn cliques_and_components() {
        let c8 = dm(generators::cycle(8).unwrap());
        let cat = enumerate_basic(&c8).unwrap();
        let cg = compatibility_graph(&cat);
        let antipodal: Vec<usize> = (0..4)
            .map(|i| {
                let mu = Measure::uniform_on(8, &set(&[i, i + 4])).unwrap();
                cat.position(&mu).expect("antipodal measure is basic")
            })
            .collect();
        for &a in &antipodal {
            for &b in &antipodal {
                assert_eq!(cg.adjacent(a, b), a != b);
            }
        }
        let cliques = compatible_cliques(&cg, 3);
        let mut triple = vec![antipodal[0], antipodal[2], antipodal[3]];
        triple.sort_unstable();
        assert!(cliques.contains(&triple));
        for c in &cliques {
            let ms: Vec<Measure> = c.iter().map(|&i| cat.entries()[i].measure.clone()).collect();
            assert!(measure::is_compatible(&c8, &ms).unwrap());
        }
        let maximal = maximal_cliques(&cg);
        let mut four = antipodal.clone();
        four.sort_unstable();
        assert!(maximal.iter().any(|c| four.iter().all(|v| c.contains(v))));
    }

    #[test]
    fn edgeless_graph_cliques() {
        let cg = CompatibilityGraph {
            adjacency: vec![vec![false; 3]; 3],
        };
        assert_eq!(compatible_cliques(&cg, 4), vec![vec![0], vec![1], vec![2]]);
        assert_eq!(count_components(&cg), 3);
        assert_eq!(maximal_cliques(&cg), vec![vec![0], vec![1], vec![2]]);
    }

    #[test]
    fn bounds_report() {
        let k33 = dm(SimpleGraph::empty(3).join(&SimpleGraph::empty(3)));
        let cat = enumerate_basic(&k33).unwrap();
        let report = check_bounds(&cat, Some(2));
        assert_eq!(report.count, 3);
        assert_eq!(report.upper_bound, "4095");
        assert_eq!(report.lower_bound, "3");
        assert!(report.holds());
    }
}
