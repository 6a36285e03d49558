//! Probability measures on the vertices of a graph and the quantities that
//! decide balancedness.
//!
//! For a measure `mu` the transport cost is `T(v) = sum_u d(u, v) mu(u)`, i.e.
//! the vector `D mu`. The measure is balanced when every vertex carrying mass
//! is a maximiser of `T`: `spt mu` is contained in the max-set `M_mu`.
//!
//! All functions take a [`DistanceMatrix`] so they apply equally to BFS
//! metrics of graphs and to explicitly given integer metrics.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::graph::DistanceMatrix;
use crate::rational::{parse_rational, Rational};
use crate::vertex_set::VertexSet;

/// Nonnegative exact weights summing to one.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Measure {
    weights: Vec<Rational>,
}

impl Measure {
    pub fn new(weights: Vec<Rational>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::NotAMeasure("no vertices".into()));
        }
        if let Some((i, w)) = weights.iter().enumerate().find(|(_, w)| w.is_negative()) {
            return Err(Error::NotAMeasure(format!("weight {w} at vertex {i} is negative")));
        }
        let total: Rational = weights.iter().sum();
        if !total.is_one() {
            return Err(Error::NotAMeasure(format!("weights sum to {total}, not 1")));
        }
        Ok(Self { weights })
    }

    pub fn from_fractions(fractions: &[&str]) -> Result<Self> {
        Self::new(
            fractions
                .iter()
                .map(|f| parse_rational(f))
                .collect::<Result<_>>()?,
        )
    }

    pub fn point_mass(n: usize, v: usize) -> Self {
        let mut weights = vec![Rational::zero(); n];
        weights[v] = Rational::one();
        Self { weights }
    }

    pub fn uniform(n: usize) -> Self {
        Self::uniform_on(n, &VertexSet::full(n)).expect("n > 0")
    }

    /// Equal mass on each vertex of `set`.
    pub fn uniform_on(n: usize, set: &VertexSet) -> Result<Self> {
        let k = set.len();
        if k == 0 {
            return Err(Error::NotAMeasure("empty support".into()));
        }
        if let Some(v) = set.iter().find(|&v| v >= n) {
            return Err(Error::VertexOutOfRange { vertex: v, n });
        }
        let w = Rational::new(BigInt::one(), BigInt::from(k));
        let weights = (0..n)
            .map(|v| if set.contains(v) { w.clone() } else { Rational::zero() })
            .collect();
        Ok(Self { weights })
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn weights(&self) -> &[Rational] {
        &self.weights
    }

    pub fn weight(&self, v: usize) -> &Rational {
        &self.weights[v]
    }

    pub fn into_weights(self) -> Vec<Rational> {
        self.weights
    }

    /// Zero-extends into a larger vertex set at the given offset.
    pub fn embed(&self, n: usize, offset: usize) -> Self {
        let mut weights = vec![Rational::zero(); n];
        weights[offset..offset + self.len()].clone_from_slice(&self.weights);
        Self { weights }
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.weights.iter().map(ToString::to_string).collect()
    }
}

impl fmt::Debug for Measure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.to_strings().join(", "))
    }
}

impl Serialize for Measure {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.weights.iter().map(ToString::to_string))
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum FractionToken {
    Text(String),
    Integer(i64),
}

impl<'de> Deserialize<'de> for Measure {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let tokens = Vec::<FractionToken>::deserialize(d)?;
        let weights = tokens
            .into_iter()
            .map(|t| match t {
                FractionToken::Text(s) => parse_rational(&s),
                FractionToken::Integer(i) => Ok(Rational::from_integer(i.into())),
            })
            .collect::<Result<Vec<_>>>()
            .map_err(serde::de::Error::custom)?;
        Measure::new(weights).map_err(serde::de::Error::custom)
    }
}

/// Parses a JSON array of fraction strings such as `["1/2","0","1/2","0"]`.
pub fn parse_measure(text: &str) -> Result<Measure> {
    serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
}

/// `T_mu(v)` for every vertex `v`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CostVector {
    costs: Vec<Rational>,
}

impl CostVector {
    pub fn costs(&self) -> &[Rational] {
        &self.costs
    }

    pub fn get(&self, v: usize) -> &Rational {
        &self.costs[v]
    }

    pub fn max(&self) -> &Rational {
        self.costs.iter().max().expect("nonempty")
    }

    pub fn min(&self) -> &Rational {
        self.costs.iter().min().expect("nonempty")
    }

    pub fn argmax(&self) -> VertexSet {
        let max = self.max();
        (0..self.costs.len()).filter(|&v| &self.costs[v] == max).collect()
    }
}

impl Serialize for CostVector {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.costs.iter().map(ToString::to_string))
    }
}

pub(crate) fn check_dims(dm: &DistanceMatrix, len: usize) -> Result<()> {
    if dm.n() != len {
        return Err(Error::DimensionMismatch {
            expected: dm.n(),
            found: len,
        });
    }
    Ok(())
}

/// `D w` for an arbitrary (possibly signed) weight vector.
pub fn apply_distances(dm: &DistanceMatrix, weights: &[Rational]) -> Vec<Rational> {
    (0..dm.n())
        .map(|v| {
            dm.row(v)
                .iter()
                .zip(weights)
                .filter(|(&d, w)| d != 0 && !w.is_zero())
                .map(|(&d, w)| w * BigInt::from(d))
                .sum()
        })
        .collect()
}

pub fn transport_cost(dm: &DistanceMatrix, mu: &Measure) -> Result<CostVector> {
    check_dims(dm, mu.len())?;
    Ok(CostVector {
        costs: apply_distances(dm, mu.weights()),
    })
}

pub fn support(mu: &Measure) -> VertexSet {
    support_of(mu.weights())
}

pub(crate) fn support_of(weights: &[Rational]) -> VertexSet {
    (0..weights.len()).filter(|&v| weights[v].is_positive()).collect()
}

pub fn max_set(dm: &DistanceMatrix, mu: &Measure) -> Result<VertexSet> {
    Ok(transport_cost(dm, mu)?.argmax())
}

/// `(spt mu, M_mu)`.
pub fn pair(dm: &DistanceMatrix, mu: &Measure) -> Result<SupportMaxPair> {
    Ok(SupportMaxPair {
        support: support(mu),
        max_set: max_set(dm, mu)?,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub vertex: usize,
    #[serde(serialize_with = "crate::rational::serialize_fraction")]
    pub deficit: Rational,
}

/// Outcome of a balancedness test. Every support vertex whose cost falls
/// short of the maximum is listed with its deficit.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BalanceCertificate {
    pub balanced: bool,
    #[serde(serialize_with = "crate::rational::serialize_fraction")]
    pub max_cost: Rational,
    pub violations: Vec<Violation>,
}

pub fn is_balanced(dm: &DistanceMatrix, mu: &Measure) -> Result<BalanceCertificate> {
    let costs = transport_cost(dm, mu)?;
    let max = costs.max().clone();
    let violations: Vec<Violation> = support(mu)
        .iter()
        .filter(|&v| costs.get(v) < &max)
        .map(|v| Violation {
            vertex: v,
            deficit: &max - costs.get(v),
        })
        .collect();
    Ok(BalanceCertificate {
        balanced: violations.is_empty(),
        max_cost: max,
        violations,
    })
}

pub fn balanced(dm: &DistanceMatrix, mu: &Measure) -> bool {
    is_balanced(dm, mu).is_ok_and(|c| c.balanced)
}

/// `<mu, D mu>`.
pub fn energy(dm: &DistanceMatrix, mu: &Measure) -> Result<Rational> {
    let costs = transport_cost(dm, mu)?;
    Ok(mu.weights().iter().zip(costs.costs()).map(|(w, c)| w * c).sum())
}

/// Additive slack: every support vertex has cost within `eps` of the maximum.
pub fn epsilon_balanced(dm: &DistanceMatrix, mu: &Measure, eps: &Rational) -> Result<bool> {
    let cert = is_balanced(dm, mu)?;
    Ok(cert.violations.iter().all(|v| &v.deficit <= eps))
}

/// Support and max-set of a measure.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SupportMaxPair {
    pub support: VertexSet,
    pub max_set: VertexSet,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PairOrder {
    Less,
    Equal,
    Greater,
    Incomparable,
}

impl PairOrder {
    pub fn as_str(self) -> &'static str {
        match self {
            PairOrder::Less => "less",
            PairOrder::Equal => "equal",
            PairOrder::Greater => "greater",
            PairOrder::Incomparable => "incomparable",
        }
    }
}

impl SupportMaxPair {
    /// `self <= other` in the extremality order: `other` has a smaller (or
    /// equal) support and a larger (or equal) max-set. Basic measures are
    /// exactly the balanced measures whose pair is maximal in this order.
    pub fn le(&self, other: &Self) -> bool {
        other.support.is_subset(&self.support) && other.max_set.is_superset(&self.max_set)
    }

    pub fn lt(&self, other: &Self) -> bool {
        self.le(other) && self != other
    }

    pub fn compare(&self, other: &Self) -> PairOrder {
        match (self.le(other), other.le(self)) {
            (true, true) => PairOrder::Equal,
            (true, false) => PairOrder::Less,
            (false, true) => PairOrder::Greater,
            (false, false) => PairOrder::Incomparable,
        }
    }

    /// Catalog order: `(|S|, S as bitmask, M as bitmask)`.
    pub fn canonical_cmp(&self, other: &Self) -> Ordering {
        self.support
            .len()
            .cmp(&other.support.len())
            .then_with(|| self.support.cmp_as_mask(&other.support))
            .then_with(|| self.max_set.cmp_as_mask(&other.max_set))
    }
}

pub fn poset_compare(p: &SupportMaxPair, q: &SupportMaxPair) -> PairOrder {
    p.compare(q)
}

/// Union of supports contained in the intersection of max-sets. Only defined
/// here for balanced inputs.
pub fn is_compatible(dm: &DistanceMatrix, measures: &[Measure]) -> Result<bool> {
    let mut union = VertexSet::new();
    let mut intersection: Option<VertexSet> = None;
    for mu in measures {
        let cert = is_balanced(dm, mu)?;
        if !cert.balanced {
            return Err(Error::NotBalanced);
        }
        let p = pair(dm, mu)?;
        union = union.union(&p.support);
        intersection = Some(match intersection {
            Some(m) => m.intersection(&p.max_set),
            None => p.max_set,
        });
    }
    Ok(intersection.is_none_or(|m| union.is_subset(&m)))
}

/// Compatibility of two pairs, without recomputing costs.
pub fn pairs_compatible(p: &SupportMaxPair, q: &SupportMaxPair) -> bool {
    p.support.union(&q.support).is_subset(&p.max_set.intersection(&q.max_set))
}

pub fn convex_combination(measures: &[Measure], coeffs: &[Rational]) -> Result<Measure> {
    if measures.is_empty() || measures.len() != coeffs.len() {
        return Err(Error::BadCoefficients(format!(
            "{} measures but {} coefficients",
            measures.len(),
            coeffs.len()
        )));
    }
    if let Some(c) = coeffs.iter().find(|c| c.is_negative()) {
        return Err(Error::BadCoefficients(format!("negative coefficient {c}")));
    }
    let total: Rational = coeffs.iter().sum();
    if !total.is_one() {
        return Err(Error::BadCoefficients(format!("coefficients sum to {total}")));
    }
    let n = measures[0].len();
    if let Some(m) = measures.iter().find(|m| m.len() != n) {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: m.len(),
        });
    }
    let mut weights = vec![Rational::zero(); n];
    for (mu, c) in measures.iter().zip(coeffs) {
        if c.is_zero() {
            continue;
        }
        for (w, x) in weights.iter_mut().zip(mu.weights()) {
            *w += c * x;
        }
    }
    Measure::new(weights)
}

/// Result of the greedy farthest-point construction.
#[derive(Debug, Clone)]
pub struct GreedyRun {
    pub seed: Vec<usize>,
    /// Vertex appended at each step.
    pub picks: Vec<usize>,
    counts: Vec<u64>,
    history: Vec<Vec<u64>>,
}

impl GreedyRun {
    /// Empirical measure after `step` picks (`0` = seed only).
    pub fn empirical(&self, step: usize) -> Measure {
        empirical_measure(&self.history[step])
    }

    pub fn last(&self) -> Measure {
        empirical_measure(&self.counts)
    }

    pub fn steps(&self) -> usize {
        self.picks.len()
    }

    /// Multiplicity of each vertex after the last step, seed included.
    pub fn counts(&self) -> &[u64] {
        &self.counts
    }
}

fn empirical_measure(counts: &[u64]) -> Measure {
    let total: u64 = counts.iter().sum();
    let total = BigInt::from(total);
    Measure {
        weights: counts
            .iter()
            .map(|&c| Rational::new(BigInt::from(c), total.clone()))
            .collect(),
    }
}

/// Repeatedly appends the vertex maximising the summed distance to the
/// current multiset, ties going to the lowest index.
pub fn greedy_sequence(dm: &DistanceMatrix, seed: &[usize], steps: usize) -> Result<GreedyRun> {
    let n = dm.n();
    if seed.is_empty() {
        return Err(Error::BadParameter("greedy seed must be nonempty".into()));
    }
    if let Some(&v) = seed.iter().find(|&&v| v >= n) {
        return Err(Error::VertexOutOfRange { vertex: v, n });
    }
    let mut counts = vec![0u64; n];
    let mut sums = vec![0u64; n];
    let add = |v: usize, counts: &mut Vec<u64>, sums: &mut Vec<u64>| {
        counts[v] += 1;
        for (u, s) in sums.iter_mut().enumerate() {
            *s += u64::from(dm.get(u, v));
        }
    };
    for &v in seed {
        add(v, &mut counts, &mut sums);
    }
    let mut history = vec![counts.clone()];
    let mut picks = Vec::with_capacity(steps);
    for _ in 0..steps {
        let best = (0..n)
            .max_by(|&a, &b| sums[a].cmp(&sums[b]).then(b.cmp(&a)))
            .expect("n > 0");
        add(best, &mut counts, &mut sums);
        picks.push(best);
        history.push(counts.clone());
    }
    Ok(GreedyRun {
        seed: seed.to_vec(),
        picks,
        counts,
        history,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::generators;
    use crate::rational::{int, rat};

    fn dm(g: crate::graph::SimpleGraph) -> DistanceMatrix {
        g.into_graph().unwrap().distances().clone()
    }

    fn m(fr: &[&str]) -> Measure {
        Measure::from_fractions(fr).unwrap()
    }

    fn k33() -> DistanceMatrix {
        dm(crate::graph::SimpleGraph::empty(3).join(&crate::graph::SimpleGraph::empty(3)))
    }

    #[test]
    fn measure_validation() {
        assert!(Measure::from_fractions(&["1/2", "1/3"]).is_err());
        assert!(Measure::from_fractions(&["3/2", "-1/2"]).is_err());
        assert!(parse_measure(r#"["1/2","0","1/2","0"]"#).is_ok());
        assert!(parse_measure(r#"["1/2",0,"1/2",0]"#).is_ok());
        assert!(parse_measure(r#"["1/2","1/0"]"#).is_err());
        let mu = m(&["1/2", "0", "1/2", "0"]);
        assert_eq!(serde_json::to_string(&mu).unwrap(), r#"["1/2","0","1/2","0"]"#);
    }

    #[test]
    fn transport_cost_examples() {
        let c4 = dm(generators::cycle(4).unwrap());
        let t = transport_cost(&c4, &m(&["1/2", "0", "1/2", "0"])).unwrap();
        assert_eq!(t.costs(), &[int(1), int(1), int(1), int(1)]);
        let p4 = dm(generators::path(4).unwrap());
        let t = transport_cost(&p4, &m(&["1/2", "0", "0", "1/2"])).unwrap();
        assert!(t.costs().iter().all(|c| c == &rat(3, 2)));
        for v in 0..4 {
            let t = transport_cost(&p4, &Measure::point_mass(4, v)).unwrap();
            let column: Vec<Rational> = (0..4).map(|u| int(p4.get(u, v) as i64)).collect();
            assert_eq!(t.costs(), &column[..]);
        }
        assert!(matches!(
            transport_cost(&p4, &Measure::uniform(3)),
            Err(Error::DimensionMismatch { expected: 4, found: 3 })
        ));
    }

    #[test]
    fn support_and_max_set() {
        assert_eq!(support(&m(&["1/2", "0", "1/2", "0"])).to_vec(), vec![0, 2]);
        assert_eq!(support(&Measure::uniform(5)).len(), 5);
        assert_eq!(support(&Measure::point_mass(5, 3)).to_vec(), vec![3]);
        let c4 = dm(generators::cycle(4).unwrap());
        assert_eq!(max_set(&c4, &m(&["1/2", "0", "1/2", "0"])).unwrap().len(), 4);
        let part1 = m(&["1/3", "1/3", "1/3", "0", "0", "0"]);
        let k = k33();
        assert_eq!(max_set(&k, &part1).unwrap().to_vec(), vec![0, 1, 2]);
        let costs = transport_cost(&k, &part1).unwrap();
        assert_eq!(costs.get(0), &rat(4, 3));
        assert_eq!(costs.get(3), &int(1));
    }

    #[test]
    fn balancedness() {
        let p4 = dm(generators::path(4).unwrap());
        assert!(is_balanced(&p4, &m(&["1/2", "0", "0", "1/2"])).unwrap().balanced);
        let cert = is_balanced(&p4, &Measure::point_mass(4, 1)).unwrap();
        assert!(!cert.balanced);
        assert_eq!(cert.violations, vec![Violation { vertex: 1, deficit: int(2) }]);
        for n in 2..7 {
            let kn = dm(generators::complete(n).unwrap());
            assert!(balanced(&kn, &Measure::uniform(n)));
        }
    }

    #[test]
    fn energy_examples() {
        let c4 = dm(generators::cycle(4).unwrap());
        assert_eq!(energy(&c4, &Measure::point_mass(4, 2)).unwrap(), int(0));
        let mu = m(&["1/2", "0", "1/2", "0"]);
        assert_eq!(energy(&c4, &mu).unwrap(), int(1));
        let t = transport_cost(&c4, &mu).unwrap();
        assert_eq!(&energy(&c4, &mu).unwrap(), t.max());
    }

    #[test]
    fn pair_order() {
        let p = |s: &[usize], mm: &[usize]| SupportMaxPair {
            support: s.iter().copied().collect(),
            max_set: mm.iter().copied().collect(),
        };
        // Larger support and larger max-set is lower in the order.
        assert_eq!(poset_compare(&p(&[0, 1], &[0, 1]), &p(&[0], &[0, 1, 2])), PairOrder::Less);
        assert_eq!(poset_compare(&p(&[0], &[0, 1, 2]), &p(&[0, 1], &[0, 1])), PairOrder::Greater);
        assert_eq!(poset_compare(&p(&[0], &[0, 1]), &p(&[0], &[0, 1])), PairOrder::Equal);
        assert_eq!(
            poset_compare(&p(&[0], &[0, 1]), &p(&[1], &[0, 1])),
            PairOrder::Incomparable
        );
    }

    #[test]
    fn compatibility() {
        let c8 = dm(generators::cycle(8).unwrap());
        let mu = m(&["1/2", "0", "0", "0", "1/2", "0", "0", "0"]);
        let nu = m(&["0", "0", "1/2", "0", "0", "0", "1/2", "0"]);
        let rho = m(&["0", "0", "0", "1/2", "0", "0", "0", "1/2"]);
        assert!(is_compatible(&c8, &[mu.clone(), nu.clone(), rho]).unwrap());
        assert!(is_compatible(&c8, &[mu]).unwrap());
        let k = k33();
        let a = m(&["1/3", "1/3", "1/3", "0", "0", "0"]);
        let b = m(&["0", "0", "0", "1/3", "1/3", "1/3"]);
        assert!(!is_compatible(&k, &[a, b]).unwrap());
        let p4 = dm(generators::path(4).unwrap());
        assert_eq!(
            is_compatible(&p4, &[Measure::point_mass(4, 1)]),
            Err(Error::NotBalanced)
        );
    }

    #[test]
    fn convex_combinations() {
        let a = m(&["1/3", "1/3", "1/3", "0", "0", "0"]);
        let b = m(&["0", "0", "0", "1/3", "1/3", "1/3"]);
        let u = convex_combination(&[a.clone(), b.clone()], &[rat(1, 2), rat(1, 2)]).unwrap();
        assert_eq!(u, Measure::uniform(6));
        assert_eq!(convex_combination(&[a.clone(), b.clone()], &[int(1), int(0)]).unwrap(), a);
        assert!(convex_combination(&[a.clone(), b.clone()], &[rat(1, 2), rat(1, 3)]).is_err());
        assert!(convex_combination(&[a, b], &[rat(3, 2), rat(-1, 2)]).is_err());

        let c8 = dm(generators::cycle(8).unwrap());
        let mu = m(&["1/2", "0", "0", "0", "1/2", "0", "0", "0"]);
        let nu = m(&["0", "0", "1/2", "0", "0", "0", "1/2", "0"]);
        let half = convex_combination(&[mu, nu], &[rat(1, 2), rat(1, 2)]).unwrap();
        assert_eq!(half, m(&["1/4", "0", "1/4", "0", "1/4", "0", "1/4", "0"]));
        assert!(balanced(&c8, &half));
    }

    #[test]
    fn greedy_on_p4_alternates_between_endpoints() {
        let p4 = dm(generators::path(4).unwrap());
        let run = greedy_sequence(&p4, &[0], 6).unwrap();
        assert_eq!(run.picks, vec![3, 0, 3, 0, 3, 0]);
        assert_eq!(run.empirical(0), Measure::point_mass(4, 0));
        assert_eq!(run.empirical(1), m(&["1/2", "0", "0", "1/2"]));
        assert_eq!(run.empirical(2), m(&["2/3", "0", "0", "1/3"]));
        assert!(!epsilon_balanced(&p4, &run.empirical(2), &int(0)).unwrap());
        assert!(epsilon_balanced(&p4, &run.empirical(2), &int(3)).unwrap());
        assert_eq!(greedy_sequence(&p4, &[0], 0).unwrap().last(), Measure::point_mass(4, 0));
        assert!(greedy_sequence(&p4, &[], 3).is_err());
    }

    #[test]
    fn greedy_on_k3_round_robins() {
        let k3 = dm(generators::complete(3).unwrap());
        let run = greedy_sequence(&k3, &[0], 299).unwrap();
        assert_eq!(&run.picks[..4], &[1, 2, 0, 1]);
        assert_eq!(run.last(), Measure::uniform(3));
    }
}
