//! Writing a balanced measure as a convex combination of compatible basic
//! measures, and testing convex-hull membership exactly.
//!
//! The construction alternates two moves. A non-basic measure has a nonzero
//! kernel direction for its pair system, so a small step along it gives a
//! second measure with the same pair; extrapolating from that measure past
//! the original raises the pair strictly. Repeating reaches a basic measure
//! (`climb_to_basic`). Extrapolating from that basic measure past the target
//! then splits the target into the basic measure and a strictly higher
//! remainder, and the remainder is decomposed in turn.

use num_traits::{One, Signed};
use rayon::prelude::*;
use serde::Serialize;

use crate::enumeration::{self, compatibility_graph, maximal_cliques, pair_kernel, BasicCatalog};
use crate::error::{Error, Result};
use crate::extrapolation::{extrapolate_right, LineFamily};
use crate::graph::DistanceMatrix;
use crate::linalg;
use crate::lp::{self, Feasibility};
use crate::measure::{self, apply_distances, Measure};
use crate::rational::{serialize_fraction, Rational};

fn ensure_balanced(dm: &DistanceMatrix, mu: &Measure) -> Result<()> {
    if measure::is_balanced(dm, mu)?.balanced {
        Ok(())
    } else {
        Err(Error::NotBalanced)
    }
}

/// A measure other than `mu` with the same support and max-set, or `None`
/// exactly when `mu` is basic.
pub fn find_kernel_witness(dm: &DistanceMatrix, mu: &Measure) -> Result<Option<Measure>> {
    ensure_balanced(dm, mu)?;
    let pair = measure::pair(dm, mu)?;
    let Some(x) = pair_kernel(dm, &pair).into_iter().next() else {
        return Ok(None);
    };

    // Each strict condition `value + t * rate > 0` breaks at `value / -rate`.
    let mut thresholds = Vec::new();
    for v in pair.support.iter() {
        if x[v].is_negative() {
            thresholds.push(mu.weight(v) / -&x[v]);
        }
    }
    let cost = measure::transport_cost(dm, mu)?;
    let drift = apply_distances(dm, &x);
    let top = pair.max_set.iter().next().expect("max-set is nonempty");
    for k in (0..dm.n()).filter(|&k| !pair.max_set.contains(k)) {
        let rate = &drift[k] - &drift[top];
        if rate.is_positive() {
            thresholds.push((cost.max() - cost.get(k)) / rate);
        }
    }
    let t = thresholds.into_iter().min().expect("a kernel direction sums to zero") / Rational::from_integer(2.into());
    let weights = mu.weights().iter().zip(&x).map(|(m, d)| m + &t * d).collect();
    Ok(Some(Measure::new(weights)?))
}

/// One extrapolation step of a climb: from `witness` past `from` to `to`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClimbStep {
    pub from: Measure,
    pub witness: Measure,
    #[serde(serialize_with = "serialize_fraction")]
    pub r: Rational,
    pub to: Measure,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Climb {
    pub basic: Measure,
    pub chain: Vec<ClimbStep>,
}

/// A basic measure whose pair dominates `rho`'s, reached by extrapolation.
pub fn climb_to_basic(dm: &DistanceMatrix, rho: &Measure) -> Result<Climb> {
    let mut current = rho.clone();
    let mut chain = Vec::new();
    while let Some(witness) = find_kernel_witness(dm, &current)? {
        let fam = LineFamily::new(witness.clone(), current.clone())?;
        let ex = extrapolate_right(dm, &fam)?;
        let next = ex.lambda_r.clone();
        chain.push(ClimbStep {
            from: current,
            witness,
            r: ex.interval.upper,
            to: next.clone(),
        });
        current = next;
    }
    Ok(Climb { basic: current, chain })
}

/// `rho = (1/r) next + ((r - 1)/r) basic`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SplitStep {
    pub rho: Measure,
    pub basic: Measure,
    #[serde(serialize_with = "serialize_fraction")]
    pub r: Rational,
    pub next: Measure,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Part {
    #[serde(rename = "coeff", serialize_with = "serialize_fraction")]
    pub coefficient: Rational,
    #[serde(rename = "mu")]
    pub measure: Measure,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Decomposition {
    pub target: Measure,
    pub parts: Vec<Part>,
    pub chain: Vec<SplitStep>,
}

impl Decomposition {
    pub fn measures(&self) -> Vec<Measure> {
        self.parts.iter().map(|p| p.measure.clone()).collect()
    }

    pub fn coefficients(&self) -> Vec<Rational> {
        self.parts.iter().map(|p| p.coefficient.clone()).collect()
    }

    /// Positive coefficients summing to one, exact reconstruction of the
    /// target, every part basic and the parts mutually compatible.
    pub fn verify(&self, dm: &DistanceMatrix) -> Result<bool> {
        let coeffs = self.coefficients();
        if coeffs.iter().any(|c| !c.is_positive()) {
            return Ok(false);
        }
        let measures = self.measures();
        if measure::convex_combination(&measures, &coeffs).ok().as_ref() != Some(&self.target) {
            return Ok(false);
        }
        for m in &measures {
            if !measure::balanced(dm, m) || !enumeration::is_basic(dm, m)? {
                return Ok(false);
            }
        }
        measure::is_compatible(dm, &measures)
    }
}

pub fn decompose(dm: &DistanceMatrix, rho: &Measure) -> Result<Decomposition> {
    ensure_balanced(dm, rho)?;
    let mut chain = Vec::new();
    let mut current = rho.clone();
    loop {
        let climb = climb_to_basic(dm, &current)?;
        if climb.chain.is_empty() {
            break;
        }
        let fam = LineFamily::new(climb.basic.clone(), current.clone())?;
        let ex = extrapolate_right(dm, &fam)?;
        let next = ex.lambda_r.clone();
        chain.push(SplitStep {
            rho: current,
            basic: climb.basic,
            r: ex.interval.upper,
            next: next.clone(),
        });
        current = next;
    }

    // Back-substitute: the weight reaching step j is the product of 1/r over
    // earlier steps.
    let mut parts: Vec<Part> = Vec::new();
    let mut reach = Rational::one();
    let mut add = |measure: &Measure, coefficient: Rational| {
        match parts.iter_mut().find(|p| &p.measure == measure) {
            Some(p) => p.coefficient += coefficient,
            None => parts.push(Part {
                coefficient,
                measure: measure.clone(),
            }),
        }
    };
    for step in &chain {
        let alpha = step.r.recip();
        add(&step.basic, &reach * (Rational::one() - &alpha));
        reach *= alpha;
    }
    add(&current, reach);
    Ok(Decomposition {
        target: rho.clone(),
        parts,
        chain,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase", tag = "result")]
pub enum HullMembership {
    /// Convex coefficients, one per input measure.
    Inside {
        #[serde(serialize_with = "serialize_fractions")]
        coefficients: Vec<Rational>,
    },
    /// `y` with `y . (basic_i, 1) <= 0` for every `i` and `y . (mu, 1) > 0`.
    Outside {
        #[serde(serialize_with = "serialize_fractions")]
        certificate: Vec<Rational>,
    },
}

fn serialize_fractions<S: serde::Serializer>(v: &[Rational], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|x| x.to_string()))
}

impl HullMembership {
    pub fn is_inside(&self) -> bool {
        matches!(self, HullMembership::Inside { .. })
    }
}

/// Is `mu` a convex combination of `basics`?
pub fn hull_membership(mu: &Measure, basics: &[Measure]) -> Result<HullMembership> {
    let n = mu.len();
    if let Some(b) = basics.iter().find(|b| b.len() != n) {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: b.len(),
        });
    }
    // Rows: one per vertex plus the normalisation.
    let mut a: Vec<Vec<Rational>> = (0..n)
        .map(|v| basics.iter().map(|b| b.weight(v).clone()).collect())
        .collect();
    a.push(vec![Rational::one(); basics.len()]);
    let mut rhs: Vec<Rational> = mu.weights().to_vec();
    rhs.push(Rational::one());

    if !basics.is_empty() {
        if let Some(sol) = linalg::solve(&a, &rhs) {
            if sol.is_unique() && sol.particular.iter().all(|c| !c.is_negative()) {
                return Ok(HullMembership::Inside {
                    coefficients: sol.particular,
                });
            }
        }
    }
    Ok(match lp::find_nonnegative_solution(&a, &rhs) {
        Feasibility::Feasible(coefficients) => HullMembership::Inside { coefficients },
        Feasibility::Infeasible { certificate } => HullMembership::Outside { certificate },
    })
}

/// A basic measure lying in the hull of a compatible set that excludes it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MinimalityViolation {
    pub basic: usize,
    pub clique: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MinimalityReport {
    pub checked: usize,
    pub violations: Vec<MinimalityViolation>,
}

impl MinimalityReport {
    pub fn passes(&self) -> bool {
        self.violations.is_empty()
    }
}

/// No basic measure is a convex combination of a compatible set of other
/// basic measures. Every such set sits inside a maximal clique, so it is
/// enough to test each basic measure against each maximal clique minus
/// itself.
pub fn check_weak_minimality(catalog: &BasicCatalog) -> MinimalityReport {
    let cg = compatibility_graph(catalog);
    let cliques = maximal_cliques(&cg);
    let measures = catalog.measures();
    let jobs: Vec<(usize, Vec<usize>)> = (0..measures.len())
        .flat_map(|i| {
            let mut rest: Vec<Vec<usize>> = cliques
                .iter()
                .map(|c| c.iter().copied().filter(|&j| j != i).collect::<Vec<_>>())
                .filter(|c| !c.is_empty())
                .collect();
            rest.sort();
            rest.dedup();
            rest.into_iter().map(move |c| (i, c))
        })
        .collect();
    let violations = jobs
        .par_iter()
        .filter(|(i, clique)| {
            let set: Vec<Measure> = clique.iter().map(|&j| measures[j].clone()).collect();
            hull_membership(&measures[*i], &set).map(|h| h.is_inside()).unwrap_or(false)
        })
        .map(|(i, clique)| MinimalityViolation {
            basic: *i,
            clique: clique.clone(),
        })
        .collect();
    MinimalityReport {
        checked: jobs.len(),
        violations,
    }
}
