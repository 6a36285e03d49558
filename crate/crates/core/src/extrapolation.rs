//! The line `lambda_t = (1 - t) mu + t nu` through two balanced measures and
//! the exact interval of `t` on which it stays balanced.
//!
//! With `spt mu ⊆ spt nu` and `M_mu ⊇ M_nu`, every constraint that decides
//! balancedness along the line is affine in `t`:
//!
//! * `lambda_t(v) >= 0` for each `v` in `spt nu`;
//! * `T(ref) >= T(w)` for each `w` outside `M_nu`, where `ref` is any vertex
//!   of `M_nu` (all of `M_nu` keeps a common cost along the whole line).
//!
//! Each one holds on a closed half-line containing `[0, 1]`, so the balanced
//! set is the intersection `[L, R]` and its endpoints are exact roots.

use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::DistanceMatrix;
use crate::measure::{self, check_dims, support_of, Measure, SupportMaxPair};
use crate::rational::{serialize_fraction, Rational};

/// Two distinct measures of equal length.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LineFamily {
    mu: Measure,
    nu: Measure,
}

impl LineFamily {
    pub fn new(mu: Measure, nu: Measure) -> Result<Self> {
        if mu.len() != nu.len() {
            return Err(Error::DimensionMismatch {
                expected: mu.len(),
                found: nu.len(),
            });
        }
        if mu == nu {
            return Err(Error::Degenerate);
        }
        Ok(Self { mu, nu })
    }

    pub fn mu(&self) -> &Measure {
        &self.mu
    }

    pub fn nu(&self) -> &Measure {
        &self.nu
    }

    /// `lambda_t`; may have negative entries outside `[0, 1]`.
    pub fn at(&self, t: &Rational) -> Vec<Rational> {
        line_measure(self, t)
    }
}

pub fn line_measure(fam: &LineFamily, t: &Rational) -> Vec<Rational> {
    fam.mu
        .weights()
        .iter()
        .zip(fam.nu.weights())
        .map(|(m, n)| m + t * (n - m))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum BindingKind {
    /// The weight at `vertex` reaches zero.
    Support,
    /// `vertex` reaches the maximal cost.
    #[serde(rename = "maxset")]
    MaxSet,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Binding {
    pub kind: BindingKind,
    pub vertex: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BalancedInterval {
    #[serde(rename = "L", serialize_with = "serialize_fraction")]
    pub lower: Rational,
    #[serde(rename = "R", serialize_with = "serialize_fraction")]
    pub upper: Rational,
    /// Every constraint whose root is `R`.
    pub binding_upper: Vec<Binding>,
    /// Every constraint whose root is `L`.
    pub binding_lower: Vec<Binding>,
}

impl BalancedInterval {
    pub fn contains(&self, t: &Rational) -> bool {
        &self.lower <= t && t <= &self.upper
    }
}

/// `a + b t >= 0` with `a + b >= 0` and `a >= 0`, tagged by its origin.
struct Constraint {
    a: Rational,
    b: Rational,
    binding: Binding,
}

fn check_hypotheses(dm: &DistanceMatrix, fam: &LineFamily) -> Result<(SupportMaxPair, SupportMaxPair)> {
    check_dims(dm, fam.mu.len())?;
    for (name, m) in [("mu", &fam.mu), ("nu", &fam.nu)] {
        if !measure::is_balanced(dm, m)?.balanced {
            return Err(Error::Hypothesis(format!("{name} is not balanced")));
        }
    }
    let p_mu = measure::pair(dm, &fam.mu)?;
    let p_nu = measure::pair(dm, &fam.nu)?;
    if !p_mu.support.is_subset(&p_nu.support) {
        return Err(Error::Hypothesis("support of mu is not contained in support of nu".into()));
    }
    if !p_mu.max_set.is_superset(&p_nu.max_set) {
        return Err(Error::Hypothesis("max-set of mu does not contain max-set of nu".into()));
    }
    Ok((p_mu, p_nu))
}

fn constraints(dm: &DistanceMatrix, fam: &LineFamily, p_nu: &SupportMaxPair) -> Result<Vec<Constraint>> {
    let mut out = Vec::new();
    for v in p_nu.support.iter() {
        let a = fam.mu.weight(v).clone();
        let b = fam.nu.weight(v) - &a;
        out.push(Constraint {
            a,
            b,
            binding: Binding {
                kind: BindingKind::Support,
                vertex: v,
            },
        });
    }
    let t_mu = measure::transport_cost(dm, &fam.mu)?;
    let t_nu = measure::transport_cost(dm, &fam.nu)?;
    let reference = p_nu.max_set.iter().next().expect("max-set is nonempty");
    for w in (0..dm.n()).filter(|&w| !p_nu.max_set.contains(w)) {
        let a = t_mu.get(reference) - t_mu.get(w);
        let b = (t_nu.get(reference) - t_nu.get(w)) - &a;
        out.push(Constraint {
            a,
            b,
            binding: Binding {
                kind: BindingKind::MaxSet,
                vertex: w,
            },
        });
    }
    Ok(out)
}

/// Exact `[L, R]`; errors when the hypotheses fail or a side is unbounded.
pub fn balanced_interval(dm: &DistanceMatrix, fam: &LineFamily) -> Result<BalancedInterval> {
    let (_, p_nu) = check_hypotheses(dm, fam)?;
    let cs = constraints(dm, fam, &p_nu)?;

    let mut upper: Option<(Rational, Vec<Binding>)> = None;
    let mut lower: Option<(Rational, Vec<Binding>)> = None;
    for c in cs {
        if c.b.is_zero() {
            continue;
        }
        let root = -&c.a / &c.b;
        let slot = if c.b.is_negative() { &mut upper } else { &mut lower };
        let tighter = |r: &Rational| if c.b.is_negative() { root < *r } else { root > *r };
        match slot {
            Some((r, bindings)) if *r == root => bindings.push(c.binding),
            Some((r, _)) if !tighter(r) => {}
            _ => *slot = Some((root, vec![c.binding])),
        }
    }
    let (upper, mut binding_upper) = upper.ok_or(Error::Unbounded("upper"))?;
    let (lower, mut binding_lower) = lower.ok_or(Error::Unbounded("lower"))?;
    binding_upper.sort();
    binding_lower.sort();
    Ok(BalancedInterval {
        lower,
        upper,
        binding_upper,
        binding_lower,
    })
}

/// Result of pushing the line past `nu` to its far endpoint.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Extrapolation {
    pub interval: BalancedInterval,
    pub lambda_r: Measure,
    pub nu_pair: SupportMaxPair,
    pub lambda_pair: SupportMaxPair,
}

impl Extrapolation {
    pub fn r(&self) -> &Rational {
        &self.interval.upper
    }

    /// `nu = (1/R) lambda_R + ((R - 1)/R) mu`, checked exactly.
    pub fn reconstructs(&self, fam: &LineFamily) -> bool {
        let r = self.r();
        fam.nu
            .weights()
            .iter()
            .zip(self.lambda_r.weights())
            .zip(fam.mu.weights())
            .all(|((n, l), m)| *n == l / r + m * (r - Rational::from_integer(1.into())) / r)
    }
}

pub fn extrapolate_right(dm: &DistanceMatrix, fam: &LineFamily) -> Result<Extrapolation> {
    let interval = balanced_interval(dm, fam)?;
    let weights = line_measure(fam, &interval.upper);
    debug_assert!(support_of(&weights).is_subset(&measure::support(&fam.nu)));
    let lambda_r = Measure::new(weights)?;
    let nu_pair = measure::pair(dm, &fam.nu)?;
    let lambda_pair = measure::pair(dm, &lambda_r)?;
    debug_assert!(nu_pair.lt(&lambda_pair), "extrapolation must strictly raise the pair");
    Ok(Extrapolation {
        interval,
        lambda_r,
        nu_pair,
        lambda_pair,
    })
}
