//! Exact feasibility of `A x = b, x >= 0` by phase-one simplex over the
//! rationals, with Bland's rule so it always terminates.
//!
//! An infeasible system comes with a Farkas certificate `y` satisfying
//! `y^T A <= 0` and `y^T b > 0`; both halves are checked before returning.

use num_traits::{One, Signed, Zero};

use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq)]
pub enum Feasibility {
    Feasible(Vec<Rational>),
    Infeasible { certificate: Vec<Rational> },
}

impl Feasibility {
    pub fn is_feasible(&self) -> bool {
        matches!(self, Feasibility::Feasible(_))
    }
}

pub fn find_nonnegative_solution(a: &[Vec<Rational>], b: &[Rational]) -> Feasibility {
    let m = a.len();
    assert_eq!(m, b.len(), "one right-hand side per row");
    let nv = a.first().map_or(0, Vec::len);
    let width = nv + m + 1;
    let rhs = width - 1;

    // Rows are flipped so that b >= 0; artificial j is basic in row j.
    let signs: Vec<bool> = b.iter().map(Signed::is_negative).collect();
    let mut t: Vec<Vec<Rational>> = (0..m)
        .map(|i| {
            let mut row = vec![Rational::zero(); width];
            for j in 0..nv {
                row[j] = if signs[i] { -&a[i][j] } else { a[i][j].clone() };
            }
            row[nv + i] = Rational::one();
            row[rhs] = b[i].abs();
            row
        })
        .collect();
    let mut basis: Vec<usize> = (nv..nv + m).collect();

    // Reduced costs of `minimise sum(artificials)`; last entry is -objective.
    let mut cost = vec![Rational::zero(); width];
    for c in &mut cost[nv..nv + m] {
        *c = Rational::one();
    }
    for row in &t {
        for (c, x) in cost.iter_mut().zip(row) {
            *c -= x;
        }
    }

    while let Some(enter) = (0..width - 1).find(|&j| cost[j].is_negative()) {
        let leave = (0..m)
            .filter(|&i| t[i][enter].is_positive())
            .map(|i| (&t[i][rhs] / &t[i][enter], basis[i], i))
            .min_by(|x, y| x.0.cmp(&y.0).then(x.1.cmp(&y.1)))
            .map(|(_, _, i)| i)
            .expect("phase-one objective is bounded below");
        pivot(&mut t, &mut cost, leave, enter);
        basis[leave] = enter;
    }

    let objective = -&cost[rhs];
    if objective.is_zero() {
        let mut x = vec![Rational::zero(); nv];
        for (i, &var) in basis.iter().enumerate() {
            if var < nv {
                x[var] = t[i][rhs].clone();
            }
        }
        return Feasibility::Feasible(x);
    }

    // Optimal duals of phase one: y_i = 1 - reduced cost of artificial i,
    // then undo the row flips.
    let certificate: Vec<Rational> = (0..m)
        .map(|i| {
            let y = Rational::one() - &cost[nv + i];
            if signs[i] {
                -y
            } else {
                y
            }
        })
        .collect();
    debug_assert!(verify_certificate(a, b, &certificate));
    Feasibility::Infeasible { certificate }
}

fn pivot(t: &mut [Vec<Rational>], cost: &mut [Rational], row: usize, col: usize) {
    let inv = t[row][col].recip();
    for v in t[row].iter_mut() {
        *v *= &inv;
    }
    let pivot_row = t[row].clone();
    for (i, r) in t.iter_mut().enumerate() {
        if i != row && !r[col].is_zero() {
            let f = r[col].clone();
            for (v, p) in r.iter_mut().zip(&pivot_row) {
                *v -= &f * p;
            }
        }
    }
    let f = cost[col].clone();
    for (v, p) in cost.iter_mut().zip(&pivot_row) {
        *v -= &f * p;
    }
}

/// `y^T A <= 0` componentwise and `y^T b > 0`.
pub fn verify_certificate(a: &[Vec<Rational>], b: &[Rational], y: &[Rational]) -> bool {
    let nv = a.first().map_or(0, Vec::len);
    let yb: Rational = y.iter().zip(b).map(|(p, q)| p * q).sum();
    yb.is_positive()
        && (0..nv).all(|j| {
            let s: Rational = y.iter().zip(a).map(|(yi, row)| yi * &row[j]).sum();
            !s.is_positive()
        })
}
