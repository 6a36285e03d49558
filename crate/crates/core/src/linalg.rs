//! Exact linear algebra by fraction-free (integer preserving) Gauss-Jordan
//! elimination.
//!
//! Every entry stays an integer throughout: each update is
//! `(a_rc * a_ij - a_ic * a_rj) / prev_pivot`, and the division is exact. Rows
//! with rational entries are first scaled to integers by their common
//! denominator, which does not change the solution set. Pivots are chosen as
//! the first nonzero entry in the column, scanning rows top to bottom, so the
//! result is fully deterministic.
//!
//! The elimination is generic over [`ExactInt`] so that the enumeration hot
//! loop can run on overflow-checked `i128` and fall back to `BigInt`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::rational::{common_denominator, Rational};

pub trait ExactInt: Clone + Sized {
    fn unit() -> Self;
    fn is_nil(&self) -> bool;
    fn from_i64(v: i64) -> Self;
    fn to_bigint(&self) -> BigInt;
    fn sign(&self) -> i8;
    /// `self + a * b`, `None` on overflow.
    fn checked_mul_add(&self, a: &Self, b: &Self) -> Option<Self>;
    /// `(a * b - c * d) / e`; the division is known to be exact. `None` on
    /// overflow.
    fn cross_div(a: &Self, b: &Self, c: &Self, d: &Self, e: &Self) -> Option<Self>;
}

impl ExactInt for BigInt {
    fn unit() -> Self {
        One::one()
    }
    fn is_nil(&self) -> bool {
        Zero::is_zero(self)
    }
    fn from_i64(v: i64) -> Self {
        BigInt::from(v)
    }
    fn to_bigint(&self) -> BigInt {
        self.clone()
    }
    fn sign(&self) -> i8 {
        match Signed::signum(self) {
            s if s.is_positive() => 1,
            s if s.is_negative() => -1,
            _ => 0,
        }
    }
    fn checked_mul_add(&self, a: &Self, b: &Self) -> Option<Self> {
        Some(self + a * b)
    }
    fn cross_div(a: &Self, b: &Self, c: &Self, d: &Self, e: &Self) -> Option<Self> {
        let num = a * b - c * d;
        let (q, r) = num.div_rem(e);
        debug_assert!(Zero::is_zero(&r), "fraction-free division must be exact");
        Some(q)
    }
}

impl ExactInt for i128 {
    fn unit() -> Self {
        1
    }
    fn is_nil(&self) -> bool {
        *self == 0
    }
    fn from_i64(v: i64) -> Self {
        i128::from(v)
    }
    fn to_bigint(&self) -> BigInt {
        BigInt::from(*self)
    }
    fn sign(&self) -> i8 {
        self.signum() as i8
    }
    fn checked_mul_add(&self, a: &Self, b: &Self) -> Option<Self> {
        self.checked_add(a.checked_mul(*b)?)
    }
    fn cross_div(a: &Self, b: &Self, c: &Self, d: &Self, e: &Self) -> Option<Self> {
        let num = a.checked_mul(*b)?.checked_sub(c.checked_mul(*d)?)?;
        debug_assert_eq!(num % e, 0, "fraction-free division must be exact");
        num.checked_div(*e)
    }
}

/// Reduces `m` in place over its first `elim_cols` columns; the remaining
/// columns (e.g. a right-hand side) are carried along. On return every pivot
/// entry equals the last pivot, so pivot row `r` reads
/// `last_pivot * x_{pivots[r]} + (free terms) = rhs_r`. Returns the pivot
/// column of each pivot row (pivot rows are `0..pivots.len()`), or `None` if
/// the integer type overflowed.
pub fn fraction_free_reduce<T: ExactInt>(m: &mut [Vec<T>], elim_cols: usize) -> Option<Vec<usize>> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut prev = T::unit();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..elim_cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_nil()) else {
            continue;
        };
        m.swap(r, p);
        let (before, rest) = m.split_at_mut(r);
        let (pivot_row, after) = rest.split_first_mut().expect("row r exists");
        for row in before.iter_mut().chain(after.iter_mut()) {
            let factor = row[c].clone();
            for j in 0..cols {
                row[j] = T::cross_div(&pivot_row[c], &row[j], &factor, &pivot_row[j], &prev)?;
            }
        }
        prev = pivot_row[c].clone();
        pivots.push(c);
        r += 1;
    }
    Some(pivots)
}

/// Scales each rational row by the lcm of its denominators.
pub fn integer_rows(rows: &[Vec<Rational>]) -> Vec<Vec<BigInt>> {
    rows.iter()
        .map(|row| {
            let scale = common_denominator(row);
            row.iter()
                .map(|x| x.numer() * (&scale / x.denom()))
                .collect()
        })
        .collect()
}

/// A reduced integer matrix with its pivot structure.
#[derive(Debug, Clone)]
pub struct Echelon {
    rows: Vec<Vec<BigInt>>,
    pivots: Vec<usize>,
    elim_cols: usize,
}

impl Echelon {
    pub fn new(mut rows: Vec<Vec<BigInt>>, elim_cols: usize) -> Self {
        let pivots = fraction_free_reduce(&mut rows, elim_cols).expect("BigInt never overflows");
        Self {
            rows,
            pivots,
            elim_cols,
        }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Canonical kernel basis of the eliminated block: one vector per free
    /// column in increasing order, with the free variable set to one, then the
    /// sign fixed so the first nonzero entry is positive.
    pub fn nullspace(&self) -> Vec<Vec<Rational>> {
        let free: Vec<usize> = (0..self.elim_cols)
            .filter(|c| !self.pivots.contains(c))
            .collect();
        free.into_iter()
            .map(|f| {
                let mut x = vec![Rational::zero(); self.elim_cols];
                x[f] = Rational::one();
                for (r, &p) in self.pivots.iter().enumerate() {
                    x[p] = -Rational::new(self.rows[r][f].clone(), self.rows[r][p].clone());
                }
                normalize_sign(&mut x);
                x
            })
            .collect()
    }

    /// Treats the columns after `elim_cols` as right-hand sides and reads off
    /// the solution with all free variables set to zero. `None` when
    /// inconsistent.
    pub fn particular_solution(&self, rhs_col: usize) -> Option<Vec<Rational>> {
        let rank = self.rank();
        if self.rows[rank..].iter().any(|row| !row[rhs_col].is_zero()) {
            return None;
        }
        let mut x = vec![Rational::zero(); self.elim_cols];
        for (r, &p) in self.pivots.iter().enumerate() {
            x[p] = Rational::new(self.rows[r][rhs_col].clone(), self.rows[r][p].clone());
        }
        Some(x)
    }
}

pub fn normalize_sign(x: &mut [Rational]) {
    if x.iter().find(|v| !v.is_zero()).is_some_and(Signed::is_negative) {
        for v in x.iter_mut() {
            *v = -v.clone();
        }
    }
}

pub fn rank(a: &[Vec<Rational>]) -> usize {
    let cols = a.first().map_or(0, Vec::len);
    Echelon::new(integer_rows(a), cols).rank()
}

pub fn nullspace(a: &[Vec<Rational>]) -> Vec<Vec<Rational>> {
    let cols = a.first().map_or(0, Vec::len);
    Echelon::new(integer_rows(a), cols).nullspace()
}

/// Solution set `{particular + span(kernel)}` of `A x = b`.
#[derive(Debug, Clone, PartialEq)]
pub struct AffineSolution {
    pub particular: Vec<Rational>,
    pub kernel: Vec<Vec<Rational>>,
}

impl AffineSolution {
    pub fn is_unique(&self) -> bool {
        self.kernel.is_empty()
    }
}

/// Solves `A x = b` exactly; `None` when the system is inconsistent.
pub fn solve(a: &[Vec<Rational>], b: &[Rational]) -> Option<AffineSolution> {
    assert_eq!(a.len(), b.len(), "one right-hand side per row");
    let cols = a.first().map_or(0, Vec::len);
    let augmented: Vec<Vec<Rational>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let ech = Echelon::new(integer_rows(&augmented), cols);
    let particular = ech.particular_solution(cols)?;
    Some(AffineSolution {
        particular,
        kernel: ech.nullspace(),
    })
}

pub fn mat_vec(a: &[Vec<Rational>], x: &[Rational]) -> Vec<Rational> {
    a.iter()
        .map(|row| row.iter().zip(x).map(|(p, q)| p * q).sum())
        .collect()
}
