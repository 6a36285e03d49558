use serde::Serialize;

use super::SimpleGraph;
use crate::error::{Error, Result};

/// Symmetric matrix of nonnegative integer distances with zero diagonal.
///
/// Usually the BFS metric of a [`super::Graph`], but any finite integer metric
/// is accepted by [`DistanceMatrix::from_rows`] so that block-defined metrics
/// can be studied on their own.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistanceMatrix {
    n: usize,
    d: Vec<u32>,
}

impl DistanceMatrix {
    /// Validates square shape, zero diagonal, symmetry, positivity off the
    /// diagonal and the triangle inequality.
    pub fn from_rows(rows: Vec<Vec<u32>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::InvalidMetric("empty matrix".into()));
        }
        if let Some(row) = rows.iter().find(|r| r.len() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: row.len(),
            });
        }
        let m = Self::from_rows_unchecked(rows);
        m.check_metric()?;
        Ok(m)
    }

    pub(crate) fn from_rows_unchecked(rows: Vec<Vec<u32>>) -> Self {
        let n = rows.len();
        Self {
            n,
            d: rows.into_iter().flatten().collect(),
        }
    }

    pub fn check_metric(&self) -> Result<()> {
        let n = self.n;
        for i in 0..n {
            if self.get(i, i) != 0 {
                return Err(Error::InvalidMetric(format!("d({i},{i}) != 0")));
            }
            for j in 0..n {
                if self.get(i, j) != self.get(j, i) {
                    return Err(Error::InvalidMetric(format!("asymmetric at ({i},{j})")));
                }
                if i != j && self.get(i, j) == 0 {
                    return Err(Error::InvalidMetric(format!("d({i},{j}) = 0")));
                }
                for k in 0..n {
                    if self.get(i, k) > self.get(i, j) + self.get(j, k) {
                        return Err(Error::InvalidMetric(format!(
                            "triangle inequality fails for ({i},{j},{k})"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.d[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[u32] {
        &self.d[i * self.n..(i + 1) * self.n]
    }

    pub fn rows(&self) -> Vec<Vec<u32>> {
        (0..self.n).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn diameter(&self) -> u32 {
        self.d.iter().copied().max().unwrap_or(0)
    }

    /// The graph whose edges are the pairs at distance one.
    pub fn unit_graph(&self) -> SimpleGraph {
        let mut edges = Vec::new();
        for i in 0..self.n {
            for j in (i + 1)..self.n {
                if self.get(i, j) == 1 {
                    edges.push((i, j));
                }
            }
        }
        SimpleGraph::from_edges(self.n, &edges).expect("unit pairs form a simple graph")
    }

    /// Comma separated rows, one line per row, trailing newline.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for i in 0..self.n {
            let line: Vec<String> = self.row(i).iter().map(u32::to_string).collect();
            out.push_str(&line.join(","));
            out.push('\n');
        }
        out
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let rows = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
            .map(|line| {
                line.split(',')
                    .map(|x| {
                        x.trim()
                            .parse::<u32>()
                            .map_err(|_| Error::Parse(format!("bad distance entry `{x}`")))
                    })
                    .collect::<Result<Vec<u32>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_rows(rows)
    }
}

impl Serialize for DistanceMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq((0..self.n).map(|i| self.row(i)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_non_metrics() {
        assert!(DistanceMatrix::from_rows(vec![vec![0, 1], vec![2, 0]]).is_err());
        assert!(DistanceMatrix::from_rows(vec![vec![1]]).is_err());
        let bad_triangle = vec![vec![0, 1, 5], vec![1, 0, 1], vec![5, 1, 0]];
        assert!(DistanceMatrix::from_rows(bad_triangle).is_err());
        assert!(DistanceMatrix::from_rows(vec![vec![0, 2, 2], vec![2, 0, 2], vec![2, 2, 0]]).is_ok());
    }

    #[test]
    fn csv_round_trip() {
        let m = DistanceMatrix::from_rows(vec![vec![0, 1, 2], vec![1, 0, 1], vec![2, 1, 0]]).unwrap();
        assert_eq!(m.to_csv(), "0,1,2\n1,0,1\n2,1,0\n");
        assert_eq!(DistanceMatrix::from_csv(&m.to_csv()).unwrap(), m);
        assert_eq!(m.unit_graph().edges(), vec![(0, 1), (1, 2)]);
    }
}
