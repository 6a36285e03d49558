//! Fixed graphs and measure families with known balanced behaviour.
//!
//! * Joins of `l` single vertices with `k` edgeless triples, whose basic
//!   measures are exactly the `2^k - 1` block-constant measures.
//! * A 14-vertex graph, stored as its distance matrix, on which a two-block
//!   family `mu_a` is balanced exactly for `a` in `[1/18, 1/9]`.
//! * The Cartesian product `C4 x C4` with its permutation measures.
//! * The graph `G_H` that realises a given graph `H` inside the
//!   compatibility graph of its basic measures.

use num_traits::{One, Zero};
use serde::Serialize;

use crate::enumeration;
use crate::error::{Error, Result};
use crate::graph::{generators, DistanceMatrix, Graph, SimpleGraph};
use crate::measure::{self, Measure};
use crate::rational::{rat, Rational};
use crate::vertex_set::VertexSet;

/// `l` single vertices joined with `k` edgeless triples.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct JoinFamilySpec {
    pub l: usize,
    pub k: usize,
}

impl JoinFamilySpec {
    pub fn n(&self) -> usize {
        self.l + 3 * self.k
    }

    /// Vertices of triple `i` (0-based).
    pub fn triple(&self, i: usize) -> [usize; 3] {
        let base = self.l + 3 * i;
        [base, base + 1, base + 2]
    }
}

/// Layout: the `l` singletons first, then the triples in order.
pub fn build_join_family(spec: JoinFamilySpec) -> Result<Graph> {
    if spec.k == 0 {
        return Err(Error::BadSpec("at least one triple is required".into()));
    }
    if spec.l == 0 && spec.k == 1 {
        return Err(Error::BadSpec("a lone edgeless triple is disconnected".into()));
    }
    let summands = std::iter::repeat_n(SimpleGraph::empty(1), spec.l)
        .chain(std::iter::repeat_n(SimpleGraph::empty(3), spec.k));
    let joined = summands
        .reduce(|acc, g| acc.join(&g))
        .expect("at least one summand");
    joined.into_graph()
}

/// Weight `1/(3m)` on every vertex of the `m` chosen triples (0-based).
pub fn triple_measure(spec: JoinFamilySpec, chosen: &[usize]) -> Result<Measure> {
    if chosen.is_empty() {
        return Err(Error::EmptyChoice);
    }
    if let Some(&i) = chosen.iter().find(|&&i| i >= spec.k) {
        return Err(Error::OutOfRange(format!("triple {i} of {}", spec.k)));
    }
    let set: VertexSet = chosen.iter().flat_map(|&i| spec.triple(i)).collect();
    Measure::uniform_on(spec.n(), &set)
}

const EXAMPLE_14: &str = include_str!("../data/example14.csv");

/// The printed 14 x 14 distance matrix.
pub fn example_14_distances() -> DistanceMatrix {
    DistanceMatrix::from_csv(EXAMPLE_14).expect("fixture is a valid metric")
}

/// The graph whose edges are the unit entries of the fixture. Its BFS metric
/// reproduces the fixture exactly.
pub fn build_example_14() -> Graph {
    let fixture = example_14_distances();
    let g = fixture.unit_graph().into_graph().expect("fixture graph is connected");
    assert_eq!(g.distances(), &fixture, "BFS metric must reproduce the fixture");
    g
}

/// `(b 1_3, a 1_3, 0, a 1_3, b 1_3, 0)` with `b = 1/6 - a`.
pub fn mu_a(a: &Rational) -> Result<Measure> {
    let sixth = rat(1, 6);
    if a < &Rational::zero() || a > &sixth {
        return Err(Error::OutOfRange(format!("a = {a} outside [0, 1/6]")));
    }
    let b = &sixth - a;
    let z = Rational::zero();
    let blocks = [(&b, 3), (a, 3), (&z, 1), (a, 3), (&b, 3), (&z, 1)];
    let weights = blocks
        .iter()
        .flat_map(|(w, len)| std::iter::repeat_n((*w).clone(), *len))
        .collect();
    Measure::new(weights)
}

/// `C4 x C4`, vertex `(i, j)` numbered `4 i + j`.
pub fn c4c4() -> Graph {
    let c4 = generators::cycle(4).expect("C4");
    c4.cartesian_product(&c4).into_graph().expect("product of connected graphs")
}

/// `1/4` on the cells `(i, perm[i])`.
pub fn permutation_measure_c4c4(perm: &[usize]) -> Result<Measure> {
    if perm.len() != 4 {
        return Err(Error::BadPermutation(format!("expected 4 entries, got {}", perm.len())));
    }
    let mut seen = [false; 4];
    for &p in perm {
        if p >= 4 || std::mem::replace(&mut seen[p], true) {
            return Err(Error::BadPermutation(format!("{perm:?}")));
        }
    }
    let set: VertexSet = perm.iter().enumerate().map(|(i, &p)| 4 * i + p).collect();
    Measure::uniform_on(16, &set)
}

/// Block matrix with `2J - 2I` on the diagonal blocks and `J` or `J + I`
/// off the diagonal, according to adjacency in `h`.
pub fn gh_block_matrix(h: &SimpleGraph) -> DistanceMatrix {
    let n = 3 * h.n();
    let rows = (0..n)
        .map(|u| {
            (0..n)
                .map(|v| {
                    let (bu, bv) = (u / 3, v / 3);
                    let same_slot = u % 3 == v % 3;
                    if bu == bv {
                        if same_slot { 0 } else { 2 }
                    } else if same_slot && h.has_edge(bu, bv) {
                        2
                    } else {
                        1
                    }
                })
                .collect()
        })
        .collect();
    DistanceMatrix::from_rows(rows).expect("entries in {0,1,2} form a metric")
}

/// The `3n`-vertex graph whose adjacency is `2J - 2I - D` for the block
/// matrix `D`. Disconnected when `h` has a single vertex.
pub fn build_gh_simple(h: &SimpleGraph) -> SimpleGraph {
    gh_block_matrix(h).unit_graph()
}

pub fn build_gh(h: &SimpleGraph) -> Result<Graph> {
    build_gh_simple(h).into_graph()
}

/// `1/3` on each vertex of block `i` of `G_H`.
pub fn vertex_measure(n: usize, i: usize) -> Result<Measure> {
    if i >= n {
        return Err(Error::VertexOutOfRange { vertex: i, n });
    }
    Measure::uniform_on(3 * n, &[3 * i, 3 * i + 1, 3 * i + 2].into_iter().collect())
}

/// Largest `H` accepted by [`verify_gh_embedding`].
pub const GH_MAX_N: usize = 5;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GhReport {
    pub n: usize,
    /// `None` when `G_H` is disconnected and the block matrix is used as
    /// the metric directly.
    pub bfs_matches_block: Option<bool>,
    pub all_balanced: bool,
    pub all_basic: bool,
    /// Max-set of each block measure is its own block plus the blocks of
    /// its neighbours in `h`.
    pub max_sets_match: bool,
    /// Compatibility among the block measures reproduces `h`.
    pub compatibility_matches: bool,
}

impl GhReport {
    pub fn holds(&self) -> bool {
        self.bfs_matches_block.unwrap_or(true)
            && self.all_balanced
            && self.all_basic
            && self.max_sets_match
            && self.compatibility_matches
    }
}

/// Builds `G_H` and checks that `v_i -> mu_{v_i}` embeds `h` into the
/// compatibility graph. Uses the BFS metric when `G_H` is connected.
pub fn verify_gh_embedding(h: &SimpleGraph) -> Result<GhReport> {
    let n = h.n();
    if n > GH_MAX_N {
        return Err(Error::TooLarge { n, limit: GH_MAX_N });
    }
    let block = gh_block_matrix(h);
    let (dm, bfs_matches_block) = match build_gh(h) {
        Ok(g) => {
            let same = g.distances() == &block;
            (g.distances().clone(), Some(same))
        }
        Err(Error::Disconnected { .. }) => (block, None),
        Err(e) => return Err(e),
    };

    let measures: Vec<Measure> = (0..n).map(|i| vertex_measure(n, i)).collect::<Result<_>>()?;
    let all_balanced = measures.iter().all(|m| measure::balanced(&dm, m));
    let mut all_basic = all_balanced;
    let mut max_sets_match = all_balanced;
    let mut compatibility_matches = all_balanced;
    if all_balanced {
        let pairs: Vec<_> = measures
            .iter()
            .map(|m| measure::pair(&dm, m))
            .collect::<Result<_>>()?;
        for (i, m) in measures.iter().enumerate() {
            all_basic &= enumeration::is_basic(&dm, m)?;
            let expected: VertexSet = (0..n)
                .filter(|&j| j == i || h.has_edge(i, j))
                .flat_map(|j| [3 * j, 3 * j + 1, 3 * j + 2])
                .collect();
            max_sets_match &= pairs[i].max_set == expected;
            for j in (i + 1)..n {
                compatibility_matches &= measure::pairs_compatible(&pairs[i], &pairs[j]) == h.has_edge(i, j);
            }
        }
    }
    Ok(GhReport {
        n,
        bfs_matches_block,
        all_balanced,
        all_basic,
        max_sets_match,
        compatibility_matches,
    })
}

/// True when `weights` is constant on every block of three and each block is
/// either empty or carries `1/(3m)` per vertex for the common `m`.
pub fn is_block_constant_triple_measure(spec: JoinFamilySpec, mu: &Measure) -> bool {
    let w = mu.weights();
    if w.len() != spec.n() || w[..spec.l].iter().any(|x| !x.is_zero()) {
        return false;
    }
    let blocks: Vec<&Rational> = (0..spec.k).map(|i| &w[spec.triple(i)[0]]).collect();
    let uniform_blocks = (0..spec.k).all(|i| spec.triple(i).iter().all(|&v| &w[v] == blocks[i]));
    let m = blocks.iter().filter(|x| !x.is_zero()).count();
    uniform_blocks
        && m > 0
        && blocks
            .iter()
            .all(|x| x.is_zero() || **x == Rational::one() / Rational::from_integer((3 * m).into()))
}
