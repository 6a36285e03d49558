//! Graph corpora shared by the integration tests.

#![allow(dead_code)]

use balanced::SimpleGraph;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Erdős–Rényi samples, redrawn until connected.
pub fn random_connected_graph<R: Rng>(rng: &mut R, n: usize, p: f64) -> SimpleGraph {
    loop {
        let mut edges = Vec::new();
        for u in 0..n {
            for v in (u + 1)..n {
                if rng.gen_bool(p) {
                    edges.push((u, v));
                }
            }
        }
        let g = SimpleGraph::from_edges(n, &edges).unwrap();
        if g.is_connected() {
            return g;
        }
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn go(p: &mut Vec<usize>, k: usize, out: &mut Vec<Vec<usize>>) {
        if k == p.len() {
            out.push(p.clone());
            return;
        }
        for i in k..p.len() {
            p.swap(k, i);
            go(p, k + 1, out);
            p.swap(k, i);
        }
    }
    let mut out = Vec::new();
    go(&mut (0..n).collect(), 0, &mut out);
    out
}

/// Smallest sorted edge list over all relabellings.
fn canonical(n: usize, edges: &[(usize, usize)], perms: &[Vec<usize>]) -> Vec<(usize, usize)> {
    perms
        .iter()
        .map(|p| {
            let mut e: Vec<(usize, usize)> = edges
                .iter()
                .map(|&(u, v)| (p[u].min(p[v]), p[u].max(p[v])))
                .collect();
            e.sort_unstable();
            e
        })
        .min()
        .unwrap_or_default()
        .into_iter()
        .filter(|&(u, v)| u < n && v < n)
        .collect()
}

/// One representative per isomorphism class of graphs on `n` vertices.
pub fn nonisomorphic_graphs(n: usize) -> Vec<SimpleGraph> {
    let perms = permutations(n);
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| ((u + 1)..n).map(move |v| (u, v))).collect();
    let mut seen = std::collections::BTreeSet::new();
    for mask in 0u64..(1 << pairs.len()) {
        let edges: Vec<_> = pairs
            .iter()
            .enumerate()
            .filter(|(i, _)| mask & (1 << i) != 0)
            .map(|(_, &e)| e)
            .collect();
        seen.insert(canonical(n, &edges, &perms));
    }
    seen.into_iter()
        .map(|e| SimpleGraph::from_edges(n, &e).unwrap())
        .collect()
}

/// One representative per isomorphism class of trees on `n` vertices, via
/// Prüfer sequences.
pub fn nonisomorphic_trees(n: usize) -> Vec<SimpleGraph> {
    if n == 1 {
        return vec![SimpleGraph::empty(1)];
    }
    if n == 2 {
        return vec![SimpleGraph::from_edges(2, &[(0, 1)]).unwrap()];
    }
    let perms = permutations(n);
    let mut seen = std::collections::BTreeSet::new();
    let total = n.pow(n as u32 - 2);
    for code in 0..total {
        let mut seq = Vec::with_capacity(n - 2);
        let mut c = code;
        for _ in 0..n - 2 {
            seq.push(c % n);
            c /= n;
        }
        seen.insert(canonical(n, &prufer_edges(n, &seq), &perms));
    }
    seen.into_iter()
        .map(|e| SimpleGraph::from_edges(n, &e).unwrap())
        .collect()
}

fn prufer_edges(n: usize, seq: &[usize]) -> Vec<(usize, usize)> {
    let mut degree = vec![1usize; n];
    for &s in seq {
        degree[s] += 1;
    }
    let mut edges = Vec::new();
    for &s in seq {
        let leaf = (0..n).find(|&v| degree[v] == 1).unwrap();
        edges.push((leaf.min(s), leaf.max(s)));
        degree[leaf] -= 1;
        degree[s] -= 1;
    }
    let rest: Vec<usize> = (0..n).filter(|&v| degree[v] == 1).collect();
    edges.push((rest[0], rest[1]));
    edges
}
