//! Worked examples with hand-checked values.

use balanced::constructions::{self, JoinFamilySpec};
use balanced::decomposition::{check_weak_minimality, decompose, hull_membership, HullMembership};
use balanced::enumeration::{compatibility_graph, count_components, enumerate_basic, is_basic};
use balanced::extrapolation::{balanced_interval, LineFamily};
use balanced::graph::generators;
use balanced::lp::verify_certificate;
use balanced::measure::{self, convex_combination, poset_compare, PairOrder};
use balanced::rational::{int, rat};
use balanced::{DistanceMatrix, Error, Measure, SimpleGraph, SupportMaxPair, VertexSet};

fn dm(g: SimpleGraph) -> DistanceMatrix {
    g.into_graph().unwrap().distances().clone()
}

fn m(w: &[&str]) -> Measure {
    Measure::from_fractions(w).unwrap()
}

fn set(vs: &[usize]) -> VertexSet {
    vs.iter().copied().collect()
}

fn sp(s: &[usize], mx: &[usize]) -> SupportMaxPair {
    SupportMaxPair { support: set(s), max_set: set(mx) }
}

fn c8_triple() -> [Measure; 3] {
    [
        m(&["1/2", "0", "0", "0", "1/2", "0", "0", "0"]),
        m(&["0", "0", "1/2", "0", "0", "0", "1/2", "0"]),
        m(&["0", "0", "0", "1/2", "0", "0", "0", "1/2"]),
    ]
}

#[test]
fn balance_on_small_graphs() {
    let p4 = dm(generators::path(4).unwrap());
    let cert = measure::is_balanced(&p4, &m(&["1/2", "0", "0", "1/2"])).unwrap();
    assert!(cert.balanced);
    assert_eq!(cert.max_cost, rat(3, 2));

    let k5 = dm(generators::complete(5).unwrap());
    assert!(measure::balanced(&k5, &Measure::uniform(5)));

    // A point mass on a path end: cost 0 there, so the end is a violation.
    let cert = measure::is_balanced(&p4, &Measure::point_mass(4, 0)).unwrap();
    assert!(!cert.balanced);
    assert_eq!(cert.violations.len(), 1);
    assert_eq!(cert.violations[0].vertex, 0);
    assert_eq!(cert.violations[0].deficit, int(3));
}

#[test]
fn energy_values() {
    let c4 = dm(generators::cycle(4).unwrap());
    assert_eq!(measure::energy(&c4, &Measure::point_mass(4, 2)).unwrap(), int(0));
    assert_eq!(measure::energy(&c4, &m(&["1/2", "0", "1/2", "0"])).unwrap(), int(1));
}

#[test]
fn poset_examples() {
    let v = [0, 1, 2, 3];
    // Smaller support and larger max-set sits higher in the order.
    assert_eq!(poset_compare(&sp(&[0], &v), &sp(&[0, 1], &[0, 1])), PairOrder::Greater);
    assert_eq!(poset_compare(&sp(&[0, 1], &[0, 1]), &sp(&[0], &v)), PairOrder::Less);
    assert_eq!(poset_compare(&sp(&[0], &v), &sp(&[0], &v)), PairOrder::Equal);
    assert_eq!(poset_compare(&sp(&[0], &[0, 1]), &sp(&[1], &[0, 1])), PairOrder::Incomparable);
}

#[test]
fn compatibility_examples() {
    let c8 = dm(generators::cycle(8).unwrap());
    assert!(measure::is_compatible(&c8, &c8_triple()).unwrap());

    let k33 = constructions::build_join_family(JoinFamilySpec { l: 0, k: 2 }).unwrap();
    let left = m(&["1/3", "1/3", "1/3", "0", "0", "0"]);
    let right = m(&["0", "0", "0", "1/3", "1/3", "1/3"]);
    assert!(!measure::is_compatible(k33.distances(), &[left.clone(), right.clone()]).unwrap());
    assert!(measure::is_compatible(k33.distances(), std::slice::from_ref(&left)).unwrap());
    assert_eq!(
        measure::is_compatible(k33.distances(), &[Measure::point_mass(6, 0)]),
        Err(Error::NotBalanced)
    );

    let half = rat(1, 2);
    let mixed = convex_combination(&[left, right], &[half.clone(), half.clone()]).unwrap();
    assert_eq!(mixed, Measure::uniform(6));
}

#[test]
fn c8_midpoint_is_balanced() {
    let c8 = dm(generators::cycle(8).unwrap());
    let [mu, nu, _] = c8_triple();
    let mid = convex_combination(&[mu, nu], &[rat(1, 2), rat(1, 2)]).unwrap();
    assert_eq!(mid, m(&["1/4", "0", "1/4", "0", "1/4", "0", "1/4", "0"]));
    assert!(measure::balanced(&c8, &mid));
}

#[test]
fn greedy_examples() {
    let p4 = dm(generators::path(4).unwrap());
    let run = measure::greedy_sequence(&p4, &[0], 1000).unwrap();
    assert_eq!(&run.picks[..4], &[3, 0, 3, 0]);
    assert!(measure::epsilon_balanced(&p4, &run.last(), &rat(1, 100)).unwrap());
    // Seed plus two picks is {0, 3, 0}: vertex 0 is underpriced.
    assert!(!measure::epsilon_balanced(&p4, &run.empirical(2), &int(0)).unwrap());
    assert!(measure::epsilon_balanced(&p4, &run.empirical(3), &int(0)).unwrap());

    let k3 = dm(generators::complete(3).unwrap());
    let run = measure::greedy_sequence(&k3, &[0], 299).unwrap();
    assert_eq!(run.last(), Measure::uniform(3));

    let run = measure::greedy_sequence(&k3, &[1], 0).unwrap();
    assert_eq!(run.last(), Measure::point_mass(3, 1));
}

#[test]
fn interval_on_c4() {
    let c4 = dm(generators::cycle(4).unwrap());
    let fam = LineFamily::new(m(&["1/2", "0", "1/2", "0"]), Measure::uniform(4)).unwrap();
    let iv = balanced_interval(&c4, &fam).unwrap();
    assert_eq!(iv.lower, int(0));
    assert_eq!(iv.upper, int(2));
    assert!(matches!(
        LineFamily::new(Measure::uniform(4), Measure::uniform(4)),
        Err(Error::Degenerate)
    ));
}

#[test]
fn c8_hull_certificate_separates() {
    let [mu, nu, rho] = c8_triple();
    let sigma = m(&["0", "1/2", "0", "0", "0", "1/2", "0", "0"]);
    let basics = [mu.clone(), nu.clone(), rho.clone()];
    match hull_membership(&sigma, &basics).unwrap() {
        HullMembership::Outside { certificate } => {
            // The certificate is for {x >= 0 : sum x_i basic_i = sigma, sum x = 1}.
            let n = sigma.len();
            let mut a: Vec<Vec<_>> = (0..n).map(|v| basics.iter().map(|b| b.weight(v).clone()).collect()).collect();
            a.push(vec![int(1); 3]);
            let mut b: Vec<_> = sigma.weights().to_vec();
            b.push(int(1));
            assert!(verify_certificate(&a, &b, &certificate));
        }
        other => panic!("expected exclusion, got {other:?}"),
    }
    let inside = convex_combination(&basics, &[rat(1, 2), rat(1, 3), rat(1, 6)]).unwrap();
    match hull_membership(&inside, &basics).unwrap() {
        HullMembership::Inside { coefficients } => {
            assert_eq!(coefficients, vec![rat(1, 2), rat(1, 3), rat(1, 6)]);
        }
        other => panic!("expected membership, got {other:?}"),
    }
}

#[test]
fn basic_measure_decomposes_to_itself() {
    let c4 = dm(generators::cycle(4).unwrap());
    let mu = m(&["1/2", "0", "1/2", "0"]);
    let d = decompose(&c4, &mu).unwrap();
    assert_eq!(d.parts.len(), 1);
    assert_eq!(d.parts[0].coefficient, int(1));
    assert_eq!(d.parts[0].measure, mu);
    assert!(d.chain.is_empty() || d.chain.len() == 1);
}

#[test]
fn decomposing_unbalanced_measure_fails() {
    let c4 = dm(generators::cycle(4).unwrap());
    assert_eq!(decompose(&c4, &Measure::point_mass(4, 0)).unwrap_err(), Error::NotBalanced);
}

#[test]
fn weak_minimality_on_small_graphs() {
    for g in [
        generators::cycle(6).unwrap(),
        generators::cycle(8).unwrap(),
        generators::complete(4).unwrap(),
    ] {
        let cat = enumerate_basic(&dm(g)).unwrap();
        assert!(check_weak_minimality(&cat).passes());
    }
}

#[test]
fn join_family_components() {
    // Each basic measure of the triple family has its own support as max-set,
    // so no two are compatible and every one is its own component.
    let g = constructions::build_join_family(JoinFamilySpec { l: 0, k: 3 }).unwrap();
    let cat = enumerate_basic(g.distances()).unwrap();
    assert_eq!(cat.len(), 7);
    let cg = compatibility_graph(&cat);
    assert_eq!(count_components(&cg), 7);
    assert!(cg.edges().is_empty());
    for e in cat.entries() {
        assert_eq!(e.pair.support, e.pair.max_set);
    }
}

#[test]
fn triple_measure_examples() {
    let spec = JoinFamilySpec { l: 0, k: 2 };
    let g = constructions::build_join_family(spec).unwrap();
    assert_eq!(
        constructions::triple_measure(spec, &[0]).unwrap(),
        m(&["1/3", "1/3", "1/3", "0", "0", "0"])
    );
    assert_eq!(constructions::triple_measure(spec, &[0, 1]).unwrap(), Measure::uniform(6));
    assert_eq!(constructions::triple_measure(spec, &[]), Err(Error::EmptyChoice));

    let spec3 = JoinFamilySpec { l: 0, k: 3 };
    let g3 = constructions::build_join_family(spec3).unwrap();
    let mu = constructions::triple_measure(spec3, &[0, 2]).unwrap();
    assert_eq!(mu, m(&["1/6", "1/6", "1/6", "0", "0", "0", "1/6", "1/6", "1/6"]));
    assert!(measure::balanced(g3.distances(), &mu));
    assert!(measure::balanced(g.distances(), &Measure::uniform(6)));

    assert!(matches!(
        constructions::build_join_family(JoinFamilySpec { l: 0, k: 1 }),
        Err(Error::BadSpec(_))
    ));
    let star = constructions::build_join_family(JoinFamilySpec { l: 1, k: 1 }).unwrap();
    assert_eq!(star.edges(), vec![(0, 1), (0, 2), (0, 3)]);
}

#[test]
fn fourteen_vertex_distances() {
    let g = constructions::build_example_14();
    // 1-based (1,10) and (1,8) in the printed matrix.
    assert_eq!(g.distance(0, 9), 1);
    assert_eq!(g.distance(0, 7), 2);
    assert_eq!(g.diameter(), 2);
    for i in 0..7 {
        for j in 0..7 {
            if i != j {
                assert_eq!(g.distance(i, j), 1);
                assert_eq!(g.distance(i + 7, j + 7), 1);
            }
        }
    }
}

#[test]
fn fourteen_vertex_cost_formula() {
    let d = constructions::example_14_distances();
    for (p, q) in [(1, 18), (1, 12), (1, 9), (1, 20), (1, 7)] {
        let a = rat(p, q);
        let b = rat(1, 6) - &a;
        let mu = constructions::mu_a(&a).unwrap();
        let cost = measure::transport_cost(&d, &mu).unwrap();
        let high = int(8) * &a + int(8) * &b;
        let mut expected = vec![high.clone(); 6];
        expected.push(int(9) * &a + int(6) * &b);
        expected.extend(vec![high; 6]);
        expected.push(int(6) * &a + int(9) * &b);
        assert_eq!(cost.costs(), &expected[..], "a = {a}");
    }
    assert!(!measure::balanced(&d, &constructions::mu_a(&rat(1, 8)).unwrap()));
    assert_eq!(constructions::mu_a(&rat(1, 12)).unwrap().weight(0), &rat(1, 12));
}

#[test]
fn c4c4_permutations_and_two_subsets() {
    let g = constructions::c4c4();
    let d = g.distances();
    let mut basic = 0;
    for perm in permutations4() {
        let mu = constructions::permutation_measure_c4c4(&perm).unwrap();
        assert!(measure::balanced(d, &mu));
        let preserves_antipodes = (0..4).all(|i| perm[(i + 2) % 4] == (perm[i] + 2) % 4);
        assert_eq!(is_basic(d, &mu).unwrap(), !preserves_antipodes, "{perm:?}");
        basic += usize::from(!preserves_antipodes);

        for i in 0..4 {
            for j in (i + 1)..4 {
                let cells: VertexSet = [4 * i + perm[i], 4 * j + perm[j]].into_iter().collect();
                let pairmu = Measure::uniform_on(16, &cells).unwrap();
                let antipodal = j == i + 2 && perm[j] == (perm[i] + 2) % 4;
                assert_eq!(measure::balanced(d, &pairmu), antipodal, "{perm:?} {i} {j}");
                if antipodal {
                    assert!(is_basic(d, &pairmu).unwrap());
                }
            }
        }
    }
    assert_eq!(basic, 16);
}

fn permutations4() -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                for d in 0..4 {
                    let p = vec![a, b, c, d];
                    let mut s = p.clone();
                    s.sort_unstable();
                    if s == [0, 1, 2, 3] {
                        out.push(p);
                    }
                }
            }
        }
    }
    out
}

#[test]
fn gh_vertex_measures() {
    let h = generators::path(3).unwrap();
    let g = constructions::build_gh(&h).unwrap();
    assert_eq!(g.n(), 9);
    let mu = constructions::vertex_measure(3, 0).unwrap();
    assert!(measure::balanced(g.distances(), &mu));
    // Block 0 plus the block of its only neighbour.
    assert_eq!(measure::max_set(g.distances(), &mu).unwrap(), set(&[0, 1, 2, 3, 4, 5]));
    assert!(is_basic(g.distances(), &mu).unwrap());
}
