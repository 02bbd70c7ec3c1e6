mod common;

use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::Rng;

use homlab::cubical::{cubical_complex, cubical_homology_range, face_into, SingularCube};
use homlab::graph::io::{from_edge_list, from_json, to_edge_list, to_json};
use homlab::graph::{combine, generate, product, CombineKind, Family, ProductKind};
use homlab::homotopy::dismantle;
use homlab::linalg::{Coefficients, Int};
use homlab::path::{path_homology_range, PathComplex, PathTuple};
use homlab::{Chain, ComputeOptions, Graph};

use common::{random_graph, rng};

fn random_tree(r: &mut StdRng, n: usize) -> Graph {
    let edges: Vec<(usize, usize)> = (1..n).map(|i| (r.gen_range(0..i), i)).collect();
    Graph::new(n, &edges).unwrap()
}

/// Each new vertex is joined to a clique of the graph so far.
fn random_chordal(r: &mut StdRng, n: usize) -> Graph {
    let mut edges: Vec<(usize, usize)> = Vec::new();
    for i in 1..n {
        let g = Graph::new(i, &edges).unwrap();
        let mut clique = vec![r.gen_range(0..i)];
        for &w in g.neighbors(clique[0]) {
            let w = w as usize;
            if r.gen_bool(0.6) && clique.iter().all(|&c| g.has_edge(c, w)) {
                clique.push(w);
            }
        }
        edges.extend(clique.into_iter().map(|c| (c, i)));
    }
    Graph::new(n, &edges).unwrap()
}

fn cube_betti(g: &Graph, max_dim: usize) -> Vec<usize> {
    let opts = ComputeOptions::with_coefficients(Coefficients::Rational);
    cubical_homology_range(g, max_dim, &opts)
        .unwrap()
        .into_iter()
        .map(|d| d.summary.group.betti)
        .collect()
}

fn path_betti(g: &Graph, max_dim: usize) -> Vec<usize> {
    path_homology_range(g, max_dim, &ComputeOptions::default())
        .unwrap()
        .into_iter()
        .map(|s| s.group.betti)
        .collect()
}

fn point(max_dim: usize) -> Vec<usize> {
    let mut v = vec![0; max_dim + 1];
    v[0] = 1;
    v
}

fn corpus() -> Vec<Graph> {
    vec![
        generate(Family::Cycle(4)).unwrap(),
        generate(Family::Cycle(5)).unwrap(),
        generate(Family::Complete(4)).unwrap(),
        generate(Family::Hypercube(3)).unwrap(),
        generate(Family::CompleteBipartite(2, 3)).unwrap(),
        generate(Family::Path(5)).unwrap(),
        generate(Family::Counterexample10).unwrap(),
        product(ProductKind::Box, &generate(Family::Cycle(5)).unwrap(), &generate(Family::Path(2)).unwrap()).unwrap(),
    ]
}

#[test]
fn boundaries_compose_to_zero_on_the_corpus() {
    for g in corpus() {
        let cubes = cubical_complex(&g, 3, 1_000_000).unwrap();
        for w in cubes.windows(2) {
            assert!(w[0].boundary.matmul(&w[1].boundary).unwrap().is_zero());
        }
        let pc = PathComplex::build(&g, 4, 1_000_000).unwrap();
        for w in pc.slices().windows(2) {
            assert!(w[0].boundary.matmul(&w[1].boundary).unwrap().is_zero());
        }
    }
}

#[test]
fn first_homology_agrees_on_the_corpus() {
    let opts = ComputeOptions::default();
    for g in corpus() {
        let c = &cubical_homology_range(&g, 1, &opts).unwrap()[1].summary.group;
        let p = &path_homology_range(&g, 1, &opts).unwrap()[1].group;
        assert_eq!(c, p, "{:?}", g.name());
    }
}

#[test]
fn long_cycles_have_no_higher_path_homology() {
    for k in 5..=9 {
        let g = generate(Family::Cycle(k)).unwrap();
        assert_eq!(path_betti(&g, 3), vec![1, 1, 0, 0], "Z{k}");
    }
}

#[test]
fn girth_at_least_five_kills_path_homology_in_dimensions_two_and_three() {
    let mut r = rng(99);
    let mut seen = 0;
    while seen < 12 {
        let n = r.gen_range(5..10);
        let g = random_graph(&mut r, n, 0.3);
        if g.girth().is_some_and(|x| x < 5) {
            continue;
        }
        seen += 1;
        let b = path_betti(&g, 3);
        assert_eq!(&b[2..], &[0, 0], "{:?}", g.edges());
    }
}

#[test]
fn trees_complete_graphs_and_chordal_graphs_are_trivial() {
    let mut r = rng(3);
    let mut graphs = vec![generate(Family::Path(3)).unwrap(), generate(Family::Complete(2)).unwrap()];
    for k in 1..=5 {
        graphs.push(generate(Family::Complete(k)).unwrap());
    }
    for _ in 0..6 {
        let n = r.gen_range(2..9);
        graphs.push(random_tree(&mut r, n));
        graphs.push(random_chordal(&mut r, n));
    }
    for g in &graphs {
        assert!(g.perfect_elimination_ordering().is_some());
        assert_eq!(path_betti(g, 3), point(3), "{:?}", g.edges());
        assert_eq!(dismantle(g).core.vertex_count(), 1);
    }
    // cubical complexes of these grow quickly; dimension 3 only for tiny ones
    for g in graphs.iter().filter(|g| g.vertex_count() <= 6 && g.edge_count() <= 6) {
        assert_eq!(cube_betti(g, 2), point(2), "{:?}", g.edges());
    }
    for g in [generate(Family::Path(3)).unwrap(), random_tree(&mut r, 4)] {
        assert_eq!(cube_betti(&g, 3), point(3));
    }
}

#[test]
fn hypercubes_are_trivial() {
    for n in 1..=3 {
        let q = generate(Family::Hypercube(n)).unwrap();
        assert_eq!(path_betti(&q, 3), point(3), "Q{n}");
        assert_eq!(cube_betti(&q, 2), point(2), "Q{n}");
    }
    assert_eq!(cube_betti(&generate(Family::Hypercube(2)).unwrap(), 3), point(3));
}

#[test]
fn alternating_path_boundary() {
    let mut r = rng(17);
    for _ in 0..50 {
        let a = r.gen_range(0..20u32);
        let b = (a + r.gen_range(1..20)) % 20;
        let n = r.gen_range(1..9);
        let w = |x: u32, y: u32, n: usize| {
            PathTuple::new((0..=n).map(|i| if i % 2 == 0 { x } else { y }).collect()).unwrap()
        };
        let mut expected = Chain::from_terms(n - 1, [(w(b, a, n - 1), Int::ONE)]);
        let s = if n % 2 == 0 { Int::ONE } else { Int::from(-1) };
        expected.add_term(w(a, b, n - 1), &s);
        assert_eq!(w(a, b, n).boundary(), expected, "a={a} b={b} n={n}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn graph_invariants(seed in any::<u64>(), n in 0usize..12, p in 0.0f64..1.0) {
        let mut r = rng(seed);
        let g = random_graph(&mut r, n, p);
        let degrees: usize = (0..n).map(|v| g.degree(v)).sum();
        prop_assert_eq!(degrees, 2 * g.edge_count());
        for (u, v) in g.edges() {
            prop_assert!(u < v && g.has_edge(v, u));
        }
        prop_assert_eq!(from_json(&to_json(&g)).unwrap(), g.clone());
        prop_assert_eq!(from_edge_list(&to_edge_list(&g)).unwrap(), g.clone());
        let comps = g.components();
        for (u, v) in g.edges() {
            prop_assert_eq!(comps[u], comps[v]);
        }
    }

    #[test]
    fn product_edge_counts(seed in any::<u64>(), a in 1usize..6, b in 1usize..6) {
        let mut r = rng(seed);
        let g = random_graph(&mut r, a, 0.5);
        let h = random_graph(&mut r, b, 0.5);
        let (eg, eh) = (g.edge_count(), h.edge_count());
        let boxed = product(ProductKind::Box, &g, &h).unwrap();
        prop_assert_eq!(boxed.edge_count(), eg * b + a * eh);
        let strong = product(ProductKind::Strong, &g, &h).unwrap();
        prop_assert_eq!(strong.edge_count(), eg * b + a * eh + 2 * eg * eh);
        let lex = product(ProductKind::Lexicographic, &g, &h).unwrap();
        prop_assert_eq!(lex.edge_count(), eg * b * b + a * eh);
    }

    #[test]
    fn cube_face_identities(labels in proptest::collection::vec(0u32..5, 8), i in 0usize..3, j in 0usize..3, e in any::<bool>(), d in any::<bool>()) {
        prop_assume!(i < j);
        // f_i^e f_j^d = f_(j-1)^d f_i^e, with 0-based bits
        let mut a = Vec::new();
        let mut ab = Vec::new();
        face_into(&labels, j, d, &mut a);
        face_into(&a, i, e, &mut ab);
        let mut c = Vec::new();
        let mut cd = Vec::new();
        face_into(&labels, i, e, &mut c);
        face_into(&c, j - 1, d, &mut cd);
        prop_assert_eq!(ab, cd);
        let s = SingularCube::new(labels.clone()).unwrap();
        let mut bb = Chain::zero(1);
        for (f, v) in s.boundary().iter() {
            bb.add_scaled(v, &f.boundary());
        }
        prop_assert!(bb.is_zero());
    }

    #[test]
    fn betti_zero_counts_components(seed in any::<u64>(), n in 1usize..8) {
        let mut r = rng(seed);
        let g = random_graph(&mut r, n, 0.3);
        prop_assert_eq!(cube_betti(&g, 0)[0], g.component_count());
        prop_assert_eq!(path_betti(&g, 0)[0], g.component_count());
    }

    #[test]
    fn disjoint_sums_add(seed in any::<u64>(), a in 1usize..5, b in 1usize..5) {
        let mut r = rng(seed);
        let g = random_graph(&mut r, a, 0.6);
        let h = random_graph(&mut r, b, 0.6);
        let s = combine(&g, CombineKind::DisjointSum(&h));
        let add = |x: Vec<usize>, y: Vec<usize>| x.iter().zip(&y).map(|(p, q)| p + q).collect::<Vec<_>>();
        prop_assert_eq!(path_betti(&s, 2), add(path_betti(&g, 2), path_betti(&h, 2)));
        prop_assert_eq!(cube_betti(&s, 1), add(cube_betti(&g, 1), cube_betti(&h, 1)));
    }
}
