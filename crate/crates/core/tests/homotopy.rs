mod common;

use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::Rng;

use homlab::cubical::{cubical_homology_range, enumerate_cubes, SingularCube};
use homlab::graph::{generate, is_graph_hom, product, Family, ProductKind};
use homlab::homotopy::*;
use homlab::linalg::Int;
use homlab::path::{omega_basis, path_homology_range, PathTuple};
use homlab::{Chain, ComputeOptions, Graph, VertexMap};

use common::{random_graph, rng};

/// Random walk in the space of homomorphisms. Within a step every image moves
/// at most one edge away from where the step started.
fn random_homotopy(r: &mut StdRng, g: &Graph, h: &Graph, steps: usize) -> Homotopy {
    let mut f = VertexMap::constant(g.vertex_count(), r.gen_range(0..h.vertex_count()));
    let mut maps = vec![f.clone()];
    for _ in 0..steps {
        let start = f.clone();
        for _ in 0..3 * g.vertex_count() {
            let u = r.gen_range(0..g.vertex_count());
            let nb = h.neighbors(start.apply(u));
            if nb.is_empty() {
                continue;
            }
            let mut next = f.clone();
            next.image[u] = nb[r.gen_range(0..nb.len())];
            if is_graph_hom(g, h, &next).unwrap() {
                f = next;
            }
        }
        maps.push(f.clone());
    }
    Homotopy::new(maps)
}

fn check_cubical_identity(g: &Graph, h: &Graph, phi: &Homotopy, max_dim: usize) {
    for n in 0..=max_dim {
        let basis = enumerate_cubes(g, n).unwrap();
        for s in basis.iter() {
            let s = SingularCube::new(s.to_vec()).unwrap();
            let hs = cubical_prism(g, h, phi, &s).unwrap();
            for (c, _) in hs.iter() {
                assert!(c.is_graph_hom(h));
            }
            let mut lhs = cube_boundary(&hs);
            if n > 0 {
                lhs.add_scaled(&Int::ONE, &cubical_prism_chain(g, h, phi, &s.boundary()).unwrap());
            }
            let mut rhs = push_cube(phi.end(), &s);
            rhs.add_scaled(&Int::from(-1), &push_cube(phi.start(), &s));
            assert_eq!(lhs, rhs, "cube {:?}", s.labels());
        }
    }
}

fn check_path_identity(g: &Graph, h: &Graph, phi: &Homotopy, max_dim: usize) {
    for n in 0..=max_dim {
        let omega = omega_basis(g, n).unwrap();
        let tuples = omega.ambient.to_tuples();
        for col in omega.vectors.columns() {
            let x = Chain::from_terms(n, col.iter().map(|(i, v)| (tuples[i as usize].clone(), v.clone())));
            assert!(in_omega(g, &x));
            let hx = path_prism(g, h, phi, &x).unwrap();
            assert!(in_omega(h, &hx));
            let mut lhs = path_boundary(&hx);
            if n > 0 {
                lhs.add_scaled(&Int::ONE, &path_prism(g, h, phi, &path_boundary(&x)).unwrap());
            }
            let mut rhs = push_paths(phi.end(), &x);
            rhs.add_scaled(&Int::from(-1), &push_paths(phi.start(), &x));
            assert_eq!(lhs, rhs);
        }
    }
}

fn bettis(g: &Graph, max_dim: usize) -> (Vec<usize>, Vec<usize>) {
    let opts = ComputeOptions::default();
    let cube = cubical_homology_range(g, max_dim, &opts)
        .unwrap()
        .into_iter()
        .map(|d| d.summary.group.betti)
        .collect();
    let path = path_homology_range(g, max_dim, &opts)
        .unwrap()
        .into_iter()
        .map(|s| s.group.betti)
        .collect();
    (cube, path)
}

#[test]
fn rotation_of_a_pentagon() {
    let z5 = generate(Family::Cycle(5)).unwrap();
    let rot = VertexMap::new(vec![1, 2, 3, 4, 0]);
    let phi = Homotopy::new(vec![VertexMap::identity(5), rot]);
    assert!(verify_homotopy(&z5, &z5, &phi).unwrap());
    check_cubical_identity(&z5, &z5, &phi, 2);
    check_path_identity(&z5, &z5, &phi, 2);
}

#[test]
fn prism_of_a_single_edge_path() {
    let z4 = generate(Family::Cycle(4)).unwrap();
    let phi = Homotopy::new(vec![VertexMap::identity(4), VertexMap::new(vec![1, 1, 2, 2])]);
    assert!(verify_homotopy(&z4, &z4, &phi).unwrap());
    let x = Chain::from_terms(1, [(PathTuple::new(vec![0, 3]).unwrap(), Int::ONE)]);
    let hx = path_prism(&z4, &z4, &phi, &x).unwrap();
    // (0,3) -> (1,2): the square 0,1,2 / 0,3,2 appears
    let expected = Chain::from_terms(
        2,
        [
            (PathTuple::new(vec![0, 1, 2]).unwrap(), Int::ONE),
            (PathTuple::new(vec![0, 3, 2]).unwrap(), Int::from(-1)),
        ],
    );
    assert_eq!(hx, expected);
}

#[test]
fn chain_homotopy_identity_on_random_graphs() {
    let mut r = rng(41);
    for _ in 0..12 {
        let n = r.gen_range(3..7);
        let g = random_graph(&mut r, n, 0.5);
        let m = r.gen_range(3..7);
        let h = random_graph(&mut r, m, 0.5);
        let steps = r.gen_range(1..4);
        let phi = random_homotopy(&mut r, &g, &h, steps);
        assert!(verify_homotopy(&g, &h, &phi).unwrap());
        check_cubical_identity(&g, &h, &phi, 2);
        check_path_identity(&g, &h, &phi, 2);
    }
}

#[test]
fn one_step_retractions_compose_to_homotopy_equivalences() {
    let mut r = rng(7);
    for _ in 0..8 {
        let n = r.gen_range(4..8);
        let g = random_graph(&mut r, n, 0.45);
        let d = dismantle(&g);
        for rec in &d.trace {
            let size = rec.step.map.domain_size();
            let phi = retraction_homotopy(size, &rec.step.map);
            assert_eq!(phi.len(), 1);
        }
        // i ∘ r is homotopic to the identity through the folds, one at a time
        let ret = d.retraction(g.vertex_count());
        let back = ret.then(&d.inclusion());
        assert!(is_graph_hom(&g, &g, &back).unwrap());
        let mut maps = vec![VertexMap::identity(g.vertex_count())];
        let mut current: Vec<usize> = (0..g.vertex_count()).collect();
        for rec in &d.trace {
            for v in current.iter_mut() {
                if *v == rec.removed {
                    *v = rec.onto;
                }
            }
            maps.push(VertexMap::new(current.iter().map(|&v| v as u32).collect()));
        }
        let phi = Homotopy::new(maps);
        assert_eq!(phi.end(), &back);
        assert!(verify_homotopy(&g, &g, &phi).unwrap());
        check_path_identity(&g, &g, &phi, 2);
    }
}

#[test]
fn betti_numbers_survive_dismantling() {
    let mut r = rng(2024);
    for _ in 0..50 {
        let n = r.gen_range(3..8);
        let g = random_graph(&mut r, n, 0.4);
        let d = dismantle(&g);
        assert!(find_fold(&d.core).is_none());
        assert_eq!(bettis(&g, 2), bettis(&d.core, 2), "{:?}", g.edges());
    }
}

#[test]
fn retracting_a_product_factor() {
    let z4 = generate(Family::Cycle(4)).unwrap();
    let p3 = generate(Family::Path(3)).unwrap();
    let k1 = Graph::edgeless(1);
    let big = product(ProductKind::Box, &z4, &p3).unwrap();
    let small = product(ProductKind::Box, &z4, &k1).unwrap();
    assert_eq!(bettis(&big, 2), bettis(&small, 2));
    assert_eq!(bettis(&small, 2), (vec![1, 0, 0], vec![1, 0, 0]));
    let z5 = generate(Family::Cycle(5)).unwrap();
    let big = product(ProductKind::Box, &z5, &p3).unwrap();
    assert_eq!(bettis(&big, 1), (vec![1, 1], vec![1, 1]));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn folds_are_one_step_retractions(seed in any::<u64>(), n in 2usize..9) {
        let mut r = rng(seed);
        let g = random_graph(&mut r, n, 0.5);
        if let Some((x, y)) = find_fold(&g) {
            let mut image: Vec<u32> = (0..n as u32).collect();
            image[x] = y as u32;
            let kept: Vec<usize> = (0..n).filter(|&v| v != x).collect();
            prop_assert!(verify_one_step_retraction(&g, &kept, &VertexMap::new(image)).unwrap());
        }
        let d = dismantle(&g);
        prop_assert_eq!(d.core.vertex_count() + d.trace.len(), n);
        prop_assert!(is_graph_hom(&g, &d.core, &d.retraction(n)).unwrap());
        prop_assert_eq!(d.core.component_count(), g.component_count());
    }
}
