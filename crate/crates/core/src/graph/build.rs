//! Named generators and graph constructions.

use serde::{Deserialize, Serialize};

use super::Graph;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Cycle(usize),
    Complete(usize),
    /// Path on `k` vertices.
    Path(usize),
    Hypercube(usize),
    CompleteBipartite(usize, usize),
    /// The 10-vertex bipartite graph whose cubical and path homology differ.
    Counterexample10,
}

/// Edges of the counterexample graph with the usual 1-based labels.
pub const COUNTEREXAMPLE10_EDGES: [(usize, usize); 16] = [
    (1, 2),
    (1, 3),
    (1, 4),
    (1, 5),
    (2, 6),
    (2, 7),
    (3, 6),
    (3, 8),
    (4, 7),
    (4, 9),
    (5, 8),
    (5, 9),
    (6, 10),
    (7, 10),
    (8, 10),
    (9, 10),
];

fn at_least(what: &str, k: usize, min: usize) -> Result<()> {
    if k < min {
        return Err(Error::InvalidParameter(format!(
            "{what} needs size at least {min}, got {k}"
        )));
    }
    Ok(())
}

/// Canonical labelings: cycles and paths in order around, hypercube vertex
/// `v` has coordinate `i` equal to bit `i - 1` of `v`, complete bipartite
/// parts are `0..s` and `s..s + t`.
pub fn generate(family: Family) -> Result<Graph> {
    let (graph, name) = match family {
        Family::Cycle(k) => {
            at_least("cycle", k, 3)?;
            let edges: Vec<_> = (0..k).map(|i| (i, (i + 1) % k)).collect();
            (Graph::new(k, &edges)?, format!("Z{k}"))
        }
        Family::Complete(k) => {
            at_least("complete graph", k, 1)?;
            let edges: Vec<_> = (0..k)
                .flat_map(|i| (i + 1..k).map(move |j| (i, j)))
                .collect();
            (Graph::new(k, &edges)?, format!("K{k}"))
        }
        Family::Path(k) => {
            at_least("path", k, 1)?;
            let edges: Vec<_> = (1..k).map(|i| (i - 1, i)).collect();
            (Graph::new(k, &edges)?, format!("P{k}"))
        }
        Family::Hypercube(n) => {
            if n > 24 {
                return Err(Error::InvalidParameter(format!("hypercube {n} is too large")));
            }
            let size = 1usize << n;
            let edges: Vec<_> = (0..size)
                .flat_map(|v| (0..n).filter(move |b| v >> b & 1 == 0).map(move |b| (v, v | 1 << b)))
                .collect();
            (Graph::new(size, &edges)?, format!("Q{n}"))
        }
        Family::CompleteBipartite(s, t) => {
            at_least("complete bipartite part", s.min(t), 1)?;
            let edges: Vec<_> = (0..s)
                .flat_map(|i| (s..s + t).map(move |j| (i, j)))
                .collect();
            (Graph::new(s + t, &edges)?, format!("K{s},{t}"))
        }
        Family::Counterexample10 => {
            let edges: Vec<_> = COUNTEREXAMPLE10_EDGES
                .iter()
                .map(|&(u, v)| (u - 1, v - 1))
                .collect();
            (Graph::new(10, &edges)?, "counterexample10".to_string())
        }
    };
    Ok(graph.with_name(name))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProductKind {
    Box,
    Strong,
    Lexicographic,
}

/// Vertex `(a, b)` gets id `a * |V(h)| + b`.
pub fn product(kind: ProductKind, g: &Graph, h: &Graph) -> Result<Graph> {
    if g.vertex_count() == 0 || h.vertex_count() == 0 {
        return Err(Error::InvalidParameter("product of an empty graph".into()));
    }
    let m = h.vertex_count();
    let id = |a: usize, b: usize| a * m + b;
    let mut edges = Vec::new();
    let n = g.vertex_count() * m;
    for x in 0..n {
        let (a1, b1) = (x / m, x % m);
        for y in x + 1..n {
            let (a2, b2) = (y / m, y % m);
            let adjacent = match kind {
                ProductKind::Box => {
                    (a1 == a2 && h.has_edge(b1, b2)) || (b1 == b2 && g.has_edge(a1, a2))
                }
                ProductKind::Strong => {
                    g.adjacent_or_equal(a1, a2) && h.adjacent_or_equal(b1, b2)
                }
                ProductKind::Lexicographic => {
                    g.has_edge(a1, a2) || (a1 == a2 && h.has_edge(b1, b2))
                }
            };
            if adjacent {
                edges.push((id(a1, b1), id(a2, b2)));
            }
        }
    }
    Graph::new(n, &edges)
}

fn union(g: &Graph, h: &Graph, cross: bool) -> Graph {
    let off = g.vertex_count();
    let mut edges = g.edges();
    edges.extend(h.edges().into_iter().map(|(u, v)| (u + off, v + off)));
    if cross {
        for u in 0..off {
            edges.extend((0..h.vertex_count()).map(|v| (u, v + off)));
        }
    }
    Graph::new(off + h.vertex_count(), &edges).expect("edges of valid graphs")
}

#[derive(Clone, Copy, Debug)]
pub enum CombineKind<'a> {
    Join(&'a Graph),
    DisjointSum(&'a Graph),
    /// Join with one new vertex.
    Cone,
    /// Join with two new non-adjacent vertices.
    Suspension,
}

/// Vertices of `g` keep their ids; added vertices follow.
pub fn combine(g: &Graph, kind: CombineKind<'_>) -> Graph {
    match kind {
        CombineKind::Join(h) => union(g, h, true),
        CombineKind::DisjointSum(h) => union(g, h, false),
        CombineKind::Cone => union(g, &Graph::edgeless(1), true),
        CombineKind::Suspension => union(g, &Graph::edgeless(2), true),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generator_sizes() {
        let q3 = generate(Family::Hypercube(3)).unwrap();
        assert_eq!((q3.vertex_count(), q3.edge_count()), (8, 12));
        let cx = generate(Family::Counterexample10).unwrap();
        assert_eq!((cx.vertex_count(), cx.edge_count()), (10, 16));
        let degrees: Vec<_> = (0..10).map(|v| cx.degree(v)).collect();
        assert_eq!(degrees, vec![4, 3, 3, 3, 3, 3, 3, 3, 3, 4]);
        assert_eq!(generate(Family::Hypercube(0)).unwrap().vertex_count(), 1);
        assert!(generate(Family::Cycle(2)).is_err());
        assert!(generate(Family::Complete(0)).is_err());
        assert!(generate(Family::CompleteBipartite(0, 3)).is_err());
    }

    #[test]
    fn small_products() {
        let k2 = generate(Family::Complete(2)).unwrap();
        let boxed = product(ProductKind::Box, &k2, &k2).unwrap();
        // 0-1-3-2 is the square
        assert_eq!(boxed.edges(), vec![(0, 1), (0, 2), (1, 3), (2, 3)]);
        assert_eq!(boxed, generate(Family::Hypercube(2)).unwrap().induced(&[0, 1, 2, 3]));
        let strong = product(ProductKind::Strong, &k2, &k2).unwrap();
        assert_eq!(strong, generate(Family::Complete(4)).unwrap().induced(&[0, 1, 2, 3]));
        let lex = product(ProductKind::Lexicographic, &k2, &Graph::edgeless(2)).unwrap();
        assert_eq!(lex.edges(), vec![(0, 2), (0, 3), (1, 2), (1, 3)]);
        assert!(product(ProductKind::Box, &k2, &Graph::edgeless(0)).is_err());
    }

    #[test]
    fn iterated_box_is_hypercube() {
        let k2 = generate(Family::Complete(2)).unwrap();
        let mut g = Graph::edgeless(1);
        for n in 1..=4 {
            g = product(ProductKind::Box, &g, &k2).unwrap();
            let q = generate(Family::Hypercube(n)).unwrap();
            assert_eq!(g.edges(), q.edges());
        }
    }

    #[test]
    fn joins_and_sums() {
        let k1 = Graph::edgeless(1);
        assert_eq!(combine(&k1, CombineKind::Join(&k1)).edges(), vec![(0, 1)]);
        let z5 = generate(Family::Cycle(5)).unwrap();
        let two = combine(&z5, CombineKind::DisjointSum(&z5));
        assert_eq!((two.vertex_count(), two.edge_count()), (10, 10));
        assert_eq!(two.component_count(), 2);
        let s = combine(&Graph::edgeless(4), CombineKind::Suspension);
        let k24 = generate(Family::CompleteBipartite(4, 2)).unwrap();
        assert_eq!(s.edges(), k24.edges());
        let cone = combine(&z5, CombineKind::Cone);
        assert_eq!(cone.degree(5), 5);
    }
}
