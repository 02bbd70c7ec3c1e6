//! Finite simple undirected graphs and the structural predicates used by the
//! reduction theorems.

mod build;
pub mod io;

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use build::{
    combine, generate, product, CombineKind, Family, ProductKind, COUNTEREXAMPLE10_EDGES,
};

/// Vertices are `0..vertex_count`; adjacency lists are sorted, symmetric and
/// loop-free. Equality compares labeled structure and ignores the name.
#[derive(Clone, Debug)]
pub struct Graph {
    adjacency: Vec<Vec<u32>>,
    name: Option<String>,
}

impl PartialEq for Graph {
    fn eq(&self, other: &Graph) -> bool {
        self.adjacency == other.adjacency
    }
}

impl Eq for Graph {}

impl Graph {
    /// Symmetric closure of `edges`; duplicate pairs collapse.
    pub fn new(vertex_count: usize, edges: &[(usize, usize)]) -> Result<Graph> {
        let mut adjacency = vec![Vec::new(); vertex_count];
        for &(u, v) in edges {
            for w in [u, v] {
                if w >= vertex_count {
                    return Err(Error::VertexOutOfRange {
                        vertex: w,
                        count: vertex_count,
                    });
                }
            }
            if u == v {
                return Err(Error::SelfLoop(u));
            }
            adjacency[u].push(v as u32);
            adjacency[v].push(u as u32);
        }
        for list in &mut adjacency {
            list.sort_unstable();
            list.dedup();
        }
        Ok(Graph {
            adjacency,
            name: None,
        })
    }

    pub fn edgeless(vertex_count: usize) -> Graph {
        Graph {
            adjacency: vec![Vec::new(); vertex_count],
            name: None,
        }
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Graph {
        self.name = Some(name.into());
        self
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn vertex_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn neighbors(&self, v: usize) -> &[u32] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.vertex_count() && self.adjacency[u].binary_search(&(v as u32)).is_ok()
    }

    /// Equal or adjacent.
    pub fn adjacent_or_equal(&self, u: usize, v: usize) -> bool {
        u == v || self.has_edge(u, v)
    }

    /// Edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for (u, list) in self.adjacency.iter().enumerate() {
            for &v in list {
                if u < v as usize {
                    out.push((u, v as usize));
                }
            }
        }
        out
    }

    /// Induced subgraph on `kept` (in the given order); vertex `i` of the
    /// result is `kept[i]`.
    pub fn induced(&self, kept: &[usize]) -> Graph {
        let mut position = vec![u32::MAX; self.vertex_count()];
        for (i, &v) in kept.iter().enumerate() {
            position[v] = i as u32;
        }
        let adjacency = kept
            .iter()
            .map(|&v| {
                let mut list: Vec<u32> = self.adjacency[v]
                    .iter()
                    .filter_map(|&w| {
                        let p = position[w as usize];
                        (p != u32::MAX).then_some(p)
                    })
                    .collect();
                list.sort_unstable();
                list
            })
            .collect();
        Graph {
            adjacency,
            name: None,
        }
    }

    /// Component id per vertex, numbered in order of smallest member.
    pub fn components(&self) -> Vec<usize> {
        let n = self.vertex_count();
        let mut comp = vec![usize::MAX; n];
        let mut next = 0;
        for s in 0..n {
            if comp[s] != usize::MAX {
                continue;
            }
            comp[s] = next;
            let mut queue = VecDeque::from([s]);
            while let Some(u) = queue.pop_front() {
                for &w in &self.adjacency[u] {
                    if comp[w as usize] == usize::MAX {
                        comp[w as usize] = next;
                        queue.push_back(w as usize);
                    }
                }
            }
            next += 1;
        }
        comp
    }

    pub fn component_count(&self) -> usize {
        self.components().into_iter().max().map_or(0, |m| m + 1)
    }

    /// Length of a shortest cycle, `None` for forests.
    pub fn girth(&self) -> Option<usize> {
        let n = self.vertex_count();
        let mut best: Option<usize> = None;
        let mut dist = vec![usize::MAX; n];
        let mut parent = vec![usize::MAX; n];
        for s in 0..n {
            dist.fill(usize::MAX);
            dist[s] = 0;
            let mut queue = VecDeque::from([s]);
            while let Some(u) = queue.pop_front() {
                for &w in &self.adjacency[u] {
                    let w = w as usize;
                    if dist[w] == usize::MAX {
                        dist[w] = dist[u] + 1;
                        parent[w] = u;
                        queue.push_back(w);
                    } else if parent[u] != w {
                        let len = dist[u] + dist[w] + 1;
                        if best.is_none_or(|b| len < b) {
                            best = Some(len);
                        }
                    }
                }
            }
        }
        best
    }

    /// An ordering in which the earlier neighbours of every vertex form a
    /// clique, or `None` when the graph is not chordal. Computed by maximum
    /// cardinality search and then verified.
    pub fn perfect_elimination_ordering(&self) -> Option<Vec<usize>> {
        let n = self.vertex_count();
        let mut weight = vec![0usize; n];
        let mut visited = vec![false; n];
        let mut order = Vec::with_capacity(n);
        for _ in 0..n {
            let v = (0..n)
                .filter(|&v| !visited[v])
                .max_by_key(|&v| (weight[v], std::cmp::Reverse(v)))
                .expect("unvisited vertex remains");
            visited[v] = true;
            order.push(v);
            for &w in &self.adjacency[v] {
                weight[w as usize] += 1;
            }
        }
        self.is_elimination_ordering(&order).then_some(order)
    }

    /// Checks that the earlier neighbours of each vertex are pairwise adjacent.
    pub fn is_elimination_ordering(&self, order: &[usize]) -> bool {
        let n = self.vertex_count();
        if order.len() != n {
            return false;
        }
        let mut position = vec![usize::MAX; n];
        for (i, &v) in order.iter().enumerate() {
            if v >= n || position[v] != usize::MAX {
                return false;
            }
            position[v] = i;
        }
        order.iter().enumerate().all(|(i, &v)| {
            let earlier: Vec<usize> = self.adjacency[v]
                .iter()
                .map(|&w| w as usize)
                .filter(|&w| position[w] < i)
                .collect();
            earlier
                .iter()
                .enumerate()
                .all(|(a, &x)| earlier[a + 1..].iter().all(|&y| self.has_edge(x, y)))
        })
    }
}

/// A map on vertex ids, `image[v] = f(v)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct VertexMap {
    pub image: Vec<u32>,
}

impl VertexMap {
    pub fn new(image: Vec<u32>) -> Self {
        VertexMap { image }
    }

    pub fn identity(n: usize) -> Self {
        VertexMap {
            image: (0..n as u32).collect(),
        }
    }

    pub fn constant(n: usize, target: usize) -> Self {
        VertexMap {
            image: vec![target as u32; n],
        }
    }

    pub fn domain_size(&self) -> usize {
        self.image.len()
    }

    pub fn apply(&self, v: usize) -> usize {
        self.image[v] as usize
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &VertexMap) -> VertexMap {
        VertexMap {
            image: self.image.iter().map(|&v| other.image[v as usize]).collect(),
        }
    }

    fn check(&self, domain: &Graph, codomain: &Graph) -> Result<()> {
        if self.image.len() != domain.vertex_count() {
            return Err(Error::DimensionMismatch(format!(
                "map has {} entries, domain has {} vertices",
                self.image.len(),
                domain.vertex_count()
            )));
        }
        if let Some(&bad) = self
            .image
            .iter()
            .find(|&&v| v as usize >= codomain.vertex_count())
        {
            return Err(Error::VertexOutOfRange {
                vertex: bad as usize,
                count: codomain.vertex_count(),
            });
        }
        Ok(())
    }
}

/// Every edge of `g` maps to an edge of `h` or collapses to a vertex.
pub fn is_graph_hom(g: &Graph, h: &Graph, f: &VertexMap) -> Result<bool> {
    f.check(g, h)?;
    Ok(g
        .edges()
        .into_iter()
        .all(|(u, v)| h.adjacent_or_equal(f.apply(u), f.apply(v))))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn make_graph_examples() {
        let c4 = Graph::new(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        assert_eq!(c4.edge_count(), 4);
        assert_eq!(c4, generate(Family::Cycle(4)).unwrap());
        let k1 = Graph::new(1, &[]).unwrap();
        assert_eq!((k1.vertex_count(), k1.edge_count()), (1, 0));
        let dup = Graph::new(3, &[(0, 1), (0, 1)]).unwrap();
        assert_eq!(dup.edges(), vec![(0, 1)]);
        assert_eq!(dup.degree(2), 0);
    }

    #[test]
    fn make_graph_errors() {
        assert_eq!(
            Graph::new(2, &[(0, 2)]),
            Err(Error::VertexOutOfRange { vertex: 2, count: 2 })
        );
        assert_eq!(Graph::new(2, &[(1, 1)]), Err(Error::SelfLoop(1)));
    }

    #[test]
    fn hom_examples() {
        let z5 = generate(Family::Cycle(5)).unwrap();
        assert!(is_graph_hom(&z5, &z5, &VertexMap::identity(5)).unwrap());
        let k1 = Graph::edgeless(1);
        assert!(is_graph_hom(&z5, &k1, &VertexMap::constant(5, 0)).unwrap());
        let rot = VertexMap::new(vec![1, 2, 3, 4, 0]);
        assert!(is_graph_hom(&z5, &z5, &rot).unwrap());
        // 0 ~ 1 but 0 -> 0 and 1 -> 2 are not adjacent
        let bad = VertexMap::new(vec![0, 2, 3, 4, 0]);
        assert!(!is_graph_hom(&z5, &z5, &bad).unwrap());
        assert!(is_graph_hom(&z5, &z5, &VertexMap::identity(4)).is_err());
    }

    #[test]
    fn girth_examples() {
        assert_eq!(generate(Family::Cycle(5)).unwrap().girth(), Some(5));
        assert_eq!(generate(Family::Path(6)).unwrap().girth(), None);
        assert_eq!(generate(Family::Counterexample10).unwrap().girth(), Some(4));
        assert_eq!(generate(Family::Complete(4)).unwrap().girth(), Some(3));
    }

    #[test]
    fn chordality() {
        let tree = Graph::new(6, &[(0, 1), (0, 2), (1, 3), (1, 4), (2, 5)]).unwrap();
        let order = tree.perfect_elimination_ordering().unwrap();
        assert!(tree.is_elimination_ordering(&order));
        assert!(generate(Family::Cycle(4)).unwrap().perfect_elimination_ordering().is_none());
        assert!(generate(Family::Complete(5)).unwrap().perfect_elimination_ordering().is_some());
        assert!(!generate(Family::Cycle(4)).unwrap().is_elimination_ordering(&[0, 1, 2, 3]));
    }

    #[test]
    fn components_and_induced() {
        let g = Graph::new(5, &[(0, 1), (3, 4)]).unwrap();
        assert_eq!(g.components(), vec![0, 0, 1, 2, 2]);
        assert_eq!(g.component_count(), 3);
        let h = g.induced(&[4, 3, 0]);
        assert_eq!(h.edges(), vec![(0, 1)]);
    }
}
