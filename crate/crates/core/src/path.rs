//! GLMY path homology of an undirected graph.
//!
//! Allowed n-paths are walks `(v_0, ..., v_n)` along edges. The chain group
//! `Omega_n` consists of the combinations of allowed paths whose boundary is
//! again allowed; it is computed as an integer kernel of the boundary
//! followed by projection onto the non-allowed tuples it actually hits.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::io::{self, Write};

use serde::{Deserialize, Serialize};

use crate::chain::{check_composition, Chain, ComplexSlice, ComputeOptions};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::linalg::{
    homology_of_pair_detailed, integer_kernel_basis, ImageSolver, Int, IntMatrix, PairSummary,
    SparseVec,
};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct PathTuple {
    verts: Vec<u32>,
}

impl PathTuple {
    pub fn new(verts: Vec<u32>) -> Result<Self> {
        if verts.is_empty() {
            return Err(Error::InvalidParameter("a path needs at least one vertex".into()));
        }
        Ok(PathTuple { verts })
    }

    pub fn verts(&self) -> &[u32] {
        &self.verts
    }

    pub fn dim(&self) -> usize {
        self.verts.len() - 1
    }

    pub fn is_degenerate(&self) -> bool {
        is_degenerate(&self.verts)
    }

    pub fn is_allowed(&self, g: &Graph) -> bool {
        is_allowed(&self.verts, g)
    }

    /// `sum_i (-1)^i (v_0, ..., ^v_i, ..., v_n)`, degenerate tuples dropped.
    pub fn boundary(&self) -> Chain<PathTuple> {
        let mut c = Chain::zero(self.dim().saturating_sub(1));
        if self.dim() == 0 {
            return c;
        }
        let mut buf = Vec::with_capacity(self.verts.len() - 1);
        for i in 0..self.verts.len() {
            delete_into(&self.verts, i, &mut buf);
            if !is_degenerate(&buf) {
                let s: i64 = if i % 2 == 0 { 1 } else { -1 };
                c.add_term(PathTuple { verts: buf.clone() }, &s.into());
            }
        }
        c
    }
}

pub fn is_degenerate(verts: &[u32]) -> bool {
    verts.windows(2).any(|w| w[0] == w[1])
}

pub fn is_allowed(verts: &[u32], g: &Graph) -> bool {
    verts.iter().all(|&v| (v as usize) < g.vertex_count())
        && verts.windows(2).all(|w| g.has_edge(w[0] as usize, w[1] as usize))
}

fn delete_into(verts: &[u32], i: usize, out: &mut Vec<u32>) {
    out.clear();
    out.extend_from_slice(&verts[..i]);
    out.extend_from_slice(&verts[i + 1..]);
}

/// Sorted flat list of allowed paths of one dimension.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PathBasis {
    dim: usize,
    verts: Vec<u32>,
}

impl PathBasis {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.verts.len() / (self.dim + 1)
    }

    pub fn is_empty(&self) -> bool {
        self.verts.is_empty()
    }

    pub fn get(&self, i: usize) -> &[u32] {
        let w = self.dim + 1;
        &self.verts[i * w..(i + 1) * w]
    }

    pub fn iter(&self) -> impl Iterator<Item = &[u32]> {
        self.verts.chunks_exact(self.dim + 1)
    }

    pub fn to_tuples(&self) -> Vec<PathTuple> {
        self.iter().map(|v| PathTuple { verts: v.to_vec() }).collect()
    }

    pub fn index_of(&self, verts: &[u32]) -> Option<usize> {
        if verts.len() != self.dim + 1 {
            return None;
        }
        let (mut lo, mut hi) = (0, self.len());
        while lo < hi {
            let mid = (lo + hi) / 2;
            match self.get(mid).cmp(verts) {
                std::cmp::Ordering::Less => lo = mid + 1,
                std::cmp::Ordering::Greater => hi = mid,
                std::cmp::Ordering::Equal => return Some(mid),
            }
        }
        None
    }
}

/// All walks with `n` steps, in lexicographic order.
pub fn enumerate_allowed(g: &Graph, n: usize) -> PathBasis {
    enumerate_capped(g, n, usize::MAX).expect("no cap")
}

fn enumerate_capped(g: &Graph, n: usize, cap: usize) -> Result<PathBasis> {
    fn extend(g: &Graph, n: usize, cur: &mut Vec<u32>, out: &mut Vec<u32>, count: &mut usize, cap: usize) -> bool {
        if cur.len() == n + 1 {
            *count += 1;
            out.extend_from_slice(cur);
            return *count <= cap;
        }
        let last = *cur.last().unwrap() as usize;
        for &w in g.neighbors(last) {
            cur.push(w);
            let ok = extend(g, n, cur, out, count, cap);
            cur.pop();
            if !ok {
                return false;
            }
        }
        true
    }
    let mut verts = Vec::new();
    let mut count = 0;
    let mut cur = Vec::with_capacity(n + 1);
    for v in 0..g.vertex_count() as u32 {
        cur.push(v);
        let ok = extend(g, n, &mut cur, &mut verts, &mut count, cap);
        cur.pop();
        if !ok {
            return Err(Error::ResourceLimit {
                what: format!("allowed {n}-paths"),
                count,
                cap,
            });
        }
    }
    Ok(PathBasis { dim: n, verts })
}

/// A Z-basis of `Omega_n`, as columns over the allowed n-paths.
#[derive(Clone, Debug)]
pub struct OmegaBasis {
    pub dim: usize,
    pub ambient: PathBasis,
    pub vectors: IntMatrix,
}

impl OmegaBasis {
    pub fn rank(&self) -> usize {
        self.vectors.cols()
    }

    /// Column `j` as a signed sum of tuples, 1-based like `(1,2,3) - (1,4,3)`.
    pub fn describe(&self, j: usize) -> String {
        let mut s = String::new();
        for (k, (i, c)) in self.vectors.column(j).iter().enumerate() {
            let tuple: Vec<String> = self.ambient.get(i as usize).iter().map(|v| (v + 1).to_string()).collect();
            let mag = c.abs();
            let neg = c.is_negative();
            if k == 0 {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            if !mag.is_one() {
                let _ = write!(s, "{mag}");
            }
            let _ = write!(s, "({})", tuple.join(","));
        }
        s
    }

    pub fn write_text<W: Write>(&self, mut w: W) -> io::Result<()> {
        for j in 0..self.rank() {
            writeln!(w, "{}", self.describe(j))?;
        }
        Ok(())
    }
}

/// Boundary of an allowed path split into allowed and non-allowed parts.
fn split_boundary(
    g: &Graph,
    verts: &[u32],
    lower: Option<&PathBasis>,
    buf: &mut Vec<u32>,
    mut allowed: impl FnMut(u32, i64),
    mut other: impl FnMut(&[u32], i64),
) {
    if verts.len() < 2 {
        return;
    }
    for i in 0..verts.len() {
        delete_into(verts, i, buf);
        if is_degenerate(buf) {
            continue;
        }
        let s = if i % 2 == 0 { 1 } else { -1 };
        if is_allowed(buf, g) {
            if let Some(l) = lower {
                allowed(l.index_of(buf).expect("allowed tuple is enumerated") as u32, s);
            }
        } else {
            other(buf, s);
        }
    }
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, mut x: usize) -> usize {
        while self.0[x] != x {
            self.0[x] = self.0[self.0[x]];
            x = self.0[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb)] = ra.min(rb);
        }
    }
}

pub fn omega_basis(g: &Graph, n: usize) -> Result<OmegaBasis> {
    omega_from_ambient(g, enumerate_allowed(g, n))
}

fn omega_from_ambient(g: &Graph, ambient: PathBasis) -> Result<OmegaBasis> {
    let n = ambient.dim();
    let count = ambient.len();
    // rows: non-allowed tuples hit by some boundary
    let mut row_of: HashMap<Vec<u32>, u32> = HashMap::new();
    let mut columns: Vec<Vec<(u32, i64)>> = Vec::with_capacity(count);
    let mut buf = Vec::new();
    for verts in ambient.iter() {
        let mut col = Vec::new();
        split_boundary(g, verts, None, &mut buf, |_, _| {}, |t, s| {
            let next = row_of.len() as u32;
            let r = *row_of.entry(t.to_vec()).or_insert(next);
            col.push((r, s));
        });
        columns.push(col);
    }
    let rows = row_of.len();
    // columns sharing a row must be solved together
    let mut uf = UnionFind((0..count + rows).collect());
    for (j, col) in columns.iter().enumerate() {
        for &(r, _) in col {
            uf.union(j, count + r as usize);
        }
    }
    let mut blocks: HashMap<usize, Vec<usize>> = HashMap::new();
    let mut order = Vec::new();
    for j in 0..count {
        let root = uf.find(j);
        let entry = blocks.entry(root).or_default();
        if entry.is_empty() {
            order.push(root);
        }
        entry.push(j);
    }
    let mut vectors: Vec<SparseVec> = Vec::new();
    for root in order {
        let members = &blocks[&root];
        if members.len() == 1 && columns[members[0]].is_empty() {
            vectors.push(SparseVec::unit(members[0] as u32));
            continue;
        }
        let mut local_row: HashMap<u32, u32> = HashMap::new();
        let local_cols: Vec<SparseVec> = members
            .iter()
            .map(|&j| {
                SparseVec::from_small_pairs(
                    columns[j]
                        .iter()
                        .map(|&(r, s)| {
                            let next = local_row.len() as u32;
                            (*local_row.entry(r).or_insert(next), s)
                        })
                        .collect(),
                )
            })
            .collect();
        let block = IntMatrix::from_columns(local_row.len(), local_cols)?;
        let kernel = integer_kernel_basis(&block);
        for k in kernel.columns() {
            vectors.push(SparseVec::from_pairs(
                k.iter().map(|(i, v)| (members[i as usize] as u32, v.clone())),
            ));
        }
    }
    let vectors = IntMatrix::from_columns(count, vectors)?;
    Ok(OmegaBasis {
        dim: n,
        ambient,
        vectors,
    })
}

/// Path chain complex up to some dimension, with the solvers needed to
/// rewrite ambient chains in Omega coordinates.
pub struct PathComplex<'g> {
    graph: &'g Graph,
    slices: Vec<ComplexSlice<OmegaBasis>>,
    solvers: Vec<ImageSolver>,
}

impl<'g> PathComplex<'g> {
    pub fn build(g: &'g Graph, max_dim: usize, cap: usize) -> Result<Self> {
        let mut pc = PathComplex {
            graph: g,
            slices: Vec::new(),
            solvers: Vec::new(),
        };
        for n in 0..=max_dim {
            let omega = omega_from_ambient(g, enumerate_capped(g, n, cap)?)?;
            let boundary = if n == 0 {
                IntMatrix::zeros(0, omega.rank())
            } else {
                let cols = omega
                    .vectors
                    .columns()
                    .iter()
                    .map(|x| {
                        let b = pc.ambient_boundary(n, &omega.ambient, x)?;
                        pc.solvers[n - 1].solve_integer(&b)
                    })
                    .collect::<Result<Vec<_>>>()?;
                IntMatrix::from_columns(pc.slices[n - 1].rank(), cols)?
            };
            let s = ComplexSlice {
                dim: n,
                basis: omega,
                boundary,
            };
            if let Some(prev) = pc.slices.last() {
                check_composition(prev, &s)?;
            }
            pc.solvers.push(ImageSolver::new(&s.basis.vectors));
            pc.slices.push(s);
        }
        Ok(pc)
    }

    pub fn graph(&self) -> &Graph {
        self.graph
    }

    pub fn max_dim(&self) -> usize {
        self.slices.len() - 1
    }

    pub fn slices(&self) -> &[ComplexSlice<OmegaBasis>] {
        &self.slices
    }

    pub fn slice(&self, n: usize) -> &ComplexSlice<OmegaBasis> {
        &self.slices[n]
    }

    pub fn into_slices(self) -> Vec<ComplexSlice<OmegaBasis>> {
        self.slices
    }

    /// Boundary of an ambient n-chain over `ambient`, in ambient (n-1)
    /// coordinates; fails if any non-allowed tuple survives.
    fn ambient_boundary(&self, n: usize, ambient: &PathBasis, x: &SparseVec) -> Result<SparseVec> {
        let lower = &self.slices[n - 1].basis.ambient;
        let mut pairs = Vec::new();
        let mut stray: HashMap<Vec<u32>, Int> = HashMap::new();
        let mut buf = Vec::new();
        for (i, c) in x.iter() {
            split_boundary(
                self.graph,
                ambient.get(i as usize),
                Some(lower),
                &mut buf,
                |r, s| pairs.push((r, c * &Int::from(s))),
                |t, s| *stray.entry(t.to_vec()).or_default() += &(c * &Int::from(s)),
            );
        }
        if stray.values().any(|v| !v.is_zero()) {
            return Err(Error::ContractViolation(format!(
                "boundary of a {n}-chain leaves the allowed paths"
            )));
        }
        Ok(SparseVec::from_pairs(pairs))
    }

    /// Ambient coordinates of a chain of allowed tuples.
    pub fn ambient_vector(&self, chain: &Chain<PathTuple>) -> Result<SparseVec> {
        let n = chain.dim();
        let basis = &self.slices[n].basis.ambient;
        chain
            .to_vector(|t| basis.index_of(t.verts()))
            .ok_or_else(|| Error::ContractViolation("chain contains a non-allowed tuple".into()))
    }

    /// Omega coordinates of an ambient vector; fails if it is not in Omega_n.
    pub fn omega_coordinates(&self, n: usize, ambient: &SparseVec) -> Result<SparseVec> {
        self.solvers[n].solve_integer(ambient).map_err(|_| {
            Error::ContractViolation(format!("chain is not in Omega_{n}"))
        })
    }

    /// Whether an ambient n-chain lies in Omega_n.
    pub fn in_omega(&self, n: usize, ambient: &SparseVec) -> bool {
        n == 0 || self.ambient_boundary(n, &self.slices[n].basis.ambient, ambient).is_ok()
    }

    pub fn homology(&self, n: usize, opts: &ComputeOptions) -> Result<PairSummary> {
        if n >= self.max_dim() {
            return Err(Error::InvalidParameter(format!(
                "H_{n} needs Omega_{} but the complex stops at {}",
                n + 1,
                self.max_dim()
            )));
        }
        homology_of_pair_detailed(
            &self.slices[n].boundary,
            &self.slices[n + 1].boundary,
            opts.coefficients,
        )
    }
}

pub fn path_complex(g: &Graph, max_dim: usize) -> Result<Vec<ComplexSlice<OmegaBasis>>> {
    Ok(PathComplex::build(g, max_dim, usize::MAX)?.into_slices())
}

pub fn path_homology(g: &Graph, n: usize, opts: &ComputeOptions) -> Result<PairSummary> {
    PathComplex::build(g, n + 1, opts.cap)?.homology(n, opts)
}

pub fn path_homology_range(g: &Graph, max_dim: usize, opts: &ComputeOptions) -> Result<Vec<PairSummary>> {
    let pc = PathComplex::build(g, max_dim + 1, opts.cap)?;
    (0..=max_dim).map(|n| pc.homology(n, opts)).collect()
}
