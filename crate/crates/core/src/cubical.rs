//! Discrete cubical homology: singular cubes Q_n -> G, faces, boundaries.
//!
//! A cube is stored as its `2^n` vertex labels, vertex `x` of Q_n sitting at
//! position `x` where coordinate `i` is bit `i - 1` of `x` (colexicographic
//! order). Degenerate cubes are never stored; they are zero in the chain
//! groups.

use std::io::{self, Write};
use std::ops::ControlFlow;
use std::sync::atomic::{AtomicBool, AtomicUsize, Ordering};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::chain::{check_composition, Chain, ComplexSlice, ComputeOptions};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::linalg::{
    homology_of_pair_detailed, homology_streamed, ColumnStream, IntMatrix, PairSummary, SparseVec,
    StreamOutcome,
};

/// Largest cube dimension accepted anywhere.
pub const MAX_CUBE_DIM: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Sign {
    Minus,
    Plus,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct SingularCube {
    labels: Vec<u32>,
}

impl SingularCube {
    pub fn new(labels: Vec<u32>) -> Result<Self> {
        if !labels.len().is_power_of_two() || labels.len() > 1 << MAX_CUBE_DIM {
            return Err(Error::InvalidParameter(format!(
                "a cube needs 2^n labels, got {}",
                labels.len()
            )));
        }
        Ok(SingularCube { labels })
    }

    pub fn vertex(v: u32) -> Self {
        SingularCube { labels: vec![v] }
    }

    pub fn dim(&self) -> usize {
        self.labels.len().trailing_zeros() as usize
    }

    pub fn labels(&self) -> &[u32] {
        &self.labels
    }

    /// Restriction fixing coordinate `axis` (1-based) to 0 or 1; may be
    /// degenerate.
    pub fn face(&self, axis: usize, sign: Sign) -> Result<SingularCube> {
        if axis == 0 || axis > self.dim() {
            return Err(Error::InvalidParameter(format!(
                "axis {axis} out of range for a {}-cube",
                self.dim()
            )));
        }
        let mut out = Vec::with_capacity(self.labels.len() / 2);
        face_into(&self.labels, axis - 1, sign == Sign::Plus, &mut out);
        Ok(SingularCube { labels: out })
    }

    pub fn is_degenerate(&self) -> bool {
        is_degenerate(&self.labels)
    }

    pub fn is_graph_hom(&self, g: &Graph) -> bool {
        is_cube_hom(&self.labels, g)
    }

    /// `sum_i (-1)^i (f_i^- - f_i^+)` with degenerate faces dropped.
    pub fn boundary(&self) -> Chain<SingularCube> {
        let n = self.dim();
        let mut chain = Chain::zero(n.saturating_sub(1));
        let mut buf = Vec::new();
        for b in 0..n {
            let s: i64 = if b % 2 == 0 { -1 } else { 1 };
            for (plus, coef) in [(false, s), (true, -s)] {
                buf.clear();
                face_into(&self.labels, b, plus, &mut buf);
                if !is_degenerate(&buf) {
                    chain.add_term(SingularCube { labels: buf.clone() }, &coef.into());
                }
            }
        }
        chain
    }
}

/// Labels of the face with bit `bit` fixed, in colex order.
pub fn face_into(labels: &[u32], bit: usize, plus: bool, out: &mut Vec<u32>) {
    let mask = 1 << bit;
    let set = if plus { mask } else { 0 };
    out.extend(
        (0..labels.len())
            .filter(|x| x & mask == 0)
            .map(|x| labels[x | set]),
    );
}

pub fn is_degenerate(labels: &[u32]) -> bool {
    let m = labels.len();
    let n = m.trailing_zeros();
    (0..n).any(|b| {
        let mask = 1 << b;
        (0..m)
            .filter(|x| x & mask == 0)
            .all(|x| labels[x] == labels[x | mask])
    })
}

pub fn is_cube_hom(labels: &[u32], g: &Graph) -> bool {
    let m = labels.len();
    (0..m).all(|x| {
        let mut bits = x;
        while bits != 0 {
            let low = bits & bits.wrapping_neg();
            if !g.adjacent_or_equal(labels[x] as usize, labels[x ^ low] as usize) {
                return false;
            }
            bits ^= low;
        }
        true
    })
}

/// Sorted flat list of non-degenerate cubes of one dimension.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CubeBasis {
    dim: usize,
    labels: Vec<u32>,
}

impl CubeBasis {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn width(&self) -> usize {
        1 << self.dim
    }

    pub fn len(&self) -> usize {
        self.labels.len() / self.width()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn get(&self, i: usize) -> &[u32] {
        let w = self.width();
        &self.labels[i * w..(i + 1) * w]
    }

    pub fn cube(&self, i: usize) -> SingularCube {
        SingularCube {
            labels: self.get(i).to_vec(),
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = &[u32]> {
        self.labels.chunks_exact(self.width())
    }

    pub fn index_of(&self, labels: &[u32]) -> Option<usize> {
        if labels.len() != self.width() {
            return None;
        }
        let (mut lo, mut hi) = (0, self.len());
        while lo < hi {
            let mid = (lo + hi) / 2;
            match self.get(mid).cmp(labels) {
                std::cmp::Ordering::Less => lo = mid + 1,
                std::cmp::Ordering::Greater => hi = mid,
                std::cmp::Ordering::Equal => return Some(mid),
            }
        }
        None
    }

    /// One cube per line, labels separated by spaces.
    pub fn write_text<W: Write>(&self, mut w: W) -> io::Result<()> {
        for c in self.iter() {
            let line: Vec<String> = c.iter().map(u32::to_string).collect();
            writeln!(w, "{}", line.join(" "))?;
        }
        Ok(())
    }
}

/// Depth-first enumeration of cubes in colex position order. The label at
/// position `x` must be equal or adjacent to the labels at every `x` with
/// one bit cleared, so candidates are an intersection of closed
/// neighbourhoods; iterating them in increasing order yields cubes in
/// lexicographic order.
pub struct CubeEnumerator<'g> {
    graph: &'g Graph,
    n: usize,
    m: usize,
    words: usize,
    closed: Vec<u64>,
    earlier: Vec<Vec<usize>>,
}

impl<'g> CubeEnumerator<'g> {
    pub fn new(graph: &'g Graph, n: usize) -> Result<Self> {
        if n > MAX_CUBE_DIM {
            return Err(Error::InvalidParameter(format!(
                "cube dimension {n} exceeds {MAX_CUBE_DIM}"
            )));
        }
        let vcount = graph.vertex_count();
        let words = vcount.div_ceil(64).max(1);
        let mut closed = vec![0u64; vcount * words];
        for v in 0..vcount {
            let row = &mut closed[v * words..(v + 1) * words];
            row[v / 64] |= 1 << (v % 64);
            for &w in graph.neighbors(v) {
                row[w as usize / 64] |= 1 << (w % 64);
            }
        }
        let m = 1usize << n;
        let earlier = (0..m)
            .map(|x| (0..n).filter(|b| x >> b & 1 == 1).map(|b| x ^ 1 << b).collect())
            .collect();
        Ok(CubeEnumerator {
            graph,
            n,
            m,
            words,
            closed,
            earlier,
        })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// Prefixes of length `min(depth, 2^n)` that extend to homomorphisms
    /// positionally; every cube starts with exactly one of them.
    pub fn prefixes(&self, depth: usize) -> Vec<Vec<u32>> {
        let depth = depth.clamp(1, self.m);
        let mut out = Vec::new();
        let mut labels = vec![0u32; self.m];
        let mut cand = vec![0u64; self.m * self.words];
        let _ = self.descend(0, depth, &mut labels, &mut cand, &mut |l| {
            out.push(l[..depth].to_vec());
            ControlFlow::Continue(())
        }, false);
        out
    }

    /// Visits every non-degenerate cube whose first labels are `prefix`.
    pub fn walk(
        &self,
        prefix: &[u32],
        visit: &mut dyn FnMut(&[u32]) -> ControlFlow<()>,
    ) -> ControlFlow<()> {
        let mut labels = vec![0u32; self.m];
        for (i, &v) in prefix.iter().enumerate() {
            labels[i] = v;
        }
        for k in 1..prefix.len() {
            let ok = self.earlier[k]
                .iter()
                .all(|&j| self.graph.adjacent_or_equal(labels[k] as usize, labels[j] as usize));
            if !ok {
                return ControlFlow::Continue(());
            }
        }
        let mut cand = vec![0u64; self.m * self.words];
        self.descend(prefix.len(), self.m, &mut labels, &mut cand, visit, true)
    }

    fn descend(
        &self,
        k: usize,
        stop: usize,
        labels: &mut [u32],
        cand: &mut [u64],
        visit: &mut dyn FnMut(&[u32]) -> ControlFlow<()>,
        filter: bool,
    ) -> ControlFlow<()> {
        if k == stop {
            if filter && is_degenerate(labels) {
                return ControlFlow::Continue(());
            }
            return visit(labels);
        }
        let w = self.words;
        let vcount = self.graph.vertex_count();
        {
            let slot = &mut cand[k * w..(k + 1) * w];
            if self.earlier[k].is_empty() {
                for (i, word) in slot.iter_mut().enumerate() {
                    let lo = i * 64;
                    *word = if vcount >= lo + 64 {
                        u64::MAX
                    } else if vcount > lo {
                        (1u64 << (vcount - lo)) - 1
                    } else {
                        0
                    };
                }
            } else {
                let first = labels[self.earlier[k][0]] as usize;
                slot.copy_from_slice(&self.closed[first * w..(first + 1) * w]);
                for &j in &self.earlier[k][1..] {
                    let v = labels[j] as usize;
                    for (a, b) in slot.iter_mut().zip(&self.closed[v * w..(v + 1) * w]) {
                        *a &= b;
                    }
                }
            }
        }
        for i in 0..w {
            let mut bits = cand[k * w + i];
            while bits != 0 {
                let v = (i * 64) as u32 + bits.trailing_zeros();
                bits &= bits - 1;
                labels[k] = v;
                self.descend(k + 1, stop, labels, cand, visit, filter)?;
            }
        }
        ControlFlow::Continue(())
    }

    /// Number of non-degenerate cubes, without storing them.
    pub fn count(&self) -> u64 {
        self.prefixes(2)
            .par_iter()
            .map(|p| {
                let mut c = 0u64;
                let _ = self.walk(p, &mut |_| {
                    c += 1;
                    ControlFlow::Continue(())
                });
                c
            })
            .sum()
    }

    /// Sorted basis; fails once more than `cap` cubes have been produced.
    pub fn collect(&self, cap: usize) -> Result<CubeBasis> {
        let total = AtomicUsize::new(0);
        let over = AtomicBool::new(false);
        let parts: Vec<Vec<u32>> = self
            .prefixes(2)
            .par_iter()
            .map(|p| {
                let mut out = Vec::new();
                let _ = self.walk(p, &mut |l| {
                    if total.fetch_add(1, Ordering::Relaxed) >= cap {
                        over.store(true, Ordering::Relaxed);
                        return ControlFlow::Break(());
                    }
                    out.extend_from_slice(l);
                    ControlFlow::Continue(())
                });
                out
            })
            .collect();
        if over.load(Ordering::Relaxed) {
            return Err(Error::ResourceLimit {
                what: format!("cubical C_{}", self.n),
                count: total.load(Ordering::Relaxed),
                cap,
            });
        }
        Ok(CubeBasis {
            dim: self.n,
            labels: parts.concat(),
        })
    }
}

pub fn enumerate_cubes(g: &Graph, n: usize) -> Result<CubeBasis> {
    CubeEnumerator::new(g, n)?.collect(usize::MAX)
}

pub fn count_cubes(g: &Graph, n: usize) -> Result<u64> {
    Ok(CubeEnumerator::new(g, n)?.count())
}

/// Boundary of one cube in the coordinates of `lower`.
pub fn boundary_column(labels: &[u32], lower: &CubeBasis) -> Result<SparseVec> {
    let n = labels.len().trailing_zeros() as usize;
    let mut pairs = Vec::with_capacity(2 * n);
    let mut buf = Vec::with_capacity(labels.len() / 2);
    for b in 0..n {
        let s: i64 = if b % 2 == 0 { -1 } else { 1 };
        for (plus, coef) in [(false, s), (true, -s)] {
            buf.clear();
            face_into(labels, b, plus, &mut buf);
            if is_degenerate(&buf) {
                continue;
            }
            let idx = lower.index_of(&buf).ok_or_else(|| {
                Error::ContractViolation(format!("face {buf:?} missing from the basis"))
            })?;
            pairs.push((idx as u32, coef));
        }
    }
    Ok(SparseVec::from_small_pairs(pairs))
}

pub fn boundary_matrix(lower: &CubeBasis, upper: &CubeBasis) -> Result<IntMatrix> {
    if upper.dim() != lower.dim() + 1 {
        return Err(Error::DimensionMismatch(format!(
            "boundary from dimension {} to {}",
            upper.dim(),
            lower.dim()
        )));
    }
    let columns = (0..upper.len())
        .into_par_iter()
        .map(|i| boundary_column(upper.get(i), lower))
        .collect::<Result<Vec<_>>>()?;
    IntMatrix::from_columns(lower.len(), columns)
}

pub(crate) fn slice(lower: Option<&CubeBasis>, basis: CubeBasis) -> Result<ComplexSlice<CubeBasis>> {
    let boundary = match lower {
        Some(l) => boundary_matrix(l, &basis)?,
        None => IntMatrix::zeros(0, basis.len()),
    };
    Ok(ComplexSlice {
        dim: basis.dim(),
        basis,
        boundary,
    })
}

/// Slices `0..=max_dim`, with `d d = 0` checked.
pub fn cubical_complex(g: &Graph, max_dim: usize, cap: usize) -> Result<Vec<ComplexSlice<CubeBasis>>> {
    let mut out: Vec<ComplexSlice<CubeBasis>> = Vec::new();
    for n in 0..=max_dim {
        let basis = CubeEnumerator::new(g, n)?.collect(cap)?;
        let s = slice(out.last().map(|s| &s.basis), basis)?;
        if let Some(prev) = out.last() {
            check_composition(prev, &s)?;
        }
        out.push(s);
    }
    Ok(out)
}

/// Boundary columns of all cubes of one dimension, produced prefix by
/// prefix without storing the cubes.
pub struct CubeColumnStream<'a> {
    pub enumerator: CubeEnumerator<'a>,
    pub lower: &'a CubeBasis,
    pub cap: usize,
    /// Prefixes handled per parallel round.
    pub round: usize,
}

impl ColumnStream for CubeColumnStream<'_> {
    fn rows(&self) -> usize {
        self.lower.len()
    }

    fn stream(&self, sink: &mut dyn FnMut(&[SparseVec]) -> ControlFlow<()>) -> Result<()> {
        let prefixes = self.enumerator.prefixes(2);
        let mut produced = 0usize;
        for group in prefixes.chunks(self.round.max(1)) {
            let batches = group
                .par_iter()
                .map(|p| {
                    let mut cols = Vec::new();
                    let mut err = None;
                    let _ = self.enumerator.walk(p, &mut |l| match boundary_column(l, self.lower) {
                        Ok(c) => {
                            cols.push(c);
                            ControlFlow::Continue(())
                        }
                        Err(e) => {
                            err = Some(e);
                            ControlFlow::Break(())
                        }
                    });
                    match err {
                        Some(e) => Err(e),
                        None => Ok(cols),
                    }
                })
                .collect::<Result<Vec<_>>>()?;
            for cols in batches {
                produced += cols.len();
                if produced > self.cap {
                    return Err(Error::ResourceLimit {
                        what: format!("cubical C_{}", self.enumerator.dim()),
                        count: produced,
                        cap: self.cap,
                    });
                }
                if sink(&cols).is_break() {
                    return Ok(());
                }
            }
        }
        Ok(())
    }
}

/// Homology report for one dimension.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DimensionResult {
    pub summary: PairSummary,
    /// Set when the incoming boundary was streamed.
    pub streamed: Option<StreamOutcome>,
}

/// `H_0 .. H_max_dim`, building `C_0 .. C_{max_dim+1}`. The top boundary
/// is streamed when `C_{max_dim+1}` is larger than the stream threshold.
pub fn cubical_homology_range(
    g: &Graph,
    max_dim: usize,
    opts: &ComputeOptions,
) -> Result<Vec<DimensionResult>> {
    let mut slices: Vec<ComplexSlice<CubeBasis>> = Vec::new();
    for n in 0..=max_dim {
        let basis = CubeEnumerator::new(g, n)?.collect(opts.cap)?;
        let s = slice(slices.last().map(|s| &s.basis), basis)?;
        slices.push(s);
    }
    let top = CubeEnumerator::new(g, max_dim + 1)?;
    let mut out = Vec::with_capacity(max_dim + 1);
    let top_basis = match top.collect(opts.stream_threshold) {
        Ok(b) => Some(b),
        Err(Error::ResourceLimit { .. }) => None,
        Err(e) => return Err(e),
    };
    let top_slice = match top_basis {
        Some(b) => Some(slice(Some(&slices[max_dim].basis), b)?),
        None => None,
    };
    for n in 0..=max_dim {
        let d_n = &slices[n].boundary;
        let next = if n < max_dim {
            Some(&slices[n + 1].boundary)
        } else {
            top_slice.as_ref().map(|s| &s.boundary)
        };
        let r = match next {
            Some(d_np1) => DimensionResult {
                summary: homology_of_pair_detailed(d_n, d_np1, opts.coefficients)?,
                streamed: None,
            },
            None => {
                let stream = CubeColumnStream {
                    enumerator: CubeEnumerator::new(g, max_dim + 1)?,
                    lower: &slices[max_dim].basis,
                    cap: opts.cap,
                    round: 64,
                };
                let (summary, how) = homology_streamed(d_n, &stream, opts.coefficients)?;
                DimensionResult {
                    summary,
                    streamed: Some(how),
                }
            }
        };
        out.push(r);
    }
    Ok(out)
}

/// `H_n` alone; lower dimensions are enumerated but not reduced.
pub fn cubical_homology(g: &Graph, n: usize, opts: &ComputeOptions) -> Result<DimensionResult> {
    let lower = if n == 0 {
        None
    } else {
        Some(CubeEnumerator::new(g, n - 1)?.collect(opts.cap)?)
    };
    let mid = slice(lower.as_ref(), CubeEnumerator::new(g, n)?.collect(opts.cap)?)?;
    let top = CubeEnumerator::new(g, n + 1)?;
    match top.collect(opts.stream_threshold) {
        Ok(b) => {
            let upper = slice(Some(&mid.basis), b)?;
            Ok(DimensionResult {
                summary: homology_of_pair_detailed(&mid.boundary, &upper.boundary, opts.coefficients)?,
                streamed: None,
            })
        }
        Err(Error::ResourceLimit { .. }) => {
            let stream = CubeColumnStream {
                enumerator: top,
                lower: &mid.basis,
                cap: opts.cap,
                round: 64,
            };
            let (summary, how) = homology_streamed(&mid.boundary, &stream, opts.coefficients)?;
            Ok(DimensionResult {
                summary,
                streamed: Some(how),
            })
        }
        Err(e) => Err(e),
    }
}
