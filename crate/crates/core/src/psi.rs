//! The comparison map from cubical to path chains, and the dihedral-weight
//! certificate for a non-bounding cubical 2-cycle.

use std::ops::ControlFlow;

use num_rational::BigRational;
use num_traits::Zero;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::chain::{check_composition, Chain, ComplexSlice, ComputeOptions};
use crate::cubical::{self, face_into, CubeBasis, CubeEnumerator, SingularCube};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::linalg::{rank_rational, HomologyCoordinates, Int, IntMatrix, SparseVec};
use crate::path::{PathComplex, PathTuple};

/// Monotone path through `Q_n`: step `i` flips coordinate `perm[i]`
/// (0-based). `verts` are colex indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PermPath {
    pub n: usize,
    pub perm: Vec<usize>,
    pub verts: Vec<u32>,
}

impl PermPath {
    pub fn sign(&self) -> i64 {
        permutation_sign(&self.perm)
    }
}

pub fn perm_path(n: usize, perm: &[usize]) -> Result<PermPath> {
    let mut seen = vec![false; n];
    if perm.len() != n || perm.iter().any(|&p| p >= n || std::mem::replace(&mut seen[p], true)) {
        return Err(Error::InvalidParameter(format!("{perm:?} is not a permutation of 0..{n}")));
    }
    let mut verts = Vec::with_capacity(n + 1);
    let mut x = 0u32;
    verts.push(x);
    for &p in perm {
        x |= 1 << p;
        verts.push(x);
    }
    Ok(PermPath {
        n,
        perm: perm.to_vec(),
        verts,
    })
}

fn permutation_sign(perm: &[usize]) -> i64 {
    let mut inversions = 0;
    for i in 0..perm.len() {
        for j in i + 1..perm.len() {
            if perm[i] > perm[j] {
                inversions += 1;
            }
        }
    }
    if inversions % 2 == 0 {
        1
    } else {
        -1
    }
}

/// All `n!` monotone paths, permutations in lexicographic order.
pub fn all_perm_paths(n: usize) -> Vec<PermPath> {
    fn rec(n: usize, cur: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<PermPath>) {
        if cur.len() == n {
            out.push(perm_path(n, cur).expect("valid permutation"));
            return;
        }
        for p in 0..n {
            if !used[p] {
                used[p] = true;
                cur.push(p);
                rec(n, cur, used, out);
                cur.pop();
                used[p] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(n, &mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

fn psi_terms(labels: &[u32], paths: &[PermPath], mut emit: impl FnMut(&[u32], i64)) {
    if labels.len() > 1 && cubical::is_degenerate(labels) {
        return;
    }
    let mut buf = Vec::new();
    for p in paths {
        buf.clear();
        buf.extend(p.verts.iter().map(|&x| labels[x as usize]));
        if !crate::path::is_degenerate(&buf) {
            emit(&buf, p.sign());
        }
    }
}

/// `sum_τ sign(τ) σ∘p_τ`, degenerate tuples dropped; zero on degenerate cubes.
pub fn psi_cube(s: &SingularCube) -> Chain<PathTuple> {
    let mut out = Chain::zero(s.dim());
    psi_terms(s.labels(), &all_perm_paths(s.dim()), |t, sign| {
        out.add_term(PathTuple::new(t.to_vec()).expect("nonempty"), &Int::from(sign));
    });
    out
}

/// Columns `psi(basis cube)` in the Omega coordinates of `pc`.
pub fn psi_columns(basis: &CubeBasis, pc: &PathComplex<'_>) -> Result<IntMatrix> {
    let n = basis.dim();
    let slice = pc.slice(n);
    let paths = all_perm_paths(n);
    let cols = (0..basis.len())
        .into_par_iter()
        .map(|i| {
            let mut pairs = Vec::new();
            let mut missing = false;
            psi_terms(basis.get(i), &paths, |t, sign| match slice.basis.ambient.index_of(t) {
                Some(j) => pairs.push((j as u32, sign)),
                None => missing = true,
            });
            if missing {
                return Err(Error::ContractViolation("psi produced a non-allowed path".into()));
            }
            pc.omega_coordinates(n, &SparseVec::from_small_pairs(pairs))
        })
        .collect::<Result<Vec<_>>>()?;
    IntMatrix::from_columns(slice.rank(), cols)
}

/// Both complexes up to `max_dim` with the comparison maps between them.
pub struct Comparison<'g> {
    pub cubes: Vec<ComplexSlice<CubeBasis>>,
    pub paths: PathComplex<'g>,
    pub psi: Vec<IntMatrix>,
}

/// Builds both complexes and `psi_0 .. psi_max_dim`, checking
/// `d^Path psi_n = psi_{n-1} d^Cube` as matrices.
pub fn compare_complexes<'g>(g: &'g Graph, max_dim: usize, cap: usize) -> Result<Comparison<'g>> {
    let cubes = cubical::cubical_complex(g, max_dim, cap)?;
    let paths = PathComplex::build(g, max_dim, cap)?;
    let mut psi: Vec<IntMatrix> = Vec::with_capacity(max_dim + 1);
    for n in 0..=max_dim {
        let m = psi_columns(&cubes[n].basis, &paths)?;
        if n > 0 {
            let left = paths.slice(n).boundary.matmul(&m)?;
            let right = psi[n - 1].matmul(&cubes[n].boundary)?;
            if left != right {
                return Err(Error::ContractViolation(format!(
                    "psi fails to commute with the boundary in dimension {n}"
                )));
            }
        }
        psi.push(m);
    }
    Ok(Comparison { cubes, paths, psi })
}

pub fn psi_matrix(g: &Graph, n: usize) -> Result<IntMatrix> {
    Ok(compare_complexes(g, n, usize::MAX)?.psi.swap_remove(n))
}

/// `psi_*` on rational homology in dimension `n`, in the coordinates of
/// chosen cycle representatives.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InducedMap {
    pub dim: usize,
    pub cube_betti: usize,
    pub path_betti: usize,
    /// `path_betti` rows, `cube_betti` columns.
    #[serde(with = "rational_rows")]
    pub matrix: Vec<Vec<BigRational>>,
    pub rank: usize,
}

impl InducedMap {
    pub fn is_injective(&self) -> bool {
        self.rank == self.cube_betti
    }

    pub fn is_surjective(&self) -> bool {
        self.rank == self.path_betti
    }

    pub fn is_isomorphism(&self) -> bool {
        self.is_injective() && self.is_surjective()
    }

    pub fn verdict(&self) -> &'static str {
        match (self.is_injective(), self.is_surjective()) {
            (true, true) => "isomorphism",
            (false, true) => "surjective, not injective",
            (true, false) => "injective, not surjective",
            (false, false) => "neither injective nor surjective",
        }
    }
}

mod rational_rows {
    use num_rational::BigRational;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    use crate::linalg::rational_to_string;

    pub fn serialize<S: Serializer>(m: &[Vec<BigRational>], s: S) -> Result<S::Ok, S::Error> {
        let rows: Vec<Vec<String>> = m
            .iter()
            .map(|r| r.iter().map(rational_to_string).collect())
            .collect();
        rows.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Vec<BigRational>>, D::Error> {
        let rows: Vec<Vec<String>> = Vec::deserialize(d)?;
        rows.into_iter()
            .map(|r| {
                r.into_iter()
                    .map(|x| x.parse::<BigRational>().map_err(serde::de::Error::custom))
                    .collect()
            })
            .collect()
    }
}

pub fn induced_on_homology(g: &Graph, n: usize, opts: &ComputeOptions) -> Result<InducedMap> {
    let cubes = cubical::cubical_complex(g, n, opts.cap)?;
    let cube_coords = match CubeEnumerator::new(g, n + 1)?.collect(opts.stream_threshold) {
        Ok(b) => {
            let upper = cubical::slice(Some(&cubes[n].basis), b)?;
            check_composition(&cubes[n], &upper)?;
            HomologyCoordinates::new(&cubes[n].boundary, &upper.boundary)?
        }
        Err(Error::ResourceLimit { .. }) => {
            // ranks only drop mod p, so a vanishing group mod p vanishes
            // over Q too, and the streamed rank can stop early
            let mut q = *opts;
            q.coefficients = crate::linalg::Coefficients::ModP(crate::linalg::DEFAULT_PRIME);
            let h = cubical::cubical_homology(g, n, &q)?;
            if h.summary.group.betti != 0 {
                return Err(Error::ResourceLimit {
                    what: format!("cycle representatives for cubical H_{n}"),
                    count: opts.stream_threshold + 1,
                    cap: opts.stream_threshold,
                });
            }
            HomologyCoordinates::trivial()
        }
        Err(e) => return Err(e),
    };
    let pc = PathComplex::build(g, n + 1, opts.cap)?;
    let path_coords = HomologyCoordinates::new(&pc.slice(n).boundary, &pc.slice(n + 1).boundary)?;
    let psi = psi_columns(&cubes[n].basis, &pc)?;
    let mut columns = Vec::with_capacity(cube_coords.betti());
    for z in cube_coords.representatives() {
        columns.push(path_coords.coordinates(&psi.mul_vec(z))?);
    }
    let matrix: Vec<Vec<BigRational>> = (0..path_coords.betti())
        .map(|i| columns.iter().map(|c| c[i].clone()).collect())
        .collect();
    let rank = rational_matrix_rank(&matrix);
    Ok(InducedMap {
        dim: n,
        cube_betti: cube_coords.betti(),
        path_betti: path_coords.betti(),
        matrix,
        rank,
    })
}

fn rational_matrix_rank(m: &[Vec<BigRational>]) -> usize {
    let mut rows: Vec<Vec<BigRational>> = m.to_vec();
    let cols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows.len()).find(|&r| !rows[r][c].is_zero()) else {
            continue;
        };
        rows.swap(rank, p);
        for r in 0..rows.len() {
            if r != rank && !rows[r][c].is_zero() {
                let f = &rows[r][c] / &rows[rank][c];
                for k in c..cols {
                    let d = &f * &rows[rank][k];
                    rows[r][k] -= d;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Corners of the square in cyclic order, as colex positions.
const SQUARE_CYCLE: [usize; 4] = [0, 1, 3, 2];

/// Weight of a 2-cube relative to a base quadrilateral: the reflection
/// character of the dihedral relabeling, or 0 when the labels are not one.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightFunctional {
    /// Base labels in colex order.
    pub base: [u32; 4],
}

impl Default for WeightFunctional {
    /// The quadrilateral 1,2,3,6 of the counterexample graph (0-based).
    fn default() -> Self {
        WeightFunctional { base: [0, 1, 2, 5] }
    }
}

impl WeightFunctional {
    pub fn new(base: [u32; 4]) -> Result<Self> {
        for i in 0..4 {
            if base[i + 1..].contains(&base[i]) {
                return Err(Error::InvalidParameter(format!("base labels {base:?} repeat")));
            }
        }
        Ok(WeightFunctional { base })
    }

    /// Sum of coefficient times weight.
    pub fn evaluate(&self, chain: &Chain<SingularCube>) -> Int {
        let mut total = Int::ZERO;
        for (s, c) in chain.iter() {
            match dihedral_weight(self, s.labels()) {
                0 => {}
                w => total += &(c * &Int::from(w)),
            }
        }
        total
    }

    /// `Psi(d y)` for a 3-cube given by its labels.
    pub fn on_boundary(&self, labels: &[u32]) -> i64 {
        let mut buf = Vec::with_capacity(4);
        let mut total = 0;
        for bit in 0..3 {
            let sign = if bit % 2 == 0 { -1 } else { 1 };
            buf.clear();
            face_into(labels, bit, false, &mut buf);
            total += sign * dihedral_weight(self, &buf);
            buf.clear();
            face_into(labels, bit, true, &mut buf);
            total -= sign * dihedral_weight(self, &buf);
        }
        total
    }
}

pub fn dihedral_weight(w: &WeightFunctional, labels: &[u32]) -> i64 {
    if labels.len() != 4 {
        return 0;
    }
    // pi[p]: base position carried by label position p
    let mut pi = [0usize; 4];
    for p in 0..4 {
        match w.base.iter().position(|&b| b == labels[p]) {
            Some(q) => pi[p] = q,
            None => return 0,
        }
    }
    let mut cycle_pos = [0usize; 4];
    for (k, &p) in SQUARE_CYCLE.iter().enumerate() {
        cycle_pos[p] = k;
    }
    let at = |k: usize| cycle_pos[pi[SQUARE_CYCLE[k]]];
    let step = (at(1) + 4 - at(0)) % 4;
    if step != 1 && step != 3 {
        return 0;
    }
    if (0..4).all(|k| at(k) == (at(0) + k * step) % 4) {
        if step == 1 {
            1
        } else {
            -1
        }
    } else {
        0
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub psi_theta: Int,
    pub cubes_checked: u64,
    /// 3-cubes whose boundary has nonzero weight.
    pub violations: u64,
}

impl Certificate {
    /// `[theta]` is nonzero in cubical H_2.
    pub fn passed(&self) -> bool {
        !self.psi_theta.is_zero() && self.violations == 0
    }
}

/// Checks that `theta` is a 2-cycle of cubes of `g`, then evaluates the
/// weight on it and on the boundary of every non-degenerate 3-cube.
pub fn certificate_nontrivial_h2(g: &Graph, theta: &Chain<SingularCube>, w: &WeightFunctional) -> Result<Certificate> {
    if theta.dim() != 2 && !theta.is_zero() {
        return Err(Error::DimensionMismatch(format!("theta has dimension {}", theta.dim())));
    }
    for (s, _) in theta.iter() {
        if s.dim() != 2 || !s.is_graph_hom(g) {
            return Err(Error::InvalidParameter(format!("{:?} is not a 2-cube of the graph", s.labels())));
        }
    }
    let mut b = Chain::zero(1);
    for (s, c) in theta.iter() {
        b.add_scaled(c, &s.boundary());
    }
    if !b.is_zero() {
        return Err(Error::ContractViolation("theta is not a cycle".into()));
    }
    let e = CubeEnumerator::new(g, 3)?;
    let (cubes_checked, violations) = e
        .prefixes(2)
        .par_iter()
        .map(|p| {
            let (mut n, mut bad) = (0u64, 0u64);
            let _ = e.walk(p, &mut |l| {
                n += 1;
                if w.on_boundary(l) != 0 {
                    bad += 1;
                }
                ControlFlow::Continue(())
            });
            (n, bad)
        })
        .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1 + b.1));
    Ok(Certificate {
        psi_theta: w.evaluate(theta),
        cubes_checked,
        violations,
    })
}

/// The eight-face 2-cycle wrapping the counterexample graph (0-based).
pub fn counterexample_theta() -> Chain<SingularCube> {
    let faces: [(i64, [u32; 4]); 8] = [
        (1, [1, 2, 3, 6]),
        (-1, [1, 2, 4, 7]),
        (1, [1, 3, 5, 8]),
        (-1, [1, 4, 5, 9]),
        (-1, [2, 6, 7, 10]),
        (1, [3, 6, 8, 10]),
        (-1, [4, 7, 9, 10]),
        (1, [5, 8, 9, 10]),
    ];
    Chain::from_terms(
        2,
        faces.iter().map(|(c, l)| {
            let labels = l.iter().map(|v| v - 1).collect();
            (SingularCube::new(labels).expect("four labels"), Int::from(*c))
        }),
    )
}

/// Path 2-chains `(a,b,c) - (a,d,c)` with `a > b > c` and `a > d > c`
/// around each quadrilateral, restricted to descending edges.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadrilateralSystem {
    /// Descending edges `(x, y)`, `x > y`, sorted.
    pub rows: Vec<(usize, usize)>,
    /// `(a, b, c, d)` with `b < d`.
    pub quadrilaterals: Vec<[usize; 4]>,
    pub matrix: IntMatrix,
}

impl QuadrilateralSystem {
    pub fn rank(&self) -> usize {
        rank_rational(&self.matrix)
    }
}

pub fn quadrilateral_system(g: &Graph) -> QuadrilateralSystem {
    let mut rows: Vec<(usize, usize)> = g.edges().into_iter().map(|(u, v)| (v, u)).collect();
    rows.sort_unstable();
    let mut quads = Vec::new();
    for a in 0..g.vertex_count() {
        for c in 0..a {
            if g.has_edge(a, c) {
                continue;
            }
            let mids: Vec<usize> = g
                .neighbors(a)
                .iter()
                .map(|&x| x as usize)
                .filter(|&x| x > c && x < a && g.has_edge(x, c))
                .collect();
            for (i, &b) in mids.iter().enumerate() {
                for &d in &mids[i + 1..] {
                    quads.push([a, b, c, d]);
                }
            }
        }
    }
    let row_of = |x: usize, y: usize| rows.binary_search(&(x, y)).expect("descending edge") as u32;
    let cols = quads
        .iter()
        .map(|&[a, b, c, d]| {
            SparseVec::from_small_pairs(vec![
                (row_of(a, b), 1),
                (row_of(b, c), 1),
                (row_of(a, d), -1),
                (row_of(d, c), -1),
            ])
        })
        .collect();
    let matrix = IntMatrix::from_columns(rows.len(), cols).expect("rows in range");
    QuadrilateralSystem {
        rows,
        quadrilaterals: quads,
        matrix,
    }
}
