//! Integer column echelon form built by unimodular column operations.
//!
//! Every column of the echelon has a distinct pivot row (its largest row
//! index). Inserting a column reduces it against the pivot with the same
//! row, using an extended-gcd step whenever plain division is not exact, so
//! the running set of columns always equals the inserted columns times a
//! unimodular matrix. Columns that reduce to zero therefore carry a Z-basis
//! of the kernel in their transforms, and the surviving columns span exactly
//! the integer image.

use std::collections::{BTreeMap, HashMap};

use num_rational::BigRational;
use num_traits::{One, Zero};

use super::int::Int;
use super::matrix::{IntMatrix, SparseVec};
use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct EchelonColumn {
    pub vector: SparseVec,
    /// Combination of inserted columns producing `vector`.
    pub transform: SparseVec,
}

#[derive(Clone, Debug, Default)]
pub struct IntEchelon {
    basis: Vec<EchelonColumn>,
    pivot_of_row: HashMap<u32, usize>,
    inserted: u32,
}

impl IntEchelon {
    pub fn new() -> Self {
        IntEchelon::default()
    }

    pub fn from_matrix(m: &IntMatrix) -> Self {
        let mut e = IntEchelon::new();
        for c in m.columns() {
            e.push(c.clone());
        }
        e
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[EchelonColumn] {
        &self.basis
    }

    /// Inserts the next column (its transform is the unit vector for its
    /// insertion index). Returns the kernel transform if it became zero.
    pub fn push(&mut self, column: SparseVec) -> Option<SparseVec> {
        let id = self.inserted;
        self.inserted += 1;
        self.insert(column, SparseVec::unit(id))
    }

    pub fn insert(&mut self, mut v: SparseVec, mut t: SparseVec) -> Option<SparseVec> {
        loop {
            let Some((r, a)) = v.last().map(|(r, a)| (r, a.clone())) else {
                return Some(t);
            };
            let Some(&k) = self.pivot_of_row.get(&r) else {
                self.pivot_of_row.insert(r, self.basis.len());
                self.basis.push(EchelonColumn {
                    vector: v,
                    transform: t,
                });
                return None;
            };
            let e = &mut self.basis[k];
            let b = e.vector.last().expect("pivot column is nonzero").1.clone();
            if let Some(q) = a.exact_div(&b) {
                let nq = -q;
                v = v.add_scaled(&nq, &e.vector);
                t = t.add_scaled(&nq, &e.transform);
                continue;
            }
            // s*b + u*a = g; [e v] * [[s, a/g], [u, -b/g]] has det -1
            let (g, s, u) = b.extended_gcd(&a);
            let ag = a.exact_div(&g).expect("gcd divides");
            let bg = -(b.exact_div(&g).expect("gcd divides"));
            let new_e = e.vector.combine(&s, &u, &v);
            let new_et = e.transform.combine(&s, &u, &t);
            let new_v = e.vector.combine(&ag, &bg, &v);
            let new_vt = e.transform.combine(&ag, &bg, &t);
            e.vector = new_e;
            e.transform = new_et;
            v = new_v;
            t = new_vt;
        }
    }

    /// Rational coefficients `x` (keyed by insertion index) with
    /// `sum x_j * column_j = b`, or `None` if `b` is outside the span.
    pub fn solve_rational(&self, b: &SparseVec) -> Option<BTreeMap<u32, BigRational>> {
        let mut rest: BTreeMap<u32, BigRational> = b
            .iter()
            .map(|(i, v)| (i, BigRational::from_integer(v.to_big())))
            .collect();
        let mut x: BTreeMap<u32, BigRational> = BTreeMap::new();
        while let Some((r, val)) = rest.iter().next_back().map(|(&r, v)| (r, v.clone())) {
            let k = *self.pivot_of_row.get(&r)?;
            let e = &self.basis[k];
            let lead = BigRational::from_integer(e.vector.last().unwrap().1.to_big());
            let coef = val / lead;
            for (i, w) in e.vector.iter() {
                let entry = rest.entry(i).or_insert_with(BigRational::zero);
                *entry -= &coef * BigRational::from_integer(w.to_big());
                if entry.is_zero() {
                    rest.remove(&i);
                }
            }
            for (j, w) in e.transform.iter() {
                let entry = x.entry(j).or_insert_with(BigRational::zero);
                *entry += &coef * BigRational::from_integer(w.to_big());
                if entry.is_zero() {
                    x.remove(&j);
                }
            }
        }
        Some(x)
    }

    /// Whether `b` lies in the rational span, without solving.
    pub fn in_span(&self, b: &SparseVec) -> bool {
        let mut v = b.clone();
        // fraction-free: v <- lead*v - v[r]*e, then strip content
        while let Some((r, a)) = v.last().map(|(r, a)| (r, a.clone())) {
            let Some(&k) = self.pivot_of_row.get(&r) else {
                return false;
            };
            let e = &self.basis[k].vector;
            let lead = e.last().unwrap().1.clone();
            let g = lead.gcd(&a);
            let sv = lead.exact_div(&g).unwrap();
            let se = -(a.exact_div(&g).unwrap());
            v = v.combine(&sv, &se, e);
            let c = v.content();
            if !c.is_zero() && !c.is_one() {
                v = SparseVec::from_sorted(
                    v.iter().map(|(i, x)| (i, x.exact_div(&c).unwrap())).collect(),
                );
            }
        }
        true
    }
}

/// Columns form a Z-basis of `ker m` (hence also a Q-basis).
pub fn integer_kernel_basis(m: &IntMatrix) -> IntMatrix {
    let mut e = IntEchelon::new();
    let mut kernel = Vec::new();
    for c in m.columns() {
        if let Some(k) = e.push(c.clone()) {
            kernel.push(k);
        }
    }
    IntMatrix::from_columns(m.cols(), kernel).expect("transform indices are column ids")
}

pub fn rank_rational(m: &IntMatrix) -> usize {
    IntEchelon::from_matrix(m).rank()
}

/// A solution of `m x = b`.
#[derive(Clone, Debug, PartialEq)]
pub struct Solution {
    pub coefficients: Vec<BigRational>,
}

impl Solution {
    pub fn is_integral(&self) -> bool {
        self.coefficients.iter().all(|c| c.is_integer())
    }

    pub fn to_integer(&self) -> Option<SparseVec> {
        if !self.is_integral() {
            return None;
        }
        Some(SparseVec::from_sorted(
            self.coefficients
                .iter()
                .enumerate()
                .map(|(i, c)| (i as u32, Int::from(c.to_integer())))
                .collect(),
        ))
    }
}

/// Reusable solver for many right-hand sides against one matrix.
pub struct ImageSolver {
    rows: usize,
    cols: usize,
    echelon: IntEchelon,
}

impl ImageSolver {
    pub fn new(m: &IntMatrix) -> Self {
        ImageSolver {
            rows: m.rows(),
            cols: m.cols(),
            echelon: IntEchelon::from_matrix(m),
        }
    }

    pub fn rank(&self) -> usize {
        self.echelon.rank()
    }

    /// The returned solution is integral whenever an integral one exists:
    /// echelon columns span the integer image, so their coefficients are
    /// unique and integral exactly in that case.
    pub fn solve(&self, b: &SparseVec) -> Result<Option<Solution>> {
        if let Some(m) = b.max_index() {
            if m as usize >= self.rows {
                return Err(Error::DimensionMismatch(format!(
                    "right-hand side index {m} exceeds {} rows",
                    self.rows
                )));
            }
        }
        Ok(self.echelon.solve_rational(b).map(|x| {
            let mut coefficients = vec![BigRational::zero(); self.cols];
            for (j, v) in x {
                coefficients[j as usize] = v;
            }
            Solution { coefficients }
        }))
    }

    /// Integer coordinates, failing loudly if `b` is not an integral image.
    pub fn solve_integer(&self, b: &SparseVec) -> Result<SparseVec> {
        self.solve(b)?
            .and_then(|s| s.to_integer())
            .ok_or_else(|| Error::ContractViolation("vector is not an integral image".into()))
    }
}

pub fn solve_in_image(m: &IntMatrix, b: &SparseVec) -> Result<Option<Solution>> {
    ImageSolver::new(m).solve(b)
}

pub fn rational_to_string(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kernel_of_row_one_one() {
        let k = integer_kernel_basis(&IntMatrix::from_dense(&[vec![1, 1]]));
        assert_eq!(k.cols(), 1);
        let v = k.column(0);
        assert_eq!(v.get(0), -v.get(1));
        assert!(v.get(0).is_unit());
    }

    #[test]
    fn kernel_of_two_is_empty() {
        assert_eq!(integer_kernel_basis(&IntMatrix::from_dense(&[vec![2]])).cols(), 0);
    }

    #[test]
    fn kernel_is_saturated() {
        // ker [2 4] over Z is spanned by (2,-1), not (4,-2)
        let m = IntMatrix::from_dense(&[vec![2, 4]]);
        let k = integer_kernel_basis(&m);
        assert_eq!(k.cols(), 1);
        assert_eq!(k.column(0).content(), Int::ONE);
        assert!(m.matmul(&k).unwrap().is_zero());
    }

    #[test]
    fn solve_zero_rhs() {
        let m = IntMatrix::from_dense(&[vec![1, 2], vec![3, 4]]);
        let s = solve_in_image(&m, &SparseVec::new()).unwrap().unwrap();
        assert!(s.coefficients.iter().all(|c| c.is_zero()));
    }

    #[test]
    fn rational_but_not_integral() {
        let m = IntMatrix::from_dense(&[vec![2]]);
        let s = solve_in_image(&m, &SparseVec::from_dense(&[1])).unwrap().unwrap();
        assert!(!s.is_integral());
        assert_eq!(rational_to_string(&s.coefficients[0]), "1/2");
        let s = solve_in_image(&m, &SparseVec::from_dense(&[4])).unwrap().unwrap();
        assert_eq!(s.to_integer().unwrap(), SparseVec::from_dense(&[2]));
    }

    #[test]
    fn outside_span() {
        let m = IntMatrix::from_dense(&[vec![1], vec![1]]);
        assert!(solve_in_image(&m, &SparseVec::from_dense(&[1, 0])).unwrap().is_none());
        assert!(solve_in_image(&m, &SparseVec::unit(2)).is_err());
        let e = IntEchelon::from_matrix(&m);
        assert!(!e.in_span(&SparseVec::from_dense(&[1, 0])));
        assert!(e.in_span(&SparseVec::from_dense(&[3, 3])));
    }
}
