use std::collections::BTreeMap;
use std::io::{self, Write};

use serde::{Deserialize, Serialize};

use super::int::Int;
use crate::error::{Error, Result};

/// Sparse integer vector: strictly increasing indices, no stored zeros.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SparseVec {
    entries: Vec<(u32, Int)>,
}

impl SparseVec {
    pub fn new() -> Self {
        SparseVec::default()
    }

    pub fn unit(index: u32) -> Self {
        SparseVec {
            entries: vec![(index, Int::ONE)],
        }
    }

    /// Builds from arbitrary `(index, value)` pairs, summing duplicates.
    pub fn from_pairs<I: IntoIterator<Item = (u32, Int)>>(pairs: I) -> Self {
        let mut acc: BTreeMap<u32, Int> = BTreeMap::new();
        for (i, v) in pairs {
            *acc.entry(i).or_default() += &v;
        }
        SparseVec {
            entries: acc.into_iter().filter(|(_, v)| !v.is_zero()).collect(),
        }
    }

    /// Like [`SparseVec::from_pairs`] for small coefficients, without a map.
    pub fn from_small_pairs(mut pairs: Vec<(u32, i64)>) -> Self {
        pairs.sort_unstable_by_key(|p| p.0);
        let mut entries: Vec<(u32, Int)> = Vec::with_capacity(pairs.len());
        let mut i = 0;
        while i < pairs.len() {
            let idx = pairs[i].0;
            let mut v = 0i64;
            while i < pairs.len() && pairs[i].0 == idx {
                v += pairs[i].1;
                i += 1;
            }
            if v != 0 {
                entries.push((idx, Int::from(v)));
            }
        }
        SparseVec { entries }
    }

    /// Caller guarantees sorted unique indices; zeros are filtered.
    pub fn from_sorted(entries: Vec<(u32, Int)>) -> Self {
        debug_assert!(entries.windows(2).all(|w| w[0].0 < w[1].0));
        SparseVec {
            entries: entries.into_iter().filter(|(_, v)| !v.is_zero()).collect(),
        }
    }

    pub fn from_dense(values: &[i64]) -> Self {
        SparseVec {
            entries: values
                .iter()
                .enumerate()
                .filter(|(_, v)| **v != 0)
                .map(|(i, v)| (i as u32, Int::from(*v)))
                .collect(),
        }
    }

    pub fn entries(&self) -> &[(u32, Int)] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<(u32, Int)> {
        self.entries
    }

    pub fn iter(&self) -> impl Iterator<Item = (u32, &Int)> {
        self.entries.iter().map(|(i, v)| (*i, v))
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn get(&self, index: u32) -> Int {
        match self.entries.binary_search_by_key(&index, |e| e.0) {
            Ok(pos) => self.entries[pos].1.clone(),
            Err(_) => Int::ZERO,
        }
    }

    /// Entry with the largest index.
    pub fn last(&self) -> Option<(u32, &Int)> {
        self.entries.last().map(|(i, v)| (*i, v))
    }

    pub fn max_index(&self) -> Option<u32> {
        self.entries.last().map(|e| e.0)
    }

    /// `self + scale * other`.
    pub fn add_scaled(&self, scale: &Int, other: &SparseVec) -> SparseVec {
        if scale.is_zero() {
            return self.clone();
        }
        let mut out = Vec::with_capacity(self.entries.len() + other.entries.len());
        let (mut a, mut b) = (self.entries.iter().peekable(), other.entries.iter().peekable());
        loop {
            match (a.peek(), b.peek()) {
                (Some((ia, va)), Some((ib, vb))) => {
                    if ia < ib {
                        out.push((*ia, va.clone()));
                        a.next();
                    } else if ib < ia {
                        out.push((*ib, scale * vb));
                        b.next();
                    } else {
                        let v = va + &(scale * vb);
                        if !v.is_zero() {
                            out.push((*ia, v));
                        }
                        a.next();
                        b.next();
                    }
                }
                (Some((ia, va)), None) => {
                    out.push((*ia, va.clone()));
                    a.next();
                }
                (None, Some((ib, vb))) => {
                    out.push((*ib, scale * vb));
                    b.next();
                }
                (None, None) => break,
            }
        }
        SparseVec { entries: out }
    }

    /// `sa * self + sb * other`.
    pub fn combine(&self, sa: &Int, sb: &Int, other: &SparseVec) -> SparseVec {
        self.scaled(sa).add_scaled(sb, other)
    }

    pub fn scaled(&self, s: &Int) -> SparseVec {
        if s.is_zero() {
            return SparseVec::new();
        }
        if s.is_one() {
            return self.clone();
        }
        SparseVec {
            entries: self.entries.iter().map(|(i, v)| (*i, v * s)).collect(),
        }
    }

    pub fn neg(&self) -> SparseVec {
        SparseVec {
            entries: self.entries.iter().map(|(i, v)| (*i, -v)).collect(),
        }
    }

    /// Gcd of all entries (0 for the empty vector).
    pub fn content(&self) -> Int {
        let mut g = Int::ZERO;
        for (_, v) in &self.entries {
            g = g.gcd(v);
            if g.is_one() {
                break;
            }
        }
        g
    }

    pub fn dot(&self, other: &SparseVec) -> Int {
        let mut acc = Int::ZERO;
        let (mut i, mut j) = (0, 0);
        while i < self.entries.len() && j < other.entries.len() {
            let (a, b) = (&self.entries[i], &other.entries[j]);
            if a.0 < b.0 {
                i += 1;
            } else if b.0 < a.0 {
                j += 1;
            } else {
                acc += &(&a.1 * &b.1);
                i += 1;
                j += 1;
            }
        }
        acc
    }

    pub fn to_dense(&self, len: usize) -> Vec<Int> {
        let mut out = vec![Int::ZERO; len];
        for (i, v) in &self.entries {
            out[*i as usize] = v.clone();
        }
        out
    }
}

/// Sparse integer matrix stored column-major.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    columns: Vec<SparseVec>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            columns: vec![SparseVec::new(); cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        IntMatrix {
            rows: n,
            cols: n,
            columns: (0..n as u32).map(SparseVec::unit).collect(),
        }
    }

    pub fn from_columns(rows: usize, columns: Vec<SparseVec>) -> Result<Self> {
        for c in &columns {
            if let Some(m) = c.max_index() {
                if m as usize >= rows {
                    return Err(Error::DimensionMismatch(format!(
                        "row index {m} out of range for {rows} rows"
                    )));
                }
            }
        }
        Ok(IntMatrix {
            rows,
            cols: columns.len(),
            columns,
        })
    }

    /// Row-major dense literal, mostly for tests and small fixtures.
    pub fn from_dense(rows: &[Vec<i64>]) -> Self {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, |r| r.len());
        let columns = (0..ncols)
            .map(|j| {
                SparseVec::from_sorted(
                    (0..nrows)
                        .map(|i| (i as u32, Int::from(rows[i][j])))
                        .collect(),
                )
            })
            .collect();
        IntMatrix {
            rows: nrows,
            cols: ncols,
            columns,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn column(&self, j: usize) -> &SparseVec {
        &self.columns[j]
    }

    pub fn columns(&self) -> &[SparseVec] {
        &self.columns
    }

    pub fn into_columns(self) -> Vec<SparseVec> {
        self.columns
    }

    pub fn nnz(&self) -> usize {
        self.columns.iter().map(SparseVec::nnz).sum()
    }

    pub fn get(&self, i: usize, j: usize) -> Int {
        self.columns[j].get(i as u32)
    }

    pub fn is_zero(&self) -> bool {
        self.columns.iter().all(SparseVec::is_empty)
    }

    pub fn mul_vec(&self, x: &SparseVec) -> SparseVec {
        let mut acc = SparseVec::new();
        for (j, v) in x.iter() {
            acc = acc.add_scaled(v, &self.columns[j as usize]);
        }
        acc
    }

    pub fn matmul(&self, rhs: &IntMatrix) -> Result<IntMatrix> {
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let columns = rhs.columns.iter().map(|c| self.mul_vec(c)).collect();
        Ok(IntMatrix {
            rows: self.rows,
            cols: rhs.cols,
            columns,
        })
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut t: Vec<Vec<(u32, Int)>> = vec![Vec::new(); self.rows];
        for (j, c) in self.columns.iter().enumerate() {
            for (i, v) in c.iter() {
                t[i as usize].push((j as u32, v.clone()));
            }
        }
        IntMatrix {
            rows: self.cols,
            cols: self.rows,
            columns: t.into_iter().map(SparseVec::from_sorted).collect(),
        }
    }

    /// Horizontal concatenation `[self | rhs]`.
    pub fn hstack(&self, rhs: &IntMatrix) -> Result<IntMatrix> {
        if self.rows != rhs.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot stack {} rows next to {} rows",
                self.rows, rhs.rows
            )));
        }
        let mut columns = self.columns.clone();
        columns.extend(rhs.columns.iter().cloned());
        Ok(IntMatrix {
            rows: self.rows,
            cols: columns.len(),
            columns,
        })
    }

    pub fn to_dense(&self) -> Vec<Vec<Int>> {
        let mut out = vec![vec![Int::ZERO; self.cols]; self.rows];
        for (j, c) in self.columns.iter().enumerate() {
            for (i, v) in c.iter() {
                out[i as usize][j] = v.clone();
            }
        }
        out
    }

    /// MatrixMarket coordinate dump (1-based indices).
    pub fn write_matrix_market<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "%%MatrixMarket matrix coordinate integer general")?;
        writeln!(w, "{} {} {}", self.rows, self.cols, self.nnz())?;
        for (j, c) in self.columns.iter().enumerate() {
            for (i, v) in c.iter() {
                writeln!(w, "{} {} {}", i + 1, j + 1, v)?;
            }
        }
        Ok(())
    }
}
