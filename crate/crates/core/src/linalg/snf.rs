//! Smith normal form of sparse integer matrices.
//!
//! Unit pivots are eliminated first on the sparse structure, picking columns
//! by current fill and, within a column, the shortest row. Whatever is left
//! has no `±1` entries and goes through a dense gcd-based reduction.

use serde::{Deserialize, Serialize};

use super::int::Int;
use super::matrix::{IntMatrix, SparseVec};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SnfResult {
    /// Positive invariant factors `d_1 | d_2 | ... | d_r`.
    pub diagonal: Vec<Int>,
    pub rank: usize,
}

impl SnfResult {
    /// Invariant factors greater than one.
    pub fn torsion(&self) -> Vec<Int> {
        self.diagonal.iter().filter(|d| !d.is_one()).cloned().collect()
    }
}

pub fn snf(m: &IntMatrix) -> SnfResult {
    let mut work = SparseElimination::new(m);
    let ones = work.eliminate_units();
    let rest = work.remainder();
    let mut diagonal = vec![Int::ONE; ones];
    diagonal.extend(dense_snf(rest));
    normalize_chain(&mut diagonal);
    let rank = diagonal.len();
    SnfResult { diagonal, rank }
}

struct SparseElimination {
    rows: Vec<SparseVec>,
    row_alive: Vec<bool>,
    col_alive: Vec<bool>,
    /// Rows that may hold an entry in each column; stale ids are tolerated.
    occupancy: Vec<Vec<u32>>,
}

impl SparseElimination {
    fn new(m: &IntMatrix) -> Self {
        let t = m.transpose();
        let rows: Vec<SparseVec> = t.into_columns();
        let mut occupancy = vec![Vec::new(); m.cols()];
        for (i, r) in rows.iter().enumerate() {
            for (j, _) in r.iter() {
                occupancy[j as usize].push(i as u32);
            }
        }
        SparseElimination {
            row_alive: vec![true; rows.len()],
            col_alive: vec![true; m.cols()],
            rows,
            occupancy,
        }
    }

    fn clean_column(&mut self, j: usize) {
        let rows = &self.rows;
        let alive = &self.row_alive;
        let occ = &mut self.occupancy[j];
        occ.sort_unstable();
        occ.dedup();
        occ.retain(|&i| alive[i as usize] && !rows[i as usize].get(j as u32).is_zero());
    }

    /// Returns the number of unit pivots eliminated.
    fn eliminate_units(&mut self) -> usize {
        let mut pivots = 0;
        loop {
            let mut order: Vec<usize> = (0..self.col_alive.len())
                .filter(|&j| self.col_alive[j])
                .collect();
            for &j in &order {
                self.clean_column(j);
            }
            order.retain(|&j| !self.occupancy[j].is_empty());
            order.sort_by_key(|&j| (self.occupancy[j].len(), j));
            let mut progressed = false;
            for j in order {
                if !self.col_alive[j] {
                    continue;
                }
                self.clean_column(j);
                let pivot_row = self.occupancy[j]
                    .iter()
                    .copied()
                    .filter(|&i| self.rows[i as usize].get(j as u32).is_unit())
                    .min_by_key(|&i| (self.rows[i as usize].nnz(), i));
                if let Some(p) = pivot_row {
                    self.pivot(p as usize, j);
                    pivots += 1;
                    progressed = true;
                }
            }
            if !progressed {
                return pivots;
            }
        }
    }

    fn pivot(&mut self, p: usize, j: usize) {
        let unit = self.rows[p].get(j as u32);
        let pivot_row = std::mem::take(&mut self.rows[p]);
        let others: Vec<u32> = self.occupancy[j]
            .iter()
            .copied()
            .filter(|&i| i as usize != p)
            .collect();
        for i in others {
            let i = i as usize;
            let a = self.rows[i].get(j as u32);
            if a.is_zero() {
                continue;
            }
            // unit^{-1} == unit
            let factor = -(&a * &unit);
            let before = std::mem::take(&mut self.rows[i]);
            let after = before.add_scaled(&factor, &pivot_row);
            for (k, _) in pivot_row.iter() {
                if before.get(k).is_zero() && !after.get(k).is_zero() {
                    self.occupancy[k as usize].push(i as u32);
                }
            }
            self.rows[i] = after;
        }
        self.row_alive[p] = false;
        self.col_alive[j] = false;
        self.occupancy[j].clear();
    }

    fn remainder(self) -> Vec<Vec<Int>> {
        let live_rows: Vec<&SparseVec> = self
            .rows
            .iter()
            .zip(&self.row_alive)
            .filter(|(r, alive)| **alive && !r.is_empty())
            .map(|(r, _)| r)
            .collect();
        let mut cols: Vec<u32> = live_rows
            .iter()
            .flat_map(|r| r.iter().map(|(j, _)| j))
            .collect();
        cols.sort_unstable();
        cols.dedup();
        live_rows
            .iter()
            .map(|r| cols.iter().map(|&j| r.get(j)).collect())
            .collect()
    }
}

/// Diagonalizes a dense matrix by unimodular row and column operations and
/// returns the absolute values of the nonzero diagonal entries (not yet in
/// divisibility order).
pub(crate) fn dense_snf(mut a: Vec<Vec<Int>>) -> Vec<Int> {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut diag = Vec::new();
    for t in 0..rows.min(cols) {
        let Some((pi, pj)) = smallest_entry(&a, t) else {
            break;
        };
        a.swap(t, pi);
        for row in a.iter_mut() {
            row.swap(t, pj);
        }
        loop {
            let mut dirty = false;
            for i in t + 1..rows {
                if a[i][t].is_zero() {
                    continue;
                }
                let (q, r) = a[i][t].div_mod_floor(&a[t][t]);
                for k in t..cols {
                    let v = &a[i][k] - &(&q * &a[t][k]);
                    a[i][k] = v;
                }
                if !r.is_zero() {
                    dirty = true;
                }
            }
            for k in t + 1..cols {
                if a[t][k].is_zero() {
                    continue;
                }
                let (q, r) = a[t][k].div_mod_floor(&a[t][t]);
                for row in a.iter_mut().skip(t) {
                    let v = &row[k] - &(&q * &row[t]);
                    row[k] = v;
                }
                if !r.is_zero() {
                    dirty = true;
                }
            }
            if !dirty {
                break;
            }
            // move the smallest leftover in row/column t onto the pivot
            let mut best: Option<(Int, usize, usize)> = None;
            for i in t + 1..rows {
                if !a[i][t].is_zero() {
                    let v = a[i][t].abs();
                    if best.as_ref().is_none_or(|b| v < b.0) {
                        best = Some((v, i, t));
                    }
                }
            }
            for k in t + 1..cols {
                if !a[t][k].is_zero() {
                    let v = a[t][k].abs();
                    if best.as_ref().is_none_or(|b| v < b.0) {
                        best = Some((v, t, k));
                    }
                }
            }
            if let Some((_, i, k)) = best {
                if i != t {
                    a.swap(t, i);
                }
                if k != t {
                    for row in a.iter_mut() {
                        row.swap(t, k);
                    }
                }
            }
        }
        diag.push(a[t][t].abs());
    }
    diag
}

fn smallest_entry(a: &[Vec<Int>], t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(Int, usize, usize)> = None;
    for (i, row) in a.iter().enumerate().skip(t) {
        for (j, v) in row.iter().enumerate().skip(t) {
            if v.is_zero() {
                continue;
            }
            let av = v.abs();
            if best.as_ref().is_none_or(|b| av < b.0) {
                let unit = av.is_one();
                best = Some((av, i, j));
                if unit {
                    return best.map(|b| (b.1, b.2));
                }
            }
        }
    }
    best.map(|b| (b.1, b.2))
}

/// Rewrites a list of positive integers into the invariant-factor chain with
/// the same product structure: pairwise `(gcd, lcm)` until each divides the next.
pub(crate) fn normalize_chain(d: &mut [Int]) {
    for i in 0..d.len() {
        for j in i + 1..d.len() {
            if d[j].exact_div(&d[i]).is_some() {
                continue;
            }
            let g = d[i].gcd(&d[j]);
            let l = (&d[i] * &d[j]).exact_div(&g).expect("gcd divides product");
            d[i] = g;
            d[j] = l;
        }
    }
}
