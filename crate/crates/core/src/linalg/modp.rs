//! Rank over GF(p) by streaming column reduction.
//!
//! Columns are pushed one at a time and reduced against stored pivot
//! columns keyed by their largest row index. Nothing but the pivots is kept,
//! so a boundary matrix with tens of millions of columns can be ranked while
//! its columns are generated.

use std::collections::BinaryHeap;

use super::matrix::IntMatrix;
use crate::error::{Error, Result};

/// 2^31 - 1.
pub const DEFAULT_PRIME: u64 = 2_147_483_647;

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    // deterministic witness set for all u64
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, b, m);
        }
        b = mul_mod(b, b, m);
        e >>= 1;
    }
    r
}

pub fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

/// Incremental GF(p) column echelon.
pub struct ModPReducer {
    p: u64,
    /// `pivot_of_row[r]` indexes into `pivots` for the column whose largest
    /// row is `r`; that column is scaled so the entry at `r` is 1.
    pivot_of_row: Vec<u32>,
    pivots: Vec<Vec<(u32, u32)>>,
    work: Vec<u64>,
    queued: Vec<bool>,
    heap: BinaryHeap<u32>,
}

const NONE: u32 = u32::MAX;

impl ModPReducer {
    pub fn new(rows: usize, p: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if p >= 1 << 32 {
            return Err(Error::InvalidParameter(format!(
                "prime {p} must be below 2^32"
            )));
        }
        Ok(ModPReducer {
            p,
            pivot_of_row: vec![NONE; rows],
            pivots: Vec::new(),
            work: vec![0; rows],
            queued: vec![false; rows],
            heap: BinaryHeap::new(),
        })
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn rows(&self) -> usize {
        self.work.len()
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    /// Total stored entries across pivot columns.
    pub fn fill(&self) -> usize {
        self.pivots.iter().map(Vec::len).sum()
    }

    /// Reduces a column given as `(row, residue)` pairs; returns `true` if it
    /// was independent of everything pushed before.
    pub fn push(&mut self, column: &[(u32, u64)]) -> bool {
        let p = self.p;
        for &(r, v) in column {
            let v = v % p;
            if v == 0 {
                continue;
            }
            let slot = &mut self.work[r as usize];
            *slot = (*slot + v) % p;
            if !self.queued[r as usize] {
                self.queued[r as usize] = true;
                self.heap.push(r);
            }
        }
        while let Some(r) = self.heap.pop() {
            let ru = r as usize;
            self.queued[ru] = false;
            let f = self.work[ru];
            if f == 0 {
                continue;
            }
            let pi = self.pivot_of_row[ru];
            if pi == NONE {
                // new pivot: collect what is left, normalize by f^{-1}
                let inv = inv_mod(f, p);
                let mut col = Vec::with_capacity(self.heap.len() + 1);
                col.push((r, 1u32));
                self.work[ru] = 0;
                while let Some(k) = self.heap.pop() {
                    let ku = k as usize;
                    self.queued[ku] = false;
                    let v = self.work[ku];
                    if v != 0 {
                        col.push((k, mul_mod(v, inv, p) as u32));
                        self.work[ku] = 0;
                    }
                }
                self.pivot_of_row[ru] = self.pivots.len() as u32;
                self.pivots.push(col);
                return true;
            }
            let neg = p - f;
            for &(k, v) in &self.pivots[pi as usize] {
                let ku = k as usize;
                self.work[ku] = (self.work[ku] + mul_mod(neg, v as u64, p)) % p;
                if !self.queued[ku] && self.work[ku] != 0 {
                    self.queued[ku] = true;
                    self.heap.push(k);
                }
            }
            debug_assert_eq!(self.work[ru], 0);
        }
        false
    }
}

pub fn rank_mod_p(m: &IntMatrix, p: u64) -> Result<usize> {
    let mut red = ModPReducer::new(m.rows(), p)?;
    let mut buf = Vec::new();
    for c in m.columns() {
        buf.clear();
        buf.extend(c.iter().map(|(i, v)| (i, v.mod_u64(p))));
        red.push(&buf);
        if red.rank() == m.rows() {
            break;
        }
    }
    Ok(red.rank())
}
