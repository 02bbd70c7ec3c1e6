//! Formal chains and per-dimension slices of a chain complex.

use std::collections::BTreeMap;

use crate::linalg::{Coefficients, Int, IntMatrix, SparseVec};

/// Knobs shared by the homology drivers.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ComputeOptions {
    pub coefficients: Coefficients,
    /// Largest basis (or streamed generator count) allowed in any dimension.
    pub cap: usize,
    /// Incoming boundaries with more columns than this are streamed rather
    /// than stored.
    pub stream_threshold: usize,
}

impl Default for ComputeOptions {
    fn default() -> Self {
        ComputeOptions {
            coefficients: Coefficients::Integer,
            cap: 50_000_000,
            stream_threshold: 200_000,
        }
    }
}

impl ComputeOptions {
    pub fn with_coefficients(coefficients: Coefficients) -> Self {
        ComputeOptions {
            coefficients,
            ..Default::default()
        }
    }
}

/// Sparse formal combination of generators of one dimension.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Chain<K: Ord> {
    dim: usize,
    terms: BTreeMap<K, Int>,
}

impl<K: Ord + Clone> Chain<K> {
    pub fn zero(dim: usize) -> Self {
        Chain {
            dim,
            terms: BTreeMap::new(),
        }
    }

    pub fn from_terms<I: IntoIterator<Item = (K, Int)>>(dim: usize, terms: I) -> Self {
        let mut c = Chain::zero(dim);
        for (k, v) in terms {
            c.add_term(k, &v);
        }
        c
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn add_term(&mut self, key: K, coef: &Int) {
        if coef.is_zero() {
            return;
        }
        let slot = self.terms.entry(key.clone()).or_default();
        *slot += coef;
        if slot.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn add_scaled(&mut self, scale: &Int, other: &Chain<K>) {
        for (k, v) in &other.terms {
            self.add_term(k.clone(), &(scale * v));
        }
    }

    pub fn get(&self, key: &K) -> Int {
        self.terms.get(key).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&K, &Int)> {
        self.terms.iter()
    }

    pub fn neg(&self) -> Chain<K> {
        Chain {
            dim: self.dim,
            terms: self.terms.iter().map(|(k, v)| (k.clone(), -v)).collect(),
        }
    }

    /// Coordinates in a basis; `None` if some generator has no index.
    pub fn to_vector(&self, mut index_of: impl FnMut(&K) -> Option<usize>) -> Option<SparseVec> {
        let mut pairs = Vec::with_capacity(self.terms.len());
        for (k, v) in &self.terms {
            pairs.push((index_of(k)? as u32, v.clone()));
        }
        Some(SparseVec::from_pairs(pairs))
    }
}

/// Basis plus boundary to the slice one dimension down.
#[derive(Clone, Debug)]
pub struct ComplexSlice<B> {
    pub dim: usize,
    pub basis: B,
    pub boundary: IntMatrix,
}

impl<B> ComplexSlice<B> {
    pub fn rank(&self) -> usize {
        self.boundary.cols()
    }
}

/// Fails when `lower.boundary * upper.boundary` is nonzero.
pub(crate) fn check_composition<B>(lower: &ComplexSlice<B>, upper: &ComplexSlice<B>) -> crate::Result<()> {
    if !lower.boundary.matmul(&upper.boundary)?.is_zero() {
        return Err(crate::Error::ContractViolation(format!(
            "boundary {} composed with boundary {} is nonzero",
            lower.dim, upper.dim
        )));
    }
    Ok(())
}
