//! Homology when the incoming boundary matrix is too large to hold.
//!
//! The columns of `d_{n+1}` are produced in batches by a [`ColumnStream`]
//! and ranked over GF(p) as they arrive. The stream stops as soon as the
//! rank reaches the nullity of `d_n`, which already forces the rational
//! Betti number to zero. Over Z the columns that raised the rank are kept:
//! if their Smith form is all ones they span a saturated lattice of full
//! rank inside the cycles, so the boundaries equal the cycles and the group
//! is exactly trivial. Anything else falls back to an exact lattice pass
//! over all columns.

use std::ops::ControlFlow;

use serde::{Deserialize, Serialize};

use super::echelon::IntEchelon;
use super::homology::{Coefficients, HomologyGroup, PairSummary};
use super::matrix::{IntMatrix, SparseVec};
use super::modp::{ModPReducer, DEFAULT_PRIME};
use super::snf::snf;
use crate::error::{Error, Result};

/// A re-playable source of boundary columns.
pub trait ColumnStream: Sync {
    fn rows(&self) -> usize;
    /// Feeds consecutive batches of columns, in a fixed order, until the
    /// sink breaks or the columns run out.
    fn stream(&self, sink: &mut dyn FnMut(&[SparseVec]) -> ControlFlow<()>) -> Result<()>;
}

pub struct MatrixStream<'a> {
    pub matrix: &'a IntMatrix,
    pub batch: usize,
}

impl ColumnStream for MatrixStream<'_> {
    fn rows(&self) -> usize {
        self.matrix.rows()
    }

    fn stream(&self, sink: &mut dyn FnMut(&[SparseVec]) -> ControlFlow<()>) -> Result<()> {
        for chunk in self.matrix.columns().chunks(self.batch.max(1)) {
            if sink(chunk).is_break() {
                break;
            }
        }
        Ok(())
    }
}

/// How the rank of the incoming boundary was settled.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StreamOutcome {
    /// GF(p) rank reached the nullity of `d_n` after this many columns.
    EarlyExit(usize),
    /// Every column was reduced over GF(p).
    Exhausted,
    /// Exact integer lattice over all columns.
    Lattice,
}

pub fn homology_streamed(
    d_n: &IntMatrix,
    next: &dyn ColumnStream,
    coeff: Coefficients,
) -> Result<(PairSummary, StreamOutcome)> {
    let coeff = coeff.validate()?;
    if d_n.cols() != next.rows() {
        return Err(Error::DimensionMismatch(format!(
            "d_n has {} columns but the stream has {} rows",
            d_n.cols(),
            next.rows()
        )));
    }
    let chain_rank = d_n.cols();
    let boundary_rank = coeff.rank(d_n)?;
    let nullity = chain_rank - boundary_rank;
    let p = match coeff {
        Coefficients::ModP(p) => p,
        _ => DEFAULT_PRIME,
    };
    let keep = coeff == Coefficients::Integer;
    let mut reducer = ModPReducer::new(next.rows(), p)?;
    let mut selected: Vec<SparseVec> = Vec::new();
    let mut seen = 0usize;
    let mut failure: Option<Error> = None;
    let mut buf = Vec::new();
    next.stream(&mut |batch| {
        for c in batch {
            seen += 1;
            if !d_n.mul_vec(c).is_empty() {
                failure = Some(Error::ContractViolation(
                    "composition of consecutive boundaries is nonzero".into(),
                ));
                return ControlFlow::Break(());
            }
            buf.clear();
            buf.extend(c.iter().map(|(i, v)| (i, v.mod_u64(p))));
            if reducer.push(&buf) && keep {
                selected.push(c.clone());
            }
            if reducer.rank() == nullity {
                return ControlFlow::Break(());
            }
        }
        ControlFlow::Continue(())
    })?;
    if let Some(e) = failure {
        return Err(e);
    }
    let early = reducer.rank() == nullity;
    let summary = |next_boundary_rank: usize, torsion| PairSummary {
        chain_rank,
        boundary_rank,
        next_boundary_rank,
        group: HomologyGroup {
            betti: nullity - next_boundary_rank,
            torsion,
        },
    };
    let outcome = if early {
        StreamOutcome::EarlyExit(seen)
    } else {
        StreamOutcome::Exhausted
    };
    match coeff {
        Coefficients::ModP(_) => return Ok((summary(reducer.rank(), Vec::new()), outcome)),
        Coefficients::Rational if early => return Ok((summary(nullity, Vec::new()), outcome)),
        Coefficients::Integer if early => {
            let s = IntMatrix::from_columns(next.rows(), selected)?;
            if snf(&s).diagonal.iter().all(|d| d.is_one()) {
                return Ok((summary(nullity, Vec::new()), outcome));
            }
        }
        _ => {}
    }
    let mut lattice = IntEchelon::new();
    next.stream(&mut |batch| {
        for c in batch {
            lattice.insert(c.clone(), SparseVec::new());
        }
        ControlFlow::Continue(())
    })?;
    let basis: Vec<SparseVec> = lattice.basis().iter().map(|e| e.vector.clone()).collect();
    let rank = basis.len();
    let torsion = if keep {
        snf(&IntMatrix::from_columns(next.rows(), basis)?).torsion()
    } else {
        Vec::new()
    };
    Ok((summary(rank, torsion), StreamOutcome::Lattice))
}
