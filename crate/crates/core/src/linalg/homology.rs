use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use num_rational::BigRational;

use super::echelon::{integer_kernel_basis, rank_rational, IntEchelon};
use super::int::Int;
use super::matrix::{IntMatrix, SparseVec};
use super::modp::{is_prime, rank_mod_p, DEFAULT_PRIME};
use super::snf::snf;
use crate::error::{Error, Result};

/// Coefficient ring for homology computations.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Coefficients {
    #[default]
    Integer,
    Rational,
    ModP(u64),
}

impl Coefficients {
    pub fn validate(self) -> Result<Self> {
        match self {
            Coefficients::ModP(p) if !is_prime(p) => Err(Error::NotPrime(p)),
            c => Ok(c),
        }
    }

    pub fn reports_torsion(self) -> bool {
        self == Coefficients::Integer
    }

    pub fn rank(self, m: &IntMatrix) -> Result<usize> {
        match self {
            Coefficients::Integer => Ok(snf(m).rank),
            Coefficients::Rational => Ok(rank_rational(m)),
            Coefficients::ModP(p) => rank_mod_p(m, p),
        }
    }
}

impl fmt::Display for Coefficients {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coefficients::Integer => write!(f, "z"),
            Coefficients::Rational => write!(f, "q"),
            Coefficients::ModP(p) => write!(f, "mod_p:{p}"),
        }
    }
}

impl FromStr for Coefficients {
    type Err = Error;

    /// `z`, `q`, `mod_p` (default prime) or `mod_p:<prime>`.
    fn from_str(s: &str) -> Result<Self> {
        let c = match s {
            "z" | "Z" | "integer" => Coefficients::Integer,
            "q" | "Q" | "rational" => Coefficients::Rational,
            "mod_p" | "modp" => Coefficients::ModP(DEFAULT_PRIME),
            other => {
                let p = other
                    .strip_prefix("mod_p:")
                    .or_else(|| other.strip_prefix("modp:"))
                    .and_then(|p| p.parse::<u64>().ok())
                    .ok_or_else(|| Error::Parse(format!("unknown coefficient ring '{other}'")))?;
                Coefficients::ModP(p)
            }
        };
        c.validate()
    }
}

/// Free rank plus torsion coefficients (each > 1, each dividing the next).
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomologyGroup {
    pub betti: usize,
    pub torsion: Vec<Int>,
}

impl HomologyGroup {
    pub fn free(betti: usize) -> Self {
        HomologyGroup {
            betti,
            torsion: Vec::new(),
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.betti == 0 && self.torsion.is_empty()
    }
}

impl fmt::Display for HomologyGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        match self.betti {
            0 => {}
            1 => parts.push("Z".into()),
            b => parts.push(format!("Z^{b}")),
        }
        parts.extend(self.torsion.iter().map(|t| format!("Z/{t}")));
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// Ranks that went into a homology computation, kept for reporting.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairSummary {
    pub chain_rank: usize,
    pub boundary_rank: usize,
    pub next_boundary_rank: usize,
    pub group: HomologyGroup,
}

/// Homology at the middle of `C_{n+1} --d_np1--> C_n --d_n--> C_{n-1}`.
pub fn homology_of_pair(
    d_n: &IntMatrix,
    d_np1: &IntMatrix,
    coeff: Coefficients,
) -> Result<HomologyGroup> {
    homology_of_pair_detailed(d_n, d_np1, coeff).map(|s| s.group)
}

pub fn homology_of_pair_detailed(
    d_n: &IntMatrix,
    d_np1: &IntMatrix,
    coeff: Coefficients,
) -> Result<PairSummary> {
    let coeff = coeff.validate()?;
    if d_n.cols() != d_np1.rows() {
        return Err(Error::DimensionMismatch(format!(
            "d_n has {} columns but d_n+1 has {} rows",
            d_n.cols(),
            d_np1.rows()
        )));
    }
    if !d_n.matmul(d_np1)?.is_zero() {
        return Err(Error::ContractViolation(
            "composition of consecutive boundaries is nonzero".into(),
        ));
    }
    let boundary_rank = coeff.rank(d_n)?;
    let (next_boundary_rank, torsion) = if coeff.reports_torsion() {
        let s = snf(d_np1);
        (s.rank, s.torsion())
    } else {
        (coeff.rank(d_np1)?, Vec::new())
    };
    let chain_rank = d_n.cols();
    Ok(PairSummary {
        chain_rank,
        boundary_rank,
        next_boundary_rank,
        group: HomologyGroup {
            betti: chain_rank - boundary_rank - next_boundary_rank,
            torsion,
        },
    })
}

/// Rational coordinates on `ker d_n / im d_np1`, with explicit cycle
/// representatives: kernel vectors taken greedily while they stay
/// independent of the boundaries and of each other.
pub struct HomologyCoordinates {
    representatives: Vec<SparseVec>,
    boundaries: usize,
    echelon: IntEchelon,
}

impl HomologyCoordinates {
    pub fn new(d_n: &IntMatrix, d_np1: &IntMatrix) -> Result<Self> {
        if d_n.cols() != d_np1.rows() {
            return Err(Error::DimensionMismatch(format!(
                "d_n has {} columns but d_n+1 has {} rows",
                d_n.cols(),
                d_np1.rows()
            )));
        }
        Ok(Self::from_cycles(integer_kernel_basis(d_n).columns(), d_np1))
    }

    /// Coordinates on a group already known to vanish.
    pub fn trivial() -> Self {
        HomologyCoordinates {
            representatives: Vec::new(),
            boundaries: 0,
            echelon: IntEchelon::new(),
        }
    }

    fn from_cycles(cycles: &[SparseVec], d_np1: &IntMatrix) -> Self {
        let mut echelon = IntEchelon::from_matrix(d_np1);
        let boundaries = d_np1.cols();
        let mut representatives = Vec::new();
        for z in cycles {
            if !echelon.in_span(z) {
                echelon.push(z.clone());
                representatives.push(z.clone());
            }
        }
        HomologyCoordinates {
            representatives,
            boundaries,
            echelon,
        }
    }

    pub fn betti(&self) -> usize {
        self.representatives.len()
    }

    pub fn representatives(&self) -> &[SparseVec] {
        &self.representatives
    }

    /// Coordinates of the class of cycle `z`; fails if `z` is not in the
    /// span of boundaries and representatives (so not a cycle).
    pub fn coordinates(&self, z: &SparseVec) -> Result<Vec<BigRational>> {
        let x = self
            .echelon
            .solve_rational(z)
            .ok_or_else(|| Error::ContractViolation("vector is not a cycle".into()))?;
        let mut out = vec![BigRational::from_integer(0.into()); self.betti()];
        for (j, v) in x {
            let j = j as usize;
            if j >= self.boundaries {
                out[j - self.boundaries] = v;
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_maps_give_full_betti() {
        let h = homology_of_pair(&IntMatrix::zeros(0, 3), &IntMatrix::zeros(3, 0), Coefficients::Integer)
            .unwrap();
        assert_eq!(h, HomologyGroup::free(3));
    }

    #[test]
    fn torsion_from_projective_plane_like_pair() {
        // C_1 = Z, d_2 = [2], d_1 = 0: H_1 = Z/2
        let h = homology_of_pair(&IntMatrix::zeros(0, 1), &IntMatrix::from_dense(&[vec![2]]), Coefficients::Integer)
            .unwrap();
        assert_eq!(h.betti, 0);
        assert_eq!(h.torsion, vec![Int::from(2)]);
        assert_eq!(h.to_string(), "Z/2");
        let h2 = homology_of_pair(&IntMatrix::zeros(0, 1), &IntMatrix::from_dense(&[vec![2]]), Coefficients::ModP(2))
            .unwrap();
        assert_eq!(h2.betti, 1);
    }

    #[test]
    fn nonzero_composition_rejected() {
        let d = IntMatrix::from_dense(&[vec![1]]);
        assert!(matches!(
            homology_of_pair(&d, &d, Coefficients::Integer),
            Err(Error::ContractViolation(_))
        ));
    }

    #[test]
    fn parse_coefficients() {
        assert_eq!("z".parse::<Coefficients>().unwrap(), Coefficients::Integer);
        assert_eq!("mod_p".parse::<Coefficients>().unwrap(), Coefficients::ModP(DEFAULT_PRIME));
        assert_eq!("mod_p:3".parse::<Coefficients>().unwrap(), Coefficients::ModP(3));
        assert!("mod_p:4".parse::<Coefficients>().is_err());
        assert!("r".parse::<Coefficients>().is_err());
    }
}
