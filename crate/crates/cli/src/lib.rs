//! Library side of the `homlab` command: graph input, reports and the
//! built-in corpus.

pub mod corpus;
pub mod input;
pub mod report;

use std::fmt;

use homlab::cubical::SingularCube;
use homlab::linalg::Int;
use homlab::Chain;

#[derive(Debug)]
pub enum CliError {
    /// Unreadable or malformed input.
    Input(String),
    Compute(homlab::Error),
    /// Corpus values that did not match.
    Mismatch(usize),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) | CliError::Compute(homlab::Error::Parse(_)) => 2,
            CliError::Compute(homlab::Error::ResourceLimit { .. }) => 3,
            CliError::Compute(_) | CliError::Mismatch(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Input(s) => write!(f, "input error: {s}"),
            CliError::Compute(e) => write!(f, "{e}"),
            CliError::Mismatch(n) => write!(f, "{n} corpus entries failed"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<homlab::Error> for CliError {
    fn from(e: homlab::Error) -> Self {
        CliError::Compute(e)
    }
}

/// A 2-chain written as `[[coef, [l0, l1, l2, l3]], ...]`, labels in colex
/// order; `one_based` shifts every label down by one.
pub fn parse_theta(text: &str, one_based: bool) -> Result<Chain<SingularCube>, CliError> {
    let terms: Vec<(i64, Vec<i64>)> =
        serde_json::from_str(text).map_err(|e| CliError::Input(format!("theta: {e}")))?;
    let mut chain = Chain::zero(2);
    for (coef, labels) in terms {
        let shift = i64::from(one_based);
        let labels = labels
            .into_iter()
            .map(|l| u32::try_from(l - shift).map_err(|_| CliError::Input(format!("theta: bad label {l}"))))
            .collect::<Result<Vec<u32>, _>>()?;
        if labels.len() != 4 {
            return Err(CliError::Input(format!("theta: a 2-cube has 4 labels, got {}", labels.len())));
        }
        let cube = SingularCube::new(labels).map_err(|e| CliError::Input(e.to_string()))?;
        chain.add_term(cube, &Int::from(coef));
    }
    Ok(chain)
}
