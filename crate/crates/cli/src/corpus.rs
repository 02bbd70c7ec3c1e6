//! Built-in expected values, checked by `homlab corpus`.

use std::time::Instant;

use serde::{Deserialize, Serialize};

use homlab::cubical::{count_cubes, cubical_homology_range};
use homlab::homotopy::dismantle;
use homlab::linalg::Coefficients;
use homlab::path::{omega_basis, path_homology_range};
use homlab::psi::{
    certificate_nontrivial_h2, counterexample_theta, induced_on_homology, quadrilateral_system, WeightFunctional,
};
use homlab::graph::io::GraphJson;
use homlab::{ComputeOptions, Graph};

use crate::input::load_graph;
use crate::report::Theory;
use crate::CliError;

pub const BUILTIN: &str = include_str!("../data/corpus.json");

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Tier {
    Fast,
    Extended,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Check {
    CubeCount { dim: usize, expected: u64 },
    OmegaRank { dim: usize, expected: usize },
    /// Groups for dimensions `0..expected.len()`, written like `Z`, `0`, `Z^2`.
    Homology {
        theory: Theory,
        #[serde(default)]
        coefficients: Coefficients,
        expected: Vec<String>,
    },
    Induced { dim: usize, expected: String },
    Certificate { expected_psi: i64, expected_cubes: u64 },
    QuadrilateralRank { rows: usize, cols: usize, expected: usize },
    Reduce { expected_core: usize, expected_folds: usize },
}

/// A family name as accepted on the command line, or an inline graph.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GraphSpec {
    Named(String),
    Inline(GraphJson),
}

impl GraphSpec {
    fn load(&self) -> Result<Graph, CliError> {
        match self {
            GraphSpec::Named(s) => load_graph(s),
            GraphSpec::Inline(j) => Graph::try_from(j.clone()).map_err(|e| CliError::Input(e.to_string())),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Entry {
    pub id: String,
    pub graph: GraphSpec,
    pub tier: Tier,
    /// `published`, `derived` or `trivial`.
    pub provenance: String,
    pub check: Check,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Corpus {
    pub entries: Vec<Entry>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Outcome {
    pub id: String,
    pub passed: bool,
    pub got: String,
    pub expected: String,
    pub wall_time_ms: u64,
}

pub fn parse_corpus(text: &str) -> Result<Corpus, CliError> {
    serde_json::from_str(text).map_err(|e| CliError::Input(format!("corpus: {e}")))
}

fn evaluate(check: &Check, spec: &GraphSpec, opts: &ComputeOptions) -> Result<(String, String), CliError> {
    let g = spec.load()?;
    Ok(match check {
        Check::CubeCount { dim, expected } => (count_cubes(&g, *dim)?.to_string(), expected.to_string()),
        Check::OmegaRank { dim, expected } => (omega_basis(&g, *dim)?.rank().to_string(), expected.to_string()),
        Check::Homology {
            theory,
            coefficients,
            expected,
        } => {
            let max_dim = expected.len().saturating_sub(1);
            let o = ComputeOptions {
                coefficients: *coefficients,
                ..*opts
            };
            let got: Vec<String> = match theory {
                Theory::Path => path_homology_range(&g, max_dim, &o)?
                    .into_iter()
                    .map(|s| s.group.to_string())
                    .collect(),
                _ => cubical_homology_range(&g, max_dim, &o)?
                    .into_iter()
                    .map(|d| d.summary.group.to_string())
                    .collect(),
            };
            (got.join(","), expected.join(","))
        }
        Check::Induced { dim, expected } => {
            let m = induced_on_homology(&g, *dim, opts)?;
            (m.verdict().to_string(), expected.clone())
        }
        Check::Certificate {
            expected_psi,
            expected_cubes,
        } => {
            let c = certificate_nontrivial_h2(&g, &counterexample_theta(), &WeightFunctional::default())?;
            (
                format!("psi={} cubes={} violations={}", c.psi_theta, c.cubes_checked, c.violations),
                format!("psi={expected_psi} cubes={expected_cubes} violations=0"),
            )
        }
        Check::QuadrilateralRank { rows, cols, expected } => {
            let q = quadrilateral_system(&g);
            (
                format!("{}x{} rank {}", q.matrix.rows(), q.matrix.cols(), q.rank()),
                format!("{rows}x{cols} rank {expected}"),
            )
        }
        Check::Reduce {
            expected_core,
            expected_folds,
        } => {
            let d = dismantle(&g);
            (
                format!("core {} folds {}", d.core.vertex_count(), d.trace.len()),
                format!("core {expected_core} folds {expected_folds}"),
            )
        }
    })
}

/// Runs every entry at or below `tier`, reporting each as it finishes.
pub fn run_corpus(
    corpus: &Corpus,
    tier: Tier,
    opts: &ComputeOptions,
    mut on_outcome: impl FnMut(&Outcome),
) -> Vec<Outcome> {
    let mut out = Vec::new();
    for e in corpus.entries.iter().filter(|e| e.tier <= tier) {
        let start = Instant::now();
        let (passed, got, expected) = match evaluate(&e.check, &e.graph, opts) {
            Ok((got, expected)) => (got == expected, got, expected),
            Err(err) => (false, format!("error: {err}"), String::new()),
        };
        let o = Outcome {
            id: e.id.clone(),
            passed,
            got,
            expected,
            wall_time_ms: start.elapsed().as_millis() as u64,
        };
        on_outcome(&o);
        out.push(o);
    }
    out
}
