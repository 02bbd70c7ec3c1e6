use std::fmt::Write as _;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use homlab::cubical::cubical_homology_range;
use homlab::graph::io::GraphJson;
use homlab::homotopy::dismantle;
use homlab::linalg::{rational_to_string, Coefficients, HomologyGroup, Int, PairSummary, StreamOutcome};
use homlab::path::path_homology_range;
use homlab::psi::{certificate_nontrivial_h2, induced_on_homology, Certificate, InducedMap, WeightFunctional};
use homlab::{Chain, ComputeOptions, Graph};

use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Theory {
    Cube,
    Path,
    Both,
}

impl Theory {
    fn cube(self) -> bool {
        self != Theory::Path
    }

    fn path(self) -> bool {
        self != Theory::Cube
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DimensionReport {
    pub dim: usize,
    pub chain_rank: usize,
    pub boundary_rank: usize,
    pub next_boundary_rank: usize,
    pub betti: usize,
    pub torsion: Vec<Int>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub streamed: Option<StreamOutcome>,
}

impl DimensionReport {
    fn new(dim: usize, s: PairSummary, streamed: Option<StreamOutcome>) -> Self {
        DimensionReport {
            dim,
            chain_rank: s.chain_rank,
            boundary_rank: s.boundary_rank,
            next_boundary_rank: s.next_boundary_rank,
            betti: s.group.betti,
            torsion: s.group.torsion,
            streamed,
        }
    }

    pub fn group(&self) -> HomologyGroup {
        HomologyGroup {
            betti: self.betti,
            torsion: self.torsion.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Fold {
    pub removed: usize,
    pub onto: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReductionSummary {
    pub original_vertices: usize,
    pub core_vertices: usize,
    pub folds: Vec<Fold>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunReport {
    pub graph: String,
    pub vertices: usize,
    pub edges: usize,
    pub theory: Theory,
    pub coefficients: Coefficients,
    pub max_dim: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cube: Option<Vec<DimensionReport>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub path: Option<Vec<DimensionReport>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reduction: Option<ReductionSummary>,
    pub wall_time_ms: u64,
}

fn graph_name(g: &Graph) -> String {
    g.name().unwrap_or("graph").to_string()
}

pub fn run_homology(
    g: &Graph,
    theory: Theory,
    max_dim: usize,
    opts: &ComputeOptions,
    reduce: bool,
) -> Result<RunReport, CliError> {
    let start = Instant::now();
    let (work, reduction) = if reduce {
        let d = dismantle(g);
        let summary = ReductionSummary {
            original_vertices: g.vertex_count(),
            core_vertices: d.core.vertex_count(),
            folds: d
                .trace
                .iter()
                .map(|r| Fold {
                    removed: r.removed,
                    onto: r.onto,
                })
                .collect(),
        };
        (d.core, Some(summary))
    } else {
        (g.clone(), None)
    };
    let cube = if theory.cube() {
        Some(
            cubical_homology_range(&work, max_dim, opts)?
                .into_iter()
                .enumerate()
                .map(|(n, r)| DimensionReport::new(n, r.summary, r.streamed))
                .collect(),
        )
    } else {
        None
    };
    let path = if theory.path() {
        Some(
            path_homology_range(&work, max_dim, opts)?
                .into_iter()
                .enumerate()
                .map(|(n, s)| DimensionReport::new(n, s, None))
                .collect(),
        )
    } else {
        None
    };
    Ok(RunReport {
        graph: graph_name(g),
        vertices: g.vertex_count(),
        edges: g.edge_count(),
        theory,
        coefficients: opts.coefficients,
        max_dim,
        cube,
        path,
        reduction,
        wall_time_ms: start.elapsed().as_millis() as u64,
    })
}

impl RunReport {
    pub fn table(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(
            s,
            "{} ({} vertices, {} edges), coefficients {}",
            self.graph, self.vertices, self.edges, self.coefficients
        );
        if let Some(r) = &self.reduction {
            let _ = writeln!(
                s,
                "reduced by {} folds to {} vertices",
                r.folds.len(),
                r.core_vertices
            );
        }
        let _ = writeln!(s, "{:<6}{:>4}  {:<12}{:>12}{:>12}{:>12}", "theory", "n", "H_n", "rank C_n", "rank d_n", "rank d_n+1");
        for (label, rows) in [("cube", &self.cube), ("path", &self.path)] {
            for d in rows.iter().flatten() {
                let _ = writeln!(
                    s,
                    "{:<6}{:>4}  {:<12}{:>12}{:>12}{:>12}",
                    label,
                    d.dim,
                    d.group().to_string(),
                    d.chain_rank,
                    d.boundary_rank,
                    d.next_boundary_rank
                );
            }
        }
        let _ = writeln!(s, "{} ms", self.wall_time_ms);
        s
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CompareDimension {
    pub dim: usize,
    pub cube: HomologyGroup,
    pub path: HomologyGroup,
    pub induced: InducedMap,
    pub verdict: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CompareReport {
    pub graph: String,
    pub max_dim: usize,
    pub dimensions: Vec<CompareDimension>,
    pub wall_time_ms: u64,
}

pub fn run_compare(g: &Graph, max_dim: usize, opts: &ComputeOptions) -> Result<CompareReport, CliError> {
    let start = Instant::now();
    let cube = cubical_homology_range(g, max_dim, opts)?;
    let path = path_homology_range(g, max_dim, opts)?;
    let mut dimensions = Vec::with_capacity(max_dim + 1);
    for n in 0..=max_dim {
        let induced = induced_on_homology(g, n, opts)?;
        dimensions.push(CompareDimension {
            dim: n,
            cube: cube[n].summary.group.clone(),
            path: path[n].group.clone(),
            verdict: induced.verdict().to_string(),
            induced,
        });
    }
    Ok(CompareReport {
        graph: graph_name(g),
        max_dim,
        dimensions,
        wall_time_ms: start.elapsed().as_millis() as u64,
    })
}

impl CompareReport {
    pub fn table(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "{}", self.graph);
        for d in &self.dimensions {
            let rows: Vec<String> = d
                .induced
                .matrix
                .iter()
                .map(|r| r.iter().map(rational_to_string).collect::<Vec<_>>().join(" "))
                .collect();
            let _ = writeln!(
                s,
                "n={}  cube {}  path {}  psi_* [{}]  {}",
                d.dim,
                d.cube,
                d.path,
                rows.join("; "),
                d.verdict
            );
        }
        let _ = writeln!(s, "{} ms", self.wall_time_ms);
        s
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReduceReport {
    pub graph: String,
    pub original_vertices: usize,
    pub core: GraphJson,
    /// Original label of each core vertex.
    pub kept: Vec<usize>,
    pub folds: Vec<Fold>,
}

pub fn run_reduce(g: &Graph) -> ReduceReport {
    let d = dismantle(g);
    ReduceReport {
        graph: graph_name(g),
        original_vertices: g.vertex_count(),
        core: GraphJson::from(&d.core),
        kept: d.kept.clone(),
        folds: d
            .trace
            .iter()
            .map(|r| Fold {
                removed: r.removed,
                onto: r.onto,
            })
            .collect(),
    }
}

impl ReduceReport {
    pub fn table(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(
            s,
            "{}: {} folds, core has {} vertices",
            self.graph,
            self.folds.len(),
            self.core.vertices
        );
        for f in &self.folds {
            let _ = writeln!(s, "  {} -> {}", f.removed, f.onto);
        }
        s
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertifyReport {
    pub graph: String,
    pub base: [u32; 4],
    pub psi_theta: Int,
    pub cubes_checked: u64,
    pub violations: u64,
    pub passed: bool,
}

pub fn run_certify(g: &Graph, theta: &Chain<homlab::cubical::SingularCube>, w: &WeightFunctional) -> Result<CertifyReport, CliError> {
    let Certificate {
        psi_theta,
        cubes_checked,
        violations,
    } = certificate_nontrivial_h2(g, theta, w)?;
    let passed = !psi_theta.is_zero() && violations == 0;
    Ok(CertifyReport {
        graph: graph_name(g),
        base: w.base,
        psi_theta,
        cubes_checked,
        violations,
        passed,
    })
}

impl CertifyReport {
    pub fn table(&self) -> String {
        format!(
            "{}: Psi(theta) = {}, {} of {} three-cubes with nonzero boundary weight: {}\n",
            self.graph,
            self.psi_theta,
            self.violations,
            self.cubes_checked,
            if self.passed { "PASS" } else { "FAIL" }
        )
    }
}
