use std::fs;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use homlab::linalg::Coefficients;
use homlab::psi::{counterexample_theta, WeightFunctional};
use homlab::ComputeOptions;
use homlab_cli::corpus::{parse_corpus, run_corpus, Tier, BUILTIN};
use homlab_cli::input::load_graph;
use homlab_cli::report::{run_certify, run_compare, run_homology, run_reduce, Theory};
use homlab_cli::{parse_theta, CliError};

/// Cubical and path homology of finite simple graphs.
#[derive(Parser)]
#[command(name = "homlab", version)]
struct Cli {
    /// Worker threads.
    #[arg(long, global = true, env = "HOMLAB_JOBS")]
    jobs: Option<usize>,
    /// Largest number of generators allowed in any chain group.
    #[arg(long, global = true, default_value_t = 50_000_000)]
    cap: usize,
    /// Print JSON on stdout (the table goes to stderr).
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Homology groups in dimensions 0..=max-dim.
    Homology {
        /// Graph file (JSON or edge list) or family name such as Z5, K4, Q3.
        input: String,
        #[arg(long, value_enum, default_value = "both")]
        theory: Theory,
        #[arg(long, default_value_t = 2)]
        max_dim: usize,
        /// z, q, mod_p or mod_p:<prime>.
        #[arg(long, default_value = "z")]
        coeff: String,
        /// Remove folds before computing.
        #[arg(long)]
        reduce: bool,
    },
    /// Both theories side by side with the induced comparison map.
    Compare {
        input: String,
        #[arg(long, default_value_t = 2)]
        max_dim: usize,
    },
    /// Fold the graph down to its core and print the trace.
    Reduce { input: String },
    /// Check that a cubical 2-cycle is not a boundary using a dihedral weight.
    Certify {
        input: String,
        /// JSON list of [coef, [l0, l1, l2, l3]]; defaults to the eight-face
        /// cycle of the counterexample graph.
        #[arg(long)]
        theta: Option<String>,
        /// Base quadrilateral, comma separated, in colex order.
        #[arg(long)]
        base: Option<String>,
        /// Labels in --theta and --base start at 1.
        #[arg(long)]
        one_based: bool,
    },
    /// Check the built-in expected values.
    Corpus {
        #[arg(long, value_enum, default_value = "fast")]
        tier: Tier,
        /// Expected values file to use instead of the built-in one.
        #[arg(long)]
        data: Option<String>,
    },
}

fn emit<T: serde::Serialize>(json: bool, value: &T, table: String) {
    if json {
        eprint!("{table}");
        println!("{}", serde_json::to_string_pretty(value).expect("report serializes"));
    } else {
        print!("{table}");
    }
}

fn parse_base(text: &str, one_based: bool) -> Result<WeightFunctional, CliError> {
    let parts = text
        .split(',')
        .map(|s| s.trim().parse::<u32>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| CliError::Input(format!("base: {e}")))?;
    let shift = u32::from(one_based);
    let base: [u32; 4] = parts
        .iter()
        .map(|&p| p.checked_sub(shift))
        .collect::<Option<Vec<_>>>()
        .and_then(|v| v.try_into().ok())
        .ok_or_else(|| CliError::Input("base needs four labels".into()))?;
    WeightFunctional::new(base).map_err(|e| CliError::Input(e.to_string()))
}

fn run(cli: Cli) -> Result<(), CliError> {
    if let Some(j) = cli.jobs {
        // only fails if a pool already exists
        let _ = rayon::ThreadPoolBuilder::new().num_threads(j.max(1)).build_global();
    }
    let base_opts = ComputeOptions {
        cap: cli.cap,
        ..ComputeOptions::default()
    };
    match cli.command {
        Command::Homology {
            input,
            theory,
            max_dim,
            coeff,
            reduce,
        } => {
            let coefficients: Coefficients = coeff.parse().map_err(|e: homlab::Error| CliError::Input(e.to_string()))?;
            let g = load_graph(&input)?;
            let opts = ComputeOptions {
                coefficients,
                ..base_opts
            };
            let r = run_homology(&g, theory, max_dim, &opts, reduce)?;
            emit(cli.json, &r, r.table());
        }
        Command::Compare { input, max_dim } => {
            let g = load_graph(&input)?;
            let r = run_compare(&g, max_dim, &base_opts)?;
            emit(cli.json, &r, r.table());
        }
        Command::Reduce { input } => {
            let g = load_graph(&input)?;
            let r = run_reduce(&g);
            emit(cli.json, &r, r.table());
        }
        Command::Certify {
            input,
            theta,
            base,
            one_based,
        } => {
            let g = load_graph(&input)?;
            let theta = match theta {
                Some(path) => {
                    let text = fs::read_to_string(&path).map_err(|e| CliError::Input(format!("{path}: {e}")))?;
                    parse_theta(&text, one_based)?
                }
                None => counterexample_theta(),
            };
            let w = match base {
                Some(b) => parse_base(&b, one_based)?,
                None => WeightFunctional::default(),
            };
            let r = run_certify(&g, &theta, &w)?;
            emit(cli.json, &r, r.table());
            if !r.passed {
                return Err(CliError::Mismatch(1));
            }
        }
        Command::Corpus { tier, data } => {
            let text = match data {
                Some(path) => fs::read_to_string(&path).map_err(|e| CliError::Input(format!("{path}: {e}")))?,
                None => BUILTIN.to_string(),
            };
            let corpus = parse_corpus(&text)?;
            let outcomes = run_corpus(&corpus, tier, &base_opts, |o| {
                if o.passed {
                    eprintln!("PASS {} ({} ms)", o.id, o.wall_time_ms);
                } else {
                    eprintln!("FAIL {}: got {} expected {}", o.id, o.got, o.expected);
                }
            });
            let failed = outcomes.iter().filter(|o| !o.passed).count();
            if cli.json {
                println!("{}", serde_json::to_string_pretty(&outcomes).expect("outcomes serialize"));
            } else {
                println!("{} passed, {} failed", outcomes.len() - failed, failed);
            }
            if failed > 0 {
                return Err(CliError::Mismatch(failed));
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            if !matches!(e, CliError::Mismatch(_)) {
                eprintln!("homlab: {e}");
            }
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
