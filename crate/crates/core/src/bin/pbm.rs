use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use planted_bisection::bounds::{bounds_report, DEFAULT_CONTIGUITY_C};
use planted_bisection::harness::io::{
    load_graph, load_posterior, save_assignment, save_graph, save_json, save_posterior,
    write_experiment, write_samples_csv, Manifest,
};
use planted_bisection::harness::{run_experiment, ExperimentConfig, OUTPUT_DIR_ENV};
use planted_bisection::posterior::{exact_posterior, map_from_table, mh_sampler, ChainConfig};
use planted_bisection::uncertainty::{enlarge, minimal_diameter_credible, minimal_order_credible};
use planted_bisection::{graphmodel, ClassAssignment, Error, ModelParams};

#[derive(Parser)]
#[command(
    name = "pbm",
    version,
    about = "Planted bi-section model: sampling, posteriors, credible sets, bounds"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum EngineArg {
    Exact,
    Mcmc,
}

#[derive(Clone, Copy, ValueEnum)]
enum ConstructionArg {
    MinimalOrder,
    MinimalDiameter,
}

#[derive(Subcommand)]
enum Command {
    /// Sample a graph; writes graph.txt and theta0.txt.
    Generate {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: f64,
        #[arg(long)]
        q: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Planted assignment as a bit string (default: block assignment).
        #[arg(long, conflicts_with = "random_theta0")]
        theta0: Option<String>,
        /// Draw the planted assignment uniformly from the seed.
        #[arg(long)]
        random_theta0: bool,
        #[arg(long, env = OUTPUT_DIR_ENV, default_value = "pbm-out")]
        out: PathBuf,
    },
    /// Posterior over balanced partitions for a graph file.
    Posterior {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        p: f64,
        #[arg(long)]
        q: f64,
        #[arg(long, value_enum, default_value = "exact")]
        engine: EngineArg,
        #[arg(long, default_value_t = 1_000_000)]
        steps: u64,
        #[arg(long, default_value_t = 100_000)]
        burn_in: u64,
        #[arg(long, default_value_t = 10)]
        thin: u64,
        #[arg(long, default_value_t = 4)]
        chains: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Posterior CSV (default: <output dir>/posterior.csv).
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, env = OUTPUT_DIR_ENV, default_value = "pbm-out")]
        out_dir: PathBuf,
    },
    /// Credible set and its enlargement from a posterior CSV, as JSON.
    Credible {
        #[arg(long)]
        posterior: PathBuf,
        #[arg(long)]
        level: f64,
        #[arg(long, value_enum, default_value = "minimal-order")]
        construction: ConstructionArg,
        #[arg(long, default_value_t = 0)]
        kn: usize,
        /// Also write the JSON to this file.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Every bound and phase quantity at one point, as JSON.
    Bounds {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: f64,
        #[arg(long)]
        q: f64,
        #[arg(long, default_value_t = 1)]
        kn: usize,
        #[arg(long = "C", default_value_t = DEFAULT_CONTIGUITY_C)]
        c: f64,
        #[arg(long, default_value_t = 0.1)]
        delta: f64,
        #[arg(long = "A", default_value_t = 1.0)]
        a: f64,
    },
    /// Run a Monte Carlo experiment from a JSON config.
    Experiment {
        #[arg(long)]
        config: PathBuf,
        /// Overrides the config's output_dir.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        fixed_theta0: bool,
    },
}

enum Outcome {
    Done,
    Infeasible,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(Outcome::Done) => ExitCode::SUCCESS,
        Ok(Outcome::Infeasible) => ExitCode::from(3),
        Err(e) => {
            eprintln!("pbm: {e}");
            ExitCode::from(match e {
                Error::Config(_)
                | Error::Parameter(_)
                | Error::OutOfRange { .. }
                | Error::InvalidAssignment(_)
                | Error::DimensionMismatch { .. } => 2,
                Error::EnumerationTooLarge { .. } => 3,
                _ => 1,
            })
        }
    }
}

fn run(command: Command) -> planted_bisection::Result<Outcome> {
    match command {
        Command::Generate {
            n,
            p,
            q,
            seed,
            theta0,
            random_theta0,
            out,
        } => {
            let params = ModelParams::new(n, p, q)?;
            let theta0 = match theta0 {
                Some(bits) => bits.parse::<ClassAssignment>()?,
                None => planted_bisection::harness::draw_theta0(n, seed, !random_theta0),
            };
            if theta0.n() != n {
                return Err(Error::DimensionMismatch {
                    left: n,
                    right: theta0.n(),
                });
            }
            let graph = graphmodel::sample_graph(&params, &theta0, seed)?;
            let inputs = serde_json::json!({
                "n": n, "p": p, "q": q, "seed": seed, "theta0": theta0.to_bit_string(),
            });
            let graph_path = out.join("graph.txt");
            save_graph(&graph, &graph_path)?;
            Manifest::new(&graph_path, &inputs, Some(seed))?.save_next_to(&graph_path)?;
            let theta_path = out.join("theta0.txt");
            save_assignment(&theta0, &theta_path)?;
            Manifest::new(&theta_path, &inputs, Some(seed))?.save_next_to(&theta_path)?;
            println!("{}", graph_path.display());
            println!("{}", theta_path.display());
            Ok(Outcome::Done)
        }
        Command::Posterior {
            graph,
            p,
            q,
            engine,
            steps,
            burn_in,
            thin,
            chains,
            seed,
            out,
            out_dir,
        } => {
            let g = load_graph(&graph)?;
            let params = ModelParams::new(g.n(), p, q)?;
            let path = out.unwrap_or_else(|| out_dir.join("posterior.csv"));
            let mut inputs = serde_json::json!({
                "graph": graph.display().to_string(), "p": p, "q": q,
            });
            let table = match engine {
                EngineArg::Exact => {
                    let table = exact_posterior(&g, &params).map_err(infeasible_hint)?;
                    println!("log_evidence {}", table.log_evidence().unwrap_or(f64::NAN));
                    table
                }
                EngineArg::Mcmc => {
                    let cfg = ChainConfig {
                        steps,
                        burn_in,
                        thin,
                        seed,
                        chains,
                    };
                    inputs["chain"] = serde_json::to_value(cfg)?;
                    let samples = mh_sampler(&g, &params, &cfg)?;
                    let samples_path = sibling(&path, "samples.csv");
                    write_samples_csv(&samples, create_file(&samples_path)?)?;
                    Manifest::new(&samples_path, &inputs, Some(seed))?
                        .save_next_to(&samples_path)?;
                    println!("{}", samples_path.display());
                    samples.to_empirical_table()?
                }
            };
            save_posterior(&table, &path)?;
            Manifest::new(&path, &inputs, Some(seed))?.save_next_to(&path)?;
            if let Some(map) = map_from_table(&table) {
                println!("map {map}");
            }
            println!("{}", path.display());
            Ok(Outcome::Done)
        }
        Command::Credible {
            posterior,
            level,
            construction,
            kn,
            out,
        } => {
            let table = load_posterior(&posterior)?;
            let credible = match construction {
                ConstructionArg::MinimalOrder => minimal_order_credible(&table, level)?,
                ConstructionArg::MinimalDiameter => minimal_diameter_credible(&table, level)?,
            };
            let export = enlarge(&credible, kn)?.export();
            if let Some(path) = out {
                save_json(&export, &path)?;
            }
            println!("{}", serde_json::to_string_pretty(&export)?);
            Ok(Outcome::Done)
        }
        Command::Bounds {
            n,
            p,
            q,
            kn,
            c,
            delta,
            a,
        } => {
            let report = bounds_report(n, p, q, kn, c, delta, a)?;
            println!("{}", serde_json::to_string_pretty(&report)?);
            Ok(Outcome::Done)
        }
        Command::Experiment {
            config,
            out,
            fixed_theta0,
        } => {
            let mut cfg = ExperimentConfig::load(&config)?;
            if fixed_theta0 {
                cfg.fixed_theta0 = true;
            }
            if out.is_some() {
                cfg.output_dir = out;
            }
            let dir = cfg.resolved_output_dir();
            let output = run_experiment(&cfg)?;
            for path in write_experiment(&output, &cfg, &dir)? {
                println!("{}", path.display());
            }
            for s in &output.skipped {
                eprintln!(
                    "skipped n = {}, p = {}, q = {}: {}",
                    s.n, s.p, s.q, s.reason
                );
            }
            Ok(if output.skipped.is_empty() {
                Outcome::Done
            } else {
                Outcome::Infeasible
            })
        }
    }
}

fn infeasible_hint(e: Error) -> Error {
    if let Error::EnumerationTooLarge { .. } = e {
        eprintln!("pbm: use --engine mcmc beyond the enumeration cap");
    }
    e
}

fn sibling(path: &Path, name: &str) -> PathBuf {
    path.with_file_name(name)
}

fn create_file(path: &Path) -> planted_bisection::Result<std::fs::File> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        std::fs::create_dir_all(parent)?;
    }
    Ok(std::fs::File::create(path)?)
}
