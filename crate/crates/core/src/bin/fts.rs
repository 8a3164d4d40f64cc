use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use fixed_time_safe::experiment::{self, ExperimentConfig};
use fixed_time_safe::sim::{settling_bound, SettlingBoundInputs};

#[derive(Parser)]
#[command(name = "fts", version, about = "Fixed-time constrained tracking experiments")]
struct Cli {
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct Source {
    /// Built-in configuration (example1 or example2)
    #[arg(long)]
    preset: Option<String>,
    /// TOML config file
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Simulate one configuration and write its output files
    Run {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Repeat a run for several values of one scalar config field
    Sweep {
        #[arg(long)]
        config: PathBuf,
        /// Dotted path, e.g. controller.filters.0.lambda
        #[arg(long)]
        param: String,
        #[arg(long, value_delimiter = ',', required = true)]
        values: Vec<f64>,
        #[arg(long)]
        jobs: Option<usize>,
        #[arg(long, default_value_t = 0.05)]
        tol: f64,
        /// Write the summary here instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Validate a config without running it
    Check {
        #[arg(long)]
        config: PathBuf,
    },
    /// Conservative settling-time bound for a config's gains
    Bound {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        g_lower: f64,
        #[arg(long)]
        theta: f64,
    },
}

fn load(source: &Source) -> fixed_time_safe::Result<ExperimentConfig> {
    match (&source.preset, &source.config) {
        (Some(name), _) => experiment::preset(name),
        (_, Some(path)) => ExperimentConfig::load(path),
        _ => unreachable!("clap enforces one source"),
    }
}

fn main() -> ExitCode {
    match dispatch(Cli::parse().cmd) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

fn dispatch(cmd: Command) -> fixed_time_safe::Result<u8> {
    match cmd {
        Command::Run { source, out } => {
            let cfg = load(&source)?;
            let dir = out
                .or_else(|| cfg.out_dir.clone())
                .unwrap_or_else(|| PathBuf::from("out"));
            let res = experiment::run_experiment(&cfg, &dir)?;
            let r = &res.output.report;
            println!("{}", r.termination);
            for tol in experiment::REPORT_TOLERANCES {
                match r.settling_time(*tol) {
                    Some(t) => println!("settling_time({tol}) = {t}"),
                    None => println!("settling_time({tol}) undefined"),
                }
            }
            println!("violated = {}", r.violated);
            println!("wrote {} files to {}", res.files.len(), dir.display());
            Ok(res.exit_status as u8)
        }
        Command::Sweep {
            config,
            param,
            values,
            jobs,
            tol,
            out,
        } => {
            let cfg = ExperimentConfig::load(&config)?;
            let jobs = jobs.unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
            let rows = experiment::sweep(&cfg, &param, &values, jobs, tol)?;
            match out {
                Some(path) => {
                    let f = std::fs::File::create(&path).map_err(|e| fixed_time_safe::Error::Io {
                        path: path.clone(),
                        message: e.to_string(),
                    })?;
                    experiment::write_sweep_csv(f, &rows)?;
                }
                None => experiment::write_sweep_csv(std::io::stdout().lock(), &rows)?,
            }
            Ok(u8::from(rows.iter().any(|r| r.error.is_some())))
        }
        Command::Check { config } => {
            let cfg = ExperimentConfig::load(&config)?;
            println!(
                "ok: plant {}, order {}, {} steps of {} s",
                cfg.plant,
                cfg.controller.order(),
                cfg.sim.steps(),
                cfg.sim.dt
            );
            Ok(0)
        }
        Command::Bound {
            config,
            g_lower,
            theta,
        } => {
            let cfg = ExperimentConfig::load(&config)?;
            let b = settling_bound(&SettlingBoundInputs::from_config(&cfg.controller, g_lower, theta))?;
            println!("Xi1={}", b.xi1);
            println!("Xi2={}", b.xi2);
            println!("Xi2_bar={}", b.xi2_bar);
            println!("T_bound={}", b.t_bound);
            Ok(0)
        }
    }
}
