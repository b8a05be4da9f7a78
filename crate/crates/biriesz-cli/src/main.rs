use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use biriesz::analysis::{opnorm_lower_seeded, AscentConfig, DEFAULT_SEED};
use biriesz::indices::parse_rational;
use biriesz::operators::{BilinearOp, Engine};
use biriesz::symbols::Symbol;
use biriesz_cli::config::parse_exponents;
use biriesz_cli::experiments::tables::threshold_rows;
use biriesz_cli::{run, ExperimentConfig, REGISTRY};
use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(name = "biriesz", version, about = "Bilinear Bochner-Riesz laboratory")]
struct Cli {
    /// List the registered experiments and exit.
    #[arg(long)]
    list: bool,

    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Subcommand)]
enum Command {
    /// Run a named experiment and write its report directory.
    Experiment {
        name: Option<String>,
        /// TOML or JSON config file.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Parameter override, repeatable.
        #[arg(long = "set", value_name = "KEY=VALUE")]
        sets: Vec<String>,
        /// Report directory (default runs/<name>).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Allow grids beyond the N^(2n) <= 2^24 cap.
        #[arg(long)]
        force: bool,
        #[arg(long)]
        list: bool,
    },
    /// Print the Bochner-Riesz kernel profile as CSV.
    Kernel {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        delta: f64,
        #[arg(long)]
        rmax: f64,
        #[arg(long, default_value_t = 0.1)]
        step: f64,
    },
    /// Print critical-delta verdicts over an exponent lattice as CSV.
    Indices {
        #[arg(long)]
        n: u32,
        #[arg(long, default_value = "1/12")]
        lattice: String,
    },
    /// Lower-bound the norm of the operator with a stored symbol.
    Opnorm {
        #[arg(long)]
        symbol: PathBuf,
        /// P1,P2,P with "inf" allowed.
        #[arg(long)]
        triple: String,
        #[arg(long, default_value_t = 8)]
        seeds: usize,
        #[arg(long, default_value_t = 50)]
        budget: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Directory for the witness grids.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn list() {
    for e in REGISTRY {
        println!("{:<20} {}", e.name, e.description);
    }
}

fn write_stdout(bytes: &[u8]) -> Result<()> {
    let mut out = std::io::stdout().lock();
    out.write_all(bytes)?;
    out.flush()?;
    Ok(())
}

/// Ok(true) when the command succeeded and any verdict passed.
fn dispatch(cli: Cli) -> Result<bool> {
    let Some(command) = cli.command else {
        if cli.list {
            list();
            return Ok(true);
        }
        bail!("no command given; try --help");
    };
    match command {
        Command::Experiment {
            name,
            config,
            sets,
            out,
            force,
            list: want_list,
        } => {
            if want_list || cli.list {
                list();
                return Ok(true);
            }
            let mut cfg = match &config {
                Some(path) => ExperimentConfig::from_file(path)?,
                None => ExperimentConfig::default(),
            };
            if let Some(name) = name {
                if !cfg.name.is_empty() && cfg.name != name {
                    bail!(
                        "config names experiment {:?} but {:?} was requested",
                        cfg.name,
                        name
                    );
                }
                cfg.name = name;
            }
            if cfg.name.is_empty() {
                bail!("no experiment named; use --list to see the registry");
            }
            for assignment in &sets {
                cfg.apply_assignment(assignment)?;
            }
            cfg.force = force;
            if let Some(out) = out {
                cfg.out_dir = Some(out);
            }
            if cfg.out_dir.is_none() {
                cfg.out_dir = Some(PathBuf::from("runs").join(&cfg.name));
            }
            let report = run(&cfg)?;
            for c in &report.checks {
                let tag = c.criterion.map(|k| format!("[{k}] ")).unwrap_or_default();
                println!(
                    "{} {tag}{}: {} (want {})",
                    if c.pass { "PASS" } else { "FAIL" },
                    c.name,
                    biriesz_cli::report::show(c.measured),
                    c.limit
                );
            }
            println!(
                "{}: report in {} ({:.2} s)",
                report.name,
                cfg.out_dir.as_ref().expect("set above").display(),
                report.wall_time
            );
            Ok(report.passed())
        }
        Command::Kernel {
            n,
            delta,
            rmax,
            step,
        } => {
            let table = biriesz_cli::experiments::kernel_table(n, delta, rmax, step)?;
            write_stdout(&table.to_csv()?)?;
            Ok(true)
        }
        Command::Indices { n, lattice } => {
            let step = parse_rational(&lattice)?;
            write_stdout(&threshold_rows(n, step)?.to_csv()?)?;
            Ok(true)
        }
        Command::Opnorm {
            symbol,
            triple,
            seeds,
            budget,
            seed,
            out,
        } => {
            let exps = parse_exponents(&triple)?;
            let symbol =
                Symbol::load(&symbol).with_context(|| format!("loading {}", symbol.display()))?;
            biriesz_cli::config::check_cap(symbol.spec().dim(), symbol.spec().points(), false)?;
            let op = BilinearOp::new(symbol, Engine::FrequencyLoop);
            let config = AscentConfig {
                budget,
                seeds,
                master_seed: seed,
            };
            let estimate = opnorm_lower_seeded(&op, exps, &config)?;
            let files = match out {
                Some(dir) => {
                    std::fs::create_dir_all(&dir)?;
                    estimate.save_witnesses(&dir, "witness")?
                }
                None => Vec::new(),
            };
            println!(
                "{}",
                serde_json::to_string_pretty(&estimate.to_json(&files))?
            );
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(2)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match dispatch(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
