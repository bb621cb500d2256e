use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use smc_irl::dynamics::VsrParameters;
use smc_irl::experiments::{
    chattering_per_channel, evaluate_log, evaluation_run, export_results, fmt_f64, metrics_text,
    read_trajectory, run_experiment, trapezoid, verify_chaplygin, write_trajectory,
    ExperimentConfig, ExperimentError, SystemSelector, WeightsFile,
};
use smc_irl::irl::IrlError;

const EXIT_CONFIG: u8 = 2;
const EXIT_NUMERICAL: u8 = 3;
const EXIT_VERIFY: u8 = 4;

/// Relative tolerance for `verify chaplygin`.
const VERIFY_TOLERANCE: f64 = 0.005;

#[derive(Parser)]
#[command(
    name = "smc-irl",
    version,
    about = "Sliding-mode control with learned saturation"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Example {
    Example1,
    Example2,
}

#[derive(Clone, Copy, ValueEnum)]
enum Verify {
    Chaplygin,
}

#[derive(Subcommand)]
enum Command {
    /// Learn the saturation function and evaluate it.
    Run {
        example: Example,
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
        /// `key.path=value`, repeatable.
        #[arg(long = "override", value_name = "KEY=VALUE")]
        overrides: Vec<String>,
    },
    /// Check the assembled Segway coefficients against the published ones.
    Verify {
        what: Verify,
        #[arg(long)]
        g0: Option<f64>,
    },
    /// Closed-loop run of a saved controller without retraining.
    Eval {
        #[arg(long)]
        weights: PathBuf,
        #[arg(long)]
        system: String,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long = "override", value_name = "KEY=VALUE")]
        overrides: Vec<String>,
    },
    /// Chattering and cost of an exported trajectory.
    Metrics {
        #[arg(long)]
        trajectory: PathBuf,
        #[arg(long, default_value_t = 1.0)]
        window: f64,
    },
}

fn exit_code(err: &ExperimentError) -> u8 {
    match err {
        ExperimentError::Config(_) | ExperimentError::Parse { .. } | ExperimentError::Model(_) => {
            EXIT_CONFIG
        }
        ExperimentError::Numerical(IrlError::Config(_)) => EXIT_CONFIG,
        ExperimentError::Numerical(_) => EXIT_NUMERICAL,
        ExperimentError::Io { .. } => 1,
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code(&err))
        }
    }
}

fn dispatch(command: Command) -> Result<u8, ExperimentError> {
    match command {
        Command::Run {
            example,
            config,
            out,
            overrides,
        } => {
            let base = match example {
                Example::Example1 => ExperimentConfig::example1(),
                Example::Example2 => ExperimentConfig::example2(),
            };
            let cfg = ExperimentConfig::load(base, config.as_deref(), &overrides)?;
            let outcome = run_experiment(&cfg)?;
            print!("{}", metrics_text(&outcome));
            let dir = out
                .or_else(|| (!cfg.output.dir.is_empty()).then(|| PathBuf::from(&cfg.output.dir)));
            if let Some(dir) = dir {
                for f in export_results(&dir, &outcome)? {
                    log::info!("wrote {}", f.display());
                }
            }
            Ok(0)
        }
        Command::Verify {
            what: Verify::Chaplygin,
            g0,
        } => {
            let cmp = verify_chaplygin(&VsrParameters::default(), g0)?;
            println!("g0={}", cmp.g0);
            let mut ok = true;
            for (i, (a, p)) in cmp.assembled.iter().zip(&cmp.published).enumerate() {
                let rel = (a - p).abs() / p.abs();
                let pass = rel <= VERIFY_TOLERANCE;
                ok &= pass;
                println!(
                    "coefficient{} assembled={a:.6} published={p:.6} relative_error={rel:.3e} {}",
                    i + 1,
                    if pass { "ok" } else { "MISMATCH" }
                );
            }
            println!("max_relative_deviation={:.3e}", cmp.max_relative_deviation);
            Ok(if ok { 0 } else { EXIT_VERIFY })
        }
        Command::Eval {
            weights,
            system,
            out,
            overrides,
        } => {
            let selector = SystemSelector::parse(&system)
                .ok_or_else(|| ExperimentError::Config(format!("unknown system `{system}`")))?;
            let w = WeightsFile::load(&weights)?;
            let cfg =
                ExperimentConfig::load(ExperimentConfig::defaults_for(selector), None, &overrides)?;
            let (ctrl, log) = evaluation_run(&cfg, w.saturation)?;
            let m = evaluate_log(&ctrl, &log, &cfg.evaluation)?;
            println!("total_cost={}", fmt_f64(m.total_cost));
            println!("final_state_norm={}", fmt_f64(m.final_state_norm));
            for (i, c) in m.chattering.iter().enumerate() {
                println!("u{}.sign_reversals={}", i + 1, c.sign_reversals);
                println!("u{}.total_variation={}", i + 1, fmt_f64(c.total_variation));
            }
            if let Some(dir) = out {
                std::fs::create_dir_all(&dir).map_err(|source| ExperimentError::Io {
                    path: dir.clone(),
                    source,
                })?;
                let degrees = cfg.output.degrees_x1 && selector != SystemSelector::Siso;
                write_trajectory(&dir.join("trajectory_eval.csv"), &log, degrees)?;
            }
            Ok(0)
        }
        Command::Metrics { trajectory, window } => {
            let table = read_trajectory(&trajectory)?;
            let per = chattering_per_channel(&table.times, &table.inputs, window)
                .map_err(|e| ExperimentError::Config(e.to_string()))?;
            println!(
                "total_cost={}",
                fmt_f64(trapezoid(&table.times, &table.cost))
            );
            for (i, c) in per.iter().enumerate() {
                println!("u{}.sign_reversals={}", i + 1, c.sign_reversals);
                println!("u{}.total_variation={}", i + 1, fmt_f64(c.total_variation));
            }
            Ok(0)
        }
    }
}
