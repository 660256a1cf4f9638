//! Experiment runner and the `chansim` command line.
//!
//! Exit codes: 0 success, 1 configuration or input error, 2 numerical verification failure.

mod config;
mod runner;

use std::collections::BTreeMap;
use std::path::PathBuf;

use clap::{Parser, Subcommand};

pub use config::{linspace, ChannelSpec, ExperimentConfig, InitialState, MixedMethod, Mode, OutputPaths};
pub use runner::{
    compile, export_qasm, run_experiment, Compiled, PointResult, QasmProgram, ResultTable, CSV_HEADER,
    VERIFY_THRESHOLD,
};

use crate::channels::{apply_channel, from_catalog, l1_coherence, validate_cptp, KrausChannel};
use crate::error::{Error, Result};
use crate::numerics::{DensityMatrix, PureState, C64, TOL};
use crate::qsp::{lower, synthesize, synthesize_real, verify_preparation};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 1;
pub const EXIT_VERIFY: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "chansim", version, about = "Noisy channel simulation through dilated-state circuits")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check the completeness relation of a Kraus channel file.
    Validate {
        channel: PathBuf,
        #[arg(long, default_value_t = TOL.validation)]
        tol: f64,
    },
    /// Run a parameter sweep and write its CSV table.
    Sweep {
        config: PathBuf,
        /// Output CSV, overriding the config; `-` for stdout.
        #[arg(long)]
        csv: Option<PathBuf>,
        /// Worker threads (defaults to all cores).
        #[arg(long)]
        threads: Option<usize>,
    },
    /// Synthesize a preparation circuit and print it.
    Synth {
        /// Amplitudes as JSON: `[0.6, 0.8]` or `[[re, im], ...]`; normalized if needed.
        #[arg(long)]
        state: String,
        /// Ry-only synthesis for real amplitudes.
        #[arg(long)]
        real: bool,
        /// Print the lowered circuit instead.
        #[arg(long)]
        lower: bool,
    },
    /// Write OpenQASM programs for one grid point of a sweep.
    ExportQasm {
        config: PathBuf,
        #[arg(long, default_value_t = 0)]
        point: usize,
        /// Directory for the programs, overriding the config. Without one, `prep` goes to stdout.
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
    /// Print the operator-sum output of a channel on an input state.
    Oracle {
        /// Catalog channel name.
        #[arg(long, conflicts_with = "file")]
        channel: Option<String>,
        /// Kraus channel file.
        #[arg(long)]
        file: Option<PathBuf>,
        /// Channel parameter, `name=value`; repeatable.
        #[arg(long = "param", value_parser = parse_key_value)]
        params: Vec<(String, f64)>,
        /// Input amplitudes as JSON; defaults to the uniform superposition.
        #[arg(long)]
        state: Option<String>,
    },
}

fn parse_key_value(s: &str) -> std::result::Result<(String, f64), String> {
    let (k, v) = s.split_once('=').ok_or_else(|| format!("expected name=value, found `{s}`"))?;
    let v: f64 = v.trim().parse().map_err(|_| format!("`{v}` is not a number"))?;
    Ok((k.trim().to_string(), v))
}

/// Parses `[0.6, 0.8]` or `[[re, im], ...]` and normalizes.
pub fn parse_amplitudes(json: &str) -> Result<PureState> {
    #[derive(serde::Deserialize)]
    #[serde(untagged)]
    enum Amp {
        Real(f64),
        Complex([f64; 2]),
    }
    let raw: Vec<Amp> = serde_json::from_str(json).map_err(|e| Error::Config(format!("state: {e}")))?;
    let amps = raw
        .into_iter()
        .map(|a| match a {
            Amp::Real(x) => C64::new(x, 0.0),
            Amp::Complex([re, im]) => C64::new(re, im),
        })
        .collect();
    PureState::normalized(amps).map_err(|e| Error::Config(e.to_string()))
}

/// Error to exit code: verification failures are 2, everything else 1.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Verification(_) => EXIT_VERIFY,
        _ => EXIT_CONFIG,
    }
}

fn matrix_json(rho: &DensityMatrix) -> serde_json::Value {
    let d = rho.dim();
    (0..d)
        .map(|r| (0..d).map(|c| [rho.get(r, c).re, rho.get(r, c).im]).collect::<Vec<_>>())
        .collect::<Vec<_>>()
        .into()
}

fn execute(command: Command) -> Result<i32> {
    match command {
        Command::Validate { channel, tol } => {
            let text = std::fs::read_to_string(&channel)
                .map_err(|e| Error::Config(format!("cannot read {}: {e}", channel.display())))?;
            let file: crate::channels::ChannelFile =
                serde_json::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", channel.display())))?;
            let ch = KrausChannel::try_from(file).map_err(|e| Error::Config(e.to_string()))?;
            let report = validate_cptp(&ch, tol);
            println!(
                "{} residual={:e} tol={:e} kraus_ops={} dim={}",
                if report.passed { "PASS" } else { "FAIL" },
                report.residual,
                tol,
                ch.len(),
                ch.dim()
            );
            Ok(if report.passed { EXIT_OK } else { EXIT_VERIFY })
        }
        Command::Sweep { config, csv, threads } => {
            let cfg = ExperimentConfig::load(&config)?;
            let table = match threads {
                Some(n) => rayon::ThreadPoolBuilder::new()
                    .num_threads(n)
                    .build()
                    .map_err(|e| Error::Config(e.to_string()))?
                    .install(|| run_experiment(&cfg))?,
                None => run_experiment(&cfg)?,
            };
            let text = table.to_csv();
            match csv.or(cfg.output.csv.clone()) {
                Some(p) if p.as_os_str() != "-" => std::fs::write(&p, &text)?,
                _ => print!("{text}"),
            }
            for r in table.failures() {
                eprintln!(
                    "point {} ({}): {}",
                    r.index,
                    r.param_value,
                    r.error.as_deref().unwrap_or_default()
                );
            }
            Ok(if table.failures().next().is_some() { EXIT_VERIFY } else { EXIT_OK })
        }
        Command::Synth { state, real, lower: lowered } => {
            let target = parse_amplitudes(&state)?;
            let synthesis = if real { synthesize_real(&target)? } else { synthesize(&target)? };
            let circuit = if lowered { lower(&synthesis.circuit)? } else { synthesis.circuit.clone() };
            print!("{}", circuit.dump());
            let counts = circuit.gate_counts();
            let fidelity = verify_preparation(&circuit, &target)?;
            println!(
                "# slots={} pruned={} gates={} cx={} fidelity={fidelity}",
                synthesis.report.slots, synthesis.report.pruned, counts.total, counts.cx
            );
            Ok(if fidelity >= VERIFY_THRESHOLD { EXIT_OK } else { EXIT_VERIFY })
        }
        Command::ExportQasm { config, point, out_dir } => {
            let cfg = ExperimentConfig::load(&config)?;
            let programs = export_qasm(&cfg, point)?;
            match out_dir.or(cfg.output.qasm_dir.clone()) {
                Some(dir) => {
                    std::fs::create_dir_all(&dir)?;
                    for p in &programs {
                        let path = dir.join(format!("point{point}_{}.qasm", p.name));
                        std::fs::write(&path, &p.text)?;
                        println!("{}", path.display());
                    }
                }
                None => print!("{}", programs[0].text),
            }
            Ok(EXIT_OK)
        }
        Command::Oracle {
            channel,
            file,
            params,
            state,
        } => {
            let params: BTreeMap<String, f64> = params.into_iter().collect();
            let ch = match (channel, file) {
                (Some(name), None) => from_catalog(&name, &params).map_err(|e| Error::Config(e.to_string()))?,
                (None, Some(path)) => KrausChannel::load(&path).map_err(|e| Error::Config(e.to_string()))?,
                _ => return Err(Error::Config("give exactly one of --channel or --file".into())),
            };
            let psi = match state {
                Some(s) => parse_amplitudes(&s)?,
                None => PureState::uniform(ch.dim()),
            };
            let out = apply_channel(&ch, &DensityMatrix::from_pure(&psi))
                .map_err(|e| Error::Config(e.to_string()))?;
            let report = serde_json::json!({
                "channel": ch.label(),
                "params": ch.params(),
                "output": matrix_json(&out),
                "l1_coherence": l1_coherence(&out),
                "purity": out.purity(),
            });
            println!("{}", serde_json::to_string_pretty(&report)?);
            Ok(EXIT_OK)
        }
    }
}

/// Runs the command line given by `args` (program name first) and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match execute(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

pub fn main() -> i32 {
    run(std::env::args_os())
}
