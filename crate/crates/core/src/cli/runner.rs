//! The per-point protocol: channel, dilation, synthesis, execution, readback.

use std::fmt::Write as _;

use rayon::prelude::*;

use super::config::{ExperimentConfig, InitialState, MixedMethod, Mode};
use crate::channels::{l1_coherence, KrausChannel};
use crate::dilation::{
    dilate_pure, embed_qudits, mixed_method_double_purification, mixed_method_purify_evolved, oracle, DilatedState,
    SpectralInput,
};
use crate::error::{Error, Result};
use crate::numerics::{reduced_state, trace_distance, ComplexMatrix, DensityMatrix, PureState};
use crate::qsp::{lower, qasm, synthesize_auto, verify_preparation, Circuit};
use crate::simulator::{self, derive_seed, ReadoutModel};
use crate::tomography::{extract_qudit, settings_for, tomograph, Acquisition, TomographySettings};

/// Fidelity a lowered preparation circuit must reach.
pub const VERIFY_THRESHOLD: f64 = 1.0 - 1e-10;

pub const CSV_HEADER: &str =
    "param_value,C_theory,C_measured,trace_distance,mode,shots,seed,synth_gate_count,lowered_gate_count";

#[derive(Debug, Clone, PartialEq)]
pub struct PointResult {
    pub index: usize,
    pub param_value: f64,
    /// Coherence of the operator-sum output.
    pub c_theory: f64,
    pub c_measured: f64,
    /// Distance between the recovered and operator-sum states.
    pub trace_distance: f64,
    pub synth_gate_count: usize,
    pub lowered_gate_count: usize,
    /// Population lost to unused embedding levels during tomography.
    pub dropped_mass: f64,
    pub seed: u64,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResultTable {
    pub mode: Mode,
    pub shots: u64,
    pub rows: Vec<PointResult>,
}

impl ResultTable {
    pub fn failures(&self) -> impl Iterator<Item = &PointResult> {
        self.rows.iter().filter(|r| r.error.is_some())
    }

    pub fn column_c_measured(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.c_measured).collect()
    }

    /// One line per grid point in grid order. Failed points carry `NaN` measurements.
    pub fn to_csv(&self) -> String {
        let mut out = String::from(CSV_HEADER);
        out.push('\n');
        let shots = if self.mode == Mode::Sampled { self.shots } else { 0 };
        for r in &self.rows {
            writeln!(
                out,
                "{},{},{},{},{},{},{},{},{}",
                r.param_value,
                r.c_theory,
                r.c_measured,
                r.trace_distance,
                self.mode.as_str(),
                shots,
                r.seed,
                r.synth_gate_count,
                r.lowered_gate_count
            )
            .unwrap();
        }
        out
    }
}

/// One state to prepare, weighted in the final mixture.
struct Branch {
    weight: f64,
    dilated: DilatedState,
}

fn branches(ch: &KrausChannel, state: &InitialState) -> Result<Vec<Branch>> {
    Ok(match state {
        InitialState::Pure(psi) => vec![Branch {
            weight: 1.0,
            dilated: dilate_pure(ch, psi)?,
        }],
        InitialState::Mixed { rho, method } => match method {
            MixedMethod::PurifyEvolved => vec![Branch {
                weight: 1.0,
                dilated: mixed_method_purify_evolved(ch, rho)?,
            }],
            MixedMethod::DoublePurification => vec![Branch {
                weight: 1.0,
                dilated: mixed_method_double_purification(ch, rho)?,
            }],
            MixedMethod::Convex => SpectralInput::from_density(rho)?
                .support()
                .map(|(w, v)| {
                    Ok(Branch {
                        weight: w,
                        dilated: dilate_pure(ch, v)?,
                    })
                })
                .collect::<Result<_>>()?,
        },
    })
}

/// A compiled branch: the synthesized circuit and its lowered form.
pub struct Compiled {
    pub target: PureState,
    pub synthesized: Circuit,
    pub lowered: Circuit,
}

pub fn compile(dilated: &DilatedState) -> Result<Compiled> {
    let target = embed_qudits(dilated);
    let synthesized = synthesize_auto(&target)?.circuit;
    let lowered = lower(&synthesized)?;
    let fidelity = verify_preparation(&lowered, &target)?;
    if fidelity < VERIFY_THRESHOLD {
        return Err(Error::Verification(format!(
            "lowered preparation reaches fidelity {fidelity}, below {VERIFY_THRESHOLD}"
        )));
    }
    Ok(Compiled {
        target,
        synthesized,
        lowered,
    })
}

fn system_settings(dilated: &DilatedState) -> Result<TomographySettings> {
    let qubits: Vec<usize> = dilated.embedding().factor_qubits(0).collect();
    settings_for(&qubits)
}

fn readback(
    dilated: &DilatedState,
    lowered: &Circuit,
    cfg: &ExperimentConfig,
    seed: u64,
) -> Result<(DensityMatrix, f64)> {
    let out = simulator::run(lowered)?;
    match cfg.mode {
        Mode::Exact => {
            let (amps, leak) = dilated.embedding().extract(out.amplitudes());
            if leak > 1e-10 {
                return Err(Error::Verification(format!("{leak:e} of the norm left the embedded levels")));
            }
            let psi = PureState::normalized(amps)?;
            Ok((reduced_state(&psi, &[dilated.system_dim(), dilated.ancilla_dim()], &[0])?, 0.0))
        }
        Mode::Sampled => {
            let settings = system_settings(dilated)?;
            let readout = cfg
                .readout
                .map(|(e0, e1)| ReadoutModel::uniform(lowered.qubit_count(), e0, e1))
                .transpose()?;
            let acq = Acquisition {
                shots: cfg.shots,
                seed,
                readout,
            };
            let result = tomograph(&out, &settings, &acq)?;
            let d = dilated.system_dim();
            if result.projected.dim() == d {
                Ok((result.projected, 0.0))
            } else {
                let q = extract_qudit(&result.projected, d)?;
                Ok((q.state, q.dropped_mass))
            }
        }
    }
}

fn run_point(cfg: &ExperimentConfig, index: usize, value: f64) -> PointResult {
    let seed = derive_seed(cfg.seed, index as u64);
    let mut row = PointResult {
        index,
        param_value: value,
        c_theory: f64::NAN,
        c_measured: f64::NAN,
        trace_distance: f64::NAN,
        synth_gate_count: 0,
        lowered_gate_count: 0,
        dropped_mass: 0.0,
        seed,
        error: None,
    };
    let result = (|| -> Result<()> {
        let ch = cfg.channel_at(value)?;
        let theory = oracle(&ch, &cfg.state.density())?;
        row.c_theory = l1_coherence(&theory);
        let d = ch.dim();
        let mut acc = ComplexMatrix::zeros(d, d);
        for (b, branch) in branches(&ch, &cfg.state)?.iter().enumerate() {
            let compiled = compile(&branch.dilated)?;
            row.synth_gate_count += compiled.synthesized.gate_counts().total;
            row.lowered_gate_count += compiled.lowered.gate_counts().total;
            let (rho, dropped) = readback(&branch.dilated, &compiled.lowered, cfg, derive_seed(seed, b as u64))?;
            row.dropped_mass += branch.weight * dropped;
            acc = &acc + &rho.matrix().scale_real(branch.weight);
        }
        let measured = DensityMatrix::new(acc)?;
        row.c_measured = l1_coherence(&measured);
        row.trace_distance = trace_distance(&measured, &theory)?;
        Ok(())
    })();
    if let Err(e) = result {
        row.c_measured = f64::NAN;
        row.trace_distance = f64::NAN;
        row.error = Some(e.to_string());
    }
    row
}

/// Runs every grid point, in parallel, and returns rows in grid order.
///
/// Configuration problems are returned as errors. A point that fails during synthesis
/// or verification still yields a row, with `error` set.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ResultTable> {
    cfg.validate()?;
    let rows = cfg
        .grid
        .par_iter()
        .enumerate()
        .map(|(k, &v)| run_point(cfg, k, v))
        .collect();
    Ok(ResultTable {
        mode: cfg.mode,
        shots: cfg.shots,
        rows,
    })
}

/// A named OpenQASM program.
#[derive(Debug, Clone, PartialEq)]
pub struct QasmProgram {
    pub name: String,
    pub text: String,
}

/// Programs for grid point `point`: the preparation measured in `Z` (`prep`), then one
/// program per tomography setting (`prep_XY`…). Convex mixtures get a `_b{k}` suffix per branch.
pub fn export_qasm(cfg: &ExperimentConfig, point: usize) -> Result<Vec<QasmProgram>> {
    cfg.validate()?;
    let value = *cfg.grid.get(point).ok_or_else(|| {
        Error::Config(format!("grid point {point} out of range (grid has {} points)", cfg.grid.len()))
    })?;
    let ch = cfg.channel_at(value)?;
    let branches = branches(&ch, &cfg.state)?;
    let mut out = Vec::new();
    for (b, branch) in branches.iter().enumerate() {
        let suffix = if branches.len() == 1 { String::new() } else { format!("_b{b}") };
        let compiled = compile(&branch.dilated)?;
        out.push(QasmProgram {
            name: format!("prep{suffix}"),
            text: qasm::to_qasm(&compiled.lowered, true)?,
        });
        let settings = system_settings(&branch.dilated)?;
        for (k, s) in settings.settings().iter().enumerate() {
            let mut c = compiled.lowered.clone();
            c.append(&settings.rotation(k, c.qubit_count())?)?;
            out.push(QasmProgram {
                name: format!("prep_{s}{suffix}"),
                text: qasm::to_qasm(&c, true)?,
            });
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dilation::dilate_pure;

    #[test]
    fn csv_layout() {
        let cfg = ExperimentConfig::catalog("bit_phase_flip", "p", vec![0.0, 0.25]);
        let table = run_experiment(&cfg).unwrap();
        let csv = table.to_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], CSV_HEADER);
        assert_eq!(lines.len(), 3);
        let fields: Vec<&str> = lines[2].split(',').collect();
        assert_eq!(fields.len(), 9);
        assert_eq!(fields[0], "0.25");
        assert!((fields[1].parse::<f64>().unwrap() - 0.5).abs() < 1e-15);
        assert!(lines[2].contains(",exact,0,"));
    }

    #[test]
    fn exact_point_matches_theory() {
        let cfg = ExperimentConfig::catalog("gad", "p", vec![0.3]).with_fixed("N", 0.5);
        let row = &run_experiment(&cfg).unwrap().rows[0];
        assert!(row.error.is_none());
        assert!((row.c_measured - 0.7f64.sqrt()).abs() < 1e-10);
        assert!(row.trace_distance < 1e-10);
        assert!(row.lowered_gate_count >= row.synth_gate_count);
    }

    #[test]
    fn identity_export_has_one_ry() {
        let cfg = ExperimentConfig::catalog("identity", "d", vec![2.0]);
        let programs = export_qasm(&cfg, 0).unwrap();
        assert_eq!(programs[0].name, "prep");
        assert_eq!(programs[0].text.matches("ry(").count(), 1);
        assert_eq!(programs.len(), 4);
        assert!(export_qasm(&cfg, 1).is_err());
    }

    #[test]
    fn exported_bpf_resimulates() {
        let cfg = ExperimentConfig::catalog("bit_phase_flip", "p", vec![0.5]);
        let programs = export_qasm(&cfg, 0).unwrap();
        let c = qasm::parse_qasm(&programs[0].text).unwrap();
        assert_eq!(c.qubit_count(), 2);
        let expected = dilate_pure(&cfg.channel_at(0.5).unwrap(), &PureState::plus()).unwrap();
        let out = simulator::run(&c).unwrap();
        assert!(out.distance_up_to_phase(expected.state()) < 1e-10);
    }
}
