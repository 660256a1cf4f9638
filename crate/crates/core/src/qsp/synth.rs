//! State preparation by recursive multiplexed rotations.
//!
//! An `n`-qubit target `Σ c_x |x⟩` is split on its last qubit:
//! `Σ_y r_y |y⟩ ⊗ U_y|0⟩` with `r_y = √(|c_{y0}|² + |c_{y1}|²)`. The real
//! prefix `Σ r_y |y⟩` is prepared recursively with Ry gates only, then one
//! controlled `U_y = e^{it/2} Rz(φ) Ry(θ)` per control pattern `y` finishes the
//! target qubit. Level `k` therefore holds `2^{k−1}` controlled slots.

use serde::{Deserialize, Serialize};

use super::circuit::{Circuit, Control, Gate, GateKind};
use crate::error::{Error, Result};
use crate::numerics::{PureState, C64, TOL};

/// Largest register accepted by the synthesizers.
pub const MAX_QUBITS: usize = 12;

/// Branches with weight `r_y` at or below this are skipped.
const PRUNE_TOLERANCE: f64 = 1e-15;

/// Slot accounting for a synthesized circuit.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SynthesisReport {
    pub qubits: usize,
    /// `Σ_{k=1}^{n} 2^{k−1}` multi-controlled-U slots.
    pub slots: usize,
    /// Slots skipped because their branch amplitude vanishes.
    pub pruned: usize,
}

impl SynthesisReport {
    pub fn emitted(&self) -> usize {
        self.slots - self.pruned
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Synthesis {
    pub circuit: Circuit,
    pub report: SynthesisReport,
}

fn qubits_for(target: &PureState) -> Result<usize> {
    let dim = target.dim();
    if !dim.is_power_of_two() || dim < 2 {
        return Err(Error::InvalidState(format!(
            "state dimension {dim} is not a power of two"
        )));
    }
    let n = dim.trailing_zeros() as usize;
    if n > MAX_QUBITS {
        return Err(Error::InvalidState(format!(
            "{n} qubits exceeds the synthesis limit of {MAX_QUBITS}"
        )));
    }
    let norm = target.amplitudes().iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    if (norm - 1.0).abs() > TOL.validation {
        return Err(Error::InvalidState(format!("state norm {norm} is not 1")));
    }
    Ok(n)
}

/// Controls `0..m` with activation bits taken from `pattern`, qubit 0 most significant.
fn pattern_controls(m: usize, pattern: usize) -> Vec<Control> {
    (0..m)
        .map(|q| Control {
            qubit: q,
            active: (pattern >> (m - 1 - q)) & 1 == 1,
        })
        .collect()
}

#[derive(Clone, Copy, PartialEq)]
enum Mode {
    /// Magnitudes via Ry, relative phases via Rz and a branch phase.
    Complex,
    /// Signed real amplitudes via Ry only.
    Real,
}

/// Emits the slots of level `m` (target qubit `m − 1`) after recursing on the prefix.
fn prepare(amps: &[C64], mode: Mode, circuit: &mut Circuit, report: &mut SynthesisReport) -> Result<()> {
    let m = amps.len().trailing_zeros() as usize;
    let half = amps.len() / 2;
    let weights: Vec<f64> = (0..half)
        .map(|y| (amps[2 * y].norm_sqr() + amps[2 * y + 1].norm_sqr()).sqrt())
        .collect();
    if m > 1 {
        let prefix: Vec<C64> = weights.iter().map(|&w| C64::new(w, 0.0)).collect();
        prepare(&prefix, Mode::Real, circuit, report)?;
    }

    let target = m - 1;
    let mut ry = Vec::new();
    let mut rz = Vec::new();
    let mut branch_phase = Vec::new();
    report.slots += half;
    for (y, &w) in weights.iter().enumerate() {
        if w <= PRUNE_TOLERANCE {
            report.pruned += 1;
            continue;
        }
        let (c0, c1) = (amps[2 * y], amps[2 * y + 1]);
        let controls = pattern_controls(target, y);
        match mode {
            Mode::Real => {
                let theta = 2.0 * c1.re.atan2(c0.re);
                ry.push(Gate::controlled(GateKind::RotY(theta), target, controls));
            }
            Mode::Complex => {
                let theta = 2.0 * c1.norm().atan2(c0.norm());
                let (phi0, phi1) = (c0.im.atan2(c0.re), c1.im.atan2(c1.re));
                let (phi, t) = (phi1 - phi0, phi1 + phi0);
                ry.push(Gate::controlled(GateKind::RotY(theta), target, controls.clone()));
                if phi != 0.0 {
                    rz.push(Gate::controlled(GateKind::RotZ(phi), target, controls.clone()));
                }
                if t != 0.0 {
                    if target == 0 {
                        circuit.add_global_phase(t / 2.0);
                    } else {
                        branch_phase.push(Gate::controlled(GateKind::Phase(t / 2.0), target, controls));
                    }
                }
            }
        }
    }
    // X·P(t/2)·X on the still-|0⟩ target puts e^{it/2} on the selected branch.
    if !branch_phase.is_empty() {
        circuit.push(Gate::x(target))?;
        circuit.extend(branch_phase)?;
        circuit.push(Gate::x(target))?;
    }
    circuit.extend(ry)?;
    circuit.extend(rz)?;
    Ok(())
}

/// Preparation circuit for an arbitrary `n`-qubit state, `1 ≤ n ≤ 12`, correct up to
/// the tracked global phase.
pub fn synthesize(target: &PureState) -> Result<Synthesis> {
    let n = qubits_for(target)?;
    let mut circuit = Circuit::new(n);
    let mut report = SynthesisReport {
        qubits: n,
        ..Default::default()
    };
    prepare(target.amplitudes(), Mode::Complex, &mut circuit, &mut report)?;
    Ok(Synthesis { circuit, report })
}

/// Ry-only preparation circuit for a state with real amplitudes.
pub fn synthesize_real(target: &PureState) -> Result<Synthesis> {
    let n = qubits_for(target)?;
    if let Some(a) = target.amplitudes().iter().find(|a| a.im.abs() > 1e-12) {
        return Err(Error::InvalidState(format!(
            "real synthesis needs real amplitudes, found {a}"
        )));
    }
    let mut circuit = Circuit::new(n);
    let mut report = SynthesisReport {
        qubits: n,
        ..Default::default()
    };
    let real: Vec<C64> = target.amplitudes().iter().map(|a| C64::new(a.re, 0.0)).collect();
    prepare(&real, Mode::Real, &mut circuit, &mut report)?;
    Ok(Synthesis { circuit, report })
}

/// Real synthesis when every amplitude is real, complex synthesis otherwise.
pub fn synthesize_auto(target: &PureState) -> Result<Synthesis> {
    if target.amplitudes().iter().all(|a| a.im.abs() <= 1e-12) {
        synthesize_real(target)
    } else {
        synthesize(target)
    }
}

/// `|⟨target|run(c)⟩|²`
pub fn verify_preparation(circuit: &Circuit, target: &PureState) -> Result<f64> {
    let expected = 1usize << circuit.qubit_count();
    if expected != target.dim() {
        return Err(Error::DimensionMismatch {
            context: "circuit register and target state",
            expected,
            found: target.dim(),
        });
    }
    let out = crate::simulator::run(circuit)?;
    Ok(target.fidelity(&out).min(1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::c64;
    use std::f64::consts::FRAC_PI_2;

    #[test]
    fn plus_state_is_a_single_ry() {
        let s = synthesize(&PureState::plus()).unwrap();
        assert_eq!(s.circuit.gates(), &[Gate::ry(FRAC_PI_2, 0)]);
        assert_eq!(s.circuit.global_phase(), 0.0);
        assert_eq!(s.report.slots, 1);
    }

    #[test]
    fn ground_state_has_zero_angles() {
        let s = synthesize(&PureState::basis(8, 0)).unwrap();
        for g in s.circuit.gates() {
            assert_eq!(g.kind.angle(), Some(0.0), "{g}");
        }
        assert_eq!(s.report.slots, 7);
        assert_eq!(s.report.pruned, 3 + 1);
        assert!((verify_preparation(&s.circuit, &PureState::basis(8, 0)).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn bpf_half_state() {
        let target = PureState::new(vec![c64(0.5, 0.0), c64(0.0, -0.5), c64(0.5, 0.0), c64(0.0, 0.5)]).unwrap();
        let s = synthesize(&target).unwrap();
        let out = crate::simulator::run(&s.circuit).unwrap();
        assert!(out.distance_up_to_phase(&target) < 1e-12);
        assert!(verify_preparation(&s.circuit, &target).unwrap() > 1.0 - 1e-12);
    }

    #[test]
    fn global_phase_is_tracked_exactly() {
        let target = PureState::new(vec![c64(0.0, 0.6), c64(-0.8, 0.0)]).unwrap();
        let s = synthesize(&target).unwrap();
        let out = crate::simulator::run(&s.circuit).unwrap();
        for (a, b) in out.amplitudes().iter().zip(target.amplitudes()) {
            assert!((a - b).norm() < 1e-15);
        }
    }

    #[test]
    fn real_one_qubit() {
        let target = PureState::from_real(&[0.3f64.sqrt(), 0.7f64.sqrt()]).unwrap();
        let s = synthesize_real(&target).unwrap();
        let theta = 2.0 * 0.7f64.sqrt().atan2(0.3f64.sqrt());
        assert_eq!(s.circuit.gates(), &[Gate::ry(theta, 0)]);
    }

    #[test]
    fn real_synthesis_uses_ry_only_and_handles_signs() {
        let target = PureState::from_real(&[0.5, -0.5, -0.5, 0.5]).unwrap();
        let s = synthesize_real(&target).unwrap();
        assert!(s.circuit.gates().iter().all(|g| matches!(g.kind, GateKind::RotY(_))));
        let out = crate::simulator::run(&s.circuit).unwrap();
        for (a, b) in out.amplitudes().iter().zip(target.amplitudes()) {
            assert!((a - b).norm() < 1e-15);
        }
        let uniform = PureState::uniform(4);
        let s = synthesize_real(&uniform).unwrap();
        assert_eq!(s.circuit.gates().len(), 3);
        assert!(verify_preparation(&s.circuit, &uniform).unwrap() > 1.0 - 1e-15);
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(synthesize(&PureState::uniform(3)).is_err());
        assert!(synthesize(&PureState::uniform(1 << 13)).is_err());
        assert!(synthesize_real(&PureState::bloch(1.0, 0.5)).is_err());
    }

    #[test]
    fn verify_trivial_circuits() {
        let empty = Circuit::new(2);
        assert!((verify_preparation(&empty, &PureState::basis(4, 0)).unwrap() - 1.0).abs() < 1e-15);
        assert!(verify_preparation(&empty, &PureState::basis(4, 3)).unwrap() < 1e-15);
        assert!(verify_preparation(&empty, &PureState::basis(8, 0)).is_err());
    }
}
