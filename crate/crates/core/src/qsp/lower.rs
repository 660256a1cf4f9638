//! Lowering of controlled gates to single-qubit gates and CX.
//!
//! Runs of consecutive Ry, Rz or Phase gates that share a target and a control
//! set form a uniformly controlled (multiplexed) gate. Multiplexed rotations are
//! expanded with the Gray-code construction; multiplexed phases become a diagonal
//! that is peeled into multiplexed Rz layers plus a global phase.

use super::circuit::{Circuit, Control, Gate, GateKind};
use crate::error::Result;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum Axis {
    Y,
    Z,
}

/// `g_i = i ⊕ (i >> 1)`
fn gray(i: usize) -> usize {
    i ^ (i >> 1)
}

/// Solves for the rotation angles `α` such that the Gray-code sequence
/// `R(α_0) CX R(α_1) CX …` realizes `angles[x]` on control pattern `x`.
///
/// Rotation `i` sees its sign flipped once per set bit of `x & g_i`, so
/// `θ = A α` with `A_{x,i} = (−1)^{popcount(x & g_i)}`, and `Aᵀ A = 2^k I`.
pub fn gray_code_angles(angles: &[f64]) -> Vec<f64> {
    let n = angles.len();
    (0..n)
        .map(|i| {
            let g = gray(i);
            angles
                .iter()
                .enumerate()
                .map(|(x, &t)| if (x & g).count_ones().is_multiple_of(2) { t } else { -t })
                .sum::<f64>()
                / n as f64
        })
        .collect()
}

/// Rotations at or below this angle are dropped; the fidelity cost is below 1e-28.
const NEGLIGIBLE_ANGLE: f64 = 1e-14;

/// Expands a multiplexed rotation. `controls[0]` is the most significant bit of the pattern
/// index into `angles`, which must have length `2^controls.len()`.
fn multiplexed_rotation(axis: Axis, target: usize, controls: &[usize], angles: &[f64]) -> Vec<Gate> {
    debug_assert_eq!(angles.len(), 1 << controls.len());
    let rot = |a: f64| match axis {
        Axis::Y => Gate::ry(a, target),
        Axis::Z => Gate::rz(a, target),
    };
    if angles.iter().all(|a| a.abs() <= NEGLIGIBLE_ANGLE) {
        return Vec::new();
    }
    let k = controls.len();
    if k == 0 {
        return vec![rot(angles[0])];
    }
    let alphas = gray_code_angles(angles);
    let n = angles.len();
    let mut out = Vec::with_capacity(2 * n);
    for (i, &alpha) in alphas.iter().enumerate() {
        if alpha.abs() > NEGLIGIBLE_ANGLE {
            out.push(rot(alpha));
        }
        let changed = gray(i) ^ gray((i + 1) % n);
        let bit = changed.trailing_zeros() as usize;
        out.push(Gate::cx(controls[k - 1 - bit], target));
    }
    out
}

/// Diagonal unitary `Σ_x e^{iδ_x}|x⟩⟨x|` over `qubits` (first qubit most significant).
/// Returns the gates and the global phase they leave behind.
fn diagonal(qubits: &[usize], phases: &[f64]) -> (Vec<Gate>, f64) {
    let mut gates = Vec::new();
    let mut qubits = qubits.to_vec();
    let mut phases = phases.to_vec();
    while let Some(last) = qubits.pop() {
        let half = phases.len() / 2;
        let rz: Vec<f64> = (0..half).map(|y| phases[2 * y + 1] - phases[2 * y]).collect();
        gates.extend(multiplexed_rotation(Axis::Z, last, &qubits, &rz));
        phases = (0..half).map(|y| 0.5 * (phases[2 * y] + phases[2 * y + 1])).collect();
    }
    (gates, phases[0])
}

/// A run of multiplexable gates: same family, target and control qubits.
struct Group {
    kind: GateKind,
    target: usize,
    /// Control qubits in ascending order.
    qubits: Vec<usize>,
    angles: Vec<f64>,
}

impl Group {
    fn key(g: &Gate) -> Option<(std::mem::Discriminant<GateKind>, usize, Vec<usize>)> {
        if g.kind == GateKind::PauliX || g.controls.is_empty() {
            return None;
        }
        let mut qubits: Vec<usize> = g.controls.iter().map(|c| c.qubit).collect();
        qubits.sort_unstable();
        Some((std::mem::discriminant(&g.kind), g.target, qubits))
    }

    fn start(g: &Gate) -> Self {
        let mut qubits: Vec<usize> = g.controls.iter().map(|c| c.qubit).collect();
        qubits.sort_unstable();
        let mut group = Self {
            kind: g.kind,
            target: g.target,
            angles: vec![0.0; 1 << qubits.len()],
            qubits,
        };
        group.add(g);
        group
    }

    fn add(&mut self, g: &Gate) {
        let k = self.qubits.len();
        let mut pattern = 0;
        for (pos, q) in self.qubits.iter().enumerate() {
            let c = g.controls.iter().find(|c| c.qubit == *q).expect("same control set");
            if c.active {
                pattern |= 1 << (k - 1 - pos);
            }
        }
        self.angles[pattern] += g.kind.angle().expect("grouped gates carry an angle");
    }

    fn expand(&self, global_phase: &mut f64) -> Vec<Gate> {
        match self.kind {
            GateKind::RotY(_) => multiplexed_rotation(Axis::Y, self.target, &self.qubits, &self.angles),
            GateKind::RotZ(_) => multiplexed_rotation(Axis::Z, self.target, &self.qubits, &self.angles),
            GateKind::Phase(_) => {
                // P(η) on the target under pattern y is diag(1, e^{iη_y}) on (controls, target).
                let mut qubits = self.qubits.clone();
                qubits.push(self.target);
                let phases: Vec<f64> = self.angles.iter().flat_map(|&eta| [0.0, eta]).collect();
                let (gates, phase) = diagonal(&qubits, &phases);
                *global_phase += phase;
                gates
            }
            GateKind::PauliX => unreachable!("X gates are never grouped"),
        }
    }
}

/// Controlled X with arbitrary controls as `P(π)` then `Ry(π)` under the same controls.
fn controlled_x(g: &Gate) -> [Gate; 2] {
    [
        Gate::controlled(GateKind::Phase(std::f64::consts::PI), g.target, g.controls.clone()),
        Gate::controlled(GateKind::RotY(std::f64::consts::PI), g.target, g.controls.clone()),
    ]
}

/// Rewrites `c` over {X, Ry, Rz, Phase, CX}. The result implements the same unitary,
/// with any phase difference added to `global_phase`.
pub fn lower(c: &Circuit) -> Result<Circuit> {
    let mut out = Circuit::new(c.qubit_count());
    let mut global_phase = c.global_phase();
    let mut pending: Option<Group> = None;

    let flush = |pending: &mut Option<Group>, out: &mut Circuit, gp: &mut f64| -> Result<()> {
        if let Some(group) = pending.take() {
            out.extend(group.expand(gp))?;
        }
        Ok(())
    };

    let mut queue: std::collections::VecDeque<Gate> = c.gates().iter().cloned().collect();
    while let Some(g) = queue.pop_front() {
        if g.is_elementary() {
            flush(&mut pending, &mut out, &mut global_phase)?;
            out.push(g)?;
            continue;
        }
        if g.kind == GateKind::PauliX {
            let [p, r] = controlled_x(&g);
            queue.push_front(r);
            queue.push_front(p);
            continue;
        }
        match (&mut pending, Group::key(&g)) {
            (Some(group), Some((kind, target, qubits)))
                if std::mem::discriminant(&group.kind) == kind
                    && group.target == target
                    && group.qubits == qubits =>
            {
                group.add(&g);
            }
            _ => {
                flush(&mut pending, &mut out, &mut global_phase)?;
                pending = Some(Group::start(&g));
            }
        }
    }
    flush(&mut pending, &mut out, &mut global_phase)?;
    let mut simplified = Circuit::new(c.qubit_count());
    simplified.extend(cancel_cx_pairs(out.gates()))?;
    simplified.add_global_phase(global_phase);
    Ok(simplified)
}

/// Removes adjacent identical CX pairs, including pairs exposed by earlier removals.
fn cancel_cx_pairs(gates: &[Gate]) -> Vec<Gate> {
    let mut kept: Vec<Gate> = Vec::with_capacity(gates.len());
    for g in gates {
        if g.is_cx() && kept.last() == Some(g) {
            kept.pop();
        } else {
            kept.push(g.clone());
        }
    }
    kept
}

/// A single multi-controlled gate as a control list, for callers building circuits by hand.
pub fn controls_from_pattern(qubits: &[usize], pattern: usize) -> Vec<Control> {
    let k = qubits.len();
    qubits
        .iter()
        .enumerate()
        .map(|(pos, &q)| Control {
            qubit: q,
            active: (pattern >> (k - 1 - pos)) & 1 == 1,
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::ComplexMatrix;

    fn equal_up_to_phase(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
        // Align on the largest entry of `a`.
        let (mut best, mut idx) = (0.0, (0, 0));
        for r in 0..a.rows() {
            for c in 0..a.cols() {
                if a[(r, c)].norm() > best {
                    best = a[(r, c)].norm();
                    idx = (r, c);
                }
            }
        }
        let ratio = a[idx] / b[idx];
        a.max_abs_diff(&b.scale(ratio / ratio.norm()))
    }

    #[test]
    fn gray_code_matrix_is_orthogonal() {
        for k in 0..5 {
            let n = 1usize << k;
            for x in 0..n {
                let mut unit = vec![0.0; n];
                unit[x] = 1.0;
                let alphas = gray_code_angles(&unit);
                // Reapply A: Σ_i s_i(y) α_i must equal δ_{xy}.
                for y in 0..n {
                    let v: f64 = alphas
                        .iter()
                        .enumerate()
                        .map(|(i, a)| if (y & gray(i)).count_ones().is_multiple_of(2) { *a } else { -a })
                        .sum();
                    assert!((v - if x == y { 1.0 } else { 0.0 }).abs() < 1e-14);
                }
            }
        }
    }

    #[test]
    fn elementary_circuit_unchanged() {
        let mut c = Circuit::new(2);
        c.extend([Gate::ry(0.3, 0), Gate::cx(0, 1), Gate::rz(-1.0, 1), Gate::phase(0.2, 0), Gate::x(1)]).unwrap();
        c.add_global_phase(0.4);
        assert_eq!(lower(&c).unwrap(), c);
    }

    #[test]
    fn adjacent_cx_pairs_cancel() {
        let mut c = Circuit::new(2);
        c.extend([Gate::cx(0, 1), Gate::ry(0.2, 0), Gate::cx(1, 0), Gate::cx(0, 1), Gate::cx(0, 1), Gate::cx(1, 0)])
            .unwrap();
        assert_eq!(lower(&c).unwrap().gates(), &[Gate::cx(0, 1), Gate::ry(0.2, 0)]);
    }

    #[test]
    fn singly_controlled_ry_sandwich() {
        let theta = 1.1;
        let mut c = Circuit::new(2);
        c.push(Gate::controlled(GateKind::RotY(theta), 1, vec![Control::on(0)])).unwrap();
        let l = lower(&c).unwrap();
        assert_eq!(
            l.gates(),
            &[Gate::ry(theta / 2.0, 1), Gate::cx(0, 1), Gate::ry(-theta / 2.0, 1), Gate::cx(0, 1)]
        );
        assert!(l.unitary().max_abs_diff(&c.unitary()) < 1e-15);
    }

    #[test]
    fn full_layer_uses_two_to_the_k_cx() {
        let k = 3;
        let mut c = Circuit::new(k + 1);
        let qubits: Vec<usize> = (0..k).collect();
        for pattern in 0..(1 << k) {
            let angle = (1.7 * pattern as f64 + 0.3).sin();
            c.push(Gate::controlled(GateKind::RotY(angle), k, controls_from_pattern(&qubits, pattern))).unwrap();
        }
        let l = lower(&c).unwrap();
        let counts = l.gate_counts();
        assert_eq!(counts.cx, 1 << k);
        assert_eq!(counts.single_qubit, 1 << k);
        assert!(l.unitary().max_abs_diff(&c.unitary()) < 1e-13);
    }

    #[test]
    fn controlled_phase_and_x_lowering() {
        let mut c = Circuit::new(3);
        c.push(Gate::controlled(GateKind::Phase(0.7), 2, vec![Control::off(0), Control::on(1)])).unwrap();
        c.push(Gate::controlled(GateKind::PauliX, 0, vec![Control::on(2), Control::off(1)])).unwrap();
        c.push(Gate::controlled(GateKind::PauliX, 1, vec![Control::off(0)])).unwrap();
        c.push(Gate::controlled(GateKind::RotZ(-0.4), 1, vec![Control::on(2)])).unwrap();
        let l = lower(&c).unwrap();
        assert!(l.is_elementary());
        assert!(equal_up_to_phase(&l.unitary(), &c.unitary()) < 1e-13);
        assert!(l.unitary().max_abs_diff(&c.unitary()) < 1e-13, "global phase must be tracked");
    }
}
