use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{ComplexMatrix, C64, I, ONE, ZERO};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum GateKind {
    PauliX,
    RotY(f64),
    RotZ(f64),
    /// `|0⟩⟨0| + e^{iη}|1⟩⟨1|`
    Phase(f64),
}

impl GateKind {
    pub fn name(&self) -> &'static str {
        match self {
            GateKind::PauliX => "x",
            GateKind::RotY(_) => "ry",
            GateKind::RotZ(_) => "rz",
            GateKind::Phase(_) => "p",
        }
    }

    pub fn angle(&self) -> Option<f64> {
        match *self {
            GateKind::PauliX => None,
            GateKind::RotY(a) | GateKind::RotZ(a) | GateKind::Phase(a) => Some(a),
        }
    }

    /// 2×2 matrix in the `{|0⟩, |1⟩}` basis.
    pub fn matrix(&self) -> [[C64; 2]; 2] {
        match *self {
            GateKind::PauliX => [[ZERO, ONE], [ONE, ZERO]],
            GateKind::RotY(t) => {
                let (s, c) = (t / 2.0).sin_cos();
                [[C64::new(c, 0.0), C64::new(-s, 0.0)], [C64::new(s, 0.0), C64::new(c, 0.0)]]
            }
            GateKind::RotZ(t) => [
                [C64::from_polar(1.0, -t / 2.0), ZERO],
                [ZERO, C64::from_polar(1.0, t / 2.0)],
            ],
            GateKind::Phase(t) => [[ONE, ZERO], [ZERO, C64::from_polar(1.0, t)]],
        }
    }
}

/// A control qubit and the bit value that activates the gate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Control {
    pub qubit: usize,
    pub active: bool,
}

impl Control {
    pub fn on(qubit: usize) -> Self {
        Self { qubit, active: true }
    }

    pub fn off(qubit: usize) -> Self {
        Self { qubit, active: false }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Gate {
    pub kind: GateKind,
    pub target: usize,
    pub controls: Vec<Control>,
}

impl Gate {
    pub fn single(kind: GateKind, target: usize) -> Self {
        Self {
            kind,
            target,
            controls: Vec::new(),
        }
    }

    pub fn controlled(kind: GateKind, target: usize, controls: Vec<Control>) -> Self {
        Self {
            kind,
            target,
            controls,
        }
    }

    pub fn x(target: usize) -> Self {
        Self::single(GateKind::PauliX, target)
    }

    pub fn ry(angle: f64, target: usize) -> Self {
        Self::single(GateKind::RotY(angle), target)
    }

    pub fn rz(angle: f64, target: usize) -> Self {
        Self::single(GateKind::RotZ(angle), target)
    }

    pub fn phase(angle: f64, target: usize) -> Self {
        Self::single(GateKind::Phase(angle), target)
    }

    pub fn cx(control: usize, target: usize) -> Self {
        Self::controlled(GateKind::PauliX, target, vec![Control::on(control)])
    }

    pub fn is_cx(&self) -> bool {
        self.kind == GateKind::PauliX && self.controls.len() == 1 && self.controls[0].active
    }

    /// Single-qubit gates and CX.
    pub fn is_elementary(&self) -> bool {
        self.controls.is_empty() || self.is_cx()
    }

    fn validate(&self, qubit_count: usize) -> Result<()> {
        if self.target >= qubit_count {
            return Err(Error::InvalidCircuit(format!(
                "target qubit {} out of range for {qubit_count} qubits",
                self.target
            )));
        }
        for (k, c) in self.controls.iter().enumerate() {
            if c.qubit >= qubit_count {
                return Err(Error::InvalidCircuit(format!(
                    "control qubit {} out of range for {qubit_count} qubits",
                    c.qubit
                )));
            }
            if c.qubit == self.target || self.controls[..k].iter().any(|o| o.qubit == c.qubit) {
                return Err(Error::InvalidCircuit(format!(
                    "qubit {} used twice in one gate",
                    c.qubit
                )));
            }
        }
        Ok(())
    }
}

impl fmt::Display for Gate {
    /// `kind angle controls target`, e.g. `ry 1.5707963267948966 [0:1,2:0] 1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.kind.name())?;
        match self.kind.angle() {
            Some(a) => write!(f, " {a:?}")?,
            None => write!(f, " -")?,
        }
        let controls: Vec<String> = self
            .controls
            .iter()
            .map(|c| format!("{}:{}", c.qubit, u8::from(c.active)))
            .collect();
        write!(f, " [{}] {}", controls.join(","), self.target)
    }
}

/// Gate tallies of a circuit.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GateCounts {
    pub single_qubit: usize,
    pub cx: usize,
    /// Controlled gates other than CX.
    pub multi_controlled: usize,
    pub total: usize,
}

/// Gates applied left to right, starting from `|0…0⟩`. Qubit 0 is the most significant bit.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Circuit {
    qubit_count: usize,
    gates: Vec<Gate>,
    global_phase: f64,
}

impl Circuit {
    pub fn new(qubit_count: usize) -> Self {
        Self {
            qubit_count,
            gates: Vec::new(),
            global_phase: 0.0,
        }
    }

    pub fn qubit_count(&self) -> usize {
        self.qubit_count
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn global_phase(&self) -> f64 {
        self.global_phase
    }

    pub fn add_global_phase(&mut self, phase: f64) {
        self.global_phase += phase;
    }

    pub fn push(&mut self, gate: Gate) -> Result<()> {
        gate.validate(self.qubit_count)?;
        self.gates.push(gate);
        Ok(())
    }

    pub fn extend(&mut self, gates: impl IntoIterator<Item = Gate>) -> Result<()> {
        for g in gates {
            self.push(g)?;
        }
        Ok(())
    }

    /// Appends another circuit acting on the same register.
    pub fn append(&mut self, other: &Circuit) -> Result<()> {
        if other.qubit_count > self.qubit_count {
            return Err(Error::InvalidCircuit(format!(
                "cannot append a {}-qubit circuit to a {}-qubit one",
                other.qubit_count, self.qubit_count
            )));
        }
        self.extend(other.gates.iter().cloned())?;
        self.global_phase += other.global_phase;
        Ok(())
    }

    pub fn gate_counts(&self) -> GateCounts {
        let mut counts = GateCounts::default();
        for g in &self.gates {
            if g.controls.is_empty() {
                counts.single_qubit += 1;
            } else if g.is_cx() {
                counts.cx += 1;
            } else {
                counts.multi_controlled += 1;
            }
        }
        counts.total = self.gates.len();
        counts
    }

    pub fn is_elementary(&self) -> bool {
        self.gates.iter().all(Gate::is_elementary)
    }

    /// One gate per line after a `qubits` and `global_phase` header.
    pub fn dump(&self) -> String {
        let mut out = format!("qubits {}\nglobal_phase {:?}\n", self.qubit_count, self.global_phase);
        for g in &self.gates {
            out.push_str(&g.to_string());
            out.push('\n');
        }
        out
    }

    /// Dense unitary, column `k` being the image of basis state `k`. Intended for small registers.
    pub fn unitary(&self) -> ComplexMatrix {
        let dim = 1usize << self.qubit_count;
        let mut m = ComplexMatrix::zeros(dim, dim);
        for k in 0..dim {
            let mut v = vec![ZERO; dim];
            v[k] = ONE;
            crate::simulator::apply_circuit(self, &mut v).expect("gates validated on push");
            for (r, x) in v.into_iter().enumerate() {
                m[(r, k)] = x;
            }
        }
        m
    }
}

/// `e^{iφ}` helper for phase bookkeeping.
pub(crate) fn phase_factor(phi: f64) -> C64 {
    (I * phi).exp()
}
