//! Preparation circuits for arbitrary qubit states.

mod circuit;
mod lower;
pub mod qasm;
mod synth;

pub use circuit::{Circuit, Control, Gate, GateCounts, GateKind};
pub(crate) use circuit::phase_factor;
pub use lower::{controls_from_pattern, gray_code_angles, lower};
pub use synth::{
    synthesize, synthesize_auto, synthesize_real, verify_preparation, Synthesis, SynthesisReport, MAX_QUBITS,
};
