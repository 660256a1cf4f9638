//! Noisy quantum channels simulated through their dilated pure states.
//!
//! A channel given by Kraus operators `{K_j}` acting on `|ψ⟩` is represented by
//! the pure state `Σ_j K_j|ψ⟩ ⊗ |j⟩` on system plus ancilla. This crate builds
//! that state, compiles a circuit preparing it, runs the circuit on a statevector
//! simulator and recovers the system state by partial trace or by tomography.
//!
//! ```
//! use chansim::channels::{bit_phase_flip, l1_coherence};
//! use chansim::dilation::{dilate_pure, embed_qudits};
//! use chansim::numerics::PureState;
//! use chansim::qsp::synthesize;
//!
//! let ch = bit_phase_flip(0.25).unwrap();
//! let dilated = dilate_pure(&ch, &PureState::plus()).unwrap();
//! let circuit = synthesize(&embed_qudits(&dilated)).unwrap().circuit;
//! let out = chansim::simulator::run(&circuit).unwrap();
//! let rho = chansim::numerics::reduced_state(&out, &[2, 2], &[0]).unwrap();
//! assert!((l1_coherence(&rho) - 0.5).abs() < 1e-10);
//! ```

pub mod channels;
pub mod cli;
pub mod dilation;
pub mod error;
pub mod numerics;
pub mod qsp;
pub mod random;
pub mod simulator;
pub mod tomography;

pub use error::{Error, Result};
