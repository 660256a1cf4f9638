//! Stinespring dilation of a noisy qubit and postselection on the environment.

use chansim::channels::{gad, l1_coherence};
use chansim::dilation::{dilate_pure, embed_qudits, oracle, postselect};
use chansim::numerics::{trace_distance, DensityMatrix, PureState};
use chansim::simulator::bitstring;

pub fn main() -> chansim::Result<()> {
    let ch = gad(0.4, 0.25)?;
    let psi = PureState::bloch(1.2, 0.3);
    let dilated = dilate_pure(&ch, &psi)?;
    println!(
        "system d={} ancilla d={} qubits={}",
        dilated.system_dim(),
        dilated.ancilla_dim(),
        dilated.embedding().qubit_count()
    );

    let embedded = embed_qudits(&dilated);
    for (k, a) in embedded.amplitudes().iter().enumerate() {
        if a.norm() > 1e-12 {
            println!("  |{}>  {:+.6} {:+.6}i", bitstring(k, dilated.embedding().qubit_count()), a.re, a.im);
        }
    }

    let reduced = dilated.reduced_system();
    let direct = oracle(&ch, &DensityMatrix::from_pure(&psi))?;
    println!(
        "C_l1 = {:.6}, distance to operator sum = {:.1e}",
        l1_coherence(&reduced),
        trace_distance(&reduced, &direct)?
    );

    for j in 0..dilated.ancilla_dim() {
        match postselect(&dilated, j) {
            Ok((prob, branch)) => println!("  ancilla {j}: p = {prob:.6}, branch = {:?}", branch.amplitudes()),
            Err(e) => println!("  ancilla {j}: {e}"),
        }
    }
    Ok(())
}
