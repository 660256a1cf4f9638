//! Synthesize a preparation circuit for a random state, lower it to CX plus rotations,
//! and check both against the target.

use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

use chansim::qsp::{lower, synthesize, synthesize_real, verify_preparation};
use chansim::numerics::PureState;
use chansim::random;

pub fn main() -> chansim::Result<()> {
    let mut rng = ChaCha20Rng::seed_from_u64(42);
    for n in 1..=4 {
        let target = random::pure_state(1 << n, &mut rng);
        let synth = synthesize(&target)?;
        let lowered = lower(&synth.circuit)?;
        let counts = lowered.gate_counts();
        println!(
            "n={n}: {} slots, {} synthesized gates, {} lowered ({} cx), fidelity {:.15}",
            synth.report.slots,
            synth.circuit.gate_counts().total,
            counts.total,
            counts.cx,
            verify_preparation(&lowered, &target)?
        );
    }

    let real = PureState::from_real(&[0.5, -0.5, 0.5, 0.5])?;
    let synth = synthesize_real(&real)?;
    print!("{}", synth.circuit.dump());
    println!("real fidelity {:.15}", verify_preparation(&synth.circuit, &real)?);
    Ok(())
}
