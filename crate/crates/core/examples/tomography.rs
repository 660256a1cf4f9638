//! Pauli tomography of a two-qubit state, exact and from noisy shots.

use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

use chansim::channels::l1_coherence;
use chansim::numerics::{trace_distance, DensityMatrix};
use chansim::random;
use chansim::simulator::ReadoutModel;
use chansim::tomography::{settings_for, tomograph, tomograph_exact, Acquisition};

pub fn main() -> chansim::Result<()> {
    let psi = random::pure_state(4, &mut ChaCha20Rng::seed_from_u64(3));
    let truth = DensityMatrix::from_pure(&psi);
    let settings = settings_for(&[0, 1])?;
    println!("{} settings", settings.len());

    let exact = tomograph_exact(&psi, &settings)?;
    println!("exact:   distance {:.1e}", trace_distance(&exact.projected, &truth)?);

    for readout in [None, Some(ReadoutModel::uniform(2, 0.05, 0.05)?)] {
        let label = if readout.is_some() { "noisy" } else { "sampled" };
        let acq = Acquisition {
            shots: 8192,
            seed: 11,
            readout,
        };
        let result = tomograph(&psi, &settings, &acq)?;
        println!(
            "{label}: distance {:.4}, C_l1 {:.4} (true {:.4}), <ZZ> = {:+.4}",
            trace_distance(&result.projected, &truth)?,
            l1_coherence(&result.projected),
            l1_coherence(&truth),
            result.expectations.values["ZZ"]
        );
    }
    Ok(())
}
