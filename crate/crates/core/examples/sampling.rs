//! Shot sampling from a statevector, readout noise, and confusion-matrix mitigation.

use chansim::numerics::PureState;
use chansim::simulator::{apply_readout_noise, mitigate, sample, ReadoutModel};

pub fn main() -> chansim::Result<()> {
    let state = PureState::from_real(&[0.8, 0.0, 0.0, 0.6])?;
    let ideal = sample(&state, 8192, 7)?;
    println!("ideal:     {}", ideal.to_json());

    let model = ReadoutModel::new(vec![(0.05, 0.08), (0.03, 0.05)])?;
    let noisy = apply_readout_noise(&ideal, &model, 8)?;
    println!("noisy:     {}", noisy.to_json());

    let fixed = mitigate(&noisy, &model)?;
    for (bits, p) in &fixed {
        println!("mitigated: {bits} {p:.4} (exact {:.4})", state.amplitudes()[usize::from_str_radix(bits, 2).unwrap()].norm_sqr());
    }
    Ok(())
}
