//! Every catalog channel: completeness residual and output coherence on the uniform state.

use std::collections::BTreeMap;

use chansim::channels::{apply_channel, from_catalog, l1_coherence, validate_cptp, CATALOG};
use chansim::numerics::{DensityMatrix, PureState};

fn params_for(name: &str) -> BTreeMap<String, f64> {
    let pairs: &[(&str, f64)] = match name {
        "identity" => &[],
        "pauli" => &[("p_I", 0.7), ("p_X", 0.1), ("p_Z", 0.1), ("p_Y", 0.1)],
        "gad" => &[("p", 0.3), ("N", 0.5)],
        "hw_dephasing" => &[("p0", 0.6)],
        "twirl" => &[("d", 3.0)],
        "qutrit_adc" => &[("gamma", 0.4)],
        "lorentz" => &[("theta", 0.5)],
        _ => &[("p", 0.3)],
    };
    pairs.iter().map(|&(k, v)| (k.to_string(), v)).collect()
}

pub fn main() -> chansim::Result<()> {
    println!("{:<16} {:>3} {:>4} {:>10} {:>8}", "channel", "d", "ops", "residual", "C_l1");
    for name in CATALOG {
        let ch = from_catalog(name, &params_for(name))?;
        let rho = DensityMatrix::from_pure(&PureState::uniform(ch.dim()));
        let out = apply_channel(&ch, &rho)?;
        let report = validate_cptp(&ch, 1e-10);
        println!(
            "{:<16} {:>3} {:>4} {:>10.1e} {:>8.5}",
            name,
            ch.dim(),
            ch.len(),
            report.residual,
            l1_coherence(&out)
        );
        assert!(report.passed);
    }
    Ok(())
}
