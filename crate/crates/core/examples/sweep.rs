//! Coherence of |+> under phase damping, swept in exact and sampled mode.

use chansim::cli::{linspace, run_experiment, ExperimentConfig};

pub fn main() -> chansim::Result<()> {
    let cfg = ExperimentConfig::catalog("phase_damping", "p", linspace(0.0, 1.0, 11));
    let exact = run_experiment(&cfg)?;
    let sampled = run_experiment(&cfg.clone().sampled(8192, 1).with_readout(0.02, 0.02))?;
    println!("{:>5} {:>10} {:>10} {:>10}", "p", "theory", "exact", "sampled");
    for (e, s) in exact.rows.iter().zip(&sampled.rows) {
        println!(
            "{:>5.2} {:>10.6} {:>10.6} {:>10.6}",
            e.param_value, e.c_theory, e.c_measured, s.c_measured
        );
    }
    print!("{}", sampled.to_csv());
    Ok(())
}
