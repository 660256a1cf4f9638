//! Loading a Kraus channel from JSON, checking it, and sweeping it from a config file.

use std::path::Path;

use chansim::channels::{validate_cptp, KrausChannel};
use chansim::cli::{run_experiment, ExperimentConfig};

pub fn main() -> chansim::Result<()> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("examples/configs");
    let ch = KrausChannel::load(dir.join("amplitude_damping.json"))?;
    let report = validate_cptp(&ch, 1e-10);
    println!("{}: {} ops, residual {:.1e}, unitality {:.3}", ch.label(), ch.len(), report.residual, ch.unitality_residual());

    let cfg = ExperimentConfig::load(dir.join("custom_channel.toml"))?;
    let table = run_experiment(&cfg)?;
    print!("{}", table.to_csv());
    Ok(())
}
