//! Export the preparation and tomography programs for one sweep point, then read one back.

use std::path::Path;

use chansim::cli::{export_qasm, ExperimentConfig};
use chansim::qsp::qasm::parse_qasm;
use chansim::simulator;

pub fn main() -> chansim::Result<()> {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("examples/configs/bit_phase_flip.toml");
    let cfg = ExperimentConfig::load(path)?;
    let programs = export_qasm(&cfg, 5)?;
    for p in &programs {
        println!("{:<10} {:>3} lines", p.name, p.text.lines().count());
    }
    print!("{}", programs[0].text);

    let circuit = parse_qasm(&programs[0].text)?;
    let out = simulator::run(&circuit)?;
    println!("read back {} gates, |amplitudes|^2 = {:?}", circuit.gates().len(),
        out.amplitudes().iter().map(|a| a.norm_sqr()).collect::<Vec<_>>());
    Ok(())
}
