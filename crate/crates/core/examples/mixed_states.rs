//! A mixed input through the depolarizing channel with each of the three mixed-state methods.

use chansim::channels::{depolarizing, l1_coherence};
use chansim::cli::{run_experiment, ExperimentConfig, InitialState, MixedMethod};
use chansim::dilation::{mixed_method_convex, mixed_method_double_purification, mixed_method_purify_evolved, oracle};
use chansim::numerics::DensityMatrix;

pub fn main() -> chansim::Result<()> {
    let rho = DensityMatrix::from_real_rows(&[[2.0 / 3.0, 0.4], [0.4, 1.0 / 3.0]])?;
    let ch = depolarizing(0.3)?;
    println!("oracle              C = {:.10}", l1_coherence(&oracle(&ch, &rho)?));
    println!("purify evolved      C = {:.10}", l1_coherence(&mixed_method_purify_evolved(&ch, &rho)?.reduced_system()));
    println!("convex combination  C = {:.10}", l1_coherence(&mixed_method_convex(&ch, &rho)?));
    let double = mixed_method_double_purification(&ch, &rho)?;
    println!(
        "double purification C = {:.10} ({} qubits)",
        l1_coherence(&double.reduced_system()),
        double.embedding().qubit_count()
    );

    for method in [MixedMethod::PurifyEvolved, MixedMethod::Convex, MixedMethod::DoublePurification] {
        let cfg = ExperimentConfig::catalog("depolarizing", "p", vec![0.0, 0.3, 1.0])
            .with_state(InitialState::Mixed { rho: rho.clone(), method });
        let table = run_experiment(&cfg)?;
        println!("method {} through circuits: {:?}", method.index(), table.column_c_measured());
    }
    Ok(())
}
