//! Pauli-basis state tomography of a subset of qubits.
//!
//! Each setting rotates the system qubits so that a computational-basis readout
//! measures one Pauli per qubit. Every other qubit is read in `Z` and summed over.
//! Reconstruction is linear inversion followed by a projection onto density matrices.

use std::collections::BTreeMap;
use std::f64::consts::FRAC_PI_2;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{herm_eig, kron, pauli, ComplexMatrix, DensityMatrix, PureState, C64};
use crate::qsp::{Circuit, Gate};
use crate::simulator::{self, derive_seed, ReadoutModel, ShotCounts};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Basis {
    X,
    Y,
    Z,
}

impl Basis {
    pub const ALL: [Basis; 3] = [Basis::X, Basis::Y, Basis::Z];

    pub fn letter(self) -> char {
        match self {
            Basis::X => 'X',
            Basis::Y => 'Y',
            Basis::Z => 'Z',
        }
    }

    /// Gates taking the `+1` eigenstate of this Pauli to `|0⟩`.
    pub fn rotation(self, qubit: usize) -> Vec<Gate> {
        match self {
            Basis::X => vec![Gate::ry(-FRAC_PI_2, qubit)],
            Basis::Y => vec![Gate::rz(-FRAC_PI_2, qubit), Gate::ry(-FRAC_PI_2, qubit)],
            Basis::Z => Vec::new(),
        }
    }
}

/// One measurement basis per system qubit.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Setting(pub Vec<Basis>);

impl fmt::Display for Setting {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in &self.0 {
            write!(f, "{}", b.letter())?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TomographySettings {
    system_qubits: Vec<usize>,
    settings: Vec<Setting>,
}

/// All `3^n` settings over `system_qubits`, first qubit varying slowest in `X, Y, Z` order.
pub fn settings_for(system_qubits: &[usize]) -> Result<TomographySettings> {
    if system_qubits.is_empty() {
        return Err(Error::InvalidParameter {
            name: "system_qubits".into(),
            value: 0.0,
            reason: "at least one qubit is required",
        });
    }
    for (k, q) in system_qubits.iter().enumerate() {
        if system_qubits[..k].contains(q) {
            return Err(Error::InvalidCircuit(format!("qubit {q} listed twice")));
        }
    }
    let n = system_qubits.len();
    let settings = (0..3usize.pow(n as u32))
        .map(|mut idx| {
            let mut bases = vec![Basis::Z; n];
            for slot in bases.iter_mut().rev() {
                *slot = Basis::ALL[idx % 3];
                idx /= 3;
            }
            Setting(bases)
        })
        .collect();
    Ok(TomographySettings {
        system_qubits: system_qubits.to_vec(),
        settings,
    })
}

impl TomographySettings {
    pub fn system_qubits(&self) -> &[usize] {
        &self.system_qubits
    }

    pub fn settings(&self) -> &[Setting] {
        &self.settings
    }

    pub fn len(&self) -> usize {
        self.settings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.settings.is_empty()
    }

    /// Basis-change circuit for setting `k` on a `qubit_count`-qubit register.
    pub fn rotation(&self, k: usize, qubit_count: usize) -> Result<Circuit> {
        let mut c = Circuit::new(qubit_count);
        for (basis, &q) in self.settings[k].0.iter().zip(&self.system_qubits) {
            c.extend(basis.rotation(q))?;
        }
        Ok(c)
    }
}

/// Outcome distribution over the whole register for one setting.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SettingData {
    pub setting: Setting,
    /// Probability per MSB-first bitstring.
    pub probabilities: BTreeMap<String, f64>,
    /// Shots behind the distribution; 0 for exact probabilities.
    pub shots: u64,
}

impl SettingData {
    pub fn from_counts(setting: Setting, counts: &ShotCounts) -> Self {
        Self {
            setting,
            probabilities: counts.frequencies(),
            shots: counts.shots(),
        }
    }

    pub fn from_dense(setting: Setting, probs: &[f64], shots: u64) -> Self {
        let n = probs.len().trailing_zeros() as usize;
        let probabilities = probs
            .iter()
            .enumerate()
            .filter(|(_, p)| **p > 0.0)
            .map(|(k, &p)| (simulator::bitstring(k, n), p))
            .collect();
        Self {
            setting,
            probabilities,
            shots,
        }
    }
}

/// Pauli-string expectations over the system qubits, keyed by labels such as `"IX"`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Expectations {
    pub qubits: usize,
    pub values: BTreeMap<String, f64>,
    pub std_errors: BTreeMap<String, f64>,
}

fn pauli_labels(n: usize) -> Vec<String> {
    const LETTERS: [char; 4] = ['I', 'X', 'Y', 'Z'];
    (0..4usize.pow(n as u32))
        .map(|mut idx| {
            let mut s = vec!['I'; n];
            for slot in s.iter_mut().rev() {
                *slot = LETTERS[idx % 4];
                idx /= 4;
            }
            s.into_iter().collect()
        })
        .collect()
}

fn pauli_string(label: &str) -> ComplexMatrix {
    label
        .chars()
        .map(|c| pauli::from_label(c).expect("labels use I, X, Y, Z"))
        .reduce(|a, b| kron(&a, &b))
        .expect("nonempty label")
}

/// Expectation of every Pauli string, averaged over all settings that measure it.
pub fn expectations(settings: &TomographySettings, data: &[SettingData]) -> Result<Expectations> {
    let qubits = &settings.system_qubits;
    let n = qubits.len();
    let mut by_setting: BTreeMap<String, &SettingData> = BTreeMap::new();
    for d in data {
        by_setting.insert(d.setting.to_string(), d);
    }
    let mut table = Vec::with_capacity(settings.len());
    for s in &settings.settings {
        let label = s.to_string();
        let d = by_setting
            .get(&label)
            .ok_or_else(|| Error::MissingSetting(label.clone()))?;
        table.push(*d);
    }

    let mut values = BTreeMap::new();
    let mut std_errors = BTreeMap::new();
    for label in pauli_labels(n) {
        let letters: Vec<char> = label.chars().collect();
        let (mut sum, mut var, mut m) = (0.0, 0.0, 0usize);
        for d in &table {
            let compatible = letters
                .iter()
                .zip(&d.setting.0)
                .all(|(&l, b)| l == 'I' || l == b.letter());
            if !compatible {
                continue;
            }
            let mut e = 0.0;
            for (bits, &p) in &d.probabilities {
                let bytes = bits.as_bytes();
                let parity = letters
                    .iter()
                    .zip(qubits)
                    .filter(|(&l, &q)| l != 'I' && bytes[q] == b'1')
                    .count();
                e += if parity % 2 == 0 { p } else { -p };
            }
            let e = e.clamp(-1.0, 1.0);
            sum += e;
            if d.shots > 0 {
                var += (1.0 - e * e) / d.shots as f64;
            }
            m += 1;
        }
        let mean = sum / m as f64;
        values.insert(label.clone(), mean);
        std_errors.insert(label, var.sqrt() / m as f64);
    }
    Ok(Expectations {
        qubits: n,
        values,
        std_errors,
    })
}

/// `Tr(ρP)` for every Pauli string on an `n`-qubit density matrix.
pub fn exact_expectations(rho: &DensityMatrix) -> Result<Expectations> {
    let dim = rho.dim();
    if !dim.is_power_of_two() {
        return Err(Error::InvalidState(format!("dimension {dim} is not a qubit register")));
    }
    let n = dim.trailing_zeros() as usize;
    let mut values = BTreeMap::new();
    let mut std_errors = BTreeMap::new();
    for label in pauli_labels(n) {
        let p = pauli_string(&label);
        let v = (rho.matrix() * &p).trace().re;
        values.insert(label.clone(), v);
        std_errors.insert(label, 0.0);
    }
    Ok(Expectations {
        qubits: n,
        values,
        std_errors,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct TomographyResult {
    /// Linear-inversion estimate, possibly with negative eigenvalues.
    pub raw: ComplexMatrix,
    pub projected: DensityMatrix,
    pub expectations: Expectations,
    pub shots_per_setting: u64,
}

/// `(1/2^n) Σ_P ⟨P⟩ P`, then [`project`].
pub fn reconstruct(exp: &Expectations) -> Result<TomographyResult> {
    let n = exp.qubits;
    let dim = 1usize << n;
    let mut raw = ComplexMatrix::zeros(dim, dim);
    for label in pauli_labels(n) {
        let v = *exp
            .values
            .get(&label)
            .ok_or_else(|| Error::MissingSetting(format!("expectation of {label}")))?;
        if v != 0.0 {
            raw = &raw + &pauli_string(&label).scale_real(v / dim as f64);
        }
    }
    let projected = project(&raw)?;
    Ok(TomographyResult {
        raw,
        projected,
        expectations: exp.clone(),
        shots_per_setting: 0,
    })
}

/// Nearest density matrix by eigenvalue clipping. Negative eigenvalues go to zero and
/// the clipped mass is taken from the others in proportion to their size. A matrix
/// with no negative eigenvalue is returned unchanged.
pub fn project(raw: &ComplexMatrix) -> Result<DensityMatrix> {
    let eig = herm_eig(raw)?;
    if eig.values.iter().all(|&v| v >= 0.0) {
        return DensityMatrix::new(raw.clone());
    }
    let trace: f64 = eig.values.iter().sum();
    let positive: f64 = eig.values.iter().filter(|v| **v > 0.0).sum();
    let mut clipped = eig.clone();
    for v in clipped.values.iter_mut() {
        *v = if *v > 0.0 { *v * trace / positive } else { 0.0 };
    }
    let m = clipped.reconstruct();
    // Restore exact Hermiticity lost to rounding.
    let sym = (&m + &m.adjoint()).scale_real(0.5);
    DensityMatrix::new(sym)
}

/// Exact outcome distributions for every setting.
pub fn measure_exact(state: &PureState, settings: &TomographySettings) -> Result<Vec<SettingData>> {
    let n = register_qubits(state)?;
    (0..settings.len())
        .map(|k| {
            let rotated = rotate(state, settings, k, n)?;
            let probs: Vec<f64> = rotated.iter().map(|a| a.norm_sqr()).collect();
            Ok(SettingData::from_dense(settings.settings[k].clone(), &probs, 0))
        })
        .collect()
}

/// How shot data is acquired and corrected for one tomography run.
#[derive(Debug, Clone, PartialEq)]
pub struct Acquisition {
    pub shots: u64,
    pub seed: u64,
    /// Readout noise applied to every shot and then mitigated with the same model.
    pub readout: Option<ReadoutModel>,
}

/// Sampled distributions for every setting. Setting `k` draws with seeds derived
/// from `(seed, k)`.
pub fn measure_sampled(
    state: &PureState,
    settings: &TomographySettings,
    acq: &Acquisition,
) -> Result<Vec<SettingData>> {
    let n = register_qubits(state)?;
    (0..settings.len())
        .map(|k| {
            let rotated = PureState::normalized(rotate(state, settings, k, n)?)?;
            let setting = settings.settings[k].clone();
            let counts = simulator::sample(&rotated, acq.shots, derive_seed(acq.seed, 2 * k as u64))?;
            match &acq.readout {
                None => Ok(SettingData::from_counts(setting, &counts)),
                Some(model) => {
                    let noisy =
                        simulator::apply_readout_noise(&counts, model, derive_seed(acq.seed, 2 * k as u64 + 1))?;
                    let probs = simulator::mitigate_dense(&noisy, model)?;
                    Ok(SettingData::from_dense(setting, &probs, acq.shots))
                }
            }
        })
        .collect()
}

/// Sampled tomography of `settings.system_qubits()` on `state`.
pub fn tomograph(state: &PureState, settings: &TomographySettings, acq: &Acquisition) -> Result<TomographyResult> {
    let data = measure_sampled(state, settings, acq)?;
    let mut result = reconstruct(&expectations(settings, &data)?)?;
    result.shots_per_setting = acq.shots;
    Ok(result)
}

/// Exact-probability tomography of `settings.system_qubits()` on `state`.
pub fn tomograph_exact(state: &PureState, settings: &TomographySettings) -> Result<TomographyResult> {
    let data = measure_exact(state, settings)?;
    reconstruct(&expectations(settings, &data)?)
}

fn register_qubits(state: &PureState) -> Result<usize> {
    let dim = state.dim();
    if !dim.is_power_of_two() {
        return Err(Error::InvalidState(format!("dimension {dim} is not a qubit register")));
    }
    Ok(dim.trailing_zeros() as usize)
}

fn rotate(state: &PureState, settings: &TomographySettings, k: usize, n: usize) -> Result<Vec<C64>> {
    let mut amps = state.amplitudes().to_vec();
    simulator::apply_circuit(&settings.rotation(k, n)?, &mut amps)?;
    Ok(amps)
}

/// A qudit state read back from its qubit embedding.
#[derive(Debug, Clone, PartialEq)]
pub struct QuditExtraction {
    /// The `d × d` block on the valid levels, renormalized.
    pub state: DensityMatrix,
    /// Population found on the unused padding levels before renormalization.
    pub dropped_mass: f64,
}

/// Keeps levels `0..d` of an embedded density matrix.
pub fn extract_qudit(embedded: &DensityMatrix, d: usize) -> Result<QuditExtraction> {
    if d == 0 || d > embedded.dim() {
        return Err(Error::DimensionMismatch {
            context: "qudit levels within the embedding",
            expected: embedded.dim(),
            found: d,
        });
    }
    let mut block = ComplexMatrix::zeros(d, d);
    for r in 0..d {
        for c in 0..d {
            block[(r, c)] = embedded.get(r, c);
        }
    }
    let kept = block.trace().re;
    if kept <= 0.0 {
        return Err(Error::InvalidState("no population on the qudit levels".into()));
    }
    Ok(QuditExtraction {
        state: DensityMatrix::new(block.scale_real(1.0 / kept))?,
        dropped_mass: 1.0 - kept,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::c64;

    #[test]
    fn setting_counts_and_order() {
        assert_eq!(settings_for(&[0]).unwrap().len(), 3);
        let two = settings_for(&[0, 1]).unwrap();
        assert_eq!(two.len(), 9);
        let labels: Vec<String> = two.settings().iter().map(|s| s.to_string()).collect();
        assert_eq!(labels[..4], ["XX", "XY", "XZ", "YX"]);
        assert!(settings_for(&[]).is_err());
        assert!(settings_for(&[1, 1]).is_err());
    }

    #[test]
    fn eigenstates_read_zero() {
        let s = settings_for(&[0]).unwrap();
        let plus_i = PureState::new(vec![c64(0.5f64.sqrt(), 0.0), c64(0.0, 0.5f64.sqrt())]).unwrap();
        for (state, k) in [(PureState::plus(), 0), (plus_i, 1), (PureState::basis(2, 0), 2)] {
            let counts = simulator::sample(&PureState::normalized(rotate(&state, &s, k, 1).unwrap()).unwrap(), 500, 1)
                .unwrap();
            assert_eq!(counts.get("0"), 500);
        }
    }

    #[test]
    fn single_qubit_expectations() {
        let s = settings_for(&[0]).unwrap();
        let zero = expectations(&s, &measure_exact(&PureState::basis(2, 0), &s).unwrap()).unwrap();
        assert!((zero.values["Z"] - 1.0).abs() < 1e-15);
        assert!(zero.values["X"].abs() < 1e-15 && zero.values["Y"].abs() < 1e-15);
        let plus = expectations(&s, &measure_exact(&PureState::plus(), &s).unwrap()).unwrap();
        assert!((plus.values["X"] - 1.0).abs() < 1e-15);
        let missing = measure_exact(&PureState::plus(), &s).unwrap()[..2].to_vec();
        assert!(matches!(expectations(&s, &missing), Err(Error::MissingSetting(_))));
    }

    #[test]
    fn reconstruct_known_states() {
        let s = settings_for(&[0]).unwrap();
        let plus = tomograph_exact(&PureState::plus(), &s).unwrap();
        let expected = ComplexMatrix::from_real_rows(&[[0.5, 0.5], [0.5, 0.5]]);
        assert!(plus.raw.max_abs_diff(&expected) < 1e-12);

        let mixed = exact_expectations(&DensityMatrix::maximally_mixed(2)).unwrap();
        let r = reconstruct(&mixed).unwrap();
        assert!(r.projected.matrix().max_abs_diff(DensityMatrix::maximally_mixed(2).matrix()) < 1e-15);
    }

    #[test]
    fn ancilla_is_marginalized() {
        // Bell pair: qubit 0 alone is maximally mixed.
        let bell = PureState::from_real(&[0.5f64.sqrt(), 0.0, 0.0, 0.5f64.sqrt()]).unwrap();
        let s = settings_for(&[0]).unwrap();
        let r = tomograph_exact(&bell, &s).unwrap();
        assert!(r.projected.matrix().max_abs_diff(DensityMatrix::maximally_mixed(2).matrix()) < 1e-15);
    }

    #[test]
    fn projection_clips_negative_eigenvalues() {
        let raw = ComplexMatrix::from_real_rows(&[[1.1, 0.0], [0.0, -0.1]]);
        let p = project(&raw).unwrap();
        assert!(p.matrix().max_abs_diff(&ComplexMatrix::from_real_rows(&[[1.0, 0.0], [0.0, 0.0]])) < 1e-15);
        let again = project(p.matrix()).unwrap();
        assert_eq!(again, p);

        let raw = ComplexMatrix::from_real_rows(&[[0.6, 0.0, 0.0], [0.0, 0.6, 0.0], [0.0, 0.0, -0.2]]);
        let p = project(&raw).unwrap();
        assert!((p.get(0, 0).re - 0.5).abs() < 1e-15);
    }

    #[test]
    fn qutrit_extraction() {
        let embedded = DensityMatrix::from_real_rows(&[
            [0.5, 0.1, 0.0, 0.0],
            [0.1, 0.3, 0.0, 0.0],
            [0.0, 0.0, 0.1, 0.0],
            [0.0, 0.0, 0.0, 0.1],
        ])
        .unwrap();
        let q = extract_qudit(&embedded, 3).unwrap();
        assert!((q.dropped_mass - 0.1).abs() < 1e-15);
        assert!((q.state.get(0, 0).re - 0.5 / 0.9).abs() < 1e-15);
    }
}
