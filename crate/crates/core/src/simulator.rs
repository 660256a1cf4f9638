//! Statevector execution, shot sampling, readout noise and readout mitigation.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::{Binomial, Distribution};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{PureState, C64, ONE, ZERO};
use crate::qsp::{phase_factor, Circuit, Gate};

/// Largest register [`run`] accepts.
pub const MAX_QUBITS: usize = 20;

/// The generator behind every seeded draw in the crate.
pub type SimRng = ChaCha20Rng;

pub fn rng_from_seed(seed: u64) -> SimRng {
    SimRng::seed_from_u64(seed)
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Seed for item `index` of a run seeded with `seed`, independent of execution order.
pub fn derive_seed(seed: u64, index: u64) -> u64 {
    splitmix64(seed ^ splitmix64(index.wrapping_add(0x5851_f42d_4c95_7f2d)))
}

/// Applies one gate in place. Qubit 0 is the most significant bit of the amplitude index.
fn apply_gate(gate: &Gate, n: usize, amps: &mut [C64]) {
    let m = gate.kind.matrix();
    let tbit = 1usize << (n - 1 - gate.target);
    let (mut mask, mut want) = (0usize, 0usize);
    for c in &gate.controls {
        let b = 1usize << (n - 1 - c.qubit);
        mask |= b;
        if c.active {
            want |= b;
        }
    }
    for i0 in 0..amps.len() {
        if i0 & tbit != 0 || i0 & mask != want {
            continue;
        }
        let i1 = i0 | tbit;
        let (a0, a1) = (amps[i0], amps[i1]);
        amps[i0] = m[0][0] * a0 + m[0][1] * a1;
        amps[i1] = m[1][0] * a0 + m[1][1] * a1;
    }
}

/// Applies the gates of `c` and its global phase to `amps` in place.
pub fn apply_circuit(c: &Circuit, amps: &mut [C64]) -> Result<()> {
    let n = c.qubit_count();
    if amps.len() != 1usize << n {
        return Err(Error::DimensionMismatch {
            context: "statevector length",
            expected: 1 << n,
            found: amps.len(),
        });
    }
    for g in c.gates() {
        if g.target >= n || g.controls.iter().any(|ctl| ctl.qubit >= n) {
            return Err(Error::InvalidCircuit(format!("gate `{g}` exceeds {n} qubits")));
        }
        apply_gate(g, n, amps);
    }
    if c.global_phase() != 0.0 {
        let f = phase_factor(c.global_phase());
        amps.iter_mut().for_each(|a| *a *= f);
    }
    Ok(())
}

/// Final state of `c` started from `|0…0⟩`.
pub fn run(c: &Circuit) -> Result<PureState> {
    let n = c.qubit_count();
    if n > MAX_QUBITS {
        return Err(Error::InvalidCircuit(format!(
            "{n} qubits exceeds the simulator limit of {MAX_QUBITS}"
        )));
    }
    let mut amps = vec![ZERO; 1 << n];
    amps[0] = ONE;
    apply_circuit(c, &mut amps)?;
    PureState::normalized(amps)
}

/// `n`-bit label of basis index `k`, most significant qubit first.
pub fn bitstring(k: usize, n: usize) -> String {
    (0..n)
        .map(|q| if (k >> (n - 1 - q)) & 1 == 1 { '1' } else { '0' })
        .collect()
}

/// Measurement histogram keyed by MSB-first bitstrings.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShotCounts {
    qubit_count: usize,
    shots: u64,
    counts: BTreeMap<String, u64>,
}

#[derive(Serialize, Deserialize)]
struct ShotCountsJson {
    shots: u64,
    counts: BTreeMap<String, u64>,
}

impl ShotCounts {
    pub fn new(qubit_count: usize, counts: BTreeMap<String, u64>) -> Result<Self> {
        for k in counts.keys() {
            if k.len() != qubit_count || !k.bytes().all(|b| b == b'0' || b == b'1') {
                return Err(Error::InvalidState(format!(
                    "`{k}` is not a {qubit_count}-bit string"
                )));
            }
        }
        let counts: BTreeMap<String, u64> = counts.into_iter().filter(|(_, c)| *c > 0).collect();
        let shots = counts.values().sum();
        Ok(Self {
            qubit_count,
            shots,
            counts,
        })
    }

    pub fn qubit_count(&self) -> usize {
        self.qubit_count
    }

    pub fn shots(&self) -> u64 {
        self.shots
    }

    pub fn counts(&self) -> &BTreeMap<String, u64> {
        &self.counts
    }

    pub fn get(&self, bits: &str) -> u64 {
        self.counts.get(bits).copied().unwrap_or(0)
    }

    pub fn frequencies(&self) -> BTreeMap<String, f64> {
        let total = self.shots as f64;
        self.counts
            .iter()
            .map(|(k, &c)| (k.clone(), c as f64 / total))
            .collect()
    }

    /// Fraction of shots reading `1` on qubit `q`.
    pub fn marginal_one(&self, q: usize) -> f64 {
        let ones: u64 = self
            .counts
            .iter()
            .filter(|(k, _)| k.as_bytes()[q] == b'1')
            .map(|(_, c)| c)
            .sum();
        ones as f64 / self.shots as f64
    }

    /// `{"shots": n, "counts": {...}}`
    pub fn to_json(&self) -> String {
        serde_json::to_string(&ShotCountsJson {
            shots: self.shots,
            counts: self.counts.clone(),
        })
        .expect("string keys always serialize")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let raw: ShotCountsJson = serde_json::from_str(text)?;
        let n = raw
            .counts
            .keys()
            .next()
            .map(String::len)
            .ok_or_else(|| Error::InvalidState("empty histogram".into()))?;
        let counts = Self::new(n, raw.counts)?;
        if counts.shots != raw.shots {
            return Err(Error::InvalidState(format!(
                "counts sum to {} but shots is {}",
                counts.shots, raw.shots
            )));
        }
        Ok(counts)
    }
}

/// Multinomial draw of `shots` outcomes from `probs`, as conditional binomials.
pub fn multinomial<R: Rng + ?Sized>(probs: &[f64], shots: u64, rng: &mut R) -> Vec<u64> {
    let mut tail = vec![0.0; probs.len() + 1];
    for k in (0..probs.len()).rev() {
        tail[k] = tail[k + 1] + probs[k];
    }
    let mut out = vec![0; probs.len()];
    let mut remaining = shots;
    for (k, &p) in probs.iter().enumerate() {
        if remaining == 0 {
            break;
        }
        let q = if tail[k + 1] == 0.0 || k + 1 == probs.len() {
            1.0
        } else {
            (p / tail[k]).clamp(0.0, 1.0)
        };
        let draw = Binomial::new(remaining, q).expect("probability clamped to [0, 1]").sample(rng);
        out[k] = draw;
        remaining -= draw;
    }
    out
}

/// `shots` computational-basis measurements of `state`, which must span whole qubits.
pub fn sample(state: &PureState, shots: u64, seed: u64) -> Result<ShotCounts> {
    if shots == 0 {
        return Err(Error::InvalidParameter {
            name: "shots".into(),
            value: 0.0,
            reason: "must be at least 1",
        });
    }
    let dim = state.dim();
    if !dim.is_power_of_two() {
        return Err(Error::InvalidState(format!("dimension {dim} is not a qubit register")));
    }
    let n = dim.trailing_zeros() as usize;
    let probs: Vec<f64> = state.amplitudes().iter().map(|a| a.norm_sqr()).collect();
    let mut rng = rng_from_seed(seed);
    let draws = multinomial(&probs, shots, &mut rng);
    let counts = draws
        .into_iter()
        .enumerate()
        .filter(|(_, c)| *c > 0)
        .map(|(k, c)| (bitstring(k, n), c))
        .collect();
    ShotCounts::new(n, counts)
}

/// Per-qubit readout flip probabilities.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReadoutModel {
    /// `(e0, e1)` per qubit: `P(read 1 | 0)` and `P(read 0 | 1)`.
    flips: Vec<(f64, f64)>,
}

impl ReadoutModel {
    pub fn new(flips: Vec<(f64, f64)>) -> Result<Self> {
        for &(e0, e1) in &flips {
            for (name, e) in [("e0", e0), ("e1", e1)] {
                if !(0.0..=0.5).contains(&e) {
                    return Err(Error::InvalidParameter {
                        name: name.into(),
                        value: e,
                        reason: "must lie in [0, 0.5]",
                    });
                }
            }
        }
        Ok(Self { flips })
    }

    pub fn uniform(qubits: usize, e0: f64, e1: f64) -> Result<Self> {
        Self::new(vec![(e0, e1); qubits])
    }

    pub fn ideal(qubits: usize) -> Self {
        Self {
            flips: vec![(0.0, 0.0); qubits],
        }
    }

    pub fn qubit_count(&self) -> usize {
        self.flips.len()
    }

    pub fn flips(&self) -> &[(f64, f64)] {
        &self.flips
    }

    fn check(&self, n: usize) -> Result<()> {
        if self.flips.len() != n {
            return Err(Error::DimensionMismatch {
                context: "readout model qubits",
                expected: n,
                found: self.flips.len(),
            });
        }
        Ok(())
    }
}

/// Flips each bit of each shot independently with its model probability.
pub fn apply_readout_noise(counts: &ShotCounts, model: &ReadoutModel, seed: u64) -> Result<ShotCounts> {
    let n = counts.qubit_count();
    model.check(n)?;
    if model.flips.iter().all(|&(e0, e1)| e0 == 0.0 && e1 == 0.0) {
        return Ok(counts.clone());
    }
    let mut rng = rng_from_seed(seed);
    let mut noisy: BTreeMap<String, u64> = BTreeMap::new();
    let mut buf = Vec::with_capacity(n);
    for (bits, &c) in &counts.counts {
        for _ in 0..c {
            buf.clear();
            for (q, b) in bits.bytes().enumerate() {
                let (e0, e1) = model.flips[q];
                let p = if b == b'0' { e0 } else { e1 };
                let flip = p > 0.0 && rng.random::<f64>() < p;
                buf.push(if flip { b ^ 1 } else { b });
            }
            *noisy.entry(String::from_utf8(buf.clone()).unwrap()).or_default() += 1;
        }
    }
    ShotCounts::new(n, noisy)
}

/// Applies `M⁻¹` of every qubit's confusion matrix to a probability vector indexed MSB-first.
pub fn invert_confusion(probs: &mut [f64], model: &ReadoutModel) -> Result<()> {
    let n = model.qubit_count();
    if probs.len() != 1 << n {
        return Err(Error::DimensionMismatch {
            context: "probability vector length",
            expected: 1 << n,
            found: probs.len(),
        });
    }
    for (q, &(e0, e1)) in model.flips.iter().enumerate() {
        let det = 1.0 - e0 - e1;
        if det.abs() < 1e-12 {
            return Err(Error::SingularConfusion { qubit: q });
        }
        // M = [[1−e0, e1], [e0, 1−e1]]
        let inv = [[(1.0 - e1) / det, -e1 / det], [-e0 / det, (1.0 - e0) / det]];
        let bit = 1usize << (n - 1 - q);
        for i0 in 0..probs.len() {
            if i0 & bit != 0 {
                continue;
            }
            let (p0, p1) = (probs[i0], probs[i0 | bit]);
            probs[i0] = inv[0][0] * p0 + inv[0][1] * p1;
            probs[i0 | bit] = inv[1][0] * p0 + inv[1][1] * p1;
        }
    }
    Ok(())
}

/// Clips negative entries and renormalizes.
pub fn project_to_simplex(probs: &mut [f64]) {
    probs.iter_mut().for_each(|p| *p = p.max(0.0));
    let total: f64 = probs.iter().sum();
    if total > 0.0 {
        probs.iter_mut().for_each(|p| *p /= total);
    }
}

/// Readout-corrected outcome distribution as a dense MSB-first vector.
pub fn mitigate_dense(counts: &ShotCounts, model: &ReadoutModel) -> Result<Vec<f64>> {
    let n = counts.qubit_count();
    model.check(n)?;
    let mut probs = vec![0.0; 1 << n];
    for (bits, &c) in &counts.counts {
        let k = usize::from_str_radix(bits, 2).expect("validated bitstring");
        probs[k] = c as f64 / counts.shots as f64;
    }
    invert_confusion(&mut probs, model)?;
    project_to_simplex(&mut probs);
    Ok(probs)
}

/// Readout-corrected distribution keyed by bitstring, omitting zero entries.
pub fn mitigate(counts: &ShotCounts, model: &ReadoutModel) -> Result<BTreeMap<String, f64>> {
    let n = counts.qubit_count();
    Ok(mitigate_dense(counts, model)?
        .into_iter()
        .enumerate()
        .filter(|(_, p)| *p > 0.0)
        .map(|(k, p)| (bitstring(k, n), p))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::c64;
    use std::f64::consts::FRAC_PI_2;

    #[test]
    fn ry_half_pi_gives_plus() {
        let mut c = Circuit::new(1);
        c.push(Gate::ry(FRAC_PI_2, 0)).unwrap();
        let s = run(&c).unwrap();
        assert!(s.distance_up_to_phase(&PureState::plus()) < 1e-15);
        assert!((s.amplitudes()[1] - c64(0.5f64.sqrt(), 0.0)).norm() < 1e-15);
    }

    #[test]
    fn x_then_cx_gives_11() {
        let mut c = Circuit::new(2);
        c.extend([Gate::x(0), Gate::cx(0, 1)]).unwrap();
        assert_eq!(run(&c).unwrap(), PureState::basis(4, 3));
    }

    #[test]
    fn control_activation_bits() {
        let mut c = Circuit::new(3);
        c.push(Gate::controlled(
            crate::qsp::GateKind::PauliX,
            2,
            vec![crate::qsp::Control::off(0), crate::qsp::Control::off(1)],
        ))
        .unwrap();
        assert_eq!(run(&c).unwrap(), PureState::basis(8, 1));
    }

    #[test]
    fn global_phase_applied() {
        let mut c = Circuit::new(1);
        c.add_global_phase(FRAC_PI_2);
        assert!((run(&c).unwrap().amplitudes()[0] - c64(0.0, 1.0)).norm() < 1e-15);
    }

    #[test]
    fn bitstrings_are_msb_first() {
        assert_eq!(bitstring(1, 3), "001");
        assert_eq!(bitstring(6, 3), "110");
    }

    #[test]
    fn sampling_basics() {
        let zero = sample(&PureState::basis(2, 0), 100, 3).unwrap();
        assert_eq!(zero.counts().len(), 1);
        assert_eq!(zero.get("0"), 100);
        let a = sample(&PureState::uniform(8), 5000, 11).unwrap();
        let b = sample(&PureState::uniform(8), 5000, 11).unwrap();
        assert_eq!(a.to_json(), b.to_json());
        assert_eq!(a.shots(), 5000);
        assert!(sample(&PureState::plus(), 0, 1).is_err());
    }

    #[test]
    fn plus_state_frequency() {
        let c = sample(&PureState::plus(), 1_000_000, 2024).unwrap();
        let f0 = c.get("0") as f64 / 1e6;
        assert!((f0 - 0.5).abs() < 0.005, "{f0}");
    }

    #[test]
    fn json_round_trip() {
        let c = sample(&PureState::uniform(4), 64, 1).unwrap();
        let text = c.to_json();
        assert!(text.starts_with("{\"shots\":64,\"counts\":{"));
        assert_eq!(ShotCounts::from_json(&text).unwrap(), c);
        assert!(ShotCounts::from_json("{\"shots\":3,\"counts\":{\"01\":2}}").is_err());
    }

    #[test]
    fn readout_noise_rates() {
        let clean = sample(&PureState::basis(4, 0), 100_000, 5).unwrap();
        assert_eq!(apply_readout_noise(&clean, &ReadoutModel::ideal(2), 1).unwrap(), clean);
        let model = ReadoutModel::uniform(2, 0.1, 0.0).unwrap();
        let noisy = apply_readout_noise(&clean, &model, 9).unwrap();
        for q in 0..2 {
            assert!((noisy.marginal_one(q) - 0.1).abs() < 0.01);
        }
        let max = ReadoutModel::uniform(2, 0.5, 0.5).unwrap();
        let scrambled = apply_readout_noise(&clean, &max, 9).unwrap();
        for q in 0..2 {
            assert!((scrambled.marginal_one(q) - 0.5).abs() < 0.01);
        }
        assert!(ReadoutModel::uniform(1, 0.6, 0.0).is_err());
    }

    #[test]
    fn mitigation() {
        let clean = sample(&PureState::basis(8, 0), 100_000, 5).unwrap();
        let ideal = mitigate(&clean, &ReadoutModel::ideal(3)).unwrap();
        assert_eq!(ideal, clean.frequencies());

        let model = ReadoutModel::uniform(3, 0.1, 0.0).unwrap();
        let noisy = apply_readout_noise(&clean, &model, 17).unwrap();
        let fixed = mitigate(&noisy, &model).unwrap();
        assert!((fixed["000"] - 1.0).abs() < 0.02);

        let mut uniform = vec![0.25; 4];
        invert_confusion(&mut uniform, &ReadoutModel::uniform(2, 0.1, 0.1).unwrap()).unwrap();
        assert!(uniform.iter().all(|p| (p - 0.25).abs() < 1e-15));

        let singular = ReadoutModel::uniform(3, 0.5, 0.5).unwrap();
        assert!(matches!(mitigate(&clean, &singular), Err(Error::SingularConfusion { qubit: 0 })));
    }

    #[test]
    fn derived_seeds_differ() {
        let seeds: std::collections::BTreeSet<u64> = (0..1000).map(|i| derive_seed(42, i)).collect();
        assert_eq!(seeds.len(), 1000);
        assert_ne!(derive_seed(1, 0), derive_seed(2, 0));
    }
}
