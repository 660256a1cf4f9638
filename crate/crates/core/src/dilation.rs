//! Pure dilated states whose ancilla partial trace reproduces a channel's action.
//!
//! Factor order is always system first, then ancillas in the order they are
//! introduced. Each factor is embedded into qubits with binary labels, most
//! significant bit first.

use crate::channels::{apply_channel, KrausChannel};
use crate::error::{Error, Result};
use crate::numerics::{
    herm_eig, partial_trace, reduced_state, ComplexMatrix, DensityMatrix, PureState, C64, ZERO,
};

/// Eigenvalues below this are treated as zero when determining the rank of a mixed input.
pub const RANK_TOLERANCE: f64 = 1e-12;

/// Maps a tensor product of qudit factors onto qubit registers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QubitEmbedding {
    factor_dims: Vec<usize>,
    qubits_per_factor: Vec<usize>,
}

/// `⌈log₂ d⌉`, with a one-level factor taking no qubits.
pub fn qubits_for_levels(d: usize) -> usize {
    assert!(d >= 1, "a factor needs at least one level");
    (usize::BITS - (d - 1).leading_zeros()) as usize
}

impl QubitEmbedding {
    pub fn new(factor_dims: &[usize]) -> Self {
        Self {
            factor_dims: factor_dims.to_vec(),
            qubits_per_factor: factor_dims.iter().map(|&d| qubits_for_levels(d)).collect(),
        }
    }

    pub fn factor_dims(&self) -> &[usize] {
        &self.factor_dims
    }

    pub fn qubits_per_factor(&self) -> &[usize] {
        &self.qubits_per_factor
    }

    pub fn qubit_count(&self) -> usize {
        self.qubits_per_factor.iter().sum()
    }

    /// Qubit indices occupied by factor `k`.
    pub fn factor_qubits(&self, k: usize) -> std::ops::Range<usize> {
        let start: usize = self.qubits_per_factor[..k].iter().sum();
        start..start + self.qubits_per_factor[k]
    }

    /// Qubit-register index of the product-basis element with the given factor index.
    pub fn embed_index(&self, mut index: usize) -> usize {
        let mut out = 0;
        let mut shift = 0;
        for (&d, &m) in self.factor_dims.iter().zip(&self.qubits_per_factor).rev() {
            out |= (index % d) << shift;
            index /= d;
            shift += m;
        }
        out
    }

    pub fn embed(&self, amplitudes: &[C64]) -> Vec<C64> {
        let mut out = vec![ZERO; 1 << self.qubit_count()];
        for (k, &a) in amplitudes.iter().enumerate() {
            out[self.embed_index(k)] = a;
        }
        out
    }

    /// Reads a qubit-register vector back into the factor space. Returns the
    /// extracted amplitudes and the squared weight found on unused bitstrings.
    pub fn extract(&self, qubit_amplitudes: &[C64]) -> (Vec<C64>, f64) {
        let total: usize = self.factor_dims.iter().product();
        let mut out = Vec::with_capacity(total);
        let mut used = 0.0;
        for k in 0..total {
            let a = qubit_amplitudes[self.embed_index(k)];
            used += a.norm_sqr();
            out.push(a);
        }
        let all: f64 = qubit_amplitudes.iter().map(|a| a.norm_sqr()).sum();
        (out, (all - used).max(0.0))
    }

    /// Bitstring (MSB first) for level `level` of factor `k`.
    pub fn level_bits(&self, k: usize, level: usize) -> String {
        let m = self.qubits_per_factor[k];
        (0..m).rev().map(|b| if (level >> b) & 1 == 1 { '1' } else { '0' }).collect()
    }
}

/// A pure state on system ⊗ ancillas.
#[derive(Debug, Clone, PartialEq)]
pub struct DilatedState {
    system_dim: usize,
    ancilla_dims: Vec<usize>,
    state: PureState,
    embedding: QubitEmbedding,
}

impl DilatedState {
    pub fn new(system_dim: usize, ancilla_dims: Vec<usize>, state: PureState) -> Result<Self> {
        let mut dims = vec![system_dim];
        dims.extend_from_slice(&ancilla_dims);
        let total: usize = dims.iter().product();
        if total != state.dim() {
            return Err(Error::DimensionMismatch {
                context: "dilated state factor dimensions",
                expected: total,
                found: state.dim(),
            });
        }
        Ok(Self {
            system_dim,
            ancilla_dims,
            state,
            embedding: QubitEmbedding::new(&dims),
        })
    }

    pub fn system_dim(&self) -> usize {
        self.system_dim
    }

    pub fn ancilla_dims(&self) -> &[usize] {
        &self.ancilla_dims
    }

    pub fn ancilla_dim(&self) -> usize {
        self.ancilla_dims.iter().product()
    }

    /// System dimension followed by the ancilla dimensions.
    pub fn dims(&self) -> Vec<usize> {
        let mut dims = vec![self.system_dim];
        dims.extend_from_slice(&self.ancilla_dims);
        dims
    }

    pub fn state(&self) -> &PureState {
        &self.state
    }

    pub fn amplitudes(&self) -> &[C64] {
        self.state.amplitudes()
    }

    pub fn embedding(&self) -> &QubitEmbedding {
        &self.embedding
    }

    /// Reduced system state after discarding every ancilla.
    pub fn reduced_system(&self) -> DensityMatrix {
        reduced_state(&self.state, &[self.system_dim, self.ancilla_dim()], &[0])
            .expect("factor dimensions are consistent by construction")
    }
}

/// `Σ_j (K_j|ψ⟩) ⊗ |j⟩`, with one ancilla level per Kraus operator.
pub fn dilate_pure(ch: &KrausChannel, psi: &PureState) -> Result<DilatedState> {
    if ch.dim() != psi.dim() {
        return Err(Error::DimensionMismatch {
            context: "channel and state dimensions",
            expected: ch.dim(),
            found: psi.dim(),
        });
    }
    let n = ch.len();
    let mut amps = vec![ZERO; ch.dim() * n];
    for (j, k) in ch.kraus_ops().iter().enumerate() {
        for (a, v) in k.apply(psi.amplitudes())?.into_iter().enumerate() {
            amps[a * n + j] = v;
        }
    }
    DilatedState::new(ch.dim(), vec![n], PureState::normalized(amps)?)
}

/// Qubit-register vector for a dilated state.
pub fn embed_qudits(state: &DilatedState) -> PureState {
    PureState::new(state.embedding.embed(state.amplitudes()))
        .expect("embedding preserves the norm")
}

/// Conditions on ancilla outcome `outcome` (flattened over all ancilla factors).
/// Returns the branch probability and the normalized system state.
pub fn postselect(state: &DilatedState, outcome: usize) -> Result<(f64, PureState)> {
    let anc = state.ancilla_dim();
    if outcome >= anc {
        return Err(Error::DimensionMismatch {
            context: "ancilla outcome",
            expected: anc,
            found: outcome,
        });
    }
    let branch: Vec<C64> = (0..state.system_dim)
        .map(|a| state.amplitudes()[a * anc + outcome])
        .collect();
    let prob: f64 = branch.iter().map(|x| x.norm_sqr()).sum();
    if prob <= f64::EPSILON {
        return Err(Error::Unpostselectable { outcome });
    }
    Ok((prob, PureState::normalized(branch)?))
}

/// Bloch parameters of a qubit density matrix `(I + r n̂·σ)/2`, `n̂ = (sinθ cosφ, sinθ sinφ, cosθ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlochParams {
    pub r: f64,
    pub theta: f64,
    pub phi: f64,
}

/// Spectral decomposition `ρ = Σ r_j |r_j⟩⟨r_j|` of a mixed input.
#[derive(Debug, Clone)]
pub struct SpectralInput {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: Vec<PureState>,
    pub bloch: Option<BlochParams>,
}

impl SpectralInput {
    /// Numerical spectrum; eigenvalues descending.
    pub fn from_density(rho: &DensityMatrix) -> Result<Self> {
        let eig = herm_eig(rho.matrix())?;
        let eigenvectors = (0..rho.dim())
            .map(|k| PureState::normalized(eig.vector(k)))
            .collect::<Result<Vec<_>>>()?;
        let eigenvalues = eig.values.iter().map(|&v| v.max(0.0)).collect();
        let bloch = (rho.dim() == 2).then(|| bloch_params(rho));
        Ok(Self {
            eigenvalues,
            eigenvectors,
            bloch,
        })
    }

    /// Qubit spectrum in the Bloch parameterization:
    /// `|r_0⟩ = cos(θ/2)|0⟩ + e^{iφ} sin(θ/2)|1⟩`, `|r_1⟩ = sin(θ/2)|0⟩ − e^{iφ} cos(θ/2)|1⟩`,
    /// `r_j = (1 + (−1)^j r)/2`.
    pub fn qubit_bloch(rho: &DensityMatrix) -> Result<Self> {
        if rho.dim() != 2 {
            return Err(Error::DimensionMismatch {
                context: "Bloch parameterization",
                expected: 2,
                found: rho.dim(),
            });
        }
        let b = bloch_params(rho);
        let (c, s) = ((b.theta / 2.0).cos(), (b.theta / 2.0).sin());
        let phase = C64::from_polar(1.0, b.phi);
        let r0 = PureState::new(vec![C64::new(c, 0.0), phase * s])?;
        let r1 = PureState::new(vec![C64::new(s, 0.0), -phase * c])?;
        Ok(Self {
            eigenvalues: vec![(1.0 + b.r) / 2.0, (1.0 - b.r) / 2.0],
            eigenvectors: vec![r0, r1],
            bloch: Some(b),
        })
    }

    /// Eigenpairs with eigenvalue above [`RANK_TOLERANCE`].
    pub fn support(&self) -> impl Iterator<Item = (f64, &PureState)> {
        self.eigenvalues
            .iter()
            .zip(&self.eigenvectors)
            .filter(|(v, _)| **v > RANK_TOLERANCE)
            .map(|(&v, s)| (v, s))
    }

    pub fn rank(&self) -> usize {
        self.support().count()
    }
}

/// `r`, `θ`, `φ` of a qubit state. `φ` is the full-range phase `−arg ρ₀₁` and is set to 0
/// when `sin θ` vanishes.
pub fn bloch_params(rho: &DensityMatrix) -> BlochParams {
    let z = (rho.get(0, 0) - rho.get(1, 1)).re;
    let off = rho.get(0, 1) * 2.0;
    let r = (z * z + off.norm_sqr()).sqrt();
    if r < RANK_TOLERANCE {
        return BlochParams { r: 0.0, theta: 0.0, phi: 0.0 };
    }
    let theta = (z / r).clamp(-1.0, 1.0).acos();
    let phi = if theta.sin() < 1e-12 {
        0.0
    } else {
        let phi = (-off.im).atan2(off.re);
        if phi < 0.0 {
            phi + 2.0 * std::f64::consts::PI
        } else {
            phi
        }
    };
    BlochParams { r, theta, phi }
}

fn check_dims(ch: &KrausChannel, rho: &DensityMatrix) -> Result<()> {
    if ch.dim() != rho.dim() {
        return Err(Error::DimensionMismatch {
            context: "channel and state dimensions",
            expected: ch.dim(),
            found: rho.dim(),
        });
    }
    Ok(())
}

/// Mixed input, first route: form `ρ̃_AB = V(ρ ⊗ |0⟩⟨0|)V†` from the Kraus branches,
/// diagonalize it and return the purification `Σ √λ_j |λ_j⟩_AB ⊗ |j⟩_C`.
/// Factors are `[d_A, #Kraus, d_A·#Kraus]`.
pub fn mixed_method_purify_evolved(ch: &KrausChannel, rho: &DensityMatrix) -> Result<DilatedState> {
    check_dims(ch, rho)?;
    let d = ch.dim();
    let n = ch.len();
    let dab = d * n;
    // Column l of `iso` is V|l⟩|0⟩ = Σ_j K_j|l⟩ ⊗ |j⟩.
    let mut iso = ComplexMatrix::zeros(dab, d);
    for (j, k) in ch.kraus_ops().iter().enumerate() {
        for a in 0..d {
            for l in 0..d {
                iso[(a * n + j, l)] = k[(a, l)];
            }
        }
    }
    let evolved = iso.sandwich(rho.matrix())?;
    let eig = herm_eig(&evolved)?;
    let mut amps = vec![ZERO; dab * dab];
    for (j, &lambda) in eig.values.iter().enumerate() {
        if lambda <= RANK_TOLERANCE {
            continue;
        }
        let weight = lambda.sqrt();
        for (x, v) in eig.vector(j).into_iter().enumerate() {
            amps[x * dab + j] = v * weight;
        }
    }
    DilatedState::new(d, vec![n, dab], PureState::normalized(amps)?)
}

/// Mixed input, second route: `Σ_k r_k Λ(|r_k⟩⟨r_k|)`, each term obtained from its own
/// dilated state.
pub fn mixed_method_convex(ch: &KrausChannel, rho: &DensityMatrix) -> Result<DensityMatrix> {
    check_dims(ch, rho)?;
    let spectral = SpectralInput::from_density(rho)?;
    let d = ch.dim();
    let mut acc = ComplexMatrix::zeros(d, d);
    for (r, v) in spectral.support() {
        let term = dilate_pure(ch, v)?.reduced_system();
        acc = &acc + &term.matrix().scale_real(r);
    }
    Ok(DensityMatrix::new_unchecked(acc))
}

/// Mixed input, third route: `Σ_{j,l} √r_l K_j|r_l⟩ ⊗ |l⟩_B ⊗ |j⟩_C`, with `dim B` equal
/// to the rank of `ρ` and `dim C` the number of Kraus operators.
pub fn mixed_method_double_purification(
    ch: &KrausChannel,
    rho: &DensityMatrix,
) -> Result<DilatedState> {
    check_dims(ch, rho)?;
    double_purification_from_spectrum(ch, &SpectralInput::from_density(rho)?)
}

/// Third route with a caller-supplied spectral decomposition.
pub fn double_purification_from_spectrum(
    ch: &KrausChannel,
    spectral: &SpectralInput,
) -> Result<DilatedState> {
    let d = ch.dim();
    let support: Vec<(f64, &PureState)> = spectral.support().collect();
    if support.is_empty() {
        return Err(Error::InvalidState("spectrum has no positive eigenvalue".into()));
    }
    if let Some((_, v)) = support.iter().find(|(_, v)| v.dim() != d) {
        return Err(Error::DimensionMismatch {
            context: "eigenvector dimension",
            expected: d,
            found: v.dim(),
        });
    }
    let rank = support.len();
    let n = ch.len();
    let mut amps = vec![ZERO; d * rank * n];
    for (l, (r, v)) in support.iter().enumerate() {
        let w = r.sqrt();
        for (j, k) in ch.kraus_ops().iter().enumerate() {
            for (a, x) in k.apply(v.amplitudes())?.into_iter().enumerate() {
                amps[(a * rank + l) * n + j] = x * w;
            }
        }
    }
    DilatedState::new(d, vec![rank, n], PureState::normalized(amps)?)
}

/// Operator-sum reference for any dilation route.
pub fn oracle(ch: &KrausChannel, rho: &DensityMatrix) -> Result<DensityMatrix> {
    apply_channel(ch, rho)
}

/// Reduced system state of a dilated state given as a full density matrix.
pub fn trace_out_ancillas(state: &DilatedState) -> Result<DensityMatrix> {
    partial_trace(&DensityMatrix::from_pure(state.state()), &state.dims(), &[0])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channels::{bit_flip, bit_phase_flip, depolarizing, heisenberg_weyl, l1_coherence, pauli_channel, phase_damping};
    use crate::numerics::c64;

    fn rho_mixed() -> DensityMatrix {
        DensityMatrix::from_real_rows(&[[2.0 / 3.0, 1.33 / 3.0], [1.33 / 3.0, 1.0 / 3.0]]).unwrap()
    }

    fn assert_amps(actual: &[C64], expected: &[C64], tol: f64) {
        assert_eq!(actual.len(), expected.len());
        for (k, (a, e)) in actual.iter().zip(expected).enumerate() {
            assert!((a - e).norm() <= tol, "amplitude {k}: {a} vs {e}");
        }
    }

    #[test]
    fn qubit_counts() {
        assert_eq!(qubits_for_levels(1), 0);
        assert_eq!(qubits_for_levels(2), 1);
        assert_eq!(qubits_for_levels(3), 2);
        assert_eq!(qubits_for_levels(4), 2);
        assert_eq!(qubits_for_levels(9), 4);
    }

    #[test]
    fn bpf_dilated_state_matches_closed_form() {
        let p: f64 = 0.3;
        let st = dilate_pure(&bit_phase_flip(p).unwrap(), &PureState::plus()).unwrap();
        let a = ((1.0 - p) / 2.0).sqrt();
        let b = (p / 2.0).sqrt();
        assert_amps(st.amplitudes(), &[c64(a, 0.0), c64(0.0, -b), c64(a, 0.0), c64(0.0, b)], 1e-15);
        let reduced = st.reduced_system();
        assert!((reduced.get(0, 1).re - (1.0 - 2.0 * p) / 2.0).abs() < 1e-15);
    }

    #[test]
    fn pd_dilated_state_matches_closed_form() {
        let p: f64 = 0.6;
        let st = dilate_pure(&phase_damping(p).unwrap(), &PureState::plus()).unwrap();
        let h = 0.5f64.sqrt();
        assert_amps(
            st.amplitudes(),
            &[c64(h, 0.0), c64(0.0, 0.0), c64(((1.0 - p) / 2.0).sqrt(), 0.0), c64((p / 2.0).sqrt(), 0.0)],
            1e-15,
        );
    }

    #[test]
    fn identity_channel_appends_ground_ancilla() {
        let psi = PureState::bloch(1.3, 0.2);
        let st = dilate_pure(&KrausChannel::identity(2), &psi).unwrap();
        assert_eq!(st.ancilla_dims(), &[1]);
        assert_amps(st.amplitudes(), psi.amplitudes(), 0.0);
        assert!(dilate_pure(&KrausChannel::identity(3), &psi).is_err());
    }

    #[test]
    fn qutrit_embedding() {
        let emb = QubitEmbedding::new(&[3]);
        assert_eq!(emb.level_bits(0, 2), "10");
        assert_eq!(emb.embed_index(2), 0b10);
        let psi = PureState::bloch(0.4, 0.9);
        let st = dilate_pure(&KrausChannel::identity(2), &psi).unwrap();
        assert_eq!(embed_qudits(&st).amplitudes(), psi.amplitudes());
    }

    #[test]
    fn uniform_qutrit_with_nine_level_ancilla() {
        let mut probs = vec![vec![0.0; 3]; 3];
        probs[0][0] = 1.0;
        let ch = heisenberg_weyl(3, &probs).unwrap();
        let st = dilate_pure(&ch, &PureState::uniform(3)).unwrap();
        let q = embed_qudits(&st);
        assert_eq!(st.embedding().qubit_count(), 6);
        assert_eq!(q.dim(), 64);
        assert_eq!(q.amplitudes().iter().filter(|a| a.norm() > 0.0).count(), 3);
        let (back, leak) = st.embedding().extract(q.amplitudes());
        assert_eq!(leak, 0.0);
        assert_amps(&back, st.amplitudes(), 0.0);
    }

    #[test]
    fn postselection_examples() {
        let psi = PureState::bloch(0.7, 0.3);
        let st = dilate_pure(&KrausChannel::identity(2), &psi).unwrap();
        let (p, cond) = postselect(&st, 0).unwrap();
        assert!((p - 1.0).abs() < 1e-15);
        assert!(cond.distance_up_to_phase(&psi) < 1e-15);

        let st = dilate_pure(&bit_flip(0.25).unwrap(), &PureState::basis(2, 0)).unwrap();
        let (p, cond) = postselect(&st, 1).unwrap();
        assert!((p - 0.25).abs() < 1e-15);
        assert!(cond.distance_up_to_phase(&PureState::basis(2, 1)) < 1e-15);

        let st = dilate_pure(&phase_damping(0.5).unwrap(), &PureState::plus()).unwrap();
        let (p, cond) = postselect(&st, 1).unwrap();
        assert!((p - 0.25).abs() < 1e-15);
        assert!(cond.distance_up_to_phase(&PureState::basis(2, 1)) < 1e-15);

        let st = dilate_pure(&phase_damping(0.0).unwrap(), &PureState::plus()).unwrap();
        assert!(matches!(postselect(&st, 1), Err(Error::Unpostselectable { outcome: 1 })));
        assert!(postselect(&st, 2).is_err());
    }

    #[test]
    fn mixed_methods_on_pure_input() {
        let psi = PureState::bloch(1.0, 0.5);
        let rho = DensityMatrix::from_pure(&psi);
        let ch = depolarizing(0.3).unwrap();
        let m1 = mixed_method_purify_evolved(&ch, &rho).unwrap();
        let expected = dilate_pure(&ch, &psi).unwrap().state().tensor(&PureState::basis(8, 0));
        assert!(m1.state().distance_up_to_phase(&expected) < 1e-12);

        let m3 = mixed_method_double_purification(&ch, &rho).unwrap();
        assert_eq!(m3.ancilla_dims(), &[1, 4]);
        let direct = dilate_pure(&ch, &psi).unwrap();
        assert!(m3.state().distance_up_to_phase(direct.state()) < 1e-12);
    }

    #[test]
    fn mixed_methods_identity_channel() {
        let ch = KrausChannel::identity(2);
        let rho = rho_mixed();
        for out in [
            mixed_method_purify_evolved(&ch, &rho).unwrap().reduced_system(),
            mixed_method_convex(&ch, &rho).unwrap(),
            mixed_method_double_purification(&ch, &rho).unwrap().reduced_system(),
        ] {
            assert!(out.matrix().max_abs_diff(rho.matrix()) < 1e-12);
        }
    }

    #[test]
    fn mixed_methods_depolarizing_example() {
        // (1 − p) · 2 · 1.33/3 at p = 0.4
        let ch = depolarizing(0.4).unwrap();
        let rho = rho_mixed();
        let expected = 0.6 * 2.0 * 1.33 / 3.0;
        let m1 = mixed_method_purify_evolved(&ch, &rho).unwrap();
        assert!((l1_coherence(&m1.reduced_system()) - expected).abs() < 1e-12);
        assert!((l1_coherence(&mixed_method_convex(&ch, &rho).unwrap()) - expected).abs() < 1e-12);
        let m3 = mixed_method_double_purification(&ch, &rho).unwrap();
        assert!((l1_coherence(&m3.reduced_system()) - expected).abs() < 1e-12);
        let full = trace_out_ancillas(&m3).unwrap();
        assert!(full.matrix().max_abs_diff(m3.reduced_system().matrix()) < 1e-14);
    }

    #[test]
    fn double_purification_literal_amplitudes() {
        let (pi, px, pz, py) = (0.4, 0.3, 0.2, 0.1);
        let ch = pauli_channel(pi, px, pz, py).unwrap();
        let rho = DensityMatrix::from_real_rows(&[[0.6, 0.1], [0.1, 0.4]]).unwrap();
        let rho = DensityMatrix::new(&rho.matrix().clone() + &ComplexMatrix::from_rows(&[[c64(0.0, 0.0), c64(0.0, -0.15)], [c64(0.0, 0.15), c64(0.0, 0.0)]])).unwrap();
        let spectral = SpectralInput::qubit_bloch(&rho).unwrap();
        let b = spectral.bloch.unwrap();
        let (r0, r1) = ((1.0 + b.r) / 2.0, (1.0 - b.r) / 2.0);
        let (c, s) = ((b.theta / 2.0).cos(), (b.theta / 2.0).sin());
        let e = C64::from_polar(1.0, b.phi);
        let i = c64(0.0, 1.0);
        let mut expected = vec![ZERO; 16];
        let mut put = |bits: &str, v: C64| expected[usize::from_str_radix(bits, 2).unwrap()] = v;
        put("0000", c64((r0 * pi).sqrt() * c, 0.0));
        put("1000", (r0 * pi).sqrt() * e * s);
        put("1001", c64((r0 * px).sqrt() * c, 0.0));
        put("0001", (r0 * px).sqrt() * e * s);
        put("0010", c64((r0 * pz).sqrt() * c, 0.0));
        put("1010", -(r0 * pz).sqrt() * e * s);
        put("1011", i * (r0 * py).sqrt() * c);
        put("0011", -i * (r0 * py).sqrt() * e * s);
        put("0100", c64((r1 * pi).sqrt() * s, 0.0));
        put("1100", -(r1 * pi).sqrt() * e * c);
        put("1101", c64((r1 * px).sqrt() * s, 0.0));
        put("0101", -(r1 * px).sqrt() * e * c);
        put("0110", c64((r1 * pz).sqrt() * s, 0.0));
        put("1110", (r1 * pz).sqrt() * e * c);
        put("1111", i * (r1 * py).sqrt() * s);
        put("0111", i * (r1 * py).sqrt() * e * c);
        let st = double_purification_from_spectrum(&ch, &spectral).unwrap();
        assert_eq!(st.embedding().qubit_count(), 4);
        assert_amps(embed_qudits(&st).amplitudes(), &expected, 1e-14);
        let oracle = apply_channel(&ch, &rho).unwrap();
        assert!(st.reduced_system().matrix().max_abs_diff(oracle.matrix()) < 1e-14);
    }

    #[test]
    fn full_depolarization_of_mixed_example() {
        let ch = depolarizing(1.0).unwrap();
        let st = mixed_method_double_purification(&ch, &rho_mixed()).unwrap();
        let out = st.reduced_system();
        assert!(out.matrix().max_abs_diff(DensityMatrix::maximally_mixed(2).matrix()) < 1e-14);
        assert!(l1_coherence(&out) < 1e-14);
    }

    #[test]
    fn bloch_params_of_mixed_example() {
        let b = bloch_params(&rho_mixed());
        let r = ((1.0f64 / 3.0).powi(2) + (2.66f64 / 3.0).powi(2)).sqrt();
        assert!((b.r - r).abs() < 1e-14);
        assert!((b.theta - (1.0 / 3.0 / r).acos()).abs() < 1e-14);
        assert_eq!(b.phi, 0.0);
        let mixed = bloch_params(&DensityMatrix::maximally_mixed(2));
        assert_eq!((mixed.r, mixed.theta, mixed.phi), (0.0, 0.0, 0.0));
    }
}
