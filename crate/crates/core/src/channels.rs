//! Kraus-channel representation, the channel catalog and operator-sum evolution.
//!
//! Kraus order is part of a channel's identity: operator `j` labels ancilla basis
//! state `|j⟩` when the channel is dilated.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{check_unit_interval, Error, Result};
use crate::numerics::{pauli, ComplexMatrix, DensityMatrix, C64, I, ONE, TOL};

/// An ordered list of Kraus operators on a `dim`-level system.
#[derive(Clone, Debug, PartialEq)]
pub struct KrausChannel {
    dim: usize,
    kraus_ops: Vec<ComplexMatrix>,
    label: String,
    params: BTreeMap<String, f64>,
}

impl KrausChannel {
    /// Builds a channel and checks the completeness relation at the validation tolerance.
    pub fn new(dim: usize, kraus_ops: Vec<ComplexMatrix>, label: impl Into<String>) -> Result<Self> {
        let ch = Self::unchecked(dim, kraus_ops, label)?;
        let report = validate_cptp(&ch, TOL.validation);
        if !report.passed {
            return Err(Error::InvalidChannel(format!(
                "completeness residual {:e} exceeds {:e}",
                report.residual, TOL.validation
            )));
        }
        Ok(ch)
    }

    /// Checks shapes only. Use [`validate_cptp`] to inspect completeness.
    pub fn unchecked(dim: usize, kraus_ops: Vec<ComplexMatrix>, label: impl Into<String>) -> Result<Self> {
        if kraus_ops.is_empty() {
            return Err(Error::InvalidChannel("at least one Kraus operator is required".into()));
        }
        for k in &kraus_ops {
            if k.rows() != dim || k.cols() != dim {
                return Err(Error::DimensionMismatch {
                    context: "Kraus operator shape",
                    expected: dim,
                    found: if k.rows() != dim { k.rows() } else { k.cols() },
                });
            }
        }
        Ok(Self {
            dim,
            kraus_ops,
            label: label.into(),
            params: BTreeMap::new(),
        })
    }

    pub fn with_param(mut self, name: &str, value: f64) -> Self {
        self.params.insert(name.to_string(), value);
        self
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            dim,
            kraus_ops: vec![ComplexMatrix::identity(dim)],
            label: "identity".into(),
            params: BTreeMap::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn kraus_ops(&self) -> &[ComplexMatrix] {
        &self.kraus_ops
    }

    pub fn len(&self) -> usize {
        self.kraus_ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.kraus_ops.is_empty()
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn params(&self) -> &BTreeMap<String, f64> {
        &self.params
    }

    /// Drops operators whose entries are all below `tol` in modulus, keeping at least one.
    pub fn prune(&self, tol: f64) -> Self {
        let mut kept: Vec<ComplexMatrix> = self
            .kraus_ops
            .iter()
            .filter(|k| k.max_abs() > tol)
            .cloned()
            .collect();
        if kept.is_empty() {
            kept.push(self.kraus_ops[0].clone());
        }
        Self {
            kraus_ops: kept,
            ..self.clone()
        }
    }

    /// `‖Σ K_j K_j† − I‖_max`; zero for unital channels.
    pub fn unitality_residual(&self) -> f64 {
        let sum = self
            .kraus_ops
            .iter()
            .fold(ComplexMatrix::zeros(self.dim, self.dim), |acc, k| &acc + &(k * &k.adjoint()));
        sum.max_abs_diff(&ComplexMatrix::identity(self.dim))
    }

    /// `Σ K_j m K_j†` for an arbitrary operator `m`.
    pub fn apply_operator(&self, m: &ComplexMatrix) -> Result<ComplexMatrix> {
        if m.rows() != self.dim || m.cols() != self.dim {
            return Err(Error::DimensionMismatch {
                context: "channel input",
                expected: self.dim,
                found: m.rows(),
            });
        }
        let mut out = ComplexMatrix::zeros(self.dim, self.dim);
        for k in &self.kraus_ops {
            out = &out + &k.sandwich(m)?;
        }
        Ok(out)
    }

    /// Mixes the Kraus operators with `u`: `K'_i = Σ_j u_{ij} K_j`.
    pub fn remix(&self, u: &ComplexMatrix) -> Result<Self> {
        if u.cols() != self.len() {
            return Err(Error::DimensionMismatch {
                context: "Kraus mixing matrix columns",
                expected: self.len(),
                found: u.cols(),
            });
        }
        let ops = (0..u.rows())
            .map(|i| {
                self.kraus_ops
                    .iter()
                    .enumerate()
                    .fold(ComplexMatrix::zeros(self.dim, self.dim), |acc, (j, k)| {
                        &acc + &k.scale(u[(i, j)])
                    })
            })
            .collect();
        Ok(Self {
            kraus_ops: ops,
            label: format!("{} (remixed)", self.label),
            ..self.clone()
        })
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&ChannelFile::from(self))?)
    }

    /// Parses the channel file format without checking completeness.
    pub fn from_json(text: &str) -> Result<Self> {
        let file: ChannelFile = serde_json::from_str(text)?;
        file.try_into()
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }
}

/// On-disk channel description.
///
/// ```json
/// { "dim": 2, "label": "bit_flip", "params": { "p": 0.1 },
///   "kraus": [ [[[0.948, 0.0], [0.0, 0.0]], [[0.0, 0.0], [0.948, 0.0]]], ... ] }
/// ```
///
/// Each Kraus operator is a list of rows; each entry is a `[re, im]` pair.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ChannelFile {
    pub dim: usize,
    #[serde(default)]
    pub label: String,
    #[serde(default)]
    pub params: BTreeMap<String, f64>,
    pub kraus: Vec<Vec<Vec<[f64; 2]>>>,
}

impl From<&KrausChannel> for ChannelFile {
    fn from(ch: &KrausChannel) -> Self {
        let kraus = ch
            .kraus_ops
            .iter()
            .map(|k| {
                (0..k.rows())
                    .map(|r| k.row(r).iter().map(|z| [z.re, z.im]).collect())
                    .collect()
            })
            .collect();
        Self {
            dim: ch.dim,
            label: ch.label.clone(),
            params: ch.params.clone(),
            kraus,
        }
    }
}

impl TryFrom<ChannelFile> for KrausChannel {
    type Error = Error;

    fn try_from(file: ChannelFile) -> Result<Self> {
        let mut ops = Vec::with_capacity(file.kraus.len());
        for op in &file.kraus {
            let rows: Vec<Vec<C64>> = op
                .iter()
                .map(|row| row.iter().map(|&[re, im]| C64::new(re, im)).collect())
                .collect();
            if rows.iter().any(|r| r.len() != file.dim) || rows.len() != file.dim {
                return Err(Error::InvalidChannel(format!(
                    "every Kraus operator must be {0}x{0}",
                    file.dim
                )));
            }
            ops.push(ComplexMatrix::from_rows(&rows));
        }
        let mut ch = KrausChannel::unchecked(file.dim, ops, file.label)?;
        ch.params = file.params;
        Ok(ch)
    }
}

/// Outcome of a completeness check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CptpReport {
    pub passed: bool,
    /// `‖Σ K_j†K_j − I‖_max`
    pub residual: f64,
}

pub fn validate_cptp(ch: &KrausChannel, tol: f64) -> CptpReport {
    let sum = ch
        .kraus_ops
        .iter()
        .fold(ComplexMatrix::zeros(ch.dim, ch.dim), |acc, k| &acc + &(&k.adjoint() * k));
    let residual = sum.max_abs_diff(&ComplexMatrix::identity(ch.dim));
    CptpReport {
        passed: residual <= tol,
        residual,
    }
}

/// Operator-sum evolution `Σ K_j ρ K_j†`.
pub fn apply_channel(ch: &KrausChannel, rho: &DensityMatrix) -> Result<DensityMatrix> {
    ch.apply_operator(rho.matrix()).map(DensityMatrix::new_unchecked)
}

fn check_distribution(probs: &[f64]) -> Result<()> {
    for (k, &p) in probs.iter().enumerate() {
        if p < 0.0 || p.is_nan() {
            return Err(Error::InvalidParameter {
                name: format!("p[{k}]"),
                value: p,
                reason: "probabilities must be nonnegative",
            });
        }
    }
    let total: f64 = probs.iter().sum();
    if (total - 1.0).abs() > 1e-12 {
        return Err(Error::InvalidParameter {
            name: "sum(p)".into(),
            value: total,
            reason: "probabilities must sum to 1",
        });
    }
    Ok(())
}

/// Pauli channel with Kraus operators `√p_P · P` in the order (I, X, Z, Y).
pub fn pauli_channel(p_i: f64, p_x: f64, p_z: f64, p_y: f64) -> Result<KrausChannel> {
    check_distribution(&[p_i, p_x, p_z, p_y])?;
    let ops = [(p_i, pauli::id()), (p_x, pauli::x()), (p_z, pauli::z()), (p_y, pauli::y())]
        .into_iter()
        .map(|(p, m)| m.scale_real(p.sqrt()))
        .collect();
    Ok(KrausChannel::unchecked(2, ops, "pauli")?
        .with_param("p_I", p_i)
        .with_param("p_X", p_x)
        .with_param("p_Z", p_z)
        .with_param("p_Y", p_y))
}

/// Single-Pauli flip channels keep only the identity and the flip operator, matching
/// the one-qubit ancilla used for them.
fn flip_channel(p: f64, flip_index: usize, label: &str) -> Result<KrausChannel> {
    check_unit_interval("p", p)?;
    let mut probs = [1.0 - p, 0.0, 0.0, 0.0];
    probs[flip_index] = p;
    let full = pauli_channel(probs[0], probs[1], probs[2], probs[3])?;
    let ops = vec![full.kraus_ops[0].clone(), full.kraus_ops[flip_index].clone()];
    Ok(KrausChannel::unchecked(2, ops, label)?.with_param("p", p))
}

/// `Λ_p^{1−p, p, 0, 0}`: Kraus ops `{√(1−p) I, √p X}`.
pub fn bit_flip(p: f64) -> Result<KrausChannel> {
    flip_channel(p, 1, "bit_flip")
}

/// `Λ_p^{1−p, 0, p, 0}`: Kraus ops `{√(1−p) I, √p Z}`.
pub fn phase_flip(p: f64) -> Result<KrausChannel> {
    flip_channel(p, 2, "phase_flip")
}

/// `Λ_p^{1−p, 0, 0, p}`: Kraus ops `{√(1−p) I, √p Y}`.
pub fn bit_phase_flip(p: f64) -> Result<KrausChannel> {
    flip_channel(p, 3, "bit_phase_flip")
}

/// `Λ_p^{(4−3p)/4, p/4, p/4, p/4}`, all four Pauli operators.
pub fn depolarizing(p: f64) -> Result<KrausChannel> {
    check_unit_interval("p", p)?;
    let q = p / 4.0;
    let mut ch = pauli_channel(1.0 - 3.0 * q, q, q, q)?.with_param("p", p);
    ch.label = "depolarizing".into();
    Ok(ch)
}

/// `{|0⟩⟨0| + √(1−p)|1⟩⟨1|, √p|1⟩⟨1|}`
pub fn phase_damping(p: f64) -> Result<KrausChannel> {
    check_unit_interval("p", p)?;
    let k0 = ComplexMatrix::from_real_rows(&[[1.0, 0.0], [0.0, (1.0 - p).sqrt()]]);
    let k1 = ComplexMatrix::from_real_rows(&[[0.0, 0.0], [0.0, p.sqrt()]]);
    Ok(KrausChannel::unchecked(2, vec![k0, k1], "phase_damping")?.with_param("p", p))
}

/// Generalized amplitude damping with damping `p` and thermal population `n`, Kraus order K₀..K₃.
pub fn gad(p: f64, n: f64) -> Result<KrausChannel> {
    check_unit_interval("p", p)?;
    check_unit_interval("N", n)?;
    let s = (1.0 - p).sqrt();
    let k0 = ComplexMatrix::from_real_rows(&[[1.0, 0.0], [0.0, s]]).scale_real((1.0 - n).sqrt());
    let k1 = ComplexMatrix::from_real_rows(&[[0.0, (p * (1.0 - n)).sqrt()], [0.0, 0.0]]);
    let k2 = ComplexMatrix::from_real_rows(&[[s, 0.0], [0.0, 1.0]]).scale_real(n.sqrt());
    let k3 = ComplexMatrix::from_real_rows(&[[0.0, 0.0], [(p * n).sqrt(), 0.0]]);
    Ok(KrausChannel::unchecked(2, vec![k0, k1, k2, k3], "gad")?
        .with_param("p", p)
        .with_param("N", n))
}

fn check_index(name: &str, index: usize, d: usize) -> Result<()> {
    if index >= d {
        return Err(Error::InvalidParameter {
            name: name.to_string(),
            value: index as f64,
            reason: "index must be below the qudit dimension",
        });
    }
    Ok(())
}

/// Cyclic shift `X(j) = Σ_k |j ⊕ k⟩⟨k|`.
pub fn hw_shift(d: usize, j: usize) -> Result<ComplexMatrix> {
    check_index("j", j, d)?;
    let mut m = ComplexMatrix::zeros(d, d);
    for k in 0..d {
        m[((j + k) % d, k)] = ONE;
    }
    Ok(m)
}

/// Phase shift `Z(k) = Σ_l e^{2πikl/d}|l⟩⟨l|`.
pub fn hw_phase(d: usize, k: usize) -> Result<ComplexMatrix> {
    check_index("k", k, d)?;
    let diag: Vec<C64> = (0..d)
        .map(|l| C64::from_polar(1.0, 2.0 * PI * ((k * l) % d) as f64 / d as f64))
        .collect();
    Ok(ComplexMatrix::diagonal(&diag))
}

/// Heisenberg-Weyl channel with `d²` Kraus operators `√p_{j,k} X(j)Z(k)` in (j, k)
/// lexicographic order. `probs[j][k]` is the weight of `X(j)Z(k)`.
pub fn heisenberg_weyl<R: AsRef<[f64]>>(d: usize, probs: &[R]) -> Result<KrausChannel> {
    if probs.len() != d || probs.iter().any(|r| r.as_ref().len() != d) {
        return Err(Error::InvalidChannel(format!(
            "Heisenberg-Weyl probabilities must form a {d}x{d} table"
        )));
    }
    let flat: Vec<f64> = probs.iter().flat_map(|r| r.as_ref().to_vec()).collect();
    check_distribution(&flat)?;
    let mut ops = Vec::with_capacity(d * d);
    for j in 0..d {
        let x = hw_shift(d, j)?;
        for k in 0..d {
            let z = hw_phase(d, k)?;
            ops.push((&x * &z).scale_real(flat[j * d + k].sqrt()));
        }
    }
    KrausChannel::unchecked(d, ops, "heisenberg_weyl")
}

/// Dephasing subset of the Heisenberg-Weyl channel: `√p_j Z(j)` with `p_0 = p0` and the
/// remaining mass spread evenly over `j > 0`.
pub fn hw_dephasing(d: usize, p0: f64) -> Result<KrausChannel> {
    check_unit_interval("p0", p0)?;
    if d < 2 {
        return Err(Error::InvalidParameter {
            name: "d".into(),
            value: d as f64,
            reason: "dephasing needs at least two levels",
        });
    }
    let rest = (1.0 - p0) / (d - 1) as f64;
    let ops = (0..d)
        .map(|j| {
            let p = if j == 0 { p0 } else { rest };
            hw_phase(d, j).map(|z| z.scale_real(p.sqrt()))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(KrausChannel::unchecked(d, ops, "hw_dephasing")?.with_param("p0", p0))
}

/// Qutrit amplitude damping with decay `gamma`, Kraus order K₀, K₁, K₂.
pub fn qutrit_adc(gamma: f64) -> Result<KrausChannel> {
    check_unit_interval("gamma", gamma)?;
    let g = gamma;
    let k0 = ComplexMatrix::from_real_rows(&[
        [1.0, 0.0, 0.0],
        [0.0, (1.0 - g).sqrt(), 0.0],
        [0.0, 0.0, 1.0 - g],
    ]);
    let k1 = ComplexMatrix::from_real_rows(&[
        [0.0, g.sqrt(), 0.0],
        [0.0, 0.0, (2.0 * g * (1.0 - g)).sqrt()],
        [0.0, 0.0, 0.0],
    ]);
    let k2 = ComplexMatrix::from_real_rows(&[
        [0.0, 0.0, g],
        [0.0, 0.0, 0.0],
        [0.0, 0.0, 0.0],
    ]);
    Ok(KrausChannel::unchecked(3, vec![k0, k1, k2], "qutrit_adc")?.with_param("gamma", gamma))
}

type Vec3 = [f64; 3];

fn dot(a: &Vec3, b: &Vec3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn cross(a: &Vec3, b: &Vec3) -> Vec3 {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

fn norm3(a: &Vec3) -> f64 {
    dot(a, a).sqrt()
}

fn check_unit_vector(name: &str, v: &Vec3) -> Result<()> {
    let n = norm3(v);
    if (n - 1.0).abs() > 1e-12 {
        return Err(Error::InvalidParameter {
            name: name.to_string(),
            value: n,
            reason: "direction must be a unit vector",
        });
    }
    Ok(())
}

/// A Lorentz boost acting on a spin-½ particle whose momentum takes `d_p` discrete directions.
#[derive(Debug, Clone, PartialEq)]
pub struct WignerBoost {
    rapidity: f64,
    boost_direction: Vec3,
    momentum_rapidity: f64,
    momentum_directions: Vec<Vec3>,
}

impl WignerBoost {
    pub fn new(
        rapidity: f64,
        boost_direction: Vec3,
        momentum_rapidity: f64,
        momentum_directions: Vec<Vec3>,
    ) -> Result<Self> {
        if rapidity < 0.0 || momentum_rapidity < 0.0 {
            return Err(Error::InvalidParameter {
                name: "rapidity".into(),
                value: rapidity.min(momentum_rapidity),
                reason: "rapidities must be nonnegative",
            });
        }
        if momentum_directions.is_empty() {
            return Err(Error::InvalidChannel("at least one momentum direction is required".into()));
        }
        check_unit_vector("boost_direction", &boost_direction)?;
        for p in &momentum_directions {
            check_unit_vector("momentum_direction", p)?;
        }
        Ok(Self {
            rapidity,
            boost_direction,
            momentum_rapidity,
            momentum_directions,
        })
    }

    pub fn momentum_count(&self) -> usize {
        self.momentum_directions.len()
    }
}

/// An SU(2) spin rotation `cos(θ/2) I + i sin(θ/2) σ·n̂`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WignerRotation {
    pub angle: f64,
    pub axis: Vec3,
}

impl WignerRotation {
    /// A zero angle stores the conventional axis `ẑ`.
    pub fn new(angle: f64, axis: Vec3) -> Self {
        if angle == 0.0 {
            return Self::identity();
        }
        Self { angle, axis }
    }

    pub fn identity() -> Self {
        Self {
            angle: 0.0,
            axis: [0.0, 0.0, 1.0],
        }
    }

    /// The cosine term and the `sin(θ/2) n̂` vector.
    pub fn half_angle_parts(&self) -> (f64, Vec3) {
        let s = (self.angle / 2.0).sin();
        ((self.angle / 2.0).cos(), self.axis.map(|a| a * s))
    }

    pub fn matrix(&self) -> ComplexMatrix {
        let (c, s) = self.half_angle_parts();
        let sigma = &(&pauli::x().scale_real(s[0]) + &pauli::y().scale_real(s[1]))
            + &pauli::z().scale_real(s[2]);
        &ComplexMatrix::identity(2).scale_real(c) + &sigma.scale(I)
    }
}

/// Wigner rotation induced on momentum state `j`.
pub fn wigner_rotation(boost: &WignerBoost, j: usize) -> Result<WignerRotation> {
    let p = boost
        .momentum_directions
        .get(j)
        .ok_or(Error::InvalidParameter {
            name: "j".into(),
            value: j as f64,
            reason: "momentum index out of range",
        })?;
    let (w, a) = (boost.rapidity, boost.momentum_rapidity);
    let e = &boost.boost_direction;
    let ep = dot(e, p);
    let denom = (0.5 * (1.0 + w.cosh() * a.cosh() + w.sinh() * a.sinh() * ep)).sqrt();
    let ss = (w / 2.0).sinh() * (a / 2.0).sinh();
    let cos_half = ((w / 2.0).cosh() * (a / 2.0).cosh() + ss * ep) / denom;
    let sin_vec = cross(e, p).map(|x| ss * x / denom);
    let sin_norm = norm3(&sin_vec);
    if sin_norm < 1e-15 {
        return Ok(WignerRotation::identity());
    }
    let angle = 2.0 * sin_norm.atan2(cos_half);
    Ok(WignerRotation::new(angle, sin_vec.map(|x| x / sin_norm)))
}

/// Spin channel obtained by tracing out a uniformly weighted momentum register: Kraus ops
/// `D(W(Λ, p_j)) / √d_p`.
pub fn wigner_channel(boost: &WignerBoost) -> Result<KrausChannel> {
    let rotations = (0..boost.momentum_count())
        .map(|j| wigner_rotation(boost, j))
        .collect::<Result<Vec<_>>>()?;
    Ok(rotation_channel(&rotations)
        .with_param("omega", boost.rapidity)
        .with_param("alpha", boost.momentum_rapidity))
}

/// Equal-weight mixture of the given spin rotations.
pub fn rotation_channel(rotations: &[WignerRotation]) -> KrausChannel {
    let scale = 1.0 / (rotations.len() as f64).sqrt();
    let ops = rotations.iter().map(|r| r.matrix().scale_real(scale)).collect();
    KrausChannel::unchecked(2, ops, "wigner").expect("rotations are 2x2")
}

/// Boost along `ẑ` with momenta `±x̂`, parameterized directly by the Wigner angle.
pub fn lorentz_spin_channel(theta: f64) -> KrausChannel {
    rotation_channel(&[
        WignerRotation::new(theta, [0.0, 1.0, 0.0]),
        WignerRotation::new(theta, [0.0, -1.0, 0.0]),
    ])
    .with_param("theta", theta)
}

/// `Σ_{j≠k} |ρ_{jk}|` in the computational basis.
pub fn l1_coherence(rho: &DensityMatrix) -> f64 {
    l1_coherence_matrix(rho.matrix())
}

pub fn l1_coherence_matrix(m: &ComplexMatrix) -> f64 {
    let mut total = 0.0;
    for r in 0..m.rows() {
        for c in 0..m.cols() {
            if r != c {
                total += m[(r, c)].norm();
            }
        }
    }
    total
}

fn param(params: &BTreeMap<String, f64>, name: &str) -> Result<f64> {
    params
        .get(name)
        .copied()
        .ok_or_else(|| Error::Config(format!("channel parameter `{name}` is missing")))
}

/// Names accepted by [`from_catalog`].
pub const CATALOG: &[&str] = &[
    "identity",
    "bit_flip",
    "phase_flip",
    "bit_phase_flip",
    "depolarizing",
    "pauli",
    "phase_damping",
    "gad",
    "hw_dephasing",
    "twirl",
    "qutrit_adc",
    "lorentz",
];

/// Builds a catalog channel by name.
///
/// Parameters: `p` for the flip, depolarizing and damping channels; `p`, `N` for `gad`;
/// `p_I`, `p_X`, `p_Z`, `p_Y` for `pauli`; `p0` (and optional `d`, default 3) for
/// `hw_dephasing`; `d` for `twirl`; `gamma` for `qutrit_adc`; `theta` for `lorentz`;
/// optional `d` (default 2) for `identity`.
pub fn from_catalog(name: &str, params: &BTreeMap<String, f64>) -> Result<KrausChannel> {
    let dim_param = |default: usize| -> Result<usize> {
        match params.get("d") {
            None => Ok(default),
            Some(&d) if d >= 1.0 && d.fract() == 0.0 => Ok(d as usize),
            Some(&d) => Err(Error::InvalidParameter {
                name: "d".into(),
                value: d,
                reason: "dimension must be a positive integer",
            }),
        }
    };
    match name {
        "identity" => Ok(KrausChannel::identity(dim_param(2)?)),
        "bit_flip" => bit_flip(param(params, "p")?),
        "phase_flip" => phase_flip(param(params, "p")?),
        "bit_phase_flip" => bit_phase_flip(param(params, "p")?),
        "depolarizing" => depolarizing(param(params, "p")?),
        "pauli" => pauli_channel(
            param(params, "p_I")?,
            param(params, "p_X")?,
            param(params, "p_Z")?,
            param(params, "p_Y")?,
        ),
        "phase_damping" => phase_damping(param(params, "p")?),
        "gad" => gad(param(params, "p")?, param(params, "N")?),
        "hw_dephasing" => hw_dephasing(dim_param(3)?, param(params, "p0")?),
        "twirl" => {
            let d = dim_param(3)?;
            let row = vec![1.0 / (d * d) as f64; d];
            heisenberg_weyl(d, &vec![row; d])
        }
        "qutrit_adc" => qutrit_adc(param(params, "gamma")?),
        "lorentz" => Ok(lorentz_spin_channel(param(params, "theta")?)),
        other => Err(Error::Config(format!(
            "unknown channel `{other}` (expected one of {})",
            CATALOG.join(", ")
        ))),
    }
}
