//! Experiment configuration files.
//!
//! ```toml
//! [channel]
//! name = "gad"            # catalog name; or `file = "kraus.json"`
//! params = { N = 0.5 }    # fixed parameters
//!
//! [state]
//! bloch = { theta = 1.5707963267948966, phi = 0.0 }
//! # amplitudes = [[re, im], ...] or [re, ...]
//! # density = [[[re, im], ...], ...] with method = 1 | 2 | 3
//!
//! [sweep]
//! param = "p"
//! values = [0.0, 0.5, 1.0]   # or range = { start = 0.0, stop = 1.0, points = 21 }
//! mode = "sampled"           # or "exact"
//! shots = 8192
//! seed = 7
//!
//! [readout]
//! e0 = 0.05
//! e1 = 0.05
//!
//! [output]
//! csv = "bpf.csv"
//! qasm_dir = "qasm"
//! ```

use std::collections::BTreeMap;
use std::ops::Range;
use std::path::{Path, PathBuf};

use serde::Deserialize;
use toml::Spanned;

use crate::channels::{from_catalog, KrausChannel, CATALOG};
use crate::error::{Error, Result};
use crate::numerics::{ComplexMatrix, DensityMatrix, PureState, C64};

#[derive(Debug, Clone, PartialEq)]
pub enum ChannelSpec {
    Catalog {
        name: String,
        params: BTreeMap<String, f64>,
    },
    Custom(KrausChannel),
}

/// Route used to dilate a mixed initial state.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MixedMethod {
    /// Purify the evolved system-plus-ancilla state.
    PurifyEvolved,
    /// Run each eigenvector separately and mix the outputs.
    Convex,
    /// Purify the input, then dilate.
    DoublePurification,
}

impl MixedMethod {
    pub fn from_index(k: i64) -> Option<Self> {
        match k {
            1 => Some(Self::PurifyEvolved),
            2 => Some(Self::Convex),
            3 => Some(Self::DoublePurification),
            _ => None,
        }
    }

    pub fn index(self) -> u8 {
        match self {
            Self::PurifyEvolved => 1,
            Self::Convex => 2,
            Self::DoublePurification => 3,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum InitialState {
    Pure(PureState),
    Mixed { rho: DensityMatrix, method: MixedMethod },
}

impl InitialState {
    pub fn dim(&self) -> usize {
        match self {
            Self::Pure(psi) => psi.dim(),
            Self::Mixed { rho, .. } => rho.dim(),
        }
    }

    pub fn density(&self) -> DensityMatrix {
        match self {
            Self::Pure(psi) => DensityMatrix::from_pure(psi),
            Self::Mixed { rho, .. } => rho.clone(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    /// Statevector plus partial trace.
    Exact,
    /// Shot sampling plus tomography.
    Sampled,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Exact => "exact",
            Mode::Sampled => "sampled",
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct OutputPaths {
    pub csv: Option<PathBuf>,
    pub qasm_dir: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub channel: ChannelSpec,
    pub state: InitialState,
    /// Swept channel parameter; `None` only for custom channels.
    pub param: Option<String>,
    pub grid: Vec<f64>,
    pub mode: Mode,
    pub shots: u64,
    pub seed: u64,
    /// Uniform `(e0, e1)` applied to every measured qubit.
    pub readout: Option<(f64, f64)>,
    pub output: OutputPaths,
}

impl ExperimentConfig {
    /// Exact-mode sweep of one catalog parameter starting from `|+⟩`.
    pub fn catalog(name: &str, param: &str, grid: Vec<f64>) -> Self {
        Self {
            channel: ChannelSpec::Catalog {
                name: name.to_string(),
                params: BTreeMap::new(),
            },
            state: InitialState::Pure(PureState::plus()),
            param: Some(param.to_string()),
            grid,
            mode: Mode::Exact,
            shots: 8192,
            seed: 0,
            readout: None,
            output: OutputPaths::default(),
        }
    }

    pub fn with_fixed(mut self, name: &str, value: f64) -> Self {
        if let ChannelSpec::Catalog { params, .. } = &mut self.channel {
            params.insert(name.to_string(), value);
        }
        self
    }

    pub fn with_state(mut self, state: InitialState) -> Self {
        self.state = state;
        self
    }

    pub fn sampled(mut self, shots: u64, seed: u64) -> Self {
        self.mode = Mode::Sampled;
        self.shots = shots;
        self.seed = seed;
        self
    }

    pub fn with_readout(mut self, e0: f64, e1: f64) -> Self {
        self.readout = Some((e0, e1));
        self
    }

    /// Channel at grid value `value`.
    pub fn channel_at(&self, value: f64) -> Result<KrausChannel> {
        match &self.channel {
            ChannelSpec::Catalog { name, params } => {
                let mut params = params.clone();
                if let Some(p) = &self.param {
                    params.insert(p.clone(), value);
                }
                from_catalog(name, &params)
            }
            ChannelSpec::Custom(ch) => Ok(ch.clone()),
        }
    }

    /// Checks everything that can be checked without running the sweep.
    pub fn validate(&self) -> Result<()> {
        if self.grid.is_empty() {
            return Err(Error::Config("sweep grid is empty".into()));
        }
        if !is_monotone(&self.grid) {
            return Err(Error::Config("sweep grid must be strictly monotone".into()));
        }
        if self.mode == Mode::Sampled && self.shots == 0 {
            return Err(Error::Config("sampled mode needs shots >= 1".into()));
        }
        if let ChannelSpec::Catalog { .. } = self.channel {
            if self.param.is_none() {
                return Err(Error::Config("catalog sweeps need a `param`".into()));
            }
        }
        if let Some((e0, e1)) = self.readout {
            crate::simulator::ReadoutModel::uniform(1, e0, e1)?;
        }
        for &v in &self.grid {
            let ch = self
                .channel_at(v)
                .map_err(|e| Error::Config(format!("at grid value {v}: {e}")))?;
            if ch.dim() != self.state.dim() {
                return Err(Error::Config(format!(
                    "channel acts on dimension {} but the initial state has dimension {}",
                    ch.dim(),
                    self.state.dim()
                )));
            }
        }
        Ok(())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_toml(&text, path.parent().unwrap_or(Path::new(".")))
    }

    /// Parses and validates a config. Relative paths resolve against `base`.
    pub fn from_toml(text: &str, base: &Path) -> Result<Self> {
        let raw: RawConfig = toml::from_str(text).map_err(|e| {
            let line = e.span().map(|s| line_of(text, s.start)).unwrap_or(0);
            Error::Config(format!("line {line}: {}", e.message().trim()))
        })?;
        let at = |span: Range<usize>, msg: String| Error::Config(format!("line {}: {msg}", line_of(text, span.start)));
        build(raw, base, &at)
    }
}

fn is_monotone(grid: &[f64]) -> bool {
    if grid.iter().any(|v| !v.is_finite()) {
        return false;
    }
    grid.windows(2).all(|w| w[0] < w[1]) || grid.windows(2).all(|w| w[0] > w[1])
}

fn line_of(text: &str, offset: usize) -> usize {
    text[..offset.min(text.len())].matches('\n').count() + 1
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    channel: Spanned<RawChannel>,
    #[serde(default)]
    state: Option<Spanned<RawState>>,
    sweep: Spanned<RawSweep>,
    #[serde(default)]
    readout: Option<Spanned<RawReadout>>,
    #[serde(default)]
    output: Option<RawOutput>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawChannel {
    name: Option<Spanned<String>>,
    file: Option<Spanned<String>>,
    #[serde(default)]
    params: BTreeMap<String, f64>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum RawAmp {
    Real(f64),
    Complex([f64; 2]),
}

impl RawAmp {
    fn value(&self) -> C64 {
        match *self {
            RawAmp::Real(x) => C64::new(x, 0.0),
            RawAmp::Complex([re, im]) => C64::new(re, im),
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawBloch {
    theta: f64,
    #[serde(default)]
    phi: f64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawState {
    bloch: Option<Spanned<RawBloch>>,
    amplitudes: Option<Spanned<Vec<RawAmp>>>,
    density: Option<Spanned<Vec<Vec<RawAmp>>>>,
    method: Option<Spanned<i64>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRange {
    start: f64,
    stop: f64,
    points: usize,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSweep {
    param: Option<Spanned<String>>,
    values: Option<Spanned<Vec<f64>>>,
    range: Option<Spanned<RawRange>>,
    #[serde(default)]
    mode: Option<Spanned<String>>,
    shots: Option<Spanned<i64>>,
    #[serde(default)]
    seed: u64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawReadout {
    e0: f64,
    e1: f64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawOutput {
    csv: Option<String>,
    qasm_dir: Option<String>,
}

/// `points` evenly spaced values from `start` to `stop` inclusive.
pub fn linspace(start: f64, stop: f64, points: usize) -> Vec<f64> {
    match points {
        0 => Vec::new(),
        1 => vec![start],
        _ => (0..points)
            .map(|k| {
                if k + 1 == points {
                    stop
                } else {
                    start + (stop - start) * k as f64 / (points - 1) as f64
                }
            })
            .collect(),
    }
}

fn build(raw: RawConfig, base: &Path, at: &dyn Fn(Range<usize>, String) -> Error) -> Result<ExperimentConfig> {
    let channel_span = raw.channel.span();
    let channel_raw = raw.channel.into_inner();
    let channel = match (channel_raw.name, channel_raw.file) {
        (Some(name), None) => {
            if !CATALOG.contains(&name.get_ref().as_str()) {
                return Err(at(
                    name.span(),
                    format!("unknown channel `{}` (expected one of {})", name.get_ref(), CATALOG.join(", ")),
                ));
            }
            ChannelSpec::Catalog {
                name: name.into_inner(),
                params: channel_raw.params,
            }
        }
        (None, Some(file)) => {
            let path = base.join(file.get_ref());
            let ch = KrausChannel::load(&path).map_err(|e| at(file.span(), format!("{}: {e}", path.display())))?;
            ChannelSpec::Custom(ch)
        }
        _ => return Err(at(channel_span, "[channel] needs exactly one of `name` or `file`".into())),
    };

    let state = match raw.state {
        None => InitialState::Pure(PureState::plus()),
        Some(s) => parse_state(s, at)?,
    };

    let sweep_span = raw.sweep.span();
    let sweep = raw.sweep.into_inner();
    let mut grid_span = sweep_span.clone();
    let grid = match (sweep.values, sweep.range) {
        (Some(v), None) => {
            let span = v.span();
            grid_span = span.clone();
            let grid = v.into_inner();
            if grid.is_empty() || !is_monotone(&grid) {
                return Err(at(span, "`values` must be nonempty and strictly monotone".into()));
            }
            grid
        }
        (None, Some(r)) => {
            let span = r.span();
            grid_span = span.clone();
            let r = r.into_inner();
            let grid = linspace(r.start, r.stop, r.points);
            if grid.is_empty() || !is_monotone(&grid) {
                return Err(at(span, "`range` must give a nonempty strictly monotone grid".into()));
            }
            grid
        }
        (None, None) if matches!(channel, ChannelSpec::Custom(_)) => vec![0.0],
        _ => return Err(at(sweep_span, "[sweep] needs exactly one of `values` or `range`".into())),
    };
    let mode = match &sweep.mode {
        None => Mode::Exact,
        Some(m) => match m.get_ref().as_str() {
            "exact" => Mode::Exact,
            "sampled" => Mode::Sampled,
            other => return Err(at(m.span(), format!("mode must be `exact` or `sampled`, found `{other}`"))),
        },
    };
    let shots = match sweep.shots {
        None => 8192,
        Some(s) => {
            if *s.get_ref() < 1 {
                return Err(at(s.span(), "shots must be at least 1".into()));
            }
            *s.get_ref() as u64
        }
    };
    let param = match (sweep.param, &channel) {
        (Some(p), ChannelSpec::Custom(_)) => {
            return Err(at(p.span(), "a custom channel file has no parameter to sweep".into()))
        }
        (None, ChannelSpec::Catalog { .. }) => return Err(at(sweep_span, "[sweep] needs `param`".into())),
        (p, _) => p.map(Spanned::into_inner),
    };

    let readout = match raw.readout {
        None => None,
        Some(r) => {
            let span = r.span();
            let r = r.into_inner();
            crate::simulator::ReadoutModel::uniform(1, r.e0, r.e1).map_err(|e| at(span, e.to_string()))?;
            Some((r.e0, r.e1))
        }
    };
    let output = raw
        .output
        .map(|o| OutputPaths {
            csv: o.csv.map(|p| base.join(p)),
            qasm_dir: o.qasm_dir.map(|p| base.join(p)),
        })
        .unwrap_or_default();

    let cfg = ExperimentConfig {
        channel,
        state,
        param,
        grid,
        mode,
        shots,
        seed: sweep.seed,
        readout,
        output,
    };
    for &v in &cfg.grid {
        cfg.channel_at(v)
            .map_err(|e| at(grid_span.clone(), format!("at grid value {v}: {e}")))?;
    }
    cfg.validate().map_err(|e| match e {
        Error::Config(msg) => at(channel_span.clone(), msg),
        other => at(channel_span.clone(), other.to_string()),
    })?;
    Ok(cfg)
}

fn parse_state(s: Spanned<RawState>, at: &dyn Fn(Range<usize>, String) -> Error) -> Result<InitialState> {
    let span = s.span();
    let s = s.into_inner();
    let given = [s.bloch.is_some(), s.amplitudes.is_some(), s.density.is_some()];
    if given.iter().filter(|g| **g).count() != 1 {
        return Err(at(span, "[state] needs exactly one of `bloch`, `amplitudes` or `density`".into()));
    }
    if let (Some(m), None) = (&s.method, &s.density) {
        return Err(at(m.span(), "`method` only applies to a `density` state".into()));
    }
    if let Some(b) = s.bloch {
        let b = b.into_inner();
        return Ok(InitialState::Pure(PureState::bloch(b.theta, b.phi)));
    }
    if let Some(a) = s.amplitudes {
        let span = a.span();
        let amps: Vec<C64> = a.get_ref().iter().map(RawAmp::value).collect();
        return PureState::new(amps)
            .map(InitialState::Pure)
            .map_err(|e| at(span, e.to_string()));
    }
    let d = s.density.expect("one field is present");
    let span = d.span();
    let rows: Vec<Vec<C64>> = d.get_ref().iter().map(|r| r.iter().map(RawAmp::value).collect()).collect();
    let n = rows.len();
    if rows.iter().any(|r| r.len() != n) {
        return Err(at(span, "`density` must be a square matrix".into()));
    }
    let rho = DensityMatrix::new(ComplexMatrix::from_rows(&rows)).map_err(|e| at(span.clone(), e.to_string()))?;
    let method = match s.method {
        None => return Err(at(span, "a `density` state needs `method = 1 | 2 | 3`".into())),
        Some(m) => MixedMethod::from_index(*m.get_ref())
            .ok_or_else(|| at(m.span(), format!("method must be 1, 2 or 3, found {}", m.get_ref())))?,
    };
    Ok(InitialState::Mixed { rho, method })
}
