//! Run and sweep configuration files.
//!
//! The format is one `key=value` pair per line with dotted keys; blank lines
//! and anything after `#` are ignored. Recognised keys:
//!
//! | key | meaning | default |
//! |-----|---------|---------|
//! | `system.epsilon` | qubit transition frequency ε | `1` |
//! | `system.K` (or `system.coupling_K`) | exchange strength K | required |
//! | `bath.kind` | `lorentzian`, `ohmic`, `markovian` or `tabulated` | required |
//! | `bath.gamma0` | Lorentzian / Markovian coupling rate γ₀ | `1` (Lorentzian), required (Markovian) |
//! | `bath.gamma`, `bath.gamma_ratio` | Lorentzian width γ, or γ/γ₀ | one required |
//! | `bath.omega0` | Ohmic ω₀ | `ε/2` |
//! | `bath.omega_c`, `bath.cutoff_ratio` | Ohmic cutoff ω_c, or ω_c/ω₀ | one required |
//! | `bath.file` | two-column `ω J(ω)` table, relative to the config file | required (tabulated) |
//! | `bath.epsilon` | resonance used for tabulated detunings | `system.epsilon` |
//! | `initial` | `bell_psi_minus`, `ket10`, `ket01`, `ket11`, `ket00`, `custom` | required |
//! | `initial.re`, `initial.im` | 16 comma-separated row-major entries for `custom` | `im` = 0 |
//! | `horizon.t_end` | last sample time, in `time.unit` | required |
//! | `horizon.samples` | number of uniformly spaced samples including `t = 0` | `101` |
//! | `time.unit` | `gamma0`, `omega0`, `K` or `absolute` | natural unit of the bath |
//! | `outputs` | comma list of `concurrence`, `populations`, `purity`, `density` | `concurrence` |
//! | `validate` | cross-check against the master-equation integrator | `false` |
//! | `validate.tolerance` | largest accepted element deviation | `1e-6` |
//! | `sweep.axis` | key to vary in a sweep | required for sweeps |
//! | `sweep.values` / `sweep.linspace` / `sweep.logspace` | explicit list, or `start,stop,count` | exactly one |
//! | `sweep.stem` | output file stem | `sweep` |
//! | `sweep.column` | column plotted by the generated script | first observable |
//!
//! `debug.g_scale` multiplies the correlation functions of the closed-form
//! path only. It exists to check that validation catches a corrupted solution.

use std::fmt;
use std::path::{Path, PathBuf};

use spinpair::propagator::INPUT_TOLERANCE;
use spinpair::{
    bell_psi_minus, check_physical, BasisState, BathModel, Complex64, DensityMatrix4, SystemParams,
    TabulatedSpectrum,
};

const KNOWN_KEYS: &[&str] = &[
    "system.epsilon",
    "system.K",
    "bath.kind",
    "bath.gamma0",
    "bath.gamma",
    "bath.gamma_ratio",
    "bath.omega0",
    "bath.omega_c",
    "bath.cutoff_ratio",
    "bath.file",
    "bath.epsilon",
    "initial",
    "initial.re",
    "initial.im",
    "horizon.t_end",
    "horizon.samples",
    "time.unit",
    "outputs",
    "validate",
    "validate.tolerance",
    "debug.g_scale",
    "sweep.axis",
    "sweep.values",
    "sweep.linspace",
    "sweep.logspace",
    "sweep.stem",
    "sweep.column",
];

/// Long-form spellings accepted for some keys.
fn canonical(key: &str) -> &str {
    match key {
        "system.coupling_K" => "system.K",
        other => other,
    }
}

/// A configuration problem, located by line and key where possible.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError {
    pub line: Option<usize>,
    pub key: Option<String>,
    pub message: String,
}

impl ConfigError {
    fn at(entry: &Entry, message: impl Into<String>) -> Self {
        Self {
            line: entry.line,
            key: Some(entry.key.clone()),
            message: message.into(),
        }
    }

    fn missing(key: &str) -> Self {
        Self {
            line: None,
            key: Some(key.to_string()),
            message: "required key is missing".into(),
        }
    }

    fn general(message: impl Into<String>) -> Self {
        Self {
            line: None,
            key: None,
            message: message.into(),
        }
    }
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (&self.line, &self.key) {
            (Some(line), Some(key)) => write!(f, "line {line} ({key}): {}", self.message),
            (Some(line), None) => write!(f, "line {line}: {}", self.message),
            (None, Some(key)) => write!(f, "{key}: {}", self.message),
            (None, None) => f.write_str(&self.message),
        }
    }
}

impl std::error::Error for ConfigError {}

#[derive(Debug, Clone, PartialEq)]
struct Entry {
    key: String,
    value: String,
    /// `None` for values set programmatically.
    line: Option<usize>,
}

/// Parsed `key=value` pairs in file order.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Document {
    entries: Vec<Entry>,
}

impl Document {
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut doc = Document::default();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let Some((key, value)) = content.split_once('=') else {
                return Err(ConfigError {
                    line: Some(line),
                    key: None,
                    message: format!("expected key=value, found {content:?}"),
                });
            };
            let entry = Entry {
                key: canonical(key.trim()).to_string(),
                value: value.trim().to_string(),
                line: Some(line),
            };
            if !KNOWN_KEYS.contains(&entry.key.as_str()) {
                return Err(ConfigError::at(&entry, "unknown key"));
            }
            if let Some(first) = doc.entry(&entry.key) {
                let first_line = first.line.unwrap_or(0);
                return Err(ConfigError::at(&entry, format!("duplicate key, first set on line {first_line}")));
            }
            doc.entries.push(entry);
        }
        Ok(doc)
    }

    fn entry(&self, key: &str) -> Option<&Entry> {
        self.entries.iter().find(|e| e.key == key)
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entry(key).map(|e| e.value.as_str())
    }

    /// Sets or replaces `key`, which must be a recognised key.
    pub fn set(&mut self, key: &str, value: impl Into<String>) -> Result<(), ConfigError> {
        let key = canonical(key);
        if !KNOWN_KEYS.contains(&key) {
            return Err(ConfigError {
                line: None,
                key: Some(key.to_string()),
                message: "unknown key".into(),
            });
        }
        let value = value.into();
        match self.entries.iter_mut().find(|e| e.key == key) {
            Some(e) => {
                e.value = value;
                e.line = None;
            }
            None => self.entries.push(Entry {
                key: key.to_string(),
                value,
                line: None,
            }),
        }
        Ok(())
    }

    fn number(&self, key: &str) -> Result<Option<f64>, ConfigError> {
        let Some(entry) = self.entry(key) else {
            return Ok(None);
        };
        parse_number(entry, &entry.value).map(Some)
    }

    fn required_number(&self, key: &str) -> Result<f64, ConfigError> {
        self.number(key)?.ok_or_else(|| ConfigError::missing(key))
    }

    fn required(&self, key: &str) -> Result<&Entry, ConfigError> {
        self.entry(key).ok_or_else(|| ConfigError::missing(key))
    }
}

fn parse_number(entry: &Entry, text: &str) -> Result<f64, ConfigError> {
    match text.trim().parse::<f64>() {
        Ok(x) if x.is_finite() => Ok(x),
        _ => Err(ConfigError::at(entry, format!("expected a finite number, found {text:?}"))),
    }
}

fn parse_list(entry: &Entry) -> Result<Vec<f64>, ConfigError> {
    entry
        .value
        .split(',')
        .map(|part| parse_number(entry, part))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InitialState {
    BellPsiMinus,
    Ket10,
    Ket01,
    Ket11,
    Ket00,
    Custom,
}

impl InitialState {
    fn parse(entry: &Entry) -> Result<Self, ConfigError> {
        Ok(match entry.value.as_str() {
            "bell_psi_minus" => Self::BellPsiMinus,
            "ket10" => Self::Ket10,
            "ket01" => Self::Ket01,
            "ket11" => Self::Ket11,
            "ket00" => Self::Ket00,
            "custom" => Self::Custom,
            other => {
                return Err(ConfigError::at(
                    entry,
                    format!("unknown initial state {other:?} (bell_psi_minus, ket10, ket01, ket11, ket00, custom)"),
                ))
            }
        })
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::BellPsiMinus => "bell_psi_minus",
            Self::Ket10 => "ket10",
            Self::Ket01 => "ket01",
            Self::Ket11 => "ket11",
            Self::Ket00 => "ket00",
            Self::Custom => "custom",
        }
    }
}

/// Unit in which times are read from the config and written to the CSV.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TimeUnit {
    Gamma0,
    Omega0,
    K,
    Absolute,
}

impl TimeUnit {
    fn parse(entry: &Entry) -> Result<Self, ConfigError> {
        Ok(match entry.value.as_str() {
            "gamma0" => Self::Gamma0,
            "omega0" => Self::Omega0,
            "K" => Self::K,
            "absolute" => Self::Absolute,
            other => {
                return Err(ConfigError::at(
                    entry,
                    format!("unknown time unit {other:?} (gamma0, omega0, K, absolute)"),
                ))
            }
        })
    }

    /// Label of the dimensionless time column.
    pub fn label(self) -> &'static str {
        match self {
            Self::Gamma0 => "gamma0*t",
            Self::Omega0 => "omega0*t",
            Self::K => "K*t",
            Self::Absolute => "t",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Observable {
    Concurrence,
    Populations,
    Purity,
    Density,
}

impl Observable {
    fn parse(entry: &Entry, name: &str) -> Result<Self, ConfigError> {
        Ok(match name.trim() {
            "concurrence" => Self::Concurrence,
            "populations" => Self::Populations,
            "purity" => Self::Purity,
            "density" => Self::Density,
            other => {
                return Err(ConfigError::at(
                    entry,
                    format!("unknown observable {other:?} (concurrence, populations, purity, density)"),
                ))
            }
        })
    }

    /// CSV column names contributed by this observable.
    pub fn columns(self) -> Vec<String> {
        match self {
            Self::Concurrence => vec!["concurrence".into()],
            Self::Purity => vec!["purity".into()],
            Self::Populations => BasisState::ALL.iter().map(|b| format!("P{}", b.label())).collect(),
            Self::Density => {
                let mut cols = Vec::with_capacity(32);
                for i in 1..=4 {
                    for j in 1..=4 {
                        cols.push(format!("rho{i}{j}_re"));
                        cols.push(format!("rho{i}{j}_im"));
                    }
                }
                cols
            }
        }
    }
}

/// One fully validated run.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub params: SystemParams,
    pub bath: BathModel,
    pub initial: InitialState,
    pub rho0: DensityMatrix4,
    /// Last sample, in `unit`.
    pub t_end: f64,
    pub samples: usize,
    pub unit: TimeUnit,
    /// Physical time per unit of the CSV time column.
    pub time_scale: f64,
    pub outputs: Vec<Observable>,
    pub validate: bool,
    pub tolerance: f64,
    pub g_scale: f64,
}

impl RunConfig {
    /// Reads a config file; tabulated spectra resolve relative to its directory.
    pub fn load(path: &Path) -> Result<Self, crate::CliError> {
        Self::load_with(path, &[])
    }

    /// Like [`RunConfig::load`], with `overrides` replacing file values.
    pub fn load_with(path: &Path, overrides: &[(&str, String)]) -> Result<Self, crate::CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| crate::CliError::io(path, e))?;
        let mut doc = Document::parse(&text)?;
        for (key, value) in overrides {
            doc.set(key, value.clone())?;
        }
        Ok(Self::from_document(&doc, path.parent())?)
    }

    pub fn from_text(text: &str) -> Result<Self, ConfigError> {
        Self::from_document(&Document::parse(text)?, None)
    }

    pub fn from_document(doc: &Document, base_dir: Option<&Path>) -> Result<Self, ConfigError> {
        let epsilon = doc.number("system.epsilon")?.unwrap_or(1.0);
        let k = doc.required_number("system.K")?;
        let params = SystemParams::new(epsilon, k).map_err(|e| ConfigError {
            line: doc.entry("system.K").and_then(|e| e.line),
            key: Some("system".into()),
            message: e.to_string(),
        })?;

        let (bath, natural_unit) = parse_bath(doc, epsilon, base_dir)?;

        let initial_entry = doc.required("initial")?;
        let initial = InitialState::parse(initial_entry)?;
        let rho0 = initial_density(doc, initial)?;

        let t_end = doc.required_number("horizon.t_end")?;
        if t_end <= 0.0 {
            return Err(ConfigError::at(doc.entry("horizon.t_end").unwrap(), "must be > 0"));
        }
        let samples = match doc.entry("horizon.samples") {
            None => 101,
            Some(e) => parse_count(e)?,
        };
        if samples < 2 {
            return Err(ConfigError::at(doc.entry("horizon.samples").unwrap(), "need at least 2 samples"));
        }

        let unit = match doc.entry("time.unit") {
            Some(e) => TimeUnit::parse(e)?,
            None => natural_unit,
        };
        let rate = match unit {
            TimeUnit::Gamma0 => match &bath {
                BathModel::Lorentzian { gamma0, .. } | BathModel::MarkovianFlat { gamma0 } => *gamma0,
                _ => return Err(unit_mismatch(doc, "gamma0 needs a lorentzian or markovian bath")),
            },
            TimeUnit::Omega0 => match &bath {
                BathModel::OhmicLorentzDrude { omega0, .. } => *omega0,
                _ => return Err(unit_mismatch(doc, "omega0 needs an ohmic bath")),
            },
            TimeUnit::K => k,
            TimeUnit::Absolute => 1.0,
        };
        if rate <= 0.0 {
            return Err(unit_mismatch(doc, "the chosen time unit has a zero rate; use time.unit=absolute"));
        }

        let outputs = match doc.entry("outputs") {
            None => vec![Observable::Concurrence],
            Some(e) => {
                let mut list = Vec::new();
                for name in e.value.split(',') {
                    let obs = Observable::parse(e, name)?;
                    if list.contains(&obs) {
                        return Err(ConfigError::at(e, format!("observable {:?} listed twice", name.trim())));
                    }
                    list.push(obs);
                }
                list
            }
        };

        let validate = match doc.entry("validate") {
            None => false,
            Some(e) => match e.value.as_str() {
                "true" => true,
                "false" => false,
                other => return Err(ConfigError::at(e, format!("expected true or false, found {other:?}"))),
            },
        };
        let tolerance = doc.number("validate.tolerance")?.unwrap_or(1e-6);
        if tolerance <= 0.0 {
            return Err(ConfigError::at(doc.entry("validate.tolerance").unwrap(), "must be > 0"));
        }
        let g_scale = doc.number("debug.g_scale")?.unwrap_or(1.0);

        Ok(Self {
            params,
            bath,
            initial,
            rho0,
            t_end,
            samples,
            unit,
            time_scale: 1.0 / rate,
            outputs,
            validate,
            tolerance,
            g_scale,
        })
    }

    /// Sample times in the CSV unit, `t_end·k/(samples − 1)`.
    pub fn scaled_times(&self) -> Vec<f64> {
        let n = self.samples - 1;
        (0..=n).map(|k| self.t_end * k as f64 / n as f64).collect()
    }

    pub fn physical_times(&self) -> Vec<f64> {
        self.scaled_times().iter().map(|t| t * self.time_scale).collect()
    }

    pub fn columns(&self) -> Vec<String> {
        self.outputs.iter().flat_map(|o| o.columns()).collect()
    }
}

fn unit_mismatch(doc: &Document, message: &str) -> ConfigError {
    match doc.entry("time.unit") {
        Some(e) => ConfigError::at(e, message),
        None => ConfigError {
            line: None,
            key: Some("time.unit".into()),
            message: message.into(),
        },
    }
}

fn parse_count(entry: &Entry) -> Result<usize, ConfigError> {
    entry
        .value
        .parse::<usize>()
        .map_err(|_| ConfigError::at(entry, format!("expected a non-negative integer, found {:?}", entry.value)))
}

fn parse_bath(doc: &Document, epsilon: f64, base_dir: Option<&Path>) -> Result<(BathModel, TimeUnit), ConfigError> {
    let kind = doc.required("bath.kind")?;
    let model_error = |e: spinpair::Error| ConfigError::at(kind, e.to_string());
    let exclusive = |a: &str, b: &str| -> Result<f64, ConfigError> {
        match (doc.number(a)?, doc.number(b)?) {
            (Some(_), Some(_)) => Err(ConfigError::at(doc.entry(b).unwrap(), format!("conflicts with {a}"))),
            (Some(x), None) | (None, Some(x)) => Ok(x),
            (None, None) => Err(ConfigError::at(kind, format!("needs {a} or {b}"))),
        }
    };
    match kind.value.as_str() {
        "lorentzian" => {
            let gamma0 = doc.number("bath.gamma0")?.unwrap_or(1.0);
            let gamma = match doc.number("bath.gamma")? {
                Some(_) => exclusive("bath.gamma", "bath.gamma_ratio")?,
                None => exclusive("bath.gamma", "bath.gamma_ratio")? * gamma0,
            };
            Ok((BathModel::lorentzian(gamma, gamma0).map_err(model_error)?, TimeUnit::Gamma0))
        }
        "ohmic" => {
            let omega0 = doc.number("bath.omega0")?.unwrap_or(0.5 * epsilon);
            let omega_c = match doc.number("bath.omega_c")? {
                Some(_) => exclusive("bath.omega_c", "bath.cutoff_ratio")?,
                None => exclusive("bath.omega_c", "bath.cutoff_ratio")? * omega0,
            };
            Ok((BathModel::ohmic(omega_c, omega0).map_err(model_error)?, TimeUnit::Omega0))
        }
        "markovian" => {
            let gamma0 = doc.required_number("bath.gamma0")?;
            Ok((BathModel::markovian(gamma0).map_err(model_error)?, TimeUnit::Gamma0))
        }
        "tabulated" => {
            let file = doc.required("bath.file")?;
            let path = match base_dir {
                Some(dir) => dir.join(&file.value),
                None => PathBuf::from(&file.value),
            };
            let text = std::fs::read_to_string(&path)
                .map_err(|e| ConfigError::at(file, format!("cannot read {}: {e}", path.display())))?;
            let resonance = doc.number("bath.epsilon")?.unwrap_or(epsilon);
            let samples = TabulatedSpectrum::parse_samples(&text, resonance)
                .map_err(|e| ConfigError::at(file, format!("{}: {e}", path.display())))?;
            let spectrum = TabulatedSpectrum::new(samples, resonance)
                .map_err(|e| ConfigError::at(file, format!("{}: {e}", path.display())))?;
            Ok((BathModel::Tabulated(spectrum), TimeUnit::Absolute))
        }
        other => Err(ConfigError::at(
            kind,
            format!("unknown bath kind {other:?} (lorentzian, ohmic, markovian, tabulated)"),
        )),
    }
}

fn initial_density(doc: &Document, initial: InitialState) -> Result<DensityMatrix4, ConfigError> {
    let basis = |b| Ok(DensityMatrix4::basis_projector(b));
    match initial {
        InitialState::BellPsiMinus => Ok(bell_psi_minus()),
        InitialState::Ket10 => basis(BasisState::S10),
        InitialState::Ket01 => basis(BasisState::S01),
        InitialState::Ket11 => basis(BasisState::S11),
        InitialState::Ket00 => basis(BasisState::S00),
        InitialState::Custom => {
            let re_entry = doc.required("initial.re")?;
            let re = parse_list(re_entry)?;
            let im = match doc.entry("initial.im") {
                Some(e) => parse_list(e)?,
                None => vec![0.0; 16],
            };
            if re.len() != 16 || im.len() != 16 {
                return Err(ConfigError::at(re_entry, "custom states need 16 real and 16 imaginary parts"));
            }
            let rows = std::array::from_fn(|i| std::array::from_fn(|j| Complex64::new(re[4 * i + j], im[4 * i + j])));
            let rho = DensityMatrix4::from_rows(rows);
            let report = check_physical(&rho);
            if !report.passes(INPUT_TOLERANCE) {
                return Err(ConfigError::at(
                    re_entry,
                    format!(
                        "not a physical state (trace error {:e}, hermiticity error {:e}, min eigenvalue {:e})",
                        report.trace_error, report.hermiticity_error, report.min_eigenvalue
                    ),
                ));
            }
            Ok(rho)
        }
    }
}

/// Values taken by the sweep axis.
#[derive(Debug, Clone, PartialEq)]
pub enum SweepValues {
    List(Vec<String>),
    Linspace { start: f64, stop: f64, count: usize },
    Logspace { start: f64, stop: f64, count: usize },
}

impl SweepValues {
    /// Axis values as they are substituted into the config and file names.
    pub fn render(&self) -> Vec<String> {
        match self {
            SweepValues::List(v) => v.clone(),
            SweepValues::Linspace { start, stop, count } => (0..*count)
                .map(|k| {
                    let x = if *count == 1 {
                        *start
                    } else {
                        start + (stop - start) * k as f64 / (*count - 1) as f64
                    };
                    format!("{x}")
                })
                .collect(),
            SweepValues::Logspace { start, stop, count } => (0..*count)
                .map(|k| {
                    let x = if *count == 1 {
                        *start
                    } else {
                        start * (stop / start).powf(k as f64 / (*count - 1) as f64)
                    };
                    format!("{x}")
                })
                .collect(),
        }
    }
}

/// A base run plus one axis to vary.
#[derive(Debug, Clone)]
pub struct SweepConfig {
    pub base: Document,
    pub base_dir: Option<PathBuf>,
    pub axis: String,
    pub values: SweepValues,
    pub stem: String,
    pub column: Option<String>,
}

impl SweepConfig {
    pub fn load(path: &Path) -> Result<Self, crate::CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| crate::CliError::io(path, e))?;
        let mut sweep = Self::from_text(&text)?;
        sweep.base_dir = path.parent().map(Path::to_path_buf);
        Ok(sweep)
    }

    pub fn from_text(text: &str) -> Result<Self, ConfigError> {
        Self::from_document(Document::parse(text)?)
    }

    pub fn from_document(doc: Document) -> Result<Self, ConfigError> {
        let axis_entry = doc.required("sweep.axis")?;
        let axis = canonical(&axis_entry.value).to_string();
        if !KNOWN_KEYS.contains(&axis.as_str()) || axis.starts_with("sweep.") {
            return Err(ConfigError::at(axis_entry, format!("{axis:?} is not a sweepable parameter")));
        }
        let descriptors: Vec<&Entry> = ["sweep.values", "sweep.linspace", "sweep.logspace"]
            .iter()
            .filter_map(|k| doc.entry(k))
            .collect();
        let entry = match descriptors.as_slice() {
            [one] => *one,
            [] => return Err(ConfigError::general("sweep needs one of sweep.values, sweep.linspace, sweep.logspace")),
            [_, second, ..] => return Err(ConfigError::at(second, "only one of sweep.values, sweep.linspace, sweep.logspace may be set")),
        };
        let range = |entry: &Entry| -> Result<(f64, f64, usize), ConfigError> {
            let parts: Vec<&str> = entry.value.split(',').map(str::trim).collect();
            let [a, b, n] = parts.as_slice() else {
                return Err(ConfigError::at(entry, "expected start,stop,count"));
            };
            let count = n
                .parse::<usize>()
                .ok()
                .filter(|&c| c > 0)
                .ok_or_else(|| ConfigError::at(entry, format!("count must be a positive integer, found {n:?}")))?;
            Ok((parse_number(entry, a)?, parse_number(entry, b)?, count))
        };
        let values = match entry.key.as_str() {
            "sweep.values" => {
                let list: Vec<String> = entry.value.split(',').map(|s| s.trim().to_string()).collect();
                if list.iter().any(String::is_empty) {
                    return Err(ConfigError::at(entry, "empty value in list"));
                }
                SweepValues::List(list)
            }
            "sweep.linspace" => {
                let (start, stop, count) = range(entry)?;
                SweepValues::Linspace { start, stop, count }
            }
            _ => {
                let (start, stop, count) = range(entry)?;
                if start <= 0.0 || stop <= 0.0 {
                    return Err(ConfigError::at(entry, "logspace endpoints must be > 0"));
                }
                SweepValues::Logspace { start, stop, count }
            }
        };
        let stem = doc.get("sweep.stem").unwrap_or("sweep").to_string();
        if stem.is_empty() || stem.contains(['/', '\\']) {
            return Err(ConfigError::at(doc.entry("sweep.stem").unwrap(), "stem must be a plain file name"));
        }
        let column = doc.get("sweep.column").map(str::to_string);
        Ok(Self {
            base: doc,
            base_dir: None,
            axis,
            values,
            stem,
            column,
        })
    }

    /// The run for one axis value.
    pub fn member(&self, value: &str) -> Result<RunConfig, ConfigError> {
        let mut doc = self.base.clone();
        doc.set(&self.axis, value)?;
        RunConfig::from_document(&doc, self.base_dir.as_deref())
    }

    /// Overrides a key of the base run.
    pub fn set(&mut self, key: &str, value: impl Into<String>) -> Result<(), ConfigError> {
        self.base.set(key, value)
    }
}
