//! Scenario files.
//!
//! A scenario is a TOML document with the sections `[field]`,
//! `[controller]`, `[initial]`, `[sde]`, `[metrics]`, `[monte_carlo]` and
//! `[averaging]`, plus a top-level `tag`. Unknown keys, wrong types and
//! invalid values are all collected and reported together.
//!
//! ```toml
//! tag = "circular-small-vc"
//!
//! [field]
//! type = "circular"        # circular | elliptical | rosenbrock
//! f_star = 0.0
//! source = [0.0, 0.0]
//! q_r = 1.5                # elliptical: q_r and q_p, or q_x and q_y
//!
//! [controller]
//! a = 2.0
//! g = 1.0
//! eps = 0.01
//! b = 2.0
//! c = 500.0
//! h = 2.0
//! v_c = 0.0005
//! r = 0.1
//!
//! [initial]
//! center = [1.0, 1.0]
//! theta = -1.5707963267948966
//! # e = 0.0                # default: sensor reading at t = 0
//! # eta = 0.0
//!
//! [sde]
//! t_end = 100.0
//! seed = 1
//! # dt = 1e-4              # default: eps / 100
//! # record_stride = 10
//! # noise = "exact"        # exact | band_limited
//! # t_hold = 1e-3          # band_limited only, default 10 dt
//!
//! [metrics]
//! # window_fraction = 0.2
//! # delta = 0.1
//!
//! [monte_carlo]
//! # runs = 20
//!
//! [averaging]
//! # eps = [0.01, 0.001]
//! # paths = 50
//! # t_end = 40.0
//! # grid = 0.01
//! ```

use std::path::Path;

use serde::Serialize;
use toml::{Table, Value};

use crate::closed_loop::{ControllerParams, VehicleState};
use crate::error::{ConfigIssue, Result, SeekError};
use crate::field::{qrqp_from_qxqy, ScalarField, Vec2};
use crate::sde::{NoiseMode, SdeConfig};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum FieldSpec {
    Circular { f_star: f64, source: Vec2, q_r: f64 },
    Elliptical { f_star: f64, source: Vec2, q_r: f64, q_p: f64 },
    Rosenbrock,
}

impl FieldSpec {
    pub fn build(&self) -> Result<ScalarField> {
        match *self {
            FieldSpec::Circular { f_star, source, q_r } => ScalarField::circular(f_star, source, q_r),
            FieldSpec::Elliptical { f_star, source, q_r, q_p } => ScalarField::elliptical(f_star, source, q_r, q_p),
            FieldSpec::Rosenbrock => Ok(ScalarField::rosenbrock()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct InitialSpec {
    pub center: Vec2,
    pub theta: f64,
    /// `None`: the sensor reading at `t = 0`.
    pub e: Option<f64>,
    pub eta: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MetricsConfig {
    /// Trailing window as a fraction of the horizon.
    pub window_fraction: f64,
    /// Radius of the ball for the time-to-ball metric.
    pub delta: f64,
}

impl Default for MetricsConfig {
    fn default() -> Self {
        Self { window_fraction: 0.2, delta: 0.1 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AveragingConfig {
    pub eps: Vec<f64>,
    pub paths: usize,
    pub t_end: f64,
    /// Spacing of the comparison grid.
    pub grid: f64,
}

impl Default for AveragingConfig {
    fn default() -> Self {
        Self { eps: vec![0.01, 0.001], paths: 50, t_end: 40.0, grid: 0.01 }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Scenario {
    pub tag: String,
    pub field: FieldSpec,
    pub controller: ControllerParams,
    pub initial: InitialSpec,
    pub sde: SdeConfig,
    /// Whether `dt` was given explicitly; otherwise it follows `eps / 100`.
    pub dt_explicit: bool,
    pub metrics: MetricsConfig,
    pub runs: usize,
    pub averaging: AveragingConfig,
}

impl Scenario {
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let text = std::fs::read_to_string(path.as_ref())
            .map_err(|e| SeekError::Io(format!("{}: {e}", path.as_ref().display())))?;
        Self::from_toml_str(&text)
    }

    pub fn from_toml_str(text: &str) -> Result<Self> {
        let root: Table = text.parse().map_err(|e: toml::de::Error| {
            SeekError::Config(vec![ConfigIssue { key: "<document>".into(), message: e.message().to_string() }])
        })?;
        parse(root)
    }

    pub fn field(&self) -> Result<ScalarField> {
        self.field.build()
    }

    pub fn initial_state(&self, field: &ScalarField) -> VehicleState {
        let mut s = VehicleState::initial(field, &self.controller, self.initial.center, self.initial.theta);
        s.eta = self.initial.eta;
        if let Some(e) = self.initial.e {
            s.e = e;
        }
        s
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.sde.seed = seed;
        self
    }

    /// Same scenario at another `eps`, with `dt` rescaled unless it was explicit.
    pub fn with_eps(mut self, eps: f64) -> Self {
        self.controller = self.controller.with_eps(eps);
        if !self.dt_explicit {
            let t_hold_steps = match self.sde.noise_mode {
                NoiseMode::BandLimited { t_hold } => Some(t_hold / self.sde.dt),
                NoiseMode::ExactIncrement => None,
            };
            self.sde.dt = eps / 100.0;
            if let Some(k) = t_hold_steps {
                self.sde.noise_mode = NoiseMode::BandLimited { t_hold: k * self.sde.dt };
            }
        }
        self
    }
}

struct Section {
    name: String,
    table: Table,
    issues: Vec<ConfigIssue>,
}

impl Section {
    fn new(name: &str, table: Table) -> Self {
        Self { name: name.to_string(), table, issues: Vec::new() }
    }

    fn key(&self, k: &str) -> String {
        if self.name.is_empty() {
            k.to_string()
        } else {
            format!("{}.{k}", self.name)
        }
    }

    fn issue(&mut self, k: &str, msg: impl Into<String>) {
        let key = self.key(k);
        self.issues.push(ConfigIssue { key, message: msg.into() });
    }

    fn f64(&mut self, k: &str) -> Option<f64> {
        match self.table.remove(k)? {
            Value::Float(x) => Some(x),
            Value::Integer(i) => Some(i as f64),
            other => {
                self.issue(k, format!("expected a number, got {}", other.type_str()));
                None
            }
        }
    }

    fn f64_req(&mut self, k: &str) -> Option<f64> {
        if !self.table.contains_key(k) {
            self.issue(k, "missing required key");
            return None;
        }
        self.f64(k)
    }

    fn uint(&mut self, k: &str) -> Option<u64> {
        match self.table.remove(k)? {
            Value::Integer(i) if i >= 0 => Some(i as u64),
            other => {
                self.issue(k, format!("expected a non-negative integer, got {other}"));
                None
            }
        }
    }

    fn string(&mut self, k: &str) -> Option<String> {
        match self.table.remove(k)? {
            Value::String(s) => Some(s),
            other => {
                self.issue(k, format!("expected a string, got {}", other.type_str()));
                None
            }
        }
    }

    fn f64_list(&mut self, k: &str) -> Option<Vec<f64>> {
        let v = self.table.remove(k)?;
        let out = match &v {
            Value::Array(a) => a
                .iter()
                .map(|x| match x {
                    Value::Float(f) => Some(*f),
                    Value::Integer(i) => Some(*i as f64),
                    _ => None,
                })
                .collect::<Option<Vec<f64>>>(),
            _ => None,
        };
        if out.is_none() {
            self.issue(k, format!("expected an array of numbers, got {v}"));
        }
        out
    }

    fn vec2(&mut self, k: &str) -> Option<Vec2> {
        let v = self.f64_list(k)?;
        if v.len() != 2 {
            self.issue(k, format!("expected 2 numbers, got {}", v.len()));
            return None;
        }
        Some([v[0], v[1]])
    }

    fn sub(&mut self, k: &str, required: bool) -> Option<Section> {
        let name = self.key(k);
        match self.table.remove(k) {
            Some(Value::Table(t)) => Some(Section::new(&name, t)),
            Some(other) => {
                self.issue(k, format!("expected a table, got {}", other.type_str()));
                None
            }
            None if required => {
                self.issue(k, "missing required section");
                None
            }
            None => Some(Section::new(&name, Table::new())),
        }
    }

    fn finish(mut self) -> Vec<ConfigIssue> {
        let keys: Vec<String> = self.table.keys().cloned().collect();
        for k in keys {
            self.issue(&k, "unknown key");
        }
        self.issues
    }
}

fn parse_field(s: &mut Section) -> Option<FieldSpec> {
    let kind = s.string("type");
    let spec = match kind.as_deref() {
        Some("circular") => {
            let f_star = s.f64("f_star").unwrap_or(0.0);
            let source = s.vec2("source").unwrap_or([0.0, 0.0]);
            Some(FieldSpec::Circular { f_star, source, q_r: s.f64_req("q_r")? })
        }
        Some("elliptical") => {
            let f_star = s.f64("f_star").unwrap_or(0.0);
            let source = s.vec2("source").unwrap_or([0.0, 0.0]);
            let (qr, qp, qx, qy) = (s.f64("q_r"), s.f64("q_p"), s.f64("q_x"), s.f64("q_y"));
            let (q_r, q_p) = match (qr, qp, qx, qy) {
                (Some(r), Some(p), None, None) => (r, p),
                (None, None, Some(x), Some(y)) => match qrqp_from_qxqy(x, y) {
                    Ok(v) => v,
                    Err(e) => {
                        s.issue("q_x", e.to_string());
                        return None;
                    }
                },
                _ => {
                    s.issue("q_r", "give either q_r and q_p, or q_x and q_y");
                    return None;
                }
            };
            Some(FieldSpec::Elliptical { f_star, source, q_r, q_p })
        }
        Some("rosenbrock") => Some(FieldSpec::Rosenbrock),
        Some(other) => {
            s.issue("type", format!("unknown field type {other:?}"));
            None
        }
        None => {
            s.issue("type", "missing required key");
            None
        }
    }?;
    if let Err(e) = spec.build() {
        s.issue("type", e.to_string());
        return None;
    }
    Some(spec)
}

fn parse(root: Table) -> Result<Scenario> {
    let mut top = Section::new("", root);
    let mut issues = Vec::new();
    let tag = top.string("tag").unwrap_or_else(|| "scenario".into());

    let field = top.sub("field", true).and_then(|mut s| {
        let f = parse_field(&mut s);
        issues.extend(s.finish());
        f
    });

    let controller = top.sub("controller", true).and_then(|mut s| {
        let vals: Vec<Option<f64>> = ["a", "g", "eps", "b", "c", "h", "v_c", "r"].iter().map(|k| s.f64_req(k)).collect();
        let p = match vals[..] {
            [Some(a), Some(g), Some(eps), Some(b), Some(c), Some(h), Some(v_c), Some(r)] => {
                let p = ControllerParams { a, g, eps, b, c, h, v_c, r };
                match p.validate() {
                    Ok(()) => Some(p),
                    Err(e) => {
                        s.issue("", e.to_string());
                        None
                    }
                }
            }
            _ => None,
        };
        issues.extend(s.finish());
        p
    });

    let initial = top.sub("initial", true).and_then(|mut s| {
        let center = s.vec2("center");
        if center.is_none() && !s.issues.iter().any(|i| i.key.ends_with("center")) {
            s.issue("center", "missing required key");
        }
        let theta = s.f64("theta").unwrap_or(0.0);
        let e = s.f64("e");
        let eta = s.f64("eta").unwrap_or(0.0);
        issues.extend(s.finish());
        Some(InitialSpec { center: center?, theta, e, eta })
    });

    let sde = top.sub("sde", true).and_then(|mut s| {
        let t_end = s.f64_req("t_end");
        let seed = s.uint("seed").unwrap_or(0);
        let dt = s.f64("dt");
        let stride = s.uint("record_stride").unwrap_or(10) as usize;
        let noise = s.string("noise").unwrap_or_else(|| "exact".into());
        let t_hold = s.f64("t_hold");
        let out = match (t_end, &controller) {
            (Some(t_end), Some(p)) => {
                let dt_val = dt.unwrap_or(p.eps / 100.0);
                let noise_mode = match noise.as_str() {
                    "exact" => Some(NoiseMode::ExactIncrement),
                    "band_limited" => Some(NoiseMode::BandLimited { t_hold: t_hold.unwrap_or(10.0 * dt_val) }),
                    other => {
                        s.issue("noise", format!("unknown noise mode {other:?}"));
                        None
                    }
                };
                noise_mode.and_then(|noise_mode| {
                    let cfg = SdeConfig { dt: dt_val, t_end, seed, record_stride: stride, noise_mode };
                    match cfg.validate(p.eps).and_then(|_| crate::sde::WienerStream::new(0, 0, dt_val, noise_mode)) {
                        Ok(_) => Some((cfg, dt.is_some())),
                        Err(e) => {
                            s.issue("", e.to_string());
                            None
                        }
                    }
                })
            }
            _ => None,
        };
        issues.extend(s.finish());
        out
    });

    let metrics = top.sub("metrics", false).and_then(|mut s| {
        let d = MetricsConfig::default();
        let m = MetricsConfig {
            window_fraction: s.f64("window_fraction").unwrap_or(d.window_fraction),
            delta: s.f64("delta").unwrap_or(d.delta),
        };
        if !(m.window_fraction > 0.0 && m.window_fraction <= 1.0) {
            s.issue("window_fraction", "must lie in (0, 1]");
        }
        if !(m.delta > 0.0) {
            s.issue("delta", "must be positive");
        }
        issues.extend(s.finish());
        Some(m)
    });

    let runs = top.sub("monte_carlo", false).and_then(|mut s| {
        let n = s.uint("runs").unwrap_or(20) as usize;
        if n == 0 {
            s.issue("runs", "must be at least 1");
        }
        issues.extend(s.finish());
        Some(n)
    });

    let averaging = top.sub("averaging", false).and_then(|mut s| {
        let d = AveragingConfig::default();
        let a = AveragingConfig {
            eps: s.f64_list("eps").unwrap_or(d.eps),
            paths: s.uint("paths").map(|n| n as usize).unwrap_or(d.paths),
            t_end: s.f64("t_end").unwrap_or(d.t_end),
            grid: s.f64("grid").unwrap_or(d.grid),
        };
        if a.eps.is_empty() || a.eps.iter().any(|e| !(*e > 0.0)) {
            s.issue("eps", "must be a non-empty list of positive values");
        }
        if a.paths == 0 {
            s.issue("paths", "must be at least 1");
        }
        if !(a.t_end > 0.0 && a.grid > 0.0) {
            s.issue("grid", "t_end and grid must be positive");
        }
        issues.extend(s.finish());
        Some(a)
    });

    issues.extend(top.finish());
    match (field, controller, initial, sde, metrics, runs, averaging) {
        (Some(field), Some(controller), Some(initial), Some((sde, dt_explicit)), Some(metrics), Some(runs), Some(averaging))
            if issues.is_empty() =>
        {
            Ok(Scenario { tag, field, controller, initial, sde, dt_explicit, metrics, runs, averaging })
        }
        _ => Err(SeekError::Config(issues)),
    }
}
