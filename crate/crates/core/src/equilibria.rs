//! Closed-form equilibria of the averaged systems, the gamma constants,
//! the bias-velocity thresholds and the equilibrium selector `iota`.

use std::f64::consts::{FRAC_PI_2, PI};

use serde::Serialize;

use crate::averaging::Kernels;
use crate::closed_loop::ControllerParams;
use crate::error::{Result, SeekError};
use crate::field::ScalarField;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GammaSet {
    pub g1: f64,
    pub g2: f64,
    pub g3: f64,
    pub g4: f64,
    pub g5: f64,
    pub g6: f64,
    pub g7: f64,
    pub g8: f64,
    /// Radicand numerator of `rho_2`: `c V_c I1 I2 + b^2 q_r R gamma_6`.
    pub g_rho2: f64,
}

/// Shared context: parameters, curvature and kernels.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Model {
    pub p: ControllerParams,
    pub q_r: f64,
    pub q_p: f64,
    pub k: Kernels,
    pub gam: GammaSet,
}

impl Model {
    pub fn new(params: &ControllerParams, field: &ScalarField) -> Result<Self> {
        let q = field.quadratic().ok_or(SeekError::NotQuadratic)?;
        Self::from_coeffs(params, q.q_r, q.q_p)
    }

    pub fn from_coeffs(params: &ControllerParams, q_r: f64, q_p: f64) -> Result<Self> {
        params.validate()?;
        if !(params.g > 0.0) {
            return Err(SeekError::InvalidParams("equilibrium analysis needs g > 0".into()));
        }
        let k = Kernels::new(params.a, params.g);
        let gam = gammas(params, q_r, &k);
        Ok(Self { p: *params, q_r, q_p, k, gam })
    }

    pub fn rho_e(&self, q: f64) -> Result<(f64, f64)> {
        let ControllerParams { b, v_c, r, .. } = self.p;
        let qx = self.q_r + 2.0 * q;
        if qx == 0.0 {
            return Err(SeekError::DivisionByZero("rho(q_p): q_r + 2 q_p = 0"));
        }
        let i1 = self.k.i1_a;
        let rho = (-v_c * i1 + b * q * r * r * self.gam.g2) / (b * r * qx * self.gam.g1);
        let e = 2.0 * r * qx * i1 * rho - qx * rho * rho - 2.0 * q * r * r * self.k.i1_2a;
        Ok((rho, e))
    }

    pub fn v_lower(&self, q: f64) -> f64 {
        let ControllerParams { b, h, r, .. } = self.p;
        let (k, gm) = (&self.k, &self.gam);
        -1.0 / (2.0 * k.i1_a * k.i1_a)
            * (b * r * r * (self.q_r + 2.0 * q) * gm.g1 * (1.0 + k.i1_2a) + h * r * gm.g1
                - 2.0 * b * r * r * q * gm.g2 * k.i1_a)
    }

    pub fn v_upper(&self, q: f64) -> f64 {
        let ControllerParams { b, c, r, .. } = self.p;
        let (k, gm) = (&self.k, &self.gam);
        (b * b * r * (self.q_r - 2.0 * q) * gm.g4 + 2.0 * b * c * q * r * r * gm.g5) / (2.0 * c * k.i1_a * k.i2_a)
    }

    pub fn v_io(&self) -> f64 {
        let ControllerParams { b, r, .. } = self.p;
        -sign(self.gam.g3 * self.q_p) * b * self.q_p * r * r * self.gam.g2 / self.k.i1_a
    }
}

/// Sign with `sign(0) = 0`.
pub fn sign(x: f64) -> f64 {
    if x > 0.0 {
        1.0
    } else if x < 0.0 {
        -1.0
    } else {
        0.0
    }
}

fn gammas(p: &ControllerParams, q_r: f64, k: &Kernels) -> GammaSet {
    let (i1, i12, i13, i2, i22) = (k.i1_a, k.i1_2a, k.i1_3a, k.i2_a, k.i2_2a);
    let g1 = 1.0 + i12 - 2.0 * i1 * i1;
    let g2 = i13 + i1 - 2.0 * i12 * i1;
    let g3 = (i13 - i1) * i2 + (1.0 - i12) * i22;
    let g4 = g1 * (1.0 - i12);
    let g5 = g2 * i2 - 2.0 * g1 * i22;
    let g6 = (1.0 - i12) * (i1 * i1 - i12);
    let g7 = p.b * (i12 - 1.0) / (2.0 * p.c * i2);
    let g8 = 2.0 * p.c * p.v_c * i1 * i2 - p.b * p.b * q_r * p.r * g4;
    let g_rho2 = p.c * p.v_c * i1 * i2 + p.b * p.b * q_r * p.r * g6;
    GammaSet { g1, g2, g3, g4, g5, g6, g7, g8, g_rho2 }
}

pub fn gamma_set(params: &ControllerParams, field: &ScalarField) -> Result<GammaSet> {
    Ok(Model::new(params, field)?.gam)
}

/// `(rho(q), e(q))` for a signed curvature `q` (pass `q_p` or `-q_p`).
pub fn rho_e(q_signed: f64, params: &ControllerParams, field: &ScalarField) -> Result<(f64, f64)> {
    Model::new(params, field)?.rho_e(q_signed)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EquilibriumE {
    /// 1..=8
    pub index: usize,
    /// `[r_tilde, theta_star, theta_hat, e_tilde]`
    pub state: [f64; 4],
    /// Signed curvature the equilibrium is built from (`q_p` or `-q_p`).
    pub q_signed: f64,
    pub rho: f64,
    pub e: f64,
    /// First component strictly positive.
    pub admissible: bool,
}

impl EquilibriumE {
    /// Heading relative to the bearing, `theta_hat - theta_star`, wrapped.
    pub fn relative_heading(&self) -> f64 {
        crate::closed_loop::wrap_angle(self.state[2] - self.state[1])
    }
}

pub(crate) fn elliptical_from_model(m: &Model) -> Result<Vec<EquilibriumE>> {
    let (q, mq) = (m.q_p, -m.q_p);
    let (rp, ep) = m.rho_e(q)?;
    let (rm, em) = m.rho_e(mq)?;
    let table: [(f64, f64, f64, f64, f64, f64); 8] = [
        (rp, 0.0, 0.0, ep, q, rp),
        (rp, PI, PI, ep, q, rp),
        (rm, FRAC_PI_2, FRAC_PI_2, em, mq, rm),
        (rm, -FRAC_PI_2, -FRAC_PI_2, em, mq, rm),
        (-rp, PI, 0.0, ep, q, rp),
        (-rp, 0.0, PI, ep, q, rp),
        (-rm, -FRAC_PI_2, FRAC_PI_2, em, mq, rm),
        (-rm, FRAC_PI_2, -FRAC_PI_2, em, mq, rm),
    ];
    Ok(table
        .iter()
        .enumerate()
        .map(|(i, &(r, ts, th, e, qs, rho))| EquilibriumE {
            index: i + 1,
            state: [r, ts, th, e],
            q_signed: qs,
            rho,
            e,
            admissible: r > 0.0,
        })
        .collect())
}

/// All eight equilibria, inadmissible ones flagged rather than dropped.
pub fn elliptical_equilibria(params: &ControllerParams, field: &ScalarField) -> Result<Vec<EquilibriumE>> {
    elliptical_from_model(&Model::new(params, field)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EquilibriumC {
    /// 1..=4
    pub index: usize,
    /// `[r_tilde, theta_tilde, e_tilde]`, `None` when not defined.
    pub state: Option<[f64; 3]>,
    pub admissible: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CircularEquilibria {
    pub rho1: f64,
    pub e1: f64,
    pub rho2: Option<f64>,
    pub alpha: Option<f64>,
    pub e2: Option<f64>,
    pub equilibria: Vec<EquilibriumC>,
}

impl CircularEquilibria {
    pub fn get(&self, index: usize) -> Option<&EquilibriumC> {
        self.equilibria.get(index.checked_sub(1)?)
    }
}

pub(crate) fn circular_from_model(m: &Model) -> CircularEquilibria {
    let ControllerParams { b, c, v_c, r, .. } = m.p;
    let (k, gm, q_r) = (&m.k, &m.gam, m.q_r);
    let (i1, i2) = (k.i1_a, k.i2_a);
    let rho1 = v_c * i1 / (b * q_r * r * gm.g1);
    let e1 = -2.0 * v_c * i1 * i1 / (b * gm.g1) - v_c * v_c * i1 * i1 / (q_r * r * r * b * b * gm.g1 * gm.g1);

    let large = if gm.g_rho2 > 0.0 && gm.g8 >= 0.0 {
        let rho2 = (gm.g_rho2 / (2.0 * c * c * i2 * i2 * q_r * r)).sqrt();
        // sin(alpha) = sqrt(gamma_8) / (2 c I2 sqrt(q_r R)), cos(alpha) = gamma_7 / rho_2.
        let alpha = (gm.g8.sqrt() / (2.0 * c * i2 * (q_r * r).sqrt())).atan2(gm.g7);
        let e2 = 2.0 * q_r * r * gm.g7 * i1 - gm.g_rho2 / (2.0 * c * c * i2 * i2 * r);
        Some((rho2, alpha, e2))
    } else {
        None
    };

    let mut equilibria = vec![
        EquilibriumC { index: 1, state: Some([rho1, PI, e1]), admissible: rho1 > 0.0 },
        EquilibriumC { index: 2, state: Some([-rho1, 0.0, e1]), admissible: -rho1 > 0.0 },
    ];
    for (index, sgn) in [(3, 1.0), (4, -1.0)] {
        equilibria.push(match large {
            Some((rho2, alpha, e2)) => EquilibriumC { index, state: Some([rho2, sgn * alpha, e2]), admissible: rho2 > 0.0 },
            None => EquilibriumC { index, state: None, admissible: false },
        });
    }
    CircularEquilibria {
        rho1,
        e1,
        rho2: large.map(|l| l.0),
        alpha: large.map(|l| l.1),
        e2: large.map(|l| l.2),
        equilibria,
    }
}

pub fn circular_equilibria(params: &ControllerParams, field: &ScalarField) -> Result<CircularEquilibria> {
    let m = Model::new(params, field)?;
    if m.q_p != 0.0 {
        return Err(SeekError::NotCircular(m.q_p));
    }
    Ok(circular_from_model(&m))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Iota {
    /// Selected equilibrium pair is `(index, index + 1)`.
    Defined { index: usize },
    /// `q_p = 0`: the circular analysis applies instead.
    Circular,
    /// `q_p gamma_3 = 0` or the relevant `rho` vanishes.
    Boundary,
}

impl Iota {
    pub fn index(&self) -> Option<usize> {
        match self {
            Iota::Defined { index } => Some(*index),
            _ => None,
        }
    }
}

pub(crate) fn iota_from_model(m: &Model) -> Result<Iota> {
    if m.q_p == 0.0 {
        return Ok(Iota::Circular);
    }
    let s = m.q_p * m.gam.g3;
    if s == 0.0 {
        return Ok(Iota::Boundary);
    }
    let (q, base) = if s < 0.0 { (m.q_p, 1) } else { (-m.q_p, 3) };
    let (rho, _) = m.rho_e(q)?;
    Ok(if rho > 0.0 {
        Iota::Defined { index: base }
    } else if rho < 0.0 {
        Iota::Defined { index: base + 4 }
    } else {
        Iota::Boundary
    })
}

pub fn iota_index(params: &ControllerParams, field: &ScalarField) -> Result<Iota> {
    iota_from_model(&Model::new(params, field)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct VcThresholds {
    /// `V_c^l(q_p)`
    pub lower_plus: f64,
    /// `V_c^u(q_p)`
    pub upper_plus: f64,
    /// `V_c^l(-q_p)`
    pub lower_minus: f64,
    /// `V_c^u(-q_p)`
    pub upper_minus: f64,
    pub v_io: f64,
    /// Circular thresholds `V_c^l(0)`, `V_c^u(0)`.
    pub bar_lower: f64,
    pub bar_upper: f64,
}

pub(crate) fn thresholds_from_model(m: &Model) -> VcThresholds {
    VcThresholds {
        lower_plus: m.v_lower(m.q_p),
        upper_plus: m.v_upper(m.q_p),
        lower_minus: m.v_lower(-m.q_p),
        upper_minus: m.v_upper(-m.q_p),
        v_io: m.v_io(),
        bar_lower: m.v_lower(0.0),
        bar_upper: m.v_upper(0.0),
    }
}

pub fn vc_thresholds(params: &ControllerParams, field: &ScalarField) -> Result<VcThresholds> {
    Ok(thresholds_from_model(&Model::new(params, field)?))
}

/// Everything the closed forms give for one parameter set.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EquilibriumReport {
    pub gammas: GammaSet,
    pub thresholds: VcThresholds,
    pub iota: Iota,
    pub elliptical: Option<Vec<EquilibriumE>>,
    pub circular: Option<CircularEquilibria>,
}

pub fn equilibrium_report(params: &ControllerParams, field: &ScalarField) -> Result<EquilibriumReport> {
    let m = Model::new(params, field)?;
    let circular = m.q_p == 0.0;
    Ok(EquilibriumReport {
        gammas: m.gam,
        thresholds: thresholds_from_model(&m),
        iota: iota_from_model(&m)?,
        elliptical: if circular { None } else { Some(elliptical_from_model(&m)?) },
        circular: circular.then(|| circular_from_model(&m)),
    })
}
