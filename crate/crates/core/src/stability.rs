//! Analytic Jacobians at the closed-form equilibria, characteristic
//! polynomials, Routh-Hurwitz verdicts and the hypothesis checks for the
//! elliptical and circular convergence results.

use nalgebra::DMatrix;
use serde::Serialize;

use crate::closed_loop::ControllerParams;
use crate::equilibria::{
    circular_from_model, elliptical_from_model, iota_from_model, sign, thresholds_from_model, GammaSet, Iota, Model,
    VcThresholds,
};
use crate::error::{Result, SeekError};
use crate::field::ScalarField;

/// Slack below which a condition is reported as near-boundary.
pub const NEAR_BOUNDARY: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum JacobianTag {
    /// `J1(q_p)`: eq1, eq2
    J1Plus,
    /// `J1(-q_p)`: eq3, eq4
    J1Minus,
    /// `J2(q_p)`: eq5, eq6
    J2Plus,
    /// `J2(-q_p)`: eq7, eq8
    J2Minus,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ACoeffs {
    pub a11: f64,
    pub a14: f64,
    pub a22: f64,
    pub a23: f64,
    pub a32: f64,
    pub a33: f64,
    pub a41: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct JacobianE {
    pub tag: JacobianTag,
    pub coeffs: ACoeffs,
    pub h: f64,
    pub matrix: [[f64; 4]; 4],
}

fn a_coeffs(m: &Model, q: f64) -> Result<ACoeffs> {
    let ControllerParams { b, c, h, v_c, r, .. } = m.p;
    let (k, q_r) = (&m.k, m.q_r);
    let (i1, i12, i13, i2, i22) = (k.i1_a, k.i1_2a, k.i1_3a, k.i2_a, k.i2_2a);
    let (rho, _) = m.rho_e(q)?;
    if rho == 0.0 {
        return Err(SeekError::DivisionByZero("a23: rho(q_p) = 0"));
    }
    let (qp, qm) = (q_r + 2.0 * q, q_r - 2.0 * q);
    Ok(ACoeffs {
        a11: 2.0 * b * qp * rho * i1 - b * r * qp * (1.0 + i12),
        a14: b * i1,
        a22: -b * r * qm * (1.0 - i12),
        a23: 2.0 * b * r * qp * (i1 * i1 - i12)
            + ((3.0 * i13 - i1 - 2.0 * i12 * i1) * b * q * r * r - v_c * i1) / rho,
        a32: 2.0 * c * r * qm * rho * i2,
        a33: 4.0 * c * q * r * r * i22 - 2.0 * c * r * qp * rho * i2,
        a41: 2.0 * h * r * qp * i1 - 2.0 * h * qp * rho,
    })
}

fn jacobian_e_from_model(m: &Model, eq_index: usize) -> Result<JacobianE> {
    let tag = match eq_index {
        1 | 2 => JacobianTag::J1Plus,
        3 | 4 => JacobianTag::J1Minus,
        5 | 6 => JacobianTag::J2Plus,
        7 | 8 => JacobianTag::J2Minus,
        _ => return Err(SeekError::UndefinedEquilibrium(eq_index)),
    };
    let q = match tag {
        JacobianTag::J1Plus | JacobianTag::J2Plus => m.q_p,
        _ => -m.q_p,
    };
    let co = a_coeffs(m, q)?;
    let s = match tag {
        JacobianTag::J1Plus | JacobianTag::J1Minus => 1.0,
        _ => -1.0,
    };
    let h = m.p.h;
    let matrix = [
        [co.a11, 0.0, 0.0, s * co.a14],
        [0.0, co.a22, co.a23, 0.0],
        [0.0, co.a32, co.a33, 0.0],
        [s * co.a41, 0.0, 0.0, -h],
    ];
    Ok(JacobianE { tag, coeffs: co, h, matrix })
}

/// Jacobian of the elliptical averaged system at equilibrium `eq_index` (1..=8).
pub fn jacobian_elliptical(eq_index: usize, params: &ControllerParams, field: &ScalarField) -> Result<JacobianE> {
    jacobian_e_from_model(&Model::new(params, field)?, eq_index)
}

impl JacobianE {
    /// `(l^2 + (h - a11) l - a11 h - a14 a41)(l^2 - (a22 + a33) l + a22 a33 - a23 a32)`.
    pub fn char_poly(&self) -> CharPoly {
        let c = &self.coeffs;
        let h = self.h;
        CharPoly::from_factors(vec![
            vec![1.0, h - c.a11, -c.a11 * h - c.a14 * c.a41],
            vec![1.0, -(c.a22 + c.a33), c.a22 * c.a33 - c.a23 * c.a32],
        ])
    }

    pub fn dmatrix(&self) -> DMatrix<f64> {
        DMatrix::from_fn(4, 4, |i, j| self.matrix[i][j])
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CircularTag {
    Eq1,
    Eq2,
    Eq3,
    Eq4,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CCoeffs {
    Small { m11: f64, m13: f64, m22: f64, m31: f64 },
    Large { k11: f64, k12: f64, k13: f64, k21: f64, k22: f64, k23: f64, k31: f64, k32: f64, l0: f64, l1: f64, l2: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct JacobianC {
    pub tag: CircularTag,
    pub coeffs: CCoeffs,
    pub h: f64,
    pub matrix: [[f64; 3]; 3],
}

fn jacobian_c_from_model(m: &Model, eq_index: usize) -> Result<JacobianC> {
    let ControllerParams { b, c, h, .. } = m.p;
    let (k, gm, q_r, r) = (&m.k, &m.gam, m.q_r, m.p.r);
    let (i1, i12, i2) = (k.i1_a, k.i1_2a, k.i2_a);
    let ce = circular_from_model(m);
    match eq_index {
        1 | 2 => {
            let rho1 = ce.rho1;
            let m11 = -2.0 * b * q_r * i1 * rho1 - b * q_r * r * i12 - b * q_r * r;
            let m13 = b * i1;
            let m22 = 2.0 * c * m.p.v_c * i1 * i2 / (b * gm.g1) - b * q_r * r * (1.0 - i12);
            let m31 = 2.0 * h * q_r * rho1 + 2.0 * h * q_r * r * i1;
            let (tag, s) = if eq_index == 1 { (CircularTag::Eq1, -1.0) } else { (CircularTag::Eq2, 1.0) };
            Ok(JacobianC {
                tag,
                coeffs: CCoeffs::Small { m11, m13, m22, m31 },
                h,
                matrix: [[m11, 0.0, s * m13], [0.0, m22, 0.0], [s * m31, 0.0, -h]],
            })
        }
        3 | 4 => {
            let (rho2, alpha) = match (ce.rho2, ce.alpha) {
                (Some(r2), Some(al)) => (r2, al),
                _ => return Err(SeekError::UndefinedEquilibrium(eq_index)),
            };
            let (sa, ca) = alpha.sin_cos();
            let s2a = (2.0 * alpha).sin();
            let k11 = 2.0 * b * q_r * gm.g7 * i1 - 2.0 * b * q_r * r * ca * ca * i12 + b * q_r * r * (i12 - 1.0);
            let k12 = 2.0 * c * q_r * r * rho2 * rho2 * sa * i2 + b * q_r * r * rho2 * s2a * i12;
            let k13 = b * ca * i1;
            let k21 = -4.0 * c * q_r * r * sa * i2 - 2.0 * b * q_r * sa * i1 + b * q_r * r * s2a / rho2 * i12;
            let k22 = -2.0 * b * q_r * r * sa * sa * i12;
            let k23 = -b / rho2 * sa * i1;
            let k31 = -2.0 * h * q_r * rho2 + 2.0 * h * q_r * r * ca * i1;
            let k32 = -2.0 * h * q_r * r * rho2 * sa * i1;
            let l0 = 2.0 * h * q_r * r * gm.g8;
            let l1 = 2.0 * q_r * r * gm.g8 + b * q_r * i1 / (c * i2) * gm.g8 + h * b * q_r * r * gm.g1;
            let l2 = h + b * q_r * r * (i12 + 1.0) - 2.0 * b * q_r * gm.g7 * i1;
            let (tag, s) = if eq_index == 3 { (CircularTag::Eq3, 1.0) } else { (CircularTag::Eq4, -1.0) };
            Ok(JacobianC {
                tag,
                coeffs: CCoeffs::Large { k11, k12, k13, k21, k22, k23, k31, k32, l0, l1, l2 },
                h,
                matrix: [[k11, s * k12, k13], [s * k21, k22, s * k23], [k31, s * k32, -h]],
            })
        }
        _ => Err(SeekError::UndefinedEquilibrium(eq_index)),
    }
}

/// Jacobian of the circular averaged system at equilibrium `eq_index` (1..=4).
pub fn jacobian_circular(eq_index: usize, params: &ControllerParams, field: &ScalarField) -> Result<JacobianC> {
    let m = Model::new(params, field)?;
    if m.q_p != 0.0 {
        return Err(SeekError::NotCircular(m.q_p));
    }
    jacobian_c_from_model(&m, eq_index)
}

impl JacobianC {
    /// Small-`V_c`: `(l - m22)(l^2 + (h - m11) l - m11 h - m13 m31)`;
    /// large-`V_c`: the monic cubic with closed-form `l2, l1, l0`.
    pub fn char_poly(&self) -> CharPoly {
        match self.coeffs {
            CCoeffs::Small { m11, m13, m22, m31 } => CharPoly::from_factors(vec![
                vec![1.0, -m22],
                vec![1.0, self.h - m11, -m11 * self.h - m13 * m31],
            ]),
            CCoeffs::Large { l0, l1, l2, .. } => CharPoly::from_factors(vec![vec![1.0, l2, l1, l0]]),
        }
    }

    pub fn dmatrix(&self) -> DMatrix<f64> {
        DMatrix::from_fn(3, 3, |i, j| self.matrix[i][j])
    }
}

/// Polynomial with coefficients in descending powers, optionally with the
/// factors it was built from.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CharPoly {
    pub coeffs: Vec<f64>,
    pub factors: Vec<Vec<f64>>,
}

pub fn poly_mul(p: &[f64], q: &[f64]) -> Vec<f64> {
    if p.is_empty() || q.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0.0; p.len() + q.len() - 1];
    for (i, a) in p.iter().enumerate() {
        for (j, b) in q.iter().enumerate() {
            out[i + j] += a * b;
        }
    }
    out
}

impl CharPoly {
    pub fn new(coeffs: Vec<f64>) -> Self {
        Self { coeffs, factors: Vec::new() }
    }

    pub fn from_factors(factors: Vec<Vec<f64>>) -> Self {
        let coeffs = factors.iter().fold(vec![1.0], |acc, f| poly_mul(&acc, f));
        Self { coeffs, factors }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn roots(&self) -> Result<Vec<(f64, f64)>> {
        poly_roots(&self.coeffs)
    }
}

/// Characteristic polynomial `det(l I - A)` of a dense matrix
/// (Faddeev-LeVerrier), descending and monic.
pub fn char_poly_dense(a: &DMatrix<f64>) -> CharPoly {
    let n = a.nrows();
    let mut coeffs = vec![1.0];
    let mut mk = DMatrix::<f64>::zeros(n, n);
    let id = DMatrix::<f64>::identity(n, n);
    let mut c = 1.0;
    for k in 1..=n {
        mk = a * &mk + &id * c;
        c = -(a * &mk).trace() / k as f64;
        coeffs.push(c);
    }
    CharPoly::new(coeffs)
}

/// Roots of a polynomial (descending coefficients) as `(re, im)` pairs, via
/// the eigenvalues of its companion matrix.
pub fn poly_roots(coeffs: &[f64]) -> Result<Vec<(f64, f64)>> {
    let lead = *coeffs.first().ok_or_else(|| SeekError::Polynomial("empty coefficient list".into()))?;
    if lead == 0.0 {
        return Err(SeekError::Polynomial("zero leading coefficient".into()));
    }
    let n = coeffs.len() - 1;
    if n == 0 {
        return Ok(Vec::new());
    }
    let comp = DMatrix::from_fn(n, n, |i, j| {
        if i == 0 {
            -coeffs[j + 1] / lead
        } else if i == j + 1 {
            1.0
        } else {
            0.0
        }
    });
    Ok(eigenvalues(&comp))
}

pub fn eigenvalues(a: &DMatrix<f64>) -> Vec<(f64, f64)> {
    a.complex_eigenvalues().iter().map(|z| (z.re, z.im)).collect()
}

pub fn max_real_part(eigs: &[(f64, f64)]) -> f64 {
    eigs.iter().map(|e| e.0).fold(f64::NEG_INFINITY, f64::max)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HurwitzVerdict {
    pub hurwitz: bool,
    /// Smallest slack over the Routh conditions (normalized by the leading
    /// coefficient).
    pub min_slack: f64,
    pub near_boundary: bool,
}

/// Routh conditions for a single polynomial of degree <= 4, returned as
/// slacks that must all be positive.
fn routh_slacks(coeffs: &[f64]) -> Result<Vec<f64>> {
    let lead = *coeffs.first().ok_or_else(|| SeekError::Polynomial("empty coefficient list".into()))?;
    if lead == 0.0 {
        return Err(SeekError::Polynomial("zero leading coefficient".into()));
    }
    let c: Vec<f64> = coeffs.iter().map(|x| x / lead).collect();
    let mut s: Vec<f64> = c[1..].to_vec();
    match c.len() - 1 {
        0..=2 => {}
        3 => s.push(c[1] * c[2] - c[3]),
        4 => {
            s.push(c[1] * c[2] - c[3]);
            s.push(c[1] * c[2] * c[3] - c[3] * c[3] - c[1] * c[1] * c[4]);
        }
        d => return Err(SeekError::Polynomial(format!("degree {d} exceeds 4"))),
    }
    Ok(s)
}

/// Routh-Hurwitz test. Factored polynomials are tested factor by factor.
pub fn hurwitz(poly: &CharPoly) -> Result<HurwitzVerdict> {
    let parts: Vec<&[f64]> = if poly.factors.is_empty() {
        vec![&poly.coeffs]
    } else {
        poly.factors.iter().map(|f| f.as_slice()).collect()
    };
    let mut slacks = Vec::new();
    for p in parts {
        slacks.extend(routh_slacks(p)?);
    }
    let min_slack = slacks.iter().copied().fold(f64::INFINITY, f64::min);
    Ok(HurwitzVerdict {
        hurwitz: slacks.iter().all(|&s| s > 0.0),
        min_slack,
        near_boundary: min_slack.abs() < NEAR_BOUNDARY,
    })
}

/// Verdict for one equilibrium, with the eigenvalue oracle alongside.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EquilibriumStability {
    pub index: usize,
    pub state: Option<Vec<f64>>,
    pub admissible: bool,
    pub jacobian: Option<Vec<Vec<f64>>>,
    pub char_poly: Option<Vec<f64>>,
    pub verdict: Option<HurwitzVerdict>,
    /// `(re, im)` pairs of the Jacobian's eigenvalues.
    pub eigenvalues: Vec<(f64, f64)>,
    pub note: Option<String>,
}

fn stability_entry(index: usize, state: Option<Vec<f64>>, admissible: bool, jac: Result<(Vec<Vec<f64>>, DMatrix<f64>, CharPoly)>) -> EquilibriumStability {
    match jac.and_then(|(rows, dm, cp)| Ok((rows, dm, hurwitz(&cp)?, cp))) {
        Ok((rows, dm, verdict, cp)) => EquilibriumStability {
            index,
            state,
            admissible,
            jacobian: Some(rows),
            char_poly: Some(cp.coeffs),
            verdict: Some(verdict),
            eigenvalues: eigenvalues(&dm),
            note: None,
        },
        Err(e) => EquilibriumStability {
            index,
            state,
            admissible,
            jacobian: None,
            char_poly: None,
            verdict: None,
            eigenvalues: Vec::new(),
            note: Some(e.to_string()),
        },
    }
}

fn elliptical_stability(m: &Model) -> Result<Vec<EquilibriumStability>> {
    Ok(elliptical_from_model(m)?
        .into_iter()
        .map(|eq| {
            let jac = jacobian_e_from_model(m, eq.index)
                .map(|j| (j.matrix.iter().map(|r| r.to_vec()).collect(), j.dmatrix(), j.char_poly()));
            stability_entry(eq.index, Some(eq.state.to_vec()), eq.admissible, jac)
        })
        .collect())
}

fn circular_stability(m: &Model) -> Vec<EquilibriumStability> {
    circular_from_model(m)
        .equilibria
        .into_iter()
        .map(|eq| {
            let jac = jacobian_c_from_model(m, eq.index)
                .map(|j| (j.matrix.iter().map(|r| r.to_vec()).collect(), j.dmatrix(), j.char_poly()));
            stability_entry(eq.index, eq.state.map(|s| s.to_vec()), eq.admissible, jac)
        })
        .collect()
}

/// One of the two mirrored hypothesis pairs of the elliptical result.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EllipticalBranch {
    /// Signed curvature of the branch: `q_p` for the first pair, `-q_p` for the mirror.
    pub q: f64,
    /// `q_p gamma_3 < 0` (first pair) or `q_p gamma_3 > 0` (mirror).
    pub sign_condition: bool,
    pub lower: f64,
    pub upper: f64,
    pub in_interval: bool,
    pub not_v_io: bool,
    pub holds: bool,
    pub near_boundary: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Theorem1Report {
    pub plus: EllipticalBranch,
    pub minus: EllipticalBranch,
    pub iota: Iota,
    /// `(iota, iota + 1)` when a branch holds and `iota` is defined.
    pub selected: Option<[usize; 2]>,
    /// Both selected Jacobians Hurwitz.
    pub selected_hurwitz: Option<bool>,
    /// The four block inequalities of the selected Jacobian:
    /// `a11 - h < 0`, `a11 h + a14 a41 < 0`, `a22 + a33 < 0`, `a23 a32 - a22 a33 < 0`.
    pub block_conditions: Option<[bool; 4]>,
}

fn branch(m: &Model, q: f64, sign_condition: bool, v_io: f64, margin: f64) -> EllipticalBranch {
    let v = m.p.v_c;
    let (lower, upper) = (m.v_lower(q), m.v_upper(q));
    let in_interval = lower + margin < v && v < upper - margin;
    let not_v_io = v != v_io;
    let slack = (v - lower).min(upper - v).min((v - v_io).abs());
    EllipticalBranch {
        q,
        sign_condition,
        lower,
        upper,
        in_interval,
        not_v_io,
        holds: sign_condition && in_interval && not_v_io,
        near_boundary: slack.abs() < NEAR_BOUNDARY,
    }
}

fn theorem1_from_model(m: &Model, margin: f64) -> Result<Theorem1Report> {
    let s = m.q_p * m.gam.g3;
    let v_io = m.v_io();
    let plus = branch(m, m.q_p, s < 0.0, v_io, margin);
    let minus = branch(m, -m.q_p, s > 0.0, v_io, margin);
    let iota = iota_from_model(m)?;
    let mut report = Theorem1Report { plus, minus, iota, selected: None, selected_hurwitz: None, block_conditions: None };
    if let (true, Some(i)) = (plus.holds || minus.holds, iota.index()) {
        report.selected = Some([i, i + 1]);
        let mut all = true;
        for idx in [i, i + 1] {
            let j = jacobian_e_from_model(m, idx)?;
            all &= hurwitz(&j.char_poly())?.hurwitz;
            let c = j.coeffs;
            report.block_conditions = Some([
                c.a11 - m.p.h < 0.0,
                c.a11 * m.p.h + c.a14 * c.a41 < 0.0,
                c.a22 + c.a33 < 0.0,
                c.a23 * c.a32 - c.a22 * c.a33 < 0.0,
            ]);
        }
        report.selected_hurwitz = Some(all);
    }
    Ok(report)
}

/// Elliptical-field hypothesis check with zero margin on the intervals.
pub fn theorem1_check(params: &ControllerParams, field: &ScalarField) -> Result<Theorem1Report> {
    theorem1_check_with_margin(params, field, 0.0)
}

pub fn theorem1_check_with_margin(params: &ControllerParams, field: &ScalarField, margin: f64) -> Result<Theorem1Report> {
    theorem1_from_model(&Model::new(params, field)?, margin)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CircularBranch {
    /// `V_c` in `(Vbar_l, 0)` or `(0, Vbar_u)`: eq1/eq2.
    Small,
    /// `V_c > Vbar_u`: eq3/eq4.
    Large,
    /// On a boundary (`V_c = 0`, `V_c = Vbar_u`) or outside both ranges.
    None,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Theorem2Report {
    pub branch: CircularBranch,
    pub bar_lower: f64,
    pub bar_upper: f64,
    /// Predicted stable equilibria (the admissible member of eq1/eq2, or eq3 and eq4).
    pub predicted: Vec<usize>,
    /// `m22 < 0`, `m11 - h < 0`, `-m11 h - m13 m31 > 0` (small branch).
    pub cc: Option<[bool; 3]>,
    /// `l2 > 0`, `l0 > 0`, `l1 l2 > l0` (large branch).
    pub cubic: Option<[bool; 3]>,
    /// `gamma_rho2 > 0` and `gamma_8 > 0`.
    pub large_valid: bool,
    pub predicted_hurwitz: Option<bool>,
    pub near_boundary: bool,
}

fn theorem2_from_model(m: &Model, margin: f64) -> Result<Theorem2Report> {
    let v = m.p.v_c;
    let (lo, up) = (m.v_lower(0.0), m.v_upper(0.0));
    let branch = if (lo + margin < v && v < -margin) || (margin < v && v < up - margin) {
        CircularBranch::Small
    } else if v > up + margin {
        CircularBranch::Large
    } else {
        CircularBranch::None
    };
    let near_boundary = [v - lo, v, v - up].iter().any(|s| s.abs() < NEAR_BOUNDARY);
    let mut report = Theorem2Report {
        branch,
        bar_lower: lo,
        bar_upper: up,
        predicted: Vec::new(),
        cc: None,
        cubic: None,
        large_valid: m.gam.g_rho2 > 0.0 && m.gam.g8 > 0.0,
        predicted_hurwitz: None,
        near_boundary,
    };
    match branch {
        CircularBranch::Small => {
            let idx = if v > 0.0 { 1 } else { 2 };
            let j = jacobian_c_from_model(m, idx)?;
            if let CCoeffs::Small { m11, m13, m22, m31 } = j.coeffs {
                let h = m.p.h;
                report.cc = Some([m22 < 0.0, m11 - h < 0.0, -m11 * h - m13 * m31 > 0.0]);
            }
            report.predicted = vec![idx];
            report.predicted_hurwitz = Some(hurwitz(&j.char_poly())?.hurwitz);
        }
        CircularBranch::Large => {
            let mut all = true;
            for idx in [3, 4] {
                let j = jacobian_c_from_model(m, idx)?;
                if let CCoeffs::Large { l0, l1, l2, .. } = j.coeffs {
                    report.cubic = Some([l2 > 0.0, l0 > 0.0, l1 * l2 > l0]);
                }
                all &= hurwitz(&j.char_poly())?.hurwitz;
            }
            report.predicted = vec![3, 4];
            report.predicted_hurwitz = Some(all);
        }
        CircularBranch::None => {}
    }
    Ok(report)
}

/// Circular-field hypothesis check with zero margin on the intervals.
pub fn theorem2_check(params: &ControllerParams, field: &ScalarField) -> Result<Theorem2Report> {
    theorem2_check_with_margin(params, field, 0.0)
}

pub fn theorem2_check_with_margin(params: &ControllerParams, field: &ScalarField, margin: f64) -> Result<Theorem2Report> {
    let m = Model::new(params, field)?;
    if m.q_p != 0.0 {
        return Err(SeekError::NotCircular(m.q_p));
    }
    theorem2_from_model(&m, margin)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Axis {
    Major,
    Minor,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Heading {
    Inward,
    Outward,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Corollary1 {
    Applicable {
        axis: Axis,
        heading: Heading,
        /// Axis implied by the selected equilibrium pair (x-axis is minor for `q_p > 0`).
        iota_axis: Option<Axis>,
    },
    NotApplicable { reason: String },
}

/// `b > 2 c R sgn(gamma_3) q_p gamma_5 / ((q_r + 2 sgn(gamma_3) q_p) gamma_4)`.
pub(crate) fn gain_condition(m: &Model) -> bool {
    let s = sign(m.gam.g3);
    m.p.b > 2.0 * m.p.c * m.p.r * s * m.q_p * m.gam.g5 / ((m.q_r + 2.0 * s * m.q_p) * m.gam.g4)
}

fn corollary1_from_model(m: &Model) -> Result<Corollary1> {
    let na = |r: &str| Ok(Corollary1::NotApplicable { reason: r.to_string() });
    let (a, g) = (m.p.a, m.p.g);
    if !(m.q_p > 0.0) {
        return na("requires q_p > 0");
    }
    if !(a > 0.0 && a < 3.0 && a != 1.0) {
        return na("requires a in (0,1) or (1,3)");
    }
    if !(g > 0.0 && g < 3.0) {
        return na("requires g in (0,3)");
    }
    let t1 = theorem1_from_model(m, 0.0)?;
    if !(t1.plus.holds || t1.minus.holds) {
        return na("elliptical stability hypotheses do not hold");
    }
    if !gain_condition(m) {
        return na("condition on b for a positive upper threshold does not hold");
    }
    let axis = if a < 1.0 { Axis::Major } else { Axis::Minor };
    let heading = if m.p.v_c > m.v_io() { Heading::Outward } else { Heading::Inward };
    let iota_axis = t1.iota.index().map(|i| if i == 1 || i == 5 { Axis::Minor } else { Axis::Major });
    Ok(Corollary1::Applicable { axis, heading, iota_axis })
}

pub fn corollary1_predict(params: &ControllerParams, field: &ScalarField) -> Result<Corollary1> {
    corollary1_from_model(&Model::new(params, field)?)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StabilityReport {
    pub geometry: &'static str,
    pub gammas: GammaSet,
    pub thresholds: VcThresholds,
    pub gain_condition: Option<bool>,
    pub theorem1: Option<Theorem1Report>,
    pub theorem2: Option<Theorem2Report>,
    pub corollary1: Option<Corollary1>,
    pub equilibria: Vec<EquilibriumStability>,
}

/// Everything above for one parameter set, for either geometry.
pub fn stability_report(params: &ControllerParams, field: &ScalarField) -> Result<StabilityReport> {
    let m = Model::new(params, field)?;
    let thresholds = thresholds_from_model(&m);
    if m.q_p == 0.0 {
        Ok(StabilityReport {
            geometry: "circular",
            gammas: m.gam,
            thresholds,
            gain_condition: None,
            theorem1: None,
            theorem2: Some(theorem2_from_model(&m, 0.0)?),
            corollary1: None,
            equilibria: circular_stability(&m),
        })
    } else {
        Ok(StabilityReport {
            geometry: "elliptical",
            gammas: m.gam,
            thresholds,
            gain_condition: Some(gain_condition(&m)),
            theorem1: Some(theorem1_from_model(&m, 0.0)?),
            theorem2: None,
            corollary1: Some(corollary1_from_model(&m)?),
            equilibria: elliptical_stability(&m)?,
        })
    }
}
