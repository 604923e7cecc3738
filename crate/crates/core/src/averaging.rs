//! Averaged error systems.
//!
//! The error coordinates are polar around the source: `r_tilde = |r_c - r*|`,
//! bearing `theta_star = arg(r* - r_c)`, shifted heading
//! `theta_hat = theta - a eta` and shifted filter error
//! `e_tilde = (e - f*) + q_r R^2`. Averaging over the stationary OU density
//! `N(0, g^2/2)` replaces the perturbation by the kernels [`i1`] and [`i2`].
//!
//! Both systems divide by the radius. States with `|r_tilde| <= R_MIN` are
//! rejected with [`SeekError::SingularChart`]; negative radii are allowed
//! because several equilibria are written with a negative first component.

use serde::Serialize;

use crate::closed_loop::{wrap_angle, ControllerParams, VehicleState};
use crate::error::{Result, SeekError};
use crate::field::ScalarField;

/// Guard on the polar chart.
pub const R_MIN: f64 = 1e-9;

/// Default RK4 step for the averaged ODEs.
pub const DEFAULT_AVG_DT: f64 = 1e-3;

/// `E[cos(a y)]` under the OU invariant density: `exp(-a^2 g^2 / 4)`.
pub fn i1(a: f64, g: f64) -> f64 {
    (-a * a * g * g / 4.0).exp()
}

/// `E[sin(a y) sin(y)]` under the OU invariant density.
pub fn i2(a: f64, g: f64) -> f64 {
    let g2 = g * g / 4.0;
    0.5 * ((-(a - 1.0).powi(2) * g2).exp() - (-(a + 1.0).powi(2) * g2).exp())
}

/// Averaging kernels for one `(a, g)` pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Kernels {
    pub i1_a: f64,
    pub i1_2a: f64,
    pub i1_3a: f64,
    pub i2_a: f64,
    pub i2_2a: f64,
}

impl Kernels {
    pub fn new(a: f64, g: f64) -> Self {
        Self {
            i1_a: i1(a, g),
            i1_2a: i1(2.0 * a, g),
            i1_3a: i1(3.0 * a, g),
            i2_a: i2(a, g),
            i2_2a: i2(2.0 * a, g),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AvgStateElliptical {
    pub r_tilde: f64,
    pub theta_star: f64,
    pub theta_hat: f64,
    pub e_tilde: f64,
}

impl AvgStateElliptical {
    pub fn to_array(&self) -> [f64; 4] {
        [self.r_tilde, self.theta_star, self.theta_hat, self.e_tilde]
    }

    pub fn from_array(v: [f64; 4]) -> Self {
        Self { r_tilde: v[0], theta_star: v[1], theta_hat: v[2], e_tilde: v[3] }
    }

    /// Circular coordinates `theta_tilde = theta_hat - theta_star`.
    pub fn to_circular(&self) -> AvgStateCircular {
        AvgStateCircular {
            r_tilde: self.r_tilde,
            theta_tilde: wrap_angle(self.theta_hat - self.theta_star),
            e_tilde: self.e_tilde,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AvgStateCircular {
    pub r_tilde: f64,
    pub theta_tilde: f64,
    pub e_tilde: f64,
}

impl AvgStateCircular {
    pub fn to_array(&self) -> [f64; 3] {
        [self.r_tilde, self.theta_tilde, self.e_tilde]
    }

    pub fn from_array(v: [f64; 3]) -> Self {
        Self { r_tilde: v[0], theta_tilde: v[1], e_tilde: v[2] }
    }
}

fn check_radius(r: f64) -> Result<()> {
    if r.abs() <= R_MIN || !r.is_finite() {
        Err(SeekError::SingularChart { t: None, radius: r.abs(), r_min: R_MIN })
    } else {
        Ok(())
    }
}

/// Averaged system for elliptical level sets, with kernels precomputed.
#[derive(Debug, Clone, Copy)]
pub struct EllipticalAvg {
    pub params: ControllerParams,
    pub q_r: f64,
    pub q_p: f64,
    pub k: Kernels,
}

impl EllipticalAvg {
    pub fn new(params: &ControllerParams, field: &ScalarField) -> Result<Self> {
        let q = field.quadratic().ok_or(SeekError::NotQuadratic)?;
        Ok(Self::from_coeffs(params, q.q_r, q.q_p))
    }

    pub fn from_coeffs(params: &ControllerParams, q_r: f64, q_p: f64) -> Self {
        Self { params: *params, q_r, q_p, k: Kernels::new(params.a, params.g) }
    }

    pub fn rhs(&self, x: &[f64; 4]) -> Result<[f64; 4]> {
        let [r, ts, th, e] = *x;
        check_radius(r)?;
        let ControllerParams { b, c, h, v_c, r: big_r, .. } = self.params;
        let (q_r, q_p, k) = (self.q_r, self.q_p, &self.k);
        let r2 = big_r * big_r;

        let d = th - ts;
        let s = th + ts;
        let phi0 = e + r * r * (q_r + 2.0 * q_p * (2.0 * ts).cos());
        let phi1 = (3.0 * th - ts).cos() * k.i1_3a + s.cos() * k.i1_a;
        let phi2 = q_r * (2.0 * d).cos() * k.i1_2a
            + 2.0 * q_p * (2.0 * ts).cos()
            + 2.0 * q_p * (2.0 * th).cos() * k.i1_2a
            + q_r;
        let phi3 = (3.0 * th - ts).sin() * k.i1_3a - s.sin() * k.i1_a;
        let phi4 = q_r * (2.0 * d).sin() * k.i1_2a - 2.0 * q_p * (2.0 * ts).sin()
            + 2.0 * q_p * (2.0 * th).sin() * k.i1_2a;
        let phi5 = q_r * d.sin() + 2.0 * q_p * s.sin();
        let phi6 = q_r * d.cos() + 2.0 * q_p * s.cos();

        let drive = b * phi0 - v_c;
        Ok([
            drive * d.cos() * k.i1_a + b * q_p * r2 * phi1 - b * r * big_r * phi2,
            drive / r * d.sin() * k.i1_a + b * q_p * r2 / r * phi3 - b * big_r * phi4,
            2.0 * c * q_p * r2 * (2.0 * th).sin() * k.i2_2a - 2.0 * c * r * big_r * phi5 * k.i2_a,
            -2.0 * h * q_p * r2 * (2.0 * th).cos() * k.i1_2a - h * phi0
                + 2.0 * h * r * big_r * phi6 * k.i1_a,
        ])
    }
}

/// Averaged system for circular level sets, in `(r_tilde, theta_tilde, e_tilde)`.
#[derive(Debug, Clone, Copy)]
pub struct CircularAvg {
    pub params: ControllerParams,
    pub q_r: f64,
    pub k: Kernels,
}

impl CircularAvg {
    pub fn new(params: &ControllerParams, field: &ScalarField) -> Result<Self> {
        let q = field.quadratic().ok_or(SeekError::NotQuadratic)?;
        if q.q_p != 0.0 {
            return Err(SeekError::NotCircular(q.q_p));
        }
        Ok(Self::from_coeffs(params, q.q_r))
    }

    pub fn from_coeffs(params: &ControllerParams, q_r: f64) -> Self {
        Self { params: *params, q_r, k: Kernels::new(params.a, params.g) }
    }

    pub fn rhs(&self, x: &[f64; 3]) -> Result<[f64; 3]> {
        let [r, tt, e] = *x;
        check_radius(r)?;
        let ControllerParams { b, c, h, v_c, r: big_r, .. } = self.params;
        let (q_r, k) = (self.q_r, &self.k);
        let level = q_r * r * r + e;
        Ok([
            (b * level - v_c) * tt.cos() * k.i1_a
                - b * q_r * big_r * r * (2.0 * tt).cos() * k.i1_2a
                - b * q_r * big_r * r,
            -2.0 * c * q_r * big_r * r * tt.sin() * k.i2_a
                + (v_c - b * level) / r * tt.sin() * k.i1_a
                + b * q_r * big_r * (2.0 * tt).sin() * k.i1_2a,
            -h * q_r * r * r - h * e + 2.0 * h * q_r * big_r * r * tt.cos() * k.i1_a,
        ])
    }
}

pub fn elliptical_avg_rhs(s: &AvgStateElliptical, params: &ControllerParams, field: &ScalarField) -> Result<[f64; 4]> {
    EllipticalAvg::new(params, field)?.rhs(&s.to_array())
}

pub fn circular_avg_rhs(s: &AvgStateCircular, params: &ControllerParams, field: &ScalarField) -> Result<[f64; 3]> {
    CircularAvg::new(params, field)?.rhs(&s.to_array())
}

#[derive(Debug, Clone, PartialEq)]
pub struct AvgTrajectory<const N: usize> {
    pub t: Vec<f64>,
    pub x: Vec<[f64; N]>,
}

impl<const N: usize> AvgTrajectory<N> {
    pub fn last(&self) -> &[f64; N] {
        self.x.last().expect("trajectory holds the initial state")
    }
}

/// Classical RK4 on an averaged system, recording every `record_stride`-th step.
pub fn integrate_avg_strided<const N: usize>(
    rhs: impl Fn(&[f64; N]) -> Result<[f64; N]>,
    initial: [f64; N],
    t_end: f64,
    dt: f64,
    record_stride: usize,
) -> Result<AvgTrajectory<N>> {
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(SeekError::InvalidConfig(format!("dt must be positive, got {dt}")));
    }
    let stride = record_stride.max(1);
    let n = (t_end / dt).round() as usize;
    let mut out = AvgTrajectory { t: vec![0.0], x: vec![initial] };
    let mut x = initial;
    let axpy = |x: &[f64; N], k: &[f64; N], s: f64| -> [f64; N] { std::array::from_fn(|i| x[i] + s * k[i]) };
    for step in 0..n {
        let t = step as f64 * dt;
        let with_t = |e: SeekError| match e {
            SeekError::SingularChart { radius, r_min, .. } => SeekError::SingularChart { t: Some(t), radius, r_min },
            other => other,
        };
        let k1 = rhs(&x).map_err(with_t)?;
        let k2 = rhs(&axpy(&x, &k1, dt / 2.0)).map_err(with_t)?;
        let k3 = rhs(&axpy(&x, &k2, dt / 2.0)).map_err(with_t)?;
        let k4 = rhs(&axpy(&x, &k3, dt)).map_err(with_t)?;
        x = std::array::from_fn(|i| x[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]));
        if (step + 1) % stride == 0 || step + 1 == n {
            out.t.push((step + 1) as f64 * dt);
            out.x.push(x);
        }
    }
    Ok(out)
}

pub fn integrate_avg<const N: usize>(
    rhs: impl Fn(&[f64; N]) -> Result<[f64; N]>,
    initial: [f64; N],
    t_end: f64,
    dt: f64,
) -> Result<AvgTrajectory<N>> {
    integrate_avg_strided(rhs, initial, t_end, dt, 1)
}

/// Map a closed-loop state into averaged coordinates. Needs `f*`, which
/// analysis code may know; the controller never does.
pub fn lift_to_avg(
    state: &VehicleState,
    params: &ControllerParams,
    field: &ScalarField,
) -> Result<(AvgStateElliptical, AvgStateCircular)> {
    let q = field.quadratic().ok_or(SeekError::NotQuadratic)?;
    let src = field.source();
    let (dx, dy) = (src[0] - state.x_c, src[1] - state.y_c);
    let r_tilde = dx.hypot(dy);
    if r_tilde == 0.0 {
        return Err(SeekError::UndefinedBearing);
    }
    let ell = AvgStateElliptical {
        r_tilde,
        theta_star: dy.atan2(dx),
        theta_hat: wrap_angle(state.theta - params.a * state.eta),
        e_tilde: state.e - field.f_star() + q.q_r * params.r * params.r,
    };
    Ok((ell, ell.to_circular()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    fn params(v_c: f64) -> ControllerParams {
        ControllerParams { a: 2.0, g: 1.0, eps: 0.01, b: 2.0, c: 500.0, h: 2.0, v_c, r: 0.1 }
    }

    #[test]
    fn kernel_values() {
        assert_eq!(i1(0.0, 1.7), 1.0);
        assert!((i1(2.0, 1.0) - (-1.0f64).exp()).abs() < 1e-15);
        assert!((i1(2.0, 1.0) - 0.367879).abs() < 1e-6);
        assert_eq!(i1(0.7, 1.9), i1(1.9, 0.7));
        assert_eq!(i2(0.0, 1.3), 0.0);
        assert!((i2(1.0, 2.0) - 0.5 * (1.0 - (-4.0f64).exp())).abs() < 1e-15);
        assert!((i2(1.0, 2.0) - 0.490842).abs() < 1e-6);
        assert!(i2(0.3, 0.2) > 0.0);
    }

    fn adaptive_simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
        fn rec(f: &dyn Fn(f64) -> f64, a: f64, b: f64, fa: f64, fm: f64, fb: f64, whole: f64, tol: f64, depth: u32) -> f64 {
            let m = 0.5 * (a + b);
            let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
            let (flm, frm) = (f(lm), f(rm));
            let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
            let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
            if depth == 0 || (left + right - whole).abs() <= 15.0 * tol {
                return left + right + (left + right - whole) / 15.0;
            }
            rec(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1) + rec(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)
        }
        let panels = 64;
        let w = (b - a) / panels as f64;
        (0..panels)
            .map(|i| {
                let (lo, hi) = (a + i as f64 * w, a + (i + 1) as f64 * w);
                let (fa, fb, fm) = (f(lo), f(hi), f(0.5 * (lo + hi)));
                let whole = (hi - lo) / 6.0 * (fa + 4.0 * fm + fb);
                rec(f, lo, hi, fa, fm, fb, whole, tol / panels as f64, 40)
            })
            .sum()
    }

    #[test]
    fn i2_matches_quadrature() {
        for ai in 0..5 {
            for gi in 0..4 {
                let a = 0.3 + 0.6 * ai as f64;
                let g = 0.4 + 0.7 * gi as f64;
                let density = |y: f64| (-(y * y) / (g * g)).exp() / (PI.sqrt() * g);
                let f = |y: f64| (a * y).sin() * y.sin() * density(y);
                let q = adaptive_simpson(&f, -12.0 * g, 12.0 * g, 1e-13);
                assert!((q - i2(a, g)).abs() < 1e-8, "a={a} g={g}: {q} vs {}", i2(a, g));
                let f1 = |y: f64| (a * y).cos() * density(y);
                let q1 = adaptive_simpson(&f1, -12.0 * g, 12.0 * g, 1e-13);
                assert!((q1 - i1(a, g)).abs() < 1e-8);
            }
        }
    }

    /// Right-hand side of the unaveraged error system for a frozen
    /// perturbation value `chi`.
    fn error_system(x: &[f64; 4], chi: f64, p: &ControllerParams, q_r: f64, q_p: f64) -> [f64; 4] {
        let [r, ts, th, e] = *x;
        let big_r = p.r;
        let xi = -e - 2.0 * q_p * big_r * big_r * (2.0 * th + 2.0 * p.a * chi).cos()
            - r * r * (q_r + 2.0 * q_p * (2.0 * ts).cos())
            + 2.0 * r * big_r * (q_r * (th - ts + p.a * chi).cos() + 2.0 * q_p * (th + ts + p.a * chi).cos());
        let v = p.v_c + p.b * xi;
        let ang = th - ts + p.a * chi;
        [-v * ang.cos(), -v / r * ang.sin(), p.c * xi * chi.sin(), p.h * xi]
    }

    /// Expectation over `chi ~ N(0, g^2/2)` by the trapezoid rule, which is
    /// spectrally accurate for smooth integrands with Gaussian decay.
    fn numerically_averaged(x: &[f64; 4], p: &ControllerParams, q_r: f64, q_p: f64) -> [f64; 4] {
        let sigma = p.g / 2f64.sqrt();
        let n = 2400;
        let span = 12.0 * sigma;
        let step = 2.0 * span / n as f64;
        let mut acc = [0.0; 4];
        for i in 0..=n {
            let y = -span + i as f64 * step;
            let w = (-(y * y) / (p.g * p.g)).exp() / (PI.sqrt() * p.g) * step;
            let f = error_system(x, y, p, q_r, q_p);
            for k in 0..4 {
                acc[k] += w * f[k];
            }
        }
        acc
    }

    #[test]
    fn elliptical_rhs_is_the_average_of_the_error_system() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..40 {
            let p = ControllerParams {
                a: rng.random_range(0.2..2.5),
                g: rng.random_range(0.3..2.0),
                eps: 0.01,
                b: rng.random_range(0.5..3.0),
                c: rng.random_range(1.0..20.0),
                h: rng.random_range(0.5..3.0),
                v_c: rng.random_range(-0.1..0.1),
                r: rng.random_range(0.05..0.3),
            };
            let q_r = rng.random_range(0.5..3.0);
            let q_p = rng.random_range(-0.45..0.45) * q_r;
            let x = [
                rng.random_range(0.1..1.5),
                rng.random_range(-PI..PI),
                rng.random_range(-PI..PI),
                rng.random_range(-1.0..1.0),
            ];
            let got = EllipticalAvg::from_coeffs(&p, q_r, q_p).rhs(&x).unwrap();
            let want = numerically_averaged(&x, &p, q_r, q_p);
            for k in 0..4 {
                assert!((got[k] - want[k]).abs() < 1e-9 * want[k].abs().max(1.0), "{k}: {got:?} vs {want:?}");
            }
        }
    }

    #[test]
    fn circular_is_the_q_p_zero_reduction() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..100 {
            let p = params(rng.random_range(-0.05..0.05));
            let q_r = rng.random_range(0.5..3.0);
            let ell = EllipticalAvg::from_coeffs(&p, q_r, 0.0);
            let circ = CircularAvg::from_coeffs(&p, q_r);
            let x = [
                rng.random_range(0.05..2.0),
                rng.random_range(-PI..PI),
                rng.random_range(-PI..PI),
                rng.random_range(-1.0..1.0),
            ];
            let de = ell.rhs(&x).unwrap();
            let c = AvgStateElliptical::from_array(x).to_circular().to_array();
            let dc = circ.rhs(&c).unwrap();
            let mapped = [de[0], de[2] - de[1], de[3]];
            for k in 0..3 {
                assert!((mapped[k] - dc[k]).abs() < 1e-12 * dc[k].abs().max(1.0), "{mapped:?} vs {dc:?}");
            }
        }
    }

    #[test]
    fn circular_theta_symmetry() {
        let circ = CircularAvg::from_coeffs(&params(0.01), 1.5);
        for &(r, t, e) in &[(0.3, 0.4, -0.1), (1.2, 2.9, 0.5), (0.01, -1.0, 0.0)] {
            let p = circ.rhs(&[r, t, e]).unwrap();
            let m = circ.rhs(&[r, -t, e]).unwrap();
            assert!((p[0] - m[0]).abs() < 1e-15);
            assert!((p[1] + m[1]).abs() < 1e-12);
            assert!((p[2] - m[2]).abs() < 1e-15);
        }
    }

    #[test]
    fn rhs_periodic_in_angles() {
        let ell = EllipticalAvg::from_coeffs(&params(-0.01), 2.0, 0.5);
        let circ = CircularAvg::from_coeffs(&params(-0.01), 2.0);
        let x = [0.7, 0.3, -2.1, 0.2];
        let base = ell.rhs(&x).unwrap();
        for shifted in [[0.7, 0.3 + 2.0 * PI, -2.1, 0.2], [0.7, 0.3, -2.1 - 2.0 * PI, 0.2]] {
            let s = ell.rhs(&shifted).unwrap();
            for k in 0..4 {
                assert!((s[k] - base[k]).abs() < 1e-11);
            }
        }
        let c0 = circ.rhs(&[0.7, 1.1, 0.2]).unwrap();
        let c1 = circ.rhs(&[0.7, 1.1 + 2.0 * PI, 0.2]).unwrap();
        for k in 0..3 {
            assert!((c0[k] - c1[k]).abs() < 1e-11);
        }
    }

    #[test]
    fn phi_terms_at_q_p_zero() {
        // With q_p = 0 the r-equation reduces to the circular one term by term.
        let p = params(0.002);
        let k = Kernels::new(p.a, p.g);
        let (th, ts) = (0.9f64, -0.4f64);
        let phi1 = (3.0 * th - ts).cos() * k.i1_3a + (th + ts).cos() * k.i1_a;
        assert!(phi1.is_finite());
        let q_r = 1.5;
        let phi2 = q_r * (2.0 * (th - ts)).cos() * k.i1_2a + q_r;
        assert!((phi2 - q_r * ((2.0 * th - 2.0 * ts).cos() * k.i1_2a + 1.0)).abs() < 1e-15);
    }

    #[test]
    fn singular_chart_is_rejected() {
        let ell = EllipticalAvg::from_coeffs(&params(0.0), 2.0, 0.5);
        assert!(matches!(ell.rhs(&[0.0, 0.0, 0.0, 0.0]), Err(SeekError::SingularChart { .. })));
        let circ = CircularAvg::from_coeffs(&params(0.0), 2.0);
        assert!(matches!(circ.rhs(&[1e-10, 0.0, 0.0]), Err(SeekError::SingularChart { .. })));
        assert!(circ.rhs(&[-0.5, 0.0, 0.0]).is_ok());
    }

    #[test]
    fn rk4_examples() {
        let traj = integrate_avg(|_: &[f64; 2]| Ok([0.0, 0.0]), [1.0, -2.0], 1.0, 0.1).unwrap();
        assert!(traj.x.iter().all(|x| *x == [1.0, -2.0]));
        let traj = integrate_avg(|x: &[f64; 1]| Ok([-x[0]]), [1.0], 1.0, 1e-3).unwrap();
        assert!((traj.last()[0] - (-1.0f64).exp()).abs() < 1e-9);
        assert!((traj.t.last().unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn rk4_reports_fault_time() {
        let err = integrate_avg(|x: &[f64; 1]| {
            if x[0] < 0.5 {
                Err(SeekError::SingularChart { t: None, radius: x[0], r_min: R_MIN })
            } else {
                Ok([-1.0])
            }
        }, [1.0], 2.0, 0.01)
        .unwrap_err();
        match err {
            SeekError::SingularChart { t: Some(t), .. } => assert!((t - 0.5).abs() < 0.02),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn lift_examples() {
        let field = ScalarField::circular(0.0, [0.0, 0.0], 1.5).unwrap();
        let p = params(0.0);
        let s = VehicleState { x_c: 1.0, y_c: 0.0, theta: 0.5, e: 0.0, eta: 0.1 };
        let (ell, circ) = lift_to_avg(&s, &p, &field).unwrap();
        assert_eq!(ell.r_tilde, 1.0);
        assert_eq!(ell.theta_star, PI);
        assert!((ell.theta_hat - 0.3).abs() < 1e-15);
        assert!((circ.theta_tilde - wrap_angle(0.3 - PI)).abs() < 1e-15);

        let field = ScalarField::elliptical(0.7, [0.0, 0.0], 2.0, 0.5).unwrap();
        let s = VehicleState { x_c: 1.0, y_c: 1.0, theta: 0.0, e: 0.7 - 2.0 * 0.01, eta: 0.0 };
        let (ell, _) = lift_to_avg(&s, &p, &field).unwrap();
        assert!(ell.e_tilde.abs() < 1e-15);

        let at_source = VehicleState { x_c: 0.0, y_c: 0.0, theta: 0.0, e: 0.0, eta: 0.0 };
        assert_eq!(lift_to_avg(&at_source, &p, &field).unwrap_err(), SeekError::UndefinedBearing);
        assert_eq!(lift_to_avg(&s, &p, &ScalarField::rosenbrock()).unwrap_err(), SeekError::NotQuadratic);
    }

    #[test]
    fn circular_avg_needs_q_p_zero() {
        let f = ScalarField::elliptical(0.0, [0.0, 0.0], 2.0, 0.5).unwrap();
        assert!(matches!(CircularAvg::new(&params(0.0), &f), Err(SeekError::NotCircular(_))));
        let f = ScalarField::elliptical(0.0, [0.0, 0.0], 2.0, 0.0).unwrap();
        assert!(CircularAvg::new(&params(0.0), &f).is_ok());
    }
}
