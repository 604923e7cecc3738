//! Closed-loop stochastic system: unicycle kinematics, washout filter,
//! Ornstein-Uhlenbeck perturbation and the two velocity laws.
//!
//! State ordering everywhere is `(x_c, y_c, theta, e, eta)`. The perturbation
//! derivative in the angular-velocity law is expanded as
//! `d(eta) = -(eta/eps) dt + (g/sqrt(eps)) dW`, so the heading and the
//! perturbation share one Wiener increment and nothing is differentiated
//! numerically.

use serde::{Deserialize, Serialize};

use crate::error::{Result, SeekError};
use crate::field::{ScalarField, Vec2};

pub const STATE_DIM: usize = 5;

/// Controller tuning and sensor geometry.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ControllerParams {
    /// Perturbation amplitude (rad).
    pub a: f64,
    /// Noise gain.
    pub g: f64,
    /// Time-scale parameter of the OU perturbation.
    pub eps: f64,
    /// Forward-velocity gain.
    pub b: f64,
    /// Angular-velocity demodulation gain.
    pub c: f64,
    /// Washout cutoff.
    pub h: f64,
    /// Bias forward velocity, may be negative.
    pub v_c: f64,
    /// Sensor offset from the vehicle center.
    pub r: f64,
}

impl ControllerParams {
    /// `g = 0` is accepted: it switches the noise off and is useful for
    /// deterministic checks.
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("a", self.a),
            ("eps", self.eps),
            ("b", self.b),
            ("c", self.c),
            ("h", self.h),
            ("r", self.r),
        ];
        for (name, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                return Err(SeekError::InvalidParams(format!("{name} must be positive, got {v}")));
            }
        }
        if !(self.g >= 0.0 && self.g.is_finite()) {
            return Err(SeekError::InvalidParams(format!("g must be non-negative, got {}", self.g)));
        }
        if !self.v_c.is_finite() {
            return Err(SeekError::InvalidParams("v_c must be finite".into()));
        }
        Ok(())
    }

    pub fn with_v_c(mut self, v_c: f64) -> Self {
        self.v_c = v_c;
        self
    }

    pub fn with_eps(mut self, eps: f64) -> Self {
        self.eps = eps;
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VehicleState {
    pub x_c: f64,
    pub y_c: f64,
    /// Heading, unwrapped.
    pub theta: f64,
    /// Low-pass state of the washout filter, `(h/(s+h))[J]`.
    pub e: f64,
    /// Colored perturbation.
    pub eta: f64,
}

impl VehicleState {
    pub fn to_array(&self) -> [f64; STATE_DIM] {
        [self.x_c, self.y_c, self.theta, self.e, self.eta]
    }

    pub fn from_array(v: [f64; STATE_DIM]) -> Self {
        Self { x_c: v[0], y_c: v[1], theta: v[2], e: v[3], eta: v[4] }
    }

    pub fn center(&self) -> Vec2 {
        [self.x_c, self.y_c]
    }

    /// Heading wrapped to `(-pi, pi]`.
    pub fn heading_wrapped(&self) -> f64 {
        wrap_angle(self.theta)
    }

    /// Initial state with the default filter and perturbation policy:
    /// `e(0) = J(0)` so the washout output starts at zero, and `eta(0) = 0`.
    pub fn initial(field: &ScalarField, params: &ControllerParams, center: Vec2, theta: f64) -> Self {
        let mut s = Self { x_c: center[0], y_c: center[1], theta, e: 0.0, eta: 0.0 };
        s.e = field.evaluate(sensor_position(&s, params));
        s
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ControlOutputs {
    /// Forward velocity `V_c + b xi`.
    pub v: f64,
    /// Deterministic part of the angular velocity.
    pub psi: f64,
    /// Washout output.
    pub xi: f64,
    /// Sensor reading.
    pub j: f64,
    pub r_s: Vec2,
}

/// Wrap an angle into `(-pi, pi]`.
pub fn wrap_angle(x: f64) -> f64 {
    use std::f64::consts::{PI, TAU};
    let r = (x + PI).rem_euclid(TAU) - PI;
    if r <= -PI {
        r + TAU
    } else {
        r
    }
}

pub fn sensor_position(state: &VehicleState, params: &ControllerParams) -> Vec2 {
    let (s, c) = state.theta.sin_cos();
    [state.x_c + params.r * c, state.y_c + params.r * s]
}

/// High-pass output `xi = J - e` of the washout filter.
pub fn washout_output(state: &VehicleState, j: f64) -> f64 {
    j - state.e
}

pub fn control_outputs(state: &VehicleState, field: &ScalarField, params: &ControllerParams) -> ControlOutputs {
    let r_s = sensor_position(state, params);
    let j = field.evaluate(r_s);
    let xi = washout_output(state, j);
    ControlOutputs {
        v: params.v_c + params.b * xi,
        psi: -(params.a / params.eps) * state.eta + params.c * xi * state.eta.sin(),
        xi,
        j,
        r_s,
    }
}

/// Deterministic part of the closed-loop SDE.
pub fn drift(state: &VehicleState, field: &ScalarField, params: &ControllerParams) -> [f64; STATE_DIM] {
    let out = control_outputs(state, field, params);
    let (s, c) = state.theta.sin_cos();
    [out.v * c, out.v * s, out.psi, params.h * out.xi, -state.eta / params.eps]
}

/// Coefficients multiplying the single shared Wiener increment.
pub fn diffusion(params: &ControllerParams) -> [f64; STATE_DIM] {
    let k = params.g / params.eps.sqrt();
    [0.0, 0.0, params.a * k, 0.0, k]
}
