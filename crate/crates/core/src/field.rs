//! Static scalar signal fields `J = f(r)`.
//!
//! The quadratic fields use the `(q_r, q_p)` parameterization
//!
//! ```text
//! J = f* - (q_r + 2 q_p)(x - x*)^2 - (q_r - 2 q_p)(y - y*)^2
//! ```
//!
//! which is what the averaged systems are written in. `q_p = 0` gives
//! circular level sets.

use std::fmt;
use std::sync::Arc;

use crate::error::{Result, SeekError};

pub type Vec2 = [f64; 2];

/// Black-box field evaluation for user-defined maps.
pub type FieldFn = Arc<dyn Fn(Vec2) -> f64 + Send + Sync>;

#[derive(Clone)]
pub enum FieldKind {
    Circular { q_r: f64 },
    Elliptical { q_r: f64, q_p: f64 },
    /// `J = -x^2 - (y - x^2)^2`, isolated maximum 0 at the origin.
    Rosenbrock,
    Custom(FieldFn),
}

impl fmt::Debug for FieldKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldKind::Circular { q_r } => f.debug_struct("Circular").field("q_r", q_r).finish(),
            FieldKind::Elliptical { q_r, q_p } => f
                .debug_struct("Elliptical")
                .field("q_r", q_r)
                .field("q_p", q_p)
                .finish(),
            FieldKind::Rosenbrock => f.write_str("Rosenbrock"),
            FieldKind::Custom(_) => f.write_str("Custom(..)"),
        }
    }
}

/// Curvature of a quadratic field in the `(q_r, q_p)` form.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct Quadratic {
    pub q_r: f64,
    pub q_p: f64,
}

impl Quadratic {
    pub fn q_x(&self) -> f64 {
        self.q_r + 2.0 * self.q_p
    }

    pub fn q_y(&self) -> f64 {
        self.q_r - 2.0 * self.q_p
    }
}

/// An immutable scalar field with its peak value and source location.
#[derive(Debug, Clone)]
pub struct ScalarField {
    kind: FieldKind,
    f_star: f64,
    source: Vec2,
}

impl ScalarField {
    pub fn circular(f_star: f64, source: Vec2, q_r: f64) -> Result<Self> {
        if !(q_r > 0.0 && q_r.is_finite()) {
            return Err(SeekError::InvalidField(format!("q_r must be positive, got {q_r}")));
        }
        check_finite(f_star, source)?;
        Ok(Self { kind: FieldKind::Circular { q_r }, f_star, source })
    }

    pub fn elliptical(f_star: f64, source: Vec2, q_r: f64, q_p: f64) -> Result<Self> {
        qxqy_from_qrqp(q_r, q_p)?;
        check_finite(f_star, source)?;
        Ok(Self { kind: FieldKind::Elliptical { q_r, q_p }, f_star, source })
    }

    /// Elliptical field from the axis curvatures `(q_x, q_y)`.
    pub fn elliptical_xy(f_star: f64, source: Vec2, q_x: f64, q_y: f64) -> Result<Self> {
        let (q_r, q_p) = qrqp_from_qxqy(q_x, q_y)?;
        Self::elliptical(f_star, source, q_r, q_p)
    }

    pub fn rosenbrock() -> Self {
        Self { kind: FieldKind::Rosenbrock, f_star: 0.0, source: [0.0, 0.0] }
    }

    /// User-defined field. `f_star` and `source` are only used by analysis
    /// code (metrics, lifts); the controller never reads them.
    pub fn custom<F>(f_star: f64, source: Vec2, f: F) -> Result<Self>
    where
        F: Fn(Vec2) -> f64 + Send + Sync + 'static,
    {
        check_finite(f_star, source)?;
        Ok(Self { kind: FieldKind::Custom(Arc::new(f)), f_star, source })
    }

    pub fn kind(&self) -> &FieldKind {
        &self.kind
    }

    pub fn f_star(&self) -> f64 {
        self.f_star
    }

    pub fn source(&self) -> Vec2 {
        self.source
    }

    /// `(q_r, q_p)` for the quadratic variants, `None` otherwise.
    pub fn quadratic(&self) -> Option<Quadratic> {
        match self.kind {
            FieldKind::Circular { q_r } => Some(Quadratic { q_r, q_p: 0.0 }),
            FieldKind::Elliptical { q_r, q_p } => Some(Quadratic { q_r, q_p }),
            _ => None,
        }
    }

    pub fn evaluate(&self, position: Vec2) -> f64 {
        let dx = position[0] - self.source[0];
        let dy = position[1] - self.source[1];
        match &self.kind {
            FieldKind::Circular { q_r } => self.f_star - q_r * (dx * dx + dy * dy),
            FieldKind::Elliptical { q_r, q_p } => {
                self.f_star - (q_r + 2.0 * q_p) * dx * dx - (q_r - 2.0 * q_p) * dy * dy
            }
            FieldKind::Rosenbrock => {
                let (x, y) = (position[0], position[1]);
                let w = y - x * x;
                -x * x - w * w
            }
            FieldKind::Custom(f) => f(position),
        }
    }

    /// Gradient and Hessian at `position`. Analytic for the built-in
    /// variants, central differences for custom fields.
    pub fn gradient_hessian(&self, position: Vec2) -> (Vec2, [[f64; 2]; 2]) {
        let dx = position[0] - self.source[0];
        let dy = position[1] - self.source[1];
        match &self.kind {
            FieldKind::Circular { q_r } => {
                ([-2.0 * q_r * dx, -2.0 * q_r * dy], [[-2.0 * q_r, 0.0], [0.0, -2.0 * q_r]])
            }
            FieldKind::Elliptical { q_r, q_p } => {
                let (qx, qy) = (q_r + 2.0 * q_p, q_r - 2.0 * q_p);
                ([-2.0 * qx * dx, -2.0 * qy * dy], [[-2.0 * qx, 0.0], [0.0, -2.0 * qy]])
            }
            FieldKind::Rosenbrock => {
                let (x, y) = (position[0], position[1]);
                let w = y - x * x;
                let grad = [-2.0 * x + 4.0 * x * w, -2.0 * w];
                let hxy = 4.0 * x;
                (grad, [[-2.0 + 4.0 * y - 12.0 * x * x, hxy], [hxy, -2.0]])
            }
            FieldKind::Custom(f) => finite_difference_derivatives(f.as_ref(), position),
        }
    }
}

/// Central-difference step used for custom fields.
pub fn fd_step(position: Vec2) -> f64 {
    1e-5 * position[0].hypot(position[1]).max(1.0)
}

fn finite_difference_derivatives(f: &dyn Fn(Vec2) -> f64, p: Vec2) -> (Vec2, [[f64; 2]; 2]) {
    let s = fd_step(p);
    let at = |dx: f64, dy: f64| f([p[0] + dx, p[1] + dy]);
    let f0 = at(0.0, 0.0);
    let (fxp, fxm) = (at(s, 0.0), at(-s, 0.0));
    let (fyp, fym) = (at(0.0, s), at(0.0, -s));
    let grad = [(fxp - fxm) / (2.0 * s), (fyp - fym) / (2.0 * s)];
    let hxx = (fxp - 2.0 * f0 + fxm) / (s * s);
    let hyy = (fyp - 2.0 * f0 + fym) / (s * s);
    let hxy = (at(s, s) - at(s, -s) - at(-s, s) + at(-s, -s)) / (4.0 * s * s);
    (grad, [[hxx, hxy], [hxy, hyy]])
}

fn check_finite(f_star: f64, source: Vec2) -> Result<()> {
    if f_star.is_finite() && source.iter().all(|v| v.is_finite()) {
        Ok(())
    } else {
        Err(SeekError::InvalidField("f_star and source must be finite".into()))
    }
}

/// `(q_r, q_p) -> (q_x, q_y)`; rejects degenerate or indefinite maps.
pub fn qxqy_from_qrqp(q_r: f64, q_p: f64) -> Result<(f64, f64)> {
    if !(q_r.is_finite() && q_p.is_finite()) || q_r <= 2.0 * q_p.abs() {
        return Err(SeekError::InvalidField(format!(
            "need q_r > 2|q_p|, got q_r = {q_r}, q_p = {q_p}"
        )));
    }
    Ok((q_r + 2.0 * q_p, q_r - 2.0 * q_p))
}

/// Inverse of [`qxqy_from_qrqp`].
pub fn qrqp_from_qxqy(q_x: f64, q_y: f64) -> Result<(f64, f64)> {
    if !(q_x > 0.0 && q_y > 0.0 && q_x.is_finite() && q_y.is_finite()) {
        return Err(SeekError::InvalidField(format!(
            "q_x and q_y must be positive, got {q_x}, {q_y}"
        )));
    }
    Ok(((q_x + q_y) / 2.0, (q_x - q_y) / 4.0))
}
