//! Stochastic extremum-seeking source localization with a nonholonomic
//! unicycle whose forward and angular velocities are both regulated.
//!
//! The crate covers the closed-loop stochastic system, its Euler-Maruyama
//! simulation, the averaged deterministic systems in polar error
//! coordinates, closed-form equilibria and their Routh-Hurwitz stability.

pub mod averaging;
pub mod closed_loop;
pub mod equilibria;
pub mod error;
pub mod field;
pub mod harness;
pub mod sde;
pub mod stability;

pub use closed_loop::{ControllerParams, VehicleState};
pub use error::{Result, SeekError};
pub use field::ScalarField;
pub use sde::{NoiseMode, SdeConfig, Trajectory};
