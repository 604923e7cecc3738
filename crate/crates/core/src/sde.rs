//! Fixed-step Euler-Maruyama integration of the closed loop.
//!
//! Noise is additive and constant, so the scheme is exact in the diffusion
//! term. Every run draws its increments from a ChaCha stream selected by
//! `(seed, stream)`, which makes Monte Carlo runs independent of execution
//! order.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::closed_loop::{self, ControlOutputs, ControllerParams, VehicleState, STATE_DIM};
use crate::error::{Result, SeekError};
use crate::field::ScalarField;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum NoiseMode {
    /// i.i.d. `N(0, dt)` increments.
    ExactIncrement,
    /// Gaussian sample-and-hold white noise: one `N(0, 1/t_hold)` level per
    /// hold interval, integrated over each sub-step.
    BandLimited { t_hold: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SdeConfig {
    pub dt: f64,
    pub t_end: f64,
    pub seed: u64,
    pub record_stride: usize,
    pub noise_mode: NoiseMode,
}

impl SdeConfig {
    /// Defaults: `dt = eps/100`, every 10th step recorded, exact increments.
    pub fn for_params(params: &ControllerParams, t_end: f64, seed: u64) -> Self {
        Self {
            dt: params.eps / 100.0,
            t_end,
            seed,
            record_stride: 10,
            noise_mode: NoiseMode::ExactIncrement,
        }
    }

    pub fn n_steps(&self) -> usize {
        (self.t_end / self.dt).round() as usize
    }

    /// Hard errors, plus soft warnings returned as strings.
    pub fn validate(&self, eps: f64) -> Result<Vec<String>> {
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(SeekError::InvalidConfig(format!("dt must be positive, got {}", self.dt)));
        }
        if !(self.t_end >= self.dt) {
            return Err(SeekError::InvalidConfig(format!("t_end = {} is shorter than dt", self.t_end)));
        }
        if self.record_stride == 0 {
            return Err(SeekError::InvalidConfig("record_stride must be at least 1".into()));
        }
        if self.dt >= eps {
            return Err(SeekError::InvalidConfig(format!(
                "dt = {} must be below eps = {eps}: the -eta/eps term is unstable otherwise",
                self.dt
            )));
        }
        if let NoiseMode::BandLimited { t_hold } = self.noise_mode {
            if !(t_hold >= self.dt) {
                return Err(SeekError::InvalidConfig(format!("t_hold = {t_hold} must be at least dt")));
            }
        }
        let mut warnings = Vec::new();
        if self.dt > eps / 10.0 {
            warnings.push(format!("dt = {} exceeds eps/10 = {}; results may be inaccurate", self.dt, eps / 10.0));
        }
        Ok(warnings)
    }
}

/// Seeded stream of Wiener increments.
#[derive(Debug, Clone)]
pub struct WienerStream {
    rng: ChaCha8Rng,
    dt: f64,
    hold_steps: usize,
    step: usize,
    held: f64,
}

impl WienerStream {
    /// `stream` selects an independent substream of `seed`.
    pub fn new(seed: u64, stream: u64, dt: f64, mode: NoiseMode) -> Result<Self> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        let hold_steps = match mode {
            NoiseMode::ExactIncrement => 1,
            NoiseMode::BandLimited { t_hold } => {
                if !(t_hold >= dt) {
                    return Err(SeekError::InvalidConfig(format!("t_hold = {t_hold} must be at least dt")));
                }
                (t_hold / dt).round() as usize
            }
        };
        Ok(Self { rng, dt, hold_steps, step: 0, held: 0.0 })
    }

    pub fn next_increment(&mut self) -> f64 {
        if self.hold_steps == 1 {
            let z: f64 = StandardNormal.sample(&mut self.rng);
            return z * self.dt.sqrt();
        }
        if self.step % self.hold_steps == 0 {
            let z: f64 = StandardNormal.sample(&mut self.rng);
            let t_hold = self.hold_steps as f64 * self.dt;
            // Noise level over the hold; integrates to variance t_hold.
            self.held = z / t_hold.sqrt();
        }
        self.step += 1;
        self.held * self.dt
    }
}

impl Iterator for WienerStream {
    type Item = f64;

    fn next(&mut self) -> Option<f64> {
        Some(self.next_increment())
    }
}

pub fn wiener_increments(seed: u64, n_steps: usize, dt: f64, mode: NoiseMode) -> Result<Vec<f64>> {
    if n_steps == 0 {
        return Err(SeekError::InvalidConfig("n_steps must be at least 1".into()));
    }
    Ok(WienerStream::new(seed, 0, dt, mode)?.take(n_steps).collect())
}

/// One Euler-Maruyama step `x + f(x) dt + sigma dW`.
pub fn em_step<const N: usize>(
    t: f64,
    state: &[f64; N],
    drift: impl FnOnce(&[f64; N]) -> [f64; N],
    diffusion: &[f64; N],
    dt: f64,
    dw: f64,
) -> Result<[f64; N]> {
    let f = drift(state);
    let next: [f64; N] = std::array::from_fn(|i| state[i] + f[i] * dt + diffusion[i] * dw);
    if next.iter().all(|v| v.is_finite()) {
        Ok(next)
    } else {
        Err(SeekError::IntegrationFault { t: t + dt, state: next.to_vec() })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Sample {
    pub t: f64,
    pub state: VehicleState,
    pub outputs: ControlOutputs,
}

#[derive(Debug, Clone)]
pub struct TrajectoryMeta {
    pub params: ControllerParams,
    pub field: ScalarField,
    pub config: SdeConfig,
    pub stream: u64,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone)]
pub struct Trajectory {
    pub samples: Vec<Sample>,
    pub meta: TrajectoryMeta,
}

impl Trajectory {
    pub fn last(&self) -> &Sample {
        self.samples.last().expect("trajectory always holds the t = 0 sample")
    }

    pub fn times(&self) -> impl Iterator<Item = f64> + '_ {
        self.samples.iter().map(|s| s.t)
    }
}

/// Integrate with the noise stream of `config.seed`, substream 0.
pub fn simulate(
    field: &ScalarField,
    params: &ControllerParams,
    initial: VehicleState,
    config: &SdeConfig,
) -> Result<Trajectory> {
    simulate_stream(field, params, initial, config, 0)
}

pub fn simulate_stream(
    field: &ScalarField,
    params: &ControllerParams,
    initial: VehicleState,
    config: &SdeConfig,
    stream: u64,
) -> Result<Trajectory> {
    let noise = WienerStream::new(config.seed, stream, config.dt, config.noise_mode)?;
    let mut traj = simulate_with_increments(field, params, initial, config, noise)?;
    traj.meta.stream = stream;
    Ok(traj)
}

/// Integrate with caller-supplied increments, e.g. a coarsened Brownian path.
pub fn simulate_with_increments<I>(
    field: &ScalarField,
    params: &ControllerParams,
    initial: VehicleState,
    config: &SdeConfig,
    increments: I,
) -> Result<Trajectory>
where
    I: IntoIterator<Item = f64>,
{
    params.validate()?;
    let warnings = config.validate(params.eps)?;
    let n_steps = config.n_steps();
    let sigma = closed_loop::diffusion(params);
    let mut noise = increments.into_iter();

    let record = |t: f64, s: &VehicleState| Sample {
        t,
        state: *s,
        outputs: closed_loop::control_outputs(s, field, params),
    };

    let mut samples = Vec::with_capacity(n_steps / config.record_stride + 1);
    let mut x = initial.to_array();
    samples.push(record(0.0, &initial));
    for k in 0..n_steps {
        let t = k as f64 * config.dt;
        let dw = noise
            .next()
            .ok_or_else(|| SeekError::InvalidConfig(format!("increment stream ended after {k} steps")))?;
        x = em_step::<STATE_DIM>(
            t,
            &x,
            |s| closed_loop::drift(&VehicleState::from_array(*s), field, params),
            &sigma,
            config.dt,
            dw,
        )?;
        if (k + 1) % config.record_stride == 0 {
            samples.push(record((k + 1) as f64 * config.dt, &VehicleState::from_array(x)));
        }
    }
    Ok(Trajectory {
        samples,
        meta: TrajectoryMeta { params: *params, field: field.clone(), config: *config, stream: 0, warnings },
    })
}
