//! Experiment drivers: single runs, Monte Carlo ensembles, averaged-ODE
//! integration, averaging validation and the combined report.

use rayon::prelude::*;
use serde::Serialize;

use super::config::{FieldSpec, Scenario};
use super::metrics::{distance, run_metrics, RunMetrics};
use crate::averaging::{integrate_avg_strided, lift_to_avg, CircularAvg, EllipticalAvg, DEFAULT_AVG_DT};
use crate::closed_loop::wrap_angle;
use crate::equilibria::{equilibrium_report, EquilibriumReport};
use crate::error::Result;
use crate::sde::{simulate_stream, Trajectory};
use crate::stability::{stability_report, StabilityReport};

/// Simulate the scenario on noise substream 0 and summarize it.
pub fn run_scenario(scenario: &Scenario) -> Result<(Trajectory, RunMetrics)> {
    run_stream(scenario, 0)
}

pub fn run_stream(scenario: &Scenario, stream: u64) -> Result<(Trajectory, RunMetrics)> {
    let field = scenario.field()?;
    let x0 = scenario.initial_state(&field);
    let traj = simulate_stream(&field, &scenario.controller, x0, &scenario.sde, stream)?;
    let m = run_metrics(&traj, field.source(), &scenario.metrics);
    Ok((traj, m))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Quantiles {
    pub median: f64,
    pub q10: f64,
    pub q90: f64,
    pub min: f64,
    pub max: f64,
}

/// Linear-interpolation quantile of unsorted data.
pub fn quantile(data: &[f64], p: f64) -> f64 {
    let mut v: Vec<f64> = data.to_vec();
    v.sort_by(f64::total_cmp);
    if v.is_empty() {
        return f64::NAN;
    }
    let pos = p.clamp(0.0, 1.0) * (v.len() - 1) as f64;
    let (lo, hi) = (pos.floor() as usize, pos.ceil() as usize);
    v[lo] + (pos - lo as f64) * (v[hi] - v[lo])
}

impl Quantiles {
    pub fn of(data: &[f64]) -> Self {
        Self {
            median: quantile(data, 0.5),
            q10: quantile(data, 0.1),
            q90: quantile(data, 0.9),
            min: quantile(data, 0.0),
            max: quantile(data, 1.0),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunOutcome {
    pub index: usize,
    pub metrics: Option<RunMetrics>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MonteCarloReport {
    pub tag: String,
    pub seed: u64,
    pub n_runs: usize,
    pub n_failed: usize,
    pub trailing_mean_distance: Quantiles,
    pub heading_cos: Quantiles,
    pub angular_drift: Quantiles,
    pub abs_angular_drift: Quantiles,
    pub trailing_mean_v: Quantiles,
    /// Fraction of successful runs that reached the ball.
    pub reached_ball: f64,
    pub runs: Vec<RunOutcome>,
}

impl MonteCarloReport {
    fn metric(&self, f: impl Fn(&RunMetrics) -> f64) -> Vec<f64> {
        self.runs.iter().filter_map(|r| r.metrics.as_ref()).map(f).collect()
    }

    pub fn trailing_distances(&self) -> Vec<f64> {
        self.metric(|m| m.trailing_mean_distance)
    }

    pub fn angular_drifts(&self) -> Vec<f64> {
        self.metric(|m| m.angular_drift)
    }
}

/// `n_runs` independent runs on substreams `0..n_runs` of the scenario seed.
/// Faulted runs are recorded, not fatal.
pub fn monte_carlo(scenario: &Scenario, n_runs: usize) -> MonteCarloReport {
    let runs: Vec<RunOutcome> = (0..n_runs.max(1))
        .into_par_iter()
        .map(|i| match run_stream(scenario, i as u64) {
            Ok((_, m)) => RunOutcome { index: i, metrics: Some(m), error: None },
            Err(e) => RunOutcome { index: i, metrics: None, error: Some(e.to_string()) },
        })
        .collect();
    let ok: Vec<&RunMetrics> = runs.iter().filter_map(|r| r.metrics.as_ref()).collect();
    let col = |f: &dyn Fn(&RunMetrics) -> f64| Quantiles::of(&ok.iter().map(|m| f(m)).collect::<Vec<_>>());
    MonteCarloReport {
        tag: scenario.tag.clone(),
        seed: scenario.sde.seed,
        n_runs: runs.len(),
        n_failed: runs.len() - ok.len(),
        trailing_mean_distance: col(&|m| m.trailing_mean_distance),
        heading_cos: col(&|m| m.heading_cos),
        angular_drift: col(&|m| m.angular_drift),
        abs_angular_drift: col(&|m| m.angular_drift.abs()),
        trailing_mean_v: col(&|m| m.trailing_mean_v),
        reached_ball: ok.iter().filter(|m| m.time_to_ball.is_some()).count() as f64 / ok.len().max(1) as f64,
        runs,
    }
}

/// Averaged-ODE trajectory in a common layout. Angles that the circular
/// system does not carry are NaN.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AveragedRun {
    pub t: Vec<f64>,
    pub r_tilde: Vec<f64>,
    pub theta_star: Vec<f64>,
    pub theta_hat: Vec<f64>,
    pub theta_tilde: Vec<f64>,
    pub e_tilde: Vec<f64>,
}

/// Integrate the averaged system from the lifted initial condition. The
/// circular system is used for circular fields, the elliptical one otherwise.
pub fn integrate_averaged(scenario: &Scenario, t_end: f64, dt: f64, record_every: f64) -> Result<AveragedRun> {
    let field = scenario.field()?;
    let p = scenario.controller;
    let (ell, circ) = lift_to_avg(&scenario.initial_state(&field), &p, &field)?;
    let stride = ((record_every / dt).round() as usize).max(1);
    match scenario.field {
        FieldSpec::Circular { .. } => {
            let model = CircularAvg::new(&p, &field)?;
            let tr = integrate_avg_strided(|x| model.rhs(x), circ.to_array(), t_end, dt, stride)?;
            let n = tr.t.len();
            Ok(AveragedRun {
                r_tilde: tr.x.iter().map(|x| x[0]).collect(),
                theta_star: vec![f64::NAN; n],
                theta_hat: vec![f64::NAN; n],
                theta_tilde: tr.x.iter().map(|x| wrap_angle(x[1])).collect(),
                e_tilde: tr.x.iter().map(|x| x[2]).collect(),
                t: tr.t,
            })
        }
        _ => {
            let model = EllipticalAvg::new(&p, &field)?;
            let tr = integrate_avg_strided(|x| model.rhs(x), ell.to_array(), t_end, dt, stride)?;
            Ok(AveragedRun {
                r_tilde: tr.x.iter().map(|x| x[0]).collect(),
                theta_star: tr.x.iter().map(|x| wrap_angle(x[1])).collect(),
                theta_hat: tr.x.iter().map(|x| wrap_angle(x[2])).collect(),
                theta_tilde: tr.x.iter().map(|x| wrap_angle(x[2] - x[1])).collect(),
                e_tilde: tr.x.iter().map(|x| x[3]).collect(),
                t: tr.t,
            })
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AveragingRow {
    pub eps: f64,
    pub dt: f64,
    pub paths: usize,
    pub failed: usize,
    /// `sup_t |mean_paths r_tilde(t) - r_tilde_av(t)|` over the comparison grid.
    pub discrepancy: f64,
    pub t_at_max: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AveragingValidation {
    pub tag: String,
    pub t_end: f64,
    pub grid: f64,
    pub rows: Vec<AveragingRow>,
    /// Discrepancy non-increasing as `eps` decreases.
    pub monotone: bool,
}

impl AveragingValidation {
    /// `discrepancy(eps_i) / discrepancy(eps_j)` for rows `i`, `j`.
    pub fn shrink_factor(&self, coarse: usize, fine: usize) -> f64 {
        self.rows[coarse].discrepancy / self.rows[fine].discrepancy
    }
}

/// Compare the ensemble-mean radius of the stochastic closed loop with the
/// averaged ODE for every `eps` in the scenario's averaging section.
pub fn validate_averaging(scenario: &Scenario) -> Result<AveragingValidation> {
    let cfg = scenario.averaging.clone();
    let field = scenario.field()?;
    let src = field.source();
    let avg_dt = DEFAULT_AVG_DT.min(cfg.grid);
    let av = integrate_averaged(scenario, cfg.t_end, avg_dt, cfg.grid)?;

    let mut rows = Vec::with_capacity(cfg.eps.len());
    for &eps in &cfg.eps {
        let mut sc = scenario.clone().with_eps(eps);
        sc.sde.t_end = cfg.t_end;
        sc.sde.record_stride = ((cfg.grid / sc.sde.dt).round() as usize).max(1);
        let paths: Vec<Option<Vec<f64>>> = (0..cfg.paths)
            .into_par_iter()
            .map(|i| {
                let x0 = sc.initial_state(&field);
                simulate_stream(&field, &sc.controller, x0, &sc.sde, i as u64)
                    .ok()
                    .map(|tr| tr.samples.iter().map(|s| distance(s.state.center(), src)).collect())
            })
            .collect();
        let ok: Vec<&Vec<f64>> = paths.iter().flatten().collect();
        let n = ok.iter().map(|p| p.len()).min().unwrap_or(0).min(av.t.len());
        let (mut worst, mut t_at) = (0.0f64, 0.0);
        for k in 0..n {
            let mean = ok.iter().map(|p| p[k]).sum::<f64>() / ok.len() as f64;
            let d = (mean - av.r_tilde[k]).abs();
            if d > worst {
                worst = d;
                t_at = av.t[k];
            }
        }
        rows.push(AveragingRow {
            eps,
            dt: sc.sde.dt,
            paths: cfg.paths,
            failed: cfg.paths - ok.len(),
            discrepancy: if ok.is_empty() { f64::NAN } else { worst },
            t_at_max: t_at,
        });
    }
    let mut order: Vec<&AveragingRow> = rows.iter().collect();
    order.sort_by(|a, b| b.eps.total_cmp(&a.eps));
    let monotone = order.windows(2).all(|w| w[1].discrepancy <= w[0].discrepancy);
    Ok(AveragingValidation { tag: scenario.tag.clone(), t_end: cfg.t_end, grid: cfg.grid, rows, monotone })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Analysis {
    pub equilibria: EquilibriumReport,
    pub stability: StabilityReport,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub scenario: Scenario,
    pub analysis: Option<Analysis>,
    /// Why the analysis is missing, e.g. a non-quadratic field.
    pub analysis_note: Option<String>,
    pub simulation: Option<RunMetrics>,
    pub simulation_error: Option<String>,
}

/// Closed-form analysis plus, optionally, one simulated run.
pub fn report(scenario: &Scenario, simulate: bool) -> Result<Report> {
    let field = scenario.field()?;
    let p = &scenario.controller;
    let (analysis, analysis_note) = match equilibrium_report(p, &field).and_then(|eq| Ok((eq, stability_report(p, &field)?))) {
        Ok((equilibria, stability)) => (Some(Analysis { equilibria, stability }), None),
        Err(e) => (None, Some(e.to_string())),
    };
    let (simulation, simulation_error) = if simulate {
        match run_scenario(scenario) {
            Ok((_, m)) => (Some(m), None),
            Err(e) => (None, Some(e.to_string())),
        }
    } else {
        (None, None)
    };
    Ok(Report { scenario: scenario.clone(), analysis, analysis_note, simulation, simulation_error })
}
