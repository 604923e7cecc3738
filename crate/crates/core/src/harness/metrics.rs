//! Scalar summaries of a trajectory. All metrics are pure functions of the
//! recorded samples and the source location.

use serde::Serialize;

use super::config::MetricsConfig;
use crate::closed_loop::wrap_angle;
use crate::field::Vec2;
use crate::sde::Trajectory;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RunMetrics {
    /// Start of the trailing window.
    pub window_start: f64,
    /// Mean of `|r_c - r*|` over the trailing window.
    pub trailing_mean_distance: f64,
    pub final_distance: f64,
    /// First time after which the distance stays below `delta` for at least
    /// the window length.
    pub time_to_ball: Option<f64>,
    /// Mean of `cos(theta - arg(r_c - r*))` over the trailing window:
    /// positive when the vehicle points away from the source.
    pub heading_cos: f64,
    /// Mean rate of `arg(r_c - r*)` over the trailing window (unwrapped).
    pub angular_drift: f64,
    pub trailing_mean_v: f64,
    pub v_min: f64,
    pub v_max: f64,
}

pub fn distance(p: Vec2, source: Vec2) -> f64 {
    (p[0] - source[0]).hypot(p[1] - source[1])
}

fn polar_angle(p: Vec2, source: Vec2) -> f64 {
    (p[1] - source[1]).atan2(p[0] - source[0])
}

pub fn run_metrics(traj: &Trajectory, source: Vec2, cfg: &MetricsConfig) -> RunMetrics {
    let s = &traj.samples;
    let t_end = s.last().map_or(0.0, |x| x.t);
    let window = cfg.window_fraction * t_end;
    let window_start = t_end - window;
    let first = s.iter().position(|x| x.t >= window_start).unwrap_or(s.len() - 1);
    let tail = &s[first..];
    let n = tail.len() as f64;

    let dist: Vec<f64> = s.iter().map(|x| distance(x.state.center(), source)).collect();
    let trailing_mean_distance = dist[first..].iter().sum::<f64>() / n;

    let heading_cos = tail
        .iter()
        .map(|x| (x.state.theta - polar_angle(x.state.center(), source)).cos())
        .sum::<f64>()
        / n;

    let mut unwrapped = 0.0;
    for w in tail.windows(2) {
        let a0 = polar_angle(w[0].state.center(), source);
        let a1 = polar_angle(w[1].state.center(), source);
        unwrapped += wrap_angle(a1 - a0);
    }
    let span = tail.last().unwrap().t - tail[0].t;
    let angular_drift = if span > 0.0 { unwrapped / span } else { 0.0 };

    let mut time_to_ball = None;
    let mut run_start: Option<f64> = None;
    for (x, d) in s.iter().zip(&dist) {
        if *d < cfg.delta {
            let t0 = *run_start.get_or_insert(x.t);
            if x.t - t0 >= window {
                time_to_ball = Some(t0);
                break;
            }
        } else {
            run_start = None;
        }
    }

    let (v_min, v_max) = s
        .iter()
        .map(|x| x.outputs.v)
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)));

    RunMetrics {
        window_start,
        trailing_mean_distance,
        final_distance: *dist.last().unwrap(),
        time_to_ball,
        heading_cos,
        angular_drift,
        trailing_mean_v: tail.iter().map(|x| x.outputs.v).sum::<f64>() / n,
        v_min,
        v_max,
    }
}
