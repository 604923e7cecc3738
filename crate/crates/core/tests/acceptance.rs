//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line each,
//! and exits non-zero if any criterion fails.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::{circular_grid, elliptical_grid, fd_jacobian, max_abs_diff, scenario_path};
use srcseek::averaging::{i1, CircularAvg, EllipticalAvg};
use srcseek::closed_loop::wrap_angle;
use srcseek::equilibria::{circular_equilibria, elliptical_equilibria, gamma_set, iota_index, vc_thresholds};
use srcseek::field::ScalarField;
use srcseek::harness::{integrate_averaged, monte_carlo, validate_averaging, Scenario};
use srcseek::stability::{
    eigenvalues, hurwitz, jacobian_circular, jacobian_elliptical, max_real_part, poly_mul, poly_roots, theorem1_check,
    theorem2_check, CharPoly, CircularBranch,
};
use srcseek::ControllerParams;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

const MC_RUNS: usize = 20;

fn criterion_1() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut count = 0;
    for (p, f) in elliptical_grid() {
        let model = EllipticalAvg::new(&p, &f).unwrap();
        for eq in elliptical_equilibria(&p, &f).unwrap().iter().filter(|e| e.admissible) {
            let r = model.rhs(&eq.state).unwrap();
            worst = r.iter().fold(worst, |m, v| m.max(v.abs()));
            count += 1;
        }
    }
    for (p, f) in circular_grid() {
        let model = CircularAvg::new(&p, &f).unwrap();
        for eq in circular_equilibria(&p, &f).unwrap().equilibria.iter().filter(|e| e.admissible) {
            let r = model.rhs(&eq.state.unwrap()).unwrap();
            worst = r.iter().fold(worst, |m, v| m.max(v.abs()));
            count += 1;
        }
    }
    outcome(worst < 1e-10, format!("max |rhs| = {worst:.2e} over {count} admissible equilibria, 48 parameter sets"))
}

fn criterion_2() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut count = 0;
    for (p, f) in elliptical_grid() {
        let model = EllipticalAvg::new(&p, &f).unwrap();
        for eq in elliptical_equilibria(&p, &f).unwrap().iter().filter(|e| e.admissible) {
            let j = jacobian_elliptical(eq.index, &p, &f).unwrap();
            let fd = fd_jacobian(|x| model.rhs(x).unwrap(), &eq.state);
            worst = worst.max(max_abs_diff(&j.matrix, &fd));
            count += 1;
        }
    }
    for (p, f) in circular_grid() {
        let model = CircularAvg::new(&p, &f).unwrap();
        for eq in circular_equilibria(&p, &f).unwrap().equilibria.iter().filter(|e| e.admissible) {
            let j = jacobian_circular(eq.index, &p, &f).unwrap();
            let fd = fd_jacobian(|x| model.rhs(x).unwrap(), &eq.state.unwrap());
            worst = worst.max(max_abs_diff(&j.matrix, &fd));
            count += 1;
        }
    }
    outcome(worst < 1e-6, format!("max |analytic - FD| = {worst:.2e} over {count} Jacobians"))
}

/// Random monic polynomial of degree 2..=4 built from random roots; about
/// half are built purely from left half-plane roots.
fn random_poly(rng: &mut ChaCha8Rng) -> Vec<f64> {
    let degree = rng.random_range(2..=4);
    let stable = rng.random_bool(0.5);
    let mut p = vec![1.0];
    let mut d = 0;
    while d < degree {
        let re = -rng.random_range(0.01..5.0);
        if degree - d >= 2 && rng.random_bool(0.5) {
            let im = rng.random_range(0.01..5.0);
            p = poly_mul(&p, &[1.0, -2.0 * re, re * re + im * im]);
            d += 2;
        } else {
            p = poly_mul(&p, &[1.0, -re]);
            d += 1;
        }
    }
    if !stable {
        // Append a right half-plane root, truncate back to the degree and jitter.
        let shift = rng.random_range(0.05..3.0);
        p = poly_mul(&p, &[1.0, -shift]);
        p.pop();
        p = p.iter().enumerate().map(|(i, c)| if i == 0 { *c } else { c * rng.random_range(0.5..1.5) }).collect();
    }
    p
}

fn criterion_3() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let (mut checked, mut excluded, mut disagree, mut stable) = (0, 0, 0, 0);
    while checked + excluded < 1000 {
        let coeffs = random_poly(&mut rng);
        let roots = poly_roots(&coeffs).unwrap();
        if roots.iter().any(|r| r.0.abs() < 1e-10) {
            excluded += 1;
            continue;
        }
        let oracle = max_real_part(&roots) < 0.0;
        let verdict = hurwitz(&CharPoly::new(coeffs)).unwrap().hurwitz;
        disagree += (oracle != verdict) as usize;
        stable += oracle as usize;
        checked += 1;
    }
    outcome(
        disagree == 0,
        format!("{disagree} disagreements over {checked} polynomials ({stable} stable, {excluded} boundary excluded)"),
    )
}

/// Parameters from the sampling domain used for the hypothesis checks:
/// a, g in (0.05, 2.95) with I1(a, g) >= 1e-3, b in (0.1, 5), c in (0.5, 600),
/// h in (0.1, 5), R in (0.01, 0.5), q_r in (0.2, 3).
fn sample_params(rng: &mut ChaCha8Rng) -> ControllerParams {
    loop {
        let (a, g) = (rng.random_range(0.05..2.95), rng.random_range(0.05..2.95));
        if i1(a, g) < 1e-3 {
            continue;
        }
        return ControllerParams {
            a,
            g,
            eps: 0.01,
            b: rng.random_range(0.1..5.0),
            c: rng.random_range(0.5..600.0),
            h: rng.random_range(0.1..5.0),
            v_c: 0.0,
            r: rng.random_range(0.01..0.5),
        };
    }
}

fn spectrum_stable(m: nalgebra::DMatrix<f64>) -> Option<bool> {
    let eigs = eigenvalues(&m);
    if eigs.iter().any(|e| e.0.abs() < 1e-10) {
        None
    } else {
        Some(max_real_part(&eigs) < 0.0)
    }
}

fn criterion_4() -> Outcome {
    const TARGET: usize = 200;
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let (mut t1, mut t1_bad) = (0, 0);
    while t1 < TARGET {
        let p = sample_params(&mut rng);
        let q_r = rng.random_range(0.2..3.0);
        let q_p = rng.random_range(-0.49..0.49) * q_r;
        let f = ScalarField::elliptical(0.0, [0.0, 0.0], q_r, q_p).unwrap();
        let base = theorem1_check(&p, &f).unwrap();
        let br = if base.plus.sign_condition { base.plus } else { base.minus };
        if !(br.lower < br.upper) {
            continue;
        }
        let p = p.with_v_c(rng.random_range(br.lower..br.upper));
        let rep = theorem1_check(&p, &f).unwrap();
        let Some([i, j]) = rep.selected else { continue };
        if rep.plus.near_boundary || rep.minus.near_boundary {
            continue;
        }
        t1 += 1;
        let oracle = [i, j].map(|k| spectrum_stable(jacobian_elliptical(k, &p, &f).unwrap().dmatrix()));
        if rep.selected_hurwitz != Some(true) || oracle.iter().any(|o| *o == Some(false)) {
            t1_bad += 1;
        }
    }

    let (mut small, mut large, mut t2_bad) = (0, 0, 0);
    while small < TARGET || large < TARGET {
        let p = sample_params(&mut rng);
        let f = ScalarField::circular(0.0, [0.0, 0.0], rng.random_range(0.2..3.0)).unwrap();
        let th = vc_thresholds(&p, &f).unwrap();
        let v_c = if small < TARGET {
            if rng.random_bool(0.5) {
                rng.random_range(th.bar_lower..0.0)
            } else {
                rng.random_range(0.0..th.bar_upper)
            }
        } else {
            th.bar_upper * (1.0 + 10f64.powf(rng.random_range(-3.0..1.0)))
        };
        let p = p.with_v_c(v_c);
        let rep = theorem2_check(&p, &f).unwrap();
        if rep.near_boundary || rep.branch == CircularBranch::None {
            continue;
        }
        match rep.branch {
            CircularBranch::Small => small += 1,
            _ => large += 1,
        }
        let oracle: Vec<Option<bool>> =
            rep.predicted.iter().map(|&k| spectrum_stable(jacobian_circular(k, &p, &f).unwrap().dmatrix())).collect();
        if rep.predicted_hurwitz != Some(true) || oracle.contains(&Some(false)) {
            t2_bad += 1;
        }
    }
    outcome(
        t1_bad == 0 && t2_bad == 0,
        format!("elliptical: {t1_bad} violations / {t1}; circular: {t2_bad} violations / {} ({small} small, {large} large)", small + large),
    )
}

fn criterion_5() -> Outcome {
    let mut bad = Vec::new();
    let mut n = 0;
    for ai in 1..60 {
        let a = ai as f64 * 0.05;
        if ai == 20 {
            continue;
        }
        for gi in 1..30 {
            let g = gi as f64 * 0.1;
            let p = ControllerParams { a, g, eps: 0.01, b: 2.0, c: 500.0, h: 2.0, v_c: 0.0, r: 0.1 };
            let f = ScalarField::elliptical(0.0, [0.0, 0.0], 2.0, 0.5).unwrap();
            let g3 = gamma_set(&p, &f).unwrap().g3;
            let want = if a < 1.0 { 1.0 } else { -1.0 };
            n += 1;
            if g3.signum() != want || g3 == 0.0 {
                bad.push((a, g, g3));
            }
        }
    }
    let first = bad.first().map_or(String::new(), |(a, g, v)| format!("; first at a={a}, g={g}: {v:e}"));
    outcome(bad.is_empty(), format!("{} sign violations over {n} (a, g) points{first}", bad.len()))
}

fn criterion_6() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let (mut v_lower, mut v_upper, mut large, mut n40) = (0, 0, 0, 0);
    const N: usize = 2000;
    for _ in 0..N {
        let p = sample_params(&mut rng);
        let q_r = rng.random_range(0.2..3.0);
        let q_p = rng.random_range(0.001..0.49) * q_r;
        let f = ScalarField::elliptical(0.0, [0.0, 0.0], q_r, q_p).unwrap();
        let gm = gamma_set(&p, &f).unwrap();
        let th = vc_thresholds(&p, &f).unwrap();
        let i = i1(p.a, p.g);
        let bound = -p.h * p.r * gm.g1 / (2.0 * i * i);
        if !(th.lower_plus < bound && th.lower_minus < bound && bound < 0.0) {
            v_lower += 1;
        }
        let s = gm.g3.signum();
        if p.b > 2.0 * p.c * p.r * s * q_p * gm.g5 / ((q_r + 2.0 * s * q_p) * gm.g4) {
            n40 += 1;
            let up = if s < 0.0 { th.upper_plus } else { th.upper_minus };
            if !(up > 0.0) {
                v_upper += 1;
            }
        }
        let fc = ScalarField::circular(0.0, [0.0, 0.0], q_r).unwrap();
        let thc = vc_thresholds(&p, &fc).unwrap();
        let pv = p.with_v_c(thc.bar_upper * (1.0 + 10f64.powf(rng.random_range(-3.0..1.0))));
        let gc = gamma_set(&pv, &fc).unwrap();
        if !(gc.g_rho2 > 0.0 && gc.g8 > 0.0) {
            large += 1;
        }
    }
    outcome(
        v_lower + v_upper + large == 0,
        format!("violations over {N} samples: lower bound {v_lower}, upper threshold {v_upper} (of {n40} under the b condition), large-V_c validity {large}"),
    )
}

fn criterion_7() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut n = 0;
    for (p, fc) in circular_grid() {
        let Some(q_r) = fc.quadratic().map(|q| q.q_r) else { unreachable!() };
        let th_c = vc_thresholds(&p, &fc).unwrap();
        let fe = ScalarField::elliptical(0.0, [0.0, 0.0], q_r, 1e-12).unwrap();
        let th_e = vc_thresholds(&p, &fe).unwrap();
        for (e, c) in [
            (th_e.lower_plus, th_c.bar_lower),
            (th_e.lower_minus, th_c.bar_lower),
            (th_e.upper_plus, th_c.bar_upper),
            (th_e.upper_minus, th_c.bar_upper),
        ] {
            worst = worst.max((e - c).abs());
        }
        let circ = circular_equilibria(&p, &fc).unwrap();
        let ell = elliptical_equilibria(&p, &fe).unwrap();
        for ce in circ.equilibria.iter().filter(|e| e.index <= 2 && e.admissible) {
            let cs = ce.state.unwrap();
            let cspec = eigenvalues(&jacobian_circular(ce.index, &p, &fc).unwrap().dmatrix());
            for ee in ell.iter().filter(|e| e.admissible) {
                worst = worst.max((ee.state[0] - cs[0]).abs());
                worst = worst.max(wrap_angle(ee.relative_heading() - cs[1]).abs());
                worst = worst.max((ee.state[3] - cs[2]).abs());
                let mut espec = eigenvalues(&jacobian_elliptical(ee.index, &p, &fe).unwrap().dmatrix());
                for (re, im) in &cspec {
                    let k = (0..espec.len())
                        .min_by(|&x, &y| {
                            let dx = (espec[x].0 - re).hypot(espec[x].1 - im);
                            let dy = (espec[y].0 - re).hypot(espec[y].1 - im);
                            dx.total_cmp(&dy)
                        })
                        .unwrap();
                    worst = worst.max((espec[k].0 - re).hypot(espec[k].1 - im));
                    espec.remove(k);
                }
                // Rotational symmetry leaves one zero eigenvalue.
                worst = worst.max(espec[0].0.hypot(espec[0].1));
                n += 1;
            }
        }
    }
    outcome(worst < 1e-6, format!("max deviation {worst:.2e} over {n} equilibrium pairs and 24 threshold sets"))
}

fn criterion_8() -> Outcome {
    let mut s = Scenario::load(scenario_path("circular_small_vc")).unwrap();
    s.averaging.eps = vec![0.01, 0.001];
    s.averaging.paths = 50;
    let v = validate_averaging(&s).unwrap();
    let factor = v.shrink_factor(0, 1);
    outcome(
        factor >= 1.6,
        format!(
            "discrepancy {:.4} (eps 0.01) -> {:.4} (eps 0.001), factor {factor:.2}",
            v.rows[0].discrepancy, v.rows[1].discrepancy
        ),
    )
}

fn criterion_9() -> Outcome {
    let s = Scenario::load(scenario_path("circular_small_vc")).unwrap();
    let mc = monte_carlo(&s, MC_RUNS);
    let med = mc.trailing_mean_distance.median;
    let heads: Vec<f64> = mc.runs.iter().filter_map(|r| r.metrics.map(|m| m.heading_cos)).collect();
    let mean_head = heads.iter().sum::<f64>() / heads.len() as f64;
    outcome(
        med < 0.05 && mean_head > 0.0 && mc.n_failed == 0,
        format!("median trailing distance {med:.3e}, mean heading cos {mean_head:.3}, {} failed", mc.n_failed),
    )
}

fn criterion_10() -> Outcome {
    let s = Scenario::load(scenario_path("circular_large_vc")).unwrap();
    let rho2 = circular_equilibria(&s.controller, &s.field().unwrap()).unwrap().rho2.unwrap();
    let mc = monte_carlo(&s, MC_RUNS);
    let med = mc.trailing_mean_distance.median;
    let drifts = mc.angular_drifts();
    let min_abs = drifts.iter().fold(f64::INFINITY, |m, d| m.min(d.abs()));
    let pos = drifts.iter().filter(|d| **d > 0.0).count();
    let in_band = med >= 0.5 * rho2 && med <= 1.5 * rho2;
    outcome(
        in_band && min_abs >= 0.05 && pos > 0 && pos < drifts.len() && mc.n_failed == 0,
        format!(
            "median {med:.4e} vs rho2 {rho2:.4e}; min |drift| {min_abs:.3} rad/s; {pos} of {} revolve counterclockwise",
            drifts.len()
        ),
    )
}

fn criterion_11() -> Outcome {
    let mut pass = true;
    let mut parts = Vec::new();
    for name in ["elliptical_a2_neg_vc", "elliptical_a2_pos_vc", "elliptical_a05_neg_vc", "elliptical_a05_pos_vc"] {
        let s = Scenario::load(scenario_path(name)).unwrap();
        let f = s.field().unwrap();
        let iota = iota_index(&s.controller, &f).unwrap().index().unwrap();
        let eqs = elliptical_equilibria(&s.controller, &f).unwrap();
        let av = integrate_averaged(&s, s.sde.t_end, 1e-3, 1.0).unwrap();
        let k = av.t.len() - 1;
        let hit = [iota, iota + 1].iter().any(|&i| {
            let e = &eqs[i - 1];
            (av.r_tilde[k] - e.state[0]).abs() <= 0.1 * e.state[0].abs()
                && wrap_angle(av.theta_star[k] - e.state[1]).abs() <= 0.1
                && wrap_angle(av.theta_hat[k] - e.state[2]).abs() <= 0.1
        });
        let med = monte_carlo(&s, MC_RUNS).trailing_mean_distance.median;
        let ok = hit && med < 0.1;
        pass &= ok;
        parts.push(format!(
            "{name}: iota {iota}, ODE r {:.4} vs eq {:.4} {}, SDE median {med:.4} {}",
            av.r_tilde[k],
            eqs[iota - 1].state[0],
            if hit { "ok" } else { "MISS" },
            if med < 0.1 { "ok" } else { "MISS" }
        ));
    }
    outcome(pass, parts.join("; "))
}

fn criterion_12() -> Outcome {
    let s = Scenario::load(scenario_path("rosenbrock")).unwrap();
    let mc = monte_carlo(&s, MC_RUNS);
    let med = mc.trailing_mean_distance.median;
    outcome(med < 0.2 && mc.n_failed == 0, format!("median trailing distance {med:.3e}, {} failed", mc.n_failed))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 12] = [
        ("equilibrium residuals", criterion_1),
        ("jacobian fidelity", criterion_2),
        ("hurwitz oracle equivalence", criterion_3),
        ("theorem-condition consistency", criterion_4),
        ("gamma_3 sign law", criterion_5),
        ("threshold inequalities", criterion_6),
        ("circular/elliptical consistency", criterion_7),
        ("averaging validation", criterion_8),
        ("circular small V_c reproduction", criterion_9),
        ("circular large V_c reproduction", criterion_10),
        ("elliptical small V_c reproduction", criterion_11),
        ("rosenbrock reproduction", criterion_12),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let o = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            outcome(false, format!("panicked: {msg}"))
        });
        failed += !o.pass as usize;
        println!("criterion {:>2} {name}: {} ({})", i + 1, if o.pass { "PASS" } else { "FAIL" }, o.detail);
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
