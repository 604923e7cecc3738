#![allow(dead_code)]

use srcseek::field::ScalarField;
use srcseek::ControllerParams;

pub fn params(a: f64, g: f64, b: f64, c: f64, h: f64, v_c: f64, r: f64) -> ControllerParams {
    ControllerParams { a, g, eps: 0.01, b, c, h, v_c, r }
}

/// 24 elliptical parameter sets: `a` in {0.5, 2}, `g` in {1, 1.5, 2},
/// `V_c` in {-0.015, -0.002, 0.001, 0.015}; gains, sensor offset and
/// curvature cycle through b in {1, 2, 3}, c in {50, 500}, h in {1, 2, 4},
/// R in {0.05, 0.1}, (q_r, q_p) in {(2, 0.5), (1.5, -0.3), (3, 1.2)}.
pub fn elliptical_grid() -> Vec<(ControllerParams, ScalarField)> {
    let curv = [(2.0, 0.5), (1.5, -0.3), (3.0, 1.2)];
    let mut out = Vec::new();
    let mut k = 0;
    for a in [0.5, 2.0] {
        for g in [1.0, 1.5, 2.0] {
            for v_c in [-0.015, -0.002, 0.001, 0.015] {
                let p = params(a, g, [1.0, 2.0, 3.0][k % 3], [50.0, 500.0][k % 2], [1.0, 2.0, 4.0][(k / 3) % 3], v_c, [0.05, 0.1][(k / 2) % 2]);
                let (q_r, q_p) = curv[(k / 4) % 3];
                out.push((p, ScalarField::elliptical(0.0, [0.0, 0.0], q_r, q_p).unwrap()));
                k += 1;
            }
        }
    }
    out
}

/// 24 circular parameter sets: `a` in {0.5, 2}, `g` in {1, 1.5},
/// `V_c` in {-0.002, 0.0005, 0.002, 0.01, 0.05, 0.2}; b in {1, 2, 3},
/// c in {50, 500}, h in {1, 2}, R = 0.1, q_r in {1.5, 0.7}.
pub fn circular_grid() -> Vec<(ControllerParams, ScalarField)> {
    let mut out = Vec::new();
    let mut k = 0;
    for a in [0.5, 2.0] {
        for g in [1.0, 1.5] {
            for v_c in [-0.002, 0.0005, 0.002, 0.01, 0.05, 0.2] {
                let p = params(a, g, [1.0, 2.0, 3.0][k % 3], [50.0, 500.0][k % 2], [1.0, 2.0][(k / 2) % 2], v_c, 0.1);
                let q_r = [1.5, 0.7][(k / 3) % 2];
                out.push((p, ScalarField::circular(0.0, [0.0, 0.0], q_r).unwrap()));
                k += 1;
            }
        }
    }
    out
}

/// Central differences with two Richardson extrapolation levels.
pub fn fd_jacobian<const N: usize>(f: impl Fn(&[f64; N]) -> [f64; N], x: &[f64; N]) -> [[f64; N]; N] {
    let mut jac = [[0.0; N]; N];
    for j in 0..N {
        let h0 = 1e-3 * x[j].abs().max(1e-2);
        let d = |h: f64| -> [f64; N] {
            let (mut xp, mut xm) = (*x, *x);
            xp[j] += h;
            xm[j] -= h;
            let (fp, fm) = (f(&xp), f(&xm));
            std::array::from_fn(|i| (fp[i] - fm[i]) / (2.0 * h))
        };
        let (d1, d2, d4) = (d(h0), d(h0 / 2.0), d(h0 / 4.0));
        for i in 0..N {
            let r1a = (4.0 * d2[i] - d1[i]) / 3.0;
            let r1b = (4.0 * d4[i] - d2[i]) / 3.0;
            jac[i][j] = (16.0 * r1b - r1a) / 15.0;
        }
    }
    jac
}

pub fn max_abs_diff<const N: usize>(a: &[[f64; N]; N], b: &[[f64; N]; N]) -> f64 {
    let mut m: f64 = 0.0;
    for i in 0..N {
        for j in 0..N {
            m = m.max((a[i][j] - b[i][j]).abs());
        }
    }
    m
}

pub fn scenario_path(name: &str) -> std::path::PathBuf {
    std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("scenarios").join(format!("{name}.toml"))
}
