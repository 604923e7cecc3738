//! Closed-form equilibria and bias-velocity thresholds as V_c sweeps through
//! the small and large regimes on the circular map.

use srcseek::closed_loop::ControllerParams;
use srcseek::equilibria::{circular_equilibria, vc_thresholds};
use srcseek::field::ScalarField;

fn main() -> srcseek::Result<()> {
    let field = ScalarField::circular(0.0, [0.0, 0.0], 1.5)?;
    let base = ControllerParams { a: 2.0, g: 1.0, eps: 0.01, b: 2.0, c: 500.0, h: 2.0, v_c: 0.0, r: 0.1 };
    let th = vc_thresholds(&base, &field)?;
    println!("small-V_c interval: ({:.5}, {:.5})", th.bar_lower, th.bar_upper);

    for v_c in [-0.002, 0.0005, 0.002, 0.01, 0.05] {
        let eq = circular_equilibria(&base.with_v_c(v_c), &field)?;
        println!(
            "V_c = {v_c:+.4}: rho1 = {:+.6}  rho2 = {:?}  alpha = {:?}",
            eq.rho1, eq.rho2, eq.alpha
        );
    }
    Ok(())
}
