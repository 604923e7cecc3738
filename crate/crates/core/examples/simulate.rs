//! One closed-loop run on the circular map, built in code rather than from a
//! scenario file.

use srcseek::closed_loop::{ControllerParams, VehicleState};
use srcseek::field::ScalarField;
use srcseek::harness::metrics::distance;
use srcseek::sde::{simulate, SdeConfig};

fn main() -> srcseek::Result<()> {
    let field = ScalarField::circular(0.0, [0.0, 0.0], 1.5)?;
    let params = ControllerParams { a: 2.0, g: 1.0, eps: 0.01, b: 2.0, c: 500.0, h: 2.0, v_c: 0.0005, r: 0.1 };
    let init = VehicleState::initial(&field, &params, [1.0, 1.0], -std::f64::consts::FRAC_PI_2);
    let traj = simulate(&field, &params, init, &SdeConfig::for_params(&params, 50.0, 1))?;

    for s in traj.samples.iter().step_by(500) {
        println!(
            "t = {:6.2}  |r_c| = {:.4}  theta = {:+.3}  v = {:+.4}",
            s.t,
            distance(s.state.center(), field.source()),
            s.state.heading_wrapped(),
            s.outputs.v
        );
    }
    Ok(())
}
