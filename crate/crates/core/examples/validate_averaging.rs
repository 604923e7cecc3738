//! Ensemble mean of the closed loop against the averaged ODE for two eps
//! values. A reduced ensemble keeps the example quick.

use srcseek::harness::{validate_averaging, Scenario};

fn main() -> srcseek::Result<()> {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/scenarios/circular_small_vc.toml");
    let mut s = Scenario::load(path)?;
    s.averaging.paths = 10;
    s.averaging.t_end = 10.0;

    let v = validate_averaging(&s)?;
    for row in &v.rows {
        println!("eps = {:e}: max discrepancy {:.4} at t = {:.2}", row.eps, row.discrepancy, row.t_at_max);
    }
    println!("shrink factor {:.2}", v.shrink_factor(0, 1));
    Ok(())
}
