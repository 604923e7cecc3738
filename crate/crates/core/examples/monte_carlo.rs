//! Ensemble of independent runs on the large-bias circular scenario: the
//! vehicle settles on a ring and revolves around the source.

use srcseek::equilibria::circular_equilibria;
use srcseek::harness::{monte_carlo, Scenario};

fn main() -> srcseek::Result<()> {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/scenarios/circular_large_vc.toml");
    let s = Scenario::load(path)?;
    let rho2 = circular_equilibria(&s.controller, &s.field()?)?.rho2;
    let r = monte_carlo(&s, 8);

    println!("predicted ring radius: {rho2:?}");
    println!("trailing distance: {:?}", r.trailing_mean_distance);
    for d in r.angular_drifts() {
        println!("angular drift {d:+.3} rad/s");
    }
    Ok(())
}
