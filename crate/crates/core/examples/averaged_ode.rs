//! Averaged dynamics from the lifted initial condition on an elliptical map,
//! compared with the predicted attracting equilibrium.

use srcseek::equilibria::{elliptical_equilibria, iota_index};
use srcseek::harness::{integrate_averaged, Scenario};

fn main() -> srcseek::Result<()> {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/scenarios/elliptical_a2_neg_vc.toml");
    let s = Scenario::load(path)?;
    let field = s.field()?;
    let run = integrate_averaged(&s, 300.0, 1e-3, 25.0)?;
    for (k, t) in run.t.iter().enumerate() {
        println!(
            "t = {t:5.0}  r = {:+.5}  theta* = {:+.3}  theta_hat = {:+.3}",
            run.r_tilde[k], run.theta_star[k], run.theta_hat[k]
        );
    }
    let iota = iota_index(&s.controller, &field)?;
    if let Some(i) = iota.index() {
        let eq = &elliptical_equilibria(&s.controller, &field)?[i - 1];
        println!("predicted equilibrium {i}: {:?}", eq.state);
    }
    Ok(())
}
