//! Full report for a scenario file given on the command line (defaults to
//! the Rosenbrock scenario, which has no closed-form analysis).

use srcseek::harness::{report, Scenario};

fn main() -> srcseek::Result<()> {
    let path = std::env::args()
        .nth(1)
        .unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/scenarios/rosenbrock.toml").to_string());
    let mut s = Scenario::load(path)?;
    s.sde.t_end = s.sde.t_end.min(20.0);
    let r = report(&s, true)?;
    println!("{}", serde_json::to_string_pretty(&r).expect("serializable"));
    Ok(())
}
