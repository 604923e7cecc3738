//! Jacobians, Routh-Hurwitz verdicts and the hypothesis checks for one
//! elliptical parameter set.

use srcseek::closed_loop::ControllerParams;
use srcseek::field::ScalarField;
use srcseek::stability::{eigenvalues, hurwitz, jacobian_elliptical, stability_report};

fn main() -> srcseek::Result<()> {
    let field = ScalarField::elliptical(0.0, [0.0, 0.0], 2.0, 0.5)?;
    let params = ControllerParams { a: 2.0, g: 1.5, eps: 0.01, b: 2.0, c: 500.0, h: 2.0, v_c: -0.015, r: 0.1 };

    for i in 1..=8 {
        let j = jacobian_elliptical(i, &params, &field)?;
        let verdict = hurwitz(&j.char_poly())?;
        let eig = eigenvalues(&j.dmatrix());
        println!("eq {i} ({:?}): hurwitz = {}  eigenvalues = {eig:.4?}", j.tag, verdict.hurwitz);
    }

    let report = stability_report(&params, &field)?;
    println!("{}", serde_json::to_string_pretty(&report.theorem1).expect("serializable"));
    println!("{}", serde_json::to_string_pretty(&report.corollary1).expect("serializable"));
    Ok(())
}
