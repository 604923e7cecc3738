//! CSV and JSON writers. Floats in CSV files use 17 significant digits so
//! identical runs produce byte-identical files.

use std::fs;
use std::io::{self, Write};
use std::path::Path;

use serde::Serialize;

use super::experiments::AveragedRun;
use crate::error::Result;
use crate::sde::Trajectory;

pub const TRAJECTORY_HEADER: &str = "t,x_c,y_c,theta,e,eta,J,v,psi";
pub const AVERAGED_HEADER: &str = "t,r_tilde,theta_star,theta_hat,theta_tilde,e_tilde";

fn fmt(x: f64) -> String {
    format!("{x:.16e}")
}

fn row(w: &mut impl Write, values: &[f64]) -> io::Result<()> {
    let line: Vec<String> = values.iter().map(|&v| fmt(v)).collect();
    writeln!(w, "{}", line.join(","))
}

pub fn write_trajectory_csv(traj: &Trajectory, w: &mut impl Write) -> Result<()> {
    writeln!(w, "{TRAJECTORY_HEADER}")?;
    for s in &traj.samples {
        let x = &s.state;
        let o = &s.outputs;
        row(w, &[s.t, x.x_c, x.y_c, x.theta, x.e, x.eta, o.j, o.v, o.psi])?;
    }
    Ok(())
}

pub fn write_averaged_csv(run: &AveragedRun, w: &mut impl Write) -> Result<()> {
    writeln!(w, "{AVERAGED_HEADER}")?;
    for k in 0..run.t.len() {
        row(w, &[run.t[k], run.r_tilde[k], run.theta_star[k], run.theta_hat[k], run.theta_tilde[k], run.e_tilde[k]])?;
    }
    Ok(())
}

pub fn write_json(path: impl AsRef<Path>, value: &impl Serialize) -> Result<()> {
    let text = serde_json::to_string_pretty(value).map_err(|e| crate::error::SeekError::Io(e.to_string()))?;
    fs::write(path, text + "\n")?;
    Ok(())
}

pub fn write_file(path: impl AsRef<Path>, f: impl FnOnce(&mut io::BufWriter<fs::File>) -> Result<()>) -> Result<()> {
    let mut w = io::BufWriter::new(fs::File::create(path)?);
    f(&mut w)?;
    w.flush()?;
    Ok(())
}
