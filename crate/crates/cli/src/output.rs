//! CSV rendering. Output is a pure function of the inputs, so identical runs
//! produce identical bytes.

use std::fmt::Write;

use spinpair::{concurrence, purity, DensityMatrix4, Trajectory};

use crate::config::{Observable, RunConfig};

/// 17 significant digits in scientific notation; `-0` prints as `0`.
pub fn format_number(x: f64) -> String {
    format!("{:.16e}", x + 0.0)
}

fn push_observable(row: &mut Vec<f64>, obs: Observable, rho: &DensityMatrix4) {
    match obs {
        Observable::Concurrence => row.push(concurrence(rho)),
        Observable::Purity => row.push(purity(rho)),
        Observable::Populations => row.extend((0..4).map(|i| rho.get(i, i).re)),
        Observable::Density => {
            for i in 0..4 {
                for j in 0..4 {
                    let z = rho.get(i, j);
                    row.push(z.re);
                    row.push(z.im);
                }
            }
        }
    }
}

/// Observable values for one state, in column order.
pub fn observable_row(outputs: &[Observable], rho: &DensityMatrix4) -> Vec<f64> {
    let mut row = Vec::new();
    for &obs in outputs {
        push_observable(&mut row, obs, rho);
    }
    row
}

/// The CSV for `traj`, whose times are physical; the time column is written
/// in the config's unit.
pub fn render_csv(config: &RunConfig, traj: &Trajectory, deviation: Option<f64>) -> String {
    let mut out = String::new();
    writeln!(out, "# initial: {}", config.initial.name()).unwrap();
    writeln!(out, "# time: {}", config.unit.label()).unwrap();
    writeln!(out, "t,{}", config.columns().join(",")).unwrap();
    for (t_scaled, rho) in config.scaled_times().iter().zip(&traj.states) {
        out.push_str(&format_number(*t_scaled));
        for v in observable_row(&config.outputs, rho) {
            out.push(',');
            out.push_str(&format_number(v));
        }
        out.push('\n');
    }
    if let Some(d) = deviation {
        writeln!(out, "# max_oracle_deviation={}", format_number(d)).unwrap();
    }
    out
}

/// Column `name` of a rendered CSV, skipping comment lines.
pub fn read_column(csv: &str, name: &str) -> Option<Vec<f64>> {
    let mut lines = csv.lines().filter(|l| !l.starts_with('#'));
    let header = lines.next()?;
    let idx = header.split(',').position(|c| c == name)?;
    lines
        .map(|l| l.split(',').nth(idx).and_then(|v| v.parse().ok()))
        .collect()
}
