//! Parameter sweeps: members run in parallel, results are collected in axis
//! order and written by a single caller.

use std::fmt::Write;
use std::path::{Path, PathBuf};

use rayon::prelude::*;

use crate::config::SweepConfig;
use crate::run::run_evolve;
use crate::CliError;

#[derive(Debug, Clone, PartialEq)]
pub struct SweepFile {
    pub name: String,
    pub contents: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepOutput {
    /// One CSV per axis value, in axis order.
    pub csvs: Vec<SweepFile>,
    pub script: SweepFile,
    /// Members whose oracle cross-check exceeded its tolerance.
    pub failed_validation: Vec<String>,
}

impl SweepOutput {
    /// Writes every file into `dir`, creating it if needed.
    pub fn write_to(&self, dir: &Path) -> Result<Vec<PathBuf>, CliError> {
        std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
        let mut written = Vec::new();
        for file in self.csvs.iter().chain(std::iter::once(&self.script)) {
            let path = dir.join(&file.name);
            std::fs::write(&path, &file.contents).map_err(|e| CliError::io(&path, e))?;
            written.push(path);
        }
        Ok(written)
    }
}

pub fn run_sweep(sweep: &SweepConfig) -> Result<SweepOutput, CliError> {
    let values = sweep.values.render();
    let results: Vec<_> = values
        .par_iter()
        .map(|value| {
            let member = |value: &str| -> Result<_, CliError> {
                let config = sweep.member(value)?;
                let out = run_evolve(&config)?;
                Ok((config, out))
            };
            member(value).map_err(|source| CliError::SweepMember {
                axis: sweep.axis.clone(),
                value: value.clone(),
                source: Box::new(source),
            })
        })
        .collect();

    let mut csvs = Vec::with_capacity(values.len());
    let mut failed_validation = Vec::new();
    let mut first = None;
    for (value, result) in values.iter().zip(results) {
        let (config, out) = result?;
        if !out.passed() {
            failed_validation.push(value.clone());
        }
        first.get_or_insert(config);
        csvs.push(SweepFile {
            name: format!("{}_{}={}.csv", sweep.stem, sweep.axis, value),
            contents: out.csv,
        });
    }
    let first = first.ok_or_else(|| crate::ConfigError {
        line: None,
        key: Some("sweep.values".into()),
        message: "no sweep values".into(),
    })?;

    let column = match &sweep.column {
        Some(c) => {
            if !first.columns().contains(c) {
                return Err(crate::ConfigError {
                    line: None,
                    key: Some("sweep.column".into()),
                    message: format!("{c:?} is not an output column"),
                }
                .into());
            }
            c.clone()
        }
        None => first.columns()[0].clone(),
    };
    let script = gnuplot_script(sweep, &csvs, first.unit.label(), &column);
    Ok(SweepOutput {
        csvs,
        script: SweepFile {
            name: format!("{}.gp", sweep.stem),
            contents: script,
        },
        failed_validation,
    })
}

fn gnuplot_script(sweep: &SweepConfig, csvs: &[SweepFile], xlabel: &str, column: &str) -> String {
    let mut s = String::new();
    writeln!(s, "# overlay of {} sweep over {}", sweep.stem, sweep.axis).unwrap();
    writeln!(s, "set datafile separator \",\"").unwrap();
    writeln!(s, "set datafile commentschars \"#\"").unwrap();
    writeln!(s, "set key autotitle columnhead").unwrap();
    writeln!(s, "set xlabel \"{xlabel}\"").unwrap();
    writeln!(s, "set ylabel \"{column}\"").unwrap();
    let values = sweep.values.render();
    let curves: Vec<String> = csvs
        .iter()
        .zip(&values)
        .map(|(f, v)| format!("\"{}\" using 1:\"{column}\" with lines title \"{}={v}\"", f.name, sweep.axis))
        .collect();
    writeln!(s, "plot {}", curves.join(", \\\n     ")).unwrap();
    s
}
