//! Result files: schema-versioned JSON metadata and plain CSV tables.
//!
//! Floats are written with Rust's shortest round-trip formatting, so equal
//! inputs always produce byte-identical files.

use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::error::Result;
use crate::linalg::CMat;
use crate::quantum::SpectralLevel;
use crate::ym::WilsonLine;

pub const METADATA_SCHEMA_VERSION: u32 = 1;

pub fn fmt_f64(x: f64) -> String {
    format!("{x}")
}

pub fn write_json<T: Serialize + ?Sized>(dir: &Path, name: &str, value: &T) -> Result<PathBuf> {
    fs::create_dir_all(dir)?;
    let path = dir.join(name);
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    fs::write(&path, s)?;
    Ok(path)
}

pub fn write_csv(dir: &Path, name: &str, header: &[String], rows: &[Vec<String>]) -> Result<PathBuf> {
    fs::create_dir_all(dir)?;
    let path = dir.join(name);
    let mut w = csv::Writer::from_path(&path).map_err(std::io::Error::from)?;
    w.write_record(header).map_err(std::io::Error::from)?;
    for r in rows {
        w.write_record(r).map_err(std::io::Error::from)?;
    }
    w.flush()?;
    Ok(path)
}

/// Header `x, re_00, im_00, re_01, …` for `n × n` matrices.
pub fn wilson_header(n: usize) -> Vec<String> {
    let mut h = vec!["x".to_string()];
    for i in 0..n {
        for j in 0..n {
            h.push(format!("re_{i}{j}"));
            h.push(format!("im_{i}{j}"));
        }
    }
    h
}

/// `x`, then the entries row-major with real and imaginary parts interleaved.
pub fn wilson_row(x: f64, y: &CMat) -> Vec<String> {
    let mut row = vec![fmt_f64(x)];
    for i in 0..y.nrows() {
        for j in 0..y.ncols() {
            row.push(fmt_f64(y[(i, j)].re));
            row.push(fmt_f64(y[(i, j)].im));
        }
    }
    row
}

pub fn write_wilson_csv(dir: &Path, name: &str, line: &WilsonLine) -> Result<PathBuf> {
    let n = line.ys.first().map_or(0, |y| y.nrows());
    let rows: Vec<Vec<String>> = line.xs.iter().zip(&line.ys).map(|(x, y)| wilson_row(*x, y)).collect();
    write_csv(dir, name, &wilson_header(n), &rows)
}

/// `energy, multiplicity, L1_1, …, LN_r` (Dynkin labels per site).
pub fn write_spectrum_csv(dir: &Path, name: &str, levels: &[SpectralLevel], n: usize, rank: usize) -> Result<PathBuf> {
    let mut header = vec!["energy".to_string(), "multiplicity".to_string()];
    for k in 1..=n {
        for i in 1..=rank {
            header.push(format!("L{k}_{i}"));
        }
    }
    let rows: Vec<Vec<String>> = levels
        .iter()
        .map(|lv| {
            let mut r = vec![fmt_f64(lv.energy), lv.multiplicity.to_string()];
            r.extend(lv.weights.iter().flat_map(|w| w.labels.iter().map(|l| l.to_string())));
            r
        })
        .collect();
    write_csv(dir, name, &header, &rows)
}

/// Writes a gnuplot script next to the CSV files it plots.
pub fn write_gnuplot(dir: &Path, name: &str, script: &str) -> Result<PathBuf> {
    std::fs::create_dir_all(dir)?;
    let path = dir.join(name);
    std::fs::write(&path, script)?;
    Ok(path)
}

/// Angles `q_i` of both trajectories against time.
pub fn trajectory_plot(rank: usize) -> String {
    let mut s = String::from("set datafile separator ','\nset key autotitle columnhead\nset xlabel 't'\nplot ");
    let series: Vec<String> = (0..rank)
        .flat_map(|i| {
            [
                format!("'projection.csv' using 1:{} with points", i + 2),
                format!("'integrated.csv' using 1:{} with lines", i + 2),
            ]
        })
        .collect();
    s.push_str(&series.join(", \\\n     "));
    s.push_str("\npause -1\n");
    s
}

/// Real parts of the diagonal Wilson-line entries against x.
pub fn wilson_plot(n: usize) -> String {
    let mut s = String::from("set datafile separator ','\nset key autotitle columnhead\nset xlabel 'x'\nplot ");
    let series: Vec<String> = (0..n).map(|i| format!("'wilson.csv' using 1:{} with lines", 2 + 2 * (i * n + i))).collect();
    s.push_str(&series.join(", \\\n     "));
    s.push_str("\npause -1\n");
    s
}

pub const SPECTRUM_PLOT: &str = "set datafile separator ','\nset xlabel 'energy'\nset ylabel 'multiplicity'\nset key autotitle columnhead\nplot 'spectrum.csv' using 1:2 with impulses\npause -1\n";
