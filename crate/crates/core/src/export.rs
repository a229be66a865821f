//! CSV formats for trajectories, grids, scatter samples and regression
//! reports, plus atomic file output.

use std::fs;
use std::io::{self, Write};
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::engine::{Pairing, RunResult};
use crate::error::{Error, Result};
use crate::stats::{self, RegressionReport};
use crate::types::Stock;

/// Writes `path` through a temporary file in the same directory that is
/// renamed into place only after `write` succeeds.
pub fn atomic_write<F>(path: &Path, write: F) -> Result<()>
where
    F: FnOnce(&mut dyn Write) -> Result<()>,
{
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| Error::io(dir, e))?;
    {
        let mut buf = io::BufWriter::new(tmp.as_file_mut());
        write(&mut buf)?;
        buf.flush().map_err(|e| Error::io(path, e))?;
    }
    tmp.as_file().sync_all().map_err(|e| Error::io(path, e))?;
    tmp.persist(path).map_err(|e| Error::io(path, e.error))?;
    Ok(())
}

/// Serializes `rows` as CSV with a header row, atomically.
pub fn write_csv<T: Serialize>(path: &Path, rows: &[T]) -> Result<()> {
    atomic_write(path, |w| write_rows(w, rows))
}

pub fn write_rows<T: Serialize>(w: &mut dyn Write, rows: &[T]) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    for row in rows {
        out.serialize(row)?;
    }
    out.flush().map_err(|e| Error::io("<csv>", e))?;
    Ok(())
}

pub fn read_csv<T: DeserializeOwned>(path: &Path) -> Result<Vec<T>> {
    let file = fs::File::open(path).map_err(|e| Error::io(path, e))?;
    read_rows(file)
}

pub fn read_rows<T: DeserializeOwned, R: io::Read>(r: R) -> Result<Vec<T>> {
    csv::Reader::from_reader(r)
        .deserialize()
        .map(|row| row.map_err(Error::from))
        .collect()
}

/// One main-loop step of both stocks. `re*_mean` is the population mean of
/// the expectation traded on at `t`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryRow {
    pub t: usize,
    #[serde(rename = "P1")]
    pub p1: f64,
    pub r1: f64,
    #[serde(rename = "A1")]
    pub a1: f64,
    pub re1_mean: f64,
    #[serde(rename = "P2")]
    pub p2: f64,
    pub r2: f64,
    #[serde(rename = "A2")]
    pub a2: f64,
    pub re2_mean: f64,
}

/// Main-loop rows of a run, `t` counting from 1.
pub fn trajectory_rows(result: &RunResult) -> Vec<TrajectoryRow> {
    let m = &result.market;
    let [s1, s2] = &m.stocks;
    (m.warmup..m.steps())
        .map(|i| TrajectoryRow {
            t: i - m.warmup + 1,
            p1: s1.prices[i],
            r1: s1.returns[i],
            a1: s1.total_demand[i],
            re1_mean: s1.mean_expectation[i],
            p2: s2.prices[i],
            r2: s2.returns[i],
            a2: s2.total_demand[i],
            re2_mean: s2.mean_expectation[i],
        })
        .collect()
}

/// `(expectation, return)` pairs for one stock of a trajectory. The formed
/// expectation for `r(t)` is the one traded on at `t + 1`, so that pairing
/// loses the final step.
pub fn trajectory_pairs(rows: &[TrajectoryRow], stock: Stock, pairing: Pairing) -> (Vec<f64>, Vec<f64>) {
    let (re, r): (Vec<f64>, Vec<f64>) = rows
        .iter()
        .map(|row| match stock {
            Stock::One => (row.re1_mean, row.r1),
            Stock::Two => (row.re2_mean, row.r2),
        })
        .unzip();
    match pairing {
        Pairing::Traded => (re, r),
        Pairing::Formed => {
            let n = r.len().saturating_sub(1);
            (re[1.min(re.len())..].to_vec(), r[..n].to_vec())
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridRow {
    pub axis1: f64,
    pub axis2: f64,
    pub mean_rho: f64,
    pub std_rho: f64,
    pub n_runs: usize,
}

/// One `(expectation, return)` sample. `run` is unique within a file.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScatterRow {
    pub stock: u8,
    pub run: usize,
    pub t: usize,
    pub expected_return: f64,
    #[serde(rename = "return")]
    pub ret: f64,
}

/// Scatter rows of one run for both stocks, `t` counting from 1.
pub fn scatter_rows(result: &RunResult, run: usize, pairing: Pairing) -> Vec<ScatterRow> {
    Stock::BOTH
        .iter()
        .flat_map(|&stock| {
            let (e, r) = result.paired_samples(stock, pairing);
            e.into_iter().zip(r).enumerate().map(move |(i, (e, r))| ScatterRow {
                stock: stock.number(),
                run,
                t: i + 1,
                expected_return: e,
                ret: r,
            })
        })
        .collect()
}

/// The `(expectation, return)` columns of one stock's rows.
pub fn scatter_pairs(rows: &[ScatterRow], stock: Stock) -> (Vec<f64>, Vec<f64>) {
    rows.iter()
        .filter(|row| row.stock == stock.number())
        .map(|row| (row.expected_return, row.ret))
        .unzip()
}

/// Regression of return on expectation for one stock.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    pub stock: u8,
    pub beta0: f64,
    pub beta1: f64,
    pub p_value: f64,
    pub r_squared: f64,
    pub n: usize,
}

impl ReportRow {
    pub fn new(stock: Stock, r: &RegressionReport) -> Self {
        ReportRow {
            stock: stock.number(),
            beta0: r.beta0,
            beta1: r.beta1,
            p_value: r.p_value,
            r_squared: r.r_squared,
            n: r.n,
        }
    }
}

/// Regresses return on expectation for each stock.
pub fn regress_pairs(pairs: [(Vec<f64>, Vec<f64>); 2]) -> Result<Vec<ReportRow>> {
    Stock::BOTH
        .iter()
        .zip(pairs)
        .map(|(&stock, (e, r))| Ok(ReportRow::new(stock, &stats::ols(&e, &r)?)))
        .collect()
}
