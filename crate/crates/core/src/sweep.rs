//! Parameter grids: each cell is a batch of runs, summarized by the mean
//! and spread of the per-run return correlations.
//!
//! A cell's master seed is derived from the own-return weights and the
//! coupling specification of that cell, so a cell replays identically no
//! matter which grid it belongs to or in which order cells execute. Event
//! and holding settings are deliberately left out of the seed: a sweep with
//! inert events, or the holding variant, shares its streams with the plain
//! homogeneous sweep.

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use rayon::prelude::*;

use crate::config::{CouplingSpec, EventModel, ModelConfig};
use crate::engine::{run_many, Pairing};
use crate::error::{Error, Result};
use crate::export::{scatter_rows, GridRow, ScatterRow};
use crate::seed::cell_seed;
use crate::stats;

/// An inclusive arithmetic range of parameter values.
#[derive(Debug, Clone, PartialEq)]
pub struct Axis {
    pub name: String,
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl Axis {
    pub fn new(name: &str, start: f64, stop: f64, step: f64) -> Result<Axis> {
        let bad = |reason: &str| {
            Err(Error::BadAxis {
                name: name.to_string(),
                reason: reason.to_string(),
            })
        };
        if !(start.is_finite() && stop.is_finite() && step.is_finite()) {
            return bad("bounds and step must be finite");
        }
        if step <= 0.0 {
            return bad("step must be positive");
        }
        if stop < start {
            return bad("stop lies below start");
        }
        Ok(Axis {
            name: name.to_string(),
            start,
            stop,
            step,
        })
    }

    /// A single-valued axis.
    pub fn fixed(name: &str, value: f64) -> Axis {
        Axis {
            name: name.to_string(),
            start: value,
            stop: value,
            step: 1.0,
        }
    }

    /// Grid points `start + k·step` up to `stop`, rounded to 12 decimals so
    /// that the same nominal value always yields the same bits.
    pub fn values(&self) -> Vec<f64> {
        let n = ((self.stop - self.start) / self.step + 1e-9).floor() as usize + 1;
        (0..n)
            .map(|k| {
                let v = ((self.start + k as f64 * self.step) * 1e12).round() / 1e12;
                if v == 0.0 {
                    0.0
                } else {
                    v
                }
            })
            .collect()
    }

    pub fn len(&self) -> usize {
        self.values().len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Checks every value lies in `[lo, hi]`.
    pub fn within(&self, lo: f64, hi: f64) -> Result<()> {
        if self.start < lo || self.stop > hi {
            return Err(Error::BadAxis {
                name: self.name.clone(),
                reason: format!("values must lie in [{lo}, {hi}]"),
            });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Experiment {
    Homogeneous,
    Centers,
    Ranges,
    Events,
    Holding,
}

impl Experiment {
    pub const ALL: [Experiment; 5] = [
        Experiment::Homogeneous,
        Experiment::Centers,
        Experiment::Ranges,
        Experiment::Events,
        Experiment::Holding,
    ];

    fn name(self) -> &'static str {
        match self {
            Experiment::Homogeneous => "homogeneous",
            Experiment::Centers => "centers",
            Experiment::Ranges => "ranges",
            Experiment::Events => "events",
            Experiment::Holding => "holding",
        }
    }

    /// Default grid for the experiment.
    pub fn default_axes(self) -> [Axis; 2] {
        let axis = |n, a, b, s| Axis::new(n, a, b, s).expect("default axes are valid");
        match self {
            Experiment::Homogeneous | Experiment::Events | Experiment::Holding => {
                [axis("b1", -1.0, 1.0, 0.1), axis("b2", -1.0, 1.0, 0.1)]
            }
            Experiment::Centers => [axis("c1", -1.0, 1.0, 0.2), axis("c2", -1.0, 1.0, 0.2)],
            Experiment::Ranges => [axis("delta1", 1.0, 5.0, 0.5), axis("delta2", 1.0, 5.0, 0.5)],
        }
    }
}

impl fmt::Display for Experiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Experiment {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Experiment::ALL
            .into_iter()
            .find(|e| e.name() == s)
            .ok_or_else(|| format!("unknown experiment `{s}`"))
    }
}

/// One grid point.
#[derive(Debug, Clone, PartialEq)]
pub struct GridCell {
    pub x: f64,
    pub y: f64,
    pub master_seed: u64,
    pub correlations: Vec<f64>,
    pub mean_rho: f64,
    pub std_rho: f64,
}

#[derive(Debug, Clone, Default)]
pub struct SweepOptions {
    /// Collect pooled `(expectation, return)` samples with this pairing.
    pub scatter: Option<Pairing>,
}

#[derive(Debug, Clone)]
pub struct SweepGrid {
    pub experiment: Experiment,
    pub axes: [Axis; 2],
    /// Row-major over `axes[0]`, then `axes[1]`.
    pub cells: Vec<GridCell>,
    pub template: ModelConfig,
    pub elapsed: Duration,
    /// Pooled samples, when requested; `run` is
    /// `cell_index · n_runs + run_index`.
    pub samples: Vec<ScatterRow>,
}

impl SweepGrid {
    pub fn cell(&self, x: f64, y: f64) -> Option<&GridCell> {
        self.cells.iter().find(|c| c.x == x && c.y == y)
    }

    /// Cells with equal coordinates, in axis order.
    pub fn diagonal(&self) -> Vec<&GridCell> {
        self.cells.iter().filter(|c| c.x == c.y).collect()
    }

    pub fn rows(&self) -> Vec<GridRow> {
        self.cells
            .iter()
            .map(|c| GridRow {
                axis1: c.x,
                axis2: c.y,
                mean_rho: c.mean_rho,
                std_rho: c.std_rho,
                n_runs: c.correlations.len(),
            })
            .collect()
    }
}

/// Seed coordinates of a configuration: own-return weights and the coupling
/// specification, tagged by kind.
fn seed_coordinates(cfg: &ModelConfig) -> Vec<f64> {
    let mut v = vec![cfg.a.0, cfg.a.1];
    match cfg.coupling {
        CouplingSpec::Homogeneous { b1, b2 } => v.extend([0.0, b1, b2]),
        CouplingSpec::Uniform {
            c1,
            delta1,
            c2,
            delta2,
        } => v.extend([1.0, c1, delta1, c2, delta2]),
    }
    v
}

/// `template` with its master seed replaced by the cell seed for its
/// parameters. `template.master_seed` is the root of the derivation.
pub fn cell_config(template: &ModelConfig, coupling: CouplingSpec) -> ModelConfig {
    let mut cfg = ModelConfig {
        coupling,
        ..template.clone()
    };
    cfg.master_seed = cell_seed(template.master_seed, &seed_coordinates(&cfg));
    cfg
}

fn run_cell(x: f64, y: f64, cfg: ModelConfig, cell_index: usize, opts: &SweepOptions) -> Result<(GridCell, Vec<ScatterRow>)> {
    let wrap = |e| Error::Cell {
        x,
        y,
        source: Box::new(e),
    };
    let cfg = cfg.validate().map_err(wrap)?;
    let batch = run_many(&cfg).map_err(wrap)?;
    let correlations = batch.correlations();
    let samples = match opts.scatter {
        None => Vec::new(),
        Some(pairing) => batch
            .results
            .iter()
            .flat_map(|r| scatter_rows(r, cell_index * cfg.n_runs + r.run_index, pairing))
            .collect(),
    };
    let cell = GridCell {
        x,
        y,
        master_seed: cfg.master_seed,
        mean_rho: batch.mean_correlation,
        std_rho: stats::std_dev(&correlations),
        correlations,
    };
    Ok((cell, samples))
}

fn sweep_with<F>(experiment: Experiment, axes: [Axis; 2], template: &ModelConfig, opts: &SweepOptions, make: F) -> Result<SweepGrid>
where
    F: Fn(f64, f64) -> ModelConfig + Sync,
{
    let started = Instant::now();
    let points: Vec<(f64, f64)> = axes[0]
        .values()
        .into_iter()
        .flat_map(|x| axes[1].values().into_iter().map(move |y| (x, y)))
        .collect();
    let outcomes = points
        .par_iter()
        .enumerate()
        .map(|(k, &(x, y))| run_cell(x, y, make(x, y), k, opts))
        .collect::<Result<Vec<_>>>()?;
    let (cells, samples): (Vec<GridCell>, Vec<Vec<ScatterRow>>) = outcomes.into_iter().unzip();
    Ok(SweepGrid {
        experiment,
        axes,
        cells,
        template: template.clone(),
        elapsed: started.elapsed(),
        samples: samples.into_iter().flatten().collect(),
    })
}

/// Homogeneous couplings `(b1, b2)` over the product of the two axes.
pub fn sweep_homogeneous(template: &ModelConfig, b1: Axis, b2: Axis, opts: &SweepOptions) -> Result<SweepGrid> {
    b1.within(-1.0, 1.0)?;
    b2.within(-1.0, 1.0)?;
    let experiment = if template.allow_hold {
        Experiment::Holding
    } else {
        Experiment::Homogeneous
    };
    sweep_with(experiment, [b1, b2], template, opts, |x, y| {
        cell_config(template, CouplingSpec::Homogeneous { b1: x, b2: y })
    })
}

/// [`sweep_homogeneous`] with holding enabled.
pub fn sweep_holding(template: &ModelConfig, b1: Axis, b2: Axis, opts: &SweepOptions) -> Result<SweepGrid> {
    let template = ModelConfig {
        allow_hold: true,
        ..template.clone()
    };
    sweep_homogeneous(&template, b1, b2, opts)
}

/// Uniformly distributed couplings with fixed half-widths and centers
/// over the axes.
pub fn sweep_centers(template: &ModelConfig, delta: (f64, f64), c1: Axis, c2: Axis, opts: &SweepOptions) -> Result<SweepGrid> {
    sweep_with(Experiment::Centers, [c1, c2], template, opts, |x, y| {
        cell_config(
            template,
            CouplingSpec::Uniform {
                c1: x,
                delta1: delta.0,
                c2: y,
                delta2: delta.1,
            },
        )
    })
}

/// Uniformly distributed couplings with fixed centers and half-widths
/// over the axes.
pub fn sweep_ranges(template: &ModelConfig, c: (f64, f64), delta1: Axis, delta2: Axis, opts: &SweepOptions) -> Result<SweepGrid> {
    delta1.within(0.0, f64::INFINITY)?;
    delta2.within(0.0, f64::INFINITY)?;
    sweep_with(Experiment::Ranges, [delta1, delta2], template, opts, |x, y| {
        cell_config(
            template,
            CouplingSpec::Uniform {
                c1: c.0,
                delta1: x,
                c2: c.1,
                delta2: y,
            },
        )
    })
}

/// One homogeneous grid per event strength `k`, all at event probability
/// `probability`. Cells share seeds across strengths, so `k = 0` (or
/// `probability = 0`) reproduces the plain homogeneous grid exactly.
pub fn sweep_events(
    template: &ModelConfig,
    b1: Axis,
    b2: Axis,
    probability: f64,
    strengths: &[f64],
    opts: &SweepOptions,
) -> Result<Vec<(f64, SweepGrid)>> {
    strengths
        .iter()
        .map(|&k| {
            let cfg = ModelConfig {
                events: Some(EventModel {
                    probability,
                    strength: k,
                }),
                ..template.clone()
            };
            let mut grid = sweep_homogeneous(&cfg, b1.clone(), b2.clone(), opts)?;
            grid.experiment = Experiment::Events;
            Ok((k, grid))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tiny() -> ModelConfig {
        ModelConfig {
            n_agents: 101,
            horizon: 60,
            n_runs: 3,
            initial_price: 1e6,
            ..Default::default()
        }
    }

    #[test]
    fn axis_values() {
        let a = Axis::new("b1", -1.0, 1.0, 0.1).unwrap();
        let v = a.values();
        assert_eq!(v.len(), 21);
        assert_eq!(v[0], -1.0);
        assert_eq!(v[10], 0.0);
        assert_eq!(v[19], 0.9);
        assert_eq!(v[20], 1.0);
        assert_eq!(Axis::new("c", -1.0, 1.0, 0.2).unwrap().len(), 11);
        assert_eq!(Axis::new("d", 1.0, 5.0, 0.5).unwrap().len(), 9);
        assert_eq!(Axis::new("b", -0.9, 0.9, 0.9).unwrap().values(), vec![-0.9, 0.0, 0.9]);
        assert_eq!(Axis::fixed("k", 4.0).values(), vec![4.0]);
    }

    #[test]
    fn axis_errors() {
        assert!(Axis::new("b", 0.0, 1.0, 0.0).is_err());
        assert!(Axis::new("b", 1.0, 0.0, 0.1).is_err());
        assert!(Axis::new("b", 0.0, f64::NAN, 0.1).is_err());
        let wide = Axis::new("b1", -2.0, 1.0, 1.0).unwrap();
        assert!(sweep_homogeneous(&tiny(), wide, Axis::fixed("b2", 0.0), &SweepOptions::default()).is_err());
    }

    #[test]
    fn experiment_names() {
        for e in Experiment::ALL {
            assert_eq!(e.to_string().parse::<Experiment>().unwrap(), e);
        }
        assert!("bogus".parse::<Experiment>().is_err());
    }

    #[test]
    fn grid_shape_and_bounds() {
        let b = Axis::new("b", -0.5, 0.5, 0.5).unwrap();
        let g = sweep_homogeneous(&tiny(), b.clone(), b, &SweepOptions::default()).unwrap();
        assert_eq!(g.cells.len(), 9);
        assert_eq!(g.diagonal().len(), 3);
        for c in &g.cells {
            assert!((-1.0..=1.0).contains(&c.mean_rho));
            assert_eq!(c.correlations.len(), 3);
        }
        assert_eq!(g.rows().len(), 9);
        assert!(g.cell(0.5, -0.5).is_some());
    }

    #[test]
    fn cell_seed_ignores_events_and_hold() {
        let t = tiny();
        let spec = CouplingSpec::Homogeneous { b1: 0.9, b2: 0.9 };
        let base = cell_config(&t, spec);
        let held = cell_config(
            &ModelConfig {
                allow_hold: true,
                ..t.clone()
            },
            spec,
        );
        assert_eq!(base.master_seed, held.master_seed);
        let other = cell_config(&t, CouplingSpec::Homogeneous { b1: 0.9, b2: 0.8 });
        assert_ne!(base.master_seed, other.master_seed);
    }

    #[test]
    fn inert_events_reproduce_the_baseline() {
        let b = Axis::fixed("b", 0.9);
        let opts = SweepOptions::default();
        let base = sweep_homogeneous(&tiny(), b.clone(), b.clone(), &opts).unwrap();
        let ev = sweep_events(&tiny(), b.clone(), b.clone(), 0.0, &[4.0], &opts).unwrap();
        assert_eq!(ev[0].1.cells, base.cells);
        let ev = sweep_events(&tiny(), b.clone(), b, 0.5, &[0.0], &opts).unwrap();
        assert_eq!(ev[0].1.cells, base.cells);
    }

    #[test]
    fn scatter_samples_pooled() {
        let b = Axis::new("b", 0.0, 0.5, 0.5).unwrap();
        let opts = SweepOptions {
            scatter: Some(Pairing::Formed),
        };
        let g = sweep_homogeneous(&tiny(), b.clone(), b, &opts).unwrap();
        // 4 cells × 3 runs × 60 steps × 2 stocks.
        assert_eq!(g.samples.len(), 4 * 3 * 60 * 2);
        let runs: std::collections::HashSet<usize> = g.samples.iter().map(|s| s.run).collect();
        assert_eq!(runs.len(), 12);
    }
}
