use std::fmt::Write as _;
use std::io::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, Context};
use mgcorr::analytic;
use mgcorr::config::{CouplingSpec, ModelConfig, EMPIRICAL_EVENT_PROBABILITY};
use mgcorr::engine::{run, run_each};
use mgcorr::export::{
    atomic_write, read_csv, write_rows, regress_pairs, scatter_pairs, scatter_rows, trajectory_pairs, trajectory_rows, write_csv, ReportRow, ScatterRow,
    TrajectoryRow,
};
use mgcorr::stats;
use mgcorr::sweep::{self, Axis, Experiment, SweepGrid, SweepOptions};
use mgcorr::types::Stock;
use serde::Serialize;

use crate::args::{Ar1Args, AxisArgs, Cli, Command, ModelArgs, RegressArgs, SimulateArgs, SweepArgs, VerifyArgs, CONFIG_ENV};

/// Why a command stopped; decides the exit code.
pub enum Failure {
    Usage(String),
    Runtime(anyhow::Error),
    Verify(String),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Runtime(e)
    }
}

type Outcome = Result<(), Failure>;

/// Which expectation the scatter and regression outputs use.
const EXPECTED_RETURN: &str = "mean over agents of a_j*r_j(t-1) + b_j*r_other(t-1)";

/// How the sign-case oracle draws lagged-return changes.
const ORACLE_SAMPLING: &str =
    "|dr1|, |dr2| uniform on (0, 1] with signs from the input quadrant; |b1|, |b2| on a 3x3 grid of 0.1, 0.5, 0.9";

pub fn dispatch(cli: Cli) -> Outcome {
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(Failure::Usage("--threads must be positive".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .context("starting the worker pool")?;
    }
    match cli.command {
        Command::Simulate(a) => simulate(a),
        Command::Sweep(a) => run_sweep(*a),
        Command::Regress(a) => regress(a),
        Command::VerifyAppendix(a) => verify_appendix(a),
        Command::Ar1(a) => ar1(a),
    }
}

/// A resolved configuration and where its values came from.
struct Loaded {
    cfg: ModelConfig,
    source: Option<PathBuf>,
    overrides: Vec<String>,
}

fn load_model(args: &ModelArgs) -> Result<Loaded, Failure> {
    let source = args
        .config
        .clone()
        .or_else(|| std::env::var_os(CONFIG_ENV).filter(|v| !v.is_empty()).map(PathBuf::from));
    let mut cfg = ModelConfig::default();
    if let Some(path) = &source {
        let text = fs::read_to_string(path).with_context(|| format!("config: reading {}", path.display()))?;
        cfg.apply_kv_str(&text)
            .map_err(|e| Failure::Usage(format!("config {}: {e}", path.display())))?;
    }
    let mut overrides = Vec::new();
    for (key, value) in args.flag_assignments() {
        cfg.set(key, &value).map_err(|e| Failure::Usage(e.to_string()))?;
        overrides.push(format!("{key}={value}"));
    }
    for item in &args.set {
        let (key, value) = item
            .split_once('=')
            .ok_or_else(|| Failure::Usage(format!("--set expects KEY=VALUE, got `{item}`")))?;
        cfg.set(key.trim(), value).map_err(|e| Failure::Usage(e.to_string()))?;
        overrides.push(format!("{}={}", key.trim(), value.trim()));
    }
    let cfg = cfg.validate().map_err(|e| Failure::Usage(e.to_string()))?;
    Ok(Loaded { cfg, source, overrides })
}

/// `<out>.meta`: the effective configuration in the config-file format,
/// with provenance as comments, so it can be fed back with `--config`.
fn write_meta(out: &Path, verb: &str, loaded: &Loaded, extra: &[(&str, String)]) -> anyhow::Result<()> {
    let mut text = format!("# mgcorr {verb}\n");
    if let Some(src) = &loaded.source {
        let _ = writeln!(text, "# config file: {}", src.display());
    }
    if !loaded.overrides.is_empty() {
        let _ = writeln!(text, "# overrides: {}", loaded.overrides.join(", "));
    }
    for (k, v) in extra {
        let _ = writeln!(text, "# {k}: {v}");
    }
    text.push_str(&loaded.cfg.to_kv_string());
    write_text(&meta_path(out), &text)
}

fn write_text(path: &Path, text: &str) -> anyhow::Result<()> {
    atomic_write(path, |w| {
        w.write_all(text.as_bytes()).map_err(|e| mgcorr::Error::Io {
            path: path.to_owned(),
            source: e,
        })
    })
    .with_context(|| format!("writing {}", path.display()))
}

fn meta_path(out: &Path) -> PathBuf {
    let mut name = out.file_name().unwrap_or_default().to_os_string();
    name.push(".meta");
    out.with_file_name(name)
}

fn simulate(a: SimulateArgs) -> Outcome {
    let loaded = load_model(&a.model)?;
    let cfg = &loaded.cfg;
    let res = run(cfg, a.run_index).context("engine: run")?;
    write_csv(&a.out, &trajectory_rows(&res)).with_context(|| format!("writing {}", a.out.display()))?;
    let mut extra = vec![("run_index", a.run_index.to_string())];
    if let Some(path) = &a.scatter_out {
        write_csv(path, &scatter_rows(&res, a.run_index, a.pairing)).with_context(|| format!("writing {}", path.display()))?;
        extra.push(("pairing", a.pairing.to_string()));
        extra.push(("expected_return", EXPECTED_RETURN.into()));
    }
    write_meta(&a.out, "simulate", &loaded, &extra)?;
    println!(
        "run {} (seed {}): rho = {:.6}, final prices {:.4} / {:.4}",
        a.run_index,
        cfg.master_seed,
        res.correlation,
        res.market.last_price(Stock::One),
        res.market.last_price(Stock::Two),
    );
    Ok(())
}

fn build_axis(name: &str, default: &Axis, overrides: &AxisArgs) -> Result<Axis, Failure> {
    let (start, stop, step) = overrides.overrides(name);
    Axis::new(
        name,
        start.unwrap_or(default.start),
        stop.unwrap_or(default.stop),
        step.unwrap_or(default.step),
    )
    .map_err(|e| Failure::Usage(e.to_string()))
}

fn grid_axes(experiment: Experiment, overrides: &AxisArgs) -> Result<[Axis; 2], Failure> {
    let defaults = experiment.default_axes();
    let names = match experiment {
        Experiment::Homogeneous | Experiment::Events | Experiment::Holding => ["b1", "b2"],
        Experiment::Centers => ["c1", "c2"],
        Experiment::Ranges => ["delta1", "delta2"],
    };
    Ok([
        build_axis(names[0], &defaults[0], overrides)?,
        build_axis(names[1], &defaults[1], overrides)?,
    ])
}

fn sweep_failure(e: mgcorr::Error) -> Failure {
    match e {
        mgcorr::Error::BadAxis { .. } => Failure::Usage(e.to_string()),
        e => Failure::Runtime(anyhow!(e).context("sweep")),
    }
}

fn run_sweep(a: SweepArgs) -> Outcome {
    let loaded = load_model(&a.model)?;
    let cfg = &loaded.cfg;
    let [x, y] = grid_axes(a.experiment, &a.axes)?;
    let opts = SweepOptions {
        scatter: a.scatter_out.as_ref().map(|_| a.pairing),
    };
    let uniform = match cfg.coupling {
        CouplingSpec::Uniform {
            c1,
            delta1,
            c2,
            delta2,
        } => Some(((c1, c2), (delta1, delta2))),
        CouplingSpec::Homogeneous { .. } => None,
    };
    let grids: Vec<(Option<f64>, SweepGrid)> = match a.experiment {
        Experiment::Homogeneous => vec![(None, sweep::sweep_homogeneous(cfg, x, y, &opts).map_err(sweep_failure)?)],
        Experiment::Holding => vec![(None, sweep::sweep_holding(cfg, x, y, &opts).map_err(sweep_failure)?)],
        Experiment::Centers => {
            let delta = uniform.map_or((1.0, 1.0), |u| u.1);
            vec![(None, sweep::sweep_centers(cfg, delta, x, y, &opts).map_err(sweep_failure)?)]
        }
        Experiment::Ranges => {
            let c = uniform.map_or((0.0, 0.0), |u| u.0);
            vec![(None, sweep::sweep_ranges(cfg, c, x, y, &opts).map_err(sweep_failure)?)]
        }
        Experiment::Events => {
            if a.k_values.is_empty() {
                return Err(Failure::Usage("--k-values needs at least one strength".into()));
            }
            let p = cfg.events.map_or(EMPIRICAL_EVENT_PROBABILITY, |e| e.probability);
            sweep::sweep_events(cfg, x, y, p, &a.k_values, &opts)
                .map_err(sweep_failure)?
                .into_iter()
                .map(|(k, g)| (Some(k), g))
                .collect()
        }
    };

    let mut pooled: Vec<ScatterRow> = Vec::new();
    for (k, grid) in &grids {
        let offset = pooled.iter().map(|r| r.run + 1).max().unwrap_or(0);
        pooled.extend(grid.samples.iter().map(|r| ScatterRow { run: r.run + offset, ..*r }));
        let Some(base) = &a.out else {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            if let Some(k) = k {
                writeln!(lock, "# k = {k}").context("writing grid to stdout")?;
            }
            write_rows(&mut lock, &grid.rows()).context("writing grid to stdout")?;
            continue;
        };
        let out = match k {
            Some(k) => strength_path(base, *k),
            None => base.clone(),
        };
        write_csv(&out, &grid.rows()).with_context(|| format!("writing {}", out.display()))?;
        let mut extra = vec![
            ("experiment", grid.experiment.to_string()),
            ("axis1", describe_axis(&grid.axes[0])),
            ("axis2", describe_axis(&grid.axes[1])),
            ("elapsed_seconds", format!("{:.3}", grid.elapsed.as_secs_f64())),
        ];
        if let Some(k) = k {
            let p = cfg.events.map_or(EMPIRICAL_EVENT_PROBABILITY, |e| e.probability);
            extra.push(("event_probability", p.to_string()));
            extra.push(("event_strength", k.to_string()));
        }
        write_meta(&out, "sweep", &loaded, &extra)?;
        let label = k.map(|k| format!(" (k = {k})")).unwrap_or_default();
        println!(
            "{}{label}: {} cells x {} runs in {:.1}s -> {}",
            grid.experiment,
            grid.cells.len(),
            cfg.n_runs,
            grid.elapsed.as_secs_f64(),
            out.display()
        );
        for c in grid.diagonal() {
            println!("  ({:+.2}, {:+.2}) mean rho {:+.4} sd {:.4}", c.x, c.y, c.mean_rho, c.std_rho);
        }
    }
    if let Some(path) = &a.scatter_out {
        write_csv(path, &pooled).with_context(|| format!("writing {}", path.display()))?;
        write_meta(path, "sweep", &loaded, &[("pairing", a.pairing.to_string()), ("expected_return", EXPECTED_RETURN.into())])?;
    }
    Ok(())
}

fn describe_axis(axis: &Axis) -> String {
    format!("{} from {} to {} step {}", axis.name, axis.start, axis.stop, axis.step)
}

fn strength_path(out: &Path, k: f64) -> PathBuf {
    let stem = out.file_stem().unwrap_or_default().to_string_lossy();
    let name = match out.extension() {
        Some(ext) => format!("{stem}.k{k}.{}", ext.to_string_lossy()),
        None => format!("{stem}.k{k}"),
    };
    out.with_file_name(name)
}

fn regress(a: RegressArgs) -> Outcome {
    if a.trajectory.is_empty() && a.scatter.is_empty() {
        return Err(Failure::Usage("regress needs at least one --trajectory or --scatter file".into()));
    }
    let mut pairs: [(Vec<f64>, Vec<f64>); 2] = Default::default();
    for path in &a.trajectory {
        let rows: Vec<TrajectoryRow> = read_csv(path).with_context(|| format!("reading {}", path.display()))?;
        for s in Stock::BOTH {
            let (e, r) = trajectory_pairs(&rows, s, a.pairing);
            pairs[s.index()].0.extend(e);
            pairs[s.index()].1.extend(r);
        }
    }
    for path in &a.scatter {
        let rows: Vec<ScatterRow> = read_csv(path).with_context(|| format!("reading {}", path.display()))?;
        for s in Stock::BOTH {
            let (e, r) = scatter_pairs(&rows, s);
            pairs[s.index()].0.extend(e);
            pairs[s.index()].1.extend(r);
        }
    }
    let report: Vec<ReportRow> = regress_pairs(pairs).context("stats: regression")?;
    if let Some(out) = &a.out {
        write_csv(out, &report).with_context(|| format!("writing {}", out.display()))?;
    }
    println!("stock  beta1      p-value    R2       n");
    for r in &report {
        println!("{:<6} {:<10.4} {:<10.3e} {:<8.4} {}", r.stock, r.beta1, r.p_value, r.r_squared, r.n);
    }
    Ok(())
}

fn verify_appendix(a: VerifyArgs) -> Outcome {
    if a.samples == 0 {
        return Err(Failure::Usage("--samples must be positive".into()));
    }
    let report = analytic::verify(a.samples, a.seed);
    println!("regime input  output verdict                                   trends                      freq range          result");
    for c in &report.cells {
        println!(
            "{:<6} {:<6} {:<6} {:<41} {:<27} [{:.4}, {:.4}]  {}",
            c.regime.to_string(),
            c.input.to_string(),
            c.output.to_string(),
            c.verdict.describe(),
            c.trend_label(),
            c.min_frequency,
            c.max_frequency,
            if c.passed() { "pass" } else { "FAIL" }
        );
    }
    println!("relabel symmetry III <-> IV: {}", if report.symmetric { "pass" } else { "FAIL" });
    if let Some(out) = &a.out {
        let rows: Vec<VerifyRow> = report.cells.iter().map(VerifyRow::from).collect();
        write_csv(out, &rows).with_context(|| format!("writing {}", out.display()))?;
        let text = format!(
            "# mgcorr verify-appendix\n# samples: {}\n# seed: {}\n# sampling: {ORACLE_SAMPLING}\n# relabel symmetry: {}\n",
            a.samples, a.seed, report.symmetric
        );
        write_text(&meta_path(out), &text)?;
    }
    let failed = report.cells.iter().filter(|c| !c.passed()).count();
    if report.passed() {
        println!("all {} cells agree at {} samples per coupling", report.cells.len(), a.samples);
        Ok(())
    } else {
        Err(Failure::Verify(format!(
            "analytic::verify: {failed} of {} cells disagree, symmetry {}",
            report.cells.len(),
            report.symmetric
        )))
    }
}

#[derive(Serialize)]
struct VerifyRow {
    regime: String,
    input: String,
    output: String,
    feasible: bool,
    condition: String,
    trends: String,
    min_frequency: f64,
    max_frequency: f64,
    pass: bool,
}

impl From<&analytic::CellCheck> for VerifyRow {
    fn from(c: &analytic::CellCheck) -> Self {
        VerifyRow {
            regime: c.regime.to_string(),
            input: c.input.to_string(),
            output: c.output.to_string(),
            feasible: c.verdict.feasible,
            condition: c.verdict.describe(),
            trends: c.trend_label(),
            min_frequency: c.min_frequency,
            max_frequency: c.max_frequency,
            pass: c.passed(),
        }
    }
}

fn ar1(a: Ar1Args) -> Outcome {
    let series: Vec<[Vec<f64>; 2]> = if a.trajectory.is_empty() {
        let loaded = load_model(&a.model)?;
        run_each(&loaded.cfg)
            .into_iter()
            .map(|r| r.map(|r| Stock::BOTH.map(|s| r.returns(s).to_vec())))
            .collect::<Result<_, _>>()
            .context("engine: run_each")?
    } else {
        let mut all = Vec::new();
        for path in &a.trajectory {
            let rows: Vec<TrajectoryRow> = read_csv(path).with_context(|| format!("reading {}", path.display()))?;
            all.push([rows.iter().map(|r| r.r1).collect(), rows.iter().map(|r| r.r2).collect()]);
        }
        all
    };
    let mut rows = Vec::new();
    println!("stock  phi        n");
    // Lag pairs are formed within each series, then pooled.
    for s in Stock::BOTH {
        let (lag, now): (Vec<f64>, Vec<f64>) = series
            .iter()
            .flat_map(|pair| {
                let x = &pair[s.index()];
                x.iter().copied().zip(x.iter().skip(1).copied()).collect::<Vec<_>>()
            })
            .unzip();
        let fit = stats::ols(&lag, &now).context("stats: ar1")?;
        println!("{:<6} {:<10.5} {}", s.number(), fit.beta1, fit.n);
        rows.push(Ar1Row {
            stock: s.number(),
            phi: fit.beta1,
            n: fit.n,
        });
    }
    if let Some(out) = &a.out {
        write_csv(out, &rows).with_context(|| format!("writing {}", out.display()))?;
    }
    Ok(())
}

#[derive(Serialize)]
struct Ar1Row {
    stock: u8,
    phi: f64,
    n: usize,
}
