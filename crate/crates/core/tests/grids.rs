use mgcorr::analytic::{self, predict_correlation_sign, CorrelationSign};
use mgcorr::config::{CouplingSpec, ModelConfig};
use mgcorr::engine::run_many;
use mgcorr::stats;
use mgcorr::sweep::{cell_config, sweep_centers, sweep_homogeneous, sweep_ranges, Axis, SweepOptions};

fn template(runs: usize) -> ModelConfig {
    ModelConfig {
        n_agents: 201,
        horizon: 300,
        initial_price: 1e7,
        n_runs: runs,
        master_seed: 5,
        ..Default::default()
    }
}

#[test]
fn cells_do_not_depend_on_grid_or_order() {
    let t = template(3);
    let opts = SweepOptions::default();
    let forward = sweep_homogeneous(&t, Axis::new("b1", -0.5, 0.5, 0.5).unwrap(), Axis::new("b2", 0.0, 0.5, 0.5).unwrap(), &opts).unwrap();
    for cell in &forward.cells {
        let alone = sweep_homogeneous(&t, Axis::fixed("b1", cell.x), Axis::fixed("b2", cell.y), &opts).unwrap();
        assert_eq!(&alone.cells[0], cell);
        let direct = run_many(&cell_config(&t, CouplingSpec::Homogeneous { b1: cell.x, b2: cell.y })).unwrap();
        assert_eq!(direct.correlations(), cell.correlations);
    }
}

#[test]
fn unit_range_cell_is_shared_by_center_and_range_sweeps() {
    let t = template(3);
    let opts = SweepOptions::default();
    let centers = sweep_centers(&t, (1.0, 1.0), Axis::fixed("c1", 0.0), Axis::fixed("c2", 0.0), &opts).unwrap();
    let ranges = sweep_ranges(&t, (0.0, 0.0), Axis::new("d1", 1.0, 1.5, 0.5).unwrap(), Axis::fixed("d2", 1.0), &opts).unwrap();
    // Same cell under two labellings: (c1, c2) versus (delta1, delta2).
    assert_eq!(centers.cells[0].master_seed, ranges.cells[0].master_seed);
    assert_eq!(centers.cells[0].correlations, ranges.cells[0].correlations);
    assert_ne!(centers.cells[0].correlations, ranges.cells[1].correlations);
}

#[test]
fn transposed_grid_is_statistically_equivalent() {
    let t = template(12);
    let axis = Axis::new("b", -0.8, 0.8, 0.8).unwrap();
    let g = sweep_homogeneous(&t, axis.clone(), axis, &SweepOptions::default()).unwrap();
    let (mut upper, mut lower) = (Vec::new(), Vec::new());
    for c in g.cells.iter().filter(|c| c.x < c.y) {
        upper.push(c.mean_rho);
        lower.push(g.cell(c.y, c.x).unwrap().mean_rho);
    }
    let p = stats::paired_t_test(&upper, &lower).unwrap();
    assert!(p > 0.01, "transpose differs: p = {p}");
}

#[test]
fn strongly_heterogeneous_centers_follow_the_predicted_sign() {
    let t = template(6);
    let axis = Axis::new("c", -1.0, 1.0, 1.0).unwrap();
    let g = sweep_centers(&t, (1.0, 1.0), axis.clone(), axis, &SweepOptions::default()).unwrap();
    for c in &g.cells {
        match predict_correlation_sign((c.x, c.y)) {
            CorrelationSign::Positive => assert!(c.mean_rho > 0.0, "{c:?}"),
            CorrelationSign::Negative => assert!(c.mean_rho < 0.0, "{c:?}"),
            CorrelationSign::Weak => {}
        }
    }
}

#[test]
fn full_oracle_suite_agrees() {
    let report = analytic::verify(1_000_000, 2019);
    assert_eq!(report.cells.len(), 64);
    assert!(report.symmetric);
    for c in &report.cells {
        assert!(c.agrees, "{} {} -> {}: {:?}", c.regime, c.input, c.output, c);
        assert!(c.trends_hold, "{} {} -> {}: {:?}", c.regime, c.input, c.output, c);
    }
    let infeasible = report.cells.iter().filter(|c| !c.verdict.feasible).count();
    let certain = report.cells.iter().filter(|c| c.verdict.is_certain()).count();
    assert_eq!((infeasible, certain), (32, 4));
}
