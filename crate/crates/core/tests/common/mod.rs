//! Shared helpers for integration tests.

use mgcorr::config::ModelConfig;
use mgcorr::seed::{stream, StreamLabel};
use mgcorr::strategy::Strategy;
use mgcorr::types::Stock;
use rand::Rng;

/// Plain single-asset minority game written without the crate's engine,
/// scoring or encoding code. Consumes the warm-up and tie-break streams in
/// the same order as the two-stock engine does for one stock.
pub fn reference_demand(cfg: &ModelConfig, run_index: usize, stock: Stock, books: &[Vec<Strategy>]) -> Vec<i64> {
    let m = cfg.memory;
    let s = cfg.n_strategies;
    let rows = 1usize << (m + 1);
    let mut warm = stream(cfg.master_seed, run_index as u64, StreamLabel::WarmUp(stock));
    let mut tie = stream(cfg.master_seed, run_index as u64, StreamLabel::TieBreak(stock));
    let mut price = cfg.initial_price;
    let mut returns: Vec<f64> = Vec::new();
    let mut demand = Vec::new();
    let mut scores = vec![vec![0i64; s]; books.len()];

    let mut push = |a: i64, returns: &mut Vec<f64>, demand: &mut Vec<i64>| {
        let next = price + (a as f64).signum() * (a.abs() as f64).sqrt();
        returns.push(next.ln() - price.ln());
        price = next;
        demand.push(a);
    };

    for _ in 0..m.max(1) {
        let a: i64 = books
            .iter()
            .map(|tables| {
                let k = warm.gen_range(0..s);
                let row = warm.gen_range(0..rows);
                i64::from(tables[k].table()[row].value())
            })
            .sum();
        push(a, &mut returns, &mut demand);
    }

    for _ in 0..cfg.horizon {
        // Oldest sign is the most significant history bit; the expectation
        // sign (own lagged return, since b = 0 and a > 0) is the lowest. A
        // non-negative sign is a one bit.
        let bit = |r: f64| usize::from(r >= 0.0);
        let hist = returns[returns.len() - m..].iter().fold(0, |acc, &r| (acc << 1) | bit(r));
        let row = (hist << 1) | bit(*returns.last().unwrap());
        let mut a = 0i64;
        for (tables, u) in books.iter().zip(&scores) {
            let best = *u.iter().max().unwrap();
            let top: Vec<usize> = (0..s).filter(|&k| u[k] == best).collect();
            let k = if top.len() == 1 { top[0] } else { top[tie.gen_range(0..top.len())] };
            a += i64::from(tables[k].table()[row].value());
        }
        for (tables, u) in books.iter().zip(scores.iter_mut()) {
            for k in 0..s {
                u[k] -= a.signum() * i64::from(tables[k].table()[row].value());
            }
        }
        push(a, &mut returns, &mut demand);
    }
    demand
}
