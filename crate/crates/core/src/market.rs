//! Excess demand, price formation, and external demand shocks.

use rand::Rng;

use crate::types::{signum0, Decision, Stock};

/// Net number of shares demanded: the plain sum of all decisions.
pub fn excess_demand(decisions: &[Decision]) -> i64 {
    decisions.iter().map(|d| i64::from(d.value())).sum()
}

/// Internal plus external demand.
#[inline]
pub fn combined_demand(internal: i64, external: f64) -> f64 {
    internal as f64 + external
}

/// `P + sgn(A)·sqrt|A|`. Returns `None` when the new price is not
/// positive, since the log return would be undefined.
#[inline]
pub fn update_price(prev_price: f64, total_demand: f64) -> Option<f64> {
    let p = prev_price + signum0(total_demand) * total_demand.abs().sqrt();
    (p > 0.0).then_some(p)
}

#[inline]
pub fn log_return(p_now: f64, p_prev: f64) -> f64 {
    p_now.ln() - p_prev.ln()
}

/// Parameters of the external demand process for both stocks.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EventState {
    /// Standard deviation `s_j` of the internal demand.
    pub baseline_std: [f64; 2],
    /// Multiplier `k`; shock size is `k · s_j`.
    pub strength: f64,
    pub probability: f64,
}

impl EventState {
    pub fn shock_size(&self, stock: Stock) -> f64 {
        self.strength * self.baseline_std[stock.index()]
    }

    /// With probability `p` returns `±k·s_j`, the sign set by the parity of
    /// a random integer; otherwise zero.
    pub fn external_demand<R: Rng + ?Sized>(&self, stock: Stock, rng: &mut R) -> f64 {
        if rng.gen::<f64>() >= self.probability {
            return 0.0;
        }
        let theta: u32 = rng.gen();
        let size = self.shock_size(stock);
        if theta.is_multiple_of(2) {
            size
        } else {
            -size
        }
    }
}

/// Recorded history of one stock. All vectors have one entry per step.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct StockSeries {
    pub prices: Vec<f64>,
    pub returns: Vec<f64>,
    /// Sum of agent decisions.
    pub internal_demand: Vec<i64>,
    /// Internal demand plus any external shock.
    pub total_demand: Vec<f64>,
    /// Population mean of the agents' expected returns for this step.
    pub mean_expectation: Vec<f64>,
}

impl StockSeries {
    fn with_capacity(n: usize) -> Self {
        StockSeries {
            prices: Vec::with_capacity(n),
            returns: Vec::with_capacity(n),
            internal_demand: Vec::with_capacity(n),
            total_demand: Vec::with_capacity(n),
            mean_expectation: Vec::with_capacity(n),
        }
    }

    pub fn len(&self) -> usize {
        self.prices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.prices.is_empty()
    }
}

/// Price, return, demand and mean-expectation series for both stocks.
/// The first `warmup` steps are the random start-up phase.
#[derive(Debug, Clone, PartialEq)]
pub struct MarketState {
    pub initial_price: f64,
    pub warmup: usize,
    pub stocks: [StockSeries; 2],
}

/// Everything recorded for one stock in one step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepRecord {
    pub price: f64,
    pub ret: f64,
    pub internal_demand: i64,
    pub total_demand: f64,
    pub mean_expectation: f64,
}

impl MarketState {
    pub fn new(initial_price: f64, warmup: usize, capacity: usize) -> Self {
        MarketState {
            initial_price,
            warmup,
            stocks: [
                StockSeries::with_capacity(capacity),
                StockSeries::with_capacity(capacity),
            ],
        }
    }

    pub fn series(&self, stock: Stock) -> &StockSeries {
        &self.stocks[stock.index()]
    }

    /// Steps recorded so far, warm-up included.
    pub fn steps(&self) -> usize {
        self.stocks[0].len()
    }

    pub fn last_price(&self, stock: Stock) -> f64 {
        self.series(stock)
            .prices
            .last()
            .copied()
            .unwrap_or(self.initial_price)
    }

    pub fn last_return(&self, stock: Stock) -> Option<f64> {
        self.series(stock).returns.last().copied()
    }

    /// The last `m` returns, oldest first.
    pub fn recent_returns(&self, stock: Stock, m: usize) -> &[f64] {
        let r = &self.series(stock).returns;
        &r[r.len().saturating_sub(m)..]
    }

    pub fn push(&mut self, stock: Stock, rec: StepRecord) {
        let s = &mut self.stocks[stock.index()];
        s.prices.push(rec.price);
        s.returns.push(rec.ret);
        s.internal_demand.push(rec.internal_demand);
        s.total_demand.push(rec.total_demand);
        s.mean_expectation.push(rec.mean_expectation);
    }

    /// Main-loop slice (warm-up removed) of a series.
    pub fn recorded<'a>(&self, series: &'a [f64]) -> &'a [f64] {
        &series[self.warmup.min(series.len())..]
    }
}
