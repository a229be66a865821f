//! One simulation run of the two-stock game, and batches of independent runs.
//!
//! A run samples every agent's strategy tables and coupling coefficients,
//! plays `max(1, m)` unscored warm-up steps with random decisions, then
//! `T` main-loop steps. Each main-loop step, for both stocks at once:
//!
//! 1. expected returns from the previous step's returns,
//! 2. information state from the last `m` return signs and the expectation sign,
//! 3. best-scoring strategy per agent (random tie-break),
//! 4. decisions and excess demand, plus any external shock,
//! 5. price and log return,
//! 6. virtual scoring of every strategy.
//!
//! With an event model the run is played twice: once without events to
//! measure the internal demand's standard deviation, then with shocks
//! scaled by it.

use rand::Rng;
use rayon::prelude::*;

use crate::config::ModelConfig;
use crate::error::{Error, Result};
use crate::expectation::{expected_return, sample_couplings, CouplingCoefficients};
use crate::market::{log_return, update_price, EventState, MarketState, StepRecord};
use crate::scoring::{select_strategy, AgentScores};
use crate::seed::{derive_seed, stream, SimRng, StreamLabel};
use crate::stats;
use crate::strategy::{history_code, sample_strategy, InfoState, Strategy};
use crate::types::{SignBit, Stock};

/// Strategy tables and coupling coefficients of all agents.
#[derive(Debug, Clone, PartialEq)]
pub struct Population {
    /// `books[stock][agent]` holds that agent's `S` tables for the stock.
    /// With shared strategies both books are the same.
    pub books: [Vec<Vec<Strategy>>; 2],
    pub couplings: Vec<CouplingCoefficients>,
}

impl Population {
    /// Draws a fresh population for `run_index`. Each stock's tables come
    /// from their own stream unless the config shares them.
    pub fn sample(cfg: &ModelConfig, run_index: usize) -> Population {
        let set = cfg.decision_set();
        let book = |stock| -> Vec<Vec<Strategy>> {
            let mut rng = stream(cfg.master_seed, run_index as u64, StreamLabel::AgentInit(stock));
            (0..cfg.n_agents)
                .map(|_| {
                    (0..cfg.n_strategies)
                        .map(|_| sample_strategy(&mut rng, cfg.memory, set))
                        .collect()
                })
                .collect()
        };
        let first = book(Stock::One);
        let second = if cfg.shared_strategies {
            first.clone()
        } else {
            book(Stock::Two)
        };
        let books = [first, second];
        let mut rng = stream(cfg.master_seed, run_index as u64, StreamLabel::Couplings);
        let couplings = sample_couplings(&cfg.coupling, cfg.n_agents, &mut rng);
Population { books, couplings }
    }

    pub fn n_agents(&self) -> usize {
        self.couplings.len()
    }

    /// Realized population mean of `b1` and `b2`.
    pub fn mean_coupling(&self) -> (f64, f64) {
        let n = self.couplings.len() as f64;
        let (s1, s2) = self
            .couplings
            .iter()
            .fold((0.0, 0.0), |(x, y), c| (x + c.b1, y + c.b2));
        (s1 / n, s2 / n)
    }
}

/// What one main-loop step consumed, for look-ahead and replay checks.
#[derive(Debug, Clone, PartialEq)]
pub struct StepTrace {
    /// Steps already recorded when the inputs were read; also the index of
    /// this step in the full series.
    pub steps_visible: usize,
    /// Lagged returns used for the expectations.
    pub lag_returns: [f64; 2],
    /// Per-agent information states, per stock.
    pub states: [Vec<InfoState>; 2],
}

/// A run in progress.
pub struct Simulation<'a> {
    cfg: &'a ModelConfig,
    population: Population,
    scores: AgentScores,
    market: MarketState,
    mean_coupling: (f64, f64),
    warmup_rng: [SimRng; 2],
    tie_rng: [SimRng; 2],
    event_rng: [SimRng; 2],
    events: Option<EventState>,
    states: [Vec<InfoState>; 2],
    trace: Option<Vec<StepTrace>>,
}

/// Unscored random steps before the main loop: enough to fill an `m`-sign
/// history with realized returns.
pub fn warmup_len(memory: usize) -> usize {
    memory.max(1)
}

impl<'a> Simulation<'a> {
    pub fn new(cfg: &'a ModelConfig, run_index: usize) -> Self {
        Self::with_population(cfg, run_index, Population::sample(cfg, run_index))
    }

    /// Starts a run with pre-built agents. Only the warm-up, tie-break and
    /// event streams are drawn from `run_index`.
    pub fn with_population(cfg: &'a ModelConfig, run_index: usize, population: Population) -> Self {
        assert_eq!(population.n_agents(), cfg.n_agents);
        let seeds = |f: fn(Stock) -> StreamLabel| {
            Stock::BOTH.map(|s| stream(cfg.master_seed, run_index as u64, f(s)))
        };
        let warmup = warmup_len(cfg.memory);
        let n = cfg.n_agents;
        Simulation {
            cfg,
            mean_coupling: population.mean_coupling(),
            population,
            scores: AgentScores::new(n, cfg.n_strategies),
            market: MarketState::new(cfg.initial_price, warmup, warmup + cfg.horizon),
            warmup_rng: seeds(StreamLabel::WarmUp),
            tie_rng: seeds(StreamLabel::TieBreak),
            event_rng: seeds(StreamLabel::Events),
            events: None,
            states: [vec![InfoState::default(); n], vec![InfoState::default(); n]],
            trace: None,
        }
    }

    /// Enables external shocks for the main loop.
    pub fn set_events(&mut self, events: EventState) {
        self.events = Some(events);
    }

    pub fn enable_trace(&mut self) {
        self.trace = Some(Vec::new());
    }

    pub fn market(&self) -> &MarketState {
        &self.market
    }

    pub fn population(&self) -> &Population {
        &self.population
    }

    pub fn scores(&self) -> &AgentScores {
        &self.scores
    }

    pub fn trace(&self) -> Option<&[StepTrace]> {
        self.trace.as_deref()
    }

    fn mean_expectation(&self, stock: Stock) -> f64 {
        let (a, b) = match stock {
            Stock::One => (self.cfg.a.0, self.mean_coupling.0),
            Stock::Two => (self.cfg.a.1, self.mean_coupling.1),
        };
        match (self.market.last_return(stock), self.market.last_return(stock.other())) {
            (Some(own), Some(other)) => expected_return(a, b, own, other),
            _ => 0.0,
        }
    }

    /// One warm-up step: every agent plays a random row of a random one of
    /// its tables.
    pub fn warmup_step(&mut self) -> Result<()> {
        let n_states = self.cfg.n_states();
        let s = self.cfg.n_strategies;
        let mut demand = [0i64; 2];
        for stock in Stock::BOTH {
            let rng = &mut self.warmup_rng[stock.index()];
            demand[stock.index()] = self.population.books[stock.index()]
                .iter()
                .map(|tables| {
                    let slot = rng.gen_range(0..s);
                    let row = rng.gen_range(0..n_states);
                    i64::from(tables[slot].table()[row].value())
                })
                .sum();
        }
        let expectations = [self.mean_expectation(Stock::One), self.mean_expectation(Stock::Two)];
        for stock in Stock::BOTH {
            let a = demand[stock.index()];
            self.record(stock, a, a as f64, expectations[stock.index()])?;
        }
        Ok(())
    }

    /// One scored main-loop step for both stocks.
    pub fn step(&mut self) -> Result<()> {
        let steps_visible = self.market.steps();
        let lag = [
            self.market.last_return(Stock::One).expect("warm-up precedes the main loop"),
            self.market.last_return(Stock::Two).expect("warm-up precedes the main loop"),
        ];
        let mut demand = [0i64; 2];
        for stock in Stock::BOTH {
            let j = stock.index();
            let a = if j == 0 { self.cfg.a.0 } else { self.cfg.a.1 };
            let (own, other) = (lag[j], lag[1 - j]);
            let hist = history_code(
                &self
                    .market
                    .recent_returns(stock, self.cfg.memory)
                    .iter()
                    .map(|r| SignBit::of(*r))
                    .collect::<Vec<_>>(),
            );
            let rng = &mut self.tie_rng[j];
            let mut total = 0i64;
            for (i, (tables, coupling)) in self.population.books[j]
                .iter()
                .zip(&self.population.couplings)
                .enumerate()
            {
                let e = expected_return(a, coupling.for_stock(stock), own, other);
                let state = InfoState::from_parts(hist, SignBit::of(e));
                let slot = select_strategy(self.scores.agent(stock, i), rng);
                total += i64::from(tables[slot].lookup(state).value());
                self.states[j][i] = state;
            }
            demand[j] = total;
        }

        let expectations = [self.mean_expectation(Stock::One), self.mean_expectation(Stock::Two)];
        let mut totals = [0.0; 2];
        for stock in Stock::BOTH {
            let j = stock.index();
            let external = match &self.events {
                Some(ev) => ev.external_demand(stock, &mut self.event_rng[j]),
                None => 0.0,
            };
            totals[j] = crate::market::combined_demand(demand[j], external);
            self.record(stock, demand[j], totals[j], expectations[j])?;
        }

        for stock in Stock::BOTH {
            let j = stock.index();
            self.scores.update_all(stock, &self.population.books[j], &self.states[j], totals[j]);
        }

        if let Some(trace) = &mut self.trace {
            trace.push(StepTrace {
                steps_visible,
                lag_returns: lag,
                states: self.states.clone(),
            });
        }
        Ok(())
    }

    fn record(&mut self, stock: Stock, internal: i64, total: f64, mean_expectation: f64) -> Result<()> {
        let prev = self.market.last_price(stock);
        let step = self.market.steps();
        let price = update_price(prev, total).ok_or(Error::NonPositivePrice {
            stock,
            step,
            price: prev + total.signum() * total.abs().sqrt(),
        })?;
        self.market.push(
            stock,
            StepRecord {
                price,
                ret: log_return(price, prev),
                internal_demand: internal,
                total_demand: total,
                mean_expectation,
            },
        );
        Ok(())
    }

    /// Warm-up followed by the full main loop.
    pub fn run_to_end(&mut self) -> Result<()> {
        while self.market.steps() < self.market.warmup {
            self.warmup_step()?;
        }
        while self.market.steps() < self.market.warmup + self.cfg.horizon {
            self.step()?;
        }
        Ok(())
    }

    pub fn into_market(self) -> MarketState {
        self.market
    }
}

/// Outcome of one run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunResult {
    pub run_index: usize,
    pub master_seed: u64,
    pub config_fingerprint: u64,
    /// Full series, warm-up included.
    pub market: MarketState,
    /// Pearson correlation of the two main-loop return series.
    pub correlation: f64,
    /// Internal-demand standard deviations used to scale shocks, if any.
    pub event_baseline: Option<[f64; 2]>,
    /// Own-return weights `(a1, a2)`.
    pub a: (f64, f64),
    /// Realized population means of `(b1, b2)`.
    pub mean_coupling: (f64, f64),
}

/// Which expectation a return is paired with in a regression.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Pairing {
    /// `r(t)` against the mean expectation formed from `r(t)` itself,
    /// `a·r_own(t) + b̄·r_other(t)`.
    #[default]
    Formed,
    /// `r(t)` against the mean expectation the agents traded on at `t`,
    /// built from the returns of `t-1`.
    Traded,
}

impl std::str::FromStr for Pairing {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "formed" => Ok(Pairing::Formed),
            "traded" => Ok(Pairing::Traded),
            _ => Err(format!("unknown pairing `{s}` (expected formed or traded)")),
        }
    }
}

impl std::fmt::Display for Pairing {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Pairing::Formed => "formed",
            Pairing::Traded => "traded",
        })
    }
}

impl RunResult {
    /// Main-loop `(mean expected return, return)` series for one stock.
    pub fn samples(&self, stock: Stock) -> (&[f64], &[f64]) {
        let s = self.market.series(stock);
        (
            self.market.recorded(&s.mean_expectation),
            self.market.recorded(&s.returns),
        )
    }

    pub fn returns(&self, stock: Stock) -> &[f64] {
        self.market.recorded(&self.market.series(stock).returns)
    }

    /// Main-loop `(expectation, return)` pairs for one stock; one pair per
    /// recorded step.
    pub fn paired_samples(&self, stock: Stock, pairing: Pairing) -> (Vec<f64>, Vec<f64>) {
        match pairing {
            Pairing::Traded => {
                let (e, r) = self.samples(stock);
                (e.to_vec(), r.to_vec())
            }
            Pairing::Formed => {
                let own = self.returns(stock);
                let other = self.returns(stock.other());
                let (a, b) = match stock {
                    Stock::One => (self.a.0, self.mean_coupling.0),
                    Stock::Two => (self.a.1, self.mean_coupling.1),
                };
                let e = own
                    .iter()
                    .zip(other)
                    .map(|(&x, &y)| expected_return(a, b, x, y))
                    .collect();
                (e, own.to_vec())
            }
        }
    }
}

/// Population standard deviation of the main-loop internal demand.
fn internal_demand_std(market: &MarketState, stock: Stock) -> f64 {
    let a = &market.series(stock).internal_demand[market.warmup..];
    let n = a.len() as f64;
    let mean = a.iter().map(|&x| x as f64).sum::<f64>() / n;
    (a.iter().map(|&x| (x as f64 - mean).powi(2)).sum::<f64>() / n).sqrt()
}

/// Plays one run of `cfg` with the streams of `run_index`.
pub fn run(cfg: &ModelConfig, run_index: usize) -> Result<RunResult> {
    let population = Population::sample(cfg, run_index);
    run_with_population(cfg, run_index, population)
}

pub fn run_with_population(cfg: &ModelConfig, run_index: usize, population: Population) -> Result<RunResult> {
    let events = cfg.events.filter(|ev| !ev.is_inert());
    let mut event_baseline = None;
    let mean_coupling = population.mean_coupling();
    let market = match events {
        None => {
            let mut sim = Simulation::with_population(cfg, run_index, population);
            sim.run_to_end()?;
            sim.into_market()
        }
        Some(ev) => {
            let mut calibration = Simulation::with_population(cfg, run_index, population.clone());
            calibration.run_to_end()?;
            let baseline = Stock::BOTH.map(|s| internal_demand_std(calibration.market(), s));
            event_baseline = Some(baseline);
            let mut sim = Simulation::with_population(cfg, run_index, population);
            sim.set_events(EventState {
                baseline_std: baseline,
                strength: ev.strength,
                probability: ev.probability,
            });
            sim.run_to_end()?;
            sim.into_market()
        }
    };
    let correlation = stats::pearson(
        market.recorded(&market.series(Stock::One).returns),
        market.recorded(&market.series(Stock::Two).returns),
    )?;
    Ok(RunResult {
        run_index,
        master_seed: cfg.master_seed,
        config_fingerprint: cfg.fingerprint(),
        market,
        correlation,
        event_baseline,
        a: cfg.a,
        mean_coupling,
    })
}

/// A batch of independent runs of one configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct RunBatch {
    pub results: Vec<RunResult>,
    pub mean_correlation: f64,
}

impl RunBatch {
    pub fn correlations(&self) -> Vec<f64> {
        self.results.iter().map(|r| r.correlation).collect()
    }
}

/// Every run of `cfg` in parallel, each with its own derived streams; a
/// failed run does not stop the others.
pub fn run_each(cfg: &ModelConfig) -> Vec<Result<RunResult>> {
    (0..cfg.n_runs)
        .into_par_iter()
        .map(|i| {
            run(cfg, i).map_err(|e| Error::Run {
                run_index: i,
                source: Box::new(e),
            })
        })
        .collect()
}

/// `n_runs` runs in parallel; the first failure (by run index) fails the
/// batch.
pub fn run_many(cfg: &ModelConfig) -> Result<RunBatch> {
    let results = run_each(cfg).into_iter().collect::<Result<Vec<_>>>()?;
    let mean_correlation = results.iter().map(|r| r.correlation).sum::<f64>() / results.len() as f64;
    Ok(RunBatch {
        results,
        mean_correlation,
    })
}

/// Seed of the stock-1 strategy stream of a run; a compact run id for
/// summaries.
pub fn run_seed(cfg: &ModelConfig, run_index: usize) -> u64 {
    derive_seed(cfg.master_seed, run_index as u64, StreamLabel::AgentInit(Stock::One))
}
