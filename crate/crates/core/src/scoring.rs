//! Minority payoff, cumulative strategy scores, and best-strategy selection.

use rand::Rng;

use crate::strategy::{InfoState, Strategy};
use crate::types::{signum0, Decision, Stock};

/// `-sgn(A)·σ`: the minority side gains one, the majority loses one.
#[inline]
pub fn payoff(total_demand: f64, decision: Decision) -> i32 {
    -(signum0(total_demand) as i32) * i32::from(decision.value())
}

/// Cumulative scores `U[stock][agent][slot]`, starting at zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AgentScores {
    n_agents: usize,
    n_strategies: usize,
    scores: [Vec<i32>; 2],
}

impl AgentScores {
    pub fn new(n_agents: usize, n_strategies: usize) -> Self {
        let zeros = vec![0; n_agents * n_strategies];
        AgentScores {
            n_agents,
            n_strategies,
            scores: [zeros.clone(), zeros],
        }
    }

    pub fn n_agents(&self) -> usize {
        self.n_agents
    }

    /// The `S` scores of one agent on one stock.
    #[inline]
    pub fn agent(&self, stock: Stock, agent: usize) -> &[i32] {
        let s = self.n_strategies;
        &self.scores[stock.index()][agent * s..(agent + 1) * s]
    }

    /// Scores every slot of every agent, played or not, on the decision it
    /// would have taken in that agent's state.
    ///
    /// `strategies[i]` are agent `i`'s tables for `stock`, and `states[i]`
    /// the state the agent saw this step.
    pub fn update_all<S: AsRef<[Strategy]>>(
        &mut self,
        stock: Stock,
        strategies: &[S],
        states: &[InfoState],
        total_demand: f64,
    ) {
        debug_assert_eq!(strategies.len(), self.n_agents);
        debug_assert_eq!(states.len(), self.n_agents);
        let sign = signum0(total_demand) as i32;
        if sign == 0 {
            return;
        }
        let s = self.n_strategies;
        let row = &mut self.scores[stock.index()];
        for (i, (tables, state)) in strategies.iter().zip(states).enumerate() {
            for (u, strat) in row[i * s..(i + 1) * s].iter_mut().zip(tables.as_ref()) {
                *u -= sign * i32::from(strat.lookup(*state).value());
            }
        }
    }
}

/// Index of the highest score; ties are broken uniformly at random. The
/// generator is only touched when there is a tie.
pub fn select_strategy<R: Rng + ?Sized>(scores: &[i32], rng: &mut R) -> usize {
    debug_assert!(!scores.is_empty());
    let best = *scores.iter().max().expect("at least one strategy");
    let n_best = scores.iter().filter(|&&u| u == best).count();
    if n_best == 1 {
        return scores.iter().position(|&u| u == best).unwrap();
    }
    let pick = rng.gen_range(0..n_best);
    scores
        .iter()
        .enumerate()
        .filter(|(_, &u)| u == best)
        .nth(pick)
        .map(|(i, _)| i)
        .unwrap()
}
