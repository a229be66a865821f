//! Run configuration, validation, and the flat `key = value` config format.

use std::fmt::Write as _;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::types::DecisionSet;

/// Per-step probability of an external news event, measured on A-share news.
pub const EMPIRICAL_EVENT_PROBABILITY: f64 = 0.0082;

/// How the agents' cross-stock coupling coefficients are assigned.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CouplingSpec {
    /// Every agent uses the same `(b1, b2)`.
    Homogeneous { b1: f64, b2: f64 },
    /// `b_j ~ U(c_j - delta_j, c_j + delta_j)` independently per agent and stock.
    Uniform {
        c1: f64,
        delta1: f64,
        c2: f64,
        delta2: f64,
    },
}

impl CouplingSpec {
    /// Population mean of the coupling for each stock.
    pub fn centers(&self) -> (f64, f64) {
        match *self {
            CouplingSpec::Homogeneous { b1, b2 } => (b1, b2),
            CouplingSpec::Uniform { c1, c2, .. } => (c1, c2),
        }
    }

    /// The same spec with the stock labels exchanged.
    pub fn swapped(&self) -> CouplingSpec {
        match *self {
            CouplingSpec::Homogeneous { b1, b2 } => CouplingSpec::Homogeneous { b1: b2, b2: b1 },
            CouplingSpec::Uniform {
                c1,
                delta1,
                c2,
                delta2,
            } => CouplingSpec::Uniform {
                c1: c2,
                delta1: delta2,
                c2: c1,
                delta2: delta1,
            },
        }
    }

    pub fn is_homogeneous(&self) -> bool {
        matches!(self, CouplingSpec::Homogeneous { .. })
    }
}

/// External demand shocks: with probability `probability` per step and
/// stock, demand is shifted by `±strength · s_j`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EventModel {
    pub probability: f64,
    pub strength: f64,
}

impl EventModel {
    /// True when the model can never change demand.
    pub fn is_inert(&self) -> bool {
        self.probability == 0.0 || self.strength == 0.0
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ModelConfig {
    pub n_agents: usize,
    pub memory: usize,
    pub n_strategies: usize,
    pub horizon: usize,
    pub initial_price: f64,
    pub a: (f64, f64),
    pub coupling: CouplingSpec,
    pub allow_hold: bool,
    /// Apply one set of tables to both stocks instead of drawing a set per
    /// stock. Couples the stocks even at zero coupling.
    pub shared_strategies: bool,
    pub events: Option<EventModel>,
    pub n_runs: usize,
    pub master_seed: u64,
}

impl Default for ModelConfig {
    fn default() -> Self {
        ModelConfig {
            n_agents: 1001,
            memory: 1,
            n_strategies: 2,
            horizon: 1000,
            initial_price: 2000.0,
            a: (1.0, 1.0),
            coupling: CouplingSpec::Homogeneous { b1: 0.0, b2: 0.0 },
            allow_hold: false,
            shared_strategies: false,
            events: None,
            n_runs: 50,
            master_seed: 2019,
        }
    }
}

/// Keys accepted by [`ModelConfig::set`], in serialization order.
pub const CONFIG_KEYS: &[&str] = &[
    "n_agents",
    "memory",
    "n_strategies",
    "horizon",
    "initial_price",
    "a1",
    "a2",
    "b1",
    "b2",
    "c1",
    "delta1",
    "c2",
    "delta2",
    "allow_hold",
    "shared_strategies",
    "event_probability",
    "event_strength",
    "n_runs",
    "master_seed",
];

impl ModelConfig {
    pub fn decision_set(&self) -> DecisionSet {
        DecisionSet::from_allow_hold(self.allow_hold)
    }

    /// Number of information states a strategy table covers, `2^(m+1)`.
    pub fn n_states(&self) -> usize {
        1usize << (self.memory + 1)
    }

    pub fn validate(self) -> Result<ModelConfig> {
        if self.n_agents == 0 {
            return Err(Error::NonPositive("n_agents"));
        }
        if self.n_agents.is_multiple_of(2) {
            return Err(Error::EvenAgentCount(self.n_agents));
        }
        if self.memory == 0 {
            return Err(Error::NonPositive("memory"));
        }
        // 2^(m+1)-entry tables; anything past this is not a sensible run.
        if self.memory > 16 {
            return Err(Error::CoefficientOutOfRange {
                name: "memory",
                value: self.memory as f64,
                range: "[1, 16]",
            });
        }
        if self.n_strategies == 0 {
            return Err(Error::NonPositive("n_strategies"));
        }
        if self.horizon == 0 {
            return Err(Error::NonPositive("horizon"));
        }
        if self.n_runs == 0 {
            return Err(Error::NonPositive("n_runs"));
        }
        if !self.initial_price.is_finite() {
            return Err(Error::NonFinite("initial_price"));
        }
        if self.initial_price <= 0.0 {
            return Err(Error::NonPositive("initial_price"));
        }
        for (name, value) in [("a1", self.a.0), ("a2", self.a.1)] {
            if !(value > 0.0 && value <= 1.0) {
                return Err(Error::CoefficientOutOfRange {
                    name,
                    value,
                    range: "(0, 1]",
                });
            }
        }
        match self.coupling {
            CouplingSpec::Homogeneous { b1, b2 } => {
                if !b1.is_finite() {
                    return Err(Error::NonFinite("b1"));
                }
                if !b2.is_finite() {
                    return Err(Error::NonFinite("b2"));
                }
            }
            CouplingSpec::Uniform {
                c1,
                delta1,
                c2,
                delta2,
            } => {
                for (name, v) in [("c1", c1), ("delta1", delta1), ("c2", c2), ("delta2", delta2)] {
                    if !v.is_finite() {
                        return Err(Error::NonFinite(name));
                    }
                }
                if delta1 < 0.0 {
                    return Err(Error::NegativeHalfWidth {
                        name: "delta1",
                        value: delta1,
                    });
                }
                if delta2 < 0.0 {
                    return Err(Error::NegativeHalfWidth {
                        name: "delta2",
                        value: delta2,
                    });
                }
            }
        }
        if let Some(ev) = self.events {
            if !(0.0..=1.0).contains(&ev.probability) {
                return Err(Error::ProbabilityOutOfRange(ev.probability));
            }
            if !ev.strength.is_finite() || ev.strength < 0.0 {
                return Err(Error::NegativeStrength(ev.strength));
            }
        }
        Ok(self)
    }

    /// Applies one `key = value` assignment. Coupling keys switch the
    /// coupling kind: `b1`/`b2` select homogeneous, `c*`/`delta*` uniform.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let value = value.trim();
        match key {
            "n_agents" => self.n_agents = parse(key, value)?,
            "memory" => self.memory = parse(key, value)?,
            "n_strategies" => self.n_strategies = parse(key, value)?,
            "horizon" => self.horizon = parse(key, value)?,
            "initial_price" => self.initial_price = parse(key, value)?,
            "a1" => self.a.0 = parse(key, value)?,
            "a2" => self.a.1 = parse(key, value)?,
            "b1" | "b2" => {
                let v: f64 = parse(key, value)?;
                let (mut b1, mut b2) = match self.coupling {
                    CouplingSpec::Homogeneous { b1, b2 } => (b1, b2),
                    CouplingSpec::Uniform { c1, c2, .. } => (c1, c2),
                };
                if key == "b1" {
                    b1 = v;
                } else {
                    b2 = v;
                }
                self.coupling = CouplingSpec::Homogeneous { b1, b2 };
            }
            "c1" | "c2" | "delta1" | "delta2" => {
                let v: f64 = parse(key, value)?;
                let (mut c1, mut delta1, mut c2, mut delta2) = match self.coupling {
                    CouplingSpec::Homogeneous { b1, b2 } => (b1, 0.0, b2, 0.0),
                    CouplingSpec::Uniform {
                        c1,
                        delta1,
                        c2,
                        delta2,
                    } => (c1, delta1, c2, delta2),
                };
                match key {
                    "c1" => c1 = v,
                    "c2" => c2 = v,
                    "delta1" => delta1 = v,
                    _ => delta2 = v,
                }
                self.coupling = CouplingSpec::Uniform {
                    c1,
                    delta1,
                    c2,
                    delta2,
                };
            }
            "allow_hold" => self.allow_hold = parse(key, value)?,
            "shared_strategies" => self.shared_strategies = parse(key, value)?,
            "event_probability" | "event_strength" => {
                let v: f64 = parse(key, value)?;
                let ev = self.events.get_or_insert(EventModel {
                    probability: EMPIRICAL_EVENT_PROBABILITY,
                    strength: 0.0,
                });
                if key == "event_probability" {
                    ev.probability = v;
                } else {
                    ev.strength = v;
                }
            }
            "n_runs" => self.n_runs = parse(key, value)?,
            "master_seed" => self.master_seed = parse(key, value)?,
            _ => return Err(Error::UnknownKey(key.to_string())),
        }
        Ok(())
    }

    /// Reads the flat config format on top of `self`. Blank lines and
    /// `#` comments are skipped; unknown keys are errors.
    pub fn apply_kv_str(&mut self, text: &str) -> Result<()> {
        for (i, raw) in text.lines().enumerate() {
            let line = match raw.find('#') {
                Some(pos) => &raw[..pos],
                None => raw,
            }
            .trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or(Error::Syntax { line: i + 1 })?;
            let key = key.trim();
            if key.is_empty() {
                return Err(Error::Syntax { line: i + 1 });
            }
            self.set(key, value)?;
        }
        Ok(())
    }

    /// Parses a config file over the defaults and validates it.
    pub fn from_kv_str(text: &str) -> Result<ModelConfig> {
        let mut cfg = ModelConfig::default();
        cfg.apply_kv_str(text)?;
        cfg.validate()
    }

    pub fn to_kv_string(&self) -> String {
        let mut out = String::new();
        let mut put = |k: &str, v: &dyn std::fmt::Display| {
            let _ = writeln!(out, "{k} = {v}");
        };
        put("n_agents", &self.n_agents);
        put("memory", &self.memory);
        put("n_strategies", &self.n_strategies);
        put("horizon", &self.horizon);
        put("initial_price", &self.initial_price);
        put("a1", &self.a.0);
        put("a2", &self.a.1);
        match self.coupling {
            CouplingSpec::Homogeneous { b1, b2 } => {
                put("b1", &b1);
                put("b2", &b2);
            }
            CouplingSpec::Uniform {
                c1,
                delta1,
                c2,
                delta2,
            } => {
                put("c1", &c1);
                put("delta1", &delta1);
                put("c2", &c2);
                put("delta2", &delta2);
            }
        }
        put("allow_hold", &self.allow_hold);
        put("shared_strategies", &self.shared_strategies);
        if let Some(ev) = self.events {
            put("event_probability", &ev.probability);
            put("event_strength", &ev.strength);
        }
        put("n_runs", &self.n_runs);
        put("master_seed", &self.master_seed);
        out
    }

    /// FNV-1a over the serialized form; identifies a configuration in outputs.
    pub fn fingerprint(&self) -> u64 {
        let mut h: u64 = 0xcbf2_9ce4_8422_2325;
        for byte in self.to_kv_string().bytes() {
            h ^= u64::from(byte);
            h = h.wrapping_mul(0x0100_0000_01b3);
        }
        h
    }

    /// Stock-relabeled configuration: coefficients of stock 1 and 2 swap.
    pub fn swapped(&self) -> ModelConfig {
        ModelConfig {
            a: (self.a.1, self.a.0),
            coupling: self.coupling.swapped(),
            ..self.clone()
        }
    }
}

fn parse<T: FromStr>(key: &str, value: &str) -> Result<T>
where
    T::Err: std::fmt::Display,
{
    value.parse().map_err(|e: T::Err| Error::BadValue {
        key: key.to_string(),
        value: value.to_string(),
        reason: e.to_string(),
    })
}
