//! Small value types shared across the simulator.

use std::fmt;

use serde::{Deserialize, Serialize};

/// One of the two traded stocks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Stock {
    One,
    Two,
}

impl Stock {
    pub const BOTH: [Stock; 2] = [Stock::One, Stock::Two];

    #[inline]
    pub fn index(self) -> usize {
        match self {
            Stock::One => 0,
            Stock::Two => 1,
        }
    }

    #[inline]
    pub fn other(self) -> Stock {
        match self {
            Stock::One => Stock::Two,
            Stock::Two => Stock::One,
        }
    }

    pub fn number(self) -> u8 {
        self.index() as u8 + 1
    }
}

impl fmt::Display for Stock {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.number())
    }
}

/// Sign of a return or expected return as seen by a strategy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SignBit {
    Plus,
    Minus,
}

impl SignBit {
    /// Zero maps to `Plus`.
    #[inline]
    pub fn of(x: f64) -> SignBit {
        if x < 0.0 {
            SignBit::Minus
        } else {
            SignBit::Plus
        }
    }

    #[inline]
    pub fn bit(self) -> usize {
        match self {
            SignBit::Plus => 1,
            SignBit::Minus => 0,
        }
    }
}

/// Shares traded by one agent on one stock in one step.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Decision(i8);

impl Decision {
    pub const BUY: Decision = Decision(1);
    pub const SELL: Decision = Decision(-1);
    pub const HOLD: Decision = Decision(0);

    pub fn new(value: i8, set: DecisionSet) -> Option<Decision> {
        let d = Decision(value);
        set.contains(d).then_some(d)
    }

    #[inline]
    pub fn value(self) -> i8 {
        self.0
    }
}

/// The alphabet agents trade in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DecisionSet {
    /// Buy or sell.
    Binary,
    /// Buy, sell, or hold.
    WithHold,
}

impl DecisionSet {
    pub fn from_allow_hold(allow_hold: bool) -> Self {
        if allow_hold {
            DecisionSet::WithHold
        } else {
            DecisionSet::Binary
        }
    }

    pub fn symbols(self) -> &'static [Decision] {
        match self {
            DecisionSet::Binary => &[Decision::SELL, Decision::BUY],
            DecisionSet::WithHold => &[Decision::SELL, Decision::HOLD, Decision::BUY],
        }
    }

    pub fn contains(self, d: Decision) -> bool {
        self.symbols().contains(&d)
    }
}

/// `sgn` with `sgn(0) = 0`.
#[inline]
pub fn signum0(x: f64) -> f64 {
    if x > 0.0 {
        1.0
    } else if x < 0.0 {
        -1.0
    } else {
        0.0
    }
}
