//! Strategy tables: a decision for every combination of the last `m`
//! return signs and the sign of the agent's own expected return.

use rand::Rng;

use crate::error::{Error, Result};
use crate::types::{Decision, DecisionSet, SignBit};

/// Row index into a strategy table, in `[0, 2^(m+1))`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct InfoState(usize);

impl InfoState {
    pub fn from_index(index: usize, memory: usize) -> Option<InfoState> {
        (index < 1 << (memory + 1)).then_some(InfoState(index))
    }

    #[inline]
    pub fn index(self) -> usize {
        self.0
    }

    /// Joins a precomputed history code with an expectation sign.
    #[inline]
    pub(crate) fn from_parts(history_code: usize, expectation: SignBit) -> InfoState {
        InfoState((history_code << 1) | expectation.bit())
    }
}

/// Packs `history` (oldest first) into its row code; the oldest sign ends
/// up in the highest bit.
pub fn history_code(history: &[SignBit]) -> usize {
    history.iter().fold(0, |acc, s| (acc << 1) | s.bit())
}

/// Oldest history bit is most significant, the expectation bit least.
pub fn encode(history: &[SignBit], memory: usize, expectation: SignBit) -> Result<InfoState> {
    if history.len() != memory {
        return Err(Error::HistoryLength {
            expected: memory,
            got: history.len(),
        });
    }
    Ok(InfoState::from_parts(history_code(history), expectation))
}

/// Inverse of [`encode`].
pub fn decode(state: InfoState, memory: usize) -> (Vec<SignBit>, SignBit) {
    let bit = |b: usize| if b == 1 { SignBit::Plus } else { SignBit::Minus };
    let history = (0..memory)
        .rev()
        .map(|k| bit((state.0 >> (k + 1)) & 1))
        .collect();
    (history, bit(state.0 & 1))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Strategy {
    table: Vec<Decision>,
}

impl Strategy {
    pub fn from_table(table: Vec<Decision>) -> Result<Strategy> {
        let n = table.len();
        if n < 4 || !n.is_power_of_two() {
            return Err(Error::BadTableLength(n));
        }
        Ok(Strategy { table })
    }

    pub fn table(&self) -> &[Decision] {
        &self.table
    }

    pub fn memory(&self) -> usize {
        self.table.len().trailing_zeros() as usize - 1
    }

    #[inline]
    pub fn lookup(&self, state: InfoState) -> Decision {
        self.table[state.0]
    }
}

/// Draws every table entry independently and uniformly from `set`.
pub fn sample_strategy<R: Rng + ?Sized>(rng: &mut R, memory: usize, set: DecisionSet) -> Strategy {
    let symbols = set.symbols();
    let table = (0..1usize << (memory + 1))
        .map(|_| symbols[rng.gen_range(0..symbols.len())])
        .collect();
    Strategy { table }
}
