//! Elementary cellular automaton engine.
//!
//! An elementary CA is a one-dimensional, two-state automaton where each
//! cell's next value depends on its own state and its two immediate
//! neighbors. The 8-entry lookup table is named by the decimal reading of
//! its output bits ([`RuleTable`]), states are bit-packed vectors
//! ([`BinaryState`]), and repeated application of a rule yields a
//! [`Trajectory`]. Boundaries are periodic: the row is a ring, so evolution
//! commutes with circular shifts.

mod rule;
mod state;

pub use rule::{minimum_equivalent_rules, RuleTable};
pub use state::BinaryState;

use crate::{Error, Result};
use state::last_word_mask;

/// The states visited by a CA run: row 0 is the initial condition and row
/// `t+1` is `step(rule, row t)`. Construct via [`evolve`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trajectory {
    rule: RuleTable,
    rows: Vec<BinaryState>,
}

impl Trajectory {
    pub fn rule(&self) -> RuleTable {
        self.rule
    }

    pub fn rows(&self) -> &[BinaryState] {
        &self.rows
    }

    /// Number of applied steps; one less than the number of rows.
    pub fn steps(&self) -> usize {
        self.rows.len() - 1
    }

    /// Cells per row.
    pub fn width(&self) -> usize {
        self.rows[0].len()
    }

    /// All rows concatenated into one bit vector of length
    /// `rows.len() * width`, row 0 first.
    pub fn concat_rows(&self) -> BinaryState {
        BinaryState::concat(self.rows.iter())
    }

    /// Rows rendered as lines of `'0'`/`'1'` characters.
    pub fn to_text(&self) -> String {
        let mut out = String::with_capacity(self.rows.len() * (self.width() + 1));
        for row in &self.rows {
            out.push_str(&row.to_text());
            out.push('\n');
        }
        out
    }
}

/// Computes one synchronous update of `state` under `rule` with periodic
/// boundaries: cell `i` of the result is the rule output for the
/// neighborhood `(state[i-1], state[i], state[i+1])`, indices mod the row
/// length.
///
/// The update is computed bit-parallel, 64 cells per word: the left- and
/// right-neighbor vectors are circular shifts of the packed state, and the
/// next state is the OR over the rule's set outputs of the corresponding
/// three-way AND minterms.
pub fn step(rule: RuleTable, state: &BinaryState) -> Result<BinaryState> {
    if state.len() < 3 {
        return Err(Error::StateTooShort(state.len()));
    }
    let left = state.rotate_toward_high();
    let right = state.rotate_toward_low();

    let n = state.words().len();
    let mut words = Vec::with_capacity(n);
    for k in 0..n {
        let (lw, cw, rw) = (left.words()[k], state.words()[k], right.words()[k]);
        let mut out = 0u64;
        for neighborhood in 0..8u8 {
            if rule.output(neighborhood) == 1 {
                let a = if neighborhood & 4 != 0 { lw } else { !lw };
                let b = if neighborhood & 2 != 0 { cw } else { !cw };
                let c = if neighborhood & 1 != 0 { rw } else { !rw };
                out |= a & b & c;
            }
        }
        words.push(out);
    }
    // Complemented inputs (`!lw` etc.) set the unused high bits of the last
    // word whenever the rule maps neighborhood 000 to 1; strip them so the
    // packed representation stays canonical.
    *words.last_mut().expect("len >= 3") &= last_word_mask(state.len());
    Ok(BinaryState::from_words(words, state.len()))
}

/// Runs `steps` updates of `rule` from `initial` and collects every state:
/// the result has `steps + 1` rows, the first being `initial` itself.
pub fn evolve(rule: RuleTable, initial: &BinaryState, steps: usize) -> Result<Trajectory> {
    let mut rows = Vec::with_capacity(steps + 1);
    rows.push(initial.clone());
    for _ in 0..steps {
        let next = step(rule, rows.last().expect("at least one row"))?;
        rows.push(next);
    }
    Ok(Trajectory { rule, rows })
}
