use crate::{Error, Result};

/// Transition table of an elementary cellular automaton, identified by its
/// rule number: bit `i` of the number is the output for the neighborhood
/// whose cells `(left, center, right)` read as the 3-bit value `i`
/// (`4*left + 2*center + right`).
///
/// Only the number is stored; the output table is derived from it, so the
/// number/outputs correspondence holds by construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RuleTable {
    number: u8,
}

impl RuleTable {
    /// Validates the rule number range. Accepts a wide integer so callers
    /// parsing user input get a proper error instead of a silent wrap.
    pub fn from_number(n: u64) -> Result<Self> {
        if n > 255 {
            return Err(Error::InvalidRule(n));
        }
        Ok(RuleTable { number: n as u8 })
    }

    pub fn number(&self) -> u8 {
        self.number
    }

    /// Output cell value for a neighborhood index in `0..8`.
    pub fn output(&self, neighborhood: u8) -> u8 {
        debug_assert!(neighborhood < 8);
        (self.number >> neighborhood) & 1
    }

    /// The eight outputs, indexed by neighborhood value.
    pub fn outputs(&self) -> [u8; 8] {
        std::array::from_fn(|i| self.output(i as u8))
    }

    /// Mirror-image rule: the output for `(l, c, r)` is this rule's output
    /// for `(r, c, l)`. An involution.
    pub fn reflect(&self) -> RuleTable {
        let mut n = 0u8;
        for neighborhood in 0..8u8 {
            let swapped = ((neighborhood & 1) << 2) | (neighborhood & 2) | (neighborhood >> 2);
            n |= self.output(swapped) << neighborhood;
        }
        RuleTable { number: n }
    }

    /// State-inverted rule: the output for a neighborhood is the negation of
    /// this rule's output for the bitwise-complemented neighborhood. An
    /// involution.
    pub fn complement(&self) -> RuleTable {
        let mut n = 0u8;
        for neighborhood in 0..8u8 {
            n |= (1 - self.output(!neighborhood & 7)) << neighborhood;
        }
        RuleTable { number: n }
    }

    /// All rules dynamically equivalent to this one: its orbit under
    /// reflection, complement, and their composition. Sorted ascending,
    /// deduplicated; size always divides 4.
    pub fn orbit(&self) -> Vec<RuleTable> {
        let r = *self;
        let mut members = vec![r, r.reflect(), r.complement(), r.reflect().complement()];
        members.sort();
        members.dedup();
        members
    }

    /// Smallest rule number in this rule's orbit — the orbit's canonical
    /// representative.
    pub fn canonical(&self) -> RuleTable {
        self.orbit()[0]
    }
}

impl std::fmt::Display for RuleTable {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.number)
    }
}

/// The canonical representatives of all rule orbits under reflection and
/// complement: the smallest rule number of each equivalence class, sorted
/// ascending. There are exactly 88.
pub fn minimum_equivalent_rules() -> Vec<RuleTable> {
    let mut reps: Vec<RuleTable> = (0..=255u8)
        .map(|n| RuleTable { number: n }.canonical())
        .collect();
    reps.sort();
    reps.dedup();
    reps
}
