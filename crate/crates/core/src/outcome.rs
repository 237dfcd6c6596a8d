//! Outcome labels for binary measurements and the `+/-` path strings of the
//! PPBS tree.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};

/// Single binary measurement outcome, `nu = +1` or `nu = -1`.
///
/// In the optical picture `Plus` is transmission at a PPBS and `Minus` is
/// reflection.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Outcome {
    Plus,
    Minus,
}

impl Outcome {
    /// Numeric value `+1.0` or `-1.0`.
    pub fn sign(self) -> f64 {
        match self {
            Outcome::Plus => 1.0,
            Outcome::Minus => -1.0,
        }
    }

    /// Transmission indicator: 1 for `+`, 0 for `-`.
    pub fn transmission(self) -> u32 {
        match self {
            Outcome::Plus => 1,
            Outcome::Minus => 0,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Outcome::Plus => '+',
            Outcome::Minus => '-',
        }
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.symbol())
    }
}

/// Sequence of outcomes `nu_1 ... nu_N` labeling one leaf path of the tree.
///
/// Strings are ordered lexicographically with `+` before `-` and the first
/// measurement most significant; [`OutcomeString::index`] is the rank in
/// that order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct OutcomeString(Vec<Outcome>);

impl OutcomeString {
    pub fn new(outcomes: Vec<Outcome>) -> Self {
        Self(outcomes)
    }

    /// The `index`-th string of length `len` in lexicographic order
    /// (`+` = 0 bit, first outcome most significant).
    pub fn from_index(index: usize, len: usize) -> Self {
        let outcomes = (0..len)
            .map(|k| {
                if (index >> (len - 1 - k)) & 1 == 0 {
                    Outcome::Plus
                } else {
                    Outcome::Minus
                }
            })
            .collect();
        Self(outcomes)
    }

    /// Rank in lexicographic order; inverse of [`OutcomeString::from_index`].
    pub fn index(&self) -> usize {
        self.0.iter().fold(0, |acc, o| {
            (acc << 1)
                | match o {
                    Outcome::Plus => 0,
                    Outcome::Minus => 1,
                }
        })
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut outcomes = Vec::with_capacity(text.len());
        for ch in text.chars() {
            match ch {
                '+' => outcomes.push(Outcome::Plus),
                '-' => outcomes.push(Outcome::Minus),
                _ => return Err(Error::BadOutcomeChar { ch }),
            }
        }
        Ok(Self(outcomes))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, k: usize) -> Outcome {
        self.0[k]
    }

    pub fn iter(&self) -> core::slice::Iter<'_, Outcome> {
        self.0.iter()
    }

    pub fn as_slice(&self) -> &[Outcome] {
        &self.0
    }

    pub fn extended(&self, outcome: Outcome) -> Self {
        let mut outcomes = self.0.clone();
        outcomes.push(outcome);
        Self(outcomes)
    }

    pub fn to_symbols(&self) -> String {
        self.0.iter().map(|o| o.symbol()).collect()
    }
}

impl fmt::Display for OutcomeString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for o in &self.0 {
            write!(f, "{}", o)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn index_round_trip() {
        for n in 1..=4 {
            for i in 0..(1usize << n) {
                let s = OutcomeString::from_index(i, n);
                assert_eq!(s.index(), i);
                assert_eq!(s.len(), n);
            }
        }
    }

    #[test]
    fn lexicographic_order_plus_first() {
        // index 0 is all-plus; ascending index order is lexicographic with
        // '+' < '-', which matches ASCII ('+' = 0x2b, '-' = 0x2d).
        let strings: Vec<String> = (0..8)
            .map(|i| OutcomeString::from_index(i, 3).to_symbols())
            .collect();
        assert_eq!(strings[0], "+++");
        assert_eq!(strings[7], "---");
        let mut sorted = strings.clone();
        sorted.sort();
        assert_eq!(strings, sorted);
    }

    #[test]
    fn parse_and_display() {
        let s = OutcomeString::parse("+-+").unwrap();
        assert_eq!(
            s.as_slice(),
            &[Outcome::Plus, Outcome::Minus, Outcome::Plus]
        );
        assert_eq!(s.to_symbols(), "+-+");
        assert!(OutcomeString::parse("+x").is_err());
    }

    #[test]
    fn transmission_indicator() {
        let s = OutcomeString::new(vec![Outcome::Plus, Outcome::Minus]);
        assert_eq!(s.get(0).transmission(), 1);
        assert_eq!(s.get(1).transmission(), 0);
    }
}
