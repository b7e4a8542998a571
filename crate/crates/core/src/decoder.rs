//! Shared decoder vocabulary: channel LLRs, decode results and the algorithm selector.

use std::fmt;
use std::ops::Deref;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::gf2::BitVector;
use crate::golay::CodeSpec;
use crate::ops::OpCounter;
use crate::{fht, oracle, sc};

/// Channel log-likelihood ratios `ln P(0|y)/P(1|y)`; positive favours bit 0.
#[derive(Clone, Debug, PartialEq)]
pub struct LlrVector(Vec<f64>);

impl LlrVector {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if let Some(pos) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument(format!("LLR {pos} is not finite")));
        }
        Ok(Self(values))
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self(self.0.iter().map(|v| v * factor).collect())
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }
}

impl Deref for LlrVector {
    type Target = [f64];

    fn deref(&self) -> &[f64] {
        &self.0
    }
}

/// Correlation `Σ (−1)^{c_j} y_j` of a word with the channel LLRs.
pub fn correlation(c: &[u8], y: &[f64]) -> f64 {
    c.iter().zip(y).map(|(&b, &v)| if b == 0 { v } else { -v }).sum()
}

/// Correlation discrepancy (ellipsoidal weight) `E(c, y)`: the total `|y_j|`
/// over positions where `c_j` disagrees with the sign of `y_j`.
pub fn ellipsoidal_weight(c: &[u8], y: &[f64]) -> f64 {
    c.iter().zip(y).map(|(&b, &v)| -sc::tau(v, b)).sum()
}

/// Outcome of decoding one frame.
#[derive(Clone, Debug, PartialEq)]
pub struct DecodeResult {
    pub codeword: BitVector,
    pub info: BitVector,
    /// Path score `R = −E(codeword, y)`.
    pub score: f64,
    pub ops: OpCounter,
    /// Set when the sequential decoder hit its path cap and fell back to a
    /// greedy completion.
    pub capped: bool,
}

/// Decoding algorithms available to the simulation harness and CLI.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Algorithm {
    /// Plain successive cancellation (list size 1).
    Sc,
    List { size: usize },
    Sequential { size: usize },
    Block { shortcut: bool },
    Ml,
}

impl Algorithm {
    pub fn decode(&self, spec: &CodeSpec, y: &LlrVector) -> DecodeResult {
        match *self {
            Algorithm::Sc => sc::list_decode(y, spec, 1).swap_remove(0),
            Algorithm::List { size } => sc::list_decode(y, spec, size).swap_remove(0),
            Algorithm::Sequential { size } => sc::sequential_decode(y, spec, size, sc::DEFAULT_MAX_PATHS),
            Algorithm::Block { shortcut } => fht::block_decode(y, shortcut),
            Algorithm::Ml => oracle::ml_decode(y),
        }
    }

    /// Parses a CLI-style name (`sc`, `list`, `seq`, `block`, `ml`) with a list size.
    pub fn from_name(name: &str, list_size: usize, shortcut: bool) -> Result<Self> {
        if list_size == 0 && matches!(name, "list" | "seq" | "sequential") {
            return Err(Error::InvalidArgument("list size must be at least 1".into()));
        }
        Ok(match name {
            "sc" => Algorithm::Sc,
            "list" => Algorithm::List { size: list_size },
            "seq" | "sequential" => Algorithm::Sequential { size: list_size },
            "block" => Algorithm::Block { shortcut },
            "block+shortcut" => Algorithm::Block { shortcut: true },
            "ml" => Algorithm::Ml,
            other => return Err(Error::UnknownDecoder(other.to_string())),
        })
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Algorithm::Sc => write!(f, "sc"),
            Algorithm::List { size } => write!(f, "list(L={size})"),
            Algorithm::Sequential { size } => write!(f, "seq(L={size})"),
            Algorithm::Block { shortcut: false } => write!(f, "block"),
            Algorithm::Block { shortcut: true } => write!(f, "block+shortcut"),
            Algorithm::Ml => write!(f, "ml"),
        }
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    /// Accepts `sc`, `ml`, `block`, `block+shortcut`, `list:L` and `seq:L`.
    fn from_str(s: &str) -> Result<Self> {
        match s.split_once(':') {
            Some((name, size)) => {
                let size = size.parse().map_err(|_| Error::InvalidArgument(format!("bad list size in {s:?}")))?;
                Self::from_name(name, size, false)
            }
            None => Self::from_name(s, 1, false),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn llr_vector_rejects_non_finite() {
        assert!(LlrVector::new(vec![1.0, f64::NAN]).is_err());
        assert!(LlrVector::new(vec![1.0, f64::INFINITY]).is_err());
        assert_eq!(LlrVector::new(vec![1.0, -2.0]).unwrap().scaled(2.0).as_slice(), &[2.0, -4.0]);
    }

    #[test]
    fn correlation_and_weight() {
        let y = [1.0, -2.0];
        assert_eq!(correlation(&[0, 1], &y), 3.0);
        assert_eq!(ellipsoidal_weight(&[0, 1], &y), 0.0);
        assert_eq!(ellipsoidal_weight(&[1, 0], &y), 3.0);
    }

    #[test]
    fn algorithm_names() {
        assert_eq!("seq:16".parse::<Algorithm>().unwrap(), Algorithm::Sequential { size: 16 });
        assert_eq!("block+shortcut".parse::<Algorithm>().unwrap(), Algorithm::Block { shortcut: true });
        assert_eq!("ml".parse::<Algorithm>().unwrap(), Algorithm::Ml);
        assert!(matches!("viterbi".parse::<Algorithm>(), Err(Error::UnknownDecoder(_))));
        assert!("list:0".parse::<Algorithm>().is_err());
    }
}
