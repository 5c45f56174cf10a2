//! Limit frequencies of eventually periodic partial functions.
//!
//! A trace lists `f(0), f(1), ...` as a finite prefix followed by a period
//! repeated forever, with `None` where `f` is undefined. The frequency of
//! `x` among the first `n` values converges to its share of the period.

use std::collections::BTreeMap;

use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bits::BitString;
use crate::family::{IndexSpec, SemimeasureEvent, SemimeasureFamilyPresentation};
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawTrace")]
pub struct PartialTrace {
    prefix: Vec<Option<u64>>,
    period: Vec<Option<u64>>,
}

#[derive(Deserialize)]
struct RawTrace {
    #[serde(default)]
    prefix: Vec<Option<u64>>,
    period: Vec<Option<u64>>,
}

impl TryFrom<RawTrace> for PartialTrace {
    type Error = FreqError;
    fn try_from(raw: RawTrace) -> Result<Self, FreqError> {
        PartialTrace::new(raw.prefix, raw.period)
    }
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum FreqError {
    #[error("period must be nonempty")]
    EmptyPeriod,
    #[error("Nmax = {nmax} is not a multiple of the period length {period}")]
    NotPeriodMultiple { nmax: u64, period: usize },
    #[error("Nmax = {nmax} is below |prefix| + |period| = {needed}")]
    HorizonTooSmall { nmax: u64, needed: usize },
    #[error("grid has no value <= {value}")]
    MissingFloor { value: Rational },
    #[error("grid value {0} outside [0, 1]")]
    GridValueOutOfRange(Rational),
}

impl PartialTrace {
    pub fn new(prefix: Vec<Option<u64>>, period: Vec<Option<u64>>) -> Result<Self, FreqError> {
        if period.is_empty() {
            return Err(FreqError::EmptyPeriod);
        }
        Ok(PartialTrace { prefix, period })
    }

    pub fn prefix(&self) -> &[Option<u64>] {
        &self.prefix
    }

    pub fn period(&self) -> &[Option<u64>] {
        &self.period
    }

    /// `f(i)`, or `None` where undefined.
    pub fn value(&self, i: usize) -> Option<u64> {
        match self.prefix.get(i) {
            Some(v) => *v,
            None => self.period[(i - self.prefix.len()) % self.period.len()],
        }
    }
}

fn shares<I: Iterator<Item = Option<u64>>>(values: I, n: usize) -> BTreeMap<u64, Rational> {
    let mut counts: BTreeMap<u64, i64> = BTreeMap::new();
    for x in values.flatten() {
        *counts.entry(x).or_default() += 1;
    }
    counts.into_iter().map(|(x, k)| (x, Rational::new(k, n as i64))).collect()
}

/// `#{i < n : f(i) = x} / n` for every `x` that occurs; empty for `n = 0`.
pub fn empirical_frequency(t: &PartialTrace, n: usize) -> BTreeMap<u64, Rational> {
    if n == 0 {
        return BTreeMap::new();
    }
    shares((0..n).map(|i| t.value(i)), n)
}

/// Exact limit frequencies. Values that never occur in the period are
/// omitted (their limit is 0).
pub fn limit_frequency(t: &PartialTrace) -> BTreeMap<u64, Rational> {
    shares(t.period.iter().copied(), t.period.len())
}

/// Largest grid value `<= value`.
pub fn grid_floor(grid: &[Rational], value: &Rational) -> Result<Rational, FreqError> {
    grid.iter()
        .filter(|g| *g <= value)
        .max()
        .cloned()
        .ok_or_else(|| FreqError::MissingFloor { value: value.clone() })
}

/// Semimeasure family whose members at `1 <= n < nmax` are the grid-floored
/// empirical frequencies and whose tail from `nmax` on is the grid-floored
/// limit. Naturals are encoded as binary numerals.
pub fn trace_to_family(
    t: &PartialTrace,
    nmax: u64,
    grid: &[Rational],
) -> Result<SemimeasureFamilyPresentation, FreqError> {
    let period = t.period.len();
    if !nmax.is_multiple_of(period as u64) {
        return Err(FreqError::NotPeriodMultiple { nmax, period });
    }
    let needed = t.prefix.len() + period;
    if nmax < needed as u64 {
        return Err(FreqError::HorizonTooSmall { nmax, needed });
    }
    if let Some(bad) = grid.iter().find(|g| g.is_negative() || **g > Rational::one()) {
        return Err(FreqError::GridValueOutOfRange(bad.clone()));
    }
    let mut events = Vec::new();
    let mut emit = |stage: u64, spec: IndexSpec, table: BTreeMap<u64, Rational>| -> Result<(), FreqError> {
        for (x, q) in table {
            let value = grid_floor(grid, &q)?;
            if !value.is_zero() {
                events.push(SemimeasureEvent { stage, spec, element: BitString::numeral(x), value });
            }
        }
        Ok(())
    };
    for n in 1..nmax {
        let n_usize = n.to_usize().expect("horizon fits in memory");
        emit(n, IndexSpec::Single(n), empirical_frequency(t, n_usize))?;
    }
    emit(nmax, IndexSpec::Tail(nmax), limit_frequency(t))?;
    Ok(SemimeasureFamilyPresentation { tree_mode: false, events })
}
