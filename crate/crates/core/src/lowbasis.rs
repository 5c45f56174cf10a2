//! Finite forcing in the style of the low basis argument.
//!
//! Starting from a clopen set `U` with nonempty complement, each query `T`
//! is decided in turn: if `U ∪ T` already covers Cantor space, every point
//! outside `U` lies in `T` and the verdict is [`Verdict::Halts`]; otherwise
//! `T` is absorbed into `U` and the verdict is [`Verdict::Diverges`]. The
//! answers never look at the witness, which is read off the complement of
//! the final `U` afterwards.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bits::BitString;
use crate::clopen::{ClopenSet, Limits};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Query {
    pub label: String,
    pub set: ClopenSet,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ForcingInstance {
    pub initial_u: ClopenSet,
    pub queries: Vec<Query>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Halts,
    Diverges,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Answer {
    pub label: String,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ForcingOutcome {
    pub answers: Vec<Answer>,
    pub final_u: ClopenSet,
    pub witness_prefix: BitString,
}

/// One decided query together with the sets before and after it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ForcingStep {
    pub label: String,
    pub verdict: Verdict,
    pub before: ClopenSet,
    pub after: ClopenSet,
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum ForcingError {
    #[error("initial set covers the whole space")]
    FullInitialSet,
    #[error("witness length {witness_length} is below the maximum interval depth {depth}")]
    WitnessTooShort { witness_length: usize, depth: usize },
    #[error("interval depth {depth} exceeds the limit {max_depth}")]
    TooDeep { depth: usize, max_depth: usize },
}

impl ForcingInstance {
    /// Largest interval length among the initial set and the queries.
    pub fn depth(&self) -> usize {
        self.queries.iter().map(|q| q.set.depth()).fold(self.initial_u.depth(), usize::max)
    }

    pub fn check(&self, limits: &Limits) -> Result<(), ForcingError> {
        if self.initial_u.is_full() {
            return Err(ForcingError::FullInitialSet);
        }
        let depth = self.depth();
        if depth > limits.max_depth {
            return Err(ForcingError::TooDeep { depth, max_depth: limits.max_depth });
        }
        Ok(())
    }

    /// Decides the queries one by one.
    pub fn steps(&self) -> Result<Steps<'_>, ForcingError> {
        if self.initial_u.is_full() {
            return Err(ForcingError::FullInitialSet);
        }
        Ok(Steps { queries: self.queries.iter(), u: self.initial_u.clone() })
    }
}

pub struct Steps<'a> {
    queries: std::slice::Iter<'a, Query>,
    u: ClopenSet,
}

impl Iterator for Steps<'_> {
    type Item = ForcingStep;

    fn next(&mut self) -> Option<ForcingStep> {
        let query = self.queries.next()?;
        let joined = self.u.union(&query.set);
        let (verdict, after) = if joined.is_full() {
            (Verdict::Halts, self.u.clone())
        } else {
            (Verdict::Diverges, joined)
        };
        let before = std::mem::replace(&mut self.u, after.clone());
        Some(ForcingStep { label: query.label.clone(), verdict, before, after })
    }
}

pub fn force(instance: &ForcingInstance, witness_length: usize) -> Result<ForcingOutcome, ForcingError> {
    let depth = instance.depth();
    if witness_length < depth {
        return Err(ForcingError::WitnessTooShort { witness_length, depth });
    }
    let mut answers = Vec::with_capacity(instance.queries.len());
    let mut final_u = instance.initial_u.clone();
    for step in instance.steps()? {
        debug_assert!(!step.after.is_full());
        answers.push(Answer { label: step.label, verdict: step.verdict });
        final_u = step.after;
    }
    let witness_prefix = final_u
        .leftmost_avoiding(witness_length)
        .expect("a non-full set of depth <= witness length misses some string of that length");
    Ok(ForcingOutcome { answers, final_u, witness_prefix })
}
