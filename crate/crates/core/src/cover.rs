//! Covering constructions for the liminf of a staged family.
//!
//! All four procedures share one engine. A working copy of the family is
//! kept as a piecewise-constant sequence of members. Candidate operations
//! are tried in a fixed order; each one modifies every member from some
//! index `N` on, and it is *accepted* only if the per-index constraint
//! (cardinality, semimeasure mass, or measure) still holds everywhere
//! afterwards. Accepted changes persist and are seen by later candidates.
//! The output collects what the accepted operations added.
//!
//! The liminf itself is always covered: an operation that adds something
//! already present in every member from `N` on changes nothing and is
//! therefore accepted.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bits::BitString;
use crate::clopen::{ClopenSet, Limits};
use crate::family::{
    below_capacity, child_sum, raise, table_value, total_mass, tree_closure,
    OpenFamilyPresentation, SemimeasureFamilyPresentation, SetFamilyPresentation, StagedFamily,
    ValidationReport, ValueTable,
};
use crate::rational::Rational;

/// Longest candidate interval `cover_open` will enumerate.
pub const MAX_CANDIDATE_LEN: usize = 20;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum CoverError {
    #[error("invalid presentation: {0}")]
    InvalidPresentation(ValidationReport),
    #[error("index horizon {nmax} is below the last breakpoint {last_breakpoint}")]
    HorizonTooSmall { nmax: u64, last_breakpoint: u64 },
    #[error("grid is missing event value {0}")]
    GridMissingValue(Rational),
    #[error("grid value {0} is outside [0,1]")]
    GridValueOutOfRange(Rational),
    #[error("Lmax = {lmax} is smaller than event interval length {needed}")]
    LmaxTooSmall { lmax: usize, needed: usize },
    #[error("Lmax = {0} exceeds the enumeration limit {MAX_CANDIDATE_LEN}")]
    LmaxTooLarge(usize),
    #[error("presentation has no granularity bound")]
    MissingGranularity,
    #[error("epsilon' = {epsilon_prime} must exceed epsilon = {epsilon}")]
    EpsilonPrimeNotLarger { epsilon: Rational, epsilon_prime: Rational },
}

/// The working family: `segments[i].1` is the member on
/// `[segments[i].0, segments[i+1].0)`, the last one extending to infinity.
#[derive(Debug, Clone)]
struct Piecewise<M> {
    segments: Vec<(u64, M)>,
}

impl<M: Clone> Piecewise<M> {
    fn sample<F: StagedFamily<Member = M>>(family: &F) -> Self {
        Piecewise {
            segments: family.breakpoints().into_iter().map(|n| (n, family.member_at(n, None))).collect(),
        }
    }

    /// Makes `n` a segment start and returns that segment's position.
    fn split_at(&mut self, n: u64) -> usize {
        let pos = self.segments.partition_point(|(start, _)| *start <= n) - 1;
        if self.segments[pos].0 == n {
            return pos;
        }
        let member = self.segments[pos].1.clone();
        self.segments.insert(pos + 1, (n, member));
        pos + 1
    }

    /// Applies `update` to every member from index `from` on, provided it
    /// succeeds for all of them. Returns whether the change was committed.
    fn try_update(&mut self, from: u64, update: impl Fn(&M) -> Option<M>) -> bool {
        let pos = self.split_at(from);
        let mut replaced = Vec::with_capacity(self.segments.len() - pos);
        for (_, member) in &self.segments[pos..] {
            match update(member) {
                Some(m) => replaced.push(m),
                None => return false,
            }
        }
        for ((_, member), new) in self.segments[pos..].iter_mut().zip(replaced) {
            *member = new;
        }
        true
    }

    fn tail(&self) -> &M {
        &self.segments.last().expect("segment list is never empty").1
    }
}

fn structural_limits() -> Limits {
    Limits { max_depth: usize::MAX }
}

fn check_valid<F: StagedFamily>(p: &F) -> Result<(), CoverError> {
    let report = p.validate(&structural_limits());
    if report.is_valid() {
        Ok(())
    } else {
        Err(CoverError::InvalidPresentation(report))
    }
}

fn resolve_horizon<F: StagedFamily>(p: &F, nmax: Option<u64>) -> Result<u64, CoverError> {
    let last_breakpoint = p.last_breakpoint();
    match nmax {
        None => Ok(last_breakpoint),
        Some(nmax) if nmax < last_breakpoint => {
            Err(CoverError::HorizonTooSmall { nmax, last_breakpoint })
        }
        Some(nmax) => Ok(nmax),
    }
}

/// An accepted `(N, u)` operation: `u` added to every `U_n` with `n >= N`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AddElementOp {
    pub n: u64,
    pub element: BitString,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct CoverSet {
    pub k: u32,
    pub elements: BTreeSet<BitString>,
    pub accepted_ops: Vec<AddElementOp>,
}

/// Covers the liminf of a set family by fewer than `2^k` elements.
///
/// Pairs `(N, u)` are tried for `N = 0..=nmax` (default: the last
/// breakpoint) and `u` in universe order.
pub fn cover_sets(p: &SetFamilyPresentation, nmax: Option<u64>) -> Result<CoverSet, CoverError> {
    check_valid(p)?;
    let nmax = resolve_horizon(p, nmax)?;
    let mut working = Piecewise::sample(p);
    let mut accepted_ops = Vec::new();
    for n in 0..=nmax {
        for u in &p.universe {
            if try_add_element(&mut working, n, u, p.k) {
                accepted_ops.push(AddElementOp { n, element: u.clone() });
            }
        }
    }
    let elements = accepted_ops.iter().map(|op| op.element.clone()).collect();
    Ok(CoverSet { k: p.k, elements, accepted_ops })
}

fn try_add_element(
    working: &mut Piecewise<BTreeSet<BitString>>,
    n: u64,
    u: &BitString,
    k: u32,
) -> bool {
    working.try_update(n, |member| {
        let mut next = member.clone();
        next.insert(u.clone());
        below_capacity(next.len(), k).then_some(next)
    })
}

/// Replays a log of operations on a fresh working copy of `p` and returns
/// the acceptability verdict of each.
pub fn replay_set_ops(p: &SetFamilyPresentation, ops: &[AddElementOp]) -> Vec<bool> {
    let mut working = Piecewise::sample(p);
    ops.iter().map(|op| try_add_element(&mut working, op.n, &op.element, p.k)).collect()
}

/// An accepted `(r, N, u)` increase: `m_n(u)` raised to at least `r` for
/// every `n >= N`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IncreaseOp {
    pub r: Rational,
    pub n: u64,
    pub element: BitString,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct CoverSemimeasure {
    pub tree_mode: bool,
    pub values: ValueTable,
    pub accepted_ops: Vec<IncreaseOp>,
}

impl CoverSemimeasure {
    pub fn value(&self, x: &BitString) -> Rational {
        table_value(&self.values, x)
    }

    /// Whether `values` is a semimeasure: total mass at most 1 in flat mode,
    /// root at most 1 and every node at least the sum of its children in tree
    /// mode.
    pub fn is_semimeasure(&self) -> bool {
        let one = Rational::one();
        if self.values.values().any(Rational::is_negative) {
            return false;
        }
        if !self.tree_mode {
            return total_mass(&self.values) <= one;
        }
        if self.value(&BitString::empty()) > one {
            return false;
        }
        self.values
            .keys()
            .filter_map(BitString::parent)
            .all(|p| self.value(&p) >= child_sum(&self.values, &p))
    }
}

/// Sorted, deduplicated positive grid after checking it against the
/// presentation. Raising to 0 never changes anything, so 0 is dropped.
fn prepare_grid(p: &SemimeasureFamilyPresentation, grid: &[Rational]) -> Result<Vec<Rational>, CoverError> {
    let one = Rational::one();
    if let Some(bad) = grid.iter().find(|r| r.is_negative() || **r > one) {
        return Err(CoverError::GridValueOutOfRange(bad.clone()));
    }
    let grid: Vec<Rational> =
        grid.iter().filter(|r| !r.is_zero()).cloned().collect::<BTreeSet<_>>().into_iter().collect();
    for e in &p.events {
        if grid.binary_search(&e.value).is_err() {
            return Err(CoverError::GridMissingValue(e.value.clone()));
        }
    }
    Ok(grid)
}

fn increased(member: &ValueTable, u: &BitString, r: &Rational, tree_mode: bool) -> Option<ValueTable> {
    let one = Rational::one();
    let mut next = member.clone();
    raise(&mut next, u, r.clone());
    if tree_mode {
        for y in u.proper_prefixes() {
            let sum = child_sum(&next, &y);
            raise(&mut next, &y, sum);
        }
        (table_value(&next, &BitString::empty()) <= one).then_some(next)
    } else {
        (total_mass(&next) <= one).then_some(next)
    }
}

/// Builds a semimeasure dominating `liminf_n m_n` by increase operations.
///
/// Triples are tried with `N = 0..=nmax` outermost, then the distinct event
/// elements in lexicographic order, then `r` ascending over `grid`. The grid
/// must contain every event value. In tree mode an increase also lifts each
/// prefix of `u` to the sum of its children, and the result is closed upward.
pub fn cover_semimeasure(
    p: &SemimeasureFamilyPresentation,
    grid: &[Rational],
    nmax: Option<u64>,
) -> Result<CoverSemimeasure, CoverError> {
    check_valid(p)?;
    let nmax = resolve_horizon(p, nmax)?;
    let grid = prepare_grid(p, grid)?;
    let elements = p.elements();
    let mut working = Piecewise::sample(p);
    let mut accepted_ops = Vec::new();
    let mut values = ValueTable::new();
    for n in 0..=nmax {
        for u in &elements {
            for r in &grid {
                if working.try_update(n, |m| increased(m, u, r, p.tree_mode)) {
                    raise(&mut values, u, r.clone());
                    accepted_ops.push(IncreaseOp { r: r.clone(), n, element: u.clone() });
                }
            }
        }
    }
    if p.tree_mode {
        tree_closure(&mut values);
    }
    Ok(CoverSemimeasure { tree_mode: p.tree_mode, values, accepted_ops })
}

/// `ceil(-log2 v)` for every positive value: the complexity bound a
/// semimeasure certifies. Zero values are omitted.
pub fn semimeasure_to_complexity(cover: &CoverSemimeasure) -> BTreeMap<BitString, u64> {
    cover
        .values
        .iter()
        .filter_map(|(x, v)| v.ceil_neg_log2().map(|k| (x.clone(), k)))
        .collect()
}

/// An accepted `(x, N)` operation: the interval of `x` added to every `U_n`
/// with `n >= N`. In a strong cover `n` is the index `i` of the piece `F_i`
/// the interval belongs to.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AddIntervalOp {
    pub interval: BitString,
    pub n: u64,
}

/// Slack bookkeeping of a strong cover for the piece `F_i`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Slack {
    pub i: u64,
    /// `(epsilon' - epsilon) / 2^(i+1)`.
    pub budget: Rational,
    /// Measure of the piece's cover minus the measure of the piece.
    pub used: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct CoverOpenSet {
    /// The measure bound the cover was built for (epsilon, or epsilon').
    pub bound: Rational,
    pub set: ClopenSet,
    pub measure: Rational,
    pub accepted_ops: Vec<AddIntervalOp>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub slack_report: Option<Vec<Slack>>,
}

/// Covers the liminf of a family of clopen sets by a clopen set `W` with
/// `mu(W) <= epsilon`.
///
/// Pairs `(x, N)` are tried with `N = 0..=nmax` outermost and `x` over all
/// strings of length `<= lmax` in shortlex order.
pub fn cover_open(
    p: &OpenFamilyPresentation,
    lmax: usize,
    nmax: Option<u64>,
) -> Result<CoverOpenSet, CoverError> {
    check_valid(p)?;
    let nmax = resolve_horizon(p, nmax)?;
    let needed = p.max_interval_len();
    if lmax < needed {
        return Err(CoverError::LmaxTooSmall { lmax, needed });
    }
    if lmax > MAX_CANDIDATE_LEN {
        return Err(CoverError::LmaxTooLarge(lmax));
    }
    let mut working = Piecewise::sample(p);
    let mut accepted_ops = Vec::new();
    for n in 0..=nmax {
        for x in BitString::all_up_to(lmax) {
            let accepted = working.try_update(n, |member| {
                if member.contains_interval(&x) {
                    return Some(member.clone());
                }
                let next = member.union(&ClopenSet::interval(x.clone()));
                (next.measure() <= p.epsilon).then_some(next)
            });
            if accepted {
                accepted_ops.push(AddIntervalOp { interval: x, n });
            }
        }
    }
    let set = ClopenSet::normalize(accepted_ops.iter().map(|op| op.interval.clone()));
    debug_assert!(set.is_subset(working.tail()));
    Ok(CoverOpenSet {
        bound: p.epsilon.clone(),
        measure: set.measure(),
        set,
        accepted_ops,
        slack_report: None,
    })
}

/// Splits the liminf into the disjoint pieces
/// `F_0 = ∩_{i>=0} U_i` and `F_{i+1} = (∩_{j>=i+1} U_j) \ U_i`,
/// i.e. by the last index whose member misses the point.
///
/// Returns `F_0..=F_B` for the last breakpoint `B`; later pieces are empty.
pub fn decompose_liminf(p: &OpenFamilyPresentation) -> Result<Vec<ClopenSet>, CoverError> {
    if p.granularity.is_none() {
        return Err(CoverError::MissingGranularity);
    }
    check_valid(p)?;
    let last = p.last_breakpoint();
    let members: Vec<ClopenSet> = (0..=last).map(|n| p.member_at(n, None)).collect();
    // suffix[i] = ∩_{j >= i} U_j; members are constant from `last` on.
    let mut suffix = vec![ClopenSet::empty(); members.len()];
    suffix[members.len() - 1] = members[members.len() - 1].clone();
    for i in (0..members.len() - 1).rev() {
        suffix[i] = suffix[i + 1].intersection(&members[i]);
    }
    let mut pieces = Vec::with_capacity(members.len());
    pieces.push(suffix[0].clone());
    for i in 0..members.len() - 1 {
        pieces.push(suffix[i + 1].difference(&members[i]));
    }
    Ok(pieces)
}

/// Covers the liminf by a clopen set of measure at most `epsilon_prime`,
/// piece by piece over [`decompose_liminf`]. Each piece is clopen, so it is
/// its own cover and the per-piece slack budget stays unused.
pub fn cover_open_strong(
    p: &OpenFamilyPresentation,
    epsilon_prime: &Rational,
) -> Result<CoverOpenSet, CoverError> {
    if *epsilon_prime <= p.epsilon {
        return Err(CoverError::EpsilonPrimeNotLarger {
            epsilon: p.epsilon.clone(),
            epsilon_prime: epsilon_prime.clone(),
        });
    }
    let pieces = decompose_liminf(p)?;
    let gap = epsilon_prime - &p.epsilon;
    let mut set = ClopenSet::empty();
    let mut accepted_ops = Vec::new();
    let mut slack = Vec::with_capacity(pieces.len());
    for (i, piece) in pieces.iter().enumerate() {
        let i = i as u64;
        let piece_cover = piece.clone();
        slack.push(Slack {
            i,
            budget: gap.shr(i as usize + 1),
            used: piece_cover.measure() - piece.measure(),
        });
        accepted_ops.extend(
            piece_cover.intervals().iter().map(|x| AddIntervalOp { interval: x.clone(), n: i }),
        );
        set = set.union(&piece_cover);
    }
    Ok(CoverOpenSet {
        bound: epsilon_prime.clone(),
        measure: set.measure(),
        set,
        accepted_ops,
        slack_report: Some(slack),
    })
}
