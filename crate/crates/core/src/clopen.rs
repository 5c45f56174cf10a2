//! Clopen subsets of Cantor space as canonical finite unions of intervals.
//!
//! A string `x` denotes the interval of all infinite sequences extending `x`.
//! A [`ClopenSet`] stores a set of such strings in canonical form: sorted
//! lexicographically, pairwise prefix-incomparable, and with no sibling pair
//! `x0`, `x1` both present. Every clopen set has exactly one canonical form,
//! so structural equality is point-set equality.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::bits::BitString;
use crate::rational::Rational;

/// Default bound on interval length accepted by validation.
pub const DEFAULT_MAX_DEPTH: usize = 64;

/// Environment variable overriding [`DEFAULT_MAX_DEPTH`].
pub const MAX_DEPTH_ENV: &str = "LIMITLAB_MAX_DEPTH";

/// Input limits applied by the validators.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    pub max_depth: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits { max_depth: DEFAULT_MAX_DEPTH }
    }
}

impl Limits {
    /// Reads `LIMITLAB_MAX_DEPTH`, falling back to the default when unset.
    /// A value that is not a natural number is an error.
    pub fn from_env() -> Result<Self, String> {
        match std::env::var(MAX_DEPTH_ENV) {
            Ok(v) => v
                .trim()
                .parse()
                .map(|max_depth| Limits { max_depth })
                .map_err(|_| format!("{MAX_DEPTH_ENV}={v:?} is not a natural number")),
            Err(_) => Ok(Limits::default()),
        }
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct ClopenSet {
    intervals: Vec<BitString>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SetOp {
    Union,
    Intersection,
    Difference,
}

impl SetOp {
    fn apply(self, a: bool, b: bool) -> bool {
        match self {
            SetOp::Union => a || b,
            SetOp::Intersection => a && b,
            SetOp::Difference => a && !b,
        }
    }
}

/// A subtree of a canonical set below some node.
#[derive(Clone, Copy)]
enum Node<'a> {
    Empty,
    Full,
    Split(&'a [BitString]),
}

impl<'a> Node<'a> {
    /// Classifies a slice of canonical intervals that all extend a node of
    /// the given depth.
    fn classify(slice: &'a [BitString], depth: usize) -> Node<'a> {
        match slice {
            [] => Node::Empty,
            [x] if x.len() == depth => Node::Full,
            _ => Node::Split(slice),
        }
    }

    fn children(self, depth: usize) -> (Node<'a>, Node<'a>) {
        match self {
            Node::Empty => (Node::Empty, Node::Empty),
            Node::Full => (Node::Full, Node::Full),
            Node::Split(slice) => {
                let mid = slice.partition_point(|x| !x.bit(depth));
                (
                    Node::classify(&slice[..mid], depth + 1),
                    Node::classify(&slice[mid..], depth + 1),
                )
            }
        }
    }

    fn uniform(self) -> Option<bool> {
        match self {
            Node::Empty => Some(false),
            Node::Full => Some(true),
            Node::Split(_) => None,
        }
    }
}

fn combine(a: Node<'_>, b: Node<'_>, op: SetOp, prefix: &BitString) -> Vec<BitString> {
    if let (Some(x), Some(y)) = (a.uniform(), b.uniform()) {
        return if op.apply(x, y) { vec![prefix.clone()] } else { Vec::new() };
    }
    let depth = prefix.len();
    let (a0, a1) = a.children(depth);
    let (b0, b1) = b.children(depth);
    let left_prefix = prefix.child(false);
    let right_prefix = prefix.child(true);
    let mut left = combine(a0, b0, op, &left_prefix);
    let right = combine(a1, b1, op, &right_prefix);
    if left.len() == 1 && right.len() == 1 && left[0] == left_prefix && right[0] == right_prefix {
        return vec![prefix.clone()];
    }
    left.extend(right);
    left
}

impl ClopenSet {
    pub fn empty() -> Self {
        ClopenSet { intervals: Vec::new() }
    }

    /// The whole space.
    pub fn full() -> Self {
        ClopenSet { intervals: vec![BitString::empty()] }
    }

    /// A single interval.
    pub fn interval(x: BitString) -> Self {
        ClopenSet { intervals: vec![x] }
    }

    /// Canonical form of the union of the given intervals.
    pub fn normalize<I: IntoIterator<Item = BitString>>(intervals: I) -> Self {
        let mut sorted: Vec<BitString> = intervals.into_iter().collect();
        sorted.sort();
        sorted.dedup();

        // In lexicographic order an interval's extensions immediately follow
        // it, so absorption only needs the last kept interval.
        let mut antichain: Vec<BitString> = Vec::with_capacity(sorted.len());
        for x in sorted {
            if antichain.last().is_some_and(|p| p.is_prefix_of(&x)) {
                continue;
            }
            antichain.push(x);
        }

        let max_len = antichain.iter().map(BitString::len).max().unwrap_or(0);
        let mut by_len: Vec<BTreeSet<BitString>> = vec![BTreeSet::new(); max_len + 1];
        for x in antichain {
            by_len[x.len()].insert(x);
        }
        for len in (1..=max_len).rev() {
            let level = std::mem::take(&mut by_len[len]);
            let mut kept = BTreeSet::new();
            let mut iter = level.into_iter().peekable();
            while let Some(x) = iter.next() {
                let sibling_follows = !x.bit(len - 1)
                    && iter.peek().is_some_and(|y| y.bit(len - 1) && y.parent() == x.parent());
                if sibling_follows {
                    iter.next();
                    by_len[len - 1].insert(x.parent().expect("non-empty"));
                } else {
                    kept.insert(x);
                }
            }
            by_len[len] = kept;
        }
        let mut intervals: Vec<BitString> = by_len.into_iter().flatten().collect();
        intervals.sort();
        ClopenSet { intervals }
    }

    pub fn intervals(&self) -> &[BitString] {
        &self.intervals
    }

    pub fn into_intervals(self) -> Vec<BitString> {
        self.intervals
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    /// True iff the set is the whole space.
    pub fn is_full(&self) -> bool {
        self.intervals.len() == 1 && self.intervals[0].is_empty()
    }

    /// Length of the longest interval (0 for the empty set).
    pub fn depth(&self) -> usize {
        self.intervals.iter().map(BitString::len).max().unwrap_or(0)
    }

    /// Exact uniform measure: the sum of `2^(-|x|)` over the intervals.
    pub fn measure(&self) -> Rational {
        self.intervals.iter().map(|x| Rational::dyadic(x.len())).sum()
    }

    fn root(&self) -> Node<'_> {
        Node::classify(&self.intervals, 0)
    }

    pub fn combine(&self, other: &ClopenSet, op: SetOp) -> ClopenSet {
        ClopenSet { intervals: combine(self.root(), other.root(), op, &BitString::empty()) }
    }

    pub fn union(&self, other: &ClopenSet) -> ClopenSet {
        self.combine(other, SetOp::Union)
    }

    pub fn intersection(&self, other: &ClopenSet) -> ClopenSet {
        self.combine(other, SetOp::Intersection)
    }

    pub fn difference(&self, other: &ClopenSet) -> ClopenSet {
        self.combine(other, SetOp::Difference)
    }

    pub fn complement(&self) -> ClopenSet {
        ClopenSet::full().difference(self)
    }

    pub fn is_subset(&self, other: &ClopenSet) -> bool {
        self.difference(other).is_empty()
    }

    pub fn is_disjoint(&self, other: &ClopenSet) -> bool {
        self.intersection(other).is_empty()
    }

    /// True iff the interval of `w` lies inside the set.
    pub fn contains_interval(&self, w: &BitString) -> bool {
        // The only interval that can be a prefix of `w` is its predecessor.
        let idx = self.intervals.partition_point(|x| x <= w);
        idx > 0 && self.intervals[idx - 1].is_prefix_of(w)
    }

    /// True iff the interval of `w` meets the set.
    pub fn meets_interval(&self, w: &BitString) -> bool {
        if self.contains_interval(w) {
            return true;
        }
        let idx = self.intervals.partition_point(|x| x < w);
        self.intervals.get(idx).is_some_and(|x| w.is_prefix_of(x))
    }

    /// Strings `w` of exactly the given length whose interval lies inside the
    /// set, in lexicographic order.
    pub fn covered_strings(&self, len: usize) -> Vec<BitString> {
        let mut out = Vec::new();
        for x in self.intervals.iter().filter(|x| x.len() <= len) {
            out.extend(BitString::all_of_length(len - x.len()).map(|tail| x.concat(&tail)));
        }
        out
    }

    /// Lexicographically least string of the given length whose interval is
    /// disjoint from the set.
    pub fn leftmost_avoiding(&self, length: usize) -> Option<BitString> {
        fn search(node: Node<'_>, prefix: BitString, length: usize) -> Option<BitString> {
            match node {
                Node::Full => None,
                Node::Empty => {
                    let mut w = prefix;
                    while w.len() < length {
                        w.push(false);
                    }
                    Some(w)
                }
                Node::Split(_) if prefix.len() >= length => None,
                Node::Split(_) => {
                    let (left, right) = node.children(prefix.len());
                    search(left, prefix.child(false), length)
                        .or_else(|| search(right, prefix.child(true), length))
                }
            }
        }
        search(self.root(), BitString::empty(), length)
    }
}

impl fmt::Debug for ClopenSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(&self.intervals).finish()
    }
}

impl fmt::Display for ClopenSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, x) in self.intervals.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "\"{x}\"")?;
        }
        f.write_str("]")
    }
}

impl FromIterator<BitString> for ClopenSet {
    fn from_iter<I: IntoIterator<Item = BitString>>(iter: I) -> Self {
        ClopenSet::normalize(iter)
    }
}

impl Serialize for ClopenSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.intervals.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for ClopenSet {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        Vec::<BitString>::deserialize(deserializer).map(ClopenSet::normalize)
    }
}
