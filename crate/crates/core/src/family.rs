//! Finite staged presentations of indexed families `U_0, U_1, ...`.
//!
//! A presentation is an ordered log of events. Each event carries a stage
//! (its position in the enumeration), an [`IndexSpec`] saying which indices
//! it applies to, and a payload: an element for set families, an
//! `(element, value)` pair for semimeasure families, or an interval for
//! families of open sets. Because the log is finite every family is
//! eventually constant in `n`, so its liminf is simply the member at the
//! last breakpoint.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize, Serializer};

use crate::bits::BitString;
use crate::clopen::{ClopenSet, Limits};
use crate::rational::Rational;

/// Which indices an event applies to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", tag = "kind", content = "index")]
pub enum IndexSpec {
    /// Exactly index `n`.
    Single(u64),
    /// Every index `>= N`.
    Tail(u64),
}

impl IndexSpec {
    pub fn covers(self, n: u64) -> bool {
        match self {
            IndexSpec::Single(m) => n == m,
            IndexSpec::Tail(start) => n >= start,
        }
    }
}

/// Indices at which a family built from these specs can change: 0, every
/// `Single` index and its successor, and every `Tail` start. Sorted and
/// deduplicated.
pub fn breakpoints_of<I: IntoIterator<Item = IndexSpec>>(specs: I) -> Vec<u64> {
    let mut points = BTreeSet::from([0u64]);
    for spec in specs {
        match spec {
            IndexSpec::Single(n) => {
                points.insert(n);
                points.insert(n + 1);
            }
            IndexSpec::Tail(n) => {
                points.insert(n);
            }
        }
    }
    points.into_iter().collect()
}

/// Pointwise values of a semimeasure; absent keys are zero.
pub type ValueTable = BTreeMap<BitString, Rational>;

/// Raises every ancestor to at least the sum of its children, deepest first.
/// The result is the least tree semimeasure dominating the input.
pub fn tree_closure(table: &mut ValueTable) {
    let max_len = table.keys().map(BitString::len).max().unwrap_or(0);
    for len in (1..=max_len).rev() {
        let parents: BTreeSet<BitString> =
            table.keys().filter(|x| x.len() == len).filter_map(BitString::parent).collect();
        for p in parents {
            let sum = child_sum(table, &p);
            raise(table, &p, sum);
        }
    }
}

pub(crate) fn child_sum(table: &ValueTable, parent: &BitString) -> Rational {
    let zero = Rational::zero();
    table.get(&parent.child(false)).unwrap_or(&zero)
        + table.get(&parent.child(true)).unwrap_or(&zero)
}

/// `table[x] = max(table[x], value)`, keeping zeros out of the table.
pub(crate) fn raise(table: &mut ValueTable, x: &BitString, value: Rational) {
    if value.is_zero() || value.is_negative() {
        return;
    }
    match table.get_mut(x) {
        Some(v) if *v >= value => {}
        Some(v) => *v = value,
        None => {
            table.insert(x.clone(), value);
        }
    }
}

pub fn table_value(table: &ValueTable, x: &BitString) -> Rational {
    table.get(x).cloned().unwrap_or_default()
}

/// Upper bound `c(n)` on interval length, given as a step function: the
/// bound at `n` is the one attached to the largest listed index `<= n`.
/// Indices before the first entry are unconstrained.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Granularity(pub Vec<(u64, u64)>);

impl Granularity {
    pub fn bound_at(&self, n: u64) -> Option<u64> {
        self.0.iter().filter(|(m, _)| *m <= n).max_by_key(|(m, _)| *m).map(|&(_, c)| c)
    }

    pub fn indices(&self) -> impl Iterator<Item = u64> + '_ {
        self.0.iter().map(|&(n, _)| n)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SetEvent {
    pub stage: u64,
    pub spec: IndexSpec,
    pub element: BitString,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SemimeasureEvent {
    pub stage: u64,
    pub spec: IndexSpec,
    pub element: BitString,
    pub value: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OpenEvent {
    pub stage: u64,
    pub spec: IndexSpec,
    pub interval: BitString,
}

/// Finite sets `U_n` with `|U_n| < 2^k`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SetFamilyPresentation {
    pub k: u32,
    pub universe: Vec<BitString>,
    pub events: Vec<SetEvent>,
}

/// Semimeasures `m_n`; `m_n(x)` is the largest value among events for `x`
/// covering `n`. In tree mode `m_n` is additionally closed upward with
/// [`tree_closure`].
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SemimeasureFamilyPresentation {
    pub tree_mode: bool,
    pub events: Vec<SemimeasureEvent>,
}

/// Clopen sets `U_n` of measure at most `epsilon`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OpenFamilyPresentation {
    pub epsilon: Rational,
    pub events: Vec<OpenEvent>,
    pub granularity: Option<Granularity>,
}

/// `2^k` exceeds `size`.
pub(crate) fn below_capacity(size: usize, k: u32) -> bool {
    k >= 64 || (size as u64) < (1u64 << k)
}

/// One violated invariant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    StageOrder { position: usize, stage: u64, previous: u64 },
    OutOfUniverse { position: usize, element: BitString },
    DuplicateUniverseElement { element: BitString },
    TooDeep { position: usize, length: usize, max_depth: usize },
    ValueOutOfRange { position: usize, value: Rational },
    EpsilonOutOfRange { epsilon: Rational },
    Capacity { n: u64, size: usize, k: u32 },
    Mass { n: u64, total: Rational },
    TreeRoot { n: u64, root: Rational },
    Measure { n: u64, measure: Rational, epsilon: Rational },
    Granularity { n: u64, interval: BitString, bound: u64 },
}

impl Violation {
    /// Short name of the violated invariant.
    pub fn invariant(&self) -> &'static str {
        match self {
            Violation::StageOrder { .. } => "stage-order",
            Violation::OutOfUniverse { .. } => "universe",
            Violation::DuplicateUniverseElement { .. } => "universe-duplicate",
            Violation::TooDeep { .. } => "depth",
            Violation::ValueOutOfRange { .. } => "value-range",
            Violation::EpsilonOutOfRange { .. } => "epsilon-range",
            Violation::Capacity { .. } => "capacity",
            Violation::Mass { .. } => "semimeasure",
            Violation::TreeRoot { .. } => "tree-semimeasure",
            Violation::Measure { .. } => "measure",
            Violation::Granularity { .. } => "granularity",
        }
    }

    /// The family index the violation was found at, if any.
    pub fn index(&self) -> Option<u64> {
        match self {
            Violation::Capacity { n, .. }
            | Violation::Mass { n, .. }
            | Violation::TreeRoot { n, .. }
            | Violation::Measure { n, .. }
            | Violation::Granularity { n, .. } => Some(*n),
            _ => None,
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::StageOrder { position, stage, previous } => {
                write!(f, "stage-order: event {position} has stage {stage} < {previous}")
            }
            Violation::OutOfUniverse { position, element } => {
                write!(f, "universe: event {position} element \"{element}\" is not in the universe")
            }
            Violation::DuplicateUniverseElement { element } => {
                write!(f, "universe-duplicate: \"{element}\" listed twice")
            }
            Violation::TooDeep { position, length, max_depth } => write!(
                f,
                "depth: event {position} has length {length} > maximum depth {max_depth}"
            ),
            Violation::ValueOutOfRange { position, value } => {
                write!(f, "value-range: event {position} value {value} is outside [0,1]")
            }
            Violation::EpsilonOutOfRange { epsilon } => {
                write!(f, "epsilon-range: epsilon {epsilon} is outside [0,1]")
            }
            Violation::Capacity { n, size, k } => {
                write!(f, "capacity: |U_n| = {size} >= 2^k = 2^{k} at n={n}")
            }
            Violation::Mass { n, total } => {
                write!(f, "semimeasure: sum of m_n = {total} > 1 at n={n}")
            }
            Violation::TreeRoot { n, root } => {
                write!(f, "tree-semimeasure: m_n(root) = {root} > 1 at n={n}")
            }
            Violation::Measure { n, measure, epsilon } => {
                write!(f, "measure: mu(U_n) = {measure} > epsilon = {epsilon} at n={n}")
            }
            Violation::Granularity { n, interval, bound } => write!(
                f,
                "granularity: interval \"{interval}\" longer than c(n) = {bound} at n={n}"
            ),
        }
    }
}

impl Serialize for Violation {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut s = serializer.serialize_struct("Violation", 3)?;
        s.serialize_field("invariant", self.invariant())?;
        s.serialize_field("n", &self.index())?;
        s.serialize_field("message", &self.to_string())?;
        s.end()
    }
}

/// Every violated invariant of a presentation. Empty means valid.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl Serialize for ValidationReport {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut s = serializer.serialize_struct("ValidationReport", 2)?;
        s.serialize_field("valid", &self.is_valid())?;
        s.serialize_field("violations", &self.violations)?;
        s.end()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_valid() {
            return f.write_str("valid");
        }
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

/// Common evaluation interface of the three presentation kinds.
pub trait StagedFamily {
    type Member: Clone + PartialEq + fmt::Debug;

    fn specs(&self) -> Vec<IndexSpec>;

    /// The member at index `n`, using only events with stage `<= stage`
    /// when a stage is given.
    fn member_at(&self, n: u64, stage: Option<u64>) -> Self::Member;

    fn validate(&self, limits: &Limits) -> ValidationReport;

    fn breakpoints(&self) -> Vec<u64> {
        breakpoints_of(self.specs())
    }

    fn last_breakpoint(&self) -> u64 {
        *self.breakpoints().last().expect("0 is always a breakpoint")
    }

    /// The exact liminf: the member at the last breakpoint, after which the
    /// family is constant.
    fn liminf(&self) -> Self::Member {
        self.member_at(self.last_breakpoint(), None)
    }
}

fn visible(stage: u64, limit: Option<u64>) -> bool {
    limit.is_none_or(|s| stage <= s)
}

fn check_stage_order<I: Iterator<Item = u64>>(stages: I, report: &mut ValidationReport) {
    let mut previous = 0;
    for (position, stage) in stages.enumerate() {
        if stage < previous {
            report.violations.push(Violation::StageOrder { position, stage, previous });
        }
        previous = previous.max(stage);
    }
}

fn check_depth<'a, I: Iterator<Item = &'a BitString>>(
    strings: I,
    limits: &Limits,
    report: &mut ValidationReport,
) {
    for (position, x) in strings.enumerate() {
        if x.len() > limits.max_depth {
            report.violations.push(Violation::TooDeep {
                position,
                length: x.len(),
                max_depth: limits.max_depth,
            });
        }
    }
}

impl StagedFamily for SetFamilyPresentation {
    type Member = BTreeSet<BitString>;

    fn specs(&self) -> Vec<IndexSpec> {
        self.events.iter().map(|e| e.spec).collect()
    }

    fn member_at(&self, n: u64, stage: Option<u64>) -> Self::Member {
        self.events
            .iter()
            .filter(|e| visible(e.stage, stage) && e.spec.covers(n))
            .map(|e| e.element.clone())
            .collect()
    }

    fn validate(&self, limits: &Limits) -> ValidationReport {
        let mut report = ValidationReport::default();
        check_stage_order(self.events.iter().map(|e| e.stage), &mut report);
        check_depth(self.events.iter().map(|e| &e.element), limits, &mut report);
        let mut seen = BTreeSet::new();
        for x in &self.universe {
            if !seen.insert(x) {
                report.violations.push(Violation::DuplicateUniverseElement { element: x.clone() });
            }
        }
        for (position, e) in self.events.iter().enumerate() {
            if !seen.contains(&e.element) {
                report
                    .violations
                    .push(Violation::OutOfUniverse { position, element: e.element.clone() });
            }
        }
        for n in self.breakpoints() {
            let size = self.member_at(n, None).len();
            if !below_capacity(size, self.k) {
                report.violations.push(Violation::Capacity { n, size, k: self.k });
            }
        }
        report
    }
}

impl SemimeasureFamilyPresentation {
    /// Distinct event elements in lexicographic order.
    pub fn elements(&self) -> Vec<BitString> {
        let set: BTreeSet<_> = self.events.iter().map(|e| e.element.clone()).collect();
        set.into_iter().collect()
    }
}

/// Total mass of a flat semimeasure.
pub fn total_mass(table: &ValueTable) -> Rational {
    table.values().sum()
}

impl StagedFamily for SemimeasureFamilyPresentation {
    type Member = ValueTable;

    fn specs(&self) -> Vec<IndexSpec> {
        self.events.iter().map(|e| e.spec).collect()
    }

    fn member_at(&self, n: u64, stage: Option<u64>) -> Self::Member {
        let mut table = ValueTable::new();
        for e in self.events.iter().filter(|e| visible(e.stage, stage) && e.spec.covers(n)) {
            raise(&mut table, &e.element, e.value.clone());
        }
        if self.tree_mode {
            tree_closure(&mut table);
        }
        table
    }

    fn validate(&self, limits: &Limits) -> ValidationReport {
        let mut report = ValidationReport::default();
        check_stage_order(self.events.iter().map(|e| e.stage), &mut report);
        check_depth(self.events.iter().map(|e| &e.element), limits, &mut report);
        let one = Rational::one();
        for (position, e) in self.events.iter().enumerate() {
            if e.value.is_negative() || e.value > one {
                report
                    .violations
                    .push(Violation::ValueOutOfRange { position, value: e.value.clone() });
            }
        }
        for n in self.breakpoints() {
            let table = self.member_at(n, None);
            if self.tree_mode {
                let root = table_value(&table, &BitString::empty());
                if root > one {
                    report.violations.push(Violation::TreeRoot { n, root });
                }
            } else {
                let total = total_mass(&table);
                if total > one {
                    report.violations.push(Violation::Mass { n, total });
                }
            }
        }
        report
    }
}

impl OpenFamilyPresentation {
    /// Indices at which the per-index invariants need checking: the
    /// breakpoints plus every granularity step.
    pub fn check_indices(&self) -> Vec<u64> {
        let mut idx: BTreeSet<u64> = self.breakpoints().into_iter().collect();
        if let Some(g) = &self.granularity {
            idx.extend(g.indices());
        }
        idx.into_iter().collect()
    }

    /// Length of the longest event interval.
    pub fn max_interval_len(&self) -> usize {
        self.events.iter().map(|e| e.interval.len()).max().unwrap_or(0)
    }
}

impl StagedFamily for OpenFamilyPresentation {
    type Member = ClopenSet;

    fn specs(&self) -> Vec<IndexSpec> {
        self.events.iter().map(|e| e.spec).collect()
    }

    fn member_at(&self, n: u64, stage: Option<u64>) -> Self::Member {
        ClopenSet::normalize(
            self.events
                .iter()
                .filter(|e| visible(e.stage, stage) && e.spec.covers(n))
                .map(|e| e.interval.clone()),
        )
    }

    fn validate(&self, limits: &Limits) -> ValidationReport {
        let mut report = ValidationReport::default();
        if self.epsilon.is_negative() || self.epsilon > Rational::one() {
            report.violations.push(Violation::EpsilonOutOfRange { epsilon: self.epsilon.clone() });
        }
        check_stage_order(self.events.iter().map(|e| e.stage), &mut report);
        check_depth(self.events.iter().map(|e| &e.interval), limits, &mut report);
        if report.violations.iter().any(|v| matches!(v, Violation::TooDeep { .. })) {
            return report;
        }
        for n in self.check_indices() {
            let measure = self.member_at(n, None).measure();
            if measure > self.epsilon {
                report
                    .violations
                    .push(Violation::Measure { n, measure, epsilon: self.epsilon.clone() });
            }
            if let Some(bound) = self.granularity.as_ref().and_then(|g| g.bound_at(n)) {
                for e in self.events.iter().filter(|e| e.spec.covers(n)) {
                    if e.interval.len() as u64 > bound {
                        report.violations.push(Violation::Granularity {
                            n,
                            interval: e.interval.clone(),
                            bound,
                        });
                    }
                }
            }
        }
        report
    }
}

/// A presentation of any of the three kinds.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Presentation {
    Set(SetFamilyPresentation),
    Semimeasure(SemimeasureFamilyPresentation),
    Open(OpenFamilyPresentation),
}

/// A family member of any of the three kinds.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum Member {
    Set(BTreeSet<BitString>),
    Values(ValueTable),
    Open(ClopenSet),
}

impl Presentation {
    pub fn validate(&self, limits: &Limits) -> ValidationReport {
        match self {
            Presentation::Set(p) => p.validate(limits),
            Presentation::Semimeasure(p) => p.validate(limits),
            Presentation::Open(p) => p.validate(limits),
        }
    }

    pub fn breakpoints(&self) -> Vec<u64> {
        match self {
            Presentation::Set(p) => p.breakpoints(),
            Presentation::Semimeasure(p) => p.breakpoints(),
            Presentation::Open(p) => p.breakpoints(),
        }
    }

    pub fn member_at(&self, n: u64, stage: Option<u64>) -> Member {
        match self {
            Presentation::Set(p) => Member::Set(p.member_at(n, stage)),
            Presentation::Semimeasure(p) => Member::Values(p.member_at(n, stage)),
            Presentation::Open(p) => Member::Open(p.member_at(n, stage)),
        }
    }

    pub fn liminf(&self) -> Member {
        match self {
            Presentation::Set(p) => Member::Set(p.liminf()),
            Presentation::Semimeasure(p) => Member::Values(p.liminf()),
            Presentation::Open(p) => Member::Open(p.liminf()),
        }
    }
}
