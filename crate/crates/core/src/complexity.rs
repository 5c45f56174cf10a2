//! Exact toy complexity and randomness deficiency.
//!
//! The reference description method `M0` has two modes:
//!
//! * `00q` outputs `q` (literal mode);
//! * `01q` with `q` non-empty outputs the string of length `n` (the
//!   condition) whose `i`-th bit is `q[i mod |q|]` (periodic mode).
//!
//! Every other program has no output. `M0` is total and every program has
//! at most one output, so fewer than `2^m` strings have complexity below
//! `m` under any condition.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bits::BitString;
use crate::clopen::Limits;
use crate::family::{Granularity, IndexSpec, OpenEvent, OpenFamilyPresentation, StagedFamily, ValidationReport};
use crate::rational::Rational;

/// Longest strings the exhaustive helpers will enumerate.
pub const MAX_ENUMERATION_LEN: usize = 20;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum ComplexityError {
    #[error("{} table entries missing, first: \"{}\" | {}", .0.len(), .0[0].0, .0[0].1)]
    MissingEntries(Vec<(BitString, u64)>),
    #[error("counting bound violated: {count} strings with complexity < {m} under condition {condition} (must be < 2^{m})")]
    CountingBound { condition: u64, m: u64, count: usize },
    #[error("horizon {horizon} is shorter than the prefix length {prefix_len}")]
    HorizonTooShort { horizon: usize, prefix_len: usize },
    #[error("length {0} exceeds the enumeration limit {MAX_ENUMERATION_LEN}")]
    TooLong(usize),
    #[error("empty index range {0}..={1}")]
    EmptyRange(u64, u64),
    #[error("invalid presentation: {0}")]
    InvalidPresentation(ValidationReport),
    #[error("epsilon {epsilon} exceeds 2^-c = {bound}")]
    EpsilonTooLarge { epsilon: Rational, bound: Rational },
    #[error("mu(U_n) = {measure} exceeds 2^-c = {bound} at n={n}")]
    MeasureBound { n: u64, measure: Rational, bound: Rational },
    #[error("granularity bound at n={n} is {}, need c(n) <= n", match .bound { Some(b) => b.to_string(), None => "undefined".into() })]
    Granularity { n: u64, bound: Option<u64> },
    #[error("table line {line}: {message}")]
    Parse { line: usize, message: String },
}

/// Runs the reference method on `program` with the given condition.
pub fn run_m0(program: &BitString, condition: u64) -> Option<BitString> {
    if program.len() < 2 {
        return None;
    }
    let q = program.suffix_from(2);
    match (program.bit(0), program.bit(1)) {
        (false, false) => Some(q),
        (false, true) if !q.is_empty() => {
            let bits = (0..condition as usize).map(|i| q.bit(i % q.len())).collect();
            Some(BitString::from_bits(bits))
        }
        _ => None,
    }
}

/// Smallest `p >= 1` such that `x[i] = x[i - p]` for all `i >= p`.
/// Computed from the longest proper border.
pub fn smallest_period(x: &BitString) -> usize {
    let bits = x.bits();
    if bits.is_empty() {
        return 0;
    }
    let mut failure = vec![0usize; bits.len()];
    let mut k = 0;
    for i in 1..bits.len() {
        while k > 0 && bits[i] != bits[k] {
            k = failure[k - 1];
        }
        if bits[i] == bits[k] {
            k += 1;
        }
        failure[i] = k;
    }
    bits.len() - failure[bits.len() - 1]
}

/// `C(x | condition)` under the reference method.
///
/// The literal program `00x` always works. The periodic program `01q`
/// reproduces `x` only when `|x|` equals the condition, and then the
/// shortest usable `q` is the smallest period of `x`.
pub fn exact_complexity(x: &BitString, condition: u64) -> u64 {
    let literal = x.len() as u64 + 2;
    if !x.is_empty() && condition == x.len() as u64 {
        literal.min(2 + smallest_period(x) as u64)
    } else {
        literal
    }
}

/// Which condition a one-argument lookup `t(x)` uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ConditionMode {
    /// `t(x) = C(x | |x|)`.
    Conditional,
    /// `t(x) = C(x)`, stored under condition 0.
    Plain,
}

impl fmt::Display for ConditionMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ConditionMode::Conditional => "conditional",
            ConditionMode::Plain => "plain",
        })
    }
}

impl FromStr for ConditionMode {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "conditional" => Ok(ConditionMode::Conditional),
            "plain" => Ok(ConditionMode::Plain),
            other => Err(format!("unknown condition mode {other:?}")),
        }
    }
}

/// A finite map `(x, condition) -> complexity`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComplexityTable {
    pub mode: ConditionMode,
    pub entries: BTreeMap<(BitString, u64), u64>,
}

impl ComplexityTable {
    pub fn new(mode: ConditionMode) -> Self {
        ComplexityTable { mode, entries: BTreeMap::new() }
    }

    /// The reference method's table on all strings of length `<= max_len`.
    /// Conditional tables cover conditions `0..=max_len`.
    pub fn from_reference(max_len: usize, mode: ConditionMode) -> Result<Self, ComplexityError> {
        if max_len > MAX_ENUMERATION_LEN {
            return Err(ComplexityError::TooLong(max_len));
        }
        let conditions = match mode {
            ConditionMode::Conditional => 0..=max_len as u64,
            ConditionMode::Plain => 0..=0,
        };
        let mut table = ComplexityTable::new(mode);
        for n in conditions {
            for x in BitString::all_up_to(max_len) {
                let c = exact_complexity(&x, n);
                table.entries.insert((x, n), c);
            }
        }
        Ok(table)
    }

    pub fn insert(&mut self, x: BitString, condition: u64, value: u64) {
        self.entries.insert((x, condition), value);
    }

    pub fn get(&self, x: &BitString, condition: u64) -> Option<u64> {
        self.entries.get(&(x.clone(), condition)).copied()
    }

    fn condition_for(&self, x: &BitString) -> u64 {
        match self.mode {
            ConditionMode::Conditional => x.len() as u64,
            ConditionMode::Plain => 0,
        }
    }

    /// One-argument lookup `t(x)`.
    pub fn value(&self, x: &BitString) -> Option<u64> {
        self.get(x, self.condition_for(x))
    }

    fn require<'a, I: IntoIterator<Item = &'a BitString>>(&self, xs: I) -> Result<Vec<u64>, ComplexityError> {
        let mut values = Vec::new();
        let mut missing = Vec::new();
        for x in xs {
            match self.value(x) {
                Some(v) => values.push(v),
                None => missing.push((x.clone(), self.condition_for(x))),
            }
        }
        if missing.is_empty() {
            Ok(values)
        } else {
            Err(ComplexityError::MissingEntries(missing))
        }
    }

    /// Checks `#{u : t(u|n) < m} < 2^m` for every condition `n` and every
    /// `m`. The count only changes at `m = v + 1` for stored values `v`.
    pub fn check_counting_bound(&self) -> Result<(), ComplexityError> {
        let mut by_condition: BTreeMap<u64, Vec<u64>> = BTreeMap::new();
        for ((_, n), v) in &self.entries {
            by_condition.entry(*n).or_default().push(*v);
        }
        for (condition, mut values) in by_condition {
            values.sort_unstable();
            for &v in &values {
                let m = v + 1;
                let count = values.partition_point(|&w| w < m);
                if m < 64 && count as u64 >= (1u64 << m) {
                    return Err(ComplexityError::CountingBound { condition, m, count });
                }
            }
        }
        Ok(())
    }

    /// Text form: a `# mode: <mode>` header, then `bits condition value`
    /// lines with `-` for the empty string.
    pub fn to_text(&self) -> String {
        let mut out = format!("# mode: {}\n", self.mode);
        for ((x, n), v) in &self.entries {
            let bits = if x.is_empty() { "-".to_string() } else { x.to_string() };
            out.push_str(&format!("{bits} {n} {v}\n"));
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self, ComplexityError> {
        let mut table = ComplexityTable::new(ConditionMode::Conditional);
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            let err = |message: String| ComplexityError::Parse { line: i + 1, message };
            if line.is_empty() {
                continue;
            }
            if let Some(comment) = line.strip_prefix('#') {
                if let Some(mode) = comment.trim().strip_prefix("mode:") {
                    table.mode = mode.trim().parse().map_err(err)?;
                }
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            let [bits, condition, value] = fields[..] else {
                return Err(err(format!("expected 3 fields, found {}", fields.len())));
            };
            let x = if bits == "-" {
                BitString::empty()
            } else {
                bits.parse().map_err(|e| err(format!("{e}")))?
            };
            let condition = condition.parse().map_err(|_| err(format!("bad condition {condition:?}")))?;
            let value = value.parse().map_err(|_| err(format!("bad value {value:?}")))?;
            table.insert(x, condition, value);
        }
        Ok(table)
    }
}

/// `d(x) = |x| - t(x)` and its extension infimum for one prefix.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct DeficiencyEntry {
    pub x: BitString,
    pub d: i64,
    pub dbar: i64,
    pub dbar_exceeds_c: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct DeficiencyReport {
    pub per_prefix: Vec<DeficiencyEntry>,
    /// Extensions are only considered up to this length.
    pub horizon: usize,
    pub c: u64,
    pub truncated_at_horizon: bool,
}

fn deficiency(t: &ComplexityTable, y: &BitString) -> i64 {
    y.len() as i64 - t.value(y).expect("checked by caller") as i64
}

/// Minimum of `d` over `y` and all its extensions up to `horizon`.
fn subtree_min(t: &ComplexityTable, y: &BitString, horizon: usize) -> i64 {
    let here = deficiency(t, y);
    if y.len() >= horizon {
        return here;
    }
    here.min(subtree_min(t, &y.child(false), horizon))
        .min(subtree_min(t, &y.child(true), horizon))
}

/// Deficiencies `d` and `dbar` for every prefix of `omega_prefix`, with the
/// infimum in `dbar` taken over extensions of length `<= horizon`.
pub fn deficiency_report(
    t: &ComplexityTable,
    omega_prefix: &BitString,
    horizon: usize,
    c: u64,
) -> Result<DeficiencyReport, ComplexityError> {
    if horizon < omega_prefix.len() {
        return Err(ComplexityError::HorizonTooShort { horizon, prefix_len: omega_prefix.len() });
    }
    if horizon > MAX_ENUMERATION_LEN {
        return Err(ComplexityError::TooLong(horizon));
    }
    t.check_counting_bound()?;
    let all: Vec<BitString> = BitString::all_up_to(horizon).collect();
    t.require(&all)?;

    // Walk up from the full prefix: dbar(x) = min(d(x), dbar(next prefix),
    // subtree minimum of the branch omega does not take).
    let len = omega_prefix.len();
    let mut dbar = vec![0i64; len + 1];
    dbar[len] = subtree_min(t, omega_prefix, horizon);
    for i in (0..len).rev() {
        let x = omega_prefix.prefix(i);
        let off_path = x.child(!omega_prefix.bit(i));
        dbar[i] = deficiency(t, &x).min(dbar[i + 1]).min(subtree_min(t, &off_path, horizon));
    }
    let per_prefix = (0..=len)
        .map(|i| {
            let x = omega_prefix.prefix(i);
            DeficiencyEntry {
                d: deficiency(t, &x),
                dbar: dbar[i],
                dbar_exceeds_c: dbar[i] > c as i64,
                x,
            }
        })
        .collect();
    Ok(DeficiencyReport { per_prefix, horizon, c, truncated_at_horizon: true })
}

/// The family `U_n` generated by `D_n = {u : |u| = n, t(u) < n - c}` for
/// `n` in `nmin..=nmax`, with `D_nmax` repeated for every later index.
/// Measures stay below `2^-c` by the counting bound.
pub fn deficiency_family(
    t: &ComplexityTable,
    c: u64,
    (nmin, nmax): (u64, u64),
) -> Result<OpenFamilyPresentation, ComplexityError> {
    if nmin > nmax {
        return Err(ComplexityError::EmptyRange(nmin, nmax));
    }
    if nmax as usize > MAX_ENUMERATION_LEN {
        return Err(ComplexityError::TooLong(nmax as usize));
    }
    t.check_counting_bound()?;
    let mut events = Vec::new();
    for n in nmin..=nmax {
        let strings: Vec<BitString> = BitString::all_of_length(n as usize).collect();
        let values = t.require(&strings)?;
        let spec = if n < nmax { IndexSpec::Single(n) } else { IndexSpec::Tail(n) };
        for (u, v) in strings.into_iter().zip(values) {
            if (v as i64) < n as i64 - c as i64 {
                events.push(OpenEvent { stage: n, spec, interval: u });
            }
        }
    }
    let family = OpenFamilyPresentation {
        epsilon: Rational::dyadic(c as usize),
        events,
        granularity: Some(Granularity((nmin..=nmax).map(|n| (n, n)).collect())),
    };
    debug_assert!(family.validate(&Limits::default()).is_valid());
    Ok(family)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct RandomnessReport {
    pub c: u64,
    pub prefix_length: usize,
    /// Lengths `n` with `t(omega[..n]) >= n - c`.
    pub qualifying: Vec<u64>,
    pub count: usize,
    pub largest: Option<u64>,
}

/// Lists the prefix lengths at which the complexity stays within `c` of the
/// length.
pub fn randomness_report(
    t: &ComplexityTable,
    omega_prefix: &BitString,
    c: u64,
) -> Result<RandomnessReport, ComplexityError> {
    t.check_counting_bound()?;
    let prefixes: Vec<BitString> = (0..=omega_prefix.len()).map(|n| omega_prefix.prefix(n)).collect();
    let values = t.require(&prefixes)?;
    let qualifying: Vec<u64> = values
        .iter()
        .enumerate()
        .filter(|&(n, &v)| v as i64 >= n as i64 - c as i64)
        .map(|(n, _)| n as u64)
        .collect();
    Ok(RandomnessReport {
        c,
        prefix_length: omega_prefix.len(),
        count: qualifying.len(),
        largest: qualifying.last().copied(),
        qualifying,
    })
}

/// Position of a covered string among the covered strings of its length.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct OrdinalCode {
    pub n: u64,
    pub ordinal: u64,
    pub code_length: u64,
}

/// For every breakpoint `n`, numbers the length-`n` strings covered by
/// `U_n` in lexicographic order. Each string is then described by the
/// binary ordinal, of length `ceil(log2(count))`.
pub fn cover_to_complexity_bounds(
    p: &OpenFamilyPresentation,
    c: u64,
) -> Result<BTreeMap<BitString, OrdinalCode>, ComplexityError> {
    let report = p.validate(&Limits { max_depth: usize::MAX });
    if !report.is_valid() {
        return Err(ComplexityError::InvalidPresentation(report));
    }
    let bound = Rational::dyadic(c as usize);
    if p.epsilon > bound {
        return Err(ComplexityError::EpsilonTooLarge { epsilon: p.epsilon.clone(), bound });
    }
    let mut codes = BTreeMap::new();
    for n in p.breakpoints() {
        let member = p.member_at(n, None);
        if member.is_empty() {
            continue;
        }
        let granularity = p.granularity.as_ref().and_then(|g| g.bound_at(n));
        if granularity.is_none_or(|cn| cn > n) {
            return Err(ComplexityError::Granularity { n, bound: granularity });
        }
        let measure = member.measure();
        if measure > bound {
            return Err(ComplexityError::MeasureBound { n, measure, bound });
        }
        if n as usize > MAX_ENUMERATION_LEN {
            return Err(ComplexityError::TooLong(n as usize));
        }
        let covered = member.covered_strings(n as usize);
        let count = covered.len() as u64;
        let code_length = ceil_log2(count);
        for (ordinal, x) in covered.into_iter().enumerate() {
            codes.insert(x, OrdinalCode { n, ordinal: ordinal as u64, code_length });
        }
    }
    Ok(codes)
}

/// `ceil(log2(count))` for `count >= 1`.
fn ceil_log2(count: u64) -> u64 {
    if count <= 1 {
        0
    } else {
        64 - (count - 1).leading_zeros() as u64
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bits::bs;
    use crate::family::StagedFamily;

    #[test]
    fn run_m0_modes() {
        assert_eq!(run_m0(&bs("00101"), 7), Some(bs("101")));
        assert_eq!(run_m0(&bs("010"), 4), Some(bs("0000")));
        assert_eq!(run_m0(&bs("0110"), 5), Some(bs("10101")));
        assert_eq!(run_m0(&bs("011011"), 2), Some(bs("10")));
        assert_eq!(run_m0(&bs("11"), 0), None);
        assert_eq!(run_m0(&bs("10111"), 3), None);
        assert_eq!(run_m0(&bs("01"), 3), None);
        assert_eq!(run_m0(&bs("0"), 3), None);
        assert_eq!(run_m0(&bs("00"), 3), Some(bs("")));
    }

    #[test]
    fn periods() {
        assert_eq!(smallest_period(&bs("0000")), 1);
        assert_eq!(smallest_period(&bs("0101")), 2);
        assert_eq!(smallest_period(&bs("01001")), 3);
        assert_eq!(smallest_period(&bs("011")), 3);
        assert_eq!(smallest_period(&bs("")), 0);
    }

    #[test]
    fn exact_complexity_examples() {
        assert_eq!(exact_complexity(&bs("0000"), 4), 3);
        assert_eq!(exact_complexity(&bs(""), 0), 2);
        assert_eq!(exact_complexity(&bs("01"), 0), 4);
        assert_eq!(exact_complexity(&bs("0101"), 4), 4);
        assert_eq!(exact_complexity(&bs("0101"), 3), 6);
    }

    #[test]
    fn reference_tables_satisfy_counting_bound() {
        for mode in [ConditionMode::Conditional, ConditionMode::Plain] {
            ComplexityTable::from_reference(6, mode).unwrap().check_counting_bound().unwrap();
        }
    }

    #[test]
    fn counting_bound_rejects_zero_table() {
        let mut t = ComplexityTable::new(ConditionMode::Plain);
        t.insert(bs(""), 0, 0);
        t.insert(bs("0"), 0, 0);
        assert_eq!(
            t.check_counting_bound(),
            Err(ComplexityError::CountingBound { condition: 0, m: 1, count: 2 })
        );
        assert!(randomness_report(&t, &bs("0"), 0).is_err());
    }

    #[test]
    fn text_round_trip() {
        let t = ComplexityTable::from_reference(2, ConditionMode::Conditional).unwrap();
        let text = t.to_text();
        assert!(text.starts_with("# mode: conditional\n- 0 2\n"));
        assert_eq!(ComplexityTable::from_text(&text).unwrap(), t);
        assert!(matches!(
            ComplexityTable::from_text("01 2"),
            Err(ComplexityError::Parse { line: 1, .. })
        ));
    }

    fn identity_table(max_len: usize) -> ComplexityTable {
        let mut t = ComplexityTable::new(ConditionMode::Conditional);
        for x in BitString::all_up_to(max_len) {
            let n = x.len() as u64;
            t.insert(x, n, n);
        }
        t
    }

    #[test]
    fn deficiency_report_examples() {
        let t = identity_table(4);
        let report = deficiency_report(&t, &bs("01"), 4, 0).unwrap();
        assert!(report.per_prefix.iter().all(|e| e.d == 0 && e.dbar == 0));

        let m0 = ComplexityTable::from_reference(4, ConditionMode::Conditional).unwrap();
        let report = deficiency_report(&m0, &bs("0000"), 4, 0).unwrap();
        assert_eq!(report.per_prefix[4].d, 1);
        for w in report.per_prefix.windows(2) {
            assert!(w[0].dbar <= w[1].dbar);
        }
        assert!(matches!(
            deficiency_report(&m0, &bs("00000"), 4, 0),
            Err(ComplexityError::HorizonTooShort { .. })
        ));
        assert!(matches!(
            deficiency_report(&m0, &bs("0"), 5, 0),
            Err(ComplexityError::MissingEntries(_))
        ));
    }

    #[test]
    fn dbar_matches_direct_infimum() {
        let m0 = ComplexityTable::from_reference(6, ConditionMode::Conditional).unwrap();
        for omega in BitString::all_of_length(4) {
            let report = deficiency_report(&m0, &omega, 6, 1).unwrap();
            for e in &report.per_prefix {
                let direct = BitString::all_up_to(6)
                    .filter(|y| e.x.is_prefix_of(y))
                    .map(|y| y.len() as i64 - m0.value(&y).unwrap() as i64)
                    .min()
                    .unwrap();
                assert_eq!(e.dbar, direct, "x = {}", e.x);
            }
        }
    }

    #[test]
    fn deficiency_family_examples() {
        let empty = deficiency_family(&identity_table(4), 0, (1, 4)).unwrap();
        assert!(empty.events.is_empty());

        let mut t = identity_table(3);
        t.insert(bs("000"), 3, 1);
        let fam = deficiency_family(&t, 1, (3, 3)).unwrap();
        assert_eq!(fam.epsilon, Rational::new(1, 2));
        assert_eq!(fam.member_at(3, None).intervals(), &[bs("000")]);
        assert_eq!(fam.member_at(3, None).measure(), Rational::new(1, 8));
        assert!(fam.validate(&Limits::default()).is_valid());

        let m0 = ComplexityTable::from_reference(6, ConditionMode::Conditional).unwrap();
        for c in 0..3 {
            let fam = deficiency_family(&m0, c, (2, 6)).unwrap();
            assert!(fam.validate(&Limits::default()).is_valid());
            for n in fam.breakpoints() {
                assert!(fam.member_at(n, None).measure() <= Rational::dyadic(c as usize));
            }
        }
    }

    #[test]
    fn randomness_report_examples() {
        let t = identity_table(4);
        let report = randomness_report(&t, &bs("0110"), 0).unwrap();
        assert_eq!(report.qualifying, vec![0, 1, 2, 3, 4]);

        let m0 = ComplexityTable::from_reference(4, ConditionMode::Conditional).unwrap();
        let report = randomness_report(&m0, &bs("0000"), 0).unwrap();
        assert!(report.qualifying.contains(&0));
        assert!(!report.qualifying.contains(&4));
        assert_eq!(report.largest, Some(3));
    }

    fn ordinal_family(eps: Rational, events: &[(IndexSpec, &str)], g: Vec<(u64, u64)>) -> OpenFamilyPresentation {
        OpenFamilyPresentation {
            epsilon: eps,
            events: events
                .iter()
                .map(|(spec, x)| OpenEvent { stage: 0, spec: *spec, interval: bs(x) })
                .collect(),
            granularity: Some(Granularity(g)),
        }
    }

    #[test]
    fn ordinal_codes() {
        let p = ordinal_family(Rational::new(1, 2), &[(IndexSpec::Single(3), "000"), (IndexSpec::Single(3), "001")], vec![(0, 0), (1, 1), (2, 2), (3, 3), (4, 4)]);
        let codes = cover_to_complexity_bounds(&p, 1).unwrap();
        assert_eq!(codes.len(), 2);
        assert_eq!(codes[&bs("000")], OrdinalCode { n: 3, ordinal: 0, code_length: 1 });
        assert_eq!(codes[&bs("001")], OrdinalCode { n: 3, ordinal: 1, code_length: 1 });

        let none = ordinal_family(Rational::new(1, 2), &[], vec![(0, 0)]);
        assert!(cover_to_complexity_bounds(&none, 1).unwrap().is_empty());

        // count = 2^(n-c): U_3 = "0" with c = 1 covers 4 strings -> code length 2.
        let full = ordinal_family(Rational::new(1, 2), &[(IndexSpec::Single(3), "0")], vec![(0, 0), (3, 3)]);
        let codes = cover_to_complexity_bounds(&full, 1).unwrap();
        assert_eq!(codes.len(), 4);
        assert!(codes.values().all(|c| c.code_length == 2));

        assert!(matches!(
            cover_to_complexity_bounds(&full, 2),
            Err(ComplexityError::EpsilonTooLarge { .. })
        ));
        let coarse = ordinal_family(Rational::new(1, 2), &[(IndexSpec::Single(1), "0")], vec![(0, 3)]);
        assert!(matches!(
            cover_to_complexity_bounds(&coarse, 1),
            Err(ComplexityError::Granularity { n: 1, .. })
        ));
    }

    #[test]
    fn ceil_log2_values() {
        assert_eq!(ceil_log2(1), 0);
        assert_eq!(ceil_log2(2), 1);
        assert_eq!(ceil_log2(3), 2);
        assert_eq!(ceil_log2(4), 2);
        assert_eq!(ceil_log2(5), 3);
    }
}
