//! Random valid inputs and brute-force oracles shared by the integration
//! tests and the acceptance run.
//!
//! Generators grow a presentation one random event at a time and keep an
//! event only if the presentation still validates, so every output is valid
//! by construction. Oracles recompute the quantities under test from the
//! raw event lists without touching the library's evaluation code.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use limitlab::bits::BitString;
use limitlab::clopen::{ClopenSet, Limits};
use limitlab::family::{
    Granularity, IndexSpec, OpenEvent, OpenFamilyPresentation, SemimeasureEvent,
    SemimeasureFamilyPresentation, SetEvent, SetFamilyPresentation, StagedFamily,
};
use limitlab::freq::PartialTrace;
use limitlab::lowbasis::{ForcingInstance, Query};
use limitlab::rational::Rational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_string<R: Rng>(rng: &mut R, min_len: usize, max_len: usize) -> BitString {
    let len = rng.random_range(min_len..=max_len);
    BitString::from_bits((0..len).map(|_| rng.random_bool(0.5)).collect())
}

fn random_spec<R: Rng>(rng: &mut R, max_index: u64) -> IndexSpec {
    let n = rng.random_range(0..=max_index);
    if rng.random_bool(0.5) {
        IndexSpec::Single(n)
    } else {
        IndexSpec::Tail(n)
    }
}

fn structural() -> Limits {
    Limits { max_depth: usize::MAX }
}

/// `k <= 4`, universe of at most 20 strings, at most 6 breakpoints.
pub fn random_set_family<R: Rng>(rng: &mut R) -> SetFamilyPresentation {
    let k = rng.random_range(1..=4);
    let size = rng.random_range(1..=20);
    let mut universe = BTreeSet::new();
    while universe.len() < size {
        universe.insert(random_string(rng, 1, 5));
    }
    let universe: Vec<BitString> = universe.into_iter().collect();
    let mut p = SetFamilyPresentation { k, universe, events: Vec::new() };
    let mut stage = 0;
    for _ in 0..rng.random_range(0..=16) {
        stage += rng.random_range(0..=1);
        let element = p.universe[rng.random_range(0..p.universe.len())].clone();
        p.events.push(SetEvent { stage, spec: random_spec(rng, 5), element });
        if !p.validate(&structural()).is_valid() || p.breakpoints().len() > 6 {
            p.events.pop();
        }
    }
    p
}

pub fn eighths() -> Vec<Rational> {
    (0..=8).map(|i| Rational::new(i, 8)).collect()
}

/// At most 10 distinct elements, values on the grid of eighths.
pub fn random_semimeasure_family<R: Rng>(rng: &mut R, tree_mode: bool) -> SemimeasureFamilyPresentation {
    let size = rng.random_range(1..=10);
    let mut pool = BTreeSet::new();
    while pool.len() < size {
        pool.insert(random_string(rng, 0, 4));
    }
    let pool: Vec<BitString> = pool.into_iter().collect();
    let mut p = SemimeasureFamilyPresentation { tree_mode, events: Vec::new() };
    let mut stage = 0;
    for _ in 0..rng.random_range(0..=14) {
        stage += rng.random_range(0..=1);
        let element = pool[rng.random_range(0..pool.len())].clone();
        let value = Rational::new(rng.random_range(1..=8), 8);
        p.events.push(SemimeasureEvent { stage, spec: random_spec(rng, 5), element, value });
        if !p.validate(&structural()).is_valid() {
            p.events.pop();
        }
    }
    p
}

/// Interval depth at most `max_depth`; a granularity step function is
/// attached when `granular`.
pub fn random_open_family<R: Rng>(rng: &mut R, max_depth: usize, granular: bool) -> OpenFamilyPresentation {
    let epsilon = Rational::new(rng.random_range(1..=7), 8);
    let granularity = granular.then(|| {
        let mut steps = vec![(0, rng.random_range(2..=max_depth as u64))];
        if rng.random_bool(0.5) {
            steps.push((rng.random_range(1..=5), max_depth as u64));
        }
        Granularity(steps)
    });
    let mut p = OpenFamilyPresentation { epsilon, events: Vec::new(), granularity };
    let mut stage = 0;
    for _ in 0..rng.random_range(0..=14) {
        stage += rng.random_range(0..=1);
        let interval = random_string(rng, 1, max_depth);
        p.events.push(OpenEvent { stage, spec: random_spec(rng, 5), interval });
        if !p.validate(&structural()).is_valid() {
            p.events.pop();
        }
    }
    p
}

pub fn random_clopen<R: Rng>(rng: &mut R, max_depth: usize, max_intervals: usize) -> ClopenSet {
    let count = rng.random_range(0..=max_intervals);
    ClopenSet::normalize((0..count).map(|_| random_string(rng, 0, max_depth)))
}

/// At most 8 queries, depth at most 6, non-full initial set.
pub fn random_forcing_instance<R: Rng>(rng: &mut R) -> ForcingInstance {
    let initial_u = loop {
        let u = random_clopen(rng, 6, 3);
        if !u.is_full() {
            break u;
        }
    };
    let queries = (0..rng.random_range(0..=8))
        .map(|i| {
            let mut set = random_clopen(rng, 6, 4);
            // Lean towards sets that can complete the cover.
            if rng.random_bool(0.3) {
                set = set.union(&initial_u.complement());
            }
            Query { label: format!("q{i}"), set }
        })
        .collect();
    ForcingInstance { initial_u, queries }
}

pub fn random_trace<R: Rng>(rng: &mut R) -> PartialTrace {
    let slot = |rng: &mut R| rng.random_bool(0.8).then(|| rng.random_range(0..5u64));
    let prefix = (0..rng.random_range(0..=6)).map(|_| slot(rng)).collect();
    let period = (0..rng.random_range(1..=6)).map(|_| slot(rng)).collect();
    PartialTrace::new(prefix, period).expect("period is nonempty")
}

/// An index past every event index; all members from here on agree.
fn far_index(specs: impl Iterator<Item = IndexSpec>) -> u64 {
    specs
        .map(|s| match s {
            IndexSpec::Single(n) | IndexSpec::Tail(n) => n,
        })
        .max()
        .unwrap_or(0)
        + 2
}

/// Elements present in every `U_n` from some index on.
pub fn oracle_set_liminf(p: &SetFamilyPresentation) -> BTreeSet<BitString> {
    let far = far_index(p.events.iter().map(|e| e.spec));
    let at = |n: u64| -> BTreeSet<BitString> {
        p.events
            .iter()
            .filter(|e| match e.spec {
                IndexSpec::Single(m) => m == n,
                IndexSpec::Tail(m) => n >= m,
            })
            .map(|e| e.element.clone())
            .collect()
    };
    let mut out = at(far);
    for n in far + 1..far + 4 {
        out = out.intersection(&at(n)).cloned().collect();
    }
    out
}

/// `m(v) = max(direct(v), m(v0) + m(v1))` computed recursively.
fn oracle_tree_value(direct: &BTreeMap<BitString, Rational>, v: &BitString, depth: usize) -> Rational {
    let own = direct.get(v).cloned().unwrap_or_else(Rational::zero);
    if v.len() >= depth {
        return own;
    }
    let below = oracle_tree_value(direct, &v.child(false), depth) + oracle_tree_value(direct, &v.child(true), depth);
    if below > own {
        below
    } else {
        own
    }
}

/// Pointwise `m_n(u)` for every `u` of length at most `depth`, from events.
pub fn oracle_semimeasure_at(p: &SemimeasureFamilyPresentation, n: u64, depth: usize) -> BTreeMap<BitString, Rational> {
    let mut direct: BTreeMap<BitString, Rational> = BTreeMap::new();
    for e in &p.events {
        let covers = match e.spec {
            IndexSpec::Single(m) => m == n,
            IndexSpec::Tail(m) => n >= m,
        };
        if covers {
            let slot = direct.entry(e.element.clone()).or_insert_with(Rational::zero);
            if e.value > *slot {
                *slot = e.value.clone();
            }
        }
    }
    if !p.tree_mode {
        return direct;
    }
    BitString::all_up_to(depth)
        .map(|v| {
            let value = oracle_tree_value(&direct, &v, depth);
            (v, value)
        })
        .filter(|(_, v)| !v.is_zero())
        .collect()
}

/// Pointwise liminf of `m_n`.
pub fn oracle_semimeasure_liminf(p: &SemimeasureFamilyPresentation, depth: usize) -> BTreeMap<BitString, Rational> {
    let far = far_index(p.events.iter().map(|e| e.spec));
    oracle_semimeasure_at(p, far, depth)
}

/// Length-`depth` strings whose interval lies in `U_n`, decided by prefix
/// tests on the raw event intervals.
pub fn oracle_open_points(p: &OpenFamilyPresentation, n: u64, depth: usize) -> BTreeSet<BitString> {
    BitString::all_of_length(depth)
        .filter(|w| {
            p.events.iter().any(|e| {
                let covers = match e.spec {
                    IndexSpec::Single(m) => m == n,
                    IndexSpec::Tail(m) => n >= m,
                };
                covers && e.interval.is_prefix_of(w)
            })
        })
        .collect()
}

pub fn oracle_open_liminf(p: &OpenFamilyPresentation, depth: usize) -> BTreeSet<BitString> {
    let far = far_index(p.events.iter().map(|e| e.spec));
    oracle_open_points(p, far, depth)
}

/// Points of a clopen set at a fixed depth, by prefix tests.
pub fn oracle_points(set: &ClopenSet, depth: usize) -> BTreeSet<BitString> {
    BitString::all_of_length(depth)
        .filter(|w| set.intervals().iter().any(|x| x.is_prefix_of(w)))
        .collect()
}

/// Independent interpreter of the two-mode reference method, written on
/// `&str`.
pub fn oracle_m0(program: &str, condition: usize) -> Option<String> {
    if let Some(q) = program.strip_prefix("00") {
        return Some(q.to_string());
    }
    let q = program.strip_prefix("01")?;
    if q.is_empty() {
        return None;
    }
    Some(q.chars().cycle().take(condition).collect())
}

/// Shortest-program table for one condition: all programs of length
/// `<= max_program_len` are run and the minimum length kept per output.
pub fn oracle_complexities(condition: usize, max_program_len: usize) -> BTreeMap<String, u64> {
    let mut best: BTreeMap<String, u64> = BTreeMap::new();
    for p in BitString::all_up_to(max_program_len) {
        if let Some(out) = oracle_m0(&p.to_string(), condition) {
            let len = p.len() as u64;
            best.entry(out).and_modify(|b| *b = (*b).min(len)).or_insert(len);
        }
    }
    best
}
