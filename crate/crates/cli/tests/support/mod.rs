//! Golden-file cases for the `limitlab` binary.
//!
//! Each case runs the binary on a fixture and compares standard output and
//! exit status with `fixtures/golden/<name>.out`. Set `LIMITLAB_BLESS=1` to
//! rewrite the golden files.

#![allow(dead_code)]

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::Command;

use limitlab::bits::BitString;
use limitlab::clopen::{ClopenSet, Limits};
use limitlab::complexity::{ComplexityTable, DeficiencyReport, OrdinalCode, RandomnessReport};
use limitlab::cover::{CoverOpenSet, CoverSemimeasure, CoverSet};
use limitlab::eventlog::read_event_log;
use limitlab::lowbasis::ForcingOutcome;
use limitlab::rational::Rational;
use serde_json::Value;

pub struct Case {
    pub name: &'static str,
    pub args: &'static [&'static str],
    pub exit: i32,
}

pub const QUARTERS: &str = "0,1/4,1/2,3/4,1";

pub const CASES: &[Case] = &[
    Case { name: "validate", args: &["validate", "--input", "capacity.jsonl"], exit: 1 },
    Case { name: "liminf", args: &["liminf", "--input", "granular.jsonl"], exit: 0 },
    Case { name: "cover-sets", args: &["cover-sets", "--input", "sets.jsonl"], exit: 0 },
    Case { name: "cover-semimeasure", args: &["cover-semimeasure", "--input", "flat.jsonl", "--grid", QUARTERS], exit: 0 },
    Case { name: "cover-tree", args: &["cover-tree", "--input", "tree.jsonl", "--grid", QUARTERS], exit: 0 },
    Case { name: "cover-open", args: &["cover-open", "--input", "open.jsonl", "--lmax", "2"], exit: 0 },
    Case {
        name: "cover-open-strong",
        args: &["cover-open-strong", "--input", "granular.jsonl", "--epsilon-prime", "7/8"],
        exit: 0,
    },
    Case { name: "decompose", args: &["decompose", "--input", "granular.jsonl"], exit: 0 },
    Case { name: "lowbasis", args: &["lowbasis", "--input", "instance.json", "--witness-length", "2"], exit: 0 },
    Case { name: "complexity", args: &["complexity", "--nmax", "4", "--text"], exit: 0 },
    Case {
        name: "deficiency",
        args: &["deficiency", "--input", "table.txt", "--omega", "0000", "--horizon", "4", "--c", "0"],
        exit: 0,
    },
    Case {
        name: "deficiency-csv",
        args: &["deficiency", "--input", "table.txt", "--omega", "0000", "--horizon", "4", "--c", "0", "--format", "csv"],
        exit: 0,
    },
    Case {
        name: "deficiency-family",
        args: &["deficiency-family", "--input", "table.txt", "--c", "0", "--nmin", "2", "--nmax", "4"],
        exit: 0,
    },
    Case {
        name: "randomness-report",
        args: &["randomness-report", "--input", "table.txt", "--omega", "0000", "--c", "0"],
        exit: 0,
    },
    Case { name: "ordinal-codes", args: &["ordinal-codes", "--input", "ordinal.jsonl", "--c", "1"], exit: 0 },
    Case { name: "freq", args: &["freq", "--input", "trace.json"], exit: 0 },
    Case {
        name: "trace-to-family",
        args: &["trace-to-family", "--input", "trace.json", "--nmax", "8", "--grid", QUARTERS],
        exit: 0,
    },
];

pub fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests").join("fixtures")
}

/// Runs the binary inside the fixture directory.
pub fn run(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_limitlab"))
        .args(args)
        .current_dir(fixtures())
        .env_remove("LIMITLAB_MAX_DEPTH")
        .output()
        .expect("binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).expect("utf-8 stdout"),
        String::from_utf8(out.stderr).expect("utf-8 stderr"),
    )
}

/// Compares one case with its golden file; returns a description of the
/// mismatch, if any.
pub fn check_golden(case: &Case) -> Result<String, String> {
    let (code, stdout, stderr) = run(case.args);
    if code != case.exit {
        return Err(format!("{}: exit {code}, expected {} ({stderr})", case.name, case.exit));
    }
    let path = fixtures().join("golden").join(format!("{}.out", case.name));
    if std::env::var_os("LIMITLAB_BLESS").is_some() {
        std::fs::create_dir_all(path.parent().unwrap()).unwrap();
        std::fs::write(&path, &stdout).unwrap();
    }
    let expected = std::fs::read_to_string(&path).map_err(|e| format!("{}: {e}", path.display()))?;
    if stdout != expected {
        return Err(format!("{}: output differs from {}", case.name, path.display()));
    }
    let (_, again, _) = run(case.args);
    if again != stdout {
        return Err(format!("{}: two runs differ", case.name));
    }
    Ok(stdout)
}

fn ensure(cond: bool, what: &str) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(what.to_string())
    }
}

fn parse<T: serde::de::DeserializeOwned>(text: &str) -> Result<T, String> {
    serde_json::from_str(text).map_err(|e| e.to_string())
}

/// Re-parses an emitted artifact into library types and re-checks the
/// guarantees it claims.
pub fn revalidate(case: &Case, output: &str) -> Result<(), String> {
    match case.name {
        "validate" => {
            let v: Value = parse(output)?;
            ensure(v["valid"] == Value::Bool(false), "validate report should be invalid")
        }
        "liminf" => {
            let v: Value = parse(output)?;
            let set: ClopenSet = serde_json::from_value(v["liminf"].clone()).map_err(|e| e.to_string())?;
            let measure: Rational = serde_json::from_value(v["measure"].clone()).map_err(|e| e.to_string())?;
            ensure(set.measure() == measure, "liminf measure")
        }
        "cover-sets" => {
            let c: CoverSet = parse(output)?;
            ensure((c.elements.len() as u64) < 1 << c.k, "cover size below 2^k")
        }
        "cover-semimeasure" | "cover-tree" => {
            let c: CoverSemimeasure = parse(output)?;
            ensure(c.is_semimeasure(), "cover is a semimeasure")
        }
        "cover-open" | "cover-open-strong" => {
            let c: CoverOpenSet = parse(output)?;
            ensure(c.set.measure() == c.measure && c.measure <= c.bound, "cover measure within bound")
        }
        "decompose" => {
            let v: Value = parse(output)?;
            let pieces: Vec<ClopenSet> = v["pieces"]
                .as_array()
                .ok_or("pieces")?
                .iter()
                .map(|p| serde_json::from_value(p["set"].clone()).map_err(|e| e.to_string()))
                .collect::<Result<_, _>>()?;
            for (i, a) in pieces.iter().enumerate() {
                for b in &pieces[i + 1..] {
                    ensure(a.is_disjoint(b), "pieces disjoint")?;
                }
            }
            Ok(())
        }
        "lowbasis" => {
            let o: ForcingOutcome = parse(output)?;
            ensure(
                !o.final_u.is_full() && ClopenSet::interval(o.witness_prefix).is_disjoint(&o.final_u),
                "witness avoids final U",
            )
        }
        "complexity" => {
            let t = ComplexityTable::from_text(output).map_err(|e| e.to_string())?;
            t.check_counting_bound().map_err(|e| e.to_string())
        }
        "deficiency" => {
            let r: DeficiencyReport = parse(output)?;
            ensure(r.per_prefix.iter().all(|e| e.dbar <= e.d), "dbar <= d")
        }
        "deficiency-csv" => ensure(output.lines().count() == 6, "one CSV row per prefix"),
        "randomness-report" => {
            let r: RandomnessReport = parse(output)?;
            ensure(r.count == r.qualifying.len(), "count matches")
        }
        "ordinal-codes" => {
            let codes: BTreeMap<BitString, OrdinalCode> = parse(output)?;
            ensure(codes.iter().all(|(x, c)| x.len() as u64 == c.n), "codes indexed by length")
        }
        "freq" => {
            let v: Value = parse(output)?;
            let q: BTreeMap<u64, Rational> =
                serde_json::from_value(v["frequencies"].clone()).map_err(|e| e.to_string())?;
            ensure(q.values().sum::<Rational>() <= Rational::one(), "frequencies sum to at most 1")
        }
        "deficiency-family" | "trace-to-family" => {
            let p = read_event_log(output).map_err(|e| e.to_string())?;
            ensure(p.validate(&Limits::default()).is_valid(), "emitted family validates")
        }
        other => Err(format!("no round-trip check for {other}")),
    }
}
