use serde_json::{json, Value};

use limitlab::bits::BitString;
use limitlab::clopen::{ClopenSet, Limits};
use limitlab::complexity::{
    cover_to_complexity_bounds, deficiency_family, deficiency_report, randomness_report, ComplexityError,
    ComplexityTable,
};
use limitlab::cover::{
    cover_open, cover_open_strong, cover_semimeasure, cover_sets, decompose_liminf, CoverError, CoverOpenSet,
    CoverSemimeasure,
};
use limitlab::eventlog::{read_event_log, write_event_log};
use limitlab::family::{
    Member, OpenFamilyPresentation, Presentation, SemimeasureFamilyPresentation, SetFamilyPresentation,
    ValueTable,
};
use limitlab::freq::{limit_frequency, trace_to_family, PartialTrace};
use limitlab::lowbasis::{force, ForcingError, ForcingInstance, Verdict};
use limitlab::rational::Rational;

use crate::output::{config, csv_table, invalid, pretty, read_input, write_output, Failure};
use crate::{Cli, Command, Format};

/// JSON result plus an optional tabular view for `--format csv`.
struct Report {
    json: Value,
    csv: Option<(Vec<&'static str>, Vec<Vec<String>>)>,
}

impl Report {
    fn new(json: Value) -> Self {
        Report { json, csv: None }
    }

    fn rows(mut self, header: &[&'static str], rows: Vec<Vec<String>>) -> Self {
        self.csv = Some((header.to_vec(), rows));
        self
    }
}

fn to_json<T: serde::Serialize>(value: &T) -> Value {
    serde_json::to_value(value).expect("library types serialize")
}

fn cover_failure(e: CoverError) -> Failure {
    match e {
        CoverError::InvalidPresentation(_) => invalid(e),
        other => config(other),
    }
}

fn complexity_failure(e: ComplexityError) -> Failure {
    match e {
        ComplexityError::MissingEntries(_)
        | ComplexityError::CountingBound { .. }
        | ComplexityError::InvalidPresentation(_)
        | ComplexityError::EpsilonTooLarge { .. }
        | ComplexityError::MeasureBound { .. }
        | ComplexityError::Granularity { .. } => invalid(e),
        other => config(other),
    }
}

fn limits() -> Result<Limits, Failure> {
    Limits::from_env().map_err(config)
}

fn load_presentation(cli: &Cli, k: Option<u32>, epsilon: Option<&Rational>) -> Result<Presentation, Failure> {
    let text = read_input(cli.input.as_deref())?;
    let mut p = read_event_log(&text).map_err(config)?;
    match &mut p {
        Presentation::Set(s) => {
            if let Some(k) = k {
                s.k = k;
            }
        }
        Presentation::Open(o) => {
            if let Some(e) = epsilon {
                o.epsilon = e.clone();
            }
        }
        Presentation::Semimeasure(_) => {}
    }
    Ok(p)
}

/// Loads a presentation and rejects it unless it validates under the
/// configured depth cap.
fn load_valid(cli: &Cli, k: Option<u32>, epsilon: Option<&Rational>) -> Result<Presentation, Failure> {
    let p = load_presentation(cli, k, epsilon)?;
    let report = p.validate(&limits()?);
    if !report.is_valid() {
        return Err(Failure::Invalid(format!("invalid presentation: {report}")));
    }
    Ok(p)
}

fn expect_set(p: Presentation) -> Result<SetFamilyPresentation, Failure> {
    match p {
        Presentation::Set(s) => Ok(s),
        _ => Err(config("this command needs a set family log")),
    }
}

fn expect_semimeasure(p: Presentation, tree_mode: bool) -> Result<SemimeasureFamilyPresentation, Failure> {
    match p {
        Presentation::Semimeasure(s) if s.tree_mode == tree_mode => Ok(s),
        Presentation::Semimeasure(_) if tree_mode => Err(config("cover-tree needs a log with \"tree\":true")),
        Presentation::Semimeasure(_) => Err(config("cover-semimeasure needs a log with \"tree\":false")),
        _ => Err(config("this command needs a semimeasure family log")),
    }
}

fn expect_open(p: Presentation) -> Result<OpenFamilyPresentation, Failure> {
    match p {
        Presentation::Open(o) => Ok(o),
        _ => Err(config("this command needs an open family log")),
    }
}

fn load_table(cli: &Cli) -> Result<ComplexityTable, Failure> {
    ComplexityTable::from_text(&read_input(cli.input.as_deref())?).map_err(config)
}

fn load_json<T: serde::de::DeserializeOwned>(cli: &Cli) -> Result<T, Failure> {
    serde_json::from_str(&read_input(cli.input.as_deref())?).map_err(config)
}

fn strings(xs: impl IntoIterator<Item = impl ToString>) -> Vec<Vec<String>> {
    xs.into_iter().map(|x| vec![x.to_string()]).collect()
}

fn value_rows(table: &ValueTable) -> Vec<Vec<String>> {
    table.iter().map(|(x, v)| vec![x.to_string(), v.to_string()]).collect()
}

fn member_report(member: &Member) -> (Value, Vec<&'static str>, Vec<Vec<String>>) {
    match member {
        Member::Set(s) => (to_json(s), vec!["element"], strings(s)),
        Member::Values(t) => (to_json(t), vec!["element", "value"], value_rows(t)),
        Member::Open(o) => (to_json(o), vec!["interval"], strings(o.intervals())),
    }
}

fn semimeasure_report(cover: &CoverSemimeasure) -> Report {
    Report::new(to_json(cover)).rows(&["element", "value"], value_rows(&cover.values))
}

fn open_report(cover: &CoverOpenSet) -> Report {
    Report::new(to_json(cover)).rows(&["interval"], strings(cover.set.intervals()))
}

fn set_json(set: &ClopenSet) -> Value {
    json!({ "set": set, "measure": set.measure() })
}

pub fn run(cli: &Cli) -> Result<(), Failure> {
    let report = match &cli.command {
        Command::Validate { k, epsilon } => {
            let p = load_presentation(cli, *k, epsilon.as_ref())?;
            let report = p.validate(&limits()?);
            let mut json = to_json(&report);
            json["breakpoints"] = to_json(&p.breakpoints());
            let rows = report
                .violations
                .iter()
                .map(|v| {
                    let n = v.index().map(|n| n.to_string()).unwrap_or_default();
                    vec![v.invariant().to_string(), n, v.to_string()]
                })
                .collect();
            emit(cli, Report::new(json).rows(&["invariant", "n", "message"], rows))?;
            if !report.is_valid() {
                return Err(Failure::Invalid(report.to_string()));
            }
            return Ok(());
        }
        Command::Liminf { k, epsilon } => {
            let p = load_valid(cli, *k, epsilon.as_ref())?;
            let breakpoints = p.breakpoints();
            let (liminf, header, rows) = member_report(&p.liminf());
            let mut json = json!({
                "breakpoints": breakpoints,
                "lastBreakpoint": breakpoints.last(),
                "liminf": liminf,
            });
            if let Member::Open(o) = p.liminf() {
                json["measure"] = to_json(&o.measure());
            }
            Report::new(json).rows(&header, rows)
        }
        Command::CoverSets { k, nmax } => {
            let p = expect_set(load_valid(cli, *k, None)?)?;
            let cover = cover_sets(&p, *nmax).map_err(cover_failure)?;
            Report::new(to_json(&cover)).rows(&["element"], strings(&cover.elements))
        }
        Command::CoverSemimeasure { grid, nmax } => {
            let p = expect_semimeasure(load_valid(cli, None, None)?, false)?;
            semimeasure_report(&cover_semimeasure(&p, &grid.0, *nmax).map_err(cover_failure)?)
        }
        Command::CoverTree { grid, nmax } => {
            let p = expect_semimeasure(load_valid(cli, None, None)?, true)?;
            semimeasure_report(&cover_semimeasure(&p, &grid.0, *nmax).map_err(cover_failure)?)
        }
        Command::CoverOpen { lmax, epsilon, nmax } => {
            let p = expect_open(load_valid(cli, None, epsilon.as_ref())?)?;
            open_report(&cover_open(&p, *lmax, *nmax).map_err(cover_failure)?)
        }
        Command::CoverOpenStrong { epsilon_prime, epsilon } => {
            let p = expect_open(load_valid(cli, None, epsilon.as_ref())?)?;
            open_report(&cover_open_strong(&p, epsilon_prime).map_err(cover_failure)?)
        }
        Command::Decompose { epsilon } => {
            let p = expect_open(load_valid(cli, None, epsilon.as_ref())?)?;
            let pieces = decompose_liminf(&p).map_err(cover_failure)?;
            let liminf = pieces.iter().fold(ClopenSet::empty(), |acc, f| acc.union(f));
            let json = json!({
                "pieces": pieces
                    .iter()
                    .enumerate()
                    .map(|(i, f)| json!({ "i": i, "set": f, "measure": f.measure() }))
                    .collect::<Vec<_>>(),
                "liminf": set_json(&liminf),
            });
            let rows = pieces
                .iter()
                .enumerate()
                .map(|(i, f)| vec![i.to_string(), f.measure().to_string(), f.to_string()])
                .collect();
            Report::new(json).rows(&["i", "measure", "set"], rows)
        }
        Command::Lowbasis { witness_length } => {
            let instance: ForcingInstance = load_json(cli)?;
            instance.check(&limits()?).map_err(invalid)?;
            let outcome = force(&instance, *witness_length).map_err(|e| match e {
                ForcingError::WitnessTooShort { .. } => config(e),
                other => invalid(other),
            })?;
            let rows = outcome
                .answers
                .iter()
                .map(|a| {
                    let verdict = match a.verdict {
                        Verdict::Halts => "halts",
                        Verdict::Diverges => "diverges",
                    };
                    vec![a.label.clone(), verdict.to_string()]
                })
                .collect();
            Report::new(to_json(&outcome)).rows(&["label", "verdict"], rows)
        }
        Command::Complexity { nmax, mode, text } => {
            let table = ComplexityTable::from_reference(*nmax, *mode).map_err(config)?;
            if *text {
                return emit_text(cli, &table.to_text());
            }
            let entries: Vec<Value> = table
                .entries
                .iter()
                .map(|((x, n), v)| json!({ "x": x, "condition": n, "value": v }))
                .collect();
            let rows = table
                .entries
                .iter()
                .map(|((x, n), v)| vec![x.to_string(), n.to_string(), v.to_string()])
                .collect();
            Report::new(json!({ "mode": mode, "entries": entries })).rows(&["x", "condition", "value"], rows)
        }
        Command::Deficiency { omega, horizon, c } => {
            let table = load_table(cli)?;
            let report = deficiency_report(&table, &omega.0, *horizon, *c).map_err(complexity_failure)?;
            let rows = report
                .per_prefix
                .iter()
                .map(|e| vec![e.x.to_string(), e.d.to_string(), e.dbar.to_string(), e.dbar_exceeds_c.to_string()])
                .collect();
            Report::new(to_json(&report)).rows(&["x", "d", "dbar", "dbar_exceeds_c"], rows)
        }
        Command::DeficiencyFamily { c, nmin, nmax } => {
            let table = load_table(cli)?;
            let family = deficiency_family(&table, *c, (*nmin, *nmax)).map_err(complexity_failure)?;
            return emit_text(cli, &write_event_log(&Presentation::Open(family)));
        }
        Command::RandomnessReport { omega, c } => {
            let table = load_table(cli)?;
            let report = randomness_report(&table, &omega.0, *c).map_err(complexity_failure)?;
            let rows = (0..=omega.0.len() as u64)
                .map(|n| vec![n.to_string(), report.qualifying.contains(&n).to_string()])
                .collect();
            Report::new(to_json(&report)).rows(&["n", "qualifies"], rows)
        }
        Command::OrdinalCodes { c } => {
            let p = expect_open(load_valid(cli, None, None)?)?;
            let codes = cover_to_complexity_bounds(&p, *c).map_err(complexity_failure)?;
            let rows = codes
                .iter()
                .map(|(x, code)| {
                    vec![x.to_string(), code.n.to_string(), code.ordinal.to_string(), code.code_length.to_string()]
                })
                .collect();
            Report::new(to_json(&codes)).rows(&["x", "n", "ordinal", "code_length"], rows)
        }
        Command::Freq => {
            let trace: PartialTrace = load_json(cli)?;
            let q = limit_frequency(&trace);
            let total: Rational = q.values().sum();
            let rows = q.iter().map(|(x, v)| vec![x.to_string(), v.to_string()]).collect();
            let elements: Value = q.keys().map(|&x| (x.to_string(), to_json(&BitString::numeral(x)))).collect();
            Report::new(json!({ "frequencies": q, "total": total, "numerals": elements }))
                .rows(&["x", "q"], rows)
        }
        Command::TraceToFamily { nmax, grid } => {
            let trace: PartialTrace = load_json(cli)?;
            let family = trace_to_family(&trace, *nmax, &grid.0).map_err(config)?;
            return emit_text(cli, &write_event_log(&Presentation::Semimeasure(family)));
        }
    };
    emit(cli, report)
}

fn emit(cli: &Cli, report: Report) -> Result<(), Failure> {
    let text = match cli.format {
        Format::Json => pretty(&report.json),
        Format::Csv => {
            let (header, rows) = report.csv.ok_or_else(|| config("no CSV view for this command"))?;
            csv_table(&header, rows)?
        }
    };
    write_output(cli.output.as_deref(), &text)
}

/// Writes a native text artifact (event log or table); these have no CSV
/// view.
fn emit_text(cli: &Cli, text: &str) -> Result<(), Failure> {
    if cli.format == Format::Csv {
        return Err(config("this command writes its own format; --format csv does not apply"));
    }
    write_output(cli.output.as_deref(), text)
}
