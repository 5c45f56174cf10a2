//! Line-oriented JSON event logs.
//!
//! The first non-blank line is a header naming the family kind and its
//! parameters; every following line is one event:
//!
//! ```text
//! {"family":"set","k":2,"universe":["0","1","10"]}
//! {"stage":0,"kind":"tail","index":0,"element":"0"}
//! {"stage":1,"kind":"single","index":3,"element":"10"}
//! ```
//!
//! Semimeasure logs use `{"family":"semimeasure","tree":false}` and events
//! with `element` and `value`; open logs use
//! `{"family":"open","epsilon":"1/2","granularity":[[0,0],[3,3]]}` (the
//! granularity is optional) and events with `interval`. Values are exact
//! `"num/den"` strings. Blank lines are ignored.
//!
//! ```
//! use limitlab::eventlog::{read_event_log, write_event_log};
//! use limitlab::family::Presentation;
//!
//! let text = "{\"family\":\"open\",\"epsilon\":\"1/2\"}\n\
//!             {\"stage\":0,\"kind\":\"tail\",\"index\":0,\"interval\":\"0\"}\n";
//! let p = read_event_log(text).unwrap();
//! assert!(matches!(p, Presentation::Open(_)));
//! assert_eq!(write_event_log(&p), text);
//! ```

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bits::BitString;
use crate::family::{
    Granularity, IndexSpec, OpenEvent, OpenFamilyPresentation, Presentation, SemimeasureEvent,
    SemimeasureFamilyPresentation, SetEvent, SetFamilyPresentation,
};
use crate::rational::Rational;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
#[error("line {line}: {message}")]
pub struct EventLogError {
    pub line: usize,
    pub message: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "lowercase")]
enum Header {
    Set {
        k: u32,
        universe: Vec<BitString>,
    },
    Semimeasure {
        #[serde(default)]
        tree: bool,
    },
    Open {
        epsilon: Rational,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        granularity: Option<Granularity>,
    },
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
enum Kind {
    Single,
    Tail,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EventLine {
    stage: u64,
    kind: Kind,
    index: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    element: Option<BitString>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    interval: Option<BitString>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    value: Option<Rational>,
}

impl EventLine {
    fn new(stage: u64, spec: IndexSpec) -> Self {
        let (kind, index) = match spec {
            IndexSpec::Single(n) => (Kind::Single, n),
            IndexSpec::Tail(n) => (Kind::Tail, n),
        };
        EventLine { stage, kind, index, element: None, interval: None, value: None }
    }

    fn spec(&self) -> IndexSpec {
        match self.kind {
            Kind::Single => IndexSpec::Single(self.index),
            Kind::Tail => IndexSpec::Tail(self.index),
        }
    }
}

fn take<T>(field: Option<T>, name: &str, line: usize) -> Result<T, EventLogError> {
    field.ok_or_else(|| EventLogError { line, message: format!("missing field `{name}`") })
}

fn forbid<T>(field: &Option<T>, name: &str, line: usize) -> Result<(), EventLogError> {
    match field {
        Some(_) => Err(EventLogError { line, message: format!("unexpected field `{name}`") }),
        None => Ok(()),
    }
}

/// Parses a whole event log.
pub fn read_event_log(text: &str) -> Result<Presentation, EventLogError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty());
    let (header_line, header) = lines
        .next()
        .ok_or(EventLogError { line: 0, message: "empty event log".into() })?;
    let header: Header = serde_json::from_str(header)
        .map_err(|e| EventLogError { line: header_line, message: format!("bad header: {e}") })?;
    let mut events = Vec::new();
    for (line, raw) in lines {
        let event: EventLine = serde_json::from_str(raw)
            .map_err(|e| EventLogError { line, message: format!("bad event: {e}") })?;
        events.push((line, event));
    }
    Ok(match header {
        Header::Set { k, universe } => {
            let mut out = Vec::new();
            for (line, e) in events {
                forbid(&e.interval, "interval", line)?;
                forbid(&e.value, "value", line)?;
                let spec = e.spec();
                out.push(SetEvent { stage: e.stage, spec, element: take(e.element, "element", line)? });
            }
            Presentation::Set(SetFamilyPresentation { k, universe, events: out })
        }
        Header::Semimeasure { tree } => {
            let mut out = Vec::new();
            for (line, e) in events {
                forbid(&e.interval, "interval", line)?;
                let spec = e.spec();
                out.push(SemimeasureEvent {
                    stage: e.stage,
                    spec,
                    element: take(e.element, "element", line)?,
                    value: take(e.value, "value", line)?,
                });
            }
            Presentation::Semimeasure(SemimeasureFamilyPresentation { tree_mode: tree, events: out })
        }
        Header::Open { epsilon, granularity } => {
            let mut out = Vec::new();
            for (line, e) in events {
                forbid(&e.element, "element", line)?;
                forbid(&e.value, "value", line)?;
                let spec = e.spec();
                out.push(OpenEvent { stage: e.stage, spec, interval: take(e.interval, "interval", line)? });
            }
            Presentation::Open(OpenFamilyPresentation { epsilon, events: out, granularity })
        }
    })
}

fn push_json<T: Serialize>(out: &mut String, value: &T) {
    out.push_str(&serde_json::to_string(value).expect("event log values serialize"));
    out.push('\n');
}

/// Renders a presentation as an event log; [`read_event_log`] inverts it.
pub fn write_event_log(p: &Presentation) -> String {
    let mut out = String::new();
    match p {
        Presentation::Set(p) => {
            push_json(&mut out, &Header::Set { k: p.k, universe: p.universe.clone() });
            for e in &p.events {
                let mut line = EventLine::new(e.stage, e.spec);
                line.element = Some(e.element.clone());
                push_json(&mut out, &line);
            }
        }
        Presentation::Semimeasure(p) => {
            push_json(&mut out, &Header::Semimeasure { tree: p.tree_mode });
            for e in &p.events {
                let mut line = EventLine::new(e.stage, e.spec);
                line.element = Some(e.element.clone());
                line.value = Some(e.value.clone());
                push_json(&mut out, &line);
            }
        }
        Presentation::Open(p) => {
            push_json(
                &mut out,
                &Header::Open { epsilon: p.epsilon.clone(), granularity: p.granularity.clone() },
            );
            for e in &p.events {
                let mut line = EventLine::new(e.stage, e.spec);
                line.interval = Some(e.interval.clone());
                push_json(&mut out, &line);
            }
        }
    }
    out
}
