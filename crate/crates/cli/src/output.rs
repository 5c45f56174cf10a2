use std::fmt;
use std::fs;
use std::io::{self, Read, Write};
use std::path::Path;

use serde_json::Value;

/// Why a command stopped.
#[derive(Debug)]
pub enum Failure {
    /// The input was read but violates an invariant or precondition.
    Invalid(String),
    /// The input could not be read or the flags do not fit the command.
    Config(String),
}

impl Failure {
    pub fn exit_code(&self) -> u8 {
        match self {
            Failure::Invalid(_) => 1,
            Failure::Config(_) => 2,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Invalid(m) | Failure::Config(m) => f.write_str(m),
        }
    }
}

pub fn config<E: fmt::Display>(e: E) -> Failure {
    Failure::Config(e.to_string())
}

pub fn invalid<E: fmt::Display>(e: E) -> Failure {
    Failure::Invalid(e.to_string())
}

pub fn read_input(path: Option<&Path>) -> Result<String, Failure> {
    match path {
        Some(p) => fs::read_to_string(p).map_err(|e| config(format!("reading {}: {e}", p.display()))),
        None => {
            let mut s = String::new();
            io::stdin().read_to_string(&mut s).map_err(config)?;
            Ok(s)
        }
    }
}

pub fn write_output(path: Option<&Path>, text: &str) -> Result<(), Failure> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| config(format!("writing {}: {e}", p.display()))),
        None => io::stdout().write_all(text.as_bytes()).map_err(config),
    }
}

pub fn pretty(value: &Value) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("JSON values serialize");
    s.push('\n');
    s
}

/// Renders rows as CSV with a header line.
pub fn csv_table(header: &[&str], rows: Vec<Vec<String>>) -> Result<String, Failure> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).map_err(config)?;
    for row in rows {
        w.write_record(&row).map_err(config)?;
    }
    let bytes = w.into_inner().map_err(config)?;
    String::from_utf8(bytes).map_err(config)
}
