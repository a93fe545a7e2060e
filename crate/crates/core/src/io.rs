//! JSON formats for automata and exploration inputs.
//!
//! Automata are stored as
//! `{"format":"synchrotree-automaton-v1","n":3,"alphabet":2,"delta":[[1,2,0],[0,0,0]]}`
//! with `delta[letter][state]`. Inputs are
//! `{"entries":[{"state":0,"congruence":1,"word":"ab"}]}`, words written as
//! `a`/`b` strings for two letters and comma-separated indices otherwise.

use std::fs;
use std::path::Path;

use serde_json::{json, Map, Value};

use crate::automaton::Automaton;
use crate::error::{Error, Result};
use crate::exploration::{InputEntry, InputSpec};
use crate::word::Word;

pub const AUTOMATON_FORMAT: &str = "synchrotree-automaton-v1";

fn schema(field: impl Into<String>, reason: impl Into<String>) -> Error {
    Error::Schema { field: field.into(), reason: reason.into() }
}

fn parse_object(text: &str) -> Result<Map<String, Value>> {
    match serde_json::from_str::<Value>(text) {
        Ok(Value::Object(m)) => Ok(m),
        Ok(_) => Err(schema("$", "expected a JSON object")),
        Err(e) => Err(schema("$", e.to_string())),
    }
}

fn uint(v: Option<&Value>, field: &str) -> Result<usize> {
    let v = v.ok_or_else(|| schema(field, "missing"))?;
    v.as_u64()
        .and_then(|x| usize::try_from(x).ok())
        .ok_or_else(|| schema(field, format!("expected a non-negative integer, got {v}")))
}

fn array<'a>(v: Option<&'a Value>, field: &str) -> Result<&'a Vec<Value>> {
    let v = v.ok_or_else(|| schema(field, "missing"))?;
    v.as_array().ok_or_else(|| schema(field, format!("expected an array, got {v}")))
}

pub fn automaton_to_json(a: &Automaton) -> String {
    json!({
        "format": AUTOMATON_FORMAT,
        "n": a.n(),
        "alphabet": a.alphabet(),
        "delta": a.delta(),
    })
    .to_string()
}

pub fn automaton_from_json(text: &str) -> Result<Automaton> {
    let m = parse_object(text)?;
    match m.get("format") {
        Some(Value::String(f)) if f == AUTOMATON_FORMAT => {}
        Some(other) => return Err(schema("format", format!("expected {AUTOMATON_FORMAT:?}, got {other}"))),
        None => return Err(schema("format", "missing")),
    }
    let n = uint(m.get("n"), "n")?;
    let alphabet = uint(m.get("alphabet"), "alphabet")?;
    let rows = array(m.get("delta"), "delta")?;
    if rows.len() != alphabet {
        return Err(schema("delta", format!("expected {alphabet} rows, got {}", rows.len())));
    }
    let mut delta = Vec::with_capacity(alphabet);
    for (l, row) in rows.iter().enumerate() {
        let field = format!("delta[{l}]");
        let row = array(Some(row), &field)?;
        if row.len() != n {
            return Err(schema(field, format!("expected {n} entries, got {}", row.len())));
        }
        let targets = row
            .iter()
            .enumerate()
            .map(|(s, t)| {
                let t = uint(Some(t), &format!("delta[{l}][{s}]"))?;
                if t >= n {
                    return Err(schema(format!("delta[{l}][{s}]"), format!("target {t} is out of range for {n} states")));
                }
                Ok(t)
            })
            .collect::<Result<Vec<_>>>()?;
        delta.push(targets);
    }
    Automaton::new(delta).map_err(|e| schema("delta", e.to_string()))
}

pub fn input_spec_to_json(u: &InputSpec, alphabet: usize) -> String {
    let entries: Vec<Value> = u
        .entries()
        .iter()
        .map(|e| json!({"state": e.state, "congruence": e.congruence, "word": e.word.to_text(alphabet)}))
        .collect();
    json!({ "entries": entries }).to_string()
}

/// Parses an input against an alphabet of size `alphabet`. Bounds on states
/// are checked when the input is explored.
pub fn input_spec_from_json(text: &str, alphabet: usize) -> Result<InputSpec> {
    let m = parse_object(text)?;
    let entries = array(m.get("entries"), "entries")?;
    let mut out = Vec::with_capacity(entries.len());
    for (i, e) in entries.iter().enumerate() {
        let field = |f: &str| format!("entries[{i}].{f}");
        let e = e.as_object().ok_or_else(|| schema(format!("entries[{i}]"), "expected an object"))?;
        let state = uint(e.get("state"), &field("state"))?;
        let congruence = uint(e.get("congruence"), &field("congruence"))?;
        let word = match e.get("word") {
            Some(Value::String(s)) => Word::parse(s, alphabet).map_err(|err| schema(field("word"), err.to_string()))?,
            Some(other) => return Err(schema(field("word"), format!("expected a string, got {other}"))),
            None => return Err(schema(field("word"), "missing")),
        };
        out.push(InputEntry { state, congruence, word });
    }
    InputSpec::new(out).map_err(|e| schema("entries", e.to_string()))
}

fn io_error(path: &Path, e: std::io::Error) -> Error {
    Error::Io { path: path.display().to_string(), message: e.to_string() }
}

pub fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| io_error(path, e))
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| io_error(path, e))
}

pub fn read_automaton(path: &Path) -> Result<Automaton> {
    automaton_from_json(&read_text(path)?)
}

pub fn write_automaton(path: &Path, a: &Automaton) -> Result<()> {
    write_text(path, &(automaton_to_json(a) + "\n"))
}
