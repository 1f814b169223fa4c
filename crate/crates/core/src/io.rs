//! JSON reading and writing for instances and packings.

use std::fs;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{KnapsackInstance, Packing};

fn parse<T: DeserializeOwned>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Parse { line: e.line(), column: e.column(), message: strip_position(&e) })
}

// serde_json appends " at line L column C"; the position is reported separately.
fn strip_position(e: &serde_json::Error) -> String {
    let full = e.to_string();
    match full.rfind(" at line ") {
        Some(cut) => full[..cut].to_string(),
        None => full,
    }
}

pub fn parse_instance(text: &str) -> Result<KnapsackInstance> {
    parse(text)
}

pub fn parse_packing(text: &str) -> Result<Packing> {
    parse(text)
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

pub fn read_instance(path: &Path) -> Result<KnapsackInstance> {
    parse_instance(&read(path)?)
}

pub fn read_packing(path: &Path) -> Result<Packing> {
    parse_packing(&read(path)?)
}

/// Pretty-printed JSON with a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("model types serialize");
    s.push('\n');
    s
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    fs::write(path, to_json(value)).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}
