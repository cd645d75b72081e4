//! Number formatting, JSON/CSV rendering and run manifests.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::CliError;

/// Decimal rendering with 12 significant digits, trailing zeros trimmed.
pub fn fmt_num(x: f64) -> String {
    if !x.is_finite() {
        return if x.is_nan() {
            "nan".into()
        } else if x > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        };
    }
    if x == 0.0 {
        return "0".into();
    }
    let magnitude = x.abs().log10().floor() as i32;
    let decimals = (11 - magnitude).max(0) as usize;
    let mut s = format!("{x:.decimals$}");
    if s.contains('.') {
        while s.ends_with('0') {
            s.pop();
        }
        if s.ends_with('.') {
            s.pop();
        }
    }
    if s == "-0" {
        s = "0".into();
    }
    s
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

fn write_json(out: &mut String, v: &Value, indent: usize) {
    let pad = |n: usize| "  ".repeat(n);
    match v {
        Value::Null => out.push_str("null"),
        Value::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        Value::Number(n) => {
            if n.is_f64() {
                out.push_str(&fmt_num(n.as_f64().unwrap()));
            } else {
                out.push_str(&n.to_string());
            }
        }
        Value::String(s) => out.push_str(&serde_json::to_string(s).unwrap()),
        Value::Array(items) => {
            if items.is_empty() {
                out.push_str("[]");
                return;
            }
            // Arrays of scalars stay on one line.
            if items.iter().all(|i| !i.is_array() && !i.is_object()) {
                out.push('[');
                for (k, item) in items.iter().enumerate() {
                    if k > 0 {
                        out.push_str(", ");
                    }
                    write_json(out, item, indent);
                }
                out.push(']');
                return;
            }
            out.push_str("[\n");
            for (k, item) in items.iter().enumerate() {
                out.push_str(&pad(indent + 1));
                write_json(out, item, indent + 1);
                out.push_str(if k + 1 < items.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(indent));
            out.push(']');
        }
        Value::Object(map) => {
            if map.is_empty() {
                out.push_str("{}");
                return;
            }
            out.push_str("{\n");
            for (k, (key, item)) in map.iter().enumerate() {
                out.push_str(&pad(indent + 1));
                out.push_str(&serde_json::to_string(key).unwrap());
                out.push_str(": ");
                write_json(out, item, indent + 1);
                out.push_str(if k + 1 < map.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(indent));
            out.push('}');
        }
    }
}

/// Pretty JSON with every float rendered by [`fmt_num`].
pub fn to_json<T: Serialize>(value: &T) -> String {
    let v = serde_json::to_value(value).expect("serializable output");
    let mut out = String::new();
    write_json(&mut out, &v, 0);
    out.push('\n');
    out
}

/// CSV with a mandatory header.
pub struct Csv {
    text: String,
    width: usize,
}

impl Csv {
    pub fn new(header: &[&str]) -> Self {
        Csv {
            text: format!("{}\n", header.join(",")),
            width: header.len(),
        }
    }

    pub fn row(&mut self, cells: &[Cell]) {
        debug_assert_eq!(cells.len(), self.width);
        let line: Vec<String> = cells.iter().map(Cell::render).collect();
        let _ = writeln!(self.text, "{}", line.join(","));
    }

    pub fn finish(self) -> String {
        self.text
    }
}

pub enum Cell {
    Int(u64),
    Num(f64),
    Empty,
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::Int(i) => i.to_string(),
            Cell::Num(x) => fmt_num(*x),
            Cell::Empty => String::new(),
        }
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as u64)
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

/// One rendered artifact of a command, written to `path` or stdout.
pub struct Artifact {
    pub path: Option<PathBuf>,
    pub content: String,
}

impl Artifact {
    pub fn new(path: Option<PathBuf>, content: String) -> Self {
        Artifact { path, content }
    }
}

#[derive(Serialize)]
struct OutputEntry {
    path: String,
    sha256: String,
}

#[derive(Serialize)]
struct Manifest<'a> {
    command: &'a str,
    config: &'a Value,
    seed: Option<u64>,
    input_sha256: String,
    argv: &'a [String],
    outputs: Vec<OutputEntry>,
}

/// What a command ran with, recorded next to every file it writes.
pub struct RunInfo {
    pub command: &'static str,
    pub config: Value,
    pub seed: Option<u64>,
    /// Raw bytes of every input file, in order.
    pub inputs: Vec<Vec<u8>>,
}

pub fn manifest_path(path: &Path) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(".manifest.json");
    PathBuf::from(s)
}

fn io_err(path: &Path, e: std::io::Error) -> CliError {
    CliError::Io(format!("{}: {e}", path.display()))
}

/// Writes file artifacts with their manifests and prints the rest.
pub fn emit(run: &RunInfo, argv: &[String], artifacts: Vec<Artifact>) -> Result<(), CliError> {
    let mut hasher = Sha256::new();
    hasher.update(serde_json::to_vec(&run.config).expect("config serializes"));
    for input in &run.inputs {
        hasher.update(input);
    }
    let input_sha256: String = hasher.finalize().iter().map(|b| format!("{b:02x}")).collect();

    let outputs: Vec<OutputEntry> = artifacts
        .iter()
        .filter_map(|a| {
            a.path.as_ref().map(|p| OutputEntry {
                path: p.display().to_string(),
                sha256: sha256_hex(a.content.as_bytes()),
            })
        })
        .collect();
    let manifest = to_json(&Manifest {
        command: run.command,
        config: &run.config,
        seed: run.seed,
        input_sha256,
        argv,
        outputs,
    });

    for a in &artifacts {
        match &a.path {
            Some(p) => {
                fs::write(p, &a.content).map_err(|e| io_err(p, e))?;
                let mp = manifest_path(p);
                fs::write(&mp, &manifest).map_err(|e| io_err(&mp, e))?;
            }
            None => print!("{}", a.content),
        }
    }
    Ok(())
}

pub fn read_input(path: &Path) -> Result<Vec<u8>, CliError> {
    fs::read(path).map_err(|e| io_err(path, e))
}
