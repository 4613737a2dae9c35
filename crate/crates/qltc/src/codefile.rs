//! Text container for a CSS code: one stabiliser per line, sparse column
//! indices, plus free-form JSON metadata entries. The serialized form is
//! canonical, so equal codes produce byte-identical files.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use crate::css::CssCode;
use crate::gf2::BitMatrix;
use crate::{Error, Result};

const HEADER: &str = "qltc-code v1";

/// A CSS code together with metadata that later pipeline steps may need,
/// keyed by step name.
#[derive(Clone, Debug, PartialEq)]
pub struct CodeFile {
    pub code: CssCode,
    pub meta: BTreeMap<String, serde_json::Value>,
}

impl CodeFile {
    pub fn new(code: CssCode) -> Self {
        CodeFile {
            code,
            meta: BTreeMap::new(),
        }
    }

    pub fn with_meta(code: CssCode, meta: BTreeMap<String, serde_json::Value>) -> Self {
        CodeFile { code, meta }
    }

    /// Stores a serializable value under `key`, replacing any prior entry.
    pub fn set_meta<T: serde::Serialize>(&mut self, key: &str, value: &T) -> Result<()> {
        let json = serde_json::to_value(value)
            .map_err(|e| Error::InvalidParameter(format!("unserializable metadata: {e}")))?;
        self.meta.insert(key.to_string(), json);
        Ok(())
    }

    /// Reads the entry under `key` back into a concrete type.
    pub fn get_meta<T: serde::de::DeserializeOwned>(&self, key: &str) -> Result<Option<T>> {
        match self.meta.get(key) {
            None => Ok(None),
            Some(v) => serde_json::from_value(v.clone()).map(Some).map_err(|e| {
                Error::InvalidParameter(format!("metadata entry {key} has the wrong shape: {e}"))
            }),
        }
    }
}

/// Canonical text form: header, qubit count, metadata sorted by key,
/// X-stabilisers in row order, then Z-stabilisers.
pub fn serialize(file: &CodeFile) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{HEADER}");
    let _ = writeln!(out, "n {}", file.code.num_qubits());
    for (key, value) in &file.meta {
        let _ = writeln!(out, "meta {key} {value}");
    }
    let write_rows = |out: &mut String, tag: &str, h: &BitMatrix| {
        for r in 0..h.rows() {
            out.push_str(tag);
            for c in h.row_support(r) {
                let _ = write!(out, " {c}");
            }
            out.push('\n');
        }
    };
    write_rows(&mut out, "xstab", file.code.h_x());
    write_rows(&mut out, "zstab", file.code.h_z());
    out
}

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}

/// Parses the text form. Stabiliser columns may appear in any order but
/// duplicates are rejected; the loaded pair must commute unless `force`.
pub fn parse(text: &str, force: bool) -> Result<CodeFile> {
    let mut n: Option<usize> = None;
    let mut meta = BTreeMap::new();
    let mut x_rows: Vec<Vec<usize>> = Vec::new();
    let mut z_rows: Vec<Vec<usize>> = Vec::new();
    let mut saw_header = false;
    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if !saw_header {
            if line != HEADER {
                return Err(parse_err(lineno, format!("expected header '{HEADER}'")));
            }
            saw_header = true;
            continue;
        }
        let (tag, rest) = line.split_once(' ').unwrap_or((line, ""));
        match tag {
            "n" => {
                if n.is_some() {
                    return Err(parse_err(lineno, "duplicate qubit count"));
                }
                let v = rest
                    .trim()
                    .parse::<usize>()
                    .map_err(|_| parse_err(lineno, format!("bad qubit count '{rest}'")))?;
                n = Some(v);
            }
            "meta" => {
                let (key, json) = rest
                    .split_once(' ')
                    .ok_or_else(|| parse_err(lineno, "meta needs a key and a JSON value"))?;
                let value: serde_json::Value = serde_json::from_str(json)
                    .map_err(|e| parse_err(lineno, format!("bad JSON in meta {key}: {e}")))?;
                if meta.insert(key.to_string(), value).is_some() {
                    return Err(parse_err(lineno, format!("duplicate meta key '{key}'")));
                }
            }
            "xstab" | "zstab" => {
                let width =
                    n.ok_or_else(|| parse_err(lineno, "stabiliser before the qubit count"))?;
                let mut cols = Vec::new();
                for tok in rest.split_whitespace() {
                    let c = tok
                        .parse::<usize>()
                        .map_err(|_| parse_err(lineno, format!("bad column index '{tok}'")))?;
                    if c >= width {
                        return Err(parse_err(
                            lineno,
                            format!("column {c} out of range for n = {width}"),
                        ));
                    }
                    if cols.contains(&c) {
                        return Err(parse_err(lineno, format!("column {c} repeated")));
                    }
                    cols.push(c);
                }
                if tag == "xstab" {
                    x_rows.push(cols);
                } else {
                    z_rows.push(cols);
                }
            }
            other => {
                return Err(parse_err(lineno, format!("unknown directive '{other}'")));
            }
        }
    }
    if !saw_header {
        return Err(parse_err(1, format!("expected header '{HEADER}'")));
    }
    let n = n.ok_or_else(|| parse_err(1, "missing qubit count line"))?;
    let code = CssCode::new(
        BitMatrix::from_supports(x_rows.len(), n, &x_rows),
        BitMatrix::from_supports(z_rows.len(), n, &z_rows),
    )?;
    if !force {
        code.ensure_valid()?;
    }
    Ok(CodeFile { code, meta })
}

/// JSON form of a bare code, for embedding one code inside another
/// file's metadata.
pub fn code_to_value(code: &CssCode) -> serde_json::Value {
    let rows = |h: &BitMatrix| -> Vec<Vec<usize>> {
        (0..h.rows()).map(|r| h.row_support(r)).collect()
    };
    serde_json::json!({
        "n": code.num_qubits(),
        "xstab": rows(code.h_x()),
        "zstab": rows(code.h_z()),
    })
}

pub fn code_from_value(value: &serde_json::Value) -> Result<CssCode> {
    #[derive(serde::Deserialize)]
    struct Raw {
        n: usize,
        xstab: Vec<Vec<usize>>,
        zstab: Vec<Vec<usize>>,
    }
    let raw: Raw = serde_json::from_value(value.clone())
        .map_err(|e| Error::InvalidParameter(format!("bad embedded code: {e}")))?;
    if let Some(&c) = raw.xstab.iter().chain(&raw.zstab).flatten().find(|&&c| c >= raw.n) {
        return Err(Error::InvalidParameter(format!(
            "embedded code column {c} out of range for n = {}",
            raw.n
        )));
    }
    CssCode::new(
        BitMatrix::from_supports(raw.xstab.len(), raw.n, &raw.xstab),
        BitMatrix::from_supports(raw.zstab.len(), raw.n, &raw.zstab),
    )
}

pub fn read(path: &Path, force: bool) -> Result<CodeFile> {
    parse(&std::fs::read_to_string(path)?, force)
}

pub fn write(path: &Path, file: &CodeFile) -> Result<()> {
    std::fs::write(path, serialize(file))?;
    Ok(())
}
