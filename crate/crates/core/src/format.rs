//! Text and JSON encodings of [`SymTensor`].
//!
//! Text:
//!
//! ```text
//! symtensor <order> <dim>
//! <i1> ... <id> <p/q>
//! ```
//!
//! one record per canonical entry, indices 1-based and nondecreasing, records
//! in lexicographic order. Lines starting with `#` are ignored on input.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{format_rational, parse_rational};
use crate::tensor::SymTensor;

pub const TEXT_MAGIC: &str = "symtensor";

pub fn to_text(t: &SymTensor) -> String {
    let mut out = format!("{} {} {}\n", TEXT_MAGIC, t.order(), t.dim());
    for (index, value) in t.entries() {
        for i in index {
            out.push_str(&(i + 1).to_string());
            out.push(' ');
        }
        out.push_str(&format_rational(value));
        out.push('\n');
    }
    out
}

pub fn from_text(text: &str) -> Result<SymTensor> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(n, l)| (n + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let (hline, header) = lines.next().ok_or(Error::Parse {
        line: 1,
        msg: "missing header".into(),
    })?;
    let fields: Vec<&str> = header.split_whitespace().collect();
    let parse_err = |line: usize, msg: &str| Error::Parse {
        line,
        msg: msg.to_string(),
    };
    if fields.len() != 3 || fields[0] != TEXT_MAGIC {
        return Err(parse_err(hline, "expected `symtensor <order> <dim>`"));
    }
    let order: usize = fields[1].parse().map_err(|_| parse_err(hline, "bad order"))?;
    let dim: usize = fields[2].parse().map_err(|_| parse_err(hline, "bad dim"))?;
    let mut raw = Vec::new();
    for (line, l) in lines {
        let fields: Vec<&str> = l.split_whitespace().collect();
        if fields.len() != order + 1 {
            return Err(parse_err(line, "record length does not match order"));
        }
        let mut index = Vec::with_capacity(order);
        for f in &fields[..order] {
            let i: usize = f.parse().map_err(|_| parse_err(line, "bad index"))?;
            if i == 0 || i > dim {
                return Err(Error::IndexOutOfRange { index: i, dim });
            }
            index.push(i - 1);
        }
        raw.push((index, parse_rational(fields[order])?));
    }
    SymTensor::from_entries(order, dim, raw)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TensorJson {
    pub order: usize,
    pub dim: usize,
    pub entries: Vec<EntryJson>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EntryJson {
    pub index: Vec<usize>,
    pub value: String,
}

impl From<&SymTensor> for TensorJson {
    fn from(t: &SymTensor) -> Self {
        TensorJson {
            order: t.order(),
            dim: t.dim(),
            entries: t
                .entries()
                .map(|(index, value)| EntryJson {
                    index: index.iter().map(|i| i + 1).collect(),
                    value: format_rational(value),
                })
                .collect(),
        }
    }
}

impl TryFrom<&TensorJson> for SymTensor {
    type Error = Error;

    fn try_from(j: &TensorJson) -> Result<SymTensor> {
        let mut raw = Vec::with_capacity(j.entries.len());
        for e in &j.entries {
            let mut index = Vec::with_capacity(e.index.len());
            for &i in &e.index {
                if i == 0 || i > j.dim {
                    return Err(Error::IndexOutOfRange { index: i, dim: j.dim });
                }
                index.push(i - 1);
            }
            raw.push((index, parse_rational(&e.value)?));
        }
        SymTensor::from_entries(j.order, j.dim, raw)
    }
}

pub fn to_json(t: &SymTensor) -> String {
    serde_json::to_string(&TensorJson::from(t)).expect("tensor json")
}

pub fn from_json(text: &str) -> Result<SymTensor> {
    let j: TensorJson = serde_json::from_str(text)?;
    SymTensor::try_from(&j)
}

/// Accepts either encoding.
pub fn parse_tensor(text: &str) -> Result<SymTensor> {
    if text.trim_start().starts_with('{') {
        from_json(text)
    } else {
        from_text(text)
    }
}
