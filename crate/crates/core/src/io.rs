//! Lookup-table files.
//!
//! JSON: `{"n": 9, "table": [...]}`. Raw: 8-byte little-endian `n`, then
//! `2^n` little-endian `u32` entries. Readers detect the format from the
//! first non-blank byte (`{` means JSON).

use std::path::Path;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::vbf::{Vbf, MAX_TABLE_N};

#[derive(Serialize, Deserialize)]
struct TableFile {
    n: u32,
    table: Vec<u32>,
}

impl Serialize for Vbf {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Borrowed<'a> {
            n: u32,
            table: &'a [u32],
        }
        Borrowed {
            n: self.n(),
            table: self.table(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Vbf {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Vbf, D::Error> {
        let raw = TableFile::deserialize(d)?;
        Vbf::from_table(raw.n, raw.table).map_err(serde::de::Error::custom)
    }
}

/// Byte offset of a 1-based line and column.
fn offset_of(text: &[u8], line: usize, column: usize) -> usize {
    let mut start = 0;
    for _ in 1..line {
        match text[start..].iter().position(|&b| b == b'\n') {
            Some(p) => start += p + 1,
            None => break,
        }
    }
    (start + column.saturating_sub(1)).min(text.len())
}

pub fn parse_json(bytes: &[u8]) -> Result<Vbf> {
    let raw: TableFile = serde_json::from_slice(bytes).map_err(|e| Error::Parse {
        offset: offset_of(bytes, e.line(), e.column()),
        message: e.to_string(),
    })?;
    // Report where the offending entry sits.
    Vbf::from_table(raw.n, raw.table).map_err(|e| match e {
        Error::EntryOutOfRange { index, .. } => Error::Parse {
            offset: entry_offset(bytes, index),
            message: e.to_string(),
        },
        other => other,
    })
}

/// Offset of the `index`-th number inside the `table` array.
fn entry_offset(bytes: &[u8], index: usize) -> usize {
    let Some(key) = bytes.windows(7).position(|w| w == b"\"table\"") else {
        return 0;
    };
    let Some(open) = bytes[key..].iter().position(|&b| b == b'[') else {
        return key;
    };
    let mut pos = key + open + 1;
    for _ in 0..index {
        match bytes[pos..].iter().position(|&b| b == b',') {
            Some(p) => pos += p + 1,
            None => break,
        }
    }
    while pos < bytes.len() && bytes[pos].is_ascii_whitespace() {
        pos += 1;
    }
    pos
}

pub fn parse_binary(bytes: &[u8]) -> Result<Vbf> {
    let header: [u8; 8] = bytes
        .get(..8)
        .and_then(|h| h.try_into().ok())
        .ok_or_else(|| Error::Parse {
            offset: bytes.len(),
            message: "file shorter than the 8-byte header".into(),
        })?;
    let n = u64::from_le_bytes(header);
    if n == 0 || n > MAX_TABLE_N as u64 {
        return Err(Error::Parse {
            offset: 0,
            message: format!("n = {n} outside 1..={MAX_TABLE_N}"),
        });
    }
    let n = n as u32;
    let expected = 8 + 4 * (1usize << n);
    if bytes.len() != expected {
        return Err(Error::Parse {
            offset: bytes.len().min(expected),
            message: format!("expected {expected} bytes for n = {n}, found {}", bytes.len()),
        });
    }
    let table: Vec<u32> = bytes[8..]
        .chunks_exact(4)
        .map(|c| u32::from_le_bytes(c.try_into().unwrap()))
        .collect();
    if let Some(i) = table.iter().position(|&v| v >> n != 0) {
        return Err(Error::Parse {
            offset: 8 + 4 * i,
            message: format!("entry {} at index {i} does not fit in {n} bits", table[i]),
        });
    }
    Vbf::from_table(n, table)
}

pub fn parse(bytes: &[u8]) -> Result<Vbf> {
    match bytes.iter().find(|b| !b.is_ascii_whitespace()) {
        Some(b'{') => parse_json(bytes),
        _ => parse_binary(bytes),
    }
}

pub fn read_vbf(path: &Path) -> Result<Vbf> {
    parse(&std::fs::read(path)?)
}

pub fn to_json(f: &Vbf) -> String {
    serde_json::to_string(f).expect("tables always serialize")
}

pub fn to_binary(f: &Vbf) -> Vec<u8> {
    let mut out = Vec::with_capacity(8 + 4 * f.size());
    out.extend_from_slice(&(f.n() as u64).to_le_bytes());
    for &y in f.table() {
        out.extend_from_slice(&y.to_le_bytes());
    }
    out
}

pub fn write_vbf(path: &Path, f: &Vbf, binary: bool) -> Result<()> {
    if binary {
        std::fs::write(path, to_binary(f))?;
    } else {
        std::fs::write(path, to_json(f))?;
    }
    Ok(())
}
