//! Sequence and string-set readers.

use std::fs;
use std::io;
use std::path::Path;

/// One input sequence. Plain-text files yield a single record with an empty
/// name.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Record {
    pub name: String,
    pub seq: Vec<u8>,
}

fn lines(data: &[u8]) -> impl Iterator<Item = &[u8]> {
    data.split(|&b| b == b'\n')
        .map(|l| l.strip_suffix(b"\r").unwrap_or(l))
}

/// Parses FASTA when the first non-empty line starts with `>`, otherwise
/// treats the whole file as one string with line breaks removed. Letters are
/// kept as raw bytes.
pub fn parse_sequences(data: &[u8]) -> Vec<Record> {
    let fasta = lines(data)
        .find(|l| !l.is_empty())
        .is_some_and(|l| l[0] == b'>');
    if !fasta {
        let seq = lines(data).flatten().copied().collect();
        return vec![Record {
            name: String::new(),
            seq,
        }];
    }
    let mut records: Vec<Record> = Vec::new();
    for line in lines(data) {
        if let Some(header) = line.strip_prefix(b">") {
            let header = String::from_utf8_lossy(header);
            let name = header.split_whitespace().next().unwrap_or("").to_string();
            records.push(Record {
                name,
                seq: Vec::new(),
            });
        } else if let Some(last) = records.last_mut() {
            last.seq.extend_from_slice(line);
        }
    }
    records
}

/// One string per line; blank lines are skipped.
pub fn parse_string_set(data: &[u8]) -> Vec<Vec<u8>> {
    lines(data)
        .filter(|l| !l.is_empty())
        .map(<[u8]>::to_vec)
        .collect()
}

pub fn read_sequences(path: &Path) -> io::Result<Vec<Record>> {
    Ok(parse_sequences(&fs::read(path)?))
}

pub fn read_string_set(path: &Path) -> io::Result<Vec<Vec<u8>>> {
    Ok(parse_string_set(&fs::read(path)?))
}
