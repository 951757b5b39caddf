//! Plain-text and JSON file formats.
//!
//! Every text format is a header line followed by one record per line.
//! Blank lines and lines starting with `#` are ignored. See
//! `docs/formats.md` for the full description.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::codes::SequenceSet;
use crate::diffsets::{DifferenceTriangleSet, DisjointDifferenceSet};
use crate::error::{Error, Result};
use crate::packing::SupportingGraphPacking;
use crate::seqcore::{BinarySequence, CharacteristicSet};

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

/// Content lines with their 1-based line numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn numbers<T: std::str::FromStr>(line: usize, s: &str) -> Result<Vec<T>> {
    s.split_whitespace()
        .map(|t| {
            t.parse()
                .map_err(|_| parse_err(line, format!("expected a non-negative integer, found {t:?}")))
        })
        .collect()
}

fn header<const N: usize>(
    lines: &mut impl Iterator<Item = (usize, String)>,
    names: &str,
) -> Result<(usize, [usize; N])> {
    let (line, text) = lines
        .next()
        .ok_or_else(|| parse_err(0, format!("missing header `{names}`")))?;
    let v: Vec<usize> = numbers(line, &text)?;
    let arr: [usize; N] = v
        .try_into()
        .map_err(|_| parse_err(line, format!("header must be `{names}`")))?;
    Ok((line, arr))
}

fn owned_lines(text: &str) -> impl Iterator<Item = (usize, String)> + '_ {
    content_lines(text).map(|(i, l)| (i, l.to_string()))
}

fn expect_end(lines: &mut impl Iterator<Item = (usize, String)>, what: &str) -> Result<()> {
    match lines.next() {
        Some((line, _)) => Err(parse_err(line, format!("more {what} than the header declares"))),
        None => Ok(()),
    }
}

/// `n k Delta N`, then N lines of n-character 0/1 strings (index 0 first).
pub fn write_sequence_set(code: &SequenceSet) -> String {
    let mut out = format!("{} {} {} {}\n", code.period(), code.weight(), code.delta(), code.len());
    for s in code.sequences() {
        let _ = writeln!(out, "{s}");
    }
    out
}

/// Header values and (line number, sequence) records.
type SequenceRecords = ([usize; 4], Vec<(usize, BinarySequence)>);

fn sequence_records(text: &str) -> Result<SequenceRecords> {
    let mut lines = owned_lines(text);
    let (_, header) = header::<4>(&mut lines, "n k Delta N")?;
    let [n, _, _, count] = header;
    let mut seqs = Vec::with_capacity(count);
    for i in 0..count {
        let (line, s) = lines
            .next()
            .ok_or_else(|| parse_err(0, format!("expected {count} sequences, found {i}")))?;
        let seq: BinarySequence = s.parse().map_err(|e: Error| parse_err(line, e.to_string()))?;
        if seq.period() != n {
            return Err(parse_err(
                line,
                format!("sequence has length {}, expected {n}", seq.period()),
            ));
        }
        seqs.push((line, seq));
    }
    expect_end(&mut lines, "sequences")?;
    Ok((header, seqs))
}

pub fn parse_sequence_set(text: &str) -> Result<SequenceSet> {
    let ([n, k, delta, _], records) = sequence_records(text)?;
    for (line, seq) in &records {
        if seq.weight() != k {
            return Err(parse_err(
                *line,
                format!("sequence has weight {}, expected {k}", seq.weight()),
            ));
        }
    }
    SequenceSet::new(n, k, delta, records.into_iter().map(|(_, s)| s).collect())
}

/// Like [`parse_sequence_set`] but only checks lengths, so sets with
/// unequal weights or repeated sequences can still be inspected.
/// Returns the header `[n, k, Delta, N]` and the sequences.
pub fn parse_sequences_unchecked(text: &str) -> Result<([usize; 4], Vec<BinarySequence>)> {
    let (header, records) = sequence_records(text)?;
    Ok((header, records.into_iter().map(|(_, s)| s).collect()))
}

/// A DDS file before validation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DdsFile {
    pub n: usize,
    pub k: usize,
    pub blocks: Vec<Vec<usize>>,
}

/// `n k r`, then r lines of k residues.
pub fn write_dds(dds: &DisjointDifferenceSet) -> String {
    let mut out = format!("{} {} {}\n", dds.modulus(), dds.block_size(), dds.num_blocks());
    for b in dds.blocks() {
        let _ = writeln!(out, "{}", join(b));
    }
    out
}

fn join<T: ToString>(xs: &[T]) -> String {
    xs.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ")
}

pub fn parse_dds(text: &str) -> Result<DdsFile> {
    let mut lines = owned_lines(text);
    let (_, [n, k, r]) = header::<3>(&mut lines, "n k r")?;
    let mut blocks = Vec::with_capacity(r);
    for i in 0..r {
        let (line, s) = lines
            .next()
            .ok_or_else(|| parse_err(0, format!("expected {r} blocks, found {i}")))?;
        let b: Vec<usize> = numbers(line, &s)?;
        if b.len() != k {
            return Err(parse_err(line, format!("block has {} elements, expected {k}", b.len())));
        }
        if let Some(&x) = b.iter().find(|&&x| x >= n) {
            return Err(parse_err(line, format!("residue {x} is not below {n}")));
        }
        blocks.push(b);
    }
    expect_end(&mut lines, "blocks")?;
    Ok(DdsFile { n, k, blocks })
}

/// A packing file before validation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PackingFile {
    pub n: usize,
    pub k: usize,
    pub delta: usize,
    pub members: Vec<CharacteristicSet>,
}

/// `n k Delta N`, then N lines of k residues.
pub fn write_packing(p: &SupportingGraphPacking) -> String {
    let mut out = format!("{} {} {} {}\n", p.modulus(), p.weight(), p.delta(), p.len());
    for m in p.members() {
        let _ = writeln!(out, "{}", join(m.elements()));
    }
    out
}

pub fn parse_packing(text: &str) -> Result<PackingFile> {
    let mut lines = owned_lines(text);
    let (_, [n, k, delta, count]) = header::<4>(&mut lines, "n k Delta N")?;
    let mut members = Vec::with_capacity(count);
    for i in 0..count {
        let (line, s) = lines
            .next()
            .ok_or_else(|| parse_err(0, format!("expected {count} members, found {i}")))?;
        let xs: Vec<usize> = numbers(line, &s)?;
        if xs.len() != k {
            return Err(parse_err(
                line,
                format!("member has {} elements, expected {k}", xs.len()),
            ));
        }
        members.push(CharacteristicSet::new(n, xs).map_err(|e| parse_err(line, e.to_string()))?);
    }
    expect_end(&mut lines, "members")?;
    Ok(PackingFile { n, k, delta, members })
}

/// `r k`, then r lines of k + 1 integers starting with 0.
pub fn write_dts(dts: &DifferenceTriangleSet) -> String {
    let k = dts.blocks()[0].len() - 1;
    let mut out = format!("{} {}\n", dts.num_blocks(), k);
    for b in dts.blocks() {
        let _ = writeln!(out, "{}", join(b));
    }
    out
}

pub fn parse_dts(text: &str) -> Result<Vec<Vec<u64>>> {
    let mut lines = owned_lines(text);
    let (_, [r, k]) = header::<2>(&mut lines, "r k")?;
    let mut blocks = Vec::with_capacity(r);
    for i in 0..r {
        let (line, s) = lines
            .next()
            .ok_or_else(|| parse_err(0, format!("expected {r} blocks, found {i}")))?;
        let b: Vec<u64> = numbers(line, &s)?;
        if b.len() != k + 1 {
            return Err(parse_err(
                line,
                format!("block has {} elements, expected {}", b.len(), k + 1),
            ));
        }
        blocks.push(b);
    }
    expect_end(&mut lines, "blocks")?;
    Ok(blocks)
}

/// Where a sequence set came from.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub method: String,
    #[serde(default)]
    pub parameters: BTreeMap<String, serde_json::Value>,
    /// Name and result of the checker run before writing.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub verified_by: Option<String>,
}

pub const JSON_FORMAT_TAG: &str = "pcac-sequence-set";

#[derive(Serialize, Deserialize)]
struct SequenceSetJson {
    format: String,
    version: u32,
    n: usize,
    k: usize,
    delta: usize,
    #[serde(rename = "N")]
    count: usize,
    sequences: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    provenance: Option<Provenance>,
}

pub fn sequence_set_to_json(code: &SequenceSet, provenance: Option<&Provenance>) -> String {
    let doc = SequenceSetJson {
        format: JSON_FORMAT_TAG.into(),
        version: 1,
        n: code.period(),
        k: code.weight(),
        delta: code.delta(),
        count: code.len(),
        sequences: code.sequences().iter().map(ToString::to_string).collect(),
        provenance: provenance.cloned(),
    };
    let mut s = serde_json::to_string_pretty(&doc).expect("plain data serializes");
    s.push('\n');
    s
}

pub fn sequence_set_from_json(text: &str) -> Result<(SequenceSet, Option<Provenance>)> {
    let doc: SequenceSetJson = serde_json::from_str(text).map_err(|e| parse_err(e.line(), e.to_string()))?;
    if doc.format != JSON_FORMAT_TAG {
        return Err(parse_err(1, format!("unknown format tag {:?}", doc.format)));
    }
    if doc.count != doc.sequences.len() {
        return Err(parse_err(
            1,
            format!("N = {} but {} sequences listed", doc.count, doc.sequences.len()),
        ));
    }
    let seqs = doc
        .sequences
        .iter()
        .map(|s| s.parse())
        .collect::<Result<Vec<BinarySequence>>>()?;
    Ok((SequenceSet::new(doc.n, doc.k, doc.delta, seqs)?, doc.provenance))
}

/// Reads either format, choosing JSON when the text starts with `{`.
pub fn read_sequence_set(text: &str) -> Result<SequenceSet> {
    if text.trim_start().starts_with('{') {
        sequence_set_from_json(text).map(|(s, _)| s)
    } else {
        parse_sequence_set(text)
    }
}
