//! Edge-list text, graph6, and JSON manifests.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::graph::{Graph, GraphError};

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("missing or malformed header line")]
    Header,
    #[error("header declares {declared} edges but {found} were read")]
    EdgeCount { declared: usize, found: usize },
    #[error("invalid graph6: {0}")]
    Graph6(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Parameters carried by the edge-list header.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeListHeader {
    pub p: u32,
    pub e: u32,
    pub r: u32,
    pub lambda: u32,
    pub k: u32,
    pub n: usize,
    pub m: usize,
}

impl EdgeListHeader {
    pub fn line(&self) -> String {
        format!(
            "# unitary-graph p={} e={} r={} lambda={} k={} n={} m={}",
            self.p, self.e, self.r, self.lambda, self.k, self.n, self.m
        )
    }

    fn parse(line: &str) -> Result<EdgeListHeader, FormatError> {
        let rest = line
            .strip_prefix("# unitary-graph")
            .ok_or(FormatError::Header)?;
        let mut fields = std::collections::HashMap::new();
        for tok in rest.split_whitespace() {
            let (key, value) = tok.split_once('=').ok_or(FormatError::Header)?;
            let value: usize = value.parse().map_err(|_| FormatError::Header)?;
            fields.insert(key, value);
        }
        let get = |k: &str| fields.get(k).copied().ok_or(FormatError::Header);
        let small =
            |k: &str| get(k).and_then(|v| u32::try_from(v).map_err(|_| FormatError::Header));
        Ok(EdgeListHeader {
            p: small("p")?,
            e: small("e")?,
            r: small("r")?,
            lambda: small("lambda")?,
            k: small("k")?,
            n: get("n")?,
            m: get("m")?,
        })
    }
}

/// Header line followed by one "u v" line per edge, u < v, sorted.
pub fn write_edge_list(header: &EdgeListHeader, g: &Graph) -> String {
    let mut out = header.line();
    out.push('\n');
    for (u, v) in g.edges() {
        out.push_str(&format!("{u} {v}\n"));
    }
    out
}

pub fn parse_edge_list(text: &str) -> Result<(EdgeListHeader, Graph), FormatError> {
    let mut lines = text.lines().enumerate();
    let header = lines
        .next()
        .map(|(_, l)| EdgeListHeader::parse(l.trim()))
        .ok_or(FormatError::Header)??;
    let mut edges = Vec::new();
    for (i, line) in lines {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let err = |msg: &str| FormatError::Parse {
            line: i + 1,
            msg: msg.to_string(),
        };
        let mut it = line.split_whitespace();
        let u: u32 = it
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| err("expected vertex index"))?;
        let v: u32 = it
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| err("expected second vertex index"))?;
        if it.next().is_some() {
            return Err(err("trailing tokens"));
        }
        edges.push((u, v));
    }
    let g = Graph::from_edges(header.n, edges)?;
    if g.size() != header.m {
        return Err(FormatError::EdgeCount {
            declared: header.m,
            found: g.size(),
        });
    }
    Ok((header, g))
}

fn graph6_size(n: usize, out: &mut Vec<u8>) {
    if n < 63 {
        out.push(n as u8 + 63);
    } else if n < 258_048 {
        out.push(126);
        out.extend((0..3).rev().map(|i| ((n >> (6 * i)) & 63) as u8 + 63));
    } else {
        out.extend([126, 126]);
        out.extend((0..6).rev().map(|i| ((n >> (6 * i)) & 63) as u8 + 63));
    }
}

/// Standard graph6 encoding with a trailing newline.
pub fn encode_graph6(g: &Graph) -> String {
    let n = g.order();
    let mut out = Vec::new();
    graph6_size(n, &mut out);
    let mut acc = 0u8;
    let mut filled = 0;
    for j in 1..n as u32 {
        for i in 0..j {
            acc = acc << 1 | g.is_adjacent(i, j) as u8;
            filled += 1;
            if filled == 6 {
                out.push(acc + 63);
                acc = 0;
                filled = 0;
            }
        }
    }
    if filled > 0 {
        out.push((acc << (6 - filled)) + 63);
    }
    out.push(b'\n');
    String::from_utf8(out).expect("graph6 is ASCII")
}

pub fn decode_graph6(text: &str) -> Result<Graph, FormatError> {
    let bytes = text.trim_end().as_bytes();
    let bad = |m: &str| FormatError::Graph6(m.to_string());
    if bytes.iter().any(|&b| !(63..=126).contains(&b)) {
        return Err(bad("byte outside 63..=126"));
    }
    let (n, body) = match bytes {
        [126, 126, rest @ ..] if rest.len() >= 6 => {
            let n = rest[..6]
                .iter()
                .fold(0usize, |a, &b| a << 6 | (b - 63) as usize);
            (n, &rest[6..])
        }
        [126, rest @ ..] if rest.len() >= 3 => {
            let n = rest[..3]
                .iter()
                .fold(0usize, |a, &b| a << 6 | (b - 63) as usize);
            (n, &rest[3..])
        }
        [first, rest @ ..] if *first != 126 => ((first - 63) as usize, rest),
        _ => return Err(bad("truncated size field")),
    };
    let bits = n * n.saturating_sub(1) / 2;
    if body.len() != bits.div_ceil(6) {
        return Err(bad(&format!(
            "expected {} data bytes for n = {n}, found {}",
            bits.div_ceil(6),
            body.len()
        )));
    }
    let bit = |k: usize| (body[k / 6] - 63) >> (5 - k % 6) & 1 == 1;
    let mut edges = Vec::new();
    let mut k = 0;
    for j in 1..n as u32 {
        for i in 0..j {
            if bit(k) {
                edges.push((i, j));
            }
            k += 1;
        }
    }
    Ok(Graph::from_edges(n, edges)?)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ManifestFile {
    pub name: String,
    pub format: String,
    pub sha256: String,
}

/// Description of a set of exported files. Contains no timestamps so that
/// identical inputs give identical bytes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Manifest {
    pub schema: u32,
    pub params: EdgeListHeader,
    pub order: usize,
    pub size: usize,
    pub degree: Option<usize>,
    pub method: String,
    pub convention: String,
    /// SHA-256 of the canonical edge-list text.
    pub edge_list_sha256: String,
    pub files: Vec<ManifestFile>,
}

impl Manifest {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("manifest serializes");
        s.push('\n');
        s
    }
}
