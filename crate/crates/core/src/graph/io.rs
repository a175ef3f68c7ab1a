//! Text formats: the edge-list format and graph6 for simple graphs.
//!
//! Edge-list format: one `u v` line per edge (0-based integers), `#`
//! starts a comment, and an optional `vertices: n` header declares
//! vertices `0..n` so isolated vertices survive a round trip. Edge ids
//! are assigned in file order starting at 0.

use thiserror::Error;

use super::MultiGraph;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FormatError {
    #[error("line {line}: expected `u v` or `vertices: n`, got {text:?}")]
    BadLine { line: usize, text: String },
    #[error("graph6 input is empty")]
    Graph6Empty,
    #[error("graph6 inputs with more than 62 vertices are not supported")]
    Graph6TooLarge,
    #[error("graph6 payload has the wrong length for {n} vertices")]
    Graph6BadLength { n: usize },
    #[error("graph6 byte {byte:#x} outside the printable range")]
    Graph6BadByte { byte: u8 },
    #[error("graph6 output requires a simple graph")]
    NotSimple,
    #[error("graph6 output requires vertices numbered 0..n; missing {v}")]
    NotContiguous { v: usize },
}

/// Parses the edge-list format described in the module docs.
pub fn parse_edge_list(text: &str) -> Result<MultiGraph, FormatError> {
    let mut g = MultiGraph::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let bad = || FormatError::BadLine {
            line: idx + 1,
            text: raw.to_string(),
        };
        if let Some(rest) = line.strip_prefix("vertices:") {
            let n: usize = rest.trim().parse().map_err(|_| bad())?;
            for v in 0..n {
                g.add_vertex(v);
            }
            continue;
        }
        let mut parts = line.split_whitespace();
        let u: usize = parts.next().ok_or_else(bad)?.parse().map_err(|_| bad())?;
        let v: usize = parts.next().ok_or_else(bad)?.parse().map_err(|_| bad())?;
        if parts.next().is_some() {
            return Err(bad());
        }
        g.add_vertex(u);
        g.add_vertex(v);
        g.add_edge(u, v);
    }
    Ok(g)
}

/// Writes the edge-list format. The header records `max vertex + 1`, so
/// graphs whose vertices are the contiguous range 0..n round-trip exactly.
pub fn to_edge_list(g: &MultiGraph) -> String {
    let n = g.vertices().max().map_or(0, |v| v + 1);
    let mut out = format!("vertices: {n}\n");
    for (_, (u, v)) in g.edges() {
        out.push_str(&format!("{u} {v}\n"));
    }
    out
}

/// Parses a graph6 string (simple graphs, up to 62 vertices).
pub fn parse_graph6(text: &str) -> Result<MultiGraph, FormatError> {
    let bytes: Vec<u8> = text.trim().bytes().collect();
    if bytes.is_empty() {
        return Err(FormatError::Graph6Empty);
    }
    if bytes[0] == b'~' {
        return Err(FormatError::Graph6TooLarge);
    }
    let value = |b: u8| -> Result<u8, FormatError> {
        if !(63..=126).contains(&b) {
            return Err(FormatError::Graph6BadByte { byte: b });
        }
        Ok(b - 63)
    };
    let n = value(bytes[0])? as usize;
    let bit_count = n * n.saturating_sub(1) / 2;
    let payload = &bytes[1..];
    if payload.len() != bit_count.div_ceil(6) {
        return Err(FormatError::Graph6BadLength { n });
    }
    let mut g = MultiGraph::with_vertices(n);
    let mut bit_index = 0usize;
    for j in 1..n {
        for i in 0..j {
            let byte = value(payload[bit_index / 6])?;
            let bit = (byte >> (5 - bit_index % 6)) & 1;
            if bit == 1 {
                g.add_edge(i, j);
            }
            bit_index += 1;
        }
    }
    Ok(g)
}

/// Writes a graph6 string; requires a simple graph on vertices 0..n with
/// n ≤ 62.
pub fn to_graph6(g: &MultiGraph) -> Result<String, FormatError> {
    if !g.is_simple() {
        return Err(FormatError::NotSimple);
    }
    let n = g.num_vertices();
    if n > 62 {
        return Err(FormatError::Graph6TooLarge);
    }
    for v in 0..n {
        if !g.has_vertex(v) {
            return Err(FormatError::NotContiguous { v });
        }
    }
    let mut bits = Vec::with_capacity(n * n.saturating_sub(1) / 2);
    for j in 1..n {
        for i in 0..j {
            bits.push(!g.edges_between(i, j).is_empty());
        }
    }
    let mut out = vec![n as u8 + 63];
    for chunk in bits.chunks(6) {
        let mut byte = 0u8;
        for (pos, &bit) in chunk.iter().enumerate() {
            if bit {
                byte |= 1 << (5 - pos);
            }
        }
        out.push(byte + 63);
    }
    Ok(String::from_utf8(out).expect("graph6 bytes are printable ASCII"))
}
