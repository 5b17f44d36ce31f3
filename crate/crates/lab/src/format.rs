// SPDX-License-Identifier: Apache-2.0

//! Graph files (graph6 and the edge-list record) and exact rational parsing.

use std::fmt::Write as _;
use std::path::Path;

use removal_lab_core::{Graph, Rational};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::{read_text, LabError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum GraphFormat {
    Graph6,
    Edges,
}

const HEADER: &str = ">>graph6<<";

/// Standard graph6: size prefix, then the upper triangle column by column in
/// groups of six bits offset by 63.
pub fn to_graph6(g: &Graph) -> String {
    let n = g.n();
    let mut out = String::new();
    if n <= 62 {
        out.push((n as u8 + 63) as char);
    } else if n <= 258_047 {
        out.push('~');
        for shift in [12, 6, 0] {
            out.push((((n >> shift) & 63) as u8 + 63) as char);
        }
    } else {
        out.push_str("~~");
        for shift in [30, 24, 18, 12, 6, 0] {
            out.push((((n >> shift) & 63) as u8 + 63) as char);
        }
    }
    let mut acc = 0u8;
    let mut filled = 0;
    for bit in g.upper_triangle_bits() {
        acc = acc << 1 | u8::from(bit);
        filled += 1;
        if filled == 6 {
            out.push((acc + 63) as char);
            acc = 0;
            filled = 0;
        }
    }
    if filled > 0 {
        out.push(((acc << (6 - filled)) + 63) as char);
    }
    out
}

pub fn from_graph6(s: &str) -> Result<Graph> {
    let s = s.trim();
    let s = s.strip_prefix(HEADER).unwrap_or(s);
    let bytes = s.as_bytes();
    if bytes.iter().any(|&b| !(63..=126).contains(&b)) {
        return Err(LabError::Format("graph6 bytes must lie in 63..=126".into()));
    }
    let six = |b: &[u8]| {
        b.iter()
            .fold(0usize, |acc, &c| acc << 6 | (c - 63) as usize)
    };
    let (n, body) = match bytes {
        [126, 126, rest @ ..] if rest.len() >= 6 => (six(&rest[..6]), &rest[6..]),
        [126, rest @ ..] if rest.len() >= 3 => (six(&rest[..3]), &rest[3..]),
        [first, rest @ ..] if *first != 126 => ((first - 63) as usize, rest),
        _ => return Err(LabError::Format("truncated graph6 size prefix".into())),
    };
    let pairs = n * n.saturating_sub(1) / 2;
    if body.len() != pairs.div_ceil(6) {
        return Err(LabError::Format(format!(
            "graph6 body has {} bytes, {n} vertices need {}",
            body.len(),
            pairs.div_ceil(6)
        )));
    }
    let mut g = Graph::new(n);
    let mut k = 0;
    for v in 1..n {
        for u in 0..v {
            let byte = body[k / 6] - 63;
            if byte >> (5 - k % 6) & 1 == 1 {
                g.add_edge(u, v);
            }
            k += 1;
        }
    }
    Ok(g)
}

/// The edge-list record: 0-based endpoints, `u < v`, sorted.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeList {
    pub n: usize,
    pub edges: Vec<[usize; 2]>,
}

pub fn to_edge_list(g: &Graph) -> EdgeList {
    let mut edges: Vec<[usize; 2]> = g.edges().map(|(u, v)| [u, v]).collect();
    edges.sort_unstable();
    EdgeList { n: g.n(), edges }
}

pub fn from_edge_list(e: &EdgeList) -> Result<Graph> {
    for w in e.edges.windows(2) {
        if w[0] >= w[1] {
            return Err(LabError::Format(format!(
                "edges must be sorted without repeats, got {:?} before {:?}",
                w[0], w[1]
            )));
        }
    }
    if let Some(&[u, v]) = e.edges.iter().find(|&&[u, v]| u >= v || v >= e.n) {
        return Err(LabError::Format(format!(
            "edge [{u}, {v}] needs u < v < n = {}",
            e.n
        )));
    }
    Ok(Graph::from_edges(
        e.n,
        e.edges.iter().map(|&[u, v]| (u, v)),
    )?)
}

pub fn encode_graph(g: &Graph, format: GraphFormat) -> String {
    match format {
        GraphFormat::Graph6 => {
            let mut s = to_graph6(g);
            s.push('\n');
            s
        }
        GraphFormat::Edges => {
            let mut s = serde_json::to_string(&to_edge_list(g)).expect("edge lists serialize");
            s.push('\n');
            s
        }
    }
}

/// Parses either format: a JSON object is an edge list, anything else is
/// the first non-empty graph6 line. A graph6 string on 60 vertices also
/// starts with `{`, but never continues with a quote, space or `}`.
pub fn decode_graph(text: &str) -> Result<Graph> {
    let t = text.trim_start();
    let mut chars = t.chars();
    if chars.next() == Some('{')
        && chars
            .next()
            .is_none_or(|c| c == '"' || c == '}' || c.is_whitespace())
    {
        let e: EdgeList =
            serde_json::from_str(t).map_err(|e| LabError::Format(format!("edge list: {e}")))?;
        return from_edge_list(&e);
    }
    let line = t
        .lines()
        .map(str::trim)
        .find(|l| !l.is_empty())
        .ok_or_else(|| LabError::Format("empty graph file".into()))?;
    from_graph6(line)
}

pub fn read_graph(path: &Path) -> Result<Graph> {
    decode_graph(&read_text(path)?)
}

/// SHA-256 of the graph6 encoding, in hex.
pub fn fingerprint(g: &Graph) -> String {
    let digest = Sha256::digest(to_graph6(g).as_bytes());
    digest.iter().fold(String::with_capacity(64), |mut s, b| {
        let _ = write!(s, "{b:02x}");
        s
    })
}

/// Exact value of `a/b`, an integer, or a finite decimal such as `0.125`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || LabError::Usage(format!("not a rational number: {s:?}"));
    if let Some((a, b)) = s.split_once('/') {
        let a: i128 = a.trim().parse().map_err(|_| bad())?;
        let b: i128 = b.trim().parse().map_err(|_| bad())?;
        if b == 0 {
            return Err(bad());
        }
        return Ok(Rational::new(a, b));
    }
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s),
    };
    let (int, frac) = body.split_once('.').unwrap_or((body, ""));
    if int.is_empty() && frac.is_empty()
        || !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit())
        || frac.len() > 30
    {
        return Err(bad());
    }
    let digits: i128 = format!("{int}{frac}").parse().map_err(|_| bad())?;
    let r = Rational::new(digits, 10i128.pow(frac.len() as u32));
    Ok(if neg { -r } else { r })
}

pub fn format_rational(r: Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use removal_lab_core::named::parse_named;

    #[test]
    fn graph6_known_strings() {
        // reference encodings from the format description
        assert_eq!(to_graph6(&Graph::new(0)), "?");
        assert_eq!(to_graph6(&Graph::complete(2)), "A_");
        assert_eq!(to_graph6(&Graph::cycle(5)), "Dhc");
        assert_eq!(to_graph6(&Graph::complete(4)), "C~");
        assert_eq!(from_graph6(">>graph6<<Dhc").unwrap(), Graph::cycle(5));
    }

    #[test]
    fn graph6_round_trip_sizes() {
        for n in [0, 1, 2, 7, 62, 63, 64, 100] {
            let mut g = Graph::new(n);
            for v in 1..n {
                if v % 3 != 0 {
                    g.add_edge(v - 1, v);
                }
                g.add_edge(0, v);
            }
            assert_eq!(from_graph6(&to_graph6(&g)).unwrap(), g, "n = {n}");
        }
        assert!(from_graph6("D").is_err());
        assert!(from_graph6("Dh c").is_err());
    }

    #[test]
    fn edge_lists() {
        let g = parse_named("paw").unwrap();
        let text = encode_graph(&g, GraphFormat::Edges);
        assert_eq!(text.trim(), r#"{"n":4,"edges":[[0,1],[0,2],[1,2],[2,3]]}"#);
        assert_eq!(decode_graph(&text).unwrap(), g);
        assert_eq!(
            decode_graph(&encode_graph(&g, GraphFormat::Graph6)).unwrap(),
            g
        );
        assert!(decode_graph(r#"{"n":3,"edges":[[1,0]]}"#).is_err());
        assert!(decode_graph(r#"{"n":3,"edges":[[0,3]]}"#).is_err());
        assert!(decode_graph(r#"{"n":3,"edges":[[0,1],[0,1]]}"#).is_err());
        let g60 = Graph::cycle(60);
        assert!(to_graph6(&g60).starts_with('{'));
        assert_eq!(
            decode_graph(&encode_graph(&g60, GraphFormat::Graph6)).unwrap(),
            g60
        );
    }

    #[test]
    fn rationals() {
        assert_eq!(parse_rational("1/8").unwrap(), Rational::new(1, 8));
        assert_eq!(parse_rational("0.125").unwrap(), Rational::new(1, 8));
        assert_eq!(parse_rational("3").unwrap(), Rational::from_integer(3));
        assert_eq!(parse_rational(".5").unwrap(), Rational::new(1, 2));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
        assert_eq!(format_rational(Rational::new(2, 4)), "1/2");
    }
}
