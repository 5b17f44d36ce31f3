// SPDX-License-Identifier: Apache-2.0

//! Small named graphs used throughout: `Kn`, `Cn`, `Pn`, `En` (edgeless),
//! `Ka,b`, `M`, `paw`, `claw`, and `co<name>` for complements.

use crate::error::{bail, Result};
use crate::graph::Graph;

/// The graph on `0..7` whose complement has edges `{0,1},{2,3},{4,5}`.
pub fn m_graph() -> Graph {
    let mut g = Graph::complete(7);
    g.remove_edge(0, 1);
    g.remove_edge(2, 3);
    g.remove_edge(4, 5);
    g
}

/// A triangle with a pendant vertex.
pub fn paw() -> Graph {
    Graph::from_edges(4, [(0, 1), (1, 2), (0, 2), (2, 3)]).unwrap()
}

pub fn parse_named(name: &str) -> Result<Graph> {
    let name = name.trim();
    if let Some(rest) = name.strip_prefix("co") {
        if !rest.is_empty() {
            return Ok(parse_named(rest)?.complement());
        }
    }
    match name {
        "M" => return Ok(m_graph()),
        "paw" => return Ok(paw()),
        "claw" => return Ok(Graph::complete_bipartite(1, 3)),
        _ => {}
    }
    let (head, tail) = name.split_at(name.chars().next().map_or(0, char::len_utf8));
    let num = |s: &str| -> Result<usize> {
        match s.parse::<usize>() {
            Ok(v) => Ok(v),
            Err(_) => bail!(Parameter, "unrecognized graph name {name:?}"),
        }
    };
    match head {
        "K" => match tail.split_once(',') {
            Some((a, b)) => Ok(Graph::complete_bipartite(num(a)?, num(b)?)),
            None => Ok(Graph::complete(num(tail)?)),
        },
        "C" => {
            let k = num(tail)?;
            if k < 3 {
                bail!(Parameter, "cycle needs at least 3 vertices");
            }
            Ok(Graph::cycle(k))
        }
        "P" => Ok(Graph::path(num(tail)?)),
        "E" => Ok(Graph::empty(num(tail)?)),
        _ => bail!(Parameter, "unrecognized graph name {name:?}"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names() {
        assert_eq!(parse_named("K4").unwrap(), Graph::complete(4));
        assert_eq!(
            parse_named("K2,3").unwrap(),
            Graph::complete_bipartite(2, 3)
        );
        assert_eq!(parse_named("coK3").unwrap(), Graph::empty(3));
        assert_eq!(parse_named("M").unwrap().edge_count(), 18);
        assert!(parse_named("C2").is_err());
        assert!(parse_named("X5").is_err());
    }
}
