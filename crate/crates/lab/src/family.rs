// SPDX-License-Identifier: Apache-2.0

//! Family files. One member per line: a graph name (`K3`, `C5`, `coP4`, `M`,
//! ...) or a graph6 string, matched as an induced subgraph; an `sg ` prefix
//! matches it as a plain subgraph instead. A line `cycles 3,7,11` or
//! `cycles levels=2` adds the sparse cycle family: `C6` induced plus
//! `C_a` as a subgraph for each length `a`. `#` starts a comment.

use std::path::Path;

use removal_lab_core::construct::{cycle_family, CycleFamily};
use removal_lab_core::named::parse_named;
use removal_lab_core::{Graph, GraphFamily, MatchMode};

use crate::format::{from_graph6, to_graph6};
use crate::{read_text, LabError, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FamilySpec {
    pub members: Vec<(Graph, MatchMode)>,
    pub cycles: Option<CycleFamily>,
    /// Text the family was read from, one member per entry.
    pub description: String,
}

impl FamilySpec {
    /// The concrete family seen by a sample of `cap` vertices: explicit
    /// members plus every cycle length up to `cap`.
    pub fn materialize(&self, cap: usize) -> Result<GraphFamily> {
        let mut all = self.members.clone();
        if let Some(c) = &self.cycles {
            all.extend(
                c.materialize(cap)?
                    .entries()
                    .iter()
                    .map(|m| (m.graph.clone(), m.mode)),
            );
        }
        Ok(GraphFamily::with_modes(all)?)
    }
}

fn parse_member(token: &str) -> Result<Graph> {
    match parse_named(token) {
        Ok(g) => Ok(g),
        Err(named) => from_graph6(token).map_err(|g6| {
            LabError::Format(format!(
                "{token:?} is neither a graph name ({named}) nor graph6 ({g6})"
            ))
        }),
    }
}

pub fn parse_family(text: &str) -> Result<FamilySpec> {
    let mut members = Vec::new();
    let mut cycles = None;
    let mut desc = Vec::new();
    for (no, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let at = |e: LabError| LabError::Format(format!("line {}: {e}", no + 1));
        if let Some(rest) = line.strip_prefix("cycles ") {
            let rest = rest.trim();
            let fam = if let Some(levels) = rest.strip_prefix("levels=") {
                let levels = levels
                    .parse()
                    .map_err(|_| at(LabError::Format(format!("bad level count {levels:?}"))))?;
                cycle_family(levels, None)
            } else {
                let seq: Vec<u64> = rest
                    .split(',')
                    .map(|s| s.trim().parse::<u64>())
                    .collect::<std::result::Result<_, _>>()
                    .map_err(|_| at(LabError::Format(format!("bad cycle lengths {rest:?}"))))?;
                cycle_family(1, Some(&seq))
            }
            .map_err(|e| at(e.into()))?;
            if cycles.replace(fam).is_some() {
                return Err(at(LabError::Format(
                    "only one cycles line is allowed".into(),
                )));
            }
            desc.push(line.to_string());
            continue;
        }
        let (mode, token) = match line.strip_prefix("sg ") {
            Some(t) => (MatchMode::Subgraph, t.trim()),
            None => (MatchMode::Induced, line),
        };
        members.push((parse_member(token).map_err(at)?, mode));
        desc.push(line.to_string());
    }
    if members.is_empty() && cycles.is_none() {
        return Err(LabError::Format("family file lists no members".into()));
    }
    Ok(FamilySpec {
        members,
        cycles,
        description: desc.join(", "),
    })
}

pub fn read_family(path: &Path) -> Result<FamilySpec> {
    parse_family(&read_text(path)?)
}

/// Family text for a list of graphs, all matched induced.
pub fn family_text(graphs: &[Graph]) -> String {
    graphs.iter().map(|g| to_graph6(g) + "\n").collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_members_and_cycles() {
        let f = parse_family("# test\nK3\nsg C5  # plain\nDhc\ncycles 3,11\n").unwrap();
        assert_eq!(f.members.len(), 3);
        assert_eq!(f.members[1], (Graph::cycle(5), MatchMode::Subgraph));
        assert_eq!(f.members[2], (Graph::cycle(5), MatchMode::Induced));
        let g = f.materialize(10).unwrap();
        // K3, C5, C5, then C6 and C3 from the cycle line; C11 is too long
        assert_eq!(g.len(), 5);
        assert_eq!(f.materialize(11).unwrap().len(), 6);
        assert_eq!(f.description, "K3, sg C5, Dhc, cycles 3,11");
    }

    #[test]
    fn rejects_bad_lines() {
        assert!(parse_family("").is_err());
        assert!(parse_family("Q9x!").is_err());
        assert!(parse_family("cycles 3,4").is_err());
        assert!(parse_family("cycles 3\ncycles 5").is_err());
        let e = parse_family("K3\nnope").unwrap_err().to_string();
        assert!(e.contains("line 2"), "{e}");
    }

    #[test]
    fn recurrence_family() {
        let f = parse_family("cycles levels=2").unwrap();
        assert_eq!(f.materialize(100).unwrap().len(), 2);
    }
}
