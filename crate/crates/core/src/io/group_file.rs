//! Group files: GMT gene sets and two-column edge lists. Members are
//! resolved against the matrix row names (case-sensitive, order-preserving);
//! unresolvable members or endpoints are dropped and tallied.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::groups::GroupStructure;

/// Groups parsed from a GMT file, with bookkeeping about what was dropped.
#[derive(Debug, Clone)]
pub struct GmtGroups {
    pub structure: GroupStructure,
    /// One name per kept group, in file order.
    pub names: Vec<String>,
    /// Pathways dropped because they exceeded `max_group_size` or had no
    /// member present in the matrix.
    pub dropped_groups: usize,
    /// Members not found among the row names.
    pub unmatched_members: usize,
}

/// Edge groups parsed from an edge-list file.
#[derive(Debug, Clone)]
pub struct EdgeListGroups {
    pub structure: GroupStructure,
    /// One `a|b` label per unique edge, endpoint names in index order.
    pub names: Vec<String>,
    /// Edges dropped for unresolvable endpoints or self-loops.
    pub dropped_edges: usize,
}

fn name_index(row_names: &[String]) -> HashMap<&str, usize> {
    row_names
        .iter()
        .enumerate()
        .map(|(i, n)| (n.as_str(), i))
        .collect()
}

/// Parses a GMT file (per line: name, description, then member names, all
/// tab-separated) into groups over `row_names`. Pathways with more than
/// `max_group_size` listed members are skipped before intersection.
pub fn read_gmt(
    path: impl AsRef<Path>,
    row_names: &[String],
    max_group_size: Option<usize>,
) -> Result<GmtGroups> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)?;
    let index = name_index(row_names);

    let mut groups = Vec::new();
    let mut names = Vec::new();
    let mut dropped_groups = 0usize;
    let mut unmatched_members = 0usize;

    for (idx, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let mut fields = line.split('\t');
        let name = fields.next().map(str::trim).unwrap_or_default();
        let description = fields.next();
        if name.is_empty() || description.is_none() {
            return Err(Error::Parse {
                path: path.display().to_string(),
                line: idx + 1,
                msg: "GMT line needs a name, a description, and members".to_string(),
            });
        }
        let members: Vec<&str> = fields.map(str::trim).filter(|m| !m.is_empty()).collect();
        if let Some(max) = max_group_size {
            if members.len() > max {
                dropped_groups += 1;
                continue;
            }
        }
        let mut group = Vec::new();
        for member in members {
            match index.get(member) {
                Some(&i) => {
                    if !group.contains(&i) {
                        group.push(i);
                    }
                }
                None => unmatched_members += 1,
            }
        }
        if group.is_empty() {
            dropped_groups += 1;
            continue;
        }
        groups.push(group);
        names.push(name.to_string());
    }

    let structure = GroupStructure::with_unit_weights(row_names.len(), groups)?;
    Ok(GmtGroups {
        structure,
        names,
        dropped_groups,
        unmatched_members,
    })
}

/// Writes groups as a GMT file, mapping indices back to `row_names`.
pub fn write_gmt(
    path: impl AsRef<Path>,
    gs: &GroupStructure,
    row_names: &[String],
    group_names: &[String],
) -> Result<()> {
    if row_names.len() != gs.dimension() {
        return Err(Error::DimensionMismatch {
            what: "row names",
            expected: gs.dimension(),
            got: row_names.len(),
        });
    }
    if group_names.len() != gs.group_count() {
        return Err(Error::DimensionMismatch {
            what: "group names",
            expected: gs.group_count(),
            got: group_names.len(),
        });
    }
    let mut out = String::new();
    for (group, name) in gs.groups().iter().zip(group_names) {
        out.push_str(name);
        out.push_str("\tna");
        for &i in group {
            let _ = write!(out, "\t{}", row_names[i]);
        }
        out.push('\n');
    }
    std::fs::write(path, out)?;
    Ok(())
}

/// Parses a whitespace/tab-separated edge list (two name columns per line,
/// extra columns ignored, `#` comment lines skipped) into one group per
/// unique undirected edge.
pub fn read_edge_list(path: impl AsRef<Path>, row_names: &[String]) -> Result<EdgeListGroups> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)?;
    let index = name_index(row_names);

    let mut seen = std::collections::HashSet::new();
    let mut edges = Vec::new();
    let mut names = Vec::new();
    let mut dropped_edges = 0usize;

    for (idx, line) in text.lines().enumerate() {
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let mut fields = trimmed.split_whitespace();
        let (a, b) = match (fields.next(), fields.next()) {
            (Some(a), Some(b)) => (a, b),
            _ => {
                return Err(Error::Parse {
                    path: path.display().to_string(),
                    line: idx + 1,
                    msg: "edge line needs two endpoint names".to_string(),
                })
            }
        };
        match (index.get(a), index.get(b)) {
            (Some(&i), Some(&j)) if i != j => {
                let key = (i.min(j), i.max(j));
                if seen.insert(key) {
                    edges.push(key);
                    names.push(format!("{}|{}", row_names[key.0], row_names[key.1]));
                }
            }
            // unresolvable endpoint or self-loop
            _ => dropped_edges += 1,
        }
    }

    let structure = GroupStructure::from_edges(row_names.len(), &edges)?;
    Ok(EdgeListGroups {
        structure,
        names,
        dropped_edges,
    })
}
