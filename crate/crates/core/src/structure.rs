//! Module diagrams, socle series and generated submodules.
//!
//! An edge `(upper, lower)` means `lower` lies in the submodule generated by
//! `upper`. Layer 1 of a socle series is the socle; sinks of the diagram are
//! the irreducible submodules and sources the irreducible quotients.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::constituents::{Branch, ConstituentLabel, ReducibleContext};
use crate::error::{Error, Result};
use crate::parameters::{CaseTag, InducedRepParams};

pub type Edge = (ConstituentLabel, ConstituentLabel);

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModuleDiagram {
    pub nodes: Vec<ConstituentLabel>,
    pub edges: Vec<Edge>,
}

impl ModuleDiagram {
    pub fn successors(&self, node: &ConstituentLabel) -> impl Iterator<Item = &ConstituentLabel> {
        let node = *node;
        self.edges.iter().filter(move |e| e.0 == node).map(|e| &e.1)
    }

    pub fn sinks(&self) -> Vec<ConstituentLabel> {
        let has_out: BTreeSet<_> = self.edges.iter().map(|e| e.0).collect();
        self.nodes
            .iter()
            .filter(|n| !has_out.contains(n))
            .copied()
            .collect()
    }

    pub fn sources(&self) -> Vec<ConstituentLabel> {
        let has_in: BTreeSet<_> = self.edges.iter().map(|e| e.1).collect();
        self.nodes
            .iter()
            .filter(|n| !has_in.contains(n))
            .copied()
            .collect()
    }

    /// Everything reachable from `start`, including `start`.
    pub fn closure(&self, start: &[ConstituentLabel]) -> BTreeSet<ConstituentLabel> {
        let mut seen: BTreeSet<ConstituentLabel> = start.iter().copied().collect();
        let mut stack: Vec<ConstituentLabel> = start.to_vec();
        while let Some(u) = stack.pop() {
            for v in self.successors(&u) {
                if seen.insert(*v) {
                    stack.push(*v);
                }
            }
        }
        seen
    }

    /// Layer `l` holds the nodes whose longest downward path has `l - 1`
    /// edges. Panics on a cycle.
    pub fn levels(&self) -> Vec<Vec<ConstituentLabel>> {
        let mut depth: BTreeMap<ConstituentLabel, usize> = BTreeMap::new();
        fn visit(
            d: &ModuleDiagram,
            u: ConstituentLabel,
            depth: &mut BTreeMap<ConstituentLabel, usize>,
            onstack: &mut BTreeSet<ConstituentLabel>,
        ) -> usize {
            if let Some(&v) = depth.get(&u) {
                return v;
            }
            assert!(onstack.insert(u), "module diagram has a cycle through {u}");
            let succ: Vec<_> = d.successors(&u).copied().collect();
            let v = succ
                .into_iter()
                .map(|w| visit(d, w, depth, onstack) + 1)
                .max()
                .unwrap_or(0);
            onstack.remove(&u);
            depth.insert(u, v);
            v
        }
        let mut onstack = BTreeSet::new();
        for &u in &self.nodes {
            visit(self, u, &mut depth, &mut onstack);
        }
        let top = depth.values().copied().max().map_or(0, |m| m + 1);
        let mut layers = vec![Vec::new(); top];
        for &u in &self.nodes {
            layers[depth[&u]].push(u);
        }
        layers
    }

    /// Drops every edge implied by a longer path.
    pub fn hasse_reduce(&mut self) {
        let all = self.edges.clone();
        self.edges = all
            .iter()
            .filter(|&&(u, v)| {
                let others = ModuleDiagram {
                    nodes: self.nodes.clone(),
                    edges: all.iter().filter(|e| **e != (u, v)).copied().collect(),
                };
                !others.closure(&[u]).contains(&v)
            })
            .copied()
            .collect();
    }

    pub fn to_dot(&self, title: &str, layers: &SocleSeries) -> String {
        let mut out = String::new();
        writeln!(out, "digraph \"{title}\" {{").unwrap();
        writeln!(out, "  node [shape=box];").unwrap();
        for layer in layers.layers.iter().rev() {
            let names: Vec<String> = layer.iter().map(|l| format!("\"{l}\";")).collect();
            writeln!(out, "  {{ rank=same; {} }}", names.join(" ")).unwrap();
        }
        for (u, v) in &self.edges {
            writeln!(out, "  \"{u}\" -> \"{v}\";").unwrap();
        }
        out.push_str("}\n");
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SocleSeries {
    pub layers: Vec<Vec<ConstituentLabel>>,
}

impl SocleSeries {
    pub fn layer_of(&self, label: &ConstituentLabel) -> Option<usize> {
        self.layers
            .iter()
            .position(|l| l.contains(label))
            .map(|p| p + 1)
    }
}

/// The diagram together with its socle layers, as emitted in JSON.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiagramReport {
    pub nodes: Vec<ConstituentLabel>,
    pub edges: Vec<Edge>,
    pub layers: Vec<Vec<ConstituentLabel>>,
}

impl DiagramReport {
    pub fn new(diagram: &ModuleDiagram, socle: &SocleSeries) -> Self {
        DiagramReport {
            nodes: diagram.nodes.clone(),
            edges: diagram.edges.clone(),
            layers: socle.layers.clone(),
        }
    }
}

/// A downward-closed set of constituents.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Submodule {
    pub members: Vec<ConstituentLabel>,
}

impl Submodule {
    pub fn contains(&self, label: &ConstituentLabel) -> bool {
        self.members.contains(label)
    }

    pub fn union(&self, other: &Submodule) -> Submodule {
        let s: BTreeSet<_> = self.members.iter().chain(&other.members).copied().collect();
        Submodule {
            members: s.into_iter().collect(),
        }
    }

    pub fn intersection(&self, other: &Submodule) -> Submodule {
        Submodule {
            members: self
                .members
                .iter()
                .filter(|m| other.contains(m))
                .copied()
                .collect(),
        }
    }
}

fn figure_successors(ctx: &ReducibleContext, l: &ConstituentLabel) -> Vec<ConstituentLabel> {
    let at = |di: i64, dj: i64| ConstituentLabel {
        family: l.family,
        i: l.i + di,
        j: l.j + dj,
    };
    match (ctx.case, ctx.branch) {
        (c, Branch::Negative) if c.is_case1() => vec![at(-1, 0), at(0, -1)],
        (c, Branch::Positive) if c.is_case1() => vec![at(1, 0), at(0, 1)],
        (c, _) if c.is_case1() => Vec::new(),
        (CaseTag::Case2a, _) => vec![at(1, 0), at(0, -1)],
        (CaseTag::Case2b, _) => vec![at(-1, 0), at(0, 1)],
        _ => unreachable!("context is reducible"),
    }
}

pub fn module_diagram(params: &InducedRepParams) -> Result<ModuleDiagram> {
    let ctx = ReducibleContext::new(params)?;
    let nodes = ctx.constituents().labels;
    let present: BTreeSet<_> = nodes.iter().copied().collect();
    let mut edges = Vec::new();
    for u in &nodes {
        for v in figure_successors(&ctx, u) {
            if present.contains(&v) {
                edges.push((*u, v));
            }
        }
    }
    edges.sort();
    let mut d = ModuleDiagram { nodes, edges };
    d.hasse_reduce();
    Ok(d)
}

/// Layer number of a label per the case theorem (1 = socle), before empty
/// layers are squeezed out.
fn theorem_layer(ctx: &ReducibleContext, l: &ConstituentLabel) -> i64 {
    let range = ctx.index_range();
    let r = range.bound.map(|b| b.1);
    match (ctx.case, ctx.branch) {
        (_, Branch::Zero) => 1,
        (c, Branch::Negative) if c.is_case1() => l.i + l.j - r.unwrap() + 1,
        (c, Branch::Positive) if c.is_case1() => ctx.k() - (l.i + l.j) + 1,
        (CaseTag::Case2a, Branch::Positive) => l.j - l.i + 2,
        (CaseTag::Case2a, Branch::Negative) => r.unwrap() - (l.i - l.j) + 1,
        (CaseTag::Case2b, Branch::Positive) => l.i - l.j + 1,
        (CaseTag::Case2b, Branch::Negative) => r.unwrap() - (l.j - l.i) + 1,
        _ => unreachable!("context is reducible"),
    }
}

pub fn socle_series(params: &InducedRepParams) -> Result<SocleSeries> {
    let ctx = ReducibleContext::new(params)?;
    let mut by_layer: BTreeMap<i64, Vec<ConstituentLabel>> = BTreeMap::new();
    for l in ctx.constituents().labels {
        by_layer.entry(theorem_layer(&ctx, &l)).or_default().push(l);
    }
    Ok(SocleSeries {
        layers: by_layer.into_values().collect(),
    })
}

/// The submodule generated by one constituent.
pub fn generated_submodule(
    params: &InducedRepParams,
    label: &ConstituentLabel,
) -> Result<Submodule> {
    let ctx = ReducibleContext::new(params)?;
    if !ctx.in_range(label) {
        return Err(Error::LabelUndefined(*label));
    }
    if ctx.region(label)?.is_empty(ctx.n as usize) {
        return Err(Error::EmptyConstituent(*label));
    }
    let set = ctx.constituents();
    if !set.contains(label) {
        return Err(Error::LabelUndefined(*label));
    }
    let (s, t) = (label.i, label.j);
    let inside = |l: &ConstituentLabel| match (ctx.case, ctx.branch) {
        (_, Branch::Zero) => l == label,
        (c, Branch::Positive) if c.is_case1() => l.i >= s && l.j >= t,
        (c, _) if c.is_case1() => l.i <= s && l.j <= t,
        (CaseTag::Case2a, _) => l.i >= s && l.j <= t,
        (CaseTag::Case2b, _) => l.i <= s && l.j >= t,
        _ => unreachable!("context is reducible"),
    };
    Ok(Submodule {
        members: set.labels.into_iter().filter(inside).collect(),
    })
}

pub fn irreducible_submodules(params: &InducedRepParams) -> Result<Vec<ConstituentLabel>> {
    Ok(module_diagram(params)?.sinks())
}

pub fn irreducible_quotients(params: &InducedRepParams) -> Result<Vec<ConstituentLabel>> {
    Ok(module_diagram(params)?.sources())
}
