//! Brute-force verifier on a finite window of the K-type lattice.
//!
//! The window holds every dominant `lambda` with `|lambda_c| <= bound`. There
//! is an edge `lambda -> lambda'` for each one-step move whose transition
//! coefficient is nonzero, so the submodule generated by a K-type is its
//! forward closure. Strongly connected components are the constituents and
//! the reachability order between them is the submodule order. Nothing here
//! uses the closed-form theorems; `compare` checks those against the graph.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use petgraph::algo::tarjan_scc;
use petgraph::graph::{DiGraph, NodeIndex};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::constituents::{enumerate_constituents, region_for, ConstituentLabel, Region};
use crate::error::Result;
use crate::ktype::{dominant_window, effective_barriers, neighbors, transition, KType};
use crate::parameters::InducedRepParams;
use crate::rational::Rational;
use crate::structure::{generated_submodule, module_diagram, socle_series};

const MARGIN: i64 = 3;

/// Window radius: a fixed value or the barrier-derived default.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Lmax {
    Auto,
    Fixed(i64),
}

impl FromStr for Lmax {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        if s == "auto" {
            return Ok(Lmax::Auto);
        }
        match s.parse::<i64>() {
            Ok(v) if v >= 1 => Ok(Lmax::Fixed(v)),
            _ => Err(format!(
                "expected \"auto\" or a positive integer, got {s:?}"
            )),
        }
    }
}

impl fmt::Display for Lmax {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Lmax::Auto => f.write_str("auto"),
            Lmax::Fixed(v) => write!(f, "{v}"),
        }
    }
}

/// Largest `|position|/2` over effective barriers, plus a margin of 3.
pub fn auto_bound(params: &InducedRepParams) -> i64 {
    effective_barriers(params)
        .iter()
        .filter_map(|b| b.position.to_integer())
        .map(|p| p.abs() / 2)
        .max()
        .unwrap_or(0)
        + MARGIN
}

pub fn resolve_bound(params: &InducedRepParams, lmax: Lmax) -> i64 {
    match lmax {
        Lmax::Auto => auto_bound(params),
        Lmax::Fixed(v) => v,
    }
}

pub struct TruncatedLattice {
    pub params: InducedRepParams,
    pub bound: i64,
    pub ktypes: Vec<KType>,
    pub graph: DiGraph<(), ()>,
    pub warnings: Vec<String>,
}

impl TruncatedLattice {
    fn on_boundary(&self, lambda: &KType) -> bool {
        lambda.entries().iter().any(|x| x.abs() == self.bound)
    }
}

pub fn build(params: &InducedRepParams, bound: i64) -> TruncatedLattice {
    let mut warnings = Vec::new();
    let auto = auto_bound(params);
    if bound < auto {
        warnings.push(format!(
            "window radius {bound} is below the barrier margin {auto}; regions may be split"
        ));
    }
    let ktypes = dominant_window(params.n(), bound);
    let index: HashMap<&KType, usize> = ktypes.iter().enumerate().map(|(i, k)| (k, i)).collect();
    let mut graph = DiGraph::with_capacity(ktypes.len(), 2 * params.n() * ktypes.len());
    for _ in &ktypes {
        graph.add_node(());
    }
    for (u, lambda) in ktypes.iter().enumerate() {
        for nb in neighbors(lambda) {
            let Some(&v) = index.get(&nb.ktype) else {
                continue;
            };
            let a = transition(params, lambda, nb.coordinate, nb.direction)
                .expect("neighbor moves stay dominant");
            if !a.is_zero() {
                graph.add_edge(NodeIndex::new(u), NodeIndex::new(v), ());
            }
        }
    }
    TruncatedLattice {
        params: *params,
        bound,
        ktypes,
        graph,
        warnings,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleClass {
    /// Sorted.
    pub members: Vec<KType>,
    /// Every member touches the window boundary.
    pub boundary: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleResult {
    /// Ordered by smallest member.
    pub classes: Vec<OracleClass>,
    /// Class reachability sets, reflexive.
    pub reach: Vec<BTreeSet<usize>>,
    /// Hasse diagram of reachability among interior classes.
    pub hasse: Vec<(usize, usize)>,
    /// Interior classes by longest path to a sink; layer 0 is the bottom.
    pub layers: Vec<Vec<usize>>,
}

impl OracleResult {
    pub fn interior(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.classes.len()).filter(|&c| !self.classes[c].boundary)
    }
}

pub fn analyze(lattice: &TruncatedLattice) -> OracleResult {
    let mut comps: Vec<Vec<usize>> = tarjan_scc(&lattice.graph)
        .into_iter()
        .map(|c| {
            let mut v: Vec<usize> = c.into_iter().map(|x| x.index()).collect();
            v.sort_unstable();
            v
        })
        .collect();
    comps.sort();
    let mut class_of = vec![0usize; lattice.ktypes.len()];
    for (ci, c) in comps.iter().enumerate() {
        for &u in c {
            class_of[u] = ci;
        }
    }
    let nc = comps.len();
    let mut succ: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); nc];
    for e in lattice.graph.raw_edges() {
        let (a, b) = (class_of[e.source().index()], class_of[e.target().index()]);
        if a != b {
            succ[a].insert(b);
        }
    }
    let reach: Vec<BTreeSet<usize>> = (0..nc)
        .map(|c| {
            let mut seen = BTreeSet::from([c]);
            let mut stack = vec![c];
            while let Some(u) = stack.pop() {
                for &v in &succ[u] {
                    if seen.insert(v) {
                        stack.push(v);
                    }
                }
            }
            seen
        })
        .collect();
    let classes: Vec<OracleClass> = comps
        .iter()
        .map(|c| OracleClass {
            members: c.iter().map(|&u| lattice.ktypes[u].clone()).collect(),
            boundary: c.iter().all(|&u| lattice.on_boundary(&lattice.ktypes[u])),
        })
        .collect();
    let interior: Vec<usize> = (0..nc).filter(|&c| !classes[c].boundary).collect();
    let mut hasse = Vec::new();
    for &u in &interior {
        for &v in &interior {
            if u == v || !reach[u].contains(&v) {
                continue;
            }
            let via = interior
                .iter()
                .any(|&w| w != u && w != v && reach[u].contains(&w) && reach[w].contains(&v));
            if !via {
                hasse.push((u, v));
            }
        }
    }
    let mut depth: BTreeMap<usize, usize> = BTreeMap::new();
    // Interior classes in reverse topological order: fewer reachable classes first.
    let mut order = interior.clone();
    order.sort_by_key(|&c| reach[c].len());
    for &u in &order {
        let d = hasse
            .iter()
            .filter(|e| e.0 == u)
            .map(|e| depth[&e.1] + 1)
            .max()
            .unwrap_or(0);
        depth.insert(u, d);
    }
    let top = depth.values().copied().max().map_or(0, |m| m + 1);
    let mut layers = vec![Vec::new(); top];
    for (&c, &d) in &depth {
        layers[d].push(c);
    }
    OracleResult {
        classes,
        reach,
        hasse,
        layers,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Status {
    #[serde(rename = "PASS")]
    Pass,
    #[serde(rename = "FAIL")]
    Fail,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
        })
    }
}

/// One comparison; `witness` is set exactly when it failed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckOutcome {
    pub name: String,
    pub status: Status,
    pub witness: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub n: usize,
    pub alpha: u8,
    pub sigma: Rational,
    pub sigma_tilde: Rational,
    pub case: String,
    pub lmax: i64,
    pub ktypes: usize,
    pub classes: usize,
    pub boundary_classes: usize,
    pub status: Status,
    pub checks: Vec<CheckOutcome>,
    pub warnings: Vec<String>,
}

impl Verdict {
    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn check(&self, name: &str) -> Option<&CheckOutcome> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn first_witness(&self) -> Option<&str> {
        self.checks.iter().find_map(|c| c.witness.as_deref())
    }
}

struct Checks(Vec<CheckOutcome>);

impl Checks {
    fn push(&mut self, name: &str, witness: Option<String>) {
        self.0.push(CheckOutcome {
            name: name.to_string(),
            status: if witness.is_some() {
                Status::Fail
            } else {
                Status::Pass
            },
            witness,
        });
    }
}

fn set_text(v: &BTreeSet<ConstituentLabel>) -> String {
    let parts: Vec<String> = v.iter().map(|l| l.to_string()).collect();
    format!("{{{}}}", parts.join(", "))
}

/// Number of window K-types in the coordinate box spanned by `members`.
fn box_count(members: &[KType], window: &[KType]) -> usize {
    let n = members[0].rank();
    let lo: Vec<i64> = (1..=n)
        .map(|c| members.iter().map(|m| m.get(c)).min().unwrap())
        .collect();
    let hi: Vec<i64> = (1..=n)
        .map(|c| members.iter().map(|m| m.get(c)).max().unwrap())
        .collect();
    window
        .iter()
        .filter(|l| (1..=n).all(|c| lo[c - 1] <= l.get(c) && l.get(c) <= hi[c - 1]))
        .count()
}

/// Runs the oracle and compares it with the closed-form answers.
pub fn compare(params: &InducedRepParams, lmax: Lmax) -> Result<Verdict> {
    let bound = resolve_bound(params, lmax);
    let lattice = build(params, bound);
    let result = analyze(&lattice);
    let mut checks = Checks(Vec::new());

    if !params.is_reducible() {
        let w = (result.classes.len() != 1).then(|| {
            format!(
                "irreducible point but {} classes; second class contains {}",
                result.classes.len(),
                result.classes[1].members[0]
            )
        });
        checks.push("irreducible", w);
    } else {
        compare_reducible(params, &lattice, &result, &mut checks)?;
    }

    let status = if checks.0.iter().all(|c| c.status == Status::Pass) {
        Status::Pass
    } else {
        Status::Fail
    };
    Ok(Verdict {
        n: params.n(),
        alpha: params.alpha(),
        sigma: params.sigma(),
        sigma_tilde: params.sigma_tilde(),
        case: params.classify().to_string(),
        lmax: bound,
        ktypes: lattice.ktypes.len(),
        classes: result.classes.len(),
        boundary_classes: result.classes.iter().filter(|c| c.boundary).count(),
        status,
        checks: checks.0,
        warnings: lattice.warnings,
    })
}

fn compare_reducible(
    params: &InducedRepParams,
    lattice: &TruncatedLattice,
    result: &OracleResult,
    checks: &mut Checks,
) -> Result<()> {
    let labels = enumerate_constituents(params)?.labels;
    let regions: Vec<(ConstituentLabel, Region)> = labels
        .iter()
        .map(|l| Ok((*l, region_for(params, l)?)))
        .collect::<Result<_>>()?;

    // Partition: every window K-type in exactly one region, every interior
    // class inside one region, and every region owning exactly one interior
    // class.
    let mut witness = None;
    let mut label_of: HashMap<&KType, ConstituentLabel> = HashMap::new();
    for lambda in &lattice.ktypes {
        let hits: Vec<ConstituentLabel> = regions
            .iter()
            .filter(|(_, r)| r.contains(lambda))
            .map(|(l, _)| *l)
            .collect();
        if hits.len() != 1 {
            witness = Some(format!(
                "K-type ({lambda}) lies in {} regions {:?}",
                hits.len(),
                hits
            ));
            break;
        }
        label_of.insert(lambda, hits[0]);
    }
    let mut class_label: BTreeMap<usize, ConstituentLabel> = BTreeMap::new();
    if witness.is_none() {
        for c in result.interior() {
            let members = &result.classes[c].members;
            let l = label_of[&members[0]];
            if let Some(m) = members.iter().find(|m| label_of[m] != l) {
                witness = Some(format!(
                    "class of ({}) mixes {} and {} at ({m})",
                    members[0], l, label_of[m]
                ));
                break;
            }
            if box_count(members, &lattice.ktypes) != members.len() {
                witness = Some(format!(
                    "class of ({}) is not an order-convex box",
                    members[0]
                ));
                break;
            }
            class_label.insert(c, l);
        }
    }
    if witness.is_none() {
        let mut owners: BTreeMap<ConstituentLabel, Vec<usize>> = BTreeMap::new();
        for (&c, &l) in &class_label {
            owners.entry(l).or_default().push(c);
        }
        for l in &labels {
            match owners.get(l).map(Vec::len) {
                Some(1) => {}
                Some(k) => {
                    let c = owners[l][1];
                    witness = Some(format!(
                        "{l} splits into {k} classes; one contains ({})",
                        result.classes[c].members[0]
                    ));
                    break;
                }
                None => {
                    witness = Some(format!("{l} owns no interior class of the window"));
                    break;
                }
            }
        }
    }
    let partition_ok = witness.is_none();
    checks.push("partition", witness);
    if !partition_ok {
        let skipped = Some("skipped: partition failed".to_string());
        for name in ["diagram", "socle", "generated"] {
            checks.push(name, skipped.clone());
        }
        return Ok(());
    }

    // Diagram.
    let oracle_edges: BTreeSet<(ConstituentLabel, ConstituentLabel)> = result
        .hasse
        .iter()
        .map(|(u, v)| (class_label[u], class_label[v]))
        .collect();
    let diagram = module_diagram(params)?;
    let closed_edges: BTreeSet<_> = diagram.edges.iter().copied().collect();
    let witness = oracle_edges
        .symmetric_difference(&closed_edges)
        .next()
        .map(|e| {
            let side = if oracle_edges.contains(e) {
                "oracle only"
            } else {
                "closed form only"
            };
            format!("edge {} -> {} ({side})", e.0, e.1)
        });
    checks.push("diagram", witness);

    // Socle layers.
    let oracle_layers: Vec<BTreeSet<ConstituentLabel>> = result
        .layers
        .iter()
        .map(|l| l.iter().map(|c| class_label[c]).collect())
        .collect();
    let closed_layers: Vec<BTreeSet<ConstituentLabel>> = socle_series(params)?
        .layers
        .into_iter()
        .map(|l| l.into_iter().collect())
        .collect();
    let witness = (0..oracle_layers.len().max(closed_layers.len())).find_map(|i| {
        let empty = BTreeSet::new();
        let a = oracle_layers.get(i).unwrap_or(&empty);
        let b = closed_layers.get(i).unwrap_or(&empty);
        (a != b).then(|| {
            format!(
                "layer {}: oracle {} vs closed form {}",
                i + 1,
                set_text(a),
                set_text(b)
            )
        })
    });
    checks.push("socle", witness);

    // Generated submodules.
    let mut witness = None;
    for (&c, &l) in &class_label {
        let oracle: BTreeSet<ConstituentLabel> = result.reach[c]
            .iter()
            .filter_map(|d| class_label.get(d).copied())
            .collect();
        let closed: BTreeSet<ConstituentLabel> = generated_submodule(params, &l)?
            .members
            .into_iter()
            .collect();
        if oracle != closed {
            witness = Some(format!(
                "<{l}>: oracle {} vs closed form {}",
                set_text(&oracle),
                set_text(&closed)
            ));
            break;
        }
    }
    checks.push("generated", witness);
    Ok(())
}

/// `compare` over many points, in parallel, results in input order.
pub fn sweep(points: &[InducedRepParams], lmax: Lmax) -> Vec<Result<Verdict>> {
    points.par_iter().map(|p| compare(p, lmax)).collect()
}

/// Points `(n, alpha, sigma_tilde)` over the given ranges, in that nesting
/// order.
pub fn grid(
    ns: impl IntoIterator<Item = i64>,
    alphas: &[i64],
    sigma_tildes: &[Rational],
) -> Result<Vec<InducedRepParams>> {
    let mut out = Vec::new();
    for n in ns {
        for &a in alphas {
            for &st in sigma_tildes {
                out.push(InducedRepParams::from_sigma_tilde(n, a, st)?);
            }
        }
    }
    Ok(out)
}
