//! Irreducible constituents of `I^alpha(sigma)` as regions of the K-type
//! lattice.
//!
//! At a reducible point every constituent is a set of K-types cut out by
//! per-coordinate bounds on `x_c = 2*lambda_c`. Family `R` labels the
//! constituents when `n + alpha` is odd, family `L` when it is even. Bounds may
//! reference coordinates outside `1..=n`; those use the conventions
//! `x_c = +inf` for `c <= 0` and `x_c = -inf` for `c > n`.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::ktype::{b_minus, b_plus, KType};
use crate::parameters::{CaseTag, InducedRepParams};
use crate::rational::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    R,
    L,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ConstituentLabel {
    pub family: Family,
    pub i: i64,
    pub j: i64,
}

impl ConstituentLabel {
    pub fn r(i: i64, j: i64) -> Self {
        ConstituentLabel {
            family: Family::R,
            i,
            j,
        }
    }

    pub fn l(i: i64, j: i64) -> Self {
        ConstituentLabel {
            family: Family::L,
            i,
            j,
        }
    }
}

impl fmt::Display for ConstituentLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let fam = match self.family {
            Family::R => 'R',
            Family::L => 'L',
        };
        write!(f, "{}({},{})", fam, self.i, self.j)
    }
}

impl FromStr for ConstituentLabel {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let bad = || format!("malformed constituent label {s:?} (expected R(i,j) or L(i,j))");
        let t = s.trim();
        let family = match t.chars().next() {
            Some('R') => Family::R,
            Some('L') => Family::L,
            _ => return Err(bad()),
        };
        let inner = t[1..]
            .strip_prefix('(')
            .and_then(|r| r.strip_suffix(')'))
            .ok_or_else(bad)?;
        let (a, b) = inner.split_once(',').ok_or_else(bad)?;
        let i = a.trim().parse().map_err(|_| bad())?;
        let j = b.trim().parse().map_err(|_| bad())?;
        Ok(ConstituentLabel { family, i, j })
    }
}

impl Serialize for ConstituentLabel {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for ConstituentLabel {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        String::deserialize(deserializer)?
            .parse()
            .map_err(serde::de::Error::custom)
    }
}

/// An extended-integer bound on some `x_c`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Bound {
    NegInf,
    Finite(i64),
    PosInf,
}

impl fmt::Display for Bound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Bound::NegInf => f.write_str("-inf"),
            Bound::Finite(v) => write!(f, "{v}"),
            Bound::PosInf => f.write_str("+inf"),
        }
    }
}

impl Serialize for Bound {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Bound::Finite(v) => serializer.serialize_i64(*v),
            other => serializer.collect_str(other),
        }
    }
}

impl<'de> Deserialize<'de> for Bound {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Int(i64),
            Str(String),
        }
        match Raw::deserialize(deserializer)? {
            Raw::Int(v) => Ok(Bound::Finite(v)),
            Raw::Str(s) if s == "-inf" => Ok(Bound::NegInf),
            Raw::Str(s) if s == "+inf" => Ok(Bound::PosInf),
            Raw::Str(s) => Err(serde::de::Error::custom(format!("bad bound {s:?}"))),
        }
    }
}

/// `lo <= x_coord <= hi`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Constraint {
    pub coord: i64,
    pub lo: Bound,
    pub hi: Bound,
}

fn extended_x(lambda: &KType, c: i64) -> Bound {
    if c <= 0 {
        Bound::PosInf
    } else if c as usize > lambda.rank() {
        Bound::NegInf
    } else {
        Bound::Finite(2 * lambda.get(c as usize))
    }
}

fn even_floor(v: i64) -> i64 {
    2 * v.div_euclid(2)
}

/// A set of K-types given by per-coordinate bounds, intersected with the
/// dominant cone. Constraints are merged per coordinate and sorted.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Region {
    constraints: Vec<Constraint>,
}

impl Region {
    /// Merges raw constraints on rank-`n` K-types, dropping those that the
    /// extended-coordinate convention satisfies automatically.
    pub fn new(n: usize, raw: impl IntoIterator<Item = Constraint>) -> Self {
        let mut merged: BTreeMap<i64, (Bound, Bound)> = BTreeMap::new();
        for c in raw {
            let e = merged
                .entry(c.coord)
                .or_insert((Bound::NegInf, Bound::PosInf));
            e.0 = e.0.max(c.lo);
            e.1 = e.1.min(c.hi);
        }
        let constraints = merged
            .into_iter()
            .filter(|&(coord, (lo, hi))| {
                if coord <= 0 {
                    hi != Bound::PosInf
                } else if coord as usize > n {
                    lo != Bound::NegInf
                } else {
                    lo != Bound::NegInf || hi != Bound::PosInf
                }
            })
            .map(|(coord, (lo, hi))| Constraint { coord, lo, hi })
            .collect();
        Region { constraints }
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    pub fn contains(&self, lambda: &KType) -> bool {
        self.constraints.iter().all(|c| {
            let x = extended_x(lambda, c.coord);
            c.lo <= x && x <= c.hi
        })
    }

    /// Per-coordinate `(lo, hi)` for `c in 1..=n`, or `None` when a
    /// constraint on an extended coordinate can never hold.
    fn box_bounds(&self, n: usize) -> Option<Vec<(Bound, Bound)>> {
        let mut bounds = vec![(Bound::NegInf, Bound::PosInf); n + 1];
        for c in &self.constraints {
            if c.coord <= 0 {
                if c.hi != Bound::PosInf {
                    return None;
                }
            } else if c.coord as usize > n {
                if c.lo != Bound::NegInf {
                    return None;
                }
            } else {
                let b = &mut bounds[c.coord as usize];
                b.0 = b.0.max(c.lo);
                b.1 = b.1.min(c.hi);
            }
        }
        Some(bounds)
    }

    /// True iff no dominant K-type of rank `n` lies in the region.
    ///
    /// Greedy: give each coordinate in turn the largest even value allowed by
    /// its upper bound and the previous coordinate. Larger early values never
    /// hurt later coordinates, so this fails only if the region is empty.
    pub fn is_empty(&self, n: usize) -> bool {
        let Some(bounds) = self.box_bounds(n) else {
            return true;
        };
        let mut prev = Bound::PosInf;
        for &(lo, hi) in &bounds[1..] {
            let x = match hi.min(prev) {
                Bound::PosInf => Bound::PosInf,
                Bound::Finite(v) => Bound::Finite(even_floor(v)),
                Bound::NegInf => return true,
            };
            if x < lo {
                return true;
            }
            prev = x;
        }
        false
    }

    /// All K-types of the region when it is finite (`None` when infinite).
    pub fn points(&self, n: usize) -> Option<Vec<KType>> {
        let Some(bounds) = self.box_bounds(n) else {
            return Some(Vec::new());
        };
        // Dominance propagates upper bounds forward and lower bounds backward.
        let mut hi = vec![Bound::PosInf; n + 1];
        let mut lo = vec![Bound::NegInf; n + 2];
        for c in 1..=n {
            hi[c] = if c == 1 {
                bounds[c].1
            } else {
                bounds[c].1.min(hi[c - 1])
            };
        }
        for c in (1..=n).rev() {
            lo[c] = if c == n {
                bounds[c].0
            } else {
                bounds[c].0.max(lo[c + 1])
            };
        }
        let (Bound::Finite(top), Bound::Finite(_)) = (hi[1], lo[n]) else {
            return None;
        };
        let mut out = Vec::new();
        let mut cur = Vec::with_capacity(n);
        fn rec(
            c: usize,
            n: usize,
            cap: i64,
            lo: &[Bound],
            hi: &[Bound],
            cur: &mut Vec<i64>,
            out: &mut Vec<KType>,
        ) {
            if c > n {
                out.push(KType::new(cur.clone()).expect("built weakly decreasing"));
                return;
            }
            let upper = match hi[c] {
                Bound::Finite(h) => cap.min(h.div_euclid(2)),
                _ => cap,
            };
            let lower = match lo[c] {
                Bound::Finite(l) => (l + 1).div_euclid(2),
                _ => unreachable!("lower bounds are finite once lo[n] is"),
            };
            let mut v = upper;
            while v >= lower {
                cur.push(v);
                rec(c + 1, n, v, lo, hi, cur, out);
                cur.pop();
                v -= 1;
            }
        }
        rec(1, n, top.div_euclid(2), &lo, &hi, &mut cur, &mut out);
        out.sort();
        Some(out)
    }
}

impl fmt::Display for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .constraints
            .iter()
            .map(|c| {
                let x = format!("2*lambda_{}", c.coord);
                match (c.lo, c.hi) {
                    (Bound::Finite(a), Bound::Finite(b)) if a == b => format!("{x} = {a}"),
                    (Bound::NegInf, hi) => format!("{x} <= {hi}"),
                    (lo, Bound::PosInf) => format!("{x} >= {lo}"),
                    (lo, hi) => format!("{lo} <= {x} <= {hi}"),
                }
            })
            .collect();
        if parts.is_empty() {
            f.write_str("{all dominant lambda}")
        } else {
            write!(f, "{{{}}}", parts.join(", "))
        }
    }
}

/// Sign branch of `sigma` at a reducible point. In Case 1 `sigma` is an
/// integer; in Case 2 it is a half-integer, so `Zero` never occurs there.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Branch {
    Negative,
    Zero,
    Positive,
}

/// Data shared by every closed-form computation at a reducible point.
#[derive(Debug, Clone, Copy)]
pub(crate) struct ReducibleContext {
    pub params: InducedRepParams,
    pub case: CaseTag,
    pub branch: Branch,
    pub n: i64,
    pub n0: i64,
    pub n1: i64,
}

impl ReducibleContext {
    pub fn new(params: &InducedRepParams) -> Result<Self> {
        let case = params.classify();
        if case == CaseTag::Irreducible {
            return Err(Error::Irreducible(params.sigma_tilde().to_string()));
        }
        let d = params.derived();
        let branch = match params.sigma().cmp(&Rational::ZERO) {
            Ordering::Less => Branch::Negative,
            Ordering::Equal => Branch::Zero,
            Ordering::Greater => Branch::Positive,
        };
        Ok(ReducibleContext {
            params: *params,
            case,
            branch,
            n: params.n() as i64,
            n0: d.n0,
            n1: d.n1,
        })
    }

    pub fn family(&self) -> Family {
        if self.case.is_case1() {
            Family::R
        } else {
            Family::L
        }
    }

    /// Case 1 only: the top index sum `k` (`n0/2` or `(n1+1)/2`).
    pub fn k(&self) -> i64 {
        match self.case {
            CaseTag::Case1a => self.n0 / 2,
            _ => (self.n1 + 1) / 2,
        }
    }

    pub fn sigma(&self) -> Rational {
        self.params.sigma()
    }

    /// `sigma` as an integer (Case 1) or `sigma - 1/2` style offsets
    /// (Case 2). Panics on a non-integral result, which would be a bug.
    pub fn int(&self, r: Rational) -> i64 {
        r.to_integer()
            .unwrap_or_else(|| panic!("expected an integer index, got {r}"))
    }

    pub fn in_range(&self, label: &ConstituentLabel) -> bool {
        if label.family != self.family() || label.i < 0 || label.j < 0 {
            return false;
        }
        if self.case.is_case1() {
            label.i + label.j <= self.k()
        } else {
            label.i <= (self.n1 + 1) / 2 && label.j <= self.n0 / 2
        }
    }

    /// Every label defined for the case, lexicographic in `(i, j)`.
    pub fn all_labels(&self) -> Vec<ConstituentLabel> {
        let fam = self.family();
        let (imax, jmax) = if self.case.is_case1() {
            (self.k(), self.k())
        } else {
            ((self.n1 + 1) / 2, self.n0 / 2)
        };
        let mut out = Vec::new();
        for i in 0..=imax {
            for j in 0..=jmax {
                let l = ConstituentLabel { family: fam, i, j };
                if self.in_range(&l) {
                    out.push(l);
                }
            }
        }
        out
    }

    fn bp(&self, j: i64) -> i64 {
        self.int(b_plus(&self.params, j))
    }

    fn bm(&self, j: i64) -> i64 {
        self.int(b_minus(&self.params, j))
    }

    pub fn region(&self, label: &ConstituentLabel) -> Result<Region> {
        if !self.in_range(label) {
            return Err(Error::LabelUndefined(*label));
        }
        let (i, j) = (label.i, label.j);
        let (n0, n1) = (self.n0, self.n1);
        let mut raw = Vec::new();
        // x_upper >= b >= x_lower
        let mut between = |upper: i64, b: i64, lower: i64| {
            raw.push(Constraint {
                coord: upper,
                lo: Bound::Finite(b),
                hi: Bound::PosInf,
            });
            raw.push(Constraint {
                coord: lower,
                lo: Bound::NegInf,
                hi: Bound::Finite(b),
            });
        };
        let top = i + j == self.k();
        match (self.case, self.branch) {
            (CaseTag::Case1a, Branch::Negative) => {
                between(2 * i, self.bp(2 * i + 2), 2 * i + 2);
                between(n0 - 2 * j, self.bm(n0 - 2 * j), n0 - 2 * j + 2);
            }
            // At sigma = 0 with i + j maximal the two conditions coincide.
            (CaseTag::Case1a, Branch::Zero) if top => {
                between(2 * i, self.bm(2 * i), 2 * i + 2);
            }
            (CaseTag::Case1a, _) => {
                between(2 * i, self.bm(2 * i), 2 * i + 2);
                between(n0 - 2 * j, self.bp(n0 - 2 * j + 2), n0 - 2 * j + 2);
            }
            (CaseTag::Case1b, Branch::Negative) => {
                between(2 * i - 1, self.bp(2 * i + 1), 2 * i + 1);
                between(n1 - 2 * j, self.bm(n1 - 2 * j), n1 - 2 * j + 2);
            }
            (CaseTag::Case1b, Branch::Zero) if top => {
                between(2 * i - 1, self.bm(2 * i - 1), 2 * i + 1);
            }
            (CaseTag::Case1b, _) => {
                between(2 * i - 1, self.bm(2 * i - 1), 2 * i + 1);
                between(n1 - 2 * j, self.bp(n1 - 2 * j + 2), n1 - 2 * j + 2);
            }
            (CaseTag::Case2a, _) => {
                between(2 * i - 1, self.bm(2 * i - 1), 2 * i + 1);
                between(2 * j, self.bp(2 * j + 2), 2 * j + 2);
            }
            (CaseTag::Case2b, _) => {
                // Odd coordinates are cut by the plus barriers here.
                between(2 * i - 1, self.bp(2 * i + 1), 2 * i + 1);
                between(2 * j, self.bm(2 * j), 2 * j + 2);
            }
            (CaseTag::Irreducible, _) => unreachable!("context is reducible"),
        }
        Ok(Region::new(self.n as usize, raw))
    }

    pub fn index_range(&self) -> IndexRange {
        let half = Rational::HALF;
        let sigma = self.sigma();
        match (self.case, self.branch) {
            (c, b) if c.is_case1() => {
                let k = self.k();
                let s = self.int(sigma);
                match b {
                    Branch::Negative => {
                        let r1 = (k + s).max(0);
                        IndexRange::new(Statistic::IPlusJ, r1, k, Some((BoundName::R1, r1)))
                    }
                    Branch::Zero => IndexRange::new(Statistic::IPlusJ, k, k, None),
                    Branch::Positive => {
                        let r2 = (k - s).max(0);
                        IndexRange::new(Statistic::IPlusJ, r2, k, Some((BoundName::R2, r2)))
                    }
                }
            }
            (CaseTag::Case2a, Branch::Positive) => {
                let r1 = self.int(sigma - half).min(self.n / 2);
                IndexRange::new(Statistic::JMinusI, -1, r1, Some((BoundName::R1, r1)))
            }
            (CaseTag::Case2a, _) => {
                let r2 = self.int(-sigma + half).min((self.n + 1) / 2);
                IndexRange::new(Statistic::IMinusJ, 0, r2, Some((BoundName::R2, r2)))
            }
            (CaseTag::Case2b, Branch::Positive) => {
                let r2 = self.int(sigma + half).min((self.n + 1) / 2);
                IndexRange::new(Statistic::IMinusJ, 0, r2, Some((BoundName::R2, r2)))
            }
            (CaseTag::Case2b, _) => {
                let r1 = self.int(-sigma - half).min(self.n / 2);
                IndexRange::new(Statistic::JMinusI, -1, r1, Some((BoundName::R1, r1)))
            }
            _ => unreachable!("context is reducible"),
        }
    }

    pub fn constituents(&self) -> ConstituentSet {
        let range = self.index_range();
        let labels = self
            .all_labels()
            .into_iter()
            .filter(|l| range.admits(l))
            .filter(|l| {
                !self
                    .region(l)
                    .expect("label in range")
                    .is_empty(self.n as usize)
            })
            .collect();
        ConstituentSet { labels, range }
    }
}

/// The grading statistic a case theorem uses to index its constituents.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Statistic {
    #[serde(rename = "i+j")]
    IPlusJ,
    #[serde(rename = "i-j")]
    IMinusJ,
    #[serde(rename = "j-i")]
    JMinusI,
}

impl Statistic {
    pub fn eval(self, label: &ConstituentLabel) -> i64 {
        match self {
            Statistic::IPlusJ => label.i + label.j,
            Statistic::IMinusJ => label.i - label.j,
            Statistic::JMinusI => label.j - label.i,
        }
    }
}

impl fmt::Display for Statistic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Statistic::IPlusJ => "i+j",
            Statistic::IMinusJ => "i-j",
            Statistic::JMinusI => "j-i",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundName {
    R1,
    R2,
}

/// `lo <= statistic(i, j) <= hi`, with the named bound `r1`/`r2` when the
/// theorem defines one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndexRange {
    pub statistic: Statistic,
    pub lo: i64,
    pub hi: i64,
    pub bound: Option<(BoundName, i64)>,
}

impl IndexRange {
    fn new(statistic: Statistic, lo: i64, hi: i64, bound: Option<(BoundName, i64)>) -> Self {
        IndexRange {
            statistic,
            lo,
            hi,
            bound,
        }
    }

    pub fn admits(&self, label: &ConstituentLabel) -> bool {
        (self.lo..=self.hi).contains(&self.statistic.eval(label))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstituentSet {
    pub labels: Vec<ConstituentLabel>,
    pub range: IndexRange,
}

impl ConstituentSet {
    pub fn contains(&self, label: &ConstituentLabel) -> bool {
        self.labels.contains(label)
    }
}

pub fn region_for(params: &InducedRepParams, label: &ConstituentLabel) -> Result<Region> {
    ReducibleContext::new(params)?.region(label)
}

pub fn is_empty(params: &InducedRepParams, label: &ConstituentLabel) -> Result<bool> {
    Ok(region_for(params, label)?.is_empty(params.n()))
}

pub fn enumerate_constituents(params: &InducedRepParams) -> Result<ConstituentSet> {
    Ok(ReducibleContext::new(params)?.constituents())
}

/// The constituent whose region contains `lambda`.
pub fn label_of(params: &InducedRepParams, lambda: &KType) -> Result<ConstituentLabel> {
    let ctx = ReducibleContext::new(params)?;
    if lambda.rank() != params.n() {
        return Err(Error::RankMismatch {
            expected: params.n(),
            got: lambda.rank(),
        });
    }
    let set = ctx.constituents();
    let label = set
        .labels
        .iter()
        .find(|l| ctx.region(l).expect("enumerated").contains(lambda))
        .copied()
        .unwrap_or_else(|| panic!("constituent regions cover every K-type, missed {lambda}"));
    Ok(label)
}
