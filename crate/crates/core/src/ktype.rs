//! K-types, transition coefficients and barrier hyperplanes.
//!
//! A K-type is a weakly decreasing integer tuple `lambda`; it stands for the
//! `K`-module with highest weight `2*lambda + (alpha/2)*(1,..,1)`. All the
//! geometry below is phrased in the doubled coordinates `x_j = 2*lambda_j`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::parameters::InducedRepParams;
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<i64>", into = "Vec<i64>")]
pub struct KType(Vec<i64>);

impl KType {
    pub fn new(entries: Vec<i64>) -> Result<Self> {
        if entries.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::NotDominant(format_tuple(&entries)));
        }
        Ok(KType(entries))
    }

    pub fn zero(n: usize) -> Self {
        KType(vec![0; n])
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn entries(&self) -> &[i64] {
        &self.0
    }

    /// `lambda_j` with 1-based `j`.
    pub fn get(&self, j: usize) -> i64 {
        self.0[j - 1]
    }

    /// `lambda +/- e_j`, if it is still dominant.
    pub fn shifted(&self, j: usize, dir: Direction) -> Option<KType> {
        let mut v = self.0.clone();
        v[j - 1] += dir.sign();
        let ok = (j < 2 || v[j - 2] >= v[j - 1]) && (j >= v.len() || v[j - 1] >= v[j]);
        ok.then_some(KType(v))
    }
}

impl TryFrom<Vec<i64>> for KType {
    type Error = Error;
    fn try_from(v: Vec<i64>) -> Result<Self> {
        KType::new(v)
    }
}

impl From<KType> for Vec<i64> {
    fn from(k: KType) -> Self {
        k.0
    }
}

fn format_tuple(v: &[i64]) -> String {
    let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
    parts.join(",")
}

impl fmt::Display for KType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_tuple(&self.0))
    }
}

impl FromStr for KType {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let entries = s
            .split(',')
            .map(|t| t.trim().parse::<i64>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|_| Error::ParseKType(s.to_string()))?;
        KType::new(entries)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Up,
    Down,
}

impl Direction {
    pub fn sign(self) -> i64 {
        match self {
            Direction::Up => 1,
            Direction::Down => -1,
        }
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Direction::Up => "up",
            Direction::Down => "down",
        })
    }
}

/// Barrier position for rightward movement along coordinate `j`:
/// `B+_j = -sigma_tilde + j - 1`. Defined for every integer `j`.
pub fn b_plus(params: &InducedRepParams, j: i64) -> Rational {
    -params.sigma_tilde() + (j - 1)
}

/// Barrier position for leftward movement: `B-_j = sigma_tilde - (n+alpha) + j`.
pub fn b_minus(params: &InducedRepParams, j: i64) -> Rational {
    params.sigma_tilde() - (params.n() as i64 + params.alpha() as i64) + j
}

/// `B+_j - B-_j`, independent of `j`.
pub fn gap(params: &InducedRepParams) -> Rational {
    -params.sigma() * 2 - 2
}

fn check_coord(params: &InducedRepParams, lambda: &KType, j: usize) -> Result<()> {
    if lambda.rank() != params.n() {
        return Err(Error::RankMismatch {
            expected: params.n(),
            got: lambda.rank(),
        });
    }
    if j == 0 || j > params.n() {
        return Err(Error::CoordinateOutOfRange {
            coord: j as i64,
            n: params.n(),
        });
    }
    Ok(())
}

/// The transition coefficient `A_j^+` (up) or `A_j^-` (down) out of `lambda`.
///
/// A zero coefficient blocks the move. Asking for a move that leaves the
/// dominant cone is an error, not a zero.
pub fn transition(
    params: &InducedRepParams,
    lambda: &KType,
    j: usize,
    dir: Direction,
) -> Result<Rational> {
    check_coord(params, lambda, j)?;
    if lambda.shifted(j, dir).is_none() {
        return Err(Error::NoSuchKType {
            from: lambda.to_string(),
            coord: j,
        });
    }
    Ok(transition_unchecked(params, lambda, j, dir))
}

pub(crate) fn transition_unchecked(
    params: &InducedRepParams,
    lambda: &KType,
    j: usize,
    dir: Direction,
) -> Rational {
    let x = 2 * lambda.get(j);
    match dir {
        Direction::Up => b_plus(params, j as i64) - x,
        Direction::Down => -b_minus(params, j as i64) + x,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BarrierKind {
    Plus,
    Minus,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Barrier {
    pub coordinate: i64,
    pub kind: BarrierKind,
    pub position: Rational,
    /// The hyperplane meets the even lattice `x_j in 2Z`.
    pub effective: bool,
}

impl Barrier {
    pub fn new(params: &InducedRepParams, coordinate: i64, kind: BarrierKind) -> Self {
        let position = match kind {
            BarrierKind::Plus => b_plus(params, coordinate),
            BarrierKind::Minus => b_minus(params, coordinate),
        };
        Barrier {
            coordinate,
            kind,
            position,
            effective: position.is_even_integer(),
        }
    }
}

impl fmt::Display for Barrier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = match self.kind {
            BarrierKind::Plus => '+',
            BarrierKind::Minus => '-',
        };
        write!(
            f,
            "l{}_{} at x_{} = {}",
            sign, self.coordinate, self.coordinate, self.position
        )
    }
}

/// All effective barriers on coordinates `1..=n`, ordered by coordinate then
/// kind (plus before minus).
pub fn effective_barriers(params: &InducedRepParams) -> Vec<Barrier> {
    let n = params.n() as i64;
    (1..=n)
        .flat_map(|j| {
            [BarrierKind::Plus, BarrierKind::Minus]
                .into_iter()
                .map(move |kind| Barrier::new(params, j, kind))
        })
        .filter(|b| b.effective)
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Neighbor {
    pub ktype: KType,
    pub coordinate: usize,
    pub direction: Direction,
}

/// Every dominant `lambda +/- e_j`.
pub fn neighbors(lambda: &KType) -> Vec<Neighbor> {
    let mut out = Vec::new();
    for j in 1..=lambda.rank() {
        for direction in [Direction::Up, Direction::Down] {
            if let Some(ktype) = lambda.shifted(j, direction) {
                out.push(Neighbor {
                    ktype,
                    coordinate: j,
                    direction,
                });
            }
        }
    }
    out
}

/// Every dominant `lambda` with `|lambda_c| <= radius`, in lexicographic
/// order.
pub fn dominant_window(n: usize, radius: i64) -> Vec<KType> {
    fn rec(n: usize, cap: i64, radius: i64, cur: &mut Vec<i64>, out: &mut Vec<KType>) {
        if cur.len() == n {
            out.push(KType::new(cur.clone()).expect("built weakly decreasing"));
            return;
        }
        for v in -radius..=cap {
            cur.push(v);
            rec(n, v, radius, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, radius, radius, &mut Vec::with_capacity(n), &mut out);
    out
}
