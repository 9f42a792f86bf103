//! Unitarity: the complementary series of the full module and per-constituent
//! verdicts at reducible points.
//!
//! The invariant form on `I^alpha(sigma)` is diagonal on K-types with
//! constants `c_lambda`, and `N(lambda, j) = -c_lambda / c_(lambda + e_j)`.
//! The full module is unitarizable iff every `N` is negative.

use serde::{Deserialize, Serialize};

use crate::constituents::{Branch, ConstituentLabel, ReducibleContext};
use crate::error::{Error, Result};
use crate::ktype::{dominant_window as window, Direction, KType};
use crate::parameters::{CaseTag, InducedRepParams};
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UnitarityVerdict {
    pub unitarizable: bool,
    /// Identifier of the clause that decided the verdict.
    pub reason: String,
}

impl UnitarityVerdict {
    fn new(unitarizable: bool, reason: impl Into<String>) -> Self {
        UnitarityVerdict {
            unitarizable,
            reason: reason.into(),
        }
    }
}

/// `xi = rho_n + alpha/2 + 2*lambda_j - j + 1`.
pub fn xi(params: &InducedRepParams, lambda: &KType, j: usize) -> Rational {
    params.rho() + Rational::new(params.alpha() as i64, 2) + 2 * lambda.get(j) - j as i64 + 1
}

/// `N(lambda, j) = (-sigma - xi) / (-sigma + xi)` for real `sigma`.
pub fn n_ratio(params: &InducedRepParams, lambda: &KType, j: usize) -> Result<Rational> {
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
    let x = xi(params, lambda, j);
    let s = params.sigma();
    let den = -s + x;
    if den.is_zero() {
        return Err(Error::DegenerateForm);
    }
    Ok((-s - x) / den)
}

/// Unitarizability of the whole module on the real axis: `n + alpha` even
/// and `|sigma| < 1/2`, or `sigma = 0`.
pub fn complementary_series(params: &InducedRepParams) -> bool {
    let s = params.sigma();
    s.is_zero() || (!params.n_plus_alpha_odd() && s.abs() < Rational::HALF)
}

/// A pair `(lambda, j)` inside the window with `lambda + e_j` dominant and
/// `N(lambda, j)` not negative, if one exists. Degenerate pairs count as
/// violations with ratio `None`.
pub fn form_violation(
    params: &InducedRepParams,
    radius: i64,
) -> Option<(KType, usize, Option<Rational>)> {
    for lambda in window(params.n(), radius) {
        for j in 1..=params.n() {
            if lambda.shifted(j, Direction::Up).is_none() {
                continue;
            }
            match n_ratio(params, &lambda, j) {
                Ok(r) if r < Rational::ZERO => {}
                Ok(r) => return Some((lambda, j, Some(r))),
                Err(_) => return Some((lambda, j, None)),
            }
        }
    }
    None
}

pub fn constituent_unitarizable(
    params: &InducedRepParams,
    label: &ConstituentLabel,
) -> Result<UnitarityVerdict> {
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
    let (i, j) = (label.i, label.j);
    let sigma = ctx.sigma();
    let n = ctx.n;
    let case = ctx.case.as_str();
    let bound = set.range.bound.map(|b| b.1);
    let within = |lo: Rational, hi: Rational| lo <= sigma && sigma <= hi;
    let half = Rational::HALF;

    let verdict = match (ctx.case, ctx.branch) {
        (c, Branch::Zero) if c.is_case1() => {
            UnitarityVerdict::new(true, format!("{case}-sigma=0-direct-sum"))
        }
        (CaseTag::Case1b, _)
            if n % 2 == 1
                && matches!(ctx.params.alpha(), 0 | 2)
                && ((i, j) == (ctx.k(), 0) || (i, j) == (0, ctx.k())) =>
        {
            UnitarityVerdict::new(true, "Case1b-exceptional-(n odd,alpha in {0,2})")
        }
        (c, Branch::Negative) if c.is_case1() => {
            let ok =
                within(Rational::integer(-ctx.k()), Rational::integer(-1)) && Some(i + j) == bound;
            UnitarityVerdict::new(ok, format!("{case}-sigma<=-1-(i+j=r1)"))
        }
        (c, _) if c.is_case1() => {
            let ok =
                within(Rational::integer(1), Rational::integer(ctx.k())) && Some(i + j) == bound;
            UnitarityVerdict::new(ok, format!("{case}-sigma>=1-(i+j=r2)"))
        }
        (CaseTag::Case2a, Branch::Positive) => {
            if i == j + 1 {
                UnitarityVerdict::new(true, "Case2a-sigma>=1/2-(i=j+1)")
            } else {
                let ok = within(half, half + n / 2) && Some(j - i) == bound;
                UnitarityVerdict::new(ok, "Case2a-sigma>=1/2-(j-i=r1)")
            }
        }
        (CaseTag::Case2a, _) => {
            if i == j {
                UnitarityVerdict::new(true, "Case2a-sigma<=-1/2-(i=j)")
            } else {
                let ok = within(half - (n + 1) / 2, -half) && Some(i - j) == bound;
                UnitarityVerdict::new(ok, "Case2a-sigma<=-1/2-(i-j=r2)")
            }
        }
        (CaseTag::Case2b, Branch::Positive) => {
            if i == j {
                UnitarityVerdict::new(true, "Case2b-sigma>=1/2-(i=j)")
            } else {
                let ok =
                    within(half, Rational::integer((n + 1) / 2) - half) && Some(i - j) == bound;
                UnitarityVerdict::new(ok, "Case2b-sigma>=1/2-(i-j=r2)")
            }
        }
        (CaseTag::Case2b, _) => {
            if i == j + 1 {
                UnitarityVerdict::new(true, "Case2b-sigma<=-1/2-(i=j+1)")
            } else {
                let ok = within(-half - n / 2, -half) && Some(j - i) == bound;
                UnitarityVerdict::new(ok, "Case2b-sigma<=-1/2-(j-i=r1)")
            }
        }
        _ => unreachable!("context is reducible"),
    };
    Ok(verdict)
}

/// Non-authoritative diagnostic: signs of `N(lambda, j)` for pairs
/// `lambda, lambda + e_j` that both lie in the constituent's region inside a
/// window. The full-module form need not restrict to the subquotient's form,
/// so a mixed sign here proves nothing.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SignProbe {
    pub label: ConstituentLabel,
    pub advisory: bool,
    pub pairs: usize,
    pub negative: usize,
    pub positive: usize,
    pub degenerate: usize,
}

pub fn sign_probe(
    params: &InducedRepParams,
    label: &ConstituentLabel,
    radius: i64,
) -> Result<SignProbe> {
    let region = ReducibleContext::new(params)?.region(label)?;
    let mut probe = SignProbe {
        label: *label,
        advisory: true,
        pairs: 0,
        negative: 0,
        positive: 0,
        degenerate: 0,
    };
    for lambda in window(params.n(), radius)
        .into_iter()
        .filter(|l| region.contains(l))
    {
        for j in 1..=params.n() {
            let Some(up) = lambda.shifted(j, Direction::Up) else {
                continue;
            };
            if !region.contains(&up) {
                continue;
            }
            probe.pairs += 1;
            match n_ratio(params, &lambda, j) {
                Ok(r) if r < Rational::ZERO => probe.negative += 1,
                Ok(r) if r > Rational::ZERO => probe.positive += 1,
                _ => probe.degenerate += 1,
            }
        }
    }
    Ok(probe)
}
