//! Images of the theta lift of the trivial representation of `O(p,q)` inside
//! `I^alpha(sigma)`, and the check that these account for the socle, the
//! unitary-axis decomposition and reducibility.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::constituents::{enumerate_constituents, ConstituentLabel};
use crate::error::{Error, Result};
use crate::parameters::{CaseTag, InducedRepParams};
use crate::rational::Rational;
use crate::structure::{generated_submodule, module_diagram};
use crate::unitarity::constituent_unitarizable;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct OrthogonalSignature {
    pub p: i64,
    pub q: i64,
}

impl OrthogonalSignature {
    pub fn new(p: i64, q: i64) -> Result<Self> {
        if p < 0 || q < 0 {
            return Err(Error::NegativeSignature { p, q });
        }
        Ok(OrthogonalSignature { p, q })
    }

    pub fn m(&self) -> i64 {
        self.p + self.q
    }
}

impl std::fmt::Display for OrthogonalSignature {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({},{})", self.p, self.q)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum OmegaShape {
    SingleConstituent {
        label: ConstituentLabel,
    },
    Generated {
        generator: ConstituentLabel,
        members: Vec<ConstituentLabel>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OmegaImage {
    pub signature: OrthogonalSignature,
    pub target: InducedRepParams,
    pub shape: OmegaShape,
}

impl OmegaImage {
    pub fn generator(&self) -> ConstituentLabel {
        match &self.shape {
            OmegaShape::SingleConstituent { label } => *label,
            OmegaShape::Generated { generator, .. } => *generator,
        }
    }

    pub fn members(&self) -> Vec<ConstituentLabel> {
        match &self.shape {
            OmegaShape::SingleConstituent { label } => vec![*label],
            OmegaShape::Generated { members, .. } => members.clone(),
        }
    }
}

/// `sigma = (p+q)/2 - (n+1)/2`, `alpha = p - q mod 4`.
pub fn induced_params(p: i64, q: i64, n: i64) -> Result<InducedRepParams> {
    let sig = OrthogonalSignature::new(p, q)?;
    let sigma = Rational::new(sig.m() - n - 1, 2);
    InducedRepParams::new(n, (p - q).rem_euclid(4), sigma)
}

fn half(v: i64) -> i64 {
    assert!(v % 2 == 0, "index formula produced a non-integer: {v}/2");
    v / 2
}

pub fn omega_image(p: i64, q: i64, n: i64) -> Result<OmegaImage> {
    let signature = OrthogonalSignature::new(p, q)?;
    let target = induced_params(p, q, n)?;
    let m = signature.m();
    let sigma = target.sigma();
    let zero = Rational::ZERO;
    let floor_half_n = n / 2;
    let floor_half_n1 = (n + 1) / 2;

    let (single, i, j) = match target.classify() {
        CaseTag::Case1a => {
            let eps = if m % 2 == 0 { 1 } else { 0 };
            if sigma <= zero {
                (true, half(p - 1), half(q - eps))
            } else {
                (false, half(n - q).max(0), half(n + 1 - eps - p).max(0))
            }
        }
        CaseTag::Case1b => {
            let eps = if m % 2 == 0 { 0 } else { 1 };
            if sigma <= zero {
                (true, half(p), half(q - eps))
            } else {
                (false, half(n + 1 - q).max(0), half(n + 1 - eps - p).max(0))
            }
        }
        CaseTag::Case2a => {
            if sigma < zero {
                (true, half(n + 1 - q), half(p - 1))
            } else {
                (false, half(n + 1 - q).max(0), half(p - 1).min(floor_half_n))
            }
        }
        CaseTag::Case2b => {
            if sigma < zero {
                (true, half(p), half(n - q))
            } else {
                (false, half(p).min(floor_half_n1), half(n - q).max(0))
            }
        }
        CaseTag::Irreducible => unreachable!("sigma_tilde = (m + alpha)/2 is an integer"),
    };
    let label = if target.classify().is_case1() {
        ConstituentLabel::r(i, j)
    } else {
        ConstituentLabel::l(i, j)
    };
    let shape = if single {
        OmegaShape::SingleConstituent { label }
    } else {
        OmegaShape::Generated {
            generator: label,
            members: generated_submodule(&target, &label)?.members,
        }
    };
    Ok(OmegaImage {
        signature,
        target,
        shape,
    })
}

/// Signatures with `p + q = 2*sigma + n + 1` and `p - q = alpha mod 4`,
/// ordered by `p`.
pub fn possible_embeddings(params: &InducedRepParams) -> Vec<OrthogonalSignature> {
    let m = params.sigma() * 2 + params.n() as i64 + 1;
    let Some(m) = m.to_integer().filter(|&m| m >= 0) else {
        return Vec::new();
    };
    (0..=m)
        .map(|p| OrthogonalSignature { p, q: m - p })
        .filter(|s| (s.p - s.q - params.alpha() as i64).rem_euclid(4) == 0)
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SummaryClause {
    /// `-rho_n <= sigma < 0`: the irreducible submodules are the images.
    Socle,
    /// `sigma = 0`, `n + alpha` odd: the module is the direct sum of images.
    UnitaryAxis,
    /// `sigma > 0`: reducibility is detected by the embeddings.
    Reducibility,
    /// `sigma < -rho_n`: no claim.
    None,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SummaryCheck {
    pub name: String,
    pub holds: bool,
    pub witness: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SummaryReport {
    pub params: InducedRepParams,
    pub clause: SummaryClause,
    pub embeddings: Vec<OrthogonalSignature>,
    pub images: Vec<OmegaImage>,
    pub checks: Vec<SummaryCheck>,
}

impl SummaryReport {
    pub fn holds(&self) -> bool {
        self.checks.iter().all(|c| c.holds)
    }

    pub fn check(&self, name: &str) -> Option<&SummaryCheck> {
        self.checks.iter().find(|c| c.name == name)
    }

    fn record(&mut self, name: &str, witness: Option<String>) {
        self.checks.push(SummaryCheck {
            name: name.to_string(),
            holds: witness.is_none(),
            witness,
        });
    }
}

fn label_list(v: impl IntoIterator<Item = ConstituentLabel>) -> String {
    let parts: Vec<String> = v.into_iter().map(|l| l.to_string()).collect();
    format!("{{{}}}", parts.join(", "))
}

/// Checks the summary statements at one parameter point. Irreducible points
/// are accepted and only the reducibility check applies.
pub fn check_summary(params: &InducedRepParams) -> Result<SummaryReport> {
    let sigma = params.sigma();
    let n = params.n() as i64;
    let embeddings = possible_embeddings(params);
    let images = embeddings
        .iter()
        .map(|s| omega_image(s.p, s.q, n))
        .collect::<Result<Vec<_>>>()?;
    let clause = if sigma > Rational::ZERO {
        SummaryClause::Reducibility
    } else if sigma.is_zero() && params.n_plus_alpha_odd() {
        SummaryClause::UnitaryAxis
    } else if sigma < Rational::ZERO && sigma >= -params.rho() {
        SummaryClause::Socle
    } else {
        SummaryClause::None
    };
    let mut report = SummaryReport {
        params: *params,
        clause,
        embeddings,
        images,
        checks: Vec::new(),
    };

    if !params.is_reducible() {
        let w = (!report.embeddings.is_empty())
            .then(|| format!("irreducible but embedding {} exists", report.embeddings[0]));
        report.record("reducible_iff_embeddings", w);
        return Ok(report);
    }

    let generators: BTreeSet<ConstituentLabel> =
        report.images.iter().map(|i| i.generator()).collect();
    match clause {
        SummaryClause::Socle => {
            let sinks: BTreeSet<ConstituentLabel> =
                module_diagram(params)?.sinks().into_iter().collect();
            let w = (sinks != generators).then(|| {
                format!(
                    "irreducible submodules {} but images {}",
                    label_list(sinks.iter().copied()),
                    label_list(generators.iter().copied())
                )
            });
            report.record("socle_equals_images", w);
            let mut bad = None;
            for l in &sinks {
                if !constituent_unitarizable(params, l)?.unitarizable {
                    bad = Some(format!("{l} is not unitarizable"));
                    break;
                }
            }
            report.record("socle_unitarizable", bad);
        }
        SummaryClause::UnitaryAxis => {
            let all: BTreeSet<ConstituentLabel> =
                enumerate_constituents(params)?.labels.into_iter().collect();
            let mut seen = BTreeSet::new();
            let mut overlap = None;
            for img in &report.images {
                for m in img.members() {
                    if !seen.insert(m) && overlap.is_none() {
                        overlap = Some(format!("{m} lies in two images"));
                    }
                }
            }
            report.record("images_disjoint", overlap);
            let w = (seen != all).then(|| {
                format!(
                    "constituents {} but images cover {}",
                    label_list(all.iter().copied()),
                    label_list(seen.iter().copied())
                )
            });
            report.record("images_cover_module", w);
        }
        SummaryClause::Reducibility => {
            let w = report
                .embeddings
                .is_empty()
                .then(|| "reducible but no possible embedding".to_string());
            report.record("reducible_iff_embeddings", w);
            let quotients = module_diagram(params)?.sources();
            let missing: Vec<ConstituentLabel> = quotients
                .into_iter()
                .filter(|l| !generators.contains(l))
                .collect();
            let w = (!missing.is_empty()).then(|| {
                format!(
                    "irreducible quotients {} are not image generators",
                    label_list(missing)
                )
            });
            report.record("quotients_are_generators", w);
        }
        SummaryClause::None => {}
    }
    Ok(report)
}
