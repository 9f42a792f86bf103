//! The parameter triple `(n, alpha, sigma)` of `I^alpha(sigma)`, its derived
//! constants and the four-way reducibility case split.
//!
//! Only rational `sigma` is representable. A "generic" `sigma` is modelled by
//! any rational with non-integral `sigma_tilde`.

use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawParams", into = "RawParams")]
pub struct InducedRepParams {
    n: usize,
    alpha: u8,
    sigma: Rational,
}

#[derive(Serialize, Deserialize)]
struct RawParams {
    n: i64,
    alpha: i64,
    sigma: Rational,
}

impl TryFrom<RawParams> for InducedRepParams {
    type Error = Error;
    fn try_from(r: RawParams) -> Result<Self> {
        InducedRepParams::new(r.n, r.alpha, r.sigma)
    }
}

impl From<InducedRepParams> for RawParams {
    fn from(p: InducedRepParams) -> Self {
        RawParams {
            n: p.n as i64,
            alpha: p.alpha as i64,
            sigma: p.sigma,
        }
    }
}

impl InducedRepParams {
    pub fn new(n: i64, alpha: i64, sigma: Rational) -> Result<Self> {
        // n = 1 has its own (unstated) rules; reject rather than guess.
        if n < 2 {
            return Err(Error::RankTooSmall(n));
        }
        if !(0..=3).contains(&alpha) {
            return Err(Error::AlphaOutOfRange(alpha));
        }
        Ok(InducedRepParams {
            n: n as usize,
            alpha: alpha as u8,
            sigma,
        })
    }

    /// Parameters whose `sigma_tilde` equals the given value.
    pub fn from_sigma_tilde(n: i64, alpha: i64, sigma_tilde: Rational) -> Result<Self> {
        let sigma = sigma_tilde - Rational::new(n + 1 + alpha, 2);
        Self::new(n, alpha, sigma)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn alpha(&self) -> u8 {
        self.alpha
    }

    pub fn sigma(&self) -> Rational {
        self.sigma
    }

    /// `rho_n = (n+1)/2`.
    pub fn rho(&self) -> Rational {
        Rational::new(self.n as i64 + 1, 2)
    }

    /// `sigma_tilde = sigma + rho_n + alpha/2`.
    pub fn sigma_tilde(&self) -> Rational {
        self.sigma + Rational::new(self.n as i64 + 1 + self.alpha as i64, 2)
    }

    /// Parity of `n + alpha`: selects the Case-1 / Case-2 column.
    pub fn n_plus_alpha_odd(&self) -> bool {
        (self.n + self.alpha as usize) % 2 == 1
    }

    pub fn is_reducible(&self) -> bool {
        self.sigma_tilde().is_integer()
    }

    pub fn classify(&self) -> CaseTag {
        classify(self)
    }

    pub fn derived(&self) -> DerivedConstants {
        derived(self)
    }
}

impl fmt::Display for InducedRepParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "I^{}({}) of Mp({},R)",
            self.alpha,
            self.sigma,
            2 * self.n
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CaseTag {
    Irreducible,
    Case1a,
    Case1b,
    Case2a,
    Case2b,
}

impl CaseTag {
    /// Case 1 is `n + alpha` odd: both barriers on a coordinate are effective
    /// together.
    pub fn is_case1(self) -> bool {
        matches!(self, CaseTag::Case1a | CaseTag::Case1b)
    }

    pub fn is_case2(self) -> bool {
        matches!(self, CaseTag::Case2a | CaseTag::Case2b)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            CaseTag::Irreducible => "Irreducible",
            CaseTag::Case1a => "Case1a",
            CaseTag::Case1b => "Case1b",
            CaseTag::Case2a => "Case2a",
            CaseTag::Case2b => "Case2b",
        }
    }
}

impl fmt::Display for CaseTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

pub fn classify(params: &InducedRepParams) -> CaseTag {
    let Some(st) = params.sigma_tilde().to_integer() else {
        return CaseTag::Irreducible;
    };
    match (params.n_plus_alpha_odd(), st.is_odd()) {
        (true, true) => CaseTag::Case1a,
        (true, false) => CaseTag::Case1b,
        (false, true) => CaseTag::Case2a,
        (false, false) => CaseTag::Case2b,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DerivedConstants {
    pub rho: Rational,
    pub sigma_tilde: Rational,
    /// Largest even integer `<= n`.
    pub n0: i64,
    /// Largest odd integer `<= n`.
    pub n1: i64,
    k: Option<i64>,
}

impl DerivedConstants {
    /// `n0/2` when `sigma_tilde` is odd, `(n1+1)/2` when even.
    pub fn k(&self) -> Result<i64> {
        self.k
            .ok_or_else(|| Error::KUndefined(self.sigma_tilde.to_string()))
    }
}

pub fn derived(params: &InducedRepParams) -> DerivedConstants {
    let n = params.n as i64;
    let n0 = 2 * (n / 2);
    let n1 = 2 * ((n + 1) / 2) - 1;
    let sigma_tilde = params.sigma_tilde();
    let k = sigma_tilde
        .to_integer()
        .map(|st| if st.is_odd() { n0 / 2 } else { (n1 + 1) / 2 });
    DerivedConstants {
        rho: params.rho(),
        sigma_tilde,
        n0,
        n1,
        k,
    }
}
