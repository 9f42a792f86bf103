use thiserror::Error;

use crate::constituents::ConstituentLabel;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("rank below supported range: n = {0} (need n >= 2)")]
    RankTooSmall(i64),

    #[error("alpha out of range: {0} (expected one of 0, 1, 2, 3)")]
    AlphaOutOfRange(i64),

    #[error("malformed rational {0:?} (expected \"a\" or \"a/b\")")]
    ParseRational(String),

    #[error("malformed K-type {0:?} (expected comma-separated integers)")]
    ParseKType(String),

    #[error("K-type {0} is not weakly decreasing")]
    NotDominant(String),

    #[error("K-type has {got} entries, rank is {expected}")]
    RankMismatch { expected: usize, got: usize },

    #[error("coordinate {coord} outside 1..={n}")]
    CoordinateOutOfRange { coord: i64, n: usize },

    #[error("k undefined at irreducible point (sigma_tilde = {0} is not an integer)")]
    KUndefined(String),

    #[error("no such K-type: moving {from} along coordinate {coord} leaves the dominant cone")]
    NoSuchKType { from: String, coord: usize },

    #[error("I^alpha(sigma) is irreducible here (sigma_tilde = {0}); no constituent structure")]
    Irreducible(String),

    #[error("label {0} undefined here")]
    LabelUndefined(ConstituentLabel),

    #[error("constituent {0} is empty")]
    EmptyConstituent(ConstituentLabel),

    #[error("invariant form degenerates at this K-type (zero denominator in N)")]
    DegenerateForm,

    #[error("negative signature entry: p = {p}, q = {q}")]
    NegativeSignature { p: i64, q: i64 },
}

pub type Result<T> = std::result::Result<T, Error>;
