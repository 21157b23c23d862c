//! Exact rational scalars and their canonical `p/q` text form.
//!
//! All rates, bound terms, channel gains and beamforming entries in this crate
//! are `Rat` values. The canonical text form is `p/q` in lowest terms with
//! `q >= 1`; parsing also accepts a bare integer `p`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

pub type Rat = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid rational `{input}`: expected `p/q` with integer p and positive integer q")]
pub struct RatParseError {
    pub input: String,
}

/// Rational from an integer.
pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Rational `p/q`. Panics if `q == 0`.
pub fn rat(p: i64, q: i64) -> Rat {
    Rat::new(BigInt::from(p), BigInt::from(q))
}

/// Canonical `p/q` form, always with an explicit denominator: `1/2`, `-3/7`, `5/1`.
pub fn format_rat(x: &Rat) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

/// `p/q` if finite, `inf` otherwise. Used for the bound terms.
pub fn format_rat_or_inf(x: &Option<Rat>) -> String {
    match x {
        Some(r) => format_rat(r),
        None => "inf".to_owned(),
    }
}

pub fn parse_rat(s: &str) -> Result<Rat, RatParseError> {
    let err = || RatParseError { input: s.to_owned() };
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n, Some(d)),
        None => (s, None),
    };
    let numer: BigInt = num.parse().map_err(|_| err())?;
    let denom: BigInt = match den {
        Some(d) if d.bytes().all(|b| b.is_ascii_digit()) && !d.is_empty() => {
            d.parse().map_err(|_| err())?
        }
        Some(_) => return Err(err()),
        None => BigInt::one(),
    };
    if denom.is_zero() {
        return Err(err());
    }
    Ok(Rat::new(numer, denom))
}
