//! Exact rational scalars and their canonical `"p/q"` text form.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::ParseError;

/// The scalar field used everywhere in the crate.
pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn qf(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn zero() -> Q {
    Q::zero()
}

pub fn one() -> Q {
    Q::one()
}

/// Canonical text form: reduced, positive denominator, always `p/q`.
pub fn format_q(x: &Q) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

/// Accepts `p/q`, `p`, with optional sign on the numerator.
pub fn parse_q(s: &str) -> Result<Q, ParseError> {
    let s = s.trim();
    let bad = || ParseError::Rational(s.to_string());
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(Q::new(n, d))
        }
        None => {
            let n: BigInt = s.parse().map_err(|_| bad())?;
            Ok(Q::from_integer(n))
        }
    }
}

/// Floor of a rational as an `i64`.
pub fn floor_i64(x: &Q) -> i64 {
    let f = x.floor().to_integer();
    i64::try_from(f).expect("floor out of i64 range")
}

/// Fractional part in `[0, 1)`.
pub fn frac(x: &Q) -> Q {
    x - x.floor()
}

pub fn abs(x: &Q) -> Q {
    x.abs()
}

/// Lossy conversion for diagnostics and root bracketing only.
pub fn to_f64(x: &Q) -> f64 {
    use num_traits::ToPrimitive;
    x.to_f64().unwrap_or(f64::NAN)
}
