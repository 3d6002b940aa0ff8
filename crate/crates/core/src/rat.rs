//! Exact rational arithmetic helpers.
//!
//! All exact quantities in this crate (densities, block endpoints, path
//! knots, law atoms) are arbitrary-precision rationals. Floats appear only
//! in the Monte Carlo layer.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rat = BigRational;

/// `p/q` from machine integers.
pub fn rat(p: i64, q: i64) -> Rat {
    Rat::new(BigInt::from(p), BigInt::from(q))
}

/// Integer as a rational.
pub fn rint(p: i64) -> Rat {
    Rat::from_integer(BigInt::from(p))
}

pub fn zero() -> Rat {
    Rat::zero()
}

pub fn one() -> Rat {
    Rat::one()
}

/// 2^e for possibly negative `e`.
pub fn pow2(e: i64) -> Rat {
    let two = BigInt::from(2);
    if e >= 0 {
        Rat::from_integer(two.pow(e as u32))
    } else {
        Rat::new(BigInt::one(), two.pow((-e) as u32))
    }
}

/// Parses `"p/q"` or `"p"` (ASCII, optional leading minus).
pub fn parse_rat(s: &str) -> Result<Rat> {
    let s = s.trim();
    let mk_err = || Error::Structural(format!("cannot parse rational from {s:?}"));
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().map_err(|_| mk_err())?;
            let q: BigInt = q.trim().parse().map_err(|_| mk_err())?;
            if q.is_zero() {
                return Err(Error::Structural(format!("zero denominator in {s:?}")));
            }
            Ok(Rat::new(p, q))
        }
        None => {
            let p: BigInt = s.parse().map_err(|_| mk_err())?;
            Ok(Rat::from_integer(p))
        }
    }
}

/// Renders in lowest terms as `"p"` or `"p/q"`.
pub fn fmt_rat(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn to_f64(r: &Rat) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        // Fall back to a quotient of truncated parts for extreme operands.
        let n = r.numer().to_f64().unwrap_or(f64::MAX);
        let d = r.denom().to_f64().unwrap_or(f64::MAX);
        n / d
    })
}

/// Exact conversion of a finite float (floats are dyadic rationals).
pub fn from_f64(x: f64) -> Result<Rat> {
    Rat::from_float(x).ok_or_else(|| Error::Argument(format!("non-finite float {x}")))
}

/// Least common multiple of the denominators of `values`, as an integer
/// rational. Returns 1 for an empty slice.
pub fn denom_lcm(values: &[Rat]) -> Rat {
    let mut acc = BigInt::one();
    for v in values {
        acc = num::integer::lcm(acc, v.denom().clone());
    }
    Rat::from_integer(acc)
}

/// Smallest integer strictly greater than `x`.
pub fn floor_plus_one(x: &Rat) -> BigInt {
    x.floor().to_integer() + 1
}

/// Ceiling of a nonnegative rational as u64, for mesh cell counts.
pub fn ceil_u64(x: &Rat) -> Result<u64> {
    if x.is_negative() {
        return Err(Error::Argument("ceiling of a negative quantity".into()));
    }
    x.ceil()
        .to_integer()
        .to_u64()
        .ok_or_else(|| Error::Argument("quantity too large".into()))
}

/// Serde adapter: rationals as `"p/q"` strings.
pub mod rat_string {
    use super::{fmt_rat, parse_rat, Rat};
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Rat, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&fmt_rat(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rat, D::Error> {
        let s = String::deserialize(d)?;
        parse_rat(&s).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format_round_trip() {
        for s in ["0", "1/2", "-3/4", "7", "24/7"] {
            let r = parse_rat(s).unwrap();
            assert_eq!(fmt_rat(&r), s);
        }
        assert_eq!(fmt_rat(&parse_rat("2/4").unwrap()), "1/2");
        assert_eq!(fmt_rat(&parse_rat(" 3 / 6 ").unwrap()), "1/2");
        assert!(parse_rat("1/0").is_err());
        assert!(parse_rat("x").is_err());
    }

    #[test]
    fn pow2_signs() {
        assert_eq!(pow2(3), rint(8));
        assert_eq!(pow2(0), rint(1));
        assert_eq!(pow2(-2), rat(1, 4));
    }

    #[test]
    fn denom_lcm_examples() {
        let vals = [rat(1, 2), rat(5, 6), rint(3)];
        assert_eq!(denom_lcm(&vals), rint(6));
        assert_eq!(denom_lcm(&[]), rint(1));
    }

    #[test]
    fn float_conversion_is_exact() {
        let r = from_f64(0.375).unwrap();
        assert_eq!(r, rat(3, 8));
    }
}
