//! Exact rational scalars.
//!
//! `Rat` is an arbitrary-precision fraction kept in lowest terms with a
//! positive denominator (both invariants maintained by `num-rational`).
//! Everything downstream — polynomials, matrices, operators — is built on it;
//! no floating point appears anywhere in the engine.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

pub type Rat = BigRational;

// ---- Construction ----

/// The rational `n`.
pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// The rational `p/q`. Panics if `q == 0` (arguments are compile-time constants
/// at every call site).
pub fn rat(p: i64, q: i64) -> Rat {
    assert!(q != 0, "zero denominator");
    Rat::new(BigInt::from(p), BigInt::from(q))
}

/// Parse an exact fraction: `"3"`, `"-7/2"`, with optional surrounding space.
pub fn parse_rat(s: &str) -> Option<Rat> {
    let t = s.trim();
    if t.is_empty() {
        return None;
    }
    match t.split_once('/') {
        None => t.parse::<BigInt>().ok().map(Rat::from_integer),
        Some((p, q)) => {
            let p = p.trim().parse::<BigInt>().ok()?;
            let q = q.trim().parse::<BigInt>().ok()?;
            if q.is_zero() {
                None
            } else {
                Some(Rat::new(p, q))
            }
        }
    }
}

/// Binomial coefficient as a rational.
pub fn binom(n: usize, k: usize) -> Rat {
    Rat::from_integer(num_integer::binomial(BigInt::from(n), BigInt::from(k)))
}

// ---- Predicates / conversions ----

/// `Some(k)` when the value is the integer `k`.
pub fn as_integer(r: &Rat) -> Option<BigInt> {
    r.is_integer().then(|| r.to_integer())
}

/// `Some(k)` when the value is an integer fitting `i64`.
pub fn as_i64(r: &Rat) -> Option<i64> {
    as_integer(r).and_then(|n| n.to_i64())
}

/// `Some(k)` for a nonnegative integer value fitting `u64`.
pub fn as_u64(r: &Rat) -> Option<u64> {
    if r.is_integer() && !r.is_negative() {
        r.to_integer().to_u64()
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_round_trips() {
        assert_eq!(parse_rat("3/2"), Some(rat(3, 2)));
        assert_eq!(parse_rat(" -7 "), Some(rat_int(-7)));
        assert_eq!(parse_rat("-6/4"), Some(rat(-3, 2)));
        assert_eq!(parse_rat("1/0"), None);
        assert_eq!(parse_rat("x"), None);
        assert_eq!(parse_rat(""), None);
        assert_eq!(rat(3, 2).to_string(), "3/2");
        assert_eq!(rat_int(5).to_string(), "5");
        assert_eq!(rat(-6, 4).to_string(), "-3/2");
    }

    #[test]
    fn integer_probes() {
        assert_eq!(as_i64(&rat(4, 2)), Some(2));
        assert_eq!(as_i64(&rat(1, 2)), None);
        assert_eq!(as_u64(&rat_int(-1)), None);
        assert_eq!(as_u64(&rat_int(9)), Some(9));
    }
}
