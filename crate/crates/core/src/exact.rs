//! Small helpers around exact rationals.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Rational = BigRational;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn big(n: BigInt) -> Rational {
    Rational::from_integer(n)
}

pub fn frac(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

/// Canonical representative of `x` in `[0, 1)`.
pub fn fract(x: &Rational) -> Rational {
    x - x.floor()
}

pub fn is_integer(x: &Rational) -> bool {
    x.denom().is_one()
}

/// `x mod n` in `[0, n)` for integral `x`.
pub fn mod_floor(x: &BigInt, n: &BigInt) -> BigInt {
    x.mod_floor(n)
}

/// Parses `p/q`, `p`, or `-p/q`.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().ok()?;
            let q: BigInt = q.trim().parse().ok()?;
            if q.is_zero() {
                return None;
            }
            Some(Rational::new(p, q))
        }
        None => s.parse::<BigInt>().ok().map(Rational::from_integer),
    }
}

/// Lowest terms, `p` for integers and `p/q` otherwise.
pub fn fmt_rational(x: &Rational) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Modular inverse of `a` modulo `n` (`gcd(a, n) = 1` assumed).
pub fn mod_inverse(a: &BigInt, n: &BigInt) -> BigInt {
    let e = a.mod_floor(n).extended_gcd(n);
    debug_assert!(e.gcd.abs().is_one());
    e.x.mod_floor(n)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_print() {
        assert_eq!(parse_rational("2/4"), Some(frac(1, 2)));
        assert_eq!(parse_rational("-3"), Some(int(-3)));
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(parse_rational("x"), None);
        assert_eq!(fmt_rational(&frac(-6, 4)), "-3/2");
        assert_eq!(fmt_rational(&int(5)), "5");
    }

    #[test]
    fn fractional_part() {
        assert_eq!(fract(&frac(-1, 3)), frac(2, 3));
        assert_eq!(fract(&frac(7, 3)), frac(1, 3));
        assert!(fract(&int(-4)).is_zero());
    }

    #[test]
    fn inverse_mod() {
        let n = BigInt::from(7);
        for a in 1..7 {
            let inv = mod_inverse(&BigInt::from(a), &n);
            assert_eq!((inv * BigInt::from(a)).mod_floor(&n), BigInt::one());
        }
    }
}
