//! Exact scalars: arbitrary-precision rationals, plus a prime-field mode
//! used only for rank computations.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Rational = BigRational;

/// Smallest admissible modulus for prime mode is strictly above this.
pub const MIN_PRIME: u64 = 1 << 30;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Canonical `p/q` rendering. Integers keep the `/1` denominator so every
/// entry has the same shape on disk.
pub fn format_fraction(q: &Rational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

pub fn parse_fraction(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a fraction string: {s:?}"));
    if s.contains(['.', 'e', 'E']) {
        return Err(bad());
    }
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n, d),
        None => (s, "1"),
    };
    let num = BigInt::from_str(num.trim()).map_err(|_| bad())?;
    let den = BigInt::from_str(den.trim()).map_err(|_| bad())?;
    if den.is_zero() {
        return Err(Error::Parse(format!("zero denominator in {s:?}")));
    }
    Ok(Rational::new(num, den))
}

/// How ranks are computed. Matrices are always built over the rationals;
/// prime mode reduces them before elimination.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "mode", content = "prime", rename_all = "lowercase")]
pub enum ScalarMode {
    #[default]
    Rational,
    Prime(u64),
}

impl ScalarMode {
    pub fn prime(p: u64) -> Result<Self> {
        if p <= MIN_PRIME {
            return Err(Error::InvalidPrime(format!("{p} is not above 2^30")));
        }
        if p >= 1 << 62 {
            return Err(Error::InvalidPrime(format!("{p} does not fit the 62-bit field kernel")));
        }
        if !is_prime_u64(p) {
            return Err(Error::InvalidPrime(format!("{p} is composite")));
        }
        Ok(ScalarMode::Prime(p))
    }
}

impl fmt::Display for ScalarMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScalarMode::Rational => write!(f, "rational"),
            ScalarMode::Prime(p) => write!(f, "prime {p}"),
        }
    }
}

pub(crate) fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub(crate) fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        exp >>= 1;
    }
    acc
}

pub(crate) fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

/// Deterministic Miller-Rabin for 64-bit inputs.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &w in &WITNESSES {
        if n % w == 0 {
            return n == w;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'outer: for &a in &WITNESSES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'outer;
            }
        }
        return false;
    }
    true
}

fn bigint_mod(x: &BigInt, p: u64) -> u64 {
    let r = x.mod_floor(&BigInt::from(p));
    r.to_u64().expect("residue fits in u64")
}

/// Image of a rational in F_p.
pub fn reduce_mod(q: &Rational, p: u64) -> Result<u64> {
    let den = bigint_mod(q.denom(), p);
    if den == 0 {
        return Err(Error::DenominatorVanishes { prime: p, value: format_fraction(q) });
    }
    Ok(mul_mod(bigint_mod(q.numer(), p), inv_mod(den, p), p))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fraction_strings() {
        assert_eq!(format_fraction(&ratio(-6, 4)), "-3/2");
        assert_eq!(format_fraction(&rat(5)), "5/1");
        assert_eq!(parse_fraction("-3/2").unwrap(), ratio(-3, 2));
        assert_eq!(parse_fraction("7").unwrap(), rat(7));
        assert!(parse_fraction("1.5").is_err());
        assert!(parse_fraction("1/0").is_err());
        assert!(parse_fraction("x").is_err());
    }

    #[test]
    fn primes() {
        assert!(is_prime_u64(2147483659));
        assert!(!is_prime_u64(2147483649));
        assert!(ScalarMode::prime(2147483659).is_ok());
        assert!(ScalarMode::prime(1_000_003).is_err());
        assert!(ScalarMode::prime((1 << 31) + 1).is_err());
    }

    #[test]
    fn reduction() {
        let p = 2147483659;
        let half = reduce_mod(&ratio(1, 2), p).unwrap();
        assert_eq!(mul_mod(half, 2, p), 1);
        assert_eq!(reduce_mod(&rat(-1), p).unwrap(), p - 1);
    }
}
