//! Exact scalar arithmetic: the rationals and prime fields.
//!
//! Every computation in this crate is exact; there is no floating-point
//! fallback anywhere. Divisibility answers are booleans derived from ranks
//! of linear systems, so a single rounding error would invalidate them.

use std::fmt;
use std::str::FromStr;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Zero};

use crate::error::{Error, Result};

/// Runtime description of a ground field, as it appears in CLI flags,
/// JSON reports and serialized algebras (`q` or `fp:<p>`).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FieldSpec {
    Rationals,
    PrimeField(u64),
}

impl FieldSpec {
    /// Checks that a prime-field modulus really is prime (and small enough
    /// that products fit comfortably in machine words).
    pub fn validate(&self) -> Result<()> {
        match self {
            FieldSpec::Rationals => Ok(()),
            FieldSpec::PrimeField(p) => {
                if *p > (1 << 31) {
                    return Err(Error::field(format!(
                        "prime modulus {p} too large (must be < 2^31)"
                    )));
                }
                if !is_prime_u64(*p) {
                    return Err(Error::field(format!("{p} is not prime")));
                }
                Ok(())
            }
        }
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Rationals => write!(f, "q"),
            FieldSpec::PrimeField(p) => write!(f, "fp:{p}"),
        }
    }
}

impl FromStr for FieldSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "q" || s == "Q" {
            return Ok(FieldSpec::Rationals);
        }
        if let Some(p) = s.strip_prefix("fp:") {
            let p: u64 = p
                .parse()
                .map_err(|_| Error::field(format!("bad prime field spec '{s}'")))?;
            let spec = FieldSpec::PrimeField(p);
            spec.validate()?;
            return Ok(spec);
        }
        Err(Error::field(format!(
            "unknown field '{s}' (expected 'q' or 'fp:<p>')"
        )))
    }
}

fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// Arithmetic of an exact field. The field object itself carries whatever
/// runtime data the arithmetic needs (the modulus, for prime fields), so
/// elements stay plain values.
pub trait Field: Clone + PartialEq + fmt::Debug + Send + Sync + 'static {
    type Elem: Clone + PartialEq + fmt::Debug + Send + Sync + 'static;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;

    /// Multiplicative inverse; `None` for zero.
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Option<Self::Elem> {
        self.inv(b).map(|bi| self.mul(a, &bi))
    }

    #[allow(clippy::wrong_self_convention)] // the field object carries the modulus
    fn from_i64(&self, n: i64) -> Self::Elem;

    /// 0 for the rationals, p for F_p.
    fn characteristic(&self) -> u64;

    /// Size estimate used by the shortest-entry pivot heuristic. Smaller
    /// entries make better pivots because they slow fraction growth.
    fn weight(&self, a: &Self::Elem) -> u64;

    /// Parses `n`, `-n`, or `n/d`.
    fn parse(&self, s: &str) -> Result<Self::Elem>;

    fn render(&self, a: &Self::Elem) -> String;

    fn spec(&self) -> FieldSpec;
}

/// The field of rational numbers with arbitrary-precision arithmetic.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct Rationals;

impl Field for Rationals {
    type Elem = BigRational;

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }

    fn one(&self) -> BigRational {
        BigRational::one()
    }

    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }

    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }

    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }

    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }

    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }

    fn inv(&self, a: &BigRational) -> Option<BigRational> {
        if a.is_zero() {
            None
        } else {
            Some(a.recip())
        }
    }

    fn from_i64(&self, n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }

    fn characteristic(&self) -> u64 {
        0
    }

    fn weight(&self, a: &BigRational) -> u64 {
        a.numer().bits() + a.denom().bits()
    }

    fn parse(&self, s: &str) -> Result<BigRational> {
        let s = s.trim();
        let parse_int = |t: &str| -> Result<BigInt> {
            BigInt::from_str(t.trim()).map_err(|_| Error::field(format!("bad rational '{s}'")))
        };
        match s.split_once('/') {
            Some((n, d)) => {
                let num = parse_int(n)?;
                let den = parse_int(d)?;
                if den.is_zero() {
                    return Err(Error::field(format!("zero denominator in '{s}'")));
                }
                Ok(BigRational::new(num, den))
            }
            None => Ok(BigRational::from_integer(parse_int(s)?)),
        }
    }

    fn render(&self, a: &BigRational) -> String {
        if a.denom().is_one() {
            a.numer().to_string()
        } else {
            format!("{}/{}", a.numer(), a.denom())
        }
    }

    fn spec(&self) -> FieldSpec {
        FieldSpec::Rationals
    }
}

/// The prime field F_p. Elements are kept reduced to `0..p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self> {
        FieldSpec::PrimeField(p).validate()?;
        Ok(PrimeField { p })
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    fn reduce_i64(&self, n: i64) -> u64 {
        let p = self.p as i128;
        let r = (n as i128).rem_euclid(p);
        r as u64
    }
}

impl Field for PrimeField {
    type Elem = u64;

    fn zero(&self) -> u64 {
        0
    }

    fn one(&self) -> u64 {
        1 % self.p
    }

    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }

    fn add(&self, a: &u64, b: &u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    fn sub(&self, a: &u64, b: &u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.p - a
        }
    }

    fn mul(&self, a: &u64, b: &u64) -> u64 {
        ((*a as u128 * *b as u128) % self.p as u128) as u64
    }

    fn inv(&self, a: &u64) -> Option<u64> {
        if *a == 0 {
            return None;
        }
        // extended Euclid on (a, p)
        let (mut t, mut new_t): (i128, i128) = (0, 1);
        let (mut r, mut new_r): (i128, i128) = (self.p as i128, *a as i128);
        while new_r != 0 {
            let q = r / new_r;
            (t, new_t) = (new_t, t - q * new_t);
            (r, new_r) = (new_r, r - q * new_r);
        }
        debug_assert_eq!(r, 1, "modulus must be prime");
        Some(t.rem_euclid(self.p as i128) as u64)
    }

    fn from_i64(&self, n: i64) -> u64 {
        self.reduce_i64(n)
    }

    fn characteristic(&self) -> u64 {
        self.p
    }

    fn weight(&self, _a: &u64) -> u64 {
        1
    }

    fn parse(&self, s: &str) -> Result<u64> {
        let s = s.trim();
        let parse_int = |t: &str| -> Result<i64> {
            t.trim()
                .parse()
                .map_err(|_| Error::field(format!("bad scalar '{s}'")))
        };
        match s.split_once('/') {
            Some((n, d)) => {
                let num = self.reduce_i64(parse_int(n)?);
                let den = self.reduce_i64(parse_int(d)?);
                let dinv = self.inv(&den).ok_or_else(|| {
                    Error::field(format!("zero denominator in '{s}' mod {}", self.p))
                })?;
                Ok(self.mul(&num, &dinv))
            }
            None => Ok(self.reduce_i64(parse_int(s)?)),
        }
    }

    fn render(&self, a: &u64) -> String {
        a.to_string()
    }

    fn spec(&self) -> FieldSpec {
        FieldSpec::PrimeField(self.p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_spec_round_trip() {
        for s in ["q", "fp:5", "fp:2", "fp:101"] {
            let spec: FieldSpec = s.parse().unwrap();
            assert_eq!(spec.to_string(), s);
        }
        assert!("fp:6".parse::<FieldSpec>().is_err());
        assert!("fp:1".parse::<FieldSpec>().is_err());
        assert!("r".parse::<FieldSpec>().is_err());
    }

    #[test]
    fn rational_parse_render() {
        let q = Rationals;
        let x = q.parse("-3/6").unwrap();
        assert_eq!(q.render(&x), "-1/2");
        assert_eq!(q.render(&q.parse("4/2").unwrap()), "2");
        assert!(q.parse("1/0").is_err());
    }

    #[test]
    fn prime_field_arithmetic() {
        let f = PrimeField::new(7).unwrap();
        for a in 0..7u64 {
            for b in 0..7u64 {
                assert_eq!(f.add(&a, &b), (a + b) % 7);
                assert_eq!(f.mul(&a, &b), (a * b) % 7);
                assert_eq!(f.add(&f.sub(&a, &b), &b), a);
            }
            if a != 0 {
                let ai = f.inv(&a).unwrap();
                assert_eq!(f.mul(&a, &ai), 1);
            }
        }
        assert_eq!(f.inv(&0), None);
        assert_eq!(f.parse("-1").unwrap(), 6);
        assert_eq!(f.parse("3/2").unwrap(), f.mul(&3, &f.inv(&2).unwrap()));
    }
}
