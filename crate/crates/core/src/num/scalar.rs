use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ScalarParseError {
    #[error("malformed numeric literal {0:?}")]
    Malformed(String),
    #[error("zero denominator in {0:?}")]
    ZeroDenominator(String),
}

/// Absolute/relative tolerance pair used by float-mode comparisons.
///
/// Exact mode ignores tolerances entirely. Two floats compare equal when
/// `|a - b| <= max(abs, rel * max(|a|, |b|))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub abs: f64,
    pub rel: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance {
            abs: 1e-12,
            rel: 1e-9,
        }
    }
}

impl Tolerance {
    pub fn relative(rel: f64) -> Self {
        Tolerance {
            rel,
            ..Tolerance::default()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Negative,
    Zero,
    Positive,
}

/// The number type all geometry is generic over.
///
/// `Signed` brings the full ring/field operations from `num-traits`; this
/// trait adds parsing, canonical formatting, a total order, and the
/// tolerance-aware predicates that make one code path serve both the exact
/// and the float mode.
pub trait Scalar:
    Clone + PartialEq + PartialOrd + Signed + fmt::Debug + fmt::Display + Send + Sync + 'static
{
    /// True when arithmetic and comparisons carry no rounding error.
    const EXACT: bool;
    /// Mode name used in reports ("exact" or "float").
    const MODE: &'static str;

    fn from_int(value: i64) -> Self;

    /// `numer / denom`; panics when `denom == 0`.
    fn from_fraction(numer: i64, denom: i64) -> Self;

    /// Parses an integer, a fraction `p/q`, or a decimal literal.
    ///
    /// Exact mode interprets decimals as exact fractions (`0.25` -> `1/4`);
    /// float mode evaluates in binary64.
    fn parse_literal(text: &str) -> Result<Self, ScalarParseError>;

    fn to_f64(&self) -> f64;

    /// Canonical textual form; round-trips through [`Scalar::parse_literal`].
    /// Exact values print as `p/q` with `q > 0`, `gcd(p, q) = 1` (plain `p`
    /// when `q = 1`).
    fn canonical(&self) -> String;

    /// Total order. Every value this library produces is finite, so the
    /// float-mode order is the usual one.
    fn total_cmp(&self, other: &Self) -> Ordering;

    /// Tolerance-aware equality; exact equality in exact mode.
    fn eq_tol(&self, other: &Self, tol: &Tolerance) -> bool;

    fn is_zero_tol(&self, tol: &Tolerance) -> bool {
        self.eq_tol(&Self::zero(), tol)
    }

    /// Strictly less, beyond tolerance.
    fn lt_tol(&self, other: &Self, tol: &Tolerance) -> bool {
        self.total_cmp(other) == Ordering::Less && !self.eq_tol(other, tol)
    }

    /// Less or within tolerance.
    fn le_tol(&self, other: &Self, tol: &Tolerance) -> bool {
        self.total_cmp(other) != Ordering::Greater || self.eq_tol(other, tol)
    }

    fn sign_tol(&self, tol: &Tolerance) -> Sign {
        if self.is_zero_tol(tol) {
            Sign::Zero
        } else if self.is_negative() {
            Sign::Negative
        } else {
            Sign::Positive
        }
    }
}

/// The shapes accepted by `parse_literal`, shared by both modes.
enum Literal<'a> {
    Integer {
        neg: bool,
        digits: &'a str,
    },
    Fraction {
        neg: bool,
        numer: &'a str,
        denom: &'a str,
    },
    Decimal {
        neg: bool,
        int_digits: &'a str,
        frac_digits: &'a str,
    },
}

fn split_literal(text: &str) -> Result<Literal<'_>, ScalarParseError> {
    let malformed = || ScalarParseError::Malformed(text.to_owned());
    let body = text.trim();
    let (neg, body) = match body.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, body.strip_prefix('+').unwrap_or(body)),
    };
    let all_digits = |s: &str| !s.is_empty() && s.bytes().all(|b| b.is_ascii_digit());
    if let Some((numer, denom)) = body.split_once('/') {
        if all_digits(numer) && all_digits(denom) {
            return Ok(Literal::Fraction { neg, numer, denom });
        }
        return Err(malformed());
    }
    if let Some((int_digits, frac_digits)) = body.split_once('.') {
        let ok = (all_digits(int_digits) || int_digits.is_empty())
            && (all_digits(frac_digits) || frac_digits.is_empty())
            && !(int_digits.is_empty() && frac_digits.is_empty());
        if ok {
            return Ok(Literal::Decimal {
                neg,
                int_digits,
                frac_digits,
            });
        }
        return Err(malformed());
    }
    if all_digits(body) {
        return Ok(Literal::Integer { neg, digits: body });
    }
    Err(malformed())
}

impl Scalar for BigRational {
    const EXACT: bool = true;
    const MODE: &'static str = "exact";

    fn from_int(value: i64) -> Self {
        BigRational::from_integer(BigInt::from(value))
    }

    fn from_fraction(numer: i64, denom: i64) -> Self {
        assert!(denom != 0, "zero denominator");
        BigRational::new(BigInt::from(numer), BigInt::from(denom))
    }

    fn parse_literal(text: &str) -> Result<Self, ScalarParseError> {
        let digits = |s: &str| -> BigInt { s.parse::<BigInt>().expect("validated digit string") };
        let signed = |neg: bool, v: BigInt| if neg { -v } else { v };
        match split_literal(text)? {
            Literal::Integer { neg, digits: d } => {
                Ok(BigRational::from_integer(signed(neg, digits(d))))
            }
            Literal::Fraction { neg, numer, denom } => {
                let q = digits(denom);
                if q.is_zero() {
                    return Err(ScalarParseError::ZeroDenominator(text.to_owned()));
                }
                Ok(BigRational::new(signed(neg, digits(numer)), q))
            }
            Literal::Decimal {
                neg,
                int_digits,
                frac_digits,
            } => {
                let scale = num_traits::pow(BigInt::from(10), frac_digits.len());
                let int_part = if int_digits.is_empty() {
                    BigInt::zero()
                } else {
                    digits(int_digits)
                };
                let frac_part = if frac_digits.is_empty() {
                    BigInt::zero()
                } else {
                    digits(frac_digits)
                };
                let numer = int_part * &scale + frac_part;
                Ok(BigRational::new(signed(neg, numer), scale))
            }
        }
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).expect("rational representable as f64")
    }

    fn canonical(&self) -> String {
        // Ratio's Display already prints the reduced form with positive
        // denominator, omitting "/1".
        self.to_string()
    }

    fn total_cmp(&self, other: &Self) -> Ordering {
        Ord::cmp(self, other)
    }

    fn eq_tol(&self, other: &Self, _tol: &Tolerance) -> bool {
        self == other
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;
    const MODE: &'static str = "float";

    fn from_int(value: i64) -> Self {
        value as f64
    }

    fn from_fraction(numer: i64, denom: i64) -> Self {
        assert!(denom != 0, "zero denominator");
        numer as f64 / denom as f64
    }

    fn parse_literal(text: &str) -> Result<Self, ScalarParseError> {
        match split_literal(text)? {
            Literal::Integer { .. } | Literal::Decimal { .. } => text
                .trim()
                .parse::<f64>()
                .map_err(|_| ScalarParseError::Malformed(text.to_owned())),
            Literal::Fraction { neg, numer, denom } => {
                let p: f64 = numer
                    .parse()
                    .map_err(|_| ScalarParseError::Malformed(text.to_owned()))?;
                let q: f64 = denom
                    .parse()
                    .map_err(|_| ScalarParseError::Malformed(text.to_owned()))?;
                if q == 0.0 {
                    return Err(ScalarParseError::ZeroDenominator(text.to_owned()));
                }
                Ok(if neg { -p / q } else { p / q })
            }
        }
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn canonical(&self) -> String {
        if *self == 0.0 {
            // collapse -0.0
            "0".to_owned()
        } else {
            // Rust's Display prints the shortest string that round-trips.
            format!("{self}")
        }
    }

    fn total_cmp(&self, other: &Self) -> Ordering {
        self.partial_cmp(other).expect("finite float")
    }

    fn eq_tol(&self, other: &Self, tol: &Tolerance) -> bool {
        let diff = (self - other).abs();
        diff <= tol.abs.max(tol.rel * self.abs().max(other.abs()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(text: &str) -> BigRational {
        BigRational::parse_literal(text).unwrap()
    }

    #[test]
    fn parses_fractions_and_decimals_exactly() {
        assert_eq!(rat("-1/2"), BigRational::from_fraction(-1, 2));
        assert_eq!(rat("0.25"), BigRational::from_fraction(1, 4));
        assert_eq!(rat("3"), BigRational::from_int(3));
        assert_eq!(rat("+7/21"), BigRational::from_fraction(1, 3));
        assert_eq!(rat("-0.5"), BigRational::from_fraction(-1, 2));
        assert_eq!(rat(".5"), BigRational::from_fraction(1, 2));
        assert_eq!(rat("2."), BigRational::from_int(2));
    }

    #[test]
    fn rejects_zero_denominator() {
        assert!(matches!(
            BigRational::parse_literal("1/0"),
            Err(ScalarParseError::ZeroDenominator(_))
        ));
        assert!(matches!(
            f64::parse_literal("1/0"),
            Err(ScalarParseError::ZeroDenominator(_))
        ));
    }

    #[test]
    fn rejects_malformed_literals() {
        for bad in ["", "abc", "1/2/3", "1.2.3", "1e5", "--2", ".", "1/-2"] {
            assert!(BigRational::parse_literal(bad).is_err(), "accepted {bad:?}");
            assert!(f64::parse_literal(bad).is_err(), "accepted {bad:?}");
        }
    }

    #[test]
    fn float_mode_parses_to_binary64() {
        assert_eq!(f64::parse_literal("0.25").unwrap(), 0.25);
        assert_eq!(f64::parse_literal("-3/4").unwrap(), -0.75);
        assert_eq!(f64::parse_literal("10").unwrap(), 10.0);
    }

    #[test]
    fn canonical_round_trips() {
        for text in ["-1/2", "0.25", "17", "-3", "1000000000000000000000/7"] {
            let v = rat(text);
            assert_eq!(rat(&v.canonical()), v);
        }
        for v in [0.5f64, -0.1, 3.0, 1.0 / 3.0, -0.0] {
            let s = v.canonical();
            let back: f64 = s.parse().unwrap();
            assert_eq!(back, v, "{s} does not round-trip");
        }
    }

    #[test]
    fn exact_arithmetic_is_associative_and_distributive() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..1000 {
            let mut draw =
                || BigRational::from_fraction(rng.gen_range(-50..=50), rng.gen_range(1..=20));
            let (a, b, c) = (draw(), draw(), draw());
            assert_eq!((a.clone() + &b) + &c, a.clone() + (b.clone() + &c));
            assert_eq!(
                a.clone() * (b.clone() + &c),
                a.clone() * &b + a.clone() * &c
            );
        }
    }

    #[test]
    fn float_tolerance_comparison() {
        let tol = Tolerance::default();
        assert!(1.0f64.eq_tol(&(1.0 + 1e-12), &tol));
        assert!(!1.0f64.eq_tol(&1.001, &tol));
        assert!(0.0f64.eq_tol(&1e-13, &tol));
        assert!(1e-3f64.lt_tol(&2e-3, &tol));
        assert!(!1.0f64.lt_tol(&(1.0 + 1e-12), &tol));
    }
}
