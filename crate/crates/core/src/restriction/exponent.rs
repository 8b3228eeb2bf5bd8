use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

pub type Rational = Ratio<i64>;

/// A Lebesgue exponent in `[1, ∞]`, kept exact.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Exponent {
    Finite(Rational),
    Infinite,
}

impl Exponent {
    pub fn finite(numer: i64, denom: i64) -> Result<Self> {
        if denom == 0 {
            return Err(Error::BadExponent(format!("{numer}/{denom}")));
        }
        let v = Rational::new(numer, denom);
        if v < Rational::one() {
            return Err(Error::BadExponent(format!("{v} is below 1")));
        }
        Ok(Exponent::Finite(v))
    }

    pub fn integer(n: i64) -> Result<Self> {
        Self::finite(n, 1)
    }

    /// `1/p`, with `1/∞ = 0`.
    pub fn reciprocal(&self) -> Rational {
        match self {
            Exponent::Finite(v) => v.recip(),
            Exponent::Infinite => Rational::zero(),
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Exponent::Finite(v) => *v.numer() as f64 / *v.denom() as f64,
            Exponent::Infinite => f64::INFINITY,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Exponent::Finite(_))
    }

    /// Hölder conjugate `p' = p/(p−1)`.
    pub fn conjugate(&self) -> Exponent {
        match self {
            Exponent::Infinite => Exponent::Finite(Rational::one()),
            Exponent::Finite(v) if v.is_one() => Exponent::Infinite,
            Exponent::Finite(v) => Exponent::Finite(v / (v - Rational::one())),
        }
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Exponent::Finite(v) if v.is_integer() => write!(f, "{}", v.numer()),
            Exponent::Finite(v) => write!(f, "{}/{}", v.numer(), v.denom()),
            Exponent::Infinite => f.write_str("inf"),
        }
    }
}

impl FromStr for Exponent {
    type Err = Error;

    /// Accepts `a/b`, an integer, or `inf`. Decimals are rejected so that
    /// region tests stay exact.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if matches!(s, "inf" | "infinity" | "∞") {
            return Ok(Exponent::Infinite);
        }
        let bad = || Error::BadExponent(format!("{s:?} is not of the form a/b, an integer, or inf"));
        let (numer, denom) = match s.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (s, "1"),
        };
        let numer = numer.parse::<i64>().map_err(|_| bad())?;
        let denom = denom.parse::<i64>().map_err(|_| bad())?;
        Self::finite(numer, denom)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ExponentPair {
    pub p: Exponent,
    pub r: Exponent,
}

impl ExponentPair {
    pub fn new(p: Exponent, r: Exponent) -> Self {
        Self { p, r }
    }

    pub fn parse(p: &str, r: &str) -> Result<Self> {
        Ok(Self::new(p.parse()?, r.parse()?))
    }

    /// `(1/p, 1/r)`.
    pub fn point(&self) -> (Rational, Rational) {
        (self.p.reciprocal(), self.r.reciprocal())
    }
}

impl fmt::Display for ExponentPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} -> {})", self.p, self.r)
    }
}
