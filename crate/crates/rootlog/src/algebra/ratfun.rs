//! Rational functions of the index `n`, kept in a canonical form
//! (gcd-reduced, monic denominator) so that structural equality is semantic
//! equality and certificates serialize reproducibly.

use std::fmt;

use super::poly::Poly;
use super::rat::Rational;
use super::scalar::Scalar;
use crate::{Error, Result};

#[derive(Clone, PartialEq, Eq)]
pub struct RationalFunction {
    num: Poly,
    den: Poly,
}

impl fmt::Debug for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_zero() {
            return write!(f, "({})/0", self.num);
        }
        if self.den == Poly::one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

impl RationalFunction {
    /// Canonicalizes eagerly: divides by the gcd and makes the denominator
    /// monic (its leading coefficient is then 1 > 0).
    pub fn new(num: Poly, den: Poly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZeroPoly);
        }
        if num.is_zero() {
            return Ok(RationalFunction {
                num: Poly::zero(),
                den: Poly::one(),
            });
        }
        let g = num.gcd(&den);
        let mut num = num.div_exact(&g)?;
        let mut den = den.div_exact(&g)?;
        let lead_inv = den.leading().recip();
        num = num.scale(&lead_inv);
        den = den.scale(&lead_inv);
        Ok(RationalFunction { num, den })
    }

    pub fn from_poly(p: Poly) -> Self {
        RationalFunction {
            num: p,
            den: Poly::one(),
        }
    }

    pub fn constant(c: Scalar) -> Self {
        Self::from_poly(Poly::constant(c))
    }

    pub fn zero() -> Self {
        Self::from_poly(Poly::zero())
    }

    pub fn one() -> Self {
        Self::from_poly(Poly::one())
    }

    pub fn var() -> Self {
        Self::from_poly(Poly::var())
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den == Poly::one()
    }

    pub fn add(&self, other: &Self) -> Self {
        let num = self
            .num
            .mul(&other.den)
            .add(&other.num.mul(&self.den));
        let den = self.den.mul(&other.den);
        Self::new(num, den).expect("nonzero denominators")
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        RationalFunction {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self::new(self.num.mul(&other.num), self.den.mul(&other.den))
            .expect("nonzero denominators")
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        if other.is_zero() {
            return Err(Error::DivisionByZeroPoly);
        }
        Self::new(self.num.mul(&other.den), self.den.mul(&other.num))
    }

    pub fn recip(&self) -> Result<Self> {
        Self::one().div(self)
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        Self::new(self.num.scale(c), self.den.clone()).expect("den nonzero")
    }

    /// Derivative with respect to n.
    pub fn derivative(&self) -> Self {
        let num = self
            .num
            .derivative()
            .mul(&self.den)
            .sub(&self.num.mul(&self.den.derivative()));
        let den = self.den.mul(&self.den);
        Self::new(num, den).expect("den nonzero")
    }

    /// Substitution n -> n + k.
    pub fn shift(&self, k: &Rational) -> Self {
        Self::new(self.num.compose_shift(k), self.den.compose_shift(k)).expect("den nonzero")
    }

    /// Exact evaluation; `None` at a pole.
    pub fn eval(&self, x: &Rational) -> Option<Scalar> {
        let d = self.den.eval_rational(x);
        if d.is_zero() {
            return None;
        }
        Some(self.num.eval_rational(x) / d)
    }

    /// Logarithmic derivative `num'/num - den'/den` as a rational function of
    /// the whole expression: `(f'/f)` where `f = self`.
    pub fn log_derivative(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZeroPoly);
        }
        self.derivative().div(self)
    }

    /// Sign of the value as n -> +infinity (sign of the ratio of leading
    /// coefficients); 0 for the zero function.
    pub fn sign_at_infinity(&self) -> i32 {
        if self.is_zero() {
            return 0;
        }
        (self.num.leading() / self.den.leading()).signum()
    }

    /// Degree of growth at infinity: deg num - deg den (None for zero).
    pub fn degree_at_infinity(&self) -> Option<i64> {
        let dn = self.num.degree()? as i64;
        let dd = self.den.degree().expect("canonical den nonzero") as i64;
        Some(dn - dd)
    }
}
