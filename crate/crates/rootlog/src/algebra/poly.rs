//! Univariate polynomials in the sequence index `n`, with exact [`Scalar`]
//! coefficients (rational in the common case, real algebraic when the
//! dominant characteristic root is irrational).

use std::fmt;

use num_traits::{One, Signed, Zero};

use super::rat::{to_string_rational, Rational};
use super::scalar::Scalar;
use crate::{Error, Result};

/// Coefficients constant-first; the leading (last) coefficient of a nonzero
/// polynomial is nonzero.  The zero polynomial has an empty coefficient list.
#[derive(Clone, PartialEq, Eq)]
pub struct Poly {
    coeffs: Vec<Scalar>,
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl Poly {
    pub fn new(mut coeffs: Vec<Scalar>) -> Self {
        while coeffs.last().map(|c| c.is_zero()).unwrap_or(false) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: vec![] }
    }

    pub fn one() -> Self {
        Poly::constant(Scalar::one())
    }

    pub fn constant(c: Scalar) -> Self {
        Poly::new(vec![c])
    }

    /// The variable n itself.
    pub fn var() -> Self {
        Poly::new(vec![Scalar::zero(), Scalar::one()])
    }

    pub fn from_rationals(cs: &[Rational]) -> Self {
        Poly::new(cs.iter().cloned().map(Scalar::Rat).collect())
    }

    pub fn from_ints(cs: &[i64]) -> Self {
        Poly::new(cs.iter().map(|&c| Scalar::from_int(c)).collect())
    }

    /// `prod (x - roots[i])`, for tests and bound construction.
    pub fn from_roots(roots: &[Scalar]) -> Self {
        let mut p = Poly::one();
        for r in roots {
            p = p.mul(&Poly::new(vec![r.neg(), Scalar::one()]));
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Scalar {
        self.coeffs.get(i).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn leading(&self) -> Scalar {
        self.coeffs.last().cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn is_rational(&self) -> bool {
        self.coeffs.iter().all(|c| matches!(c, Scalar::Rat(_)))
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(self.coeff(i) + other.coeff(i));
        }
        Poly::new(out)
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Poly {
        Poly {
            coeffs: self.coeffs.iter().map(|c| c.neg()).collect(),
        }
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![Scalar::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                out[i + j] = std::mem::replace(&mut out[i + j], Scalar::zero())
                    + a.clone() * b.clone();
            }
        }
        Poly::new(out)
    }

    pub fn scale(&self, c: &Scalar) -> Poly {
        Poly::new(self.coeffs.iter().map(|x| x.clone() * c.clone()).collect())
    }

    pub fn pow(&self, e: usize) -> Poly {
        let mut acc = Poly::one();
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Euclidean division; errors on a zero divisor.
    pub fn divrem(&self, divisor: &Poly) -> Result<(Poly, Poly)> {
        if divisor.is_zero() {
            return Err(Error::DivisionByZeroPoly);
        }
        let dlen = divisor.coeffs.len();
        let lead_inv = divisor.leading().recip();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![Scalar::zero(); self.coeffs.len().saturating_sub(dlen) + 1];
        while rem.len() >= dlen {
            let last = rem.last().unwrap().clone();
            if last.is_zero() {
                rem.pop();
                continue;
            }
            let shift = rem.len() - dlen;
            let q = last * lead_inv.clone();
            quot[shift] = q.clone();
            for (i, c) in divisor.coeffs.iter().enumerate() {
                let t = std::mem::replace(&mut rem[shift + i], Scalar::zero());
                rem[shift + i] = t - q.clone() * c.clone();
            }
            debug_assert!(rem.last().unwrap().is_zero());
            rem.pop();
        }
        Ok((Poly::new(quot), Poly::new(rem)))
    }

    /// Exact quotient; panics in debug builds if the division is not exact.
    pub fn div_exact(&self, divisor: &Poly) -> Result<Poly> {
        let (q, r) = self.divrem(divisor)?;
        debug_assert!(r.is_zero(), "division expected exact");
        Ok(q)
    }

    /// Monic gcd by the Euclidean algorithm.  Rational-coefficient inputs are
    /// content-normalized at every step to keep coefficient growth in check.
    pub fn gcd(&self, other: &Poly) -> Poly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.divrem(&b).expect("b nonzero");
            a = b;
            b = r.normalize_positive();
        }
        if a.is_zero() {
            return a;
        }
        a.monic()
    }

    /// Divides by the leading coefficient.
    pub fn monic(&self) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let inv = self.leading().recip();
        self.scale(&inv)
    }

    /// Rescales by a positive constant to tame rational coefficient growth;
    /// sign-preserving, so safe inside Sturm-style remainder sequences.
    pub fn normalize_positive(&self) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        if self.is_rational() {
            // divide by |content|
            let mut num_gcd = num_bigint::BigInt::zero();
            let mut den_lcm = num_bigint::BigInt::one();
            for c in &self.coeffs {
                let r = c.expect_rational();
                if !r.is_zero() {
                    num_gcd = num_integer::Integer::gcd(&num_gcd, r.numer());
                    den_lcm = num_integer::Integer::lcm(&den_lcm, r.denom());
                }
            }
            if num_gcd.is_zero() {
                return self.clone();
            }
            let content = Rational::new(num_gcd.abs(), den_lcm);
            let inv = Scalar::Rat(content.recip());
            self.scale(&inv)
        } else {
            // scale by the reciprocal of |leading|
            let lead = self.leading();
            let scale = if lead.is_negative() {
                lead.neg().recip()
            } else {
                lead.recip()
            };
            self.scale(&scale)
        }
    }

    pub fn derivative(&self) -> Poly {
        if self.coeffs.len() <= 1 {
            return Poly::zero();
        }
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c.clone() * Scalar::from_int(i as i64))
                .collect(),
        )
    }

    pub fn eval_rational(&self, x: &Rational) -> Scalar {
        self.eval(&Scalar::Rat(x.clone()))
    }

    pub fn eval(&self, x: &Scalar) -> Scalar {
        let mut acc = Scalar::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x.clone() + c.clone();
        }
        acc
    }

    /// Taylor shift: `p(n + k)`.
    pub fn compose_shift(&self, k: &Rational) -> Poly {
        if k.is_zero() || self.is_zero() {
            return self.clone();
        }
        // repeated synthetic division by (x - (-k))
        let mut cs = self.coeffs.clone();
        let n = cs.len();
        let kk = Scalar::Rat(k.clone());
        for i in 0..n - 1 {
            for j in (i..n - 1).rev() {
                let t = cs[j + 1].clone() * kk.clone();
                cs[j] = std::mem::replace(&mut cs[j], Scalar::zero()) + t;
            }
        }
        Poly::new(cs)
    }

    /// Squarefree part `p / gcd(p, p')`, monic.
    pub fn squarefree_part(&self) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let g = self.gcd(&self.derivative());
        if g.degree() == Some(0) {
            return self.monic();
        }
        self.div_exact(&g).expect("gcd divides").monic()
    }

    /// Yun's squarefree decomposition: returns `(factor, multiplicity)` with
    /// `p = lc * prod factor_i^{mult_i}`, factors monic, squarefree, coprime.
    pub fn squarefree_decomposition(&self) -> Vec<(Poly, usize)> {
        let mut out = vec![];
        if self.degree().unwrap_or(0) == 0 {
            return out;
        }
        let p = self.monic();
        let dp = p.derivative();
        let g = p.gcd(&dp);
        if g.degree() == Some(0) {
            out.push((p, 1));
            return out;
        }
        let mut c = p.div_exact(&g).unwrap();
        let mut d = dp.div_exact(&g).unwrap().sub(&c.derivative());
        let mut i = 1usize;
        while c.degree().map(|dg| dg > 0).unwrap_or(false) {
            let a = c.gcd(&d);
            if a.degree().map(|dg| dg > 0).unwrap_or(false) {
                out.push((a.clone(), i));
            }
            let a_or_one = if a.is_zero() { Poly::one() } else { a };
            c = c.div_exact(&a_or_one).unwrap();
            d = d.div_exact(&a_or_one).unwrap().sub(&c.derivative());
            i += 1;
        }
        out
    }

    /// Display with a named variable.
    pub fn to_string_in(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut parts = vec![];
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let cs = match c {
                Scalar::Rat(r) => {
                    if i > 0 && r.is_one() {
                        String::new()
                    } else if i > 0 && (-r.clone()).is_one() {
                        "-".into()
                    } else {
                        to_string_rational(r)
                    }
                }
                alg => format!("({alg})"),
            };
            let v = match i {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{i}"),
            };
            let sep = if !cs.is_empty() && !v.is_empty() && cs != "-" {
                "*"
            } else {
                ""
            };
            parts.push(format!("{cs}{sep}{v}"));
        }
        parts.join(" + ").replace("+ -", "- ")
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_string_in("n"))
    }
}
