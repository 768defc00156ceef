//! Certified interval arithmetic with directed rounding, used wherever a sign
//! decision involves logarithms or other transcendental values.
//!
//! Endpoints are arbitrary-precision binary floats; every operation rounds
//! the lower endpoint toward -inf and the upper endpoint toward +inf, so the
//! computed interval always encloses the exact value.  Precision escalation
//! (doubling up to a hard cap) turns "the interval excludes zero" into a
//! terminating sign procedure for provably nonzero quantities; an interval
//! that still straddles zero at the cap is reported as an error, never
//! silently treated as a sign.

use std::cell::RefCell;

use astro_float::{BigFloat, Consts, RoundingMode, Sign as FSign};
use num_bigint::{BigInt, Sign as ISign};
use num_traits::Zero;

use crate::algebra::{Rational, Scalar};
use crate::{Error, Result};

/// Starting precision for escalation loops (bits).
pub const PREC_START: usize = 128;
/// Hard cap on working precision (bits).
pub const PREC_CAP: usize = 1 << 20;

thread_local! {
    static CONSTS: RefCell<Consts> = RefCell::new(Consts::new().expect("constants cache"));
}

fn with_consts<T>(f: impl FnOnce(&mut Consts) -> T) -> T {
    CONSTS.with(|c| f(&mut c.borrow_mut()))
}

/// A closed interval `[lo, hi]` with finite BigFloat endpoints.
#[derive(Clone, Debug)]
pub struct Interval {
    pub lo: BigFloat,
    pub hi: BigFloat,
}

fn bigint_to_float(x: &BigInt) -> BigFloat {
    if x.is_zero() {
        return BigFloat::from_i64(0, 64);
    }
    let (sign, digits) = x.to_u64_digits();
    let bits = (digits.len() * 64) as isize;
    debug_assert!(bits <= i32::MAX as isize);
    let s = match sign {
        ISign::Minus => FSign::Neg,
        _ => FSign::Pos,
    };
    // value = mantissa_fraction * 2^e with e = 64 * number_of_words
    BigFloat::from_words(&digits, s, bits as i32)
}

fn fmin(a: BigFloat, b: BigFloat) -> BigFloat {
    if a.cmp(&b).map(|o| o <= 0).unwrap_or(false) {
        a
    } else {
        b
    }
}

fn fmax(a: BigFloat, b: BigFloat) -> BigFloat {
    if a.cmp(&b).map(|o| o >= 0).unwrap_or(false) {
        a
    } else {
        b
    }
}

impl Interval {
    pub fn point_int(x: &BigInt) -> Interval {
        let v = bigint_to_float(x);
        Interval { lo: v.clone(), hi: v }
    }

    /// Encloses an exact rational at the given working precision.
    pub fn from_rational(x: &Rational, prec: usize) -> Interval {
        let n = bigint_to_float(x.numer());
        let d = bigint_to_float(x.denom());
        Interval {
            lo: n.div(&d, prec, RoundingMode::Down),
            hi: n.div(&d, prec, RoundingMode::Up),
        }
    }

    /// Encloses an exact scalar (rational or real algebraic).
    pub fn from_scalar(x: &Scalar, prec: usize) -> Interval {
        match x {
            Scalar::Rat(r) => Interval::from_rational(r, prec),
            alg => {
                let (lo, hi) = alg.rational_enclosure(prec as u32 + 2);
                let a = Interval::from_rational(&lo, prec);
                let b = Interval::from_rational(&hi, prec);
                Interval { lo: a.lo, hi: b.hi }
            }
        }
    }

    pub fn point_i64(x: i64, prec: usize) -> Interval {
        let v = BigFloat::from_i64(x, prec);
        Interval { lo: v.clone(), hi: v }
    }

    pub fn add(&self, o: &Interval, prec: usize) -> Interval {
        Interval {
            lo: self.lo.add(&o.lo, prec, RoundingMode::Down),
            hi: self.hi.add(&o.hi, prec, RoundingMode::Up),
        }
    }

    pub fn sub(&self, o: &Interval, prec: usize) -> Interval {
        Interval {
            lo: self.lo.sub(&o.hi, prec, RoundingMode::Down),
            hi: self.hi.sub(&o.lo, prec, RoundingMode::Up),
        }
    }

    pub fn neg(&self) -> Interval {
        Interval {
            lo: self.hi.neg(),
            hi: self.lo.neg(),
        }
    }

    pub fn mul(&self, o: &Interval, prec: usize) -> Interval {
        let pairs = [
            (&self.lo, &o.lo),
            (&self.lo, &o.hi),
            (&self.hi, &o.lo),
            (&self.hi, &o.hi),
        ];
        let mut lo: Option<BigFloat> = None;
        let mut hi: Option<BigFloat> = None;
        for (a, b) in pairs {
            let down = a.mul(b, prec, RoundingMode::Down);
            let up = a.mul(b, prec, RoundingMode::Up);
            lo = Some(match lo {
                None => down,
                Some(c) => fmin(down, c),
            });
            hi = Some(match hi {
                None => up,
                Some(c) => fmax(up, c),
            });
        }
        Interval {
            lo: lo.unwrap(),
            hi: hi.unwrap(),
        }
    }

    /// Division; the divisor interval must exclude zero.
    pub fn div(&self, o: &Interval, prec: usize) -> Result<Interval> {
        if o.contains_zero() {
            return Err(Error::PrecisionExhausted(prec));
        }
        let pairs = [
            (&self.lo, &o.lo),
            (&self.lo, &o.hi),
            (&self.hi, &o.lo),
            (&self.hi, &o.hi),
        ];
        let mut lo: Option<BigFloat> = None;
        let mut hi: Option<BigFloat> = None;
        for (a, b) in pairs {
            let down = a.div(b, prec, RoundingMode::Down);
            let up = a.div(b, prec, RoundingMode::Up);
            lo = Some(match lo {
                None => down,
                Some(c) => fmin(down, c),
            });
            hi = Some(match hi {
                None => up,
                Some(c) => fmax(up, c),
            });
        }
        Ok(Interval {
            lo: lo.unwrap(),
            hi: hi.unwrap(),
        })
    }

    /// Natural logarithm; the interval must be strictly positive.
    pub fn ln(&self, prec: usize) -> Result<Interval> {
        if !self.lo.is_positive() || self.lo.is_zero() {
            return Err(Error::PrecisionExhausted(prec));
        }
        Ok(Interval {
            lo: with_consts(|cc| self.lo.ln(prec, RoundingMode::Down, cc)),
            hi: with_consts(|cc| self.hi.ln(prec, RoundingMode::Up, cc)),
        })
    }

    pub fn exp(&self, prec: usize) -> Interval {
        Interval {
            lo: with_consts(|cc| self.lo.exp(prec, RoundingMode::Down, cc)),
            hi: with_consts(|cc| self.hi.exp(prec, RoundingMode::Up, cc)),
        }
    }

    /// Integer power, monotone per sign of the base interval.
    pub fn powi(&self, e: u64, prec: usize) -> Interval {
        if e == 0 {
            return Interval::point_i64(1, prec);
        }
        let e = e as usize;
        if e % 2 == 1 || (self.lo.is_positive() || self.lo.is_zero()) {
            Interval {
                lo: self.lo.powi(e, prec, RoundingMode::Down),
                hi: self.hi.powi(e, prec, RoundingMode::Up),
            }
        } else if self.hi.is_negative() {
            Interval {
                lo: self.hi.powi(e, prec, RoundingMode::Down),
                hi: self.lo.powi(e, prec, RoundingMode::Up),
            }
        } else {
            let a = self.lo.powi(e, prec, RoundingMode::Up);
            let b = self.hi.powi(e, prec, RoundingMode::Up);
            Interval {
                lo: BigFloat::from_i64(0, prec),
                hi: fmax(a, b),
            }
        }
    }

    /// `x^e` for a strictly positive interval and rational exponent, via
    /// `exp(e ln x)` (directed at every step).
    pub fn pow_rational(&self, e: &Rational, prec: usize) -> Result<Interval> {
        let l = self.ln(prec)?;
        let ef = Interval::from_rational(e, prec);
        Ok(l.mul(&ef, prec).exp(prec))
    }

    pub fn contains_zero(&self) -> bool {
        let lo_pos = self.lo.is_positive() && !self.lo.is_zero();
        let hi_neg = self.hi.is_negative() && !self.hi.is_zero();
        !lo_pos && !hi_neg
    }

    /// Definite sign of every point of the interval, if one exists.
    pub fn sign(&self) -> Option<i32> {
        if self.lo.is_positive() && !self.lo.is_zero() {
            Some(1)
        } else if self.hi.is_negative() && !self.hi.is_zero() {
            Some(-1)
        } else if self.lo.is_zero() && self.hi.is_zero() {
            Some(0)
        } else {
            None
        }
    }

    /// Strict pointwise comparison: Some(-1) if self < other everywhere,
    /// Some(1) if self > other everywhere.
    pub fn cmp_definite(&self, other: &Interval) -> Option<i32> {
        if self.hi.cmp(&other.lo).map(|o| o < 0).unwrap_or(false) {
            Some(-1)
        } else if self.lo.cmp(&other.hi).map(|o| o > 0).unwrap_or(false) {
            Some(1)
        } else {
            None
        }
    }
}

/// Runs `f` with escalating precision until it returns a definite answer.
/// `f` returns `Ok(Some(v))` when decided, `Ok(None)` to escalate; a
/// `PrecisionExhausted` error from `f` also escalates until the cap.
pub fn with_escalating_precision<T>(
    start: usize,
    cap: usize,
    mut f: impl FnMut(usize) -> Result<Option<T>>,
) -> Result<T> {
    let mut prec = start;
    loop {
        match f(prec) {
            Ok(Some(v)) => return Ok(v),
            Ok(None) | Err(Error::PrecisionExhausted(_)) => {
                if prec >= cap {
                    return Err(Error::PrecisionExhausted(cap));
                }
                prec *= 2;
            }
            Err(e) => return Err(e),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat_from;
    use num_traits::One;

    /// Independent enclosure of ln(x) for rational x > 0 via the atanh series
    /// in pure rational arithmetic, with a geometric tail bound.  Used only
    /// to cross-check the directed-rounding layer.
    fn ln_enclosure_rational(x: &Rational, terms: usize) -> (Rational, Rational) {
        assert!(x > &Rational::zero());
        let one = Rational::one();
        let two = Rational::from_integer(2.into());
        if x > &two {
            let (l1, h1) = ln_enclosure_rational(&(x / &two), terms);
            let (l2, h2) = ln_enclosure_rational(&two, terms);
            return (l1 + l2, h1 + h2);
        }
        if x < &rat_from(1, 2) {
            let (l1, h1) = ln_enclosure_rational(&(x * &two), terms);
            let (l2, h2) = ln_enclosure_rational(&two, terms);
            return (l1 - h2, h1 - l2);
        }
        let z = (x - &one) / (x + &one); // |z| <= 1/3 on [1/2, 2]
        let z2 = &z * &z;
        let mut sum = Rational::zero();
        let mut pow = z.clone();
        for k in 0..terms {
            sum += &pow / Rational::from_integer((2 * k as i64 + 1).into());
            pow *= &z2;
        }
        use num_traits::Signed;
        let tail = (&pow / (&one - &z2)).abs();
        ((&sum - &tail) * &two, (&sum + &tail) * &two)
    }

    fn float_leq_rational(f: &BigFloat, r: &Rational) -> bool {
        // f <= r iff f <= upper directed enclosure of r at high precision
        let iv = Interval::from_rational(r, 256);
        f.cmp(&iv.hi).map(|o| o <= 0).unwrap_or(false)
    }

    fn rational_leq_float(r: &Rational, f: &BigFloat) -> bool {
        let iv = Interval::from_rational(r, 256);
        iv.lo.cmp(f).map(|o| o <= 0).unwrap_or(false)
    }

    #[test]
    fn directed_rounding_brackets_exact_value() {
        // 1/3 is not a binary float: the enclosure must be strict
        let iv = Interval::from_rational(&rat_from(1, 3), 64);
        assert!(iv.lo.cmp(&iv.hi).unwrap() < 0);
        let three = Interval::point_i64(3, 64);
        let prod = iv.mul(&three, 64);
        let one = BigFloat::from_i64(1, 64);
        assert!(prod.lo.cmp(&one).unwrap() <= 0 && prod.hi.cmp(&one).unwrap() >= 0);
    }

    #[test]
    fn ln_agrees_with_rational_series() {
        for (p, q) in [(2i64, 1i64), (3, 1), (32, 1), (1, 4), (608, 5), (7, 3)] {
            let x = rat_from(p, q);
            let iv = Interval::from_rational(&x, 192).ln(192).unwrap();
            let (lo, hi) = ln_enclosure_rational(&x, 80);
            assert!(&hi - &lo < rat_from(1, 1_000_000_000_000));
            // [iv.lo, iv.hi] must intersect-cover [lo, hi]
            assert!(float_leq_rational(&iv.lo, &hi), "ln lower end too high for {p}/{q}");
            assert!(rational_leq_float(&lo, &iv.hi), "ln upper end too low for {p}/{q}");
        }
    }

    #[test]
    fn big_integer_roundtrip_exact() {
        let big: BigInt = BigInt::from(7).pow(120u32);
        let iv = Interval::point_int(&big);
        assert_eq!(iv.lo.cmp(&iv.hi), Some(0));
        let one = iv.div(&iv, 512).unwrap();
        let exact_one = BigFloat::from_i64(1, 64);
        assert!(one.lo.cmp(&exact_one).unwrap() <= 0 && one.hi.cmp(&exact_one).unwrap() >= 0);
    }

    #[test]
    fn escalation_decides_tiny_sign() {
        // ln(1 + 2^-200) is positive but needs > 200 bits to see
        let x = Rational::one() + Rational::new(1.into(), BigInt::from(2).pow(200u32));
        let sign = with_escalating_precision(PREC_START, PREC_CAP, |prec| {
            let iv = Interval::from_rational(&x, prec).ln(prec)?;
            Ok(iv.sign())
        })
        .unwrap();
        assert_eq!(sign, 1);
    }

    #[test]
    fn powi_even_negative_interval() {
        let iv = Interval {
            lo: BigFloat::from_i64(-3, 64),
            hi: BigFloat::from_i64(-2, 64),
        };
        let sq = iv.powi(2, 64);
        assert_eq!(sq.lo.cmp(&BigFloat::from_i64(4, 64)), Some(0));
        assert_eq!(sq.hi.cmp(&BigFloat::from_i64(9, 64)), Some(0));
    }
}
