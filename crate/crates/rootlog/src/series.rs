//! Truncated generalized power series in `x = n^(-1/rho)` whose coefficients
//! may carry a single power of `log n`, plus the second/third-difference
//! expansions of `log(a_n)/n` that drive the asymptotic classification.
//!
//! A series stores its truncation order `K` explicitly: terms with exponent
//! `s > K` are unknown, i.e. the series denotes its sum plus `o(n^(-K/rho))`.
//! Every operation returns the weakest valid truncation order, so a leading
//! term read off a series is always certified.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::algebra::{rat_i64, Rational, Scalar};
use crate::{Error, Result};

/// Coefficient `c0 + c1 * log n`.
pub type LogCoeff = (Scalar, Scalar);

#[derive(Clone, PartialEq, Eq)]
pub struct PSeries {
    rho: u32,
    /// truncation order: exponents s with s > order are unknown
    order: i64,
    /// s -> coefficient of n^(-s/rho); zero coefficients are not stored
    terms: BTreeMap<i64, LogCoeff>,
}

impl fmt::Debug for PSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for PSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = vec![];
        for (s, (c0, c1)) in &self.terms {
            let expo = if *s == 0 {
                String::new()
            } else if self.rho == 1 {
                format!("*n^-{s}")
            } else {
                format!("*n^(-{}/{})", s, self.rho)
            };
            if !c0.is_zero() {
                parts.push(format!("({c0}){expo}"));
            }
            if !c1.is_zero() {
                parts.push(format!("({c1})*log(n){expo}"));
            }
        }
        if parts.is_empty() {
            parts.push("0".into());
        }
        let tail = if self.rho == 1 {
            format!("o(n^-{})", self.order)
        } else {
            format!("o(n^(-{}/{}))", self.order, self.rho)
        };
        write!(f, "{} + {}", parts.join(" + "), tail)
    }
}

impl PSeries {
    pub fn zero(rho: u32, order: i64) -> Self {
        assert!(rho >= 1);
        PSeries {
            rho,
            order,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(c: Scalar, rho: u32, order: i64) -> Self {
        let mut s = Self::zero(rho, order);
        s.add_term(0, c, Scalar::zero());
        s
    }

    pub fn one(rho: u32, order: i64) -> Self {
        Self::constant(Scalar::one(), rho, order)
    }

    pub fn rho(&self) -> u32 {
        self.rho
    }

    pub fn order(&self) -> i64 {
        self.order
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &LogCoeff)> {
        self.terms.iter().map(|(s, c)| (*s, c))
    }

    pub fn coeff(&self, s: i64) -> LogCoeff {
        self.terms
            .get(&s)
            .cloned()
            .unwrap_or((Scalar::zero(), Scalar::zero()))
    }

    pub fn add_term(&mut self, s: i64, c0: Scalar, c1: Scalar) {
        if s > self.order {
            return; // beyond the truncation order: unknown anyway
        }
        let entry = self
            .terms
            .entry(s)
            .or_insert((Scalar::zero(), Scalar::zero()));
        entry.0 = std::mem::replace(&mut entry.0, Scalar::zero()) + c0;
        entry.1 = std::mem::replace(&mut entry.1, Scalar::zero()) + c1;
        if entry.0.is_zero() && entry.1.is_zero() {
            self.terms.remove(&s);
        }
    }

    pub fn is_log_free(&self) -> bool {
        self.terms.values().all(|(_, c1)| c1.is_zero())
    }

    pub fn is_zero_through_order(&self) -> bool {
        self.terms.is_empty()
    }

    /// Smallest exponent with a nonzero coefficient.
    pub fn min_exponent(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    /// First nonzero `(s, c0, c1)`.
    pub fn leading_term(&self) -> Option<(i64, Scalar, Scalar)> {
        self.terms
            .iter()
            .next()
            .map(|(s, (c0, c1))| (*s, c0.clone(), c1.clone()))
    }

    pub fn truncate(&self, order: i64) -> PSeries {
        let mut out = self.clone();
        out.order = order.min(self.order);
        out.terms.retain(|s, _| *s <= out.order);
        out
    }

    /// Rescales exponents to a common rho grid (`to_rho` must be a multiple).
    pub fn lift_rho(&self, to_rho: u32) -> PSeries {
        assert!(to_rho % self.rho == 0);
        let f = (to_rho / self.rho) as i64;
        PSeries {
            rho: to_rho,
            order: self.order.saturating_mul(f),
            terms: self
                .terms
                .iter()
                .map(|(s, c)| (s * f, c.clone()))
                .collect(),
        }
    }

    fn common_grid(a: &PSeries, b: &PSeries) -> (PSeries, PSeries) {
        if a.rho == b.rho {
            return (a.clone(), b.clone());
        }
        let l = num_integer::lcm(a.rho, b.rho);
        (a.lift_rho(l), b.lift_rho(l))
    }

    pub fn add(&self, other: &PSeries) -> PSeries {
        let (a, b) = Self::common_grid(self, other);
        let order = a.order.min(b.order);
        let mut out = PSeries::zero(a.rho, order);
        for (s, (c0, c1)) in a.terms.iter().chain(b.terms.iter()) {
            out.add_term(*s, c0.clone(), c1.clone());
        }
        out
    }

    pub fn sub(&self, other: &PSeries) -> PSeries {
        self.add(&other.scale(&Scalar::from_int(-1)))
    }

    pub fn scale(&self, c: &Scalar) -> PSeries {
        let mut out = PSeries::zero(self.rho, self.order);
        for (s, (c0, c1)) in &self.terms {
            out.add_term(*s, c0.clone() * c.clone(), c1.clone() * c.clone());
        }
        out
    }

    /// Multiplies a log-free series by the coefficient `c0 + c1 log n`.
    pub fn scale_logpair(&self, c0: &Scalar, c1: &Scalar) -> Result<PSeries> {
        if !self.is_log_free() && !c1.is_zero() {
            return Err(Error::LogPowerTooHigh);
        }
        let mut out = PSeries::zero(self.rho, self.order);
        for (s, (a0, a1)) in &self.terms {
            out.add_term(
                *s,
                a0.clone() * c0.clone(),
                a0.clone() * c1.clone() + a1.clone() * c0.clone(),
            );
        }
        Ok(out)
    }

    /// Shifts the whole series by `x^t` (adds `t` to every exponent).
    pub fn mul_xpow(&self, t: i64) -> PSeries {
        PSeries {
            rho: self.rho,
            order: self.order + t,
            terms: self
                .terms
                .iter()
                .map(|(s, c)| (s + t, c.clone()))
                .collect(),
        }
    }

    pub fn mul(&self, other: &PSeries) -> Result<PSeries> {
        let (a, b) = Self::common_grid(self, other);
        // (a + o(x^Ka)) (b + o(x^Kb)): the error terms contribute
        // o(x^{Ka+lb}) and o(x^{Kb+la}) with l the least exponents
        let la = a.min_exponent().unwrap_or(a.order);
        let lb = b.min_exponent().unwrap_or(b.order);
        let order = (a.order.saturating_add(lb)).min(b.order.saturating_add(la));
        let mut out = PSeries::zero(a.rho, order);
        for (s, (c0, c1)) in &a.terms {
            for (t, (d0, d1)) in &b.terms {
                if s + t > order {
                    continue;
                }
                if !c1.is_zero() && !d1.is_zero() {
                    return Err(Error::LogPowerTooHigh);
                }
                out.add_term(
                    s + t,
                    c0.clone() * d0.clone(),
                    c0.clone() * d1.clone() + c1.clone() * d0.clone(),
                );
            }
        }
        Ok(out)
    }

    /// Reciprocal; the constant term must be nonzero with no log part.
    pub fn recip(&self) -> Result<PSeries> {
        let (a0, l0) = self.coeff(0);
        if a0.is_zero() || !l0.is_zero() {
            return Err(Error::BadConstantTerm);
        }
        let inv0 = a0.recip();
        let mut out = PSeries::zero(self.rho, self.order);
        out.add_term(0, inv0.clone(), Scalar::zero());
        for s in 1..=self.order {
            // b_s = -(sum_{t=1..s} a_t b_{s-t}) / a_0
            let mut acc0 = Scalar::zero();
            let mut acc1 = Scalar::zero();
            for (t, (c0, c1)) in self.terms.range(1..=s) {
                let (b0, b1) = out.coeff(s - t);
                if !c1.is_zero() && !b1.is_zero() {
                    return Err(Error::LogPowerTooHigh);
                }
                acc0 = acc0 + c0.clone() * b0.clone();
                acc1 = acc1 + c0.clone() * b1 + c1.clone() * b0;
            }
            if !acc0.is_zero() || !acc1.is_zero() {
                out.add_term(s, acc0.neg() * inv0.clone(), acc1.neg() * inv0.clone());
            }
        }
        Ok(out)
    }

    /// Logarithm; the constant term must be exactly 1 (log-free).
    pub fn log(&self) -> Result<PSeries> {
        let (a0, l0) = self.coeff(0);
        if !a0.is_one() || !l0.is_zero() {
            return Err(Error::BadConstantTerm);
        }
        let mut u = self.clone();
        u.terms.remove(&0);
        // log(1+u) = sum (-1)^{k+1} u^k / k; u has min exponent >= 1
        let mut out = PSeries::zero(self.rho, self.order);
        let mut upow = u.clone();
        let mut k = 1i64;
        while !upow.is_zero_through_order() && k <= self.order {
            let sign = if k % 2 == 1 { 1 } else { -1 };
            let c = Scalar::Rat(Rational::new(sign.into(), k.into()));
            out = out.add(&upow.scale(&c));
            upow = upow.mul(&u)?;
            k += 1;
        }
        out.order = out.order.min(self.order);
        Ok(out)
    }

    /// Exponential of a series with zero constant term.
    pub fn exp(&self) -> Result<PSeries> {
        let (a0, l0) = self.coeff(0);
        if !a0.is_zero() || !l0.is_zero() {
            return Err(Error::BadConstantTerm);
        }
        let mut out = PSeries::one(self.rho, self.order);
        let mut upow = PSeries::one(self.rho, self.order);
        let mut fact = Rational::one();
        let mut k = 1i64;
        loop {
            upow = upow.mul(self)?;
            if upow.is_zero_through_order() || k > self.order {
                break;
            }
            fact *= rat_i64(k);
            out = out.add(&upow.scale(&Scalar::Rat(fact.recip())));
            k += 1;
        }
        out.order = out.order.min(self.order);
        Ok(out)
    }

    /// `(1 + k/n)^e` as a series on the rho-grid, truncated at `order`.
    pub fn binomial(e: &Scalar, k: &Rational, rho: u32, order: i64) -> PSeries {
        let mut out = PSeries::zero(rho, order);
        let mut coef = Scalar::one();
        let mut kpow = Rational::one();
        let mut j = 0i64;
        loop {
            let s = j * rho as i64;
            if s > order {
                break;
            }
            out.add_term(s, coef.clone() * Scalar::Rat(kpow.clone()), Scalar::zero());
            // C(e, j+1) = C(e, j) (e - j)/(j+1)
            coef = coef * (e.clone() - Scalar::from_int(j)) / Scalar::from_int(j + 1);
            kpow *= k;
            j += 1;
            if coef.is_zero() {
                break;
            }
        }
        out
    }

    /// `log(1 + k/n)` as a series on the rho-grid.
    pub fn log1p(k: &Rational, rho: u32, order: i64) -> PSeries {
        let mut out = PSeries::zero(rho, order);
        let mut kpow = k.clone();
        let mut m = 1i64;
        loop {
            let s = m * rho as i64;
            if s > order {
                break;
            }
            let sign = if m % 2 == 1 { 1 } else { -1 };
            out.add_term(
                s,
                Scalar::Rat(&kpow * Rational::new(sign.into(), m.into())),
                Scalar::zero(),
            );
            kpow *= k;
            m += 1;
        }
        out
    }

    /// `(1 + k/n)^w * a(n+k)` re-expanded around n.
    ///
    /// Each stored term `a_s x^s` contributes, at `n+k`,
    /// `(c0 + c1 log n + c1 log(1+k/n)) * x^s * (1+k/n)^{w - s/rho}`; the
    /// per-term exponent folds the weight and the term's own power.
    pub fn shift(&self, k: i64, w: &Scalar) -> Result<PSeries> {
        let rho = self.rho;
        let order = self.order;
        let kq = rat_i64(k);
        let mut out = PSeries::zero(rho, order);
        for (s, (c0, c1)) in &self.terms {
            let e = w.clone() - Scalar::Rat(Rational::new((*s).into(), (rho as i64).into()));
            let binom = Self::binomial(&e, &kq, rho, order - s);
            let mut part = binom.scale_logpair(c0, c1)?;
            if !c1.is_zero() && k != 0 {
                let l = Self::log1p(&kq, rho, order - s);
                part = part.add(&l.mul(&binom)?.scale(c1));
            }
            out = out.add(&part.mul_xpow(*s));
        }
        Ok(out)
    }
}

/// Difference combinations applied to `log(a_n)/n` by the two criteria.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DeltaVariant {
    /// second difference: log-concavity of the root sequence
    LogConcave,
    /// third difference: ratio log-convexity of the root sequence
    RatioLogConvex,
}

impl DeltaVariant {
    /// (offset k, integer weight) pairs; weights sum to zero, and for the
    /// third difference the linear moments vanish as well.
    pub fn combo(self) -> &'static [(i64, i64)] {
        match self {
            DeltaVariant::LogConcave => &[(1, 1), (-1, 1), (0, -2)],
            DeltaVariant::RatioLogConvex => &[(2, -1), (1, 3), (0, -3), (-1, 1)],
        }
    }
}

/// Asymptotic expansion of the difference combination applied to
/// `log(a_n)/n`, for a normalized expansion of `a_n` with parameters
/// `(mu0, mu_j for j = 1..rho-1, r, b_1..b_M)` and `b_0 = 1`.
///
/// The four structural pieces of `log(a_n)/n` are expanded separately:
/// `mu0 log n`, the sub-exponential terms `mu_j n^{j/rho-1}`, `r log n / n`,
/// and the tail `sum b~_s n^{-1-s/rho}`.  Constants (including `mu_rho`)
/// vanish under any difference combination and never enter.
pub fn delta_expansion(
    mu0: &Rational,
    mu_sub: &[Scalar],
    r: &Scalar,
    b: &[Scalar],
    rho: u32,
    variant: DeltaVariant,
    k_order: i64,
) -> Result<PSeries> {
    let m_avail = b.len() as i64;
    // the first unknown tail coefficient b~_{M+1} enters at 3*rho + M + 1
    // (second difference) or 4*rho + M + 1 (third difference)
    let base = match variant {
        DeltaVariant::LogConcave => 3,
        DeltaVariant::RatioLogConvex => 4,
    };
    let max_order = base * rho as i64 + m_avail;
    if k_order > max_order {
        return Err(Error::InsufficientOrder(format!(
            "delta expansion valid to order {max_order}, requested {k_order}"
        )));
    }
    let order = k_order;
    let combo = variant.combo();
    let mut total = PSeries::zero(rho, order);

    // piece 1: mu0 * combo[log(n+k)] = mu0 * sum_k w_k log(1 + k/n)
    // (the log n parts cancel because the weights sum to zero)
    if !mu0.is_zero() {
        let mut p = PSeries::zero(rho, order);
        for (k, w) in combo {
            if *k != 0 {
                p = p.add(&PSeries::log1p(&rat_i64(*k), rho, order).scale(&Scalar::from_int(*w)));
            }
        }
        total = total.add(&p.scale(&Scalar::Rat(mu0.clone())));
    }

    // piece 2: sub-exponential mu_j n^{(j-rho)/rho}, 1 <= j <= rho-1
    for (idx, mu_j) in mu_sub.iter().enumerate() {
        let j = idx as i64 + 1;
        if mu_j.is_zero() {
            continue;
        }
        let e = Scalar::Rat(Rational::new(j.into(), (rho as i64).into()) - Rational::one());
        let xshift = rho as i64 - j; // n^{(j-rho)/rho} = x^{rho-j}
        let mut bracket = PSeries::zero(rho, order - xshift);
        for (k, w) in combo {
            let term = if *k == 0 {
                PSeries::one(rho, order - xshift)
            } else {
                PSeries::binomial(&e, &rat_i64(*k), rho, order - xshift)
            };
            bracket = bracket.add(&term.scale(&Scalar::from_int(*w)));
        }
        total = total.add(&bracket.mul_xpow(xshift).scale(mu_j));
    }

    // piece 3: r log n / n; log(n+k)/(n+k) splits into a log n part with a
    // rational-series multiplier and a log-free rest
    if !r.is_zero() {
        let minus_one = Scalar::from_int(-1);
        let mut m_logn = PSeries::zero(rho, order);
        let mut m_rest = PSeries::zero(rho, order);
        for (k, w) in combo {
            let inv_nk = PSeries::binomial(&minus_one, &rat_i64(*k), rho, order - rho as i64)
                .mul_xpow(rho as i64);
            m_logn = m_logn.add(&inv_nk.scale(&Scalar::from_int(*w)));
            if *k != 0 {
                let l = PSeries::log1p(&rat_i64(*k), rho, order - rho as i64);
                m_rest = m_rest.add(
                    &l.mul(&PSeries::binomial(&minus_one, &rat_i64(*k), rho, order - rho as i64))?
                        .mul_xpow(rho as i64)
                        .scale(&Scalar::from_int(*w)),
                );
            }
        }
        let with_log = m_logn.scale_logpair(&Scalar::zero(), &Scalar::one())?;
        total = total.add(&with_log.add(&m_rest).scale(r));
    }

    // piece 4: tail sum_s b~_s n^{-1-s/rho}; the b~ are the log-series
    // coefficients of 1 + sum b_s x^s, with b~_0 = log 1 = 0
    let mut bseries = PSeries::one(rho, m_avail);
    for (i, bs) in b.iter().enumerate() {
        bseries.add_term(i as i64 + 1, bs.clone(), Scalar::zero());
    }
    let w_tail = bseries.log()?;
    for (s, (ws, wl)) in w_tail.terms() {
        debug_assert!(wl.is_zero());
        let e = Scalar::Rat(-Rational::one() - Rational::new(s.into(), (rho as i64).into()));
        let xshift = rho as i64 + s;
        if xshift > order {
            break;
        }
        let mut bracket = PSeries::zero(rho, order - xshift);
        for (k, w) in combo {
            let term = if *k == 0 {
                PSeries::one(rho, order - xshift)
            } else {
                PSeries::binomial(&e, &rat_i64(*k), rho, order - xshift)
            };
            bracket = bracket.add(&term.scale(&Scalar::from_int(*w)));
        }
        total = total.add(&bracket.mul_xpow(xshift).scale(ws));
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat_from;

    fn srat(p: i64, q: i64) -> Scalar {
        Scalar::Rat(rat_from(p, q))
    }

    fn series_from(rho: u32, order: i64, terms: &[(i64, Scalar)]) -> PSeries {
        let mut s = PSeries::zero(rho, order);
        for (e, c) in terms {
            s.add_term(*e, c.clone(), Scalar::zero());
        }
        s
    }

    #[test]
    fn product_telescopes() {
        // (1 + 1/n)(1 - 1/n) = 1 - 1/n^2 at K=2
        let a = series_from(1, 2, &[(0, Scalar::one()), (1, Scalar::one())]);
        let b = series_from(1, 2, &[(0, Scalar::one()), (1, Scalar::from_int(-1))]);
        let p = a.mul(&b).unwrap();
        assert_eq!(p.coeff(0).0, Scalar::one());
        assert_eq!(p.coeff(1).0, Scalar::zero());
        assert_eq!(p.coeff(2).0, Scalar::from_int(-1));
    }

    #[test]
    fn recip_geometric() {
        // 1/(1 - 1/n) = 1 + 1/n + 1/n^2 + 1/n^3 at K=3
        let a = series_from(1, 3, &[(0, Scalar::one()), (1, Scalar::from_int(-1))]);
        let r = a.recip().unwrap();
        for s in 0..=3 {
            assert_eq!(r.coeff(s).0, Scalar::one(), "coefficient at {s}");
        }
    }

    #[test]
    fn gn_head_square() {
        // (1 + 11/(24n))^2 = 1 + 11/(12n) + 121/(576 n^2)
        let a = series_from(1, 2, &[(0, Scalar::one()), (1, srat(11, 24))]);
        let p = a.mul(&a).unwrap();
        assert_eq!(p.coeff(1).0, srat(11, 12));
        assert_eq!(p.coeff(2).0, srat(121, 576));
    }

    #[test]
    fn log_series() {
        // log(1 + 1/n) = 1/n - 1/(2n^2) + 1/(3n^3)
        let a = series_from(1, 3, &[(0, Scalar::one()), (1, Scalar::one())]);
        let l = a.log().unwrap();
        assert_eq!(l.coeff(1).0, Scalar::one());
        assert_eq!(l.coeff(2).0, srat(-1, 2));
        assert_eq!(l.coeff(3).0, srat(1, 3));

        // log(1 - 1/n^2) = -1/n^2 - 1/(2n^4) at K=4
        let b = series_from(1, 4, &[(0, Scalar::one()), (2, Scalar::from_int(-1))]);
        let l = b.log().unwrap();
        assert_eq!(l.coeff(2).0, Scalar::from_int(-1));
        assert_eq!(l.coeff(3).0, Scalar::zero());
        assert_eq!(l.coeff(4).0, srat(-1, 2));

        // log(1) = 0
        let one = PSeries::one(1, 5);
        assert!(one.log().unwrap().is_zero_through_order());
    }

    #[test]
    fn log_requires_unit_constant() {
        let a = series_from(1, 3, &[(0, Scalar::from_int(2))]);
        assert!(a.log().is_err());
    }

    #[test]
    fn shift_identity_at_k0() {
        let a = series_from(1, 4, &[(0, Scalar::one()), (1, srat(-3, 2)), (3, srat(7, 5))]);
        let s = a.shift(0, &Scalar::zero()).unwrap();
        assert_eq!(s, a);
    }

    #[test]
    fn shift_combo_matches_subexponential_bracket() {
        // (1+1/n)^e + (1-1/n)^e - 2 with e = j/rho - 1 has leading term
        // e(e-1)/n^2 = (j/rho-1)(j/rho-2)/n^2
        for (j, rho) in [(1u32, 3u32), (2, 3), (1, 2)] {
            let e = Scalar::Rat(
                Rational::new((j as i64).into(), (rho as i64).into()) - Rational::one(),
            );
            let order = 3 * rho as i64;
            let one = PSeries::one(rho, order);
            let sum = one
                .shift(1, &e)
                .unwrap()
                .add(&one.shift(-1, &e).unwrap())
                .add(&one.scale(&Scalar::from_int(-2)));
            let (s, c0, c1) = sum.leading_term().unwrap();
            assert_eq!(s, 2 * rho as i64, "leading exponent for j={j}, rho={rho}");
            assert!(c1.is_zero());
            let jr = Rational::new((j as i64).into(), (rho as i64).into());
            let expected = Scalar::Rat((jr.clone() - Rational::one()) * (jr - rat_i64(2)));
            assert_eq!(c0, expected);
        }
    }

    #[test]
    fn shift_combo_matches_tail_bracket() {
        // same combo on n^{-(1+s/rho)}: leading term (1+s/rho)(2+s/rho)/n^2
        for (s, rho) in [(0i64, 1u32), (1, 1), (2, 3)] {
            let e = Scalar::Rat(-Rational::one() - Rational::new(s.into(), (rho as i64).into()));
            let order = 3 * rho as i64;
            let one = PSeries::one(rho, order);
            let sum = one
                .shift(1, &e)
                .unwrap()
                .add(&one.shift(-1, &e).unwrap())
                .add(&one.scale(&Scalar::from_int(-2)));
            let (se, c0, _) = sum.leading_term().unwrap();
            assert_eq!(se, 2 * rho as i64);
            let sr = Rational::new(s.into(), (rho as i64).into());
            let expected = Scalar::Rat((Rational::one() + sr.clone()) * (rat_i64(2) + sr));
            assert_eq!(c0, expected);
        }
    }

    #[test]
    fn shift_roundtrip() {
        // shift by +1 then -1 with the same weight recovers the series:
        // (1-1/n)^w * (1 + 1/(n-1))^w = 1 exactly
        let a = series_from(
            1,
            5,
            &[(0, Scalar::one()), (1, srat(-9, 2)), (2, srat(207, 16))],
        );
        let w = srat(3, 2);
        let back = a.shift(1, &w).unwrap().shift(-1, &w).unwrap();
        for s in 0..=4 {
            assert_eq!(back.coeff(s).0, a.coeff(s).0, "coefficient at {s}");
            assert!(back.coeff(s).1.is_zero());
        }
    }

    #[test]
    fn delta_leading_terms() {
        // mu0 = 1, everything else 0: leading term -1/n^2
        let d = delta_expansion(
            &Rational::one(),
            &[],
            &Scalar::zero(),
            &[],
            1,
            DeltaVariant::LogConcave,
            3,
        )
        .unwrap();
        let (s, c0, c1) = d.leading_term().unwrap();
        assert_eq!((s, c0, c1), (2, Scalar::from_int(-1), Scalar::zero()));

        // mu0 = 0, r = -3/2: leading term r(2 log n - 3)/n^3
        let d = delta_expansion(
            &Rational::zero(),
            &[],
            &srat(-3, 2),
            &[],
            1,
            DeltaVariant::LogConcave,
            3,
        )
        .unwrap();
        let (s, c0, c1) = d.leading_term().unwrap();
        assert_eq!(s, 3);
        assert_eq!(c1, srat(-3, 1)); // 2r
        assert_eq!(c0, srat(9, 2)); // -3r

        // ratio-log-convex variant, mu0 = 1: leading -2/n^3
        let d = delta_expansion(
            &Rational::one(),
            &[],
            &Scalar::zero(),
            &[],
            1,
            DeltaVariant::RatioLogConvex,
            4,
        )
        .unwrap();
        let (s, c0, c1) = d.leading_term().unwrap();
        assert_eq!((s, c0, c1), (3, Scalar::from_int(-2), Scalar::zero()));
    }

    #[test]
    fn delta_ratio_variant_r_term() {
        // r-part of the third difference: r(6 log n - 11)/n^4
        let d = delta_expansion(
            &Rational::zero(),
            &[],
            &Scalar::one(),
            &[],
            1,
            DeltaVariant::RatioLogConvex,
            4,
        )
        .unwrap();
        let (s, c0, c1) = d.leading_term().unwrap();
        assert_eq!(s, 4);
        assert_eq!(c1, Scalar::from_int(6));
        assert_eq!(c0, Scalar::from_int(-11));
    }

    #[test]
    fn delta_subexponential_leading() {
        // rho = 2, mu_1 = -1: leading term -mu_1-style
        // (j/rho-1)(j/rho-2)/n^{3-j/rho} with j=1: (-1/2)(-3/2) = 3/4
        let d = delta_expansion(
            &Rational::zero(),
            &[Scalar::from_int(-1)],
            &Scalar::zero(),
            &[],
            2,
            DeltaVariant::LogConcave,
            6,
        )
        .unwrap();
        let (s, c0, c1) = d.leading_term().unwrap();
        // exponent (3 - 1/2) on the rho=2 grid is s = 5
        assert_eq!(s, 5);
        assert!(c1.is_zero());
        assert_eq!(c0, srat(-3, 4));
    }
}
