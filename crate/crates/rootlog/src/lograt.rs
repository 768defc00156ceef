//! Symbolic log-rational expressions `sum_i m_i(n) log A_i(n) + R(n)` with
//! polynomial multipliers, rational-function (or constant) log arguments, and
//! a rational-function remainder — the shape of every governing inequality in
//! the explicit-N certificates.  Supports exact differentiation, exact limits
//! at infinity, and certified sign evaluation at integer points.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::algebra::{
    coprime_basis, rat_i64, sign_eventual, to_string_rational, Poly, Rational, RationalFunction,
    Scalar,
};
use crate::interval::{with_escalating_precision, Interval, PREC_CAP, PREC_START};
use crate::{Error, Result};

/// An exact constant of the form `q0 + sum_i q_i log(c_i)` with positive
/// exact bases `c_i`.  Supports an exact zero test (multiplicative relations
/// among the bases) and certified sign evaluation.
#[derive(Clone, Debug)]
pub struct LogConst {
    pub rational: Rational,
    /// (coefficient, base > 0)
    pub logs: Vec<(Rational, Scalar)>,
}

impl fmt::Display for LogConst {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = vec![];
        if !self.rational.is_zero() {
            parts.push(to_string_rational(&self.rational));
        }
        for (q, c) in &self.logs {
            parts.push(format!("{}*log({})", to_string_rational(q), c));
        }
        if parts.is_empty() {
            parts.push("0".into());
        }
        write!(f, "{}", parts.join(" + ").replace("+ -", "- "))
    }
}

impl LogConst {
    pub fn zero() -> Self {
        LogConst {
            rational: Rational::zero(),
            logs: vec![],
        }
    }

    pub fn from_rational(q: Rational) -> Self {
        LogConst {
            rational: q,
            logs: vec![],
        }
    }

    pub fn from_log(coef: Rational, base: Scalar) -> Self {
        let mut out = LogConst::zero();
        out.push_log(coef, base);
        out
    }

    fn push_log(&mut self, coef: Rational, base: Scalar) {
        if coef.is_zero() || base.is_one() {
            return;
        }
        debug_assert!(base.is_positive(), "log base must be positive");
        for (q, c) in self.logs.iter_mut() {
            let same = match (&base, &*c) {
                (Scalar::Rat(a), Scalar::Rat(b)) => a == b,
                (Scalar::Alg { field: f1, .. }, Scalar::Alg { field: f2, .. }) => {
                    f1.same_field(f2) && &base == c
                }
                _ => false,
            };
            if same {
                *q += coef;
                self.logs.retain(|(q, _)| !q.is_zero());
                return;
            }
        }
        self.logs.push((coef, base));
    }

    pub fn add(&self, other: &LogConst) -> LogConst {
        let mut out = self.clone();
        out.rational += &other.rational;
        for (q, c) in &other.logs {
            out.push_log(q.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> LogConst {
        LogConst {
            rational: -self.rational.clone(),
            logs: self
                .logs
                .iter()
                .map(|(q, c)| (-q.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn sub(&self, other: &LogConst) -> LogConst {
        self.add(&other.neg())
    }

    pub fn scale(&self, q: &Rational) -> LogConst {
        if q.is_zero() {
            return LogConst::zero();
        }
        LogConst {
            rational: &self.rational * q,
            logs: self.logs.iter().map(|(c, b)| (c * q, b.clone())).collect(),
        }
    }

    pub fn is_syntactically_zero(&self) -> bool {
        self.rational.is_zero() && self.logs.is_empty()
    }

    /// Exact zero decision.
    ///
    /// `q0 + sum q_i log c_i` vanishes iff `q0 = 0` and `prod c_i^{q_i} = 1`:
    /// the product is algebraic while `e^{-q0}` is transcendental for
    /// rational `q0 != 0`.  Rational bases are decided on a coprime basis
    /// (no big powers); algebraic bases fall back to an exact field product.
    pub fn is_zero(&self) -> Result<bool> {
        if self.logs.is_empty() {
            return Ok(self.rational.is_zero());
        }
        if !self.rational.is_zero() {
            return Ok(false);
        }
        let rational_bases: Vec<(Rational, Rational)> = self
            .logs
            .iter()
            .filter_map(|(q, c)| c.as_rational().map(|r| (q.clone(), r.clone())))
            .collect();
        if rational_bases.len() == self.logs.len() {
            let bases: Vec<Rational> = rational_bases.iter().map(|(_, b)| b.clone()).collect();
            let (_, exps) = coprime_basis(&bases);
            let cols = exps.first().map(|v| v.len()).unwrap_or(0);
            for j in 0..cols {
                let mut acc = Rational::zero();
                for (i, (q, _)) in rational_bases.iter().enumerate() {
                    acc += q * rat_i64(exps[i][j]);
                }
                if !acc.is_zero() {
                    return Ok(false);
                }
            }
            return Ok(true);
        }
        // exact product with integer exponents (rare path)
        let mut lcm = num_bigint::BigInt::one();
        for (q, _) in &self.logs {
            lcm = num_integer::Integer::lcm(&lcm, q.denom());
        }
        let mut prod = Scalar::one();
        for (q, c) in &self.logs {
            let e = (q * Rational::from_integer(lcm.clone())).to_integer();
            let e = i64::try_from(&e).map_err(|_| {
                Error::Unsupported("log coefficient too large for exact zero test".into())
            })?;
            prod = prod * c.pow_i64(e);
        }
        Ok(prod.is_one())
    }

    pub fn interval(&self, prec: usize) -> Result<Interval> {
        let mut acc = Interval::from_rational(&self.rational, prec);
        for (q, c) in &self.logs {
            let l = Interval::from_scalar(c, prec).ln(prec)?;
            let qf = Interval::from_rational(q, prec);
            acc = acc.add(&l.mul(&qf, prec), prec);
        }
        Ok(acc)
    }

    /// Certified sign: exact zero test first, then escalating intervals.
    pub fn sign(&self) -> Result<i32> {
        if self.is_zero()? {
            return Ok(0);
        }
        with_escalating_precision(PREC_START, PREC_CAP, |prec| {
            let iv = self.interval(prec)?;
            Ok(iv.sign())
        })
    }
}

/// One log term: `mult(n) * log(arg)`.
#[derive(Clone, Debug)]
pub struct LogTerm {
    pub mult: Poly,
    pub arg: LogArg,
}

#[derive(Clone, Debug)]
pub enum LogArg {
    /// log of a rational function of n (eventually positive)
    Fun(RationalFunction),
    /// log of a positive constant
    Const(Scalar),
}

/// `sum_i m_i(n) log A_i(n) + R(n)`.
#[derive(Clone, Debug)]
pub struct LogRatExpr {
    pub terms: Vec<LogTerm>,
    pub rat: RationalFunction,
    /// every rational-function log argument is strictly positive from here
    pub valid_from: i64,
}

impl fmt::Display for LogRatExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = vec![];
        for t in &self.terms {
            let arg = match &t.arg {
                LogArg::Fun(a) => format!("{a}"),
                LogArg::Const(c) => format!("{c}"),
            };
            parts.push(format!("({})*log({})", t.mult, arg));
        }
        if !self.rat.is_zero() {
            parts.push(format!("{}", self.rat));
        }
        if parts.is_empty() {
            parts.push("0".into());
        }
        write!(f, "{}", parts.join(" + "))
    }
}

impl LogRatExpr {
    pub fn zero() -> Self {
        LogRatExpr {
            terms: vec![],
            rat: RationalFunction::zero(),
            valid_from: 1,
        }
    }

    /// Builds and validates: each rational-function argument must be
    /// eventually positive; the recorded threshold is the max over the
    /// arguments' positivity thresholds.
    pub fn new(terms: Vec<LogTerm>, rat: RationalFunction) -> Result<Self> {
        let mut valid_from = 1i64;
        let mut kept = vec![];
        for t in terms {
            if t.mult.is_zero() {
                continue;
            }
            match &t.arg {
                LogArg::Fun(a) => {
                    let (s, n0) = sign_eventual(a)?;
                    if s <= 0 {
                        return Err(Error::InvalidSpec(format!(
                            "log argument {a} is not eventually positive"
                        )));
                    }
                    valid_from = valid_from.max(n0);
                    if a == &RationalFunction::one() {
                        continue;
                    }
                }
                LogArg::Const(c) => {
                    if !c.is_positive() {
                        return Err(Error::InvalidSpec(
                            "constant log argument must be positive".into(),
                        ));
                    }
                    if c.is_one() {
                        continue;
                    }
                }
            }
            kept.push(t);
        }
        Ok(LogRatExpr {
            terms: merge_terms(kept),
            rat,
            valid_from,
        })
    }

    pub fn add(&self, other: &LogRatExpr) -> LogRatExpr {
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        LogRatExpr {
            terms: merge_terms(terms),
            rat: self.rat.add(&other.rat),
            valid_from: self.valid_from.max(other.valid_from),
        }
    }

    pub fn neg(&self) -> LogRatExpr {
        LogRatExpr {
            terms: self
                .terms
                .iter()
                .map(|t| LogTerm {
                    mult: t.mult.neg(),
                    arg: t.arg.clone(),
                })
                .collect(),
            rat: self.rat.neg(),
            valid_from: self.valid_from,
        }
    }

    pub fn is_log_free(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn as_rational(&self) -> Option<&RationalFunction> {
        if self.is_log_free() {
            Some(&self.rat)
        } else {
            None
        }
    }

    pub fn max_multiplier_degree(&self) -> Option<usize> {
        self.terms.iter().filter_map(|t| t.mult.degree()).max()
    }

    /// Exact derivative with respect to n (treated as a real variable).
    pub fn derivative(&self) -> Result<LogRatExpr> {
        let mut terms = vec![];
        let mut rat = self.rat.derivative();
        for t in &self.terms {
            let dm = t.mult.derivative();
            if !dm.is_zero() {
                terms.push(LogTerm {
                    mult: dm,
                    arg: t.arg.clone(),
                });
            }
            if let LogArg::Fun(a) = &t.arg {
                // (m log A)' picks up m A'/A
                let la = a.log_derivative()?;
                rat = rat.add(&la.mul(&RationalFunction::from_poly(t.mult.clone())));
            }
        }
        Ok(LogRatExpr {
            terms: merge_terms(terms),
            rat,
            valid_from: self.valid_from,
        })
    }

    pub fn derivative_n(&self, k: usize) -> Result<LogRatExpr> {
        let mut cur = self.clone();
        for _ in 0..k {
            cur = cur.derivative()?;
        }
        Ok(cur)
    }

    /// Smallest derivative order at which the expression becomes a pure
    /// rational function: one more than the largest multiplier degree.
    pub fn rationalization_order(&self) -> usize {
        self.max_multiplier_degree().map(|d| d + 1).unwrap_or(0)
    }

    /// Exact value at an integer point as a [`LogConst`]; errors at a pole or
    /// a non-positive log argument.
    pub fn eval_at(&self, n: i64) -> Result<LogConst> {
        let nq = rat_i64(n);
        let mut acc = LogConst::zero();
        for t in &self.terms {
            let m = t.mult.eval_rational(&nq).expect_rational().clone();
            if m.is_zero() {
                continue;
            }
            match &t.arg {
                LogArg::Fun(a) => {
                    let v = a
                        .eval(&nq)
                        .ok_or_else(|| Error::InvalidSpec(format!("pole at n = {n}")))?
                        .expect_rational()
                        .clone();
                    if !v.is_positive() {
                        return Err(Error::InvalidSpec(format!(
                            "log argument non-positive at n = {n}"
                        )));
                    }
                    acc = acc.add(&LogConst::from_log(m, Scalar::Rat(v)));
                }
                LogArg::Const(c) => {
                    acc = acc.add(&LogConst::from_log(m, c.clone()));
                }
            }
        }
        let rv = self
            .rat
            .eval(&nq)
            .ok_or_else(|| Error::InvalidSpec(format!("pole at n = {n}")))?;
        acc = acc.add(&LogConst::from_rational(rv.expect_rational().clone()));
        Ok(acc)
    }

    /// Certified sign at an integer point.
    pub fn sign_at(&self, n: i64) -> Result<i32> {
        self.eval_at(n)?.sign()
    }

    /// Exact limit as n -> +infinity, from the leading terms of the exact
    /// expansion (computed completely down to exponent 0; lower exponents
    /// vanish in the limit).
    pub fn limit(&self) -> Result<LimitValue> {
        let mut coeffs: BTreeMap<i64, (LogConst, LogConst)> = BTreeMap::new();
        let mut addc = |e: i64, plain: LogConst, logn: LogConst| {
            let entry = coeffs
                .entry(e)
                .or_insert((LogConst::zero(), LogConst::zero()));
            entry.0 = entry.0.add(&plain);
            entry.1 = entry.1.add(&logn);
        };
        for t in &self.terms {
            let md = t.mult.degree().unwrap_or(0) as i64;
            match &t.arg {
                LogArg::Const(c) => {
                    for (j, mj) in t.mult.coeffs().iter().enumerate() {
                        let mj = mj.expect_rational();
                        if mj.is_zero() {
                            continue;
                        }
                        addc(
                            j as i64,
                            LogConst::from_log(mj.clone(), c.clone()),
                            LogConst::zero(),
                        );
                    }
                }
                LogArg::Fun(a) => {
                    // log A = log(lc num) + k log n + (series in 1/n);
                    // the denominator is monic by canonicalization
                    let num = a.num();
                    let den = a.den();
                    let k = num.degree().unwrap() as i64 - den.degree().unwrap() as i64;
                    let lc = num.leading().expect_rational().clone();
                    let tail = log_tail_series(num, den, md + 1)?;
                    for (j, mj) in t.mult.coeffs().iter().enumerate() {
                        let mj = mj.expect_rational();
                        if mj.is_zero() {
                            continue;
                        }
                        if !lc.is_one() {
                            addc(
                                j as i64,
                                LogConst::from_log(mj.clone(), Scalar::Rat(lc.clone())),
                                LogConst::zero(),
                            );
                        }
                        if k != 0 {
                            addc(
                                j as i64,
                                LogConst::zero(),
                                LogConst::from_rational(mj * rat_i64(k)),
                            );
                        }
                        for (s, (c0, _)) in tail.terms() {
                            let e = j as i64 - s;
                            if e < 0 {
                                continue;
                            }
                            addc(
                                e,
                                LogConst::from_rational(mj * c0.expect_rational()),
                                LogConst::zero(),
                            );
                        }
                    }
                }
            }
        }
        if !self.rat.is_zero() {
            // polynomial part; the proper remainder vanishes at infinity
            let (q, _) = self.rat.num().divrem(self.rat.den())?;
            for (j, c) in q.coeffs().iter().enumerate() {
                let c = c.expect_rational();
                if !c.is_zero() {
                    addc(j as i64, LogConst::from_rational(c.clone()), LogConst::zero());
                }
            }
        }
        for (e, (c0, c1)) in coeffs.iter().rev() {
            let z1 = c1.is_zero()?;
            let z0 = c0.is_zero()?;
            if z0 && z1 {
                continue;
            }
            if *e > 0 || !z1 {
                let s = if !z1 { c1.sign()? } else { c0.sign()? };
                return Ok(if s > 0 {
                    LimitValue::PlusInfinity
                } else {
                    LimitValue::MinusInfinity
                });
            }
            return Ok(LimitValue::Finite(c0.clone()));
        }
        Ok(LimitValue::Finite(LogConst::zero()))
    }
}

/// `log(num/(lc n^dn)) - log(den/n^dd)` as a power series in 1/n.
fn log_tail_series(num: &Poly, den: &Poly, depth: i64) -> Result<crate::series::PSeries> {
    use crate::series::PSeries;
    let to_unit_series = |p: &Poly, order: i64| -> PSeries {
        let d = p.degree().unwrap() as i64;
        let inv = p.leading().recip();
        let mut s = PSeries::zero(1, order);
        for (k, c) in p.coeffs().iter().enumerate() {
            let e = d - k as i64;
            if e <= order {
                s.add_term(e, c.clone() * inv.clone(), Scalar::zero());
            }
        }
        s
    };
    let a = to_unit_series(num, depth).log()?;
    let b = to_unit_series(den, depth).log()?;
    Ok(a.sub(&b))
}

fn merge_terms(terms: Vec<LogTerm>) -> Vec<LogTerm> {
    let mut out: Vec<LogTerm> = vec![];
    'outer: for t in terms {
        if t.mult.is_zero() {
            continue;
        }
        for o in out.iter_mut() {
            let same = match (&t.arg, &o.arg) {
                (LogArg::Fun(a), LogArg::Fun(b)) => a == b,
                (LogArg::Const(Scalar::Rat(a)), LogArg::Const(Scalar::Rat(b))) => a == b,
                (
                    LogArg::Const(a @ Scalar::Alg { field: f1, .. }),
                    LogArg::Const(b @ Scalar::Alg { field: f2, .. }),
                ) => f1.same_field(f2) && a == b,
                _ => false,
            };
            if same {
                o.mult = o.mult.add(&t.mult);
                continue 'outer;
            }
        }
        out.push(t);
    }
    out.retain(|t| !t.mult.is_zero());
    out
}

/// Exact limit of a log-rational expression at +infinity.
#[derive(Clone, Debug)]
pub enum LimitValue {
    Finite(LogConst),
    PlusInfinity,
    MinusInfinity,
}

impl LimitValue {
    pub fn is_zero(&self) -> Result<bool> {
        match self {
            LimitValue::Finite(c) => c.is_zero(),
            _ => Ok(false),
        }
    }

    pub fn describe(&self) -> String {
        match self {
            LimitValue::Finite(c) => format!("{c}"),
            LimitValue::PlusInfinity => "+infinity".into(),
            LimitValue::MinusInfinity => "-infinity".into(),
        }
    }
}
