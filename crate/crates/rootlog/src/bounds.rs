//! Candidate two-sided bounds for the term ratio from its truncated
//! expansion, and a self-contained certification that they hold from an
//! explicit threshold onward.
//!
//! The inductive step rewrites the recurrence as
//! `r_{n+d-1} = Phi(n, r_n, ..., r_{n+d-2})` and uses that `Phi` is monotone
//! in each earlier ratio on the bound box: the partial derivative of `Phi`
//! in `x_j` has the sign of `A_j p_d` with
//! `A_j = p_0 + sum_{i<=j} p_i prod_{t<i} x_t`, which is multilinear in the
//! `x_t` and therefore single-signed on the box as soon as it is
//! single-signed at the corners.  Extremes of `Phi` then occur at two
//! explicit corners, and the corner inequalities are eventual-sign facts
//! about rational functions.

use std::fmt;

use num_traits::{Signed, Zero};

use crate::algebra::{
    rat_i64, sign_eventual, to_string_rational, Poly, Rational, RationalFunction, Scalar,
};
use crate::asymptotics::RatioExpansion;
use crate::recurrence::Recurrence;
use crate::{Error, Result};

/// A closed-form bound for the ratio: either a truncated expansion
/// `n^{mu0} sum_s c_s n^{-s}` or an exact rational function (order-1 case).
#[derive(Clone, Debug, PartialEq)]
pub enum BoundExpr {
    Series {
        mu0: i64,
        /// (s, coefficient) meaning `c_s n^{-s}`, sorted by s
        terms: Vec<(i64, Scalar)>,
    },
    Exact(RationalFunction),
}

impl fmt::Display for BoundExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BoundExpr::Exact(r) => write!(f, "{r}"),
            BoundExpr::Series { mu0, terms } => {
                let mut parts = vec![];
                for (s, c) in terms {
                    let e = mu0 - s;
                    let cs = match c {
                        Scalar::Rat(r) => to_string_rational(r),
                        alg => format!("({alg})"),
                    };
                    let p = match e {
                        0 => cs,
                        1 => format!("{cs}*n"),
                        e if e > 1 => format!("{cs}*n^{e}"),
                        -1 => format!("{cs}/n"),
                        e => format!("{cs}/n^{}", -e),
                    };
                    parts.push(p);
                }
                if parts.is_empty() {
                    parts.push("0".into());
                }
                write!(f, "{}", parts.join(" + ").replace("+ -", "- "))
            }
        }
    }
}

impl BoundExpr {
    /// The bound as an exact rational function of n.
    pub fn as_ratfun(&self) -> RationalFunction {
        match self {
            BoundExpr::Exact(r) => r.clone(),
            BoundExpr::Series { mu0, terms } => {
                let smax = terms.iter().map(|(s, _)| *s).max().unwrap_or(0);
                // n^{mu0} sum c_s n^{-s} = (sum c_s n^{smax-s}) n^{mu0-smax}
                let mut num = vec![Scalar::zero(); smax as usize + 1];
                for (s, c) in terms {
                    num[(smax - s) as usize] = c.clone();
                }
                let mut num = Poly::new(num);
                let mut den = Poly::one();
                let e = mu0 - smax;
                if e >= 0 {
                    num = num.mul(&Poly::var().pow(e as usize));
                } else {
                    den = Poly::var().pow((-e) as usize);
                }
                RationalFunction::new(num, den).expect("nonzero denominator")
            }
        }
    }

    pub fn eval(&self, n: &Rational) -> Option<Scalar> {
        self.as_ratfun().eval(n)
    }

    pub fn shifted(&self, k: i64) -> RationalFunction {
        self.as_ratfun().shift(&rat_i64(k))
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, BoundExpr::Exact(_))
    }
}

/// Candidate bounds: the expansion truncated at `n^{-depth}` with the last
/// coefficient perturbed by `-slack` (lower) and `+slack` (upper).
pub fn make_candidate_bounds(
    rx: &RatioExpansion,
    depth: i64,
    slack: &Rational,
) -> Result<(BoundExpr, BoundExpr)> {
    if let Some(exact) = &rx.exact {
        // order-1 recurrences admit the degenerate exact choice f = g = r_n
        return Ok((
            BoundExpr::Exact(exact.clone()),
            BoundExpr::Exact(exact.clone()),
        ));
    }
    if !slack.is_positive() {
        return Err(Error::InvalidSpec(
            "slack must be positive for non-exact bounds".into(),
        ));
    }
    if depth > rx.order() {
        return Err(Error::InsufficientOrder(format!(
            "bound depth {depth} exceeds expansion order {}",
            rx.order()
        )));
    }
    if rx.rho != 1 {
        return Err(Error::Unsupported(
            "bound construction requires an unramified expansion (rho = 1)".into(),
        ));
    }
    if !rx.mu0.is_integer() {
        return Err(Error::Unsupported(
            "bound construction requires an integer ratio power".into(),
        ));
    }
    let mu0 = i64::try_from(&rx.mu0.to_integer())
        .map_err(|_| Error::Unsupported("mu0 too large".into()))?;
    let mut terms = vec![];
    for s in 0..=depth {
        let (c0, c1) = rx.tail.coeff(s);
        debug_assert!(c1.is_zero());
        let abs = rx.lead.clone() * c0;
        if !abs.is_zero() || s == depth {
            terms.push((s, abs));
        }
    }
    let mut f_terms = terms.clone();
    let mut g_terms = terms;
    let last = f_terms.len() - 1;
    f_terms[last].1 = f_terms[last].1.clone() - Scalar::Rat(slack.clone());
    g_terms[last].1 = g_terms[last].1.clone() + Scalar::Rat(slack.clone());
    Ok((
        BoundExpr::Series { mu0, terms: f_terms },
        BoundExpr::Series { mu0, terms: g_terms },
    ))
}

/// One recorded eventual-sign fact used by the certification.
#[derive(Clone, Debug)]
pub struct InductionStep {
    pub description: String,
    pub fun: RationalFunction,
    pub sign: i32,
    pub threshold: i64,
}

/// Certified statement `f(n) <= r_n <= g(n)` for all `n >= n_valid`.
#[derive(Clone, Debug)]
pub struct RatioBoundsCert {
    pub f: BoundExpr,
    pub g: BoundExpr,
    pub n_valid: i64,
    pub induction_steps: Vec<InductionStep>,
    /// exact base-window checks: (index, exact ratio, inside bounds)
    pub base_checks: Vec<(i64, Rational, bool)>,
}

fn record(
    steps: &mut Vec<InductionStep>,
    description: &str,
    fun: RationalFunction,
    want_nonnegative: bool,
) -> Result<i64> {
    let (sign, threshold) = sign_eventual(&fun)?;
    let ok = if want_nonnegative { sign >= 0 } else { sign != 0 };
    if !ok {
        return Err(Error::InductionFailed(format!(
            "{description}: eventual sign {sign}, expected nonnegative (raise depth or slack)"
        )));
    }
    steps.push(InductionStep {
        description: description.to_string(),
        fun,
        sign,
        threshold,
    });
    Ok(threshold)
}

/// Certifies candidate bounds by corner-monotonicity induction plus an exact
/// base-window check.  `cap` bounds the base search.
pub fn certify_bounds(
    rec: &Recurrence,
    f: &BoundExpr,
    g: &BoundExpr,
    cap: i64,
) -> Result<RatioBoundsCert> {
    let d = rec.order();
    let mut steps = vec![];
    let mut n1 = rec.start_index().max(1);

    let f_fun = f.as_ratfun();
    let g_fun = g.as_ratfun();

    // f must be eventually positive (ratios of a positive sequence)
    n1 = n1.max(record(&mut steps, "lower bound positive", f_fun.clone(), false)?);
    if !(f.is_exact() && g.is_exact() && f == g) {
        n1 = n1.max(record(
            &mut steps,
            "bounds ordered (g - f >= 0)",
            g_fun.sub(&f_fun),
            true,
        )?);
    }

    if d == 1 {
        // the ratio is an explicit rational function: compare directly
        let r = rec
            .ratio_form()
            .exact_ratio()
            .expect("order-1 ratio is exact");
        n1 = n1.max(record(
            &mut steps,
            "upper bound holds (g - r >= 0)",
            g_fun.sub(&r),
            true,
        )?);
        n1 = n1.max(record(
            &mut steps,
            "lower bound holds (r - f >= 0)",
            r.sub(&f_fun),
            true,
        )?);
        let n0 = n1.max(rec.start_index());
        let ratio = rec.ratio(n0)?;
        rec.check_positive(n0, n0 + 1)?;
        return Ok(RatioBoundsCert {
            f: f.clone(),
            g: g.clone(),
            n_valid: n0,
            induction_steps: steps,
            base_checks: vec![(n0, ratio, true)],
        });
    }

    let p = rec.coeffs();
    let p_d = RationalFunction::from_poly(p[d].clone());
    {
        let (s_d, t_d) = sign_eventual(&p_d)?;
        debug_assert!(s_d != 0);
        steps.push(InductionStep {
            description: "leading coefficient sign".into(),
            fun: p_d.clone(),
            sign: s_d,
            threshold: t_d,
        });
        n1 = n1.max(t_d);
    }
    let s_d = p[d].leading().signum();

    // corner evaluation: x_t in {f(n+t), g(n+t)} selected by bitmask
    let corner = |mask: usize, upto: usize| -> Vec<RationalFunction> {
        (0..upto)
            .map(|t| {
                if mask & (1 << t) != 0 {
                    g.shifted(t as i64)
                } else {
                    f.shifted(t as i64)
                }
            })
            .collect()
    };
    let a_j = |x: &[RationalFunction], j: usize| -> RationalFunction {
        let mut acc = RationalFunction::from_poly(p[0].clone());
        let mut prod = RationalFunction::one();
        for i in 1..=j {
            prod = prod.mul(&x[i - 1]);
            if !p[i].is_zero() {
                acc = acc.add(&RationalFunction::from_poly(p[i].clone()).mul(&prod));
            }
        }
        acc
    };

    // direction of Phi in each coordinate: sign(A_j) * sign(p_d)
    let mut directions = vec![0i32; d - 1];
    for j in 0..d - 1 {
        let mut sign_common: Option<i32> = None;
        for mask in 0..(1usize << j) {
            let x = corner(mask, j);
            let aj = a_j(&x, j);
            let (s, t) = sign_eventual(&aj)?;
            if s == 0 {
                sign_common = Some(sign_common.unwrap_or(0));
                continue;
            }
            match sign_common {
                None | Some(0) => sign_common = Some(s),
                Some(prev) if prev == s => {}
                Some(_) => {
                    return Err(Error::InductionFailed(format!(
                        "partial slope A_{j} changes sign across box corners"
                    )))
                }
            }
            steps.push(InductionStep {
                description: format!("partial slope A_{j} corner {mask:b}"),
                fun: aj,
                sign: s,
                threshold: t,
            });
            n1 = n1.max(t);
        }
        directions[j] = sign_common.unwrap_or(0) * s_d;
    }

    // Phi at a corner: -(p_0 + sum_{i<d} p_i prod x)/(p_d prod_{t<d-1} x)
    let phi_at = |x: &[RationalFunction]| -> Result<RationalFunction> {
        let mut acc = RationalFunction::from_poly(p[0].clone());
        let mut prod = RationalFunction::one();
        for i in 1..d {
            prod = prod.mul(&x[i - 1]);
            if !p[i].is_zero() {
                acc = acc.add(&RationalFunction::from_poly(p[i].clone()).mul(&prod));
            }
        }
        acc.neg().div(&p_d.mul(&prod))
    };
    let upper_corner: Vec<RationalFunction> = (0..d - 1)
        .map(|t| {
            if directions[t] >= 0 {
                g.shifted(t as i64)
            } else {
                f.shifted(t as i64)
            }
        })
        .collect();
    let lower_corner: Vec<RationalFunction> = (0..d - 1)
        .map(|t| {
            if directions[t] >= 0 {
                f.shifted(t as i64)
            } else {
                g.shifted(t as i64)
            }
        })
        .collect();
    let phi_hi = phi_at(&upper_corner)?;
    let phi_lo = phi_at(&lower_corner)?;
    let g_next = g.shifted(d as i64 - 1);
    let f_next = f.shifted(d as i64 - 1);
    n1 = n1.max(record(
        &mut steps,
        "inductive upper step (g(n+d-1) - Phi_max >= 0)",
        g_next.sub(&phi_hi),
        true,
    )?);
    n1 = n1.max(record(
        &mut steps,
        "inductive lower step (Phi_min - f(n+d-1) >= 0)",
        phi_lo.sub(&f_next),
        true,
    )?);

    // base window search: d-1 consecutive ratios inside the bounds
    let mut base = n1.max(rec.start_index());
    loop {
        if base > n1.max(rec.start_index()) + cap {
            return Err(Error::InductionFailed(format!(
                "no base window found within {cap} indices of n = {n1} (bounds too tight)"
            )));
        }
        let mut checks = vec![];
        let mut ok = true;
        rec.check_positive(base, base + d as i64 - 1)?;
        for t in 0..(d as i64 - 1) {
            let n = base + t;
            let ratio = rec.ratio(n)?;
            let fv = f.eval(&rat_i64(n)).expect("no pole past threshold");
            let gv = g.eval(&rat_i64(n)).expect("no pole past threshold");
            let inside = (Scalar::Rat(ratio.clone()) - fv).signum() >= 0
                && (gv - Scalar::Rat(ratio.clone())).signum() >= 0;
            checks.push((n, ratio, inside));
            if !inside {
                ok = false;
                break;
            }
        }
        if ok {
            return Ok(RatioBoundsCert {
                f: f.clone(),
                g: g.clone(),
                n_valid: base,
                induction_steps: steps,
                base_checks: checks,
            });
        }
        base += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat_from;
    use crate::asymptotics::expand_ratio;
    use crate::corpus;
    use num_traits::One;

    fn srat(p: i64, q: i64) -> Scalar {
        Scalar::Rat(rat_from(p, q))
    }

    fn dominant(name: &str, k: i64) -> (Recurrence, RatioExpansion) {
        let rec = corpus::get(name).unwrap().recurrence().unwrap();
        let rx = expand_ratio(&rec, k).unwrap().into_iter().next().unwrap();
        (rec, rx)
    }

    #[test]
    fn franel_candidate_bounds_match_printed_pair() {
        let (_, rx) = dominant("franel5", 4);
        let (f, g) = make_candidate_bounds(&rx, 2, &Rational::one()).unwrap();
        // f = 32 - 64/n + 603/(5n^2), g = 32 - 64/n + 613/(5n^2)
        let BoundExpr::Series { terms, .. } = &f else { panic!() };
        assert_eq!(terms[2].1, srat(603, 5));
        let BoundExpr::Series { terms, .. } = &g else { panic!() };
        assert_eq!(terms[2].1, srat(613, 5));
    }

    #[test]
    fn motzkin_candidate_bounds_match_printed_pair() {
        let (_, rx) = dominant("motzkin", 4);
        let (f, g) = make_candidate_bounds(&rx, 3, &Rational::one()).unwrap();
        let BoundExpr::Series { terms, .. } = &f else { panic!() };
        assert_eq!(terms[3].1, srat(-157, 4));
        let BoundExpr::Series { terms, .. } = &g else { panic!() };
        assert_eq!(terms[3].1, srat(-149, 4));
    }

    #[test]
    fn zero_slack_rejected_unless_exact() {
        let (_, rx) = dominant("motzkin", 4);
        assert!(make_candidate_bounds(&rx, 2, &Rational::zero()).is_err());
        let (_, rx) = dominant("catalan_inv_n2", 4);
        let (f, g) = make_candidate_bounds(&rx, 2, &Rational::zero()).unwrap();
        assert!(f.is_exact());
        assert_eq!(f, g);
    }

    #[test]
    fn franel_bounds_certify() {
        let (rec, rx) = dominant("franel5", 4);
        let (f, g) = make_candidate_bounds(&rx, 2, &Rational::one()).unwrap();
        let cert = certify_bounds(&rec, &f, &g, 1_000_000).unwrap();
        assert!(cert.n_valid <= 414, "certified N = {}", cert.n_valid);
        for n in cert.n_valid..cert.n_valid + 500 {
            let r = rec.ratio(n).unwrap();
            let fv = f.eval(&rat_i64(n)).unwrap().expect_rational().clone();
            let gv = g.eval(&rat_i64(n)).unwrap().expect_rational().clone();
            assert!(fv <= r && r <= gv, "bounds fail at n = {n}");
        }
    }

    #[test]
    fn motzkin_bounds_certify() {
        let (rec, rx) = dominant("motzkin", 5);
        let (f, g) = make_candidate_bounds(&rx, 3, &Rational::one()).unwrap();
        let cert = certify_bounds(&rec, &f, &g, 1_000_000).unwrap();
        assert!(cert.n_valid <= 228, "certified N = {}", cert.n_valid);
        for n in cert.n_valid..cert.n_valid + 500 {
            let r = rec.ratio(n).unwrap();
            let fv = f.eval(&rat_i64(n)).unwrap().expect_rational().clone();
            let gv = g.eval(&rat_i64(n)).unwrap().expect_rational().clone();
            assert!(fv <= r && r <= gv, "bounds fail at n = {n}");
        }
    }

    #[test]
    fn catalan_exact_bounds() {
        let (rec, rx) = dominant("catalan_inv_n2", 4);
        let (f, g) = make_candidate_bounds(&rx, 2, &Rational::zero()).unwrap();
        let cert = certify_bounds(&rec, &f, &g, 1000).unwrap();
        assert_eq!(cert.n_valid, 1);
        for n in 1..100 {
            let r = rec.ratio(n).unwrap();
            assert_eq!(f.eval(&rat_i64(n)).unwrap().expect_rational().clone(), r);
        }
    }

    #[test]
    fn slack_monotonicity() {
        for name in ["franel5", "motzkin"] {
            let (rec, rx) = dominant(name, 5);
            let cfg = &corpus::get(name).unwrap().config;
            let depth = cfg.depth.unwrap();
            let s1 = cfg.slack.clone().unwrap();
            let s2 = &s1 * rat_i64(2);
            let (f1, g1) = make_candidate_bounds(&rx, depth, &s1).unwrap();
            let (f2, g2) = make_candidate_bounds(&rx, depth, &s2).unwrap();
            let c1 = certify_bounds(&rec, &f1, &g1, 1_000_000).unwrap();
            let c2 = certify_bounds(&rec, &f2, &g2, 1_000_000).unwrap();
            assert!(c1.n_valid >= 1 && c2.n_valid >= 1);
        }
    }

    #[test]
    fn signs_replay_on_samples() {
        let (rec, rx) = dominant("franel5", 4);
        let (f, g) = make_candidate_bounds(&rx, 2, &Rational::one()).unwrap();
        let cert = certify_bounds(&rec, &f, &g, 1_000_000).unwrap();
        assert!(!cert.induction_steps.is_empty());
        for step in &cert.induction_steps {
            for k in 0..10 {
                let n = rat_i64(step.threshold + k * 13);
                if let Some(v) = step.fun.eval(&n) {
                    if step.sign == 0 {
                        assert!(v.is_zero());
                    } else {
                        assert_eq!(v.signum(), step.sign, "step {} at {n}", step.description);
                    }
                }
            }
        }
    }
}
