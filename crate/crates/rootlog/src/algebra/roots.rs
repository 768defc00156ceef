//! Certified real root isolation via Sturm sequences, integer bounds on the
//! largest real root, and eventual-sign analysis of rational functions.
//! Everything here is exact; non-degenerate isolating intervals have rational
//! endpoints that are not roots of the polynomial under examination.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::poly::Poly;
use super::rat::{rat_floor, Rational};
use super::ratfun::RationalFunction;
use super::scalar::Scalar;
use crate::{Error, Result};

pub type Sign = i32;

/// Complete isolation of the real roots of a polynomial: disjoint, sorted
/// rational intervals, one per distinct real root, with multiplicities.
/// A degenerate pair `lo == hi` marks an exact rational root.
#[derive(Clone, Debug)]
pub struct RootIsolation {
    pub intervals: Vec<(Rational, Rational)>,
    pub multiplicities: Vec<usize>,
}

impl RootIsolation {
    pub fn count(&self) -> usize {
        self.intervals.len()
    }
}

/// One isolated root of a squarefree polynomial; the factor is retained so
/// the interval can be refined on demand.
#[derive(Clone, Debug)]
pub struct IsolatedRoot {
    pub factor: Poly,
    pub lo: Rational,
    pub hi: Rational,
    pub multiplicity: usize,
}

impl IsolatedRoot {
    pub fn is_exact(&self) -> bool {
        self.lo == self.hi
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    /// Halves the interval until its width is at most `w`.
    pub fn refine_to(&mut self, w: &Rational) {
        if self.is_exact() {
            return;
        }
        let two = Rational::from_integer(2.into());
        let mut slo = self.factor.eval_rational(&self.lo).signum();
        debug_assert!(slo != 0, "endpoints are never roots");
        while &self.width() > w {
            let mid = (&self.lo + &self.hi) / &two;
            let sm = self.factor.eval_rational(&mid).signum();
            if sm == 0 {
                self.lo = mid.clone();
                self.hi = mid;
                return;
            }
            if sm == slo {
                self.lo = mid;
                slo = sm;
            } else {
                self.hi = mid;
            }
        }
    }

    /// Exact comparison of the root against a rational point.
    pub fn cmp_rational(&self, x: &Rational) -> std::cmp::Ordering {
        use std::cmp::Ordering::*;
        if self.is_exact() {
            return self.lo.cmp(x);
        }
        if x <= &self.lo {
            return Greater;
        }
        if x >= &self.hi {
            return Less;
        }
        let fx = self.factor.eval_rational(x).signum();
        if fx == 0 {
            // a root strictly inside the isolating interval is the root
            return Equal;
        }
        // exactly one root in (lo, hi): it lies left of x iff the sign
        // changes over (lo, x)
        let slo = self.factor.eval_rational(&self.lo).signum();
        if slo != fx {
            Less
        } else {
            Greater
        }
    }

    /// Exact order of two *distinct* roots (of possibly different squarefree
    /// polynomials): refinement separates them.  Exact rational roots compare
    /// directly; a degenerate point strictly inside the other interval is
    /// resolved via [`IsolatedRoot::cmp_rational`].
    pub fn cmp_root(&mut self, other: &mut IsolatedRoot) -> std::cmp::Ordering {
        use std::cmp::Ordering::*;
        loop {
            if self.hi <= other.lo && !(self.is_exact() && other.is_exact() && self.lo == other.lo) {
                return Less;
            }
            if other.hi <= self.lo && !(self.is_exact() && other.is_exact() && self.lo == other.lo) {
                return Greater;
            }
            if self.is_exact() && other.is_exact() {
                return self.lo.cmp(&other.lo);
            }
            if self.is_exact() {
                return other.cmp_rational(&self.lo).reverse();
            }
            if other.is_exact() {
                return self.cmp_rational(&other.lo);
            }
            let w = self.width().min(other.width()) / Rational::from_integer(4.into());
            self.refine_to(&w);
            other.refine_to(&w);
        }
    }
}

/// Sturm chain of a squarefree polynomial, with positive rescaling at each
/// step to control coefficient growth.
pub fn sturm_chain(p: &Poly) -> Vec<Poly> {
    let mut chain = vec![p.clone(), p.derivative()];
    loop {
        let len = chain.len();
        if chain[len - 1].is_zero() {
            chain.pop();
            break;
        }
        let (_, r) = chain[len - 2].divrem(&chain[len - 1]).expect("nonzero");
        if r.is_zero() {
            break;
        }
        chain.push(r.neg().normalize_positive());
    }
    chain
}

fn sign_variations(chain: &[Poly], x: &Rational) -> usize {
    let mut last: i32 = 0;
    let mut v = 0;
    for p in chain {
        let s = p.eval_rational(x).signum();
        if s != 0 {
            if last != 0 && s != last {
                v += 1;
            }
            last = s;
        }
    }
    v
}

/// Number of distinct real roots of the squarefree `p` in `(lo, hi]`.
pub fn sturm_count(chain: &[Poly], lo: &Rational, hi: &Rational) -> usize {
    sign_variations(chain, lo).saturating_sub(sign_variations(chain, hi))
}

/// Cauchy-style bound: every real root lies in (-B, B).
pub fn root_magnitude_bound(p: &Poly) -> Rational {
    let lead = p.leading();
    let mut max = Rational::zero();
    for c in p.coeffs() {
        let ratio = c.clone() / lead.clone();
        let ub = match &ratio {
            Scalar::Rat(r) => r.abs(),
            alg => {
                let (lo, hi) = alg.rational_enclosure(16);
                lo.abs().max(hi.abs())
            }
        };
        if ub > max {
            max = ub;
        }
    }
    max + Rational::one()
}

/// Isolates the roots of a squarefree polynomial into refinable records,
/// sorted by root.  Endpoints of non-degenerate intervals are not roots.
pub fn isolate_squarefree_roots(q: &Poly) -> Vec<IsolatedRoot> {
    let mut out = vec![];
    if q.degree().unwrap_or(0) == 0 {
        return out;
    }
    let chain = sturm_chain(q);
    let bound = root_magnitude_bound(q);
    let two = Rational::from_integer(2.into());
    // invariant: q does not vanish at stack endpoints
    let mut stack = vec![(-bound.clone(), bound)];
    while let Some((lo, hi)) = stack.pop() {
        let k = sturm_count(&chain, &lo, &hi);
        if k == 0 {
            continue;
        }
        if k == 1 {
            out.push(IsolatedRoot {
                factor: q.clone(),
                lo,
                hi,
                multiplicity: 1,
            });
            continue;
        }
        let mid = (&lo + &hi) / &two;
        if q.eval_rational(&mid).signum() != 0 {
            stack.push((lo, mid.clone()));
            stack.push((mid, hi));
            continue;
        }
        // the bisection point is an exact rational root: emit it and carve
        // out a punctured neighborhood with non-root endpoints
        let mut delta = (&hi - &lo) / Rational::from_integer(8.into());
        loop {
            let a = &mid - &delta;
            let b = &mid + &delta;
            if q.eval_rational(&a).signum() != 0
                && q.eval_rational(&b).signum() != 0
                && sturm_count(&chain, &a, &b) == 1
            {
                out.push(IsolatedRoot {
                    factor: q.clone(),
                    lo: mid.clone(),
                    hi: mid.clone(),
                    multiplicity: 1,
                });
                stack.push((lo, a));
                stack.push((b, hi));
                break;
            }
            delta /= &two;
        }
    }
    out.sort_by(|a, b| a.lo.cmp(&b.lo));
    out
}

/// Isolates all real roots of `p != 0`, with multiplicities from Yun's
/// decomposition.  Intervals of roots of different squarefree factors are
/// refined until pairwise disjoint.
pub fn isolate_roots_refinable(p: &Poly) -> Result<Vec<IsolatedRoot>> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let mut roots: Vec<IsolatedRoot> = vec![];
    for (factor, mult) in p.squarefree_decomposition() {
        for mut r in isolate_squarefree_roots(&factor) {
            r.multiplicity = mult;
            roots.push(r);
        }
    }
    // sort globally by exact root order (roots across factors are distinct)
    let mut i = 1;
    while i < roots.len() {
        let mut j = i;
        while j > 0 {
            let (a, b) = roots.split_at_mut(j);
            if a[j - 1].cmp_root(&mut b[0]) == std::cmp::Ordering::Greater {
                roots.swap(j - 1, j);
                j -= 1;
            } else {
                break;
            }
        }
        i += 1;
    }
    // make intervals pairwise disjoint
    for i in 1..roots.len() {
        loop {
            let disjoint = {
                let a = &roots[i - 1];
                let b = &roots[i];
                a.hi < b.lo || (a.hi == b.lo && (a.is_exact() || b.is_exact()))
            };
            if disjoint {
                break;
            }
            let w = roots[i - 1]
                .width()
                .max(roots[i].width())
                / Rational::from_integer(4.into());
            let (a, b) = roots.split_at_mut(i);
            a[i - 1].refine_to(&w);
            b[0].refine_to(&w);
        }
    }
    Ok(roots)
}

/// Isolates all real roots of `p != 0`.  Constant polynomials have none.
pub fn isolate_real_roots(p: &Poly) -> Result<RootIsolation> {
    let roots = isolate_roots_refinable(p)?;
    Ok(RootIsolation {
        intervals: roots.iter().map(|r| (r.lo.clone(), r.hi.clone())).collect(),
        multiplicities: roots.iter().map(|r| r.multiplicity).collect(),
    })
}

/// A rational strictly greater than every real root of `p`: the smallest
/// integer exceeding the largest real root; `None` when `p` has none.
pub fn max_real_root_bound(p: &Poly) -> Result<Option<Rational>> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let q = p.squarefree_part();
    let mut roots = isolate_squarefree_roots(&q);
    let Some(top) = roots.pop() else {
        return Ok(None);
    };
    let mut top = top;
    top.refine_to(&Rational::new(1.into(), 4.into()));
    // floor(hi) + 1 is strictly above the root; descend to the smallest
    // integer that still is
    let mut t = rat_floor(&top.hi) + BigInt::one();
    loop {
        let cand = Rational::from_integer(&t - BigInt::one());
        match top.cmp_rational(&cand) {
            std::cmp::Ordering::Less => t -= BigInt::one(),
            _ => break,
        }
    }
    Ok(Some(Rational::from_integer(t)))
}

/// Eventual sign of a rational function on the integers: returns `(s, N)`
/// with `sign(f(n)) == s` for every integer `n >= N`; `N` is lowered by exact
/// integer descent from the root/pole isolation bound while the sign
/// persists (stopping at 1, at a pole, or at a sign break).
pub fn sign_eventual(f: &RationalFunction) -> Result<(Sign, i64)> {
    if f.is_zero() {
        return Ok((0, 1));
    }
    let s = f.sign_at_infinity();
    debug_assert!(s != 0);
    let mut n0 = Rational::one();
    for poly in [f.num(), f.den()] {
        if poly.degree().unwrap_or(0) == 0 {
            continue;
        }
        if let Some(b) = max_real_root_bound(poly)? {
            if b > n0 {
                n0 = b;
            }
        }
    }
    // n0 is an integer strictly greater than every root and pole
    let mut n = rat_floor(&n0).max(BigInt::one());
    loop {
        if n <= BigInt::one() {
            break;
        }
        let prev = Rational::from_integer(&n - BigInt::one());
        let den = f.den().eval_rational(&prev);
        if den.is_zero() {
            break;
        }
        let v = f.num().eval_rational(&prev) / den;
        if v.signum() != s {
            break;
        }
        n -= BigInt::one();
    }
    let n_i64 = i64::try_from(&n)
        .map_err(|_| Error::Unsupported("eventual-sign threshold exceeds i64".into()))?;
    Ok((s, n_i64))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat::{rat_from, rat_i64};

    #[test]
    fn no_real_roots() {
        let p = Poly::from_ints(&[1, 0, 1]); // n^2+1
        let iso = isolate_real_roots(&p).unwrap();
        assert_eq!(iso.count(), 0);
        assert_eq!(max_real_root_bound(&p).unwrap(), None);
    }

    #[test]
    fn two_roots_constructed() {
        // (n-19)(n+2)
        let p = Poly::from_ints(&[-19, 1]).mul(&Poly::from_ints(&[2, 1]));
        let iso = isolate_real_roots(&p).unwrap();
        assert_eq!(iso.count(), 2);
        let (lo, hi) = iso.intervals.last().unwrap().clone();
        assert!(lo <= rat_i64(19) && rat_i64(19) <= hi);
        // strictly greater than every root, within 1 of the ceiling
        let b = max_real_root_bound(&p).unwrap().unwrap();
        assert!(rat_i64(19) < b && b <= rat_i64(20));
        assert_eq!(b, rat_i64(20));
    }

    #[test]
    fn bound_tight_for_non_integer_root() {
        // roots 18.5 and -3: smallest integer strictly greater is 19
        let p = Poly::from_rationals(&[rat_from(-37, 2), rat_i64(1)])
            .mul(&Poly::from_ints(&[3, 1]));
        let b = max_real_root_bound(&p).unwrap().unwrap();
        assert_eq!(b, rat_i64(19));
    }

    #[test]
    fn multiplicities_via_yun() {
        // (n-1)^3 (n+4)^2
        let p = Poly::from_ints(&[-1, 1])
            .pow(3)
            .mul(&Poly::from_ints(&[4, 1]).pow(2));
        let iso = isolate_real_roots(&p).unwrap();
        assert_eq!(iso.count(), 2);
        assert_eq!(iso.multiplicities, vec![2, 3]); // sorted by root: -4 then 1
    }

    #[test]
    fn close_roots_across_factors_are_separated() {
        // (n - 1/3)(n - 1/3 - 1/1000)^2: close roots, different factors
        let a = Poly::from_rationals(&[rat_from(-1, 3), rat_i64(1)]);
        let b = Poly::from_rationals(&[rat_from(-1, 3) - rat_from(1, 1000), rat_i64(1)]);
        let p = a.mul(&b.pow(2));
        let iso = isolate_real_roots(&p).unwrap();
        assert_eq!(iso.count(), 2);
        assert!(iso.intervals[0].1 <= iso.intervals[1].0);
        assert_eq!(iso.multiplicities, vec![1, 2]);
    }

    #[test]
    fn sign_eventual_examples() {
        // (160n^2 - 293n - 613)/(5n^2(n+1)) -> (+, 4)
        let num = Poly::from_ints(&[-613, -293, 160]);
        let den = Poly::from_ints(&[0, 0, 5]).mul(&Poly::from_ints(&[1, 1]));
        let f = RationalFunction::new(num, den).unwrap();
        assert_eq!(sign_eventual(&f).unwrap(), (1, 4));

        // -(2n^2+23n+14)/(4n(2n^3+7n^2+7n+2)) -> (-, 1)
        let num = Poly::from_ints(&[-14, -23, -2]);
        let den = Poly::from_ints(&[0, 4]).mul(&Poly::from_ints(&[2, 7, 7, 2]));
        let f = RationalFunction::new(num, den).unwrap();
        assert_eq!(sign_eventual(&f).unwrap(), (-1, 1));

        // 0/1 -> (0, 1)
        assert_eq!(sign_eventual(&RationalFunction::zero()).unwrap(), (0, 1));
    }

    #[test]
    fn sign_eventual_consistent_with_evaluation() {
        let num = Poly::from_ints(&[-613, -293, 160]);
        let den = Poly::from_ints(&[0, 0, 5]).mul(&Poly::from_ints(&[1, 1]));
        let f = RationalFunction::new(num, den).unwrap();
        let (s, n0) = sign_eventual(&f).unwrap();
        for n in n0..n0 + 100 {
            let v = f.eval(&rat_i64(n)).unwrap();
            assert_eq!(v.signum(), s, "at n = {n}");
        }
    }

    #[test]
    fn exact_rational_root_bound() {
        let p = Poly::from_ints(&[-4, 0, 1]); // (n-2)(n+2)
        let b = max_real_root_bound(&p).unwrap().unwrap();
        assert_eq!(b, rat_i64(3));
    }
}
