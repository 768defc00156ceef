//! Asymptotic expansion of the term ratio `r_n = a_{n+1}/a_n` of a
//! P-recursive sequence, conversion to the expansion of `a_n` itself, and the
//! three-case classification of root-sequence log-behavior.
//!
//! The ratio ansatz `r_n = c n^{mu0} u(n)`, with `u` a power series in
//! `n^(-1/rho)` with unit constant term, is substituted into the ratio form
//! of the recurrence.  The admissible pairs `(mu0, c)` come from the Newton
//! polygon of the coefficient degrees; the tail `u` is then solved uniquely
//! term by term because the dominant characteristic root is simple.

use num_traits::{One, Signed, Zero};

use crate::algebra::{
    is_irreducible, isolate_squarefree_roots, rat_i64, rational_roots, to_string_rational,
    NumberField, Poly, Rational, RationalFunction, Scalar,
};
use crate::recurrence::{RatioForm, Recurrence};
use crate::series::{delta_expansion, DeltaVariant, PSeries};
use crate::{Error, Result};

/// Truncated expansion of the consecutive-term ratio:
/// `r_n = lead * n^{mu0} * tail(n)` with the tail's constant term exactly 1,
/// valid with error `o(n^(-K/rho))` in the tail.
#[derive(Clone, Debug)]
pub struct RatioExpansion {
    pub mu0: Rational,
    pub rho: u32,
    /// dominant characteristic constant, `> 0`
    pub lead: Scalar,
    /// power series in `n^(-1/rho)` with constant term exactly 1
    pub tail: PSeries,
    /// for order-1 recurrences: the ratio as an exact rational function
    pub exact: Option<RationalFunction>,
}

impl RatioExpansion {
    pub fn order(&self) -> i64 {
        self.tail.order()
    }

    /// Sub-exponential ratio data `(j, nu_j)`: the ratio carries factors
    /// `exp(nu_j n^{j/rho - 1})`; empty when `rho = 1`.
    pub fn subexp(&self) -> Result<Vec<(u32, Scalar)>> {
        if self.rho == 1 {
            return Ok(vec![]);
        }
        let v = self.tail.log()?;
        let mut out = vec![];
        for j in 1..self.rho {
            let s = (self.rho - j) as i64;
            let (c0, _) = v.coeff(s);
            if !c0.is_zero() {
                out.push((j, c0));
            }
        }
        Ok(out)
    }
}

/// The normalized asymptotic form of `a_n` itself:
/// `a_n ~ C exp(mu0 n log n + sum_j mu_j n^{j/rho}) n^r (1 + sum b_s n^{-s/rho})`
/// with `b_0 = 1`; the multiplicative constant `C` is not computed.
/// `mu_rho = log(lead) - mu0` is carried symbolically through `lead`.
#[derive(Clone, Debug)]
pub struct AsymptoticForm {
    pub mu0: Rational,
    pub rho: u32,
    /// mu_1 .. mu_{rho-1}
    pub mu_sub: Vec<Scalar>,
    /// the ratio constant c; the growth base is lambda = c e^{-mu0}
    pub lead: Scalar,
    pub r: Scalar,
    /// b_1 .. b_M
    pub b: Vec<Scalar>,
}

impl AsymptoticForm {
    pub fn m_order(&self) -> usize {
        self.b.len()
    }

    /// `lambda = e^{mu_rho}` when it is algebraic, i.e. when `mu0 = 0`.
    pub fn lambda(&self) -> Option<&Scalar> {
        if self.mu0.is_zero() {
            Some(&self.lead)
        } else {
            None
        }
    }

    /// `mu_rho` as an exact rational, available when `lead = 1`.
    pub fn mu_rho_rational(&self) -> Option<Rational> {
        if self.lead.is_one() {
            Some(-self.mu0.clone())
        } else {
            None
        }
    }

    pub fn delta(&self, variant: DeltaVariant, k_order: i64) -> Result<PSeries> {
        delta_expansion(
            &self.mu0,
            &self.mu_sub,
            &self.r,
            &self.b,
            self.rho,
            variant,
            k_order,
        )
    }

    /// Human-readable parameter summary, e.g.
    /// `mu0=1, rho=1, mu1=-1, r=0, b1=11/24, ...`.
    pub fn describe(&self) -> String {
        let mut parts = vec![format!("mu0={}", to_string_rational(&self.mu0))];
        parts.push(format!("rho={}", self.rho));
        for (i, m) in self.mu_sub.iter().enumerate() {
            if !m.is_zero() {
                parts.push(format!("mu{}={}", i + 1, m));
            }
        }
        if let Some(mr) = self.mu_rho_rational() {
            parts.push(format!("mu{}={}", self.rho, to_string_rational(&mr)));
        } else if let Some(l) = self.lambda() {
            parts.push(format!("lambda={l}"));
        } else {
            parts.push(format!(
                "mu{}=log({})-{}",
                self.rho,
                self.lead,
                to_string_rational(&self.mu0)
            ));
        }
        parts.push(format!("r={}", self.r));
        for (i, bs) in self.b.iter().enumerate() {
            parts.push(format!("b{}={}", i + 1, bs));
        }
        parts.join(", ")
    }
}

/// Verdict of the asymptotic classification.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    AsymptoticallyLogConcave,
    AsymptoticallyRatioLogConvex,
    Both,
    Indeterminate,
    NotApplicable,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Verdict::AsymptoticallyLogConcave => "asymptotically log-concave",
            Verdict::AsymptoticallyRatioLogConvex => "asymptotically ratio log-convex",
            Verdict::Both => "asymptotically log-concave and ratio log-convex",
            Verdict::Indeterminate => "indeterminate",
            Verdict::NotApplicable => "not applicable",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug)]
pub struct AsymptoticClass {
    pub verdict: Verdict,
    /// which of the three favorable cases applied (1, 2, 3)
    pub case_used: Option<u8>,
    /// leading term of the governing difference expansion:
    /// (exponent on the rho-grid, coefficient, log-n coefficient)
    pub dominant_term: Option<(i64, Scalar, Scalar)>,
    pub detail: String,
}

/// Exact Schur-Cohn recursion: all roots of `p` strictly inside the unit
/// disk.  Conservative: any boundary or degenerate step reports `false`.
pub fn roots_strictly_inside_unit_disk(p: &Poly) -> bool {
    let mut cur: Vec<Scalar> = p.coeffs().to_vec();
    // roots at the origin are inside the disk
    while cur.first().map(|c| c.is_zero()).unwrap_or(false) {
        cur.remove(0);
    }
    loop {
        while cur.last().map(|c| c.is_zero()).unwrap_or(false) {
            cur.pop();
        }
        if cur.len() <= 1 {
            return !cur.is_empty();
        }
        let m = cur.len() - 1;
        let a0 = cur[0].clone();
        let am = cur[m].clone();
        let delta = am.clone() * am.clone() - a0.clone() * a0.clone();
        if delta.signum() <= 0 {
            return false;
        }
        // q_k = am p_{k+1} - a0 p_{m-1-k}: the Schur transform, degree m-1
        let mut next = Vec::with_capacity(m);
        for k in 0..m {
            next.push(am.clone() * cur[k + 1].clone() - a0.clone() * cur[m - 1 - k].clone());
        }
        cur = next;
    }
}

struct Edge {
    mu0: Rational,
    /// (i, leading coefficient of p_i) for support points on this edge
    support: Vec<(usize, Rational)>,
}

/// Upper Newton polygon of the points (i, deg p_i); edges returned dominant
/// first (largest mu0, i.e. the rightmost upper-hull edge).
fn newton_edges(rf: &RatioForm) -> Result<Vec<Edge>> {
    let pts: Vec<(usize, i64, Rational)> = rf
        .coeffs()
        .iter()
        .enumerate()
        .filter(|(_, p)| !p.is_zero())
        .map(|(i, p)| {
            (
                i,
                p.degree().unwrap() as i64,
                p.leading().expect_rational().clone(),
            )
        })
        .collect();
    if pts.len() < 2 {
        return Err(Error::NotApplicable(
            "fewer than two nonzero recurrence coefficients".into(),
        ));
    }
    let mut hull: Vec<(usize, i64)> = vec![];
    for &(i, d, _) in &pts {
        while hull.len() >= 2 {
            let (x1, y1) = hull[hull.len() - 2];
            let (x2, y2) = hull[hull.len() - 1];
            let cross = (x2 as i64 - x1 as i64) * (d - y1) - (i as i64 - x1 as i64) * (y2 - y1);
            if cross >= 0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push((i, d));
    }
    let mut edges = vec![];
    for w in hull.windows(2) {
        let (i1, d1) = w[0];
        let (i2, d2) = w[1];
        let mu0 = Rational::new((d1 - d2).into(), ((i2 - i1) as i64).into());
        let slope = rat_i64(d2 - d1) / rat_i64((i2 - i1) as i64);
        let support = pts
            .iter()
            .filter(|&&(i, d, _)| {
                if i < i1 || i > i2 {
                    return false;
                }
                rat_i64(d - d1) == rat_i64(i as i64 - i1 as i64) * slope.clone()
            })
            .map(|(i, _, lc)| (*i, lc.clone()))
            .collect();
        edges.push(Edge { mu0, support });
    }
    edges.reverse();
    Ok(edges)
}

/// Characteristic polynomial along an edge, in `y`, with the common
/// `y^{i_min}` factor removed.
fn edge_polynomial(edge: &Edge) -> Poly {
    let i0 = edge.support.iter().map(|(i, _)| *i).min().unwrap();
    let top = edge.support.iter().map(|(i, _)| *i).max().unwrap();
    let mut coeffs = vec![Scalar::zero(); top - i0 + 1];
    for (i, lc) in &edge.support {
        coeffs[i - i0] = Scalar::Rat(lc.clone());
    }
    Poly::new(coeffs)
}

/// Builds an exact scalar for a positive simple real root of the rational
/// edge polynomial: rational when the root is rational, otherwise an element
/// of the number field generated by its irreducible factor.
fn root_to_scalar(phi_sf: &Poly, root: &crate::algebra::IsolatedRoot) -> Result<Scalar> {
    if root.is_exact() {
        return Ok(Scalar::Rat(root.lo.clone()));
    }
    // a rational root inside the isolating interval is the root
    for rr in rational_roots(&clear_to_ints(phi_sf)) {
        if root.lo < rr && rr < root.hi {
            return Ok(Scalar::Rat(rr));
        }
    }
    let factor = irreducible_factor_containing(phi_sf, root)?;
    let mut iv = root.clone();
    // the interval must isolate within the factor as well: since the
    // factor's roots are a subset, it does once the endpoints are not roots
    // of the factor and the factor changes sign
    loop {
        let flo = factor.eval_rational(&iv.lo);
        let fhi = factor.eval_rational(&iv.hi);
        if !flo.is_zero() && !fhi.is_zero() && flo.signum() != fhi.signum() {
            break;
        }
        iv.refine_to(&(iv.width() / rat_i64(4)));
    }
    let monic: Vec<Rational> = factor
        .coeffs()
        .iter()
        .map(|c| c.expect_rational().clone())
        .collect();
    let field = NumberField::new(monic, (iv.lo.clone(), iv.hi.clone()), "c")?;
    Ok(Scalar::generator(&field))
}

fn clear_to_ints(p: &Poly) -> Vec<num_bigint::BigInt> {
    use num_integer::Integer as _;
    let mut l = num_bigint::BigInt::one();
    for c in p.coeffs() {
        l = l.lcm(c.expect_rational().denom());
    }
    p.coeffs()
        .iter()
        .map(|c| (c.expect_rational() * Rational::from_integer(l.clone())).to_integer())
        .collect()
}

/// Irreducible rational factor of the squarefree `phi` that vanishes on the
/// given isolated root; monic.  Rational roots are stripped first; the
/// residual factor must be irreducible (certified for degree <= 4).
fn irreducible_factor_containing(
    phi: &Poly,
    root: &crate::algebra::IsolatedRoot,
) -> Result<Poly> {
    let mut rem = phi.monic();
    let ints = clear_to_ints(&rem);
    for rr in rational_roots(&ints) {
        let lin = Poly::from_rationals(&[-rr.clone(), Rational::one()]);
        let (q, r) = rem.divrem(&lin)?;
        if r.is_zero() {
            rem = q;
        }
    }
    let deg = rem.degree().unwrap_or(0);
    if deg == 0 {
        return Err(Error::Unsupported(
            "root vanished while stripping rational factors".into(),
        ));
    }
    let rem = rem.monic();
    let monic: Vec<Rational> = rem
        .coeffs()
        .iter()
        .map(|c| c.expect_rational().clone())
        .collect();
    if !is_irreducible(&monic)? {
        return Err(Error::Unsupported(format!(
            "degree-{deg} characteristic factor is reducible; extraction unsupported"
        )));
    }
    let v_lo = rem.eval_rational(&root.lo).signum();
    let v_hi = rem.eval_rational(&root.hi).signum();
    if v_lo != 0 && v_hi != 0 && v_lo != v_hi {
        Ok(rem)
    } else {
        Err(Error::Unsupported(
            "isolated root does not lie in the residual irreducible factor".into(),
        ))
    }
}

fn denom_u32(q: &Rational) -> Result<u32> {
    u32::try_from(q.denom()).map_err(|_| Error::Unsupported("mu0 denominator too large".into()))
}

/// Residual of the ratio form under a candidate expansion, as a series in
/// `x = n^(-1/rho)` after dividing by the dominant power `n^E`.  The
/// expansion solves the recurrence to its order iff this vanishes through
/// its truncation order.
pub fn expansion_residual(rf: &RatioForm, rx: &RatioExpansion) -> Result<PSeries> {
    let grid = num_integer::lcm(rx.rho, denom_u32(&rx.mu0)?);
    let u = rx.tail.lift_rho(grid);
    residual_series(rf, &rx.mu0, &rx.lead, &u, grid)
}

/// `sum_i p_i(n) c^i n^{i mu0} prod_{t<i} [(1+t/n)^{mu0} u(n+t)]`, divided by
/// `n^E` with `E = max_i (deg p_i + i mu0)`, as a series on the given grid.
fn residual_series(
    rf: &RatioForm,
    mu0: &Rational,
    c: &Scalar,
    u: &PSeries,
    grid: u32,
) -> Result<PSeries> {
    let order = u.order();
    let mu0_s = Scalar::Rat(mu0.clone());
    let mut e_max: Option<Rational> = None;
    for (i, p) in rf.coeffs().iter().enumerate() {
        if p.is_zero() {
            continue;
        }
        let e = rat_i64(p.degree().unwrap() as i64) + rat_i64(i as i64) * mu0;
        if e_max.as_ref().map(|m| &e > m).unwrap_or(true) {
            e_max = Some(e);
        }
    }
    let e_max = e_max.ok_or(Error::ZeroPolynomial)?;
    let mut total = PSeries::zero(grid, order);
    let mut c_pow = Scalar::one();
    let mut running: Option<PSeries> = None; // prod over t < i
    for (i, p) in rf.coeffs().iter().enumerate() {
        if i > 0 {
            let t = i as i64 - 1;
            let factor = PSeries::binomial(&mu0_s, &rat_i64(t), grid, order)
                .mul(&u.shift(t, &Scalar::zero())?)?;
            running = Some(match running {
                None => factor,
                Some(acc) => acc.mul(&factor)?,
            });
            c_pow = c_pow * c.clone();
        }
        if p.is_zero() {
            continue;
        }
        let d_i = p.degree().unwrap() as i64;
        let mut pser = PSeries::zero(grid, order);
        for (k, coef) in p.coeffs().iter().enumerate() {
            let s = (d_i - k as i64) * grid as i64;
            if s <= order {
                pser.add_term(s, coef.clone(), Scalar::zero());
            }
        }
        let off = (e_max.clone() - rat_i64(d_i) - rat_i64(i as i64) * mu0) * rat_i64(grid as i64);
        debug_assert!(off.is_integer());
        let off = i64::try_from(&off.to_integer())
            .map_err(|_| Error::Unsupported("exponent overflow".into()))?;
        let mut term = match &running {
            Some(prod) if i > 0 => pser.mul(prod)?,
            _ => pser,
        };
        term = term.scale(&c_pow).mul_xpow(off);
        total = total.add(&term.truncate(order));
    }
    Ok(total)
}

/// All admissible ratio expansions (positive real simple characteristic
/// roots), dominant branch first.  The dominant branch additionally passes
/// an exact modulus-dominance check against every other characteristic root
/// of its edge (real roots by isolation, complex roots by a Schur-Cohn
/// unit-disk test on the rescaled polynomial).
pub fn expand_ratio(rec: &Recurrence, k_order: i64) -> Result<Vec<RatioExpansion>> {
    let rf = rec.ratio_form();
    if let Some(exact) = rf.exact_ratio() {
        return Ok(vec![expand_exact_ratio(&exact, k_order)?]);
    }
    let edges = newton_edges(&rf)?;
    let mut out = vec![];
    for (edge_idx, edge) in edges.iter().enumerate() {
        let phi = edge_polynomial(edge);
        let sf = phi.squarefree_part();
        let roots = isolate_squarefree_roots(&sf);
        let phi_mults = phi.squarefree_decomposition();
        let mut admissible: Vec<Scalar> = vec![];
        let mut dominant_rejected = false;
        for root in roots.iter().rev() {
            if root.cmp_rational(&Rational::zero()) != std::cmp::Ordering::Greater {
                continue;
            }
            let simple = phi_mults.iter().any(|(factor, mult)| {
                let inside = if root.is_exact() {
                    factor.eval_rational(&root.lo).is_zero()
                } else {
                    let lo = factor.eval_rational(&root.lo).signum();
                    let hi = factor.eval_rational(&root.hi).signum();
                    lo != 0 && hi != 0 && lo != hi
                };
                inside && *mult == 1
            });
            if !simple {
                if edge_idx == 0 && admissible.is_empty() {
                    dominant_rejected = true;
                }
                continue;
            }
            admissible.push(root_to_scalar(&sf, root)?);
        }
        if edge_idx == 0 {
            if dominant_rejected {
                return Err(Error::NotApplicable(
                    "dominant characteristic root is not simple".into(),
                ));
            }
            let Some(top_c) = admissible.first() else {
                return Err(Error::NotApplicable(
                    "no positive real characteristic root on the dominant edge".into(),
                ));
            };
            let scaled = scale_poly_roots(&phi, top_c);
            let deflated = deflate_root_one(&scaled)?;
            if !roots_strictly_inside_unit_disk(&deflated) {
                return Err(Error::NotApplicable(
                    "dominant characteristic root is not strictly maximal in modulus".into(),
                ));
            }
        }
        for c in admissible {
            out.push(solve_branch(&rf, &edge.mu0, &c, k_order)?);
        }
    }
    if out.is_empty() {
        return Err(Error::NotApplicable("no admissible expansion branch".into()));
    }
    Ok(out)
}

/// phi(c w) as a polynomial in w over Q(c).
fn scale_poly_roots(phi: &Poly, c: &Scalar) -> Poly {
    let mut coeffs = vec![];
    let mut cp = Scalar::one();
    for a in phi.coeffs() {
        coeffs.push(a.clone() * cp.clone());
        cp = cp * c.clone();
    }
    Poly::new(coeffs)
}

/// Divides by (w - 1); the argument must vanish at 1.
fn deflate_root_one(p: &Poly) -> Result<Poly> {
    let lin = Poly::new(vec![Scalar::from_int(-1), Scalar::one()]);
    let (q, r) = p.divrem(&lin)?;
    if !r.is_zero() {
        return Err(Error::NotApplicable(
            "scaled characteristic polynomial does not vanish at the dominant root".into(),
        ));
    }
    Ok(q)
}

fn expand_exact_ratio(exact: &RationalFunction, k_order: i64) -> Result<RatioExpansion> {
    let num = exact.num();
    let den = exact.den();
    let dn = num.degree().ok_or(Error::ZeroPolynomial)? as i64;
    let dd = den.degree().unwrap() as i64;
    let mu0 = rat_i64(dn - dd);
    let c = num.leading() / den.leading();
    if !c.is_positive() {
        return Err(Error::NotApplicable(
            "ratio has non-positive leading behavior".into(),
        ));
    }
    let to_series = |p: &Poly, d: i64| {
        let mut s = PSeries::zero(1, k_order);
        for (k, coef) in p.coeffs().iter().enumerate() {
            let e = d - k as i64;
            if e <= k_order {
                s.add_term(e, coef.clone(), Scalar::zero());
            }
        }
        s
    };
    let tail = to_series(num, dn)
        .mul(&to_series(den, dd).recip()?)?
        .scale(&c.recip());
    Ok(RatioExpansion {
        mu0,
        rho: 1,
        lead: c,
        tail,
        exact: Some(exact.clone()),
    })
}

/// Solves the tail `u` of one `(mu0, c)` branch term by term.  The linear
/// coefficient of each new unknown is the same at every order and is nonzero
/// exactly when the characteristic root is simple.
fn solve_branch(
    rf: &RatioForm,
    mu0: &Rational,
    c: &Scalar,
    k_order: i64,
) -> Result<RatioExpansion> {
    let grid = denom_u32(mu0)?;
    let work_order = k_order;
    let mut u = PSeries::one(grid, work_order);

    let alpha = {
        let probe0 = residual_series(rf, mu0, c, &u, grid)?;
        let mut u1 = u.clone();
        u1.add_term(1, Scalar::one(), Scalar::zero());
        let probe1 = residual_series(rf, mu0, c, &u1, grid)?;
        probe1.coeff(1).0 - probe0.coeff(1).0
    };
    if alpha.is_zero() {
        return Err(Error::NotApplicable(
            "defective expansion branch (vanishing linear solve coefficient)".into(),
        ));
    }
    let alpha_inv = alpha.recip();

    for s in 1..=work_order {
        let res = residual_series(rf, mu0, c, &u, grid)?;
        if res
            .terms()
            .any(|(t, (c0, c1))| t < s && (!c0.is_zero() || !c1.is_zero()))
        {
            return Err(Error::Unsupported(
                "inconsistent coefficient matching below the current order".into(),
            ));
        }
        let (beta, beta_log) = res.coeff(s);
        if !beta_log.is_zero() {
            return Err(Error::Unsupported(
                "logarithmic branch detected while solving the expansion".into(),
            ));
        }
        if beta.is_zero() {
            continue;
        }
        u.add_term(s, beta.neg() * alpha_inv.clone(), Scalar::zero());
    }
    let res = residual_series(rf, mu0, c, &u, grid)?;
    if !res.is_zero_through_order() {
        return Err(Error::Unsupported(
            "residual does not vanish through the requested order".into(),
        ));
    }
    Ok(RatioExpansion {
        mu0: mu0.clone(),
        rho: grid,
        lead: c.clone(),
        tail: u,
        exact: None,
    })
}

/// Recovers the asymptotic form of `a_n` from the ratio expansion by formal
/// summation: matching `log r_n = log c + mu0 log n + log u(n)` against the
/// first difference of `log a_n` determines `mu_j`, `r`, and the `b_s`
/// uniquely, one order at a time.
pub fn to_asymptotic_form(rx: &RatioExpansion, k_order: i64) -> Result<AsymptoticForm> {
    let rho = rx.rho;
    let order = k_order.min(rx.order());
    let m_order = order - rho as i64;
    if m_order < 0 {
        return Err(Error::InsufficientOrder(
            "ratio expansion order must exceed rho".into(),
        ));
    }
    let v = rx.tail.truncate(order).log()?;

    let mut mu_sub = vec![Scalar::zero(); rho as usize - 1];
    let mut r = Scalar::zero();
    let mut w = PSeries::zero(rho, m_order);

    // first difference of the known parts of log a_n, accumulated as each
    // parameter is solved
    let mut rhs = PSeries::zero(rho, order);
    if !rx.mu0.is_zero() {
        // mu0 [(n+1) log(1+1/n) - 1]
        let l = PSeries::log1p(&Rational::one(), rho, order + rho as i64);
        let nl = l.mul_xpow(-(rho as i64));
        let mut piece = nl.add(&l.truncate(order));
        piece.add_term(0, Scalar::from_int(-1), Scalar::zero());
        rhs = rhs.add(&piece.scale(&Scalar::Rat(rx.mu0.clone())));
    }

    for s in 1..=order {
        let diff = v.coeff(s).0 - rhs.coeff(s).0;
        if s < rho as i64 {
            // mu_j with j = rho - s: difference series
            // mu_j x^{-j} (binomial(j/rho, 1/n) - 1), leading coefficient j/rho
            let j = rho as i64 - s;
            let jr = Rational::new(j.into(), (rho as i64).into());
            let mu_j = diff / Scalar::Rat(jr.clone());
            if !mu_j.is_zero() {
                mu_sub[(j - 1) as usize] = mu_j.clone();
                let mut series =
                    PSeries::binomial(&Scalar::Rat(jr), &Rational::one(), rho, order + j);
                series.add_term(0, Scalar::from_int(-1), Scalar::zero());
                rhs = rhs.add(&series.mul_xpow(-j).scale(&mu_j).truncate(order));
            }
        } else if s == rho as i64 {
            // r log(1+1/n), leading coefficient 1
            r = diff;
            if !r.is_zero() {
                rhs = rhs.add(&PSeries::log1p(&Rational::one(), rho, order).scale(&r));
            }
        } else {
            // w_sigma x^sigma (binomial(-sigma/rho, 1/n) - 1), leading
            // coefficient -sigma/rho
            let sigma = s - rho as i64;
            let sr = Rational::new(sigma.into(), (rho as i64).into());
            let w_sigma = diff / Scalar::Rat(-sr.clone());
            if !w_sigma.is_zero() {
                w.add_term(sigma, w_sigma.clone(), Scalar::zero());
                let mut series =
                    PSeries::binomial(&Scalar::Rat(-sr), &Rational::one(), rho, order - sigma);
                series.add_term(0, Scalar::from_int(-1), Scalar::zero());
                rhs = rhs.add(&series.mul_xpow(sigma).scale(&w_sigma).truncate(order));
            }
        }
    }

    let b_series = w.exp()?;
    let mut b = vec![];
    for sigma in 1..=m_order {
        b.push(b_series.coeff(sigma).0);
    }
    Ok(AsymptoticForm {
        mu0: rx.mu0.clone(),
        rho,
        mu_sub,
        lead: rx.lead.clone(),
        r,
        b,
    })
}

/// Formal consecutive-term ratio tail of an asymptotic form (round-trip
/// direction): same normalization as `RatioExpansion::tail`.
pub fn ratio_head_of_form(form: &AsymptoticForm, k_order: i64) -> Result<PSeries> {
    let rho = form.rho;
    let order = k_order;
    let mut acc = PSeries::zero(rho, order);
    if !form.mu0.is_zero() {
        let l = PSeries::log1p(&Rational::one(), rho, order + rho as i64);
        let nl = l.mul_xpow(-(rho as i64));
        let mut piece = nl.add(&l.truncate(order));
        piece.add_term(0, Scalar::from_int(-1), Scalar::zero());
        acc = acc.add(&piece.scale(&Scalar::Rat(form.mu0.clone())));
    }
    for (idx, mu_j) in form.mu_sub.iter().enumerate() {
        let j = idx as i64 + 1;
        if mu_j.is_zero() {
            continue;
        }
        let jr = Rational::new(j.into(), (rho as i64).into());
        let mut series = PSeries::binomial(&Scalar::Rat(jr), &Rational::one(), rho, order + j);
        series.add_term(0, Scalar::from_int(-1), Scalar::zero());
        acc = acc.add(&series.mul_xpow(-j).scale(mu_j).truncate(order));
    }
    if !form.r.is_zero() {
        acc = acc.add(&PSeries::log1p(&Rational::one(), rho, order).scale(&form.r));
    }
    let mut bser = PSeries::one(rho, form.b.len() as i64);
    for (i, bs) in form.b.iter().enumerate() {
        bser.add_term(i as i64 + 1, bs.clone(), Scalar::zero());
    }
    let wser = bser.log()?;
    let mut wdiff = PSeries::zero(rho, order);
    for (sigma, (ws, _)) in wser.terms() {
        let sr = Rational::new(sigma.into(), (rho as i64).into());
        let mut series = PSeries::binomial(&Scalar::Rat(-sr), &Rational::one(), rho, order - sigma);
        series.add_term(0, Scalar::from_int(-1), Scalar::zero());
        wdiff = wdiff.add(&series.mul_xpow(sigma).scale(ws).truncate(order));
    }
    acc = acc.add(&wdiff);
    acc.exp()
}

/// Applies the three-case criteria with `r` replaced by `r - alpha`.
pub fn classify(
    form: &AsymptoticForm,
    alpha: &Rational,
    variant: DeltaVariant,
) -> Result<AsymptoticClass> {
    let m = form.m_order() as i64;
    let rho = form.rho as i64;
    let needed = match variant {
        DeltaVariant::LogConcave => 2,
        DeltaVariant::RatioLogConvex => 3,
    };
    if m <= needed * rho {
        return Err(Error::InsufficientOrder(format!(
            "classification needs M/rho > {needed}, have M = {m}, rho = {rho}"
        )));
    }
    let r_eff = form.r.clone() - Scalar::Rat(alpha.clone());
    let both_applicable = m > 3 * rho;
    let favorable = |case: u8, detail: String, dom: Option<(i64, Scalar, Scalar)>| {
        let verdict = if both_applicable {
            Verdict::Both
        } else {
            match variant {
                DeltaVariant::LogConcave => Verdict::AsymptoticallyLogConcave,
                DeltaVariant::RatioLogConvex => Verdict::AsymptoticallyRatioLogConvex,
            }
        };
        AsymptoticClass {
            verdict,
            case_used: Some(case),
            dominant_term: dom,
            detail,
        }
    };
    let dom_term = {
        let shifted = AsymptoticForm {
            r: r_eff.clone(),
            ..form.clone()
        };
        let k = match variant {
            DeltaVariant::LogConcave => (2 * rho + 2).min(3 * rho + m),
            DeltaVariant::RatioLogConvex => (3 * rho + 2).min(4 * rho + m),
        };
        shifted.delta(variant, k).ok().and_then(|d| d.leading_term())
    };

    if form.mu0.is_positive() {
        return Ok(favorable(
            1,
            format!("mu0 = {} > 0", to_string_rational(&form.mu0)),
            dom_term,
        ));
    }
    if form.mu0.is_negative() {
        return Ok(AsymptoticClass {
            verdict: Verdict::NotApplicable,
            case_used: None,
            dominant_term: dom_term,
            detail: "mu0 < 0: dominant difference term is positive".into(),
        });
    }
    if let Some((j, mu_k)) = form
        .mu_sub
        .iter()
        .enumerate()
        .rev()
        .find(|(_, m)| !m.is_zero())
        .map(|(i, m)| (i + 1, m.clone()))
    {
        return if mu_k.is_negative() {
            Ok(favorable(2, format!("mu0 = 0, mu_{j} < 0"), dom_term))
        } else {
            Ok(AsymptoticClass {
                verdict: Verdict::NotApplicable,
                case_used: None,
                dominant_term: dom_term,
                detail: format!("mu0 = 0 but mu_{j} > 0: dominant term positive"),
            })
        };
    }
    match r_eff.signum() {
        s if s < 0 => Ok(favorable(
            3,
            format!("mu0 = 0, mu_j = 0 (j < rho), r - alpha = {r_eff} < 0"),
            dom_term,
        )),
        0 => Ok(AsymptoticClass {
            verdict: Verdict::Indeterminate,
            case_used: None,
            dominant_term: dom_term,
            detail: "r - alpha = 0: outcome depends on the uncomputed constant".into(),
        }),
        _ => Ok(AsymptoticClass {
            verdict: Verdict::NotApplicable,
            case_used: None,
            dominant_term: dom_term,
            detail: format!("r - alpha = {r_eff} > 0: dominant term positive"),
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat_from;
    use crate::corpus;

    fn srat(p: i64, q: i64) -> Scalar {
        Scalar::Rat(rat_from(p, q))
    }

    fn dominant(name: &str, k: i64) -> RatioExpansion {
        let rec = corpus::get(name).unwrap().recurrence().unwrap();
        expand_ratio(&rec, k).unwrap().into_iter().next().unwrap()
    }

    #[test]
    fn motzkin_ratio_expansion() {
        let rx = dominant("motzkin", 4);
        assert!(rx.mu0.is_zero());
        assert_eq!(rx.rho, 1);
        assert_eq!(rx.lead, Scalar::from_int(3));
        // r_n = 3 - 9/(2n) + 207/(16 n^2): tail = 1 - 3/(2n) + 69/(16n^2)
        assert_eq!(rx.tail.coeff(1).0, srat(-3, 2));
        assert_eq!(rx.tail.coeff(2).0, srat(69, 16));
    }

    #[test]
    fn franel5_ratio_expansion() {
        let rx = dominant("franel5", 4);
        assert_eq!(rx.lead, Scalar::from_int(32));
        // r_n = 32 - 64/n + c2/n^2 with c2 = 608/5, i.e. tail coeff 19/5
        assert_eq!(rx.tail.coeff(1).0, srat(-2, 1));
        assert_eq!(rx.tail.coeff(2).0, srat(19, 5));
    }

    #[test]
    fn catalan_inverse_ratio_expansion() {
        let rx = dominant("catalan_inv_n2", 3);
        assert!(rx.exact.is_some());
        assert_eq!(rx.lead, srat(1, 4));
        assert!(rx.mu0.is_zero());
        assert_eq!(rx.tail.coeff(1).0, srat(-1, 2));
    }

    #[test]
    fn gn_ratio_expansion() {
        let rx = dominant("gn", 4);
        assert_eq!(rx.mu0, rat_i64(1));
        assert_eq!(rx.lead, Scalar::one());
        assert_eq!(rx.tail.coeff(1).0, srat(1, 2));
    }

    #[test]
    fn motzkin_asymptotic_form() {
        let form = to_asymptotic_form(&dominant("motzkin", 6), 6).unwrap();
        assert_eq!(form.lambda().unwrap(), &Scalar::from_int(3));
        assert_eq!(form.r, srat(-3, 2));
        assert_eq!(form.b[0], srat(-39, 16));
        assert_eq!(form.b[1], srat(2665, 512));
        assert_eq!(form.b[2], srat(-87885, 8192));
    }

    #[test]
    fn gn_asymptotic_form() {
        let form = to_asymptotic_form(&dominant("gn", 6), 6).unwrap();
        assert_eq!(form.mu0, rat_i64(1));
        assert_eq!(form.mu_rho_rational().unwrap(), rat_i64(-1));
        assert!(form.r.is_zero());
        assert_eq!(form.b[0], srat(11, 24));
        assert_eq!(form.b[1], srat(913, 1152));
        assert_eq!(form.b[2], srat(829543, 414720));
    }

    #[test]
    fn catalan_asymptotic_form() {
        let form = to_asymptotic_form(&dominant("catalan_inv_n2", 6), 6).unwrap();
        assert_eq!(form.lambda().unwrap(), &srat(1, 4));
        assert_eq!(form.r, srat(-1, 2));
        assert_eq!(form.b[0], srat(9, 8));
        assert_eq!(form.b[1], srat(17, 128));
        assert_eq!(form.b[2], srat(3, 1024));
    }

    #[test]
    fn franel5_asymptotic_form() {
        let form = to_asymptotic_form(&dominant("franel5", 6), 6).unwrap();
        assert_eq!(form.lambda().unwrap(), &Scalar::from_int(32));
        assert_eq!(form.r, srat(-2, 1));
        assert_eq!(form.b[0], srat(-4, 5));
    }

    #[test]
    fn residual_vanishes_through_order() {
        for name in ["motzkin", "franel5", "gn", "catalan_inv_n2"] {
            let rec = corpus::get(name).unwrap().recurrence().unwrap();
            let rx = expand_ratio(&rec, 6).unwrap().into_iter().next().unwrap();
            let res = expansion_residual(&rec.ratio_form(), &rx).unwrap();
            assert!(res.is_zero_through_order(), "{name}: residual {res}");
        }
    }

    #[test]
    fn form_round_trip() {
        for name in ["motzkin", "franel5", "catalan_inv_n2", "gn"] {
            let rx = dominant(name, 6);
            let form = to_asymptotic_form(&rx, 6).unwrap();
            let head = ratio_head_of_form(&form, rx.order() - 1).unwrap();
            for s in 0..=head.order() {
                assert_eq!(head.coeff(s).0, rx.tail.coeff(s).0, "{name} coefficient {s}");
            }
        }
    }

    #[test]
    fn classify_cases() {
        let form = to_asymptotic_form(&dominant("gn", 6), 6).unwrap();
        let c = classify(&form, &Rational::zero(), DeltaVariant::LogConcave).unwrap();
        assert_eq!(c.case_used, Some(1));
        assert_eq!(c.verdict, Verdict::Both);
        let c = classify(&form, &Rational::zero(), DeltaVariant::RatioLogConvex).unwrap();
        assert_eq!(c.case_used, Some(1));

        let form = to_asymptotic_form(&dominant("motzkin", 6), 6).unwrap();
        let c = classify(&form, &Rational::zero(), DeltaVariant::LogConcave).unwrap();
        assert_eq!(c.case_used, Some(3));
        assert!(matches!(
            c.verdict,
            Verdict::AsymptoticallyLogConcave | Verdict::Both
        ));
        let (s, c0, c1) = c.dominant_term.unwrap();
        assert_eq!(s, 3);
        assert_eq!(c1, srat(-3, 1));
        assert_eq!(c0, srat(9, 2));

        // r - alpha = 0: indeterminate
        let c = classify(&form, &rat_from(-3, 2), DeltaVariant::LogConcave).unwrap();
        assert_eq!(c.verdict, Verdict::Indeterminate);

        // r - alpha > 0: not applicable
        let c = classify(&form, &rat_from(-5, 2), DeltaVariant::LogConcave).unwrap();
        assert_eq!(c.verdict, Verdict::NotApplicable);
    }

    #[test]
    fn classification_invariant_under_geometric_rescale() {
        // b_n = s t^n a_n changes only the growth constant; verdicts agree
        use crate::algebra::pow_rational;
        let rec = corpus::get("motzkin").unwrap().recurrence().unwrap();
        let t = rat_i64(3);
        let s = rat_i64(7);
        let coeffs: Vec<Poly> = rec
            .coeffs()
            .iter()
            .enumerate()
            .map(|(i, p)| p.scale(&Scalar::Rat(pow_rational(&t, -(i as i64)))))
            .collect();
        let initial: Vec<Rational> = rec
            .initial_values()
            .iter()
            .enumerate()
            .map(|(i, v)| v * &s * pow_rational(&t, rec.start_index() + i as i64))
            .collect();
        let rescaled = Recurrence::new("motzkin_rescaled", coeffs, initial, 0).unwrap();
        let f1 = to_asymptotic_form(&dominant("motzkin", 6), 6).unwrap();
        let rx2 = expand_ratio(&rescaled, 6).unwrap().into_iter().next().unwrap();
        let f2 = to_asymptotic_form(&rx2, 6).unwrap();
        assert_eq!(f2.lambda().unwrap(), &Scalar::from_int(9));
        assert_eq!(f1.r, f2.r);
        assert_eq!(f1.b, f2.b);
        for v in [DeltaVariant::LogConcave, DeltaVariant::RatioLogConvex] {
            let c1 = classify(&f1, &Rational::zero(), v).unwrap();
            let c2 = classify(&f2, &Rational::zero(), v).unwrap();
            assert_eq!(c1.verdict, c2.verdict);
            assert_eq!(c1.case_used, c2.case_used);
        }
    }

    #[test]
    fn delannoy_algebraic_growth() {
        let rx = dominant("central_delannoy", 6);
        // lambda = 3 + 2 sqrt(2): check lambda^2 - 6 lambda + 1 = 0, lambda > 5
        let lam = rx.lead.clone();
        let residual = lam.clone() * lam.clone() - Scalar::from_int(6) * lam.clone()
            + Scalar::one();
        assert!(residual.is_zero());
        assert!((lam.clone() - Scalar::from_int(5)).is_positive());
        let form = to_asymptotic_form(&rx, 6).unwrap();
        assert_eq!(form.r, srat(-1, 2));
        let c = classify(&form, &Rational::zero(), DeltaVariant::RatioLogConvex).unwrap();
        assert_eq!(c.case_used, Some(3));
    }

    #[test]
    fn oscillatory_and_defective_are_rejected() {
        // char poly (x-1)(x^2+1): complex pair with the same modulus
        let rec = Recurrence::new(
            "osc",
            vec![
                Poly::from_ints(&[-1]),
                Poly::from_ints(&[1]),
                Poly::from_ints(&[-1]),
                Poly::from_ints(&[1]),
            ],
            vec![rat_i64(1), rat_i64(2), rat_i64(3)],
            0,
        )
        .unwrap();
        assert!(matches!(expand_ratio(&rec, 4), Err(Error::NotApplicable(_))));

        // char poly (x-1)^2: defective dominant root
        let rec = Recurrence::new(
            "defective",
            vec![
                Poly::from_ints(&[1]),
                Poly::from_ints(&[-2]),
                Poly::from_ints(&[1]),
            ],
            vec![rat_i64(1), rat_i64(2)],
            0,
        )
        .unwrap();
        assert!(matches!(expand_ratio(&rec, 4), Err(Error::NotApplicable(_))));
    }

    #[test]
    fn schur_cohn_unit_disk() {
        let p = Poly::from_roots(&[srat(1, 2), srat(1, 3)]);
        assert!(roots_strictly_inside_unit_disk(&p));
        let p = Poly::from_roots(&[Scalar::from_int(2), srat(1, 3)]);
        assert!(!roots_strictly_inside_unit_disk(&p));
        assert!(!roots_strictly_inside_unit_disk(&Poly::from_ints(&[1, 0, 1])));
        assert!(roots_strictly_inside_unit_disk(&Poly::from_rationals(&[
            rat_from(1, 4),
            rat_i64(0),
            rat_i64(1)
        ])));
        assert!(roots_strictly_inside_unit_disk(&Poly::from_rationals(&[
            rat_i64(0),
            rat_i64(0),
            rat_from(-1, 4),
            rat_i64(1)
        ])));
    }

    #[test]
    fn subdominant_branches_listed_after_dominant() {
        let rec = corpus::get("franel5").unwrap().recurrence().unwrap();
        let branches = expand_ratio(&rec, 3).unwrap();
        assert!(branches.len() >= 2);
        assert_eq!(branches[0].lead, Scalar::from_int(32));
        assert!(branches[1].lead.is_positive());
        assert!(matches!(branches[1].lead, Scalar::Alg { .. }));
    }
}
