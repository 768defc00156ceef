//! P-recursive sequences: a linear recurrence with polynomial coefficients
//! plus exact initial values.  Provides exact term evaluation (memoized), the
//! ratio form of the recurrence, and the `a_n -> a_n / n^alpha` transform.

use std::sync::Mutex;

use num_traits::{One, Signed, Zero};

use crate::algebra::{
    isolate_roots_refinable, pow_rational, rat_i64, Poly, Rational, RationalFunction, Scalar,
};
use crate::{Error, Result};

/// `p_0(n) a_n + p_1(n) a_{n+1} + ... + p_d(n) a_{n+d} = 0` for all integer
/// `n >= start_index`, together with the d initial values
/// `a_{start_index}, ..., a_{start_index + d - 1}`.
pub struct Recurrence {
    name: String,
    coeffs: Vec<Poly>,
    initial: Vec<Rational>,
    start_index: i64,
    /// non-integer index-power shift applied downstream (r -> r - alpha);
    /// zero unless produced by [`shift_by_power`] with fractional alpha
    alpha_tag: Rational,
    cache: Mutex<Vec<Rational>>,
}

impl std::fmt::Debug for Recurrence {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "Recurrence({}, order {}, from {})",
            self.name,
            self.order(),
            self.start_index
        )
    }
}

impl Clone for Recurrence {
    fn clone(&self) -> Self {
        Recurrence {
            name: self.name.clone(),
            coeffs: self.coeffs.clone(),
            initial: self.initial.clone(),
            start_index: self.start_index,
            alpha_tag: self.alpha_tag.clone(),
            cache: Mutex::new(self.cache.lock().unwrap().clone()),
        }
    }
}

impl Recurrence {
    /// Validates and builds a recurrence.  The leading coefficient must not
    /// vanish at any integer index `>= start_index` (checked by exact root
    /// isolation), so the term sequence is gap-free.
    pub fn new(
        name: &str,
        coeffs: Vec<Poly>,
        initial: Vec<Rational>,
        start_index: i64,
    ) -> Result<Self> {
        let d = coeffs.len().saturating_sub(1);
        let lead = coeffs
            .last()
            .ok_or_else(|| Error::InvalidSpec("empty coefficient list".into()))?;
        if lead.is_zero() {
            return Err(Error::InvalidSpec("leading coefficient is zero".into()));
        }
        if initial.len() != d {
            return Err(Error::InitialValues {
                expected: d,
                got: initial.len(),
            });
        }
        if !coeffs.iter().all(|p| p.is_rational()) {
            return Err(Error::InvalidSpec(
                "recurrence coefficients must be rational polynomials".into(),
            ));
        }
        // reject integer roots of p_d at indices >= start_index
        if lead.degree().unwrap_or(0) > 0 {
            for mut root in isolate_roots_refinable(lead)? {
                root.refine_to(&Rational::new(1.into(), 2.into()));
                let lo = crate::algebra::rat_ceil(&root.lo);
                let hi = crate::algebra::rat_floor(&root.hi);
                let mut k = lo;
                while k <= hi {
                    if lead.eval_rational(&Rational::from_integer(k.clone())).is_zero() {
                        if let Ok(ki) = i64::try_from(&k) {
                            if ki >= start_index {
                                return Err(Error::LeadingCoefficientRoot(ki));
                            }
                        }
                    }
                    k += 1;
                }
            }
        }
        Ok(Recurrence {
            name: name.to_string(),
            coeffs,
            initial: initial.clone(),
            start_index,
            alpha_tag: Rational::zero(),
            cache: Mutex::new(initial),
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Poly] {
        &self.coeffs
    }

    pub fn initial_values(&self) -> &[Rational] {
        &self.initial
    }

    pub fn start_index(&self) -> i64 {
        self.start_index
    }

    pub fn alpha_tag(&self) -> &Rational {
        &self.alpha_tag
    }

    /// Exact term `a_n`; extends the memoized prefix as needed.
    pub fn term(&self, n: i64) -> Result<Rational> {
        if n < self.start_index {
            return Err(Error::InvalidSpec(format!(
                "index {n} below start index {}",
                self.start_index
            )));
        }
        let idx = (n - self.start_index) as usize;
        let mut cache = self.cache.lock().unwrap();
        while cache.len() <= idx {
            let m = cache.len();
            let d = self.order();
            // a_{start+m} plays the role of a_{n+d} with n = start + m - d
            let nn = rat_i64(self.start_index + m as i64 - d as i64);
            let lead = self.coeffs[d].eval_rational(&nn);
            let lead = lead.expect_rational().clone();
            debug_assert!(!lead.is_zero(), "guarded at construction");
            let mut acc = Rational::zero();
            for i in 0..d {
                let c = self.coeffs[i].eval_rational(&nn);
                acc += c.expect_rational() * &cache[m - d + i];
            }
            cache.push(-acc / lead);
        }
        Ok(cache[idx].clone())
    }

    /// Exact values `a_{start_index}, ..., a_{upto}`.
    pub fn eval_terms(&self, upto: i64) -> Result<Vec<Rational>> {
        if upto < self.start_index + self.order() as i64 - 1 {
            return Err(Error::InvalidSpec(
                "eval_terms range must cover the initial values".into(),
            ));
        }
        self.term(upto)?;
        let cache = self.cache.lock().unwrap();
        Ok(cache[..=(upto - self.start_index) as usize].to_vec())
    }

    /// Exact consecutive ratio `a_{n+1}/a_n`; errors when `a_n = 0`.
    pub fn ratio(&self, n: i64) -> Result<Rational> {
        let a = self.term(n)?;
        if a.is_zero() {
            return Err(Error::NotPositive(n));
        }
        Ok(self.term(n + 1)? / a)
    }

    /// Checks `a_n > 0` for every n in `[from, upto]`.
    pub fn check_positive(&self, from: i64, upto: i64) -> Result<()> {
        for n in from..=upto {
            if !self.term(n)?.is_positive() {
                return Err(Error::NotPositive(n));
            }
        }
        Ok(())
    }

    pub fn ratio_form(&self) -> RatioForm {
        RatioForm {
            coeffs: self.coeffs.clone(),
        }
    }
}

/// The recurrence divided by `a_n`: the polynomial identity
/// `p_0(n) + sum_{i=1}^{d} p_i(n) prod_{t=0}^{i-1} r_{n+t} = 0`
/// in consecutive ratios `r_m = a_{m+1}/a_m`.
#[derive(Clone, Debug)]
pub struct RatioForm {
    coeffs: Vec<Poly>,
}

impl RatioForm {
    pub fn coeffs(&self) -> &[Poly] {
        &self.coeffs
    }

    pub fn arity(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Evaluates the identity on exact ratio values `r_n, ..., r_{n+d-1}`.
    pub fn residual(&self, n: &Rational, ratios: &[Rational]) -> Scalar {
        assert_eq!(ratios.len(), self.arity());
        let mut acc = self.coeffs[0].eval_rational(n);
        let mut prod = Rational::one();
        for (i, r) in ratios.iter().enumerate() {
            prod *= r;
            acc = acc + self.coeffs[i + 1].eval_rational(n) * Scalar::Rat(prod.clone());
        }
        acc
    }

    /// Order-1 case: `r_n = -p_0/p_1` exactly.
    pub fn exact_ratio(&self) -> Option<RationalFunction> {
        if self.arity() != 1 {
            return None;
        }
        Some(
            RationalFunction::new(self.coeffs[0].neg(), self.coeffs[1].clone())
                .expect("leading coefficient nonzero"),
        )
    }
}

/// Recurrence satisfied by `b_n = a_n / n^alpha` for integer alpha; for
/// fractional alpha the recurrence is returned unchanged but tagged, and the
/// classification stage applies the `r -> r - alpha` adjustment instead.
pub fn shift_by_power(rec: &Recurrence, alpha: &Rational) -> Result<Recurrence> {
    if alpha.is_zero() {
        return Ok(rec.clone());
    }
    if !alpha.is_integer() {
        let mut out = rec.clone();
        out.alpha_tag = &rec.alpha_tag + alpha;
        out.name = format!("{}/n^({})", rec.name, alpha);
        return Ok(out);
    }
    if rec.start_index < 1 {
        return Err(Error::InvalidSpec(
            "index-power shift needs start_index >= 1 (n^alpha must not vanish)".into(),
        ));
    }
    let a = alpha.to_integer();
    let a = i64::try_from(&a).map_err(|_| Error::InvalidSpec("alpha too large".into()))?;
    let d = rec.order();
    // a_{n+i} = (n+i)^alpha b_{n+i}: multiply p_i by (n+i)^alpha; negative
    // alpha instead multiplies every other coefficient by (n+j)^{-alpha}
    let mut coeffs = Vec::with_capacity(d + 1);
    for (i, p) in rec.coeffs.iter().enumerate() {
        let mut q = p.clone();
        if a >= 0 {
            let base = Poly::from_rationals(&[rat_i64(i as i64), Rational::one()]);
            q = q.mul(&base.pow(a as usize));
        } else {
            for j in 0..=d {
                if j == i {
                    continue;
                }
                let base = Poly::from_rationals(&[rat_i64(j as i64), Rational::one()]);
                q = q.mul(&base.pow((-a) as usize));
            }
        }
        coeffs.push(q);
    }
    let initial = rec
        .initial
        .iter()
        .enumerate()
        .map(|(i, v)| {
            let n = rat_i64(rec.start_index + i as i64);
            v / pow_rational(&n, a)
        })
        .collect();
    Recurrence::new(
        &format!("{}/n^{}", rec.name, a),
        coeffs,
        initial,
        rec.start_index,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat_from;

    /// Cycle-component graphs on [n]: every connected component is a single
    /// vertex, a single edge, or a cycle.  Brute-force over all graphs.
    fn cycle_graph_count(n: usize) -> u64 {
        if n == 0 {
            return 1;
        }
        let edges: Vec<(usize, usize)> = (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .collect();
        let m = edges.len();
        let mut count = 0u64;
        for mask in 0u32..(1u32 << m) {
            let mut deg = vec![0u32; n];
            let mut adj = vec![vec![]; n];
            for (e, &(i, j)) in edges.iter().enumerate() {
                if mask & (1 << e) != 0 {
                    deg[i] += 1;
                    deg[j] += 1;
                    adj[i].push(j);
                    adj[j].push(i);
                }
            }
            // every vertex: degree 0, degree 2, or degree 1 paired with a
            // degree-1 neighbor (an isolated edge); cycles are the only
            // 2-regular components, so this characterizes the class
            let mut ok = true;
            for v in 0..n {
                match deg[v] {
                    0 | 2 => {}
                    1 => {
                        let u = adj[v][0];
                        if deg[u] != 1 {
                            ok = false;
                            break;
                        }
                    }
                    _ => {
                        ok = false;
                        break;
                    }
                }
            }
            if ok {
                count += 1;
            }
        }
        count
    }

    fn binom(n: u64, k: u64) -> u128 {
        if k > n {
            return 0;
        }
        let mut r: u128 = 1;
        for i in 0..k {
            r = r * (n - i) as u128 / (i + 1) as u128;
        }
        r
    }

    #[test]
    fn gn_terms_match_brute_force() {
        let rec = crate::corpus::get("gn").unwrap().recurrence().unwrap();
        let terms = rec.eval_terms(6).unwrap();
        for (n, t) in terms.iter().enumerate() {
            assert_eq!(
                t,
                &rat_i64(cycle_graph_count(n) as i64),
                "G_{n} vs brute force"
            );
        }
        assert_eq!(terms[3], rat_i64(5));
    }

    #[test]
    fn franel5_terms_match_binomial_sums() {
        let rec = crate::corpus::get("franel5").unwrap().recurrence().unwrap();
        let terms = rec.eval_terms(12).unwrap();
        for (n, t) in terms.iter().enumerate() {
            let s: u128 = (0..=n as u64).map(|k| binom(n as u64, k).pow(5)).sum();
            assert_eq!(t, &Rational::from_integer(s.into()), "franel5 at {n}");
        }
        assert_eq!(terms[4], rat_i64(9826));
    }

    #[test]
    fn motzkin_terms_match_path_count() {
        // Motzkin paths: steps U/D/F from (0,0) to (n,0), never below 0
        let rec = crate::corpus::get("motzkin").unwrap().recurrence().unwrap();
        let terms = rec.eval_terms(12).unwrap();
        let mut dp = vec![vec![0u64; 15]; 14];
        dp[0][0] = 1;
        for n in 1..=12usize {
            for h in 0..=12usize {
                dp[n][h] = dp[n - 1][h]
                    + if h > 0 { dp[n - 1][h - 1] } else { 0 }
                    + dp[n - 1][h + 1];
            }
        }
        for n in 0..=12usize {
            assert_eq!(terms[n], rat_i64(dp[n][0] as i64), "M_{n}");
        }
        assert_eq!(&terms[2], &rat_i64(2));
        assert_eq!(&terms[3], &rat_i64(4));
        assert_eq!(&terms[4], &rat_i64(9));
    }

    #[test]
    fn ratio_form_identities() {
        // order-1: r_n = -p0/p1
        let rec = Recurrence::new(
            "toy",
            vec![Poly::from_ints(&[2, 1]), Poly::from_ints(&[-1, 2])],
            vec![rat_i64(1)],
            1,
        )
        .unwrap();
        let rf = rec.ratio_form().exact_ratio().unwrap();
        let expected =
            RationalFunction::new(Poly::from_ints(&[-2, -1]), Poly::from_ints(&[-1, 2])).unwrap();
        assert_eq!(rf, expected);

        // Catalan-inverse b-recurrence: r_n = n^2(n+2)/(2(2n+1)(n+1)^2)
        let cat = crate::corpus::get("catalan_inv_n2")
            .unwrap()
            .recurrence()
            .unwrap();
        let r = cat.ratio_form().exact_ratio().unwrap();
        let num = Poly::from_ints(&[0, 0, 1]).mul(&Poly::from_ints(&[2, 1]));
        let den = Poly::from_ints(&[2, 4]).mul(&Poly::from_ints(&[1, 2, 1]));
        assert_eq!(r, RationalFunction::new(num, den).unwrap());

        // Motzkin ratio-form residual vanishes on exact ratios
        let rec = crate::corpus::get("motzkin").unwrap().recurrence().unwrap();
        let rf = rec.ratio_form();
        for n in 5..=6 {
            let ratios = vec![rec.ratio(n).unwrap(), rec.ratio(n + 1).unwrap()];
            assert!(rf.residual(&rat_i64(n), &ratios).is_zero());
        }
    }

    #[test]
    fn ratio_form_residual_consecutive() {
        let rec = crate::corpus::get("gn").unwrap().recurrence().unwrap();
        let rf = rec.ratio_form();
        for n in 0..100 {
            let ratios: Vec<Rational> = (0..3).map(|t| rec.ratio(n + t).unwrap()).collect();
            assert!(
                rf.residual(&rat_i64(n), &ratios).is_zero(),
                "residual at {n}"
            );
        }
    }

    #[test]
    fn shift_by_power_catalan() {
        // 1/C_n recurrence: (n+2) a_n - 2(2n+1) a_{n+1} = 0, a_1 = 1
        let rec = Recurrence::new(
            "catalan_inv",
            vec![Poly::from_ints(&[2, 1]), Poly::from_ints(&[-2, -4])],
            vec![rat_i64(1)],
            1,
        )
        .unwrap();
        let shifted = shift_by_power(&rec, &rat_i64(2)).unwrap();
        // n^2(n+2) b_n - 2(2n+1)(n+1)^2 b_{n+1} = 0
        let p0 = Poly::from_ints(&[2, 1]).mul(&Poly::from_ints(&[0, 0, 1]));
        let p1 = Poly::from_ints(&[-2, -4]).mul(&Poly::from_ints(&[1, 2, 1]));
        assert_eq!(shifted.coeffs()[0], p0);
        assert_eq!(shifted.coeffs()[1], p1);
        for n in 1..=50 {
            assert_eq!(
                shifted.term(n).unwrap(),
                rec.term(n).unwrap() / rat_i64(n * n)
            );
        }
    }

    #[test]
    fn shift_by_power_identity_and_constant() {
        let rec = crate::corpus::get("motzkin").unwrap().recurrence().unwrap();
        let same = shift_by_power(&rec, &Rational::zero()).unwrap();
        assert_eq!(same.coeffs(), rec.coeffs());

        // alpha = 1 on a_{n+1} = a_n gives b_n = 1/n
        let ones = Recurrence::new(
            "ones",
            vec![Poly::from_ints(&[1]), Poly::from_ints(&[-1])],
            vec![rat_i64(1)],
            1,
        )
        .unwrap();
        let b = shift_by_power(&ones, &rat_i64(1)).unwrap();
        for n in 1..=20 {
            assert_eq!(b.term(n).unwrap(), rat_from(1, n));
        }
    }

    #[test]
    fn fractional_alpha_tags() {
        let rec = crate::corpus::get("motzkin").unwrap().recurrence().unwrap();
        let tagged = shift_by_power(&rec, &rat_from(1, 2)).unwrap();
        assert_eq!(tagged.alpha_tag(), &rat_from(1, 2));
        assert_eq!(tagged.coeffs(), rec.coeffs());
    }

    #[test]
    fn leading_coefficient_vanishing_rejected() {
        let r = Recurrence::new(
            "bad",
            vec![Poly::from_ints(&[1]), Poly::from_ints(&[-5, 1])],
            vec![rat_i64(1)],
            0,
        );
        assert!(matches!(r, Err(Error::LeadingCoefficientRoot(5))));
        let ok = Recurrence::new(
            "good",
            vec![Poly::from_ints(&[1]), Poly::from_ints(&[-5, 1])],
            vec![rat_i64(1)],
            6,
        );
        assert!(ok.is_ok());
    }
}
