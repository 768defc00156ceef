//! Real algebraic numbers as elements of a fixed real number field
//! `Q(theta)`, with `theta` given by an irreducible minimal polynomial and an
//! exact rational isolating interval.
//!
//! Working inside one field keeps every arithmetic operation a polynomial
//! operation modulo the minimal polynomial: there is no degree blow-up and
//! the zero test is syntactic (an element is zero iff its coordinate vector
//! is zero), which is what makes exact sign computation terminate.

use std::fmt;
use std::sync::{Arc, Mutex};

use num_traits::{One, Signed, Zero};

use super::rat::{rational_roots, to_string_rational, Rational};
use crate::{Error, Result};

/// A real number field `Q(theta)`: an irreducible monic minimal polynomial
/// for `theta` (coefficients constant-first) plus a rational isolating
/// interval selecting one real root.  The interval is refined on demand;
/// refinement is cached behind a mutex so shared fields stay cheap.
pub struct NumberField {
    /// monic, irreducible, degree >= 2; constant-first
    minpoly: Vec<Rational>,
    /// displayed symbol for theta, e.g. `sqrt(2)`
    symbol: String,
    interval: Mutex<(Rational, Rational)>,
}

impl fmt::Debug for NumberField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "NumberField({}, deg {})", self.symbol, self.degree())
    }
}

impl NumberField {
    /// Builds `Q(theta)` from a monic irreducible polynomial and an isolating
    /// interval.  Irreducibility is certified for degrees up to 4 and trusted
    /// constructions elsewhere must go through [`NumberField::new_unchecked`].
    pub fn new(minpoly: Vec<Rational>, interval: (Rational, Rational), symbol: &str) -> Result<Arc<Self>> {
        let deg = minpoly.len().saturating_sub(1);
        if deg < 2 {
            return Err(Error::Irreducibility(deg));
        }
        if !minpoly.last().unwrap().is_one() {
            return Err(Error::InvalidSpec("minimal polynomial must be monic".into()));
        }
        if !is_irreducible(&minpoly)? {
            return Err(Error::Irreducibility(deg));
        }
        let field = Self::new_unchecked(minpoly, interval.clone(), symbol);
        // the interval must bracket exactly one simple real root
        let lo_sign = eval_sign(&field.minpoly, &interval.0);
        let hi_sign = eval_sign(&field.minpoly, &interval.1);
        if lo_sign == 0 || hi_sign == 0 || lo_sign == hi_sign {
            return Err(Error::NotIsolating);
        }
        Ok(field)
    }

    pub fn new_unchecked(minpoly: Vec<Rational>, interval: (Rational, Rational), symbol: &str) -> Arc<Self> {
        Arc::new(NumberField {
            minpoly,
            symbol: symbol.to_string(),
            interval: Mutex::new(interval),
        })
    }

    /// `Q(sqrt(r))` for a positive non-square rational, with theta > 0.
    pub fn sqrt_field(r: &Rational) -> Result<Arc<Self>> {
        assert!(r.is_positive());
        let hi = if r >= &Rational::one() {
            r.clone() + Rational::one()
        } else {
            Rational::one()
        };
        NumberField::new(
            vec![-r.clone(), Rational::zero(), Rational::one()],
            (Rational::zero(), hi),
            &format!("sqrt({})", to_string_rational(r)),
        )
    }

    pub fn degree(&self) -> usize {
        self.minpoly.len() - 1
    }

    pub fn minpoly(&self) -> &[Rational] {
        &self.minpoly
    }

    pub fn symbol(&self) -> &str {
        &self.symbol
    }

    pub fn interval(&self) -> (Rational, Rational) {
        self.interval.lock().unwrap().clone()
    }

    /// Shrinks the isolating interval until its width is at most `width`.
    /// Bisection: the minimal polynomial has no rational roots (degree >= 2,
    /// irreducible), so any bisection point gives a strict sign.
    pub fn refine_to(&self, width: &Rational) {
        let mut iv = self.interval.lock().unwrap();
        let (mut lo, mut hi) = iv.clone();
        if &(&hi - &lo) <= width {
            return;
        }
        let lo_sign = eval_sign(&self.minpoly, &lo);
        debug_assert!(lo_sign != 0);
        while &(&hi - &lo) > width {
            let mid = (&lo + &hi) / Rational::from_integer(2.into());
            let s = eval_sign(&self.minpoly, &mid);
            debug_assert!(s != 0, "irreducible minpoly cannot vanish at a rational");
            if s == lo_sign {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        *iv = (lo, hi);
    }

    /// True when `other` denotes the same field with the same selected root.
    ///
    /// Same minimal polynomial given, the roots coincide iff the intersection
    /// of the two isolating intervals contains a root: the common root lies in
    /// both intervals, while for distinct roots any root of the intersection
    /// would be isolated by both intervals at once.
    pub fn same_field(self: &Arc<Self>, other: &Arc<Self>) -> bool {
        if Arc::ptr_eq(self, other) {
            return true;
        }
        if self.minpoly != other.minpoly {
            return false;
        }
        let (a_lo, a_hi) = self.interval();
        let (b_lo, b_hi) = other.interval();
        let lo = a_lo.max(b_lo);
        let hi = a_hi.min(b_hi);
        if lo >= hi {
            return false;
        }
        rational_sturm_count(&self.minpoly, &lo, &hi) == 1
    }
}

/// Number of real roots of a squarefree rational polynomial in `(lo, hi]`.
/// Small local Sturm count; the general machinery lives in `roots`, this one
/// avoids a dependency cycle for field-identity checks.
fn rational_sturm_count(coeffs: &[Rational], lo: &Rational, hi: &Rational) -> usize {
    let trim = |v: &mut Vec<Rational>| {
        while v.last().map(|c| c.is_zero()).unwrap_or(false) {
            v.pop();
        }
    };
    let mut chain: Vec<Vec<Rational>> = vec![];
    let mut p0: Vec<Rational> = coeffs.to_vec();
    trim(&mut p0);
    let mut p1: Vec<Rational> = p0
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c * Rational::from_integer(num_bigint::BigInt::from(i)))
        .collect();
    trim(&mut p1);
    chain.push(p0.clone());
    while !p1.is_empty() {
        chain.push(p1.clone());
        // rem = -(p0 mod p1)
        let mut rem = p0.clone();
        while rem.len() >= p1.len() && !rem.is_empty() {
            let shift = rem.len() - p1.len();
            let coef = rem.last().unwrap() / p1.last().unwrap();
            for (i, c) in p1.iter().enumerate() {
                let d = c * &coef;
                rem[shift + i] -= d;
            }
            trim(&mut rem);
        }
        for c in rem.iter_mut() {
            *c = -c.clone();
        }
        p0 = p1;
        p1 = rem;
    }
    let variations = |x: &Rational| -> usize {
        let mut last = 0;
        let mut v = 0;
        for p in &chain {
            let s = eval_sign(p, x);
            if s != 0 {
                if last != 0 && s != last {
                    v += 1;
                }
                last = s;
            }
        }
        v
    };
    variations(lo).saturating_sub(variations(hi))
}

fn eval_sign(coeffs: &[Rational], x: &Rational) -> i32 {
    let mut acc = Rational::zero();
    for c in coeffs.iter().rev() {
        acc = acc * x + c;
    }
    if acc.is_zero() {
        0
    } else if acc.is_positive() {
        1
    } else {
        -1
    }
}

/// Irreducibility over Q for degrees <= 4 (after clearing content):
/// degree 1 trivially, degree 2/3 via rational roots, degree 4 via rational
/// roots plus the quadratic-factor test through the resolvent cubic.
pub fn is_irreducible(monic: &[Rational]) -> Result<bool> {
    let deg = monic.len() - 1;
    match deg {
        0 => Ok(false),
        1 => Ok(true),
        2 | 3 => {
            let ints = clear_denominators(monic);
            Ok(rational_roots(&ints).is_empty())
        }
        4 => {
            let ints = clear_denominators(monic);
            if !rational_roots(&ints).is_empty() {
                return Ok(false);
            }
            Ok(!quartic_splits_into_quadratics(monic))
        }
        d => Err(Error::Irreducibility(d)),
    }
}

fn clear_denominators(coeffs: &[Rational]) -> Vec<num_bigint::BigInt> {
    use num_integer::Integer;
    let mut l = num_bigint::BigInt::one();
    for c in coeffs {
        l = l.lcm(c.denom());
    }
    coeffs
        .iter()
        .map(|c| (c * Rational::from_integer(l.clone())).to_integer())
        .collect()
}

/// Whether the monic quartic x^4+a x^3+b x^2+c x+d factors into two monic
/// quadratics over Q.  Depressing to x^4+p x^2+q x+r, a factorization
/// corresponds to a rational root z > 0 ... handled via the resolvent cubic
/// z^3 - p z^2 - 4 r z + (4 p r - q^2) with z = u^2 the square of the linear
/// coefficient of a factor; z = 0 needs q = 0 and the biquadratic test.
fn quartic_splits_into_quadratics(monic: &[Rational]) -> bool {
    let a = &monic[3];
    let b = &monic[2];
    let c = &monic[1];
    let d = &monic[0];
    let four = Rational::from_integer(4.into());
    // depress: x = y - a/4
    let a4 = a / &four;
    let p = b - Rational::from_integer(6.into()) * &a4 * &a4;
    let q = c - Rational::from_integer(2.into()) * b * &a4
        + Rational::from_integer(8.into()) * &a4 * &a4 * &a4;
    let r = d - c * &a4 + b * &a4 * &a4
        - Rational::from_integer(3.into()) * &a4 * &a4 * &a4 * &a4;
    // y^4+py^2+qy+r = (y^2+uy+v)(y^2-uy+w) requires
    //   v+w-u^2 = p, u(w-v) = q, vw = r.
    // With z = u^2: z^3 + 2p z^2 + (p^2-4r) z - q^2 = 0.
    let resolvent = [
        -(&q * &q),
        &p * &p - &four * &r,
        Rational::from_integer(2.into()) * &p,
        Rational::one(),
    ];
    let ints = clear_denominators(&resolvent);
    for z in rational_roots(&ints) {
        if z.is_negative() {
            continue;
        }
        if z.is_zero() {
            // u = 0: biquadratic split y^4+py^2+r = (y^2+v)(y^2+w) needs
            // p^2-4r a rational square (and q must vanish).
            if q.is_zero() {
                let disc = &p * &p - &four * &r;
                if rational_is_square(&disc) {
                    return true;
                }
            }
            continue;
        }
        if !rational_is_square(&z) {
            continue;
        }
        let u = rational_sqrt(&z);
        // w - v = q/u, w + v = p + z
        let wv_sum = &p + &z;
        let wv_diff = &q / &u;
        let two = Rational::from_integer(2.into());
        let w = (&wv_sum + &wv_diff) / &two;
        let v = (&wv_sum - &wv_diff) / &two;
        if &v * &w == r {
            return true;
        }
    }
    false
}

fn rational_is_square(r: &Rational) -> bool {
    if r.is_negative() {
        return false;
    }
    let n = r.numer().sqrt();
    let d = r.denom().sqrt();
    &(&n * &n) == r.numer() && &(&d * &d) == r.denom()
}

fn rational_sqrt(r: &Rational) -> Rational {
    Rational::new(r.numer().sqrt(), r.denom().sqrt())
}

/// An exact real number: either rational or an element of a shared number
/// field.  The `Alg` variant keeps coordinates of degree < deg(field) and is
/// collapsed back to `Rat` whenever all higher coordinates vanish.
#[derive(Clone)]
pub enum Scalar {
    Rat(Rational),
    Alg { field: Arc<NumberField>, coords: Vec<Rational> },
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rat(r) => write!(f, "{}", to_string_rational(r)),
            Scalar::Alg { field, coords } => {
                let mut parts = vec![];
                for (i, c) in coords.iter().enumerate() {
                    if c.is_zero() {
                        continue;
                    }
                    let sym = match i {
                        0 => String::new(),
                        1 => format!("*{}", field.symbol()),
                        _ => format!("*{}^{}", field.symbol(), i),
                    };
                    parts.push(format!("{}{}", to_string_rational(c), sym));
                }
                if parts.is_empty() {
                    write!(f, "0")
                } else {
                    write!(f, "{}", parts.join(" + ").replace("+ -", "- "))
                }
            }
        }
    }
}

impl From<Rational> for Scalar {
    fn from(r: Rational) -> Self {
        Scalar::Rat(r)
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::Rat(Rational::from_integer(n.into()))
    }
}

impl PartialEq for Scalar {
    fn eq(&self, other: &Self) -> bool {
        (self.clone() - other.clone()).is_zero()
    }
}
impl Eq for Scalar {}

impl Scalar {
    pub fn zero() -> Self {
        Scalar::Rat(Rational::zero())
    }

    pub fn one() -> Self {
        Scalar::Rat(Rational::one())
    }

    pub fn from_int(n: i64) -> Self {
        n.into()
    }

    /// theta itself as an element of its field.
    pub fn generator(field: &Arc<NumberField>) -> Self {
        let mut coords = vec![Rational::zero(); field.degree()];
        coords[1] = Rational::one();
        Scalar::Alg { field: field.clone(), coords }
    }

    /// Exact square root of a nonnegative rational: rational when possible,
    /// otherwise the positive root of `x^2 - r` in `Q(sqrt r)`.
    pub fn sqrt_rational(r: &Rational) -> Result<Self> {
        if r.is_negative() {
            return Err(Error::InvalidSpec("sqrt of negative rational".into()));
        }
        if rational_is_square(r) {
            return Ok(Scalar::Rat(rational_sqrt(r)));
        }
        let field = NumberField::sqrt_field(r)?;
        Ok(Scalar::generator(&field))
    }

    /// Element of a given field from coordinates (constant-first, len <= deg).
    pub fn in_field(field: &Arc<NumberField>, mut coords: Vec<Rational>) -> Self {
        coords.resize(field.degree(), Rational::zero());
        Scalar::Alg { field: field.clone(), coords }.normalized()
    }

    fn normalized(self) -> Self {
        match self {
            Scalar::Alg { field, coords } => {
                if coords.iter().skip(1).all(|c| c.is_zero()) {
                    Scalar::Rat(coords.into_iter().next().unwrap_or_else(Rational::zero))
                } else {
                    Scalar::Alg { field, coords }
                }
            }
            s => s,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rat(r) => r.is_zero(),
            // minpoly irreducible of degree > deg(coords): zero iff all
            // coordinates are zero
            Scalar::Alg { coords, .. } => coords.iter().all(|c| c.is_zero()),
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Rat(r) => r.is_one(),
            Scalar::Alg { .. } => false,
        }
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        match self {
            Scalar::Rat(r) => Some(r),
            Scalar::Alg { .. } => None,
        }
    }

    pub fn expect_rational(&self) -> &Rational {
        self.as_rational().expect("expected rational scalar")
    }

    pub fn field(&self) -> Option<&Arc<NumberField>> {
        match self {
            Scalar::Rat(_) => None,
            Scalar::Alg { field, .. } => Some(field),
        }
    }

    fn lift(&self, field: &Arc<NumberField>) -> Vec<Rational> {
        match self {
            Scalar::Rat(r) => {
                let mut v = vec![Rational::zero(); field.degree()];
                v[0] = r.clone();
                v
            }
            Scalar::Alg { field: f, coords } => {
                assert!(f.same_field(field), "mixed algebraic number fields");
                coords.clone()
            }
        }
    }

    fn join_field(&self, other: &Scalar) -> Option<Arc<NumberField>> {
        match (self.field(), other.field()) {
            (Some(f), Some(g)) => {
                assert!(f.same_field(g), "mixed algebraic number fields");
                Some(f.clone())
            }
            (Some(f), None) => Some(f.clone()),
            (None, Some(g)) => Some(g.clone()),
            (None, None) => None,
        }
    }

    pub fn neg(&self) -> Scalar {
        match self {
            Scalar::Rat(r) => Scalar::Rat(-r.clone()),
            Scalar::Alg { field, coords } => Scalar::Alg {
                field: field.clone(),
                coords: coords.iter().map(|c| -c.clone()).collect(),
            },
        }
    }

    pub fn recip(&self) -> Scalar {
        assert!(!self.is_zero(), "division by zero scalar");
        match self {
            Scalar::Rat(r) => Scalar::Rat(r.recip()),
            Scalar::Alg { field, coords } => {
                let inv = invert_mod(coords, field.minpoly());
                Scalar::in_field(field, inv)
            }
        }
    }

    pub fn pow_i64(&self, e: i64) -> Scalar {
        if e == 0 {
            return Scalar::one();
        }
        let base = if e < 0 { self.recip() } else { self.clone() };
        let mut acc = Scalar::one();
        let mut b = base;
        let mut k = e.unsigned_abs();
        while k > 0 {
            if k & 1 == 1 {
                acc = acc * b.clone();
            }
            b = b.clone() * b;
            k >>= 1;
        }
        acc
    }

    /// Exact sign (-1, 0, 1) via syntactic zero test plus isolating-interval
    /// refinement; terminates because nonzero field elements evaluate away
    /// from zero once theta's interval is tight enough.
    pub fn signum(&self) -> i32 {
        match self {
            Scalar::Rat(r) => {
                if r.is_zero() {
                    0
                } else if r.is_positive() {
                    1
                } else {
                    -1
                }
            }
            Scalar::Alg { field, coords } => {
                if coords.iter().all(|c| c.is_zero()) {
                    return 0;
                }
                let mut width = {
                    let (lo, hi) = field.interval();
                    &hi - &lo
                };
                loop {
                    let (lo, hi) = field.interval();
                    let (vlo, vhi) = eval_on_interval(coords, &lo, &hi);
                    if vlo.is_positive() {
                        return 1;
                    }
                    if vhi.is_negative() {
                        return -1;
                    }
                    width /= Rational::from_integer(4.into());
                    field.refine_to(&width);
                }
            }
        }
    }

    pub fn is_positive(&self) -> bool {
        self.signum() > 0
    }

    pub fn is_negative(&self) -> bool {
        self.signum() < 0
    }

    /// A rational enclosure `[lo, hi]` of width at most 2^-bits.
    pub fn rational_enclosure(&self, bits: u32) -> (Rational, Rational) {
        match self {
            Scalar::Rat(r) => (r.clone(), r.clone()),
            Scalar::Alg { field, coords } => {
                let target = Rational::new(1.into(), num_bigint::BigInt::from(2).pow(bits));
                // Polynomial evaluation multiplies interval widths by a
                // Lipschitz factor; refine geometrically until the result is
                // tight enough.
                let mut width = target.clone();
                loop {
                    field.refine_to(&width);
                    let (lo, hi) = field.interval();
                    let (vlo, vhi) = eval_on_interval(coords, &lo, &hi);
                    if &vhi - &vlo <= target {
                        return (vlo, vhi);
                    }
                    width /= Rational::from_integer(16.into());
                }
            }
        }
    }
}

/// Interval evaluation of the coordinate polynomial over [lo, hi] in exact
/// rational arithmetic (Horner with interval ops).
fn eval_on_interval(coords: &[Rational], lo: &Rational, hi: &Rational) -> (Rational, Rational) {
    let mut alo = Rational::zero();
    let mut ahi = Rational::zero();
    for c in coords.iter().rev() {
        // [alo, ahi] * [lo, hi]
        let candidates = [&alo * lo, &alo * hi, &ahi * lo, &ahi * hi];
        let mut mlo = candidates[0].clone();
        let mut mhi = candidates[0].clone();
        for c in &candidates[1..] {
            if c < &mlo {
                mlo = c.clone();
            }
            if c > &mhi {
                mhi = c.clone();
            }
        }
        alo = mlo + c;
        ahi = mhi + c;
    }
    (alo, ahi)
}

/// Multiplication of coordinate vectors modulo the minimal polynomial.
fn mul_mod(a: &[Rational], b: &[Rational], minpoly: &[Rational]) -> Vec<Rational> {
    let deg = minpoly.len() - 1;
    let mut prod = vec![Rational::zero(); a.len() + b.len()];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if y.is_zero() {
                continue;
            }
            let t = x * y;
            prod[i + j] += t;
        }
    }
    // reduce: theta^deg = -(m_0 + m_1 theta + ... + m_{deg-1} theta^{deg-1})
    for k in (deg..prod.len()).rev() {
        if prod[k].is_zero() {
            continue;
        }
        let c = std::mem::replace(&mut prod[k], Rational::zero());
        for j in 0..deg {
            let delta = &c * &minpoly[j];
            prod[k - deg + j] -= delta;
        }
    }
    prod.truncate(deg);
    prod.resize(deg, Rational::zero());
    prod
}

/// Inverse of `a` modulo the irreducible `minpoly` by the extended Euclidean
/// algorithm over Q[x].
fn invert_mod(a: &[Rational], minpoly: &[Rational]) -> Vec<Rational> {
    // r0 = minpoly, r1 = a; track s only for a-coefficients
    let trim = |v: &mut Vec<Rational>| {
        while v.last().map(|c| c.is_zero()).unwrap_or(false) {
            v.pop();
        }
    };
    let mut r0: Vec<Rational> = minpoly.to_vec();
    let mut r1: Vec<Rational> = a.to_vec();
    trim(&mut r1);
    let mut t0: Vec<Rational> = vec![];
    let mut t1: Vec<Rational> = vec![Rational::one()];
    while !r1.is_empty() {
        // (q, rem) = divrem(r0, r1)
        let mut rem = r0.clone();
        let mut q: Vec<Rational> = vec![Rational::zero(); rem.len().saturating_sub(r1.len()) + 1];
        while rem.len() >= r1.len() && !rem.is_empty() {
            let shift = rem.len() - r1.len();
            let coef = rem.last().unwrap() / r1.last().unwrap();
            q[shift] = coef.clone();
            for (i, c) in r1.iter().enumerate() {
                let delta = c * &coef;
                rem[shift + i] -= delta;
            }
            trim(&mut rem);
            if rem.len() < r1.len() {
                break;
            }
        }
        trim(&mut q);
        // t2 = t0 - q*t1
        let mut qt = vec![Rational::zero(); q.len() + t1.len()];
        for (i, x) in q.iter().enumerate() {
            for (j, y) in t1.iter().enumerate() {
                let d = x * y;
                qt[i + j] += d;
            }
        }
        let mut t2 = t0.clone();
        t2.resize(t2.len().max(qt.len()), Rational::zero());
        for (i, c) in qt.into_iter().enumerate() {
            t2[i] -= c;
        }
        trim(&mut t2);
        r0 = r1;
        r1 = rem;
        t0 = t1;
        t1 = t2;
    }
    // r0 = gcd (a unit, since minpoly irreducible and a != 0)
    assert_eq!(r0.len(), 1, "inverse exists only for nonzero elements of a field");
    let unit = r0[0].clone();
    let mut out: Vec<Rational> = t0.iter().map(|c| c / &unit).collect();
    out.resize(minpoly.len() - 1, Rational::zero());
    out
}

impl std::ops::Add for Scalar {
    type Output = Scalar;
    fn add(self, rhs: Scalar) -> Scalar {
        match self.join_field(&rhs) {
            None => {
                let (Scalar::Rat(a), Scalar::Rat(b)) = (self, rhs) else {
                    unreachable!()
                };
                Scalar::Rat(a + b)
            }
            Some(field) => {
                let a = self.lift(&field);
                let b = rhs.lift(&field);
                let coords = a
                    .into_iter()
                    .zip(b)
                    .map(|(x, y)| x + y)
                    .collect();
                Scalar::Alg { field, coords }.normalized()
            }
        }
    }
}

impl std::ops::Sub for Scalar {
    type Output = Scalar;
    fn sub(self, rhs: Scalar) -> Scalar {
        self + rhs.neg()
    }
}

impl std::ops::Mul for Scalar {
    type Output = Scalar;
    fn mul(self, rhs: Scalar) -> Scalar {
        match self.join_field(&rhs) {
            None => {
                let (Scalar::Rat(a), Scalar::Rat(b)) = (self, rhs) else {
                    unreachable!()
                };
                Scalar::Rat(a * b)
            }
            Some(field) => {
                let a = self.lift(&field);
                let b = rhs.lift(&field);
                let coords = mul_mod(&a, &b, field.minpoly());
                Scalar::Alg { field, coords }.normalized()
            }
        }
    }
}

impl std::ops::Div for Scalar {
    type Output = Scalar;
    fn div(self, rhs: Scalar) -> Scalar {
        self * rhs.recip()
    }
}

impl std::ops::Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar::neg(&self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat::{rat_from, rat_i64};

    fn sqrt2() -> Scalar {
        Scalar::sqrt_rational(&rat_i64(2)).unwrap()
    }

    #[test]
    fn sqrt_arithmetic() {
        let s = sqrt2();
        let two = s.clone() * s.clone();
        assert_eq!(two, Scalar::from_int(2));
        // (1+sqrt2)(1-sqrt2) = -1
        let a = Scalar::one() + s.clone();
        let b = Scalar::one() - s.clone();
        assert_eq!(a * b, Scalar::from_int(-1));
    }

    #[test]
    fn sign_and_recip() {
        let s = sqrt2();
        // sqrt2 - 1 > 0, sqrt2 - 3/2 < 0
        assert_eq!((s.clone() - Scalar::one()).signum(), 1);
        assert_eq!((s.clone() - Scalar::Rat(rat_from(3, 2))).signum(), -1);
        // 1/(sqrt2-1) = sqrt2+1
        let inv = (s.clone() - Scalar::one()).recip();
        assert_eq!(inv, s.clone() + Scalar::one());
        // rational zero embedded in the field
        let z = s.clone() - s.clone();
        assert_eq!(z.signum(), 0);
        assert!(matches!(z, Scalar::Rat(_)));
    }

    #[test]
    fn negative_branch_root() {
        // root of x^2-2 in (-2,-1)
        let field = NumberField::new(
            vec![rat_i64(-2), rat_i64(0), rat_i64(1)],
            (rat_i64(-2), rat_i64(-1)),
            "theta",
        )
        .unwrap();
        let x = Scalar::generator(&field);
        assert_eq!(x.signum(), -1);
        assert_eq!((x.clone() * x).signum(), 1);
    }

    #[test]
    fn quartic_field_q_sqrt2_sqrt5() {
        // theta = sqrt2 + sqrt5, minpoly x^4 - 14x^2 + 9
        let field = NumberField::new(
            vec![rat_i64(9), rat_i64(0), rat_i64(-14), rat_i64(0), rat_i64(1)],
            (rat_i64(3), rat_i64(4)),
            "theta",
        )
        .unwrap();
        let theta = Scalar::generator(&field);
        // sqrt2 = (theta^3 - 11 theta)/6, sqrt5 = (17 theta - theta^3)/6
        let t3 = theta.pow_i64(3);
        let s2 = (t3.clone() - Scalar::Rat(rat_i64(11)) * theta.clone()) / Scalar::from_int(6);
        let s5 = (Scalar::Rat(rat_i64(17)) * theta.clone() - t3) / Scalar::from_int(6);
        assert_eq!(s2.clone() * s2.clone(), Scalar::from_int(2));
        assert_eq!(s5.clone() * s5.clone(), Scalar::from_int(5));
        assert_eq!(s2.clone() + s5.clone(), theta);
        assert!(s2.is_positive() && s5.is_positive());
    }

    #[test]
    fn irreducibility_checks() {
        // x^2 - 4 reducible
        assert!(!is_irreducible(&[rat_i64(-4), rat_i64(0), rat_i64(1)]).unwrap());
        // x^2 - 2 irreducible
        assert!(is_irreducible(&[rat_i64(-2), rat_i64(0), rat_i64(1)]).unwrap());
        // x^4 - 14x^2 + 9 irreducible (no rational roots, no quadratic split)
        assert!(is_irreducible(&[rat_i64(9), rat_i64(0), rat_i64(-14), rat_i64(0), rat_i64(1)]).unwrap());
        // x^4 + 2x^2 + 1 = (x^2+1)^2 reducible
        assert!(!is_irreducible(&[rat_i64(1), rat_i64(0), rat_i64(2), rat_i64(0), rat_i64(1)]).unwrap());
        // x^4 - 10x^2 + 1 (minpoly of sqrt2+sqrt3) irreducible
        assert!(is_irreducible(&[rat_i64(1), rat_i64(0), rat_i64(-10), rat_i64(0), rat_i64(1)]).unwrap());
        // x^4 - 4 = (x^2-2)(x^2+2) reducible
        assert!(!is_irreducible(&[rat_i64(-4), rat_i64(0), rat_i64(0), rat_i64(0), rat_i64(1)]).unwrap());
    }

    #[test]
    fn enclosure_width() {
        let s = sqrt2();
        let (lo, hi) = s.rational_enclosure(80);
        assert!(&hi - &lo <= Rational::new(1.into(), num_bigint::BigInt::from(2).pow(80u32)));
        let mid = (lo.clone() + hi.clone()) / rat_i64(2);
        // mid^2 close to 2
        let err = (mid.clone() * mid - rat_i64(2)).abs();
        assert!(err < Rational::new(1.into(), num_bigint::BigInt::from(2).pow(70u32)));
    }
}
