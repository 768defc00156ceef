//! Helpers around `num_rational::BigRational`, plus coprime-basis (factor
//! refinement) decomposition used by exact sign tests on linear forms in
//! logarithms.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::{Error, Result};

pub type Rational = num_rational::BigRational;

pub fn rat_i64(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn rat_from(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Parses an exact rational written as `p`, `p/q`, or with a leading sign.
/// Floating-point notation is rejected: inputs are exact by contract.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let t = s.trim();
    if t.is_empty() || t.contains(['.', 'e', 'E']) {
        return Err(Error::InvalidSpec(format!("not an exact rational: {s:?}")));
    }
    let (num, den) = match t.split_once('/') {
        Some((a, b)) => (a.trim(), b.trim()),
        None => (t, "1"),
    };
    let n: BigInt = num
        .parse()
        .map_err(|_| Error::InvalidSpec(format!("bad integer {num:?}")))?;
    let d: BigInt = den
        .parse()
        .map_err(|_| Error::InvalidSpec(format!("bad integer {den:?}")))?;
    if d.is_zero() {
        return Err(Error::InvalidSpec(format!("zero denominator in {s:?}")));
    }
    Ok(Rational::new(n, d))
}

pub fn to_string_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn pow_rational(r: &Rational, e: i64) -> Rational {
    if e == 0 {
        return Rational::one();
    }
    assert!(e.unsigned_abs() <= i32::MAX as u64);
    r.pow(e as i32)
}

pub fn rat_floor(r: &Rational) -> BigInt {
    r.floor().to_integer()
}

pub fn rat_ceil(r: &Rational) -> BigInt {
    r.ceil().to_integer()
}

/// All rational roots of the integer polynomial with the given coefficients
/// (constant first), by the rational root theorem.  Used when factoring
/// characteristic polynomials.
pub fn rational_roots(coeffs: &[BigInt]) -> Vec<Rational> {
    let mut cs: Vec<BigInt> = coeffs.to_vec();
    while cs.last().map(|c| c.is_zero()).unwrap_or(false) {
        cs.pop();
    }
    if cs.len() <= 1 {
        return vec![];
    }
    let mut shift = 0usize;
    while cs[shift].is_zero() {
        shift += 1; // x = 0 handled by the caller via the zero coefficient
    }
    let mut out = vec![];
    if shift > 0 {
        out.push(Rational::zero());
    }
    let a0 = cs[shift].abs();
    let ad = cs.last().unwrap().abs();
    let eval = |x: &Rational| -> Rational {
        let mut acc = Rational::zero();
        for c in cs.iter().rev() {
            acc = acc * x + Rational::from_integer(c.clone());
        }
        acc
    };
    for p in divisors(&a0.to_biguint().unwrap()) {
        for q in divisors(&ad.to_biguint().unwrap()) {
            for sgn in [1i64, -1] {
                let cand = Rational::new(BigInt::from(sgn) * BigInt::from(p.clone()), BigInt::from(q.clone()));
                if eval(&cand).is_zero() && !out.contains(&cand) {
                    out.push(cand);
                }
            }
        }
    }
    out
}

fn divisors(n: &BigUint) -> Vec<BigUint> {
    // trial division; characteristic-polynomial constants are small in practice
    let mut out = vec![];
    let mut d = BigUint::one();
    let cap = BigUint::from(2_000_000u64);
    loop {
        if &d * &d > *n {
            break;
        }
        if (n % &d).is_zero() {
            out.push(d.clone());
            out.push(n / &d);
        }
        d += BigUint::one();
        if d > cap {
            // fall back: include n itself and 1 only; missing divisors merely
            // make rational-root detection incomplete for huge constants
            break;
        }
    }
    out.sort();
    out.dedup();
    out
}

/// Coprime-basis (factor refinement) decomposition.
///
/// Given positive rationals `xs`, returns pairwise-coprime positive integers
/// `b_1..b_m` (all > 1) and an exponent matrix `E` with
/// `xs[i] = prod_j b_j^{E[i][j]}` exactly.  This makes multiplicative
/// relations between the inputs decidable by integer linear algebra, without
/// factoring anything into primes.
pub fn coprime_basis(xs: &[Rational]) -> (Vec<BigUint>, Vec<Vec<i64>>) {
    let one = BigUint::one();
    let mut set: Vec<BigUint> = vec![];
    for x in xs {
        assert!(x.is_positive(), "coprime_basis requires positive inputs");
        for part in [x.numer().to_biguint().unwrap(), x.denom().to_biguint().unwrap()] {
            if part != one {
                set.push(part);
            }
        }
    }
    // Refine to a pairwise-coprime set: replacing (a, b) with (a/g, b/g, g)
    // keeps every earlier element expressible as a product of set elements
    // and strictly decreases the product of the set, so this terminates.
    'refine: loop {
        for i in 0..set.len() {
            for j in i + 1..set.len() {
                let g = set[i].gcd(&set[j]);
                if g != one {
                    let a = &set[i] / &g;
                    let b = &set[j] / &g;
                    set.swap_remove(j);
                    set.swap_remove(i);
                    for piece in [a, b, g] {
                        if piece != one {
                            set.push(piece);
                        }
                    }
                    continue 'refine;
                }
            }
        }
        break;
    }
    set.sort();
    set.dedup();
    // Exponents by repeated division; each input must factor completely.
    let mut exps = vec![vec![0i64; set.len()]; xs.len()];
    for (i, x) in xs.iter().enumerate() {
        for (sign, part) in [
            (1i64, x.numer().to_biguint().unwrap()),
            (-1, x.denom().to_biguint().unwrap()),
        ] {
            let mut rem = part;
            for (j, b) in set.iter().enumerate() {
                while (&rem % b).is_zero() {
                    rem /= b;
                    exps[i][j] += sign;
                }
            }
            debug_assert!(rem.is_one(), "factor refinement must cover all inputs");
        }
    }
    (set, exps)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_render() {
        assert_eq!(parse_rational("-3/4").unwrap(), rat_from(-3, 4));
        assert_eq!(parse_rational(" 7 ").unwrap(), rat_i64(7));
        assert!(parse_rational("1.5").is_err());
        assert!(parse_rational("1/0").is_err());
        assert_eq!(to_string_rational(&rat_from(6, -4)), "-3/2");
    }

    #[test]
    fn coprime_basis_relations() {
        // 12 = 2^2*3, 18 = 2*3^2, 1/6 = 2^-1 3^-1
        let xs = vec![rat_i64(12), rat_i64(18), rat_from(1, 6)];
        let (bases, exps) = coprime_basis(&xs);
        for (i, x) in xs.iter().enumerate() {
            let mut acc = Rational::one();
            for (j, b) in bases.iter().enumerate() {
                let bb = Rational::from_integer(BigInt::from(b.clone()));
                let e = exps[i][j];
                for _ in 0..e.abs() {
                    if e > 0 {
                        acc *= &bb;
                    } else {
                        acc /= &bb;
                    }
                }
            }
            assert_eq!(&acc, x, "reconstruction of {x}");
        }
        // pairwise coprime
        for a in 0..bases.len() {
            for b in a + 1..bases.len() {
                assert!(bases[a].gcd(&bases[b]).is_one());
            }
        }
    }

    #[test]
    fn rational_roots_small() {
        // (2x-1)(x+3) = 2x^2+5x-3
        let roots = rational_roots(&[BigInt::from(-3), BigInt::from(5), BigInt::from(2)]);
        assert!(roots.contains(&rat_from(1, 2)));
        assert!(roots.contains(&rat_i64(-3)));
        assert_eq!(roots.len(), 2);
    }
}
