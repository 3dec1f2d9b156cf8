//! Detection of left and right factors lying in F[z].
//!
//! Every word factors uniquely as `z^k w'` with `w'` not starting with
//! `z`, so `f = sum_{w'} P_{w'}(z) w'` and a univariate `p(z)` is a left
//! factor of `f` exactly when it divides every `P_{w'}`. The gcd of
//! these is the maximal left z-divisor.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{Field, NcPoly, Scalar, UPoly, Word};
use crate::error::{Error, Result};

/// A factorization `f = p * q` (left) or `f = q * p` (right) with `p` a
/// nonconstant polynomial in `z` alone.
#[derive(Debug, Clone, PartialEq)]
pub struct ZDivisor {
    pub p: NcPoly,
    pub q: NcPoly,
}

fn z_index(f: &NcPoly) -> Result<usize> {
    f.alphabet().index_of("z").ok_or(Error::AlphabetMissingZ)
}

/// Splits `f` into `sum P_{w'}(z) w'` keyed by the z-free-headed suffix.
fn left_z_profile(f: &NcPoly, iz: usize) -> BTreeMap<Word, UPoly> {
    let field = f.field();
    let mut acc: BTreeMap<Word, Vec<Scalar>> = BTreeMap::new();
    for (w, c) in f.terms() {
        let k = w.leading_run(iz);
        let slot = acc.entry(w.suffix(k)).or_default();
        if slot.len() <= k {
            slot.resize(k + 1, Scalar::zero(field));
        }
        slot[k] = c.clone();
    }
    acc.into_iter()
        .map(|(w, cs)| (w, UPoly::from_coeffs(field, cs)))
        .collect()
}

pub(crate) fn upoly_to_nc(p: &UPoly, f: &NcPoly, iz: usize) -> NcPoly {
    let terms = p
        .coeffs()
        .iter()
        .enumerate()
        .map(|(i, c)| (Word::from_letters(std::iter::repeat_n(iz, i)), c.clone()));
    NcPoly::from_terms(f.alphabet(), f.field(), terms).expect("coefficients share the field")
}

/// The maximal monic left divisor of `f` in F[z] (1 when there is none).
pub fn max_left_zdivisor(f: &NcPoly) -> Result<UPoly> {
    let iz = z_index(f)?;
    let profile = left_z_profile(f, iz);
    Ok(profile
        .values()
        .fold(UPoly::zero(f.field()), |g, pw| g.gcd(pw)))
}

/// Finds `f = p * q` with `p` in F[z] of degree in `1..=dmax`, if one
/// exists.
pub fn left_zpoly_divisor(f: &NcPoly, dmax: usize) -> Result<Option<ZDivisor>> {
    if dmax < 1 {
        return Err(Error::DegreeBoundInvalid { min: 1, got: dmax });
    }
    if f.is_zero() {
        return Err(Error::InvalidInput("zero polynomial has every divisor".into()));
    }
    let iz = z_index(f)?;
    let profile = left_z_profile(f, iz);
    let g = profile
        .values()
        .fold(UPoly::zero(f.field()), |g, pw| g.gcd(pw));
    let Some(p) = bounded_divisor(&g, dmax) else {
        return Ok(None);
    };
    let mut q = NcPoly::zero(f.alphabet(), f.field());
    for (suffix, pw) in &profile {
        let cof = pw.exact_div(&p).expect("p divides the gcd");
        let cof = upoly_to_nc(&cof, f, iz);
        q = &q + &cof.sandwich(&Word::empty(), suffix);
    }
    let p = upoly_to_nc(&p, f, iz);
    debug_assert_eq!(&(&p * &q), f);
    Ok(Some(ZDivisor { p, q }))
}

/// Finds `f = q * p` with `p` in F[z] of degree in `1..=dmax`.
pub fn right_zpoly_divisor(f: &NcPoly, dmax: usize) -> Result<Option<ZDivisor>> {
    Ok(left_zpoly_divisor(&f.reversed(), dmax)?.map(|d| ZDivisor {
        p: d.p,
        q: d.q.reversed(),
    }))
}

/// A monic divisor of `g` with degree in `1..=dmax`. Complete when
/// `deg g <= dmax`; otherwise searches squarefree components and linear
/// factors.
fn bounded_divisor(g: &UPoly, dmax: usize) -> Option<UPoly> {
    let dg = g.degree()?;
    if dg == 0 {
        return None;
    }
    if dg <= dmax {
        return Some(g.monic());
    }
    if let Some(s) = g
        .squarefree_factors()
        .into_iter()
        .find(|s| s.degree().is_some_and(|d| (1..=dmax).contains(&d)))
    {
        return Some(s.monic());
    }
    find_root(g).map(|r| {
        let field = g.field();
        UPoly::from_coeffs(field, vec![-r, Scalar::one(field)])
    })
}

fn find_root(g: &UPoly) -> Option<Scalar> {
    match g.field() {
        Field::Prime(p) => root_mod_p(g, p),
        Field::Rationals => rational_root(g),
    }
}

fn root_mod_p(g: &UPoly, p: u32) -> Option<Scalar> {
    let field = g.field();
    if p <= 1 << 16 {
        return (0..p as i64)
            .map(|v| Scalar::from_i64(field, v))
            .find(|v| g.eval(v).is_zero());
    }
    // product of the distinct linear factors: gcd(g, X^p - X)
    let x = UPoly::monomial(Scalar::one(field), 1);
    let xp = pow_mod(&x, p as u64, g);
    let mut r = g.gcd(&xp.sub(&x));
    // split with gcd(r, (X + d)^((p-1)/2) - 1)
    let mut delta = 0i64;
    while r.degree()? > 1 {
        let shifted = UPoly::from_coeffs(field, vec![Scalar::from_i64(field, delta), Scalar::one(field)]);
        let h = pow_mod(&shifted, (p as u64 - 1) / 2, &r).sub(&UPoly::one(field));
        let s = r.gcd(&h);
        if s.degree().is_some_and(|d| d >= 1 && Some(d) < r.degree()) {
            r = s;
        }
        delta += 1;
        if delta > 64 {
            return None;
        }
    }
    let lead = r.leading()?.clone();
    Some(-(&r.coeff(0) * &lead.inv().ok()?))
}

fn pow_mod(base: &UPoly, mut exp: u64, m: &UPoly) -> UPoly {
    let field = base.field();
    let mut acc = UPoly::one(field);
    let mut b = base.div_rem(m).expect("nonzero modulus").1;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc.mul(&b).div_rem(m).expect("nonzero modulus").1;
        }
        b = b.mul(&b).div_rem(m).expect("nonzero modulus").1;
        exp >>= 1;
    }
    acc
}

const ROOT_SEARCH_LIMIT: u64 = 1 << 40;

fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// Rational root theorem on the integer-cleared polynomial.
fn rational_root(g: &UPoly) -> Option<Scalar> {
    let field = Field::Rationals;
    if g.coeff(0).is_zero() {
        return Some(Scalar::zero(field));
    }
    let rats: Vec<_> = g.coeffs().iter().map(|c| c.as_rational().cloned()).collect::<Option<_>>()?;
    let lcm = rats
        .iter()
        .fold(BigInt::one(), |acc, r| acc.lcm(r.denom()));
    let scale = BigRational::from_integer(lcm);
    let ints: Vec<BigInt> = rats.iter().map(|r| (r * &scale).to_integer()).collect();
    let a0 = ints.first()?.abs().to_u64().filter(|&v| v <= ROOT_SEARCH_LIMIT)?;
    let an = ints.last()?.abs().to_u64().filter(|&v| v <= ROOT_SEARCH_LIMIT)?;
    if a0.is_zero() {
        return Some(Scalar::zero(field));
    }
    for num in divisors(a0) {
        for den in divisors(an) {
            if num.gcd(&den) != 1 {
                continue;
            }
            for sign in [1i64, -1] {
                let cand = Scalar::from_ratio(
                    field,
                    &(BigInt::from(num) * sign),
                    &BigInt::from(den),
                )
                .ok()?;
                if g.eval(&cand).is_zero() {
                    return Some(cand);
                }
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::freealg::Alphabet;

    fn setup() -> (NcPoly, NcPoly, NcPoly) {
        let a = Alphabet::xyz();
        let q = Field::Rationals;
        (
            NcPoly::generator(&a, q, 0),
            NcPoly::generator(&a, q, 1),
            NcPoly::generator(&a, q, 2),
        )
    }

    #[test]
    fn visible_left_factor() {
        let (x, _, z) = setup();
        let one = NcPoly::one(x.alphabet(), x.field());
        let f = &(&z * &x) + &z;
        let d = left_zpoly_divisor(&f, 2).unwrap().unwrap();
        assert_eq!(d.p, z);
        assert_eq!(d.q, &x + &one);
    }

    #[test]
    fn xz_minus_zy_has_no_z_factor() {
        let (x, y, z) = setup();
        let f = &(&x * &z) - &(&z * &y);
        for dmax in 1..=2 {
            assert_eq!(left_zpoly_divisor(&f, dmax).unwrap(), None);
            assert_eq!(right_zpoly_divisor(&f, dmax).unwrap(), None);
        }
    }

    #[test]
    fn quadratic_left_and_right() {
        let (x, y, z) = setup();
        let one = NcPoly::one(x.alphabet(), x.field());
        let p = &(&z * &z) + &one;
        let d = left_zpoly_divisor(&(&p * &y), 3).unwrap().unwrap();
        assert_eq!((d.p.clone(), d.q), (p.clone(), y));
        let d = right_zpoly_divisor(&(&x * &p), 3).unwrap().unwrap();
        assert_eq!((d.p, d.q), (p, x));
    }

    #[test]
    fn bound_below_gcd_degree_finds_linear_factor() {
        let (_, y, z) = setup();
        let one = NcPoly::one(y.alphabet(), y.field());
        // (z - 1)(z + 2) y: maximal divisor has degree 2, bound 1
        let p = &(&z - &one) * &(&(&z + &one) + &one);
        let f = &p * &y;
        let d = left_zpoly_divisor(&f, 1).unwrap().unwrap();
        assert_eq!(d.p.degree(), crate::freealg::Degree::Finite(1));
        assert_eq!(&d.p * &d.q, f);
    }

    #[test]
    fn bound_must_be_positive() {
        let (x, _, _) = setup();
        assert_eq!(
            left_zpoly_divisor(&x, 0),
            Err(Error::DegreeBoundInvalid { min: 1, got: 0 })
        );
    }

    #[test]
    fn large_prime_root_split() {
        let p = 1_000_003u32;
        let field = Field::prime(p).unwrap();
        // (X - 5)(X - 7)(X^2 + 1) has roots 5 and 7
        let lin = |r: i64| UPoly::from_coeffs(field, vec![Scalar::from_i64(field, -r), Scalar::one(field)]);
        let quad = UPoly::from_coeffs(
            field,
            vec![Scalar::one(field), Scalar::zero(field), Scalar::one(field)],
        );
        let g = lin(5).mul(&lin(7)).mul(&quad);
        let r = root_mod_p(&g, p).unwrap();
        assert!(g.eval(&r).is_zero());
    }
}
