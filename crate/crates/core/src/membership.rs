//! Bounded-degree membership in the subalgebra generated by `z` and `f`.
//!
//! The subalgebra is spanned by the alternating products
//! `z^k0 f z^k1 f ... f z^km`. Every product of degree at most a bound is
//! enumerated and the query becomes an exact linear system, so a negative
//! answer is definitive for that bound.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::freealg::{left_zpoly_divisor, right_zpoly_divisor, Alphabet, NcPoly, Scalar, Word, ZDivisor};
use crate::linsolve::{poly_vector, SpanSolver};

/// Default cap on the number of enumerated products.
pub const DEFAULT_CAP: usize = 20_000;

#[derive(Debug, Clone, PartialEq)]
pub struct MembershipQuery {
    pub f: NcPoly,
    pub r: NcPoly,
    pub degree_bound: usize,
}

impl MembershipQuery {
    pub fn new(f: NcPoly, r: NcPoly, degree_bound: usize) -> Result<MembershipQuery> {
        f.field().check(r.field())?;
        f.alphabet().check(r.alphabet())?;
        if f.alphabet().index_of("z").is_none() {
            return Err(Error::AlphabetMissingZ);
        }
        if f.is_zero() {
            return Err(Error::InvalidInput("f must be nonzero".into()));
        }
        if let Some(d) = r.degree().finite() {
            if degree_bound < d {
                return Err(Error::BoundTooSmall {
                    bound: degree_bound,
                    degree: d,
                });
            }
        }
        Ok(MembershipQuery { f, r, degree_bound })
    }
}

/// `z^k0 f z^k1 ... f z^km`, stored as `[k0, ..., km]`.
pub type Product = Vec<usize>;

/// A linear combination of alternating products.
#[derive(Debug, Clone, PartialEq)]
pub struct MembershipWitness {
    pub terms: Vec<(Scalar, Product)>,
}

impl MembershipWitness {
    pub fn eval(&self, f: &NcPoly) -> Result<NcPoly> {
        let mut acc = NcPoly::zero(f.alphabet(), f.field());
        for (c, p) in &self.terms {
            acc = acc.checked_add(&eval_product(f, p)?.scale(c))?;
        }
        Ok(acc)
    }
}

/// Evaluates one alternating product.
pub fn eval_product(f: &NcPoly, p: &[usize]) -> Result<NcPoly> {
    let iz = f.alphabet().index_of("z").ok_or(Error::AlphabetMissingZ)?;
    let one = Scalar::one(f.field());
    let zpow = |k: usize| NcPoly::monomial(f.alphabet(), Word::from_letters(std::iter::repeat_n(iz, k)), one.clone());
    let mut acc = zpow(p.first().copied().unwrap_or(0));
    for &k in p.iter().skip(1) {
        acc = &(&acc * f) * &zpow(k);
    }
    Ok(acc)
}

/// Formats a product as text, e.g. `z^2*f*z`.
pub fn product_text(p: &[usize]) -> String {
    let zpow = |k: usize| match k {
        0 => None,
        1 => Some("z".to_string()),
        k => Some(format!("z^{k}")),
    };
    let mut parts = Vec::new();
    for (i, &k) in p.iter().enumerate() {
        if i > 0 {
            parts.push("f".to_string());
        }
        parts.extend(zpow(k));
    }
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join("*")
    }
}

/// All alternating products of degree at most `bound`, ordered by number
/// of `f` factors and then by exponent vector.
pub fn enumerate_products(f_degree: usize, bound: usize, cap: usize) -> Result<Vec<Product>> {
    let mut out = Vec::new();
    let max_m = bound.checked_div(f_degree).unwrap_or(0);
    for m in 0..=max_m {
        let budget = bound - m * f_degree;
        let mut current = vec![0usize; m + 1];
        compositions(&mut current, 0, budget, &mut out, cap)?;
    }
    Ok(out)
}

fn compositions(cur: &mut Vec<usize>, pos: usize, budget: usize, out: &mut Vec<Product>, cap: usize) -> Result<()> {
    if pos == cur.len() {
        if out.len() == cap {
            return Err(Error::CapExceeded { cap });
        }
        out.push(cur.clone());
        return Ok(());
    }
    for k in 0..=budget {
        cur[pos] = k;
        compositions(cur, pos + 1, budget - k, out, cap)?;
    }
    cur[pos] = 0;
    Ok(())
}

/// Outcome of [`subalgebra_membership`].
#[derive(Debug, Clone, PartialEq)]
pub enum Membership {
    Member(MembershipWitness),
    /// Not in the span of the products of degree at most the bound.
    NotMember,
}

pub fn subalgebra_membership(q: &MembershipQuery) -> Result<Membership> {
    subalgebra_membership_with_cap(q, DEFAULT_CAP)
}

pub fn subalgebra_membership_with_cap(q: &MembershipQuery, cap: usize) -> Result<Membership> {
    let fdeg = q.f.degree().finite().unwrap_or(0);
    let products = enumerate_products(fdeg, q.degree_bound, cap)?;
    let mut solver = SpanSolver::new(q.f.field());
    for p in &products {
        solver.push(poly_vector(&eval_product(&q.f, p)?));
    }
    let Some(sol) = solver.solve(poly_vector(&q.r)) else {
        return Ok(Membership::NotMember);
    };
    let witness = MembershipWitness {
        terms: sol.into_iter().map(|(i, c)| (c, products[i].clone())).collect(),
    };
    if witness.eval(&q.f)? != q.r {
        return Err(Error::VerificationFailed("membership witness does not re-evaluate".into()));
    }
    Ok(Membership::Member(witness))
}

/// Left and right z-divisor search results for `f`.
#[derive(Debug, Clone, PartialEq)]
pub struct PreconditionReport {
    pub left: Option<ZDivisor>,
    pub right: Option<ZDivisor>,
}

impl PreconditionReport {
    /// True when `f` is neither a left nor a right multiple of a
    /// nonconstant polynomial in `z`.
    pub fn passes(&self) -> bool {
        self.left.is_none() && self.right.is_none()
    }
}

pub fn check_preconditions(f: &NcPoly) -> Result<PreconditionReport> {
    let dmax = f.degree().finite().unwrap_or(0);
    Ok(PreconditionReport {
        left: left_zpoly_divisor(f, dmax)?,
        right: right_zpoly_divisor(f, dmax)?,
    })
}

/// A random member together with the combination that built it.
#[derive(Debug, Clone, PartialEq)]
pub struct RandomMember {
    pub value: NcPoly,
    pub recipe: MembershipWitness,
}

/// A combination of `term_count` random products of degree at most
/// `deg_bound` with nonzero coefficients in `-4..=4`.
pub fn random_member(f: &NcPoly, deg_bound: usize, term_count: usize, seed: u64) -> Result<RandomMember> {
    if f.alphabet().index_of("z").is_none() {
        return Err(Error::AlphabetMissingZ);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let fdeg = f.degree().finite().unwrap_or(0);
    let products = enumerate_products(fdeg, deg_bound, DEFAULT_CAP)?;
    let mut terms = Vec::with_capacity(term_count);
    for _ in 0..term_count {
        let p = products[rng.gen_range(0..products.len())].clone();
        let mut c = 0;
        while c == 0 {
            c = rng.gen_range(-4i64..=4);
        }
        terms.push((Scalar::from_i64(f.field(), c), p));
    }
    let recipe = MembershipWitness { terms };
    Ok(RandomMember {
        value: recipe.eval(f)?,
        recipe,
    })
}

/// `xz - zy` over `x, y, z`.
pub fn anick_generator(field: crate::freealg::Field) -> NcPoly {
    let a = Alphabet::xyz();
    let [x, y, z] = [0, 1, 2].map(|i| NcPoly::generator(&a, field, i));
    &(&x * &z) - &(&z * &y)
}
