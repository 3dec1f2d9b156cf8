//! Seeded generators for property suites.

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub use rand::SeedableRng;

use crate::bimodule::{biop_gcd, BiMono, BiOpPoly, InvertibleLinMat, LinMat};
use crate::endo::{ElementaryStep, Endomorphism, TameWord};
use crate::freealg::{Alphabet, Field, NcPoly, Scalar, Word};
use crate::smith::{g_alphabet, h_alphabet, AnickData, SmithData};

pub type Rng64 = ChaCha8Rng;

pub fn rng(seed: u64) -> Rng64 {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Rationals `p/q` with `|p| <= 9`, `1 <= q <= 4`; uniform residues.
pub fn scalar(rng: &mut Rng64, field: Field) -> Scalar {
    match field {
        Field::Rationals => {
            let p: i64 = rng.gen_range(-9..=9);
            let q: i64 = rng.gen_range(1..=4);
            Scalar::from_i64(field, p)
                .checked_div(&Scalar::from_i64(field, q))
                .expect("q is nonzero")
        }
        Field::Prime(p) => Scalar::from_i64(field, rng.gen_range(0..p as i64)),
    }
}

pub fn nonzero_scalar(rng: &mut Rng64, field: Field) -> Scalar {
    loop {
        let c = scalar(rng, field);
        if !c.is_zero() {
            return c;
        }
    }
}

pub fn word(rng: &mut Rng64, letters: usize, len: usize) -> Word {
    Word::from_letters((0..len).map(|_| rng.gen_range(0..letters)))
}

/// Up to `terms` random terms with words of length at most `max_deg`.
pub fn poly(rng: &mut Rng64, alphabet: &Alphabet, field: Field, max_deg: usize, terms: usize) -> NcPoly {
    let mut p = NcPoly::zero(alphabet, field);
    for _ in 0..terms {
        let len = rng.gen_range(0..=max_deg);
        let w = word(rng, alphabet.len(), len);
        p = &p + &NcPoly::monomial(alphabet, w, nonzero_scalar(rng, field));
    }
    p
}

pub fn nonzero_poly(rng: &mut Rng64, alphabet: &Alphabet, field: Field, max_deg: usize, terms: usize) -> NcPoly {
    loop {
        let p = poly(rng, alphabet, field, max_deg, terms.max(1));
        if !p.is_zero() {
            return p;
        }
    }
}

/// Each monomial of total degree at most `max_deg` is present with
/// probability one half.
pub fn biop(rng: &mut Rng64, field: Field, max_deg: u32) -> BiOpPoly {
    let mut terms = Vec::new();
    for d in 0..=max_deg {
        for l in 0..=d {
            if rng.gen_bool(0.5) {
                terms.push((BiMono::new(l, d - l), nonzero_scalar(rng, field)));
            }
        }
    }
    BiOpPoly::from_terms(field, terms).expect("one field")
}

pub fn nonzero_biop(rng: &mut Rng64, field: Field, max_deg: u32) -> BiOpPoly {
    loop {
        let b = biop(rng, field, max_deg);
        if !b.is_zero() {
            return b;
        }
    }
}

/// Every word of length at most `max_deg` over `letters` letters,
/// present with probability `density`.
fn dense_poly(rng: &mut Rng64, alphabet: &Alphabet, field: Field, max_deg: usize, density: f64) -> NcPoly {
    let mut terms = Vec::new();
    let mut layer = vec![Word::empty()];
    for len in 0..=max_deg {
        for w in &layer {
            if rng.gen_bool(density) {
                terms.push((w.clone(), nonzero_scalar(rng, field)));
            }
        }
        if len < max_deg {
            layer = layer
                .iter()
                .flat_map(|w| (0..alphabet.len()).map(move |l| w.concat(&Word::letter(l))))
                .collect();
        }
    }
    NcPoly::from_terms(alphabet, field, terms).expect("one field")
}

/// `deg a, deg b <= 2`, `deg h <= 3`.
pub fn smith_data(rng: &mut Rng64, field: Field) -> SmithData {
    let (a, b) = (biop(rng, field, 2), biop(rng, field, 2));
    let h = dense_poly(rng, &h_alphabet(), field, 3, 0.3);
    SmithData { a, b, h }
}

/// A coprime pair with both entries nonzero.
pub fn coprime_pair(rng: &mut Rng64, field: Field, max_deg: u32) -> (BiOpPoly, BiOpPoly) {
    loop {
        let a = nonzero_biop(rng, field, max_deg);
        let b = nonzero_biop(rng, field, max_deg);
        if biop_gcd(&a, &b).map(|g| g.is_one()).unwrap_or(false) {
            return (a, b);
        }
    }
}

pub fn coprime_smith_data(rng: &mut Rng64, field: Field) -> SmithData {
    let (a, b) = coprime_pair(rng, field, 2);
    let h = dense_poly(rng, &h_alphabet(), field, 3, 0.3);
    SmithData { a, b, h }
}

/// `g` of degree at most `max_deg`.
pub fn anick_data(rng: &mut Rng64, field: Field, max_deg: usize) -> AnickData {
    AnickData {
        g: dense_poly(rng, &g_alphabet(), field, max_deg, 0.3),
    }
}

/// Random images for every generator.
pub fn endomorphism(rng: &mut Rng64, alphabet: &Alphabet, field: Field, max_deg: usize, terms: usize) -> Endomorphism {
    let images = (0..alphabet.len())
        .map(|_| poly(rng, alphabet, field, max_deg, terms))
        .collect();
    Endomorphism::new(alphabet, field, images).expect("one alphabet")
}

/// A random step on a random generator.
pub fn elementary_step(rng: &mut Rng64, alphabet: &Alphabet, field: Field, max_deg: usize, terms: usize) -> ElementaryStep {
    let var = rng.gen_range(0..alphabet.len());
    let others: Vec<usize> = (0..alphabet.len()).filter(|&i| i != var).collect();
    let mut addend = NcPoly::zero(alphabet, field);
    for _ in 0..terms {
        let len = rng.gen_range(0..=max_deg);
        let w = Word::from_letters((0..len).map(|_| *others.choose(rng).expect("two generators")));
        addend = &addend + &NcPoly::monomial(alphabet, w, nonzero_scalar(rng, field));
    }
    let unit = if rng.gen_bool(0.2) { nonzero_scalar(rng, field) } else { Scalar::one(field) };
    ElementaryStep::new(var, unit, addend).expect("legal step")
}

/// A random automorphism presented as a tame word, so its inverse is
/// known.
pub fn tame_word(rng: &mut Rng64, alphabet: &Alphabet, field: Field, steps: usize) -> TameWord {
    let s = (0..steps).map(|_| elementary_step(rng, alphabet, field, 2, 2)).collect();
    TameWord::new(alphabet, field, s).expect("one alphabet")
}

/// A product of `factors` elementary matrices `E(i, j, c)` with its
/// inverse.
pub fn elementary_product(rng: &mut Rng64, field: Field, factors: usize, max_deg: u32) -> InvertibleLinMat {
    let mut m = LinMat::identity(field);
    let mut inv = LinMat::identity(field);
    for k in 0..factors {
        let (row, col) = if k % 2 == 0 { (0, 1) } else { (1, 0) };
        let c = nonzero_biop(rng, field, max_deg);
        m = m.mul(&LinMat::elementary(row, col, c.clone()));
        inv = LinMat::elementary(row, col, c.neg()).mul(&inv);
    }
    InvertibleLinMat::new(m, inv).expect("inverse by construction")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reproducible() {
        let a = Alphabet::xyz();
        let p1 = poly(&mut rng(7), &a, Field::Rationals, 3, 5);
        let p2 = poly(&mut rng(7), &a, Field::Rationals, 3, 5);
        assert_eq!(p1, p2);
        let d = smith_data(&mut rng(3), Field::Prime(5));
        assert!(d.a.degree().unwrap_or(0) <= 2 && d.h.degree().finite().unwrap_or(0) <= 3);
    }

    #[test]
    fn products_are_invertible() {
        let mut r = rng(1);
        for _ in 0..5 {
            let m = elementary_product(&mut r, Field::Rationals, 3, 2);
            assert!(m.matrix().mul(m.inverse()).is_identity());
        }
    }
}
