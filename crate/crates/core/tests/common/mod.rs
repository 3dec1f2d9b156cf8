//! Reference implementations used as oracles: naive term-map arithmetic
//! written independently of the library's evaluation paths.

#![allow(dead_code)]

use std::collections::BTreeMap;

use freetame::bimodule::{BiOpPoly, LinMat};
use freetame::endo::{Endomorphism, TameWord};
use freetame::freealg::{Alphabet, Field, NcPoly, Scalar, Word};
use freetame::smith::SmithData;

/// A polynomial as a map from letter sequences to nonzero coefficients.
pub type Terms = BTreeMap<Vec<usize>, Scalar>;

pub fn terms(p: &NcPoly) -> Terms {
    p.terms()
        .map(|(w, c)| (w.letters().collect(), c.clone()))
        .collect()
}

pub fn poly(alphabet: &Alphabet, field: Field, t: &Terms) -> NcPoly {
    NcPoly::from_terms(
        alphabet,
        field,
        t.iter().map(|(w, c)| (Word::from_letters(w.iter().copied()), c.clone())),
    )
    .unwrap()
}

fn add_term(out: &mut Terms, w: Vec<usize>, c: Scalar) {
    if c.is_zero() {
        return;
    }
    match out.get_mut(&w) {
        Some(old) => {
            let s = &*old + &c;
            if s.is_zero() {
                out.remove(&w);
            } else {
                *old = s;
            }
        }
        None => {
            out.insert(w, c);
        }
    }
}

pub fn add(a: &Terms, b: &Terms) -> Terms {
    let mut out = a.clone();
    for (w, c) in b {
        add_term(&mut out, w.clone(), c.clone());
    }
    out
}

pub fn scale(a: &Terms, c: &Scalar) -> Terms {
    let mut out = Terms::new();
    for (w, d) in a {
        add_term(&mut out, w.clone(), d * c);
    }
    out
}

pub fn mul(a: &Terms, b: &Terms) -> Terms {
    let mut out = Terms::new();
    for (u, c) in a {
        for (v, d) in b {
            let mut w = u.clone();
            w.extend_from_slice(v);
            add_term(&mut out, w, c * d);
        }
    }
    out
}

pub fn one(field: Field) -> Terms {
    Terms::from([(Vec::new(), Scalar::one(field))])
}

pub fn letter(i: usize, field: Field) -> Terms {
    Terms::from([(vec![i], Scalar::one(field))])
}

/// Letter-by-letter expansion of the substitution `i -> images[i]`.
pub fn substitute(p: &Terms, images: &[Terms]) -> Terms {
    let mut out = Terms::new();
    for (w, c) in p {
        let mut acc = Terms::from([(Vec::new(), c.clone())]);
        for &l in w {
            acc = mul(&acc, &images[l]);
        }
        out = add(&out, &acc);
    }
    out
}

/// Replaces only generator `var` by `image`.
pub fn substitute_one(p: &Terms, var: usize, image: &Terms, letters: usize, field: Field) -> Terms {
    let images: Vec<Terms> = (0..letters)
        .map(|i| if i == var { image.clone() } else { letter(i, field) })
        .collect();
    substitute(p, &images)
}

/// `E(v)` for the product of the word's steps, first step outermost:
/// start from `v` and substitute the steps from the last one back.
pub fn word_image(w: &TameWord, v: usize) -> Terms {
    let field = w.field();
    let n = w.alphabet().len();
    let mut q = letter(v, field);
    for s in w.steps().iter().rev() {
        let image = add(&scale(&letter(s.var(), field), s.unit()), &terms(s.addend()));
        q = substitute_one(&q, s.var(), &image, n, field);
    }
    q
}

pub fn word_endo(w: &TameWord) -> Endomorphism {
    let a = w.alphabet();
    let images = (0..a.len()).map(|v| poly(a, w.field(), &word_image(w, v))).collect();
    Endomorphism::new(a, w.field(), images).unwrap()
}

/// `(A B)(v) = A(B(v))` by naive substitution.
pub fn compose(a: &Endomorphism, b: &Endomorphism) -> Endomorphism {
    let field = a.field();
    let ai: Vec<Terms> = a.images().iter().map(terms).collect();
    let images = b
        .images()
        .iter()
        .map(|p| poly(a.alphabet(), field, &substitute(&terms(p), &ai)))
        .collect();
    Endomorphism::new(a.alphabet(), field, images).unwrap()
}

/// `sum c z^i p z^j` over the terms `c zl^i zr^j` of `op`.
pub fn act(op: &BiOpPoly, p: &Terms, iz: usize) -> Terms {
    let mut out = Terms::new();
    for (m, c) in op.terms() {
        for (w, d) in p {
            let mut v = vec![iz; m.left as usize];
            v.extend_from_slice(w);
            v.extend(std::iter::repeat_n(iz, m.right as usize));
            add_term(&mut out, v, c * d);
        }
    }
    out
}

/// The Smith map on `x, y, z, t` with `t` fixed, from its defining
/// formula: `x + b h(u)`, `y - a h(u)`, `u = a x + b y`.
pub fn smith_target(d: &SmithData) -> Endomorphism {
    let a = Alphabet::xyzt();
    let f = d.field();
    let (x, y, z, t) = (letter(0, f), letter(1, f), letter(2, f), letter(3, f));
    let u = add(&act(&d.a, &x, 2), &act(&d.b, &y, 2));
    let hu = substitute(&terms(&d.h), &[z.clone(), u]);
    let minus = Scalar::from_i64(f, -1);
    let images = [
        add(&x, &act(&d.b, &hu, 2)),
        add(&y, &scale(&act(&d.a, &hu, 2), &minus)),
        z,
        t,
    ];
    Endomorphism::new(&a, f, images.iter().map(|p| poly(&a, f, p)).collect()).unwrap()
}

/// `x -> m00 x + m01 y`, `y -> m10 x + m11 y`, other generators fixed.
pub fn linear_target(m: &LinMat, alphabet: &Alphabet) -> Endomorphism {
    let f = m.field();
    let ix = alphabet.index_of("x").unwrap();
    let iy = alphabet.index_of("y").unwrap();
    let iz = alphabet.index_of("z").unwrap();
    let (x, y) = (letter(ix, f), letter(iy, f));
    let mut images: Vec<Terms> = (0..alphabet.len()).map(|i| letter(i, f)).collect();
    for (row, var) in [(0, ix), (1, iy)] {
        images[var] = add(&act(m.entry(row, 0), &x, iz), &act(m.entry(row, 1), &y, iz));
    }
    Endomorphism::new(alphabet, f, images.iter().map(|p| poly(alphabet, f, p)).collect()).unwrap()
}

/// Largest word length, `None` for zero.
pub fn degree(t: &Terms) -> Option<usize> {
    t.keys().map(Vec::len).max()
}

/// `xz - zy` as terms over an alphabet with `x, y, z` at `0, 1, 2`.
pub fn anick_w(field: Field) -> Terms {
    let mut w = Terms::new();
    add_term(&mut w, vec![0, 2], Scalar::one(field));
    add_term(&mut w, vec![2, 1], Scalar::from_i64(field, -1));
    w
}
