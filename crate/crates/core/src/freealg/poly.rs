use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::{Alphabet, Field, Scalar, Word};
use crate::error::{Error, Result};

/// Degree of a noncommutative polynomial; the zero polynomial has degree
/// `MinusInfinity`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Degree {
    MinusInfinity,
    Finite(usize),
}

impl Degree {
    pub fn finite(self) -> Option<usize> {
        match self {
            Degree::MinusInfinity => None,
            Degree::Finite(d) => Some(d),
        }
    }
}

impl Add for Degree {
    type Output = Degree;

    fn add(self, rhs: Degree) -> Degree {
        match (self, rhs) {
            (Degree::Finite(a), Degree::Finite(b)) => Degree::Finite(a + b),
            _ => Degree::MinusInfinity,
        }
    }
}

impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Degree::MinusInfinity => write!(f, "-inf"),
            Degree::Finite(d) => write!(f, "{d}"),
        }
    }
}

/// An element of the free associative algebra over `field` on `alphabet`.
///
/// Terms are kept in a map ordered by (length, lexicographic) word order
/// and never store a zero coefficient, so structural equality is
/// mathematical equality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct NcPoly {
    alphabet: Alphabet,
    field: Field,
    terms: BTreeMap<Word, Scalar>,
}

fn accumulate(terms: &mut BTreeMap<Word, Scalar>, word: Word, c: Scalar) {
    if c.is_zero() {
        return;
    }
    match terms.entry(word) {
        Entry::Vacant(e) => {
            e.insert(c);
        }
        Entry::Occupied(mut e) => {
            let s = e.get() + &c;
            if s.is_zero() {
                e.remove();
            } else {
                *e.get_mut() = s;
            }
        }
    }
}

impl NcPoly {
    pub fn zero(alphabet: &Alphabet, field: Field) -> NcPoly {
        NcPoly {
            alphabet: alphabet.clone(),
            field,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(alphabet: &Alphabet, field: Field) -> NcPoly {
        NcPoly::constant(alphabet, Scalar::one(field))
    }

    pub fn constant(alphabet: &Alphabet, c: Scalar) -> NcPoly {
        NcPoly::monomial(alphabet, Word::empty(), c)
    }

    pub fn monomial(alphabet: &Alphabet, word: Word, c: Scalar) -> NcPoly {
        let mut p = NcPoly::zero(alphabet, c.field());
        debug_assert!(word.letters().all(|i| i < alphabet.len()));
        accumulate(&mut p.terms, word, c);
        p
    }

    /// The generator with the given index.
    pub fn generator(alphabet: &Alphabet, field: Field, index: usize) -> NcPoly {
        assert!(index < alphabet.len(), "generator index out of range");
        NcPoly::monomial(alphabet, Word::letter(index), Scalar::one(field))
    }

    /// The generator with the given name.
    pub fn var(alphabet: &Alphabet, field: Field, name: &str) -> Result<NcPoly> {
        let i = alphabet
            .index_of(name)
            .ok_or_else(|| Error::UnknownGenerator(name.to_string()))?;
        Ok(NcPoly::generator(alphabet, field, i))
    }

    /// Builds a canonical polynomial from arbitrary (possibly repeated or
    /// zero) terms.
    pub fn from_terms<I>(alphabet: &Alphabet, field: Field, terms: I) -> Result<NcPoly>
    where
        I: IntoIterator<Item = (Word, Scalar)>,
    {
        let mut p = NcPoly::zero(alphabet, field);
        for (w, c) in terms {
            field.check(c.field())?;
            if let Some(bad) = w.letters().find(|&i| i >= alphabet.len()) {
                return Err(Error::InvalidInput(format!(
                    "generator index {bad} out of range for [{alphabet}]"
                )));
            }
            accumulate(&mut p.terms, w, c);
        }
        Ok(p)
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Word, &Scalar)> + ExactSizeIterator {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, word: &Word) -> Scalar {
        self.terms
            .get(word)
            .cloned()
            .unwrap_or_else(|| Scalar::zero(self.field))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Word::is_empty)
    }

    pub fn degree(&self) -> Degree {
        match self.terms.keys().next_back() {
            None => Degree::MinusInfinity,
            Some(w) => Degree::Finite(w.len()),
        }
    }

    /// Smallest word length in the support, `None` for zero.
    pub fn low_degree(&self) -> Option<usize> {
        self.terms.keys().next().map(Word::len)
    }

    /// True when some word of the support contains the generator.
    pub fn uses(&self, index: usize) -> bool {
        self.terms.keys().any(|w| w.uses(index))
    }

    pub fn is_generator(&self, index: usize) -> bool {
        self.terms.len() == 1
            && self
                .terms
                .iter()
                .all(|(w, c)| c.is_one() && w.len() == 1 && w.first() == Some(index))
    }

    fn compatible(&self, other: &NcPoly) -> Result<()> {
        self.field.check(other.field)?;
        self.alphabet.check(&other.alphabet)
    }

    pub fn checked_add(&self, other: &NcPoly) -> Result<NcPoly> {
        self.compatible(other)?;
        let mut out = self.clone();
        for (w, c) in &other.terms {
            accumulate(&mut out.terms, w.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &NcPoly) -> Result<NcPoly> {
        self.compatible(other)?;
        let mut out = self.clone();
        for (w, c) in &other.terms {
            accumulate(&mut out.terms, w.clone(), -c);
        }
        Ok(out)
    }

    pub fn checked_mul(&self, other: &NcPoly) -> Result<NcPoly> {
        self.compatible(other)?;
        let mut out = NcPoly::zero(&self.alphabet, self.field);
        for (u, a) in &self.terms {
            for (v, b) in &other.terms {
                accumulate(&mut out.terms, u.concat(v), a * b);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Scalar) -> NcPoly {
        assert_eq!(c.field(), self.field, "scalar field mismatch");
        if c.is_zero() {
            return NcPoly::zero(&self.alphabet, self.field);
        }
        NcPoly {
            alphabet: self.alphabet.clone(),
            field: self.field,
            terms: self.terms.iter().map(|(w, a)| (w.clone(), a * c)).collect(),
        }
    }

    pub fn pow(&self, n: u32) -> NcPoly {
        let mut acc = NcPoly::one(&self.alphabet, self.field);
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Multiplies by a word on the left and on the right.
    pub fn sandwich(&self, left: &Word, right: &Word) -> NcPoly {
        NcPoly {
            alphabet: self.alphabet.clone(),
            field: self.field,
            terms: self
                .terms
                .iter()
                .map(|(w, c)| (left.concat(w).concat(right), c.clone()))
                .collect(),
        }
    }

    /// The image under the word-reversing anti-automorphism.
    pub fn reversed(&self) -> NcPoly {
        NcPoly {
            alphabet: self.alphabet.clone(),
            field: self.field,
            terms: self
                .terms
                .iter()
                .map(|(w, c)| (w.reversed(), c.clone()))
                .collect(),
        }
    }

    /// Keeps only the terms whose word satisfies `keep`.
    pub fn filter_terms<F: Fn(&Word) -> bool>(&self, keep: F) -> NcPoly {
        NcPoly {
            alphabet: self.alphabet.clone(),
            field: self.field,
            terms: self
                .terms
                .iter()
                .filter(|(w, _)| keep(w))
                .map(|(w, c)| (w.clone(), c.clone()))
                .collect(),
        }
    }

    /// Applies the algebra homomorphism sending generator `i` to
    /// `images[i]`; the empty word goes to 1.
    pub fn substitute(&self, images: &[NcPoly]) -> Result<NcPoly> {
        if images.len() != self.alphabet.len() {
            return Err(Error::ArityMismatch {
                expected: self.alphabet.len(),
                got: images.len(),
            });
        }
        let Some(first) = images.first() else {
            unreachable!("alphabets are nonempty")
        };
        for img in images {
            img.compatible(first)?;
        }
        self.field.check(first.field)?;
        let terms: Vec<(&[u8], &Scalar)> =
            self.terms.iter().map(|(w, c)| (w.raw(), c)).collect();
        Ok(horner(&terms, images, &first.alphabet, self.field))
    }

    /// Re-expresses the polynomial over `target`, matching generators by
    /// name.
    pub fn embed(&self, target: &Alphabet) -> Result<NcPoly> {
        if &self.alphabet == target {
            return Ok(self.clone());
        }
        let map: Vec<usize> = self
            .alphabet
            .names()
            .iter()
            .map(|n| {
                target
                    .index_of(n)
                    .ok_or_else(|| Error::UnknownGenerator(n.clone()))
            })
            .collect::<Result<_>>()?;
        let mut out = NcPoly::zero(target, self.field);
        for (w, c) in &self.terms {
            out.terms
                .insert(Word::from_letters(w.letters().map(|i| map[i])), c.clone());
        }
        Ok(out)
    }

    /// Like [`embed`](Self::embed) but only requires the generators that
    /// actually occur to exist in `target`.
    pub fn restrict_to(&self, target: &Alphabet) -> Result<NcPoly> {
        let mut out = NcPoly::zero(target, self.field);
        for (w, c) in &self.terms {
            let mut letters = Vec::with_capacity(w.len());
            for i in w.letters() {
                let name = self.alphabet.name(i);
                letters.push(
                    target
                        .index_of(name)
                        .ok_or_else(|| Error::UnknownGenerator(name.to_string()))?,
                );
            }
            out.terms.insert(Word::from_letters(letters), c.clone());
        }
        Ok(out)
    }
}

/// Evaluates `sum c_w * images(w)` by factoring on the leading letter, so
/// shared prefixes are substituted once and intermediate sums collapse.
fn horner(
    terms: &[(&[u8], &Scalar)],
    images: &[NcPoly],
    alphabet: &Alphabet,
    field: Field,
) -> NcPoly {
    let mut out = NcPoly::zero(alphabet, field);
    let mut groups: BTreeMap<u8, Vec<(&[u8], &Scalar)>> = BTreeMap::new();
    for &(w, c) in terms {
        match w.split_first() {
            None => accumulate(&mut out.terms, Word::empty(), c.clone()),
            Some((&head, rest)) => groups.entry(head).or_default().push((rest, c)),
        }
    }
    for (head, rest) in groups {
        let tail = horner(&rest, images, alphabet, field);
        let img = &images[head as usize];
        for (u, a) in &img.terms {
            for (v, b) in &tail.terms {
                accumulate(&mut out.terms, u.concat(v), a * b);
            }
        }
    }
    out
}

impl Add for &NcPoly {
    type Output = NcPoly;

    fn add(self, rhs: &NcPoly) -> NcPoly {
        self.checked_add(rhs).expect("incompatible polynomials")
    }
}

impl Sub for &NcPoly {
    type Output = NcPoly;

    fn sub(self, rhs: &NcPoly) -> NcPoly {
        self.checked_sub(rhs).expect("incompatible polynomials")
    }
}

impl Mul for &NcPoly {
    type Output = NcPoly;

    fn mul(self, rhs: &NcPoly) -> NcPoly {
        self.checked_mul(rhs).expect("incompatible polynomials")
    }
}

impl Neg for &NcPoly {
    type Output = NcPoly;

    fn neg(self) -> NcPoly {
        NcPoly {
            alphabet: self.alphabet.clone(),
            field: self.field,
            terms: self.terms.iter().map(|(w, c)| (w.clone(), -c)).collect(),
        }
    }
}

fn write_word(f: &mut fmt::Formatter<'_>, alphabet: &Alphabet, w: &Word) -> fmt::Result {
    let letters: Vec<usize> = w.letters().collect();
    let mut i = 0;
    let mut first = true;
    while i < letters.len() {
        let mut j = i;
        while j < letters.len() && letters[j] == letters[i] {
            j += 1;
        }
        if !first {
            write!(f, "*")?;
        }
        first = false;
        write!(f, "{}", alphabet.name(letters[i]))?;
        if j - i > 1 {
            write!(f, "^{}", j - i)?;
        }
        i = j;
    }
    Ok(())
}

impl fmt::Display for NcPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (w, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            match (k, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let mag = c.abs_string();
            if w.is_empty() {
                write!(f, "{mag}")?;
            } else {
                if mag != "1" {
                    write!(f, "{mag}*")?;
                }
                write_word(f, &self.alphabet, w)?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for NcPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "NcPoly({self} over {} in [{}])", self.field, self.alphabet)
    }
}
