//! Endomorphisms of the free algebra, inverse certificates, elementary
//! steps and tame words.
//!
//! Composition convention: in a written product `A * B`, `A` is applied
//! outermost, i.e. `(A * B)(v) = A(B(v))` where `A` acts on the
//! polynomial `B(v)` as an algebra homomorphism. A tame word
//! `[s1, s2, ..., sk]` evaluates to `s1 * s2 * ... * sk`.

use std::fmt;

use crate::error::{Error, Result};
use crate::freealg::{Alphabet, Field, NcPoly, Scalar};

/// An algebra endomorphism given by the image of every generator.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Endomorphism {
    alphabet: Alphabet,
    field: Field,
    images: Vec<NcPoly>,
}

impl Endomorphism {
    pub fn new(alphabet: &Alphabet, field: Field, images: Vec<NcPoly>) -> Result<Endomorphism> {
        if images.len() != alphabet.len() {
            return Err(Error::ArityMismatch {
                expected: alphabet.len(),
                got: images.len(),
            });
        }
        for img in &images {
            field.check(img.field())?;
            alphabet.check(img.alphabet())?;
        }
        Ok(Endomorphism {
            alphabet: alphabet.clone(),
            field,
            images,
        })
    }

    pub fn identity(alphabet: &Alphabet, field: Field) -> Endomorphism {
        let images = (0..alphabet.len())
            .map(|i| NcPoly::generator(alphabet, field, i))
            .collect();
        Endomorphism {
            alphabet: alphabet.clone(),
            field,
            images,
        }
    }

    /// The identity except for generator `var`, which goes to `image`.
    pub fn single(var: usize, image: NcPoly) -> Result<Endomorphism> {
        let mut e = Endomorphism::identity(image.alphabet(), image.field());
        if var >= e.images.len() {
            return Err(Error::MalformedStep(format!("generator index {var} out of range")));
        }
        e.images[var] = image;
        Ok(e)
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn images(&self) -> &[NcPoly] {
        &self.images
    }

    pub fn image(&self, var: usize) -> &NcPoly {
        &self.images[var]
    }

    pub fn image_of(&self, name: &str) -> Result<&NcPoly> {
        let i = self
            .alphabet
            .index_of(name)
            .ok_or_else(|| Error::UnknownGenerator(name.to_string()))?;
        Ok(&self.images[i])
    }

    pub fn into_images(self) -> Vec<NcPoly> {
        self.images
    }

    /// Applies the endomorphism to a polynomial over the same alphabet.
    pub fn apply(&self, p: &NcPoly) -> Result<NcPoly> {
        self.alphabet.check(p.alphabet())?;
        p.substitute(&self.images)
    }

    /// `self * other`: `other` first, then `self`.
    pub fn compose(&self, other: &Endomorphism) -> Result<Endomorphism> {
        self.field.check(other.field)?;
        self.alphabet.check(&other.alphabet)?;
        let images = other
            .images
            .iter()
            .map(|p| p.substitute(&self.images))
            .collect::<Result<Vec<_>>>()?;
        Ok(Endomorphism {
            alphabet: self.alphabet.clone(),
            field: self.field,
            images,
        })
    }

    pub fn is_identity(&self) -> bool {
        self.images
            .iter()
            .enumerate()
            .all(|(i, p)| p.is_generator(i))
    }

    pub fn fixes_generator(&self, var: usize) -> bool {
        self.images[var].is_generator(var)
    }

    pub fn fixes(&self, name: &str) -> Result<bool> {
        let i = self
            .alphabet
            .index_of(name)
            .ok_or_else(|| Error::UnknownGenerator(name.to_string()))?;
        Ok(self.fixes_generator(i))
    }

    /// First generator where the two maps differ, with `self(v) - other(v)`.
    pub fn first_difference(&self, other: &Endomorphism) -> Option<(usize, NcPoly)> {
        self.images
            .iter()
            .zip(&other.images)
            .enumerate()
            .find(|(_, (a, b))| a != b)
            .map(|(i, (a, b))| (i, a - b))
    }

    /// Extends the map by a fresh generator `name` sent to itself.
    pub fn stabilize(&self, name: &str) -> Result<Endomorphism> {
        let bigger = self.alphabet.extended(name)?;
        let mut images = self
            .images
            .iter()
            .map(|p| p.embed(&bigger))
            .collect::<Result<Vec<_>>>()?;
        images.push(NcPoly::generator(&bigger, self.field, bigger.len() - 1));
        Ok(Endomorphism {
            alphabet: bigger,
            field: self.field,
            images,
        })
    }

    /// Re-expresses the map over a larger alphabet, fixing every generator
    /// not present in the current one.
    pub fn extend_to(&self, target: &Alphabet) -> Result<Endomorphism> {
        let mut e = Endomorphism::identity(target, self.field);
        for (i, img) in self.images.iter().enumerate() {
            let j = target
                .index_of(self.alphabet.name(i))
                .ok_or_else(|| Error::UnknownGenerator(self.alphabet.name(i).to_string()))?;
            e.images[j] = img.embed(target)?;
        }
        Ok(e)
    }
}

impl fmt::Display for Endomorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, img) in self.images.iter().enumerate() {
            if i > 0 {
                write!(f, "; ")?;
            }
            write!(f, "{} -> {}", self.alphabet.name(i), img)?;
        }
        Ok(())
    }
}

impl fmt::Debug for Endomorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Endomorphism({self} over {})", self.field)
    }
}

/// A pair of mutually inverse endomorphisms, checked exactly on creation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AutomorphismCertificate {
    forward: Endomorphism,
    inverse: Endomorphism,
}

fn check_round_trip(outer: &Endomorphism, inner: &Endomorphism) -> Result<()> {
    let round = outer.compose(inner)?;
    if let Some((i, _)) = round
        .images
        .iter()
        .enumerate()
        .find(|(i, p)| !p.is_generator(*i))
    {
        let generator = NcPoly::generator(&round.alphabet, round.field, i);
        return Err(Error::NotInverse {
            generator: round.alphabet.name(i).to_string(),
            residual: &round.images[i] - &generator,
        });
    }
    Ok(())
}

/// Verifies `forward * inverse = id` and `inverse * forward = id`.
pub fn certify(forward: Endomorphism, inverse: Endomorphism) -> Result<AutomorphismCertificate> {
    forward.field.check(inverse.field)?;
    forward.alphabet.check(&inverse.alphabet)?;
    check_round_trip(&forward, &inverse)?;
    check_round_trip(&inverse, &forward)?;
    Ok(AutomorphismCertificate { forward, inverse })
}

/// Certifies `v -> v + D_v` against `v -> v - D_v` when every `D_v` is a
/// polynomial `P_v` in an element `w` and in generators both maps fix.
///
/// `p[v]` is `P_v` over `alphabet` extended by one trailing symbol that
/// stands for `w`. If both maps fix `w`, then
/// `forward(inverse(v)) = v + P_v(w) - P_v(forward(w)) = v` and likewise
/// the other way round, so checking that `w` is invariant proves the pair
/// inverse without expanding the compositions.
pub fn certify_invariant_pair(
    alphabet: &Alphabet,
    field: Field,
    w: &NcPoly,
    p: &[NcPoly],
) -> Result<AutomorphismCertificate> {
    let n = alphabet.len();
    if p.len() != n {
        return Err(Error::ArityMismatch {
            expected: n,
            got: p.len(),
        });
    }
    field.check(w.field())?;
    alphabet.check(w.alphabet())?;
    let mut images: Vec<NcPoly> = (0..n).map(|i| NcPoly::generator(alphabet, field, i)).collect();
    images.push(w.clone());
    let fixed: Vec<bool> = p.iter().map(NcPoly::is_zero).collect();
    let mut fwd = Vec::with_capacity(n);
    let mut inv = Vec::with_capacity(n);
    for (v, pv) in p.iter().enumerate() {
        field.check(pv.field())?;
        if pv.alphabet().len() != n + 1 || pv.alphabet().names()[..n] != alphabet.names()[..] {
            return Err(Error::AlphabetMismatch(
                pv.alphabet().to_string(),
                format!("{alphabet},<w>"),
            ));
        }
        if (0..n).any(|i| !fixed[i] && pv.uses(i)) {
            return Err(Error::InvalidInput(format!(
                "addend of {} involves a moved generator",
                alphabet.name(v)
            )));
        }
        let d = pv.substitute(&images)?;
        fwd.push(&images[v] + &d);
        inv.push(&images[v] - &d);
    }
    let forward = Endomorphism::new(alphabet, field, fwd)?;
    let inverse = Endomorphism::new(alphabet, field, inv)?;
    for (name, e) in [("forward", &forward), ("inverse", &inverse)] {
        let image = e.apply(w)?;
        if &image != w {
            return Err(Error::CertificateFailure(format!(
                "{name} map moves the invariant by {}",
                &image - w
            )));
        }
    }
    Ok(AutomorphismCertificate { forward, inverse })
}

impl AutomorphismCertificate {
    pub fn forward(&self) -> &Endomorphism {
        &self.forward
    }

    pub fn inverse(&self) -> &Endomorphism {
        &self.inverse
    }

    /// The certificate of the inverse automorphism.
    pub fn inverted(&self) -> AutomorphismCertificate {
        AutomorphismCertificate {
            forward: self.inverse.clone(),
            inverse: self.forward.clone(),
        }
    }

    /// `self * other` with inverse `other^-1 * self^-1`; no new check is
    /// needed since both factors are certified.
    pub fn compose(&self, other: &AutomorphismCertificate) -> Result<AutomorphismCertificate> {
        Ok(AutomorphismCertificate {
            forward: self.forward.compose(&other.forward)?,
            inverse: other.inverse.compose(&self.inverse)?,
        })
    }

    pub fn stabilize(&self, name: &str) -> Result<AutomorphismCertificate> {
        Ok(AutomorphismCertificate {
            forward: self.forward.stabilize(name)?,
            inverse: self.inverse.stabilize(name)?,
        })
    }
}

/// `v -> unit * v + addend`, every other generator fixed; `addend` does
/// not involve `v`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ElementaryStep {
    var: usize,
    unit: Scalar,
    addend: NcPoly,
}

impl ElementaryStep {
    pub fn new(var: usize, unit: Scalar, addend: NcPoly) -> Result<ElementaryStep> {
        if var >= addend.alphabet().len() {
            return Err(Error::MalformedStep(format!(
                "generator index {var} out of range for [{}]",
                addend.alphabet()
            )));
        }
        if unit.is_zero() {
            return Err(Error::MalformedStep("unit is zero".into()));
        }
        if unit.field() != addend.field() {
            return Err(Error::FieldMismatch(unit.field(), addend.field()));
        }
        if addend.uses(var) {
            return Err(Error::MalformedStep(format!(
                "addend {addend} involves `{}`",
                addend.alphabet().name(var)
            )));
        }
        Ok(ElementaryStep { var, unit, addend })
    }

    /// `v -> v + addend`
    pub fn translation(var: usize, addend: NcPoly) -> Result<ElementaryStep> {
        let one = Scalar::one(addend.field());
        ElementaryStep::new(var, one, addend)
    }

    pub fn var(&self) -> usize {
        self.var
    }

    pub fn unit(&self) -> &Scalar {
        &self.unit
    }

    pub fn addend(&self) -> &NcPoly {
        &self.addend
    }

    pub fn alphabet(&self) -> &Alphabet {
        self.addend.alphabet()
    }

    pub fn field(&self) -> Field {
        self.addend.field()
    }

    pub fn is_identity(&self) -> bool {
        self.unit.is_one() && self.addend.is_zero()
    }

    /// `v -> unit^-1 * v - unit^-1 * addend`.
    pub fn inverse(&self) -> ElementaryStep {
        let inv = self.unit.inv().expect("unit is nonzero");
        ElementaryStep {
            var: self.var,
            addend: -&self.addend.scale(&inv),
            unit: inv,
        }
    }

    pub fn image(&self) -> NcPoly {
        let v = NcPoly::generator(self.alphabet(), self.field(), self.var);
        &v.scale(&self.unit) + &self.addend
    }

    pub fn to_endo(&self) -> Endomorphism {
        Endomorphism::single(self.var, self.image()).expect("well-formed step")
    }

    /// The same step over a larger alphabet (matched by name).
    pub fn extend_to(&self, target: &Alphabet) -> Result<ElementaryStep> {
        let name = self.alphabet().name(self.var);
        let var = target
            .index_of(name)
            .ok_or_else(|| Error::UnknownGenerator(name.to_string()))?;
        ElementaryStep::new(var, self.unit.clone(), self.addend.embed(target)?)
    }
}

/// [`step_to_endo`] with an explicit alphabet check.
pub fn step_to_endo(step: &ElementaryStep, alphabet: &Alphabet) -> Result<Endomorphism> {
    alphabet.check(step.alphabet())?;
    Ok(step.to_endo())
}

impl fmt::Display for ElementaryStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} -> {}", self.alphabet().name(self.var), self.image())
    }
}

/// An ordered product of elementary steps, first step outermost.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TameWord {
    alphabet: Alphabet,
    field: Field,
    steps: Vec<ElementaryStep>,
}

impl TameWord {
    pub fn empty(alphabet: &Alphabet, field: Field) -> TameWord {
        TameWord {
            alphabet: alphabet.clone(),
            field,
            steps: Vec::new(),
        }
    }

    pub fn new(alphabet: &Alphabet, field: Field, steps: Vec<ElementaryStep>) -> Result<TameWord> {
        for s in &steps {
            alphabet.check(s.alphabet())?;
            field.check(s.field())?;
        }
        Ok(TameWord {
            alphabet: alphabet.clone(),
            field,
            steps,
        })
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn steps(&self) -> &[ElementaryStep] {
        &self.steps
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn push(&mut self, step: ElementaryStep) -> Result<()> {
        self.alphabet.check(step.alphabet())?;
        self.field.check(step.field())?;
        self.steps.push(step);
        Ok(())
    }

    /// `self ++ other`, which evaluates to `eval(self) * eval(other)`.
    pub fn concat(&self, other: &TameWord) -> Result<TameWord> {
        self.alphabet.check(&other.alphabet)?;
        self.field.check(other.field)?;
        let mut steps = self.steps.clone();
        steps.extend(other.steps.iter().cloned());
        Ok(TameWord {
            alphabet: self.alphabet.clone(),
            field: self.field,
            steps,
        })
    }

    /// The word of inverse steps in reverse order.
    pub fn inverse(&self) -> TameWord {
        TameWord {
            alphabet: self.alphabet.clone(),
            field: self.field,
            steps: self.steps.iter().rev().map(ElementaryStep::inverse).collect(),
        }
    }

    pub fn extend_to(&self, target: &Alphabet) -> Result<TameWord> {
        let steps = self
            .steps
            .iter()
            .map(|s| s.extend_to(target))
            .collect::<Result<Vec<_>>>()?;
        Ok(TameWord {
            alphabet: target.clone(),
            field: self.field,
            steps,
        })
    }

    /// The product of the steps, first step outermost.
    pub fn eval(&self) -> Endomorphism {
        let mut acc = Endomorphism::identity(&self.alphabet, self.field);
        for step in self.steps.iter().rev() {
            if step.is_identity() {
                continue;
            }
            acc = step.to_endo().compose(&acc).expect("same alphabet");
        }
        acc
    }

    /// Exact check against `target`; on mismatch reports the first
    /// generator whose images differ.
    pub fn check_against(&self, target: &Endomorphism) -> std::result::Result<(), Mismatch> {
        if self.alphabet != *target.alphabet() || self.field != target.field() {
            return Err(Mismatch {
                generator: String::new(),
                residual: None,
            });
        }
        match self.eval().first_difference(target) {
            None => Ok(()),
            Some((i, residual)) => Err(Mismatch {
                generator: self.alphabet.name(i).to_string(),
                residual: Some(residual),
            }),
        }
    }
}

/// Where an evaluated word and its target disagree.
#[derive(Debug, Clone, PartialEq)]
pub struct Mismatch {
    /// Empty when the alphabets or fields differ.
    pub generator: String,
    /// `eval(word)(v) - target(v)`.
    pub residual: Option<NcPoly>,
}

impl fmt::Display for Mismatch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.residual {
            None => write!(f, "word and target live over different alphabets or fields"),
            Some(r) => write!(f, "images of `{}` differ by {}", self.generator, r),
        }
    }
}

pub fn eval_tame_word(w: &TameWord) -> Endomorphism {
    w.eval()
}

pub fn verify_factorization(w: &TameWord, target: &Endomorphism) -> bool {
    w.check_against(target).is_ok()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> Field {
        Field::Rationals
    }

    fn xyz(field: Field) -> [NcPoly; 3] {
        let a = Alphabet::xyz();
        [0, 1, 2].map(|i| NcPoly::generator(&a, field, i))
    }

    fn map(images: [NcPoly; 3]) -> Endomorphism {
        Endomorphism::new(&Alphabet::xyz(), images[0].field(), images.to_vec()).unwrap()
    }

    #[test]
    fn composition_orientation() {
        let [x, y, z] = xyz(q());
        // A = (x + y, y, z), B = (x, y + x, z)
        let a = map([&x + &y, y.clone(), z.clone()]);
        let b = map([x.clone(), &y + &x, z.clone()]);
        let ab = a.compose(&b).unwrap();
        // A(B(x)) = A(x) = x + y; A(B(y)) = A(y + x) = 2y + x
        assert_eq!(ab.image(0), &(&x + &y));
        assert_eq!(ab.image(1), &(&(&y + &y) + &x));
        let id = Endomorphism::identity(&Alphabet::xyz(), q());
        assert_eq!(id.compose(&a).unwrap(), a);
    }

    #[test]
    fn identity_and_fixing() {
        let [x, y, z] = xyz(q());
        let zero = NcPoly::zero(x.alphabet(), q());
        assert!(map([&x + &zero, y.clone(), z.clone()]).is_identity());
        assert!(!map([&x + &(&y * &y), y.clone(), z.clone()]).is_identity());
        let swap = map([y.clone(), x.clone(), z.clone()]);
        assert!(swap.fixes("z").unwrap());
        let zx = map([z.clone(), y.clone(), x.clone()]);
        assert!(!zx.fixes_generator(2));
    }

    #[test]
    fn certificates() {
        let [x, y, z] = xyz(q());
        let y2 = &y * &y;
        let f = map([&x + &y2, y.clone(), z.clone()]);
        let g = map([&x - &y2, y.clone(), z.clone()]);
        assert!(certify(f.clone(), g).is_ok());
        let bad = map([&x - &(&y2 * &y), y.clone(), z.clone()]);
        match certify(f, bad) {
            Err(Error::NotInverse { generator, residual }) => {
                assert_eq!(generator, "x");
                assert_eq!(residual, &y2 - &(&y2 * &y));
            }
            other => panic!("expected NotInverse, got {other:?}"),
        }
    }

    #[test]
    fn anick_certificate() {
        let [x, y, z] = xyz(q());
        let w = &(&x * &z) - &(&z * &y);
        let f = map([&x + &(&z * &w), &y + &(&w * &z), z.clone()]);
        let g = map([&x - &(&z * &w), &y - &(&w * &z), z.clone()]);
        assert!(certify(f, g).is_ok());
    }

    #[test]
    fn stabilization() {
        let id = Endomorphism::identity(&Alphabet::xyz(), q());
        let s = id.stabilize("t").unwrap();
        assert_eq!(s, Endomorphism::identity(&Alphabet::xyzt(), q()));
        let s2 = s.stabilize("t1").unwrap();
        assert_eq!(s2.alphabet().to_string(), "x,y,z,t,t1");
        assert_eq!(s.stabilize("t"), Err(Error::NameClash("t".into())));
    }

    #[test]
    fn steps() {
        let [x, y, z] = xyz(q());
        let s = ElementaryStep::translation(1, &x * &x).unwrap();
        assert_eq!(s.to_endo(), map([x.clone(), &y + &(&x * &x), z.clone()]));
        assert!(s.to_endo().compose(&s.inverse().to_endo()).unwrap().is_identity());
        assert!(matches!(
            ElementaryStep::translation(0, &x * &y),
            Err(Error::MalformedStep(_))
        ));

        let f5 = Field::prime(5).unwrap();
        let [x5, ..] = xyz(f5);
        let zero = NcPoly::zero(x5.alphabet(), f5);
        let d = ElementaryStep::new(0, Scalar::from_i64(f5, 2), zero).unwrap();
        assert_eq!(d.inverse().unit(), &Scalar::from_i64(f5, 3));
        assert_eq!(d.inverse().image(), x5.scale(&Scalar::from_i64(f5, 3)));
    }

    #[test]
    fn words() {
        let [x, y, z] = xyz(q());
        let a = Alphabet::xyz();
        let empty = TameWord::empty(&a, q());
        let id = Endomorphism::identity(&a, q());
        assert!(verify_factorization(&empty, &id));
        let s = ElementaryStep::translation(0, &y * &z).unwrap();
        let w = TameWord::new(&a, q(), vec![s.clone()]).unwrap();
        assert_eq!(w.eval(), s.to_endo());
        let wi = w.concat(&w.inverse()).unwrap();
        assert!(wi.eval().is_identity());
        let err = w.check_against(&id).unwrap_err();
        assert_eq!(err.generator, "x");
        let _ = x;
    }

    #[test]
    fn invariant_pair_matches_full_check() {
        let a = Alphabet::xyz();
        let ext = a.extended("w").unwrap();
        let [x, y, z] = xyz(q());
        let w = &(&x * &z) - &(&z * &y);
        let ew = NcPoly::generator(&ext, q(), 3);
        let ez = NcPoly::generator(&ext, q(), 2);
        let g = &(&ew * &ez) + &ew.pow(2);
        let p = [&ez * &g, &g * &ez, NcPoly::zero(&ext, q())];
        let c = certify_invariant_pair(&a, q(), &w, &p).unwrap();
        let full = certify(c.forward().clone(), c.inverse().clone()).unwrap();
        assert_eq!(full, c);
        let bad = [&ez * &g, NcPoly::zero(&ext, q()), NcPoly::zero(&ext, q())];
        assert!(matches!(
            certify_invariant_pair(&a, q(), &w, &bad),
            Err(Error::CertificateFailure(_))
        ));
        let moved = [NcPoly::generator(&ext, q(), 1), ew.clone(), NcPoly::zero(&ext, q())];
        assert!(matches!(
            certify_invariant_pair(&a, q(), &w, &moved),
            Err(Error::InvalidInput(_))
        ));
    }

    #[test]
    fn certificates_compose() {
        let [x, y, z] = xyz(q());
        let s = |v: usize, p: NcPoly| ElementaryStep::translation(v, p).unwrap().to_endo();
        let a = certify(s(0, &y * &z), s(0, -&(&y * &z))).unwrap();
        let b = certify(s(1, &x * &x), s(1, -&(&x * &x))).unwrap();
        let ab = a.compose(&b).unwrap();
        let full = certify(ab.forward().clone(), ab.inverse().clone()).unwrap();
        assert_eq!(full, ab);
        let _ = z;
    }
}
