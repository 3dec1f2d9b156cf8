//! Smith-form and Anick-type z-automorphisms.
//!
//! A Smith-form map is
//!
//! ```text
//! x -> x + b h(u),  y -> y - a h(u),  z -> z,    u = a x + b y,
//! ```
//!
//! with `a, b` in F[zl, zr] and `h(t)` in F<z, t>. It fixes `u` because
//! `zl` and `zr` commute, so replacing `h` by `-h` inverts it. After
//! adjoining a fresh generator `t` it factors as
//!
//! ```text
//! (x, y, z, t - h(u)) (x - b t, y + a t, z, t) (x, y, z, t + h(u)) (x + b t, y - a t, z, t)
//! ```
//!
//! which [`smith_factorization`] emits as six elementary steps.

use std::collections::BTreeSet;

use crate::bimodule::{biop_gcd, linmat_elementary_reduce, BiMono, BiOpPoly, InvertibleLinMat, Reduction};
use crate::endo::{certify_invariant_pair, AutomorphismCertificate, ElementaryStep, Endomorphism, TameWord};
use crate::error::{Error, Result};
use crate::freealg::{Alphabet, Field, NcPoly, Scalar, UPoly, Word};
use crate::linsolve::{poly_vector, SpanSolver};

/// Default name of the generator adjoined by stabilization.
pub const FRESH: &str = "t";

/// Alphabet `z, t` of the polynomial `h`.
pub fn h_alphabet() -> Alphabet {
    Alphabet::new(["z", "t"]).expect("valid")
}

/// Alphabet `t, s` of the Anick polynomial `g`.
pub fn g_alphabet() -> Alphabet {
    Alphabet::new(["t", "s"]).expect("valid")
}

/// Parameters `(a, b, h)` of a Smith-form map.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmithData {
    pub a: BiOpPoly,
    pub b: BiOpPoly,
    /// Over [`h_alphabet`].
    pub h: NcPoly,
}

impl SmithData {
    /// Re-expresses `h` over `z, t`; fails if it uses other generators.
    pub fn new(a: BiOpPoly, b: BiOpPoly, h: NcPoly) -> Result<SmithData> {
        a.field().check(b.field())?;
        a.field().check(h.field())?;
        let h = h.restrict_to(&h_alphabet())?;
        Ok(SmithData { a, b, h })
    }

    pub fn field(&self) -> Field {
        self.a.field()
    }
}

/// The Anick polynomial `g(t, s)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnickData {
    /// Over [`g_alphabet`].
    pub g: NcPoly,
}

impl AnickData {
    pub fn new(g: NcPoly) -> Result<AnickData> {
        Ok(AnickData {
            g: g.restrict_to(&g_alphabet())?,
        })
    }

    pub fn field(&self) -> Field {
        self.g.field()
    }
}

fn xyz_indices(alphabet: &Alphabet) -> Result<(usize, usize, usize)> {
    match (
        alphabet.index_of("x"),
        alphabet.index_of("y"),
        alphabet.index_of("z"),
    ) {
        (Some(x), Some(y), Some(z)) => Ok((x, y, z)),
        _ => Err(Error::AlphabetMissingXYZ),
    }
}

/// `u = a x + b y` over `alphabet`.
pub fn smith_argument(d: &SmithData, alphabet: &Alphabet) -> Result<NcPoly> {
    let (ix, iy, _) = xyz_indices(alphabet)?;
    let f = d.field();
    let x = NcPoly::generator(alphabet, f, ix);
    let y = NcPoly::generator(alphabet, f, iy);
    Ok(&d.a.apply(&x)? + &d.b.apply(&y)?)
}

/// `h(u)`, i.e. `h` with `z -> z` and `t -> u`.
pub fn smith_inner(d: &SmithData, alphabet: &Alphabet) -> Result<NcPoly> {
    let (_, _, iz) = xyz_indices(alphabet)?;
    let z = NcPoly::generator(alphabet, d.field(), iz);
    d.h.substitute(&[z, smith_argument(d, alphabet)?])
}

fn smith_forward(d: &SmithData, alphabet: &Alphabet) -> Result<Endomorphism> {
    let (ix, iy, _) = xyz_indices(alphabet)?;
    let hu = smith_inner(d, alphabet)?;
    let mut images = Endomorphism::identity(alphabet, d.field()).into_images();
    images[ix] = &images[ix] + &d.b.apply(&hu)?;
    images[iy] = &images[iy] - &d.a.apply(&hu)?;
    Endomorphism::new(alphabet, d.field(), images)
}

/// The Smith-form automorphism of `F<x, y, z>` with its inverse (the
/// same construction with `-h`), verified exactly through the invariance
/// of `u`.
pub fn make_smith_aut(d: &SmithData) -> Result<AutomorphismCertificate> {
    let alphabet = Alphabet::xyz();
    let ext = alphabet.extended("w")?;
    let f = d.field();
    let hw = d.h.substitute(&[NcPoly::generator(&ext, f, 2), NcPoly::generator(&ext, f, 3)])?;
    let p = [d.b.apply(&hw)?, -&d.a.apply(&hw)?, NcPoly::zero(&ext, f)];
    certify_invariant_pair(&alphabet, f, &smith_argument(d, &alphabet)?, &p)
}

/// The six-step elementary factorization of the Smith map stabilized by
/// `t`, verified against `stabilize(make_smith_aut(d).forward)`.
pub fn smith_factorization(d: &SmithData) -> Result<TameWord> {
    smith_factorization_with(d, FRESH)
}

/// [`smith_factorization`] with a custom name for the fresh generator.
pub fn smith_factorization_with(d: &SmithData, fresh: &str) -> Result<TameWord> {
    let base = Alphabet::xyz();
    let target = make_smith_aut(d)?.forward().stabilize(fresh)?;
    let word = smith_word(d, target.alphabet())?;
    if let Err(m) = word.check_against(&target) {
        return Err(Error::VerificationFailed(format!("Smith factorization: {m}")));
    }
    debug_assert_eq!(target.alphabet().len(), base.len() + 1);
    Ok(word)
}

/// The six steps without verification; `alphabet` is `x, y, z, <fresh>`.
pub(crate) fn smith_word(d: &SmithData, alphabet: &Alphabet) -> Result<TameWord> {
    let (ix, iy, _) = xyz_indices(alphabet)?;
    let it = alphabet.len() - 1;
    let f = d.field();
    let hu = smith_inner(d, alphabet)?;
    let t = NcPoly::generator(alphabet, f, it);
    let bt = d.b.apply(&t)?;
    let at = d.a.apply(&t)?;
    let steps = vec![
        ElementaryStep::translation(it, -&hu)?,
        ElementaryStep::translation(ix, -&bt)?,
        ElementaryStep::translation(iy, at.clone())?,
        ElementaryStep::translation(it, hu)?,
        ElementaryStep::translation(ix, bt)?,
        ElementaryStep::translation(iy, -&at)?,
    ];
    TameWord::new(alphabet, f, steps)
}

/// `w = xz - zy` over `alphabet`.
pub fn anick_invariant(alphabet: &Alphabet, field: Field) -> Result<NcPoly> {
    let (ix, iy, iz) = xyz_indices(alphabet)?;
    let x = NcPoly::generator(alphabet, field, ix);
    let y = NcPoly::generator(alphabet, field, iy);
    let z = NcPoly::generator(alphabet, field, iz);
    Ok(&(&x * &z) - &(&z * &y))
}

/// `x -> x + z G, y -> y + G z, z -> z` with `G = g(xz - zy, z)`; the
/// inverse uses `-g`. Verified through the invariance of `xz - zy`.
pub fn anick_aut(d: &AnickData) -> Result<AutomorphismCertificate> {
    let alphabet = Alphabet::xyz();
    let ext = alphabet.extended("w")?;
    let f = d.field();
    let z = NcPoly::generator(&ext, f, 2);
    let gw = d.g.substitute(&[NcPoly::generator(&ext, f, 3), z.clone()])?;
    let p = [&z * &gw, &gw * &z, NcPoly::zero(&ext, f)];
    certify_invariant_pair(&alphabet, f, &anick_invariant(&alphabet, f)?, &p)
}

/// Smith parameters for an Anick map: `a = -zr`, `b = zl`,
/// `h(t) = g(-t, z)`. Then `u = -(xz - zy)` and `h(u) = g(xz - zy, z)`.
pub fn anick_to_smith(d: &AnickData) -> Result<SmithData> {
    let f = d.field();
    let ha = h_alphabet();
    let z = NcPoly::generator(&ha, f, 0);
    let t = NcPoly::generator(&ha, f, 1);
    let h = d.g.substitute(&[-&t, z])?;
    let s = SmithData {
        a: BiOpPoly::zr(f).neg(),
        b: BiOpPoly::zl(f),
        h,
    };
    let lhs = make_smith_aut(&s)?;
    let rhs = anick_aut(d)?;
    if lhs.forward() != rhs.forward() {
        return Err(Error::VerificationFailed(
            "Anick map and its Smith form disagree".into(),
        ));
    }
    Ok(s)
}

/// Outcome of [`recognize_smith`].
#[derive(Debug, Clone, PartialEq)]
pub enum Recognition {
    /// The unique `h` with `phi = make_smith_aut(a, b, h)`.
    Recognized(NcPoly),
    NotInForm(String),
}

const RECOGNITION_CAP: usize = 5000;

/// Splits `p` into its pure-`z` part (as a univariate polynomial) and the
/// part whose words involve other generators.
fn split_pure_z(p: &NcPoly, iz: usize) -> (UPoly, NcPoly) {
    let mut coeffs = Vec::new();
    for (w, c) in p.terms() {
        if w.letters().all(|l| l == iz) {
            if coeffs.len() <= w.len() {
                coeffs.resize(w.len() + 1, Scalar::zero(p.field()));
            }
            coeffs[w.len()] = c.clone();
        }
    }
    let rest = p.filter_terms(|w| w.letters().any(|l| l != iz));
    (UPoly::from_coeffs(p.field(), coeffs), rest)
}

/// All words over `{z, t}` (indices 0, 1) with at least one `t`, length at
/// most `max_len`, and weight `#z + weight_t * #t` at most `max_weight`.
fn t_words(max_len: usize, weight_t: usize, max_weight: usize) -> Vec<Word> {
    let mut out = Vec::new();
    let mut frontier = vec![(Vec::<usize>::new(), 0usize)];
    while let Some((letters, weight)) = frontier.pop() {
        if letters.contains(&1) {
            out.push(Word::from_letters(letters.iter().copied()));
        }
        if letters.len() == max_len {
            continue;
        }
        for (l, w) in [(0usize, 1usize), (1, weight_t)] {
            if weight + w <= max_weight {
                let mut next = letters.clone();
                next.push(l);
                frontier.push((next, weight + w));
            }
        }
    }
    out.sort();
    out
}

/// Recovers `h` from a z-automorphism that is in Smith form for the given
/// coprime `(a, b)`.
///
/// The pure-`z` part of `h` is read off the pure-`z` parts of
/// `phi(x) - x = b h(u)` and `phi(y) - y = -a h(u)` by univariate
/// division; the remaining coefficients come from an exact linear solve
/// over candidate words of bounded degree. The result is confirmed by
/// rebuilding the map. `dmax` bounds the length of the words of `h` and
/// defaults to `max(deg(phi(x) - x), deg(phi(y) - y))`.
pub fn recognize_smith(
    phi: &AutomorphismCertificate,
    a: &BiOpPoly,
    b: &BiOpPoly,
    dmax: Option<usize>,
) -> Result<Recognition> {
    let fwd = phi.forward();
    let alphabet = fwd.alphabet();
    let field = fwd.field();
    if alphabet != &Alphabet::xyz() {
        return Err(Error::AlphabetMissingXYZ);
    }
    field.check(a.field())?;
    field.check(b.field())?;
    let (ix, iy, iz) = xyz_indices(alphabet)?;
    if !fwd.fixes_generator(iz) {
        return Err(Error::DoesNotFixZ);
    }
    let g = biop_gcd(a, b).map_err(|_| Error::NotCoprime("0".into()))?;
    if !g.is_one() {
        return Err(Error::NotCoprime(g.to_string()));
    }
    let gens: Vec<NcPoly> = (0..3).map(|i| NcPoly::generator(alphabet, field, i)).collect();
    let dx = fwd.image(ix) - &gens[ix];
    let dy = fwd.image(iy) - &gens[iy];
    let dmax = dmax.unwrap_or_else(|| {
        dx.degree()
            .finite()
            .unwrap_or(0)
            .max(dy.degree().finite().unwrap_or(0))
    });
    let d0 = SmithData {
        a: a.clone(),
        b: b.clone(),
        h: NcPoly::zero(&h_alphabet(), field),
    };
    let u = smith_argument(&d0, alphabet)?;

    // pure-z part: dx_z = b(z,z) P(z), dy_z = -a(z,z) P(z)
    let (dxz, dxr) = split_pure_z(&dx, iz);
    let (dyz, dyr) = split_pure_z(&dy, iz);
    let bd = b.diagonal();
    let ad = a.diagonal();
    let pure = if !bd.is_zero() {
        dxz.exact_div(&bd)
    } else {
        dyz.exact_div(&ad.scale(&Scalar::from_i64(field, -1)))
    };
    let Some(pure) = pure else {
        return Ok(Recognition::NotInForm(
            "pure-z parts are not divisible by the diagonal of (a, b)".into(),
        ));
    };
    let ha = h_alphabet();
    let mut h = NcPoly::from_terms(
        &ha,
        field,
        pure.coeffs()
            .iter()
            .enumerate()
            .map(|(i, c)| (Word::from_letters(std::iter::repeat_n(0, i)), c.clone())),
    )?;
    if h.degree().finite().unwrap_or(0) > dmax {
        return Ok(Recognition::NotInForm(format!(
            "pure-z part of h exceeds degree bound {dmax}"
        )));
    }

    // remaining words: solve c * h_t(u) = target with c the nonzero one of b, -a
    let (coef, target) = if !b.is_zero() { (b.clone(), dxr) } else { (a.neg(), dyr) };
    if !target.is_zero() {
        let Some(weight_t) = u.degree().finite() else {
            return Ok(Recognition::NotInForm("u vanishes".into()));
        };
        let top = target.degree().finite().unwrap_or(0);
        let Some(max_weight) = top.checked_sub(coef.degree().unwrap_or(0) as usize) else {
            return Ok(Recognition::NotInForm("target degree below deg(a, b)".into()));
        };
        let words = t_words(dmax, weight_t, max_weight);
        if words.len() > RECOGNITION_CAP {
            return Err(Error::CapExceeded {
                cap: RECOGNITION_CAP,
            });
        }
        let z = gens[iz].clone();
        let mut solver = SpanSolver::new(field);
        for w in &words {
            let hw = NcPoly::monomial(&ha, w.clone(), Scalar::one(field))
                .substitute(&[z.clone(), u.clone()])?;
            solver.push(poly_vector(&coef.apply(&hw)?));
        }
        if !solver.is_independent() {
            return Ok(Recognition::NotInForm(format!(
                "h is not determined: {} dependent candidate words",
                solver.dependent().len()
            )));
        }
        let Some(sol) = solver.solve(poly_vector(&target)) else {
            return Ok(Recognition::NotInForm(format!(
                "no h with words of length <= {dmax} matches"
            )));
        };
        let ht = NcPoly::from_terms(
            &ha,
            field,
            sol.into_iter().map(|(i, c)| (words[i].clone(), c)),
        )?;
        h = &h + &ht;
    }
    let candidate = SmithData {
        a: a.clone(),
        b: b.clone(),
        h: h.clone(),
    };
    if smith_forward(&candidate, alphabet)? != *fwd {
        return Ok(Recognition::NotInForm(
            "candidate h does not reproduce both images".into(),
        ));
    }
    Ok(Recognition::Recognized(h))
}

/// Segments of a word in `x, y, z`: the x/y letters in order and the
/// z-run lengths around them.
fn segments(w: &Word, iz: usize) -> (Vec<usize>, Vec<u32>) {
    let mut pattern = Vec::new();
    let mut runs = vec![0u32];
    for l in w.letters() {
        if l == iz {
            *runs.last_mut().expect("nonempty") += 1;
        } else {
            pattern.push(l);
            runs.push(0);
        }
    }
    (pattern, runs)
}

fn normalize_pair(a: &BiOpPoly, b: &BiOpPoly) -> Option<(BiOpPoly, BiOpPoly)> {
    let lead = if !a.is_zero() { a.leading()?.1 } else { b.leading()?.1 };
    let inv = lead.inv().ok()?;
    Some((a.scale(&inv), b.scale(&inv)))
}

/// Candidate `(a, b)` pairs for a z-automorphism, read off the lowest
/// nonzero x/y-degree component of `phi(x) - x` and `phi(y) - y`.
///
/// For a Smith map the component of x/y-degree `k` has, for each fixed
/// pattern of the first `k - 1` x/y letters, coefficients proportional to
/// `a` and `b` in the exponents around the last letter; removing the
/// common factor by [`biop_gcd`] gives the pair up to a scalar. Earlier
/// exponents are specialized at small field values. Only candidates that
/// keep `a x + b y` invariant are returned. Pairs are scaled so the first
/// nonzero entry is monic.
pub fn guess_ab(phi: &AutomorphismCertificate, dmax: usize) -> Result<Vec<(BiOpPoly, BiOpPoly)>> {
    let fwd = phi.forward();
    let alphabet = fwd.alphabet();
    let field = fwd.field();
    let (ix, iy, iz) = xyz_indices(alphabet)?;
    if !fwd.fixes_generator(iz) {
        return Err(Error::DoesNotFixZ);
    }
    let gens: Vec<NcPoly> = (0..alphabet.len())
        .map(|i| NcPoly::generator(alphabet, field, i))
        .collect();
    let diffs = [fwd.image(ix) - &gens[ix], fwd.image(iy) - &gens[iy]];
    let xy_degree = |w: &Word| w.len() - w.count(iz);
    let mut candidates: Vec<(BiOpPoly, BiOpPoly)> = Vec::new();
    let mut seen = BTreeSet::new();
    for k in 1..=dmax.max(1) {
        let comps: Vec<NcPoly> = diffs
            .iter()
            .map(|d| d.filter_terms(|w| xy_degree(w) == k))
            .collect();
        if comps.iter().all(NcPoly::is_zero) {
            continue;
        }
        for comp in comps.iter().filter(|c| !c.is_zero()) {
            let prefixes: BTreeSet<Vec<usize>> = comp
                .terms()
                .map(|(w, _)| segments(w, iz).0[..k - 1].to_vec())
                .collect();
            for prefix in &prefixes {
                for spec in 1..=3i64 {
                    let point = Scalar::from_i64(field, spec);
                    let mut parts = [BiOpPoly::zero(field), BiOpPoly::zero(field)];
                    for (w, c) in comp.terms() {
                        let (pattern, runs) = segments(w, iz);
                        if pattern[..k - 1] != prefix[..] {
                            continue;
                        }
                        let slot = if pattern[k - 1] == ix { 0 } else { 1 };
                        let mut coeff = c.clone();
                        for &e in &runs[..k - 1] {
                            for _ in 0..e {
                                coeff = &coeff * &point;
                            }
                        }
                        let m = BiMono::new(runs[k - 1], runs[k]);
                        parts[slot] = parts[slot].add(&BiOpPoly::monomial(m, coeff));
                    }
                    if parts[0].is_zero() && parts[1].is_zero() {
                        continue;
                    }
                    let g = biop_gcd(&parts[0], &parts[1])?;
                    let (Some(a), Some(b)) = (parts[0].exact_div(&g), parts[1].exact_div(&g)) else {
                        continue;
                    };
                    let Some(pair) = normalize_pair(&a, &b) else {
                        continue;
                    };
                    let key = format!("{} | {}", pair.0, pair.1);
                    if seen.insert(key) {
                        candidates.push(pair);
                    }
                    if k == 1 {
                        break;
                    }
                }
            }
        }
        break;
    }
    // keep pairs whose argument u = a x + b y is invariant
    let mut out = Vec::new();
    for (a, b) in candidates {
        let d = SmithData {
            a: a.clone(),
            b: b.clone(),
            h: NcPoly::zero(&h_alphabet(), field),
        };
        let u = smith_argument(&d, alphabet)?;
        if fwd.apply(&u)? == u {
            out.push((a, b));
        }
    }
    Ok(out)
}

/// A factor of a presented product.
#[derive(Debug, Clone, PartialEq)]
pub enum Piece {
    /// A z-linear automorphism given by an invertible matrix.
    Linear(InvertibleLinMat),
    Smith(SmithData),
}

impl Piece {
    /// The automorphism of `F<x, y, z>` the piece stands for.
    pub fn endomorphism(&self) -> Result<Endomorphism> {
        match self {
            Piece::Linear(m) => m.matrix().apply(&Alphabet::xyz()),
            Piece::Smith(d) => Ok(make_smith_aut(d)?.forward().clone()),
        }
    }

    pub fn field(&self) -> Field {
        match self {
            Piece::Linear(m) => m.matrix().field(),
            Piece::Smith(d) => d.field(),
        }
    }
}

/// The composite `P_1 P_2 ... P_n` on `x, y, z`, first piece outermost.
pub fn presented_product(pieces: &[Piece]) -> Result<Endomorphism> {
    let field = pieces
        .first()
        .map(Piece::field)
        .ok_or_else(|| Error::InvalidInput("empty product".into()))?;
    let mut target = Endomorphism::identity(&Alphabet::xyz(), field);
    for piece in pieces {
        target = target.compose(&piece.endomorphism()?)?;
    }
    Ok(target)
}

/// Factors a product `P_1 P_2 ... P_n` of presented pieces (first piece
/// outermost) into elementary steps on `x, y, z, t`.
///
/// Smith pieces with `a = 0` or `b = 0` are already elementary and
/// contribute one step; other Smith pieces contribute their six-step
/// factorization; linear pieces go through the elementary reduction
/// heuristic with `t` fixed. The concatenation is verified against the
/// stabilized product.
pub fn factor_presented_product(pieces: &[Piece]) -> Result<TameWord> {
    let field = pieces
        .first()
        .map(Piece::field)
        .ok_or_else(|| Error::InvalidInput("empty product".into()))?;
    let big = Alphabet::xyz().extended(FRESH)?;
    let mut word = TameWord::empty(&big, field);
    for piece in pieces {
        field.check(piece.field())?;
        let part = match piece {
            Piece::Linear(m) => match linmat_elementary_reduce(m, &big)? {
                Reduction::Reduced(w) => w,
                Reduction::Stuck => return Err(Error::Stuck),
            },
            Piece::Smith(d) if d.a.is_zero() || d.b.is_zero() => {
                let e = make_smith_aut(d)?.forward().extend_to(&big)?;
                let (var, img) = if d.a.is_zero() { (0, e.image(0)) } else { (1, e.image(1)) };
                let gen = NcPoly::generator(&big, field, var);
                let step = ElementaryStep::translation(var, img - &gen)?;
                TameWord::new(&big, field, vec![step])?
            }
            Piece::Smith(d) => smith_factorization(d)?,
        };
        word = word.concat(&part)?;
    }
    let target = presented_product(pieces)?.stabilize(FRESH)?;
    if let Err(m) = word.check_against(&target) {
        return Err(Error::VerificationFailed(format!("presented product: {m}")));
    }
    Ok(word)
}
