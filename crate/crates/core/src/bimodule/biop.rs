use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::freealg::{Field, NcPoly, Scalar, UPoly, Word};

/// Exponents `(zl^i, zr^j)`, ordered by total degree, then by the `zl`
/// exponent. This is a monomial order (graded lex with `zl > zr`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BiMono {
    pub left: u32,
    pub right: u32,
}

impl BiMono {
    pub const ONE: BiMono = BiMono { left: 0, right: 0 };

    pub fn new(left: u32, right: u32) -> BiMono {
        BiMono { left, right }
    }

    pub fn degree(self) -> u32 {
        self.left + self.right
    }

    pub fn divides(self, other: BiMono) -> bool {
        self.left <= other.left && self.right <= other.right
    }

    fn div(self, other: BiMono) -> BiMono {
        BiMono::new(self.left - other.left, self.right - other.right)
    }
}

impl std::ops::Mul for BiMono {
    type Output = BiMono;

    fn mul(self, other: BiMono) -> BiMono {
        BiMono::new(self.left + other.left, self.right + other.right)
    }
}

impl Ord for BiMono {
    fn cmp(&self, other: &BiMono) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then(self.left.cmp(&other.left))
    }
}

impl PartialOrd for BiMono {
    fn partial_cmp(&self, other: &BiMono) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A commutative polynomial in the operators `zl` (left multiplication
/// by `z`) and `zr` (right multiplication by `z`).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BiOpPoly {
    field: Field,
    terms: BTreeMap<BiMono, Scalar>,
}

impl BiOpPoly {
    pub fn zero(field: Field) -> BiOpPoly {
        BiOpPoly {
            field,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(field: Field) -> BiOpPoly {
        BiOpPoly::constant(Scalar::one(field))
    }

    pub fn constant(c: Scalar) -> BiOpPoly {
        BiOpPoly::monomial(BiMono::ONE, c)
    }

    pub fn from_i64(field: Field, n: i64) -> BiOpPoly {
        BiOpPoly::constant(Scalar::from_i64(field, n))
    }

    pub fn monomial(m: BiMono, c: Scalar) -> BiOpPoly {
        let mut p = BiOpPoly::zero(c.field());
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }

    pub fn zl(field: Field) -> BiOpPoly {
        BiOpPoly::monomial(BiMono::new(1, 0), Scalar::one(field))
    }

    pub fn zr(field: Field) -> BiOpPoly {
        BiOpPoly::monomial(BiMono::new(0, 1), Scalar::one(field))
    }

    pub fn from_terms<I: IntoIterator<Item = (BiMono, Scalar)>>(field: Field, terms: I) -> Result<BiOpPoly> {
        let mut p = BiOpPoly::zero(field);
        for (m, c) in terms {
            field.check(c.field())?;
            p.add_term(m, c);
        }
        Ok(p)
    }

    fn add_term(&mut self, m: BiMono, c: Scalar) {
        if c.is_zero() {
            return;
        }
        let s = match self.terms.get(&m) {
            Some(old) => old + &c,
            None => c,
        };
        if s.is_zero() {
            self.terms.remove(&m);
        } else {
            self.terms.insert(m, s);
        }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&BiMono, &Scalar)> + ExactSizeIterator {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.as_constant().is_some_and(|c| c.is_one())
    }

    /// The value when the polynomial is a nonzero or zero constant.
    pub fn as_constant(&self) -> Option<Scalar> {
        match self.terms.len() {
            0 => Some(Scalar::zero(self.field)),
            1 => self.terms.get(&BiMono::ONE).cloned(),
            _ => None,
        }
    }

    /// Total degree; `None` for zero.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().next_back().map(|m| m.degree())
    }

    pub fn leading(&self) -> Option<(BiMono, &Scalar)> {
        self.terms.iter().next_back().map(|(m, c)| (*m, c))
    }

    pub fn coeff(&self, m: BiMono) -> Scalar {
        self.terms
            .get(&m)
            .cloned()
            .unwrap_or_else(|| Scalar::zero(self.field))
    }

    pub fn checked_add(&self, other: &BiOpPoly) -> Result<BiOpPoly> {
        self.field.check(other.field)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(*m, c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &BiOpPoly) -> Result<BiOpPoly> {
        self.checked_add(&other.neg())
    }

    pub fn checked_mul(&self, other: &BiOpPoly) -> Result<BiOpPoly> {
        self.field.check(other.field)?;
        let mut out = BiOpPoly::zero(self.field);
        for (m, a) in &self.terms {
            for (n, b) in &other.terms {
                out.add_term(*m * *n, a * b);
            }
        }
        Ok(out)
    }

    pub fn add(&self, other: &BiOpPoly) -> BiOpPoly {
        self.checked_add(other).expect("operator field mismatch")
    }

    pub fn sub(&self, other: &BiOpPoly) -> BiOpPoly {
        self.checked_sub(other).expect("operator field mismatch")
    }

    pub fn mul(&self, other: &BiOpPoly) -> BiOpPoly {
        self.checked_mul(other).expect("operator field mismatch")
    }

    pub fn neg(&self) -> BiOpPoly {
        BiOpPoly {
            field: self.field,
            terms: self.terms.iter().map(|(m, c)| (*m, -c)).collect(),
        }
    }

    pub fn scale(&self, c: &Scalar) -> BiOpPoly {
        let mut out = BiOpPoly::zero(self.field);
        for (m, a) in &self.terms {
            out.add_term(*m, a * c);
        }
        out
    }

    pub fn pow(&self, n: u32) -> BiOpPoly {
        (0..n).fold(BiOpPoly::one(self.field), |acc, _| acc.mul(self))
    }

    /// Division by a single divisor under the graded order; the remainder
    /// is zero exactly when `divisor` divides `self`.
    pub fn div_rem(&self, divisor: &BiOpPoly) -> Result<(BiOpPoly, BiOpPoly)> {
        self.field.check(divisor.field)?;
        let Some((lm, lc)) = divisor.leading() else {
            return Err(Error::DivisionByZero);
        };
        let lc_inv = lc.inv()?;
        let mut p = self.clone();
        let mut quot = BiOpPoly::zero(self.field);
        let mut rem = BiOpPoly::zero(self.field);
        while let Some((m, c)) = p.leading().map(|(m, c)| (m, c.clone())) {
            if lm.divides(m) {
                let t = BiOpPoly::monomial(m.div(lm), &c * &lc_inv);
                p = p.sub(&t.mul(divisor));
                quot = quot.add(&t);
            } else {
                p.terms.remove(&m);
                rem.add_term(m, c);
            }
        }
        Ok((quot, rem))
    }

    pub fn exact_div(&self, divisor: &BiOpPoly) -> Option<BiOpPoly> {
        let (q, r) = self.div_rem(divisor).ok()?;
        r.is_zero().then_some(q)
    }

    /// Scaled so the leading coefficient is 1 (zero stays zero).
    pub fn monic(&self) -> BiOpPoly {
        match self.leading() {
            None => self.clone(),
            Some((_, c)) => self.scale(&c.inv().expect("nonzero")),
        }
    }

    /// Acts on `p` by `zl^i zr^j : p -> z^i p z^j`, extended linearly.
    pub fn apply(&self, p: &NcPoly) -> Result<NcPoly> {
        self.field.check(p.field())?;
        let iz = p.alphabet().index_of("z").ok_or(Error::AlphabetMissingZ)?;
        let mut out = NcPoly::zero(p.alphabet(), p.field());
        for (m, c) in &self.terms {
            let left = Word::from_letters(std::iter::repeat_n(iz, m.left as usize));
            let right = Word::from_letters(std::iter::repeat_n(iz, m.right as usize));
            out = &out + &p.sandwich(&left, &right).scale(c);
        }
        Ok(out)
    }

    /// Substitutes `zl = zr = z`, the action on pure powers of `z`.
    pub fn diagonal(&self) -> UPoly {
        let mut coeffs: Vec<Scalar> = Vec::new();
        for (m, c) in &self.terms {
            let d = m.degree() as usize;
            if coeffs.len() <= d {
                coeffs.resize(d + 1, Scalar::zero(self.field));
            }
            coeffs[d] = &coeffs[d] + c;
        }
        UPoly::from_coeffs(self.field, coeffs)
    }

    /// Coefficients as a polynomial in `zr` over F[zl].
    fn by_right(&self) -> Vec<UPoly> {
        let mut rows: Vec<Vec<Scalar>> = Vec::new();
        for (m, c) in &self.terms {
            let (i, j) = (m.left as usize, m.right as usize);
            if rows.len() <= j {
                rows.resize(j + 1, Vec::new());
            }
            if rows[j].len() <= i {
                rows[j].resize(i + 1, Scalar::zero(self.field));
            }
            rows[j][i] = c.clone();
        }
        rows.into_iter()
            .map(|r| UPoly::from_coeffs(self.field, r))
            .collect()
    }

    fn from_right(field: Field, rows: &[UPoly]) -> BiOpPoly {
        let mut out = BiOpPoly::zero(field);
        for (j, row) in rows.iter().enumerate() {
            for (i, c) in row.coeffs().iter().enumerate() {
                out.add_term(BiMono::new(i as u32, j as u32), c.clone());
            }
        }
        out
    }
}

fn trim(rows: &mut Vec<UPoly>) {
    while rows.last().is_some_and(UPoly::is_zero) {
        rows.pop();
    }
}

fn content(rows: &[UPoly]) -> UPoly {
    let field = rows[0].field();
    rows.iter().fold(UPoly::zero(field), |g, r| g.gcd(r))
}

fn primitive(rows: &[UPoly]) -> Vec<UPoly> {
    let c = content(rows);
    rows.iter()
        .map(|r| r.exact_div(&c).expect("content divides"))
        .collect()
}

/// Pseudo-remainder in `zr` over F[zl].
fn prem(a: &[UPoly], b: &[UPoly]) -> Vec<UPoly> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    let lb = b[db].clone();
    trim(&mut r);
    while r.len() > db {
        let dr = r.len() - 1;
        let lr = r[dr].clone();
        let shift = dr - db;
        for row in r.iter_mut() {
            *row = row.mul(&lb);
        }
        for (k, bk) in b.iter().enumerate() {
            r[shift + k] = r[shift + k].sub(&lr.mul(bk));
        }
        trim(&mut r);
    }
    r
}

/// A greatest common divisor in F[zl, zr], monic under the graded order.
///
/// Computed as gcd of contents times the primitive part of the primitive
/// remainder sequence, viewing the inputs as polynomials in `zr`.
pub fn biop_gcd(a: &BiOpPoly, b: &BiOpPoly) -> Result<BiOpPoly> {
    a.field.check(b.field)?;
    match (a.is_zero(), b.is_zero()) {
        (true, true) => return Err(Error::BothZero),
        (true, false) => return Ok(b.monic()),
        (false, true) => return Ok(a.monic()),
        _ => {}
    }
    let field = a.field;
    let ra = a.by_right();
    let rb = b.by_right();
    let cont = content(&ra).gcd(&content(&rb));
    let mut p = primitive(&ra);
    let mut q = primitive(&rb);
    if p.len() < q.len() {
        std::mem::swap(&mut p, &mut q);
    }
    let pp = loop {
        if q.len() == 1 {
            // primitive and constant in zr: a unit
            break vec![UPoly::one(field)];
        }
        let r = prem(&p, &q);
        if r.is_empty() {
            break q;
        }
        p = q;
        q = primitive(&r);
    };
    let g = BiOpPoly::from_right(field, &pp).mul(&BiOpPoly::from_right(field, &[cont]));
    Ok(g.monic())
}

impl fmt::Display for BiOpPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            match (k, c.is_negative()) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let mag = c.abs_string();
            let mut factors = Vec::new();
            for (name, e) in [("zl", m.left), ("zr", m.right)] {
                match e {
                    0 => {}
                    1 => factors.push(name.to_string()),
                    _ => factors.push(format!("{name}^{e}")),
                }
            }
            if factors.is_empty() {
                write!(f, "{mag}")?;
            } else if mag == "1" {
                write!(f, "{}", factors.join("*"))?;
            } else {
                write!(f, "{mag}*{}", factors.join("*"))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for BiOpPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BiOpPoly({self} over {})", self.field)
    }
}
