use std::fmt;

use super::BiOpPoly;
use crate::endo::{ElementaryStep, Endomorphism, TameWord};
use crate::error::{Error, Result};
use crate::freealg::{Alphabet, Field, NcPoly, Scalar};

/// A 2x2 matrix over F[zl, zr]; row `i` holds the coefficients of the
/// image of the `i`-th of `x, y`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LinMat {
    entries: [[BiOpPoly; 2]; 2],
}

impl LinMat {
    pub fn new(entries: [[BiOpPoly; 2]; 2]) -> Result<LinMat> {
        let field = entries[0][0].field();
        for row in &entries {
            for e in row {
                field.check(e.field())?;
            }
        }
        Ok(LinMat { entries })
    }

    pub fn identity(field: Field) -> LinMat {
        LinMat::diagonal(Scalar::one(field), Scalar::one(field))
    }

    pub fn diagonal(a: Scalar, d: Scalar) -> LinMat {
        let field = a.field();
        LinMat {
            entries: [
                [BiOpPoly::constant(a), BiOpPoly::zero(field)],
                [BiOpPoly::zero(field), BiOpPoly::constant(d)],
            ],
        }
    }

    /// The identity plus `c` at position `(row, col)`, `row != col`.
    pub fn elementary(row: usize, col: usize, c: BiOpPoly) -> LinMat {
        assert!(row != col && row < 2 && col < 2, "off-diagonal position");
        let mut m = LinMat::identity(c.field());
        m.entries[row][col] = c;
        m
    }

    pub fn field(&self) -> Field {
        self.entries[0][0].field()
    }

    pub fn entries(&self) -> &[[BiOpPoly; 2]; 2] {
        &self.entries
    }

    pub fn entry(&self, row: usize, col: usize) -> &BiOpPoly {
        &self.entries[row][col]
    }

    pub fn checked_mul(&self, other: &LinMat) -> Result<LinMat> {
        self.field().check(other.field())?;
        let e = |i: usize, j: usize| {
            self.entries[i][0]
                .mul(&other.entries[0][j])
                .add(&self.entries[i][1].mul(&other.entries[1][j]))
        };
        Ok(LinMat {
            entries: [[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]],
        })
    }

    pub fn mul(&self, other: &LinMat) -> LinMat {
        self.checked_mul(other).expect("matrix field mismatch")
    }

    pub fn transpose(&self) -> LinMat {
        let [[a, b], [c, d]] = self.entries.clone();
        LinMat {
            entries: [[a, c], [b, d]],
        }
    }

    pub fn determinant(&self) -> BiOpPoly {
        let [[a, b], [c, d]] = &self.entries;
        a.mul(d).sub(&b.mul(c))
    }

    pub fn is_identity(&self) -> bool {
        self.entries[0][0].is_one()
            && self.entries[1][1].is_one()
            && self.entries[0][1].is_zero()
            && self.entries[1][0].is_zero()
    }

    /// The z-linear endomorphism `x -> a11 x + a12 y, y -> a21 x + a22 y`
    /// fixing every other generator.
    ///
    /// With the outermost-first composition convention,
    /// `apply(M * N) = apply(N) * apply(M)`.
    pub fn apply(&self, alphabet: &Alphabet) -> Result<Endomorphism> {
        let (Some(ix), Some(iy), Some(_)) = (
            alphabet.index_of("x"),
            alphabet.index_of("y"),
            alphabet.index_of("z"),
        ) else {
            return Err(Error::AlphabetMissingXYZ);
        };
        let field = self.field();
        let x = NcPoly::generator(alphabet, field, ix);
        let y = NcPoly::generator(alphabet, field, iy);
        let mut images: Vec<NcPoly> = (0..alphabet.len())
            .map(|i| NcPoly::generator(alphabet, field, i))
            .collect();
        for (row, var) in [(0usize, ix), (1, iy)] {
            let [a, b] = &self.entries[row];
            images[var] = &a.apply(&x)? + &b.apply(&y)?;
        }
        Endomorphism::new(alphabet, field, images)
    }
}

impl fmt::Display for LinMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [[a, b], [c, d]] = &self.entries;
        write!(f, "[[{a}, {b}], [{c}, {d}]]")
    }
}

impl fmt::Debug for LinMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LinMat({self})")
    }
}

/// A matrix together with an exactly checked two-sided inverse.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InvertibleLinMat {
    matrix: LinMat,
    inverse: LinMat,
}

impl InvertibleLinMat {
    pub fn new(matrix: LinMat, inverse: LinMat) -> Result<InvertibleLinMat> {
        let l = matrix.checked_mul(&inverse)?;
        let r = inverse.checked_mul(&matrix)?;
        if !(l.is_identity() && r.is_identity()) {
            return Err(Error::NotInvertible);
        }
        Ok(InvertibleLinMat { matrix, inverse })
    }

    pub fn matrix(&self) -> &LinMat {
        &self.matrix
    }

    pub fn inverse(&self) -> &LinMat {
        &self.inverse
    }
}

/// Elementary matrices produced by the reduction.
#[derive(Debug, Clone, PartialEq, Eq)]
enum ElemOp {
    /// Identity plus `c` at `(row, col)`.
    Add { row: usize, col: usize, c: BiOpPoly },
    /// Identity with `unit` at `(row, row)`.
    Scale { row: usize, unit: Scalar },
}

impl ElemOp {
    fn inverse(&self) -> ElemOp {
        match self {
            ElemOp::Add { row, col, c } => ElemOp::Add {
                row: *row,
                col: *col,
                c: c.neg(),
            },
            ElemOp::Scale { row, unit } => ElemOp::Scale {
                row: *row,
                unit: unit.inv().expect("unit"),
            },
        }
    }

    fn transpose(&self) -> ElemOp {
        match self {
            ElemOp::Add { row, col, c } => ElemOp::Add {
                row: *col,
                col: *row,
                c: c.clone(),
            },
            s => s.clone(),
        }
    }

    /// Left multiplication: `self * m`.
    fn act(&self, m: &mut LinMat) {
        match self {
            ElemOp::Add { row, col, c } => {
                for k in 0..2 {
                    let add = c.mul(&m.entries[*col][k]);
                    m.entries[*row][k] = m.entries[*row][k].add(&add);
                }
            }
            ElemOp::Scale { row, unit } => {
                for k in 0..2 {
                    m.entries[*row][k] = m.entries[*row][k].scale(unit);
                }
            }
        }
    }

    fn to_step(&self, vars: [usize; 2], alphabet: &Alphabet, field: Field) -> Result<ElementaryStep> {
        match self {
            ElemOp::Add { row, col, c } => {
                let src = NcPoly::generator(alphabet, field, vars[*col]);
                ElementaryStep::translation(vars[*row], c.apply(&src)?)
            }
            ElemOp::Scale { row, unit } => {
                ElementaryStep::new(vars[*row], unit.clone(), NcPoly::zero(alphabet, field))
            }
        }
    }
}

fn measure(p: &BiOpPoly) -> (u32, usize) {
    (p.degree().unwrap_or(0), p.num_terms())
}

/// Row-reduces `m` to the identity. Returns the applied operations
/// `R_1, ..., R_k` with `R_k ... R_1 m = I`, or `None` when no division
/// step lowers the (total degree, term count) measure.
fn row_reduce(m: &LinMat) -> Option<Vec<ElemOp>> {
    let field = m.field();
    let mut w = m.clone();
    let mut ops = Vec::new();
    let mut apply = |op: ElemOp, w: &mut LinMat| {
        op.act(w);
        ops.push(op);
    };
    let swap = |w: &mut LinMat, apply: &mut dyn FnMut(ElemOp, &mut LinMat)| {
        let one = BiOpPoly::one(field);
        apply(ElemOp::Add { row: 0, col: 1, c: one.clone() }, w);
        apply(ElemOp::Add { row: 1, col: 0, c: one.neg() }, w);
        apply(ElemOp::Add { row: 0, col: 1, c: one }, w);
        apply(ElemOp::Scale { row: 1, unit: Scalar::from_i64(field, -1) }, w);
    };

    // Euclid on the first column until one entry is a nonzero constant.
    loop {
        let a = w.entries[0][0].clone();
        let b = w.entries[1][0].clone();
        let ca = a.as_constant().filter(|c| !c.is_zero());
        let cb = b.as_constant().filter(|c| !c.is_zero());
        if let Some(ca) = ca {
            if !b.is_zero() {
                let c = b.scale(&ca.inv().ok()?).neg();
                apply(ElemOp::Add { row: 1, col: 0, c }, &mut w);
            }
            break;
        }
        if let Some(cb) = cb {
            if !a.is_zero() {
                let c = a.scale(&cb.inv().ok()?).neg();
                apply(ElemOp::Add { row: 0, col: 1, c }, &mut w);
            }
            swap(&mut w, &mut apply);
            break;
        }
        if a.is_zero() && b.is_zero() {
            return None;
        }
        if a.is_zero() || b.is_zero() {
            // the nonzero entry is not a unit: not reducible here
            return None;
        }
        let (big, small) = if measure(&a) >= measure(&b) { (0, 1) } else { (1, 0) };
        let try_step = |target: usize, source: usize| -> Option<BiOpPoly> {
            let t = &w.entries[target][0];
            let s = &w.entries[source][0];
            let (q, r) = t.div_rem(s).ok()?;
            (!q.is_zero() && measure(&r) < measure(t)).then(|| q.neg())
        };
        let op = match try_step(big, small) {
            Some(c) => ElemOp::Add { row: big, col: small, c },
            None => ElemOp::Add { row: small, col: big, c: try_step(small, big)? },
        };
        apply(op, &mut w);
    }

    // w = [[l, b], [0, d]] with l a nonzero constant
    let d = w.entries[1][1].as_constant().filter(|c| !c.is_zero())?;
    if !w.entries[0][1].is_zero() {
        let c = w.entries[0][1].scale(&d.inv().ok()?).neg();
        apply(ElemOp::Add { row: 0, col: 1, c }, &mut w);
    }
    let l = w.entries[0][0].as_constant().filter(|c| !c.is_zero())?;
    for (row, u) in [(0usize, l), (1, d)] {
        if !u.is_one() {
            apply(ElemOp::Scale { row, unit: u.inv().ok()? }, &mut w);
        }
    }
    debug_assert!(w.is_identity());
    w.is_identity().then_some(ops)
}

/// A factorization `m = G_1 G_2 ... G_k` into elementary matrices.
fn factor_matrix(m: &LinMat) -> Option<Vec<ElemOp>> {
    if let Some(ops) = row_reduce(m) {
        // R_k ... R_1 m = I  =>  m = R_1^-1 ... R_k^-1
        return Some(ops.iter().map(ElemOp::inverse).collect());
    }
    // R_k ... R_1 m^T = I  =>  m = (R_k^-1)^T ... (R_1^-1)^T
    let ops = row_reduce(&m.transpose())?;
    Some(ops.iter().rev().map(|op| op.inverse().transpose()).collect())
}

/// Result of the elementary reduction heuristic.
#[derive(Debug, Clone, PartialEq)]
pub enum Reduction {
    /// A word verified to evaluate to the matrix's endomorphism.
    Reduced(TameWord),
    /// No degree-lowering division step applies; this is not a proof
    /// that the matrix is not a product of elementary matrices.
    Stuck,
}

/// Best-effort Euclidean reduction of an invertible matrix over
/// F[zl, zr] to elementary steps on `alphabet`.
pub fn linmat_elementary_reduce(m: &InvertibleLinMat, alphabet: &Alphabet) -> Result<Reduction> {
    let field = m.matrix.field();
    let target = m.matrix.apply(alphabet)?;
    let vars = [
        alphabet.index_of("x").ok_or(Error::AlphabetMissingXYZ)?,
        alphabet.index_of("y").ok_or(Error::AlphabetMissingXYZ)?,
    ];
    let Some(factors) = factor_matrix(&m.matrix) else {
        return Ok(Reduction::Stuck);
    };
    // apply(G_1 ... G_k) = apply(G_k) * ... * apply(G_1)
    let steps = factors
        .iter()
        .rev()
        .map(|g| g.to_step(vars, alphabet, field))
        .collect::<Result<Vec<_>>>()?;
    let word = TameWord::new(alphabet, field, steps)?;
    if let Err(mm) = word.check_against(&target) {
        return Err(Error::VerificationFailed(format!("linear reduction: {mm}")));
    }
    Ok(Reduction::Reduced(word))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> Field {
        Field::Rationals
    }

    fn zl() -> BiOpPoly {
        BiOpPoly::zl(q())
    }

    fn zr() -> BiOpPoly {
        BiOpPoly::zr(q())
    }

    fn one() -> BiOpPoly {
        BiOpPoly::one(q())
    }

    fn zero() -> BiOpPoly {
        BiOpPoly::zero(q())
    }

    fn elem(row: usize, col: usize, c: BiOpPoly) -> InvertibleLinMat {
        InvertibleLinMat::new(
            LinMat::elementary(row, col, c.clone()),
            LinMat::elementary(row, col, c.neg()),
        )
        .unwrap()
    }

    #[test]
    fn apply_examples() {
        let a = Alphabet::xyz();
        assert!(LinMat::identity(q()).apply(&a).unwrap().is_identity());
        let e = LinMat::elementary(0, 1, zl()).apply(&a).unwrap();
        assert_eq!(e.to_string(), "x -> x + z*y; y -> y; z -> z");
        let swap = LinMat::new([[zero(), one()], [one(), zero()]]).unwrap();
        assert_eq!(swap.apply(&a).unwrap().to_string(), "x -> y; y -> x; z -> z");
        let xy = Alphabet::new(["x", "y"]).unwrap();
        assert_eq!(swap.apply(&xy), Err(Error::AlphabetMissingXYZ));
    }

    #[test]
    fn apply_reverses_products() {
        let a = Alphabet::xyz();
        let m = LinMat::elementary(0, 1, zl());
        let n = LinMat::elementary(1, 0, zl());
        let lhs = m.mul(&n).apply(&a).unwrap();
        let rhs = n.apply(&a).unwrap().compose(&m.apply(&a).unwrap()).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn single_elementary() {
        let a = Alphabet::xyz();
        match linmat_elementary_reduce(&elem(0, 1, zl()), &a).unwrap() {
            Reduction::Reduced(w) => assert_eq!(w.len(), 1),
            Reduction::Stuck => panic!("stuck"),
        }
    }

    #[test]
    fn product_of_two() {
        let a = Alphabet::xyz();
        let m1 = LinMat::elementary(1, 0, zr().pow(2));
        let m2 = LinMat::elementary(0, 1, zl());
        let m = m1.mul(&m2);
        let inv = LinMat::elementary(0, 1, zl().neg()).mul(&LinMat::elementary(1, 0, zr().pow(2).neg()));
        let m = InvertibleLinMat::new(m, inv).unwrap();
        let oracle = m2.apply(&a).unwrap().compose(&m1.apply(&a).unwrap()).unwrap();
        match linmat_elementary_reduce(&m, &a).unwrap() {
            Reduction::Reduced(w) => {
                assert_eq!(w.len(), 2);
                assert_eq!(w.eval(), oracle);
            }
            Reduction::Stuck => panic!("stuck"),
        }
    }

    #[test]
    fn cohn_matrix_is_stuck() {
        let xy = zl().mul(&zr());
        let m = LinMat::new([[one().add(&xy), zl().pow(2)], [zr().pow(2).neg(), one().sub(&xy)]]).unwrap();
        let inv = LinMat::new([[one().sub(&xy), zl().pow(2).neg()], [zr().pow(2), one().add(&xy)]]).unwrap();
        let m = InvertibleLinMat::new(m, inv).unwrap();
        assert_eq!(
            linmat_elementary_reduce(&m, &Alphabet::xyz()).unwrap(),
            Reduction::Stuck
        );
    }

    #[test]
    fn bad_inverse_rejected() {
        let m = LinMat::elementary(0, 1, zl());
        assert_eq!(
            InvertibleLinMat::new(m.clone(), m).unwrap_err(),
            Error::NotInvertible
        );
    }

    #[test]
    fn swap_and_diagonal() {
        let a = Alphabet::xyz();
        let two = Scalar::from_i64(q(), 2);
        let half = two.inv().unwrap();
        let swap = LinMat::new([[zero(), one()], [one(), zero()]]).unwrap();
        let d = LinMat::diagonal(two.clone(), Scalar::from_i64(q(), -1));
        let dinv = LinMat::diagonal(half, Scalar::from_i64(q(), -1));
        let m = InvertibleLinMat::new(swap.mul(&d), dinv.mul(&swap)).unwrap();
        let Reduction::Reduced(w) = linmat_elementary_reduce(&m, &a).unwrap() else {
            panic!("stuck");
        };
        assert_eq!(w.eval(), m.matrix().apply(&a).unwrap());
    }
}
