//! Dense univariate polynomials over a [`Field`], used for the z-divisor
//! probe and as coefficient ring of the bivariate gcd.

use std::fmt;

use super::{Field, Scalar};
use crate::error::{Error, Result};

/// Coefficients from the constant term upwards; no trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct UPoly {
    field: Field,
    coeffs: Vec<Scalar>,
}

impl UPoly {
    pub fn zero(field: Field) -> UPoly {
        UPoly {
            field,
            coeffs: Vec::new(),
        }
    }

    pub fn constant(c: Scalar) -> UPoly {
        UPoly::from_coeffs(c.field(), vec![c])
    }

    pub fn one(field: Field) -> UPoly {
        UPoly::constant(Scalar::one(field))
    }

    /// `c * X^n`
    pub fn monomial(c: Scalar, n: usize) -> UPoly {
        let field = c.field();
        let mut coeffs = vec![Scalar::zero(field); n];
        coeffs.push(c);
        UPoly::from_coeffs(field, coeffs)
    }

    pub fn from_coeffs(field: Field, mut coeffs: Vec<Scalar>) -> UPoly {
        while coeffs.last().is_some_and(Scalar::is_zero) {
            coeffs.pop();
        }
        UPoly { field, coeffs }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Scalar {
        self.coeffs
            .get(i)
            .cloned()
            .unwrap_or_else(|| Scalar::zero(self.field))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&Scalar> {
        self.coeffs.last()
    }

    pub fn add(&self, other: &UPoly) -> UPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|i| &self.coeff(i) + &other.coeff(i)).collect();
        UPoly::from_coeffs(self.field, coeffs)
    }

    pub fn sub(&self, other: &UPoly) -> UPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|i| &self.coeff(i) - &other.coeff(i)).collect();
        UPoly::from_coeffs(self.field, coeffs)
    }

    pub fn mul(&self, other: &UPoly) -> UPoly {
        if self.is_zero() || other.is_zero() {
            return UPoly::zero(self.field);
        }
        let mut coeffs = vec![Scalar::zero(self.field); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] = &coeffs[i + j] + &(a * b);
            }
        }
        UPoly::from_coeffs(self.field, coeffs)
    }

    pub fn scale(&self, c: &Scalar) -> UPoly {
        UPoly::from_coeffs(self.field, self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn div_rem(&self, divisor: &UPoly) -> Result<(UPoly, UPoly)> {
        let Some(dd) = divisor.degree() else {
            return Err(Error::DivisionByZero);
        };
        let lead_inv = divisor.coeffs[dd].inv()?;
        let mut rem = self.coeffs.clone();
        let mut quot = vec![Scalar::zero(self.field); rem.len().saturating_sub(dd)];
        while rem.len() > dd {
            let top = rem.len() - 1;
            let c = &rem[top] * &lead_inv;
            if !c.is_zero() {
                let shift = top - dd;
                for (j, b) in divisor.coeffs.iter().enumerate() {
                    rem[shift + j] = &rem[shift + j] - &(&c * b);
                }
                quot[shift] = c;
            }
            rem.pop();
        }
        Ok((
            UPoly::from_coeffs(self.field, quot),
            UPoly::from_coeffs(self.field, rem),
        ))
    }

    /// Exact quotient, `None` when `divisor` does not divide.
    pub fn exact_div(&self, divisor: &UPoly) -> Option<UPoly> {
        let (q, r) = self.div_rem(divisor).ok()?;
        r.is_zero().then_some(q)
    }

    pub fn monic(&self) -> UPoly {
        match self.leading() {
            None => self.clone(),
            Some(l) => self.scale(&l.inv().expect("nonzero leading coefficient")),
        }
    }

    /// Monic gcd; gcd(0, 0) = 0.
    pub fn gcd(&self, other: &UPoly) -> UPoly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b).expect("nonzero divisor");
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn derivative(&self) -> UPoly {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c * &Scalar::from_i64(self.field, i as i64))
            .collect();
        UPoly::from_coeffs(self.field, coeffs)
    }

    pub fn eval(&self, at: &Scalar) -> Scalar {
        let mut acc = Scalar::zero(self.field);
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * at) + c;
        }
        acc
    }

    /// Squarefree factors from Yun's algorithm (characteristic-zero
    /// correct; in positive characteristic the factors returned are still
    /// divisors of `self`).
    pub fn squarefree_factors(&self) -> Vec<UPoly> {
        let mut out = Vec::new();
        if self.degree().unwrap_or(0) == 0 {
            return out;
        }
        let d = self.derivative();
        let mut a = self.gcd(&d);
        if a.is_zero() {
            return out;
        }
        let mut b = self.exact_div(&a).expect("gcd divides");
        let mut c = d.exact_div(&a).expect("gcd divides");
        let mut dd = c.sub(&b.derivative());
        while b.degree().unwrap_or(0) > 0 {
            a = b.gcd(&dd);
            if a.is_zero() {
                break;
            }
            if a.degree().unwrap_or(0) > 0 {
                out.push(a.clone());
            }
            b = b.exact_div(&a).expect("gcd divides");
            c = dd.exact_div(&a).expect("gcd divides");
            dd = c.sub(&b.derivative());
        }
        out
    }
}

impl fmt::Debug for UPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| format!("{c}*X^{i}"))
            .collect();
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}
