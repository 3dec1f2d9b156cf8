use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// The ground field: the rationals, or a prime field of order below 2^31.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Field {
    Rationals,
    Prime(u32),
}

impl Field {
    /// Validated prime field constructor.
    pub fn prime(p: u32) -> Result<Field> {
        if p >= 1 << 31 {
            return Err(Error::InvalidField(format!("{p} is not below 2^31")));
        }
        if !is_prime(p) {
            return Err(Error::InvalidField(format!("{p} is not prime")));
        }
        Ok(Field::Prime(p))
    }

    pub fn characteristic(self) -> u32 {
        match self {
            Field::Rationals => 0,
            Field::Prime(p) => p,
        }
    }

    pub(crate) fn check(self, other: Field) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::FieldMismatch(self, other))
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rationals => write!(f, "q"),
            Field::Prime(p) => write!(f, "fp:{p}"),
        }
    }
}

impl std::str::FromStr for Field {
    type Err = Error;

    fn from_str(s: &str) -> Result<Field> {
        let t = s.trim().to_ascii_lowercase();
        if t == "q" || t == "qq" || t == "rationals" {
            return Ok(Field::Rationals);
        }
        let digits = t
            .strip_prefix("fp:")
            .or_else(|| t.strip_prefix('f'))
            .ok_or_else(|| Error::InvalidField(s.to_string()))?;
        let p: u32 = digits
            .parse()
            .map_err(|_| Error::InvalidField(s.to_string()))?;
        Field::prime(p)
    }
}

fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u32;
    while (d as u64) * (d as u64) <= p as u64 {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
enum Repr {
    Rational(BigRational),
    Residue { p: u32, v: u32 },
}

/// An exact field element. Rationals are kept in lowest terms with a
/// positive denominator, residues in `[0, p)`.
///
/// The arithmetic operators panic when the operands live in different
/// fields; use the `checked_*` methods where that can happen.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Scalar {
    repr: Repr,
}

impl Scalar {
    pub fn zero(field: Field) -> Scalar {
        Scalar::from_i64(field, 0)
    }

    pub fn one(field: Field) -> Scalar {
        Scalar::from_i64(field, 1)
    }

    pub fn from_i64(field: Field, n: i64) -> Scalar {
        match field {
            Field::Rationals => Scalar {
                repr: Repr::Rational(BigRational::from_integer(BigInt::from(n))),
            },
            Field::Prime(p) => Scalar {
                repr: Repr::Residue {
                    p,
                    v: n.rem_euclid(p as i64) as u32,
                },
            },
        }
    }

    pub fn from_bigint(field: Field, n: &BigInt) -> Scalar {
        match field {
            Field::Rationals => Scalar {
                repr: Repr::Rational(BigRational::from_integer(n.clone())),
            },
            Field::Prime(p) => {
                let v = n.mod_floor(&BigInt::from(p)).to_u32().expect("reduced residue");
                Scalar {
                    repr: Repr::Residue { p, v },
                }
            }
        }
    }

    /// `num / den`; fails when `den` vanishes in the field.
    pub fn from_ratio(field: Field, num: &BigInt, den: &BigInt) -> Result<Scalar> {
        let d = Scalar::from_bigint(field, den);
        if d.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(&Scalar::from_bigint(field, num) * &d.inv()?)
    }

    pub fn field(&self) -> Field {
        match &self.repr {
            Repr::Rational(_) => Field::Rationals,
            Repr::Residue { p, .. } => Field::Prime(*p),
        }
    }

    pub fn is_zero(&self) -> bool {
        match &self.repr {
            Repr::Rational(r) => r.is_zero(),
            Repr::Residue { v, .. } => *v == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match &self.repr {
            Repr::Rational(r) => r.is_one(),
            Repr::Residue { v, .. } => *v == 1,
        }
    }

    /// True for rationals with a negative numerator; residues are never negative.
    pub fn is_negative(&self) -> bool {
        match &self.repr {
            Repr::Rational(r) => r.is_negative(),
            Repr::Residue { .. } => false,
        }
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match &self.repr {
            Repr::Rational(r) => Some(r),
            Repr::Residue { .. } => None,
        }
    }

    pub fn as_residue(&self) -> Option<u32> {
        match &self.repr {
            Repr::Rational(_) => None,
            Repr::Residue { v, .. } => Some(*v),
        }
    }

    pub fn inv(&self) -> Result<Scalar> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(match &self.repr {
            Repr::Rational(r) => Scalar {
                repr: Repr::Rational(r.recip()),
            },
            Repr::Residue { p, v } => Scalar {
                repr: Repr::Residue {
                    p: *p,
                    v: pow_mod(*v, p - 2, *p),
                },
            },
        })
    }

    pub fn checked_add(&self, rhs: &Scalar) -> Result<Scalar> {
        self.field().check(rhs.field())?;
        Ok(self + rhs)
    }

    pub fn checked_sub(&self, rhs: &Scalar) -> Result<Scalar> {
        self.field().check(rhs.field())?;
        Ok(self - rhs)
    }

    pub fn checked_mul(&self, rhs: &Scalar) -> Result<Scalar> {
        self.field().check(rhs.field())?;
        Ok(self * rhs)
    }

    pub fn checked_div(&self, rhs: &Scalar) -> Result<Scalar> {
        self.field().check(rhs.field())?;
        Ok(self * &rhs.inv()?)
    }

    /// Sign-free rendering used by the printer; the caller emits the sign.
    pub(crate) fn abs_string(&self) -> String {
        match &self.repr {
            Repr::Rational(r) => r.abs().to_string(),
            Repr::Residue { v, .. } => v.to_string(),
        }
    }
}

fn pow_mod(base: u32, mut exp: u32, p: u32) -> u32 {
    let m = p as u64;
    let mut acc = 1u64 % m;
    let mut b = base as u64 % m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        exp >>= 1;
    }
    acc as u32
}

fn mismatch(a: &Scalar, b: &Scalar) -> ! {
    panic!("scalar field mismatch: {} vs {}", a.field(), b.field())
}

impl Add for &Scalar {
    type Output = Scalar;

    fn add(self, rhs: &Scalar) -> Scalar {
        match (&self.repr, &rhs.repr) {
            (Repr::Rational(a), Repr::Rational(b)) => Scalar {
                repr: Repr::Rational(a + b),
            },
            (Repr::Residue { p, v: a }, Repr::Residue { p: q, v: b }) if p == q => Scalar {
                repr: Repr::Residue {
                    p: *p,
                    v: ((*a as u64 + *b as u64) % *p as u64) as u32,
                },
            },
            _ => mismatch(self, rhs),
        }
    }
}

impl Sub for &Scalar {
    type Output = Scalar;

    fn sub(self, rhs: &Scalar) -> Scalar {
        match (&self.repr, &rhs.repr) {
            (Repr::Rational(a), Repr::Rational(b)) => Scalar {
                repr: Repr::Rational(a - b),
            },
            (Repr::Residue { p, v: a }, Repr::Residue { p: q, v: b }) if p == q => Scalar {
                repr: Repr::Residue {
                    p: *p,
                    v: ((*a as u64 + *p as u64 - *b as u64) % *p as u64) as u32,
                },
            },
            _ => mismatch(self, rhs),
        }
    }
}

impl Mul for &Scalar {
    type Output = Scalar;

    fn mul(self, rhs: &Scalar) -> Scalar {
        match (&self.repr, &rhs.repr) {
            (Repr::Rational(a), Repr::Rational(b)) => Scalar {
                repr: Repr::Rational(a * b),
            },
            (Repr::Residue { p, v: a }, Repr::Residue { p: q, v: b }) if p == q => Scalar {
                repr: Repr::Residue {
                    p: *p,
                    v: ((*a as u64 * *b as u64) % *p as u64) as u32,
                },
            },
            _ => mismatch(self, rhs),
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;

    fn neg(self) -> Scalar {
        match &self.repr {
            Repr::Rational(a) => Scalar {
                repr: Repr::Rational(-a),
            },
            Repr::Residue { p, v } => Scalar {
                repr: Repr::Residue {
                    p: *p,
                    v: if *v == 0 { 0 } else { p - v },
                },
            },
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;

    fn neg(self) -> Scalar {
        -&self
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.repr {
            Repr::Rational(r) => write!(f, "{r}"),
            Repr::Residue { v, .. } => write!(f, "{v}"),
        }
    }
}
