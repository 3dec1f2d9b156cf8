//! The operator ring F[zl, zr] acting on the free algebra by left and
//! right multiplication by `z`, and 2x2 matrices over it.

mod biop;
mod linmat;

pub use biop::{biop_gcd, BiMono, BiOpPoly};
pub use linmat::{linmat_elementary_reduce, InvertibleLinMat, LinMat, Reduction};
