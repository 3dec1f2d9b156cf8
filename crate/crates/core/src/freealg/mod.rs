//! Exact scalars and the free associative algebra over them.

mod poly;
mod scalar;
pub mod upoly;
mod word;
pub mod zdiv;

pub use poly::{Degree, NcPoly};
pub use scalar::{Field, Scalar};
pub use upoly::UPoly;
pub use word::{Alphabet, Word};
pub use zdiv::{left_zpoly_divisor, right_zpoly_divisor, ZDivisor};
