//! Construction and elementary factorization of z-fixing automorphisms of
//! the free associative algebra `F<x, y, z>`.
//!
//! The layers, bottom up:
//!
//! * [`freealg`]: exact scalars, words, noncommutative polynomials;
//! * [`bimodule`]: the operator ring `F[zl, zr]` of left and right
//!   multiplication by `z`, and 2x2 matrices over it;
//! * [`endo`]: endomorphisms, inverse certificates, elementary steps and
//!   tame words;
//! * [`smith`]: Smith-form and Anick-type maps, their explicit
//!   factorization after adjoining one variable, and recognition;
//! * [`membership`]: bounded-degree membership in the subalgebra
//!   generated by `z` and a fixed polynomial;
//! * [`cli`]: text grammar, JSON formats, commands and self tests.

pub mod bimodule;
pub mod cli;
pub mod endo;
mod error;
pub mod freealg;
pub mod linsolve;
pub mod membership;
pub mod random;
pub mod smith;

pub use error::{Error, Result};
