//! Construction, certification, counting and inversion of permutation
//! polynomials over small finite fields, with every claim backed by an
//! exhaustive check.
//!
//! Module map:
//! - [`gf`]: GF(p^m) arithmetic, Frobenius, relative trace, bases.
//! - [`fpoly`]: polynomials reduced modulo `x^Q − x`, evaluation and interpolation.
//! - [`permtool`]: brute-force oracles, the local criterion, local inversion.
//! - [`linearized`]: linearized polynomials, Dickson matrices, trace forms.
//! - [`family`]: the `u x^q + v x + g(x^q + a x)` family over `F_{q^2}`.
//! - [`wire`]: JSON shapes shared with the command-line tool.

pub mod error;
pub mod family;
pub mod fpoly;
pub mod gf;
pub mod linearized;
pub mod matrix;
pub mod par;
pub mod permtool;
pub mod wire;

pub use error::{Error, Result};
pub use fpoly::{Poly, ValueTable};
pub use gf::{make_field, Field, FieldCtx, FieldElem, SubfieldView};
pub use par::Exec;
