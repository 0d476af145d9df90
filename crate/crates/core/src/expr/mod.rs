//! Exact canonical-form polynomial algebra over formal geometric atoms with
//! coefficients in Q[c].
//!
//! All values are immutable after construction and all operations are pure.

mod atom;
mod coeff;
mod poly;
pub mod sexpr;

pub use atom::{Atom, Label, NuIndex};
pub use coeff::Coefficient;
pub use poly::{FormalPolynomial, Monomial};
