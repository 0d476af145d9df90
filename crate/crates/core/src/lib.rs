//! Exact symbolic engine and numerical verifier for the genus-two Virasoro
//! correlation operators.
//!
//! The crate has four parts:
//!
//! * [`expr`] — canonical-form polynomial algebra over formal geometric
//!   atoms with coefficients in Q[c];
//! * [`graphs`] — enumeration of order-n Virasoro graphs as partial
//!   permutations, their cycle/chain decomposition and the bivariate census;
//! * [`ward`] — graph-weight assembly of the operator, the independent
//!   Ward-recursion rebuild, and the exact agreement/symmetry/Schwarzian
//!   checks;
//! * [`modular`] — randomized numerical verification of the Sp(4,Z)
//!   transformation theory on seeded model geometries.

pub mod error;
pub mod expr;
pub mod graphs;
pub mod modular;
pub mod ward;
