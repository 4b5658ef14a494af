//! Qudit bipartite states with maximally mixed marginals, built from
//! constrained `d x d` parameter matrices, and their local-unitary
//! invariants.
//!
//! The pipeline is
//!
//! 1. [`alpha`]: check a parameter matrix against the normalization and
//!    shifted-autocorrelation constraints,
//! 2. [`state`]: build the rank-`d` density matrix and certify it,
//! 3. [`invariants`]: spectra of the state and of its partial transpose,
//!    singular values of the correlation matrix, purity and negativity,
//!    each via block formulas and via a full-matrix oracle,
//! 4. [`qutrit`]: closed forms and the negativity sweep for the
//!    two-parameter qutrit family.

pub mod alpha;
pub mod discrepancy;
pub mod error;
pub mod invariants;
pub mod io;
pub mod linalg;
pub mod par;
pub mod qutrit;
pub mod state;

pub use error::{Error, Result};
