//! Local-unitary invariants of the family and the measures derived from them.
//!
//! * `kappa1`: spectrum of the state (row weights of `α`),
//! * `kappa2`: spectrum of the partial transpose (union of the `Q_s` blocks),
//! * `kappa3`: singular values of the correlation matrix (union over `R_k`).
//!
//! Each has a block path (this module's [`block_invariants`]) and a
//! full-matrix reference in [`oracle`].

mod basis;
mod blocks;
pub mod oracle;
mod probe;

use serde::Serialize;

pub use basis::{BasisLabel, BasisNorm, OperatorBasis};
pub use blocks::{
    corr_blocks, corr_blocks_from_coeffs, kappa1, kappa2, kappa2_from_blocks, kappa3,
    kappa3_from_blocks, pt_blocks, pt_blocks_from_coeffs, CorrBlockSet, PtBlockSet, IMAG_TOL,
};
pub use oracle::{correlation_matrix, oracle_invariants};
pub use probe::{
    conjugation_deviation, discriminate_sets, lu_discriminate, lu_probe, Deviations,
    Discrimination, ProbeDeviations, ProbeReport, Verdict,
};

use crate::alpha::AlphaMatrix;
use crate::error::Result;
use crate::linalg::RealMultiset;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InvariantSet {
    pub kappa1: RealMultiset,
    pub kappa2: RealMultiset,
    pub kappa3: RealMultiset,
    pub purity: f64,
    pub negativity: f64,
    pub mode: BasisNorm,
}

/// `Σ_i κ1_i²`, i.e. `Tr ρ²`.
pub fn purity(kappa1: &RealMultiset) -> f64 {
    kappa1.values().iter().map(|x| x * x).sum()
}

/// `(Σ_i |κ2_i| - 1) / 2`, the trace-norm negativity. Roundoff below zero
/// is reported as zero.
pub fn negativity(kappa2: &RealMultiset) -> f64 {
    let trace_norm: f64 = kappa2.values().iter().map(|x| x.abs()).sum();
    ((trace_norm - 1.0) / 2.0).max(0.0)
}

pub fn block_invariants(a: &AlphaMatrix, norm: BasisNorm) -> Result<InvariantSet> {
    let k1 = kappa1(a);
    let k2 = kappa2(a)?;
    let k3 = kappa3(a, norm)?;
    Ok(InvariantSet {
        purity: purity(&k1),
        negativity: negativity(&k2),
        kappa1: k1,
        kappa2: k2,
        kappa3: k3,
        mode: norm,
    })
}

impl InvariantSet {
    /// Per-quantity gap to another set.
    pub fn deviation(&self, other: &InvariantSet) -> Deviations {
        Deviations {
            kappa1: self.kappa1.max_deviation(&other.kappa1),
            kappa2: self.kappa2.max_deviation(&other.kappa2),
            kappa3: self.kappa3.max_deviation(&other.kappa3),
            purity: (self.purity - other.purity).abs(),
            negativity: (self.negativity - other.negativity).abs(),
        }
    }
}
