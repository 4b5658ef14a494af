//! Full-matrix reference path: every invariant is read off a `d² x d²`
//! (or `(d²-1) x (d²-1)`) matrix with a dense solver. Nothing here uses
//! the block structure of the family.

use super::basis::{BasisNorm, OperatorBasis};
use super::InvariantSet;
use crate::error::{Error, Result};
use crate::linalg::{
    eig_hermitian, kron, partial_transpose, singular_values, CMatrix, RealMultiset,
};
use crate::state::{certify, BipartiteState};

/// `r_xy = Tr(ρ (λ_x ⊗ λ_y)^H)` over the whole traceless basis.
pub fn correlation_matrix(s: &BipartiteState, basis: &OperatorBasis) -> CMatrix {
    assert_eq!(s.d(), basis.d(), "basis dimension mismatch");
    let n = basis.len();
    let mut r = CMatrix::zeros(n, n);
    for x in 0..n {
        for y in 0..n {
            let op = kron(basis.element(x), basis.element(y));
            // Tr(ρ B^H) = Σ_ij ρ_ij conj(B_ij)
            r[(x, y)] = op.dotc(s.rho());
        }
    }
    r
}

pub fn oracle_kappa3(s: &BipartiteState, norm: BasisNorm) -> Result<RealMultiset> {
    singular_values(&correlation_matrix(s, &OperatorBasis::new(s.d(), norm)))
}

/// Invariants of a certified state from full eigen/singular-value solves.
pub fn oracle_invariants(s: &BipartiteState, norm: BasisNorm) -> Result<InvariantSet> {
    let cert = certify(s);
    if !cert.is_valid() {
        return Err(Error::Certification(cert.violations().join("; ")));
    }
    let d = s.d();
    let rho = s.rho();
    let spectrum = eig_hermitian(rho)?;
    let pt_spectrum = eig_hermitian(&partial_transpose(rho, d)?)?;
    let purity = (rho * rho).trace().re;
    let trace_norm: f64 = pt_spectrum.values().iter().map(|x| x.abs()).sum();
    Ok(InvariantSet {
        kappa1: spectrum.largest(d),
        kappa3: oracle_kappa3(s, norm)?,
        kappa2: pt_spectrum,
        purity,
        negativity: ((trace_norm - 1.0) / 2.0).max(0.0),
        mode: norm,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alpha::{named_example, qutrit_family, NamedExample, QutritFamilyParams};
    use crate::invariants::basis::BasisLabel;
    use crate::invariants::blocks::corr_blocks;
    use crate::linalg::max_abs_diff;
    use crate::state::build_state;

    #[test]
    fn maximally_mixed_has_no_correlations() {
        for d in 2..=4 {
            let s = BipartiteState::maximally_mixed(d).unwrap();
            for norm in [BasisNorm::Raw, BasisNorm::Orthonormal] {
                let r = correlation_matrix(&s, &OperatorBasis::new(d, norm));
                assert!(r.iter().all(|z| z.norm() < 1e-15));
                let inv = oracle_invariants(&s, norm).unwrap();
                assert!(inv.kappa3.values().iter().all(|&x| x < 1e-15));
            }
        }
    }

    #[test]
    fn cross_sector_entries_vanish_for_family() {
        let s = build_state(&qutrit_family(QutritFamilyParams::new(1.3, 0.4).unwrap()));
        let basis = OperatorBasis::new(3, BasisNorm::Raw);
        let r = correlation_matrix(&s, &basis);
        let labels: Vec<BasisLabel> = basis.labels().collect();
        for (x, lx) in labels.iter().enumerate() {
            for (y, ly) in labels.iter().enumerate() {
                if lx.sector() != ly.sector() {
                    assert!(r[(x, y)].norm() < 1e-10);
                }
            }
        }
    }

    #[test]
    fn assembled_blocks_match_direct_entries() {
        let cases = [
            qutrit_family(QutritFamilyParams::new(0.2, 2.2).unwrap()),
            named_example(NamedExample::GaussPhase, 5).unwrap(),
            named_example(NamedExample::BellSeed, 4).unwrap(),
        ];
        for a in cases {
            let s = build_state(&a);
            for norm in [BasisNorm::Raw, BasisNorm::Orthonormal] {
                let direct = correlation_matrix(&s, &OperatorBasis::new(a.d(), norm));
                let blocks = corr_blocks(&a, norm).assemble();
                assert!(max_abs_diff(&direct, &blocks) < 1e-10);
            }
        }
    }

    #[test]
    fn bell_anchor_values() {
        let s = build_state(&named_example(NamedExample::BellSeed, 2).unwrap());
        let inv = oracle_invariants(&s, BasisNorm::Orthonormal).unwrap();
        assert!((inv.purity - 1.0).abs() < 1e-12);
        assert!((inv.negativity - 0.5).abs() < 1e-12);
    }

    #[test]
    fn uncertified_state_is_refused() {
        let s = BipartiteState::new(2, CMatrix::identity(4, 4)).unwrap();
        assert!(matches!(
            oracle_invariants(&s, BasisNorm::Orthonormal),
            Err(Error::Certification(_))
        ));
    }
}
