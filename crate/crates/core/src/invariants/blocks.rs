//! Invariants computed from the `d x d` blocks that the family's
//! structure exposes, without ever forming a `d² x d²` matrix.

use num_complex::Complex64;

use super::basis::BasisNorm;
use crate::alpha::{omega_pow, AlphaMatrix};
use crate::error::{Error, Result};
use crate::linalg::{eig_general, singular_values, CMatrix, RealMultiset};
use crate::state::FourierCoeffs;

/// Largest imaginary part tolerated on a partial-transpose block eigenvalue.
pub const IMAG_TOL: f64 = 1e-9;

/// Spectrum of the state: the row weights `Σ_j |α_ij|²`.
pub fn kappa1(a: &AlphaMatrix) -> RealMultiset {
    let d = a.d();
    (0..d)
        .map(|i| (0..d).map(|j| a.get(i, j).norm_sqr()).sum())
        .collect()
}

/// The blocks `Q_0..Q_{d-1}` of the sheared partial transpose.
/// Entry `(l, k)` of `Q_s` is `c_{s-l-k, k} c*_{s-l-k, l}`.
#[derive(Debug, Clone, PartialEq)]
pub struct PtBlockSet {
    pub blocks: Vec<CMatrix>,
}

impl PtBlockSet {
    pub fn total_trace(&self) -> Complex64 {
        self.blocks.iter().map(crate::linalg::trace).sum()
    }
}

pub fn pt_blocks_from_coeffs(c: &FourierCoeffs) -> PtBlockSet {
    let d = c.d();
    let blocks = (0..d as i64)
        .map(|s| {
            CMatrix::from_fn(d, d, |l, k| {
                let (l, k) = (l as i64, k as i64);
                let i = s - l - k;
                c.at(i, k) * c.at(i, l).conj()
            })
        })
        .collect();
    PtBlockSet { blocks }
}

pub fn pt_blocks(a: &AlphaMatrix) -> PtBlockSet {
    pt_blocks_from_coeffs(&FourierCoeffs::from_alpha(a))
}

/// Real spectrum of a block via a general (non-Hermitian) eigensolve.
pub(crate) fn real_spectrum(block: &CMatrix) -> Result<Vec<f64>> {
    eig_general(block)?
        .into_iter()
        .map(|z| {
            if z.im.abs() > IMAG_TOL {
                Err(Error::ComplexSpectrum {
                    re: z.re,
                    im: z.im,
                    tol: IMAG_TOL,
                })
            } else {
                Ok(z.re)
            }
        })
        .collect()
}

/// Spectrum of the partial transpose as the union of the `Q_s` spectra.
pub fn kappa2(a: &AlphaMatrix) -> Result<RealMultiset> {
    kappa2_from_blocks(&pt_blocks(a))
}

pub fn kappa2_from_blocks(q: &PtBlockSet) -> Result<RealMultiset> {
    let mut values = Vec::with_capacity(q.blocks.len() * q.blocks.len());
    for block in &q.blocks {
        values.extend(real_spectrum(block)?);
    }
    Ok(RealMultiset::new(values))
}

/// Correlation-matrix blocks in the diagonal/shift operator basis, with
/// `r_xy = Tr(ρ (λ_x ⊗ λ_y)^H)`.
///
/// `diagonal` is `R_0`, indexed by `i, j = 1..d-1` (stored at `i-1, j-1`);
/// `shifts[k-1]` is `R_k` for `k = 1..d-1`, indexed by `i, j = 0..d-1`.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrBlockSet {
    pub norm: BasisNorm,
    pub diagonal: CMatrix,
    pub shifts: Vec<CMatrix>,
}

impl CorrBlockSet {
    pub fn blocks(&self) -> impl Iterator<Item = &CMatrix> {
        std::iter::once(&self.diagonal).chain(self.shifts.iter())
    }

    /// The full `(d²-1) x (d²-1)` block-diagonal matrix in
    /// [`super::OperatorBasis`] order.
    pub fn assemble(&self) -> CMatrix {
        let n: usize = self.blocks().map(|b| b.nrows()).sum();
        let mut out = CMatrix::zeros(n, n);
        let mut offset = 0;
        for b in self.blocks() {
            let m = b.nrows();
            out.view_mut((offset, offset), (m, m)).copy_from(b);
            offset += m;
        }
        out
    }
}

pub fn corr_blocks_from_coeffs(c: &FourierCoeffs, norm: BasisNorm) -> CorrBlockSet {
    let d = c.d();
    // ⟨m,p|ρ|m,p⟩ = |c_{m-p,p}|²
    let population = |m: usize, p: usize| c.at(m as i64 - p as i64, p as i64).norm_sqr();
    let scale = norm.diagonal_scale(d).powi(2);
    let diagonal = CMatrix::from_fn(d - 1, d - 1, |i, j| {
        let (i, j) = (i + 1, j + 1);
        let mut acc = Complex64::new(0.0, 0.0);
        for m in 0..d {
            for p in 0..d {
                acc += omega_pow(d, -((m * i + p * j) as i64)) * population(m, p);
            }
        }
        acc * scale
    });
    let shifts = (1..d as i64)
        .map(|k| {
            CMatrix::from_fn(d, d, |i, j| {
                let (i, j) = (i as i64, j as i64);
                c.at(i - j, j + k) * c.at(i - j, j).conj()
            })
        })
        .collect();
    CorrBlockSet {
        norm,
        diagonal,
        shifts,
    }
}

pub fn corr_blocks(a: &AlphaMatrix, norm: BasisNorm) -> CorrBlockSet {
    corr_blocks_from_coeffs(&FourierCoeffs::from_alpha(a), norm)
}

/// Singular values of the correlation matrix as the union over its blocks.
pub fn kappa3(a: &AlphaMatrix, norm: BasisNorm) -> Result<RealMultiset> {
    kappa3_from_blocks(&corr_blocks(a, norm))
}

pub fn kappa3_from_blocks(r: &CorrBlockSet) -> Result<RealMultiset> {
    let parts = r
        .blocks()
        .map(singular_values)
        .collect::<Result<Vec<_>>>()?;
    Ok(RealMultiset::union(&parts))
}
