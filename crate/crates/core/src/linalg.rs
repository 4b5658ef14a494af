//! Dense complex matrix primitives.
//!
//! Everything here works on [`CMatrix`] (a dynamically sized
//! `nalgebra` matrix of `Complex64`). Bipartite operators on `C^d ⊗ C^d`
//! use the composite index `a * d + b`, with `a` the first (A) register.

use nalgebra::{DMatrix, SymmetricEigen, SVD};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use crate::error::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;

/// Largest tolerated `max |m - m^H|` before a matrix is rejected as non-Hermitian.
pub const HERMITICITY_TOL: f64 = 1e-10;

/// Default tolerance for comparing two multisets of invariants.
pub const MULTISET_TOL: f64 = 1e-8;

/// A sorted collection of reals compared elementwise after sorting.
#[derive(Debug, Clone, PartialEq, Default, Serialize)]
#[serde(transparent)]
pub struct RealMultiset {
    values: Vec<f64>,
}

impl RealMultiset {
    pub fn new(mut values: Vec<f64>) -> Self {
        values.sort_by(f64::total_cmp);
        Self { values }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn sum(&self) -> f64 {
        self.values.iter().sum()
    }

    pub fn min(&self) -> Option<f64> {
        self.values.first().copied()
    }

    pub fn max(&self) -> Option<f64> {
        self.values.last().copied()
    }

    /// Largest elementwise gap between the two sorted lists; infinite when
    /// the cardinalities differ.
    pub fn max_deviation(&self, other: &RealMultiset) -> f64 {
        if self.len() != other.len() {
            return f64::INFINITY;
        }
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    pub fn approx_eq(&self, other: &RealMultiset, tol: f64) -> bool {
        self.max_deviation(other) <= tol
    }

    /// The `n` largest values, still sorted ascending.
    pub fn largest(&self, n: usize) -> RealMultiset {
        let start = self.len().saturating_sub(n);
        RealMultiset {
            values: self.values[start..].to_vec(),
        }
    }

    pub fn union<'a, I: IntoIterator<Item = &'a RealMultiset>>(parts: I) -> RealMultiset {
        RealMultiset::new(
            parts
                .into_iter()
                .flat_map(|p| p.values.iter().copied())
                .collect(),
        )
    }
}

impl FromIterator<f64> for RealMultiset {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        RealMultiset::new(iter.into_iter().collect())
    }
}

/// Register of a bipartite system.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subsystem {
    A,
    B,
}

pub fn ensure_finite(m: &CMatrix) -> Result<()> {
    if m.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
        Ok(())
    } else {
        Err(Error::NonFinite)
    }
}

pub fn ensure_square(m: &CMatrix) -> Result<()> {
    if m.is_square() {
        Ok(())
    } else {
        Err(Error::NotSquare {
            rows: m.nrows(),
            cols: m.ncols(),
        })
    }
}

/// Checks that `rho` acts on `C^d ⊗ C^d`.
pub fn ensure_bipartite(rho: &CMatrix, d: usize) -> Result<()> {
    let n = d * d;
    if rho.nrows() != n || rho.ncols() != n {
        return Err(Error::DimensionMismatch {
            d,
            expected: n,
            rows: rho.nrows(),
            cols: rho.ncols(),
        });
    }
    Ok(())
}

/// `max |a_ij - b_ij|`.
pub fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    assert_eq!(a.shape(), b.shape(), "shape mismatch in max_abs_diff");
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

pub fn hermiticity_defect(m: &CMatrix) -> f64 {
    max_abs_diff(m, &m.adjoint())
}

pub fn trace(m: &CMatrix) -> Complex64 {
    m.diagonal().iter().sum()
}

/// All eigenvalues of a Hermitian matrix, with multiplicity.
///
/// Inputs within [`HERMITICITY_TOL`] of Hermitian are symmetrized as
/// `(m + m^H) / 2` before the solve; anything further off is rejected.
pub fn eig_hermitian(m: &CMatrix) -> Result<RealMultiset> {
    ensure_square(m)?;
    ensure_finite(m)?;
    let defect = hermiticity_defect(m);
    if defect > HERMITICITY_TOL {
        return Err(Error::NotHermitian {
            defect,
            tol: HERMITICITY_TOL,
        });
    }
    let sym = (m + m.adjoint()) * Complex64::new(0.5, 0.0);
    let eig = SymmetricEigen::new(sym);
    Ok(eig.eigenvalues.iter().copied().collect())
}

/// Eigenvalues of a general square complex matrix, read off the diagonal
/// of its complex Schur form.
pub fn eig_general(m: &CMatrix) -> Result<Vec<Complex64>> {
    ensure_square(m)?;
    ensure_finite(m)?;
    if m.nrows() == 1 {
        return Ok(vec![m[(0, 0)]]);
    }
    let (_, t) = m.clone().schur().unpack();
    Ok(t.diagonal().iter().copied().collect())
}

pub fn singular_values(m: &CMatrix) -> Result<RealMultiset> {
    ensure_finite(m)?;
    let svd = SVD::new(m.clone(), false, false);
    Ok(svd.singular_values.iter().copied().collect())
}

/// Traces out `subsystem` from a state on `C^d ⊗ C^d`, leaving a `d x d` matrix.
pub fn partial_trace(rho: &CMatrix, d: usize, subsystem: Subsystem) -> Result<CMatrix> {
    ensure_bipartite(rho, d)?;
    let out = match subsystem {
        Subsystem::B => CMatrix::from_fn(d, d, |a, c| {
            (0..d).map(|b| rho[(a * d + b, c * d + b)]).sum()
        }),
        Subsystem::A => CMatrix::from_fn(d, d, |b, e| {
            (0..d).map(|a| rho[(a * d + b, a * d + e)]).sum()
        }),
    };
    Ok(out)
}

/// Transpose on the B register: `<a,b| rho^T_B |c,e> = <a,e| rho |c,b>`.
pub fn partial_transpose(rho: &CMatrix, d: usize) -> Result<CMatrix> {
    ensure_bipartite(rho, d)?;
    Ok(CMatrix::from_fn(d * d, d * d, |row, col| {
        let (a, b) = (row / d, row % d);
        let (c, e) = (col / d, col % d);
        rho[(a * d + e, c * d + b)]
    }))
}

pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

/// `(U ⊗ V) rho (U ⊗ V)^H`.
pub fn local_conjugate(rho: &CMatrix, u: &CMatrix, v: &CMatrix) -> CMatrix {
    let w = kron(u, v);
    &w * rho * w.adjoint()
}

/// Special unitary drawn from a generator: complex Gaussian matrix,
/// QR with the phases of `R`'s diagonal folded back into `Q`, then a
/// global phase so that `det = 1`.
pub fn random_special_unitary_from<R: Rng + ?Sized>(rng: &mut R, d: usize) -> Result<CMatrix> {
    if d < 2 {
        return Err(Error::DimensionTooSmall(d));
    }
    let scale = std::f64::consts::FRAC_1_SQRT_2;
    let z = CMatrix::from_fn(d, d, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        Complex64::new(re * scale, im * scale)
    });
    let qr = z.qr();
    let r = qr.r();
    let mut q = qr.q();
    for (j, mut col) in q.column_iter_mut().enumerate() {
        let rjj = r[(j, j)];
        let n = rjj.norm();
        if n > 0.0 {
            col *= rjj / n;
        }
    }
    let det = q.determinant();
    let fix = Complex64::from_polar(1.0, -det.arg() / d as f64);
    Ok(q * fix)
}

/// Deterministic special unitary for a given seed.
pub fn random_special_unitary(d: usize, seed: u64) -> Result<CMatrix> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_special_unitary_from(&mut rng, d)
}
