//! Rank-`d` bipartite states built from admissible parameter matrices.
//!
//! With Fourier coefficients `c_{i,k} = d^{-1/2} Σ_j α_ij ω^{jk}` the state is
//!
//! ```text
//! ρ = Σ_{i,k,l} c_{i,k} c*_{i,l} |k+i, k⟩⟨l+i, l|
//! ```
//!
//! i.e. a sum of `d` rank-one terms `|ψ_i⟩⟨ψ_i|` supported on the disjoint
//! "diagonals" `a - b ≡ i (mod d)`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::alpha::{omega_pow, AlphaMatrix};
use crate::error::{Error, Result};
use crate::linalg::{
    self, ensure_bipartite, ensure_finite, hermiticity_defect, max_abs_diff, partial_trace, trace,
    CMatrix, Subsystem,
};

pub const TRACE_TOL: f64 = 1e-10;
pub const PSD_TOL: f64 = 1e-10;
pub const MARGINAL_TOL: f64 = 1e-10;
pub const RANK_THRESHOLD: f64 = 1e-9;

#[inline]
pub(crate) fn wrap(i: i64, d: usize) -> usize {
    i.rem_euclid(d as i64) as usize
}

/// `c_{i,k}` for all `i, k ∈ Z_d`.
#[derive(Debug, Clone, PartialEq)]
pub struct FourierCoeffs {
    c: CMatrix,
}

impl FourierCoeffs {
    pub fn from_alpha(a: &AlphaMatrix) -> Self {
        Self::with_prefactor(a, 1.0 / (a.d() as f64).sqrt())
    }

    /// Same transform with an arbitrary prefactor in place of `d^{-1/2}`.
    pub fn with_prefactor(a: &AlphaMatrix, prefactor: f64) -> Self {
        let d = a.d();
        let c = CMatrix::from_fn(d, d, |i, k| {
            let s: Complex64 = (0..d)
                .map(|j| a.get(i, j) * omega_pow(d, (j * k) as i64))
                .sum();
            s * prefactor
        });
        Self { c }
    }

    pub fn d(&self) -> usize {
        self.c.nrows()
    }

    /// `c_{i,k}` with both indices reduced mod `d`.
    #[inline]
    pub fn at(&self, i: i64, k: i64) -> Complex64 {
        let d = self.d();
        self.c[(wrap(i, d), wrap(k, d))]
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.c
    }

    pub fn total_weight(&self) -> f64 {
        self.c.iter().map(|z| z.norm_sqr()).sum()
    }
}

/// Density matrix on `C^d ⊗ C^d`, composite index `a * d + b`.
#[derive(Debug, Clone, PartialEq)]
pub struct BipartiteState {
    d: usize,
    rho: CMatrix,
}

impl BipartiteState {
    /// Shape and finiteness only; physical properties are checked by [`certify`].
    pub fn new(d: usize, rho: CMatrix) -> Result<Self> {
        if d < 2 {
            return Err(Error::DimensionTooSmall(d));
        }
        ensure_bipartite(&rho, d)?;
        ensure_finite(&rho)?;
        Ok(Self { d, rho })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn rho(&self) -> &CMatrix {
        &self.rho
    }

    pub fn into_rho(self) -> CMatrix {
        self.rho
    }

    /// `(U ⊗ V) ρ (U ⊗ V)^H`.
    pub fn local_conjugate(&self, u: &CMatrix, v: &CMatrix) -> BipartiteState {
        BipartiteState {
            d: self.d,
            rho: linalg::local_conjugate(&self.rho, u, v),
        }
    }

    pub fn maximally_mixed(d: usize) -> Result<Self> {
        let n = d * d;
        Self::new(
            d,
            CMatrix::identity(n, n) * Complex64::new(1.0 / n as f64, 0.0),
        )
    }
}

pub fn build_state(a: &AlphaMatrix) -> BipartiteState {
    let d = a.d();
    let c = FourierCoeffs::from_alpha(a);
    let mut rho = CMatrix::zeros(d * d, d * d);
    for i in 0..d {
        for k in 0..d {
            let row = ((k + i) % d) * d + k;
            let ck = c.c[(i, k)];
            for l in 0..d {
                let col = ((l + i) % d) * d + l;
                rho[(row, col)] += ck * c.c[(i, l)].conj();
            }
        }
    }
    BipartiteState { d, rho }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Shear {
    /// `|a, b⟩ → |a + b, b⟩`; block-diagonalizes the partial transpose.
    Plus,
    /// `|a, b⟩ → |a − b, b⟩`; block-diagonalizes the state itself.
    Minus,
}

pub fn shear_unitary(d: usize, sign: Shear) -> CMatrix {
    let mut p = CMatrix::zeros(d * d, d * d);
    for a in 0..d {
        for b in 0..d {
            let target = match sign {
                Shear::Plus => (a + b) % d,
                Shear::Minus => (a + d - b) % d,
            };
            p[(target * d + b, a * d + b)] = Complex64::new(1.0, 0.0);
        }
    }
    p
}

/// `d x d` diagonal block `index` of a `d² x d²` matrix.
pub fn diagonal_block(m: &CMatrix, d: usize, index: usize) -> CMatrix {
    m.view((index * d, index * d), (d, d)).into_owned()
}

/// Largest entry outside the `d` diagonal `d x d` blocks.
pub fn off_block_magnitude(m: &CMatrix, d: usize) -> f64 {
    let mut worst: f64 = 0.0;
    for r in 0..d * d {
        for c in 0..d * d {
            if r / d != c / d {
                worst = worst.max(m[(r, c)].norm());
            }
        }
    }
    worst
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Certificate {
    pub hermiticity_defect: f64,
    pub trace_defect: f64,
    pub min_eigenvalue: f64,
    pub marginal_defect_a: f64,
    pub marginal_defect_b: f64,
    pub rank: usize,
}

impl Certificate {
    /// Human-readable list of violated properties; empty when the state
    /// is a density matrix with maximally mixed marginals.
    pub fn violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        if self.hermiticity_defect > linalg::HERMITICITY_TOL {
            out.push(format!("hermiticity defect {:e}", self.hermiticity_defect));
        }
        if self.trace_defect > TRACE_TOL {
            out.push(format!("trace defect {:e}", self.trace_defect));
        }
        if self.min_eigenvalue < -PSD_TOL {
            out.push(format!("negative eigenvalue {:e}", self.min_eigenvalue));
        }
        if self.marginal_defect_a > MARGINAL_TOL || self.marginal_defect_b > MARGINAL_TOL {
            out.push(format!(
                "marginal defects {:e} / {:e}",
                self.marginal_defect_a, self.marginal_defect_b
            ));
        }
        out
    }

    pub fn is_valid(&self) -> bool {
        self.violations().is_empty()
    }
}

pub fn certify(s: &BipartiteState) -> Certificate {
    let d = s.d;
    let rho = &s.rho;
    let sym = (rho + rho.adjoint()) * Complex64::new(0.5, 0.0);
    let spectrum = linalg::eig_hermitian(&sym).expect("symmetrized finite square matrix");
    let target = CMatrix::identity(d, d) * Complex64::new(1.0 / d as f64, 0.0);
    let marginal = |sys| {
        let m = partial_trace(rho, d, sys).expect("shape checked on construction");
        max_abs_diff(&m, &target)
    };
    Certificate {
        hermiticity_defect: hermiticity_defect(rho),
        trace_defect: (trace(rho) - Complex64::new(1.0, 0.0)).norm(),
        min_eigenvalue: spectrum.min().unwrap_or(0.0),
        marginal_defect_a: marginal(Subsystem::A),
        marginal_defect_b: marginal(Subsystem::B),
        rank: spectrum
            .values()
            .iter()
            .filter(|&&x| x > RANK_THRESHOLD)
            .count(),
    }
}

/// On-disk form: `{"d": int, "rho": [[[re, im], ...], ...]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StateFile {
    pub d: usize,
    pub rho: Vec<Vec<[f64; 2]>>,
}

impl StateFile {
    pub fn from_state(s: &BipartiteState) -> Self {
        Self {
            d: s.d,
            rho: crate::io::matrix_to_rows(&s.rho),
        }
    }

    pub fn to_state(&self) -> Result<BipartiteState> {
        BipartiteState::new(self.d, crate::io::rows_to_matrix(&self.rho)?)
    }
}
