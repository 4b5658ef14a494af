//! Parameter matrices whose state has maximally mixed marginals.
//!
//! A `d x d` complex matrix `α` is admissible when
//!
//! * `Σ_ij |α_ij|² = 1`, and
//! * for every shift `l = 1..d-1`, both `Σ_ij α_{i,j+l} α*_ij` and
//!   `Σ_ij α_{i,j+l} α*_ij ω^{-il}` vanish (column index taken mod `d`,
//!   `ω = exp(2πi/d)`).

use std::f64::consts::TAU;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{ensure_finite, ensure_square, CMatrix};

pub const VALIDATION_TOL: f64 = 1e-10;

/// Primitive `d`-th root of unity `exp(2πi/d)` raised to `power`.
pub fn omega_pow(d: usize, power: i64) -> Complex64 {
    let k = power.rem_euclid(d as i64) as f64;
    Complex64::from_polar(1.0, TAU * k / d as f64)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ShiftResidual {
    pub shift: usize,
    /// `|Σ_ij α_{i,j+l} α*_ij|`
    pub plain: f64,
    /// `|Σ_ij α_{i,j+l} α*_ij ω^{-il}|`
    pub twisted: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConstraintResidual {
    pub norm_residual: f64,
    pub shift_residuals: Vec<ShiftResidual>,
}

impl ConstraintResidual {
    pub fn max(&self) -> f64 {
        self.shift_residuals
            .iter()
            .flat_map(|s| [s.plain, s.twisted])
            .fold(self.norm_residual, f64::max)
    }

    pub fn within(&self, tol: f64) -> bool {
        self.max() <= tol
    }
}

fn ensure_alpha_shape(m: &CMatrix) -> Result<usize> {
    ensure_square(m)?;
    ensure_finite(m)?;
    let d = m.nrows();
    if d < 2 {
        return Err(Error::DimensionTooSmall(d));
    }
    Ok(d)
}

/// Normalization defect and both shifted autocorrelation sums for every shift.
pub fn residuals(m: &CMatrix) -> Result<ConstraintResidual> {
    let d = ensure_alpha_shape(m)?;
    let norm: f64 = m.iter().map(|z| z.norm_sqr()).sum();
    let shift_residuals = (1..d)
        .map(|l| {
            let mut plain = Complex64::new(0.0, 0.0);
            let mut twisted = Complex64::new(0.0, 0.0);
            for i in 0..d {
                let mut row = Complex64::new(0.0, 0.0);
                for j in 0..d {
                    row += m[(i, (j + l) % d)] * m[(i, j)].conj();
                }
                plain += row;
                twisted += row * omega_pow(d, -((i * l) as i64));
            }
            ShiftResidual {
                shift: l,
                plain: plain.norm(),
                twisted: twisted.norm(),
            }
        })
        .collect();
    Ok(ConstraintResidual {
        norm_residual: (norm - 1.0).abs(),
        shift_residuals,
    })
}

/// A parameter matrix that has passed [`validate`] (or was explicitly
/// admitted with [`AlphaMatrix::new_unchecked`]).
#[derive(Debug, Clone, PartialEq)]
pub struct AlphaMatrix {
    alpha: CMatrix,
}

impl AlphaMatrix {
    /// Wraps a matrix without checking the constraints. Shape and
    /// finiteness are still enforced. Downstream results are only
    /// meaningful for admissible matrices.
    pub fn new_unchecked(alpha: CMatrix) -> Result<Self> {
        ensure_alpha_shape(&alpha)?;
        Ok(Self { alpha })
    }

    pub fn d(&self) -> usize {
        self.alpha.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.alpha
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.alpha[(i, j)]
    }

    pub fn residuals(&self) -> ConstraintResidual {
        residuals(&self.alpha).expect("shape checked on construction")
    }

    /// Same matrix times a global phase `exp(iφ)`.
    pub fn with_global_phase(&self, phase: f64) -> Self {
        Self {
            alpha: &self.alpha * Complex64::from_polar(1.0, phase),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Validation {
    Accepted(AlphaMatrix),
    Rejected(ConstraintResidual),
}

impl Validation {
    pub fn accepted(self) -> Option<AlphaMatrix> {
        match self {
            Validation::Accepted(a) => Some(a),
            Validation::Rejected(_) => None,
        }
    }

    pub fn is_accepted(&self) -> bool {
        matches!(self, Validation::Accepted(_))
    }
}

/// Accepts `m` iff every residual is at most `tol`. A violated constraint
/// is reported as [`Validation::Rejected`]; malformed input is an error.
pub fn validate(m: &CMatrix, tol: f64) -> Result<Validation> {
    let res = residuals(m)?;
    if res.within(tol) {
        Ok(Validation::Accepted(AlphaMatrix { alpha: m.clone() }))
    } else {
        Ok(Validation::Rejected(res))
    }
}

/// Coordinates on the two-parameter qutrit family, both reduced to `[0, 2π)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QutritFamilyParams {
    theta: f64,
    phi: f64,
}

fn reduce_angle(x: f64) -> f64 {
    let r = x.rem_euclid(TAU);
    // rem_euclid can round up to exactly TAU for tiny negative inputs
    if r >= TAU {
        0.0
    } else {
        r
    }
}

impl QutritFamilyParams {
    pub fn new(theta: f64, phi: f64) -> Result<Self> {
        if !theta.is_finite() || !phi.is_finite() {
            return Err(Error::Malformed(format!(
                "family angles must be finite, got ({theta}, {phi})"
            )));
        }
        Ok(Self {
            theta: reduce_angle(theta),
            phi: reduce_angle(phi),
        })
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }
}

/// The qutrit family: prefactor `√2/6`, first column all `2`, second column
/// `e^{i(θ - 2πr/3)}` and third column `e^{i(θ + φ - 2π(3-r)/3)}` for row
/// `r` (third column of row 0 is `e^{i(θ+φ)}`).
pub fn qutrit_family(p: QutritFamilyParams) -> AlphaMatrix {
    let third = TAU / 3.0;
    let (t, f) = (p.theta, p.phi);
    let e = |x: f64| Complex64::from_polar(1.0, x);
    let rows = [
        [Complex64::new(2.0, 0.0), e(t), e(t + f)],
        [
            Complex64::new(2.0, 0.0),
            e(t - third),
            e(t + f - 2.0 * third),
        ],
        [
            Complex64::new(2.0, 0.0),
            e(t - 2.0 * third),
            e(t + f - third),
        ],
    ];
    let pref = std::f64::consts::SQRT_2 / 6.0;
    AlphaMatrix {
        alpha: CMatrix::from_fn(3, 3, |i, j| rows[i][j] * pref),
    }
}

/// Fixed admissible parameter matrices used as fixtures.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NamedExample {
    /// Single unit entry at `(0, 0)`: the maximally entangled pure state.
    BellSeed,
    /// `I / √d`.
    UniformDiagonal,
    /// Row 0 holds `ω^{j²} / √d`, everything else zero. Odd `d` only.
    GaussPhase,
}

impl NamedExample {
    pub const ALL: [NamedExample; 3] = [
        NamedExample::BellSeed,
        NamedExample::UniformDiagonal,
        NamedExample::GaussPhase,
    ];

    pub fn name(self) -> &'static str {
        match self {
            NamedExample::BellSeed => "bell-seed",
            NamedExample::UniformDiagonal => "uniform-diagonal",
            NamedExample::GaussPhase => "gauss-phase",
        }
    }

    pub fn supports(self, d: usize) -> bool {
        d >= 2 && (self != NamedExample::GaussPhase || d % 2 == 1)
    }
}

impl fmt::Display for NamedExample {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for NamedExample {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        NamedExample::ALL
            .into_iter()
            .find(|e| e.name() == s)
            .ok_or_else(|| Error::UnknownExample(s.to_string()))
    }
}

pub fn named_example(example: NamedExample, d: usize) -> Result<AlphaMatrix> {
    if d < 2 {
        return Err(Error::DimensionTooSmall(d));
    }
    if !example.supports(d) {
        return Err(Error::ExampleUnavailable {
            name: example.name(),
            d,
        });
    }
    let inv_sqrt = 1.0 / (d as f64).sqrt();
    let alpha = match example {
        NamedExample::BellSeed => {
            let mut m = CMatrix::zeros(d, d);
            m[(0, 0)] = Complex64::new(1.0, 0.0);
            m
        }
        NamedExample::UniformDiagonal => CMatrix::identity(d, d) * Complex64::new(inv_sqrt, 0.0),
        NamedExample::GaussPhase => {
            let mut m = CMatrix::zeros(d, d);
            for j in 0..d {
                m[(0, j)] = omega_pow(d, (j * j) as i64) * inv_sqrt;
            }
            m
        }
    };
    Ok(AlphaMatrix { alpha })
}

/// On-disk form: `{"d": int, "alpha": [[[re, im], ...], ...]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AlphaFile {
    pub d: usize,
    pub alpha: Vec<Vec<[f64; 2]>>,
}

impl AlphaFile {
    pub fn from_matrix(m: &CMatrix) -> Self {
        Self {
            d: m.nrows(),
            alpha: crate::io::matrix_to_rows(m),
        }
    }

    /// Rejects ragged arrays and a `d` that disagrees with the array shape.
    pub fn to_matrix(&self) -> Result<CMatrix> {
        let m = crate::io::rows_to_matrix(&self.alpha)?;
        if m.nrows() != self.d {
            return Err(Error::Malformed(format!(
                "declared d = {} but alpha is {}x{}",
                self.d,
                m.nrows(),
                m.ncols()
            )));
        }
        ensure_alpha_shape(&m)?;
        Ok(m)
    }
}

pub fn parse_alpha_json(text: &str) -> Result<CMatrix> {
    let file: AlphaFile =
        serde_json::from_str(text).map_err(|e| Error::Malformed(e.to_string()))?;
    file.to_matrix()
}
