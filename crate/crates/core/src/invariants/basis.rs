use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::alpha::omega_pow;
use crate::error::Error;
use crate::linalg::CMatrix;

/// Normalization of the traceless operator basis.
///
/// The shift elements `|i+k⟩⟨i|` already have unit Hilbert–Schmidt norm;
/// the diagonal elements `Σ_m ω^{im} |m⟩⟨m|` have norm `√d`.
/// [`BasisNorm::Raw`] keeps them as they are, [`BasisNorm::Orthonormal`]
/// divides them by `√d`. Only the orthonormal choice yields singular values
/// that are invariant under local unitaries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
pub enum BasisNorm {
    #[serde(rename = "paper-raw")]
    Raw,
    #[default]
    #[serde(rename = "hs-orthonormal")]
    Orthonormal,
}

impl BasisNorm {
    pub fn name(self) -> &'static str {
        match self {
            BasisNorm::Raw => "paper-raw",
            BasisNorm::Orthonormal => "hs-orthonormal",
        }
    }

    /// Factor applied to each diagonal element.
    pub fn diagonal_scale(self, d: usize) -> f64 {
        match self {
            BasisNorm::Raw => 1.0,
            BasisNorm::Orthonormal => 1.0 / (d as f64).sqrt(),
        }
    }
}

impl fmt::Display for BasisNorm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for BasisNorm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "paper-raw" | "raw" => Ok(BasisNorm::Raw),
            "hs-orthonormal" | "hs" => Ok(BasisNorm::Orthonormal),
            other => Err(Error::Malformed(format!("unknown basis mode `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BasisLabel {
    /// `Σ_m ω^{im} |m⟩⟨m|`, `i = 1..d-1`.
    Diagonal { i: usize },
    /// `|i+k⟩⟨i|`, `k = 1..d-1`, `i = 0..d-1`.
    Shift { k: usize, i: usize },
}

impl BasisLabel {
    /// Sector index: 0 for diagonal elements, `k` for shifts.
    pub fn sector(self) -> usize {
        match self {
            BasisLabel::Diagonal { .. } => 0,
            BasisLabel::Shift { k, .. } => k,
        }
    }
}

/// The `d² - 1` traceless basis elements, diagonal ones first, then shifts
/// ordered by `k` and within a sector by `i`.
#[derive(Debug, Clone)]
pub struct OperatorBasis {
    d: usize,
    norm: BasisNorm,
    elements: Vec<(BasisLabel, CMatrix)>,
}

impl OperatorBasis {
    pub fn new(d: usize, norm: BasisNorm) -> Self {
        let scale = norm.diagonal_scale(d);
        let mut elements = Vec::with_capacity(d * d - 1);
        for i in 1..d {
            let mut m = CMatrix::zeros(d, d);
            for idx in 0..d {
                m[(idx, idx)] = omega_pow(d, (i * idx) as i64) * scale;
            }
            elements.push((BasisLabel::Diagonal { i }, m));
        }
        for k in 1..d {
            for i in 0..d {
                let mut m = CMatrix::zeros(d, d);
                m[((i + k) % d, i)] = Complex64::new(1.0, 0.0);
                elements.push((BasisLabel::Shift { k, i }, m));
            }
        }
        Self { d, norm, elements }
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn norm(&self) -> BasisNorm {
        self.norm
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn labels(&self) -> impl Iterator<Item = BasisLabel> + '_ {
        self.elements.iter().map(|(l, _)| *l)
    }

    pub fn matrices(&self) -> impl Iterator<Item = &CMatrix> + '_ {
        self.elements.iter().map(|(_, m)| m)
    }

    pub fn element(&self, index: usize) -> &CMatrix {
        &self.elements[index].1
    }
}
