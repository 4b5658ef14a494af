//! Closed-form invariants of the two-parameter qutrit family and the
//! negativity sweep over `[0, 2π)²`.
//!
//! The `kappa3` expressions are evaluated literally. Some of them have a
//! negative radicand on parts of the parameter plane; those entries come
//! back as [`ClosedValue::NegativeRadicand`] instead of being clamped.

use std::f64::consts::{PI, TAU};
use std::io::{self, Write};

use serde::Serialize;

use crate::alpha::{qutrit_family, QutritFamilyParams};
use crate::error::{Error, Result};
use crate::invariants::{kappa3, negativity, BasisNorm};
use crate::io::fmt_sig12;
use crate::linalg::RealMultiset;
use crate::par::{map_range, Exec};

/// The nine partial-transpose eigenvalues:
/// `(4 + 2cos(φ + 2πi/3))/18`, `(1 + 4cos(θ + 2πi/3))/18`,
/// `(1 + 4cos(θ + φ + 4πi/3))/18` for `i = 0, 1, 2`.
pub fn kappa2_closed(p: QutritFamilyParams) -> RealMultiset {
    let (t, f) = (p.theta(), p.phi());
    let mut values = Vec::with_capacity(9);
    for i in 0..3 {
        values.push((4.0 + 2.0 * (f + TAU * i as f64 / 3.0).cos()) / 18.0);
    }
    for i in 0..3 {
        values.push((1.0 + 4.0 * (t + TAU * i as f64 / 3.0).cos()) / 18.0);
    }
    for i in 0..3 {
        values.push((1.0 + 4.0 * (t + f + 2.0 * TAU * i as f64 / 3.0).cos()) / 18.0);
    }
    RealMultiset::new(values)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ClosedValue {
    Value { value: f64 },
    NegativeRadicand { radicand: f64 },
}

impl ClosedValue {
    pub fn value(self) -> Option<f64> {
        match self {
            ClosedValue::Value { value } => Some(value),
            ClosedValue::NegativeRadicand { .. } => None,
        }
    }
}

/// Radicand `9 - 4cos(θ-φ+s) - 8cos(-2θ-φ+s) - 4cos(θ+2φ+s)` for phase shift `s`.
pub fn kappa3_radicand(p: QutritFamilyParams, shift: f64) -> f64 {
    let (t, f) = (p.theta(), p.phi());
    9.0 - 4.0 * (t - f + shift).cos()
        - 8.0 * (-2.0 * t - f + shift).cos()
        - 4.0 * (t + 2.0 * f + shift).cos()
}

/// Phase shifts of the three radical expressions, in order.
pub const KAPPA3_SHIFTS: [f64; 3] = [0.0, PI / 3.0, -PI / 3.0];

/// The eight literal correlation singular values: `1/6` twice, then each
/// radical expression `√radicand / 18` twice.
pub fn kappa3_closed(p: QutritFamilyParams) -> Vec<ClosedValue> {
    let mut out = vec![ClosedValue::Value { value: 1.0 / 6.0 }; 2];
    for shift in KAPPA3_SHIFTS {
        let r = kappa3_radicand(p, shift);
        let v = if r < 0.0 {
            ClosedValue::NegativeRadicand { radicand: r }
        } else {
            ClosedValue::Value {
                value: r.sqrt() / 18.0,
            }
        };
        out.extend([v, v]);
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct QutritClosedForms {
    pub kappa1: [f64; 3],
    pub kappa2: RealMultiset,
    pub kappa3: Vec<ClosedValue>,
}

impl QutritClosedForms {
    pub fn at(p: QutritFamilyParams) -> Self {
        Self {
            kappa1: [1.0 / 3.0; 3],
            kappa2: kappa2_closed(p),
            kappa3: kappa3_closed(p),
        }
    }

    pub fn purity(&self) -> f64 {
        self.kappa1.iter().map(|x| x * x).sum()
    }

    pub fn negativity(&self) -> f64 {
        negativity(&self.kappa2)
    }
}

/// How the literal `kappa3` expressions fare against the computed singular values.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Kappa3Check {
    pub theta: f64,
    pub phi: f64,
    pub mode: BasisNorm,
    pub negative_radicands: usize,
    /// Per expression: its value occurs among the computed singular values.
    pub matched: Vec<bool>,
    /// All expressions defined and equal to the computed multiset.
    pub multiset_agrees: bool,
}

pub fn check_kappa3_closed(
    p: QutritFamilyParams,
    mode: BasisNorm,
    tol: f64,
) -> Result<Kappa3Check> {
    let closed = kappa3_closed(p);
    let computed = kappa3(&qutrit_family(p), mode)?;
    let matched: Vec<bool> = closed
        .iter()
        .map(|c| {
            c.value()
                .is_some_and(|v| computed.values().iter().any(|&x| (x - v).abs() <= tol))
        })
        .collect();
    let defined: Option<Vec<f64>> = closed.iter().map(|c| c.value()).collect();
    let multiset_agrees =
        defined.is_some_and(|vals| RealMultiset::new(vals).approx_eq(&computed, tol));
    Ok(Kappa3Check {
        theta: p.theta(),
        phi: p.phi(),
        mode,
        negative_radicands: closed.iter().filter(|c| c.value().is_none()).count() / 2,
        matched,
        multiset_agrees,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GridPoint {
    pub theta: f64,
    pub phi: f64,
    pub negativity: f64,
}

/// `k`-th of `resolution` equally spaced angles in `[0, 2π)`.
pub fn grid_angle(k: usize, resolution: usize) -> f64 {
    TAU * k as f64 / resolution as f64
}

/// Negativity on the `resolution x resolution` grid, `theta` major.
pub fn negativity_grid(resolution: usize, exec: Exec) -> Result<Vec<GridPoint>> {
    if resolution < 2 {
        return Err(Error::Malformed(format!(
            "grid resolution must be at least 2, got {resolution}"
        )));
    }
    let rows = map_range(resolution, exec, |i| {
        let theta = grid_angle(i, resolution);
        (0..resolution)
            .map(|j| {
                let phi = grid_angle(j, resolution);
                let p = QutritFamilyParams::new(theta, phi).expect("grid angles are finite");
                GridPoint {
                    theta,
                    phi,
                    negativity: negativity(&kappa2_closed(p)),
                }
            })
            .collect::<Vec<_>>()
    });
    Ok(rows.into_iter().flatten().collect())
}

/// First point (in grid order) attaining the maximum negativity.
pub fn grid_argmax(points: &[GridPoint]) -> Option<GridPoint> {
    points.iter().copied().fold(None, |best, p| match best {
        Some(b) if b.negativity >= p.negativity => Some(b),
        _ => Some(p),
    })
}

pub fn write_grid_csv<W: Write>(points: &[GridPoint], mut out: W) -> io::Result<()> {
    writeln!(out, "theta,phi,negativity")?;
    for p in points {
        writeln!(
            out,
            "{},{},{}",
            fmt_sig12(p.theta),
            fmt_sig12(p.phi),
            fmt_sig12(p.negativity)
        )?;
    }
    out.flush()
}
