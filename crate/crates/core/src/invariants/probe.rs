use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::basis::BasisNorm;
use super::oracle::{oracle_invariants, oracle_kappa3};
use super::{block_invariants, InvariantSet};
use crate::alpha::AlphaMatrix;
use crate::error::{Error, Result};
use crate::linalg::{random_special_unitary_from, CMatrix};
use crate::par::{map_range, Exec};
use crate::state::{build_state, BipartiteState};

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct Deviations {
    pub kappa1: f64,
    pub kappa2: f64,
    pub kappa3: f64,
    pub purity: f64,
    pub negativity: f64,
}

impl Deviations {
    /// Largest of the three multiset gaps.
    pub fn max(&self) -> f64 {
        self.kappa1.max(self.kappa2).max(self.kappa3)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct ProbeDeviations {
    pub kappa1: f64,
    pub kappa2: f64,
    pub kappa3_hs: f64,
    pub kappa3_raw: f64,
    pub purity: f64,
    pub negativity: f64,
}

impl ProbeDeviations {
    fn merge(self, o: ProbeDeviations) -> ProbeDeviations {
        ProbeDeviations {
            kappa1: self.kappa1.max(o.kappa1),
            kappa2: self.kappa2.max(o.kappa2),
            kappa3_hs: self.kappa3_hs.max(o.kappa3_hs),
            kappa3_raw: self.kappa3_raw.max(o.kappa3_raw),
            purity: self.purity.max(o.purity),
            negativity: self.negativity.max(o.negativity),
        }
    }

    /// The quantities covered by the invariance contract. `kappa3_raw`
    /// is reported but not part of it.
    pub fn certified_max(&self) -> f64 {
        self.kappa1.max(self.kappa2).max(self.kappa3_hs)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProbeReport {
    pub trials: usize,
    pub seed: u64,
    pub tol: f64,
    pub max_deviation: ProbeDeviations,
    pub invariant: bool,
}

struct Reference {
    hs: InvariantSet,
    raw_kappa3: crate::linalg::RealMultiset,
}

impl Reference {
    fn of(s: &BipartiteState) -> Result<Self> {
        Ok(Self {
            hs: oracle_invariants(s, BasisNorm::Orthonormal)?,
            raw_kappa3: oracle_kappa3(s, BasisNorm::Raw)?,
        })
    }

    fn deviation_to(&self, rotated: &BipartiteState) -> Result<ProbeDeviations> {
        let other = Reference::of(rotated)?;
        let dev = self.hs.deviation(&other.hs);
        Ok(ProbeDeviations {
            kappa1: dev.kappa1,
            kappa2: dev.kappa2,
            kappa3_hs: dev.kappa3,
            kappa3_raw: self.raw_kappa3.max_deviation(&other.raw_kappa3),
            purity: dev.purity,
            negativity: dev.negativity,
        })
    }
}

/// Oracle-invariant gaps between `s` and `(U ⊗ V) s (U ⊗ V)^H`.
pub fn conjugation_deviation(
    s: &BipartiteState,
    u: &CMatrix,
    v: &CMatrix,
) -> Result<ProbeDeviations> {
    Reference::of(s)?.deviation_to(&s.local_conjugate(u, v))
}

/// Conjugates the state by `trials` random `U ⊗ V` (trial `t` draws `U`
/// then `V` from a generator seeded with `seed + t`) and records the worst
/// invariant drift.
pub fn lu_probe(
    a: &AlphaMatrix,
    trials: usize,
    seed: u64,
    tol: f64,
    exec: Exec,
) -> Result<ProbeReport> {
    let s = build_state(a);
    let d = s.d();
    let reference = Reference::of(&s)?;
    let per_trial = map_range(trials, exec, |t| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(t as u64));
        let u = random_special_unitary_from(&mut rng, d)?;
        let v = random_special_unitary_from(&mut rng, d)?;
        reference.deviation_to(&s.local_conjugate(&u, &v))
    });
    let mut worst = ProbeDeviations::default();
    for dev in per_trial {
        worst = worst.merge(dev?);
    }
    Ok(ProbeReport {
        trials,
        seed,
        tol,
        max_deviation: worst,
        invariant: worst.certified_max() < tol,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict {
    /// Some invariant differs: the states are not related by any `U ⊗ V`.
    #[serde(rename = "lu-inequivalent")]
    LuInequivalent,
    /// All invariants agree. This never certifies equivalence.
    #[serde(rename = "indistinguishable")]
    Indistinguishable,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Discrimination {
    pub verdict: Verdict,
    pub deviation: Deviations,
    pub tol: f64,
}

pub fn discriminate_sets(x: &InvariantSet, y: &InvariantSet, tol: f64) -> Discrimination {
    let deviation = x.deviation(y);
    let verdict = if deviation.max() > tol {
        Verdict::LuInequivalent
    } else {
        Verdict::Indistinguishable
    };
    Discrimination {
        verdict,
        deviation,
        tol,
    }
}

/// Compares block-path invariants (orthonormal correlation basis).
pub fn lu_discriminate(a: &AlphaMatrix, b: &AlphaMatrix, tol: f64) -> Result<Discrimination> {
    if a.d() != b.d() {
        return Err(Error::LocalDimensionsDiffer(a.d(), b.d()));
    }
    let x = block_invariants(a, BasisNorm::Orthonormal)?;
    let y = block_invariants(b, BasisNorm::Orthonormal)?;
    Ok(discriminate_sets(&x, &y, tol))
}
