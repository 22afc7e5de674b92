use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use super::Subset;
use crate::error::GeometryError;
use crate::rational::{frac, format_q, parse_q, Q};

/// A point of `C^n` in exact polar form. Radii are nonnegative rationals and angles are
/// rational numbers of turns in `[0, 1)`, kept only where the radius is positive.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SkeletonPoint {
    radii: Vec<Q>,
    angles: Vec<Option<Q>>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct PointJson {
    pub r: Vec<String>,
    /// One entry per coordinate; ignored (and may be `null`) where the radius vanishes.
    #[serde(default)]
    pub theta: Vec<Option<String>>,
}

impl SkeletonPoint {
    /// Angles are reduced mod 1 and dropped where the radius is zero.
    pub fn new(radii: Vec<Q>, angles: Vec<Q>) -> Result<Self, GeometryError> {
        if radii.len() != angles.len() {
            return Err(GeometryError::BadPoint("radii and angles differ in length".into()));
        }
        if radii.is_empty() {
            return Err(GeometryError::ZeroDimension);
        }
        if radii.iter().any(Signed::is_negative) {
            return Err(GeometryError::BadPoint("negative radius".into()));
        }
        let angles = radii
            .iter()
            .zip(angles)
            .map(|(r, t)| if r.is_zero() { None } else { Some(frac(&t)) })
            .collect();
        Ok(SkeletonPoint { radii, angles })
    }

    /// All angles zero.
    pub fn real(radii: Vec<Q>) -> Result<Self, GeometryError> {
        let n = radii.len();
        Self::new(radii, vec![Q::zero(); n])
    }

    pub fn n(&self) -> usize {
        self.radii.len()
    }

    pub fn radii(&self) -> &[Q] {
        &self.radii
    }

    pub fn angle(&self, a: usize) -> Option<&Q> {
        self.angles[a].as_ref()
    }

    /// Angle with `0` substituted where undefined.
    pub fn angle_or_zero(&self, a: usize) -> Q {
        self.angles[a].clone().unwrap_or_else(Q::zero)
    }

    pub fn min_radius(&self) -> Q {
        self.radii.iter().min().cloned().expect("n ≥ 1")
    }

    /// `I_m`: indices of minimal radius.
    pub fn minimal_indices(&self) -> Subset {
        let m = self.min_radius();
        (0..self.n()).filter(|&a| self.radii[a] == m).collect()
    }

    /// `r_1 ⋯ r_n`.
    pub fn radius_product(&self) -> Q {
        self.radii.iter().product()
    }

    /// Scales all radii by a positive rational.
    pub fn scaled(&self, c: &Q) -> Self {
        SkeletonPoint {
            radii: self.radii.iter().map(|r| r * c).collect(),
            angles: self.angles.clone(),
        }
    }

    pub fn to_json(&self) -> PointJson {
        PointJson {
            r: self.radii.iter().map(format_q).collect(),
            theta: self.angles.iter().map(|t| t.as_ref().map(format_q)).collect(),
        }
    }

    pub fn from_json(j: &PointJson) -> Result<Self, GeometryError> {
        let bad = |e: crate::error::ParseError| GeometryError::BadPoint(e.to_string());
        let radii = j.r.iter().map(|s| parse_q(s).map_err(bad)).collect::<Result<Vec<_>, _>>()?;
        let angles = if j.theta.is_empty() {
            vec![Q::zero(); radii.len()]
        } else {
            j.theta
                .iter()
                .map(|t| t.as_deref().map(parse_q).transpose().map(|x| x.unwrap_or_else(Q::zero)).map_err(bad))
                .collect::<Result<Vec<_>, _>>()?
        };
        Self::new(radii, angles)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum StratumKind {
    /// `𝔍L₀`.
    ZeroFiber,
    /// `𝔍L^×(θ)`; `theta` in turns.
    Open { theta: String },
    NotOnSkeleton { reason: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct StratumDescriptor {
    #[serde(flatten)]
    pub kind: StratumKind,
    /// 1-based; empty off the skeleton.
    pub subset: Vec<usize>,
    pub codim: Option<usize>,
}

impl StratumDescriptor {
    pub fn on_skeleton(&self) -> bool {
        !matches!(self.kind, StratumKind::NotOnSkeleton { .. })
    }
}

/// Locates `p` in `L(Θ) = L₀ ∪ ∐_{θ∈Θ} L^×(θ)`, with `Θ` given in turns.
pub fn classify_point(p: &SkeletonPoint, thetas: &[Q]) -> StratumDescriptor {
    let n = p.n();
    let im = p.minimal_indices();
    let off = |reason: String| StratumDescriptor {
        kind: StratumKind::NotOnSkeleton { reason },
        subset: vec![],
        codim: None,
    };
    if let Some(b) = (0..n).find(|b| !im.contains(b) && !p.angle_or_zero(*b).is_zero()) {
        return off(format!("θ_{} ≠ 0 but {} ∉ I_m", b + 1, b + 1));
    }
    let subset: Vec<usize> = im.iter().map(|a| a + 1).collect();
    if p.min_radius().is_zero() {
        return StratumDescriptor {
            kind: StratumKind::ZeroFiber,
            codim: Some(n + im.len()),
            subset,
        };
    }
    let total = frac(&(0..n).map(|a| p.angle_or_zero(a)).sum::<Q>());
    match thetas.iter().find(|t| frac(t) == total) {
        Some(t) => StratumDescriptor {
            kind: StratumKind::Open { theta: format_q(&frac(t)) },
            subset,
            codim: Some(n),
        },
        None => off(format!("Σθ_a = {} is not in Θ", format_q(&total))),
    }
}
