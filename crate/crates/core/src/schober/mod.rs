//! Perverse sheaves on the disk as quiver data, the monodromy ledger of the `A_τ` objects, and
//! the diagram category `𝓜(r)`.

mod diagram;

pub use diagram::{diagram_hom_dims, diagram_hom_dims_with_cap, DiagramJson, SchoberDiagram};

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{ParseError, SchoberError};
use crate::exactalg::RatMatrix;
use crate::lbcx::LBComplex;
use crate::rational::{floor_i64, format_q, parse_q, Q};

/// `Φ ⇄ Ψ` with `p: Φ → Ψ` and `q: Ψ → Φ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PerverseDiskDatum {
    pub phi: usize,
    pub psi: usize,
    pub p: RatMatrix,
    pub q: RatMatrix,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct PerverseJson {
    pub phi: usize,
    pub psi: usize,
    pub p: Vec<Vec<String>>,
    pub q: Vec<Vec<String>>,
}

impl PerverseDiskDatum {
    pub fn new(p: RatMatrix, q: RatMatrix) -> Result<Self, SchoberError> {
        let (psi, phi) = (p.rows(), p.cols());
        if q.rows() != phi || q.cols() != psi {
            return Err(SchoberError::Shape {
                p_rows: p.rows(),
                p_cols: p.cols(),
                q_rows: q.rows(),
                q_cols: q.cols(),
            });
        }
        Ok(PerverseDiskDatum { phi, psi, p, q })
    }

    /// `m_Φ = 1 − qp`.
    pub fn m_phi(&self) -> RatMatrix {
        &RatMatrix::identity(self.phi) - &(&self.q * &self.p)
    }

    /// `m_Ψ = 1 − pq`.
    pub fn m_psi(&self) -> RatMatrix {
        &RatMatrix::identity(self.psi) - &(&self.p * &self.q)
    }

    pub fn to_json(&self) -> PerverseJson {
        PerverseJson {
            phi: self.phi,
            psi: self.psi,
            p: self.p.to_strings(),
            q: self.q.to_strings(),
        }
    }

    pub fn from_json(j: &PerverseJson) -> Result<Self, SchoberError> {
        let p = RatMatrix::from_strings(j.psi, j.phi, &j.p).map_err(|e| SchoberError::Diagram(e.to_string()))?;
        let q = RatMatrix::from_strings(j.phi, j.psi, &j.q).map_err(|e| SchoberError::Diagram(e.to_string()))?;
        Self::new(p, q)
    }
}

/// Both monodromies must be invertible.
pub fn check_perverse(d: &PerverseDiskDatum) -> Result<(), SchoberError> {
    if d.m_phi().determinant().is_zero() {
        return Err(SchoberError::SingularMonodromy("Φ"));
    }
    if d.m_psi().determinant().is_zero() {
        return Err(SchoberError::SingularMonodromy("Ψ"));
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Monodromies {
    pub m_phi: RatMatrix,
    pub m_psi: RatMatrix,
    pub m_phi_inv: RatMatrix,
    pub m_psi_inv: RatMatrix,
}

pub fn monodromies(d: &PerverseDiskDatum) -> Result<Monodromies, SchoberError> {
    let m_phi = d.m_phi();
    let m_psi = d.m_psi();
    let m_phi_inv = m_phi.inverse().ok_or(SchoberError::SingularMonodromy("Φ"))?;
    let m_psi_inv = m_psi.inverse().ok_or(SchoberError::SingularMonodromy("Ψ"))?;
    Ok(Monodromies {
        m_phi,
        m_psi,
        m_phi_inv,
        m_psi_inv,
    })
}

/// No sections supported at the origin iff `p` is injective.
pub fn has_no_origin_sections(d: &PerverseDiskDatum) -> bool {
    d.p.rank() == d.phi
}

/// `A_τ` tracked by its angle. Angles are measured in turns, so `τ = 1` is a full loop `2π`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MonodromyLedgerEntry {
    pub tau: Q,
    /// `⌊τ⌋`.
    pub winding: i64,
    /// `τ − ⌊τ⌋ ∈ [0, 1)`.
    pub theta: Q,
    /// `2·winding`.
    pub shift: i64,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct LedgerJson {
    pub tau: String,
    pub winding: i64,
    pub theta: String,
    pub shift: i64,
}

impl MonodromyLedgerEntry {
    pub fn new(tau: Q) -> Self {
        let winding = floor_i64(&tau);
        let theta = &tau - Q::from_integer(winding.into());
        MonodromyLedgerEntry {
            tau,
            winding,
            theta,
            shift: 2 * winding,
        }
    }

    /// `A_0 = k_e`.
    pub fn unit() -> Self {
        Self::new(Q::zero())
    }

    pub fn parse(s: &str) -> Result<Self, ParseError> {
        Ok(Self::new(parse_q(s)?))
    }

    pub fn inverse(&self) -> Self {
        Self::new(-&self.tau)
    }

    pub fn is_full_loop(&self) -> bool {
        self.theta.is_zero()
    }

    pub fn to_json(&self) -> LedgerJson {
        LedgerJson {
            tau: format_q(&self.tau),
            winding: self.winding,
            theta: format_q(&self.theta),
            shift: self.shift,
        }
    }
}

/// `A_{τ1} ⋆ A_{τ2} = A_{τ1+τ2}`.
pub fn ledger_compose(a: &MonodromyLedgerEntry, b: &MonodromyLedgerEntry) -> MonodromyLedgerEntry {
    MonodromyLedgerEntry::new(&a.tau + &b.tau)
}

/// Tensoring with `O(twist)` followed by the shift `[shift]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CoherentTwist {
    pub twist: i64,
    pub shift: i64,
}

impl CoherentTwist {
    pub fn apply(&self, g: &LBComplex) -> LBComplex {
        g.twist(self.twist).shift(self.shift)
    }
}

/// A full loop `τ = m` corresponds to `− ⊗ O(−m)[2m]`.
pub fn ledger_to_coherent(e: &MonodromyLedgerEntry) -> Result<CoherentTwist, SchoberError> {
    if !e.is_full_loop() {
        return Err(SchoberError::NotFullLoop(format_q(&e.tau)));
    }
    Ok(CoherentTwist {
        twist: -e.winding,
        shift: e.shift,
    })
}
