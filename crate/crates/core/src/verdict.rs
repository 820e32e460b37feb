//! Verdicts, classification results and witnesses shared by every space
//! family.

use serde::Serialize;

use crate::error::Result;
use crate::oracle::{oracle_orthogonal, OracleResult, OracleVerdict};
use crate::space::{FunctionVec, MeasureSpace, Scalar, SpaceKind, Tolerances};

/// Norm-attaining atoms of a sup-norm function.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AttainSet {
    pub indices: Vec<usize>,
    /// `||f|| (1 - rel_attain)`; zero for the zero function.
    pub threshold: f64,
    pub zero_function: bool,
}

impl AttainSet {
    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.indices.contains(&i)
    }
}

/// Both sides of the L1 orthogonality inequality.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct L1Evidence {
    #[serde(with = "crate::report::scalar")]
    pub pairing: Scalar,
    pub zero_mass: f64,
    pub zero_set: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LpEvidence {
    #[serde(with = "crate::report::scalar")]
    pub pairing: Scalar,
    pub p: f64,
    pub support_atoms: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Evidence {
    /// `f = 0` is orthogonal to everything.
    ZeroFunction,
    Hull {
        attain: AttainSet,
        #[serde(serialize_with = "crate::report::scalars::serialize")]
        points: Vec<Scalar>,
    },
    L1(L1Evidence),
    Lp(LpEvidence),
}

/// Result of an analytic orthogonality test `f ⊥ g`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Verdict {
    pub orthogonal: bool,
    pub evidence: Evidence,
}

#[derive(Debug, Clone, PartialEq, Serialize, Default)]
pub struct SymmetryEvidence {
    pub zero_function: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub attain: Option<AttainSet>,
    pub support: Vec<usize>,
    pub zero_set: Vec<usize>,
    /// Per-atom masses `w |f|` (L1) or `w |f|^p` (Lp).
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub masses: Vec<f64>,
    /// Set for p = 2, where every point is symmetric.
    pub hilbert: bool,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SymmetryVerdict {
    pub is_smooth: bool,
    pub is_left_symmetric: bool,
    pub is_right_symmetric: bool,
    pub evidence: SymmetryEvidence,
}

impl SymmetryVerdict {
    pub fn is_symmetric(&self, side: Side) -> bool {
        match side {
            Side::Left => self.is_left_symmetric,
            Side::Right => self.is_right_symmetric,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    /// `f ⊥ g` but not `g ⊥ f`.
    Left,
    /// `g ⊥ f` but not `f ⊥ g`.
    Right,
}

/// A vector `g` certifying that `f` is not left- (resp. right-) symmetric,
/// together with the oracle runs in both directions.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Witness {
    pub side: Side,
    #[serde(serialize_with = "crate::report::function::serialize")]
    pub g: FunctionVec,
    pub construction: String,
    /// Oracle for `f ⊥ g`.
    pub forward: OracleResult,
    /// Oracle for `g ⊥ f`.
    pub reverse: OracleResult,
}

impl Witness {
    /// Runs the oracle both ways on a candidate `g` and keeps it only if
    /// it certifies asymmetry on `side`.
    pub fn verify(
        space: &MeasureSpace,
        kind: SpaceKind,
        f: &FunctionVec,
        g: FunctionVec,
        side: Side,
        construction: impl Into<String>,
        tol: &Tolerances,
    ) -> Result<Option<Self>> {
        let forward = oracle_orthogonal(space, kind, f, &g, tol)?;
        let reverse = oracle_orthogonal(space, kind, &g, f, tol)?;
        let w = Self { side, g, construction: construction.into(), forward, reverse };
        Ok(w.is_valid().then_some(w))
    }

    /// Orthogonal one way and clearly not orthogonal the other.
    pub fn is_valid(&self) -> bool {
        let (holds, fails) = match self.side {
            Side::Left => (&self.forward, &self.reverse),
            Side::Right => (&self.reverse, &self.forward),
        };
        holds.verdict == OracleVerdict::Orthogonal && fails.verdict == OracleVerdict::NotOrthogonal
    }
}

/// `f ⊥ g`, `f ⊥ h` but not `f ⊥ (g + h)`: certifies that `f` is not
/// smooth.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AdditivityWitness {
    #[serde(serialize_with = "crate::report::function::serialize")]
    pub g: FunctionVec,
    #[serde(serialize_with = "crate::report::function::serialize")]
    pub h: FunctionVec,
    pub construction: String,
    pub oracle_g: OracleResult,
    pub oracle_h: OracleResult,
    pub oracle_sum: OracleResult,
}

impl AdditivityWitness {
    pub fn verify(
        space: &MeasureSpace,
        kind: SpaceKind,
        f: &FunctionVec,
        g: FunctionVec,
        h: FunctionVec,
        construction: impl Into<String>,
        tol: &Tolerances,
    ) -> Result<Option<Self>> {
        let oracle_g = oracle_orthogonal(space, kind, f, &g, tol)?;
        let oracle_h = oracle_orthogonal(space, kind, f, &h, tol)?;
        let oracle_sum = oracle_orthogonal(space, kind, f, &g.add(&h), tol)?;
        let w = Self { g, h, construction: construction.into(), oracle_g, oracle_h, oracle_sum };
        Ok(w.is_valid().then_some(w))
    }

    pub fn is_valid(&self) -> bool {
        self.oracle_g.verdict == OracleVerdict::Orthogonal
            && self.oracle_h.verdict == OracleVerdict::Orthogonal
            && self.oracle_sum.verdict == OracleVerdict::NotOrthogonal
    }
}
