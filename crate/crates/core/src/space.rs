//! Finite atomic measure spaces, functions on them and the three norm
//! families (sup, L1, Lp).
//!
//! Every atom carries a strictly positive weight, so "almost everywhere"
//! statements reduce to "on every atom". Values are stored as complex
//! numbers in both fields; in a real space the imaginary parts are zero.

use std::collections::HashSet;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A value of the scalar field. Real spaces keep `im == 0`.
pub type Scalar = Complex64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Field {
    Real,
    Complex,
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Real => f.write_str("real"),
            Field::Complex => f.write_str("complex"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Atom {
    pub id: String,
    pub weight: f64,
}

/// A finite measure space: an ordered list of weighted atoms plus the
/// scalar field functions on it take values in.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasureSpace {
    atoms: Vec<Atom>,
    field: Field,
}

impl MeasureSpace {
    pub fn new(atoms: Vec<Atom>, field: Field) -> Result<Self> {
        if atoms.is_empty() {
            return Err(Error::InvalidSpace("at least one atom is required".into()));
        }
        let mut seen = HashSet::with_capacity(atoms.len());
        for atom in &atoms {
            if !(atom.weight.is_finite() && atom.weight > 0.0) {
                return Err(Error::InvalidSpace(format!(
                    "atom `{}` has weight {}, weights must be finite and positive",
                    atom.id, atom.weight
                )));
            }
            if !seen.insert(atom.id.as_str()) {
                return Err(Error::InvalidSpace(format!("duplicate atom id `{}`", atom.id)));
            }
        }
        Ok(Self { atoms, field })
    }

    /// Atoms named `a0, a1, ...` with the given weights.
    pub fn from_weights(weights: &[f64], field: Field) -> Result<Self> {
        let atoms = weights
            .iter()
            .enumerate()
            .map(|(i, &weight)| Atom { id: format!("a{i}"), weight })
            .collect();
        Self::new(atoms, field)
    }

    pub fn uniform(n: usize, field: Field) -> Result<Self> {
        Self::from_weights(&vec![1.0; n], field)
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn weight(&self, i: usize) -> f64 {
        self.atoms[i].weight
    }

    pub fn weights(&self) -> impl Iterator<Item = f64> + '_ {
        self.atoms.iter().map(|a| a.weight)
    }

    /// Same atoms with every weight multiplied by `c > 0`.
    pub fn rescaled(&self, c: f64) -> Result<Self> {
        let atoms = self
            .atoms
            .iter()
            .map(|a| Atom { id: a.id.clone(), weight: a.weight * c })
            .collect();
        Self::new(atoms, self.field)
    }

    /// Atoms reordered so that atom `i` of the result is atom `perm[i]` here.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        if perm.len() != self.len() {
            return Err(Error::Alignment { expected: self.len(), got: perm.len() });
        }
        Self::new(perm.iter().map(|&i| self.atoms[i].clone()).collect(), self.field)
    }

    /// Checks that `f` is aligned with this space and admissible for its field.
    pub fn check(&self, f: &FunctionVec) -> Result<()> {
        if f.len() != self.len() {
            return Err(Error::Alignment { expected: self.len(), got: f.len() });
        }
        if self.field == Field::Real {
            if let Some(i) = f.values().iter().position(|z| z.im != 0.0) {
                return Err(Error::Domain(format!(
                    "atom {i} has a non-zero imaginary part in a real space"
                )));
            }
        }
        Ok(())
    }
}

/// Values of a function on the atoms of a space, index-aligned with
/// [`MeasureSpace::atoms`].
#[derive(Debug, Clone, PartialEq, Default)]
pub struct FunctionVec(Vec<Scalar>);

impl FunctionVec {
    pub fn new(values: Vec<Scalar>) -> Result<Self> {
        if let Some(i) = values.iter().position(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(Error::NonFinite(i));
        }
        Ok(Self(values))
    }

    pub fn real(values: &[f64]) -> Result<Self> {
        Self::new(values.iter().map(|&x| Scalar::new(x, 0.0)).collect())
    }

    pub fn zeros(n: usize) -> Self {
        Self(vec![Scalar::new(0.0, 0.0); n])
    }

    pub(crate) fn from_raw(values: Vec<Scalar>) -> Self {
        debug_assert!(values.iter().all(|z| z.re.is_finite() && z.im.is_finite()));
        Self(values)
    }

    pub fn values(&self) -> &[Scalar] {
        &self.0
    }

    pub fn into_values(self) -> Vec<Scalar> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|z| z.re == 0.0 && z.im == 0.0)
    }

    pub fn get(&self, i: usize) -> Scalar {
        self.0[i]
    }

    pub fn iter(&self) -> impl Iterator<Item = &Scalar> {
        self.0.iter()
    }

    pub fn scale(&self, alpha: Scalar) -> Self {
        Self::from_raw(self.0.iter().map(|z| z * alpha).collect())
    }

    /// `self + lambda * other`.
    pub fn axpy(&self, lambda: Scalar, other: &FunctionVec) -> Self {
        assert_eq!(self.len(), other.len());
        Self::from_raw(self.0.iter().zip(&other.0).map(|(a, b)| a + lambda * b).collect())
    }

    pub fn add(&self, other: &FunctionVec) -> Self {
        self.axpy(Scalar::new(1.0, 0.0), other)
    }

    pub fn permuted(&self, perm: &[usize]) -> Self {
        Self::from_raw(perm.iter().map(|&i| self.0[i]).collect())
    }

    /// Indices of atoms where the function is exactly zero.
    pub fn zero_set(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| is_zero(self.0[i])).collect()
    }

    /// Indices of atoms where the function is non-zero.
    pub fn support(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| !is_zero(self.0[i])).collect()
    }
}

impl From<FunctionVec> for Vec<Scalar> {
    fn from(f: FunctionVec) -> Self {
        f.0
    }
}

pub(crate) fn is_zero(z: Scalar) -> bool {
    z.re == 0.0 && z.im == 0.0
}

/// Which norm, and therefore which family of criteria, governs a space.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum SpaceKind {
    Sup,
    L1,
    Lp { p: f64 },
}

impl SpaceKind {
    pub fn lp(p: f64) -> Result<Self> {
        check_exponent(p)?;
        Ok(SpaceKind::Lp { p })
    }

    pub fn name(&self) -> &'static str {
        match self {
            SpaceKind::Sup => "sup",
            SpaceKind::L1 => "l1",
            SpaceKind::Lp { .. } => "lp",
        }
    }
}

impl fmt::Display for SpaceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpaceKind::Lp { p } => write!(f, "lp(p={p})"),
            other => f.write_str(other.name()),
        }
    }
}

pub(crate) fn check_exponent(p: f64) -> Result<()> {
    if p.is_finite() && p > 1.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!("exponent p = {p} must satisfy 1 < p < inf")))
    }
}

/// Numerical slack used by the analytic criteria and the oracle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Relative slack for norm attainment: `|f(a)| >= ||f|| (1 - rel_attain)`.
    pub rel_attain: f64,
    /// Absolute fattening of the origin-in-hull test after normalisation.
    pub hull_eps: f64,
    /// Relative margin separating the oracle's verdicts.
    pub oracle_margin: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self { rel_attain: 1e-9, hull_eps: 1e-12, oracle_margin: 1e-7 }
    }
}

impl Tolerances {
    pub fn validate(&self) -> Result<()> {
        let ok = |x: f64| x.is_finite() && x > 0.0;
        if !(ok(self.rel_attain) && ok(self.hull_eps) && ok(self.oracle_margin)) {
            return Err(Error::Tolerances(format!("all tolerances must be positive: {self:?}")));
        }
        if self.rel_attain >= 1.0 {
            return Err(Error::Tolerances(format!("rel_attain = {} must be < 1", self.rel_attain)));
        }
        Ok(())
    }
}

/// `z / |z|`, and exactly zero at zero.
pub fn sgn(z: Scalar) -> Scalar {
    if is_zero(z) {
        Scalar::new(0.0, 0.0)
    } else {
        z / z.norm()
    }
}

/// Hölder conjugate `q = p / (p - 1)`.
pub fn conjugate_exponent(p: f64) -> Result<f64> {
    check_exponent(p)?;
    Ok(p / (p - 1.0))
}

/// `x^e` for `x >= 0` and `e > 0`, with `0^e` pinned to zero.
pub(crate) fn abs_pow(x: f64, e: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else if e == 1.0 {
        x
    } else {
        x.powf(e)
    }
}

pub fn norm(space: &MeasureSpace, kind: SpaceKind, f: &FunctionVec) -> Result<f64> {
    if f.len() != space.len() {
        return Err(Error::Alignment { expected: space.len(), got: f.len() });
    }
    Ok(match kind {
        SpaceKind::Sup => sup_norm(f),
        SpaceKind::L1 => l1_norm(space, f),
        SpaceKind::Lp { p } => {
            check_exponent(p)?;
            lp_norm(space, f, p)
        }
    })
}

pub(crate) fn sup_norm(f: &FunctionVec) -> f64 {
    f.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub(crate) fn l1_norm(space: &MeasureSpace, f: &FunctionVec) -> f64 {
    space.weights().zip(f.iter()).map(|(w, z)| w * z.norm()).sum()
}

/// `sum_a w_a |f(a)|^p`, the p-th power of the Lp norm.
pub(crate) fn lp_mass(space: &MeasureSpace, f: &FunctionVec, p: f64) -> f64 {
    space.weights().zip(f.iter()).map(|(w, z)| w * abs_pow(z.norm(), p)).sum()
}

pub(crate) fn lp_norm(space: &MeasureSpace, f: &FunctionVec, p: f64) -> f64 {
    let mass = lp_mass(space, f, p);
    if mass == 0.0 {
        0.0
    } else {
        abs_pow(mass, 1.0 / p)
    }
}
