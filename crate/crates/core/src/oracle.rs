//! Brute-force verification of Birkhoff-James orthogonality straight from
//! its definition: `f ⊥ g` iff `||f + λ g|| >= ||f||` for every scalar `λ`.
//!
//! `λ ↦ ||f + λ g||` is convex, and for `|λ| > R = 2||f|| / ||g||` it
//! exceeds `|λ| ||g|| - ||f|| > ||f||`, so the global minimum lies in the
//! disk of radius `R`. Real spaces search `[-R, R]` with a 257-point grid
//! refined by golden-section search around the best grid point. Complex
//! spaces scan a 65×65 grid of the square `[-R, R]²` and then run a nested
//! golden-section search: the inner search minimises over the imaginary
//! part, and the outer search minimises the resulting function of the real
//! part, which is again convex.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::space::{
    check_exponent, norm, Field, FunctionVec, MeasureSpace, Scalar, SpaceKind, Tolerances,
};

pub const REAL_GRID: usize = 257;
pub const COMPLEX_GRID: usize = 65;
const GOLDEN_MAX_ITER: usize = 200;
const REAL_WIDTH_TOL: f64 = 1e-13;
const COMPLEX_WIDTH_TOL: f64 = 1e-11;
const INV_PHI: f64 = 0.618_033_988_749_894_8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OracleVerdict {
    Orthogonal,
    NotOrthogonal,
    MarginBand,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleResult {
    pub min_norm: f64,
    #[serde(with = "crate::report::scalar")]
    pub argmin: Scalar,
    pub base_norm: f64,
    pub verdict: OracleVerdict,
    pub evaluations: u64,
}

impl OracleResult {
    fn trivial(base_norm: f64) -> Self {
        Self {
            min_norm: base_norm,
            argmin: Scalar::new(0.0, 0.0),
            base_norm,
            verdict: OracleVerdict::Orthogonal,
            evaluations: 0,
        }
    }

    /// `1 - min_norm / base_norm`, zero for the zero function.
    pub fn relative_drop(&self) -> f64 {
        if self.base_norm == 0.0 {
            0.0
        } else {
            1.0 - self.min_norm / self.base_norm
        }
    }
}

pub fn classify_minimum(min_norm: f64, base_norm: f64, margin: f64) -> OracleVerdict {
    if min_norm >= base_norm * (1.0 - margin) {
        OracleVerdict::Orthogonal
    } else if min_norm < base_norm * (1.0 - 10.0 * margin) {
        OracleVerdict::NotOrthogonal
    } else {
        OracleVerdict::MarginBand
    }
}

/// `λ ↦ ||f + λ g||` in a form cheap enough for tens of thousands of calls.
/// For Lp the p-th power is minimised and converted back at the end.
struct Objective<'a> {
    weights: Vec<f64>,
    f: &'a [Scalar],
    g: &'a [Scalar],
    kind: SpaceKind,
    evaluations: u64,
}

impl<'a> Objective<'a> {
    fn new(space: &MeasureSpace, kind: SpaceKind, f: &'a FunctionVec, g: &'a FunctionVec) -> Self {
        Self { weights: space.weights().collect(), f: f.values(), g: g.values(), kind, evaluations: 0 }
    }

    fn eval(&mut self, lambda: Scalar) -> f64 {
        self.evaluations += 1;
        let terms = self.f.iter().zip(self.g).map(|(a, b)| (a + lambda * b).norm_sqr());
        match self.kind {
            SpaceKind::Sup => terms.fold(0.0, f64::max),
            SpaceKind::L1 => terms.zip(&self.weights).map(|(s, w)| w * s.sqrt()).sum(),
            SpaceKind::Lp { p } => terms.zip(&self.weights).map(|(s, w)| w * pow_half(s, p)).sum(),
        }
    }

    /// Converts an objective value to a norm.
    fn to_norm(&self, v: f64) -> f64 {
        match self.kind {
            SpaceKind::Sup => v.sqrt(),
            SpaceKind::L1 => v,
            SpaceKind::Lp { p } => {
                if v == 0.0 {
                    0.0
                } else {
                    v.powf(1.0 / p)
                }
            }
        }
    }
}

/// `s^(p/2)` for `s = |z|^2 >= 0`.
fn pow_half(s: f64, p: f64) -> f64 {
    if s == 0.0 {
        0.0
    } else if p == 2.0 {
        s
    } else if p == 3.0 {
        s * s.sqrt()
    } else if p == 4.0 {
        s * s
    } else {
        s.powf(0.5 * p)
    }
}

/// Golden-section search for the minimum of a convex function on `[a, b]`.
fn golden<F: FnMut(f64) -> f64>(mut a: f64, mut b: f64, width: f64, mut h: F) -> (f64, f64) {
    let mut x1 = b - INV_PHI * (b - a);
    let mut x2 = a + INV_PHI * (b - a);
    let mut h1 = h(x1);
    let mut h2 = h(x2);
    for _ in 0..GOLDEN_MAX_ITER {
        if b - a <= width {
            break;
        }
        if h1 <= h2 {
            b = x2;
            x2 = x1;
            h2 = h1;
            x1 = b - INV_PHI * (b - a);
            h1 = h(x1);
        } else {
            a = x1;
            x1 = x2;
            h1 = h2;
            x2 = a + INV_PHI * (b - a);
            h2 = h(x2);
        }
    }
    if h1 <= h2 {
        (x1, h1)
    } else {
        (x2, h2)
    }
}

fn minimize_real(obj: &mut Objective<'_>, radius: f64) -> (Scalar, f64) {
    let step = 2.0 * radius / (REAL_GRID - 1) as f64;
    let at = |i: usize| -radius + step * i as f64;
    let mut best = (REAL_GRID / 2, obj.eval(Scalar::new(0.0, 0.0)));
    for i in (0..REAL_GRID).filter(|&i| i != REAL_GRID / 2) {
        let v = obj.eval(Scalar::new(at(i), 0.0));
        if v < best.1 {
            best = (i, v);
        }
    }
    let lo = at(best.0.saturating_sub(1));
    let hi = at((best.0 + 1).min(REAL_GRID - 1));
    let (x, v) = golden(lo, hi, REAL_WIDTH_TOL * radius, |x| obj.eval(Scalar::new(x, 0.0)));
    if v < best.1 {
        (Scalar::new(x, 0.0), v)
    } else {
        (Scalar::new(at(best.0), 0.0), best.1)
    }
}

fn minimize_complex(obj: &mut Objective<'_>, radius: f64) -> (Scalar, f64) {
    let step = 2.0 * radius / (COMPLEX_GRID - 1) as f64;
    let at = |i: usize| -radius + step * i as f64;
    let mut best = (Scalar::new(0.0, 0.0), obj.eval(Scalar::new(0.0, 0.0)));
    for i in 0..COMPLEX_GRID {
        for j in 0..COMPLEX_GRID {
            let lambda = Scalar::new(at(i), at(j));
            let v = obj.eval(lambda);
            if v < best.1 {
                best = (lambda, v);
            }
        }
    }

    let width = COMPLEX_WIDTH_TOL * 2.0 * radius;
    let mut inner_best = best;
    let (_, _) = golden(-radius, radius, width, |re| {
        let (im, v) = golden(-radius, radius, width, |im| obj.eval(Scalar::new(re, im)));
        if v < inner_best.1 {
            inner_best = (Scalar::new(re, im), v);
        }
        v
    });
    inner_best
}

/// Decides `f ⊥ g` by minimising `||f + λ g||` over the scalar field of
/// `space`.
pub fn oracle_orthogonal(
    space: &MeasureSpace,
    kind: SpaceKind,
    f: &FunctionVec,
    g: &FunctionVec,
    tol: &Tolerances,
) -> Result<OracleResult> {
    space.check(f)?;
    space.check(g)?;
    if let SpaceKind::Lp { p } = kind {
        check_exponent(p)?;
    }
    let base = norm(space, kind, f)?;
    let g_norm = norm(space, kind, g)?;
    if base == 0.0 || g_norm == 0.0 {
        return Ok(OracleResult::trivial(base));
    }
    let radius = 2.0 * base / g_norm;
    let mut obj = Objective::new(space, kind, f, g);
    let (argmin, value) = match space.field() {
        Field::Real => minimize_real(&mut obj, radius),
        Field::Complex => minimize_complex(&mut obj, radius),
    };
    let min_norm = obj.to_norm(value).min(base);
    Ok(OracleResult {
        min_norm,
        argmin,
        base_norm: base,
        verdict: classify_minimum(min_norm, base, tol.oracle_margin),
        evaluations: obj.evaluations,
    })
}

/// Values of `λ ↦ ||f + λ g||` along a real line through the origin of the
/// λ-plane, sampled at `n` points of `[-radius, radius]`.
pub fn profile(
    space: &MeasureSpace,
    kind: SpaceKind,
    f: &FunctionVec,
    g: &FunctionVec,
    direction: Scalar,
    radius: f64,
    n: usize,
) -> Result<Vec<f64>> {
    space.check(f)?;
    space.check(g)?;
    let mut obj = Objective::new(space, kind, f, g);
    let step = 2.0 * radius / (n.max(2) - 1) as f64;
    Ok((0..n)
        .map(|i| {
            let v = obj.eval(direction * (-radius + step * i as f64));
            obj.to_norm(v)
        })
        .collect())
}

/// A seeded random test instance.
#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    pub space: MeasureSpace,
    pub f: FunctionVec,
    pub g: FunctionVec,
}

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Seed for trial `index` of a run started from `seed`.
pub fn derive_seed(seed: u64, index: u64) -> u64 {
    // splitmix64 finaliser
    let mut z = seed ^ index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn random_scalar<R: Rng + ?Sized>(rng: &mut R, field: Field) -> Scalar {
    let re: f64 = rng.sample(StandardNormal);
    match field {
        Field::Real => Scalar::new(re, 0.0),
        Field::Complex => Scalar::new(re, rng.sample(StandardNormal)),
    }
}

pub fn random_function<R: Rng + ?Sized>(rng: &mut R, n: usize, field: Field) -> FunctionVec {
    FunctionVec::from_raw((0..n).map(|_| random_scalar(rng, field)).collect())
}

pub fn random_space<R: Rng + ?Sized>(
    rng: &mut R,
    n: usize,
    field: Field,
    weight_range: (f64, f64),
) -> Result<MeasureSpace> {
    let (lo, hi) = weight_range;
    if !(lo > 0.0 && hi >= lo && hi.is_finite()) {
        return Err(Error::Domain(format!("invalid weight range [{lo}, {hi}]")));
    }
    let weights: Vec<f64> = (0..n)
        .map(|_| if lo == hi { lo } else { (rng.random_range(lo.ln()..hi.ln())).exp() })
        .collect();
    MeasureSpace::from_weights(&weights, field)
}

/// Zeroes a random nonempty subset of atoms.
pub fn zero_some<R: Rng + ?Sized>(rng: &mut R, f: &FunctionVec) -> FunctionVec {
    let n = f.len();
    let forced = rng.random_range(0..n);
    let values = f
        .iter()
        .enumerate()
        .map(|(i, &z)| if i == forced || rng.random_bool(0.5) { Scalar::new(0.0, 0.0) } else { z })
        .collect();
    FunctionVec::from_raw(values)
}

/// Deterministic random `(space, f, g)`: weights log-uniform, values
/// standard normal per component, and with probability 0.3 one of the two
/// functions gets deliberate zeros.
pub fn random_instance(
    seed: u64,
    dim_range: (usize, usize),
    field: Field,
    weight_range: (f64, f64),
) -> Result<Instance> {
    let (lo, hi) = dim_range;
    if lo == 0 || hi < lo {
        return Err(Error::Domain(format!("invalid dimension range [{lo}, {hi}]")));
    }
    let mut rng = rng_from_seed(seed);
    let n = rng.random_range(lo..=hi);
    let space = random_space(&mut rng, n, field, weight_range)?;
    let mut f = random_function(&mut rng, n, field);
    let mut g = random_function(&mut rng, n, field);
    if rng.random_bool(0.3) {
        if rng.random_bool(0.5) {
            f = zero_some(&mut rng, &f);
        } else {
            g = zero_some(&mut rng, &g);
        }
    }
    Ok(Instance { space, f, g })
}

/// A direction `g` with `f ⊥ g`, built per space family.
#[derive(Debug, Clone, PartialEq)]
pub struct OrthogonalDirection {
    pub g: FunctionVec,
    /// Set when only the zero vector is orthogonal to `f` (one-atom space).
    pub degenerate: bool,
}

/// Random `g` annihilated by a support functional of `f`, verified by the
/// analytic criterion of `kind`.
pub fn orthogonal_direction(
    space: &MeasureSpace,
    kind: SpaceKind,
    f: &FunctionVec,
    seed: u64,
    tol: &Tolerances,
) -> Result<OrthogonalDirection> {
    let criterion = crate::strategy::criterion_for(kind)?;
    let mut rng = rng_from_seed(seed);
    criterion.orthogonal_direction(space, f, &mut rng, tol)
}
