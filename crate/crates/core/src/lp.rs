//! Lp spaces, `1 < p < ∞`, over finite atomic measures.
//!
//! Every non-zero `f` has exactly one support functional,
//! `h = conj(sgn f) |f|^(p-1) / ||f||_p^(p-1)`, so `f ⊥ g` iff the pairing
//! `Σ w conj(sgn f) |f|^(p-1) g` vanishes. For `p != 2`, left and right
//! symmetry coincide and hold iff `f = 0`, the support of `f` is one atom,
//! or the support is two atoms of equal mass `w |f|^p`. For `p = 2` the
//! space is a Hilbert space and every point is symmetric.

use rand::RngCore;

use crate::error::{Error, Result};
use crate::oracle::{random_function, OrthogonalDirection};
use crate::partition::unequal_split;
use crate::space::{
    abs_pow, check_exponent, lp_mass, lp_norm, sgn, FunctionVec, MeasureSpace, Scalar, SpaceKind,
    Tolerances,
};
use crate::strategy::OrthogonalityCriterion;
use crate::verdict::{
    AdditivityWitness, Evidence, LpEvidence, Side, SymmetryEvidence, SymmetryVerdict, Verdict, Witness,
};

const MASS_TOL: f64 = 1e-12;

/// `Σ w conj(sgn f) |f|^(p-1) g`.
pub fn pairing(space: &MeasureSpace, f: &FunctionVec, g: &FunctionVec, p: f64) -> Scalar {
    space
        .weights()
        .zip(f.iter().zip(g.iter()))
        .map(|(w, (&a, &b))| sgn(a).conj() * b * (w * abs_pow(a.norm(), p - 1.0)))
        .sum()
}

pub fn evidence(space: &MeasureSpace, f: &FunctionVec, g: &FunctionVec, p: f64) -> Result<LpEvidence> {
    check_exponent(p)?;
    space.check(f)?;
    space.check(g)?;
    Ok(LpEvidence { pairing: pairing(space, f, g, p), p, support_atoms: f.support() })
}

/// The unique support functional of `f != 0`, as an element of Lq.
pub fn support_functional(space: &MeasureSpace, f: &FunctionVec, p: f64) -> Result<FunctionVec> {
    check_exponent(p)?;
    space.check(f)?;
    if f.is_zero() {
        return Err(Error::Domain("the support functional is defined for f != 0 only".into()));
    }
    let scale = abs_pow(lp_norm(space, f, p), p - 1.0);
    Ok(FunctionVec::from_raw(
        f.iter().map(|&a| sgn(a).conj() * (abs_pow(a.norm(), p - 1.0) / scale)).collect(),
    ))
}

/// `f ⊥ g` iff `|pairing| <= hull_eps ||f||_p^(p-1) ||g||_p`, the Hölder
/// bound on the pairing scaled down to a tolerance.
pub fn orthogonal(space: &MeasureSpace, f: &FunctionVec, g: &FunctionVec, p: f64, tol: &Tolerances) -> Result<Verdict> {
    let ev = evidence(space, f, g, p)?;
    if f.is_zero() {
        return Ok(Verdict { orthogonal: true, evidence: Evidence::ZeroFunction });
    }
    let bound = tol.hull_eps * abs_pow(lp_norm(space, f, p), p - 1.0) * lp_norm(space, g, p);
    Ok(Verdict { orthogonal: ev.pairing.norm() <= bound, evidence: Evidence::Lp(ev) })
}

fn masses(space: &MeasureSpace, f: &FunctionVec, p: f64) -> Vec<f64> {
    space.weights().zip(f.iter()).map(|(w, z)| w * abs_pow(z.norm(), p)).collect()
}

pub fn classify(space: &MeasureSpace, f: &FunctionVec, p: f64, _tol: &Tolerances) -> Result<SymmetryVerdict> {
    check_exponent(p)?;
    space.check(f)?;
    let support = f.support();
    let zero_set = f.zero_set();
    let masses = masses(space, f, p);
    let hilbert = p == 2.0;
    let (symmetric, reason) = if support.is_empty() {
        (true, "zero function".to_string())
    } else if hilbert {
        (true, "p = 2: Hilbert space".to_string())
    } else if support.len() == 1 {
        (true, "support is a single atom".to_string())
    } else if support.len() == 2 && {
        let (a, b) = (masses[support[0]], masses[support[1]]);
        (a - b).abs() <= MASS_TOL * a.max(b)
    } {
        (true, "support is two atoms of equal mass w|f|^p".to_string())
    } else {
        (false, format!("support has {} atoms with an unequal split", support.len()))
    };
    Ok(SymmetryVerdict {
        is_smooth: true,
        is_left_symmetric: symmetric,
        is_right_symmetric: symmetric,
        evidence: SymmetryEvidence {
            zero_function: support.is_empty(),
            attain: None,
            support,
            zero_set,
            masses,
            hilbert,
            reason,
        },
    })
}

/// Builds `g = a f` on `A`, `b f` on the rest of the support, zero
/// elsewhere, where `0 < m_A < m_R` split the masses `m = w |f|^p` of the
/// support. Then the forward pairing is `a m_A + b m_R` and the reverse
/// pairing is `|a|^(p-1) sgn(a) m_A + |b|^(p-1) sgn(b) m_R`.
///
/// Left uses `a = m_R`, `b = -m_A`, killing the forward pairing; right uses
/// `a = m_R^(1/(p-1))`, `b = -m_A^(1/(p-1))`, killing the reverse one.
pub fn asymmetry_witness(
    space: &MeasureSpace,
    f: &FunctionVec,
    p: f64,
    tol: &Tolerances,
    side: Side,
) -> Result<Option<Witness>> {
    let verdict = classify(space, f, p, tol)?;
    if verdict.is_symmetric(side) {
        return Err(Error::Logic(format!("f is symmetric in L{p}, no witness exists")));
    }
    let ev = verdict.evidence;
    let atoms: Vec<(usize, f64)> = ev.support.iter().map(|&i| (i, ev.masses[i])).collect();
    let Some(part) = unequal_split(&atoms) else {
        return Ok(None);
    };
    let m_a: f64 = part.iter().map(|&i| ev.masses[i]).sum();
    let m_r: f64 = atoms.iter().map(|&(_, m)| m).sum::<f64>() - m_a;
    let (a, b) = match side {
        Side::Left => (m_r, -m_a),
        Side::Right => (abs_pow(m_r, 1.0 / (p - 1.0)), -abs_pow(m_a, 1.0 / (p - 1.0))),
    };
    let g = FunctionVec::from_raw(
        f.iter()
            .enumerate()
            .map(|(i, &z)| if part.contains(&i) { z * a } else { z * b })
            .collect(),
    );
    let construction = format!("a f on {part:?}, b f on the rest of the support (a = {a}, b = {b})");
    Witness::verify(space, SpaceKind::Lp { p }, f, g, side, construction, tol)
}

/// Random `g` projected onto the kernel of the pairing: `g - (pairing / ||f||_p^p) f`.
pub fn orthogonal_direction(
    space: &MeasureSpace,
    f: &FunctionVec,
    p: f64,
    rng: &mut dyn RngCore,
    tol: &Tolerances,
) -> Result<OrthogonalDirection> {
    check_exponent(p)?;
    space.check(f)?;
    if f.is_zero() {
        return Err(Error::Domain("orthogonal_direction needs f != 0".into()));
    }
    let n = space.len();
    if n == 1 {
        return Ok(OrthogonalDirection { g: FunctionVec::zeros(1), degenerate: true });
    }
    let r = random_function(rng, n, space.field());
    let shift = pairing(space, f, &r, p) / lp_mass(space, f, p);
    let g = r.axpy(-shift, f);
    if !orthogonal(space, f, &g, p, tol)?.orthogonal {
        return Err(Error::Logic("projected Lp direction failed the pairing test".into()));
    }
    Ok(OrthogonalDirection { g, degenerate: false })
}

/// Root of an increasing function on `[lo, hi]` by bisection, run until
/// the bracket stops shrinking in floating point.
fn bisect(mut lo: f64, mut hi: f64, mut up: impl FnMut(f64) -> f64) -> f64 {
    if up(lo) >= 0.0 {
        return lo;
    }
    if up(hi) <= 0.0 {
        return hi;
    }
    loop {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            return mid;
        }
        if up(mid) > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
}

/// The scalar `λ` minimising `||r + λ f||_p`, so that `r + λ f ⊥ f`.
///
/// The minimiser is where `pairing(r + λ f, f)` vanishes. Damped Newton
/// usually gets there; otherwise nested bisection does, since the real part
/// of the pairing increases along `Re λ` and minus the imaginary part along
/// `Im λ`.
pub fn best_approximation(space: &MeasureSpace, r: &FunctionVec, f: &FunctionVec, p: f64) -> Result<Scalar> {
    check_exponent(p)?;
    space.check(r)?;
    space.check(f)?;
    if f.is_zero() {
        return Err(Error::Domain("best approximation from the span of f = 0".into()));
    }
    if let [a] = f.support()[..] {
        return Ok(-r.get(a) / f.get(a));
    }
    let radius = 2.0 * lp_norm(space, r, p) / lp_norm(space, f, p);
    let grad = |lambda: Scalar| pairing(space, &r.axpy(lambda, f), f, p);
    // Accept Newton only if the pairing terms cancel to rounding level.
    let balanced = |lambda: Scalar| {
        let g = r.axpy(lambda, f);
        let spread: f64 = space
            .weights()
            .zip(g.iter().zip(f.iter()))
            .map(|(w, (a, b))| w * abs_pow(a.norm(), p - 1.0) * b.norm())
            .sum();
        pairing(space, &g, f, p).norm() <= 1e-12 * spread
    };
    if let Some(lambda) = newton(space, r, f, p) {
        if balanced(lambda) {
            return Ok(lambda);
        }
    }
    if space.field() == crate::space::Field::Real {
        let a = bisect(-radius, radius, |a| grad(Scalar::new(a, 0.0)).re);
        return Ok(Scalar::new(a, 0.0));
    }
    let inner = |a: f64| bisect(-radius, radius, |b| -grad(Scalar::new(a, b)).im);
    let a = bisect(-radius, radius, |a| grad(Scalar::new(a, inner(a))).re);
    Ok(Scalar::new(a, inner(a)))
}

/// Damped Newton on `λ ↦ Σ w |r + λ f|^p` over the complex plane.
fn newton(space: &MeasureSpace, r: &FunctionVec, f: &FunctionVec, p: f64) -> Option<Scalar> {
    let mass = |lambda: Scalar| lp_mass(space, &r.axpy(lambda, f), p);
    let mut x = Scalar::new(0.0, 0.0);
    let mut current = mass(x);
    for _ in 0..500 {
        // With s = |g|^2, the gradient of s is 2 (Re(conj g f), Re(conj g i f))
        // and its Hessian is 2 |f|^2 I.
        let (mut grad, mut h) = ([0.0; 2], [0.0; 3]);
        for (w, (&a, &b)) in space.weights().zip(r.iter().zip(f.iter())) {
            let g = a + x * b;
            let s = g.norm_sqr();
            if s == 0.0 {
                continue;
            }
            let ds = [2.0 * (g.conj() * b).re, 2.0 * (g.conj() * b * Scalar::i()).re];
            let d1 = w * 0.5 * p * s.powf(0.5 * p - 1.0);
            let d2 = w * 0.5 * p * (0.5 * p - 1.0) * s.powf(0.5 * p - 2.0);
            grad[0] += d1 * ds[0];
            grad[1] += d1 * ds[1];
            h[0] += d2 * ds[0] * ds[0] + d1 * 2.0 * b.norm_sqr();
            h[1] += d2 * ds[0] * ds[1];
            h[2] += d2 * ds[1] * ds[1] + d1 * 2.0 * b.norm_sqr();
        }
        let det = h[0] * h[2] - h[1] * h[1];
        if !(det > 0.0 && det.is_finite()) {
            return None;
        }
        let step = Scalar::new(-(h[2] * grad[0] - h[1] * grad[1]) / det, -(h[0] * grad[1] - h[1] * grad[0]) / det);
        let mut t = 1.0;
        let mut next = mass(x + step);
        while next > current && t > 1e-12 {
            t *= 0.5;
            next = mass(x + step * t);
        }
        if next > current {
            return Some(x);
        }
        let moved = step * t;
        x += moved;
        current = next;
        if moved.norm() <= 1e-15 * x.norm().max(f64::MIN_POSITIVE) {
            break;
        }
    }
    Some(x)
}

#[derive(Debug, Clone, Copy)]
pub struct LpNorm {
    p: f64,
}

impl LpNorm {
    pub fn new(p: f64) -> Result<Self> {
        check_exponent(p)?;
        Ok(Self { p })
    }

    pub fn p(&self) -> f64 {
        self.p
    }
}

impl OrthogonalityCriterion for LpNorm {
    fn kind(&self) -> SpaceKind {
        SpaceKind::Lp { p: self.p }
    }

    fn orthogonal(&self, space: &MeasureSpace, f: &FunctionVec, g: &FunctionVec, tol: &Tolerances) -> Result<Verdict> {
        orthogonal(space, f, g, self.p, tol)
    }

    fn classify(&self, space: &MeasureSpace, f: &FunctionVec, tol: &Tolerances) -> Result<SymmetryVerdict> {
        classify(space, f, self.p, tol)
    }

    fn asymmetry_witness(
        &self,
        space: &MeasureSpace,
        f: &FunctionVec,
        tol: &Tolerances,
        side: Side,
    ) -> Result<Option<Witness>> {
        asymmetry_witness(space, f, self.p, tol, side)
    }

    fn additivity_violation(
        &self,
        space: &MeasureSpace,
        f: &FunctionVec,
        _tol: &Tolerances,
    ) -> Result<Option<AdditivityWitness>> {
        space.check(f)?;
        Ok(None)
    }

    fn orthogonal_direction(
        &self,
        space: &MeasureSpace,
        f: &FunctionVec,
        rng: &mut dyn RngCore,
        tol: &Tolerances,
    ) -> Result<OrthogonalDirection> {
        orthogonal_direction(space, f, self.p, rng, tol)
    }
}
