//! L1 spaces over finite atomic measures.
//!
//! Support functionals of `f != 0` are the `h` with `h = conj(sgn f)` on the
//! support of `f` and `|h| <= 1` on its zero set. Consequently `f ⊥ g` iff
//!
//! ```text
//! | Σ w conj(sgn f) g |  <=  Σ_{f(a) = 0} w |g|
//! ```

use rand::{Rng, RngCore};

use crate::error::{Error, Result};
use crate::oracle::{random_function, random_scalar, OrthogonalDirection};
use crate::partition::unequal_split;
use crate::space::{is_zero, l1_norm, sgn, FunctionVec, MeasureSpace, Scalar, SpaceKind, Tolerances};
use crate::strategy::OrthogonalityCriterion;
use crate::verdict::{
    AdditivityWitness, Evidence, L1Evidence, Side, SymmetryEvidence, SymmetryVerdict, Verdict, Witness,
};

const KIND: SpaceKind = SpaceKind::L1;
const FUNCTIONAL_TOL: f64 = 1e-12;
const MASS_TOL: f64 = 1e-12;

/// `Σ w conj(sgn f) g` and `Σ_{f = 0} w |g|`.
pub fn evidence(space: &MeasureSpace, f: &FunctionVec, g: &FunctionVec) -> Result<L1Evidence> {
    space.check(f)?;
    space.check(g)?;
    let mut pairing = Scalar::new(0.0, 0.0);
    let mut zero_mass = 0.0;
    let mut zero_set = Vec::new();
    for (i, w) in space.weights().enumerate() {
        let (a, b) = (f.get(i), g.get(i));
        if is_zero(a) {
            zero_mass += w * b.norm();
            zero_set.push(i);
        } else {
            pairing += sgn(a).conj() * b * w;
        }
    }
    Ok(L1Evidence { pairing, zero_mass, zero_set })
}

/// Whether `h` (an element of L∞) is a support functional of `f`.
pub fn is_support_functional(space: &MeasureSpace, f: &FunctionVec, h: &FunctionVec, _tol: &Tolerances) -> Result<bool> {
    space.check(f)?;
    space.check(h)?;
    if f.is_zero() {
        return Err(Error::Domain("support functionals are defined for f != 0 only".into()));
    }
    Ok(f.iter().zip(h.iter()).all(|(&a, &b)| {
        if is_zero(a) {
            b.norm() <= 1.0 + FUNCTIONAL_TOL
        } else {
            (b - sgn(a).conj()).norm() <= FUNCTIONAL_TOL
        }
    }))
}

/// The two functionals `h_i = conj(sgn f)` on the support and `i` on the
/// zero set, `i = 0, 1`. They differ exactly when `f` has a zero atom.
pub fn extreme_functionals(f: &FunctionVec) -> (FunctionVec, FunctionVec) {
    let make = |fill: f64| {
        FunctionVec::from_raw(
            f.iter()
                .map(|&a| if is_zero(a) { Scalar::new(fill, 0.0) } else { sgn(a).conj() })
                .collect(),
        )
    };
    (make(0.0), make(1.0))
}

/// `Σ w h f`, the action of `h ∈ L∞` on `f`.
pub fn apply(space: &MeasureSpace, h: &FunctionVec, f: &FunctionVec) -> Scalar {
    space.weights().zip(h.iter().zip(f.iter())).map(|(w, (a, b))| a * b * w).sum()
}

pub fn orthogonal(space: &MeasureSpace, f: &FunctionVec, g: &FunctionVec, tol: &Tolerances) -> Result<Verdict> {
    let ev = evidence(space, f, g)?;
    if f.is_zero() {
        return Ok(Verdict { orthogonal: true, evidence: Evidence::ZeroFunction });
    }
    let g_norm = l1_norm(space, g);
    let scale = if g_norm == 0.0 { 1.0 } else { g_norm };
    let orthogonal = ev.pairing.norm() <= ev.zero_mass + tol.hull_eps * scale;
    Ok(Verdict { orthogonal, evidence: Evidence::L1(ev) })
}

fn masses(space: &MeasureSpace, f: &FunctionVec) -> Vec<f64> {
    space.weights().zip(f.iter()).map(|(w, z)| w * z.norm()).collect()
}

fn nearly_equal(a: f64, b: f64) -> bool {
    (a - b).abs() <= MASS_TOL * a.max(b)
}

pub fn classify(space: &MeasureSpace, f: &FunctionVec, _tol: &Tolerances) -> Result<SymmetryVerdict> {
    space.check(f)?;
    let support = f.support();
    let zero_set = f.zero_set();
    let masses = masses(space, f);
    let zero = support.is_empty();
    let n = space.len();

    let smooth = zero_set.is_empty();
    let (left, left_reason) = if zero {
        (true, "zero function")
    } else if n == 1 {
        (true, "single-atom space")
    } else if n == 2 && smooth && nearly_equal(masses[0], masses[1]) {
        (true, "two atoms of equal mass w|f|")
    } else {
        (false, "")
    };
    let right = zero || support.len() == 1;
    let reason = if left {
        left_reason.to_string()
    } else if right {
        "support is a single atom".to_string()
    } else if smooth {
        "f non-zero on every atom with unequal masses".to_string()
    } else {
        format!("f vanishes on {} atom(s)", zero_set.len())
    };
    Ok(SymmetryVerdict {
        is_smooth: smooth && !zero,
        is_left_symmetric: left,
        is_right_symmetric: right,
        evidence: SymmetryEvidence {
            zero_function: zero,
            attain: None,
            support,
            zero_set,
            masses,
            hilbert: false,
            reason,
        },
    })
}

/// Builds `g` certifying that `f` is not symmetric on `side`.
///
/// Left, `f` vanishing on atom `a`: `g = f` on the support and
/// `||f||_1 / w_a` at `a`, which balances the inequality exactly for
/// `f ⊥ g` while `g` has no zero atoms inside the support of `f`.
/// Left, `f` non-zero everywhere: with `0 < α = m(A) < β = m(A^c)` for the
/// masses `m = w |f|`, `g = β f` on `A` and `-α f` off `A`.
/// Right: with `A` the support atom of smallest mass, `g = sgn(f) 1_A`.
pub fn asymmetry_witness(
    space: &MeasureSpace,
    f: &FunctionVec,
    tol: &Tolerances,
    side: Side,
) -> Result<Option<Witness>> {
    let verdict = classify(space, f, tol)?;
    if verdict.is_symmetric(side) {
        return Err(Error::Logic(format!("f is {side:?}-symmetric in L1, no witness exists")));
    }
    let ev = verdict.evidence;
    let n = space.len();
    let mut g = vec![Scalar::new(0.0, 0.0); n];
    let construction = match side {
        Side::Left => {
            if let Some(&a) = ev.zero_set.first() {
                g[..n].copy_from_slice(f.values());
                g[a] = Scalar::new(l1_norm(space, f) / space.weight(a), 0.0);
                format!("f with ||f||_1 / w at zero atom {a}")
            } else {
                let atoms: Vec<(usize, f64)> = ev.masses.iter().copied().enumerate().collect();
                let Some(part) = unequal_split(&atoms) else {
                    return Ok(None);
                };
                let alpha: f64 = part.iter().map(|&i| ev.masses[i]).sum();
                let beta: f64 = ev.masses.iter().sum::<f64>() - alpha;
                for i in 0..n {
                    g[i] = f.get(i) * if part.contains(&i) { beta } else { -alpha };
                }
                format!("beta f on {part:?}, -alpha f elsewhere (alpha = {alpha}, beta = {beta})")
            }
        }
        Side::Right => {
            let a = *ev
                .support
                .iter()
                .min_by(|&&a, &&b| ev.masses[a].total_cmp(&ev.masses[b]).then(a.cmp(&b)))
                .expect("right-asymmetric points have support");
            g[a] = sgn(f.get(a));
            format!("sgn(f) on atom {a}, zero elsewhere")
        }
    };
    Witness::verify(space, KIND, f, FunctionVec::from_raw(g), side, construction, tol)
}

/// For `f` vanishing on atom `a` and `c = ||f||_1 / w_a`: `g = f + c 1_a`
/// and `h = f - c 1_a` both meet the inequality with equality, but
/// `g + h = 2 f`.
pub fn additivity_violation(
    space: &MeasureSpace,
    f: &FunctionVec,
    tol: &Tolerances,
) -> Result<Option<AdditivityWitness>> {
    space.check(f)?;
    if f.is_zero() {
        return Ok(None);
    }
    let Some(&a) = f.zero_set().first() else {
        return Ok(None);
    };
    let c = l1_norm(space, f) / space.weight(a);
    let mut g = f.clone().into_values();
    let mut h = f.clone().into_values();
    g[a] = Scalar::new(c, 0.0);
    h[a] = Scalar::new(-c, 0.0);
    AdditivityWitness::verify(
        space,
        KIND,
        f,
        FunctionVec::from_raw(g),
        FunctionVec::from_raw(h),
        format!("f +/- ||f||_1 / w at zero atom {a}"),
        tol,
    )
}

/// Random `g` meeting the orthogonality inequality. With a zero atom `a`
/// available, `|g(a)|` is solved for so the inequality holds with equality
/// (or `g(a) = 0` if it already holds); otherwise `g` is projected onto the
/// kernel of `Σ w conj(sgn f) ·`.
pub fn orthogonal_direction(
    space: &MeasureSpace,
    f: &FunctionVec,
    rng: &mut dyn RngCore,
    tol: &Tolerances,
) -> Result<OrthogonalDirection> {
    space.check(f)?;
    if f.is_zero() {
        return Err(Error::Domain("orthogonal_direction needs f != 0".into()));
    }
    let n = space.len();
    if n == 1 {
        return Ok(OrthogonalDirection { g: FunctionVec::zeros(1), degenerate: true });
    }
    let mut values = random_function(rng, n, space.field()).into_values();
    let zeros = f.zero_set();
    if zeros.is_empty() {
        let g = FunctionVec::from_raw(values.clone());
        let ev = evidence(space, f, &g)?;
        let total: f64 = space.weights().sum();
        let shift = ev.pairing / total;
        for (v, &a) in values.iter_mut().zip(f.iter()) {
            *v -= shift * sgn(a);
        }
    } else {
        let a = zeros[rng.random_range(0..zeros.len())];
        values[a] = Scalar::new(0.0, 0.0);
        let ev = evidence(space, f, &FunctionVec::from_raw(values.clone()))?;
        let deficit = ev.pairing.norm() - ev.zero_mass;
        if deficit > 0.0 {
            let phase = loop {
                let z = random_scalar(rng, space.field());
                if !is_zero(z) {
                    break sgn(z);
                }
            };
            values[a] = phase * (deficit / space.weight(a));
        }
    }
    let g = FunctionVec::from_raw(values);
    if !orthogonal(space, f, &g, tol)?.orthogonal {
        return Err(Error::Logic("constructed L1 direction failed the orthogonality inequality".into()));
    }
    Ok(OrthogonalDirection { g, degenerate: false })
}

#[derive(Debug, Clone, Copy, Default)]
pub struct L1Norm;

impl OrthogonalityCriterion for L1Norm {
    fn kind(&self) -> SpaceKind {
        KIND
    }

    fn orthogonal(&self, space: &MeasureSpace, f: &FunctionVec, g: &FunctionVec, tol: &Tolerances) -> Result<Verdict> {
        orthogonal(space, f, g, tol)
    }

    fn classify(&self, space: &MeasureSpace, f: &FunctionVec, tol: &Tolerances) -> Result<SymmetryVerdict> {
        classify(space, f, tol)
    }

    fn asymmetry_witness(
        &self,
        space: &MeasureSpace,
        f: &FunctionVec,
        tol: &Tolerances,
        side: Side,
    ) -> Result<Option<Witness>> {
        asymmetry_witness(space, f, tol, side)
    }

    fn additivity_violation(
        &self,
        space: &MeasureSpace,
        f: &FunctionVec,
        tol: &Tolerances,
    ) -> Result<Option<AdditivityWitness>> {
        additivity_violation(space, f, tol)
    }

    fn orthogonal_direction(
        &self,
        space: &MeasureSpace,
        f: &FunctionVec,
        rng: &mut dyn RngCore,
        tol: &Tolerances,
    ) -> Result<OrthogonalDirection> {
        orthogonal_direction(space, f, rng, tol)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{oracle_orthogonal, rng_from_seed, OracleVerdict};
    use crate::space::Field;

    fn real(v: &[f64]) -> FunctionVec {
        FunctionVec::real(v).unwrap()
    }

    fn c(re: f64, im: f64) -> Scalar {
        Scalar::new(re, im)
    }

    fn unit_space(n: usize) -> MeasureSpace {
        MeasureSpace::uniform(n, Field::Real).unwrap()
    }

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    #[test]
    fn support_functional_examples() {
        let s = unit_space(3);
        let f = real(&[1.0, -1.0, 0.0]);
        assert!(is_support_functional(&s, &f, &real(&[1.0, -1.0, 0.5]), &tol()).unwrap());
        assert!(!is_support_functional(&s, &f, &real(&[1.0, 1.0, 0.0]), &tol()).unwrap());
        assert!(!is_support_functional(&s, &f, &real(&[1.0, -1.0, 1.5]), &tol()).unwrap());
        let s = MeasureSpace::uniform(2, Field::Complex).unwrap();
        let f = FunctionVec::new(vec![c(0.0, 1.0), c(0.0, 0.0)]).unwrap();
        let h = FunctionVec::new(vec![c(0.0, -1.0), c(1.0, 0.0)]).unwrap();
        assert!(is_support_functional(&s, &f, &h, &tol()).unwrap());
        assert!(matches!(
            is_support_functional(&s, &FunctionVec::zeros(2), &h, &tol()),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn orthogonality_examples() {
        let s = unit_space(2);
        let v = orthogonal(&s, &real(&[1.0, 1.0]), &real(&[1.0, -1.0]), &tol()).unwrap();
        assert!(v.orthogonal);
        let v = orthogonal(&s, &real(&[1.0, 0.0]), &real(&[2.0, 1.0]), &tol()).unwrap();
        assert!(!v.orthogonal);
        let Evidence::L1(ev) = v.evidence else { panic!() };
        assert_eq!((ev.pairing, ev.zero_mass, ev.zero_set), (c(2.0, 0.0), 1.0, vec![1]));
        assert!(orthogonal(&s, &real(&[1.0, 0.0]), &real(&[1.0, 1.0]), &tol()).unwrap().orthogonal);
    }

    #[test]
    fn orthogonality_examples_match_oracle() {
        // |1 + 2λ| + |λ| is minimised at λ = -1/2 with value 1/2.
        let s = unit_space(2);
        let r = oracle_orthogonal(&s, KIND, &real(&[1.0, 0.0]), &real(&[2.0, 1.0]), &tol()).unwrap();
        assert_eq!(r.verdict, OracleVerdict::NotOrthogonal);
        assert!((r.min_norm - 0.5).abs() < 1e-12);
        assert!((r.argmin.re + 0.5).abs() < 1e-9);
        // |1 + λ| + |λ| >= 1.
        let r = oracle_orthogonal(&s, KIND, &real(&[1.0, 0.0]), &real(&[1.0, 1.0]), &tol()).unwrap();
        assert_eq!(r.verdict, OracleVerdict::Orthogonal);
        assert!((r.min_norm - 1.0).abs() < 1e-12);
    }

    #[test]
    fn classification_examples() {
        let v = classify(&unit_space(2), &real(&[1.0, 1.0]), &tol()).unwrap();
        assert!(v.is_left_symmetric && v.is_smooth && !v.is_right_symmetric);
        let s = MeasureSpace::from_weights(&[2.0, 1.0], Field::Real).unwrap();
        assert!(classify(&s, &real(&[1.0, 2.0]), &tol()).unwrap().is_left_symmetric);
        let v = classify(&unit_space(3), &real(&[1.0, 1.0, 0.0]), &tol()).unwrap();
        assert!(!v.is_smooth && !v.is_left_symmetric && !v.is_right_symmetric);
        let v = classify(&unit_space(1), &real(&[3.0]), &tol()).unwrap();
        assert!(v.is_left_symmetric && v.is_right_symmetric && v.is_smooth);
        let v = classify(&unit_space(3), &real(&[0.0, -2.0, 0.0]), &tol()).unwrap();
        assert!(v.is_right_symmetric && !v.is_left_symmetric);
        let v = classify(&unit_space(2), &FunctionVec::zeros(2), &tol()).unwrap();
        assert!(v.is_left_symmetric && v.is_right_symmetric && !v.is_smooth);
    }

    #[test]
    fn witness_examples() {
        let s = unit_space(2);
        let w = asymmetry_witness(&s, &real(&[1.0, 0.0]), &tol(), Side::Left).unwrap().unwrap();
        assert_eq!(w.g, real(&[1.0, 1.0]));
        assert!(w.is_valid());

        let f = real(&[1.0, 2.0]);
        let w = asymmetry_witness(&s, &f, &tol(), Side::Left).unwrap().unwrap();
        assert_eq!(w.g, real(&[2.0, -2.0]));
        assert!(orthogonal(&s, &f, &w.g, &tol()).unwrap().orthogonal);
        let Evidence::L1(rev) = orthogonal(&s, &w.g, &f, &tol()).unwrap().evidence else { panic!() };
        assert_eq!(rev.pairing, c(-1.0, 0.0));
        assert!(rev.zero_set.is_empty());

        let w = asymmetry_witness(&s, &f, &tol(), Side::Right).unwrap().unwrap();
        assert_eq!(w.g, real(&[1.0, 0.0]));
        let Evidence::L1(ev) = orthogonal(&s, &w.g, &f, &tol()).unwrap().evidence else { panic!() };
        assert_eq!((ev.pairing.re, ev.zero_mass), (1.0, 2.0));
        assert!(w.is_valid());
    }

    #[test]
    fn witness_on_symmetric_point_is_a_logic_error() {
        let s = unit_space(2);
        assert!(matches!(asymmetry_witness(&s, &real(&[1.0, 1.0]), &tol(), Side::Left), Err(Error::Logic(_))));
        assert!(matches!(asymmetry_witness(&s, &real(&[0.0, 1.0]), &tol(), Side::Right), Err(Error::Logic(_))));
    }

    #[test]
    fn extreme_functionals_are_support_functionals() {
        let s = MeasureSpace::from_weights(&[0.5, 2.0, 1.0], Field::Complex).unwrap();
        let f = FunctionVec::new(vec![c(1.0, -1.0), c(0.0, 0.0), c(-3.0, 0.5)]).unwrap();
        let (h0, h1) = extreme_functionals(&f);
        assert_ne!(h0, h1);
        for h in [&h0, &h1] {
            assert!(is_support_functional(&s, &f, h, &tol()).unwrap());
            let action = apply(&s, h, &f);
            assert!((action - c(l1_norm(&s, &f), 0.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn additivity_needs_a_zero_atom() {
        let s = unit_space(3);
        let w = additivity_violation(&s, &real(&[1.0, 0.0, -2.0]), &tol()).unwrap().unwrap();
        assert!(w.is_valid());
        assert!(additivity_violation(&s, &real(&[1.0, 3.0, -2.0]), &tol()).unwrap().is_none());
    }

    #[test]
    fn directions_are_orthogonal() {
        let mut rng = rng_from_seed(5);
        let s = MeasureSpace::from_weights(&[0.3, 1.0, 4.0], Field::Complex).unwrap();
        for f in [
            FunctionVec::new(vec![c(1.0, 1.0), c(0.0, 0.0), c(-0.2, 0.0)]).unwrap(),
            FunctionVec::new(vec![c(1.0, 1.0), c(2.0, 0.0), c(-0.2, 0.0)]).unwrap(),
        ] {
            for _ in 0..20 {
                let d = orthogonal_direction(&s, &f, &mut rng, &tol()).unwrap();
                let r = oracle_orthogonal(&s, KIND, &f, &d.g, &tol()).unwrap();
                assert_eq!(r.verdict, OracleVerdict::Orthogonal);
            }
        }
    }
}
