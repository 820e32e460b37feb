//! Sup-norm spaces over finite atomic measures.
//!
//! On an atomic space with positive weights the essential supremum is the
//! maximum over atoms, and the criteria for `C0(X)` and `L∞` both reduce to
//! statements about the norm-attaining set `M_f`:
//!
//! * `f ⊥ g` iff `0 ∈ conv{ conj(f(a)) g(a) : a ∈ M_f }`;
//! * `f` is smooth iff `M_f` is a single atom;
//! * `f` is left-symmetric iff `M_f` is a single atom and `f` vanishes
//!   elsewhere;
//! * `f` is right-symmetric iff `M_f` is every atom.

use rand::{Rng, RngCore};

use crate::error::{Error, Result};
use crate::geometry::{contains_origin, HullQuery};
use crate::oracle::{random_function, random_scalar, OrthogonalDirection};
use crate::space::{sgn, sup_norm, FunctionVec, MeasureSpace, Scalar, SpaceKind, Tolerances};
use crate::strategy::OrthogonalityCriterion;
use crate::verdict::{
    AdditivityWitness, AttainSet, Evidence, Side, SymmetryEvidence, SymmetryVerdict, Verdict, Witness,
};

const KIND: SpaceKind = SpaceKind::Sup;

/// Atoms with `|f(a)| >= ||f|| (1 - rel_attain)`.
pub fn attain_set(space: &MeasureSpace, f: &FunctionVec, tol: &Tolerances) -> Result<AttainSet> {
    space.check(f)?;
    let max = sup_norm(f);
    if max == 0.0 {
        return Ok(AttainSet { indices: vec![], threshold: 0.0, zero_function: true });
    }
    let threshold = max * (1.0 - tol.rel_attain);
    let indices = (0..f.len()).filter(|&i| f.get(i).norm() >= threshold).collect();
    Ok(AttainSet { indices, threshold, zero_function: false })
}

pub fn orthogonal(space: &MeasureSpace, f: &FunctionVec, g: &FunctionVec, tol: &Tolerances) -> Result<Verdict> {
    space.check(g)?;
    let attain = attain_set(space, f, tol)?;
    if attain.zero_function {
        return Ok(Verdict { orthogonal: true, evidence: Evidence::ZeroFunction });
    }
    let points: Vec<Scalar> = attain.indices.iter().map(|&i| f.get(i).conj() * g.get(i)).collect();
    let orthogonal = contains_origin(&HullQuery::new(points.clone(), tol.hull_eps)?)?;
    Ok(Verdict { orthogonal, evidence: Evidence::Hull { attain, points } })
}

pub fn classify(space: &MeasureSpace, f: &FunctionVec, tol: &Tolerances) -> Result<SymmetryVerdict> {
    let attain = attain_set(space, f, tol)?;
    let support = f.support();
    let zero_set = f.zero_set();
    if attain.zero_function {
        return Ok(SymmetryVerdict {
            is_smooth: false,
            is_left_symmetric: true,
            is_right_symmetric: true,
            evidence: SymmetryEvidence {
                zero_function: true,
                attain: Some(attain),
                support,
                zero_set,
                reason: "zero function".into(),
                ..Default::default()
            },
        });
    }
    let max = sup_norm(f);
    let smooth = attain.len() == 1;
    let left = smooth
        && (0..f.len()).all(|i| attain.contains(i) || f.get(i).norm() <= tol.rel_attain * max);
    let right = attain.len() == space.len();
    let reason = match (smooth, left, right) {
        (_, true, _) => "norm attained at one atom and f vanishes elsewhere",
        (true, false, true) => "single atom attains the norm everywhere",
        (true, false, false) => "norm attained at one atom, f non-zero elsewhere",
        (false, _, true) => "norm attained on every atom",
        (false, _, false) => "norm attained on several but not all atoms",
    };
    Ok(SymmetryVerdict {
        is_smooth: smooth,
        is_left_symmetric: left,
        is_right_symmetric: right,
        evidence: SymmetryEvidence {
            zero_function: false,
            attain: Some(attain),
            support,
            zero_set,
            reason: reason.into(),
            ..Default::default()
        },
    })
}

fn unit(n: usize, i: usize, value: Scalar) -> FunctionVec {
    let mut v = FunctionVec::zeros(n).into_values();
    v[i] = value;
    FunctionVec::from_raw(v)
}

fn with_value(f: &FunctionVec, i: usize, value: Scalar) -> FunctionVec {
    let mut v = f.clone().into_values();
    v[i] = value;
    FunctionVec::from_raw(v)
}

/// Builds `g` certifying that `f` is not symmetric on `side`.
///
/// Left: with `x1 ∈ M_f` and `x2 ≠ x1` the other atom of largest `|f|`,
/// `g = sgn(f(x2)) 1_{x2}` vanishes on `x1`, so `f ⊥ g`, while `M_g = {x2}`
/// pairs `g` with `f` positively, so `g` is not orthogonal to `f`. This also
/// covers `|M_f| >= 2`, where `x2` is a second attaining atom.
///
/// Right: `g` equals `f` away from an atom `a ∉ M_f`, and at `a` takes the
/// value `||f||` when `f(a) = 0` and `-||f|| sgn(f(a))` otherwise. Then
/// `a ∈ M_g` makes `g ⊥ f`, while `g = f` on `M_f` rules out `f ⊥ g`.
pub fn asymmetry_witness(
    space: &MeasureSpace,
    f: &FunctionVec,
    tol: &Tolerances,
    side: Side,
) -> Result<Option<Witness>> {
    let verdict = classify(space, f, tol)?;
    if verdict.is_symmetric(side) {
        return Err(Error::Logic(format!("f is {side:?}-symmetric in the sup norm, no witness exists")));
    }
    let attain = verdict.evidence.attain.expect("sup classification records the attain set");
    let n = space.len();
    let max = sup_norm(f);
    let (g, construction) = match side {
        Side::Left => {
            let x1 = attain.indices[0];
            let x2 = (0..n)
                .filter(|&i| i != x1)
                .max_by(|&a, &b| f.get(a).norm().total_cmp(&f.get(b).norm()).then(b.cmp(&a)))
                .expect("a left-asymmetric point has a second atom");
            (unit(n, x2, sgn(f.get(x2))), format!("sgn(f(a{x2})) at atom {x2}, zero elsewhere"))
        }
        Side::Right => {
            if let Some(a) = (0..n).find(|&i| f.get(i).norm() == 0.0) {
                (with_value(f, a, Scalar::new(max, 0.0)), format!("f with ||f|| at zero atom {a}"))
            } else {
                let a = (0..n)
                    .filter(|&i| !attain.contains(i))
                    .min_by(|&a, &b| f.get(a).norm().total_cmp(&f.get(b).norm()).then(a.cmp(&b)))
                    .expect("a right-asymmetric point misses an atom");
                (
                    with_value(f, a, -sgn(f.get(a)) * max),
                    format!("f with -||f|| sgn(f) at atom {a}"),
                )
            }
        }
    };
    Witness::verify(space, KIND, f, g, side, construction, tol)
}

/// For `|M_f| >= 2` with `x1 ∈ M_f`: `g = f` off `x1` and zero at `x1`,
/// `h = f(x1) 1_{x1}`. Both are annihilated by a point evaluation on
/// `M_f`, yet `g + h = f`.
pub fn additivity_violation(
    space: &MeasureSpace,
    f: &FunctionVec,
    tol: &Tolerances,
) -> Result<Option<AdditivityWitness>> {
    let attain = attain_set(space, f, tol)?;
    if attain.len() < 2 {
        return Ok(None);
    }
    let x1 = attain.indices[0];
    let g = with_value(f, x1, Scalar::new(0.0, 0.0));
    let h = unit(space.len(), x1, f.get(x1));
    AdditivityWitness::verify(space, KIND, f, g, h, format!("split of f at attaining atom {x1}"), tol)
}

/// Random `g` vanishing on one attaining atom or, when several atoms attain
/// the norm, with opposite pairings `conj(f) g` on two of them.
pub fn orthogonal_direction(
    space: &MeasureSpace,
    f: &FunctionVec,
    rng: &mut dyn RngCore,
    tol: &Tolerances,
) -> Result<OrthogonalDirection> {
    let attain = attain_set(space, f, tol)?;
    if attain.zero_function {
        return Err(Error::Domain("orthogonal_direction needs f != 0".into()));
    }
    let n = space.len();
    if n == 1 {
        return Ok(OrthogonalDirection { g: FunctionVec::zeros(1), degenerate: true });
    }
    let mut values = random_function(rng, n, space.field()).into_values();
    let pick = |rng: &mut dyn RngCore, k: usize| rng.random_range(0..k);
    if attain.len() >= 2 && rng.random_bool(0.5) {
        let i = attain.indices[pick(rng, attain.len())];
        let mut j = attain.indices[pick(rng, attain.len() - 1)];
        if j == i {
            j = attain.indices[attain.len() - 1];
        }
        if values[i].norm() == 0.0 {
            values[i] = random_scalar(rng, space.field());
        }
        let t: f64 = rng.random_range(0.2..5.0);
        values[j] = -(f.get(i).conj() * values[i]) * t / f.get(j).conj();
    } else {
        let i = attain.indices[pick(rng, attain.len())];
        values[i] = Scalar::new(0.0, 0.0);
    }
    let g = FunctionVec::from_raw(values);
    if !orthogonal(space, f, &g, tol)?.orthogonal {
        return Err(Error::Logic("constructed sup direction failed the hull test".into()));
    }
    Ok(OrthogonalDirection { g, degenerate: false })
}

#[derive(Debug, Clone, Copy, Default)]
pub struct SupNorm;

impl OrthogonalityCriterion for SupNorm {
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

    fn unit_space(n: usize) -> MeasureSpace {
        MeasureSpace::uniform(n, Field::Real).unwrap()
    }

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    #[test]
    fn attain_set_examples() {
        let s = unit_space(3);
        assert_eq!(attain_set(&s, &real(&[2.0, 1.0, 2.0]), &tol()).unwrap().indices, vec![0, 2]);
        let z = attain_set(&unit_space(2), &real(&[0.0, 0.0]), &tol()).unwrap();
        assert!(z.is_empty() && z.zero_function && z.threshold == 0.0);
        let near = attain_set(&unit_space(2), &real(&[1.0, 1.0 - 1e-12]), &tol()).unwrap();
        assert_eq!(near.indices, vec![0, 1]);
    }

    #[test]
    fn orthogonality_examples() {
        let s = unit_space(2);
        assert!(orthogonal(&s, &real(&[1.0, 1.0]), &real(&[1.0, -1.0]), &tol()).unwrap().orthogonal);
        assert!(orthogonal(&s, &real(&[1.0, 0.0]), &real(&[0.0, 7.0]), &tol()).unwrap().orthogonal);
        assert!(!orthogonal(&s, &real(&[1.0, 1.0]), &real(&[1.0, 1.0]), &tol()).unwrap().orthogonal);
        // Oracle: min over λ of max(|1+λ|, |1-λ|) is 1 = ||f||.
        let r = oracle_orthogonal(&s, KIND, &real(&[1.0, 1.0]), &real(&[1.0, -1.0]), &tol()).unwrap();
        assert!((r.min_norm - 1.0).abs() < 1e-12);
    }

    #[test]
    fn zero_function_conventions() {
        let s = unit_space(2);
        let z = FunctionVec::zeros(2);
        let v = orthogonal(&s, &z, &real(&[1.0, 2.0]), &tol()).unwrap();
        assert!(v.orthogonal);
        assert_eq!(v.evidence, Evidence::ZeroFunction);
        assert!(orthogonal(&s, &real(&[1.0, 2.0]), &z, &tol()).unwrap().orthogonal);
        let c = classify(&s, &z, &tol()).unwrap();
        assert!(c.is_left_symmetric && c.is_right_symmetric && !c.is_smooth);
    }

    #[test]
    fn classification_examples() {
        let c = classify(&unit_space(3), &real(&[5.0, 0.0, 0.0]), &tol()).unwrap();
        assert!(c.is_smooth && c.is_left_symmetric && !c.is_right_symmetric);
        let c = classify(&unit_space(2), &real(&[1.0, 1.0]), &tol()).unwrap();
        assert!(!c.is_smooth && !c.is_left_symmetric && c.is_right_symmetric);
        let c = classify(&unit_space(2), &real(&[2.0, 1.0]), &tol()).unwrap();
        assert!(c.is_smooth && !c.is_left_symmetric && !c.is_right_symmetric);
    }

    #[test]
    fn left_witness() {
        let s = unit_space(2);
        let f = real(&[2.0, 1.0]);
        let w = asymmetry_witness(&s, &f, &tol(), Side::Left).unwrap().unwrap();
        assert_eq!(w.g, real(&[0.0, 1.0]));
        assert_eq!(w.forward.verdict, OracleVerdict::Orthogonal);
        assert_eq!(w.reverse.verdict, OracleVerdict::NotOrthogonal);
        // min over λ of max(|2λ|, |1 + λ|) is 2/3 at λ = -1/3.
        assert!((w.reverse.min_norm - 2.0 / 3.0).abs() < 1e-9);
    }

    #[test]
    fn right_witness_zero_atom() {
        let s = unit_space(2);
        let f = real(&[1.0, 0.0]);
        let w = asymmetry_witness(&s, &f, &tol(), Side::Right).unwrap().unwrap();
        assert_eq!(w.g, real(&[1.0, 1.0]));
        assert!(orthogonal(&s, &w.g, &f, &tol()).unwrap().orthogonal);
        assert!(!orthogonal(&s, &f, &w.g, &tol()).unwrap().orthogonal);
        assert!(w.is_valid());
    }

    #[test]
    fn right_witness_nonzero_atom() {
        let s = unit_space(2);
        let f = real(&[2.0, 1.0]);
        let w = asymmetry_witness(&s, &f, &tol(), Side::Right).unwrap().unwrap();
        assert_eq!(w.g, real(&[2.0, -2.0]));
        assert!(w.is_valid());
    }

    #[test]
    fn witness_on_symmetric_point_is_a_logic_error() {
        let s = unit_space(3);
        let f = real(&[5.0, 0.0, 0.0]);
        assert!(matches!(asymmetry_witness(&s, &f, &tol(), Side::Left), Err(Error::Logic(_))));
        let f = real(&[1.0, -1.0, 1.0]);
        assert!(matches!(asymmetry_witness(&s, &f, &tol(), Side::Right), Err(Error::Logic(_))));
    }

    #[test]
    fn non_smooth_points_break_additivity() {
        let s = MeasureSpace::uniform(3, Field::Complex).unwrap();
        let f = FunctionVec::new(vec![Scalar::new(0.0, 2.0), Scalar::new(-2.0, 0.0), Scalar::new(0.5, 0.5)]).unwrap();
        let w = additivity_violation(&s, &f, &tol()).unwrap().unwrap();
        assert!(w.is_valid());
        assert!(additivity_violation(&s, &real(&[3.0, 1.0, 0.0]), &tol()).unwrap().is_none());
    }

    #[test]
    fn directions_are_orthogonal() {
        let s = MeasureSpace::from_weights(&[1.0, 2.0, 0.5], Field::Complex).unwrap();
        let f = FunctionVec::new(vec![Scalar::new(1.0, 0.0), Scalar::new(0.0, -1.0), Scalar::new(0.3, 0.0)]).unwrap();
        let mut rng = rng_from_seed(11);
        for _ in 0..20 {
            let d = orthogonal_direction(&s, &f, &mut rng, &tol()).unwrap();
            assert!(!d.degenerate);
            let r = oracle_orthogonal(&s, KIND, &f, &d.g, &tol()).unwrap();
            assert_eq!(r.verdict, OracleVerdict::Orthogonal);
        }
        let one = unit_space(1);
        let d = orthogonal_direction(&one, &real(&[5.0]), &mut rng, &tol()).unwrap();
        assert!(d.degenerate && d.g.is_zero());
    }
}
