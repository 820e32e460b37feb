//! Randomised cross-checks between the analytic criteria and the oracle.
//!
//! Every suite is deterministic given its seed and returns a tally rather
//! than a log, so reports are reproducible byte for byte.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::Serialize;

use crate::error::Result;
use crate::geometry::{contains_origin, contains_origin_bruteforce, HullQuery};
use crate::oracle::{
    derive_seed, oracle_orthogonal, random_function, random_instance, random_scalar, random_space,
    rng_from_seed, zero_some, OracleVerdict,
};
use crate::space::{
    conjugate_exponent, is_zero, lp_norm, sgn, Field, FunctionVec, MeasureSpace, Scalar, SpaceKind,
    Tolerances,
};
use crate::strategy::{criterion_for, OrthogonalityCriterion};
use crate::verdict::Side;
use crate::{l1, lp};

/// Largest tolerated share of oracle runs landing in the margin band.
pub const MAX_BAND_RATE: f64 = 0.01;
const MAX_RECORDED_FAILURES: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SuiteConfig {
    pub seed: u64,
    pub dim_max: usize,
    pub tol: Tolerances,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self { seed: 0, dim_max: 6, tol: Tolerances::default() }
    }
}

/// Enough data to replay a failing trial.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InstanceRecord {
    pub space: SpaceKind,
    pub field: Field,
    pub weights: Vec<f64>,
    #[serde(serialize_with = "crate::report::function::serialize")]
    pub f: FunctionVec,
    #[serde(skip_serializing_if = "Option::is_none", serialize_with = "serialize_opt_function")]
    pub g: Option<FunctionVec>,
}

fn serialize_opt_function<S: serde::Serializer>(g: &Option<FunctionVec>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match g {
        Some(g) => crate::report::function::serialize(g, s),
        None => s.serialize_none(),
    }
}

impl InstanceRecord {
    pub fn new(kind: SpaceKind, space: &MeasureSpace, f: &FunctionVec, g: Option<&FunctionVec>) -> Self {
        Self {
            space: kind,
            field: space.field(),
            weights: space.weights().collect(),
            f: f.clone(),
            g: g.cloned(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FailureRecord {
    pub trial: u64,
    pub seed: u64,
    pub message: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub instance: Option<InstanceRecord>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub name: String,
    pub trials: u64,
    pub passed: u64,
    pub failed: u64,
    pub band_hits: u64,
    pub band_rate: f64,
    pub ok: bool,
    pub counters: BTreeMap<String, u64>,
    pub failures: Vec<FailureRecord>,
}

struct Tally {
    name: String,
    trials: u64,
    passed: u64,
    failed: u64,
    band_hits: u64,
    counters: BTreeMap<String, u64>,
    failures: Vec<FailureRecord>,
}

impl Tally {
    fn new(name: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            trials: 0,
            passed: 0,
            failed: 0,
            band_hits: 0,
            counters: BTreeMap::new(),
            failures: Vec::new(),
        }
    }

    fn pass(&mut self) {
        self.trials += 1;
        self.passed += 1;
    }

    fn band(&mut self) {
        self.trials += 1;
        self.band_hits += 1;
    }

    fn fail(&mut self, trial: u64, seed: u64, message: impl Into<String>, instance: Option<InstanceRecord>) {
        self.trials += 1;
        self.failed += 1;
        if self.failures.len() < MAX_RECORDED_FAILURES {
            self.failures.push(FailureRecord { trial, seed, message: message.into(), instance });
        }
    }

    fn count(&mut self, key: &str) {
        *self.counters.entry(key.to_string()).or_default() += 1;
    }

    fn finish(self) -> SuiteReport {
        let band_rate = if self.trials == 0 { 0.0 } else { self.band_hits as f64 / self.trials as f64 };
        SuiteReport {
            ok: self.failed == 0 && band_rate < MAX_BAND_RATE,
            name: self.name,
            trials: self.trials,
            passed: self.passed,
            failed: self.failed,
            band_hits: self.band_hits,
            band_rate,
            counters: self.counters,
            failures: self.failures,
        }
    }
}

fn family_label(kinds: &[SpaceKind]) -> String {
    match kinds {
        [SpaceKind::Lp { .. }, ..] => {
            let ps: Vec<String> = kinds
                .iter()
                .filter_map(|k| match k {
                    SpaceKind::Lp { p } => Some(p.to_string()),
                    _ => None,
                })
                .collect();
            format!("lp[{}]", ps.join(","))
        }
        [k, ..] => k.name().to_string(),
        [] => "none".to_string(),
    }
}

fn trial_field(i: u64) -> Field {
    if i % 2 == 0 {
        Field::Real
    } else {
        Field::Complex
    }
}

fn trial_weights(i: u64) -> (f64, f64) {
    if (i / 2) % 2 == 0 {
        (1.0, 1.0)
    } else {
        (0.1, 10.0)
    }
}

fn unimodular<R: Rng + ?Sized>(rng: &mut R, field: Field) -> Scalar {
    loop {
        let z = random_scalar(rng, field);
        if !is_zero(z) {
            return sgn(z);
        }
    }
}

/// Random non-zero scalar with modulus log-uniform in `[0.1, 10]`.
fn random_multiplier<R: Rng + ?Sized>(rng: &mut R, field: Field) -> Scalar {
    unimodular(rng, field) * rng.random_range((0.1f64).ln()..(10.0f64).ln()).exp()
}

fn nonzero_function<R: Rng + ?Sized>(rng: &mut R, n: usize, field: Field) -> FunctionVec {
    loop {
        let f = random_function(rng, n, field);
        if !f.is_zero() {
            return f;
        }
    }
}

/// Oracle agreement: on seeded random instances (a third of them with `g`
/// drawn from the orthogonal directions of `f`), the analytic verdict must
/// match the oracle whenever the oracle is outside its margin band.
pub fn oracle_agreement(kinds: &[SpaceKind], trials: u64, cfg: &SuiteConfig) -> Result<SuiteReport> {
    let mut tally = Tally::new(format!("oracle_agreement/{}", family_label(kinds)));
    let criteria: Vec<_> = kinds.iter().map(|&k| criterion_for(k)).collect::<Result<_>>()?;
    for i in 0..trials {
        let seed = derive_seed(cfg.seed, i);
        let criterion = &criteria[(i % criteria.len() as u64) as usize];
        let kind = criterion.kind();
        let mut inst = random_instance(seed, (1, cfg.dim_max), trial_field(i), trial_weights(i))?;
        if i % 3 == 2 && !inst.f.is_zero() {
            let mut rng = rng_from_seed(seed ^ 0xA5A5);
            match criterion.orthogonal_direction(&inst.space, &inst.f, &mut rng, &cfg.tol) {
                Ok(d) => inst.g = d.g,
                Err(e) => {
                    let rec = InstanceRecord::new(kind, &inst.space, &inst.f, None);
                    tally.fail(i, seed, format!("orthogonal_direction: {e}"), Some(rec));
                    continue;
                }
            }
            tally.count("constructed_orthogonal");
        }
        let analytic = criterion.orthogonal(&inst.space, &inst.f, &inst.g, &cfg.tol)?;
        let oracle = oracle_orthogonal(&inst.space, kind, &inst.f, &inst.g, &cfg.tol)?;
        tally.count(if analytic.orthogonal { "analytic_orthogonal" } else { "analytic_not_orthogonal" });
        match (oracle.verdict, analytic.orthogonal) {
            (OracleVerdict::MarginBand, _) => tally.band(),
            (OracleVerdict::Orthogonal, true) | (OracleVerdict::NotOrthogonal, false) => tally.pass(),
            (v, a) => {
                // the oracle saw a decrease, just smaller than its margin
                let sub_margin = !a && oracle.min_norm < oracle.base_norm;
                tally.count(if sub_margin { "disagree_sub_margin_decrease" } else { "disagree_other" });
                let rec = InstanceRecord::new(kind, &inst.space, &inst.f, Some(&inst.g));
                let msg = format!(
                    "analytic orthogonal = {a}, oracle {v:?} (min {:.17e}, base {:.17e})",
                    oracle.min_norm, oracle.base_norm
                );
                tally.fail(i, seed, msg, Some(rec));
            }
        }
    }
    Ok(tally.finish())
}

fn random_hull_points<R: Rng + ?Sized>(rng: &mut R) -> Vec<Scalar> {
    let n = rng.random_range(1..=8);
    let mode = rng.random_range(0..5);
    let mut pts: Vec<Scalar> = match mode {
        // generic complex
        0 => (0..n).map(|_| random_scalar(rng, Field::Complex)).collect(),
        // real
        1 => (0..n).map(|_| random_scalar(rng, Field::Real)).collect(),
        // clustered around a random centre
        2 => {
            let centre = random_scalar(rng, Field::Complex) * 2.0;
            let spread = rng.random_range((1e-6f64).ln()..(1.0f64).ln()).exp();
            (0..n).map(|_| centre + random_scalar(rng, Field::Complex) * spread).collect()
        }
        // collinear through the origin
        3 => {
            let d = unimodular(rng, Field::Complex);
            let one_sided = rng.random_bool(0.5);
            (0..n)
                .map(|_| {
                    let t: f64 = rng.random_range(0.1..3.0);
                    if one_sided || rng.random_bool(0.5) { d * t } else { d * -t }
                })
                .collect()
        }
        // points in a half-plane, possibly touching the boundary line
        _ => {
            let d = unimodular(rng, Field::Complex);
            (0..n)
                .map(|_| {
                    let angle: f64 = rng.random_range(-1.5..1.5);
                    d * Scalar::from_polar(rng.random_range(0.1..3.0), angle)
                })
                .collect()
        }
    };
    if rng.random_bool(0.05) {
        let k = rng.random_range(0..pts.len());
        pts[k] = Scalar::new(0.0, 0.0);
    }
    pts
}

/// `contains_origin` against the enumeration oracle at `eps = 1e-12`.
pub fn hull_equivalence(trials: u64, cfg: &SuiteConfig) -> Result<SuiteReport> {
    let mut tally = Tally::new("hull_equivalence");
    for i in 0..trials {
        let seed = derive_seed(cfg.seed, i);
        let mut rng = rng_from_seed(seed);
        let q = HullQuery::new(random_hull_points(&mut rng), 1e-12)?;
        let fast = contains_origin(&q)?;
        let brute = contains_origin_bruteforce(&q)?;
        tally.count(if fast { "contains" } else { "excludes" });
        if fast == brute {
            tally.pass();
        } else {
            let pts: Vec<String> = q.points.iter().map(|z| format!("({:e},{:e})", z.re, z.im)).collect();
            tally.fail(i, seed, format!("angular {fast} vs enumeration {brute}: {}", pts.join(" ")), None);
        }
    }
    Ok(tally.finish())
}

/// Lp support functionals have dual norm one and act as `||f||_p` on `f`;
/// the two extreme L1 functionals are accepted whenever `f` has a zero.
pub fn support_functionals(ps: &[f64], trials: u64, cfg: &SuiteConfig) -> Result<SuiteReport> {
    const TOL: f64 = 1e-10;
    let mut tally = Tally::new("support_functionals");
    for i in 0..trials {
        let seed = derive_seed(cfg.seed, i);
        let mut rng = rng_from_seed(seed);
        let field = trial_field(i);
        let n = rng.random_range(1..=cfg.dim_max);
        let space = random_space(&mut rng, n, field, (0.1, 10.0))?;
        let mut f = nonzero_function(&mut rng, n, field);
        if n > 1 && rng.random_bool(0.5) {
            f = zero_some(&mut rng, &f);
            if f.is_zero() {
                f = nonzero_function(&mut rng, n, field);
            }
        }
        let mut problems = Vec::new();
        for &p in ps {
            let h = lp::support_functional(&space, &f, p)?;
            let q = conjugate_exponent(p)?;
            let dual = lp_norm(&space, &h, q);
            let fp = lp_norm(&space, &f, p);
            let action: Scalar = space.weights().zip(h.iter().zip(f.iter())).map(|(w, (a, b))| a * b * w).sum();
            if (dual - 1.0).abs() > TOL {
                problems.push(format!("p={p}: ||h||_q = {dual:e}"));
            }
            if (action - Scalar::new(fp, 0.0)).norm() > TOL * fp {
                problems.push(format!("p={p}: h(f) = {action} vs ||f||_p = {fp:e}"));
            }
        }
        if !f.zero_set().is_empty() {
            tally.count("l1_with_zero_atoms");
            let (h0, h1) = l1::extreme_functionals(&f);
            for (name, h) in [("h0", &h0), ("h1", &h1)] {
                if !l1::is_support_functional(&space, &f, h, &cfg.tol)? {
                    problems.push(format!("L1 functional {name} rejected"));
                }
            }
            if h0 == h1 {
                problems.push("L1 functionals coincide".into());
            }
        }
        if problems.is_empty() {
            tally.pass();
        } else {
            let rec = InstanceRecord::new(SpaceKind::L1, &space, &f, None);
            tally.fail(i, seed, problems.join("; "), Some(rec));
        }
    }
    Ok(tally.finish())
}

/// Central differences of `t ↦ ||f + t g||_p` at zero against
/// `Re(pairing) / ||f||_p^(p-1)`, relative to the Lipschitz bound `||g||_p`.
pub fn finite_difference(ps: &[f64], trials: u64, cfg: &SuiteConfig) -> Result<SuiteReport> {
    const STEP: f64 = 1e-5;
    const TOL: f64 = 1e-6;
    let mut tally = Tally::new("finite_difference");
    for i in 0..trials {
        let seed = derive_seed(cfg.seed, i);
        let p = ps[(i % ps.len() as u64) as usize];
        let mut inst = random_instance(seed, (1, cfg.dim_max), trial_field(i), trial_weights(i))?;
        if inst.f.is_zero() {
            let mut rng = rng_from_seed(seed ^ 0x5A5A);
            inst.f = nonzero_function(&mut rng, inst.space.len(), inst.space.field());
        }
        let (space, f, g) = (&inst.space, &inst.f, &inst.g);
        let fp = lp_norm(space, f, p);
        let analytic = lp::pairing(space, f, g, p).re / fp.powf(p - 1.0);
        let one = Scalar::new(STEP, 0.0);
        let fd = (lp_norm(space, &f.axpy(one, g), p) - lp_norm(space, &f.axpy(-one, g), p)) / (2.0 * STEP);
        let scale = analytic.abs().max(lp_norm(space, g, p));
        if (fd - analytic).abs() <= TOL * scale || scale == 0.0 {
            tally.pass();
        } else {
            let rec = InstanceRecord::new(SpaceKind::Lp { p }, space, f, Some(g));
            tally.fail(i, seed, format!("p={p}: central difference {fd:e} vs pairing {analytic:e}"), Some(rec));
        }
    }
    Ok(tally.finish())
}

/// Random `f` for classification checks: generic draws mixed with points
/// built to sit in the symmetric classes of `kind`.
pub fn random_point<R: Rng + ?Sized>(
    rng: &mut R,
    kind: SpaceKind,
    dim_max: usize,
    field: Field,
    weight_range: (f64, f64),
) -> Result<(MeasureSpace, FunctionVec)> {
    let n = rng.random_range(1..=dim_max);
    let space = random_space(rng, n, field, weight_range)?;
    let mut f = random_function(rng, n, field);
    let style = rng.random_range(0..10);
    if style < 5 {
        if rng.random_bool(0.3) {
            f = zero_some(rng, &f);
        }
        return Ok((space, f));
    }
    let mut v = f.into_values();
    let single_support = |v: &mut Vec<Scalar>, rng: &mut R| {
        let keep = rng.random_range(0..v.len());
        for (i, z) in v.iter_mut().enumerate() {
            if i != keep {
                *z = Scalar::new(0.0, 0.0);
            }
        }
    };
    match (kind, style) {
        (_, 5) => single_support(&mut v, rng),
        (SpaceKind::Sup, 6 | 7) => {
            let r = v[0].norm().max(0.1);
            for z in v.iter_mut() {
                *z = unimodular(rng, field) * r;
            }
        }
        (SpaceKind::Sup, _) => single_support(&mut v, rng),
        (SpaceKind::L1, _) if n == 2 => {
            let m = space.weight(0) * v[0].norm();
            v[1] = unimodular(rng, field) * (m / space.weight(1));
        }
        (SpaceKind::Lp { p }, _) if n >= 2 => {
            let (a, b) = (0, rng.random_range(1..n));
            for (i, z) in v.iter_mut().enumerate() {
                if i != a && i != b {
                    *z = Scalar::new(0.0, 0.0);
                }
            }
            let m = space.weight(a) * v[a].norm().powf(p);
            v[b] = unimodular(rng, field) * (m / space.weight(b)).powf(1.0 / p);
        }
        _ => single_support(&mut v, rng),
    }
    Ok((space, FunctionVec::new(v)?))
}

/// Searches for `g` contradicting symmetry of `f` on `side`; returns the
/// first oracle-verified counterexample.
fn falsify(
    criterion: &dyn OrthogonalityCriterion,
    space: &MeasureSpace,
    f: &FunctionVec,
    side: Side,
    samples: u64,
    seed: u64,
    tol: &Tolerances,
) -> Result<(Option<FunctionVec>, u64)> {
    let kind = criterion.kind();
    let mut rng = rng_from_seed(seed);
    let mut tested = 0;
    for _ in 0..samples {
        let g = match side {
            Side::Left => {
                if f.is_zero() {
                    random_function(&mut rng, space.len(), space.field())
                } else {
                    criterion.orthogonal_direction(space, f, &mut rng, tol)?.g
                }
            }
            Side::Right => {
                // g = r + λ* f with λ* the best-approximation coefficient,
                // solved exactly for Lp.
                let r = random_function(&mut rng, space.len(), space.field());
                let lambda = match kind {
                    SpaceKind::Lp { p } if !f.is_zero() => lp::best_approximation(space, &r, f, p)?,
                    _ => oracle_orthogonal(space, kind, &r, f, tol)?.argmin,
                };
                r.axpy(lambda, f)
            }
        };
        let (hypothesis, conclusion) = match side {
            Side::Left => ((f, &g), (&g, f)),
            Side::Right => ((&g, f), (f, &g)),
        };
        tested += 1;
        if oracle_orthogonal(space, kind, conclusion.0, conclusion.1, tol)?.verdict != OracleVerdict::NotOrthogonal {
            continue;
        }
        if oracle_orthogonal(space, kind, hypothesis.0, hypothesis.1, tol)?.verdict == OracleVerdict::Orthogonal {
            return Ok((Some(g), tested));
        }
        tested -= 1;
    }
    Ok((None, tested))
}

/// Symmetric classifications survive a randomised falsification search;
/// asymmetric ones yield oracle-verified witnesses.
pub fn classification_soundness(
    kinds: &[SpaceKind],
    trials: u64,
    falsify_samples: u64,
    cfg: &SuiteConfig,
) -> Result<SuiteReport> {
    let mut tally = Tally::new(format!("classification_soundness/{}", family_label(kinds)));
    let criteria: Vec<_> = kinds.iter().map(|&k| criterion_for(k)).collect::<Result<_>>()?;
    for i in 0..trials {
        let seed = derive_seed(cfg.seed, i);
        let criterion = &criteria[(i % criteria.len() as u64) as usize];
        let kind = criterion.kind();
        let mut rng = rng_from_seed(seed);
        let (space, f) = random_point(&mut rng, kind, cfg.dim_max, trial_field(i), trial_weights(i))?;
        let verdict = criterion.classify(&space, &f, &cfg.tol)?;
        let mut problems = Vec::new();
        for side in [Side::Left, Side::Right] {
            if verdict.is_symmetric(side) {
                tally.count(&format!("{side:?}_symmetric").to_lowercase());
                let (found, tested) =
                    falsify(criterion.as_ref(), &space, &f, side, falsify_samples, seed ^ side as u64, &cfg.tol)?;
                *tally.counters.entry("falsification_samples".into()).or_default() += tested;
                if let Some(g) = found {
                    problems.push(format!("{side:?}-symmetric but falsified by g = {:?}", g.values()));
                }
            } else {
                tally.count(&format!("{side:?}_asymmetric").to_lowercase());
                match criterion.asymmetry_witness(&space, &f, &cfg.tol, side) {
                    Ok(Some(w)) if w.is_valid() => {}
                    Ok(_) => problems.push(format!("{side:?}: no oracle-verified witness")),
                    Err(e) => problems.push(format!("{side:?}: {e}")),
                }
            }
        }
        if problems.is_empty() {
            tally.pass();
        } else {
            tally.fail(i, seed, problems.join("; "), Some(InstanceRecord::new(kind, &space, &f, None)));
        }
    }
    Ok(tally.finish())
}

/// Smooth points are right-additive on random orthogonal pairs; non-smooth
/// sup and L1 points yield a verified additivity violation.
pub fn right_additivity(
    kinds: &[SpaceKind],
    smooth_trials: u64,
    pairs: u64,
    nonsmooth_trials: u64,
    cfg: &SuiteConfig,
) -> Result<SuiteReport> {
    let mut tally = Tally::new(format!("right_additivity/{}", family_label(kinds)));
    let criteria: Vec<_> = kinds.iter().map(|&k| criterion_for(k)).collect::<Result<_>>()?;
    let mut tested = 0;
    let mut draws = 0u64;
    while tested < smooth_trials {
        let i = draws;
        draws += 1;
        let seed = derive_seed(cfg.seed, i);
        let criterion = &criteria[(i % criteria.len() as u64) as usize];
        let kind = criterion.kind();
        let mut rng = rng_from_seed(seed);
        let field = trial_field(i);
        let n = rng.random_range(1..=cfg.dim_max);
        let space = random_space(&mut rng, n, field, trial_weights(i))?;
        let f = nonzero_function(&mut rng, n, field);
        let verdict = criterion.classify(&space, &f, &cfg.tol)?;
        if !verdict.is_smooth {
            tally.count("skipped_non_smooth_draw");
            continue;
        }
        tested += 1;
        let mut problem = None;
        for _ in 0..pairs {
            let g = criterion.orthogonal_direction(&space, &f, &mut rng, &cfg.tol)?.g;
            let h = criterion.orthogonal_direction(&space, &f, &mut rng, &cfg.tol)?.g;
            let sum = g.add(&h);
            let analytic = criterion.orthogonal(&space, &f, &sum, &cfg.tol)?.orthogonal;
            let oracle = oracle_orthogonal(&space, kind, &f, &sum, &cfg.tol)?.verdict;
            if !analytic || oracle != OracleVerdict::Orthogonal {
                problem = Some((sum, format!("f ⊥ g and f ⊥ h, f ⊥ (g + h) disputed: analytic {analytic}, oracle {oracle:?}")));
                break;
            }
        }
        match problem {
            None => tally.pass(),
            Some((sum, msg)) => tally.fail(i, seed, msg, Some(InstanceRecord::new(kind, &space, &f, Some(&sum)))),
        }
    }

    for (k, criterion) in criteria.iter().enumerate() {
        let kind = criterion.kind();
        if matches!(kind, SpaceKind::Lp { .. }) {
            continue;
        }
        for j in 0..nonsmooth_trials {
            let i = draws + k as u64 * nonsmooth_trials + j;
            let seed = derive_seed(cfg.seed, i);
            let mut rng = rng_from_seed(seed);
            let field = trial_field(j);
            let n = rng.random_range(2..=cfg.dim_max.max(2));
            let space = random_space(&mut rng, n, field, trial_weights(j))?;
            let mut v = nonzero_function(&mut rng, n, field).into_values();
            let mut idx: Vec<usize> = (0..n).collect();
            idx.shuffle(&mut rng);
            match kind {
                SpaceKind::Sup => {
                    let m = v.iter().map(|z| z.norm()).fold(0.0, f64::max);
                    for &a in &idx[..2] {
                        v[a] = if is_zero(v[a]) { unimodular(&mut rng, field) } else { sgn(v[a]) } * m;
                    }
                }
                _ => v[idx[0]] = Scalar::new(0.0, 0.0),
            }
            let f = FunctionVec::new(v)?;
            let rec = || Some(InstanceRecord::new(kind, &space, &f, None));
            if f.is_zero() || criterion.classify(&space, &f, &cfg.tol)?.is_smooth {
                tally.fail(i, seed, "constructed point is not non-smooth", rec());
                continue;
            }
            match criterion.additivity_violation(&space, &f, &cfg.tol)? {
                Some(w) if w.is_valid() => tally.pass(),
                _ => tally.fail(i, seed, "no verified additivity violation", rec()),
            }
        }
    }
    Ok(tally.finish())
}

/// For p = 2 orthogonality is symmetric and every point is symmetric.
pub fn hilbert_degeneration(trials: u64, cfg: &SuiteConfig) -> Result<SuiteReport> {
    let mut tally = Tally::new("hilbert_degeneration");
    let criterion = criterion_for(SpaceKind::Lp { p: 2.0 })?;
    for i in 0..trials {
        let seed = derive_seed(cfg.seed, i);
        let mut inst = random_instance(seed, (1, cfg.dim_max), trial_field(i), trial_weights(i))?;
        if i % 3 == 2 && !inst.f.is_zero() {
            let mut rng = rng_from_seed(seed ^ 0xA5A5);
            inst.g = criterion.orthogonal_direction(&inst.space, &inst.f, &mut rng, &cfg.tol)?.g;
        }
        let fg = criterion.orthogonal(&inst.space, &inst.f, &inst.g, &cfg.tol)?.orthogonal;
        let gf = criterion.orthogonal(&inst.space, &inst.g, &inst.f, &cfg.tol)?.orthogonal;
        tally.count(if fg { "orthogonal" } else { "not_orthogonal" });
        let class = criterion.classify(&inst.space, &inst.f, &cfg.tol)?;
        let symmetric = inst.f.is_zero() || (class.is_left_symmetric && class.is_right_symmetric);
        if fg == gf && symmetric {
            tally.pass();
        } else {
            let rec = InstanceRecord::new(criterion.kind(), &inst.space, &inst.f, Some(&inst.g));
            tally.fail(i, seed, format!("f⊥g = {fg}, g⊥f = {gf}, symmetric = {symmetric}"), Some(rec));
        }
    }
    Ok(tally.finish())
}

fn flags(v: &crate::verdict::SymmetryVerdict) -> (bool, bool, bool) {
    (v.is_smooth, v.is_left_symmetric, v.is_right_symmetric)
}

/// Verdicts are unchanged by scaling `f` and `g`, by permuting atoms, and
/// by rescaling every weight by the same `c > 0`.
pub fn invariance(kinds: &[SpaceKind], trials: u64, cfg: &SuiteConfig) -> Result<SuiteReport> {
    let mut tally = Tally::new(format!("invariance/{}", family_label(kinds)));
    let criteria: Vec<_> = kinds.iter().map(|&k| criterion_for(k)).collect::<Result<_>>()?;
    for i in 0..trials {
        let seed = derive_seed(cfg.seed, i);
        let criterion = &criteria[(i % criteria.len() as u64) as usize];
        let kind = criterion.kind();
        let field = trial_field(i);
        let mut inst = random_instance(seed, (1, cfg.dim_max), field, trial_weights(i))?;
        let mut rng = rng_from_seed(seed ^ 0x1234);
        if i % 3 == 2 && !inst.f.is_zero() {
            inst.g = criterion.orthogonal_direction(&inst.space, &inst.f, &mut rng, &cfg.tol)?.g;
        }
        let (space, f, g) = (&inst.space, &inst.f, &inst.g);
        let base = criterion.orthogonal(space, f, g, &cfg.tol)?.orthogonal;
        let base_class = flags(&criterion.classify(space, f, &cfg.tol)?);
        tally.count(if base { "orthogonal" } else { "not_orthogonal" });

        let mut problems = Vec::new();
        let (alpha, beta) = (random_multiplier(&mut rng, field), random_multiplier(&mut rng, field));
        if criterion.orthogonal(space, &f.scale(alpha), &g.scale(beta), &cfg.tol)?.orthogonal != base {
            problems.push(format!("homogeneity with alpha = {alpha}, beta = {beta}"));
        }

        let mut perm: Vec<usize> = (0..space.len()).collect();
        perm.shuffle(&mut rng);
        let ps = space.permuted(&perm)?;
        let (pf, pg) = (f.permuted(&perm), g.permuted(&perm));
        if criterion.orthogonal(&ps, &pf, &pg, &cfg.tol)?.orthogonal != base {
            problems.push(format!("permutation {perm:?} changed the verdict"));
        }
        if flags(&criterion.classify(&ps, &pf, &cfg.tol)?) != base_class {
            problems.push(format!("permutation {perm:?} changed the classification"));
        }

        let c: f64 = rng.random_range((0.1f64).ln()..(10.0f64).ln()).exp();
        let rs = space.rescaled(c)?;
        if criterion.orthogonal(&rs, f, g, &cfg.tol)?.orthogonal != base {
            problems.push(format!("weight rescaling by {c} changed the verdict"));
        }
        if flags(&criterion.classify(&rs, f, &cfg.tol)?) != base_class {
            problems.push(format!("weight rescaling by {c} changed the classification"));
        }

        if problems.is_empty() {
            tally.pass();
        } else {
            tally.fail(i, seed, problems.join("; "), Some(InstanceRecord::new(kind, space, f, Some(g))));
        }
    }
    Ok(tally.finish())
}

/// Suite sizes for a self-test run.
#[derive(Debug, Clone, PartialEq)]
pub struct Plan {
    pub trials: u64,
    pub families: Vec<String>,
    pub p_list: Vec<f64>,
    pub falsify_samples: u64,
    pub additivity_pairs: u64,
}

impl Plan {
    pub fn new(trials: u64) -> Self {
        Self {
            trials,
            families: vec!["sup".into(), "l1".into(), "lp".into()],
            p_list: vec![1.2, 1.5, 3.0, 4.0, 7.0],
            falsify_samples: 20,
            additivity_pairs: 5,
        }
    }

    fn kinds(&self) -> Result<Vec<Vec<SpaceKind>>> {
        self.families
            .iter()
            .map(|name| match name.as_str() {
                "sup" => Ok(vec![SpaceKind::Sup]),
                "l1" => Ok(vec![SpaceKind::L1]),
                "lp" => self.p_list.iter().map(|&p| SpaceKind::lp(p)).collect(),
                other => Err(crate::Error::UnknownFamily(other.to_string())),
            })
            .collect()
    }
}

/// The `selftest` command: oracle agreement, homogeneity and the other
/// invariances, right-additivity, witness validity and p = 2 symmetry.
pub fn run_plan(plan: &Plan, cfg: &SuiteConfig) -> Result<Vec<SuiteReport>> {
    let mut reports = Vec::new();
    let smooth = (plan.trials / 10).max(1);
    for kinds in plan.kinds()? {
        reports.push(oracle_agreement(&kinds, plan.trials, cfg)?);
        reports.push(invariance(&kinds, plan.trials, cfg)?);
        reports.push(right_additivity(&kinds, smooth, plan.additivity_pairs, smooth, cfg)?);
        reports.push(classification_soundness(&kinds, smooth, plan.falsify_samples, cfg)?);
    }
    if plan.families.iter().any(|f| f == "lp") {
        reports.push(hilbert_degeneration(plan.trials, cfg)?);
    }
    Ok(reports)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_suites_pass() {
        let cfg = SuiteConfig { seed: 7, ..SuiteConfig::default() };
        for kinds in [vec![SpaceKind::Sup], vec![SpaceKind::L1], vec![SpaceKind::Lp { p: 3.0 }, SpaceKind::Lp { p: 1.5 }]] {
            for r in [
                oracle_agreement(&kinds, 60, &cfg).unwrap(),
                invariance(&kinds, 60, &cfg).unwrap(),
                right_additivity(&kinds, 10, 3, 10, &cfg).unwrap(),
                classification_soundness(&kinds, 12, 10, &cfg).unwrap(),
            ] {
                assert!(r.ok, "{r:#?}");
            }
        }
        let h = hull_equivalence(300, &cfg).unwrap();
        assert!(h.ok, "{h:#?}");
        assert!(hilbert_degeneration(60, &cfg).unwrap().ok);
        assert!(support_functionals(&[1.5, 3.0], 50, &cfg).unwrap().ok);
        assert!(finite_difference(&[1.5, 3.0], 50, &cfg).unwrap().ok);
    }

    #[test]
    fn absurd_attainment_tolerance_is_caught() {
        let cfg = SuiteConfig {
            seed: 7,
            tol: Tolerances { rel_attain: 0.5, ..Tolerances::default() },
            ..SuiteConfig::default()
        };
        let r = oracle_agreement(&[SpaceKind::Sup], 100, &cfg).unwrap();
        assert!(!r.ok && r.failed > 0);
        assert!(!r.failures.is_empty() && r.failures[0].instance.is_some());
    }

    #[test]
    fn symmetric_point_generator_hits_symmetric_classes() {
        let mut rng = rng_from_seed(1);
        for kind in [SpaceKind::Sup, SpaceKind::L1, SpaceKind::Lp { p: 3.0 }] {
            let c = criterion_for(kind).unwrap();
            let mut symmetric = 0;
            for i in 0..200 {
                let (s, f) = random_point(&mut rng, kind, 6, trial_field(i), (0.1, 10.0)).unwrap();
                let v = c.classify(&s, &f, &Tolerances::default()).unwrap();
                if v.is_left_symmetric || v.is_right_symmetric {
                    symmetric += 1;
                }
            }
            assert!(symmetric > 40, "{kind}: {symmetric}");
        }
    }
}
