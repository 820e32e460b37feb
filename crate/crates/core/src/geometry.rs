//! Origin membership in the convex hull of a finite set of scalars.
//!
//! Points are normalised by their largest modulus before testing, and the
//! origin counts as inside when it lies within `eps` of the normalised hull.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::space::Scalar;

/// Largest point set accepted by [`contains_origin_bruteforce`].
pub const BRUTEFORCE_LIMIT: usize = 25;

#[derive(Debug, Clone, PartialEq)]
pub struct HullQuery {
    pub points: Vec<Scalar>,
    pub eps: f64,
}

impl HullQuery {
    pub fn new(points: Vec<Scalar>, eps: f64) -> Result<Self> {
        let q = Self { points, eps };
        q.validate()?;
        Ok(q)
    }

    fn validate(&self) -> Result<()> {
        if self.points.is_empty() {
            return Err(Error::Domain("hull query needs at least one point".into()));
        }
        if let Some(i) = self.points.iter().position(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(Error::NonFinite(i));
        }
        if !(self.eps >= 0.0 && self.eps.is_finite()) {
            return Err(Error::Domain(format!("hull eps = {} must be >= 0", self.eps)));
        }
        Ok(())
    }

    /// Points divided by the largest modulus; `None` when every point is zero.
    fn normalized(&self) -> Option<Vec<Scalar>> {
        let scale = self.points.iter().map(|z| z.norm()).fold(0.0, f64::max);
        if scale == 0.0 {
            return None;
        }
        Some(self.points.iter().map(|z| z / scale).collect())
    }
}

fn cross(a: Scalar, b: Scalar) -> f64 {
    a.re * b.im - a.im * b.re
}

/// Distance from the origin to the segment `[a, b]`.
fn segment_distance(a: Scalar, b: Scalar) -> f64 {
    let d = b - a;
    let len2 = d.norm_sqr();
    if len2 == 0.0 {
        return a.norm();
    }
    let t = (-(a.re * d.re + a.im * d.im) / len2).clamp(0.0, 1.0);
    (a + d * t).norm()
}

/// Decides whether the origin lies in the (eps-fattened) convex hull.
///
/// Real point sets use an interval test. Complex sets whose points lie on a
/// common line through the origin are projected onto that line; otherwise
/// the arguments of the points are sorted and the origin is outside exactly
/// when some angular gap exceeds pi, i.e. all points fit in an open
/// half-plane. In that case the distance to the hull decides.
pub fn contains_origin(q: &HullQuery) -> Result<bool> {
    q.validate()?;
    let Some(pts) = q.normalized() else {
        return Ok(true);
    };
    let eps = q.eps;
    if pts.iter().any(|z| z.norm() <= eps) {
        return Ok(true);
    }

    if pts.iter().all(|z| z.im == 0.0) {
        return Ok(interval_contains(pts.iter().map(|z| z.re), eps));
    }

    let anchor = *pts
        .iter()
        .max_by(|a, b| a.norm().total_cmp(&b.norm()))
        .expect("nonempty");
    let dir = anchor / anchor.norm();
    if pts.iter().all(|&z| cross(dir, z).abs() <= eps) {
        return Ok(interval_contains(pts.iter().map(|&z| (dir.conj() * z).re), eps));
    }

    let mut angles: Vec<f64> = pts.iter().map(|z| z.arg()).collect();
    angles.sort_by(f64::total_cmp);
    let wrap = angles[0] + 2.0 * PI - angles[angles.len() - 1];
    let max_gap = angles.windows(2).map(|w| w[1] - w[0]).fold(wrap, f64::max);
    if max_gap <= PI {
        return Ok(true);
    }
    Ok(hull_distance_outside(&pts) <= eps)
}

fn interval_contains(xs: impl Iterator<Item = f64>, eps: f64) -> bool {
    let (lo, hi) = xs.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), x| {
        (lo.min(x), hi.max(x))
    });
    lo <= eps && hi >= -eps
}

/// Distance from the origin to the hull, valid when the origin is outside:
/// the nearest hull point then lies on a segment between two of the points.
fn hull_distance_outside(pts: &[Scalar]) -> f64 {
    let mut best = pts.iter().map(|z| z.norm()).fold(f64::INFINITY, f64::min);
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            best = best.min(segment_distance(pts[i], pts[j]));
        }
    }
    best
}

/// Independent check by enumeration: singletons, pairs and triples. By
/// Carathéodory in the plane, the origin is in the hull iff it is in the
/// hull of at most three points; when it is outside but within `eps`, the
/// nearest hull point lies on a segment between two points.
pub fn contains_origin_bruteforce(q: &HullQuery) -> Result<bool> {
    q.validate()?;
    if q.points.len() > BRUTEFORCE_LIMIT {
        return Err(Error::TooManyPoints(q.points.len()));
    }
    let Some(pts) = q.normalized() else {
        return Ok(true);
    };
    let eps = q.eps;
    let n = pts.len();
    if pts.iter().any(|z| z.norm() <= eps) {
        return Ok(true);
    }
    for i in 0..n {
        for j in i + 1..n {
            if segment_distance(pts[i], pts[j]) <= eps {
                return Ok(true);
            }
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                if let Some(bary) = barycentric_origin(pts[i], pts[j], pts[k]) {
                    if bary.iter().all(|&c| c >= 0.0) {
                        return Ok(true);
                    }
                }
            }
        }
    }
    Ok(false)
}

/// Barycentric coordinates of the origin with respect to the triangle
/// `(a, b, c)`. `None` when the triangle is degenerate or the origin sits
/// on the line through one of its edges (up to rounding); those cases are
/// settled by the segment distances.
pub fn barycentric_origin(a: Scalar, b: Scalar, c: Scalar) -> Option<[f64; 3]> {
    const RELIABLE: f64 = 1e-14;
    let pairs = [(b, c), (c, a), (a, b)];
    let mut o = [0.0; 3];
    for (k, (x, y)) in pairs.into_iter().enumerate() {
        o[k] = cross(x, y);
        if o[k].abs() <= RELIABLE * x.norm() * y.norm() {
            return None;
        }
    }
    let total: f64 = o.iter().sum();
    if total == 0.0 {
        return None;
    }
    Some(o.map(|v| v / total))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Scalar {
        Scalar::new(re, im)
    }

    fn q(points: Vec<Scalar>) -> HullQuery {
        HullQuery::new(points, 0.0).unwrap()
    }

    #[test]
    fn symmetric_pair_contains_origin() {
        let h = q(vec![c(1.0, 0.0), c(-1.0, 0.0)]);
        assert!(contains_origin(&h).unwrap());
        assert!(contains_origin_bruteforce(&h).unwrap());
    }

    #[test]
    fn open_half_plane_excludes_origin() {
        let h = q(vec![c(1.0, 1.0), c(2.0, 1.0), c(1.0, 2.0)]);
        assert!(!contains_origin(&h).unwrap());
        assert!(!contains_origin_bruteforce(&h).unwrap());
    }

    #[test]
    fn triangle_around_origin() {
        let (a, b, cc) = (c(1.0, 0.0), c(0.0, 1.0), c(-1.0, -1.0));
        // a + b + c = 0, so the barycentric weights are all one third.
        let bary = barycentric_origin(a, b, cc).unwrap();
        for w in bary {
            assert!((w - 1.0 / 3.0).abs() < 1e-15);
        }
        let h = q(vec![a, b, cc]);
        assert!(contains_origin(&h).unwrap());
        assert!(contains_origin_bruteforce(&h).unwrap());
    }

    #[test]
    fn bruteforce_small_cases() {
        assert!(!contains_origin_bruteforce(&q(vec![c(5.0, 0.0)])).unwrap());
        assert!(contains_origin_bruteforce(&q(vec![c(2.0, 0.0), c(-3.0, 0.0)])).unwrap());
    }

    #[test]
    fn zero_point_and_all_zero_sets() {
        assert!(contains_origin(&q(vec![c(0.0, 0.0)])).unwrap());
        assert!(contains_origin(&q(vec![c(3.0, 1.0), c(0.0, 0.0)])).unwrap());
    }

    #[test]
    fn collinear_complex_sets() {
        let d = c(0.6, 0.8);
        let through = q(vec![d * 2.0, d * -0.5, d * 1.0]);
        assert!(contains_origin(&through).unwrap());
        let one_sided = q(vec![d * 2.0, d * 0.5]);
        assert!(!contains_origin(&one_sided).unwrap());
        assert!(!contains_origin_bruteforce(&one_sided).unwrap());
    }

    #[test]
    fn eps_fattening_is_scale_free() {
        // Hull is the segment [1e-13 + i, 1e-13 - i] at distance 1e-13.
        let pts = vec![c(1e-13, 1.0), c(1e-13, -1.0)];
        assert!(!contains_origin(&HullQuery::new(pts.clone(), 1e-14).unwrap()).unwrap());
        assert!(contains_origin(&HullQuery::new(pts.clone(), 1e-12).unwrap()).unwrap());
        let scaled: Vec<_> = pts.iter().map(|z| z * 1e8).collect();
        assert!(contains_origin(&HullQuery::new(scaled, 1e-12).unwrap()).unwrap());
    }

    #[test]
    fn invalid_queries() {
        assert!(HullQuery::new(vec![], 0.0).is_err());
        assert!(HullQuery::new(vec![c(1.0, 0.0)], -1.0).is_err());
        let big = HullQuery::new(vec![c(1.0, 0.0); 26], 0.0).unwrap();
        assert_eq!(contains_origin_bruteforce(&big), Err(Error::TooManyPoints(26)));
        assert!(contains_origin(&big).is_ok());
    }
}
