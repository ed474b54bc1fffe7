//! Planar geometry primitives: points, circles, segments, half-planes,
//! triangles, and annular sectors, plus the intersection and membership
//! predicates the engagement and deviation constructions are built on.
//!
//! Membership conventions: half-plane and annular-sector tests are strict
//! (open sets), triangle and circle tests include the boundary (closed
//! sets). Every degeneracy check shares one tolerance, [`degeneracy_tol`].

use std::ops::{Add, Mul, Neg, Sub};
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Default coincidence/zero-length threshold, in game-length units.
pub const DEFAULT_DEGENERACY_TOL: f64 = 1e-12;

static DEGENERACY_TOL: OnceLock<f64> = OnceLock::new();

/// Global degeneracy tolerance. The environment variable `TDG_SEED_TOL`
/// overrides the default once per process; it is read on first use.
pub fn degeneracy_tol() -> f64 {
    *DEGENERACY_TOL.get_or_init(|| {
        std::env::var("TDG_SEED_TOL")
            .ok()
            .and_then(|s| s.parse::<f64>().ok())
            .filter(|t| t.is_finite() && *t > 0.0)
            .unwrap_or(DEFAULT_DEGENERACY_TOL)
    })
}

#[derive(Debug, Error, Clone, Copy, PartialEq, Eq)]
pub enum GeomError {
    /// A direction was requested between two coincident points.
    #[error("cannot form a direction between coincident points")]
    DegenerateDirection,
    /// Half-plane anchors coincide, so the bisector is undefined.
    #[error("half-plane anchors coincide")]
    CoincidentAnchors,
}

/// A point (or free vector) in the plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
#[serde(from = "[f64; 2]", into = "[f64; 2]")]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl From<[f64; 2]> for Point2 {
    fn from(a: [f64; 2]) -> Self {
        Point2 { x: a[0], y: a[1] }
    }
}

impl From<Point2> for [f64; 2] {
    fn from(p: Point2) -> Self {
        [p.x, p.y]
    }
}

impl Point2 {
    pub const fn new(x: f64, y: f64) -> Self {
        Point2 { x, y }
    }

    pub const ORIGIN: Point2 = Point2::new(0.0, 0.0);

    pub fn dot(self, other: Point2) -> f64 {
        self.x * other.x + self.y * other.y
    }

    /// z-component of the cross product of `self` and `other` as vectors.
    pub fn cross(self, other: Point2) -> f64 {
        self.x * other.y - self.y * other.x
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn norm_sq(self) -> f64 {
        self.x * self.x + self.y * self.y
    }

    pub fn dist(self, other: Point2) -> f64 {
        (other - self).norm()
    }

    pub fn dist_sq(self, other: Point2) -> f64 {
        (other - self).norm_sq()
    }

    /// Counterclockwise rotation by 90 degrees.
    pub fn perp(self) -> Point2 {
        Point2::new(-self.y, self.x)
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

impl Add for Point2 {
    type Output = Point2;
    fn add(self, rhs: Point2) -> Point2 {
        Point2::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl Sub for Point2 {
    type Output = Point2;
    fn sub(self, rhs: Point2) -> Point2 {
        Point2::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl Mul<f64> for Point2 {
    type Output = Point2;
    fn mul(self, s: f64) -> Point2 {
        Point2::new(self.x * s, self.y * s)
    }
}

impl Neg for Point2 {
    type Output = Point2;
    fn neg(self) -> Point2 {
        Point2::new(-self.x, -self.y)
    }
}

/// Unit vector pointing from `from` toward `to`.
///
/// Fails with [`GeomError::DegenerateDirection`] when the points coincide
/// within [`degeneracy_tol`].
pub fn unit_vector(from: Point2, to: Point2) -> Result<Point2, GeomError> {
    let d = to - from;
    let n = d.norm();
    if n <= degeneracy_tol() {
        return Err(GeomError::DegenerateDirection);
    }
    Ok(d * (1.0 / n))
}

/// Closed disk boundary/interior depending on the predicate used.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Circle {
    pub center: Point2,
    pub radius: f64,
}

impl Circle {
    pub fn new(center: Point2, radius: f64) -> Self {
        debug_assert!(radius >= 0.0, "negative circle radius");
        Circle { center, radius }
    }

    /// Closed-disk membership.
    pub fn contains(&self, p: Point2) -> bool {
        self.center.dist(p) <= self.radius
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Segment {
    pub a: Point2,
    pub b: Point2,
}

impl Segment {
    pub fn new(a: Point2, b: Point2) -> Self {
        Segment { a, b }
    }

    pub fn length(&self) -> f64 {
        self.a.dist(self.b)
    }

    /// Point at parameter `t` (0 at `a`, 1 at `b`).
    pub fn point_at(&self, t: f64) -> Point2 {
        self.a + (self.b - self.a) * t
    }

    /// Distance from `p` to the closest point of the segment.
    pub fn distance_to(&self, p: Point2) -> f64 {
        let ab = self.b - self.a;
        let den = ab.norm_sq();
        let t = if den > 0.0 {
            ((p - self.a).dot(ab) / den).clamp(0.0, 1.0)
        } else {
            0.0
        };
        p.dist(self.point_at(t))
    }
}

/// Parameters `t` of the segment where it meets the circle boundary.
///
/// The raw quadratic roots are kept when they fall inside `[0, 1]`
/// (with a degeneracy-sized slack at the endpoints); callers get the
/// crossing points ordered by arclength from `s.a`. Tangency collapses
/// to a single point.
fn segment_circle_params(s: &Segment, c: &Circle) -> Vec<f64> {
    let tol = degeneracy_tol();
    let d = s.b - s.a;
    let oc = s.a - c.center;
    let qa = d.norm_sq();
    if qa <= tol * tol {
        // Degenerate segment: a point, on the boundary or not.
        if (oc.norm() - c.radius).abs() <= tol {
            return vec![0.0];
        }
        return Vec::new();
    }
    let qb = 2.0 * oc.dot(d);
    let qc = oc.norm_sq() - c.radius * c.radius;
    let disc = qb * qb - 4.0 * qa * qc;
    if disc < 0.0 {
        return Vec::new();
    }
    let sq = disc.sqrt();
    // Stable quadratic: compute the larger-magnitude root first.
    let q = -0.5 * (qb + qb.signum() * sq);
    let (mut t1, mut t2) = if q.abs() > 0.0 {
        (q / qa, qc / q)
    } else {
        (0.0, 0.0)
    };
    if t1 > t2 {
        std::mem::swap(&mut t1, &mut t2);
    }
    let eps = tol / qa.sqrt();
    let mut out = Vec::new();
    for t in [t1, t2] {
        if t >= -eps && t <= 1.0 + eps {
            out.push(t.clamp(0.0, 1.0));
        }
    }
    out.dedup_by(|x, y| (*x - *y).abs() * qa.sqrt() <= tol);
    out
}

/// Intersection points of a segment with a circle boundary, ordered by
/// parameter along the segment from `s.a`. Returns 0, 1, or 2 points.
pub fn segment_circle_intersections(s: &Segment, c: &Circle) -> Vec<Point2> {
    segment_circle_params(s, c)
        .into_iter()
        .map(|t| s.point_at(t))
        .collect()
}

/// Parameter interval of the segment lying inside the closed disk, clipped
/// to `[0, 1]`. `None` when the segment misses the disk entirely.
pub fn segment_disk_interval(s: &Segment, c: &Circle) -> Option<(f64, f64)> {
    let tol = degeneracy_tol();
    let d = s.b - s.a;
    let oc = s.a - c.center;
    let qa = d.norm_sq();
    if qa <= tol * tol {
        return if c.contains(s.a) {
            Some((0.0, 0.0))
        } else {
            None
        };
    }
    let qb = 2.0 * oc.dot(d);
    let qc = oc.norm_sq() - c.radius * c.radius;
    let disc = qb * qb - 4.0 * qa * qc;
    if disc < 0.0 {
        return None;
    }
    let sq = disc.sqrt();
    let q = -0.5 * (qb + qb.signum() * sq);
    let (mut t1, mut t2) = if q.abs() > 0.0 {
        (q / qa, qc / q)
    } else {
        (0.0, 0.0)
    };
    if t1 > t2 {
        std::mem::swap(&mut t1, &mut t2);
    }
    let lo = t1.max(0.0);
    let hi = t2.min(1.0);
    if lo <= hi {
        Some((lo, hi))
    } else {
        None
    }
}

/// Open half-plane of points strictly closer to `anchor1` than to `anchor2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HalfPlane {
    pub anchor1: Point2,
    pub anchor2: Point2,
}

impl HalfPlane {
    pub fn new(anchor1: Point2, anchor2: Point2) -> Result<Self, GeomError> {
        if anchor1.dist(anchor2) <= degeneracy_tol() {
            return Err(GeomError::CoincidentAnchors);
        }
        Ok(HalfPlane { anchor1, anchor2 })
    }
}

/// True iff `p` is strictly closer to `h.anchor1` than to `h.anchor2`.
/// Points on the bisector are excluded.
pub fn in_half_plane(p: Point2, h: &HalfPlane) -> bool {
    p.dist_sq(h.anchor1) < p.dist_sq(h.anchor2)
}

/// Closed triangle, possibly degenerate (collinear vertices are allowed;
/// membership then reduces to an on-segment test).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Triangle {
    pub v1: Point2,
    pub v2: Point2,
    pub v3: Point2,
}

impl Triangle {
    pub fn new(v1: Point2, v2: Point2, v3: Point2) -> Self {
        Triangle { v1, v2, v3 }
    }

    fn edges(&self) -> [Segment; 3] {
        [
            Segment::new(self.v1, self.v2),
            Segment::new(self.v2, self.v3),
            Segment::new(self.v3, self.v1),
        ]
    }

    /// Closed membership via edge orientation signs plus a bounding-box
    /// guard (the guard keeps the degenerate collinear case sound).
    pub fn contains(&self, p: Point2) -> bool {
        let s1 = (self.v2 - self.v1).cross(p - self.v1);
        let s2 = (self.v3 - self.v2).cross(p - self.v2);
        let s3 = (self.v1 - self.v3).cross(p - self.v3);
        let same_side =
            (s1 >= 0.0 && s2 >= 0.0 && s3 >= 0.0) || (s1 <= 0.0 && s2 <= 0.0 && s3 <= 0.0);
        if !same_side {
            return false;
        }
        let (xmin, xmax) = min_max(self.v1.x, self.v2.x, self.v3.x);
        let (ymin, ymax) = min_max(self.v1.y, self.v2.y, self.v3.y);
        p.x >= xmin && p.x <= xmax && p.y >= ymin && p.y <= ymax
    }

    /// Distance from `p` to the closed triangle (zero when inside).
    pub fn distance_to(&self, p: Point2) -> f64 {
        if self.contains(p) {
            return 0.0;
        }
        self.edges()
            .iter()
            .map(|e| e.distance_to(p))
            .fold(f64::INFINITY, f64::min)
    }

    /// Membership of the closed triangle fattened by `slack`.
    pub fn contains_within(&self, p: Point2, slack: f64) -> bool {
        self.distance_to(p) <= slack
    }
}

fn min_max(a: f64, b: f64, c: f64) -> (f64, f64) {
    (a.min(b).min(c), a.max(b).max(c))
}

/// Open annulus `rho_inner < |p - center| < rho_outer` clipped by a closed
/// triangle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnnularSector {
    pub center: Point2,
    pub rho_inner: f64,
    pub rho_outer: f64,
    pub clip: Triangle,
}

impl AnnularSector {
    pub fn new(center: Point2, rho_inner: f64, rho_outer: f64, clip: Triangle) -> Self {
        debug_assert!(0.0 <= rho_inner && rho_inner <= rho_outer);
        AnnularSector {
            center,
            rho_inner,
            rho_outer,
            clip,
        }
    }
}

pub fn in_triangle(p: Point2, t: &Triangle) -> bool {
    t.contains(p)
}

/// Strict radial band membership combined with the triangle clip.
pub fn in_annular_sector(p: Point2, s: &AnnularSector) -> bool {
    let d = p.dist(s.center);
    s.rho_inner < d && d < s.rho_outer && s.clip.contains(p)
}

/// Membership of the closure of the annular sector fattened by `slack`:
/// the radial band is widened by `slack` and the clip triangle tested at
/// distance `slack`.
pub fn in_annular_sector_within(p: Point2, s: &AnnularSector, slack: f64) -> bool {
    let d = p.dist(s.center);
    d >= s.rho_inner - slack && d <= s.rho_outer + slack && s.clip.contains_within(p, slack)
}
