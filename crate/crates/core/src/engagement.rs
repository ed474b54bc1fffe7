//! One-versus-one engagement geometry: the Apollonius circle of an
//! attacker/defender pair, the optimal capture point, the saddle-point
//! feedback strategies, and the analytic velocity of the capture point.
//!
//! Speeds are normalized so the attacker moves at unit speed and the
//! defender at `1/nu`; only the ratio `nu` matters to the geometry, and
//! this normalization matches the clock used by the reference scenarios.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geom::{degeneracy_tol, unit_vector, Circle, Point2};

#[derive(Debug, Error, Clone, Copy, PartialEq, Eq)]
pub enum EngagementError {
    /// Attacker and defender coincide; the Apollonius circle is undefined.
    #[error("attacker and defender positions coincide")]
    CoincidentAgents,
    /// The target lies inside the Apollonius disk, where the capture-point
    /// velocity is undefined (the capture point is pinned to the target).
    #[error("target lies inside the Apollonius circle")]
    TargetInsideCircle,
    /// An agent sits exactly at its aim point; no direction exists.
    #[error("agent is already at its aim point")]
    DegenerateDirection,
    /// Speed ratio outside the open interval (0, 1).
    #[error("speed ratio must satisfy 0 < nu < 1")]
    InvalidSpeedRatio,
}

/// Attacker-to-defender speed ratio, constrained to `(0, 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct SpeedRatio(f64);

impl TryFrom<f64> for SpeedRatio {
    type Error = EngagementError;
    fn try_from(nu: f64) -> Result<Self, EngagementError> {
        SpeedRatio::new(nu)
    }
}

impl From<SpeedRatio> for f64 {
    fn from(s: SpeedRatio) -> f64 {
        s.0
    }
}

impl SpeedRatio {
    pub fn new(nu: f64) -> Result<Self, EngagementError> {
        if !(nu.is_finite() && nu > 0.0 && nu < 1.0) {
            return Err(EngagementError::InvalidSpeedRatio);
        }
        Ok(SpeedRatio(nu))
    }

    pub fn value(self) -> f64 {
        self.0
    }

    /// Coefficient of the attacker position in the circle center.
    pub fn alpha(self) -> f64 {
        1.0 / (1.0 - self.0 * self.0)
    }

    /// Coefficient of the defender position in the circle center.
    pub fn beta(self) -> f64 {
        self.0 * self.0 / (1.0 - self.0 * self.0)
    }

    /// Radius per unit of attacker-defender separation.
    pub fn gamma(self) -> f64 {
        self.0 / (1.0 - self.0 * self.0)
    }

    pub fn attacker_speed(self) -> f64 {
        1.0
    }

    pub fn defender_speed(self) -> f64 {
        1.0 / self.0
    }
}

/// Apollonius circle of an attacker/defender pair: the closed disk of
/// points the slower attacker reaches no later than the defender.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ApolloniusCircle {
    pub center: Point2,
    pub radius: f64,
    pub attacker: Point2,
    pub defender: Point2,
    pub nu: SpeedRatio,
}

impl ApolloniusCircle {
    pub fn circle(&self) -> Circle {
        Circle::new(self.center, self.radius)
    }

    /// Closed-disk membership.
    pub fn contains(&self, p: Point2) -> bool {
        self.center.dist(p) <= self.radius
    }

    /// Point of the boundary at angle `theta` from the center.
    pub fn boundary_point(&self, theta: f64) -> Point2 {
        self.center + Point2::new(theta.cos(), theta.sin()) * self.radius
    }
}

/// Construct the Apollonius circle for the pair.
pub fn apollonius(
    attacker: Point2,
    defender: Point2,
    nu: SpeedRatio,
) -> Result<ApolloniusCircle, EngagementError> {
    let sep = attacker.dist(defender);
    if sep <= degeneracy_tol() {
        return Err(EngagementError::CoincidentAgents);
    }
    let center = attacker * nu.alpha() - defender * nu.beta();
    Ok(ApolloniusCircle {
        center,
        radius: nu.gamma() * sep,
        attacker,
        defender,
        nu,
    })
}

/// Point of the Apollonius disk closest to the target, with its distance.
///
/// When the target lies inside the disk the engagement is already won by
/// the attacker; the capture point is pinned to the target itself so that
/// aiming strategies remain well defined and realize a zero miss distance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CapturePoint {
    pub point: Point2,
    pub distance_to_target: f64,
    pub target_inside: bool,
}

pub fn capture_point(ac: &ApolloniusCircle, target: Point2) -> CapturePoint {
    let d = target.dist(ac.center);
    if d > ac.radius {
        // Safe: d > radius >= 0 keeps center and target distinct.
        let dir = (target - ac.center) * (1.0 / d);
        CapturePoint {
            point: ac.center + dir * ac.radius,
            distance_to_target: d - ac.radius,
            target_inside: false,
        }
    } else {
        CapturePoint {
            point: target,
            distance_to_target: 0.0,
            target_inside: true,
        }
    }
}

/// Equilibrium feedback control for the attacker: the unit vector toward
/// the current capture point.
pub fn strategy_1v1_attacker(
    attacker: Point2,
    defender: Point2,
    target: Point2,
    nu: SpeedRatio,
) -> Result<Point2, EngagementError> {
    let ac = apollonius(attacker, defender, nu)?;
    let xb = capture_point(&ac, target).point;
    unit_vector(attacker, xb).map_err(|_| EngagementError::DegenerateDirection)
}

/// Equilibrium feedback control for the defender.
pub fn strategy_1v1_defender(
    attacker: Point2,
    defender: Point2,
    target: Point2,
    nu: SpeedRatio,
) -> Result<Point2, EngagementError> {
    let ac = apollonius(attacker, defender, nu)?;
    let xb = capture_point(&ac, target).point;
    unit_vector(defender, xb).map_err(|_| EngagementError::DegenerateDirection)
}

/// Analytic time derivative of the capture point for given agent
/// velocities, valid while the target stays strictly outside the disk.
///
/// With `a = attacker - defender` and `b = target - center`, the capture
/// point is `center + gamma * |a| * b / |b|`; differentiating gives
///
/// ```text
/// xb_dot = c_dot + gamma * (a . a_dot / |a|) * b / |b|
///        + gamma * |a| * (b_dot / |b| - b (b . b_dot) / |b|^3)
/// ```
///
/// with `c_dot = alpha * v_attacker - beta * v_defender` and
/// `b_dot = -c_dot`. Under the pair of equilibrium strategies this
/// vanishes; any unilateral deviation in heading makes it nonzero.
pub fn capture_point_velocity(
    attacker: Point2,
    defender: Point2,
    target: Point2,
    attacker_vel: Point2,
    defender_vel: Point2,
    nu: SpeedRatio,
) -> Result<Point2, EngagementError> {
    let ac = apollonius(attacker, defender, nu)?;
    if target.dist(ac.center) <= ac.radius {
        return Err(EngagementError::TargetInsideCircle);
    }
    let a = attacker - defender;
    let a_dot = attacker_vel - defender_vel;
    let c_dot = attacker_vel * nu.alpha() - defender_vel * nu.beta();
    let b = target - ac.center;
    let b_dot = -c_dot;
    let na = a.norm();
    let nb = b.norm();
    let gamma = nu.gamma();
    let radial = b * (gamma * a.dot(a_dot) / (na * nb));
    let swing = (b_dot * (1.0 / nb) - b * (b.dot(b_dot) / (nb * nb * nb))) * (gamma * na);
    Ok(c_dot + radial + swing)
}
