//! Attacker-team deviation logic.
//!
//! One-attacker deviation: the non-critical attacker leaves its nominal
//! pairing and intercepts the critical defender on that defender's
//! straight nominal path, at a boundary point of their mutual Apollonius
//! circle that the critical defender reaches before its teammate.
//!
//! Two-attacker deviation: the critical attacker runs straight at the
//! target, which bends the critical defender's pursuit path; the helper
//! attacker intercepts along that precomputed curved trajectory instead.
//! Feasibility is certified geometrically with an annular-sector bound on
//! the moving capture point and triangle bounds on the pursuing defender.

use thiserror::Error;

use crate::assignment::Assignment;
use crate::engagement::{apollonius, capture_point, SpeedRatio};
use crate::geom::{
    degeneracy_tol, in_annular_sector, in_annular_sector_within, in_half_plane,
    segment_circle_intersections, segment_disk_interval, unit_vector, AnnularSector, Circle,
    HalfPlane, Point2, Segment, Triangle,
};
use crate::sim::GameState;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DeviationError {
    /// No interception point satisfies the timing and membership limits.
    #[error("no feasible interception point")]
    Infeasible,
    /// The pursuit integration hit the time bound without a capture.
    #[error("defender trajectory did not terminate within the time bound")]
    NonConvergence,
    /// Region construction is impossible for this state (coincident pair,
    /// target inside the critical disk, or a missing boundary crossing).
    #[error("degenerate geometry: {0}")]
    DegenerateGeometry(&'static str),
}

/// Which deviation produced an interception plan.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlanKind {
    OneDeviation,
    TwoDeviation,
}

/// Where and when the helper attacker meets the critical defender.
///
/// `eta_attacker` is the helper's straight-line travel time to `point`;
/// `eta_defender` is the time the defender needs to arrive there along
/// its anticipated path. The helper arrives no later and waits.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InterceptPlan {
    pub point: Point2,
    pub eta_attacker: f64,
    pub eta_defender: f64,
    pub kind: PlanKind,
    /// Defender index this plan removes.
    pub target_defender: usize,
}

/// Roles implied by an assignment in the 2v2 game.
#[derive(Debug, Clone, Copy)]
pub struct Roles {
    pub critical_attacker: usize,
    pub critical_defender: usize,
    pub helper_attacker: usize,
    pub helper_defender: usize,
}

impl Roles {
    pub fn from_assignment(assign: &Assignment) -> Roles {
        let i = assign.critical_attacker;
        let helper = 1 - i;
        Roles {
            critical_attacker: i,
            critical_defender: assign.psi[i],
            helper_attacker: helper,
            helper_defender: assign.psi[helper],
        }
    }
}

/// True when both assigned pairs leave the target outside their disks,
/// i.e. the nominal play ends with a defender win.
pub fn defender_win_nominal(state: &GameState, assign: &Assignment, nu: SpeedRatio) -> bool {
    (0..2).all(|i| {
        let j = assign.psi[i];
        match apollonius(state.attackers[i].position, state.defenders[j].position, nu) {
            Ok(ac) => !capture_point(&ac, state.target).target_inside,
            Err(_) => false,
        }
    })
}

/// Interception candidates for the one-attacker deviation: the points of
/// the helper/critical-defender circle boundary cut by the defender's
/// straight nominal path, kept when the critical defender reaches them
/// before its teammate, ordered by the defender's arrival time.
///
/// An empty list means the sufficient condition fails (including states
/// where the nominal play is already an attacker win).
pub fn one_deviation_candidates(
    state: &GameState,
    assign: &Assignment,
    nu: SpeedRatio,
) -> Vec<Point2> {
    let roles = Roles::from_assignment(assign);
    if !defender_win_nominal(state, assign, nu) {
        return Vec::new();
    }
    let critical_a = state.attackers[roles.critical_attacker].position;
    let critical_d = state.defenders[roles.critical_defender].position;
    let helper_a = state.attackers[roles.helper_attacker].position;
    let helper_d = state.defenders[roles.helper_defender].position;

    let Ok(critical_ac) = apollonius(critical_a, critical_d, nu) else {
        return Vec::new();
    };
    let xb = capture_point(&critical_ac, state.target).point;
    let Ok(helper_ac) = apollonius(helper_a, critical_d, nu) else {
        return Vec::new();
    };
    let Ok(nearer) = HalfPlane::new(critical_d, helper_d) else {
        return Vec::new();
    };
    segment_circle_intersections(&Segment::new(critical_d, xb), &helper_ac.circle())
        .into_iter()
        .filter(|p| in_half_plane(*p, &nearer))
        .collect()
}

/// The critical defender's anticipated pursuit path while the critical
/// attacker runs straight at the target, sampled at fixed time steps.
#[derive(Debug, Clone)]
pub struct DefenderTrajectory {
    /// Time-ordered `(t, defender position)` samples; the first is `t = 0`.
    pub samples: Vec<(f64, Point2)>,
    pub step: f64,
    /// Attacker position when the integration stopped.
    pub attacker_end: Point2,
    /// True when the run ended with the pair within `capture_eps`.
    pub captured: bool,
}

impl DefenderTrajectory {
    /// Linear interpolation between samples.
    pub fn position_at(&self, t: f64) -> Point2 {
        let last = self.samples.len() - 1;
        let k = ((t / self.step).floor() as usize).min(last);
        if k == last {
            return self.samples[last].1;
        }
        let (t0, p0) = self.samples[k];
        let (t1, p1) = self.samples[k + 1];
        let w = ((t - t0) / (t1 - t0)).clamp(0.0, 1.0);
        p0 + (p1 - p0) * w
    }
}

/// Shared defender feedback control, used both here and by the step
/// integrator so the anticipated and simulated paths agree bit for bit.
pub(crate) fn defender_feedback(
    attacker: Point2,
    defender: Point2,
    target: Point2,
    nu: SpeedRatio,
) -> (Point2, Point2) {
    let xb = match apollonius(attacker, defender, nu) {
        Ok(ac) => capture_point(&ac, target).point,
        Err(_) => defender,
    };
    let control = unit_vector(defender, xb).unwrap_or(Point2::ORIGIN);
    (control, xb)
}

/// Integrate the critical 1v1 sub-game (attacker straight at the target,
/// defender on feedback pursuit) until capture or target arrival.
pub fn precompute_defender_trajectory(
    state: &GameState,
    assign: &Assignment,
    nu: SpeedRatio,
    step: f64,
    capture_eps: f64,
    t_max: f64,
) -> Result<DefenderTrajectory, DeviationError> {
    assert!(step > 0.0 && capture_eps > 0.0);
    let roles = Roles::from_assignment(assign);
    let mut a = state.attackers[roles.critical_attacker].position;
    let mut d = state.defenders[roles.critical_defender].position;
    let target = state.target;
    let mut samples = vec![(0.0, d)];
    let mut t = 0.0;
    loop {
        if a.dist(d) <= capture_eps {
            return Ok(DefenderTrajectory {
                samples,
                step,
                attacker_end: a,
                captured: true,
            });
        }
        if a.dist(target) <= capture_eps {
            return Ok(DefenderTrajectory {
                samples,
                step,
                attacker_end: a,
                captured: false,
            });
        }
        if t >= t_max {
            return Err(DeviationError::NonConvergence);
        }
        let ua = unit_vector(a, target).unwrap_or(Point2::ORIGIN);
        let (ud, _) = defender_feedback(a, d, target, nu);
        a = a + ua * (nu.attacker_speed() * step);
        d = d + ud * (nu.defender_speed() * step);
        t += step;
        samples.push((t, d));
    }
}

/// Interception plan against the precomputed pursuit path: the latest
/// trajectory point that lies in both of the helper's Apollonius disks
/// (versus either defender, at time zero) and that the helper reaches by
/// straight-line travel no later than the defender arrives.
///
/// Taking the latest such point pins the meeting at the far edge of the
/// helper's dominance region, where the pursuing defender has been drawn
/// deepest and the straight-running attacker has gained the most ground.
/// The flip point between samples is refined by interpolation, so the
/// reported point is within one integration step of the exact boundary.
pub fn two_deviation_plan(
    traj: &DefenderTrajectory,
    state: &GameState,
    assign: &Assignment,
    nu: SpeedRatio,
) -> Result<InterceptPlan, DeviationError> {
    let roles = Roles::from_assignment(assign);
    let helper = state.attackers[roles.helper_attacker].position;
    let critical_d = state.defenders[roles.critical_defender].position;
    let helper_d = state.defenders[roles.helper_defender].position;

    // Already co-located: intercept on the spot.
    if helper.dist(critical_d) <= degeneracy_tol() {
        return Ok(InterceptPlan {
            point: critical_d,
            eta_attacker: 0.0,
            eta_defender: 0.0,
            kind: PlanKind::TwoDeviation,
            target_defender: roles.critical_defender,
        });
    }

    let disk_vs_critical = apollonius(helper, critical_d, nu)
        .map_err(|_| DeviationError::DegenerateGeometry("helper coincides with defender"))?
        .circle();
    let disk_vs_helper = apollonius(helper, helper_d, nu)
        .map_err(|_| DeviationError::DegenerateGeometry("helper coincides with defender"))?
        .circle();

    let speed = nu.attacker_speed();
    let feasible = |t: f64, p: Point2| {
        disk_vs_critical.contains(p) && disk_vs_helper.contains(p) && helper.dist(p) / speed <= t
    };

    let mut last: Option<usize> = None;
    for (k, &(t, p)) in traj.samples.iter().enumerate() {
        if feasible(t, p) {
            last = Some(k);
        }
    }
    let k = last.ok_or(DeviationError::Infeasible)?;
    let (mut t_best, mut p_best) = traj.samples[k];

    // Refine toward the next (infeasible) sample by bisection.
    if k + 1 < traj.samples.len() {
        let (t0, p0) = traj.samples[k];
        let (t1, p1) = traj.samples[k + 1];
        let (mut lo, mut hi) = (0.0_f64, 1.0_f64);
        for _ in 0..40 {
            let mid = 0.5 * (lo + hi);
            let t = t0 + (t1 - t0) * mid;
            let p = p0 + (p1 - p0) * mid;
            if feasible(t, p) {
                lo = mid;
                t_best = t;
                p_best = p;
            } else {
                hi = mid;
            }
        }
    }

    Ok(InterceptPlan {
        point: p_best,
        eta_attacker: helper.dist(p_best) / speed,
        eta_defender: t_best,
        kind: PlanKind::TwoDeviation,
        target_defender: roles.critical_defender,
    })
}

/// One-deviation plan from the candidate list: the point the critical
/// defender reaches earliest.
pub fn one_deviation_plan(
    state: &GameState,
    assign: &Assignment,
    nu: SpeedRatio,
) -> Result<InterceptPlan, DeviationError> {
    let roles = Roles::from_assignment(assign);
    let candidates = one_deviation_candidates(state, assign, nu);
    let point = *candidates.first().ok_or(DeviationError::Infeasible)?;
    let helper = state.attackers[roles.helper_attacker].position;
    let critical_d = state.defenders[roles.critical_defender].position;
    Ok(InterceptPlan {
        point,
        eta_attacker: helper.dist(point) / nu.attacker_speed(),
        eta_defender: critical_d.dist(point) / nu.defender_speed(),
        kind: PlanKind::OneDeviation,
        target_defender: roles.critical_defender,
    })
}

/// Triangle with a disk removed; membership excludes the disk interior.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClippedTriangle {
    pub triangle: Triangle,
    pub removed: Circle,
}

impl ClippedTriangle {
    pub fn contains_within(&self, p: Point2, slack: f64) -> bool {
        self.triangle.contains_within(p, slack)
            && p.dist(self.removed.center) >= self.removed.radius - slack
    }
}

/// Geometric bounds for the two-deviation sub-game between the critical
/// pair: the safe circle, the three anchor points on the attacker's
/// straight ray, the annular-sector bound on the moving capture point,
/// and the triangle bounds on the pursuing defender.
#[derive(Debug, Clone, Copy)]
pub struct FeasibilityRegions {
    /// Radius of the safe circle around the target.
    pub safe_circle_radius: f64,
    /// Where the attacker's straight ray exits its Apollonius disk.
    pub p1: Point2,
    /// Where that ray crosses the safe circle.
    pub p2: Point2,
    /// Mirror anchor on the outer arc, collinear with the target and the
    /// initial capture point.
    pub p3: Point2,
    pub omega_b: AnnularSector,
    pub omega_d1: Triangle,
    pub omega_d2: ClippedTriangle,
}

impl FeasibilityRegions {
    /// Closure membership (with `slack`) of the capture-point bound.
    pub fn omega_b_contains_within(&self, p: Point2, slack: f64) -> bool {
        in_annular_sector_within(p, &self.omega_b, slack)
    }

    /// Closure membership (with `slack`) of the defender bound, which is
    /// the union of the two triangles and the capture-point sector.
    pub fn omega_d_union_contains_within(&self, p: Point2, slack: f64) -> bool {
        self.omega_b_contains_within(p, slack)
            || self.omega_d1.contains_within(p, slack)
            || self.omega_d2.contains_within(p, slack)
    }
}

/// Build the bounding regions for the critical pair of the given state.
pub fn build_feasibility_regions(
    state: &GameState,
    assign: &Assignment,
    nu: SpeedRatio,
) -> Result<FeasibilityRegions, DeviationError> {
    let roles = Roles::from_assignment(assign);
    let a = state.attackers[roles.critical_attacker].position;
    let d = state.defenders[roles.critical_defender].position;
    let target = state.target;

    let ac = apollonius(a, d, nu)
        .map_err(|_| DeviationError::DegenerateGeometry("critical pair coincides"))?;
    let cp = capture_point(&ac, target);
    if cp.target_inside {
        return Err(DeviationError::DegenerateGeometry(
            "target inside the critical disk",
        ));
    }
    let rho_t = cp.distance_to_target;

    // The attacker sits strictly inside its own disk and the target
    // strictly outside, so the ray crosses the boundary exactly once.
    let crossings = segment_circle_intersections(&Segment::new(a, target), &ac.circle());
    let p1 = *crossings.first().ok_or(DeviationError::DegenerateGeometry(
        "ray misses the disk boundary",
    ))?;
    let rho_p1 = target.dist(p1);

    let to_attacker = unit_vector(target, a)
        .map_err(|_| DeviationError::DegenerateGeometry("attacker at the target"))?;
    let p2 = target + to_attacker * rho_t;
    let to_xb = unit_vector(target, cp.point)
        .map_err(|_| DeviationError::DegenerateGeometry("capture point at the target"))?;
    let p3 = target + to_xb * rho_p1;

    let hull = Triangle::new(target, ac.center, a);
    Ok(FeasibilityRegions {
        safe_circle_radius: rho_t,
        p1,
        p2,
        p3,
        omega_b: AnnularSector::new(target, rho_t, rho_p1, hull),
        omega_d1: Triangle::new(d, p1, p2),
        omega_d2: ClippedTriangle {
            triangle: Triangle::new(d, p1, p3),
            removed: Circle::new(target, rho_p1),
        },
    })
}

/// Discretized sufficient condition for the two-attacker deviation: from
/// every grid point of the capture-point bound, the segment back to the
/// critical defender must cross the intersection of the helper's two
/// Apollonius disks. Conservative at the resolution `grid_n`.
pub fn check_two_deviation_condition(
    regions: &FeasibilityRegions,
    state: &GameState,
    assign: &Assignment,
    nu: SpeedRatio,
    grid_n: usize,
) -> bool {
    assert!(grid_n >= 16, "grid resolution too coarse to be meaningful");
    let roles = Roles::from_assignment(assign);
    let helper = state.attackers[roles.helper_attacker].position;
    let critical_d = state.defenders[roles.critical_defender].position;
    let helper_d = state.defenders[roles.helper_defender].position;
    let (Ok(ac1), Ok(ac2)) = (
        apollonius(helper, critical_d, nu),
        apollonius(helper, helper_d, nu),
    ) else {
        return false;
    };
    let disk1 = ac1.circle();
    let disk2 = ac2.circle();

    let target = regions.omega_b.center;
    let theta_inner = {
        let v = regions.p3 - target;
        v.y.atan2(v.x)
    };
    let theta_outer = {
        let v = regions.p1 - target;
        v.y.atan2(v.x)
    };
    // Sweep the short way between the two bounding rays.
    let mut dtheta = theta_outer - theta_inner;
    if dtheta > std::f64::consts::PI {
        dtheta -= 2.0 * std::f64::consts::PI;
    } else if dtheta < -std::f64::consts::PI {
        dtheta += 2.0 * std::f64::consts::PI;
    }

    let band = regions.omega_b.rho_outer - regions.omega_b.rho_inner;
    for ir in 0..grid_n {
        let r = regions.omega_b.rho_inner + (ir as f64 + 0.5) / grid_n as f64 * band;
        for it in 0..grid_n {
            let theta = theta_inner + (it as f64 + 0.5) / grid_n as f64 * dtheta;
            let p = target + Point2::new(theta.cos(), theta.sin()) * r;
            if !in_annular_sector(p, &regions.omega_b) {
                continue;
            }
            let seg = Segment::new(critical_d, p);
            let Some((lo1, hi1)) = segment_disk_interval(&seg, &disk1) else {
                return false;
            };
            let Some((lo2, hi2)) = segment_disk_interval(&seg, &disk2) else {
                return false;
            };
            if lo1.max(lo2) > hi1.min(hi2) {
                return false;
            }
        }
    }
    true
}

/// After the interception removed the critical defender and the helper,
/// the surviving attacker wins exactly when the target lies inside the
/// surviving pair's disk.
pub fn check_win_condition_after_interception(state: &GameState, nu: SpeedRatio) -> bool {
    let attacker = (0..2).find(|&i| state.attackers[i].active);
    let defender = (0..2).find(|&j| state.defenders[j].active);
    let (Some(i), Some(j)) = (attacker, defender) else {
        return false;
    };
    match apollonius(state.attackers[i].position, state.defenders[j].position, nu) {
        Ok(ac) => capture_point(&ac, state.target).target_inside,
        Err(_) => true,
    }
}
