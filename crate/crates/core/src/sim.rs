//! Event-driven fixed-step integration of the full 2v2 game.
//!
//! Phase I runs the team-vs-team engagement under the frozen assignment
//! until the first terminal event (a capture, an interception, or a
//! target arrival); the survivors then play the 1v1 equilibrium endgame
//! in Phase II. Explicit first-order integration with controls
//! recomputed every step; capture is declared inside a small co-location
//! radius, and a step never exceeds half that radius so events cannot be
//! tunneled past.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::assignment::{build_cost_matrix, solve_lbap, Assignment, CostMatrix};
use crate::deviation::{
    build_feasibility_regions, check_two_deviation_condition, defender_feedback,
    defender_win_nominal, one_deviation_candidates, one_deviation_plan,
    precompute_defender_trajectory, two_deviation_plan, InterceptPlan, Roles,
};
use crate::engagement::SpeedRatio;
use crate::geom::{degeneracy_tol, unit_vector, Point2};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SimError {
    #[error("invalid simulation config: {0}")]
    InvalidConfig(String),
    #[error("agents coincide in the initial state")]
    CoincidentAgents,
}

/// Attacker bookkeeping: position, liveness, and the time it left play.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AttackerState {
    pub position: Point2,
    pub active: bool,
    pub final_time: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DefenderState {
    pub position: Point2,
    pub active: bool,
}

/// Full game state: target, two attackers, two defenders, and the clock.
#[derive(Debug, Clone, PartialEq)]
pub struct GameState {
    pub target: Point2,
    pub attackers: [AttackerState; 2],
    pub defenders: [DefenderState; 2],
    pub clock: f64,
}

impl GameState {
    pub fn new(target: Point2, attackers: [Point2; 2], defenders: [Point2; 2]) -> Self {
        GameState {
            target,
            attackers: attackers.map(|position| AttackerState {
                position,
                active: true,
                final_time: None,
            }),
            defenders: defenders.map(|position| DefenderState {
                position,
                active: true,
            }),
            clock: 0.0,
        }
    }

    pub fn active_attackers(&self) -> impl Iterator<Item = usize> + '_ {
        (0..2).filter(|&i| self.attackers[i].active)
    }

    pub fn active_defenders(&self) -> impl Iterator<Item = usize> + '_ {
        (0..2).filter(|&j| self.defenders[j].active)
    }
}

/// Which strategy profile the run follows.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    #[default]
    Nominal,
    #[serde(alias = "one-dev")]
    OneDeviation,
    #[serde(alias = "two-dev")]
    TwoDeviation,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Nominal => "nominal",
            Mode::OneDeviation => "one-deviation",
            Mode::TwoDeviation => "two-deviation",
        }
    }
}

/// Per-agent strategy tag. `Intercept` carries the frozen plan; once the
/// agent stands on the aim point it becomes `Dwell` (zero control is
/// admissible, so waiting in place realizes the co-location).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StrategyTag {
    Nominal,
    StraightToTarget,
    Intercept(InterceptPlan),
    Dwell {
        point: Point2,
        target_defender: usize,
    },
    Zero,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StrategyProfile {
    pub attackers: [StrategyTag; 2],
    pub defenders: [StrategyTag; 2],
}

impl StrategyProfile {
    pub fn all_nominal() -> Self {
        StrategyProfile {
            attackers: [StrategyTag::Nominal; 2],
            defenders: [StrategyTag::Nominal; 2],
        }
    }
}

/// Integration parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    /// Integration step.
    pub dt: f64,
    /// Co-location radius for captures, interceptions, and arrivals.
    pub capture_eps: f64,
    /// Safety horizon.
    pub t_max: f64,
    /// Record a trace row every this many steps (events and the final
    /// step are always recorded).
    pub record_every: usize,
}

impl Default for SimConfig {
    fn default() -> Self {
        SimConfig {
            dt: 1e-4,
            capture_eps: 1e-3,
            t_max: 100.0,
            record_every: 10,
        }
    }
}

impl SimConfig {
    pub fn validate(&self) -> Result<(), SimError> {
        if !(self.dt.is_finite() && self.dt > 0.0) {
            return Err(SimError::InvalidConfig("dt must be positive".into()));
        }
        if !(self.capture_eps.is_finite() && self.capture_eps > 0.0) {
            return Err(SimError::InvalidConfig(
                "capture_eps must be positive".into(),
            ));
        }
        if self.dt > self.capture_eps / 2.0 {
            return Err(SimError::InvalidConfig(
                "dt must not exceed capture_eps / 2".into(),
            ));
        }
        if !(self.t_max.is_finite() && self.t_max > 0.0) {
            return Err(SimError::InvalidConfig("t_max must be positive".into()));
        }
        if self.record_every == 0 {
            return Err(SimError::InvalidConfig(
                "record_every must be at least 1".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum EventKind {
    AttackerReachesTarget,
    AttackerInterceptsDefender,
    DefenderCapturesAttacker,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Event {
    pub t: f64,
    pub kind: EventKind,
    /// Attacker index (0-based).
    pub attacker: usize,
    /// Defender index for captures and interceptions.
    pub defender: Option<usize>,
    /// Attacker position when the event fired.
    pub position: Point2,
}

/// One recorded integration step: the state snapshot after the step and
/// the controls that produced it (zero controls on the initial row).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceRow {
    pub t: f64,
    pub attackers: [Point2; 2],
    pub defenders: [Point2; 2],
    pub attacker_controls: [Point2; 2],
    pub defender_controls: [Point2; 2],
    /// Capture-point track per attacker pair under the frozen assignment;
    /// frozen at its last value once the pair is broken.
    pub capture_points: [Point2; 2],
    pub phase: u8,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Outcome {
    AttackersWin,
    DefendersWin,
    Timeout,
}

/// Feasibility findings reported with every run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FeasibilityFlags {
    /// Nominal play ends in a defender win (target outside both assigned
    /// disks at the initial time).
    pub defender_win_nominal: bool,
    /// One-deviation interception candidates exist (and the game is
    /// nominally defender-won).
    pub one_deviation_feasible: bool,
    /// Two-deviation certificate: grid condition and an executable plan
    /// (only evaluated in two-deviation mode).
    pub two_deviation_feasible: Option<bool>,
    /// A deviation was requested but infeasible; the run fell back to
    /// nominal play.
    pub fallback_to_nominal: bool,
}

/// Complete result of one game run.
#[derive(Debug, Clone)]
pub struct SimTrace {
    pub requested_mode: Mode,
    pub executed_mode: Mode,
    pub nu: SpeedRatio,
    pub rows: Vec<TraceRow>,
    pub events: Vec<Event>,
    pub phase1_end: Option<f64>,
    pub t_final: f64,
    pub payoff: f64,
    pub outcome: Outcome,
    pub assignment: Assignment,
    pub cost_matrix: CostMatrix,
    pub flags: FeasibilityFlags,
    pub intercept_plan: Option<InterceptPlan>,
    pub intercept_candidates: Vec<Point2>,
    pub feasibility_grid_n: Option<usize>,
    /// Post-event state at the Phase I/II boundary.
    pub state_at_phase1_end: Option<GameState>,
    pub final_state: GameState,
}

/// Controls applied during one step, unit-bounded directions per agent.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepControls {
    pub attackers: [Point2; 2],
    pub defenders: [Point2; 2],
}

fn zero_controls() -> StepControls {
    StepControls {
        attackers: [Point2::ORIGIN; 2],
        defenders: [Point2::ORIGIN; 2],
    }
}

/// Compute the controls for the current state and capture-point tracks,
/// without integrating. `pairing[i]` is the defender currently matched
/// with attacker `i` (the frozen assignment in Phase I, the survivor
/// pairing in Phase II).
fn compute_controls(
    state: &GameState,
    profile: &StrategyProfile,
    pairing: &[usize; 2],
    nu: SpeedRatio,
    dt: f64,
    capture_tracks: &mut [Point2; 2],
) -> StepControls {
    let mut out = zero_controls();
    for i in 0..2 {
        if !state.attackers[i].active {
            continue;
        }
        let pos = state.attackers[i].position;
        out.attackers[i] = match &profile.attackers[i] {
            StrategyTag::Nominal => {
                let j = pairing[i];
                if state.defenders[j].active {
                    let (_, xb) =
                        defender_feedback(pos, state.defenders[j].position, state.target, nu);
                    capture_tracks[i] = xb;
                    unit_vector(pos, xb).unwrap_or(Point2::ORIGIN)
                } else {
                    Point2::ORIGIN
                }
            }
            StrategyTag::StraightToTarget => {
                unit_vector(pos, state.target).unwrap_or(Point2::ORIGIN)
            }
            StrategyTag::Intercept(plan) => {
                let dist = pos.dist(plan.point);
                match unit_vector(pos, plan.point) {
                    // Cap the control so the last step lands exactly on
                    // the aim point instead of oscillating across it.
                    Ok(u) => u * (dist / (nu.attacker_speed() * dt)).min(1.0),
                    Err(_) => Point2::ORIGIN,
                }
            }
            StrategyTag::Dwell { .. } | StrategyTag::Zero => Point2::ORIGIN,
        };
    }
    for j in 0..2 {
        if !state.defenders[j].active {
            continue;
        }
        let pos = state.defenders[j].position;
        out.defenders[j] = match &profile.defenders[j] {
            StrategyTag::Nominal => {
                let i = if pairing[0] == j { 0 } else { 1 };
                if state.attackers[i].active {
                    let (u, xb) =
                        defender_feedback(state.attackers[i].position, pos, state.target, nu);
                    capture_tracks[i] = xb;
                    u
                } else {
                    Point2::ORIGIN
                }
            }
            _ => Point2::ORIGIN,
        };
    }
    out
}

/// Advance the state by one step under the given profile and pairing;
/// returns the controls used. Attackers move at unit speed, defenders at
/// `1/nu`; inactive agents stay frozen.
pub fn step(
    state: &mut GameState,
    profile: &StrategyProfile,
    pairing: &[usize; 2],
    nu: SpeedRatio,
    dt: f64,
) -> StepControls {
    let mut tracks = [Point2::ORIGIN; 2];
    let controls = compute_controls(state, profile, pairing, nu, dt, &mut tracks);
    integrate(state, &controls, nu, dt);
    controls
}

fn integrate(state: &mut GameState, controls: &StepControls, nu: SpeedRatio, dt: f64) {
    for i in 0..2 {
        if state.attackers[i].active {
            state.attackers[i].position =
                state.attackers[i].position + controls.attackers[i] * (nu.attacker_speed() * dt);
        }
    }
    for j in 0..2 {
        if state.defenders[j].active {
            state.defenders[j].position =
                state.defenders[j].position + controls.defenders[j] * (nu.defender_speed() * dt);
        }
    }
    state.clock += dt;
}

/// Terminal events present in the current state, in precedence order:
/// target arrivals, then interceptions, then captures. Captures only
/// couple an attacker with the defender currently paired to it.
pub fn detect_events(
    state: &GameState,
    profile: &StrategyProfile,
    pairing: &[usize; 2],
    capture_eps: f64,
) -> Vec<Event> {
    let mut events = Vec::new();
    let t = state.clock;
    for i in state.active_attackers() {
        let pos = state.attackers[i].position;
        if pos.dist(state.target) <= capture_eps {
            events.push(Event {
                t,
                kind: EventKind::AttackerReachesTarget,
                attacker: i,
                defender: None,
                position: pos,
            });
        }
    }
    for i in state.active_attackers() {
        let target_defender = match &profile.attackers[i] {
            StrategyTag::Intercept(plan) => Some(plan.target_defender),
            StrategyTag::Dwell {
                target_defender, ..
            } => Some(*target_defender),
            _ => None,
        };
        if let Some(j) = target_defender {
            if state.defenders[j].active
                && state.attackers[i]
                    .position
                    .dist(state.defenders[j].position)
                    <= capture_eps
            {
                events.push(Event {
                    t,
                    kind: EventKind::AttackerInterceptsDefender,
                    attacker: i,
                    defender: Some(j),
                    position: state.attackers[i].position,
                });
            }
        }
    }
    for i in state.active_attackers() {
        let j = pairing[i];
        if state.defenders[j].active
            && state.attackers[i]
                .position
                .dist(state.defenders[j].position)
                <= capture_eps
        {
            events.push(Event {
                t,
                kind: EventKind::DefenderCapturesAttacker,
                attacker: i,
                defender: Some(j),
                position: state.attackers[i].position,
            });
        }
    }
    events
}

struct Planner {
    profile: StrategyProfile,
    flags: FeasibilityFlags,
    plan: Option<InterceptPlan>,
    candidates: Vec<Point2>,
    feasibility_grid_n: Option<usize>,
    executed_mode: Mode,
}

/// Resolve the strategy profile for the requested mode, falling back to
/// nominal play (and flagging it) when the deviation is infeasible.
fn plan_mode(
    state: &GameState,
    assign: &Assignment,
    mode: Mode,
    nu: SpeedRatio,
    config: &SimConfig,
) -> Planner {
    let defender_win = defender_win_nominal(state, assign, nu);
    let candidates = one_deviation_candidates(state, assign, nu);
    let one_deviation_feasible = defender_win && !candidates.is_empty();
    let roles = Roles::from_assignment(assign);
    let mut planner = Planner {
        profile: StrategyProfile::all_nominal(),
        flags: FeasibilityFlags {
            defender_win_nominal: defender_win,
            one_deviation_feasible,
            two_deviation_feasible: None,
            fallback_to_nominal: false,
        },
        plan: None,
        candidates,
        feasibility_grid_n: None,
        executed_mode: Mode::Nominal,
    };
    match mode {
        Mode::Nominal => {}
        Mode::OneDeviation => {
            if one_deviation_feasible {
                let plan = one_deviation_plan(state, assign, nu)
                    .expect("candidates are non-empty, a plan must exist");
                planner.profile.attackers[roles.helper_attacker] = StrategyTag::Intercept(plan);
                planner.plan = Some(plan);
                planner.executed_mode = Mode::OneDeviation;
            } else {
                planner.flags.fallback_to_nominal = true;
            }
        }
        Mode::TwoDeviation => {
            let grid_n = 32;
            planner.feasibility_grid_n = Some(grid_n);
            let certified = build_feasibility_regions(state, assign, nu)
                .map(|regions| check_two_deviation_condition(&regions, state, assign, nu, grid_n))
                .unwrap_or(false);
            let plan = precompute_defender_trajectory(
                state,
                assign,
                nu,
                config.dt,
                config.capture_eps,
                config.t_max,
            )
            .ok()
            .and_then(|traj| two_deviation_plan(&traj, state, assign, nu).ok());
            match plan {
                Some(plan) if defender_win => {
                    planner.flags.two_deviation_feasible = Some(certified);
                    planner.profile.attackers[roles.critical_attacker] =
                        StrategyTag::StraightToTarget;
                    planner.profile.attackers[roles.helper_attacker] = StrategyTag::Intercept(plan);
                    planner.plan = Some(plan);
                    planner.executed_mode = Mode::TwoDeviation;
                }
                _ => {
                    planner.flags.two_deviation_feasible = Some(false);
                    planner.flags.fallback_to_nominal = true;
                }
            }
        }
    }
    planner
}

/// Run one full game.
pub fn run(
    initial: &GameState,
    mode: Mode,
    nu: SpeedRatio,
    config: &SimConfig,
) -> Result<SimTrace, SimError> {
    config.validate()?;
    let cost_matrix = build_cost_matrix(initial, nu).map_err(|_| SimError::CoincidentAgents)?;
    let assignment = solve_lbap(&cost_matrix);
    let planner = plan_mode(initial, &assignment, mode, nu, config);

    let mut state = initial.clone();
    state.clock = 0.0;
    let mut profile = planner.profile;
    let mut pairing = [assignment.psi[0], assignment.psi[1]];
    let mut phase: u8 = 1;
    let mut phase1_end = None;
    let mut state_at_phase1_end = None;
    let mut events: Vec<Event> = Vec::new();
    let mut rows: Vec<TraceRow> = Vec::new();
    let mut capture_tracks = [Point2::ORIGIN; 2];
    for i in 0..2 {
        let (_, xb) = defender_feedback(
            state.attackers[i].position,
            state.defenders[pairing[i]].position,
            state.target,
            nu,
        );
        capture_tracks[i] = xb;
    }

    let record = |rows: &mut Vec<TraceRow>,
                  state: &GameState,
                  controls: &StepControls,
                  tracks: &[Point2; 2],
                  phase: u8| {
        rows.push(TraceRow {
            t: state.clock,
            attackers: [state.attackers[0].position, state.attackers[1].position],
            defenders: [state.defenders[0].position, state.defenders[1].position],
            attacker_controls: controls.attackers,
            defender_controls: controls.defenders,
            capture_points: *tracks,
            phase,
        });
    };
    record(&mut rows, &state, &zero_controls(), &capture_tracks, phase);

    let mut outcome = None;
    let steps_max = (config.t_max / config.dt).ceil() as u64;

    // Events already present in the initial state resolve immediately.
    let mut pending = detect_events(&state, &profile, &pairing, config.capture_eps);
    let mut step_index: u64 = 0;
    loop {
        if !pending.is_empty() {
            let had_events_before = !events.is_empty();
            for ev in pending.drain(..) {
                match ev.kind {
                    EventKind::AttackerReachesTarget => {
                        if !state.attackers[ev.attacker].active {
                            continue;
                        }
                        state.attackers[ev.attacker].active = false;
                        state.attackers[ev.attacker].final_time = Some(ev.t);
                        outcome = Some(Outcome::AttackersWin);
                    }
                    EventKind::AttackerInterceptsDefender => {
                        let j = ev.defender.unwrap();
                        if !(state.attackers[ev.attacker].active && state.defenders[j].active) {
                            continue;
                        }
                        state.attackers[ev.attacker].active = false;
                        state.attackers[ev.attacker].final_time = Some(ev.t);
                        state.defenders[j].active = false;
                    }
                    EventKind::DefenderCapturesAttacker => {
                        let j = ev.defender.unwrap();
                        if !(state.attackers[ev.attacker].active && state.defenders[j].active) {
                            continue;
                        }
                        state.attackers[ev.attacker].active = false;
                        state.attackers[ev.attacker].final_time = Some(ev.t);
                        state.defenders[j].active = false;
                    }
                }
                events.push(ev);
            }
            if outcome.is_none() && state.active_attackers().count() == 0 {
                outcome = Some(Outcome::DefendersWin);
            }
            if !had_events_before && !events.is_empty() {
                phase1_end = Some(state.clock);
                state_at_phase1_end = Some(state.clone());
                if outcome.is_none() {
                    // Survivors re-pair and play the 1v1 equilibrium.
                    phase = 2;
                    let ia = state.active_attackers().next();
                    let jd = state.active_defenders().next();
                    if let (Some(ia), Some(jd)) = (ia, jd) {
                        pairing[ia] = jd;
                        pairing[1 - ia] = 1 - jd;
                        profile.attackers[ia] = StrategyTag::Nominal;
                        profile.defenders[jd] = StrategyTag::Nominal;
                    }
                }
            }
            // Rewrite the last recorded row's phase if an event landed on
            // a recording boundary; the row itself was already written.
        }
        if outcome.is_some() {
            break;
        }
        if step_index >= steps_max {
            outcome = Some(Outcome::Timeout);
            break;
        }

        // Intercepting attackers that stand on the aim point switch to
        // dwelling (zero control) until the target defender arrives.
        for i in 0..2 {
            if let StrategyTag::Intercept(plan) = profile.attackers[i] {
                if state.attackers[i].active
                    && state.attackers[i].position.dist(plan.point) <= degeneracy_tol()
                {
                    profile.attackers[i] = StrategyTag::Dwell {
                        point: plan.point,
                        target_defender: plan.target_defender,
                    };
                }
            }
        }

        let controls = {
            let mut tracks = capture_tracks;
            let c = compute_controls(&state, &profile, &pairing, nu, config.dt, &mut tracks);
            integrate(&mut state, &c, nu, config.dt);
            capture_tracks = tracks;
            c
        };
        step_index += 1;

        pending = detect_events(&state, &profile, &pairing, config.capture_eps);
        let due = step_index.is_multiple_of(config.record_every as u64);
        if due || !pending.is_empty() {
            record(&mut rows, &state, &controls, &capture_tracks, phase);
        }
    }

    // Final row, unless the last row already is the final state.
    if rows.last().map(|r| r.t) != Some(state.clock) {
        record(&mut rows, &state, &zero_controls(), &capture_tracks, phase);
    }

    let payoff = (0..2)
        .map(|i| state.attackers[i].position.dist(state.target))
        .fold(f64::INFINITY, f64::min);

    Ok(SimTrace {
        requested_mode: mode,
        executed_mode: planner.executed_mode,
        nu,
        rows,
        events,
        phase1_end,
        t_final: state.clock,
        payoff,
        outcome: outcome.unwrap(),
        assignment,
        cost_matrix,
        flags: planner.flags,
        intercept_plan: planner.plan,
        intercept_candidates: planner.candidates,
        feasibility_grid_n: planner.feasibility_grid_n,
        state_at_phase1_end,
        final_state: state,
    })
}
