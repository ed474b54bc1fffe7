//! Scenario files, run orchestration, feasibility reports, win-region
//! sweeps, and the plot-ready CSV/JSON artifacts.
//!
//! File contracts:
//! - `trace.csv` columns: `t,xA1,yA1,xA2,yA2,xD1,yD1,xD2,yD2,xB11x,xB11y,phase`
//!   where `xB11` is the capture-point track of the critical pair.
//! - `summary.json` follows `schema/summary.schema.json`. Indices in the
//!   summary (`psi`, critical pair, event participants) are 1-based to
//!   match the usual agent labels A1/A2/D1/D2.
//! - `sweep.csv` columns: `x,y,mode,winner,payoff,t_f1,defender_win_nominal,`
//!   `one_deviation_feasible,two_deviation_feasible,error`; rows ordered row-major
//!   over the grid (y outer, x inner) with modes innermost.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::assignment::{build_cost_matrix, solve_lbap};
use crate::deviation::{
    build_feasibility_regions, check_two_deviation_condition, defender_win_nominal,
    one_deviation_candidates, precompute_defender_trajectory, two_deviation_plan,
};
use crate::engagement::SpeedRatio;
use crate::geom::{degeneracy_tol, Point2};
use crate::sim::{run, GameState, Mode, Outcome, SimConfig, SimTrace};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("io error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("parse error in {path}: {message}")]
    Parse { path: String, message: String },
    #[error("invalid scenario field `{field}`: {message}")]
    Validation {
        field: &'static str,
        message: String,
    },
    #[error("simulation error: {0}")]
    Sim(#[from] crate::sim::SimError),
}

/// Initial conditions plus simulation overrides, as stored on disk.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct Scenario {
    pub target: Point2,
    pub attacker_positions: [Point2; 2],
    pub defender_positions: [Point2; 2],
    pub nu: f64,
    #[serde(default)]
    pub mode: Mode,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dt: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub capture_eps: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t_max: Option<f64>,
}

impl Scenario {
    pub fn validate(&self) -> Result<(), CliError> {
        SpeedRatio::new(self.nu).map_err(|_| CliError::Validation {
            field: "nu",
            message: format!("{} is not inside (0, 1)", self.nu),
        })?;
        let mut points = vec![("target", self.target)];
        points.push(("attacker_positions[0]", self.attacker_positions[0]));
        points.push(("attacker_positions[1]", self.attacker_positions[1]));
        points.push(("defender_positions[0]", self.defender_positions[0]));
        points.push(("defender_positions[1]", self.defender_positions[1]));
        for (name, p) in &points {
            if !p.is_finite() {
                return Err(CliError::Validation {
                    field: "positions",
                    message: format!("{name} has non-finite coordinates"),
                });
            }
        }
        // Agent positions must be pairwise distinct (the target may sit on
        // an agent: that is a decided game, not a malformed one).
        let agents = &points[1..];
        for (k, (name_a, a)) in agents.iter().enumerate() {
            for (name_b, b) in agents.iter().skip(k + 1) {
                if a.dist(*b) <= degeneracy_tol() {
                    return Err(CliError::Validation {
                        field: "positions",
                        message: format!("{name_a} and {name_b} coincide"),
                    });
                }
            }
        }
        let config = self.sim_config();
        config.validate().map_err(|e| CliError::Validation {
            field: "dt",
            message: e.to_string(),
        })?;
        Ok(())
    }

    pub fn speed_ratio(&self) -> SpeedRatio {
        SpeedRatio::new(self.nu).expect("validated")
    }

    pub fn initial_state(&self) -> GameState {
        GameState::new(
            self.target,
            self.attacker_positions,
            self.defender_positions,
        )
    }

    pub fn sim_config(&self) -> SimConfig {
        let default = SimConfig::default();
        SimConfig {
            dt: self.dt.unwrap_or(default.dt),
            capture_eps: self.capture_eps.unwrap_or(default.capture_eps),
            t_max: self.t_max.unwrap_or(default.t_max),
            record_every: default.record_every,
        }
    }
}

pub fn load_scenario(path: &Path) -> Result<Scenario, CliError> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })?;
    let scenario: Scenario = serde_json::from_str(&text).map_err(|e| CliError::Parse {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    scenario.validate()?;
    Ok(scenario)
}

pub fn save_scenario(path: &Path, scenario: &Scenario) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(scenario).expect("scenario serializes");
    text.push('\n');
    fs::write(path, text).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

/// Feasibility block of the run summary.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct SummaryFlags {
    pub defender_win_nominal: bool,
    pub one_deviation_feasible: bool,
    pub two_deviation_feasible: Option<bool>,
    pub fallback_to_nominal: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct SummaryEvent {
    pub t: f64,
    pub kind: String,
    /// 1-based attacker index.
    pub attacker: usize,
    /// 1-based defender index, when one took part.
    pub defender: Option<usize>,
    pub position: [f64; 2],
}

/// Machine-readable results of one run (`summary.json`).
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct Summary {
    pub mode: String,
    pub nu: f64,
    pub winner: String,
    pub payoff: f64,
    pub t_f1: Option<f64>,
    pub t_f: f64,
    /// 1-based defender index assigned to each attacker.
    pub psi: Vec<usize>,
    pub critical_attacker: usize,
    pub critical_defender: usize,
    pub phi: Vec<Vec<f64>>,
    pub flags: SummaryFlags,
    pub x_intercept: Option<[f64; 2]>,
    pub intercept_candidates: Vec<[f64; 2]>,
    pub feasibility_grid_n: Option<usize>,
    pub events: Vec<SummaryEvent>,
}

impl Summary {
    pub fn from_trace(trace: &SimTrace) -> Summary {
        let n = trace.cost_matrix.n();
        let phi = (0..n)
            .map(|i| (0..n).map(|j| trace.cost_matrix.get(i, j)).collect())
            .collect();
        Summary {
            mode: trace.requested_mode.as_str().to_string(),
            nu: trace.nu.value(),
            winner: match trace.outcome {
                Outcome::AttackersWin => "attackers".to_string(),
                Outcome::DefendersWin => "defenders".to_string(),
                Outcome::Timeout => "timeout".to_string(),
            },
            payoff: trace.payoff,
            t_f1: trace.phase1_end,
            t_f: trace.t_final,
            psi: trace.assignment.psi.iter().map(|j| j + 1).collect(),
            critical_attacker: trace.assignment.critical_attacker + 1,
            critical_defender: trace.assignment.critical_defender + 1,
            phi,
            flags: SummaryFlags {
                defender_win_nominal: trace.flags.defender_win_nominal,
                one_deviation_feasible: trace.flags.one_deviation_feasible,
                two_deviation_feasible: trace.flags.two_deviation_feasible,
                fallback_to_nominal: trace.flags.fallback_to_nominal,
            },
            x_intercept: trace.intercept_plan.map(|p| p.point.into()),
            intercept_candidates: trace
                .intercept_candidates
                .iter()
                .map(|p| (*p).into())
                .collect(),
            feasibility_grid_n: trace.feasibility_grid_n,
            events: trace
                .events
                .iter()
                .map(|e| SummaryEvent {
                    t: e.t,
                    kind: match e.kind {
                        crate::sim::EventKind::AttackerReachesTarget => {
                            "attacker-reaches-target".to_string()
                        }
                        crate::sim::EventKind::AttackerInterceptsDefender => {
                            "attacker-intercepts-defender".to_string()
                        }
                        crate::sim::EventKind::DefenderCapturesAttacker => {
                            "defender-captures-attacker".to_string()
                        }
                    },
                    attacker: e.attacker + 1,
                    defender: e.defender.map(|j| j + 1),
                    position: e.position.into(),
                })
                .collect(),
        }
    }
}

/// Render the fixed-contract trace CSV.
pub fn trace_csv(trace: &SimTrace) -> String {
    let mut out = String::from("t,xA1,yA1,xA2,yA2,xD1,yD1,xD2,yD2,xB11x,xB11y,phase\n");
    let crit = trace.assignment.critical_attacker;
    for r in &trace.rows {
        let xb = r.capture_points[crit];
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{},{}",
            r.t,
            r.attackers[0].x,
            r.attackers[0].y,
            r.attackers[1].x,
            r.attackers[1].y,
            r.defenders[0].x,
            r.defenders[0].y,
            r.defenders[1].x,
            r.defenders[1].y,
            xb.x,
            xb.y,
            r.phase
        );
    }
    out
}

/// Outcome of `run` as a process exit status: 0 on a clean run, 2 when a
/// requested deviation fell back to nominal play, 3 on timeout.
pub fn exit_code_for(trace: &SimTrace) -> i32 {
    if trace.outcome == Outcome::Timeout {
        3
    } else if trace.flags.fallback_to_nominal {
        2
    } else {
        0
    }
}

pub struct RunArtifacts {
    pub trace: SimTrace,
    pub summary: Summary,
    pub exit_code: i32,
}

/// Run a scenario (with optional overrides) and write `trace.csv` and
/// `summary.json` into `out_dir`.
pub fn cmd_run(
    scenario: &Scenario,
    mode_override: Option<Mode>,
    dt_override: Option<f64>,
    eps_override: Option<f64>,
    out_dir: &Path,
) -> Result<RunArtifacts, CliError> {
    scenario.validate()?;
    let mut config = scenario.sim_config();
    if let Some(dt) = dt_override {
        config.dt = dt;
    }
    if let Some(eps) = eps_override {
        config.capture_eps = eps;
    }
    let mode = mode_override.unwrap_or(scenario.mode);
    let trace = run(
        &scenario.initial_state(),
        mode,
        scenario.speed_ratio(),
        &config,
    )?;
    let summary = Summary::from_trace(&trace);

    fs::create_dir_all(out_dir).map_err(|source| CliError::Io {
        path: out_dir.display().to_string(),
        source,
    })?;
    let trace_path = out_dir.join("trace.csv");
    fs::write(&trace_path, trace_csv(&trace)).map_err(|source| CliError::Io {
        path: trace_path.display().to_string(),
        source,
    })?;
    let summary_path = out_dir.join("summary.json");
    let mut text = serde_json::to_string_pretty(&summary).expect("summary serializes");
    text.push('\n');
    fs::write(&summary_path, text).map_err(|source| CliError::Io {
        path: summary_path.display().to_string(),
        source,
    })?;

    let exit_code = exit_code_for(&trace);
    Ok(RunArtifacts {
        trace,
        summary,
        exit_code,
    })
}

/// Human-readable feasibility report for `check`.
pub fn cmd_check(scenario: &Scenario) -> Result<String, CliError> {
    scenario.validate()?;
    let nu = scenario.speed_ratio();
    let state = scenario.initial_state();
    let config = scenario.sim_config();
    let cost = build_cost_matrix(&state, nu).map_err(|_| CliError::Validation {
        field: "positions",
        message: "agents coincide".into(),
    })?;
    let assign = solve_lbap(&cost);
    let defender_win = defender_win_nominal(&state, &assign, nu);
    let candidates = one_deviation_candidates(&state, &assign, nu);
    let two_dev_condition = build_feasibility_regions(&state, &assign, nu)
        .map(|regions| check_two_deviation_condition(&regions, &state, &assign, nu, 32))
        .unwrap_or(false);
    let plan = precompute_defender_trajectory(
        &state,
        &assign,
        nu,
        config.dt,
        config.capture_eps,
        config.t_max,
    )
    .ok()
    .and_then(|traj| two_deviation_plan(&traj, &state, &assign, nu).ok());

    let mut out = String::new();
    let _ = writeln!(out, "phi matrix (rows: attackers, cols: defenders):");
    for i in 0..cost.n() {
        let row: Vec<String> = (0..cost.n())
            .map(|j| format!("{:.6}", cost.get(i, j)))
            .collect();
        let _ = writeln!(out, "  A{}: [{}]", i + 1, row.join(", "));
    }
    let psi: Vec<String> = assign.psi.iter().map(|j| format!("{}", j + 1)).collect();
    let _ = writeln!(
        out,
        "psi* = [{}], bottleneck value = {:.6}",
        psi.join(", "),
        assign.value
    );
    let _ = writeln!(
        out,
        "critical pair: (A{}, D{})",
        assign.critical_attacker + 1,
        assign.critical_defender + 1
    );
    let _ = writeln!(out, "defender-win nominal condition: {defender_win}");
    let _ = writeln!(
        out,
        "one-deviation feasible: {} ({} candidate{})",
        defender_win && !candidates.is_empty(),
        candidates.len(),
        if candidates.len() == 1 { "" } else { "s" }
    );
    for (k, c) in candidates.iter().enumerate() {
        let _ = writeln!(out, "  candidate {}: ({:.4}, {:.4})", k + 1, c.x, c.y);
    }
    let _ = writeln!(
        out,
        "two-deviation condition (32x32 grid): {two_dev_condition}"
    );
    match plan {
        Some(p) => {
            let _ = writeln!(
                out,
                "two-deviation interception: ({:.4}, {:.4}) at t = {:.4}",
                p.point.x, p.point.y, p.eta_defender
            );
        }
        None => {
            let _ = writeln!(out, "two-deviation interception: none");
        }
    }
    Ok(out)
}

/// Rectangular grid over which one agent's initial position is varied.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct GridSpec {
    pub x_min: f64,
    pub x_max: f64,
    pub y_min: f64,
    pub y_max: f64,
    pub nx: usize,
    pub ny: usize,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq, Eq)]
pub enum AgentId {
    A1,
    A2,
    D1,
    D2,
}

/// Sweep specification: vary one agent over a grid, run the listed modes
/// from the fixed base scenario in every cell.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct SweepSpec {
    pub varied_agent: AgentId,
    pub grid: GridSpec,
    pub base: Scenario,
    pub modes: Vec<Mode>,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<(), CliError> {
        self.base.validate()?;
        if self.grid.nx < 2 || self.grid.ny < 2 {
            return Err(CliError::Validation {
                field: "grid",
                message: "nx and ny must be at least 2".into(),
            });
        }
        if !(self.grid.x_min < self.grid.x_max && self.grid.y_min < self.grid.y_max) {
            return Err(CliError::Validation {
                field: "grid",
                message: "bounds must be ordered".into(),
            });
        }
        if self.modes.is_empty() {
            return Err(CliError::Validation {
                field: "modes",
                message: "at least one mode is required".into(),
            });
        }
        Ok(())
    }

    fn scenario_at(&self, p: Point2) -> Scenario {
        let mut s = self.base.clone();
        match self.varied_agent {
            AgentId::A1 => s.attacker_positions[0] = p,
            AgentId::A2 => s.attacker_positions[1] = p,
            AgentId::D1 => s.defender_positions[0] = p,
            AgentId::D2 => s.defender_positions[1] = p,
        }
        s
    }
}

pub fn load_sweep_spec(path: &Path) -> Result<SweepSpec, CliError> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })?;
    let spec: SweepSpec = serde_json::from_str(&text).map_err(|e| CliError::Parse {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    spec.validate()?;
    Ok(spec)
}

/// One sweep cell-mode result, already rendered to CSV fields.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub x: f64,
    pub y: f64,
    pub mode: Mode,
    pub winner: Option<String>,
    pub payoff: Option<f64>,
    pub t_f1: Option<f64>,
    pub defender_win_nominal: Option<bool>,
    pub one_deviation_feasible: Option<bool>,
    pub two_deviation_feasible: Option<bool>,
    pub error: Option<String>,
}

impl SweepRow {
    fn csv_line(&self) -> String {
        fn opt<T: std::fmt::Display>(v: &Option<T>) -> String {
            v.as_ref().map(|x| x.to_string()).unwrap_or_default()
        }
        format!(
            "{},{},{},{},{},{},{},{},{},{}\n",
            self.x,
            self.y,
            self.mode.as_str(),
            opt(&self.winner),
            opt(&self.payoff),
            opt(&self.t_f1),
            opt(&self.defender_win_nominal),
            opt(&self.one_deviation_feasible),
            opt(&self.two_deviation_feasible),
            self.error.clone().unwrap_or_default().replace(',', ";")
        )
    }
}

/// Run the sweep. Cells execute in parallel; the output order is
/// deterministic: row-major over the grid (y outer, x inner), with the
/// listed modes innermost. Per-cell failures land in the error column.
pub fn run_sweep(spec: &SweepSpec) -> Result<Vec<SweepRow>, CliError> {
    spec.validate()?;
    let (nx, ny) = (spec.grid.nx, spec.grid.ny);
    let cells: Vec<(usize, usize)> = (0..ny)
        .flat_map(|iy| (0..nx).map(move |ix| (iy, ix)))
        .collect();
    let rows: Vec<Vec<SweepRow>> = cells
        .par_iter()
        .map(|&(iy, ix)| {
            let x =
                spec.grid.x_min + (spec.grid.x_max - spec.grid.x_min) * ix as f64 / (nx - 1) as f64;
            let y =
                spec.grid.y_min + (spec.grid.y_max - spec.grid.y_min) * iy as f64 / (ny - 1) as f64;
            let scenario = spec.scenario_at(Point2::new(x, y));
            spec.modes
                .iter()
                .map(|&mode| sweep_cell(&scenario, mode, x, y))
                .collect()
        })
        .collect();
    Ok(rows.into_iter().flatten().collect())
}

fn sweep_cell(scenario: &Scenario, mode: Mode, x: f64, y: f64) -> SweepRow {
    let mut row = SweepRow {
        x,
        y,
        mode,
        winner: None,
        payoff: None,
        t_f1: None,
        defender_win_nominal: None,
        one_deviation_feasible: None,
        two_deviation_feasible: None,
        error: None,
    };
    if let Err(e) = scenario.validate() {
        row.error = Some(e.to_string());
        return row;
    }
    match run(
        &scenario.initial_state(),
        mode,
        scenario.speed_ratio(),
        &scenario.sim_config(),
    ) {
        Ok(trace) => {
            let summary = Summary::from_trace(&trace);
            row.winner = Some(summary.winner);
            row.payoff = Some(trace.payoff);
            row.t_f1 = trace.phase1_end;
            row.defender_win_nominal = Some(trace.flags.defender_win_nominal);
            row.one_deviation_feasible = Some(trace.flags.one_deviation_feasible);
            row.two_deviation_feasible = trace.flags.two_deviation_feasible;
        }
        Err(e) => row.error = Some(e.to_string()),
    }
    row
}

pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from(
        "x,y,mode,winner,payoff,t_f1,defender_win_nominal,one_deviation_feasible,two_deviation_feasible,error\n",
    );
    for r in rows {
        out.push_str(&r.csv_line());
    }
    out
}

/// Run a sweep spec and write the CSV to `out`.
pub fn cmd_sweep(spec: &SweepSpec, out: &Path) -> Result<usize, CliError> {
    let rows = run_sweep(spec)?;
    fs::write(out, sweep_csv(&rows)).map_err(|source| CliError::Io {
        path: out.display().to_string(),
        source,
    })?;
    Ok(rows.len())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn reference_scenario() -> Scenario {
        Scenario {
            target: Point2::ORIGIN,
            attacker_positions: [Point2::new(-0.9, 0.7), Point2::new(-1.2, 0.4)],
            defender_positions: [Point2::new(-1.5, 0.7), Point2::new(-1.7, 0.3)],
            nu: 2.0 / 3.0,
            mode: Mode::Nominal,
            dt: None,
            capture_eps: None,
            t_max: None,
        }
    }

    #[test]
    fn scenario_validation_rejects_bad_nu() {
        let mut s = reference_scenario();
        s.nu = 1.5;
        match s.validate() {
            Err(CliError::Validation { field, .. }) => assert_eq!(field, "nu"),
            other => panic!("expected nu validation error, got {other:?}"),
        }
    }

    #[test]
    fn scenario_validation_rejects_duplicate_positions() {
        let mut s = reference_scenario();
        s.defender_positions[1] = s.attacker_positions[0];
        match s.validate() {
            Err(CliError::Validation { field, .. }) => assert_eq!(field, "positions"),
            other => panic!("expected positions validation error, got {other:?}"),
        }
    }

    #[test]
    fn scenario_roundtrip_identity() {
        let dir = std::env::temp_dir().join(format!("tdg-test-{}", std::process::id()));
        fs::create_dir_all(&dir).unwrap();
        let path = dir.join("roundtrip.json");
        let mut s = reference_scenario();
        s.mode = Mode::TwoDeviation;
        s.dt = Some(2e-4);
        save_scenario(&path, &s).unwrap();
        let loaded = load_scenario(&path).unwrap();
        assert_eq!(s, loaded);
        fs::remove_file(&path).ok();
    }

    #[test]
    fn summary_indices_are_one_based() {
        let config = SimConfig {
            dt: 5e-4,
            ..SimConfig::default()
        };
        let s = reference_scenario();
        let trace = run(&s.initial_state(), Mode::Nominal, s.speed_ratio(), &config).unwrap();
        let summary = Summary::from_trace(&trace);
        assert_eq!(summary.psi, vec![1, 2]);
        assert_eq!(summary.critical_attacker, 1);
        assert_eq!(summary.critical_defender, 1);
        assert_eq!(summary.winner, "defenders");
    }

    #[test]
    fn trace_csv_contract() {
        let config = SimConfig {
            dt: 5e-4,
            ..SimConfig::default()
        };
        let s = reference_scenario();
        let trace = run(&s.initial_state(), Mode::Nominal, s.speed_ratio(), &config).unwrap();
        let csv = trace_csv(&trace);
        let mut lines = csv.lines();
        assert_eq!(
            lines.next().unwrap(),
            "t,xA1,yA1,xA2,yA2,xD1,yD1,xD2,yD2,xB11x,xB11y,phase"
        );
        let first = lines.next().unwrap();
        assert_eq!(first.split(',').count(), 12);
        // payoff recomputed from the final row matches the summary.
        let last = csv.lines().last().unwrap();
        let cols: Vec<f64> = last
            .split(',')
            .take(11)
            .map(|v| v.parse().unwrap())
            .collect();
        let a1 = Point2::new(cols[1], cols[2]);
        let a2 = Point2::new(cols[3], cols[4]);
        let payoff = a1.dist(Point2::ORIGIN).min(a2.dist(Point2::ORIGIN));
        assert!((payoff - trace.payoff).abs() <= 1e-9);
    }

    #[test]
    fn sweep_rows_and_order() {
        let spec = SweepSpec {
            varied_agent: AgentId::A2,
            grid: GridSpec {
                x_min: -1.3,
                x_max: -1.1,
                y_min: 0.3,
                y_max: 0.5,
                nx: 2,
                ny: 2,
            },
            base: Scenario {
                dt: Some(1e-3),
                capture_eps: Some(2e-3),
                ..reference_scenario()
            },
            modes: vec![Mode::Nominal],
        };
        let rows = run_sweep(&spec).unwrap();
        assert_eq!(rows.len(), 4);
        assert_eq!((rows[0].x, rows[0].y), (-1.3, 0.3));
        assert_eq!((rows[1].x, rows[1].y), (-1.1, 0.3));
        assert_eq!((rows[2].x, rows[2].y), (-1.3, 0.5));
        assert_eq!((rows[3].x, rows[3].y), (-1.1, 0.5));
        assert!(rows.iter().all(|r| r.error.is_none()));
    }

    #[test]
    fn sweep_cell_failure_lands_in_error_column() {
        let spec = SweepSpec {
            varied_agent: AgentId::A2,
            grid: GridSpec {
                x_min: -1.5,
                x_max: -1.0,
                y_min: 0.7,
                y_max: 0.8,
                nx: 2,
                ny: 2,
            },
            base: Scenario {
                dt: Some(1e-3),
                capture_eps: Some(2e-3),
                ..reference_scenario()
            },
            modes: vec![Mode::Nominal],
        };
        // Cell (-1.5, 0.7) coincides with D1 and must fail in isolation.
        let rows = run_sweep(&spec).unwrap();
        assert_eq!(rows.len(), 4);
        let bad = &rows[0];
        assert!(bad.error.is_some());
        assert!(bad.winner.is_none());
        let good = &rows[1];
        assert!(good.error.is_none());
    }

    #[test]
    fn check_report_mentions_key_facts() {
        let report = cmd_check(&reference_scenario()).unwrap();
        assert!(report.contains("psi* = [1, 2]"));
        assert!(report.contains("critical pair: (A1, D1)"));
        assert!(report.contains("one-deviation feasible: true"));
        assert!(report.contains("two-deviation condition (32x32 grid): true"));
    }
}
