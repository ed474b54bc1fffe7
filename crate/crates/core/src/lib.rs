//! Deterministic simulation engine for the 2v2 target-defense
//! differential game.
//!
//! Two unit-speed-ratio-limited attackers race toward a static target
//! while two faster defenders try to capture them first. Defenders play
//! the classical decomposition: a bottleneck assignment of defenders to
//! attackers, then saddle-point 1v1 feedback toward the Apollonius-circle
//! capture point of each pair. The attacker team may instead coordinate:
//! one attacker sacrifices itself to intercept the critical defender,
//! optionally while its teammate runs straight at the target.
//!
//! Module map:
//! - [`geom`]: planar primitives and membership predicates.
//! - [`engagement`]: Apollonius circle, capture point, 1v1 strategies,
//!   and the analytic capture-point velocity.
//! - [`assignment`]: cost matrix, max-min assignment, nominal controls.
//! - [`deviation`]: interception candidates and plans, pursuit-path
//!   precomputation, and the geometric feasibility certificates.
//! - [`sim`]: the event-driven fixed-step game integrator.
//! - [`cli`]: scenario files, run artifacts, and win-region sweeps.
//!
//! The `examples/` directory holds one runnable program per capability;
//! the `tdg` binary wraps the same entry points behind `run`, `sweep`,
//! and `check` subcommands.

pub mod assignment;
pub mod cli;
pub mod deviation;
pub mod engagement;
pub mod geom;
pub mod sim;

pub use assignment::{build_cost_matrix, solve_lbap, Assignment, CostMatrix};
pub use engagement::{
    apollonius, capture_point, capture_point_velocity, strategy_1v1_attacker,
    strategy_1v1_defender, ApolloniusCircle, CapturePoint, SpeedRatio,
};
pub use geom::Point2;
pub use sim::{run, GameState, Mode, Outcome, SimConfig, SimTrace};
