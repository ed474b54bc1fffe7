//! Two-attacker deviation: the critical attacker runs straight at the
//! target, which bends its pursuer's path; the helper anticipates that
//! curved trajectory numerically and intercepts at its far feasible end.
//!
//! ```bash
//! cargo run -p tdg --example two_attacker_deviation
//! ```

use tdg::assignment::{build_cost_matrix, solve_lbap};
use tdg::deviation::{precompute_defender_trajectory, two_deviation_plan};
use tdg::engagement::SpeedRatio;
use tdg::geom::Point2;
use tdg::sim::{run, GameState, Mode, SimConfig};

fn main() {
    let nu = SpeedRatio::new(2.0 / 3.0).unwrap();
    let state = GameState::new(
        Point2::ORIGIN,
        [Point2::new(-0.9, 0.7), Point2::new(-1.2, 0.4)],
        [Point2::new(-1.5, 0.7), Point2::new(-1.7, 0.3)],
    );
    let config = SimConfig::default();

    let assign = solve_lbap(&build_cost_matrix(&state, nu).unwrap());
    let traj = precompute_defender_trajectory(
        &state,
        &assign,
        nu,
        config.dt,
        config.capture_eps,
        config.t_max,
    )
    .unwrap();
    println!(
        "anticipated pursuit: {} samples, ends {} at t = {:.4}",
        traj.samples.len(),
        if traj.captured {
            "in a capture"
        } else {
            "at the target"
        },
        traj.samples.last().unwrap().0
    );

    let plan = two_deviation_plan(&traj, &state, &assign, nu).unwrap();
    println!(
        "interception point ({:+.4}, {:+.4}): helper travel {:.4}, defender arrival {:.4}",
        plan.point.x, plan.point.y, plan.eta_attacker, plan.eta_defender
    );

    let trace = run(&state, Mode::TwoDeviation, nu, &config).unwrap();
    println!("\nevents:");
    for e in &trace.events {
        println!(
            "  t = {:.4}: {:?} (A{}{})",
            e.t,
            e.kind,
            e.attacker + 1,
            e.defender
                .map(|j| format!(" / D{}", j + 1))
                .unwrap_or_default()
        );
    }
    println!(
        "\noutcome: {:?}, payoff {:.4}, certificate: {:?}",
        trace.outcome, trace.payoff, trace.flags.two_deviation_feasible
    );
}
