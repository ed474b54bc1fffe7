//! The all-nominal 2v2 game: both teams follow the assignment-based
//! feedback strategies, the defenders win, and the capture points stay
//! put for the whole engagement.
//!
//! ```bash
//! cargo run -p tdg --example nominal_game
//! ```

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

    let trace = run(&state, Mode::Nominal, nu, &SimConfig::default()).unwrap();

    println!("outcome: {:?}", trace.outcome);
    println!("payoff (closest miss distance): {:.4}", trace.payoff);
    println!(
        "phase I ends at t = {:.4}, game ends at t = {:.4}",
        trace.phase1_end.unwrap(),
        trace.t_final
    );
    println!("\nevents:");
    for e in &trace.events {
        println!(
            "  t = {:.4}: {:?}, attacker A{}{} at ({:+.4}, {:+.4})",
            e.t,
            e.kind,
            e.attacker + 1,
            e.defender
                .map(|j| format!(" by D{}", j + 1))
                .unwrap_or_default(),
            e.position.x,
            e.position.y
        );
    }

    // The critical pair's capture point barely moves while both sides
    // hold the equilibrium strategies.
    let crit = trace.assignment.critical_attacker;
    let xb0 = trace.rows[0].capture_points[crit];
    let drift = trace
        .rows
        .iter()
        .map(|r| r.capture_points[crit].dist(xb0))
        .fold(0.0, f64::max);
    println!(
        "\ncapture point of the critical pair: ({:+.4}, {:+.4}), max drift {:.2e}",
        xb0.x, xb0.y, drift
    );
}
