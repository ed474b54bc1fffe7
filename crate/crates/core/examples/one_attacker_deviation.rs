//! One-attacker deviation: the helper attacker abandons its own race,
//! meets the critical defender on that defender's straight nominal path,
//! and trades itself away so its teammate can reach the target.
//!
//! ```bash
//! cargo run -p tdg --example one_attacker_deviation
//! ```

use tdg::assignment::{build_cost_matrix, solve_lbap};
use tdg::deviation::one_deviation_candidates;
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

    let assign = solve_lbap(&build_cost_matrix(&state, nu).unwrap());
    let candidates = one_deviation_candidates(&state, &assign, nu);
    println!("interception candidates on the critical defender's path:");
    for (k, c) in candidates.iter().enumerate() {
        println!("  {}: ({:+.4}, {:+.4})", k + 1, c.x, c.y);
    }

    let nominal = run(&state, Mode::Nominal, nu, &SimConfig::default()).unwrap();
    let deviated = run(&state, Mode::OneDeviation, nu, &SimConfig::default()).unwrap();

    let plan = deviated.intercept_plan.unwrap();
    println!(
        "\nchosen interception point: ({:+.4}, {:+.4})",
        plan.point.x, plan.point.y
    );
    println!(
        "helper arrives at t = {:.4}, defender at t = {:.4}",
        plan.eta_attacker, plan.eta_defender
    );

    println!("\nevents:");
    for e in &deviated.events {
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
        "\nnominal payoff {:.4} ({:?}) -> deviation payoff {:.4} ({:?})",
        nominal.payoff, nominal.outcome, deviated.payoff, deviated.outcome
    );
}
