//! The geometric feasibility certificate for the two-attacker deviation:
//! the safe circle, the annular-sector bound on the moving capture
//! point, the defender's triangle bounds, and the grid-checked
//! interception condition at increasing resolutions.
//!
//! ```bash
//! cargo run -p tdg --example feasibility_regions
//! ```

use tdg::assignment::{build_cost_matrix, solve_lbap};
use tdg::deviation::{build_feasibility_regions, check_two_deviation_condition};
use tdg::engagement::SpeedRatio;
use tdg::geom::Point2;
use tdg::sim::GameState;

fn main() {
    let nu = SpeedRatio::new(2.0 / 3.0).unwrap();
    let state = GameState::new(
        Point2::ORIGIN,
        [Point2::new(-0.9, 0.7), Point2::new(-1.2, 0.4)],
        [Point2::new(-1.5, 0.7), Point2::new(-1.7, 0.3)],
    );

    let assign = solve_lbap(&build_cost_matrix(&state, nu).unwrap());
    let regions = build_feasibility_regions(&state, &assign, nu).unwrap();

    println!("safe circle radius: {:.4}", regions.safe_circle_radius);
    println!(
        "ray anchors: P1 ({:+.4}, {:+.4}), P2 ({:+.4}, {:+.4}), P3 ({:+.4}, {:+.4})",
        regions.p1.x, regions.p1.y, regions.p2.x, regions.p2.y, regions.p3.x, regions.p3.y
    );
    println!(
        "capture-point band: {:.4} < |x - target| < {:.4}",
        regions.omega_b.rho_inner, regions.omega_b.rho_outer
    );
    println!(
        "defender wedge vertices: ({:+.4}, {:+.4}) / ({:+.4}, {:+.4}) / ({:+.4}, {:+.4})",
        regions.omega_d1.v1.x,
        regions.omega_d1.v1.y,
        regions.omega_d1.v2.x,
        regions.omega_d1.v2.y,
        regions.omega_d1.v3.x,
        regions.omega_d1.v3.y
    );

    println!("\ninterception condition at increasing grid resolutions:");
    for grid_n in [16, 32, 64, 128] {
        let holds = check_two_deviation_condition(&regions, &state, &assign, nu, grid_n);
        println!("  {grid_n:>4} x {grid_n:<4}: {holds}");
    }
}
