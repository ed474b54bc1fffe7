//! Defender-to-attacker assignment: the miss-distance matrix, the
//! max-min matching, and the critical pair it exposes.
//!
//! ```bash
//! cargo run -p tdg --example bottleneck_assignment
//! ```

use tdg::assignment::{build_cost_matrix, solve_lbap, CostMatrix};
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

    let cost = build_cost_matrix(&state, nu).unwrap();
    println!("miss-distance matrix (rows: attackers, cols: defenders):");
    for i in 0..cost.n() {
        let row: Vec<String> = (0..cost.n())
            .map(|j| format!("{:.4}", cost.get(i, j)))
            .collect();
        println!("  A{}: [{}]", i + 1, row.join(", "));
    }

    let assign = solve_lbap(&cost);
    let psi: Vec<String> = assign.psi.iter().map(|j| format!("D{}", j + 1)).collect();
    println!("\nassignment: [{}]", psi.join(", "));
    println!("bottleneck value: {:.4}", assign.value);
    println!(
        "critical pair: A{} vs D{} (this pair decides the team payoff)",
        assign.critical_attacker + 1,
        assign.critical_defender + 1
    );

    // The solver also handles larger matrices, still by exhaustive
    // search; here a 4x4 with an adversarial diagonal.
    let m = CostMatrix::from_rows(vec![
        vec![0.2, 0.9, 0.4, 0.8],
        vec![0.7, 0.3, 0.6, 0.1],
        vec![0.5, 0.4, 0.8, 0.2],
        vec![0.6, 0.3, 0.2, 0.9],
    ]);
    let a4 = solve_lbap(&m);
    println!(
        "\n4x4 example: psi = {:?} (1-based {:?}), value = {:.2}",
        a4.psi,
        a4.psi.iter().map(|j| j + 1).collect::<Vec<_>>(),
        a4.value
    );
}
