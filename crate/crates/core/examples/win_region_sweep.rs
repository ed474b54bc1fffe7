//! Win-region sweep: vary the helper attacker's initial position over a
//! grid and compare nominal play against the one-attacker deviation in
//! every cell. Writes `sweep.csv` into the current directory.
//!
//! ```bash
//! cargo run -p tdg --example win_region_sweep
//! ```

use tdg::cli::{run_sweep, sweep_csv, AgentId, GridSpec, Scenario, SweepSpec};
use tdg::geom::Point2;
use tdg::sim::Mode;

fn main() {
    let spec = SweepSpec {
        varied_agent: AgentId::A2,
        grid: GridSpec {
            x_min: -1.45,
            x_max: -0.95,
            y_min: 0.15,
            y_max: 0.65,
            nx: 9,
            ny: 9,
        },
        base: Scenario {
            target: Point2::ORIGIN,
            attacker_positions: [Point2::new(-0.9, 0.7), Point2::new(-1.2, 0.4)],
            defender_positions: [Point2::new(-1.5, 0.7), Point2::new(-1.7, 0.3)],
            nu: 2.0 / 3.0,
            mode: Mode::Nominal,
            dt: Some(2e-4),
            capture_eps: None,
            t_max: None,
        },
        modes: vec![Mode::Nominal, Mode::OneDeviation],
    };

    let rows = run_sweep(&spec).unwrap();

    let mut feasible = 0;
    let mut flipped = 0;
    for pair in rows.chunks(2) {
        let (nominal, deviated) = (&pair[0], &pair[1]);
        if deviated.one_deviation_feasible == Some(true) {
            feasible += 1;
            if nominal.winner.as_deref() == Some("defenders")
                && deviated.winner.as_deref() == Some("attackers")
            {
                flipped += 1;
            }
        }
    }
    println!(
        "{} cells: {} deviation-feasible, {} flip from defender win to attacker win",
        rows.len() / 2,
        feasible,
        flipped
    );

    std::fs::write("sweep.csv", sweep_csv(&rows)).unwrap();
    println!("wrote sweep.csv ({} rows)", rows.len());
}
