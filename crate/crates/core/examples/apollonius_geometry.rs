//! Apollonius-circle basics: dominance disks, capture points, and miss
//! distances for the reference engagement.
//!
//! ```bash
//! cargo run -p tdg --example apollonius_geometry
//! ```

use tdg::engagement::{apollonius, capture_point, SpeedRatio};
use tdg::geom::Point2;

fn main() {
    let nu = SpeedRatio::new(2.0 / 3.0).unwrap();
    let target = Point2::ORIGIN;

    println!("speed ratio nu = {:.4}", nu.value());
    println!(
        "center coefficients: alpha = {:.4}, beta = {:.4}, radius slope gamma = {:.4}\n",
        nu.alpha(),
        nu.beta(),
        nu.gamma()
    );

    let pairs = [
        ("A1 vs D1", Point2::new(-0.9, 0.7), Point2::new(-1.5, 0.7)),
        ("A1 vs D2", Point2::new(-0.9, 0.7), Point2::new(-1.7, 0.3)),
        ("A2 vs D1", Point2::new(-1.2, 0.4), Point2::new(-1.5, 0.7)),
        ("A2 vs D2", Point2::new(-1.2, 0.4), Point2::new(-1.7, 0.3)),
    ];

    for (label, attacker, defender) in pairs {
        let ac = apollonius(attacker, defender, nu).unwrap();
        let cp = capture_point(&ac, target);
        println!("{label}:");
        println!(
            "  disk center ({:+.4}, {:+.4}), radius {:.4}",
            ac.center.x, ac.center.y, ac.radius
        );
        if cp.target_inside {
            println!("  target inside the disk: the attacker wins this pair outright\n");
        } else {
            println!(
                "  capture point ({:+.4}, {:+.4}), miss distance {:.4}\n",
                cp.point.x, cp.point.y, cp.distance_to_target
            );
        }
    }

    // The defining property: boundary points split travel times evenly.
    let ac = apollonius(Point2::new(-0.9, 0.7), Point2::new(-1.5, 0.7), nu).unwrap();
    let p = ac.boundary_point(1.0);
    println!(
        "boundary point check: |p-A| / |p-D| = {:.12} (nu = {:.12})",
        p.dist(ac.attacker) / p.dist(ac.defender),
        nu.value()
    );
}
