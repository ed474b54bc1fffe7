//! Defender-side bottleneck assignment: per-pair guaranteed miss
//! distances, the max-min defender-to-attacker matching, the critical
//! pair, and the nominal feedback controls it induces.

use serde::Serialize;

use crate::engagement::{apollonius, capture_point, EngagementError, SpeedRatio};
use crate::geom::{unit_vector, Point2};
use crate::sim::GameState;

/// Square matrix of per-pair miss distances; rows are attackers, columns
/// defenders. Entry `(i, j)` is zero exactly when the target sits inside
/// the pair's Apollonius disk.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct CostMatrix {
    rows: Vec<Vec<f64>>,
}

impl CostMatrix {
    pub fn from_rows(rows: Vec<Vec<f64>>) -> Self {
        let n = rows.len();
        assert!(
            rows.iter().all(|r| r.len() == n),
            "cost matrix must be square"
        );
        assert!(
            rows.iter().flatten().all(|v| v.is_finite() && *v >= 0.0),
            "cost entries must be finite and non-negative"
        );
        CostMatrix { rows }
    }

    pub fn n(&self) -> usize {
        self.rows.len()
    }

    pub fn get(&self, attacker: usize, defender: usize) -> f64 {
        self.rows[attacker][defender]
    }
}

/// A defender-to-attacker matching: `psi[i]` is the defender index
/// assigned to attacker `i`. `value` is the bottleneck (minimum assigned
/// cost) and the critical pair attains it.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Assignment {
    pub psi: Vec<usize>,
    pub value: f64,
    pub critical_attacker: usize,
    pub critical_defender: usize,
}

/// Miss-distance matrix of the current state.
pub fn build_cost_matrix(state: &GameState, nu: SpeedRatio) -> Result<CostMatrix, EngagementError> {
    let n = state.attackers.len();
    let mut rows = Vec::with_capacity(n);
    for a in &state.attackers {
        let mut row = Vec::with_capacity(n);
        for d in &state.defenders {
            let ac = apollonius(a.position, d.position, nu)?;
            row.push(capture_point(&ac, state.target).distance_to_target);
        }
        rows.push(row);
    }
    Ok(CostMatrix::from_rows(rows))
}

/// Advance `perm` to the next lexicographic permutation; false at the end.
fn next_permutation(perm: &mut [usize]) -> bool {
    let n = perm.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && perm[i - 1] >= perm[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while perm[j] <= perm[i - 1] {
        j -= 1;
    }
    perm.swap(i - 1, j);
    perm[i..].reverse();
    true
}

fn bottleneck(c: &CostMatrix, psi: &[usize]) -> f64 {
    psi.iter()
        .enumerate()
        .map(|(i, &j)| c.get(i, j))
        .fold(f64::INFINITY, f64::min)
}

/// Max-min assignment by exhaustive permutation search (n <= 8).
///
/// Ties on the bottleneck value are broken toward the lexicographically
/// smallest `psi`; the critical attacker is the lowest index attaining
/// the bottleneck.
pub fn solve_lbap(c: &CostMatrix) -> Assignment {
    let n = c.n();
    assert!(
        (1..=8).contains(&n),
        "exhaustive LBAP limited to 1 <= n <= 8"
    );
    let mut psi: Vec<usize> = (0..n).collect();
    let mut best_psi = psi.clone();
    let mut best_value = bottleneck(c, &psi);
    while next_permutation(&mut psi) {
        let v = bottleneck(c, &psi);
        if v > best_value {
            best_value = v;
            best_psi = psi.clone();
        }
    }
    let critical_attacker = (0..n)
        .min_by(|&a, &b| {
            c.get(a, best_psi[a])
                .partial_cmp(&c.get(b, best_psi[b]))
                .unwrap()
                .then(a.cmp(&b))
        })
        .unwrap();
    Assignment {
        critical_defender: best_psi[critical_attacker],
        critical_attacker,
        value: best_value,
        psi: best_psi,
    }
}

/// Per-agent unit controls under the frozen assignment: each live pair
/// aims at its current capture point. Inactive agents, broken pairs, and
/// degenerate aim directions yield zero control.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NominalControls {
    pub attackers: [Point2; 2],
    pub defenders: [Point2; 2],
}

pub fn nominal_controls(
    state: &GameState,
    assign: &Assignment,
    nu: SpeedRatio,
) -> Result<NominalControls, EngagementError> {
    let mut out = NominalControls {
        attackers: [Point2::ORIGIN; 2],
        defenders: [Point2::ORIGIN; 2],
    };
    for i in 0..2 {
        let j = assign.psi[i];
        if !(state.attackers[i].active && state.defenders[j].active) {
            continue;
        }
        let ac = apollonius(state.attackers[i].position, state.defenders[j].position, nu)?;
        let xb = capture_point(&ac, state.target).point;
        out.attackers[i] = unit_vector(state.attackers[i].position, xb).unwrap_or(Point2::ORIGIN);
        out.defenders[j] = unit_vector(state.defenders[j].position, xb).unwrap_or(Point2::ORIGIN);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::GameState;
    use approx::assert_relative_eq;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    fn nu23() -> SpeedRatio {
        SpeedRatio::new(2.0 / 3.0).unwrap()
    }

    fn reference_state() -> GameState {
        GameState::new(
            Point2::ORIGIN,
            [Point2::new(-0.9, 0.7), Point2::new(-1.2, 0.4)],
            [Point2::new(-1.5, 0.7), Point2::new(-1.7, 0.3)],
        )
    }

    #[test]
    fn cost_matrix_reference_values() {
        let c = build_cost_matrix(&reference_state(), nu23()).unwrap();
        assert_relative_eq!(c.get(0, 0), 0.0963, epsilon = 1e-4);
        assert_eq!(c.get(0, 1), 0.0);
        assert_relative_eq!(c.get(1, 0), 0.4641, epsilon = 1e-4);
        assert_relative_eq!(c.get(1, 1), 0.3211, epsilon = 1e-4);
    }

    #[test]
    fn cost_matrix_all_zero_when_disks_cover_target() {
        // Attackers close to the target, defenders far behind.
        let state = GameState::new(
            Point2::ORIGIN,
            [Point2::new(-0.1, 0.0), Point2::new(0.1, 0.05)],
            [Point2::new(-3.0, 0.2), Point2::new(3.0, -0.2)],
        );
        let c = build_cost_matrix(&state, nu23()).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                assert_eq!(c.get(i, j), 0.0);
            }
        }
    }

    #[test]
    fn cost_matrix_mirror_symmetry() {
        let state = GameState::new(
            Point2::ORIGIN,
            [Point2::new(-1.0, 0.5), Point2::new(-1.0, -0.5)],
            [Point2::new(-2.0, 0.4), Point2::new(-2.0, -0.4)],
        );
        let c = build_cost_matrix(&state, nu23()).unwrap();
        assert_relative_eq!(c.get(0, 0), c.get(1, 1), max_relative = 1e-12);
        assert_relative_eq!(c.get(0, 1), c.get(1, 0), max_relative = 1e-12);
    }

    #[test]
    fn lbap_reference_assignment() {
        let c = build_cost_matrix(&reference_state(), nu23()).unwrap();
        let a = solve_lbap(&c);
        assert_eq!(a.psi, vec![0, 1]);
        assert_relative_eq!(a.value, 0.0963, epsilon = 1e-4);
        assert_eq!((a.critical_attacker, a.critical_defender), (0, 0));
    }

    #[test]
    fn lbap_prefers_diagonal() {
        let c = CostMatrix::from_rows(vec![vec![1.0, 0.0], vec![0.0, 1.0]]);
        let a = solve_lbap(&c);
        assert_eq!(a.psi, vec![0, 1]);
        assert_eq!(a.value, 1.0);
    }

    #[test]
    fn lbap_tie_break_is_identity() {
        let c = CostMatrix::from_rows(vec![vec![0.5, 0.5], vec![0.5, 0.5]]);
        let a = solve_lbap(&c);
        assert_eq!(a.psi, vec![0, 1]);
        assert_eq!(a.critical_attacker, 0);
    }

    /// Independent max-min oracle over all permutations, built from a
    /// different enumeration (index-set recursion) than the solver.
    fn brute_force(c: &CostMatrix) -> (Vec<usize>, f64) {
        fn rec(
            c: &CostMatrix,
            row: usize,
            used: &mut Vec<bool>,
            cur: &mut Vec<usize>,
            best: &mut Option<(Vec<usize>, f64)>,
        ) {
            let n = c.n();
            if row == n {
                let v = cur
                    .iter()
                    .enumerate()
                    .map(|(i, &j)| c.get(i, j))
                    .fold(f64::INFINITY, f64::min);
                let better = match best {
                    None => true,
                    Some((bp, bv)) => v > *bv || (v == *bv && cur < bp),
                };
                if better {
                    *best = Some((cur.clone(), v));
                }
                return;
            }
            for j in 0..n {
                if !used[j] {
                    used[j] = true;
                    cur.push(j);
                    rec(c, row + 1, used, cur, best);
                    cur.pop();
                    used[j] = false;
                }
            }
        }
        let mut best = None;
        rec(c, 0, &mut vec![false; c.n()], &mut Vec::new(), &mut best);
        best.unwrap()
    }

    #[test]
    fn lbap_matches_brute_force_small_sizes() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..200 {
            let n = rng.gen_range(2..=5);
            let rows: Vec<Vec<f64>> = (0..n)
                .map(|_| (0..n).map(|_| rng.gen_range(0.0..2.0)).collect())
                .collect();
            let c = CostMatrix::from_rows(rows);
            let got = solve_lbap(&c);
            let (psi, value) = brute_force(&c);
            assert_eq!(got.psi, psi);
            assert_eq!(got.value, value);
        }
    }

    #[test]
    fn lbap_value_invariant_under_row_permutation() {
        let mut rng = ChaCha8Rng::seed_from_u64(22);
        for _ in 0..200 {
            let n = rng.gen_range(2..=4);
            let rows: Vec<Vec<f64>> = (0..n)
                .map(|_| (0..n).map(|_| rng.gen_range(0.0..2.0)).collect())
                .collect();
            let c = CostMatrix::from_rows(rows.clone());
            let a = solve_lbap(&c);
            // Swap the first two attacker labels.
            let mut swapped_rows = rows;
            swapped_rows.swap(0, 1);
            let swapped = CostMatrix::from_rows(swapped_rows);
            let b = solve_lbap(&swapped);
            assert_eq!(a.value, b.value);
            // The relabeled image of the original optimum attains the
            // same bottleneck (several permutations may tie; the
            // lexicographic tie-break need not commute with relabeling).
            let mut image = a.psi.clone();
            image.swap(0, 1);
            let image_value = image
                .iter()
                .enumerate()
                .map(|(i, &j)| swapped.get(i, j))
                .fold(f64::INFINITY, f64::min);
            assert_eq!(image_value, b.value);
        }
    }

    #[test]
    fn lbap_value_bounds_assigned_costs() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for _ in 0..200 {
            let n = rng.gen_range(2..=5);
            let rows: Vec<Vec<f64>> = (0..n)
                .map(|_| (0..n).map(|_| rng.gen_range(0.0..2.0)).collect())
                .collect();
            let c = CostMatrix::from_rows(rows);
            let a = solve_lbap(&c);
            for (i, &j) in a.psi.iter().enumerate() {
                assert!(a.value <= c.get(i, j) + 1e-15);
            }
            assert_eq!(a.value, c.get(a.critical_attacker, a.critical_defender));
        }
    }

    #[test]
    fn nominal_controls_aim_at_shared_capture_point() {
        let state = reference_state();
        let nc = nominal_controls(
            &state,
            &solve_lbap(&build_cost_matrix(&state, nu23()).unwrap()),
            nu23(),
        )
        .unwrap();
        let xb = Point2::new(-0.0496, 0.0826);
        let ua = unit_vector(state.attackers[0].position, xb).unwrap();
        let ud = unit_vector(state.defenders[0].position, xb).unwrap();
        assert_relative_eq!(nc.attackers[0].x, ua.x, epsilon = 1e-4);
        assert_relative_eq!(nc.attackers[0].y, ua.y, epsilon = 1e-4);
        assert_relative_eq!(nc.defenders[0].x, ud.x, epsilon = 1e-4);
        assert_relative_eq!(nc.defenders[0].y, ud.y, epsilon = 1e-4);
    }

    #[test]
    fn nominal_controls_skip_broken_pairs() {
        let mut state = reference_state();
        state.attackers[1].active = false;
        state.defenders[1].active = false;
        let assign = solve_lbap(&build_cost_matrix(&state, nu23()).unwrap());
        let nc = nominal_controls(&state, &assign, nu23()).unwrap();
        assert_eq!(nc.attackers[1], Point2::ORIGIN);
        assert_eq!(nc.defenders[1], Point2::ORIGIN);
        assert!(nc.attackers[0].norm() > 0.9);
    }

    #[test]
    fn nominal_controls_mirror_symmetry() {
        let state = GameState::new(
            Point2::ORIGIN,
            [Point2::new(-1.0, 0.5), Point2::new(-1.0, -0.5)],
            [Point2::new(-2.0, 0.4), Point2::new(-2.0, -0.4)],
        );
        let assign = solve_lbap(&build_cost_matrix(&state, nu23()).unwrap());
        let nc = nominal_controls(&state, &assign, nu23()).unwrap();
        assert_relative_eq!(nc.attackers[0].x, nc.attackers[1].x, max_relative = 1e-12);
        assert_relative_eq!(nc.attackers[0].y, -nc.attackers[1].y, max_relative = 1e-12);
        assert_relative_eq!(nc.defenders[0].y, -nc.defenders[1].y, max_relative = 1e-12);
    }
}
