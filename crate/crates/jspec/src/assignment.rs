//! Linear assignment by shortest augmenting paths with dual potentials
//! (Jonker-Volgenant style), O(n³). Finds a permutation minimizing
//! `Σ_j cost[j][π(j)]`.

/// Returns the minimizing permutation (row j is assigned column π(j)) and the
/// minimum total cost. Requires a square matrix of finite nonnegative costs.
pub fn optimal_matching(cost: &[Vec<f64>]) -> (Vec<usize>, f64) {
    let n = cost.len();
    assert!(n > 0, "cost matrix must be nonempty");
    for row in cost {
        assert_eq!(row.len(), n, "cost matrix must be square");
        assert!(
            row.iter().all(|c| c.is_finite() && *c >= 0.0),
            "costs must be finite and nonnegative"
        );
    }

    // 1-based potentials over rows (u) and columns (v); match_of_col[j] is
    // the row assigned to column j, 0 meaning unassigned.
    let mut u = vec![0.0f64; n + 1];
    let mut v = vec![0.0f64; n + 1];
    let mut match_of_col = vec![0usize; n + 1];
    let mut path = vec![0usize; n + 1];

    for row in 1..=n {
        match_of_col[0] = row;
        let mut current_col = 0usize;
        let mut min_to_col = vec![f64::INFINITY; n + 1];
        let mut used = vec![false; n + 1];

        loop {
            used[current_col] = true;
            let current_row = match_of_col[current_col];
            let mut delta = f64::INFINITY;
            let mut next_col = 0usize;

            for col in 1..=n {
                if used[col] {
                    continue;
                }
                let reduced = cost[current_row - 1][col - 1] - u[current_row] - v[col];
                if reduced < min_to_col[col] {
                    min_to_col[col] = reduced;
                    path[col] = current_col;
                }
                if min_to_col[col] < delta {
                    delta = min_to_col[col];
                    next_col = col;
                }
            }

            for col in 0..=n {
                if used[col] {
                    u[match_of_col[col]] += delta;
                    v[col] -= delta;
                } else {
                    min_to_col[col] -= delta;
                }
            }

            current_col = next_col;
            if match_of_col[current_col] == 0 {
                break;
            }
        }

        // augment along the alternating path
        while current_col != 0 {
            let prev = path[current_col];
            match_of_col[current_col] = match_of_col[prev];
            current_col = prev;
        }
    }

    let mut permutation = vec![0usize; n];
    for col in 1..=n {
        permutation[match_of_col[col] - 1] = col - 1;
    }
    let total = permutation
        .iter()
        .enumerate()
        .map(|(row, &col)| cost[row][col])
        .sum();
    (permutation, total)
}
