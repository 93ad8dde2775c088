//! Small dense linear-algebra helpers.

/// Solve the square system `a x = b` by Gaussian elimination with partial
/// pivoting. Returns `None` when the matrix is singular to within `tol`
/// relative to its largest entry.
pub fn solve(a: &[Vec<f64>], b: &[f64], tol: f64) -> Option<Vec<f64>> {
    let n = b.len();
    if a.len() != n || a.iter().any(|r| r.len() != n) {
        return None;
    }
    let scale = a.iter().flatten().fold(0.0_f64, |m, v| m.max(v.abs())).max(1e-300);
    let mut m: Vec<Vec<f64>> = a.iter().zip(b).map(|(r, &bi)| {
        let mut row = r.clone();
        row.push(bi);
        row
    }).collect();
    for col in 0..n {
        let pivot = (col..n).max_by(|&i, &j| m[i][col].abs().total_cmp(&m[j][col].abs()))?;
        if m[pivot][col].abs() <= tol * scale {
            return None;
        }
        m.swap(col, pivot);
        for i in (col + 1)..n {
            let f = m[i][col] / m[col][col];
            if f != 0.0 {
                for j in col..=n {
                    m[i][j] -= f * m[col][j];
                }
            }
        }
    }
    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        let s: f64 = ((i + 1)..n).map(|j| m[i][j] * x[j]).sum();
        x[i] = (m[i][n] - s) / m[i][i];
    }
    Some(x)
}

/// Spectral radius of a non-negative square matrix by power iteration.
///
/// Returns the Collatz–Wielandt estimate after at most `iters` steps or once
/// the lower and upper bounds agree within `tol`. The iteration runs on
/// `M + I`, which has the same Perron vector and avoids oscillation on
/// periodic (e.g. bipartite) patterns.
pub fn spectral_radius_nonneg(m: &[Vec<f64>], iters: usize, tol: f64) -> f64 {
    let n = m.len();
    if n == 0 {
        return 0.0;
    }
    let mut v = vec![1.0 / n as f64; n];
    let mut estimate = 0.0;
    for _ in 0..iters {
        let w: Vec<f64> = (0..n)
            .map(|i| v[i] + (0..n).map(|j| m[i][j].abs() * v[j]).sum::<f64>())
            .collect();
        let ratios = (0..n).filter(|&i| v[i] > 0.0).map(|i| w[i] / v[i]);
        let (lo, hi) = ratios.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), r| (lo.min(r), hi.max(r)));
        estimate = 0.5 * (lo + hi) - 1.0;
        let total: f64 = w.iter().sum();
        if total <= 0.0 || !total.is_finite() {
            return 0.0;
        }
        v = w.iter().map(|x| x / total).collect();
        if hi - lo <= tol {
            break;
        }
    }
    estimate.max(0.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solves_two_by_two() {
        let x = solve(&[vec![2.0, 1.0], vec![1.0, 2.0]], &[3.0, 3.0], 1e-12).unwrap();
        assert!((x[0] - 1.0).abs() < 1e-14 && (x[1] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn singular_is_none() {
        assert!(solve(&[vec![1.0, 2.0], vec![2.0, 4.0]], &[1.0, 2.0], 1e-12).is_none());
    }

    #[test]
    fn radius_of_swap_matrix_is_one() {
        let r = spectral_radius_nonneg(&[vec![0.0, 1.0], vec![1.0, 0.0]], 200, 1e-10);
        assert!((r - 1.0).abs() < 1e-9);
    }

    #[test]
    fn radius_of_zero_matrix_is_zero() {
        assert_eq!(spectral_radius_nonneg(&[vec![0.0]], 200, 1e-10), 0.0);
    }
}
