//! Test-only oracles, independent of the library's closed forms.
#![allow(dead_code)]

/// `(p_1, …, p_{n-1})` from angles, written out directly from the polar
/// coordinates.
pub fn free_coordinates(theta: &[f64]) -> Vec<f64> {
    (0..theta.len())
        .map(|i| {
            let x: f64 = theta[..i].iter().map(|t| t.sin()).product::<f64>() * theta[i].cos();
            x * x
        })
        .collect()
}

/// Determinant by Gaussian elimination with partial pivoting.
pub fn determinant(mut a: Vec<Vec<f64>>) -> f64 {
    let n = a.len();
    let mut det = 1.0;
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))
            .unwrap();
        if a[pivot][col] == 0.0 {
            return 0.0;
        }
        if pivot != col {
            a.swap(pivot, col);
            det = -det;
        }
        det *= a[col][col];
        for row in col + 1..n {
            let factor = a[row][col] / a[col][col];
            for k in col..n {
                a[row][k] -= factor * a[col][k];
            }
        }
    }
    det
}

/// `ln |det ∂p_i/∂θ_j|` by central differences with step `h`.
pub fn finite_difference_log_jacobian(theta: &[f64], h: f64) -> f64 {
    let d = theta.len();
    let mut jac = vec![vec![0.0; d]; d];
    for j in 0..d {
        let mut plus = theta.to_vec();
        let mut minus = theta.to_vec();
        plus[j] += h;
        minus[j] -= h;
        let fp = free_coordinates(&plus);
        let fm = free_coordinates(&minus);
        for i in 0..d {
            jac[i][j] = (fp[i] - fm[i]) / (2.0 * h);
        }
    }
    determinant(jac).abs().ln()
}

/// Every vector of `n` nonnegative integers with sum at most `max_total`.
pub fn integer_vectors(n: usize, max_total: usize) -> Vec<Vec<f64>> {
    fn rec(n: usize, left: usize, prefix: &mut Vec<f64>, out: &mut Vec<Vec<f64>>) {
        if prefix.len() == n {
            out.push(prefix.clone());
            return;
        }
        for k in 0..=left {
            prefix.push(k as f64);
            rec(n, left - k, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, max_total, &mut Vec::new(), &mut out);
    out
}

/// Relative error computed from two natural logs.
pub fn rel_from_logs(a: f64, b: f64) -> f64 {
    (a - b).exp_m1().abs()
}
