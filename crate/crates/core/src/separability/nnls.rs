//! Lawson–Hanson active-set nonnegative least squares.

use crate::error::{Error, Result};

/// Minimizes ‖Σ_j z_j a_j − b‖₂ over the given columns by Householder QR.
/// Columns that are numerically dependent on earlier ones get coefficient 0.
pub fn least_squares(columns: &[&[f64]], b: &[f64]) -> Vec<f64> {
    let rows = b.len();
    let p = columns.len();
    let mut a: Vec<Vec<f64>> = columns.iter().map(|c| c.to_vec()).collect();
    let mut rhs = b.to_vec();
    let scale = a.iter().flatten().fold(0.0f64, |m, x| m.max(x.abs())).max(f64::MIN_POSITIVE);
    let mut pivots = vec![0.0; p];
    let steps = p.min(rows);
    for j in 0..steps {
        let norm = a[j][j..].iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm <= 1e-13 * scale {
            pivots[j] = 0.0;
            continue;
        }
        let alpha = if a[j][j] > 0.0 { -norm } else { norm };
        let mut v: Vec<f64> = a[j][j..].to_vec();
        v[0] -= alpha;
        let vnorm2: f64 = v.iter().map(|x| x * x).sum();
        pivots[j] = alpha;
        if vnorm2 == 0.0 {
            continue;
        }
        let reflect = |col: &mut [f64]| {
            let dot: f64 = v.iter().zip(col.iter()).map(|(x, y)| x * y).sum();
            let f = 2.0 * dot / vnorm2;
            for (c, x) in col.iter_mut().zip(&v) {
                *c -= f * x;
            }
        };
        for col in a.iter_mut().skip(j + 1) {
            reflect(&mut col[j..]);
        }
        reflect(&mut rhs[j..]);
    }
    let mut z = vec![0.0; p];
    for j in (0..steps).rev() {
        if pivots[j] == 0.0 {
            continue;
        }
        let mut acc = rhs[j];
        for (k, col) in a.iter().enumerate().take(steps).skip(j + 1) {
            acc -= col[j] * z[k];
        }
        z[j] = acc / pivots[j];
    }
    z
}

#[derive(Debug, Clone, PartialEq)]
pub struct NnlsSolution {
    pub x: Vec<f64>,
    /// ‖A x − b‖₂
    pub residual_norm: f64,
    pub iterations: usize,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn residual(columns: &[Vec<f64>], x: &[f64], b: &[f64]) -> Vec<f64> {
    let mut r = b.to_vec();
    for (col, &xj) in columns.iter().zip(x) {
        if xj != 0.0 {
            for (ri, ci) in r.iter_mut().zip(col) {
                *ri -= xj * ci;
            }
        }
    }
    r
}

/// Solves min ‖A x − b‖₂ subject to x ≥ 0, A given by columns, iterating
/// until no inactive gradient component Aᵀ(b − Ax) exceeds `kkt_tol`.
///
/// Fails with `SolverStall` after 100 × (number of columns) active-set steps.
pub fn nnls(columns: &[Vec<f64>], b: &[f64], kkt_tol: f64) -> Result<NnlsSolution> {
    let n = columns.len();
    let max_iter = 100 * n.max(1);
    let mut x = vec![0.0; n];
    let mut passive = vec![false; n];
    let mut blocked = vec![false; n];
    let mut iterations = 0;
    let mut r = b.to_vec();
    loop {
        let entering = (0..n)
            .filter(|&j| !passive[j] && !blocked[j])
            .map(|j| (j, dot(&columns[j], &r)))
            .filter(|&(_, w)| w > kkt_tol)
            .max_by(|a, b| a.1.total_cmp(&b.1));
        let Some((j, _)) = entering else { break };
        passive[j] = true;
        let mut first = true;
        let mut skipped = false;
        loop {
            iterations += 1;
            if iterations > max_iter {
                return Err(Error::SolverStall(iterations));
            }
            let idx: Vec<usize> = (0..n).filter(|&i| passive[i]).collect();
            let cols: Vec<&[f64]> = idx.iter().map(|&i| columns[i].as_slice()).collect();
            let z = least_squares(&cols, b);
            if z.iter().all(|&v| v > 0.0) {
                for (&i, &v) in idx.iter().zip(&z) {
                    x[i] = v;
                }
                break;
            }
            let pos_j = idx.iter().position(|&i| i == j);
            if first && pos_j.is_some_and(|p| z[p] <= 0.0) {
                // the entering column does not help numerically; keep x and skip it
                passive[j] = false;
                blocked[j] = true;
                skipped = true;
                break;
            }
            first = false;
            let mut alpha = f64::INFINITY;
            let mut limiting = None;
            for (&i, &v) in idx.iter().zip(&z) {
                if v <= 0.0 {
                    let a = x[i] / (x[i] - v);
                    if a < alpha {
                        alpha = a;
                        limiting = Some(i);
                    }
                }
            }
            for (&i, &v) in idx.iter().zip(&z) {
                x[i] += alpha * (v - x[i]);
            }
            if let Some(i) = limiting {
                x[i] = 0.0;
            }
            for &i in &idx {
                if x[i] <= 0.0 {
                    x[i] = 0.0;
                    passive[i] = false;
                }
            }
        }
        if !skipped {
            blocked.iter_mut().for_each(|v| *v = false);
        }
        r = residual(columns, &x, b);
    }
    let r = residual(columns, &x, b);
    Ok(NnlsSolution { residual_norm: dot(&r, &r).sqrt(), x, iterations })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn least_squares_exact_and_overdetermined() {
        let a = [vec![1.0, 0.0, 1.0], vec![0.0, 1.0, 1.0]];
        let cols: Vec<&[f64]> = a.iter().map(|c| c.as_slice()).collect();
        let z = least_squares(&cols, &[1.0, 2.0, 3.0]);
        assert!((z[0] - 1.0).abs() < 1e-14 && (z[1] - 2.0).abs() < 1e-14);
        // normal equations oracle for an inconsistent system
        let z = least_squares(&cols, &[1.0, 0.0, 0.0]);
        assert!((z[0] - 2.0 / 3.0).abs() < 1e-14 && (z[1] + 1.0 / 3.0).abs() < 1e-14);
    }

    #[test]
    fn dependent_columns_get_zero() {
        let a = [vec![1.0, 1.0], vec![2.0, 2.0]];
        let cols: Vec<&[f64]> = a.iter().map(|c| c.as_slice()).collect();
        let z = least_squares(&cols, &[3.0, 3.0]);
        assert!((z[0] - 3.0).abs() < 1e-14 && z[1] == 0.0);
    }

    #[test]
    fn nnls_clamps_negative_coordinate() {
        // unconstrained optimum is (2/3, -1/3); with x ≥ 0 it is (1/2, 0)
        let a = vec![vec![1.0, 0.0, 1.0], vec![0.0, 1.0, 1.0]];
        let s = nnls(&a, &[1.0, 0.0, 0.0], 1e-12).unwrap();
        assert!((s.x[0] - 0.5).abs() < 1e-14 && s.x[1] == 0.0);
        assert!((s.residual_norm - 0.5f64.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn nnls_satisfies_kkt_on_random_problems() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for _ in 0..30 {
            let (m, n) = (rng.gen_range(3..12), rng.gen_range(2..25));
            let a: Vec<Vec<f64>> = (0..n).map(|_| (0..m).map(|_| rng.gen_range(-1.0..1.0)).collect()).collect();
            let b: Vec<f64> = (0..m).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let s = nnls(&a, &b, 1e-12).unwrap();
            let r = residual(&a, &s.x, &b);
            for (j, col) in a.iter().enumerate() {
                let w = dot(col, &r);
                assert!(s.x[j] >= 0.0);
                assert!(w < 1e-10, "gradient {w}");
                if s.x[j] > 0.0 {
                    assert!(w.abs() < 1e-10);
                }
            }
        }
    }
}
