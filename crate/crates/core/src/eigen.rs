//! Dense symmetric and tridiagonal eigensolvers (float mode only).
//!
//! Householder reduction to tridiagonal form followed by implicit-shift QL
//! with eigenvector accumulation, the classical EISPACK tred2/tql2 pair.
//! Desk-scale matrices only; no attempt to exploit Hankel displacement
//! structure.
//!
//! Index-style loops mirror the classical formulation.
#![allow(clippy::needless_range_loop)]

use crate::error::{Error, Result};

/// Eigenvalues in ascending order with matching orthonormal eigenvectors
/// (`vectors[k]` belongs to `values[k]`).
#[derive(Debug, Clone)]
pub struct SymmetricEigen {
    pub values: Vec<f64>,
    pub vectors: Vec<Vec<f64>>,
}

/// Full eigendecomposition of a dense symmetric matrix. `sweep_cap` bounds
/// the total number of QL sweeps.
pub fn symmetric_eigen(matrix: &[Vec<f64>], sweep_cap: usize) -> Result<SymmetricEigen> {
    let n = matrix.len();
    debug_assert!(matrix.iter().all(|row| row.len() == n));
    if n == 0 {
        return Ok(SymmetricEigen {
            values: vec![],
            vectors: vec![],
        });
    }
    let mut z: Vec<Vec<f64>> = matrix.to_vec();
    let (mut d, mut e) = householder_tridiagonalize(&mut z);
    ql_implicit_shift(&mut d, &mut e, &mut z, sweep_cap)?;
    Ok(sorted_eigen(d, z))
}

/// Eigendecomposition of a symmetric tridiagonal matrix given by its
/// diagonal and subdiagonal.
pub fn tridiagonal_eigen(
    diag: &[f64],
    offdiag: &[f64],
    sweep_cap: usize,
) -> Result<SymmetricEigen> {
    let n = diag.len();
    debug_assert_eq!(offdiag.len(), n.saturating_sub(1));
    if n == 0 {
        return Ok(SymmetricEigen {
            values: vec![],
            vectors: vec![],
        });
    }
    let mut d = diag.to_vec();
    // ql_implicit_shift expects the subdiagonal in e[1..]
    let mut e = vec![0.0; n];
    e[1..].copy_from_slice(offdiag);
    let mut z: Vec<Vec<f64>> = (0..n)
        .map(|i| {
            let mut row = vec![0.0; n];
            row[i] = 1.0;
            row
        })
        .collect();
    ql_implicit_shift(&mut d, &mut e, &mut z, sweep_cap)?;
    Ok(sorted_eigen(d, z))
}

fn sorted_eigen(d: Vec<f64>, z: Vec<Vec<f64>>) -> SymmetricEigen {
    let n = d.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| d[a].partial_cmp(&d[b]).expect("finite eigenvalues"));
    let values = order.iter().map(|&j| d[j]).collect();
    let vectors = order
        .iter()
        .map(|&j| (0..n).map(|k| z[k][j]).collect())
        .collect();
    SymmetricEigen { values, vectors }
}

/// Householder reduction; on return `z` holds the accumulated orthogonal
/// transform, `d` the diagonal and `e[1..]` the subdiagonal.
fn householder_tridiagonalize(z: &mut [Vec<f64>]) -> (Vec<f64>, Vec<f64>) {
    let n = z.len();
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n];
    for i in (1..n).rev() {
        let l = i - 1;
        let mut h = 0.0;
        if l > 0 {
            let scale: f64 = (0..i).map(|k| z[i][k].abs()).sum();
            if scale == 0.0 {
                e[i] = z[i][l];
            } else {
                for k in 0..i {
                    z[i][k] /= scale;
                    h += z[i][k] * z[i][k];
                }
                let f = z[i][l];
                let g = if f >= 0.0 { -h.sqrt() } else { h.sqrt() };
                e[i] = scale * g;
                h -= f * g;
                z[i][l] = f - g;
                let mut f_acc = 0.0;
                for j in 0..i {
                    z[j][i] = z[i][j] / h;
                    let mut g_acc = 0.0;
                    for k in 0..=j {
                        g_acc += z[j][k] * z[i][k];
                    }
                    for k in j + 1..i {
                        g_acc += z[k][j] * z[i][k];
                    }
                    e[j] = g_acc / h;
                    f_acc += e[j] * z[i][j];
                }
                let hh = f_acc / (h + h);
                for j in 0..i {
                    let f = z[i][j];
                    e[j] -= hh * f;
                    let g = e[j];
                    for k in 0..=j {
                        z[j][k] -= f * e[k] + g * z[i][k];
                    }
                }
            }
        } else {
            e[i] = z[i][l];
        }
        d[i] = h;
    }
    d[0] = 0.0;
    e[0] = 0.0;
    for i in 0..n {
        if d[i] != 0.0 {
            for j in 0..i {
                let mut g = 0.0;
                for k in 0..i {
                    g += z[i][k] * z[k][j];
                }
                for k in 0..i {
                    z[k][j] -= g * z[k][i];
                }
            }
        }
        d[i] = z[i][i];
        z[i][i] = 1.0;
        for j in 0..i {
            z[j][i] = 0.0;
            z[i][j] = 0.0;
        }
    }
    (d, e)
}

/// Implicit-shift QL on a tridiagonal matrix, rotating the columns of `z`
/// along. `e[0]` is scratch; the subdiagonal lives in `e[1..]`.
fn ql_implicit_shift(
    d: &mut [f64],
    e: &mut [f64],
    z: &mut [Vec<f64>],
    sweep_cap: usize,
) -> Result<()> {
    let n = d.len();
    if n <= 1 {
        return Ok(());
    }
    for i in 1..n {
        e[i - 1] = e[i];
    }
    e[n - 1] = 0.0;
    let eps = f64::EPSILON;
    let mut sweeps_used = 0usize;

    for l in 0..n {
        loop {
            // split point: first negligible subdiagonal at or after l
            let mut m = l;
            while m < n - 1 {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= eps * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            sweeps_used += 1;
            if sweeps_used > sweep_cap {
                return Err(Error::EigenFailure(sweep_cap));
            }
            // Wilkinson-style shift from the leading 2x2
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let mut s = 1.0;
            let mut c = 1.0;
            let mut p = 0.0;
            let mut underflow = false;
            for i in (l..m).rev() {
                let mut f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    // rotation annihilated early; skip the shift update
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                for zk in z.iter_mut() {
                    f = zk[i + 1];
                    zk[i + 1] = s * zk[i] + c * f;
                    zk[i] = c * zk[i] - s * f;
                }
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn residual(matrix: &[Vec<f64>], eig: &SymmetricEigen) -> f64 {
        let n = matrix.len();
        let mut worst: f64 = 0.0;
        for (lambda, v) in eig.values.iter().zip(&eig.vectors) {
            for i in 0..n {
                let av: f64 = (0..n).map(|j| matrix[i][j] * v[j]).sum();
                worst = worst.max((av - lambda * v[i]).abs());
            }
        }
        worst
    }

    #[test]
    fn two_by_two_exchange_matrix() {
        let a = vec![vec![0.0, 1.0], vec![1.0, 0.0]];
        let eig = symmetric_eigen(&a, 400).unwrap();
        assert!((eig.values[0] + 1.0).abs() < 1e-14);
        assert!((eig.values[1] - 1.0).abs() < 1e-14);
        assert!(residual(&a, &eig) < 1e-14);
    }

    #[test]
    fn identity_and_zero() {
        let a = vec![vec![1.0, 0.0], vec![0.0, 1.0]];
        let eig = symmetric_eigen(&a, 400).unwrap();
        assert_eq!(eig.values, vec![1.0, 1.0]);

        let a = vec![vec![0.0; 3]; 3];
        let eig = symmetric_eigen(&a, 600).unwrap();
        assert_eq!(eig.values, vec![0.0, 0.0, 0.0]);
    }

    #[test]
    fn random_symmetric_matrices_decompose() {
        let mut rng = StdRng::seed_from_u64(42);
        for n in [1usize, 2, 3, 5, 8, 12] {
            let mut a = vec![vec![0.0; n]; n];
            for i in 0..n {
                for j in 0..=i {
                    let v = rng.gen_range(-1.0..1.0);
                    a[i][j] = v;
                    a[j][i] = v;
                }
            }
            let eig = symmetric_eigen(&a, 200 * n).unwrap();
            let trace: f64 = (0..n).map(|i| a[i][i]).sum();
            let sum: f64 = eig.values.iter().sum();
            assert!((trace - sum).abs() < 1e-10 * (1.0 + trace.abs()));
            assert!(residual(&a, &eig) < 1e-10);
            // orthonormality
            for p in 0..n {
                for q in 0..n {
                    let dot: f64 = (0..n).map(|k| eig.vectors[p][k] * eig.vectors[q][k]).sum();
                    let expected = if p == q { 1.0 } else { 0.0 };
                    assert!((dot - expected).abs() < 1e-10);
                }
            }
            // ascending order
            assert!(eig.values.windows(2).all(|w| w[0] <= w[1]));
        }
    }

    #[test]
    fn tridiagonal_exchange_block() {
        let eig = tridiagonal_eigen(&[0.0, 0.0], &[1.0], 400).unwrap();
        assert!((eig.values[0] + 1.0).abs() < 1e-14);
        assert!((eig.values[1] - 1.0).abs() < 1e-14);
        // first components both 1/sqrt(2) up to sign
        for v in &eig.vectors {
            assert!((v[0].abs() - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-14);
        }
    }

    #[test]
    fn tridiagonal_singleton() {
        let eig = tridiagonal_eigen(&[3.25], &[], 200).unwrap();
        assert_eq!(eig.values, vec![3.25]);
        assert_eq!(eig.vectors, vec![vec![1.0]]);
    }

    #[test]
    fn hilbert_four_is_positive() {
        let n = 4;
        let a: Vec<Vec<f64>> = (0..n)
            .map(|i| (0..n).map(|j| 1.0 / (i + j + 1) as f64).collect())
            .collect();
        let eig = symmetric_eigen(&a, 800).unwrap();
        assert!(eig.values[0] > 9.0e-5 && eig.values[0] < 1.0e-4);
        assert!(residual(&a, &eig) < 1e-12);
    }
}
