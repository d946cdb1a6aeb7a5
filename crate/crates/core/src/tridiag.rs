//! Symmetric tridiagonal eigenproblem by implicit QL with Wilkinson shifts.
//!
//! Only the first row of the eigenvector matrix is accumulated, which is all
//! the Golub-Welsch weights need.

use crate::error::{Error, Result};

/// Eigenvalues and first eigenvector components of a symmetric tridiagonal matrix.
#[derive(Debug, Clone)]
pub struct TridiagonalEigen {
    pub values: Vec<f64>,
    /// `first[i]` is the first component of the unit eigenvector for `values[i]`.
    pub first: Vec<f64>,
}

/// Diagonalise the matrix with diagonal `diag` and off-diagonal `off`
/// (`off[i]` couples rows `i` and `i + 1`; `off.len() == diag.len() - 1`).
///
/// The iteration budget is `30 · n` QL sweeps in total.
pub fn symmetric_tridiagonal_eigen(diag: &[f64], off: &[f64]) -> Result<TridiagonalEigen> {
    let n = diag.len();
    if n == 0 {
        return Err(Error::pre("empty matrix"));
    }
    if off.len() + 1 != n {
        return Err(Error::pre(format!(
            "off-diagonal has length {}, expected {}",
            off.len(),
            n - 1
        )));
    }
    let mut d = diag.to_vec();
    let mut e = off.to_vec();
    e.push(0.0);
    let mut z = vec![0.0; n];
    z[0] = 1.0;

    let cap = 30 * n;
    let mut sweeps = 0usize;

    for l in 0..n {
        loop {
            // find a negligible off-diagonal element at or below row l
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            sweeps += 1;
            if sweeps > cap {
                return Err(Error::EigenNonConvergence { n, cap });
            }

            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut deflated = false;
            for i in (l..m).rev() {
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;

                let zf = z[i + 1];
                z[i + 1] = s * z[i] + c * zf;
                z[i] = c * z[i] - s * zf;
            }
            if deflated {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }

    Ok(TridiagonalEigen { values: d, first: z })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn one_by_one() {
        let eig = symmetric_tridiagonal_eigen(&[3.5], &[]).unwrap();
        assert_eq!(eig.values, vec![3.5]);
        assert_eq!(eig.first, vec![1.0]);
    }

    #[test]
    fn two_by_two() {
        // [[2, 1], [1, 2]] has eigenvalues 1, 3 with first components ±1/√2
        let eig = symmetric_tridiagonal_eigen(&[2.0, 2.0], &[1.0]).unwrap();
        let mut v = eig.values.clone();
        v.sort_by(f64::total_cmp);
        assert_abs_diff_eq!(v[0], 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(v[1], 3.0, epsilon = 1e-14);
        for z in eig.first {
            assert_abs_diff_eq!(z * z, 0.5, epsilon = 1e-14);
        }
    }

    #[test]
    fn discrete_laplacian() {
        // tridiag(-1, 2, -1) of size n: 2 - 2cos(kπ/(n+1))
        let n = 40;
        let eig = symmetric_tridiagonal_eigen(&vec![2.0; n], &vec![-1.0; n - 1]).unwrap();
        let mut v = eig.values.clone();
        v.sort_by(f64::total_cmp);
        for (k, got) in v.iter().enumerate() {
            let want = 2.0 - 2.0 * ((k + 1) as f64 * std::f64::consts::PI / (n + 1) as f64).cos();
            assert_abs_diff_eq!(*got, want, epsilon = 1e-13);
        }
        let norm: f64 = eig.first.iter().map(|z| z * z).sum();
        assert_abs_diff_eq!(norm, 1.0, epsilon = 1e-13);
    }

    #[test]
    fn decoupled_blocks() {
        let eig = symmetric_tridiagonal_eigen(&[1.0, 5.0, -2.0], &[0.0, 0.0]).unwrap();
        assert_eq!(eig.values, vec![1.0, 5.0, -2.0]);
        assert_eq!(eig.first, vec![1.0, 0.0, 0.0]);
    }

    #[test]
    fn shape_mismatch() {
        assert!(symmetric_tridiagonal_eigen(&[1.0, 2.0], &[]).is_err());
        assert!(symmetric_tridiagonal_eigen(&[], &[]).is_err());
    }
}
