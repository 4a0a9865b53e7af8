//! Matrix functions on the eigendecomposition route: PSD square root,
//! principal logarithm of unitaries, exponential of normal matrices, and
//! LU inversion with a singularity gate.

use super::{c64, herm_eig, normal_eig, sigma_min, Complex64, Mat, MatError, MatResult};

/// Eigenvalues this far below zero are round-off and clamped; anything
/// lower is a genuine definiteness violation.
const PSD_CLAMP: f64 = 1e-10;
/// Unitarity admission for the principal logarithm.
const LOG_UNITARY_TOL: f64 = 1e-10;
/// Default singularity gate for inversion.
const SINGULAR_TOL: f64 = 1e-10;

/// Square root of a Hermitian positive-semidefinite matrix.
///
/// Eigenvalues in `[-1e-10, 0)` are clamped to zero before the root —
/// unitarity round-off routinely makes `1 − X†X` marginally indefinite —
/// and anything below that margin is rejected.
pub fn psd_sqrt(a: &Mat) -> MatResult<Mat> {
    let (vals, q) = herm_eig(a)?;
    let mut roots = Vec::with_capacity(vals.len());
    for &v in &vals {
        if v < -PSD_CLAMP {
            return Err(MatError::NotPsd { min_eigenvalue: v });
        }
        roots.push(c64(v.max(0.0).sqrt(), 0.0));
    }
    let d = Mat::from_diag(&roots);
    Ok((&(&q * &d) * &q.dagger()).hermitize())
}

/// Principal logarithm of a unitary matrix.
///
/// The result is anti-Hermitian with eigenphases on the branch `(−π, π]`;
/// an eigenvalue of exactly −1 maps to phase +π. Everything downstream
/// (square roots of unitaries, the subgroup split, lifted factors)
/// inherits this branch.
pub fn unitary_log(u: &Mat) -> MatResult<Mat> {
    u.check_unitary(LOG_UNITARY_TOL)?;
    let (vals, q) = normal_eig(u)?;
    let phases: Vec<Complex64> = vals
        .iter()
        .map(|z| {
            let phase = if z.im == 0.0 {
                if z.re < 0.0 {
                    std::f64::consts::PI
                } else {
                    0.0
                }
            } else {
                z.im.atan2(z.re)
            };
            c64(0.0, phase)
        })
        .collect();
    let d = Mat::from_diag(&phases);
    let l = &(&q * &d) * &q.dagger();
    // Anti-Hermitize to kill assembly round-off.
    let n = l.dim();
    Ok(Mat::from_fn(n, n, |i, j| {
        (l[(i, j)] - l[(j, i)].conj()) * 0.5
    }))
}

/// Exponential of a normal matrix via eigendecomposition.
///
/// Rejects non-normal input; the synthesis pipeline only ever exponentiates
/// anti-Hermitian generators, for which the result is unitary.
pub fn normal_exp(g: &Mat) -> MatResult<Mat> {
    let (vals, q) = normal_eig(g)?;
    let exps: Vec<Complex64> = vals.iter().map(|z| z.exp()).collect();
    let d = Mat::from_diag(&exps);
    Ok(&(&q * &d) * &q.dagger())
}

/// Inverse by LU with partial pivoting, gated on the smallest singular
/// value (default gate 1e-10).
pub fn lu_inverse(a: &Mat) -> MatResult<Mat> {
    lu_inverse_gated(a, SINGULAR_TOL)
}

pub(crate) fn lu_inverse_gated(a: &Mat, gate: f64) -> MatResult<Mat> {
    if !a.is_square() {
        return Err(MatError::Dim(format!(
            "inverse requires a square matrix, got {}x{}",
            a.rows(),
            a.cols()
        )));
    }
    let smin = sigma_min(a)?;
    if smin < gate {
        return Err(MatError::Singular { sigma_min: smin });
    }

    let n = a.dim();
    let mut lu = a.clone();
    let mut perm: Vec<usize> = (0..n).collect();
    for k in 0..n {
        // Partial pivot on column k.
        let mut pivot = k;
        for i in k + 1..n {
            if lu[(i, k)].norm() > lu[(pivot, k)].norm() {
                pivot = i;
            }
        }
        if pivot != k {
            for j in 0..n {
                let tmp = lu[(k, j)];
                lu[(k, j)] = lu[(pivot, j)];
                lu[(pivot, j)] = tmp;
            }
            perm.swap(k, pivot);
        }
        let d = lu[(k, k)];
        for i in k + 1..n {
            let f = lu[(i, k)] / d;
            lu[(i, k)] = f;
            for j in k + 1..n {
                let s = f * lu[(k, j)];
                lu[(i, j)] -= s;
            }
        }
    }

    // Solve A·x = e_col for each basis column.
    let mut inv = Mat::zeros(n, n);
    for col in 0..n {
        let mut y = vec![Complex64::ZERO; n];
        for i in 0..n {
            let mut acc = if perm[i] == col {
                Complex64::ONE
            } else {
                Complex64::ZERO
            };
            for j in 0..i {
                acc -= lu[(i, j)] * y[j];
            }
            y[i] = acc;
        }
        for i in (0..n).rev() {
            let mut acc = y[i];
            for j in i + 1..n {
                acc -= lu[(i, j)] * y[j];
            }
            y[i] = acc / lu[(i, i)];
        }
        for i in 0..n {
            inv[(i, col)] = y[i];
        }
    }
    Ok(inv)
}
