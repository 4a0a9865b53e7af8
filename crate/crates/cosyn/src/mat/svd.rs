//! Singular value decomposition by one-sided Jacobi on columns.
//!
//! Column pairs are rotated until mutually orthogonal; singular values are
//! the resulting column norms. This sidesteps the sign-pairing pitfalls of
//! eigendecomposing a†a and keeps small singular values at high relative
//! accuracy, which the coset code relies on for its singularity gates.

use super::{Complex64, Mat, MatError, MatResult};

const REL_TOL: f64 = 1e-14;
const MAX_SWEEPS: usize = 64;
/// Columns with norm below this are completed by orthonormal extension.
const NULL_COL: f64 = 1e-12;

/// Full SVD `a = u · Σ · v†` with square unitary `u` (rows×rows) and
/// `v` (cols×cols); singular values descending and nonnegative, of length
/// `min(rows, cols)`. Σ is the rectangular diagonal of those values.
pub fn svd(a: &Mat) -> MatResult<(Mat, Vec<f64>, Mat)> {
    if a.rows() >= a.cols() {
        svd_tall(a)
    } else {
        let (u, s, v) = svd_tall(&a.dagger())?;
        Ok((v, s, u))
    }
}

/// Smallest singular value of a square matrix.
pub fn sigma_min(a: &Mat) -> MatResult<f64> {
    let (_, s, _) = svd(a)?;
    Ok(s.last().copied().unwrap_or(0.0))
}

fn svd_tall(a: &Mat) -> MatResult<(Mat, Vec<f64>, Mat)> {
    let m = a.rows();
    let n = a.cols();
    let mut b = a.clone();
    let mut v = Mat::identity(n);

    let mut converged = false;
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n.saturating_sub(1) {
            for q in p + 1..n {
                rotated |= orthogonalize_pair(&mut b, &mut v, p, q);
            }
        }
        if !rotated {
            converged = true;
            break;
        }
    }
    if !converged {
        // One-sided Jacobi converges quadratically; hitting the cap means
        // the final sweeps are only polishing round-off. Verify that.
        if max_pair_cos(&b) > 1e-10 {
            return Err(MatError::EigenConvergence {
                detail: format!("column orthogonalization stalled after {MAX_SWEEPS} sweeps"),
            });
        }
    }

    // Column norms are the singular values.
    let mut order: Vec<usize> = (0..n).collect();
    let norms: Vec<f64> = (0..n)
        .map(|j| (0..m).map(|i| b[(i, j)].norm_sqr()).sum::<f64>().sqrt())
        .collect();
    order.sort_by(|&i, &j| norms[j].partial_cmp(&norms[i]).unwrap());

    let s: Vec<f64> = order.iter().map(|&j| norms[j]).collect();
    let mut u = Mat::zeros(m, m);
    let mut vs = Mat::zeros(n, n);
    let mut fixed = 0;
    for (dst, &src) in order.iter().enumerate() {
        vs.set_col(dst, &v.col(src));
        if s[dst] >= NULL_COL {
            let col: Vec<Complex64> = (0..m).map(|i| b[(i, src)] / s[dst]).collect();
            u.set_col(dst, &col);
            fixed += 1;
        }
    }
    complete_orthonormal(&mut u, fixed);
    Ok((u, s, vs))
}

/// Rotate columns p and q of `b` (and accumulate into `v`) so that they
/// become orthogonal. Returns whether a rotation was applied.
fn orthogonalize_pair(b: &mut Mat, v: &mut Mat, p: usize, q: usize) -> bool {
    let m = b.rows();
    let mut app = 0.0;
    let mut aqq = 0.0;
    let mut apq = Complex64::ZERO;
    for i in 0..m {
        let bp = b[(i, p)];
        let bq = b[(i, q)];
        app += bp.norm_sqr();
        aqq += bq.norm_sqr();
        apq += bp.conj() * bq;
    }
    let g = apq.norm();
    if g <= REL_TOL * (app * aqq).sqrt() || app == 0.0 || aqq == 0.0 {
        return false;
    }
    let phase = apq / g;
    // Jacobi rotation of the 2x2 Gram matrix [[app, g·e^{iφ}],[g·e^{−iφ}, aqq]].
    let theta = (app - aqq) / (2.0 * g);
    let t = if theta >= 0.0 {
        1.0 / (theta + (1.0 + theta * theta).sqrt())
    } else {
        -1.0 / (-theta + (1.0 + theta * theta).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;
    let sp = phase * s;

    for i in 0..m {
        let bp = b[(i, p)];
        let bq = b[(i, q)];
        b[(i, p)] = bp * c + bq * sp.conj();
        b[(i, q)] = -bp * sp + bq * c;
    }
    for i in 0..v.rows() {
        let vp = v[(i, p)];
        let vq = v[(i, q)];
        v[(i, p)] = vp * c + vq * sp.conj();
        v[(i, q)] = -vp * sp + vq * c;
    }
    true
}

fn max_pair_cos(b: &Mat) -> f64 {
    let (m, n) = (b.rows(), b.cols());
    let mut worst = 0.0_f64;
    for p in 0..n.saturating_sub(1) {
        for q in p + 1..n {
            let mut app = 0.0;
            let mut aqq = 0.0;
            let mut apq = Complex64::ZERO;
            for i in 0..m {
                app += b[(i, p)].norm_sqr();
                aqq += b[(i, q)].norm_sqr();
                apq += b[(i, p)].conj() * b[(i, q)];
            }
            if app > 0.0 && aqq > 0.0 {
                worst = worst.max(apq.norm() / (app * aqq).sqrt());
            }
        }
    }
    worst
}

/// Fill columns `fixed..` of `u` with an orthonormal completion of the
/// first `fixed` columns, chosen deterministically from the standard basis.
fn complete_orthonormal(u: &mut Mat, fixed: usize) {
    let m = u.rows();
    let mut have = fixed;
    let mut candidate = 0;
    while have < m && candidate < m {
        let mut v = vec![Complex64::ZERO; m];
        v[candidate] = Complex64::ONE;
        candidate += 1;
        for _ in 0..2 {
            for k in 0..have {
                let col = u.col(k);
                let proj: Complex64 = col.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
                for (vi, ci) in v.iter_mut().zip(&col) {
                    *vi -= proj * ci;
                }
            }
        }
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm > 0.5 {
            for vi in v.iter_mut() {
                *vi /= norm;
            }
            u.set_col(have, &v);
            have += 1;
        }
    }
    debug_assert_eq!(have, m, "orthonormal completion must fill the basis");
}
