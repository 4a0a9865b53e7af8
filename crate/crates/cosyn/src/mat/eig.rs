//! Hermitian eigendecomposition by cyclic complex Jacobi sweeps, plus the
//! joint diagonalization used for normal matrices.

use super::{c64, Complex64, Mat, MatError, MatResult};

/// Hermiticity admission tolerance (relative to matrix scale).
const HERM_TOL: f64 = 1e-12;
/// Off-diagonal Frobenius mass at which a sweep cycle stops.
const OFF_TARGET: f64 = 1e-14;
const MAX_SWEEPS: usize = 64;
/// Eigenvalues closer than this are treated as one degenerate cluster.
const CLUSTER_TOL: f64 = 1e-9;

/// Eigendecomposition of a Hermitian matrix.
///
/// Returns eigenvalues in ascending order and the matching unitary matrix of
/// column eigenvectors, so `h = Q · diag(λ) · Q†`. Eigenvectors inside a
/// degenerate cluster (eigenvalue gap < 1e-9) are re-orthonormalized; callers
/// must compare reconstructions, never eigenvectors, in the degenerate case.
pub fn herm_eig(h: &Mat) -> MatResult<(Vec<f64>, Mat)> {
    h.check_hermitian(HERM_TOL)?;
    let (mut vals, mut q) = jacobi(&h.hermitize())?;
    sort_ascending(&mut vals, &mut q);
    reorthonormalize_clusters(&vals, &mut q);
    Ok((vals, q))
}

/// Cyclic complex Jacobi on a Hermitian matrix. Returns unsorted
/// eigenvalues (diagonal after convergence) and accumulated rotations.
fn jacobi(h: &Mat) -> MatResult<(Vec<f64>, Mat)> {
    let n = h.dim();
    let mut a = h.clone();
    let mut q = Mat::identity(n);
    if n == 1 {
        return Ok((vec![a[(0, 0)].re], q));
    }
    let scale = h.frob_norm().max(1.0);
    let target = OFF_TARGET * scale;
    // Mass below this per pair cannot lift the total above the target.
    let skip = target / ((n * n) as f64);

    for sweep in 0..MAX_SWEEPS {
        if off_diag_mass(&a) <= target {
            return Ok(((0..n).map(|i| a[(i, i)].re).collect(), q));
        }
        for p in 0..n - 1 {
            for qq in p + 1..n {
                rotate_pair(&mut a, &mut q, p, qq, skip);
            }
        }
        let _ = sweep;
    }
    let off = off_diag_mass(&a);
    if off <= 1e-11 * scale {
        // Converged well enough for every 1e-10 contract downstream.
        return Ok(((0..n).map(|i| a[(i, i)].re).collect(), q));
    }
    Err(MatError::EigenConvergence {
        detail: format!("off-diagonal mass {off:.3e} after {MAX_SWEEPS} sweeps"),
    })
}

fn off_diag_mass(a: &Mat) -> f64 {
    let n = a.dim();
    let mut acc = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                acc += a[(i, j)].norm_sqr();
            }
        }
    }
    acc.sqrt()
}

/// One Jacobi rotation annihilating a[p][q], applied two-sided to `a` and
/// accumulated into the columns of `q`.
fn rotate_pair(a: &mut Mat, q: &mut Mat, p: usize, r: usize, skip: f64) {
    let beta = a[(p, r)];
    let b = beta.norm();
    if b <= skip {
        return;
    }
    let phase = beta / b; // e^{iφ}
    let alpha = a[(p, p)].re;
    let gamma = a[(r, r)].re;

    // Zero the (p,r) entry of [[α, β],[β̄, γ]] with the unitary
    // [[c, −s·e^{iφ}], [s·e^{−iφ}, c]].
    let theta = (alpha - gamma) / (2.0 * b);
    let t = if theta >= 0.0 {
        1.0 / (theta + (1.0 + theta * theta).sqrt())
    } else {
        -1.0 / (-theta + (1.0 + theta * theta).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;

    let n = a.dim();
    let sp = phase * s; // s·e^{iφ}
                        // Column update: A ← A·J, likewise for the eigenvector accumulator.
    for i in 0..n {
        let aip = a[(i, p)];
        let air = a[(i, r)];
        a[(i, p)] = aip * c + air * sp.conj();
        a[(i, r)] = -aip * sp + air * c;

        let qip = q[(i, p)];
        let qir = q[(i, r)];
        q[(i, p)] = qip * c + qir * sp.conj();
        q[(i, r)] = -qip * sp + qir * c;
    }
    // Row update: A ← J†·A.
    for j in 0..n {
        let apj = a[(p, j)];
        let arj = a[(r, j)];
        a[(p, j)] = apj * c + arj * sp;
        a[(r, j)] = -apj * sp.conj() + arj * c;
    }
    // Clean the pivot pair against round-off drift.
    a[(p, r)] = Complex64::ZERO;
    a[(r, p)] = Complex64::ZERO;
    a[(p, p)] = c64(a[(p, p)].re, 0.0);
    a[(r, r)] = c64(a[(r, r)].re, 0.0);
}

fn sort_ascending(vals: &mut [f64], q: &mut Mat) {
    let n = vals.len();
    for i in 0..n {
        let mut min = i;
        for j in i + 1..n {
            if vals[j] < vals[min] {
                min = j;
            }
        }
        if min != i {
            vals.swap(i, min);
            q.swap_cols(i, min);
        }
    }
}

/// Modified Gram–Schmidt over each degenerate eigenvalue cluster.
fn reorthonormalize_clusters(vals: &[f64], q: &mut Mat) {
    let n = vals.len();
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && (vals[end] - vals[end - 1]).abs() < CLUSTER_TOL {
            end += 1;
        }
        if end - start > 1 {
            mgs_columns(q, start, end);
        }
        start = end;
    }
}

fn mgs_columns(q: &mut Mat, start: usize, end: usize) {
    for j in start..end {
        let mut v = q.col(j);
        // MGS with one re-orthogonalization pass.
        for _ in 0..2 {
            for k in start..j {
                let u = q.col(k);
                let proj: Complex64 = u.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
                for (vi, ui) in v.iter_mut().zip(&u) {
                    *vi -= proj * ui;
                }
            }
        }
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-300 {
            for vi in v.iter_mut() {
                *vi /= norm;
            }
        }
        q.set_col(j, &v);
    }
}

// ---------------------------------------------------------------------------
// Normal matrices: joint diagonalization of the Hermitian and anti-Hermitian
// parts.
// ---------------------------------------------------------------------------

/// Axis angles tried until the projected spectrum separates cleanly.
const AXIS_ANGLES: [f64; 6] = [
    0.0,
    0.618_033_988_749_894_9,
    1.324_717_957_244_746,
    2.236_067_977_499_79,
    0.267_949_192_431_122_7,
    1.839_286_755_214_161,
];

/// Eigendecomposition of a normal matrix: `a = Q · diag(λ) · Q†` with
/// unitary `Q` and complex eigenvalues.
///
/// The Hermitian part of `e^{−iθ}·a` is diagonalized with Jacobi, degenerate
/// projection clusters are refined with the anti-Hermitian part, and the
/// result is accepted only when the per-column residual ‖a·Q − Q·Λ‖_F is at
/// round-off scale. Projection axes θ are retried until that holds, so a
/// collision of distinct eigenvalues under one projection cannot corrupt the
/// output silently.
pub(crate) fn normal_eig(a: &Mat) -> MatResult<(Vec<Complex64>, Mat)> {
    let scale = a.frob_norm().max(1.0);
    let commutator = (&(&a.dagger() * a) - &(a * &a.dagger())).frob_norm();
    if commutator > 1e-10 * scale * scale {
        return Err(MatError::NotNormal {
            deviation: commutator,
        });
    }

    let accept = 1e-11 * scale;
    let mut best: Option<(f64, Vec<Complex64>, Mat)> = None;
    for theta in AXIS_ANGLES {
        let (vals, q) = projected_eig(a, theta)?;
        let resid = eig_residual(a, &vals, &q);
        if resid <= accept {
            return Ok((vals, q));
        }
        if best.as_ref().is_none_or(|(r, _, _)| resid < *r) {
            best = Some((resid, vals, q));
        }
    }
    let (resid, vals, q) = best.expect("at least one axis attempted");
    if resid <= 1e-9 * scale {
        return Ok((vals, q));
    }
    Err(MatError::EigenConvergence {
        detail: format!("normal eigendecomposition residual {resid:.3e}"),
    })
}

fn eig_residual(a: &Mat, vals: &[Complex64], q: &Mat) -> f64 {
    let aq = a * q;
    let mut acc = 0.0;
    for j in 0..q.cols() {
        for i in 0..q.rows() {
            acc += (aq[(i, j)] - vals[j] * q[(i, j)]).norm_sqr();
        }
    }
    acc.sqrt()
}

fn projected_eig(a: &Mat, theta: f64) -> MatResult<(Vec<Complex64>, Mat)> {
    let n = a.dim();
    let rot = Complex64::from_polar(1.0, -theta);
    let b = a.scale(rot);
    let h = b.hermitize();
    let k = Mat::from_fn(n, n, |i, j| {
        let z = (b[(i, j)] - b[(j, i)].conj()) * 0.5;
        // (B − B†)/(2i)
        c64(z.im, -z.re)
    });

    let (hvals, mut q) = jacobi(&h)?;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| hvals[i].partial_cmp(&hvals[j]).unwrap());
    apply_column_order(&mut q, &order);
    let mut hv: Vec<f64> = order.iter().map(|&i| hvals[i]).collect();

    // Refine clusters of near-equal projections with the orthogonal part.
    let merge = 1e-2 * (a.frob_norm() / (n as f64).sqrt()).max(1.0);
    let mut kv = vec![0.0_f64; n];
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && (hv[end] - hv[end - 1]).abs() < merge {
            end += 1;
        }
        if end - start == 1 {
            kv[start] = rayleigh(&k, &q.col(start));
        } else {
            refine_cluster(&k, &h, &mut q, start, end, &mut hv, &mut kv)?;
        }
        start = end;
    }

    let eigs: Vec<Complex64> = (0..n)
        .map(|i| Complex64::from_polar(1.0, theta) * c64(hv[i], kv[i]))
        .collect();
    Ok((eigs, q))
}

fn apply_column_order(q: &mut Mat, order: &[usize]) {
    let cols: Vec<Vec<Complex64>> = order.iter().map(|&i| q.col(i)).collect();
    for (j, col) in cols.iter().enumerate() {
        q.set_col(j, col);
    }
}

fn rayleigh(m: &Mat, v: &[Complex64]) -> f64 {
    let n = v.len();
    let mut acc = Complex64::ZERO;
    for i in 0..n {
        let mut mv = Complex64::ZERO;
        for j in 0..n {
            mv += m[(i, j)] * v[j];
        }
        acc += v[i].conj() * mv;
    }
    acc.re
}

/// Diagonalize the orthogonal part inside one projection cluster, then
/// recompute both projections per refined column.
fn refine_cluster(
    k: &Mat,
    h: &Mat,
    q: &mut Mat,
    start: usize,
    end: usize,
    hv: &mut [f64],
    kv: &mut [f64],
) -> MatResult<()> {
    let m = end - start;
    let n = q.rows();
    let cols: Vec<Vec<Complex64>> = (start..end).map(|j| q.col(j)).collect();
    // Projected block of K in the cluster basis.
    let mut kc = Mat::zeros(m, m);
    for a_idx in 0..m {
        let mut kcol = vec![Complex64::ZERO; n];
        for i in 0..n {
            for j in 0..n {
                kcol[i] += k[(i, j)] * cols[a_idx][j];
            }
        }
        for b_idx in 0..m {
            let mut acc = Complex64::ZERO;
            for i in 0..n {
                acc += cols[b_idx][i].conj() * kcol[i];
            }
            kc[(b_idx, a_idx)] = acc;
        }
    }
    let (_, r) = jacobi(&kc.hermitize())?;
    // Rotate the cluster columns by r.
    for a_idx in 0..m {
        let mut newcol = vec![Complex64::ZERO; n];
        for b_idx in 0..m {
            let w = r[(b_idx, a_idx)];
            for i in 0..n {
                newcol[i] += w * cols[b_idx][i];
            }
        }
        q.set_col(start + a_idx, &newcol);
    }
    for j in start..end {
        let col = q.col(j);
        hv[j] = rayleigh(h, &col);
        kv[j] = rayleigh(k, &col);
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sigma1() -> Mat {
        Mat::new(
            2,
            2,
            vec![c64(0., 0.), c64(1., 0.), c64(1., 0.), c64(0., 0.)],
        )
        .unwrap()
    }

    fn sigma3() -> Mat {
        Mat::from_diag(&[c64(1., 0.), c64(-1., 0.)])
    }

    fn reconstruct(vals: &[f64], q: &Mat) -> Mat {
        let d = Mat::from_diag(&vals.iter().map(|&v| c64(v, 0.0)).collect::<Vec<_>>());
        &(q * &d) * &q.dagger()
    }

    #[test]
    fn eig_sigma3_is_standard_basis() {
        let (vals, q) = herm_eig(&sigma3()).unwrap();
        assert!((vals[0] + 1.0).abs() < 1e-14 && (vals[1] - 1.0).abs() < 1e-14);
        assert!(reconstruct(&vals, &q).frob_dist(&sigma3()) < 1e-12);
    }

    #[test]
    fn eig_identity_degenerate_reconstructs() {
        let (vals, q) = herm_eig(&Mat::identity(2)).unwrap();
        assert!((vals[0] - 1.0).abs() < 1e-14 && (vals[1] - 1.0).abs() < 1e-14);
        assert!(reconstruct(&vals, &q).frob_dist(&Mat::identity(2)) < 1e-12);
    }

    #[test]
    fn eig_sigma1_reconstructs() {
        let (vals, q) = herm_eig(&sigma1()).unwrap();
        assert!((vals[0] + 1.0).abs() < 1e-12 && (vals[1] - 1.0).abs() < 1e-12);
        assert!(reconstruct(&vals, &q).frob_dist(&sigma1()) < 1e-12);
        assert!(q.unitarity_defect() < 1e-12);
    }

    #[test]
    fn eig_rejects_non_hermitian() {
        let a = Mat::new(
            2,
            2,
            vec![c64(0., 0.), c64(1., 0.), c64(0., 0.), c64(0., 0.)],
        )
        .unwrap();
        assert!(matches!(herm_eig(&a), Err(MatError::NotHermitian { .. })));
    }

    #[test]
    fn eig_random_hermitian_dim16() {
        // Deterministic pseudo-random Hermitian input.
        let n = 16;
        let mut seed = 0x9e3779b97f4a7c15_u64;
        let mut next = move || {
            seed = seed
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            ((seed >> 11) as f64) / ((1_u64 << 53) as f64) - 0.5
        };
        let raw = Mat::from_fn(n, n, |_, _| c64(next(), next()));
        let h = raw.hermitize();
        let (vals, q) = herm_eig(&h).unwrap();
        assert!(reconstruct(&vals, &q).frob_dist(&h) < 1e-10);
        assert!(q.unitarity_defect() < 1e-10);
        for w in vals.windows(2) {
            assert!(w[0] <= w[1]);
        }
    }

    #[test]
    fn normal_eig_handles_mirror_phase_pairs() {
        // diag(e^{iφ}, e^{−iφ}) has exactly degenerate Hermitian parts.
        let phi = 0.83;
        let u = Mat::from_diag(&[
            Complex64::from_polar(1.0, phi),
            Complex64::from_polar(1.0, -phi),
        ]);
        // Rotate into a non-trivial basis first.
        let c = (0.6_f64).cos();
        let s = (0.6_f64).sin();
        let w = Mat::new(2, 2, vec![c64(c, 0.), c64(-s, 0.), c64(s, 0.), c64(c, 0.)]).unwrap();
        let a = &(&w * &u) * &w.dagger();
        let (vals, q) = normal_eig(&a).unwrap();
        let d = Mat::from_diag(&vals);
        assert!((&(&q * &d) * &q.dagger()).frob_dist(&a) < 1e-12);
    }
}
