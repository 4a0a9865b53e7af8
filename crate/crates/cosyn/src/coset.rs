//! The block canonical coset decomposition.
//!
//! A unitary of even dimension 2m splits as
//!
//! ```text
//!       ┌ √(1 − X†X)   −X†        ┐   ┌ V1  0  ┐
//! U  =  │                         │ · │        │
//!       └ X            √(1 − XX†) ┘   └ 0   V2 ┘
//! ```
//!
//! with `X = U21 · √(1 − U21†U21) · U11⁻¹`. The first factor — the coset
//! factor — is unitary with Hermitian-PSD diagonal blocks and is fully
//! determined by its lower-left block; the second factor lives in the
//! block-diagonal subgroup. The coset factor is the exponential of an
//! anti-block generator, recovered here by [`coset_generator`]. The
//! left-form variant puts the subgroup factor on the left instead and is
//! obtained by decomposing `U†`.

use thiserror::Error;

use crate::mat::{
    c64, lu_inverse_gated, normal_exp, psd_sqrt, sigma_min, svd, unitary_log, Mat, MatError,
};

/// Smallest admissible singular value of the top-left block. Below this the
/// split is refused and the caller is expected to retry behind a pivot
/// rotation (the synthesizer does).
pub const SINGULAR_BLOCK_TOL: f64 = 1e-8;
/// Unitarity admission tolerance for decomposition inputs.
pub const UNITARY_TOL: f64 = 1e-8;
/// Factors must reproduce the input this well or the split is treated as
/// numerically singular.
const RECONSTRUCTION_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Error)]
pub enum CosetError {
    #[error("input must be unitary (defect {defect:.3e})")]
    NotUnitary { defect: f64 },
    #[error("input must have even dimension, got {0}")]
    OddDimension(usize),
    #[error(
        "top-left block is numerically singular (smallest singular value {sigma_min:.3e}); \
         retry behind a pivot rotation"
    )]
    SingularBlock { sigma_min: f64 },
    #[error("singular value {0} exceeds 1 beyond tolerance; no generator exists")]
    GeneratorRange(f64),
    #[error(transparent)]
    Mat(#[from] MatError),
}

pub type CosetResult<T> = Result<T, CosetError>;

/// The factors of one block coset decomposition.
///
/// For the right form, `coset · blockdiag(v1, v2)` reproduces the input;
/// for the left form (from [`coset_left`]) the product order is
/// `blockdiag(v1, v2) · coset`.
#[derive(Debug, Clone)]
pub struct CosetFactors {
    /// 2m×2m unitary with Hermitian-PSD diagonal blocks.
    pub coset: Mat,
    /// m×m unitary, upper block of the subgroup factor.
    pub v1: Mat,
    /// m×m unitary, lower block of the subgroup factor.
    pub v2: Mat,
    /// m×m lower-left block of the coset factor; singular values ≤ 1.
    pub x: Mat,
}

impl CosetFactors {
    /// blockdiag(v1, v2).
    pub fn subgroup(&self) -> Mat {
        Mat::block_diag(&self.v1, &self.v2)
    }

    /// Anti-block generator block recovered from `x`; see
    /// [`coset_generator`].
    pub fn generator(&self) -> CosetResult<Mat> {
        coset_generator(&self.x)
    }
}

/// The two halves of the block-diagonal subgroup split.
#[derive(Debug, Clone)]
pub struct SubgroupSplit {
    /// m×m unitary: the isolated local factor, applied as blockdiag(s1, s1).
    pub s1: Mat,
    /// m×m unitary: the residual coset half, applied as blockdiag(s2, s2†).
    pub s2: Mat,
}

fn split_blocks(u: &Mat) -> (Mat, Mat, Mat, Mat) {
    let m = u.dim() / 2;
    (
        u.block(0, 0, m, m),
        u.block(0, m, m, m),
        u.block(m, 0, m, m),
        u.block(m, m, m, m),
    )
}

/// Right-form block coset decomposition: `u = coset · blockdiag(v1, v2)`.
///
/// Refuses inputs whose top-left block has a singular value below
/// [`SINGULAR_BLOCK_TOL`], and also inputs close enough to that boundary
/// that the computed factors lose the 1e-10 reconstruction contract — the
/// conditioning of the X formula degrades as 1/σ_min², so a block can pass
/// a fixed gate while its inverse is numerically worthless. Both cases
/// report [`CosetError::SingularBlock`]; the retry strategy (multiply by a
/// native rotation and decompose again) lives in the synthesis layer
/// because it changes the emitted gate sequence.
pub fn coset_right(u: &Mat) -> CosetResult<CosetFactors> {
    if !u.dim().is_multiple_of(2) {
        return Err(CosetError::OddDimension(u.dim()));
    }
    u.check_unitary(UNITARY_TOL)
        .map_err(|_| CosetError::NotUnitary {
            defect: u.unitarity_defect(),
        })?;
    let (u11, u12, u21, u22) = split_blocks(u);
    let smin = sigma_min(&u11)?;
    if smin < SINGULAR_BLOCK_TOL {
        return Err(CosetError::SingularBlock { sigma_min: smin });
    }

    let m = u11.dim();
    // X = U21 · √(1 − U21†U21) · U11⁻¹
    let root = psd_sqrt(&(&Mat::identity(m) - &(&u21.dagger() * &u21)))?;
    let inv = lu_inverse_gated(&u11, SINGULAR_BLOCK_TOL * 0.5)?;
    let x = &(&u21 * &root) * &inv;

    // V1 = √(1 − X†X)·U11 + X†·U21,  V2 = √(1 − XX†)·U22 − X·U12
    let xdx = psd_sqrt(&(&Mat::identity(m) - &(&x.dagger() * &x)))?;
    let xxd = psd_sqrt(&(&Mat::identity(m) - &(&x * &x.dagger())))?;
    let v1 = &(&xdx * &u11) + &(&x.dagger() * &u21);
    let v2 = &(&xxd * &u22) - &(&x * &u12);

    let mut coset = Mat::zeros(2 * m, 2 * m);
    coset.paste(0, 0, &xdx);
    coset.paste(0, m, &x.dagger().scale(c64(-1.0, 0.0)));
    coset.paste(m, 0, &x);
    coset.paste(m, m, &xxd);

    let factors = CosetFactors { coset, v1, v2, x };
    let residual = (&factors.coset * &factors.subgroup()).frob_dist(u);
    if residual > RECONSTRUCTION_TOL {
        return Err(CosetError::SingularBlock { sigma_min: smin });
    }
    Ok(factors)
}

/// Left-form decomposition: `u = blockdiag(v1, v2) · coset`.
///
/// Implemented on the same code path as [`coset_right`] through the
/// identity `u = (u†)†`: the right factors of `u†` are daggered and the
/// lower-left block picks up a sign.
pub fn coset_left(u: &Mat) -> CosetResult<CosetFactors> {
    let f = coset_right(&u.dagger())?;
    Ok(CosetFactors {
        coset: f.coset.dagger(),
        v1: f.v1.dagger(),
        v2: f.v2.dagger(),
        x: f.x.scale(c64(-1.0, 0.0)),
    })
}

/// Recover the anti-block generator block `B` from the lower-left block
/// `x` of a coset factor.
///
/// With the SVD `x = W·sin(Θ)·Z†` and `Θ = arcsin(σ) ∈ [0, π/2]`, the
/// block is `B = W·Θ·Z†`, and `exp [[0, −B†],[B, 0]]` reproduces the coset
/// factor of `x`. Singular values are clamped at 1 (the arcsin branch cut);
/// values beyond `1 + 1e-10` are rejected.
pub fn coset_generator(x: &Mat) -> CosetResult<Mat> {
    let (w, sigmas, z) = svd(x)?;
    let mut thetas = Vec::with_capacity(sigmas.len());
    for &s in &sigmas {
        if s > 1.0 + 1e-10 {
            return Err(CosetError::GeneratorRange(s));
        }
        thetas.push(c64(s.min(1.0).asin(), 0.0));
    }
    let d = Mat::from_diag(&thetas);
    Ok(&(&w * &d) * &z.dagger())
}

/// Embed `B` as the anti-Hermitian block generator [[0, −B†],[B, 0]].
pub fn antiblock(b: &Mat) -> Mat {
    let m = b.dim();
    let mut g = Mat::zeros(2 * m, 2 * m);
    g.paste(0, m, &b.dagger().scale(c64(-1.0, 0.0)));
    g.paste(m, 0, b);
    g
}

/// Split blockdiag(g1, g2) into a coset half and a strictly local factor:
/// `blockdiag(g1, g2) = blockdiag(s2, s2†) · blockdiag(s1, s1)`.
///
/// `s2` is the principal unitary square root of `g1·g2†` (half of the
/// principal logarithm, so an eigenphase of exactly π halves to π/2) and
/// `s1 = s2†·g1`.
pub fn subgroup_split(g1: &Mat, g2: &Mat) -> CosetResult<SubgroupSplit> {
    if g1.dim() != g2.dim() {
        return Err(CosetError::Mat(MatError::Dim(format!(
            "subgroup blocks must match: {} vs {}",
            g1.dim(),
            g2.dim()
        ))));
    }
    for g in [g1, g2] {
        g.check_unitary(UNITARY_TOL)
            .map_err(|_| CosetError::NotUnitary {
                defect: g.unitarity_defect(),
            })?;
    }
    let log = unitary_log(&(g1 * &g2.dagger()))?;
    let s2 = normal_exp(&log.scale(c64(0.5, 0.0)))?;
    let s1 = &s2.dagger() * g1;
    Ok(SubgroupSplit { s1, s2 })
}

/// Off-block-diagonal Frobenius mass of a square even-dimension matrix.
pub fn off_block_mass(u: &Mat) -> f64 {
    debug_assert!(u.dim().is_multiple_of(2));
    let m = u.dim() / 2;
    let mut acc = 0.0;
    for i in 0..m {
        for j in 0..m {
            acc += u[(i, m + j)].norm_sqr() + u[(m + i, j)].norm_sqr();
        }
    }
    acc.sqrt()
}
