//! Dense complex linear algebra for small matrices (dimension ≤ 64).
//!
//! Everything downstream — Pauli algebra, coset decompositions, synthesis —
//! runs on [`Mat`], a row-major dense matrix of `Complex64`. The numerical
//! kernels are chosen for robustness at small dimension rather than speed:
//! cyclic complex Jacobi sweeps for Hermitian eigenproblems, one-sided
//! Jacobi on columns for the SVD, and eigendecomposition-based matrix
//! functions restricted to normal inputs (every generator in this pipeline
//! is anti-Hermitian, so the general-purpose routes would be dead weight).

mod eig;
mod funcs;
mod json;
mod svd;

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

pub use num_complex::Complex64;
use thiserror::Error;

pub use eig::herm_eig;
pub use funcs::{lu_inverse, normal_exp, psd_sqrt, unitary_log};
pub use svd::{sigma_min, svd};

pub(crate) use eig::normal_eig;
pub(crate) use funcs::lu_inverse_gated;

/// Shorthand constructor for a complex scalar.
#[inline]
pub fn c64(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Errors from matrix construction and the numerical kernels.
#[derive(Debug, Clone, Error)]
pub enum MatError {
    #[error("dimension mismatch: {0}")]
    Dim(String),
    #[error("matrix entries must be finite")]
    NonFinite,
    #[error("matrix is singular or near-singular (smallest singular value {sigma_min:.3e})")]
    Singular { sigma_min: f64 },
    #[error("matrix is not Hermitian (deviation {deviation:.3e})")]
    NotHermitian { deviation: f64 },
    #[error("matrix is not unitary (deviation {deviation:.3e})")]
    NotUnitary { deviation: f64 },
    #[error("matrix is not positive semidefinite (eigenvalue {min_eigenvalue:.3e})")]
    NotPsd { min_eigenvalue: f64 },
    #[error("matrix is not normal (commutator norm {deviation:.3e})")]
    NotNormal { deviation: f64 },
    #[error("singular value {value} exceeds the admissible range")]
    SingularValueRange { value: f64 },
    #[error("eigensolver failed to converge ({detail})")]
    EigenConvergence { detail: String },
    #[error("invalid matrix data: {0}")]
    Parse(String),
}

pub type MatResult<T> = Result<T, MatError>;

/// Dense row-major complex matrix.
///
/// Invariants: `data.len() == rows * cols` and every entry is finite. The
/// checked constructors ([`Mat::new`], [`Mat::from_json_str`]) enforce
/// finiteness; the internal builders produce finite entries by construction.
#[derive(Clone, PartialEq)]
pub struct Mat {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl Mat {
    /// Checked constructor from row-major entries.
    pub fn new(rows: usize, cols: usize, data: Vec<Complex64>) -> MatResult<Self> {
        if rows == 0 || cols == 0 || data.len() != rows * cols {
            return Err(MatError::Dim(format!(
                "{}x{} matrix needs {} entries, got {}",
                rows,
                cols,
                rows * cols,
                data.len()
            )));
        }
        if !data.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
            return Err(MatError::NonFinite);
        }
        Ok(Self { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Complex64::ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex64::ONE;
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    /// Square matrix with `d` on the diagonal.
    pub fn from_diag(d: &[Complex64]) -> Self {
        let mut m = Self::zeros(d.len(), d.len());
        for (i, z) in d.iter().enumerate() {
            m[(i, i)] = *z;
        }
        m
    }

    /// Convenience builder from nested real rows (tests and docs).
    pub fn from_real_rows(rows: &[&[f64]]) -> Self {
        let r = rows.len();
        let c = rows[0].len();
        Self::from_fn(r, c, |i, j| c64(rows[i][j], 0.0))
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Side length of a square matrix.
    pub fn dim(&self) -> usize {
        debug_assert!(self.is_square());
        self.rows
    }

    pub fn dagger(&self) -> Mat {
        Mat::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn scale(&self, z: Complex64) -> Mat {
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|w| w * z).collect(),
        }
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    pub fn frob_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Frobenius distance ‖self − other‖_F.
    pub fn frob_dist(&self, other: &Mat) -> f64 {
        assert_eq!(
            (self.rows, self.cols),
            (other.rows, other.cols),
            "frob_dist shape mismatch"
        );
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// ‖self − 1‖_F, for convergence tests.
    pub fn dist_to_identity(&self) -> f64 {
        debug_assert!(self.is_square());
        let mut acc = 0.0;
        for i in 0..self.rows {
            for j in 0..self.cols {
                let d = self[(i, j)]
                    - if i == j {
                        Complex64::ONE
                    } else {
                        Complex64::ZERO
                    };
                acc += d.norm_sqr();
            }
        }
        acc.sqrt()
    }

    /// Kronecker product; dimensions multiply.
    pub fn kron(&self, other: &Mat) -> Mat {
        let mut out = Mat::zeros(self.rows * other.rows, self.cols * other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self[(i, j)];
                if a == Complex64::ZERO {
                    continue;
                }
                for k in 0..other.rows {
                    for l in 0..other.cols {
                        out[(i * other.rows + k, j * other.cols + l)] = a * other[(k, l)];
                    }
                }
            }
        }
        out
    }

    /// Copy of the `nr × nc` block with top-left corner at `(r0, c0)`.
    pub fn block(&self, r0: usize, c0: usize, nr: usize, nc: usize) -> Mat {
        assert!(
            r0 + nr <= self.rows && c0 + nc <= self.cols,
            "block out of range"
        );
        Mat::from_fn(nr, nc, |i, j| self[(r0 + i, c0 + j)])
    }

    /// Write `b` into this matrix with top-left corner at `(r0, c0)`.
    pub fn paste(&mut self, r0: usize, c0: usize, b: &Mat) {
        assert!(
            r0 + b.rows <= self.rows && c0 + b.cols <= self.cols,
            "paste out of range"
        );
        for i in 0..b.rows {
            for j in 0..b.cols {
                self[(r0 + i, c0 + j)] = b[(i, j)];
            }
        }
    }

    /// blockdiag(a, b) for square blocks.
    pub fn block_diag(a: &Mat, b: &Mat) -> Mat {
        debug_assert!(a.is_square() && b.is_square());
        let n = a.dim() + b.dim();
        let mut out = Mat::zeros(n, n);
        out.paste(0, 0, a);
        out.paste(a.dim(), a.dim(), b);
        out
    }

    /// Deviation from unitarity, ‖U†U − 1‖_F.
    pub fn unitarity_defect(&self) -> f64 {
        debug_assert!(self.is_square());
        (&self.dagger() * self).dist_to_identity()
    }

    pub fn check_unitary(&self, tol: f64) -> MatResult<()> {
        if !self.is_square() {
            return Err(MatError::Dim(format!(
                "unitary check requires a square matrix, got {}x{}",
                self.rows, self.cols
            )));
        }
        let defect = self.unitarity_defect();
        if defect > tol {
            return Err(MatError::NotUnitary { deviation: defect });
        }
        Ok(())
    }

    /// Deviation from Hermiticity, ‖A − A†‖_F.
    pub fn hermiticity_defect(&self) -> f64 {
        debug_assert!(self.is_square());
        self.frob_dist(&self.dagger())
    }

    pub fn check_hermitian(&self, tol: f64) -> MatResult<()> {
        if !self.is_square() {
            return Err(MatError::Dim(format!(
                "Hermitian check requires a square matrix, got {}x{}",
                self.rows, self.cols
            )));
        }
        let defect = self.hermiticity_defect();
        if defect > tol * self.frob_norm().max(1.0) {
            return Err(MatError::NotHermitian { deviation: defect });
        }
        Ok(())
    }

    /// (A + A†)/2, killing round-off asymmetry.
    pub fn hermitize(&self) -> Mat {
        Mat::from_fn(self.rows, self.cols, |i, j| {
            (self[(i, j)] + self[(j, i)].conj()) * 0.5
        })
    }

    pub(crate) fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    pub(crate) fn col(&self, j: usize) -> Vec<Complex64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub(crate) fn set_col(&mut self, j: usize, v: &[Complex64]) {
        for i in 0..self.rows {
            self[(i, j)] = v[i];
        }
    }
}

impl Index<(usize, usize)> for Mat {
    type Output = Complex64;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for Mat {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.cols + j]
    }
}

impl Mul for &Mat {
    type Output = Mat;

    fn mul(self, rhs: &Mat) -> Mat {
        assert_eq!(
            self.cols, rhs.rows,
            "multiply shape mismatch: {}x{} * {}x{}",
            self.rows, self.cols, rhs.rows, rhs.cols
        );
        let mut out = Mat::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == Complex64::ZERO {
                    continue;
                }
                for j in 0..rhs.cols {
                    out[(i, j)] += a * rhs[(k, j)];
                }
            }
        }
        out
    }
}

impl Add for &Mat {
    type Output = Mat;

    fn add(self, rhs: &Mat) -> Mat {
        assert_eq!(
            (self.rows, self.cols),
            (rhs.rows, rhs.cols),
            "add shape mismatch"
        );
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Sub for &Mat {
    type Output = Mat;

    fn sub(self, rhs: &Mat) -> Mat {
        assert_eq!(
            (self.rows, self.cols),
            (rhs.rows, rhs.cols),
            "sub shape mismatch"
        );
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl fmt::Debug for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Mat {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                let z = self[(i, j)];
                write!(f, "{:+.4}{:+.4}i  ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}
