//! Built-in test matrices: quantum Fourier transform, identity, CNOT, SWAP,
//! and seeded pseudo-random unitaries.
//!
//! The random unitaries are platform-stable by construction: a SplitMix64
//! stream feeds a Box–Muller transform, and the resulting complex Gaussian
//! matrix is orthonormalized by modified Gram–Schmidt with one
//! re-orthogonalization pass. Identical seeds give bit-identical matrices.

use std::f64::consts::PI;

use thiserror::Error;

use crate::mat::{c64, Complex64, Mat};

#[derive(Debug, Clone, Error)]
pub enum GateError {
    #[error("qubit count must be at least 1")]
    ZeroQubits,
}

/// Which built-in matrix to generate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GateSpec {
    Qft { n_qubits: usize },
    Identity { n_qubits: usize },
    Cnot,
    Swap,
    Random { n_qubits: usize, seed: u64 },
}

impl GateSpec {
    pub fn build(self) -> Result<Mat, GateError> {
        match self {
            GateSpec::Qft { n_qubits } => {
                if n_qubits == 0 {
                    return Err(GateError::ZeroQubits);
                }
                Ok(qft(n_qubits))
            }
            GateSpec::Identity { n_qubits } => {
                if n_qubits == 0 {
                    return Err(GateError::ZeroQubits);
                }
                Ok(Mat::identity(1 << n_qubits))
            }
            GateSpec::Cnot => Ok(cnot()),
            GateSpec::Swap => Ok(swap()),
            GateSpec::Random { n_qubits, seed } => {
                if n_qubits == 0 {
                    return Err(GateError::ZeroQubits);
                }
                Ok(random_unitary(n_qubits, seed))
            }
        }
    }
}

/// The n-qubit quantum Fourier transform, `F_jk = ω^{jk} / √N` with
/// `N = 2^n` and `ω = exp(2πi/N)`. No bit reversal is applied.
pub fn qft(n: usize) -> Mat {
    assert!(n >= 1, "qft requires at least one qubit");
    let dim = 1usize << n;
    let norm = 1.0 / (dim as f64).sqrt();
    Mat::from_fn(dim, dim, |j, k| {
        let angle = 2.0 * PI * ((j * k) % dim) as f64 / dim as f64;
        Complex64::from_polar(norm, angle)
    })
}

/// The conjugate-convention QFT, `F_jk = ω̄^{jk} / √N`.
pub fn qft_conj(n: usize) -> Mat {
    let f = qft(n);
    Mat::from_fn(f.rows(), f.cols(), |i, j| f[(i, j)].conj())
}

/// Controlled-NOT in the computational basis (control = qubit 1).
pub fn cnot() -> Mat {
    Mat::from_real_rows(&[
        &[1., 0., 0., 0.],
        &[0., 1., 0., 0.],
        &[0., 0., 0., 1.],
        &[0., 0., 1., 0.],
    ])
}

/// Two-qubit SWAP. Its top-left block `[[1,0],[0,0]]` is singular, which
/// makes it the canonical pivot-retry exercise for the synthesizer.
pub fn swap() -> Mat {
    Mat::from_real_rows(&[
        &[1., 0., 0., 0.],
        &[0., 0., 1., 0.],
        &[0., 1., 0., 0.],
        &[0., 0., 0., 1.],
    ])
}

/// Seeded pseudo-random unitary of dimension 2^n.
///
/// Entries are standard complex Gaussians from [`GaussianStream`], made
/// unitary by modified Gram–Schmidt with a second orthogonalization pass.
/// Deterministic across platforms for a fixed seed.
pub fn random_unitary(n: usize, seed: u64) -> Mat {
    assert!(n >= 1, "random_unitary requires at least one qubit");
    let dim = 1usize << n;
    let mut stream = GaussianStream::new(seed);
    let raw = Mat::from_fn(dim, dim, |_, _| {
        let (re, im) = stream.next_pair();
        c64(re, im)
    });
    orthonormalize(raw)
}

fn orthonormalize(mut a: Mat) -> Mat {
    let n = a.rows();
    for j in 0..n {
        let mut v = a.col(j);
        // Two projection passes: plain MGS plus one re-orthogonalization.
        for _ in 0..2 {
            for k in 0..j {
                let u = a.col(k);
                let proj: Complex64 = u.iter().zip(&v).map(|(x, y)| x.conj() * y).sum();
                for (vi, ui) in v.iter_mut().zip(&u) {
                    *vi -= proj * ui;
                }
            }
        }
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        for vi in v.iter_mut() {
            *vi /= norm;
        }
        a.set_col(j, &v);
    }
    a
}

/// SplitMix64 stream feeding a Box–Muller transform.
///
/// `next_u64` is the reference SplitMix64 update; uniform deviates are the
/// top 53 bits mapped into (0, 1]; one Box–Muller evaluation yields the
/// pair (r·cos θ, r·sin θ) used as the real and imaginary parts of one
/// matrix entry.
pub struct GaussianStream {
    state: u64,
}

impl GaussianStream {
    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform deviate in (0, 1].
    fn next_unit(&mut self) -> f64 {
        (((self.next_u64() >> 11) + 1) as f64) * (1.0 / (1u64 << 53) as f64)
    }

    /// One standard-normal pair via Box–Muller.
    pub fn next_pair(&mut self) -> (f64, f64) {
        let u1 = self.next_unit();
        let u2 = self.next_unit();
        let r = (-2.0 * u1.ln()).sqrt();
        let theta = 2.0 * PI * u2;
        (r * theta.cos(), r * theta.sin())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_1_SQRT_2;

    #[test]
    fn qft_1_is_hadamard() {
        let f = qft(1);
        let h = Mat::from_real_rows(&[
            &[FRAC_1_SQRT_2, FRAC_1_SQRT_2],
            &[FRAC_1_SQRT_2, -FRAC_1_SQRT_2],
        ]);
        assert!(f.frob_dist(&h) < 1e-15);
    }

    #[test]
    fn qft_2_matches_direct_evaluation() {
        let f = qft(2);
        let i = c64(0., 1.);
        let one = c64(1., 0.);
        let want = Mat::new(
            4,
            4,
            vec![
                one, one, one, one, //
                one, i, -one, -i, //
                one, -one, one, -one, //
                one, -i, -one, i,
            ],
        )
        .unwrap()
        .scale(c64(0.5, 0.));
        assert!(f.frob_dist(&want) < 1e-14);
    }

    #[test]
    fn qft_unitary_up_to_5() {
        for n in 1..=5 {
            assert!(qft(n).unitarity_defect() < 1e-12, "n = {n}");
        }
    }

    #[test]
    fn qft_fourth_power_is_phase_permutation() {
        for n in 1..=3 {
            let f = qft(n);
            let f2 = &f * &f;
            let f4 = &f2 * &f2;
            for i in 0..f4.rows() {
                for j in 0..f4.cols() {
                    let m = f4[(i, j)].norm();
                    assert!(
                        m < 1e-10 || (m - 1.0).abs() < 1e-10,
                        "n={n} entry ({i},{j})"
                    );
                }
            }
        }
    }

    #[test]
    fn cnot_matrix() {
        let c = cnot();
        assert_eq!(c[(2, 3)], c64(1., 0.));
        assert_eq!(c[(3, 2)], c64(1., 0.));
        assert_eq!(c[(2, 2)], c64(0., 0.));
    }

    #[test]
    fn swap_top_left_block_is_singular() {
        let s = swap();
        let block = s.block(0, 0, 2, 2);
        assert!(block.frob_dist(&Mat::from_real_rows(&[&[1., 0.], &[0., 0.]])) == 0.0);
    }

    #[test]
    fn identity_spec() {
        let m = GateSpec::Identity { n_qubits: 3 }.build().unwrap();
        assert!(m.frob_dist(&Mat::identity(8)) == 0.0);
    }

    #[test]
    fn random_unitary_is_deterministic() {
        let a = random_unitary(2, 42);
        let b = random_unitary(2, 42);
        assert_eq!(a, b);
        assert_ne!(random_unitary(2, 43), a);
    }

    #[test]
    fn random_unitary_is_unitary() {
        for seed in [1, 7, 42] {
            assert!(random_unitary(3, seed).unitarity_defect() < 1e-12);
        }
    }

    #[test]
    fn random_unitary_golden_entry_seed_42() {
        // Frozen from the stream definition above; guards the PRNG and the
        // orthonormalization order against accidental changes.
        let m = random_unitary(2, 42);
        let z = m[(0, 0)];
        let (re, im) = GOLDEN_SEED42_N2_FIRST;
        assert!(
            (z.re - re).abs() < 1e-15 && (z.im - im).abs() < 1e-15,
            "got {z:?}"
        );
    }

    // Regenerate by printing random_unitary(2, 42)[(0,0)] at full precision.
    const GOLDEN_SEED42_N2_FIRST: (f64, f64) = (0.11732870378421097, 0.18465057837177962);

    #[test]
    fn trace_statistic_sanity() {
        // Weak Haar indicator: E|tr U|² = 1 for Haar; allow a wide band.
        let samples = 200;
        let dim = 4.0;
        let mean: f64 = (0..samples)
            .map(|s| random_unitary(2, 1000 + s as u64).trace().norm_sqr())
            .sum::<f64>()
            / samples as f64;
        assert!(mean > 0.5 && mean < 2.0, "mean |tr|^2 = {mean}, dim {dim}");
    }
}
