//! End-to-end synthesis of structured gates: permutations, Clifford-like
//! diagonals, tensor products, and real orthogonal matrices. These inputs
//! concentrate exact degeneracies and singular blocks, the regimes where
//! the numerics actually get exercised.

use cosyn::gates::{cnot, qft, swap};
use cosyn::mat::{c64, Complex64, Mat};
use cosyn::synth::{synthesize, SynthConfig};

fn check(label: &str, u: &Mat, tol: f64) {
    let cfg = SynthConfig::default();
    let seq = synthesize(u, &cfg).unwrap_or_else(|e| panic!("{label}: {e}"));
    let native = seq.reduce_weight(cfg.max_weight).unwrap();
    let rep = native.verify(u, tol);
    assert!(rep.pass, "{label}: distance {:.3e}", rep.distance);
    assert!(native.stats().max_weight <= cfg.max_weight, "{label}: weight");
}

#[test]
fn cnot_synthesizes() {
    check("cnot", &cnot(), 1e-8);
    check("cnot x I", &cnot().kron(&Mat::identity(2)), 1e-8);
    check("I x cnot", &Mat::identity(2).kron(&cnot()), 1e-8);
}

#[test]
fn swap_synthesizes_through_the_retry_ladder() {
    check("swap", &swap(), 1e-8);
    // A global phase changes nothing structural.
    check(
        "phase*swap",
        &swap().scale(Complex64::from_polar(1.0, 1.234)),
        1e-8,
    );
}

#[test]
fn controlled_z_synthesizes() {
    let cz = Mat::from_diag(&[c64(1., 0.), c64(1., 0.), c64(1., 0.), c64(-1., 0.)]);
    check("cz", &cz, 1e-8);
}

#[test]
fn toffoli_synthesizes() {
    let mut toffoli = Mat::identity(8);
    toffoli[(6, 6)] = c64(0., 0.);
    toffoli[(7, 7)] = c64(0., 0.);
    toffoli[(6, 7)] = c64(1., 0.);
    toffoli[(7, 6)] = c64(1., 0.);
    check("toffoli", &toffoli, 1e-8);
}

#[test]
fn real_orthogonal_tensor_powers() {
    // Hadamard powers have mirror-symmetric spectra, the worst case for
    // eigenphase separation.
    let h = qft(1);
    check("HxH", &h.kron(&h), 1e-8);
    check("HxHxH", &h.kron(&h).kron(&h), 1e-8);
}

#[test]
fn fourier_tensor_square() {
    check("F4xF4", &qft(2).kron(&qft(2)), 1e-7);
}

#[test]
fn clustered_diagonal_phases() {
    // Near-degenerate and branch-edge eigenphases in one matrix.
    let d = Mat::from_diag(&[
        Complex64::from_polar(1.0, 0.3),
        Complex64::from_polar(1.0, 0.3 + 1e-11),
        Complex64::from_polar(1.0, -0.3),
        Complex64::from_polar(1.0, std::f64::consts::PI),
    ]);
    check("clustered diagonal", &d, 1e-8);
}
