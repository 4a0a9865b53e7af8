//! Gate synthesis for NMR quantum computing through canonical coset
//! decompositions.
//!
//! `cosyn` factorizes an arbitrary n-qubit unitary matrix into a verified
//! sequence of experimentally realizable NMR elements: tailored single-qubit
//! unitaries and exponentials of low-weight Pauli strings. The factorization
//! engine is the *block canonical coset decomposition*, which splits a
//! unitary into a coset representative (determined by its lower-left block)
//! times a block-diagonal subgroup element, applied recursively over the
//! qubit count.
//!
//! # Pipeline
//!
//! ```text
//! U(2^n)
//!   │  middle extraction (iterated coset splits around a π/4 pivot)
//!   ▼
//! left · middle · right          middle generator ⊆ σy ⊗ (anything)
//!   │  subgroup isolation        left/right block diagonal
//!   ▼
//! coset halves (σz ⊗ ·) and strictly local factors, recursed
//!   │  axis-diagonal lifting + π/4 weight reduction
//!   ▼
//! GateSequence: local factors + Pauli exponentials of weight ≤ 2
//! ```
//!
//! Every stage is verified by dense reconstruction; `synthesize` refuses to
//! return a sequence whose evaluation does not reproduce the input within
//! the configured tolerance.
//!
//! # Quick start
//!
//! ```
//! use cosyn::gates::qft;
//! use cosyn::synth::{synthesize, SynthConfig};
//!
//! let target = qft(2);
//! let cfg = SynthConfig::default();
//! let seq = synthesize(&target, &cfg).unwrap();
//! let report = seq.verify(&target, cfg.tol_verify);
//! assert!(report.pass);
//! assert!(seq.stats().max_weight <= cfg.max_weight);
//! ```
//!
//! # Modules
//!
//! - [`mat`] — dense complex matrices: arithmetic, Kronecker products,
//!   Hermitian eigendecomposition, SVD, PSD square roots, principal
//!   logarithms and exponentials of normal matrices.
//! - [`pauli`] — Pauli strings with phase tracking, generator expansion in
//!   the Pauli basis, span-membership tests.
//! - [`coset`] — the block canonical coset decomposition itself, generator
//!   recovery, and the block-diagonal subgroup split.
//! - [`synth`] — the recursive synthesis pipeline.
//! - [`seq`] — the gate-sequence intermediate representation, weight
//!   reduction, evaluation, verification, and JSON serialization.
//! - [`gates`] — built-in test matrices (QFT, CNOT, SWAP, seeded random
//!   unitaries).

pub mod coset;
pub mod gates;
pub mod guide;
pub mod mat;
pub mod pauli;
pub mod seq;
pub mod synth;

pub use mat::{Complex64, Mat};
pub use seq::{Factor, GateSequence};
pub use synth::{synthesize, SynthConfig};
