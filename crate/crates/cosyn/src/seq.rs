//! Gate-sequence intermediate representation.
//!
//! A [`GateSequence`] is an ordered list of factors in operator-product
//! order: the first element is the leftmost matrix factor, and
//! [`GateSequence::evaluate`] multiplies in stored order (so the last
//! element is applied first to a state). Two factor kinds exist:
//!
//! - `pauli_exp`: `exp(i·angle·P_word)` for a letter word of the sequence
//!   width;
//! - `local`: a tailored single-qubit unitary stored as the four generator
//!   coefficients `(cI, cX, cY, cZ)` of `exp(i·(cI·σ0 + cX·σ1 + cY·σ2 +
//!   cZ·σ3))` on one 1-based qubit.
//!
//! [`GateSequence::reduce_weight`] rewrites every Pauli exponential of
//! weight above the native cap into a π/4-conjugated equivalent using the
//! identity `exp(−iπ/4·Q) · exp(iθ·P) · exp(iπ/4·Q) = exp(iθ·(iPQ))` for
//! anticommuting words P, Q.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::mat::{c64, Complex64, Mat};
use crate::pauli::{PauliError, PauliLetter, PauliString};

#[derive(Debug, Clone, Error)]
pub enum SeqError {
    #[error("factor word length {word_len} does not match sequence width {n_qubits}")]
    WordLength { word_len: usize, n_qubits: usize },
    #[error("local factor qubit {qubit} outside 1..={n_qubits}")]
    QubitRange { qubit: usize, n_qubits: usize },
    #[error("angle must be finite")]
    NonFiniteAngle,
    #[error("maximum native weight must be at least 1, got {0}")]
    BadMaxWeight(usize),
    #[error("sequence order must be \"left-to-right\", got {0:?}")]
    BadOrder(String),
    #[error("invalid sequence data: {0}")]
    Parse(String),
    #[error(transparent)]
    Pauli(#[from] PauliError),
}

pub type SeqResult<T> = Result<T, SeqError>;

/// One synthesis output element.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Factor {
    /// `exp(i·angle·P_word)`.
    PauliExp {
        word: String,
        angle: f64,
        #[serde(default, skip_serializing_if = "String::is_empty")]
        provenance: String,
    },
    /// Tailored single-qubit factor `exp(i·Σ c_k·σ_k)` on `qubit` (1-based).
    Local {
        qubit: usize,
        log_coeffs: [f64; 4],
        #[serde(default, skip_serializing_if = "String::is_empty")]
        provenance: String,
    },
}

impl Factor {
    pub fn pauli_exp(word: impl Into<String>, angle: f64) -> Self {
        Factor::PauliExp {
            word: word.into(),
            angle,
            provenance: String::new(),
        }
    }

    pub fn local(qubit: usize, log_coeffs: [f64; 4]) -> Self {
        Factor::Local {
            qubit,
            log_coeffs,
            provenance: String::new(),
        }
    }

    pub fn with_provenance(mut self, tag: &str) -> Self {
        match &mut self {
            Factor::PauliExp { provenance, .. } | Factor::Local { provenance, .. } => {
                *provenance = tag.to_string();
            }
        }
        self
    }

    /// Number of non-identity letters for `pauli_exp`; locals count as 1.
    pub fn weight(&self) -> usize {
        match self {
            Factor::PauliExp { word, .. } => word.chars().filter(|&c| c != 'I').count(),
            Factor::Local { .. } => 1,
        }
    }

    /// Dense matrix of this factor on `n_qubits` qubits.
    pub fn matrix(&self, n_qubits: usize) -> SeqResult<Mat> {
        match self {
            Factor::PauliExp { word, angle, .. } => {
                if word.len() != n_qubits {
                    return Err(SeqError::WordLength {
                        word_len: word.len(),
                        n_qubits,
                    });
                }
                if !angle.is_finite() {
                    return Err(SeqError::NonFiniteAngle);
                }
                let p = PauliString::from_word(word)?;
                Ok(pauli_exponential(&p, *angle))
            }
            Factor::Local {
                qubit, log_coeffs, ..
            } => {
                if *qubit == 0 || *qubit > n_qubits {
                    return Err(SeqError::QubitRange {
                        qubit: *qubit,
                        n_qubits,
                    });
                }
                if !log_coeffs.iter().all(|c| c.is_finite()) {
                    return Err(SeqError::NonFiniteAngle);
                }
                let g = local_matrix(log_coeffs);
                let left = Mat::identity(1 << (qubit - 1));
                let right = Mat::identity(1 << (n_qubits - qubit));
                Ok(left.kron(&g).kron(&right))
            }
        }
    }
}

/// `exp(i·θ·P) = cos(θ)·1 + i·sin(θ)·P`, exact because P² = 1.
pub(crate) fn pauli_exponential(p: &PauliString, theta: f64) -> Mat {
    debug_assert_eq!(p.phase(), crate::pauli::Phase::One);
    let dim = 1usize << p.len();
    let mut m = Mat::identity(dim).scale(c64(theta.cos(), 0.0));
    let isin = c64(0.0, theta.sin());
    for j in 0..dim {
        let (i, amp) = p.column_action(j);
        m[(i, j)] += isin * amp;
    }
    m
}

/// `exp(i·(cI·σ0 + c⃗·σ⃗)) = e^{icI}·(cos|c⃗| + i·sin|c⃗|·(ĉ·σ⃗))`.
fn local_matrix(c: &[f64; 4]) -> Mat {
    let norm = (c[1] * c[1] + c[2] * c[2] + c[3] * c[3]).sqrt();
    let phase = Complex64::from_polar(1.0, c[0]);
    let mut m = Mat::identity(2).scale(c64(norm.cos(), 0.0));
    if norm > 0.0 {
        let f = c64(0.0, norm.sin() / norm);
        for (k, letter) in [PauliLetter::X, PauliLetter::Y, PauliLetter::Z]
            .iter()
            .enumerate()
        {
            let p = letter.matrix();
            for i in 0..2 {
                for j in 0..2 {
                    let add = f * c[k + 1] * p[(i, j)];
                    m[(i, j)] += add;
                }
            }
        }
    }
    m.scale(phase)
}

/// Ordered factor list over a fixed qubit count.
#[derive(Debug, Clone, PartialEq)]
pub struct GateSequence {
    n_qubits: usize,
    factors: Vec<Factor>,
}

/// Verification report from [`GateSequence::verify`].
#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub distance: f64,
    pub pass: bool,
}

/// Factor statistics from [`GateSequence::stats`].
#[derive(Debug, Clone, Default, Serialize)]
pub struct SeqStats {
    pub total: usize,
    pub local: usize,
    pub pauli_exp: usize,
    /// `weight_histogram[w]` = number of pauli_exp factors with weight w.
    pub weight_histogram: Vec<usize>,
    /// Largest pauli_exp weight present (0 for none).
    pub max_weight: usize,
}

impl GateSequence {
    pub fn new(n_qubits: usize) -> Self {
        assert!(n_qubits >= 1, "sequences need at least one qubit");
        Self {
            n_qubits,
            factors: Vec::new(),
        }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn factors(&self) -> &[Factor] {
        &self.factors
    }

    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    /// Append a factor, validating its shape against the sequence width.
    pub fn push(&mut self, f: Factor) -> SeqResult<()> {
        match &f {
            Factor::PauliExp { word, angle, .. } => {
                if word.len() != self.n_qubits {
                    return Err(SeqError::WordLength {
                        word_len: word.len(),
                        n_qubits: self.n_qubits,
                    });
                }
                if !angle.is_finite() {
                    return Err(SeqError::NonFiniteAngle);
                }
                // Validate letters early.
                PauliString::from_word(word)?;
            }
            Factor::Local {
                qubit, log_coeffs, ..
            } => {
                if *qubit == 0 || *qubit > self.n_qubits {
                    return Err(SeqError::QubitRange {
                        qubit: *qubit,
                        n_qubits: self.n_qubits,
                    });
                }
                if !log_coeffs.iter().all(|c| c.is_finite()) {
                    return Err(SeqError::NonFiniteAngle);
                }
            }
        }
        self.factors.push(f);
        Ok(())
    }

    pub fn concat(mut self, other: GateSequence) -> GateSequence {
        assert_eq!(self.n_qubits, other.n_qubits);
        self.factors.extend(other.factors);
        self
    }

    /// Dense product of the factors in stored order; the empty sequence
    /// evaluates to the identity.
    pub fn evaluate(&self) -> SeqResult<Mat> {
        let dim = 1usize << self.n_qubits;
        let mut acc = Mat::identity(dim);
        for f in &self.factors {
            acc = &acc * &f.matrix(self.n_qubits)?;
        }
        Ok(acc)
    }

    /// Frobenius distance to `target` and pass/fail at `tol`.
    pub fn verify(&self, target: &Mat, tol: f64) -> VerifyReport {
        assert_eq!(target.dim(), 1usize << self.n_qubits, "dimension mismatch");
        let distance = self
            .evaluate()
            .map(|m| m.frob_dist(target))
            .unwrap_or(f64::INFINITY);
        VerifyReport {
            distance,
            pass: distance <= tol,
        }
    }

    pub fn stats(&self) -> SeqStats {
        let mut s = SeqStats {
            total: self.factors.len(),
            ..Default::default()
        };
        for f in &self.factors {
            match f {
                Factor::Local { .. } => s.local += 1,
                Factor::PauliExp { .. } => {
                    s.pauli_exp += 1;
                    let w = f.weight();
                    if s.weight_histogram.len() <= w {
                        s.weight_histogram.resize(w + 1, 0);
                    }
                    s.weight_histogram[w] += 1;
                    s.max_weight = s.max_weight.max(w);
                }
            }
        }
        s
    }

    /// Rewrite Pauli exponentials of weight above `max_weight` into
    /// π/4-conjugated equivalents; local factors pass through.
    ///
    /// One reduction level handles one excess position: with `j` the last
    /// non-identity position and `a` the first, the conjugator `Q` keeps
    /// `P_j` at `j` and places the cyclic successor of `P_a` at `a`. Then
    /// `iPQ` drops position `j`, its ±1 phase folds into the core angle,
    /// and the level contributes exactly two π/4 conjugator factors.
    pub fn reduce_weight(&self, max_weight: usize) -> SeqResult<GateSequence> {
        if max_weight < 1 {
            return Err(SeqError::BadMaxWeight(max_weight));
        }
        let mut out = GateSequence::new(self.n_qubits);
        for f in &self.factors {
            match f {
                Factor::Local { .. } => out.factors.push(f.clone()),
                Factor::PauliExp {
                    word,
                    angle,
                    provenance,
                } => {
                    let p = PauliString::from_word(word)?;
                    reduce_one(&p, *angle, provenance, max_weight, &mut out)?;
                }
            }
        }
        Ok(out)
    }

    /// Serialize to the sequence wire format (order is always
    /// left-to-right; angles print as shortest round-trippable decimals).
    pub fn to_json_string(&self) -> String {
        let wire = SeqWire {
            n_qubits: self.n_qubits,
            factors: self.factors.clone(),
            order: "left-to-right".to_string(),
        };
        serde_json::to_string(&wire).expect("sequence serialization")
    }

    pub fn from_json_str(s: &str) -> SeqResult<GateSequence> {
        let wire: SeqWire = serde_json::from_str(s).map_err(|e| SeqError::Parse(e.to_string()))?;
        if wire.order != "left-to-right" {
            return Err(SeqError::BadOrder(wire.order));
        }
        if wire.n_qubits == 0 {
            return Err(SeqError::Parse("n_qubits must be positive".into()));
        }
        let mut seq = GateSequence::new(wire.n_qubits);
        for f in wire.factors {
            seq.push(f)?;
        }
        Ok(seq)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SeqWire {
    n_qubits: usize,
    factors: Vec<Factor>,
    order: String,
}

fn reduce_one(
    p: &PauliString,
    angle: f64,
    provenance: &str,
    max_weight: usize,
    out: &mut GateSequence,
) -> SeqResult<()> {
    if p.weight() <= max_weight {
        out.factors.push(Factor::PauliExp {
            word: p.word(),
            angle,
            provenance: provenance.to_string(),
        });
        return Ok(());
    }
    let non_identity: Vec<usize> = p
        .letters()
        .iter()
        .enumerate()
        .filter(|(_, &l)| l != PauliLetter::I)
        .map(|(i, _)| i)
        .collect();
    let delete = *non_identity.last().expect("weight > max_weight >= 1");
    let anchor = non_identity[0];
    debug_assert_ne!(delete, anchor);

    let mut q_letters = vec![PauliLetter::I; p.len()];
    q_letters[delete] = p.letters()[delete];
    q_letters[anchor] = p.letters()[anchor].next();
    let q = PauliString::new(q_letters, crate::pauli::Phase::One)?;
    debug_assert!(p.anticommutes_with(&q));

    // core = i·P·Q: Hermitian word with a ±1 phase folded into the angle.
    // The emitted triple is exp(−iπ/4·Q) · exp(iθ′·PQ) · exp(iπ/4·Q) with
    // θ′ = −sign(iPQ)·θ, which reproduces exp(iθ·P) by the conjugation
    // identity exp(−iπ/4·Q)·exp(iθ·P)·exp(iπ/4·Q) = exp(iθ·iPQ).
    let pq = p.mul(&q)?;
    let core_phase = crate::pauli::Phase::PlusI.mul(pq.phase());
    let sign = match core_phase {
        crate::pauli::Phase::One => 1.0,
        crate::pauli::Phase::MinusOne => -1.0,
        other => unreachable!("iPQ must be Hermitian, got phase {other:?}"),
    };
    let core = PauliString::from_word(&pq.word())?;

    out.factors.push(Factor::PauliExp {
        word: q.word(),
        angle: -std::f64::consts::FRAC_PI_4,
        provenance: provenance.to_string(),
    });
    reduce_one(&core, -sign * angle, provenance, max_weight, out)?;
    out.factors.push(Factor::PauliExp {
        word: q.word(),
        angle: std::f64::consts::FRAC_PI_4,
        provenance: provenance.to_string(),
    });
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mat::normal_exp;

    fn dense_exp(word: &str, theta: f64) -> Mat {
        let p = PauliString::from_word(word).unwrap();
        normal_exp(&p.matrix().scale(c64(0.0, theta))).unwrap()
    }

    #[test]
    fn empty_sequence_evaluates_to_identity() {
        let seq = GateSequence::new(2);
        assert!(seq.evaluate().unwrap().frob_dist(&Mat::identity(4)) == 0.0);
    }

    #[test]
    fn single_pauli_exp_matches_dense_exponential() {
        let mut seq = GateSequence::new(2);
        seq.push(Factor::pauli_exp("ZZ", std::f64::consts::FRAC_PI_4))
            .unwrap();
        let got = seq.evaluate().unwrap();
        assert!(got.frob_dist(&dense_exp("ZZ", std::f64::consts::FRAC_PI_4)) < 1e-14);
    }

    #[test]
    fn local_factor_matrix() {
        let mut seq = GateSequence::new(2);
        seq.push(Factor::local(2, [0.1, 0.2, -0.3, 0.4])).unwrap();
        let got = seq.evaluate().unwrap();
        // Oracle: dense exponential of the generator on qubit 2.
        let g = {
            let coeffs = [0.1, 0.2, -0.3, 0.4];
            let mut acc = Mat::identity(2).scale(c64(coeffs[0], 0.0));
            for (k, l) in [PauliLetter::X, PauliLetter::Y, PauliLetter::Z]
                .iter()
                .enumerate()
            {
                acc = &acc + &l.matrix().scale(c64(coeffs[k + 1], 0.0));
            }
            Mat::identity(2).kron(&acc)
        };
        let want = normal_exp(&g.scale(c64(0.0, 1.0))).unwrap();
        assert!(got.frob_dist(&want) < 1e-13);
        assert!(got.unitarity_defect() < 1e-13);
    }

    #[test]
    fn evaluate_is_multiplicative_over_concat() {
        let mut a = GateSequence::new(2);
        a.push(Factor::pauli_exp("XY", 0.3)).unwrap();
        a.push(Factor::local(1, [0.0, 0.1, 0.0, -0.2])).unwrap();
        let mut b = GateSequence::new(2);
        b.push(Factor::pauli_exp("ZI", -0.7)).unwrap();
        let ea = a.clone().evaluate().unwrap();
        let eb = b.clone().evaluate().unwrap();
        let eab = a.concat(b).evaluate().unwrap();
        assert!(eab.frob_dist(&(&ea * &eb)) < 1e-12);
    }

    #[test]
    fn reduce_weight_passes_through_low_weight() {
        let mut seq = GateSequence::new(3);
        seq.push(Factor::pauli_exp("ZIZ", 0.4)).unwrap();
        seq.push(Factor::local(1, [0.0, 0.5, 0.0, 0.0])).unwrap();
        let red = seq.reduce_weight(2).unwrap();
        assert_eq!(red, seq);
    }

    #[test]
    fn reduce_weight_zzz_matches_dense_oracle() {
        let theta = 0.3;
        let mut seq = GateSequence::new(3);
        seq.push(Factor::pauli_exp("ZZZ", theta)).unwrap();
        let red = seq.reduce_weight(2).unwrap();
        assert_eq!(red.len(), 3);
        let stats = red.stats();
        assert_eq!(stats.max_weight, 2);
        assert!(red.evaluate().unwrap().frob_dist(&dense_exp("ZZZ", theta)) < 1e-12);
        // Conjugators at ±π/4.
        match (&red.factors()[0], &red.factors()[2]) {
            (
                Factor::PauliExp {
                    word: w0,
                    angle: a0,
                    ..
                },
                Factor::PauliExp {
                    word: w2,
                    angle: a2,
                    ..
                },
            ) => {
                assert_eq!(w0, w2);
                assert!((a0 + std::f64::consts::FRAC_PI_4).abs() < 1e-15);
                assert!((a2 - std::f64::consts::FRAC_PI_4).abs() < 1e-15);
            }
            other => panic!("unexpected structure {other:?}"),
        }
    }

    #[test]
    fn reduce_weight_zzzz_nested() {
        let theta = 0.2;
        let mut seq = GateSequence::new(4);
        seq.push(Factor::pauli_exp("ZZZZ", theta)).unwrap();
        let red = seq.reduce_weight(2).unwrap();
        assert_eq!(red.len(), 5);
        assert_eq!(red.stats().max_weight, 2);
        assert!(red.evaluate().unwrap().frob_dist(&dense_exp("ZZZZ", theta)) < 1e-12);
    }

    #[test]
    fn verify_distances() {
        let mut seq = GateSequence::new(2);
        seq.push(Factor::pauli_exp("ZZ", 0.7)).unwrap();
        let own = seq.evaluate().unwrap();
        let rep = seq.verify(&own, 1e-12);
        assert!(rep.pass && rep.distance < 1e-15);
        let other = crate::gates::random_unitary(2, 5);
        let rep2 = seq.verify(&other, 1e-7);
        assert!(!rep2.pass && rep2.distance > 0.1);
    }

    #[test]
    fn stats_counts() {
        let mut seq = GateSequence::new(2);
        seq.push(Factor::local(1, [0.0, 0.1, 0.2, 0.3])).unwrap();
        seq.push(Factor::pauli_exp("ZZ", 0.1)).unwrap();
        let s = seq.stats();
        assert_eq!((s.total, s.local, s.pauli_exp, s.max_weight), (2, 1, 1, 2));
        let empty = GateSequence::new(2).stats();
        assert_eq!(
            (empty.total, empty.local, empty.pauli_exp, empty.max_weight),
            (0, 0, 0, 0)
        );
    }

    #[test]
    #[allow(clippy::approx_constant)] // a truncated-π/4 angle exercises decimal round-tripping
    fn json_round_trip_is_exact() {
        let mut seq = GateSequence::new(3);
        seq.push(Factor::pauli_exp("ZIZ", 0.785398163).with_provenance("m"))
            .unwrap();
        seq.push(Factor::local(2, [0.1, -0.25, 1.0 / 3.0, 0.0]))
            .unwrap();
        let text = seq.to_json_string();
        let back = GateSequence::from_json_str(&text).unwrap();
        assert_eq!(seq, back);
        // Byte-stable.
        assert_eq!(text, back.to_json_string());
    }

    #[test]
    fn json_rejects_unknown_fields_and_bad_order() {
        let bad = r#"{"n_qubits":1,"factors":[],"order":"right-to-left"}"#;
        assert!(GateSequence::from_json_str(bad).is_err());
        let extra = r#"{"n_qubits":1,"factors":[],"order":"left-to-right","x":1}"#;
        assert!(GateSequence::from_json_str(extra).is_err());
        let badword = r#"{"n_qubits":2,"factors":[{"kind":"pauli_exp","word":"Z","angle":0.1}],"order":"left-to-right"}"#;
        assert!(GateSequence::from_json_str(badword).is_err());
    }

    #[test]
    fn push_validates() {
        let mut seq = GateSequence::new(2);
        assert!(seq.push(Factor::pauli_exp("ZZZ", 0.1)).is_err());
        assert!(seq.push(Factor::pauli_exp("ZZ", f64::NAN)).is_err());
        assert!(seq.push(Factor::local(3, [0.0; 4])).is_err());
        assert!(seq.push(Factor::local(0, [0.0; 4])).is_err());
    }
}
