//! Pauli-string algebra with phase tracking.
//!
//! A [`PauliString`] is a tensor word over {I, X, Y, Z} together with a
//! phase in {+1, −1, +i, −i}; the leftmost letter acts on qubit 1, the most
//! significant tensor factor. [`PauliCoeffs`] is a sparse real coefficient
//! map over letter words representing a Hermitian generator
//! `H = Σ c_s · P_s`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::mat::{c64, Complex64, Mat, MatError};

#[derive(Debug, Clone, Error)]
pub enum PauliError {
    #[error("invalid Pauli letter '{0}' (expected I, X, Y or Z)")]
    BadLetter(char),
    #[error("empty Pauli word")]
    Empty,
    #[error("Pauli word length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("dimension {0} is not a power of two")]
    NotPowerOfTwo(usize),
    #[error(transparent)]
    Mat(#[from] MatError),
}

pub type PauliResult<T> = Result<T, PauliError>;

/// One single-qubit Pauli letter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PauliLetter {
    I,
    X,
    Y,
    Z,
}

impl PauliLetter {
    pub fn from_char(c: char) -> PauliResult<Self> {
        match c {
            'I' => Ok(Self::I),
            'X' => Ok(Self::X),
            'Y' => Ok(Self::Y),
            'Z' => Ok(Self::Z),
            other => Err(PauliError::BadLetter(other)),
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Self::I => 'I',
            Self::X => 'X',
            Self::Y => 'Y',
            Self::Z => 'Z',
        }
    }

    /// The 2×2 matrix of this letter.
    pub fn matrix(self) -> Mat {
        match self {
            Self::I => Mat::identity(2),
            Self::X => Mat::new(
                2,
                2,
                vec![c64(0., 0.), c64(1., 0.), c64(1., 0.), c64(0., 0.)],
            )
            .unwrap(),
            Self::Y => Mat::new(
                2,
                2,
                vec![c64(0., 0.), c64(0., -1.), c64(0., 1.), c64(0., 0.)],
            )
            .unwrap(),
            Self::Z => Mat::from_diag(&[c64(1., 0.), c64(-1., 0.)]),
        }
    }

    pub fn commutes_with(self, other: Self) -> bool {
        self == Self::I || other == Self::I || self == other
    }

    /// Cyclic successor X → Y → Z → X (I maps to X). Used as the
    /// deterministic anticommuting-partner choice in weight reduction.
    pub fn next(self) -> Self {
        match self {
            Self::I | Self::Z => Self::X,
            Self::X => Self::Y,
            Self::Y => Self::Z,
        }
    }

    /// Single-letter product `self · other` as (phase, letter), where the
    /// phase is a fourth root of unity.
    fn mul(self, other: Self) -> (Phase, Self) {
        use PauliLetter::*;
        match (self, other) {
            (I, b) => (Phase::One, b),
            (a, I) => (Phase::One, a),
            (a, b) if a == b => (Phase::One, I),
            (X, Y) => (Phase::PlusI, Z),
            (Y, X) => (Phase::MinusI, Z),
            (Y, Z) => (Phase::PlusI, X),
            (Z, Y) => (Phase::MinusI, X),
            (Z, X) => (Phase::PlusI, Y),
            (X, Z) => (Phase::MinusI, Y),
            _ => unreachable!(),
        }
    }
}

/// Phase of a Pauli string: one of {+1, −1, +i, −i}.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Phase {
    #[default]
    One,
    PlusI,
    MinusOne,
    MinusI,
}

impl Phase {
    pub fn as_complex(self) -> Complex64 {
        match self {
            Self::One => c64(1., 0.),
            Self::PlusI => c64(0., 1.),
            Self::MinusOne => c64(-1., 0.),
            Self::MinusI => c64(0., -1.),
        }
    }

    #[allow(clippy::should_implement_trait)] // fallible/by-value group product, not std::ops::Mul
    pub fn mul(self, other: Self) -> Self {
        // Powers of i: One=0, PlusI=1, MinusOne=2, MinusI=3.
        Self::from_power(self.power() + other.power())
    }

    fn power(self) -> u8 {
        match self {
            Self::One => 0,
            Self::PlusI => 1,
            Self::MinusOne => 2,
            Self::MinusI => 3,
        }
    }

    fn from_power(p: u8) -> Self {
        match p % 4 {
            0 => Self::One,
            1 => Self::PlusI,
            2 => Self::MinusOne,
            _ => Self::MinusI,
        }
    }

    fn prefix(self) -> &'static str {
        match self {
            Self::One => "+",
            Self::PlusI => "+i",
            Self::MinusOne => "-",
            Self::MinusI => "-i",
        }
    }
}

/// A phase-tracked tensor word over {I, X, Y, Z}.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PauliString {
    letters: Vec<PauliLetter>,
    phase: Phase,
}

impl PauliString {
    pub fn new(letters: Vec<PauliLetter>, phase: Phase) -> PauliResult<Self> {
        if letters.is_empty() {
            return Err(PauliError::Empty);
        }
        Ok(Self { letters, phase })
    }

    /// Parse a bare letter word ("IYZ") with phase +1.
    pub fn from_word(word: &str) -> PauliResult<Self> {
        let letters = word
            .chars()
            .map(PauliLetter::from_char)
            .collect::<PauliResult<Vec<_>>>()?;
        Self::new(letters, Phase::One)
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn letters(&self) -> &[PauliLetter] {
        &self.letters
    }

    pub fn phase(&self) -> Phase {
        self.phase
    }

    /// Number of non-identity letters.
    pub fn weight(&self) -> usize {
        self.letters
            .iter()
            .filter(|&&l| l != PauliLetter::I)
            .count()
    }

    /// The bare word without its phase.
    pub fn word(&self) -> String {
        self.letters.iter().map(|l| l.as_char()).collect()
    }

    /// Row index and amplitude of the unique nonzero entry in column `j`,
    /// i.e. `P · e_j = amp · e_i`. Leftmost letter owns the most
    /// significant index bit.
    pub(crate) fn column_action(&self, j: usize) -> (usize, Complex64) {
        let n = self.letters.len();
        let mut i = j;
        let mut amp = self.phase.as_complex();
        for (pos, letter) in self.letters.iter().enumerate() {
            let bit = n - 1 - pos;
            let set = (j >> bit) & 1 == 1;
            match letter {
                PauliLetter::I => {}
                PauliLetter::X => i ^= 1 << bit,
                PauliLetter::Y => {
                    i ^= 1 << bit;
                    amp *= if set { c64(0., -1.) } else { c64(0., 1.) };
                }
                PauliLetter::Z => {
                    if set {
                        amp = -amp;
                    }
                }
            }
        }
        (i, amp)
    }

    /// Dense matrix: phase × tensor product of the letters, dimension 2^n.
    pub fn matrix(&self) -> Mat {
        let dim = 1 << self.letters.len();
        let mut m = Mat::zeros(dim, dim);
        for j in 0..dim {
            let (i, amp) = self.column_action(j);
            m[(i, j)] = amp;
        }
        m
    }

    /// Phase-tracked string product; the result's matrix equals the matrix
    /// product exactly.
    pub fn mul(&self, other: &PauliString) -> PauliResult<PauliString> {
        if self.len() != other.len() {
            return Err(PauliError::LengthMismatch(self.len(), other.len()));
        }
        let mut phase = self.phase.mul(other.phase);
        let mut letters = Vec::with_capacity(self.len());
        for (&a, &b) in self.letters.iter().zip(&other.letters) {
            let (p, l) = a.mul(b);
            phase = phase.mul(p);
            letters.push(l);
        }
        Ok(PauliString { letters, phase })
    }

    /// Whether the two words anticommute (odd number of positions with
    /// distinct non-identity letters).
    pub fn anticommutes_with(&self, other: &PauliString) -> bool {
        self.letters
            .iter()
            .zip(&other.letters)
            .filter(|(&a, &b)| !a.commutes_with(b))
            .count()
            % 2
            == 1
    }
}

impl fmt::Display for PauliString {
    /// Canonical textual form: optional phase prefix then letters, "-IYZ".
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = self.phase.prefix();
        let p = if p == "+" { "" } else { p };
        write!(f, "{p}{}", self.word())
    }
}

impl FromStr for PauliString {
    type Err = PauliError;

    fn from_str(s: &str) -> PauliResult<Self> {
        let (phase, rest) = if let Some(r) = s.strip_prefix("+i") {
            (Phase::PlusI, r)
        } else if let Some(r) = s.strip_prefix("-i") {
            (Phase::MinusI, r)
        } else if let Some(r) = s.strip_prefix('+') {
            (Phase::One, r)
        } else if let Some(r) = s.strip_prefix('-') {
            (Phase::MinusOne, r)
        } else {
            (Phase::One, s)
        };
        let letters = rest
            .chars()
            .map(PauliLetter::from_char)
            .collect::<PauliResult<Vec<_>>>()?;
        if letters.is_empty() {
            return Err(PauliError::Empty);
        }
        Ok(PauliString { letters, phase })
    }
}

/// Sparse real coefficients over letter words: a Hermitian generator
/// `H = Σ c_s · P_s`. Absent keys mean zero.
#[derive(Debug, Clone, PartialEq)]
pub struct PauliCoeffs {
    n_qubits: usize,
    coeffs: BTreeMap<String, f64>,
}

impl PauliCoeffs {
    pub fn new(n_qubits: usize) -> Self {
        Self {
            n_qubits,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn set(&mut self, word: &str, value: f64) {
        debug_assert_eq!(word.len(), self.n_qubits);
        if value == 0.0 {
            self.coeffs.remove(word);
        } else {
            self.coeffs.insert(word.to_string(), value);
        }
    }

    pub fn get(&self, word: &str) -> f64 {
        self.coeffs.get(word).copied().unwrap_or(0.0)
    }

    /// Sorted iteration over the stored (word, coefficient) pairs.
    pub fn iter(&self) -> impl Iterator<Item = (&str, f64)> {
        self.coeffs.iter().map(|(w, &c)| (w.as_str(), c))
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Largest |c_s| over stored coefficients.
    pub fn max_abs(&self) -> f64 {
        self.coeffs.values().fold(0.0, |m, c| m.max(c.abs()))
    }

    /// Dense Hermitian matrix Σ c_s · P_s.
    pub fn to_matrix(&self) -> Mat {
        let dim = 1 << self.n_qubits;
        let mut m = Mat::zeros(dim, dim);
        for (word, &coeff) in &self.coeffs {
            let s = PauliString::from_word(word).expect("stored words are valid");
            for j in 0..dim {
                let (i, amp) = s.column_action(j);
                m[(i, j)] += amp * coeff;
            }
        }
        m
    }

    /// True iff every coefficient above `tol` matches one of the allowed
    /// first-letter patterns, e.g. `"Y*"` for σy ⊗ (anything).
    pub fn support_subset(&self, allowed: &[&str], tol: f64) -> bool {
        let firsts: Vec<char> = allowed
            .iter()
            .map(|p| p.chars().next().expect("non-empty pattern"))
            .collect();
        self.coeffs.iter().all(|(word, &c)| {
            c.abs() <= tol
                || word
                    .chars()
                    .next()
                    .is_some_and(|first| firsts.contains(&first))
        })
    }

    /// Coefficient mass (Frobenius of the represented matrix, divided by
    /// √2^n) outside the allowed patterns.
    pub fn mass_outside(&self, allowed: &[&str]) -> f64 {
        let firsts: Vec<char> = allowed
            .iter()
            .map(|p| p.chars().next().expect("non-empty pattern"))
            .collect();
        self.coeffs
            .iter()
            .filter(|(word, _)| {
                !word
                    .chars()
                    .next()
                    .is_some_and(|first| firsts.contains(&first))
            })
            .map(|(_, &c)| c * c)
            .sum::<f64>()
            .sqrt()
    }

    /// Drop the fixed first letter: coefficients of `H` restricted to words
    /// starting with `first`, re-keyed on the remaining n−1 letters.
    pub fn strip_first(&self, first: char) -> PauliCoeffs {
        let mut out = PauliCoeffs::new(self.n_qubits - 1);
        for (word, &c) in &self.coeffs {
            if word.starts_with(first) {
                out.set(&word[1..], c);
            }
        }
        out
    }
}

/// Expand a Hermitian matrix in the Pauli basis: `c_s = Tr(P_s · h) / 2^n`.
///
/// The reconstruction `Σ c_s · P_s` reproduces `h` to round-off; the
/// expansion is a linear bijection on Hermitian matrices.
pub fn expand_generator(h: &Mat) -> PauliResult<PauliCoeffs> {
    h.check_hermitian(1e-10)?;
    let dim = h.dim();
    if !dim.is_power_of_two() {
        return Err(PauliError::NotPowerOfTwo(dim));
    }
    let n = dim.trailing_zeros() as usize;
    let mut out = PauliCoeffs::new(n);
    let mut word = vec![PauliLetter::I; n];
    expand_rec(h, dim, &mut word, 0, &mut out);
    Ok(out)
}

fn expand_rec(h: &Mat, dim: usize, word: &mut Vec<PauliLetter>, pos: usize, out: &mut PauliCoeffs) {
    if pos == word.len() {
        let s = PauliString {
            letters: word.clone(),
            phase: Phase::One,
        };
        // Tr(P·h) via the sparse column action: Σ_j amp_j · h[j, i_j].
        let mut tr = Complex64::ZERO;
        for j in 0..dim {
            let (i, amp) = s.column_action(j);
            tr += amp * h[(j, i)];
        }
        let c = tr.re / dim as f64;
        if c != 0.0 {
            out.coeffs.insert(s.word(), c);
        }
        return;
    }
    for letter in [
        PauliLetter::I,
        PauliLetter::X,
        PauliLetter::Y,
        PauliLetter::Z,
    ] {
        word[pos] = letter;
        expand_rec(h, dim, word, pos + 1, out);
    }
    word[pos] = PauliLetter::I;
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mat::unitary_log;

    #[test]
    fn single_letter_matrix() {
        assert!(
            PauliString::from_word("I")
                .unwrap()
                .matrix()
                .frob_dist(&Mat::identity(2))
                == 0.0
        );
    }

    #[test]
    fn xy_matrix_matches_kron() {
        let xy = PauliString::from_word("XY").unwrap().matrix();
        let want = PauliLetter::X.matrix().kron(&PauliLetter::Y.matrix());
        assert!(xy.frob_dist(&want) == 0.0);
    }

    #[test]
    fn zz_squares_to_identity() {
        let zz = PauliString::from_word("ZZ").unwrap();
        let sq = zz.mul(&zz).unwrap();
        assert_eq!(sq.phase(), Phase::One);
        assert_eq!(sq.word(), "II");
        assert!(sq.matrix().frob_dist(&Mat::identity(4)) == 0.0);
    }

    #[test]
    fn z_times_x_is_i_y() {
        let z = PauliString::from_word("Z").unwrap();
        let x = PauliString::from_word("X").unwrap();
        let zx = z.mul(&x).unwrap();
        assert_eq!(zx.phase(), Phase::PlusI);
        assert_eq!(zx.word(), "Y");
    }

    #[test]
    fn word_product_matches_dense_oracle() {
        let a = PauliString::from_word("ZZZ").unwrap();
        let b = PauliString::from_word("ZXI").unwrap();
        let prod = a.mul(&b).unwrap();
        let dense = &a.matrix() * &b.matrix();
        assert!(prod.matrix().frob_dist(&dense) == 0.0);
    }

    #[test]
    fn display_and_parse_round_trip() {
        for text in ["XYZ", "-IYZ", "+iZZ", "-iXI"] {
            let s: PauliString = text.parse().unwrap();
            assert_eq!(s.to_string(), text);
        }
        // "+" collapses into the bare form.
        let s: PauliString = "+XI".parse().unwrap();
        assert_eq!(s.to_string(), "XI");
        assert!("QQ".parse::<PauliString>().is_err());
        assert!("".parse::<PauliString>().is_err());
    }

    #[test]
    fn expand_zz() {
        let h = PauliString::from_word("ZZ").unwrap().matrix();
        let c = expand_generator(&h).unwrap();
        assert!((c.get("ZZ") - 1.0).abs() < 1e-14);
        assert_eq!(c.iter().count(), 1);
    }

    #[test]
    fn expand_identity() {
        let c = expand_generator(&Mat::identity(4)).unwrap();
        assert!((c.get("II") - 1.0).abs() < 1e-14);
        assert_eq!(c.iter().count(), 1);
    }

    #[test]
    fn expand_round_trip_random() {
        let mut seed = 21_u64;
        let mut next = move || {
            seed = seed
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            ((seed >> 11) as f64) / ((1_u64 << 53) as f64) - 0.5
        };
        for dim in [8usize, 8, 16] {
            let h = Mat::from_fn(dim, dim, |_, _| c64(next(), next())).hermitize();
            let c = expand_generator(&h).unwrap();
            assert!(c.to_matrix().frob_dist(&h) < 1e-12, "dim {dim}");
        }
    }

    #[test]
    fn single_letter_products_exhaustive() {
        use PauliLetter::*;
        for a in [I, X, Y, Z] {
            for b in [I, X, Y, Z] {
                let pa = PauliString::new(vec![a], Phase::One).unwrap();
                let pb = PauliString::new(vec![b], Phase::One).unwrap();
                let prod = pa.mul(&pb).unwrap();
                let dense = &pa.matrix() * &pb.matrix();
                assert!(prod.matrix().frob_dist(&dense) == 0.0, "{a:?}·{b:?}");
            }
        }
    }

    #[test]
    #[allow(clippy::approx_constant)] // regression against a value published at 6 digits
    fn expand_matches_printed_y_rotation_coefficient() {
        // exp(i·0.392699·σ2⊗σ0) has i·log expansion {YI: −0.392699}.
        let gen = PauliString::from_word("YI")
            .unwrap()
            .matrix()
            .scale(c64(0.0, 0.392699));
        let f2 = crate::mat::normal_exp(&gen).unwrap();
        let ilog = unitary_log(&f2).unwrap().scale(c64(0.0, 1.0));
        let c = expand_generator(&ilog.hermitize()).unwrap();
        assert!((c.get("YI") + 0.392699).abs() < 1e-4);
        assert!(c.mass_outside(&[]) - c.get("YI").abs() < 1e-10);
    }

    #[test]
    fn support_subset_patterns() {
        let mut c = PauliCoeffs::new(2);
        c.set("YI", -0.39);
        assert!(c.support_subset(&["Y*"], 1e-8));
        c.set("XI", 0.1);
        assert!(!c.support_subset(&["Y*"], 1e-8));
        assert!(c.support_subset(&["Y*", "X*"], 1e-8));
        assert!(c.support_subset(&["Y*"], 0.2));
    }

    #[test]
    fn orthogonality_table_n2() {
        // Tr(P_a · P_b) = 2^n δ_ab, exhaustively at n = 2.
        let words: Vec<String> = ["I", "X", "Y", "Z"]
            .iter()
            .flat_map(|a| ["I", "X", "Y", "Z"].iter().map(move |b| format!("{a}{b}")))
            .collect();
        for a in &words {
            for b in &words {
                let pa = PauliString::from_word(a).unwrap();
                let pb = PauliString::from_word(b).unwrap();
                let tr = (&pa.matrix() * &pb.matrix()).trace();
                let want = if a == b { 4.0 } else { 0.0 };
                assert!(
                    (tr.re - want).abs() < 1e-14 && tr.im.abs() < 1e-14,
                    "{a} {b}"
                );
            }
        }
    }

    #[test]
    fn weight_subadditive_under_mul() {
        let a = PauliString::from_word("XYZI").unwrap();
        let b = PauliString::from_word("IYZX").unwrap();
        let p = a.mul(&b).unwrap();
        assert!(p.weight() <= a.weight() + b.weight());
    }
}
