//! Signed multi-qubit Pauli observables.
//!
//! A [`PauliObservable`] is `±σ₀⊗σ₁⊗…`, so it is always Hermitian with
//! eigenvalues ±1. Products of two observables may carry a phase `±i`; that
//! phase is returned separately by [`multiply`] and never stored.
//!
//! Qubit 0 is the leftmost tensor factor, i.e. the most significant bit of a
//! computational basis index.

use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;

/// Largest register for which dense matrices are produced.
pub const MAX_DENSE_QUBITS: usize = 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Letter {
    I,
    X,
    Y,
    Z,
}

impl Letter {
    pub fn has_x(self) -> bool {
        matches!(self, Letter::X | Letter::Y)
    }

    pub fn has_z(self) -> bool {
        matches!(self, Letter::Z | Letter::Y)
    }

    fn from_char(c: char) -> Option<Letter> {
        match c {
            'I' => Some(Letter::I),
            'X' => Some(Letter::X),
            'Y' => Some(Letter::Y),
            'Z' => Some(Letter::Z),
            _ => None,
        }
    }

    fn as_char(self) -> char {
        match self {
            Letter::I => 'I',
            Letter::X => 'X',
            Letter::Y => 'Y',
            Letter::Z => 'Z',
        }
    }

    /// `self · other = i^k · result`.
    fn product(self, other: Letter) -> (u8, Letter) {
        use Letter::*;
        match (self, other) {
            (I, p) | (p, I) => (0, p),
            (a, b) if a == b => (0, I),
            (X, Y) => (1, Z),
            (Y, Z) => (1, X),
            (Z, X) => (1, Y),
            (Y, X) => (3, Z),
            (Z, Y) => (3, X),
            (X, Z) => (3, Y),
            _ => unreachable!(),
        }
    }

    pub fn matrix(self) -> [[Complex64; 2]; 2] {
        let o = Complex64::new(0.0, 0.0);
        let l = Complex64::new(1.0, 0.0);
        let i = Complex64::new(0.0, 1.0);
        match self {
            Letter::I => [[l, o], [o, l]],
            Letter::X => [[o, l], [l, o]],
            Letter::Y => [[o, -i], [i, o]],
            Letter::Z => [[l, o], [o, -l]],
        }
    }
}

/// Power of `i`, stored mod 4.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Phase(u8);

impl Phase {
    pub const ONE: Phase = Phase(0);
    pub const I: Phase = Phase(1);
    pub const MINUS_ONE: Phase = Phase(2);
    pub const MINUS_I: Phase = Phase(3);

    pub fn from_power(k: u8) -> Phase {
        Phase(k % 4)
    }

    pub fn power(self) -> u8 {
        self.0
    }

    pub fn is_real(self) -> bool {
        self.0.is_multiple_of(2)
    }

    /// For a real phase, 1 if it is −1.
    pub fn sign_bit(self) -> Option<u8> {
        self.is_real().then_some(self.0 / 2)
    }

    pub fn mul(self, other: Phase) -> Phase {
        Phase((self.0 + other.0) % 4)
    }

    pub fn to_complex(self) -> Complex64 {
        match self.0 {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        }
    }
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PauliObservable {
    letters: Vec<Letter>,
    negative: bool,
}

impl PauliObservable {
    pub fn new(letters: Vec<Letter>, negative: bool) -> Self {
        Self { letters, negative }
    }

    pub fn identity(n_qubits: usize) -> Self {
        Self { letters: vec![Letter::I; n_qubits], negative: false }
    }

    /// Single-letter observable `letter` on `qubit` of an `n`-qubit register.
    pub fn single(n_qubits: usize, qubit: usize, letter: Letter) -> Self {
        let mut p = Self::identity(n_qubits);
        p.letters[qubit] = letter;
        p
    }

    pub fn n_qubits(&self) -> usize {
        self.letters.len()
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn letter(&self, qubit: usize) -> Letter {
        self.letters[qubit]
    }

    pub fn is_negative(&self) -> bool {
        self.negative
    }

    pub fn sign_bit(&self) -> u8 {
        self.negative as u8
    }

    pub fn negated(&self) -> Self {
        Self { letters: self.letters.clone(), negative: !self.negative }
    }

    pub fn unsigned(&self) -> Self {
        Self { letters: self.letters.clone(), negative: false }
    }

    pub fn with_sign(&self, negative: bool) -> Self {
        Self { letters: self.letters.clone(), negative }
    }

    /// True for `±I`.
    pub fn is_identity_up_to_sign(&self) -> bool {
        self.letters.iter().all(|&l| l == Letter::I)
    }

    pub fn weight(&self) -> usize {
        self.letters.iter().filter(|&&l| l != Letter::I).count()
    }

    pub fn support(&self) -> Vec<usize> {
        (0..self.letters.len()).filter(|&q| self.letters[q] != Letter::I).collect()
    }

    /// X- and Z-support bit masks with qubit `k` at bit `n-1-k` (basis index order).
    pub(crate) fn masks(&self) -> (usize, usize) {
        let n = self.letters.len();
        let mut x = 0usize;
        let mut z = 0usize;
        for (k, &l) in self.letters.iter().enumerate() {
            let bit = 1usize << (n - 1 - k);
            if l.has_x() {
                x |= bit;
            }
            if l.has_z() {
                z |= bit;
            }
        }
        (x, z)
    }

    /// Number of Y letters; `Y = i·X·Z` contributes a factor `i` each.
    pub(crate) fn y_count(&self) -> usize {
        self.letters.iter().filter(|&&l| l == Letter::Y).count()
    }
}

fn check_sizes(p: &PauliObservable, q: &PauliObservable) -> Result<()> {
    if p.n_qubits() != q.n_qubits() {
        return Err(Error::DimensionMismatch {
            context: "Pauli qubit count",
            expected: p.n_qubits(),
            found: q.n_qubits(),
        });
    }
    Ok(())
}

/// `P·Q = phase·R` with `R` carrying a `+` sign.
pub fn multiply(p: &PauliObservable, q: &PauliObservable) -> Result<(Phase, PauliObservable)> {
    check_sizes(p, q)?;
    let mut power = 2 * (p.sign_bit() + q.sign_bit());
    let letters = p
        .letters
        .iter()
        .zip(&q.letters)
        .map(|(&a, &b)| {
            let (k, l) = a.product(b);
            power += k;
            l
        })
        .collect();
    Ok((Phase::from_power(power), PauliObservable::new(letters, false)))
}

/// Symplectic commutation test.
pub fn commutes(p: &PauliObservable, q: &PauliObservable) -> Result<bool> {
    check_sizes(p, q)?;
    let clashes = p
        .letters
        .iter()
        .zip(&q.letters)
        .filter(|(&a, &b)| a != Letter::I && b != Letter::I && a != b)
        .count();
    Ok(clashes % 2 == 0)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SingleQubitGate {
    X,
    Y,
    Z,
    H,
    S,
    /// `(X + Y)/√2`.
    A,
}

impl SingleQubitGate {
    /// `g·σ·g† = (−1)^neg · σ'` as `(neg, σ')`.
    pub fn conjugate_letter(self, letter: Letter) -> (bool, Letter) {
        use Letter as L;
        use SingleQubitGate as G;
        match (self, letter) {
            (_, L::I) => (false, L::I),
            (G::X, L::X) => (false, L::X),
            (G::X, l) => (true, l),
            (G::Y, L::Y) => (false, L::Y),
            (G::Y, l) => (true, l),
            (G::Z, L::Z) => (false, L::Z),
            (G::Z, l) => (true, l),
            (G::H, L::X) => (false, L::Z),
            (G::H, L::Z) => (false, L::X),
            (G::H, L::Y) => (true, L::Y),
            (G::S, L::X) => (false, L::Y),
            (G::S, L::Y) => (true, L::X),
            (G::S, L::Z) => (false, L::Z),
            (G::A, L::X) => (false, L::Y),
            (G::A, L::Y) => (false, L::X),
            (G::A, L::Z) => (true, L::Z),
        }
    }

    pub fn matrix(self) -> [[Complex64; 2]; 2] {
        let o = Complex64::new(0.0, 0.0);
        let l = Complex64::new(1.0, 0.0);
        let i = Complex64::new(0.0, 1.0);
        let r = std::f64::consts::FRAC_1_SQRT_2;
        match self {
            SingleQubitGate::X => Letter::X.matrix(),
            SingleQubitGate::Y => Letter::Y.matrix(),
            SingleQubitGate::Z => Letter::Z.matrix(),
            SingleQubitGate::H => [[l * r, l * r], [l * r, -l * r]],
            SingleQubitGate::S => [[l, o], [o, i]],
            SingleQubitGate::A => [[o, (l - i) * r], [(l + i) * r, o]],
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            SingleQubitGate::X => "X",
            SingleQubitGate::Y => "Y",
            SingleQubitGate::Z => "Z",
            SingleQubitGate::H => "H",
            SingleQubitGate::S => "S",
            SingleQubitGate::A => "A",
        }
    }
}

impl FromStr for SingleQubitGate {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "X" => Ok(SingleQubitGate::X),
            "Y" => Ok(SingleQubitGate::Y),
            "Z" => Ok(SingleQubitGate::Z),
            "H" => Ok(SingleQubitGate::H),
            "S" => Ok(SingleQubitGate::S),
            "A" => Ok(SingleQubitGate::A),
            other => Err(Error::InvalidInstance(format!("unknown gate {other:?}"))),
        }
    }
}

/// Gates applied in list order: the first entry acts first.
pub type Circuit = Vec<(SingleQubitGate, usize)>;

/// `u·P·u†` for the unitary `u` of `circuit`.
pub fn conjugate(p: &PauliObservable, circuit: &[(SingleQubitGate, usize)]) -> Result<PauliObservable> {
    let mut out = p.clone();
    for &(gate, qubit) in circuit {
        if qubit >= out.n_qubits() {
            return Err(Error::IndexOutOfRange { index: qubit, limit: out.n_qubits() });
        }
        let (neg, letter) = gate.conjugate_letter(out.letters[qubit]);
        out.letters[qubit] = letter;
        out.negative ^= neg;
    }
    Ok(out)
}

fn check_dense(n: usize) -> Result<()> {
    if n > MAX_DENSE_QUBITS {
        return Err(Error::SizeGuard {
            what: "dense matrix qubit count".into(),
            size: n as u128,
            limit: MAX_DENSE_QUBITS as u128,
        });
    }
    Ok(())
}

/// Dense `2ⁿ×2ⁿ` matrix of the observable.
pub fn to_matrix(p: &PauliObservable) -> Result<CMatrix> {
    let n = p.n_qubits();
    check_dense(n)?;
    let dim = 1usize << n;
    let (xmask, zmask) = p.masks();
    // P|j⟩ = (-1)^sign · i^{#Y} · (-1)^{|j ∧ z|} |j ⊕ x⟩
    let base = Phase::from_power((p.y_count() % 4) as u8 + 2 * p.sign_bit());
    let mut m = CMatrix::zeros(dim, dim);
    for j in 0..dim {
        let parity = (j & zmask).count_ones() % 2;
        let phase = if parity == 1 { base.mul(Phase::MINUS_ONE) } else { base };
        m[(j ^ xmask, j)] = phase.to_complex();
    }
    Ok(m)
}

/// Kronecker embedding of a 2×2 matrix acting on `qubit`.
pub fn embed_single(n: usize, qubit: usize, gate: &[[Complex64; 2]; 2]) -> Result<CMatrix> {
    check_dense(n)?;
    if qubit >= n {
        return Err(Error::IndexOutOfRange { index: qubit, limit: n });
    }
    let g = CMatrix::from_fn(2, 2, |r, c| gate[r][c]);
    let left = CMatrix::identity(1 << qubit, 1 << qubit);
    let right_dim = 1 << (n - qubit - 1);
    let right = CMatrix::identity(right_dim, right_dim);
    Ok(left.kronecker(&g).kronecker(&right))
}

/// Dense unitary of a circuit on `n` qubits.
pub fn circuit_unitary(n: usize, circuit: &[(SingleQubitGate, usize)]) -> Result<CMatrix> {
    check_dense(n)?;
    let dim = 1usize << n;
    let mut u = CMatrix::identity(dim, dim);
    for &(gate, qubit) in circuit {
        u = embed_single(n, qubit, &gate.matrix())? * u;
    }
    Ok(u)
}

impl fmt::Display for PauliObservable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(if self.negative { "-" } else { "+" })?;
        for l in &self.letters {
            write!(f, "{}", l.as_char())?;
        }
        Ok(())
    }
}

impl fmt::Debug for PauliObservable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl FromStr for PauliObservable {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (negative, body) = match s.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, s.strip_prefix('+').unwrap_or(s)),
        };
        if body.is_empty() {
            return Err(Error::ParsePauli(s.to_string()));
        }
        let letters = body
            .chars()
            .map(Letter::from_char)
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| Error::ParsePauli(s.to_string()))?;
        Ok(PauliObservable { letters, negative })
    }
}

impl Serialize for PauliObservable {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for PauliObservable {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Convenience parser used throughout tests and fixtures.
pub fn pauli(s: &str) -> PauliObservable {
    s.parse().unwrap_or_else(|e| panic!("{e}"))
}

/// Max-norm distance between two dense matrices.
pub fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}
