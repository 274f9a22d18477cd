//! Dense state vectors, G-MBQC instances, sampling, and the embedding of
//! temporally flat standard MBQC.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::bitlinalg::{BitMatrix, BitVector};
use crate::error::{Error, Result};
use crate::obsset::{ModuleV, ObservableSet};
use crate::pauli::{self, CMatrix, Circuit, Letter, PauliObservable, SingleQubitGate};
use crate::phasefn::{self, PhaseFunction, TOLERANCE};
use crate::symgroup::{action_from_circuit, FiniteGroup, GroupAction};

/// Largest register held as a dense state vector.
pub const MAX_STATE_QUBITS: usize = 16;

/// Largest register for the exhaustive stabilizer scan.
pub const MAX_STABILIZER_SCAN_QUBITS: usize = 8;

fn check_qubits(n: usize, limit: usize, what: &str) -> Result<()> {
    if n > limit {
        return Err(Error::SizeGuard { what: what.into(), size: n as u128, limit: limit as u128 });
    }
    Ok(())
}

/// A normalized pure state on `n` qubits; qubit 0 is the most significant bit.
#[derive(Clone, Debug, PartialEq)]
pub struct QuantumState {
    n_qubits: usize,
    amplitudes: Vec<Complex64>,
}

impl QuantumState {
    pub fn new(amplitudes: Vec<Complex64>) -> Result<Self> {
        let len = amplitudes.len();
        if len == 0 || !len.is_power_of_two() {
            return Err(Error::InvalidState(format!("{len} amplitudes is not a power of two")));
        }
        let n_qubits = len.trailing_zeros() as usize;
        check_qubits(n_qubits, MAX_STATE_QUBITS, "state qubit count")?;
        let norm: f64 = amplitudes.iter().map(|c| c.norm_sqr()).sum();
        if (norm - 1.0).abs() > TOLERANCE {
            return Err(Error::InvalidState(format!("norm² = {norm}")));
        }
        Ok(QuantumState { n_qubits, amplitudes })
    }

    /// Normalizes `amplitudes` first. Vectors already unit to rounding are
    /// kept bit for bit so that serialized states reload exactly.
    pub fn normalized(amplitudes: Vec<Complex64>) -> Result<Self> {
        let norm = amplitudes.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        if norm < TOLERANCE {
            return Err(Error::InvalidState("zero vector".into()));
        }
        if (norm - 1.0).abs() < 1e-12 {
            return Self::new(amplitudes);
        }
        Self::new(amplitudes.into_iter().map(|c| c / norm).collect())
    }

    pub fn basis(n_qubits: usize, index: usize) -> Result<Self> {
        check_qubits(n_qubits, MAX_STATE_QUBITS, "state qubit count")?;
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n_qubits];
        *amps.get_mut(index).ok_or(Error::IndexOutOfRange { index, limit: 1 << n_qubits })? = Complex64::new(1.0, 0.0);
        Self::new(amps)
    }

    /// `|+⟩^{⊗n}`.
    pub fn plus(n_qubits: usize) -> Result<Self> {
        check_qubits(n_qubits, MAX_STATE_QUBITS, "state qubit count")?;
        let dim = 1usize << n_qubits;
        Self::new(vec![Complex64::new(1.0 / (dim as f64).sqrt(), 0.0); dim])
    }

    /// The state fixed by commuting stabilizer generators of rank `n`;
    /// redundant generators are allowed but must have consistent signs.
    pub fn from_stabilizers(generators: &[PauliObservable]) -> Result<Self> {
        let n = generators.first().ok_or_else(|| Error::NotStabilizer("no generators".into()))?.n_qubits();
        check_qubits(n, MAX_STATE_QUBITS, "state qubit count")?;
        let mut symplectic = Vec::with_capacity(n);
        for (i, p) in generators.iter().enumerate() {
            if p.n_qubits() != n {
                return Err(Error::DimensionMismatch { context: "stabilizer qubit count", expected: n, found: p.n_qubits() });
            }
            for q in &generators[..i] {
                if !pauli::commutes(p, q)? {
                    return Err(Error::NotStabilizer(format!("{q} and {p} anticommute")));
                }
            }
            symplectic.push(BitVector::from_bools(p.letters().iter().flat_map(|l| [l.has_x(), l.has_z()])));
        }
        if BitMatrix::from_rows(2 * n, symplectic)?.rank() != n {
            return Err(Error::NotStabilizer("generators are dependent".into()));
        }
        let dim = 1usize << n;
        for j in 0..dim {
            let mut v = vec![Complex64::new(0.0, 0.0); dim];
            v[j] = Complex64::new(1.0, 0.0);
            for p in generators {
                let pv = apply_pauli(p, &v);
                v.iter_mut().zip(pv).for_each(|(x, y)| *x = (*x + y) * 0.5);
            }
            if v.iter().map(|c| c.norm_sqr()).sum::<f64>() > 1e-6 {
                return Self::normalized(v);
            }
        }
        Err(Error::NotStabilizer("generators admit no common +1 eigenvector".into()))
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn tensor(&self, other: &QuantumState) -> Result<QuantumState> {
        check_qubits(self.n_qubits + other.n_qubits, MAX_STATE_QUBITS, "state qubit count")?;
        let amps = self.amplitudes.iter().flat_map(|a| other.amplitudes.iter().map(move |b| a * b)).collect();
        Self::new(amps)
    }

    fn check_pauli(&self, p: &PauliObservable) -> Result<()> {
        if p.n_qubits() != self.n_qubits {
            return Err(Error::DimensionMismatch { context: "observable vs state", expected: self.n_qubits, found: p.n_qubits() });
        }
        Ok(())
    }

    /// `⟨ψ|P|ψ⟩` without building a matrix.
    pub fn expectation(&self, p: &PauliObservable) -> Result<f64> {
        self.check_pauli(p)?;
        let pv = apply_pauli(p, &self.amplitudes);
        let value: Complex64 = self.amplitudes.iter().zip(&pv).map(|(a, b)| a.conj() * b).sum();
        Ok(value.re)
    }

    pub fn expectation_dense(&self, m: &CMatrix) -> Result<f64> {
        let dim = self.amplitudes.len();
        if m.nrows() != dim || m.ncols() != dim {
            return Err(Error::DimensionMismatch { context: "dense observable", expected: dim, found: m.nrows() });
        }
        let psi = nalgebra::DVector::from_column_slice(&self.amplitudes);
        Ok((psi.adjoint() * m * &psi)[(0, 0)].re)
    }

    /// `Ξ(a) = ⟨T_a⟩` for every member of the set.
    pub fn characteristic(&self, set: &ObservableSet) -> Result<Vec<f64>> {
        set.observables().iter().map(|p| self.expectation(p)).collect()
    }

    /// Measures `p`, returning the outcome bit and the post-measurement state.
    pub fn measure<R: Rng>(&self, p: &PauliObservable, rng: &mut R) -> Result<(u8, QuantumState)> {
        let exp = self.expectation(p)?;
        let p0 = ((1.0 + exp) / 2.0).clamp(0.0, 1.0);
        let outcome = if rng.gen::<f64>() < p0 { 0u8 } else { 1u8 };
        let sign = if outcome == 0 { 1.0 } else { -1.0 };
        let pv = apply_pauli(p, &self.amplitudes);
        let projected = self.amplitudes.iter().zip(pv).map(|(a, b)| (a + b * sign) * 0.5).collect();
        Ok((outcome, Self::normalized(projected)?))
    }

    pub fn measure_dense<R: Rng>(&self, m: &CMatrix, rng: &mut R) -> Result<(u8, QuantumState)> {
        let exp = self.expectation_dense(m)?;
        let p0 = ((1.0 + exp) / 2.0).clamp(0.0, 1.0);
        let outcome = if rng.gen::<f64>() < p0 { 0u8 } else { 1u8 };
        let sign = if outcome == 0 { 1.0 } else { -1.0 };
        let psi = nalgebra::DVector::from_column_slice(&self.amplitudes);
        let mpsi = m * &psi;
        let projected = psi.iter().zip(mpsi.iter()).map(|(a, b)| (a + b * sign) * 0.5).collect();
        Ok((outcome, Self::normalized(projected)?))
    }

    /// Exhaustive scan for `±P` with `⟨P⟩ = ±1`; returns the signed stabilizers
    /// (including `+I`) or an error if they do not number `2ⁿ`.
    pub fn stabilizer_group(&self) -> Result<Vec<PauliObservable>> {
        let n = self.n_qubits;
        check_qubits(n, MAX_STABILIZER_SCAN_QUBITS, "stabilizer scan qubit count")?;
        let letters = [Letter::I, Letter::X, Letter::Y, Letter::Z];
        let mut found = Vec::new();
        for code in 0..1usize << (2 * n) {
            let word = (0..n).map(|q| letters[(code >> (2 * (n - 1 - q))) & 3]).collect();
            let p = PauliObservable::new(word, false);
            let e = self.expectation(&p)?;
            if (e.abs() - 1.0).abs() < 1e-9 {
                found.push(p.with_sign(e < 0.0));
            }
        }
        if found.len() != 1 << n {
            return Err(Error::NotStabilizer(format!("{} stabilizing Paulis, expected {}", found.len(), 1 << n)));
        }
        Ok(found)
    }
}

/// `P|ψ⟩` for a signed Pauli string.
pub fn apply_pauli(p: &PauliObservable, amplitudes: &[Complex64]) -> Vec<Complex64> {
    let (x, z) = p.masks();
    let base = pauli::Phase::from_power((p.y_count() % 4) as u8 + 2 * p.sign_bit()).to_complex();
    let mut out = vec![Complex64::new(0.0, 0.0); amplitudes.len()];
    for (j, &a) in amplitudes.iter().enumerate() {
        let odd = (j & z).count_ones() % 2 == 1;
        out[j ^ x] = if odd { -base * a } else { base * a };
    }
    out
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IdealOutput {
    pub bit: u8,
    pub expectation: f64,
    pub success_prob: f64,
    /// `⟨T(g)⟩ = 0`, so the output bit was chosen by convention.
    pub degenerate: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RunResult {
    /// `(index, outcome)` for every context member in measurement order.
    pub outcomes: Vec<(usize, u8)>,
    pub output: u8,
}

#[derive(Clone, Debug, Serialize)]
pub struct Lemma2Report {
    pub stabilizer_count: usize,
    pub uniform_success: bool,
    /// Qubits with a weight-1 stabilizer, i.e. in a product state with the rest.
    pub disentangled_qubits: Vec<usize>,
    /// Whether some stabilizer restricts to `Z` on each qubit.
    pub z_restriction: Vec<bool>,
    pub preconditions_hold: bool,
    /// Whether some phase function satisfies the symmetry constraint.
    pub symmetry_holds: bool,
}

/// A G-MBQC: observable set, input group, reference context and resource.
#[derive(Clone, Debug)]
pub struct MbqcInstance {
    pub name: String,
    set: ObservableSet,
    action: GroupAction,
    reference_context: Vec<usize>,
    b_e: usize,
    state: QuantumState,
}

impl MbqcInstance {
    /// Validates the instance and declares the product relation of every
    /// context `C(g)` with `T(g)`.
    pub fn new(
        name: impl Into<String>,
        set: ObservableSet,
        action: GroupAction,
        reference_context: Vec<usize>,
        b_e: usize,
        state: QuantumState,
    ) -> Result<Self> {
        let invalid = |msg: String| Error::InvalidInstance(msg);
        let mut context = reference_context;
        context.sort_unstable();
        context.dedup();
        if context.is_empty() {
            return Err(invalid("empty reference context".into()));
        }
        for &a in &context {
            if a >= set.len() {
                return Err(Error::IndexOutOfRange { index: a, limit: set.len() });
            }
            if !set.is_measurable(a) {
                return Err(invalid(format!("reference context member {} is not measurable", set.observable(a))));
            }
        }
        if b_e >= set.len() || !set.is_output(b_e) {
            return Err(Error::NotOutputIndex(b_e));
        }
        let mut product = PauliObservable::identity(set.n_qubits());
        let mut phase = pauli::Phase::ONE;
        for (i, &a) in context.iter().enumerate() {
            for &b in &context[..i] {
                if !pauli::commutes(set.observable(a), set.observable(b))? {
                    return Err(invalid(format!("{} and {} do not commute", set.observable(b), set.observable(a))));
                }
            }
            let (ph, r) = pauli::multiply(&product, set.observable(a))?;
            phase = phase.mul(ph);
            product = r;
        }
        let negative = phase.sign_bit().expect("commuting product is real") == 1;
        if product.with_sign(negative) != *set.observable(b_e) {
            return Err(invalid(format!(
                "product of the reference context is {}, not {}",
                product.with_sign(negative),
                set.observable(b_e)
            )));
        }
        if state.n_qubits() != set.n_qubits() {
            return Err(Error::DimensionMismatch { context: "state qubit count", expected: set.n_qubits(), found: state.n_qubits() });
        }
        if let Some((element, index)) = action.sign_violation() {
            return Err(Error::NotInputGroup { element, index });
        }
        if action.elements().first().map(|e| e.len()) != Some(set.len()) {
            return Err(invalid("group action does not match the observable set".into()));
        }
        let relations: Vec<Vec<usize>> = action
            .elements()
            .iter()
            .map(|h| context.iter().map(|&a| h.image(a)).chain([h.image(b_e)]).collect::<Vec<_>>())
            // A one-member context whose observable is T(g) itself adds nothing.
            .filter(|r| !r[..r.len() - 1].contains(&r[r.len() - 1]))
            .collect();
        let set = set.with_relations(relations)?;
        Ok(MbqcInstance { name: name.into(), set, action, reference_context: context, b_e, state })
    }

    pub fn set(&self) -> &ObservableSet {
        &self.set
    }

    pub fn action(&self) -> &GroupAction {
        &self.action
    }

    pub fn group(&self) -> &FiniteGroup {
        self.action.group()
    }

    pub fn reference_context(&self) -> &[usize] {
        &self.reference_context
    }

    pub fn b_e(&self) -> usize {
        self.b_e
    }

    pub fn state(&self) -> &QuantumState {
        &self.state
    }

    pub fn module(&self) -> ModuleV {
        self.set.compute_v()
    }

    /// `C(g)`, in ascending index order.
    pub fn context(&self, g: usize) -> Vec<usize> {
        let h = self.action.element(g);
        let mut c: Vec<usize> = self.reference_context.iter().map(|&a| h.image(a)).collect();
        c.sort_unstable();
        c
    }

    /// Index of `T(g)`.
    pub fn output_index(&self, g: usize) -> usize {
        self.action.element(g).image(self.b_e)
    }

    pub fn characteristic(&self) -> Result<Vec<f64>> {
        self.state.characteristic(&self.set)
    }

    /// Measures `C(g)` sequentially in ascending index order.
    pub fn run(&self, g: usize, seed: u64) -> Result<RunResult> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        self.run_with(g, &mut rng)
    }

    pub fn run_with<R: Rng>(&self, g: usize, rng: &mut R) -> Result<RunResult> {
        let mut state = self.state.clone();
        let mut outcomes = Vec::new();
        let mut output = 0;
        for a in self.context(g) {
            let (bit, next) = state.measure(self.set.observable(a), rng)?;
            outcomes.push((a, bit));
            output ^= bit;
            state = next;
        }
        Ok(RunResult { outcomes, output })
    }

    /// Output bits of `shots` runs from one seeded stream.
    pub fn sample(&self, g: usize, shots: usize, seed: u64) -> Result<Vec<u8>> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..shots).map(|_| self.run_with(g, &mut rng).map(|r| r.output)).collect()
    }

    pub fn ideal_output(&self, g: usize) -> Result<IdealOutput> {
        let expectation = self.state.expectation(self.set.observable(self.output_index(g)))?;
        Ok(ideal_from_expectation(expectation))
    }

    pub fn ideal_outputs(&self) -> Result<Vec<IdealOutput>> {
        (0..self.action.order()).map(|g| self.ideal_output(g)).collect()
    }

    /// `W(o) = Σ_g (1 + (−1)^{o(g)} ⟨T(g)⟩)/2`.
    pub fn witness(&self, o: &[u8]) -> Result<f64> {
        if o.len() != self.action.order() {
            return Err(Error::DimensionMismatch { context: "output function", expected: self.action.order(), found: o.len() });
        }
        let mut w = 0.0;
        for (g, &bit) in o.iter().enumerate() {
            let t = self.state.expectation(self.set.observable(self.output_index(g)))?;
            w += (1.0 + if bit == 0 { t } else { -t }) / 2.0;
        }
        Ok(w)
    }

    /// `Ξ(ga) = (−1)^{Φ_g(a)} Ξ(a)` for all `g, a`.
    pub fn check_symmetry(&self, phi: &PhaseFunction) -> Result<bool> {
        let xi = self.characteristic()?;
        Ok(check_symmetry_of(&xi, &self.action, phi))
    }

    pub fn check_lemma2_preconditions(&self) -> Result<Lemma2Report> {
        let stabilizers = self.state.stabilizer_group()?;
        let n = self.state.n_qubits();
        let disentangled_qubits = (0..n)
            .filter(|&k| stabilizers.iter().any(|s| s.weight() == 1 && s.letter(k) != Letter::I))
            .collect::<Vec<_>>();
        let z_restriction = (0..n).map(|k| stabilizers.iter().any(|s| s.letter(k) == Letter::Z)).collect();
        let ideal = self.ideal_outputs()?;
        let uniform_success = ideal.iter().all(|o| (o.success_prob - ideal[0].success_prob).abs() < TOLERANCE);
        let xi = self.characteristic()?;
        let symmetry_holds = match phasefn::symmetry_solutions(&self.module(), &self.action, &xi) {
            Ok(family) => family.is_some(),
            Err(Error::NotSymmetric { .. }) => false,
            Err(e) => return Err(e),
        };
        Ok(Lemma2Report {
            stabilizer_count: stabilizers.len(),
            uniform_success,
            preconditions_hold: uniform_success && disentangled_qubits.is_empty(),
            disentangled_qubits,
            z_restriction,
            symmetry_holds,
        })
    }
}

pub fn ideal_from_expectation(expectation: f64) -> IdealOutput {
    let degenerate = expectation.abs() <= TOLERANCE;
    IdealOutput {
        bit: if expectation < 0.0 && !degenerate { 1 } else { 0 },
        expectation,
        success_prob: (1.0 + expectation.abs()) / 2.0,
        degenerate,
    }
}

pub fn check_symmetry_of(xi: &[f64], action: &GroupAction, phi: &PhaseFunction) -> bool {
    (0..action.order()).all(|g| {
        let h = action.element(g);
        (0..xi.len()).all(|a| {
            let sign = if phi.get(g, a) { -1.0 } else { 1.0 };
            (xi[h.image(a)] - sign * xi[a]).abs() <= TOLERANCE
        })
    })
}

/// Temporally flat standard MBQC: qubit `k` measures
/// `O_k[q] = cos φ X + (−1)^q sin φ Y` with flags `q = Q·i mod 2`.
#[derive(Clone, Debug)]
pub struct StandardMbqc {
    wiring: BitMatrix,
    phi: f64,
    resource: QuantumState,
}

impl StandardMbqc {
    pub fn new(wiring: BitMatrix, phi: f64, resource: QuantumState) -> Result<Self> {
        if wiring.nrows() != resource.n_qubits() {
            return Err(Error::DimensionMismatch {
                context: "wiring rows vs qubits",
                expected: resource.n_qubits(),
                found: wiring.nrows(),
            });
        }
        if wiring.ncols() > 16 {
            return Err(Error::SizeGuard { what: "input bits".into(), size: wiring.ncols() as u128, limit: 16 });
        }
        Ok(StandardMbqc { wiring, phi, resource })
    }

    pub fn n_inputs(&self) -> usize {
        self.wiring.ncols()
    }

    pub fn n_qubits(&self) -> usize {
        self.wiring.nrows()
    }

    /// Input bits of group element `g` of `ℤ₂^m`; bit 0 is the most significant.
    pub fn input_bits(&self, g: usize) -> BitVector {
        let m = self.n_inputs();
        BitVector::from_bools((0..m).map(|j| g >> (m - 1 - j) & 1 == 1))
    }

    pub fn flags(&self, g: usize) -> BitVector {
        self.wiring.mul_vec(&self.input_bits(g)).expect("wiring width matches")
    }

    /// Dense `O_k[q]` on the full register.
    pub fn observable(&self, k: usize, q: bool) -> Result<CMatrix> {
        let (c, s) = (self.phi.cos(), if q { -self.phi.sin() } else { self.phi.sin() });
        let x = Letter::X.matrix();
        let y = Letter::Y.matrix();
        let m = [[x[0][0] * c + y[0][0] * s, x[0][1] * c + y[0][1] * s], [x[1][0] * c + y[1][0] * s, x[1][1] * c + y[1][1] * s]];
        pauli::embed_single(self.n_qubits(), k, &m)
    }

    /// `⟨T(g)⟩` with `T(g) = Π_k O_k[q_k(g)]`.
    pub fn output_expectation(&self, g: usize) -> Result<f64> {
        let flags = self.flags(g);
        let dim = 1 << self.n_qubits();
        let mut t = CMatrix::identity(dim, dim);
        for k in 0..self.n_qubits() {
            t *= self.observable(k, flags.get(k))?;
        }
        self.resource.expectation_dense(&t)
    }

    pub fn ideal_outputs(&self) -> Result<Vec<IdealOutput>> {
        (0..1usize << self.n_inputs()).map(|g| self.output_expectation(g).map(ideal_from_expectation)).collect()
    }

    /// Output parities of `shots` sequential dense measurements.
    pub fn sample(&self, g: usize, shots: usize, seed: u64) -> Result<Vec<u8>> {
        let flags = self.flags(g);
        let observables = (0..self.n_qubits()).map(|k| self.observable(k, flags.get(k))).collect::<Result<Vec<_>>>()?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..shots)
            .map(|_| {
                let mut state = self.resource.clone();
                let mut out = 0;
                for m in &observables {
                    let (bit, next) = state.measure_dense(m, &mut rng)?;
                    out ^= bit;
                    state = next;
                }
                Ok(out)
            })
            .collect()
    }

    /// The G-MBQC in the frame rotated by `R_z(−φ)` on every qubit, where
    /// `O_k[0] ↦ X_k`. Available when `O_k[1]` then becomes a signed Pauli
    /// distinct from `±X_k`.
    pub fn to_instance(&self, name: impl Into<String>) -> Result<MbqcInstance> {
        let n = self.n_qubits();
        let m = self.n_inputs();
        // O_k[1] ↦ cos 2φ X − sin 2φ Y; the generator swaps X with it.
        let turns = (2.0 * self.phi / (PI / 2.0)).round();
        if (2.0 * self.phi - turns * PI / 2.0).abs() > 1e-9 {
            return Err(Error::InvalidInstance(format!(
                "angle {} gives non-Pauli observables; use the dense methods",
                self.phi
            )));
        }
        let (second, gate_circuit): (PauliObservable, fn(usize) -> Circuit) = match turns.rem_euclid(4.0) as u8 {
            0 => (PauliObservable::single(1, 0, Letter::X), |_| Vec::new()),
            1 => (pauli::pauli("-Y"), |k| vec![(SingleQubitGate::A, k), (SingleQubitGate::Z, k)]),
            3 => (pauli::pauli("+Y"), |k| vec![(SingleQubitGate::A, k)]),
            _ => {
                return Err(Error::PlusMinusPair(format!(
                    "O[1] = −O[0] at angle {}; the set would hold both signs",
                    self.phi
                )))
            }
        };
        let mut observables = vec![PauliObservable::identity(n)];
        let mut measurable = Vec::new();
        let mut slots = Vec::with_capacity(n);
        for k in 0..n {
            let first = PauliObservable::single(n, k, Letter::X);
            let second = PauliObservable::single(n, k, second.letter(0)).with_sign(second.is_negative());
            let mut slot = [0; 2];
            for (j, p) in [first, second].into_iter().enumerate() {
                slot[j] = match observables.iter().position(|q| *q == p) {
                    Some(i) => i,
                    None => {
                        measurable.push(observables.len());
                        observables.push(p);
                        observables.len() - 1
                    }
                };
            }
            slots.push(slot);
        }
        let group = FiniteGroup::parse_spec(&vec!["Z2"; m.max(1)].join("x"))?;
        let group = if m == 0 { FiniteGroup::trivial() } else { group };
        let circuits: Vec<Circuit> = (0..m)
            .map(|j| {
                let column = self.wiring.column(j);
                column.ones().flat_map(gate_circuit).collect()
            })
            .collect();
        let mut outputs = Vec::new();
        for g in 0..group.order() {
            let flags = self.flags(g);
            let mut product = PauliObservable::identity(n);
            let mut phase = pauli::Phase::ONE;
            for k in 0..n {
                let o = &observables[slots[k][flags.get(k) as usize]];
                let (ph, r) = pauli::multiply(&product, o)?;
                phase = phase.mul(ph);
                product = r;
            }
            let t = product.with_sign(phase.sign_bit() == Some(1));
            if let Some(i) = observables.iter().position(|p| *p == t) {
                if !outputs.contains(&i) {
                    outputs.push(i);
                }
            } else {
                outputs.push(observables.len());
                observables.push(t);
            }
        }
        let b_e = outputs[0];
        let (set, map) = ObservableSet::build_with_map(observables, &measurable, &outputs)?;
        let generator_actions = circuits.iter().map(|c| action_from_circuit(&set, c)).collect::<Result<Vec<_>>>()?;
        let mut action = GroupAction::from_group(group, generator_actions, Some(circuits), set.len())?;
        let names = (0..action.order())
            .map(|g| self.input_bits(g).to_string())
            .map(|s| if s.is_empty() { "e".to_string() } else { s })
            .collect();
        action.group_mut().set_names(names);
        let reference = slots.iter().map(|slot| map[slot[0]]).collect();
        MbqcInstance::new(name, set, action, reference, map[b_e], self.frame_state()?)
    }

    /// Resource state in the rotated frame, `⊗R_z(−φ)|ψ⟩`.
    pub fn frame_state(&self) -> Result<QuantumState> {
        QuantumState::normalized(rotate_z(&self.resource, -self.phi).amplitudes)
    }
}

/// `⊗_k R_z(θ)` with `R_z(θ) = diag(e^{−iθ/2}, e^{iθ/2})`.
pub fn rotate_z(state: &QuantumState, theta: f64) -> QuantumState {
    let n = state.n_qubits();
    let amplitudes = state
        .amplitudes
        .iter()
        .enumerate()
        .map(|(j, &a)| {
            let ones = j.count_ones() as f64;
            let zeros = n as f64 - ones;
            a * Complex64::from_polar(1.0, theta / 2.0 * (ones - zeros))
        })
        .collect();
    QuantumState { n_qubits: n, amplitudes }
}
