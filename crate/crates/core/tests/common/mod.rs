//! Independent oracles shared by the integration targets.
#![allow(dead_code)]

use gmbqc::bitlinalg::BitVector;
use gmbqc::obsset::{ModuleV, ObservableSet};
use gmbqc::pauli::{self, Circuit, Letter, PauliObservable, SingleQubitGate};
use gmbqc::symgroup::GroupAction;
use rand::Rng;

/// Commuting pairs `(a, b)` whose product `±T_c` is in the set, found by
/// direct Pauli multiplication: `T_a T_b = (−1)^β T_c`.
pub fn scanned_triples(set: &ObservableSet) -> Vec<(usize, usize, usize, bool)> {
    let obs = set.observables();
    let mut out = Vec::new();
    for a in 0..obs.len() {
        for b in a + 1..obs.len() {
            if !pauli::commutes(&obs[a], &obs[b]).unwrap() {
                continue;
            }
            let (phase, product) = pauli::multiply(&obs[a], &obs[b]).unwrap();
            let product = if phase.sign_bit() == Some(1) { product.negated() } else { product };
            for (c, t) in obs.iter().enumerate() {
                if t.unsigned() == product.unsigned() {
                    out.push((a, b, c, t.is_negative() != product.is_negative()));
                }
            }
        }
    }
    out
}

/// Every element of `V` respects every scanned product relation.
pub fn products_preserved(set: &ObservableSet, module: &ModuleV) -> bool {
    let triples = scanned_triples(set);
    module
        .elements()
        .unwrap()
        .iter()
        .all(|v| triples.iter().all(|&(a, b, c, _)| v.get(a) ^ v.get(b) == v.get(c)))
}

/// `β(ga, gb) = β(a, b) + σ_g(a) + σ_g(b) + σ_g(c)`; for sign-free elements
/// this is plain invariance.
pub fn beta_covariant(set: &ObservableSet, action: &GroupAction) -> bool {
    let triples = scanned_triples(set);
    let beta_of = |a: usize, b: usize, c: usize| {
        let (x, y) = (a.min(b), a.max(b));
        triples.iter().find(|t| t.0 == x && t.1 == y && t.2 == c).map(|t| t.3)
    };
    action.elements().iter().all(|g| {
        triples.iter().all(|&(a, b, c, beta)| {
            let expected = beta ^ g.sign(a) ^ g.sign(b) ^ g.sign(c);
            beta_of(g.image(a), g.image(b), g.image(c)) == Some(expected)
        })
    })
}

/// `Σ_v (−1)^{v(a)+v(b)} = 0` for `a ≠ b`, summing over the explicit span.
pub fn characters_orthogonal(module: &ModuleV) -> bool {
    let mut span = vec![BitVector::zeros(module.len())];
    for b in module.basis() {
        let shifted: Vec<BitVector> = span.iter().map(|v| v.xor(b)).collect();
        span.extend(shifted);
    }
    (0..module.len()).all(|a| {
        (a + 1..module.len()).all(|b| span.iter().map(|v| if v.get(a) ^ v.get(b) { -1i64 } else { 1 }).sum::<i64>() == 0)
    })
}

pub const GATES: [SingleQubitGate; 6] =
    [SingleQubitGate::X, SingleQubitGate::Y, SingleQubitGate::Z, SingleQubitGate::H, SingleQubitGate::S, SingleQubitGate::A];

pub fn random_circuit<R: Rng>(rng: &mut R, n: usize, len: usize) -> Circuit {
    (0..len).map(|_| (GATES[rng.gen_range(0..GATES.len())], rng.gen_range(0..n))).collect()
}

pub fn random_pauli<R: Rng>(rng: &mut R, n: usize) -> PauliObservable {
    let letters = (0..n).map(|_| [Letter::I, Letter::X, Letter::Y, Letter::Z][rng.gen_range(0..4)]).collect();
    PauliObservable::new(letters, rng.gen())
}

/// Symbolic conjugation agrees with `U P U†` and commutation is preserved.
pub fn conjugation_agrees(circuit: &Circuit, p: &PauliObservable, q: &PauliObservable) -> bool {
    let n = p.n_qubits();
    let u = pauli::circuit_unitary(n, circuit).unwrap();
    let cp = pauli::conjugate(p, circuit).unwrap();
    let cq = pauli::conjugate(q, circuit).unwrap();
    let dense = &u * pauli::to_matrix(p).unwrap() * u.adjoint();
    pauli::max_abs_diff(&dense, &pauli::to_matrix(&cp).unwrap()) < 1e-9
        && pauli::commutes(p, q).unwrap() == pauli::commutes(&cp, &cq).unwrap()
}
