//! The indexed observable family Ω₊, its GF(2) constraint system and the
//! module V of relation-preserving sign flips.

use std::collections::HashMap;

use crate::bitlinalg::{BitMatrix, BitVector};
use crate::error::{Error, Result};
use crate::pauli::{self, Letter, PauliObservable};

/// Largest module dimension for which [`ModuleV::elements`] enumerates.
pub const MAX_ENUMERATED_DIM: usize = 24;

#[derive(Clone, Debug)]
pub struct ObservableSet {
    n_qubits: usize,
    observables: Vec<PauliObservable>,
    measurable: Vec<bool>,
    output: Vec<bool>,
    relations: Vec<Vec<usize>>,
    lookup: HashMap<Vec<Letter>, usize>,
}

impl ObservableSet {
    /// Validates and canonically reorders `observables`: identity first, then
    /// the measurable ones in the order given, then outputs, then the rest.
    pub fn build(observables: Vec<PauliObservable>, measurable: &[usize], outputs: &[usize]) -> Result<Self> {
        Self::build_with_map(observables, measurable, outputs).map(|(set, _)| set)
    }

    /// Like [`build`](Self::build), also returning the canonical index of each input entry.
    pub fn build_with_map(
        observables: Vec<PauliObservable>,
        measurable: &[usize],
        outputs: &[usize],
    ) -> Result<(Self, Vec<usize>)> {
        let n_qubits = observables.first().ok_or(Error::MissingIdentity)?.n_qubits();
        let mut lookup: HashMap<Vec<Letter>, usize> = HashMap::new();
        let mut identity = None;
        for (i, p) in observables.iter().enumerate() {
            if p.n_qubits() != n_qubits {
                return Err(Error::DimensionMismatch {
                    context: "observable qubit count",
                    expected: n_qubits,
                    found: p.n_qubits(),
                });
            }
            if let Some(&j) = lookup.get(p.letters()) {
                return Err(if observables[j] == *p {
                    Error::Duplicate(p.to_string())
                } else {
                    Error::PlusMinusPair(p.unsigned().to_string())
                });
            }
            lookup.insert(p.letters().to_vec(), i);
            if p.is_identity_up_to_sign() && !p.is_negative() {
                identity = Some(i);
            }
        }
        let identity = identity.ok_or(Error::MissingIdentity)?;
        for &i in measurable.iter().chain(outputs) {
            if i >= observables.len() {
                return Err(Error::IndexOutOfRange { index: i, limit: observables.len() });
            }
        }

        let mut order = vec![identity];
        let mut placed = vec![false; observables.len()];
        placed[identity] = true;
        let rest: Vec<usize> = (0..observables.len()).collect();
        for &i in measurable.iter().chain(outputs).chain(&rest) {
            if !placed[i] {
                placed[i] = true;
                order.push(i);
            }
        }
        let mut map = vec![0; observables.len()];
        for (canonical, &original) in order.iter().enumerate() {
            map[original] = canonical;
        }
        let mut is_measurable = vec![false; order.len()];
        let mut is_output = vec![false; order.len()];
        for &i in measurable {
            is_measurable[map[i]] = map[i] != 0;
        }
        for &i in outputs {
            is_output[map[i]] = map[i] != 0;
        }
        let canonical: Vec<PauliObservable> = order.iter().map(|&i| observables[i].clone()).collect();
        let lookup = canonical.iter().enumerate().map(|(i, p)| (p.letters().to_vec(), i)).collect();
        let set = ObservableSet {
            n_qubits,
            observables: canonical,
            measurable: is_measurable,
            output: is_output,
            relations: Vec::new(),
            lookup,
        };
        Ok((set, map))
    }

    /// Adds multi-factor product relations `Π T_a ∝ I` over commuting members.
    /// Relations already present (as sets) are ignored.
    pub fn with_relations(mut self, relations: impl IntoIterator<Item = Vec<usize>>) -> Result<Self> {
        for relation in relations {
            let mut members = relation.clone();
            members.sort_unstable();
            members.dedup();
            let invalid = |reason: &str| Error::InvalidRelation { members: relation.clone(), reason: reason.into() };
            if members.len() != relation.len() {
                return Err(invalid("repeated member"));
            }
            if members.len() < 2 {
                return Err(invalid("fewer than two members"));
            }
            if let Some(&bad) = members.iter().find(|&&a| a >= self.len()) {
                return Err(Error::IndexOutOfRange { index: bad, limit: self.len() });
            }
            for (i, &a) in members.iter().enumerate() {
                for &b in &members[i + 1..] {
                    if !pauli::commutes(&self.observables[a], &self.observables[b])? {
                        return Err(invalid("members do not commute"));
                    }
                }
            }
            product_parity(&self.observables, &members).ok_or_else(|| invalid("product is not ±I"))?;
            if !self.relations.contains(&members) {
                self.relations.push(members);
            }
        }
        Ok(self)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn len(&self) -> usize {
        self.observables.len()
    }

    pub fn is_empty(&self) -> bool {
        self.observables.is_empty()
    }

    pub fn observable(&self, a: usize) -> &PauliObservable {
        &self.observables[a]
    }

    pub fn observables(&self) -> &[PauliObservable] {
        &self.observables
    }

    pub fn is_measurable(&self, a: usize) -> bool {
        self.measurable[a]
    }

    pub fn is_output(&self, a: usize) -> bool {
        self.output[a]
    }

    pub fn measurable_indices(&self) -> Vec<usize> {
        (0..self.len()).filter(|&a| self.measurable[a]).collect()
    }

    pub fn output_indices(&self) -> Vec<usize> {
        (0..self.len()).filter(|&a| self.output[a]).collect()
    }

    /// Declared multi-factor relations, as sorted member lists.
    pub fn relations(&self) -> &[Vec<usize>] {
        &self.relations
    }

    /// Index and sign bit of `±p` in the set, if present.
    pub fn find(&self, p: &PauliObservable) -> Option<(usize, u8)> {
        let &a = self.lookup.get(p.letters())?;
        Some((a, (self.observables[a].is_negative() != p.is_negative()) as u8))
    }

    /// Index of `p` with matching sign.
    pub fn index_of(&self, p: &PauliObservable) -> Option<usize> {
        self.find(p).and_then(|(a, sign)| (sign == 0).then_some(a))
    }

    /// Index of the observable written as text, e.g. `"+XYY"`.
    pub fn index_of_str(&self, s: &str) -> Option<usize> {
        self.index_of(&s.parse().ok()?)
    }

    pub fn constraints(&self) -> ConstraintSystem {
        ConstraintSystem::generate(self)
    }

    pub fn compute_v(&self) -> ModuleV {
        self.constraints().module()
    }
}

/// Parity bit `p` with `Π T_a = (−1)^p I`, or `None` if the product is not ±I.
fn product_parity(observables: &[PauliObservable], members: &[usize]) -> Option<u8> {
    let n = observables[members[0]].n_qubits();
    let mut phase = pauli::Phase::ONE;
    let mut acc = PauliObservable::identity(n);
    for &a in members {
        let (ph, r) = pauli::multiply(&acc, &observables[a]).ok()?;
        phase = phase.mul(ph);
        acc = r;
    }
    if acc.is_identity_up_to_sign() {
        phase.sign_bit()
    } else {
        None
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ConstraintKind {
    /// `T_0 = +I`.
    Identity,
    /// `T_c = (−1)^β T_a T_b` found by scanning commuting pairs.
    Product { a: usize, b: usize, c: usize },
    /// A declared multi-factor relation.
    Declared,
}

/// One GF(2) row: `Σ_{a ∈ members} s(a) = parity`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Constraint {
    pub members: Vec<usize>,
    pub parity: u8,
    pub kind: ConstraintKind,
}

#[derive(Clone, Debug)]
pub struct ConstraintSystem {
    rows: Vec<Constraint>,
    k: BitMatrix,
    c: BitVector,
}

impl ConstraintSystem {
    fn generate(set: &ObservableSet) -> Self {
        let n = set.len();
        let mut rows = vec![Constraint { members: vec![0], parity: 0, kind: ConstraintKind::Identity }];
        let mut seen: Vec<Vec<usize>> = vec![vec![0]];
        for a in 1..n {
            for b in a + 1..n {
                let (p, q) = (set.observable(a), set.observable(b));
                if !pauli::commutes(p, q).unwrap_or(false) {
                    continue;
                }
                let (phase, r) = pauli::multiply(p, q).expect("sizes validated at build");
                let Some((c, sign)) = set.find(&r) else { continue };
                // T_a T_b = phase·R and T_c = (−1)^sign R, so T_c = (−1)^β T_a T_b.
                let beta = phase.sign_bit().expect("commuting product is real") ^ sign;
                let mut members = vec![a, b, c];
                members.sort_unstable();
                if seen.contains(&members) {
                    continue;
                }
                seen.push(members.clone());
                rows.push(Constraint { members, parity: beta, kind: ConstraintKind::Product { a, b, c } });
            }
        }
        for members in set.relations() {
            if seen.contains(members) {
                continue;
            }
            seen.push(members.clone());
            let parity = product_parity(set.observables(), members).expect("validated relation");
            rows.push(Constraint { members: members.clone(), parity, kind: ConstraintKind::Declared });
        }
        let k_rows = rows.iter().map(|r| BitVector::from_indices(n, r.members.iter().copied())).collect();
        let k = BitMatrix::from_rows(n, k_rows).expect("row lengths match");
        let c = BitVector::from_bools(rows.iter().map(|r| r.parity == 1));
        ConstraintSystem { rows, k, c }
    }

    pub fn rows(&self) -> &[Constraint] {
        &self.rows
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn n_columns(&self) -> usize {
        self.k.ncols()
    }

    pub fn k(&self) -> &BitMatrix {
        &self.k
    }

    pub fn c(&self) -> &BitVector {
        &self.c
    }

    /// Binary product relations as `(a, b, c, β)`.
    pub fn triples(&self) -> impl Iterator<Item = (usize, usize, usize, u8)> + '_ {
        self.rows.iter().filter_map(|r| match r.kind {
            ConstraintKind::Product { a, b, c } => Some((a, b, c, r.parity)),
            _ => None,
        })
    }

    /// Row index holding exactly this member set.
    pub fn row_of(&self, members: &[usize]) -> Option<usize> {
        let mut sorted = members.to_vec();
        sorted.sort_unstable();
        self.rows.iter().position(|r| r.members == sorted)
    }

    /// First row violated by the assignment `s`, if any.
    pub fn first_violation(&self, s: &BitVector) -> Option<usize> {
        let ks = self.k.mul_vec(s).ok()?;
        (0..self.rows.len()).find(|&r| ks.get(r) != self.c.get(r))
    }

    pub fn is_satisfied_by(&self, s: &BitVector) -> bool {
        s.len() == self.n_columns() && self.first_violation(s).is_none()
    }

    pub fn module(&self) -> ModuleV {
        ModuleV::from_basis(self.k.ncols(), self.k.kernel()).expect("kernel basis is independent")
    }
}

/// A GF(2) subspace of functions `𝒜 → ℤ₂`, stored by basis.
#[derive(Clone, Debug)]
pub struct ModuleV {
    len: usize,
    basis: Vec<BitVector>,
    columns: BitMatrix,
}

impl ModuleV {
    pub fn from_basis(len: usize, basis: Vec<BitVector>) -> Result<Self> {
        for b in &basis {
            if b.len() != len {
                return Err(Error::DimensionMismatch { context: "module basis", expected: len, found: b.len() });
            }
        }
        let columns = BitMatrix::from_columns(len, &basis)?;
        if columns.rank() != basis.len() {
            return Err(Error::InvalidInstance("module basis is linearly dependent".into()));
        }
        Ok(ModuleV { len, basis, columns })
    }

    /// Length of the member vectors (`|𝒜|`).
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[BitVector] {
        &self.basis
    }

    pub fn zero(&self) -> BitVector {
        BitVector::zeros(self.len)
    }

    /// `Σ coords_i · basis_i`.
    pub fn element(&self, coords: &BitVector) -> BitVector {
        let mut v = self.zero();
        for i in coords.ones() {
            v.xor_assign(&self.basis[i]);
        }
        v
    }

    /// Element whose coordinates are the low bits of `index`.
    pub fn element_at(&self, index: u64) -> BitVector {
        self.element(&BitVector::from_u64(self.dim(), index))
    }

    pub fn coordinates(&self, v: &BitVector) -> Result<BitVector> {
        if v.len() != self.len {
            return Err(Error::DimensionMismatch { context: "module element", expected: self.len, found: v.len() });
        }
        match self.columns.solve_affine(v)? {
            Some(sol) => Ok(sol.particular),
            None => Err(Error::NotInModule),
        }
    }

    pub fn contains(&self, v: &BitVector) -> bool {
        self.coordinates(v).is_ok()
    }

    /// All `2^dim` elements, ordered by coordinate index.
    pub fn elements(&self) -> Result<Vec<BitVector>> {
        if self.dim() > MAX_ENUMERATED_DIM {
            return Err(Error::SizeGuard {
                what: "module dimension".into(),
                size: self.dim() as u128,
                limit: MAX_ENUMERATED_DIM as u128,
            });
        }
        Ok((0..1u64 << self.dim()).map(|i| self.element_at(i)).collect())
    }

    /// First pair `a < b` not distinguished by any element of the module.
    pub fn separation_failure(&self) -> Option<(usize, usize)> {
        let mut by_signature: HashMap<Vec<bool>, usize> = HashMap::new();
        for a in 0..self.len {
            let signature: Vec<bool> = self.basis.iter().map(|v| v.get(a)).collect();
            if let Some(&first) = by_signature.get(&signature) {
                return Some((first, a));
            }
            by_signature.insert(signature, a);
        }
        None
    }

    pub fn check_separation(&self) -> bool {
        self.separation_failure().is_none()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pauli::pauli;

    fn set(strs: &[&str]) -> ObservableSet {
        let obs = strs.iter().map(|s| pauli(s)).collect();
        let all: Vec<usize> = (0..strs.len()).collect();
        ObservableSet::build(obs, &all, &[]).unwrap()
    }

    fn ghz() -> ObservableSet {
        let strs = ["III", "XII", "IXI", "IIX", "YII", "IYI", "IIY", "XXX", "XYY", "YXY", "YYX"];
        let obs = strs.iter().map(|s| pauli(s)).collect();
        let s = ObservableSet::build(obs, &[1, 2, 3, 4, 5, 6], &[7, 8, 9, 10]).unwrap();
        s.with_relations([vec![1, 2, 3, 7], vec![1, 5, 6, 8], vec![4, 2, 6, 9], vec![4, 5, 3, 10]]).unwrap()
    }

    fn square() -> ObservableSet {
        set(&["II", "XI", "IX", "XX", "ZI", "IZ", "ZZ", "XZ", "ZX", "YY"])
    }

    #[test]
    fn canonical_order_puts_identity_first() {
        let obs = vec![pauli("X"), pauli("Z"), pauli("I"), pauli("Y")];
        let (s, map) = ObservableSet::build_with_map(obs, &[1], &[3]).unwrap();
        let text: Vec<String> = s.observables().iter().map(|p| p.to_string()).collect();
        assert_eq!(text, ["+I", "+Z", "+Y", "+X"]);
        assert_eq!(map, vec![3, 1, 0, 2]);
        assert!(s.is_measurable(1) && s.is_output(2) && !s.is_measurable(3));
    }

    #[test]
    fn build_errors() {
        let err = ObservableSet::build(vec![pauli("I"), pauli("Z"), pauli("-Z")], &[], &[]).unwrap_err();
        assert!(matches!(err, Error::PlusMinusPair(_)));
        let err = ObservableSet::build(vec![pauli("X"), pauli("Z")], &[], &[]).unwrap_err();
        assert_eq!(err, Error::MissingIdentity);
        let err = ObservableSet::build(vec![pauli("-I"), pauli("Z")], &[], &[]).unwrap_err();
        assert_eq!(err, Error::MissingIdentity);
        let err = ObservableSet::build(vec![pauli("I"), pauli("Z"), pauli("Z")], &[], &[]).unwrap_err();
        assert!(matches!(err, Error::Duplicate(_)));
        assert!(ObservableSet::build(vec![pauli("I"), pauli("ZZ")], &[], &[]).is_err());
    }

    #[test]
    fn relation_validation() {
        let s = set(&["II", "XI", "ZI", "XX"]);
        assert!(s.clone().with_relations([vec![1, 2]]).is_err());
        assert!(s.clone().with_relations([vec![1, 3]]).is_err());
        assert!(s.with_relations([vec![1, 1]]).is_err());
    }

    #[test]
    fn ghz_constraints_are_the_four_contexts() {
        let s = ghz();
        assert_eq!(s.len(), 11);
        let k = s.constraints();
        assert_eq!(k.len(), 5);
        assert_eq!(k.triples().count(), 0);
        // X₁X₂X₃ = XXX, X₁Y₂Y₃ = XYY, ...: all products carry a + sign.
        assert!(k.rows().iter().all(|r| r.parity == 0));
        assert_eq!(s.compute_v().dim(), 6);
    }

    #[test]
    fn square_triples_match_dense_products() {
        let s = square();
        let k = s.constraints();
        assert_eq!(k.triples().count(), 6);
        for (a, b, c, beta) in k.triples() {
            let lhs = pauli::to_matrix(s.observable(a)).unwrap() * pauli::to_matrix(s.observable(b)).unwrap();
            let sign = if beta == 1 { -1.0 } else { 1.0 };
            let rhs = pauli::to_matrix(s.observable(c)).unwrap() * num_complex::Complex64::new(sign, 0.0);
            assert!(pauli::max_abs_diff(&lhs, &rhs) < 1e-12);
        }
        let xx = s.index_of_str("XX").unwrap();
        let zz = s.index_of_str("ZZ").unwrap();
        let yy = s.index_of_str("YY").unwrap();
        let row = k.row_of(&[xx, zz, yy]).unwrap();
        assert_eq!(k.rows()[row].parity, 1);
        let x1 = s.index_of_str("XI").unwrap();
        let x2 = s.index_of_str("IX").unwrap();
        assert_eq!(k.rows()[k.row_of(&[x1, x2, xx]).unwrap()].parity, 0);
    }

    #[test]
    fn square_module_has_even_weights() {
        let v = square().compute_v();
        for e in v.elements().unwrap() {
            assert_eq!(e.weight() % 2, 0);
        }
    }

    #[test]
    fn one_qubit_module() {
        let s = set(&["I", "X", "Y", "Z"]);
        assert_eq!(s.constraints().len(), 1);
        let v = s.compute_v();
        assert_eq!(v.dim(), 3);
        assert!(v.check_separation());
    }

    #[test]
    fn ghz_separation_holds() {
        assert!(ghz().compute_v().check_separation());
    }

    #[test]
    fn duplicated_column_breaks_separation() {
        // Columns 1 and 2 always carry the same bit.
        let v = ModuleV::from_basis(4, vec![BitVector::from_indices(4, [1, 2]), BitVector::unit(4, 3)]).unwrap();
        assert_eq!(v.separation_failure(), Some((1, 2)));
        assert!(!v.check_separation());
    }

    #[test]
    fn coordinates_roundtrip() {
        let v = ghz().compute_v();
        for i in 0..64u64 {
            let e = v.element_at(i);
            assert_eq!(v.coordinates(&e).unwrap().to_u64(), i);
        }
        let mut outside = v.zero();
        outside.flip(7);
        assert_eq!(v.coordinates(&outside), Err(Error::NotInModule));
    }

    #[test]
    fn ghz_local_flips_are_free() {
        let s = ghz();
        let v = s.compute_v();
        let k = s.constraints();
        for a in 1..=6 {
            // Flipping one local observable forces exactly the products containing it.
            let mut e = BitVector::unit(11, a);
            for r in k.rows() {
                if r.members.contains(&a) {
                    let out = *r.members.iter().find(|&&m| s.is_output(m)).unwrap();
                    e.flip(out);
                }
            }
            assert!(v.contains(&e), "flip of {a}");
        }
    }
}
