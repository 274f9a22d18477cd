//! Finite groups acting on the index set 𝒜 by signed permutations.
//!
//! An element `h` is stored through its conjugation action
//! `u(h) T_a u(h)† = (−1)^{signs(a)} T_{perm(a)}`; projective phases of `u`
//! never enter.

use std::collections::{HashMap, VecDeque};

use crate::bitlinalg::{BitMatrix, BitVector};
use crate::error::{Error, Result};
use crate::obsset::{ConstraintSystem, ModuleV, ObservableSet};
use crate::pauli::{self, CMatrix, Circuit, SingleQubitGate};

/// Largest group generated by closure.
pub const MAX_GROUP_ORDER: usize = 4096;

/// Tables up to this order get an exhaustive associativity check.
pub const ASSOCIATIVITY_CHECK_ORDER: usize = 256;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SignedPerm {
    perm: Vec<usize>,
    signs: BitVector,
}

impl SignedPerm {
    pub fn identity(n: usize) -> Self {
        SignedPerm { perm: (0..n).collect(), signs: BitVector::zeros(n) }
    }

    pub fn new(perm: Vec<usize>, signs: BitVector) -> Result<Self> {
        let n = perm.len();
        if signs.len() != n {
            return Err(Error::DimensionMismatch { context: "signed permutation signs", expected: n, found: signs.len() });
        }
        let mut hit = vec![false; n];
        for &p in &perm {
            if p >= n || std::mem::replace(&mut hit[p], true) {
                return Err(Error::InvalidGroup(format!("{perm:?} is not a permutation")));
            }
        }
        if n > 0 && (perm[0] != 0 || signs.get(0)) {
            return Err(Error::InvalidGroup("the identity observable must be fixed".into()));
        }
        Ok(SignedPerm { perm, signs })
    }

    pub fn len(&self) -> usize {
        self.perm.len()
    }

    pub fn is_empty(&self) -> bool {
        self.perm.is_empty()
    }

    pub fn perm(&self) -> &[usize] {
        &self.perm
    }

    pub fn signs(&self) -> &BitVector {
        &self.signs
    }

    /// `h·a`.
    pub fn image(&self, a: usize) -> usize {
        self.perm[a]
    }

    pub fn sign(&self, a: usize) -> bool {
        self.signs.get(a)
    }

    pub fn has_signs(&self) -> bool {
        !self.signs.is_zero()
    }

    pub fn is_identity(&self) -> bool {
        !self.has_signs() && self.perm.iter().enumerate().all(|(i, &p)| i == p)
    }

    /// The action of `self·other` (apply `other` first).
    pub fn compose(&self, other: &SignedPerm) -> SignedPerm {
        let perm = other.perm.iter().map(|&a| self.perm[a]).collect();
        let signs = BitVector::from_bools((0..self.len()).map(|a| other.sign(a) ^ self.sign(other.perm[a])));
        SignedPerm { perm, signs }
    }

    pub fn inverse(&self) -> SignedPerm {
        let mut perm = vec![0; self.len()];
        for (a, &p) in self.perm.iter().enumerate() {
            perm[p] = a;
        }
        let signs = BitVector::from_bools((0..self.len()).map(|a| self.sign(perm[a])));
        SignedPerm { perm, signs }
    }

    /// `(h v)(h a) = v(a)`, i.e. `v ∘ h⁻¹`.
    pub fn push_forward(&self, v: &BitVector) -> BitVector {
        let mut out = BitVector::zeros(v.len());
        for a in v.ones() {
            out.set(self.perm[a], true);
        }
        out
    }

    /// `a ↦ v(h a)`, i.e. `v ∘ h`.
    pub fn pull_back(&self, v: &BitVector) -> BitVector {
        BitVector::from_bools((0..self.len()).map(|a| v.get(self.perm[a])))
    }

    /// Row permutation `π` with `π(r)` the row holding the image of row `r`.
    pub fn permute_rows(&self, constraints: &ConstraintSystem) -> Result<Vec<usize>> {
        constraints
            .rows()
            .iter()
            .enumerate()
            .map(|(r, row)| {
                let image: Vec<usize> = row.members.iter().map(|&m| self.perm[m]).collect();
                constraints.row_of(&image).ok_or(Error::RowPermutation { element: 0, row: r })
            })
            .collect()
    }
}

/// Conjugation action of a single-qubit-gate circuit on the set.
pub fn action_from_circuit(set: &ObservableSet, circuit: &[(SingleQubitGate, usize)]) -> Result<SignedPerm> {
    let mut perm = Vec::with_capacity(set.len());
    let mut signs = BitVector::zeros(set.len());
    for (a, p) in set.observables().iter().enumerate() {
        let image = pauli::conjugate(p, circuit)?;
        let (b, sign) = set.find(&image).ok_or_else(|| Error::NotClosed { observable: p.to_string() })?;
        perm.push(b);
        signs.set(a, sign == 1);
    }
    SignedPerm::new(perm, signs)
}

/// Conjugation action of a dense unitary, matched against `±T_b` numerically.
pub fn action_from_unitary(set: &ObservableSet, u: &CMatrix) -> Result<SignedPerm> {
    let mats = set.observables().iter().map(pauli::to_matrix).collect::<Result<Vec<_>>>()?;
    let ud = u.adjoint();
    let mut perm = Vec::with_capacity(set.len());
    let mut signs = BitVector::zeros(set.len());
    for (a, m) in mats.iter().enumerate() {
        let image = u * m * &ud;
        let neg = -image.clone();
        let hit = mats.iter().enumerate().find_map(|(b, t)| {
            if pauli::max_abs_diff(&image, t) < 1e-9 {
                Some((b, false))
            } else if pauli::max_abs_diff(&neg, t) < 1e-9 {
                Some((b, true))
            } else {
                None
            }
        });
        let (b, sign) = hit.ok_or_else(|| Error::NotClosed { observable: set.observable(a).to_string() })?;
        perm.push(b);
        signs.set(a, sign);
    }
    SignedPerm::new(perm, signs)
}

/// Abstract finite group given by its multiplication table.
///
/// Element 0 is the identity. `word(g) = [i₁, …, i_k]` spells
/// `g = r_{i_k} ⋯ r_{i₁}` over the generators `r`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroup {
    table: Vec<Vec<usize>>,
    inverse: Vec<usize>,
    generators: Vec<usize>,
    words: Vec<Vec<usize>>,
    names: Vec<String>,
}

impl FiniteGroup {
    pub fn trivial() -> Self {
        FiniteGroup {
            table: vec![vec![0]],
            inverse: vec![0],
            generators: vec![],
            words: vec![vec![]],
            names: vec!["e".into()],
        }
    }

    /// Validates a multiplication table (`table[g][h] = gh`) and derives
    /// words over `generators` by breadth-first search. Associativity is
    /// checked exhaustively up to order [`ASSOCIATIVITY_CHECK_ORDER`].
    pub fn from_table(table: Vec<Vec<usize>>, generators: Vec<usize>) -> Result<Self> {
        let n = table.len();
        let n_checked = if n <= ASSOCIATIVITY_CHECK_ORDER { n } else { 0 };
        if n == 0 || table.iter().any(|row| row.len() != n || row.iter().any(|&x| x >= n)) {
            return Err(Error::InvalidGroup("table must be square with entries in range".into()));
        }
        if (0..n).any(|g| table[0][g] != g || table[g][0] != g) {
            return Err(Error::InvalidGroup("element 0 is not the identity".into()));
        }
        for g in 0..n_checked {
            for h in 0..n {
                for k in 0..n {
                    if table[table[g][h]][k] != table[g][table[h][k]] {
                        return Err(Error::InvalidGroup(format!("not associative at ({g},{h},{k})")));
                    }
                }
            }
        }
        let inverse = (0..n)
            .map(|g| (0..n).find(|&h| table[g][h] == 0).ok_or_else(|| Error::InvalidGroup(format!("{g} has no inverse"))))
            .collect::<Result<Vec<_>>>()?;
        if let Some(&bad) = generators.iter().find(|&&r| r >= n) {
            return Err(Error::IndexOutOfRange { index: bad, limit: n });
        }
        let mut words: Vec<Option<Vec<usize>>> = vec![None; n];
        words[0] = Some(vec![]);
        let mut queue = VecDeque::from([0]);
        while let Some(g) = queue.pop_front() {
            for (i, &r) in generators.iter().enumerate() {
                let next = table[r][g];
                if words[next].is_none() {
                    let mut w = words[g].clone().unwrap();
                    w.push(i);
                    words[next] = Some(w);
                    queue.push_back(next);
                }
            }
        }
        let words = words
            .into_iter()
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| Error::InvalidGroup("generators do not generate the group".into()))?;
        let names = (0..n).map(|g| format!("g{g}")).collect();
        let mut group = FiniteGroup { table, inverse, generators, words, names };
        group.names = group.default_names();
        Ok(group)
    }

    pub fn cyclic(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidGroup("cyclic group of order 0".into()));
        }
        let table = (0..n).map(|g| (0..n).map(|h| (g + h) % n).collect()).collect();
        Self::from_table(table, if n > 1 { vec![1] } else { vec![] })
    }

    /// `A × B` with `(a, b)` at index `a·|B| + b`.
    pub fn direct_product(a: &FiniteGroup, b: &FiniteGroup) -> Result<Self> {
        let (na, nb) = (a.order(), b.order());
        let table = (0..na * nb)
            .map(|x| (0..na * nb).map(|y| a.mul(x / nb, y / nb) * nb + b.mul(x % nb, y % nb)).collect())
            .collect();
        let generators =
            a.generators.iter().map(|&g| g * nb).chain(b.generators.iter().copied()).collect();
        Self::from_table(table, generators)
    }

    /// Parses `"Z2"`, `"Z3xZ2"`, `"Z2xZ2xZ2"`, or `"trivial"`.
    pub fn parse_spec(spec: &str) -> Result<Self> {
        if spec == "trivial" || spec == "1" {
            return Ok(Self::trivial());
        }
        let mut group = Self::trivial();
        for factor in spec.split(['x', '×']) {
            let n: usize = factor
                .trim()
                .strip_prefix('Z')
                .and_then(|d| d.parse().ok())
                .ok_or_else(|| Error::InvalidGroup(format!("cannot parse group factor {factor:?}")))?;
            group = Self::direct_product(&group, &Self::cyclic(n)?)?;
        }
        Ok(group)
    }

    fn default_names(&self) -> Vec<String> {
        (0..self.order())
            .map(|g| {
                if g == 0 {
                    "e".to_string()
                } else {
                    self.words[g].iter().rev().map(|i| format!("r{i}")).collect::<Vec<_>>().join("·")
                }
            })
            .collect()
    }

    pub fn order(&self) -> usize {
        self.table.len()
    }

    pub fn identity(&self) -> usize {
        0
    }

    pub fn mul(&self, g: usize, h: usize) -> usize {
        self.table[g][h]
    }

    pub fn inv(&self, g: usize) -> usize {
        self.inverse[g]
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.table
    }

    /// Element indices of the generators.
    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    pub fn word(&self, g: usize) -> &[usize] {
        &self.words[g]
    }

    pub fn name(&self, g: usize) -> &str {
        &self.names[g]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn set_names(&mut self, names: Vec<String>) {
        if names.len() == self.order() {
            self.names = names;
        }
    }

    pub fn element_of_word(&self, word: &[usize]) -> Result<usize> {
        word.iter().try_fold(0, |g, &i| {
            let &r = self.generators.get(i).ok_or(Error::IndexOutOfRange { index: i, limit: self.generators.len() })?;
            Ok(self.mul(r, g))
        })
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order()).all(|g| (0..self.order()).all(|h| self.mul(g, h) == self.mul(h, g)))
    }
}

/// A finite group together with its signed-permutation action on 𝒜.
#[derive(Clone, Debug)]
pub struct GroupAction {
    group: FiniteGroup,
    elements: Vec<SignedPerm>,
    generator_circuits: Option<Vec<Circuit>>,
}

impl GroupAction {
    /// Closure of the generator actions, elements in breadth-first word order.
    pub fn generate(generators: Vec<SignedPerm>, n: usize) -> Result<Self> {
        if let Some(g) = generators.iter().find(|g| g.len() != n) {
            return Err(Error::DimensionMismatch { context: "generator action", expected: n, found: g.len() });
        }
        let mut elements = vec![SignedPerm::identity(n)];
        let mut words = vec![vec![]];
        let mut index: HashMap<SignedPerm, usize> = HashMap::from([(elements[0].clone(), 0)]);
        let mut queue = VecDeque::from([0]);
        while let Some(g) = queue.pop_front() {
            for (i, r) in generators.iter().enumerate() {
                let next = r.compose(&elements[g]);
                if index.contains_key(&next) {
                    continue;
                }
                if elements.len() == MAX_GROUP_ORDER {
                    return Err(Error::SizeGuard {
                        what: "group order".into(),
                        size: MAX_GROUP_ORDER as u128 + 1,
                        limit: MAX_GROUP_ORDER as u128,
                    });
                }
                let mut w: Vec<usize> = words[g].clone();
                w.push(i);
                index.insert(next.clone(), elements.len());
                queue.push_back(elements.len());
                elements.push(next);
                words.push(w);
            }
        }
        let table = elements
            .iter()
            .map(|g| elements.iter().map(|h| index[&g.compose(h)]).collect())
            .collect();
        let gens = generators.iter().map(|g| index[g]).collect();
        let group = FiniteGroup::from_table(table, gens)?;
        Ok(GroupAction { group, elements, generator_circuits: None })
    }

    /// Action of an abstract group through generator actions, which need not be
    /// faithful. Fails unless the generator actions respect the group table.
    pub fn from_group(
        group: FiniteGroup,
        generator_actions: Vec<SignedPerm>,
        generator_circuits: Option<Vec<Circuit>>,
        n: usize,
    ) -> Result<Self> {
        if generator_actions.len() != group.generators().len() {
            return Err(Error::DimensionMismatch {
                context: "generator actions",
                expected: group.generators().len(),
                found: generator_actions.len(),
            });
        }
        if let Some(g) = generator_actions.iter().find(|g| g.len() != n) {
            return Err(Error::DimensionMismatch { context: "generator action", expected: n, found: g.len() });
        }
        let elements = (0..group.order())
            .map(|g| group.word(g).iter().fold(SignedPerm::identity(n), |acc, &i| generator_actions[i].compose(&acc)))
            .collect();
        let action = GroupAction { group, elements, generator_circuits };
        if !action.check_homomorphism() {
            return Err(Error::InvalidGroup("generator actions do not respect the group table".into()));
        }
        Ok(action)
    }

    /// Group generated by circuits, with their conjugation action on `set`.
    pub fn from_circuits(set: &ObservableSet, circuits: Vec<Circuit>) -> Result<Self> {
        let generators = circuits.iter().map(|c| action_from_circuit(set, c)).collect::<Result<Vec<_>>>()?;
        let mut action = Self::generate(generators, set.len())?;
        action.generator_circuits = Some(circuits);
        Ok(action)
    }

    pub fn trivial(n: usize) -> Self {
        GroupAction {
            group: FiniteGroup::trivial(),
            elements: vec![SignedPerm::identity(n)],
            generator_circuits: Some(vec![]),
        }
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn group_mut(&mut self) -> &mut FiniteGroup {
        &mut self.group
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn element(&self, g: usize) -> &SignedPerm {
        &self.elements[g]
    }

    pub fn elements(&self) -> &[SignedPerm] {
        &self.elements
    }

    pub fn generator_circuits(&self) -> Option<&[Circuit]> {
        self.generator_circuits.as_deref()
    }

    /// Circuit for `g`, applying its word's generators in order.
    pub fn element_circuit(&self, g: usize) -> Option<Circuit> {
        let circuits = self.generator_circuits.as_ref()?;
        Some(self.group.word(g).iter().flat_map(|&i| circuits[i].iter().copied()).collect())
    }

    pub fn element_unitary(&self, g: usize, n_qubits: usize) -> Option<Result<CMatrix>> {
        self.element_circuit(g).map(|c| pauli::circuit_unitary(n_qubits, &c))
    }

    /// First `(g, a)` with a nonzero sign.
    pub fn sign_violation(&self) -> Option<(usize, usize)> {
        self.elements.iter().enumerate().find_map(|(g, h)| h.signs().ones().next().map(|a| (g, a)))
    }

    /// True iff every element maps Ω₊ onto itself without sign changes.
    pub fn check_input_group(&self) -> bool {
        self.sign_violation().is_none()
    }

    /// Exhaustive check that the stored actions compose like the table.
    pub fn check_homomorphism(&self) -> bool {
        let n = self.order();
        (0..n).all(|g| (0..n).all(|h| self.elements[g].compose(&self.elements[h]) == self.elements[self.group.mul(g, h)]))
    }

    /// `g(v) = v ∘ g⁻¹`, refusing vectors outside the module.
    pub fn module_action(&self, g: usize, v: &BitVector, module: &ModuleV) -> Result<BitVector> {
        if !module.contains(v) {
            return Err(Error::NotInModule);
        }
        Ok(self.elements[g].push_forward(v))
    }

    /// Matrix `S_g` of `v ↦ v ∘ g⁻¹` in the coordinates of `module`.
    pub fn module_matrix(&self, g: usize, module: &ModuleV) -> Result<BitMatrix> {
        let cols = module
            .basis()
            .iter()
            .map(|b| module.coordinates(&self.elements[g].push_forward(b)))
            .collect::<Result<Vec<_>>>()?;
        BitMatrix::from_columns(module.dim(), &cols)
    }

    /// Row permutation of every element; fails if some image row is missing.
    pub fn row_permutations(&self, constraints: &ConstraintSystem) -> Result<Vec<Vec<usize>>> {
        self.elements
            .iter()
            .enumerate()
            .map(|(g, h)| {
                h.permute_rows(constraints).map_err(|e| match e {
                    Error::RowPermutation { row, .. } => Error::RowPermutation { element: g, row },
                    other => other,
                })
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pauli::pauli;
    use SingleQubitGate::{A, H};

    fn ghz() -> ObservableSet {
        let strs = ["III", "XII", "IXI", "IIX", "YII", "IYI", "IIY", "XXX", "XYY", "YXY", "YYX"];
        let obs = strs.iter().map(|s| pauli(s)).collect();
        ObservableSet::build(obs, &[1, 2, 3, 4, 5, 6], &[7, 8, 9, 10]).unwrap()
    }

    fn square() -> ObservableSet {
        let strs = ["II", "XI", "IX", "XX", "ZI", "IZ", "ZZ", "XZ", "ZX", "YY"];
        ObservableSet::build(strs.iter().map(|s| pauli(s)).collect(), &(0..10).collect::<Vec<_>>(), &[]).unwrap()
    }

    #[test]
    fn ghz_generator_action() {
        let s = ghz();
        let g01 = action_from_circuit(&s, &[(A, 1), (A, 2)]).unwrap();
        let at = |x: &str| s.index_of_str(x).unwrap();
        assert_eq!(g01.image(at("IXI")), at("IYI"));
        assert_eq!(g01.image(at("IIY")), at("IIX"));
        assert_eq!(g01.image(at("XII")), at("XII"));
        assert_eq!(g01.image(at("XXX")), at("XYY"));
        assert_eq!(g01.image(at("YXY")), at("YYX"));
        assert!(!g01.has_signs());
    }

    #[test]
    fn circuit_action_matches_dense_unitary() {
        let s = ghz();
        for c in [vec![(A, 1), (A, 2)], vec![(A, 0), (A, 2)]] {
            let u = pauli::circuit_unitary(3, &c).unwrap();
            assert_eq!(action_from_circuit(&s, &c).unwrap(), action_from_unitary(&s, &u).unwrap());
        }
    }

    #[test]
    fn square_hadamard_flips_only_yy() {
        let s = square();
        let h = action_from_circuit(&s, &[(H, 0)]).unwrap();
        let ones: Vec<usize> = h.signs().ones().collect();
        assert_eq!(ones, vec![s.index_of_str("YY").unwrap()]);
    }

    #[test]
    fn escaping_circuit_is_rejected() {
        let err = action_from_circuit(&ghz(), &[(H, 0)]).unwrap_err();
        assert!(matches!(err, Error::NotClosed { .. }));
    }

    #[test]
    fn ghz_group_is_klein_four() {
        let s = ghz();
        let action = GroupAction::from_circuits(&s, vec![vec![(A, 1), (A, 2)], vec![(A, 0), (A, 2)]]).unwrap();
        let g = action.group();
        assert_eq!(g.order(), 4);
        assert!(g.is_abelian());
        assert!((0..4).all(|x| g.mul(x, x) == 0));
        assert!(action.check_homomorphism());
        assert!(action.check_input_group());
        assert_eq!(g.word(3), &[0, 1]);
    }

    #[test]
    fn square_extended_group() {
        let s = square();
        let action = GroupAction::from_circuits(&s, vec![vec![(H, 0)]]).unwrap();
        assert_eq!(action.order(), 2);
        assert!(!action.check_input_group());
        assert!(action.check_homomorphism());
    }

    #[test]
    fn empty_generators_give_trivial_group() {
        let action = GroupAction::generate(vec![], 5).unwrap();
        assert_eq!(action.order(), 1);
        assert!(action.check_input_group());
    }

    #[test]
    fn compose_and_inverse() {
        let s = square();
        let g = action_from_circuit(&s, &[(H, 0)]).unwrap();
        let h = action_from_circuit(&s, &[(H, 1)]).unwrap();
        let gh = g.compose(&h);
        assert_eq!(gh, action_from_circuit(&s, &[(H, 1), (H, 0)]).unwrap());
        assert!(gh.compose(&gh.inverse()).is_identity());
        assert!(gh.inverse().compose(&gh).is_identity());
    }

    #[test]
    fn module_action_on_ghz() {
        let s = ghz().with_relations([vec![1, 2, 3, 7], vec![1, 5, 6, 8], vec![4, 2, 6, 9], vec![4, 5, 3, 10]]).unwrap();
        let v = s.compute_v();
        let action = GroupAction::from_circuits(&s, vec![vec![(A, 1), (A, 2)], vec![(A, 0), (A, 2)]]).unwrap();
        let at = |x: &str| s.index_of_str(x).unwrap();
        // Flip of X₂ forces the products containing X₂.
        let flip_x2 = BitVector::from_indices(11, [at("IXI"), at("XXX"), at("YXY")]);
        let flip_y2 = BitVector::from_indices(11, [at("IYI"), at("XYY"), at("YYX")]);
        let g01 = 1;
        assert_eq!(action.module_action(g01, &flip_x2, &v).unwrap(), flip_y2);
        assert_eq!(action.module_action(0, &flip_x2, &v).unwrap(), flip_x2);
        assert_eq!(action.module_action(g01, &BitVector::unit(11, 1), &v), Err(Error::NotInModule));
        for g in 0..4 {
            for h in 0..4 {
                for b in v.basis() {
                    let lhs = action.module_action(action.group().mul(g, h), b, &v).unwrap();
                    let inner = action.module_action(h, b, &v).unwrap();
                    assert_eq!(lhs, action.module_action(g, &inner, &v).unwrap());
                }
            }
            let sg = action.module_matrix(g, &v).unwrap();
            assert_eq!(sg.rank(), v.dim());
        }
    }

    #[test]
    fn unfaithful_action_keeps_the_group() {
        let s = ghz();
        let k4 = FiniteGroup::parse_spec("Z2xZ2").unwrap();
        let id = SignedPerm::identity(s.len());
        let action = GroupAction::from_group(k4.clone(), vec![id.clone(), id.clone()], None, s.len()).unwrap();
        assert_eq!(action.order(), 4);
        let g01 = action_from_circuit(&s, &[(A, 1), (A, 2)]).unwrap();
        let z3 = FiniteGroup::cyclic(3).unwrap();
        assert!(GroupAction::from_group(z3, vec![g01.clone()], None, s.len()).is_err());
        let z2 = FiniteGroup::cyclic(2).unwrap();
        assert!(GroupAction::from_group(z2, vec![g01], None, s.len()).is_ok());
    }

    #[test]
    fn table_groups() {
        let k4 = FiniteGroup::parse_spec("Z2xZ2").unwrap();
        assert_eq!(k4.order(), 4);
        assert_eq!(k4.generators().len(), 2);
        let z6 = FiniteGroup::parse_spec("Z3xZ2").unwrap();
        assert_eq!(z6.order(), 6);
        assert!(FiniteGroup::parse_spec("Q8").is_err());
        let bad = vec![vec![0, 1], vec![1, 1]];
        assert!(FiniteGroup::from_table(bad, vec![1]).is_err());
        assert_eq!(k4.element_of_word(&[0, 1]).unwrap(), k4.mul(k4.generators()[1], k4.generators()[0]));
    }
}
