//! Deterministic noncontextual hidden-variable models: consistent value
//! assignments, the distance Δ(o), and the classical simulation algorithms.

use serde::Serialize;

use crate::bitlinalg::BitVector;
use crate::error::{Error, Result};
use crate::obsset::{ConstraintSystem, ObservableSet};
use crate::phasefn::{self, PhaseFunction};
use crate::quantum::MbqcInstance;
use crate::symgroup::GroupAction;

/// Largest assignment-space dimension swept exhaustively.
pub const MAX_SWEEP_DIM: usize = 20;

/// Largest dimension for which assignment closure is checked member by member.
pub const MAX_LEMMA1_DIM: usize = 12;

/// Solution set of `K·s = c`: `particular + span(kernel_basis)`, or empty.
#[derive(Clone, Debug)]
pub struct AssignmentSpace {
    pub particular: Option<BitVector>,
    pub kernel_basis: Vec<BitVector>,
    len: usize,
}

impl AssignmentSpace {
    pub fn is_empty(&self) -> bool {
        self.particular.is_none()
    }

    /// Dimension of the affine space, `None` if empty.
    pub fn dim(&self) -> Option<usize> {
        self.particular.as_ref().map(|_| self.kernel_basis.len())
    }

    /// Number of observables each assignment covers.
    pub fn n_observables(&self) -> usize {
        self.len
    }

    /// Number of assignments, saturating at `u128::MAX`.
    pub fn count(&self) -> u128 {
        match self.dim() {
            None => 0,
            Some(d) if d < 128 => 1u128 << d,
            Some(_) => u128::MAX,
        }
    }

    pub fn member(&self, index: u64) -> Option<BitVector> {
        let mut s = self.particular.clone()?;
        for (i, k) in self.kernel_basis.iter().enumerate() {
            if index >> i & 1 == 1 {
                s.xor_assign(k);
            }
        }
        Some(s)
    }

    /// All assignments, refusing spaces with more than `2^limit` members.
    pub fn members(&self, limit: usize) -> Result<Vec<BitVector>> {
        let Some(dim) = self.dim() else { return Ok(Vec::new()) };
        if dim > limit {
            return Err(Error::SizeGuard { what: "assignment space size 2^dim".into(), size: 1u128 << dim.min(127), limit: 1u128 << limit });
        }
        Ok((0..1u64 << dim).map(|i| self.member(i).expect("nonempty")).collect())
    }
}

pub fn enumerate(set: &ObservableSet) -> AssignmentSpace {
    enumerate_constraints(&set.constraints())
}

pub fn enumerate_constraints(constraints: &ConstraintSystem) -> AssignmentSpace {
    let len = constraints.n_columns();
    match constraints.k().solve_affine(constraints.c()).expect("right-hand side matches rows") {
        Some(sol) => AssignmentSpace { particular: Some(sol.particular), kernel_basis: sol.kernel, len },
        None => AssignmentSpace { particular: None, kernel_basis: Vec::new(), len },
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Lemma1Report {
    /// `s∘g⁻¹` is consistent for every `s` and `g`.
    pub invariance: bool,
    /// Every difference of two assignments lies in `V`.
    pub differences_in_v: bool,
}

impl Lemma1Report {
    pub fn holds(&self) -> bool {
        self.invariance && self.differences_in_v
    }
}

/// Checks exhaustively that assignments stay consistent under relabelling by the
/// group and that any two differ by an element of `V`.
pub fn check_lemma1(space: &AssignmentSpace, action: &GroupAction, set: &ObservableSet) -> Result<Lemma1Report> {
    let constraints = set.constraints();
    let module = constraints.module();
    let members = space.members(MAX_LEMMA1_DIM)?;
    let invariance = members
        .iter()
        .all(|s| action.elements().iter().all(|g| constraints.is_satisfied_by(&g.push_forward(s))));
    // V is a subspace, so differences to one fixed member cover all pairs.
    let differences_in_v = match members.first() {
        Some(s0) => members.iter().all(|s| module.contains(&s.xor(s0))),
        None => true,
    };
    Ok(Lemma1Report { invariance, differences_in_v })
}

/// `o_s(g) = s(g b_e)`.
pub fn induced_output(s: &BitVector, action: &GroupAction, b_e: usize) -> Vec<u8> {
    action.elements().iter().map(|g| s.bit(g.image(b_e))).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DeltaResult {
    pub delta: usize,
    /// First minimizer in enumeration order.
    pub argmin: BitVector,
    pub group_order: usize,
    pub assignments_swept: u64,
}

impl DeltaResult {
    /// `|G| − Δ`, the largest witness value an ncHVM attains.
    pub fn classical_witness_bound(&self) -> usize {
        self.group_order - self.delta
    }
}

/// `Δ(o) = min_s wt(o ⊕ o_s)` by exhaustive sweep; `None` when no consistent
/// assignment exists.
pub fn delta(space: &AssignmentSpace, action: &GroupAction, o: &[u8], b_e: usize) -> Result<Option<DeltaResult>> {
    if o.len() != action.order() {
        return Err(Error::DimensionMismatch { context: "output function", expected: action.order(), found: o.len() });
    }
    if b_e >= space.n_observables() {
        return Err(Error::IndexOutOfRange { index: b_e, limit: space.n_observables() });
    }
    let Some(dim) = space.dim() else { return Ok(None) };
    if dim > MAX_SWEEP_DIM {
        return Err(Error::SizeGuard {
            what: "assignment space size 2^dim".into(),
            size: 1u128 << dim.min(127),
            limit: 1u128 << MAX_SWEEP_DIM,
        });
    }
    // o_s(g) only depends on the bits at the output images.
    let images: Vec<usize> = action.elements().iter().map(|g| g.image(b_e)).collect();
    let distance = |s: &BitVector| images.iter().zip(o).filter(|&(&a, &bit)| s.bit(a) != bit).count();
    let mut best: Option<(usize, u64)> = None;
    for index in 0..1u64 << dim {
        let s = space.member(index).expect("nonempty");
        let d = distance(&s);
        if best.is_none_or(|(b, _)| d < b) {
            best = Some((d, index));
            if d == 0 {
                break;
            }
        }
    }
    let (delta, index) = best.expect("space is nonempty");
    Ok(Some(DeltaResult {
        delta,
        argmin: space.member(index).expect("nonempty"),
        group_order: action.order(),
        assignments_swept: 1u64 << dim,
    }))
}

/// Classical simulation from one assignment plus a lookup table of the inputs
/// it gets wrong.
#[derive(Clone, Debug, Serialize)]
pub struct ClassicalReduction {
    /// `G̃ = {g : o(g) ≠ s(g b_e)}`, sorted.
    pub table: Vec<usize>,
    pub assignment: BitVector,
    /// Indices `g b_e` read by the evaluator.
    images: Vec<usize>,
    /// `dΦ = 0` for `Φ_g = s∘g + s`.
    pub induced_exact: bool,
}

impl ClassicalReduction {
    pub fn evaluate(&self, g: usize) -> u8 {
        self.assignment.bit(self.images[g]) ^ u8::from(self.table.binary_search(&g).is_ok())
    }

    pub fn table_size(&self) -> usize {
        self.table.len()
    }
}

pub fn classical_reduction(
    o: &[u8],
    s: &BitVector,
    action: &GroupAction,
    constraints: &ConstraintSystem,
    b_e: usize,
) -> Result<ClassicalReduction> {
    if o.len() != action.order() {
        return Err(Error::DimensionMismatch { context: "output function", expected: action.order(), found: o.len() });
    }
    let induced = phasefn::from_assignment(s, action, constraints)?;
    let images: Vec<usize> = action.elements().iter().map(|g| g.image(b_e)).collect();
    let table = (0..o.len()).filter(|&g| o[g] != s.bit(images[g])).collect();
    Ok(ClassicalReduction {
        table,
        assignment: s.clone(),
        images,
        induced_exact: phasefn::is_exact(&induced, action),
    })
}

/// Result of one coprocessor evaluation with its memory audit.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CoprocessorRun {
    /// `o(g) ⊕ o(e) = Φ_g(b_e)`.
    pub bit: u8,
    /// Cells initialized: `Φ_r(a)` for generators `r` and measurable `a`.
    pub memory_cells: usize,
    pub memory_reads: usize,
    /// `|𝒪₊|·|R|`.
    pub memory_bound: usize,
}

/// A restricted classical machine holding `Φ_r(a)` for generators `r` and
/// measurable `a` only. It may add bits mod 2 and apply `a ↦ ra`.
struct Coprocessor<'a> {
    memory: Vec<Option<bool>>,
    n_observables: usize,
    reads: usize,
    action: &'a GroupAction,
}

impl Coprocessor<'_> {
    fn read(&mut self, generator: usize, a: usize) -> Result<bool> {
        self.reads += 1;
        self.memory[generator * self.n_observables + a]
            .ok_or_else(|| Error::InvalidInstance(format!("coprocessor read of unstored cell ({generator}, {a})")))
    }

    fn apply(&self, generator: usize, a: usize) -> usize {
        let g = self.action.group().generators()[generator];
        self.action.element(g).image(a)
    }
}

/// Evaluates `Φ_g(b_e)` for `g` given as a generator word, by
/// `Φ_g(b_e) = Σ_i Σ_{a ∈ C(g(i−1))} Φ_{r_i}(a)`. Requires `dΦ = 0`.
pub fn cc_coprocessor(instance: &MbqcInstance, phi: &PhaseFunction, word: &[usize]) -> Result<CoprocessorRun> {
    let action = instance.action();
    if phi.order() != action.order() {
        return Err(Error::DimensionMismatch { context: "phase function order", expected: action.order(), found: phi.order() });
    }
    if !phasefn::is_exact(phi, action) {
        return Err(Error::NotExact);
    }
    let set = instance.set();
    let generators = action.group().generators();
    if let Some(&bad) = word.iter().find(|&&r| r >= generators.len()) {
        return Err(Error::IndexOutOfRange { index: bad, limit: generators.len() });
    }
    let n = set.len();
    let mut memory = vec![None; generators.len() * n];
    let mut cells = 0;
    for (r, &g) in generators.iter().enumerate() {
        for a in set.measurable_indices() {
            memory[r * n + a] = Some(phi.get(g, a));
            cells += 1;
        }
    }
    let mut cc = Coprocessor { memory, n_observables: n, reads: 0, action };
    let mut context = instance.reference_context().to_vec();
    let mut bit = false;
    for &r in word {
        for &a in &context {
            bit ^= cc.read(r, a)?;
        }
        context = context.iter().map(|&a| cc.apply(r, a)).collect();
    }
    let bound = set.measurable_indices().len() * generators.len();
    debug_assert!(cells <= bound);
    Ok(CoprocessorRun { bit: u8::from(bit), memory_cells: cells, memory_reads: cc.reads, memory_bound: bound })
}

/// `Σ_g o(g)` parity of the target against `Σ_g o_s(g)` parity for every `s`:
/// returns `true` if all induced outputs have even parity while `o` is odd,
/// which forces `Δ ≥ 1`.
pub fn parity_lower_bound(space: &AssignmentSpace, action: &GroupAction, o: &[u8], b_e: usize) -> Result<bool> {
    let target = o.iter().fold(0, |acc, &b| acc ^ b);
    if target == 0 {
        return Ok(false);
    }
    // The parity is affine in s, so it suffices to check the particular
    // solution and the kernel directions.
    let Some(p) = &space.particular else { return Ok(true) };
    let parity = |s: &BitVector| induced_output(s, action, b_e).iter().fold(0, |acc, &b| acc ^ b);
    Ok(parity(p) == 0 && space.kernel_basis.iter().all(|k| parity(k) == 0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn ghz_space_has_64_members() {
        let f = fixtures::builtin("ghz-or").unwrap();
        let inst = f.instance.as_ref().unwrap();
        let space = enumerate(inst.set());
        assert_eq!(space.dim(), Some(6));
        let members = space.members(6).unwrap();
        let constraints = inst.set().constraints();
        assert!(members.iter().all(|s| constraints.is_satisfied_by(s)));
        assert!(check_lemma1(&space, inst.action(), inst.set()).unwrap().holds());
    }

    #[test]
    fn mermin_square_is_empty() {
        let f = fixtures::builtin("mermin-square").unwrap();
        let space = enumerate(&f.set);
        assert!(space.is_empty());
        assert_eq!(space.count(), 0);
        assert!(space.members(4).unwrap().is_empty());
    }

    #[test]
    fn one_qubit_has_all_eight() {
        let f = fixtures::builtin("one-qubit").unwrap();
        assert_eq!(enumerate(&f.set).count(), 8);
    }

    #[test]
    fn delta_of_or_gate() {
        let f = fixtures::builtin("ghz-or").unwrap();
        let inst = f.instance.as_ref().unwrap();
        let space = enumerate(inst.set());
        let o = [0, 1, 1, 1];
        let d = delta(&space, inst.action(), &o, inst.b_e()).unwrap().unwrap();
        // Oracle: direct minimum over all 64 induced outputs.
        let brute = space
            .members(6)
            .unwrap()
            .iter()
            .map(|s| induced_output(s, inst.action(), inst.b_e()).iter().zip(&o).filter(|(a, b)| a != b).count())
            .min()
            .unwrap();
        assert_eq!(d.delta, brute);
        assert_eq!(d.delta, 1);
        assert_eq!(d.classical_witness_bound(), 3);
        assert!(parity_lower_bound(&space, inst.action(), &o, inst.b_e()).unwrap());
    }

    #[test]
    fn classical_reduction_reproduces_o() {
        let f = fixtures::builtin("ghz-or").unwrap();
        let inst = f.instance.as_ref().unwrap();
        let space = enumerate(inst.set());
        let o = [0, 1, 1, 1];
        let constraints = inst.set().constraints();
        let d = delta(&space, inst.action(), &o, inst.b_e()).unwrap().unwrap();
        let red = classical_reduction(&o, &d.argmin, inst.action(), &constraints, inst.b_e()).unwrap();
        assert_eq!(red.table_size(), 1);
        assert!(red.induced_exact);
        for s in space.members(6).unwrap() {
            let r = classical_reduction(&o, &s, inst.action(), &constraints, inst.b_e()).unwrap();
            assert!(r.table_size() >= d.delta);
            assert!((0..4).all(|g| r.evaluate(g) == o[g]));
        }
    }

    #[test]
    fn coprocessor_matches_direct_evaluation() {
        let f = fixtures::builtin("ghz-or").unwrap();
        let inst = f.instance.as_ref().unwrap();
        let constraints = inst.set().constraints();
        let space = enumerate(inst.set());
        let s = space.member(0b101101).unwrap();
        let phi = phasefn::from_assignment(&s, inst.action(), &constraints).unwrap();
        let group = inst.group();
        for word in [vec![], vec![0], vec![1], vec![0, 1], vec![1, 0, 1]] {
            let g = group.element_of_word(&word).unwrap();
            let run = cc_coprocessor(inst, &phi, &word).unwrap();
            assert_eq!(run.bit, u8::from(phi.get(g, inst.b_e())));
            assert!(run.memory_cells <= run.memory_bound);
        }
        let xi = inst.characteristic().unwrap();
        let family = phasefn::symmetry_solutions(&inst.module(), inst.action(), &xi).unwrap().unwrap();
        assert_eq!(cc_coprocessor(inst, &family.particular, &[0]), Err(Error::NotExact));
        assert!(cc_coprocessor(inst, &phi, &[7]).is_err());
    }
}
