//! The sign-flip subgroup `N`, the 2-cochain `λ = dΦ`, the symmetry group
//! extension `E`, and `H²(G, N)`.
//!
//! `G` acts on `N` from the right by `n·h = n∘h`, that is `n·h = h⁻¹(n)` for
//! the left action `g(n) = n∘g⁻¹`. With this action the differentials are
//!
//! ```text
//! (d¹f)(g,h)   = f(g)·h + f(gh) + f(h)
//! (d²λ)(g,h,k) = λ(g,h)·k + λ(g,hk) + λ(gh,k) + λ(h,k)
//! ```
//!
//! so that `d¹Φ` is the coboundary `dΦ` of a phase function and `d²λ = 0` is
//! exactly associativity of `(g,n)(h,n′) = (gh, λ(g,h) + n·h + n′)`.

use serde::Serialize;

use crate::bitlinalg::{BitMatrix, BitVector, SpanReducer};
use crate::error::{Error, Result};
use crate::obsset::{ModuleV, ObservableSet};
use crate::phasefn::{self, PhaseFunction, TwoCochain};
use crate::symgroup::{FiniteGroup, GroupAction, MAX_GROUP_ORDER};

pub const MAX_H2_GROUP_ORDER: usize = 16;
pub const MAX_H2_MODULE_DIM: usize = 8;

/// Largest `|C²|` in bits for the exhaustive oracle.
pub const MAX_EXHAUSTIVE_BITS: usize = 20;

/// `N = {v ∈ V : v(a) = 0 for every a outside 𝒪₊}`.
pub fn compute_n(set: &ObservableSet, module: &ModuleV) -> Result<ModuleV> {
    let hidden: Vec<usize> = (0..set.len()).filter(|&a| !set.is_measurable(a)).collect();
    // Coordinates c with (Σ c_i b_i)(a) = 0 for every hidden a.
    let rows = hidden
        .iter()
        .map(|&a| BitVector::from_bools(module.basis().iter().map(|b| b.get(a))))
        .collect::<Vec<_>>();
    let restriction = BitMatrix::from_rows(module.dim(), rows)?;
    let basis = restriction.kernel().iter().map(|c| module.element(c)).collect();
    ModuleV::from_basis(module.len(), basis)
}

/// A `G`-module `ℤ₂^dim` with right action matrices.
#[derive(Clone, Debug)]
pub struct GModule {
    group: FiniteGroup,
    dim: usize,
    /// `coords(n·h) = actions[h] · coords(n)`.
    actions: Vec<BitMatrix>,
}

impl GModule {
    pub fn trivial(group: FiniteGroup, dim: usize) -> Self {
        let actions = vec![BitMatrix::identity(dim); group.order()];
        GModule { group, dim, actions }
    }

    pub fn new(group: FiniteGroup, dim: usize, actions: Vec<BitMatrix>) -> Result<Self> {
        if actions.len() != group.order() {
            return Err(Error::DimensionMismatch { context: "action matrices", expected: group.order(), found: actions.len() });
        }
        if let Some(m) = actions.iter().find(|m| m.nrows() != dim || m.ncols() != dim) {
            return Err(Error::DimensionMismatch { context: "action matrix size", expected: dim, found: m.nrows() });
        }
        let module = GModule { group, dim, actions };
        let n = module.group.order();
        if module.actions[0] != BitMatrix::identity(dim) {
            return Err(Error::InvalidGroup("identity acts nontrivially".into()));
        }
        for g in 0..n {
            for h in 0..n {
                // (n·g)·h = n·(gh)  ⇔  A_h A_g = A_{gh}.
                if module.actions[h].mul(&module.actions[g])? != module.actions[module.group.mul(g, h)] {
                    return Err(Error::InvalidGroup(format!("action is not a right action at ({g},{h})")));
                }
            }
        }
        Ok(module)
    }

    /// `N` with `n·h = n∘h`, refusing if `N` is not closed.
    pub fn from_subgroup(action: &GroupAction, n: &ModuleV) -> Result<Self> {
        let actions = action
            .elements()
            .iter()
            .enumerate()
            .map(|(g, h)| {
                let cols = n
                    .basis()
                    .iter()
                    .map(|b| n.coordinates(&h.pull_back(b)).map_err(|_| Error::NotGClosed { element: g }))
                    .collect::<Result<Vec<_>>>()?;
                BitMatrix::from_columns(n.dim(), &cols)
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(action.group().clone(), n.dim(), actions)
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn act(&self, n: &BitVector, h: usize) -> BitVector {
        self.actions[h].mul_vec(n).expect("module dimension")
    }

    pub fn is_trivial(&self) -> bool {
        self.actions.iter().all(|m| *m == BitMatrix::identity(self.dim))
    }

    fn check_caps(&self) -> Result<()> {
        if self.group.order() > MAX_H2_GROUP_ORDER {
            return Err(Error::SizeGuard {
                what: "group order for H²".into(),
                size: self.group.order() as u128,
                limit: MAX_H2_GROUP_ORDER as u128,
            });
        }
        if self.dim > MAX_H2_MODULE_DIM {
            return Err(Error::SizeGuard {
                what: "module dimension for H²".into(),
                size: self.dim as u128,
                limit: MAX_H2_MODULE_DIM as u128,
            });
        }
        Ok(())
    }

    fn c1_index(&self, g: usize, i: usize) -> usize {
        g * self.dim + i
    }

    fn c2_index(&self, g: usize, h: usize, i: usize) -> usize {
        (g * self.group.order() + h) * self.dim + i
    }

    fn c3_index(&self, g: usize, h: usize, k: usize, i: usize) -> usize {
        let n = self.group.order();
        ((g * n + h) * n + k) * self.dim + i
    }

    pub fn c1_len(&self) -> usize {
        self.group.order() * self.dim
    }

    pub fn c2_len(&self) -> usize {
        self.group.order().pow(2) * self.dim
    }

    pub fn c3_len(&self) -> usize {
        self.group.order().pow(3) * self.dim
    }

    /// Value `λ(g,h)` of a 2-cochain given in `C²` coordinates.
    pub fn c2_value(&self, lambda: &BitVector, g: usize, h: usize) -> BitVector {
        BitVector::from_bools((0..self.dim).map(|i| lambda.get(self.c2_index(g, h, i))))
    }

    /// Flattens `λ(g,h)` values, `values[g·|G| + h]`, into `C²` coordinates.
    pub fn c2_from_values(&self, values: &[BitVector]) -> BitVector {
        let n = self.group.order();
        let mut out = BitVector::zeros(self.c2_len());
        for g in 0..n {
            for h in 0..n {
                for i in values[g * n + h].ones() {
                    out.set(self.c2_index(g, h, i), true);
                }
            }
        }
        out
    }

    /// Matrix of `d¹: C¹ → C²`.
    pub fn d1(&self) -> Result<BitMatrix> {
        self.check_caps()?;
        let n = self.group.order();
        let mut m = BitMatrix::zeros(self.c2_len(), self.c1_len());
        for g in 0..n {
            for h in 0..n {
                let gh = self.group.mul(g, h);
                for i in 0..self.dim {
                    let row = self.c2_index(g, h, i);
                    // f(g)·h contributes A_h[i][j] f(g)_j.
                    for j in 0..self.dim {
                        if self.actions[h].get(i, j) {
                            flip(&mut m, row, self.c1_index(g, j));
                        }
                    }
                    flip(&mut m, row, self.c1_index(gh, i));
                    flip(&mut m, row, self.c1_index(h, i));
                }
            }
        }
        Ok(m)
    }

    /// Matrix of `d²: C² → C³`.
    pub fn d2(&self) -> Result<BitMatrix> {
        self.check_caps()?;
        let n = self.group.order();
        let mut m = BitMatrix::zeros(self.c3_len(), self.c2_len());
        for g in 0..n {
            for h in 0..n {
                let gh = self.group.mul(g, h);
                for k in 0..n {
                    let hk = self.group.mul(h, k);
                    for i in 0..self.dim {
                        let row = self.c3_index(g, h, k, i);
                        for j in 0..self.dim {
                            if self.actions[k].get(i, j) {
                                flip(&mut m, row, self.c2_index(g, h, j));
                            }
                        }
                        flip(&mut m, row, self.c2_index(g, hk, i));
                        flip(&mut m, row, self.c2_index(gh, k, i));
                        flip(&mut m, row, self.c2_index(h, k, i));
                    }
                }
            }
        }
        Ok(m)
    }

    /// First `(g,h,k)` where `d²λ ≠ 0`, evaluated pointwise.
    pub fn cocycle_violation(&self, lambda: &BitVector) -> Option<(usize, usize, usize)> {
        let n = self.group.order();
        for g in 0..n {
            for h in 0..n {
                for k in 0..n {
                    let (gh, hk) = (self.group.mul(g, h), self.group.mul(h, k));
                    let mut v = self.act(&self.c2_value(lambda, g, h), k);
                    v.xor_assign(&self.c2_value(lambda, g, hk));
                    v.xor_assign(&self.c2_value(lambda, gh, k));
                    v.xor_assign(&self.c2_value(lambda, h, k));
                    if !v.is_zero() {
                        return Some((g, h, k));
                    }
                }
            }
        }
        None
    }
}

fn flip(m: &mut BitMatrix, r: usize, c: usize) {
    let v = m.get(r, c);
    m.set(r, c, !v);
}

#[derive(Clone, Debug, Serialize)]
pub struct H2Result {
    pub dim: usize,
    pub cocycle_dim: usize,
    pub coboundary_dim: usize,
    /// Basis of `ker d²` in `C²` coordinates.
    pub cocycle_basis: Vec<BitVector>,
    /// Basis of `im d¹` in `C²` coordinates.
    pub coboundary_basis: Vec<BitVector>,
    /// `d²∘d¹ = 0`.
    pub complex_ok: bool,
}

fn column_space(m: &BitMatrix) -> Vec<BitVector> {
    let t = m.transpose();
    let ech = t.echelon();
    ech.matrix.rows()[..ech.rank()].to_vec()
}

/// `dim H² = dim ker d² − rank d¹`.
pub fn h2(module: &GModule) -> Result<H2Result> {
    let d1 = module.d1()?;
    let d2 = module.d2()?;
    let complex_ok = d2.mul(&d1)?.is_zero();
    let cocycle_basis = d2.kernel();
    let coboundary_basis = column_space(&d1);
    Ok(H2Result {
        dim: cocycle_basis.len() - coboundary_basis.len(),
        cocycle_dim: cocycle_basis.len(),
        coboundary_dim: coboundary_basis.len(),
        cocycle_basis,
        coboundary_basis,
        complex_ok,
    })
}

/// `dim H²` by listing every 2-cochain and every 1-cochain; independent of
/// the differential matrices.
pub fn h2_dimension_exhaustive(module: &GModule) -> Result<usize> {
    let (c1, c2) = (module.c1_len(), module.c2_len());
    if c2 > MAX_EXHAUSTIVE_BITS {
        return Err(Error::SizeGuard {
            what: "2-cochain bits for exhaustive H²".into(),
            size: c2 as u128,
            limit: MAX_EXHAUSTIVE_BITS as u128,
        });
    }
    let n = module.group.order();
    let cocycles = (0..1u64 << c2)
        .filter(|&x| module.cocycle_violation(&BitVector::from_u64(c2, x)).is_none())
        .count();
    let mut coboundaries = std::collections::HashSet::new();
    for x in 0..1u64 << c1 {
        let f = |g: usize| BitVector::from_bools((0..module.dim).map(|i| x >> (g * module.dim + i) & 1 == 1));
        let mut values = Vec::with_capacity(n * n);
        for g in 0..n {
            for h in 0..n {
                let mut v = module.act(&f(g), h);
                v.xor_assign(&f(module.group.mul(g, h)));
                v.xor_assign(&f(h));
                values.push(v);
            }
        }
        coboundaries.insert(module.c2_from_values(&values).to_u64());
    }
    let ratio = cocycles / coboundaries.len();
    debug_assert!(ratio.is_power_of_two());
    Ok(ratio.trailing_zeros() as usize)
}

/// `λ = dΦ` as an `N`-valued 2-cochain.
#[derive(Clone, Debug)]
pub struct LambdaCochain {
    /// `λ(g,h)` as vectors over `𝒜`.
    pub values: TwoCochain,
    /// The same in `C²` coordinates over the basis of `N`.
    pub coords: BitVector,
}

impl LambdaCochain {
    pub fn is_zero(&self) -> bool {
        self.coords.is_zero()
    }
}

pub fn lambda_from_phase(phi: &PhaseFunction, action: &GroupAction, n: &ModuleV, module: &GModule) -> Result<LambdaCochain> {
    let values = phasefn::coboundary(phi, action);
    let order = action.order();
    let mut flat = Vec::with_capacity(order * order);
    for g in 0..order {
        for h in 0..order {
            flat.push(n.coordinates(values.get(g, h)).map_err(|_| Error::ImageOutsideN { g, h })?);
        }
    }
    let coords = module.c2_from_values(&flat);
    Ok(LambdaCochain { values, coords })
}

/// Canonical representative of `[λ]` modulo `im d¹`.
#[derive(Clone, Debug, Serialize)]
pub struct Classification {
    pub representative: BitVector,
    pub trivial: bool,
}

pub fn classify(lambda: &BitVector, module: &GModule) -> Result<Classification> {
    if let Some((g, h, k)) = module.cocycle_violation(lambda) {
        return Err(Error::CocycleViolation { g, h, k });
    }
    let coboundaries = column_space(&module.d1()?);
    let reducer = SpanReducer::new(module.c2_len(), &coboundaries)?;
    let representative = reducer.reduce(lambda);
    Ok(Classification { trivial: representative.is_zero(), representative })
}

pub fn same_class(a: &BitVector, b: &BitVector, module: &GModule) -> Result<bool> {
    Ok(classify(a, module)?.representative == classify(b, module)?.representative)
}

/// The group `E = {(g, n)}` with `(g,n)(h,n′) = (gh, λ(g,h) + n·h + n′)`.
#[derive(Clone, Debug)]
pub struct ExtensionGroup {
    pub group: FiniteGroup,
    /// `(g, coordinates of n as an integer)` for each element of `group`.
    pub labels: Vec<(usize, u64)>,
    pub normal_ok: bool,
    pub quotient_ok: bool,
}

impl ExtensionGroup {
    pub fn order(&self) -> usize {
        self.group.order()
    }
}

pub fn build_e(module: &GModule, lambda: &BitVector) -> Result<ExtensionGroup> {
    if let Some((g, h, k)) = module.cocycle_violation(lambda) {
        return Err(Error::CocycleViolation { g, h, k });
    }
    let order_g = module.group.order();
    let size_n = 1usize << module.dim;
    let total = order_g * size_n;
    if total > MAX_GROUP_ORDER {
        return Err(Error::SizeGuard { what: "extension group order".into(), size: total as u128, limit: MAX_GROUP_ORDER as u128 });
    }
    let vec_n = |x: usize| BitVector::from_u64(module.dim, x as u64);
    let mul = |x: usize, y: usize| -> usize {
        let (g, n) = (x / size_n, vec_n(x % size_n));
        let (h, n2) = (y / size_n, vec_n(y % size_n));
        let mut v = module.c2_value(lambda, g, h);
        v.xor_assign(&module.act(&n, h));
        v.xor_assign(&n2);
        module.group.mul(g, h) * size_n + v.to_u64() as usize
    };
    let raw: Vec<Vec<usize>> = (0..total).map(|x| (0..total).map(|y| mul(x, y)).collect()).collect();
    let identity = (0..total)
        .find(|&u| (0..total).all(|x| raw[u][x] == x && raw[x][u] == x))
        .ok_or_else(|| Error::InvalidGroup("extension has no identity".into()))?;
    // Relabel so the identity comes first.
    let relabel = |x: usize| if x == identity { 0 } else if x == 0 { identity } else { x };
    let table: Vec<Vec<usize>> =
        (0..total).map(|x| (0..total).map(|y| relabel(raw[relabel(x)][relabel(y)])).collect()).collect();
    let labels: Vec<(usize, u64)> = (0..total).map(|x| (relabel(x) / size_n, (relabel(x) % size_n) as u64)).collect();
    let generators = (0..total).filter(|&x| x != 0).collect::<Vec<_>>();
    for x in 0..total {
        for y in 0..total {
            for z in 0..total {
                if table[table[x][y]][z] != table[x][table[y][z]] {
                    return Err(Error::InvalidGroup(format!("extension not associative at ({x},{y},{z})")));
                }
            }
        }
    }
    let group = FiniteGroup::from_table(table, generators)?;
    // N = {(e, n)}: conjugates stay in N, and g-components multiply as in G.
    let in_n = |x: usize| labels[x].0 == 0;
    let normal_ok = (0..total)
        .all(|x| (0..total).filter(|&y| in_n(y)).all(|y| in_n(group.mul(group.mul(x, y), group.inv(x)))));
    let quotient_ok =
        (0..total).all(|x| (0..total).all(|y| labels[group.mul(x, y)].0 == module.group.mul(labels[x].0, labels[y].0)));
    Ok(ExtensionGroup { group, labels, normal_ok, quotient_ok })
}

/// `Ξ′(a) = Ξ(a)` where every `n ∈ N` vanishes at `a`, else `0`.
pub fn n_average(xi: &[f64], n: &ModuleV) -> Vec<f64> {
    xi.iter()
        .enumerate()
        .map(|(a, &x)| if n.basis().iter().all(|b| !b.get(a)) { x } else { 0.0 })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::builtin;

    fn klein() -> FiniteGroup {
        FiniteGroup::parse_spec("Z2xZ2").unwrap()
    }

    #[test]
    fn h2_of_small_groups() {
        let m = GModule::trivial(klein(), 1);
        let r = h2(&m).unwrap();
        assert!(r.complex_ok);
        assert_eq!(r.dim, 3);
        assert_eq!(h2_dimension_exhaustive(&m).unwrap(), 3);
        let z2 = GModule::trivial(FiniteGroup::parse_spec("Z2").unwrap(), 1);
        assert_eq!(h2(&z2).unwrap().dim, 1);
        assert_eq!(h2_dimension_exhaustive(&z2).unwrap(), 1);
        let zero = GModule::trivial(klein(), 0);
        assert_eq!(h2(&zero).unwrap().dim, 0);
    }

    #[test]
    fn h2_with_nontrivial_action() {
        // ℤ₂ swapping the two coordinates of ℤ₂²: the induced module has
        // vanishing cohomology in positive degree.
        let z2 = FiniteGroup::parse_spec("Z2").unwrap();
        let swap = BitMatrix::from_rows(2, vec![BitVector::unit(2, 1), BitVector::unit(2, 0)]).unwrap();
        let m = GModule::new(z2, 2, vec![BitMatrix::identity(2), swap]).unwrap();
        assert_eq!(h2(&m).unwrap().dim, 0);
        assert_eq!(h2_dimension_exhaustive(&m).unwrap(), 0);
    }

    #[test]
    fn ghz_n_and_lambda() {
        let f = builtin("ghz-or").unwrap();
        let inst = f.instance.as_ref().unwrap();
        let v = inst.module();
        let n = compute_n(inst.set(), &v).unwrap();
        assert_eq!(n.dim(), 3);
        for b in n.basis() {
            assert!(v.contains(b));
            assert!(inst.set().output_indices().iter().all(|&a| !b.get(a)));
        }
        let module = GModule::from_subgroup(inst.action(), &n).unwrap();
        let h = h2(&module).unwrap();
        assert!(h.complex_ok);
        let xi = inst.characteristic().unwrap();
        let family = phasefn::symmetry_solutions(&v, inst.action(), &xi).unwrap().unwrap();
        let lambda = lambda_from_phase(&family.particular, inst.action(), &n, &module).unwrap();
        assert!(!lambda.is_zero());
        assert!(!classify(&lambda.coords, &module).unwrap().trivial);
        let e = build_e(&module, &lambda.coords).unwrap();
        assert_eq!(e.order(), 4 * 8);
        assert!(e.normal_ok && e.quotient_ok);
        // Averaging over N leaves the GHZ characteristic function unchanged.
        assert_eq!(n_average(&xi, &n), xi);
    }

    #[test]
    fn offsets_shift_lambda_by_coboundaries() {
        let f = builtin("ghz-or").unwrap();
        let inst = f.instance.as_ref().unwrap();
        let v = inst.module();
        let n = compute_n(inst.set(), &v).unwrap();
        let module = GModule::from_subgroup(inst.action(), &n).unwrap();
        let xi = inst.characteristic().unwrap();
        let family = phasefn::symmetry_solutions(&v, inst.action(), &xi).unwrap().unwrap();
        let base = lambda_from_phase(&family.particular, inst.action(), &n, &module).unwrap();
        for member in family.members().unwrap().step_by(97) {
            let lam = lambda_from_phase(&member, inst.action(), &n, &module).unwrap();
            assert!(same_class(&lam.coords, &base.coords, &module).unwrap());
        }
    }

    #[test]
    fn exact_phase_gives_trivial_lambda() {
        let f = builtin("ghz-or").unwrap();
        let inst = f.instance.as_ref().unwrap();
        let v = inst.module();
        let n = compute_n(inst.set(), &v).unwrap();
        let module = GModule::from_subgroup(inst.action(), &n).unwrap();
        let constraints = inst.set().constraints();
        let s = crate::hvm::enumerate(inst.set()).member(5).unwrap();
        let phi = phasefn::from_assignment(&s, inst.action(), &constraints).unwrap();
        // Exact Φ from an assignment may take values outside N; λ is zero regardless.
        assert!(phasefn::coboundary(&phi, inst.action()).is_zero());
        let lambda = lambda_from_phase(&phi, inst.action(), &n, &module).unwrap();
        assert!(lambda.is_zero());
        assert!(classify(&lambda.coords, &module).unwrap().trivial);
        let e = build_e(&module, &lambda.coords).unwrap();
        assert!(e.normal_ok && e.quotient_ok);
    }

    #[test]
    fn corrupted_lambda_is_refused() {
        let f = builtin("ghz-or").unwrap();
        let inst = f.instance.as_ref().unwrap();
        let v = inst.module();
        let n = compute_n(inst.set(), &v).unwrap();
        let module = GModule::from_subgroup(inst.action(), &n).unwrap();
        let xi = inst.characteristic().unwrap();
        let family = phasefn::symmetry_solutions(&v, inst.action(), &xi).unwrap().unwrap();
        let mut lambda = lambda_from_phase(&family.particular, inst.action(), &n, &module).unwrap().coords;
        lambda.flip(module.c2_index(1, 2, 0));
        assert!(matches!(build_e(&module, &lambda), Err(Error::CocycleViolation { .. })));
        assert!(classify(&lambda, &module).is_err());
    }

    #[test]
    fn one_qubit_n_is_v() {
        let f = builtin("one-qubit").unwrap();
        let v = f.set.compute_v();
        let n = compute_n(&f.set, &v).unwrap();
        assert_eq!(n.dim(), v.dim());
        let empty = ModuleV::from_basis(4, vec![]).unwrap();
        let xi = vec![1.0, 0.3, -0.2, 0.5];
        assert_eq!(n_average(&xi, &empty), xi);
        assert_eq!(n_average(&xi, &n), vec![1.0, 0.0, 0.0, 0.0]);
    }
}
