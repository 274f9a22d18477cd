//! Phase functions `Φ: G → V` as 1-cochains, their coboundaries, and
//! cohomological contextuality certification.
//!
//! Following the usage in this field, `dΦ = 0` is called *exact*.

use serde::Serialize;

use crate::bitlinalg::{BitMatrix, BitVector};
use crate::error::{Error, Result};
use crate::obsset::{ConstraintSystem, ModuleV, ObservableSet};
use crate::symgroup::GroupAction;

/// Tolerance for comparisons of expectation values.
pub const TOLERANCE: f64 = 1e-9;

/// Largest family dimension for which members are enumerated.
pub const MAX_FAMILY_DIM: usize = 20;

/// Largest number of rows in the certification system.
pub const MAX_SYSTEM_ROWS: usize = 1 << 22;

/// `Φ_g` for every element `g`, each a vector over 𝒜.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PhaseFunction {
    values: Vec<BitVector>,
}

impl PhaseFunction {
    pub fn zero(order: usize, len: usize) -> Self {
        PhaseFunction { values: vec![BitVector::zeros(len); order] }
    }

    pub fn new(values: Vec<BitVector>) -> Self {
        PhaseFunction { values }
    }

    /// Builds `Φ` from concatenated V-coordinates, `dim` bits per element.
    pub fn from_coordinates(coords: &BitVector, module: &ModuleV, order: usize) -> Self {
        let dim = module.dim();
        let values = (0..order)
            .map(|g| module.element(&BitVector::from_bools((0..dim).map(|i| coords.get(g * dim + i)))))
            .collect();
        PhaseFunction { values }
    }

    pub fn coordinates(&self, module: &ModuleV) -> Result<BitVector> {
        let mut out = BitVector::zeros(0);
        for v in &self.values {
            out = out.concat(&module.coordinates(v)?);
        }
        Ok(out)
    }

    pub fn order(&self) -> usize {
        self.values.len()
    }

    pub fn value(&self, g: usize) -> &BitVector {
        &self.values[g]
    }

    pub fn values(&self) -> &[BitVector] {
        &self.values
    }

    pub fn get(&self, g: usize, a: usize) -> bool {
        self.values[g].get(a)
    }

    pub fn add(&self, other: &PhaseFunction) -> PhaseFunction {
        PhaseFunction { values: self.values.iter().zip(&other.values).map(|(x, y)| x.xor(y)).collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(BitVector::is_zero)
    }

    /// Every `Φ_g` lies in the module.
    pub fn check_in_module(&self, module: &ModuleV) -> Result<()> {
        self.values.iter().try_for_each(|v| module.coordinates(v).map(|_| ()))
    }
}

/// A function `G × G → ℤ₂^𝒜`, stored row-major in `(g, h)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwoCochain {
    order: usize,
    values: Vec<BitVector>,
}

impl TwoCochain {
    pub fn zero(order: usize, len: usize) -> Self {
        TwoCochain { order, values: vec![BitVector::zeros(len); order * order] }
    }

    pub fn from_fn(order: usize, mut f: impl FnMut(usize, usize) -> BitVector) -> Self {
        let values = (0..order * order).map(|i| f(i / order, i % order)).collect();
        TwoCochain { order, values }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn get(&self, g: usize, h: usize) -> &BitVector {
        &self.values[g * self.order + h]
    }

    pub fn get_mut(&mut self, g: usize, h: usize) -> &mut BitVector {
        &mut self.values[g * self.order + h]
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(BitVector::is_zero)
    }

    /// First `(g, h, a)` with a nonzero entry.
    pub fn first_nonzero(&self) -> Option<(usize, usize, usize)> {
        self.values
            .iter()
            .enumerate()
            .find_map(|(i, v)| v.ones().next().map(|a| (i / self.order, i % self.order, a)))
    }
}

/// `(dΦ)_{g,h}(a) = Φ_g(ha) + Φ_h(a) + Φ_{gh}(a)`.
pub fn coboundary(phi: &PhaseFunction, action: &GroupAction) -> TwoCochain {
    let group = action.group();
    TwoCochain::from_fn(group.order(), |g, h| {
        let mut v = action.element(h).pull_back(phi.value(g));
        v.xor_assign(phi.value(h));
        v.xor_assign(phi.value(group.mul(g, h)));
        v
    })
}

pub fn is_exact(phi: &PhaseFunction, action: &GroupAction) -> bool {
    coboundary(phi, action).is_zero()
}

/// `Φ_g(a) = s(ga) + s(a)` for a consistent assignment `s`.
pub fn from_assignment(s: &BitVector, action: &GroupAction, constraints: &ConstraintSystem) -> Result<PhaseFunction> {
    if let Some(row) = constraints.first_violation(s) {
        return Err(Error::InconsistentAssignment { row });
    }
    if s.len() != constraints.n_columns() {
        return Err(Error::DimensionMismatch {
            context: "value assignment",
            expected: constraints.n_columns(),
            found: s.len(),
        });
    }
    Ok(PhaseFunction::new(action.elements().iter().map(|h| h.pull_back(s).xor(s)).collect()))
}

/// `o(g) = Φ_g(b_e) + o_e`.
pub fn output_function(phi: &PhaseFunction, set: &ObservableSet, b_e: usize, o_e: u8) -> Result<Vec<u8>> {
    if b_e >= set.len() || !set.is_output(b_e) {
        return Err(Error::NotOutputIndex(b_e));
    }
    Ok((0..phi.order()).map(|g| phi.get(g, b_e) as u8 ^ o_e).collect())
}

/// Affine family `particular + span(directions)` of phase functions.
#[derive(Clone, Debug)]
pub struct PhaseFamily {
    pub particular: PhaseFunction,
    pub directions: Vec<PhaseFunction>,
}

impl PhaseFamily {
    pub fn dim(&self) -> usize {
        self.directions.len()
    }

    pub fn member(&self, index: u64) -> PhaseFunction {
        let mut phi = self.particular.clone();
        for (i, d) in self.directions.iter().enumerate() {
            if index >> i & 1 == 1 {
                phi = phi.add(d);
            }
        }
        phi
    }

    pub fn members(&self) -> Result<impl Iterator<Item = PhaseFunction> + '_> {
        if self.dim() > MAX_FAMILY_DIM {
            return Err(Error::SizeGuard {
                what: "phase-function family dimension".into(),
                size: self.dim() as u128,
                limit: MAX_FAMILY_DIM as u128,
            });
        }
        Ok((0..1u64 << self.dim()).map(|i| self.member(i)))
    }
}

/// A member of `family` with `dΦ = 0`, if any. Exactness is linear, so this
/// is one affine solve over the family coordinates.
pub fn exact_member(family: &PhaseFamily, action: &GroupAction) -> Result<Option<PhaseFunction>> {
    let flatten = |c: &TwoCochain| {
        let order = c.order();
        let mut bits = Vec::new();
        for g in 0..order {
            for h in 0..order {
                bits.extend(c.get(g, h).iter());
            }
        }
        BitVector::from_bools(bits)
    };
    let target = flatten(&coboundary(&family.particular, action));
    let columns: Vec<BitVector> = family.directions.iter().map(|d| flatten(&coboundary(d, action))).collect();
    let m = BitMatrix::from_columns(target.len(), &columns)?;
    Ok(m.solve_affine(&target)?.map(|sol| {
        let mut phi = family.particular.clone();
        for i in sol.particular.ones() {
            phi = phi.add(&family.directions[i]);
        }
        phi
    }))
}

/// Unknowns are the V-coordinates of every `Φ_g`, `dim V` bits per element.
fn unknown(g: usize, i: usize, dim: usize) -> usize {
    g * dim + i
}

/// All `Φ` with `Φ_g ∈ V` and `Ξ(ga) = (−1)^{Φ_g(a)} Ξ(a)` wherever `Ξ(a) ≠ 0`.
///
/// Returns `Ok(None)` if the sign pattern admits no such `Φ`, and an error if
/// `|Ξ(ga)| ≠ |Ξ(a)|` somewhere.
pub fn symmetry_solutions(module: &ModuleV, action: &GroupAction, xi: &[f64]) -> Result<Option<PhaseFamily>> {
    let n = module.len();
    if xi.len() != n {
        return Err(Error::DimensionMismatch { context: "characteristic function", expected: n, found: xi.len() });
    }
    let order = action.order();
    let dim = module.dim();
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    for g in 0..order {
        let h = action.element(g);
        for a in 0..n {
            let image = h.image(a);
            if (xi[image].abs() - xi[a].abs()).abs() > TOLERANCE {
                return Err(Error::NotSymmetric { element: g, index: a, image });
            }
            if xi[a].abs() <= TOLERANCE {
                continue;
            }
            let mut row = BitVector::zeros(order * dim);
            for (i, b) in module.basis().iter().enumerate() {
                row.set(unknown(g, i, dim), b.get(a));
            }
            rows.push(row);
            rhs.push((xi[image] < 0.0) != (xi[a] < 0.0));
        }
    }
    let m = BitMatrix::from_rows(order * dim, rows)?;
    let Some(sol) = m.solve_affine(&BitVector::from_bools(rhs))? else {
        return Ok(None);
    };
    let particular = PhaseFunction::from_coordinates(&sol.particular, module, order);
    let directions = sol.kernel.iter().map(|k| PhaseFunction::from_coordinates(k, module, order)).collect();
    Ok(Some(PhaseFamily { particular, directions }))
}

/// Label of one equation in the certification system.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SystemRow {
    /// `Φ_g(b_e) = o(g) + o_e`.
    Output { g: usize },
    /// `(dΦ)_{g,h}(a) = 0`.
    Cocycle { g: usize, h: usize, a: usize },
}

#[derive(Clone, Debug)]
pub enum Prop1Verdict {
    /// No exact `Φ` satisfies the output relation; the listed rows sum to `0 = 1`.
    ContextualByProp1 { certificate: Vec<SystemRow> },
    /// An exact `Φ` reproducing `o` exists; this proves nothing either way.
    InconclusiveWithExactWitness(PhaseFunction),
}

impl Prop1Verdict {
    pub fn is_contextual(&self) -> bool {
        matches!(self, Prop1Verdict::ContextualByProp1 { .. })
    }
}

fn row_equation(
    row: SystemRow,
    module: &ModuleV,
    action: &GroupAction,
    o: &[u8],
    b_e: usize,
    o_e: u8,
) -> (BitVector, bool) {
    let dim = module.dim();
    let mut coeffs = BitVector::zeros(action.order() * dim);
    match row {
        SystemRow::Output { g } => {
            for (i, b) in module.basis().iter().enumerate() {
                coeffs.set(unknown(g, i, dim), b.get(b_e));
            }
            (coeffs, o[g] ^ o_e == 1)
        }
        SystemRow::Cocycle { g, h, a } => {
            let gh = action.group().mul(g, h);
            let ha = action.element(h).image(a);
            for (i, b) in module.basis().iter().enumerate() {
                if b.get(ha) {
                    coeffs.flip(unknown(g, i, dim));
                }
                if b.get(a) {
                    coeffs.flip(unknown(h, i, dim));
                    coeffs.flip(unknown(gh, i, dim));
                }
            }
            (coeffs, false)
        }
    }
}

fn check_output_args(module: &ModuleV, action: &GroupAction, o: &[u8], b_e: usize) -> Result<()> {
    if o.len() != action.order() {
        return Err(Error::DimensionMismatch { context: "output function", expected: action.order(), found: o.len() });
    }
    if b_e >= module.len() {
        return Err(Error::IndexOutOfRange { index: b_e, limit: module.len() });
    }
    Ok(())
}

/// Decides whether some `Φ` with `Φ_g ∈ V`, `Φ_g(b_e) = o(g) + o_e` and
/// `dΦ = 0` exists.
pub fn certify_contextuality(
    module: &ModuleV,
    action: &GroupAction,
    o: &[u8],
    b_e: usize,
    o_e: u8,
) -> Result<Prop1Verdict> {
    check_output_args(module, action, o, b_e)?;
    let order = action.order();
    let n = module.len();
    let n_rows = order + order * order * n;
    if n_rows > MAX_SYSTEM_ROWS {
        return Err(Error::SizeGuard {
            what: "certification system rows".into(),
            size: n_rows as u128,
            limit: MAX_SYSTEM_ROWS as u128,
        });
    }
    let labels = (0..order).map(|g| SystemRow::Output { g }).chain(
        (0..order).flat_map(|g| (0..order).flat_map(move |h| (0..n).map(move |a| SystemRow::Cocycle { g, h, a }))),
    );
    let mut kept = Vec::new();
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    for label in labels {
        let (coeffs, bit) = row_equation(label, module, action, o, b_e, o_e);
        if coeffs.is_zero() && !bit {
            continue;
        }
        kept.push(label);
        rows.push(coeffs);
        rhs.push(bit);
    }
    let m = BitMatrix::from_rows(order * module.dim(), rows)?;
    let b = BitVector::from_bools(rhs);
    match m.solve_affine(&b)? {
        Some(sol) => Ok(Prop1Verdict::InconclusiveWithExactWitness(PhaseFunction::from_coordinates(
            &sol.particular,
            module,
            order,
        ))),
        None => {
            let y = m.infeasibility_certificate(&b)?.expect("inconsistent system has a certificate");
            Ok(Prop1Verdict::ContextualByProp1 { certificate: y.ones().map(|r| kept[r]).collect() })
        }
    }
}

/// Re-derives the equations named by `certificate` and checks they sum to `0 = 1`.
pub fn verify_prop1_certificate(
    module: &ModuleV,
    action: &GroupAction,
    o: &[u8],
    b_e: usize,
    o_e: u8,
    certificate: &[SystemRow],
) -> Result<bool> {
    check_output_args(module, action, o, b_e)?;
    let order = action.order();
    let mut sum = BitVector::zeros(order * module.dim());
    let mut bit = false;
    for &row in certificate {
        let in_range = match row {
            SystemRow::Output { g } => g < order,
            SystemRow::Cocycle { g, h, a } => g < order && h < order && a < module.len(),
        };
        if !in_range {
            return Ok(false);
        }
        let (coeffs, b) = row_equation(row, module, action, o, b_e, o_e);
        sum.xor_assign(&coeffs);
        bit ^= b;
    }
    Ok(sum.is_zero() && bit)
}
