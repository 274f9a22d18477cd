//! Quasi-probability functions on the phase space `V`.
//!
//! Phase points are indexed by their coordinates in the basis of `V`, read as
//! a binary number with basis vector 0 in the least significant bit.

use serde::Serialize;

use crate::bitlinalg::BitVector;
use crate::error::{Error, Result};
use crate::obsset::{ModuleV, ObservableSet};
use crate::pauli::{self, CMatrix};
use crate::phasefn::PhaseFunction;
use crate::quantum::QuantumState;
use crate::symgroup::GroupAction;

/// Largest `dim V` for which `Q` is tabulated.
pub const MAX_PHASE_SPACE_DIM: usize = 16;

/// Largest `dim V` for dense phase-point operator checks.
pub const MAX_DENSE_PHASE_SPACE_DIM: usize = 12;

pub const TOLERANCE: f64 = 1e-9;

fn check_dim(module: &ModuleV, limit: usize) -> Result<()> {
    if module.dim() > limit {
        return Err(Error::SizeGuard {
            what: "phase space size 2^dim".into(),
            size: 1u128 << module.dim(),
            limit: 1u128 << limit,
        });
    }
    Ok(())
}

fn check_separation(module: &ModuleV) -> Result<()> {
    match module.separation_failure() {
        Some((a, b)) => Err(Error::SeparationFails(a, b)),
        None => Ok(()),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct QuasiProbability {
    /// `Q(v)` for `v = element_at(i)`.
    pub values: Vec<f64>,
}

impl QuasiProbability {
    pub fn total(&self) -> f64 {
        self.values.iter().sum()
    }

    /// Distinct values up to `tol`, ascending.
    pub fn distinct_values(&self, tol: f64) -> Vec<f64> {
        let mut sorted = self.values.clone();
        sorted.sort_by(f64::total_cmp);
        sorted.dedup_by(|a, b| (*a - *b).abs() <= tol);
        sorted
    }

    pub fn at(&self, module: &ModuleV, v: &BitVector) -> Result<f64> {
        Ok(self.values[module.coordinates(v)?.to_u64() as usize])
    }
}

/// `A_v = (1/|V|) Σ_a (−1)^{v(a)} T_a`.
pub fn phase_point(set: &ObservableSet, module: &ModuleV, v: &BitVector) -> Result<CMatrix> {
    check_separation(module)?;
    check_dim(module, MAX_DENSE_PHASE_SPACE_DIM)?;
    if !module.contains(v) {
        return Err(Error::NotInModule);
    }
    let dim = 1usize << set.n_qubits();
    let mut acc = CMatrix::zeros(dim, dim);
    for (a, t) in set.observables().iter().enumerate() {
        let m = pauli::to_matrix(t)?;
        if v.get(a) {
            acc -= m;
        } else {
            acc += m;
        }
    }
    Ok(acc.unscale((1u64 << module.dim()) as f64))
}

/// `Q(v) = (1/|V|) Σ_a (−1)^{v(a)} Ξ(a)`, valid for any `Ξ` including affine
/// mixtures of pure-state characteristic functions.
pub fn from_characteristic(xi: &[f64], module: &ModuleV) -> Result<QuasiProbability> {
    check_dim(module, MAX_PHASE_SPACE_DIM)?;
    if xi.len() != module.len() {
        return Err(Error::DimensionMismatch { context: "characteristic function", expected: module.len(), found: xi.len() });
    }
    let size = 1u64 << module.dim();
    let values = (0..size)
        .map(|i| {
            let v = module.element_at(i);
            xi.iter().enumerate().map(|(a, x)| if v.get(a) { -x } else { *x }).sum::<f64>() / size as f64
        })
        .collect();
    Ok(QuasiProbability { values })
}

/// `Q_ψ(v) = ⟨ψ|A_v|ψ⟩`.
pub fn quasiprob(state: &QuantumState, set: &ObservableSet, module: &ModuleV) -> Result<QuasiProbability> {
    check_separation(module)?;
    from_characteristic(&state.characteristic(set)?, module)
}

/// `Ξ(a) = Σ_v (−1)^{v(a)} Q(v)`.
pub fn fourier(q: &QuasiProbability, module: &ModuleV) -> Vec<f64> {
    let mut xi = vec![0.0; module.len()];
    for (i, &value) in q.values.iter().enumerate() {
        let v = module.element_at(i as u64);
        for (a, x) in xi.iter_mut().enumerate() {
            *x += if v.get(a) { -value } else { value };
        }
    }
    xi
}

/// `p_s(a) = Σ_{v : v(a) = s} Q(v)`.
pub fn outcome_prob(q: &QuasiProbability, module: &ModuleV, a: usize, s: u8) -> Result<f64> {
    if a >= module.len() {
        return Err(Error::IndexOutOfRange { index: a, limit: module.len() });
    }
    Ok(q.values
        .iter()
        .enumerate()
        .filter(|&(i, _)| module.element_at(i as u64).bit(a) == s)
        .map(|(_, q)| q)
        .sum())
}

/// `Σ_v (−1)^{v(a)+v(b)} = |V| δ_{ab}` for every pair.
pub fn check_orthogonality(module: &ModuleV) -> Result<bool> {
    check_dim(module, MAX_DENSE_PHASE_SPACE_DIM)?;
    let points: Vec<BitVector> = module.elements()?;
    let size = points.len() as i64;
    for a in 0..module.len() {
        for b in a..module.len() {
            let sum: i64 = points.iter().map(|v| if v.get(a) ^ v.get(b) { -1 } else { 1 }).sum();
            if sum != if a == b { size } else { 0 } {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[derive(Clone, Debug, Serialize)]
pub struct ElementCovariance {
    pub element: usize,
    /// `S_g` in `V`-coordinates, row by row.
    pub matrix: Vec<BitVector>,
    pub invertible: bool,
    pub fixes_origin: bool,
    /// `u(g) A_v u(g)† = A_{S_g v}` for every `v`, checked densely.
    pub conjugation_verified: Option<bool>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CovarianceReport {
    pub elements: Vec<ElementCovariance>,
    /// First `(g, v-index)` where the dense check failed.
    pub mismatch: Option<(usize, u64)>,
}

impl CovarianceReport {
    pub fn holds(&self) -> bool {
        self.mismatch.is_none()
            && self.elements.iter().all(|e| e.invertible && e.fixes_origin && e.conjugation_verified != Some(false))
    }
}

/// Checks `v ↦ v∘g⁻¹` for each element, and the operator identity wherever
/// the element has a circuit.
pub fn check_covariance(set: &ObservableSet, module: &ModuleV, action: &GroupAction) -> Result<CovarianceReport> {
    if let Some((element, index)) = action.sign_violation() {
        return Err(Error::NotInputGroup { element, index });
    }
    check_separation(module)?;
    check_dim(module, MAX_DENSE_PHASE_SPACE_DIM)?;
    let points = module.elements()?;
    let operators = points.iter().map(|v| phase_point(set, module, v)).collect::<Result<Vec<_>>>()?;
    let mut elements = Vec::new();
    let mut mismatch = None;
    for g in 0..action.order() {
        let s = action.module_matrix(g, module)?;
        let zero = BitVector::zeros(module.dim());
        let fixes_origin = s.mul_vec(&zero)?.is_zero();
        let invertible = s.rank() == module.dim();
        let conjugation_verified = match action.element_unitary(g, set.n_qubits()) {
            None => None,
            Some(u) => {
                let u = u?;
                let ud = u.adjoint();
                let mut ok = true;
                for (i, v) in points.iter().enumerate() {
                    let image = action.element(g).push_forward(v);
                    let j = module.coordinates(&image)?.to_u64() as usize;
                    if pauli::max_abs_diff(&(&u * &operators[i] * &ud), &operators[j]) > TOLERANCE {
                        ok = false;
                        mismatch.get_or_insert((g, i as u64));
                        break;
                    }
                }
                Some(ok)
            }
        };
        elements.push(ElementCovariance {
            element: g,
            matrix: s.rows().to_vec(),
            invertible,
            fixes_origin,
            conjugation_verified,
        });
    }
    Ok(CovarianceReport { elements, mismatch })
}

/// For a `G`-symmetric state, `Q(S_g v) = Q(v + Φ_g)`: each input acts on
/// `Q` as a linear map followed by the translation by `Φ_g`.
pub fn check_translation(q: &QuasiProbability, module: &ModuleV, action: &GroupAction, phi: &PhaseFunction) -> Result<bool> {
    for g in 0..action.order() {
        for i in 0..q.values.len() {
            let v = module.element_at(i as u64);
            let image = q.at(module, &action.element(g).push_forward(&v))?;
            let shifted = q.at(module, &v.xor(phi.value(g)))?;
            if (image - shifted).abs() > TOLERANCE {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::builtin;
    use crate::pauli::pauli;
    use crate::phasefn;
    use num_complex::Complex64;

    #[test]
    fn ghz_values() {
        let f = builtin("ghz-or").unwrap();
        let inst = f.instance.as_ref().unwrap();
        let module = inst.module();
        let q = quasiprob(inst.state(), inst.set(), &module).unwrap();
        assert_eq!(q.values.len(), 64);
        let distinct = q.distinct_values(1e-12);
        assert_eq!(distinct.len(), 2);
        assert!((distinct[0] + 1.0 / 64.0).abs() < 1e-12);
        assert!((distinct[1] - 3.0 / 64.0).abs() < 1e-12);
        assert!((q.total() - 1.0).abs() < 1e-12);
        let xi = inst.characteristic().unwrap();
        let back = fourier(&q, &module);
        assert!(xi.iter().zip(&back).all(|(a, b)| (a - b).abs() < 1e-9));
    }

    #[test]
    fn trace_formula_matches_dense_operators() {
        let f = builtin("ghz-or").unwrap();
        let inst = f.instance.as_ref().unwrap();
        let module = inst.module();
        let q = quasiprob(inst.state(), inst.set(), &module).unwrap();
        let psi = nalgebra::DVector::from_column_slice(inst.state().amplitudes());
        for (i, v) in module.elements().unwrap().iter().enumerate().step_by(7) {
            let a = phase_point(inst.set(), &module, v).unwrap();
            assert!(pauli::max_abs_diff(&a, &a.adjoint()) < 1e-12);
            let tr = (psi.adjoint() * &a * &psi)[(0, 0)];
            assert!((tr.re - q.values[i]).abs() < 1e-12 && tr.im.abs() < 1e-12);
        }
    }

    #[test]
    fn one_qubit_points() {
        let f = builtin("one-qubit").unwrap();
        let module = f.set.compute_v();
        assert_eq!(module.dim(), 3);
        let eighth = Complex64::new(0.125, 0.0);
        for v in module.elements().unwrap() {
            let a = phase_point(&f.set, &module, &v).unwrap();
            let mut expected = pauli::to_matrix(&pauli("I")).unwrap();
            for (k, p) in ["X", "Y", "Z"].iter().enumerate() {
                let m = pauli::to_matrix(&pauli(p)).unwrap();
                if v.get(k + 1) {
                    expected -= m;
                } else {
                    expected += m;
                }
            }
            assert!(pauli::max_abs_diff(&a, &(expected * eighth)) < 1e-12);
        }
        let q = quasiprob(f.state.as_ref().unwrap(), &f.set, &module).unwrap();
        for (i, value) in q.values.iter().enumerate() {
            let v = module.element_at(i as u64);
            let expected = if v.get(3) { 0.0 } else { 0.25 };
            assert!((value - expected).abs() < 1e-12);
        }
    }

    #[test]
    fn outcome_probabilities() {
        let f = builtin("ghz-or").unwrap();
        let inst = f.instance.as_ref().unwrap();
        let module = inst.module();
        let q = quasiprob(inst.state(), inst.set(), &module).unwrap();
        let xxx = inst.set().index_of_str("XXX").unwrap();
        let x1 = inst.set().index_of_str("XII").unwrap();
        assert!((outcome_prob(&q, &module, xxx, 0).unwrap() - 1.0).abs() < 1e-12);
        for s in 0..2 {
            assert!((outcome_prob(&q, &module, x1, s).unwrap() - 0.5).abs() < 1e-12);
        }
    }

    #[test]
    fn covariance_and_translation() {
        let f = builtin("ghz-or").unwrap();
        let inst = f.instance.as_ref().unwrap();
        let module = inst.module();
        let report = check_covariance(inst.set(), &module, inst.action()).unwrap();
        assert!(report.holds());
        assert_eq!(report.elements.len(), 4);
        assert!(report.elements.iter().all(|e| e.conjugation_verified == Some(true)));
        let q = quasiprob(inst.state(), inst.set(), &module).unwrap();
        let xi = inst.characteristic().unwrap();
        let family = phasefn::symmetry_solutions(&module, inst.action(), &xi).unwrap().unwrap();
        assert!(check_translation(&q, &module, inst.action(), &family.particular).unwrap());
        assert!(check_orthogonality(&module).unwrap());
    }

    #[test]
    fn separation_failure_is_refused() {
        let f = builtin("one-qubit").unwrap();
        let module = ModuleV::from_basis(4, vec![BitVector::from_indices(4, [1, 2]), BitVector::unit(4, 3)]).unwrap();
        assert_eq!(phase_point(&f.set, &module, &module.zero()), Err(Error::SeparationFails(1, 2)));
        assert!(quasiprob(f.state.as_ref().unwrap(), &f.set, &module).is_err());
    }
}
