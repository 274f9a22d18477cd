//! The full analysis pipeline behind the command-line reports.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::ext::{self, GModule};
use crate::fixtures::Fixture;
use crate::hvm::{self, DeltaResult};
use crate::instance::LoadedInstance;
use crate::obsset::{ModuleV, ObservableSet};
use crate::phasefn::{self, Prop1Verdict, SystemRow};
use crate::proofs::{self, CertificateJson};
use crate::quantum::{IdealOutput, MbqcInstance, QuantumState};
use crate::quasi;
use crate::symgroup::GroupAction;

#[derive(Clone, Debug)]
pub struct Options {
    pub seed: u64,
    pub shots: usize,
}

impl Default for Options {
    fn default() -> Self {
        Options { seed: 0, shots: 1000 }
    }
}

/// What to analyze: a set with its groups, and optionally a computation.
pub struct Subject<'a> {
    pub name: String,
    pub set: &'a ObservableSet,
    pub action: &'a GroupAction,
    pub extended: Option<&'a GroupAction>,
    pub instance: Option<&'a MbqcInstance>,
    pub state: Option<&'a QuantumState>,
    pub target: Option<Vec<u8>>,
}

impl<'a> Subject<'a> {
    pub fn from_fixture(f: &'a Fixture) -> Self {
        Subject {
            name: f.name.to_string(),
            set: &f.set,
            action: &f.action,
            extended: f.extended.as_ref(),
            instance: f.instance.as_ref(),
            state: f.state.as_ref(),
            target: f.target.clone(),
        }
    }

    pub fn from_loaded(l: &'a LoadedInstance) -> Self {
        Subject {
            name: l.instance.name.clone(),
            set: l.instance.set(),
            action: l.instance.action(),
            extended: None,
            instance: Some(&l.instance),
            state: Some(l.instance.state()),
            target: Some(l.target.clone()),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Summary {
    pub name: String,
    pub n_qubits: usize,
    pub observables: Vec<String>,
    pub measurable: Vec<usize>,
    pub outputs: Vec<usize>,
    pub constraint_rows: usize,
    pub product_triples: usize,
    pub dim_v: usize,
    pub separation: bool,
    pub group_order: usize,
    pub group_elements: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ComputationReport {
    pub reference_context: Vec<usize>,
    pub b_e: usize,
    pub contexts: Vec<Vec<String>>,
    pub target: Vec<u8>,
    pub ideal_outputs: Vec<IdealOutput>,
    pub witness: f64,
    pub sampling: SamplingReport,
}

#[derive(Clone, Debug, Serialize)]
pub struct SamplingReport {
    pub seed: u64,
    pub shots: usize,
    /// Runs per input whose output differs from the target.
    pub mismatches: Vec<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct PhaseReport {
    pub symmetric: bool,
    pub family_dim: Option<usize>,
    /// Some symmetry-compatible `Φ` has `dΦ = 0`.
    pub exact_member_exists: Option<bool>,
}

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Prop1Report {
    Contextual { certificate: Vec<SystemRow>, verified: bool },
    Inconclusive { witness_outputs: Vec<u8> },
}

#[derive(Clone, Debug, Serialize)]
pub struct HvmReport {
    pub assignment_space_dim: Option<usize>,
    pub assignment_count: u128,
    pub lemma1: Option<hvm::Lemma1Report>,
    pub delta: Option<DeltaResult>,
    pub classical_witness_bound: Option<usize>,
    pub parity_lower_bound: Option<bool>,
    pub reduction_table: Option<Vec<usize>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ProofReport {
    pub parity: Option<CertificateJson>,
    pub symmetry: Option<CertificateJson>,
    pub symmetry_element: Option<String>,
    pub related_parity_valid: Option<bool>,
    /// No element of the searched group flips a sign.
    pub lemma4_obstruction: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct QuasiReport {
    pub points: usize,
    pub distinct_values: Vec<f64>,
    pub negative_points: usize,
    pub total: f64,
    pub fourier_round_trip: bool,
    pub covariance: Option<bool>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ExtensionReport {
    pub dim_n: usize,
    pub h2_dim: Option<usize>,
    pub lambda_trivial: Option<bool>,
    pub extension_order: Option<usize>,
    pub note: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct AnalysisReport {
    pub summary: Summary,
    pub characteristic: Option<Vec<f64>>,
    pub computation: Option<ComputationReport>,
    pub phase: Option<PhaseReport>,
    pub prop1: Option<Prop1Report>,
    pub hvm: HvmReport,
    pub proofs: ProofReport,
    pub quasi: Option<QuasiReport>,
    pub extension: Option<ExtensionReport>,
}

fn describe(set: &ObservableSet, indices: &[usize]) -> Vec<String> {
    indices.iter().map(|&a| set.observable(a).to_string()).collect()
}

pub fn summary(subject: &Subject) -> Summary {
    let constraints = subject.set.constraints();
    let module = subject.set.compute_v();
    Summary {
        name: subject.name.clone(),
        n_qubits: subject.set.n_qubits(),
        observables: describe(subject.set, &(0..subject.set.len()).collect::<Vec<_>>()),
        measurable: subject.set.measurable_indices(),
        outputs: subject.set.output_indices(),
        constraint_rows: constraints.len(),
        product_triples: constraints.triples().count(),
        dim_v: module.dim(),
        separation: module.check_separation(),
        group_order: subject.action.order(),
        group_elements: subject.action.group().names().to_vec(),
    }
}

pub fn computation(instance: &MbqcInstance, target: &[u8], opts: &Options) -> Result<ComputationReport> {
    let order = instance.action().order();
    let mut mismatches = vec![0; order];
    for (g, miss) in mismatches.iter_mut().enumerate() {
        let samples = instance.sample(g, opts.shots, opts.seed.wrapping_add(g as u64))?;
        *miss = samples.iter().filter(|&&b| b != target[g]).count();
    }
    Ok(ComputationReport {
        reference_context: instance.reference_context().to_vec(),
        b_e: instance.b_e(),
        contexts: (0..order).map(|g| describe(instance.set(), &instance.context(g))).collect(),
        target: target.to_vec(),
        ideal_outputs: instance.ideal_outputs()?,
        witness: instance.witness(target)?,
        sampling: SamplingReport { seed: opts.seed, shots: opts.shots, mismatches },
    })
}

pub fn hvm_report(subject: &Subject, b_e: Option<usize>) -> Result<HvmReport> {
    let space = hvm::enumerate(subject.set);
    let lemma1 = match space.dim() {
        Some(d) if d <= hvm::MAX_LEMMA1_DIM => Some(hvm::check_lemma1(&space, subject.action, subject.set)?),
        _ => None,
    };
    let mut report = HvmReport {
        assignment_space_dim: space.dim(),
        assignment_count: space.count(),
        lemma1,
        delta: None,
        classical_witness_bound: None,
        parity_lower_bound: None,
        reduction_table: None,
    };
    if let (Some(target), Some(b_e)) = (&subject.target, b_e) {
        if let Some(d) = hvm::delta(&space, subject.action, target, b_e)? {
            let constraints = subject.set.constraints();
            let reduction = hvm::classical_reduction(target, &d.argmin, subject.action, &constraints, b_e)?;
            report.classical_witness_bound = Some(d.classical_witness_bound());
            report.parity_lower_bound = Some(hvm::parity_lower_bound(&space, subject.action, target, b_e)?);
            report.reduction_table = Some(reduction.table);
            report.delta = Some(d);
        }
    }
    Ok(report)
}

pub fn proof_report(subject: &Subject) -> Result<ProofReport> {
    let constraints = subject.set.constraints();
    let group = subject.extended.unwrap_or(subject.action);
    let parity = proofs::find_parity_proof(&constraints).map(|c| CertificateJson::from_parity(&c, &constraints));
    let symmetry = proofs::find_symmetry_proof(&constraints, group)?;
    let related_parity_valid = match &symmetry {
        Some(cert) => Some(proofs::relate(cert, &constraints, group)?.verify(&constraints)),
        None => None,
    };
    Ok(ProofReport {
        parity,
        symmetry_element: symmetry.as_ref().map(|c| group.group().name(c.h).to_string()),
        symmetry: symmetry.map(|c| CertificateJson::from_symmetry(&c, &constraints, group)),
        related_parity_valid,
        lemma4_obstruction: proofs::check_lemma4(group),
    })
}

pub fn quasi_report(subject: &Subject, module: &ModuleV, state: &QuantumState) -> Result<Option<QuasiReport>> {
    if !module.check_separation() || module.dim() > quasi::MAX_PHASE_SPACE_DIM {
        return Ok(None);
    }
    let q = quasi::quasiprob(state, subject.set, module)?;
    let xi = state.characteristic(subject.set)?;
    let back = quasi::fourier(&q, module);
    let covariance = if subject.action.sign_violation().is_none() && module.dim() <= quasi::MAX_DENSE_PHASE_SPACE_DIM {
        Some(quasi::check_covariance(subject.set, module, subject.action)?.holds())
    } else {
        None
    };
    Ok(Some(QuasiReport {
        points: q.values.len(),
        distinct_values: q.distinct_values(1e-12),
        negative_points: q.values.iter().filter(|&&x| x < -1e-12).count(),
        total: q.total(),
        fourier_round_trip: xi.iter().zip(&back).all(|(a, b)| (a - b).abs() < 1e-9),
        covariance,
    }))
}

fn extension_report(subject: &Subject, module: &ModuleV, family: Option<&phasefn::PhaseFamily>) -> Result<Option<ExtensionReport>> {
    if subject.action.sign_violation().is_some() {
        return Ok(None);
    }
    let n = ext::compute_n(subject.set, module)?;
    let mut report = ExtensionReport { dim_n: n.dim(), h2_dim: None, lambda_trivial: None, extension_order: None, note: None };
    let g_module = match GModule::from_subgroup(subject.action, &n) {
        Ok(m) => m,
        Err(e) => {
            report.note = Some(e.to_string());
            return Ok(Some(report));
        }
    };
    match ext::h2(&g_module) {
        Ok(h) => report.h2_dim = Some(h.dim),
        Err(e) if e.is_size_guard() => report.note = Some(e.to_string()),
        Err(e) => return Err(e),
    }
    if let Some(family) = family {
        match ext::lambda_from_phase(&family.particular, subject.action, &n, &g_module) {
            Ok(lambda) => {
                if g_module.group().order() <= ext::MAX_H2_GROUP_ORDER && g_module.dim() <= ext::MAX_H2_MODULE_DIM {
                    report.lambda_trivial = Some(ext::classify(&lambda.coords, &g_module)?.trivial);
                }
                match ext::build_e(&g_module, &lambda.coords) {
                    Ok(e) => report.extension_order = Some(e.order()),
                    Err(e) if e.is_size_guard() => report.note = Some(e.to_string()),
                    Err(e) => return Err(e),
                }
            }
            Err(e) => report.note = Some(e.to_string()),
        }
    }
    Ok(Some(report))
}

pub fn analyze(subject: &Subject, opts: &Options) -> Result<AnalysisReport> {
    let module = subject.set.compute_v();
    let b_e = subject.instance.map(MbqcInstance::b_e);
    let characteristic = subject.state.map(|s| s.characteristic(subject.set)).transpose()?;
    let computation = match (subject.instance, &subject.target) {
        (Some(inst), Some(target)) => Some(computation(inst, target, opts)?),
        _ => None,
    };
    let mut family = None;
    let phase = match &characteristic {
        Some(xi) if subject.action.sign_violation().is_none() => {
            let (symmetric, fam) = match phasefn::symmetry_solutions(&module, subject.action, xi) {
                Ok(f) => (f.is_some(), f),
                Err(Error::NotSymmetric { .. }) => (false, None),
                Err(e) => return Err(e),
            };
            let exact = fam.as_ref().map(|f| phasefn::exact_member(f, subject.action)).transpose()?;
            let report = PhaseReport {
                symmetric,
                family_dim: fam.as_ref().map(|f| f.dim()),
                exact_member_exists: exact.map(|e| e.is_some()),
            };
            family = fam;
            Some(report)
        }
        _ => None,
    };
    let prop1 = match (subject.instance, &subject.target) {
        (Some(inst), Some(target)) => {
            let o_e = target[0];
            Some(match phasefn::certify_contextuality(&module, subject.action, target, inst.b_e(), o_e)? {
                Prop1Verdict::ContextualByProp1 { certificate } => {
                    let verified =
                        phasefn::verify_prop1_certificate(&module, subject.action, target, inst.b_e(), o_e, &certificate)?;
                    Prop1Report::Contextual { certificate, verified }
                }
                Prop1Verdict::InconclusiveWithExactWitness(phi) => Prop1Report::Inconclusive {
                    witness_outputs: phasefn::output_function(&phi, subject.set, inst.b_e(), o_e)?,
                },
            })
        }
        _ => None,
    };
    let quasi = match subject.state {
        Some(state) => quasi_report(subject, &module, state)?,
        None => None,
    };
    Ok(AnalysisReport {
        summary: summary(subject),
        characteristic,
        computation,
        phase,
        prop1,
        hvm: hvm_report(subject, b_e)?,
        proofs: proof_report(subject)?,
        quasi,
        extension: extension_report(subject, &module, family.as_ref())?,
    })
}
