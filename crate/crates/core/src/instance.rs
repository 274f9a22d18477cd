//! JSON instance files.
//!
//! ```json
//! {
//!   "name": "ghz-or",
//!   "n_qubits": 3,
//!   "observables": ["+III", "+XII", ...],
//!   "measurable": [1, 2, 3, 4, 5, 6],
//!   "outputs": [7, 8, 9, 10],
//!   "reference_context": [1, 2, 3],
//!   "b_e": 7,
//!   "group": {"circuits": [[["A", 1], ["A", 2]], [["A", 0], ["A", 2]]]},
//!   "state": {"type": "stabilizer", "generators": ["+XXX", "-XYY", "-YXY", "-YYX"]}
//! }
//! ```
//!
//! Indices refer to positions in `observables` as written.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::obsset::ObservableSet;
use crate::pauli::{Circuit, PauliObservable};
use crate::quantum::{MbqcInstance, QuantumState};
use crate::symgroup::{action_from_circuit, FiniteGroup, GroupAction};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    #[serde(default)]
    pub name: Option<String>,
    pub n_qubits: usize,
    pub observables: Vec<PauliObservable>,
    pub measurable: Vec<usize>,
    pub outputs: Vec<usize>,
    pub reference_context: Vec<usize>,
    pub b_e: usize,
    pub group: GroupSpec,
    pub state: StateSpec,
    /// Additional product relations beyond those of the contexts.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub relations: Vec<Vec<usize>>,
    /// Intended output function; defaults to the ideal outputs.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target: Option<Vec<u8>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupSpec {
    /// One circuit per generator, gates applied in list order.
    pub circuits: Vec<Circuit>,
    /// Abstract group such as `"Z2xZ2"` when the action need not be faithful;
    /// its generators pair with `circuits` in order.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub abstract_group: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub names: Option<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum StateSpec {
    /// `[re, im]` pairs; normalized on load.
    Vector { amplitudes: Vec<[f64; 2]> },
    Stabilizer { generators: Vec<PauliObservable> },
}

impl StateSpec {
    pub fn to_state(&self) -> Result<QuantumState> {
        match self {
            StateSpec::Vector { amplitudes } => {
                QuantumState::normalized(amplitudes.iter().map(|&[re, im]| Complex64::new(re, im)).collect())
            }
            StateSpec::Stabilizer { generators } => QuantumState::from_stabilizers(generators),
        }
    }
}

/// A loaded instance with its intended output function.
#[derive(Clone, Debug)]
pub struct LoadedInstance {
    pub instance: MbqcInstance,
    pub target: Vec<u8>,
}

impl InstanceFile {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::InvalidInstance(format!("schema: {e}")))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("instance serializes")
    }

    pub fn load(&self) -> Result<LoadedInstance> {
        if let Some(p) = self.observables.iter().find(|p| p.n_qubits() != self.n_qubits) {
            return Err(Error::DimensionMismatch { context: "observable qubit count", expected: self.n_qubits, found: p.n_qubits() });
        }
        let len = self.observables.len();
        let indices = self.measurable.iter().chain(&self.outputs).chain(&self.reference_context).chain([&self.b_e]);
        if let Some(&bad) = indices.chain(self.relations.iter().flatten()).find(|&&i| i >= len) {
            return Err(Error::IndexOutOfRange { index: bad, limit: len });
        }
        let (set, map) = ObservableSet::build_with_map(self.observables.clone(), &self.measurable, &self.outputs)?;
        let set = set.with_relations(self.relations.iter().map(|r| r.iter().map(|&i| map[i]).collect::<Vec<_>>()))?;
        let action = match &self.group.abstract_group {
            None => GroupAction::from_circuits(&set, self.group.circuits.clone())?,
            Some(spec) => {
                let group = FiniteGroup::parse_spec(spec)?;
                let gens = self.group.circuits.iter().map(|c| action_from_circuit(&set, c)).collect::<Result<Vec<_>>>()?;
                GroupAction::from_group(group, gens, Some(self.group.circuits.clone()), set.len())?
            }
        };
        let mut action = action;
        if let Some(names) = &self.group.names {
            if names.len() != action.order() {
                return Err(Error::DimensionMismatch { context: "group element names", expected: action.order(), found: names.len() });
            }
            action.group_mut().set_names(names.clone());
        }
        let reference = self.reference_context.iter().map(|&i| map[i]).collect();
        let name = self.name.clone().unwrap_or_else(|| "instance".into());
        let instance = MbqcInstance::new(name, set, action, reference, map[self.b_e], self.state.to_state()?)?;
        let target = match &self.target {
            Some(t) if t.len() != instance.action().order() => {
                return Err(Error::DimensionMismatch { context: "target outputs", expected: instance.action().order(), found: t.len() })
            }
            Some(t) if t.iter().any(|&b| b > 1) => return Err(Error::InvalidInstance("target bits must be 0 or 1".into())),
            Some(t) => t.clone(),
            None => instance.ideal_outputs()?.iter().map(|o| o.bit).collect(),
        };
        Ok(LoadedInstance { instance, target })
    }

    /// Describes an existing instance; needs generator circuits.
    pub fn from_instance(instance: &MbqcInstance, target: Option<Vec<u8>>) -> Result<Self> {
        let circuits = instance
            .action()
            .generator_circuits()
            .ok_or_else(|| Error::InvalidInstance("group has no generator circuits".into()))?
            .to_vec();
        let set = instance.set();
        let amplitudes = instance.state().amplitudes().iter().map(|c| [c.re, c.im]).collect();
        Ok(InstanceFile {
            name: Some(instance.name.clone()),
            n_qubits: set.n_qubits(),
            observables: set.observables().to_vec(),
            measurable: set.measurable_indices(),
            outputs: set.output_indices(),
            reference_context: instance.reference_context().to_vec(),
            b_e: instance.b_e(),
            group: GroupSpec { circuits, abstract_group: None, names: Some(instance.group().names().to_vec()) },
            state: StateSpec::Vector { amplitudes },
            relations: Vec::new(),
            target,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::builtin;

    const GHZ: &str = r#"{
        "name": "ghz",
        "n_qubits": 3,
        "observables": ["+III", "+XXX", "+XII", "+IXI", "+IIX", "+YII", "+IYI", "+IIY", "+XYY", "+YXY", "+YYX"],
        "measurable": [2, 3, 4, 5, 6, 7],
        "outputs": [1, 8, 9, 10],
        "reference_context": [2, 3, 4],
        "b_e": 1,
        "group": {"circuits": [[["A", 1], ["A", 2]], [["A", 0], ["A", 2]]]},
        "state": {"type": "stabilizer", "generators": ["+XXX", "-XYY", "-YXY", "-YYX"]}
    }"#;

    #[test]
    fn loads_ghz() {
        let loaded = InstanceFile::from_json(GHZ).unwrap().load().unwrap();
        assert_eq!(loaded.target, vec![0, 1, 1, 1]);
        let inst = &loaded.instance;
        assert_eq!(inst.set().observable(inst.b_e()).to_string(), "+XXX");
        assert_eq!(inst.module().dim(), 6);
    }

    #[test]
    fn round_trips_fixture() {
        let f = builtin("ghz-or").unwrap();
        let inst = f.instance.as_ref().unwrap();
        let file = InstanceFile::from_instance(inst, f.target.clone()).unwrap();
        let back = InstanceFile::from_json(&file.to_json()).unwrap();
        assert_eq!(back, file);
        let loaded = back.load().unwrap();
        assert_eq!(loaded.instance.set().observables(), inst.set().observables());
        assert_eq!(loaded.instance.context(3), inst.context(3));
    }

    #[test]
    fn rejects_bad_files() {
        let pm = GHZ.replace("\"+YYX\"", "\"-XXX\"");
        assert!(matches!(InstanceFile::from_json(&pm).unwrap().load(), Err(Error::PlusMinusPair(_))));
        assert!(InstanceFile::from_json("{\"n_qubits\": 1}").is_err());
        let extra = GHZ.replace("\"name\"", "\"bogus\": 1, \"name\"");
        assert!(InstanceFile::from_json(&extra).is_err());
        let out_of_range = GHZ.replace("\"b_e\": 1", "\"b_e\": 99");
        assert!(InstanceFile::from_json(&out_of_range).unwrap().load().is_err());
    }
}
