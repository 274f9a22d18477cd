//! Built-in observable configurations and G-MBQC instances.

use crate::error::{Error, Result};
use crate::obsset::ObservableSet;
use crate::pauli::{pauli, SingleQubitGate::{A, H}};
use crate::quantum::{MbqcInstance, QuantumState};
use crate::symgroup::GroupAction;

pub const NAMES: [&str; 6] = ["ghz-or", "bell-identity", "mermin-square", "mermin-star", "dressed-star", "one-qubit"];

/// An observable set with its input group, an optional larger group of
/// signed symmetries for proof search, and a resource where one exists.
#[derive(Clone, Debug)]
pub struct Fixture {
    pub name: &'static str,
    pub set: ObservableSet,
    /// Input group `G`; signs vanish.
    pub action: GroupAction,
    /// Group `𝒢` of symmetries that may flip signs.
    pub extended: Option<GroupAction>,
    pub instance: Option<MbqcInstance>,
    pub state: Option<QuantumState>,
    /// Intended output function, when the fixture computes one.
    pub target: Option<Vec<u8>>,
    /// `b_e` for fixtures without an instance.
    pub b_e: Option<usize>,
}

impl Fixture {
    fn from_instance(name: &'static str, instance: MbqcInstance, target: Vec<u8>) -> Self {
        Fixture {
            name,
            set: instance.set().clone(),
            action: instance.action().clone(),
            extended: None,
            state: Some(instance.state().clone()),
            b_e: Some(instance.b_e()),
            instance: Some(instance),
            target: Some(target),
        }
    }

    fn bare(name: &'static str, set: ObservableSet, action: GroupAction) -> Self {
        Fixture { name, set, action, extended: None, instance: None, state: None, target: None, b_e: None }
    }
}

pub fn builtin(name: &str) -> Result<Fixture> {
    match name {
        "ghz-or" => ghz_or(),
        "bell-identity" => bell_identity(),
        "mermin-square" => mermin_square(),
        "mermin-star" => mermin_star(),
        "dressed-star" => dressed_star(),
        "one-qubit" => one_qubit(),
        _ => Err(Error::UnknownFixture(name.to_string())),
    }
}

const GHZ_OBSERVABLES: [&str; 11] = ["III", "XII", "IXI", "IIX", "YII", "IYI", "IIY", "XXX", "XYY", "YXY", "YYX"];

fn ghz_state() -> Result<QuantumState> {
    QuantumState::from_stabilizers(&[pauli("+XXX"), pauli("-XYY"), pauli("-YXY"), pauli("-YYX")])
}

fn ghz_set(extra: &[&str]) -> Result<ObservableSet> {
    let obs = GHZ_OBSERVABLES.iter().chain(extra).map(|s| pauli(s)).collect();
    ObservableSet::build(obs, &[1, 2, 3, 4, 5, 6], &[7, 8, 9, 10])
}

/// `g01 = A₂A₃`, `g10 = A₁A₃`; `g11 = A₁A₂` up to the trivial `A₃²`.
fn ghz_action(set: &ObservableSet) -> Result<GroupAction> {
    let mut action = GroupAction::from_circuits(set, vec![vec![(A, 1), (A, 2)], vec![(A, 0), (A, 2)]])?;
    action.group_mut().set_names(["g00", "g01", "g10", "g11"].map(String::from).to_vec());
    Ok(action)
}

/// The four context lines plus `XXX·XYY·YXY·YYX = −I`.
fn star_lines() -> Vec<Vec<usize>> {
    vec![vec![1, 2, 3, 7], vec![1, 5, 6, 8], vec![4, 2, 6, 9], vec![4, 5, 3, 10], vec![7, 8, 9, 10]]
}

fn ghz_or() -> Result<Fixture> {
    let set = ghz_set(&[])?;
    let action = ghz_action(&set)?;
    let instance = MbqcInstance::new("ghz-or", set, action, vec![1, 2, 3], 7, ghz_state()?)?;
    Ok(Fixture::from_instance("ghz-or", instance, vec![0, 1, 1, 1]))
}

fn bell_identity() -> Result<Fixture> {
    let obs = ["II", "XI", "IX", "YI", "IY", "XX", "YY"].iter().map(|s| pauli(s)).collect();
    let set = ObservableSet::build(obs, &[1, 2, 3, 4], &[5, 6])?;
    let mut action = GroupAction::from_circuits(&set, vec![vec![(A, 0), (A, 1)]])?;
    action.group_mut().set_names(vec!["0".into(), "1".into()]);
    let state = QuantumState::from_stabilizers(&[pauli("+XX"), pauli("+ZZ")])?;
    let instance = MbqcInstance::new("bell-identity", set, action, vec![1, 2], 5, state)?;
    Ok(Fixture::from_instance("bell-identity", instance, vec![0, 1]))
}

fn mermin_square() -> Result<Fixture> {
    let obs = ["II", "XI", "IX", "XX", "ZI", "IZ", "ZZ", "XZ", "ZX", "YY"].iter().map(|s| pauli(s)).collect();
    let set = ObservableSet::build(obs, &[1, 2, 3, 4, 5, 6, 7, 8, 9], &[])?;
    let action = GroupAction::trivial(set.len());
    let mut extended = GroupAction::from_circuits(&set, vec![vec![(H, 0)]])?;
    extended.group_mut().set_names(vec!["e".into(), "H1".into()]);
    Ok(Fixture { extended: Some(extended), ..Fixture::bare("mermin-square", set, action) })
}

fn mermin_star() -> Result<Fixture> {
    let set = ghz_set(&[])?.with_relations(star_lines())?;
    let action = ghz_action(&set)?;
    Ok(Fixture { extended: Some(action.clone()), ..Fixture::bare("mermin-star", set, action) })
}

fn dressed_star() -> Result<Fixture> {
    let set = ghz_set(&["ZZI", "ZIZ", "IZZ"])?.with_relations(star_lines())?;
    // The GHZ generators flip signs of the ZZ pairs, so they only enter as 𝒢.
    let action = GroupAction::trivial(set.len());
    let extended = ghz_action(&set)?;
    Ok(Fixture { extended: Some(extended), ..Fixture::bare("dressed-star", set, action) })
}

fn one_qubit() -> Result<Fixture> {
    let obs = ["I", "X", "Y", "Z"].iter().map(|s| pauli(s)).collect();
    let set = ObservableSet::build(obs, &[1, 2, 3], &[])?;
    let action = GroupAction::trivial(set.len());
    Ok(Fixture { state: Some(QuantumState::basis(1, 0)?), ..Fixture::bare("one-qubit", set, action) })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_name_builds() {
        for name in NAMES {
            let f = builtin(name).unwrap();
            assert_eq!(f.name, name);
            assert_eq!(f.action.elements()[0].len(), f.set.len());
        }
        assert!(matches!(builtin("nope"), Err(Error::UnknownFixture(_))));
    }

    #[test]
    fn ghz_contexts() {
        let f = builtin("ghz-or").unwrap();
        let inst = f.instance.unwrap();
        let names = |g: usize| -> Vec<String> {
            inst.context(g).iter().map(|&a| inst.set().observable(a).to_string()).collect()
        };
        assert_eq!(names(0), ["+XII", "+IXI", "+IIX"]);
        assert_eq!(names(1), ["+XII", "+IYI", "+IIY"]);
        assert_eq!(names(3), ["+IIX", "+YII", "+IYI"]);
        assert_eq!(inst.group().names(), ["g00", "g01", "g10", "g11"]);
        let bits: Vec<u8> = inst.ideal_outputs().unwrap().iter().map(|o| o.bit).collect();
        assert_eq!(bits, [0, 1, 1, 1]);
    }

    #[test]
    fn dressed_star_signs() {
        let f = builtin("dressed-star").unwrap();
        let ext = f.extended.unwrap();
        let z1z3 = f.set.index_of_str("ZIZ").unwrap();
        let g11 = ext.group().names().iter().position(|n| n == "g11").unwrap();
        assert!(ext.element(g11).sign(z1z3));
        assert_eq!(ext.element(g11).image(z1z3), z1z3);
    }
}
