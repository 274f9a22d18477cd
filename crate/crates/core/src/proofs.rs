//! State-independent contextuality proofs: parity proofs on the constraint
//! system and symmetry-based proofs from sign-flipping symmetries.

use serde::{Deserialize, Serialize};

use crate::bitlinalg::{BitMatrix, BitVector};
use crate::error::{Error, Result};
use crate::obsset::ConstraintSystem;
use crate::symgroup::{GroupAction, SignedPerm};

/// Rows `b` with `bᵀK = 0` and `bᵀc = 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParityCertificate {
    pub b: BitVector,
}

/// Rows `a` with `aᵀK(I − P_h) = 0` and `aᵀK v_h = 1` for element `h`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymmetryCertificate {
    pub a: BitVector,
    pub h: usize,
}

impl ParityCertificate {
    pub fn verify(&self, constraints: &ConstraintSystem) -> bool {
        self.b.len() == constraints.len()
            && constraints.k().left_mul_vec(&self.b).is_ok_and(|v| v.is_zero())
            && self.b.dot(constraints.c())
    }
}

impl SymmetryCertificate {
    pub fn verify(&self, constraints: &ConstraintSystem, action: &GroupAction) -> bool {
        if self.a.len() != constraints.len() || self.h >= action.order() {
            return false;
        }
        let h = action.element(self.h);
        let Ok(y) = constraints.k().left_mul_vec(&self.a) else { return false };
        y.xor(&h.push_forward(&y)).is_zero() && y.dot(h.signs())
    }
}

/// `s′ = P_h s + v_h`, i.e. `s′(a) = s(h a) ⊕ signs_h(a)`.
pub fn transform_assignment(s: &BitVector, h: &SignedPerm, constraints: &ConstraintSystem) -> Result<BitVector> {
    if s.len() != constraints.n_columns() || h.len() != s.len() {
        return Err(Error::DimensionMismatch { context: "value assignment", expected: constraints.n_columns(), found: s.len() });
    }
    if let Some(row) = constraints.first_violation(s) {
        return Err(Error::InconsistentAssignment { row });
    }
    Ok(h.pull_back(s).xor(h.signs()))
}

pub fn find_parity_proof(constraints: &ConstraintSystem) -> Option<ParityCertificate> {
    constraints
        .k()
        .infeasibility_certificate(constraints.c())
        .expect("right-hand side matches rows")
        .map(|b| ParityCertificate { b })
}

/// `K(I − P_h)`: row `r` is `K_r + K_r∘h⁻¹`.
fn symmetry_matrix(constraints: &ConstraintSystem, h: &SignedPerm) -> BitMatrix {
    let rows = constraints.k().rows().iter().map(|r| r.xor(&h.push_forward(r))).collect();
    BitMatrix::from_rows(constraints.n_columns(), rows).expect("row lengths match")
}

/// Searches elements in group order for `a` making `K(I − P_h)s = K v_h`
/// unsolvable.
pub fn find_symmetry_proof(constraints: &ConstraintSystem, action: &GroupAction) -> Result<Option<SymmetryCertificate>> {
    if action.elements().first().map(SignedPerm::len) != Some(constraints.n_columns()) {
        return Err(Error::DimensionMismatch {
            context: "group action size",
            expected: constraints.n_columns(),
            found: action.elements().first().map_or(0, SignedPerm::len),
        });
    }
    for g in 0..action.order() {
        if let Some(cert) = find_symmetry_proof_at(constraints, action, g)? {
            return Ok(Some(cert));
        }
    }
    Ok(None)
}

/// Symmetry proof using the single element `g`.
pub fn find_symmetry_proof_at(
    constraints: &ConstraintSystem,
    action: &GroupAction,
    g: usize,
) -> Result<Option<SymmetryCertificate>> {
    if g >= action.order() {
        return Err(Error::IndexOutOfRange { index: g, limit: action.order() });
    }
    let h = action.element(g);
    if !h.has_signs() {
        return Ok(None);
    }
    let m = symmetry_matrix(constraints, h);
    let rhs = constraints.k().mul_vec(h.signs())?;
    Ok(m.infeasibility_certificate(&rhs)?.map(|a| SymmetryCertificate { a, h: g }))
}

/// Converts a symmetry proof into a parity proof, `b = (I − P′_h)ᵀ a` with
/// `K P_h = P′_h K`.
pub fn relate(cert: &SymmetryCertificate, constraints: &ConstraintSystem, action: &GroupAction) -> Result<ParityCertificate> {
    if !cert.verify(constraints, action) {
        return Err(Error::InvalidCertificate("symmetry certificate does not verify".into()));
    }
    let pi = action.element(cert.h).permute_rows(constraints).map_err(|e| match e {
        Error::RowPermutation { row, .. } => Error::RowPermutation { element: cert.h, row },
        other => other,
    })?;
    let mut b = cert.a.clone();
    for (r, &image) in pi.iter().enumerate() {
        if cert.a.get(r) {
            b.flip(image);
        }
    }
    Ok(ParityCertificate { b })
}

/// `true` when no element flips a sign, so no symmetry proof can exist.
pub fn check_lemma4(action: &GroupAction) -> bool {
    action.sign_violation().is_none()
}

/// Serialized certificate: constraint rows as member lists plus the element's
/// generator word.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum CertificateJson {
    Parity { rows: Vec<Vec<usize>> },
    Symmetry { rows: Vec<Vec<usize>>, word: Vec<usize> },
}

impl CertificateJson {
    pub fn from_parity(cert: &ParityCertificate, constraints: &ConstraintSystem) -> Self {
        CertificateJson::Parity { rows: row_members(&cert.b, constraints) }
    }

    pub fn from_symmetry(cert: &SymmetryCertificate, constraints: &ConstraintSystem, action: &GroupAction) -> Self {
        CertificateJson::Symmetry {
            rows: row_members(&cert.a, constraints),
            word: action.group().word(cert.h).to_vec(),
        }
    }

    /// Rebuilds the certificate against freshly computed constraints and
    /// checks its identities. Rows not present in the system fail.
    pub fn verify(&self, constraints: &ConstraintSystem, action: Option<&GroupAction>) -> Result<bool> {
        let select = |rows: &[Vec<usize>]| -> Result<BitVector> {
            let mut v = BitVector::zeros(constraints.len());
            for members in rows {
                let r = constraints
                    .row_of(members)
                    .ok_or_else(|| Error::InvalidCertificate(format!("no constraint row {members:?}")))?;
                v.flip(r);
            }
            Ok(v)
        };
        match self {
            CertificateJson::Parity { rows } => Ok(ParityCertificate { b: select(rows)? }.verify(constraints)),
            CertificateJson::Symmetry { rows, word } => {
                let action = action.ok_or_else(|| Error::InvalidCertificate("no group to resolve the word".into()))?;
                if word.iter().any(|&i| i >= action.group().generators().len()) {
                    return Err(Error::InvalidCertificate(format!("word {word:?} uses unknown generators")));
                }
                let h = action.group().element_of_word(word)?;
                Ok(SymmetryCertificate { a: select(rows)?, h }.verify(constraints, action))
            }
        }
    }
}

fn row_members(selection: &BitVector, constraints: &ConstraintSystem) -> Vec<Vec<usize>> {
    selection.ones().map(|r| constraints.rows()[r].members.clone()).collect()
}
