//! Cohomological analysis of measurement-based quantum computations with a
//! finite input group: observable constraint systems over GF(2), phase
//! functions and their coboundaries, contextuality certificates, classical
//! simulation bounds, quasi-probability phase space and second cohomology.

pub mod analysis;
pub mod bitlinalg;
pub mod error;
pub mod ext;
pub mod fixtures;
pub mod hvm;
pub mod instance;
pub mod obsset;
pub mod pauli;
pub mod phasefn;
pub mod proofs;
pub mod quantum;
pub mod quasi;
pub mod symgroup;

pub use bitlinalg::{BitMatrix, BitVector};
pub use error::{Error, Result};
pub use pauli::{PauliObservable, SingleQubitGate};
