//! Simulation toolkit for device-independent certification of the
//! five-qubit code and its use as a tamper-evident carrier for satellite
//! positioning.
//!
//! The crate is organised bottom-up:
//!
//! * [`qsim`] is a dense state-vector / density-matrix engine for up to ten
//!   qubits.
//! * [`code5`] holds the `[[5,1,3]]` code: stabilizers, logical basis,
//!   encoder circuit, syndrome decoding and correction.
//! * [`bell`] evaluates the CHSH and five-party `I5` Bell functionals,
//!   their classical bounds, sum-of-squares certificates and finite-shot
//!   estimators.
//! * [`adversary`] applies attacks and noise and measures how well they are
//!   detected.
//! * [`geoposition`] solves for receiver position and clock bias from
//!   pseudoranges.
//! * [`resource`] estimates gate time and fidelity on concrete hardware.
//! * [`protocol`] wires everything into a full positioning task.
//! * [`cli`] is the command-line front end used by the `qsgps` binary.

pub mod adversary;
pub mod bell;
pub mod cli;
pub mod code5;
pub mod error;
pub mod geoposition;
pub mod protocol;
pub mod qsim;
pub mod resource;

pub use error::{Error, Result};
