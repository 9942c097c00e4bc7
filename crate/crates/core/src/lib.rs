//! Noncontextual hidden-variable model and quantum-mechanical simulator for
//! the two-qubit, four-proposition Bell-Kochen-Specker test.
//!
//! The hidden-variable side ([`nchv`]) predicts that a joint measurement of
//! the propositions P1..P4 shows either none or two of them true. The quantum
//! side ([`observables`], [`qm`]) predicts exactly one true proposition in
//! every shot, for every state. [`harness`] runs both and reports which
//! prediction the simulated shots follow.

pub mod harness;
pub mod linalg;
pub mod nchv;
pub mod observables;
pub mod qm;
pub mod rng;
pub mod stats;
