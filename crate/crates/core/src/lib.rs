//! Numerical laboratory for entanglement growth in brickwork qudit circuits
//! and its relation to dual unitarity.
//!
//! The crate is organised around five toolkits:
//!
//! * [`qinfo`]: pure and mixed states, entropies, divergences, fidelity,
//!   purification and Uhlmann alignment.
//! * [`gates`]: two-site gates, the space-time reshuffle, dual-unitarity
//!   defects, Haar sampling, the two-qubit Cartan decomposition and
//!   projections onto dual unitaries.
//! * [`circuit`]: exact state-vector evolution of open brickwork chains,
//!   bond-entropy profiles, velocity estimates, zigzag detection and the
//!   four-party entropy audit of a single gate.
//! * [`mps`]: solvable two-site matrix product states.
//! * [`ensemble`]: seeded Monte Carlo experiments over Haar ensembles and
//!   perturbation scans.
//!
//! The [`cli`] module backs the `dualcirc` binary.
//!
//! # Conventions
//!
//! All entropies are in nats.
//!
//! A composite system is described by an ordered list of subsystem
//! dimensions `dims`. Flat indices are mixed-radix with the *first*
//! subsystem most significant: for `dims = [d0, d1, d2]` the basis state
//! `|i0 i1 i2>` sits at `(i0 * d1 + i1) * d2 + i2`. Every reshape in the crate
//! (partial traces, gate application, bond cuts) follows this rule.
//!
//! A two-site gate on `q (x) q` is a `q^2 x q^2` matrix with entries
//! `u[(i,j),(k,l)]`: rows are the outputs `(i, j)` and columns the inputs
//! `(k, l)`, both grouped left-site-major (`i * q + j`).
//!
//! The reshuffled ("dual") matrix regroups the same entries as
//! `M[(i,k),(j,l)] = u[(i,j),(k,l)]`, again left index major.
//!
//! The Choi output state `rho_{AB'}` is ordered `(A, B')`, where `A` is the
//! Bell partner of the left gate input and `B'` is the left gate output.

pub mod circuit;
pub mod cli;
pub mod ensemble;
mod error;
pub mod gates;
pub mod linalg;
pub mod mps;
pub mod qinfo;

pub use error::{Error, Result};
pub use faer::c64;

/// Dense complex matrix used throughout the crate.
pub type CMat = faer::Mat<c64>;
