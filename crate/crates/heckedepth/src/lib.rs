//! Exact computation of p-adic Hecke eigensystems of p-new eigenforms and
//! of the congruence depths between them.
//!
//! The pipeline: build weight-k modular symbols for Gamma_0(Np) exactly
//! over Q, cut out the new cuspidal plus-subspace, split it by the
//! Atkin-Lehner sign at p, extract every Z_p-valued eigensystem to a target
//! precision p^M with a fixed-width sweep over spherical primes, and feed
//! the eigenvalues into congruence-depth tables and the partner audits
//! driven by ingested L-invariant records.

pub mod cache;
pub mod congruence;
pub mod eigensolve;
pub mod linalg;
pub mod modsym;
pub mod padic;
pub mod semistable;
pub mod verify;
pub mod zmod;
