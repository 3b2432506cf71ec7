//! Coset complexes of elementary matrix groups over F_q[t]/(t^s).
//!
//! The crate enumerates the groups EL_{n+1}(F_q[t]/(t^s)) together with the
//! subgroups K_tau, builds the associated coset complexes, audits their
//! combinatorics, certifies link spectra and runs the symmetry and covering
//! checks.

pub mod algebra;
pub mod geometry;
pub mod matgroup;
pub mod ortho;
pub mod spectra;
pub mod symmetry;
