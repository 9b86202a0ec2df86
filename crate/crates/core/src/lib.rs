//! Numerical (p,q)-gamma and psi functions, their classical limits, and a
//! finite-difference engine for testing convexity and complete monotonicity.
//!
//! All gamma-type functions return natural logarithms. Psi-type functions
//! return plain values.

pub mod campaigns;
pub mod cli;
pub mod error;
pub mod gammafam;
pub mod monocheck;
pub mod paperfuncs;
pub mod psifam;
pub mod qcore;
pub mod sum;
