//! Exact evaluation of regularized graph integrals on elliptic curves.

pub mod graph;
pub mod qmodring;
pub mod residual;
pub mod integrator;
pub mod oracle;
pub mod verify;
pub mod cli;
