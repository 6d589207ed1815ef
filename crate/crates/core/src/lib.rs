//! Computations around globally hypoelliptic ℝ^k-actions: exterior algebra,
//! exact Lie algebra routines, Chevalley–Eilenberg cohomology, small-divisor
//! solvers on tori, the dynamical cochain complex and the Heisenberg
//! obstruction.

pub mod cecoh;
pub mod cli;
pub mod dyncoh;
pub mod exterior;
pub mod heis;
pub mod liealg;
pub mod rational;
pub mod torus;
