//! Fourier analysis of subsets of `F_2^n` around the spectral norm
//! `‖f‖_𝔸 = Σ_a |f̂(a)|`.
//!
//! Transforms and norms live in [`fourier`], subspaces and cosets in [`coset`],
//! the `ε`-approximate norm (a linear program) in [`approx`], `k`-affine
//! connectivity in [`connectivity`], and the Hamming-ball and quadratic examples in
//! [`constructions`]. [`structure`] holds the additive-combinatorics steps (energy,
//! dense cosets, subgroup regularization); [`induction`] and [`tower`] hold the
//! induction machinery and its bounds. [`suite`] runs the dichotomy experiments.

pub mod approx;
pub mod connectivity;
pub mod constructions;
pub mod coset;
pub mod error;
pub mod fourier;
pub mod induction;
pub mod io;
pub mod lp;
pub mod report;
pub mod set;
pub mod structure;
pub mod suite;
pub mod tower;
