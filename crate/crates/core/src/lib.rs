//! Exact analysis of the asymptotic output statistics of finite Markov
//! sources.
//!
//! A Markov source is a finite Markov chain whose transitions carry
//! `m`-dimensional output vectors; the random variable of interest is the
//! vector of output sums along a random length-`n` path. This crate computes
//! the constants of its asymptotic behavior exactly over rationals (or
//! approximately over `f64` for irrational inputs):
//!
//! - the expectation constants `e_i` and the asymptotic variance-covariance
//!   matrix `Sigma`, by two independent engines — weighted enumeration of
//!   one- and two-component functional digraphs, and partial derivatives of
//!   `det(I - z A(x))` extracted through truncated Taylor arithmetic;
//! - combinatorial verdicts: regularity of `Sigma` (equivalent to a joint
//!   central limit theorem), asymptotic independence of output pairs, and
//!   quasi-deterministic outputs, all decided on the cycle space of the final
//!   component without reference to the probabilities;
//! - finite-`n` ground truth via exact dynamic programming, and seeded Monte
//!   Carlo simulation with normality diagnostics.

pub mod builders;
pub mod chain;
pub mod cycle_space;
pub mod error;
pub mod graph;
pub mod jet;
pub mod linalg;
pub mod matrix_tree;
pub mod moments;
pub mod report;
pub mod scalar;

pub use chain::{parse_chain, serialize_chain, MarkovChain, Transition, ValidationReport};
pub use cycle_space::{cycle_rank_test, variance_zero, zero_one_variance_check, CycleCertificate};
pub use error::{Error, Result};
pub use graph::{
    final_component, for_each_functional_digraph, forests, functional_digraphs, scc_condensation,
    simple_cycles, Component, Cycle, CycleList, FunctionalDigraph, RootedForest, DEFAULT_ENUM_CAP,
};
pub use jet::{char_derivatives, CharDerivatives, Jet2};
pub use matrix_tree::{forest_sum, laplacian, laplacian_minor};
pub use moments::{
    exact_dp_moments, moments_combinatorial, moments_determinant, monte_carlo, D1D2Sums,
    FiniteMoments, McReport, MomentMethod, MomentReport,
};
pub use report::{analyze, Analysis};
pub use scalar::{Rational, Scalar};
