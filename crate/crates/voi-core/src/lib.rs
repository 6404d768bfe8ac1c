//! Exact analysis of how information channels interact in finite Bayesian
//! decision problems.
//!
//! Everything is computed in arbitrary-precision rational arithmetic: the
//! piecewise-linear convex value function, Bayesian posteriors, values of
//! information, and the second-order interaction between two channels
//! (how observing one changes the other's value of information), together
//! with its decomposition into a complement force and a substitute force.
//!
//! The [`scanner`] module turns these pointwise quantities into plot-ready
//! data: barycentric grid sweeps of the belief simplex and exact
//! piecewise-linear scans along rays, with breakpoints and zero crossings
//! located by solving linear equations rather than by numeric search.

#![forbid(unsafe_code)]

pub mod bayes;
pub mod error;
pub mod interaction;
pub mod localization;
pub mod model;
pub mod rational;
pub mod scanner;
pub mod value;

pub use error::EvalError;
pub use model::{
    parse_belief, parse_instance, Belief, Channel, DecisionProblem, ModelError, ProblemInstance,
};
pub use rational::Rational;
