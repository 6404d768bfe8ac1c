//! The piecewise-linear convex value function and its decision-region
//! geometry.
//!
//! V(b) = max_a <r_a, b> is the upper envelope of one linear functional per
//! action. The closed decision region of action a is the polytope where a
//! attains the maximum; regions overlap exactly on the kinks of V. Argmax
//! ties are always reported in full — boundary beliefs are where all the
//! interesting localization behavior lives, so tie information is semantic.

use crate::error::EvalError;
use crate::model::{Belief, Channel, DecisionProblem};
use crate::rational::Rational;

/// The exact value V(b) together with the complete set of optimal actions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValueResult {
    pub value: Rational,
    /// All maximizing action indices, ascending. Never empty.
    pub argmax_actions: Vec<usize>,
}

impl ValueResult {
    /// The canonical representative: the lowest optimal action index.
    pub fn canonical_action(&self) -> usize {
        self.argmax_actions[0]
    }

    pub fn on_kink(&self) -> bool {
        self.argmax_actions.len() > 1
    }
}

pub(crate) fn dot(row: &[Rational], b: &Belief) -> Rational {
    row.iter().zip(b.iter()).map(|(r, p)| r * p).sum()
}

fn check_dims(prob: &DecisionProblem, b: &Belief) -> Result<(), EvalError> {
    if b.dim() != prob.num_states() {
        return Err(EvalError::Dimension(format!(
            "belief has {} states, problem has {}",
            b.dim(),
            prob.num_states()
        )));
    }
    Ok(())
}

fn check_channel(prob: &DecisionProblem, ch: &Channel) -> Result<(), EvalError> {
    if ch.num_states() != prob.num_states() {
        return Err(EvalError::Dimension(format!(
            "channel `{}` has {} states, problem has {}",
            ch.name(),
            ch.num_states(),
            prob.num_states()
        )));
    }
    Ok(())
}

/// V(b) = max_a sum_s R(a, s) b(s), with every tie included.
pub fn value(prob: &DecisionProblem, b: &Belief) -> Result<ValueResult, EvalError> {
    check_dims(prob, b)?;
    let mut best: Option<Rational> = None;
    let mut argmax = Vec::new();
    for a in 0..prob.num_actions() {
        let v = dot(prob.reward_row(a), b);
        match &best {
            Some(cur) if v < *cur => {}
            Some(cur) if v == *cur => argmax.push(a),
            _ => {
                best = Some(v);
                argmax = vec![a];
            }
        }
    }
    Ok(ValueResult {
        value: best.expect("at least two actions"),
        argmax_actions: argmax,
    })
}

/// Whether two beliefs share a closed decision region, i.e. some action is
/// optimal at both.
pub fn same_region(prob: &DecisionProblem, b: &Belief, b2: &Belief) -> Result<bool, EvalError> {
    let am1 = value(prob, b)?.argmax_actions;
    let am2 = value(prob, b2)?.argmax_actions;
    Ok(am1.iter().any(|a| am2.contains(a)))
}

/// Regret(a, b) = V(b) - <r_a, b>: the loss from committing to `a` at `b`.
/// Nonnegative by the envelope property.
pub fn regret(prob: &DecisionProblem, a: usize, b: &Belief) -> Result<Rational, EvalError> {
    if a >= prob.num_actions() {
        return Err(EvalError::UnknownAction {
            index: a,
            num_actions: prob.num_actions(),
        });
    }
    let v = value(prob, b)?;
    Ok(v.value - dot(prob.reward_row(a), b))
}

/// The unnormalized posterior value max_a sum_s R(a, s) P(o | s) b(s).
///
/// The Bayes normalizer P(o | b) cancels: this equals
/// `marginal(o) * V(posterior(o))` whenever the marginal is positive, and is
/// well defined (zero) even when it is not.
pub fn unnorm_posterior_value(
    prob: &DecisionProblem,
    ch: &Channel,
    b: &Belief,
    o: usize,
) -> Result<Rational, EvalError> {
    check_dims(prob, b)?;
    check_channel(prob, ch)?;
    if o >= ch.num_outcomes() {
        return Err(EvalError::UnknownOutcome {
            index: o,
            channel: ch.name().to_string(),
            num_outcomes: ch.num_outcomes(),
        });
    }
    let row = ch.outcome_row(o);
    let best = (0..prob.num_actions())
        .map(|a| {
            prob.reward_row(a)
                .iter()
                .zip(row.iter())
                .zip(b.iter())
                .map(|((r, p), q)| r * p * q)
                .sum::<Rational>()
        })
        .max()
        .expect("at least two actions");
    Ok(best)
}

/// E_o[V(posterior(o))] = sum_o max_a sum_s R(a, s) P(o | s) b(s).
///
/// At least V(b) by convexity; the gap is the channel's value of information.
pub fn expected_posterior_value(
    prob: &DecisionProblem,
    ch: &Channel,
    b: &Belief,
) -> Result<Rational, EvalError> {
    let mut total = Rational::zero();
    for o in 0..ch.num_outcomes() {
        total += unnorm_posterior_value(prob, ch, b, o)?;
    }
    Ok(total)
}
