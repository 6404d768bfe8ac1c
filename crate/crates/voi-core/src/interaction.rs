//! Values of information and the second-order interaction between channels.
//!
//! For channels i and j at belief b, the interaction is
//!
//! ```text
//! dVoI(j | i, b) = E_{o_i}[ VoI(j | posterior(i, o_i)) ] - VoI(j | b)
//! ```
//!
//! positive when i makes j more valuable (complements), negative when it
//! makes j less valuable (substitutes). It decomposes exactly into two
//! opposing nonnegative forces, the Jensen gaps of the auxiliary convex
//! functions g (expected post-j value) and h = V over i's posterior family:
//!
//! ```text
//! dVoI = (E[g(posterior)] - g(b))  -  (E[h(posterior)] - h(b))
//!      =        complement force   -        substitute force
//! ```
//!
//! Forces are computed as Jensen gaps, never via explicit subgradients: at a
//! kink of V the per-outcome Bregman divergence depends on the chosen
//! subgradient, but the martingale property makes the expectation
//! choice-free, so the gap values are well defined everywhere. Reports carry
//! a `prior_on_kink` flag so presentation layers can mark those beliefs.
//!
//! Both kernels are accepted verbatim, correlated or not; with correlated
//! channels the individual forces lose their economic reading (g uses j's
//! prior kernel), but every identity computed here still holds.

use serde::Serialize;

use crate::bayes::posterior_family;
use crate::error::EvalError;
use crate::model::{Belief, Channel, DecisionProblem};
use crate::rational::Rational;
use crate::value::{dot, expected_posterior_value, value};

/// Per-outcome detail of an interaction report: what one observation of
/// channel i does to the belief, the value, j's VoI, and the regret of the
/// prior's canonical optimal action.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OutcomeReport {
    pub outcome: usize,
    pub marginal: Rational,
    pub posterior: Belief,
    pub value: Rational,
    pub voi_j: Rational,
    pub regret_prior_action: Rational,
}

/// Everything about the interaction of channels i and j at one belief.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InteractionReport {
    pub belief: Belief,
    pub voi_i: Rational,
    pub voi_j: Rational,
    /// E_{o_i}[ VoI(j | posterior) ].
    pub voi_j_after_i: Rational,
    pub delta_voi: Rational,
    /// Jensen gap of g over i's posteriors; nonnegative.
    pub complement_force: Rational,
    /// Jensen gap of h = V over i's posteriors; nonnegative, equals VoI(i).
    pub substitute_force: Rational,
    /// True when the prior's optimal action is not unique (V has a kink at b),
    /// where per-outcome Bregman divergences are subgradient-dependent.
    pub prior_on_kink: bool,
    /// Canonical prior-optimal action (lowest argmax index); the reference
    /// action for the per-outcome regrets.
    pub prior_action: usize,
    pub per_outcome: Vec<OutcomeReport>,
}

/// VoI(ch | b) = E_o[V(posterior)] - V(b), computed by the exact
/// denominator-cancellation route. Nonnegative by convexity.
pub fn voi(prob: &DecisionProblem, ch: &Channel, b: &Belief) -> Result<Rational, EvalError> {
    Ok(expected_posterior_value(prob, ch, b)? - value(prob, b)?.value)
}

/// g(b) = E_{o_j}[V(posterior(j, o_j))], the expected value after consulting
/// channel j. Equals VoI(j | b) + V(b).
pub fn g_value(prob: &DecisionProblem, ch_j: &Channel, b: &Belief) -> Result<Rational, EvalError> {
    expected_posterior_value(prob, ch_j, b)
}

/// The full interaction report for observing `ch_i` before `ch_j` at `b`.
///
/// `voi_j_after_i` and both forces are computed over i's posterior family;
/// `voi_i` independently via the unnormalized-value route. Their exact
/// agreement (`substitute_force == voi_i`, `delta_voi == complement_force -
/// substitute_force`) is a cross-check of the two computation paths, not an
/// artifact of sharing one.
pub fn delta_voi(
    prob: &DecisionProblem,
    ch_i: &Channel,
    ch_j: &Channel,
    b: &Belief,
) -> Result<InteractionReport, EvalError> {
    if ch_i.num_states() != ch_j.num_states() {
        return Err(EvalError::Dimension(format!(
            "channel `{}` has {} states, channel `{}` has {}",
            ch_i.name(),
            ch_i.num_states(),
            ch_j.name(),
            ch_j.num_states()
        )));
    }
    let prior = value(prob, b)?;
    let g_prior = g_value(prob, ch_j, b)?;
    let voi_j = &g_prior - &prior.value;
    let voi_i = expected_posterior_value(prob, ch_i, b)? - &prior.value;

    let fam = posterior_family(b, ch_i)?;
    let prior_action = prior.canonical_action();
    let mut expected_g = Rational::zero();
    let mut expected_h = Rational::zero();
    let mut voi_j_after_i = Rational::zero();
    let mut per_outcome = Vec::with_capacity(fam.len());
    for entry in fam.iter() {
        let post_value = value(prob, &entry.posterior)?;
        let g_post = g_value(prob, ch_j, &entry.posterior)?;
        let voi_j_here = &g_post - &post_value.value;
        voi_j_after_i += &(&entry.marginal * &voi_j_here);
        expected_g += &(&entry.marginal * &g_post);
        expected_h += &(&entry.marginal * &post_value.value);
        per_outcome.push(OutcomeReport {
            outcome: entry.outcome,
            marginal: entry.marginal.clone(),
            regret_prior_action: &post_value.value
                - dot(prob.reward_row(prior_action), &entry.posterior),
            value: post_value.value,
            voi_j: voi_j_here,
            posterior: entry.posterior.clone(),
        });
    }

    let delta = &voi_j_after_i - &voi_j;
    let complement_force = expected_g - &g_prior;
    let substitute_force = expected_h - &prior.value;

    debug_assert_eq!(delta, &complement_force - &substitute_force);
    debug_assert_eq!(substitute_force, voi_i);
    debug_assert!(!complement_force.is_negative());

    Ok(InteractionReport {
        belief: b.clone(),
        voi_i,
        voi_j,
        voi_j_after_i,
        delta_voi: delta,
        complement_force,
        substitute_force,
        prior_on_kink: prior.on_kink(),
        prior_action,
        per_outcome,
    })
}

/// Bregman divergence of h = V with the subgradient r_{a_sel}:
/// D_h(b_after, b_base) = V(b_after) - V(b_base) - <r_{a_sel}, b_after - b_base>.
///
/// `a_sel` must be optimal at `b_base`, otherwise its reward row is not a
/// subgradient there. At kinks the result depends on the selector; only the
/// marginal-weighted expectation over a posterior family does not.
pub fn bregman_divergence_h(
    prob: &DecisionProblem,
    b_after: &Belief,
    b_base: &Belief,
    a_sel: usize,
) -> Result<Rational, EvalError> {
    if a_sel >= prob.num_actions() {
        return Err(EvalError::UnknownAction {
            index: a_sel,
            num_actions: prob.num_actions(),
        });
    }
    let base = value(prob, b_base)?;
    if !base.argmax_actions.contains(&a_sel) {
        return Err(EvalError::NotSubgradient { index: a_sel });
    }
    let after = value(prob, b_after)?;
    let row = prob.reward_row(a_sel);
    Ok(after.value - base.value - (dot(row, b_after) - dot(row, b_base)))
}

/// Adds a constant to every reward entry. The value function shifts by the
/// same constant pointwise; every VoI, force, and interaction is unchanged.
pub fn shift_rewards(prob: &DecisionProblem, c: &Rational) -> DecisionProblem {
    let rewards = (0..prob.num_actions())
        .map(|a| prob.reward_row(a).iter().map(|x| x + c).collect())
        .collect();
    DecisionProblem::new(
        prob.state_names().to_vec(),
        prob.action_names().to_vec(),
        rewards,
    )
    .expect("shifting preserves shape")
}
