//! Boundary-crossing diagnostics and executable checks of the localization
//! results.
//!
//! Two facts are enforced at every classification, not merely tested:
//!
//! * interior complementarity — if some action stays optimal at the prior
//!   and at every positive-probability posterior of channel i, then
//!   `dVoI >= 0` (and channel i itself is decision-irrelevant there);
//! * the converse — if `dVoI < 0`, no such action exists, so some posterior
//!   left every region containing the prior's optimum.
//!
//! A violation raises [`EvalError::TheoremViolation`] carrying a full
//! reproducer; the randomized harness in the CLI hunts for exactly that
//! error and must never see it.
//!
//! Two different notions of "crossing" coexist deliberately:
//!
//! * `stays_interior` uses the closed-region reading (a shared optimal
//!   action), the hypothesis of the interior-complementarity result;
//! * `crossing_outcomes` lists outcomes whose posterior shares *no* optimal
//!   action with the prior (disjoint argmax sets), the unambiguous reading
//!   of "lies in a different decision region".
//!
//! They are not complements of each other: at a kink prior a posterior can
//! drop one of the tied optimal actions while keeping another, defeating
//! `stays_interior` without any disjoint crossing. The converse witness
//! therefore records an outcome at which some prior-optimal action stopped
//! being optimal, which is what the theorem actually guarantees; when the
//! prior argmax is a singleton this coincides with a disjoint crossing.

use serde::Serialize;

use crate::bayes::posterior_family;
use crate::error::EvalError;
use crate::interaction::{delta_voi, voi, InteractionReport};
use crate::model::{Belief, Channel, DecisionProblem, ProblemInstance};
use crate::rational::Rational;
use crate::value::value;

/// Sign of the interaction at one belief.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Regime {
    Complement,
    Substitute,
    Neutral,
}

impl Regime {
    pub fn from_delta(delta: &Rational) -> Regime {
        match delta.signum() {
            1 => Regime::Complement,
            -1 => Regime::Substitute,
            _ => Regime::Neutral,
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Regime::Complement => "complement",
            Regime::Substitute => "substitute",
            Regime::Neutral => "neutral",
        }
    }
}

impl std::fmt::Display for Regime {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Where channel i's posteriors land relative to the prior's decision
/// region(s), and what that implies for the interaction sign.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LocalizationVerdict {
    /// Some action is optimal at the prior and at every positive-marginal
    /// posterior of channel i.
    pub stays_interior: bool,
    /// Outcomes whose posterior shares no optimal action with the prior.
    pub crossing_outcomes: Vec<usize>,
    pub regime: Regime,
    /// The interior-complementarity hypothesis holds (alias of
    /// `stays_interior`, named for what it licenses).
    pub theorem2_applicable: bool,
    /// When substituting: an outcome at which some prior-optimal action is no
    /// longer optimal.
    pub theorem3_witness: Option<usize>,
}

fn reproducer(prob: &DecisionProblem, ch_i: &Channel, ch_j: &Channel, b: &Belief) -> String {
    let mut channels = vec![ch_i.clone()];
    if ch_j.name() == ch_i.name() {
        let renamed = Channel::new(
            format!("{}_second", ch_j.name()),
            (0..ch_j.num_outcomes())
                .map(|o| ch_j.outcome_row(o).to_vec())
                .collect(),
        )
        .expect("clone of a valid kernel");
        channels.push(renamed);
    } else {
        channels.push(ch_j.clone());
    }
    let instance = ProblemInstance::new(prob.clone(), channels).expect("valid instance");
    format!("belief = {b}\ninstance = {}", instance.to_json())
}

/// Classifies the interaction at `b` and enforces the localization results
/// on the way out.
pub fn classify(
    prob: &DecisionProblem,
    ch_i: &Channel,
    ch_j: &Channel,
    b: &Belief,
) -> Result<LocalizationVerdict, EvalError> {
    classify_report(prob, ch_i, ch_j, b).map(|(_, verdict)| verdict)
}

/// [`classify`] that also returns the interaction report it computed.
pub fn classify_report(
    prob: &DecisionProblem,
    ch_i: &Channel,
    ch_j: &Channel,
    b: &Belief,
) -> Result<(InteractionReport, LocalizationVerdict), EvalError> {
    let report = delta_voi(prob, ch_i, ch_j, b)?;
    let prior_argmax = value(prob, b)?.argmax_actions;
    let posterior_argmax: Vec<(usize, Vec<usize>)> = report
        .per_outcome
        .iter()
        .map(|e| Ok((e.outcome, value(prob, &e.posterior)?.argmax_actions)))
        .collect::<Result<_, EvalError>>()?;

    let stays_interior = prior_argmax
        .iter()
        .any(|a| posterior_argmax.iter().all(|(_, am)| am.contains(a)));
    let crossing_outcomes: Vec<usize> = posterior_argmax
        .iter()
        .filter(|(_, am)| !am.iter().any(|a| prior_argmax.contains(a)))
        .map(|(o, _)| *o)
        .collect();
    let regime = Regime::from_delta(&report.delta_voi);
    let theorem3_witness = if regime == Regime::Substitute {
        posterior_argmax
            .iter()
            .find(|(_, am)| prior_argmax.iter().any(|a| !am.contains(a)))
            .map(|(o, _)| *o)
    } else {
        None
    };

    let fail = |theorem: &'static str, details: String| {
        Err(EvalError::TheoremViolation {
            theorem,
            details,
            reproducer: reproducer(prob, ch_i, ch_j, b),
        })
    };

    if stays_interior && report.delta_voi.is_negative() {
        return fail(
            "interior complementarity",
            format!(
                "posteriors stay in the prior's region yet dVoI = {} < 0",
                report.delta_voi
            ),
        );
    }
    if stays_interior && !report.voi_i.is_zero() {
        return fail(
            "decision irrelevance",
            format!(
                "posteriors stay in the prior's region yet VoI(i) = {} != 0",
                report.voi_i
            ),
        );
    }
    if regime == Regime::Substitute {
        if stays_interior {
            return fail(
                "substitution requires crossing",
                "dVoI < 0 with stays_interior".to_string(),
            );
        }
        if theorem3_witness.is_none() {
            return fail(
                "substitution requires crossing",
                "dVoI < 0 but every posterior keeps the full prior argmax".to_string(),
            );
        }
        if prior_argmax.len() == 1 && crossing_outcomes.is_empty() {
            return fail(
                "substitution requires crossing",
                "dVoI < 0 with a unique prior action yet no disjoint crossing".to_string(),
            );
        }
    }

    let verdict = LocalizationVerdict {
        stays_interior,
        crossing_outcomes,
        regime,
        theorem2_applicable: stays_interior,
        theorem3_witness,
    };
    Ok((report, verdict))
}

/// Whether some action is optimal at `b` and at every positive-marginal
/// posterior of `ch` (the closed-region hypothesis for a single channel).
pub fn stays_interior(prob: &DecisionProblem, ch: &Channel, b: &Belief) -> Result<bool, EvalError> {
    let prior_argmax = value(prob, b)?.argmax_actions;
    let fam = posterior_family(b, ch)?;
    let mut keeps = prior_argmax;
    for entry in fam.iter() {
        let am = value(prob, &entry.posterior)?.argmax_actions;
        keeps.retain(|a| am.contains(a));
        if keeps.is_empty() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// VoI(ch | b) == 0. When the channel's posteriors all stay in the prior's
/// closed region this must hold; that implication is enforced here.
pub fn decision_irrelevant(
    prob: &DecisionProblem,
    ch: &Channel,
    b: &Belief,
) -> Result<bool, EvalError> {
    let v = voi(prob, ch, b)?;
    let irrelevant = v.is_zero();
    if !irrelevant && stays_interior(prob, ch, b)? {
        return Err(EvalError::TheoremViolation {
            theorem: "decision irrelevance",
            details: format!("posteriors stay in the prior's region yet VoI = {v} != 0"),
            reproducer: reproducer(prob, ch, ch, b),
        });
    }
    Ok(irrelevant)
}
