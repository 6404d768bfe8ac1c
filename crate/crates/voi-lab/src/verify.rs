//! Randomized falsification harness.
//!
//! Draws random decision problems, channel pairs, and beliefs (boundary and
//! kink beliefs included with substantial probability), then asserts eight
//! groups of exact identities per case:
//!
//! 1. decomposition: dVoI = complement force - substitute force
//! 2. nonnegativity of both forces
//! 3. substitute force = VoI(i), the two computation routes agreeing
//! 4. interior posteriors imply dVoI >= 0
//! 5. dVoI < 0 implies a boundary crossing (plus a disjoint crossing when
//!    the prior argmax is unique)
//! 6. interior posteriors imply VoI(i) = 0
//! 7. the four-term expansion through the joint channel
//! 8. invariance of every interaction quantity under a random constant
//!    reward shift
//!
//! Every case derives its own RNG stream from (seed, case index), so runs
//! are byte-deterministic and trivially parallel; results merge in case
//! order. A violation prints a full reproducer and exits nonzero.

use std::io::Write;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use voi_core::bayes::product_channel;
use voi_core::interaction::{delta_voi, shift_rewards};
use voi_core::localization::{classify_report, Regime};
use voi_core::value::{expected_posterior_value, value};
use voi_core::{Belief, Channel, DecisionProblem, ProblemInstance, Rational};

use crate::{thread_limit, CliError};

#[derive(Debug, Clone)]
pub struct FuzzConfig {
    pub seed: u64,
    pub cases: u64,
    pub max_states: usize,
    pub max_actions: usize,
    pub max_outcomes: usize,
    pub denom_bound: i64,
}

impl FuzzConfig {
    pub fn validate(&self) -> Result<(), CliError> {
        let bad = |msg: String| Err(CliError::Invalid(msg));
        if self.cases < 1 {
            return bad("cases must be at least 1".to_string());
        }
        if !(2..=5).contains(&self.max_states) {
            return bad(format!(
                "max_states must be in 2..=5, got {}",
                self.max_states
            ));
        }
        if !(2..=5).contains(&self.max_actions) {
            return bad(format!(
                "max_actions must be in 2..=5, got {}",
                self.max_actions
            ));
        }
        if !(1..=4).contains(&self.max_outcomes) {
            return bad(format!(
                "max_outcomes must be in 1..=4, got {}",
                self.max_outcomes
            ));
        }
        if self.denom_bound < 1 {
            return bad(format!(
                "denom_bound must be at least 1, got {}",
                self.denom_bound
            ));
        }
        Ok(())
    }
}

/// One random case: a problem, two channels named `i` and `j`, a belief, and
/// a constant for the shift-invariance check.
#[derive(Debug, Clone)]
pub struct Case {
    pub problem: DecisionProblem,
    pub channel_i: Channel,
    pub channel_j: Channel,
    pub belief: Belief,
    pub shift: Rational,
}

fn random_rational(rng: &mut ChaCha8Rng, bound: i64) -> Rational {
    let den = rng.gen_range(1..=bound);
    let num = rng.gen_range(-bound * den..=bound * den);
    Rational::from_ratio(num, den)
}

fn random_channel(rng: &mut ChaCha8Rng, name: &str, k: usize, cfg: &FuzzConfig) -> Channel {
    let outcomes = rng.gen_range(1..=cfg.max_outcomes);
    // Draw nonnegative weights per state column, reject all-zero columns,
    // normalize by the exact column sum.
    let mut columns: Vec<Vec<Rational>> = Vec::with_capacity(k);
    for _ in 0..k {
        let weights: Vec<Rational> = loop {
            let w: Vec<Rational> = (0..outcomes)
                .map(|_| {
                    let den = rng.gen_range(1..=cfg.denom_bound);
                    let num = rng.gen_range(0..=cfg.denom_bound);
                    Rational::from_ratio(num, den)
                })
                .collect();
            if w.iter().any(|x| !x.is_zero()) {
                break w;
            }
        };
        let total: Rational = weights.iter().sum();
        columns.push(weights.into_iter().map(|w| w / &total).collect());
    }
    let kernel = (0..outcomes)
        .map(|o| (0..k).map(|s| columns[s][o].clone()).collect())
        .collect();
    Channel::new(name, kernel).expect("normalized kernel is stochastic")
}

fn random_belief(rng: &mut ChaCha8Rng, k: usize, bound: i64) -> Belief {
    // Integer barycentric coordinates with zeros allowed, so faces and kinks
    // of the simplex are sampled too.
    let coords: Vec<i64> = loop {
        let c: Vec<i64> = (0..k).map(|_| rng.gen_range(0..=bound)).collect();
        if c.iter().any(|&x| x > 0) {
            break c;
        }
    };
    let total: i64 = coords.iter().sum();
    Belief::new(
        coords
            .into_iter()
            .map(|c| Rational::from_ratio(c, total))
            .collect(),
    )
    .expect("normalized coordinates sum to 1")
}

/// Deterministically generates case number `index` for the given config.
pub fn generate_case(cfg: &FuzzConfig, index: u64) -> Case {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(index);
    let k = rng.gen_range(2..=cfg.max_states);
    let actions = rng.gen_range(2..=cfg.max_actions);
    let rewards = (0..actions)
        .map(|_| {
            (0..k)
                .map(|_| random_rational(&mut rng, cfg.denom_bound))
                .collect()
        })
        .collect();
    let problem = DecisionProblem::new(
        (1..=k).map(|s| format!("s{s}")).collect(),
        (1..=actions).map(|a| format!("a{a}")).collect(),
        rewards,
    )
    .expect("generated shape is consistent");
    Case {
        channel_i: random_channel(&mut rng, "i", k, cfg),
        channel_j: random_channel(&mut rng, "j", k, cfg),
        belief: random_belief(&mut rng, k, cfg.denom_bound),
        shift: random_rational(&mut rng, cfg.denom_bound),
        problem,
    }
}

#[derive(Debug, Clone)]
pub struct CaseOutcome {
    pub regime: Regime,
    pub gap_witness: bool,
    pub violation: Option<String>,
}

fn reproducer(case: &Case) -> String {
    let instance = ProblemInstance::new(
        case.problem.clone(),
        vec![case.channel_i.clone(), case.channel_j.clone()],
    )
    .expect("generated instance is valid");
    format!(
        "belief = {}\ninstance = {}",
        case.belief,
        instance.to_json()
    )
}

/// Runs the eight assertion groups on one case.
pub fn check_case(case: &Case, index: u64) -> CaseOutcome {
    let fail = |assertion: &str, details: String| CaseOutcome {
        regime: Regime::Neutral,
        gap_witness: false,
        violation: Some(format!(
            "case {index}: assertion `{assertion}` failed: {details}\n{}",
            reproducer(case)
        )),
    };

    let (report, verdict) = match classify_report(
        &case.problem,
        &case.channel_i,
        &case.channel_j,
        &case.belief,
    ) {
        Ok(pair) => pair,
        // classify itself enforces the localization theorems.
        Err(e) => return fail("localization", e.to_string()),
    };

    // 1: decomposition identity.
    if report.delta_voi != &report.complement_force - &report.substitute_force {
        return fail(
            "decomposition",
            format!(
                "dVoI = {} but forces give {} - {}",
                report.delta_voi, report.complement_force, report.substitute_force
            ),
        );
    }
    // 2: force nonnegativity.
    if report.complement_force.is_negative() || report.substitute_force.is_negative() {
        return fail(
            "force_nonnegativity",
            format!(
                "complement = {}, substitute = {}",
                report.complement_force, report.substitute_force
            ),
        );
    }
    // 3: the posterior-route substitute force equals the cancellation-route
    // VoI(i).
    if report.substitute_force != report.voi_i {
        return fail(
            "substitute_force_identity",
            format!(
                "E[D_h] = {} but VoI(i) = {}",
                report.substitute_force, report.voi_i
            ),
        );
    }
    // 4: interior posteriors force a nonnegative interaction.
    if verdict.stays_interior && report.delta_voi.is_negative() {
        return fail(
            "interior_complementarity",
            format!("stays_interior with dVoI = {}", report.delta_voi),
        );
    }
    // 5: substitution requires a boundary crossing.
    if report.delta_voi.is_negative() {
        if verdict.stays_interior || verdict.theorem3_witness.is_none() {
            return fail(
                "substitution_requires_crossing",
                format!("dVoI = {} without a crossing witness", report.delta_voi),
            );
        }
        let prior_argmax = value(&case.problem, &case.belief)
            .expect("dimensions checked")
            .argmax_actions;
        if prior_argmax.len() == 1 && verdict.crossing_outcomes.is_empty() {
            return fail(
                "substitution_requires_crossing",
                "unique prior action but no disjoint crossing".to_string(),
            );
        }
    }
    // 6: interior posteriors make channel i decision-irrelevant.
    if verdict.stays_interior && !report.voi_i.is_zero() {
        return fail(
            "decision_irrelevance",
            format!("stays_interior with VoI(i) = {}", report.voi_i),
        );
    }
    // 7: four-term expansion through the joint channel.
    let four_term = (|| -> Result<Rational, voi_core::EvalError> {
        let joint = product_channel(&case.channel_i, &case.channel_j)?;
        Ok(
            expected_posterior_value(&case.problem, &joint, &case.belief)?
                - expected_posterior_value(&case.problem, &case.channel_i, &case.belief)?
                - expected_posterior_value(&case.problem, &case.channel_j, &case.belief)?
                + value(&case.problem, &case.belief)?.value,
        )
    })();
    match four_term {
        Ok(four) => {
            if four != report.delta_voi {
                return fail(
                    "four_term_identity",
                    format!("joint expansion gives {four}, dVoI = {}", report.delta_voi),
                );
            }
        }
        Err(e) => return fail("four_term_identity", e.to_string()),
    }
    // 8: constant reward shifts change nothing.
    let shifted = shift_rewards(&case.problem, &case.shift);
    match delta_voi(&shifted, &case.channel_i, &case.channel_j, &case.belief) {
        Ok(after) => {
            if after.delta_voi != report.delta_voi
                || after.complement_force != report.complement_force
                || after.substitute_force != report.substitute_force
                || after.voi_i != report.voi_i
                || after.voi_j != report.voi_j
                || after.voi_j_after_i != report.voi_j_after_i
            {
                return fail(
                    "shift_invariance",
                    format!("quantities changed under shift by {}", case.shift),
                );
            }
        }
        Err(e) => return fail("shift_invariance", e.to_string()),
    }

    CaseOutcome {
        regime: verdict.regime,
        gap_witness: !verdict.stays_interior && verdict.regime == Regime::Complement,
        violation: None,
    }
}

#[derive(Debug)]
pub struct VerifyReport {
    pub cases_run: u64,
    pub violations: Vec<String>,
    pub gap_witnesses: u64,
    pub complement: u64,
    pub substitute: u64,
    pub neutral: u64,
    pub elapsed: std::time::Duration,
}

pub fn run_verify(cfg: &FuzzConfig, threads: usize) -> VerifyReport {
    let start = Instant::now();
    let workers = threads.clamp(1, cfg.cases.max(1) as usize);
    let chunk = cfg.cases.div_ceil(workers as u64);
    let mut outcomes: Vec<CaseOutcome> = Vec::with_capacity(cfg.cases as usize);
    std::thread::scope(|scope| {
        let handles: Vec<_> = (0..workers as u64)
            .map(|w| {
                let lo = w * chunk;
                let hi = ((w + 1) * chunk).min(cfg.cases);
                scope.spawn(move || {
                    (lo..hi)
                        .map(|index| check_case(&generate_case(cfg, index), index))
                        .collect::<Vec<_>>()
                })
            })
            .collect();
        for handle in handles {
            outcomes.extend(handle.join().expect("worker panicked"));
        }
    });

    let mut report = VerifyReport {
        cases_run: outcomes.len() as u64,
        violations: Vec::new(),
        gap_witnesses: 0,
        complement: 0,
        substitute: 0,
        neutral: 0,
        elapsed: std::time::Duration::ZERO,
    };
    for outcome in outcomes {
        if let Some(v) = outcome.violation {
            report.violations.push(v);
            continue;
        }
        match outcome.regime {
            Regime::Complement => report.complement += 1,
            Regime::Substitute => report.substitute += 1,
            Regime::Neutral => report.neutral += 1,
        }
        if outcome.gap_witness {
            report.gap_witnesses += 1;
        }
    }
    report.elapsed = start.elapsed();
    report
}

pub fn run(cfg: &FuzzConfig, stdout: &mut impl Write) -> Result<(), CliError> {
    cfg.validate()?;
    let report = run_verify(cfg, thread_limit());
    writeln!(
        stdout,
        "verify: seed={} cases={} max_states={} max_actions={} max_outcomes={} denom_bound={}",
        cfg.seed, cfg.cases, cfg.max_states, cfg.max_actions, cfg.max_outcomes, cfg.denom_bound
    )?;
    writeln!(stdout, "cases_run: {}", report.cases_run)?;
    writeln!(stdout, "violations: {}", report.violations.len())?;
    writeln!(stdout, "gap_witnesses: {}", report.gap_witnesses)?;
    writeln!(
        stdout,
        "regime_histogram: complement={} substitute={} neutral={}",
        report.complement, report.substitute, report.neutral
    )?;
    const MAX_PRINTED: usize = 10;
    for (idx, violation) in report.violations.iter().take(MAX_PRINTED).enumerate() {
        writeln!(stdout, "--- violation {} ---", idx + 1)?;
        writeln!(stdout, "{violation}")?;
    }
    if report.violations.len() > MAX_PRINTED {
        writeln!(
            stdout,
            "({} further violations omitted)",
            report.violations.len() - MAX_PRINTED
        )?;
    }
    eprintln!("elapsed: {:.2?}", report.elapsed);
    if report.violations.is_empty() {
        Ok(())
    } else {
        Err(CliError::Violation(format!(
            "{} of {} cases violated an identity or theorem",
            report.violations.len(),
            report.cases_run
        )))
    }
}
