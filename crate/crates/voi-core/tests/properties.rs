//! Property-based checks of the exact identities the library promises.
//!
//! Random instances here are deliberately small (few states, actions, and
//! outcomes, single-digit denominators) so that each case is fast and kinks
//! and simplex faces are hit with substantial probability. Beliefs are drawn
//! as integer barycentric coordinates with zeros allowed: the theorems
//! quantify over the whole closed simplex, and interior-only sampling would
//! miss the kink logic entirely.

use proptest::prelude::*;

use voi_core::bayes::{marginal, posterior_family, product_channel};
use voi_core::interaction::{bregman_divergence_h, delta_voi, shift_rewards, voi};
use voi_core::localization::{classify, decision_irrelevant, stays_interior, Regime};
use voi_core::model::{parse_instance, Belief, Channel, DecisionProblem, ProblemInstance};
use voi_core::rational::Rational;
use voi_core::scanner::{grid_scan, ray_scan};
use voi_core::value::{expected_posterior_value, regret, unnorm_posterior_value, value};

fn r(n: i64, d: i64) -> Rational {
    Rational::from_ratio(n, d)
}

fn arb_rational() -> impl Strategy<Value = Rational> {
    (-12i64..=12, 1i64..=9).prop_map(|(n, d)| r(n, d))
}

fn arb_belief(k: usize) -> impl Strategy<Value = Belief> {
    proptest::collection::vec(0i64..=8, k)
        .prop_filter("not all zero", |w| w.iter().any(|&x| x > 0))
        .prop_map(|w| {
            let total: i64 = w.iter().sum();
            Belief::new(w.into_iter().map(|x| r(x, total)).collect()).unwrap()
        })
}

fn arb_problem(k: usize, actions: usize) -> impl Strategy<Value = DecisionProblem> {
    proptest::collection::vec(proptest::collection::vec(arb_rational(), k), actions).prop_map(
        move |rewards| {
            let states = (1..=k).map(|s| format!("s{s}")).collect();
            let action_names = (1..=actions).map(|a| format!("a{a}")).collect();
            DecisionProblem::new(states, action_names, rewards).unwrap()
        },
    )
}

fn arb_channel(name: &'static str, k: usize, outcomes: usize) -> impl Strategy<Value = Channel> {
    proptest::collection::vec(proptest::collection::vec(0u32..=8, k), outcomes).prop_map(
        move |mut weights| {
            // Repair all-zero columns instead of rejecting them.
            #[allow(clippy::needless_range_loop)]
            for s in 0..k {
                if (0..outcomes).all(|o| weights[o][s] == 0) {
                    weights[0][s] = 1;
                }
            }
            let kernel = (0..outcomes)
                .map(|o| {
                    (0..k)
                        .map(|s| {
                            let total: u32 = (0..outcomes).map(|oo| weights[oo][s]).sum();
                            r(weights[o][s] as i64, total as i64)
                        })
                        .collect()
                })
                .collect();
            Channel::new(name, kernel).unwrap()
        },
    )
}

#[derive(Debug, Clone)]
struct Scenario {
    prob: DecisionProblem,
    ch_i: Channel,
    ch_j: Channel,
    belief: Belief,
}

fn arb_scenario() -> impl Strategy<Value = Scenario> {
    (2usize..=4, 2usize..=4, 1usize..=3, 1usize..=3).prop_flat_map(|(k, a, oi, oj)| {
        (
            arb_problem(k, a),
            arb_channel("i", k, oi),
            arb_channel("j", k, oj),
            arb_belief(k),
        )
            .prop_map(|(prob, ch_i, ch_j, belief)| Scenario {
                prob,
                ch_i,
                ch_j,
                belief,
            })
    })
}

proptest! {
    #[test]
    fn rational_arithmetic_stays_canonical(a in arb_rational(), b in arb_rational()) {
        for x in [&a + &b, &a - &b, &a * &b] {
            let g = num_integer::Integer::gcd(x.numer(), x.denom());
            prop_assert_eq!(g, num_bigint::BigInt::from(1));
            prop_assert!(x.denom() > &num_bigint::BigInt::from(0));
            // Display round-trips exactly.
            prop_assert_eq!(Rational::parse(&x.to_string()).unwrap(), x);
        }
    }

    #[test]
    fn instance_documents_round_trip(scenario in arb_scenario()) {
        let Scenario { prob, ch_i, ch_j, .. } = scenario;
        let ch_j = Channel::new("j2", (0..ch_j.num_outcomes()).map(|o| ch_j.outcome_row(o).to_vec()).collect()).unwrap();
        let inst = ProblemInstance::new(prob, vec![ch_i, ch_j]).unwrap();
        let again = parse_instance(&inst.to_json()).unwrap();
        prop_assert_eq!(inst, again);
    }

    #[test]
    fn posteriors_mix_back_to_the_prior(scenario in arb_scenario()) {
        let Scenario { prob: _, ch_i, belief, .. } = scenario;
        let fam = posterior_family(&belief, &ch_i).unwrap();
        let m = marginal(&belief, &ch_i).unwrap();
        let total: Rational = m.probs().iter().sum();
        prop_assert_eq!(total, Rational::one());
        for s in 0..belief.dim() {
            let mixed: Rational = fam.iter().map(|e| &e.marginal * &e.posterior[s]).sum();
            prop_assert_eq!(&mixed, &belief[s]);
        }
        // Family marginals agree with the marginal distribution.
        for entry in fam.iter() {
            prop_assert_eq!(&entry.marginal, &m.probs()[entry.outcome]);
        }
    }

    #[test]
    fn sequential_equals_joint_updating(scenario in arb_scenario()) {
        let Scenario { ch_i, ch_j, belief, .. } = scenario;
        let joint = posterior_family(&belief, &product_channel(&ch_i, &ch_j).unwrap()).unwrap();
        let mut sequential = Vec::new();
        for ei in posterior_family(&belief, &ch_i).unwrap().iter() {
            for ej in posterior_family(&ei.posterior, &ch_j).unwrap().iter() {
                sequential.push((
                    ei.outcome * ch_j.num_outcomes() + ej.outcome,
                    &ei.marginal * &ej.marginal,
                    ej.posterior.clone(),
                ));
            }
        }
        prop_assert_eq!(joint.len(), sequential.len());
        for (entry, (o, m, post)) in joint.iter().zip(sequential) {
            prop_assert_eq!(entry.outcome, o);
            prop_assert_eq!(&entry.marginal, &m);
            prop_assert_eq!(&entry.posterior, &post);
        }
    }

    #[test]
    fn envelope_dominance_and_cancellation(scenario in arb_scenario()) {
        let Scenario { prob, ch_i, belief, .. } = scenario;
        let v = value(&prob, &belief).unwrap();
        for a in 0..prob.num_actions() {
            let payoff: Rational = prob
                .reward_row(a)
                .iter()
                .zip(belief.iter())
                .map(|(c, p)| c * p)
                .sum();
            prop_assert!(payoff <= v.value);
            prop_assert_eq!(payoff == v.value, v.argmax_actions.contains(&a));
            prop_assert!(!regret(&prob, a, &belief).unwrap().is_negative());
        }
        // Unnormalized posterior values cancel the Bayes denominator.
        let fam = posterior_family(&belief, &ch_i).unwrap();
        for entry in fam.iter() {
            let direct = unnorm_posterior_value(&prob, &ch_i, &belief, entry.outcome).unwrap();
            let indirect = &entry.marginal * &value(&prob, &entry.posterior).unwrap().value;
            prop_assert_eq!(direct, indirect);
        }
        // Jensen: information never hurts.
        let epv = expected_posterior_value(&prob, &ch_i, &belief).unwrap();
        prop_assert!(epv >= v.value);
        prop_assert!(!voi(&prob, &ch_i, &belief).unwrap().is_negative());
    }

    #[test]
    fn value_is_linear_inside_a_shared_region(
        scenario in arb_scenario(),
        other in arb_belief(3),
        lambda_num in 0i64..=6,
    ) {
        let Scenario { prob, belief, .. } = scenario;
        prop_assume!(prob.num_states() == 3);
        prop_assume!(voi_core::value::same_region(&prob, &belief, &other).unwrap());
        let lambda = r(lambda_num, 6);
        let mix = Belief::new(
            (0..3)
                .map(|s| &(&lambda * &belief[s]) + &(&(&Rational::one() - &lambda) * &other[s]))
                .collect(),
        )
        .unwrap();
        let lhs = value(&prob, &mix).unwrap().value;
        let rhs = &(&lambda * &value(&prob, &belief).unwrap().value)
            + &(&(&Rational::one() - &lambda) * &value(&prob, &other).unwrap().value);
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn decomposition_and_force_identities(scenario in arb_scenario()) {
        let Scenario { prob, ch_i, ch_j, belief } = scenario;
        let rep = delta_voi(&prob, &ch_i, &ch_j, &belief).unwrap();
        prop_assert_eq!(&rep.delta_voi, &(&rep.complement_force - &rep.substitute_force));
        prop_assert!(!rep.complement_force.is_negative());
        prop_assert!(!rep.substitute_force.is_negative());
        prop_assert_eq!(&rep.substitute_force, &rep.voi_i);
        prop_assert_eq!(&rep.complement_force, &(&rep.delta_voi + &rep.voi_i));
        prop_assert_eq!(&rep.delta_voi, &(&rep.voi_j_after_i - &rep.voi_j));

        // Four-term expansion through the joint channel.
        let joint = product_channel(&ch_i, &ch_j).unwrap();
        let four = expected_posterior_value(&prob, &joint, &belief).unwrap()
            - expected_posterior_value(&prob, &ch_i, &belief).unwrap()
            - expected_posterior_value(&prob, &ch_j, &belief).unwrap()
            + value(&prob, &belief).unwrap().value;
        prop_assert_eq!(&rep.delta_voi, &four);
    }

    #[test]
    fn expected_bregman_divergence_ignores_the_selector(scenario in arb_scenario()) {
        let Scenario { prob, ch_i, belief, .. } = scenario;
        let argmax = value(&prob, &belief).unwrap().argmax_actions;
        let fam = posterior_family(&belief, &ch_i).unwrap();
        let expected: Vec<Rational> = argmax
            .iter()
            .map(|&a| {
                fam.iter()
                    .map(|e| {
                        &e.marginal
                            * bregman_divergence_h(&prob, &e.posterior, &belief, a).unwrap()
                    })
                    .sum()
            })
            .collect();
        for pair in expected.windows(2) {
            prop_assert_eq!(&pair[0], &pair[1]);
        }
        // And the common value is the substitute force.
        let rep = delta_voi(&prob, &ch_i, &ch_i, &belief).unwrap();
        prop_assert_eq!(&expected[0], &rep.substitute_force);
    }

    #[test]
    fn substitute_force_is_expected_regret_off_kinks(scenario in arb_scenario()) {
        let Scenario { prob, ch_i, ch_j, belief } = scenario;
        let v = value(&prob, &belief).unwrap();
        prop_assume!(v.argmax_actions.len() == 1);
        let a = v.argmax_actions[0];
        let rep = delta_voi(&prob, &ch_i, &ch_j, &belief).unwrap();
        let expected_regret: Rational = posterior_family(&belief, &ch_i)
            .unwrap()
            .iter()
            .map(|e| &e.marginal * regret(&prob, a, &e.posterior).unwrap())
            .sum();
        prop_assert_eq!(rep.substitute_force, expected_regret);
    }

    #[test]
    fn localization_theorems_hold(scenario in arb_scenario()) {
        let Scenario { prob, ch_i, ch_j, belief } = scenario;
        // classify enforces the theorems internally and errors on violation.
        let verdict = classify(&prob, &ch_i, &ch_j, &belief).unwrap();
        let rep = delta_voi(&prob, &ch_i, &ch_j, &belief).unwrap();
        if verdict.stays_interior {
            prop_assert!(!rep.delta_voi.is_negative());
            prop_assert!(rep.voi_i.is_zero());
            prop_assert!(decision_irrelevant(&prob, &ch_i, &belief).unwrap());
        }
        if rep.delta_voi.is_negative() {
            prop_assert!(!verdict.stays_interior);
            prop_assert!(verdict.theorem3_witness.is_some());
            let prior_argmax = value(&prob, &belief).unwrap().argmax_actions;
            if prior_argmax.len() == 1 {
                prop_assert!(!verdict.crossing_outcomes.is_empty());
            }
        }
        prop_assert_eq!(
            verdict.stays_interior,
            stays_interior(&prob, &ch_i, &belief).unwrap()
        );
        prop_assert_eq!(verdict.regime, Regime::from_delta(&rep.delta_voi));
    }

    #[test]
    fn interactions_are_invariant_under_reward_shifts(
        scenario in arb_scenario(),
        shift in arb_rational(),
    ) {
        let Scenario { prob, ch_i, ch_j, belief } = scenario;
        let before = delta_voi(&prob, &ch_i, &ch_j, &belief).unwrap();
        let shifted = shift_rewards(&prob, &shift);
        let after = delta_voi(&shifted, &ch_i, &ch_j, &belief).unwrap();
        prop_assert_eq!(&after.delta_voi, &before.delta_voi);
        prop_assert_eq!(&after.complement_force, &before.complement_force);
        prop_assert_eq!(&after.substitute_force, &before.substitute_force);
        prop_assert_eq!(&after.voi_i, &before.voi_i);
        prop_assert_eq!(&after.voi_j, &before.voi_j);
        prop_assert_eq!(
            value(&shifted, &belief).unwrap().value,
            value(&prob, &belief).unwrap().value + &shift
        );
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, ..ProptestConfig::default() })]

    #[test]
    fn grid_rows_agree_with_pointwise_evaluation(scenario in arb_scenario(), n in 1u32..=4) {
        let Scenario { prob, ch_i, ch_j, .. } = scenario;
        let scan = grid_scan(&prob, &ch_i, &ch_j, n).unwrap();
        // C(n + k - 1, k - 1) lattice points.
        let k = prob.num_states() as u64;
        let expected: u64 = {
            let mut num = 1u64;
            let mut den = 1u64;
            for idx in 1..k {
                num *= n as u64 + idx;
                den *= idx;
            }
            num / den
        };
        prop_assert_eq!(scan.rows.len() as u64, expected);
        for row in &scan.rows {
            let rep = delta_voi(&prob, &ch_i, &ch_j, &row.belief).unwrap();
            prop_assert_eq!(&row.delta_voi, &rep.delta_voi);
            prop_assert_eq!(&row.complement_force, &rep.complement_force);
            prop_assert_eq!(&row.substitute_force, &rep.substitute_force);
        }
    }

    #[test]
    fn ray_segments_are_exactly_affine(
        scenario in arb_scenario(),
        target in arb_belief(3),
    ) {
        let Scenario { prob, ch_i, ch_j, belief } = scenario;
        prop_assume!(prob.num_states() == 3);
        prop_assume!(belief != target);
        let direction: Vec<Rational> = (0..3).map(|s| &target[s] - &belief[s]).collect();
        // ray_scan itself re-verifies each segment midpoint against the
        // pointwise implementation and errors on any mismatch.
        let scan = ray_scan(&prob, &ch_i, &ch_j, &belief, &direction, &Rational::one()).unwrap();
        let half = r(1, 2);
        for seg in &scan.segments {
            let tm = (&seg.t_lo + &seg.t_hi) * &half;
            let at = |t: &Rational| -> Rational {
                let probs = (0..3).map(|s| &belief[s] + &(&direction[s] * t)).collect();
                let b = Belief::new(probs).unwrap();
                delta_voi(&prob, &ch_i, &ch_j, &b).unwrap().delta_voi
            };
            // Exact midpoint affinity from fresh pointwise evaluations.
            let lhs = at(&tm) * r(2, 1);
            let rhs = at(&seg.t_lo) + at(&seg.t_hi);
            prop_assert_eq!(lhs, rhs);
        }
        // Crossings are exact zeros with a strict sign change.
        for t in &scan.interaction_crossings {
            let seg = scan.segments.iter().find(|s| &s.t_hi == t).unwrap();
            prop_assert!(seg.delta_voi.eval(t).is_zero());
        }
    }
}
