//! Bayesian mechanics: outcome marginals, posterior families, and product
//! channels, all exact.
//!
//! The load-bearing identity is the martingale property: the marginals mix
//! the posteriors back to the prior, entrywise and exactly,
//! `sum_o P(o|b) * posterior(o) = b`. Everything downstream (the Jensen-gap
//! decomposition, the localization theorems) leans on it.

use crate::error::EvalError;
use crate::model::{Belief, Channel};
use crate::rational::Rational;

/// The marginal distribution P(o | b) over a channel's outcomes at a belief.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OutcomeDistribution {
    probs: Vec<Rational>,
}

impl OutcomeDistribution {
    pub fn probs(&self) -> &[Rational] {
        &self.probs
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }
}

/// One positive-probability outcome with its marginal and posterior belief.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PosteriorOutcome {
    pub outcome: usize,
    pub marginal: Rational,
    pub posterior: Belief,
}

/// The posterior beliefs of a channel at a prior, one entry per outcome with
/// positive marginal. Zero-marginal outcomes are omitted: they carry zero
/// weight in every expectation, and omission avoids a 0/0 convention.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PosteriorFamily {
    entries: Vec<PosteriorOutcome>,
}

impl PosteriorFamily {
    pub fn entries(&self) -> &[PosteriorOutcome] {
        &self.entries
    }

    pub fn iter(&self) -> std::slice::Iter<'_, PosteriorOutcome> {
        self.entries.iter()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

impl<'a> IntoIterator for &'a PosteriorFamily {
    type Item = &'a PosteriorOutcome;
    type IntoIter = std::slice::Iter<'a, PosteriorOutcome>;
    fn into_iter(self) -> Self::IntoIter {
        self.entries.iter()
    }
}

fn check_dims(b: &Belief, ch: &Channel) -> Result<(), EvalError> {
    if b.dim() != ch.num_states() {
        return Err(EvalError::Dimension(format!(
            "belief has {} states, channel `{}` has {}",
            b.dim(),
            ch.name(),
            ch.num_states()
        )));
    }
    Ok(())
}

/// P(o | b) = sum_s P(o | s) b(s) for every outcome o.
pub fn marginal(b: &Belief, ch: &Channel) -> Result<OutcomeDistribution, EvalError> {
    check_dims(b, ch)?;
    let probs = (0..ch.num_outcomes())
        .map(|o| {
            ch.outcome_row(o)
                .iter()
                .zip(b.iter())
                .map(|(p, q)| p * q)
                .sum()
        })
        .collect();
    Ok(OutcomeDistribution { probs })
}

/// Bayes' rule at every positive-marginal outcome:
/// posterior(s) = P(o | s) b(s) / P(o | b).
pub fn posterior_family(b: &Belief, ch: &Channel) -> Result<PosteriorFamily, EvalError> {
    check_dims(b, ch)?;
    let mut entries = Vec::with_capacity(ch.num_outcomes());
    for o in 0..ch.num_outcomes() {
        let unnorm: Vec<Rational> = ch
            .outcome_row(o)
            .iter()
            .zip(b.iter())
            .map(|(p, q)| p * q)
            .collect();
        let m: Rational = unnorm.iter().sum();
        if m.is_zero() {
            continue;
        }
        let probs: Vec<Rational> = unnorm.into_iter().map(|u| u / &m).collect();
        let posterior = Belief::new(probs).expect("posterior normalizes exactly");
        entries.push(PosteriorOutcome {
            outcome: o,
            marginal: m,
            posterior,
        });
    }
    Ok(PosteriorFamily { entries })
}

/// The joint channel of two conditionally independent channels:
/// P((o1, o2) | s) = P(o1 | s) P(o2 | s), outcomes in (o1, o2) lexicographic
/// order (o1 major). Self-products are allowed and model two independent
/// draws from the same kernel.
pub fn product_channel(first: &Channel, second: &Channel) -> Result<Channel, EvalError> {
    if first.num_states() != second.num_states() {
        return Err(EvalError::Dimension(format!(
            "channel `{}` has {} states, channel `{}` has {}",
            first.name(),
            first.num_states(),
            second.name(),
            second.num_states()
        )));
    }
    let k = first.num_states();
    let mut kernel = Vec::with_capacity(first.num_outcomes() * second.num_outcomes());
    for o1 in 0..first.num_outcomes() {
        for o2 in 0..second.num_outcomes() {
            let row: Vec<Rational> = (0..k)
                .map(|s| first.prob(o1, s) * second.prob(o2, s))
                .collect();
            kernel.push(row);
        }
    }
    let name = format!("{}*{}", first.name(), second.name());
    Channel::new(name, kernel)
        .map_err(|e| EvalError::Internal(format!("product kernel failed validation: {e}")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::parse_instance;

    const PAPER_JSON: &str = include_str!("../../../examples/paper.json");

    fn r(n: i64, d: i64) -> Rational {
        Rational::from_ratio(n, d)
    }

    fn beliefs(entries: &[(i64, i64)]) -> Belief {
        Belief::new(entries.iter().map(|&(n, d)| r(n, d)).collect()).unwrap()
    }

    fn paper() -> crate::model::ProblemInstance {
        parse_instance(PAPER_JSON).unwrap()
    }

    #[test]
    fn marginals_match_the_worked_example() {
        let inst = paper();
        let ch_i = inst.channel("i").unwrap();
        let b1 = beliefs(&[(1, 11), (2, 11), (8, 11)]);
        let m = marginal(&b1, ch_i).unwrap();
        assert_eq!(m.probs(), &[r(13, 44), r(31, 44)]);

        let b3 = beliefs(&[(5, 12), (5, 12), (1, 6)]);
        let m3 = marginal(&b3, ch_i).unwrap();
        assert_eq!(m3.probs(), &[r(11, 24), r(13, 24)]);
    }

    #[test]
    fn single_outcome_channel_is_uninformative() {
        let ch = Channel::new(
            "one",
            vec![vec![Rational::one(), Rational::one(), Rational::one()]],
        )
        .unwrap();
        let b = beliefs(&[(1, 2), (1, 3), (1, 6)]);
        let m = marginal(&b, &ch).unwrap();
        assert_eq!(m.probs(), &[Rational::one()]);
        let fam = posterior_family(&b, &ch).unwrap();
        assert_eq!(fam.len(), 1);
        assert_eq!(fam.entries()[0].posterior, b);
    }

    #[test]
    fn posteriors_match_the_worked_example() {
        let inst = paper();
        let ch_i = inst.channel("i").unwrap();

        let b1 = beliefs(&[(1, 11), (2, 11), (8, 11)]);
        let fam = posterior_family(&b1, ch_i).unwrap();
        assert_eq!(fam.len(), 2);
        assert_eq!(fam.entries()[0].outcome, 0);
        assert_eq!(fam.entries()[0].marginal, r(13, 44));
        assert_eq!(
            fam.entries()[0].posterior,
            beliefs(&[(3, 13), (2, 13), (8, 13)])
        );
        assert_eq!(fam.entries()[1].marginal, r(31, 44));
        assert_eq!(
            fam.entries()[1].posterior,
            beliefs(&[(1, 31), (6, 31), (24, 31)])
        );

        let b3 = beliefs(&[(5, 12), (5, 12), (1, 6)]);
        let fam3 = posterior_family(&b3, ch_i).unwrap();
        assert_eq!(
            fam3.entries()[0].posterior,
            beliefs(&[(15, 22), (5, 22), (2, 22)])
        );
        assert_eq!(
            fam3.entries()[1].posterior,
            beliefs(&[(5, 26), (15, 26), (6, 26)])
        );
    }

    #[test]
    fn identical_rows_leave_the_prior_unchanged() {
        let ch = Channel::new(
            "flat",
            vec![
                vec![r(1, 3), r(1, 3), r(1, 3)],
                vec![r(2, 3), r(2, 3), r(2, 3)],
            ],
        )
        .unwrap();
        let b = beliefs(&[(1, 4), (1, 4), (1, 2)]);
        for entry in posterior_family(&b, &ch).unwrap().iter() {
            assert_eq!(entry.posterior, b);
        }
    }

    #[test]
    fn zero_marginal_outcomes_are_omitted() {
        let ch = Channel::new(
            "gap",
            vec![
                vec![Rational::one(), Rational::zero()],
                vec![Rational::zero(), Rational::one()],
            ],
        )
        .unwrap();
        // Prior concentrated on state 0: outcome 1 has zero marginal.
        let b = beliefs(&[(1, 1), (0, 1)]);
        let fam = posterior_family(&b, &ch).unwrap();
        assert_eq!(fam.len(), 1);
        assert_eq!(fam.entries()[0].outcome, 0);
        assert_eq!(fam.entries()[0].marginal, Rational::one());
    }

    #[test]
    fn martingale_mixes_posteriors_back_to_the_prior() {
        let inst = paper();
        let b = beliefs(&[(1, 4), (1, 6), (7, 12)]);
        for ch in inst.channels() {
            let fam = posterior_family(&b, ch).unwrap();
            let total: Rational = fam.iter().map(|e| &e.marginal).sum();
            assert_eq!(total, Rational::one());
            for s in 0..b.dim() {
                let mixed: Rational = fam.iter().map(|e| &e.marginal * &e.posterior[s]).sum();
                assert_eq!(mixed, b[s], "state {s}");
            }
        }
    }

    #[test]
    fn product_channel_matches_elementwise_products() {
        let inst = paper();
        let ch_i = inst.channel("i").unwrap();
        let ch_j = inst.channel("j").unwrap();
        let ij = product_channel(ch_i, ch_j).unwrap();
        assert_eq!(ij.num_outcomes(), 4);
        assert_eq!(ij.name(), "i*j");
        // Column for s1 in (o_i, o_j) lexicographic order.
        let col: Vec<Rational> = (0..4).map(|o| ij.prob(o, 0).clone()).collect();
        assert_eq!(col, vec![r(3, 16), r(9, 16), r(1, 16), r(3, 16)]);
    }

    #[test]
    fn product_with_single_outcome_channel_is_identity() {
        let inst = paper();
        let ch_i = inst.channel("i").unwrap();
        let one = Channel::new(
            "one",
            vec![vec![Rational::one(), Rational::one(), Rational::one()]],
        )
        .unwrap();
        let prod = product_channel(ch_i, &one).unwrap();
        assert_eq!(prod.num_outcomes(), ch_i.num_outcomes());
        for o in 0..ch_i.num_outcomes() {
            assert_eq!(prod.outcome_row(o), ch_i.outcome_row(o));
        }
    }

    #[test]
    fn self_product_is_allowed() {
        let inst = paper();
        let ch_i = inst.channel("i").unwrap();
        let ii = product_channel(ch_i, ch_i).unwrap();
        assert_eq!(ii.num_outcomes(), 4);
        assert_eq!(ii.prob(0, 0), &r(9, 16));
    }

    #[test]
    fn sequential_updating_equals_joint_updating() {
        let inst = paper();
        let ch_i = inst.channel("i").unwrap();
        let ch_j = inst.channel("j").unwrap();
        let b = beliefs(&[(1, 4), (1, 6), (7, 12)]);

        let joint = posterior_family(&b, &product_channel(ch_i, ch_j).unwrap()).unwrap();
        let mut sequential = Vec::new();
        for ei in posterior_family(&b, ch_i).unwrap().iter() {
            for ej in posterior_family(&ei.posterior, ch_j).unwrap().iter() {
                sequential.push((
                    ei.outcome * ch_j.num_outcomes() + ej.outcome,
                    &ei.marginal * &ej.marginal,
                    ej.posterior.clone(),
                ));
            }
        }
        assert_eq!(joint.len(), sequential.len());
        for (entry, (o, m, post)) in joint.iter().zip(sequential) {
            assert_eq!(entry.outcome, o);
            assert_eq!(entry.marginal, m);
            assert_eq!(entry.posterior, post);
        }
    }

    #[test]
    fn dimension_mismatch_is_an_error() {
        let inst = paper();
        let ch_i = inst.channel("i").unwrap();
        let short = beliefs(&[(1, 2), (1, 2)]);
        assert!(matches!(
            marginal(&short, ch_i),
            Err(EvalError::Dimension(_))
        ));
        let two_state = Channel::new("t", vec![vec![Rational::one(), Rational::one()]]).unwrap();
        assert!(matches!(
            product_channel(ch_i, &two_state),
            Err(EvalError::Dimension(_))
        ));
    }
}
