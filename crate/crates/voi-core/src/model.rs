//! Exact domain types — beliefs, decision problems, channels — their
//! validation, and the instance file format.
//!
//! An instance file is a JSON document whose numbers are all *strings* in
//! rational form (`"3/4"`, `"12"`, `"0.75"`), so nothing is ever rounded:
//!
//! ```json
//! {
//!   "states": ["s1", "s2", "s3"],
//!   "actions": ["a1", "a2"],
//!   "rewards": [["12", "0", "3"], ["0", "12", "3"]],
//!   "channels": { "i": [["3/4", "1/4", "1/4"], ["1/4", "3/4", "3/4"]] }
//! }
//! ```
//!
//! Reward rows are actions, columns are states. Channel rows are outcomes,
//! columns are states; each column must sum to exactly 1.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::Index;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::rational::Rational;

/// Validation and parsing failures for model inputs. Each variant names the
/// offending field and position.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("malformed instance document: {0}")]
    Syntax(String),

    #[error("invalid rational `{token}` at {context}")]
    BadRational { context: String, token: String },

    #[error("negative entry {value} at {context}")]
    Negative { context: String, value: String },

    #[error("channel `{channel}`: column for state index {state} sums to {sum}, expected 1")]
    ColumnSum {
        channel: String,
        state: usize,
        sum: String,
    },

    #[error("belief entries sum to {sum}, expected 1")]
    BeliefSum { sum: String },

    #[error("belief has {got} entries, expected {expected}")]
    BeliefLength { expected: usize, got: usize },

    #[error("{0}")]
    Shape(String),

    #[error("{what}: need at least {min}, got {got}")]
    TooFew {
        what: &'static str,
        min: usize,
        got: usize,
    },
}

/// An exact probability distribution over the states: a point of the
/// (K-1)-simplex. Entries may be zero (faces and vertices are valid beliefs).
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct Belief {
    probs: Vec<Rational>,
}

impl Belief {
    /// Validates nonnegativity and an exact sum of 1.
    pub fn new(probs: Vec<Rational>) -> Result<Self, ModelError> {
        if probs.is_empty() {
            return Err(ModelError::TooFew {
                what: "belief entries",
                min: 1,
                got: 0,
            });
        }
        for (s, p) in probs.iter().enumerate() {
            if p.is_negative() {
                return Err(ModelError::Negative {
                    context: format!("belief[{s}]"),
                    value: p.to_string(),
                });
            }
        }
        let sum: Rational = probs.iter().sum();
        if sum != Rational::one() {
            return Err(ModelError::BeliefSum {
                sum: sum.to_string(),
            });
        }
        Ok(Belief { probs })
    }

    /// Parses a comma-separated list of `expected_len` rational literals.
    pub fn parse(text: &str, expected_len: usize) -> Result<Self, ModelError> {
        let tokens: Vec<&str> = text.split(',').collect();
        if tokens.len() != expected_len {
            return Err(ModelError::BeliefLength {
                expected: expected_len,
                got: tokens.len(),
            });
        }
        let probs = tokens
            .iter()
            .enumerate()
            .map(|(s, tok)| {
                Rational::parse(tok).map_err(|_| ModelError::BadRational {
                    context: format!("belief[{s}]"),
                    token: tok.trim().to_string(),
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        Belief::new(probs)
    }

    pub fn dim(&self) -> usize {
        self.probs.len()
    }

    pub fn probs(&self) -> &[Rational] {
        &self.probs
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Rational> {
        self.probs.iter()
    }
}

impl Index<usize> for Belief {
    type Output = Rational;
    fn index(&self, s: usize) -> &Rational {
        &self.probs[s]
    }
}

impl fmt::Display for Belief {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (s, p) in self.probs.iter().enumerate() {
            if s > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, ")")
    }
}

/// A finite decision problem: named states and actions plus the exact reward
/// matrix, rows indexed by action and columns by state.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecisionProblem {
    state_names: Vec<String>,
    action_names: Vec<String>,
    rewards: Vec<Vec<Rational>>,
}

impl DecisionProblem {
    pub fn new(
        state_names: Vec<String>,
        action_names: Vec<String>,
        rewards: Vec<Vec<Rational>>,
    ) -> Result<Self, ModelError> {
        if state_names.len() < 2 {
            return Err(ModelError::TooFew {
                what: "states",
                min: 2,
                got: state_names.len(),
            });
        }
        if action_names.len() < 2 {
            return Err(ModelError::TooFew {
                what: "actions",
                min: 2,
                got: action_names.len(),
            });
        }
        if rewards.len() != action_names.len() {
            return Err(ModelError::Shape(format!(
                "rewards has {} rows, expected one per action ({})",
                rewards.len(),
                action_names.len()
            )));
        }
        for (a, row) in rewards.iter().enumerate() {
            if row.len() != state_names.len() {
                return Err(ModelError::Shape(format!(
                    "rewards row {a} (action `{}`) has {} entries, expected {}",
                    action_names[a],
                    row.len(),
                    state_names.len()
                )));
            }
        }
        Ok(DecisionProblem {
            state_names,
            action_names,
            rewards,
        })
    }

    pub fn num_states(&self) -> usize {
        self.state_names.len()
    }

    pub fn num_actions(&self) -> usize {
        self.action_names.len()
    }

    pub fn state_names(&self) -> &[String] {
        &self.state_names
    }

    pub fn action_names(&self) -> &[String] {
        &self.action_names
    }

    pub fn action_name(&self, a: usize) -> &str {
        &self.action_names[a]
    }

    /// R(a, s).
    pub fn reward(&self, a: usize, s: usize) -> &Rational {
        &self.rewards[a][s]
    }

    /// The payoff vector r_a of one action across states.
    pub fn reward_row(&self, a: usize) -> &[Rational] {
        &self.rewards[a]
    }
}

/// A finite-outcome likelihood kernel P(o | s): rows are outcomes, columns
/// are states, and every state column sums to exactly 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Channel {
    name: String,
    kernel: Vec<Vec<Rational>>,
}

impl Channel {
    pub fn new(name: impl Into<String>, kernel: Vec<Vec<Rational>>) -> Result<Self, ModelError> {
        let name = name.into();
        if kernel.is_empty() {
            return Err(ModelError::TooFew {
                what: "channel outcomes",
                min: 1,
                got: 0,
            });
        }
        let num_states = kernel[0].len();
        if num_states == 0 {
            return Err(ModelError::TooFew {
                what: "channel state columns",
                min: 1,
                got: 0,
            });
        }
        for (o, row) in kernel.iter().enumerate() {
            if row.len() != num_states {
                return Err(ModelError::Shape(format!(
                    "channel `{name}` row {o} has {} entries, expected {num_states}",
                    row.len()
                )));
            }
            for (s, p) in row.iter().enumerate() {
                if p.is_negative() {
                    return Err(ModelError::Negative {
                        context: format!("channel `{name}`[{o}][{s}]"),
                        value: p.to_string(),
                    });
                }
            }
        }
        for s in 0..num_states {
            let sum: Rational = kernel.iter().map(|row| &row[s]).sum();
            if sum != Rational::one() {
                return Err(ModelError::ColumnSum {
                    channel: name,
                    state: s,
                    sum: sum.to_string(),
                });
            }
        }
        Ok(Channel { name, kernel })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn num_outcomes(&self) -> usize {
        self.kernel.len()
    }

    pub fn num_states(&self) -> usize {
        self.kernel[0].len()
    }

    /// P(o | s).
    pub fn prob(&self, o: usize, s: usize) -> &Rational {
        &self.kernel[o][s]
    }

    /// The likelihood row of one outcome across states.
    pub fn outcome_row(&self, o: usize) -> &[Rational] {
        &self.kernel[o]
    }
}

/// A decision problem bundled with its named channels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProblemInstance {
    problem: DecisionProblem,
    channels: BTreeMap<String, Channel>,
}

impl ProblemInstance {
    pub fn new(problem: DecisionProblem, channels: Vec<Channel>) -> Result<Self, ModelError> {
        let mut map = BTreeMap::new();
        for ch in channels {
            if ch.num_states() != problem.num_states() {
                return Err(ModelError::Shape(format!(
                    "channel `{}` has {} state columns, expected {}",
                    ch.name(),
                    ch.num_states(),
                    problem.num_states()
                )));
            }
            if map.insert(ch.name().to_string(), ch).is_some() {
                return Err(ModelError::Shape(
                    "duplicate channel name in instance".to_string(),
                ));
            }
        }
        Ok(ProblemInstance {
            problem,
            channels: map,
        })
    }

    pub fn problem(&self) -> &DecisionProblem {
        &self.problem
    }

    pub fn channel(&self, name: &str) -> Option<&Channel> {
        self.channels.get(name)
    }

    pub fn channel_names(&self) -> impl Iterator<Item = &str> {
        self.channels.keys().map(|s| s.as_str())
    }

    pub fn channels(&self) -> impl Iterator<Item = &Channel> {
        self.channels.values()
    }

    /// Canonical JSON rendering; parses back to an identical instance.
    pub fn to_json(&self) -> String {
        let doc = InstanceDoc {
            states: self.problem.state_names.clone(),
            actions: self.problem.action_names.clone(),
            rewards: self
                .problem
                .rewards
                .iter()
                .map(|row| row.iter().map(Rational::to_fraction_string).collect())
                .collect(),
            channels: self
                .channels
                .iter()
                .map(|(name, ch)| {
                    let rows = ch
                        .kernel
                        .iter()
                        .map(|row| row.iter().map(Rational::to_fraction_string).collect())
                        .collect();
                    (name.clone(), rows)
                })
                .collect(),
        };
        let mut s = serde_json::to_string_pretty(&doc).expect("instance serializes");
        s.push('\n');
        s
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct InstanceDoc {
    states: Vec<String>,
    actions: Vec<String>,
    rewards: Vec<Vec<String>>,
    channels: BTreeMap<String, Vec<Vec<String>>>,
}

/// Parses and fully validates an instance document.
pub fn parse_instance(text: &str) -> Result<ProblemInstance, ModelError> {
    let doc: InstanceDoc =
        serde_json::from_str(text).map_err(|e| ModelError::Syntax(e.to_string()))?;
    let rewards = parse_matrix(&doc.rewards, |a, s| format!("rewards[{a}][{s}]"))?;
    let problem = DecisionProblem::new(doc.states, doc.actions, rewards)?;
    let mut channels = Vec::with_capacity(doc.channels.len());
    for (name, rows) in &doc.channels {
        let kernel = parse_matrix(rows, |o, s| format!("channel `{name}`[{o}][{s}]"))?;
        channels.push(Channel::new(name.clone(), kernel)?);
    }
    ProblemInstance::new(problem, channels)
}

/// Parses a comma-separated belief with exactly `k` entries.
pub fn parse_belief(text: &str, k: usize) -> Result<Belief, ModelError> {
    Belief::parse(text, k)
}

fn parse_matrix(
    rows: &[Vec<String>],
    context: impl Fn(usize, usize) -> String,
) -> Result<Vec<Vec<Rational>>, ModelError> {
    rows.iter()
        .enumerate()
        .map(|(r, row)| {
            row.iter()
                .enumerate()
                .map(|(c, tok)| {
                    Rational::parse(tok).map_err(|_| ModelError::BadRational {
                        context: context(r, c),
                        token: tok.clone(),
                    })
                })
                .collect()
        })
        .collect()
}
