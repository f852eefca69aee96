//! Scripted fault injection and the replication-lag policy.
//!
//! A script is evaluated against the request stream: each incoming
//! request is classified by kind, matched against the rules in order,
//! and the first matching rule whose probability fires decides the
//! outcome. All randomness comes from one seeded generator, so a given
//! (seed, script, request sequence) always replays identically.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// Request classification for fault matching. Edits cover both entity
/// creation and amendment; admin traffic is never faulted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OpKind {
    Edit,
    Get,
    Sparql,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FaultOutcome {
    DatabaseLocked,
    FailedSave,
    Timeout,
    Pass,
}

/// One rule: applies to requests of `op` whose per-kind index falls in
/// `[from, to]`, firing with `probability`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FaultRule {
    pub op: OpKind,
    #[serde(default)]
    pub from: u64,
    #[serde(default = "default_to")]
    pub to: u64,
    pub outcome: FaultOutcome,
    #[serde(default = "default_probability")]
    pub probability: f64,
}

fn default_to() -> u64 {
    u64::MAX
}

fn default_probability() -> f64 {
    1.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LagPolicy {
    /// The most recent k writes stay invisible to SPARQL.
    Fixed(u64),
    /// A write becomes visible d processed requests after its commit.
    Delay(u64),
    /// The view advances only on explicit flush calls.
    ManualFlush,
}

impl Default for LagPolicy {
    fn default() -> LagPolicy {
        LagPolicy::Fixed(0)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FaultScript {
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub rules: Vec<FaultRule>,
    #[serde(default)]
    pub lag_policy: LagPolicy,
}

impl Default for FaultScript {
    fn default() -> FaultScript {
        FaultScript { seed: 0, rules: Vec::new(), lag_policy: LagPolicy::Fixed(0) }
    }
}

/// The script plus its evolving replay state.
#[derive(Debug, Clone)]
pub struct ScriptState {
    pub script: FaultScript,
    rng: ChaCha8Rng,
    edit_index: u64,
    get_index: u64,
    sparql_index: u64,
}

impl ScriptState {
    pub fn new(script: FaultScript) -> ScriptState {
        let rng = ChaCha8Rng::seed_from_u64(script.seed);
        ScriptState { script, rng, edit_index: 0, get_index: 0, sparql_index: 0 }
    }

    /// Decide the outcome for the next request of this kind, consuming
    /// one per-kind index and any probability draws in rule order.
    pub fn decide(&mut self, op: OpKind) -> FaultOutcome {
        let index = match op {
            OpKind::Edit => {
                let i = self.edit_index;
                self.edit_index += 1;
                i
            }
            OpKind::Get => {
                let i = self.get_index;
                self.get_index += 1;
                i
            }
            OpKind::Sparql => {
                let i = self.sparql_index;
                self.sparql_index += 1;
                i
            }
        };
        for rule in &self.script.rules {
            if rule.op != op || index < rule.from || index > rule.to {
                continue;
            }
            let fires = if rule.probability >= 1.0 {
                true
            } else if rule.probability <= 0.0 {
                false
            } else {
                self.rng.random::<f64>() < rule.probability
            };
            if fires {
                return rule.outcome;
            }
        }
        FaultOutcome::Pass
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rule(op: OpKind, from: u64, to: u64, outcome: FaultOutcome, p: f64) -> FaultRule {
        FaultRule { op, from, to, outcome, probability: p }
    }

    #[test]
    fn first_matching_rule_wins_and_indexes_are_per_kind() {
        let script = FaultScript {
            seed: 1,
            rules: vec![
                rule(OpKind::Edit, 0, 0, FaultOutcome::DatabaseLocked, 1.0),
                rule(OpKind::Edit, 0, 9, FaultOutcome::FailedSave, 1.0),
            ],
            lag_policy: LagPolicy::Fixed(0),
        };
        let mut state = ScriptState::new(script);
        assert_eq!(state.decide(OpKind::Get), FaultOutcome::Pass);
        assert_eq!(state.decide(OpKind::Edit), FaultOutcome::DatabaseLocked);
        assert_eq!(state.decide(OpKind::Edit), FaultOutcome::FailedSave);
        assert_eq!(state.decide(OpKind::Sparql), FaultOutcome::Pass);
    }

    #[test]
    fn probabilistic_rules_replay_identically() {
        let script = FaultScript {
            seed: 99,
            rules: vec![rule(OpKind::Edit, 0, u64::MAX, FaultOutcome::Timeout, 0.3)],
            lag_policy: LagPolicy::Fixed(0),
        };
        let run = |script: FaultScript| {
            let mut state = ScriptState::new(script);
            (0..200).map(|_| state.decide(OpKind::Edit)).collect::<Vec<_>>()
        };
        let first = run(script.clone());
        let second = run(script);
        assert_eq!(first, second);
        assert!(first.contains(&FaultOutcome::Timeout));
        assert!(first.contains(&FaultOutcome::Pass));
    }

    #[test]
    fn explicit_pass_rules_shadow_later_failures() {
        let script = FaultScript {
            seed: 0,
            rules: vec![
                rule(OpKind::Edit, 0, 2, FaultOutcome::Pass, 1.0),
                rule(OpKind::Edit, 0, u64::MAX, FaultOutcome::DatabaseLocked, 1.0),
            ],
            lag_policy: LagPolicy::ManualFlush,
        };
        let mut state = ScriptState::new(script);
        for _ in 0..3 {
            assert_eq!(state.decide(OpKind::Edit), FaultOutcome::Pass);
        }
        assert_eq!(state.decide(OpKind::Edit), FaultOutcome::DatabaseLocked);
    }

    #[test]
    fn scripts_parse_from_json_with_defaults() {
        let text = r#"{
            "seed": 7,
            "rules": [{"op": "edit", "outcome": "database-locked", "probability": 0.2}],
            "lag_policy": {"fixed": 5}
        }"#;
        let script: FaultScript = serde_json::from_str(text).unwrap();
        assert_eq!(script.seed, 7);
        assert_eq!(script.rules[0].from, 0);
        assert_eq!(script.rules[0].to, u64::MAX);
        assert_eq!(script.lag_policy, LagPolicy::Fixed(5));
        let empty: FaultScript = serde_json::from_str("{}").unwrap();
        assert_eq!(empty, FaultScript::default());
    }
}
