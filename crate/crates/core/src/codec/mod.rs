//! Encoding and decoding between codes.
//!
//! A [`Deformation`] adds parity qubits to a code (encode) or removes qubits
//! from it (decode). Every added or removed qubit is paired with one closed
//! constraint:
//!
//! * encode: the constraint is measured through an ancilla; a -1 outcome is
//!   fixed by an X on the new qubit, which also toggles every other
//!   constraint containing it;
//! * decode: the qubit is measured in X; a -1 outcome is fixed by Z on the
//!   other members of its constraint, and a Z landing on another removed
//!   qubit is absorbed into that qubit's outcome.
//!
//! Both rules give a dependency graph between targets that
//! [`DependencyGraph::propagate`] resolves round by round.

mod closed_form;
mod compile;
mod plan;

use std::collections::{HashMap, HashSet};

use thiserror::Error;

use crate::circuit::CircuitError;
use crate::code::{lhz_layout, CodeError, Constraint, ParityCode, QubitLabel};
use crate::gf2::Echelon;

pub use closed_form::{
    closed_form_decode, closed_form_encode, lhz_decode_outcomes, lhz_encode_outcomes,
};
pub use compile::{compile_decode_measurement, compile_encode_cnot, compile_encode_measurement};
pub use plan::{
    resolve_corrections, Correction, CorrectionJson, CorrectionPlan, DependencyGraph, Flips,
    PauliOp,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CodecError {
    #[error("expected an {expected} deformation")]
    WrongDirection { expected: Direction },
    #[error("qubit {0} of the original code is missing from the target code")]
    QubitDropped(QubitLabel),
    #[error("qubit {0} is not part of the code")]
    UnknownQubit(QubitLabel),
    #[error("no constraint chosen for qubit {0}")]
    MissingChoice(QubitLabel),
    #[error("constraint {constraint} chosen for {target} does not contain it")]
    ChoiceWithoutTarget {
        target: QubitLabel,
        constraint: String,
    },
    #[error("constraint {0} is not closed (labels do not cancel)")]
    NotClosed(String),
    #[error("constraint {0} is used for more than one qubit")]
    ConstraintReused(String),
    #[error("constraint {constraint} reaches qubit {qubit} outside the code")]
    ForeignMember {
        constraint: String,
        qubit: QubitLabel,
    },
    #[error("corrections cannot be resolved: cyclic dependency among {0:?}")]
    Stalled(Vec<QubitLabel>),
    #[error("remaining qubits are not a readout basis: label rank {rank} < {needed}")]
    ReadoutDeficit { rank: usize, needed: usize },
    #[error("target code is invalid: {0}")]
    InvalidTarget(String),
    #[error("outcome {0:?} is missing")]
    MissingOutcome(String),
    #[error("outcome set has wrong shape: expected {expected} pair outcomes, got {got}")]
    OutcomeShape { expected: usize, got: usize },
    #[error(transparent)]
    Code(#[from] CodeError),
    #[error(transparent)]
    Circuit(#[from] CircuitError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Direction {
    Encode,
    Decode,
}

impl std::fmt::Display for Direction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Direction::Encode => "encode",
            Direction::Decode => "decode",
        })
    }
}

/// One code deformation step: a pure encode or a pure decode.
#[derive(Clone, Debug, PartialEq)]
pub struct Deformation {
    before: ParityCode,
    after: ParityCode,
    direction: Direction,
    targets: Vec<QubitLabel>,
    choices: Vec<Constraint>,
}

impl Deformation {
    /// Encode from `before` into `after`, fixing each new qubit with a
    /// generator of `after` that contains no other unresolved new qubit.
    /// Qubits no generator can peel are fixed against a readout basis of
    /// the qubits already present.
    pub fn encode(before: &ParityCode, after: &ParityCode) -> Result<Self, CodecError> {
        let added = added_qubits(before, after)?;
        let mut unresolved: HashSet<&QubitLabel> = added.iter().collect();
        let mut choice: HashMap<QubitLabel, Constraint> = HashMap::new();
        let mut used = vec![false; after.constraints().len()];
        while !unresolved.is_empty() {
            let mut progress = false;
            for (k, c) in after.constraints().iter().enumerate() {
                if used[k] {
                    continue;
                }
                let open: Vec<&QubitLabel> = c
                    .members()
                    .iter()
                    .filter(|m| unresolved.contains(m))
                    .collect();
                if let [q] = open[..] {
                    used[k] = true;
                    unresolved.remove(q);
                    choice.insert(q.clone(), c.clone());
                    progress = true;
                }
            }
            if !progress {
                let q = added
                    .iter()
                    .find(|q| unresolved.contains(q))
                    .expect("unresolved is non-empty");
                let known = after.qubits().iter().filter(|p| !unresolved.contains(p));
                let c = express(after.n(), q, known)
                    .ok_or_else(|| CodecError::Stalled(vec![q.clone()]))?;
                unresolved.remove(q);
                choice.insert(q.clone(), c);
            }
        }
        let choices = added
            .iter()
            .map(|q| choice.remove(q).expect("every added qubit was resolved"))
            .collect();
        Self::build(
            before.clone(),
            after.clone(),
            Direction::Encode,
            added,
            choices,
        )
    }

    /// Encode with explicit constraint choices, one per added qubit.
    pub fn encode_with(
        before: &ParityCode,
        after: &ParityCode,
        choices: Vec<(QubitLabel, Constraint)>,
    ) -> Result<Self, CodecError> {
        let added = added_qubits(before, after)?;
        let choices = order_choices(&added, choices)?;
        Self::build(
            before.clone(),
            after.clone(),
            Direction::Encode,
            added,
            choices,
        )
    }

    /// Decode `removed` out of `before`. Each removed qubit is paired with
    /// itself plus its data qubits when those all remain, otherwise with a
    /// combination of remaining qubits that reproduces its label.
    pub fn decode(before: &ParityCode, removed: &[QubitLabel]) -> Result<Self, CodecError> {
        let gone: HashSet<&QubitLabel> = removed.iter().collect();
        let remaining: Vec<&QubitLabel> = before
            .qubits()
            .iter()
            .filter(|q| !gone.contains(q))
            .collect();
        check_readout(before.n(), &remaining)?;
        let mut choices = Vec::with_capacity(removed.len());
        for r in removed {
            if !before.contains(r) {
                return Err(CodecError::UnknownQubit(r.clone()));
            }
            let data: Vec<QubitLabel> = r.indices().iter().map(|&i| QubitLabel::data(i)).collect();
            let c = if r.is_parity() && data.iter().all(|d| before.contains(d) && !gone.contains(d))
            {
                Constraint::new(std::iter::once(r.clone()).chain(data))?
            } else {
                express(before.n(), r, remaining.iter().copied()).expect("remaining qubits span")
            };
            choices.push(c);
        }
        let after = before.without_qubits(removed)?;
        Self::build(
            before.clone(),
            after,
            Direction::Decode,
            removed.to_vec(),
            choices,
        )
    }

    /// Decode with explicit constraint choices, one per removed qubit.
    pub fn decode_with(
        before: &ParityCode,
        removed: &[QubitLabel],
        choices: Vec<(QubitLabel, Constraint)>,
    ) -> Result<Self, CodecError> {
        let gone: HashSet<&QubitLabel> = removed.iter().collect();
        let remaining: Vec<&QubitLabel> = before
            .qubits()
            .iter()
            .filter(|q| !gone.contains(q))
            .collect();
        check_readout(before.n(), &remaining)?;
        if let Some(r) = removed.iter().find(|r| !before.contains(r)) {
            return Err(CodecError::UnknownQubit(r.clone()));
        }
        let choices = order_choices(removed, choices)?;
        let after = before.without_qubits(removed)?;
        Self::build(
            before.clone(),
            after,
            Direction::Decode,
            removed.to_vec(),
            choices,
        )
    }

    /// Encodes every parity qubit of `lhz_layout(n)` from the bare data qubits.
    pub fn full_lhz_encode(n: usize) -> Result<Self, CodecError> {
        let after = lhz_layout(n, true)?;
        Self::encode(&ParityCode::data_only(n), &after)
    }

    /// Decodes every parity qubit of `lhz_layout(n)` back onto data qubits.
    pub fn full_lhz_decode(n: usize) -> Result<Self, CodecError> {
        let before = lhz_layout(n, true)?;
        let removed: Vec<QubitLabel> = before.parity_qubits().cloned().collect();
        Self::decode(&before, &removed)
    }

    fn build(
        before: ParityCode,
        after: ParityCode,
        direction: Direction,
        targets: Vec<QubitLabel>,
        choices: Vec<Constraint>,
    ) -> Result<Self, CodecError> {
        let scope = match direction {
            Direction::Encode => &after,
            Direction::Decode => &before,
        };
        let mut seen = HashSet::new();
        for (t, c) in targets.iter().zip(&choices) {
            if !c.contains(t) {
                return Err(CodecError::ChoiceWithoutTarget {
                    target: t.clone(),
                    constraint: c.to_string(),
                });
            }
            if !c.is_closed() {
                return Err(CodecError::NotClosed(c.to_string()));
            }
            if let Some(m) = c.members().iter().find(|m| !scope.contains(m)) {
                return Err(CodecError::ForeignMember {
                    constraint: c.to_string(),
                    qubit: m.clone(),
                });
            }
            if !seen.insert(c.members().to_vec()) {
                return Err(CodecError::ConstraintReused(c.to_string()));
            }
        }
        if direction == Direction::Encode {
            let report = after.validate();
            if !report.closure_failures.is_empty() || !report.independent {
                return Err(CodecError::InvalidTarget(format!(
                    "{} unclosed constraint(s), generators independent: {}",
                    report.closure_failures.len(),
                    report.independent
                )));
            }
        }
        let def = Self {
            before,
            after,
            direction,
            targets,
            choices,
        };
        def.graph("").propagate(|_| (), |_, _| ())?;
        Ok(def)
    }

    pub fn before(&self) -> &ParityCode {
        &self.before
    }

    pub fn after(&self) -> &ParityCode {
        &self.after
    }

    pub fn direction(&self) -> Direction {
        self.direction
    }

    /// Added (encode) or removed (decode) qubits.
    pub fn targets(&self) -> &[QubitLabel] {
        &self.targets
    }

    /// `choices()[k]` is the constraint used for `targets()[k]`.
    pub fn choices(&self) -> &[Constraint] {
        &self.choices
    }

    pub fn is_empty(&self) -> bool {
        self.targets.is_empty()
    }

    /// Outcome name of the measurement tied to `target` within a step
    /// prefixed by `tag`.
    pub fn outcome_name(&self, tag: &str, target: &QubitLabel) -> String {
        match self.direction {
            Direction::Encode => format!("{tag}mz{target}"),
            Direction::Decode => format!("{tag}mx{target}"),
        }
    }

    /// Dependency graph with outcomes named under `tag`.
    pub fn graph(&self, tag: &str) -> DependencyGraph {
        let pos: HashMap<&QubitLabel, usize> = self
            .targets
            .iter()
            .enumerate()
            .map(|(k, t)| (t, k))
            .collect();
        let deps: Vec<Vec<usize>> = match self.direction {
            Direction::Encode => self
                .targets
                .iter()
                .zip(&self.choices)
                .map(|(t, c)| c.others(t).filter_map(|m| pos.get(m).copied()).collect())
                .collect(),
            Direction::Decode => {
                let mut deps = vec![Vec::new(); self.targets.len()];
                for (q, (t, c)) in self.targets.iter().zip(&self.choices).enumerate() {
                    for m in c.others(t) {
                        if let Some(&r) = pos.get(m) {
                            deps[r].push(q);
                        }
                    }
                }
                deps
            }
        };
        let outcomes = self
            .targets
            .iter()
            .map(|t| self.outcome_name(tag, t))
            .collect();
        let corrected = match self.direction {
            Direction::Encode => self.targets.iter().map(|t| vec![t.clone()]).collect(),
            Direction::Decode => self
                .targets
                .iter()
                .zip(&self.choices)
                .map(|(t, c)| {
                    c.others(t)
                        .filter(|m| !pos.contains_key(m))
                        .cloned()
                        .collect()
                })
                .collect(),
        };
        DependencyGraph::new(
            self.direction,
            self.targets.clone(),
            outcomes,
            deps,
            corrected,
        )
    }
}

fn added_qubits(before: &ParityCode, after: &ParityCode) -> Result<Vec<QubitLabel>, CodecError> {
    if let Some(q) = before.qubits().iter().find(|q| !after.contains(q)) {
        return Err(CodecError::QubitDropped(q.clone()));
    }
    Ok(after
        .qubits()
        .iter()
        .filter(|q| !before.contains(q))
        .cloned()
        .collect())
}

fn order_choices(
    targets: &[QubitLabel],
    choices: Vec<(QubitLabel, Constraint)>,
) -> Result<Vec<Constraint>, CodecError> {
    let mut map: HashMap<QubitLabel, Constraint> = HashMap::new();
    for (q, c) in choices {
        if !targets.contains(&q) {
            return Err(CodecError::UnknownQubit(q));
        }
        map.insert(q, c);
    }
    targets
        .iter()
        .map(|t| {
            map.remove(t)
                .ok_or_else(|| CodecError::MissingChoice(t.clone()))
        })
        .collect()
}

fn check_readout(n: usize, remaining: &[&QubitLabel]) -> Result<(), CodecError> {
    let rank = Echelon::new(remaining.iter().map(|q| q.to_row(n))).rank();
    if rank < n {
        return Err(CodecError::ReadoutDeficit { rank, needed: n });
    }
    Ok(())
}

/// `{q} ∪ S` where the labels of `S ⊆ pool` XOR to the label of `q`.
fn express<'a, I: IntoIterator<Item = &'a QubitLabel>>(
    n: usize,
    q: &QubitLabel,
    pool: I,
) -> Option<Constraint> {
    let pool: Vec<&QubitLabel> = pool.into_iter().filter(|p| *p != q).collect();
    let mut order = pool.clone();
    order.sort_by_key(|p| (p.weight(), (*p).clone()));
    let ech = Echelon::new(order.iter().map(|p| p.to_row(n)));
    let combo = ech.express(&q.to_row(n))?;
    Constraint::new(std::iter::once(q.clone()).chain(combo.into_iter().map(|k| order[k].clone())))
        .ok()
}
