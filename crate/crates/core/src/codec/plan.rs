use std::collections::{BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use super::{CodecError, Direction};
use crate::circuit::{Condition, Outcomes};
use crate::code::QubitLabel;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PauliOp {
    X,
    Z,
}

impl std::fmt::Display for PauliOp {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            PauliOp::X => "X",
            PauliOp::Z => "Z",
        })
    }
}

/// How the correction of each target depends on the others.
///
/// Node `k` owns outcome `outcomes[k]`. Its effective value is its own
/// outcome XOR the effective values of `deps[k]`, and a set effective value
/// flips every qubit in `corrected[k]`.
#[derive(Clone, Debug, PartialEq)]
pub struct DependencyGraph {
    direction: Direction,
    targets: Vec<QubitLabel>,
    outcomes: Vec<String>,
    deps: Vec<Vec<usize>>,
    corrected: Vec<Vec<QubitLabel>>,
}

impl DependencyGraph {
    pub fn new(
        direction: Direction,
        targets: Vec<QubitLabel>,
        outcomes: Vec<String>,
        deps: Vec<Vec<usize>>,
        corrected: Vec<Vec<QubitLabel>>,
    ) -> Self {
        assert!(
            targets.len() == outcomes.len()
                && targets.len() == deps.len()
                && targets.len() == corrected.len()
        );
        Self {
            direction,
            targets,
            outcomes,
            deps,
            corrected,
        }
    }

    pub fn direction(&self) -> Direction {
        self.direction
    }

    pub fn op(&self) -> PauliOp {
        match self.direction {
            Direction::Encode => PauliOp::X,
            Direction::Decode => PauliOp::Z,
        }
    }

    pub fn targets(&self) -> &[QubitLabel] {
        &self.targets
    }

    pub fn outcomes(&self) -> &[String] {
        &self.outcomes
    }

    pub fn deps(&self, k: usize) -> &[usize] {
        &self.deps[k]
    }

    pub fn len(&self) -> usize {
        self.targets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.targets.is_empty()
    }

    /// Grows the resolved set round by round: round 0 holds the nodes without
    /// dependencies, round `r` the nodes whose dependencies all lie in earlier
    /// rounds. Values combine with `xor` and start from `leaf(k)`.
    pub fn propagate<T, L, X>(
        &self,
        mut leaf: L,
        mut xor: X,
    ) -> Result<(Vec<T>, Vec<Vec<usize>>), CodecError>
    where
        T: Clone,
        L: FnMut(usize) -> T,
        X: FnMut(&mut T, &T),
    {
        let n = self.targets.len();
        let mut value: Vec<Option<T>> = vec![None; n];
        let mut rounds = Vec::new();
        let mut done = 0;
        while done < n {
            let ready: Vec<usize> = (0..n)
                .filter(|&k| value[k].is_none() && self.deps[k].iter().all(|&d| value[d].is_some()))
                .collect();
            if ready.is_empty() {
                let stuck = (0..n)
                    .filter(|&k| value[k].is_none())
                    .map(|k| self.targets[k].clone())
                    .collect();
                return Err(CodecError::Stalled(stuck));
            }
            let mut fresh = Vec::with_capacity(ready.len());
            for &k in &ready {
                let mut v = leaf(k);
                for &d in &self.deps[k] {
                    xor(&mut v, value[d].as_ref().expect("dependency resolved"));
                }
                fresh.push(v);
            }
            for (&k, v) in ready.iter().zip(fresh) {
                value[k] = Some(v);
            }
            done += ready.len();
            rounds.push(ready);
        }
        Ok((
            value
                .into_iter()
                .map(|v| v.expect("all resolved"))
                .collect(),
            rounds,
        ))
    }

    /// Targets grouped by resolution round.
    pub fn rounds(&self) -> Result<Vec<Vec<QubitLabel>>, CodecError> {
        let (_, rounds) = self.propagate(|_| (), |_, _| ())?;
        Ok(rounds
            .into_iter()
            .map(|r| r.into_iter().map(|k| self.targets[k].clone()).collect())
            .collect())
    }

    fn accumulate<T: Clone, X: FnMut(&mut T, &T)>(
        &self,
        values: &[T],
        zero: T,
        mut xor: X,
    ) -> Vec<(QubitLabel, T)> {
        let mut order: Vec<QubitLabel> = Vec::new();
        let mut acc: HashMap<QubitLabel, T> = HashMap::new();
        for (k, v) in values.iter().enumerate() {
            for t in &self.corrected[k] {
                let slot = acc.entry(t.clone()).or_insert_with(|| {
                    order.push(t.clone());
                    zero.clone()
                });
                xor(slot, v);
            }
        }
        order
            .into_iter()
            .map(|t| {
                let v = acc.remove(&t).expect("accumulated");
                (t, v)
            })
            .collect()
    }

    /// Symbolic resolution: every correction as an XOR of outcome names,
    /// with repeated names cancelled.
    pub fn plan(&self) -> Result<CorrectionPlan, CodecError> {
        let (values, rounds) = self.propagate(
            |k| Condition::single(self.outcomes[k].clone()),
            |a, b| a.xor_assign(b),
        )?;
        let op = self.op();
        let entries = self
            .accumulate(&values, Condition::new(), |a, b| a.xor_assign(b))
            .into_iter()
            .filter(|(_, c)| !c.is_empty())
            .map(|(target, cond)| Correction { target, op, cond })
            .collect();
        let rounds = rounds
            .into_iter()
            .map(|r| r.into_iter().map(|k| self.targets[k].clone()).collect())
            .collect();
        Ok(CorrectionPlan {
            op,
            entries,
            rounds,
        })
    }
}

/// The qubits to flip for one concrete outcome assignment.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Flips {
    pub op: PauliOp,
    pub targets: BTreeSet<QubitLabel>,
}

/// Numeric resolution of the dependency graph for concrete outcomes.
pub fn resolve_corrections(
    graph: &DependencyGraph,
    outcomes: &Outcomes,
) -> Result<Flips, CodecError> {
    let bits = graph
        .outcomes
        .iter()
        .map(|n| {
            outcomes
                .get(n)
                .ok_or_else(|| CodecError::MissingOutcome(n.clone()))
        })
        .collect::<Result<Vec<bool>, _>>()?;
    let (values, _) = graph.propagate(|k| bits[k], |a, b| *a ^= *b)?;
    let targets = graph
        .accumulate(&values, false, |a, b| *a ^= *b)
        .into_iter()
        .filter(|(_, v)| *v)
        .map(|(t, _)| t)
        .collect();
    Ok(Flips {
        op: graph.op(),
        targets,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Correction {
    pub target: QubitLabel,
    pub op: PauliOp,
    pub cond: Condition,
}

/// Conditional flips of one deformation step, plus the resolution rounds
/// that produced them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CorrectionPlan {
    pub op: PauliOp,
    pub entries: Vec<Correction>,
    pub rounds: Vec<Vec<QubitLabel>>,
}

impl CorrectionPlan {
    pub fn empty(op: PauliOp) -> Self {
        Self {
            op,
            entries: Vec::new(),
            rounds: Vec::new(),
        }
    }

    pub fn condition(&self, target: &QubitLabel) -> Option<&Condition> {
        self.entries
            .iter()
            .find(|e| &e.target == target)
            .map(|e| &e.cond)
    }

    /// Evaluates every condition against `outcomes`.
    pub fn flips(&self, outcomes: &Outcomes) -> Result<Flips, CodecError> {
        let mut targets = BTreeSet::new();
        for e in &self.entries {
            if e.cond
                .evaluate(|n| outcomes.get(n))
                .map_err(|n| CodecError::MissingOutcome(n.to_string()))?
            {
                targets.insert(e.target.clone());
            }
        }
        Ok(Flips {
            op: self.op,
            targets,
        })
    }

    pub fn to_json(&self) -> Vec<CorrectionJson> {
        self.entries
            .iter()
            .map(|e| CorrectionJson {
                target: e.target.to_string(),
                op: e.op,
                cond: e.cond.names().map(str::to_string).collect(),
            })
            .collect()
    }
}

/// Wire form of a correction: `{"target": "(0,1)", "op": "X", "cond": [...]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorrectionJson {
    pub target: String,
    pub op: PauliOp,
    pub cond: Vec<String>,
}

impl CorrectionJson {
    pub fn to_correction(&self) -> Result<Correction, CodecError> {
        Ok(Correction {
            target: self.target.parse()?,
            op: self.op,
            cond: self.cond.iter().cloned().collect(),
        })
    }
}
