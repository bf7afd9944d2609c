//! Gate-level circuits with mid-circuit measurement and classically
//! conditioned Pauli corrections.
//!
//! Wires are either code qubits (named by their label) or ancillas. Every
//! measurement writes a named outcome bit; `COND_X`/`COND_Z` gates fire when
//! the XOR of a set of earlier outcomes is 1.

mod coloring;
mod json;
mod schedule;

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::code::QubitLabel;

pub use coloring::bipartite_edge_coloring;
pub use json::GateJson;
pub use schedule::{schedule_depth, DepthReport, Layer, LayerClass, Schedule};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CircuitError {
    #[error("wire {0} is not declared")]
    UndeclaredWire(Wire),
    #[error("{gate} needs two distinct operands, got {wire} twice")]
    RepeatedOperand { gate: &'static str, wire: Wire },
    #[error("outcome name {0:?} is already used by an earlier measurement")]
    DuplicateOutcome(String),
    #[error("condition refers to {0:?}, which no earlier measurement produced")]
    DanglingCondition(String),
    #[error("angle {0} is not finite")]
    BadAngle(f64),
    #[error("cannot parse wire {0:?}")]
    BadWire(String),
    #[error("unknown gate kind {0:?}")]
    UnknownGate(String),
    #[error("gate {gate} expects {expected} operand(s), got {got}")]
    Arity {
        gate: String,
        expected: usize,
        got: usize,
    },
    #[error("gate {gate} is missing field {field:?}")]
    MissingField { gate: String, field: &'static str },
    #[error("invalid circuit JSON: {0}")]
    Json(String),
}

/// A physical wire: a code qubit, or the `k`-th ancilla slot.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Wire {
    Code(QubitLabel),
    Ancilla(usize),
}

impl Wire {
    pub fn code(label: &QubitLabel) -> Self {
        Wire::Code(label.clone())
    }

    pub fn data(i: usize) -> Self {
        Wire::Code(QubitLabel::data(i))
    }

    pub fn label(&self) -> Option<&QubitLabel> {
        match self {
            Wire::Code(l) => Some(l),
            Wire::Ancilla(_) => None,
        }
    }
}

impl fmt::Display for Wire {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Wire::Code(l) => write!(f, "{l}"),
            Wire::Ancilla(k) => write!(f, "a{k}"),
        }
    }
}

impl fmt::Debug for Wire {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Wire {
    type Err = CircuitError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        if let Some(k) = t.strip_prefix('a') {
            return k
                .parse()
                .map(Wire::Ancilla)
                .map_err(|_| CircuitError::BadWire(s.to_string()));
        }
        t.parse()
            .map(Wire::Code)
            .map_err(|_| CircuitError::BadWire(s.to_string()))
    }
}

impl From<QubitLabel> for Wire {
    fn from(l: QubitLabel) -> Self {
        Wire::Code(l)
    }
}

/// XOR of named outcome bits. Adding a name twice cancels it.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Condition(BTreeSet<String>);

impl Condition {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn single(name: impl Into<String>) -> Self {
        let mut c = Self::new();
        c.toggle(name);
        c
    }

    pub fn toggle(&mut self, name: impl Into<String>) {
        let name = name.into();
        if !self.0.remove(&name) {
            self.0.insert(name);
        }
    }

    pub fn xor_assign(&mut self, other: &Condition) {
        for n in &other.0 {
            self.toggle(n.clone());
        }
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.0.iter().map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Value of the parity given a lookup for outcome bits. Unknown names
    /// are reported as `Err(name)`.
    pub fn evaluate<F>(&self, lookup: F) -> Result<bool, &str>
    where
        F: Fn(&str) -> Option<bool>,
    {
        let mut acc = false;
        for n in &self.0 {
            acc ^= lookup(n).ok_or(n.as_str())?;
        }
        Ok(acc)
    }
}

impl<S: Into<String>> FromIterator<S> for Condition {
    fn from_iter<I: IntoIterator<Item = S>>(iter: I) -> Self {
        let mut c = Condition::new();
        for n in iter {
            c.toggle(n);
        }
        c
    }
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("0");
        }
        let names: Vec<&str> = self.names().collect();
        f.write_str(&names.join(" ^ "))
    }
}

/// Measurement results by name, in the order they were recorded. Bit `true`
/// is the -1 eigenvalue.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Outcomes {
    order: Vec<String>,
    bits: HashMap<String, bool>,
}

impl Outcomes {
    pub fn new() -> Self {
        Self::default()
    }

    /// Records (or overwrites) an outcome.
    pub fn insert(&mut self, name: impl Into<String>, bit: bool) {
        let name = name.into();
        if self.bits.insert(name.clone(), bit).is_none() {
            self.order.push(name);
        }
    }

    pub fn get(&self, name: &str) -> Option<bool> {
        self.bits.get(name).copied()
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, bool)> {
        self.order.iter().map(|n| (n.as_str(), self.bits[n]))
    }

    /// Bits in recording order.
    pub fn bits(&self) -> Vec<bool> {
        self.iter().map(|(_, b)| b).collect()
    }

    /// `{"name": +1 | -1, ...}`
    pub fn to_json(&self) -> serde_json::Value {
        let map: serde_json::Map<String, serde_json::Value> = self
            .iter()
            .map(|(n, b)| (n.to_string(), serde_json::json!(if b { -1 } else { 1 })))
            .collect();
        serde_json::Value::Object(map)
    }

    pub fn from_json(value: &serde_json::Value) -> Result<Outcomes, CircuitError> {
        let obj = value
            .as_object()
            .ok_or_else(|| CircuitError::Json("outcomes must be an object".into()))?;
        let mut out = Outcomes::new();
        for (n, v) in obj {
            match v.as_i64() {
                Some(1) => out.insert(n.clone(), false),
                Some(-1) => out.insert(n.clone(), true),
                _ => {
                    return Err(CircuitError::Json(format!(
                        "outcome {n:?} must be +1 or -1"
                    )))
                }
            }
        }
        Ok(out)
    }
}

impl<S: Into<String>> FromIterator<(S, bool)> for Outcomes {
    fn from_iter<I: IntoIterator<Item = (S, bool)>>(iter: I) -> Self {
        let mut o = Outcomes::new();
        for (n, b) in iter {
            o.insert(n, b);
        }
        o
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Gate {
    H(Wire),
    X(Wire),
    Z(Wire),
    S(Wire),
    /// `exp(-i theta Z / 2)`
    Rz(Wire, f64),
    /// `exp(-i theta X / 2)`
    Rx(Wire, f64),
    /// control, target
    Cnot(Wire, Wire),
    Cz(Wire, Wire),
    /// `diag(1, 1, 1, e^{i phi})`
    Cp(Wire, Wire, f64),
    MeasureZ(Wire, String),
    MeasureX(Wire, String),
    Reset0(Wire),
    ResetPlus(Wire),
    CondX(Wire, Condition),
    CondZ(Wire, Condition),
}

impl Gate {
    pub fn name(&self) -> &'static str {
        match self {
            Gate::H(_) => "H",
            Gate::X(_) => "X",
            Gate::Z(_) => "Z",
            Gate::S(_) => "S",
            Gate::Rz(..) => "RZ",
            Gate::Rx(..) => "RX",
            Gate::Cnot(..) => "CNOT",
            Gate::Cz(..) => "CZ",
            Gate::Cp(..) => "CP",
            Gate::MeasureZ(..) => "MEASURE_Z",
            Gate::MeasureX(..) => "MEASURE_X",
            Gate::Reset0(_) => "RESET_0",
            Gate::ResetPlus(_) => "RESET_PLUS",
            Gate::CondX(..) => "COND_X",
            Gate::CondZ(..) => "COND_Z",
        }
    }

    pub fn wires(&self) -> Vec<&Wire> {
        match self {
            Gate::Cnot(a, b) | Gate::Cz(a, b) | Gate::Cp(a, b, _) => vec![a, b],
            Gate::H(w)
            | Gate::X(w)
            | Gate::Z(w)
            | Gate::S(w)
            | Gate::Rz(w, _)
            | Gate::Rx(w, _)
            | Gate::MeasureZ(w, _)
            | Gate::MeasureX(w, _)
            | Gate::Reset0(w)
            | Gate::ResetPlus(w)
            | Gate::CondX(w, _)
            | Gate::CondZ(w, _) => vec![w],
        }
    }

    pub fn angle(&self) -> Option<f64> {
        match self {
            Gate::Rz(_, a) | Gate::Rx(_, a) | Gate::Cp(_, _, a) => Some(*a),
            _ => None,
        }
    }

    pub fn outcome(&self) -> Option<&str> {
        match self {
            Gate::MeasureZ(_, o) | Gate::MeasureX(_, o) => Some(o),
            _ => None,
        }
    }

    pub fn condition(&self) -> Option<&Condition> {
        match self {
            Gate::CondX(_, c) | Gate::CondZ(_, c) => Some(c),
            _ => None,
        }
    }

    pub fn is_measurement(&self) -> bool {
        matches!(self, Gate::MeasureZ(..) | Gate::MeasureX(..))
    }

    pub fn is_reset(&self) -> bool {
        matches!(self, Gate::Reset0(_) | Gate::ResetPlus(_))
    }

    /// Cost in CNOT-equivalents for two-qubit gates.
    pub fn two_qubit_weight(&self) -> Option<usize> {
        match self {
            Gate::Cnot(..) | Gate::Cz(..) => Some(1),
            Gate::Cp(..) => Some(2),
            _ => None,
        }
    }

    /// Same gate with every wire passed through `f`.
    pub fn map_wires<F: FnMut(&Wire) -> Wire>(&self, mut f: F) -> Gate {
        match self {
            Gate::H(w) => Gate::H(f(w)),
            Gate::X(w) => Gate::X(f(w)),
            Gate::Z(w) => Gate::Z(f(w)),
            Gate::S(w) => Gate::S(f(w)),
            Gate::Rz(w, a) => Gate::Rz(f(w), *a),
            Gate::Rx(w, a) => Gate::Rx(f(w), *a),
            Gate::Cnot(a, b) => Gate::Cnot(f(a), f(b)),
            Gate::Cz(a, b) => Gate::Cz(f(a), f(b)),
            Gate::Cp(a, b, p) => Gate::Cp(f(a), f(b), *p),
            Gate::MeasureZ(w, o) => Gate::MeasureZ(f(w), o.clone()),
            Gate::MeasureX(w, o) => Gate::MeasureX(f(w), o.clone()),
            Gate::Reset0(w) => Gate::Reset0(f(w)),
            Gate::ResetPlus(w) => Gate::ResetPlus(f(w)),
            Gate::CondX(w, c) => Gate::CondX(f(w), c.clone()),
            Gate::CondZ(w, c) => Gate::CondZ(f(w), c.clone()),
        }
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())?;
        if let Some(a) = self.angle() {
            write!(f, "({a})")?;
        }
        for w in self.wires() {
            write!(f, " {w}")?;
        }
        if let Some(o) = self.outcome() {
            write!(f, " -> {o}")?;
        }
        if let Some(c) = self.condition() {
            write!(f, " if {c}")?;
        }
        Ok(())
    }
}

/// An ordered gate list over a declared wire set.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Circuit {
    wires: Vec<Wire>,
    index: HashMap<Wire, usize>,
    gates: Vec<Gate>,
    outcomes: Vec<String>,
    outcome_set: HashSet<String>,
}

impl Circuit {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_wires<I: IntoIterator<Item = Wire>>(wires: I) -> Self {
        let mut c = Self::new();
        for w in wires {
            c.declare(w);
        }
        c
    }

    /// Declares a wire (no-op if already present) and returns its position.
    pub fn declare(&mut self, wire: Wire) -> usize {
        if let Some(&k) = self.index.get(&wire) {
            return k;
        }
        self.index.insert(wire.clone(), self.wires.len());
        self.wires.push(wire);
        self.wires.len() - 1
    }

    pub fn wires(&self) -> &[Wire] {
        &self.wires
    }

    pub fn is_declared(&self, wire: &Wire) -> bool {
        self.index.contains_key(wire)
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    /// Outcome names in measurement order.
    pub fn outcomes(&self) -> &[String] {
        &self.outcomes
    }

    pub fn num_measurements(&self) -> usize {
        self.outcomes.len()
    }

    pub fn has_outcome(&self, name: &str) -> bool {
        self.outcome_set.contains(name)
    }

    fn check(&self, gate: &Gate) -> Result<(), CircuitError> {
        for w in gate.wires() {
            if !self.index.contains_key(w) {
                return Err(CircuitError::UndeclaredWire(w.clone()));
            }
        }
        if let Gate::Cnot(a, b) | Gate::Cz(a, b) | Gate::Cp(a, b, _) = gate {
            if a == b {
                return Err(CircuitError::RepeatedOperand {
                    gate: gate.name(),
                    wire: a.clone(),
                });
            }
        }
        if let Some(a) = gate.angle() {
            if !a.is_finite() {
                return Err(CircuitError::BadAngle(a));
            }
        }
        if let Some(o) = gate.outcome() {
            if self.outcome_set.contains(o) {
                return Err(CircuitError::DuplicateOutcome(o.to_string()));
            }
        }
        if let Some(c) = gate.condition() {
            if let Some(n) = c.names().find(|n| !self.outcome_set.contains(*n)) {
                return Err(CircuitError::DanglingCondition(n.to_string()));
            }
        }
        Ok(())
    }

    /// Appends a gate after checking operands and condition names.
    pub fn push(&mut self, gate: Gate) -> Result<(), CircuitError> {
        self.check(&gate)?;
        if let Some(o) = gate.outcome() {
            self.outcomes.push(o.to_string());
            self.outcome_set.insert(o.to_string());
        }
        self.gates.push(gate);
        Ok(())
    }

    /// Builder form of [`Circuit::push`].
    pub fn append(mut self, gate: Gate) -> Result<Self, CircuitError> {
        self.push(gate)?;
        Ok(self)
    }

    /// Appends all gates of `other`, declaring its wires as needed.
    pub fn extend(&mut self, other: &Circuit) -> Result<(), CircuitError> {
        for w in &other.wires {
            self.declare(w.clone());
        }
        for g in &other.gates {
            self.push(g.clone())?;
        }
        Ok(())
    }

    /// Copy with every wire renamed through `f`. Fails if two wires collide.
    pub fn relabel<F: FnMut(&Wire) -> Wire>(&self, mut f: F) -> Result<Circuit, CircuitError> {
        let map: HashMap<&Wire, Wire> = self.wires.iter().map(|w| (w, f(w))).collect();
        let mut out = Circuit::with_wires(self.wires.iter().map(|w| map[w].clone()));
        if out.wires.len() != self.wires.len() {
            let mut seen = HashSet::new();
            let dup = self
                .wires
                .iter()
                .map(|w| &map[w])
                .find(|w| !seen.insert(*w))
                .unwrap();
            return Err(CircuitError::RepeatedOperand {
                gate: "relabel",
                wire: dup.clone(),
            });
        }
        for g in &self.gates {
            out.push(g.map_wires(|w| map[w].clone()))?;
        }
        Ok(out)
    }

    pub fn to_json(&self) -> Vec<GateJson> {
        self.gates.iter().map(GateJson::from_gate).collect()
    }

    /// Rebuilds a circuit from its gate list, declaring wires in order of
    /// first use.
    pub fn from_json(gates: &[GateJson]) -> Result<Circuit, CircuitError> {
        let mut c = Circuit::new();
        for g in gates {
            let gate = g.to_gate()?;
            for w in gate.wires() {
                c.declare(w.clone());
            }
            c.push(gate)?;
        }
        Ok(c)
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(&self.to_json()).expect("gate list serializes")
    }

    pub fn parse_json(text: &str) -> Result<Circuit, CircuitError> {
        let gates: Vec<GateJson> =
            serde_json::from_str(text).map_err(|e| CircuitError::Json(e.to_string()))?;
        Self::from_json(&gates)
    }
}

impl fmt::Display for Circuit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for g in &self.gates {
            writeln!(f, "{g}")?;
        }
        Ok(())
    }
}
