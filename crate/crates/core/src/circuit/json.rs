use serde::{Deserialize, Serialize};

use super::{CircuitError, Condition, Gate, Wire};

/// One entry of the circuit wire format:
/// `{"g": kind, "q": [wires], "angle"?, "out"?, "cond"?}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GateJson {
    pub g: String,
    pub q: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub angle: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cond: Option<Vec<String>>,
}

impl GateJson {
    pub fn from_gate(gate: &Gate) -> Self {
        Self {
            g: gate.name().to_string(),
            q: gate.wires().iter().map(|w| w.to_string()).collect(),
            angle: gate.angle(),
            out: gate.outcome().map(str::to_string),
            cond: gate
                .condition()
                .map(|c| c.names().map(str::to_string).collect()),
        }
    }

    pub fn to_gate(&self) -> Result<Gate, CircuitError> {
        let wires = self
            .q
            .iter()
            .map(|s| s.parse::<Wire>())
            .collect::<Result<Vec<_>, _>>()?;
        let arity = match self.g.as_str() {
            "CNOT" | "CZ" | "CP" => 2,
            "H" | "X" | "Z" | "S" | "RZ" | "RX" | "MEASURE_Z" | "MEASURE_X" | "RESET_0"
            | "RESET_PLUS" | "COND_X" | "COND_Z" => 1,
            other => return Err(CircuitError::UnknownGate(other.to_string())),
        };
        if wires.len() != arity {
            return Err(CircuitError::Arity {
                gate: self.g.clone(),
                expected: arity,
                got: wires.len(),
            });
        }
        let missing = |field| CircuitError::MissingField {
            gate: self.g.clone(),
            field,
        };
        let angle = || self.angle.ok_or_else(|| missing("angle"));
        let out = || self.out.clone().ok_or_else(|| missing("out"));
        let cond = || {
            self.cond
                .as_ref()
                .map(|c| c.iter().cloned().collect::<Condition>())
                .ok_or_else(|| missing("cond"))
        };
        let mut it = wires.into_iter();
        let a = it.next().expect("arity checked");
        let b = it.next();
        Ok(match self.g.as_str() {
            "H" => Gate::H(a),
            "X" => Gate::X(a),
            "Z" => Gate::Z(a),
            "S" => Gate::S(a),
            "RZ" => Gate::Rz(a, angle()?),
            "RX" => Gate::Rx(a, angle()?),
            "CNOT" => Gate::Cnot(a, b.unwrap()),
            "CZ" => Gate::Cz(a, b.unwrap()),
            "CP" => Gate::Cp(a, b.unwrap(), angle()?),
            "MEASURE_Z" => Gate::MeasureZ(a, out()?),
            "MEASURE_X" => Gate::MeasureX(a, out()?),
            "RESET_0" => Gate::Reset0(a),
            "RESET_PLUS" => Gate::ResetPlus(a),
            "COND_X" => Gate::CondX(a, cond()?),
            "COND_Z" => Gate::CondZ(a, cond()?),
            _ => unreachable!("kind checked above"),
        })
    }
}
