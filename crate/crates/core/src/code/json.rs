use serde::{Deserialize, Serialize};

use super::{CodeError, Constraint, ParityCode, QubitLabel};

/// Serialized form of a [`ParityCode`]. Constraint members refer to qubits
/// by their position in `qubits`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CodeJson {
    pub n: usize,
    pub qubits: Vec<Vec<usize>>,
    pub constraints: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub placement: Option<Vec<[i64; 2]>>,
}

impl CodeJson {
    pub fn from_code(code: &ParityCode) -> Self {
        Self {
            n: code.n(),
            qubits: code.qubits().iter().map(|q| q.indices().to_vec()).collect(),
            constraints: code
                .constraints()
                .iter()
                .map(|c| {
                    c.members()
                        .iter()
                        .map(|m| code.position(m).expect("member in code"))
                        .collect()
                })
                .collect(),
            placement: code.placement().map(<[_]>::to_vec),
        }
    }

    pub fn to_code(&self) -> Result<ParityCode, CodeError> {
        let qubits = self
            .qubits
            .iter()
            .map(|ix| QubitLabel::new(ix.iter().copied()))
            .collect::<Result<Vec<_>, _>>()?;
        let constraints = self
            .constraints
            .iter()
            .map(|refs| {
                let members = refs
                    .iter()
                    .map(|&r| {
                        qubits.get(r).cloned().ok_or_else(|| {
                            CodeError::Json(format!(
                                "constraint refers to qubit #{r}, code has {}",
                                qubits.len()
                            ))
                        })
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                Constraint::new(members)
            })
            .collect::<Result<Vec<_>, _>>()?;
        let code = ParityCode::new(self.n, qubits, constraints)?;
        match &self.placement {
            Some(p) => code.with_placement(p.clone()),
            None => Ok(code),
        }
    }

    pub fn parse(text: &str) -> Result<ParityCode, CodeError> {
        let json: CodeJson =
            serde_json::from_str(text).map_err(|e| CodeError::Json(e.to_string()))?;
        json.to_code()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::code::{higher_order_fixture, lhz_layout};

    #[test]
    fn lhz_roundtrip() {
        let code = lhz_layout(4, true).unwrap();
        let text = serde_json::to_string(&code.to_json()).unwrap();
        let back = CodeJson::parse(&text).unwrap();
        assert_eq!(back, code);
    }

    #[test]
    fn fixture_roundtrip() {
        let code = higher_order_fixture();
        let back = ParityCode::from_json(&code.to_json()).unwrap();
        assert_eq!(back, code);
    }

    #[test]
    fn dangling_reference() {
        let err =
            CodeJson::parse(r#"{"n":2,"qubits":[[0],[1]],"constraints":[[0,5]]}"#).unwrap_err();
        assert!(matches!(err, CodeError::Json(_)));
    }

    #[test]
    fn placement_optional() {
        let code =
            CodeJson::parse(r#"{"n":2,"qubits":[[0],[1],[0,1]],"constraints":[[0,1,2]]}"#).unwrap();
        assert!(code.placement().is_none());
        assert!(code.validate().is_valid());
    }
}
