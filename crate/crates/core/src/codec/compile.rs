use super::{CodecError, CorrectionPlan, Deformation, Direction};
use crate::circuit::{Circuit, Gate, Wire};

fn expect(def: &Deformation, expected: Direction) -> Result<(), CodecError> {
    if def.direction() != expected {
        return Err(CodecError::WrongDirection { expected });
    }
    Ok(())
}

/// Sequential encoder: each new qubit starts in |0> and collects the parity
/// of the other members of its constraint through CNOTs. Qubits are emitted
/// in resolution order, so every control is already encoded.
pub fn compile_encode_cnot(def: &Deformation) -> Result<Circuit, CodecError> {
    expect(def, Direction::Encode)?;
    let mut c = Circuit::with_wires(def.after().qubits().iter().map(Wire::code));
    let (_, rounds) = def.graph("").propagate(|_| (), |_, _| ())?;
    for k in rounds.into_iter().flatten() {
        let t = &def.targets()[k];
        c.push(Gate::Reset0(Wire::code(t)))?;
        for m in def.choices()[k].others(t) {
            c.push(Gate::Cnot(Wire::code(m), Wire::code(t)))?;
        }
    }
    Ok(c)
}

/// Constant-depth encoder: new qubits start in |+>, every chosen constraint
/// is measured through its own ancilla, and one layer of conditional X
/// gates fixes the outcomes. Outcome names carry the prefix `tag`.
pub fn compile_encode_measurement(
    def: &Deformation,
    tag: &str,
) -> Result<(Circuit, CorrectionPlan), CodecError> {
    expect(def, Direction::Encode)?;
    let ancillas = (0..def.targets().len()).map(Wire::Ancilla);
    let mut c = Circuit::with_wires(def.after().qubits().iter().map(Wire::code).chain(ancillas));
    for t in def.targets() {
        c.push(Gate::ResetPlus(Wire::code(t)))?;
    }
    for (k, (t, con)) in def.targets().iter().zip(def.choices()).enumerate() {
        let a = Wire::Ancilla(k);
        c.push(Gate::Reset0(a.clone()))?;
        for m in con.members() {
            c.push(Gate::Cnot(Wire::code(m), a.clone()))?;
        }
        c.push(Gate::MeasureZ(a, def.outcome_name(tag, t)))?;
    }
    let plan = def.graph(tag).plan()?;
    for e in &plan.entries {
        c.push(Gate::CondX(Wire::code(&e.target), e.cond.clone()))?;
    }
    Ok((c, plan))
}

/// Constant-depth decoder: one layer of X measurements on the removed
/// qubits, then one layer of conditional Z gates on the remaining ones.
pub fn compile_decode_measurement(
    def: &Deformation,
    tag: &str,
) -> Result<(Circuit, CorrectionPlan), CodecError> {
    expect(def, Direction::Decode)?;
    let mut c = Circuit::with_wires(def.before().qubits().iter().map(Wire::code));
    for t in def.targets() {
        c.push(Gate::MeasureX(Wire::code(t), def.outcome_name(tag, t)))?;
    }
    let plan = def.graph(tag).plan()?;
    for e in &plan.entries {
        c.push(Gate::CondZ(Wire::code(&e.target), e.cond.clone()))?;
    }
    Ok((c, plan))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{schedule_depth, DepthReport};
    use crate::code::{lhz_layout, ParityCode, QubitLabel};

    fn w(s: &str) -> Wire {
        s.parse().unwrap()
    }

    #[test]
    fn cnot_encode_of_one_triangle() {
        let def =
            Deformation::encode(&ParityCode::data_only(2), &lhz_layout(2, true).unwrap()).unwrap();
        let c = compile_encode_cnot(&def).unwrap();
        assert_eq!(
            c.gates(),
            &[
                Gate::Reset0(w("(0,1)")),
                Gate::Cnot(w("(0)"), w("(0,1)")),
                Gate::Cnot(w("(1)"), w("(0,1)"))
            ]
        );
    }

    #[test]
    fn empty_deformations_give_empty_circuits() {
        let code = lhz_layout(3, true).unwrap();
        let enc = Deformation::encode(&code, &code).unwrap();
        assert!(compile_encode_cnot(&enc).unwrap().is_empty());
        assert!(compile_encode_measurement(&enc, "").unwrap().0.is_empty());
        let dec = Deformation::decode(&code, &[]).unwrap();
        assert!(compile_decode_measurement(&dec, "").unwrap().0.is_empty());
    }

    #[test]
    fn direction_checked() {
        let dec = Deformation::full_lhz_decode(3).unwrap();
        assert!(matches!(
            compile_encode_cnot(&dec),
            Err(CodecError::WrongDirection { .. })
        ));
        let enc = Deformation::full_lhz_encode(3).unwrap();
        assert!(compile_decode_measurement(&enc, "").is_err());
    }

    #[test]
    fn measurement_encode_depth() {
        for n in 4..=6 {
            let def = Deformation::full_lhz_encode(n).unwrap();
            let (c, _) = compile_encode_measurement(&def, "").unwrap();
            assert_eq!(
                schedule_depth(&c),
                DepthReport {
                    measure: 1,
                    cnot: 4,
                    single: 1
                },
                "n = {n}"
            );
        }
        // only three-member generators exist at n = 3
        let (c, _) =
            compile_encode_measurement(&Deformation::full_lhz_encode(3).unwrap(), "").unwrap();
        assert_eq!(
            schedule_depth(&c),
            DepthReport {
                measure: 1,
                cnot: 3,
                single: 1
            }
        );
    }

    #[test]
    fn measurement_decode_depth() {
        let def = Deformation::full_lhz_decode(4).unwrap();
        let (c, plan) = compile_decode_measurement(&def, "").unwrap();
        assert_eq!(
            schedule_depth(&c),
            DepthReport {
                measure: 1,
                cnot: 0,
                single: 1
            }
        );
        assert_eq!(plan.entries.len(), 4);
        assert_eq!(plan.condition(&QubitLabel::data(0)).unwrap().len(), 3);
    }
}
