use std::f64::consts::PI;

use super::qft::{logical_cp_decomposition, merge_rotations};
use super::{AlgorithmError, GraphSpec};
use crate::circuit::{Circuit, Gate, Wire};
use crate::code::{lhz_layout, ParityCode, QubitLabel};
use crate::codec::{compile_decode_measurement, compile_encode_measurement, Deformation};

/// Graph state on data qubits `(0)..(n-1)` through the full LHZ layout:
/// data in |+>, measurement-based encode, all logical CZs as one layer of
/// rotations, measurement-based decode. The result equals the CZ-circuit
/// graph state up to global phase.
pub fn build_graph_state(graph: &GraphSpec) -> Result<Circuit, AlgorithmError> {
    if graph.n < 2 {
        return Err(AlgorithmError::BadSize { n: graph.n, min: 2 });
    }
    build_graph_state_on(graph, &lhz_layout(graph.n, true)?)
}

/// As [`build_graph_state`] on a caller-supplied code, which must hold every
/// data qubit and the parity qubit of every edge.
pub fn build_graph_state_on(
    graph: &GraphSpec,
    code: &ParityCode,
) -> Result<Circuit, AlgorithmError> {
    if code.n() != graph.n {
        return Err(AlgorithmError::SizeMismatch {
            problem: graph.n,
            code: code.n(),
        });
    }
    for q in (0..graph.n)
        .map(QubitLabel::data)
        .chain(graph.edges.iter().map(|e| QubitLabel::pair(e[0], e[1])))
    {
        if !code.contains(&q) {
            return Err(AlgorithmError::MissingQubit(q));
        }
    }
    let base = ParityCode::data_only(graph.n);
    let mut c = Circuit::with_wires(code.qubits().iter().map(Wire::code));
    for i in 0..graph.n {
        c.push(Gate::ResetPlus(Wire::data(i)))?;
    }
    let enc = Deformation::encode(&base, code)?;
    c.extend(&compile_encode_measurement(&enc, "g.")?.0)?;
    let cps: Vec<_> = graph
        .edges
        .iter()
        .map(|e| logical_cp_decomposition(PI, e[0], e[1]))
        .collect();
    for (q, angle) in merge_rotations(&cps) {
        c.push(Gate::Rz(Wire::code(&q), angle))?;
    }
    let removed: Vec<QubitLabel> = code
        .qubits()
        .iter()
        .filter(|q| !base.contains(q))
        .cloned()
        .collect();
    let dec = Deformation::decode(code, &removed)?;
    c.extend(&compile_decode_measurement(&dec, "g.")?.0)?;
    Ok(c)
}

/// The reference construction: H on every qubit, then one CZ per edge.
pub fn direct_graph_state_circuit(graph: &GraphSpec) -> Circuit {
    let mut c = Circuit::with_wires((0..graph.n).map(Wire::data));
    for i in 0..graph.n {
        c.push(Gate::H(Wire::data(i))).expect("declared");
    }
    for e in &graph.edges {
        c.push(Gate::Cz(Wire::data(e[0]), Wire::data(e[1])))
            .expect("distinct vertices");
    }
    c
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::schedule_depth;
    use crate::sim::{
        run_statevector, same_state_up_to_global_phase, OutcomePolicy, SimConfig, StateVector,
    };

    fn check(graph: &GraphSpec, seed: u64) {
        let wires: Vec<Wire> = (0..graph.n).map(Wire::data).collect();
        let empty = StateVector::zero(Vec::new());
        let cfg = SimConfig::default();
        let got = run_statevector(
            &build_graph_state(graph).unwrap(),
            &empty,
            &OutcomePolicy::Random(seed),
            &cfg,
        )
        .unwrap()
        .state_on(&wires)
        .unwrap();
        let want = run_statevector(
            &direct_graph_state_circuit(graph),
            &empty,
            &OutcomePolicy::Random(0),
            &cfg,
        )
        .unwrap()
        .state_on(&wires)
        .unwrap();
        let (eq, f) = same_state_up_to_global_phase(&got, &want, 1e-9).unwrap();
        assert!(eq, "{graph:?}: fidelity {f}");
    }

    #[test]
    fn triangle_and_path() {
        check(&GraphSpec::new(3, vec![[0, 1], [1, 2], [0, 2]]).unwrap(), 3);
        check(&GraphSpec::new(4, vec![[0, 1], [1, 2], [2, 3]]).unwrap(), 4);
    }

    #[test]
    fn empty_graph_is_plus_state() {
        check(&GraphSpec::new(3, vec![]).unwrap(), 1);
    }

    #[test]
    fn depth_is_bounded() {
        for n in 2..=6 {
            let g = GraphSpec::new(n, (0..n - 1).map(|i| [i, i + 1]).collect()).unwrap();
            let d = schedule_depth(&build_graph_state(&g).unwrap());
            assert_eq!(d.measure, 2, "n = {n}");
            assert!(d.cnot <= 4 && d.single <= 4, "n = {n}: {d}");
        }
    }

    #[test]
    fn missing_edge_qubit() {
        let g = GraphSpec::new(3, vec![[0, 2]]).unwrap();
        let code = ParityCode::from_labels(
            3,
            vec![
                QubitLabel::data(0),
                QubitLabel::data(1),
                QubitLabel::data(2),
                QubitLabel::pair(0, 1),
            ],
        )
        .unwrap();
        assert!(matches!(
            build_graph_state_on(&g, &code),
            Err(AlgorithmError::MissingQubit(_))
        ));
    }
}
