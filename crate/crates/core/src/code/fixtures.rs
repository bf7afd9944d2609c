use super::{Constraint, ParityCode, QubitLabel};

/// Four logical qubits with every three-body parity, two helper parity
/// qubits `(0,1)` and `(2,3)`, and six local generators on a 4x3 patch:
///
/// ```text
///   y=2      .    (0,2,3) (0,1,3) (0,1,2)
///   y=1    (0,1)  (1,2,3)   (3)    (2,3)
///   y=0     (0)     (1)     (2)      .
/// ```
///
/// Starting from the data qubits, every parity qubit can be added by peeling
/// one generator at a time: `(0,1)`, `(2,3)`, `(1,2,3)`, `(0,2,3)`, `(0,1,3)`,
/// `(0,1,2)`.
pub fn higher_order_fixture() -> ParityCode {
    let q = |ix: &[usize]| QubitLabel::new(ix.iter().copied()).expect("fixture label");
    let sites: [(&[usize], [i64; 2]); 10] = [
        (&[0], [0, 0]),
        (&[1], [1, 0]),
        (&[2], [2, 0]),
        (&[3], [2, 1]),
        (&[0, 1], [0, 1]),
        (&[2, 3], [3, 1]),
        (&[1, 2, 3], [1, 1]),
        (&[0, 2, 3], [1, 2]),
        (&[0, 1, 3], [2, 2]),
        (&[0, 1, 2], [3, 2]),
    ];
    let generators: [&[&[usize]]; 6] = [
        &[&[0], &[1], &[0, 1]],
        &[&[2], &[3], &[2, 3]],
        &[&[1], &[2], &[3], &[1, 2, 3]],
        &[&[0, 1], &[0, 2, 3], &[1, 2, 3]],
        &[&[3], &[0, 1, 3], &[0, 2, 3], &[1, 2, 3]],
        &[&[2, 3], &[0, 1, 2], &[0, 1, 3]],
    ];
    let qubits = sites.iter().map(|(ix, _)| q(ix)).collect();
    let placement = sites.iter().map(|(_, p)| *p).collect();
    let constraints = generators
        .iter()
        .map(|g| Constraint::new(g.iter().map(|ix| q(ix))).expect("fixture generator"))
        .collect();
    ParityCode::new(4, qubits, constraints)
        .and_then(|c| c.with_placement(placement))
        .expect("fixture is well formed")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixture_is_valid_and_local() {
        let code = higher_order_fixture();
        let r = code.validate();
        assert!(r.is_valid(), "{r:?}");
        assert!(r.fully_determined);
        assert_eq!(r.rank, code.num_qubits() - code.n());
        assert_eq!(r.non_local, Some(vec![]));
        assert!(code.qubits().iter().any(|q| q.weight() == 3));
    }

    #[test]
    fn data_qubits_read_out() {
        let code = higher_order_fixture();
        let data: Vec<QubitLabel> = code.data_qubits().cloned().collect();
        assert!(code.readout_basis(&data).is_ok());
    }

    #[test]
    fn logical_x_support_scans_labels() {
        let code = higher_order_fixture();
        let q0 = code.logical_x_support(0).unwrap();
        let expected: Vec<QubitLabel> = code
            .qubits()
            .iter()
            .filter(|q| q.indices().contains(&0))
            .cloned()
            .collect();
        assert_eq!(q0, expected);
        assert_eq!(q0.len(), 5);
    }
}
