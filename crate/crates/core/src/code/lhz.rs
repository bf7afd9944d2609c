use super::{CodeError, Constraint, ParityCode, QubitLabel};

/// Qubit at position `(i, j)` of the triangle: data qubit `(i)` on the
/// diagonal, parity qubit `(i, j)` otherwise.
fn site(i: usize, j: usize) -> QubitLabel {
    if i == j {
        QubitLabel::data(i)
    } else {
        QubitLabel::pair(i, j)
    }
}

/// The generator that fixes parity qubit `(k, l)`, `k < l`, against the rows
/// below it:
///
/// * `l = k + 1`: the data triangle `{(k), (k+1), (k,k+1)}`;
/// * `l = k + 2`: the parity triangle `{(k,k+2), (k,k+1), (k+1,k+2)}` (the
///   fourth corner of that cell is data qubit `(k+1)`, which would leave the
///   product unbalanced);
/// * otherwise the plaquette `{(k,l), (k,l-1), (k+1,l-1), (k+1,l)}`.
///
/// # Panics
///
/// If `k >= l`.
pub fn lhz_encoding_constraint(k: usize, l: usize) -> Constraint {
    assert!(k < l, "lhz constraint needs k < l");
    let members = if l == k + 1 {
        vec![site(k, k), site(l, l), site(k, l)]
    } else if l == k + 2 {
        vec![site(k, l), site(k, l - 1), site(k + 1, l)]
    } else {
        vec![
            site(k, l),
            site(k, l - 1),
            site(k + 1, l - 1),
            site(k + 1, l),
        ]
    };
    Constraint::new(members).expect("lhz constraint members are distinct")
}

/// The LHZ triangle on `n` logical qubits: every two-body parity qubit, and
/// the data qubits when `with_data` is set.
///
/// Qubit `(i, j)` sits at lattice coordinate `[j, i]` (data qubit `(i)` at
/// `[i, i]`), so every generator occupies one 2x2 cell. Generators are listed
/// row by row from the data diagonal outwards.
pub fn lhz_layout(n: usize, with_data: bool) -> Result<ParityCode, CodeError> {
    if n < 2 {
        return Err(CodeError::InvalidSize(n));
    }
    let mut qubits = Vec::new();
    let mut placement = Vec::new();
    for d in if with_data { 0 } else { 1 }..n {
        for i in 0..n - d {
            let j = i + d;
            qubits.push(site(i, j));
            placement.push([j as i64, i as i64]);
        }
    }
    let mut constraints = Vec::new();
    for d in if with_data { 1 } else { 2 }..n {
        for k in 0..n - d {
            constraints.push(lhz_encoding_constraint(k, k + d));
        }
    }
    ParityCode::new(n, qubits, constraints)?.with_placement(placement)
}
