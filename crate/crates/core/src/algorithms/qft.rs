//! QFT on a three-line strip: data qubits on the middle line, two lines of
//! temporary parity qubits that are encoded and decoded once per block.

use std::collections::BTreeMap;
use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64 as C64;

use super::AlgorithmError;
use crate::circuit::{Circuit, Gate, Wire};
use crate::code::{Constraint, ParityCode, QubitLabel};
use crate::codec::{compile_decode_measurement, compile_encode_measurement, Deformation};
use crate::sim::{SimError, StateVector};

/// Single-qubit rotations realizing a logical `CP(phi)` between `i` and `j`
/// in a code holding `(i)`, `(j)` and `(i,j)`.
#[derive(Clone, Debug, PartialEq)]
pub struct CpDecomposition {
    /// `(qubit, RZ angle)` for `(i)`, `(j)`, `(i,j)`.
    pub rotations: [(QubitLabel, f64); 3],
    /// `CP(phi) = e^{i global_phase} * prod RZ`.
    pub global_phase: f64,
}

/// `CP(phi) = e^{i phi/4} RZ_i(phi/2) RZ_j(phi/2) RZ_ij(-phi/2)`, where the
/// last rotation acts as `exp(+i phi/4 Z_i Z_j)` on the parity qubit.
pub fn logical_cp_decomposition(phi: f64, i: usize, j: usize) -> CpDecomposition {
    CpDecomposition {
        rotations: [
            (QubitLabel::data(i), phi / 2.0),
            (QubitLabel::data(j), phi / 2.0),
            (QubitLabel::pair(i, j), -phi / 2.0),
        ],
        global_phase: phi / 4.0,
    }
}

/// Sums the rotations of several logical CP gates per qubit.
pub(crate) fn merge_rotations<'a, I: IntoIterator<Item = &'a CpDecomposition>>(
    cps: I,
) -> BTreeMap<QubitLabel, f64> {
    let mut out = BTreeMap::new();
    for cp in cps {
        for (q, a) in &cp.rotations {
            *out.entry(q.clone()).or_insert(0.0) += a;
        }
    }
    out
}

/// The code for the block starting at logical qubit `i`: all data qubits,
/// the line `(i,k)` for `k > i` and the line `(i+1,l)` for `l > i+1`.
/// Each line starts with a triangle on two neighbouring data qubits and
/// continues with squares `{(a,k), (a,k+1), (k), (k+1)}`.
pub fn qft_block_code(n: usize, i: usize) -> Result<ParityCode, AlgorithmError> {
    let mut qubits: Vec<QubitLabel> = (0..n).map(QubitLabel::data).collect();
    let mut constraints = Vec::new();
    for a in [i, i + 1] {
        if a + 1 >= n {
            continue;
        }
        for k in a + 1..n {
            qubits.push(QubitLabel::pair(a, k));
        }
        constraints.push(Constraint::new([
            QubitLabel::data(a),
            QubitLabel::data(a + 1),
            QubitLabel::pair(a, a + 1),
        ])?);
        for k in a + 1..n - 1 {
            constraints.push(Constraint::new([
                QubitLabel::pair(a, k),
                QubitLabel::pair(a, k + 1),
                QubitLabel::data(k),
                QubitLabel::data(k + 1),
            ])?);
        }
    }
    Ok(ParityCode::new(n, qubits, constraints)?)
}

fn physical_pair(n: usize, i: usize) -> Result<Circuit, AlgorithmError> {
    let mut c = Circuit::with_wires((0..n).map(Wire::data));
    let (a, b) = (Wire::data(i), Wire::data(i + 1));
    c.push(Gate::H(a.clone()))?;
    c.push(Gate::Cp(a, b.clone(), FRAC_PI_2))?;
    c.push(Gate::H(b))?;
    Ok(c)
}

/// One contiguous piece of the strip QFT.
#[derive(Clone, Debug)]
pub struct QftStage {
    pub name: String,
    pub circuit: Circuit,
    /// For encode stages, the code every branch must be in afterwards.
    pub encoded: Option<ParityCode>,
}

/// The strip QFT as consecutive stages: per block the physical pair, the
/// encode, the logical rotations and the decode; then the closing gates.
pub fn qft_stages(n: usize) -> Result<Vec<QftStage>, AlgorithmError> {
    if n < 2 {
        return Err(AlgorithmError::BadSize { n, min: 2 });
    }
    let mut stages = Vec::new();
    for b in 0..(n - 1) / 2 {
        let i = 2 * b;
        stages.push(QftStage {
            name: format!("block {b} physical"),
            circuit: physical_pair(n, i)?,
            encoded: None,
        });
        let code = qft_block_code(n, i)?;
        let enc = Deformation::encode(&ParityCode::data_only(n), &code)?;
        let (ce, _) = compile_encode_measurement(&enc, &format!("B{b}e."))?;
        stages.push(QftStage {
            name: format!("block {b} encode"),
            circuit: ce,
            encoded: Some(code.clone()),
        });
        let mut cps = Vec::new();
        for a in [i, i + 1] {
            for k in i + 2..n {
                cps.push(logical_cp_decomposition(
                    PI / f64::powi(2.0, (k - a) as i32),
                    a,
                    k,
                ));
            }
        }
        let mut rot = Circuit::with_wires(code.qubits().iter().map(Wire::code));
        for (q, angle) in merge_rotations(&cps) {
            rot.push(Gate::Rz(Wire::code(&q), angle))?;
        }
        stages.push(QftStage {
            name: format!("block {b} logical"),
            circuit: rot,
            encoded: None,
        });
        let removed: Vec<QubitLabel> = code.parity_qubits().cloned().collect();
        let dec = Deformation::decode(&code, &removed)?;
        let (cd, _) = compile_decode_measurement(&dec, &format!("B{b}d."))?;
        stages.push(QftStage {
            name: format!("block {b} decode"),
            circuit: cd,
            encoded: None,
        });
    }
    let tail = if n.is_multiple_of(2) {
        physical_pair(n, n - 2)?
    } else {
        let mut c = Circuit::with_wires((0..n).map(Wire::data));
        c.push(Gate::H(Wire::data(n - 1)))?;
        c
    };
    stages.push(QftStage {
        name: "closing".into(),
        circuit: tail,
        encoded: None,
    });
    Ok(stages)
}

/// The strip QFT on `n >= 2` data qubits `(0)..(n-1)`. Output qubit order
/// is reversed, as for the textbook circuit without final swaps.
pub fn build_qft(n: usize) -> Result<Circuit, AlgorithmError> {
    let mut c = Circuit::with_wires((0..n).map(Wire::data));
    for s in qft_stages(n)? {
        c.extend(&s.circuit)?;
    }
    Ok(c)
}

/// CNOT-equivalent and measurement layer counts the strip QFT should reach.
pub fn qft_expected_depth(n: usize) -> (usize, usize) {
    if n.is_multiple_of(2) {
        (3 * n - 4, n - 2)
    } else {
        (3 * n - 3, n - 1)
    }
}

/// Dense QFT on data qubits `(0)..(n-1)`: with `x = sum_k x_k 2^(n-1-k)`
/// read with `(0)` as the most significant bit, the output amplitude of
/// `y` (read with `(0)` as the least significant bit) is
/// `sum_x e^{2 pi i x y / 2^n} a_x / sqrt(2^n)`.
pub fn dense_qft(input: &StateVector) -> Result<StateVector, SimError> {
    let n = input.num_qubits();
    let wires: Vec<Wire> = (0..n).map(Wire::data).collect();
    let s = input.reorder(&wires)?;
    let dim = 1usize << n;
    let msb = |idx: usize| (0..n).fold(0usize, |acc, k| acc | ((idx >> k & 1) << (n - 1 - k)));
    let a = s.amplitudes();
    let norm = (dim as f64).sqrt().recip();
    let out = (0..dim)
        .map(|y| {
            (0..dim)
                .map(|x_idx| {
                    let x = msb(x_idx);
                    a[x_idx] * C64::from_polar(norm, 2.0 * PI * ((x * y) % dim) as f64 / dim as f64)
                })
                .sum()
        })
        .collect();
    StateVector::from_amplitudes(wires, out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::schedule_depth;
    use crate::sim::{run_statevector, same_state_up_to_global_phase, OutcomePolicy, SimConfig};
    use rand::{Rng, SeedableRng};

    fn random_state(n: usize, seed: u64) -> StateVector {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let amps: Vec<C64> = (0..1 << n)
            .map(|_| C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
            .collect();
        let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        StateVector::from_amplitudes(
            (0..n).map(Wire::data).collect(),
            amps.into_iter().map(|a| a / norm).collect(),
        )
        .unwrap()
    }

    fn textbook_qft(n: usize) -> Circuit {
        let mut c = Circuit::with_wires((0..n).map(Wire::data));
        for i in 0..n {
            c.push(Gate::H(Wire::data(i))).unwrap();
            for j in i + 1..n {
                c.push(Gate::Cp(
                    Wire::data(i),
                    Wire::data(j),
                    PI / f64::powi(2.0, (j - i) as i32),
                ))
                .unwrap();
            }
        }
        c
    }

    #[test]
    fn dense_oracle_matches_gate_sequence() {
        for n in 1..=4 {
            let input = random_state(n, n as u64);
            let run = run_statevector(
                &textbook_qft(n),
                &input,
                &OutcomePolicy::Random(0),
                &SimConfig::default(),
            )
            .unwrap();
            let wires: Vec<Wire> = (0..n).map(Wire::data).collect();
            let got = run.state_on(&wires).unwrap();
            let want = dense_qft(&input).unwrap();
            let (eq, f) = same_state_up_to_global_phase(&got, &want, 1e-12).unwrap();
            assert!(eq, "n = {n}, fidelity {f}");
        }
    }

    #[test]
    fn cp_decomposition_is_exact() {
        for phi in [0.0, FRAC_PI_2, PI, 0.37] {
            let d = logical_cp_decomposition(phi, 0, 1);
            // diagonal on |x0 x1>: RZ(t) gives e^{-i t/2} for 0, e^{+i t/2} for 1
            for x in 0..4usize {
                let (b0, b1) = (x & 1, x >> 1 & 1);
                let z = |b: usize| if b == 1 { 1.0 } else { -1.0 };
                let phase = d.global_phase
                    + z(b0) * d.rotations[0].1 / 2.0
                    + z(b1) * d.rotations[1].1 / 2.0
                    + z(b0 ^ b1) * d.rotations[2].1 / 2.0;
                let want = if x == 3 { phi } else { 0.0 };
                assert!(
                    (C64::from_polar(1.0, phase) - C64::from_polar(1.0, want)).norm() < 1e-12,
                    "phi {phi} x {x}"
                );
            }
        }
        assert_eq!(
            logical_cp_decomposition(0.0, 1, 2)
                .rotations
                .iter()
                .map(|r| r.1.abs())
                .sum::<f64>(),
            0.0
        );
    }

    #[test]
    fn block_codes_are_valid() {
        for n in 3..=7 {
            for i in (0..n - 2).step_by(2) {
                let code = qft_block_code(n, i).unwrap();
                assert!(code.validate().is_valid(), "n {n} i {i}");
                assert_eq!(code.parity_qubits().count(), 2 * (n - i) - 3);
            }
        }
    }

    #[test]
    fn depth_formulas() {
        for n in 2..=8 {
            let d = schedule_depth(&build_qft(n).unwrap());
            assert_eq!((d.cnot, d.measure), qft_expected_depth(n), "n = {n}");
        }
    }

    #[test]
    fn n2_is_physical_only() {
        let c = build_qft(2).unwrap();
        assert_eq!(c.num_measurements(), 0);
        assert_eq!(c.len(), 3);
        assert!(build_qft(1).is_err());
    }

    #[test]
    fn n3_random_branch_matches_dense() {
        let input = random_state(3, 11);
        let run = run_statevector(
            &build_qft(3).unwrap(),
            &input,
            &OutcomePolicy::Random(5),
            &SimConfig::default(),
        )
        .unwrap();
        let got = run
            .state_on(&(0..3).map(Wire::data).collect::<Vec<_>>())
            .unwrap();
        let (eq, f) =
            same_state_up_to_global_phase(&got, &dense_qft(&input).unwrap(), 1e-9).unwrap();
        assert!(eq, "fidelity {f}");
    }
}
