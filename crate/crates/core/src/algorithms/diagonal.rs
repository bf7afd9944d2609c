use std::collections::BTreeMap;
use std::f64::consts::FRAC_PI_2;

use super::AlgorithmError;
use crate::circuit::{Circuit, Gate, Wire};
use crate::code::{ParityCode, QubitLabel};
use crate::codec::{compile_decode_measurement, compile_encode_measurement, Deformation};
use crate::sim::Pauli;

/// `exp(i alpha prod_{j in idx} sigma_j)` with every `sigma` of kind `pauli`.
#[derive(Clone, Debug, PartialEq)]
pub struct DiagonalTerm {
    pub pauli: Pauli,
    pub idx: Vec<usize>,
    pub alpha: f64,
}

fn basis_change(
    c: &mut Circuit,
    basis: Pauli,
    n: usize,
    inverse: bool,
) -> Result<(), AlgorithmError> {
    for i in 0..n {
        let w = Wire::data(i);
        match (basis, inverse) {
            (Pauli::Z, _) => {}
            (Pauli::X, _) => c.push(Gate::H(w))?,
            (Pauli::Y, false) => {
                c.push(Gate::Rz(w.clone(), -FRAC_PI_2))?;
                c.push(Gate::H(w))?;
            }
            (Pauli::Y, true) => {
                c.push(Gate::H(w.clone()))?;
                c.push(Gate::S(w))?;
            }
        }
    }
    Ok(())
}

/// A product of commuting same-kind Pauli exponentials in constant depth:
/// rotate the data qubits so `basis` becomes Z (H for X, S-dagger then H
/// for Y), encode `code`, apply `RZ(-2 alpha)` on each term's qubit,
/// decode, rotate back. Equal to the target unitary up to global phase.
pub fn compile_diagonal_block(
    terms: &[DiagonalTerm],
    basis: Pauli,
    code: &ParityCode,
) -> Result<Circuit, AlgorithmError> {
    let n = code.n();
    if let Some(t) = terms.iter().find(|t| t.pauli != basis) {
        return Err(AlgorithmError::MixedBasis {
            expected: basis,
            got: t.pauli,
        });
    }
    let mut angles: BTreeMap<QubitLabel, f64> = BTreeMap::new();
    for t in terms {
        let q = QubitLabel::new(t.idx.iter().copied())?;
        if let Some(&i) = q.indices().iter().find(|&&i| i >= n) {
            return Err(AlgorithmError::InvalidProblem(format!(
                "index {i} out of range for n = {n}"
            )));
        }
        if !code.contains(&q) {
            return Err(AlgorithmError::MissingQubit(q));
        }
        *angles.entry(q).or_insert(0.0) += -2.0 * t.alpha;
    }
    if let Some(d) = (0..n).map(QubitLabel::data).find(|d| !code.contains(d)) {
        return Err(AlgorithmError::MissingQubit(d));
    }
    let base = ParityCode::data_only(n);
    let mut c = Circuit::with_wires(code.qubits().iter().map(Wire::code));
    basis_change(&mut c, basis, n, false)?;
    let enc = Deformation::encode(&base, code)?;
    c.extend(&compile_encode_measurement(&enc, "d.")?.0)?;
    for (q, a) in angles {
        c.push(Gate::Rz(Wire::code(&q), a))?;
    }
    let removed: Vec<QubitLabel> = code
        .qubits()
        .iter()
        .filter(|q| !base.contains(q))
        .cloned()
        .collect();
    let dec = Deformation::decode(code, &removed)?;
    c.extend(&compile_decode_measurement(&dec, "d.")?.0)?;
    basis_change(&mut c, basis, n, true)?;
    Ok(c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::code::{higher_order_fixture, lhz_layout};
    use crate::sim::{
        run_statevector, same_state_up_to_global_phase, OutcomePolicy, SimConfig, StateVector,
    };
    use num_complex::Complex64 as C64;
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

    /// `cos(alpha) psi + i sin(alpha) P psi`, term by term.
    fn dense(terms: &[DiagonalTerm], input: &StateVector) -> StateVector {
        let mut psi = input.amplitudes().to_vec();
        for t in terms {
            let mut p_psi = vec![C64::new(0.0, 0.0); psi.len()];
            for (x, a) in psi.iter().enumerate() {
                let mut y = x;
                let mut f = C64::new(1.0, 0.0);
                for &i in &t.idx {
                    let bit = x >> i & 1 == 1;
                    match t.pauli {
                        Pauli::X => y ^= 1 << i,
                        Pauli::Z => f *= if bit { -1.0 } else { 1.0 },
                        Pauli::Y => {
                            y ^= 1 << i;
                            f *= if bit {
                                C64::new(0.0, -1.0)
                            } else {
                                C64::new(0.0, 1.0)
                            };
                        }
                    }
                }
                p_psi[y] += f * a;
            }
            for (a, pa) in psi.iter_mut().zip(&p_psi) {
                *a = *a * t.alpha.cos() + C64::new(0.0, t.alpha.sin()) * pa;
            }
        }
        StateVector::from_amplitudes(input.wires().to_vec(), psi).unwrap()
    }

    fn check(terms: &[DiagonalTerm], basis: Pauli, code: &ParityCode, seed: u64) {
        let n = code.n();
        let input = random_state(n, seed);
        let c = compile_diagonal_block(terms, basis, code).unwrap();
        let run = run_statevector(
            &c,
            &input,
            &OutcomePolicy::Random(seed),
            &SimConfig::default(),
        )
        .unwrap();
        let got = run.state_on(input.wires()).unwrap();
        let (eq, f) = same_state_up_to_global_phase(&got, &dense(terms, &input), 1e-12).unwrap();
        assert!(eq, "{basis:?}: fidelity {f}");
    }

    #[test]
    fn zz_term() {
        let t = [DiagonalTerm {
            pauli: Pauli::Z,
            idx: vec![0, 1],
            alpha: 0.37,
        }];
        check(&t, Pauli::Z, &lhz_layout(2, true).unwrap(), 1);
    }

    #[test]
    fn xx_and_yy_terms() {
        let code = lhz_layout(3, true).unwrap();
        for basis in [Pauli::X, Pauli::Y] {
            let t = [
                DiagonalTerm {
                    pauli: basis,
                    idx: vec![0, 2],
                    alpha: 0.4,
                },
                DiagonalTerm {
                    pauli: basis,
                    idx: vec![1],
                    alpha: -0.9,
                },
                DiagonalTerm {
                    pauli: basis,
                    idx: vec![1, 2],
                    alpha: 1.3,
                },
            ];
            check(&t, basis, &code, 2);
        }
    }

    #[test]
    fn three_body_x_term_on_fixture() {
        let t = [DiagonalTerm {
            pauli: Pauli::X,
            idx: vec![0, 1, 2],
            alpha: 0.61,
        }];
        check(&t, Pauli::X, &higher_order_fixture(), 3);
    }

    #[test]
    fn zero_angles_are_identity() {
        let t = [DiagonalTerm {
            pauli: Pauli::Y,
            idx: vec![0, 1],
            alpha: 0.0,
        }];
        check(&t, Pauli::Y, &lhz_layout(2, true).unwrap(), 4);
    }

    #[test]
    fn mixed_basis_and_missing_qubit() {
        let code = lhz_layout(3, true).unwrap();
        let t = [DiagonalTerm {
            pauli: Pauli::X,
            idx: vec![0, 1],
            alpha: 0.1,
        }];
        assert!(matches!(
            compile_diagonal_block(&t, Pauli::Z, &code),
            Err(AlgorithmError::MixedBasis { .. })
        ));
        let t = [DiagonalTerm {
            pauli: Pauli::Z,
            idx: vec![0, 1, 2],
            alpha: 0.1,
        }];
        assert!(matches!(
            compile_diagonal_block(&t, Pauli::Z, &code),
            Err(AlgorithmError::MissingQubit(_))
        ));
    }
}
