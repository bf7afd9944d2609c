//! End-to-end checks shared by the command line and the test suites. Each
//! check returns a serializable record with a `pass` verdict instead of
//! failing, so callers can report every number.

use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::algorithms::{
    build_graph_state, dense_qft, direct_graph_state_circuit, qft_expected_depth, qft_stages,
    AlgorithmError, GraphSpec,
};
use crate::circuit::Outcomes;
use crate::circuit::{schedule_depth, Circuit, DepthReport, Gate, Wire};
use crate::code::{lhz_layout, ParityCode, QubitLabel};
use crate::codec::{
    closed_form_decode, closed_form_encode, compile_decode_measurement, compile_encode_cnot,
    compile_encode_measurement, lhz_decode_outcomes, lhz_encode_outcomes, resolve_corrections,
    Deformation, Direction,
};
use crate::sim::{
    enumerate_branches_with, run_stabilizer, run_statevector, run_statevector_with,
    same_state_up_to_global_phase, OutcomePolicy, PauliString, SimConfig, SimError, Simulator,
    StateVector, Tableau,
};
use crate::Error;

/// Largest tolerated `|1 - <S>|` for a constraint `S` after an encode.
pub const STABILIZER_TOL: f64 = 1e-10;

/// Number of sampled branches when a circuit has too many measurements to
/// enumerate.
pub const SAMPLED_BRANCHES: usize = 8;

/// Which outcome branches a check visits.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BranchPolicy {
    Enumerate,
    /// `count` runs with seeds `seed, seed + 1, ...`.
    Sample {
        count: usize,
        seed: u64,
    },
    Forced(Vec<bool>),
}

impl BranchPolicy {
    /// Enumerate when the measurement count allows it, otherwise sample.
    pub fn auto(circuit: &Circuit, seed: u64, config: &SimConfig) -> Self {
        if circuit.num_measurements() <= config.max_enumerated_measurements {
            Self::Enumerate
        } else {
            Self::Sample {
                count: SAMPLED_BRANCHES,
                seed,
            }
        }
    }

    pub fn describe(&self) -> String {
        match self {
            Self::Enumerate => "enumerate".into(),
            Self::Sample { count, seed } => format!("random x{count} (seed {seed})"),
            Self::Forced(bits) => format!(
                "forced:{}",
                bits.iter()
                    .map(|&b| if b { '1' } else { '0' })
                    .collect::<String>()
            ),
        }
    }
}

/// Runs every selected branch, calling `observe(k, sim)` after gate `k`
/// and `finish(sim, probability)` at the end of each branch.
pub fn for_each_branch<O, F>(
    circuit: &Circuit,
    input: &StateVector,
    policy: &BranchPolicy,
    config: &SimConfig,
    mut observe: O,
    mut finish: F,
) -> Result<usize, SimError>
where
    O: FnMut(usize, &Simulator),
    F: FnMut(&Simulator, f64) -> Result<(), SimError>,
{
    match policy {
        BranchPolicy::Enumerate => {
            let branches = enumerate_branches_with(circuit, input, config, &mut observe)?;
            for b in &branches {
                finish(&b.run.sim, b.probability)?;
            }
            Ok(branches.len())
        }
        BranchPolicy::Sample { count, seed } => {
            for k in 0..*count {
                let run = run_statevector_with(
                    circuit,
                    input,
                    &OutcomePolicy::Random(seed + k as u64),
                    config,
                    &mut observe,
                )?;
                finish(&run.sim, run.probability())?;
            }
            Ok(*count)
        }
        BranchPolicy::Forced(bits) => {
            let run = run_statevector_with(
                circuit,
                input,
                &OutcomePolicy::Forced(bits.clone()),
                config,
                &mut observe,
            )?;
            finish(&run.sim, run.probability())?;
            Ok(1)
        }
    }
}

/// Largest `|1 - <S>|` over the constraints of `code` on `sim`.
pub fn constraint_error(sim: &Simulator, code: &ParityCode) -> Result<f64, SimError> {
    let mut worst: f64 = 0.0;
    for c in code.constraints() {
        let e = sim.expectation(&PauliString::z_product(
            c.members()
                .iter()
                .map(Wire::code)
                .collect::<Vec<_>>()
                .iter(),
        ))?;
        worst = worst.max((1.0 - e).abs());
    }
    Ok(worst)
}

fn fidelity(a: &StateVector, b: &StateVector) -> Result<f64, SimError> {
    Ok(same_state_up_to_global_phase(a, b, 0.0)?.1)
}

/// Product of random single-qubit states on data qubits `(0)..(n-1)`.
pub fn random_product_state(n: usize, rng: &mut impl Rng) -> StateVector {
    let factors: Vec<[C64; 2]> = (0..n)
        .map(|_| {
            let (t, p): (f64, f64) = (
                rng.random_range(0.0..std::f64::consts::PI),
                rng.random_range(0.0..std::f64::consts::TAU),
            );
            [
                C64::new((t / 2.0).cos(), 0.0),
                C64::from_polar((t / 2.0).sin(), p),
            ]
        })
        .collect();
    StateVector::product((0..n).map(Wire::data).collect(), &factors).expect("one factor per wire")
}

/// Normalized random complex amplitudes on data qubits `(0)..(n-1)`.
pub fn random_state(n: usize, rng: &mut impl Rng) -> StateVector {
    let amps: Vec<C64> = (0..1usize << n)
        .map(|_| C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
        .collect();
    let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    StateVector::from_amplitudes(
        (0..n).map(Wire::data).collect(),
        amps.into_iter().map(|a| a / norm).collect(),
    )
    .expect("power-of-two length")
}

/// Full LHZ encode and decode of one random product state.
#[derive(Clone, Debug, Serialize)]
pub struct RoundTripCheck {
    pub n: usize,
    pub seed: u64,
    pub encode_branches: usize,
    /// Worst fidelity between a measurement-encode branch and the CNOT encode.
    pub encode_fidelity: f64,
    pub probability_sum: f64,
    pub constraint_error: f64,
    pub decode_branches: usize,
    /// Worst fidelity between a decode branch and the input.
    pub decode_fidelity: f64,
    pub pass: bool,
}

pub fn check_lhz_round_trip(
    n: usize,
    seed: u64,
    tol: f64,
    config: &SimConfig,
) -> Result<RoundTripCheck, Error> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let input = random_product_state(n, &mut rng);
    let code = lhz_layout(n, true)?;
    let code_wires: Vec<Wire> = code.qubits().iter().map(Wire::code).collect();
    let data_wires: Vec<Wire> = (0..n).map(Wire::data).collect();

    let enc = Deformation::full_lhz_encode(n)?;
    let reference = run_statevector(
        &compile_encode_cnot(&enc)?,
        &input,
        &OutcomePolicy::Random(seed),
        config,
    )?
    .state_on(&code_wires)?;
    let (meas, _) = compile_encode_measurement(&enc, "")?;
    let (mut encode_fidelity, mut probability_sum, mut worst) = (1.0f64, 0.0, 0.0f64);
    let encode_branches = for_each_branch(
        &meas,
        &input,
        &BranchPolicy::Enumerate,
        config,
        |_, _| {},
        |sim, p| {
            encode_fidelity =
                encode_fidelity.min(fidelity(&sim.state_on(&code_wires)?, &reference)?);
            worst = worst.max(constraint_error(sim, &code)?);
            probability_sum += p;
            Ok(())
        },
    )?;

    let (dec, _) = compile_decode_measurement(&Deformation::full_lhz_decode(n)?, "")?;
    let mut decode_fidelity = 1.0f64;
    let decode_branches = for_each_branch(
        &dec,
        &reference,
        &BranchPolicy::Enumerate,
        config,
        |_, _| {},
        |sim, _| {
            decode_fidelity = decode_fidelity.min(fidelity(&sim.state_on(&data_wires)?, &input)?);
            Ok(())
        },
    )?;
    let pass = encode_fidelity >= 1.0 - tol
        && decode_fidelity >= 1.0 - tol
        && (probability_sum - 1.0).abs() <= 1e-9
        && worst <= STABILIZER_TOL;
    Ok(RoundTripCheck {
        n,
        seed,
        encode_branches,
        encode_fidelity,
        probability_sum,
        constraint_error: worst,
        decode_branches,
        decode_fidelity,
        pass,
    })
}

/// Strip QFT against the dense transform on random inputs.
#[derive(Clone, Debug, Serialize)]
pub struct QftCheck {
    pub n: usize,
    pub depth: DepthReport,
    pub expected_cnot: usize,
    pub expected_measure: usize,
    pub depth_ok: bool,
    pub measurements: usize,
    pub branches: String,
    pub inputs: usize,
    pub min_fidelity: f64,
    pub constraint_error: f64,
    pub pass: bool,
}

/// `policy` defaults to [`BranchPolicy::auto`] with `seed`.
pub fn check_qft(
    n: usize,
    inputs: usize,
    seed: u64,
    policy: Option<BranchPolicy>,
    tol: f64,
    config: &SimConfig,
) -> Result<QftCheck, Error> {
    let stages = qft_stages(n)?;
    let mut circuit = Circuit::with_wires((0..n).map(Wire::data));
    // gate index closing each encode stage, with the code it must reach
    let mut checkpoints: Vec<(usize, &ParityCode)> = Vec::new();
    for s in &stages {
        circuit.extend(&s.circuit)?;
        if let Some(code) = &s.encoded {
            checkpoints.push((circuit.len() - 1, code));
        }
    }
    let depth = schedule_depth(&circuit);
    let (expected_cnot, expected_measure) = qft_expected_depth(n);
    let policy = policy.unwrap_or_else(|| BranchPolicy::auto(&circuit, seed, config));
    let wires: Vec<Wire> = (0..n).map(Wire::data).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut min_fidelity, mut worst) = (1.0f64, 0.0f64);
    let mut observe_err = None;
    for _ in 0..inputs {
        let input = random_state(n, &mut rng);
        let want = dense_qft(&input)?;
        for_each_branch(
            &circuit,
            &input,
            &policy,
            config,
            |k, sim| {
                for (at, code) in &checkpoints {
                    if *at == k {
                        match constraint_error(sim, code) {
                            Ok(e) => worst = worst.max(e),
                            Err(e) => observe_err = Some(e),
                        }
                    }
                }
            },
            |sim, _| {
                min_fidelity = min_fidelity.min(fidelity(&sim.state_on(&wires)?, &want)?);
                Ok(())
            },
        )?;
        if let Some(e) = observe_err.take() {
            return Err(e.into());
        }
    }
    let depth_ok = depth.cnot == expected_cnot && depth.measure == expected_measure;
    Ok(QftCheck {
        n,
        depth,
        expected_cnot,
        expected_measure,
        depth_ok,
        measurements: circuit.num_measurements(),
        branches: policy.describe(),
        inputs,
        min_fidelity,
        constraint_error: worst,
        pass: depth_ok && min_fidelity >= 1.0 - tol && worst <= STABILIZER_TOL,
    })
}

/// Parity-pipeline graph state against the CZ construction.
#[derive(Clone, Debug, Serialize)]
pub struct GraphCheck {
    pub n: usize,
    pub edges: usize,
    pub depth: DepthReport,
    pub branches: String,
    pub min_fidelity: f64,
    pub pass: bool,
}

pub fn check_graph_state(
    graph: &GraphSpec,
    seed: u64,
    tol: f64,
    config: &SimConfig,
) -> Result<GraphCheck, Error> {
    let circuit = build_graph_state(graph)?;
    let wires: Vec<Wire> = (0..graph.n).map(Wire::data).collect();
    let empty = StateVector::zero(Vec::new());
    let want = run_statevector(
        &direct_graph_state_circuit(graph),
        &empty,
        &OutcomePolicy::Random(seed),
        config,
    )?
    .state_on(&wires)?;
    let policy = BranchPolicy::auto(&circuit, seed, config);
    let mut min_fidelity = 1.0f64;
    for_each_branch(
        &circuit,
        &empty,
        &policy,
        config,
        |_, _| {},
        |sim, _| {
            min_fidelity = min_fidelity.min(fidelity(&sim.state_on(&wires)?, &want)?);
            Ok(())
        },
    )?;
    Ok(GraphCheck {
        n: graph.n,
        edges: graph.edges.len(),
        depth: schedule_depth(&circuit),
        branches: policy.describe(),
        min_fidelity,
        pass: min_fidelity >= 1.0 - tol,
    })
}

/// A measurement-based deformation against the CNOT-prepared target state.
#[derive(Clone, Debug, Serialize)]
pub struct DeformationCheck {
    pub direction: String,
    pub measurements: usize,
    pub branches: String,
    pub probability_sum: f64,
    /// Worst fidelity between a branch and the target code state.
    pub min_fidelity: f64,
    pub constraint_error: f64,
    pub pass: bool,
}

/// The code state of `code` for the logical state `input`, prepared with
/// the sequential CNOT encoder from the data qubits.
fn prepare_code_state(
    code: &ParityCode,
    input: &StateVector,
    config: &SimConfig,
) -> Result<StateVector, Error> {
    if let Some(d) = (0..code.n())
        .map(QubitLabel::data)
        .find(|d| !code.contains(d))
    {
        return Err(AlgorithmError::MissingQubit(d).into());
    }
    let wires: Vec<Wire> = code.qubits().iter().map(Wire::code).collect();
    if code.parity_qubits().next().is_none() {
        return Ok(input.reorder(&wires)?);
    }
    let enc = Deformation::encode(&ParityCode::data_only(code.n()), code)?;
    let run = run_statevector(
        &compile_encode_cnot(&enc)?,
        input,
        &OutcomePolicy::Random(0),
        config,
    )?;
    Ok(run.state_on(&wires)?)
}

/// Runs the measurement-based compilation of `def` on a random code state
/// of `def.before()`. Both codes must hold every data qubit.
pub fn check_deformation(
    def: &Deformation,
    seed: u64,
    policy: Option<BranchPolicy>,
    tol: f64,
    config: &SimConfig,
) -> Result<DeformationCheck, Error> {
    let n = def.before().n();
    let input = random_state(n, &mut ChaCha8Rng::seed_from_u64(seed));
    let start = prepare_code_state(def.before(), &input, config)?;
    let want = prepare_code_state(def.after(), &input, config)?;
    let circuit = match def.direction() {
        Direction::Encode => compile_encode_measurement(def, "")?.0,
        Direction::Decode => compile_decode_measurement(def, "")?.0,
    };
    let policy = policy.unwrap_or_else(|| BranchPolicy::auto(&circuit, seed, config));
    let wires = want.wires().to_vec();
    let (mut min_fidelity, mut probability_sum, mut worst) = (1.0f64, 0.0, 0.0f64);
    for_each_branch(
        &circuit,
        &start,
        &policy,
        config,
        |_, _| {},
        |sim, p| {
            min_fidelity = min_fidelity.min(fidelity(&sim.state_on(&wires)?, &want)?);
            worst = worst.max(constraint_error(sim, def.after())?);
            probability_sum += p;
            Ok(())
        },
    )?;
    let all = policy == BranchPolicy::Enumerate;
    Ok(DeformationCheck {
        direction: def.direction().to_string(),
        measurements: circuit.num_measurements(),
        branches: policy.describe(),
        probability_sum,
        min_fidelity,
        constraint_error: worst,
        pass: min_fidelity >= 1.0 - tol
            && worst <= STABILIZER_TOL
            && (!all || (probability_sum - 1.0).abs() <= 1e-9),
    })
}

/// Graph-based correction resolution against the closed forms for one
/// size, over random outcome assignments.
#[derive(Clone, Debug, Serialize)]
pub struct OracleCheck {
    pub n: usize,
    pub samples: usize,
    pub encode_mismatches: usize,
    pub decode_mismatches: usize,
    pub pass: bool,
}

pub fn check_correction_oracle(n: usize, samples: usize, seed: u64) -> Result<OracleCheck, Error> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let enc = Deformation::full_lhz_encode(n)?.graph("e.");
    let dec = Deformation::full_lhz_decode(n)?.graph("d.");
    let (mut encode_mismatches, mut decode_mismatches) = (0, 0);
    for _ in 0..samples {
        let mut outcomes = Outcomes::new();
        for name in enc.outcomes().iter().chain(dec.outcomes()) {
            outcomes.insert(name.clone(), rng.random::<bool>());
        }
        let want = closed_form_encode(n, &lhz_encode_outcomes(n, "e.", &outcomes)?)?;
        if resolve_corrections(&enc, &outcomes)?.targets != want {
            encode_mismatches += 1;
        }
        let want = closed_form_decode(n, &lhz_decode_outcomes(n, "d.", &outcomes)?)?;
        if resolve_corrections(&dec, &outcomes)?.targets != want {
            decode_mismatches += 1;
        }
    }
    Ok(OracleCheck {
        n,
        samples,
        encode_mismatches,
        decode_mismatches,
        pass: encode_mismatches == 0 && decode_mismatches == 0,
    })
}

fn random_clifford_1q(c: &mut Circuit, w: Wire, rng: &mut impl Rng) -> Result<(), Error> {
    match rng.random_range(0..5) {
        0 => c.push(Gate::H(w))?,
        1 => c.push(Gate::S(w))?,
        2 => c.push(Gate::X(w))?,
        3 => c.push(Gate::Z(w))?,
        _ => {}
    }
    Ok(())
}

/// A random Clifford state on the data qubits of `lhz_layout(n)`, a full
/// measurement-based encode, random diagonal Cliffords on code qubits, one
/// extra constraint measurement (deterministic), and a measurement-based
/// decode of a random non-empty set of parity qubits.
pub fn random_clifford_codec_circuit(n: usize, rng: &mut impl Rng) -> Result<Circuit, Error> {
    let code = lhz_layout(n, true)?;
    let enc = Deformation::full_lhz_encode(n)?;
    let mut c = Circuit::with_wires(code.qubits().iter().map(Wire::code));
    for _ in 0..2 {
        for i in 0..n {
            random_clifford_1q(&mut c, Wire::data(i), rng)?;
        }
        let (a, b) = (rng.random_range(0..n), rng.random_range(0..n));
        if a != b {
            if rng.random::<bool>() {
                c.push(Gate::Cnot(Wire::data(a), Wire::data(b)))?;
            } else {
                c.push(Gate::Cz(Wire::data(a), Wire::data(b)))?;
            }
        }
    }
    c.extend(&compile_encode_measurement(&enc, "e.")?.0)?;
    for q in code.qubits() {
        match rng.random_range(0..4) {
            0 => c.push(Gate::S(Wire::code(q)))?,
            1 => c.push(Gate::Z(Wire::code(q)))?,
            2 => c.push(Gate::Rz(Wire::code(q), -std::f64::consts::FRAC_PI_2))?,
            _ => {}
        }
    }
    let check = &code.constraints()[rng.random_range(0..code.constraints().len())];
    let anc = Wire::Ancilla(code.constraints().len());
    c.declare(anc.clone());
    c.push(Gate::Reset0(anc.clone()))?;
    for m in check.members() {
        c.push(Gate::Cnot(Wire::code(m), anc.clone()))?;
    }
    c.push(Gate::MeasureZ(anc, "check".into()))?;
    let parity: Vec<QubitLabel> = code.parity_qubits().cloned().collect();
    let mut removed: Vec<QubitLabel> = parity
        .iter()
        .filter(|_| rng.random::<bool>())
        .cloned()
        .collect();
    if removed.is_empty() {
        removed.push(parity[rng.random_range(0..parity.len())].clone());
    }
    let dec = Deformation::decode(&code, &removed)?;
    c.extend(&compile_decode_measurement(&dec, "d.")?.0)?;
    Ok(c)
}

/// Tableau against statevector on one Clifford circuit.
#[derive(Clone, Debug, Serialize)]
pub struct CrossEngineCheck {
    pub measurements: usize,
    pub deterministic: usize,
    /// The statevector reproduces the tableau's outcomes with probability
    /// `2^-random`, so every deterministic outcome agrees.
    pub outcomes_agree: bool,
    pub stabilizers: usize,
    pub signs_agree: bool,
    pub pass: bool,
}

pub fn check_cross_engine(
    circuit: &Circuit,
    seed: u64,
    config: &SimConfig,
) -> Result<CrossEngineCheck, Error> {
    let tab = run_stabilizer(
        circuit,
        Tableau::zero(Vec::new()),
        &OutcomePolicy::Random(seed),
    )?;
    let random = tab.deterministic.iter().filter(|d| !**d).count();
    let bits = tab.outcomes.bits();
    let empty = StateVector::zero(Vec::new());
    let sv = match run_statevector(circuit, &empty, &OutcomePolicy::Forced(bits), config) {
        Ok(run) => Some(run),
        Err(SimError::ImpossibleBranch { .. }) => None,
        Err(e) => return Err(e.into()),
    };
    let outcomes_agree = sv
        .as_ref()
        .is_some_and(|r| (r.probability() - 0.5f64.powi(random as i32)).abs() < 1e-9);
    let gens = tab.tableau.stabilizers();
    let mut signs_agree = sv.is_some();
    if let Some(run) = &sv {
        for g in &gens {
            if (run.sim.expectation(g)? - 1.0).abs() > 1e-9 {
                signs_agree = false;
            }
        }
    }
    Ok(CrossEngineCheck {
        measurements: tab.deterministic.len(),
        deterministic: tab.deterministic.len() - random,
        outcomes_agree,
        stabilizers: gens.len(),
        signs_agree,
        pass: outcomes_agree && signs_agree,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_small() {
        for n in 2..=3 {
            let r = check_lhz_round_trip(n, 1, 1e-10, &SimConfig::default()).unwrap();
            assert!(r.pass, "{r:?}");
            assert_eq!(r.encode_branches, 1 << (n * (n - 1) / 2));
        }
    }

    #[test]
    fn qft_three() {
        let r = check_qft(3, 2, 0, None, 1e-9, &SimConfig::default()).unwrap();
        assert!(r.pass, "{r:?}");
        assert_eq!(r.branches, "enumerate");
    }

    #[test]
    fn partial_deformations() {
        let cfg = SimConfig::default();
        let code = lhz_layout(4, true).unwrap();
        let removed = [QubitLabel::pair(0, 3), QubitLabel::pair(1, 2)];
        let dec = Deformation::decode(&code, &removed).unwrap();
        assert!(check_deformation(&dec, 1, None, 1e-9, &cfg).unwrap().pass);
        let enc = Deformation::encode(dec.after(), &code).unwrap();
        let r = check_deformation(&enc, 2, None, 1e-9, &cfg).unwrap();
        assert!(r.pass, "{r:?}");
        assert_eq!(r.measurements, 2);
        let r = check_deformation(
            &enc,
            2,
            Some(BranchPolicy::Forced(vec![true, true])),
            1e-9,
            &cfg,
        )
        .unwrap();
        assert!(r.pass);
    }

    #[test]
    fn oracle_small() {
        for n in 2..=4 {
            assert!(check_correction_oracle(n, 50, n as u64).unwrap().pass);
        }
    }

    #[test]
    fn graph_triangle() {
        let g = GraphSpec::new(3, vec![[0, 1], [1, 2], [0, 2]]).unwrap();
        assert!(
            check_graph_state(&g, 0, 1e-9, &SimConfig::default())
                .unwrap()
                .pass
        );
    }

    #[test]
    fn cross_engine_agrees() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for k in 0..5 {
            let c = random_clifford_codec_circuit(3, &mut rng).unwrap();
            let r = check_cross_engine(&c, k, &SimConfig::default()).unwrap();
            assert!(r.pass, "{r:?}");
            assert!(r.deterministic >= 1);
        }
    }

    #[test]
    fn cross_engine_notices_a_wrong_sign() {
        // the tableau is told nothing; a statevector forced against it fails
        let mut c = Circuit::with_wires([Wire::data(0)]);
        c.push(Gate::X(Wire::data(0))).unwrap();
        c.push(Gate::MeasureZ(Wire::data(0), "m".into())).unwrap();
        let r = check_cross_engine(&c, 0, &SimConfig::default()).unwrap();
        assert!(r.pass);
        assert_eq!(r.deterministic, 1);
    }
}
