//! Statevector execution of circuits.
//!
//! Only qubits that are entangled (or may become entangled) are kept in the
//! dense register. A wire that was never touched by a two-qubit gate, or that
//! has just been measured, is stored as a separate one-qubit state
//! ("parked") and re-enters the register on its next two-qubit gate. The
//! qubit cap applies to the dense register, so a circuit with many declared
//! wires runs as long as few of them are live at once.

use std::collections::HashMap;

use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::state::{apply_mat, c, mat_h, mat_rx, mat_rz, mat_s, mat_x, mat_z, Mat2};
use super::{Pauli, PauliString, SimError, StateVector, MAX_QUBITS_ENV};
use crate::circuit::{Circuit, Gate, Outcomes, Wire};

const PROB_EPS: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SimConfig {
    /// Largest number of simultaneously live qubits.
    pub max_qubits: usize,
    /// Largest measurement count accepted by [`enumerate_branches`].
    pub max_enumerated_measurements: usize,
}

impl Default for SimConfig {
    fn default() -> Self {
        Self {
            max_qubits: 20,
            max_enumerated_measurements: 12,
        }
    }
}

impl SimConfig {
    /// Defaults, with the qubit cap taken from the environment if set.
    pub fn from_env() -> Result<Self, SimError> {
        let mut cfg = Self::default();
        if let Ok(v) = std::env::var(MAX_QUBITS_ENV) {
            cfg.max_qubits = v
                .trim()
                .parse()
                .map_err(|_| SimError::InvalidEnv(v.clone()))?;
        }
        Ok(cfg)
    }
}

/// How random measurement outcomes are chosen.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OutcomePolicy {
    /// Sample with a seeded ChaCha8 generator.
    Random(u64),
    /// One bit per measurement, in circuit order (`true` = -1).
    Forced(Vec<bool>),
}

/// Live register, parked wires and the classical record.
#[derive(Clone, Debug)]
pub struct Simulator {
    live: StateVector,
    parked: HashMap<Wire, [C64; 2]>,
    cap: usize,
    outcomes: Outcomes,
    probability: f64,
}

impl Simulator {
    pub fn new(initial: StateVector, config: &SimConfig) -> Result<Self, SimError> {
        if initial.num_qubits() > config.max_qubits {
            return Err(SimError::CapExceeded {
                needed: initial.num_qubits(),
                cap: config.max_qubits,
            });
        }
        Ok(Self {
            live: initial,
            parked: HashMap::new(),
            cap: config.max_qubits,
            outcomes: Outcomes::new(),
            probability: 1.0,
        })
    }

    pub fn outcomes(&self) -> &Outcomes {
        &self.outcomes
    }

    /// Probability of the branch taken so far.
    pub fn probability(&self) -> f64 {
        self.probability
    }

    /// Norm of the live register; parked wires are normalized separately.
    pub fn norm(&self) -> f64 {
        self.live.norm()
    }

    pub fn live_qubits(&self) -> usize {
        self.live.num_qubits()
    }

    /// `<p>` on the full state, using that parked wires are unentangled.
    /// Each wire may appear at most once in `p`.
    pub fn expectation(&self, p: &PauliString) -> Result<f64, SimError> {
        let mut live_ops = Vec::new();
        let mut value = if p.negative { -1.0 } else { 1.0 };
        for (w, op) in &p.ops {
            if self.live.position(w).is_some() {
                live_ops.push((w.clone(), *op));
                continue;
            }
            let [a, b] = self
                .parked
                .get(w)
                .copied()
                .unwrap_or([c(1.0, 0.0), c(0.0, 0.0)]);
            let norm = a.norm_sqr() + b.norm_sqr();
            let cross = a.conj() * b;
            value *= match op {
                Pauli::Z => (a.norm_sqr() - b.norm_sqr()) / norm,
                Pauli::X => 2.0 * cross.re / norm,
                Pauli::Y => 2.0 * cross.im / norm,
            };
        }
        if !live_ops.is_empty() {
            value *= self.live.expectation(&PauliString::new(live_ops))?;
        }
        Ok(value)
    }

    fn ensure_live(&mut self, w: &Wire) -> Result<usize, SimError> {
        if let Some(p) = self.live.position(w) {
            return Ok(p);
        }
        if self.live.num_qubits() >= self.cap {
            return Err(SimError::CapExceeded {
                needed: self.live.num_qubits() + 1,
                cap: self.cap,
            });
        }
        let v = self.parked.remove(w).unwrap_or([c(1.0, 0.0), c(0.0, 0.0)]);
        self.live.push_qubit(w.clone(), v);
        Ok(self.live.num_qubits() - 1)
    }

    fn apply_single(&mut self, w: &Wire, m: &Mat2) {
        match self.live.position(w) {
            Some(p) => self.live.apply_1q(p, m),
            None => {
                let v = self
                    .parked
                    .entry(w.clone())
                    .or_insert([c(1.0, 0.0), c(0.0, 0.0)]);
                *v = apply_mat(m, *v);
            }
        }
    }

    /// Probability that measuring `w` in Z gives 1.
    fn prob_one(&self, w: &Wire) -> f64 {
        match self.live.position(w) {
            Some(p) => self.live.prob_one(p),
            None => self.parked.get(w).map_or(0.0, |v| {
                v[1].norm_sqr() / (v[0].norm_sqr() + v[1].norm_sqr())
            }),
        }
    }

    /// Collapses `w` onto `bit` and parks it. Returns the branch probability.
    fn collapse(&mut self, w: &Wire, bit: bool) {
        if let Some(p) = self.live.position(w) {
            self.live.project_out(p, bit);
        }
        let v = if bit {
            [c(0.0, 0.0), c(1.0, 0.0)]
        } else {
            [c(1.0, 0.0), c(0.0, 0.0)]
        };
        self.parked.insert(w.clone(), v);
    }

    /// Replaces the state of `w`. The qubit must not be entangled with the
    /// rest of the register.
    fn reset(&mut self, w: &Wire, plus: bool) -> Result<(), SimError> {
        if let Some(p) = self.live.position(w) {
            self.live
                .factor_out(p)
                .ok_or_else(|| SimError::IndeterminateReset(w.clone()))?;
        }
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let v = if plus {
            [c(s, 0.0), c(s, 0.0)]
        } else {
            [c(1.0, 0.0), c(0.0, 0.0)]
        };
        self.parked.insert(w.clone(), v);
        Ok(())
    }

    /// If `gate` is a measurement, rotates into its basis and returns the
    /// probability of reading 1.
    fn pre_measure(&mut self, gate: &Gate) -> Option<f64> {
        match gate {
            Gate::MeasureZ(w, _) => Some(self.prob_one(w)),
            Gate::MeasureX(w, _) => {
                self.apply_single(w, &mat_h());
                Some(self.prob_one(w))
            }
            _ => None,
        }
    }

    fn finish_measure(&mut self, gate: &Gate, bit: bool) -> Result<(), SimError> {
        let (w, name, x_basis) = match gate {
            Gate::MeasureZ(w, n) => (w, n, false),
            Gate::MeasureX(w, n) => (w, n, true),
            _ => unreachable!("called on measurements only"),
        };
        let prob = if bit {
            self.prob_one(w)
        } else {
            1.0 - self.prob_one(w)
        };
        if prob < PROB_EPS {
            return Err(SimError::ImpossibleBranch {
                outcome: name.clone(),
                probability: prob,
            });
        }
        self.collapse(w, bit);
        if x_basis {
            self.apply_single(w, &mat_h());
        }
        self.probability *= prob;
        self.outcomes.insert(name.clone(), bit);
        Ok(())
    }

    /// Applies a non-measurement gate.
    fn apply_unitary_or_classical(&mut self, gate: &Gate) -> Result<(), SimError> {
        match gate {
            Gate::H(w) => self.apply_single(w, &mat_h()),
            Gate::X(w) => self.apply_single(w, &mat_x()),
            Gate::Z(w) => self.apply_single(w, &mat_z()),
            Gate::S(w) => self.apply_single(w, &mat_s()),
            Gate::Rz(w, t) => self.apply_single(w, &mat_rz(*t)),
            Gate::Rx(w, t) => self.apply_single(w, &mat_rx(*t)),
            Gate::Cnot(a, b) => {
                let (pa, pb) = (self.ensure_live(a)?, self.ensure_live(b)?);
                self.live.apply_cnot(pa, pb);
            }
            Gate::Cz(a, b) => {
                let (pa, pb) = (self.ensure_live(a)?, self.ensure_live(b)?);
                self.live.apply_controlled_phase(pa, pb, c(-1.0, 0.0));
            }
            Gate::Cp(a, b, phi) => {
                let (pa, pb) = (self.ensure_live(a)?, self.ensure_live(b)?);
                self.live
                    .apply_controlled_phase(pa, pb, C64::from_polar(1.0, *phi));
            }
            Gate::Reset0(w) => self.reset(w, false)?,
            Gate::ResetPlus(w) => self.reset(w, true)?,
            Gate::CondX(w, cond) | Gate::CondZ(w, cond) => {
                let fire = cond
                    .evaluate(|n| self.outcomes.get(n))
                    .map_err(|n| SimError::UnknownOutcome(n.to_string()))?;
                if fire {
                    let m = if matches!(gate, Gate::CondX(..)) {
                        mat_x()
                    } else {
                        mat_z()
                    };
                    self.apply_single(w, &m);
                }
            }
            Gate::MeasureZ(..) | Gate::MeasureX(..) => {
                unreachable!("measurements handled separately")
            }
        }
        Ok(())
    }

    /// Applies one gate, choosing measurement outcomes with `decide`, which
    /// receives the probability of reading 1.
    pub fn apply<F>(&mut self, gate: &Gate, decide: F) -> Result<(), SimError>
    where
        F: FnOnce(&str, f64) -> Result<bool, SimError>,
    {
        match self.pre_measure(gate) {
            Some(p1) => {
                let bit = decide(gate.outcome().expect("measurement has a name"), p1)?;
                self.finish_measure(gate, bit)
            }
            None => self.apply_unitary_or_classical(gate),
        }
    }

    /// The joint state of `wires`. Every other live wire must be separable
    /// from them; it is factored out and discarded.
    pub fn state_on(&self, wires: &[Wire]) -> Result<StateVector, SimError> {
        let mut live = self.live.clone();
        let extra: Vec<Wire> = live
            .wires()
            .iter()
            .filter(|w| !wires.contains(w))
            .cloned()
            .collect();
        for w in extra {
            let p = live.position(&w).expect("listed above");
            live.factor_out(p).ok_or(SimError::NotSeparable(w))?;
        }
        for w in wires {
            if live.position(w).is_none() {
                let v = self
                    .parked
                    .get(w)
                    .copied()
                    .unwrap_or([c(1.0, 0.0), c(0.0, 0.0)]);
                live.push_qubit(w.clone(), v);
            }
        }
        live.reorder(wires)
    }
}

/// Final simulator state of one branch.
#[derive(Clone, Debug)]
pub struct Run {
    pub sim: Simulator,
}

impl Run {
    pub fn outcomes(&self) -> &Outcomes {
        self.sim.outcomes()
    }

    pub fn probability(&self) -> f64 {
        self.sim.probability()
    }

    pub fn state_on(&self, wires: &[Wire]) -> Result<StateVector, SimError> {
        self.sim.state_on(wires)
    }
}

/// Runs `circuit` on `initial` (wires not in `initial` start in |0>).
pub fn run_statevector(
    circuit: &Circuit,
    initial: &StateVector,
    policy: &OutcomePolicy,
    config: &SimConfig,
) -> Result<Run, SimError> {
    run_statevector_with(circuit, initial, policy, config, |_, _| {})
}

/// As [`run_statevector`], calling `observe(k, sim)` after gate `k`.
pub fn run_statevector_with<F>(
    circuit: &Circuit,
    initial: &StateVector,
    policy: &OutcomePolicy,
    config: &SimConfig,
    mut observe: F,
) -> Result<Run, SimError>
where
    F: FnMut(usize, &Simulator),
{
    let mut sim = Simulator::new(initial.clone(), config)?;
    match policy {
        OutcomePolicy::Random(seed) => {
            let mut rng = ChaCha8Rng::seed_from_u64(*seed);
            for (k, g) in circuit.gates().iter().enumerate() {
                sim.apply(g, |_, p1| {
                    Ok(if p1 < PROB_EPS {
                        false
                    } else if p1 > 1.0 - PROB_EPS {
                        true
                    } else {
                        rng.random::<f64>() < p1
                    })
                })?;
                observe(k, &sim);
            }
        }
        OutcomePolicy::Forced(bits) => {
            if bits.len() != circuit.num_measurements() {
                return Err(SimError::ForcedLength {
                    expected: circuit.num_measurements(),
                    got: bits.len(),
                });
            }
            let mut next = bits.iter().copied();
            for (k, g) in circuit.gates().iter().enumerate() {
                sim.apply(g, |_, _| Ok(next.next().expect("length checked")))?;
                observe(k, &sim);
            }
        }
    }
    Ok(Run { sim })
}

/// One complete outcome branch.
#[derive(Clone, Debug)]
pub struct Branch {
    pub bits: Vec<bool>,
    pub probability: f64,
    pub run: Run,
}

/// Every branch with probability above 1e-12, sorted by outcome bits.
pub fn enumerate_branches(
    circuit: &Circuit,
    initial: &StateVector,
    config: &SimConfig,
) -> Result<Vec<Branch>, SimError> {
    enumerate_branches_with(circuit, initial, config, |_, _| {})
}

/// As [`enumerate_branches`], calling `observe(k, sim)` after gate `k` once
/// for every distinct partial branch.
pub fn enumerate_branches_with<F>(
    circuit: &Circuit,
    initial: &StateVector,
    config: &SimConfig,
    mut observe: F,
) -> Result<Vec<Branch>, SimError>
where
    F: FnMut(usize, &Simulator),
{
    let count = circuit.num_measurements();
    if count > config.max_enumerated_measurements {
        return Err(SimError::TooManyMeasurements {
            count,
            limit: config.max_enumerated_measurements,
        });
    }
    let gates = circuit.gates();
    let mut out = Vec::new();
    let mut stack = vec![(0usize, Simulator::new(initial.clone(), config)?)];
    while let Some((start, mut sim)) = stack.pop() {
        let mut g = start;
        while g < gates.len() {
            match sim.pre_measure(&gates[g]) {
                None => sim.apply_unitary_or_classical(&gates[g])?,
                Some(p1) => {
                    if (PROB_EPS..=1.0 - PROB_EPS).contains(&p1) {
                        let mut other = sim.clone();
                        other.finish_measure(&gates[g], true)?;
                        observe(g, &other);
                        stack.push((g + 1, other));
                        sim.finish_measure(&gates[g], false)?;
                    } else {
                        sim.finish_measure(&gates[g], p1 > 0.5)?;
                    }
                }
            }
            observe(g, &sim);
            g += 1;
        }
        let bits = sim.outcomes().bits();
        out.push(Branch {
            bits,
            probability: sim.probability(),
            run: Run { sim },
        });
    }
    out.sort_by(|a, b| a.bits.cmp(&b.bits));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::Condition;
    use crate::sim::same_state_up_to_global_phase;

    fn w(s: &str) -> Wire {
        s.parse().unwrap()
    }

    fn circuit(wires: &[&str], gates: Vec<Gate>) -> Circuit {
        let mut c = Circuit::with_wires(wires.iter().map(|s| w(s)));
        for g in gates {
            c.push(g).unwrap();
        }
        c
    }

    #[test]
    fn x_flips_zero() {
        let c = circuit(&["(0)"], vec![Gate::X(w("(0)"))]);
        let init = StateVector::zero(vec![w("(0)")]);
        let run =
            run_statevector(&c, &init, &OutcomePolicy::Random(0), &SimConfig::default()).unwrap();
        let s = run.state_on(&[w("(0)")]).unwrap();
        assert!((s.amplitudes()[1] - c64(1.0)).norm() < 1e-12);
    }

    fn c64(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    #[test]
    fn measuring_plus_gives_two_half_branches() {
        let c = circuit(
            &["(0)"],
            vec![Gate::H(w("(0)")), Gate::MeasureZ(w("(0)"), "m".into())],
        );
        let init = StateVector::zero(vec![w("(0)")]);
        let branches = enumerate_branches(&c, &init, &SimConfig::default()).unwrap();
        assert_eq!(branches.len(), 2);
        for b in &branches {
            assert!((b.probability - 0.5).abs() < 1e-12);
        }
        let none = circuit(&["(0)"], vec![Gate::H(w("(0)"))]);
        let one = enumerate_branches(&none, &init, &SimConfig::default()).unwrap();
        assert_eq!(one.len(), 1);
        assert!((one[0].probability - 1.0).abs() < 1e-12);
    }

    #[test]
    fn teleport_fragment_is_branch_independent() {
        // control |psi>, target |+>, ancilla |0>: CNOT(c,a), CNOT(t,a) measure a,
        // correct with X on t: the target ends up carrying the parity with c
        let psi = [c(0.6, 0.0), c(0.0, 0.8)];
        let init = StateVector::product(
            vec![w("(0)"), w("(0,1)"), w("a0")],
            &[psi, [c64(1.0), c64(1.0)], [c64(1.0), c64(0.0)]],
        )
        .unwrap();
        let c = circuit(
            &["(0)", "(0,1)", "a0"],
            vec![
                Gate::Cnot(w("(0)"), w("a0")),
                Gate::Cnot(w("(0,1)"), w("a0")),
                Gate::MeasureZ(w("a0"), "m".into()),
                Gate::CondX(w("(0,1)"), Condition::single("m")),
            ],
        );
        let branches = enumerate_branches(&c, &init, &SimConfig::default()).unwrap();
        assert_eq!(branches.len(), 2);
        let wires = [w("(0)"), w("(0,1)")];
        let a = branches[0].run.state_on(&wires).unwrap();
        let b = branches[1].run.state_on(&wires).unwrap();
        assert!(same_state_up_to_global_phase(&a, &b, 1e-12).unwrap().0);
        // 0.6|00> + 0.8i|11>
        assert!((a.amplitudes()[0].norm() - 0.6).abs() < 1e-12);
        assert!((a.amplitudes()[3].norm() - 0.8).abs() < 1e-12);
        // the ancilla was released back to a parked basis state
        assert_eq!(branches[0].run.sim.live_qubits(), 2);
    }

    #[test]
    fn forced_policy_checks_length_and_probability() {
        let c = circuit(&["(0)"], vec![Gate::MeasureZ(w("(0)"), "m".into())]);
        let init = StateVector::zero(vec![w("(0)")]);
        let cfg = SimConfig::default();
        assert!(matches!(
            run_statevector(&c, &init, &OutcomePolicy::Forced(vec![]), &cfg),
            Err(SimError::ForcedLength { .. })
        ));
        assert!(matches!(
            run_statevector(&c, &init, &OutcomePolicy::Forced(vec![true]), &cfg),
            Err(SimError::ImpossibleBranch { .. })
        ));
        assert!(run_statevector(&c, &init, &OutcomePolicy::Forced(vec![false]), &cfg).is_ok());
    }

    #[test]
    fn cap_counts_live_qubits_only() {
        let mut gates = Vec::new();
        for k in 0..6 {
            gates.push(Gate::Reset0(Wire::Ancilla(k)));
            gates.push(Gate::Cnot(w("(0)"), Wire::Ancilla(k)));
            gates.push(Gate::MeasureZ(Wire::Ancilla(k), format!("m{k}")));
        }
        let mut c = Circuit::with_wires([w("(0)")]);
        for k in 0..6 {
            c.declare(Wire::Ancilla(k));
        }
        for g in gates {
            c.push(g).unwrap();
        }
        let init = StateVector::zero(vec![w("(0)")]);
        let tight = SimConfig {
            max_qubits: 2,
            ..SimConfig::default()
        };
        assert!(run_statevector(&c, &init, &OutcomePolicy::Random(1), &tight).is_ok());
        let too_tight = SimConfig {
            max_qubits: 1,
            ..SimConfig::default()
        };
        assert!(matches!(
            run_statevector(&c, &init, &OutcomePolicy::Random(1), &too_tight),
            Err(SimError::CapExceeded { needed: 2, cap: 1 })
        ));
    }

    #[test]
    fn reset_of_product_qubit_is_allowed() {
        let c = circuit(
            &["(0)", "(1)"],
            vec![
                Gate::H(w("(0)")),
                Gate::Cz(w("(0)"), w("(1)")),
                Gate::ResetPlus(w("(1)")),
            ],
        );
        let init = StateVector::zero(vec![w("(0)"), w("(1)")]);
        let run =
            run_statevector(&c, &init, &OutcomePolicy::Random(0), &SimConfig::default()).unwrap();
        assert_eq!(run.sim.live_qubits(), 1);
    }

    #[test]
    fn reset_of_entangled_qubit_fails() {
        let c = circuit(
            &["(0)", "(1)"],
            vec![
                Gate::H(w("(0)")),
                Gate::Cnot(w("(0)"), w("(1)")),
                Gate::Reset0(w("(1)")),
            ],
        );
        let init = StateVector::zero(vec![w("(0)"), w("(1)")]);
        let err = run_statevector(&c, &init, &OutcomePolicy::Random(0), &SimConfig::default())
            .unwrap_err();
        assert_eq!(err, SimError::IndeterminateReset(w("(1)")));
    }

    #[test]
    fn expectation_spans_live_and_parked() {
        let c = circuit(
            &["(0)", "(1)", "(2)"],
            vec![
                Gate::H(w("(0)")),
                Gate::Cnot(w("(0)"), w("(1)")),
                Gate::ResetPlus(w("(2)")),
                Gate::S(w("(2)")),
            ],
        );
        let init = StateVector::zero(vec![]);
        let run =
            run_statevector(&c, &init, &OutcomePolicy::Random(0), &SimConfig::default()).unwrap();
        let ps =
            |ops: &[(&str, Pauli)]| PauliString::new(ops.iter().map(|(s, p)| (w(s), *p)).collect());
        let e = run
            .sim
            .expectation(&ps(&[
                ("(0)", Pauli::X),
                ("(1)", Pauli::X),
                ("(2)", Pauli::Y),
            ]))
            .unwrap();
        assert!((e - 1.0).abs() < 1e-12);
        assert!(
            run.sim
                .expectation(&ps(&[("(2)", Pauli::X)]))
                .unwrap()
                .abs()
                < 1e-12
        );
        assert!((run.sim.expectation(&ps(&[("a9", Pauli::Z)])).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn enumeration_limit() {
        let mut c = Circuit::with_wires([w("(0)")]);
        for k in 0..13 {
            c.push(Gate::MeasureX(w("(0)"), format!("m{k}"))).unwrap();
        }
        let init = StateVector::zero(vec![w("(0)")]);
        assert!(matches!(
            enumerate_branches(&c, &init, &SimConfig::default()),
            Err(SimError::TooManyMeasurements {
                count: 13,
                limit: 12
            })
        ));
    }

    #[test]
    fn env_override() {
        // parsing only; the variable itself is left untouched for other tests
        assert_eq!(SimConfig::default().max_qubits, 20);
        assert!("x".parse::<usize>().is_err());
    }
}
