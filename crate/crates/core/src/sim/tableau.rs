//! Stabilizer tableau with destabilizers for Clifford circuits.
//!
//! Rows store `x`, `z` bits per wire and a sign bit; `(x, z) = (1, 1)`
//! stands for Y.

use std::collections::HashMap;
use std::f64::consts::FRAC_PI_2;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{OutcomePolicy, Pauli, PauliString, SimError};
use crate::circuit::{Circuit, Gate, Outcomes, Wire};

#[derive(Clone, Debug, PartialEq, Eq)]
struct Row {
    x: Vec<bool>,
    z: Vec<bool>,
    r: bool,
}

impl Row {
    fn identity(n: usize) -> Self {
        Self {
            x: vec![false; n],
            z: vec![false; n],
            r: false,
        }
    }

    fn anticommutes(&self, other: &Row) -> bool {
        let mut s = false;
        for j in 0..self.x.len() {
            s ^= (self.x[j] & other.z[j]) ^ (self.z[j] & other.x[j]);
        }
        s
    }

    /// `self <- other * self`, tracking the sign.
    fn mul_assign(&mut self, other: &Row) {
        let mut phase: i32 = 2 * (self.r as i32) + 2 * (other.r as i32);
        for j in 0..self.x.len() {
            phase += g(other.x[j], other.z[j], self.x[j], self.z[j]);
            self.x[j] ^= other.x[j];
            self.z[j] ^= other.z[j];
        }
        let phase = phase.rem_euclid(4);
        debug_assert!(phase == 0 || phase == 2, "product of commuting rows");
        self.r = phase == 2;
    }
}

/// Exponent of i picked up when multiplying the single-qubit Paulis
/// `(x1, z1) * (x2, z2)`.
fn g(x1: bool, z1: bool, x2: bool, z2: bool) -> i32 {
    let (x2, z2) = (x2 as i32, z2 as i32);
    match (x1, z1) {
        (false, false) => 0,
        (true, true) => z2 - x2,
        (true, false) => z2 * (2 * x2 - 1),
        (false, true) => x2 * (1 - 2 * z2),
    }
}

/// Stabilizer state over a set of named wires.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tableau {
    wires: Vec<Wire>,
    index: HashMap<Wire, usize>,
    destab: Vec<Row>,
    stab: Vec<Row>,
}

impl Tableau {
    /// |0...0> on `wires`.
    pub fn zero(wires: Vec<Wire>) -> Self {
        let mut t = Self {
            wires: Vec::new(),
            index: HashMap::new(),
            destab: Vec::new(),
            stab: Vec::new(),
        };
        for w in wires {
            t.add_wire(w);
        }
        t
    }

    pub fn wires(&self) -> &[Wire] {
        &self.wires
    }

    pub fn num_qubits(&self) -> usize {
        self.wires.len()
    }

    /// Adds `w` in |0> if it is not present yet.
    pub fn add_wire(&mut self, w: Wire) -> usize {
        if let Some(&i) = self.index.get(&w) {
            return i;
        }
        let n = self.wires.len();
        for row in self.destab.iter_mut().chain(self.stab.iter_mut()) {
            row.x.push(false);
            row.z.push(false);
        }
        let mut d = Row::identity(n + 1);
        d.x[n] = true;
        let mut s = Row::identity(n + 1);
        s.z[n] = true;
        self.destab.push(d);
        self.stab.push(s);
        self.index.insert(w.clone(), n);
        self.wires.push(w);
        n
    }

    fn idx(&mut self, w: &Wire) -> usize {
        self.add_wire(w.clone())
    }

    fn rows_mut(&mut self) -> impl Iterator<Item = &mut Row> {
        self.destab.iter_mut().chain(self.stab.iter_mut())
    }

    pub fn h(&mut self, w: &Wire) {
        let a = self.idx(w);
        for row in self.rows_mut() {
            row.r ^= row.x[a] & row.z[a];
            std::mem::swap(&mut row.x[a], &mut row.z[a]);
        }
    }

    pub fn s(&mut self, w: &Wire) {
        let a = self.idx(w);
        for row in self.rows_mut() {
            row.r ^= row.x[a] & row.z[a];
            row.z[a] ^= row.x[a];
        }
    }

    pub fn x(&mut self, w: &Wire) {
        let a = self.idx(w);
        for row in self.rows_mut() {
            row.r ^= row.z[a];
        }
    }

    pub fn z(&mut self, w: &Wire) {
        let a = self.idx(w);
        for row in self.rows_mut() {
            row.r ^= row.x[a];
        }
    }

    pub fn cnot(&mut self, control: &Wire, target: &Wire) {
        let (a, b) = (self.idx(control), self.idx(target));
        for row in self.rows_mut() {
            row.r ^= row.x[a] & row.z[b] & !(row.x[b] ^ row.z[a]);
            row.x[b] ^= row.x[a];
            row.z[a] ^= row.z[b];
        }
    }

    pub fn cz(&mut self, a: &Wire, b: &Wire) {
        self.h(b);
        self.cnot(a, b);
        self.h(b);
    }

    /// Z measurement. `choose` is called only for random outcomes; a
    /// deterministic outcome is returned as is. The flag reports whether
    /// the outcome was random.
    pub fn measure_z<F: FnOnce() -> bool>(&mut self, w: &Wire, choose: F) -> (bool, bool) {
        let a = self.idx(w);
        let n = self.num_qubits();
        if let Some(p) = self.stab.iter().position(|row| row.x[a]) {
            let pivot = self.stab[p].clone();
            for (i, row) in self.destab.iter_mut().enumerate() {
                if i != p && row.x[a] {
                    row.mul_assign(&pivot);
                }
            }
            for (i, row) in self.stab.iter_mut().enumerate() {
                if i != p && row.x[a] {
                    row.mul_assign(&pivot);
                }
            }
            let bit = choose();
            self.destab[p] = pivot;
            let mut zrow = Row::identity(n);
            zrow.z[a] = true;
            zrow.r = bit;
            self.stab[p] = zrow;
            (bit, true)
        } else {
            let mut acc = Row::identity(n);
            for i in 0..n {
                if self.destab[i].x[a] {
                    acc.mul_assign(&self.stab[i]);
                }
            }
            (acc.r, false)
        }
    }

    /// Resets `w` to |0>. A random qubit is projected onto 0.
    pub fn reset_zero(&mut self, w: &Wire) {
        let (bit, _) = self.measure_z(w, || false);
        if bit {
            self.x(w);
        }
    }

    fn row_of(&mut self, p: &PauliString) -> Row {
        for (w, _) in &p.ops {
            self.idx(w);
        }
        let mut row = Row::identity(self.num_qubits());
        row.r = p.negative;
        for (w, op) in &p.ops {
            let j = self.index[w];
            let (x, z) = match op {
                Pauli::X => (true, false),
                Pauli::Z => (false, true),
                Pauli::Y => (true, true),
            };
            // repeated wires multiply; only the X/Z bits matter for the
            // commuting checks the callers make
            row.x[j] ^= x;
            row.z[j] ^= z;
        }
        row
    }

    /// `Some(negative)` if `+-p` is in the stabilizer group, `None` if
    /// neither sign is.
    pub fn sign_of(&self, p: &PauliString) -> Option<bool> {
        let mut me = self.clone();
        let row = me.row_of(p);
        if me.stab.iter().any(|s| s.anticommutes(&row)) {
            return None;
        }
        let mut acc = Row::identity(me.num_qubits());
        for (d, s) in me.destab.iter().zip(&me.stab) {
            if d.anticommutes(&row) {
                acc.mul_assign(s);
            }
        }
        if acc.x != row.x || acc.z != row.z {
            return None;
        }
        Some(acc.r ^ p.negative)
    }

    /// True when `p` itself (with its sign) stabilizes the state.
    pub fn contains(&self, p: &PauliString) -> bool {
        self.sign_of(p) == Some(false)
    }

    /// Expectation value of `p`: +1, -1 or 0.
    pub fn expectation(&self, p: &PauliString) -> f64 {
        match self.sign_of(p) {
            Some(false) => 1.0,
            Some(true) => -1.0,
            None => 0.0,
        }
    }

    /// The stabilizer generators.
    pub fn stabilizers(&self) -> Vec<PauliString> {
        self.stab
            .iter()
            .map(|row| {
                let ops = (0..self.num_qubits())
                    .filter_map(|j| {
                        let op = match (row.x[j], row.z[j]) {
                            (false, false) => return None,
                            (true, false) => Pauli::X,
                            (false, true) => Pauli::Z,
                            (true, true) => Pauli::Y,
                        };
                        Some((self.wires[j].clone(), op))
                    })
                    .collect();
                PauliString {
                    negative: row.r,
                    ops,
                }
            })
            .collect()
    }
}

/// `k` with `theta = k * pi/2`, if any.
fn quarter_turns(theta: f64) -> Option<usize> {
    let k = (theta / FRAC_PI_2).round();
    ((theta - k * FRAC_PI_2).abs() < 1e-9).then(|| (k as i64).rem_euclid(4) as usize)
}

#[derive(Clone, Debug)]
pub struct StabilizerRun {
    pub tableau: Tableau,
    pub outcomes: Outcomes,
    /// Per measurement, whether its outcome was fixed by the state.
    pub deterministic: Vec<bool>,
}

/// Runs a Clifford circuit. Rotations must be multiples of pi/2 and CP
/// angles multiples of pi.
pub fn run_stabilizer(
    circuit: &Circuit,
    initial: Tableau,
    policy: &OutcomePolicy,
) -> Result<StabilizerRun, SimError> {
    let mut t = initial;
    let mut outcomes = Outcomes::new();
    let mut deterministic = Vec::new();
    let mut rng = match policy {
        OutcomePolicy::Random(seed) => Some(ChaCha8Rng::seed_from_u64(*seed)),
        OutcomePolicy::Forced(bits) => {
            if bits.len() != circuit.num_measurements() {
                return Err(SimError::ForcedLength {
                    expected: circuit.num_measurements(),
                    got: bits.len(),
                });
            }
            None
        }
    };
    for w in circuit.wires() {
        t.add_wire(w.clone());
    }
    for gate in circuit.gates() {
        match gate {
            Gate::H(w) => t.h(w),
            Gate::X(w) => t.x(w),
            Gate::Z(w) => t.z(w),
            Gate::S(w) => t.s(w),
            Gate::Rz(w, theta) => {
                let k = quarter_turns(*theta).ok_or(SimError::UnsupportedGate("RZ"))?;
                (0..k).for_each(|_| t.s(w));
            }
            Gate::Rx(w, theta) => {
                let k = quarter_turns(*theta).ok_or(SimError::UnsupportedGate("RX"))?;
                t.h(w);
                (0..k).for_each(|_| t.s(w));
                t.h(w);
            }
            Gate::Cnot(a, b) => t.cnot(a, b),
            Gate::Cz(a, b) => t.cz(a, b),
            Gate::Cp(a, b, phi) => match quarter_turns(*phi) {
                Some(0) => {}
                Some(2) => t.cz(a, b),
                _ => return Err(SimError::UnsupportedGate("CP")),
            },
            Gate::MeasureZ(w, name) | Gate::MeasureX(w, name) => {
                let x_basis = matches!(gate, Gate::MeasureX(..));
                if x_basis {
                    t.h(w);
                }
                let k = outcomes.len();
                let forced = match policy {
                    OutcomePolicy::Forced(bits) => Some(bits[k]),
                    OutcomePolicy::Random(_) => None,
                };
                let (bit, random) = t.measure_z(w, || match forced {
                    Some(b) => b,
                    None => rng.as_mut().expect("random policy").random::<bool>(),
                });
                if let Some(b) = forced {
                    if b != bit {
                        return Err(SimError::ImpossibleBranch {
                            outcome: name.clone(),
                            probability: 0.0,
                        });
                    }
                }
                if x_basis {
                    t.h(w);
                }
                deterministic.push(!random);
                outcomes.insert(name.clone(), bit);
            }
            Gate::Reset0(w) => t.reset_zero(w),
            Gate::ResetPlus(w) => {
                t.reset_zero(w);
                t.h(w);
            }
            Gate::CondX(w, cond) | Gate::CondZ(w, cond) => {
                let fire = cond
                    .evaluate(|n| outcomes.get(n))
                    .map_err(|n| SimError::UnknownOutcome(n.to_string()))?;
                if fire {
                    if matches!(gate, Gate::CondX(..)) {
                        t.x(w)
                    } else {
                        t.z(w)
                    }
                }
            }
        }
    }
    Ok(StabilizerRun {
        tableau: t,
        outcomes,
        deterministic,
    })
}
