use num_complex::Complex64 as C64;
use serde::Serialize;

use super::{Pauli, PauliString, SimError};
use crate::circuit::Wire;

pub(crate) type Mat2 = [[C64; 2]; 2];

const FRAC_1_SQRT_2: f64 = std::f64::consts::FRAC_1_SQRT_2;

pub(crate) fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub(crate) fn mat_h() -> Mat2 {
    let s = c(FRAC_1_SQRT_2, 0.0);
    [[s, s], [s, -s]]
}

pub(crate) fn mat_x() -> Mat2 {
    [[c(0.0, 0.0), c(1.0, 0.0)], [c(1.0, 0.0), c(0.0, 0.0)]]
}

pub(crate) fn mat_y() -> Mat2 {
    [[c(0.0, 0.0), c(0.0, -1.0)], [c(0.0, 1.0), c(0.0, 0.0)]]
}

pub(crate) fn mat_z() -> Mat2 {
    [[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(-1.0, 0.0)]]
}

pub(crate) fn mat_s() -> Mat2 {
    [[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(0.0, 1.0)]]
}

pub(crate) fn mat_rz(theta: f64) -> Mat2 {
    [
        [C64::from_polar(1.0, -theta / 2.0), c(0.0, 0.0)],
        [c(0.0, 0.0), C64::from_polar(1.0, theta / 2.0)],
    ]
}

pub(crate) fn mat_rx(theta: f64) -> Mat2 {
    let (s, co) = (theta / 2.0).sin_cos();
    [[c(co, 0.0), c(0.0, -s)], [c(0.0, -s), c(co, 0.0)]]
}

pub(crate) fn apply_mat(m: &Mat2, v: [C64; 2]) -> [C64; 2] {
    [
        m[0][0] * v[0] + m[0][1] * v[1],
        m[1][0] * v[0] + m[1][1] * v[1],
    ]
}

/// Dense amplitudes over an ordered wire list. Wire `k` is bit `k` of the
/// basis index (little-endian).
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    wires: Vec<Wire>,
    amps: Vec<C64>,
}

impl StateVector {
    /// |0...0>
    pub fn zero(wires: Vec<Wire>) -> Self {
        let mut amps = vec![C64::new(0.0, 0.0); 1 << wires.len()];
        amps[0] = C64::new(1.0, 0.0);
        Self { wires, amps }
    }

    pub fn basis(wires: Vec<Wire>, index: usize) -> Self {
        let mut s = Self::zero(wires);
        s.amps[0] = C64::new(0.0, 0.0);
        s.amps[index] = C64::new(1.0, 0.0);
        s
    }

    /// Tensor product of normalized single-qubit states, `factors[k]` on
    /// `wires[k]`.
    pub fn product(wires: Vec<Wire>, factors: &[[C64; 2]]) -> Result<Self, SimError> {
        if factors.len() != wires.len() {
            return Err(SimError::DimensionMismatch {
                expected: wires.len(),
                got: factors.len(),
            });
        }
        let mut amps = vec![C64::new(1.0, 0.0)];
        for f in factors {
            let norm = (f[0].norm_sqr() + f[1].norm_sqr()).sqrt();
            if norm < 1e-12 {
                return Err(SimError::BadState("zero single-qubit factor".into()));
            }
            let mut next = Vec::with_capacity(amps.len() * 2);
            next.extend(amps.iter().map(|a| a * f[0] / norm));
            next.extend(amps.iter().map(|a| a * f[1] / norm));
            amps = next;
        }
        Ok(Self { wires, amps })
    }

    /// Wraps raw amplitudes; they must have length `2^wires` and unit norm.
    pub fn from_amplitudes(wires: Vec<Wire>, amps: Vec<C64>) -> Result<Self, SimError> {
        if amps.len() != 1 << wires.len() {
            return Err(SimError::DimensionMismatch {
                expected: 1 << wires.len(),
                got: amps.len(),
            });
        }
        let s = Self { wires, amps };
        if (s.norm() - 1.0).abs() > 1e-9 {
            return Err(SimError::BadState(format!("norm {} is not 1", s.norm())));
        }
        Ok(s)
    }

    pub fn wires(&self) -> &[Wire] {
        &self.wires
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    pub fn num_qubits(&self) -> usize {
        self.wires.len()
    }

    pub fn position(&self, w: &Wire) -> Option<usize> {
        self.wires.iter().position(|x| x == w)
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub(crate) fn apply_1q(&mut self, p: usize, m: &Mat2) {
        let mask = 1usize << p;
        for i in 0..self.amps.len() {
            if i & mask == 0 {
                let v = apply_mat(m, [self.amps[i], self.amps[i | mask]]);
                self.amps[i] = v[0];
                self.amps[i | mask] = v[1];
            }
        }
    }

    pub(crate) fn apply_cnot(&mut self, control: usize, target: usize) {
        let (cm, tm) = (1usize << control, 1usize << target);
        for i in 0..self.amps.len() {
            if i & cm != 0 && i & tm == 0 {
                self.amps.swap(i, i | tm);
            }
        }
    }

    /// Multiplies amplitudes with both bits set by `phase`.
    pub(crate) fn apply_controlled_phase(&mut self, a: usize, b: usize, phase: C64) {
        let m = (1usize << a) | (1usize << b);
        for (i, amp) in self.amps.iter_mut().enumerate() {
            if i & m == m {
                *amp *= phase;
            }
        }
    }

    /// Probability that bit `p` reads 1.
    pub(crate) fn prob_one(&self, p: usize) -> f64 {
        let mask = 1usize << p;
        self.amps
            .iter()
            .enumerate()
            .filter(|(i, _)| i & mask != 0)
            .map(|(_, a)| a.norm_sqr())
            .sum()
    }

    /// Amplitudes with bit `p` fixed to `bit`, that bit removed from the index.
    pub(crate) fn slice(&self, p: usize, bit: bool) -> Vec<C64> {
        let low = (1usize << p) - 1;
        (0..self.amps.len() / 2)
            .map(|k| {
                let old = ((k & !low) << 1) | (usize::from(bit) << p) | (k & low);
                self.amps[old]
            })
            .collect()
    }

    /// Drops qubit `p`, keeping the (renormalized) branch where it reads `bit`.
    pub(crate) fn project_out(&mut self, p: usize, bit: bool) -> f64 {
        let mut amps = self.slice(p, bit);
        let prob: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
        let scale = 1.0 / prob.sqrt();
        for a in &mut amps {
            *a *= scale;
        }
        self.amps = amps;
        self.wires.remove(p);
        prob
    }

    /// Appends `w` as the new highest bit in single-qubit state `v`.
    pub(crate) fn push_qubit(&mut self, w: Wire, v: [C64; 2]) {
        let mut amps = Vec::with_capacity(self.amps.len() * 2);
        amps.extend(self.amps.iter().map(|a| a * v[0]));
        amps.extend(self.amps.iter().map(|a| a * v[1]));
        self.amps = amps;
        self.wires.push(w);
    }

    /// Removes qubit `p` if the state factors as `rest ⊗ q`; returns `q`.
    pub(crate) fn factor_out(&mut self, p: usize) -> Option<[C64; 2]> {
        let a0 = self.slice(p, false);
        let a1 = self.slice(p, true);
        let n0: f64 = a0.iter().map(|a| a.norm_sqr()).sum();
        let n1: f64 = a1.iter().map(|a| a.norm_sqr()).sum();
        let (big, small, big_is_one) = if n0 >= n1 {
            (a0, a1, false)
        } else {
            (a1, a0, true)
        };
        let nb = n0.max(n1).sqrt();
        let rest: Vec<C64> = big.iter().map(|a| a / nb).collect();
        let coef: C64 = rest.iter().zip(&small).map(|(r, s)| r.conj() * s).sum();
        let residual: f64 = rest
            .iter()
            .zip(&small)
            .map(|(r, s)| (s - coef * r).norm_sqr())
            .sum();
        if residual > 1e-12 {
            return None;
        }
        self.amps = rest;
        self.wires.remove(p);
        Some(if big_is_one {
            [coef, C64::new(nb, 0.0)]
        } else {
            [C64::new(nb, 0.0), coef]
        })
    }

    /// The same state with wires listed in `order` (a permutation).
    pub fn reorder(&self, order: &[Wire]) -> Result<StateVector, SimError> {
        if order.len() != self.wires.len() {
            return Err(SimError::WireMismatch(format!(
                "{:?} vs {:?}",
                order, self.wires
            )));
        }
        let src: Vec<usize> = order
            .iter()
            .map(|w| {
                self.position(w)
                    .ok_or_else(|| SimError::WireMismatch(format!("{w} not in state")))
            })
            .collect::<Result<_, _>>()?;
        let mut amps = vec![C64::new(0.0, 0.0); self.amps.len()];
        for (i, a) in amps.iter_mut().enumerate() {
            let mut old = 0;
            for (k, &s) in src.iter().enumerate() {
                old |= ((i >> k) & 1) << s;
            }
            *a = self.amps[old];
        }
        Ok(StateVector {
            wires: order.to_vec(),
            amps,
        })
    }

    /// `<self|other>`; `other` is reordered to match if needed.
    pub fn inner(&self, other: &StateVector) -> Result<C64, SimError> {
        let other = if other.wires == self.wires {
            other.clone()
        } else {
            other.reorder(&self.wires)?
        };
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// `<P>` for a Pauli string on wires of this state.
    pub fn expectation(&self, p: &PauliString) -> Result<f64, SimError> {
        let mut t = self.clone();
        for (w, op) in &p.ops {
            let pos = self
                .position(w)
                .ok_or_else(|| SimError::WireMismatch(format!("{w} not in state")))?;
            let m = match op {
                Pauli::X => mat_x(),
                Pauli::Y => mat_y(),
                Pauli::Z => mat_z(),
            };
            t.apply_1q(pos, &m);
        }
        let v = self.inner(&t)?.re;
        Ok(if p.negative { -v } else { v })
    }

    /// `(basis index, re, im)` for every amplitude above `threshold` in
    /// magnitude.
    pub fn dump(&self, threshold: f64) -> Vec<AmplitudeEntry> {
        self.amps
            .iter()
            .enumerate()
            .filter(|(_, a)| a.norm() > threshold)
            .map(|(i, a)| AmplitudeEntry(i, a.re, a.im))
            .collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct AmplitudeEntry(pub usize, pub f64, pub f64);

/// Compares two states up to a global phase: equal when `|<a|b>| >= 1 - tol`.
/// Also returns the fidelity `|<a|b>|^2`.
pub fn same_state_up_to_global_phase(
    a: &StateVector,
    b: &StateVector,
    tol: f64,
) -> Result<(bool, f64), SimError> {
    if a.num_qubits() != b.num_qubits() {
        return Err(SimError::DimensionMismatch {
            expected: a.amps.len(),
            got: b.amps.len(),
        });
    }
    let overlap = a.inner(b)?.norm();
    Ok((overlap >= 1.0 - tol, overlap * overlap))
}
