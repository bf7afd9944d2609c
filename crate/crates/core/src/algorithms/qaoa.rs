//! Measurement-based parity QAOA.
//!
//! Each layer encodes the full code from its readout qubits, applies the
//! problem phase as one rotation per term qubit, decodes back onto the
//! readout qubits and applies the mixer there.

use num_complex::Complex64 as C64;
use rayon::prelude::*;
use serde::Serialize;

use super::{AlgorithmError, ProblemHamiltonian, QaoaParams};
use crate::circuit::{schedule_depth, Circuit, DepthReport, Gate, Wire};
use crate::code::{ParityCode, ReadoutBasis};
use crate::codec::{compile_decode_measurement, compile_encode_measurement, Deformation};
use crate::sim::{run_statevector, OutcomePolicy, PauliString, SimConfig, StateVector};

/// Largest logical size for the dense reference simulation.
pub const REFERENCE_MAX_QUBITS: usize = 12;

/// A compiled parity QAOA circuit and the data needed to read its energy.
#[derive(Clone, Debug)]
pub struct QaoaProgram {
    pub circuit: Circuit,
    pub readout: ReadoutBasis,
    /// The problem in readout variables; equal to the input problem when
    /// the readout qubits are the data qubits.
    pub relabeled: ProblemHamiltonian,
}

impl QaoaProgram {
    pub fn readout_wires(&self) -> Vec<Wire> {
        self.readout.chosen().iter().map(Wire::code).collect()
    }

    /// `<H_P>` of the final state. Every outcome branch carries the same
    /// state, so one sampled branch suffices.
    pub fn energy(&self, seed: u64, config: &SimConfig) -> Result<f64, AlgorithmError> {
        let wires = self.readout_wires();
        let init = StateVector::zero(Vec::new());
        let run = run_statevector(&self.circuit, &init, &OutcomePolicy::Random(seed), config)?;
        let state = run.state_on(&wires)?;
        let mut e = 0.0;
        for t in &self.relabeled.terms {
            e += t.j
                * state.expectation(&PauliString::z_product(t.idx.iter().map(|&j| &wires[j])))?;
        }
        Ok(e)
    }
}

/// [`build_qaoa_circuit_with_readout`] with the code's default readout
/// basis (the data qubits when all are present).
pub fn build_qaoa_circuit(
    problem: &ProblemHamiltonian,
    params: &QaoaParams,
    code: &ParityCode,
) -> Result<QaoaProgram, AlgorithmError> {
    let basis = code
        .default_readout_basis()
        .ok_or(AlgorithmError::NoReadoutBasis)?;
    build_qaoa_circuit_with_readout(problem, params, code, &basis)
}

pub fn build_qaoa_circuit_with_readout(
    problem: &ProblemHamiltonian,
    params: &QaoaParams,
    code: &ParityCode,
    readout: &ReadoutBasis,
) -> Result<QaoaProgram, AlgorithmError> {
    params.check()?;
    if problem.n != code.n() {
        return Err(AlgorithmError::SizeMismatch {
            problem: problem.n,
            code: code.n(),
        });
    }
    for t in &problem.terms {
        if !code.contains(&t.label()) {
            return Err(AlgorithmError::MissingQubit(t.label()));
        }
    }
    if let Some(q) = readout.chosen().iter().find(|q| !code.contains(q)) {
        return Err(AlgorithmError::MissingQubit(q.clone()));
    }
    let base = ParityCode::new(code.n(), readout.chosen().to_vec(), Vec::new())?;
    let encode = Deformation::encode(&base, code)?;
    let removed: Vec<_> = code
        .qubits()
        .iter()
        .filter(|q| !base.contains(q))
        .cloned()
        .collect();
    let decode = Deformation::decode(code, &removed)?;

    let readout_wires: Vec<Wire> = readout.chosen().iter().map(Wire::code).collect();
    let mut c = Circuit::with_wires(code.qubits().iter().map(Wire::code));
    for w in &readout_wires {
        c.push(Gate::ResetPlus(w.clone()))?;
    }
    for (layer, (beta, gamma)) in params.betas.iter().zip(&params.gammas).enumerate() {
        let (enc, _) = compile_encode_measurement(&encode, &format!("L{layer}e."))?;
        c.extend(&enc)?;
        for t in &problem.terms {
            c.push(Gate::Rz(Wire::code(&t.label()), 2.0 * gamma * t.j))?;
        }
        let (dec, _) = compile_decode_measurement(&decode, &format!("L{layer}d."))?;
        c.extend(&dec)?;
        for w in &readout_wires {
            c.push(Gate::Rx(w.clone(), 2.0 * beta))?;
        }
    }
    Ok(QaoaProgram {
        circuit: c,
        readout: readout.clone(),
        relabeled: problem.relabel(readout),
    })
}

/// Depth of each constituent of one layer (encoding, `U_P`, decoding,
/// `U_X`) and of the whole layer, on the default readout basis.
pub fn qaoa_layer_breakdown(
    problem: &ProblemHamiltonian,
    code: &ParityCode,
) -> Result<Vec<(&'static str, DepthReport)>, AlgorithmError> {
    let prog = build_qaoa_circuit(problem, &QaoaParams::single(0.1, 0.1), code)?;
    let gates = prog.circuit.gates();
    let n_read = prog.readout.chosen().len();
    let rx = gates
        .iter()
        .rposition(|g| !matches!(g, Gate::Rx(..)))
        .map_or(0, |k| k + 1);
    let rz_end = gates
        .iter()
        .rposition(|g| matches!(g, Gate::Rz(..)))
        .map_or(n_read, |k| k + 1);
    let rz_start = rz_end - problem.terms.len();
    let part = |range: std::ops::Range<usize>| -> Result<DepthReport, AlgorithmError> {
        let mut c = Circuit::with_wires(prog.circuit.wires().iter().cloned());
        for g in &gates[range] {
            c.push(g.clone())?;
        }
        Ok(schedule_depth(&c))
    };
    Ok(vec![
        ("encoding", part(n_read..rz_start)?),
        ("U_P", part(rz_start..rz_end)?),
        ("decoding", part(rz_end..rx)?),
        ("U_X", part(rx..gates.len())?),
        ("total", part(n_read..gates.len())?),
    ])
}

/// One grid point of a p = 1 energy landscape.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct LandscapePoint {
    pub beta: f64,
    pub gamma: f64,
    pub parity: f64,
    pub logical: f64,
    pub delta: f64,
}

/// Parity and dense energies on a `size x size` grid over `[0, pi)^2`,
/// row-major in `beta`.
pub fn qaoa_landscape(
    problem: &ProblemHamiltonian,
    code: &ParityCode,
    size: usize,
    config: &SimConfig,
) -> Result<Vec<LandscapePoint>, AlgorithmError> {
    let step = std::f64::consts::PI / size as f64;
    let grid: Vec<(f64, f64)> = (0..size)
        .flat_map(|a| (0..size).map(move |b| (a as f64 * step, b as f64 * step)))
        .collect();
    grid.into_par_iter()
        .map(|(beta, gamma)| {
            let params = QaoaParams::single(beta, gamma);
            let parity = parity_qaoa_energy(problem, &params, code, config)?;
            let logical = reference_logical_qaoa(problem, &params)?;
            Ok(LandscapePoint {
                beta,
                gamma,
                parity,
                logical,
                delta: (parity - logical).abs(),
            })
        })
        .collect()
}

/// `<H_P>` of the parity QAOA state on `code`.
pub fn parity_qaoa_energy(
    problem: &ProblemHamiltonian,
    params: &QaoaParams,
    code: &ParityCode,
    config: &SimConfig,
) -> Result<f64, AlgorithmError> {
    build_qaoa_circuit(problem, params, code)?.energy(0, config)
}

/// `<H_P>` of `prod_j exp(-i beta_j H_X) exp(-i gamma_j H_P) |+>^n`,
/// simulated densely without any encoding.
pub fn reference_logical_qaoa(
    problem: &ProblemHamiltonian,
    params: &QaoaParams,
) -> Result<f64, AlgorithmError> {
    params.check()?;
    let n = problem.n;
    if n > REFERENCE_MAX_QUBITS {
        return Err(AlgorithmError::TooLarge {
            n,
            cap: REFERENCE_MAX_QUBITS,
        });
    }
    let dim = 1usize << n;
    let diag: Vec<f64> = (0..dim).map(|x| problem.energy_of(x)).collect();
    let mut amps = vec![C64::new((dim as f64).sqrt().recip(), 0.0); dim];
    for (beta, gamma) in params.betas.iter().zip(&params.gammas) {
        for (a, e) in amps.iter_mut().zip(&diag) {
            *a *= C64::from_polar(1.0, -gamma * e);
        }
        let (cb, sb) = (C64::new(beta.cos(), 0.0), C64::new(0.0, -beta.sin()));
        for q in 0..n {
            let m = 1usize << q;
            for x in 0..dim {
                if x & m == 0 {
                    let (a0, a1) = (amps[x], amps[x | m]);
                    amps[x] = cb * a0 + sb * a1;
                    amps[x | m] = sb * a0 + cb * a1;
                }
            }
        }
    }
    Ok(amps.iter().zip(&diag).map(|(a, e)| a.norm_sqr() * e).sum())
}

/// Best parameters found and the best-so-far energy after every evaluation.
#[derive(Clone, Debug, Serialize)]
pub struct QaoaResult {
    pub params: QaoaParams,
    pub energy: f64,
    pub trace: Vec<f64>,
}

struct Objective<'a> {
    problem: &'a ProblemHamiltonian,
    code: &'a ParityCode,
    config: SimConfig,
    budget: usize,
    trace: Vec<f64>,
}

impl Objective<'_> {
    fn left(&self) -> usize {
        self.budget - self.trace.len()
    }

    /// Energies of `points`, evaluated in parallel and recorded in order.
    fn eval(&mut self, points: &[Vec<f64>]) -> Result<Vec<f64>, AlgorithmError> {
        let (problem, code, config) = (self.problem, self.code, &self.config);
        let es: Vec<f64> = points
            .par_iter()
            .map(|x| parity_qaoa_energy(problem, &QaoaParams::from_slice(x), code, config))
            .collect::<Result<_, _>>()?;
        for e in &es {
            let best = self.trace.last().map_or(*e, |b| b.min(*e));
            self.trace.push(best);
        }
        Ok(es)
    }

    fn eval_one(&mut self, x: &[f64]) -> Result<f64, AlgorithmError> {
        Ok(self.eval(&[x.to_vec()])?[0])
    }
}

/// Start points: a 4x4 grid over `(beta, gamma)` in `(0, pi/2) x (0, pi)`,
/// repeated across layers.
fn start_grid(p: usize) -> Vec<Vec<f64>> {
    let mut out = Vec::new();
    for bi in 0..4 {
        for gi in 0..4 {
            let b = (bi as f64 + 0.5) * std::f64::consts::FRAC_PI_2 / 4.0;
            let g = (gi as f64 + 0.5) * std::f64::consts::PI / 4.0;
            out.push([vec![b; p], vec![g; p]].concat());
        }
    }
    out
}

fn lerp(a: &[f64], b: &[f64], t: f64) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x + t * (y - x)).collect()
}

/// Nelder-Mead with the standard coefficients until the budget runs out or
/// the simplex energies agree to 1e-10.
fn nelder_mead(
    obj: &mut Objective,
    start: Vec<f64>,
    start_e: f64,
) -> Result<(Vec<f64>, f64), AlgorithmError> {
    let d = start.len();
    let mut pts = vec![start.clone()];
    for k in 0..d {
        let mut v = start.clone();
        v[k] += 0.2;
        pts.push(v);
    }
    if obj.left() < d {
        return Ok((start, start_e));
    }
    let mut es = vec![start_e];
    es.extend(obj.eval(&pts[1..])?);
    loop {
        let mut order: Vec<usize> = (0..=d).collect();
        order.sort_by(|&a, &b| es[a].total_cmp(&es[b]));
        pts = order.iter().map(|&k| pts[k].clone()).collect();
        es = order.iter().map(|&k| es[k]).collect();
        if es[d] - es[0] < 1e-10 || obj.left() == 0 {
            break;
        }
        let centroid: Vec<f64> = (0..d)
            .map(|j| pts[..d].iter().map(|p| p[j]).sum::<f64>() / d as f64)
            .collect();
        let xr = lerp(&centroid, &pts[d], -1.0);
        let er = obj.eval_one(&xr)?;
        if er < es[0] {
            if obj.left() == 0 {
                (pts[d], es[d]) = (xr, er);
                continue;
            }
            let xe = lerp(&centroid, &pts[d], -2.0);
            let ee = obj.eval_one(&xe)?;
            (pts[d], es[d]) = if ee < er { (xe, ee) } else { (xr, er) };
        } else if er < es[d - 1] {
            (pts[d], es[d]) = (xr, er);
        } else {
            if obj.left() == 0 {
                break;
            }
            let (xc, ec) = if er < es[d] {
                let x = lerp(&centroid, &xr, 0.5);
                let e = obj.eval_one(&x)?;
                (x, e)
            } else {
                let x = lerp(&centroid, &pts[d], 0.5);
                let e = obj.eval_one(&x)?;
                (x, e)
            };
            if ec < es[d].min(er) {
                (pts[d], es[d]) = (xc, ec);
            } else {
                if obj.left() < d {
                    break;
                }
                let shrunk: Vec<Vec<f64>> =
                    pts[1..].iter().map(|p| lerp(&pts[0], p, 0.5)).collect();
                let se = obj.eval(&shrunk)?;
                for (k, (p, e)) in shrunk.into_iter().zip(se).enumerate() {
                    (pts[k + 1], es[k + 1]) = (p, e);
                }
            }
        }
    }
    let k = (0..=d)
        .min_by(|&a, &b| es[a].total_cmp(&es[b]))
        .expect("non-empty simplex");
    Ok((pts[k].clone(), es[k]))
}

/// Minimizes the parity QAOA energy with at most `budget` energy
/// evaluations: the start grid is evaluated in parallel, then a Nelder-Mead
/// search runs from the best grid point.
pub fn optimize_params(
    problem: &ProblemHamiltonian,
    code: &ParityCode,
    p: usize,
    budget: usize,
    config: &SimConfig,
) -> Result<QaoaResult, AlgorithmError> {
    if p == 0 {
        return Err(AlgorithmError::BadParams {
            betas: 0,
            gammas: 0,
        });
    }
    if budget == 0 {
        return Err(AlgorithmError::ZeroBudget);
    }
    let mut obj = Objective {
        problem,
        code,
        config: *config,
        budget,
        trace: Vec::new(),
    };
    let mut grid = start_grid(p);
    grid.truncate(budget);
    let energies = obj.eval(&grid)?;
    let k = (0..grid.len())
        .min_by(|&a, &b| energies[a].total_cmp(&energies[b]))
        .expect("budget >= 1");
    let (x, energy) = nelder_mead(&mut obj, grid[k].clone(), energies[k])?;
    Ok(QaoaResult {
        params: QaoaParams::from_slice(&x),
        energy,
        trace: obj.trace,
    })
}
