//! Depth accounting.
//!
//! Gates are packed greedily, in program order, into layers of a single
//! class: measurements, two-qubit gates, or single-qubit gates (conditional
//! Paulis included). Resets occupy no layer. A conditional Pauli may not
//! share or precede the layer of a measurement it reads.
//!
//! Runs of CNOTs whose controls are never targets (the constraint-measurement
//! pattern: reset ancillas, fan many data/parity controls into them, measure)
//! commute with each other, so the run is edge-coloured as a bipartite
//! multigraph and takes max-degree layers regardless of emission order.

use std::collections::{HashMap, HashSet};

use serde::{Deserialize, Serialize};

use super::{bipartite_edge_coloring, Circuit, Gate, Wire};

/// Layer counts per class. `cnot` counts CNOT-equivalents (CP weighs 2).
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DepthReport {
    pub measure: usize,
    pub cnot: usize,
    pub single: usize,
}

impl std::ops::Add for DepthReport {
    type Output = DepthReport;
    fn add(self, o: DepthReport) -> DepthReport {
        DepthReport {
            measure: self.measure + o.measure,
            cnot: self.cnot + o.cnot,
            single: self.single + o.single,
        }
    }
}

impl std::fmt::Display for DepthReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}/{}/{}", self.measure, self.cnot, self.single)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum LayerClass {
    Measure,
    TwoQubit,
    Single,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Layer {
    pub class: LayerClass,
    /// Indices into the circuit's gate list.
    pub gates: Vec<usize>,
    /// Largest two-qubit weight in the layer; 1 for other classes.
    pub weight: usize,
}

/// A layering of a circuit. `layer_of[g]` is `None` only for resets.
#[derive(Clone, Debug, PartialEq)]
pub struct Schedule {
    pub layers: Vec<Layer>,
    pub layer_of: Vec<Option<usize>>,
}

fn class_of(g: &Gate) -> Option<LayerClass> {
    match g {
        Gate::Reset0(_) | Gate::ResetPlus(_) => None,
        Gate::MeasureZ(..) | Gate::MeasureX(..) => Some(LayerClass::Measure),
        Gate::Cnot(..) | Gate::Cz(..) | Gate::Cp(..) => Some(LayerClass::TwoQubit),
        _ => Some(LayerClass::Single),
    }
}

struct Packer<'c> {
    gates: &'c [Gate],
    layers: Vec<Layer>,
    layer_of: Vec<Option<usize>>,
    last: HashMap<&'c Wire, usize>,
    produced_in: HashMap<&'c str, usize>,
}

impl<'c> Packer<'c> {
    /// Earliest admissible layer index (exclusive lower bound plus one).
    fn ready(&self, g: usize) -> usize {
        let gate = &self.gates[g];
        let mut r = gate
            .wires()
            .iter()
            .filter_map(|w| self.last.get(w))
            .map(|&l| l + 1)
            .max()
            .unwrap_or(0);
        if let Some(c) = gate.condition() {
            for n in c.names() {
                if let Some(&l) = self.produced_in.get(n) {
                    r = r.max(l + 1);
                }
            }
        }
        r
    }

    fn slot(&mut self, class: LayerClass, from: usize) -> usize {
        match (from..self.layers.len()).find(|&l| self.layers[l].class == class) {
            Some(l) => l,
            None => {
                self.layers.push(Layer {
                    class,
                    gates: Vec::new(),
                    weight: 1,
                });
                self.layers.len() - 1
            }
        }
    }

    fn put(&mut self, g: usize, layer: usize) {
        let gate = &self.gates[g];
        let l = &mut self.layers[layer];
        l.gates.push(g);
        if let Some(w) = gate.two_qubit_weight() {
            l.weight = l.weight.max(w);
        }
        for w in gate.wires() {
            self.last.insert(w, layer);
        }
        if let Some(o) = gate.outcome() {
            self.produced_in.insert(o, layer);
        }
        self.layer_of[g] = Some(layer);
    }

    fn place(&mut self, g: usize) {
        if let Some(class) = class_of(&self.gates[g]) {
            let from = self.ready(g);
            let layer = self.slot(class, from);
            self.put(g, layer);
        }
    }

    /// End (exclusive) of the commuting CNOT run starting at `start`.
    fn run_end(&self, start: usize) -> usize {
        let mut controls: HashSet<&Wire> = HashSet::new();
        let mut targets: HashSet<&Wire> = HashSet::new();
        let mut touched: HashSet<&Wire> = HashSet::new();
        let mut measured: HashSet<&Wire> = HashSet::new();
        for (k, g) in self.gates.iter().enumerate().skip(start) {
            let ok = match g {
                Gate::Cnot(c, t) => {
                    !targets.contains(c)
                        && !measured.contains(c)
                        && !controls.contains(t)
                        && !measured.contains(t)
                        && {
                            controls.insert(c);
                            targets.insert(t);
                            touched.insert(t);
                            true
                        }
                }
                Gate::Reset0(w) => {
                    !controls.contains(w) && !touched.contains(w) && {
                        targets.insert(w);
                        touched.insert(w);
                        true
                    }
                }
                Gate::MeasureZ(w, _) => {
                    !controls.contains(w) && !measured.contains(w) && {
                        targets.insert(w);
                        touched.insert(w);
                        measured.insert(w);
                        true
                    }
                }
                _ => false,
            };
            if !ok {
                return k;
            }
        }
        self.gates.len()
    }

    fn place_run(&mut self, range: std::ops::Range<usize>) {
        let cnots: Vec<usize> = range
            .clone()
            .filter(|&g| matches!(self.gates[g], Gate::Cnot(..)))
            .collect();
        let mut left: HashMap<&Wire, usize> = HashMap::new();
        let mut right: HashMap<&Wire, usize> = HashMap::new();
        let mut edges = Vec::with_capacity(cnots.len());
        let mut from = 0;
        for &g in &cnots {
            let Gate::Cnot(c, t) = &self.gates[g] else {
                unreachable!()
            };
            let nl = left.len();
            let nr = right.len();
            edges.push((*left.entry(c).or_insert(nl), *right.entry(t).or_insert(nr)));
            from = from.max(self.ready(g));
        }
        let colour = bipartite_edge_coloring(left.len(), right.len(), &edges);
        let colours = colour.iter().map(|c| c + 1).max().unwrap_or(0);
        for c in 0..colours {
            let layer = self.slot(LayerClass::TwoQubit, from);
            for (k, &g) in cnots.iter().enumerate() {
                if colour[k] == c {
                    self.put(g, layer);
                }
            }
            from = layer + 1;
        }
        for g in range {
            if matches!(self.gates[g], Gate::MeasureZ(..)) {
                self.place(g);
            }
        }
    }
}

impl Schedule {
    pub fn of(circuit: &Circuit) -> Schedule {
        let gates = circuit.gates();
        let mut p = Packer {
            gates,
            layers: Vec::new(),
            layer_of: vec![None; gates.len()],
            last: HashMap::new(),
            produced_in: HashMap::new(),
        };
        let mut g = 0;
        while g < gates.len() {
            if matches!(gates[g], Gate::Cnot(..)) {
                let end = p.run_end(g);
                p.place_run(g..end);
                g = end;
            } else {
                p.place(g);
                g += 1;
            }
        }
        Schedule {
            layers: p.layers,
            layer_of: p.layer_of,
        }
    }

    pub fn depth(&self) -> DepthReport {
        let mut d = DepthReport::default();
        for l in &self.layers {
            match l.class {
                LayerClass::Measure => d.measure += 1,
                LayerClass::TwoQubit => d.cnot += l.weight,
                LayerClass::Single => d.single += 1,
            }
        }
        d
    }
}

/// Layer counts of `circuit` under the greedy class-homogeneous packing.
pub fn schedule_depth(circuit: &Circuit) -> DepthReport {
    Schedule::of(circuit).depth()
}
