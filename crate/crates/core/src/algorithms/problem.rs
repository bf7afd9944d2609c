use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::AlgorithmError;
use crate::code::{QubitLabel, ReadoutBasis};
use crate::gf2::BitRow;

/// One `J * Z_idx` term. `idx` is sorted.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Term {
    pub idx: Vec<usize>,
    #[serde(rename = "J")]
    pub j: f64,
}

impl Term {
    pub fn label(&self) -> QubitLabel {
        QubitLabel::new(self.idx.iter().copied()).expect("validated term")
    }
}

/// `H_P = sum_k J_k prod_{i in idx_k} Z_i` on `n` logical qubits.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProblemHamiltonian {
    pub n: usize,
    pub terms: Vec<Term>,
}

impl ProblemHamiltonian {
    /// Sorts every index set and rejects empty, out-of-range, repeated or
    /// duplicated sets.
    pub fn new(n: usize, terms: Vec<(Vec<usize>, f64)>) -> Result<Self, AlgorithmError> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::with_capacity(terms.len());
        for (mut idx, j) in terms {
            idx.sort_unstable();
            if idx.is_empty() {
                return Err(AlgorithmError::InvalidProblem("empty index set".into()));
            }
            if let Some(i) = idx.iter().find(|&&i| i >= n) {
                return Err(AlgorithmError::InvalidProblem(format!(
                    "index {i} out of range for n = {n}"
                )));
            }
            if idx.windows(2).any(|w| w[0] == w[1]) {
                return Err(AlgorithmError::InvalidProblem(format!(
                    "repeated index in {idx:?}"
                )));
            }
            if !seen.insert(idx.clone()) {
                return Err(AlgorithmError::InvalidProblem(format!(
                    "duplicate term {idx:?}"
                )));
            }
            out.push(Term { idx, j });
        }
        Ok(Self { n, terms: out })
    }

    /// Fields and couplings drawn uniformly from `[-1, 1]` for every single
    /// index and every pair.
    pub fn random_two_body<R: rand::Rng>(n: usize, rng: &mut R) -> Self {
        let mut terms = Vec::new();
        for i in 0..n {
            terms.push((vec![i], rng.random_range(-1.0..=1.0)));
        }
        for i in 0..n {
            for k in i + 1..n {
                terms.push((vec![i, k], rng.random_range(-1.0..=1.0)));
            }
        }
        Self::new(n, terms).expect("distinct in-range terms")
    }

    /// `H_P(x)` for the computational basis state whose bit `i` is `x_i`
    /// (bit set = Z eigenvalue -1).
    pub fn energy_of(&self, x: usize) -> f64 {
        self.terms
            .iter()
            .map(|t| {
                let odd = t.idx.iter().filter(|&&i| x >> i & 1 == 1).count() % 2 == 1;
                if odd {
                    -t.j
                } else {
                    t.j
                }
            })
            .sum()
    }

    /// The same problem in the variables of `basis`: variable `j` is the
    /// parity of logical qubits in the label of chosen qubit `j`.
    pub fn relabel(&self, basis: &ReadoutBasis) -> Self {
        let n = self.n;
        let chosen: Vec<BitRow> = basis.chosen().iter().map(|q| q.to_row(n)).collect();
        // Z_S = prod_j Z_{y_j}^{c_j} with s = sum_j c_j L_j; c_j = <s, row j of M^-1 columns>
        let terms = self
            .terms
            .iter()
            .map(|t| {
                let s = BitRow::from_ones(n, t.idx.iter().copied());
                let idx = (0..n)
                    .filter(|&j| {
                        // s = sum_i s_i e_i and e_i = sum_j T[i][j] L_j
                        s.ones()
                            .fold(false, |acc, i| acc ^ basis.transform()[i].get(j))
                    })
                    .collect::<Vec<_>>();
                debug_assert!({
                    let mut acc = BitRow::zeros(n);
                    idx.iter().for_each(|&j| acc.xor_assign(&chosen[j]));
                    acc == s
                });
                Term { idx, j: t.j }
            })
            .collect();
        Self { n, terms }
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(self).expect("problem serializes")
    }

    pub fn parse_json(text: &str) -> Result<Self, AlgorithmError> {
        let raw: ProblemHamiltonian = serde_json::from_str(text)
            .map_err(|e| AlgorithmError::InvalidProblem(e.to_string()))?;
        Self::new(raw.n, raw.terms.into_iter().map(|t| (t.idx, t.j)).collect())
    }
}

/// `p` mixer angles and `p` phase angles.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QaoaParams {
    pub betas: Vec<f64>,
    pub gammas: Vec<f64>,
}

impl QaoaParams {
    pub fn new(betas: Vec<f64>, gammas: Vec<f64>) -> Result<Self, AlgorithmError> {
        if betas.is_empty() || betas.len() != gammas.len() {
            return Err(AlgorithmError::BadParams {
                betas: betas.len(),
                gammas: gammas.len(),
            });
        }
        Ok(Self { betas, gammas })
    }

    pub fn single(beta: f64, gamma: f64) -> Self {
        Self {
            betas: vec![beta],
            gammas: vec![gamma],
        }
    }

    pub fn p(&self) -> usize {
        self.betas.len()
    }

    pub(crate) fn check(&self) -> Result<(), AlgorithmError> {
        Self::new(self.betas.clone(), self.gammas.clone()).map(|_| ())
    }

    /// `[betas..., gammas...]`.
    pub fn to_vec(&self) -> Vec<f64> {
        self.betas.iter().chain(&self.gammas).copied().collect()
    }

    pub fn from_slice(v: &[f64]) -> Self {
        let p = v.len() / 2;
        Self {
            betas: v[..p].to_vec(),
            gammas: v[p..].to_vec(),
        }
    }
}

/// A simple undirected graph.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphSpec {
    pub n: usize,
    pub edges: Vec<[usize; 2]>,
}

impl GraphSpec {
    /// Normalizes each edge to `[small, large]`; rejects loops, repeats and
    /// out-of-range vertices.
    pub fn new(n: usize, edges: Vec<[usize; 2]>) -> Result<Self, AlgorithmError> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::with_capacity(edges.len());
        for [a, b] in edges {
            if a == b {
                return Err(AlgorithmError::InvalidGraph(format!("self-loop on {a}")));
            }
            if a.max(b) >= n {
                return Err(AlgorithmError::InvalidGraph(format!(
                    "edge [{a},{b}] out of range for n = {n}"
                )));
            }
            let e = [a.min(b), a.max(b)];
            if !seen.insert(e) {
                return Err(AlgorithmError::InvalidGraph(format!(
                    "repeated edge [{},{}]",
                    e[0], e[1]
                )));
            }
            out.push(e);
        }
        Ok(Self { n, edges: out })
    }

    /// Each possible edge kept with probability 1/2.
    pub fn random<R: rand::Rng>(n: usize, rng: &mut R) -> Self {
        let edges = (0..n)
            .flat_map(|a| (a + 1..n).map(move |b| [a, b]))
            .filter(|_| rng.random::<bool>())
            .collect();
        Self { n, edges }
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string(self).expect("graph serializes")
    }

    pub fn parse_json(text: &str) -> Result<Self, AlgorithmError> {
        let raw: GraphSpec =
            serde_json::from_str(text).map_err(|e| AlgorithmError::InvalidGraph(e.to_string()))?;
        Self::new(raw.n, raw.edges)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn problem_validation() {
        assert!(ProblemHamiltonian::new(3, vec![(vec![], 1.0)]).is_err());
        assert!(ProblemHamiltonian::new(3, vec![(vec![3], 1.0)]).is_err());
        assert!(ProblemHamiltonian::new(3, vec![(vec![1, 1], 1.0)]).is_err());
        assert!(ProblemHamiltonian::new(3, vec![(vec![0, 1], 1.0), (vec![1, 0], 2.0)]).is_err());
        let p = ProblemHamiltonian::new(3, vec![(vec![2, 0], 0.5)]).unwrap();
        assert_eq!(p.terms[0].idx, vec![0, 2]);
    }

    #[test]
    fn problem_json_round_trip() {
        let text = r#"{"n": 3, "terms": [{"idx": [0, 1], "J": -1.0}, {"idx": [2], "J": 0.25}]}"#;
        let p = ProblemHamiltonian::parse_json(text).unwrap();
        assert_eq!(p.terms[0].j, -1.0);
        assert_eq!(
            ProblemHamiltonian::parse_json(&p.to_json_string()).unwrap(),
            p
        );
        assert!(
            ProblemHamiltonian::parse_json(r#"{"n": 2, "terms": [{"idx": [5], "J": 1}]}"#).is_err()
        );
    }

    #[test]
    fn energy_of_basis_states() {
        let p = ProblemHamiltonian::new(2, vec![(vec![0, 1], -1.0), (vec![0], 0.5)]).unwrap();
        assert_eq!(p.energy_of(0b00), -0.5);
        assert_eq!(p.energy_of(0b01), 0.5);
        assert_eq!(p.energy_of(0b11), -1.5);
    }

    #[test]
    fn relabel_through_pair_basis() {
        // variables y0 = x0 ^ x1, y1 = x1
        let basis =
            ReadoutBasis::new(2, vec![QubitLabel::pair(0, 1), QubitLabel::data(1)]).unwrap();
        let p = ProblemHamiltonian::new(2, vec![(vec![0], 1.0), (vec![0, 1], 2.0), (vec![1], 3.0)])
            .unwrap();
        let r = p.relabel(&basis);
        let idx: Vec<Vec<usize>> = r.terms.iter().map(|t| t.idx.clone()).collect();
        assert_eq!(idx, vec![vec![0, 1], vec![0], vec![1]]);
    }

    #[test]
    fn graph_validation_and_json() {
        assert!(GraphSpec::new(3, vec![[1, 1]]).is_err());
        assert!(GraphSpec::new(3, vec![[0, 1], [1, 0]]).is_err());
        assert!(GraphSpec::new(3, vec![[0, 3]]).is_err());
        let g = GraphSpec::parse_json(r#"{"n": 3, "edges": [[2, 0], [0, 1]]}"#).unwrap();
        assert_eq!(g.edges, vec![[0, 2], [0, 1]]);
        assert_eq!(GraphSpec::parse_json(&g.to_json_string()).unwrap(), g);
    }

    #[test]
    fn params_shape() {
        assert!(QaoaParams::new(vec![], vec![]).is_err());
        assert!(QaoaParams::new(vec![0.1], vec![0.1, 0.2]).is_err());
        let q = QaoaParams::new(vec![0.1, 0.2], vec![0.3, 0.4]).unwrap();
        assert_eq!(QaoaParams::from_slice(&q.to_vec()), q);
    }
}
