//! Parity codes as GF(2) label algebra.
//!
//! A [`ParityCode`] is a set of physical qubits, each named by the
//! [`QubitLabel`] of logical indices whose parity it stores, together with a
//! list of Z-type [`Constraint`]s (stabilizer generators). A constraint is
//! well formed when the labels of its members cancel pairwise, i.e. their
//! symmetric difference is empty.

mod fixtures;
mod json;
mod label;
mod lhz;
mod readout;

use std::collections::HashMap;

use thiserror::Error;

use crate::gf2::{self, BitRow, Echelon};

pub use fixtures::higher_order_fixture;
pub use json::CodeJson;
pub use label::{symmetric_difference, QubitLabel};
pub use lhz::{lhz_encoding_constraint, lhz_layout};
pub use readout::ReadoutBasis;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CodeError {
    #[error("qubit label has no indices")]
    EmptyLabel,
    #[error("logical index {0} appears twice in a label")]
    DuplicateIndex(usize),
    #[error("cannot parse qubit label {0:?}")]
    BadLabel(String),
    #[error("logical index {index} out of range for a code with n = {n}")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("invalid size: n = {0} (need n >= 2)")]
    InvalidSize(usize),
    #[error("qubit {0} appears twice in the code")]
    DuplicateQubit(QubitLabel),
    #[error("qubit {0} is not part of the code")]
    UnknownQubit(QubitLabel),
    #[error("constraint has fewer than two members")]
    ConstraintTooSmall,
    #[error("constraint lists member {0} twice")]
    RepeatedMember(QubitLabel),
    #[error("placement has {got} entries for {expected} qubits")]
    PlacementSize { got: usize, expected: usize },
    #[error("code is underdetermined: {rank} independent constraints, {needed} required")]
    Underdetermined { rank: usize, needed: usize },
    #[error("readout subset has {got} qubits, expected n = {expected}")]
    ReadoutSize { got: usize, expected: usize },
    #[error("readout subset is not a basis: label rank {rank} < {needed}")]
    RankDeficient { rank: usize, needed: usize },
    #[error("invalid code JSON: {0}")]
    Json(String),
}

/// A Z-type parity check: the product of Z over `members` stabilizes every
/// code state.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Constraint {
    members: Vec<QubitLabel>,
}

impl Constraint {
    /// Members are stored sorted. Fewer than two members, or repeats, are
    /// rejected; closure (labels XOR to the empty set) is *not* checked here.
    pub fn new<I: IntoIterator<Item = QubitLabel>>(members: I) -> Result<Self, CodeError> {
        let mut members: Vec<QubitLabel> = members.into_iter().collect();
        members.sort();
        if let Some(w) = members.windows(2).find(|w| w[0] == w[1]) {
            return Err(CodeError::RepeatedMember(w[0].clone()));
        }
        if members.len() < 2 {
            return Err(CodeError::ConstraintTooSmall);
        }
        Ok(Self { members })
    }

    pub fn members(&self) -> &[QubitLabel] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, q: &QubitLabel) -> bool {
        self.members.binary_search(q).is_ok()
    }

    /// Labels of all members cancel.
    pub fn is_closed(&self) -> bool {
        symmetric_difference(&self.members).is_empty()
    }

    pub fn others<'a>(&'a self, q: &'a QubitLabel) -> impl Iterator<Item = &'a QubitLabel> + 'a {
        self.members.iter().filter(move |m| *m != q)
    }
}

impl std::fmt::Display for Constraint {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for (k, m) in self.members.iter().enumerate() {
            if k > 0 {
                f.write_str("-")?;
            }
            write!(f, "{m}")?;
        }
        Ok(())
    }
}

/// Outcome of [`ParityCode::validate`].
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct ValidationReport {
    /// Constraints whose member labels do not cancel, with the leftover indices.
    pub closure_failures: Vec<(usize, Vec<usize>)>,
    /// GF(2) rank of the constraint generators.
    pub rank: usize,
    pub generators: usize,
    /// `K - n`: generators needed to fix the code state completely.
    pub required: usize,
    pub independent: bool,
    pub fully_determined: bool,
    /// `Some` when a placement is present: constraints not fitting a 2x2 cell.
    pub non_local: Option<Vec<usize>>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.closure_failures.is_empty()
            && self.independent
            && self.non_local.as_ref().is_none_or(|v| v.is_empty())
    }
}

/// Physical qubits with parity labels, constraint generators and an optional
/// square-lattice placement.
#[derive(Clone, Debug, PartialEq)]
pub struct ParityCode {
    n: usize,
    qubits: Vec<QubitLabel>,
    index: HashMap<QubitLabel, usize>,
    constraints: Vec<Constraint>,
    placement: Option<Vec<[i64; 2]>>,
}

impl ParityCode {
    /// Builds a code, checking that labels fit `n`, qubits are unique and
    /// every constraint member is a code qubit.
    pub fn new(
        n: usize,
        qubits: Vec<QubitLabel>,
        constraints: Vec<Constraint>,
    ) -> Result<Self, CodeError> {
        let mut index = HashMap::with_capacity(qubits.len());
        for (k, q) in qubits.iter().enumerate() {
            if let Some(&i) = q.indices().iter().find(|&&i| i >= n) {
                return Err(CodeError::IndexOutOfRange { index: i, n });
            }
            if index.insert(q.clone(), k).is_some() {
                return Err(CodeError::DuplicateQubit(q.clone()));
            }
        }
        for c in &constraints {
            if let Some(m) = c.members().iter().find(|m| !index.contains_key(*m)) {
                return Err(CodeError::UnknownQubit(m.clone()));
            }
        }
        Ok(Self {
            n,
            qubits,
            index,
            constraints,
            placement: None,
        })
    }

    /// Attaches integer lattice coordinates, one per qubit in qubit order.
    pub fn with_placement(mut self, placement: Vec<[i64; 2]>) -> Result<Self, CodeError> {
        if placement.len() != self.qubits.len() {
            return Err(CodeError::PlacementSize {
                got: placement.len(),
                expected: self.qubits.len(),
            });
        }
        self.placement = Some(placement);
        Ok(self)
    }

    /// The trivial code: one data qubit per logical index, no constraints.
    pub fn data_only(n: usize) -> Self {
        let qubits = (0..n).map(QubitLabel::data).collect();
        Self::new(n, qubits, Vec::new()).expect("data labels are in range")
    }

    /// A code on the given labels whose generators are a basis of all
    /// closed products (not necessarily local).
    pub fn from_labels(n: usize, qubits: Vec<QubitLabel>) -> Result<Self, CodeError> {
        let rows: Vec<BitRow> = qubits.iter().map(|q| q.to_row(n)).collect();
        let constraints = gf2::left_null_space(&rows)
            .into_iter()
            .map(|dep| Constraint::new(dep.ones().map(|k| qubits[k].clone())))
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(n, qubits, constraints)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn num_qubits(&self) -> usize {
        self.qubits.len()
    }

    pub fn qubits(&self) -> &[QubitLabel] {
        &self.qubits
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    pub fn placement(&self) -> Option<&[[i64; 2]]> {
        self.placement.as_deref()
    }

    pub fn position(&self, q: &QubitLabel) -> Option<usize> {
        self.index.get(q).copied()
    }

    pub fn contains(&self, q: &QubitLabel) -> bool {
        self.index.contains_key(q)
    }

    pub fn coordinate(&self, q: &QubitLabel) -> Option<[i64; 2]> {
        Some(self.placement.as_ref()?[self.position(q)?])
    }

    pub fn data_qubits(&self) -> impl Iterator<Item = &QubitLabel> {
        self.qubits.iter().filter(|q| q.is_data())
    }

    pub fn parity_qubits(&self) -> impl Iterator<Item = &QubitLabel> {
        self.qubits.iter().filter(|q| q.is_parity())
    }

    pub fn has_all_data_qubits(&self) -> bool {
        (0..self.n).all(|i| self.contains(&QubitLabel::data(i)))
    }

    /// Membership vector of a constraint over the code's qubit order.
    fn support_row(&self, c: &Constraint) -> BitRow {
        BitRow::from_ones(self.qubits.len(), c.members().iter().map(|m| self.index[m]))
    }

    /// Rank of the span of all qubit labels; at most `n`.
    pub fn label_rank(&self) -> usize {
        gf2::rank(
            &self
                .qubits
                .iter()
                .map(|q| q.to_row(self.n))
                .collect::<Vec<_>>(),
        )
    }

    pub fn generator_rank(&self) -> usize {
        gf2::rank(
            &self
                .constraints
                .iter()
                .map(|c| self.support_row(c))
                .collect::<Vec<_>>(),
        )
    }

    /// Number of independent generators a fully determined code carries.
    pub fn required_generators(&self) -> usize {
        self.qubits.len() - self.label_rank()
    }

    pub fn is_fully_determined(&self) -> bool {
        self.generator_rank() == self.required_generators()
    }

    /// Bounding-box test: every constraint fits in a 2x2 lattice cell.
    /// `None` without a placement.
    pub fn non_local_constraints(&self) -> Option<Vec<usize>> {
        let placement = self.placement.as_ref()?;
        Some(
            self.constraints
                .iter()
                .enumerate()
                .filter(|(_, c)| {
                    let pts: Vec<[i64; 2]> = c
                        .members()
                        .iter()
                        .map(|m| placement[self.index[m]])
                        .collect();
                    let span = |axis: usize| {
                        let lo = pts.iter().map(|p| p[axis]).min().unwrap_or(0);
                        let hi = pts.iter().map(|p| p[axis]).max().unwrap_or(0);
                        hi - lo
                    };
                    span(0) > 1 || span(1) > 1
                })
                .map(|(k, _)| k)
                .collect(),
        )
    }

    /// Cell-centre coordinates for one measurement ancilla per constraint.
    pub fn ancilla_positions(&self) -> Option<Vec<[f64; 2]>> {
        let placement = self.placement.as_ref()?;
        Some(
            self.constraints
                .iter()
                .map(|c| {
                    let pts: Vec<[i64; 2]> = c
                        .members()
                        .iter()
                        .map(|m| placement[self.index[m]])
                        .collect();
                    let centre = |axis: usize| {
                        let lo = pts.iter().map(|p| p[axis]).min().unwrap_or(0);
                        let hi = pts.iter().map(|p| p[axis]).max().unwrap_or(0);
                        (lo + hi) as f64 / 2.0
                    };
                    [centre(0), centre(1)]
                })
                .collect(),
        )
    }

    pub fn validate(&self) -> ValidationReport {
        let closure_failures = self
            .constraints
            .iter()
            .enumerate()
            .filter_map(|(k, c)| {
                let rest = symmetric_difference(c.members());
                (!rest.is_empty()).then_some((k, rest))
            })
            .collect();
        let rank = self.generator_rank();
        let required = self.required_generators();
        ValidationReport {
            closure_failures,
            rank,
            generators: self.constraints.len(),
            required,
            independent: rank == self.constraints.len(),
            fully_determined: rank == required,
            non_local: self.non_local_constraints(),
        }
    }

    /// Errors unless the code is valid and fully determined.
    pub fn require_determined(&self) -> Result<(), CodeError> {
        let report = self.validate();
        if let Some((k, _)) = report.closure_failures.first() {
            return Err(CodeError::Json(format!("constraint #{k} is not closed")));
        }
        if !report.fully_determined {
            return Err(CodeError::Underdetermined {
                rank: report.rank,
                needed: report.required,
            });
        }
        Ok(())
    }

    /// `Q_i`: every physical qubit whose label contains logical index `i`.
    /// Flipping all of them is the logical X on `i`.
    pub fn logical_x_support(&self, i: usize) -> Result<Vec<QubitLabel>, CodeError> {
        if i >= self.n {
            return Err(CodeError::IndexOutOfRange {
                index: i,
                n: self.n,
            });
        }
        Ok(self
            .qubits
            .iter()
            .filter(|q| q.contains(i))
            .cloned()
            .collect())
    }

    /// Smallest number of physical qubits sharing a logical index.
    pub fn code_distance(&self) -> Result<usize, CodeError> {
        if !self.is_fully_determined() {
            return Err(CodeError::Underdetermined {
                rank: self.generator_rank(),
                needed: self.required_generators(),
            });
        }
        Ok((0..self.n)
            .map(|i| self.qubits.iter().filter(|q| q.contains(i)).count())
            .min()
            .unwrap_or(0))
    }

    /// Checks that `subset` names `n` code qubits whose labels span GF(2)^n.
    pub fn readout_basis(&self, subset: &[QubitLabel]) -> Result<ReadoutBasis, CodeError> {
        if let Some(q) = subset.iter().find(|q| !self.contains(q)) {
            return Err(CodeError::UnknownQubit((*q).clone()));
        }
        ReadoutBasis::new(self.n, subset.to_vec())
    }

    /// Greedy readout basis: lowest-weight labels first, keeping each one
    /// that increases the rank. Returns `None` if the labels do not span.
    pub fn default_readout_basis(&self) -> Option<ReadoutBasis> {
        let mut order: Vec<&QubitLabel> = self.qubits.iter().collect();
        order.sort_by_key(|q| (q.weight(), (*q).clone()));
        let mut ech = Echelon::with_capacity(self.n, self.n);
        let mut chosen = Vec::new();
        for q in order {
            if ech.push(q.to_row(self.n)) {
                chosen.push(q.clone());
            }
            if chosen.len() == self.n {
                break;
            }
        }
        ReadoutBasis::new(self.n, chosen).ok()
    }

    /// The code that remains after deleting `removed` qubits. Generators
    /// touching removed qubits are eliminated against each other, so the new
    /// generator set spans exactly the closed products of remaining qubits
    /// that the old set spanned.
    pub fn without_qubits(&self, removed: &[QubitLabel]) -> Result<ParityCode, CodeError> {
        for q in removed {
            if !self.contains(q) {
                return Err(CodeError::UnknownQubit(q.clone()));
            }
        }
        let mut rows: Vec<Option<BitRow>> = self
            .constraints
            .iter()
            .map(|c| Some(self.support_row(c)))
            .collect();
        for q in removed {
            let col = self.index[q];
            // lightest row touching the column is the least disruptive pivot
            let pivot = rows
                .iter()
                .enumerate()
                .filter_map(|(k, r)| {
                    r.as_ref()
                        .filter(|r| r.get(col))
                        .map(|r| (r.count_ones(), k))
                })
                .min()
                .map(|(_, k)| k);
            let Some(p) = pivot else { continue };
            let prow = rows[p].take().expect("pivot row present");
            for r in rows.iter_mut().flatten() {
                if r.get(col) {
                    r.xor_assign(&prow);
                }
            }
        }
        let keep: Vec<usize> = (0..self.qubits.len())
            .filter(|k| !removed.contains(&self.qubits[*k]))
            .collect();
        let qubits: Vec<QubitLabel> = keep.iter().map(|&k| self.qubits[k].clone()).collect();
        let constraints = rows
            .into_iter()
            .flatten()
            .filter(|r| !r.is_zero())
            .map(|r| Constraint::new(r.ones().map(|k| self.qubits[k].clone())))
            .collect::<Result<Vec<_>, _>>()?;
        let mut code = ParityCode::new(self.n, qubits, constraints)?;
        if let Some(p) = &self.placement {
            code = code.with_placement(keep.iter().map(|&k| p[k]).collect())?;
        }
        Ok(code)
    }

    /// Adds qubits and generators to an existing code. Placement, if any, must
    /// be supplied for the new qubits.
    pub fn with_added(
        &self,
        qubits: Vec<QubitLabel>,
        constraints: Vec<Constraint>,
        placement: Option<Vec<[i64; 2]>>,
    ) -> Result<ParityCode, CodeError> {
        let mut all_q = self.qubits.clone();
        all_q.extend(qubits);
        let mut all_c = self.constraints.clone();
        all_c.extend(constraints);
        let code = ParityCode::new(self.n, all_q, all_c)?;
        match (&self.placement, placement) {
            (Some(old), Some(new)) => {
                let mut p = old.clone();
                p.extend(new);
                code.with_placement(p)
            }
            _ => Ok(code),
        }
    }

    pub fn to_json(&self) -> CodeJson {
        CodeJson::from_code(self)
    }

    pub fn from_json(json: &CodeJson) -> Result<Self, CodeError> {
        json.to_code()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn l(ix: &[usize]) -> QubitLabel {
        QubitLabel::new(ix.iter().copied()).unwrap()
    }

    #[test]
    fn closure_failure_is_reported() {
        let code = ParityCode::new(
            2,
            vec![l(&[0]), l(&[1]), l(&[0, 1])],
            vec![Constraint::new([l(&[0]), l(&[1])]).unwrap()],
        )
        .unwrap();
        let report = code.validate();
        assert_eq!(report.closure_failures, vec![(0, vec![0, 1])]);
        assert!(!report.is_valid());
    }

    #[test]
    fn constraint_shape_errors() {
        assert!(matches!(
            Constraint::new([l(&[0])]),
            Err(CodeError::ConstraintTooSmall)
        ));
        assert!(matches!(
            Constraint::new([l(&[0]), l(&[0])]),
            Err(CodeError::RepeatedMember(_))
        ));
    }

    #[test]
    fn unknown_member_rejected() {
        let err = ParityCode::new(
            2,
            vec![l(&[0]), l(&[1])],
            vec![Constraint::new([l(&[0]), l(&[0, 1])]).unwrap()],
        );
        assert_eq!(err.unwrap_err(), CodeError::UnknownQubit(l(&[0, 1])));
        let err = ParityCode::new(2, vec![l(&[0, 2])], vec![]);
        assert!(matches!(
            err,
            Err(CodeError::IndexOutOfRange { index: 2, n: 2 })
        ));
    }

    #[test]
    fn trivial_code_distance_one() {
        let code = ParityCode::data_only(3);
        assert!(code.is_fully_determined());
        assert_eq!(code.code_distance().unwrap(), 1);
    }

    #[test]
    fn underdetermined_distance_errors() {
        let code = ParityCode::new(2, vec![l(&[0]), l(&[1]), l(&[0, 1])], vec![]).unwrap();
        assert!(matches!(
            code.code_distance(),
            Err(CodeError::Underdetermined { rank: 0, needed: 1 })
        ));
    }

    #[test]
    fn removing_parity_qubit_from_lhz3() {
        let code = lhz_layout(3, true).unwrap();
        let smaller = code.without_qubits(&[QubitLabel::pair(0, 1)]).unwrap();
        assert_eq!(smaller.num_qubits(), 5);
        let report = smaller.validate();
        assert!(report.closure_failures.is_empty());
        assert!(report.fully_determined);
        assert_eq!(smaller.code_distance().unwrap(), 2);
        assert_eq!(
            smaller.logical_x_support(0).unwrap(),
            vec![l(&[0]), l(&[0, 2])]
        );
    }

    #[test]
    fn from_labels_builds_basis() {
        let code = ParityCode::from_labels(
            3,
            vec![l(&[0]), l(&[1]), l(&[2]), l(&[0, 1]), l(&[0, 1, 2])],
        )
        .unwrap();
        let r = code.validate();
        assert!(r.is_valid() && r.fully_determined);
        assert_eq!(r.rank, 2);
    }

    #[test]
    fn default_readout_prefers_data() {
        let code = lhz_layout(4, true).unwrap();
        let basis = code.default_readout_basis().unwrap();
        assert!(basis.chosen().iter().all(QubitLabel::is_data));
        let partial = code.without_qubits(&[l(&[0])]).unwrap();
        let basis = partial.default_readout_basis().unwrap();
        assert_eq!(basis.chosen().len(), 4);
        assert!(basis.chosen().contains(&l(&[0, 1])));
    }
}
