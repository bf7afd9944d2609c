use crate::gf2::{self, BitRow};

use super::{CodeError, QubitLabel};

/// `n` physical qubits whose labels span the logical space, plus the GF(2)
/// inverse that recovers logical bits from their values.
#[derive(Clone, Debug, PartialEq)]
pub struct ReadoutBasis {
    chosen: Vec<QubitLabel>,
    // row i: which chosen qubits XOR to logical bit i
    transform: Vec<BitRow>,
}

impl ReadoutBasis {
    pub fn new(n: usize, chosen: Vec<QubitLabel>) -> Result<Self, CodeError> {
        if chosen.len() != n {
            return Err(CodeError::ReadoutSize {
                got: chosen.len(),
                expected: n,
            });
        }
        if let Some(&i) = chosen.iter().flat_map(|q| q.indices()).find(|&&i| i >= n) {
            return Err(CodeError::IndexOutOfRange { index: i, n });
        }
        // values = M a with M[j] = label of chosen[j]; a = M^-1 values
        let m: Vec<BitRow> = chosen.iter().map(|q| q.to_row(n)).collect();
        let transform = gf2::inverse(&m).ok_or(CodeError::RankDeficient {
            rank: gf2::rank(&m),
            needed: n,
        })?;
        Ok(Self { chosen, transform })
    }

    pub fn chosen(&self) -> &[QubitLabel] {
        &self.chosen
    }

    pub fn transform(&self) -> &[BitRow] {
        &self.transform
    }

    /// The chosen qubits whose values XOR to logical bit `i`.
    pub fn expression(&self, i: usize) -> Vec<&QubitLabel> {
        self.transform[i].ones().map(|j| &self.chosen[j]).collect()
    }

    /// Logical bits from measured values of the chosen qubits.
    pub fn logical_bits(&self, values: &[bool]) -> Vec<bool> {
        self.transform
            .iter()
            .map(|row| row.ones().fold(false, |acc, j| acc ^ values[j]))
            .collect()
    }

    pub fn is_identity(&self) -> bool {
        self.transform
            .iter()
            .enumerate()
            .all(|(i, r)| r.count_ones() == 1 && r.get(i))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::code::lhz_layout;

    #[test]
    fn data_and_parity_pair() {
        let basis =
            ReadoutBasis::new(2, vec![QubitLabel::data(0), QubitLabel::pair(0, 1)]).unwrap();
        assert_eq!(
            basis.expression(1),
            vec![&QubitLabel::data(0), &QubitLabel::pair(0, 1)]
        );
        assert_eq!(basis.logical_bits(&[true, false]), vec![true, true]);
        assert_eq!(basis.logical_bits(&[true, true]), vec![true, false]);
    }

    #[test]
    fn data_qubits_give_identity() {
        for n in 2..6 {
            let code = lhz_layout(n, true).unwrap();
            let data: Vec<QubitLabel> = code.data_qubits().cloned().collect();
            assert!(code.readout_basis(&data).unwrap().is_identity());
        }
    }

    #[test]
    fn closed_triple_is_rank_two() {
        let err = ReadoutBasis::new(
            3,
            vec![
                QubitLabel::pair(0, 1),
                QubitLabel::pair(1, 2),
                QubitLabel::pair(0, 2),
            ],
        );
        assert_eq!(
            err.unwrap_err(),
            CodeError::RankDeficient { rank: 2, needed: 3 }
        );
    }

    #[test]
    fn wrong_size() {
        let err = ReadoutBasis::new(3, vec![QubitLabel::data(0)]);
        assert_eq!(
            err.unwrap_err(),
            CodeError::ReadoutSize {
                got: 1,
                expected: 3
            }
        );
    }
}
