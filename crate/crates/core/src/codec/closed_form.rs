//! Direct formulas for the full LHZ encode and decode.
//!
//! With the default constraint choices, the X flip on parity qubit `(k,l)`
//! after encoding is the XOR of the constraint outcomes of every pair
//! `(i,j)` with `k <= i < j <= l`; the Z flip on data qubit `(i)` after
//! decoding is the XOR of the X outcomes of every pair containing `i`.

use std::collections::{BTreeMap, BTreeSet};

use super::CodecError;
use crate::circuit::Outcomes;
use crate::code::QubitLabel;

pub type PairOutcomes = BTreeMap<(usize, usize), bool>;

fn check_shape(n: usize, m: &PairOutcomes) -> Result<(), CodecError> {
    let expected = n * n.saturating_sub(1) / 2;
    if m.len() != expected || m.keys().any(|&(i, j)| i >= j || j >= n) {
        return Err(CodecError::OutcomeShape {
            expected,
            got: m.len(),
        });
    }
    Ok(())
}

/// Parity qubits that need an X after a full LHZ encode.
pub fn closed_form_encode(n: usize, m: &PairOutcomes) -> Result<BTreeSet<QubitLabel>, CodecError> {
    check_shape(n, m)?;
    let mut flips = BTreeSet::new();
    for k in 0..n {
        for l in k + 1..n {
            let mut s = false;
            for i in k..l {
                for j in i + 1..=l {
                    s ^= m[&(i, j)];
                }
            }
            if s {
                flips.insert(QubitLabel::pair(k, l));
            }
        }
    }
    Ok(flips)
}

/// Data qubits that need a Z after a full LHZ decode.
pub fn closed_form_decode(n: usize, m: &PairOutcomes) -> Result<BTreeSet<QubitLabel>, CodecError> {
    check_shape(n, m)?;
    let mut flips = BTreeSet::new();
    for i in 0..n {
        let s = (0..i).fold(false, |s, l| s ^ m[&(l, i)])
            ^ (i + 1..n).fold(false, |s, j| s ^ m[&(i, j)]);
        if s {
            flips.insert(QubitLabel::data(i));
        }
    }
    Ok(flips)
}

fn pair_outcomes(n: usize, prefix: &str, outcomes: &Outcomes) -> Result<PairOutcomes, CodecError> {
    let mut m = PairOutcomes::new();
    for i in 0..n {
        for j in i + 1..n {
            let name = format!("{prefix}{}", QubitLabel::pair(i, j));
            m.insert(
                (i, j),
                outcomes
                    .get(&name)
                    .ok_or(CodecError::MissingOutcome(name))?,
            );
        }
    }
    Ok(m)
}

/// Pair-indexed view of the outcomes of a full LHZ encode step tagged `tag`.
pub fn lhz_encode_outcomes(
    n: usize,
    tag: &str,
    outcomes: &Outcomes,
) -> Result<PairOutcomes, CodecError> {
    pair_outcomes(n, &format!("{tag}mz"), outcomes)
}

/// Pair-indexed view of the outcomes of a full LHZ decode step tagged `tag`.
pub fn lhz_decode_outcomes(
    n: usize,
    tag: &str,
    outcomes: &Outcomes,
) -> Result<PairOutcomes, CodecError> {
    pair_outcomes(n, &format!("{tag}mx"), outcomes)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn all(n: usize, bit: bool) -> PairOutcomes {
        (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| ((i, j), bit)))
            .collect()
    }

    #[test]
    fn n2_single_constraint() {
        let mut m = all(2, false);
        assert!(closed_form_encode(2, &m).unwrap().is_empty());
        m.insert((0, 1), true);
        assert_eq!(
            closed_form_encode(2, &m).unwrap(),
            BTreeSet::from([QubitLabel::pair(0, 1)])
        );
        assert_eq!(
            closed_form_decode(2, &m).unwrap(),
            BTreeSet::from([QubitLabel::data(0), QubitLabel::data(1)])
        );
    }

    #[test]
    fn n3_single_flip_propagates_upwards() {
        let mut m = all(3, false);
        m.insert((0, 1), true);
        let f = closed_form_encode(3, &m).unwrap();
        assert_eq!(
            f,
            BTreeSet::from([QubitLabel::pair(0, 1), QubitLabel::pair(0, 2)])
        );
    }

    #[test]
    fn all_minus_counts_pairs() {
        for n in 2..=6 {
            let f = closed_form_encode(n, &all(n, true)).unwrap();
            for k in 0..n {
                for l in k + 1..n {
                    let pairs = (l - k + 1) * (l - k) / 2;
                    assert_eq!(
                        f.contains(&QubitLabel::pair(k, l)),
                        pairs % 2 == 1,
                        "({k},{l})"
                    );
                }
            }
        }
    }

    #[test]
    fn n4_decode_single_outcome() {
        let mut m = all(4, false);
        m.insert((1, 2), true);
        assert_eq!(
            closed_form_decode(4, &m).unwrap(),
            BTreeSet::from([QubitLabel::data(1), QubitLabel::data(2)])
        );
    }

    #[test]
    fn wrong_shape_rejected() {
        let mut m = all(3, false);
        m.remove(&(0, 2));
        assert_eq!(
            closed_form_encode(3, &m),
            Err(CodecError::OutcomeShape {
                expected: 3,
                got: 2
            })
        );
        assert!(closed_form_decode(2, &all(3, false)).is_err());
    }
}
