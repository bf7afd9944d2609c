use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use crate::gf2::BitRow;

use super::CodeError;

/// The set of logical indices whose joint Z parity a physical qubit carries.
///
/// Labels double as physical-qubit identifiers. Indices are kept sorted and
/// unique, so two labels compare equal exactly when they name the same set.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QubitLabel(Vec<usize>);

impl QubitLabel {
    pub fn new<I: IntoIterator<Item = usize>>(indices: I) -> Result<Self, CodeError> {
        let mut seen = BTreeSet::new();
        for i in indices {
            if !seen.insert(i) {
                return Err(CodeError::DuplicateIndex(i));
            }
        }
        if seen.is_empty() {
            return Err(CodeError::EmptyLabel);
        }
        Ok(Self(seen.into_iter().collect()))
    }

    pub fn data(i: usize) -> Self {
        Self(vec![i])
    }

    /// Two-body parity label `(i, j)`; order of the arguments is irrelevant.
    ///
    /// # Panics
    ///
    /// If `i == j`.
    pub fn pair(i: usize, j: usize) -> Self {
        assert_ne!(i, j, "pair label needs two distinct indices");
        Self(vec![i.min(j), i.max(j)])
    }

    pub fn indices(&self) -> &[usize] {
        &self.0
    }

    pub fn weight(&self) -> usize {
        self.0.len()
    }

    pub fn is_data(&self) -> bool {
        self.0.len() == 1
    }

    pub fn is_parity(&self) -> bool {
        self.0.len() >= 2
    }

    pub fn contains(&self, i: usize) -> bool {
        self.0.binary_search(&i).is_ok()
    }

    pub fn max_index(&self) -> usize {
        *self.0.last().expect("labels are non-empty")
    }

    /// The label as a GF(2) vector over `n` logical indices.
    pub fn to_row(&self, n: usize) -> BitRow {
        BitRow::from_ones(n, self.0.iter().copied())
    }
}

impl fmt::Display for QubitLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (k, i) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{i}")?;
        }
        f.write_str(")")
    }
}

impl fmt::Debug for QubitLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for QubitLabel {
    type Err = CodeError;

    /// Parses `(0,1,2)`; whitespace is ignored.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let inner = s
            .trim()
            .strip_prefix('(')
            .and_then(|t| t.strip_suffix(')'))
            .ok_or_else(|| CodeError::BadLabel(s.to_string()))?;
        let indices = inner
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<usize>()
                    .map_err(|_| CodeError::BadLabel(s.to_string()))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(indices)
    }
}

/// XOR of a collection of labels, as a sorted index list (empty for a closed
/// constraint).
pub fn symmetric_difference<'a, I: IntoIterator<Item = &'a QubitLabel>>(labels: I) -> Vec<usize> {
    let mut acc = BTreeSet::new();
    for l in labels {
        for &i in l.indices() {
            if !acc.remove(&i) {
                acc.insert(i);
            }
        }
    }
    acc.into_iter().collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn set_semantics() {
        let a = QubitLabel::new([2, 0]).unwrap();
        assert_eq!(a.indices(), &[0, 2]);
        assert_eq!(a, QubitLabel::pair(2, 0));
        assert!(matches!(
            QubitLabel::new([1, 1]),
            Err(CodeError::DuplicateIndex(1))
        ));
        assert!(matches!(QubitLabel::new([]), Err(CodeError::EmptyLabel)));
    }

    #[test]
    fn data_vs_parity() {
        assert!(QubitLabel::data(3).is_data());
        assert!(QubitLabel::pair(0, 1).is_parity());
        assert!(QubitLabel::new([0, 1, 2]).unwrap().is_parity());
    }

    #[test]
    fn display_and_parse() {
        let l = QubitLabel::new([0, 1, 3]).unwrap();
        assert_eq!(l.to_string(), "(0,1,3)");
        assert_eq!("( 3, 1,0 )".parse::<QubitLabel>().unwrap(), l);
        assert!("0,1".parse::<QubitLabel>().is_err());
        assert!("(a)".parse::<QubitLabel>().is_err());
    }

    #[test]
    fn xor_of_triangle_is_empty() {
        let t = [
            QubitLabel::data(0),
            QubitLabel::data(1),
            QubitLabel::pair(0, 1),
        ];
        assert!(symmetric_difference(&t).is_empty());
        assert_eq!(symmetric_difference(&t[..2]), vec![0, 1]);
    }
}
