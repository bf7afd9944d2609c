//! Dense linear algebra over GF(2).
//!
//! Labels, constraints and Pauli strings are all bit vectors; the questions the
//! rest of the crate asks of them (is this set of constraints independent, does
//! this subset of qubits span the logical space, which qubits combine to a given
//! parity) reduce to Gaussian elimination on [`BitRow`]s.

use std::fmt;

const WORD: usize = 64;

/// A fixed-length bit vector, packed into `u64` words.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitRow {
    len: usize,
    words: Vec<u64>,
}

impl BitRow {
    pub fn zeros(len: usize) -> Self {
        Self {
            len,
            words: vec![0; len.div_ceil(WORD)],
        }
    }

    /// Row with ones exactly at `positions`. Positions `>= len` panic.
    pub fn from_ones<I: IntoIterator<Item = usize>>(len: usize, positions: I) -> Self {
        let mut row = Self::zeros(len);
        for p in positions {
            row.flip(p);
        }
        row
    }

    pub fn unit(len: usize, pos: usize) -> Self {
        Self::from_ones(len, [pos])
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, i: usize) -> bool {
        assert!(
            i < self.len,
            "bit {i} out of range for row of length {}",
            self.len
        );
        self.words[i / WORD] >> (i % WORD) & 1 == 1
    }

    pub fn set(&mut self, i: usize, value: bool) {
        assert!(
            i < self.len,
            "bit {i} out of range for row of length {}",
            self.len
        );
        let mask = 1u64 << (i % WORD);
        if value {
            self.words[i / WORD] |= mask;
        } else {
            self.words[i / WORD] &= !mask;
        }
    }

    pub fn flip(&mut self, i: usize) {
        assert!(
            i < self.len,
            "bit {i} out of range for row of length {}",
            self.len
        );
        self.words[i / WORD] ^= 1u64 << (i % WORD);
    }

    pub fn xor_assign(&mut self, other: &BitRow) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn and_parity(&self, other: &BitRow) -> bool {
        debug_assert_eq!(self.len, other.len);
        self.words
            .iter()
            .zip(&other.words)
            .fold(0u32, |acc, (a, b)| acc ^ (a & b).count_ones())
            & 1
            == 1
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let tz = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(wi * WORD + tz)
            })
        })
    }

    fn first_one_from(&self, start: usize) -> Option<usize> {
        self.ones().find(|&p| p >= start)
    }
}

impl fmt::Debug for BitRow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len {
            f.write_str(if self.get(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl std::ops::BitXor for &BitRow {
    type Output = BitRow;
    fn bitxor(self, rhs: &BitRow) -> BitRow {
        let mut out = self.clone();
        out.xor_assign(rhs);
        out
    }
}

/// Rank of the span of `rows`.
pub fn rank(rows: &[BitRow]) -> usize {
    Echelon::new(rows.iter().cloned()).rank()
}

/// Incrementally built row-echelon basis. Every stored pivot row also carries
/// the combination of input rows that produced it, so membership queries can
/// report *which* inputs sum to a target.
#[derive(Clone, Debug)]
pub struct Echelon {
    width: usize,
    pivots: Vec<(usize, BitRow, BitRow)>,
    inputs: usize,
    combo_len: usize,
}

impl Echelon {
    pub fn new<I: IntoIterator<Item = BitRow>>(rows: I) -> Self {
        let rows: Vec<BitRow> = rows.into_iter().collect();
        let width = rows.first().map_or(0, BitRow::len);
        let mut ech = Self::with_capacity(width, rows.len());
        for r in rows {
            ech.push(r);
        }
        ech
    }

    /// An empty basis for rows of `width` bits, tracking up to `max_inputs`
    /// input rows in the combination vectors.
    pub fn with_capacity(width: usize, max_inputs: usize) -> Self {
        Self {
            width,
            pivots: Vec::new(),
            inputs: 0,
            combo_len: max_inputs,
        }
    }

    /// Adds a row; returns `true` if it was independent of the rows so far.
    pub fn push(&mut self, row: BitRow) -> bool {
        self.push_or_dependency(row).is_none()
    }

    /// Adds a row. If it is dependent on earlier rows, returns the input
    /// indices (including its own) of a combination summing to zero.
    pub fn push_or_dependency(&mut self, row: BitRow) -> Option<Vec<usize>> {
        assert_eq!(row.len(), self.width, "row width mismatch");
        let idx = self.inputs;
        self.inputs += 1;
        if self.inputs > self.combo_len {
            self.combo_len = self.inputs.next_power_of_two();
            for (_, _, combo) in &mut self.pivots {
                let mut grown = BitRow::zeros(self.combo_len);
                for p in combo.ones() {
                    grown.flip(p);
                }
                *combo = grown;
            }
        }
        let mut combo = BitRow::unit(self.combo_len, idx);
        let mut row = row;
        self.reduce(&mut row, &mut combo);
        match row.first_one_from(0) {
            Some(p) => {
                self.pivots.push((p, row, combo));
                None
            }
            None => Some(combo.ones().collect()),
        }
    }

    fn reduce(&self, row: &mut BitRow, combo: &mut BitRow) {
        for (p, prow, pcombo) in &self.pivots {
            if row.get(*p) {
                row.xor_assign(prow);
                combo.xor_assign(pcombo);
            }
        }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn contains(&self, target: &BitRow) -> bool {
        self.express(target).is_some()
    }

    /// Indices of input rows (in push order) whose XOR equals `target`, or
    /// `None` if `target` lies outside the span.
    pub fn express(&self, target: &BitRow) -> Option<Vec<usize>> {
        let mut row = target.clone();
        let mut combo = BitRow::zeros(self.combo_len);
        self.reduce(&mut row, &mut combo);
        if row.is_zero() {
            Some(combo.ones().filter(|&i| i < self.inputs).collect())
        } else {
            None
        }
    }
}

/// Inverse of a square matrix given as rows, or `None` when singular.
pub fn inverse(rows: &[BitRow]) -> Option<Vec<BitRow>> {
    let n = rows.len();
    if rows.iter().any(|r| r.len() != n) {
        return None;
    }
    let mut a: Vec<BitRow> = rows.to_vec();
    let mut inv: Vec<BitRow> = (0..n).map(|i| BitRow::unit(n, i)).collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| a[r].get(col))?;
        a.swap(col, pivot);
        inv.swap(col, pivot);
        for r in 0..n {
            if r != col && a[r].get(col) {
                let (pa, pi) = (a[col].clone(), inv[col].clone());
                a[r].xor_assign(&pa);
                inv[r].xor_assign(&pi);
            }
        }
    }
    Some(inv)
}

/// Basis of the left null space: combinations of `rows` that sum to zero.
/// Each returned vector has one bit per input row.
pub fn left_null_space(rows: &[BitRow]) -> Vec<BitRow> {
    let width = rows.first().map_or(0, BitRow::len);
    let mut ech = Echelon::with_capacity(width, rows.len());
    rows.iter()
        .filter_map(|r| ech.push_or_dependency(r.clone()))
        .map(|dep| BitRow::from_ones(rows.len(), dep))
        .collect()
}
