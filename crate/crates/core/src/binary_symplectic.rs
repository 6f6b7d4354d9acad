//! Phaseless binary-symplectic Pauli operators and GF(2) linear algebra.
//!
//! A Pauli operator on `N` qubits is stored as two packed bit vectors, the
//! Z block and the X block. Single-qubit letters decode from `(z, x)` as
//! `I = (0,0)`, `X = (0,1)`, `Y = (1,1)`, `Z = (1,0)`. Phases are dropped:
//! multiplication is a componentwise XOR and every operator carries an
//! implicit `+1`.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

const WORD_BITS: usize = 64;

#[inline]
fn word_count(len: usize) -> usize {
    len.div_ceil(WORD_BITS)
}

/// Packed bit vector over GF(2). Bit `i` lives in word `i / 64` at position `i % 64`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct BitVector {
    len: usize,
    words: Vec<u64>,
}

impl BitVector {
    pub fn zeros(len: usize) -> Self {
        Self {
            len,
            words: vec![0; word_count(len)],
        }
    }

    pub fn from_indices(len: usize, indices: impl IntoIterator<Item = usize>) -> Self {
        let mut v = Self::zeros(len);
        for i in indices {
            v.set(i, true);
        }
        v
    }

    pub fn from_bools(bits: &[bool]) -> Self {
        Self::from_indices(
            bits.len(),
            bits.iter().enumerate().filter(|(_, b)| **b).map(|(i, _)| i),
        )
    }

    /// Builds a vector of length `len <= 64` from the low bits of `value`.
    pub fn from_u64(len: usize, value: u64) -> Self {
        assert!(len <= WORD_BITS);
        let mut v = Self::zeros(len);
        if len > 0 {
            let mask = if len == WORD_BITS { u64::MAX } else { (1u64 << len) - 1 };
            v.words[0] = value & mask;
        }
        v
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len, "bit {i} out of range {}", self.len);
        (self.words[i / WORD_BITS] >> (i % WORD_BITS)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        debug_assert!(i < self.len, "bit {i} out of range {}", self.len);
        let mask = 1u64 << (i % WORD_BITS);
        if value {
            self.words[i / WORD_BITS] |= mask;
        } else {
            self.words[i / WORD_BITS] &= !mask;
        }
    }

    #[inline]
    pub fn toggle(&mut self, i: usize) {
        self.words[i / WORD_BITS] ^= 1u64 << (i % WORD_BITS);
    }

    #[inline]
    pub fn xor_assign(&mut self, other: &BitVector) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= *b;
        }
    }

    pub fn xor(&self, other: &BitVector) -> BitVector {
        let mut out = self.clone();
        out.xor_assign(other);
        out
    }

    pub fn and(&self, other: &BitVector) -> BitVector {
        debug_assert_eq!(self.len, other.len);
        BitVector {
            len: self.len,
            words: self.words.iter().zip(&other.words).map(|(a, b)| a & b).collect(),
        }
    }

    /// Parity of the bitwise AND, i.e. the GF(2) dot product.
    #[inline]
    pub fn dot(&self, other: &BitVector) -> bool {
        debug_assert_eq!(self.len, other.len);
        self.words
            .iter()
            .zip(&other.words)
            .fold(0u32, |acc, (a, b)| acc ^ (a & b).count_ones())
            & 1
            == 1
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|w| *w == 0)
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn first_one(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .find(|(_, w)| **w != 0)
            .map(|(k, w)| k * WORD_BITS + w.trailing_zeros() as usize)
    }

    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(k, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    None
                } else {
                    let t = w.trailing_zeros() as usize;
                    w &= w - 1;
                    Some(k * WORD_BITS + t)
                }
            })
        })
    }

    /// Copies the bits at `positions` into a new vector of length `positions.len()`.
    pub fn select(&self, positions: &[usize]) -> BitVector {
        BitVector::from_indices(
            positions.len(),
            positions
                .iter()
                .enumerate()
                .filter(|(_, &p)| self.get(p))
                .map(|(i, _)| i),
        )
    }

    /// Concatenates `self` followed by `other`.
    pub fn concat(&self, other: &BitVector) -> BitVector {
        let mut out = BitVector::zeros(self.len + other.len);
        for i in self.ones() {
            out.set(i, true);
        }
        for i in other.ones() {
            out.set(self.len + i, true);
        }
        out
    }

    pub fn slice(&self, start: usize, len: usize) -> BitVector {
        BitVector::from_indices(
            len,
            self.ones().filter(|&i| i >= start && i < start + len).map(|i| i - start),
        )
    }
}

impl fmt::Debug for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVector({self})")
    }
}

impl fmt::Display for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len {
            f.write_str(if self.get(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

/// Single-qubit Pauli letter.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PauliLetter {
    I,
    X,
    Y,
    Z,
}

impl PauliLetter {
    pub const ALL: [PauliLetter; 4] = [PauliLetter::I, PauliLetter::X, PauliLetter::Y, PauliLetter::Z];

    /// Returns the `(z, x)` bit pair.
    pub fn bits(self) -> (bool, bool) {
        match self {
            PauliLetter::I => (false, false),
            PauliLetter::X => (false, true),
            PauliLetter::Y => (true, true),
            PauliLetter::Z => (true, false),
        }
    }

    pub fn from_bits(z: bool, x: bool) -> Self {
        match (z, x) {
            (false, false) => PauliLetter::I,
            (false, true) => PauliLetter::X,
            (true, true) => PauliLetter::Y,
            (true, false) => PauliLetter::Z,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            PauliLetter::I => 'I',
            PauliLetter::X => 'X',
            PauliLetter::Y => 'Y',
            PauliLetter::Z => 'Z',
        }
    }

    pub fn from_char(c: char) -> Option<Self> {
        match c {
            'I' => Some(PauliLetter::I),
            'X' => Some(PauliLetter::X),
            'Y' => Some(PauliLetter::Y),
            'Z' => Some(PauliLetter::Z),
            _ => None,
        }
    }

    /// Two letters commute iff either is `I` or they are equal.
    pub fn commutes_with(self, other: PauliLetter) -> bool {
        self == PauliLetter::I || other == PauliLetter::I || self == other
    }
}

/// Phaseless `N`-qubit Pauli operator in the binary picture.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PauliOperator {
    z: BitVector,
    x: BitVector,
}

impl PauliOperator {
    pub fn identity(n_qubits: usize) -> Self {
        Self {
            z: BitVector::zeros(n_qubits),
            x: BitVector::zeros(n_qubits),
        }
    }

    pub fn from_blocks(z: BitVector, x: BitVector) -> Result<Self> {
        if z.len() != x.len() {
            return Err(Error::DimensionMismatch {
                expected: z.len(),
                found: x.len(),
            });
        }
        Ok(Self { z, x })
    }

    pub fn from_letters(letters: &[PauliLetter]) -> Self {
        let mut p = Self::identity(letters.len());
        for (q, l) in letters.iter().enumerate() {
            p.set_letter(q, *l);
        }
        p
    }

    /// Single-letter operator `letter` on `qubit`, identity elsewhere.
    pub fn single(n_qubits: usize, qubit: usize, letter: PauliLetter) -> Self {
        let mut p = Self::identity(n_qubits);
        p.set_letter(qubit, letter);
        p
    }

    /// Rebuilds an operator from its stacked `(Z | X)` vector of length `2N`.
    pub fn from_symplectic(v: &BitVector) -> Self {
        let n = v.len() / 2;
        Self {
            z: v.slice(0, n),
            x: v.slice(n, n),
        }
    }

    pub fn n_qubits(&self) -> usize {
        self.z.len()
    }

    pub fn z_bits(&self) -> &BitVector {
        &self.z
    }

    pub fn x_bits(&self) -> &BitVector {
        &self.x
    }

    pub fn letter(&self, qubit: usize) -> PauliLetter {
        PauliLetter::from_bits(self.z.get(qubit), self.x.get(qubit))
    }

    pub fn set_letter(&mut self, qubit: usize, letter: PauliLetter) {
        let (z, x) = letter.bits();
        self.z.set(qubit, z);
        self.x.set(qubit, x);
    }

    pub fn letters(&self) -> impl Iterator<Item = PauliLetter> + '_ {
        (0..self.n_qubits()).map(|q| self.letter(q))
    }

    pub fn is_identity(&self) -> bool {
        self.z.is_zero() && self.x.is_zero()
    }

    /// Only `I` and `X` letters.
    pub fn is_x_type(&self) -> bool {
        self.z.is_zero()
    }

    /// Only `I` and `Z` letters.
    pub fn is_z_type(&self) -> bool {
        self.x.is_zero()
    }

    pub fn support(&self) -> BitVector {
        let mut s = self.z.clone();
        for (a, b) in s.words.iter_mut().zip(&self.x.words) {
            *a |= *b;
        }
        s
    }

    pub fn weight(&self) -> usize {
        self.support().count_ones()
    }

    /// The stacked `(Z | X)` column of length `2N`.
    pub fn symplectic(&self) -> BitVector {
        self.z.concat(&self.x)
    }

    fn check_same_size(&self, other: &PauliOperator) -> Result<()> {
        if self.n_qubits() != other.n_qubits() {
            return Err(Error::DimensionMismatch {
                expected: self.n_qubits(),
                found: other.n_qubits(),
            });
        }
        Ok(())
    }

    pub fn multiply(&self, other: &PauliOperator) -> Result<PauliOperator> {
        self.check_same_size(other)?;
        Ok(self.mul_unchecked(other))
    }

    #[inline]
    pub(crate) fn mul_unchecked(&self, other: &PauliOperator) -> PauliOperator {
        PauliOperator {
            z: self.z.xor(&other.z),
            x: self.x.xor(&other.x),
        }
    }

    #[inline]
    pub(crate) fn mul_assign_unchecked(&mut self, other: &PauliOperator) {
        self.z.xor_assign(&other.z);
        self.x.xor_assign(&other.x);
    }

    pub fn commutes(&self, other: &PauliOperator) -> Result<bool> {
        self.check_same_size(other)?;
        Ok(self.commutes_unchecked(other))
    }

    #[inline]
    pub(crate) fn commutes_unchecked(&self, other: &PauliOperator) -> bool {
        self.z.dot(&other.x) == self.x.dot(&other.z)
    }

    pub fn local_commutes(&self, other: &PauliOperator, qubit: usize) -> Result<bool> {
        self.check_same_size(other)?;
        if qubit >= self.n_qubits() {
            return Err(Error::IndexOutOfRange {
                index: qubit,
                len: self.n_qubits(),
            });
        }
        Ok(!self.anticommutation_mask(other).get(qubit))
    }

    /// Per-qubit local anticommutation pattern: bit `mu` is set iff the
    /// letters of `self` and `other` at `mu` anticommute.
    pub fn anticommutation_mask(&self, other: &PauliOperator) -> BitVector {
        debug_assert_eq!(self.n_qubits(), other.n_qubits());
        BitVector {
            len: self.z.len,
            words: self
                .z
                .words
                .iter()
                .zip(&self.x.words)
                .zip(other.z.words.iter().zip(&other.x.words))
                .map(|((za, xa), (zb, xb))| (za & xb) ^ (xa & zb))
                .collect(),
        }
    }

    /// Restriction to the listed qubits, in the given order.
    pub fn restrict(&self, qubits: &[usize]) -> PauliOperator {
        PauliOperator {
            z: self.z.select(qubits),
            x: self.x.select(qubits),
        }
    }
}

/// Free-function form of [`PauliOperator::multiply`].
pub fn multiply(a: &PauliOperator, b: &PauliOperator) -> Result<PauliOperator> {
    a.multiply(b)
}

/// Free-function form of [`PauliOperator::commutes`].
pub fn commutes(a: &PauliOperator, b: &PauliOperator) -> Result<bool> {
    a.commutes(b)
}

/// Free-function form of [`PauliOperator::local_commutes`].
pub fn local_commutes(a: &PauliOperator, b: &PauliOperator, qubit: usize) -> Result<bool> {
    a.local_commutes(b, qubit)
}

impl fmt::Display for PauliOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in self.letters() {
            write!(f, "{}", l.as_char())?;
        }
        Ok(())
    }
}

impl fmt::Debug for PauliOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Pauli({self})")
    }
}

impl FromStr for PauliOperator {
    type Err = Error;

    /// Parses `"ZZZZIII"`; qubit 1 is the leftmost character.
    fn from_str(s: &str) -> Result<Self> {
        let letters = s
            .trim()
            .chars()
            .map(PauliLetter::from_char)
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| Error::ParsePauli(s.to_string()))?;
        if letters.is_empty() {
            return Err(Error::ParsePauli(s.to_string()));
        }
        Ok(PauliOperator::from_letters(&letters))
    }
}

/// Dense row-major matrix over GF(2).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BitVector>,
}

/// Result of [`BitMatrix::solve`]: one particular solution and a basis of the kernel.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Solution {
    pub particular: BitVector,
    pub nullspace: Vec<BitVector>,
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![BitVector::zeros(cols); rows],
        }
    }

    pub fn identity(k: usize) -> Self {
        let mut m = Self::zeros(k, k);
        for i in 0..k {
            m.set(i, i, true);
        }
        m
    }

    /// All rows must share one length; `cols` is needed for the zero-row case.
    pub fn from_rows(cols: usize, rows: Vec<BitVector>) -> Result<Self> {
        if let Some(bad) = rows.iter().find(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch {
                expected: cols,
                found: bad.len(),
            });
        }
        Ok(Self {
            rows: rows.len(),
            cols,
            data: rows,
        })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> bool) -> Self {
        let mut m = Self::zeros(rows, cols);
        for r in 0..rows {
            for c in 0..cols {
                if f(r, c) {
                    m.set(r, c, true);
                }
            }
        }
        m
    }

    /// Parses rows of `0`/`1` characters; whitespace inside a row is ignored.
    pub fn from_strs(rows: &[&str]) -> Self {
        let parsed: Vec<Vec<bool>> = rows
            .iter()
            .map(|r| r.chars().filter(|c| !c.is_whitespace()).map(|c| c == '1').collect())
            .collect();
        let cols = parsed.first().map_or(0, Vec::len);
        Self::from_fn(parsed.len(), cols, |r, c| parsed[r][c])
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        self.data[r].get(c)
    }

    pub fn set(&mut self, r: usize, c: usize, value: bool) {
        self.data[r].set(c, value);
    }

    pub fn row(&self, r: usize) -> &BitVector {
        &self.data[r]
    }

    pub fn row_vectors(&self) -> &[BitVector] {
        &self.data
    }

    pub fn column(&self, c: usize) -> BitVector {
        BitVector::from_indices(self.rows, (0..self.rows).filter(|&r| self.get(r, c)))
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(BitVector::is_zero)
    }

    pub fn transpose(&self) -> BitMatrix {
        BitMatrix::from_fn(self.cols, self.rows, |r, c| self.get(c, r))
    }

    pub fn mul(&self, other: &BitMatrix) -> Result<BitMatrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: other.rows,
            });
        }
        let mut out = BitMatrix::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            let mut acc = BitVector::zeros(other.cols);
            for k in self.data[r].ones() {
                acc.xor_assign(&other.data[k]);
            }
            out.data[r] = acc;
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &BitVector) -> Result<BitVector> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: v.len(),
            });
        }
        Ok(BitVector::from_indices(
            self.rows,
            (0..self.rows).filter(|&r| self.data[r].dot(v)),
        ))
    }

    /// Reduced row-echelon form and the pivot column of each nonzero row.
    pub fn rref(&self) -> (BitMatrix, Vec<usize>) {
        let mut work = self.clone();
        let pivots = work.eliminate(None);
        (work, pivots)
    }

    /// In-place Gauss-Jordan elimination; `rhs` is carried along when present.
    fn eliminate(&mut self, mut rhs: Option<&mut Vec<bool>>) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| self.data[i].get(c)) else {
                continue;
            };
            self.data.swap(r, p);
            if let Some(b) = rhs.as_deref_mut() {
                b.swap(r, p);
            }
            let pivot_row = self.data[r].clone();
            for i in 0..self.rows {
                if i != r && self.data[i].get(c) {
                    self.data[i].xor_assign(&pivot_row);
                    if let Some(b) = rhs.as_deref_mut() {
                        b[i] ^= b[r];
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank_mod2(&self) -> usize {
        let mut work = self.data.clone();
        let mut rank = 0;
        for c in 0..self.cols {
            let Some(p) = (rank..work.len()).find(|&i| work[i].get(c)) else {
                continue;
            };
            work.swap(rank, p);
            let pivot_row = work[rank].clone();
            for row in work.iter_mut().skip(rank + 1) {
                if row.get(c) {
                    row.xor_assign(&pivot_row);
                }
            }
            rank += 1;
            if rank == work.len() {
                break;
            }
        }
        rank
    }

    /// Solves `self · x = b`. Returns `None` when the system is inconsistent.
    pub fn solve(&self, b: &BitVector) -> Result<Option<Solution>> {
        if b.len() != self.rows {
            return Err(Error::DimensionMismatch {
                expected: self.rows,
                found: b.len(),
            });
        }
        let mut work = self.clone();
        let mut rhs: Vec<bool> = (0..self.rows).map(|i| b.get(i)).collect();
        let pivots = work.eliminate(Some(&mut rhs));
        if rhs[pivots.len()..].iter().any(|&bit| bit) {
            return Ok(None);
        }
        let mut particular = BitVector::zeros(self.cols);
        for (i, &c) in pivots.iter().enumerate() {
            particular.set(c, rhs[i]);
        }
        let mut is_pivot = vec![false; self.cols];
        for &c in &pivots {
            is_pivot[c] = true;
        }
        let nullspace = (0..self.cols)
            .filter(|&f| !is_pivot[f])
            .map(|f| {
                let mut v = BitVector::zeros(self.cols);
                v.set(f, true);
                for (i, &c) in pivots.iter().enumerate() {
                    if work.get(i, f) {
                        v.set(c, true);
                    }
                }
                v
            })
            .collect();
        Ok(Some(Solution {
            particular,
            nullspace,
        }))
    }

    pub fn inverse(&self) -> Option<BitMatrix> {
        if self.rows != self.cols {
            return None;
        }
        let k = self.rows;
        let mut aug = BitMatrix::zeros(k, 2 * k);
        for r in 0..k {
            aug.data[r] = self.data[r].concat(&BitMatrix::identity(k).data[r]);
        }
        let pivots = aug.eliminate(None);
        if pivots.len() < k || pivots[k - 1] >= k {
            return None;
        }
        Some(BitMatrix {
            rows: k,
            cols: k,
            data: aug.data.iter().map(|r| r.slice(k, k)).collect(),
        })
    }
}

/// Free-function form of [`BitMatrix::rank_mod2`].
pub fn rank_mod2(m: &BitMatrix) -> usize {
    m.rank_mod2()
}

/// Free-function form of [`BitMatrix::solve`].
pub fn solve_mod2(a: &BitMatrix, b: &BitVector) -> Result<Option<Solution>> {
    a.solve(b)
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BitMatrix {}x{}", self.rows, self.cols)?;
        for r in &self.data {
            writeln!(f, "  {r}")?;
        }
        Ok(())
    }
}

/// Rank of a list of equal-length vectors.
pub(crate) fn rank_of(vectors: &[BitVector]) -> usize {
    let mut basis = EchelonBasis::default();
    vectors.iter().filter(|v| basis.insert(v)).count()
}

/// Incremental echelon basis; `insert` reports whether the vector was independent.
#[derive(Clone, Debug, Default)]
pub(crate) struct EchelonBasis {
    rows: Vec<(usize, BitVector)>,
}

impl EchelonBasis {
    pub fn reduce(&self, v: &BitVector) -> BitVector {
        let mut v = v.clone();
        for (pivot, row) in &self.rows {
            if v.get(*pivot) {
                v.xor_assign(row);
            }
        }
        v
    }

    pub fn insert(&mut self, v: &BitVector) -> bool {
        let r = self.reduce(v);
        match r.first_one() {
            None => false,
            Some(p) => {
                for (_, row) in self.rows.iter_mut() {
                    if row.get(p) {
                        row.xor_assign(&r);
                    }
                }
                self.rows.push((p, r));
                true
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> PauliOperator {
        s.parse().unwrap()
    }

    #[test]
    fn letters_decode_from_bit_pairs() {
        assert_eq!(PauliLetter::from_bits(false, false), PauliLetter::I);
        assert_eq!(PauliLetter::from_bits(false, true), PauliLetter::X);
        assert_eq!(PauliLetter::from_bits(true, true), PauliLetter::Y);
        assert_eq!(PauliLetter::from_bits(true, false), PauliLetter::Z);
    }

    #[test]
    fn multiply_drops_phases() {
        assert_eq!(p("X").multiply(&p("Y")).unwrap(), p("Z"));
        let q = p("XYZI");
        assert!(q.multiply(&q).unwrap().is_identity());
        assert_eq!(p("XI").multiply(&p("IZ")).unwrap(), p("XZ"));
        assert!(matches!(
            p("X").multiply(&p("XX")),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn commutation() {
        assert!(!p("X").commutes(&p("Z")).unwrap());
        assert!(p("XX").commutes(&p("ZZ")).unwrap());
        let s_rz = p("ZZZZIII");
        let s_bx = p("IXXIXXI");
        assert!(s_rz.commutes(&s_bx).unwrap());
        assert!(!s_rz.local_commutes(&s_bx, 1).unwrap());
        assert!(s_rz.local_commutes(&s_bx, 4).unwrap());
        assert!(s_rz.local_commutes(&s_bx, 6).unwrap());
        assert!(matches!(
            s_rz.local_commutes(&s_bx, 7),
            Err(Error::IndexOutOfRange { .. })
        ));
    }

    #[test]
    fn parser_rejects_other_characters() {
        assert!("XYZ".parse::<PauliOperator>().is_ok());
        assert!("XAZ".parse::<PauliOperator>().is_err());
        assert!("xyz".parse::<PauliOperator>().is_err());
        assert!("".parse::<PauliOperator>().is_err());
        assert_eq!(p("ZZZZIII").to_string(), "ZZZZIII");
    }

    #[test]
    fn restriction_and_types() {
        let q = p("XYZIX");
        assert_eq!(q.restrict(&[1, 2, 4]), p("YZX"));
        assert!(p("XIX").is_x_type());
        assert!(p("ZIZ").is_z_type());
        assert!(!p("YII").is_x_type());
        assert_eq!(q.weight(), 4);
        assert_eq!(PauliOperator::from_symplectic(&q.symplectic()), q);
    }

    #[test]
    fn rank_small_cases() {
        assert_eq!(BitMatrix::zeros(5, 3).rank_mod2(), 0);
        assert_eq!(BitMatrix::identity(6).rank_mod2(), 6);
        // Four-vertex connected graph with three edges: rank N - 1.
        let incidence = BitMatrix::from_strs(&["110000", "101000", "010000", "001000"]);
        assert_eq!(incidence.rank_mod2(), 3);
    }

    #[test]
    fn solve_identity_and_zero() {
        let b = BitVector::from_indices(4, [0, 3]);
        let sol = BitMatrix::identity(4).solve(&b).unwrap().unwrap();
        assert_eq!(sol.particular, b);
        assert!(sol.nullspace.is_empty());

        let sol = BitMatrix::zeros(3, 5).solve(&BitVector::zeros(3)).unwrap().unwrap();
        assert!(sol.particular.is_zero());
        assert_eq!(sol.nullspace.len(), 5);

        let inconsistent = BitMatrix::zeros(2, 2).solve(&BitVector::from_indices(2, [1]));
        assert_eq!(inconsistent.unwrap(), None);
    }

    #[test]
    fn inverse_roundtrip() {
        let m = BitMatrix::from_strs(&["110", "011", "001"]);
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv).unwrap(), BitMatrix::identity(3));
        assert!(BitMatrix::from_strs(&["11", "11"]).inverse().is_none());
    }

    #[test]
    fn bitvector_words_span_boundaries() {
        let mut v = BitVector::zeros(130);
        v.set(0, true);
        v.set(64, true);
        v.set(129, true);
        assert_eq!(v.ones().collect::<Vec<_>>(), vec![0, 64, 129]);
        assert_eq!(v.count_ones(), 3);
        assert_eq!(v.first_one(), Some(0));
        assert_eq!(v.slice(64, 66).ones().collect::<Vec<_>>(), vec![0, 65]);
    }
}
