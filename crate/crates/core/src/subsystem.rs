//! Qubit subsets `Ω`. Indices are 0-based internally and 1-based in text.

use std::fmt;

use crate::binary_symplectic::BitVector;
use crate::error::{Error, Result};

/// Sorted set of distinct qubit indices inside an `n_qubits` register.
///
/// Ordering is by size first, then lexicographic, so `{1,2} < {1,3} < ... < {6,7} < {1,2,3}`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Subsystem {
    n_qubits: usize,
    qubits: Vec<usize>,
}

impl Subsystem {
    pub fn new(n_qubits: usize, qubits: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut qubits: Vec<usize> = qubits.into_iter().collect();
        qubits.sort_unstable();
        if let Some(&bad) = qubits.iter().find(|&&q| q >= n_qubits) {
            return Err(Error::IndexOutOfRange {
                index: bad,
                len: n_qubits,
            });
        }
        if qubits.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidSubsystem(format!("repeated qubit in {qubits:?}")));
        }
        Ok(Self { n_qubits, qubits })
    }

    /// Parses `"1,2,5"` or `"{1,2,5}"` with 1-based labels.
    pub fn parse_one_based(n_qubits: usize, text: &str) -> Result<Self> {
        let inner = text.trim().trim_start_matches('{').trim_end_matches('}');
        let mut qubits = Vec::new();
        for part in inner.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let label: usize = part
                .parse()
                .map_err(|_| Error::InvalidSubsystem(format!("not a qubit label: {part:?}")))?;
            if label == 0 || label > n_qubits {
                return Err(Error::InvalidSubsystem(format!(
                    "qubit label {label} outside 1..={n_qubits}"
                )));
            }
            qubits.push(label - 1);
        }
        Self::new(n_qubits, qubits)
    }

    pub fn from_mask(mask: &BitVector) -> Self {
        Self {
            n_qubits: mask.len(),
            qubits: mask.ones().collect(),
        }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn qubits(&self) -> &[usize] {
        &self.qubits
    }

    pub fn len(&self) -> usize {
        self.qubits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.qubits.is_empty()
    }

    pub fn contains(&self, q: usize) -> bool {
        self.qubits.binary_search(&q).is_ok()
    }

    pub fn mask(&self) -> BitVector {
        BitVector::from_indices(self.n_qubits, self.qubits.iter().copied())
    }

    pub fn complement(&self) -> Vec<usize> {
        (0..self.n_qubits).filter(|q| !self.contains(*q)).collect()
    }

    /// Every subsystem with `2 <= |Ω| <= n_qubits - 1`, in display order.
    pub fn all_local(n_qubits: usize) -> Vec<Subsystem> {
        let mut out = Vec::new();
        for size in 2..n_qubits {
            for_each_combination(n_qubits, size, |c| {
                out.push(Subsystem {
                    n_qubits,
                    qubits: c.to_vec(),
                })
            });
        }
        out
    }

    /// Errors unless `2 <= |Ω| <= N - 1`.
    pub fn require_local(&self) -> Result<()> {
        if self.len() < 2 || self.len() + 1 > self.n_qubits {
            return Err(Error::InvalidSubsystem(format!(
                "{self} must contain between 2 and {} qubits",
                self.n_qubits.saturating_sub(1)
            )));
        }
        Ok(())
    }
}

impl PartialOrd for Subsystem {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Subsystem {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.n_qubits, self.qubits.len(), &self.qubits).cmp(&(
            other.n_qubits,
            other.qubits.len(),
            &other.qubits,
        ))
    }
}

impl fmt::Display for Subsystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, q) in self.qubits.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{}", q + 1)?;
        }
        f.write_str("}")
    }
}

impl fmt::Debug for Subsystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subsystem{self}")
    }
}

/// Calls `f` on every `k`-combination of `0..n` in lexicographic order.
pub(crate) fn for_each_combination(n: usize, k: usize, mut f: impl FnMut(&[usize])) {
    if k > n {
        return;
    }
    let mut c: Vec<usize> = (0..k).collect();
    loop {
        f(&c);
        let Some(i) = (0..k).rev().find(|&i| c[i] != i + n - k) else {
            return;
        };
        c[i] += 1;
        for j in i + 1..k {
            c[j] = c[j - 1] + 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn color_code_has_119_local_subsystems() {
        let all = Subsystem::all_local(7);
        assert_eq!(all.len(), 21 + 35 + 35 + 21 + 7);
        assert_eq!(all[0].to_string(), "{1,2}");
        assert_eq!(all[20].to_string(), "{6,7}");
        assert_eq!(all[21].to_string(), "{1,2,3}");
        assert_eq!(all.last().unwrap().to_string(), "{2,3,4,5,6,7}");
        assert!(all.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn parsing() {
        let s = Subsystem::parse_one_based(7, "{2, 3,4}").unwrap();
        assert_eq!(s.qubits(), &[1, 2, 3]);
        assert_eq!(s.complement(), vec![0, 4, 5, 6]);
        assert!(Subsystem::parse_one_based(7, "0,1").is_err());
        assert!(Subsystem::parse_one_based(7, "1,8").is_err());
        assert!(Subsystem::parse_one_based(7, "1,1").is_err());
        assert!(Subsystem::parse_one_based(7, "1,a").is_err());
    }

    #[test]
    fn local_bounds() {
        assert!(Subsystem::new(7, [0]).unwrap().require_local().is_err());
        assert!(Subsystem::new(7, 0..7).unwrap().require_local().is_err());
        assert!(Subsystem::new(7, 0..6).unwrap().require_local().is_ok());
    }
}
