//! Finite windows of integers and the injective tuples drawn from them.
//!
//! Injective `k`-tuples over a window of size `n` are identified with tuples
//! of window *positions* and numbered in lexicographic order of those
//! positions. The numbering is a mixed-radix (Lehmer-style) code: the digit
//! for entry `j` counts the unused positions below it, and carries weight
//! `(n-1-j)(n-2-j)...(n-k+1)`, the number of ways to complete the tuple.

use std::fmt;

use crate::error::{Error, Result};

/// A finite, strictly increasing set of integers.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Window {
    elements: Vec<i64>,
}

impl Window {
    pub fn new(elements: Vec<i64>) -> Result<Self> {
        if elements.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidWindow(elements));
        }
        Ok(Self { elements })
    }

    /// Sorts the input first; duplicates are still rejected.
    pub fn from_unsorted(mut elements: Vec<i64>) -> Result<Self> {
        elements.sort_unstable();
        Self::new(elements)
    }

    /// The window `{start, start+1, ..., start+len-1}`.
    pub fn range(start: i64, len: usize) -> Self {
        Self { elements: (0..len as i64).map(|i| start + i).collect() }
    }

    pub fn elements(&self) -> &[i64] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn position(&self, x: i64) -> Option<usize> {
        self.elements.binary_search(&x).ok()
    }

    pub fn contains(&self, x: i64) -> bool {
        self.position(x).is_some()
    }

    pub fn is_subset_of(&self, other: &Window) -> bool {
        self.elements.iter().all(|&x| other.contains(x))
    }

    pub fn min(&self) -> Option<i64> {
        self.elements.first().copied()
    }

    pub fn max(&self) -> Option<i64> {
        self.elements.last().copied()
    }

    /// Number of injective `k`-tuples over this window.
    pub fn tuple_count(&self, k: usize) -> usize {
        falling_factorial(self.len(), k)
    }

    /// All injective `k`-tuples in index order.
    pub fn tuples(&self, k: usize) -> impl Iterator<Item = Vec<i64>> + '_ {
        PositionTuples::new(self.len(), k)
            .map(move |positions| positions.iter().map(|&p| self.elements[p]).collect())
    }

    /// Index of an injective tuple given by its window positions.
    pub(crate) fn index_of_positions(&self, positions: &[usize]) -> usize {
        let n = self.len();
        let k = positions.len();
        let mut index = 0;
        for (j, &p) in positions.iter().enumerate() {
            let below = p - positions[..j].iter().filter(|&&q| q < p).count();
            index += below * falling_factorial(n - 1 - j, k - 1 - j);
        }
        index
    }

    pub(crate) fn positions_of(&self, tuple: &[i64]) -> Result<Vec<usize>> {
        tuple.iter().map(|&x| self.position(x).ok_or(Error::OutOfWindow(x))).collect()
    }
}

impl fmt::Display for Window {
    /// Comma-separated, as used in configuration headers.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.elements.iter().map(i64::to_string).collect();
        f.write_str(&parts.join(","))
    }
}

/// An injective tuple of integers, i.e. a point of the index set of `Ω^k`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct InjTuple(Vec<i64>);

impl InjTuple {
    pub fn new(entries: Vec<i64>) -> Result<Self> {
        for (i, a) in entries.iter().enumerate() {
            if entries[i + 1..].contains(a) {
                return Err(Error::NonInjectiveTuple(entries));
            }
        }
        Ok(Self(entries))
    }

    pub fn entries(&self) -> &[i64] {
        &self.0
    }

    pub fn arity(&self) -> usize {
        self.0.len()
    }
}

impl AsRef<[i64]> for InjTuple {
    fn as_ref(&self) -> &[i64] {
        &self.0
    }
}

/// `n (n-1) ... (n-k+1)`; zero when `k > n`.
pub fn falling_factorial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (n - k + 1..=n).product()
}

pub fn factorial(n: usize) -> usize {
    (1..=n).product()
}

/// Lexicographic enumeration of injective position tuples.
#[derive(Debug, Clone)]
pub struct PositionTuples {
    n: usize,
    current: Option<Vec<usize>>,
}

impl PositionTuples {
    pub fn new(n: usize, k: usize) -> Self {
        let current = (k <= n).then(|| (0..k).collect());
        Self { n, current }
    }

    fn advance(&self, cur: &[usize]) -> Option<Vec<usize>> {
        let k = cur.len();
        // Bump the rightmost entry that has a larger unused value; refill the
        // suffix with the smallest unused values.
        for j in (0..k).rev() {
            let prefix = &cur[..j];
            let next = (cur[j] + 1..self.n).find(|v| !prefix.contains(v));
            if let Some(v) = next {
                let mut out = prefix.to_vec();
                out.push(v);
                let mut candidate = 0;
                while out.len() < k {
                    if !out.contains(&candidate) {
                        out.push(candidate);
                    }
                    candidate += 1;
                }
                return Some(out);
            }
        }
        None
    }
}

impl Iterator for PositionTuples {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let cur = self.current.take()?;
        self.current = self.advance(&cur);
        Some(cur)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn window_rejects_unsorted_and_duplicates() {
        assert!(Window::new(vec![1, 0]).is_err());
        assert!(Window::new(vec![1, 1]).is_err());
        assert!(Window::from_unsorted(vec![3, 1, 2]).is_ok());
        assert!(Window::new(vec![]).is_ok());
    }

    #[test]
    fn tuple_count_is_falling_factorial() {
        let w = Window::range(0, 5);
        for k in 0..=6 {
            assert_eq!(w.tuples(k).count(), falling_factorial(5, k));
        }
    }

    #[test]
    fn tuple_indices_follow_enumeration_order() {
        let w = Window::new(vec![-3, 4, 10, 11]).unwrap();
        for k in 1..=4 {
            for (i, positions) in PositionTuples::new(4, k).enumerate() {
                assert_eq!(w.index_of_positions(&positions), i);
            }
        }
    }

    #[test]
    fn enumeration_is_lexicographic() {
        let all: Vec<_> = PositionTuples::new(3, 2).collect();
        assert_eq!(all, vec![vec![0, 1], vec![0, 2], vec![1, 0], vec![1, 2], vec![2, 0], vec![2, 1]]);
    }

    #[test]
    fn inj_tuple_rejects_repeats() {
        assert!(InjTuple::new(vec![1, 2, 1]).is_err());
        assert_eq!(InjTuple::new(vec![5, 2]).unwrap().arity(), 2);
    }
}
