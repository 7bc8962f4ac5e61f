//! Finitely supported permutations of the integers.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// A permutation of ℤ moving only finitely many points.
///
/// Stored in canonical form: fixed points pruned, pairs sorted by source, so
/// structural equality coincides with equality as group elements.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct FinPerm {
    forward: BTreeMap<i64, i64>,
}

impl FinPerm {
    pub fn identity() -> Self {
        Self::default()
    }

    /// Builds a permutation from `source -> target` pairs. Self-maps are
    /// allowed in the input and pruned.
    pub fn from_pairs<I: IntoIterator<Item = (i64, i64)>>(pairs: I) -> Result<Self> {
        let mut forward = BTreeMap::new();
        let mut targets = BTreeSet::new();
        for (a, b) in pairs {
            if forward.insert(a, b).is_some() {
                return Err(Error::InvalidPermutation(format!("source {a} listed twice")));
            }
            if !targets.insert(b) {
                return Err(Error::InvalidPermutation(format!("target {b} listed twice")));
            }
        }
        let sources: BTreeSet<i64> = forward.keys().copied().collect();
        if sources != targets {
            return Err(Error::InvalidPermutation(
                "sources and targets differ as sets".to_string(),
            ));
        }
        forward.retain(|a, b| a != b);
        Ok(Self { forward })
    }

    /// Any finite partial injection extends to a finitely supported
    /// permutation. Points of `targets \ sources` are sent to points of
    /// `sources \ targets`, both taken in increasing order.
    pub fn extend_injection<I: IntoIterator<Item = (i64, i64)>>(partial: I) -> Result<Self> {
        let partial: BTreeMap<i64, i64> = {
            let mut m = BTreeMap::new();
            for (a, b) in partial {
                if m.insert(a, b).is_some_and(|old| old != b) {
                    return Err(Error::InvalidPermutation(format!("source {a} mapped twice")));
                }
            }
            m
        };
        let images: BTreeSet<i64> = partial.values().copied().collect();
        if images.len() != partial.len() {
            return Err(Error::InvalidPermutation("partial map is not injective".to_string()));
        }
        let free_sources = images.iter().filter(|b| !partial.contains_key(b));
        let free_targets = partial.keys().filter(|a| !images.contains(a));
        let completion: Vec<(i64, i64)> = free_sources.copied().zip(free_targets.copied()).collect();
        Self::from_pairs(partial.into_iter().chain(completion))
    }

    pub fn transposition(a: i64, b: i64) -> Self {
        Self::from_pairs([(a, b), (b, a)]).expect("a transposition is a permutation")
    }

    /// The cycle `c[0] -> c[1] -> ... -> c[last] -> c[0]`.
    pub fn cycle(points: &[i64]) -> Result<Self> {
        let n = points.len();
        Self::from_pairs((0..n).map(|i| (points[i], points[(i + 1) % n])))
    }

    pub fn apply(&self, x: i64) -> i64 {
        self.forward.get(&x).copied().unwrap_or(x)
    }

    pub fn apply_inverse(&self, x: i64) -> i64 {
        // Support is tiny in practice; a reverse scan beats keeping a second map.
        self.forward.iter().find(|(_, &b)| b == x).map_or(x, |(&a, _)| a)
    }

    pub fn support(&self) -> impl Iterator<Item = i64> + '_ {
        self.forward.keys().copied()
    }

    pub fn pairs(&self) -> impl Iterator<Item = (i64, i64)> + '_ {
        self.forward.iter().map(|(&a, &b)| (a, b))
    }

    pub fn is_identity(&self) -> bool {
        self.forward.is_empty()
    }

    /// `self ∘ other`: applies `other` first.
    pub fn compose(&self, other: &FinPerm) -> FinPerm {
        let points: BTreeSet<i64> = self.support().chain(other.support()).collect();
        let forward = points
            .into_iter()
            .map(|x| (x, self.apply(other.apply(x))))
            .filter(|(a, b)| a != b)
            .collect();
        FinPerm { forward }
    }

    pub fn inverse(&self) -> FinPerm {
        FinPerm { forward: self.forward.iter().map(|(&a, &b)| (b, a)).collect() }
    }
}

impl fmt::Display for FinPerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.pairs().map(|(a, b)| format!("{a}->{b}")).collect();
        f.write_str(&parts.join(","))
    }
}

impl FromStr for FinPerm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Ok(Self::identity());
        }
        let mut pairs = Vec::new();
        for part in s.split(',') {
            let (a, b) = part
                .split_once("->")
                .ok_or_else(|| Error::InvalidPermutation(format!("malformed pair {part:?}")))?;
            let parse = |t: &str| {
                t.trim()
                    .parse::<i64>()
                    .map_err(|e| Error::InvalidPermutation(format!("bad integer {t:?}: {e}")))
            };
            pairs.push((parse(a)?, parse(b)?));
        }
        Self::from_pairs(pairs)
    }
}
