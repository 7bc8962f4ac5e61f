//! Cylinder measures of the exchangeable measure on linear orders, and
//! Monte-Carlo orbit averages that should converge to them from any
//! starting order.
//!
//! Randomness is derived per chunk from a master seed, a label and the chunk
//! index, so counts do not depend on how many threads run the chunks.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::order::LinearOrder;
use crate::perm::FinPerm;
use crate::window::{factorial, Window};

/// Trials per independently seeded chunk.
pub const CHUNK_TRIALS: u64 = 4096;

/// Largest pattern window for which all `|W|!` pattern counts are tallied.
pub const MAX_PATTERN_WINDOW: usize = 8;

/// `1 / |W|!`, the mass of the cylinder fixing the order on `W`.
pub fn cylinder_measure(pattern: &LinearOrder) -> BigRational {
    let den: BigInt = (1..=pattern.len() as u64).map(BigInt::from).product();
    BigRational::new(BigInt::from(1), den)
}

/// A ChaCha stream keyed by `(master, label, chunk)`: the master seed fills
/// bytes 0..8, the chunk index bytes 8..16, and the label (truncated to 16
/// bytes, zero padded) the rest.
pub fn derive_rng(master: u64, label: &str, chunk: u64) -> ChaCha8Rng {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&master.to_le_bytes());
    key[8..16].copy_from_slice(&chunk.to_le_bytes());
    for (dst, src) in key[16..].iter_mut().zip(label.bytes()) {
        *dst = src;
    }
    ChaCha8Rng::from_seed(key)
}

/// A uniformly random order on the window (Fisher-Yates shuffle of ranks).
pub fn random_linear_order(window: &Window, seed: u64) -> LinearOrder {
    let mut rng = derive_rng(seed, "random-order", 0);
    random_order_with(window, &mut rng)
}

pub fn random_order_with(window: &Window, rng: &mut ChaCha8Rng) -> LinearOrder {
    let mut ranks: Vec<usize> = (0..window.len()).collect();
    ranks.shuffle(rng);
    LinearOrder::from_ranks(window.clone(), ranks).expect("a shuffle of 0..n is a bijection")
}

/// A uniformly random injection of `W` into the ground, returned as the
/// finitely supported permutation sending the chosen ground points onto `W`
/// (the i-th chosen point goes to the i-th element of `W`).
pub fn random_injection_perm(ground: &[i64], w: &Window, scratch: &mut Vec<usize>, rng: &mut ChaCha8Rng) -> FinPerm {
    if scratch.len() != ground.len() {
        *scratch = (0..ground.len()).collect();
    }
    let (chosen, _) = scratch.partial_shuffle(rng, w.len());
    let pairs = chosen.iter().zip(w.elements()).map(|(&g, &x)| (ground[g], x));
    FinPerm::extend_injection(pairs).expect("distinct ground points onto distinct window points")
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PatternCounts {
    pub window: Window,
    /// Indexed by [`LinearOrder::pattern_index`].
    pub hits: Vec<u64>,
    pub trials: u64,
    pub seed: u64,
}

impl PatternCounts {
    pub fn stats(&self) -> Vec<PatternStat> {
        LinearOrder::all(&self.window)
            .zip(&self.hits)
            .map(|(pattern, &hits)| PatternStat::new(pattern, hits, self.trials, self.seed))
            .collect()
    }
}

/// Tallies, over `trials` random group elements `α`, which pattern
/// `(α·source)|_W` shows.
pub fn pattern_counts(source: &LinearOrder, w: &Window, trials: u64, seed: u64) -> Result<PatternCounts> {
    validate(source, w, trials)?;
    let chunks = trials.div_ceil(CHUNK_TRIALS);
    let per_chunk: Vec<Vec<u64>> = (0..chunks)
        .into_par_iter()
        .map(|chunk| {
            let n = CHUNK_TRIALS.min(trials - chunk * CHUNK_TRIALS);
            count_chunk(source, w, n, derive_rng(seed, "orbit-average", chunk))
        })
        .collect();
    let mut hits = vec![0u64; factorial(w.len())];
    for chunk in per_chunk {
        for (h, c) in hits.iter_mut().zip(chunk) {
            *h += c;
        }
    }
    Ok(PatternCounts { window: w.clone(), hits, trials, seed })
}

fn validate(source: &LinearOrder, w: &Window, trials: u64) -> Result<()> {
    if trials == 0 {
        return Err(Error::InvalidArgument("trials must be at least 1".to_string()));
    }
    if w.len() > MAX_PATTERN_WINDOW {
        return Err(Error::WindowTooLarge { size: w.len(), bound: MAX_PATTERN_WINDOW });
    }
    if source.len() < w.len() {
        return Err(Error::GroundTooSmall { size: source.len(), needed: w.len() });
    }
    Ok(())
}

fn count_chunk(source: &LinearOrder, w: &Window, trials: u64, mut rng: ChaCha8Rng) -> Vec<u64> {
    let ground = source.window().elements();
    let mut hits = vec![0u64; factorial(w.len())];
    let mut scratch = Vec::new();
    for _ in 0..trials {
        let alpha = random_injection_perm(ground, w, &mut scratch, &mut rng);
        let seen = source.act_restricted(&alpha, w).expect("α⁻¹(W) lies in the ground by construction");
        hits[seen.pattern_index()] += 1;
    }
    hits
}

/// Frequency of one pattern along a random walk through the orbit of
/// `source`.
pub fn orbit_average(source: &LinearOrder, pattern: &LinearOrder, trials: u64, seed: u64) -> Result<PatternStat> {
    let counts = pattern_counts(source, pattern.window(), trials, seed)?;
    let hits = counts.hits[pattern.pattern_index()];
    Ok(PatternStat::new(pattern.clone(), hits, trials, seed))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PatternStat {
    pub pattern: LinearOrder,
    pub exact: BigRational,
    pub hits: u64,
    pub trials: u64,
    pub seed: u64,
}

impl PatternStat {
    pub fn new(pattern: LinearOrder, hits: u64, trials: u64, seed: u64) -> Self {
        let exact = cylinder_measure(&pattern);
        Self { pattern, exact, hits, trials, seed }
    }

    pub fn empirical(&self) -> f64 {
        self.hits as f64 / self.trials as f64
    }

    /// `3·sqrt(p(1-p)/trials)` around the exact value.
    pub fn three_sigma(&self) -> f64 {
        let p = self.exact.to_f64().unwrap_or(0.0);
        3.0 * (p * (1.0 - p) / self.trials as f64).sqrt()
    }

    pub fn within_three_sigma(&self) -> bool {
        let p = self.exact.to_f64().unwrap_or(0.0);
        (self.empirical() - p).abs() <= self.three_sigma()
    }

    pub fn to_record(&self) -> PatternStatRecord {
        PatternStatRecord {
            pattern: self.pattern.to_string(),
            window: self.pattern.window().elements().to_vec(),
            exact_num: self.exact.numer().to_u64().unwrap_or(u64::MAX),
            exact_den: self.exact.denom().to_u64().unwrap_or(u64::MAX),
            empirical: self.empirical(),
            trials: self.trials,
            seed: self.seed,
        }
    }

    pub fn from_record(record: &PatternStatRecord) -> Result<Self> {
        let pattern: LinearOrder = record.pattern.parse()?;
        if pattern.window().elements() != record.window.as_slice() {
            return Err(Error::InvalidArgument("pattern does not match its window".to_string()));
        }
        if record.trials == 0 || !(0.0..=1.0).contains(&record.empirical) {
            return Err(Error::InvalidArgument("record violates 0 <= empirical <= 1, trials >= 1".to_string()));
        }
        let hits = (record.empirical * record.trials as f64).round() as u64;
        let stat = PatternStat::new(pattern, hits, record.trials, record.seed);
        if stat.exact != BigRational::new(record.exact_num.into(), record.exact_den.into()) {
            return Err(Error::InvalidArgument("exact value is not 1/|W|!".to_string()));
        }
        Ok(stat)
    }
}

/// Serialized form of a [`PatternStat`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PatternStatRecord {
    pub pattern: String,
    pub window: Vec<i64>,
    pub exact_num: u64,
    pub exact_den: u64,
    pub empirical: f64,
    pub trials: u64,
    pub seed: u64,
}

impl Serialize for PatternStat {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_record().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for PatternStat {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let record = PatternStatRecord::deserialize(deserializer)?;
        PatternStat::from_record(&record).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::{One, Zero};

    #[test]
    fn cylinder_examples() {
        let q = |n: i64, d: i64| BigRational::new(n.into(), d.into());
        assert_eq!(cylinder_measure(&LinearOrder::natural(Window::range(0, 1))), q(1, 1));
        assert_eq!(cylinder_measure(&LinearOrder::natural(Window::range(0, 3))), q(1, 6));
        assert_eq!(cylinder_measure(&LinearOrder::natural(Window::range(0, 5))), q(1, 120));
    }

    #[test]
    fn cylinder_measures_sum_to_one() {
        for n in 1..=6 {
            let w = Window::range(0, n);
            let total = LinearOrder::all(&w).fold(BigRational::zero(), |acc, o| acc + cylinder_measure(&o));
            assert!(total.is_one(), "n = {n}");
        }
    }

    #[test]
    fn random_order_is_deterministic() {
        let w = Window::range(-5, 12);
        assert_eq!(random_linear_order(&w, 3), random_linear_order(&w, 3));
        assert_ne!(random_linear_order(&w, 3), random_linear_order(&w, 4));
        let single = Window::range(7, 1);
        assert_eq!(random_linear_order(&single, 99), LinearOrder::natural(single.clone()));
    }

    #[test]
    fn singleton_pattern_always_hits() {
        let source = random_linear_order(&Window::range(0, 10), 1);
        let pattern = LinearOrder::natural(Window::range(100, 1));
        let stat = orbit_average(&source, &pattern, 500, 2).unwrap();
        assert_eq!(stat.empirical(), 1.0);
    }

    #[test]
    fn rejects_bad_arguments() {
        let source = LinearOrder::natural(Window::range(0, 3));
        let pattern = LinearOrder::natural(Window::range(0, 4));
        assert_eq!(orbit_average(&source, &pattern, 10, 0), Err(Error::GroundTooSmall { size: 3, needed: 4 }));
        let small = LinearOrder::natural(Window::range(0, 2));
        assert!(matches!(orbit_average(&source, &small, 0, 0), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn counts_partition_the_trials() {
        let source = random_linear_order(&Window::range(0, 30), 5);
        let counts = pattern_counts(&source, &Window::range(0, 3), 10_000, 9).unwrap();
        assert_eq!(counts.hits.iter().sum::<u64>(), 10_000);
    }

    #[test]
    fn record_round_trip() {
        let stat = PatternStat::new(LinearOrder::from_sequence(vec![7, 3, 9]).unwrap(), 17, 100, 4);
        let json = serde_json::to_string(&stat).unwrap();
        assert_eq!(
            json,
            r#"{"pattern":"7 3 9","window":[3,7,9],"exact_num":1,"exact_den":6,"empirical":0.17,"trials":100,"seed":4}"#
        );
        assert_eq!(serde_json::from_str::<PatternStat>(&json).unwrap(), stat);
    }
}
