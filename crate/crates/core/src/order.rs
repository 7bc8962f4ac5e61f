//! Linear orders on finite windows, their k=2 configurations, order types of
//! tuples, reversal, and circular orders.

use std::fmt;
use std::str::FromStr;

use crate::config::{is_alternating, KConfig, Sign};
use crate::error::{parse_err, Error, Result};
use crate::perm::FinPerm;
use crate::window::{factorial, PositionTuples, Window};

/// Default bound on the window size for brute-force circular realizability.
pub const DEFAULT_REALIZABILITY_BOUND: usize = 8;

/// A linear order on a window, stored as the rank of each window element
/// (rank 0 is least).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LinearOrder {
    window: Window,
    rank: Vec<usize>,
}

impl LinearOrder {
    /// Lists elements from least to greatest.
    pub fn from_sequence(sequence: Vec<i64>) -> Result<Self> {
        let window = Window::from_unsorted(sequence.clone())?;
        let mut rank = vec![0; window.len()];
        for (r, x) in sequence.iter().enumerate() {
            rank[window.position(*x).expect("element of its own window")] = r;
        }
        Ok(Self { window, rank })
    }

    /// `ranks[i]` is the rank of the `i`-th smallest window element.
    pub fn from_ranks(window: Window, ranks: Vec<usize>) -> Result<Self> {
        let n = window.len();
        let mut seen = vec![false; n];
        if ranks.len() != n || ranks.iter().any(|&r| r >= n || std::mem::replace(&mut seen[r], true)) {
            return Err(Error::InvalidArgument(format!("ranks {ranks:?} are not a bijection onto 0..{n}")));
        }
        Ok(Self { window, rank: ranks })
    }

    /// The order inherited from the integers.
    pub fn natural(window: Window) -> Self {
        let rank = (0..window.len()).collect();
        Self { window, rank }
    }

    /// Every order on the window, in lexicographic order of the position
    /// sequences (least element first).
    pub fn all(window: &Window) -> impl Iterator<Item = LinearOrder> + '_ {
        let n = window.len();
        PositionTuples::new(n, n).map(move |seq| {
            let mut rank = vec![0; n];
            for (r, p) in seq.into_iter().enumerate() {
                rank[p] = r;
            }
            LinearOrder { window: window.clone(), rank }
        })
    }

    pub fn window(&self) -> &Window {
        &self.window
    }

    pub fn len(&self) -> usize {
        self.rank.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rank.is_empty()
    }

    pub fn ranks(&self) -> &[usize] {
        &self.rank
    }

    pub fn rank_of(&self, x: i64) -> Option<usize> {
        self.window.position(x).map(|p| self.rank[p])
    }

    /// Window elements from least to greatest.
    pub fn sequence(&self) -> Vec<i64> {
        let mut seq = vec![0; self.len()];
        for (p, &r) in self.rank.iter().enumerate() {
            seq[r] = self.window.elements()[p];
        }
        seq
    }

    /// Position of this order among [`LinearOrder::all`] for its window.
    pub fn pattern_index(&self) -> usize {
        let n = self.len();
        let mut seq = vec![0; n];
        for (p, &r) in self.rank.iter().enumerate() {
            seq[r] = p;
        }
        self.window.index_of_positions(&seq)
    }

    /// The order `α·o` on `α(W)`: `α(x) < α(y)` iff `x < y`.
    pub fn relabel(&self, alpha: &FinPerm) -> LinearOrder {
        let seq = self.sequence().into_iter().map(|x| alpha.apply(x)).collect();
        LinearOrder::from_sequence(seq).expect("a permutation keeps elements distinct")
    }

    /// The induced order on a subset of the window.
    pub fn restrict(&self, sub: &Window) -> Result<LinearOrder> {
        self.act_restricted(&FinPerm::identity(), sub)
    }

    /// `(α·o)` restricted to `target`, computed without relabelling the
    /// whole window.
    pub fn act_restricted(&self, alpha: &FinPerm, target: &Window) -> Result<LinearOrder> {
        let pulled: Vec<usize> = target
            .elements()
            .iter()
            .map(|&i| self.rank_of(alpha.apply_inverse(i)).ok_or(Error::DomainEscape(i)))
            .collect::<Result<_>>()?;
        Ok(LinearOrder { window: target.clone(), rank: dense_ranks(&pulled) })
    }
}

/// Replaces distinct keys by their ranks among themselves.
fn dense_ranks(keys: &[usize]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..keys.len()).collect();
    idx.sort_unstable_by_key(|&i| keys[i]);
    let mut out = vec![0; keys.len()];
    for (r, i) in idx.into_iter().enumerate() {
        out[i] = r;
    }
    out
}

impl fmt::Display for LinearOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.sequence().iter().map(i64::to_string).collect();
        f.write_str(&parts.join(" "))
    }
}

impl FromStr for LinearOrder {
    type Err = Error;

    /// One content line of space-separated integers, least first. Blank
    /// lines and `#` comments are skipped; errors carry 1-based line numbers.
    fn from_str(s: &str) -> Result<Self> {
        let mut content = s
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let Some((line_no, line)) = content.next() else {
            return Ok(LinearOrder::natural(Window::default()));
        };
        if let Some((extra, _)) = content.next() {
            return Err(parse_err(extra, "an order takes exactly one line"));
        }
        let seq: Vec<i64> = line
            .split_whitespace()
            .map(|t| t.parse::<i64>().map_err(|e| parse_err(line_no, format!("bad integer {t:?}: {e}"))))
            .collect::<Result<_>>()?;
        LinearOrder::from_sequence(seq).map_err(|_| parse_err(line_no, "order lists an element twice"))
    }
}

/// A permutation in `S_k` recording how a tuple sorts: with one-based
/// one-line notation `σ`, `t[σ(1)] < t[σ(2)] < ... < t[σ(k)]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OrderType {
    // zero-based: sigma[j] is the tuple slot holding the j-th smallest entry
    sigma: Vec<usize>,
}

impl OrderType {
    pub fn identity(k: usize) -> Self {
        Self { sigma: (0..k).collect() }
    }

    /// From one-based one-line notation.
    pub fn from_one_line(one_line: &[usize]) -> Result<Self> {
        let k = one_line.len();
        let mut seen = vec![false; k];
        let mut sigma = Vec::with_capacity(k);
        for &v in one_line {
            if v == 0 || v > k || std::mem::replace(&mut seen[v - 1], true) {
                return Err(Error::InvalidArgument(format!("{one_line:?} is not a permutation of 1..={k}")));
            }
            sigma.push(v - 1);
        }
        Ok(Self { sigma })
    }

    /// The sorting permutation of distinct keys.
    pub fn sorting<T: Ord>(keys: &[T]) -> Self {
        let mut sigma: Vec<usize> = (0..keys.len()).collect();
        sigma.sort_by(|&a, &b| keys[a].cmp(&keys[b]));
        Self { sigma }
    }

    /// Every element of `S_k` in lexicographic order of one-line notation.
    pub fn all(k: usize) -> impl Iterator<Item = OrderType> {
        PositionTuples::new(k, k).map(|sigma| OrderType { sigma })
    }

    pub fn k(&self) -> usize {
        self.sigma.len()
    }

    pub fn one_line(&self) -> Vec<usize> {
        self.sigma.iter().map(|s| s + 1).collect()
    }

    /// Image of the one-based point `i`.
    pub fn apply(&self, i: usize) -> usize {
        self.sigma[i - 1] + 1
    }

    /// Position in [`OrderType::all`].
    pub fn index(&self) -> usize {
        Window::range(0, self.k()).index_of_positions(&self.sigma)
    }

    pub fn sign(&self) -> Sign {
        let inversions = (0..self.k())
            .flat_map(|i| (i + 1..self.k()).map(move |j| (i, j)))
            .filter(|&(i, j)| self.sigma[i] > self.sigma[j])
            .count();
        Sign::from_parity(inversions % 2 == 1)
    }

    /// `self ∘ other`: applies `other` first.
    pub fn compose(&self, other: &OrderType) -> OrderType {
        assert_eq!(self.k(), other.k(), "composing permutations of different degree");
        OrderType { sigma: other.sigma.iter().map(|&j| self.sigma[j]).collect() }
    }

    pub fn inverse(&self) -> OrderType {
        let mut sigma = vec![0; self.k()];
        for (i, &s) in self.sigma.iter().enumerate() {
            sigma[s] = i;
        }
        OrderType { sigma }
    }

    /// Rearranges a tuple: `out[i] = t[σ(i)]`.
    pub fn permute_tuple<T: Copy>(&self, tuple: &[T]) -> Vec<T> {
        self.sigma.iter().map(|&s| tuple[s]).collect()
    }
}

impl fmt::Display for OrderType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.one_line().iter().map(usize::to_string).collect();
        f.write_str(&parts.join(" "))
    }
}

/// The k=2 configuration `ω(m,n) = +1` iff `m < n` in the order.
pub fn lin_order_to_config2(order: &LinearOrder) -> Result<KConfig> {
    if order.len() < 2 {
        return Err(Error::DegenerateWindow(order.len()));
    }
    let mut values = Vec::with_capacity(order.len() * (order.len() - 1));
    for positions in PositionTuples::new(order.len(), 2) {
        values.push(Sign::from_bool(order.rank[positions[0]] < order.rank[positions[1]]));
    }
    KConfig::from_values(2, order.window.clone(), values)
}

/// Alternating plus transitive: `ω(m,n) = ω(n,l) = +1` forces `ω(m,l) = +1`.
pub fn config2_is_linear_order(config: &KConfig) -> Result<bool> {
    if config.k() != 2 {
        return Err(Error::ArityMismatch { expected: 2, found: config.k() });
    }
    if !is_alternating(config) {
        return Ok(false);
    }
    let n = config.window().len();
    for m in 0..n {
        for l in 0..n {
            if m == l || config.get_by_positions(&[m, l]) == Sign::Plus {
                continue;
            }
            // m is not below l, so no n may sit between them.
            let between = (0..n).any(|mid| {
                mid != m
                    && mid != l
                    && config.get_by_positions(&[m, mid]) == Sign::Plus
                    && config.get_by_positions(&[mid, l]) == Sign::Plus
            });
            if between {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Inverse of [`lin_order_to_config2`]: an element's rank is its number of
/// predecessors.
pub fn config2_to_order(config: &KConfig) -> Result<LinearOrder> {
    if !config2_is_linear_order(config)? {
        return Err(Error::NotALinearOrder);
    }
    let n = config.window().len();
    let ranks = (0..n)
        .map(|x| (0..n).filter(|&y| y != x && config.get_by_positions(&[y, x]) == Sign::Plus).count())
        .collect();
    LinearOrder::from_ranks(config.window().clone(), ranks)
}

/// The order type of a tuple under an order.
pub fn order_type(tuple: &[i64], order: &LinearOrder) -> Result<OrderType> {
    let ranks: Vec<usize> = tuple.iter().map(|&x| order.rank_of(x).ok_or(Error::OutOfWindow(x))).collect::<Result<_>>()?;
    Ok(OrderType::sorting(&ranks))
}

/// The opposite order: `rank'(x) = |W| - 1 - rank(x)`.
pub fn reverse(order: &LinearOrder) -> LinearOrder {
    let n = order.len();
    LinearOrder { window: order.window.clone(), rank: order.rank.iter().map(|r| n - 1 - r).collect() }
}

/// The member of `{o, reverse(o)}` that ranks `min(W)` below `max(W)`.
pub fn reversal_class_rep(order: &LinearOrder) -> Result<LinearOrder> {
    let n = order.len();
    if n < 2 {
        return Err(Error::DegenerateWindow(n));
    }
    if order.rank[0] < order.rank[n - 1] {
        Ok(order.clone())
    } else {
        Ok(reverse(order))
    }
}

/// Moves the top-ranked element to the bottom. Circular codes cannot tell an
/// order from its shifts.
pub fn cyclic_shift(order: &LinearOrder) -> LinearOrder {
    let n = order.len();
    LinearOrder { window: order.window.clone(), rank: order.rank.iter().map(|r| (r + 1) % n).collect() }
}

pub fn is_circular_realizable(config: &KConfig) -> Result<bool> {
    is_circular_realizable_bounded(config, DEFAULT_REALIZABILITY_BOUND)
}

/// Whether a k=3 configuration is the circular code of some linear order.
///
/// Each circular order is the class of `|W|` linear orders under
/// [`cyclic_shift`], and each class has exactly one member ranking `min(W)`
/// lowest, so only those `(|W|-1)!` orders are searched.
pub fn is_circular_realizable_bounded(config: &KConfig, bound: usize) -> Result<bool> {
    if config.k() != 3 {
        return Err(Error::ArityMismatch { expected: 3, found: config.k() });
    }
    let n = config.window().len();
    if n > bound {
        return Err(Error::WindowTooLarge { size: n, bound });
    }
    if n < 3 {
        return Ok(true);
    }
    let tuples: Vec<Vec<usize>> = PositionTuples::new(n, 3).collect();
    let realized = PositionTuples::new(n - 1, n - 1).any(|rest| {
        let mut rank = vec![0; n];
        for (r, p) in rest.into_iter().enumerate() {
            rank[p + 1] = r + 1;
        }
        tuples.iter().all(|t| {
            let keys = [rank[t[0]], rank[t[1]], rank[t[2]]];
            OrderType::sorting(&keys).sign() == config.get_by_positions(t)
        })
    });
    Ok(realized)
}

/// Number of orders on a window of size `n`.
pub fn order_count(n: usize) -> usize {
    factorial(n)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn order(seq: &[i64]) -> LinearOrder {
        LinearOrder::from_sequence(seq.to_vec()).unwrap()
    }

    #[test]
    fn config_of_two_point_order() {
        let c = lin_order_to_config2(&order(&[0, 1])).unwrap();
        assert_eq!(c.get(&[0, 1]).unwrap(), Sign::Plus);
        assert_eq!(c.get(&[1, 0]).unwrap(), Sign::Minus);
    }

    #[test]
    fn config_of_descending_order() {
        let c = lin_order_to_config2(&order(&[2, 1, 0])).unwrap();
        for (a, b) in [(2, 1), (1, 0), (2, 0)] {
            assert_eq!(c.get(&[a, b]).unwrap(), Sign::Plus);
            assert_eq!(c.get(&[b, a]).unwrap(), Sign::Minus);
        }
    }

    #[test]
    fn singleton_window_is_rejected() {
        assert_eq!(lin_order_to_config2(&order(&[4])), Err(Error::DegenerateWindow(1)));
    }

    #[test]
    fn three_cycle_is_not_a_linear_order() {
        let cyclic = [(0, 1), (1, 2), (2, 0)];
        let c = KConfig::from_fn(2, Window::range(0, 3), |t| {
            Sign::from_bool(cyclic.contains(&(t[0], t[1])))
        })
        .unwrap();
        assert!(is_alternating(&c));
        assert!(!config2_is_linear_order(&c).unwrap());
        assert_eq!(config2_to_order(&c), Err(Error::NotALinearOrder));
    }

    #[test]
    fn constant_config_is_not_a_linear_order() {
        let c = KConfig::constant(2, Window::range(0, 3), Sign::Plus).unwrap();
        assert!(!config2_is_linear_order(&c).unwrap());
        let c3 = KConfig::constant(3, Window::range(0, 3), Sign::Plus).unwrap();
        assert_eq!(config2_is_linear_order(&c3), Err(Error::ArityMismatch { expected: 2, found: 3 }));
    }

    #[test]
    fn order_from_config_examples() {
        let c = KConfig::from_fn(2, Window::range(0, 2), |t| Sign::from_bool(t == [0, 1])).unwrap();
        assert_eq!(config2_to_order(&c).unwrap(), order(&[0, 1]));

        let o = order(&[7, 3, 9]);
        let back = config2_to_order(&lin_order_to_config2(&o).unwrap()).unwrap();
        assert_eq!(back.rank_of(7), Some(0));
        assert_eq!(back.rank_of(3), Some(1));
        assert_eq!(back.rank_of(9), Some(2));
    }

    #[test]
    fn order_type_examples() {
        let natural = LinearOrder::natural(Window::range(0, 6));
        assert_eq!(order_type(&[1, 3, 4], &natural).unwrap(), OrderType::identity(3));
        assert_eq!(order_type(&[5, 2], &natural).unwrap().one_line(), vec![2, 1]);
        // a=0 < b=1 < c=2, tuple (b, c, a)
        assert_eq!(order_type(&[1, 2, 0], &natural).unwrap().one_line(), vec![3, 1, 2]);
        assert_eq!(order_type(&[1, 9], &natural), Err(Error::OutOfWindow(9)));
    }

    #[test]
    fn order_type_group_operations() {
        for k in 1..=4 {
            for s in OrderType::all(k) {
                assert_eq!(s.compose(&s.inverse()), OrderType::identity(k));
                for t in OrderType::all(k) {
                    assert_eq!(s.compose(&t).sign(), s.sign() * t.sign());
                }
            }
        }
        let indices: Vec<usize> = OrderType::all(3).map(|s| s.index()).collect();
        assert_eq!(indices, (0..6).collect::<Vec<_>>());
    }

    #[test]
    fn reverse_examples() {
        assert_eq!(reverse(&order(&[0, 1, 2])), order(&[2, 1, 0]));
        for n in 0..=5 {
            for o in LinearOrder::all(&Window::range(0, n)) {
                assert_eq!(reverse(&reverse(&o)), o);
                if n >= 2 {
                    assert_ne!(reverse(&o), o);
                }
            }
        }
    }

    #[test]
    fn reversal_rep_examples() {
        assert_eq!(reversal_class_rep(&order(&[0, 1])).unwrap(), order(&[0, 1]));
        assert_eq!(reversal_class_rep(&order(&[1, 0])).unwrap(), order(&[0, 1]));
        assert_eq!(reversal_class_rep(&order(&[3])), Err(Error::DegenerateWindow(1)));
        for o in LinearOrder::all(&Window::range(0, 4)) {
            let rep = reversal_class_rep(&o).unwrap();
            assert_eq!(rep, reversal_class_rep(&reverse(&o)).unwrap());
            assert_eq!(reversal_class_rep(&rep).unwrap(), rep);
        }
    }

    #[test]
    fn pattern_index_matches_enumeration() {
        let w = Window::new(vec![-1, 4, 6, 20]).unwrap();
        for (i, o) in LinearOrder::all(&w).enumerate() {
            assert_eq!(o.pattern_index(), i);
        }
    }

    #[test]
    fn text_format() {
        let o: LinearOrder = "# comment\n7 3 9\n".parse().unwrap();
        assert_eq!(o.to_string(), "7 3 9");
        assert_eq!("1 x 2".parse::<LinearOrder>().unwrap_err(), parse_err(1, "bad integer \"x\": invalid digit found in string"));
        assert!(matches!("1 2\n\n3 4".parse::<LinearOrder>(), Err(Error::Parse { line: 3, .. })));
        assert!(matches!("1 2 1".parse::<LinearOrder>(), Err(Error::Parse { line: 1, .. })));
    }

    #[test]
    fn realizability_rejects_bad_input() {
        let c2 = KConfig::constant(2, Window::range(0, 3), Sign::Plus).unwrap();
        assert_eq!(is_circular_realizable(&c2), Err(Error::ArityMismatch { expected: 3, found: 2 }));
        let big = KConfig::constant(3, Window::range(0, 9), Sign::Plus).unwrap();
        assert_eq!(is_circular_realizable(&big), Err(Error::WindowTooLarge { size: 9, bound: 8 }));
    }
}
