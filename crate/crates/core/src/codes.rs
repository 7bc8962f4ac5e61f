//! Order-type block codes: equivariant maps from linear orders into `Ω^k`
//! whose value on a tuple depends only on how the order sorts that tuple.

use std::fmt;
use std::str::FromStr;

use crate::config::{check_arity_default, is_alternating, KConfig, Sign};
use crate::error::{parse_err, Error, Result};
use crate::order::{order_type, LinearOrder, OrderType};
use crate::window::{factorial, Window};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BlockCode {
    k: usize,
    // indexed by OrderType::index
    table: Vec<Sign>,
}

impl BlockCode {
    pub fn from_fn<F: FnMut(&OrderType) -> Sign>(k: usize, mut f: F) -> Result<Self> {
        check_arity_default(k)?;
        Ok(Self { k, table: OrderType::all(k).map(|s| f(&s)).collect() })
    }

    /// Table entries in lexicographic order of permutations.
    pub fn from_table(k: usize, table: Vec<Sign>) -> Result<Self> {
        check_arity_default(k)?;
        if table.len() != factorial(k) {
            return Err(Error::InvalidArgument(format!(
                "a code of arity {k} needs {} entries, got {}",
                factorial(k),
                table.len()
            )));
        }
        Ok(Self { k, table })
    }

    pub fn constant(k: usize, sign: Sign) -> Result<Self> {
        Self::from_fn(k, |_| sign)
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn value(&self, sigma: &OrderType) -> Sign {
        self.table[sigma.index()]
    }

    pub fn entries(&self) -> impl Iterator<Item = (OrderType, Sign)> + '_ {
        OrderType::all(self.k).zip(self.table.iter().copied())
    }
}

/// `table[σ] = sgn(σ)`.
pub fn sign_code(k: usize) -> Result<BlockCode> {
    BlockCode::from_fn(k, OrderType::sign)
}

/// `ω(t) = table[order_type(t)]` on every injective tuple of the window.
pub fn apply_code(code: &BlockCode, order: &LinearOrder) -> Result<KConfig> {
    if order.len() < code.k {
        return Err(Error::WindowTooSmall { size: order.len(), needed: code.k });
    }
    KConfig::from_fn(code.k, order.window().clone(), |t| {
        code.value(&order_type(t, order).expect("tuples are drawn from the order's window"))
    })
}

/// Triple orientation of the circular order obtained by closing the linear
/// order into a cycle. A triple is positive exactly when its order type is a
/// cyclic rotation of the identity, i.e. an even permutation of three.
pub fn circular_code(order: &LinearOrder) -> Result<KConfig> {
    apply_code(&sign_code(3)?, order)
}

/// Whether every image of the code is alternating, read off the table:
/// `table[σ∘τ⁻¹] = sgn(τ)·table[σ]` for all `σ, τ`.
pub fn is_alternating_code(code: &BlockCode) -> bool {
    let all: Vec<OrderType> = OrderType::all(code.k).collect();
    all.iter().all(|sigma| {
        all.iter().all(|tau| code.value(&sigma.compose(&tau.inverse())) == tau.sign() * code.value(sigma))
    })
}

/// The same property checked on images: the code applied to every order of
/// a `2k`-window must be alternating.
pub fn is_alternating_code_by_images(code: &BlockCode) -> bool {
    let window = Window::range(0, 2 * code.k);
    let all_alternating =
        LinearOrder::all(&window).all(|o| is_alternating(&apply_code(code, &o).expect("window holds 2k points")));
    all_alternating
}

impl fmt::Display for BlockCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.k)?;
        for (sigma, sign) in self.entries() {
            writeln!(f, "{sigma} : {sign}")?;
        }
        Ok(())
    }
}

impl FromStr for BlockCode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut lines = s
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (k_line, k_text) = lines.next().ok_or_else(|| parse_err(1, "missing arity line"))?;
        let k: usize = k_text.parse().map_err(|e| parse_err(k_line, format!("bad arity: {e}")))?;
        check_arity_default(k).map_err(|e| parse_err(k_line, e.to_string()))?;
        let mut table = vec![None; factorial(k)];
        for (line_no, line) in lines {
            let (lhs, rhs) = line
                .split_once(':')
                .ok_or_else(|| parse_err(line_no, "expected `<permutation> : +1|-1`"))?;
            let one_line: Vec<usize> = lhs
                .split_whitespace()
                .map(|t| t.parse::<usize>().map_err(|e| parse_err(line_no, format!("bad entry {t:?}: {e}"))))
                .collect::<Result<_>>()?;
            if one_line.len() != k {
                return Err(parse_err(line_no, format!("permutation has {} entries, expected {k}", one_line.len())));
            }
            let sigma = OrderType::from_one_line(&one_line).map_err(|e| parse_err(line_no, e.to_string()))?;
            let sign: Sign = rhs.parse().map_err(|e: Error| parse_err(line_no, e.to_string()))?;
            if table[sigma.index()].replace(sign).is_some() {
                return Err(parse_err(line_no, "permutation listed twice"));
            }
        }
        if table.iter().any(Option::is_none) {
            return Err(parse_err(s.lines().count(), "code table is incomplete"));
        }
        BlockCode::from_table(k, table.into_iter().flatten().collect())
    }
}
