//! ±1 configurations on injective tuples and the action of finitely
//! supported permutations on them.

use std::fmt;
use std::ops::{Mul, Neg};
use std::str::FromStr;

use crate::error::{parse_err, Error, Result};
use crate::perm::FinPerm;
use crate::window::{PositionTuples, Window};

/// Largest arity accepted by default. Tuple counts grow as a falling
/// factorial, and every construction needed here lives at `k <= 4`.
pub const DEFAULT_MAX_ARITY: usize = 6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    /// `Plus` for even parity.
    pub fn from_parity(odd: bool) -> Self {
        if odd {
            Sign::Minus
        } else {
            Sign::Plus
        }
    }

    pub fn from_bool(positive: bool) -> Self {
        Self::from_parity(!positive)
    }

    pub fn to_i8(self) -> i8 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }
}

impl Neg for Sign {
    type Output = Sign;

    fn neg(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

impl Mul for Sign {
    type Output = Sign;

    fn mul(self, rhs: Sign) -> Sign {
        Sign::from_parity(self != rhs)
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+1",
            Sign::Minus => "-1",
        })
    }
}

impl FromStr for Sign {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "+1" | "1" => Ok(Sign::Plus),
            "-1" => Ok(Sign::Minus),
            other => Err(Error::InvalidArgument(format!("expected +1 or -1, got {other:?}"))),
        }
    }
}

/// The restriction of a point of `Ω^k` to the injective tuples of a window.
///
/// Values are stored flat, in the lexicographic order of window positions
/// (see [`crate::window`]).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct KConfig {
    k: usize,
    window: Window,
    values: Vec<Sign>,
}

impl KConfig {
    pub fn from_fn<F>(k: usize, window: Window, f: F) -> Result<Self>
    where
        F: FnMut(&[i64]) -> Sign,
    {
        Self::from_fn_with_limit(k, DEFAULT_MAX_ARITY, window, f)
    }

    pub fn from_fn_with_limit<F>(k: usize, max_arity: usize, window: Window, mut f: F) -> Result<Self>
    where
        F: FnMut(&[i64]) -> Sign,
    {
        check_arity(k, max_arity)?;
        let values = window.tuples(k).map(|t| f(&t)).collect();
        Ok(Self { k, window, values })
    }

    /// Values listed in tuple-index order.
    pub fn from_values(k: usize, window: Window, values: Vec<Sign>) -> Result<Self> {
        check_arity(k, DEFAULT_MAX_ARITY)?;
        let expected = window.tuple_count(k);
        if values.len() != expected {
            return Err(Error::InvalidArgument(format!(
                "expected {expected} values for k={k} on a window of size {}, got {}",
                window.len(),
                values.len()
            )));
        }
        Ok(Self { k, window, values })
    }

    pub fn constant(k: usize, window: Window, sign: Sign) -> Result<Self> {
        Self::from_fn(k, window, |_| sign)
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn window(&self) -> &Window {
        &self.window
    }

    pub fn values(&self) -> &[Sign] {
        &self.values
    }

    pub fn get(&self, tuple: &[i64]) -> Result<Sign> {
        if tuple.len() != self.k {
            return Err(Error::TupleLength { expected: self.k, found: tuple.len() });
        }
        let positions = self.window.positions_of(tuple)?;
        if has_repeat(&positions) {
            return Err(Error::NonInjectiveTuple(tuple.to_vec()));
        }
        Ok(self.values[self.window.index_of_positions(&positions)])
    }

    pub(crate) fn get_by_positions(&self, positions: &[usize]) -> Sign {
        self.values[self.window.index_of_positions(positions)]
    }

    /// Tuples paired with their values, in index order.
    pub fn iter(&self) -> impl Iterator<Item = (Vec<i64>, Sign)> + '_ {
        self.window.tuples(self.k).zip(self.values.iter().copied())
    }

    pub fn negated(&self) -> KConfig {
        KConfig { values: self.values.iter().map(|&s| -s).collect(), ..self.clone() }
    }

    pub fn restrict(&self, sub: &Window) -> Result<KConfig> {
        apply_perm_onto(&FinPerm::identity(), self, sub)
    }
}

pub(crate) fn check_arity_default(k: usize) -> Result<()> {
    check_arity(k, DEFAULT_MAX_ARITY)
}

fn check_arity(k: usize, max_arity: usize) -> Result<()> {
    if k < 2 || k > max_arity {
        return Err(Error::ArityOutOfRange(k, max_arity));
    }
    Ok(())
}

fn has_repeat(positions: &[usize]) -> bool {
    positions.iter().enumerate().any(|(i, p)| positions[i + 1..].contains(p))
}

/// `(α·ω)(t) = ω(α⁻¹t)`, carried onto the relocated window `α(W)`.
pub fn apply_perm(alpha: &FinPerm, config: &KConfig) -> Result<KConfig> {
    let image = Window::from_unsorted(config.window.elements().iter().map(|&x| alpha.apply(x)).collect())?;
    apply_perm_onto(alpha, config, &image)
}

/// The action followed by restriction to `target`. Fails with
/// [`Error::DomainEscape`] when `α⁻¹(target)` leaves the configuration window.
pub fn apply_perm_onto(alpha: &FinPerm, config: &KConfig, target: &Window) -> Result<KConfig> {
    let pulled: Vec<usize> = target
        .elements()
        .iter()
        .map(|&i| config.window.position(alpha.apply_inverse(i)).ok_or(Error::DomainEscape(i)))
        .collect::<Result<_>>()?;
    let mut source = vec![0; config.k];
    let values = PositionTuples::new(target.len(), config.k)
        .map(|positions| {
            for (s, &p) in source.iter_mut().zip(&positions) {
                *s = pulled[p];
            }
            config.get_by_positions(&source)
        })
        .collect();
    Ok(KConfig { k: config.k, window: target.clone(), values })
}

/// Membership in `Ω^k_alt`, checked on adjacent transpositions, which
/// generate `S_k`.
pub fn is_alternating(config: &KConfig) -> bool {
    let k = config.k;
    let mut swapped = vec![0; k];
    PositionTuples::new(config.window.len(), k).all(|positions| {
        let value = config.get_by_positions(&positions);
        (0..k - 1).all(|j| {
            swapped.copy_from_slice(&positions);
            swapped.swap(j, j + 1);
            config.get_by_positions(&swapped) == -value
        })
    })
}

impl fmt::Display for KConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "k={} window={}", self.k, self.window)?;
        for (tuple, sign) in self.iter() {
            let parts: Vec<String> = tuple.iter().map(i64::to_string).collect();
            writeln!(f, "{} : {sign}", parts.join(" "))?;
        }
        Ok(())
    }
}

impl FromStr for KConfig {
    type Err = Error;

    /// Reads the text format written by `Display`. Tuple lines may come in
    /// any order but must cover every injective tuple exactly once.
    fn from_str(s: &str) -> Result<Self> {
        let mut lines = s
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (header_line, header) = lines.next().ok_or_else(|| parse_err(1, "missing header"))?;
        let (k, window) = parse_header(header_line, header)?;
        check_arity(k, DEFAULT_MAX_ARITY).map_err(|e| parse_err(header_line, e.to_string()))?;

        let mut values: Vec<Option<Sign>> = vec![None; window.tuple_count(k)];
        for (line_no, line) in lines {
            let (lhs, rhs) =
                line.split_once(':').ok_or_else(|| parse_err(line_no, "expected `i1 ... ik : +1|-1`"))?;
            let tuple: Vec<i64> = lhs
                .split_whitespace()
                .map(|t| t.parse::<i64>().map_err(|e| parse_err(line_no, format!("bad integer {t:?}: {e}"))))
                .collect::<Result<_>>()?;
            if tuple.len() != k {
                return Err(parse_err(line_no, format!("tuple has {} entries, expected {k}", tuple.len())));
            }
            let sign: Sign = rhs.parse().map_err(|e: Error| parse_err(line_no, e.to_string()))?;
            let positions = window.positions_of(&tuple).map_err(|e| parse_err(line_no, e.to_string()))?;
            if has_repeat(&positions) {
                return Err(parse_err(line_no, "tuple entries must be distinct"));
            }
            let slot = &mut values[window.index_of_positions(&positions)];
            if slot.is_some() {
                return Err(parse_err(line_no, "tuple listed twice"));
            }
            *slot = Some(sign);
        }
        let missing = values.iter().filter(|v| v.is_none()).count();
        if missing > 0 {
            return Err(parse_err(s.lines().count(), format!("{missing} tuples have no value")));
        }
        let values = values.into_iter().flatten().collect();
        Ok(KConfig { k, window, values })
    }
}

fn parse_header(line_no: usize, header: &str) -> Result<(usize, Window)> {
    let mut k = None;
    let mut window = None;
    for field in header.split_whitespace() {
        if let Some(v) = field.strip_prefix("k=") {
            k = Some(v.parse::<usize>().map_err(|e| parse_err(line_no, format!("bad arity: {e}")))?);
        } else if let Some(v) = field.strip_prefix("window=") {
            let elements = parse_int_list(v, ',').map_err(|m| parse_err(line_no, m))?;
            window = Some(Window::new(elements).map_err(|e| parse_err(line_no, e.to_string()))?);
        } else {
            return Err(parse_err(line_no, format!("unexpected header field {field:?}")));
        }
    }
    match (k, window) {
        (Some(k), Some(w)) => Ok((k, w)),
        _ => Err(parse_err(line_no, "header must be `k=<k> window=<ints>`")),
    }
}

pub(crate) fn parse_int_list(s: &str, sep: char) -> std::result::Result<Vec<i64>, String> {
    s.split(sep)
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<i64>().map_err(|e| format!("bad integer {t:?}: {e}")))
        .collect()
}
