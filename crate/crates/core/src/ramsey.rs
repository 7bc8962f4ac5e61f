//! Constructive Ramsey extraction, and the minimality and proximality
//! witnesses built on it.
//!
//! A witness is a finitely supported permutation `α` together with the
//! window on which it was checked. Verification recomputes `α·ω`
//! restricted to that window from the k=2 configurations, independently of
//! how `α` was found.

use std::fmt;
use std::str::FromStr;

use crate::config::{apply_perm_onto, parse_int_list, KConfig};
use crate::error::{parse_err, Error, Result};
use crate::order::{lin_order_to_config2, LinearOrder};
use crate::perm::FinPerm;
use crate::window::Window;

/// A two-colouring of the 2-element subsets of a ground window.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairColoring {
    ground: Window,
    // upper triangle, row-major over positions i < j
    colors: Vec<u8>,
}

impl PairColoring {
    /// `f(a, b)` is called once per pair with `a < b`; colours are 0 or 1.
    pub fn from_fn<F: FnMut(i64, i64) -> u8>(ground: Window, mut f: F) -> Result<Self> {
        let e = ground.elements();
        let mut colors = Vec::with_capacity(e.len() * e.len().saturating_sub(1) / 2);
        for i in 0..e.len() {
            for j in i + 1..e.len() {
                let c = f(e[i], e[j]);
                if c > 1 {
                    return Err(Error::InvalidArgument(format!("colour {c} on pair ({}, {}) is not 0 or 1", e[i], e[j])));
                }
                colors.push(c);
            }
        }
        Ok(Self { ground, colors })
    }

    /// Colour 0 where the two orders agree on the pair, 1 where they disagree.
    pub fn agreement(o1: &LinearOrder, o2: &LinearOrder) -> Result<Self> {
        if o1.window() != o2.window() {
            return Err(Error::InvalidArgument("orders must share a ground window".to_string()));
        }
        let (r1, r2) = (o1.ranks(), o2.ranks());
        let n = r1.len();
        let mut colors = Vec::with_capacity(n * n.saturating_sub(1) / 2);
        for i in 0..n {
            for j in i + 1..n {
                colors.push(u8::from((r1[i] < r1[j]) != (r2[i] < r2[j])));
            }
        }
        Ok(Self { ground: o1.window().clone(), colors })
    }

    pub fn ground(&self) -> &Window {
        &self.ground
    }

    fn color_at(&self, i: usize, j: usize) -> u8 {
        let (i, j) = if i < j { (i, j) } else { (j, i) };
        let n = self.ground.len();
        self.colors[i * n - i * (i + 1) / 2 + (j - i - 1)]
    }

    pub fn color(&self, a: i64, b: i64) -> Result<u8> {
        let i = self.ground.position(a).ok_or(Error::OutOfWindow(a))?;
        let j = self.ground.position(b).ok_or(Error::OutOfWindow(b))?;
        if i == j {
            return Err(Error::InvalidArgument(format!("pair ({a}, {b}) is not a 2-element set")));
        }
        Ok(self.color_at(i, j))
    }

    pub fn is_monochromatic(&self, subset: &[i64]) -> Result<bool> {
        let mut colours = Vec::new();
        for (i, &a) in subset.iter().enumerate() {
            for &b in &subset[i + 1..] {
                colours.push(self.color(a, b)?);
            }
        }
        Ok(colours.windows(2).all(|w| w[0] == w[1]))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RamseyMode {
    /// Refuse grounds below the `4^m` bound.
    Strict,
    /// Run anyway and return what was found, flagged uncertified.
    BestEffort,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonoSubset {
    /// Increasing.
    pub elements: Vec<i64>,
    pub color: u8,
    /// True when the ground met the `4^m` bound and the set has size `m`.
    pub certified: bool,
}

/// Ground size that guarantees the greedy pivot search finds a
/// monochromatic `m`-set.
pub fn ramsey_bound(m: usize) -> usize {
    1usize.checked_shl(2 * m as u32).unwrap_or(usize::MAX)
}

/// Greedy pivot extraction. The least remaining element becomes a pivot and
/// only the larger of its two colour classes survives, so at least `2m+1`
/// pivots appear from a `4^m`-point ground. Each pivot has a single colour
/// towards every later pivot; the more frequent colour among them gives the
/// monochromatic set.
pub fn ramsey_mono_subset(coloring: &PairColoring, m: usize, mode: RamseyMode) -> Result<MonoSubset> {
    let n = coloring.ground.len();
    let meets_bound = n >= ramsey_bound(m);
    if mode == RamseyMode::Strict && !meets_bound {
        return Err(Error::GroundTooSmall { size: n, needed: ramsey_bound(m) });
    }

    // (position, colour towards later pivots); the last pivot fits either colour
    let mut pivots: Vec<(usize, Option<u8>)> = Vec::new();
    let mut remaining: Vec<usize> = (0..n).collect();
    while let Some((&pivot, rest)) = remaining.split_first() {
        let (zero, one): (Vec<usize>, Vec<usize>) = rest.iter().partition(|&&x| coloring.color_at(pivot, x) == 0);
        if rest.is_empty() {
            pivots.push((pivot, None));
            break;
        }
        if zero.len() >= one.len() {
            pivots.push((pivot, Some(0)));
            remaining = zero;
        } else {
            pivots.push((pivot, Some(1)));
            remaining = one;
        }
    }

    let class = |c: u8| -> Vec<i64> {
        pivots
            .iter()
            .filter(|(_, col)| col.is_none_or(|x| x == c))
            .map(|&(p, _)| coloring.ground.elements()[p])
            .collect()
    };
    let (zero, one) = (class(0), class(1));
    let (color, mut elements) = if zero.len() >= one.len() { (0, zero) } else { (1, one) };
    elements.truncate(m);
    let certified = meets_bound && elements.len() == m;
    Ok(MonoSubset { elements, color, certified })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum WitnessKind {
    Minimality,
    ProximalityAgree,
    ProximalityReverse,
}

impl WitnessKind {
    pub fn as_str(self) -> &'static str {
        match self {
            WitnessKind::Minimality => "minimality",
            WitnessKind::ProximalityAgree => "proximality-agree",
            WitnessKind::ProximalityReverse => "proximality-reverse",
        }
    }
}

impl fmt::Display for WitnessKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for WitnessKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "minimality" => Ok(WitnessKind::Minimality),
            "proximality-agree" => Ok(WitnessKind::ProximalityAgree),
            "proximality-reverse" => Ok(WitnessKind::ProximalityReverse),
            other => Err(Error::InvalidArgument(format!("unknown witness kind {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Witness {
    pub alpha: FinPerm,
    pub checked_window: Window,
    pub kind: WitnessKind,
}

impl Witness {
    /// `(α·source)|_W` equals `target`.
    pub fn verify_minimality(&self, source: &LinearOrder, target: &LinearOrder) -> Result<bool> {
        if self.kind != WitnessKind::Minimality || &self.checked_window != target.window() {
            return Ok(false);
        }
        if target.len() < 2 {
            return Ok(self.pulled_back_inside(source));
        }
        let moved = self.restricted_image(source)?;
        Ok(moved == lin_order_to_config2(target)?)
    }

    /// The two images agree on `W` (or are negatives of each other) as the
    /// kind claims.
    pub fn verify_proximality(&self, o1: &LinearOrder, o2: &LinearOrder) -> Result<bool> {
        if self.checked_window.len() < 2 {
            return Ok(self.kind == WitnessKind::ProximalityAgree
                && self.pulled_back_inside(o1)
                && self.pulled_back_inside(o2));
        }
        let r1 = self.restricted_image(o1)?;
        let r2 = self.restricted_image(o2)?;
        Ok(match self.kind {
            WitnessKind::ProximalityAgree => r1 == r2,
            WitnessKind::ProximalityReverse => r2 == r1.negated(),
            WitnessKind::Minimality => false,
        })
    }

    fn restricted_image(&self, order: &LinearOrder) -> Result<KConfig> {
        match apply_perm_onto(&self.alpha, &lin_order_to_config2(order)?, &self.checked_window) {
            Err(Error::DomainEscape(_)) => Err(Error::InvalidArgument(
                "witness pulls the checked window outside the ground".to_string(),
            )),
            other => other,
        }
    }

    fn pulled_back_inside(&self, order: &LinearOrder) -> bool {
        self.checked_window.elements().iter().all(|&w| order.window().contains(self.alpha.apply_inverse(w)))
    }
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "kind={}", self.kind)?;
        writeln!(f, "window={}", self.checked_window)?;
        writeln!(f, "alpha={}", self.alpha)
    }
}

impl FromStr for Witness {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (mut kind, mut window, mut alpha) = (None, None, None);
        for (i, line) in s.lines().enumerate() {
            let line_no = i + 1;
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| parse_err(line_no, "expected key=value"))?;
            let wrap = |e: Error| parse_err(line_no, e.to_string());
            match key.trim() {
                "kind" => kind = Some(value.trim().parse::<WitnessKind>().map_err(wrap)?),
                "window" => {
                    let elements = parse_int_list(value, ',').map_err(|m| parse_err(line_no, m))?;
                    window = Some(Window::new(elements).map_err(wrap)?);
                }
                "alpha" => alpha = Some(value.parse::<FinPerm>().map_err(wrap)?),
                other => return Err(parse_err(line_no, format!("unknown key {other:?}"))),
            }
        }
        let last = s.lines().count().max(1);
        Ok(Witness {
            kind: kind.ok_or_else(|| parse_err(last, "missing kind"))?,
            checked_window: window.ok_or_else(|| parse_err(last, "missing window"))?,
            alpha: alpha.ok_or_else(|| parse_err(last, "missing alpha"))?,
        })
    }
}

/// A permutation carrying `source` onto the pattern `target` on its window.
///
/// The `|W|` numerically smallest ground points are sent, in increasing
/// source order, to the elements of `W` in increasing target order.
pub fn minimality_witness(source: &LinearOrder, target: &LinearOrder) -> Result<Witness> {
    let (ground, w) = (source.window(), target.window());
    if ground.len() < w.len() {
        return Err(Error::GroundTooSmall { size: ground.len(), needed: w.len() });
    }
    let checked_window = w.clone();
    if w.is_subset_of(ground) && source.restrict(w)? == *target {
        return Ok(Witness { alpha: FinPerm::identity(), checked_window, kind: WitnessKind::Minimality });
    }
    let mut chosen = ground.elements()[..w.len()].to_vec();
    chosen.sort_by_key(|&x| source.rank_of(x));
    let alpha = FinPerm::extend_injection(chosen.into_iter().zip(target.sequence()))?;
    Ok(Witness { alpha, checked_window, kind: WitnessKind::Minimality })
}

/// A permutation under which two orders on a shared ground become equal or
/// opposite on `W`.
///
/// Pairs are coloured by agreement, a monochromatic `|W|`-set is extracted,
/// and that set is sent onto `W` preserving the first order.
pub fn proximality_witness(o1: &LinearOrder, o2: &LinearOrder, w: &Window) -> Result<Witness> {
    let coloring = PairColoring::agreement(o1, o2)?;
    let ground = o1.window();
    let needed = ramsey_bound(w.len());
    if ground.len() < needed {
        return Err(Error::GroundTooSmall { size: ground.len(), needed });
    }
    let checked_window = w.clone();
    if o1 == o2 && w.is_subset_of(ground) {
        return Ok(Witness { alpha: FinPerm::identity(), checked_window, kind: WitnessKind::ProximalityAgree });
    }
    let mono = ramsey_mono_subset(&coloring, w.len(), RamseyMode::Strict)?;
    let mut chosen = mono.elements;
    chosen.sort_by_key(|&x| o1.rank_of(x));
    let alpha = FinPerm::extend_injection(chosen.into_iter().zip(w.elements().iter().copied()))?;
    let kind = if mono.color == 0 { WitnessKind::ProximalityAgree } else { WitnessKind::ProximalityReverse };
    Ok(Witness { alpha, checked_window, kind })
}
