//! Exact orientation on the moment curve.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::config::Sign;
use crate::error::{Error, Result};

/// Determinant of a square integer matrix by fraction-free (Bareiss)
/// elimination. Every intermediate division is exact.
pub fn bareiss_determinant(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    assert!(m.iter().all(|row| row.len() == n), "matrix must be square");
    let mut negate = false;
    let mut prev = BigInt::one();
    for k in 0..n {
        if m[k][k].is_zero() {
            let Some(swap) = (k + 1..n).find(|&i| !m[i][k].is_zero()) else {
                return BigInt::zero();
            };
            m.swap(k, swap);
            negate = !negate;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&m[i][j] * &m[k][k] - &m[i][k] * &m[k][j]) / &prev;
                m[i][j] = v;
            }
        }
        prev = m[k][k].clone();
    }
    let det = if n == 0 { BigInt::one() } else { m[n - 1][n - 1].clone() };
    if negate {
        -det
    } else {
        det
    }
}

/// Rows `(1, t, t², ..., t^{k-1})` scaled by positive integers so every entry
/// is integral. Positive row scaling leaves the determinant's sign alone.
fn integral_moment_matrix(points: &[BigRational]) -> Vec<Vec<BigInt>> {
    let k = points.len();
    points
        .iter()
        .map(|t| {
            let row: Vec<BigRational> = std::iter::successors(Some(BigRational::one()), |p| Some(p * t)).take(k).collect();
            let lcm = row.iter().fold(BigInt::one(), |acc, q| num_integer::Integer::lcm(&acc, q.denom()));
            row.iter().map(|q| q.numer() * (&lcm / q.denom())).collect()
        })
        .collect()
}

/// Orientation of the simplex spanned by the points `(t, t², ..., t^{k-1})`
/// of the moment curve, i.e. the sign of the Vandermonde determinant.
pub fn moment_curve_orientation(points: &[BigRational]) -> Result<Sign> {
    if points.len() < 2 {
        return Err(Error::DegenerateInput(format!("need at least 2 parameters, got {}", points.len())));
    }
    for (i, a) in points.iter().enumerate() {
        if points[i + 1..].contains(a) {
            return Err(Error::DegenerateInput(format!("parameter {a} is repeated")));
        }
    }
    let det = bareiss_determinant(integral_moment_matrix(points));
    debug_assert!(!det.is_zero(), "distinct parameters give a nonzero Vandermonde determinant");
    Ok(Sign::from_bool(det.is_positive()))
}

pub fn moment_curve_orientation_int(points: &[i64]) -> Result<Sign> {
    let rationals: Vec<BigRational> = points.iter().map(|&t| BigRational::from_integer(t.into())).collect();
    moment_curve_orientation(&rationals)
}

/// `∏_{a<b} sign(t_b - t_a)`, the closed form of the same sign.
pub fn vandermonde_sign(points: &[BigRational]) -> Sign {
    let inversions = (0..points.len())
        .flat_map(|a| (a + 1..points.len()).map(move |b| (a, b)))
        .filter(|&(a, b)| points[b] < points[a])
        .count();
    Sign::from_parity(inversions % 2 == 1)
}
