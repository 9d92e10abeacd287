//! Exact integer and rational linear algebra.
//!
//! Everything here works over `BigInt` / `BigRational`. Matrices are small
//! (a handful of rows, at most a few dozen columns), so plain elimination is
//! used throughout.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Vector of arbitrary-precision integers.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IntVector(pub Vec<BigInt>);

/// Vector of exact rationals, always kept in lowest terms.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RationalVector(pub Vec<BigRational>);

impl IntVector {
    pub fn new(entries: Vec<BigInt>) -> Self {
        IntVector(entries)
    }

    pub fn from_i64(entries: &[i64]) -> Self {
        IntVector(entries.iter().map(|&x| BigInt::from(x)).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.0
    }

    /// Converts to machine integers, or `None` if an entry does not fit.
    pub fn to_i64(&self) -> Option<Vec<i64>> {
        self.0.iter().map(|x| i64::try_from(x).ok()).collect()
    }

    pub fn dot(&self, other: &IntVector) -> BigInt {
        self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum()
    }
}

impl fmt::Display for IntVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

impl RationalVector {
    pub fn entries(&self) -> &[BigRational] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn sum(&self) -> BigRational {
        self.0.iter().cloned().sum()
    }
}

/// Renders a rational as `p` or `p/q`.
pub fn format_rational(q: &BigRational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Parses `p` or `p/q`.
pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((p, q)) => {
            let q: BigInt = q.trim().parse().ok()?;
            if q.is_zero() {
                return None;
            }
            Some(BigRational::new(p.trim().parse().ok()?, q))
        }
        None => Some(BigRational::from_integer(s.parse().ok()?)),
    }
}

fn check_widths<'a>(rows: impl IntoIterator<Item = &'a IntVector>) -> Result<Option<usize>> {
    let mut width = None;
    for row in rows {
        match width {
            None => width = Some(row.len()),
            Some(w) if w != row.len() => {
                return Err(Error::DimensionMismatch {
                    expected: w,
                    found: row.len(),
                })
            }
            Some(_) => {}
        }
    }
    Ok(width)
}

/// Divides `v` by the gcd of its entries. The sign is never flipped.
pub fn primitive_vector(v: &IntVector) -> Result<IntVector> {
    let g = v.0.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    if g.is_zero() {
        return Err(Error::ZeroVector);
    }
    Ok(IntVector(v.0.iter().map(|x| x / &g).collect()))
}

/// In-place fraction-free (Bareiss) elimination. Returns the pivot columns.
fn bareiss(m: &mut [Vec<BigInt>], width: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut prev = BigInt::one();
    let mut r = 0;
    for c in 0..width {
        if r == m.len() {
            break;
        }
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        for i in r + 1..m.len() {
            for j in c + 1..width {
                let v = (&m[r][c] * &m[i][j] - &m[i][c] * &m[r][j]) / &prev;
                m[i][j] = v;
            }
            m[i][c] = BigInt::zero();
        }
        prev = m[r][c].clone();
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Rank over the rationals.
pub fn rank(rows: &[IntVector]) -> Result<usize> {
    let Some(width) = check_widths(rows)? else {
        return Ok(0);
    };
    let mut m: Vec<Vec<BigInt>> = rows.iter().map(|r| r.0.clone()).collect();
    Ok(bareiss(&mut m, width).len())
}

/// Reduced row echelon form over the rationals; returns the pivot columns.
fn rref(m: &mut [Vec<BigRational>], width: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..width {
        if r == m.len() {
            break;
        }
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for x in m[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                let pivot = m[r][c..].to_vec();
                for (x, y) in m[i][c..].iter_mut().zip(&pivot) {
                    *x -= &f * y;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

fn to_rational_rows(rows: &[IntVector]) -> Vec<Vec<BigRational>> {
    rows.iter()
        .map(|r| r.0.iter().cloned().map(BigRational::from_integer).collect())
        .collect()
}

/// Unique `r` with `sum r_i * columns[i] = target`, or `None` if `target` is
/// outside the span of the columns.
pub fn solve_rational(columns: &[IntVector], target: &IntVector) -> Result<Option<RationalVector>> {
    let m = columns.len();
    if let Some(w) = check_widths(columns)? {
        if w != target.len() {
            return Err(Error::DimensionMismatch {
                expected: w,
                found: target.len(),
            });
        }
    }
    if rank(columns)? != m {
        return Err(Error::NotIndependent);
    }
    // Augmented system: one row per coordinate, one column per unknown.
    let d = target.len();
    let mut aug: Vec<Vec<BigRational>> = (0..d)
        .map(|i| {
            columns
                .iter()
                .map(|c| BigRational::from_integer(c.0[i].clone()))
                .chain(std::iter::once(BigRational::from_integer(target.0[i].clone())))
                .collect()
        })
        .collect();
    let pivots = rref(&mut aug, m + 1);
    if pivots.last() == Some(&m) {
        return Ok(None);
    }
    debug_assert_eq!(pivots.len(), m);
    let sol = (0..m).map(|i| aug[i][m].clone()).collect();
    Ok(Some(RationalVector(sol)))
}

/// Primitive integer basis of `{x : row . x = 0 for every row}` in `Q^width`.
pub fn nullspace(rows: &[IntVector], width: usize) -> Result<Vec<IntVector>> {
    if let Some(w) = check_widths(rows)? {
        if w != width {
            return Err(Error::DimensionMismatch {
                expected: width,
                found: w,
            });
        }
    }
    let mut m = to_rational_rows(rows);
    let pivots = rref(&mut m, width);
    let free: Vec<usize> = (0..width).filter(|c| !pivots.contains(c)).collect();
    let mut basis = Vec::with_capacity(free.len());
    for &f in &free {
        let mut x = vec![BigRational::zero(); width];
        x[f] = BigRational::one();
        for (i, &p) in pivots.iter().enumerate() {
            x[p] = -m[i][f].clone();
        }
        let lcm = x.iter().fold(BigInt::one(), |l, q| l.lcm(q.denom()));
        let ints = x.iter().map(|q| q.numer() * (&lcm / q.denom())).collect();
        basis.push(primitive_vector(&IntVector(ints))?);
    }
    Ok(basis)
}

/// Row-style Hermite normal form of the lattice generated by `rows`.
/// Returns the nonzero rows: echelon form, positive pivots, entries above
/// each pivot reduced into `[0, pivot)`.
pub fn hermite_normal_form(rows: &[IntVector]) -> Result<Vec<IntVector>> {
    let Some(width) = check_widths(rows)? else {
        return Ok(Vec::new());
    };
    let mut m: Vec<Vec<BigInt>> = rows.iter().map(|r| r.0.clone()).collect();
    let mut r = 0;
    for c in 0..width {
        if r == m.len() {
            break;
        }
        // Euclid on column c among rows r.., until one nonzero entry remains.
        loop {
            let mut best: Option<usize> = None;
            for i in r..m.len() {
                if !m[i][c].is_zero()
                    && best.is_none_or(|b| m[i][c].abs() < m[b][c].abs())
                {
                    best = Some(i);
                }
            }
            let Some(b) = best else { break };
            m.swap(r, b);
            let mut done = true;
            for i in r + 1..m.len() {
                if m[i][c].is_zero() {
                    continue;
                }
                let q = m[i][c].div_floor(&m[r][c]);
                let pivot = m[r][c..].to_vec();
                for (x, y) in m[i][c..].iter_mut().zip(&pivot) {
                    *x -= &q * y;
                }
                if !m[i][c].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if m[r][c].is_zero() {
            continue;
        }
        if m[r][c].is_negative() {
            for x in m[r].iter_mut() {
                *x = -x.clone();
            }
        }
        for i in 0..r {
            let q = m[i][c].div_floor(&m[r][c]);
            if !q.is_zero() {
                let pivot = m[r][c..].to_vec();
                for (x, y) in m[i][c..].iter_mut().zip(&pivot) {
                    *x -= &q * y;
                }
            }
        }
        r += 1;
    }
    m.truncate(r);
    Ok(m.into_iter().map(IntVector).collect())
}

/// Whether the integer combinations of `points` generate all of `Z^d`.
pub fn spans_full_lattice(points: &[IntVector], d: usize) -> Result<bool> {
    for p in points {
        if p.len() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: p.len(),
            });
        }
    }
    let hnf = hermite_normal_form(points)?;
    if hnf.len() != d {
        return Ok(false);
    }
    // Echelon of full rank d in d columns: pivots sit on the diagonal.
    Ok((0..d).all(|i| hnf[i].0[i].is_one()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn iv(x: &[i64]) -> IntVector {
        IntVector::from_i64(x)
    }

    fn q(p: i64, d: i64) -> BigRational {
        BigRational::new(p.into(), d.into())
    }

    #[test]
    fn primitive_divides_by_gcd() {
        assert_eq!(primitive_vector(&iv(&[2, 4, 6])).unwrap(), iv(&[1, 2, 3]));
        assert_eq!(primitive_vector(&iv(&[-3, 6])).unwrap(), iv(&[-1, 2]));
        assert_eq!(primitive_vector(&iv(&[0, 0])), Err(Error::ZeroVector));
    }

    #[test]
    fn rank_examples() {
        assert_eq!(rank(&[iv(&[2, 1]), iv(&[1, 2])]).unwrap(), 2);
        assert_eq!(rank(&[iv(&[1, 0]), iv(&[2, 0])]).unwrap(), 1);
        assert_eq!(rank(&[]).unwrap(), 0);
        assert!(matches!(
            rank(&[iv(&[1, 0]), iv(&[1])]),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn solve_examples() {
        let r = solve_rational(&[iv(&[2, 1]), iv(&[1, 2])], &iv(&[1, 1]))
            .unwrap()
            .unwrap();
        assert_eq!(r.0, vec![q(1, 3), q(1, 3)]);
        let r = solve_rational(&[iv(&[2])], &iv(&[1])).unwrap().unwrap();
        assert_eq!(r.0, vec![q(1, 2)]);
        assert_eq!(solve_rational(&[iv(&[1, 0])], &iv(&[0, 1])).unwrap(), None);
        assert_eq!(
            solve_rational(&[iv(&[1, 0]), iv(&[2, 0])], &iv(&[1, 0])),
            Err(Error::NotIndependent)
        );
    }

    #[test]
    fn lattice_span_examples() {
        let five = [
            iv(&[0, 0, 0]),
            iv(&[1, 1, 0]),
            iv(&[1, 0, 1]),
            iv(&[0, 1, 1]),
            iv(&[1, 0, 0]),
        ];
        assert!(spans_full_lattice(&five, 3).unwrap());
        assert!(!spans_full_lattice(&[iv(&[2, 0]), iv(&[0, 1])], 2).unwrap());
        assert!(spans_full_lattice(&[iv(&[1])], 1).unwrap());
        assert!(!spans_full_lattice(&[], 1).unwrap());
    }

    #[test]
    fn hnf_shape() {
        let h = hermite_normal_form(&[iv(&[2, 3]), iv(&[4, 1])]).unwrap();
        // det = 2 - 12 = -10, so the HNF diagonal multiplies to 10.
        assert_eq!(h.len(), 2);
        assert_eq!(&h[0].0[0] * &h[1].0[1], BigInt::from(10));
        assert!(h[1].0[0].is_zero());
        assert!(h[0].0[1] >= BigInt::zero() && h[0].0[1] < h[1].0[1]);
    }

    #[test]
    fn nullspace_of_plane() {
        let ns = nullspace(&[iv(&[1, 1, 1])], 3).unwrap();
        assert_eq!(ns.len(), 2);
        for v in &ns {
            assert!(v.dot(&iv(&[1, 1, 1])).is_zero());
        }
        assert_eq!(nullspace(&[], 1).unwrap(), vec![iv(&[1])]);
    }

    #[test]
    fn rational_text() {
        assert_eq!(format_rational(&q(2, 3)), "2/3");
        assert_eq!(format_rational(&q(4, 2)), "2");
        assert_eq!(parse_rational("-6/4"), Some(q(-3, 2)));
        assert_eq!(parse_rational("1/0"), None);
    }
}
