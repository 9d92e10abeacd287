//! Ehrhart counting, interpolation and the delta-polynomial.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::polynomial::{Polynomial, Variable};
use crate::polytope::VPolytope;

pub fn binomial(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// First `values.len()` coefficients of `(1 - λ)^power * Σ values[n] λ^n`.
pub fn times_one_minus_lambda_pow(values: &[BigInt], power: usize) -> Vec<BigInt> {
    let signed: Vec<BigInt> = (0..=power)
        .map(|k| {
            let b = binomial(power, k);
            if k % 2 == 0 {
                b
            } else {
                -b
            }
        })
        .collect();
    (0..values.len())
        .map(|j| {
            (0..=j.min(power))
                .map(|k| &signed[k] * &values[j - k])
                .sum()
        })
        .collect()
}

/// `[i(P,0), ..., i(P,n_max)]`, with `i(P,0) = 1`.
pub fn ehrhart_counts(p: &VPolytope, n_max: usize) -> Result<Vec<u64>> {
    p.facets()?;
    let mut out = Vec::with_capacity(n_max + 1);
    out.push(1);
    for n in 1..=n_max {
        out.push(p.count_lattice_points(n as i64)?);
    }
    Ok(out)
}

/// Interpolates `counts[0..=d]` at nodes `0..=d` (Newton forward
/// differences), then checks every further entry of `counts`.
pub fn interpolate_counts(counts: &[u64], d: usize) -> Result<Polynomial<BigRational>> {
    let mut diffs: Vec<BigInt> = counts[..=d].iter().map(|&c| BigInt::from(c)).collect();
    // diffs[k] becomes the k-th forward difference at 0.
    for k in 1..=d {
        for i in (k..=d).rev() {
            diffs[i] = &diffs[i] - &diffs[i - 1];
        }
    }
    // Σ_k Δ^k i(0) * binom(n, k), expanded into the monomial basis.
    let mut coeffs = vec![BigRational::zero(); d + 1];
    let mut falling = vec![BigRational::one()]; // n(n-1)...(n-k+1)
    let mut fact = BigInt::one();
    for (k, delta) in diffs.iter().enumerate() {
        if k > 0 {
            fact *= BigInt::from(k);
            let shift = BigRational::from_integer(BigInt::from(k - 1));
            let mut next = vec![BigRational::zero(); falling.len() + 1];
            for (i, c) in falling.iter().enumerate() {
                next[i + 1] += c;
                next[i] -= c * &shift;
            }
            falling = next;
        }
        let scale = BigRational::new(delta.clone(), fact.clone());
        for (i, c) in falling.iter().enumerate() {
            coeffs[i] += c * &scale;
        }
    }
    let poly = Polynomial::new(coeffs, Variable::N);
    for (n, &c) in counts.iter().enumerate().skip(d + 1) {
        let v = poly.eval(&BigRational::from_integer(BigInt::from(n)));
        if v != BigRational::from_integer(BigInt::from(c)) {
            return Err(Error::InterpolationMismatch {
                n,
                interpolated: v.to_string(),
                counted: c.to_string(),
            });
        }
    }
    Ok(poly)
}

/// Ehrhart polynomial, interpolated at `n = 0..=d` and checked against direct
/// counts at `d+1` and `d+2`.
pub fn ehrhart_polynomial(p: &VPolytope) -> Result<Polynomial<BigRational>> {
    let d = p.ambient_dim();
    interpolate_counts(&ehrhart_counts(p, d + 2)?, d)
}

/// δ-coefficients from the counts `i(0..=d+2)`; the two coefficients past
/// degree `d` must vanish.
pub fn delta_from_counts(counts: &[u64], d: usize) -> Result<Polynomial<BigInt>> {
    let values: Vec<BigInt> = counts[..d + 3].iter().map(|&c| BigInt::from(c)).collect();
    let mut delta = times_one_minus_lambda_pow(&values, d + 1);
    for index in [d + 1, d + 2] {
        if !delta[index].is_zero() {
            return Err(Error::DeltaTailNonzero {
                index,
                value: delta[index].to_string(),
            });
        }
    }
    delta.truncate(d + 1);
    Ok(Polynomial::lambda(delta))
}

pub fn delta_polynomial(p: &VPolytope) -> Result<Polynomial<BigInt>> {
    let d = p.ambient_dim();
    delta_from_counts(&ehrhart_counts(p, d + 2)?, d)
}
