//! The configuration of a polytope, its graded monoid and the integer
//! decomposition property.
//!
//! The degree-`n` piece of the monoid generated by the configuration is the
//! `n`-fold sumset of `P ∩ Z^d` (lifted to height `n`), so the Hilbert
//! function is computed by iterated sumsets.

use std::collections::{HashMap, HashSet};

use num_bigint::BigInt;
use num_traits::Zero;
use rustc_hash::FxHashSet;
use serde::{Deserialize, Serialize};

use crate::ehrhart::times_one_minus_lambda_pow;
use crate::error::{Error, Result};
use crate::hull::dot;
use crate::polynomial::Polynomial;
use crate::polytope::{LatticePoint, VPolytope};

/// Lattice points of `P` lifted to height one in `Z^{d+1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Configuration {
    dim: usize,
    points: Vec<LatticePoint>,
    max_points: u64,
}

impl Configuration {
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Lifted points `(α, 1)`, in lexicographic order of `α`.
    pub fn points(&self) -> &[LatticePoint] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    fn base(&self) -> Vec<Vec<i64>> {
        self.points
            .iter()
            .map(|p| p.0[..self.dim].to_vec())
            .collect()
    }
}

pub fn configuration(p: &VPolytope) -> Result<Configuration> {
    let points = p
        .lattice_points(1)?
        .into_iter()
        .map(|mut a| {
            a.0.push(1);
            a
        })
        .collect();
    Ok(Configuration {
        dim: p.ambient_dim(),
        points,
        max_points: p.limits().max_points,
    })
}

/// Iterated sumsets `S_1 = A`, `S_n = S_{n-1} + A`, with the height
/// coordinate dropped.
struct SumsetTower {
    base: Vec<Vec<i64>>,
    current: HashSet<Vec<i64>>,
    level: usize,
    max_points: u64,
}

impl SumsetTower {
    fn new(config: &Configuration) -> Self {
        SumsetTower {
            base: config.base(),
            current: HashSet::from([vec![0; config.dim]]),
            level: 0,
            max_points: config.max_points,
        }
    }

    fn advance(&mut self) -> Result<&HashSet<Vec<i64>>> {
        let mut next = HashSet::with_capacity(self.current.len() * 2);
        for s in &self.current {
            for a in &self.base {
                next.insert(s.iter().zip(a).map(|(x, y)| x + y).collect());
            }
            if next.len() as u64 > self.max_points {
                return Err(Error::cap("sumset size", self.max_points));
            }
        }
        self.current = next;
        self.level += 1;
        Ok(&self.current)
    }
}

/// Counts `|S_n|` level by level without materializing each level.
///
/// With `g` a fixed generator, `S_{n+1} = (S_n + g) ∪ (N_n + A)` where
/// `N_n = S_n \ (S_{n-1} + g)`. Translating level `n` by `-n g` makes the
/// levels nested, so one growing set suffices and only the newcomers `N_n`
/// are extended. Points are packed into `i128` keys sized for `max_level`.
struct HilbertCounter {
    steps: Vec<i128>,
    seen: FxHashSet<i128>,
    fresh: Vec<i128>,
    level: usize,
    max_level: usize,
    max_points: u64,
}

impl HilbertCounter {
    fn new(config: &Configuration, max_level: usize) -> Result<Self> {
        let base = config.base();
        let g = base[0].clone();
        let diffs: Vec<Vec<i64>> = base[1..]
            .iter()
            .map(|a| a.iter().zip(&g).map(|(x, y)| x - y).collect())
            .collect();
        let mut weights = Vec::with_capacity(config.dim);
        let mut start: i128 = 0;
        let mut bits = 0u32;
        for i in 0..config.dim {
            let lo = diffs.iter().map(|v| v[i]).min().unwrap_or(0).min(0);
            let hi = diffs.iter().map(|v| v[i]).max().unwrap_or(0).max(0);
            let span = (hi - lo) as u128 * max_level as u128 + 1;
            if bits > 126 {
                break;
            }
            let weight = 1i128 << bits;
            start += (-lo) as i128 * max_level as i128 * weight;
            weights.push(weight);
            bits += u128::BITS - span.leading_zeros();
        }
        if bits > 126 {
            return Err(Error::cap("packed sumset key bits", 126));
        }
        let steps = diffs
            .iter()
            .map(|v| v.iter().zip(&weights).map(|(&x, w)| x as i128 * w).sum())
            .collect();
        let mut seen = FxHashSet::default();
        seen.insert(start);
        Ok(HilbertCounter {
            steps,
            seen,
            fresh: vec![start],
            level: 0,
            max_level,
            max_points: config.max_points,
        })
    }

    fn advance(&mut self) -> Result<u64> {
        assert!(self.level < self.max_level, "sumset level beyond packing range");
        let mut next = Vec::new();
        for &x in &self.fresh {
            for &s in &self.steps {
                if self.seen.insert(x + s) {
                    next.push(x + s);
                }
            }
            if self.seen.len() as u64 > self.max_points {
                return Err(Error::cap("sumset size", self.max_points));
            }
        }
        self.fresh = next;
        self.level += 1;
        Ok(self.seen.len() as u64)
    }
}

/// `[H(0), ..., H(n_max)]` where `H(n)` counts distinct `n`-fold sums.
pub fn hilbert_function(config: &Configuration, n_max: usize) -> Result<Vec<u64>> {
    let mut counter = HilbertCounter::new(config, n_max)?;
    let mut out = vec![1];
    for _ in 0..n_max {
        out.push(counter.advance()?);
    }
    Ok(out)
}

/// Hilbert values together with the h-polynomial read off from them.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HilbertData {
    pub values: Vec<u64>,
    pub h_poly: Polynomial<BigInt>,
    /// Whether `dim + 2` consecutive vanishing h-coefficients were reached
    /// before the cap. When false, `h_poly` is built from partial data.
    pub stabilized: bool,
    pub cap: usize,
}

impl HilbertData {
    pub fn require_stabilized(&self) -> Result<&Polynomial<BigInt>> {
        if self.stabilized {
            Ok(&self.h_poly)
        } else {
            Err(Error::HilbertNotStabilized {
                cap: self.cap,
                computed: self.values.len(),
            })
        }
    }
}

pub fn default_hilbert_cap(dim: usize) -> usize {
    4 * dim + 8
}

/// Computes `H(n)` level by level and stops once the last `dim + 2`
/// h-coefficients are zero, or at `cap`.
pub fn h_polynomial(config: &Configuration, cap: usize) -> Result<HilbertData> {
    let d = config.dim;
    if cap < d + 3 {
        return Err(Error::InvalidArgument(format!(
            "Hilbert cap {cap} is below dim + 3 = {}",
            d + 3
        )));
    }
    let window = d + 2;
    let mut counter = HilbertCounter::new(config, cap)?;
    let mut values: Vec<u64> = vec![1];
    let mut big: Vec<BigInt> = vec![BigInt::from(1)];
    let mut stabilized = false;
    let mut h = Vec::new();
    for j in 1..=cap {
        let hj = counter.advance()?;
        values.push(hj);
        big.push(BigInt::from(hj));
        h = times_one_minus_lambda_pow(&big, d + 1);
        if j + 1 >= window && h[j + 1 - window..=j].iter().all(Zero::is_zero) {
            stabilized = true;
            break;
        }
    }
    Ok(HilbertData {
        values,
        h_poly: Polynomial::lambda(h),
        stabilized,
        cap,
    })
}

/// Range of levels the IDP check inspects.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IdpMode {
    /// Levels `2..=d-1`; complete because `(n+1)P ∩ Z^d = (P ∩ Z^d) + (nP ∩ Z^d)`
    /// holds for every `n >= d - 1`.
    Bounded,
    /// Levels `2..=N`.
    Exhaustive(usize),
}

impl IdpMode {
    pub fn max_level(self, dim: usize) -> usize {
        match self {
            IdpMode::Bounded => dim.saturating_sub(1).max(1),
            IdpMode::Exhaustive(n) => n,
        }
    }
}

/// A lattice point `γ ∈ nP` together with (when one exists) `n` lattice
/// points of `P` summing to it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecompositionWitness {
    pub level: usize,
    pub point: LatticePoint,
    pub decomposable: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub parts: Option<Vec<LatticePoint>>,
}

impl DecompositionWitness {
    /// Checks the structural invariant: parts, when present, are `level`
    /// lattice points of `P` summing to `point`.
    pub fn verify(&self, p: &VPolytope) -> Result<bool> {
        match (&self.parts, self.decomposable) {
            (Some(parts), true) => {
                if parts.len() != self.level {
                    return Ok(false);
                }
                for part in parts {
                    if !p.contains_in_dilate(part, 1)? {
                        return Ok(false);
                    }
                }
                let sum = parts
                    .iter()
                    .fold(LatticePoint::origin(p.ambient_dim()), |acc, x| &acc + x);
                Ok(sum == self.point)
            }
            (None, false) => p.contains_in_dilate(&self.point, self.level as i64),
            _ => Ok(false),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdpVerdict {
    pub idp: bool,
    /// Smallest non-decomposable point (by level, then lexicographically).
    pub witness: Option<DecompositionWitness>,
    pub levels_checked: usize,
}

/// Decides `nP ∩ Z^d = (P ∩ Z^d) + ((n-1)P ∩ Z^d)` for each level of `mode`,
/// in increasing order. Because lower levels have already passed, membership
/// of `γ - p` in `(n-1)P` is enough for `γ` to decompose.
pub fn idp_check(p: &VPolytope, mode: IdpMode) -> Result<IdpVerdict> {
    let facets = p.facets()?;
    let base = p.lattice_points(1)?;
    let table: Vec<Vec<i128>> = base
        .iter()
        .map(|q| facets.iter().map(|f| dot(&f.normal, &q.0)).collect())
        .collect();
    let top = mode.max_level(p.ambient_dim());
    let mut levels_checked = 0;
    for n in 2..=top {
        let prev = (n - 1) as i128;
        let bounds: Vec<i128> = facets.iter().map(|f| f.offset as i128 * prev).collect();
        for gamma in p.lattice_points(n as i64)? {
            let g: Vec<i128> = facets.iter().map(|f| dot(&f.normal, &gamma.0)).collect();
            let ok = table
                .iter()
                .any(|row| (0..g.len()).all(|f| g[f] - row[f] <= bounds[f]));
            if !ok {
                return Ok(IdpVerdict {
                    idp: false,
                    witness: Some(DecompositionWitness {
                        level: n,
                        point: gamma,
                        decomposable: false,
                        parts: None,
                    }),
                    levels_checked: levels_checked + 1,
                });
            }
        }
        levels_checked += 1;
    }
    Ok(IdpVerdict {
        idp: true,
        witness: None,
        levels_checked,
    })
}

/// Normality of the configuration. Only decided when the lattice points span
/// `Z^d`, where it coincides with the integer decomposition property.
pub fn is_normal(p: &VPolytope) -> Result<Option<bool>> {
    if !p.spans_full_lattice()? {
        return Ok(None);
    }
    Ok(Some(idp_check(p, IdpMode::Bounded)?.idp))
}

/// Searches for `n` lattice points of `P` summing to `point`, without
/// assuming anything about lower levels.
pub fn decompose(p: &VPolytope, point: &LatticePoint, n: usize) -> Result<DecompositionWitness> {
    if n == 0 {
        return Err(Error::InvalidArgument("decomposition level must be >= 1".into()));
    }
    let config = configuration(p)?;
    let base = config.base();
    let mut levels: Vec<HashSet<Vec<i64>>> = Vec::with_capacity(n);
    let mut tower = SumsetTower::new(&config);
    for _ in 1..n {
        levels.push(tower.advance()?.clone());
    }
    // levels[k-1] is the k-fold sumset.
    let mut parts = Vec::with_capacity(n);
    let mut rest = point.0.clone();
    let mut memo: HashMap<(usize, Vec<i64>), bool> = HashMap::new();
    let found = peel(&base, &levels, &mut rest, n, &mut parts, &mut memo);
    Ok(DecompositionWitness {
        level: n,
        point: point.clone(),
        decomposable: found,
        parts: found.then(|| parts.into_iter().map(LatticePoint).collect()),
    })
}

fn peel(
    base: &[Vec<i64>],
    levels: &[HashSet<Vec<i64>>],
    rest: &mut Vec<i64>,
    n: usize,
    parts: &mut Vec<Vec<i64>>,
    memo: &mut HashMap<(usize, Vec<i64>), bool>,
) -> bool {
    if n == 1 {
        if base.contains(rest) {
            parts.push(rest.clone());
            return true;
        }
        return false;
    }
    for a in base {
        let r: Vec<i64> = rest.iter().zip(a).map(|(x, y)| x - y).collect();
        if !levels[n - 2].contains(&r) {
            continue;
        }
        if memo.get(&(n - 1, r.clone())) == Some(&false) {
            continue;
        }
        let mut next = r.clone();
        parts.push(a.clone());
        if peel(base, levels, &mut next, n - 1, parts, memo) {
            return true;
        }
        parts.pop();
        memo.insert((n - 1, r), false);
    }
    false
}
