//! Integral polytopes given by generating points.
//!
//! A [`VPolytope`] stores its deduplicated generators, the minimal vertex
//! set, and (when full-dimensional) its facets. Lattice points of dilates are
//! enumerated coordinate by coordinate, with each coordinate's range read off
//! the facets of the projection onto the leading coordinates.

use std::fmt;
use std::ops::{Add, Sub};
use std::sync::OnceLock;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hull::{self, dot, HullFacet};
use crate::linalg::{self, IntVector};

/// Integer point. Its length is the ambient dimension.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LatticePoint(pub Vec<i64>);

impl LatticePoint {
    pub fn new(coords: Vec<i64>) -> Self {
        LatticePoint(coords)
    }

    pub fn origin(dim: usize) -> Self {
        LatticePoint(vec![0; dim])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    pub fn is_origin(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    pub fn to_int_vector(&self) -> IntVector {
        IntVector::from_i64(&self.0)
    }

    /// `(self, 0, ..., 0)` with `extra` trailing zeros.
    pub fn pad_right(&self, extra: usize) -> Self {
        let mut v = self.0.clone();
        v.resize(v.len() + extra, 0);
        LatticePoint(v)
    }

    /// `(0, ..., 0, self)` with `extra` leading zeros.
    pub fn pad_left(&self, extra: usize) -> Self {
        let mut v = vec![0; extra];
        v.extend_from_slice(&self.0);
        LatticePoint(v)
    }
}

impl From<Vec<i64>> for LatticePoint {
    fn from(v: Vec<i64>) -> Self {
        LatticePoint(v)
    }
}

impl Add for &LatticePoint {
    type Output = LatticePoint;
    fn add(self, rhs: &LatticePoint) -> LatticePoint {
        LatticePoint(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &LatticePoint {
    type Output = LatticePoint;
    fn sub(self, rhs: &LatticePoint) -> LatticePoint {
        LatticePoint(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl fmt::Display for LatticePoint {
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

/// Resource caps. Exceeding one is a clean [`Error::CapExceeded`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    pub max_dim: usize,
    pub max_vertices: usize,
    pub max_coord: i64,
    /// Per enumeration (lattice points of one dilate, one sumset level).
    pub max_points: u64,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_dim: 8,
            max_vertices: 64,
            max_coord: 16,
            max_points: 1_000_000,
        }
    }
}

impl Limits {
    pub const MAX_POINTS_ENV: &'static str = "FREESUMLAB_MAX_POINTS";

    /// Defaults, with `max_points` overridden by `FREESUMLAB_MAX_POINTS` when
    /// it parses as a positive integer.
    pub fn from_env() -> Self {
        let mut limits = Limits::default();
        if let Some(n) = std::env::var(Self::MAX_POINTS_ENV)
            .ok()
            .and_then(|s| s.trim().parse::<u64>().ok())
            .filter(|&n| n > 0)
        {
            limits.max_points = n;
        }
        limits
    }
}

/// Facet inequality `normal . z <= offset` with a primitive normal.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Facet {
    pub normal: Vec<i64>,
    pub offset: i64,
}

impl Facet {
    fn holds(&self, point: &[i64], n: i64) -> bool {
        dot(&self.normal, point) <= self.offset as i128 * n as i128
    }
}

impl fmt::Display for Facet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, &a) in self.normal.iter().enumerate() {
            if a == 0 {
                continue;
            }
            let sign = if a < 0 { "-" } else if first { "" } else { "+" };
            let mag = a.abs();
            let sep = if first { "" } else { " " };
            let gap = if first || sign.is_empty() { "" } else { " " };
            if mag == 1 {
                write!(f, "{sep}{sign}{gap}z{}", i + 1)?;
            } else {
                write!(f, "{sep}{sign}{gap}{mag}z{}", i + 1)?;
            }
            first = false;
        }
        write!(f, " <= {}", self.offset)
    }
}

fn sorted_facets(hull_facets: Vec<HullFacet>) -> Vec<Facet> {
    let mut v: Vec<Facet> = hull_facets
        .into_iter()
        .map(|f| Facet {
            normal: f.normal,
            offset: f.offset,
        })
        .collect();
    v.sort();
    v
}

/// Convex hull of finitely many lattice points.
#[derive(Debug)]
pub struct VPolytope {
    ambient_dim: usize,
    affine_dim: usize,
    generators: Vec<LatticePoint>,
    vertices: Vec<LatticePoint>,
    facets: Option<Vec<Facet>>,
    /// Facets of the projection onto the first `k + 1` coordinates.
    projections: OnceLock<Result<Vec<Vec<Facet>>>>,
    limits: Limits,
}

impl Clone for VPolytope {
    fn clone(&self) -> Self {
        VPolytope {
            ambient_dim: self.ambient_dim,
            affine_dim: self.affine_dim,
            generators: self.generators.clone(),
            vertices: self.vertices.clone(),
            facets: self.facets.clone(),
            projections: OnceLock::new(),
            limits: self.limits,
        }
    }
}

impl PartialEq for VPolytope {
    fn eq(&self, other: &Self) -> bool {
        self.generators == other.generators
    }
}

impl VPolytope {
    pub fn new(points: Vec<LatticePoint>) -> Result<Self> {
        Self::with_limits(points, Limits::default())
    }

    pub fn with_limits(mut points: Vec<LatticePoint>, limits: Limits) -> Result<Self> {
        let Some(first) = points.first() else {
            return Err(Error::EmptyInput);
        };
        let dim = first.dim();
        if dim == 0 {
            return Err(Error::EmptyInput);
        }
        for p in &points {
            if p.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: p.dim(),
                });
            }
        }
        if dim > limits.max_dim {
            return Err(Error::cap("ambient dimension", limits.max_dim as u64));
        }
        if points
            .iter()
            .any(|p| p.0.iter().any(|x| x.abs() > limits.max_coord))
        {
            return Err(Error::cap("coordinate magnitude", limits.max_coord as u64));
        }
        points.sort();
        points.dedup();

        let raw: Vec<Vec<i64>> = points.iter().map(|p| p.0.clone()).collect();
        let basis = hull::affine_basis(&raw)?;
        let affine_dim = basis.len() - 1;

        let (vertices, facets) = if affine_dim == dim {
            let hf = hull::hull(&raw)?;
            let vi = hull::vertex_indices(raw.len(), &hf);
            (vi, Some(sorted_facets(hf)))
        } else if affine_dim == 0 {
            (vec![0], None)
        } else {
            // Hull inside a coordinate projection that is injective on the
            // affine hull.
            let cols = injective_coordinates(&raw, &basis)?;
            let proj: Vec<Vec<i64>> = raw
                .iter()
                .map(|p| cols.iter().map(|&c| p[c]).collect())
                .collect();
            let hf = hull::hull(&proj)?;
            (hull::vertex_indices(proj.len(), &hf), None)
        };
        if vertices.len() > limits.max_vertices {
            return Err(Error::cap("vertex count", limits.max_vertices as u64));
        }
        let vertices = vertices.into_iter().map(|i| points[i].clone()).collect();
        Ok(VPolytope {
            ambient_dim: dim,
            affine_dim,
            generators: points,
            vertices,
            facets,
            projections: OnceLock::new(),
            limits,
        })
    }

    pub fn from_coords(points: &[&[i64]]) -> Result<Self> {
        Self::new(points.iter().map(|p| LatticePoint(p.to_vec())).collect())
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn affine_dim(&self) -> usize {
        self.affine_dim
    }

    pub fn is_full_dimensional(&self) -> bool {
        self.affine_dim == self.ambient_dim
    }

    pub fn generators(&self) -> &[LatticePoint] {
        &self.generators
    }

    /// Minimal vertex set, sorted lexicographically.
    pub fn vertices(&self) -> &[LatticePoint] {
        &self.vertices
    }

    pub fn limits(&self) -> Limits {
        self.limits
    }

    pub fn contains_origin(&self) -> bool {
        match &self.facets {
            Some(f) => {
                let o = vec![0; self.ambient_dim];
                f.iter().all(|f| f.holds(&o, 1))
            }
            None => self.generators.iter().any(LatticePoint::is_origin),
        }
    }

    fn require_full(&self) -> Result<&[Facet]> {
        self.facets.as_deref().ok_or(Error::NotFullDimensional {
            affine_dim: self.affine_dim,
            ambient_dim: self.ambient_dim,
        })
    }

    /// Irredundant facets, sorted by normal then offset.
    pub fn facets(&self) -> Result<&[Facet]> {
        self.require_full()
    }

    /// Whether `point` lies in `n * P`.
    pub fn contains_in_dilate(&self, point: &LatticePoint, n: i64) -> Result<bool> {
        let facets = self.require_full()?;
        if point.dim() != self.ambient_dim {
            return Err(Error::DimensionMismatch {
                expected: self.ambient_dim,
                found: point.dim(),
            });
        }
        Ok(facets.iter().all(|f| f.holds(&point.0, n)))
    }

    /// True iff every facet offset is 0 or 1 (the polytope must contain the
    /// origin, which makes all offsets nonnegative).
    pub fn facet_b_condition(&self) -> Result<bool> {
        let facets = self.require_full()?;
        if !self.contains_origin() {
            return Err(Error::OriginMissing {
                side: "the polytope".into(),
            });
        }
        Ok(facets.iter().all(|f| f.offset == 0 || f.offset == 1))
    }

    fn projection_facets(&self) -> Result<&[Vec<Facet>]> {
        self.require_full()?;
        let res = self.projections.get_or_init(|| {
            let d = self.ambient_dim;
            let mut out = Vec::with_capacity(d);
            for k in 1..d {
                let mut pts: Vec<Vec<i64>> =
                    self.vertices.iter().map(|v| v.0[..k].to_vec()).collect();
                pts.sort();
                pts.dedup();
                out.push(sorted_facets(hull::hull(&pts)?));
            }
            out.push(self.facets.clone().unwrap_or_default());
            Ok(out)
        });
        res.as_deref().map_err(Clone::clone)
    }

    /// Visits the lattice points of `n * P` in lexicographic order.
    fn for_each_lattice_point(
        &self,
        n: i64,
        mut visit: impl FnMut(&[i64]) -> Result<()>,
    ) -> Result<()> {
        let levels = self.projection_facets()?;
        let d = self.ambient_dim;
        let mut x = vec![0i64; d];
        let mut count = 0u64;
        let limit = self.limits.max_points;

        fn range(facets: &[Facet], prefix: &[i64], n: i64) -> Option<(i64, i64)> {
            let k = prefix.len();
            let mut lo = i128::MIN;
            let mut hi = i128::MAX;
            for f in facets {
                let a = f.normal[k] as i128;
                let rhs = f.offset as i128 * n as i128 - dot(&f.normal[..k], prefix);
                if a > 0 {
                    hi = hi.min(Integer::div_floor(&rhs, &a));
                } else if a < 0 {
                    lo = lo.max(Integer::div_ceil(&rhs, &a));
                } else if rhs < 0 {
                    return None;
                }
            }
            (lo <= hi).then_some((lo as i64, hi as i64))
        }

        fn walk(
            levels: &[Vec<Facet>],
            x: &mut [i64],
            k: usize,
            n: i64,
            count: &mut u64,
            limit: u64,
            visit: &mut dyn FnMut(&[i64]) -> Result<()>,
        ) -> Result<()> {
            let Some((lo, hi)) = range(&levels[k], &x[..k], n) else {
                return Ok(());
            };
            for v in lo..=hi {
                x[k] = v;
                if k + 1 == x.len() {
                    *count += 1;
                    if *count > limit {
                        return Err(Error::cap("lattice points per enumeration", limit));
                    }
                    visit(x)?;
                } else {
                    walk(levels, x, k + 1, n, count, limit, visit)?;
                }
            }
            Ok(())
        }

        walk(levels, &mut x, 0, n, &mut count, limit, &mut visit)
    }

    /// Lattice points of `n * P`, lexicographically ordered.
    pub fn lattice_points(&self, n: i64) -> Result<Vec<LatticePoint>> {
        let mut out = Vec::new();
        self.for_each_lattice_point(n, |x| {
            out.push(LatticePoint(x.to_vec()));
            Ok(())
        })?;
        Ok(out)
    }

    /// `|n P ∩ Z^d|` without materializing the points. `n = 0` gives 1.
    pub fn count_lattice_points(&self, n: i64) -> Result<u64> {
        let mut c = 0u64;
        self.for_each_lattice_point(n, |_| {
            c += 1;
            Ok(())
        })?;
        Ok(c)
    }

    /// Reference enumeration: every integer point of the bounding box of
    /// `n * vertices`, filtered by the facet inequalities.
    pub fn lattice_points_box(&self, n: i64) -> Result<Vec<LatticePoint>> {
        let facets = self.require_full()?;
        let d = self.ambient_dim;
        let lo: Vec<i64> = (0..d)
            .map(|i| self.vertices.iter().map(|v| v.0[i] * n).min().unwrap_or(0))
            .collect();
        let hi: Vec<i64> = (0..d)
            .map(|i| self.vertices.iter().map(|v| v.0[i] * n).max().unwrap_or(0))
            .collect();
        let volume = lo
            .iter()
            .zip(&hi)
            .try_fold(1u64, |acc, (l, h)| acc.checked_mul((h - l + 1) as u64))
            .filter(|&v| v <= self.limits.max_points.saturating_mul(64))
            .ok_or_else(|| Error::cap("bounding box size", self.limits.max_points * 64))?;
        let mut out = Vec::new();
        let mut x = lo.clone();
        for _ in 0..volume {
            if facets.iter().all(|f| f.holds(&x, n)) {
                out.push(LatticePoint(x.clone()));
            }
            for i in (0..d).rev() {
                if x[i] < hi[i] {
                    x[i] += 1;
                    break;
                }
                x[i] = lo[i];
            }
        }
        Ok(out)
    }

    /// Whether the lattice points of `P` generate `Z^d` as a group.
    pub fn spans_full_lattice(&self) -> Result<bool> {
        let pts: Vec<IntVector> = self
            .lattice_points(1)?
            .iter()
            .map(LatticePoint::to_int_vector)
            .collect();
        linalg::spans_full_lattice(&pts, self.ambient_dim)
    }

    /// Whether every vertex lies in `{0,1}^d`.
    pub fn is_zero_one(&self) -> bool {
        self.vertices
            .iter()
            .all(|v| v.0.iter().all(|&x| x == 0 || x == 1))
    }
}

/// Coordinates whose projection is injective on the affine hull spanned by
/// `basis` (the first basis point is the base point).
fn injective_coordinates(points: &[Vec<i64>], basis: &[usize]) -> Result<Vec<usize>> {
    let base = &points[basis[0]];
    let dirs: Vec<Vec<i64>> = basis[1..]
        .iter()
        .map(|&i| points[i].iter().zip(base).map(|(a, b)| a - b).collect())
        .collect();
    let k = dirs.len();
    let mut cols = Vec::with_capacity(k);
    for c in 0..base.len() {
        cols.push(c);
        let sub: Vec<IntVector> = dirs
            .iter()
            .map(|d| IntVector::from_i64(&cols.iter().map(|&j| d[j]).collect::<Vec<_>>()))
            .collect();
        // Rank of the k x |cols| submatrix must grow with every kept column.
        if linalg::rank(&sub)? < cols.len() {
            cols.pop();
        }
        if cols.len() == k {
            break;
        }
    }
    Ok(cols)
}
