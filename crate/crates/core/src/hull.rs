//! Exact beneath-beyond convex hull for full-dimensional integer point sets.
//!
//! Facets are kept with primitive integer normals and the hull on the
//! `normal . x <= offset` side. Each facet records which input points lie on
//! it; ridges are detected combinatorially (two facets are adjacent iff no
//! third facet contains all of their common points).

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};
use crate::linalg::{nullspace, rank, IntVector};

/// Bound on facet normal entries. Together with the coordinate cap this keeps
/// every dot product far inside `i128`.
pub(crate) const NORMAL_BOUND: i64 = 1 << 40;

#[derive(Clone, Debug)]
pub(crate) struct HullFacet {
    pub normal: Vec<i64>,
    pub offset: i64,
    pub incidence: FixedBitSet,
}

pub(crate) fn dot(a: &[i64], x: &[i64]) -> i128 {
    a.iter().zip(x).map(|(&a, &x)| a as i128 * x as i128).sum()
}

fn diff(a: &[i64], b: &[i64]) -> IntVector {
    IntVector::from_i64(&a.iter().zip(b).map(|(x, y)| x - y).collect::<Vec<_>>())
}

/// Indices of a maximal affinely independent subset, chosen greedily in input
/// order.
pub(crate) fn affine_basis(points: &[Vec<i64>]) -> Result<Vec<usize>> {
    let Some(first) = points.first() else {
        return Ok(Vec::new());
    };
    let mut chosen = vec![0];
    let mut rows: Vec<IntVector> = Vec::new();
    for (i, p) in points.iter().enumerate().skip(1) {
        if rows.len() == first.len() {
            break;
        }
        rows.push(diff(p, first));
        if rank(&rows)? == rows.len() {
            chosen.push(i);
        } else {
            rows.pop();
        }
    }
    Ok(chosen)
}

/// Hyperplane through `on` (affine dimension d-1), oriented so that every
/// point of `reference` lies on the `<=` side. Returns `None` if every
/// reference point lies on the plane.
fn plane_through<'a>(
    on: &[&[i64]],
    reference: impl IntoIterator<Item = &'a [i64]>,
) -> Result<Option<(Vec<i64>, i64)>> {
    let d = on[0].len();
    let rows: Vec<IntVector> = on[1..].iter().map(|p| diff(p, on[0])).collect();
    let ns = nullspace(&rows, d)?;
    debug_assert_eq!(ns.len(), 1, "points do not span a hyperplane");
    let mut normal = ns[0]
        .to_i64()
        .filter(|v| v.iter().all(|x| x.abs() <= NORMAL_BOUND))
        .ok_or_else(|| Error::cap("facet normal entry size", NORMAL_BOUND as u64))?;
    let mut offset = dot(&normal, on[0]);
    for q in reference {
        let s = dot(&normal, q);
        if s == offset {
            continue;
        }
        if s > offset {
            normal.iter_mut().for_each(|x| *x = -*x);
            offset = -offset;
        }
        return Ok(Some((normal, offset as i64)));
    }
    Ok(None)
}

/// Facets of the convex hull of `points`, which must be distinct and span
/// their ambient space affinely.
pub(crate) fn hull(points: &[Vec<i64>]) -> Result<Vec<HullFacet>> {
    let n = points.len();
    let d = points[0].len();
    let simplex = affine_basis(points)?;
    if simplex.len() != d + 1 {
        return Err(Error::NotFullDimensional {
            affine_dim: simplex.len().saturating_sub(1),
            ambient_dim: d,
        });
    }

    let mut processed = FixedBitSet::with_capacity(n);
    for &i in &simplex {
        processed.insert(i);
    }
    let incidence_of = |normal: &[i64], offset: i64, processed: &FixedBitSet| {
        let mut inc = FixedBitSet::with_capacity(n);
        for i in processed.ones() {
            if dot(normal, &points[i]) == offset as i128 {
                inc.insert(i);
            }
        }
        inc
    };

    let mut facets: Vec<HullFacet> = Vec::new();
    for &omit in &simplex {
        let on: Vec<&[i64]> = simplex
            .iter()
            .filter(|&&i| i != omit)
            .map(|&i| points[i].as_slice())
            .collect();
        let (normal, offset) = plane_through(&on, [points[omit].as_slice()])?
            .expect("simplex vertex lies off the opposite facet");
        let incidence = incidence_of(&normal, offset, &processed);
        facets.push(HullFacet {
            normal,
            offset,
            incidence,
        });
    }

    for p in 0..n {
        if processed.contains(p) {
            continue;
        }
        let pt = &points[p];
        let side: Vec<std::cmp::Ordering> = facets
            .iter()
            .map(|f| dot(&f.normal, pt).cmp(&(f.offset as i128)))
            .collect();
        let visible: Vec<usize> = (0..facets.len())
            .filter(|&i| side[i].is_gt())
            .collect();

        let mut created: Vec<(Vec<i64>, i64)> = Vec::new();
        if !visible.is_empty() {
            for &f in &visible {
                for g in 0..facets.len() {
                    if side[g].is_gt() {
                        continue;
                    }
                    let mut ridge = facets[f].incidence.clone();
                    ridge.intersect_with(&facets[g].incidence);
                    let covered = facets.iter().enumerate().any(|(h, fh)| {
                        h != f && h != g && ridge.is_subset(&fh.incidence)
                    });
                    if covered {
                        continue;
                    }
                    let mut on: Vec<&[i64]> = vec![pt.as_slice()];
                    on.extend(ridge.ones().map(|i| points[i].as_slice()));
                    let reference = processed.ones().map(|i| points[i].as_slice());
                    let Some(plane) = plane_through(&on, reference)? else {
                        continue;
                    };
                    let dup = created.contains(&plane)
                        || facets.iter().enumerate().any(|(h, fh)| {
                            !side[h].is_gt() && fh.normal == plane.0 && fh.offset == plane.1
                        });
                    if !dup {
                        created.push(plane);
                    }
                }
            }
        }

        let mut kept: Vec<HullFacet> = facets
            .into_iter()
            .zip(&side)
            .filter(|(_, s)| !s.is_gt())
            .map(|(mut f, s)| {
                if s.is_eq() {
                    f.incidence.insert(p);
                }
                f
            })
            .collect();
        processed.insert(p);
        for (normal, offset) in created {
            let incidence = incidence_of(&normal, offset, &processed);
            kept.push(HullFacet {
                normal,
                offset,
                incidence,
            });
        }
        facets = kept;
    }
    Ok(facets)
}

/// Indices of the points that are vertices of the hull described by `facets`.
pub(crate) fn vertex_indices(n: usize, facets: &[HullFacet]) -> Vec<usize> {
    (0..n)
        .filter(|&i| {
            let mut meet = FixedBitSet::with_capacity(n);
            meet.insert_range(..);
            let mut any = false;
            for f in facets.iter().filter(|f| f.incidence.contains(i)) {
                meet.intersect_with(&f.incidence);
                any = true;
            }
            any && meet.count_ones(..) == 1
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sorted_planes(points: &[Vec<i64>]) -> Vec<(Vec<i64>, i64)> {
        let mut v: Vec<_> = hull(points)
            .unwrap()
            .into_iter()
            .map(|f| (f.normal, f.offset))
            .collect();
        v.sort();
        v
    }

    #[test]
    fn square_with_edge_and_center_points() {
        let pts = vec![
            vec![1, 1],
            vec![0, 0],
            vec![1, 0],
            vec![2, 0],
            vec![0, 2],
            vec![2, 2],
            vec![0, 1],
        ];
        assert_eq!(
            sorted_planes(&pts),
            vec![
                (vec![-1, 0], 0),
                (vec![0, -1], 0),
                (vec![0, 1], 2),
                (vec![1, 0], 2)
            ]
        );
        let f = hull(&pts).unwrap();
        assert_eq!(vertex_indices(pts.len(), &f), vec![1, 3, 4, 5]);
    }

    #[test]
    fn segment() {
        let pts = vec![vec![1], vec![0], vec![3], vec![2]];
        assert_eq!(sorted_planes(&pts), vec![(vec![-1], 0), (vec![1], 3)]);
    }

    #[test]
    fn octahedron() {
        let mut pts = Vec::new();
        for i in 0..3 {
            for s in [-1, 1] {
                let mut p = vec![0; 3];
                p[i] = s;
                pts.push(p);
            }
        }
        let f = sorted_planes(&pts);
        assert_eq!(f.len(), 8);
        assert!(f.iter().all(|(a, b)| *b == 1 && a.iter().all(|x| x.abs() == 1)));
    }

    #[test]
    fn flat_input_is_rejected() {
        let pts = vec![vec![0, 0], vec![1, 1], vec![2, 2]];
        assert!(matches!(
            hull(&pts),
            Err(Error::NotFullDimensional { affine_dim: 1, .. })
        ));
    }
}
