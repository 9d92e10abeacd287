//! Small reference polytopes and the concrete claims made about them.
//!
//! Every claim is recomputed from scratch by [`run_claims`]; the `examples`
//! CLI subcommand prints the outcome of each.

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::ehrhart::delta_polynomial;
use crate::error::Result;
use crate::freesum::{analyze_pair, condition1, free_sum, witness_sets, AnalysisOptions, Condition1Method};
use crate::linalg::{format_rational, rank, IntVector};
use crate::monoid::{configuration, hilbert_function, idp_check, IdpMode};
use crate::polytope::{Facet, LatticePoint, VPolytope};

fn build(points: &[&[i64]]) -> VPolytope {
    VPolytope::from_coords(points).expect("zoo polytope is valid")
}

/// The (0,1)-polytope with vertices 0, (1,1,0), (1,0,1), (0,1,1), (1,0,0).
/// IDP, but its free sum with itself is not.
pub fn five_vertex() -> VPolytope {
    build(&[&[0, 0, 0], &[1, 1, 0], &[1, 0, 1], &[0, 1, 1], &[1, 0, 0]])
}

/// conv{(0,0),(2,1),(1,2)}.
pub fn triangle_213() -> VPolytope {
    build(&[&[0, 0], &[2, 1], &[1, 2]])
}

/// conv{(0,0),(1,0),(1,2)}.
pub fn triangle_1012() -> VPolytope {
    build(&[&[0, 0], &[1, 0], &[1, 2]])
}

/// The segment [0, 2].
pub fn segment_2() -> VPolytope {
    build(&[&[0], &[2]])
}

pub fn unit_interval() -> VPolytope {
    build(&[&[0], &[1]])
}

pub fn unit_square() -> VPolytope {
    build(&[&[0, 0], &[1, 0], &[0, 1], &[1, 1]])
}

/// conv{0, e_1, ..., e_d}.
pub fn unit_simplex(d: usize) -> VPolytope {
    let mut pts = vec![LatticePoint::origin(d)];
    for i in 0..d {
        let mut e = vec![0; d];
        e[i] = 1;
        pts.push(LatticePoint(e));
    }
    VPolytope::new(pts).expect("unit simplex is valid")
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClaimResult {
    pub id: String,
    pub statement: String,
    pub passed: bool,
    pub detail: String,
}

type Check = fn() -> Result<(bool, String)>;

const CLAIMS: &[(&str, &str, Check)] = &[
    (
        "five-vertex-all-vertices",
        "all five listed points of the (0,1)-polytope are vertices",
        || {
            let n = five_vertex().vertices().len();
            Ok((n == 5, format!("{n} vertices")))
        },
    ),
    (
        "five-vertex-facet-b2",
        "z1 + z2 + z3 <= 2 is a facet of the five-vertex polytope",
        || {
            let p = five_vertex();
            let f = Facet {
                normal: vec![1, 1, 1],
                offset: 2,
            };
            Ok((p.facets()?.contains(&f), format!("{} facets", p.facets()?.len())))
        },
    ),
    (
        "five-vertex-excludes-111",
        "(1,1,1) violates the facet with offset 2",
        || {
            let inside = five_vertex().contains_in_dilate(&LatticePoint(vec![1, 1, 1]), 1)?;
            Ok((!inside, format!("contained: {inside}")))
        },
    ),
    (
        "five-vertex-facet-condition-fails",
        "the five-vertex polytope has a facet offset outside {0,1}",
        || {
            let c = five_vertex().facet_b_condition()?;
            Ok((!c, format!("facet condition: {c}")))
        },
    ),
    (
        "five-vertex-idp",
        "the five-vertex polytope has the integer decomposition property",
        || {
            let v = idp_check(&five_vertex(), IdpMode::Bounded)?;
            Ok((v.idp, format!("idp: {}", v.idp)))
        },
    ),
    (
        "five-vertex-free-sum-dimension",
        "the free sum of the five-vertex polytope with itself has dimension 6",
        || {
            let p = five_vertex();
            let d = free_sum(&p, &p)?.affine_dim();
            Ok((d == 6, format!("dimension {d}")))
        },
    ),
    (
        "five-vertex-free-sum-not-idp",
        "the free sum of the five-vertex polytope with itself is not IDP",
        || {
            let p = five_vertex();
            let v = idp_check(&free_sum(&p, &p)?, IdpMode::Bounded)?;
            let detail = match &v.witness {
                Some(w) => format!("witness {} at level {}", w.point, w.level),
                None => "no witness".into(),
            };
            Ok((!v.idp && v.witness.is_some_and(|w| w.level <= 5), detail))
        },
    ),
    (
        "five-vertex-delta-not-multiplicative",
        "delta of the five-vertex free sum differs from the square of its delta",
        || {
            let p = five_vertex();
            let d = delta_polynomial(&p)?;
            let fs = delta_polynomial(&free_sum(&p, &p)?)?;
            Ok((fs != &d * &d, format!("delta(P+P) = {fs}, delta(P)^2 = {}", &d * &d)))
        },
    ),
    (
        "five-vertex-pair-verdict",
        "free-sum IDP prediction and actual verdict are both false for the five-vertex pair",
        || {
            let p = five_vertex();
            let r = analyze_pair(&p, &p, AnalysisOptions::default())?;
            let ok = r.idp_p
                && r.idp_q
                && !r.facet_cond_p
                && !r.facet_cond_q
                && r.predicted_idp_free_sum == Some(false)
                && r.actual_idp_free_sum == Some(false)
                && r.consistent;
            Ok((ok, format!("predicted {:?}, actual {:?}", r.predicted_idp_free_sum, r.actual_idp_free_sum)))
        },
    ),
    (
        "hilbert-low-degrees",
        "H(0) = 1 and H(1) = number of lattice points",
        || {
            let mut ok = true;
            for p in [five_vertex(), triangle_213(), unit_square()] {
                let h = hilbert_function(&configuration(&p)?, 1)?;
                ok &= h[0] == 1 && h[1] == p.lattice_points(1)?.len() as u64;
            }
            Ok((ok, "checked on three polytopes".into()))
        },
    ),
    (
        "independent-pair-rank",
        "{(2,1),(1,2)} is linearly independent",
        || {
            let r = rank(&[IntVector::from_i64(&[2, 1]), IntVector::from_i64(&[1, 2])])?;
            Ok((r == 2, format!("rank {r}")))
        },
    ),
    (
        "zero-one-no-witness-sets",
        "a (0,1)-polytope has no witness sets",
        || {
            let n = witness_sets(&five_vertex())?.len();
            Ok((n == 0, format!("{n} witness sets")))
        },
    ),
    (
        "zero-one-condition1",
        "the lattice-point condition holds when a summand is a (0,1)-polytope",
        || {
            let p = five_vertex();
            let c = condition1(&p, &p, Condition1Method::Both)?;
            Ok((c, format!("condition1: {c}")))
        },
    ),
    (
        "triangle-1012-segment-condition1",
        "conv{(0,0),(1,0),(1,2)} has no witness sets, [0,2] has one, and the lattice-point condition holds",
        || {
            let p = triangle_1012();
            let q = segment_2();
            let wp = witness_sets(&p)?.len();
            let wq = witness_sets(&q)?.len();
            let c = condition1(&p, &q, Condition1Method::Both)?;
            Ok((wp == 0 && wq > 0 && c, format!("|W(P)| = {wp}, |W(Q)| = {wq}, condition1: {c}")))
        },
    ),
    (
        "triangle-213-witness-min",
        "conv{(0,0),(2,1),(1,2)} has exactly one witness set {(2,1),(1,2)} with min 2/3",
        || {
            let ws = witness_sets(&triangle_213())?;
            let want = BigRational::new(BigInt::from(2), BigInt::from(3));
            let ok = ws.len() == 1
                && ws[0].subset.len() == 2
                && ws[0].subset.contains(&LatticePoint(vec![2, 1]))
                && ws[0].subset.contains(&LatticePoint(vec![1, 2]))
                && ws[0].min_value == want;
            let mins: Vec<String> = ws.iter().map(|w| format_rational(&w.min_value)).collect();
            Ok((ok, format!("{} sets, min values {:?}", ws.len(), mins)))
        },
    ),
    (
        "triangle-213-condition1",
        "the lattice-point condition holds for the free sum of conv{(0,0),(2,1),(1,2)} with itself",
        || {
            let p = triangle_213();
            let c = condition1(&p, &p, Condition1Method::Both)?;
            Ok((c, format!("condition1: {c}")))
        },
    ),
];

/// Evaluates every bundled claim. Errors are reported as failures.
pub fn run_claims() -> Vec<ClaimResult> {
    CLAIMS
        .iter()
        .map(|(id, statement, check)| {
            let (passed, detail) = match check() {
                Ok(r) => r,
                Err(e) => (false, format!("error: {e}")),
            };
            ClaimResult {
                id: id.to_string(),
                statement: statement.to_string(),
                passed,
                detail,
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_claim_passes() {
        for c in run_claims() {
            assert!(c.passed, "{}: {}", c.id, c.detail);
        }
    }

    #[test]
    fn claim_ids_unique() {
        let mut ids: Vec<&str> = CLAIMS.iter().map(|c| c.0).collect();
        ids.sort();
        ids.dedup();
        assert_eq!(ids.len(), CLAIMS.len());
    }
}
