//! Free sums of lattice polytopes and the checks around them.
//!
//! The free sum `P ⊕ Q` is the convex hull of `P × {0}` and `{0} × Q`. Its
//! lattice points are exactly the embedded lattice points of the summands
//! unless some interior lattice point of a simplex spanned by vertices of
//! `P` can be paired with one from `Q` whose coefficient sums add up to at
//! most one. [`condition1`] decides this both by direct enumeration and via
//! the [`WitnessSet`] minima; the two must agree.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::ehrhart::delta_polynomial;
use crate::error::{Error, Result};
use crate::linalg::{self, format_rational, parse_rational, IntVector};
use crate::monoid::{configuration, default_hilbert_cap, h_polynomial, idp_check, IdpMode};
use crate::polynomial::Polynomial;
use crate::polytope::{LatticePoint, VPolytope};

fn require_origin(p: &VPolytope, side: &str) -> Result<()> {
    if p.contains_origin() {
        Ok(())
    } else {
        Err(Error::OriginMissing { side: side.into() })
    }
}

/// `conv(P × {0_e} ∪ {0_d} × Q)`.
pub fn free_sum(p: &VPolytope, q: &VPolytope) -> Result<VPolytope> {
    require_origin(p, "P")?;
    require_origin(q, "Q")?;
    let (d, e) = (p.ambient_dim(), q.ambient_dim());
    let points: Vec<LatticePoint> = p
        .vertices()
        .iter()
        .map(|v| v.pad_right(e))
        .chain(q.vertices().iter().map(|w| w.pad_left(d)))
        .collect();
    let mut limits = p.limits();
    limits.max_points = limits.max_points.max(q.limits().max_points);
    let fs = VPolytope::with_limits(points, limits)?;
    debug_assert_eq!(fs.affine_dim(), p.affine_dim() + q.affine_dim());
    Ok(fs)
}

/// `μ(P ∩ Z^d) ∪ ν(Q ∩ Z^e)`, sorted.
pub fn embedded_lattice_points(p: &VPolytope, q: &VPolytope) -> Result<Vec<LatticePoint>> {
    let (d, e) = (p.ambient_dim(), q.ambient_dim());
    let mut pts: Vec<LatticePoint> = p
        .lattice_points(1)?
        .iter()
        .map(|x| x.pad_right(e))
        .chain(q.lattice_points(1)?.iter().map(|y| y.pad_left(d)))
        .collect();
    pts.sort();
    pts.dedup();
    Ok(pts)
}

fn ser_rational<S: Serializer>(q: &BigRational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&format_rational(q))
}

fn de_rational<'de, D: Deserializer<'de>>(d: D) -> Result<BigRational, D::Error> {
    let s = String::deserialize(d)?;
    parse_rational(&s).ok_or_else(|| serde::de::Error::custom(format!("bad rational {s:?}")))
}

/// A linearly independent set `W` of nonzero vertices whose simplex
/// `conv(W ∪ {0})` has lattice points in its relative interior.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessSet {
    pub subset: Vec<LatticePoint>,
    /// Lattice points `Σ r_i w_i` with every `r_i > 0` and `Σ r_i < 1`.
    pub interior_points: Vec<LatticePoint>,
    /// Smallest coefficient sum over `interior_points`.
    #[serde(serialize_with = "ser_rational", deserialize_with = "de_rational")]
    pub min_value: BigRational,
    /// `|W|` is below the ambient dimension: the simplex has empty interior
    /// in the ambient space, so only the relative-interior reading sees
    /// these points.
    pub relative_only: bool,
}

/// Lattice points in the relative interior of `conv(W ∪ {0})`, with their
/// coefficient sums. `subset` must be linearly independent.
fn relative_interior(
    subset: &[LatticePoint],
    limits: crate::polytope::Limits,
) -> Result<Vec<(LatticePoint, BigRational)>> {
    let k = subset.len();
    let d = subset[0].dim();
    // Coordinates on which W stays independent; projecting onto them is
    // injective on span(W).
    let mut cols: Vec<usize> = Vec::with_capacity(k);
    for c in 0..d {
        cols.push(c);
        let rows: Vec<IntVector> = (0..cols.len())
            .map(|j| IntVector::from_i64(&subset.iter().map(|w| w.0[cols[j]]).collect::<Vec<_>>()))
            .collect();
        if linalg::rank(&rows)? < cols.len() {
            cols.pop();
        }
        if cols.len() == k {
            break;
        }
    }
    let project = |x: &LatticePoint| LatticePoint(cols.iter().map(|&c| x.0[c]).collect());
    let mut simplex: Vec<LatticePoint> = subset.iter().map(project).collect();
    simplex.push(LatticePoint::origin(k));
    let projected = VPolytope::with_limits(
        simplex,
        crate::polytope::Limits {
            max_coord: i64::MAX / 4,
            ..limits
        },
    )?;
    let columns: Vec<IntVector> = subset.iter().map(|w| project(w).to_int_vector()).collect();

    let mut out = Vec::new();
    for y in projected.lattice_points(1)? {
        let r = linalg::solve_rational(&columns, &y.to_int_vector())?
            .expect("projection is injective on the span");
        if !r.entries().iter().all(|x| x.is_positive()) {
            continue;
        }
        let total = r.sum();
        if total >= BigRational::one() {
            continue;
        }
        // Lift back; only integral lifts are lattice points of the simplex.
        let mut lift = Vec::with_capacity(d);
        let mut integral = true;
        for i in 0..d {
            let v: BigRational = subset
                .iter()
                .zip(r.entries())
                .map(|(w, ri)| ri * BigRational::from_integer(BigInt::from(w.0[i])))
                .sum();
            if !v.is_integer() {
                integral = false;
                break;
            }
            lift.push(i64::try_from(v.to_integer()).expect("coordinate fits"));
        }
        if integral {
            out.push((LatticePoint(lift), total));
        }
    }
    Ok(out)
}

/// All witness sets of `P`, in lexicographic order of their vertex indices.
pub fn witness_sets(p: &VPolytope) -> Result<Vec<WitnessSet>> {
    p.facets()?;
    require_origin(p, "the polytope")?;
    let verts: Vec<LatticePoint> = p
        .vertices()
        .iter()
        .filter(|v| !v.is_origin())
        .cloned()
        .collect();
    let d = p.ambient_dim();
    let mut out = Vec::new();
    let mut chosen: Vec<usize> = Vec::new();
    fn dfs(
        verts: &[LatticePoint],
        start: usize,
        chosen: &mut Vec<usize>,
        d: usize,
        limits: crate::polytope::Limits,
        out: &mut Vec<WitnessSet>,
    ) -> Result<()> {
        for i in start..verts.len() {
            chosen.push(i);
            let rows: Vec<IntVector> = chosen.iter().map(|&j| verts[j].to_int_vector()).collect();
            if linalg::rank(&rows)? == chosen.len() {
                let subset: Vec<LatticePoint> = chosen.iter().map(|&j| verts[j].clone()).collect();
                let interior = relative_interior(&subset, limits)?;
                if let Some(min_value) = interior.iter().map(|(_, s)| s.clone()).min() {
                    out.push(WitnessSet {
                        relative_only: subset.len() < d,
                        subset,
                        interior_points: interior.into_iter().map(|(x, _)| x).collect(),
                        min_value,
                    });
                }
                if chosen.len() < d {
                    dfs(verts, i + 1, chosen, d, limits, out)?;
                }
            }
            chosen.pop();
        }
        Ok(())
    }
    dfs(&verts, 0, &mut chosen, d, p.limits(), &mut out)?;
    Ok(out)
}

/// Smallest `min(W)` over the witness sets, or `None` if there are none.
pub fn min_witness_value(sets: &[WitnessSet]) -> Option<BigRational> {
    sets.iter().map(|w| w.min_value.clone()).min()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Condition1Method {
    /// Enumerate the free sum's lattice points.
    Direct,
    /// Witness-set criterion: no witness sets on one side, or every pair of
    /// minima sums to more than one.
    WitnessSets,
    /// Both, failing with [`Error::MethodsDisagree`] if they differ.
    Both,
}

pub fn condition1_direct(p: &VPolytope, q: &VPolytope, fs: &VPolytope) -> Result<bool> {
    let embedded = embedded_lattice_points(p, q)?;
    let all = fs.lattice_points(1)?;
    debug_assert!(embedded.iter().all(|x| all.binary_search(x).is_ok()));
    Ok(all == embedded)
}

pub fn condition1_from_witness_sets(wp: &[WitnessSet], wq: &[WitnessSet]) -> bool {
    match (min_witness_value(wp), min_witness_value(wq)) {
        (Some(a), Some(b)) => a + b > BigRational::one(),
        _ => true,
    }
}

/// Whether the lattice points of `P ⊕ Q` are exactly the embedded lattice
/// points of `P` and `Q`.
pub fn condition1(p: &VPolytope, q: &VPolytope, method: Condition1Method) -> Result<bool> {
    for (x, side) in [(p, "P"), (q, "Q")] {
        require_origin(x, side)?;
        x.facets()?;
    }
    let direct = || -> Result<bool> { condition1_direct(p, q, &free_sum(p, q)?) };
    let prop = || -> Result<bool> {
        Ok(condition1_from_witness_sets(&witness_sets(p)?, &witness_sets(q)?))
    };
    match method {
        Condition1Method::Direct => direct(),
        Condition1Method::WitnessSets => prop(),
        Condition1Method::Both => {
            let (a, b) = (direct()?, prop()?);
            if a != b {
                return Err(Error::MethodsDisagree {
                    direct: a,
                    witness_sets: b,
                });
            }
            Ok(a)
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct AnalysisOptions {
    /// Skip the IDP check of the free sum itself.
    pub skip_actual: bool,
}

/// Everything known about a pair `(P, Q)` and its free sum.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairReport {
    #[serde(rename = "span_P")]
    pub span_p: bool,
    #[serde(rename = "span_Q")]
    pub span_q: bool,
    pub condition1_direct: bool,
    pub condition1_prop: bool,
    #[serde(rename = "idp_P")]
    pub idp_p: bool,
    #[serde(rename = "idp_Q")]
    pub idp_q: bool,
    #[serde(rename = "facet_cond_P")]
    pub facet_cond_p: bool,
    #[serde(rename = "facet_cond_Q")]
    pub facet_cond_q: bool,
    pub predicted_idp_free_sum: Option<bool>,
    /// `None` only when the check was skipped on request.
    pub actual_idp_free_sum: Option<bool>,
    #[serde(rename = "delta_P")]
    pub delta_p: Polynomial<BigInt>,
    #[serde(rename = "delta_Q")]
    pub delta_q: Polynomial<BigInt>,
    pub delta_free_sum: Polynomial<BigInt>,
    pub delta_multiplicative: bool,
    pub h_multiplicative: Option<bool>,
    pub consistent: bool,
}

impl PairReport {
    pub fn condition1(&self) -> bool {
        self.condition1_direct
    }

    /// Hypotheses of the free-sum IDP characterization: both lattice spans
    /// are full and the lattice-point condition holds.
    pub fn hypotheses_hold(&self) -> bool {
        self.span_p && self.span_q && self.condition1_direct
    }

    /// Recomputes `consistent` from the other fields.
    pub fn check_consistency(&self) -> bool {
        let facet_either = self.facet_cond_p || self.facet_cond_q;
        let prediction_ok = match (self.predicted_idp_free_sum, self.actual_idp_free_sum) {
            (Some(pred), Some(actual)) => pred == actual,
            _ => true,
        };
        let summands_ok = self.actual_idp_free_sum != Some(true) || (self.idp_p && self.idp_q);
        let h_ok = !self.condition1_direct || self.h_multiplicative == Some(true);
        let delta_ok = !(self.condition1_direct && self.actual_idp_free_sum == Some(true))
            || self.delta_multiplicative;
        self.condition1_direct == self.condition1_prop
            && prediction_ok
            && self.delta_multiplicative == facet_either
            && summands_ok
            && h_ok
            && delta_ok
    }
}

pub fn analyze_pair(p: &VPolytope, q: &VPolytope, options: AnalysisOptions) -> Result<PairReport> {
    for (x, side) in [(p, "P"), (q, "Q")] {
        require_origin(x, side)?;
        x.facets()?;
    }
    let fs = free_sum(p, q)?;

    let condition1_direct = condition1_direct(p, q, &fs)?;
    let condition1_prop = condition1_from_witness_sets(&witness_sets(p)?, &witness_sets(q)?);
    if condition1_direct != condition1_prop {
        return Err(Error::MethodsDisagree {
            direct: condition1_direct,
            witness_sets: condition1_prop,
        });
    }

    let span_p = p.spans_full_lattice()?;
    let span_q = q.spans_full_lattice()?;
    let idp_p = idp_check(p, IdpMode::Bounded)?.idp;
    let idp_q = idp_check(q, IdpMode::Bounded)?.idp;
    let facet_cond_p = p.facet_b_condition()?;
    let facet_cond_q = q.facet_b_condition()?;

    let predicted_idp_free_sum = (span_p && span_q && condition1_direct)
        .then_some(idp_p && idp_q && (facet_cond_p || facet_cond_q));
    let actual_idp_free_sum = if options.skip_actual {
        None
    } else {
        Some(idp_check(&fs, IdpMode::Bounded)?.idp)
    };

    let delta_p = delta_polynomial(p)?;
    let delta_q = delta_polynomial(q)?;
    let delta_free_sum = delta_polynomial(&fs)?;
    let delta_multiplicative = delta_free_sum == &delta_p * &delta_q;

    let h_multiplicative = if condition1_direct {
        let h = |x: &VPolytope| -> Result<Polynomial<BigInt>> {
            let data = h_polynomial(&configuration(x)?, default_hilbert_cap(x.ambient_dim()))?;
            data.require_stabilized().cloned()
        };
        Some(h(&fs)? == &h(p)? * &h(q)?)
    } else {
        None
    };

    let mut report = PairReport {
        span_p,
        span_q,
        condition1_direct,
        condition1_prop,
        idp_p,
        idp_q,
        facet_cond_p,
        facet_cond_q,
        predicted_idp_free_sum,
        actual_idp_free_sum,
        delta_p,
        delta_q,
        delta_free_sum,
        delta_multiplicative,
        h_multiplicative,
        consistent: false,
    };
    report.consistent = report.check_consistency();
    Ok(report)
}

fn opt(b: Option<bool>) -> String {
    b.map_or_else(|| "n/a".to_string(), |b| b.to_string())
}

impl fmt::Display for PairReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "span_P: {}", self.span_p)?;
        writeln!(f, "span_Q: {}", self.span_q)?;
        writeln!(f, "condition1_direct: {}", self.condition1_direct)?;
        writeln!(f, "condition1_prop: {}", self.condition1_prop)?;
        writeln!(f, "idp_P: {}", self.idp_p)?;
        writeln!(f, "idp_Q: {}", self.idp_q)?;
        writeln!(f, "facet_cond_P: {}", self.facet_cond_p)?;
        writeln!(f, "facet_cond_Q: {}", self.facet_cond_q)?;
        writeln!(f, "predicted_idp_free_sum: {}", opt(self.predicted_idp_free_sum))?;
        writeln!(f, "actual_idp_free_sum: {}", opt(self.actual_idp_free_sum))?;
        writeln!(f, "delta_P: {}", self.delta_p)?;
        writeln!(f, "delta_Q: {}", self.delta_q)?;
        writeln!(f, "delta_free_sum: {}", self.delta_free_sum)?;
        writeln!(f, "delta_multiplicative: {}", self.delta_multiplicative)?;
        writeln!(f, "h_multiplicative: {}", opt(self.h_multiplicative))?;
        write!(f, "consistent: {}", self.consistent)
    }
}
