//! Seeded random corpora of polytope pairs and the checks run on them.
//!
//! Pairs are generated sequentially from a ChaCha stream, analyzed in
//! parallel, and merged back in generation order, so a given configuration
//! always produces the same report.

use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::ehrhart::{delta_from_counts, ehrhart_counts};
use crate::error::{Error, Result};
use crate::freesum::{analyze_pair, free_sum, AnalysisOptions, PairReport};
use crate::io::PolytopeFile;
use crate::monoid::{configuration, default_hilbert_cap, h_polynomial, idp_check, IdpMode};
use crate::polynomial::Polynomial;
use crate::polytope::{LatticePoint, Limits, VPolytope};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FuzzConfig {
    pub dim_p: usize,
    pub dim_q: usize,
    pub coord_bound: i64,
    pub count: usize,
    pub seed: u64,
    pub include_origin: bool,
}

impl Default for FuzzConfig {
    fn default() -> Self {
        FuzzConfig {
            dim_p: 2,
            dim_q: 2,
            coord_bound: 2,
            count: 50,
            seed: 1,
            include_origin: true,
        }
    }
}

impl FuzzConfig {
    pub fn validate(&self) -> Result<()> {
        if self.dim_p == 0 || self.dim_q == 0 {
            return Err(Error::InvalidArgument("dimensions must be at least 1".into()));
        }
        if self.count == 0 {
            return Err(Error::InvalidArgument("count must be at least 1".into()));
        }
        if self.coord_bound < 1 {
            return Err(Error::InvalidArgument("coordinate bound must be at least 1".into()));
        }
        Ok(())
    }
}

/// Hull of (optionally) the origin and `dim..=dim+3` random points of
/// `[0, c]^dim`; `None` if the draw is not full-dimensional.
pub fn random_polytope(
    rng: &mut ChaCha8Rng,
    dim: usize,
    coord_bound: i64,
    include_origin: bool,
    limits: Limits,
) -> Result<Option<VPolytope>> {
    let k = rng.random_range(dim..=dim + 3);
    let mut pts = Vec::with_capacity(k + 1);
    if include_origin {
        pts.push(LatticePoint::origin(dim));
    }
    for _ in 0..k {
        pts.push(LatticePoint(
            (0..dim).map(|_| rng.random_range(0..=coord_bound)).collect(),
        ));
    }
    let p = VPolytope::with_limits(pts, limits)?;
    Ok(p.is_full_dimensional().then_some(p))
}

/// The `count` pairs of a configuration, in generation order.
pub fn generate_pairs(config: &FuzzConfig, limits: Limits) -> Result<Vec<(VPolytope, VPolytope)>> {
    config.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut draw = |dim: usize| -> Result<VPolytope> {
        for _ in 0..10_000 {
            if let Some(p) =
                random_polytope(&mut rng, dim, config.coord_bound, config.include_origin, limits)?
            {
                return Ok(p);
            }
        }
        Err(Error::InvalidArgument(
            "could not draw a full-dimensional polytope".into(),
        ))
    };
    (0..config.count)
        .map(|_| Ok((draw(config.dim_p)?, draw(config.dim_q)?)))
        .collect()
}

/// Single-polytope checks: Ehrhart/δ sanity, Hilbert function bounded by
/// the Ehrhart counts, bounded-vs-exhaustive IDP agreement, and (under full
/// lattice span) `h = δ` exactly when the polytope is IDP.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolytopeCheck {
    pub dim: usize,
    pub lattice_points: u64,
    pub span: bool,
    pub idp_bounded: bool,
    /// Exhaustive check up to level `dim + 2`, run only for `dim <= 4`.
    pub idp_exhaustive: Option<bool>,
    pub ehrhart_counts: Vec<u64>,
    pub delta: Polynomial<BigInt>,
    pub hilbert: Vec<u64>,
    pub h_poly: Polynomial<BigInt>,
    pub h_stabilized: bool,
    pub delta_sane: bool,
    pub hilbert_below_ehrhart: bool,
    pub bounded_matches_exhaustive: bool,
    /// `None` when the lattice span is not full (no claim applies).
    pub h_equals_delta_iff_idp: Option<bool>,
}

impl PolytopeCheck {
    pub fn ok(&self) -> bool {
        self.delta_sane
            && self.hilbert_below_ehrhart
            && self.bounded_matches_exhaustive
            && self.h_stabilized
            && self.h_equals_delta_iff_idp != Some(false)
    }
}

pub fn check_polytope(p: &VPolytope) -> Result<PolytopeCheck> {
    let d = p.ambient_dim();
    let hilbert = h_polynomial(&configuration(p)?, default_hilbert_cap(d))?;
    let n_max = (d + 2).max(hilbert.values.len() - 1);
    let counts = ehrhart_counts(p, n_max)?;
    let delta = delta_from_counts(&counts, d)?;

    let i1 = BigInt::from(counts[1]);
    let delta_sane = delta.coeff(0) == BigInt::from(1)
        && delta.coeff(1) == i1 - BigInt::from(d + 1)
        && delta.coefficients().iter().all(|c| *c >= BigInt::zero())
        && delta.degree().is_some_and(|deg| deg <= d);
    let hilbert_below_ehrhart = hilbert
        .values
        .iter()
        .zip(&counts)
        .all(|(h, i)| h <= i);

    let span = p.spans_full_lattice()?;
    let idp_bounded = idp_check(p, IdpMode::Bounded)?.idp;
    let idp_exhaustive = if d <= 4 {
        Some(idp_check(p, IdpMode::Exhaustive(d + 2))?.idp)
    } else {
        None
    };
    let bounded_matches_exhaustive = idp_exhaustive.is_none_or(|e| e == idp_bounded);
    let h_equals_delta_iff_idp =
        (span && hilbert.stabilized).then(|| (hilbert.h_poly == delta) == idp_bounded);

    Ok(PolytopeCheck {
        dim: d,
        lattice_points: counts[1],
        span,
        idp_bounded,
        idp_exhaustive,
        ehrhart_counts: counts,
        delta,
        hilbert: hilbert.values,
        h_poly: hilbert.h_poly,
        h_stabilized: hilbert.stabilized,
        delta_sane,
        hilbert_below_ehrhart,
        bounded_matches_exhaustive,
        h_equals_delta_iff_idp,
    })
}

/// Result of analyzing one generated pair.
#[derive(Debug)]
pub struct PairOutcome {
    pub index: usize,
    pub p: VPolytope,
    pub q: VPolytope,
    pub report: Result<PairReport>,
    /// Checks on `P`, `Q`, and (for dimension at most 4) `P ⊕ Q`.
    pub polytope_checks: Result<Vec<PolytopeCheck>>,
}

impl PairOutcome {
    pub fn is_precondition_error(&self) -> bool {
        matches!(self.report, Err(Error::OriginMissing { .. }))
    }

    /// A cap was hit or the Hilbert function did not stabilize, and nothing
    /// else went wrong.
    pub fn is_resource_limited(&self) -> bool {
        let limited = |e: &Error| {
            matches!(e, Error::CapExceeded { .. } | Error::HilbertNotStabilized { .. })
        };
        let report_ok = match &self.report {
            Ok(r) => r.consistent,
            Err(e) => limited(e),
        };
        let checks_ok = match &self.polytope_checks {
            Ok(cs) => cs.iter().all(PolytopeCheck::ok),
            Err(e) => limited(e),
        };
        let any_error = self.report.is_err() || self.polytope_checks.is_err();
        report_ok && checks_ok && any_error
    }

    pub fn is_consistent(&self) -> bool {
        if self.is_precondition_error() || self.is_resource_limited() {
            return true;
        }
        let pair_ok = self.report.as_ref().is_ok_and(|r| r.consistent);
        let checks_ok = self
            .polytope_checks
            .as_ref()
            .is_ok_and(|cs| cs.iter().all(PolytopeCheck::ok));
        pair_ok && checks_ok
    }
}

fn analyze_one(index: usize, p: VPolytope, q: VPolytope) -> PairOutcome {
    let report = analyze_pair(&p, &q, AnalysisOptions::default());
    let polytope_checks = if matches!(report, Err(Error::OriginMissing { .. })) {
        Ok(Vec::new())
    } else {
        (|| {
            let mut out = vec![check_polytope(&p)?, check_polytope(&q)?];
            if p.ambient_dim() + q.ambient_dim() <= 4 {
                out.push(check_polytope(&free_sum(&p, &q)?)?);
            }
            Ok(out)
        })()
    };
    PairOutcome {
        index,
        p,
        q,
        report,
        polytope_checks,
    }
}

/// Generates and analyzes every pair of the configuration.
pub fn analyze_corpus(config: &FuzzConfig, limits: Limits) -> Result<Vec<PairOutcome>> {
    let pairs = generate_pairs(config, limits)?;
    Ok(pairs
        .into_par_iter()
        .enumerate()
        .map(|(i, (p, q))| analyze_one(i, p, q))
        .collect())
}

/// A failing pair, serialized so it can be replayed with `check`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Reproducer {
    pub index: usize,
    #[serde(rename = "P")]
    pub p: PolytopeFile,
    #[serde(rename = "Q")]
    pub q: PolytopeFile,
    pub report: Option<PairReport>,
    pub error: Option<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Buckets {
    pub condition1_true: usize,
    pub condition1_false: usize,
    pub spans_both: usize,
    pub spans_not_both: usize,
    pub hypotheses_hold: usize,
    pub precondition_errors: usize,
    pub resource_limited: usize,
}

/// How many pairs (or polytopes) each claim was exercised on, and how many
/// agreed.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClaimTally {
    pub checked: usize,
    pub held: usize,
}

impl ClaimTally {
    fn record(&mut self, held: bool) {
        self.checked += 1;
        self.held += held as usize;
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FuzzReport {
    pub config: FuzzConfig,
    pub pairs: usize,
    pub buckets: Buckets,
    pub condition1_methods_agree: ClaimTally,
    pub idp_prediction_matches: ClaimTally,
    pub delta_product_iff_facet_condition: ClaimTally,
    pub h_product_under_condition1: ClaimTally,
    pub free_sum_idp_implies_summands_idp: ClaimTally,
    pub h_equals_delta_iff_idp: ClaimTally,
    pub delta_sanity: ClaimTally,
    pub hilbert_below_ehrhart: ClaimTally,
    pub bounded_matches_exhaustive: ClaimTally,
    pub inconsistencies: usize,
    pub first_inconsistency: Option<Reproducer>,
}

impl FuzzReport {
    pub fn is_clean(&self) -> bool {
        self.inconsistencies == 0
    }
}

pub fn summarize(config: &FuzzConfig, outcomes: &[PairOutcome]) -> FuzzReport {
    let mut r = FuzzReport {
        config: *config,
        pairs: outcomes.len(),
        buckets: Buckets::default(),
        condition1_methods_agree: ClaimTally::default(),
        idp_prediction_matches: ClaimTally::default(),
        delta_product_iff_facet_condition: ClaimTally::default(),
        h_product_under_condition1: ClaimTally::default(),
        free_sum_idp_implies_summands_idp: ClaimTally::default(),
        h_equals_delta_iff_idp: ClaimTally::default(),
        delta_sanity: ClaimTally::default(),
        hilbert_below_ehrhart: ClaimTally::default(),
        bounded_matches_exhaustive: ClaimTally::default(),
        inconsistencies: 0,
        first_inconsistency: None,
    };
    for o in outcomes {
        if o.is_precondition_error() {
            r.buckets.precondition_errors += 1;
            continue;
        }
        if o.is_resource_limited() {
            r.buckets.resource_limited += 1;
        }
        match &o.report {
            Ok(rep) => {
                if rep.condition1_direct {
                    r.buckets.condition1_true += 1;
                } else {
                    r.buckets.condition1_false += 1;
                }
                if rep.span_p && rep.span_q {
                    r.buckets.spans_both += 1;
                } else {
                    r.buckets.spans_not_both += 1;
                }
                r.condition1_methods_agree
                    .record(rep.condition1_direct == rep.condition1_prop);
                if let (Some(pred), Some(actual)) =
                    (rep.predicted_idp_free_sum, rep.actual_idp_free_sum)
                {
                    r.buckets.hypotheses_hold += 1;
                    r.idp_prediction_matches.record(pred == actual);
                }
                r.delta_product_iff_facet_condition.record(
                    rep.delta_multiplicative == (rep.facet_cond_p || rep.facet_cond_q),
                );
                if rep.condition1_direct {
                    r.h_product_under_condition1
                        .record(rep.h_multiplicative == Some(true));
                }
                if rep.actual_idp_free_sum == Some(true) {
                    r.free_sum_idp_implies_summands_idp
                        .record(rep.idp_p && rep.idp_q);
                }
            }
            Err(Error::MethodsDisagree { .. }) => r.condition1_methods_agree.record(false),
            Err(_) => {}
        }
        if let Ok(checks) = &o.polytope_checks {
            for c in checks {
                if let Some(held) = c.h_equals_delta_iff_idp {
                    r.h_equals_delta_iff_idp.record(held);
                }
                r.delta_sanity.record(c.delta_sane);
                r.hilbert_below_ehrhart.record(c.hilbert_below_ehrhart);
                if c.idp_exhaustive.is_some() {
                    r.bounded_matches_exhaustive
                        .record(c.bounded_matches_exhaustive);
                }
            }
        }
        if !o.is_consistent() {
            r.inconsistencies += 1;
            if r.first_inconsistency.is_none() {
                let error = match (&o.report, &o.polytope_checks) {
                    (Err(e), _) | (_, Err(e)) => Some(e.to_string()),
                    _ => None,
                };
                r.first_inconsistency = Some(Reproducer {
                    index: o.index,
                    p: PolytopeFile::from_polytope(&o.p, Some("P".into())),
                    q: PolytopeFile::from_polytope(&o.q, Some("Q".into())),
                    report: o.report.as_ref().ok().cloned(),
                    error,
                });
            }
        }
    }
    r
}

pub fn run_fuzz(config: &FuzzConfig, limits: Limits) -> Result<FuzzReport> {
    Ok(summarize(config, &analyze_corpus(config, limits)?))
}

impl fmt::Display for ClaimTally {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.held, self.checked)
    }
}

impl fmt::Display for FuzzReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = &self.config;
        writeln!(
            f,
            "fuzz: dims {}/{}, coord bound {}, seed {}, origin {}",
            c.dim_p, c.dim_q, c.coord_bound, c.seed, c.include_origin
        )?;
        writeln!(f, "pairs: {}", self.pairs)?;
        let b = &self.buckets;
        writeln!(
            f,
            "buckets: condition1 true {} / false {}; spans both {} / not both {}; hypotheses hold {}; precondition errors {}; resource limited {}",
            b.condition1_true,
            b.condition1_false,
            b.spans_both,
            b.spans_not_both,
            b.hypotheses_hold,
            b.precondition_errors,
            b.resource_limited
        )?;
        writeln!(f, "condition1 methods agree: {}", self.condition1_methods_agree)?;
        writeln!(f, "free-sum IDP prediction matches: {}", self.idp_prediction_matches)?;
        writeln!(
            f,
            "delta product iff facet condition: {}",
            self.delta_product_iff_facet_condition
        )?;
        writeln!(f, "h product under condition1: {}", self.h_product_under_condition1)?;
        writeln!(
            f,
            "free-sum IDP implies summands IDP: {}",
            self.free_sum_idp_implies_summands_idp
        )?;
        writeln!(f, "h equals delta iff IDP: {}", self.h_equals_delta_iff_idp)?;
        writeln!(f, "delta sanity: {}", self.delta_sanity)?;
        writeln!(f, "Hilbert below Ehrhart: {}", self.hilbert_below_ehrhart)?;
        writeln!(f, "bounded matches exhaustive IDP: {}", self.bounded_matches_exhaustive)?;
        write!(f, "inconsistencies: {}", self.inconsistencies)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generation_is_deterministic() {
        let cfg = FuzzConfig {
            count: 5,
            ..FuzzConfig::default()
        };
        let a = generate_pairs(&cfg, Limits::default()).unwrap();
        let b = generate_pairs(&cfg, Limits::default()).unwrap();
        assert_eq!(a, b);
        for (p, q) in &a {
            assert!(p.is_full_dimensional() && q.is_full_dimensional());
            assert!(p.contains_origin() && q.contains_origin());
        }
    }

    #[test]
    fn invalid_configs() {
        let cfg = FuzzConfig {
            count: 0,
            ..FuzzConfig::default()
        };
        assert!(matches!(cfg.validate(), Err(Error::InvalidArgument(_))));
        let cfg = FuzzConfig {
            dim_q: 0,
            ..FuzzConfig::default()
        };
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn small_run_is_clean() {
        let cfg = FuzzConfig {
            count: 8,
            ..FuzzConfig::default()
        };
        let r = run_fuzz(&cfg, Limits::default()).unwrap();
        assert!(r.is_clean(), "{r}");
        assert_eq!(r.pairs, 8);
        assert_eq!(r.condition1_methods_agree.checked, 8);
    }

    #[test]
    fn missing_origin_is_bucketed() {
        let cfg = FuzzConfig {
            count: 6,
            include_origin: false,
            coord_bound: 3,
            ..FuzzConfig::default()
        };
        let r = run_fuzz(&cfg, Limits::default()).unwrap();
        assert!(r.buckets.precondition_errors > 0);
        assert!(r.is_clean());
    }

    #[test]
    fn cap_hits_are_not_inconsistencies() {
        let cfg = FuzzConfig {
            count: 6,
            coord_bound: 3,
            ..FuzzConfig::default()
        };
        let limits = Limits {
            max_points: 60,
            ..Limits::default()
        };
        let r = run_fuzz(&cfg, limits).unwrap();
        assert!(r.buckets.resource_limited > 0, "{r}");
        assert!(r.is_clean(), "{r}");
    }
}
