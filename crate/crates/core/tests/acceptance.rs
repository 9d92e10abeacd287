//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;

use freesumlab::ehrhart::{delta_polynomial, ehrhart_counts, ehrhart_polynomial};
use freesumlab::freesum::{analyze_pair, condition1, free_sum, witness_sets, AnalysisOptions, Condition1Method};
use freesumlab::fuzz::{run_fuzz, ClaimTally, FuzzConfig, FuzzReport};
use freesumlab::monoid::{decompose, idp_check, DecompositionWitness, IdpMode};
use freesumlab::polynomial::Variable;
use freesumlab::zoo::{five_vertex, segment_2, triangle_1012, triangle_213, unit_simplex, unit_square};
use freesumlab::{Facet, Limits, Polynomial, Result};

const SEED: u64 = 20_240_611;

/// (dim P, dim Q, coordinate bound), 100 pairs each.
const CORPUS: &[(usize, usize, i64)] = &[(1, 1, 3), (1, 2, 3), (2, 2, 3), (1, 3, 3), (2, 3, 2), (3, 3, 2)];
const PAIRS_PER_CONFIG: usize = 100;

/// Sumsets of the six-dimensional free sums in the corpus reach about
/// 2.3 million points, above the default enumeration cap.
const CORPUS_LIMITS: Limits = Limits {
    max_dim: 8,
    max_vertices: 64,
    max_coord: 16,
    max_points: 4_000_000,
};

struct Outcome {
    name: &'static str,
    passed: bool,
    detail: String,
    elapsed: Duration,
}

fn timed(name: &'static str, budget: Option<Duration>, f: impl FnOnce() -> Result<(bool, String)>) -> Outcome {
    let start = Instant::now();
    let result = f();
    let elapsed = start.elapsed();
    let (mut passed, mut detail) = result.unwrap_or_else(|e| (false, format!("error: {e}")));
    if let Some(b) = budget {
        if elapsed > b {
            passed = false;
            detail.push_str(&format!("; over the {} s budget", b.as_secs()));
        }
    }
    Outcome {
        name,
        passed,
        detail,
        elapsed,
    }
}

fn all_held(t: &ClaimTally) -> bool {
    t.checked > 0 && t.held == t.checked
}

fn merge(into: &mut ClaimTally, from: &ClaimTally) {
    into.checked += from.checked;
    into.held += from.held;
}

#[derive(Default)]
struct Corpus {
    pairs: usize,
    condition1_true: usize,
    hypotheses_hold: usize,
    precondition_errors: usize,
    resource_limited: usize,
    inconsistencies: usize,
    methods_agree: ClaimTally,
    idp_prediction: ClaimTally,
    delta_product: ClaimTally,
    h_product: ClaimTally,
    h_equals_delta: ClaimTally,
    delta_sanity: ClaimTally,
    hilbert_below: ClaimTally,
    bounded_exhaustive: ClaimTally,
    first_failure: Option<String>,
}

impl Corpus {
    fn add(&mut self, r: &FuzzReport) {
        self.pairs += r.pairs;
        self.condition1_true += r.buckets.condition1_true;
        self.hypotheses_hold += r.buckets.hypotheses_hold;
        self.precondition_errors += r.buckets.precondition_errors;
        self.resource_limited += r.buckets.resource_limited;
        self.inconsistencies += r.inconsistencies;
        merge(&mut self.methods_agree, &r.condition1_methods_agree);
        merge(&mut self.idp_prediction, &r.idp_prediction_matches);
        merge(&mut self.delta_product, &r.delta_product_iff_facet_condition);
        merge(&mut self.h_product, &r.h_product_under_condition1);
        merge(&mut self.h_equals_delta, &r.h_equals_delta_iff_idp);
        merge(&mut self.delta_sanity, &r.delta_sanity);
        merge(&mut self.hilbert_below, &r.hilbert_below_ehrhart);
        merge(&mut self.bounded_exhaustive, &r.bounded_matches_exhaustive);
        if self.first_failure.is_none() {
            self.first_failure = r
                .first_inconsistency
                .as_ref()
                .map(|rep| serde_json::to_string(rep).expect("reproducer serializes"));
        }
    }

    /// Every analyzed pair finished without hitting a cap or an error.
    fn complete(&self) -> bool {
        self.resource_limited == 0 && self.precondition_errors == 0 && self.inconsistencies == 0
    }

    fn suffix(&self) -> String {
        let mut s = String::new();
        if self.resource_limited > 0 {
            s.push_str(&format!("; {} pairs resource-limited", self.resource_limited));
        }
        if let Some(f) = &self.first_failure {
            s.push_str(&format!("; first failure {f}"));
        }
        s
    }
}

fn build_corpus() -> Result<Corpus> {
    let mut corpus = Corpus::default();
    for &(dim_p, dim_q, coord_bound) in CORPUS {
        let config = FuzzConfig {
            dim_p,
            dim_q,
            coord_bound,
            count: PAIRS_PER_CONFIG,
            seed: SEED,
            include_origin: true,
        };
        corpus.add(&run_fuzz(&config, CORPUS_LIMITS)?);
    }
    Ok(corpus)
}

fn five_vertex_reproduction() -> Result<(bool, String)> {
    let p = five_vertex();
    let idp = idp_check(&p, IdpMode::Bounded)?.idp;
    let facet = Facet {
        normal: vec![1, 1, 1],
        offset: 2,
    };
    let has_facet = p.facets()?.contains(&facet);
    let fs = free_sum(&p, &p)?;
    let verdict = idp_check(&fs, IdpMode::Bounded)?;
    let Some(witness) = verdict.witness else {
        return Ok((false, "free sum reported IDP".into()));
    };
    let json = serde_json::to_string(&witness).expect("witness serializes");
    let back: DecompositionWitness = serde_json::from_str(&json).expect("witness parses");
    let in_dilate = back.verify(&fs)?;
    let search = decompose(&fs, &back.point, back.level)?;
    let ok = idp && has_facet && !verdict.idp && back == witness && in_dilate && !search.decomposable;
    Ok((ok, format!("P IDP {idp}, facet {facet} {has_facet}, free sum IDP {}, witness {json}", verdict.idp)))
}

fn witness_set_examples() -> Result<(bool, String)> {
    let zero_one = witness_sets(&five_vertex())?.len();
    let triangle = witness_sets(&triangle_1012())?.len();
    let segment = witness_sets(&segment_2())?.len();
    let c_ts = condition1(&triangle_1012(), &segment_2(), Condition1Method::Both)?;
    let ws = witness_sets(&triangle_213())?;
    let two_thirds = BigRational::new(BigInt::from(2), BigInt::from(3));
    let single = ws.len() == 1 && ws[0].min_value == two_thirds;
    let c_tt = condition1(&triangle_213(), &triangle_213(), Condition1Method::Both)?;
    let ok = zero_one == 0 && triangle == 0 && segment > 0 && c_ts && single && c_tt;
    Ok((
        ok,
        format!(
            "(0,1)-polytope {zero_one} sets; conv{{0,e1,(1,2)}} {triangle}; [0,2] {segment}, condition {c_ts}; \
             conv{{0,(2,1),(1,2)}} {} set(s) with min 2/3: {single}, condition {c_tt}",
            ws.len()
        ),
    ))
}

fn ehrhart_sanity(corpus: &Corpus) -> Result<(bool, String)> {
    let square = unit_square();
    let counts = ehrhart_counts(&square, 6)?;
    let square_counts = counts.iter().enumerate().all(|(n, &c)| c == ((n + 1) * (n + 1)) as u64);
    let one = |k: i64| BigRational::from_integer(BigInt::from(k));
    let square_poly = ehrhart_polynomial(&square)? == Polynomial::new(vec![one(1), one(2), one(1)], Variable::N);
    let square_delta = delta_polynomial(&square)? == Polynomial::lambda(vec![BigInt::from(1), BigInt::from(1)]);
    let mut simplices = true;
    for d in 1..=4 {
        simplices &= delta_polynomial(&unit_simplex(d))? == Polynomial::lambda(vec![BigInt::from(1)]);
    }
    let ok = square_counts
        && square_poly
        && square_delta
        && simplices
        && all_held(&corpus.delta_sanity)
        && all_held(&corpus.hilbert_below)
        && corpus.complete();
    Ok((
        ok,
        format!(
            "unit square counts {square_counts}, polynomial {square_poly}, delta {square_delta}; unit simplices {simplices}; \
             delta sanity {}/{}; H <= i {}/{}{}",
            corpus.delta_sanity.held,
            corpus.delta_sanity.checked,
            corpus.hilbert_below.held,
            corpus.hilbert_below.checked,
            corpus.suffix()
        ),
    ))
}

fn main() -> ExitCode {
    let mut outcomes = vec![
        timed("five-vertex polytope is IDP, its free sum with itself is not", Some(Duration::from_secs(10)), five_vertex_reproduction),
        timed("witness sets of the small examples", Some(Duration::from_secs(1)), witness_set_examples),
    ];

    let start = Instant::now();
    let corpus = build_corpus();
    let corpus_time = start.elapsed();
    let corpus = match corpus {
        Ok(c) => c,
        Err(e) => {
            println!("FAIL corpus generation: {e}");
            return ExitCode::FAILURE;
        }
    };
    let budget = Duration::from_secs(120);
    let within = corpus_time <= budget;
    let time_note = if within { String::new() } else { "; over the 120 s budget".into() };
    let shared = |name, passed: bool, detail: String| Outcome {
        name,
        passed: passed && within,
        detail: format!("{detail}{time_note}"),
        elapsed: corpus_time,
    };
    let c = &corpus;

    outcomes.push(shared(
        "lattice-point condition: direct enumeration agrees with witness sets",
        c.pairs >= 500 && all_held(&c.methods_agree) && c.methods_agree.checked == c.pairs && c.complete(),
        format!("{}/{} pairs agree{}", c.methods_agree.held, c.pairs, c.suffix()),
    ));
    outcomes.push(shared(
        "predicted free-sum IDP equals the actual verdict under the hypotheses",
        all_held(&c.idp_prediction) && c.idp_prediction.checked == c.hypotheses_hold && c.complete(),
        format!("{}/{} pairs with hypotheses{}", c.idp_prediction.held, c.hypotheses_hold, c.suffix()),
    ));

    let negative = (|| -> Result<(bool, String)> {
        let p = five_vertex();
        let r = analyze_pair(&p, &p, AnalysisOptions::default())?;
        Ok((!r.delta_multiplicative && !r.facet_cond_p && r.consistent, format!("five-vertex pair delta multiplicative {}", r.delta_multiplicative)))
    })()
    .unwrap_or_else(|e| (false, format!("error: {e}")));
    outcomes.push(shared(
        "delta of the free sum is the product iff a summand has facet offsets in {0,1}",
        all_held(&c.delta_product) && c.delta_product.checked == c.pairs && c.complete() && negative.0,
        format!("{}/{} pairs; {}{}", c.delta_product.held, c.delta_product.checked, negative.1, c.suffix()),
    ));
    outcomes.push(shared(
        "h equals delta iff IDP, for polytopes spanning the lattice",
        all_held(&c.h_equals_delta) && c.complete(),
        format!("{}/{} polytopes{}", c.h_equals_delta.held, c.h_equals_delta.checked, c.suffix()),
    ));
    outcomes.push(shared(
        "h of the free sum is the product when the lattice-point condition holds",
        all_held(&c.h_product) && c.h_product.checked == c.condition1_true && c.complete(),
        format!("{}/{} pairs with the condition{}", c.h_product.held, c.condition1_true, c.suffix()),
    ));
    let sanity = ehrhart_sanity(c).unwrap_or_else(|e| (false, format!("error: {e}")));
    outcomes.push(shared("Ehrhart and delta sanity", sanity.0, sanity.1));
    outcomes.push(shared(
        "bounded IDP check agrees with the exhaustive check up to level d+2",
        all_held(&c.bounded_exhaustive) && c.complete(),
        format!("{}/{} polytopes of dimension <= 4{}", c.bounded_exhaustive.held, c.bounded_exhaustive.checked, c.suffix()),
    ));

    println!("corpus: {} pairs, seed {SEED}, {:.1} s", c.pairs, corpus_time.as_secs_f64());
    let mut failed = 0;
    for o in &outcomes {
        failed += !o.passed as usize;
        println!(
            "{} {} ({:.2} s): {}",
            if o.passed { "PASS" } else { "FAIL" },
            o.name,
            o.elapsed.as_secs_f64(),
            o.detail
        );
    }
    println!("{} criteria, {failed} failed", outcomes.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
