//! Brute-force verification suites. Each suite enumerates a family of
//! instances (exhaustively or from a seeded generator), rechecks one
//! claim per instance against independent computation, and reports
//! counterexamples as re-runnable records.
//!
//! Suite identifiers are part of the CLI contract and stay stable.

use std::time::Instant;

use itertools::Itertools;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::asymptotic::{asymptotic_covering_number, endpoint_gap_condition, normalize};
use crate::covering::{ap_covering_number, covering_number_with, lower_bound, DEFAULT_NODE_BUDGET};
use crate::error::Error;
use crate::exec::{map_ordered, Parallelism};
use crate::intset::IntSet;
use crate::sumsets::{detect_ap, hfold, hfold_size_bound, hfold_upto};

/// One verification suite identified by its stable CLI name.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Lemma21,
    Prop22,
    Prop23,
    Theorem24,
    Theorem31,
    Lemma32,
    Theorem41,
    Lemma42,
    Corollary13,
    Example1,
    Example2,
}

impl Suite {
    pub const ALL: [Suite; 11] = [
        Suite::Lemma21,
        Suite::Prop22,
        Suite::Prop23,
        Suite::Theorem24,
        Suite::Theorem31,
        Suite::Lemma32,
        Suite::Theorem41,
        Suite::Lemma42,
        Suite::Corollary13,
        Suite::Example1,
        Suite::Example2,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Lemma21 => "lemma-2.1",
            Suite::Prop22 => "prop-2.2",
            Suite::Prop23 => "prop-2.3",
            Suite::Theorem24 => "theorem-2.4",
            Suite::Theorem31 => "theorem-3.1",
            Suite::Lemma32 => "lemma-3.2",
            Suite::Theorem41 => "theorem-4.1",
            Suite::Lemma42 => "lemma-4.2",
            Suite::Corollary13 => "corollary-1.3",
            Suite::Example1 => "example-1",
            Suite::Example2 => "example-2",
        }
    }

    pub fn parse(name: &str) -> Option<Suite> {
        Suite::ALL.into_iter().find(|s| s.name() == name)
    }

    pub fn describe(self) -> &'static str {
        match self {
            Suite::Lemma21 => {
                "iterated sumset sizes: progressions grow as h*m-h+1 exactly, all other sets reach at least h*m"
            }
            Suite::Prop22 => "exact covering numbers respect the counting lower bound",
            Suite::Prop23 => "progressions have covering number ceil((r*m-r+1)/m) exactly",
            Suite::Theorem24 => {
                "covering numbers are at least ceil((r+1)/2), with equality exactly for pairs, progressions at r=2, and size-3 progressions at r=4"
            }
            Suite::Theorem31 => {
                "the endpoint-gap condition is equivalent to iterates becoming intervals, from fold max(1, b-2) on"
            }
            Suite::Lemma32 => "iterates of a set and of its normal form agree on progression shape",
            Suite::Theorem41 => {
                "covering numbers of iterates reach at least r once h*(m-1) exceeds r-2"
            }
            Suite::Lemma42 => "covering numbers are invariant under dilation and translation",
            Suite::Corollary13 => {
                "covering numbers of iterates stabilize to the closed-form limit r or r+1"
            }
            Suite::Example1 => "two-element sets have covering number ceil((r+1)/2)",
            Suite::Example2 => {
                "spread sets hit the binomial sumset size and force covers of at least binom/m translates"
            }
        }
    }

    /// Default instance-family bounds; fields a suite does not use are
    /// set to neutral values.
    pub fn default_bounds(self) -> Bounds {
        match self {
            Suite::Lemma21 => Bounds { max_elem: 12, max_size: 5, r: (2, 2), h: (1, 6), cases: 0 },
            Suite::Prop22 => Bounds { max_elem: 10, max_size: 4, r: (2, 5), h: (1, 1), cases: 0 },
            Suite::Prop23 => Bounds { max_elem: 0, max_size: 8, r: (2, 6), h: (1, 1), cases: 0 },
            Suite::Theorem24 => Bounds { max_elem: 10, max_size: 4, r: (2, 5), h: (1, 1), cases: 0 },
            Suite::Theorem31 => Bounds { max_elem: 12, max_size: 5, r: (2, 2), h: (1, 1), cases: 0 },
            Suite::Lemma32 => Bounds { max_elem: 30, max_size: 5, r: (2, 2), h: (1, 6), cases: 200 },
            Suite::Theorem41 => Bounds { max_elem: 8, max_size: 4, r: (2, 4), h: (1, 10), cases: 0 },
            Suite::Lemma42 => Bounds { max_elem: 20, max_size: 5, r: (2, 3), h: (1, 1), cases: 500 },
            Suite::Corollary13 => {
                Bounds { max_elem: 8, max_size: 4, r: (2, 3), h: (1, 40), cases: 0 }
            }
            Suite::Example1 => Bounds { max_elem: 10, max_size: 2, r: (2, 12), h: (1, 1), cases: 0 },
            Suite::Example2 => Bounds { max_elem: 0, max_size: 4, r: (2, 4), h: (1, 1), cases: 0 },
        }
    }
}

/// Instance-family bounds for a suite run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Bounds {
    /// Largest element for exhaustive families; half-range for random ones.
    pub max_elem: i64,
    /// Largest set size (for the spread suite, the largest base size m).
    pub max_size: usize,
    pub r: (u64, u64),
    /// Fold range; for the stabilization suite, `h.1` is the scan cap.
    pub h: (u64, u64),
    /// Number of generated instances for randomized suites.
    pub cases: usize,
}

/// Partial override of a suite's default bounds.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct BoundsOverride {
    pub max_elem: Option<i64>,
    pub max_size: Option<usize>,
    pub r: Option<(u64, u64)>,
    pub h: Option<(u64, u64)>,
    pub cases: Option<usize>,
}

impl Bounds {
    pub fn merged(mut self, over: &BoundsOverride) -> Bounds {
        if let Some(v) = over.max_elem {
            self.max_elem = v;
        }
        if let Some(v) = over.max_size {
            self.max_size = v;
        }
        if let Some(v) = over.r {
            self.r = v;
        }
        if let Some(v) = over.h {
            self.h = v;
        }
        if let Some(v) = over.cases {
            self.cases = v;
        }
        self
    }
}

#[derive(Debug, Clone)]
pub struct VerifyConfig {
    pub node_budget: u64,
    pub seed: u64,
    pub mode: Parallelism,
    /// Skip this many instances from the front of the enumeration.
    pub skip: usize,
    /// Check at most this many instances after skipping.
    pub limit: Option<usize>,
    pub bounds: BoundsOverride,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            node_budget: DEFAULT_NODE_BUDGET,
            seed: 0,
            mode: Parallelism::default(),
            skip: 0,
            limit: None,
            bounds: BoundsOverride::default(),
        }
    }
}

/// One counterexample (or internal error) found by a suite.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Failure {
    pub instance: String,
    pub check: String,
    pub expected: String,
    pub got: String,
    /// Single CLI command that recomputes this instance.
    pub rerun: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerificationSummary {
    pub suite: String,
    pub instances_checked: u64,
    pub failures: Vec<Failure>,
    /// Instances whose solver call ran out of node budget; informative,
    /// not counted as failures.
    pub budget_exceeded: Vec<String>,
    /// Largest exact-cover universe any instance produced.
    pub largest_universe: u64,
    pub elapsed_ms: u64,
}

impl VerificationSummary {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// All sets in normal form (contain 0, positive elements with gcd 1)
/// with elements up to `max_elem` and size in `[2, max_size]`, ordered
/// by (largest element, size, elements).
pub fn normal_form_sets(max_elem: i64, max_size: usize) -> Vec<Vec<i64>> {
    let mut sets = Vec::new();
    for size in 2..=max_size {
        for combo in (1..=max_elem).combinations(size - 1) {
            let g = combo.iter().fold(0i64, |g, &v| num_integer::gcd(g, v));
            if g == 1 {
                let mut elems = Vec::with_capacity(size);
                elems.push(0);
                elems.extend(combo);
                sets.push(elems);
            }
        }
    }
    sets.sort_by_key(|s| (*s.last().unwrap(), s.len(), s.clone()));
    sets
}

/// Binomial coefficient, exact in u64.
pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 1..=k {
        acc = acc * ((n - k + i) as u128) / (i as u128);
    }
    acc as u64
}

pub fn run_suite(suite: Suite, config: &VerifyConfig) -> VerificationSummary {
    let start = Instant::now();
    let bounds = suite.default_bounds().merged(&config.bounds);
    let budget = config.node_budget;
    let (checked, outcomes) = match suite {
        Suite::Lemma21 => {
            let cases = set_fold_cases(&bounds);
            run_cases(config, cases, |(elems, h)| eval_lemma21(elems, h))
        }
        Suite::Prop22 => {
            let cases = set_r_cases(&bounds);
            run_cases(config, cases, move |(elems, r)| eval_prop22(elems, r, budget))
        }
        Suite::Prop23 => {
            let cases = progression_cases(&bounds);
            run_cases(config, cases, move |case| eval_prop23(case, budget))
        }
        Suite::Theorem24 => {
            let cases = set_r_cases(&bounds);
            run_cases(config, cases, move |(elems, r)| eval_theorem24(elems, r, budget))
        }
        Suite::Theorem31 => {
            let cases = normal_form_sets(bounds.max_elem, bounds.max_size);
            run_cases(config, cases, eval_theorem31)
        }
        Suite::Lemma32 => {
            let cases = lemma32_cases(&bounds, config.seed);
            run_cases(config, cases, |(elems, h)| eval_lemma32(elems, h))
        }
        Suite::Theorem41 => {
            let cases = set_r_cases(&bounds);
            let h = bounds.h;
            run_cases(config, cases, move |(elems, r)| eval_theorem41(elems, r, h, budget))
        }
        Suite::Lemma42 => {
            let cases = lemma42_cases(&bounds, config.seed);
            run_cases(config, cases, move |case| eval_lemma42(case, budget))
        }
        Suite::Corollary13 => {
            let cases = set_r_cases(&bounds);
            let cap = bounds.h.1;
            run_cases(config, cases, move |(elems, r)| eval_corollary13(elems, r, cap, budget))
        }
        Suite::Example1 => {
            let mut cases = Vec::new();
            for k in [1i64, 3, 10] {
                for r in bounds.r.0..=bounds.r.1 {
                    cases.push((k, r));
                }
            }
            run_cases(config, cases, move |(k, r)| eval_example1(k, r, budget))
        }
        Suite::Example2 => {
            let mut cases = Vec::new();
            for m in 2..=bounds.max_size {
                for r in bounds.r.0..=bounds.r.1 {
                    cases.push((m, r));
                }
            }
            run_cases(config, cases, move |(m, r)| eval_example2(m, r, budget))
        }
    };

    let mut summary = VerificationSummary {
        suite: suite.name().to_string(),
        instances_checked: checked,
        failures: Vec::new(),
        budget_exceeded: Vec::new(),
        largest_universe: 0,
        elapsed_ms: 0,
    };
    for outcome in outcomes {
        summary.failures.extend(outcome.failures);
        if let Some(instance) = outcome.budget {
            summary.budget_exceeded.push(instance);
        }
        summary.largest_universe = summary.largest_universe.max(outcome.largest_universe);
    }
    summary.elapsed_ms = start.elapsed().as_millis() as u64;
    summary
}

#[derive(Debug, Default)]
struct Outcome {
    failures: Vec<Failure>,
    budget: Option<String>,
    largest_universe: u64,
}

fn run_cases<T, F>(config: &VerifyConfig, cases: Vec<T>, eval: F) -> (u64, Vec<Outcome>)
where
    T: Send,
    F: Fn(T) -> Outcome + Sync + Send,
{
    let selected: Vec<T> = cases
        .into_iter()
        .skip(config.skip)
        .take(config.limit.unwrap_or(usize::MAX))
        .collect();
    let checked = selected.len() as u64;
    (checked, map_ordered(config.mode, selected, eval))
}

fn set_fold_cases(bounds: &Bounds) -> Vec<(Vec<i64>, u64)> {
    let mut cases = Vec::new();
    for elems in normal_form_sets(bounds.max_elem, bounds.max_size) {
        for h in bounds.h.0..=bounds.h.1 {
            cases.push((elems.clone(), h));
        }
    }
    cases
}

fn set_r_cases(bounds: &Bounds) -> Vec<(Vec<i64>, u64)> {
    let mut cases = Vec::new();
    for elems in normal_form_sets(bounds.max_elem, bounds.max_size) {
        for r in bounds.r.0..=bounds.r.1 {
            cases.push((elems.clone(), r));
        }
    }
    cases
}

fn progression_cases(bounds: &Bounds) -> Vec<(i64, i64, usize, u64)> {
    let mut cases = Vec::new();
    for (first, diff) in [(0i64, 1i64), (7, 3), (-5, 2)] {
        for m in 2..=bounds.max_size {
            for r in bounds.r.0..=bounds.r.1 {
                cases.push((first, diff, m, r));
            }
        }
    }
    cases
}

fn random_set(rng: &mut ChaCha8Rng, lo: i64, hi: i64, max_size: usize) -> Vec<i64> {
    let size = rng.gen_range(2..=max_size);
    let span = (hi - lo + 1) as usize;
    let mut elems: Vec<i64> = rand::seq::index::sample(rng, span, size)
        .into_iter()
        .map(|i| lo + i as i64)
        .collect();
    elems.sort_unstable();
    elems
}

fn lemma32_cases(bounds: &Bounds, seed: u64) -> Vec<(Vec<i64>, u64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..bounds.cases)
        .map(|_| {
            let elems = random_set(&mut rng, -bounds.max_elem, bounds.max_elem, bounds.max_size);
            let h = rng.gen_range(bounds.h.0..=bounds.h.1);
            (elems, h)
        })
        .collect()
}

fn lemma42_cases(bounds: &Bounds, seed: u64) -> Vec<(Vec<i64>, i64, i64, u64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cases = Vec::new();
    for _ in 0..bounds.cases {
        let elems = random_set(&mut rng, -bounds.max_elem, bounds.max_elem, bounds.max_size);
        let d = rng.gen_range(1..=7);
        let t = rng.gen_range(-50..=50);
        for r in bounds.r.0..=bounds.r.1 {
            cases.push((elems.clone(), d, t, r));
        }
    }
    cases
}

fn push_failure(
    out: &mut Outcome,
    instance: &str,
    rerun: &str,
    check: &str,
    expected: impl ToString,
    got: impl ToString,
) {
    out.failures.push(Failure {
        instance: instance.to_string(),
        check: check.to_string(),
        expected: expected.to_string(),
        got: got.to_string(),
        rerun: rerun.to_string(),
    });
}

fn unexpected(out: &mut Outcome, instance: &str, rerun: &str, err: &Error) {
    push_failure(out, instance, rerun, "unexpected error", "a result", err);
}

/// Runs the exact solver, folding budget exhaustion and universe size
/// into `out`; `None` means the instance could not be decided.
fn solve(
    a: &IntSet,
    r: u64,
    budget: u64,
    out: &mut Outcome,
    instance: &str,
    rerun: &str,
) -> Option<u64> {
    match covering_number_with(a, r, budget) {
        Ok(result) => {
            out.largest_universe = out.largest_universe.max(result.universe_size);
            Some(result.covering_number)
        }
        Err(Error::BudgetExceeded { .. }) => {
            out.budget = Some(instance.to_string());
            None
        }
        Err(err) => {
            unexpected(out, instance, rerun, &err);
            None
        }
    }
}

fn eval_lemma21(elems: Vec<i64>, h: u64) -> Outcome {
    let mut out = Outcome::default();
    let a = IntSet::new(elems);
    let instance = format!("A={{{a}}}, h={h}");
    let rerun = format!("approxcover sumset --set \"{a}\" --h {h}");
    let size = match hfold(&a, h) {
        Ok(folded) => folded.len() as u64,
        Err(err) => {
            unexpected(&mut out, &instance, &rerun, &err);
            return out;
        }
    };
    let (bound, is_ap) = hfold_size_bound(&a, h).expect("set is nonempty");
    if is_ap {
        if size != bound {
            push_failure(&mut out, &instance, &rerun, "progression iterate size", bound, size);
        }
    } else if size < bound {
        push_failure(
            &mut out,
            &instance,
            &rerun,
            "non-progression iterate size",
            format!(">= {bound}"),
            size,
        );
    }
    out
}

fn eval_prop22(elems: Vec<i64>, r: u64, budget: u64) -> Outcome {
    let mut out = Outcome::default();
    let a = IntSet::new(elems);
    let instance = format!("A={{{a}}}, r={r}");
    let rerun = format!("approxcover cover --set \"{a}\" --r {r}");
    let Some(cn) = solve(&a, r, budget, &mut out, &instance, &rerun) else {
        return out;
    };
    let bound = lower_bound(&a, r).expect("size >= 2");
    if cn < bound {
        push_failure(&mut out, &instance, &rerun, "counting lower bound", format!(">= {bound}"), cn);
    }
    out
}

fn eval_prop23((first, diff, m, r): (i64, i64, usize, u64), budget: u64) -> Outcome {
    let mut out = Outcome::default();
    let a = IntSet::new((0..m).map(|i| first + diff * i as i64).collect::<Vec<_>>());
    let instance = format!("A={{{a}}}, r={r}");
    let rerun = format!("approxcover cover --set \"{a}\" --r {r}");
    let Some(cn) = solve(&a, r, budget, &mut out, &instance, &rerun) else {
        return out;
    };
    let expected = ap_covering_number(m as u64, r).expect("m >= 2");
    if cn != expected {
        push_failure(&mut out, &instance, &rerun, "progression closed form", expected, cn);
    }
    out
}

fn eval_theorem24(elems: Vec<i64>, r: u64, budget: u64) -> Outcome {
    let mut out = Outcome::default();
    let a = IntSet::new(elems);
    let m = a.len();
    let instance = format!("A={{{a}}}, r={r}");
    let rerun = format!("approxcover cover --set \"{a}\" --r {r}");
    let Some(cn) = solve(&a, r, budget, &mut out, &instance, &rerun) else {
        return out;
    };
    let floor = (r + 1).div_ceil(2);
    if cn < floor {
        push_failure(&mut out, &instance, &rerun, "half-r lower bound", format!(">= {floor}"), cn);
        return out;
    }
    let is_ap = detect_ap(&a).expect("nonempty").is_some();
    let equality_expected = m == 2 || (r == 2 && is_ap) || (r == 4 && m == 3 && is_ap);
    if (cn == floor) != equality_expected {
        push_failure(
            &mut out,
            &instance,
            &rerun,
            "equality classification",
            format!("equality={equality_expected}"),
            format!("covering_number={cn}, bound={floor}"),
        );
    }
    out
}

fn eval_theorem31(elems: Vec<i64>) -> Outcome {
    let mut out = Outcome::default();
    let a = IntSet::new(elems);
    let instance = format!("A={{{a}}}");
    let rerun = format!("approxcover asymptotic --set \"{a}\" --r 2");
    let b = a.max().unwrap();
    let hi = b as u64 + 4;
    let condition = endpoint_gap_condition(&a).expect("size >= 2");
    let folds = match hfold_upto(&a, hi) {
        Ok(folds) => folds,
        Err(err) => {
            unexpected(&mut out, &instance, &rerun, &err);
            return out;
        }
    };
    let threshold = (b - 2).max(1) as u64;
    for (idx, fold) in folds.iter().enumerate() {
        let h = idx as u64 + 1;
        if condition {
            if h >= threshold && !fold.is_interval() {
                push_failure(
                    &mut out,
                    &instance,
                    &rerun,
                    "interval iterate past threshold",
                    format!("{h}A = [0, {}]", h as i64 * b),
                    format!("{} elements with gaps", fold.len()),
                );
            }
        } else if detect_ap(fold).expect("nonempty").is_some() {
            push_failure(
                &mut out,
                &instance,
                &rerun,
                "no progression iterate without the condition",
                format!("{h}A is not a progression"),
                "progression",
            );
        }
    }
    out
}

fn eval_lemma32(elems: Vec<i64>, h: u64) -> Outcome {
    let mut out = Outcome::default();
    let a = IntSet::new(elems);
    let instance = format!("A={{{a}}}, h={h}");
    let rerun = format!("approxcover sumset --set \"{a}\" --h {h}");
    let b = normalize(&a).expect("nonempty").normalized;
    let ap_a = hfold(&a, h).map(|s| detect_ap(&s).expect("nonempty").is_some());
    let ap_b = hfold(&b, h).map(|s| detect_ap(&s).expect("nonempty").is_some());
    match (ap_a, ap_b) {
        (Ok(x), Ok(y)) => {
            if x != y {
                push_failure(
                    &mut out,
                    &instance,
                    &rerun,
                    "normal form preserves progression shape",
                    format!("both or neither (original {x})"),
                    format!("normal form {y}"),
                );
            }
        }
        (Err(err), _) | (_, Err(err)) => unexpected(&mut out, &instance, &rerun, &err),
    }
    out
}

fn eval_theorem41(elems: Vec<i64>, r: u64, h: (u64, u64), budget: u64) -> Outcome {
    let mut out = Outcome::default();
    let a = IntSet::new(elems);
    let m = a.len() as u64;
    let instance = format!("A={{{a}}}, r={r}");
    let rerun = format!("approxcover sweep --set \"{a}\" --r {r} --h {}..{}", h.0, h.1);
    let folds = match hfold_upto(&a, h.1) {
        Ok(folds) => folds,
        Err(err) => {
            unexpected(&mut out, &instance, &rerun, &err);
            return out;
        }
    };
    for fold_h in h.0..=h.1 {
        if (fold_h as u128) * ((m - 1) as u128) + 2 <= r as u128 {
            continue;
        }
        let fold = &folds[(fold_h - 1) as usize];
        let Some(cn) = solve(fold, r, budget, &mut out, &instance, &rerun) else {
            return out;
        };
        if cn < r {
            push_failure(
                &mut out,
                &instance,
                &rerun,
                format!("iterate covering number at h={fold_h}").as_str(),
                format!(">= {r}"),
                cn,
            );
        }
    }
    out
}

fn eval_lemma42((elems, d, t, r): (Vec<i64>, i64, i64, u64), budget: u64) -> Outcome {
    let mut out = Outcome::default();
    let a = IntSet::new(elems);
    let image = match a.dilate(d).and_then(|s| s.translate(t)) {
        Ok(image) => image,
        Err(err) => {
            let instance = format!("A={{{a}}}, d={d}, t={t}, r={r}");
            unexpected(&mut out, &instance, &format!("approxcover cover --set \"{a}\" --r {r}"), &err);
            return out;
        }
    };
    let instance = format!("A={{{a}}}, d={d}, t={t}, r={r}");
    let rerun = format!("approxcover cover --set \"{image}\" --r {r}");
    let Some(cn_base) = solve(&a, r, budget, &mut out, &instance, &rerun) else {
        return out;
    };
    let Some(cn_image) = solve(&image, r, budget, &mut out, &instance, &rerun) else {
        return out;
    };
    if cn_base != cn_image {
        push_failure(
            &mut out,
            &instance,
            &rerun,
            "affine invariance",
            format!("covering number {cn_base}"),
            cn_image,
        );
    }
    out
}

fn eval_corollary13(elems: Vec<i64>, r: u64, cap: u64, budget: u64) -> Outcome {
    let mut out = Outcome::default();
    let a = IntSet::new(elems);
    let b = a.max().unwrap() as u64;
    let instance = format!("A={{{a}}}, r={r}");
    let rerun = format!("approxcover sweep --set \"{a}\" --r {r} --h 1..{cap}");
    let mut current = a.clone();
    let mut run_value = 0u64;
    let mut run_start = 0u64;
    let mut run_len = 0u64;
    for h in 1..=cap {
        if h > 1 {
            current = match current.sumset(&a) {
                Ok(next) => next,
                Err(err) => {
                    unexpected(&mut out, &instance, &rerun, &err);
                    return out;
                }
            };
        }
        let Some(cn) = solve(&current, r, budget, &mut out, &instance, &rerun) else {
            return out;
        };
        if run_len > 0 && cn == run_value {
            run_len += 1;
        } else {
            run_value = cn;
            run_start = h;
            run_len = 1;
        }
        // A run of 7 gives a tail window of length > 6; requiring the
        // scan to pass b+4 guards against latching onto an early
        // plateau below the interval threshold.
        if run_len >= 7 && h >= b + 4 {
            break;
        }
    }
    if run_len < 7 {
        push_failure(
            &mut out,
            &instance,
            &rerun,
            "stabilization within the scan cap",
            "a constant tail of length >= 7",
            format!("trailing run of {run_len} at the cap"),
        );
        return out;
    }
    let expected = asymptotic_covering_number(&a, r).expect("size >= 2");
    if run_value != expected {
        push_failure(&mut out, &instance, &rerun, "tail value equals the closed form", expected, run_value);
    }
    if endpoint_gap_condition(&a).expect("size >= 2") {
        let threshold = (b.saturating_sub(2)).max(1).max((r - 1).div_ceil(b));
        if run_start > threshold {
            push_failure(
                &mut out,
                &instance,
                &rerun,
                "stabilization by the interval threshold",
                format!("tail start <= {threshold}"),
                run_start,
            );
        }
    }
    out
}

fn eval_example1(k: i64, r: u64, budget: u64) -> Outcome {
    let mut out = Outcome::default();
    let a = IntSet::new(vec![0, k]);
    let instance = format!("A={{{a}}}, r={r}");
    let rerun = format!("approxcover cover --set \"{a}\" --r {r}");
    match hfold(&a, r) {
        Ok(folded) => {
            if folded.len() as u64 != r + 1 {
                push_failure(&mut out, &instance, &rerun, "pair iterate size", r + 1, folded.len());
            }
        }
        Err(err) => {
            unexpected(&mut out, &instance, &rerun, &err);
            return out;
        }
    }
    let Some(cn) = solve(&a, r, budget, &mut out, &instance, &rerun) else {
        return out;
    };
    let expected = (r + 1).div_ceil(2);
    if cn != expected {
        push_failure(&mut out, &instance, &rerun, "pair covering number", expected, cn);
    }
    out
}

fn eval_example2(m: usize, r: u64, budget: u64) -> Outcome {
    let mut out = Outcome::default();
    let mut elems = vec![1i64];
    for _ in 1..m {
        elems.push(r as i64 * elems.last().unwrap() + 1);
    }
    let a = IntSet::new(elems);
    let instance = format!("A={{{a}}}, r={r}");
    let rerun = format!("approxcover cover --set \"{a}\" --r {r}");
    let expected_size = binomial(m as u64 + r - 1, r);
    match hfold(&a, r) {
        Ok(folded) => {
            if folded.len() as u64 != expected_size {
                push_failure(&mut out, &instance, &rerun, "spread iterate size", expected_size, folded.len());
            }
        }
        Err(err) => {
            unexpected(&mut out, &instance, &rerun, &err);
            return out;
        }
    }
    let Some(cn) = solve(&a, r, budget, &mut out, &instance, &rerun) else {
        return out;
    };
    let bound = expected_size.div_ceil(m as u64);
    if cn < bound {
        push_failure(&mut out, &instance, &rerun, "spread cover bound", format!(">= {bound}"), cn);
    }
    out
}
