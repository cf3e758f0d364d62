//! Command line front end: exact covers, asymptotic decisions, fold
//! sweeps, and the brute-force verification suites.

mod report;

use std::time::Instant;

use anyhow::{anyhow, bail, Result};
use approxcover::{
    asymptotic_covering_number, configure_threads, covering_number_with, detect_ap, hfold,
    hfold_upto, is_asymptotic_ap, is_asymptotic_ap_with, lower_bound, map_ordered, run_suite,
    BoundsOverride, Error as LibError, IntSet, Parallelism, Suite, VerificationSummary,
    VerifyConfig, DEFAULT_NODE_BUDGET,
};
use clap::{Args, Parser, Subcommand};
use serde_json::json;

use report::{emit, set_cell, set_json, Emission, Format, RunReport, Status, Timings, SCHEMA_VERSION};

#[derive(Parser)]
#[command(
    name = "approxcover",
    version,
    about = "Exact and asymptotic covering numbers for finite integer sets"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct Common {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value = "text", env = "APPROXCOVER_FORMAT")]
    format: Format,
    /// Worker threads for scans and suites (0 keeps the default pool).
    #[arg(long, global = true, default_value_t = 0, env = "APPROXCOVER_JOBS")]
    jobs: usize,
    /// Node budget for the exact cover search.
    #[arg(long, global = true, default_value_t = DEFAULT_NODE_BUDGET, env = "APPROXCOVER_BUDGET")]
    budget: u64,
    /// Seed for suites that sample random instances.
    #[arg(long, global = true, default_value_t = 0, env = "APPROXCOVER_SEED")]
    seed: u64,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the h-fold iterated sumset hA.
    Sumset {
        /// Comma-separated integers, e.g. "0, 1, 3".
        #[arg(long, value_parser = parse_set)]
        set: IntSet,
        #[arg(long)]
        h: u64,
    },
    /// Exact covering number: the fewest translates of A covering rA.
    Cover {
        #[arg(long, value_parser = parse_set)]
        set: IntSet,
        #[arg(long)]
        r: u64,
    },
    /// Closed-form limit of covering numbers over high iterates, and
    /// whether the iterates become arithmetic progressions.
    Asymptotic {
        #[arg(long, value_parser = parse_set)]
        set: IntSet,
        #[arg(long)]
        r: u64,
        /// Fold window "a..b" (inclusive) to scan for the empirical
        /// progression threshold.
        #[arg(long, value_parser = parse_range)]
        window: Option<(u64, u64)>,
    },
    /// Covering numbers of every iterate hA across a fold window.
    Sweep {
        #[arg(long, value_parser = parse_set)]
        set: IntSet,
        #[arg(long)]
        r: u64,
        /// Fold window "a..b" (inclusive).
        #[arg(long, value_parser = parse_range, default_value = "1..16")]
        window: (u64, u64),
    },
    /// Run a brute-force verification suite over enumerated families.
    Verify {
        /// One of: lemma-2.1, prop-2.2, prop-2.3, theorem-2.4,
        /// theorem-3.1, lemma-3.2, theorem-4.1, lemma-4.2,
        /// corollary-1.3, example-1, example-2, or "all".
        #[arg(long)]
        suite: String,
        /// Largest element allowed in enumerated sets.
        #[arg(long)]
        max_elem: Option<i64>,
        /// Largest set size enumerated.
        #[arg(long)]
        max_size: Option<usize>,
        /// Override the suite's r range, "a..b" (inclusive).
        #[arg(long, value_parser = parse_range)]
        r: Option<(u64, u64)>,
        /// Override the suite's fold range, "a..b" (inclusive).
        #[arg(long, value_parser = parse_range)]
        h: Option<(u64, u64)>,
        /// Number of sampled instances, for suites that sample.
        #[arg(long)]
        cases: Option<usize>,
        /// Skip this many instances from the front of the enumeration.
        #[arg(long, default_value_t = 0)]
        skip: usize,
        /// Check at most this many instances after skipping.
        #[arg(long)]
        limit: Option<usize>,
    },
}

fn parse_set(s: &str) -> Result<IntSet, String> {
    s.parse::<IntSet>().map_err(|e| e.to_string())
}

fn parse_range(s: &str) -> Result<(u64, u64), String> {
    let (a, b) = s
        .split_once("..")
        .ok_or_else(|| format!("expected an inclusive range like 1..16, got {s:?}"))?;
    let lo: u64 = a.trim().parse().map_err(|_| format!("bad range start {a:?}"))?;
    let hi: u64 = b.trim().parse().map_err(|_| format!("bad range end {b:?}"))?;
    if lo == 0 || hi < lo {
        return Err(format!("range must satisfy 1 <= start <= end, got {lo}..{hi}"));
    }
    Ok((lo, hi))
}

fn main() {
    let cli = Cli::parse();
    if cli.common.jobs > 0 {
        configure_threads(cli.common.jobs);
    }
    let code = match run(cli) {
        Ok(code) => code,
        Err(err) if report::is_broken_pipe(&err) => 0,
        Err(err) => {
            eprintln!("error: {err:#}");
            match err.downcast_ref::<LibError>() {
                Some(LibError::BudgetExceeded { .. }) => 3,
                _ => 2,
            }
        }
    };
    std::process::exit(code);
}

fn run(cli: Cli) -> Result<i32> {
    let common = &cli.common;
    match cli.command {
        Command::Sumset { set, h } => {
            let start = Instant::now();
            let folded = hfold(&set, h)?;
            let is_ap = detect_ap(&folded)?.is_some();
            let emission = Emission {
                report: RunReport {
                    schema: SCHEMA_VERSION,
                    command: "sumset",
                    inputs: json!({"set": set.to_vec(), "h": h}),
                    results: json!({
                        "size": folded.len(),
                        "min": folded.min(),
                        "max": folded.max(),
                        "is_interval": folded.is_interval(),
                        "is_ap": is_ap,
                        "elements": set_json(&folded),
                    }),
                    timings_ms: Timings { total: start.elapsed().as_millis() as u64 },
                    status: Status::Ok,
                },
                headers: vec!["h", "size", "min", "max", "is_interval", "is_ap", "elements"],
                rows: vec![vec![
                    h.to_string(),
                    folded.len().to_string(),
                    folded.min().unwrap().to_string(),
                    folded.max().unwrap().to_string(),
                    folded.is_interval().to_string(),
                    is_ap.to_string(),
                    set_cell(&folded),
                ]],
                text: format!(
                    "{h}-fold sumset: {} elements in [{}, {}]\nprogression: {}\nelements: {}",
                    folded.len(),
                    folded.min().unwrap(),
                    folded.max().unwrap(),
                    if is_ap { "yes" } else { "no" },
                    set_cell(&folded),
                ),
            };
            emit(&emission, common.format)?;
            Ok(0)
        }
        Command::Cover { set, r } => {
            let start = Instant::now();
            let result = covering_number_with(&set, r, common.budget)?;
            let bound = lower_bound(&set, r).ok();
            let emission = Emission {
                report: RunReport {
                    schema: SCHEMA_VERSION,
                    command: "cover",
                    inputs: json!({"set": set.to_vec(), "r": r, "budget": common.budget}),
                    results: json!({
                        "covering_number": result.covering_number,
                        "witness": set_json(&result.witness),
                        "optimal": result.optimal,
                        "universe_size": result.universe_size,
                        "nodes_explored": result.nodes_explored,
                        "lower_bound": bound,
                    }),
                    timings_ms: Timings { total: start.elapsed().as_millis() as u64 },
                    status: Status::Ok,
                },
                headers: vec![
                    "r",
                    "covering_number",
                    "witness",
                    "optimal",
                    "universe_size",
                    "nodes_explored",
                ],
                rows: vec![vec![
                    r.to_string(),
                    result.covering_number.to_string(),
                    set_cell(&result.witness),
                    result.optimal.to_string(),
                    result.universe_size.to_string(),
                    result.nodes_explored.to_string(),
                ]],
                text: format!(
                    "covering number: {} (exact)\nwitness offsets: {}\nuniverse: {} elements, search nodes: {}",
                    result.covering_number,
                    set_cell(&result.witness),
                    result.universe_size,
                    result.nodes_explored,
                ),
            };
            emit(&emission, common.format)?;
            Ok(0)
        }
        Command::Asymptotic { set, r, window } => {
            let start = Instant::now();
            let value = asymptotic_covering_number(&set, r)?;
            let ap = match window {
                Some(w) => is_asymptotic_ap_with(&set, w)?,
                None => is_asymptotic_ap(&set)?,
            };
            let emission = Emission {
                report: RunReport {
                    schema: SCHEMA_VERSION,
                    command: "asymptotic",
                    inputs: json!({
                        "set": set.to_vec(),
                        "r": r,
                        "window": {"lo": ap.window.0, "hi": ap.window.1},
                    }),
                    results: json!({
                        "asymptotic_covering_number": value,
                        "form": ap.form,
                        "condition_holds": ap.condition_holds,
                        "theoretical_threshold": ap.theoretical_threshold,
                        "empirical_threshold": ap.empirical_threshold,
                    }),
                    timings_ms: Timings { total: start.elapsed().as_millis() as u64 },
                    status: Status::Ok,
                },
                headers: vec![
                    "r",
                    "asymptotic_covering_number",
                    "form",
                    "condition_holds",
                    "theoretical_threshold",
                    "empirical_threshold",
                ],
                rows: vec![vec![
                    r.to_string(),
                    value.to_string(),
                    format!("{:?}", ap.form),
                    ap.condition_holds.to_string(),
                    ap.theoretical_threshold.map_or(String::new(), |v| v.to_string()),
                    ap.empirical_threshold.map_or(String::new(), |v| v.to_string()),
                ]],
                text: format!(
                    "asymptotic covering number: {value}\nendpoint gap condition: {}\niterates become progressions: {}{}",
                    if ap.condition_holds { "holds" } else { "fails" },
                    if ap.condition_holds { "yes" } else { "no" },
                    match (ap.theoretical_threshold, ap.empirical_threshold) {
                        (Some(t), Some(e)) => format!(
                            "\nguaranteed from fold {t}, observed from fold {e} in window {}..{}",
                            ap.window.0, ap.window.1
                        ),
                        _ => String::new(),
                    },
                ),
            };
            emit(&emission, common.format)?;
            Ok(0)
        }
        Command::Sweep { set, r, window } => {
            let start = Instant::now();
            let (lo, hi) = window;
            let iterates = hfold_upto(&set, hi)?;
            let budget = common.budget;
            let items: Vec<(u64, IntSet)> = (lo..=hi)
                .map(|h| (h, iterates[(h - 1) as usize].clone()))
                .collect();
            let solved = map_ordered(Parallelism::default(), items, |(h, iterate)| {
                let is_ap = detect_ap(&iterate).map(|s| s.is_some());
                let cover = covering_number_with(&iterate, r, budget);
                (h, iterate.len(), is_ap, cover)
            });
            let mut rows = Vec::new();
            let mut json_rows = Vec::new();
            let mut exceeded = 0u64;
            for (h, size, is_ap, cover) in solved {
                let is_ap = is_ap?;
                match cover {
                    Ok(res) => {
                        json_rows.push(json!({
                            "h": h,
                            "size_hA": size,
                            "is_ap": is_ap,
                            "covering_number": res.covering_number,
                            "witness": set_json(&res.witness),
                            "error": Option::<String>::None,
                        }));
                        rows.push(vec![
                            h.to_string(),
                            size.to_string(),
                            is_ap.to_string(),
                            res.covering_number.to_string(),
                            set_cell(&res.witness),
                            String::new(),
                        ]);
                    }
                    Err(LibError::BudgetExceeded { explored }) => {
                        exceeded += 1;
                        let msg = format!("budget exceeded after {explored} nodes");
                        json_rows.push(json!({
                            "h": h,
                            "size_hA": size,
                            "is_ap": is_ap,
                            "covering_number": Option::<u64>::None,
                            "witness": Option::<Vec<i64>>::None,
                            "error": msg,
                        }));
                        rows.push(vec![
                            h.to_string(),
                            size.to_string(),
                            is_ap.to_string(),
                            String::new(),
                            String::new(),
                            msg,
                        ]);
                    }
                    Err(other) => return Err(other.into()),
                }
            }
            let status = if exceeded > 0 {
                Status::BudgetExceeded { instances: exceeded }
            } else {
                Status::Ok
            };
            let text = {
                let mut lines =
                    vec![format!("{:>6} {:>8} {:>6} {:>16} witness", "h", "|hA|", "is_ap", "covering_number")];
                for row in &rows {
                    lines.push(format!(
                        "{:>6} {:>8} {:>6} {:>16} {}",
                        row[0],
                        row[1],
                        row[2],
                        if row[3].is_empty() { &row[5] } else { &row[3] },
                        row[4],
                    ));
                }
                lines.join("\n")
            };
            let emission = Emission {
                report: RunReport {
                    schema: SCHEMA_VERSION,
                    command: "sweep",
                    inputs: json!({
                        "set": set.to_vec(),
                        "r": r,
                        "window": {"lo": lo, "hi": hi},
                        "budget": budget,
                    }),
                    results: json!({"rows": json_rows}),
                    timings_ms: Timings { total: start.elapsed().as_millis() as u64 },
                    status: status.clone(),
                },
                headers: vec!["h", "size_hA", "is_ap", "covering_number", "witness", "error"],
                rows,
                text,
            };
            emit(&emission, common.format)?;
            Ok(if exceeded > 0 { 3 } else { 0 })
        }
        Command::Verify { suite, max_elem, max_size, r, h, cases, skip, limit } => {
            let start = Instant::now();
            let suites: Vec<Suite> = if suite == "all" {
                Suite::ALL.to_vec()
            } else {
                vec![Suite::parse(&suite).ok_or_else(|| {
                    anyhow!(
                        "unknown suite {suite:?}; expected one of {} or \"all\"",
                        Suite::ALL.map(|s| s.name()).join(", ")
                    )
                })?]
            };
            if skip > 0 && limit.is_none() && suites.len() > 1 {
                bail!("--skip without --limit only makes sense for a single suite");
            }
            let config = VerifyConfig {
                node_budget: common.budget,
                seed: common.seed,
                mode: Parallelism::default(),
                skip,
                limit,
                bounds: BoundsOverride { max_elem, max_size, r, h, cases },
            };
            let summaries: Vec<VerificationSummary> =
                suites.iter().map(|s| run_suite(*s, &config)).collect();
            let failing: u64 = summaries.iter().map(|s| s.failures.len() as u64).sum();
            let exceeded: u64 = summaries.iter().map(|s| s.budget_exceeded.len() as u64).sum();
            let status = if failing > 0 {
                Status::VerificationFailure { failing }
            } else if exceeded > 0 {
                Status::BudgetExceeded { instances: exceeded }
            } else {
                Status::Ok
            };
            let mut rows = Vec::new();
            let mut lines = Vec::new();
            for s in &summaries {
                rows.push(vec![
                    s.suite.clone(),
                    s.instances_checked.to_string(),
                    s.failures.len().to_string(),
                    s.budget_exceeded.len().to_string(),
                    s.largest_universe.to_string(),
                    s.elapsed_ms.to_string(),
                    s.passed().to_string(),
                ]);
                lines.push(format!(
                    "{}: {} instances, {} failures, {} over budget, {} ms -> {}",
                    s.suite,
                    s.instances_checked,
                    s.failures.len(),
                    s.budget_exceeded.len(),
                    s.elapsed_ms,
                    if s.passed() && s.budget_exceeded.is_empty() { "PASS" } else { "FAIL" },
                ));
                for f in s.failures.iter().take(5) {
                    lines.push(format!(
                        "  {} [{}]: expected {}, got {} (rerun: {})",
                        f.instance, f.check, f.expected, f.got, f.rerun
                    ));
                }
                if s.failures.len() > 5 {
                    lines.push(format!("  ... and {} more failures", s.failures.len() - 5));
                }
            }
            let emission = Emission {
                report: RunReport {
                    schema: SCHEMA_VERSION,
                    command: "verify",
                    inputs: json!({
                        "suite": suite,
                        "seed": common.seed,
                        "budget": common.budget,
                        "skip": skip,
                        "limit": limit,
                        "overrides": {
                            "max_elem": max_elem,
                            "max_size": max_size,
                            "r": r.map(|(a, b)| json!({"lo": a, "hi": b})),
                            "h": h.map(|(a, b)| json!({"lo": a, "hi": b})),
                            "cases": cases,
                        },
                    }),
                    results: json!({"suites": summaries}),
                    timings_ms: Timings { total: start.elapsed().as_millis() as u64 },
                    status: status.clone(),
                },
                headers: vec![
                    "suite",
                    "instances_checked",
                    "failures",
                    "budget_exceeded",
                    "largest_universe",
                    "elapsed_ms",
                    "passed",
                ],
                rows,
                text: lines.join("\n"),
            };
            emit(&emission, common.format)?;
            Ok(if failing > 0 {
                1
            } else if exceeded > 0 {
                3
            } else {
                0
            })
        }
    }
}
