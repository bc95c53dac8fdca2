//! Acceptance suite. Every criterion runs at its stated tolerance and prints
//! one `PASS`/`FAIL` line; the process exits non-zero if any criterion fails.

mod oracles;
mod pipeline;
mod service;
mod support;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::Instant;

type Check = fn() -> anyhow::Result<String>;

const CRITERIA: &[(&str, Check)] = &[
    ("borda oracle: all permutation pairs, n <= 5", oracles::borda_oracle),
    ("bm25 oracle: 200 corpora x 20 queries, 1e-9", oracles::bm25_oracle),
    ("pipeline: normalize is idempotent", pipeline::normalize_idempotent),
    ("pipeline: tokens partition the input", pipeline::tokenize_partition),
    ("pipeline: spelling keeps lexicon words", pipeline::spelling_identity),
    (
        "pipeline: keywords are a token subsequence",
        pipeline::keywords_subsequence,
    ),
    ("keyword tables: heading cases", fixtures::heading_keyword_cases),
    ("keyword tables: query cases", fixtures::query_keyword_cases),
    (
        "thai end-to-end fixture: import query",
        fixtures::import_query_end_to_end,
    ),
    (
        "hybrid superiority fixture: 6 / 7 / >= 8 of 10",
        fixtures::hybrid_superiority,
    ),
    (
        "latency: 1000 synthetic docs, ordering and p50",
        latency::latency_ordering_and_scale,
    ),
    (
        "service: 16 parallel identical queries",
        service::parallel_identical_queries,
    ),
    ("service: reindex atomicity under load", service::reindex_atomicity),
    ("service: error codes", service::error_codes),
];

fn main() -> ExitCode {
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = Vec::new();
    let mut ran = 0;
    for &(name, check) in CRITERIA {
        if !filter.is_empty() && !filter.iter().any(|f| name.contains(f.as_str())) {
            continue;
        }
        ran += 1;
        let started = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(check));
        let secs = started.elapsed().as_secs_f64();
        match outcome {
            Ok(Ok(detail)) => println!("PASS  {name}  [{secs:.2}s] {detail}"),
            Ok(Err(e)) => {
                println!("FAIL  {name}  [{secs:.2}s] {e:#}");
                failed.push(name);
            }
            Err(panic) => {
                let msg = panic
                    .downcast_ref::<String>()
                    .map(String::as_str)
                    .or_else(|| panic.downcast_ref::<&str>().copied())
                    .unwrap_or("panic");
                println!("FAIL  {name}  [{secs:.2}s] panicked: {msg}");
                failed.push(name);
            }
        }
    }
    println!("\nacceptance: {} passed, {} failed", ran - failed.len(), failed.len());
    if failed.is_empty() {
        ExitCode::SUCCESS
    } else {
        for name in &failed {
            println!("  failed: {name}");
        }
        ExitCode::FAILURE
    }
}
