use std::collections::BTreeMap;
use std::net::SocketAddr;
use std::path::Path;
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::Arc;
use std::time::Duration;

use anyhow::{bail, ensure, Context, Result};
use retriever_service::{serve_on, AppState, ErrorBody, ErrorCode, QueryResponse, ServiceConfig};
use serde_json::{json, Value};
use tokio::net::TcpListener;
use tokio::task::JoinHandle;

use crate::support::{fixture_engine, http, resource_paths, strip_latency, write_manifest, IMPORT_QUERY};

const CLIENTS: usize = 16;

fn runtime() -> Result<tokio::runtime::Runtime> {
    Ok(tokio::runtime::Builder::new_multi_thread()
        .worker_threads(4)
        .enable_all()
        .build()?)
}

fn fixture_config() -> ServiceConfig {
    let paths = resource_paths("thai");
    ServiceConfig {
        embeddings: Some(paths.embeddings),
        lexicon: Some(paths.lexicon),
        stopwords: Some(paths.stopwords),
        gazetteer: Some(paths.gazetteer),
        ..ServiceConfig::default()
    }
}

async fn start(state: AppState) -> Result<(SocketAddr, JoinHandle<()>)> {
    let listener = TcpListener::bind("127.0.0.1:0").await?;
    let addr = listener.local_addr()?;
    let server = tokio::spawn(async move {
        let _ = serve_on(listener, state).await;
    });
    Ok((addr, server))
}

pub fn parallel_identical_queries() -> Result<String> {
    runtime()?.block_on(async {
        let state = AppState::with_engine(fixture_config(), fixture_engine("thai")?)?;
        let (addr, server) = start(state).await?;
        let body = json!({ "text": IMPORT_QUERY, "top_k": 3, "mode": "hybrid" }).to_string();

        let clients: Vec<_> = (0..CLIENTS)
            .map(|_| {
                let body = body.clone();
                tokio::spawn(async move { http(addr, "POST", "/v1/query", Some(&body)).await })
            })
            .collect();
        let mut bodies = Vec::new();
        for c in clients {
            let (status, body) = c.await??;
            ensure!(status == 200, "status {status}: {body}");
            bodies.push(body);
        }
        server.abort();

        let first = strip_latency(&bodies[0])?;
        for (i, b) in bodies.iter().enumerate() {
            ensure!(
                strip_latency(b)? == first,
                "client {i} differs:\n{b}\nvs\n{}",
                bodies[0]
            );
        }
        let resp: QueryResponse = serde_json::from_str(&bodies[0])?;
        ensure!(resp.results.len() == 3, "{} results", resp.results.len());
        Ok(format!(
            "{CLIENTS} responses byte-identical without latency_ms ({} bytes)",
            first.len()
        ))
    })
}

/// Body of `/v1/query` with the fields that legitimately vary removed.
fn content_of(body: &str) -> Result<(u64, Value)> {
    let mut v: Value = serde_json::from_str(body)?;
    let obj = v.as_object_mut().context("not an object")?;
    obj.remove("latency_ms");
    let version = obj
        .remove("index_version")
        .and_then(|v| v.as_u64())
        .context("no index_version")?;
    Ok((version, v))
}

/// Toggles the live corpus between two manifests while clients query. Every
/// response must equal the answer of exactly the corpus its version names.
pub fn reindex_atomicity() -> Result<String> {
    const TOGGLES: u64 = 24;
    const QUERIERS: usize = 8;

    runtime()?.block_on(async {
        let dir = tempfile::tempdir()?;
        let full = write_manifest(
            dir.path(),
            "full.json",
            &[("myanmar", "MM"), ("vietnam", "VN"), ("cambodia", "KH"), ("laos", "LA")],
        )?;
        let partial = write_manifest(
            dir.path(),
            "partial.json",
            &[("vietnam", "VN"), ("cambodia", "KH"), ("laos", "LA")],
        )?;

        let state = AppState::new(fixture_config())?;
        let (addr, server) = start(state).await?;
        let query = json!({ "text": IMPORT_QUERY, "top_k": 50 }).to_string();

        // reference answers: odd versions come from `full`, even ones from `partial`
        let mut expected: BTreeMap<u64, Value> = BTreeMap::new();
        for (manifest, version) in [(&full, 1u64), (&partial, 2)] {
            reindex(addr, manifest).await?;
            let (status, body) = http(addr, "POST", "/v1/query", Some(&query)).await?;
            ensure!(status == 200, "{body}");
            let (v, content) = content_of(&body)?;
            ensure!(v == version, "version {v}, expected {version}");
            expected.insert(version % 2, content);
        }
        ensure!(expected[&0] != expected[&1], "the two corpora answer identically");

        let done = Arc::new(AtomicBool::new(false));
        let queriers: Vec<JoinHandle<Result<BTreeMap<u64, usize>>>> = (0..QUERIERS)
            .map(|_| {
                let (done, query, expected) = (Arc::clone(&done), query.clone(), expected.clone());
                tokio::spawn(async move {
                    let mut seen = BTreeMap::new();
                    while !done.load(Ordering::Acquire) {
                        let (status, body) = http(addr, "POST", "/v1/query", Some(&query)).await?;
                        ensure!(status == 200, "{body}");
                        let (version, content) = content_of(&body)?;
                        if content != expected[&(version % 2)] {
                            bail!("version {version} answered with content from another corpus: {body}");
                        }
                        *seen.entry(version).or_insert(0) += 1;
                    }
                    Ok(seen)
                })
            })
            .collect();

        for i in 0..TOGGLES {
            let manifest = if i % 2 == 0 { &full } else { &partial };
            reindex(addr, manifest).await?;
        }
        done.store(true, Ordering::Release);

        let mut seen: BTreeMap<u64, usize> = BTreeMap::new();
        for q in queriers {
            for (v, n) in q.await?? {
                *seen.entry(v).or_insert(0) += n;
            }
        }
        server.abort();
        let total: usize = seen.values().sum();
        ensure!(
            seen.len() >= 2,
            "queries only ever saw versions {:?}",
            seen.keys().collect::<Vec<_>>()
        );
        Ok(format!(
            "{TOGGLES} swaps, {total} responses across {} versions, none mixed",
            seen.len()
        ))
    })
}

async fn reindex(addr: SocketAddr, manifest: &Path) -> Result<Value> {
    let (status, body) = http(
        addr,
        "POST",
        "/v1/reindex",
        Some(&json!({ "manifest": manifest }).to_string()),
    )
    .await?;
    ensure!(status == 200, "reindex {}: {status} {body}", manifest.display());
    Ok(serde_json::from_str(&body)?)
}

fn expect_error(got: (u16, String), status: u16, code: &str) -> Result<()> {
    let body: ErrorBody =
        serde_json::from_str(&got.1).with_context(|| format!("not an error body: {} {}", got.0, got.1))?;
    ensure!(
        got.0 == status && body.error == code && !body.message.is_empty(),
        "expected {status} {code}, got {} {}",
        got.0,
        got.1
    );
    Ok(())
}

pub fn error_codes() -> Result<String> {
    runtime()?.block_on(async {
        let dir = tempfile::tempdir()?;
        let mut checked = Vec::new();

        // no index yet
        let (addr, server) = start(AppState::new(fixture_config())?).await?;
        let q = |v: Value| v.to_string();
        expect_error(
            http(addr, "POST", "/v1/query", Some(&q(json!({ "text": IMPORT_QUERY })))).await?,
            503,
            "no_index",
        )?;
        checked.push("no_index");
        server.abort();

        let state = AppState::with_engine(fixture_config(), fixture_engine("thai")?)?;
        let (addr, server) = start(state).await?;
        let post = |body: String| async move { http(addr, "POST", "/v1/query", Some(&body)).await };

        expect_error(post(q(json!({ "text": "  " }))).await?, 400, "empty_query")?;
        expect_error(post(q(json!({ "text": "ขอหน่อยค่ะ?" }))).await?, 400, "empty_query")?;
        checked.push("empty_query");
        expect_error(
            post(q(json!({ "text": IMPORT_QUERY, "top_k": 0 }))).await?,
            400,
            "bad_top_k",
        )?;
        expect_error(
            post(q(json!({ "text": IMPORT_QUERY, "top_k": 51 }))).await?,
            400,
            "bad_top_k",
        )?;
        checked.push("bad_top_k");
        expect_error(post("{\"text\":".to_owned()).await?, 400, "bad_request")?;
        expect_error(
            post(q(json!({ "text": IMPORT_QUERY, "mode": "dense" }))).await?,
            400,
            "bad_request",
        )?;
        checked.push("bad_request");

        let missing = dir.path().join("missing.json");
        let reindex_body = |p: &Path| json!({ "manifest": p }).to_string();
        expect_error(
            http(addr, "POST", "/v1/reindex", Some(&reindex_body(&missing))).await?,
            422,
            "ingest_failed",
        )?;
        checked.push("ingest_failed");

        #[cfg(unix)]
        {
            reindex_conflict(addr, dir.path()).await?;
            checked.push("reindex_in_progress");
        }

        let (status, body) = http(addr, "GET", "/v1/health", None).await?;
        ensure!(status == 200, "health {status} {body}");
        server.abort();

        // No request reaches an internal failure on a healthy index; the
        // mapping itself is still part of the contract.
        ensure!(ErrorCode::Internal.status().as_u16() == 500 && ErrorCode::Internal.as_str() == "internal");
        checked.push("internal (mapping only)");
        Ok(checked.join(", "))
    })
}

/// Holds one reindex open on a FIFO manifest and checks that a second is
/// refused with 409 until the first completes.
#[cfg(unix)]
async fn reindex_conflict(addr: SocketAddr, dir: &Path) -> Result<()> {
    let fifo = dir.join("slow.fifo");
    ensure!(
        std::process::Command::new("mkfifo").arg(&fifo).status()?.success(),
        "mkfifo failed"
    );
    let laos = write_manifest(dir, "laos.json", &[("laos", "LA")])?;

    let blocked = tokio::spawn({
        let body = json!({ "manifest": fifo }).to_string();
        async move { http(addr, "POST", "/v1/reindex", Some(&body)).await }
    });
    let probe = json!({ "manifest": dir.join("absent.json") }).to_string();
    let mut attempts = 0;
    loop {
        let got = http(addr, "POST", "/v1/reindex", Some(&probe)).await?;
        if got.0 == 409 {
            expect_error(got, 409, "reindex_in_progress")?;
            break;
        }
        // the first request had not claimed the flag yet
        expect_error(got, 422, "ingest_failed")?;
        attempts += 1;
        ensure!(attempts < 400, "never observed a running reindex");
        tokio::time::sleep(Duration::from_millis(5)).await;
    }

    let manifest = std::fs::read(&laos)?;
    tokio::task::spawn_blocking(move || std::fs::write(&fifo, manifest)).await??;
    let (status, body) = blocked.await??;
    ensure!(status == 200, "blocked reindex finished with {status} {body}");
    Ok(())
}
