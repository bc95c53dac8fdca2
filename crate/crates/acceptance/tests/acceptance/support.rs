use std::net::SocketAddr;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use anyhow::{Context, Result};
use retriever_core::{build_corpus, parse_manifest, CorpusStore, RankConfig, ResourcePaths, Resources, SearchEngine};
use tokio::io::{AsyncReadExt, AsyncWriteExt};
use tokio::net::TcpStream;

pub const IMPORT_QUERY: &str = "ขอข้อมูลเกี่ยวกับการนำเข้าสินค้าในเมียนมาร์หน่อยค่ะ";

pub fn fixtures(set: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(set)
}

pub fn resource_paths(set: &str) -> ResourcePaths {
    let dir = fixtures(set);
    ResourcePaths {
        embeddings: dir.join("embeddings.txt"),
        lexicon: dir.join("lexicon.tsv"),
        stopwords: dir.join("stopwords.txt"),
        gazetteer: dir.join("gazetteer.json"),
    }
}

/// Loads a fixture set's resources and indexes its `manifest.json`.
pub fn fixture_engine(set: &str) -> Result<SearchEngine> {
    let resources = Resources::load(&resource_paths(set))?;
    let manifest = parse_manifest(&fixtures(set).join("manifest.json"), &resources.gazetteer)?;
    let store: CorpusStore = build_corpus(&manifest, &resources.pipeline, &resources.embeddings, 1)?;
    Ok(SearchEngine::new(store, Arc::new(resources), RankConfig::default())?)
}

/// One HTTP/1.1 request on a fresh connection; returns status and body.
pub async fn http(addr: SocketAddr, method: &str, path: &str, body: Option<&str>) -> Result<(u16, String)> {
    let mut stream = TcpStream::connect(addr).await?;
    let body = body.unwrap_or("");
    let request = format!(
        "{method} {path} HTTP/1.1\r\nhost: {addr}\r\ncontent-type: application/json\r\ncontent-length: {}\r\nconnection: close\r\n\r\n{body}",
        body.len()
    );
    stream.write_all(request.as_bytes()).await?;
    let mut raw = Vec::new();
    stream.read_to_end(&mut raw).await?;
    let raw = String::from_utf8(raw)?;
    let (head, body) = raw.split_once("\r\n\r\n").context("malformed response")?;
    let status = head
        .split(' ')
        .nth(1)
        .and_then(|s| s.parse().ok())
        .context("no status line")?;
    if head.to_ascii_lowercase().contains("transfer-encoding: chunked") {
        anyhow::bail!("unexpected chunked response");
    }
    Ok((status, body.to_owned()))
}

/// Drops the trailing `"latency_ms"` member, the only field allowed to vary
/// between identical queries.
pub fn strip_latency(body: &str) -> Result<&str> {
    body.rfind(",\"latency_ms\":")
        .map(|at| &body[..at])
        .context("response has no latency_ms field")
}

pub fn write_manifest(dir: &Path, name: &str, sources: &[(&str, &str)]) -> Result<PathBuf> {
    let entries: Vec<serde_json::Value> = sources
        .iter()
        .map(|(title, country)| {
            serde_json::json!({
                "path": fixtures("thai").join("corpus").join(format!("{title}.txt")),
                "country": country,
                "title": title,
            })
        })
        .collect();
    let path = dir.join(name);
    std::fs::write(&path, serde_json::to_string(&entries)?)?;
    Ok(path)
}
