//! `retriever`: build an index, query it, evaluate it, or serve it over HTTP.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use retriever_core::{
    build_corpus, compare_modes, evaluate, load_pairs, parse_manifest, Bm25Params, CorpusStore, EvalReport, RankConfig,
    RankError, RankMode, ResourcePaths, Resources, SearchEngine,
};
use retriever_service::{build_response, open_index, ServiceConfig};

#[derive(Debug, Parser)]
#[command(
    name = "retriever",
    version,
    about = "Hybrid BM25 + heading-embedding document retrieval"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Segment, process and index the sources listed in a manifest.
    Ingest(IngestArgs),
    /// Run the HTTP service.
    Serve(ServeArgs),
    /// Rank the corpus for one query.
    Query(QueryArgs),
    /// Accuracy and latency per ranking mode over a TSV of query/doc pairs.
    Eval(EvalArgs),
}

#[derive(Debug, Args)]
struct IngestArgs {
    #[arg(long)]
    manifest: PathBuf,
    #[arg(long)]
    embeddings: PathBuf,
    #[arg(long)]
    lexicon: PathBuf,
    #[arg(long)]
    stopwords: PathBuf,
    #[arg(long)]
    gazetteer: PathBuf,
    /// Index file to write. An existing index there has its version bumped.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct ServeArgs {
    /// TOML config file; defaults to $RETRIEVER_CONFIG when set.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    index: Option<PathBuf>,
    #[arg(long)]
    port: Option<u16>,
}

#[derive(Debug, Args)]
struct RankArgs {
    #[arg(long, default_value_t = Bm25Params::default().k1)]
    k1: f64,
    #[arg(long, default_value_t = Bm25Params::default().b)]
    b: f64,
    /// BM25 statistics over the whole corpus instead of the filtered candidates.
    #[arg(long)]
    global_stats: bool,
}

impl RankArgs {
    fn config(&self) -> Result<RankConfig> {
        Ok(RankConfig {
            bm25: Bm25Params::new(self.k1, self.b)?,
            global_stats: self.global_stats,
        })
    }
}

#[derive(Debug, Args)]
struct QueryArgs {
    #[arg(long)]
    index: PathBuf,
    #[arg(long, default_value_t = RankMode::Hybrid)]
    mode: RankMode,
    #[arg(long, default_value_t = 3)]
    top_k: usize,
    /// Print the HTTP response body instead of a table.
    #[arg(long)]
    json: bool,
    #[command(flatten)]
    rank: RankArgs,
    text: String,
}

#[derive(Debug, Args)]
struct EvalArgs {
    #[arg(long)]
    index: PathBuf,
    #[arg(long)]
    pairs: PathBuf,
    /// Evaluate one mode only; all three by default.
    #[arg(long)]
    mode: Option<RankMode>,
    /// Print the report as JSON instead of a table.
    #[arg(long)]
    json: bool,
    #[command(flatten)]
    rank: RankArgs,
}

fn main() -> ExitCode {
    tracing_subscriber::fmt()
        .with_env_filter(tracing_subscriber::EnvFilter::try_from_default_env().unwrap_or_else(|_| "info".into()))
        .with_writer(std::io::stderr)
        .init();

    let cli = Cli::parse();
    let result = match cli.command {
        Command::Ingest(args) => ingest(args),
        Command::Serve(args) => serve(args),
        Command::Query(args) => query(args),
        Command::Eval(args) => eval(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn ingest(args: IngestArgs) -> Result<()> {
    let paths = ResourcePaths {
        embeddings: absolute(&args.embeddings)?,
        lexicon: absolute(&args.lexicon)?,
        stopwords: absolute(&args.stopwords)?,
        gazetteer: absolute(&args.gazetteer)?,
    };
    let resources = Resources::load(&paths)?;
    let manifest = parse_manifest(&args.manifest, &resources.gazetteer)
        .with_context(|| format!("manifest {}", args.manifest.display()))?;

    let version = if args.out.exists() {
        CorpusStore::load(&args.out)
            .with_context(|| format!("existing index {}", args.out.display()))?
            .version
            + 1
    } else {
        1
    };
    let started = Instant::now();
    let mut store = build_corpus(&manifest, &resources.pipeline, &resources.embeddings, version)?;
    store.resources = Some(paths);
    store.save(&args.out)?;
    println!(
        "indexed {} sections from {} sources into {} (version {}, dim {}, {:.2}s)",
        store.documents.len(),
        manifest.entries.len(),
        args.out.display(),
        store.version,
        store.embedding_dim,
        started.elapsed().as_secs_f64()
    );
    Ok(())
}

/// Resource paths are stored in the index, so they must not depend on the
/// directory the index is later opened from.
fn absolute(path: &Path) -> Result<PathBuf> {
    std::path::absolute(path).with_context(|| format!("cannot resolve {}", path.display()))
}

fn serve(args: ServeArgs) -> Result<()> {
    let mut config = ServiceConfig::discover(args.config.as_deref())?;
    if let Some(index) = args.index {
        config.index = Some(index);
    }
    if let Some(port) = args.port {
        config.port = port;
    }
    tokio::runtime::Runtime::new()?.block_on(retriever_service::serve(config))?;
    Ok(())
}

fn open(index: &Path, rank: &RankArgs) -> Result<SearchEngine> {
    open_index(index, None, rank.config()?).with_context(|| format!("cannot open index {}", index.display()))
}

fn query(args: QueryArgs) -> Result<()> {
    if args.top_k == 0 {
        bail!("--top-k must be at least 1");
    }
    let engine = open(&args.index, &args.rank)?;
    let started = Instant::now();
    let outcome = match engine.search(&args.text, args.top_k, args.mode) {
        Err(RankError::EmptyQuery) => bail!("the query has no keywords after stopword removal; rephrase it"),
        other => other?,
    };
    let response = build_response(&engine, outcome, args.mode, started.elapsed().as_secs_f64() * 1e3);

    if args.json {
        println!("{}", serde_json::to_string_pretty(&response)?);
        return Ok(());
    }
    if !response.detected_countries.is_empty() {
        println!("countries: {}", response.detected_countries.join(", "));
    }
    let rank = |r: Option<usize>| r.map_or_else(|| "-".to_owned(), |r| r.to_string());
    for r in &response.results {
        println!(
            "{:>2}. {:<14} {}  [heading {}, content {}, points {}]",
            r.final_rank,
            r.doc_id,
            r.heading,
            rank(r.heading_rank),
            rank(r.content_rank),
            r.borda_points.map_or_else(|| "-".to_owned(), |p| p.to_string()),
        );
        if !r.uri.is_empty() {
            println!("    {}", r.uri);
        }
    }
    Ok(())
}

fn eval(args: EvalArgs) -> Result<()> {
    let engine = open(&args.index, &args.rank)?;
    let pairs = load_pairs(&args.pairs, engine.store())?;
    let report = match args.mode {
        Some(mode) => EvalReport {
            rows: vec![evaluate(&pairs, mode, &engine)?],
        },
        None => compare_modes(&pairs, &engine)?,
    };
    if args.json {
        println!("{}", serde_json::to_string_pretty(&report)?);
    } else {
        print!("{}", report.render_table());
    }
    Ok(())
}
