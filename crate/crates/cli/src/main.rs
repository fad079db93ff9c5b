use std::fs;
use std::net::SocketAddr;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use revdict::eval::{depth_sweep, evaluate, load_cases, EvalOptions};
use revdict::graph::GraphStats;
use revdict::similarity::{query, QueryOptions};
use revdict::textproc::{LemmaRules, StopwordList, TextPipeline};
use revdict::{store, BuildOptions, IndexBundle, MatrixKind, RawDictionary};
use revdict_service::Service;

#[derive(Parser)]
#[command(name = "revdict", version, about = "Graph-based reverse dictionary")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Ingest dictionaries and write an index file.
    Build(BuildArgs),
    /// Rank words for a phrase.
    Query(QueryArgs),
    /// Print connectivity statistics and write histograms.
    Stats(StatsArgs),
    /// Score a test set of (target, phrase) pairs.
    Eval(EvalArgs),
    /// Start the HTTP query service.
    Serve(ServeArgs),
}

#[derive(Args)]
struct BuildArgs {
    /// Forward dictionary (`headword<TAB>definition`). Repeat to pool several.
    #[arg(long = "dict", required = true)]
    dicts: Vec<PathBuf>,
    /// Functional-word list; the bundled English list when omitted.
    #[arg(long)]
    stopwords: Option<PathBuf>,
    /// Suffix rule table replacing the bundled one.
    #[arg(long)]
    rules: Option<PathBuf>,
    /// Exception table replacing the bundled one.
    #[arg(long)]
    exceptions: Option<PathBuf>,
    #[arg(long)]
    out: PathBuf,
    /// Also build the mixed back-linked matrix.
    #[arg(long)]
    build_mblm: bool,
    /// Also build the forward-linked matrix.
    #[arg(long)]
    build_flm: bool,
}

#[derive(Args)]
struct QueryArgs {
    #[arg(long)]
    index: PathBuf,
    /// Phrase to look up; several arguments are joined with spaces.
    #[arg(required = true)]
    phrase: Vec<String>,
    /// Search depth; defaults to the matrix's maximum non-redundant depth.
    #[arg(long)]
    depth: Option<u32>,
    #[arg(long, default_value_t = 20)]
    limit: usize,
    /// List the phrase's own words first instead of dropping them.
    #[arg(long)]
    include_inputs: bool,
    /// blm, mblm or flm.
    #[arg(long)]
    matrix: Option<MatrixKind>,
}

#[derive(Args)]
struct StatsArgs {
    #[arg(long)]
    index: PathBuf,
    /// Only this matrix; all built matrices by default.
    #[arg(long)]
    matrix: Option<MatrixKind>,
    /// Directory for `<kind>.stats.txt`, `<kind>.full-depth.tsv` and
    /// `<kind>.degree.tsv`.
    #[arg(long)]
    out_dir: Option<PathBuf>,
}

#[derive(Args)]
struct EvalArgs {
    #[arg(long)]
    index: PathBuf,
    /// Test set, `target<TAB>phrase` per line.
    #[arg(long)]
    cases: PathBuf,
    #[arg(long, conflicts_with = "depths")]
    depth: Option<u32>,
    /// Comma-separated ascending depths for a sweep, e.g. `1,2,3,10`.
    #[arg(long, value_delimiter = ',')]
    depths: Vec<u32>,
    /// Drop cases whose target is outside the lexicon.
    #[arg(long)]
    corr: bool,
    #[arg(long)]
    matrix: Option<MatrixKind>,
    /// Output prefix; writes `<prefix>.cases.tsv` and `<prefix>.summary.txt`
    /// (or `<prefix>.sweep.tsv`).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ServeArgs {
    #[arg(long)]
    index: PathBuf,
    #[arg(long, default_value = "127.0.0.1:8080")]
    addr: SocketAddr,
    /// Directory with the built web UI, served for non-API paths.
    #[arg(long)]
    static_dir: Option<PathBuf>,
}

fn require_file(path: &Path) -> Result<()> {
    if !path.is_file() {
        bail!("no such file: {}", path.display());
    }
    Ok(())
}

fn load_index(path: &Path) -> Result<IndexBundle> {
    require_file(path)?;
    store::load(path).with_context(|| format!("loading index {}", path.display()))
}

fn build(args: BuildArgs) -> Result<()> {
    for p in args
        .dicts
        .iter()
        .chain(&args.stopwords)
        .chain(&args.rules)
        .chain(&args.exceptions)
    {
        require_file(p)?;
    }
    let stopwords = match &args.stopwords {
        Some(p) => StopwordList::load(p).with_context(|| format!("stopwords {}", p.display()))?,
        None => StopwordList::english(),
    };
    let default_rules = LemmaRules::english();
    let mut rules = match &args.rules {
        Some(p) => LemmaRules::load_rules(p).with_context(|| format!("rules {}", p.display()))?,
        None => LemmaRules::new(default_rules.suffix_rules().to_vec(), Default::default()),
    };
    match &args.exceptions {
        Some(p) => rules
            .load_exceptions(p)
            .with_context(|| format!("exceptions {}", p.display()))?,
        None => rules = rules.with_exceptions(default_rules.exceptions().clone()),
    }
    let dicts = args
        .dicts
        .iter()
        .map(|p| RawDictionary::from_path(p))
        .collect::<Result<Vec<_>, _>>()?;
    let options = BuildOptions {
        build_mblm: args.build_mblm,
        build_flm: args.build_flm,
    };
    let bundle = IndexBundle::build(&dicts, TextPipeline::new(stopwords, rules), &options)?;
    store::save(&bundle, &args.out)?;

    println!("wrote {}", args.out.display());
    println!("words\t{}", bundle.lexicon.len());
    for s in &bundle.stats {
        println!(
            "{}\tnonzeros={}\tsparsity={:.4}\tp={}\tincomplete_sources={}",
            s.kind,
            s.nnz,
            s.sparsity,
            s.max_nonredundant_depth,
            s.incomplete_sources()
        );
    }
    if let (Some(p), Some(k)) = (bundle.manifest.mixing_depth, bundle.manifest.mixed_sources) {
        println!("mixed forward links into {k} columns (detected at depth {p})");
    }
    Ok(())
}

fn run_query(args: QueryArgs) -> Result<()> {
    let index = load_index(&args.index)?;
    let phrase = args.phrase.join(" ");
    let options = QueryOptions {
        depth: args.depth,
        limit: args.limit,
        include_inputs: args.include_inputs,
        matrix: args.matrix,
    };
    let out = query(&phrase, &index, &options)?;
    let lex = &index.lexicon;
    let inputs: Vec<String> = out
        .plan
        .input_words
        .iter()
        .map(|w| format!("{} (nu={})", lex.word(w.id), w.nu))
        .collect();
    println!("# inputs: {}", inputs.join(", "));
    if !out.plan.unknown_tokens.is_empty() {
        println!("# unknown: {}", out.plan.unknown_tokens.join(", "));
    }
    println!("# matrix {}, depth {}", out.matrix, out.plan.depth);
    for e in &out.entries {
        let dists: Vec<String> = out
            .plan
            .input_words
            .iter()
            .zip(out.distances(e.word))
            .map(|(w, d)| {
                let d = d.map_or_else(|| "-".to_string(), |d| d.to_string());
                format!("{}={}", lex.word(w.id), d)
            })
            .collect();
        println!("{}\t{:.6}\t{}", lex.word(e.word), e.score, dists.join(" "));
    }
    Ok(())
}

fn stats(args: StatsArgs) -> Result<()> {
    let index = load_index(&args.index)?;
    let selected: Vec<&GraphStats> = match args.matrix {
        Some(k) => vec![index
            .stats(k)
            .with_context(|| format!("index has no {k} matrix"))?],
        None => index.stats.iter().collect(),
    };
    if let Some(dir) = &args.out_dir {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    }
    println!("words\t{}", index.lexicon.len());
    for s in selected {
        print!("{}", s.summary());
        if let Some(dir) = &args.out_dir {
            let write = |name: String, body: String| {
                let p = dir.join(name);
                fs::write(&p, body).with_context(|| format!("writing {}", p.display()))
            };
            write(format!("{}.stats.txt", s.kind), s.summary())?;
            write(
                format!("{}.full-depth.tsv", s.kind),
                GraphStats::histogram_tsv("min_full_depth", &s.full_depth_histogram()),
            )?;
            write(
                format!("{}.degree.tsv", s.kind),
                GraphStats::histogram_tsv("backlink_degree", &s.degree_histogram()),
            )?;
        }
    }
    Ok(())
}

fn eval(args: EvalArgs) -> Result<()> {
    let index = load_index(&args.index)?;
    require_file(&args.cases)?;
    let file = fs::File::open(&args.cases)?;
    let cases = load_cases(file).with_context(|| format!("test set {}", args.cases.display()))?;
    let options = EvalOptions {
        depth: args.depth,
        corr: args.corr,
        matrix: args.matrix,
    };
    let with_suffix = |suffix: &str| {
        args.out.as_ref().map(|p| {
            let mut s = p.clone().into_os_string();
            s.push(suffix);
            PathBuf::from(s)
        })
    };
    if args.depths.is_empty() {
        let report = evaluate(&cases, &index, &options)?;
        print!("{}", report.summary_text());
        if let Some(p) = with_suffix(".cases.tsv") {
            fs::write(&p, report.cases_tsv()).with_context(|| format!("writing {}", p.display()))?;
        }
        if let Some(p) = with_suffix(".summary.txt") {
            fs::write(&p, report.summary_text()).with_context(|| format!("writing {}", p.display()))?;
        }
    } else {
        let sweep = depth_sweep(&cases, &index, &args.depths, &options)?;
        print!("{}", sweep.table());
        if let Some(p) = with_suffix(".sweep.tsv") {
            fs::write(&p, sweep.table()).with_context(|| format!("writing {}", p.display()))?;
        }
    }
    Ok(())
}

fn serve(args: ServeArgs) -> Result<()> {
    if let Some(dir) = &args.static_dir {
        if !dir.is_dir() {
            bail!("no such directory: {}", dir.display());
        }
    }
    let index = load_index(&args.index)?;
    let service = Arc::new(Service::new(Arc::new(index)));
    let rt = tokio::runtime::Runtime::new()?;
    eprintln!("listening on http://{}", args.addr);
    rt.block_on(revdict_service::serve(service, args.addr, args.static_dir))?;
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Build(a) => build(a),
        Command::Query(a) => run_query(a),
        Command::Stats(a) => stats(a),
        Command::Eval(a) => eval(a),
        Command::Serve(a) => serve(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
