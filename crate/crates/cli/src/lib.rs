//! The `davenport` command line: exact constants, freeness checks,
//! constructions, catalog sweeps and the regression table.
//!
//! Exit codes: 0 when every result is conclusive and passing, 1 on a failed
//! check or runtime error, 2 when a result is inconclusive, 64 on a usage error.

pub mod store;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use davenport_core::checks::{criteria, render_matrix};
use davenport_core::constructions::{cyclic_free, metacyclic_free_over, product_interleave, rank_power_free};
use davenport_core::solver::{
    compute_consecutive_unweighted_fast, conjecture_sweep, SweepRow, SweepVerdict, ValueField, Verdict,
};
use davenport_core::{
    catalog, compute_consecutive, compute_davenport, format_sequence, is_free, parse_group, parse_sequence,
    parse_weights, ConstantKind, ConstantResult, Freeness, Group, OrderedSequence, ResultSummary,
    SearchConfig, WeightSet,
};

use store::{ResultKey, ResultRecord, ResultStore};

pub const EXIT_PASS: u8 = 0;
pub const EXIT_FAIL: u8 = 1;
pub const EXIT_INCONCLUSIVE: u8 = 2;
pub const EXIT_USAGE: u8 = 64;

#[derive(Parser, Debug)]
#[command(name = "davenport", version, about = "Consecutive weighted Davenport constants of finite groups")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Compute C_A(G) exactly.
    ComputeC(ComputeArgs),
    /// Compute D_A(G) exactly (abelian groups).
    ComputeD(ComputeArgs),
    /// Decide whether a sequence is A-free.
    IsFree(IsFreeArgs),
    /// Build an explicit free sequence.
    Construct {
        #[command(subcommand)]
        what: ConstructCommand,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Check C(G) = |G| across the built-in catalog.
    Sweep(SweepArgs),
    /// Run the regression table of known values.
    VerifyPaper(VerifyArgs),
    /// Inspect or re-verify the result store.
    Cache(CacheArgs),
}

#[derive(Args, Debug, Clone)]
struct SearchArgs {
    /// Longest sequence the search may explore.
    #[arg(long)]
    max_length: Option<usize>,
    /// Number of automaton states the search may expand.
    #[arg(long, default_value_t = 50_000_000)]
    max_states: u64,
    #[arg(long, default_value_t = 1)]
    threads: usize,
    /// Single-threaded search with a lexicographically least witness.
    #[arg(long)]
    deterministic: bool,
}

impl SearchArgs {
    fn config(&self) -> SearchConfig {
        SearchConfig {
            max_length: self.max_length,
            max_states: self.max_states,
            deterministic: self.deterministic,
            threads: self.threads.max(1),
        }
    }
}

#[derive(Args, Debug, Clone)]
struct OutputArgs {
    #[arg(long, conflicts_with = "csv")]
    json: bool,
    #[arg(long)]
    csv: bool,
}

#[derive(Args, Debug, Clone)]
struct StoreArgs {
    /// Result store (JSON Lines).
    #[arg(long, env = "DAVENPORT_CACHE", default_value = "results.jsonl")]
    cache: PathBuf,
    /// Neither read nor write the result store.
    #[arg(long)]
    no_cache: bool,
}

#[derive(Args, Debug)]
struct ComputeArgs {
    #[arg(long)]
    group: String,
    #[arg(long, default_value = "{1}")]
    weights: String,
    /// Use the prefix-product search (requires A = {1}).
    #[arg(long)]
    fast: bool,
    #[command(flatten)]
    search: SearchArgs,
    #[command(flatten)]
    out: OutputArgs,
    #[command(flatten)]
    store: StoreArgs,
}

#[derive(Args, Debug)]
struct IsFreeArgs {
    #[arg(long)]
    group: String,
    #[arg(long, default_value = "{1}")]
    weights: String,
    /// Comma-separated elements.
    #[arg(long, allow_hyphen_values = true)]
    seq: String,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Subcommand, Debug)]
enum ConstructCommand {
    /// The sequence 1, 1, ..., 1 of length n − 1 over C_n.
    Cyclic {
        #[arg(long)]
        n: u32,
    },
    /// The free sequence of length |G| − 1 over a metacyclic group.
    Metacyclic {
        #[arg(long)]
        group: String,
    },
    /// Interleave free sequences over H and K into one over H × K.
    Interleave {
        #[arg(long)]
        left: String,
        #[arg(long, allow_hyphen_values = true)]
        left_seq: String,
        #[arg(long)]
        right: String,
        #[arg(long, allow_hyphen_values = true)]
        right_seq: String,
        #[arg(long, default_value = "{1}")]
        weights: String,
    },
    /// A free sequence of length b^r − 1 over C_n^r.
    RankPower {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        r: u32,
        #[arg(long, default_value = "full")]
        weights: String,
    },
}

#[derive(Args, Debug)]
struct SweepArgs {
    /// Only sweep catalog entries of at most this order.
    #[arg(long)]
    max_order: Option<u64>,
    #[command(flatten)]
    search: SearchArgs,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// Run only these criteria (comma-separated ids).
    #[arg(long, value_delimiter = ',')]
    only: Vec<u32>,
    /// Append elapsed times (reports are then not reproducible byte for byte).
    #[arg(long)]
    times: bool,
    #[command(flatten)]
    search: SearchArgs,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args, Debug)]
struct CacheArgs {
    /// Recompute every conclusive record and compare.
    #[arg(long, alias = "verify-cache")]
    verify: bool,
    #[arg(long, env = "DAVENPORT_CACHE", default_value = "results.jsonl")]
    cache: PathBuf,
    #[command(flatten)]
    search: SearchArgs,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Runtime(String),
}

impl From<davenport_core::Error> for CliError {
    fn from(e: davenport_core::Error) -> Self {
        use davenport_core::Error as E;
        match e {
            E::Contract(_) | E::Budget(_) => CliError::Runtime(e.to_string()),
            other => CliError::Usage(other.to_string()),
        }
    }
}

impl From<store::StoreError> for CliError {
    fn from(e: store::StoreError) -> Self {
        CliError::Runtime(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Runtime(e.to_string())
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Runtime(e.to_string())
    }
}

type CliResult = Result<u8, CliError>;

/// Parses `argv` (including the program name), runs the command and returns the exit code.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_PASS };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            return code;
        }
    };
    match dispatch(cli.command, out, err) {
        Ok(code) => code,
        Err(CliError::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_USAGE
        }
        Err(CliError::Runtime(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_FAIL
        }
    }
}

fn dispatch(command: Command, out: &mut dyn Write, err: &mut dyn Write) -> CliResult {
    match command {
        Command::ComputeC(args) => compute(ConstantKind::Consecutive, &args, out, err),
        Command::ComputeD(args) => compute(ConstantKind::Davenport, &args, out, err),
        Command::IsFree(args) => is_free_cmd(&args, out),
        Command::Construct { what, out: fmt } => construct(&what, &fmt, out),
        Command::Sweep(args) => sweep(&args, out),
        Command::VerifyPaper(args) => verify_paper(&args, out),
        Command::Cache(args) => cache(&args, out, err),
    }
}

fn group_arg(text: &str) -> Result<Arc<Group>, CliError> {
    parse_group(text).map(Arc::new).map_err(|e| CliError::Usage(format!("--group {text:?}: {e}")))
}

fn weights_arg(text: &str, group: &Group) -> Result<WeightSet, CliError> {
    parse_weights(text, group.exponent()).map_err(|e| CliError::Usage(format!("--weights {text:?}: {e}")))
}

fn symbol(kind: ConstantKind) -> &'static str {
    match kind {
        ConstantKind::Consecutive => "C",
        ConstantKind::Davenport => "D",
    }
}

fn value_text(v: &ValueField) -> String {
    match v {
        ValueField::Number(n) => n.to_string(),
        ValueField::Text(t) => t.clone(),
    }
}

fn outcome_code(conclusive: bool) -> u8 {
    if conclusive {
        EXIT_PASS
    } else {
        EXIT_INCONCLUSIVE
    }
}

/// CSV columns shared by `compute-*`, `sweep` and `cache`.
const CSV_HEADER: [&str; 5] = ["group", "weights", "value", "bound", "verdict"];

fn csv_row(s: &ResultSummary, verdict: &str) -> [String; 5] {
    let (value, bound) = if s.conclusive {
        (value_text(&s.value), String::new())
    } else {
        (String::new(), value_text(&s.value))
    };
    [s.group.clone(), s.weights.clone(), value, bound, verdict.to_string()]
}

fn write_csv(out: &mut dyn Write, rows: impl IntoIterator<Item = [String; 5]>) -> Result<(), CliError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    for row in rows {
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

fn write_json(out: &mut dyn Write, value: &impl serde::Serialize) -> Result<(), CliError> {
    serde_json::to_writer_pretty(&mut *out, value).map_err(|e| CliError::Runtime(e.to_string()))?;
    writeln!(out)?;
    Ok(())
}

fn print_summary(s: &ResultSummary, cached: bool, fmt: &OutputArgs, out: &mut dyn Write) -> Result<(), CliError> {
    if fmt.json {
        return write_json(out, s);
    }
    if fmt.csv {
        let verdict = if s.conclusive { "EXACT" } else { "INCONCLUSIVE" };
        return write_csv(out, [csv_row(s, verdict)]);
    }
    let relation = if s.conclusive { "=" } else { ">=" };
    writeln!(out, "{}_A(G) {relation} {}", symbol(s.kind), value_text(&s.value))?;
    writeln!(out, "  group    {}", s.group)?;
    writeln!(out, "  weights  {}", s.weights)?;
    if let Some(w) = &s.witness {
        writeln!(out, "  witness  {}", if w.is_empty() { "(empty)" } else { w })?;
    }
    writeln!(out, "  states   {}", s.states_explored)?;
    if let Some(note) = &s.note {
        writeln!(out, "  note     {note}")?;
    }
    if cached {
        writeln!(out, "  (from cache)")?;
    }
    Ok(())
}

fn solve(kind: ConstantKind, group: &Arc<Group>, weights: &WeightSet, fast: bool, cfg: &SearchConfig) -> Result<ConstantResult, CliError> {
    if fast {
        if kind != ConstantKind::Consecutive || !weights.is_unweighted() {
            return Err(CliError::Usage("--fast requires compute-c with --weights {1}".into()));
        }
        return Ok(compute_consecutive_unweighted_fast(group, cfg));
    }
    Ok(match kind {
        ConstantKind::Consecutive => compute_consecutive(group, weights, cfg)?,
        ConstantKind::Davenport => compute_davenport(group, weights, cfg)?,
    })
}

fn open_store(path: &PathBuf, err: &mut dyn Write) -> Result<ResultStore, CliError> {
    let store = ResultStore::open(path)?;
    if store.skipped() > 0 {
        writeln!(err, "warning: skipped {} corrupt line(s) in {}", store.skipped(), path.display())?;
    }
    Ok(store)
}

fn compute(kind: ConstantKind, args: &ComputeArgs, out: &mut dyn Write, err: &mut dyn Write) -> CliResult {
    let group = group_arg(&args.group)?;
    let weights = weights_arg(&args.weights, &group)?;
    if kind == ConstantKind::Davenport && !group.is_abelian() {
        return Err(CliError::Usage(format!("compute-d needs an abelian group, got {}", group.descriptor())));
    }
    let key = ResultKey {
        group: group.descriptor().to_string(),
        weights: weights.canonical(),
        kind,
    };
    let mut store = if args.store.no_cache { None } else { Some(open_store(&args.store.cache, err)?) };
    if let Some(hit) = store.as_ref().and_then(|s| s.get(&key)).filter(|r| r.result.conclusive) {
        print_summary(&hit.result, true, &args.out, out)?;
        return Ok(EXIT_PASS);
    }
    let result = solve(kind, &group, &weights, args.fast, &args.search.config())?;
    let mut summary = result.summary();
    summary.weights = key.weights.clone();
    if let Some(store) = store.as_mut() {
        if summary.conclusive {
            store.insert(ResultRecord::new(summary.clone()))?;
        }
    }
    print_summary(&summary, false, &args.out, out)?;
    Ok(outcome_code(summary.conclusive))
}

fn is_free_cmd(args: &IsFreeArgs, out: &mut dyn Write) -> CliResult {
    let group = group_arg(&args.group)?;
    let weights = weights_arg(&args.weights, &group)?;
    let seq = parse_sequence(&args.seq, &group).map_err(|e| CliError::Usage(format!("--seq {:?}: {e}", args.seq)))?;
    let verdict = is_free(&seq, &weights);
    if args.out.json {
        let cert = match &verdict {
            Freeness::Free => serde_json::Value::Null,
            Freeness::NotFree(c) => serde_json::json!({ "start": c.start, "end": c.end, "weights": c.weights }),
        };
        let doc = serde_json::json!({
            "group": group.descriptor().to_string(),
            "weights": weights.canonical(),
            "sequence": format_sequence(&seq),
            "free": verdict.is_free(),
            "certificate": cert,
        });
        write_json(out, &doc)?;
    } else if args.out.csv {
        let mut w = csv::Writer::from_writer(&mut *out);
        w.write_record(["group", "weights", "sequence", "free", "certificate"])?;
        let cert = match &verdict {
            Freeness::Free => String::new(),
            Freeness::NotFree(c) => format!("[{},{}] {:?}", c.start, c.end, c.weights),
        };
        w.write_record([
            group.descriptor().to_string(),
            weights.canonical(),
            format_sequence(&seq),
            verdict.is_free().to_string(),
            cert,
        ])?;
        w.flush()?;
    } else {
        match &verdict {
            Freeness::Free => writeln!(out, "FREE")?,
            Freeness::NotFree(c) => {
                let weights: Vec<String> = c.weights.iter().map(u64::to_string).collect();
                writeln!(out, "NOT FREE: window [{}, {}] with weights {}", c.start, c.end, weights.join(","))?;
            }
        }
    }
    Ok(EXIT_PASS)
}

fn construct(what: &ConstructCommand, fmt: &OutputArgs, out: &mut dyn Write) -> CliResult {
    let (seq, weights) = match what {
        ConstructCommand::Cyclic { n } => {
            let s = cyclic_free(*n)?;
            let w = WeightSet::unweighted(s.group().exponent())?;
            (s, w)
        }
        ConstructCommand::Metacyclic { group } => {
            let g = group_arg(group)?;
            let s = metacyclic_free_over(&g)?;
            (s, WeightSet::unweighted(g.exponent())?)
        }
        ConstructCommand::Interleave { left, left_seq, right, right_seq, weights } => {
            let (h, k) = (group_arg(left)?, group_arg(right)?);
            let s1 = parse_sequence(left_seq, &h).map_err(|e| CliError::Usage(format!("--left-seq: {e}")))?;
            let s2 = parse_sequence(right_seq, &k).map_err(|e| CliError::Usage(format!("--right-seq: {e}")))?;
            let m = h.exponent().max(k.exponent());
            let w = parse_weights(weights, m).map_err(|e| CliError::Usage(format!("--weights {weights:?}: {e}")))?;
            let s = product_interleave(&s1, &s2, &w)?;
            let w = if w.is_unweighted() { WeightSet::unweighted(s.group().exponent())? } else { w };
            (s, w)
        }
        ConstructCommand::RankPower { n, r, weights } => {
            let w = parse_weights(weights, u64::from(*n)).map_err(|e| CliError::Usage(format!("--weights {weights:?}: {e}")))?;
            (rank_power_free(*n, *r, &w)?, w)
        }
    };
    let free = is_free(&seq, &weights).is_free();
    report_construction(&seq, &weights, free, fmt, out)?;
    Ok(if free { EXIT_PASS } else { EXIT_FAIL })
}

fn report_construction(seq: &OrderedSequence, weights: &WeightSet, free: bool, fmt: &OutputArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let group = seq.group().descriptor().to_string();
    if fmt.json {
        let doc = serde_json::json!({
            "group": group,
            "weights": weights.canonical(),
            "length": seq.len(),
            "sequence": format_sequence(seq),
            "free": free,
        });
        return write_json(out, &doc);
    }
    if fmt.csv {
        let mut w = csv::Writer::from_writer(&mut *out);
        w.write_record(["group", "weights", "length", "sequence", "free"])?;
        w.write_record([group, weights.canonical(), seq.len().to_string(), format_sequence(seq), free.to_string()])?;
        w.flush()?;
        return Ok(());
    }
    writeln!(out, "{}", format_sequence(seq))?;
    writeln!(out, "  group    {group}")?;
    writeln!(out, "  weights  {}", weights.canonical())?;
    writeln!(out, "  length   {}", seq.len())?;
    writeln!(out, "  {}", if free { "FREE" } else { "NOT FREE" })?;
    Ok(())
}

fn sweep(args: &SweepArgs, out: &mut dyn Write) -> CliResult {
    let entries: Vec<_> = catalog::builtin_catalog()
        .into_iter()
        .filter(|d| args.max_order.is_none_or(|m| catalog::order_of(d) <= m))
        .collect();
    let rows = conjecture_sweep(&entries, &args.search.config());
    print_sweep(&rows, &args.out, out)?;
    let code = if rows.iter().any(|r| matches!(r.verdict, SweepVerdict::Differs | SweepVerdict::Error)) {
        EXIT_FAIL
    } else if rows.iter().any(|r| r.verdict == SweepVerdict::Inconclusive) {
        EXIT_INCONCLUSIVE
    } else {
        EXIT_PASS
    };
    Ok(code)
}

fn print_sweep(rows: &[SweepRow], fmt: &OutputArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let summary = |r: &SweepRow| r.result.as_ref().map(ConstantResult::summary);
    if fmt.json {
        let doc: Vec<_> = rows
            .iter()
            .map(|r| {
                serde_json::json!({
                    "group": r.group,
                    "order": r.order,
                    "verdict": r.verdict.to_string(),
                    "result": summary(r),
                    "error": r.error,
                })
            })
            .collect();
        return write_json(out, &doc);
    }
    if fmt.csv {
        let csv_rows = rows.iter().map(|r| match summary(r) {
            Some(s) => csv_row(&s, &r.verdict.to_string()),
            None => [r.group.clone(), "{1}".into(), String::new(), String::new(), r.verdict.to_string()],
        });
        return write_csv(out, csv_rows);
    }
    for r in rows {
        let value = summary(r).map_or_else(|| r.error.clone().unwrap_or_default(), |s| value_text(&s.value));
        writeln!(out, "{:<14} {:<28} |G| = {:<4} C(G) = {}", r.verdict.to_string(), r.group, r.order, value)?;
    }
    let equal = rows.iter().filter(|r| r.verdict == SweepVerdict::Equal).count();
    writeln!(out, "{equal}/{} groups satisfy C(G) = |G|", rows.len())?;
    Ok(())
}

fn verify_paper(args: &VerifyArgs, out: &mut dyn Write) -> CliResult {
    let mut cfg = args.search.config();
    cfg.deterministic = true;
    let selected: Vec<_> = criteria()
        .into_iter()
        .filter(|c| args.only.is_empty() || args.only.contains(&c.id))
        .collect();
    if selected.is_empty() {
        return Err(CliError::Usage(format!("no criteria match --only {:?}", args.only)));
    }
    let reports: Vec<_> = selected.iter().map(|c| c.run(&cfg)).collect();
    if args.out.json {
        let doc: Vec<_> = reports
            .iter()
            .map(|r| {
                let cases: Vec<_> = r
                    .cases
                    .iter()
                    .map(|c| {
                        serde_json::json!({
                            "case": c.label,
                            "expected": c.expected,
                            "observed": c.observed,
                            "verdict": c.verdict.to_string(),
                        })
                    })
                    .collect();
                let mut entry = serde_json::json!({
                    "id": r.id,
                    "title": r.title,
                    "verdict": r.verdict.to_string(),
                    "time_limit_s": r.time_limit.as_secs(),
                    "cases": cases,
                });
                if args.times {
                    entry["elapsed_ms"] = serde_json::json!(r.elapsed.as_millis() as u64);
                }
                entry
            })
            .collect();
        write_json(out, &doc)?;
    } else if args.out.csv {
        let mut w = csv::Writer::from_writer(&mut *out);
        w.write_record(["criterion", "case", "expected", "observed", "verdict"])?;
        for r in &reports {
            for c in &r.cases {
                w.write_record([r.id.to_string(), c.label.clone(), c.expected.clone(), c.observed.clone(), c.verdict.to_string()])?;
            }
        }
        w.flush()?;
    } else {
        out.write_all(render_matrix(&reports, args.times).as_bytes())?;
        let passed = reports.iter().filter(|r| r.verdict == Verdict::Pass).count();
        writeln!(out, "{passed}/{} criteria pass", reports.len())?;
    }
    let code = if reports.iter().any(|r| r.verdict == Verdict::Fail) {
        EXIT_FAIL
    } else if reports.iter().any(|r| r.verdict == Verdict::Inconclusive) {
        EXIT_INCONCLUSIVE
    } else {
        EXIT_PASS
    };
    Ok(code)
}

fn cache(args: &CacheArgs, out: &mut dyn Write, err: &mut dyn Write) -> CliResult {
    let store = open_store(&args.cache, err)?;
    let mut rows = Vec::new();
    let mut mismatches = 0;
    for rec in store.records() {
        let verdict = if args.verify && rec.result.conclusive {
            let group = group_arg(&rec.key.group)?;
            let weights = weights_arg(&rec.key.weights, &group)?;
            let fresh = solve(rec.key.kind, &group, &weights, false, &args.search.config())?.summary();
            if !fresh.conclusive {
                "INCONCLUSIVE"
            } else if fresh.value == rec.result.value {
                "REPRODUCED"
            } else {
                mismatches += 1;
                writeln!(err, "mismatch for {}: stored {}, recomputed {}", rec.key, value_text(&rec.result.value), value_text(&fresh.value))?;
                "MISMATCH"
            }
        } else if rec.result.conclusive {
            "EXACT"
        } else {
            "INCONCLUSIVE"
        };
        rows.push((rec, verdict));
    }
    if args.out.json {
        let doc: Vec<_> = rows
            .iter()
            .map(|(rec, v)| serde_json::json!({ "record": rec, "status": v }))
            .collect();
        write_json(out, &doc)?;
    } else if args.out.csv {
        write_csv(out, rows.iter().map(|(rec, v)| csv_row(&rec.result, v)))?;
    } else {
        for (rec, v) in &rows {
            writeln!(out, "{v:<12} {} = {}", rec.key, value_text(&rec.result.value))?;
        }
        writeln!(out, "{} record(s) in {}", rows.len(), store.path().display())?;
    }
    Ok(if mismatches > 0 {
        EXIT_FAIL
    } else if rows.iter().any(|(_, v)| *v == "INCONCLUSIVE") {
        EXIT_INCONCLUSIVE
    } else {
        EXIT_PASS
    })
}
