//! The `scg` command line.

use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::corpus::{Corpus, CorpusEntry, CorpusError};
use crate::perm::{parse_cycles, parse_cycles_auto, PermGroup, Permutation};
use crate::prgraph::PRGraph;
use crate::search::{
    enumerate, graph_classes_up_to_duality, Quotient, SearchError, SearchLimits, SearchSpec,
};
use crate::sggi::{IpStatus, Sggi};
use crate::verify::{
    verify_corpus, verify_entry, verify_theorem_main, Claim, EntryRecord, Summary, VerifyError,
    VerifyOptions, REPORT_VERSION,
};

pub const EXIT_PASS: u8 = 0;
pub const EXIT_MISMATCH: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_BUDGET: u8 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Parser)]
#[command(
    name = "scg",
    version,
    about = "String C-group checks on permutation representation graphs"
)]
pub struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,
    /// Largest group enumerated by an intersection check.
    #[arg(long, default_value_t = crate::perm::DEFAULT_CAP, global = true, value_parser = positive_u128)]
    pub cap: u128,
    /// Worker threads; output does not depend on it.
    #[arg(long, default_value_t = 1, global = true, value_parser = clap::value_parser!(u32).range(1..))]
    pub jobs: u32,
    #[command(subcommand)]
    pub command: Command,
}

fn positive_u128(s: &str) -> Result<u128, String> {
    match s.parse::<u128>() {
        Ok(0) => Err("must be positive".into()),
        Ok(v) => Ok(v),
        Err(e) => Err(e.to_string()),
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Analyze one graph file.
    Analyze { path: PathBuf },
    /// Verify corpus entries against their expectations (all by default).
    VerifyCorpus {
        ids: Vec<String>,
        /// Ignore recorded failure witnesses and always enumerate.
        #[arg(long)]
        no_recorded: bool,
        /// Also rerun the enumerations behind the classification.
        #[arg(long)]
        theorem: bool,
    },
    /// Enumerate generating tuples of involutions of a group.
    Enumerate {
        /// psl2_11, m11, s4, or a file with one generator per line.
        group: String,
        rank: usize,
        /// Keep only string C-groups.
        #[arg(long)]
        ip: bool,
        /// Identify isomorphic tuples and tuples with their reverse.
        #[arg(long)]
        up_to_duality: bool,
        /// Identify isomorphic tuples.
        #[arg(long, conflicts_with = "up_to_duality")]
        iso: bool,
        /// Write one graph file per class into this directory.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = 100_000_000)]
        max_candidates: u64,
    },
    /// Print corpus graphs, or write them into a directory.
    DumpCorpus {
        ids: Vec<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Corpus(#[from] CorpusError),
    #[error(transparent)]
    Verify(#[from] VerifyError),
    #[error(transparent)]
    Search(#[from] SearchError),
    #[error("{path}: {message}")]
    Io { path: PathBuf, message: String },
}

impl CliError {
    fn code(&self) -> u8 {
        let budget = matches!(self, CliError::Search(SearchError::BudgetExceeded { .. }))
            || matches!(
                self,
                CliError::Verify(VerifyError::Search(SearchError::BudgetExceeded { .. }))
            );
        if budget {
            EXIT_BUDGET
        } else {
            EXIT_USAGE
        }
    }
}

fn io_error(path: &Path, e: std::io::Error) -> CliError {
    CliError::Io {
        path: path.to_path_buf(),
        message: e.to_string(),
    }
}

/// Top-level JSON document for `analyze` and `verify-corpus`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub version: u32,
    pub command: String,
    pub entries: Vec<EntryRecord>,
    pub summary: Summary,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub claims: Vec<Claim>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub not_searched: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassRecord {
    #[serde(rename = "type")]
    pub schlafli: Vec<u64>,
    pub generators: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnumerationReport {
    pub version: u32,
    pub command: String,
    pub group: String,
    pub order: u128,
    pub rank: usize,
    pub require_ip: bool,
    pub quotient: Quotient,
    pub candidates: u64,
    pub tuples: usize,
    pub classes: Vec<ClassRecord>,
    pub graphs_up_to_duality: usize,
}

/// Parses the process arguments and runs; the returned code is the exit status.
pub fn main_with_args<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() {
                EXIT_USAGE
            } else {
                EXIT_PASS
            };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                err.write_all(text.as_bytes())
            } else {
                out.write_all(text.as_bytes())
            };
            return code;
        }
    };
    match run(&cli, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.code()
        }
    }
}

pub fn main() -> ExitCode {
    let code = main_with_args(
        std::env::args_os(),
        &mut std::io::stdout().lock(),
        &mut std::io::stderr().lock(),
    );
    ExitCode::from(code)
}

fn run(cli: &Cli, out: &mut dyn Write) -> Result<u8, CliError> {
    let opts = VerifyOptions {
        cap: cli.cap,
        use_recorded: true,
        jobs: cli.jobs as usize,
    };
    let text = match &cli.command {
        Command::Analyze { path } => {
            let (record, text) = analyze(path, &opts, cli.format)?;
            emit(out, text)?;
            return Ok(entry_code(&record));
        }
        Command::VerifyCorpus {
            ids,
            no_recorded,
            theorem,
        } => {
            let corpus = Corpus::from_env()?;
            let opts = VerifyOptions {
                use_recorded: !no_recorded,
                ..opts
            };
            let start = Instant::now();
            let report = if *theorem {
                if !ids.is_empty() {
                    return Err(CliError::Usage(
                        "--theorem always covers the whole corpus".into(),
                    ));
                }
                let t = verify_theorem_main(&corpus, &opts)?;
                let mut r = report_of("verify-corpus", t.corpus.entries, t.corpus.summary);
                r.claims = t.claims;
                r.not_searched = t.not_searched;
                r
            } else {
                let v = verify_corpus(&corpus, ids, &opts)?;
                report_of("verify-corpus", v.entries, v.summary)
            };
            let code = report_code(&report);
            let text = match cli.format {
                Format::Json => to_json(&report),
                Format::Text => {
                    format!(
                        "{}finished in {:.2?}\n",
                        report_text(&report),
                        start.elapsed()
                    )
                }
            };
            emit(out, text)?;
            return Ok(code);
        }
        Command::Enumerate {
            group,
            rank,
            ip,
            up_to_duality,
            iso,
            out: dir,
            max_candidates,
        } => {
            let quotient = match (up_to_duality, iso) {
                (true, _) => Quotient::IsoAndDuality,
                (false, true) => Quotient::Iso,
                _ => Quotient::None,
            };
            let limits = SearchLimits {
                max_candidates: *max_candidates,
                ip_cap: cli.cap,
                jobs: cli.jobs as usize,
                ..SearchLimits::default()
            };
            let report = enumerate_cmd(group, *rank, *ip, quotient, limits, dir.as_deref())?;
            match cli.format {
                Format::Json => to_json(&report),
                Format::Text => enumeration_text(&report),
            }
        }
        Command::DumpCorpus { ids, out: dir } => dump_corpus(ids, dir.as_deref())?,
    };
    emit(out, text)?;
    Ok(EXIT_PASS)
}

fn emit(out: &mut dyn Write, text: String) -> Result<(), CliError> {
    out.write_all(text.as_bytes())
        .map_err(|e| io_error(Path::new("<stdout>"), e))
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report serializes");
    s.push('\n');
    s
}

fn report_of(command: &str, entries: Vec<EntryRecord>, summary: Summary) -> Report {
    Report {
        version: REPORT_VERSION,
        command: command.into(),
        entries,
        summary,
        claims: Vec::new(),
        not_searched: Vec::new(),
    }
}

fn entry_code(e: &EntryRecord) -> u8 {
    if e.budget_exceeded {
        EXIT_BUDGET
    } else if e.pass {
        EXIT_PASS
    } else {
        EXIT_MISMATCH
    }
}

fn report_code(r: &Report) -> u8 {
    if r.summary.budget_exceeded > 0 {
        EXIT_BUDGET
    } else if r.summary.failed > 0 || r.claims.iter().any(|c| !c.pass) {
        EXIT_MISMATCH
    } else {
        EXIT_PASS
    }
}

fn analyze(
    path: &Path,
    opts: &VerifyOptions,
    format: Format,
) -> Result<(EntryRecord, String), CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| io_error(path, e))?;
    let graph =
        PRGraph::parse(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
    let s = Sggi::from_graph(&graph)
        .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
    if !s.is_transitive() {
        return Err(CliError::Usage(format!(
            "{}: the group is intransitive",
            path.display()
        )));
    }
    let id = path
        .file_stem()
        .and_then(|s| s.to_str())
        .unwrap_or("graph")
        .to_string();
    let entry = CorpusEntry {
        id,
        graph,
        source: path.display().to_string(),
        expected_order: None,
        expected_ip: None,
        witnesses: Vec::new(),
        ip_witness: None,
    };
    let record = verify_entry(&entry, opts);
    let summary = Summary {
        total: 1,
        passed: usize::from(record.pass),
        failed: usize::from(!record.pass),
        budget_exceeded: usize::from(record.budget_exceeded),
    };
    let report = report_of("analyze", vec![record.clone()], summary);
    let text = match format {
        Format::Json => to_json(&report),
        Format::Text => analysis_text(&record, &s),
    };
    Ok((record, text))
}

fn analysis_text(r: &EntryRecord, s: &Sggi) -> String {
    let mut t = String::new();
    let _ = writeln!(t, "degree      {}", s.degree());
    let _ = writeln!(t, "rank        {}", s.rank());
    for (i, (g, p)) in r.generators.iter().zip(&r.parities).enumerate() {
        let _ = writeln!(
            t,
            "r{i}          {g}  ({})",
            if *p == crate::perm::Parity::Even {
                "even"
            } else {
                "odd"
            }
        );
    }
    let _ = writeln!(t, "transitive  {}", r.transitive);
    let order = r.order.map_or("?".to_string(), |o| o.to_string());
    let ident = r
        .identification
        .as_deref()
        .map(|i| format!(" ({i} by order)"))
        .unwrap_or_default();
    let _ = writeln!(t, "order       {order}{ident}");
    let _ = writeln!(t, "type        {}", s.schlafli_type());
    if let Some(f) = &r.fracture {
        let splits: Vec<String> = f
            .splits
            .iter()
            .map(|x| format!("{}:{{{},{}}}", x.label, x.edge[0], x.edge[1]))
            .collect();
        let _ = writeln!(
            t,
            "fracture    {}  splits [{}]  2-fracture {}",
            if f.has_fracture { "yes" } else { "no" },
            splits.join(", "),
            if f.two_fracture { "yes" } else { "no" }
        );
    }
    let _ = writeln!(t, "ip          {}", ip_text(r));
    t
}

fn ip_text(r: &EntryRecord) -> String {
    match (&r.ip.status, &r.ip.method) {
        (Some(status), Some(method)) => {
            let method = serde_json::to_value(method)
                .expect("enum")
                .as_str()
                .unwrap_or_default()
                .to_string();
            let mut s = format!(
                "{} [{method}]",
                if *status == IpStatus::Holds {
                    "holds"
                } else {
                    "fails"
                }
            );
            if let Some(w) = &r.ip.witness {
                let _ = write!(s, " witness {} in J={:?} K={:?}", w.element, w.j, w.k);
            }
            s
        }
        _ => format!("undecided: {}", r.ip.error.as_deref().unwrap_or("")),
    }
}

fn report_text(r: &Report) -> String {
    let mut t = String::new();
    for e in &r.entries {
        let order = e.order.map_or("?".to_string(), |o| o.to_string());
        let ty = format!(
            "{{{}}}",
            e.schlafli
                .iter()
                .map(u64::to_string)
                .collect::<Vec<_>>()
                .join(",")
        );
        let _ = writeln!(
            t,
            "{:<12} {:<5} order {:<9} type {:<9} ip {}",
            e.id,
            if e.pass { "PASS" } else { "FAIL" },
            order,
            ty,
            ip_text(e)
        );
        for m in &e.mismatches {
            let _ = writeln!(t, "    {m}");
        }
    }
    for c in &r.claims {
        let _ = writeln!(
            t,
            "{:<5} {}: expected {}, computed {}",
            if c.pass { "PASS" } else { "FAIL" },
            c.name,
            c.expected,
            c.computed
        );
    }
    for n in &r.not_searched {
        let _ = writeln!(t, "not searched: {n}");
    }
    let _ = writeln!(
        t,
        "{} entries, {} passed, {} failed, {} over budget",
        r.summary.total, r.summary.passed, r.summary.failed, r.summary.budget_exceeded
    );
    t
}

/// A named corpus group, or a file of generators (one per line, `#`
/// comments, optional `degree N`).
fn target_group(name: &str) -> Result<PermGroup, CliError> {
    let corpus = Corpus::from_env()?;
    if corpus.group_names().contains(&name) {
        return Ok(corpus.group(name)?);
    }
    let path = Path::new(name);
    if !path.exists() {
        return Err(CliError::Usage(format!(
            "unknown group {name:?}; expected one of {} or a generator file",
            corpus.group_names().join(", ")
        )));
    }
    let text = std::fs::read_to_string(path).map_err(|e| io_error(path, e))?;
    let mut degree = None;
    let mut lines = Vec::new();
    for line in text
        .lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .filter(|l| !l.is_empty())
    {
        match line.strip_prefix("degree") {
            Some(d) => {
                degree = Some(
                    d.trim()
                        .parse::<usize>()
                        .map_err(|e| CliError::Usage(format!("degree: {e}")))?,
                )
            }
            None => lines.push(line),
        }
    }
    let bad = |e: crate::perm::PermError| CliError::Usage(format!("{}: {e}", path.display()));
    let n = match degree {
        Some(n) => n,
        None => lines
            .iter()
            .map(|l| parse_cycles_auto(l).map(|p| p.degree()))
            .collect::<Result<Vec<_>, _>>()
            .map_err(bad)?
            .into_iter()
            .max()
            .unwrap_or(1),
    };
    let gens: Vec<Permutation> = lines
        .iter()
        .map(|l| parse_cycles(l, n))
        .collect::<Result<_, _>>()
        .map_err(bad)?;
    PermGroup::new(n, gens).map_err(bad)
}

fn enumerate_cmd(
    group: &str,
    rank: usize,
    require_ip: bool,
    quotient: Quotient,
    limits: SearchLimits,
    dir: Option<&Path>,
) -> Result<EnumerationReport, CliError> {
    let g = target_group(group)?;
    let spec = SearchSpec {
        group: g.clone(),
        rank,
        require_ip,
        quotient,
        limits,
    };
    let out = enumerate(&spec)?;
    let mut classes = Vec::new();
    for (k, t) in out.classes.iter().enumerate() {
        let schlafli = (1..t.len()).map(|i| (t[i - 1] * t[i]).order()).collect();
        classes.push(ClassRecord {
            schlafli,
            generators: t.iter().map(Permutation::to_string).collect(),
        });
        if let Some(dir) = dir {
            std::fs::create_dir_all(dir).map_err(|e| io_error(dir, e))?;
            let graph = PRGraph::from_generators(t, g.degree()).expect("involutions");
            let path = dir.join(format!("class_{:03}.graph", k + 1));
            let body = format!("# {group} rank {rank} class {}\n{}", k + 1, graph.to_text());
            std::fs::write(&path, body).map_err(|e| io_error(&path, e))?;
        }
    }
    let report = EnumerationReport {
        version: REPORT_VERSION,
        command: "enumerate".into(),
        group: group.to_string(),
        order: g.order(),
        rank,
        require_ip,
        quotient,
        candidates: out.candidates,
        tuples: out.tuples.len(),
        classes,
        graphs_up_to_duality: graph_classes_up_to_duality(&out.tuples),
    };
    if let Some(dir) = dir {
        let path = dir.join("summary.json");
        std::fs::write(&path, to_json(&report)).map_err(|e| io_error(&path, e))?;
    }
    Ok(report)
}

fn enumeration_text(r: &EnumerationReport) -> String {
    let mut t = String::new();
    let _ = writeln!(
        t,
        "{} (order {}), rank {}, {} candidates, {} tuples, {} classes, {} graphs up to duality",
        r.group,
        r.order,
        r.rank,
        r.candidates,
        r.tuples,
        r.classes.len(),
        r.graphs_up_to_duality
    );
    for (k, c) in r.classes.iter().enumerate() {
        let ty = c
            .schlafli
            .iter()
            .map(u64::to_string)
            .collect::<Vec<_>>()
            .join(",");
        let _ = writeln!(
            t,
            "class {}: type {{{ty}}}  {}",
            k + 1,
            c.generators.join("  ")
        );
    }
    t
}

fn dump_corpus(ids: &[String], dir: Option<&Path>) -> Result<String, CliError> {
    let corpus = Corpus::from_env()?;
    for id in ids {
        corpus.get(id)?;
    }
    if let Some(dir) = dir {
        if !ids.is_empty() {
            return Err(CliError::Usage(
                "--out writes the whole corpus; drop the ids".into(),
            ));
        }
        corpus.write_dir(dir)?;
        return Ok(format!(
            "wrote {} entries to {}\n",
            corpus.entries().len(),
            dir.display()
        ));
    }
    let mut t = String::new();
    for e in corpus
        .entries()
        .iter()
        .filter(|e| ids.is_empty() || ids.contains(&e.id))
    {
        let _ = writeln!(t, "## {}\n# {}\n{}", e.id, e.source, e.graph.to_text());
    }
    Ok(t)
}
