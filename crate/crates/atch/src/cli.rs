//! Command-line surface over the engine: ingest event logs, ask
//! time-travel and causal questions, fire contradiction discovery, and
//! emit the benchmark and loss reports.
//!
//! Exit codes are a stable contract: 0 success, 1 usage or parse
//! failure, 2 domain error (unknown edge, cyclic pattern, and so on).
//! Default output is a human table; `--format canonical` switches to the
//! same single-line object notation the event log uses, suitable for
//! scripting and byte-for-byte comparison.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

use clap::error::ErrorKind;
use clap::{Parser, Subcommand, ValueEnum};

use crate::canon::Value;
use crate::causal::{trace_causal_chain, CausalChain, TraceDirection, TraceOptions, TraceResult};
use crate::conflict::{
    causal_audit, detect_contradiction_with_floor, discover_hidden_context, resolve,
    split_on_context, Discovery, PartitionNode, Resolution, Verdict,
};
use crate::model::{Confidence, EdgeId, TimeInterval, Timestamp};
use crate::projection::{
    ambiguity_bound, count_preimages, expressiveness_gap, project_binary, Pillar,
};
use crate::query::{evaluate, evaluate_bruteforce, parse_query, run_benchmark_suite, BindingRow,
    QueryError};
use crate::store::{Snapshot, Store};
use crate::temporal::{at_time_with_floor, valid_in_interval};

const DEFAULT_STORE: &str = "atch.log";
const STORE_ENV: &str = "ATCH_STORE";

#[derive(Parser)]
#[command(
    name = "atch",
    about = "Attributed temporal causal hypergraph engine",
    version,
    disable_help_subcommand = true
)]
struct Cli {
    /// Path to the event-log store (default: $ATCH_STORE, then ./atch.log).
    #[arg(long, global = true)]
    store: Option<PathBuf>,
    /// Output style.
    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    format: Format,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Table,
    Canonical,
}

#[derive(Subcommand)]
enum Cmd {
    /// Append the events of another log file to the store.
    Ingest { file: PathBuf },
    /// Evaluate a pattern query written in the query DSL.
    Query {
        text: String,
        /// Evaluate cyclic patterns by brute force instead of rejecting them.
        #[arg(long)]
        force_bruteforce: bool,
    },
    /// Follow causal links from an edge and report the chains.
    Trace {
        edge: String,
        /// Maximum number of links to follow (default: unlimited).
        #[arg(long)]
        depth: Option<usize>,
        /// Only traverse edges valid at this instant.
        #[arg(long)]
        as_of: Option<String>,
        /// Prune branches whose chain confidence falls below this.
        #[arg(long)]
        threshold: Option<f64>,
        /// Annotate nodes and links with confidences.
        #[arg(long)]
        confidence: bool,
        /// Trace effects (downstream) instead of causes.
        #[arg(long)]
        forward: bool,
    },
    /// List the edges valid at an instant.
    AtTime {
        time: String,
        /// Keep only edges with effective confidence strictly above this.
        #[arg(long)]
        min_confidence: Option<f64>,
    },
    /// List the edges whose validity overlaps a window.
    During { start: String, end: String },
    /// Detect a contradiction on a proposition and find the hidden context.
    Discover {
        proposition: String,
        /// Contradiction threshold on each side's accumulated confidence.
        #[arg(long, default_value_t = 0.9)]
        theta: f64,
        /// Ignore evidence whose confidence is not strictly above this.
        #[arg(long, default_value_t = 0.0)]
        member_floor: f64,
        /// Append context-refined edges for both sides of the split.
        #[arg(long)]
        split: bool,
    },
    /// Decide between two conflicting claims through the resolution tiers.
    Resolve { a: String, b: String },
    /// Compare two beliefs' causal provenance and flag weak sources.
    Audit {
        a: String,
        b: String,
        /// Sources strictly below this confidence taint their chain.
        #[arg(long, default_value_t = 0.3)]
        kappa_floor: f64,
        /// Valid-from instant for appended explanation edges (default: now).
        #[arg(long)]
        at: Option<String>,
    },
    /// Run the built-in benchmark suite (ignores --store).
    Bench,
    /// Report what binary projection loses on this store.
    Loss {
        /// Pillars absent from a target representation (P1..P4 or names).
        #[arg(long, value_delimiter = ',')]
        missing: Vec<String>,
        /// Count projection preimages exhaustively (small stores only).
        #[arg(long)]
        preimages: bool,
    },
    /// Summarize the store.
    Stats,
}

enum CliError {
    /// Bad invocation or unparseable input: exit 1.
    Usage(String),
    /// The request was well-formed but the data refuses: exit 2.
    Domain(String),
}

impl CliError {
    fn code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Domain(_) => 2,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Domain(m) => m,
        }
    }
}

pub fn run() -> i32 {
    run_from(std::env::args())
}

pub fn run_from(args: impl IntoIterator<Item = String>) -> i32 {
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            print!("{e}");
            return 0;
        }
        Err(e) => {
            eprint!("{e}");
            return 1;
        }
    };
    let store_path = cli
        .store
        .clone()
        .or_else(|| std::env::var_os(STORE_ENV).map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from(DEFAULT_STORE));
    match dispatch(&cli, &store_path) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {}", e.message());
            e.code()
        }
    }
}

fn dispatch(cli: &Cli, store_path: &Path) -> Result<(), CliError> {
    let fmt = cli.format;
    match &cli.cmd {
        Cmd::Ingest { file } => cmd_ingest(store_path, file, fmt),
        Cmd::Query { text, force_bruteforce } => {
            cmd_query(&load_store(store_path)?, text, *force_bruteforce, fmt)
        }
        Cmd::Trace { edge, depth, as_of, threshold, confidence, forward } => cmd_trace(
            &load_store(store_path)?,
            edge,
            *depth,
            as_of.as_deref(),
            *threshold,
            *confidence,
            *forward,
            fmt,
        ),
        Cmd::AtTime { time, min_confidence } => {
            cmd_at_time(&load_store(store_path)?, time, *min_confidence, fmt)
        }
        Cmd::During { start, end } => cmd_during(&load_store(store_path)?, start, end, fmt),
        Cmd::Discover { proposition, theta, member_floor, split } => cmd_discover(
            store_path,
            proposition,
            *theta,
            *member_floor,
            *split,
            fmt,
        ),
        Cmd::Resolve { a, b } => cmd_resolve(&load_store(store_path)?, a, b, fmt),
        Cmd::Audit { a, b, kappa_floor, at } => {
            cmd_audit(store_path, a, b, *kappa_floor, at.as_deref(), fmt)
        }
        Cmd::Bench => cmd_bench(fmt),
        Cmd::Loss { missing, preimages } => {
            cmd_loss(&load_store(store_path)?, missing, *preimages, fmt)
        }
        Cmd::Stats => cmd_stats(&load_store(store_path)?, fmt),
    }
}

// -- plumbing ---------------------------------------------------------------

fn load_store(path: &Path) -> Result<Store, CliError> {
    if !path.exists() {
        return Ok(Store::new());
    }
    Store::load(path).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

fn save_store(store: &Store, path: &Path) -> Result<(), CliError> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() && !parent.exists() {
            return Err(CliError::Usage(format!(
                "store path parent {} does not exist",
                parent.display()
            )));
        }
    }
    store
        .save(path)
        .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

fn parse_time(s: &str, what: &str) -> Result<Timestamp, CliError> {
    Timestamp::parse_flex(s)
        .map_err(|_| CliError::Usage(format!("{what} {s:?} is not a timestamp")))
}

fn parse_conf(v: f64, what: &str) -> Result<Confidence, CliError> {
    Confidence::new(v).map_err(|e| CliError::Usage(format!("{what}: {e}")))
}

fn edge_listing(snap: &Snapshot, ids: &BTreeSet<EdgeId>, fmt: Format, header: &str, canon_key: &str) {
    match fmt {
        Format::Table => {
            println!("{header}");
            for id in ids {
                let conf = snap.effective_confidence(id).map(|c| c.value()).unwrap_or(0.0);
                let iv = snap
                    .effective_interval(id)
                    .map(|iv| iv.to_string())
                    .unwrap_or_default();
                println!("  {id}  \u{03ba}={conf:.2}  {iv}");
            }
            println!("{} edge(s)", ids.len());
        }
        Format::Canonical => {
            let obj = Value::Object(vec![
                (
                    "edges".into(),
                    Value::Array(ids.iter().map(|i| Value::str(i.as_str())).collect()),
                ),
                ("query".into(), Value::str(canon_key)),
            ]);
            println!("{}", obj.render());
        }
    }
}

// -- commands ---------------------------------------------------------------

fn cmd_ingest(store_path: &Path, file: &Path, fmt: Format) -> Result<(), CliError> {
    let text = std::fs::read_to_string(file)
        .map_err(|e| CliError::Usage(format!("{}: {e}", file.display())))?;
    let incoming = Store::parse_log(&text)
        .map_err(|e| CliError::Usage(format!("{}: {e}", file.display())))?;
    let mut store = load_store(store_path)?;
    let before = store.last_seq();
    store
        .ingest(&incoming)
        .map_err(|e| CliError::Domain(e.to_string()))?;
    save_store(&store, store_path)?;

    let mut counts: std::collections::BTreeMap<&str, u64> = Default::default();
    for rec in incoming.records() {
        *counts.entry(rec.payload.tag()).or_default() += 1;
    }
    match fmt {
        Format::Table => {
            let summary = if counts.is_empty() {
                "nothing".to_string()
            } else {
                counts
                    .iter()
                    .map(|(tag, n)| format!("{n} {tag}(s)"))
                    .collect::<Vec<_>>()
                    .join(", ")
            };
            println!(
                "ingested {summary} into {} (seq {} -> {})",
                store_path.display(),
                before,
                store.last_seq()
            );
        }
        Format::Canonical => {
            let obj = Value::Object(vec![
                (
                    "counts".into(),
                    Value::Object(
                        counts
                            .iter()
                            .map(|(tag, n)| (tag.to_string(), Value::UInt(*n)))
                            .collect(),
                    ),
                ),
                ("from_seq".into(), Value::UInt(before)),
                ("to_seq".into(), Value::UInt(store.last_seq())),
            ]);
            println!("{}", obj.render());
        }
    }
    Ok(())
}

fn row_canon(row: &BindingRow) -> Value {
    Value::Object(vec![
        (
            "edges".into(),
            Value::Array(row.edges.iter().map(|e| Value::str(e.as_str())).collect()),
        ),
        (
            "vars".into(),
            Value::Object(
                row.vars
                    .iter()
                    .map(|(k, v)| (k.clone(), Value::str(v)))
                    .collect(),
            ),
        ),
    ])
}

fn cmd_query(store: &Store, text: &str, force: bool, fmt: Format) -> Result<(), CliError> {
    let pattern = parse_query(text).map_err(|e| CliError::Usage(e.to_string()))?;
    let snap = store.snapshot();
    let rows = match evaluate(&snap, &pattern) {
        Ok(rows) => rows,
        Err(QueryError::Cyclic { .. }) if force => {
            evaluate_bruteforce(&snap, &pattern).map_err(|e| CliError::Domain(e.to_string()))?
        }
        Err(e @ QueryError::Syntax(_)) => return Err(CliError::Usage(e.to_string())),
        Err(e) => return Err(CliError::Domain(e.to_string())),
    };
    match fmt {
        Format::Table => {
            if rows.is_empty() {
                println!("no matches");
                return Ok(());
            }
            let vars: Vec<&String> = rows[0].vars.keys().collect();
            println!(
                "{}  |  edges",
                vars.iter().map(|v| v.as_str()).collect::<Vec<_>>().join("  ")
            );
            for row in &rows {
                let vals: Vec<&str> = row.vars.values().map(|s| s.as_str()).collect();
                let edges: Vec<&str> = row.edges.iter().map(|e| e.as_str()).collect();
                println!("{}  |  {}", vals.join("  "), edges.join(", "));
            }
            println!("{} binding(s)", rows.len());
        }
        Format::Canonical => {
            let obj = Value::Object(vec![(
                "bindings".into(),
                Value::Array(rows.iter().map(row_canon).collect()),
            )]);
            println!("{}", obj.render());
        }
    }
    Ok(())
}

fn chain_canon(chain: &CausalChain) -> Value {
    Value::Object(vec![
        ("confidence".into(), Value::Real(chain.confidence())),
        (
            "ids".into(),
            Value::Array(chain.ids.iter().map(|i| Value::str(i.as_str())).collect()),
        ),
        (
            "links".into(),
            Value::Array(
                chain
                    .links
                    .iter()
                    .zip(&chain.mechanisms)
                    .map(|(l, m)| {
                        Value::Object(vec![
                            ("context_modifier".into(), Value::Real(l.context_modifier)),
                            ("link_confidence".into(), Value::Real(l.link_confidence)),
                            ("mechanism".into(), Value::str(m)),
                        ])
                    })
                    .collect(),
            ),
        ),
    ])
}

fn render_chain_plain(chain: &CausalChain) -> String {
    let mut out = String::new();
    for (i, id) in chain.ids.iter().enumerate() {
        if i > 0 {
            out.push_str(&format!(" --{}--> ", chain.mechanisms[i - 1]));
        }
        out.push_str(id.as_str());
    }
    out
}

fn render_chain_confident(chain: &CausalChain) -> String {
    let mut out = String::new();
    for (i, id) in chain.ids.iter().enumerate() {
        if i > 0 {
            out.push_str(&format!(" --[{:.2}]--> ", chain.links[i - 1].link_confidence));
        }
        out.push_str(&format!("{}({:.2})", id.as_str(), chain.confidences[i]));
    }
    out
}

fn collect_inhibitions(node: &crate::causal::TraceNode, out: &mut Vec<String>) {
    for inh in &node.inhibited_by {
        out.push(format!(
            "note: {} inhibited by {} ({})",
            node.id, inh.by, inh.mechanism
        ));
    }
    for step in &node.steps {
        collect_inhibitions(&step.node, out);
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_trace(
    store: &Store,
    edge: &str,
    depth: Option<usize>,
    as_of: Option<&str>,
    threshold: Option<f64>,
    confidence: bool,
    forward: bool,
    fmt: Format,
) -> Result<(), CliError> {
    let snap = store.snapshot();
    let opts = TraceOptions {
        depth: depth.unwrap_or(usize::MAX),
        as_of: as_of.map(|s| parse_time(s, "--as-of")).transpose()?,
        threshold,
        direction: if forward { TraceDirection::Effects } else { TraceDirection::Causes },
    };
    let trace: TraceResult = trace_causal_chain(&snap, &EdgeId::new(edge), &opts)
        .map_err(|e| CliError::Domain(e.to_string()))?;
    let chains = trace.chains();
    match fmt {
        Format::Canonical => {
            let obj = Value::Object(vec![
                (
                    "chains".into(),
                    Value::Array(chains.iter().map(chain_canon).collect()),
                ),
                (
                    "direction".into(),
                    Value::str(if forward { "effects" } else { "causes" }),
                ),
                ("target".into(), Value::str(edge)),
            ]);
            println!("{}", obj.render());
        }
        Format::Table => {
            for chain in &chains {
                if confidence {
                    println!("{}", render_chain_confident(chain));
                    println!("Chain confidence: {:.2}", chain.confidence());
                } else {
                    println!("{}", render_chain_plain(chain));
                }
            }
            let mut notes = Vec::new();
            collect_inhibitions(&trace.root, &mut notes);
            for n in notes {
                println!("{n}");
            }
        }
    }
    Ok(())
}

fn cmd_at_time(
    store: &Store,
    time: &str,
    min_confidence: Option<f64>,
    fmt: Format,
) -> Result<(), CliError> {
    let t = parse_time(time, "time")?;
    let floor = min_confidence
        .map(|v| parse_conf(v, "--min-confidence"))
        .transpose()?;
    let snap = store.snapshot();
    let result = at_time_with_floor(&snap, t, floor);
    edge_listing(
        &snap,
        &result.edges,
        fmt,
        &format!("valid at {}:", t.to_rfc3339_micros()),
        &format!("at-time {}", t.to_rfc3339_micros()),
    );
    Ok(())
}

fn cmd_during(store: &Store, start: &str, end: &str, fmt: Format) -> Result<(), CliError> {
    let window = TimeInterval::between(parse_time(start, "start")?, parse_time(end, "end")?)
        .map_err(|e| CliError::Usage(e.to_string()))?;
    let snap = store.snapshot();
    let edges = valid_in_interval(&snap, &window);
    edge_listing(
        &snap,
        &edges,
        fmt,
        &format!("valid during {window}:"),
        &format!("during {window}"),
    );
    Ok(())
}

fn print_partition(node: &PartitionNode, indent: usize) {
    let pad = "  ".repeat(indent);
    println!(
        "{pad}split on {} (gain {:.3} bits)",
        node.attribute, node.gain_bits
    );
    for (key, branch) in &node.branches {
        println!(
            "{pad}  {} = {key}  ->  {} supporting, {} refuting",
            node.attribute, branch.positives, branch.negatives
        );
        if let Some(child) = &branch.child {
            print_partition(child, indent + 2);
        }
    }
}

fn partition_canon(node: &PartitionNode) -> Value {
    Value::Object(vec![
        ("attribute".into(), Value::str(&node.attribute)),
        (
            "branches".into(),
            Value::Object(
                node.branches
                    .iter()
                    .map(|(k, b)| {
                        let mut fields = vec![
                            ("refuting".into(), Value::UInt(b.negatives as u64)),
                            ("supporting".into(), Value::UInt(b.positives as u64)),
                        ];
                        if let Some(child) = &b.child {
                            fields.insert(0, ("child".into(), partition_canon(child)));
                        }
                        (k.to_string(), Value::Object(fields))
                    })
                    .collect(),
            ),
        ),
        ("gain_bits".into(), Value::Real(node.gain_bits)),
    ])
}

fn cmd_discover(
    store_path: &Path,
    proposition: &str,
    theta: f64,
    member_floor: f64,
    split: bool,
    fmt: Format,
) -> Result<(), CliError> {
    let mut store = load_store(store_path)?;
    let snap = store.snapshot();
    let Some(signal) = detect_contradiction_with_floor(&snap, proposition, theta, member_floor)
    else {
        match fmt {
            Format::Table => println!(
                "no contradiction signal for {proposition:?} at theta={theta}"
            ),
            Format::Canonical => println!(
                "{}",
                Value::Object(vec![
                    ("proposition".into(), Value::str(proposition)),
                    ("signal".into(), Value::Bool(false)),
                ])
                .render()
            ),
        }
        return Ok(());
    };
    let discovery: Discovery =
        discover_hidden_context(&snap, &signal).map_err(|e| CliError::Domain(e.to_string()))?;

    match fmt {
        Format::Table => {
            println!(
                "contradiction on {:?}: supports \u{03ba}={:.3} ({} claims) vs refutes \u{03ba}={:.3} ({} claims)",
                signal.proposition,
                signal.supports.accumulated,
                signal.supports.members.len(),
                signal.refutes.accumulated,
                signal.refutes.members.len(),
            );
            if discovery.no_separator {
                println!(
                    "no attribute separates the clusters (gain 0 of {:.3} bits)",
                    discovery.class_entropy_bits
                );
            } else {
                println!(
                    "separating attribute: {} (gain {:.3} of {:.3} bits)",
                    discovery.attribute(),
                    discovery.gain_bits(),
                    discovery.class_entropy_bits
                );
                print_partition(&discovery.root, 0);
            }
        }
        Format::Canonical => {
            let obj = Value::Object(vec![
                ("class_entropy_bits".into(), Value::Real(discovery.class_entropy_bits)),
                ("no_separator".into(), Value::Bool(discovery.no_separator)),
                ("partition".into(), partition_canon(&discovery.root)),
                ("proposition".into(), Value::str(proposition)),
                ("refutes".into(), Value::Real(signal.refutes.accumulated)),
                ("signal".into(), Value::Bool(true)),
                ("supports".into(), Value::Real(signal.supports.accumulated)),
            ]);
            println!("{}", obj.render());
        }
    }

    if split {
        let outcome = split_on_context(&mut store, &signal, &discovery)
            .map_err(|e| CliError::Domain(e.to_string()))?;
        save_store(&store, store_path)?;
        match fmt {
            Format::Table => {
                for edge in [&outcome.supports, &outcome.refutes] {
                    println!(
                        "created {} (\u{03ba}={:.3})",
                        edge.id,
                        edge.confidence.value()
                    );
                }
            }
            Format::Canonical => {
                let obj = Value::Object(vec![(
                    "created".into(),
                    Value::Array(vec![
                        Value::str(outcome.supports.id.as_str()),
                        Value::str(outcome.refutes.id.as_str()),
                    ]),
                )]);
                println!("{}", obj.render());
            }
        }
    }
    Ok(())
}

fn cmd_resolve(store: &Store, a: &str, b: &str, fmt: Format) -> Result<(), CliError> {
    let snap = store.snapshot();
    let resolution: Resolution = resolve(&snap, &EdgeId::new(a), &EdgeId::new(b))
        .map_err(|e| CliError::Domain(e.to_string()))?;
    match fmt {
        Format::Table => {
            for t in &resolution.tiers {
                let outcome = match &t.decided {
                    Some(id) => format!("prefer {id}"),
                    None => "tie".to_string(),
                };
                println!(
                    "tier {:<15} a={}  b={}  ->  {outcome}",
                    t.tier.as_str(),
                    t.a_value,
                    t.b_value
                );
            }
            match &resolution.verdict {
                Verdict::Prefer(id) => println!("verdict: prefer {id}"),
                Verdict::Coexist => println!("verdict: coexist (no tier separates them)"),
            }
        }
        Format::Canonical => {
            let obj = Value::Object(vec![
                ("a".into(), Value::str(a)),
                ("b".into(), Value::str(b)),
                (
                    "tiers".into(),
                    Value::Array(
                        resolution
                            .tiers
                            .iter()
                            .map(|t| {
                                Value::Object(vec![
                                    ("a".into(), Value::str(&t.a_value)),
                                    ("b".into(), Value::str(&t.b_value)),
                                    (
                                        "decided".into(),
                                        match &t.decided {
                                            Some(id) => Value::str(id.as_str()),
                                            None => Value::str(""),
                                        },
                                    ),
                                    ("tier".into(), Value::str(t.tier.as_str())),
                                ])
                            })
                            .collect(),
                    ),
                ),
                (
                    "verdict".into(),
                    match &resolution.verdict {
                        Verdict::Prefer(id) => Value::str(id.as_str()),
                        Verdict::Coexist => Value::str("coexist"),
                    },
                ),
            ]);
            println!("{}", obj.render());
        }
    }
    Ok(())
}

fn cmd_audit(
    store_path: &Path,
    a: &str,
    b: &str,
    kappa_floor: f64,
    at: Option<&str>,
    fmt: Format,
) -> Result<(), CliError> {
    let at = match at {
        Some(s) => parse_time(s, "--at")?,
        None => Timestamp::now(),
    };
    let mut store = load_store(store_path)?;
    let report = causal_audit(&mut store, &EdgeId::new(a), &EdgeId::new(b), kappa_floor, at)
        .map_err(|e| CliError::Domain(e.to_string()))?;
    if !report.explanations.is_empty() {
        save_store(&store, store_path)?;
    }
    match fmt {
        Format::Table => {
            for (label, chain, weak) in [
                ("a", &report.chain_a, &report.weak_a),
                ("b", &report.chain_b, &report.weak_b),
            ] {
                let ids: Vec<&str> = chain.iter().map(|i| i.as_str()).collect();
                println!("chain {label}: {}", ids.join(", "));
                for (id, conf) in weak {
                    println!(
                        "  weak source {id} (\u{03ba}={conf:.2} < floor {kappa_floor:.2})"
                    );
                }
            }
            match &report.recommended {
                Some(id) => println!("recommendation: trust {id}"),
                None => println!("recommendation: none (taint is symmetric)"),
            }
            for id in &report.explanations {
                println!("appended explanation {id}");
            }
        }
        Format::Canonical => {
            let weak = |w: &Vec<(EdgeId, f64)>| {
                Value::Array(
                    w.iter()
                        .map(|(id, c)| {
                            Value::Object(vec![
                                ("confidence".into(), Value::Real(*c)),
                                ("id".into(), Value::str(id.as_str())),
                            ])
                        })
                        .collect(),
                )
            };
            let obj = Value::Object(vec![
                (
                    "explanations".into(),
                    Value::Array(
                        report
                            .explanations
                            .iter()
                            .map(|i| Value::str(i.as_str()))
                            .collect(),
                    ),
                ),
                (
                    "recommended".into(),
                    match &report.recommended {
                        Some(id) => Value::str(id.as_str()),
                        None => Value::str(""),
                    },
                ),
                ("weak_a".into(), weak(&report.weak_a)),
                ("weak_b".into(), weak(&report.weak_b)),
            ]);
            println!("{}", obj.render());
        }
    }
    Ok(())
}

fn cmd_bench(fmt: Format) -> Result<(), CliError> {
    let store = crate::fixtures::benchmark_store();
    let results = run_benchmark_suite(&store).map_err(|e| CliError::Domain(e.to_string()))?;
    let mut all_passed = true;
    match fmt {
        Format::Table => {
            for r in &results {
                all_passed &= r.passed;
                println!(
                    "{}  {}  {} — {}",
                    r.name,
                    if r.passed { "PASS" } else { "FAIL" },
                    r.description,
                    r.detail
                );
            }
            println!(
                "{}/{} benchmark queries passed",
                results.iter().filter(|r| r.passed).count(),
                results.len()
            );
        }
        Format::Canonical => {
            let obj = Value::Object(vec![(
                "results".into(),
                Value::Array(
                    results
                        .iter()
                        .map(|r| {
                            all_passed &= r.passed;
                            let mut fields = vec![
                                (
                                    "edges".into(),
                                    Value::Array(
                                        r.edges.iter().map(|e| Value::str(e.as_str())).collect(),
                                    ),
                                ),
                                ("name".into(), Value::str(r.name)),
                                ("passed".into(), Value::Bool(r.passed)),
                            ];
                            if let Some(v) = r.value {
                                fields.push(("value".into(), Value::Real(v)));
                            }
                            Value::Object(fields)
                        })
                        .collect(),
                ),
            )]);
            println!("{}", obj.render());
        }
    }
    if all_passed {
        Ok(())
    } else {
        Err(CliError::Domain("benchmark suite has failures".into()))
    }
}

fn cmd_loss(
    store: &Store,
    missing: &[String],
    preimages: bool,
    fmt: Format,
) -> Result<(), CliError> {
    let snap = store.snapshot();
    let report = ambiguity_bound(&snap);
    let pillars: BTreeSet<Pillar> = missing
        .iter()
        .map(|s| s.parse().map_err(CliError::Usage))
        .collect::<Result<_, _>>()?;
    let gap = (!pillars.is_empty()).then(|| expressiveness_gap(&snap, &pillars));
    let preimage_count = if preimages {
        let g = project_binary(&snap);
        Some(
            count_preimages(&g, 6).map_err(|e| CliError::Domain(e.to_string()))?,
        )
    } else {
        None
    };
    match fmt {
        Format::Table => {
            println!(
                "edges: {}, average arity: {:.2}",
                report.per_edge_bits.len(),
                report.avg_arity
            );
            println!(
                "exact ambiguity: {} bits; average-arity bound: {:.2} bits",
                report.total_bits, report.theorem_bound_bits
            );
            println!("edge-identity: {:.2} bits", report.edge_identity_bits);
            println!(
                "components (MDL proxy): structural={} temporal={} confidence={} causal={}",
                report.components.structural,
                report.components.temporal,
                report.components.confidence,
                report.components.causal
            );
            if let Some(gap) = &gap {
                let names: Vec<&str> = gap.missing.iter().map(|p| p.as_str()).collect();
                println!("missing {{{}}}: {} bits", names.join(", "), gap.missing_bits);
            }
            if let Some(n) = preimage_count {
                println!("projection preimages: {n}");
            }
        }
        Format::Canonical => {
            // LossReport::to_canonical is the scripting contract; the
            // optional sections ride alongside on separate lines.
            println!("{}", report.to_canonical());
            if let Some(gap) = &gap {
                println!(
                    "{}",
                    Value::Object(vec![
                        (
                            "missing".into(),
                            Value::Array(
                                gap.missing.iter().map(|p| Value::str(p.as_str())).collect()
                            ),
                        ),
                        ("missing_bits".into(), Value::UInt(gap.missing_bits)),
                    ])
                    .render()
                );
            }
            if let Some(n) = preimage_count {
                println!(
                    "{}",
                    Value::Object(vec![("preimages".into(), Value::UInt(n))]).render()
                );
            }
        }
    }
    Ok(())
}

fn cmd_stats(store: &Store, fmt: Format) -> Result<(), CliError> {
    let snap = store.snapshot();
    let assessments: usize = snap
        .edge_ids()
        .map(|id| snap.assessments(id).len())
        .sum();
    let propositions = snap.propositions().count();
    match fmt {
        Format::Table => {
            println!("events:        {}", store.records().len());
            println!("vertices:      {}", snap.vertex_count());
            println!("hyperedges:    {}", snap.edge_count());
            println!("causal links:  {}", snap.links().len());
            println!("context rules: {}", snap.rules().len());
            println!("assessments:   {assessments}");
            println!("propositions:  {propositions}");
        }
        Format::Canonical => {
            let obj = Value::Object(vec![
                ("assessments".into(), Value::UInt(assessments as u64)),
                ("edges".into(), Value::UInt(snap.edge_count() as u64)),
                ("events".into(), Value::UInt(store.records().len() as u64)),
                ("links".into(), Value::UInt(snap.links().len() as u64)),
                ("propositions".into(), Value::UInt(propositions as u64)),
                ("rules".into(), Value::UInt(snap.rules().len() as u64)),
                ("vertices".into(), Value::UInt(snap.vertex_count() as u64)),
            ]);
            println!("{}", obj.render());
        }
    }
    Ok(())
}
