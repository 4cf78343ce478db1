//! `markov`: command-line front end for Markov fractions, companions,
//! approximation constants, triangle paths and McShane sums.
//!
//! Exit codes: 0 success, 2 usage or parse error, 3 domain error.

use std::io::{self, Write};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use markov_core::approximation::{
    c_constant_bruteforce, c_constant_bruteforce_parallel, classify, BestApproximation,
};
use markov_core::companions::{interval, CompanionRef, Side};
use markov_core::eisenstein::{bent_path, label_path, segment_path};
use markov_core::forest::{
    audit_uniqueness, enumerate_forest, enumerate_forest_parallel, mu, ForestLimit, ForestNode,
};
use markov_core::identities::mcshane_partial_sum;
use markov_core::records::{
    ClassificationRecord, CompanionRecord, McShaneRecord, StripRecord, TripleRecord,
};
use markov_core::Rational;
use num_bigint::BigInt;
use serde_json::{json, Value};

#[derive(Parser)]
#[command(
    name = "markov",
    version,
    about = "Markov fractions, companions and approximation constants"
)]
struct Cli {
    /// Output format; `tree` is plain text, indented for `forest`.
    #[arg(long, value_enum, global = true, default_value_t = Format::Text)]
    format: Format,
    /// Digits after the point in decimal previews.
    #[arg(long, global = true, default_value_t = 10)]
    digits: usize,
    /// Worker threads for enumerations that can run in parallel.
    #[arg(long, global = true, default_value_t = 1, value_parser = clap::value_parser!(u16).range(1..))]
    jobs: u16,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    #[value(alias = "tree")]
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Centered triples of the forest over [n, n+1].
    Forest {
        #[arg(long, default_value = "0", allow_hyphen_values = true)]
        interval: BigInt,
        #[command(flatten)]
        limit: LimitArgs,
    },
    /// Markov fraction, companion, or neither; with the exact constant.
    Classify {
        #[arg(allow_hyphen_values = true)]
        x: Rational,
        /// Cross-check against the brute-force minimum.
        #[arg(long)]
        oracle: bool,
    },
    /// Companions of a Markov fraction and the limit they approach.
    Companions {
        #[arg(allow_hyphen_values = true)]
        base: Rational,
        #[arg(long, default_value_t = 5)]
        count: u32,
        #[arg(long, value_enum, default_value_t = SideArg::R)]
        side: SideArg,
    },
    /// The forest labeling: label n/m (or inf) to its Markov fraction.
    Mu {
        #[arg(allow_hyphen_values = true)]
        label: Rational,
    },
    /// Labeled triangle strip along the segment from 0 to m + n·ω.
    Snake {
        m: i64,
        n: i64,
        /// Companion index; bends the segment.
        #[arg(long, requires = "side")]
        k: Option<i64>,
        #[arg(long, value_enum, requires = "k")]
        side: Option<SideArg>,
    },
    /// Enclosure of the McShane partial sum over [0, 3).
    Mcshane {
        #[arg(long, default_value_t = 8)]
        depth: usize,
        #[arg(long, default_value_t = 64)]
        bits: u32,
    },
    /// Markov fractions in [0, 1/2] grouped by denominator.
    Audit {
        #[arg(long = "max-den")]
        max_den: BigInt,
    },
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct LimitArgs {
    #[arg(long = "max-den")]
    max_den: Option<BigInt>,
    #[arg(long = "max-depth")]
    max_depth: Option<usize>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SideArg {
    #[value(name = "L")]
    L,
    #[value(name = "R")]
    R,
    Both,
}

impl SideArg {
    fn sides(self) -> Vec<Side> {
        match self {
            SideArg::L => vec![Side::Left],
            SideArg::R => vec![Side::Right],
            SideArg::Both => vec![Side::Left, Side::Right],
        }
    }
}

/// One command's result in all three renderings.
struct Report {
    json: Value,
    header: Vec<&'static str>,
    rows: Vec<Vec<String>>,
    text: String,
}

#[derive(Debug)]
enum Failure {
    Domain(String),
    Io(io::Error),
}

impl From<markov_core::Error> for Failure {
    fn from(e: markov_core::Error) -> Self {
        Failure::Domain(e.to_string())
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

impl From<csv::Error> for Failure {
    fn from(e: csv::Error) -> Self {
        Failure::Io(io::Error::other(e))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    // a second build only fails if a pool exists already, which cannot happen here
    let _ = rayon::ThreadPoolBuilder::new()
        .num_threads(usize::from(cli.jobs))
        .build_global();
    let echo: Vec<String> = std::env::args().skip(1).collect();
    match run(&cli).and_then(|report| emit(&cli, &echo.join(" "), report)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Domain(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
        Err(Failure::Io(e)) if e.kind() == io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
        Err(Failure::Io(e)) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

fn run(cli: &Cli) -> Result<Report, Failure> {
    let digits = cli.digits;
    match &cli.command {
        Command::Forest { interval, limit } => {
            let limit = match (&limit.max_den, limit.max_depth) {
                (Some(q), None) => ForestLimit::MaxDenominator(q.clone()),
                (None, Some(d)) => ForestLimit::MaxDepth(d),
                _ => unreachable!("clap enforces exactly one limit"),
            };
            let nodes: Vec<ForestNode> = if cli.jobs > 1 {
                enumerate_forest_parallel(interval.clone(), limit)
            } else {
                enumerate_forest(interval.clone(), limit).collect()
            };
            Ok(forest_report(&nodes, digits))
        }
        Command::Classify { x, oracle } => classify_report(x, *oracle, cli.jobs > 1, digits),
        Command::Companions { base, count, side } => companions_report(base, *count, *side, digits),
        Command::Mu { label } => {
            let value = mu(label)?;
            let preview = value.to_decimal(digits);
            Ok(Report {
                json: json!({ "label": label.to_string(), "value": value.to_string(), "preview": preview }),
                header: vec!["label", "value", "preview"],
                rows: vec![vec![label.to_string(), value.to_string(), preview.clone()]],
                text: format!("mu({label}) = {value}  {preview}\n"),
            })
        }
        Command::Snake { m, n, k, side } => {
            let path = match (k, side) {
                (Some(k), Some(SideArg::L)) => bent_path(*m, *n, *k, Side::Left)?,
                (Some(k), Some(SideArg::R)) => bent_path(*m, *n, *k, Side::Right)?,
                (Some(_), Some(SideArg::Both)) => {
                    return Err(Failure::Domain(
                        "a bent path takes a single side, L or R".into(),
                    ))
                }
                _ => segment_path(*m, *n)?,
            };
            let strip = label_path(&path)?;
            Ok(snake_report(&StripRecord::new(&path, &strip)))
        }
        Command::Mcshane { depth, bits } => {
            let rec = McShaneRecord::new(&mcshane_partial_sum(*depth, *bits)?, digits);
            Ok(Report {
                header: vec![
                    "depth",
                    "bits",
                    "terms",
                    "lo",
                    "hi",
                    "lo_preview",
                    "hi_preview",
                ],
                rows: vec![vec![
                    rec.depth.to_string(),
                    rec.bits.to_string(),
                    rec.terms.to_string(),
                    rec.lo.exact.clone(),
                    rec.hi.exact.clone(),
                    rec.lo.preview.clone(),
                    rec.hi.preview.clone(),
                ]],
                text: format!(
                    "depth {} ({} terms, {} bits): [{}, {}]\n",
                    rec.depth, rec.terms, rec.bits, rec.lo.preview, rec.hi.preview
                ),
                json: serde_json::to_value(&rec).expect("records serialize"),
            })
        }
        Command::Audit { max_den } => {
            let report = audit_uniqueness(max_den);
            let dups: Vec<String> = report.duplicates().iter().map(|q| q.to_string()).collect();
            let mut rows = Vec::new();
            let mut text = String::new();
            let mut groups = Vec::new();
            for (q, xs) in &report.by_denominator {
                let xs: Vec<String> = xs.iter().map(|x| x.to_string()).collect();
                text.push_str(&format!("{q:>12}  {}\n", xs.join(" ")));
                for x in &xs {
                    rows.push(vec![q.to_string(), x.clone()]);
                }
                groups.push(json!({ "denominator": q.to_string(), "fractions": xs }));
            }
            text.push_str(&if dups.is_empty() {
                format!("{} denominators, each carries one fraction\n", groups.len())
            } else {
                format!("shared denominators: {}\n", dups.join(" "))
            });
            Ok(Report {
                json: json!({ "bound": max_den.to_string(), "denominators": groups, "duplicates": dups }),
                header: vec!["denominator", "fraction"],
                rows,
                text,
            })
        }
    }
}

fn forest_report(nodes: &[ForestNode], digits: usize) -> Report {
    let records: Vec<TripleRecord> = nodes.iter().map(TripleRecord::from).collect();
    let previews: Vec<String> = nodes
        .iter()
        .map(|n| n.triple.x2().to_decimal(digits))
        .collect();
    let rows = records
        .iter()
        .zip(&previews)
        .map(|(r, p)| {
            vec![
                r.n.clone(),
                r.path.clone(),
                r.depth.to_string(),
                r.x1.clone(),
                r.x2.clone(),
                r.x3.clone(),
                r.q1.clone(),
                r.q2.clone(),
                r.q3.clone(),
                p.clone(),
            ]
        })
        .collect();
    // largest first, indented by depth, the in-order layout of a drawn tree
    let mut order: Vec<usize> = (0..nodes.len()).collect();
    order.sort_by(|&a, &b| nodes[b].triple.x2().cmp(nodes[a].triple.x2()));
    let width = order
        .iter()
        .map(|&i| 2 * nodes[i].path.depth() + records[i].x2.len())
        .max()
        .unwrap_or(0);
    let mut text = String::new();
    for i in order {
        let cell = format!("{}{}", "  ".repeat(nodes[i].path.depth()), records[i].x2);
        text.push_str(&format!("{cell:<width$}    {}\n", previews[i]));
    }
    let json = records
        .iter()
        .zip(&previews)
        .map(|(r, p)| {
            let mut v = serde_json::to_value(r).expect("records serialize");
            v["preview"] = json!(p);
            v
        })
        .collect();
    Report {
        json: Value::Array(json),
        header: vec![
            "n", "path", "depth", "x1", "x2", "x3", "q1", "q2", "q3", "preview",
        ],
        rows,
        text,
    }
}

fn classify_report(
    x: &Rational,
    oracle: bool,
    parallel: bool,
    digits: usize,
) -> Result<Report, Failure> {
    let class = classify(x)?;
    let rec = ClassificationRecord::new(x, &class, digits);
    let mut json = serde_json::to_value(&rec).expect("records serialize");
    let mut text = format!(
        "{}: {}\n  C = {}  {}\n  best approximants: {}\n",
        rec.y,
        rec.tag,
        rec.constant,
        rec.preview,
        rec.argmins.join(" ")
    );
    if let Some(w) = &rec.witness {
        text.push_str(&format!("  witness: {w}\n"));
    }
    let mut row = vec![
        rec.y.clone(),
        rec.tag.clone(),
        rec.constant.clone(),
        rec.preview.clone(),
        rec.argmins.join(" "),
        rec.witness.clone().unwrap_or_default(),
    ];
    let mut header = vec!["y", "tag", "constant", "preview", "argmins", "witness"];
    if oracle {
        let brute: BestApproximation = if parallel {
            c_constant_bruteforce_parallel(x)?
        } else {
            c_constant_bruteforce(x)?
        };
        let agrees = brute == class.best_approximation();
        let argmins: Vec<String> = brute.argmins.iter().map(|a| a.to_string()).collect();
        json["oracle"] =
            json!({ "constant": brute.constant.to_string(), "argmins": argmins, "agrees": agrees });
        text.push_str(&format!(
            "  oracle: C = {}, {} ({})\n",
            brute.constant,
            argmins.join(" "),
            if agrees { "agrees" } else { "DISAGREES" }
        ));
        header.extend(["oracle_constant", "oracle_agrees"]);
        row.extend([brute.constant.to_string(), agrees.to_string()]);
        if !agrees {
            // emit nothing partial: a disagreement is a domain failure
            return Err(Failure::Domain(format!(
                "oracle disagrees at {x}: {}",
                text.trim_end()
            )));
        }
    }
    Ok(Report {
        json,
        header,
        rows: vec![row],
        text,
    })
}

fn companions_report(
    base: &Rational,
    count: u32,
    side: SideArg,
    digits: usize,
) -> Result<Report, Failure> {
    let iv = interval(base)?;
    let mut records = Vec::new();
    let mut limits = Vec::new();
    for s in side.sides() {
        for k in 2..=count + 1 {
            records.push(CompanionRecord::new(
                &CompanionRef::new(base.clone(), s, k)?,
                digits,
            ));
        }
        let limit = if s == Side::Right { &iv.hi } else { &iv.lo };
        limits.push((s, limit.to_string(), limit.to_decimal(digits)));
    }
    let mut text = String::new();
    let mut rows = Vec::new();
    for (s, limit, preview) in &limits {
        let vals: Vec<&str> = records
            .iter()
            .filter(|r| r.side == *s)
            .map(|r| r.value.as_str())
            .collect();
        text.push_str(&format!(
            "{s}: {}  -> {limit}  {preview}\n",
            vals.join(", ")
        ));
    }
    for r in &records {
        rows.push(vec![
            r.base.clone(),
            r.side.to_string(),
            r.k.to_string(),
            r.value.clone(),
            r.constant.clone(),
            r.preview.clone(),
        ]);
    }
    let limits_json: Vec<Value> = limits
        .iter()
        .map(|(s, l, p)| json!({ "side": s, "limit": l, "preview": p }))
        .collect();
    Ok(Report {
        json: json!({ "base": base.to_string(), "companions": records, "limits": limits_json }),
        header: vec!["base", "side", "k", "value", "constant", "preview"],
        rows,
        text,
    })
}

fn snake_report(rec: &StripRecord) -> Report {
    let mut text = format!(
        "end ({}, {}): terminal label {}\n",
        rec.end.m, rec.end.n, rec.terminal
    );
    text.push_str(&format!(
        "{} triangles, {} Farey differences\n",
        rec.triangles.len(),
        rec.differences
    ));
    for l in &rec.labels {
        text.push_str(&format!(
            "  ({:>3}, {:>3})  {}\n",
            l.vertex.m, l.vertex.n, l.label
        ));
    }
    Report {
        json: serde_json::to_value(rec).expect("records serialize"),
        header: vec!["m", "n", "label"],
        rows: rec
            .labels
            .iter()
            .map(|l| {
                vec![
                    l.vertex.m.to_string(),
                    l.vertex.n.to_string(),
                    l.label.clone(),
                ]
            })
            .collect(),
        text,
    }
}

fn emit(cli: &Cli, echo: &str, report: Report) -> Result<(), Failure> {
    let stdout = io::stdout();
    let mut out = stdout.lock();
    match cli.format {
        Format::Json => {
            let doc = json!({ "command": echo, "result": report.json });
            serde_json::to_writer_pretty(&mut out, &doc).map_err(io::Error::other)?;
            writeln!(out)?;
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record(&report.header)?;
            for row in &report.rows {
                w.write_record(row)?;
            }
            w.flush()?;
        }
        Format::Text => out.write_all(report.text.as_bytes())?,
    }
    Ok(())
}
