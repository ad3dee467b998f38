use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use mcg_core::{
    bound_check, derive_all, dicyclic_exists, enumerate_meta, lift_to_split, lifts, query_pair,
    validate_meta_literal, validate_meta_oracle, ClassifyOptions, CyclicDataSet, CyclicVerdict,
    EquivalenceMode, MetacyclicDataSet, MetacyclicGroup, SearchBounds, ValidationReport, Verdict, SCHEMA,
};

#[derive(Parser, Debug)]
#[command(name = "mcg", version, about = "Metacyclic actions on surfaces: validation, derivation, classification")]
struct Cli {
    /// Output format.
    #[arg(long, short, value_enum, global = true, default_value_t = Format::Text)]
    format: Format,
    /// Write the report here instead of stdout.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
    /// Worker threads (default: available parallelism).
    #[arg(long, global = true, env = "MCG_WORKERS")]
    workers: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Literal,
    Oracle,
    Both,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum EquivalenceArg {
    PerPair,
    GlobalA,
}

/// A data set given inline, as a file path, or `-` for stdin.
#[derive(Args, Debug)]
#[group(required = false, multiple = false)]
struct Input {
    /// Metacyclic data set, e.g. "((2·12,6,-1),1;[(0,1),(1,6),6])".
    #[arg(long)]
    meta: Option<String>,
    /// Cyclic data set, e.g. "(12,1;(1,6),(5,6))".
    #[arg(long)]
    cyclic: Option<String>,
    /// Either kind, told apart by its brackets.
    data: Option<String>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check a cyclic or metacyclic data set.
    Validate {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_enum, default_value_t = MethodArg::Both)]
        method: MethodArg,
        /// Passes through the entries searched by the literal check (default u·n).
        #[arg(long)]
        v_max: Option<u32>,
    },
    /// Cyclic factors D_F, D_G and the quotient D_Gbar of a metacyclic data set.
    Derive {
        /// Metacyclic data set, file, or `-`.
        #[arg(long)]
        meta: Option<String>,
        #[arg(conflicts_with = "meta")]
        data: Option<String>,
    },
    /// Weak conjugacy classes of metacyclic actions of one genus.
    Classify {
        #[arg(long)]
        genus: u64,
        #[arg(long)]
        nonsplit: bool,
        /// Leave out generalized quaternion groups.
        #[arg(long)]
        exclude_quaternion: bool,
        /// Largest group order (default 4g with --nonsplit, else 84(g-1)).
        #[arg(long)]
        max_order: Option<u32>,
        #[arg(long, value_enum, default_value_t = EquivalenceArg::PerPair)]
        equivalence: EquivalenceArg,
        /// Keep every presentation instead of one per isomorphism type.
        #[arg(long)]
        all_presentations: bool,
    },
    /// A data set of M(u,n,r,k) with the given cyclic factors.
    QueryPair {
        #[arg(long)]
        df: String,
        #[arg(long)]
        dg: String,
        #[arg(long)]
        u: u32,
        #[arg(long)]
        r: u32,
        #[arg(long, allow_hyphen_values = true)]
        k: i64,
    },
    /// Whether D_F (degree 2n) extends to a Dic_n action.
    Dicyclic {
        #[arg(long)]
        df: String,
    },
    /// Lift of a non-split action to a split one under a cyclic cover.
    Lift {
        #[arg(long)]
        meta: Option<String>,
        #[arg(conflicts_with = "meta")]
        data: Option<String>,
        /// List every lift instead of the first.
        #[arg(long)]
        all: bool,
    },
    /// Largest non-split group acting, against the 4g bound.
    Bound {
        #[arg(long)]
        genus: u64,
        /// Check every genus from --genus up to this one.
        #[arg(long)]
        to: Option<u64>,
    },
}

/// Text and exit status of one run.
struct Outcome {
    body: String,
    success: bool,
}

impl Outcome {
    fn new(body: String, success: bool) -> Self {
        Outcome { body, success }
    }
}

fn read_source(arg: Option<&str>) -> anyhow::Result<String> {
    match arg {
        None | Some("-") => {
            let mut s = String::new();
            io::stdin().read_to_string(&mut s).context("reading stdin")?;
            Ok(s)
        }
        Some(a) if Path::new(a).is_file() => fs::read_to_string(a).with_context(|| format!("reading {a}")),
        Some(a) => Ok(a.to_string()),
    }
}

fn parse_meta(src: &str) -> anyhow::Result<MetacyclicDataSet> {
    let src = src.trim();
    if src.starts_with('{') {
        return serde_json::from_str(src).context("reading metacyclic data set JSON");
    }
    Ok(MetacyclicDataSet::parse(src)?)
}

fn parse_cyclic(src: &str) -> anyhow::Result<CyclicDataSet> {
    let src = src.trim();
    if src.starts_with('{') {
        return serde_json::from_str(src).context("reading cyclic data set JSON");
    }
    Ok(CyclicDataSet::parse(src)?)
}

fn to_json(v: serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(&v).expect("json values serialize");
    s.push('\n');
    s
}

fn no_csv(command: &str, format: Format) -> anyhow::Result<()> {
    if format == Format::Csv {
        bail!("csv output is only available for classify");
    }
    let _ = command;
    Ok(())
}

fn report_line(r: &ValidationReport) -> String {
    let mut s = format!("{:?}: {}", r.method, verdict_word(r.verdict));
    if let Some(g) = r.genus {
        s.push_str(&format!(", genus {g}"));
    }
    if let Some(c) = r.failed_condition {
        s.push_str(&format!(", condition {c}"));
    }
    if !r.detail.is_empty() {
        s.push_str(&format!(" ({})", r.detail));
    }
    s.to_lowercase()
}

fn verdict_word(v: Verdict) -> &'static str {
    match v {
        Verdict::Valid => "valid",
        Verdict::Invalid => "invalid",
        Verdict::Indeterminate => "indeterminate",
    }
}

fn validate(input: &Input, method: MethodArg, v_max: Option<u32>, format: Format) -> anyhow::Result<Outcome> {
    no_csv("validate", format)?;
    if let Some(c) = &input.cyclic {
        let d = parse_cyclic(&read_source(Some(c))?)?;
        return validate_cyclic(&d, format);
    }
    let src = read_source(input.meta.as_deref().or(input.data.as_deref()))?;
    // Without a flag the kind is guessed: only metacyclic data sets have `[`.
    if input.meta.is_none() && !src.contains('[') && !src.contains("triples") {
        return validate_cyclic(&parse_cyclic(&src)?, format);
    }
    let d = parse_meta(&src)?;
    let bounds = SearchBounds { v_max };
    let mut reports = Vec::new();
    if matches!(method, MethodArg::Literal | MethodArg::Both) {
        reports.push(validate_meta_literal(&d, bounds));
    }
    if matches!(method, MethodArg::Oracle | MethodArg::Both) {
        reports.push(validate_meta_oracle(&d));
    }
    let valid = reports.iter().all(|r| r.is_valid());
    let body = match format {
        Format::Json => to_json(json!({
            "schema": SCHEMA,
            "kind": "metacyclic",
            "data_set": d.to_string(),
            "valid": valid,
            "reports": reports,
        })),
        _ => {
            let mut s = format!("{d}\nverdict: {}\n", if valid { "valid" } else { "invalid" });
            if let Some(g) = reports.iter().find_map(|r| r.genus) {
                s.push_str(&format!("genus: {g}\n"));
            }
            for r in &reports {
                s.push_str(&report_line(r));
                s.push('\n');
            }
            if reports.len() == 2 && reports[0].verdict != reports[1].verdict {
                s.push_str("warning: the literal and oracle checks disagree\n");
            }
            s
        }
    };
    Ok(Outcome::new(body, valid))
}

fn validate_cyclic(d: &CyclicDataSet, format: Format) -> anyhow::Result<Outcome> {
    let verdict = d.validate()?;
    let body = match format {
        Format::Json => to_json(json!({
            "schema": SCHEMA,
            "kind": "cyclic",
            "data_set": d.to_string(),
            "result": verdict,
        })),
        _ => match &verdict {
            CyclicVerdict::Valid { genus } => format!("{d}\nverdict: valid\ngenus: {genus}\n"),
            CyclicVerdict::Invalid { failed_condition, detail } => {
                format!("{d}\nverdict: invalid\ncondition {failed_condition}: {detail}\n")
            }
        },
    };
    Ok(Outcome::new(body, verdict.is_valid()))
}

fn derive(meta: Option<&str>, format: Format) -> anyhow::Result<Outcome> {
    no_csv("derive", format)?;
    let d = parse_meta(&read_source(meta)?)?;
    let x = derive_all(&d, &MetacyclicGroup::new(d.params))?;
    let body = match format {
        Format::Json => to_json(json!({
            "schema": SCHEMA,
            "data_set": d.to_string(),
            "d_f": x.df,
            "d_g": x.dg,
            "d_gbar": x.dgbar,
            "text": { "d_f": x.df.to_string(), "d_g": x.dg.to_string(), "d_gbar": x.dgbar.to_string() },
            "notes": x.notes,
        })),
        _ => {
            let mut s = format!("[{};{}]\nD_F: {}\nD_G: {}\nD_Gbar: {}\n", x.dg, x.df, x.df, x.dg, x.dgbar);
            for n in &x.notes {
                s.push_str(&format!("note: {n}\n"));
            }
            s
        }
    };
    Ok(Outcome::new(body, true))
}

fn classify(opts: ClassifyOptions, genus: u64, format: Format) -> anyhow::Result<Outcome> {
    let table = enumerate_meta(genus, &opts)?;
    let body = match format {
        Format::Text => table.to_text(),
        Format::Json => to_json(table.to_json()),
        Format::Csv => table.to_csv()?,
    };
    Ok(Outcome::new(body, true))
}

fn run(cli: &Cli) -> anyhow::Result<Outcome> {
    let format = cli.format;
    match &cli.command {
        Command::Validate { input, method, v_max } => validate(input, *method, *v_max, format),
        Command::Derive { meta, data } => derive(meta.as_deref().or(data.as_deref()), format),
        Command::Classify { genus, nonsplit, exclude_quaternion, max_order, equivalence, all_presentations } => {
            let opts = ClassifyOptions {
                nonsplit: *nonsplit,
                exclude_quaternion: *exclude_quaternion,
                max_order: *max_order,
                dedupe_isomorphic: !all_presentations,
                equivalence: match equivalence {
                    EquivalenceArg::PerPair => EquivalenceMode::PerPair,
                    EquivalenceArg::GlobalA => EquivalenceMode::GlobalA,
                },
            };
            classify(opts, *genus, format)
        }
        Command::QueryPair { df, dg, u, r, k } => {
            no_csv("query-pair", format)?;
            let df = parse_cyclic(&read_source(Some(df))?)?;
            let dg = parse_cyclic(&read_source(Some(dg))?)?;
            let found = query_pair(&df, &dg, *u, *r, *k)?;
            let body = match format {
                Format::Json => to_json(json!({
                    "schema": SCHEMA,
                    "exists": found.is_some(),
                    "data_set": found.as_ref().map(|d| d.to_string()),
                    "data": found,
                })),
                _ => match &found {
                    Some(d) => format!("exists: {d}\n"),
                    None => "none\n".to_string(),
                },
            };
            Ok(Outcome::new(body, found.is_some()))
        }
        Command::Dicyclic { df } => {
            no_csv("dicyclic", format)?;
            let df = parse_cyclic(&read_source(Some(df))?)?;
            let r = dicyclic_exists(&df)?;
            let body = match format {
                Format::Json => to_json(json!({
                    "schema": SCHEMA,
                    "d_f": df.to_string(),
                    "exists": r.exists(),
                    "clause": r.clause.map(|c| c.to_string()),
                    "witness": r.witness.as_ref().map(|w| w.to_string()),
                    "decision": r,
                })),
                _ => match (&r.clause, &r.witness) {
                    (Some(c), Some(w)) => {
                        let check = if r.witness_matches { "valid, D_F matches" } else { "CHECK FAILED" };
                        format!("exists: clause {c}\nwitness: {w} ({check})\n")
                    }
                    _ if r.form.is_none() => "none: cones do not pair off as (c,m), (-c,m)\n".to_string(),
                    _ => "none: no clause applies\n".to_string(),
                },
            };
            Ok(Outcome::new(body, r.exists()))
        }
        Command::Lift { meta, data, all } => {
            no_csv("lift", format)?;
            let d = parse_meta(&read_source(meta.as_deref().or(data.as_deref()))?)?;
            let found = if *all { lifts(&d)? } else { lift_to_split(&d)?.into_iter().collect() };
            let mut rows = Vec::new();
            for l in &found {
                let x = derive_all(&l.lifted, &MetacyclicGroup::new(l.lifted.params))?;
                rows.push((l, x));
            }
            let body = match format {
                Format::Json => to_json(json!({
                    "schema": SCHEMA,
                    "data_set": d.to_string(),
                    "lifts": rows.iter().map(|(l, x)| json!({
                        "nu": l.nu,
                        "genus": l.genus,
                        "shifts": l.shifts,
                        "data_set": l.lifted.to_string(),
                        "data": l.lifted,
                        "d_f": x.df.to_string(),
                        "d_g": x.dg.to_string(),
                    })).collect::<Vec<_>>(),
                })),
                _ => {
                    if rows.is_empty() {
                        "no lift\n".to_string()
                    } else {
                        let mut s = String::new();
                        for (l, x) in &rows {
                            s.push_str(&format!(
                                "nu = {}, genus {}, shifts {:?}\n{}\n[{};{}]\n",
                                l.nu, l.genus, l.shifts, l.lifted, x.dg, x.df
                            ));
                        }
                        s
                    }
                }
            };
            Ok(Outcome::new(body, !found.is_empty()))
        }
        Command::Bound { genus, to } => {
            no_csv("bound", format)?;
            let last = to.unwrap_or(*genus);
            let mut reports = Vec::new();
            for g in *genus..=last {
                reports.push(bound_check(g)?);
            }
            let holds = reports.iter().all(|r| r.holds());
            let body = match format {
                Format::Json => to_json(json!({
                    "schema": SCHEMA,
                    "holds": holds,
                    "reports": reports.iter().map(|r| {
                        let mut v = serde_json::to_value(r).expect("reports serialize");
                        v["holds"] = json!(r.holds());
                        v
                    }).collect::<Vec<_>>(),
                })),
                _ => reports.iter().map(|r| r.to_text()).collect(),
            };
            Ok(Outcome::new(body, holds))
        }
    }
}

fn emit(cli: &Cli, body: &str) -> anyhow::Result<()> {
    match &cli.output {
        Some(p) => fs::write(p, body).with_context(|| format!("writing {}", p.display())),
        None => {
            let mut out = io::stdout().lock();
            out.write_all(body.as_bytes())?;
            out.flush()?;
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    env_logger::init();
    let cli = Cli::parse();
    if let Some(n) = cli.workers {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            log::warn!("could not size the worker pool: {e}");
        }
    }
    match run(&cli).and_then(|o| emit(&cli, &o.body).map(|_| o.success)) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
