//! Command-line front end: analyze single groups, sweep a corpus, list the
//! built-in catalog.

use std::collections::BTreeMap;
use std::fs::{self, File};
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{Map, Value};

use nacent::classify::{analyze, VerificationReport};
use nacent::corpus::{build, builtin_catalog, global_order_guard, GroupSpec};
use nacent::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VIOLATION: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Record fields shared by the JSON and CSV outputs, in column order.
pub const RECORD_FIELDS: [&str; 13] = [
    "group_id",
    "order",
    "center_order",
    "cent_count",
    "nacent_count",
    "category",
    "case",
    "case_data",
    "consequences",
    "consequence_detail",
    "iff",
    "partition",
    "violations",
];

#[derive(Parser, Debug)]
#[command(
    name = "nacent",
    version,
    about = "Centralizer classification of finite groups"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Report on each group given as a constructor spec or a group file.
    Analyze {
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(required = true)]
        inputs: Vec<String>,
    },
    /// Check the classification and its consequences across a corpus.
    Verify {
        #[arg(long, default_value_t = 200)]
        max_order: usize,
        #[arg(long, default_value_t = 1)]
        parallelism: usize,
        /// Directory of extra group files, added to the built-in catalog.
        #[arg(long)]
        corpus: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// List the built-in catalog.
    Catalog {
        #[arg(long, default_value_t = 200)]
        max_order: usize,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Default, Serialize)]
pub struct Summary {
    pub groups: usize,
    pub violations: usize,
    pub categories: BTreeMap<String, usize>,
    pub cases: BTreeMap<String, usize>,
    pub failed_groups: Vec<String>,
}

impl Summary {
    pub fn of(reports: &[VerificationReport]) -> Self {
        let mut summary = Summary {
            groups: reports.len(),
            ..Summary::default()
        };
        for r in reports {
            *summary
                .categories
                .entry(r.category.as_str().to_string())
                .or_default() += 1;
            if let Some(case) = r.case {
                *summary.cases.entry(case.as_str().to_string()).or_default() += 1;
            }
            if r.failed() {
                summary.violations += r.violations.len();
                summary.failed_groups.push(r.group_id.clone());
            }
        }
        summary
    }
}

/// Failure that maps to exit code 2.
#[derive(Debug)]
pub struct UsageError(pub String);

impl From<Error> for UsageError {
    fn from(e: Error) -> Self {
        UsageError(e.to_string())
    }
}

impl From<io::Error> for UsageError {
    fn from(e: io::Error) -> Self {
        UsageError(e.to_string())
    }
}

pub fn run(cli: Cli) -> i32 {
    let result = match cli.command {
        Command::Analyze {
            format,
            out,
            inputs,
        } => cmd_analyze(&inputs, format, out.as_deref()),
        Command::Verify {
            max_order,
            parallelism,
            corpus,
            out,
            format,
        } => cmd_verify(
            max_order,
            parallelism,
            corpus.as_deref(),
            format,
            out.as_deref(),
        ),
        Command::Catalog { max_order } => cmd_catalog(max_order),
    };
    match result {
        Ok(code) => code,
        Err(UsageError(msg)) => {
            eprintln!("error: {msg}");
            EXIT_USAGE
        }
    }
}

fn check_max_order(max_order: usize) -> Result<(), UsageError> {
    let guard = global_order_guard();
    if max_order == 0 {
        return Err(UsageError("--max-order must be at least 1".into()));
    }
    if max_order > guard {
        return Err(UsageError(format!(
            "--max-order {max_order} exceeds the order guard {guard}"
        )));
    }
    Ok(())
}

pub fn cmd_analyze(
    inputs: &[String],
    format: Format,
    out: Option<&Path>,
) -> Result<i32, UsageError> {
    let guard = global_order_guard();
    let mut reports = Vec::new();
    for input in inputs {
        let spec = GroupSpec::resolve(input)?;
        let (id, group) = build(&spec, guard)?;
        reports.push(analyze(&id, &group));
    }
    emit(&reports, None, format, out)?;
    Ok(EXIT_OK)
}

pub fn cmd_verify(
    max_order: usize,
    parallelism: usize,
    corpus: Option<&Path>,
    format: Format,
    out: Option<&Path>,
) -> Result<i32, UsageError> {
    check_max_order(max_order)?;
    if parallelism == 0 {
        return Err(UsageError("--parallelism must be at least 1".into()));
    }
    let mut specs = builtin_catalog(max_order)?;
    if let Some(dir) = corpus {
        specs.extend(corpus_files(dir)?.into_iter().map(GroupSpec::file));
    }
    // Build everything up front so that bad input fails before any work.
    let guard = global_order_guard();
    let groups = specs
        .iter()
        .map(|spec| build(spec, guard))
        .collect::<Result<Vec<_>, _>>()?;

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(parallelism)
        .build()
        .map_err(|e| UsageError(e.to_string()))?;
    let mut reports: Vec<VerificationReport> = pool.install(|| {
        groups
            .par_iter()
            .map(|(id, group)| analyze(id, group))
            .collect()
    });
    reports.sort_by(|a, b| a.group_id.cmp(&b.group_id));
    reports.dedup_by(|a, b| a.group_id == b.group_id);

    let summary = Summary::of(&reports);
    eprintln!(
        "verified {} groups, {} violations",
        summary.groups, summary.violations
    );
    emit(&reports, Some(&summary), format, out)?;
    Ok(if summary.violations == 0 {
        EXIT_OK
    } else {
        EXIT_VIOLATION
    })
}

pub fn cmd_catalog(max_order: usize) -> Result<i32, UsageError> {
    check_max_order(max_order)?;
    let stdout = io::stdout();
    let mut w = stdout.lock();
    for spec in builtin_catalog(max_order)? {
        writeln!(w, "{}", spec.name)?;
    }
    Ok(EXIT_OK)
}

fn corpus_files(dir: &Path) -> Result<Vec<PathBuf>, UsageError> {
    let entries = fs::read_dir(dir).map_err(|e| UsageError(format!("{}: {e}", dir.display())))?;
    let mut files = Vec::new();
    for entry in entries {
        let path = entry?.path();
        if path.extension().is_some_and(|e| e == "json") {
            files.push(path);
        }
    }
    files.sort();
    Ok(files)
}

/// The report as an ordered map over `RECORD_FIELDS`.
pub fn record(report: &VerificationReport) -> Map<String, Value> {
    let Value::Object(mut map) = serde_json::to_value(report).expect("reports serialize") else {
        unreachable!("reports serialize to objects")
    };
    let mut ordered = Map::new();
    for field in RECORD_FIELDS {
        ordered.insert(field.to_string(), map.remove(field).unwrap_or(Value::Null));
    }
    ordered
}

/// Scalars are written as-is, nested values as compact JSON.
fn csv_cell(value: &Value) -> String {
    match value {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        _ => value.to_string(),
    }
}

fn emit(
    reports: &[VerificationReport],
    summary: Option<&Summary>,
    format: Format,
    out: Option<&Path>,
) -> Result<(), UsageError> {
    let mut sink: Box<dyn Write> = match out {
        Some(path) => Box::new(io::BufWriter::new(
            File::create(path).map_err(|e| UsageError(format!("{}: {e}", path.display())))?,
        )),
        None => Box::new(io::BufWriter::new(io::stdout().lock())),
    };
    match format {
        Format::Json => {
            for report in reports {
                serde_json::to_writer(&mut sink, &record(report))
                    .map_err(|e| UsageError(e.to_string()))?;
                writeln!(sink)?;
            }
            if let Some(summary) = summary {
                let line = serde_json::json!({ "summary": summary });
                writeln!(sink, "{line}")?;
            }
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(&mut sink);
            w.write_record(RECORD_FIELDS)
                .map_err(|e| UsageError(e.to_string()))?;
            for report in reports {
                let row = record(report);
                w.write_record(row.values().map(csv_cell))
                    .map_err(|e| UsageError(e.to_string()))?;
            }
            w.flush()?;
        }
    }
    sink.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use nacent::corpus::Construction;
    use nacent::DEFAULT_MAX_ORDER;

    fn report(c: Construction) -> VerificationReport {
        let g = c.build(DEFAULT_MAX_ORDER).unwrap();
        analyze(&c.to_string(), &g)
    }

    #[test]
    fn record_follows_field_order() {
        let r = record(&report(Construction::Symmetric(3)));
        let keys: Vec<&str> = r.keys().map(String::as_str).collect();
        assert_eq!(keys, RECORD_FIELDS);
    }

    #[test]
    fn summary_counts() {
        let reports = [
            report(Construction::Cyclic(4)),
            report(Construction::Symmetric(3)),
            report(Construction::Dicyclic(2)),
        ];
        let s = Summary::of(&reports);
        assert_eq!(s.groups, 3);
        assert_eq!(s.categories["Abelian"], 1);
        assert_eq!(s.categories["CA"], 2);
        assert!(s.cases.is_empty() && s.failed_groups.is_empty());
    }

    #[test]
    fn csv_cells() {
        assert_eq!(csv_cell(&Value::Null), "");
        assert_eq!(csv_cell(&Value::from("CA")), "CA");
        assert_eq!(csv_cell(&serde_json::json!({"a": true})), r#"{"a":true}"#);
    }
}
