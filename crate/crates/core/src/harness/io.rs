//! File formats.
//!
//! * Graph: a header line `2n <vertex-count>`, then one `i j` line per edge
//!   (0-based, `i < j`, sorted). Every line ends in a newline, so a file cut
//!   short is detected.
//! * Assignment: a single line of `2n` characters from `{0, 1}`.
//! * Posterior table: CSV `assignment,log_weight`.
//! * Sample set: CSV `assignment,count`.
//! * Result rows and summaries: long-format CSV, columns as in
//!   [`ROW_COLUMNS`] and [`SUMMARY_COLUMNS`]; empty cells for absent values.
//! * Manifest: JSON written next to every output file as
//!   `<file>.manifest.json`.
//!
//! Floats are written in Rust's shortest round-trip form, switching to
//! exponent notation outside `[1e-5, 1e16)`.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::experiment::{ExperimentOutput, ResultRow, SkippedCell, Summary};
use crate::error::{Error, Result};
use crate::graphmodel::{ClassAssignment, Graph};
use crate::numeric::num_assignments;
use crate::posterior::{PosteriorTable, SampleSet, TableSource};

pub const ROW_COLUMNS: [&str; 11] = [
    "task",
    "n",
    "p",
    "q",
    "replicate",
    "seed",
    "statistic",
    "value",
    "bound",
    "vacuous",
    "wall_time_s",
];

pub const SUMMARY_COLUMNS: [&str; 14] = [
    "task",
    "n",
    "p",
    "q",
    "k_n",
    "level",
    "statistic",
    "count",
    "mean",
    "std_error",
    "ci_low",
    "ci_high",
    "bound",
    "vacuous",
];

pub const CODE_VERSION: &str = concat!(env!("CARGO_PKG_NAME"), " ", env!("CARGO_PKG_VERSION"));

/// Shortest round-trip text for `x`.
pub fn format_float(x: f64) -> String {
    let a = x.abs();
    if x == 0.0 || !x.is_finite() || (1e-5..1e16).contains(&a) {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

fn parse_float(field: &str, line: usize, what: &str) -> Result<f64> {
    field
        .trim()
        .parse()
        .map_err(|_| Error::parse(line, format!("{what}: cannot parse {field:?} as a number")))
}

fn parse_int<T: std::str::FromStr>(field: &str, line: usize, what: &str) -> Result<T> {
    field.trim().parse().map_err(|_| {
        Error::parse(
            line,
            format!("{what}: cannot parse {field:?} as an integer"),
        )
    })
}

fn open(path: &Path) -> Result<BufReader<File>> {
    Ok(BufReader::new(File::open(path)?))
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        std::fs::create_dir_all(parent)?;
    }
    Ok(BufWriter::new(File::create(path)?))
}

pub fn write_graph<W: Write>(graph: &Graph, mut out: W) -> Result<()> {
    writeln!(out, "2n {}", graph.vertex_count())?;
    for (i, j) in graph.edges() {
        writeln!(out, "{i} {j}")?;
    }
    out.flush()?;
    Ok(())
}

pub fn read_graph<R: Read>(input: R) -> Result<Graph> {
    let mut text = String::new();
    BufReader::new(input).read_to_string(&mut text)?;
    let lines: Vec<&str> = text.split_inclusive('\n').collect();
    if lines.is_empty() {
        return Err(Error::parse(
            1,
            "empty file, expected header `2n <vertex-count>`",
        ));
    }
    let next_line = |idx: usize| -> Result<&str> {
        let line = lines[idx];
        line.strip_suffix('\n')
            .map(|l| l.strip_suffix('\r').unwrap_or(l))
            .ok_or_else(|| Error::parse(idx + 1, "truncated line (no trailing newline)"))
    };
    let head = next_line(0)?;
    let vertex_count: usize = match head.split_whitespace().collect::<Vec<_>>().as_slice() {
        ["2n", count] => parse_int(count, 1, "vertex count")?,
        _ => {
            return Err(Error::parse(
                1,
                format!("expected header `2n <vertex-count>`, found {head:?}"),
            ))
        }
    };
    if vertex_count == 0 || vertex_count % 2 == 1 {
        return Err(Error::parse(
            1,
            format!("vertex count {vertex_count} must be positive and even"),
        ));
    }
    let mut edges = Vec::new();
    let mut prev: Option<(usize, usize)> = None;
    for idx in 1..lines.len() {
        let lineno = idx + 1;
        let line = next_line(idx)?;
        let fields: Vec<&str> = line.split_whitespace().collect();
        let [a, b] = fields.as_slice() else {
            return Err(Error::parse(
                lineno,
                format!("expected `i j`, found {line:?}"),
            ));
        };
        let i: usize = parse_int(a, lineno, "vertex")?;
        let j: usize = parse_int(b, lineno, "vertex")?;
        if i >= j || j >= vertex_count {
            return Err(Error::parse(
                lineno,
                format!("edge ({i}, {j}) needs i < j < {vertex_count}"),
            ));
        }
        if prev.is_some_and(|p| p >= (i, j)) {
            return Err(Error::parse(
                lineno,
                format!("edge ({i}, {j}) is out of order"),
            ));
        }
        prev = Some((i, j));
        edges.push((i, j));
    }
    Graph::from_edges(vertex_count / 2, edges)
}

pub fn save_graph(graph: &Graph, path: &Path) -> Result<()> {
    write_graph(graph, create(path)?)
}

pub fn load_graph(path: &Path) -> Result<Graph> {
    read_graph(open(path)?).map_err(|e| e.with_path(path))
}

pub fn write_assignment<W: Write>(theta: &ClassAssignment, mut out: W) -> Result<()> {
    writeln!(out, "{}", theta.to_bit_string())?;
    out.flush()?;
    Ok(())
}

/// Reads a single line of bits; a non-canonical representative is flipped.
pub fn read_assignment<R: Read>(input: R) -> Result<ClassAssignment> {
    let mut text = String::new();
    BufReader::new(input).read_to_string(&mut text)?;
    let mut lines = text.lines();
    let first = lines.next().unwrap_or("").trim();
    if first.is_empty() {
        return Err(Error::parse(1, "expected a line of 0/1 characters"));
    }
    if let Some((extra, _)) = lines.enumerate().find(|(_, l)| !l.trim().is_empty()) {
        return Err(Error::parse(
            extra + 2,
            "unexpected content after the assignment",
        ));
    }
    first
        .parse()
        .map_err(|e: Error| Error::parse(1, e.to_string()))
}

pub fn save_assignment(theta: &ClassAssignment, path: &Path) -> Result<()> {
    write_assignment(theta, create(path)?)
}

pub fn load_assignment(path: &Path) -> Result<ClassAssignment> {
    read_assignment(open(path)?).map_err(|e| e.with_path(path))
}

fn csv_line(record: &csv::StringRecord) -> usize {
    record.position().map_or(0, |p| p.line() as usize)
}

fn check_header<R: Read>(rdr: &mut csv::Reader<R>, expected: &[&str]) -> Result<()> {
    let header = rdr.headers()?;
    if header.iter().ne(expected.iter().copied()) {
        return Err(Error::parse(
            1,
            format!(
                "expected header {:?}, found {:?}",
                expected.join(","),
                header.iter().collect::<Vec<_>>().join(",")
            ),
        ));
    }
    Ok(())
}

fn records<R: Read>(
    input: R,
    expected: &[&str],
) -> Result<impl Iterator<Item = Result<(usize, csv::StringRecord)>>> {
    let mut rdr = csv::ReaderBuilder::new().from_reader(input);
    check_header(&mut rdr, expected)?;
    let width = expected.len();
    Ok(rdr.into_records().map(move |rec| {
        let rec = rec.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line() as usize);
            Error::parse(line, e.to_string())
        })?;
        let line = csv_line(&rec);
        if rec.len() != width {
            return Err(Error::parse(
                line,
                format!("expected {width} fields, found {}", rec.len()),
            ));
        }
        Ok((line, rec))
    }))
}

fn parse_assignment_field(field: &str, line: usize) -> Result<ClassAssignment> {
    field
        .parse()
        .map_err(|e: Error| Error::parse(line, e.to_string()))
}

pub fn write_posterior_csv<W: Write>(table: &PosteriorTable, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["assignment", "log_weight"])?;
    for (a, lw) in table.iter() {
        w.write_record([a.to_bit_string(), format_float(lw)])?;
    }
    w.flush()?;
    Ok(())
}

/// A table listing every assignment of `Θ_n` is read back as exact, any
/// other as empirical. The log-evidence is not stored.
pub fn read_posterior_csv<R: Read>(input: R) -> Result<PosteriorTable> {
    let mut assignments = Vec::new();
    let mut weights = Vec::new();
    for rec in records(input, &["assignment", "log_weight"])? {
        let (line, rec) = rec?;
        let a = parse_assignment_field(&rec[0], line)?;
        if let Some(first) = assignments.first() {
            let first: &ClassAssignment = first;
            if first.n() != a.n() {
                return Err(Error::parse(line, "assignments differ in length"));
            }
        }
        if assignments.last().is_some_and(|prev| prev >= &a) {
            return Err(Error::parse(
                line,
                "assignments must be strictly increasing",
            ));
        }
        weights.push(parse_float(&rec[1], line, "log_weight")?);
        assignments.push(a);
    }
    let Some(n) = assignments.first().map(ClassAssignment::n) else {
        return Err(Error::parse(1, "no rows"));
    };
    let full = num_assignments(n).is_some_and(|c| c == assignments.len() as u128);
    let source = if full {
        TableSource::Exact
    } else {
        TableSource::Empirical
    };
    PosteriorTable::from_log_weights(n, assignments, weights, source)
}

pub fn save_posterior(table: &PosteriorTable, path: &Path) -> Result<()> {
    write_posterior_csv(table, create(path)?)
}

pub fn load_posterior(path: &Path) -> Result<PosteriorTable> {
    read_posterior_csv(open(path)?).map_err(|e| e.with_path(path))
}

pub fn write_samples_csv<W: Write>(samples: &SampleSet, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["assignment", "count"])?;
    for (a, c) in samples.iter() {
        w.write_record([a.to_bit_string(), c.to_string()])?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_samples_csv<R: Read>(input: R) -> Result<SampleSet> {
    let mut counts = Vec::new();
    for rec in records(input, &["assignment", "count"])? {
        let (line, rec) = rec?;
        let a = parse_assignment_field(&rec[0], line)?;
        let c: u64 = parse_int(&rec[1], line, "count")?;
        counts.push((a, c));
    }
    Ok(SampleSet::from_counts(counts))
}

fn opt_float(x: Option<f64>) -> String {
    x.map(format_float).unwrap_or_default()
}

fn opt_bool(x: Option<bool>) -> String {
    x.map(|b| b.to_string()).unwrap_or_default()
}

fn parse_opt_float(field: &str, line: usize, what: &str) -> Result<Option<f64>> {
    if field.is_empty() {
        Ok(None)
    } else {
        parse_float(field, line, what).map(Some)
    }
}

fn parse_opt_bool(field: &str, line: usize) -> Result<Option<bool>> {
    match field {
        "" => Ok(None),
        "true" => Ok(Some(true)),
        "false" => Ok(Some(false)),
        other => Err(Error::parse(
            line,
            format!("vacuous: expected true/false, found {other:?}"),
        )),
    }
}

pub fn write_rows_csv<W: Write>(rows: &[ResultRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(ROW_COLUMNS)?;
    for r in rows {
        w.write_record([
            r.task.clone(),
            r.n.to_string(),
            format_float(r.p),
            format_float(r.q),
            r.replicate.to_string(),
            r.seed.to_string(),
            r.statistic.clone(),
            format_float(r.value),
            opt_float(r.bound),
            opt_bool(r.vacuous),
            format_float(r.wall_time_s),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_rows_csv<R: Read>(input: R) -> Result<Vec<ResultRow>> {
    let mut rows = Vec::new();
    for rec in records(input, &ROW_COLUMNS)? {
        let (line, r) = rec?;
        rows.push(ResultRow {
            task: r[0].to_string(),
            n: parse_int(&r[1], line, "n")?,
            p: parse_float(&r[2], line, "p")?,
            q: parse_float(&r[3], line, "q")?,
            replicate: parse_int(&r[4], line, "replicate")?,
            seed: parse_int(&r[5], line, "seed")?,
            statistic: r[6].to_string(),
            value: parse_float(&r[7], line, "value")?,
            bound: parse_opt_float(&r[8], line, "bound")?,
            vacuous: parse_opt_bool(&r[9], line)?,
            wall_time_s: parse_float(&r[10], line, "wall_time_s")?,
        });
    }
    Ok(rows)
}

pub fn write_summaries_csv<W: Write>(summaries: &[Summary], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(SUMMARY_COLUMNS)?;
    for s in summaries {
        w.write_record([
            s.task.clone(),
            s.n.to_string(),
            format_float(s.p),
            format_float(s.q),
            s.k_n.to_string(),
            format_float(s.level),
            s.statistic.clone(),
            s.count.to_string(),
            format_float(s.mean),
            format_float(s.std_error),
            format_float(s.ci_low),
            format_float(s.ci_high),
            opt_float(s.bound),
            opt_bool(s.vacuous),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_summaries_csv<R: Read>(input: R) -> Result<Vec<Summary>> {
    let mut out = Vec::new();
    for rec in records(input, &SUMMARY_COLUMNS)? {
        let (line, r) = rec?;
        out.push(Summary {
            task: r[0].to_string(),
            n: parse_int(&r[1], line, "n")?,
            p: parse_float(&r[2], line, "p")?,
            q: parse_float(&r[3], line, "q")?,
            k_n: parse_int(&r[4], line, "k_n")?,
            level: parse_float(&r[5], line, "level")?,
            statistic: r[6].to_string(),
            count: parse_int(&r[7], line, "count")?,
            mean: parse_float(&r[8], line, "mean")?,
            std_error: parse_float(&r[9], line, "std_error")?,
            ci_low: parse_float(&r[10], line, "ci_low")?,
            ci_high: parse_float(&r[11], line, "ci_high")?,
            bound: parse_opt_float(&r[12], line, "bound")?,
            vacuous: parse_opt_bool(&r[13], line)?,
        });
    }
    Ok(out)
}

pub fn write_json<T: Serialize, W: Write>(value: &T, mut out: W) -> Result<()> {
    serde_json::to_writer_pretty(&mut out, value)?;
    writeln!(out)?;
    out.flush()?;
    Ok(())
}

pub fn read_json<T: DeserializeOwned, R: Read>(input: R) -> Result<T> {
    serde_json::from_reader(BufReader::new(input))
        .map_err(|e| Error::parse(e.line(), e.to_string()))
}

pub fn save_json<T: Serialize>(value: &T, path: &Path) -> Result<()> {
    write_json(value, create(path)?)
}

pub fn load_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    read_json(File::open(path)?).map_err(|e| e.with_path(path))
}

/// What is needed to reproduce one output file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub file: String,
    pub code_version: String,
    pub rng: String,
    pub seed: Option<u64>,
    /// SHA-256 of the compact JSON of `config` (keys sorted).
    pub config_sha256: String,
    pub config: serde_json::Value,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub skipped: Vec<SkippedCell>,
}

impl Manifest {
    pub fn new(file: &Path, config: &impl Serialize, seed: Option<u64>) -> Result<Self> {
        let config = serde_json::to_value(config)?;
        let digest = Sha256::digest(serde_json::to_vec(&config)?);
        Ok(Self {
            file: file
                .file_name()
                .map(|f| f.to_string_lossy().into_owned())
                .unwrap_or_default(),
            code_version: CODE_VERSION.into(),
            rng: "chacha8".into(),
            seed,
            config_sha256: hex::encode(digest),
            config,
            skipped: Vec::new(),
        })
    }

    /// `<file>.manifest.json` next to `file`.
    pub fn path_for(file: &Path) -> PathBuf {
        let mut name = file.file_name().unwrap_or_default().to_os_string();
        name.push(".manifest.json");
        file.with_file_name(name)
    }

    pub fn save_next_to(&self, file: &Path) -> Result<PathBuf> {
        let path = Self::path_for(file);
        save_json(self, &path)?;
        Ok(path)
    }
}

/// Writes `rows.csv`, `summaries.csv` and, for posterior dumps, one
/// `posterior_n{n}_p{p}_q{q}_r{replicate}.csv` per table into `dir`, each
/// with a manifest. Returns the data files written.
pub fn write_experiment(
    output: &ExperimentOutput,
    config: &super::config::ExperimentConfig,
    dir: &Path,
) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir)?;
    let mut written = Vec::new();
    let manifest_for = |path: &Path, seed: Option<u64>| -> Result<()> {
        let mut m = Manifest::new(path, config, seed)?;
        m.skipped = output.skipped.clone();
        m.save_next_to(path)?;
        Ok(())
    };
    let rows = dir.join("rows.csv");
    write_rows_csv(&output.rows, create(&rows)?)?;
    manifest_for(&rows, Some(config.base_seed))?;
    written.push(rows);
    let summaries = dir.join("summaries.csv");
    write_summaries_csv(&output.summaries, create(&summaries)?)?;
    manifest_for(&summaries, Some(config.base_seed))?;
    written.push(summaries);
    for dump in &output.tables {
        let path = dir.join(format!(
            "posterior_n{}_p{}_q{}_r{}.csv",
            dump.n,
            format_float(dump.p),
            format_float(dump.q),
            dump.replicate
        ));
        save_posterior(&dump.table, &path)?;
        manifest_for(&path, Some(dump.seed))?;
        written.push(path);
    }
    Ok(written)
}
