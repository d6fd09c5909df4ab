//! Command-line front end.
//!
//! Exit codes: 0 success, 1 mathematical disagreement or counterexample,
//! 2 usage or config error.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_traits::ToPrimitive;
use serde::Serialize;

use crate::codes::generator_matrix;
use crate::config::SpecConfig;
use crate::formulas::{
    dimension_formula, length_formula, prm_parameters, projective_min_distance, SizeVector,
};
use crate::oracles::{
    check_conjecture, codeword_weight, exhaustive_min_distance, hilbert_by_rank, witness_for_degree,
    SearchBudget,
    SearchOutcome,
};
use crate::sets::CartesianSpec;
use crate::Count;

#[derive(Parser, Debug)]
#[command(name = "pncc", version, about = "Projective nested cartesian codes")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check the nesting conditions and classify the spec.
    Validate(SpecArg),
    /// Length, dimension and minimum distance per degree.
    Table(TableArgs),
    /// Write the generator matrix of one degree.
    Genmat(GenmatArgs),
    /// Formula, witness and exhaustive minimum distance of one degree.
    Mindist(MindistArgs),
    /// Run the minimum-distance conjecture harness.
    Conjecture(ConjectureArgs),
    /// Projective Reed-Muller parameters.
    Prm(PrmArgs),
}

#[derive(Args, Debug)]
pub struct SpecArg {
    #[arg(long)]
    pub spec: PathBuf,
}

#[derive(Args, Debug)]
pub struct DegreeSelection {
    /// Comma list of degrees and inclusive ranges, e.g. `1..10,25`.
    #[arg(long, conflicts_with = "d_max")]
    pub degrees: Option<String>,
    /// Degrees 1..=d_max.
    #[arg(long)]
    pub d_max: Option<u32>,
}

#[derive(Args, Debug)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Table)]
    pub format: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct BudgetArgs {
    #[arg(long, default_value_t = SearchBudget::default().max_codewords)]
    pub budget_codewords: u64,
    #[arg(long, default_value_t = SearchBudget::default().max_seconds)]
    pub budget_seconds: f64,
    /// Worker threads; defaults to the available parallelism.
    #[arg(long)]
    pub workers: Option<usize>,
}

impl BudgetArgs {
    fn budget(&self) -> SearchBudget {
        SearchBudget {
            max_codewords: self.budget_codewords,
            max_seconds: self.budget_seconds,
        }
    }

    fn workers(&self) -> usize {
        self.workers
            .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
    }
}

#[derive(Args, Debug)]
pub struct TableArgs {
    #[command(flatten)]
    pub spec: SpecArg,
    #[command(flatten)]
    pub degrees: DegreeSelection,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug)]
pub struct GenmatArgs {
    #[command(flatten)]
    pub spec: SpecArg,
    #[arg(long)]
    pub degree: u32,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct MindistArgs {
    #[command(flatten)]
    pub spec: SpecArg,
    #[arg(long)]
    pub degree: u32,
    #[command(flatten)]
    pub budget: BudgetArgs,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct ConjectureArgs {
    #[command(flatten)]
    pub spec: SpecArg,
    #[command(flatten)]
    pub degrees: DegreeSelection,
    #[command(flatten)]
    pub budget: BudgetArgs,
    /// `json` writes the structured report; `table` and `csv` write one
    /// text record per degree.
    #[arg(long, value_enum, default_value_t = Format::Table)]
    pub format: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct PrmArgs {
    #[arg(long)]
    pub n: u64,
    #[arg(long)]
    pub q: u64,
    #[arg(long)]
    pub d_max: u32,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Csv,
    Json,
}

enum Failure {
    /// Exit 1.
    Math(String),
    /// Exit 2.
    Usage(String),
}

impl From<crate::Error> for Failure {
    fn from(e: crate::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

type Outcome = std::result::Result<(), Failure>;

/// Parses `1..10,25` into sorted distinct degrees.
pub fn parse_degrees(text: &str) -> crate::Result<Vec<u32>> {
    let bad = || crate::Error::Parse(format!("degree list {text:?}"));
    let mut out = Vec::new();
    for part in text.split(',').map(str::trim) {
        if let Some((a, b)) = part.split_once("..") {
            let b = b.strip_prefix('=').unwrap_or(b);
            let a: u32 = a.trim().parse().map_err(|_| bad())?;
            let b: u32 = b.trim().parse().map_err(|_| bad())?;
            if a > b {
                return Err(bad());
            }
            out.extend(a..=b);
        } else {
            out.push(part.parse().map_err(|_| bad())?);
        }
    }
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

fn degrees_of(sel: &DegreeSelection) -> std::result::Result<Vec<u32>, Failure> {
    let degrees = match (&sel.degrees, sel.d_max) {
        (Some(text), _) => parse_degrees(text)?,
        (None, Some(d_max)) => (1..=d_max).collect(),
        (None, None) => return Err(Failure::Usage("one of --degrees or --d-max is required".into())),
    };
    if degrees.contains(&0) {
        return Err(Failure::Usage("degrees start at 1".into()));
    }
    Ok(degrees)
}

fn load_spec(path: &Path) -> std::result::Result<CartesianSpec, Failure> {
    let spec = SpecConfig::from_path(path)?.build()?;
    let report = spec.validate();
    if !report.is_valid() {
        let lines: Vec<String> = report.violations.iter().map(|v| v.to_string()).collect();
        return Err(Failure::Usage(format!("invalid spec: {}", lines.join("; "))));
    }
    Ok(spec.normalize()?)
}

fn emit(out: &mut dyn Write, path: Option<&Path>, text: &str) -> Outcome {
    match path {
        Some(p) => std::fs::write(p, text)
            .map_err(|e| Failure::Usage(format!("{}: {e}", p.display()))),
        None => out
            .write_all(text.as_bytes())
            .map_err(|e| Failure::Usage(e.to_string())),
    }
}

#[derive(Serialize)]
struct Row {
    degree: u32,
    #[serde(serialize_with = "as_number")]
    length: Count,
    #[serde(serialize_with = "as_number")]
    dimension: Count,
    #[serde(serialize_with = "as_number")]
    distance: Count,
    status: String,
}

/// JSON number when it fits in `u64`, decimal string otherwise.
fn as_number<S: serde::Serializer>(x: &Count, s: S) -> std::result::Result<S::Ok, S::Error> {
    match x.to_u64() {
        Some(v) => s.serialize_u64(v),
        None => s.serialize_str(&x.to_string()),
    }
}

fn render(rows: &[Row], format: Format) -> String {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(rows).expect("rows serialize");
            s.push('\n');
            s
        }
        Format::Csv => {
            let mut s = String::from("degree,length,dimension,distance,status\n");
            for r in rows {
                s.push_str(&format!(
                    "{},{},{},{},{}\n",
                    r.degree, r.length, r.dimension, r.distance, r.status
                ));
            }
            s
        }
        Format::Table => {
            let header = ["degree", "length", "dimension", "distance", "status"];
            let cells: Vec<[String; 5]> = rows
                .iter()
                .map(|r| {
                    [
                        r.degree.to_string(),
                        r.length.to_string(),
                        r.dimension.to_string(),
                        r.distance.to_string(),
                        r.status.clone(),
                    ]
                })
                .collect();
            let mut widths = header.map(str::len);
            for row in &cells {
                for (w, c) in widths.iter_mut().zip(row) {
                    *w = (*w).max(c.len());
                }
            }
            let line = |row: &[String]| {
                let padded: Vec<String> = row
                    .iter()
                    .zip(&widths)
                    .map(|(c, &w)| format!("{c:>w$}"))
                    .collect();
                padded.join("  ") + "\n"
            };
            let mut s = line(&header.map(String::from));
            for row in &cells {
                s.push_str(&line(row));
            }
            s
        }
    }
}

fn cmd_validate(args: &SpecArg, out: &mut dyn Write) -> Outcome {
    let spec = SpecConfig::from_path(&args.spec)?.build()?;
    let report = spec.validate();
    let mut text = format!("sizes: {:?}\n", spec.raw_sizes());
    if report.is_valid() {
        let norm = spec.normalize()?;
        text.push_str(&format!("valid: yes\nclassification: {}\n", norm.classify()));
        emit(out, None, &text)
    } else {
        text.push_str("valid: no\n");
        for v in &report.violations {
            text.push_str(&format!("violation: {v}\n"));
        }
        emit(out, None, &text)?;
        Err(Failure::Math(format!("{} violation(s)", report.violations.len())))
    }
}

fn cmd_table(args: &TableArgs, out: &mut dyn Write) -> Outcome {
    let spec = load_spec(&args.spec.spec)?;
    let degrees = degrees_of(&args.degrees)?;
    let sizes = spec.sizes()?;
    let class = spec.classify();
    let length: Count = length_formula(&sizes);
    let points = spec.projective_points().len();
    if length != Count::from(points) {
        return Err(Failure::Math(format!("length formula {length} but {points} points")));
    }
    let mut rows = Vec::with_capacity(degrees.len());
    for d in degrees {
        let dim: Count = dimension_formula(&sizes, d as u64);
        let rank = hilbert_by_rank(&spec, d);
        if dim != Count::from(rank) {
            return Err(Failure::Math(format!("degree {d}: dimension formula {dim} but rank {rank}")));
        }
        let dist = projective_min_distance::<Count>(&sizes, d as u64, Some(&class))?;
        rows.push(Row {
            degree: d,
            length: length.clone(),
            dimension: dim,
            distance: dist.value,
            status: dist.status.to_string(),
        });
    }
    emit(out, args.output.out.as_deref(), &render(&rows, args.output.format))
}

fn cmd_genmat(args: &GenmatArgs, out: &mut dyn Write) -> Outcome {
    let spec = load_spec(&args.spec.spec)?;
    let matrix = generator_matrix(&spec, args.degree);
    let summary = format!(
        "rows {} columns {} rank {}\n",
        matrix.nrows(),
        matrix.ncols(),
        matrix.rank()
    );
    match &args.out {
        Some(path) => {
            emit(out, Some(path), &matrix.to_text())?;
            emit(out, None, &summary)
        }
        None => emit(out, None, &(matrix.to_text() + &summary)),
    }
}

fn cmd_mindist(args: &MindistArgs, out: &mut dyn Write) -> Outcome {
    let spec = load_spec(&args.spec.spec)?;
    let d = args.degree;
    if d == 0 {
        return Err(Failure::Usage("degrees start at 1".into()));
    }
    let sizes = spec.sizes()?;
    let formula = projective_min_distance::<Count>(&sizes, d as u64, Some(&spec.classify()))?;
    let formula_value = formula.value.to_u64().expect("distance fits");
    let witness = codeword_weight(&spec, &witness_for_degree(&spec, d as u64)?)? as u64;
    let outcome =
        exhaustive_min_distance(&spec, d, &args.budget.budget(), args.budget.workers())?;
    let mut text = format!(
        "degree {d}\nformula {formula_value} ({})\nwitness weight {witness}\n",
        formula.status
    );
    let mut problems = Vec::new();
    if witness != formula_value {
        problems.push(format!("witness weight {witness} differs from formula {formula_value}"));
    }
    match &outcome {
        SearchOutcome::Exact(m) => {
            let w = m.weight as u64;
            let coeffs: Vec<String> = m.message.iter().map(|c| c.to_string()).collect();
            text.push_str(&format!("oracle {w}\nwitness coefficients [{}]\n", coeffs.join(",")));
            if w > witness {
                problems.push(format!("oracle {w} exceeds witness weight {witness}"));
            }
            if w != formula_value {
                problems.push(format!("oracle {w} differs from formula {formula_value}"));
            }
        }
        SearchOutcome::BudgetExceeded { best, searched, total } => {
            text.push_str(&format!("oracle skipped-budget (searched {searched} of {total} codewords"));
            if let Some(m) = best {
                text.push_str(&format!(", best found {}", m.weight));
                if (m.weight as u64) < formula_value {
                    problems.push(format!("codeword of weight {} beats formula {formula_value}", m.weight));
                }
            }
            text.push_str(")\n");
        }
    }
    if problems.is_empty() {
        text.push_str("agree\n");
    } else {
        for p in &problems {
            text.push_str(&format!("DISAGREEMENT: {p}\n"));
        }
    }
    emit(out, args.out.as_deref(), &text)?;
    if problems.is_empty() {
        Ok(())
    } else {
        Err(Failure::Math(problems.join("; ")))
    }
}

fn cmd_conjecture(args: &ConjectureArgs, out: &mut dyn Write) -> Outcome {
    let spec = load_spec(&args.spec.spec)?;
    let degrees = degrees_of(&args.degrees)?;
    let report = check_conjecture(&spec, &degrees, &args.budget.budget(), args.budget.workers())?;
    let text = match args.format {
        Format::Json => report.to_json() + "\n",
        Format::Table | Format::Csv => report.to_text(),
    };
    emit(out, args.out.as_deref(), &text)?;
    if !report.bounds_hold() {
        Err(Failure::Math("upper bound violated".into()))
    } else if report.refuted() {
        Err(Failure::Math("counterexample found".into()))
    } else {
        Ok(())
    }
}

fn cmd_prm(args: &PrmArgs, out: &mut dyn Write) -> Outcome {
    let q = args.q;
    let mut rows = Vec::new();
    for d in 1..=args.d_max {
        let prm = prm_parameters::<Count>(args.n, q, d as u64)?;
        let sizes = SizeVector::new(vec![q; args.n as usize + 1])?;
        let general = (
            length_formula::<Count>(&sizes),
            dimension_formula::<Count>(&sizes, d as u64),
            projective_min_distance::<Count>(&sizes, d as u64, None)?.value,
        );
        if (prm.length.clone(), prm.dimension.clone(), prm.distance.clone()) != general {
            return Err(Failure::Math(format!(
                "degree {d}: closed form ({}, {}, {}) differs from general formulas ({}, {}, {})",
                prm.length, prm.dimension, prm.distance, general.0, general.1, general.2
            )));
        }
        rows.push(Row {
            degree: d,
            length: prm.length,
            dimension: prm.dimension,
            distance: prm.distance,
            status: "exact-theorem".into(),
        });
    }
    if args.d_max == 0 {
        prm_parameters::<Count>(args.n, q, 1)?;
    }
    emit(out, args.output.out.as_deref(), &render(&rows, args.output.format))
}

/// Runs one invocation and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let rendered = e.render().to_string();
            let _ = if code == 0 {
                out.write_all(rendered.as_bytes())
            } else {
                err.write_all(rendered.as_bytes())
            };
            return code;
        }
    };
    let result = match &cli.command {
        Command::Validate(a) => cmd_validate(a, out),
        Command::Table(a) => cmd_table(a, out),
        Command::Genmat(a) => cmd_genmat(a, out),
        Command::Mindist(a) => cmd_mindist(a, out),
        Command::Conjecture(a) => cmd_conjecture(a, out),
        Command::Prm(a) => cmd_prm(a, out),
    };
    match result {
        Ok(()) => 0,
        Err(Failure::Math(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            1
        }
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            2
        }
    }
}
