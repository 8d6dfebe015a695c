//! `cqi`: quandle colorings, cocycle invariants and cocycle quivers from the
//! command line.
//!
//! Exit status: 0 on success, 1 when a mathematical check fails (quandle
//! axioms, cocycle condition, endomorphism check, diagram consistency), 2 on
//! I/O or parse errors, 3 when a size limit is exceeded.

use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use cocycle_quiver::chain::{check_cocycle, cocycle_space};
use cocycle_quiver::coloring::{coloring_count, cocycle_invariant_with, enumerate_colorings_in};
use cocycle_quiver::diagram::parse_diagrams;
use cocycle_quiver::matinv::{build_matrix, char_poly, elementary_ideals, smith_normal_form, DiscrepancyReport};
use cocycle_quiver::quiver::{build_quiver_with, in_degree_polynomial, quiver_polynomial};
use cocycle_quiver::zmat::is_prime;
use cocycle_quiver::{
    batch, corpus, CocycleCheck, CocycleQuiver, Cochain2, Error, Execution, LinkDiagram, Quandle, QuandleMap, ZmMatrix,
};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "cqi", version, about = "Quandle cocycle invariants and cocycle quivers of oriented links")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Worker threads for the parallel code paths (0: one per core, 1: sequential).
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Dot,
}

#[derive(Subcommand)]
enum Command {
    /// Check a quandle file and, if given, a cocycle, endomorphisms and a diagram.
    Validate {
        #[arg(long)]
        quandle: Option<PathBuf>,
        #[command(flatten)]
        cocycle: CocycleArgs,
        #[arg(long)]
        endo: Option<String>,
        #[command(flatten)]
        diagram: DiagramArgs,
    },
    /// List all endomorphisms of a quandle.
    Endos {
        #[arg(long)]
        quandle: PathBuf,
    },
    /// Generators of the 2-cocycles with coefficients in Z/mZ.
    Cocycles {
        #[arg(long)]
        quandle: PathBuf,
        #[arg(long)]
        modulus: u64,
    },
    /// List the colorings of a diagram.
    Colorings {
        #[arg(long)]
        quandle: PathBuf,
        #[command(flatten)]
        diagram: DiagramArgs,
    },
    /// The 2-cocycle invariant of a diagram.
    Invariant {
        #[arg(long)]
        quandle: PathBuf,
        #[command(flatten)]
        cocycle: CocycleArgs,
        #[command(flatten)]
        diagram: DiagramArgs,
    },
    /// The cocycle quiver: polynomial, in-degree polynomial or graph.
    Quiver {
        #[command(flatten)]
        job: QuiverArgs,
        #[arg(long, value_enum, default_value_t = QuiverShow::Poly)]
        show: QuiverShow,
    },
    /// Matrix invariants of the cocycle quiver.
    Matrix {
        #[command(flatten)]
        job: QuiverArgs,
        #[arg(long, value_enum, default_value_t = MatrixShow::All)]
        show: MatrixShow,
        /// Compare against a reference matrix (rows of integers) and print a discrepancy report.
        #[arg(long)]
        reference: Option<PathBuf>,
    },
    /// Quiver polynomials for many diagrams, one column per endomorphism.
    Batch {
        #[arg(long)]
        quandle: PathBuf,
        #[command(flatten)]
        cocycle: CocycleArgs,
        #[arg(long, default_value = "all")]
        endo: String,
        /// JSON file with an array of diagrams; the bundled corpus by default.
        #[arg(long)]
        diagram: Option<PathBuf>,
        #[arg(long)]
        max_crossings: Option<usize>,
    },
}

#[derive(Args)]
struct CocycleArgs {
    /// Cochain such as `x(1,3)+3x(1,4)`.
    #[arg(long, requires = "modulus")]
    cocycle: Option<String>,
    #[arg(long)]
    modulus: Option<u64>,
    /// Accept a cochain that fails the cocycle condition.
    #[arg(long)]
    no_cocycle_check: bool,
}

#[derive(Args)]
struct DiagramArgs {
    /// JSON diagram file.
    #[arg(long, conflicts_with = "name")]
    diagram: Option<PathBuf>,
    /// Name of a diagram in the bundled corpus, e.g. `6_1` or `L4a1`.
    #[arg(long)]
    name: Option<String>,
}

#[derive(Args)]
struct QuiverArgs {
    #[arg(long)]
    quandle: PathBuf,
    #[command(flatten)]
    cocycle: CocycleArgs,
    /// `all`, `id`, or maps such as `[2,4,6,6,4,2]`, separated by `;`.
    #[arg(long, default_value = "all")]
    endo: String,
    #[command(flatten)]
    diagram: DiagramArgs,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum QuiverShow {
    Poly,
    Indegree,
    Graph,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MatrixShow {
    All,
    Matrix,
    Charpoly,
    Snf,
    Ideals,
    Rank,
}

#[derive(Debug)]
enum CliError {
    Lib { context: String, error: Error },
    Io { path: PathBuf, error: std::io::Error },
    Usage(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Lib {
                error: Error::SizeLimitExceeded { .. },
                ..
            } => 3,
            CliError::Lib { error, .. } if error.is_validation() => 1,
            _ => 2,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Lib { context, error } if context.is_empty() => write!(f, "{error}"),
            CliError::Lib { context, error } => write!(f, "{context}: {error}"),
            CliError::Io { path, error } => write!(f, "{}: {error}", path.display()),
            CliError::Usage(msg) => f.write_str(msg),
        }
    }
}

type CliResult<T> = Result<T, CliError>;

trait Context<T> {
    fn context(self, what: impl Into<String>) -> CliResult<T>;
}

impl<T> Context<T> for cocycle_quiver::Result<T> {
    fn context(self, what: impl Into<String>) -> CliResult<T> {
        self.map_err(|error| CliError::Lib {
            context: what.into(),
            error,
        })
    }
}

fn read(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|error| CliError::Io {
        path: path.to_path_buf(),
        error,
    })
}

fn load_quandle(path: &Path) -> CliResult<Quandle> {
    read(path)?
        .parse()
        .context(format!("quandle file {}", path.display()))
}

fn load_cochain(args: &CocycleArgs, q: &Quandle) -> CliResult<Option<Cochain2>> {
    let (Some(expr), Some(m)) = (&args.cocycle, args.modulus) else {
        return Ok(None);
    };
    Cochain2::parse(expr, q.size(), m).context("cocycle").map(Some)
}

/// The cochain for weight computations; the zero cochain mod `--modulus`
/// (or 2) when none is given.
fn cochain_or_zero(args: &CocycleArgs, q: &Quandle) -> CliResult<Cochain2> {
    match load_cochain(args, q)? {
        Some(phi) => Ok(phi),
        None => Cochain2::zero(q.size(), args.modulus.unwrap_or(2)).context("modulus"),
    }
}

fn check_mode(args: &CocycleArgs) -> CocycleCheck {
    if args.no_cocycle_check {
        CocycleCheck::Skip
    } else {
        CocycleCheck::Verify
    }
}

fn load_diagram(args: &DiagramArgs) -> CliResult<LinkDiagram> {
    match (&args.diagram, &args.name) {
        (Some(path), _) => {
            let mut all = parse_diagrams(&read(path)?).context(format!("diagram file {}", path.display()))?;
            if all.len() != 1 {
                return Err(CliError::Usage(format!(
                    "{} holds {} diagrams; expected exactly one",
                    path.display(),
                    all.len()
                )));
            }
            Ok(all.remove(0))
        }
        (None, Some(name)) => corpus::get(name).cloned().context(""),
        (None, None) => Err(CliError::Usage("give --diagram FILE or --name NAME".into())),
    }
}

fn parse_endos(spec: &str, q: &Quandle) -> CliResult<Vec<QuandleMap>> {
    match spec.trim() {
        "all" => q.endomorphisms().context("endomorphisms"),
        "id" | "identity" => Ok(vec![QuandleMap::identity(q.size())]),
        list => {
            let maps = list
                .split(';')
                .filter(|s| !s.trim().is_empty())
                .map(|s| QuandleMap::parse(s, q.size()).context(format!("endomorphism {}", s.trim())))
                .collect::<CliResult<Vec<_>>>()?;
            if maps.is_empty() {
                return Err(CliError::Usage("empty endomorphism list".into()));
            }
            Ok(maps)
        }
    }
}

fn one_based(v: &[usize]) -> Vec<usize> {
    v.iter().map(|x| x + 1).collect()
}

fn fmt_list<T: std::fmt::Display>(xs: &[T]) -> String {
    let parts: Vec<String> = xs.iter().map(|x| x.to_string()).collect();
    format!("[{}]", parts.join(","))
}

struct Output {
    text: String,
    json: Option<Value>,
    dot: Option<String>,
}

impl Output {
    fn new(text: String, json: Value) -> Self {
        Output {
            text,
            json: Some(json),
            dot: None,
        }
    }

    fn render(self, format: Format) -> CliResult<String> {
        match format {
            Format::Text => Ok(self.text),
            Format::Json => {
                let v = self.json.ok_or_else(|| CliError::Usage("no JSON output for this command".into()))?;
                Ok(format!("{}\n", serde_json::to_string_pretty(&v).expect("serializable")))
            }
            Format::Dot => self
                .dot
                .ok_or_else(|| CliError::Usage("DOT output is only available for `quiver --show graph`".into())),
        }
    }
}

fn validate(
    quandle: Option<&Path>,
    cocycle: &CocycleArgs,
    endo: Option<&str>,
    diagram: &DiagramArgs,
) -> CliResult<Output> {
    let mut lines = Vec::new();
    let mut report = serde_json::Map::new();
    let q = match quandle {
        Some(path) => {
            let q = load_quandle(path)?;
            lines.push(format!("quandle: ok ({} elements)", q.size()));
            report.insert("quandle_size".into(), json!(q.size()));
            Some(q)
        }
        None => None,
    };
    if cocycle.cocycle.is_some() || endo.is_some() {
        let q = q
            .as_ref()
            .ok_or_else(|| CliError::Usage("--cocycle and --endo need --quandle".into()))?;
        if let Some(phi) = load_cochain(cocycle, q)? {
            check_cocycle(q, &phi).context("cocycle")?;
            lines.push(format!("cocycle: ok (mod {})", phi.modulus()));
            report.insert("cocycle".into(), json!(phi.to_string()));
        }
        if let Some(spec) = endo {
            let maps = parse_endos(spec, q)?;
            for f in &maps {
                q.check_endomorphism(f).context("")?;
            }
            lines.push(format!("endomorphisms: ok ({})", maps.len()));
            report.insert("endomorphisms".into(), json!(maps.len()));
        }
    }
    if diagram.diagram.is_some() || diagram.name.is_some() {
        let d = load_diagram(diagram)?;
        lines.push(format!(
            "diagram: ok ({} arcs, {} crossings, writhe {})",
            d.arc_count(),
            d.crossings().len(),
            d.writhe()
        ));
        report.insert("diagram".into(), json!({"arcs": d.arc_count(), "crossings": d.crossings().len()}));
    }
    if lines.is_empty() {
        return Err(CliError::Usage("nothing to validate".into()));
    }
    report.insert("valid".into(), json!(true));
    Ok(Output::new(lines.join("\n") + "\n", Value::Object(report)))
}

fn endos(path: &Path) -> CliResult<Output> {
    let q = load_quandle(path)?;
    let maps = q.endomorphisms().context("endomorphisms")?;
    let text: String = maps.iter().map(|f| format!("{f}\n")).collect();
    let list: Vec<Vec<usize>> = maps.iter().map(|f| f.to_one_based()).collect();
    Ok(Output::new(text, json!({"quandle_size": q.size(), "endomorphisms": list})))
}

fn cocycles(path: &Path, m: u64) -> CliResult<Output> {
    let q = load_quandle(path)?;
    let gens = cocycle_space(&q, m).context("cocycle space")?;
    let text: String = gens.iter().map(|g| format!("{g}\n")).collect();
    let list: Vec<Value> = gens
        .iter()
        .map(|g| json!({"expression": g.to_string(), "table": g.rows()}))
        .collect();
    Ok(Output::new(text, json!({"modulus": m, "generators": list})))
}

fn colorings(path: &Path, diagram: &DiagramArgs, exec: Execution) -> CliResult<Output> {
    let q = load_quandle(path)?;
    let d = load_diagram(diagram)?;
    let cs = enumerate_colorings_in(&d, &q, exec);
    let count = coloring_count(&d, &q);
    let mut text = String::new();
    for v in &cs {
        let _ = writeln!(text, "{}", fmt_list(&one_based(v)));
    }
    let _ = writeln!(text, "count: {count}");
    let list: Vec<Vec<usize>> = cs.iter().map(|v| one_based(v)).collect();
    Ok(Output::new(
        text,
        json!({"diagram": d.name(), "count": count, "colorings": list}),
    ))
}

fn invariant(path: &Path, cocycle: &CocycleArgs, diagram: &DiagramArgs, exec: Execution) -> CliResult<Output> {
    let q = load_quandle(path)?;
    let phi = load_cochain(cocycle, &q)?.ok_or_else(|| CliError::Usage("invariant needs --cocycle".into()))?;
    let d = load_diagram(diagram)?;
    let p = cocycle_invariant_with(&d, &q, &phi, check_mode(cocycle), exec).context("cocycle")?;
    Ok(Output::new(
        format!("{p}\n"),
        json!({"diagram": d.name(), "invariant": p, "text": p.to_string()}),
    ))
}

fn build(job: &QuiverArgs, exec: Execution) -> CliResult<(LinkDiagram, CocycleQuiver)> {
    let q = load_quandle(&job.quandle)?;
    let phi = cochain_or_zero(&job.cocycle, &q)?;
    let maps = parse_endos(&job.endo, &q)?;
    let d = load_diagram(&job.diagram)?;
    let quiver = build_quiver_with(&d, &q, &maps, &phi, check_mode(&job.cocycle), exec).context("")?;
    Ok((d, quiver))
}

fn quiver(job: &QuiverArgs, show: QuiverShow, exec: Execution) -> CliResult<Output> {
    let (d, quiver) = build(job, exec)?;
    let poly = quiver_polynomial(&quiver);
    let indeg = in_degree_polynomial(&quiver);
    let text = match show {
        QuiverShow::Poly => format!("{poly}\n"),
        QuiverShow::Indegree => format!("{indeg}\n"),
        QuiverShow::Graph => {
            let mut s = String::new();
            for (i, (v, w)) in quiver.vertices().iter().zip(quiver.weights()).enumerate() {
                let _ = writeln!(s, "v{} {} weight {}", i + 1, fmt_list(&one_based(v)), w);
            }
            for e in quiver.edges() {
                let _ = writeln!(s, "v{} -> v{} f{}", e.source + 1, e.target + 1, e.map + 1);
            }
            s
        }
    };
    let json = json!({
        "diagram": d.name(),
        "polynomial": poly,
        "text": poly.to_string(),
        "in_degree": indeg.to_string(),
        "quiver": quiver,
    });
    Ok(Output {
        text,
        json: Some(json),
        dot: (show == QuiverShow::Graph).then(|| quiver.to_dot()),
    })
}

fn read_matrix(path: &Path, m: u64) -> CliResult<ZmMatrix> {
    let text = read(path)?;
    let rows = text
        .lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| {
            l.split(|c: char| c.is_whitespace() || c == ',')
                .filter(|t| !t.is_empty())
                .map(|t| {
                    t.parse::<i64>()
                        .map_err(|_| Error::Parse(format!("bad matrix entry {t:?}")))
                })
                .collect::<cocycle_quiver::Result<Vec<i64>>>()
        })
        .collect::<cocycle_quiver::Result<Vec<_>>>()
        .context(format!("matrix file {}", path.display()))?;
    let cols = rows.first().map_or(0, Vec::len);
    ZmMatrix::from_rows(m, rows.len(), cols, &rows).context(format!("matrix file {}", path.display()))
}

fn matrix(job: &QuiverArgs, show: MatrixShow, reference: Option<&Path>, exec: Execution) -> CliResult<Output> {
    let (_, quiver) = build(job, exec)?;
    let mat = build_matrix(&quiver);
    let m = mat.modulus();

    if let Some(path) = reference {
        let reference = read_matrix(path, m)?;
        let report = DiscrepancyReport::new(&mat, &reference, None).context("")?;
        let json = serde_json::to_value(&report).expect("serializable");
        return Ok(Output::new(format!("{report}\n"), json));
    }

    let want = |s: MatrixShow| show == MatrixShow::All || show == s;
    let mut text = String::new();
    let mut json = serde_json::Map::new();
    json.insert("modulus".into(), json!(m));
    if want(MatrixShow::Matrix) {
        if show == MatrixShow::All {
            let _ = writeln!(text, "matrix (mod {m}):");
        }
        for row in mat.to_rows() {
            let cells: Vec<String> = row.iter().map(u64::to_string).collect();
            let _ = writeln!(text, "{}", cells.join(" "));
        }
        json.insert("matrix".into(), json!(mat.to_rows()));
    }
    if want(MatrixShow::Charpoly) && (show == MatrixShow::Charpoly || mat.is_square()) {
        let p = char_poly(&mat).context("char poly")?;
        line(&mut text, show, "char poly", &p.to_string());
        json.insert("char_poly".into(), json!(p));
        json.insert("char_poly_text".into(), json!(p.to_string()));
    }
    if want(MatrixShow::Snf) {
        let snf: Vec<String> = smith_normal_form(&mat.lift()).iter().map(|d| d.to_string()).collect();
        line(&mut text, show, "smith form", &format!("[{}]", snf.join(",")));
        json.insert("smith_form".into(), json!(snf));
    }
    if want(MatrixShow::Ideals) {
        let ideals = elementary_ideals(&mat);
        line(&mut text, show, "elementary ideals", &fmt_list(&ideals));
        json.insert("elementary_ideals".into(), json!(ideals));
    }
    if want(MatrixShow::Rank) && (show == MatrixShow::Rank || is_prime(m)) {
        let r = mat.rank_mod_p(m).context("rank")?;
        line(&mut text, show, &format!("rank mod {m}"), &r.to_string());
        json.insert("rank".into(), json!(r));
    }
    Ok(Output::new(text, Value::Object(json)))
}

fn line(text: &mut String, show: MatrixShow, label: &str, value: &str) {
    if show == MatrixShow::All {
        let _ = writeln!(text, "{label}: {value}");
    } else {
        let _ = writeln!(text, "{value}");
    }
}

fn run_batch(
    path: &Path,
    cocycle: &CocycleArgs,
    endo: &str,
    diagram: Option<&Path>,
    max_crossings: Option<usize>,
    exec: Execution,
) -> CliResult<Output> {
    let q = load_quandle(path)?;
    let phi = cochain_or_zero(cocycle, &q)?;
    let maps = parse_endos(endo, &q)?;
    let mut diagrams = match diagram {
        Some(p) => parse_diagrams(&read(p)?).context(format!("diagram file {}", p.display()))?,
        None => corpus::all().to_vec(),
    };
    if let Some(k) = max_crossings {
        diagrams.retain(|d| d.crossings().len() <= k);
    }
    let table = batch::batch(&diagrams, &q, &phi, &maps, check_mode(cocycle), exec).context("")?;
    let json = serde_json::to_value(&table).expect("serializable");
    Ok(Output::new(table.to_string(), json))
}

fn run(cli: &Cli) -> CliResult<String> {
    let exec = configure_threads(cli.threads)?;
    let out = match &cli.command {
        Command::Validate {
            quandle,
            cocycle,
            endo,
            diagram,
        } => validate(quandle.as_deref(), cocycle, endo.as_deref(), diagram)?,
        Command::Endos { quandle } => endos(quandle)?,
        Command::Cocycles { quandle, modulus } => cocycles(quandle, *modulus)?,
        Command::Colorings { quandle, diagram } => colorings(quandle, diagram, exec)?,
        Command::Invariant {
            quandle,
            cocycle,
            diagram,
        } => invariant(quandle, cocycle, diagram, exec)?,
        Command::Quiver { job, show } => quiver(job, *show, exec)?,
        Command::Matrix { job, show, reference } => matrix(job, *show, reference.as_deref(), exec)?,
        Command::Batch {
            quandle,
            cocycle,
            endo,
            diagram,
            max_crossings,
        } => run_batch(quandle, cocycle, endo, diagram.as_deref(), *max_crossings, exec)?,
    };
    out.render(cli.format)
}

#[cfg(feature = "parallel")]
fn configure_threads(n: usize) -> CliResult<Execution> {
    if n == 1 {
        return Ok(Execution::Sequential);
    }
    if n > 1 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Usage(format!("--threads: {e}")))?;
    }
    Ok(Execution::Parallel)
}

#[cfg(not(feature = "parallel"))]
fn configure_threads(_: usize) -> CliResult<Execution> {
    Ok(Execution::Sequential)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = run(&cli).and_then(|text| match &cli.out {
        Some(path) => fs::write(path, text).map_err(|error| CliError::Io {
            path: path.clone(),
            error,
        }),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|error| CliError::Io {
                path: PathBuf::from("<stdout>"),
                error,
            }),
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
