//! Command-line front end: file formats, report rendering and the `mg`
//! subcommands. [`run`] is the whole program minus process setup.

pub mod error;
pub mod files;
pub mod report;

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use mg_core::bounds::{
    admissible_self_intersection, bogomolov_radius_sq, ch_xiao_check, noether_omega_sq, omega_sq_lower_sharp,
    radius_sq_closed_form, reference_radius_sq, select_regime, slope_check, total_e, FibrationStats,
    RadiusHypotheses, ReferenceRegime,
};
use mg_core::oracle::numeric_green;
use mg_core::rational::{parse_rational, sqrt_decimal};
use mg_core::{admissible_measure, effective_resistance, GreenSystem, Rational};

pub use error::CliError;
pub use files::{parse_fiber_file, parse_graph_file, write_fiber_file, write_graph_file, FiberFile, GraphFile};
pub use report::Report;

use report::DIGITS;

#[derive(Debug, Parser)]
#[command(name = "mg", version, about = "Green functions and admissible invariants of metrized graphs")]
struct Cli {
    /// Emit one JSON object per computed quantity.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Effective resistance between two named points.
    Resistance { file: PathBuf, p: String, q: String },
    /// Admissible Green function g(x, y).
    Green { file: PathBuf, x: String, y: String },
    /// Admissible measure of the file's divisor.
    Measure { file: PathBuf },
    /// The invariant e of the file's graph and divisor.
    EInvariant { file: PathBuf },
    #[command(subcommand)]
    Fiber(FiberCommand),
    /// Slope inequalities and Bogomolov radii from fibration numerics.
    Bounds(BoundsArgs),
    #[command(subcommand)]
    Oracle(OracleCommand),
    /// Run every `.mg` and `.fib` file of a directory.
    Batch { dir: PathBuf },
}

#[derive(Debug, Subcommand)]
enum FiberCommand {
    /// Genus, node types, chain test and e_y of a fiber.
    Analyze { file: PathBuf },
}

#[derive(Debug, Subcommand)]
enum OracleCommand {
    /// Floating-point Green function on a grid of mesh `h`.
    Green {
        file: PathBuf,
        x: String,
        y: String,
        #[arg(long, value_parser = rational_arg)]
        h: Rational,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum BoundsKind {
    Slope,
    Radius,
    Reference,
}

#[derive(Debug, Args)]
struct BoundsArgs {
    kind: BoundsKind,
    #[arg(long)]
    genus: u64,
    /// deg f_*ω
    #[arg(long, value_parser = rational_arg)]
    lambda: Option<Rational>,
    /// Comma-separated δ_0, ..., δ_{g/2}.
    #[arg(long, value_delimiter = ',', value_parser = rational_arg, allow_hyphen_values = true)]
    delta: Vec<Rational>,
    #[arg(long)]
    hyperelliptic: bool,
    #[arg(long)]
    smooth: bool,
    #[arg(long)]
    irreducible: bool,
    /// Assert that every singular fiber is a chain of stable components.
    #[arg(long)]
    chain_fibers: bool,
    /// Assert that every fiber has at most one node of positive type.
    #[arg(long)]
    one_positive_node: bool,
}

fn rational_arg(s: &str) -> Result<Rational, String> {
    parse_rational(s).ok_or_else(|| format!("BadRational: `{s}` is not a rational number"))
}

/// Parses `args` (program name first), runs the command and writes its
/// report to `out`. Returns the process exit code: 0 on success, 2 for bad
/// input, 3 when a mathematical precondition fails.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 2,
            };
            let text = e.render().to_string();
            let _ = if code == 0 { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    let result = match &cli.command {
        Command::Batch { dir } => batch(dir, cli.json),
        other => execute(other).map(|r| r.render(cli.json)).map(|s| (s, 0)),
    };
    match result {
        Ok((text, code)) => {
            let _ = out.write_all(text.as_bytes());
            code
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Io {
        path: path.to_path_buf(),
        message: e.to_string(),
    })
}

fn load_graph(path: &Path) -> Result<GraphFile, CliError> {
    parse_graph_file(&read(path)?)
}

fn execute(command: &Command) -> Result<Report, CliError> {
    match command {
        Command::Resistance { file, p, q } => {
            let f = load_graph(file)?;
            let r = effective_resistance(&f.graph, &f.point(p)?, &f.point(q)?)?;
            let mut rep = Report::new("resistance").input("file", file.display()).input("P", p).input("Q", q);
            rep.exact(format!("r({p}, {q})"), r);
            Ok(rep)
        }
        Command::Green { file, x, y } => {
            let f = load_graph(file)?;
            let sys = GreenSystem::new(&f.graph, &f.divisor)?;
            let v = sys.eval(&f.point(x)?, &f.point(y)?)?;
            let mut rep = Report::new("green").input("file", file.display()).input("x", x).input("y", y);
            rep.exact(format!("g({x}, {y})"), v);
            Ok(rep)
        }
        Command::Measure { file } => measure(file),
        Command::EInvariant { file } => {
            let f = load_graph(file)?;
            let e = GreenSystem::new(&f.graph, &f.divisor)?.e_invariant()?;
            let mut rep = Report::new("e-invariant").input("file", file.display());
            rep.exact("e", e);
            Ok(rep)
        }
        Command::Fiber(FiberCommand::Analyze { file }) => fiber(file),
        Command::Bounds(args) => bounds(args),
        Command::Oracle(OracleCommand::Green { file, x, y, h }) => {
            let f = load_graph(file)?;
            let (px, py) = (f.point(x)?, f.point(y)?);
            let exact = GreenSystem::new(&f.graph, &f.divisor)?.eval(&px, &py)?;
            let numeric = numeric_green(&f.graph, &f.divisor, &px, &py, h)?;
            let error = (numeric - mg_core::rational::to_f64(&exact)).abs();
            let mut rep = Report::new("oracle green")
                .input("file", file.display())
                .input("x", x)
                .input("y", y)
                .input("h", h);
            rep.approx(format!("g_h({x}, {y})"), float(numeric));
            rep.exact(format!("g({x}, {y})"), exact);
            rep.approx("|error|", float(error));
            Ok(rep)
        }
        Command::Batch { .. } => unreachable!("handled by run"),
    }
}

/// Deterministic rendering of a float with the report's digit count.
fn float(x: f64) -> String {
    match Rational::from_float(x) {
        Some(r) => mg_core::rational::format_decimal(&r, DIGITS),
        None => x.to_string(),
    }
}

fn measure(file: &Path) -> Result<Report, CliError> {
    let f = load_graph(file)?;
    let mu = admissible_measure(&f.graph, &f.divisor)?;
    let mut rep = Report::new("measure").input("file", file.display());
    rep.exact("deg D", f.divisor.degree());
    for (p, m) in mu.atoms() {
        rep.exact(format!("atom({})", f.name_of(p)), m.clone());
    }
    for (id, _) in f.graph.edges() {
        rep.exact(format!("density({})", f.edge_name(id)), mu.density(id).clone());
    }
    rep.exact("total mass", mu.total_mass(&f.graph));
    Ok(rep)
}

fn fiber(file: &Path) -> Result<Report, CliError> {
    let f = parse_fiber_file(&read(file)?)?;
    let a = f.config.analyze()?;
    let mut rep = Report::new("fiber analyze").input("file", file.display());
    rep.text("genus", a.genus.to_string());
    let delta: Vec<String> = a.delta.iter().map(u64::to_string).collect();
    rep.text("delta", format!("({})", delta.join(", ")));
    let omega: Vec<String> = f
        .config
        .components()
        .iter()
        .zip(f.config.omega_coefficients())
        .map(|(c, w)| format!("{}: {}", c.name, w))
        .collect();
    rep.text("omega", format!("({})", omega.join(", ")));
    rep.text("chain", if a.is_chain { "yes" } else { "no" });
    rep.exact("e_y (solver)", a.e_solver);
    match a.e_closed_form {
        Some(e) => rep.exact("e_y (closed form)", e),
        None => rep.text("e_y (closed form)", "n/a (not a chain of stable components)"),
    }
    for w in &a.warnings {
        rep.warn(w);
    }
    Ok(rep)
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn bounds(args: &BoundsArgs) -> Result<Report, CliError> {
    let lambda = args.lambda.clone();
    let mut stats = FibrationStats::new(args.genus, lambda.clone().unwrap_or_default(), args.delta.clone())?;
    stats.hyperelliptic = args.hyperelliptic;
    stats.smooth = args.smooth;
    let delta_text: Vec<String> = args.delta.iter().map(|d| d.to_string()).collect();
    let kind = match args.kind {
        BoundsKind::Slope => "slope",
        BoundsKind::Radius => "radius",
        BoundsKind::Reference => "reference",
    };
    let mut rep = Report::new(&format!("bounds {kind}"))
        .input("genus", args.genus)
        .input("delta", delta_text.join(","));
    if let Some(l) = &lambda {
        rep = rep.input("lambda", l);
    }
    let g = args.genus;
    match args.kind {
        BoundsKind::Slope => {
            if lambda.is_none() {
                return Err(CliError::Usage("bounds slope requires --lambda".into()));
            }
            let sharp = slope_check(&stats)?;
            let xiao = ch_xiao_check(&stats)?;
            rep.exact("(8g+4) lambda", sharp.lhs);
            rep.exact("sharp rhs", sharp.rhs);
            rep.exact("sharp slack", sharp.slack);
            rep.text("sharp holds", yes(sharp.holds));
            rep.exact("xiao rhs", xiao.rhs);
            rep.exact("xiao slack", xiao.slack);
            rep.text("xiao holds", yes(xiao.holds));
            rep.exact("omega² (Noether)", noether_omega_sq(g, &stats.lambda_deg, &stats.delta)?);
        }
        BoundsKind::Radius => {
            let omega_sq = omega_sq_lower_sharp(g, &stats.delta)?;
            let sum_e = total_e(g, &stats.delta)?;
            let adm = admissible_self_intersection(&omega_sq, &sum_e);
            let (radius_sq, warning) = bogomolov_radius_sq(g, &adm);
            let hypotheses = RadiusHypotheses {
                not_smooth: !args.smooth,
                chain_fibers: args.chain_fibers,
                hyperelliptic: args.hyperelliptic,
                one_positive_node: args.one_positive_node,
            };
            let closed = radius_sq_closed_form(g, &stats.delta, hypotheses)?;
            rep.exact("omega² lower bound", omega_sq);
            rep.exact("sum e_y", sum_e);
            rep.exact("admissible omega²", adm);
            rep.exact("radius²", radius_sq.clone());
            rep.approx("radius", sqrt_decimal(&radius_sq, DIGITS));
            rep.exact("radius² (closed form)", closed.radius_sq);
            rep.text("hypothesis not smooth", yes(hypotheses.not_smooth));
            rep.text("hypothesis chain fibers", yes(hypotheses.chain_fibers));
            rep.text("hypothesis hyperelliptic", yes(hypotheses.hyperelliptic));
            rep.text("hypothesis one positive node", yes(hypotheses.one_positive_node));
            if let Some(w) = warning {
                rep.warn(w);
            }
            if !hypotheses.satisfied() {
                rep.warn("applicability hypotheses not all asserted");
            }
        }
        BoundsKind::Reference => {
            let regime = select_regime(&stats, args.irreducible)?;
            let r2 = reference_radius_sq(&stats, regime)?;
            rep.text(
                "regime",
                match regime {
                    ReferenceRegime::Smooth => "smooth",
                    ReferenceRegime::Irreducible => "irreducible fibers",
                    ReferenceRegime::GenusTwo => "genus 2",
                },
            );
            rep.exact("radius²", r2.clone());
            rep.approx("radius", sqrt_decimal(&r2, DIGITS));
        }
    }
    for w in stats.warnings() {
        rep.warn(w);
    }
    Ok(rep)
}

/// Runs every `.mg` (as `e-invariant`) and `.fib` (as `fiber analyze`) file
/// of `dir` in parallel. Reports come out in file-name order; the exit code
/// is the worst of the individual codes.
fn batch(dir: &Path, json: bool) -> Result<(String, i32), CliError> {
    let io = |e: std::io::Error| CliError::Io {
        path: dir.to_path_buf(),
        message: e.to_string(),
    };
    let mut files: Vec<PathBuf> = fs::read_dir(dir)
        .map_err(io)?
        .map(|entry| entry.map(|e| e.path()).map_err(io))
        .collect::<Result<_, _>>()?;
    files.retain(|p| matches!(p.extension().and_then(|e| e.to_str()), Some("mg" | "fib")));
    files.sort();
    let results: Vec<(String, i32)> = files
        .par_iter()
        .map(|path| {
            let command = if path.extension().is_some_and(|e| e == "fib") {
                Command::Fiber(FiberCommand::Analyze { file: path.clone() })
            } else {
                Command::EInvariant { file: path.clone() }
            };
            let name = path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
            let body = execute(&command).map(|r| r.render(json));
            match (body, json) {
                (Ok(text), true) => (text, 0),
                (Ok(text), false) => (format!("== {name} ==\n{text}"), 0),
                (Err(e), true) => {
                    let obj = serde_json::json!({ "file": name, "error": e.to_string() });
                    (format!("{obj}\n"), e.exit_code())
                }
                (Err(e), false) => (format!("== {name} ==\nerror: {e}\n"), e.exit_code()),
            }
        })
        .collect();
    let code = results.iter().map(|(_, c)| *c).max().unwrap_or(0);
    Ok((results.into_iter().map(|(t, _)| t).collect(), code))
}
