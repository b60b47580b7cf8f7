use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use liesoliton::catalog;
use liesoliton::flow::{self, SolitonEvolution};
use liesoliton::report;
use liesoliton::soliton;
use liesoliton::specfile::{self, AlgebraSpecFile};
use liesoliton::theorems::{self, RicciOracle, SuiteOptions, TheoremRow};
use liesoliton::two_step;
use liesoliton::{Error, Matrix, MetricLieAlgebra, Tolerances};

const EXIT_THEOREM: u8 = 1;
const EXIT_VALIDATION: u8 = 2;
const EXIT_BREAKDOWN: u8 = 3;
const EXIT_PRECONDITION: u8 = 4;

#[derive(Parser)]
#[command(name = "liesoliton", version, about = "Ricci solitons on metric Lie algebras")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Geometry, soliton certificates and structure report for one algebra.
    Analyze {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Integrate the Ricci flow and write the trajectory as CSV.
    Flow {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
        t_end: f64,
        #[arg(long, default_value_t = flow::DEFAULT_DT)]
        dt: f64,
        /// Soliton constant for the self-similarity check; defaults to the certificate value.
        #[arg(long, allow_negative_numbers = true)]
        lambda: Option<f64>,
        /// Trajectory CSV destination; stdout when omitted.
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[arg(long)]
        no_banner: bool,
    },
    /// Build the rank-one solvable extension and test it for Einstein.
    Extend {
        #[command(flatten)]
        input: InputArgs,
        /// Fixed scale of the adjoined derivation.
        #[arg(long, conflicts_with = "auto")]
        scale: Option<f64>,
        /// Search for the Einstein scale.
        #[arg(long)]
        auto: bool,
        /// Diagonal derivation to use instead of the nilsoliton one, comma separated.
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        diag: Option<Vec<f64>>,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Run the theorem checks over the catalog.
    Theorems {
        /// Comma-separated catalog names; the whole shipped catalog when omitted.
        #[arg(long)]
        entries: Option<String>,
        /// Negate the Ricci tensor fed to the solvers (self-test; rows should fail).
        #[arg(long)]
        inject_wrong_sign: bool,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Catalog operations.
    Catalog {
        #[command(subcommand)]
        action: CatalogAction,
    },
}

#[derive(Subcommand)]
enum CatalogAction {
    /// List the shipped algebras.
    List {
        #[command(flatten)]
        out: OutputArgs,
    },
}

#[derive(Args)]
struct InputArgs {
    /// Catalog name or path to an algebra file.
    input: String,
    /// File with `dim` rows replacing the metric.
    #[arg(long)]
    metric: Option<PathBuf>,
}

#[derive(Args)]
struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[arg(short, long)]
    output: Option<PathBuf>,
    /// Omit the timestamped header of text output.
    #[arg(long)]
    no_banner: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Csv,
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("{0}")]
    Validation(String),
    #[error("{0}")]
    Precondition(String),
    #[error("{0}")]
    Io(#[from] io::Error),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            Self::Validation(_) | Self::Io(_) => EXIT_VALIDATION,
            Self::Precondition(_) => EXIT_PRECONDITION,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::NotNilpotent | Error::NotTwoStep(_) | Error::Unimodular | Error::NotDerivation(_) => {
                Self::Precondition(e.to_string())
            }
            _ => Self::Validation(e.to_string()),
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

fn banner(command: &str) -> String {
    let now = chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true);
    format!("# liesoliton {} {command} at {now}\n", env!("CARGO_PKG_VERSION"))
}

fn emit(out: &OutputArgs, command: &str, body: &str) -> CliResult<()> {
    let mut text = String::new();
    if out.format == Format::Text && !out.no_banner {
        text.push_str(&banner(command));
    }
    text.push_str(body);
    write_to(out.output.as_deref(), &text)
}

fn write_to(path: Option<&Path>, text: &str) -> CliResult<()> {
    match path {
        Some(p) => fs::write(p, text)?,
        None => io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

/// Resolves a file path or catalog name, applying `--metric` if given.
fn load(input: &InputArgs, tol: &Tolerances) -> CliResult<(String, MetricLieAlgebra)> {
    let path = Path::new(&input.input);
    let (name, mla) = if path.is_file() {
        let file = AlgebraSpecFile::parse(&fs::read_to_string(path)?)?;
        let mla = file.to_metric_lie_algebra(tol)?;
        (file.name, mla)
    } else {
        (input.input.clone(), catalog::lookup(&input.input)?)
    };
    let mla = match &input.metric {
        Some(p) => {
            let g = specfile::parse_metric(&fs::read_to_string(p)?, mla.dim())?;
            mla.with_metric(g)?
        }
        None => mla,
    };
    Ok((name, mla))
}

fn cmd_analyze(input: &InputArgs, out: &OutputArgs, tol: &Tolerances) -> CliResult<u8> {
    let (name, mla) = load(input, tol)?;
    let r = report::analyze(&name, &mla, tol)?;
    let body = match out.format {
        Format::Text => report::render_text(&r),
        Format::Csv => report::render_csv(&r),
    };
    emit(out, "analyze", &body)?;
    Ok(0)
}

/// Soliton constant from the nilsoliton or left-invariant certificate, if feasible.
fn certificate_lambda(mla: &MetricLieAlgebra, tol: &Tolerances) -> Option<f64> {
    let curv = mla.curvature();
    if let Ok(c) = soliton::solve_nilsoliton_with(mla, &curv, tol) {
        if c.verdict.is_feasible() {
            return c.lambda;
        }
    }
    let c = soliton::solve_left_invariant_field_with(mla, &curv, tol);
    c.verdict.is_feasible().then_some(c.lambda).flatten()
}

fn flow_summary(traj: &flow::FlowTrajectory, lambda: Option<f64>, tol: &Tolerances) -> String {
    let mut s = String::new();
    match lambda.map(|l| (l, flow::verify_soliton_evolution(traj, l, tol))) {
        Some((l, SolitonEvolution::Deviation(d))) => {
            s.push_str(&format!(
                "soliton_evolution: lambda {l}, max deviation {d:e} (tol {})\n",
                tol.flow
            ));
        }
        Some((l, SolitonEvolution::Degenerate { max_abs_dr_dt })) => {
            s.push_str(&format!(
                "soliton_evolution: lambda {l}, R0 = 0, max |dR/dt| {max_abs_dr_dt:e}\n"
            ));
        }
        None => s.push_str("soliton_evolution: no feasible certificate\n"),
    }
    let heat = flow::verify_heat_law(traj);
    s.push_str(&format!(
        "heat_law: max residual {:e}, nondecreasing {}\n",
        heat.max_residual, heat.nondecreasing
    ));
    s.push_str(&format!(
        "volume_law: max relative residual {:e}\n",
        flow::verify_volume_law(traj)
    ));
    let rv = flow::verify_rv_monotonicity(traj, tol);
    s.push_str(&format!(
        "rv_invariant: min slope {:e}, max rel mismatch {:e}, matches {}\n",
        rv.min_slope, rv.max_rel_mismatch, rv.matches
    ));
    s.push_str(&format!(
        "self_similarity: max spectrum drift {:e}\n",
        flow::verify_self_similarity(traj)
    ));
    s
}

fn cmd_flow(
    input: &InputArgs,
    t_end: f64,
    dt: f64,
    lambda: Option<f64>,
    output: Option<&Path>,
    no_banner: bool,
    tol: &Tolerances,
) -> CliResult<u8> {
    let (name, mla) = load(input, tol)?;
    let traj = flow::integrate_flow(&mla, t_end, dt, tol)?;
    write_to(output, &report::trajectory_to_csv(&traj))?;
    let mut summary = String::new();
    if !no_banner {
        summary.push_str(&banner("flow"));
    }
    summary.push_str(&format!(
        "input: {name}, t_end {t_end}, dt {dt}, steps {}\n",
        traj.len() - 1
    ));
    let lambda = lambda.or_else(|| certificate_lambda(&mla, tol));
    summary.push_str(&flow_summary(&traj, lambda, tol));
    // Keep stdout pure CSV when the trajectory goes there.
    if output.is_some() {
        print!("{summary}");
    } else {
        eprint!("{summary}");
    }
    if let Some(t) = traj.breakdown {
        eprintln!("flow breakdown: metric left the positive cone at t* = {t}");
        return Ok(EXIT_BREAKDOWN);
    }
    Ok(0)
}

fn cmd_extend(
    input: &InputArgs,
    scale: Option<f64>,
    auto: bool,
    diag: Option<&[f64]>,
    out: &OutputArgs,
    tol: &Tolerances,
) -> CliResult<u8> {
    if scale.is_none() && !auto {
        return Err(CliError::Validation("extend needs --scale S or --auto".into()));
    }
    let (name, mla) = load(input, tol)?;
    let n = mla.dim();
    if !mla.alg().is_nilpotent(tol) {
        return Err(CliError::Precondition(format!("{name} is not nilpotent")));
    }
    let d = match diag {
        Some(v) if v.len() != n => {
            return Err(CliError::Validation(format!(
                "--diag needs {n} entries, got {}",
                v.len()
            )));
        }
        Some(v) => Matrix::from_diagonal(&liesoliton::Vector::from_column_slice(v)),
        None => {
            let cert = soliton::solve_nilsoliton(&mla, tol)?;
            if !cert.verdict.is_feasible() {
                return Err(CliError::Precondition("no nilsoliton structure found".into()));
            }
            if mla.alg().is_abelian() {
                Matrix::identity(n, n)
            } else {
                let d = cert.derivation.expect("feasible nilsoliton has D");
                two_step::metric_symmetric_part(&d, mla.metric())
            }
        }
    };
    let (s, searched) = match scale {
        Some(s) => (s, None),
        None => {
            let found = two_step::find_einstein_scale(&mla, &d, tol)?;
            (found.scale, Some(found.found))
        }
    };
    let ext = two_step::solvable_extension(&mla, &d, s, tol)?;
    let check = two_step::is_einstein(&ext.extended, tol);
    let diag_str = (0..n)
        .map(|i| report::format_number(d[(i, i)]))
        .collect::<Vec<_>>()
        .join(" ");
    let mut rows: Vec<(&str, String)> = vec![
        ("name", name),
        ("dim", (n + 1).to_string()),
        ("derivation_diag", diag_str),
        ("scale", report::format_number(s)),
        ("einstein", check.einstein.to_string()),
        ("lambda_einstein", report::format_number(check.lambda_einstein)),
        ("einstein_residual", report::format_number(check.residual)),
    ];
    if let Some(found) = searched {
        rows.push(("scale_search_converged", found.to_string()));
    }
    let body = render_pairs(&rows, out.format, tol.sol);
    emit(out, "extend", &body)?;
    Ok(0)
}

fn render_pairs(rows: &[(&str, String)], format: Format, tol: f64) -> String {
    match format {
        Format::Text => {
            let mut s: String = rows.iter().map(|(k, v)| format!("{k:<24} {v}\n")).collect();
            s.push_str(&format!("{:<24} {}\n", "tolerance", report::format_number(tol)));
            s
        }
        Format::Csv => {
            let mut s = String::from("key,value,tolerance\n");
            for (k, v) in rows {
                s.push_str(&format!("{k},{v},{}\n", report::format_number(tol)));
            }
            s
        }
    }
}

fn render_theorems(rows: &[TheoremRow], format: Format) -> String {
    match format {
        Format::Text => rows
            .iter()
            .map(|r| {
                let mark = if r.passed { "PASS" } else { "FAIL" };
                format!("[{mark}] {:<48} {:<18} {}\n", r.theorem, r.instance, r.detail)
            })
            .collect(),
        Format::Csv => {
            let mut s = String::from("theorem,instance,passed,detail\n");
            for r in rows {
                s.push_str(&format!(
                    "{},\"{}\",{},\"{}\"\n",
                    r.theorem, r.instance, r.passed, r.detail
                ));
            }
            s
        }
    }
}

fn cmd_theorems(entries: Option<&str>, wrong_sign: bool, out: &OutputArgs, tol: &Tolerances) -> CliResult<u8> {
    let selected = match entries {
        None => catalog::catalog(),
        Some(list) => list
            .split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(|name| {
                catalog::lookup(name).map(|algebra| catalog::CatalogEntry {
                    name: name.to_string(),
                    algebra,
                })
            })
            .collect::<liesoliton::Result<Vec<_>>>()?,
    };
    if selected.is_empty() {
        eprintln!("warning: empty catalog, nothing to check");
    }
    let opts = SuiteOptions {
        oracle: if wrong_sign {
            RicciOracle::WrongSign
        } else {
            RicciOracle::Standard
        },
        ..SuiteOptions::default()
    };
    let rows = theorems::run_suite(&selected, &opts, tol);
    emit(out, "theorems", &render_theorems(&rows, out.format))?;
    let failed: Vec<_> = rows.iter().filter(|r| !r.passed).collect();
    if failed.is_empty() {
        return Ok(0);
    }
    for r in &failed {
        eprintln!("failed: {} on {}", r.theorem, r.instance);
    }
    Ok(EXIT_THEOREM)
}

fn cmd_catalog_list(out: &OutputArgs) -> CliResult<u8> {
    let entries = catalog::catalog();
    let body = match out.format {
        Format::Text => entries
            .iter()
            .map(|e| format!("{:<18} dim {}\n", e.name, e.algebra.dim()))
            .collect::<String>(),
        Format::Csv => {
            let mut s = String::from("name,dim\n");
            for e in &entries {
                s.push_str(&format!("\"{}\",{}\n", e.name, e.algebra.dim()));
            }
            s
        }
    };
    emit(out, "catalog list", &body)?;
    Ok(0)
}

fn run(cli: Cli) -> CliResult<u8> {
    let tol = Tolerances::from_env();
    match cli.command {
        Command::Analyze { input, out } => cmd_analyze(&input, &out, &tol),
        Command::Flow {
            input,
            t_end,
            dt,
            lambda,
            output,
            no_banner,
        } => cmd_flow(&input, t_end, dt, lambda, output.as_deref(), no_banner, &tol),
        Command::Extend {
            input,
            scale,
            auto,
            diag,
            out,
        } => cmd_extend(&input, scale, auto, diag.as_deref(), &out, &tol),
        Command::Theorems {
            entries,
            inject_wrong_sign,
            out,
        } => cmd_theorems(entries.as_deref(), inject_wrong_sign, &out, &tol),
        Command::Catalog {
            action: CatalogAction::List { out },
        } => cmd_catalog_list(&out),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}
