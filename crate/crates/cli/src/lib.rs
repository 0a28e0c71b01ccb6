//! Command-line front end for `stackedcc-core`.
//!
//! [`run`] parses an argument vector, executes one subcommand and returns a
//! [`CommandResult`]; the binary prints the payload as JSON on stdout and
//! the summary on stderr.

use std::fs;
use std::io::Read;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};
use stackedcc_core::cocircular::{
    detect_symmetry, radius_vs_r0, semicircle_check, side_diagonal_report, solve_cocircular_4body, SYMMETRY_TOL,
};
use stackedcc_core::collinear::{collinear_nonextension_witness, default_witness_grid, euler_solve};
use stackedcc_core::config::normalized_residual;
use stackedcc_core::extension::{build_extension, classify_extensions};
use stackedcc_core::special::{self, named_config, NamedConfig, NAMED_KINDS};
use stackedcc_core::{
    cc_report, ApexChoice, CocircularCC, Configuration, Constraint, Error, Way, DEFAULT_TOLERANCE,
};

pub const TOLERANCE_ENV: &str = "STACKEDCC_TOL";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Ok,
    Failed,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CommandResult {
    pub status: Status,
    pub payload: Value,
    pub human_summary: String,
}

impl CommandResult {
    fn ok(payload: Value, human_summary: impl Into<String>) -> Self {
        Self { status: Status::Ok, payload, human_summary: human_summary.into() }
    }

    fn failed(code: &str, message: impl Into<String>) -> Self {
        let message = message.into();
        Self {
            status: Status::Failed,
            payload: json!({ "error": code, "message": message }),
            human_summary: format!("error [{code}]: {message}"),
        }
    }

    pub fn is_ok(&self) -> bool {
        self.status == Status::Ok
    }

    pub fn exit_code(&self) -> i32 {
        if self.is_ok() {
            0
        } else {
            1
        }
    }
}

/// Errors raised before or around the core library.
#[derive(Debug)]
enum CliError {
    Core(Error),
    Io(String),
    Usage(String),
    WayNotApplicable(Way),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Core(e.into())
    }
}

impl From<CliError> for CommandResult {
    fn from(e: CliError) -> Self {
        match e {
            CliError::Core(e) => CommandResult::failed(e.code(), e.to_string()),
            CliError::Io(msg) => CommandResult::failed("io", msg),
            CliError::Usage(msg) => CommandResult::failed("usage", msg),
            CliError::WayNotApplicable(w) => {
                CommandResult::failed("way_not_applicable", format!("extension way {w} does not apply"))
            }
        }
    }
}

type CliResult = std::result::Result<CommandResult, CliError>;

#[derive(Parser, Debug)]
#[command(name = "stackedcc", version, about = "Stacked central configurations of the n-body problem")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check whether a configuration is central.
    Verify {
        /// Configuration JSON file, or "-" for stdin.
        config: PathBuf,
        /// Bound on the normalized residual (default: $STACKEDCC_TOL or 1e-10).
        #[arg(long)]
        tol: Option<f64>,
    },
    /// List the ways a central configuration extends by one body.
    Classify { config: PathBuf },
    /// Add one body following an extension way.
    Extend {
        config: PathBuf,
        #[arg(long)]
        way: Way,
        #[arg(long)]
        m0: f64,
        #[arg(long, default_value = "plus")]
        apex: ApexChoice,
    },
    /// Euler's three collinear solutions for m0 added to (m1 at x1, m2 at x2).
    Euler {
        /// m1,m2,m0
        #[arg(long, value_delimiter = ',', required = true)]
        m: Vec<f64>,
        /// x1,x2
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, default_values_t = [0.0, 1.0])]
        x: Vec<f64>,
    },
    /// Show that a collinear CC with n >= 3 has no collinear extension.
    CollinearWitness {
        config: PathBuf,
        #[arg(long, value_delimiter = ',', default_values_t = [0.01, 0.1, 1.0, 10.0, 100.0])]
        m0: Vec<f64>,
        #[arg(long, default_value_t = 2001)]
        points: usize,
    },
    /// Side/diagonal report for a co-circular central configuration.
    CocircularCheck { config: PathBuf },
    /// Solve for a four-body co-circular central configuration.
    Solve4 {
        /// CocircularCC JSON (angles, masses, radius) or Configuration JSON.
        #[arg(long)]
        seed: PathBuf,
        #[arg(long, default_value = "fixed-angles")]
        constraint: Constraint,
    },
    /// Regular n-gon table: A(n), n/A(n), (n/A(n))^(1/3) and thresholds.
    Ngon {
        #[arg(long, default_value_t = 2)]
        from: usize,
        #[arg(long, default_value_t = 500)]
        to: usize,
        /// Also write the table as CSV to this path ("-" for stdout).
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Bi-pyramid over the regular n-gon with equal polar masses.
    Bipyramid {
        #[arg(long)]
        n: usize,
    },
    /// Generate a named fixture configuration.
    Named {
        kind: String,
        #[command(flatten)]
        opts: NamedOpts,
    },
}

#[derive(Args, Debug)]
struct NamedOpts {
    #[arg(long, value_delimiter = ',')]
    masses: Option<Vec<f64>>,
    /// Number of bodies for regular_ngon / ngon_plus_center.
    #[arg(long)]
    n: Option<usize>,
    /// Side, edge, distance or radius, depending on the kind.
    #[arg(long, default_value_t = 1.0)]
    size: f64,
    #[arg(long, default_value_t = 1.0)]
    m0: f64,
    /// Base configuration for pyramid_over.
    #[arg(long)]
    base: Option<PathBuf>,
    #[arg(long, default_value = "plus")]
    apex: ApexChoice,
}

fn read_input(path: &Path) -> std::result::Result<String, CliError> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| CliError::Io(format!("stdin: {e}")))?;
        Ok(s)
    } else {
        fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
    }
}

fn read_config(path: &Path) -> std::result::Result<Configuration, CliError> {
    Ok(Configuration::from_json(&read_input(path)?)?)
}

fn tolerance(flag: Option<f64>) -> std::result::Result<f64, CliError> {
    if let Some(t) = flag {
        return Ok(t);
    }
    match std::env::var(TOLERANCE_ENV) {
        Ok(s) => s
            .trim()
            .parse()
            .map_err(|_| CliError::Usage(format!("{TOLERANCE_ENV}={s:?} is not a number"))),
        Err(_) => Ok(DEFAULT_TOLERANCE),
    }
}

/// Parses `argv` (including the program name) and runs one subcommand.
pub fn run<I, T>(argv: I) -> CommandResult
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    CommandResult::ok(json!({ "help": text }), text)
                }
                _ => CommandResult::failed("usage", text),
            };
        }
    };
    dispatch(cli.command).unwrap_or_else(CommandResult::from)
}

fn dispatch(command: Command) -> CliResult {
    match command {
        Command::Verify { config, tol } => verify(&config, tol),
        Command::Classify { config } => classify(&config),
        Command::Extend { config, way, m0, apex } => extend(&config, way, m0, apex),
        Command::Euler { m, x } => euler(&m, &x),
        Command::CollinearWitness { config, m0, points } => witness(&config, &m0, points),
        Command::CocircularCheck { config } => cocircular_check(&config),
        Command::Solve4 { seed, constraint } => solve4(&seed, constraint),
        Command::Ngon { from, to, csv } => ngon(from, to, csv.as_deref()),
        Command::Bipyramid { n } => bipyramid(n),
        Command::Named { kind, opts } => named(&kind, opts),
    }
}

fn verify(path: &Path, tol: Option<f64>) -> CliResult {
    let config = read_config(path)?;
    let report = cc_report(&config, tolerance(tol)?)?;
    let summary = format!(
        "n={} central={} residual={:.3e} (tol {:.1e}) lambda={} r0={}",
        config.len(),
        report.is_central,
        report.residual_norm,
        report.tolerance,
        report.multiplier,
        report.r0
    );
    Ok(CommandResult::ok(serde_json::to_value(&report)?, summary))
}

fn classify(path: &Path) -> CliResult {
    let config = read_config(path)?;
    let plans = classify_extensions(&config)?;
    let ways: Vec<String> = plans.iter().map(|p| p.way.to_string()).collect();
    let summary = if ways.is_empty() {
        "no extension way applies".to_string()
    } else {
        format!("extension ways: {}", ways.join(", "))
    };
    Ok(CommandResult::ok(serde_json::to_value(&plans)?, summary))
}

fn extend(path: &Path, way: Way, m0: f64, apex: ApexChoice) -> CliResult {
    let config = read_config(path)?;
    let plans = classify_extensions(&config)?;
    let plan = plans.iter().find(|p| p.way == way).ok_or(CliError::WayNotApplicable(way))?;
    let extended = build_extension(&config, plan, m0, apex)?;
    let report = cc_report(&extended, DEFAULT_TOLERANCE)?;
    let summary = format!(
        "way {way}: added m0={m0} at {:?}, central={} residual={:.3e}",
        [extended.positions()[0].x, extended.positions()[0].y, extended.positions()[0].z],
        report.is_central,
        report.residual_norm
    );
    Ok(CommandResult::ok(
        json!({ "plan": plan, "configuration": extended, "verification": report }),
        summary,
    ))
}

fn euler(m: &[f64], x: &[f64]) -> CliResult {
    if m.len() != 3 || x.len() != 2 {
        return Err(CliError::Usage(format!(
            "euler needs --m m1,m2,m0 and --x x1,x2 (got {} masses, {} positions)",
            m.len(),
            x.len()
        )));
    }
    let sols = euler_solve(m[0], m[1], m[2], x[0], x[1])?;
    let out: Vec<Value> = sols
        .iter()
        .map(|s| {
            json!({
                "interval": s.interval,
                "x0": s.x0,
                "residual": normalized_residual(&s.configuration),
                "configuration": s.configuration,
            })
        })
        .collect();
    let summary = format!(
        "x0 = {} (left), {} (middle), {} (right)",
        sols[0].x0, sols[1].x0, sols[2].x0
    );
    Ok(CommandResult::ok(Value::Array(out), summary))
}

fn witness(path: &Path, m0s: &[f64], points: usize) -> CliResult {
    let config = read_config(path)?;
    let grid = default_witness_grid(&config, points)?;
    let reports = m0s
        .iter()
        .map(|&m0| collinear_nonextension_witness(&config, m0, &grid))
        .collect::<stackedcc_core::Result<Vec<_>>>()?;
    let all = reports.iter().all(|r| r.bounded_away);
    let min = reports.iter().map(|r| r.min_max_residual).fold(f64::INFINITY, f64::min);
    let summary = format!("no collinear extension: {all} (smallest normalized residual {min:.3e})");
    Ok(CommandResult::ok(json!({ "bounded_away": all, "reports": reports }), summary))
}

fn cocircular_check(path: &Path) -> CliResult {
    let config = read_config(path)?;
    let (cc, permutation) = CocircularCC::from_configuration(&config)?;
    let report = side_diagonal_report(&cc)?;
    let semicircle_ok = semicircle_check(&cc);
    let margin = radius_vs_r0(&cc);
    let symmetry = if cc.len() == 4 { Some(detect_symmetry(&cc, SYMMETRY_TOL)?) } else { None };
    let summary = format!(
        "n={} sides<r0: {} every vertex has a diagonal>r0: {} not in a semicircle: {} r0-r={:.6}",
        cc.len(),
        report.sides_below_r0,
        report.every_vertex_has_long_diagonal,
        semicircle_ok,
        margin
    );
    Ok(CommandResult::ok(
        json!({
            "cocircular": cc,
            "permutation": permutation,
            "report": report,
            "holds": report.holds(),
            "semicircle_ok": semicircle_ok,
            "r0_minus_r": margin,
            "symmetry": symmetry,
        }),
        summary,
    ))
}

fn solve4(seed: &Path, constraint: Constraint) -> CliResult {
    let text = read_input(seed)?;
    let value: Value = serde_json::from_str(&text)?;
    let seed = if value.get("angles").is_some() {
        serde_json::from_value::<CocircularCC>(value)?
    } else {
        CocircularCC::from_configuration(&Configuration::from_json_value(value)?)?.0
    };
    let outcome = solve_cocircular_4body(&seed, constraint)?;
    let symmetry = detect_symmetry(&outcome.cc, SYMMETRY_TOL)?;
    let report = side_diagonal_report(&outcome.cc)?;
    let summary = format!(
        "converged in {} iterations, residual {:.3e}; angles {:?}, masses {:?}",
        outcome.iterations,
        outcome.cc_residual,
        outcome.cc.angles(),
        outcome.cc.masses()
    );
    let mut payload = serde_json::to_value(&outcome.cc)?;
    payload["iterations"] = json!(outcome.iterations);
    payload["cc_residual"] = json!(outcome.cc_residual);
    payload["constraint"] = json!(outcome.constraint);
    payload["symmetry"] = json!(symmetry);
    payload["side_diagonal_holds"] = json!(report.holds());
    Ok(CommandResult::ok(payload, summary))
}

fn ngon(from: usize, to: usize, csv: Option<&Path>) -> CliResult {
    let rows = special::ngon_table(from, to)?;
    if let Some(path) = csv {
        let mut buf = Vec::new();
        special::write_ngon_csv(&rows, &mut buf).map_err(|e| CliError::Io(e.to_string()))?;
        if path.as_os_str() == "-" {
            print!("{}", String::from_utf8_lossy(&buf));
        } else {
            fs::write(path, buf).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        }
    }
    let flip = rows.windows(2).find(|w| w[0].pyramidal_ok && !w[1].pyramidal_ok);
    let summary = match flip {
        Some(w) => format!(
            "{} rows; n/A(n) = {} at n={} and {} at n={}",
            rows.len(),
            w[0].n_over_a,
            w[0].n,
            w[1].n_over_a,
            w[1].n
        ),
        None => format!("{} rows; no sign change of r0 - r in range", rows.len()),
    };
    Ok(CommandResult::ok(serde_json::to_value(&rows)?, summary))
}

fn bipyramid(n: usize) -> CliResult {
    let b = special::build_bipyramid(n)?;
    let residual = normalized_residual(&b.configuration);
    let summary = format!("n={n}: polar mass {} R0={} residual={residual:.3e}", b.polar_mass, b.big_r0);
    let mut payload = serde_json::to_value(&b)?;
    payload["residual"] = json!(residual);
    Ok(CommandResult::ok(payload, summary))
}

fn fixed<const N: usize>(masses: &Option<Vec<f64>>) -> std::result::Result<[f64; N], CliError> {
    match masses {
        None => Ok([1.0; N]),
        Some(v) => v
            .as_slice()
            .try_into()
            .map_err(|_| CliError::Usage(format!("--masses needs {N} values, got {}", v.len()))),
    }
}

fn ring(opts: &NamedOpts) -> std::result::Result<Vec<f64>, CliError> {
    match (&opts.masses, opts.n) {
        (Some(m), None) => Ok(m.clone()),
        (Some(m), Some(n)) if m.len() == n => Ok(m.clone()),
        (Some(m), Some(n)) => Err(CliError::Usage(format!("--n {n} but {} masses", m.len()))),
        (None, Some(n)) => Ok(vec![1.0; n]),
        (None, None) => Err(CliError::Usage("give --n or --masses".into())),
    }
}

fn named(kind: &str, opts: NamedOpts) -> CliResult {
    let s = opts.size;
    let fixture = match kind {
        "two_body" => NamedConfig::TwoBody { masses: fixed(&opts.masses)?, distance: s },
        "equilateral_triangle" => NamedConfig::EquilateralTriangle { masses: fixed(&opts.masses)?, side: s },
        "square" => NamedConfig::Square { masses: fixed(&opts.masses)?, side: s },
        "regular_ngon" => NamedConfig::RegularNgon { masses: ring(&opts)?, radius: s },
        "ngon_plus_center" => NamedConfig::NgonPlusCenter { masses: ring(&opts)?, radius: s, m0: opts.m0 },
        "square_plus_center" => NamedConfig::SquarePlusCenter { masses: fixed(&opts.masses)?, side: s, m0: opts.m0 },
        "regular_tetrahedron" => NamedConfig::RegularTetrahedron { masses: fixed(&opts.masses)?, edge: s },
        "tetrahedron_plus_center" => {
            NamedConfig::TetrahedronPlusCenter { masses: fixed(&opts.masses)?, edge: s, m0: opts.m0 }
        }
        "pyramid_over" => {
            let base = opts.base.as_deref().ok_or_else(|| CliError::Usage("pyramid_over needs --base".into()))?;
            NamedConfig::PyramidOver { base: read_config(base)?, m0: opts.m0, apex: opts.apex }
        }
        other => {
            return Err(CliError::Usage(format!(
                "unknown kind {other:?}; expected one of {}",
                NAMED_KINDS.join(", ")
            )))
        }
    };
    let config = named_config(&fixture)?;
    let summary = format!("{kind}: {} bodies, residual {:.3e}", config.len(), normalized_residual(&config));
    Ok(CommandResult::ok(serde_json::to_value(&config)?, summary))
}
