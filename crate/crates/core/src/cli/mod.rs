//! Command-line driver.
//!
//! Exit codes: 0 success, 1 invalid input, 2 numerical failure,
//! 3 acceptance failure.

pub mod config;
pub mod output;

use std::fmt;
use std::fs::File;
use std::io::{BufWriter, Write};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::acceptance;
use crate::classify::{classify, ClassificationReport, FitWindow, LimitValue};
use crate::error::Error;
use crate::exponents::{exponents, Dimension};
use crate::family::{exact_stability, power_solution, FamilyParameter};
use crate::nonlinearity::Nonlinearity;
use crate::ode::{solve_ivp, SolverSettings};
use crate::profile::{RadialGrid, RadialProfile};
use crate::stability::{
    assemble_pencil, decide_side, reduced_form, stability_scan, AnnulusWindow, Side, SideSchedule,
    TestFunction,
};

pub use config::{
    parse_args, parse_config, Command, ConfigError, NonlinearitySpec, OutputFormat, RunConfig,
};
pub use output::{headers, Cell, Table};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VALIDATION: i32 = 1;
pub const EXIT_NUMERICAL: i32 = 2;
pub const EXIT_ACCEPTANCE: i32 = 3;

/// Most dyadic levels used by classification fits.
pub const MAX_FIT_LEVELS: usize = 10;

#[derive(Debug)]
pub enum CliError {
    Config(ConfigError),
    Run(Error),
    Io(std::io::Error),
    /// The acceptance suite ran; the ids of failed checks.
    Acceptance(Vec<u32>),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Io(_) => EXIT_VALIDATION,
            CliError::Run(e) if e.is_numerical() => EXIT_NUMERICAL,
            CliError::Run(_) => EXIT_VALIDATION,
            CliError::Acceptance(_) => EXIT_ACCEPTANCE,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(e) => write!(f, "invalid configuration: {e}"),
            CliError::Run(e) if e.is_numerical() => write!(f, "numerical failure: {e}"),
            CliError::Run(e) => write!(f, "invalid input: {e}"),
            CliError::Io(e) => write!(f, "output error: {e}"),
            CliError::Acceptance(ids) => write!(f, "acceptance checks failed: {ids:?}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Run(e)
    }
}

impl From<ConfigError> for CliError {
    fn from(e: ConfigError) -> Self {
        CliError::Config(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

/// Parses `args`, runs the command, writes the table and returns the
/// process exit code. Diagnostics go to standard error.
pub fn main_with_args(args: &[String]) -> i32 {
    let result = parse_args(args).map_err(CliError::from).and_then(|cfg| {
        let table = execute(&cfg)?;
        for note in &table.notes {
            eprintln!("{note}");
        }
        emit(&cfg, &table)?;
        match failed_checks(&cfg, &table) {
            ids if ids.is_empty() => Ok(()),
            ids => Err(CliError::Acceptance(ids)),
        }
    });
    match result {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn emit(cfg: &RunConfig, table: &Table) -> Result<(), CliError> {
    match &cfg.output_path {
        Some(path) => {
            let mut w = BufWriter::new(File::create(path)?);
            table.write(cfg.output_format, &mut w)?;
            w.flush()?;
        }
        None => {
            let stdout = std::io::stdout();
            table.write(cfg.output_format, stdout.lock())?;
        }
    }
    Ok(())
}

/// Runs a command and returns its result table.
pub fn execute(cfg: &RunConfig) -> Result<Table, CliError> {
    match cfg.command {
        Command::Exponents => Ok(exponents_table(cfg)),
        Command::Family => family_table(cfg),
        Command::Solve => solve_table(cfg),
        Command::Stability => stability_table(cfg),
        Command::Classify => classify_table(cfg),
        Command::Sweep => sweep_table(cfg),
        Command::Verify => acceptance_table(cfg),
    }
}

/// Ids of failed checks in a `verify` table; empty for other commands.
pub fn failed_checks(cfg: &RunConfig, table: &Table) -> Vec<u32> {
    if cfg.command != Command::Verify {
        return Vec::new();
    }
    table
        .rows
        .iter()
        .filter(|row| row[2] == Cell::Bool(false))
        .filter_map(|row| match row[0] {
            Cell::Int(id) => Some(id as u32),
            _ => None,
        })
        .collect()
}

fn dimensions(cfg: &RunConfig) -> Result<Vec<Dimension>, CliError> {
    let (lo, hi) = cfg
        .dimension_range
        .unwrap_or((cfg.dimension.get(), cfg.dimension.get()));
    Ok((lo..=hi).map(Dimension::new).collect::<Result<_, _>>()?)
}

/// `steps` equally spaced values over the configured range, or the single
/// configured `alpha`.
fn alphas(cfg: &RunConfig, default: (f64, f64)) -> Vec<f64> {
    match (cfg.alpha_range, cfg.alpha) {
        (None, Some(a)) => vec![a],
        (range, _) => {
            let (lo, hi) = range.unwrap_or(default);
            if cfg.steps == 1 {
                return vec![lo];
            }
            let last = (cfg.steps - 1) as f64;
            (0..cfg.steps)
                .map(|k| (lo * (last - k as f64) + hi * k as f64) / last)
                .collect()
        }
    }
}

fn exponents_table(cfg: &RunConfig) -> Table {
    let mut t = Table::new(headers::EXPONENTS);
    let (lo, hi) = cfg
        .dimension_range
        .unwrap_or((cfg.dimension.get(), cfg.dimension.get()));
    for n in lo..=hi {
        let e = exponents(Dimension::new(n).expect("validated range"));
        t.push(vec![
            Cell::Int(n.into()),
            Cell::Real(e.lambda_plus),
            Cell::Real(e.lambda_minus),
            Cell::Real(e.gap()),
        ]);
    }
    t
}

/// Fit window over the last (at most ten) doublings below the horizon.
pub fn default_fit_window(profile: &RadialProfile) -> Result<FitWindow, Error> {
    let levels = (profile.horizon().log2().floor() as usize).min(MAX_FIT_LEVELS);
    FitWindow::tail(profile, levels)
}

struct MemberRow {
    exact_stable: bool,
    side: Side,
    report: ClassificationReport,
}

fn family_member(alpha: f64, n: Dimension, cfg: &RunConfig) -> Result<MemberRow, CliError> {
    let a = FamilyParameter::new(alpha)?;
    let grid = RadialGrid::log_uniform(1.0, cfg.horizon, cfg.grid_points)?;
    let profile = power_solution(a, n, grid)?;
    let window = default_fit_window(&profile)?;
    Ok(MemberRow {
        exact_stable: exact_stability(a, n),
        side: decide_side(&profile, n, &SideSchedule::default(), cfg.eigen_dofs).side,
        report: classify(&profile, n, &window),
    })
}

fn side_name(side: Side) -> &'static str {
    match side {
        Side::HL => "HL",
        Side::HS => "HS",
        Side::Undetermined => "Undetermined",
    }
}

fn family_table(cfg: &RunConfig) -> Result<Table, CliError> {
    let n = cfg.dimension;
    let alphas = alphas(cfg, (-8.0, 4.0));
    let rows: Vec<Result<MemberRow, CliError>> = alphas
        .par_iter()
        .map(|&a| family_member(a, n, cfg))
        .collect();
    let mut t = Table::new(headers::FAMILY);
    for (alpha, row) in alphas.iter().zip(rows) {
        let row = row?;
        t.push(vec![
            Cell::Real(*alpha),
            Cell::Bool(row.exact_stable),
            Cell::text(side_name(row.side)),
            Cell::text(row.report.verdict),
            Cell::real(row.report.fitted_exponent),
        ]);
    }
    Ok(t)
}

fn sweep_table(cfg: &RunConfig) -> Result<Table, CliError> {
    let dims = dimensions(cfg)?;
    let alphas = alphas(cfg, (-8.0, 4.0));
    let cells: Vec<(Dimension, f64)> = dims
        .iter()
        .flat_map(|&n| alphas.iter().map(move |&a| (n, a)))
        .collect();
    // results are gathered by grid index, independent of scheduling
    let rows: Vec<Result<MemberRow, CliError>> = cells
        .par_iter()
        .map(|&(n, a)| family_member(a, n, cfg))
        .collect();
    let mut t = Table::new(headers::SWEEP);
    for (&(n, alpha), row) in cells.iter().zip(rows) {
        let row = row?;
        t.push(vec![
            Cell::Int(n.get().into()),
            Cell::Real(alpha),
            Cell::Bool(row.exact_stable),
            Cell::text(side_name(row.side)),
            Cell::text(row.report.verdict),
            Cell::real(row.report.fitted_exponent),
        ]);
    }
    Ok(t)
}

fn nonlinearity_spec(cfg: &RunConfig) -> Result<NonlinearitySpec, CliError> {
    match (cfg.nonlinearity, cfg.alpha) {
        (Some(spec), _) => Ok(spec),
        (None, Some(a)) => Ok(NonlinearitySpec::PowerFamily(a)),
        (None, None) => Err(ConfigError {
            key: Some("nonlinearity".into()),
            line: None,
            message: "missing; give a catalog entry or `alpha` for the power family".into(),
        }
        .into()),
    }
}

fn initial_data(cfg: &RunConfig, spec: NonlinearitySpec) -> Result<(f64, f64), CliError> {
    match (cfg.u1, cfg.du1, spec) {
        (Some(u), Some(d), _) => Ok((u, d)),
        (None, None, NonlinearitySpec::PowerFamily(a)) => Ok(FamilyParameter::new(a)?.eval(1.0)),
        (u, _, _) => {
            let key = if u.is_none() { "u1" } else { "du1" };
            Err(ConfigError {
                key: Some(key.into()),
                line: None,
                message: "missing initial value".into(),
            }
            .into())
        }
    }
}

fn settings(cfg: &RunConfig) -> SolverSettings {
    SolverSettings::default()
        .with_horizon(cfg.horizon)
        .with_grid_points(cfg.grid_points)
}

/// The configured profile: the closed form for a power-family member
/// without explicit initial data, otherwise an integrated one.
fn profile(cfg: &RunConfig) -> Result<(RadialProfile, Box<dyn Nonlinearity>), CliError> {
    let spec = nonlinearity_spec(cfg)?;
    let f = spec.build(cfg.dimension);
    let profile = match (spec, cfg.u1, cfg.du1) {
        (NonlinearitySpec::PowerFamily(a), None, None) => power_solution(
            FamilyParameter::new(a)?,
            cfg.dimension,
            RadialGrid::log_uniform(1.0, cfg.horizon, cfg.grid_points)?,
        )?,
        _ => {
            let (u1, du1) = initial_data(cfg, spec)?;
            solve_ivp(f.as_ref(), cfg.dimension, u1, du1, &settings(cfg))?
        }
    };
    Ok((profile, f))
}

fn solve_table(cfg: &RunConfig) -> Result<Table, CliError> {
    let spec = nonlinearity_spec(cfg)?;
    let (u1, du1) = initial_data(cfg, spec)?;
    let f = spec.build(cfg.dimension);
    let profile = solve_ivp(f.as_ref(), cfg.dimension, u1, du1, &settings(cfg))?;
    let mut t = Table::new(headers::SOLVE);
    for ((&r, &u), &d) in profile.radii().iter().zip(profile.u()).zip(profile.u_r()) {
        t.push(vec![Cell::Real(r), Cell::Real(u), Cell::Real(d)]);
    }
    Ok(t)
}

fn stability_table(cfg: &RunConfig) -> Result<Table, CliError> {
    let (profile, f) = profile(cfg)?;
    let n = cfg.dimension;
    let scan = stability_scan(
        |r| f.derivative(profile.value(r)),
        n,
        cfg.horizon,
        cfg.eigen_dofs,
    )?;
    let side = decide_side(&profile, n, &SideSchedule::default(), cfg.eigen_dofs);
    let mut t = Table::new(headers::STABILITY);
    t.notes.push(format!(
        "status: {:?}; side: {}",
        scan.status,
        side_name(side.side)
    ));
    for (r2, lambda) in scan.min_eigenvalue_trace {
        t.push(vec![
            Cell::text("scan"),
            Cell::Real(1.0),
            Cell::Real(r2),
            Cell::Real(lambda),
        ]);
    }
    for w in side.trace {
        t.push(vec![
            Cell::text("side"),
            Cell::Real(w.r1),
            Cell::Real(w.r2),
            Cell::Real(w.lambda_min),
        ]);
    }
    Ok(t)
}

fn limit_cell(v: Option<LimitValue>) -> Cell {
    match v {
        Some(LimitValue::Finite(x)) => Cell::Real(x),
        Some(other) => Cell::text(other),
        None => Cell::Missing,
    }
}

fn classify_table(cfg: &RunConfig) -> Result<Table, CliError> {
    let (profile, _) = profile(cfg)?;
    let n = cfg.dimension;
    let report = classify(&profile, n, &default_fit_window(&profile)?);
    let side = decide_side(&profile, n, &SideSchedule::default(), cfg.eigen_dofs).side;
    let mut t = Table::new(headers::CLASSIFY);
    t.notes
        .extend(report.diagnostic.iter().map(|d| format!("note: {d}")));
    t.push(vec![
        Cell::Int(n.get().into()),
        Cell::text(report.verdict),
        Cell::real(report.fitted_exponent),
        limit_cell(report.u_infinity),
        Cell::real(report.m_fit),
        Cell::real(report.r0_fit),
        Cell::Bool(report.log_growth),
        Cell::Bool(report.vacuous_bound),
        Cell::text(side_name(side)),
    ]);
    Ok(t)
}

/// Id of the header-schema check appended to the acceptance criteria.
pub const SCHEMA_CHECK_ID: u32 = 11;
/// Id of the seeded quadrature-consistency check.
pub const PENCIL_CHECK_ID: u32 = 12;

fn acceptance_table(cfg: &RunConfig) -> Result<Table, CliError> {
    let mut t = Table::new(headers::VERIFY);
    let mut outcomes = acceptance::run_all();
    outcomes.push(schema_check());
    outcomes.push(pencil_check(cfg.seed));
    for o in outcomes {
        t.notes.push(o.to_string());
        t.push(vec![
            Cell::Int(o.id.into()),
            Cell::text(o.name),
            Cell::Bool(o.passed),
            Cell::Text(o.detail),
        ]);
    }
    Ok(t)
}

/// Runs each table-producing command on a small configuration and compares
/// the emitted CSV header row with the documented one.
pub fn schema_check() -> acceptance::Outcome {
    let start = std::time::Instant::now();
    let small = |command: Command| {
        let mut cfg = RunConfig::new(command);
        cfg.horizon = 64.0;
        cfg.grid_points = 201;
        cfg.eigen_dofs = 40;
        cfg.steps = 2;
        cfg.alpha = Some(2.0);
        cfg.alpha_range = Some((2.0, 3.0));
        cfg
    };
    let expected = [
        (Command::Exponents, headers::EXPONENTS),
        (Command::Family, headers::FAMILY),
        (Command::Solve, headers::SOLVE),
        (Command::Stability, headers::STABILITY),
        (Command::Classify, headers::CLASSIFY),
        (Command::Sweep, headers::SWEEP),
    ];
    let mut failures = Vec::new();
    for (command, header) in expected {
        match execute(&small(command)) {
            Ok(table) => {
                let csv = table.render(OutputFormat::Csv);
                let first = csv.lines().next().unwrap_or("");
                if first != header.join(",") {
                    failures.push(format!("{}: header `{first}`", command.name()));
                }
            }
            Err(e) => failures.push(format!("{}: {e}", command.name())),
        }
    }
    let verify_header = Table::new(headers::VERIFY).render(OutputFormat::Csv);
    if verify_header.trim_end() != "id,name,passed,detail" {
        failures.push("verify header".into());
    }
    let passed = failures.is_empty();
    acceptance::Outcome {
        id: SCHEMA_CHECK_ID,
        name: "csv header schema",
        passed,
        detail: if passed {
            "7 command headers match".into()
        } else {
            failures.join("; ")
        },
        seconds: start.elapsed().as_secs_f64(),
    }
}

/// Assembled pencil form against direct quadrature for seeded random test
/// functions, to `1e-10` relative.
pub fn pencil_check(seed: u64) -> acceptance::Outcome {
    let start = std::time::Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let run = |rng: &mut ChaCha8Rng| -> Result<f64, Error> {
        let n = Dimension::new(rng.gen_range(2..=12))?;
        let alpha = rng.gen_range(-4.0..3.0);
        let profile = power_solution(
            FamilyParameter::new(alpha)?,
            n,
            RadialGrid::log_uniform(1.0, 1e3, 1001)?,
        )?;
        let r1 = rng.gen_range(1.0..10.0);
        let window = AnnulusWindow::new(r1, r1 * rng.gen_range(2.0..50.0))?;
        let m = 50;
        let pencil = assemble_pencil(&profile, n, window, m)?;
        let mut worst = 0.0_f64;
        for _ in 0..20 {
            let mut x: Vec<f64> = (0..m).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let assembled = pencil.form(&x);
            x.push(0.0);
            let eta = TestFunction::new(window, pencil.nodes.clone(), x)?;
            let direct = reduced_form(&profile, n, &eta)?;
            worst = worst.max(
                (assembled - direct).abs()
                    / direct.abs().max(assembled.abs()).max(f64::MIN_POSITIVE),
            );
        }
        Ok(worst)
    };
    let (passed, detail) = match (0..5)
        .map(|_| run(&mut rng))
        .collect::<Result<Vec<f64>, Error>>()
    {
        Ok(v) => {
            let worst = v.into_iter().fold(0.0, f64::max);
            (
                worst <= 1e-10,
                format!("seed {seed}: worst relative gap {worst:.2e} over 100 test functions"),
            )
        }
        Err(e) => (false, format!("seed {seed}: {e}")),
    };
    acceptance::Outcome {
        id: PENCIL_CHECK_ID,
        name: "pencil matches quadrature",
        passed,
        detail,
        seconds: start.elapsed().as_secs_f64(),
    }
}
