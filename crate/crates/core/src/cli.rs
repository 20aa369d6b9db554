//! Command-line front end.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::arcs::check_h;
use crate::compare::compare_paper;
use crate::domain::{
    check_admissibility, default_std_sizes, paper_d3, quad_balance, solve_d3_star, standard_horocycle_system,
    standard_quadrilateral, AdmissibilityReport, D3Mode, HorocycleSystem, IdealDomain, QuadBalance, Tolerances,
};
use crate::error::{Error, Result};
use crate::exhaust::{default_base, run_exhaustion, ExhaustionSchedule};
use crate::extend::{try_extend, ExtensionPolicy, ExtensionRecord};
use crate::numerics::Quadrature;
use crate::regions::QuadParams;
use crate::render::{render_svg, Chart, SceneSpec};
use crate::report::{from_json, to_json, DomainSnapshot, ReportDocument};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "scherk", version, about = "Ideal admissible domains for Scherk-type H-graphs in H^2")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build and verify the standard quadrilateral.
    Quad(QuadArgs),
    /// Verify a saved domain snapshot.
    Check(CheckArgs),
    /// Attach perturbed quadrilaterals to every side pair.
    Extend(ExtendArgs),
    /// Iterate the extension with shrinking horocycles.
    Exhaust(ExhaustArgs),
    /// Compare printed closed forms with computed values.
    ComparePaper(CompareArgs),
    /// Draw a saved domain snapshot.
    Render(RenderArgs),
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SeedArgs {
    #[arg(long, default_value_t = 1.0)]
    pub mu: f64,
    #[arg(long = "H", default_value_t = 0.25)]
    pub h: f64,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct QuadArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub seed: SeedArgs,
    #[arg(long, value_enum, default_value = "computed")]
    pub mode: ModeArg,
    /// Radius of the horocycles at finite vertices.
    #[arg(long)]
    pub r: Option<f64>,
    /// Height of the horocycle at infinity.
    #[arg(long = "M")]
    pub m: Option<f64>,
    #[arg(long)]
    #[serde(skip)]
    pub json: Option<PathBuf>,
    #[arg(long)]
    #[serde(skip)]
    pub svg: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "halfplane")]
    pub chart: Chart,
    /// Write the domain and horocycles for later `extend --in`.
    #[arg(long)]
    #[serde(skip)]
    pub snapshot: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModeArg {
    Computed,
    Paper,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct CheckArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long)]
    #[serde(skip)]
    pub json: Option<PathBuf>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ExtendArgs {
    #[arg(long = "in", conflicts_with = "standard", required_unless_present = "standard")]
    pub input: Option<PathBuf>,
    /// Start from the standard quadrilateral.
    #[arg(long)]
    pub standard: bool,
    #[command(flatten)]
    #[serde(flatten)]
    pub seed: SeedArgs,
    #[arg(long = "phi-ratio", default_value_t = 0.01)]
    pub phi_ratio: f64,
    #[arg(long)]
    #[serde(skip)]
    pub json: Option<PathBuf>,
    #[arg(long)]
    #[serde(skip)]
    pub svg: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "halfplane")]
    pub chart: Chart,
    #[arg(long)]
    #[serde(skip)]
    pub snapshot: Option<PathBuf>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ExhaustArgs {
    #[arg(long = "N", default_value_t = 3)]
    pub n: usize,
    #[command(flatten)]
    #[serde(flatten)]
    pub seed: SeedArgs,
    /// One ratio, or a comma-separated list used step by step.
    #[arg(long = "phi-ratio", value_delimiter = ',', default_value = "0.01")]
    pub phi_ratio: Vec<f64>,
    #[arg(long, default_value_t = 0.5)]
    pub shrink: f64,
    #[arg(long = "max-cells", default_value_t = 4096)]
    pub max_cells: usize,
    #[arg(long)]
    #[serde(skip)]
    pub json: Option<PathBuf>,
    #[arg(long = "svg-dir")]
    #[serde(skip)]
    pub svg_dir: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "halfplane")]
    pub chart: Chart,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct CompareArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub seed: SeedArgs,
    #[arg(long, default_value_t = 0.05)]
    pub r: f64,
    #[arg(long)]
    #[serde(skip)]
    pub json: Option<PathBuf>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct RenderArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long)]
    pub svg: PathBuf,
    #[arg(long, value_enum, default_value = "halfplane")]
    pub chart: Chart,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QuadResult {
    pub params: QuadParams,
    pub d3: f64,
    pub d3_root: f64,
    pub d3_printed: f64,
    pub d3_deviation: f64,
    pub r: f64,
    pub m: f64,
    pub measures: QuadBalance,
    pub admissibility: AdmissibilityReport,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExtendResult {
    pub cells: usize,
    pub sides: usize,
    pub guarantee: String,
    pub records: Vec<ExtensionRecord>,
    pub full_check: Option<AdmissibilityReport>,
    pub failures: Vec<String>,
}

/// Failure kinds mapped to exit codes.
enum Failure {
    Usage(String),
    Math(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::CurvatureOutOfRange(_) | Error::InvalidParams(_) | Error::Input(_) => Failure::Usage(e.to_string()),
            _ => Failure::Math(e.to_string()),
        }
    }
}

type Outcome = std::result::Result<bool, Failure>;

/// Runs the CLI on `args` (including the program name) and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_PASS };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { write!(err, "{text}") } else { write!(out, "{text}") };
            return code;
        }
    };
    let quad = Quadrature::default();
    let result = match &cli.command {
        Command::Quad(a) => cmd_quad(a, &quad, out),
        Command::Check(a) => cmd_check(a, out),
        Command::Extend(a) => cmd_extend(a, &quad, out),
        Command::Exhaust(a) => cmd_exhaust(a, &quad, out),
        Command::ComparePaper(a) => cmd_compare(a, &quad, out),
        Command::Render(a) => cmd_render(a),
    };
    match result {
        Ok(true) => EXIT_PASS,
        Ok(false) => {
            let _ = writeln!(err, "verification failed; see the report");
            EXIT_FAIL
        }
        Err(Failure::Usage(m)) => {
            let _ = writeln!(err, "error: {m}");
            EXIT_USAGE
        }
        Err(Failure::Math(m)) => {
            let _ = writeln!(err, "error: {m}");
            EXIT_FAIL
        }
    }
}

fn write_file(path: &Path, text: &str) -> std::result::Result<(), Failure> {
    fs::write(path, text).map_err(|e| Failure::Usage(format!("cannot write {}: {e}", path.display())))
}

fn emit<P: Serialize, T: Serialize>(doc: &ReportDocument<P, T>, path: &Option<PathBuf>, out: &mut dyn Write) -> std::result::Result<(), Failure> {
    let text = doc.to_json()?;
    match path {
        Some(p) => write_file(p, &text),
        None => out
            .write_all(text.as_bytes())
            .map_err(|e| Failure::Usage(format!("cannot write to stdout: {e}"))),
    }
}

fn validate_seed(s: &SeedArgs) -> Result<()> {
    check_h(s.h)?;
    if !(s.mu.is_finite() && s.mu > 0.0) {
        return Err(Error::InvalidParams(format!("--mu must be positive, got {}", s.mu)));
    }
    Ok(())
}

fn standard_seed(s: &SeedArgs, quad: &Quadrature) -> Result<(IdealDomain, HorocycleSystem)> {
    validate_seed(s)?;
    let dom = standard_quadrilateral(s.mu, s.h, D3Mode::ComputedRoot, quad)?;
    let p = dom.complex.cells()[0].params;
    let (r, m) = default_std_sizes(&p);
    Ok((dom, standard_horocycle_system(&p, r, m)?))
}

fn load_snapshot(path: &Path) -> Result<(IdealDomain, HorocycleSystem)> {
    let text = fs::read_to_string(path).map_err(|e| Error::Input(format!("cannot read {}: {e}", path.display())))?;
    from_json::<DomainSnapshot>(&text)?.into_domain()
}

fn input_text<P: Serialize>(command: &str, params: &P) -> Result<String> {
    to_json(&ReportDocument::new(command, params, true, ()))
}

fn cmd_quad(a: &QuadArgs, quad: &Quadrature, out: &mut dyn Write) -> Outcome {
    validate_seed(&a.seed)?;
    let (mu, h) = (a.seed.mu, a.seed.h);
    let root = solve_d3_star(mu, h, quad)?;
    let printed = paper_d3(mu, h)?;
    let d3 = match a.mode {
        ModeArg::Computed => root,
        ModeArg::Paper => printed,
    };
    let mut params = QuadParams::new(mu, d3, h)?;
    if a.mode == ModeArg::Computed {
        params = params.with_d3_star(root);
    }
    let (r0, m0) = default_std_sizes(&params);
    let (r, m) = (a.r.unwrap_or(r0), a.m.unwrap_or(m0));
    let dom = crate::domain::quadrilateral_domain(params, quad)?;
    let hs = standard_horocycle_system(&params, r, m)?;
    let report = check_admissibility(&dom.complex.clone().with_atomic_blocks(), &hs, &Tolerances::default())?;
    let measures = quad_balance(&params, r, m, quad)?;
    let pass = report.pass;
    let result = QuadResult {
        params,
        d3,
        d3_root: root,
        d3_printed: printed,
        d3_deviation: printed - root,
        r,
        m,
        measures,
        admissibility: report,
    };
    let doc = ReportDocument::new("quad", a, pass, result);
    emit(&doc, &a.json, out)?;
    if let Some(p) = &a.svg {
        let svg = render_svg(&dom, Some(&hs), &SceneSpec::new(a.chart), &input_text("quad", a)?);
        write_file(p, &svg)?;
    }
    if let Some(p) = &a.snapshot {
        write_file(p, &to_json(&DomainSnapshot::new(&dom, &hs))?)?;
    }
    Ok(pass)
}

fn cmd_check(a: &CheckArgs, out: &mut dyn Write) -> Outcome {
    let (dom, hs) = load_snapshot(&a.input)?;
    let report = check_admissibility(&dom.complex.clone().with_atomic_blocks(), &hs, &Tolerances::default())?;
    let pass = report.pass;
    emit(&ReportDocument::new("check", a, pass, report), &a.json, out)?;
    Ok(pass)
}

fn cmd_extend(a: &ExtendArgs, quad: &Quadrature, out: &mut dyn Write) -> Outcome {
    let (dom, hs) = match &a.input {
        Some(p) => load_snapshot(p)?,
        None => standard_seed(&a.seed, quad)?,
    };
    if !(a.phi_ratio >= 0.0 && a.phi_ratio < 1.0) {
        return Err(Failure::Usage(format!("--phi-ratio must lie in [0, 1), got {}", a.phi_ratio)));
    }
    let policy = ExtensionPolicy {
        phi_ratio: a.phi_ratio,
        ..ExtensionPolicy::default()
    };
    let outcome = try_extend(&dom, &hs, &policy, quad)?;
    let result = ExtendResult {
        cells: outcome.domain.complex.cells().len(),
        sides: outcome.domain.side_count(),
        guarantee: outcome.guarantee.clone(),
        failures: outcome.failures(),
        records: outcome.records.clone(),
        full_check: outcome.full_check.clone(),
    };
    let pass = outcome.pass;
    emit(&ReportDocument::new("extend", a, pass, result), &a.json, out)?;
    if let Some(p) = &a.svg {
        let svg = render_svg(&outcome.domain, Some(&outcome.hs), &SceneSpec::new(a.chart), &input_text("extend", a)?);
        write_file(p, &svg)?;
    }
    if let Some(p) = &a.snapshot {
        write_file(p, &to_json(&DomainSnapshot::new(&outcome.domain, &outcome.hs))?)?;
    }
    Ok(pass)
}

fn cmd_exhaust(a: &ExhaustArgs, quad: &Quadrature, out: &mut dyn Write) -> Outcome {
    let (dom, hs) = standard_seed(&a.seed, quad)?;
    let schedule = ExhaustionSchedule {
        phi_ratio: a.phi_ratio.clone(),
        shrink: a.shrink,
        max_cells: a.max_cells,
        ..ExhaustionSchedule::new(a.n, default_base(&dom))
    };
    schedule.validate()?;
    let run = run_exhaustion(&dom, &hs, &schedule, quad)?;
    let pass = run.trace.pass;
    emit(&ReportDocument::new("exhaust", a, pass, &run.trace), &a.json, out)?;
    if let Some(dir) = &a.svg_dir {
        fs::create_dir_all(dir).map_err(|e| Failure::Usage(format!("cannot create {}: {e}", dir.display())))?;
        let input = input_text("exhaust", a)?;
        for (i, (d, h)) in run.domains.iter().zip(&run.horocycles).enumerate() {
            let svg = render_svg(d, Some(h), &SceneSpec::new(a.chart), &input);
            write_file(&dir.join(format!("step_{i}.svg")), &svg)?;
        }
    }
    Ok(pass)
}

fn cmd_compare(a: &CompareArgs, quad: &Quadrature, out: &mut dyn Write) -> Outcome {
    validate_seed(&a.seed)?;
    let cmp = compare_paper(a.seed.mu, a.seed.h, a.r, quad)?;
    emit(&ReportDocument::new("compare-paper", a, true, cmp), &a.json, out)?;
    Ok(true)
}

fn cmd_render(a: &RenderArgs) -> Outcome {
    let (dom, hs) = load_snapshot(&a.input)?;
    let text = fs::read_to_string(&a.input).map_err(|e| Failure::Usage(e.to_string()))?;
    write_file(&a.svg, &render_svg(&dom, Some(&hs), &SceneSpec::new(a.chart), &text))?;
    Ok(true)
}
