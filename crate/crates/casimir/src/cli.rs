//! `casimir` subcommands.
//!
//! Exit status: 0 success, 1 bad input (flags, config, passivity), 2
//! quadrature did not converge or a sign could not be resolved, 3 an
//! invariant of `validate` failed.

use std::ffi::OsString;
use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use casimir_core::analysis::{
    distance_scan, equilibrium_distance, phase_diagram, PhaseDiagramMode, PhaseDiagramSpec, PlatePair,
    DEFAULT_EQUILIBRIUM_BRACKET, DEFAULT_GRID,
};
use casimir_core::asymptotics::{exact_key_combination, resolve_prefactor, ExpansionContext, QuadraticExpansion};
use casimir_core::fresnel::{reflection_matrix, reflection_matrix_oracle, TransverseMode};
use casimir_core::quadrature::QuadratureSpec;
use casimir_core::units::NaturalUnits;
use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::checks;
use crate::config::{KappaModel, LoadedMaterial, MaterialConfig};
use crate::exec::RayonExecutor;
use crate::output::{self, ForceRow};
use crate::svg;
use crate::CliError;

#[derive(Debug, Parser)]
#[command(name = "casimir", version, about = "Casimir forces between bi-isotropic plates")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Reflection matrix of one plate at one rescaled mode.
    Reflection(ReflectionArgs),
    /// Force between two plates at one separation.
    Force(ForceArgs),
    /// Force over a log-spaced range of separations.
    ScanDistance(ScanArgs),
    /// Sign phase diagram over a coupling grid.
    PhaseDiagram(PhaseArgs),
    /// Separation where the force turns from repulsive to attractive.
    Equilibrium(EquilibriumArgs),
    /// Compare the small-coupling expansion with the exact key combination.
    AsymptoticsCheck(AsymptoticsArgs),
    /// Run the invariant suite.
    Validate(QuadArgs),
}

#[derive(Debug, Args)]
struct QuadArgs {
    /// Gauss–Legendre nodes per axis at the base level.
    #[arg(long, default_value_t = 48)]
    quad_nodes: usize,
    /// Relative tolerance of the refinement test.
    #[arg(long, default_value_t = 1e-6)]
    quad_tol: f64,
    /// Maximum number of node doublings.
    #[arg(long, default_value_t = 3)]
    quad_refine: usize,
}

impl QuadArgs {
    fn spec(&self) -> Result<QuadratureSpec, CliError> {
        let spec = QuadratureSpec::default()
            .with_nodes(self.quad_nodes)
            .with_rel_tol(self.quad_tol)
            .with_refinements(self.quad_refine);
        spec.validate().map_err(|e| CliError::Precondition(format!("quadrature flags: {e}")))?;
        Ok(spec)
    }
}

#[derive(Debug, Args)]
struct PairArgs {
    /// Material file of plate 1 (its omega_R sets the unit frequency).
    #[arg(long)]
    mat1: Option<PathBuf>,
    /// Material file of plate 2.
    #[arg(long, conflicts_with_all = ["chi", "kappa"])]
    mat2: Option<PathBuf>,
    /// Antisymmetric pair: plate 1 gets chi, plate 2 gets -chi.
    #[arg(long, allow_hyphen_values = true)]
    chi: Option<f64>,
    /// Antisymmetric pair: both plates get constant kappa.
    #[arg(long, allow_hyphen_values = true)]
    kappa: Option<f64>,
}

struct Resolved {
    units: NaturalUnits,
    pair: PlatePair,
}

impl PairArgs {
    fn resolve(&self) -> Result<Resolved, CliError> {
        let first = LoadedMaterial::from_path(self.mat1.as_deref())?;
        let units = first.config.units();
        let pair = match (&self.mat2, self.chi, self.kappa) {
            (Some(p2), _, _) => {
                let second = LoadedMaterial::from_path(Some(p2))?;
                PlatePair::General(first.material(&units)?, second.material(&units)?)
            }
            (None, None, None) => {
                return Err(CliError::Precondition("give --mat2, or --chi/--kappa for an antisymmetric pair".into()))
            }
            (None, chi, kappa) => {
                let mut config = first.clone();
                config.config.chi = chi.unwrap_or(0.0);
                config.config.kappa0 = Some(kappa.unwrap_or(0.0));
                config.config.kappa_model = KappaModel::Constant;
                config.config.kappa_max = None;
                config.config.omega_kappaR_hz = None;
                config.config.gamma_kappa_over_omega_kappaR = None;
                PlatePair::Antisymmetric(config.material(&units)?)
            }
        };
        Ok(Resolved { units, pair })
    }
}

#[derive(Debug, Args)]
struct ReflectionArgs {
    #[arg(long)]
    mat1: Option<PathBuf>,
    /// Separation in meters.
    #[arg(long)]
    d: f64,
    #[arg(long)]
    xi_tilde: f64,
    #[arg(long, default_value_t = 0.0)]
    k_tilde: f64,
}

#[derive(Debug, Args)]
struct ForceArgs {
    #[command(flatten)]
    pair: PairArgs,
    /// Separation in meters.
    #[arg(long)]
    d: f64,
    #[command(flatten)]
    quad: QuadArgs,
    /// Directory for force.csv.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also print natural-unit values.
    #[arg(long, short)]
    verbose: bool,
}

#[derive(Debug, Args)]
struct ScanArgs {
    #[command(flatten)]
    pair: PairArgs,
    #[arg(long)]
    dmin: f64,
    #[arg(long)]
    dmax: f64,
    #[arg(long, default_value_t = 40)]
    points: usize,
    #[command(flatten)]
    quad: QuadArgs,
    #[arg(long, default_value = ".")]
    out: PathBuf,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Mode {
    Fixed,
    Antisym,
}

#[derive(Debug, Args)]
struct PhaseArgs {
    #[arg(long, value_enum)]
    mode: Mode,
    /// Base material (couplings are overridden by the sweep).
    #[arg(long)]
    mat1: Option<PathBuf>,
    /// Plate-1 chi in fixed mode.
    #[arg(long, default_value_t = 0.5, allow_hyphen_values = true)]
    chi: f64,
    /// Plate-1 kappa in fixed mode.
    #[arg(long, default_value_t = 0.5, allow_hyphen_values = true)]
    kappa: f64,
    #[arg(long, default_value_t = DEFAULT_GRID)]
    grid: usize,
    /// Separation in meters.
    #[arg(long)]
    d: f64,
    #[command(flatten)]
    quad: QuadArgs,
    #[arg(long, default_value = ".")]
    out: PathBuf,
    /// Comma-separated subset of csv,svg.
    #[arg(long, default_value = "csv,svg")]
    format: String,
}

#[derive(Debug, Args)]
struct EquilibriumArgs {
    #[command(flatten)]
    pair: PairArgs,
    /// Lower end of the bracket in meters (default 0.01 c/omega_R).
    #[arg(long)]
    dlo: Option<f64>,
    /// Upper end of the bracket in meters (default 100 c/omega_R).
    #[arg(long)]
    dhi: Option<f64>,
    #[command(flatten)]
    quad: QuadArgs,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Form {
    Consistent,
    Published,
}

#[derive(Debug, Args)]
struct AsymptoticsArgs {
    /// Static permittivity of the plate.
    #[arg(long, default_value_t = 2.0)]
    eps: f64,
    /// k∥/ξ ratio of the probed mode.
    #[arg(long, default_value_t = 1.0)]
    a: f64,
    #[arg(long, default_value_t = 10)]
    points: usize,
    #[arg(long, value_enum, default_value_t = Form::Consistent)]
    form: Form,
    /// CSV destination (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Parse `args` (including the program name) and run; returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    let stdout = io::stdout();
    let mut out = stdout.lock();
    match dispatch(cli.command, &mut out) {
        Ok(code) => code,
        Err(e) => {
            let _ = out.flush();
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn dispatch(command: Command, out: &mut dyn Write) -> Result<i32, CliError> {
    match command {
        Command::Reflection(a) => reflection(a, out),
        Command::Force(a) => force(a, out),
        Command::ScanDistance(a) => scan(a, out),
        Command::PhaseDiagram(a) => phase(a, out),
        Command::Equilibrium(a) => equilibrium(a, out),
        Command::AsymptoticsCheck(a) => asymptotics(a, out),
        Command::Validate(q) => validate(q, out),
    }
}

fn distance(units: &NaturalUnits, meters: f64, flag: &str) -> Result<f64, CliError> {
    if meters > 0.0 && meters.is_finite() {
        Ok(units.distance_from_meters(meters))
    } else {
        Err(CliError::Precondition(format!("--{flag} must be a positive length in meters, got {meters}")))
    }
}

fn create(dir: &Path, name: &str) -> Result<BufWriter<File>, CliError> {
    fs::create_dir_all(dir)?;
    Ok(BufWriter::new(File::create(dir.join(name))?))
}

fn reflection(a: ReflectionArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let loaded = LoadedMaterial::from_path(a.mat1.as_deref())?;
    let units = loaded.config.units();
    let material = loaded.material(&units)?;
    let mode = TransverseMode::new(a.xi_tilde, a.k_tilde, distance(&units, a.d, "d")?)?;
    let closed = reflection_matrix(&material, &mode)?;
    let oracle = reflection_matrix_oracle(&material, &mode)?;
    writeln!(out, "xi = {:.6e} rad/s, K~ = {:.6e}", mode.xi() * units.omega, mode.k_total())?;
    for (name, c, o) in ["r_ss", "r_pp", "r_sp", "r_ps"]
        .iter()
        .zip(closed.as_array())
        .zip(oracle.as_array())
        .map(|((n, c), o)| (n, c, o))
    {
        writeln!(out, "{name} = {} (oracle {})", output::fmt(c), output::fmt(o))?;
    }
    writeln!(out, "max |closed - oracle| = {:.3e}", closed.max_abs_diff(&oracle))?;
    Ok(0)
}

fn force(a: ForceArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let spec = a.quad.spec()?;
    let Resolved { units, pair } = a.pair.resolve()?;
    let d = distance(&units, a.d, "d")?;
    let result = pair.force(d, &spec)?;
    let row = ForceRow::new(&result, &units);
    writeln!(out, "F/F0 = {}", output::fmt(row.ratio))?;
    writeln!(out, "F/A = {} Pa", output::fmt(row.force_pa))?;
    writeln!(out, "error = {} (absolute, units of F0)", output::fmt(row.err))?;
    writeln!(out, "sign = {}", row.sign)?;
    if a.verbose {
        writeln!(out, "d = {} m = {} c/omega_u (omega_u = {:e} rad/s)", output::fmt(a.d), output::fmt(d), units.omega)?;
        writeln!(out, "F/A = {} hbar omega_u^4/c^3", output::fmt(result.force_per_area))?;
        writeln!(out, "converged = {}", result.converged)?;
    }
    if let Some(dir) = &a.out {
        output::write_force_csv(create(dir, "force.csv")?, &[row])?;
    }
    if !result.converged {
        return Err(CliError::NotConverged(format!(
            "quadrature missed --quad-tol at d = {} m; raise --quad-nodes or --quad-refine",
            a.d
        )));
    }
    Ok(0)
}

fn scan(a: ScanArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let spec = a.quad.spec()?;
    let Resolved { units, pair } = a.pair.resolve()?;
    let (lo, hi) = (distance(&units, a.dmin, "dmin")?, distance(&units, a.dmax, "dmax")?);
    let exec = RayonExecutor::from_env();
    let s = distance_scan(&pair, lo, hi, a.points, &spec, &exec)?;
    output::write_scan_csv(create(&a.out, "scan.csv")?, &s, &units)?;
    writeln!(out, "behavior = {}", s.behavior.as_str())?;
    writeln!(out, "wrote {}", a.out.join("scan.csv").display())?;
    if s.results.iter().any(|r| !r.converged) {
        return Err(CliError::NotConverged("some scan points missed --quad-tol".into()));
    }
    Ok(0)
}

fn phase(a: PhaseArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let spec = a.quad.spec()?;
    let loaded = LoadedMaterial::from_path(a.mat1.as_deref())?;
    let units = loaded.config.units();
    let base = loaded.material(&units)?;
    let mode = match a.mode {
        Mode::Fixed => PhaseDiagramMode::FixedPlate1 { kappa1: a.kappa, chi1: a.chi },
        Mode::Antisym => PhaseDiagramMode::AntisymmetricChi,
    };
    if a.grid < 2 {
        return Err(CliError::Precondition(format!("--grid must be at least 2, got {}", a.grid)));
    }
    let mut pd = PhaseDiagramSpec::new(mode, a.grid, distance(&units, a.d, "d")?);
    pd.quadrature = spec;
    let (mut csv, mut svg) = (false, false);
    for f in a.format.split(',').map(str::trim) {
        match f {
            "csv" => csv = true,
            "svg" => svg = true,
            other => return Err(CliError::Precondition(format!("--format: unknown format `{other}` (use csv,svg)"))),
        }
    }
    let grid = phase_diagram(&base, &pd, &RayonExecutor::from_env())?;
    let stem = output::phase_file_stem(a.d);
    if csv {
        output::write_phase_csv(create(&a.out, &format!("{stem}.csv"))?, &grid)?;
        writeln!(out, "wrote {}", a.out.join(format!("{stem}.csv")).display())?;
    }
    if svg {
        let title = format!("F/F0 at d = {} m", a.d);
        create(&a.out, &format!("{stem}.svg"))?.write_all(svg::heatmap(&grid, &title).as_bytes())?;
        writeln!(out, "wrote {}", a.out.join(format!("{stem}.svg")).display())?;
    }
    use casimir_core::lifshitz::ForceSign::*;
    writeln!(
        out,
        "repulsive {}, attractive {}, indeterminate {}, excluded {}",
        grid.count(Repulsive),
        grid.count(Attractive),
        grid.count(Indeterminate),
        grid.excluded()
    )?;
    if !grid.all_converged() {
        return Err(CliError::NotConverged("some cells missed --quad-tol".into()));
    }
    Ok(0)
}

fn equilibrium(a: EquilibriumArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let spec = a.quad.spec()?;
    let Resolved { units, pair } = a.pair.resolve()?;
    let lo = match a.dlo {
        Some(m) => distance(&units, m, "dlo")?,
        None => DEFAULT_EQUILIBRIUM_BRACKET.0,
    };
    let hi = match a.dhi {
        Some(m) => distance(&units, m, "dhi")?,
        None => DEFAULT_EQUILIBRIUM_BRACKET.1,
    };
    match equilibrium_distance(&pair, lo, hi, &spec)? {
        Some(r) => {
            let m = units.distance_to_meters(r.d_c);
            writeln!(out, "d_c = {} m ({:.4} um)", output::fmt(m), m * 1e6)?;
            writeln!(
                out,
                "bracket = [{}, {}] m, |F/F0| at d_c = {:.3e}",
                output::fmt(units.distance_to_meters(r.bracket.0)),
                output::fmt(units.distance_to_meters(r.bracket.1)),
                r.residual
            )?;
        }
        None => writeln!(
            out,
            "no sign change in [{:e}, {:e}] m",
            units.distance_to_meters(lo),
            units.distance_to_meters(hi)
        )?,
    }
    Ok(0)
}

fn asymptotics(a: AsymptoticsArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    if a.eps.is_nan() || a.eps < 1.0 || a.points == 0 {
        return Err(CliError::Precondition("--eps must be at least 1 and --points positive".into()));
    }
    let n = a.eps.sqrt();
    let ctx = ExpansionContext::new(a.a, n, 0.0, 0.0)?;
    let e = match a.form {
        Form::Consistent => QuadraticExpansion::consistent(&ctx, 1.0, 1.0 / n),
        Form::Published => QuadraticExpansion::published(&ctx, 1.0, 1.0 / n),
    };
    let mut rows = Vec::with_capacity(a.points);
    for i in 1..=a.points {
        // equal reduced couplings up to the validity radius
        let s = casimir_core::asymptotics::VALIDITY_RADIUS * i as f64 / a.points as f64;
        let exact = exact_key_combination(a.eps, 1.0, a.a, s * n, s * n)?;
        let approx = e.evaluate(s, s);
        rows.push([s, exact, approx, exact - approx]);
    }
    match &a.out {
        Some(path) => {
            if let Some(dir) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
                fs::create_dir_all(dir)?;
            }
            output::write_asymptotics_csv(BufWriter::new(File::create(path)?), &rows)?;
            let r = resolve_prefactor(a.a)?;
            writeln!(
                out,
                "prefactor: fitted chi coefficient {:.6} (32 -> {:.6}, 16 -> {:.6}); using {}",
                r.fitted, r.with_32, r.with_16, r.chosen
            )?;
        }
        None => output::write_asymptotics_csv(&mut *out, &rows)?,
    }
    Ok(0)
}

fn validate(q: QuadArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let spec = q.spec()?;
    let outcomes = checks::run_all(&spec);
    for o in &outcomes {
        writeln!(out, "{o}")?;
    }
    let mut failed = outcomes.iter().filter(|o| !o.passed).count();
    for (name, text) in crate::presets::PRESETS {
        let loaded = MaterialConfig::parse(text).and_then(|c| c.to_material(&c.units()).map(|_| ()));
        match loaded {
            Ok(()) => writeln!(out, "PASS preset {name}: parses and is passive")?,
            Err(e) => {
                failed += 1;
                writeln!(out, "FAIL preset {name}: {e}")?;
            }
        }
    }
    if failed > 0 {
        return Err(CliError::Invariant(format!("{failed} invariant check(s) failed")));
    }
    Ok(0)
}
