//! The `siegel-lab` command line.
//!
//! Exit status is 0 on success, 1 on a domain error and 2 on a usage error.

use std::ffi::OsString;
use std::fmt;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::blaschke::{all_branches, phi_inverse, Branch, BranchSolution};
use crate::error::{Error, Result};
use crate::fmt::{round_sig, sig};
use crate::maps::{check_parameter, make_map};
use crate::numbers::RotationNumber;
use crate::render::{classify_grid, default_trap_radius, write_image, Palette, RasterSpec};
use crate::rotation::{comparability_report, tune_blaschke, TuneOptions, TuneResult};
use crate::siegel::{boundary_orbit, quasicircle_delta, xi_scan};
use crate::sphere::Point;
use crate::thurston::{leading_eigenvalue, orbifold_euler, thurston_matrix, MulticurveSpec, OrbifoldSignature};

pub const EXIT_OK: i32 = 0;
pub const EXIT_DOMAIN: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Environment variable capping the worker thread count.
pub const THREADS_ENV: &str = "SIEGEL_LAB_THREADS";

/// Rotation number given on the command line: `golden` or a decimal in (0, 1).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub enum ThetaSpec {
    Golden,
    Value(f64),
}

impl ThetaSpec {
    pub fn resolve(&self) -> Result<RotationNumber> {
        match *self {
            ThetaSpec::Golden => Ok(RotationNumber::golden()),
            ThetaSpec::Value(x) => RotationNumber::new(x),
        }
    }
}

impl FromStr for ThetaSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "golden" => Ok(ThetaSpec::Golden),
            t => t.parse().map(ThetaSpec::Value).map_err(|_| Error::Parse(format!("bad theta {t:?}"))),
        }
    }
}

impl fmt::Display for ThetaSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ThetaSpec::Golden => f.write_str("golden"),
            // Debug formatting of f64 round-trips exactly
            ThetaSpec::Value(x) => write!(f, "{x:?}"),
        }
    }
}

impl From<ThetaSpec> for String {
    fn from(t: ThetaSpec) -> String {
        t.to_string()
    }
}

impl TryFrom<String> for ThetaSpec {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

/// `WxH` pixel dimensions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Pixels {
    pub w: usize,
    pub h: usize,
}

impl FromStr for Pixels {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("bad pixel size {s:?}, expected WxH"));
        let (w, h) = s.split_once(['x', 'X']).ok_or_else(bad)?;
        Ok(Pixels { w: w.trim().parse().map_err(|_| bad())?, h: h.trim().parse().map_err(|_| bad())? })
    }
}

fn parse_point(s: &str) -> std::result::Result<Point, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_theta(s: &str) -> std::result::Result<ThetaSpec, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_pixels(s: &str) -> std::result::Result<Pixels, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

#[derive(Debug, Parser)]
#[command(
    name = "siegel-lab",
    version,
    about = "Siegel disks of quadratic rational maps",
    arg_required_else_help = true
)]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct GlobalArgs {
    /// Print JSON instead of tables.
    #[arg(long, global = true)]
    pub json: bool,
    /// Seed for randomized diagnostics.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Rotation number: `golden` or a decimal in (0, 1).
    #[arg(long, global = true, default_value = "golden", value_parser = parse_theta)]
    pub theta: ThetaSpec,
}

#[derive(Debug, Clone, PartialEq, Subcommand, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
pub enum Command {
    /// Recompute the closed-form critical-parameter examples at c = 2 and c = -2.
    VerifyExamples,
    /// Tune the Blaschke prefactor to the rotation number theta.
    Tune {
        /// Free critical point `re,im` or `inf`.
        #[arg(long, default_value = "inf", value_parser = parse_point, allow_hyphen_values = true)]
        c: Point,
        #[arg(long, default_value_t = 1e-4)]
        tol: f64,
        /// Iterates for the final rotation-number measurement.
        #[arg(long, default_value_t = 1_000_000)]
        n_max: usize,
    },
    /// Write the critical orbit as CSV rows `angle,re,im`, sorted by angle.
    Boundary {
        #[arg(long, default_value = "inf", value_parser = parse_point, allow_hyphen_values = true)]
        c: Point,
        #[arg(long, default_value_t = 10_000)]
        n: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Minimum cross ratio over random angle-ordered quadruples.
    Crossratio {
        #[arg(long, default_value = "inf", value_parser = parse_point, allow_hyphen_values = true)]
        c: Point,
        #[arg(long, default_value_t = 10_000)]
        n: usize,
        #[arg(long, default_value_t = 10_000)]
        trials: usize,
    },
    /// Distance from each parameter in a CSV grid to its boundary curve.
    XiScan {
        /// CSV with columns `re,im` (or a single `inf` column value).
        #[arg(long)]
        grid_file: PathBuf,
        #[arg(long, default_value_t = 5000)]
        n: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Leading eigenvalue of a multicurve's Thurston matrix.
    ThurstonCheck {
        /// JSON `{"n": int, "preimages": [[j, i, d], ...]}`.
        #[arg(long)]
        spec: Option<PathBuf>,
        /// Branching orders, e.g. `2,2,2,3` or `inf,inf`.
        #[arg(long)]
        orbifold: Option<String>,
    },
    /// Orbit-trap image of the Siegel disk and its preimages.
    Render {
        #[arg(long, default_value = "inf", value_parser = parse_point, allow_hyphen_values = true)]
        c: Point,
        #[arg(long, default_value = "0,0", value_parser = parse_point, allow_hyphen_values = true)]
        center: Point,
        #[arg(long, default_value_t = 4.0)]
        width: f64,
        #[arg(long, default_value = "400x300", value_parser = parse_pixels)]
        px: Pixels,
        #[arg(long, default_value_t = 200)]
        iters: usize,
        /// Trap radius; defaults to 0.4 times the smallest boundary modulus.
        #[arg(long)]
        trap: Option<f64>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Closest-return comparability ratios of the tuned Blaschke product.
    Comparability {
        #[arg(long, default_value = "inf", value_parser = parse_point, allow_hyphen_values = true)]
        c: Point,
        #[arg(long, default_value_t = 5)]
        n_max: usize,
        #[arg(long, default_value_t = 50)]
        samples: usize,
        #[arg(long, default_value_t = 1e-4)]
        tol: f64,
        #[arg(long, default_value_t = 1_000_000)]
        tune_iters: usize,
    },
}

/// A fully parsed invocation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    #[serde(flatten)]
    pub global: GlobalArgs,
    pub command: Command,
}

impl RunConfig {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("config serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    /// Parses `argv` (including the program name).
    pub fn parse_from<I, T>(argv: I) -> std::result::Result<Self, clap::Error>
    where
        I: IntoIterator<Item = T>,
        T: Into<OsString> + Clone,
    {
        let cli = Cli::try_parse_from(argv)?;
        Ok(RunConfig { global: cli.global, command: cli.command })
    }
}

pub fn main() -> i32 {
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run(std::env::args_os(), &mut stdout.lock(), &mut stderr.lock())
}

/// Parses `argv`, runs the subcommand and returns the exit status.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let config = match RunConfig::parse_from(argv) {
        Ok(config) => config,
        Err(e) => {
            use clap::error::ErrorKind;
            let rendered = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{rendered}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{rendered}");
                    EXIT_USAGE
                }
            };
        }
    };
    if let Err(msg) = configure_threads() {
        let _ = writeln!(err, "error: {msg}");
        return EXIT_USAGE;
    }
    match dispatch(&config, out) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_DOMAIN
        }
    }
}

fn configure_threads() -> std::result::Result<(), String> {
    let Ok(value) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let n: usize = value.trim().parse().map_err(|_| format!("{THREADS_ENV}={value:?} is not a thread count"))?;
    if n == 0 {
        return Err(format!("{THREADS_ENV} must be at least 1"));
    }
    // a second call in the same process keeps the existing pool
    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    Ok(())
}

/// Runs a parsed invocation, writing its report to `out`.
pub fn dispatch(config: &RunConfig, out: &mut dyn Write) -> Result<()> {
    let g = &config.global;
    match &config.command {
        Command::VerifyExamples => verify_examples(g, out),
        Command::Tune { c, tol, n_max } => tune(g, *c, *tol, *n_max, out),
        Command::Boundary { c, n, out: path } => boundary(g, *c, *n, path.as_deref(), out),
        Command::Crossratio { c, n, trials } => crossratio(g, *c, *n, *trials, out),
        Command::XiScan { grid_file, n, out: path } => scan(g, grid_file, *n, path.as_deref(), out),
        Command::ThurstonCheck { spec, orbifold } => thurston_check(g, spec.as_deref(), orbifold.as_deref(), out),
        Command::Render { c, center, width, px, iters, trap, out: path } => {
            let center = center.finite().ok_or_else(|| Error::Domain("render center must be finite".into()))?;
            render(g, *c, center, *width, *px, *iters, *trap, path, out)
        }
        Command::Comparability { c, n_max, samples, tol, tune_iters } => {
            comparability(g, *c, *n_max, *samples, *tol, *tune_iters, out)
        }
    }
}

fn cjson(z: Complex64) -> Value {
    json!([round_sig(z.re), round_sig(z.im)])
}

fn csig(z: Complex64) -> String {
    format!("{},{}", sig(z.re), sig(z.im))
}

fn num(x: f64) -> Value {
    if x.is_finite() {
        json!(round_sig(x))
    } else {
        json!(sig(x))
    }
}

fn print_json(out: &mut dyn Write, value: &Value) -> Result<()> {
    writeln!(out, "{}", serde_json::to_string_pretty(value).expect("json value"))?;
    Ok(())
}

/// Expected roots for the four closed-form cases.
struct ExampleCase {
    name: &'static str,
    c: f64,
    branch: Branch,
    expected: [Complex64; 2],
    tol: f64,
}

fn example_cases() -> [ExampleCase; 4] {
    let r = |x: f64| Complex64::new(x, 0.0);
    [
        ExampleCase { name: "c=2/D1", c: 2.0, branch: Branch::D1, expected: [r(1.0), r(0.8)], tol: 1e-9 },
        ExampleCase { name: "c=2/D2", c: 2.0, branch: Branch::D2, expected: [r(1.432575), r(0.644348)], tol: 1e-5 },
        ExampleCase { name: "c=-2/D4", c: -2.0, branch: Branch::D4, expected: [r(1.0), r(-0.8)], tol: 1e-9 },
        ExampleCase {
            name: "c=-2/D3",
            c: -2.0,
            branch: Branch::D3,
            expected: [Complex64::new(-0.5, 1.936491), Complex64::new(-0.5, -1.936491)],
            tol: 1e-5,
        },
    ]
}

/// Largest distance between expected and computed roots under the better of
/// the two pairings.
fn pair_residual(got: [Complex64; 2], want: [Complex64; 2]) -> f64 {
    let straight = (got[0] - want[0]).norm().max((got[1] - want[1]).norm());
    let crossed = (got[0] - want[1]).norm().max((got[1] - want[0]).norm());
    straight.min(crossed)
}

fn verify_examples(g: &GlobalArgs, out: &mut dyn Write) -> Result<()> {
    let mut rows = Vec::new();
    let mut failed = Vec::new();
    for case in example_cases() {
        let sol: BranchSolution = all_branches(Complex64::new(case.c, 0.0))?
            .into_iter()
            .find(|s| s.branch == case.branch)
            .ok_or_else(|| Error::Domain(format!("branch {:?} missing at c = {}", case.branch, case.c)))?;
        let residual = pair_residual(sol.roots, case.expected);
        if residual.is_nan() || residual >= case.tol {
            failed.push(case.name);
        }
        rows.push((case, sol, residual));
    }
    if g.json {
        let value: Vec<Value> = rows
            .iter()
            .map(|(case, sol, residual)| {
                json!({
                    "case": case.name,
                    "v": cjson(sol.v),
                    "w": cjson(sol.w),
                    "p": cjson(sol.roots[0]),
                    "q": cjson(sol.roots[1]),
                    "residual": num(*residual),
                })
            })
            .collect();
        print_json(out, &Value::Array(value))?;
    } else {
        writeln!(out, "{:<9} {:<28} {:<28} {:<28} {:<28} {:<18} tol", "case", "v", "w", "p", "q", "residual")?;
        for (case, sol, residual) in &rows {
            writeln!(
                out,
                "{:<9} {:<28} {:<28} {:<28} {:<28} {:<18} {}",
                case.name,
                csig(sol.v),
                csig(sol.w),
                csig(sol.roots[0]),
                csig(sol.roots[1]),
                sig(*residual),
                sig(case.tol)
            )?;
        }
    }
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Error::Domain(format!("examples out of tolerance: {}", failed.join(", "))))
    }
}

fn tuned(
    c: Point,
    theta: &RotationNumber,
    tol: f64,
    n_max: usize,
) -> Result<(crate::blaschke::BlaschkeProduct, TuneResult)> {
    check_parameter(c)?;
    let b = phi_inverse(c)?;
    let opts = TuneOptions { n_max, ..TuneOptions::default() };
    let result = tune_blaschke(&b, theta, tol, &opts)?;
    Ok((b.with_prefactor(result.t), result))
}

fn tune(g: &GlobalArgs, c: Point, tol: f64, n_max: usize, out: &mut dyn Write) -> Result<()> {
    let theta = g.theta.resolve()?;
    let (_, r) = tuned(c, &theta, tol, n_max)?;
    if g.json {
        print_json(out, &json!({"t": num(r.t), "rho": num(r.rho), "iterations": r.iterations}))
    } else {
        writeln!(out, "t          {}", sig(r.t))?;
        writeln!(out, "rho        {}", sig(r.rho))?;
        writeln!(out, "|rho-theta| {}", sig((r.rho - theta.value()).abs()))?;
        writeln!(out, "iterations {}", r.iterations)?;
        Ok(())
    }
}

/// Writes to `path` when given, otherwise to `out`.
fn with_sink(path: Option<&Path>, out: &mut dyn Write, body: impl FnOnce(&mut dyn Write) -> Result<()>) -> Result<()> {
    match path {
        Some(p) => {
            let mut file = std::io::BufWriter::new(std::fs::File::create(p)?);
            body(&mut file)?;
            file.flush()?;
            Ok(())
        }
        None => body(out),
    }
}

fn csv_err(e: csv::Error) -> Error {
    Error::Io(e.to_string())
}

fn boundary(g: &GlobalArgs, c: Point, n: usize, path: Option<&Path>, out: &mut dyn Write) -> Result<()> {
    let curve = boundary_orbit(c, &g.theta.resolve()?, n)?;
    with_sink(path, out, |w| {
        let mut csv = csv::Writer::from_writer(w);
        csv.write_record(["angle", "re", "im"]).map_err(csv_err)?;
        for (angle, z) in curve.samples() {
            csv.write_record([sig(angle), sig(z.re), sig(z.im)]).map_err(csv_err)?;
        }
        csv.flush()?;
        Ok(())
    })
}

fn crossratio(g: &GlobalArgs, c: Point, n: usize, trials: usize, out: &mut dyn Write) -> Result<()> {
    let curve = boundary_orbit(c, &g.theta.resolve()?, n)?;
    let report = quasicircle_delta(&curve, trials, g.seed)?;
    print_json(
        out,
        &json!({
            "c": c.to_string(),
            "n": n,
            "seed": g.seed,
            "min_abs": num(report.min_abs),
            "arg_quadruple": report.arg_quadruple,
            "quadruples_tested": report.quadruples_tested,
        }),
    )
}

/// Reads parameters from a CSV file with columns `re,im`; a header row and
/// rows holding `inf` are accepted.
pub fn read_grid(path: &Path) -> Result<Vec<Point>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(csv_err)?;
    let mut grid = Vec::new();
    for (line, record) in reader.records().enumerate() {
        let record = record.map_err(csv_err)?;
        let fields: Vec<&str> = record.iter().filter(|f| !f.is_empty()).collect();
        if fields.is_empty() || (line == 0 && fields[0].parse::<f64>().is_err() && fields[0] != "inf") {
            continue;
        }
        let text = fields.join(",");
        grid.push(text.parse::<Point>().map_err(|e| Error::Parse(format!("line {}: {e}", line + 1)))?);
    }
    Ok(grid)
}

fn scan(g: &GlobalArgs, grid_file: &Path, n: usize, path: Option<&Path>, out: &mut dyn Write) -> Result<()> {
    let grid = read_grid(grid_file)?;
    let samples = xi_scan(&grid, &g.theta.resolve()?, n);
    with_sink(path, out, |w| {
        let mut csv = csv::Writer::from_writer(w);
        csv.write_record(["re", "im", "distance", "flagged", "error"]).map_err(csv_err)?;
        for s in &samples {
            let (re, im) = match s.c {
                Point::Finite(z) => (sig(z.re), sig(z.im)),
                Point::Infinity => ("inf".to_string(), "inf".to_string()),
            };
            let flagged = if s.flagged { "1" } else { "0" };
            let error = s.error.clone().unwrap_or_default();
            csv.write_record([re, im, sig(s.distance), flagged.to_string(), error]).map_err(csv_err)?;
        }
        csv.flush()?;
        Ok(())
    })
}

fn thurston_check(g: &GlobalArgs, spec: Option<&Path>, orbifold: Option<&str>, out: &mut dyn Write) -> Result<()> {
    if spec.is_none() && orbifold.is_none() {
        return Err(Error::Domain("thurston-check needs --spec or --orbifold".into()));
    }
    let mut report = serde_json::Map::new();
    if let Some(path) = spec {
        let text = std::fs::read_to_string(path)?;
        let spec = MulticurveSpec::from_json(&text)?;
        let e = leading_eigenvalue(&thurston_matrix(&spec)?)?;
        report.insert("n".into(), json!(spec.n));
        report.insert("lambda".into(), num(e.value));
        report.insert("obstructed".into(), json!(e.obstructed));
    }
    if let Some(list) = orbifold {
        let sig = OrbifoldSignature(list.split(',').map(str::parse).collect::<Result<_>>()?);
        let e = orbifold_euler(&sig)?;
        report.insert("chi".into(), json!(e.chi.to_string()));
        report.insert("hyperbolic".into(), json!(e.hyperbolic));
    }
    if g.json {
        return print_json(out, &Value::Object(report));
    }
    if let Some(lambda) = report.get("lambda") {
        writeln!(out, "lambda      {lambda}")?;
        let verdict = if report["obstructed"] == json!(true) { "obstruction (lambda >= 1)" } else { "no obstruction" };
        writeln!(out, "verdict     {verdict}")?;
    }
    if let Some(chi) = report.get("chi") {
        writeln!(out, "chi         {}", chi.as_str().unwrap_or_default())?;
        writeln!(out, "hyperbolic  {}", report["hyperbolic"])?;
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn render(
    g: &GlobalArgs,
    c: Point,
    center: Complex64,
    width: f64,
    px: Pixels,
    iters: usize,
    trap: Option<f64>,
    path: &Path,
    out: &mut dyn Write,
) -> Result<()> {
    let map = make_map(c, &g.theta.resolve()?)?;
    let trap_radius = match trap {
        Some(r) => r,
        None => default_trap_radius(&map, 5000)?,
    };
    let spec = RasterSpec { center, width, px_w: px.w, px_h: px.h, max_iter: iters, trap_radius };
    let labels = classify_grid(&map, &spec)?;
    write_image(&labels, &Palette::default(), path)?;
    let unresolved = labels.unresolved_fraction();
    if g.json {
        print_json(
            out,
            &json!({"out": path.display().to_string(), "trap_radius": num(trap_radius), "unresolved_fraction": num(unresolved)}),
        )
    } else {
        writeln!(out, "wrote {} ({}x{})", path.display(), px.w, px.h)?;
        writeln!(out, "trap radius         {}", sig(trap_radius))?;
        writeln!(out, "unresolved fraction {}", sig(unresolved))?;
        Ok(())
    }
}

fn comparability(
    g: &GlobalArgs,
    c: Point,
    n_max: usize,
    samples: usize,
    tol: f64,
    tune_iters: usize,
    out: &mut dyn Write,
) -> Result<()> {
    let theta = g.theta.resolve()?;
    let (b, tune) = tuned(c, &theta, tol, tune_iters)?;
    let report = comparability_report(&b, &theta, n_max, samples)?;
    if g.json {
        let rows: Vec<Value> = report
            .rows
            .iter()
            .map(|r| {
                json!({
                    "n": r.n, "q_n": r.q_n, "q_next": r.q_next,
                    "backward_min": num(r.backward_min), "backward_max": num(r.backward_max),
                    "forward_min": num(r.forward_min), "forward_max": num(r.forward_max),
                    "flagged": r.flagged,
                })
            })
            .collect();
        return print_json(
            out,
            &json!({"t": num(tune.t), "rho": num(tune.rho), "k": report.k.map(num), "samples": samples, "rows": rows}),
        );
    }
    writeln!(out, "tuned t = {}, rho = {}", sig(tune.t), sig(tune.rho))?;
    writeln!(
        out,
        "{:>2} {:>6} {:>6} {:>14} {:>14} {:>14} {:>14} {:>7}",
        "n", "q_n", "q_n+1", "back min", "back max", "fwd min", "fwd max", "flagged"
    )?;
    for r in &report.rows {
        writeln!(
            out,
            "{:>2} {:>6} {:>6} {:>14} {:>14} {:>14} {:>14} {:>7}",
            r.n,
            r.q_n,
            r.q_next,
            sig(r.backward_min),
            sig(r.backward_max),
            sig(r.forward_min),
            sig(r.forward_max),
            r.flagged
        )?;
    }
    match report.k {
        Some(k) => writeln!(out, "K = {}", sig(k))?,
        None => writeln!(out, "K = n/a")?,
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let argv = std::iter::once("siegel-lab").chain(args.iter().copied());
        let code = run(argv, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn no_arguments_is_a_usage_error() {
        let (code, out, err) = run_args(&[]);
        assert_eq!(code, EXIT_USAGE);
        assert!(out.is_empty());
        assert!(err.contains("Usage"));
    }

    #[test]
    fn unknown_subcommand_is_a_usage_error() {
        let (code, _, err) = run_args(&["frobnicate"]);
        assert_eq!(code, EXIT_USAGE);
        assert!(err.contains("Usage"));
        assert_eq!(run_args(&["tune", "--c", "1,2,3"]).0, EXIT_USAGE);
    }

    #[test]
    fn help_exits_cleanly() {
        let (code, out, _) = run_args(&["--help"]);
        assert_eq!(code, EXIT_OK);
        assert!(out.contains("verify-examples"));
    }

    #[test]
    fn verify_examples_passes() {
        let (code, out, err) = run_args(&["verify-examples", "--json"]);
        assert_eq!(code, EXIT_OK, "{err}");
        let rows: Vec<Value> = serde_json::from_str(&out).unwrap();
        assert_eq!(rows.len(), 4);
        for row in rows {
            assert!(row["residual"].as_f64().unwrap() < 1e-5);
        }
    }

    #[test]
    fn degenerate_tune_is_a_domain_error() {
        let (code, _, err) = run_args(&["tune", "--c", "0,0"]);
        assert_eq!(code, EXIT_DOMAIN);
        assert!(err.contains("degenerate"), "{err}");
    }

    #[test]
    fn theta_spec_round_trips() {
        for t in [ThetaSpec::Golden, ThetaSpec::Value(0.1), ThetaSpec::Value(std::f64::consts::FRAC_1_SQRT_2 - 0.5)] {
            assert_eq!(t.to_string().parse::<ThetaSpec>().unwrap(), t);
        }
        assert!("gold".parse::<ThetaSpec>().is_err());
    }

    #[test]
    fn config_round_trips_through_json() {
        let cases: &[&[&str]] = &[
            &["siegel-lab", "verify-examples"],
            &["siegel-lab", "--json", "--theta", "0.3819660112501051", "tune", "--c", "3,1", "--tol", "0.001"],
            &["siegel-lab", "boundary", "--c", "inf", "--n", "100", "--out", "b.csv"],
            &["siegel-lab", "crossratio", "--seed", "17", "--trials", "5"],
            &["siegel-lab", "xi-scan", "--grid-file", "g.csv"],
            &["siegel-lab", "thurston-check", "--spec", "s.json", "--orbifold", "2,2,2,3"],
            &[
                "siegel-lab",
                "render",
                "--c",
                "-2,0.5",
                "--center",
                "0.1,-0.2",
                "--px",
                "3x2",
                "--trap",
                "0.1",
                "--out",
                "x.ppm",
            ],
            &["siegel-lab", "comparability", "--samples", "7"],
        ];
        for argv in cases {
            let config = RunConfig::parse_from(argv.iter().copied()).unwrap();
            let back = RunConfig::from_json(&config.to_json()).unwrap();
            assert_eq!(back, config);
        }
    }

    #[test]
    fn pixels_parse() {
        assert_eq!("640x480".parse::<Pixels>().unwrap(), Pixels { w: 640, h: 480 });
        assert!("640".parse::<Pixels>().is_err());
    }

    #[test]
    fn thurston_check_reports_lambda() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("spec.json");
        std::fs::write(&path, r#"{"n": 2, "preimages": [[1, 2, 1], [2, 1, 1]]}"#).unwrap();
        let (code, out, err) =
            run_args(&["thurston-check", "--json", "--spec", path.to_str().unwrap(), "--orbifold", "2,2,2,3"]);
        assert_eq!(code, EXIT_OK, "{err}");
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["lambda"], json!(1.0));
        assert_eq!(v["obstructed"], json!(true));
        assert_eq!(v["chi"], json!("-1/6"));
        assert_eq!(run_args(&["thurston-check"]).0, EXIT_DOMAIN);
    }

    #[test]
    fn grid_reader_accepts_headers_and_infinity() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("grid.csv");
        std::fs::write(&path, "re,im\n2,0\ninf\n -1.5 , 3\n").unwrap();
        assert_eq!(read_grid(&path).unwrap(), vec![Point::new(2.0, 0.0), Point::Infinity, Point::new(-1.5, 3.0)]);
        std::fs::write(&path, "2,0\nx,1\n").unwrap();
        assert!(read_grid(&path).is_err());
    }
}
