//! Spectra of constrained oscillators, the singular isotonic oscillator and
//! the separable 2D systems built from it.
//!
//! Exit codes: 0 success, 1 bad flags or parameters, 2 solver or output
//! failure, 3 a verification check failed.

mod config;
mod output;

use std::fmt;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use isosusy::figures;
use isosusy::superint2d::{self, System2D, SystemKind};
use isosusy::susy::{self, Region};
use isosusy::verify::{self, Suite, VerifyOptions};
use isosusy::weber_spectra::{self, BarrierGeometry, BarrierKind, Parity};
use isosusy::Execution;

use config::{FileConfig, Overrides, RunConfig};
use output::{g15, LevelRow, Params};

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Solver(isosusy::Error),
    Output(String),
    Verify { failed: usize, total: usize },
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Solver(_) | CliError::Output(_) => 2,
            CliError::Verify { .. } => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "{m}"),
            CliError::Solver(e) => write!(f, "solver error: {e}"),
            CliError::Output(m) => write!(f, "output error: {m}"),
            CliError::Verify { failed, total } => write!(f, "{failed} of {total} checks failed"),
        }
    }
}

impl From<isosusy::Error> for CliError {
    fn from(e: isosusy::Error) -> Self {
        match e {
            isosusy::Error::InvalidParameter(m) => CliError::Usage(m),
            e @ isosusy::Error::DomainTooNarrow { .. } => CliError::Usage(e.to_string()),
            e => CliError::Solver(e),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Units {
    /// Energies in the units implied by the given ħ, ω and a.
    Given,
    /// Energies divided by ħω (oscillators) or ħ²/(2a²) (isotonic, 2D).
    Natural,
}

#[derive(Parser)]
#[command(
    name = "isosusy",
    version,
    about = "Constrained and singular isotonic oscillator spectra"
)]
struct Cli {
    /// Plain-text `key = value` file (hbar, omega, a, grid.n_points, tol.root, tol.series, tol.scan_step)
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Write data here instead of stdout
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Units::Given)]
    units: Units,
    #[arg(long, global = true)]
    hbar: Option<f64>,
    #[arg(long, global = true)]
    omega: Option<f64>,
    /// Run on the calling thread only
    #[arg(long, global = true)]
    sequential: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Eigenvalues for one geometry
    Spectrum {
        #[command(subcommand)]
        system: SpectrumCmd,
    },
    /// Energies against barrier position, or wavefunction samples
    Sweep(SweepArgs),
    /// Run the invariant suites
    Verify {
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, hide = true)]
        negative_control: bool,
    },
    /// Formal ladder against the physical spectrum, and summed against closed-form 2D totals
    Report {
        #[arg(long, allow_hyphen_values = true)]
        a: Option<f64>,
        #[arg(long, default_value_t = 8)]
        p_max: usize,
        #[arg(long, default_value_t = 3)]
        nmax: usize,
        #[arg(long, default_value_t = 3)]
        kmax: usize,
    },
}

#[derive(Subcommand)]
enum SpectrumCmd {
    /// Oscillator with a wall at z = b, allowed region z > b
    HalfLine {
        #[arg(long, allow_hyphen_values = true)]
        b: f64,
        #[arg(long)]
        levels: usize,
    },
    /// Oscillator between walls at z = ±b
    Box {
        #[arg(long, allow_hyphen_values = true)]
        b: f64,
        #[arg(long)]
        levels: usize,
    },
    /// Singular isotonic oscillator in one region
    Isotonic {
        #[arg(long, allow_hyphen_values = true)]
        a: Option<f64>,
        #[arg(long)]
        region: String,
        #[arg(long)]
        levels: usize,
    },
    /// Separable 2D system
    #[command(name = "2d")]
    TwoD {
        #[arg(long, allow_hyphen_values = true)]
        a: Option<f64>,
        #[arg(long)]
        system: String,
        /// Region of x₁, or `R,R` for x₁ and x₂ (the second matters for hs4)
        #[arg(long)]
        region: String,
        #[arg(long)]
        nmax: usize,
        #[arg(long)]
        kmax: usize,
    },
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long, value_parser = ["II", "III", "ii", "iii"])]
    case: String,
    #[arg(long, allow_hyphen_values = true)]
    b_from: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    b_to: Option<f64>,
    #[arg(long)]
    b_steps: Option<usize>,
    #[arg(long, default_value_t = 11)]
    levels: usize,
    /// Emit (z, ψ_n(z)) for this level instead of a sweep
    #[arg(long)]
    wavefunction: Option<usize>,
    #[arg(long, allow_hyphen_values = true)]
    b: Option<f64>,
    /// Sampled length beyond max(b, 0) on the half-line
    #[arg(long, default_value_t = 8.0)]
    span: f64,
}

struct Ctx {
    run: RunConfig,
    format: Format,
    units: Units,
}

impl Ctx {
    fn params(&self, a: Option<f64>, b: Option<f64>) -> Params {
        Params {
            hbar: self.run.hbar,
            omega: self.run.omega,
            a,
            b,
            units: match self.units {
                Units::Given => "given",
                Units::Natural => "natural",
            },
        }
    }

    fn scale(&self, natural: f64) -> f64 {
        match self.units {
            Units::Given => 1.0,
            Units::Natural => 1.0 / natural,
        }
    }
}

fn parity_tag(p: Parity) -> String {
    match p {
        Parity::Even => "even",
        Parity::Odd => "odd",
        Parity::None => "none",
    }
    .into()
}

fn parse_region(s: &str) -> Result<Region, CliError> {
    s.parse().map_err(|e: isosusy::Error| CliError::Usage(e.to_string()))
}

fn spectrum(ctx: &Ctx, cmd: SpectrumCmd) -> Result<String, CliError> {
    let cfg = ctx.run.solver;
    let (params, rows): (Params, Vec<LevelRow>) = match cmd {
        SpectrumCmd::HalfLine { b, levels } | SpectrumCmd::Box { b, levels } => {
            let geom = if matches!(cmd, SpectrumCmd::HalfLine { .. }) {
                BarrierGeometry::half_line(b)
            } else {
                BarrierGeometry::symmetric_box(b)
            };
            let p = ctx.run.oscillator();
            let s = ctx.scale(p.hbar * p.omega);
            let rows = weber_spectra::solve(geom, levels, &p, &cfg)?
                .into_iter()
                .map(|l| LevelRow {
                    n: l.n,
                    k: None,
                    epsilon: l.epsilon,
                    energy: l.energy * s,
                    parity: Some(parity_tag(l.parity)),
                    region: None,
                })
                .collect();
            (ctx.params(None, Some(b)), rows)
        }
        SpectrumCmd::Isotonic { a, region, levels } => {
            let run = RunConfig {
                a: a.unwrap_or(ctx.run.a),
                ..ctx.run
            };
            let p = run.isotonic()?;
            let region = parse_region(&region)?;
            let s = ctx.scale(p.unit());
            let rows = susy::region_energies(region, levels, &p, &cfg)?
                .into_iter()
                .enumerate()
                .map(|(n, (epsilon, energy))| LevelRow {
                    n,
                    k: None,
                    epsilon,
                    energy: energy * s,
                    parity: None,
                    region: Some(region.to_string()),
                })
                .collect();
            (ctx.params(Some(p.a), None), rows)
        }
        SpectrumCmd::TwoD {
            a,
            system,
            region,
            nmax,
            kmax,
        } => {
            let run = RunConfig {
                a: a.unwrap_or(ctx.run.a),
                ..ctx.run
            };
            let p = run.isotonic()?;
            let kind: SystemKind = system
                .parse()
                .map_err(|e: isosusy::Error| CliError::Usage(e.to_string()))?;
            let (r1, r2) = match region.split_once(',') {
                Some((x, y)) => (parse_region(x)?, parse_region(y)?),
                None => {
                    let r = parse_region(&region)?;
                    (r, r)
                }
            };
            let s = ctx.scale(p.unit());
            let sys = System2D::new(kind, p);
            let rows = superint2d::spectrum_2d(&sys, r1, r2, nmax, kmax, &cfg)?
                .into_iter()
                .map(|l| LevelRow {
                    n: l.qn.n,
                    k: Some(l.qn.k),
                    epsilon: l.epsilon1,
                    energy: l.energy * s,
                    parity: None,
                    region: Some(if kind == SystemKind::Hs4 {
                        format!("{}x{}", l.qn.region1, l.qn.region2)
                    } else {
                        l.qn.region1.to_string()
                    }),
                })
                .collect();
            (ctx.params(Some(p.a), None), rows)
        }
    };
    Ok(match ctx.format {
        Format::Csv => output::levels_csv(&rows),
        Format::Json => output::levels_json(&params, &rows),
    })
}

fn sweep(ctx: &Ctx, args: SweepArgs) -> Result<String, CliError> {
    let kind = if args.case.eq_ignore_ascii_case("II") {
        BarrierKind::HalfLine
    } else {
        BarrierKind::SymmetricBox
    };
    let p = ctx.run.oscillator();
    let s = ctx.scale(p.hbar * p.omega);
    if let Some(n) = args.wavefunction {
        let b = args
            .b
            .ok_or_else(|| CliError::Usage("--wavefunction needs --b".into()))?;
        let geom = BarrierGeometry { kind, b };
        let samples = figures::wavefunction_samples(geom, n, ctx.run.n_points, args.span, &p, &ctx.run.solver)?;
        let params = ctx.params(None, Some(b));
        return Ok(match ctx.format {
            Format::Csv => output::samples_csv(&samples),
            Format::Json => output::samples_json(&params, n, &samples),
        });
    }
    let (from, to, steps) = match (args.b_from, args.b_to, args.b_steps) {
        (Some(f), Some(t), Some(n)) => (f, t, n),
        _ => return Err(CliError::Usage("a sweep needs --b-from, --b-to and --b-steps".into())),
    };
    let mut sw = figures::energy_sweep(kind, from, to, steps, args.levels, &p, &ctx.run.solver)?;
    for row in &mut sw.energies {
        row.iter_mut().for_each(|e| *e *= s);
    }
    Ok(match ctx.format {
        Format::Csv => output::sweep_csv(&sw.b, &sw.energies),
        Format::Json => output::sweep_json(&ctx.params(None, None), &sw.b, &sw.energies),
    })
}

fn run_verify(ctx: &Ctx, suite: &str, negative_control: bool) -> Result<String, CliError> {
    let suite: Suite = suite
        .parse()
        .map_err(|e: isosusy::Error| CliError::Usage(e.to_string()))?;
    let opts = VerifyOptions {
        drop_odd_factor: negative_control,
        execution: ctx.run.solver.execution,
    };
    let checks = verify::run_suite(suite, &opts);
    let failed = checks.iter().filter(|c| !c.passed).count();
    let mut out = String::new();
    for c in &checks {
        out.push_str(&format!("{c}\n"));
    }
    out.push_str(&format!(
        "{} of {} checks passed\n",
        checks.len() - failed,
        checks.len()
    ));
    if failed > 0 {
        print!("{out}");
        return Err(CliError::Verify {
            failed,
            total: checks.len(),
        });
    }
    Ok(out)
}

#[derive(Serialize)]
struct ReportDoc {
    params: Params,
    formal_spacing: f64,
    formal: Vec<f64>,
    physical: Vec<f64>,
    physical_spacings: Vec<f64>,
    spacing_ratio: f64,
    min_mismatch: f64,
    formal_matches_physical: bool,
    totals: Vec<TotalRow>,
}

#[derive(Serialize)]
struct TotalRow {
    system: String,
    n: usize,
    k: usize,
    computed: f64,
    closed_form: f64,
}

fn report(ctx: &Ctx, a: Option<f64>, p_max: usize, nmax: usize, kmax: usize) -> Result<String, CliError> {
    let run = RunConfig {
        a: a.unwrap_or(ctx.run.a),
        ..ctx.run
    };
    let p = run.isotonic()?;
    let s = ctx.scale(p.unit());
    let f = superint2d::formal_vs_physical_report(&p, p_max, &run.solver)?;
    let totals: Vec<TotalRow> = superint2d::closed_form_report(&p, Region::R2, nmax, kmax, &run.solver)?
        .into_iter()
        .map(|r| TotalRow {
            system: r.system.to_string(),
            n: r.qn.n,
            k: r.qn.k,
            computed: r.computed * s,
            closed_form: r.closed_form * s,
        })
        .collect();
    let scaled = |v: &[f64]| v.iter().map(|x| x * s).collect::<Vec<_>>();
    let doc = ReportDoc {
        params: ctx.params(Some(p.a), None),
        formal_spacing: f.formal_spacing * s,
        formal: scaled(&f.formal),
        physical: scaled(&f.physical),
        physical_spacings: scaled(&f.physical_spacings),
        spacing_ratio: f.spacing_ratio,
        min_mismatch: f.min_mismatch * s,
        formal_matches_physical: f.formal_matches_physical,
        totals,
    };
    if ctx.format == Format::Json {
        let mut out = serde_json::to_string_pretty(&doc).map_err(|e| CliError::Output(e.to_string()))?;
        out.push('\n');
        return Ok(out);
    }
    let mut out = String::from("# formal ladder against hs1 R2 physical levels (k = 0)\nindex,formal,physical\n");
    for i in 0..doc.formal.len().max(doc.physical.len()) {
        let cell = |v: &[f64]| v.get(i).map_or(String::new(), |x| g15(*x));
        out.push_str(&format!("{i},{},{}\n", cell(&doc.formal), cell(&doc.physical)));
    }
    out.push_str(&format!(
        "# formal spacing {}; physical spacing max/min {}; smallest mismatch {}; formal_matches_physical {}\n",
        g15(doc.formal_spacing),
        g15(doc.spacing_ratio),
        g15(doc.min_mismatch),
        doc.formal_matches_physical
    ));
    out.push_str("# summed 1D energies against closed-form totals, R2\nsystem,n,k,computed,closed_form\n");
    for r in &doc.totals {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            r.system,
            r.n,
            r.k,
            g15(r.computed),
            g15(r.closed_form)
        ));
    }
    Ok(out)
}

fn run(cli: Cli) -> Result<(), CliError> {
    let file = match &cli.config {
        Some(path) => FileConfig::load(path)?,
        None => FileConfig::default(),
    };
    let mut run = RunConfig::merge(
        &file,
        &Overrides {
            hbar: cli.hbar,
            omega: cli.omega,
            a: None,
        },
    )?;
    if cli.sequential {
        run.solver.execution = Execution::Sequential;
    }
    let ctx = Ctx {
        run,
        format: cli.format,
        units: cli.units,
    };
    let data = match cli.command {
        Command::Spectrum { system } => spectrum(&ctx, system)?,
        Command::Sweep(args) => sweep(&ctx, args)?,
        Command::Verify {
            suite,
            negative_control,
        } => run_verify(&ctx, &suite, negative_control)?,
        Command::Report { a, p_max, nmax, kmax } => report(&ctx, a, p_max, nmax, kmax)?,
    };
    match &cli.output {
        Some(path) => std::fs::write(path, data).map_err(|e| CliError::Output(format!("{}: {e}", path.display()))),
        None => std::io::stdout()
            .lock()
            .write_all(data.as_bytes())
            .map_err(|e| CliError::Output(e.to_string())),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("isosusy: {e}");
            ExitCode::from(e.code())
        }
    }
}
