//! Invariant suites, shared by the command line `verify` command and the
//! acceptance tests. Every check measures one number and compares it with a
//! bound; oracle comparisons go through [`crate::oracle`] only.

use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::fmt;

use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::figures;
use crate::oracle::{self, GridSpec, PotentialSpec};
use crate::specfun::{self, Jet, PrecisionConfig, WeberArgs};
use crate::superint2d::{self, System2D, SystemKind};
use crate::susy::{self, IsotonicParams, Region, RegionState};
use crate::weber_spectra::{self, BarrierGeometry, BarrierKind, EigenSolveConfig, OscillatorParams};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    All,
    Specfun,
    Spectra,
    Susy,
    Superint,
}

impl std::str::FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "all" => Ok(Suite::All),
            "specfun" => Ok(Suite::Specfun),
            "spectra" => Ok(Suite::Spectra),
            "susy" => Ok(Suite::Susy),
            "superint" => Ok(Suite::Superint),
            other => Err(Error::InvalidParameter(format!("unknown suite {other:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct VerifyOptions {
    /// Evaluate `y₂` without its odd factor `z` (a known-wrong solution), to
    /// confirm the suite can fail.
    pub drop_odd_factor: bool,
    pub execution: Execution,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Comparison {
    AtMost,
    Above,
    /// Reported only; always passes.
    Report,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub name: String,
    pub measured: f64,
    pub bound: f64,
    pub comparison: Comparison,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    pub fn at_most(name: &str, measured: f64, bound: f64) -> Check {
        Check {
            name: name.into(),
            measured,
            bound,
            comparison: Comparison::AtMost,
            passed: measured <= bound,
            detail: String::new(),
        }
    }

    pub fn above(name: &str, measured: f64, bound: f64) -> Check {
        Check {
            name: name.into(),
            measured,
            bound,
            comparison: Comparison::Above,
            passed: measured > bound,
            detail: String::new(),
        }
    }

    pub fn report(name: &str, measured: f64) -> Check {
        Check {
            name: name.into(),
            measured,
            bound: f64::NAN,
            comparison: Comparison::Report,
            passed: true,
            detail: String::new(),
        }
    }

    fn errored(name: &str, e: &Error) -> Check {
        Check {
            name: name.into(),
            measured: f64::NAN,
            bound: f64::NAN,
            comparison: Comparison::AtMost,
            passed: false,
            detail: format!("error: {e}"),
        }
    }

    pub fn with_detail(mut self, detail: impl Into<String>) -> Check {
        self.detail = detail.into();
        self
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = match (self.comparison, self.passed) {
            (Comparison::Report, _) => "INFO",
            (_, true) => "PASS",
            (_, false) => "FAIL",
        };
        write!(f, "{status} {}: {:.3e}", self.name, self.measured)?;
        match self.comparison {
            Comparison::AtMost => write!(f, " (bound <= {:.1e})", self.bound)?,
            Comparison::Above => write!(f, " (bound > {:.1e})", self.bound)?,
            Comparison::Report => {}
        }
        if !self.detail.is_empty() {
            write!(f, " [{}]", self.detail)?;
        }
        Ok(())
    }
}

fn guard(name: &str, f: impl FnOnce() -> Result<Check>) -> Check {
    f().unwrap_or_else(|e| Check::errored(name, &e))
}

fn guard_many(name: &str, f: impl FnOnce() -> Result<Vec<Check>>) -> Vec<Check> {
    f().unwrap_or_else(|e| vec![Check::errored(name, &e)])
}

pub fn run_suite(suite: Suite, opts: &VerifyOptions) -> Vec<Check> {
    match suite {
        Suite::All => [Suite::Specfun, Suite::Spectra, Suite::Susy, Suite::Superint]
            .into_iter()
            .flat_map(|s| run_suite(s, opts))
            .collect(),
        Suite::Specfun => specfun_suite(opts),
        Suite::Spectra => {
            let mut v = vec![exact_half_line_b0(opts)];
            v.extend(half_line_series(opts));
            v.extend(box_series(opts));
            v.push(oscillator_recovery(opts));
            v.extend(spectra_oracle_agreement(opts));
            v.extend(figure_data(opts));
            v.extend(oracle_self_test(opts));
            v
        }
        Suite::Susy => {
            let mut v = isotonic_states(opts);
            v.extend(a_invariance(opts));
            v.extend(susy_operators(opts));
            v
        }
        Suite::Superint => {
            let mut v = spectra_2d(opts);
            v.extend(formal_algebra(opts));
            v
        }
    }
}

// ---------------------------------------------------------------------------
// Special functions

fn grid(lo: f64, hi: f64, step: f64) -> Vec<f64> {
    let n = ((hi - lo) / step).round() as usize;
    (0..=n).map(|i| lo + step * i as f64).collect()
}

fn y2_jet(args: WeberArgs, cfg: &PrecisionConfig, opts: &VerifyOptions) -> Result<Jet> {
    if opts.drop_odd_factor {
        specfun::weber_y2_without_odd_factor_jet(args, cfg)
    } else {
        specfun::weber_y2_jet(args, cfg)
    }
}

/// Weber residual, Wronskian, parity, asymptotics, derivative and switch checks.
pub fn specfun_suite(opts: &VerifyOptions) -> Vec<Check> {
    vec![
        weber_residual(opts),
        wronskian(opts),
        parity(opts),
        asymptotic_ratio(opts),
        derivative_vs_stencil(opts),
        switch_continuity(opts),
    ]
}

/// `max |f'' − (z²/4 + ε)f| / max(1, |f|)` over `ε ∈ [−8, 4]`, `z ∈ [−6, 6]`.
pub fn weber_residual(opts: &VerifyOptions) -> Check {
    let name = "specfun: Weber residual of y1, y2, U";
    guard(name, || {
        let cfg = PrecisionConfig::default();
        let zs = grid(-6.0, 6.0, 0.25);
        let worst = opts.execution.try_map(&grid(-8.0, 4.0, 0.5), |&e| -> Result<f64> {
            let mut w = 0.0f64;
            for &z in &zs {
                let args = WeberArgs::new(e, z);
                let jets = [
                    specfun::weber_y1_jet(args, &cfg)?,
                    y2_jet(args, &cfg, opts)?,
                    specfun::pcf_u_jet(args, &cfg)?,
                ];
                for f in jets {
                    let r = (f.d2 - (0.25 * z * z + e) * f.value).abs() / f.value.abs().max(1.0);
                    w = w.max(r);
                }
            }
            Ok(w)
        })?;
        Ok(Check::at_most(name, worst.into_iter().fold(0.0, f64::max), 1e-8))
    })
}

/// `|y₁y₂' − y₁'y₂ − 1|` on the same grid.
pub fn wronskian(opts: &VerifyOptions) -> Check {
    let name = "specfun: Wronskian y1 y2' - y1' y2 = 1";
    guard(name, || {
        let cfg = PrecisionConfig::default();
        let zs = grid(-6.0, 6.0, 0.25);
        let worst = opts.execution.try_map(&grid(-8.0, 4.0, 0.5), |&e| -> Result<f64> {
            let mut w = 0.0f64;
            for &z in &zs {
                let args = WeberArgs::new(e, z);
                let value = if opts.drop_odd_factor {
                    let (a, b) = (specfun::weber_y1_jet(args, &cfg)?, y2_jet(args, &cfg, opts)?);
                    a.value * b.d1 - a.d1 * b.value
                } else {
                    specfun::weber_wronskian(args, &cfg)?
                };
                w = w.max((value - 1.0).abs());
            }
            Ok(w)
        })?;
        Ok(Check::at_most(name, worst.into_iter().fold(0.0, f64::max), 1e-10))
    })
}

/// `y₁` even and `y₂` odd.
pub fn parity(opts: &VerifyOptions) -> Check {
    let name = "specfun: parity of y1 (even) and y2 (odd)";
    guard(name, || {
        let cfg = PrecisionConfig::default();
        let mut w = 0.0f64;
        for e in grid(-8.0, 4.0, 0.5) {
            for z in grid(0.25, 6.0, 0.25) {
                let (p, m) = (WeberArgs::new(e, z), WeberArgs::new(e, -z));
                let (a, b) = (specfun::weber_y1(p, &cfg)?, specfun::weber_y1(m, &cfg)?);
                w = w.max((a - b).abs() / a.abs().max(1.0));
                let (a, b) = (y2_jet(p, &cfg, opts)?.value, y2_jet(m, &cfg, opts)?.value);
                w = w.max((a + b).abs() / a.abs().max(1.0));
            }
        }
        Ok(Check::at_most(name, w, 1e-13))
    })
}

/// `U / (e^{−z²/4} z^{−ε−1/2} Σ)` for `z ∈ [10, 20]`, `ε ∈ [−3, 1]`, where `Σ`
/// is the asymptotic series to `z⁻⁶`. The deviation from the leading term
/// alone is reported in the detail.
pub fn asymptotic_ratio(_opts: &VerifyOptions) -> Check {
    let name = "specfun: U against its large-z expansion";
    guard(name, || {
        let cfg = PrecisionConfig::default();
        let (mut corrected, mut leading) = (0.0f64, 0.0f64);
        for e in grid(-3.0, 1.0, 0.25) {
            for z in grid(10.0, 20.0, 0.5) {
                let u = specfun::pcf_u(WeberArgs::new(e, z), &cfg)?;
                let base = (-0.25 * z * z).exp() * z.powf(-e - 0.5);
                let z2 = z * z;
                let mut sum = 1.0;
                let mut term = 1.0;
                for s in 0..3 {
                    let s = s as f64;
                    term *= -(e + 0.5 + 2.0 * s) * (e + 1.5 + 2.0 * s) / (2.0 * (s + 1.0) * z2);
                    sum += term;
                }
                corrected = corrected.max((u / (base * sum) - 1.0).abs());
                leading = leading.max((u / base - 1.0).abs());
            }
        }
        Ok(Check::at_most(name, corrected, 1e-4).with_detail(format!(
            "leading term alone deviates by {leading:.2e}, the O(1/z^2) correction"
        )))
    })
}

/// Analytic `∂U/∂z` against a 5-point stencil with `h = 10⁻³`.
pub fn derivative_vs_stencil(opts: &VerifyOptions) -> Check {
    let name = "specfun: analytic dU/dz vs finite difference";
    guard(name, || {
        let cfg = PrecisionConfig::default();
        let zs = grid(-6.0, 6.0, 0.25);
        let h = 1e-3;
        let worst = opts.execution.try_map(&grid(-8.0, 4.0, 0.5), |&e| -> Result<f64> {
            let u = |z: f64| specfun::pcf_u(WeberArgs::new(e, z), &cfg);
            let mut w = 0.0f64;
            for &z in &zs {
                let d = specfun::pcf_u_dz(WeberArgs::new(e, z), &cfg)?;
                let fd = (u(z - 2.0 * h)? - 8.0 * u(z - h)? + 8.0 * u(z + h)? - u(z + 2.0 * h)?) / (12.0 * h);
                w = w.max((fd - d).abs() / d.abs().max(1.0));
            }
            Ok(w)
        })?;
        Ok(Check::at_most(name, worst.into_iter().fold(0.0, f64::max), 1e-7))
    })
}

/// Series and asymptotic branches of `U` at the switch point.
pub fn switch_continuity(_opts: &VerifyOptions) -> Check {
    let name = "specfun: U continuity across the series/asymptotic switch";
    guard(name, || {
        // both branches only need to beat the bound being checked
        let cfg = PrecisionConfig {
            series_tol: 1e-9,
            ..Default::default()
        };
        let mut w = 0.0f64;
        for e in [-8.0, -3.0, -1.0, 0.0, 1.0, 3.0] {
            let z = cfg.asymptotic_switch_z;
            {
                let args = WeberArgs::new(e, z);
                let s = specfun::pcf_u_series_branch(args, &cfg)?.value;
                let a = specfun::pcf_u_asymptotic_branch(args, &cfg, 1e-9)
                    .ok_or(Error::AsymptoticDivergence { epsilon: e, z })?
                    .value;
                w = w.max((s - a).abs() / s.abs());
            }
        }
        Ok(Check::at_most(name, w, 1e-8))
    })
}

// ---------------------------------------------------------------------------
// Constrained oscillator spectra

fn unit_oscillator() -> OscillatorParams {
    OscillatorParams::default()
}

/// Half-line roots at `b = 0` against `−(2n + 3/2)`, `n ≤ 10`.
pub fn exact_half_line_b0(opts: &VerifyOptions) -> Check {
    let name = "spectra: b=0 half-line levels equal -(2n+3/2), n<=10";
    guard(name, || {
        let cfg = EigenSolveConfig {
            execution: opts.execution,
            ..Default::default()
        };
        let levels = weber_spectra::solve_half_line(BarrierGeometry::half_line(0.0), 11, &unit_oscillator(), &cfg)?;
        let worst = levels
            .iter()
            .map(|l| (l.epsilon + 2.0 * l.n as f64 + 1.5).abs())
            .fold(0.0, f64::max);
        Ok(Check::at_most(name, worst, 1e-9))
    })
}

/// Second-order half-line series against roots for small `b`; the error
/// should fall like `b³`.
pub fn half_line_series(opts: &VerifyOptions) -> Vec<Check> {
    guard_many("spectra: half-line small-b series", || {
        let cfg = EigenSolveConfig {
            execution: opts.execution,
            ..Default::default()
        }
        .polished();
        let bs = [0.01, 0.02, 0.05];
        let mut worst_at_005 = 0.0f64;
        let mut worst_slope = 0.0f64;
        let mut slopes = Vec::new();
        let mut quad = String::new();
        for n in 0..4 {
            let mut pts = Vec::new();
            for &b in &bs {
                let root =
                    weber_spectra::solve_half_line(BarrierGeometry::half_line(b), n + 1, &unit_oscillator(), &cfg)?[n]
                        .epsilon;
                let err = (root - weber_spectra::series_half_line(n, b, 2)).abs();
                if b == 0.05 {
                    worst_at_005 = worst_at_005.max(err);
                }
                if b == 0.01 {
                    let measured = (root - weber_spectra::series_half_line(n, b, 1)) / (b * b);
                    let formula = weber_spectra::half_line_coefficients(n).eps2;
                    quad.push_str(&format!("n={n}: {measured:.5} vs recurrence {formula:.5}; "));
                }
                pts.push((b, err));
            }
            let s = oracle::log_log_slope(&pts);
            slopes.push(format!("{s:.3}"));
            worst_slope = worst_slope.max((s - 3.0).abs());
        }
        Ok(vec![
            Check::at_most("spectra: half-line series error at b=0.05, n<=3", worst_at_005, 5e-4),
            Check::at_most("spectra: half-line series error slope |s-3|", worst_slope, 0.3)
                .with_detail(format!("slopes {}", slopes.join(", "))),
            Check::report("spectra: measured quadratic coefficient at b=0.01", f64::NAN)
                .with_detail(quad.trim_end_matches("; ").to_string()),
        ])
    })
}

/// Box series against roots on `b ∈ [0.2, 1]` and its particle-in-a-box limit.
pub fn box_series(opts: &VerifyOptions) -> Vec<Check> {
    guard_many("spectra: box series", || {
        let cfg = EigenSolveConfig {
            execution: opts.execution,
            ..Default::default()
        };
        let mut worst = 0.0f64;
        for b in [0.2, 0.4, 0.6, 0.8, 1.0] {
            let levels = weber_spectra::solve_box(BarrierGeometry::symmetric_box(b), 4, &unit_oscillator(), &cfg)?;
            for l in &levels {
                let s = weber_spectra::series_box(l.n, b);
                worst = worst.max(((s - l.epsilon) / l.epsilon).abs());
            }
        }
        let b = 0.1;
        let mut limit = 0.0f64;
        for n in 0..4 {
            let leading = -PI * PI * ((n + 1) * (n + 1)) as f64 / (4.0 * b * b);
            limit = limit.max((weber_spectra::series_box(n, b) / leading - 1.0).abs());
        }
        Ok(vec![
            Check::at_most("spectra: box series relative error, b in [0.2,1], n<=3", worst, 1e-2),
            Check::at_most("spectra: box series vs particle-in-box limit at b=0.1", limit, 5e-3),
        ])
    })
}

/// A barrier far to the left (`b = −8`) leaves the oscillator spectrum.
pub fn oscillator_recovery(opts: &VerifyOptions) -> Check {
    let name = "spectra: half-line b=-8 recovers (n+1/2), n<=5";
    guard(name, || {
        let cfg = EigenSolveConfig {
            execution: opts.execution,
            ..Default::default()
        };
        let levels = weber_spectra::solve_half_line(BarrierGeometry::half_line(-8.0), 6, &unit_oscillator(), &cfg)?;
        let worst = levels
            .iter()
            .map(|l| (l.energy - (l.n as f64 + 0.5)).abs())
            .fold(0.0, f64::max);
        Ok(Check::at_most(name, worst, 1e-6))
    })
}

fn oracle_for_geometry(geom: BarrierGeometry, e_max: f64) -> (PotentialSpec, GridSpec) {
    // ħ = ω = 1, so x = z/√2
    let wall = geom.b * FRAC_1_SQRT_2;
    match geom.kind {
        BarrierKind::HalfLine => {
            let pot = PotentialSpec::harmonic_with_wall(1.0, 1.0, wall);
            let hi = oracle::truncation_point(&pot, wall.max(0.0), 0.01, e_max + 40.0);
            (pot, GridSpec::new(wall, hi))
        }
        BarrierKind::SymmetricBox => (
            PotentialSpec::harmonic(1.0, 1.0).with_singularities(&[-wall, wall]),
            GridSpec::new(-wall, wall),
        ),
    }
}

fn max_relative(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| ((x - y) / y).abs()).fold(0.0, f64::max)
}

/// Root-found energies against the finite-difference oracle.
pub fn spectra_oracle_agreement(opts: &VerifyOptions) -> Vec<Check> {
    let cases = [
        BarrierGeometry::half_line(0.0),
        BarrierGeometry::half_line(1.0),
        BarrierGeometry::half_line(2.0),
        BarrierGeometry::symmetric_box(0.5),
        BarrierGeometry::symmetric_box(1.0),
        BarrierGeometry::symmetric_box(2.0),
    ];
    let cfg = EigenSolveConfig {
        execution: opts.execution,
        ..Default::default()
    };
    cases
        .iter()
        .map(|&geom| {
            let kind = match geom.kind {
                BarrierKind::HalfLine => "half-line",
                BarrierKind::SymmetricBox => "box",
            };
            let name = format!("spectra: {kind} b={} vs oracle, n<=5", geom.b);
            guard(&name, || {
                let levels = weber_spectra::solve(geom, 6, &unit_oscillator(), &cfg)?;
                let ours: Vec<f64> = levels.iter().map(|l| l.energy).collect();
                let (pot, g) = oracle_for_geometry(geom, ours[5]);
                let theirs: Vec<f64> = oracle::dirichlet_eigen(&pot, &g, 6, opts.execution)?
                    .iter()
                    .map(|l| l.energy)
                    .collect();
                Ok(Check::at_most(&name, max_relative(&ours, &theirs), 1e-6))
            })
        })
        .collect()
}

/// Energy sweeps behind the figures, and ground-state profiles at `b = 1`.
pub fn figure_data(opts: &VerifyOptions) -> Vec<Check> {
    let cfg = EigenSolveConfig {
        execution: opts.execution,
        ..Default::default()
    };
    let p = unit_oscillator();
    let mut out = Vec::new();
    for (kind, from, to, steps, label) in [
        (
            BarrierKind::HalfLine,
            0.0,
            3.0,
            60,
            "half-line sweep b in [0,3]: levels not increasing",
        ),
        (
            BarrierKind::SymmetricBox,
            0.2,
            3.0,
            56,
            "box sweep b in [0.2,3]: levels not decreasing",
        ),
    ] {
        let name = format!("figures: {label}");
        out.push(guard(&name, || {
            let s = figures::energy_sweep(kind, from, to, steps, 11, &p, &cfg)?;
            let bad = s.non_monotone_levels();
            Ok(Check::at_most(&name, bad.len() as f64, 0.0).with_detail(format!("{} rows x 11 levels", s.b.len())))
        }));
    }
    for (geom, label) in [
        (BarrierGeometry::half_line(1.0), "half-line"),
        (BarrierGeometry::symmetric_box(1.0), "box"),
    ] {
        let name = format!("figures: {label} b=1 ground state edge value / peak");
        let samples = figures::wavefunction_samples(geom, 0, 401, 8.0, &p, &cfg);
        match samples {
            Ok(s) => {
                let peak = s.iter().fold(0.0f64, |m, &(_, v)| m.max(v.abs()));
                let edge = s[0].1.abs().max(if geom.kind == BarrierKind::SymmetricBox {
                    s[s.len() - 1].1.abs()
                } else {
                    0.0
                });
                out.push(Check::at_most(&name, edge / peak, 1e-8));
                out.push(Check::at_most(
                    &format!("figures: {label} b=1 ground state interior sign changes"),
                    figures::interior_sign_changes(&s, 1e-10) as f64,
                    0.0,
                ));
            }
            Err(e) => out.push(Check::errored(&name, &e)),
        }
    }
    out
}

/// The oracle on problems with exact answers, and its `h²` convergence.
pub fn oracle_self_test(opts: &VerifyOptions) -> Vec<Check> {
    guard_many("oracle: self-test", || {
        let ho = PotentialSpec::harmonic(1.0, 1.0);
        let g = GridSpec::new(-12.0, 12.0);
        let levels = oracle::dirichlet_eigen(&ho, &g, 3, opts.execution)?;
        let ho_err = levels
            .iter()
            .map(|l| (l.energy - (l.index as f64 + 0.5)).abs())
            .fold(0.0, f64::max);

        let len = 1.0;
        let free = PotentialSpec::free(1.0);
        let levels = oracle::dirichlet_eigen(&free, &GridSpec::new(0.0, len), 3, opts.execution)?;
        let box_err = levels
            .iter()
            .map(|l| {
                let exact = PI * PI * ((l.index + 1) * (l.index + 1)) as f64 / (2.0 * len * len);
                ((l.energy - exact) / exact).abs()
            })
            .fold(0.0, f64::max);

        let mut pts = Vec::new();
        for n in [1000, 2000, 4000] {
            let gs = GridSpec::new(-12.0, 12.0).with_points(n);
            let e = oracle::dirichlet_eigen_raw(&ho, &gs, n, 1, opts.execution)?[0];
            pts.push((gs.spacing(), (e - 0.5).abs()));
        }
        let slope = oracle::log_log_slope(&pts);
        Ok(vec![
            Check::at_most("oracle: harmonic oscillator levels n<=2", ho_err, 1e-7),
            Check::at_most("oracle: particle in a box relative, n<=2", box_err, 1e-7),
            Check::at_most("oracle: h^2 convergence |slope-2|", (slope - 2.0).abs(), 0.4)
                .with_detail(format!("slope {slope:.4}")),
        ])
    })
}

// ---------------------------------------------------------------------------
// Singular isotonic oscillator

fn region_oracle(params: &IsotonicParams, region: Region, e_max: f64, v: PotentialSpec) -> (PotentialSpec, GridSpec) {
    let a = params.a;
    match region {
        Region::R3 => (v, GridSpec::new(-a, a)),
        Region::R2 => {
            let hi = oracle::truncation_point(&v, a * 1.5, 0.01 * a, e_max + 40.0 * params.unit());
            (v, GridSpec::new(a, hi))
        }
        Region::R1 => {
            let lo = oracle::truncation_point(&v, -a * 1.5, -0.01 * a, e_max + 40.0 * params.unit());
            (v, GridSpec::new(lo, -a))
        }
    }
}

fn edge_exponent(state: &RegionState, edge: f64, inward: f64) -> Result<f64> {
    let a = state.params.a;
    let pts = (0..20)
        .map(|i| {
            let d = a * 1e-4 * 100f64.powf(i as f64 / 19.0);
            Ok((d, state.psi(edge + inward * d)?))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(oracle::log_log_slope(&pts))
}

/// Energies, boundary behaviour and orthogonality of the `A†`-built states
/// on R2 and R3 for `a = ħ = 1`, `n ≤ 5`.
pub fn isotonic_states(opts: &VerifyOptions) -> Vec<Check> {
    let params = IsotonicParams::default();
    let cfg = EigenSolveConfig {
        execution: opts.execution,
        ..Default::default()
    };
    let mut out = Vec::new();
    for region in [Region::R2, Region::R3] {
        let states = match susy::build_states(region, 6, &params, &cfg) {
            Ok(s) => s,
            Err(e) => {
                out.push(Check::errored(&format!("susy: {region} states"), &e));
                continue;
            }
        };
        let name = format!("susy: {region} energies vs direct oracle of V1, n<=5");
        out.push(guard(&name, || {
            let ours: Vec<f64> = states.iter().map(|s| s.energy).collect();
            let (pot, g) = region_oracle(&params, region, ours[5], PotentialSpec::isotonic(params.hbar, params.a));
            let theirs: Vec<f64> = oracle::dirichlet_eigen(&pot, &g, 6, opts.execution)?
                .iter()
                .map(|l| l.energy)
                .collect();
            Ok(Check::at_most(&name, max_relative(&ours, &theirs), 1e-6))
        }));

        let a = params.a;
        let edges: Vec<(f64, f64)> = match region {
            Region::R3 => vec![(-a, 1.0), (a, -1.0)],
            _ => vec![(a, 1.0)],
        };
        let name = format!("susy: {region} |psi| at 1e-6 a from barrier / peak");
        out.push(guard(&name, || {
            let mut w = 0.0f64;
            for s in &states {
                for &(edge, inward) in &edges {
                    w = w.max(s.psi(edge + inward * 1e-6 * a)?.abs() / s.max_abs);
                }
            }
            Ok(Check::at_most(&name, w, 1e-8))
        }));

        let name = format!("susy: {region} near-barrier exponent |p-2|");
        out.push(guard(&name, || {
            let mut w = 0.0f64;
            for s in &states {
                for &(edge, inward) in &edges {
                    w = w.max((edge_exponent(s, edge, inward)? - 2.0).abs());
                }
            }
            Ok(Check::at_most(&name, w, 0.05))
        }));

        let name = format!("susy: {region} orthogonality of normalized states");
        out.push(guard(&name, || {
            let pairs: Vec<(usize, usize)> = (0..states.len()).flat_map(|i| (0..i).map(move |j| (i, j))).collect();
            let overlaps = opts
                .execution
                .try_map(&pairs, |&(i, j)| susy::overlap(&states[i], &states[j]))?;
            Ok(Check::at_most(
                &name,
                overlaps.into_iter().map(f64::abs).fold(0.0, f64::max),
                1e-6,
            ))
        }));

        let name = format!("susy: {region} lowest energy (zero mode excluded)");
        out.push(Check::above(&name, states[0].energy, 0.0));
    }
    out
}

/// Same `ε` for every `a`, energies scaling as `ħ²/(2a²)`.
pub fn a_invariance(opts: &VerifyOptions) -> Vec<Check> {
    guard_many("susy: a-invariance", || {
        let cfg = EigenSolveConfig {
            execution: opts.execution,
            ..Default::default()
        };
        let mut eps_spread = 0.0f64;
        let mut scaling = 0.0f64;
        let mut barrier = 0.0f64;
        for region in [Region::R2, Region::R3] {
            let reference = susy::region_energies(region, 6, &IsotonicParams::default(), &cfg)?;
            for a in [0.5, 1.0, 2.0] {
                let p = IsotonicParams::new(1.0, a)?;
                barrier = barrier.max((p.partner_oscillator().z_of_x(a) - 1.0).abs());
                let levels = susy::region_energies(region, 6, &p, &cfg)?;
                for (&(e, en), &(e0, en0)) in levels.iter().zip(&reference) {
                    eps_spread = eps_spread.max((e - e0).abs());
                    scaling = scaling.max((en * 2.0 * a * a - en0 * 2.0).abs() / (en0 * 2.0));
                }
            }
        }
        Ok(vec![
            Check::at_most("susy: epsilon spread over a in {0.5,1,2}", eps_spread, cfg.root_tol),
            Check::at_most("susy: E*2a^2/hbar^2 spread over a", scaling, 1e-14),
            Check::at_most("susy: dimensionless barrier |b-1|", barrier, 1e-15),
        ])
    })
}

/// Intertwining and the zero mode.
pub fn susy_operators(_opts: &VerifyOptions) -> Vec<Check> {
    guard_many("susy: operators", || {
        let p = IsotonicParams::default();
        let a = p.a;
        let bump = move |x: f64| (-4.0 * (x - 2.0 * a) * (x - 2.0 * a) / (a * a)).exp();
        let gauss = move |x: f64| (-x * x / (4.0 * a * a)).exp();
        let mut w = 0.0f64;
        for (r, label) in [
            (susy::intertwining_residual(bump, 2.0 * a, &p)?, "bump"),
            (susy::intertwining_residual(gauss, 0.3 * a, &p)?, "gaussian in R3"),
            (susy::intertwining_residual(gauss, 2.5 * a, &p)?, "gaussian in R2"),
        ] {
            let _ = label;
            w = w.max(r.residual / r.scale);
        }
        let pole = susy::zero_mode(a * (1.0 + 1e-6), &p)?.abs();
        Ok(vec![
            Check::at_most("susy: intertwining residual / scale", w, 1e-5),
            Check::above("susy: |zero mode| at a(1+1e-6)", pole, 1e5),
        ])
    })
}

// ---------------------------------------------------------------------------
// Two-dimensional systems

fn axis_oracle(
    sys: &System2D,
    axis2: bool,
    region: Region,
    count: usize,
    e_max: f64,
    exec: Execution,
) -> Result<Vec<f64>> {
    let p = sys.params;
    let s = *sys;
    let isotonic = !axis2 || sys.kind == SystemKind::Hs4;
    let (pot, g) = if isotonic {
        let v = if axis2 {
            PotentialSpec::new(p.hbar, move |x| s.v_x2(x))
        } else {
            PotentialSpec::new(p.hbar, move |x| s.v_x1(x))
        }
        .with_singularities(&[-p.a, p.a]);
        region_oracle(&p, region, e_max, v)
    } else if sys.kind == SystemKind::Hs3 {
        let v = PotentialSpec::new(p.hbar, move |x| s.v_x2(x)).with_singularities(&[0.0]);
        let hi = oracle::truncation_point(&v, p.a, 0.01 * p.a, e_max + 40.0 * p.unit());
        (v, GridSpec::new(0.0, hi))
    } else {
        let v = PotentialSpec::new(p.hbar, move |x| s.v_x2(x));
        let hi = oracle::truncation_point(&v, 0.0, 0.01 * p.a, e_max + 40.0 * p.unit());
        (v, GridSpec::new(-hi, hi))
    };
    Ok(oracle::dirichlet_eigen(&pot, &g, count, exec)?
        .iter()
        .map(|l| l.energy)
        .collect())
}

fn chi_samples(kind: SystemKind, region2: Region, a: f64) -> Vec<f64> {
    let span = |lo: f64, hi: f64| -> Vec<f64> { (0..40).map(|i| lo + (hi - lo) * (i as f64 + 0.5) / 40.0).collect() };
    match kind {
        SystemKind::Hs1 => span(-5.0 * a, 5.0 * a),
        SystemKind::Hs2 => span(-3.0 * a, 3.0 * a),
        SystemKind::Hs3 => span(0.1 * a, 6.0 * a),
        SystemKind::Hs4 => match region2 {
            Region::R3 => span(-0.9 * a, 0.9 * a),
            Region::R1 => span(-7.0 * a, -1.1 * a),
            Region::R2 => span(1.1 * a, 7.0 * a),
        },
    }
}

/// Sums of 1D parts against tensor sums of 1D oracle spectra, the `χ`
/// residuals, Hs4 exchange symmetry and the closed-form totals.
pub fn spectra_2d(opts: &VerifyOptions) -> Vec<Check> {
    let params = IsotonicParams::default();
    let cfg = EigenSolveConfig {
        execution: opts.execution,
        ..Default::default()
    };
    let mut out = Vec::new();
    for kind in SystemKind::ALL {
        let sys = System2D::new(kind, params);
        for region in [Region::R2, Region::R3] {
            let name = format!("superint: {kind} {region} vs tensor-sum oracle, n,k<=3");
            out.push(guard(&name, || {
                let levels = superint2d::spectrum_2d(&sys, region, region, 3, 3, &cfg)?;
                let e1_max = levels.iter().map(|l| l.parts.0).fold(0.0, f64::max);
                let e2_max = levels.iter().map(|l| l.parts.1).fold(0.0, f64::max);
                let o1 = axis_oracle(&sys, false, region, 4, e1_max, opts.execution)?;
                let o2 = axis_oracle(&sys, true, region, 4, e2_max, opts.execution)?;
                let mut w = 0.0f64;
                let mut parts = 0.0f64;
                for l in &levels {
                    let o = o1[l.qn.n] + o2[l.qn.k];
                    w = w.max(((l.energy - o) / o).abs());
                    parts = parts.max((l.energy - (l.parts.0 + l.parts.1)).abs());
                }
                Ok(Check::at_most(&name, w, 1e-5).with_detail(format!("E - (Ex1 + Ex2) = {parts:e}")))
            }));
            if kind != SystemKind::Hs4 && region == Region::R3 {
                continue;
            }
            let name = format!(
                "superint: {kind} chi residual, k<=3{}",
                if kind == SystemKind::Hs4 {
                    format!(" ({region})")
                } else {
                    String::new()
                }
            );
            out.push(guard(&name, || {
                let s = sys;
                let pot = PotentialSpec::new(params.hbar, move |x| s.v_x2(x));
                let pot = match kind {
                    SystemKind::Hs3 => pot.with_singularities(&[0.0]),
                    SystemKind::Hs4 => pot.with_singularities(&[-params.a, params.a]),
                    _ => pot,
                };
                let levels = superint2d::spectrum_2d(&sys, region, region, 0, 3, &cfg)?;
                let samples = chi_samples(kind, region, params.a);
                let mut w = 0.0f64;
                for l in &levels {
                    let chi = superint2d::chi_factor(&sys, l.qn.k, region, &cfg)?;
                    let r = oracle::schrodinger_residual(
                        |x| chi.eval(x).unwrap_or(f64::NAN),
                        l.parts.1,
                        &pot,
                        &samples,
                        1e-3 * params.a,
                        0.0,
                    )?;
                    w = w.max(r);
                }
                Ok(Check::at_most(&name, w, 1e-6))
            }));
        }
    }

    let name = "superint: hs4 exchange symmetry E(n,k) - E(k,n)";
    out.push(guard(name, || {
        let sys = System2D::new(SystemKind::Hs4, params);
        let mut w = 0.0f64;
        for region in [Region::R2, Region::R3] {
            let levels = superint2d::spectrum_2d(&sys, region, region, 3, 3, &cfg)?;
            for l in &levels {
                let m = levels
                    .iter()
                    .find(|m| m.qn.n == l.qn.k && m.qn.k == l.qn.n)
                    .ok_or_else(|| Error::InvalidParameter("missing swapped level".into()))?;
                w = w.max((l.energy - m.energy).abs());
            }
        }
        Ok(Check::at_most(name, w, 0.0))
    }));

    let name = "superint: hs1 R2 smallest gap between distinct n at equal k";
    out.push(guard(name, || {
        let sys = System2D::new(SystemKind::Hs1, params);
        let levels = superint2d::spectrum_2d(&sys, Region::R2, Region::R2, 5, 5, &cfg)?;
        let mut gap = f64::INFINITY;
        for l in &levels {
            for m in &levels {
                if l.qn.k == m.qn.k && l.qn.n != m.qn.n {
                    gap = gap.min((l.energy - m.energy).abs());
                }
            }
        }
        Ok(Check::above(name, gap, 1e-7))
    }));

    let name = "superint: largest |computed - closed-form total|, n,k<=3";
    out.push(guard(name, || {
        let rows = superint2d::closed_form_report(&params, Region::R2, 3, 3, &cfg)?;
        let mut per = String::new();
        for kind in SystemKind::ALL {
            let w = rows
                .iter()
                .filter(|r| r.system == kind)
                .map(|r| (r.computed - r.closed_form).abs())
                .fold(0.0, f64::max);
            per.push_str(&format!("{kind} {w:.4}; "));
        }
        let w = rows
            .iter()
            .map(|r| (r.computed - r.closed_form).abs())
            .fold(0.0, f64::max);
        Ok(Check::report(name, w).with_detail(per.trim_end_matches("; ").to_string()))
    }));
    out
}

/// `Φ(N)`, the formal ladder against the physical spectrum, and the ladder
/// operators.
pub fn formal_algebra(opts: &VerifyOptions) -> Vec<Check> {
    guard_many("superint: formal algebra", || {
        let params = IsotonicParams::default();
        let cfg = EigenSolveConfig {
            execution: opts.execution,
            ..Default::default()
        };
        let mut phi = 0.0f64;
        for p in 0..=20 {
            let alg = superint2d::formal_algebra(p, &params);
            phi = phi.max(alg.phi[0].abs()).max(alg.phi[p + 1].abs());
        }
        let report = superint2d::formal_vs_physical_report(&params, 8, &cfg)?;
        let spacing = report
            .formal
            .windows(2)
            .map(|w| (w[1] - w[0] - report.formal_spacing).abs())
            .fold(0.0, f64::max);
        let ladder = superint2d::ladder_annihilator_check(&params, &cfg)?;
        Ok(vec![
            Check::at_most("superint: Phi(0) and Phi(p+1), p<=20", phi, 0.0),
            Check::at_most("superint: formal spacing - hbar^2/(2a^2)", spacing, 0.0),
            Check::above(
                "superint: physical R2 spacing ratio |max/min - 1|",
                (report.spacing_ratio - 1.0).abs(),
                1e-3,
            ),
            Check::at_most(
                "superint: formal_matches_physical flag",
                if report.formal_matches_physical { 1.0 } else { 0.0 },
                0.0,
            )
            .with_detail(format!("smallest formal/physical mismatch {:.4}", report.min_mismatch)),
            Check::at_most("superint: M_x2 on ground Gaussian", ladder.m_x2_residual, 1e-8),
            Check::at_most(
                "superint: M_x2^dagger Gaussian / (x Gaussian) spread",
                ladder.m_x2_dagger_spread,
                1e-8,
            ),
            Check::report("superint: M_x1 image edge exponent", ladder.m_x1_edge_exponent).with_detail(format!(
                "square integrable: {}; proportionality spread {:.3}",
                ladder.m_x1_image_square_integrable, ladder.m_x1_proportionality_spread
            )),
        ])
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn specfun_suite_passes_and_control_fails() {
        let opts = VerifyOptions::default();
        for c in [weber_residual(&opts), wronskian(&opts), parity(&opts)] {
            assert!(c.passed, "{c}");
        }
        let bad = VerifyOptions {
            drop_odd_factor: true,
            ..opts
        };
        assert!(!weber_residual(&bad).passed);
        assert!(!wronskian(&bad).passed);
    }

    #[test]
    fn check_display() {
        let c = Check::at_most("x", 1e-9, 1e-8);
        assert!(c.to_string().starts_with("PASS x"));
        assert!(Check::above("y", 0.0, 0.0).to_string().starts_with("FAIL"));
    }
}
