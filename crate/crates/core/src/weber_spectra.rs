//! Spectra of the harmonic oscillator constrained by infinite walls.
//!
//! In the variables `z = √(2ω/ħ) x`, `ε = −E/(ħω)` the Schrödinger equation is
//! the Weber equation. A wall at `z = b` (half-line `z ≥ b`) quantizes `ε`
//! through `U(ε, b) = 0`; a symmetric box `|z| ≤ b` through `y₁(ε, b) = 0`
//! (even levels) or `y₂(ε, b) = 0` (odd levels).
//!
//! Roots are bracketed by scanning `ε` downward and refined by bisection.
//! Every scan is checked against an oscillation count: the number of
//! eigenvalues above a trial `ε` equals the number of nodes of the matching
//! solution inside the domain, so a missed pair of roots is always detected.

use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::specfun::{self, Jet, PrecisionConfig, WeberArgs};
use std::f64::consts::{LN_2, PI};
use std::sync::OnceLock;

/// Smallest box half-width the root finder accepts.
pub const MIN_BOX_B: f64 = 0.05;
const SCAN_BLOCK: usize = 16;
const MAX_STEP_HALVINGS: usize = 4;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OscillatorParams {
    pub hbar: f64,
    pub omega: f64,
}

impl Default for OscillatorParams {
    fn default() -> Self {
        OscillatorParams { hbar: 1.0, omega: 1.0 }
    }
}

impl OscillatorParams {
    pub fn new(hbar: f64, omega: f64) -> Result<Self> {
        let p = OscillatorParams { hbar, omega };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if self.hbar > 0.0 && self.omega > 0.0 && self.hbar.is_finite() && self.omega.is_finite() {
            Ok(())
        } else {
            Err(Error::InvalidParameter(format!(
                "hbar = {}, omega = {} must be positive",
                self.hbar, self.omega
            )))
        }
    }

    /// Dimensionless coordinate of a physical position.
    pub fn z_of_x(&self, x: f64) -> f64 {
        (2.0 * self.omega / self.hbar).sqrt() * x
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BarrierKind {
    HalfLine,
    SymmetricBox,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BarrierGeometry {
    pub kind: BarrierKind,
    /// Wall position in `z`: domain `z ≥ b` or `|z| ≤ b`.
    pub b: f64,
}

impl BarrierGeometry {
    pub fn half_line(b: f64) -> Self {
        BarrierGeometry {
            kind: BarrierKind::HalfLine,
            b,
        }
    }

    pub fn symmetric_box(b: f64) -> Self {
        BarrierGeometry {
            kind: BarrierKind::SymmetricBox,
            b,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !self.b.is_finite() {
            return Err(Error::InvalidParameter(format!("barrier position {}", self.b)));
        }
        if self.kind == BarrierKind::SymmetricBox && self.b <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "box half-width must be positive, got {}",
                self.b
            )));
        }
        Ok(())
    }

    pub fn contains(&self, z: f64) -> bool {
        match self.kind {
            BarrierKind::HalfLine => z >= self.b,
            BarrierKind::SymmetricBox => z.abs() <= self.b,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Parity {
    Even,
    Odd,
    None,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EigenLevel {
    pub n: usize,
    pub epsilon: f64,
    pub energy: f64,
    pub parity: Parity,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EigenSolveConfig {
    /// Lower end of the `ε` search window; `None` picks a default from the
    /// geometry and the number of levels requested.
    pub eps_lo: Option<f64>,
    /// Upper end of the window, where the downward scan starts (default −0.4).
    pub eps_hi: Option<f64>,
    /// Bracketing step in `ε`; boxes narrower than 1 use `scan_step / b²`.
    pub scan_step: f64,
    pub root_tol: f64,
    pub max_bisect: usize,
    pub precision: PrecisionConfig,
    pub execution: Execution,
}

impl Default for EigenSolveConfig {
    fn default() -> Self {
        EigenSolveConfig {
            eps_lo: None,
            eps_hi: None,
            scan_step: 0.05,
            root_tol: 1e-11,
            max_bisect: 200,
            precision: PrecisionConfig::default(),
            execution: Execution::default(),
        }
    }
}

impl EigenSolveConfig {
    pub fn validate(&self) -> Result<()> {
        self.precision.validate()?;
        if let (Some(lo), Some(hi)) = (self.eps_lo, self.eps_hi) {
            if lo >= hi {
                return Err(Error::InvalidParameter(format!("eps window [{lo}, {hi}] is empty")));
            }
        }
        if !(self.scan_step > 0.0 && self.root_tol > 0.0 && self.max_bisect > 0) {
            return Err(Error::InvalidParameter(
                "scan_step, root_tol and max_bisect must be positive".into(),
            ));
        }
        Ok(())
    }

    /// Same configuration with bisection carried to full double precision.
    pub fn polished(&self) -> Self {
        EigenSolveConfig {
            root_tol: self.root_tol.min(1e-15),
            max_bisect: self.max_bisect.max(200),
            ..*self
        }
    }
}

/// `E = −ħω ε`.
pub fn energy_from_epsilon(epsilon: f64, params: &OscillatorParams) -> f64 {
    -params.hbar * params.omega * epsilon
}

// ---------------------------------------------------------------------------
// Bracketing

#[derive(Clone, Copy, Debug)]
enum Bracket {
    Exact(f64),
    Between { hi: f64, lo: f64, sign_hi: f64 },
}

struct Scan {
    brackets: Vec<Bracket>,
    /// A scan point strictly below every bracket, with a nonzero function value.
    below: f64,
}

fn scan<F>(f: &F, hi: f64, lo: f64, step: f64, want: usize, exec: Execution) -> Result<Scan>
where
    F: Fn(f64) -> Result<f64> + Sync,
{
    let mut brackets = Vec::new();
    if want == 0 {
        return Ok(Scan { brackets, below: hi });
    }
    let mut prev: Option<(f64, f64)> = None;
    let mut zero_since_prev = false;
    let mut k = 0usize;
    loop {
        // e_k = hi − k·step, not accumulated, so exact roots on the grid stay exact
        let block: Vec<f64> = (k..k + SCAN_BLOCK).map(|i| hi - i as f64 * step).collect();
        let values = exec.try_map(&block, |&e| if e < lo { Ok(f64::NAN) } else { f(e) })?;
        for (&e, &v) in block.iter().zip(&values) {
            if e < lo {
                let below = prev.map_or(hi, |(pe, _)| pe);
                return Ok(Scan { brackets, below });
            }
            if v == 0.0 {
                brackets.push(Bracket::Exact(e));
                zero_since_prev = true;
                continue;
            }
            if let Some((pe, pv)) = prev {
                if !zero_since_prev && pv.signum() != v.signum() {
                    brackets.push(Bracket::Between {
                        hi: pe,
                        lo: e,
                        sign_hi: pv.signum(),
                    });
                }
            }
            prev = Some((e, v));
            zero_since_prev = false;
            if brackets.len() >= want {
                return Ok(Scan { brackets, below: e });
            }
        }
        k += SCAN_BLOCK;
    }
}

fn bisect<F>(f: &F, bracket: Bracket, tol: f64, max_iter: usize) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    let (mut hi, mut lo, sign_hi) = match bracket {
        Bracket::Exact(e) => return Ok(e),
        Bracket::Between { hi, lo, sign_hi } => (hi, lo, sign_hi),
    };
    for _ in 0..max_iter {
        if hi - lo <= tol {
            break;
        }
        let mid = 0.5 * (hi + lo);
        if mid == hi || mid == lo {
            break;
        }
        let v = f(mid)?;
        if v == 0.0 {
            return Ok(mid);
        }
        if v.signum() == sign_hi {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(0.5 * (hi + lo))
}

fn sign_changes(values: &[f64]) -> usize {
    let mut count = 0;
    let mut last = 0.0f64;
    for &v in values {
        if v == 0.0 {
            continue;
        }
        if last != 0.0 && last.signum() != v.signum() {
            count += 1;
        }
        last = v;
    }
    count
}

fn node_step(epsilon: f64) -> f64 {
    (PI / (8.0 * (epsilon.abs() + 1.0).sqrt())).min(0.1)
}

/// Nodes of `U(ε, ·)` on `(b, ∞)`; the number of half-line levels above `ε`.
fn half_line_nodes(epsilon: f64, b: f64, cfg: &EigenSolveConfig) -> Result<usize> {
    let turning = 2.0 * (-epsilon).max(0.0).sqrt();
    let end = b.max(turning) + 1.0;
    let h = node_step(epsilon);
    let m = ((end - b) / h).ceil() as usize;
    let zs: Vec<f64> = (0..=m).map(|i| b + (end - b) * i as f64 / m as f64).collect();
    let values = cfg
        .execution
        .try_map(&zs, |&z| specfun::pcf_u(WeberArgs::new(epsilon, z), &cfg.precision))?;
    Ok(sign_changes(&values))
}

fn box_solution(parity: Parity, args: WeberArgs, prec: &PrecisionConfig) -> Result<Jet> {
    match parity {
        Parity::Odd => specfun::weber_y2_jet(args, prec),
        _ => specfun::weber_y1_jet(args, prec),
    }
}

/// Nodes of `y₁` (or `y₂`) on `(0, b]`; the number of even (odd) box levels above `ε`.
fn box_nodes(epsilon: f64, b: f64, parity: Parity, cfg: &EigenSolveConfig) -> Result<usize> {
    let h = node_step(epsilon).min(b / 50.0);
    let m = (b / h).ceil() as usize;
    let zs: Vec<f64> = (1..=m).map(|i| b * i as f64 / m as f64).collect();
    let values = cfg.execution.try_map(&zs, |&z| {
        Ok(box_solution(parity, WeberArgs::new(epsilon, z), &cfg.precision)?.value)
    })?;
    Ok(sign_changes(&values))
}

// ---------------------------------------------------------------------------
// Solvers

fn default_half_line_window(b: f64, count: usize) -> f64 {
    let c = count as f64;
    let bp = b.max(0.0);
    -(2.0 * c + 6.0) - 2.0 * c * bp - 0.25 * bp * bp
}

fn default_box_window(b: f64, count: usize) -> f64 {
    let c = count as f64;
    (1.5 * box_leading(count) / (b * b)).min(-(2.0 * c + 6.0))
}

fn roots_with_check<F, N>(
    f: &F,
    nodes: &N,
    hi: f64,
    lo: f64,
    step: f64,
    want: usize,
    cfg: &EigenSolveConfig,
) -> Result<Vec<f64>>
where
    F: Fn(f64) -> Result<f64> + Sync,
    N: Fn(f64) -> Result<usize>,
{
    let above_window = nodes(hi)?;
    let mut step = step;
    for _ in 0..=MAX_STEP_HALVINGS {
        let s = scan(f, hi, lo, step, want, cfg.execution)?;
        let expected = nodes(s.below)?.saturating_sub(above_window);
        if expected == s.brackets.len() {
            if expected < want {
                return Err(Error::WindowTooSmall {
                    found: expected,
                    wanted: want,
                    lo,
                    hi,
                });
            }
            let mut roots = cfg
                .execution
                .try_map(&s.brackets, |&br| bisect(f, br, cfg.root_tol, cfg.max_bisect))?;
            roots.truncate(want);
            return Ok(roots);
        }
        step *= 0.5;
    }
    Err(Error::BracketAmbiguity { step: 2.0 * step })
}

/// The `count` lowest levels on the half-line `z ≥ b`.
pub fn solve_half_line(
    geom: BarrierGeometry,
    count: usize,
    params: &OscillatorParams,
    cfg: &EigenSolveConfig,
) -> Result<Vec<EigenLevel>> {
    geom.validate()?;
    params.validate()?;
    cfg.validate()?;
    if geom.kind != BarrierKind::HalfLine {
        return Err(Error::InvalidParameter(
            "solve_half_line needs a half-line geometry".into(),
        ));
    }
    if count == 0 {
        return Err(Error::InvalidParameter("count must be at least 1".into()));
    }
    let b = geom.b;
    let hi = cfg.eps_hi.unwrap_or(-0.4);
    let lo = cfg.eps_lo.unwrap_or_else(|| default_half_line_window(b, count));
    let f = |e: f64| specfun::pcf_u(WeberArgs::new(e, b), &cfg.precision);
    let nodes = |e: f64| half_line_nodes(e, b, cfg);
    let roots = roots_with_check(&f, &nodes, hi, lo, cfg.scan_step, count, cfg)?;
    Ok(roots
        .into_iter()
        .enumerate()
        .map(|(n, epsilon)| EigenLevel {
            n,
            epsilon,
            energy: energy_from_epsilon(epsilon, params),
            parity: Parity::None,
        })
        .collect())
}

/// The `count` lowest levels in the box `|z| ≤ b`, alternating even and odd.
pub fn solve_box(
    geom: BarrierGeometry,
    count: usize,
    params: &OscillatorParams,
    cfg: &EigenSolveConfig,
) -> Result<Vec<EigenLevel>> {
    geom.validate()?;
    params.validate()?;
    cfg.validate()?;
    if geom.kind != BarrierKind::SymmetricBox {
        return Err(Error::InvalidParameter("solve_box needs a box geometry".into()));
    }
    if count == 0 {
        return Err(Error::InvalidParameter("count must be at least 1".into()));
    }
    let b = geom.b;
    if b < MIN_BOX_B {
        return Err(Error::DomainTooNarrow { b, min: MIN_BOX_B });
    }
    let hi = cfg.eps_hi.unwrap_or(-0.4);
    let lo = cfg.eps_lo.unwrap_or_else(|| default_box_window(b, count));
    let step = cfg.scan_step * (1.0 / (b * b)).max(1.0);

    let mut levels = Vec::with_capacity(count);
    for (parity, want) in [(Parity::Even, count.div_ceil(2)), (Parity::Odd, count / 2)] {
        let f = |e: f64| Ok(box_solution(parity, WeberArgs::new(e, b), &cfg.precision)?.value);
        let nodes = |e: f64| box_nodes(e, b, parity, cfg);
        for epsilon in roots_with_check(&f, &nodes, hi, lo, step, want, cfg)? {
            levels.push((epsilon, parity));
        }
    }
    levels.sort_by(|a, b| b.0.total_cmp(&a.0));
    let out: Vec<EigenLevel> = levels
        .into_iter()
        .enumerate()
        .map(|(n, (epsilon, parity))| EigenLevel {
            n,
            epsilon,
            energy: energy_from_epsilon(epsilon, params),
            parity,
        })
        .collect();
    let alternates = out.iter().all(|l| {
        let expect = if l.n % 2 == 0 { Parity::Even } else { Parity::Odd };
        l.parity == expect
    });
    if !alternates {
        return Err(Error::BracketAmbiguity { step });
    }
    Ok(out)
}

/// Dispatches on the geometry.
pub fn solve(
    geom: BarrierGeometry,
    count: usize,
    params: &OscillatorParams,
    cfg: &EigenSolveConfig,
) -> Result<Vec<EigenLevel>> {
    match geom.kind {
        BarrierKind::HalfLine => solve_half_line(geom, count, params, cfg),
        BarrierKind::SymmetricBox => solve_box(geom, count, params, cfg),
    }
}

/// Unnormalized eigenfunction with its `z`-derivatives; zero outside the domain.
pub fn eigenfunction_jet(level: &EigenLevel, geom: &BarrierGeometry, z: f64, prec: &PrecisionConfig) -> Result<Jet> {
    if !geom.contains(z) {
        return Ok(Jet {
            value: 0.0,
            d1: 0.0,
            d2: 0.0,
        });
    }
    let args = WeberArgs::new(level.epsilon, z);
    match geom.kind {
        BarrierKind::HalfLine => specfun::pcf_u_jet(args, prec),
        BarrierKind::SymmetricBox => box_solution(level.parity, args, prec),
    }
}

pub fn eigenfunction_at(level: &EigenLevel, geom: &BarrierGeometry, z: f64, prec: &PrecisionConfig) -> Result<f64> {
    Ok(eigenfunction_jet(level, geom, z, prec)?.value)
}

// ---------------------------------------------------------------------------
// Small-barrier expansions

/// Coefficients of `ε_n(b) = −1/2 + ε₀ + ε₁ b + ε₂ b² + …` on the half-line.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HalfLineCoefficients {
    pub eps0: f64,
    pub eps1: f64,
    pub eps2: f64,
}

const CACHED_LEVELS: usize = 128;

fn ln_factorial(n: usize) -> f64 {
    (2..=n).map(|k| (k as f64).ln()).sum()
}

fn half_line_table() -> &'static [HalfLineCoefficients] {
    static TABLE: OnceLock<Vec<HalfLineCoefficients>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut out = Vec::with_capacity(CACHED_LEVELS);
        let mut eps1 = -(2.0 / PI).sqrt();
        let mut eps2 = -2.0 / PI * (1.0 - LN_2);
        for n in 0..CACHED_LEVELS {
            out.push(HalfLineCoefficients {
                eps0: -(2.0 * n as f64 + 1.0),
                eps1,
                eps2,
            });
            let nf = n as f64;
            let growth = (2.0 * nf + 3.0) / (2.0 * nf + 2.0);
            // (2n+3)!(2n+2)! / (16π ((n+1)!)⁴ (n+1) 2^{4n})
            let ln_drive = ln_factorial(2 * n + 3) + ln_factorial(2 * n + 2)
                - 4.0 * ln_factorial(n + 1)
                - (nf + 1.0).ln()
                - 4.0 * nf * LN_2;
            eps1 *= growth;
            eps2 = growth * growth * eps2 + ln_drive.exp() / (16.0 * PI);
        }
        out
    })
}

pub fn half_line_coefficients(n: usize) -> HalfLineCoefficients {
    let table = half_line_table();
    if n < table.len() {
        return table[n];
    }
    let mut c = table[table.len() - 1];
    for m in table.len() - 1..n {
        let mf = m as f64;
        let growth = (2.0 * mf + 3.0) / (2.0 * mf + 2.0);
        let ln_drive = ln_factorial(2 * m + 3) + ln_factorial(2 * m + 2)
            - 4.0 * ln_factorial(m + 1)
            - (mf + 1.0).ln()
            - 4.0 * mf * LN_2;
        c = HalfLineCoefficients {
            eps0: -(2.0 * mf + 3.0),
            eps1: c.eps1 * growth,
            eps2: growth * growth * c.eps2 + ln_drive.exp() / (16.0 * PI),
        };
    }
    c
}

/// Truncated small-`b` expansion of the half-line level `n`, through `b^order`.
pub fn series_half_line(n: usize, b: f64, order: usize) -> f64 {
    let c = half_line_coefficients(n);
    let mut e = -0.5 + c.eps0;
    if order >= 1 {
        e += c.eps1 * b;
    }
    if order >= 2 {
        e += c.eps2 * b * b;
    }
    e
}

/// Coefficients of `ε_n(b) = ε₋₂/b² + ε₂ b² + ε₆ b⁶ + …` in the box.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoxCoefficients {
    pub eps_m2: f64,
    pub eps2: f64,
    pub eps6: f64,
}

fn box_leading(n: usize) -> f64 {
    let h = 0.5 * (n as f64 + 1.0);
    -h * h * PI * PI
}

pub fn box_coefficients(n: usize) -> BoxCoefficients {
    let m = box_leading(n);
    BoxCoefficients {
        eps_m2: m,
        eps2: -1.0 / 12.0 - 1.0 / (8.0 * m),
        eps6: 1.0 / (720.0 * m) + 5.0 / (192.0 * m * m) + 7.0 / (128.0 * m * m * m),
    }
}

pub fn series_box(n: usize, b: f64) -> f64 {
    let c = box_coefficients(n);
    let b2 = b * b;
    c.eps_m2 / b2 + c.eps2 * b2 + c.eps6 * b2 * b2 * b2
}
