//! Supersymmetric construction of the singular isotonic oscillator.
//!
//! The superpartner of `H₁ = A†A` is a shifted harmonic oscillator with
//! frequency `ω₂ = ħ/(2a²)`. Confining it by infinite barriers at the
//! singular points gives a constrained oscillator whose dimensionless barrier
//! is `b = √(2ω₂/ħ)·a = 1` for every `a`, so all root finding happens once, at
//! `b = 1`, and `a` only scales energies by `ħ²/(2a²)`.
//!
//! With the Weber convention `E_osc = −ħω ε` the physical energy of a state
//! built from partner level `ε` is `(ħ²/(2a²))(−ε − 5/2)`.
//!
//! At `b = 1` the partner ground state is `e^{−z²/4}(z² − 1)` with `ε = −5/2`
//! on both the half-line and the box. That is exactly the kernel of `A†`, so
//! it maps to zero and carries no `H₁` state: state `n` of `H₁` on a region
//! is the `A†`-image of partner level `n + 1`.

use std::cell::Cell;

use crate::error::{Error, Result};
use crate::oracle::quadrature;
use crate::specfun::PrecisionConfig;
use crate::weber_spectra::{self, BarrierGeometry, EigenLevel, EigenSolveConfig, OscillatorParams};

const POLE_GUARD: f64 = 1e-12;
/// States are truncated where `|ψ|` drops below this fraction of its peak.
pub const TAIL_FRACTION: f64 = 1e-12;
/// Furthest a half-line state is followed, in units of `a` beyond the barrier.
const MAX_TAIL: f64 = 40.0;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IsotonicParams {
    pub hbar: f64,
    /// Singular points sit at `±a`.
    pub a: f64,
}

impl Default for IsotonicParams {
    fn default() -> Self {
        IsotonicParams { hbar: 1.0, a: 1.0 }
    }
}

impl IsotonicParams {
    pub fn new(hbar: f64, a: f64) -> Result<Self> {
        let p = IsotonicParams { hbar, a };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.hbar > 0.0 && self.hbar.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "hbar must be positive, got {}",
                self.hbar
            )));
        }
        if !(self.a > 0.0 && self.a.is_finite()) {
            return Err(Error::InvalidParameter(format!("a must be positive, got {}", self.a)));
        }
        Ok(())
    }

    /// Partner oscillator frequency `ħ/(2a²)`.
    pub fn omega2(&self) -> f64 {
        self.hbar / (2.0 * self.a * self.a)
    }

    /// Energy unit `ħ²/(2a²)`.
    pub fn unit(&self) -> f64 {
        self.hbar * self.hbar / (2.0 * self.a * self.a)
    }

    pub fn partner_oscillator(&self) -> OscillatorParams {
        OscillatorParams {
            hbar: self.hbar,
            omega: self.omega2(),
        }
    }

    /// `V₁ = ħ²x²/(8a⁴) + ħ²/(x−a)² + ħ²/(x+a)² − 3ħ²/(4a²)`.
    pub fn v1(&self, x: f64) -> f64 {
        let (h2, a) = (self.hbar * self.hbar, self.a);
        h2 * x * x / (8.0 * a.powi(4)) + h2 / ((x - a) * (x - a)) + h2 / ((x + a) * (x + a)) - 0.75 * h2 / (a * a)
    }

    /// `V₂ = ħ²x²/(8a⁴) − 5ħ²/(4a²)`.
    pub fn v2(&self, x: f64) -> f64 {
        let (h2, a) = (self.hbar * self.hbar, self.a);
        h2 * x * x / (8.0 * a.powi(4)) - 1.25 * h2 / (a * a)
    }

    fn check_regular(&self, x: f64) -> Result<()> {
        if (x - self.a).abs() < POLE_GUARD * self.a || (x + self.a).abs() < POLE_GUARD * self.a {
            return Err(Error::SingularPoint { x });
        }
        Ok(())
    }

    /// `g` with `W = (ħ/√2) g`.
    fn g(&self, x: f64) -> f64 {
        let a = self.a;
        -x / (2.0 * a * a) + 1.0 / (x - a) + 1.0 / (x + a)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Region {
    /// `(−∞, −a]`
    R1,
    /// `[a, ∞)`
    R2,
    /// `[−a, a]`
    R3,
}

impl Region {
    pub const ALL: [Region; 3] = [Region::R1, Region::R2, Region::R3];

    pub fn bounds(&self, a: f64) -> (f64, f64) {
        match self {
            Region::R1 => (f64::NEG_INFINITY, -a),
            Region::R2 => (a, f64::INFINITY),
            Region::R3 => (-a, a),
        }
    }

    pub fn contains(&self, x: f64, a: f64) -> bool {
        let (lo, hi) = self.bounds(a);
        x >= lo && x <= hi
    }

    /// Barrier geometry of the modified superpartner, in `z = x/a`.
    pub fn partner_geometry(&self) -> BarrierGeometry {
        match self {
            Region::R1 | Region::R2 => BarrierGeometry::half_line(1.0),
            Region::R3 => BarrierGeometry::symmetric_box(1.0),
        }
    }
}

impl std::fmt::Display for Region {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Region::R1 => "R1",
            Region::R2 => "R2",
            Region::R3 => "R3",
        };
        f.write_str(s)
    }
}

impl std::str::FromStr for Region {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_uppercase().as_str() {
            "R1" => Ok(Region::R1),
            "R2" => Ok(Region::R2),
            "R3" => Ok(Region::R3),
            other => Err(Error::InvalidParameter(format!("unknown region {other:?}"))),
        }
    }
}

/// `W(x) = (ħ/√2)(−x/(2a²) + 1/(x−a) + 1/(x+a))`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Superpotential {
    pub params: IsotonicParams,
}

impl Superpotential {
    pub fn new(params: IsotonicParams) -> Self {
        Superpotential { params }
    }

    pub fn w(&self, x: f64) -> Result<f64> {
        self.params.check_regular(x)?;
        Ok(self.params.hbar / std::f64::consts::SQRT_2 * self.params.g(x))
    }
}

/// `A† f = (ħ/√2)(−f' + g f)`; `f` returns `(f(x), f'(x))`.
pub fn apply_a_dagger<F>(f: F, x: f64, params: &IsotonicParams) -> Result<f64>
where
    F: Fn(f64) -> (f64, f64),
{
    params.check_regular(x)?;
    let (v, d) = f(x);
    Ok(params.hbar / std::f64::consts::SQRT_2 * (-d + params.g(x) * v))
}

/// `A f = (ħ/√2)(f' + g f)`.
pub fn apply_a<F>(f: F, x: f64, params: &IsotonicParams) -> Result<f64>
where
    F: Fn(f64) -> (f64, f64),
{
    params.check_regular(x)?;
    let (v, d) = f(x);
    Ok(params.hbar / std::f64::consts::SQRT_2 * (d + params.g(x) * v))
}

/// Kernel of `A`: `e^{x²/(4a²)}/(x² − a²)`. It has poles at both barriers,
/// so it is never an admissible state.
pub fn zero_mode(x: f64, params: &IsotonicParams) -> Result<f64> {
    params.check_regular(x)?;
    let a2 = params.a * params.a;
    Ok((x * x / (4.0 * a2)).exp() / (x * x - a2))
}

/// Partner levels `ε_n(1)` on the half-line (R1, R2) or box (R3).
pub fn partner_levels(
    region: Region,
    count: usize,
    params: &IsotonicParams,
    cfg: &EigenSolveConfig,
) -> Result<Vec<EigenLevel>> {
    params.validate()?;
    weber_spectra::solve(region.partner_geometry(), count, &params.partner_oscillator(), cfg)
}

/// `(ħ²/(2a²))(−ε − 5/2)`.
pub fn energy_from_partner(epsilon: f64, params: &IsotonicParams) -> f64 {
    params.unit() * (-epsilon - 2.5)
}

/// An eigenstate of `H₁` on one region, kept unnormalized.
#[derive(Clone, Debug, PartialEq)]
pub struct RegionState {
    pub region: Region,
    pub n: usize,
    pub energy: f64,
    /// `ε` of the partner level this state is built from.
    pub epsilon: f64,
    pub partner: EigenLevel,
    pub params: IsotonicParams,
    pub precision: PrecisionConfig,
    /// L² norm of [`RegionState::psi`].
    pub norm: f64,
    pub max_abs: f64,
    /// Distance from the origin where R1/R2 states fall below
    /// `TAIL_FRACTION` of their peak; `a` for R3.
    pub tail: f64,
}

impl RegionState {
    /// `ψ(x) = A† y(x/a)`, zero outside the region and at the barriers.
    pub fn psi(&self, x: f64) -> Result<f64> {
        let a = self.params.a;
        if self.region == Region::R1 {
            return self.mirror_psi(-x);
        }
        if !self.region.contains(x, a) {
            return Ok(0.0);
        }
        if (x - a).abs() < POLE_GUARD * a || (x + a).abs() < POLE_GUARD * a {
            return Ok(0.0);
        }
        let geom = self.region.partner_geometry();
        let jet = weber_spectra::eigenfunction_jet(&self.partner, &geom, x / a, &self.precision)?;
        // d/dx = (1/a) d/dz
        apply_a_dagger(|_| (jet.value, jet.d1 / a), x, &self.params)
    }

    fn mirror_psi(&self, x: f64) -> Result<f64> {
        let r2 = RegionState {
            region: Region::R2,
            ..self.clone()
        };
        r2.psi(x)
    }

    pub fn normalized(&self, x: f64) -> Result<f64> {
        Ok(self.psi(x)? / self.norm)
    }

    /// Integration range carrying the state.
    pub fn support(&self) -> (f64, f64) {
        let a = self.params.a;
        match self.region {
            Region::R1 => (-self.tail, -a),
            Region::R2 => (a, self.tail),
            Region::R3 => (-a, a),
        }
    }
}

/// State `n` of `H₁` on `region`. Roots are polished to full precision
/// because `ψ` divides `y` by `x − a` near the barrier.
pub fn build_state(region: Region, n: usize, params: &IsotonicParams, cfg: &EigenSolveConfig) -> Result<RegionState> {
    let levels = partner_levels(region, n + 2, params, &cfg.polished())?;
    state_from_level(region, n, levels[n + 1], params, &cfg.precision)
}

/// The lowest `count` states of a region, sharing one eigenvalue solve.
pub fn build_states(
    region: Region,
    count: usize,
    params: &IsotonicParams,
    cfg: &EigenSolveConfig,
) -> Result<Vec<RegionState>> {
    if count == 0 {
        return Ok(Vec::new());
    }
    let levels = partner_levels(region, count + 1, params, &cfg.polished())?;
    let idx: Vec<usize> = (0..count).collect();
    cfg.execution.try_map(&idx, |&n| {
        state_from_level(region, n, levels[n + 1], params, &cfg.precision)
    })
}

/// Energies of the lowest `count` states, without building wavefunctions.
pub fn region_energies(
    region: Region,
    count: usize,
    params: &IsotonicParams,
    cfg: &EigenSolveConfig,
) -> Result<Vec<(f64, f64)>> {
    let levels = partner_levels(region, count + 1, params, cfg)?;
    Ok(levels[1..]
        .iter()
        .map(|l| (l.epsilon, energy_from_partner(l.epsilon, params)))
        .collect())
}

fn state_from_level(
    region: Region,
    n: usize,
    partner: EigenLevel,
    params: &IsotonicParams,
    precision: &PrecisionConfig,
) -> Result<RegionState> {
    params.validate()?;
    let a = params.a;
    let mut state = RegionState {
        region,
        n,
        energy: energy_from_partner(partner.epsilon, params),
        epsilon: partner.epsilon,
        partner,
        params: *params,
        precision: *precision,
        norm: 1.0,
        max_abs: 0.0,
        tail: a,
    };
    let r2 = RegionState {
        region: if region == Region::R1 { Region::R2 } else { region },
        ..state.clone()
    };

    // Peak and tail from a fine sample; the peak is refined by the quadrature grid below.
    let (lo, hi) = match r2.region {
        Region::R3 => (-a, a),
        _ => (a, a * (1.0 + MAX_TAIL)),
    };
    let samples = 4000;
    let step = (hi - lo) / samples as f64;
    let mut values = Vec::with_capacity(samples + 1);
    for i in 0..=samples {
        let x = lo + i as f64 * step;
        values.push((x, r2.psi(x)?));
    }
    let max_abs = values.iter().fold(0.0f64, |m, &(_, v)| m.max(v.abs()));
    if !(max_abs > 0.0 && max_abs.is_finite()) {
        return Err(Error::NormalizationFailure(format!(
            "state {n} in {region} has peak {max_abs}"
        )));
    }
    let tail = if r2.region == Region::R3 {
        a
    } else {
        let last = values
            .iter()
            .rposition(|&(_, v)| v.abs() >= TAIL_FRACTION * max_abs)
            .unwrap_or(0);
        if last >= samples {
            return Err(Error::NormalizationFailure(format!(
                "state {n} in {region} has not decayed by x = {hi}"
            )));
        }
        values[last + 1].0
    };
    let support_hi = if r2.region == Region::R3 { a } else { tail };

    let failure = Cell::new(None);
    let integrand = |x: f64| match r2.psi(x) {
        Ok(v) => v * v,
        Err(e) => {
            failure.set(Some(e));
            0.0
        }
    };
    let tol = 1e-14 * max_abs * max_abs * (support_hi - lo);
    let norm2 = quadrature(integrand, lo, support_hi, tol).map_err(|e| Error::NormalizationFailure(e.to_string()))?;
    if let Some(e) = failure.take() {
        return Err(e);
    }
    if !(norm2 > 0.0 && norm2.is_finite()) {
        return Err(Error::NormalizationFailure(format!("norm² = {norm2}")));
    }
    state.norm = norm2.sqrt();
    state.max_abs = max_abs;
    state.tail = if r2.region == Region::R3 { a } else { tail };
    Ok(state)
}

/// Overlap `⟨ψ_i|ψ_j⟩` of two normalized states of the same region.
pub fn overlap(first: &RegionState, second: &RegionState) -> Result<f64> {
    if first.region != second.region || first.params != second.params {
        return Err(Error::InvalidParameter("overlap needs states of one region".into()));
    }
    let (lo, hi) = {
        let (l1, h1) = first.support();
        let (l2, h2) = second.support();
        (l1.min(l2), h1.max(h2))
    };
    let failure = Cell::new(None);
    let integrand = |x: f64| match (first.normalized(x), second.normalized(x)) {
        (Ok(p), Ok(q)) => p * q,
        (Err(e), _) | (_, Err(e)) => {
            failure.set(Some(e));
            0.0
        }
    };
    let scale = first.max_abs * second.max_abs / (first.norm * second.norm);
    let value = quadrature(integrand, lo, hi, 1e-13 * scale * (hi - lo))?;
    if let Some(e) = failure.take() {
        return Err(e);
    }
    Ok(value)
}

/// Size of `(H₁A† − A†H₂)f` at a point, next to the size of its terms.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IntertwiningResidual {
    pub residual: f64,
    pub scale: f64,
}

fn d1<F: Fn(f64) -> f64>(f: &F, x: f64, h: f64) -> f64 {
    (f(x - 2.0 * h) - 8.0 * f(x - h) + 8.0 * f(x + h) - f(x + 2.0 * h)) / (12.0 * h)
}

fn d2<F: Fn(f64) -> f64>(f: &F, x: f64, h: f64) -> f64 {
    (-f(x + 2.0 * h) + 16.0 * f(x + h) - 30.0 * f(x) + 16.0 * f(x - h) - f(x - 2.0 * h)) / (12.0 * h * h)
}

/// `(H₁(A†f) − A†(H₂f))(x)` with every derivative taken by 5-point stencils.
///
/// The operators nest, so the stencils do too. A single tiny step would let
/// round-off grow like `ε/h³`; the inner step is `10⁻³a` and the outer
/// `10⁻²a`, which keeps both truncation and round-off near `10⁻⁹`.
pub fn intertwining_residual<F>(f: F, x: f64, params: &IsotonicParams) -> Result<IntertwiningResidual>
where
    F: Fn(f64) -> f64,
{
    params.validate()?;
    let a = params.a;
    if (x - a).abs() < 0.1 * a || (x + a).abs() < 0.1 * a {
        return Err(Error::SingularPoint { x });
    }
    let (h_in, h_out) = (1e-3 * a, 1e-2 * a);
    let c = params.hbar / std::f64::consts::SQRT_2;
    let k = 0.5 * params.hbar * params.hbar;

    let a_dag_f = |y: f64| c * (-d1(&f, y, h_in) + params.g(y) * f(y));
    let kinetic1 = -k * d2(&a_dag_f, x, h_out);
    let potential1 = params.v1(x) * a_dag_f(x);

    let h2_f = |y: f64| -k * d2(&f, y, h_in) + params.v2(y) * f(y);
    let deriv2 = -c * d1(&h2_f, x, h_out);
    let mult2 = c * params.g(x) * h2_f(x);

    let residual = (kinetic1 + potential1 - deriv2 - mult2).abs();
    let scale = kinetic1.abs() + potential1.abs() + deriv2.abs() + mult2.abs();
    Ok(IntertwiningResidual { residual, scale })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit() -> IsotonicParams {
        IsotonicParams::default()
    }

    #[test]
    fn superpotential_is_odd() {
        let w = Superpotential::new(IsotonicParams::new(1.3, 0.7).unwrap());
        for &x in &[0.1, 0.5, 1.1, 3.0] {
            assert!((w.w(x).unwrap() + w.w(-x).unwrap()).abs() < 1e-13);
        }
        assert!(matches!(w.w(0.7), Err(Error::SingularPoint { .. })));
    }

    #[test]
    fn kernels() {
        let p = IsotonicParams::new(1.0, 1.5).unwrap();
        let a2 = p.a * p.a;
        let f = |x: f64| {
            let e = (-x * x / (4.0 * a2)).exp();
            (e * (x * x - a2), e * (2.0 * x - x * (x * x - a2) / (2.0 * a2)))
        };
        for i in 0..100 {
            let x = -6.0 + 12.0 * (i as f64 + 0.5) / 100.0;
            if p.check_regular(x).is_err() {
                continue;
            }
            let scale = f(x).0.abs() + f(x).1.abs();
            assert!(apply_a_dagger(f, x, &p).unwrap().abs() <= 1e-13 * scale.max(1e-300));
        }
        assert!((zero_mode(0.0, &p).unwrap() + 1.0 / a2).abs() < 1e-15);
        assert!(zero_mode(p.a * (1.0 + 1e-6), &p).unwrap().abs() > 1e5);
    }

    #[test]
    fn first_states_match_known_energies() {
        // Cross-checked against a direct finite-difference solve of V₁.
        let cfg = EigenSolveConfig::default();
        let close = |got: f64, want: f64| (got - want).abs() <= 1e-8 * want;
        let r2 = region_energies(Region::R2, 2, &unit(), &cfg).unwrap();
        assert!(close(r2[0].1, 1.2005658007) && close(r2[1].1, 2.3502408829));
        let r3 = region_energies(Region::R3, 2, &unit(), &cfg).unwrap();
        assert!(close(r3[0].1, 3.7201014534) && close(r3[1].1, 9.8921644017));
    }

    #[test]
    fn partner_ground_state_is_annihilated() {
        let levels = partner_levels(Region::R2, 1, &unit(), &EigenSolveConfig::default()).unwrap();
        assert!((levels[0].epsilon + 2.5).abs() < 1e-10);
        let levels = partner_levels(Region::R3, 1, &unit(), &EigenSolveConfig::default()).unwrap();
        assert!((levels[0].epsilon + 2.5).abs() < 1e-10);
    }

    #[test]
    fn states_vanish_at_barriers_and_mirror() {
        let cfg = EigenSolveConfig::default();
        let s = build_state(Region::R2, 0, &unit(), &cfg).unwrap();
        assert!(s.psi(1.0 + 1e-6).unwrap().abs() <= 1e-8 * s.max_abs);
        assert_eq!(s.psi(0.5).unwrap(), 0.0);
        let m = build_state(Region::R1, 0, &unit(), &cfg).unwrap();
        assert_eq!(m.energy, s.energy);
        assert_eq!(m.psi(-2.3).unwrap(), s.psi(2.3).unwrap());
        let b = build_state(Region::R3, 1, &unit(), &cfg).unwrap();
        for x in [-1.0 + 1e-6, 1.0 - 1e-6] {
            assert!(b.psi(x).unwrap().abs() <= 1e-8 * b.max_abs);
        }
    }

    #[test]
    fn intertwining_holds_away_from_poles() {
        let p = unit();
        let bump = |x: f64| (-4.0 * (x - 2.0) * (x - 2.0)).exp();
        let r = intertwining_residual(bump, 2.0, &p).unwrap();
        assert!(r.residual <= 1e-5 * r.scale, "{r:?}");
        let r = intertwining_residual(|x: f64| (-x * x / 4.0).exp(), 0.3, &p).unwrap();
        assert!(r.residual <= 1e-5 * r.scale, "{r:?}");
        let r = intertwining_residual(|_| 0.0, 2.0, &p).unwrap();
        assert_eq!(r.residual, 0.0);
        assert!(intertwining_residual(bump, 1.05, &p).is_err());
    }
}
