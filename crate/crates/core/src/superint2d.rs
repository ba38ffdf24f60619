//! Spectra of the four separable 2D superintegrable Hamiltonians built on
//! the singular isotonic oscillator.
//!
//! Each Hamiltonian is `H_{x₁} + H_{x₂}` with
//! `H_{x₁} = P²/2 + ħ²x₁²/(8a⁴) + ħ²/(x₁−a)² + ħ²/(x₁+a)²`. That is `H₁` of
//! [`crate::susy`] without its `−3ħ²/(4a²)` constant, so the `x₁` energy of a
//! region state is its `H₁` energy plus `3ħ²/(4a²)`, i.e. `(ħ²/(2a²))(−ε − 1)`.
//! Totals are always sums of the two 1D parts.

use crate::error::{Error, Result};
use crate::specfun::{hermite, laguerre_3half};
use crate::susy::{self, IsotonicParams, Region, RegionState};
use crate::weber_spectra::EigenSolveConfig;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SystemKind {
    /// `x₂`: oscillator of frequency `ħ/(2a²)`.
    Hs1,
    /// `x₂`: oscillator of frequency `3ħ/(2a²)`.
    Hs2,
    /// `x₂`: oscillator plus `ħ²/x₂²`, confined to `x₂ > 0`.
    Hs3,
    /// `x₂`: a second singular isotonic oscillator.
    Hs4,
}

impl SystemKind {
    pub const ALL: [SystemKind; 4] = [SystemKind::Hs1, SystemKind::Hs2, SystemKind::Hs3, SystemKind::Hs4];

    /// Constant `c` in the closed-form total `(ħ²/(2a²))(ε + k + c)`.
    fn closed_form_offset(&self) -> f64 {
        match self {
            SystemKind::Hs1 => -2.0,
            SystemKind::Hs2 => -1.0,
            SystemKind::Hs3 => 0.0,
            SystemKind::Hs4 => -5.0,
        }
    }
}

impl std::fmt::Display for SystemKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            SystemKind::Hs1 => "hs1",
            SystemKind::Hs2 => "hs2",
            SystemKind::Hs3 => "hs3",
            SystemKind::Hs4 => "hs4",
        };
        f.write_str(s)
    }
}

impl std::str::FromStr for SystemKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "hs1" => Ok(SystemKind::Hs1),
            "hs2" => Ok(SystemKind::Hs2),
            "hs3" => Ok(SystemKind::Hs3),
            "hs4" => Ok(SystemKind::Hs4),
            other => Err(Error::InvalidParameter(format!("unknown system {other:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct System2D {
    pub kind: SystemKind,
    pub params: IsotonicParams,
}

impl System2D {
    pub fn new(kind: SystemKind, params: IsotonicParams) -> Self {
        System2D { kind, params }
    }

    /// `x₁` potential, shared by all four systems.
    pub fn v_x1(&self, x: f64) -> f64 {
        isotonic_axis(&self.params, x)
    }

    pub fn v_x2(&self, x: f64) -> f64 {
        let (h2, a) = (self.params.hbar * self.params.hbar, self.params.a);
        match self.kind {
            SystemKind::Hs1 => h2 * x * x / (8.0 * a.powi(4)),
            SystemKind::Hs2 => 9.0 * h2 * x * x / (8.0 * a.powi(4)),
            SystemKind::Hs3 => h2 * x * x / (8.0 * a.powi(4)) + h2 / (x * x),
            SystemKind::Hs4 => isotonic_axis(&self.params, x),
        }
    }
}

fn isotonic_axis(p: &IsotonicParams, x: f64) -> f64 {
    let (h2, a) = (p.hbar * p.hbar, p.a);
    h2 * x * x / (8.0 * a.powi(4)) + h2 / ((x - a) * (x - a)) + h2 / ((x + a) * (x + a))
}

/// `x₁` energy of a state with partner level `ε`.
pub fn axis_energy(epsilon: f64, params: &IsotonicParams) -> f64 {
    params.unit() * (-epsilon - 1.0)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct QuantumNumbers {
    pub region1: Region,
    pub n: usize,
    pub k: usize,
    /// Only meaningful for Hs4.
    pub region2: Region,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Level2D {
    pub qn: QuantumNumbers,
    pub energy: f64,
    /// `(E_x₁, E_x₂)`.
    pub parts: (f64, f64),
    pub epsilon1: f64,
    /// Partner `ε` of the `x₂` state for Hs4.
    pub epsilon2: Option<f64>,
}

/// `x₂` energies `k = 0..=k_max` with the partner `ε` where there is one.
fn x2_parts(
    system: &System2D,
    region2: Region,
    k_max: usize,
    cfg: &EigenSolveConfig,
) -> Result<Vec<(f64, Option<f64>)>> {
    let u = system.params.unit();
    Ok(match system.kind {
        SystemKind::Hs1 => (0..=k_max).map(|k| (u * (k as f64 + 0.5), None)).collect(),
        SystemKind::Hs2 => (0..=k_max).map(|k| (3.0 * u * (k as f64 + 0.5), None)).collect(),
        SystemKind::Hs3 => (0..=k_max).map(|k| (u * (2.0 * k as f64 + 2.5), None)).collect(),
        SystemKind::Hs4 => susy::region_energies(region2, k_max + 1, &system.params, cfg)?
            .into_iter()
            .map(|(eps, _)| (axis_energy(eps, &system.params), Some(eps)))
            .collect(),
    })
}

/// Levels with `n ≤ n_max`, `k ≤ k_max`, sorted by energy, ties by `(n, k)`.
pub fn spectrum_2d(
    system: &System2D,
    region1: Region,
    region2: Region,
    n_max: usize,
    k_max: usize,
    cfg: &EigenSolveConfig,
) -> Result<Vec<Level2D>> {
    system.params.validate()?;
    let x1 = susy::region_energies(region1, n_max + 1, &system.params, cfg)?;
    let x2 = x2_parts(system, region2, k_max, cfg)?;
    let mut levels = Vec::with_capacity(x1.len() * x2.len());
    for (n, &(eps1, _)) in x1.iter().enumerate() {
        let e1 = axis_energy(eps1, &system.params);
        for (k, &(e2, eps2)) in x2.iter().enumerate() {
            levels.push(Level2D {
                qn: QuantumNumbers { region1, n, k, region2 },
                energy: e1 + e2,
                parts: (e1, e2),
                epsilon1: eps1,
                epsilon2: eps2,
            });
        }
    }
    levels.sort_by(|p, q| {
        p.energy
            .total_cmp(&q.energy)
            .then((p.qn.n, p.qn.k).cmp(&(q.qn.n, q.qn.k)))
    });
    Ok(levels)
}

/// The closed-form total `(ħ²/(2a²))(ε' + k + c)` for a level, where
/// `ε' = −ε` is the partner level in the convention `E = (ħ²/(2a²))(ε' − 5/2)`.
/// Kept for comparison only; it does not match the sum of the 1D parts.
pub fn closed_form_total(system: &System2D, level: &Level2D) -> f64 {
    system.params.unit() * (-level.epsilon1 + level.qn.k as f64 + system.kind.closed_form_offset())
}

#[derive(Clone, Debug, PartialEq)]
pub struct ClosedFormRow {
    pub system: SystemKind,
    pub qn: QuantumNumbers,
    pub computed: f64,
    pub closed_form: f64,
}

/// Side-by-side listing of summed energies and the closed-form totals.
pub fn closed_form_report(
    params: &IsotonicParams,
    region: Region,
    n_max: usize,
    k_max: usize,
    cfg: &EigenSolveConfig,
) -> Result<Vec<ClosedFormRow>> {
    let mut rows = Vec::new();
    for kind in SystemKind::ALL {
        let system = System2D::new(kind, *params);
        let mut levels = spectrum_2d(&system, region, region, n_max, k_max, cfg)?;
        levels.sort_by_key(|l| (l.qn.n, l.qn.k));
        rows.extend(levels.iter().map(|l| ClosedFormRow {
            system: kind,
            qn: l.qn,
            computed: l.energy,
            closed_form: closed_form_total(&system, l),
        }));
    }
    Ok(rows)
}

/// Unnormalized `x₂` factor of a product state.
#[derive(Clone, Debug)]
pub enum ChiFactor {
    Hermite { k: usize, alpha: f64 },
    Radial { k: usize, a: f64 },
    Isotonic(Box<RegionState>),
}

impl ChiFactor {
    pub fn eval(&self, x2: f64) -> Result<f64> {
        Ok(match self {
            // e^{−α x²/2} H_k(√α x), α = mω/ħ
            ChiFactor::Hermite { k, alpha } => (-0.5 * alpha * x2 * x2).exp() * hermite(*k, alpha.sqrt() * x2),
            ChiFactor::Radial { k, a } => {
                let s = x2 * x2 / (2.0 * a * a);
                (-0.5 * s).exp() * x2 * x2 * laguerre_3half(*k, s)
            }
            ChiFactor::Isotonic(state) => state.psi(x2)?,
        })
    }
}

/// `χ_k(x₂)` for the system; Hs4 builds the `A†`-image on `region2`.
pub fn chi_factor(system: &System2D, k: usize, region2: Region, cfg: &EigenSolveConfig) -> Result<ChiFactor> {
    let a = system.params.a;
    Ok(match system.kind {
        SystemKind::Hs1 => ChiFactor::Hermite {
            k,
            alpha: 1.0 / (2.0 * a * a),
        },
        SystemKind::Hs2 => ChiFactor::Hermite {
            k,
            alpha: 3.0 / (2.0 * a * a),
        },
        SystemKind::Hs3 => ChiFactor::Radial { k, a },
        SystemKind::Hs4 => ChiFactor::Isotonic(Box::new(susy::build_state(region2, k, &system.params, cfg)?)),
    })
}

/// `Φ(x₁, x₂) = ψ_n(x₁) χ_k(x₂)`, unnormalized.
#[derive(Clone, Debug)]
pub struct ProductState {
    pub x1: RegionState,
    pub chi: ChiFactor,
}

impl ProductState {
    pub fn eval(&self, x1: f64, x2: f64) -> Result<f64> {
        Ok(self.x1.psi(x1)? * self.chi.eval(x2)?)
    }
}

pub fn product_state(system: &System2D, qn: &QuantumNumbers, cfg: &EigenSolveConfig) -> Result<ProductState> {
    Ok(ProductState {
        x1: susy::build_state(qn.region1, qn.n, &system.params, cfg)?,
        chi: chi_factor(system, qn.k, qn.region2, cfg)?,
    })
}

/// `Φ(N) = (ħ⁸/a⁴) N (p+1−N)(N+1)(N+3)`.
pub fn formal_phi(n: usize, p: usize, params: &IsotonicParams) -> f64 {
    let (nf, pf) = (n as f64, p as f64);
    params.hbar.powi(8) / params.a.powi(4) * nf * (pf + 1.0 - nf) * (nf + 1.0) * (nf + 3.0)
}

#[derive(Clone, Debug, PartialEq)]
pub struct FormalAlgebra {
    pub p: usize,
    /// `Φ(N)` for `N = 0..=p+1`.
    pub phi: Vec<f64>,
    pub formal_energy: f64,
}

pub fn formal_algebra(p: usize, params: &IsotonicParams) -> FormalAlgebra {
    FormalAlgebra {
        p,
        phi: (0..=p + 1).map(|n| formal_phi(n, p, params)).collect(),
        formal_energy: formal_energy(p, params),
    }
}

/// `ħ²(p+3)/(2a²)`.
pub fn formal_energy(p: usize, params: &IsotonicParams) -> f64 {
    params.unit() * (p as f64 + 3.0)
}

#[derive(Clone, Debug, PartialEq)]
pub struct FormalReport {
    pub formal: Vec<f64>,
    pub physical: Vec<f64>,
    pub formal_spacing: f64,
    /// `E(n+1, 0) − E(n, 0)` for Hs1 on R2.
    pub physical_spacings: Vec<f64>,
    /// max/min of `physical_spacings`.
    pub spacing_ratio: f64,
    /// Smallest `|E_formal − E_physical|` over all pairs.
    pub min_mismatch: f64,
    pub formal_matches_physical: bool,
}

/// Compares the formal ladder `ħ²(p+3)/(2a²)` with the Hs1 spectrum on R2.
pub fn formal_vs_physical_report(
    params: &IsotonicParams,
    p_max: usize,
    cfg: &EigenSolveConfig,
) -> Result<FormalReport> {
    let system = System2D::new(SystemKind::Hs1, *params);
    let formal: Vec<f64> = (0..=p_max).map(|p| formal_energy(p, params)).collect();
    let span = p_max.max(5);
    let levels = spectrum_2d(&system, Region::R2, Region::R2, span, span, cfg)?;
    let physical: Vec<f64> = levels.iter().take(p_max + 1).map(|l| l.energy).collect();
    let mut ground_k: Vec<&Level2D> = levels.iter().filter(|l| l.qn.k == 0).collect();
    ground_k.sort_by_key(|l| l.qn.n);
    let physical_spacings: Vec<f64> = ground_k.windows(2).take(5).map(|w| w[1].energy - w[0].energy).collect();
    let max = physical_spacings.iter().cloned().fold(f64::MIN, f64::max);
    let min = physical_spacings.iter().cloned().fold(f64::MAX, f64::min);
    let spacing_ratio = max / min;
    let mut min_mismatch = f64::INFINITY;
    for f in &formal {
        for l in &levels {
            min_mismatch = min_mismatch.min((f - l.energy).abs());
        }
    }
    let tol = 1e-8 * params.unit();
    let all_formal_present = formal
        .iter()
        .all(|f| levels.iter().any(|l| (f - l.energy).abs() <= tol * f.abs().max(1.0)));
    let equidistant = (spacing_ratio - 1.0).abs() <= 1e-3;
    Ok(FormalReport {
        formal_spacing: params.unit(),
        formal,
        physical,
        physical_spacings,
        spacing_ratio,
        min_mismatch,
        formal_matches_physical: all_formal_present && equidistant,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct LadderReport {
    /// `max |M_{x₂} G|` over `[−5a, 5a]`, `G = e^{−x₂²/(4a²)}`.
    pub m_x2_residual: f64,
    /// Spread of `M_{x₂}† G / (x₂ G)` around its mean, relative.
    pub m_x2_dagger_spread: f64,
    /// Fitted exponent of `|M_{x₁} ψ₀|` against `x₁ − a` near the barrier;
    /// negative means the image blows up.
    pub m_x1_edge_exponent: f64,
    /// Relative spread of `M_{x₁} ψ₁ / ψ₀` over interior points of R2.
    pub m_x1_proportionality_spread: f64,
    pub m_x1_image_square_integrable: bool,
}

fn stencil_d1<F: Fn(f64) -> f64>(f: &F, x: f64, h: f64) -> f64 {
    (f(x - 2.0 * h) - 8.0 * f(x - h) + 8.0 * f(x + h) - f(x + 2.0 * h)) / (12.0 * h)
}

/// Applies the ladder operators by finite differences. Only `M_{x₂}` is
/// expected to behave; the `M_{x₁}` numbers are diagnostics.
pub fn ladder_annihilator_check(params: &IsotonicParams, cfg: &EigenSolveConfig) -> Result<LadderReport> {
    params.validate()?;
    let (hbar, a) = (params.hbar, params.a);
    let a2 = a * a;
    let gauss = |x: f64| (-x * x / (4.0 * a2)).exp();
    let h = 1e-3 * a;
    let m_x2 = |x: f64| hbar / (2.0 * a2) * (x * gauss(x) + 2.0 * a2 * stencil_d1(&gauss, x, h));
    let m_x2_dag = |x: f64| hbar / (2.0 * a2) * (x * gauss(x) - 2.0 * a2 * stencil_d1(&gauss, x, h));
    let mut m_x2_residual = 0.0f64;
    let mut ratios = Vec::new();
    for i in 0..=1000 {
        let x = -5.0 * a + 10.0 * a * i as f64 / 1000.0;
        m_x2_residual = m_x2_residual.max(m_x2(x).abs());
        if x.abs() > 0.1 * a {
            ratios.push(m_x2_dag(x) / (x * gauss(x)));
        }
    }
    let mean = ratios.iter().sum::<f64>() / ratios.len() as f64;
    let m_x2_dagger_spread = ratios.iter().map(|r| (r - mean).abs()).fold(0.0, f64::max) / mean.abs();

    let states = susy::build_states(Region::R2, 2, params, cfg)?;
    let m_x1 = |state: &RegionState, x: f64| -> f64 {
        let psi = |y: f64| state.psi(y).unwrap_or(f64::NAN);
        let g = |y: f64| -y / (2.0 * a2) + 1.0 / (y - a) + 1.0 / (y + a);
        let inner = |y: f64| stencil_d1(&psi, y, 1e-3 * a) + g(y) * psi(y);
        let middle = |y: f64| y * inner(y) + 2.0 * a2 * stencil_d1(&inner, y, 3e-3 * a);
        hbar * hbar / (4.0 * a2) * (-stencil_d1(&middle, x, 1e-2 * a) + g(x) * middle(x))
    };
    let edge: Vec<(f64, f64)> = (0..12)
        .map(|i| {
            let d = 0.05 * a * (6.0f64).powf(i as f64 / 11.0);
            (d, m_x1(&states[0], a + d))
        })
        .collect();
    let m_x1_edge_exponent = crate::oracle::log_log_slope(&edge);
    let interior: Vec<f64> = (0..40)
        .map(|i| a * (1.5 + 4.0 * i as f64 / 39.0))
        .map(|x| m_x1(&states[1], x) / states[0].psi(x).unwrap_or(f64::NAN))
        .collect();
    let mean = interior.iter().sum::<f64>() / interior.len() as f64;
    let m_x1_proportionality_spread = interior.iter().map(|r| (r - mean).abs()).fold(0.0, f64::max) / mean.abs();
    if !(m_x1_edge_exponent.is_finite() && m_x1_proportionality_spread.is_finite()) {
        return Err(Error::SingularPoint { x: a });
    }
    Ok(LadderReport {
        m_x2_residual,
        m_x2_dagger_spread,
        m_x1_edge_exponent,
        m_x1_proportionality_spread,
        m_x1_image_square_integrable: m_x1_edge_exponent > -0.5,
    })
}
