//! Special functions behind the Weber equation `y'' = (z²/4 + ε) y`.
//!
//! The confluent hypergeometric series are summed in double-double
//! arithmetic. The parabolic cylinder function `U(ε, z)` is a difference of
//! two solutions that both grow like `e^{z²/4}`, so for moderate `z` the
//! cancellation eats most of a plain `f64` significand; the extra bits make
//! the combination usable up to the switch to the asymptotic expansion.

use crate::dd::Dd;
use crate::error::{Error, Result};
use std::f64::consts::{LN_2, PI, SQRT_2};

/// Relative truncation tolerance for the extended-precision Weber series.
const EXTENDED_TOL: f64 = 1e-32;
/// Largest `z²/2` for which the combination branch of `U` is attempted.
const COMBINATION_LIMIT: f64 = 200.0;
/// Accuracy accepted from whichever branch of `U` does best when neither
/// reaches `series_tol`.
const LOOSE_TOL: f64 = 1e-10;
const SQRT_PI: f64 = 1.772_453_850_905_516;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PrecisionConfig {
    /// Relative truncation tolerance of plain series and of the asymptotic expansion.
    pub series_tol: f64,
    /// Cap on the number of series terms.
    pub max_terms: usize,
    /// `|z|` beyond which `U` is evaluated from its asymptotic expansion.
    pub asymptotic_switch_z: f64,
    /// Half-width of the guard band around removable Gamma-function poles.
    pub pole_guard_delta: f64,
}

impl Default for PrecisionConfig {
    fn default() -> Self {
        PrecisionConfig {
            series_tol: 1e-14,
            max_terms: 500,
            asymptotic_switch_z: 8.0,
            pole_guard_delta: 1e-8,
        }
    }
}

impl PrecisionConfig {
    pub fn validate(&self) -> Result<()> {
        let ok = self.series_tol > 0.0
            && self.series_tol < 1e-8
            && self.max_terms >= 50
            && self.asymptotic_switch_z > 0.0
            && self.pole_guard_delta > 0.0;
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidParameter(format!("precision config {self:?}")))
        }
    }
}

/// Spectral parameter `ε` and dimensionless coordinate `z` of the Weber equation.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WeberArgs {
    pub epsilon: f64,
    pub z: f64,
}

impl WeberArgs {
    pub fn new(epsilon: f64, z: f64) -> Self {
        WeberArgs { epsilon, z }
    }
}

/// Value with first and second derivative in `z`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Jet {
    pub value: f64,
    pub d1: f64,
    pub d2: f64,
}

// ---------------------------------------------------------------------------
// Gamma function and friends

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

fn lanczos_gamma(x: f64) -> f64 {
    // valid for x >= 0.5
    let x = x - 1.0;
    let mut a = LANCZOS[0];
    for (i, c) in LANCZOS.iter().enumerate().skip(1) {
        a += c / (x + i as f64);
    }
    let t = x + LANCZOS_G + 0.5;
    (2.0 * PI).sqrt() * t.powf(x + 0.5) * (-t).exp() * a
}

/// `sin(πx)` with exact zeros at the integers.
pub(crate) fn sin_pi(x: f64) -> f64 {
    let r = x - 2.0 * (x / 2.0).round();
    if r == 0.0 || r.abs() == 1.0 {
        return 0.0;
    }
    if r > 0.5 {
        (PI * (1.0 - r)).sin()
    } else if r < -0.5 {
        -(PI * (1.0 + r)).sin()
    } else {
        (PI * r).sin()
    }
}

pub(crate) fn cos_pi(x: f64) -> f64 {
    sin_pi(x + 0.5)
}

fn is_nonpositive_integer(x: f64) -> bool {
    x <= 0.0 && x == x.round()
}

/// Gamma function; Lanczos approximation with reflection below 1/2.
pub fn gammafn(x: f64) -> Result<f64> {
    if is_nonpositive_integer(x) {
        return Err(Error::Pole(format!("Gamma({x})")));
    }
    if x >= 0.5 {
        Ok(lanczos_gamma(x))
    } else {
        Ok(PI / (sin_pi(x) * lanczos_gamma(1.0 - x)))
    }
}

/// `1/Γ(x)`, entire, with exact zeros at the non-positive integers.
pub(crate) fn reciprocal_gamma(x: f64) -> f64 {
    if x >= 0.5 {
        1.0 / lanczos_gamma(x)
    } else {
        sin_pi(x) * lanczos_gamma(1.0 - x) / PI
    }
}

/// Coefficients of `Γ(y + 1/2) / (Γ(y) √y) ~ Σ c_k y^{-k}` as double-doubles.
const GAMMA_RATIO_COEFFS: [(f64, f64); 21] = [
    (1.0, 0.0),
    (-0.125, 0.0),
    (0.0078125, 0.0),
    (0.0048828125, 0.0),
    (-0.000640869140625, 0.0),
    (-0.001522064208984375, 0.0),
    (0.0002071857452392578, 0.0),
    (0.0011719763278961182, 0.0),
    (-0.0001557529903948307, 0.0),
    (-0.0016715728561393917, 0.0),
    (0.00021717708659707569, 0.0),
    (0.003820047111275926, 0.0),
    (-0.0004892696652092354, 0.0),
    (-0.012788446944957954, 0.0),
    (0.0016244333185305715, 0.0),
    (0.058997348216001735, 0.0),
    (-0.007457947085025542, 3.2526065174565133e-19),
    (-0.35881637534911764, 2.4028630647709992e-17),
    (0.04522490028451912, 3.7523559563365505e-19),
    (2.7820135269548745, 5.324353815233966e-17),
    (-0.3499734303976103, -5.415170967302898e-18),
];

/// `Γ(x + 1/2) / Γ(x)` in double-double precision.
///
/// Returns `None` when `x + 1/2` is a non-positive integer (the ratio is
/// infinite); returns zero when `x` itself is.
pub(crate) fn gamma_half_ratio(x: Dd) -> Option<Dd> {
    let mut ratio = Dd::ONE;
    let mut y = x;
    while y.hi < 60.0 {
        let den = y + 0.5;
        if den.is_zero() {
            return None;
        }
        ratio = ratio * (y / den);
        y = y + 1.0;
    }
    let inv = Dd::ONE / y;
    let mut acc = Dd::ZERO;
    for &(hi, lo) in GAMMA_RATIO_COEFFS.iter().rev() {
        acc = acc * inv + Dd::new(hi, lo);
    }
    Some(y.sqrt() * acc * ratio)
}

// ---------------------------------------------------------------------------
// Orthogonal polynomials

/// Physicists' Hermite polynomial `H_n(z)`.
pub fn hermite(n: usize, z: f64) -> f64 {
    let mut prev = 1.0;
    if n == 0 {
        return prev;
    }
    let mut cur = 2.0 * z;
    for k in 1..n {
        let next = 2.0 * z * cur - 2.0 * k as f64 * prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// Generalized Laguerre polynomial `L_k^{(α)}(z)`.
pub fn laguerre(k: usize, alpha: f64, z: f64) -> f64 {
    let mut prev = 1.0;
    if k == 0 {
        return prev;
    }
    let mut cur = 1.0 + alpha - z;
    for j in 1..k {
        let jf = j as f64;
        let next = ((2.0 * jf + 1.0 + alpha - z) * cur - (jf + alpha) * prev) / (jf + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

pub fn laguerre_3half(k: usize, z: f64) -> f64 {
    laguerre(k, 1.5, z)
}

// ---------------------------------------------------------------------------
// Confluent hypergeometric series

fn check_beta(beta: f64) -> Result<()> {
    if beta <= 0.0 && (beta - beta.round()).abs() < 1e-12 {
        Err(Error::Pole(format!("1F1 with beta = {beta}")))
    } else {
        Ok(())
    }
}

/// Kummer's function `₁F₁(α; β; z)`.
///
/// Summed in double-double; for `z < -30` the Kummer transformation
/// `e^z ₁F₁(β-α; β; -z)` is applied first.
pub fn kummer_1f1(alpha: f64, beta: f64, z: f64, cfg: &PrecisionConfig) -> Result<f64> {
    check_beta(beta)?;
    if z < -30.0 {
        return Ok(z.exp() * kummer_1f1(beta - alpha, beta, -z, cfg)?);
    }
    let zd = Dd::from_f64(z);
    let mut term = Dd::ONE;
    let mut sum = Dd::ONE;
    for k in 0..cfg.max_terms {
        let kf = k as f64;
        term = term * zd * (Dd::from_f64(alpha) + kf) / ((Dd::from_f64(beta) + kf) * (kf + 1.0));
        sum = sum + term;
        if term.is_zero() && alpha + kf <= 0.0 {
            return Ok(sum.to_f64());
        }
        let settled = alpha + kf + 1.0 > 0.0 && beta + kf + 1.0 > 0.0;
        let ratio = ((alpha + kf + 1.0) / ((beta + kf + 1.0) * (kf + 2.0)) * z).abs();
        if settled && ratio < 1.0 && term.abs().hi <= cfg.series_tol * 1e-3 * sum.abs().hi {
            return Ok(sum.to_f64());
        }
    }
    Err(Error::NonConvergence {
        terms: cfg.max_terms,
        context: format!("1F1({alpha}; {beta}; {z})"),
    })
}

/// `S(z) = Σ_k T_k z^{2k+s}` with `T_k = (α)_k / ((s+1/2)_k k! 2^k)`, plus its
/// first two derivatives, so that the Weber solutions are `e^{-z²/4} S(z)`.
#[derive(Clone, Copy, Debug)]
struct SeriesJet {
    s: Dd,
    d1: Dd,
    d2: Dd,
}

fn weber_series(alpha: Dd, odd: bool, z: f64, cfg: &PrecisionConfig) -> Result<SeriesJet> {
    let sp = if odd { 1.0 } else { 0.0 };
    let beta = sp + 0.5;
    let zd = Dd::from_f64(z);
    let z2 = Dd::prod(z, z);

    let (mut s, mut d1, mut d2) = if odd {
        (zd, Dd::ONE, Dd::ZERO)
    } else {
        (Dd::ONE, Dd::ZERO, Dd::ZERO)
    };
    let zs = if odd { zd } else { Dd::ONE };
    // q = T_k z^{2k-2}; kept as one running product so that neither factor
    // under- or overflows on its own
    let mut q = alpha / (beta * 2.0);

    for k in 1..cfg.max_terms {
        let kf = k as f64;
        let e = 2.0 * kf + sp;
        let base = q * zs;
        let tv = base * z2;
        let t1 = base * zd * e;
        let t2 = base * (e * (e - 1.0));
        s = s + tv;
        d1 = d1 + t1;
        d2 = d2 + t2;

        let a_next = alpha.to_f64() + kf;
        if q.is_zero() && a_next <= 1.0 {
            return Ok(SeriesJet { s, d1, d2 });
        }
        let ratio = (a_next / ((beta + kf) * 2.0 * (kf + 1.0))).abs() * z * z;
        let small = |term: Dd, total: Dd| term.abs().hi <= EXTENDED_TOL * total.abs().hi;
        if a_next > 0.0 && ratio < 0.5 && small(tv, s) && small(t1, d1) && small(t2, d2) {
            return Ok(SeriesJet { s, d1, d2 });
        }
        q = q * (alpha + kf) / ((beta + kf) * (2.0 * (kf + 1.0))) * z2;
    }
    Err(Error::NonConvergence {
        terms: cfg.max_terms,
        context: format!("Weber series alpha={} odd={odd} z={z}", alpha.to_f64()),
    })
}

/// Multiplies a series jet by `e^{-z²/4}` and differentiates the product.
fn gaussian_jet(c: SeriesJet, z: f64, prefactor: f64) -> Jet {
    let g = prefactor * (-0.25 * z * z).exp();
    let half_z = 0.5 * z;
    let d1 = c.d1 - c.s * half_z;
    let d2 = c.d2 - c.d1 * z + c.s * (0.25 * z * z - 0.5);
    Jet {
        value: g * c.s.to_f64(),
        d1: g * d1.to_f64(),
        d2: g * d2.to_f64(),
    }
}

/// `ε/2 + 1/4`, exactly.
fn half_eps_quarter(epsilon: f64) -> Dd {
    Dd::sum(0.5 * epsilon, 0.25)
}

pub fn weber_y1_jet(args: WeberArgs, cfg: &PrecisionConfig) -> Result<Jet> {
    let c = weber_series(half_eps_quarter(args.epsilon), false, args.z, cfg)?;
    Ok(gaussian_jet(c, args.z, 1.0))
}

/// Odd solution: `z e^{-z²/4} ₁F₁(ε/2 + 3/4; 3/2; z²/2)`.
pub fn weber_y2_jet(args: WeberArgs, cfg: &PrecisionConfig) -> Result<Jet> {
    let c = weber_series(half_eps_quarter(args.epsilon) + 0.5, true, args.z, cfg)?;
    Ok(gaussian_jet(c, args.z, 1.0))
}

/// `y₁ y₂' − y₁' y₂`, formed from the double-double series before rounding.
///
/// In plain doubles both products grow like `e^{z²/2}` while their
/// difference stays 1, so the rounded jets cannot resolve it for `|z| ≳ 5`.
pub fn weber_wronskian(args: WeberArgs, cfg: &PrecisionConfig) -> Result<f64> {
    let x = half_eps_quarter(args.epsilon);
    let c1 = weber_series(x, false, args.z, cfg)?;
    let c2 = weber_series(x + 0.5, true, args.z, cfg)?;
    // the e^{-z²/4} factors contribute −z/2 to each log-derivative and cancel
    let w = c1.s * c2.d1 - c1.d1 * c2.s;
    Ok(w.to_f64() * (-0.5 * args.z * args.z).exp())
}

/// Even solution: `e^{-z²/4} ₁F₁(ε/2 + 1/4; 1/2; z²/2)`.
pub fn weber_y1(args: WeberArgs, cfg: &PrecisionConfig) -> Result<f64> {
    Ok(weber_y1_jet(args, cfg)?.value)
}

pub fn weber_y2(args: WeberArgs, cfg: &PrecisionConfig) -> Result<f64> {
    Ok(weber_y2_jet(args, cfg)?.value)
}

/// `e^{-z²/4} ₁F₁(ε/2 + 3/4; 3/2; z²/2)` without the odd factor `z`.
///
/// Not a solution of the Weber equation; kept as a negative control for the
/// verification suite.
pub fn weber_y2_without_odd_factor_jet(args: WeberArgs, cfg: &PrecisionConfig) -> Result<Jet> {
    let c = weber_series(half_eps_quarter(args.epsilon) + 0.5, true, args.z, cfg)?;
    let z = args.z;
    if z == 0.0 {
        // S/z = 1 + (α/3) z² + ...
        let alpha = 0.5 * args.epsilon + 0.75;
        return Ok(Jet {
            value: 1.0,
            d1: 0.0,
            d2: 2.0 * alpha / 3.0 - 0.5,
        });
    }
    // divide the odd series by z: S/z, (S/z)', (S/z)''
    let s = c.s.to_f64() / z;
    let d1 = (c.d1.to_f64() - s) / z;
    let d2 = (c.d2.to_f64() - 2.0 * d1) / z;
    let g = (-0.25 * z * z).exp();
    Ok(Jet {
        value: g * s,
        d1: g * (d1 - 0.5 * z * s),
        d2: g * (d2 - z * d1 + (0.25 * z * z - 0.5) * s),
    })
}

// ---------------------------------------------------------------------------
// Parabolic cylinder functions

/// `U(ε, z)` from the even/odd solutions:
/// `√π 2^{-x} e^{-z²/4} [S₁/Γ(x+1/2) − √2 S₂/Γ(x)]` with `x = ε/2 + 1/4`.
///
/// The secant and cosecant factors of the textbook form cancel against the
/// cosine and sine they multiply, leaving reciprocal Gammas, which are entire.
/// The second element is an estimate of the relative rounding error left
/// after the cancellation between the two series.
fn combination(args: WeberArgs, cfg: &PrecisionConfig) -> Result<(Jet, f64)> {
    let x = half_eps_quarter(args.epsilon);
    let s1 = weber_series(x, false, args.z, cfg)?;
    let s2 = weber_series(x + 0.5, true, args.z, cfg)?;
    let scale = SQRT_PI * (-x.to_f64() * LN_2).exp();
    let p1 = reciprocal_gamma((x + 0.5).to_f64());
    let p2 = reciprocal_gamma(x.to_f64());
    let combined = match gamma_half_ratio(x) {
        Some(ratio) if p1 != 0.0 => {
            let w = Dd::SQRT2 * ratio;
            SeriesJet {
                s: (s1.s - w * s2.s) * p1,
                d1: (s1.d1 - w * s2.d1) * p1,
                d2: (s1.d2 - w * s2.d2) * p1,
            }
        }
        _ => {
            let w = Dd::SQRT2 * (-p2);
            SeriesJet {
                s: s2.s * w,
                d1: s2.d1 * w,
                d2: s2.d2 * w,
            }
        }
    };
    // Compare against the local oscillation/decay rate so that a zero of U
    // in z does not count as cancellation.
    let local_k = (0.25 * args.z * args.z + args.epsilon).abs().sqrt() + 1.0;
    let parts = s1.s.abs().hi * p1.abs() + SQRT_2 * s2.s.abs().hi * p2.abs();
    let kept = combined.s.abs().hi.max(combined.d1.abs().hi / local_k);
    let err = if parts == 0.0 { 0.0 } else { 1e-31 * parts / kept };
    Ok((gaussian_jet(combined, args.z, scale), err))
}

/// Asymptotic expansion truncated at its smallest term, with that term's
/// size relative to the sum as the error estimate.
fn asymptotic(args: WeberArgs, cfg: &PrecisionConfig) -> Option<(Jet, f64)> {
    let WeberArgs { epsilon: a, z } = args;
    if z <= 0.0 {
        return None;
    }
    let p0 = -a - 0.5;
    let inv_z2 = 1.0 / (z * z);
    let (mut v, mut d1, mut d2) = (0.0, 0.0, 0.0);
    let mut term = 1.0;
    let mut err = None;
    for s in 0..cfg.max_terms {
        let sf = s as f64;
        let p = p0 - 2.0 * sf;
        let slope = p / z - 0.5 * z;
        v += term;
        d1 += term * slope;
        d2 += term * (slope * slope - p * inv_z2 - 0.5);

        let next = -term * (a + 0.5 + 2.0 * sf) * (a + 1.5 + 2.0 * sf) / (2.0 * (sf + 1.0)) * inv_z2;
        if next == 0.0 || next.abs() <= 1e-20 * v.abs() {
            err = Some(next.abs() / v.abs());
            break;
        }
        let past_sign_changes = a + 0.5 + 2.0 * sf > 0.0;
        if past_sign_changes && next.abs() >= term.abs() {
            err = Some(term.abs() / v.abs());
            break;
        }
        term = next;
    }
    let base = (-0.25 * z * z).exp() * z.powf(p0);
    let jet = Jet {
        value: base * v,
        d1: base * d1,
        d2: base * d2,
    };
    err.map(|e| (jet, e.max(f64::EPSILON)))
}

/// Series-combination branch of `U`, error if cancellation leaves less
/// than `series_tol` relative accuracy.
pub fn pcf_u_series_branch(args: WeberArgs, cfg: &PrecisionConfig) -> Result<Jet> {
    let (jet, err) = combination(args, cfg)?;
    if err > cfg.series_tol {
        return Err(Error::AsymptoticDivergence {
            epsilon: args.epsilon,
            z: args.z,
        });
    }
    Ok(jet)
}

/// Asymptotic expansion `U ~ e^{-z²/4} z^{-ε-1/2} Σ_s (-1)^s (ε+1/2)_{2s} / (s! (2z²)^s)`,
/// truncated at its smallest term. `None` when that term is not below
/// `tol` relative to the sum.
pub fn pcf_u_asymptotic_branch(args: WeberArgs, cfg: &PrecisionConfig, tol: f64) -> Option<Jet> {
    asymptotic(args, cfg).filter(|&(_, err)| err <= tol).map(|(jet, _)| jet)
}

/// `U(ε, z)` with its first two `z`-derivatives.
///
/// Beyond the switch point, and well past the turning point `z² = 4|ε|`,
/// the asymptotic expansion is tried first. Otherwise, or if it is not
/// accurate to `series_tol`, the series combination is used. If neither
/// reaches `series_tol`, the better of the two is accepted down to `1e-10`.
pub fn pcf_u_jet(args: WeberArgs, cfg: &PrecisionConfig) -> Result<Jet> {
    let WeberArgs { epsilon, z } = args;
    if !epsilon.is_finite() || !z.is_finite() {
        return Err(Error::InvalidParameter(format!("U({epsilon}, {z})")));
    }
    let mut asym = None;
    if z >= cfg.asymptotic_switch_z && z * z >= 8.0 * epsilon.abs() {
        asym = asymptotic(args, cfg);
        if let Some((jet, err)) = asym {
            if err <= cfg.series_tol {
                return Ok(jet);
            }
        }
    }
    let mut best: Option<(Jet, f64)> = None;
    if 0.5 * z * z <= COMBINATION_LIMIT {
        let (jet, err) = combination(args, cfg)?;
        if err <= cfg.series_tol {
            return Ok(jet);
        }
        best = Some((jet, err));
    }
    if asym.is_none() && z > 0.0 {
        asym = asymptotic(args, cfg);
    }
    if let Some(candidate) = asym {
        if best.is_none_or(|(_, e)| candidate.1 < e) {
            best = Some(candidate);
        }
    }
    match best {
        Some((jet, err)) if err <= LOOSE_TOL => Ok(jet),
        _ => Err(Error::AsymptoticDivergence { epsilon, z }),
    }
}

/// Parabolic cylinder function `U(ε, z)`, the solution decaying as `z → +∞`.
pub fn pcf_u(args: WeberArgs, cfg: &PrecisionConfig) -> Result<f64> {
    Ok(pcf_u_jet(args, cfg)?.value)
}

/// `∂U/∂z`.
pub fn pcf_u_dz(args: WeberArgs, cfg: &PrecisionConfig) -> Result<f64> {
    Ok(pcf_u_jet(args, cfg)?.d1)
}

fn pcf_v_raw(epsilon: f64, z: f64, cfg: &PrecisionConfig) -> Result<f64> {
    let x = 0.5 * epsilon + 0.25;
    let args = WeberArgs::new(epsilon, z);
    let y1 = weber_y1(args, cfg)?;
    let y2 = weber_y2(args, cfg)?;
    let tan = sin_pi(x) / cos_pi(x);
    let cot = cos_pi(x) / sin_pi(x);
    let bracket = tan * reciprocal_gamma(x + 0.5) * y1 + SQRT_2 * cot * reciprocal_gamma(x) * y2;
    Ok(reciprocal_gamma(0.5 - epsilon) * SQRT_PI * (-x * LN_2).exp() * bracket)
}

/// The second parabolic cylinder function `V(ε, z)`, growing as `z → +∞`.
///
/// At `ε = 1/2 + m` the formula is a removable `0·∞`; inside the guard band it
/// is replaced by the average of the two neighbours at `ε ± pole_guard_delta`.
pub fn pcf_v(args: WeberArgs, cfg: &PrecisionConfig) -> Result<f64> {
    let WeberArgs { epsilon, z } = args;
    let nearest = (epsilon - 0.5).round() + 0.5;
    if (epsilon - nearest).abs() < cfg.pole_guard_delta {
        let d = cfg.pole_guard_delta;
        let lo = pcf_v_raw(nearest - d, z, cfg)?;
        let hi = pcf_v_raw(nearest + d, z, cfg)?;
        return Ok(0.5 * (lo + hi));
    }
    pcf_v_raw(epsilon, z, cfg)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> PrecisionConfig {
        PrecisionConfig::default()
    }

    #[test]
    fn kummer_trivial_values() {
        let v = kummer_1f1(0.5, 0.5, 1.0, &cfg()).unwrap();
        assert!((v - std::f64::consts::E).abs() < 1e-15);
        assert_eq!(kummer_1f1(0.75, 1.5, 0.0, &cfg()).unwrap(), 1.0);
    }

    #[test]
    fn kummer_rejects_beta_poles() {
        assert!(matches!(kummer_1f1(0.3, -2.0, 1.0, &cfg()), Err(Error::Pole(_))));
        assert!(matches!(kummer_1f1(0.3, 0.0, 1.0, &cfg()), Err(Error::Pole(_))));
    }

    #[test]
    fn kummer_transformation_for_large_negative_argument() {
        // 1F1(a; a; z) = e^z on both sides of the switch
        let v = kummer_1f1(1.25, 1.25, -40.0, &cfg()).unwrap();
        assert!((v / (-40f64).exp() - 1.0).abs() < 1e-13);
        // terminating polynomial: 1F1(-2; 1/2; z) = 1 - 4z + 4z²/3
        let z = -35.0;
        let v = kummer_1f1(-2.0, 0.5, z, &cfg()).unwrap();
        let exact = 1.0 - 4.0 * z + 4.0 * z * z / 3.0;
        assert!((v / exact - 1.0).abs() < 1e-12);
    }

    #[test]
    fn kummer_reports_non_convergence() {
        let tight = PrecisionConfig { max_terms: 50, ..cfg() };
        assert!(matches!(
            kummer_1f1(0.5, 0.7, 200.0, &tight),
            Err(Error::NonConvergence { .. })
        ));
    }

    #[test]
    fn weber_truncating_cases() {
        let y1 = weber_y1(WeberArgs::new(-0.5, 2.0), &cfg()).unwrap();
        assert!((y1 - (-1f64).exp()).abs() < 1e-15);
        let y2 = weber_y2(WeberArgs::new(-1.5, 2.0), &cfg()).unwrap();
        assert!((y2 - 2.0 * (-1f64).exp()).abs() < 1e-15);
        for eps in [-7.3, -1.0, 0.0, 2.5] {
            let y1 = weber_y1_jet(WeberArgs::new(eps, 0.0), &cfg()).unwrap();
            let y2 = weber_y2_jet(WeberArgs::new(eps, 0.0), &cfg()).unwrap();
            assert_eq!((y1.value, y1.d1), (1.0, 0.0));
            assert_eq!((y2.value, y2.d1), (0.0, 1.0));
        }
    }

    #[test]
    fn u_reduces_to_hermite_functions() {
        for z in [-3.0, 0.0, 0.7, 2.0, 5.5] {
            let u = pcf_u(WeberArgs::new(-0.5, z), &cfg()).unwrap();
            assert!((u - (-0.25 * z * z).exp()).abs() < 1e-14, "z={z}");
            let u = pcf_u(WeberArgs::new(-1.5, z), &cfg()).unwrap();
            assert!((u - z * (-0.25 * z * z).exp()).abs() < 1e-14, "z={z}");
        }
        assert_eq!(pcf_u(WeberArgs::new(-0.5, 0.0), &cfg()).unwrap(), 1.0);
        let u = pcf_u(WeberArgs::new(-1.5, 1.0), &cfg()).unwrap();
        assert!((u - 0.778_800_783_1).abs() < 1e-10);
        assert!(pcf_u_dz(WeberArgs::new(-0.5, 0.0), &cfg()).unwrap().abs() < 1e-15);
        assert!((pcf_u_dz(WeberArgs::new(-1.5, 0.0), &cfg()).unwrap() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn u_at_reference_points() {
        let c = cfg();
        let u = pcf_u(WeberArgs::new(0.0, 2.0), &c).unwrap();
        assert!((u - 0.243_018_893_963_601_94).abs() < 1e-15);
        let j = pcf_u_jet(WeberArgs::new(0.3, 1.2), &c).unwrap();
        assert!((j.value - 0.467_528_634_997_282).abs() < 1e-15);
        assert!((j.d1 + 0.468_973_604_891_615_96).abs() < 1e-14);
        // deep in the classically allowed region the two series are huge
        let j = pcf_u_jet(WeberArgs::new(-40.0, 12.0), &c).unwrap();
        assert!((j.value / 2.210_889_046_087_675_7e23 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn u_branches_agree_past_the_switch() {
        let c = cfg();
        for eps in [-8.0, -3.0, -1.0, 0.0, 1.0, 3.0] {
            for z in [8.0, 8.5] {
                let a = WeberArgs::new(eps, z);
                let (s, e1) = combination(a, &c).unwrap();
                let (t, e2) = asymptotic(a, &c).unwrap();
                assert!(e1.max(e2) < 1e-8, "eps={eps} z={z}");
                let tol = 1e-12_f64.max(10.0 * (e1 + e2));
                assert!((s.value / t.value - 1.0).abs() < tol, "eps={eps} z={z}");
                assert!((s.d1 / t.d1 - 1.0).abs() < tol, "eps={eps} z={z}");
            }
        }
    }

    #[test]
    fn u_refuses_when_no_branch_is_accurate() {
        let r = pcf_u(WeberArgs::new(25.0, 8.0), &cfg());
        assert!(matches!(r, Err(Error::AsymptoticDivergence { .. })));
        let r = pcf_u(WeberArgs::new(0.0, -30.0), &cfg());
        assert!(matches!(r, Err(Error::AsymptoticDivergence { .. })));
    }

    #[test]
    fn gamma_known_values() {
        assert!((gammafn(0.5).unwrap() - PI.sqrt()).abs() < 1e-15);
        let mut fact = 1.0f64;
        for n in 1..30 {
            let g = gammafn(n as f64 + 1.0).unwrap();
            fact *= n as f64;
            assert!((g / fact - 1.0).abs() < 1e-13, "n={n}");
        }
        assert!((gammafn(-0.5).unwrap() + 2.0 * PI.sqrt()).abs() < 1e-14);
        assert!(matches!(gammafn(0.0), Err(Error::Pole(_))));
        assert!(matches!(gammafn(-3.0), Err(Error::Pole(_))));
        assert_eq!(reciprocal_gamma(-4.0), 0.0);
    }

    #[test]
    fn gamma_half_ratio_matches_plain_gamma() {
        for x in [-7.3, -0.25, 0.25, 1.0, 3.75, 41.2, 90.0] {
            let r = gamma_half_ratio(Dd::from_f64(x)).unwrap().to_f64();
            let expect = gammafn(x + 0.5).unwrap() / gammafn(x).unwrap();
            assert!((r / expect - 1.0).abs() < 1e-13, "x={x}: {r} vs {expect}");
        }
        assert!(gamma_half_ratio(Dd::from_f64(-2.5)).is_none());
        assert_eq!(gamma_half_ratio(Dd::from_f64(-3.0)).unwrap().to_f64(), 0.0);
    }

    #[test]
    fn polynomials() {
        assert_eq!(hermite(0, 3.3), 1.0);
        assert_eq!(hermite(2, 1.0), 2.0);
        assert_eq!(hermite(3, 2.0), 8.0 * 8.0 - 12.0 * 2.0);
        assert_eq!(laguerre_3half(0, 0.4), 1.0);
        assert!((laguerre_3half(1, 0.4) - 2.1).abs() < 1e-15);
        // L_2^{(α)}(z) = z²/2 - (α+2) z + (α+2)(α+1)/2
        let z = 1.7;
        let exact = z * z / 2.0 - 3.5 * z + 3.5 * 2.5 / 2.0;
        assert!((laguerre_3half(2, z) - exact).abs() < 1e-14);
    }

    #[test]
    fn sin_pi_exact_zeros() {
        for k in -6..6 {
            assert_eq!(sin_pi(k as f64), 0.0);
        }
        assert!((sin_pi(0.25) - (PI / 4.0).sin()).abs() < 1e-16);
        assert!((sin_pi(-1.75) - (-1.75 * PI).sin()).abs() < 1e-15);
    }

    #[test]
    fn v_is_finite_inside_the_pole_guard() {
        let c = cfg();
        let at = pcf_v(WeberArgs::new(0.5, 1.0), &c).unwrap();
        let near = pcf_v(WeberArgs::new(0.5 + 1e-4, 1.0), &c).unwrap();
        assert!(at.is_finite());
        assert!((at - near).abs() < 1e-3 * near.abs().max(1.0));
    }
}
