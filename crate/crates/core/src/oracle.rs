//! Finite-difference ground truth, independent of the special functions.
//!
//! `−(ħ²/2)ψ'' + Vψ = Eψ` is discretized with the 3-point stencil on a
//! uniform grid with Dirichlet ends. The resulting symmetric tridiagonal
//! matrix is diagonalized one eigenvalue at a time by Sturm counts and
//! bisection, and two resolutions are Richardson-combined. Nothing here
//! touches [`crate::specfun`]; only the potential callables and elementary
//! arithmetic are used.

use crate::error::{Error, Result};
use crate::exec::Execution;
use std::sync::Arc;

/// Largest relative shift between the two resolutions before a grid is
/// declared too coarse.
pub const GRID_AGREEMENT: f64 = 1e-4;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GridSpec {
    pub x_lo: f64,
    pub x_hi: f64,
    /// Interior grid points of the coarse resolution.
    pub n_points: usize,
}

impl GridSpec {
    pub fn new(x_lo: f64, x_hi: f64) -> Self {
        GridSpec {
            x_lo,
            x_hi,
            n_points: 20_000,
        }
    }

    pub fn with_points(self, n_points: usize) -> Self {
        GridSpec { n_points, ..self }
    }

    pub fn validate(&self) -> Result<()> {
        if !self.x_lo.is_finite() || !self.x_hi.is_finite() || self.x_lo >= self.x_hi {
            return Err(Error::InvalidParameter(format!(
                "grid [{}, {}] is empty",
                self.x_lo, self.x_hi
            )));
        }
        if self.n_points < 1000 {
            return Err(Error::InvalidParameter(format!(
                "grid needs at least 1000 points, got {}",
                self.n_points
            )));
        }
        Ok(())
    }

    pub fn spacing(&self) -> f64 {
        (self.x_hi - self.x_lo) / (self.n_points + 1) as f64
    }
}

/// A potential `V(x)` for a unit-mass particle, with the points where it diverges.
#[derive(Clone)]
pub struct PotentialSpec {
    pub v: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
    pub singular_points: Vec<f64>,
    pub hbar: f64,
}

impl std::fmt::Debug for PotentialSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("PotentialSpec")
            .field("singular_points", &self.singular_points)
            .field("hbar", &self.hbar)
            .finish()
    }
}

impl PotentialSpec {
    pub fn new(hbar: f64, v: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        PotentialSpec {
            v: Arc::new(v),
            singular_points: Vec::new(),
            hbar,
        }
    }

    pub fn with_singularities(mut self, points: &[f64]) -> Self {
        self.singular_points = points.to_vec();
        self
    }

    pub fn eval(&self, x: f64) -> f64 {
        (self.v)(x)
    }

    /// `ω² x² / 2`.
    pub fn harmonic(hbar: f64, omega: f64) -> Self {
        PotentialSpec::new(hbar, move |x| 0.5 * omega * omega * x * x)
    }

    /// Harmonic well with an infinite wall at `x = wall`; the caller puts a
    /// grid end there.
    pub fn harmonic_with_wall(hbar: f64, omega: f64, wall: f64) -> Self {
        PotentialSpec::harmonic(hbar, omega).with_singularities(&[wall])
    }

    pub fn free(hbar: f64) -> Self {
        PotentialSpec::new(hbar, |_| 0.0)
    }

    /// Singular isotonic oscillator
    /// `ħ²x²/(8a⁴) + ħ²/(x−a)² + ħ²/(x+a)² − 3ħ²/(4a²)`.
    pub fn isotonic(hbar: f64, a: f64) -> Self {
        let h2 = hbar * hbar;
        PotentialSpec::new(hbar, move |x| {
            h2 * x * x / (8.0 * a.powi(4)) + h2 / ((x - a) * (x - a)) + h2 / ((x + a) * (x + a)) - 0.75 * h2 / (a * a)
        })
        .with_singularities(&[-a, a])
    }

    /// Regular superpartner `ħ²x²/(8a⁴) − 5ħ²/(4a²)`.
    pub fn isotonic_partner(hbar: f64, a: f64) -> Self {
        let h2 = hbar * hbar;
        PotentialSpec::new(hbar, move |x| h2 * x * x / (8.0 * a.powi(4)) - 1.25 * h2 / (a * a))
    }

    /// Radial channel `ω²x²/2 + λ(λ−1)ħ²/(2x²)`, singular at the origin.
    pub fn centrifugal(hbar: f64, omega: f64, lambda: f64) -> Self {
        let c = 0.5 * lambda * (lambda - 1.0) * hbar * hbar;
        PotentialSpec::new(hbar, move |x| 0.5 * omega * omega * x * x + c / (x * x)).with_singularities(&[0.0])
    }

    fn check_grid(&self, grid: &GridSpec) -> Result<()> {
        for &s in &self.singular_points {
            if s > grid.x_lo && s < grid.x_hi {
                return Err(Error::SingularPoint { x: s });
            }
        }
        Ok(())
    }
}

/// First point beyond `from` (walking in the direction of `step`) where
/// `V ≥ threshold`; used to truncate half-infinite domains.
pub fn truncation_point(pot: &PotentialSpec, from: f64, step: f64, threshold: f64) -> f64 {
    let mut x = from + step;
    for _ in 0..1_000_000 {
        if pot.eval(x) >= threshold {
            return x;
        }
        x += step;
    }
    x
}

struct Tridiagonal {
    diag: Vec<f64>,
    off: f64,
}

impl Tridiagonal {
    fn build(pot: &PotentialSpec, grid: &GridSpec, n: usize) -> Tridiagonal {
        let h = (grid.x_hi - grid.x_lo) / (n + 1) as f64;
        let k = pot.hbar * pot.hbar / (h * h);
        let diag = (1..=n).map(|i| k + pot.eval(grid.x_lo + i as f64 * h)).collect();
        Tridiagonal { diag, off: -0.5 * k }
    }

    /// Number of eigenvalues strictly below `lambda`.
    fn count_below(&self, lambda: f64) -> usize {
        let e2 = self.off * self.off;
        let tiny = f64::MIN_POSITIVE.sqrt() * (1.0 + self.off.abs());
        let mut q = 1.0;
        let mut count = 0;
        for (i, &d) in self.diag.iter().enumerate() {
            q = if i == 0 { d - lambda } else { d - lambda - e2 / q };
            if q == 0.0 {
                q = -tiny;
            }
            if q < 0.0 {
                count += 1;
            }
        }
        count
    }

    fn lower_bound(&self) -> f64 {
        self.diag.iter().cloned().fold(f64::INFINITY, f64::min) - 2.0 * self.off.abs()
    }

    /// The `index`-th eigenvalue (0-based) by bisection on Sturm counts.
    fn eigenvalue(&self, index: usize) -> f64 {
        let mut lo = self.lower_bound();
        let mut width = 1.0f64;
        let mut hi = lo + width;
        while self.count_below(hi) <= index {
            lo = hi;
            width *= 2.0;
            hi = lo + width;
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid == lo || mid == hi || hi - lo <= 1e-14 * mid.abs().max(1.0) {
                break;
            }
            if self.count_below(mid) > index {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        0.5 * (lo + hi)
    }
}

/// An eigenvalue at both resolutions and the extrapolated value.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OracleLevel {
    pub index: usize,
    pub energy: f64,
    pub coarse: f64,
    pub fine: f64,
}

/// Eigenvalues of one resolution with `n` interior points.
pub fn dirichlet_eigen_raw(
    pot: &PotentialSpec,
    grid: &GridSpec,
    n: usize,
    count: usize,
    exec: Execution,
) -> Result<Vec<f64>> {
    grid.validate()?;
    pot.check_grid(grid)?;
    let m = Tridiagonal::build(pot, grid, n);
    let idx: Vec<usize> = (0..count).collect();
    Ok(exec.map(&idx, |&k| m.eigenvalue(k)))
}

/// Lowest `count` Dirichlet eigenvalues, Richardson-extrapolated from the
/// grid and its half-spacing refinement (`h²` error model).
pub fn dirichlet_eigen(
    pot: &PotentialSpec,
    grid: &GridSpec,
    count: usize,
    exec: Execution,
) -> Result<Vec<OracleLevel>> {
    grid.validate()?;
    if count == 0 || count >= grid.n_points / 10 {
        return Err(Error::InvalidParameter(format!(
            "count {count} must be in 1..{}",
            grid.n_points / 10
        )));
    }
    let coarse = dirichlet_eigen_raw(pot, grid, grid.n_points, count, exec)?;
    let fine = dirichlet_eigen_raw(pot, grid, 2 * grid.n_points + 1, count, exec)?;
    let mut out = Vec::with_capacity(count);
    for (index, (&c, &f)) in coarse.iter().zip(&fine).enumerate() {
        let energy = (4.0 * f - c) / 3.0;
        let relative_change = (f - c).abs() / energy.abs().max(f64::MIN_POSITIVE);
        if relative_change > GRID_AGREEMENT {
            return Err(Error::GridTooCoarse { index, relative_change });
        }
        out.push(OracleLevel {
            index,
            energy,
            coarse: c,
            fine: f,
        });
    }
    Ok(out)
}

/// Grid eigenvector for a computed eigenvalue, by inverse iteration.
///
/// Returns `(x_i, ψ_i)` over the interior points, normalized to unit
/// discrete L² norm with a positive first large component.
pub fn eigenvector(pot: &PotentialSpec, grid: &GridSpec, energy: f64) -> Result<Vec<(f64, f64)>> {
    grid.validate()?;
    pot.check_grid(grid)?;
    let n = grid.n_points;
    let h = grid.spacing();
    let m = Tridiagonal::build(pot, grid, n);
    let shift = energy + 1e-10 * energy.abs().max(1.0);
    let mut v = vec![1.0; n];
    for _ in 0..4 {
        v = thomas_solve(&m, shift, &v)?;
        let norm = (v.iter().map(|x| x * x).sum::<f64>() * h).sqrt();
        for x in v.iter_mut() {
            *x /= norm;
        }
    }
    let peak = v
        .iter()
        .cloned()
        .fold(0.0f64, |a, x| if x.abs() > a.abs() { x } else { a });
    let sign = if peak < 0.0 { -1.0 } else { 1.0 };
    Ok((0..n).map(|i| (grid.x_lo + (i + 1) as f64 * h, sign * v[i])).collect())
}

fn thomas_solve(m: &Tridiagonal, shift: f64, rhs: &[f64]) -> Result<Vec<f64>> {
    let n = rhs.len();
    let e = m.off;
    let mut c = vec![0.0; n];
    let mut d = vec![0.0; n];
    let mut denom = m.diag[0] - shift;
    for i in 0..n {
        if i > 0 {
            denom = m.diag[i] - shift - e * c[i - 1];
        }
        if denom == 0.0 {
            denom = 1e-300;
        }
        c[i] = e / denom;
        d[i] = (rhs[i] - if i > 0 { e * d[i - 1] } else { 0.0 }) / denom;
    }
    let mut x = vec![0.0; n];
    x[n - 1] = d[n - 1];
    for i in (0..n - 1).rev() {
        x[i] = d[i] - c[i] * x[i + 1];
    }
    if x.iter().any(|v| !v.is_finite()) {
        return Err(Error::NormalizationFailure("inverse iteration overflowed".into()));
    }
    Ok(x)
}

/// Adaptive Simpson quadrature of `f` over `[x_lo, x_hi]`.
pub fn quadrature<F: Fn(f64) -> f64>(f: F, x_lo: f64, x_hi: f64, tol: f64) -> Result<f64> {
    const MAX_INTERVALS: usize = 1_000_000;
    if x_lo == x_hi {
        return Ok(0.0);
    }
    let simpson = |a: f64, fa: f64, b: f64, fb: f64| {
        let m = 0.5 * (a + b);
        let fm = f(m);
        (m, fm, (b - a) / 6.0 * (fa + 4.0 * fm + fb))
    };
    let (fa, fb) = (f(x_lo), f(x_hi));
    let (m, fm, whole) = simpson(x_lo, fa, x_hi, fb);
    // (a, fa, m, fm, b, fb, estimate, tolerance, depth)
    let mut stack = vec![(x_lo, fa, m, fm, x_hi, fb, whole, tol, 0u32)];
    let mut total = 0.0;
    let mut intervals = 0usize;
    while let Some((a, fa, m, fm, b, fb, est, t, depth)) = stack.pop() {
        intervals += 1;
        if intervals > MAX_INTERVALS {
            return Err(Error::NonConvergence {
                terms: MAX_INTERVALS,
                context: "adaptive Simpson quadrature".into(),
            });
        }
        let (lm, flm, left) = simpson(a, fa, m, fm);
        let (rm, frm, right) = simpson(m, fm, b, fb);
        let delta = left + right - est;
        if (delta.abs() <= 15.0 * t && depth >= 4) || depth >= 60 {
            total += left + right + delta / 15.0;
        } else {
            stack.push((a, fa, lm, flm, m, fm, left, 0.5 * t, depth + 1));
            stack.push((m, fm, rm, frm, b, fb, right, 0.5 * t, depth + 1));
        }
    }
    if !total.is_finite() {
        return Err(Error::NonConvergence {
            terms: intervals,
            context: "quadrature produced a non-finite value".into(),
        });
    }
    Ok(total)
}

/// `max_i |−(ħ²/2)ψ''(x_i) + (V − E)ψ(x_i)| / max(max_i |Eψ(x_i)|, scale)`,
/// with `ψ''` from the 5-point stencil of step `h`.
pub fn schrodinger_residual<F: Fn(f64) -> f64>(
    psi: F,
    energy: f64,
    pot: &PotentialSpec,
    samples: &[f64],
    h: f64,
    scale: f64,
) -> Result<f64> {
    for &x in samples {
        for &s in &pot.singular_points {
            if (x - s).abs() <= 4.0 * h {
                return Err(Error::SingularPoint { x });
            }
        }
    }
    let mut worst = 0.0f64;
    let mut denom = scale;
    for &x in samples {
        let f0 = psi(x);
        let d2 =
            (-psi(x + 2.0 * h) + 16.0 * psi(x + h) - 30.0 * f0 + 16.0 * psi(x - h) - psi(x - 2.0 * h)) / (12.0 * h * h);
        let r = -0.5 * pot.hbar * pot.hbar * d2 + (pot.eval(x) - energy) * f0;
        worst = worst.max(r.abs());
        denom = denom.max((energy * f0).abs());
    }
    Ok(worst / denom)
}

/// Least-squares slope of `ln|y|` against `ln x`.
pub fn log_log_slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let (mut sx, mut sy, mut sxx, mut sxy) = (0.0, 0.0, 0.0, 0.0);
    for &(x, y) in points {
        let (lx, ly) = (x.ln(), y.abs().ln());
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    (n * sxy - sx * sy) / (n * sxx - sx * sx)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn harmonic_oscillator_spectrum() {
        let pot = PotentialSpec::harmonic(1.0, 1.0);
        let levels = dirichlet_eigen(&pot, &GridSpec::new(-12.0, 12.0), 3, Execution::Parallel).unwrap();
        for l in &levels {
            assert!((l.energy - (l.index as f64 + 0.5)).abs() < 1e-7, "{l:?}");
        }
    }

    #[test]
    fn particle_in_a_box() {
        let pot = PotentialSpec::free(1.0);
        let levels = dirichlet_eigen(&pot, &GridSpec::new(0.0, 2.0), 4, Execution::Sequential).unwrap();
        for l in &levels {
            let k = (l.index + 1) as f64;
            let exact = PI * PI * k * k / 8.0;
            assert!((l.energy / exact - 1.0).abs() < 1e-7, "{l:?}");
        }
    }

    #[test]
    fn straddled_singularity_is_rejected() {
        let pot = PotentialSpec::isotonic(1.0, 1.0);
        let r = dirichlet_eigen(&pot, &GridSpec::new(0.0, 5.0), 1, Execution::Sequential);
        assert!(matches!(r, Err(Error::SingularPoint { .. })));
    }

    #[test]
    fn coarse_grids_are_flagged() {
        let pot = PotentialSpec::harmonic(1.0, 1.0);
        let grid = GridSpec::new(-12.0, 12.0).with_points(1000);
        let r = dirichlet_eigen(&pot, &grid, 60, Execution::Parallel);
        assert!(matches!(r, Err(Error::GridTooCoarse { .. })));
    }

    #[test]
    fn quadrature_basics() {
        let v = quadrature(|x| x * x, 0.0, 1.0, 1e-13).unwrap();
        assert!((v - 1.0 / 3.0).abs() < 1e-12);
        let v = quadrature(|x| (-x * x).exp(), -8.0, 8.0, 1e-12).unwrap();
        assert!((v - PI.sqrt()).abs() < 1e-10);
    }

    #[test]
    fn residual_detects_wrong_energy() {
        let pot = PotentialSpec::harmonic(1.0, 1.0);
        let samples: Vec<f64> = (0..41).map(|i| -4.0 + 0.2 * i as f64).collect();
        let psi = |x: f64| (-0.5 * x * x).exp();
        let r = schrodinger_residual(psi, 0.5, &pot, &samples, 2e-3, 0.0).unwrap();
        assert!(r < 1e-9, "{r}");
        let r = schrodinger_residual(psi, 0.6, &pot, &samples, 2e-3, 0.0).unwrap();
        assert!(r > 0.05, "{r}");
    }

    #[test]
    fn eigenvector_is_the_ground_gaussian() {
        let pot = PotentialSpec::harmonic(1.0, 1.0);
        let grid = GridSpec::new(-10.0, 10.0).with_points(4000);
        let e = dirichlet_eigen_raw(&pot, &grid, grid.n_points, 1, Execution::Sequential).unwrap()[0];
        let v = eigenvector(&pot, &grid, e).unwrap();
        let c = PI.powf(-0.25);
        let worst = v
            .iter()
            .map(|&(x, p)| (p - c * (-0.5 * x * x).exp()).abs())
            .fold(0.0, f64::max);
        assert!(worst < 1e-5, "{worst}");
    }
}
