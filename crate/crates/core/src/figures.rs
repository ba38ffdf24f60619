//! Plot data: energies against barrier position and ground-state profiles.

use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::weber_spectra::{self, BarrierGeometry, BarrierKind, EigenSolveConfig, OscillatorParams};

#[derive(Clone, Debug, PartialEq)]
pub struct EnergySweep {
    pub kind: BarrierKind,
    pub b: Vec<f64>,
    /// `energies[i][n]` is `E_n` at `b[i]`.
    pub energies: Vec<Vec<f64>>,
}

/// `E_n(b)` for `n < levels` on `steps + 1` evenly spaced barrier positions.
/// Barrier positions are spread over `cfg.execution`; each solve runs
/// sequentially inside.
pub fn energy_sweep(
    kind: BarrierKind,
    b_from: f64,
    b_to: f64,
    steps: usize,
    levels: usize,
    params: &OscillatorParams,
    cfg: &EigenSolveConfig,
) -> Result<EnergySweep> {
    if steps == 0 || b_from.is_nan() || b_to.is_nan() || b_to <= b_from {
        return Err(Error::InvalidParameter(format!(
            "sweep needs b_from < b_to and at least one step, got [{b_from}, {b_to}] in {steps}"
        )));
    }
    let b: Vec<f64> = (0..=steps)
        .map(|i| b_from + (b_to - b_from) * i as f64 / steps as f64)
        .collect();
    let inner = EigenSolveConfig {
        execution: Execution::Sequential,
        ..*cfg
    };
    let energies = cfg.execution.try_map(&b, |&bi| {
        let geom = BarrierGeometry { kind, b: bi };
        weber_spectra::solve(geom, levels, params, &inner)
            .map(|ls| ls.into_iter().map(|l| l.energy).collect::<Vec<f64>>())
    })?;
    Ok(EnergySweep { kind, b, energies })
}

impl EnergySweep {
    /// Levels whose energy is not strictly monotone in `b` (increasing for
    /// the half-line, decreasing for the box).
    pub fn non_monotone_levels(&self) -> Vec<usize> {
        let levels = self.energies.first().map_or(0, Vec::len);
        (0..levels)
            .filter(|&n| {
                !self.energies.windows(2).all(|w| match self.kind {
                    BarrierKind::HalfLine => w[1][n] > w[0][n],
                    BarrierKind::SymmetricBox => w[1][n] < w[0][n],
                })
            })
            .collect()
    }
}

/// `(z, ψ_n(z))` across the allowed domain: `[b, max(b, 0) + span]` for the
/// half-line, `[−b, b]` for the box. Unnormalized; endpoints included.
pub fn wavefunction_samples(
    geom: BarrierGeometry,
    n: usize,
    points: usize,
    span: f64,
    params: &OscillatorParams,
    cfg: &EigenSolveConfig,
) -> Result<Vec<(f64, f64)>> {
    if points < 2 {
        return Err(Error::InvalidParameter("need at least two sample points".into()));
    }
    let levels = weber_spectra::solve(geom, n + 1, params, &cfg.polished())?;
    let level = levels[n];
    let (lo, hi) = match geom.kind {
        BarrierKind::HalfLine => (geom.b, geom.b.max(0.0) + span),
        BarrierKind::SymmetricBox => (-geom.b, geom.b),
    };
    (0..points)
        .map(|i| {
            let z = lo + (hi - lo) * i as f64 / (points - 1) as f64;
            Ok((z, weber_spectra::eigenfunction_at(&level, &geom, z, &cfg.precision)?))
        })
        .collect()
}

/// Sign changes strictly inside a sampled profile, ignoring samples below
/// `tiny` times the peak.
pub fn interior_sign_changes(samples: &[(f64, f64)], tiny: f64) -> usize {
    let peak = samples.iter().fold(0.0f64, |m, &(_, v)| m.max(v.abs()));
    let mut last = 0.0f64;
    let mut changes = 0;
    for &(_, v) in samples {
        if v.abs() <= tiny * peak {
            continue;
        }
        if last != 0.0 && v.signum() != last.signum() {
            changes += 1;
        }
        last = v;
    }
    changes
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn short_sweeps_are_monotone() {
        let p = OscillatorParams::default();
        let cfg = EigenSolveConfig::default();
        let s = energy_sweep(BarrierKind::HalfLine, 0.0, 1.0, 4, 3, &p, &cfg).unwrap();
        assert!(s.non_monotone_levels().is_empty());
        let s = energy_sweep(BarrierKind::SymmetricBox, 0.5, 1.5, 4, 3, &p, &cfg).unwrap();
        assert!(s.non_monotone_levels().is_empty());
    }

    #[test]
    fn ground_states_are_nodeless() {
        let p = OscillatorParams::default();
        let cfg = EigenSolveConfig::default();
        let s = wavefunction_samples(BarrierGeometry::half_line(1.0), 0, 200, 8.0, &p, &cfg).unwrap();
        assert!(s[0].1.abs() < 1e-12);
        assert_eq!(interior_sign_changes(&s, 1e-10), 0);
        let s = wavefunction_samples(BarrierGeometry::half_line(1.0), 2, 400, 8.0, &p, &cfg).unwrap();
        assert_eq!(interior_sign_changes(&s, 1e-10), 2);
    }
}
