//! Shape checks for SCF traces: exponential energy convergence and the
//! `‖ΔP‖ ≈ 2` plateau of oscillating runs.

/// Least-squares line through `ln|E_k − E_final|` over a window of iterations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailFit {
    pub first_iteration: usize,
    pub last_iteration: usize,
    pub slope: f64,
    pub r_squared: f64,
    /// Residuals at or below this are treated as round-off and skipped.
    pub floor: f64,
}

impl TailFit {
    pub const MIN_R_SQUARED: f64 = 0.98;

    pub fn is_exponential(&self) -> bool {
        self.slope < 0.0 && self.r_squared >= Self::MIN_R_SQUARED
    }
}

/// Fits the last `window` iterations whose energy residual is still above
/// round-off (`64·ε·max(1, |E_final|)`). Returns `None` when the trace is too
/// short or the window would straddle round-off.
pub fn energy_tail_fit(energies: &[f64], window: usize) -> Option<TailFit> {
    let (&e_final, rest) = energies.split_last()?;
    let floor = 64.0 * f64::EPSILON * e_final.abs().max(1.0);
    let end = rest.iter().rposition(|e| (e - e_final).abs() > floor)? + 1;
    if end < window || window < 2 {
        return None;
    }
    let start = end - window;
    let points: Vec<(f64, f64)> = (start..end)
        .map(|k| (k as f64, (rest[k] - e_final).abs()))
        .collect();
    if points.iter().any(|&(_, r)| r <= floor) {
        return None;
    }
    let n = points.len() as f64;
    let logs: Vec<(f64, f64)> = points.iter().map(|&(x, r)| (x, r.ln())).collect();
    let mx = logs.iter().map(|p| p.0).sum::<f64>() / n;
    let my = logs.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = logs.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = logs.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let syy: f64 = logs.iter().map(|p| (p.1 - my).powi(2)).sum();
    let slope = sxy / sxx;
    let r_squared = if syy == 0.0 {
        0.0
    } else {
        sxy * sxy / (sxx * syy)
    };
    Some(TailFit {
        first_iteration: start,
        last_iteration: end - 1,
        slope,
        r_squared,
        floor,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeltaPPlateau {
    /// `‖ΔP‖` a quarter of the way through the run.
    pub early: f64,
    pub last: f64,
}

impl DeltaPPlateau {
    pub const TARGET: f64 = 2.0;
    pub const TARGET_TOL: f64 = 0.1;
    /// Largest relative drop between `early` and `last` still called slow.
    pub const MAX_RELATIVE_DECAY: f64 = 0.1;

    pub fn relative_decay(&self) -> f64 {
        (self.early - self.last) / self.early
    }

    /// `‖ΔP‖ ≈ 2` at the end and still decreasing, but only slowly.
    pub fn is_slow_plateau(&self) -> bool {
        (self.last - Self::TARGET).abs() <= Self::TARGET_TOL
            && self.last < self.early
            && self.relative_decay() <= Self::MAX_RELATIVE_DECAY
    }
}

pub fn delta_p_plateau(delta_p: &[f64]) -> Option<DeltaPPlateau> {
    if delta_p.len() < 4 {
        return None;
    }
    Some(DeltaPPlateau {
        early: delta_p[delta_p.len() / 4],
        last: *delta_p.last()?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn geometric_tail_is_exponential() {
        let mut e: Vec<f64> = (0..40).map(|k| -10.0 + 3.0 * 0.6f64.powi(k)).collect();
        // round-off jitter after convergence
        e.extend([-10.0 + 1e-15, -10.0, -10.0]);
        let fit = energy_tail_fit(&e, 10).unwrap();
        assert!(fit.is_exponential());
        assert!((fit.slope - 0.6f64.ln()).abs() < 1e-6);
        assert_eq!(fit.last_iteration, 39);
    }

    #[test]
    fn flat_or_short_traces_have_no_fit() {
        assert!(energy_tail_fit(&[1.0, 1.0, 1.0], 10).is_none());
        assert!(energy_tail_fit(&[], 10).is_none());
    }

    #[test]
    fn plateau_detection() {
        let d: Vec<f64> = (0..100).map(|k| 2.0 + 0.002 * 0.97f64.powi(k)).collect();
        assert!(delta_p_plateau(&d).unwrap().is_slow_plateau());
        let decaying: Vec<f64> = (0..100).map(|k| 0.5f64.powi(k)).collect();
        assert!(!delta_p_plateau(&decaying).unwrap().is_slow_plateau());
    }
}
