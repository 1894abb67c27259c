//! Finite-grid judgement of decay curves.

use crate::report::Fit;

/// Values at or below this are treated as exact zeros.
pub const ZERO_FLOOR: f64 = 1e-14;

#[derive(Clone, Copy, Debug)]
pub struct DecayCriteria {
    /// Monotonicity is required only from this `t` on.
    pub burn_in: f64,
    /// Allowed relative increase between neighbours.
    pub jitter: f64,
    /// Final value must be `≤ final_abs`, when set.
    pub final_abs: Option<f64>,
    /// Final value must be `≤ final_rel · initial`, when set.
    pub final_rel: Option<f64>,
    pub require_negative_exponent: bool,
}

impl DecayCriteria {
    pub fn relative(ratio: f64) -> Self {
        DecayCriteria {
            burn_in: 2.0,
            jitter: 0.05,
            final_abs: None,
            final_rel: Some(ratio),
            require_negative_exponent: true,
        }
    }

    pub fn absolute(tol: f64) -> Self {
        DecayCriteria {
            burn_in: 2.0,
            jitter: 0.05,
            final_abs: Some(tol),
            final_rel: None,
            require_negative_exponent: true,
        }
    }
}

#[derive(Clone, Debug)]
pub struct DecayVerdict {
    pub monotone: bool,
    pub final_ok: bool,
    pub fit: Option<Fit>,
    pub identically_zero: bool,
    pub pass: bool,
    pub reasons: Vec<String>,
}

/// Least squares slope of `ln v` against `ln t`, skipping zero values.
pub fn fit_loglog(points: &[(f64, f64)]) -> Option<Fit> {
    let pts: Vec<(f64, f64)> = points
        .iter()
        .filter(|(t, v)| *t > 0.0 && *v > ZERO_FLOOR)
        .map(|(t, v)| (t.ln(), v.ln()))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let syy: f64 = pts.iter().map(|p| (p.1 - my).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    let slope = sxy / sxx;
    let r2 = if syy == 0.0 { 1.0 } else { (sxy * sxy) / (sxx * syy) };
    Some(Fit { exponent: slope, r2 })
}

pub fn judge_decay(points: &[(f64, f64)], criteria: &DecayCriteria) -> DecayVerdict {
    let mut reasons = Vec::new();
    if points.is_empty() {
        return DecayVerdict {
            monotone: false,
            final_ok: false,
            fit: None,
            identically_zero: false,
            pass: false,
            reasons: vec!["no datapoints".into()],
        };
    }
    if points.iter().all(|p| p.1.abs() <= ZERO_FLOOR) {
        return DecayVerdict {
            monotone: true,
            final_ok: true,
            fit: None,
            identically_zero: true,
            pass: true,
            reasons,
        };
    }

    let tail: Vec<(f64, f64)> = points.iter().copied().filter(|p| p.0 >= criteria.burn_in).collect();
    let monotone = tail
        .windows(2)
        .all(|w| w[1].1 <= w[0].1 * (1.0 + criteria.jitter) || w[1].1 <= ZERO_FLOOR);
    if !monotone {
        reasons.push(format!("not non-increasing for t ≥ {}", criteria.burn_in));
    }

    let initial = points[0].1;
    let last = points[points.len() - 1].1;
    let mut final_ok = true;
    if let Some(abs) = criteria.final_abs {
        if last > abs {
            final_ok = false;
            reasons.push(format!("final {last:.3e} > {abs:.3e}"));
        }
    }
    if let Some(rel) = criteria.final_rel {
        if last > rel * initial {
            final_ok = false;
            reasons.push(format!("final/initial {:.3e} > {rel:.3e}", last / initial));
        }
    }

    let fit_points = if tail.len() >= 2 { &tail[..] } else { points };
    let fit = fit_loglog(fit_points);
    let exponent_ok = match fit {
        Some(f) => f.exponent < 0.0,
        // Everything after the start is exactly zero.
        None => last <= ZERO_FLOOR,
    };
    if criteria.require_negative_exponent && !exponent_ok {
        reasons.push("fitted exponent not negative".into());
    }
    let pass = monotone && final_ok && (exponent_ok || !criteria.require_negative_exponent);
    DecayVerdict {
        monotone,
        final_ok,
        fit,
        identically_zero: false,
        pass,
        reasons,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn power_law_fit() {
        let pts: Vec<(f64, f64)> = [1.0, 2.0, 4.0, 8.0].iter().map(|&t| (t, 3.0 / (t * t))).collect();
        let fit = fit_loglog(&pts).unwrap();
        assert!((fit.exponent + 2.0).abs() < 1e-12);
        assert!((fit.r2 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn judgement() {
        let pts = vec![(1.0, 1.0), (2.0, 0.5), (4.0, 0.51), (8.0, 0.1)];
        let v = judge_decay(&pts, &DecayCriteria::relative(0.25));
        assert!(v.pass, "{:?}", v.reasons);
        let bad = vec![(1.0, 1.0), (2.0, 0.5), (4.0, 0.7), (8.0, 0.1)];
        assert!(!judge_decay(&bad, &DecayCriteria::relative(0.25)).monotone);
        let slow = vec![(1.0, 1.0), (2.0, 0.9), (4.0, 0.8)];
        assert!(!judge_decay(&slow, &DecayCriteria::relative(0.25)).final_ok);
        let zero = vec![(1.0, 0.0), (2.0, 0.0)];
        assert!(judge_decay(&zero, &DecayCriteria::relative(0.25)).identically_zero);
    }
}
