//! Effective relaxation time of the memory and the fits built on it.
//!
//! The effective lifetime is the time at which the memory population has
//! fallen halfway from its initial value to its long-time asymptote. The
//! asymptote is read off the data (mean of the last 10% of samples), so the
//! same rule covers dephasing-only runs (asymptote ½) and runs where the
//! control also relaxes (asymptote 0).

use std::f64::consts::LN_2;

use crate::dynamics::DecayTrace;
use crate::error::{Error, Result};
use crate::model::HybridParams;

/// Fraction of samples averaged for the asymptote.
pub const TAIL_FRACTION: f64 = 0.1;
/// Maximum variance allowed in the tail window.
pub const TAIL_VARIANCE_LIMIT: f64 = 1e-4;
/// Minimum drop `p_initial − p_asymptote` treated as a decay.
pub const MIN_DROP: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum T1Method {
    FirstCrossing,
    ExponentialFit,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct T1Estimate {
    /// ns
    pub t1_eff: f64,
    pub p_initial: f64,
    pub p_asymptote: f64,
    pub crossing_population: f64,
    pub method: T1Method,
}

struct Levels {
    p_initial: f64,
    p_asymptote: f64,
}

fn levels(times: &[f64], pops: &[f64]) -> Result<Levels> {
    if times.len() != pops.len() {
        return Err(Error::DimensionMismatch {
            expected: times.len(),
            found: pops.len(),
        });
    }
    if pops.len() < 10 {
        return Err(Error::InsufficientHorizon(format!(
            "only {} samples",
            pops.len()
        )));
    }
    let k = ((pops.len() as f64 * TAIL_FRACTION).ceil() as usize).max(1);
    let tail = &pops[pops.len() - k..];
    let mean = tail.iter().sum::<f64>() / k as f64;
    let var = tail.iter().map(|p| (p - mean).powi(2)).sum::<f64>() / k as f64;
    if var >= TAIL_VARIANCE_LIMIT {
        return Err(Error::InsufficientHorizon(format!(
            "tail has not settled (variance {var:.3e}); extend t_max"
        )));
    }
    let p_initial = pops[0];
    if !(p_initial - mean > MIN_DROP) {
        return Err(Error::InsufficientHorizon(format!(
            "no decay: initial {p_initial}, asymptote {mean}"
        )));
    }
    Ok(Levels {
        p_initial,
        p_asymptote: mean,
    })
}

/// Halfway-crossing lifetime of the memory population, linearly
/// interpolated between samples.
pub fn effective_t1(trace: &DecayTrace) -> Result<T1Estimate> {
    crossing_time(&trace.times, &trace.p_memory)
}

/// Halfway-crossing lifetime of an arbitrary decaying series.
pub fn crossing_time(times: &[f64], pops: &[f64]) -> Result<T1Estimate> {
    let Levels {
        p_initial,
        p_asymptote,
    } = levels(times, pops)?;
    let half = p_asymptote + 0.5 * (p_initial - p_asymptote);
    let k = pops
        .iter()
        .position(|&p| p <= half)
        .ok_or_else(|| Error::InsufficientHorizon(format!("population never reaches {half}")))?;
    let (t0, t1) = (times[k - 1], times[k]);
    let (p0, p1) = (pops[k - 1], pops[k]);
    let t_cross = if p0 == p1 {
        t1
    } else {
        t0 + (p0 - half) / (p0 - p1) * (t1 - t0)
    };
    Ok(T1Estimate {
        t1_eff: t_cross,
        p_initial,
        p_asymptote,
        crossing_population: half,
        method: T1Method::FirstCrossing,
    })
}

/// Cross-check: least-squares fit of `ln((p − p∞)/(p₀ − p∞))` against `t`
/// over the window where the normalized excess lies in `[0.1, 0.9]`;
/// returns `ln2` times the fitted decay constant.
pub fn effective_t1_exponential_fit(trace: &DecayTrace) -> Result<T1Estimate> {
    let Levels {
        p_initial,
        p_asymptote,
    } = levels(&trace.times, &trace.p_memory)?;
    let drop = p_initial - p_asymptote;
    let (xs, ys): (Vec<f64>, Vec<f64>) = trace
        .times
        .iter()
        .zip(&trace.p_memory)
        .filter_map(|(&t, &p)| {
            let y = (p - p_asymptote) / drop;
            (0.1..=0.9).contains(&y).then(|| (t, y.ln()))
        })
        .unzip();
    if xs.len() < 3 {
        return Err(Error::InsufficientHorizon(
            "too few samples inside the fit window".into(),
        ));
    }
    let slope = least_squares_slope(&xs, &ys);
    if !(slope < 0.0) {
        return Err(Error::InsufficientHorizon(
            "fitted decay constant is not positive".into(),
        ));
    }
    Ok(T1Estimate {
        t1_eff: LN_2 / -slope,
        p_initial,
        p_asymptote,
        crossing_population: p_asymptote + 0.5 * drop,
        method: T1Method::ExponentialFit,
    })
}

fn least_squares_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    sxy / sxx
}

fn check_analytic_inputs(p: &HybridParams) -> Result<()> {
    if p.delta == 0.0 {
        return Err(Error::Divergence(
            "relaxation time is undefined at zero detuning".into(),
        ));
    }
    if !(p.g > 0.0) {
        return Err(Error::Validation("coupling must be positive".into()));
    }
    if !p.t2_sc.is_finite() {
        return Err(Error::Validation("dephasing time must be finite".into()));
    }
    Ok(())
}

/// `ln2 / ln(1 + 4g²/Δ²) · T2`, the lifetime per unit `α`.
pub fn analytic_t1_coefficient(p: &HybridParams) -> Result<f64> {
    check_analytic_inputs(p)?;
    let x = 4.0 * p.g * p.g / (p.delta * p.delta);
    Ok(LN_2 / x.ln_1p() * p.t2_sc)
}

/// Analytic effective lifetime `α·ln2 / ln(1 + 4g²/Δ²) · T2`, ns.
pub fn analytic_t1(p: &HybridParams, alpha: f64) -> Result<f64> {
    Ok(alpha * analytic_t1_coefficient(p)?)
}

/// Large-detuning form `α·ln2·Δ²/(4g²)·T2`, ns.
pub fn analytic_t1_approx(p: &HybridParams, alpha: f64) -> Result<f64> {
    check_analytic_inputs(p)?;
    Ok(alpha * LN_2 * p.delta * p.delta / (4.0 * p.g * p.g) * p.t2_sc)
}

/// Least-squares `α` for `t1 ≈ α·C(p)`: `α = Σ C·t1 / Σ C²`.
pub fn fit_alpha(points: &[(HybridParams, f64)]) -> Result<f64> {
    if points.is_empty() {
        return Err(Error::Validation("no points to fit".into()));
    }
    let mut num = 0.0;
    let mut den = 0.0;
    for (p, t1) in points {
        let c = analytic_t1_coefficient(p)?;
        num += c * t1;
        den += c * c;
    }
    Ok(num / den)
}

/// Slope of the least-squares line through `(ln x, ln y)`.
pub fn power_law_exponent(points: &[(f64, f64)]) -> Result<f64> {
    if points.len() < 2 {
        return Err(Error::Validation("need at least two points".into()));
    }
    if points.iter().any(|&(x, y)| !(x > 0.0 && y > 0.0)) {
        return Err(Error::Validation(
            "power-law fit needs positive values".into(),
        ));
    }
    let xs: Vec<f64> = points.iter().map(|p| p.0.ln()).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.1.ln()).collect();
    if xs.iter().all(|&x| x == xs[0]) {
        return Err(Error::Validation(
            "power-law fit needs distinct abscissae".into(),
        ));
    }
    Ok(least_squares_slope(&xs, &ys))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::mhz_to_rad_per_ns;

    fn synthetic(f: impl Fn(f64) -> f64, t_end: f64, n: usize) -> DecayTrace {
        let times: Vec<f64> = (0..=n).map(|k| t_end * k as f64 / n as f64).collect();
        let pops = times.iter().map(|&t| f(t)).collect();
        DecayTrace::from_samples(times, pops).unwrap()
    }

    fn params(g_mhz: f64, d_mhz: f64, t2: f64) -> HybridParams {
        HybridParams::from_mhz(g_mhz, d_mhz, t2, f64::INFINITY).unwrap()
    }

    #[test]
    fn crossing_on_half_asymptote() {
        let tr = synthetic(|t| 0.5 + 0.5 * (-t / 1000.0).exp(), 20_000.0, 5000);
        let est = effective_t1(&tr).unwrap();
        assert!((est.t1_eff - 1000.0 * LN_2).abs() < 0.2, "{}", est.t1_eff);
        assert!((est.t1_eff - 693.1).abs() < 0.1);
        assert!(
            est.p_asymptote < est.crossing_population && est.crossing_population < est.p_initial
        );
        assert_eq!(est.method, T1Method::FirstCrossing);
    }

    #[test]
    fn crossing_on_zero_asymptote() {
        let tau0 = 350.0;
        let tr = synthetic(|t| (-t / tau0).exp(), 20.0 * tau0, 4000);
        let est = effective_t1(&tr).unwrap();
        assert!((est.t1_eff / tau0 - LN_2).abs() < 2e-4);
        let fit = effective_t1_exponential_fit(&tr).unwrap();
        assert!((fit.t1_eff / tau0 - LN_2).abs() < 1e-6);
        assert_eq!(fit.method, T1Method::ExponentialFit);
    }

    #[test]
    fn constant_trace_has_no_crossing() {
        let tr = synthetic(|_| 1.0, 100.0, 100);
        assert!(matches!(
            effective_t1(&tr),
            Err(Error::InsufficientHorizon(_))
        ));
    }

    #[test]
    fn unsettled_tail_is_rejected() {
        // still falling steeply at the end of the window
        let tr = synthetic(|t| 1.0 - t / 100.0, 100.0, 100);
        assert!(matches!(
            effective_t1(&tr),
            Err(Error::InsufficientHorizon(_))
        ));
    }

    #[test]
    fn resampling_invariance() {
        let f = |t: f64| 0.5 + 0.5 * (-t / 800.0).exp();
        let coarse = effective_t1(&synthetic(f, 12_000.0, 3000)).unwrap().t1_eff;
        let fine = effective_t1(&synthetic(f, 12_000.0, 12_000))
            .unwrap()
            .t1_eff;
        assert!(((coarse - fine) / fine).abs() < 5e-3);
    }

    #[test]
    fn analytic_reference_values() {
        let t = analytic_t1(&params(25.0, 1250.0, 10.0), 0.5).unwrap();
        assert!((t - 2168.0).abs() < 1.0, "{t}");

        let g = mhz_to_rad_per_ns(25.0);
        let p = HybridParams::new(g, 44.0 * g, 35.0, 400.0).unwrap();
        let t = analytic_t1(&p, 0.5).unwrap();
        assert!((t - 5870.0).abs() < 10.0, "{t}");
    }

    #[test]
    fn analytic_approximation_scaling_and_gap() {
        let p = params(25.0, 600.0, 10.0);
        let p2 = params(25.0, 1200.0, 10.0);
        let a = analytic_t1_approx(&p, 0.5).unwrap();
        assert!((analytic_t1_approx(&p2, 0.5).unwrap() / a - 4.0).abs() < 1e-12);

        for ratio in [10.0, 20.0, 44.0, 50.0, 200.0] {
            let g = 0.15;
            let p = HybridParams::new(g, ratio * g, 10.0, f64::INFINITY).unwrap();
            let exact = analytic_t1(&p, 0.5).unwrap();
            let approx = analytic_t1_approx(&p, 0.5).unwrap();
            let gap = ((approx - exact) / exact).abs();
            let x = 4.0 / (ratio * ratio);
            assert!(gap <= x / 2.0, "ratio {ratio}: gap {gap}");
            // x/2 ≤ 0.2% needs Δ/g ≥ √1000 ≈ 31.6
            if ratio >= 32.0 {
                assert!(gap < 2e-3);
            }
        }
    }

    #[test]
    fn analytic_errors() {
        assert!(matches!(
            analytic_t1(&params(25.0, 0.0, 10.0), 0.5),
            Err(Error::Divergence(_))
        ));
        assert!(analytic_t1(&params(0.0, 100.0, 10.0), 0.5).is_err());
        assert!(analytic_t1(&params(25.0, 100.0, f64::INFINITY), 0.5).is_err());
    }

    #[test]
    fn alpha_fit_recovers_generator() {
        let ps: Vec<HybridParams> = [600.0, 800.0, 1000.0, 1400.0]
            .iter()
            .map(|&d| params(25.0, d, 10.0))
            .collect();
        for alpha in [0.5, 0.1, 3.7] {
            let pts: Vec<(HybridParams, f64)> = ps
                .iter()
                .map(|p| (*p, analytic_t1(p, alpha).unwrap()))
                .collect();
            assert!((fit_alpha(&pts).unwrap() - alpha).abs() < 1e-12);
        }
        let p = ps[0];
        let c = analytic_t1_coefficient(&p).unwrap();
        assert!((fit_alpha(&[(p, 2.0 * c)]).unwrap() - 2.0).abs() < 1e-15);
        assert!(fit_alpha(&[]).is_err());
    }

    #[test]
    fn power_law_exponents() {
        let quad: Vec<(f64, f64)> = [1.0, 2.0, 3.5, 10.0]
            .iter()
            .map(|&x| (x, 7.0 * x * x))
            .collect();
        assert!((power_law_exponent(&quad).unwrap() - 2.0).abs() < 1e-12);
        let lin: Vec<(f64, f64)> = [600.0, 900.0, 1400.0]
            .iter()
            .map(|&x| (x, 0.3 * x))
            .collect();
        assert!((power_law_exponent(&lin).unwrap() - 1.0).abs() < 1e-12);
        assert!(power_law_exponent(&[(1.0, 2.0), (0.0, 1.0), (3.0, 4.0)]).is_err());
        assert!(power_law_exponent(&[(1.0, 2.0)]).is_err());
    }
}
