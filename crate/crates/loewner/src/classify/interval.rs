//! Accumulation-set estimation for real time series.
//!
//! The estimator discards nothing itself: callers hand it the post-transient
//! tail. It splits the tail into trailing windows and classifies the shape of
//! the accumulation set from three ingredients: decay of the per-window
//! ranges (convergence to a point), revisiting of the global extremes in
//! every window (recurrence, hence a compact interval), and trend slopes of
//! the window extremes (one- or two-sided divergence). Anything that fits no
//! shape cleanly is reported as inconclusive rather than guessed.

use thiserror::Error;

/// Minimum number of tail samples the interval estimator accepts.
pub const MIN_SAMPLES: usize = 1000;
/// Minimum number of samples for the lighter trend diagnostics.
pub const MIN_TREND_SAMPLES: usize = 64;
/// Number of trailing windows.
pub const WINDOWS: usize = 8;
/// Recurrence threshold as a fraction of the tail range.
pub const RECURRENCE_FRACTION: f64 = 0.02;
/// Significance of window-extreme trend slopes, per decade of time, as a
/// fraction of the tail range.
pub const SLOPE_SIGNIFICANCE: f64 = 0.05;
/// Window-range decay ratio below which the series counts as convergent.
pub const POINT_DECAY_RATIO: f64 = 0.25;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SeriesError {
    #[error("series diagnostic needs at least {needed} samples, got {got}")]
    TooFewSamples { needed: usize, got: usize },
    #[error("series times must be strictly increasing")]
    NonIncreasingTimes,
    #[error("series lengths differ: {times} times vs {values} values")]
    LengthMismatch { times: usize, values: usize },
    #[error("series contains a non-finite value")]
    NonFinite,
}

/// Shape of the estimated accumulation set.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IntervalKind {
    Point,
    Compact,
    UnboundedAbove,
    UnboundedBelow,
    FullLine,
    /// `FullLine` promoted to the Riemann-sphere closure; produced by the
    /// trajectory classifiers, never by the raw estimator.
    FullLineWithInfinity,
    Inconclusive,
}

/// Per-window evidence retained for reporting.
#[derive(Debug, Clone)]
pub struct IntervalDiagnostics {
    pub windows: usize,
    pub window_mins: Vec<f64>,
    pub window_maxs: Vec<f64>,
    pub window_ranges: Vec<f64>,
    pub recurrence_eps: f64,
    pub max_slope_per_decade: f64,
    pub min_slope_per_decade: f64,
    pub max_recurs: bool,
    pub min_recurs: bool,
}

#[derive(Debug, Clone)]
pub struct IntervalEstimate {
    pub kind: IntervalKind,
    pub lo: Option<f64>,
    pub hi: Option<f64>,
    pub diagnostics: IntervalDiagnostics,
}

impl IntervalEstimate {
    pub fn length(&self) -> Option<f64> {
        match (self.lo, self.hi) {
            (Some(lo), Some(hi)) => Some(hi - lo),
            _ => None,
        }
    }
}

fn check_series(times: &[f64], values: &[f64], needed: usize) -> Result<(), SeriesError> {
    if times.len() != values.len() {
        return Err(SeriesError::LengthMismatch { times: times.len(), values: values.len() });
    }
    if times.len() < needed {
        return Err(SeriesError::TooFewSamples { needed, got: times.len() });
    }
    if times.windows(2).any(|w| w[1] <= w[0]) {
        return Err(SeriesError::NonIncreasingTimes);
    }
    if values.iter().any(|v| !v.is_finite()) {
        return Err(SeriesError::NonFinite);
    }
    Ok(())
}

struct Windows {
    mids: Vec<f64>,
    mins: Vec<f64>,
    maxs: Vec<f64>,
    ranges: Vec<f64>,
    means: Vec<f64>,
}

fn split_windows(times: &[f64], values: &[f64], count: usize) -> Windows {
    let n = values.len();
    let mut w = Windows {
        mids: Vec::with_capacity(count),
        mins: Vec::with_capacity(count),
        maxs: Vec::with_capacity(count),
        ranges: Vec::with_capacity(count),
        means: Vec::with_capacity(count),
    };
    for k in 0..count {
        let lo = k * n / count;
        let hi = ((k + 1) * n / count).max(lo + 1);
        let chunk = &values[lo..hi];
        let mut mn = f64::INFINITY;
        let mut mx = f64::NEG_INFINITY;
        let mut sum = 0.0;
        for &v in chunk {
            mn = mn.min(v);
            mx = mx.max(v);
            sum += v;
        }
        w.mids.push(0.5 * (times[lo] + times[hi - 1]));
        w.mins.push(mn);
        w.maxs.push(mx);
        w.ranges.push(mx - mn);
        w.means.push(sum / chunk.len() as f64);
    }
    w
}

/// Aitken delta-squared extrapolation of a convergent tail.
pub fn aitken(x0: f64, x1: f64, x2: f64) -> f64 {
    let d1 = x1 - x0;
    let d2 = x2 - x1;
    let dd = d2 - d1;
    if dd.abs() < 1e-300 {
        x2
    } else {
        let out = x2 - d2 * d2 / dd;
        if out.is_finite() {
            out
        } else {
            x2
        }
    }
}

/// Signed trend per decade of time between the first and last window.
fn slope_per_decade(mids: &[f64], series: &[f64]) -> f64 {
    let t0 = mids[0].max(1e-9);
    let t1 = mids[mids.len() - 1].max(t0 * 1.0001);
    let decades = (t1 / t0).log10().max(0.05);
    (series[series.len() - 1] - series[0]) / decades
}

fn mostly_monotone_up(series: &[f64]) -> bool {
    let ups = series.windows(2).filter(|p| p[1] > p[0]).count();
    ups * 4 >= (series.len() - 1) * 3
}

/// Estimate the accumulation set of a real tail series.
pub fn estimate_interval(times: &[f64], values: &[f64]) -> Result<IntervalEstimate, SeriesError> {
    check_series(times, values, MIN_SAMPLES)?;
    let w = split_windows(times, values, WINDOWS);
    let gmin = values.iter().copied().fold(f64::INFINITY, f64::min);
    let gmax = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let grange = gmax - gmin;
    let scale = gmin.abs().max(gmax.abs()).max(1.0);
    let rec_eps = RECURRENCE_FRACTION * grange;

    let up = slope_per_decade(&w.mids, &w.maxs);
    let down = slope_per_decade(&w.mids, &w.mins);
    let max_recurs = w.maxs.iter().all(|m| *m >= gmax - rec_eps);
    let min_recurs = w.mins.iter().all(|m| *m <= gmin + rec_eps);
    let diag = IntervalDiagnostics {
        windows: WINDOWS,
        window_mins: w.mins.clone(),
        window_maxs: w.maxs.clone(),
        window_ranges: w.ranges.clone(),
        recurrence_eps: rec_eps,
        max_slope_per_decade: up,
        min_slope_per_decade: down,
        max_recurs,
        min_recurs,
    };
    let done = |kind, lo, hi| Ok(IntervalEstimate { kind, lo, hi, diagnostics: diag.clone() });

    // Point: already settled, or window ranges decaying toward zero.
    if grange <= 1e-9 * scale {
        let v = aitken(w.means[WINDOWS - 3], w.means[WINDOWS - 2], w.means[WINDOWS - 1]);
        return done(IntervalKind::Point, Some(v), Some(v));
    }
    let decays = w.ranges.windows(2).filter(|p| p[1] <= p[0] * 1.05).count() >= WINDOWS - 2;
    if decays
        && w.ranges[WINDOWS - 1] <= POINT_DECAY_RATIO * w.ranges[0].max(1e-300)
        && w.ranges[WINDOWS - 1] <= POINT_DECAY_RATIO * grange
    {
        let v = aitken(w.means[WINDOWS - 3], w.means[WINDOWS - 2], w.means[WINDOWS - 1]);
        return done(IntervalKind::Point, Some(v), Some(v));
    }

    let sig = SLOPE_SIGNIFICANCE * grange;
    let diverge_up = up > sig && mostly_monotone_up(&w.maxs);
    let diverge_down = -down > sig && mostly_monotone_up(&w.mins.iter().map(|m| -m).collect::<Vec<_>>());
    let max_settled = up.abs() <= sig;
    let min_settled = down.abs() <= sig;

    match (diverge_up, diverge_down) {
        (true, true) => done(IntervalKind::FullLine, None, None),
        (true, false) if min_recurs && min_settled => {
            done(IntervalKind::UnboundedAbove, Some(gmin), None)
        }
        (false, true) if max_recurs && max_settled => {
            done(IntervalKind::UnboundedBelow, None, Some(gmax))
        }
        (false, false) if max_recurs && min_recurs && max_settled && min_settled => {
            done(IntervalKind::Compact, Some(gmin), Some(gmax))
        }
        _ => done(IntervalKind::Inconclusive, None, None),
    }
}

/// Whether a series runs away to `+infinity`: its windowed minima climb with
/// a significant positive trend. Used for the trajectory-to-the-Denjoy-Wolff
/// point tests, where the whole tail must leave every bounded set.
pub fn diverges_to_plus_infinity(times: &[f64], values: &[f64]) -> Result<bool, SeriesError> {
    check_series(times, values, MIN_TREND_SAMPLES)?;
    let w = split_windows(times, values, WINDOWS);
    let gmin = values.iter().copied().fold(f64::INFINITY, f64::min);
    let gmax = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let grange = gmax - gmin;
    let slope = slope_per_decade(&w.mids, &w.mins);
    let sig = SLOPE_SIGNIFICANCE * grange.max(gmin.abs()).max(1.0);
    Ok(mostly_monotone_up(&w.mins) && slope > sig)
}

/// Trend of a monotone series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Trend {
    Converged(f64),
    Diverging,
    Ambiguous,
}

/// Split a monotone tail into halves and compare late and early growth; a
/// late/early increment ratio near one means divergence, near zero means
/// convergence, the gray zone stays ambiguous.
pub fn monotone_trend(times: &[f64], values: &[f64]) -> Result<Trend, SeriesError> {
    check_series(times, values, MIN_TREND_SAMPLES)?;
    let w = split_windows(times, values, WINDOWS);
    let q1 = w.means[0];
    let q2 = w.means[WINDOWS / 2];
    let q3 = w.means[WINDOWS - 1];
    let d1 = q2 - q1;
    let d2 = q3 - q2;
    let scale = q1.abs().max(q3.abs()).max(1.0);
    // A drift of the window means that is negligible against the raw
    // variability of the tail is rounding noise, not a trend.
    let gmin = values.iter().copied().fold(f64::INFINITY, f64::min);
    let gmax = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let noise_floor = (1e-9 * scale).max(0.02 * (gmax - gmin));
    if (q3 - q1).abs() <= noise_floor {
        return Ok(Trend::Converged(values[values.len() - 1]));
    }
    let ratio = d2 / d1;
    if !ratio.is_finite() {
        return Ok(Trend::Ambiguous);
    }
    if ratio.abs() < 0.3 {
        Ok(Trend::Converged(aitken(w.means[WINDOWS - 3], w.means[WINDOWS - 2], w.means[WINDOWS - 1])))
    } else if ratio > 0.7 {
        Ok(Trend::Diverging)
    } else {
        Ok(Trend::Ambiguous)
    }
}
