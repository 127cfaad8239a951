//! Asymptotic classification of evolution-family trajectories.
//!
//! Every trajectory of a non-trivial family with a common Denjoy-Wolff point
//! falls into exactly one case: convergence to the Denjoy-Wolff point
//! (case 1), convergence to a univalent limit (case 2), or an omega-limit
//! set that is a circle or closed circular arc (case 3, with subcases). For
//! boundary families the supporting circle bounds a horocycle at the
//! Denjoy-Wolff point; for inner families it bounds a hyperbolic disk
//! centered there.
//!
//! The classifier works in half-plane coordinates for boundary families
//! (real part monotone, imaginary part carrying the arc data) and in
//! modulus/unwrapped-argument coordinates for inner families. All set-shape
//! decisions defer to the window diagnostics in [`interval`]; anything the
//! diagnostics cannot settle is reported as inconclusive, never guessed.

pub mod interval;
mod spectral;

pub use interval::{
    aitken, diverges_to_plus_infinity, estimate_interval, monotone_trend, IntervalDiagnostics,
    IntervalEstimate, IntervalKind, SeriesError, Trend,
};
pub use spectral::{
    arg_omega_vs_lambda, spectral_function, ArgOmegaReport, SpectralLimit, SpectralSamples,
};

use crate::evolution::{
    default_pair_probes, isometry_test, sample_trajectory, Domain, DwPoint, EvolutionFamily,
    EvolveError, IntegratorConfig,
};
use crate::hypgeo::{
    horocycle_geometry, hyp_dist_disk, mobius_involution_raw, BoundaryPoint, ClosedArc, DiskPoint,
    EuclideanCircle, GeoError, Horocycle,
};
use num_complex::Complex64;
use std::f64::consts::PI;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ClassifyError {
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    Evolve(#[from] EvolveError),
    #[error(transparent)]
    Geometry(#[from] GeoError),
    #[error("family has no declared Denjoy-Wolff point")]
    MissingDenjoyWolff,
    #[error("family Denjoy-Wolff point {family:?} does not match requested {requested}")]
    TauMismatch { family: DwPoint, requested: Complex64 },
    #[error("operation requires a boundary Denjoy-Wolff point")]
    NotBoundary,
    #[error("operation requires an inner Denjoy-Wolff point")]
    NotInner,
    #[error("trajectory starts at the Denjoy-Wolff point")]
    StartAtTau,
    #[error("argument unwrap step {delta} at t = {t} exceeds the branch guard; refine the grid")]
    BranchStep { t: f64, delta: f64 },
    #[error("family classification not uniform: {0}")]
    NotUniform(String),
    #[error("not applicable: {0}")]
    NotApplicable(&'static str),
    #[error("family is not of automorphic type on the probed range")]
    NotAutomorphic,
    #[error("horizon {horizon} leaves no tail beyond the transient cutoff {cutoff}")]
    HorizonTooShort { horizon: f64, cutoff: f64 },
    #[error("spectral derivative estimate failed: {0}")]
    Spectral(String),
}

/// Case labels of the classification taxonomy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CaseLabel {
    One,
    Two,
    ThreeA,
    ThreeB,
    ThreeC,
    Inconclusive,
}

impl CaseLabel {
    pub fn as_str(&self) -> &'static str {
        match self {
            CaseLabel::One => "1",
            CaseLabel::Two => "2",
            CaseLabel::ThreeA => "3a",
            CaseLabel::ThreeB => "3b",
            CaseLabel::ThreeC => "3c",
            CaseLabel::Inconclusive => "inconclusive",
        }
    }
}

impl fmt::Display for CaseLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Which side of the taxonomy applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    Boundary,
    Inner,
}

/// Knobs of the classification pipeline. The integrator settings double as
/// the trajectory sampling controls.
#[derive(Debug, Clone, Copy)]
pub struct ClassifyConfig {
    pub integrator: IntegratorConfig,
    /// The transient `[s, max(s + transient_min, transient_fraction * T)]`
    /// is discarded before any set estimation.
    pub transient_min: f64,
    pub transient_fraction: f64,
}

impl Default for ClassifyConfig {
    fn default() -> Self {
        Self { integrator: IntegratorConfig::default(), transient_min: 10.0, transient_fraction: 0.25 }
    }
}

impl ClassifyConfig {
    pub fn with_horizon(horizon: f64) -> Self {
        Self {
            integrator: IntegratorConfig { horizon, ..IntegratorConfig::default() },
            ..Self::default()
        }
    }

    pub fn horizon(&self) -> f64 {
        self.integrator.horizon
    }

    pub fn transient_cutoff(&self, s: f64) -> f64 {
        (s + self.transient_min).max(self.transient_fraction * self.horizon())
    }
}

/// Evidence and side results attached to one omega-limit estimate.
#[derive(Debug, Clone, Default)]
pub struct OmegaDiagnostics {
    pub horizon: f64,
    pub transient_cutoff: f64,
    pub samples: usize,
    pub tail_samples: usize,
    pub warnings: Vec<String>,
    pub notes: Vec<String>,
}

/// Estimated omega-limit of one trajectory, with its geometric payload.
#[derive(Debug, Clone)]
pub struct OmegaLimitEstimate {
    pub regime: Regime,
    pub case: CaseLabel,
    /// Boundary: the limit `R_inf` of the half-plane real part. Inner: the
    /// Euclidean radius of the centered limit circle.
    pub re_limit: Option<f64>,
    /// Shape of the accumulation set of the half-plane imaginary part
    /// (boundary) or of the unwrapped argument (inner); absent in case 1.
    pub interval: Option<IntervalEstimate>,
    /// Horocycle factor `k(s, z) = 1/R_inf` (boundary case 3).
    pub k: Option<f64>,
    /// Hyperbolic radius of the limit circle (inner case 3).
    pub r: Option<f64>,
    /// Angular extent of the limit arc: the imaginary-interval length for
    /// boundary proper arcs, the argument-interval length (or `2 pi`) for
    /// inner circles and arcs.
    pub theta: Option<f64>,
    /// Euclidean realization of the limit arc in disk coordinates.
    pub arc: Option<ClosedArc>,
    /// Limit point for cases 1 and 2, in the family's own coordinates.
    pub limit_point: Option<Complex64>,
    pub diagnostics: OmegaDiagnostics,
}

fn tail_range(traj_times: &[f64], cutoff: f64) -> std::ops::Range<usize> {
    let start = traj_times.partition_point(|t| *t < cutoff);
    start..traj_times.len()
}

/// Extrapolate the limit of a convergent tail from its last three samples;
/// the correction assumes `value ~ L + c/t` and is skipped unless the tail is
/// locally monotone.
fn tail_limit(times: &[f64], values: &[f64]) -> f64 {
    let n = values.len();
    if n < 3 {
        return values[n - 1];
    }
    let (v0, v1, v2) = (values[n - 3], values[n - 2], values[n - 1]);
    let (t1, t2) = (times[n - 2], times[n - 1]);
    let monotone = (v2 - v1) * (v1 - v0) >= 0.0 && (v2 - v1).abs() <= (v1 - v0).abs();
    if monotone && (t2 - t1) > 0.0 {
        v2 + (v2 - v1) * t1 / (t2 - t1)
    } else {
        v2
    }
}

fn tail_limit_complex(times: &[f64], values: &[Complex64]) -> Complex64 {
    let re: Vec<f64> = values.iter().map(|v| v.re).collect();
    let im: Vec<f64> = values.iter().map(|v| v.im).collect();
    Complex64::new(tail_limit(times, &re), tail_limit(times, &im))
}

fn note_nominal_disagreement(family: &EvolutionFamily, case: CaseLabel, notes: &mut Vec<String>) {
    if let Some(id) = family.catalog_id() {
        let nominal = id.nominal_label();
        if case != CaseLabel::Inconclusive && case.as_str() != nominal {
            notes.push(format!(
                "catalog entry {id} is annotated as case {nominal}, but the measured accumulation set gives case {case}; the annotation does not match the computed dynamics"
            ));
        }
    }
}

/// Pick the arc of `circle` running from `th_a` to `th_b` through `th_mid`.
fn arc_through(circle: EuclideanCircle, th_a: f64, th_b: f64, th_mid: f64) -> Result<ClosedArc, GeoError> {
    let two_pi = 2.0 * PI;
    let a = th_a.rem_euclid(two_pi);
    let mut b = th_b.rem_euclid(two_pi);
    if b <= a {
        b += two_pi;
    }
    let mut m = th_mid.rem_euclid(two_pi);
    if m < a {
        m += two_pi;
    }
    if m <= b {
        ClosedArc::new(circle, a, b)
    } else {
        ClosedArc::new(circle, b, a + two_pi)
    }
}

/// Classify a trajectory of a family with boundary Denjoy-Wolff point.
///
/// The trajectory is transported to the right half-plane, where the real
/// part is non-decreasing. Escape to infinity is case 1; otherwise the real
/// part settles at `R_inf` and the accumulation set of the imaginary part
/// decides among convergence (case 2), a full horocycle boundary (3a), a
/// proper arc with the Denjoy-Wolff point as an endpoint (3b), and a proper
/// arc inside the disk (3c).
pub fn classify_boundary(
    family: &EvolutionFamily,
    tau: BoundaryPoint,
    s: f64,
    z: Complex64,
    cfg: &ClassifyConfig,
) -> Result<OmegaLimitEstimate, ClassifyError> {
    match family.dw() {
        Some(DwPoint::Boundary(c)) => {
            if (c - tau.value()).norm() > 1e-9 {
                return Err(ClassifyError::TauMismatch {
                    family: DwPoint::Boundary(c),
                    requested: tau.value(),
                });
            }
        }
        Some(DwPoint::Infinity) => {}
        Some(other) => {
            return Err(ClassifyError::TauMismatch { family: other, requested: tau.value() })
        }
        None => return Err(ClassifyError::MissingDenjoyWolff),
    }

    let cutoff = cfg.transient_cutoff(s);
    if cutoff >= cfg.horizon() {
        return Err(ClassifyError::HorizonTooShort { horizon: cfg.horizon(), cutoff });
    }
    let traj = sample_trajectory(family, s, z, &cfg.integrator)?;

    // Half-plane coordinates of the trajectory.
    let tv = tau.value();
    let w_series: Vec<Complex64> = match family.domain() {
        Domain::HalfPlane => traj.points.clone(),
        Domain::Disk => traj.points.iter().map(|p| (tv + p) / (tv - p)).collect(),
    };
    let w0 = w_series[0];
    let range = tail_range(&traj.times, cutoff);
    let times: Vec<f64> = traj.times[range.clone()].to_vec();
    let abs_w: Vec<f64> = w_series[range.clone()].iter().map(|w| w.norm()).collect();
    let re_w: Vec<f64> = w_series[range.clone()].iter().map(|w| w.re).collect();
    let im_w: Vec<f64> = w_series[range.clone()].iter().map(|w| w.im).collect();

    let mut diagnostics = OmegaDiagnostics {
        horizon: cfg.horizon(),
        transient_cutoff: cutoff,
        samples: traj.times.len(),
        tail_samples: times.len(),
        warnings: Vec::new(),
        notes: Vec::new(),
    };

    let case1 = |mut diagnostics: OmegaDiagnostics, note: &str| {
        diagnostics.notes.push(note.to_string());
        let mut est = OmegaLimitEstimate {
            regime: Regime::Boundary,
            case: CaseLabel::One,
            re_limit: None,
            interval: None,
            k: None,
            r: None,
            theta: None,
            arc: None,
            limit_point: Some(match family.domain() {
                Domain::Disk => tv,
                Domain::HalfPlane => Complex64::new(f64::INFINITY, 0.0),
            }),
            diagnostics,
        };
        note_nominal_disagreement(family, CaseLabel::One, &mut est.diagnostics.notes);
        est
    };

    // Escape test: the whole tail leaves every bounded set.
    if diverges_to_plus_infinity(&times, &abs_w)? {
        return Ok(case1(diagnostics, "trajectory diverges to the Denjoy-Wolff point"));
    }
    // Real-part dichotomy: non-decreasing, so it either diverges or settles.
    let r_inf = match monotone_trend(&times, &re_w)? {
        Trend::Diverging => {
            return Ok(case1(diagnostics, "half-plane real part diverges"));
        }
        Trend::Converged(l) => l,
        Trend::Ambiguous => {
            diagnostics.warnings.push("half-plane real part trend is ambiguous".into());
            let mut est = OmegaLimitEstimate {
                regime: Regime::Boundary,
                case: CaseLabel::Inconclusive,
                re_limit: None,
                interval: None,
                k: None,
                r: None,
                theta: None,
                arc: None,
                limit_point: None,
                diagnostics,
            };
            est.diagnostics.notes.push("real-part trend between convergence and divergence".into());
            return Ok(est);
        }
    };

    let im_est = estimate_interval(&times, &im_w)?;
    let k = 1.0 / r_inf;
    let z_disk_start = match family.domain() {
        Domain::Disk => z,
        Domain::HalfPlane => tv * (w0 - 1.0) / (w0 + 1.0),
    };
    let k_bound = (tv - z_disk_start).norm_sqr() / (1.0 - z_disk_start.norm_sqr());

    let horocycle = Horocycle::new(tau, k).map_err(ClassifyError::Geometry)?;
    let circle = horocycle_geometry(&horocycle);
    let angle_of = |y: f64| {
        let w = Complex64::new(r_inf, y);
        let zz = tv * (w - 1.0) / (w + 1.0);
        (zz - circle.center).arg()
    };

    let (case, theta, arc, limit_point, interval) = match im_est.kind {
        IntervalKind::Point => {
            let y = tail_limit(&times, &im_w);
            let w_lim = Complex64::new(r_inf, y);
            let lim = match family.domain() {
                Domain::Disk => tv * (w_lim - 1.0) / (w_lim + 1.0),
                Domain::HalfPlane => w_lim,
            };
            (CaseLabel::Two, None, None, Some(lim), im_est)
        }
        IntervalKind::Compact => {
            let (lo, hi) = (im_est.lo.unwrap(), im_est.hi.unwrap());
            let arc = arc_through(circle, angle_of(lo), angle_of(hi), angle_of(0.5 * (lo + hi)))?;
            (CaseLabel::ThreeC, Some(hi - lo), Some(arc), None, im_est)
        }
        IntervalKind::UnboundedAbove => {
            let lo = im_est.lo.unwrap();
            let contact = (tv - circle.center).arg();
            let arc = arc_through(circle, angle_of(lo), contact, angle_of(lo + 10.0 * (1.0 + r_inf)))?;
            (CaseLabel::ThreeB, None, Some(arc), None, im_est)
        }
        IntervalKind::UnboundedBelow => {
            let hi = im_est.hi.unwrap();
            let contact = (tv - circle.center).arg();
            let arc = arc_through(circle, contact, angle_of(hi), angle_of(hi - 10.0 * (1.0 + r_inf)))?;
            (CaseLabel::ThreeB, None, Some(arc), None, im_est)
        }
        IntervalKind::FullLine | IntervalKind::FullLineWithInfinity => {
            let mut est = im_est;
            est.kind = IntervalKind::FullLineWithInfinity;
            let arc = ClosedArc::new(circle, -PI, PI)?;
            (CaseLabel::ThreeA, None, Some(arc), None, est)
        }
        IntervalKind::Inconclusive => {
            diagnostics.warnings.push("imaginary-part diagnostics disagree".into());
            (CaseLabel::Inconclusive, None, None, None, im_est)
        }
    };

    let is_case3 = matches!(case, CaseLabel::ThreeA | CaseLabel::ThreeB | CaseLabel::ThreeC);
    if is_case3 && k > k_bound + 1e-8 {
        diagnostics
            .warnings
            .push(format!("horocycle factor k = {k} exceeds the Julia bound k_D = {k_bound}"));
    }
    let mut est = OmegaLimitEstimate {
        regime: Regime::Boundary,
        case,
        re_limit: Some(r_inf),
        interval: Some(interval),
        k: if is_case3 { Some(k) } else { None },
        r: None,
        theta,
        arc,
        limit_point,
        diagnostics,
    };
    note_nominal_disagreement(family, case, &mut est.diagnostics.notes);
    Ok(est)
}

/// Classify a trajectory of a family with inner Denjoy-Wolff point.
///
/// The Denjoy-Wolff point is conjugated to the origin, the modulus of the
/// centered trajectory is monotone, and the unwrapped argument carries the
/// arc data: convergence of the modulus to zero is case 1, a convergent
/// argument is case 2, an argument sweeping a full turn (or diverging) gives
/// the full circle 3a, and a compact argument interval shorter than `2 pi`
/// gives the proper-arc case 3b.
pub fn classify_inner(
    family: &EvolutionFamily,
    tau: DiskPoint,
    s: f64,
    z: Complex64,
    cfg: &ClassifyConfig,
) -> Result<OmegaLimitEstimate, ClassifyError> {
    match family.dw() {
        Some(DwPoint::Inner(c)) => {
            if (c - tau.value()).norm() > 1e-9 {
                return Err(ClassifyError::TauMismatch {
                    family: DwPoint::Inner(c),
                    requested: tau.value(),
                });
            }
        }
        Some(other) => return Err(ClassifyError::TauMismatch { family: other, requested: tau.value() }),
        None => return Err(ClassifyError::MissingDenjoyWolff),
    }
    if family.domain() != Domain::Disk {
        return Err(ClassifyError::NotInner);
    }
    let tv = tau.value();
    if (z - tv).norm() < 1e-9 {
        return Err(ClassifyError::StartAtTau);
    }
    let cutoff = cfg.transient_cutoff(s);
    if cutoff >= cfg.horizon() {
        return Err(ClassifyError::HorizonTooShort { horizon: cfg.horizon(), cutoff });
    }

    let traj = sample_trajectory(family, s, z, &cfg.integrator)?;
    let centered = tv.norm() > 1e-12;
    let u_series: Vec<Complex64> = if centered {
        traj.points.iter().map(|p| mobius_involution_raw(tv, *p)).collect()
    } else {
        traj.points.clone()
    };
    let range = tail_range(&traj.times, cutoff);
    let times: Vec<f64> = traj.times[range.clone()].to_vec();
    let m_series: Vec<f64> = u_series[range.clone()].iter().map(|u| u.norm().max(1e-290)).collect();

    let mut diagnostics = OmegaDiagnostics {
        horizon: cfg.horizon(),
        transient_cutoff: cutoff,
        samples: traj.times.len(),
        tail_samples: times.len(),
        warnings: Vec::new(),
        notes: Vec::new(),
    };

    // Case 1: the centered modulus dies out.
    let neg_log_m: Vec<f64> = m_series.iter().map(|m| -m.ln()).collect();
    let max_m = m_series.iter().copied().fold(0.0f64, f64::max);
    if max_m < 1e-100 || diverges_to_plus_infinity(&times, &neg_log_m)? {
        let mut est = OmegaLimitEstimate {
            regime: Regime::Inner,
            case: CaseLabel::One,
            re_limit: None,
            interval: None,
            k: None,
            r: None,
            theta: None,
            arc: None,
            limit_point: Some(tv),
            diagnostics,
        };
        est.diagnostics.notes.push("centered modulus decays to zero".into());
        note_nominal_disagreement(family, CaseLabel::One, &mut est.diagnostics.notes);
        return Ok(est);
    }

    // The modulus is monotone and bounded away from zero now.
    let r_inf = match monotone_trend(&times, &m_series)? {
        Trend::Converged(l) => l.clamp(0.0, 1.0),
        Trend::Diverging => {
            diagnostics.warnings.push("centered modulus fails to settle".into());
            return Ok(OmegaLimitEstimate {
                regime: Regime::Inner,
                case: CaseLabel::Inconclusive,
                re_limit: None,
                interval: None,
                k: None,
                r: None,
                theta: None,
                arc: None,
                limit_point: None,
                diagnostics,
            });
        }
        Trend::Ambiguous => {
            diagnostics.warnings.push("centered modulus trend is ambiguous".into());
            return Ok(OmegaLimitEstimate {
                regime: Regime::Inner,
                case: CaseLabel::Inconclusive,
                re_limit: None,
                interval: None,
                k: None,
                r: None,
                theta: None,
                arc: None,
                limit_point: None,
                diagnostics,
            });
        }
    };

    // Unwrapped argument with branch guard.
    let tail_u = &u_series[range.clone()];
    let mut args = Vec::with_capacity(tail_u.len());
    let mut a = tail_u[0].arg();
    args.push(a);
    for (idx, u) in tail_u.iter().enumerate().skip(1) {
        let raw = u.arg() - tail_u[idx - 1].arg();
        let delta = raw - (raw / (2.0 * PI)).round() * 2.0 * PI;
        if delta.abs() > 0.99 * PI {
            return Err(ClassifyError::BranchStep { t: times[idx], delta });
        }
        a += delta;
        args.push(a);
    }

    let hyp_radius = ((1.0 + r_inf) / (1.0 - r_inf)).ln();
    let r_bound = hyp_dist_disk(DiskPoint::new(tv).map_err(ClassifyError::Geometry)?, DiskPoint::new(z).map_err(ClassifyError::Geometry)?);

    // Geometry of the limit circle back in the original coordinates.
    let limit_circle = if centered {
        let u_dir = tv / tv.norm();
        let p1 = mobius_involution_raw(tv, r_inf * u_dir);
        let p2 = mobius_involution_raw(tv, -r_inf * u_dir);
        EuclideanCircle { center: 0.5 * (p1 + p2), radius: 0.5 * (p1 - p2).norm() }
    } else {
        EuclideanCircle { center: Complex64::new(0.0, 0.0), radius: r_inf.max(1e-300) }
    };
    let angle_of = |arg: f64| {
        let u = Complex64::from_polar(r_inf, arg);
        let zz = if centered { mobius_involution_raw(tv, u) } else { u };
        (zz - limit_circle.center).arg()
    };

    // Endless winding covers the whole circle.
    let neg_args: Vec<f64> = args.iter().map(|a| -a).collect();
    let winding = diverges_to_plus_infinity(&times, &args)?
        || diverges_to_plus_infinity(&times, &neg_args)?;

    let full_circle = |mut diagnostics: OmegaDiagnostics, interval: Option<IntervalEstimate>| {
        let arc = ClosedArc::new(limit_circle, -PI, PI).map_err(ClassifyError::Geometry)?;
        let mut est = OmegaLimitEstimate {
            regime: Regime::Inner,
            case: CaseLabel::ThreeA,
            re_limit: Some(r_inf),
            interval,
            k: None,
            r: Some(hyp_radius),
            theta: Some(2.0 * PI),
            arc: Some(arc),
            limit_point: None,
            diagnostics: std::mem::take(&mut diagnostics),
        };
        note_nominal_disagreement(family, CaseLabel::ThreeA, &mut est.diagnostics.notes);
        Ok::<_, ClassifyError>(est)
    };
    if winding {
        diagnostics.notes.push("argument winds without bound".into());
        return full_circle(diagnostics, None);
    }

    let arg_est = estimate_interval(&times, &args)?;
    let (case, theta, arc, limit_point) = match arg_est.kind {
        IntervalKind::Point => {
            let a_lim = tail_limit(&times, &args);
            let u_lim = Complex64::from_polar(r_inf, a_lim);
            let lim = if centered { mobius_involution_raw(tv, u_lim) } else { u_lim };
            // Refine with the direct complex tail limit, which also captures
            // radial extrapolation.
            let direct = tail_limit_complex(&times, &u_series[range.clone()]);
            let lim = if (direct - u_lim).norm() < 0.1 {
                if centered {
                    mobius_involution_raw(tv, direct)
                } else {
                    direct
                }
            } else {
                lim
            };
            (CaseLabel::Two, None, None, Some(lim))
        }
        IntervalKind::Compact => {
            let (lo, hi) = (arg_est.lo.unwrap(), arg_est.hi.unwrap());
            if hi - lo >= 2.0 * PI {
                diagnostics.notes.push("argument interval covers a full turn".into());
                let mut out = full_circle(diagnostics, Some(arg_est))?;
                out.re_limit = Some(r_inf);
                return Ok(out);
            }
            let arc = arc_through(limit_circle, angle_of(lo), angle_of(hi), angle_of(0.5 * (lo + hi)))?;
            (CaseLabel::ThreeB, Some(hi - lo), Some(arc), None)
        }
        IntervalKind::UnboundedAbove | IntervalKind::UnboundedBelow | IntervalKind::FullLine | IntervalKind::FullLineWithInfinity => {
            diagnostics.notes.push("argument interval is unbounded".into());
            return full_circle(diagnostics, Some(arg_est));
        }
        IntervalKind::Inconclusive => {
            diagnostics.warnings.push("argument diagnostics disagree".into());
            (CaseLabel::Inconclusive, None, None, None)
        }
    };

    let is_case3 = matches!(case, CaseLabel::ThreeA | CaseLabel::ThreeB);
    if is_case3 && hyp_radius > r_bound + 1e-8 {
        diagnostics.warnings.push(format!(
            "hyperbolic radius r = {hyp_radius} exceeds the Schwarz-Pick bound {r_bound}"
        ));
    }
    let mut est = OmegaLimitEstimate {
        regime: Regime::Inner,
        case,
        re_limit: Some(r_inf),
        interval: Some(arg_est),
        k: None,
        r: if is_case3 { Some(hyp_radius) } else { None },
        theta,
        arc,
        limit_point,
        diagnostics,
    };
    note_nominal_disagreement(family, case, &mut est.diagnostics.notes);
    Ok(est)
}

/// Classify one `(s, z)` scenario, dispatching on the family's declared
/// Denjoy-Wolff point.
pub fn classify_point(
    family: &EvolutionFamily,
    s: f64,
    z: Complex64,
    cfg: &ClassifyConfig,
) -> Result<OmegaLimitEstimate, ClassifyError> {
    match family.dw() {
        Some(DwPoint::Boundary(c)) => {
            let tau = BoundaryPoint::new(c).map_err(ClassifyError::Geometry)?;
            classify_boundary(family, tau, s, z, cfg)
        }
        Some(DwPoint::Infinity) => {
            classify_boundary(family, BoundaryPoint::one(), s, z, cfg)
        }
        Some(DwPoint::Inner(c)) => {
            let tau = DiskPoint::new(c).map_err(ClassifyError::Geometry)?;
            classify_inner(family, tau, s, z, cfg)
        }
        None => Err(ClassifyError::MissingDenjoyWolff),
    }
}

/// Constancy report of the angular-extent invariant over an `(s, z)` grid.
#[derive(Debug, Clone)]
pub struct ThetaReport {
    pub case: CaseLabel,
    pub values: Vec<f64>,
    pub spread: f64,
}

/// Estimate the arc extent independently at every grid point. The extent is
/// a family invariant in the proper-arc regimes, so the labels must agree
/// across the grid; a mixture is a numerical failure, never averaged away.
pub fn theta_invariant(
    family: &EvolutionFamily,
    grid: &[(f64, Complex64)],
    cfg: &ClassifyConfig,
) -> Result<ThetaReport, ClassifyError> {
    let mut labels = Vec::new();
    let mut values = Vec::new();
    for &(s, z) in grid {
        let est = classify_point(family, s, z, cfg)?;
        labels.push(est.case);
        if let Some(theta) = est.theta {
            values.push(theta);
        }
    }
    let first = labels[0];
    if labels.iter().any(|l| *l != first) {
        let detail: Vec<String> = grid
            .iter()
            .zip(&labels)
            .map(|((s, z), l)| format!("(s={s}, z={z}) -> {l}"))
            .collect();
        return Err(ClassifyError::NotUniform(detail.join(", ")));
    }
    let arc_case = matches!(
        (labels[0], family.dw()),
        (CaseLabel::ThreeC, Some(DwPoint::Boundary(_)) | Some(DwPoint::Infinity))
            | (CaseLabel::ThreeB, Some(DwPoint::Inner(_)))
    );
    if !arc_case || values.len() != grid.len() {
        return Err(ClassifyError::NotApplicable(
            "extent constancy applies to the proper-arc regimes only",
        ));
    }
    let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    Ok(ThetaReport { case: first, values, spread: hi - lo })
}

/// Outcome of the non-tangential convergence test.
#[derive(Debug, Clone, Copy)]
pub struct NontangentialReport {
    pub flag: bool,
    pub sup_angle: f64,
}

/// For a trajectory converging to a boundary Denjoy-Wolff point, measure the
/// supremum of `|Arg(1 - conj(tau) phi_{s,t}(z))|` over the sampled tail and
/// flag approach inside a Stolz angle (margin 0.01 rad below `pi/2`).
pub fn nontangential_check(
    family: &EvolutionFamily,
    tau: BoundaryPoint,
    s: f64,
    z: Complex64,
    cfg: &ClassifyConfig,
) -> Result<NontangentialReport, ClassifyError> {
    if family.domain() != Domain::Disk {
        return Err(ClassifyError::NotApplicable("requires a disk-domain family"));
    }
    let est = classify_boundary(family, tau, s, z, cfg)?;
    if est.case != CaseLabel::One {
        return Err(ClassifyError::NotApplicable("not applicable: trajectory does not converge to the Denjoy-Wolff point"));
    }
    let traj = sample_trajectory(family, s, z, &cfg.integrator)?;
    let cutoff = cfg.transient_cutoff(s);
    let range = tail_range(&traj.times, cutoff);
    let tv = tau.value();
    let angles: Vec<f64> = traj.points[range]
        .iter()
        .map(|p| (Complex64::new(1.0, 0.0) - tv.conj() * p).arg().abs())
        .collect();
    let sup = angles.iter().copied().fold(0.0f64, f64::max);
    // Guard against a supremum still creeping upward at the horizon.
    let half = angles.len() / 2;
    let sup_early = angles[..half].iter().copied().fold(0.0f64, f64::max);
    let sup_late = angles[half..].iter().copied().fold(0.0f64, f64::max);
    let stabilized = sup_late <= sup_early + 1e-3;
    Ok(NontangentialReport { flag: sup < PI / 2.0 - 0.01 && stabilized, sup_angle: sup })
}

/// Structure report for a family of automorphic type.
#[derive(Debug, Clone)]
pub enum AutomorphicReport {
    Boundary {
        /// Residual of the affine fit `phi^H_{s,t}(w) = mu w + i b`.
        affine_residual: f64,
        /// How far the fitted additive constant strays from the imaginary axis.
        re_b_residual: f64,
        /// Largest disagreement between the classifier's horocycle factor and
        /// the spectral formula `k = e^{Re lambda(s) - L} k_D(tau, z)`, when a
        /// proper-arc or full-circle regime applies.
        k_formula_error: Option<f64>,
    },
    Inner {
        lambda_imaginary: bool,
        max_abs_re_lambda: f64,
        case: CaseLabel,
        note: Option<String>,
    },
}

/// Check the rigid structure automorphic-type families must carry: affine
/// half-plane form with real translation part and spectral horocycle factors
/// in the boundary regime; purely imaginary spectral function and rotation
/// dynamics in the inner regime.
pub fn automorphic_reports(
    family: &EvolutionFamily,
    cfg: &ClassifyConfig,
) -> Result<AutomorphicReport, ClassifyError> {
    let pairs = default_pair_probes(family.domain());
    for (s, dt) in [(0.0, 0.5), (0.0, 3.0), (1.0, 2.0), (2.5, 5.0)] {
        if !isometry_test(family, s, s + dt, &pairs)?.automorphic {
            return Err(ClassifyError::NotAutomorphic);
        }
    }
    match family.dw() {
        Some(DwPoint::Boundary(_)) | Some(DwPoint::Infinity) => {
            let tau = match family.dw() {
                Some(DwPoint::Boundary(c)) => BoundaryPoint::new(c).map_err(ClassifyError::Geometry)?,
                _ => BoundaryPoint::one(),
            };
            let tv = tau.value();
            let half_eval = |s: f64, t: f64, w: Complex64| -> Result<Complex64, ClassifyError> {
                match family.domain() {
                    Domain::HalfPlane => Ok(family.eval(s, t, w)?),
                    Domain::Disk => {
                        let z = tv * (w - 1.0) / (w + 1.0);
                        let img = family.eval(s, t, z)?;
                        Ok((tv + img) / (tv - img))
                    }
                }
            };
            let probes = [Complex64::new(1.0, 0.0), Complex64::new(2.0, 1.0), Complex64::new(0.5, -2.0)];
            let mut affine_residual = 0.0f64;
            let mut re_b_residual = 0.0f64;
            let mut lambdas = Vec::new();
            for (s, t) in [(0.0, 1.0), (0.0, 6.0), (1.5, 4.0), (2.0, 9.0)] {
                let f0 = half_eval(s, t, probes[0])?;
                let f1 = half_eval(s, t, probes[1])?;
                let f2 = half_eval(s, t, probes[2])?;
                let mu = (f1 - f0) / (probes[1] - probes[0]);
                let beta = f0 - mu * probes[0];
                affine_residual = affine_residual.max((f2 - (mu * probes[2] + beta)).norm());
                re_b_residual = re_b_residual.max(beta.re.abs());
                if s == 0.0 {
                    lambdas.push((t, mu.norm().ln()));
                }
            }
            // Spectral factor formula against the classifier, when a
            // case-3 regime is present.
            let l_tail = lambdas.last().map(|(_, l)| *l).unwrap_or(0.0);
            let mut k_formula_error = None;
            let z_probe = match family.domain() {
                Domain::Disk => Complex64::new(0.0, 0.0),
                Domain::HalfPlane => Complex64::new(1.0, 0.0),
            };
            for s in [0.0, 1.0] {
                let est = classify_point(family, s, z_probe, cfg)?;
                if let Some(k_measured) = est.k {
                    let lambda_s = 0.0; // spectral normalization at the probe start
                    let z_disk = match family.domain() {
                        Domain::Disk => z_probe,
                        Domain::HalfPlane => {
                            let w = z_probe;
                            tv * (w - 1.0) / (w + 1.0)
                        }
                    };
                    let k_d = (tv - z_disk).norm_sqr() / (1.0 - z_disk.norm_sqr());
                    let k_formula = (lambda_s - l_tail).exp() * k_d;
                    let err = (k_measured - k_formula).abs();
                    k_formula_error = Some(k_formula_error.map_or(err, |e: f64| e.max(err)));
                }
            }
            Ok(AutomorphicReport::Boundary { affine_residual, re_b_residual, k_formula_error })
        }
        Some(DwPoint::Inner(_)) => {
            let grid: Vec<f64> = (0..=400).map(|k| k as f64 * 0.05).collect();
            let spectral = spectral_function(family, &grid)?;
            let max_abs_re = spectral.lambda.iter().map(|l| l.re.abs()).fold(0.0f64, f64::max);
            let lambda_imaginary = max_abs_re < 1e-6;
            let est = classify_point(family, 0.0, Complex64::new(0.5, 0.0), cfg)?;
            let note = match est.case {
                CaseLabel::ThreeB => Some(
                    "rotation family with a proper-arc limit set; the rotation structure holds while the swept angle stays short of a full turn"
                        .to_string(),
                ),
                CaseLabel::Two => Some("rotation family degenerates to a convergent limit".to_string()),
                _ => None,
            };
            Ok(AutomorphicReport::Inner { lambda_imaginary, max_abs_re_lambda: max_abs_re, case: est.case, note })
        }
        None => Err(ClassifyError::MissingDenjoyWolff),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::evolution::{catalog_family, CatalogId};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn boundary_cfg(horizon: f64) -> ClassifyConfig {
        ClassifyConfig::with_horizon(horizon)
    }

    #[test]
    fn boundary_catalog_labels() {
        let cases = [
            (CatalogId::B1, 400.0, CaseLabel::One),
            (CatalogId::B2, 400.0, CaseLabel::Two),
            (CatalogId::B3, 2000.0, CaseLabel::ThreeA),
            (CatalogId::B4Prime, 400.0, CaseLabel::ThreeB),
            (CatalogId::B5, 400.0, CaseLabel::ThreeC),
        ];
        for (id, horizon, expected) in cases {
            let fam = catalog_family(id);
            let est =
                classify_boundary(&fam, BoundaryPoint::one(), 0.0, c(0.0, 0.0), &boundary_cfg(horizon))
                    .unwrap();
            assert_eq!(est.case, expected, "{id}");
        }
    }

    #[test]
    fn b5_geometry_payload() {
        let fam = catalog_family(CatalogId::B5);
        let est =
            classify_boundary(&fam, BoundaryPoint::one(), 0.0, c(0.0, 0.0), &boundary_cfg(400.0))
                .unwrap();
        assert_eq!(est.case, CaseLabel::ThreeC);
        let k = est.k.unwrap();
        assert!((k - 1.0 / 3.0).abs() < 1e-3, "k = {k}");
        let theta = est.theta.unwrap();
        assert!((theta - 4.0).abs() < 0.05, "theta = {theta}");
        let arc = est.arc.unwrap();
        assert!(arc.is_proper());
        // The arc stays inside the disk: its circle is the horocycle boundary.
        let hor = Horocycle::new(BoundaryPoint::one(), k).unwrap();
        let circle = horocycle_geometry(&hor);
        assert!((arc.circle.center - circle.center).norm() < 1e-9);
    }

    #[test]
    fn b4_label_follows_measured_dynamics_with_note() {
        let fam = catalog_family(CatalogId::B4);
        let est =
            classify_boundary(&fam, BoundaryPoint::one(), 0.0, c(0.0, 0.0), &boundary_cfg(2000.0))
                .unwrap();
        assert_eq!(est.case, CaseLabel::ThreeA);
        assert!(
            est.diagnostics.notes.iter().any(|n| n.contains("annotated as case 3b")),
            "notes: {:?}",
            est.diagnostics.notes
        );
    }

    #[test]
    fn inner_catalog_labels() {
        let cases = [
            (CatalogId::I1, CaseLabel::One),
            (CatalogId::I2, CaseLabel::Two),
            (CatalogId::I3, CaseLabel::ThreeA),
            (CatalogId::I4, CaseLabel::ThreeB),
        ];
        for (id, expected) in cases {
            let fam = catalog_family(id);
            let est = classify_inner(
                &fam,
                DiskPoint::origin(),
                0.0,
                c(0.5, 0.0),
                &boundary_cfg(200.0),
            )
            .unwrap();
            assert_eq!(est.case, expected, "{id}");
        }
    }

    #[test]
    fn i4_arc_payload() {
        let fam = catalog_family(CatalogId::I4);
        let est =
            classify_inner(&fam, DiskPoint::origin(), 0.0, c(0.5, 0.0), &boundary_cfg(200.0)).unwrap();
        assert_eq!(est.case, CaseLabel::ThreeB);
        let theta = est.theta.unwrap();
        assert!((theta - PI).abs() < 0.02, "extent = {theta}");
        assert!((est.re_limit.unwrap() - 0.5).abs() < 1e-9);
        assert!((est.r.unwrap() - 3.0f64.ln()).abs() < 1e-6);
    }

    #[test]
    fn i2_limit_point() {
        let fam = catalog_family(CatalogId::I2);
        let cfg = ClassifyConfig {
            integrator: IntegratorConfig { horizon: 10_000.0, output_grid: 1.0, ..Default::default() },
            ..Default::default()
        };
        let est = classify_inner(&fam, DiskPoint::origin(), 0.0, c(0.5, 0.0), &cfg).unwrap();
        assert_eq!(est.case, CaseLabel::Two);
        let lim = est.limit_point.unwrap();
        let expected = 0.5 * (-PI / 2.0).exp();
        assert!((lim - c(expected, 0.0)).norm() < 1e-6, "limit {lim} vs {expected}");
    }

    #[test]
    fn inner_rejects_start_at_tau() {
        let fam = catalog_family(CatalogId::I1);
        assert!(matches!(
            classify_inner(&fam, DiskPoint::origin(), 0.0, c(0.0, 0.0), &boundary_cfg(100.0)),
            Err(ClassifyError::StartAtTau)
        ));
    }

    #[test]
    fn theta_invariant_constancy() {
        let fam = catalog_family(CatalogId::B5);
        let grid = [
            (0.0, c(0.0, 0.0)),
            (1.0, c(0.3, 0.0)),
            (2.0, c(0.0, -0.4)),
        ];
        let report = theta_invariant(&fam, &grid, &boundary_cfg(400.0)).unwrap();
        assert_eq!(report.case, CaseLabel::ThreeC);
        assert!(report.spread < 0.05, "spread {}", report.spread);
        for v in &report.values {
            assert!((v - 4.0).abs() < 0.05);
        }

        let inner = catalog_family(CatalogId::I4);
        let grid = [(0.0, c(0.5, 0.0)), (1.0, c(0.0, 0.2))];
        let report = theta_invariant(&inner, &grid, &boundary_cfg(200.0)).unwrap();
        assert!(report.spread < 0.05);
        assert!((report.values[0] - PI).abs() < 0.05);
    }

    #[test]
    fn b5_arc_extent_agrees_with_angular_extent() {
        use crate::hypgeo::{angular_extent, ArcSupport};
        let fam = catalog_family(CatalogId::B5);
        let est =
            classify_boundary(&fam, BoundaryPoint::one(), 0.0, c(0.0, 0.0), &boundary_cfg(400.0))
                .unwrap();
        let arc = est.arc.unwrap();
        let hor = Horocycle::new(BoundaryPoint::one(), est.k.unwrap()).unwrap();
        let measured = angular_extent(&arc, &ArcSupport::Horocycle(hor)).unwrap();
        let theta = est.theta.unwrap();
        assert!(
            (measured - theta).abs() < 1e-3,
            "arc length measure {measured} vs interval length {theta}"
        );
    }

    #[test]
    fn theta_invariant_reports_label_mixtures() {
        use crate::evolution::{Domain, DwPoint, EvolutionFamily};
        use std::sync::Arc;
        // A synthetic evaluator that decays inside |z| < 1/4 and rotates
        // outside: not a holomorphic family, which is exactly what a label
        // mixture across a grid must expose as a failure.
        let eval = Arc::new(|s: f64, t: f64, z: Complex64| {
            if z.norm() < 0.25 {
                Ok((Complex64::new(s - t, 0.0)).exp() * z)
            } else {
                Ok((Complex64::new(0.0, s - t)).exp() * z)
            }
        })
            as Arc<dyn Fn(f64, f64, Complex64) -> Result<Complex64, crate::evolution::EvolveError> + Send + Sync>;
        let fam = EvolutionFamily::from_closed_form(
            Domain::Disk,
            Some(DwPoint::Inner(c(0.0, 0.0))),
            eval,
            None,
            None,
            vec![],
        );
        let grid = [(0.0, c(0.1, 0.0)), (0.0, c(0.6, 0.0))];
        match theta_invariant(&fam, &grid, &boundary_cfg(200.0)) {
            Err(ClassifyError::NotUniform(detail)) => {
                assert!(detail.contains("1") && detail.contains("3a"), "{detail}");
            }
            other => panic!("expected a label-mixture error, got {other:?}"),
        }
    }

    #[test]
    fn theta_invariant_rejects_full_circle_regime() {
        let fam = catalog_family(CatalogId::I3);
        let grid = [(0.0, c(0.5, 0.0)), (1.0, c(0.0, 0.2))];
        assert!(matches!(
            theta_invariant(&fam, &grid, &boundary_cfg(200.0)),
            Err(ClassifyError::NotApplicable(_))
        ));
    }

    #[test]
    fn nontangential_b1() {
        let fam = catalog_family(CatalogId::B1);
        let report =
            nontangential_check(&fam, BoundaryPoint::one(), 0.0, c(0.0, 0.0), &boundary_cfg(400.0))
                .unwrap();
        assert!(report.flag);
        assert!(report.sup_angle < PI / 2.0 - 0.01);
        assert!(report.sup_angle <= std::f64::consts::FRAC_PI_4 + 0.05);
    }

    #[test]
    fn nontangential_rejects_non_convergent() {
        let fam = catalog_family(CatalogId::B5);
        assert!(matches!(
            nontangential_check(&fam, BoundaryPoint::one(), 0.0, c(0.0, 0.0), &boundary_cfg(400.0)),
            Err(ClassifyError::NotApplicable(_))
        ));
    }

    #[test]
    fn automorphic_boundary_reports_affine_structure() {
        use crate::evolution::{Domain, DwPoint, EvolutionFamily};
        use std::sync::Arc;
        // Purely imaginary translation drift: every map is a half-plane
        // automorphism fixing infinity, with spectral function zero.
        let eval = Arc::new(|s: f64, t: f64, w: Complex64| {
            Ok(w + 2.0 * Complex64::i() * (t.sin() - s.sin()))
        }) as Arc<dyn Fn(f64, f64, Complex64) -> Result<Complex64, crate::evolution::EvolveError> + Send + Sync>;
        let generator = Arc::new(|_: Complex64, t: f64| 2.0 * Complex64::i() * t.cos())
            as crate::herglotz::FieldFn;
        let fam = EvolutionFamily::from_closed_form(
            Domain::HalfPlane,
            Some(DwPoint::Infinity),
            eval,
            Some(generator),
            None,
            vec![],
        );
        let cfg = boundary_cfg(400.0);
        match automorphic_reports(&fam, &cfg).unwrap() {
            AutomorphicReport::Boundary { affine_residual, re_b_residual, k_formula_error } => {
                assert!(affine_residual < 1e-8, "affine residual {affine_residual}");
                assert!(re_b_residual < 1e-8, "Re b residual {re_b_residual}");
                let err = k_formula_error.expect("arc regime present at the probe");
                assert!(err < 1e-3, "k formula error {err}");
            }
            other => panic!("expected boundary report, got {other:?}"),
        }
        // The classifier itself sees the proper-arc case with unit factor.
        let est = classify_boundary(&fam, BoundaryPoint::one(), 0.0, c(1.0, 0.0), &cfg).unwrap();
        assert_eq!(est.case, CaseLabel::ThreeC);
        assert!((est.k.unwrap() - 1.0).abs() < 1e-6);
        assert!((est.theta.unwrap() - 4.0).abs() < 0.05);
    }

    #[test]
    fn automorphic_inner_reports() {
        let cfg = boundary_cfg(200.0);
        match automorphic_reports(&catalog_family(CatalogId::I3), &cfg).unwrap() {
            AutomorphicReport::Inner { lambda_imaginary, case, .. } => {
                assert!(lambda_imaginary);
                assert_eq!(case, CaseLabel::ThreeA);
            }
            other => panic!("expected inner report, got {other:?}"),
        }
        match automorphic_reports(&catalog_family(CatalogId::I4), &cfg).unwrap() {
            AutomorphicReport::Inner { lambda_imaginary, case, note, .. } => {
                assert!(lambda_imaginary);
                assert_eq!(case, CaseLabel::ThreeB);
                assert!(note.is_some());
            }
            other => panic!("expected inner report, got {other:?}"),
        }
        assert!(matches!(
            automorphic_reports(&catalog_family(CatalogId::I1), &cfg),
            Err(ClassifyError::NotAutomorphic)
        ));
    }
}
