//! Generalized Herglotz vector fields with a constant Denjoy-Wolff point.
//!
//! A field is the pair `(tau, p)` with `p(z, t)` holomorphic in `z`,
//! nonnegative real part, and declared `t`-regularity breakpoints. The disk
//! vector field takes the factored form `G(z,t) = (z - tau)(conj(tau) z - 1) p(z,t)`
//! and transfers to the right half-plane through the Cayley map.
//!
//! Positivity and holomorphy cannot be proven numerically; they are validated
//! on finite probe grids and the field is treated as piecewise continuous in
//! `t` between its declared breakpoints.

use crate::evolution::{EvolutionFamily, EvolveError};
use crate::hypgeo::{cayley_derivative, BoundaryPoint, DiskPoint, HalfPlanePoint};
use num_complex::Complex64;
use std::fmt;
use std::sync::Arc;
use thiserror::Error;

/// Shared evaluator for `(point, time) -> complex` maps.
pub type FieldFn = Arc<dyn Fn(Complex64, f64) -> Complex64 + Send + Sync>;

/// Slack allowed on `Re p >= 0` at probe points.
pub const RE_POSITIVITY_TOL: f64 = 1e-10;
/// Bound on the sampled Cauchy-Riemann residual of `p(., t)`.
pub const CR_RESIDUAL_TOL: f64 = 1e-6;
/// Radius of the 4-point holomorphy stencil.
pub const CR_STENCIL_RADIUS: f64 = 1e-4;

#[derive(Debug, Error)]
pub enum FieldError {
    #[error("herglotz validation failed: {0}")]
    Validation(ValidationReport),
    #[error("vector field is undefined at the infinite point")]
    InfinitePoint,
    #[error("quadrature did not converge, achieved tolerance {achieved:e}")]
    QuadratureNonConvergence { achieved: f64 },
    #[error("integration horizon must be positive, got {0}")]
    NonPositiveHorizon(f64),
    #[error(transparent)]
    Evolve(#[from] EvolveError),
}

/// Common Denjoy-Wolff point of a field or family, inner or boundary.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Tau {
    Inner(Complex64),
    Boundary(Complex64),
}

impl Tau {
    pub fn inner(p: DiskPoint) -> Self {
        Self::Inner(p.value())
    }

    pub fn boundary(p: BoundaryPoint) -> Self {
        Self::Boundary(p.value())
    }

    /// Classify a raw complex number as an inner or boundary point.
    pub fn from_complex(c: Complex64) -> Result<Self, EvolveError> {
        let n = c.norm();
        if (n - 1.0).abs() <= 1e-12 {
            Ok(Self::Boundary(c / n))
        } else if n < 1.0 {
            Ok(Self::Inner(c))
        } else {
            Err(EvolveError::InvalidTau(c))
        }
    }

    pub fn value(&self) -> Complex64 {
        match self {
            Self::Inner(c) | Self::Boundary(c) => *c,
        }
    }

    pub fn is_boundary(&self) -> bool {
        matches!(self, Self::Boundary(_))
    }
}

/// The driving data of a Loewner equation: a constant Denjoy-Wolff point, a
/// generalized Herglotz function `p`, and the times where `t`-regularity of
/// `p` may fail.
#[derive(Clone)]
pub struct HerglotzField {
    pub tau: Tau,
    pub p: FieldFn,
    pub breakpoints: Vec<f64>,
}

impl HerglotzField {
    pub fn new(tau: Tau, p: FieldFn, mut breakpoints: Vec<f64>) -> Self {
        breakpoints.retain(|b| b.is_finite() && *b >= 0.0);
        breakpoints.sort_by(f64::total_cmp);
        breakpoints.dedup();
        Self { tau, p, breakpoints }
    }

    /// Constant-in-`z` Herglotz data `p(z, t) = g(t)`.
    pub fn time_dependent(tau: Tau, g: impl Fn(f64) -> Complex64 + Send + Sync + 'static, breakpoints: Vec<f64>) -> Self {
        Self::new(tau, Arc::new(move |_, t| g(t)), breakpoints)
    }
}

impl fmt::Debug for HerglotzField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("HerglotzField")
            .field("tau", &self.tau)
            .field("breakpoints", &self.breakpoints)
            .finish_non_exhaustive()
    }
}

/// Disk vector field in factored form.
#[derive(Clone)]
pub struct DiskVectorField {
    tau: Tau,
    p: FieldFn,
    breakpoints: Vec<f64>,
}

impl DiskVectorField {
    /// Build the field without running validation; test scaffolding for
    /// deliberately invalid data.
    pub fn from_raw(tau: Tau, p: FieldFn, breakpoints: Vec<f64>) -> Self {
        Self { tau, p, breakpoints }
    }

    pub fn eval(&self, z: Complex64, t: f64) -> Complex64 {
        let tau = self.tau.value();
        (z - tau) * (tau.conj() * z - Complex64::new(1.0, 0.0)) * (self.p)(z, t)
    }

    pub fn p(&self, z: Complex64, t: f64) -> Complex64 {
        (self.p)(z, t)
    }

    pub fn p_fn(&self) -> FieldFn {
        self.p.clone()
    }

    pub fn tau(&self) -> Tau {
        self.tau
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }
}

impl fmt::Debug for DiskVectorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DiskVectorField")
            .field("tau", &self.tau)
            .field("breakpoints", &self.breakpoints)
            .finish_non_exhaustive()
    }
}

/// Vector field on the right half-plane.
#[derive(Clone)]
pub struct HalfPlaneVectorField {
    eval: FieldFn,
    breakpoints: Vec<f64>,
}

impl HalfPlaneVectorField {
    pub fn new(eval: FieldFn, mut breakpoints: Vec<f64>) -> Self {
        breakpoints.retain(|b| b.is_finite() && *b >= 0.0);
        breakpoints.sort_by(f64::total_cmp);
        breakpoints.dedup();
        Self { eval, breakpoints }
    }

    pub fn eval(&self, w: Complex64, t: f64) -> Complex64 {
        (self.eval)(w, t)
    }

    /// Typed entry point: the field has no value at the point at infinity.
    pub fn eval_at(&self, w: HalfPlanePoint, t: f64) -> Result<Complex64, FieldError> {
        match w.finite() {
            Some(w) => Ok(self.eval(w, t)),
            None => Err(FieldError::InfinitePoint),
        }
    }

    pub fn eval_fn(&self) -> FieldFn {
        self.eval.clone()
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }
}

impl fmt::Debug for HalfPlaneVectorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("HalfPlaneVectorField")
            .field("breakpoints", &self.breakpoints)
            .finish_non_exhaustive()
    }
}

/// One positivity or holomorphy violation at a probe point.
#[derive(Debug, Clone, Copy)]
pub struct Violation {
    pub z: Complex64,
    pub t: f64,
    pub re_p: f64,
    pub cr_residual: f64,
}

/// Outcome of sampling `p` over a probe grid.
#[derive(Debug, Clone)]
pub struct ValidationReport {
    pub min_re: f64,
    pub max_cr_residual: f64,
    pub probes: usize,
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn pass(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} over {} probes (min Re p = {:e}, max CR residual = {:e})",
            if self.pass() { "pass" } else { "FAIL" },
            self.probes,
            self.min_re,
            self.max_cr_residual
        )?;
        for v in self.violations.iter().take(8) {
            write!(
                f,
                "; violation at z = {} + {}i, t = {} (Re p = {:e}, CR = {:e})",
                v.z.re, v.z.im, v.t, v.re_p, v.cr_residual
            )?;
        }
        if self.violations.len() > 8 {
            write!(f, "; ... {} more", self.violations.len() - 8)?;
        }
        Ok(())
    }
}

/// Sample `Re p >= 0` and a 4-point Cauchy-Riemann stencil over the grid.
pub fn validate_herglotz(p: &FieldFn, grid: &[(Complex64, f64)]) -> ValidationReport {
    let mut min_re = f64::INFINITY;
    let mut max_cr = 0.0f64;
    let mut violations = Vec::new();
    let h = CR_STENCIL_RADIUS;
    for &(z, t) in grid {
        let re_p = p(z, t).re;
        let fx = (p(z + Complex64::new(h, 0.0), t) - p(z - Complex64::new(h, 0.0), t))
            / Complex64::new(2.0 * h, 0.0);
        let fy = (p(z + Complex64::new(0.0, h), t) - p(z - Complex64::new(0.0, h), t))
            / Complex64::new(2.0 * h, 0.0);
        let cr = 0.5 * (fx + Complex64::i() * fy).norm();
        min_re = min_re.min(re_p);
        max_cr = max_cr.max(cr);
        if re_p < -RE_POSITIVITY_TOL || cr > CR_RESIDUAL_TOL || !re_p.is_finite() {
            violations.push(Violation { z, t, re_p, cr_residual: cr });
        }
    }
    ValidationReport { min_re, max_cr_residual: max_cr, probes: grid.len(), violations }
}

/// Default probe grid: three radii, twelve directions, times spread over
/// `[0, 10]` and between declared breakpoints, never on a breakpoint.
pub fn default_probe_grid(breakpoints: &[f64]) -> Vec<(Complex64, f64)> {
    let mut times: Vec<f64> = (0..20).map(|k| 0.53 * k as f64).collect();
    for pair in breakpoints.windows(2) {
        times.push(0.5 * (pair[0] + pair[1]));
    }
    times.retain(|t| breakpoints.iter().all(|b| (t - b).abs() > 1e-9));
    let mut grid = Vec::new();
    for &r in &[0.2, 0.5, 0.8] {
        for j in 0..12 {
            let theta = 2.0 * std::f64::consts::PI * j as f64 / 12.0;
            let z = Complex64::from_polar(r, theta);
            for &t in &times {
                grid.push((z, t));
            }
        }
    }
    grid
}

/// Validate `p` on the default probe grid and assemble the factored field.
pub fn berkson_porta_field(field: &HerglotzField) -> Result<DiskVectorField, FieldError> {
    let report = validate_herglotz(&field.p, &default_probe_grid(&field.breakpoints));
    if !report.pass() {
        return Err(FieldError::Validation(report));
    }
    Ok(DiskVectorField::from_raw(field.tau, field.p.clone(), field.breakpoints.clone()))
}

/// Transport a disk field with boundary Denjoy-Wolff point to the half-plane:
/// `F(w, t) = sigma_tau'(sigma_tau^{-1}(w)) G(sigma_tau^{-1}(w), t)`.
pub fn transfer_to_halfplane(field: &DiskVectorField, tau: BoundaryPoint) -> HalfPlaneVectorField {
    let inner = field.clone();
    let tv = tau.value();
    let eval: FieldFn = Arc::new(move |w, t| {
        let one = Complex64::new(1.0, 0.0);
        let z = tv * (w - one) / (w + one);
        cayley_derivative(tau, z) * inner.eval(z, t)
    });
    HalfPlaneVectorField::new(eval, field.breakpoints.clone())
}

/// Inverse transport, `G(z, t) = F(sigma_tau(z), t) / sigma_tau'(z)`.
pub fn transfer_to_disk(field: &HalfPlaneVectorField, tau: BoundaryPoint) -> impl Fn(Complex64, f64) -> Complex64 {
    let inner = field.clone();
    let tv = tau.value();
    move |z: Complex64, t: f64| {
        let w = (tv + z) / (tv - z);
        inner.eval(w, t) / cayley_derivative(tau, z)
    }
}

/// `int_0^T |F(w, xi)| d xi` by adaptive Simpson quadrature split at the
/// declared breakpoints. A bounded trend as `T` grows is evidence for the
/// bounded-real-part regime.
pub fn l1_diagnostic(field: &HalfPlaneVectorField, w: Complex64, horizon: f64) -> Result<f64, FieldError> {
    if horizon <= 0.0 {
        return Err(FieldError::NonPositiveHorizon(horizon));
    }
    let mut cuts = vec![0.0];
    cuts.extend(field.breakpoints.iter().copied().filter(|b| *b > 0.0 && *b < horizon));
    cuts.push(horizon);
    let f = |t: f64| field.eval(w, t).norm();
    let mut total = 0.0;
    for seg in cuts.windows(2) {
        total += adaptive_simpson(&f, seg[0], seg[1], 1e-10)?;
    }
    Ok(total)
}

fn adaptive_simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> Result<f64, FieldError> {
    fn simpson(f: &dyn Fn(f64) -> f64, a: f64, fa: f64, b: f64, fb: f64) -> (f64, f64, f64) {
        let m = 0.5 * (a + b);
        let fm = f(m);
        ((b - a) / 6.0 * (fa + 4.0 * fm + fb), m, fm)
    }
    #[allow(clippy::too_many_arguments)]
    fn recurse(
        f: &dyn Fn(f64) -> f64,
        a: f64,
        fa: f64,
        b: f64,
        fb: f64,
        whole: f64,
        m: f64,
        fm: f64,
        tol: f64,
        depth: u32,
    ) -> Result<f64, f64> {
        let (left, lm, flm) = simpson(f, a, fa, m, fm);
        let (right, rm, frm) = simpson(f, m, fm, b, fb);
        let delta = left + right - whole;
        if delta.abs() <= 15.0 * tol {
            return Ok(left + right + delta / 15.0);
        }
        if depth == 0 {
            return Err(delta.abs() / 15.0);
        }
        let l = recurse(f, a, fa, m, fm, left, lm, flm, 0.5 * tol, depth - 1);
        let r = recurse(f, m, fm, b, fb, right, rm, frm, 0.5 * tol, depth - 1);
        match (l, r) {
            (Ok(x), Ok(y)) => Ok(x + y),
            (Err(e), Ok(_)) | (Ok(_), Err(e)) => Err(e),
            (Err(e1), Err(e2)) => Err(e1 + e2),
        }
    }
    if b <= a {
        return Ok(0.0);
    }
    let fa = f(a);
    let fb = f(b);
    let (whole, m, fm) = simpson(f, a, fa, b, fb);
    recurse(f, a, fa, b, fb, whole, m, fm, tol.max(1e-14 * whole.abs()), 42)
        .map_err(|achieved| FieldError::QuadratureNonConvergence { achieved })
}

/// Forward difference quotient `(phi_{t,t+h}(z) - z)/h` of an evolution
/// family. At points of `t`-continuity this converges to the associated
/// vector field as `h -> 0+`.
pub fn finite_diff_generator(
    family: &EvolutionFamily,
    z: Complex64,
    t: f64,
    h: f64,
) -> Result<Complex64, EvolveError> {
    quotient_guard(family, t, h)?;
    let ahead = family.eval(t, t + h, z)?;
    Ok((ahead - z) / h)
}

/// Richardson-extrapolated quotient `2 D(h/2) - D(h)`, second order in `h`.
pub fn finite_diff_generator_extrapolated(
    family: &EvolutionFamily,
    z: Complex64,
    t: f64,
    h: f64,
) -> Result<Complex64, EvolveError> {
    quotient_guard(family, t, h)?;
    let full = (family.eval(t, t + h, z)? - z) / h;
    let half = (family.eval(t, t + 0.5 * h, z)? - z) / (0.5 * h);
    Ok(2.0 * half - full)
}

fn quotient_guard(family: &EvolutionFamily, t: f64, h: f64) -> Result<(), EvolveError> {
    if h <= 0.0 {
        return Err(EvolveError::NonPositiveStep(h));
    }
    for b in family.breakpoints() {
        if (t - b).abs() < h || (t + h - b).abs() < h {
            return Err(EvolveError::NearBreakpoint { t, breakpoint: *b });
        }
    }
    Ok(())
}
