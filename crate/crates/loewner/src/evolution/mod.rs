//! Evolution families `phi_{s,t}` of holomorphic self-maps of the disk or
//! the right half-plane, with a common Denjoy-Wolff point.
//!
//! A family is realized either by a closed-form catalog entry, by numerical
//! integration of a Herglotz vector field, or by wrapping a one-parameter
//! semigroup. The module also provides trajectory sampling, the evolution
//! axioms as measurable residuals, the exp-log lift of centered inner
//! families, and an isometry probe that flags automorphic families.

mod catalog;
mod integrator;

pub use catalog::{CatalogId, BREAKPOINT_SPAN};

use crate::herglotz::{DiskVectorField, FieldFn, HalfPlaneVectorField, Tau};
use crate::hypgeo::{hyp_dist_disk, hyp_dist_halfplane, DiskPoint, GeoError, HalfPlanePoint};
use integrator::{integrate_value, March};
use num_complex::Complex64;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum EvolveError {
    #[error("evolution requires 0 <= s <= t, got s = {s}, t = {t}")]
    BadSpan { s: f64, t: f64 },
    #[error("point {0} lies outside the family domain")]
    OutsideDomain(Complex64),
    #[error("stiffness/regularity failure at t = {t}: step size underflow")]
    StepUnderflow { t: f64 },
    #[error("solution left the domain at t = {t} (reached {z}); the field is not a valid generator")]
    DomainExit { t: f64, z: Complex64 },
    #[error("tau must lie in the closed unit disk, got {0}")]
    InvalidTau(Complex64),
    #[error("closed-form denominator vanished at s = {s}, t = {t}")]
    ClosedFormBreakdown { s: f64, t: f64 },
    #[error("half-plane form exists only for boundary catalog entries, got {0}")]
    HalfplaneFormRequiresBoundary(CatalogId),
    #[error("log lift requires a family with Denjoy-Wolff point 0")]
    LogLiftRequiresCenteredFamily,
    #[error("log_lift requires generator")]
    MissingGenerator,
    #[error("quotient at t = {t} would touch the declared breakpoint {breakpoint}")]
    NearBreakpoint { t: f64, breakpoint: f64 },
    #[error("step must be positive, got {0}")]
    NonPositiveStep(f64),
    #[error("invalid integrator configuration: {0}")]
    BadConfig(String),
    #[error(transparent)]
    Geometry(#[from] GeoError),
}

/// Domain carried by a family and its trajectories.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Domain {
    Disk,
    HalfPlane,
}

impl Domain {
    pub fn contains(&self, z: Complex64, slack: f64) -> bool {
        match self {
            Domain::Disk => z.norm() <= 1.0 + slack,
            Domain::HalfPlane => z.re >= -slack,
        }
    }
}

/// Declared common Denjoy-Wolff point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DwPoint {
    Inner(Complex64),
    Boundary(Complex64),
    /// Families acting on the right half-plane with attracting point at
    /// infinity.
    Infinity,
}

impl DwPoint {
    pub fn from_tau(tau: Tau) -> Self {
        match tau {
            Tau::Inner(c) => DwPoint::Inner(c),
            Tau::Boundary(c) => DwPoint::Boundary(c),
        }
    }
}

/// Tolerances and sampling controls for numerical integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegratorConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_step: f64,
    /// End of the simulated time window `[s, horizon]`.
    pub horizon: f64,
    /// Spacing of the dense-output sample grid.
    pub output_grid: f64,
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        Self { rel_tol: 1e-10, abs_tol: 1e-12, max_step: 1.0, horizon: 200.0, output_grid: 0.05 }
    }
}

impl IntegratorConfig {
    pub fn validate(&self) -> Result<(), EvolveError> {
        let bad = |msg: String| Err(EvolveError::BadConfig(msg));
        let in_unit = |x: f64| x.is_finite() && x > 0.0 && x < 1.0;
        let positive = |x: f64| x.is_finite() && x > 0.0;
        if !in_unit(self.rel_tol) {
            return bad(format!("rel_tol must lie in (0, 1), got {}", self.rel_tol));
        }
        if !in_unit(self.abs_tol) {
            return bad(format!("abs_tol must lie in (0, 1), got {}", self.abs_tol));
        }
        if !positive(self.max_step) {
            return bad(format!("max_step must be positive, got {}", self.max_step));
        }
        if !positive(self.horizon) {
            return bad(format!("horizon must be positive, got {}", self.horizon));
        }
        if !positive(self.output_grid) {
            return bad(format!("output_grid must be positive, got {}", self.output_grid));
        }
        Ok(())
    }
}

/// How the family evaluator is realized.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    Catalog(CatalogId),
    CatalogHalfPlane(CatalogId),
    Integrated,
    Semigroup,
    LogLift,
    Trivial,
    Custom,
}

type EvalFn = Arc<dyn Fn(f64, f64, Complex64) -> Result<Complex64, EvolveError> + Send + Sync>;

enum Backend {
    ClosedForm(EvalFn),
    Integrated { field: FieldFn, cfg: IntegratorConfig },
}

/// A biparametric family `(s, t, z) -> phi_{s,t}(z)`, `0 <= s <= t`.
pub struct EvolutionFamily {
    domain: Domain,
    dw: Option<DwPoint>,
    backend: Backend,
    generator: Option<FieldFn>,
    herglotz_p: Option<FieldFn>,
    breakpoints: Vec<f64>,
    provenance: Provenance,
}

impl std::fmt::Debug for EvolutionFamily {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("EvolutionFamily")
            .field("domain", &self.domain)
            .field("dw", &self.dw)
            .field("provenance", &self.provenance)
            .field("breakpoints", &self.breakpoints.len())
            .finish_non_exhaustive()
    }
}

fn snap(t: f64) -> f64 {
    1e-13 * t.abs().max(1.0)
}

impl EvolutionFamily {
    /// Closed-form catalog entry in its native disk realization.
    pub fn catalog(id: CatalogId) -> Self {
        if id.is_boundary() {
            let eval: EvalFn = Arc::new(move |s, t, z| {
                let c = id.drift(t) - id.drift(s);
                let w = z - Complex64::new(1.0, 0.0);
                let denom = Complex64::new(1.0, 0.0) - w * c;
                if denom.norm() < 1e-150 {
                    return Err(EvolveError::ClosedFormBreakdown { s, t });
                }
                Ok(Complex64::new(1.0, 0.0) + w / denom)
            });
            let generator: FieldFn = Arc::new(move |z, t| {
                let w = z - Complex64::new(1.0, 0.0);
                w * w * id.drift_rate(t)
            });
            let p: FieldFn = Arc::new(move |_, t| id.drift_rate(t));
            Self {
                domain: Domain::Disk,
                dw: Some(DwPoint::Boundary(Complex64::new(1.0, 0.0))),
                backend: Backend::ClosedForm(eval),
                generator: Some(generator),
                herglotz_p: Some(p),
                breakpoints: id.breakpoints(),
                provenance: Provenance::Catalog(id),
            }
        } else {
            let eval: EvalFn =
                Arc::new(move |s, t, z| Ok((id.exponent(s) - id.exponent(t)).exp() * z));
            let generator: FieldFn = Arc::new(move |z, t| -z * id.exponent_rate(t));
            let p: FieldFn = Arc::new(move |_, t| id.exponent_rate(t));
            Self {
                domain: Domain::Disk,
                dw: Some(DwPoint::Inner(Complex64::new(0.0, 0.0))),
                backend: Backend::ClosedForm(eval),
                generator: Some(generator),
                herglotz_p: Some(p),
                breakpoints: id.breakpoints(),
                provenance: Provenance::Catalog(id),
            }
        }
    }

    /// Cayley conjugate of a boundary catalog entry: the half-plane
    /// translation family `w + 2(m(t) - m(s))`.
    pub fn catalog_halfplane(id: CatalogId) -> Result<Self, EvolveError> {
        if !id.is_boundary() {
            return Err(EvolveError::HalfplaneFormRequiresBoundary(id));
        }
        let eval: EvalFn = Arc::new(move |s, t, w| Ok(w + 2.0 * (id.drift(t) - id.drift(s))));
        let generator: FieldFn = Arc::new(move |_, t| 2.0 * id.drift_rate(t));
        Ok(Self {
            domain: Domain::HalfPlane,
            dw: Some(DwPoint::Infinity),
            backend: Backend::ClosedForm(eval),
            generator: Some(generator),
            herglotz_p: None,
            breakpoints: id.breakpoints(),
            provenance: Provenance::CatalogHalfPlane(id),
        })
    }

    /// Family solving `dz/dt = G(z, t)` for a validated disk field.
    pub fn integrated_disk(field: DiskVectorField, cfg: IntegratorConfig) -> Result<Self, EvolveError> {
        cfg.validate()?;
        let dw = DwPoint::from_tau(field.tau());
        let breakpoints = field.breakpoints().to_vec();
        let p = field.p_fn();
        let eval_field = field.clone();
        let gen_field = field;
        Ok(Self {
            domain: Domain::Disk,
            dw: Some(dw),
            backend: Backend::Integrated {
                field: Arc::new(move |z, t| eval_field.eval(z, t)),
                cfg,
            },
            generator: Some(Arc::new(move |z, t| gen_field.eval(z, t))),
            herglotz_p: Some(p),
            breakpoints,
            provenance: Provenance::Integrated,
        })
    }

    /// Family solving `dw/dt = F(w, t)` in the right half-plane.
    pub fn integrated_halfplane(
        field: HalfPlaneVectorField,
        cfg: IntegratorConfig,
    ) -> Result<Self, EvolveError> {
        cfg.validate()?;
        let breakpoints = field.breakpoints().to_vec();
        let eval = field.eval_fn();
        Ok(Self {
            domain: Domain::HalfPlane,
            dw: Some(DwPoint::Infinity),
            backend: Backend::Integrated { field: eval.clone(), cfg },
            generator: Some(eval),
            herglotz_p: None,
            breakpoints,
            provenance: Provenance::Integrated,
        })
    }

    /// Wrap a one-parameter semigroup `t -> phi_t` as `phi_{s,t} = phi_{t-s}`.
    pub fn semigroup(
        map: Arc<dyn Fn(f64, Complex64) -> Complex64 + Send + Sync>,
        domain: Domain,
        dw: Option<DwPoint>,
    ) -> Self {
        let eval: EvalFn = Arc::new(move |s, t, z| Ok(map(t - s, z)));
        Self {
            domain,
            dw,
            backend: Backend::ClosedForm(eval),
            generator: None,
            herglotz_p: None,
            breakpoints: Vec::new(),
            provenance: Provenance::Semigroup,
        }
    }

    /// The identity family.
    pub fn trivial(domain: Domain) -> Self {
        let eval: EvalFn = Arc::new(|_, _, z| Ok(z));
        Self {
            domain,
            dw: None,
            backend: Backend::ClosedForm(eval),
            generator: Some(Arc::new(|_, _| Complex64::new(0.0, 0.0))),
            herglotz_p: None,
            breakpoints: Vec::new(),
            provenance: Provenance::Trivial,
        }
    }

    /// Arbitrary closed-form family supplied by the caller.
    #[allow(clippy::too_many_arguments)]
    pub fn from_closed_form(
        domain: Domain,
        dw: Option<DwPoint>,
        eval: EvalFn,
        generator: Option<FieldFn>,
        herglotz_p: Option<FieldFn>,
        breakpoints: Vec<f64>,
    ) -> Self {
        Self { domain, dw, backend: Backend::ClosedForm(eval), generator, herglotz_p, breakpoints, provenance: Provenance::Custom }
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn dw(&self) -> Option<DwPoint> {
        self.dw
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    pub fn catalog_id(&self) -> Option<CatalogId> {
        match self.provenance {
            Provenance::Catalog(id) | Provenance::CatalogHalfPlane(id) => Some(id),
            _ => None,
        }
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    /// Analytic vector field associated with the family, when known.
    pub fn generator(&self) -> Option<&FieldFn> {
        self.generator.as_ref()
    }

    /// Herglotz data `p` of the factored generator, when known.
    pub fn herglotz_p(&self) -> Option<&FieldFn> {
        self.herglotz_p.as_ref()
    }

    /// Evaluate `phi_{s,t}(z)`.
    pub fn eval(&self, s: f64, t: f64, z: Complex64) -> Result<Complex64, EvolveError> {
        if s < 0.0 || t < s - snap(s) {
            return Err(EvolveError::BadSpan { s, t });
        }
        if !self.domain.contains(z, 1e-12) {
            return Err(EvolveError::OutsideDomain(z));
        }
        if t <= s + snap(s) {
            return Ok(z);
        }
        match &self.backend {
            Backend::ClosedForm(eval) => eval(s, t, z),
            Backend::Integrated { field, cfg } => {
                let f = field.clone();
                integrate_value(move |z, t| f(z, t), &self.breakpoints, self.domain, cfg, s, t, z)
            }
        }
    }

    /// Typed disk entry point.
    pub fn eval_disk(&self, s: f64, t: f64, z: DiskPoint) -> Result<Complex64, EvolveError> {
        self.eval(s, t, z.value())
    }

    /// Typed half-plane entry point; infinity is a fixed point of every
    /// admissible family.
    pub fn eval_halfplane(&self, s: f64, t: f64, w: HalfPlanePoint) -> Result<HalfPlanePoint, EvolveError> {
        match w {
            HalfPlanePoint::Infinity => Ok(HalfPlanePoint::Infinity),
            HalfPlanePoint::Finite(w) => Ok(HalfPlanePoint::Finite(self.eval(s, t, w)?)),
        }
    }
}

/// Time-stamped samples of one trajectory `t -> phi_{s,t}(z)`.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub s: f64,
    pub start: Complex64,
    pub domain: Domain,
    pub times: Vec<f64>,
    pub points: Vec<Complex64>,
    /// Cumulative local-error estimate at each sample; zero for closed forms.
    pub error_estimate: Vec<f64>,
}

impl Trajectory {
    fn validate(&self) -> Result<(), EvolveError> {
        if (self.points[0] - self.start).norm() > 1e-12 {
            return Err(EvolveError::OutsideDomain(self.points[0]));
        }
        for &p in &self.points {
            if !self.domain.contains(p, 1e-12) {
                return Err(EvolveError::OutsideDomain(p));
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }
}

/// Alias for the catalog constructor, matching the operation vocabulary.
pub fn catalog_family(id: CatalogId) -> EvolutionFamily {
    EvolutionFamily::catalog(id)
}

/// Alias for the half-plane catalog constructor.
pub fn halfplane_form(id: CatalogId) -> Result<EvolutionFamily, EvolveError> {
    EvolutionFamily::catalog_halfplane(id)
}

/// A field ready for integration.
pub enum IntegrableField {
    Disk(DiskVectorField),
    HalfPlane(HalfPlaneVectorField),
}

/// Build the evolution family solving the Cauchy problems of a field.
pub fn integrate_family(field: IntegrableField, cfg: IntegratorConfig) -> Result<EvolutionFamily, EvolveError> {
    match field {
        IntegrableField::Disk(f) => EvolutionFamily::integrated_disk(f, cfg),
        IntegrableField::HalfPlane(f) => EvolutionFamily::integrated_halfplane(f, cfg),
    }
}

/// Dense-output sampling of one trajectory over `[s, cfg.horizon]`.
pub fn sample_trajectory(
    family: &EvolutionFamily,
    s: f64,
    z: Complex64,
    cfg: &IntegratorConfig,
) -> Result<Trajectory, EvolveError> {
    cfg.validate()?;
    if s < 0.0 || cfg.horizon <= s {
        return Err(EvolveError::BadSpan { s, t: cfg.horizon });
    }
    if !family.domain.contains(z, 1e-12) {
        return Err(EvolveError::OutsideDomain(z));
    }
    let mut times = Vec::new();
    let mut t = s;
    while t < cfg.horizon - snap(cfg.horizon) {
        times.push(t);
        t += cfg.output_grid;
    }
    times.push(cfg.horizon);

    let (points, errors) = match &family.backend {
        Backend::ClosedForm(eval) => {
            let mut pts = Vec::with_capacity(times.len());
            for &t in &times {
                pts.push(if t <= s + snap(s) { z } else { eval(s, t, z)? });
            }
            (pts, vec![0.0; times.len()])
        }
        Backend::Integrated { field, cfg: icfg } => {
            let f = field.clone();
            let mut march =
                March::new(move |z, t| f(z, t), &family.breakpoints, family.domain, icfg, s, z)?;
            let mut pts = Vec::with_capacity(times.len());
            let mut errs = Vec::with_capacity(times.len());
            for &t in &times {
                march.advance_to(t, |_, _, _| {})?;
                pts.push(march.y);
                errs.push(march.error_accum);
            }
            (pts, errs)
        }
    };

    let traj = Trajectory { s, start: z, domain: family.domain, times, points, error_estimate: errors };
    traj.validate()?;
    Ok(traj)
}

/// One evolution-axiom probe: requires `0 <= s <= u <= t`.
#[derive(Debug, Clone, Copy)]
pub struct AxiomProbe {
    pub s: f64,
    pub u: f64,
    pub t: f64,
    pub z: Complex64,
}

/// Residuals of the algebraic evolution-family axioms over a probe set,
/// together with a two-point injectivity smoke value.
#[derive(Debug, Clone, Copy)]
pub struct AxiomReport {
    pub max_identity_residual: f64,
    pub max_composition_residual: f64,
    pub min_image_separation: f64,
}

pub fn axiom_residuals(family: &EvolutionFamily, probes: &[AxiomProbe]) -> Result<AxiomReport, EvolveError> {
    let mut id_res = 0.0f64;
    let mut comp_res = 0.0f64;
    let mut min_sep = f64::INFINITY;
    for p in probes {
        if !(0.0 <= p.s && p.s <= p.u && p.u <= p.t) {
            return Err(EvolveError::BadSpan { s: p.s, t: p.t });
        }
        let frozen = family.eval(p.s, p.s, p.z)?;
        id_res = id_res.max((frozen - p.z).norm());

        let through = family.eval(p.u, p.t, family.eval(p.s, p.u, p.z)?)?;
        let direct = family.eval(p.s, p.t, p.z)?;
        comp_res = comp_res.max((through - direct).norm());

        let partner = {
            let cand = 0.5 * p.z + Complex64::new(0.1, 0.0);
            if (cand - p.z).norm() < 1e-6 {
                0.5 * p.z - Complex64::new(0.1, 0.0)
            } else {
                cand
            }
        };
        if family.domain.contains(partner, 0.0) {
            let a = family.eval(p.s, p.t, p.z)?;
            let b = family.eval(p.s, p.t, partner)?;
            min_sep = min_sep.min((a - b).norm());
        }
    }
    Ok(AxiomReport {
        max_identity_residual: id_res,
        max_composition_residual: comp_res,
        min_image_separation: min_sep,
    })
}

/// Half-plane family obtained by lifting a centered inner family through
/// `z = e^{-w}`: it integrates `q(w, t) = p(e^{-w}, t)` and satisfies the
/// semiconjugation `psi_{s,t}(e^{-w}) = exp(-phi_{s,t}(w))` together with
/// `2 pi i`-periodicity.
pub fn log_lift(family: &EvolutionFamily, cfg: IntegratorConfig) -> Result<EvolutionFamily, EvolveError> {
    cfg.validate()?;
    match family.dw {
        Some(DwPoint::Inner(c)) if c.norm() <= 1e-12 => {}
        _ => return Err(EvolveError::LogLiftRequiresCenteredFamily),
    }
    let p = family.herglotz_p.clone().ok_or(EvolveError::MissingGenerator)?;
    let q: FieldFn = Arc::new(move |w: Complex64, t: f64| p((-w).exp(), t));
    Ok(EvolutionFamily {
        domain: Domain::HalfPlane,
        dw: Some(DwPoint::Infinity),
        backend: Backend::Integrated { field: q.clone(), cfg },
        generator: Some(q),
        herglotz_p: None,
        breakpoints: family.breakpoints.clone(),
        provenance: Provenance::LogLift,
    })
}

/// Tolerance below which a family passes as a hyperbolic isometry.
pub const ISOMETRY_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy)]
pub struct IsometryReport {
    pub automorphic: bool,
    /// Largest contraction `rho(z1, z2) - rho(phi z1, phi z2)` observed.
    pub deficiency: f64,
}

/// Probe whether `phi_{s,t}` preserves the hyperbolic metric on the given
/// pairs. Among holomorphic self-maps, isometries are exactly the
/// automorphisms.
pub fn isometry_test(
    family: &EvolutionFamily,
    s: f64,
    t: f64,
    pairs: &[(Complex64, Complex64)],
) -> Result<IsometryReport, EvolveError> {
    let mut max_abs = 0.0f64;
    let mut deficiency = 0.0f64;
    for &(z1, z2) in pairs {
        let (before, after) = match family.domain {
            Domain::Disk => {
                let before = hyp_dist_disk(DiskPoint::new(z1)?, DiskPoint::new(z2)?);
                let a = family.eval(s, t, z1)?;
                let b = family.eval(s, t, z2)?;
                (before, hyp_dist_disk(DiskPoint::new(a)?, DiskPoint::new(b)?))
            }
            Domain::HalfPlane => {
                let before = hyp_dist_halfplane(HalfPlanePoint::new(z1)?, HalfPlanePoint::new(z2)?)?;
                let a = family.eval(s, t, z1)?;
                let b = family.eval(s, t, z2)?;
                (before, hyp_dist_halfplane(HalfPlanePoint::new(a)?, HalfPlanePoint::new(b)?)?)
            }
        };
        max_abs = max_abs.max((after - before).abs());
        deficiency = deficiency.max(before - after);
    }
    Ok(IsometryReport { automorphic: max_abs < ISOMETRY_TOL, deficiency })
}

/// Deterministic probe pairs for isometry tests.
pub fn default_pair_probes(domain: Domain) -> Vec<(Complex64, Complex64)> {
    match domain {
        Domain::Disk => vec![
            (Complex64::new(0.0, 0.0), Complex64::new(0.5, 0.0)),
            (Complex64::new(0.3, 0.4), Complex64::new(-0.2, 0.1)),
            (Complex64::new(-0.6, -0.3), Complex64::new(0.1, 0.7)),
            (Complex64::new(0.05, -0.85), Complex64::new(0.4, 0.4)),
        ],
        Domain::HalfPlane => vec![
            (Complex64::new(1.0, 0.0), Complex64::new(2.0, 1.0)),
            (Complex64::new(0.3, -2.0), Complex64::new(4.0, 0.5)),
            (Complex64::new(0.08, 3.0), Complex64::new(1.5, -1.5)),
        ],
    }
}

/// Bisection diagnostic for the threshold time after which every map of the
/// family is an automorphism. Returns `None` when no isometric tail is seen
/// before `t_max`. Approximate by construction; not a certified value.
pub fn automorphic_threshold(
    family: &EvolutionFamily,
    t_max: f64,
    tol: f64,
) -> Result<Option<f64>, EvolveError> {
    let pairs = default_pair_probes(family.domain);
    let span = 5.0f64.min(0.25 * t_max);
    let probe = |s: f64| -> Result<bool, EvolveError> {
        Ok(isometry_test(family, s, (s + span).min(t_max), &pairs)?.automorphic)
    };
    if probe(0.0)? {
        return Ok(Some(0.0));
    }
    let hi0 = t_max - span;
    if !probe(hi0)? {
        return Ok(None);
    }
    let (mut lo, mut hi) = (0.0, hi0);
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if probe(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(Some(hi))
}
