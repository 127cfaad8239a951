//! Hyperbolic geometry of the unit disk `D` and the right half-plane `H`.
//!
//! Closed-form distances and lengths, horocycles, hyperbolic disks, the
//! Cayley transport between `D` and `H`, circular arcs with their hyperbolic
//! angular extent, and Stolz angles. Every operation is a pure function of
//! its inputs, so the whole module is safe to use from any number of threads.

use num_complex::Complex64;
use std::f64::consts::PI;
use thiserror::Error;

/// Tolerance for membership of the unit circle and for round-trip identities.
pub const MODULUS_TOL: f64 = 1e-12;

/// Relative tolerance used when checking that an arc sits on a support circle.
pub const ARC_SUPPORT_TOL: f64 = 1e-8;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeoError {
    #[error("point must lie strictly inside the unit disk, |z| = {0}")]
    OutsideDisk(f64),
    #[error("point must lie on the unit circle within {MODULUS_TOL:e}, |z| = {0}")]
    OffUnitCircle(f64),
    #[error("point must lie in the open right half-plane, Re w = {0}")]
    OutsideHalfPlane(f64),
    #[error("infinite point has no finite distance")]
    InfinitePoint,
    #[error("polyline needs at least two samples")]
    TooFewSamples,
    #[error("degenerate polyline segment at index {0}")]
    DegenerateSegment(usize),
    #[error("radius must be positive, got {0}")]
    NonPositiveRadius(f64),
    #[error("horocycle factor must be positive, got {0}")]
    NonPositiveFactor(f64),
    #[error("arc angular width must lie in (0, 2*pi], got {0}")]
    BadArcWidth(f64),
    #[error("arc is off its support circle (center error {center_err:e}, radius error {radius_err:e})")]
    ArcOffSupport { center_err: f64, radius_err: f64 },
    #[error("infinite hyperbolic length: arc meets the horocycle contact point")]
    InfiniteLength,
    #[error("Stolz half-opening must lie in (0, pi/2), got {0}")]
    BadStolzOpening(f64),
}

/// A point strictly inside the unit disk.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiskPoint(Complex64);

impl DiskPoint {
    pub fn new(value: Complex64) -> Result<Self, GeoError> {
        if value.norm() < 1.0 {
            Ok(Self(value))
        } else {
            Err(GeoError::OutsideDisk(value.norm()))
        }
    }

    pub fn from_xy(re: f64, im: f64) -> Result<Self, GeoError> {
        Self::new(Complex64::new(re, im))
    }

    pub fn origin() -> Self {
        Self(Complex64::new(0.0, 0.0))
    }

    pub fn value(&self) -> Complex64 {
        self.0
    }
}

/// A point of the unit circle, renormalized at construction to modulus one.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryPoint(Complex64);

impl BoundaryPoint {
    pub fn new(value: Complex64) -> Result<Self, GeoError> {
        let n = value.norm();
        if (n - 1.0).abs() > MODULUS_TOL {
            return Err(GeoError::OffUnitCircle(n));
        }
        Ok(Self(value / n))
    }

    /// The point 1, the contact point used by the boundary catalog families.
    pub fn one() -> Self {
        Self(Complex64::new(1.0, 0.0))
    }

    pub fn value(&self) -> Complex64 {
        self.0
    }
}

/// A point of the closed right half-plane, or the point at infinity of its
/// Riemann-sphere closure. Interior constructors demand `Re w > 0`; images of
/// circle points under the Cayley map may sit on the imaginary axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum HalfPlanePoint {
    Finite(Complex64),
    Infinity,
}

impl HalfPlanePoint {
    /// Strictly interior point, `Re w > 0`.
    pub fn new(value: Complex64) -> Result<Self, GeoError> {
        if value.re > 0.0 {
            Ok(Self::Finite(value))
        } else {
            Err(GeoError::OutsideHalfPlane(value.re))
        }
    }

    /// Point of the closure; `Re w >= -MODULUS_TOL` is clamped onto the axis.
    pub fn closure(value: Complex64) -> Result<Self, GeoError> {
        if value.re >= 0.0 {
            Ok(Self::Finite(value))
        } else if value.re >= -MODULUS_TOL {
            Ok(Self::Finite(Complex64::new(0.0, value.im)))
        } else {
            Err(GeoError::OutsideHalfPlane(value.re))
        }
    }

    pub fn finite(&self) -> Option<Complex64> {
        match self {
            Self::Finite(w) => Some(*w),
            Self::Infinity => None,
        }
    }

    pub fn is_infinity(&self) -> bool {
        matches!(self, Self::Infinity)
    }
}

/// Horocycle `Hor(contact, factor)`: the sublevel set `k_D(contact, z) < factor`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Horocycle {
    contact: BoundaryPoint,
    factor: f64,
}

impl Horocycle {
    pub fn new(contact: BoundaryPoint, factor: f64) -> Result<Self, GeoError> {
        if factor > 0.0 {
            Ok(Self { contact, factor })
        } else {
            Err(GeoError::NonPositiveFactor(factor))
        }
    }

    pub fn contact(&self) -> BoundaryPoint {
        self.contact
    }

    pub fn factor(&self) -> f64 {
        self.factor
    }
}

/// Hyperbolic disk of a given center and hyperbolic radius.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HypDisk {
    center: DiskPoint,
    radius: f64,
}

impl HypDisk {
    pub fn new(center: DiskPoint, radius: f64) -> Result<Self, GeoError> {
        if radius > 0.0 {
            Ok(Self { center, radius })
        } else {
            Err(GeoError::NonPositiveRadius(radius))
        }
    }

    pub fn center(&self) -> DiskPoint {
        self.center
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }
}

/// Euclidean circle, the common realization of horocycle and hyperbolic-disk
/// boundaries.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EuclideanCircle {
    pub center: Complex64,
    pub radius: f64,
}

impl EuclideanCircle {
    pub fn new(center: Complex64, radius: f64) -> Result<Self, GeoError> {
        if radius > 0.0 {
            Ok(Self { center, radius })
        } else {
            Err(GeoError::NonPositiveRadius(radius))
        }
    }

    pub fn point_at(&self, theta: f64) -> Complex64 {
        self.center + self.radius * Complex64::new(theta.cos(), theta.sin())
    }
}

/// Closed arc `{center + radius e^{i theta} : theta_lo <= theta <= theta_hi}`
/// with `0 < theta_hi - theta_lo <= 2 pi`. Equality with `2 pi` marks a full
/// circle; anything smaller is a proper arc.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClosedArc {
    pub circle: EuclideanCircle,
    pub theta_lo: f64,
    pub theta_hi: f64,
}

impl ClosedArc {
    pub fn new(circle: EuclideanCircle, theta_lo: f64, theta_hi: f64) -> Result<Self, GeoError> {
        let width = theta_hi - theta_lo;
        if width <= 0.0 || width > 2.0 * PI + 1e-12 {
            return Err(GeoError::BadArcWidth(width));
        }
        Ok(Self { circle, theta_lo, theta_hi })
    }

    pub fn width(&self) -> f64 {
        self.theta_hi - self.theta_lo
    }

    pub fn is_proper(&self) -> bool {
        self.width() < 2.0 * PI
    }

    /// Uniform closed sampling with `n` points, endpoints included.
    pub fn sample(&self, n: usize) -> Vec<Complex64> {
        let n = n.max(2);
        (0..n)
            .map(|k| {
                let theta = self.theta_lo + self.width() * k as f64 / (n - 1) as f64;
                self.circle.point_at(theta)
            })
            .collect()
    }
}

/// Stolz angle with vertex on the unit circle: `|Arg(1 - conj(tau) z)| < alpha`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StolzAngle {
    vertex: BoundaryPoint,
    half_opening: f64,
}

impl StolzAngle {
    pub fn new(vertex: BoundaryPoint, half_opening: f64) -> Result<Self, GeoError> {
        if half_opening > 0.0 && half_opening < PI / 2.0 {
            Ok(Self { vertex, half_opening })
        } else {
            Err(GeoError::BadStolzOpening(half_opening))
        }
    }

    pub fn vertex(&self) -> BoundaryPoint {
        self.vertex
    }

    pub fn half_opening(&self) -> f64 {
        self.half_opening
    }
}

/// Hyperbolic distance in the unit disk,
/// `rho(z1, z2) = log((1 + t)/(1 - t))` with `t = |z1 - z2| / |1 - conj(z1) z2|`.
pub fn hyp_dist_disk(z1: DiskPoint, z2: DiskPoint) -> f64 {
    let a = z1.value();
    let b = z2.value();
    let t = (a - b).norm() / (Complex64::new(1.0, 0.0) - a.conj() * b).norm();
    ((1.0 + t) / (1.0 - t)).ln()
}

/// The Cayley map `sigma(z) = (1 + z)/(1 - z)` from the disk onto the right
/// half-plane, and its inverse. These anchor the half-plane metric.
pub fn sigma(z: Complex64) -> Complex64 {
    (Complex64::new(1.0, 0.0) + z) / (Complex64::new(1.0, 0.0) - z)
}

pub fn sigma_inv(w: Complex64) -> Complex64 {
    (w - Complex64::new(1.0, 0.0)) / (w + Complex64::new(1.0, 0.0))
}

/// Hyperbolic distance in the right half-plane, pulled back through `sigma`.
pub fn hyp_dist_halfplane(w1: HalfPlanePoint, w2: HalfPlanePoint) -> Result<f64, GeoError> {
    let (a, b) = match (w1.finite(), w2.finite()) {
        (Some(a), Some(b)) => (a, b),
        _ => return Err(GeoError::InfinitePoint),
    };
    let za = DiskPoint::new(sigma_inv(a)).map_err(|_| GeoError::OutsideHalfPlane(a.re))?;
    let zb = DiskPoint::new(sigma_inv(b)).map_err(|_| GeoError::OutsideHalfPlane(b.re))?;
    Ok(hyp_dist_disk(za, zb))
}

/// Trapezoidal approximation of the hyperbolic length `2 int |g'|/(1 - |g|^2)`
/// of the piecewise-linear interpolant through `samples`.
///
/// Refining the sampling of a smooth curve drives the value to the true
/// hyperbolic length.
pub fn hyp_length_polyline(samples: &[DiskPoint]) -> Result<f64, GeoError> {
    if samples.len() < 2 {
        return Err(GeoError::TooFewSamples);
    }
    let density = |z: Complex64| 2.0 / (1.0 - z.norm_sqr());
    let mut total = 0.0;
    for (i, pair) in samples.windows(2).enumerate() {
        let a = pair[0].value();
        let b = pair[1].value();
        let chord = (b - a).norm();
        if chord == 0.0 {
            return Err(GeoError::DegenerateSegment(i));
        }
        total += chord * 0.5 * (density(a) + density(b));
    }
    Ok(total)
}

/// Cayley map `sigma_tau(z) = (tau + z)/(tau - z)` associated with a boundary
/// point. It sends the disk onto the right half-plane and `tau` to infinity.
pub fn cayley(tau: BoundaryPoint, z: DiskPoint) -> HalfPlanePoint {
    let t = tau.value();
    HalfPlanePoint::Finite((t + z.value()) / (t - z.value()))
}

/// Extension of `cayley` to the closed disk. The image of a circle point is a
/// point of the imaginary axis, and `tau` itself goes to infinity.
pub fn cayley_boundary(tau: BoundaryPoint, xi: BoundaryPoint) -> HalfPlanePoint {
    let t = tau.value();
    let x = xi.value();
    if (t - x).norm() <= MODULUS_TOL {
        return HalfPlanePoint::Infinity;
    }
    let w = (t + x) / (t - x);
    // Mathematically purely imaginary; drop the rounding residue in Re.
    HalfPlanePoint::Finite(Complex64::new(0.0, w.im))
}

/// Inverse Cayley map, `sigma_tau^{-1}(w) = tau (w - 1)/(w + 1)`; infinity
/// returns the vertex `tau` itself.
pub fn cayley_inv(tau: BoundaryPoint, w: HalfPlanePoint) -> Complex64 {
    match w {
        HalfPlanePoint::Finite(w) => {
            tau.value() * (w - Complex64::new(1.0, 0.0)) / (w + Complex64::new(1.0, 0.0))
        }
        HalfPlanePoint::Infinity => tau.value(),
    }
}

/// Derivative of `sigma_tau`, needed to transport vector fields.
pub fn cayley_derivative(tau: BoundaryPoint, z: Complex64) -> Complex64 {
    let t = tau.value();
    2.0 * t / ((t - z) * (t - z))
}

/// The involutive disk automorphism `alpha_tau(z) = (tau - z)/(1 - conj(tau) z)`.
/// It swaps `tau` and the origin and is a hyperbolic isometry.
pub fn mobius_involution(tau: DiskPoint, z: DiskPoint) -> DiskPoint {
    let t = tau.value();
    let w = (t - z.value()) / (Complex64::new(1.0, 0.0) - t.conj() * z.value());
    DiskPoint(w)
}

/// Same map on raw coordinates, for trajectory transport.
pub fn mobius_involution_raw(tau: Complex64, z: Complex64) -> Complex64 {
    (tau - z) / (Complex64::new(1.0, 0.0) - tau.conj() * z)
}

/// Horocycle factor `k_D(xi, z) = |xi - z|^2 / (1 - |z|^2)`.
pub fn horocycle_factor(xi: BoundaryPoint, z: DiskPoint) -> f64 {
    (xi.value() - z.value()).norm_sqr() / (1.0 - z.value().norm_sqr())
}

/// Euclidean realization of a horocycle: the circle of center `xi/(1 + k)`
/// and radius `k/(1 + k)`, internally tangent to the unit circle at `xi`.
pub fn horocycle_geometry(h: &Horocycle) -> EuclideanCircle {
    let k = h.factor();
    EuclideanCircle {
        center: h.contact().value() / (1.0 + k),
        radius: k / (1.0 + k),
    }
}

/// Euclidean realization of a hyperbolic disk. Centered disks have radius
/// `tanh(r/2)`; general centers are transported with `mobius_involution`,
/// which maps circles to circles and fixes the symmetry axis through the
/// origin and the center.
pub fn hyp_disk_geometry(d: &HypDisk) -> EuclideanCircle {
    let r_eucl = (d.radius() / 2.0).tanh();
    let a = d.center().value();
    if a.norm() == 0.0 {
        return EuclideanCircle { center: Complex64::new(0.0, 0.0), radius: r_eucl };
    }
    let u = a / a.norm();
    // Diametral points along the symmetry axis.
    let p1 = mobius_involution_raw(a, r_eucl * u);
    let p2 = mobius_involution_raw(a, -r_eucl * u);
    EuclideanCircle { center: 0.5 * (p1 + p2), radius: 0.5 * (p1 - p2).norm() }
}

/// Support on which an arc's hyperbolic angular extent is measured.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ArcSupport {
    Horocycle(Horocycle),
    HypCircle(HypDisk),
}

/// Number of samples used when integrating arc lengths.
pub const ARC_SAMPLES: usize = 10_000;

/// Hyperbolic angular extent of a closed arc lying on the boundary of a
/// horocycle (`len / k`) or of a hyperbolic disk (`len / sinh r`), with the
/// length obtained from `hyp_length_polyline` on a dense sampling.
pub fn angular_extent(arc: &ClosedArc, support: &ArcSupport) -> Result<f64, GeoError> {
    let (circle, divisor) = match support {
        ArcSupport::Horocycle(h) => (horocycle_geometry(h), h.factor()),
        ArcSupport::HypCircle(d) => (hyp_disk_geometry(d), d.radius().sinh()),
    };
    let center_err = (arc.circle.center - circle.center).norm();
    let radius_err = (arc.circle.radius - circle.radius).abs();
    let tol = ARC_SUPPORT_TOL * circle.radius.max(1e-300);
    if center_err > tol || radius_err > tol {
        return Err(GeoError::ArcOffSupport { center_err, radius_err });
    }
    if let ArcSupport::Horocycle(h) = support {
        // Angle of the contact point on the support circle.
        let xi = h.contact().value();
        let theta_contact = (xi - circle.center).arg();
        if arc_contains_angle(arc, theta_contact, 1e-9) {
            return Err(GeoError::InfiniteLength);
        }
    }
    let samples: Result<Vec<DiskPoint>, GeoError> =
        arc.sample(ARC_SAMPLES).into_iter().map(DiskPoint::new).collect();
    let length = hyp_length_polyline(&samples?)?;
    Ok(length / divisor)
}

/// Whether the angle `theta` (any branch) falls inside the arc's angular
/// range, with `slack` radians of margin on both sides.
pub fn arc_contains_angle(arc: &ClosedArc, theta: f64, slack: f64) -> bool {
    if arc.width() >= 2.0 * PI - 1e-15 {
        return true;
    }
    let mut t = theta;
    while t < arc.theta_lo - slack {
        t += 2.0 * PI;
    }
    while t > arc.theta_lo + 2.0 * PI {
        t -= 2.0 * PI;
    }
    t <= arc.theta_hi + slack
}

/// Membership in a Stolz angle: `|Arg(1 - conj(tau) z)| < alpha`.
pub fn stolz_contains(s: &StolzAngle, z: DiskPoint) -> bool {
    let q = Complex64::new(1.0, 0.0) - s.vertex().value().conj() * z.value();
    q.arg().abs() < s.half_opening()
}
