//! Adaptive embedded Runge-Kutta integration of Caratheodory initial value
//! problems `dz/dt = G(z, t)` with complex state.
//!
//! The scheme is Dormand-Prince 5(4). Steps never cross a declared
//! `t`-regularity breakpoint: the step size is clamped to land exactly on the
//! next breakpoint, and stage evaluations that would touch a breakpoint are
//! nudged into the interior of the current regularity interval, so the formal
//! order survives piecewise-continuous rates. Steps that leave the closed
//! domain by more than `abs_tol` are rejected and halved; a persistent exit
//! signals an invalid field and is an error, since valid fields keep
//! solutions inside for all time.

use super::{Domain, EvolveError, IntegratorConfig};
use num_complex::Complex64;

const STAGE_TIMES: [f64; 7] = [0.0, 0.2, 0.3, 0.8, 8.0 / 9.0, 1.0, 1.0];

const A: [[f64; 6]; 6] = [
    [0.2, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];

/// Fifth-order weights (the last row of `A`, FSAL layout).
const B5: [f64; 7] = [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0, 0.0];

/// Difference between the fifth- and embedded fourth-order weights.
const ERR_W: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

const SAFETY: f64 = 0.9;
const MIN_FACTOR: f64 = 0.2;
const MAX_FACTOR: f64 = 5.0;
/// Consecutive domain-exit rejections tolerated before giving up.
const MAX_DOMAIN_REJECTS: u32 = 60;

fn snap_tol(t: f64) -> f64 {
    1e-13 * t.abs().max(1.0)
}

fn outside(domain: Domain, z: Complex64, slack: f64) -> bool {
    match domain {
        Domain::Disk => z.norm() > 1.0 + slack,
        Domain::HalfPlane => z.re < -slack,
    }
}

/// State of one integration march; callers advance it target by target so the
/// trajectory is produced in a single sweep.
pub(crate) struct March<'a, F: Fn(Complex64, f64) -> Complex64> {
    field: F,
    breakpoints: &'a [f64],
    domain: Domain,
    cfg: &'a IntegratorConfig,
    pub t: f64,
    pub y: Complex64,
    /// Accumulated local error estimates along the accepted steps.
    pub error_accum: f64,
    h: f64,
}

impl<'a, F: Fn(Complex64, f64) -> Complex64> March<'a, F> {
    pub fn new(
        field: F,
        breakpoints: &'a [f64],
        domain: Domain,
        cfg: &'a IntegratorConfig,
        s: f64,
        z: Complex64,
    ) -> Result<Self, EvolveError> {
        cfg.validate()?;
        if outside(domain, z, 1e-12) {
            return Err(EvolveError::OutsideDomain(z));
        }
        Ok(Self {
            field,
            breakpoints,
            domain,
            cfg,
            t: s,
            y: z,
            error_accum: 0.0,
            h: cfg.max_step.min(0.1),
        })
    }

    /// First declared breakpoint strictly ahead of `t`.
    fn next_breakpoint(&self, t: f64) -> Option<f64> {
        let idx = self.breakpoints.partition_point(|b| *b <= t + snap_tol(t));
        self.breakpoints.get(idx).copied()
    }

    /// Interval of `t`-regularity containing `t`.
    fn regularity_interval(&self, t: f64) -> (f64, f64) {
        let idx = self.breakpoints.partition_point(|b| *b <= t + snap_tol(t));
        let lo = if idx == 0 { f64::NEG_INFINITY } else { self.breakpoints[idx - 1] };
        let hi = self.breakpoints.get(idx).copied().unwrap_or(f64::INFINITY);
        (lo, hi)
    }

    fn eval_field(&self, z: Complex64, t: f64, seg: (f64, f64)) -> Complex64 {
        // Keep stage times strictly inside the current regularity interval.
        let delta = 1e-12 * t.abs().max(1.0);
        let mut te = t;
        if te - seg.0 < delta {
            te = seg.0 + delta;
        }
        if seg.1 - te < delta && seg.1.is_finite() {
            te = seg.1 - delta;
        }
        (self.field)(z, te)
    }

    /// Advance to `target` exactly. Intermediate accepted steps are reported
    /// through `observer(t, y, error_accum)`.
    pub fn advance_to(
        &mut self,
        target: f64,
        mut observer: impl FnMut(f64, Complex64, f64),
    ) -> Result<(), EvolveError> {
        if target < self.t - snap_tol(self.t) {
            return Err(EvolveError::BadSpan { s: self.t, t: target });
        }
        let mut domain_rejects = 0u32;
        while self.t < target - snap_tol(self.t) {
            let seg = self.regularity_interval(self.t);
            let wall = match self.next_breakpoint(self.t) {
                Some(b) if b < target => b,
                _ => target,
            };
            if wall - self.t <= snap_tol(self.t) {
                self.t = wall;
                continue;
            }
            let mut h = self.h.min(self.cfg.max_step).min(wall - self.t);
            let lands_on_wall = h >= wall - self.t - snap_tol(self.t);
            if lands_on_wall {
                h = wall - self.t;
            }

            let mut k = [Complex64::new(0.0, 0.0); 7];
            k[0] = self.eval_field(self.y, self.t, seg);
            for i in 1..7 {
                let mut acc = Complex64::new(0.0, 0.0);
                for (j, kj) in k.iter().enumerate().take(i) {
                    let coeff = A[i - 1][j];
                    if coeff != 0.0 {
                        acc += coeff * kj;
                    }
                }
                k[i] = self.eval_field(self.y + h * acc, self.t + STAGE_TIMES[i] * h, seg);
            }
            let mut y5 = self.y;
            let mut err = Complex64::new(0.0, 0.0);
            for i in 0..7 {
                if B5[i] != 0.0 {
                    y5 += h * B5[i] * k[i];
                }
                if ERR_W[i] != 0.0 {
                    err += h * ERR_W[i] * k[i];
                }
            }
            let scale = self.cfg.abs_tol + self.cfg.rel_tol * self.y.norm().max(y5.norm());
            let ratio = err.norm() / scale;

            if ratio <= 1.0 {
                if outside(self.domain, y5, self.cfg.abs_tol) {
                    domain_rejects += 1;
                    if domain_rejects > MAX_DOMAIN_REJECTS {
                        return Err(EvolveError::DomainExit { t: self.t, z: y5 });
                    }
                    self.h = 0.5 * h;
                    self.check_underflow()?;
                    continue;
                }
                domain_rejects = 0;
                self.t = if lands_on_wall { wall } else { self.t + h };
                self.y = y5;
                self.error_accum += err.norm();
                observer(self.t, self.y, self.error_accum);
                let factor = if ratio < 1e-10 { MAX_FACTOR } else { (SAFETY * ratio.powf(-0.2)).clamp(MIN_FACTOR, MAX_FACTOR) };
                self.h = (h * factor).min(self.cfg.max_step);
            } else {
                self.h = h * (SAFETY * ratio.powf(-0.2)).clamp(MIN_FACTOR, 1.0);
                self.check_underflow()?;
            }
        }
        self.t = target;
        Ok(())
    }

    fn check_underflow(&self) -> Result<(), EvolveError> {
        if self.h < 1e-14 * self.t.abs().max(1.0) {
            Err(EvolveError::StepUnderflow { t: self.t })
        } else {
            Ok(())
        }
    }
}

/// Integrate from `(s, z)` to time `t` and return the endpoint value.
pub(crate) fn integrate_value<F: Fn(Complex64, f64) -> Complex64>(
    field: F,
    breakpoints: &[f64],
    domain: Domain,
    cfg: &IntegratorConfig,
    s: f64,
    t: f64,
    z: Complex64,
) -> Result<Complex64, EvolveError> {
    let mut march = March::new(field, breakpoints, domain, cfg, s, z)?;
    march.advance_to(t, |_, _, _| {})?;
    Ok(march.y)
}
