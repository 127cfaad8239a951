//! Closed-form catalog of evolution families.
//!
//! Boundary entries (Denjoy-Wolff point 1) are the linear-fractional families
//!
//! ```text
//! phi_{s,t}(z) = 1 + (z - 1) / (1 - (z - 1)(m(t) - m(s)))
//! ```
//!
//! whose Cayley conjugates are the half-plane translations
//! `w + 2(m(t) - m(s))`. Inner entries (Denjoy-Wolff point 0) are the linear
//! families `exp(nu(s) - nu(t)) z`. Each entry carries its drift `m` or
//! exponent `nu`, the analytic rate, and a nominal asymptotic class used for
//! cross-checking classifier output.

use num_complex::Complex64;
use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

/// Breakpoints are generated up to this time for the one catalog entry whose
/// rate is only piecewise continuous.
pub const BREAKPOINT_SPAN: f64 = 20_000.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CatalogId {
    B1,
    B2,
    B3,
    B4,
    /// Supplementary entry with one-sided unbounded drift; not part of the
    /// original nine, provided as a genuine proper-arc-to-the-vertex example.
    B4Prime,
    B5,
    I1,
    I2,
    I3,
    I4,
}

impl CatalogId {
    pub const ALL: [CatalogId; 10] = [
        CatalogId::B1,
        CatalogId::B2,
        CatalogId::B3,
        CatalogId::B4,
        CatalogId::B4Prime,
        CatalogId::B5,
        CatalogId::I1,
        CatalogId::I2,
        CatalogId::I3,
        CatalogId::I4,
    ];

    pub fn is_boundary(&self) -> bool {
        matches!(
            self,
            CatalogId::B1 | CatalogId::B2 | CatalogId::B3 | CatalogId::B4 | CatalogId::B4Prime | CatalogId::B5
        )
    }

    /// Documented asymptotic class of the entry. The classifier reports any
    /// disagreement between this annotation and what it actually measures.
    pub fn nominal_label(&self) -> &'static str {
        match self {
            CatalogId::B1 | CatalogId::I1 => "1",
            CatalogId::B2 | CatalogId::I2 => "2",
            CatalogId::B3 | CatalogId::I3 => "3a",
            CatalogId::B4 | CatalogId::B4Prime | CatalogId::I4 => "3b",
            CatalogId::B5 => "3c",
        }
    }

    /// Drift `m(t)` of a boundary entry.
    pub fn drift(&self, t: f64) -> Complex64 {
        match self {
            CatalogId::B1 => Complex64::new(t, t.sin()),
            CatalogId::B2 => Complex64::new(-(-t).exp(), -1.0 / (1.0 + t)),
            CatalogId::B3 => Complex64::new(-(-t).exp(), t * t.sin()),
            CatalogId::B4 => Complex64::new(-(-t).exp(), t * t * t.sin()),
            CatalogId::B4Prime => Complex64::new(-(-t).exp(), t * (1.0 + t.sin())),
            CatalogId::B5 => Complex64::new(-(-t).exp(), t.sin()),
            _ => unreachable!("drift is defined for boundary entries only"),
        }
    }

    /// Rate `m'(t)` of a boundary entry.
    pub fn drift_rate(&self, t: f64) -> Complex64 {
        match self {
            CatalogId::B1 => Complex64::new(1.0, t.cos()),
            CatalogId::B2 => Complex64::new((-t).exp(), 1.0 / ((1.0 + t) * (1.0 + t))),
            CatalogId::B3 => Complex64::new((-t).exp(), t.sin() + t * t.cos()),
            CatalogId::B4 => Complex64::new((-t).exp(), 2.0 * t * t.sin() + t * t * t.cos()),
            CatalogId::B4Prime => Complex64::new((-t).exp(), 1.0 + t.sin() + t * t.cos()),
            CatalogId::B5 => Complex64::new((-t).exp(), t.cos()),
            _ => unreachable!("drift_rate is defined for boundary entries only"),
        }
    }

    /// Exponent `nu(t)` of an inner entry.
    pub fn exponent(&self, t: f64) -> Complex64 {
        match self {
            CatalogId::I1 => Complex64::new(t, 0.0),
            CatalogId::I2 => Complex64::new(t.atan(), 0.0),
            CatalogId::I3 => Complex64::new(0.0, t),
            CatalogId::I4 => Complex64::new(0.0, PI * t.sin().abs()),
            _ => unreachable!("exponent is defined for inner entries only"),
        }
    }

    /// Rate `nu'(t)` of an inner entry; undefined exactly at the declared
    /// breakpoints, where the one-sided regimes meet.
    pub fn exponent_rate(&self, t: f64) -> Complex64 {
        match self {
            CatalogId::I1 => Complex64::new(1.0, 0.0),
            CatalogId::I2 => Complex64::new(1.0 / (1.0 + t * t), 0.0),
            CatalogId::I3 => Complex64::new(0.0, 1.0),
            CatalogId::I4 => Complex64::new(0.0, PI * t.cos() * t.sin().signum()),
            _ => unreachable!("exponent_rate is defined for inner entries only"),
        }
    }

    /// Times where the rate loses continuity.
    pub fn breakpoints(&self) -> Vec<f64> {
        match self {
            CatalogId::I4 => {
                let n = (BREAKPOINT_SPAN / PI).floor() as usize;
                (0..=n).map(|k| k as f64 * PI).collect()
            }
            _ => Vec::new(),
        }
    }
}

impl fmt::Display for CatalogId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            CatalogId::B1 => "B1",
            CatalogId::B2 => "B2",
            CatalogId::B3 => "B3",
            CatalogId::B4 => "B4",
            CatalogId::B4Prime => "B4'",
            CatalogId::B5 => "B5",
            CatalogId::I1 => "I1",
            CatalogId::I2 => "I2",
            CatalogId::I3 => "I3",
            CatalogId::I4 => "I4",
        };
        f.write_str(name)
    }
}

impl FromStr for CatalogId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_uppercase().as_str() {
            "B1" => Ok(CatalogId::B1),
            "B2" => Ok(CatalogId::B2),
            "B3" => Ok(CatalogId::B3),
            "B4" => Ok(CatalogId::B4),
            "B4'" | "B4P" | "B4PRIME" | "B4\u{2032}" => Ok(CatalogId::B4Prime),
            "B5" => Ok(CatalogId::B5),
            "I1" => Ok(CatalogId::I1),
            "I2" => Ok(CatalogId::I2),
            "I3" => Ok(CatalogId::I3),
            "I4" => Ok(CatalogId::I4),
            other => Err(format!("unknown catalog id `{other}`")),
        }
    }
}
