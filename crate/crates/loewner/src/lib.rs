//! Numerical study of non-autonomous Loewner evolution families driven by
//! generalized Herglotz vector fields with a constant Denjoy-Wolff point.
//!
//! The crate simulates trajectories `t -> phi_{s,t}(z)` of evolution families
//! on the unit disk and the right half-plane, classifies their asymptotic
//! behavior into mutually exclusive dynamical cases (convergence to the
//! Denjoy-Wolff point, convergence to a univalent limit, or omega-limit sets
//! that are full circles or closed circular arcs on horocycle and
//! hyperbolic-circle boundaries), and reports the attached hyperbolic
//! geometry: horocycle factors, hyperbolic radii, angular extents, spectral
//! functions and non-tangential approach.
//!
//! Module map:
//! - [`hypgeo`]: exact hyperbolic geometry of the disk and half-plane;
//! - [`herglotz`]: Herglotz vector fields in factored form, validation,
//!   half-plane transfer, generator recovery;
//! - [`expr`]: the small expression grammar used to declare fields in
//!   scenario files;
//! - [`evolution`]: the closed-form family catalog, the Caratheodory ODE
//!   integrator, trajectory sampling and family-level probes;
//! - [`classify`]: omega-limit estimation, the asymptotic case taxonomy and
//!   the spectral/automorphic/non-tangential diagnostics;
//! - [`scenario`] and [`runner`]: declarative scenario files and the
//!   batch runner behind the command-line interface;
//! - [`report`]: deterministic JSON/CSV rendering of results.
//!
//! Classifying one trajectory of a catalog family:
//!
//! ```
//! use loewner::classify::{classify_point, CaseLabel, ClassifyConfig};
//! use loewner::evolution::{catalog_family, CatalogId};
//! use num_complex::Complex64;
//!
//! let family = catalog_family(CatalogId::B5);
//! let cfg = ClassifyConfig::with_horizon(400.0);
//! let est = classify_point(&family, 0.0, Complex64::new(0.0, 0.0), &cfg).unwrap();
//!
//! assert_eq!(est.case, CaseLabel::ThreeC);
//! let k = est.k.unwrap();
//! assert!((k - 1.0 / 3.0).abs() < 1e-3);
//! assert!((est.theta.unwrap() - 4.0).abs() < 0.05);
//! ```

pub mod classify;
pub mod evolution;
pub mod expr;
pub mod herglotz;
pub mod hypgeo;
pub mod report;
pub mod runner;
pub mod scenario;
