//! Batch execution of scenarios: classification over `(s, z)` grids,
//! validation tables, and artifact emission.
//!
//! Exit-code contract: 0 on success, 2 when any classification is
//! inconclusive or a grid shows a label mixture, 1 on errors (parse
//! failures, invalid fields, numerical breakdowns).

use crate::classify::{
    arg_omega_vs_lambda, automorphic_reports, classify_point, nontangential_check,
    spectral_function, theta_invariant, CaseLabel, ClassifyError, Regime,
};
use crate::evolution::{
    axiom_residuals, default_pair_probes, sample_trajectory, AxiomProbe, Domain, DwPoint,
    EvolveError,
};
use crate::herglotz::{default_probe_grid, validate_herglotz};
use crate::hypgeo::{hyp_dist_disk, hyp_dist_halfplane, BoundaryPoint, DiskPoint, HalfPlanePoint};
use crate::report::{point_report_value, render_json, trajectory_csv, fmt_f64, PointReport};
use crate::scenario::Scenario;
use num_complex::Complex64;
use rayon::prelude::*;
use serde_json::{Map, Value};
use std::path::{Path, PathBuf};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum RunnerError {
    #[error(transparent)]
    Classify(#[from] ClassifyError),
    #[error(transparent)]
    Evolve(#[from] EvolveError),
    #[error("cannot write artifacts: {0}")]
    Io(#[from] std::io::Error),
    #[error("sweep needs at least two grid points (use `run` for a single point)")]
    SweepNeedsGrid,
    #[error("worker pool: {0}")]
    Pool(String),
}

/// Everything `run` leaves on disk, plus the exit code.
#[derive(Debug)]
pub struct RunArtifacts {
    pub exit_code: i32,
    pub report_path: PathBuf,
    pub trajectory_paths: Vec<PathBuf>,
    pub inconclusive_points: usize,
}

/// Everything `sweep` leaves on disk.
#[derive(Debug)]
pub struct SweepArtifacts {
    pub exit_code: i32,
    pub report_path: PathBuf,
    pub summary_path: PathBuf,
    pub uniform: bool,
    pub labels: Vec<CaseLabel>,
}

/// One row of the validation table.
#[derive(Debug, Clone)]
pub struct ValidationRow {
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
}

fn analyze_point(scenario: &Scenario, index: usize, s: f64, z: Complex64) -> Result<PointReport, RunnerError> {
    let family = &scenario.family;
    let cfg = &scenario.cfg;
    let mut omega = classify_point(family, s, z, cfg)?;

    let spectral = if scenario.analyses.spectral {
        let n = 400usize;
        let grid: Vec<f64> = (0..=n).map(|k| cfg.horizon() * k as f64 / n as f64).collect();
        let sampled = spectral_function(family, &grid)?;
        // Dichotomy for inner families: the spectral limit diverges exactly
        // when the trajectory dies at the Denjoy-Wolff point.
        if omega.regime == Regime::Inner && omega.case != CaseLabel::Inconclusive {
            let diverges = matches!(sampled.l, crate::classify::SpectralLimit::Infinite);
            if diverges != (omega.case == CaseLabel::One) {
                omega.diagnostics.warnings.push(format!(
                    "spectral limit ({:?}) is inconsistent with case {}",
                    sampled.l, omega.case
                ));
            }
        }
        Some(sampled)
    } else {
        None
    };

    let arg_omega = if scenario.analyses.spectral && omega.regime == Regime::Inner {
        match arg_omega_vs_lambda(family, s, z, cfg) {
            Ok(r) => Some(Ok(r)),
            Err(ClassifyError::NotApplicable(msg)) => Some(Err(msg.to_string())),
            Err(other) => return Err(other.into()),
        }
    } else {
        None
    };

    let nontangential = if scenario.analyses.nontangential {
        match family.dw() {
            Some(DwPoint::Boundary(c)) => {
                let tau = BoundaryPoint::new(c).map_err(ClassifyError::Geometry)?;
                match nontangential_check(family, tau, s, z, cfg) {
                    Ok(r) => Some(Ok(r)),
                    Err(ClassifyError::NotApplicable(msg)) => Some(Err(msg.to_string())),
                    Err(other) => return Err(other.into()),
                }
            }
            _ => Some(Err("not applicable: requires a boundary Denjoy-Wolff point".to_string())),
        }
    } else {
        None
    };

    let automorphic = if scenario.analyses.automorphic {
        match automorphic_reports(family, cfg) {
            Ok(r) => Some(Ok(r)),
            Err(ClassifyError::NotAutomorphic) => {
                Some(Err("family is not of automorphic type".to_string()))
            }
            Err(other) => return Err(other.into()),
        }
    } else {
        None
    };

    Ok(PointReport {
        index,
        s,
        z,
        theta_value: omega.theta,
        omega,
        spectral,
        nontangential,
        arg_omega,
        automorphic,
    })
}

fn scenario_value(scenario: &Scenario) -> Value {
    let mut m = Map::new();
    m.insert("family".into(), Value::String(scenario.origin.to_string()));
    m.insert(
        "grid".into(),
        Value::Array(
            scenario
                .grid
                .iter()
                .map(|(s, z)| {
                    Value::Array(vec![
                        Value::from(*s),
                        Value::Array(vec![Value::from(z.re), Value::from(z.im)]),
                    ])
                })
                .collect(),
        ),
    );
    m.insert("horizon".into(), Value::from(scenario.cfg.horizon()));
    let mut integ = Map::new();
    integ.insert("rel_tol".into(), Value::from(scenario.cfg.integrator.rel_tol));
    integ.insert("abs_tol".into(), Value::from(scenario.cfg.integrator.abs_tol));
    integ.insert("max_step".into(), Value::from(scenario.cfg.integrator.max_step));
    integ.insert("output_grid".into(), Value::from(scenario.cfg.integrator.output_grid));
    m.insert("integrator".into(), Value::Object(integ));
    m.insert(
        "analyses".into(),
        Value::Array(scenario.analyses.names().into_iter().map(|n| Value::String(n.into())).collect()),
    );
    Value::Object(m)
}

fn theta_value_for(scenario: &Scenario) -> Option<Value> {
    if !scenario.analyses.theta {
        return None;
    }
    Some(match theta_invariant(&scenario.family, &scenario.grid, &scenario.cfg) {
        Ok(report) => {
            let mut m = Map::new();
            m.insert("case".into(), Value::String(report.case.as_str().into()));
            m.insert(
                "values".into(),
                Value::Array(report.values.iter().map(|v| Value::from(*v)).collect()),
            );
            m.insert("spread".into(), Value::from(report.spread));
            Value::Object(m)
        }
        Err(ClassifyError::NotApplicable(msg)) => Value::String(msg.to_string()),
        Err(ClassifyError::NotUniform(detail)) => {
            Value::String(format!("family classification not uniform: {detail}"))
        }
        Err(_) => Value::String("theta analysis failed".to_string()),
    })
}

fn aggregate_report(scenario: &Scenario, points: &[PointReport], validation: Option<&[ValidationRow]>) -> Value {
    let mut root = Map::new();
    root.insert("scenario".into(), scenario_value(scenario));
    root.insert(
        "points".into(),
        Value::Array(
            points
                .iter()
                .map(|p| point_report_value(p, scenario.family.domain(), scenario.family.dw()))
                .collect(),
        ),
    );
    let labels: Vec<CaseLabel> = points.iter().map(|p| p.omega.case).collect();
    let uniform = labels.windows(2).all(|w| w[0] == w[1]);
    root.insert(
        "uniform_case".into(),
        if uniform {
            Value::String(labels[0].as_str().into())
        } else {
            Value::String("mixed".into())
        },
    );
    if let Some(theta) = theta_value_for(scenario) {
        root.insert("theta".into(), theta);
    }
    if let Some(rows) = validation {
        root.insert(
            "validation".into(),
            Value::Array(
                rows.iter()
                    .map(|r| {
                        let mut m = Map::new();
                        m.insert("check".into(), Value::String(r.name.into()));
                        m.insert("pass".into(), Value::Bool(r.pass));
                        m.insert("detail".into(), Value::String(r.detail.clone()));
                        Value::Object(m)
                    })
                    .collect(),
            ),
        );
    }
    Value::Object(root)
}

/// Run a scenario: one trajectory CSV per grid point plus a combined report.
pub fn run(scenario: &Scenario, out_dir: &Path) -> Result<RunArtifacts, RunnerError> {
    std::fs::create_dir_all(out_dir)?;
    let mut points = Vec::with_capacity(scenario.grid.len());
    let mut trajectory_paths = Vec::with_capacity(scenario.grid.len());
    for (index, &(s, z)) in scenario.grid.iter().enumerate() {
        points.push(analyze_point(scenario, index, s, z)?);
        let traj = sample_trajectory(&scenario.family, s, z, &scenario.cfg.integrator)?;
        let path = out_dir.join(format!("traj_{index:03}.csv"));
        std::fs::write(&path, trajectory_csv(&traj))?;
        trajectory_paths.push(path);
    }
    let validation = if scenario.analyses.validate { Some(validate(scenario)?) } else { None };
    let report = aggregate_report(scenario, &points, validation.as_deref());
    let report_path = out_dir.join("report.json");
    std::fs::write(&report_path, render_json(&report))?;

    let inconclusive = points.iter().filter(|p| p.omega.case == CaseLabel::Inconclusive).count();
    let failed_validation =
        validation.as_deref().map(|rows| rows.iter().any(|r| !r.pass)).unwrap_or(false);
    let exit_code = if failed_validation {
        1
    } else if inconclusive > 0 {
        2
    } else {
        0
    };
    Ok(RunArtifacts { exit_code, report_path, trajectory_paths, inconclusive_points: inconclusive })
}

/// Family-level validation table: evolution axioms, Schwarz-Pick
/// contraction, monotone half-plane real part (boundary families), and the
/// Herglotz data checks for declared fields.
pub fn validate(scenario: &Scenario) -> Result<Vec<ValidationRow>, RunnerError> {
    let family = &scenario.family;
    let horizon = scenario.cfg.horizon().min(20.0);
    let mut rows = Vec::new();

    // Axioms over probes derived from the scenario grid.
    let mut probes = Vec::new();
    for &(s, z) in &scenario.grid {
        for frac in [0.25, 0.6] {
            let u = s + frac * (horizon - s).max(0.0) * 0.5;
            let t = s + frac * (horizon - s).max(0.0);
            if t > u && u > s {
                probes.push(AxiomProbe { s, u, t, z });
            }
        }
    }
    if probes.is_empty() {
        probes.push(AxiomProbe { s: 0.0, u: 1.0, t: 2.0, z: Complex64::new(0.0, 0.0) });
    }
    let max_span = probes.iter().map(|p| p.t - p.s).fold(0.0f64, f64::max);
    let axioms = axiom_residuals(family, &probes)?;
    let comp_tol = 1e-7 * (1.0 + max_span / 10.0);
    rows.push(ValidationRow {
        name: "identity-axiom",
        pass: axioms.max_identity_residual < 1e-9,
        detail: format!("max |phi_ss(z) - z| = {:.3e}", axioms.max_identity_residual),
    });
    rows.push(ValidationRow {
        name: "composition-axiom",
        pass: axioms.max_composition_residual < comp_tol,
        detail: format!(
            "max residual = {:.3e} (tolerance {:.3e})",
            axioms.max_composition_residual, comp_tol
        ),
    });
    rows.push(ValidationRow {
        name: "injectivity-probe",
        pass: axioms.min_image_separation > 0.0,
        detail: format!("min image separation = {:.3e}", axioms.min_image_separation),
    });

    // Schwarz-Pick contraction on probe pairs.
    let pairs = default_pair_probes(family.domain());
    let mut worst = f64::NEG_INFINITY;
    for (s, t) in [(0.0, 1.0), (0.0, horizon * 0.5), (1.0, horizon.max(1.5))] {
        if t <= s {
            continue;
        }
        for &(z1, z2) in &pairs {
            let (before, after) = match family.domain() {
                Domain::Disk => {
                    let before = hyp_dist_disk(
                        DiskPoint::new(z1).map_err(EvolveError::Geometry)?,
                        DiskPoint::new(z2).map_err(EvolveError::Geometry)?,
                    );
                    let a = family.eval(s, t, z1)?;
                    let b = family.eval(s, t, z2)?;
                    let after = hyp_dist_disk(
                        DiskPoint::new(a).map_err(EvolveError::Geometry)?,
                        DiskPoint::new(b).map_err(EvolveError::Geometry)?,
                    );
                    (before, after)
                }
                Domain::HalfPlane => {
                    let before = hyp_dist_halfplane(
                        HalfPlanePoint::new(z1).map_err(EvolveError::Geometry)?,
                        HalfPlanePoint::new(z2).map_err(EvolveError::Geometry)?,
                    )
                    .map_err(EvolveError::Geometry)?;
                    let a = family.eval(s, t, z1)?;
                    let b = family.eval(s, t, z2)?;
                    let after = hyp_dist_halfplane(
                        HalfPlanePoint::new(a).map_err(EvolveError::Geometry)?,
                        HalfPlanePoint::new(b).map_err(EvolveError::Geometry)?,
                    )
                    .map_err(EvolveError::Geometry)?;
                    (before, after)
                }
            };
            worst = worst.max(after - before);
        }
    }
    rows.push(ValidationRow {
        name: "schwarz-pick",
        pass: worst < 1e-9,
        detail: format!("max expansion = {:.3e}", worst),
    });

    // Monotone real part along half-plane trajectories, boundary regime.
    if let Some(DwPoint::Boundary(c)) = family.dw() {
        let cfg = crate::evolution::IntegratorConfig {
            horizon,
            output_grid: (horizon / 400.0).max(1e-3),
            ..scenario.cfg.integrator
        };
        let mut worst_drop = 0.0f64;
        for &(s, z) in &scenario.grid {
            if s >= horizon {
                continue;
            }
            let traj = sample_trajectory(family, s, z, &cfg)?;
            let re: Vec<f64> = match family.domain() {
                Domain::HalfPlane => traj.points.iter().map(|w| w.re).collect(),
                Domain::Disk => traj.points.iter().map(|p| ((c + p) / (c - p)).re).collect(),
            };
            for w in re.windows(2) {
                worst_drop = worst_drop.max(w[0] - w[1]);
            }
        }
        rows.push(ValidationRow {
            name: "monotone-re",
            pass: worst_drop < 1e-9,
            detail: format!("max decrease of Re = {:.3e}", worst_drop),
        });
    }

    // Declared-field Herglotz checks.
    if let Some(field) = &scenario.declared_field {
        let report = validate_herglotz(&field.p, &default_probe_grid(&field.breakpoints));
        rows.push(ValidationRow {
            name: "herglotz-data",
            pass: report.pass(),
            detail: report.to_string(),
        });
    }
    Ok(rows)
}

/// Parallel classification over a multi-point grid with a label-uniformity
/// gate. Writes `summary.csv` and `report.json`.
pub fn sweep(scenario: &Scenario, out_dir: &Path, jobs: usize) -> Result<SweepArtifacts, RunnerError> {
    if scenario.grid.len() < 2 {
        return Err(RunnerError::SweepNeedsGrid);
    }
    std::fs::create_dir_all(out_dir)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| RunnerError::Pool(e.to_string()))?;
    let results: Vec<Result<PointReport, RunnerError>> = pool.install(|| {
        scenario
            .grid
            .par_iter()
            .enumerate()
            .map(|(index, &(s, z))| analyze_point(scenario, index, s, z))
            .collect()
    });
    let mut points = Vec::with_capacity(results.len());
    for r in results {
        points.push(r?);
    }

    let labels: Vec<CaseLabel> = points.iter().map(|p| p.omega.case).collect();
    let uniform = labels.windows(2).all(|w| w[0] == w[1]);
    let inconclusive = labels.contains(&CaseLabel::Inconclusive);

    let mut summary = String::from("index,s,z_re,z_im,case,re_limit,k,r,theta\n");
    for p in &points {
        let opt = |v: Option<f64>| v.map(fmt_f64).unwrap_or_default();
        summary.push_str(&format!(
            "{},{},{},{},{},{},{},{},{}\n",
            p.index,
            fmt_f64(p.s),
            fmt_f64(p.z.re),
            fmt_f64(p.z.im),
            p.omega.case,
            opt(p.omega.re_limit),
            opt(p.omega.k),
            opt(p.omega.r),
            opt(p.omega.theta),
        ));
    }
    let summary_path = out_dir.join("summary.csv");
    std::fs::write(&summary_path, summary)?;

    let report = aggregate_report(scenario, &points, None);
    let report_path = out_dir.join("report.json");
    std::fs::write(&report_path, render_json(&report))?;

    let exit_code = if uniform && !inconclusive { 0 } else { 2 };
    Ok(SweepArtifacts { exit_code, report_path, summary_path, uniform, labels })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenario::Scenario;

    fn tmpdir(tag: &str) -> PathBuf {
        let dir = std::env::temp_dir().join(format!(
            "loewner-runner-{tag}-{}-{}",
            std::process::id(),
            std::time::SystemTime::now().duration_since(std::time::UNIX_EPOCH).unwrap().as_nanos()
        ));
        std::fs::create_dir_all(&dir).unwrap();
        dir
    }

    #[test]
    fn run_b1_produces_case_one_artifacts() {
        let scenario = Scenario::from_json_str(
            r#"{"family": "B1", "grid": [[0.0, [0.0, 0.0]]], "horizon": 200.0, "analyses": ["classify"]}"#,
        )
        .unwrap();
        let dir = tmpdir("run-b1");
        let artifacts = run(&scenario, &dir).unwrap();
        assert_eq!(artifacts.exit_code, 0);
        let report = std::fs::read_to_string(&artifacts.report_path).unwrap();
        assert!(report.contains("\"case\": \"1\""));
        let csv = std::fs::read_to_string(&artifacts.trajectory_paths[0]).unwrap();
        assert!(csv.starts_with("t,re,im,local_error\n"));
        assert!(csv.lines().count() > 1000);
        std::fs::remove_dir_all(&dir).ok();
    }

    #[test]
    fn run_is_byte_deterministic() {
        let text = r#"{"family": "I2", "grid": [[0.0, [0.5, 0.0]], [1.0, [0.0, 0.2]]], "horizon": 120.0, "analyses": ["classify", "spectral"]}"#;
        let dir_a = tmpdir("det-a");
        let dir_b = tmpdir("det-b");
        let a = run(&Scenario::from_json_str(text).unwrap(), &dir_a).unwrap();
        let b = run(&Scenario::from_json_str(text).unwrap(), &dir_b).unwrap();
        let ra = std::fs::read(&a.report_path).unwrap();
        let rb = std::fs::read(&b.report_path).unwrap();
        assert_eq!(ra, rb);
        for (pa, pb) in a.trajectory_paths.iter().zip(&b.trajectory_paths) {
            assert_eq!(std::fs::read(pa).unwrap(), std::fs::read(pb).unwrap());
        }
        std::fs::remove_dir_all(&dir_a).ok();
        std::fs::remove_dir_all(&dir_b).ok();
    }

    #[test]
    fn validate_catalog_family_passes() {
        let scenario = Scenario::from_json_str(
            r#"{"family": "B3", "grid": [[0.0, [0.0, 0.0]], [1.0, [0.3, 0.1]]], "horizon": 50.0, "analyses": ["validate"]}"#,
        )
        .unwrap();
        let rows = validate(&scenario).unwrap();
        assert!(rows.iter().all(|r| r.pass), "{rows:?}");
        assert!(rows.iter().any(|r| r.name == "monotone-re"));
    }

    #[test]
    fn sweep_uniformity() {
        let scenario = Scenario::from_json_str(
            r#"{"family": "I2", "grid": [[0.0, [0.5, 0.0]], [1.0, [0.0, 0.2]], [0.5, [-0.3, 0.1]], [2.0, [0.1, 0.4]]], "horizon": 150.0, "analyses": ["classify"]}"#,
        )
        .unwrap();
        let dir = tmpdir("sweep-i2");
        let artifacts = sweep(&scenario, &dir, 2).unwrap();
        assert_eq!(artifacts.exit_code, 0);
        assert!(artifacts.uniform);
        assert!(artifacts.labels.iter().all(|l| *l == CaseLabel::Two));
        let summary = std::fs::read_to_string(&artifacts.summary_path).unwrap();
        assert_eq!(summary.lines().count(), 5);
        std::fs::remove_dir_all(&dir).ok();
    }

    #[test]
    fn sweep_rejects_single_point() {
        let scenario = Scenario::from_json_str(
            r#"{"family": "B1", "grid": [[0.0, [0.0, 0.0]]], "horizon": 100.0, "analyses": ["classify"]}"#,
        )
        .unwrap();
        let dir = tmpdir("sweep-single");
        assert!(matches!(sweep(&scenario, &dir, 1), Err(RunnerError::SweepNeedsGrid)));
        std::fs::remove_dir_all(&dir).ok();
    }
}
