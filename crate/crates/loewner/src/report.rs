//! Deterministic rendering of reports and trajectories.
//!
//! Identical inputs must produce byte-identical artifacts, so every float is
//! printed with 17 significant digits in lowercase scientific notation, JSON
//! object keys are emitted in sorted order, and no timestamps or machine
//! identifiers enter the payload.

use crate::classify::{
    ArgOmegaReport, AutomorphicReport, IntervalEstimate, IntervalKind, NontangentialReport,
    OmegaLimitEstimate, Regime, SpectralLimit, SpectralSamples,
};
use crate::evolution::{Domain, DwPoint, Trajectory};
use crate::hypgeo::ClosedArc;
use num_complex::Complex64;
use serde_json::{Map, Value};

/// 17 significant digits, lowercase scientific: round-trips exactly.
pub fn fmt_f64(x: f64) -> String {
    if x == 0.0 {
        // Normalize the sign of zero.
        return "0.0000000000000000e0".to_string();
    }
    format!("{x:.16e}")
}

fn fnum(x: f64) -> Value {
    if x.is_finite() {
        Value::from(x)
    } else if x.is_nan() {
        Value::String("nan".to_string())
    } else if x > 0.0 {
        Value::String("infinity".to_string())
    } else {
        Value::String("-infinity".to_string())
    }
}

fn complex(c: Complex64) -> Value {
    Value::Array(vec![fnum(c.re), fnum(c.im)])
}

fn interval_kind(kind: IntervalKind) -> &'static str {
    match kind {
        IntervalKind::Point => "point",
        IntervalKind::Compact => "compact",
        IntervalKind::UnboundedAbove => "unbounded-above",
        IntervalKind::UnboundedBelow => "unbounded-below",
        IntervalKind::FullLine => "full-line",
        IntervalKind::FullLineWithInfinity => "full-line-with-infinity",
        IntervalKind::Inconclusive => "inconclusive",
    }
}

fn interval_value(est: &IntervalEstimate) -> Value {
    let mut m = Map::new();
    m.insert("kind".into(), Value::String(interval_kind(est.kind).into()));
    m.insert("lo".into(), est.lo.map(fnum).unwrap_or(Value::Null));
    m.insert("hi".into(), est.hi.map(fnum).unwrap_or(Value::Null));
    Value::Object(m)
}

fn arc_value(arc: &ClosedArc) -> Value {
    let mut m = Map::new();
    m.insert("center".into(), complex(arc.circle.center));
    m.insert("radius".into(), fnum(arc.circle.radius));
    m.insert("theta_lo".into(), fnum(arc.theta_lo));
    m.insert("theta_hi".into(), fnum(arc.theta_hi));
    Value::Object(m)
}

/// One grid point's full classification payload.
pub struct PointReport {
    pub index: usize,
    pub s: f64,
    pub z: Complex64,
    pub omega: OmegaLimitEstimate,
    pub spectral: Option<SpectralSamples>,
    pub nontangential: Option<Result<NontangentialReport, String>>,
    pub arg_omega: Option<Result<ArgOmegaReport, String>>,
    pub automorphic: Option<Result<AutomorphicReport, String>>,
    pub theta_value: Option<f64>,
}

/// Maximum spectral samples embedded per point; longer series are thinned
/// deterministically.
const MAX_LAMBDA_SAMPLES: usize = 256;

pub fn point_report_value(report: &PointReport, domain: Domain, dw: Option<DwPoint>) -> Value {
    let omega = &report.omega;
    let mut m = Map::new();
    m.insert("case".into(), Value::String(omega.case.as_str().into()));
    m.insert(
        "regime".into(),
        Value::String(match omega.regime {
            Regime::Boundary => "boundary".into(),
            Regime::Inner => "inner".into(),
        }),
    );
    m.insert(
        "domain".into(),
        Value::String(match domain {
            Domain::Disk => "disk".into(),
            Domain::HalfPlane => "half-plane".into(),
        }),
    );
    m.insert(
        "tau".into(),
        match dw {
            Some(DwPoint::Inner(c)) | Some(DwPoint::Boundary(c)) => complex(c),
            Some(DwPoint::Infinity) => Value::String("infinity".into()),
            None => Value::Null,
        },
    );
    m.insert("grid_index".into(), Value::from(report.index as u64));
    m.insert("s".into(), fnum(report.s));
    m.insert("z".into(), complex(report.z));
    m.insert("re_limit".into(), omega.re_limit.map(fnum).unwrap_or(Value::Null));
    m.insert(
        "interval".into(),
        omega.interval.as_ref().map(interval_value).unwrap_or(Value::Null),
    );
    m.insert("k".into(), omega.k.map(fnum).unwrap_or(Value::Null));
    m.insert("r".into(), omega.r.map(fnum).unwrap_or(Value::Null));
    m.insert("theta".into(), omega.theta.map(fnum).unwrap_or(Value::Null));
    m.insert("arc".into(), omega.arc.as_ref().map(arc_value).unwrap_or(Value::Null));
    m.insert(
        "limit_point".into(),
        omega.limit_point.map(complex).unwrap_or(Value::Null),
    );

    if let Some(sp) = &report.spectral {
        let stride = (sp.times.len() / MAX_LAMBDA_SAMPLES).max(1);
        let lambda: Vec<Value> = sp
            .times
            .iter()
            .zip(&sp.lambda)
            .enumerate()
            .filter(|(i, _)| i % stride == 0 || *i + 1 == sp.times.len())
            .map(|(_, (t, l))| {
                let mut e = Map::new();
                e.insert("t".into(), fnum(*t));
                e.insert("re".into(), fnum(l.re));
                e.insert("im".into(), fnum(l.im));
                Value::Object(e)
            })
            .collect();
        m.insert("lambda".into(), Value::Array(lambda));
        m.insert(
            "L".into(),
            match sp.l {
                SpectralLimit::Finite(v) => fnum(v),
                SpectralLimit::Infinite => Value::String("infinity".into()),
            },
        );
        m.insert("spectral_unstable".into(), Value::Bool(sp.unstable));
        if sp.boundary_projected {
            m.insert("spectral_im_residual".into(), fnum(sp.max_im_residual));
        }
    } else {
        m.insert("lambda".into(), Value::Null);
        m.insert("L".into(), Value::Null);
    }

    m.insert(
        "nontangential".into(),
        match &report.nontangential {
            None => Value::Null,
            Some(Ok(r)) => {
                let mut e = Map::new();
                e.insert("flag".into(), Value::Bool(r.flag));
                e.insert("sup_angle".into(), fnum(r.sup_angle));
                Value::Object(e)
            }
            Some(Err(msg)) => Value::String(msg.clone()),
        },
    );
    m.insert(
        "arg_omega".into(),
        match &report.arg_omega {
            None => Value::Null,
            Some(Ok(r)) => {
                let mut e = Map::new();
                e.insert("c".into(), fnum(r.c));
                e.insert("residual".into(), fnum(r.residual));
                e.insert("arc_extent".into(), fnum(r.arc_extent));
                e.insert("lambda_extent".into(), fnum(r.lambda_extent));
                Value::Object(e)
            }
            Some(Err(msg)) => Value::String(msg.clone()),
        },
    );
    m.insert(
        "automorphic".into(),
        match &report.automorphic {
            None => Value::Null,
            Some(Err(msg)) => Value::String(msg.clone()),
            Some(Ok(AutomorphicReport::Boundary { affine_residual, re_b_residual, k_formula_error })) => {
                let mut e = Map::new();
                e.insert("type".into(), Value::String("boundary".into()));
                e.insert("affine_residual".into(), fnum(*affine_residual));
                e.insert("re_b_residual".into(), fnum(*re_b_residual));
                e.insert(
                    "k_formula_error".into(),
                    k_formula_error.map(fnum).unwrap_or(Value::Null),
                );
                Value::Object(e)
            }
            Some(Ok(AutomorphicReport::Inner { lambda_imaginary, max_abs_re_lambda, case, note })) => {
                let mut e = Map::new();
                e.insert("type".into(), Value::String("inner".into()));
                e.insert("lambda_imaginary".into(), Value::Bool(*lambda_imaginary));
                e.insert("max_abs_re_lambda".into(), fnum(*max_abs_re_lambda));
                e.insert("case".into(), Value::String(case.as_str().into()));
                e.insert(
                    "note".into(),
                    note.clone().map(Value::String).unwrap_or(Value::Null),
                );
                Value::Object(e)
            }
        },
    );

    let mut diag = Map::new();
    diag.insert("horizon".into(), fnum(omega.diagnostics.horizon));
    diag.insert("transient_cutoff".into(), fnum(omega.diagnostics.transient_cutoff));
    diag.insert("samples".into(), Value::from(omega.diagnostics.samples as u64));
    diag.insert("tail_samples".into(), Value::from(omega.diagnostics.tail_samples as u64));
    diag.insert(
        "warnings".into(),
        Value::Array(omega.diagnostics.warnings.iter().map(|w| Value::String(w.clone())).collect()),
    );
    diag.insert(
        "notes".into(),
        Value::Array(omega.diagnostics.notes.iter().map(|n| Value::String(n.clone())).collect()),
    );
    m.insert("diagnostics".into(), Value::Object(diag));
    Value::Object(m)
}

/// Render a JSON value with sorted keys, two-space indentation and the
/// crate's float formatting.
pub fn render_json(value: &Value) -> String {
    let mut out = String::new();
    render(value, 0, &mut out);
    out.push('\n');
    out
}

fn render(value: &Value, indent: usize, out: &mut String) {
    match value {
        Value::Null => out.push_str("null"),
        Value::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        Value::Number(n) => {
            if let Some(x) = n.as_f64() {
                if n.is_f64() {
                    out.push_str(&fmt_f64(x));
                } else {
                    out.push_str(&n.to_string());
                }
            } else {
                out.push_str(&n.to_string());
            }
        }
        Value::String(s) => {
            // serde_json's escaping, reused for exactness.
            out.push_str(&serde_json::to_string(s).unwrap_or_else(|_| "\"\"".to_string()));
        }
        Value::Array(items) => {
            if items.is_empty() {
                out.push_str("[]");
                return;
            }
            out.push('[');
            for (i, item) in items.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                out.push('\n');
                out.push_str(&"  ".repeat(indent + 1));
                render(item, indent + 1, out);
            }
            out.push('\n');
            out.push_str(&"  ".repeat(indent));
            out.push(']');
        }
        Value::Object(map) => {
            if map.is_empty() {
                out.push_str("{}");
                return;
            }
            out.push('{');
            // serde_json's default map is a BTreeMap, so iteration is sorted.
            for (i, (key, item)) in map.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                out.push('\n');
                out.push_str(&"  ".repeat(indent + 1));
                out.push_str(&serde_json::to_string(key).unwrap_or_else(|_| "\"\"".to_string()));
                out.push_str(": ");
                render(item, indent + 1, out);
            }
            out.push('\n');
            out.push_str(&"  ".repeat(indent));
            out.push('}');
        }
    }
}

/// Trajectory CSV: header `t,re,im,local_error`, one row per sample.
pub fn trajectory_csv(traj: &Trajectory) -> String {
    let mut out = String::with_capacity(traj.times.len() * 64 + 32);
    out.push_str("t,re,im,local_error\n");
    for ((t, p), err) in traj.times.iter().zip(&traj.points).zip(&traj.error_estimate) {
        out.push_str(&fmt_f64(*t));
        out.push(',');
        out.push_str(&fmt_f64(p.re));
        out.push(',');
        out.push_str(&fmt_f64(p.im));
        out.push(',');
        out.push_str(&fmt_f64(*err));
        out.push('\n');
    }
    out
}
