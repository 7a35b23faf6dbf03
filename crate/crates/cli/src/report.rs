//! Machine-readable JSON reports.
//!
//! Scalars are serialized twice: a float convenience value and the exact
//! canonical string (`p/q` in exact mode); the exact string is the contract
//! and round-trips through the scalar parser. All object keys are sorted
//! (serde_json's default map is ordered), so identical inputs produce
//! byte-identical documents.

use distmorse::morse::{Classification, CriticalPointRecord, Gradient, PointCloud, RegularReason};
use distmorse::num::{Point, Scalar};
use distmorse::offsets::OffsetVerificationReport;
use serde_json::{json, Map, Value};

fn point_value<S: Scalar>(p: &Point<S>) -> Value {
    Value::Array(p.iter().map(|c| Value::String(c.canonical())).collect())
}

fn usize_array(values: &[usize]) -> Value {
    Value::Array(values.iter().map(|&v| json!(v)).collect())
}

fn record_value<S: Scalar>(record: &CriticalPointRecord<S>) -> Value {
    let mut obj = Map::new();
    obj.insert("location".into(), point_value(&record.location));
    obj.insert("value".into(), json!(record.squared_value.to_f64().sqrt()));
    obj.insert(
        "squared_value".into(),
        Value::String(record.squared_value.canonical()),
    );
    obj.insert(
        "projection_indices".into(),
        usize_array(&record.projection.indices),
    );
    match &record.classification {
        Classification::CriticalIndexZero => {
            obj.insert("kind".into(), json!("min"));
        }
        Classification::Critical { index, .. } => {
            obj.insert("kind".into(), json!("critical"));
            obj.insert("index".into(), json!(index));
        }
        Classification::Regular(RegularReason::CertificateExists { certificate }) => {
            obj.insert("kind".into(), json!("regular_certificate"));
            obj.insert("certificate_v".into(), point_value(certificate));
        }
        Classification::Regular(RegularReason::NotDifferentialCritical { .. }) => {
            obj.insert("kind".into(), json!("regular_noncritical_skipped"));
        }
    }
    Value::Object(obj)
}

fn verification_value<S: Scalar>(report: &OffsetVerificationReport<S>) -> Value {
    json!({
        "all_passed": report.all_passed,
        "critical_squared_values": report
            .critical_squared_values
            .iter()
            .map(|v| Value::String(v.canonical()))
            .collect::<Vec<_>>(),
        "intervals": report
            .intervals
            .iter()
            .map(|i| {
                json!({
                    "squared_radius": i.squared_radius.canonical(),
                    "betti": i.betti,
                })
            })
            .collect::<Vec<_>>(),
        "crossings": report
            .crossings
            .iter()
            .map(|c| {
                json!({
                    "squared_value": c.squared_value.canonical(),
                    "delta_betti": c.delta_betti,
                    "delta_euler": c.delta_euler,
                    "expected_euler": c.expected_euler,
                    "rule_r2_euler": c.euler_matches,
                    "rule_r3_single_handle": match c.single_handle {
                        Some(true) => "pass",
                        Some(false) => "fail",
                        None => "not_applicable",
                    },
                })
            })
            .collect::<Vec<_>>(),
        "regular_checks": report
            .regular_checks
            .iter()
            .map(|r| {
                json!({
                    "squared_value": r.squared_value.canonical(),
                    "betti_before": r.betti_before,
                    "betti_after": r.betti_after,
                    "rule_r1_isotopy": r.unchanged,
                })
            })
            .collect::<Vec<_>>(),
        "terminal": {
            "betti": report.terminal.betti,
            "rule_r4_contractible": report.terminal.contractible,
        },
    })
}

/// The `analyze`/`verify` report document.
pub fn analysis_report<S: Scalar>(
    cloud: &PointCloud<S>,
    records: &[CriticalPointRecord<S>],
    verification: Option<&OffsetVerificationReport<S>>,
) -> Value {
    let mut root = Map::new();
    root.insert(
        "input".into(),
        json!({
            "mode": S::MODE,
            "points": cloud.points().iter().map(point_value).collect::<Vec<_>>(),
            "tolerance": {
                "abs": cloud.tolerance().abs,
                "rel": cloud.tolerance().rel,
            },
        }),
    );
    root.insert(
        "records".into(),
        Value::Array(records.iter().map(record_value).collect()),
    );
    if let Some(report) = verification {
        root.insert("verification".into(), verification_value(report));
    }
    Value::Object(root)
}

/// The `gradient` query document.
pub fn gradient_report<S: Scalar>(gradient: &Gradient<S>) -> Value {
    json!({
        "gradient_normalized_float": gradient.normalized(),
        "gradient_unnormalized_exact": gradient
            .direction
            .iter()
            .map(|c| c.canonical())
            .collect::<Vec<_>>(),
        "pi_indices": gradient.projection.indices,
        "sigma": gradient.sigma.iter().map(|c| c.canonical()).collect::<Vec<_>>(),
        "squared_value": gradient.projection.squared_value.canonical(),
    })
}

/// Serializes with sorted keys and a trailing newline.
pub fn to_json_string(value: &Value) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("report serialization");
    text.push('\n');
    text
}
