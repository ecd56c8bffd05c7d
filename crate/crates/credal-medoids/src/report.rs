//! JSON and CSV serialization of partitions, clustering results and metric
//! reports. Output is deterministic: keys are sorted, no timestamps, and
//! masses are written with 10 significant digits.

use serde_json::{json, Map, Value};

use crate::baselines::{FcmddResult, FmmddResult};
use crate::belief::{harden, CredalPartition, HardLabel, HardeningRule};
use crate::ecmdd::{ClusterResult, EcmddConfig, EmptySetExponent, InitMode, PrototypeModel, Variant};
use crate::error::Result;

/// Round to 10 significant digits.
fn sig10(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    format!("{x:.9e}").parse().unwrap_or(x)
}

fn masses_json(partition: &CredalPartition) -> Value {
    Value::Array(
        partition
            .rows()
            .iter()
            .map(|row| Value::Array(row.iter().map(|&m| json!(sig10(m))).collect()))
            .collect(),
    )
}

fn focal_sets_json(partition: &CredalPartition) -> Value {
    Value::Array(
        partition
            .family()
            .sets()
            .iter()
            .map(|s| Value::Array(s.members().into_iter().map(|m| json!(m)).collect()))
            .collect(),
    )
}

/// Credal partition as `{c, focal_sets, masses}`.
pub fn partition_to_json(partition: &CredalPartition) -> Value {
    json!({
        "c": partition.family().c(),
        "focal_sets": focal_sets_json(partition),
        "masses": masses_json(partition),
    })
}

pub fn label_to_string(label: &HardLabel) -> String {
    label.to_string()
}

/// Parse a label written by [`label_to_string`]: a bare cluster index,
/// `{a,b,...}` for an imprecise set, or `{}` for the outlier class.
pub fn label_from_string(text: &str) -> Result<HardLabel> {
    let trimmed = text.trim();
    if let Ok(k) = trimmed.parse::<usize>() {
        return Ok(HardLabel::Specific(k));
    }
    if let Some(inner) = trimmed.strip_prefix('{').and_then(|t| t.strip_suffix('}')) {
        let inner = inner.trim();
        if inner.is_empty() {
            return Ok(HardLabel::Outlier);
        }
        let members: Vec<usize> = inner
            .split(',')
            .map(|tok| {
                tok.trim().parse::<usize>().map_err(|_| {
                    crate::error::Error::InvalidArgument(format!("bad label token '{tok}'"))
                })
            })
            .collect::<Result<_>>()?;
        let set = crate::belief::FocalSet::from_members(&members);
        return Ok(match set.cardinality() {
            0 => HardLabel::Outlier,
            1 => HardLabel::Specific(members[0]),
            _ => HardLabel::Imprecise(set),
        });
    }
    Err(crate::error::Error::InvalidArgument(format!("unparseable label '{text}'")))
}

fn labels_json(labels: &[HardLabel]) -> Value {
    Value::Array(labels.iter().map(|l| json!(l.to_string())).collect())
}

fn prototypes_json(prototypes: &PrototypeModel) -> Value {
    match prototypes {
        PrototypeModel::Single { singleton_medoids, meta_medoids } => json!({
            "kind": "single",
            "singleton_medoids": singleton_medoids,
            "meta_medoids": meta_medoids
                .iter()
                .map(|(set, idx)| json!({"set": set.members(), "medoid": idx}))
                .collect::<Vec<_>>(),
        }),
        PrototypeModel::Weighted { weights } => json!({
            "kind": "weighted",
            "weights": weights
                .iter()
                .map(|row| row.iter().map(|&w| json!(sig10(w))).collect::<Vec<_>>())
                .collect::<Vec<_>>(),
        }),
    }
}

fn init_json(init: &InitMode) -> Value {
    match init {
        InitMode::FarthestRandomStart => json!("farthest-random-start"),
        InitMode::FarthestMinRowsumStart => json!("farthest-min-rowsum-start"),
        InitMode::Explicit(v) => json!(format!(
            "explicit:{}",
            v.iter().map(|m| m.to_string()).collect::<Vec<_>>().join(",")
        )),
    }
}

fn variant_json(variant: &Variant) -> Value {
    match variant {
        Variant::Single => json!("single"),
        Variant::Weighted => json!("weighted"),
        Variant::WeightedNormalized => json!("weighted-normalized"),
        Variant::WeightedTopQ(q) => json!(format!("weighted-top-{q}")),
    }
}

/// Configuration echo for result files.
pub fn config_to_json(config: &EcmddConfig) -> Value {
    json!({
        "c": config.c,
        "alpha": config.alpha,
        "beta": config.beta,
        "delta": config.delta,
        "eta": config.eta,
        "gamma": config.gamma,
        "xi": config.xi,
        "psi": config.psi,
        "max_cardinality": config.max_cardinality,
        "include_full_frame": config.include_full_frame,
        "max_iterations": config.max_iterations,
        "seed": config.seed,
        "init": init_json(&config.init),
        "variant": variant_json(&config.variant),
        "empty_set_exponent": match config.empty_set_exponent {
            EmptySetExponent::Literal => "literal",
            EmptySetExponent::Derived => "derived",
        },
        "weight_tolerance": config.weight_tolerance,
    })
}

/// Full clustering result: config echo, partition, prototypes, labels under
/// both standard hardening rules, objective trace and convergence state.
pub fn cluster_result_to_json(result: &ClusterResult, config: &EcmddConfig) -> Result<Value> {
    let max_mass = harden(&result.partition, HardeningRule::MaxMass)?;
    let max_betp = harden(&result.partition, HardeningRule::MaxBetp)?;
    Ok(json!({
        "config": config_to_json(config),
        "c": result.partition.family().c(),
        "focal_sets": focal_sets_json(&result.partition),
        "masses": masses_json(&result.partition),
        "prototypes": prototypes_json(&result.prototypes),
        "labels": {
            "max_mass": labels_json(&max_mass),
            "max_betp": labels_json(&max_betp),
        },
        "objective_trace": result.objective_trace.iter().map(|&v| json!(sig10(v))).collect::<Vec<_>>(),
        "iterations": result.iterations,
        "converged": result.converged,
    }))
}

/// Fuzzy c-medoids result in the shared schema, with memberships in place of
/// masses and singleton-only labels.
pub fn fcmdd_result_to_json(result: &FcmddResult) -> Value {
    let labels = result.partition.max_membership_labels();
    json!({
        "memberships": result
            .partition
            .memberships
            .iter()
            .map(|row| row.iter().map(|&u| json!(sig10(u))).collect::<Vec<_>>())
            .collect::<Vec<_>>(),
        "medoids": result.medoids,
        "labels": {
            "max_membership": labels.iter().map(|k| json!(k.to_string())).collect::<Vec<_>>(),
        },
        "iterations": result.iterations,
        "converged": result.converged,
    })
}

/// Multi-medoid fuzzy clustering result in the shared schema.
pub fn fmmdd_result_to_json(result: &FmmddResult) -> Value {
    let labels = result.partition.max_membership_labels();
    json!({
        "memberships": result
            .partition
            .memberships
            .iter()
            .map(|row| row.iter().map(|&u| json!(sig10(u))).collect::<Vec<_>>())
            .collect::<Vec<_>>(),
        "weights": result
            .weights
            .iter()
            .map(|row| row.iter().map(|&w| json!(sig10(w))).collect::<Vec<_>>())
            .collect::<Vec<_>>(),
        "labels": {
            "max_membership": labels.iter().map(|k| json!(k.to_string())).collect::<Vec<_>>(),
        },
        "iterations": result.iterations,
        "converged": result.converged,
        "objective_trace": result
            .objective_trace
            .iter()
            .map(|&v| json!(sig10(v)))
            .collect::<Vec<_>>(),
    })
}

/// CSV header shared by all metric rows.
pub const METRICS_CSV_HEADER: &str = "p,r,ri,ep,er,eri,nstar";

/// One CSV row matching [`METRICS_CSV_HEADER`]; a missing validity index
/// leaves its field empty.
pub fn metrics_csv_row(report: &crate::evaluation::MetricReport) -> String {
    let nstar = report.nstar.map_or(String::new(), |v| format!("{v}"));
    format!(
        "{},{},{},{},{},{},{}",
        report.precision, report.recall, report.rand_index, report.ep, report.er, report.eri, nstar
    )
}

/// Metric report as a flat JSON object.
pub fn metrics_to_json(report: &crate::evaluation::MetricReport) -> Value {
    let mut map = Map::new();
    map.insert("p".into(), json!(report.precision));
    map.insert("r".into(), json!(report.recall));
    map.insert("ri".into(), json!(report.rand_index));
    map.insert("ep".into(), json!(report.ep));
    map.insert("er".into(), json!(report.er));
    map.insert("eri".into(), json!(report.eri));
    map.insert(
        "nstar".into(),
        report.nstar.map_or(Value::Null, |v| json!(v)),
    );
    Value::Object(map)
}
