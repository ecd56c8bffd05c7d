//! Command-line interface for relational clustering with credal partitions.
//!
//! Subcommands: `cluster` runs one algorithm on one input, `eval` scores a
//! result against a truth file, `gen` materializes fixtures and generators,
//! `sweep` repeats `cluster` over a parameter grid, and `graph-sim` converts
//! an edge list into a dissimilarity matrix. All outputs embed the run
//! manifest and contain no timestamps, so identical invocations produce
//! byte-identical files.

use std::fs;
use std::io::BufReader;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use credal_medoids::baselines::{fit_fcmdd, fit_fmmdd, fit_pam};
use credal_medoids::datagen::{
    builtin_fixture, generate_circles, generate_gaussian_ring, Fixture, FixturePayload,
};
use credal_medoids::dissimilarity::{
    load_dissimilarity_csv, load_edge_list, write_dissimilarity_csv, write_edge_list,
};
use credal_medoids::evaluation::{validity_index, MetricReport};
use credal_medoids::report;
use credal_medoids::*;

// the glob import brings in the library's single-parameter Result alias;
// restore the std form for the CLI's own error handling
use std::result::Result;

const SEED_ENV: &str = "CREDAL_MEDOIDS_SEED";

#[derive(Parser)]
#[command(
    name = "credal-medoids",
    version,
    about = "Evidential c-medoids clustering on dissimilarity data",
    long_about = None
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one clustering algorithm on one input.
    Cluster(ClusterArgs),
    /// Score a result file against a truth file.
    Eval(EvalArgs),
    /// Write a fixture or generated data set to disk.
    Gen(GenArgs),
    /// Repeat `cluster` over a grid of c or alpha values.
    Sweep(SweepArgs),
    /// Convert an edge list into a dissimilarity matrix via a similarity
    /// index.
    GraphSim(GraphSimArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Algo {
    Secmdd,
    Wecmdd,
    #[value(name = "wecmdd-0")]
    Wecmdd0,
    #[value(name = "wecmdd-q")]
    WecmddQ,
    Pam,
    Fcmdd,
    Fmmdd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum InputFormat {
    Csv,
    EdgeList,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum GraphIndex {
    Jaccard,
    Zhou,
    Pan,
    Signal,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum HardenFlag {
    MaxMass,
    MaxBetp,
    Appriou,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ExponentFlag {
    Literal,
    Derived,
}

#[derive(Args)]
struct InputArgs {
    /// Input: a file path or `fixture:<name>` (countries, karate, x12, x11).
    #[arg(long)]
    input: String,
    /// File format for path inputs.
    #[arg(long, value_enum, default_value = "csv")]
    format: InputFormat,
    /// Similarity index used when the input is a graph.
    #[arg(long, value_enum, default_value = "signal")]
    graph_index: GraphIndex,
    /// Propagation steps for the signal index.
    #[arg(long, default_value_t = 3)]
    steps: usize,
    /// Optional truth labels CSV (`object_id,label` per line).
    #[arg(long)]
    truth: Option<PathBuf>,
}

#[derive(Args)]
struct AlgoArgs {
    #[arg(long, value_enum)]
    algo: Algo,
    /// Number of clusters.
    #[arg(long)]
    c: usize,
    /// Cardinality penalty exponent.
    #[arg(long, default_value_t = 1.0)]
    alpha: f64,
    /// Weighting exponent (> 1).
    #[arg(long, default_value_t = 2.0)]
    beta: f64,
    /// Outlier threshold.
    #[arg(long, default_value_t = 100.0)]
    delta: f64,
    /// Meta-medoid outlier discrimination (single-medoid variant).
    #[arg(long, default_value_t = 1.0)]
    eta: f64,
    /// Meta-class dissimilarity mixing factor (single-medoid variant).
    #[arg(long, default_value_t = 1.0)]
    gamma: f64,
    /// Imprecise-weight balance (weighted variants).
    #[arg(long, default_value_t = 1.0)]
    xi: f64,
    /// Weight smoothness exponent (> 1, weighted variants and fmmdd).
    #[arg(long, default_value_t = 2.0)]
    psi: f64,
    /// Core size for wecmdd-q.
    #[arg(long)]
    q: Option<usize>,
    /// Cardinality cap for non-frame focal sets.
    #[arg(long, default_value_t = 2)]
    max_card: usize,
    /// Include the full frame as a focal set.
    #[arg(long, default_value_t = true)]
    full_frame: bool,
    /// Empty-set exponent in the mass update.
    #[arg(long, value_enum, default_value = "literal")]
    empty_set_exponent: ExponentFlag,
    /// Initial medoids: `random`, `min-rowsum` or `explicit:i,j,...`.
    #[arg(long, default_value = "random")]
    init: String,
    /// Random seed (overridden by the CREDAL_MEDOIDS_SEED env var).
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 200)]
    max_iterations: usize,
    /// Exit with status 3 when the run does not converge.
    #[arg(long, default_value_t = false)]
    strict_convergence: bool,
}

#[derive(Args)]
struct ClusterArgs {
    #[command(flatten)]
    input: InputArgs,
    #[command(flatten)]
    algo: AlgoArgs,
    /// Extra hardening rule echoed into the result file.
    #[arg(long, value_enum, default_value = "max-mass")]
    harden: HardenFlag,
    /// Cardinality exponent of the appriou rule.
    #[arg(long, default_value_t = 0.5)]
    appriou_r: f64,
    /// Output directory.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct EvalArgs {
    /// result.json written by `cluster`.
    #[arg(long)]
    result: PathBuf,
    /// Truth labels CSV.
    #[arg(long)]
    truth: PathBuf,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct GenArgs {
    /// Fixture name (countries, karate, x12, x11).
    #[arg(long, conflicts_with_all = ["circles", "gaussian_ring"])]
    fixture: Option<String>,
    /// Points per circle for the three-overlapping-circles generator.
    #[arg(long)]
    circles: Option<usize>,
    /// Gaussian ring parameters: components,per_component,radius,sd.
    #[arg(long)]
    gaussian_ring: Option<String>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    input: InputArgs,
    #[command(flatten)]
    algo: AlgoArgs,
    /// Swept parameter: `c` or `alpha`.
    #[arg(long)]
    param: String,
    #[arg(long)]
    from: f64,
    #[arg(long)]
    to: f64,
    #[arg(long, default_value_t = 1.0)]
    step: f64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct GraphSimArgs {
    /// Edge-list input path.
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_enum, default_value = "signal")]
    index: GraphIndex,
    #[arg(long, default_value_t = 3)]
    steps: usize,
    #[arg(long)]
    out: PathBuf,
}

/// Application error with its process exit code.
struct AppError {
    code: u8,
    message: String,
}

impl AppError {
    fn usage(message: impl Into<String>) -> Self {
        AppError { code: 1, message: message.into() }
    }

    fn data(message: impl Into<String>) -> Self {
        AppError { code: 2, message: message.into() }
    }

    fn non_convergence(message: impl Into<String>) -> Self {
        AppError { code: 3, message: message.into() }
    }
}

impl From<Error> for AppError {
    fn from(e: Error) -> Self {
        AppError::data(e.to_string())
    }
}

impl From<std::io::Error> for AppError {
    fn from(e: std::io::Error) -> Self {
        AppError::data(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // clap prints help/version through the error path with code 0
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let outcome = match cli.command {
        Command::Cluster(args) => run_cluster(args),
        Command::Eval(args) => run_eval(args),
        Command::Gen(args) => run_gen(args),
        Command::Sweep(args) => run_sweep(args),
        Command::GraphSim(args) => run_graph_sim(args),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}

fn effective_seed(flag_seed: u64) -> Result<u64, AppError> {
    match std::env::var(SEED_ENV) {
        Ok(text) => text
            .trim()
            .parse::<u64>()
            .map_err(|_| AppError::usage(format!("cannot parse {SEED_ENV}='{text}' as a seed"))),
        Err(_) => Ok(flag_seed),
    }
}

fn parse_init(text: &str) -> Result<InitMode, AppError> {
    match text {
        "random" => Ok(InitMode::FarthestRandomStart),
        "min-rowsum" => Ok(InitMode::FarthestMinRowsumStart),
        other => {
            if let Some(list) = other.strip_prefix("explicit:") {
                let medoids: Result<Vec<usize>, _> =
                    list.split(',').map(|tok| tok.trim().parse::<usize>()).collect();
                medoids
                    .map(InitMode::Explicit)
                    .map_err(|_| AppError::usage(format!("cannot parse init list '{list}'")))
            } else {
                Err(AppError::usage(format!(
                    "unknown init '{other}' (expected random, min-rowsum or explicit:i,j,...)"
                )))
            }
        }
    }
}

fn graph_index(index: GraphIndex, steps: usize) -> GraphSimilarityIndex {
    match index {
        GraphIndex::Jaccard => GraphSimilarityIndex::Jaccard,
        GraphIndex::Zhou => GraphSimilarityIndex::Zhou,
        GraphIndex::Pan => GraphSimilarityIndex::Pan,
        GraphIndex::Signal => GraphSimilarityIndex::Signal { steps },
    }
}

/// Resolve an input argument to a dissimilarity matrix plus optional truth.
fn resolve_input(args: &InputArgs) -> Result<(DissimilarityMatrix, Option<Vec<usize>>), AppError> {
    let (matrix, fixture_truth) = if let Some(name) = args.input.strip_prefix("fixture:") {
        let fixture = builtin_fixture(name)?;
        let truth = fixture.truth.clone();
        let matrix = match &fixture.payload {
            FixturePayload::Dissimilarity(d) => d.clone(),
            FixturePayload::Points(points) => points.dissimilarity(),
            FixturePayload::Graph(adj) => {
                let sim = graph_similarity(adj, graph_index(args.graph_index, args.steps))?;
                similarity_to_dissimilarity(&sim)
            }
        };
        (matrix, truth)
    } else {
        let file = fs::File::open(&args.input)
            .map_err(|e| AppError::data(format!("{}: {e}", args.input)))?;
        let reader = BufReader::new(file);
        let matrix = match args.format {
            InputFormat::Csv => load_dissimilarity_csv(reader)?,
            InputFormat::EdgeList => {
                let adj = load_edge_list(reader)?;
                let sim = graph_similarity(&adj, graph_index(args.graph_index, args.steps))?;
                similarity_to_dissimilarity(&sim)
            }
        };
        (matrix, None)
    };
    let truth = match &args.truth {
        Some(path) => Some(read_truth(path)?),
        None => fixture_truth,
    };
    if let Some(t) = &truth {
        if t.len() != matrix.n() {
            return Err(AppError::data(format!(
                "truth has {} labels for {} objects",
                t.len(),
                matrix.n()
            )));
        }
    }
    Ok((matrix, truth))
}

fn read_truth(path: &Path) -> Result<Vec<usize>, AppError> {
    let text = fs::read_to_string(path).map_err(|e| AppError::data(format!("{}: {e}", path.display())))?;
    let mut labeled: Vec<(usize, usize)> = Vec::new();
    let mut bare: Vec<usize> = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') || trimmed.starts_with("object_id") {
            continue;
        }
        let fields: Vec<&str> = trimmed.split(',').map(str::trim).collect();
        let parse = |tok: &str| {
            tok.parse::<usize>().map_err(|_| {
                AppError::data(format!("truth line {}: cannot parse '{tok}'", idx + 1))
            })
        };
        match fields.as_slice() {
            [label] => bare.push(parse(label)?),
            [id, label] => labeled.push((parse(id)?, parse(label)?)),
            _ => {
                return Err(AppError::data(format!(
                    "truth line {}: expected 'label' or 'object_id,label'",
                    idx + 1
                )))
            }
        }
    }
    if !labeled.is_empty() {
        labeled.sort_by_key(|&(id, _)| id);
        Ok(labeled.into_iter().map(|(_, label)| label).collect())
    } else {
        Ok(bare)
    }
}

fn build_config(args: &AlgoArgs, seed: u64) -> Result<EcmddConfig, AppError> {
    let mut cfg = EcmddConfig::new(args.c);
    cfg.alpha = args.alpha;
    cfg.beta = args.beta;
    cfg.delta = args.delta;
    cfg.eta = args.eta;
    cfg.gamma = args.gamma;
    cfg.xi = args.xi;
    cfg.psi = args.psi;
    cfg.max_cardinality = args.max_card.min(args.c);
    cfg.include_full_frame = args.full_frame;
    cfg.max_iterations = args.max_iterations;
    cfg.seed = seed;
    cfg.init = parse_init(&args.init)?;
    cfg.empty_set_exponent = match args.empty_set_exponent {
        ExponentFlag::Literal => EmptySetExponent::Literal,
        ExponentFlag::Derived => EmptySetExponent::Derived,
    };
    cfg.variant = match args.algo {
        Algo::Secmdd => Variant::Single,
        Algo::Wecmdd => Variant::Weighted,
        Algo::Wecmdd0 => Variant::WeightedNormalized,
        Algo::WecmddQ => {
            let q = args.q.ok_or_else(|| AppError::usage("wecmdd-q requires --q"))?;
            Variant::WeightedTopQ(q)
        }
        _ => Variant::Single,
    };
    Ok(cfg)
}

fn algo_name(algo: Algo) -> &'static str {
    match algo {
        Algo::Secmdd => "secmdd",
        Algo::Wecmdd => "wecmdd",
        Algo::Wecmdd0 => "wecmdd-0",
        Algo::WecmddQ => "wecmdd-q",
        Algo::Pam => "pam",
        Algo::Fcmdd => "fcmdd",
        Algo::Fmmdd => "fmmdd",
    }
}

fn manifest(subcommand: &str, input: &str, algo: Option<&AlgoArgs>, seed: u64, outputs: &[&str]) -> Value {
    let params = match algo {
        Some(a) => json!({
            "algo": algo_name(a.algo),
            "c": a.c,
            "alpha": a.alpha,
            "beta": a.beta,
            "delta": a.delta,
            "eta": a.eta,
            "gamma": a.gamma,
            "xi": a.xi,
            "psi": a.psi,
            "q": a.q,
            "max_card": a.max_card,
            "full_frame": a.full_frame,
            "init": a.init,
            "max_iterations": a.max_iterations,
        }),
        None => json!({}),
    };
    json!({
        "tool": "credal-medoids",
        "version": env!("CARGO_PKG_VERSION"),
        "subcommand": subcommand,
        "input": input,
        "parameters": params,
        "seed": seed,
        "outputs": outputs,
    })
}

fn write_file(dir: &Path, name: &str, contents: &str) -> Result<(), AppError> {
    fs::create_dir_all(dir)?;
    fs::write(dir.join(name), contents)?;
    Ok(())
}

/// One clustering run reduced to what the CLI reports.
struct RunOutput {
    result: Value,
    max_mass: Vec<String>,
    max_betp: Vec<String>,
    metrics: Option<MetricReport>,
    converged: bool,
    nstar: Option<f64>,
}

fn execute_algorithm(
    algo: Algo,
    d: &DissimilarityMatrix,
    args: &AlgoArgs,
    seed: u64,
    truth: Option<&[usize]>,
    appriou_r: f64,
    harden_flag: HardenFlag,
) -> Result<RunOutput, AppError> {
    match algo {
        Algo::Pam => {
            let run = fit_pam(d, args.c, seed)?;
            let labels: Vec<String> = run.labels.iter().map(|k| k.to_string()).collect();
            let metrics = truth.map(|t| MetricReport::from_crisp(&run.labels, t)).transpose()?;
            let result = json!({
                "labels": { "crisp": labels },
                "medoids": run.medoids,
                "converged": true,
            });
            Ok(RunOutput {
                result,
                max_mass: labels.clone(),
                max_betp: labels,
                metrics,
                converged: true,
                nstar: None,
            })
        }
        Algo::Fcmdd => {
            let init = parse_init(&args.init)?;
            let run = fit_fcmdd(d, args.c, args.beta, &init, seed)?;
            let crisp = run.partition.max_membership_labels();
            let labels: Vec<String> = crisp.iter().map(|k| k.to_string()).collect();
            let metrics = truth.map(|t| MetricReport::from_crisp(&crisp, t)).transpose()?;
            let converged = run.converged;
            Ok(RunOutput {
                result: report::fcmdd_result_to_json(&run),
                max_mass: labels.clone(),
                max_betp: labels,
                metrics,
                converged,
                nstar: None,
            })
        }
        Algo::Fmmdd => {
            let run = fit_fmmdd(d, args.c, args.beta, args.psi, seed)?;
            let crisp = run.partition.max_membership_labels();
            let labels: Vec<String> = crisp.iter().map(|k| k.to_string()).collect();
            let metrics = truth.map(|t| MetricReport::from_crisp(&crisp, t)).transpose()?;
            let converged = run.converged;
            Ok(RunOutput {
                result: report::fmmdd_result_to_json(&run),
                max_mass: labels.clone(),
                max_betp: labels,
                metrics,
                converged,
                nstar: None,
            })
        }
        Algo::Secmdd | Algo::Wecmdd | Algo::Wecmdd0 | Algo::WecmddQ => {
            let cfg = build_config(args, seed)?;
            let run = match algo {
                Algo::Secmdd => fit_secmdd(d, &cfg)?,
                _ => fit_wecmdd(d, &cfg)?,
            };
            let max_mass = harden(&run.partition, HardeningRule::MaxMass)?;
            let max_betp = harden(&run.partition, HardeningRule::MaxBetp)?;
            let selected_rule = match harden_flag {
                HardenFlag::MaxMass => HardeningRule::MaxMass,
                HardenFlag::MaxBetp => HardeningRule::MaxBetp,
                HardenFlag::Appriou => HardeningRule::Appriou { r: appriou_r, lambda: 1.0 },
            };
            let selected = harden(&run.partition, selected_rule)?;
            let nstar = validity_index(&run.partition).ok();
            let metrics = match truth {
                Some(t) => {
                    let betp_labels: Vec<usize> = max_betp
                        .iter()
                        .map(|l| l.as_specific().expect("max-betp labels are specific"))
                        .collect();
                    Some(MetricReport::from_labels(&betp_labels, &max_mass, t, nstar)?)
                }
                None => None,
            };
            let mut result = report::cluster_result_to_json(&run, &cfg)?;
            result["labels"]["selected"] = Value::Array(
                selected.iter().map(|l| json!(l.to_string())).collect(),
            );
            result["labels"]["selected_rule"] = json!(match harden_flag {
                HardenFlag::MaxMass => "max-mass",
                HardenFlag::MaxBetp => "max-betp",
                HardenFlag::Appriou => "appriou",
            });
            let converged = run.converged;
            Ok(RunOutput {
                result,
                max_mass: max_mass.iter().map(|l| l.to_string()).collect(),
                max_betp: max_betp.iter().map(|l| l.to_string()).collect(),
                metrics,
                converged,
                nstar,
            })
        }
    }
}

fn run_cluster(args: ClusterArgs) -> Result<(), AppError> {
    let seed = effective_seed(args.algo.seed)?;
    let (d, truth) = resolve_input(&args.input)?;
    let output = execute_algorithm(
        args.algo.algo,
        &d,
        &args.algo,
        seed,
        truth.as_deref(),
        args.appriou_r,
        args.harden,
    )?;

    let mut outputs = vec!["result.json", "labels.csv"];
    if output.metrics.is_some() {
        outputs.push("metrics.csv");
    }
    let manifest = manifest("cluster", &args.input.input, Some(&args.algo), seed, &outputs);
    let manifest_line = serde_json::to_string(&manifest).expect("manifest serializes");

    let mut result = output.result;
    result["manifest"] = manifest.clone();
    write_file(
        &args.out,
        "result.json",
        &format!("{}\n", serde_json::to_string_pretty(&result).expect("result serializes")),
    )?;

    let mut labels_csv = format!("# manifest: {manifest_line}\nobject_id,max_mass_label,max_betp_label\n");
    for (i, (mm, bp)) in output.max_mass.iter().zip(&output.max_betp).enumerate() {
        labels_csv.push_str(&format!("{i},{mm},{bp}\n"));
    }
    write_file(&args.out, "labels.csv", &labels_csv)?;

    if let Some(metrics) = &output.metrics {
        let csv = format!(
            "# manifest: {manifest_line}\n{}\n{}\n",
            report::METRICS_CSV_HEADER,
            report::metrics_csv_row(metrics)
        );
        write_file(&args.out, "metrics.csv", &csv)?;
    }

    if args.algo.strict_convergence && !output.converged {
        return Err(AppError::non_convergence("run did not converge"));
    }
    println!(
        "wrote {} (converged: {})",
        args.out.join("result.json").display(),
        output.converged
    );
    Ok(())
}

fn run_eval(args: EvalArgs) -> Result<(), AppError> {
    let text = fs::read_to_string(&args.result)
        .map_err(|e| AppError::data(format!("{}: {e}", args.result.display())))?;
    let result: Value = serde_json::from_str(&text)
        .map_err(|e| AppError::data(format!("{}: {e}", args.result.display())))?;
    let truth = read_truth(&args.truth)?;

    let labels = &result["labels"];
    let parse_labels = |value: &Value| -> Result<Vec<HardLabel>, AppError> {
        let array = value
            .as_array()
            .ok_or_else(|| AppError::data("result file lacks label arrays"))?;
        array
            .iter()
            .map(|v| {
                let text = v.as_str().ok_or_else(|| AppError::data("labels must be strings"))?;
                Ok(report::label_from_string(text)?)
            })
            .collect()
    };

    let metrics = if labels["max_mass"].is_array() {
        let max_mass = parse_labels(&labels["max_mass"])?;
        let max_betp = parse_labels(&labels["max_betp"])?;
        let betp_crisp: Vec<usize> = max_betp
            .iter()
            .map(|l| l.as_specific().ok_or_else(|| AppError::data("max-betp labels must be specific")))
            .collect::<Result<_, _>>()?;
        let nstar = result["config"]["c"].as_u64().and_then(|_| {
            // recompute the validity index from the stored masses
            rebuild_partition(&result).ok().and_then(|p| validity_index(&p).ok())
        });
        MetricReport::from_labels(&betp_crisp, &max_mass, &truth, nstar)?
    } else if labels["max_membership"].is_array() || labels["crisp"].is_array() {
        let key = if labels["max_membership"].is_array() { "max_membership" } else { "crisp" };
        let crisp: Vec<usize> = parse_labels(&labels[key])?
            .iter()
            .map(|l| l.as_specific().ok_or_else(|| AppError::data("crisp labels expected")))
            .collect::<Result<_, _>>()?;
        MetricReport::from_crisp(&crisp, &truth)?
    } else {
        return Err(AppError::data("result file lacks recognizable labels"));
    };

    let manifest = manifest("eval", &args.result.display().to_string(), None, 0, &["metrics.csv"]);
    let manifest_line = serde_json::to_string(&manifest).expect("manifest serializes");
    let csv = format!(
        "# manifest: {manifest_line}\n{}\n{}\n",
        report::METRICS_CSV_HEADER,
        report::metrics_csv_row(&metrics)
    );
    write_file(&args.out, "metrics.csv", &csv)?;
    println!("{}", report::metrics_csv_row(&metrics));
    Ok(())
}

/// Rebuild a credal partition from a result file's focal sets and masses.
fn rebuild_partition(result: &Value) -> Result<CredalPartition, Error> {
    let c = result["config"]["c"]
        .as_u64()
        .ok_or_else(|| Error::InvalidArgument("missing config.c".into()))? as usize;
    let max_card = result["config"]["max_cardinality"].as_u64().unwrap_or(2) as usize;
    let full_frame = result["config"]["include_full_frame"].as_bool().unwrap_or(true);
    let family = enumerate_focal_sets(c, max_card.min(c), full_frame)?;
    let masses: Vec<Vec<f64>> = result["masses"]
        .as_array()
        .ok_or_else(|| Error::InvalidArgument("missing masses".into()))?
        .iter()
        .map(|row| {
            row.as_array()
                .map(|vals| vals.iter().filter_map(|v| v.as_f64()).collect())
                .ok_or_else(|| Error::InvalidArgument("bad mass row".into()))
        })
        .collect::<Result<_, _>>()?;
    CredalPartition::new(family, masses)
}

fn run_gen(args: GenArgs) -> Result<(), AppError> {
    let seed = effective_seed(args.seed)?;
    let (fixture, input_desc) = if let Some(name) = &args.fixture {
        (builtin_fixture(name)?, format!("fixture:{name}"))
    } else if let Some(per_circle) = args.circles {
        let points = generate_circles(per_circle, seed);
        let truth = points.truth.clone();
        (
            Fixture {
                name: format!("circles-{per_circle}"),
                payload: FixturePayload::Points(points),
                truth: Some(truth),
            },
            format!("circles:{per_circle}"),
        )
    } else if let Some(spec_text) = &args.gaussian_ring {
        let parts: Vec<&str> = spec_text.split(',').collect();
        if parts.len() != 4 {
            return Err(AppError::usage("--gaussian-ring expects k,per_component,radius,sd"));
        }
        let k = parts[0].trim().parse::<usize>().map_err(|_| AppError::usage("bad k"))?;
        let per = parts[1].trim().parse::<usize>().map_err(|_| AppError::usage("bad per_component"))?;
        let radius = parts[2].trim().parse::<f64>().map_err(|_| AppError::usage("bad radius"))?;
        let sd = parts[3].trim().parse::<f64>().map_err(|_| AppError::usage("bad sd"))?;
        let points = generate_gaussian_ring(k, per, radius, sd, seed)?;
        let truth = points.truth.clone();
        (
            Fixture {
                name: format!("gaussian-ring-{k}x{per}"),
                payload: FixturePayload::Points(points),
                truth: Some(truth),
            },
            format!("gaussian-ring:{spec_text}"),
        )
    } else {
        return Err(AppError::usage("gen needs --fixture, --circles or --gaussian-ring"));
    };

    let mut outputs: Vec<&str> = Vec::new();
    let mut files: Vec<(String, String)> = Vec::new();
    let manifest_value = manifest("gen", &input_desc, None, seed, &[]);
    let manifest_line = serde_json::to_string(&manifest_value).expect("manifest serializes");

    match &fixture.payload {
        FixturePayload::Dissimilarity(d) => {
            files.push((
                "dissimilarity.csv".into(),
                write_dissimilarity_csv(d, Some(&format!("manifest: {manifest_line}"))),
            ));
            outputs.push("dissimilarity.csv");
        }
        FixturePayload::Graph(adj) => {
            files.push((
                "edges.txt".into(),
                write_edge_list(adj, Some(&format!("manifest: {manifest_line}"))),
            ));
            outputs.push("edges.txt");
        }
        FixturePayload::Points(points) => {
            let mut csv = format!("# manifest: {manifest_line}\n");
            for p in &points.points {
                csv.push_str(&format!("{},{}\n", p[0], p[1]));
            }
            files.push(("points.csv".into(), csv));
            files.push((
                "dissimilarity.csv".into(),
                write_dissimilarity_csv(
                    &points.dissimilarity(),
                    Some(&format!("manifest: {manifest_line}")),
                ),
            ));
            outputs.push("points.csv");
            outputs.push("dissimilarity.csv");
        }
    }
    if let Some(truth) = &fixture.truth {
        let mut csv = format!("# manifest: {manifest_line}\nobject_id,label\n");
        for (i, label) in truth.iter().enumerate() {
            csv.push_str(&format!("{i},{label}\n"));
        }
        files.push(("truth.csv".into(), csv));
        outputs.push("truth.csv");
    }
    for (name, contents) in &files {
        write_file(&args.out, name, contents)?;
    }
    println!("wrote {} files to {}", files.len(), args.out.display());
    Ok(())
}

fn run_sweep(args: SweepArgs) -> Result<(), AppError> {
    let seed = effective_seed(args.algo.seed)?;
    let (d, truth) = resolve_input(&args.input)?;
    if args.param != "c" && args.param != "alpha" {
        return Err(AppError::usage("sweep --param must be 'c' or 'alpha'"));
    }
    if args.step <= 0.0 || args.to < args.from {
        return Err(AppError::usage("sweep grid must be increasing with a positive step"));
    }

    let mut rows = Vec::new();
    let mut best_nstar: Option<(f64, f64)> = None;
    let mut all_converged = true;
    let mut value = args.from;
    while value <= args.to + 1e-12 {
        let mut algo_args = clone_algo_args(&args.algo);
        if args.param == "c" {
            algo_args.c = value.round() as usize;
        } else {
            algo_args.alpha = value;
        }
        let output = execute_algorithm(
            algo_args.algo,
            &d,
            &algo_args,
            seed,
            truth.as_deref(),
            0.5,
            HardenFlag::MaxMass,
        )?;
        all_converged &= output.converged;
        let metric_fields = match &output.metrics {
            Some(m) => report::metrics_csv_row(m),
            None => format!(
                ",,,,,,{}",
                output.nstar.map_or(String::new(), |v| v.to_string())
            ),
        };
        rows.push(format!(
            "{},{},{},{}",
            args.param, value, metric_fields, output.converged
        ));
        if let Some(nstar) = output.nstar {
            match best_nstar {
                Some((best, _)) if nstar >= best => {}
                _ => best_nstar = Some((nstar, value)),
            }
        }
        value += args.step;
    }

    let manifest_value =
        manifest("sweep", &args.input.input, Some(&args.algo), seed, &["sweep.csv"]);
    let manifest_line = serde_json::to_string(&manifest_value).expect("manifest serializes");
    let mut csv = format!(
        "# manifest: {manifest_line}\nparam,value,{},converged\n",
        report::METRICS_CSV_HEADER
    );
    for row in &rows {
        csv.push_str(row);
        csv.push('\n');
    }
    write_file(&args.out, "sweep.csv", &csv)?;
    if let Some((nstar, value)) = best_nstar {
        println!("minimum validity index {nstar:.6} at {} = {value}", args.param);
    }
    if args.algo.strict_convergence && !all_converged {
        return Err(AppError::non_convergence("a sweep run did not converge"));
    }
    Ok(())
}

fn clone_algo_args(args: &AlgoArgs) -> AlgoArgs {
    AlgoArgs {
        algo: args.algo,
        c: args.c,
        alpha: args.alpha,
        beta: args.beta,
        delta: args.delta,
        eta: args.eta,
        gamma: args.gamma,
        xi: args.xi,
        psi: args.psi,
        q: args.q,
        max_card: args.max_card,
        full_frame: args.full_frame,
        empty_set_exponent: args.empty_set_exponent,
        init: args.init.clone(),
        seed: args.seed,
        max_iterations: args.max_iterations,
        strict_convergence: args.strict_convergence,
    }
}

fn run_graph_sim(args: GraphSimArgs) -> Result<(), AppError> {
    let file = fs::File::open(&args.input)
        .map_err(|e| AppError::data(format!("{}: {e}", args.input.display())))?;
    let adj = load_edge_list(BufReader::new(file))?;
    let sim = graph_similarity(&adj, graph_index(args.index, args.steps))?;
    let d = similarity_to_dissimilarity(&sim);
    let manifest_value = manifest(
        "graph-sim",
        &args.input.display().to_string(),
        None,
        0,
        &["dissimilarity.csv"],
    );
    let manifest_line = serde_json::to_string(&manifest_value).expect("manifest serializes");
    write_file(
        &args.out,
        "dissimilarity.csv",
        &write_dissimilarity_csv(&d, Some(&format!("manifest: {manifest_line}"))),
    )?;
    println!(
        "wrote {} ({} nodes, {} edges)",
        args.out.join("dissimilarity.csv").display(),
        adj.n(),
        adj.edge_count()
    );
    Ok(())
}
