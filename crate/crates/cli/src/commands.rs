use std::fmt::{self, Write as _};
use std::fs;
use std::io::BufReader;
use std::path::{Path, PathBuf};

use serde::Serialize;
use tmoga_core::benchgen::{self, EventParams};
use tmoga_core::graph::{self, LoadOptions, PARTITION_EXTENSION, SNAPSHOT_EXTENSION, TRUTH_EXTENSION};
use tmoga_core::infotheory;
use tmoga_core::pipeline::{self, REPORT_SCHEMA_VERSION};
use tmoga_core::{metrics, DynamicNetwork, Error, GaParams, NodeRegistry, Partition};

use crate::args::{
    ConfigFile, DetectArgs, EvaluateArgs, GaArgs, GenerateArgs, InitCompareArgs, Model, Variant, VerifyArgs,
};

/// A failed command, carrying its exit status.
#[derive(Debug)]
pub enum Failure {
    Verification(String),
    Usage(String),
    Io(String),
}

impl Failure {
    pub fn exit_code(&self) -> u8 {
        match self {
            Failure::Verification(_) => 1,
            Failure::Usage(_) => 2,
            Failure::Io(_) => 3,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Verification(m) | Failure::Usage(m) | Failure::Io(m) => f.write_str(m),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidParams(_) | Error::Infeasible(_) => Failure::Usage(e.to_string()),
            _ => Failure::Io(e.to_string()),
        }
    }
}

type CmdResult<T = ()> = std::result::Result<T, Failure>;

fn write_file(path: &Path, text: impl AsRef<[u8]>) -> CmdResult {
    fs::write(path, text).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

fn create_dir(path: &Path) -> CmdResult {
    fs::create_dir_all(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

fn read_text(path: &Path) -> CmdResult<String> {
    fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("plain data serializes") + "\n"
}

fn file_stem(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default()
}

/// Files with `extension` in `dir`; a missing or empty directory is an error.
fn files_in(dir: &Path, extension: &str) -> CmdResult<Vec<PathBuf>> {
    let files = graph::list_files(dir, extension)?;
    if files.is_empty() {
        return Err(Failure::Usage(format!("no *.{extension} files in {}", dir.display())));
    }
    Ok(files)
}

fn snapshot_files(input: &[PathBuf]) -> CmdResult<Vec<PathBuf>> {
    match input {
        [dir] if dir.is_dir() => files_in(dir, SNAPSHOT_EXTENSION),
        files => Ok(files.to_vec()),
    }
}

/// Interns every node id that appears in the given label files.
fn intern_ids(registry: &mut NodeRegistry, files: &[PathBuf]) -> CmdResult {
    for path in files {
        let ids = graph::registry_from_partition_text(BufReader::new(read_text(path)?.as_bytes()))?;
        for i in 0..ids.len() {
            registry.intern(ids.id(i));
        }
    }
    Ok(())
}

fn read_partitions(files: &[PathBuf], registry: &NodeRegistry) -> CmdResult<Vec<Partition>> {
    files
        .iter()
        .map(|path| {
            let text = read_text(path)?;
            graph::read_partition(text.as_bytes(), registry)
                .map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
        })
        .collect()
}

fn check_counts(what: &str, got: usize, expected: usize) -> CmdResult {
    if got != expected {
        return Err(Failure::Usage(format!("{got} {what} files for {expected} snapshots")));
    }
    Ok(())
}

/// Resolved search settings: defaults, then the config file, then flags.
pub struct Settings {
    pub params: GaParams,
    pub workers: Option<usize>,
}

pub fn resolve(ga: &GaArgs) -> CmdResult<Settings> {
    let (mut config, seed_in_config) = match &ga.config {
        Some(path) => {
            let text = read_text(path)?;
            let value: serde_json::Value = serde_json::from_str(&text)
                .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
            let has_seed = value.get("seed").is_some();
            let config: ConfigFile = serde_json::from_value(value)
                .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
            (config, has_seed)
        }
        None => (ConfigFile::default(), false),
    };
    if ga.seed.is_none() && !seed_in_config && std::env::var_os("CI").is_some() {
        return Err(Failure::Usage("a seed is required when CI is set".into()));
    }
    let p = &mut config.params;
    let set = |dst: &mut usize, src: Option<usize>| {
        if let Some(v) = src {
            *dst = v;
        }
    };
    set(&mut p.population_size, ga.population);
    set(&mut p.generations, ga.generations);
    set(&mut p.max_depth, ga.max_depth);
    let setf = |dst: &mut f64, src: Option<f64>| {
        if let Some(v) = src {
            *dst = v;
        }
    };
    setf(&mut p.cid_threshold, ga.cid_threshold);
    setf(&mut p.transfer_probability, ga.tp);
    setf(&mut p.crossover_probability, ga.cp);
    setf(&mut p.mutation_probability, ga.mp);
    if let Some(seed) = ga.seed {
        p.seed = seed;
    }
    let mut params = config.params;
    params = match ga.variant.or(config.variant) {
        Some(Variant::Tmoga2) => params.tmoga2(),
        Some(Variant::Sde) => params.shift_based(),
        Some(Variant::Tmoga) | None => params,
    };
    params.validate()?;
    Ok(Settings {
        params,
        workers: ga.workers.or(config.workers),
    })
}

fn init_workers(workers: Option<usize>) -> CmdResult {
    if let Some(n) = workers {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Failure::Usage(format!("cannot start {n} workers: {e}")))?;
    }
    Ok(())
}

/// Network plus optional ground truth, sharing one registry.
fn load_inputs(input: &[PathBuf], truth: Option<&Path>) -> CmdResult<(Vec<PathBuf>, DynamicNetwork, Option<Vec<Partition>>)> {
    let files = snapshot_files(input)?;
    let truth_files = truth.map(|dir| files_in(dir, TRUTH_EXTENSION)).transpose()?;
    let mut network = graph::load_dynamic(&files, LoadOptions::default())?;
    if let Some(tf) = &truth_files {
        check_counts("truth", tf.len(), files.len())?;
        // Nodes seen only in truth files go after the edge-list nodes, so
        // numbering (and hence the search) does not depend on `--truth`.
        let mut registry = network.registry().clone();
        intern_ids(&mut registry, tf)?;
        if registry.len() != network.node_count() {
            network = graph::load_dynamic_with(&files, LoadOptions::default(), registry)?;
        }
    }
    let truths = truth_files
        .map(|tf| read_partitions(&tf, network.registry()))
        .transpose()?;
    Ok((files, network, truths))
}

pub fn generate(args: &GenerateArgs) -> CmdResult {
    let (sequence, parameters) = match args.model.event_model() {
        None => {
            let seq = if args.model == Model::Synfix {
                benchgen::gen_synfix(args.z, args.seed)?
            } else {
                benchgen::gen_synvar(args.z, args.seed)?
            };
            (seq, serde_json::json!({ "z": args.z }))
        }
        Some(model) => {
            let mut params: EventParams = match &args.config {
                Some(path) => serde_json::from_str(&read_text(path)?)
                    .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?,
                None => EventParams::default(),
            };
            if let Some(n) = args.nodes {
                params.nodes = n;
            }
            if let Some(t) = args.snapshots {
                params.snapshots = t;
            }
            let seq = benchgen::gen_events(model, &params, args.seed)?;
            let value = serde_json::to_value(&params).expect("plain data serializes");
            (seq, value)
        }
    };
    let manifest = benchgen::write_sequence(&args.output, &sequence, args.model.name(), args.seed, parameters)?;
    println!(
        "wrote {} snapshots of {} nodes to {}",
        manifest.snapshots.len(),
        manifest.nodes,
        args.output.display()
    );
    println!("communities per snapshot: {:?}", manifest.community_counts);
    Ok(())
}

fn trace_csv(report: &pipeline::RunReport) -> String {
    let arity = report
        .snapshots
        .iter()
        .flat_map(|s| s.trace.first())
        .map(|g| g.best.len())
        .max()
        .unwrap_or(0);
    let mut out = String::from("time,generation");
    for m in 0..arity {
        let _ = write!(out, ",best_f{m}");
    }
    out.push_str(",front_size\n");
    for s in &report.snapshots {
        for g in &s.trace {
            let _ = write!(out, "{},{}", s.time, g.generation);
            for v in &g.best {
                let _ = write!(out, ",{v}");
            }
            let _ = writeln!(out, ",{}", g.front_size);
        }
    }
    out
}

pub fn detect(args: &DetectArgs) -> CmdResult {
    let settings = resolve(&args.ga)?;
    init_workers(settings.workers)?;
    let (files, network, truths) = load_inputs(&args.input, args.truth.as_deref())?;
    let report = pipeline::run_tmoga(&network, &settings.params, truths.as_deref())?;

    create_dir(&args.output)?;
    let part_names: Vec<String> = files
        .iter()
        .map(|f| format!("{}.{PARTITION_EXTENSION}", file_stem(f)))
        .collect();
    for (s, name) in report.snapshots.iter().zip(&part_names) {
        write_file(&args.output.join(name), s.partition().to_text(network.registry()))?;
    }
    write_file(&args.output.join("report.json"), to_json(&report))?;
    write_file(&args.output.join("summary.csv"), report.summary_csv())?;
    write_file(
        &args.output.join("fronts.csv"),
        report.fronts_csv(|t| part_names[t - 1].clone()),
    )?;
    write_file(&args.output.join("trace.csv"), trace_csv(&report))?;

    print!("{}", report.summary_csv());
    if let Some(mean) = report.mean_nmi_truth() {
        println!("mean NMI to truth: {mean:.4}");
    }
    println!(
        "total {:.2}s, feature transfer {:.3}s",
        report.total_seconds,
        report.transfer_seconds()
    );
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EvaluationRow {
    pub time: usize,
    pub partition: String,
    pub communities: usize,
    pub modularity: Option<f64>,
    pub community_score: Option<f64>,
    pub nmi_truth: Option<f64>,
}

#[derive(Debug, Serialize)]
struct Evaluation<'a> {
    schema_version: u32,
    rows: &'a [EvaluationRow],
}

fn evaluation_csv(rows: &[EvaluationRow]) -> String {
    let opt = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
    let mut out = String::from("time,partition,communities,modularity,community_score,nmi_truth\n");
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{}",
            r.time,
            r.partition,
            r.communities,
            opt(r.modularity),
            opt(r.community_score),
            opt(r.nmi_truth)
        );
    }
    out
}

pub fn evaluate(args: &EvaluateArgs) -> CmdResult {
    if args.truth.is_none() && args.snapshots.is_none() {
        return Err(Failure::Usage("evaluate needs --truth, --snapshots or both".into()));
    }
    let part_files = files_in(&args.partitions, PARTITION_EXTENSION)?;
    let mut registry = NodeRegistry::new();
    intern_ids(&mut registry, &part_files)?;
    let truth_files = match &args.truth {
        Some(dir) => {
            let files = files_in(dir, TRUTH_EXTENSION)?;
            check_counts("truth", files.len(), part_files.len())?;
            Some(files)
        }
        None => None,
    };
    let network = match &args.snapshots {
        Some(dir) => {
            let files = files_in(dir, SNAPSHOT_EXTENSION)?;
            check_counts("snapshot", files.len(), part_files.len())?;
            let network = graph::load_dynamic_with(&files, LoadOptions::default(), registry)?;
            registry = network.registry().clone();
            Some(network)
        }
        None => None,
    };
    let partitions = read_partitions(&part_files, &registry)?;
    let truths = truth_files.map(|f| read_partitions(&f, &registry)).transpose()?;

    let mut rows = Vec::with_capacity(partitions.len());
    for (t, p) in partitions.iter().enumerate() {
        let snapshot = network.as_ref().map(|n| n.snapshot(t));
        rows.push(EvaluationRow {
            time: t + 1,
            partition: part_files[t]
                .file_name()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_default(),
            communities: p.community_count(),
            modularity: snapshot.map(|s| metrics::modularity(s, p)).transpose()?,
            community_score: snapshot.map(|s| metrics::community_score(s, p)).transpose()?,
            nmi_truth: truths.as_ref().map(|tr| metrics::nmi(p, &tr[t])).transpose()?,
        });
    }
    let csv = evaluation_csv(&rows);
    print!("{csv}");
    if let Some(dir) = &args.output {
        create_dir(dir)?;
        write_file(&dir.join("evaluation.csv"), &csv)?;
        let doc = Evaluation {
            schema_version: REPORT_SCHEMA_VERSION,
            rows: &rows,
        };
        write_file(&dir.join("evaluation.json"), to_json(&doc))?;
    }
    Ok(())
}

pub fn init_compare(args: &InitCompareArgs) -> CmdResult {
    let settings = resolve(&args.ga)?;
    init_workers(settings.workers)?;
    let (_, network, truths) = load_inputs(std::slice::from_ref(&args.input), Some(&args.truth))?;
    let truths = truths.expect("truth directory was given");
    let table = pipeline::compare_initializations(&network, &truths, &settings.params, settings.params.seed)?;
    let csv = table.to_csv();
    print!("{csv}");
    if let Some(path) = &args.output {
        if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
            create_dir(parent)?;
        }
        write_file(path, &csv)?;
    }
    Ok(())
}

pub fn verify(args: &VerifyArgs) -> CmdResult {
    let summary = infotheory::verify_batch(args.trials, args.seed, args.inject_fault)?;
    let status = |ok: bool| if ok { "PASS" } else { "FAIL" };
    let tol = infotheory::THEOREM_TOLERANCE;
    println!("{:<34} {:>14} {:>14}  status", "check", "min", "median");
    println!(
        "{:<34} {:>14} {:>14}  {}",
        "entropy bound (all partitions, n<=6)",
        "-",
        "-",
        status(summary.entropy_bound_exhaustive)
    );
    println!(
        "{:<34} {:>14.3e} {:>14.3e}  {}",
        "feature sufficiency gap",
        summary.min_sufficiency_gap,
        summary.median_sufficiency_gap,
        status(summary.min_sufficiency_gap >= -tol)
    );
    println!(
        "{:<34} {:>14.3e} {:>14}  {}",
        "gap vs expected KL (max mismatch)",
        summary.max_sufficiency_kl_mismatch,
        "-",
        status(summary.max_sufficiency_kl_mismatch <= tol)
    );
    println!(
        "{:<34} {:>14.3e} {:>14.3e}  {}",
        "transfer NMI gain",
        summary.min_transfer_gap,
        summary.median_transfer_gap,
        status(summary.min_transfer_gap >= -tol)
    );
    println!("instances: {}, failing: {}", summary.trials, summary.failures);
    if summary.passed() {
        Ok(())
    } else {
        Err(Failure::Verification(format!(
            "{} of {} instances failed",
            summary.failures, summary.trials
        )))
    }
}
