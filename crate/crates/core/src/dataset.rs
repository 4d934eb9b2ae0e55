//! Dataset configuration, generation and file formats.
//!
//! A dataset is a set of named splits, each a line-delimited JSON file with
//! one [`SampleRecord`] per line, plus a `manifest.json` holding the config
//! and a SHA-256 digest of every split file. Sample `j` of task `t` in split
//! `s` draws from its own seed derived from `(config seed, s, t, j)`, so
//! output is identical no matter how generation is scheduled.

use std::collections::BTreeMap;
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::answer::Answer;
use crate::factory::{make_instance, FactoryError, TaskInstance};
use crate::gdl::{GdlKind, LabelScheme, NodeLabels};
use crate::generate::{derive_seed, Distribution, ForgeRng, GenSpec, SizeClass};
use crate::graph::{Graph, GraphRaw};
use crate::mask::{emit_masked_sample, MaskError, DEFAULT_GAMMA};
use crate::oracle;
use crate::task::{QueryArgs, TaskKind};

pub const MANIFEST_FILE: &str = "manifest.json";

#[derive(Debug, Error)]
pub enum DatasetError {
    #[error("invalid config: {0}")]
    Config(String),
    #[error(transparent)]
    Generation(#[from] FactoryError),
    #[error("mask annotation failed for {id}: {source}")]
    Mask { id: String, source: MaskError },
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> DatasetError + '_ {
    move |source| DatasetError::Io { path: path.to_path_buf(), source }
}

/// Expands task names, accepting the groups `all`, `in-domain` and `ood`.
pub fn resolve_tasks(names: &[String]) -> Result<Vec<TaskKind>, String> {
    let mut out: Vec<TaskKind> = Vec::new();
    for name in names {
        let group: Vec<TaskKind> = match name.trim().to_ascii_lowercase().replace('_', "-").as_str() {
            "all" => TaskKind::ALL.to_vec(),
            "in-domain" => TaskKind::in_domain(),
            "ood" | "out-of-domain" => TaskKind::OUT_OF_DOMAIN.to_vec(),
            _ => vec![name.parse()?],
        };
        for k in group {
            if !out.contains(&k) {
                out.push(k);
            }
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SplitConfig {
    pub name: String,
    pub tasks: Vec<String>,
    pub count_per_task: usize,
    /// Size classes; the count is divided evenly across them, in order.
    pub sizes: Vec<SizeClass>,
}

fn default_distributions() -> Vec<Distribution> {
    Distribution::ALL.to_vec()
}

fn default_gamma() -> f64 {
    DEFAULT_GAMMA
}

fn yes() -> bool {
    true
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ForgeConfig {
    #[serde(default)]
    pub seed: u64,
    pub splits: Vec<SplitConfig>,
    #[serde(default = "default_distributions")]
    pub distributions: Vec<Distribution>,
    #[serde(default)]
    pub gdl: GdlKind,
    #[serde(default)]
    pub scheme: LabelScheme,
    #[serde(default = "default_gamma")]
    pub gamma: f64,
    #[serde(default = "yes")]
    pub include_traces: bool,
    #[serde(default = "yes")]
    pub include_masks: bool,
}

pub const PRESETS: [&str; 1] = ["paper-default"];

impl ForgeConfig {
    /// Training split of 800 samples (400 Mini, 400 Small) for each
    /// in-domain task; test split of 100 samples for all 21 tasks, 25 per
    /// size class.
    pub fn paper_default(seed: u64) -> Self {
        Self {
            seed,
            splits: vec![
                SplitConfig {
                    name: "train".into(),
                    tasks: vec!["in-domain".into()],
                    count_per_task: 800,
                    sizes: vec![SizeClass::Mini, SizeClass::Small],
                },
                SplitConfig {
                    name: "test".into(),
                    tasks: vec!["all".into()],
                    count_per_task: 100,
                    sizes: SizeClass::ALL.to_vec(),
                },
            ],
            distributions: default_distributions(),
            gdl: GdlKind::default(),
            scheme: LabelScheme::default(),
            gamma: DEFAULT_GAMMA,
            include_traces: true,
            include_masks: true,
        }
    }

    pub fn preset(name: &str, seed: u64) -> Option<Self> {
        match name {
            "paper-default" => Some(Self::paper_default(seed)),
            _ => None,
        }
    }

    pub fn validate(&self) -> Result<(), DatasetError> {
        let bad = |m: String| Err(DatasetError::Config(m));
        if !(0.0..=1.0).contains(&self.gamma) {
            return bad(format!("gamma {} is not in [0, 1]", self.gamma));
        }
        if self.distributions.is_empty() {
            return bad("at least one distribution is required".into());
        }
        if self.include_masks && !self.include_traces {
            return bad("masks index into the trace text, so include_masks needs include_traces".into());
        }
        let mut names = std::collections::HashSet::new();
        for s in &self.splits {
            if s.name.is_empty() || s.name.contains(['/', '\\']) || !names.insert(s.name.as_str()) {
                return bad(format!("split name '{}' is empty, repeated or contains a path separator", s.name));
            }
            if s.sizes.is_empty() {
                return bad(format!("split '{}' lists no size classes", s.name));
            }
            resolve_tasks(&s.tasks).map_err(DatasetError::Config)?;
        }
        Ok(())
    }
}

/// One dataset line.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleRecord {
    pub id: String,
    pub task: TaskKind,
    pub size_class: SizeClass,
    pub distribution: Distribution,
    pub directed: bool,
    pub gdl: GdlKind,
    pub node_id_scheme: LabelScheme,
    pub seed: u64,
    pub graph_text: String,
    pub graph_raw: GraphRaw,
    /// Presentation label of each node index.
    pub labels: Vec<String>,
    pub query_text: String,
    pub query_args: QueryArgs,
    pub prompt: String,
    pub answer: Answer,
    pub answer_text: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub steps_text: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub critical_spans: Option<Vec<[usize; 2]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub supervised_spans: Option<Vec<[usize; 2]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma: Option<f64>,
}

impl SampleRecord {
    pub fn graph(&self) -> Result<Graph, String> {
        Graph::try_from(&self.graph_raw).map_err(|e| e.to_string())
    }

    pub fn node_labels(&self) -> Result<NodeLabels, String> {
        NodeLabels::new(self.labels.clone())
    }

    /// Rebuilds the instance this record was generated from, including the
    /// structured trace that the text form flattens away.
    pub fn regenerate(&self) -> Result<TaskInstance, FactoryError> {
        let spec = GenSpec::new(self.distribution, self.size_class, self.directed, self.seed);
        make_instance(self.task, &spec, self.gdl, self.node_id_scheme)
    }

    /// Text that span offsets refer to: trace, newline, answer line.
    pub fn target_text(&self) -> Option<String> {
        self.steps_text.as_ref().map(|s| {
            let sep = if s.is_empty() { "" } else { "\n" };
            format!("{s}{sep}{} {}", crate::verifier::ANSWER_MARKER, self.answer_text)
        })
    }
}

struct Job {
    kind: TaskKind,
    index: usize,
    size: SizeClass,
    seed: u64,
}

fn jobs(cfg: &ForgeConfig, split_index: usize) -> Result<Vec<Job>, DatasetError> {
    let split = &cfg.splits[split_index];
    let tasks = resolve_tasks(&split.tasks).map_err(DatasetError::Config)?;
    let count = split.count_per_task;
    Ok(tasks
        .into_iter()
        .flat_map(|kind| {
            (0..count).map(move |j| Job {
                kind,
                index: j,
                size: split.sizes[j * split.sizes.len() / count],
                seed: derive_seed(cfg.seed, &[split_index as u64, kind as u64, j as u64]),
            })
        })
        .collect())
}

pub fn instance_to_record(
    id: String,
    inst: &TaskInstance,
    cfg: &ForgeConfig,
    mask_rng: &mut impl Rng,
) -> Result<SampleRecord, DatasetError> {
    let mut record = SampleRecord {
        id,
        task: inst.kind,
        size_class: inst.meta.size_class,
        distribution: inst.meta.distribution,
        directed: inst.meta.directed,
        gdl: inst.gdl,
        node_id_scheme: inst.scheme,
        seed: inst.meta.seed,
        graph_text: inst.graph_text.clone(),
        graph_raw: GraphRaw::from(&inst.graph),
        labels: inst.labels.as_slice().to_vec(),
        query_text: inst.query_text.clone(),
        query_args: inst.query_args.clone(),
        prompt: inst.prompt_text.clone(),
        answer: inst.answer.clone(),
        answer_text: inst.answer.render_text(&inst.labels),
        steps_text: None,
        critical_spans: None,
        supervised_spans: None,
        gamma: None,
    };
    if cfg.include_traces {
        record.steps_text = Some(inst.trace.render(&inst.labels).final_text);
    }
    if cfg.include_masks {
        let masked = emit_masked_sample(inst, cfg.gamma, mask_rng)
            .map_err(|source| DatasetError::Mask { id: record.id.clone(), source })?;
        record.critical_spans = Some(masked.critical_spans());
        record.supervised_spans = Some(masked.supervised_spans());
        record.gamma = Some(cfg.gamma);
    }
    Ok(record)
}

/// Generates one split in sample order, fanning out over the rayon pool.
pub fn generate_split(cfg: &ForgeConfig, split_index: usize) -> Result<Vec<SampleRecord>, DatasetError> {
    let split = &cfg.splits[split_index];
    jobs(cfg, split_index)?
        .par_iter()
        .map(|job| {
            let mut rng = ForgeRng::seed_from_u64(job.seed);
            let distribution = *cfg.distributions.choose(&mut rng).expect("validated non-empty");
            let directed = rng.gen_bool(0.5);
            let spec = GenSpec::new(distribution, job.size, directed, derive_seed(job.seed, &[1]));
            let inst = make_instance(job.kind, &spec, cfg.gdl, cfg.scheme)?;
            let mut mask_rng = ForgeRng::seed_from_u64(derive_seed(job.seed, &[2]));
            let id = format!("{}-{}-{:05}", split.name, job.kind.as_str(), job.index);
            instance_to_record(id, &inst, cfg, &mut mask_rng)
        })
        .collect()
}

pub fn to_jsonl(records: &[SampleRecord]) -> String {
    let mut out = String::new();
    for r in records {
        out.push_str(&serde_json::to_string(r).expect("records serialize"));
        out.push('\n');
    }
    out
}

pub fn parse_records(text: &str) -> Result<Vec<SampleRecord>, DatasetError> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| serde_json::from_str(l).map_err(|e| DatasetError::Parse { line: i + 1, message: e.to_string() }))
        .collect()
}

pub fn read_records(path: &Path) -> Result<Vec<SampleRecord>, DatasetError> {
    parse_records(&fs::read_to_string(path).map_err(io_err(path))?)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SplitEntry {
    pub split: String,
    pub file: String,
    pub samples: usize,
    pub sha256: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub seed: u64,
    pub config: ForgeConfig,
    pub splits: Vec<SplitEntry>,
}

/// Writes every split plus the manifest into `dir`.
pub fn write_dataset(cfg: &ForgeConfig, dir: &Path) -> Result<Manifest, DatasetError> {
    cfg.validate()?;
    fs::create_dir_all(dir).map_err(io_err(dir))?;
    let mut entries = Vec::with_capacity(cfg.splits.len());
    for (i, split) in cfg.splits.iter().enumerate() {
        let records = generate_split(cfg, i)?;
        let text = to_jsonl(&records);
        let file = format!("{}.jsonl", split.name);
        let path = dir.join(&file);
        fs::write(&path, &text).map_err(io_err(&path))?;
        entries.push(SplitEntry {
            split: split.name.clone(),
            file,
            samples: records.len(),
            sha256: hex::encode(Sha256::digest(text.as_bytes())),
        });
    }
    let manifest = Manifest { seed: cfg.seed, config: cfg.clone(), splits: entries };
    let path = dir.join(MANIFEST_FILE);
    let mut text = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
    text.push('\n');
    fs::write(&path, text).map_err(io_err(&path))?;
    Ok(manifest)
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct DatasetStats {
    pub total: usize,
    pub per_task: BTreeMap<String, usize>,
    pub per_size: BTreeMap<String, usize>,
    pub per_gdl: BTreeMap<String, usize>,
    pub per_scheme: BTreeMap<String, usize>,
    /// Fraction of `yes` answers for each boolean task.
    pub true_rate: BTreeMap<String, f64>,
    pub mean_prompt_chars: f64,
}

pub fn stats(records: &[SampleRecord]) -> DatasetStats {
    let mut s = DatasetStats { total: records.len(), ..DatasetStats::default() };
    let mut bools: BTreeMap<String, (usize, usize)> = BTreeMap::new();
    let mut chars = 0usize;
    for r in records {
        *s.per_task.entry(r.task.as_str().into()).or_default() += 1;
        *s.per_size.entry(r.size_class.as_str().into()).or_default() += 1;
        *s.per_gdl.entry(r.gdl.as_str().into()).or_default() += 1;
        *s.per_scheme.entry(r.node_id_scheme.as_str().into()).or_default() += 1;
        if let Some(b) = r.answer.as_bool() {
            let e = bools.entry(r.task.as_str().into()).or_default();
            e.0 += usize::from(b);
            e.1 += 1;
        }
        chars += r.prompt.chars().count();
    }
    s.true_rate = bools.into_iter().map(|(k, (t, n))| (k, t as f64 / n as f64)).collect();
    s.mean_prompt_chars = if records.is_empty() { 0.0 } else { chars as f64 / records.len() as f64 };
    s
}

impl fmt::Display for DatasetStats {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "samples: {}", self.total)?;
        for (title, map) in
            [("task", &self.per_task), ("size", &self.per_size), ("gdl", &self.per_gdl), ("scheme", &self.per_scheme)]
        {
            writeln!(f, "by {title}:")?;
            for (k, v) in map {
                writeln!(f, "  {k}: {v}")?;
            }
        }
        if !self.true_rate.is_empty() {
            writeln!(f, "yes rate:")?;
            for (k, v) in &self.true_rate {
                writeln!(f, "  {k}: {v:.3}")?;
            }
        }
        write!(f, "mean prompt length: {:.1} chars", self.mean_prompt_chars)
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct Agreement {
    pub agree: usize,
    pub checked: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct ValidationReport {
    pub checked: usize,
    pub skipped: usize,
    pub per_task: BTreeMap<String, Agreement>,
    /// `(id, reason)` for every sample the oracle disagrees with.
    pub failures: Vec<(String, String)>,
}

/// Runs the exhaustive oracle on every record small enough for it.
pub fn validate_records(records: &[SampleRecord]) -> ValidationReport {
    let results: Vec<Option<Result<(), String>>> = records
        .par_iter()
        .map(|r| {
            (r.graph_raw.n <= oracle::MAX_ORACLE_NODES)
                .then(|| r.graph().and_then(|g| oracle::check(r.task, &g, &r.query_args, &r.answer)))
        })
        .collect();
    let mut report = ValidationReport::default();
    for (r, res) in records.iter().zip(results) {
        let Some(res) = res else {
            report.skipped += 1;
            continue;
        };
        report.checked += 1;
        let entry = report.per_task.entry(r.task.as_str().into()).or_default();
        entry.checked += 1;
        match res {
            Ok(()) => entry.agree += 1,
            Err(why) => report.failures.push((r.id.clone(), why)),
        }
    }
    report
}
