//! End-to-end acceptance run. Every criterion prints one PASS/FAIL line and
//! the process exits nonzero if any of them fails.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fs;
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use graphforge::answer::Answer;
use graphforge::dataset::{self, SampleRecord, MANIFEST_FILE};
use graphforge::factory::{make_instance, TaskInstance};
use graphforge::gdl::{GdlKind, LabelScheme};
use graphforge::generate::{derive_seed, Distribution, GenSpec, SizeClass};
use graphforge::mask::{mark_critical_spans, target_text};
use graphforge::oracle::{self, MAX_ORACLE_NODES};
use graphforge::solvers::{replay, DEFAULT_HAMILTONIAN_BUDGET};
use graphforge::task::{AnswerShape, TaskKind};
use graphforge::trace::Step;
use graphforge::verifier::{self, floats_match, judge, ParsedAnswer};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const FORGE: &str = env!("CARGO_BIN_EXE_forge");
const SEED: u64 = 1;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn forge(args: &[&str]) -> String {
    let out = Command::new(FORGE).args(args).output().expect("forge runs");
    assert!(out.status.success(), "forge {args:?} failed: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn generate(dir: &Path, extra: &[&str]) -> Duration {
    let start = Instant::now();
    let mut args = vec!["generate", "--out", dir.to_str().unwrap()];
    args.extend_from_slice(extra);
    forge(&args);
    start.elapsed()
}

/// Records plus the instances they regenerate to.
struct Corpus {
    train: Vec<SampleRecord>,
    test: Vec<SampleRecord>,
    instances: Vec<TaskInstance>,
}

impl Corpus {
    fn records(&self) -> impl Iterator<Item = &SampleRecord> {
        self.train.iter().chain(&self.test)
    }
}

fn oracle_suite() -> Outcome {
    let start = Instant::now();
    let mut agree = 0;
    let mut failures = Vec::new();
    for kind in TaskKind::ALL {
        for i in 0..200u64 {
            let spec = GenSpec::new(
                Distribution::ALL[(i % 3) as usize],
                SizeClass::Mini,
                i.is_multiple_of(2),
                derive_seed(2024, &[kind as u64, i]),
            );
            let inst = make_instance(kind, &spec, GdlKind::EdgeList, LabelScheme::IntegerId).unwrap();
            let small = inst.graph.node_count() <= MAX_ORACLE_NODES;
            match oracle::check(kind, &inst.graph, &inst.query_args, &inst.answer) {
                Ok(()) if small => agree += 1,
                Ok(()) => failures.push(format!("{kind} #{i}: graph too large")),
                Err(why) => failures.push(format!("{kind} #{i}: {why}")),
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    let detail = format!("{agree}/{} instances agree, {secs:.1}s", 21 * 200);
    match failures.first() {
        Some(f) => outcome(false, format!("{detail}; first: {f}")),
        None => outcome(secs < 120.0, detail),
    }
}

fn trace_replay(corpus: &Corpus) -> Outcome {
    let mut ok = 0;
    let mut first_bad = None;
    for (r, inst) in corpus.records().zip(&corpus.instances) {
        let rendered = inst.trace.render(&inst.labels).final_text;
        let good = inst.answer == r.answer
            && Some(&rendered) == r.steps_text.as_ref()
            && replay(r.task, &inst.trace).as_ref() == Ok(&r.answer);
        if good {
            ok += 1;
        } else if first_bad.is_none() {
            first_bad = Some(r.id.clone());
        }
    }
    let total = corpus.instances.len();
    let detail = format!("{ok}/{total} samples replay to the recorded answer");
    match first_bad {
        Some(id) => outcome(false, format!("{detail}; first failure {id}")),
        None => outcome(total > 0, detail),
    }
}

fn list_mutants(seq: &[usize], n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for i in 0..seq.len() {
        for j in i + 1..seq.len() {
            let mut m = seq.to_vec();
            m.swap(i, j);
            out.push(m);
        }
        let mut m = seq.to_vec();
        m.remove(i);
        out.push(m);
        for x in (0..n).filter(|&x| x != seq[i]) {
            let mut m = seq.to_vec();
            m[i] = x;
            out.push(m);
        }
    }
    out
}

fn verifier_contract(corpus: &Corpus) -> Outcome {
    let mut accepted = 0;
    let mut total = 0;
    for r in corpus.records() {
        total += 1;
        let output = format!("Let me think.\n### Answer: {}", r.answer_text);
        if verifier::judge_record(r, &output) == Ok((true, false)) {
            accepted += 1;
        }
    }

    let (mut mutants, mut agreeing) = (0, 0);
    for r in corpus.records().filter(|r| r.graph_raw.n <= MAX_ORACLE_NODES) {
        let Answer::NodeList(seq) = &r.answer else { continue };
        let graph = r.graph().unwrap();
        let valid = oracle::valid_sequences(r.task, &graph, &r.query_args).expect("sequence task");
        for m in list_mutants(seq, graph.node_count()) {
            mutants += 1;
            let verdict =
                judge(r.task, &graph, &r.query_args, &r.answer, &ParsedAnswer::Answer(Answer::NodeList(m.clone())));
            if verdict == valid.contains(&m) {
                agreeing += 1;
            }
        }
    }

    let boundary =
        [1.0, 0.5, 1.0 / 3.0, 0.1234].iter().all(|&x| floats_match(x, x * 1.03) && !floats_match(x, x * (1.03 + 1e-9)));

    outcome(
        accepted == total && mutants > 0 && agreeing == mutants && boundary,
        format!(
            "self-acceptance {accepted}/{total}, mutants agreeing with oracle {agreeing}/{mutants}, 3% boundary {}",
            if boundary { "ok" } else { "wrong" }
        ),
    )
}

fn dataset_shape(corpus: &Corpus) -> Outcome {
    let mut per: BTreeMap<(TaskKind, SizeClass), usize> = BTreeMap::new();
    for r in &corpus.train {
        *per.entry((r.task, r.size_class)).or_default() += 1;
    }
    let in_domain = TaskKind::in_domain();
    let train_ok = in_domain.len() == 17
        && in_domain
            .iter()
            .all(|&k| per.get(&(k, SizeClass::Mini)) == Some(&400) && per.get(&(k, SizeClass::Small)) == Some(&400))
        && per.values().sum::<usize>() == corpus.train.len();
    let mut test_per: BTreeMap<TaskKind, usize> = BTreeMap::new();
    for r in &corpus.test {
        *test_per.entry(r.task).or_default() += 1;
    }
    let test_ok = test_per.len() == 21 && test_per.values().all(|&c| c == 100);
    let ood: BTreeSet<&str> = TaskKind::OUT_OF_DOMAIN.iter().map(|k| k.as_str()).collect();
    let expected: BTreeSet<&str> = ["bfs", "cycle", "clustering_coefficient", "euler_path"].into();
    let no_ood_in_train = corpus.train.iter().all(|r| !r.task.is_out_of_domain());
    outcome(
        corpus.train.len() == 13_600
            && corpus.test.len() == 2_100
            && train_ok
            && test_ok
            && ood == expected
            && no_ood_in_train,
        format!("train {}, test {}, out-of-domain {:?}", corpus.train.len(), corpus.test.len(), ood),
    )
}

fn pagerank_constants(corpus: &Corpus) -> Outcome {
    let mut checked = 0;
    let mut worst: f64 = 0.0;
    let mut setup_ok = true;
    for (r, inst) in corpus.records().zip(&corpus.instances) {
        if r.task != TaskKind::PageRank {
            continue;
        }
        checked += 1;
        let n = r.graph_raw.n;
        let text = r.steps_text.as_deref().unwrap_or_default();
        setup_ok &= text.contains(&format!("at score 1/{n}")) && text.contains("Run 3 rounds with damping factor 0.85");
        setup_ok &= matches!(
            inst.trace.steps.first(),
            Some(Step::PageRankSetup { n: sn, iterations: 3, damping }) if *sn == n && *damping == 0.85
        );
        let rounds: Vec<&Vec<f64>> = inst
            .trace
            .steps
            .iter()
            .filter_map(|s| match s {
                Step::PageRankRound { scores, .. } => Some(scores),
                _ => None,
            })
            .collect();
        setup_ok &= rounds.len() == 3;
        let exact = oracle::pagerank_rounds(&r.graph().unwrap());
        for scores in rounds.into_iter().chain(exact.iter()) {
            worst = worst.max((scores.iter().sum::<f64>() - 1.0).abs());
        }
    }
    outcome(
        checked > 0 && setup_ok && worst <= 1e-9,
        format!("{checked} traces, damping 0.85, 3 rounds, init 1/n: {setup_ok}, max |sum - 1| = {worst:.1e}"),
    )
}

fn span_set(spans: &Option<Vec<[usize; 2]>>) -> HashSet<[usize; 2]> {
    spans.iter().flatten().copied().collect()
}

/// Whole-word label occurrences in `text` that do not start a critical span.
fn uncovered_labels(r: &SampleRecord) -> usize {
    let text = r.target_text().unwrap();
    let bytes = text.as_bytes();
    let critical = span_set(&r.critical_spans);
    let starts: HashSet<usize> = critical.iter().map(|s| s[0]).collect();
    let mut missing = 0;
    for label in &r.labels {
        for (at, _) in text.match_indices(label.as_str()) {
            let end = at + label.len();
            let bounded = (at == 0 || !bytes[at - 1].is_ascii_alphanumeric())
                && bytes.get(end).is_none_or(|b| !b.is_ascii_alphanumeric());
            if bounded && !starts.contains(&at) {
                missing += 1;
            }
        }
    }
    missing + critical.iter().filter(|s| !r.labels.iter().any(|l| l == &text[s[0]..s[1]])).count()
}

fn mask_statistics(
    corpus: &Corpus,
    letters: &[SampleRecord],
    gamma0: &[SampleRecord],
    gamma1: &[SampleRecord],
) -> Outcome {
    let (mut free, mut supervised, mut mismatched) = (0usize, 0usize, 0usize);
    for (r, inst) in corpus.records().zip(&corpus.instances) {
        let trace = inst.trace.render(&inst.labels).to_labeled();
        let (target, answer_start) = target_text(&trace, inst.answer.render(&inst.labels));
        let spans = mark_critical_spans(&target, &inst.labels, answer_start).unwrap();
        let critical: HashSet<[usize; 2]> = spans.iter().filter(|s| s.critical).map(|s| [s.start, s.end]).collect();
        let refs: HashSet<[usize; 2]> = target.nodes.iter().map(|n| [n.start, n.end]).collect();
        if critical != span_set(&r.critical_spans) || critical != refs {
            mismatched += 1;
        }
        let sup = span_set(&r.supervised_spans);
        for s in spans.iter().filter(|s| !s.critical && s.end <= answer_start) {
            free += 1;
            supervised += sup.contains(&[s.start, s.end]) as usize;
        }
    }
    let fraction = supervised as f64 / free.max(1) as f64;
    let uncovered: usize = letters.iter().map(uncovered_labels).sum();

    let all_spans = |r: &SampleRecord| -> (HashSet<[usize; 2]>, HashSet<[usize; 2]>) {
        let inst = r.regenerate().unwrap();
        let trace = inst.trace.render(&inst.labels).to_labeled();
        let (target, answer_start) = target_text(&trace, inst.answer.render(&inst.labels));
        let spans = mark_critical_spans(&target, &inst.labels, answer_start).unwrap();
        let every = spans.iter().map(|s| [s.start, s.end]).collect();
        let forced = spans.iter().filter(|s| s.critical || s.start >= answer_start).map(|s| [s.start, s.end]).collect();
        (every, forced)
    };
    let degenerate = gamma0.iter().all(|r| span_set(&r.supervised_spans) == all_spans(r).0)
        && gamma1.iter().all(|r| span_set(&r.supervised_spans) == all_spans(r).1)
        && !gamma0.is_empty()
        && !gamma1.is_empty();

    outcome(
        free >= 10_000 && (fraction - 0.20).abs() <= 0.015 && mismatched == 0 && uncovered == 0 && degenerate,
        format!(
            "supervised {supervised}/{free} non-critical spans = {fraction:.4} at gamma 0.8, \
             critical-span mismatches {mismatched}, uncovered letter labels {uncovered} in {} samples, \
             gamma 0/1 exact: {degenerate}",
            letters.len()
        ),
    )
}

fn determinism(a: &Path, b: &Path) -> Outcome {
    let mut names: Vec<String> =
        fs::read_dir(a).unwrap().map(|e| e.unwrap().file_name().into_string().unwrap()).collect();
    names.sort();
    let same = names.iter().all(|n| fs::read(a.join(n)).ok() == fs::read(b.join(n)).ok());
    outcome(same && names.iter().any(|n| n == MANIFEST_FILE), format!("{} files byte-identical: {same}", names.len()))
}

fn write_predictions(path: &Path, records: &[&SampleRecord], output: impl Fn(&SampleRecord) -> String) {
    let mut text = String::new();
    for r in records {
        let line = serde_json::json!({ "id": r.id, "output": output(r) });
        text.push_str(&line.to_string());
        text.push('\n');
    }
    fs::write(path, text).unwrap();
}

fn report_accuracy(dataset: &Path, predictions: &Path, report: &Path) -> f64 {
    forge(&[
        "score",
        "--dataset",
        dataset.to_str().unwrap(),
        "--predictions",
        predictions.to_str().unwrap(),
        "--report",
        report.to_str().unwrap(),
    ]);
    let report: serde_json::Value = serde_json::from_str(&fs::read_to_string(report).unwrap()).unwrap();
    report["overall"]["accuracy"].as_f64().unwrap()
}

fn scoring_sanity(corpus: &Corpus, dir: &Path) -> Outcome {
    let test: Vec<&SampleRecord> = corpus.test.iter().collect();
    write_predictions(&dir.join("oracle.jsonl"), &test, |r| format!("### Answer: {}", r.answer_text));
    let oracle_acc =
        report_accuracy(&dir.join("a/test.jsonl"), &dir.join("oracle.jsonl"), &dir.join("oracle-report.json"));

    let boolean: Vec<&SampleRecord> =
        corpus.records().filter(|r| r.task.shape() == AnswerShape::Bool).take(400).collect();
    fs::write(dir.join("boolean.jsonl"), dataset::to_jsonl(&boolean.iter().map(|r| (*r).clone()).collect::<Vec<_>>()))
        .unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let coins: Vec<bool> = (0..boolean.len()).map(|_| rng.gen_bool(0.5)).collect();
    let index: BTreeMap<&str, bool> = boolean.iter().map(|r| r.id.as_str()).zip(coins).collect();
    write_predictions(&dir.join("coins.jsonl"), &boolean, |r| {
        format!("### Answer: {}", if index[r.id.as_str()] { "yes" } else { "no" })
    });
    let coin_acc = report_accuracy(&dir.join("boolean.jsonl"), &dir.join("coins.jsonl"), &dir.join("coin-report.json"));

    outcome(
        oracle_acc == 1.0 && boolean.len() == 400 && (coin_acc - 0.5).abs() <= 0.1,
        format!("oracle predictions {oracle_acc:.3}, random yes/no {coin_acc:.3} over {} samples", boolean.len()),
    )
}

fn performance(generation: Duration, corpus: &Corpus) -> Outcome {
    let mut instances = 0;
    let mut resampled = 0;
    let mut slowest = Duration::ZERO;
    for size in SizeClass::ALL {
        for i in 0..250u64 {
            let spec =
                GenSpec::new(Distribution::ALL[(i % 3) as usize], size, false, derive_seed(77, &[size as u64, i]));
            let start = Instant::now();
            let inst =
                make_instance(TaskKind::HamiltonianPath, &spec, GdlKind::EdgeList, LabelScheme::IntegerId).unwrap();
            slowest = slowest.max(start.elapsed());
            instances += 1;
            resampled += (inst.attempts > 1) as usize;
        }
    }
    for inst in corpus.instances.iter().filter(|i| i.kind == TaskKind::HamiltonianPath) {
        instances += 1;
        resampled += (inst.attempts > 1) as usize;
    }
    let rate = resampled as f64 / instances as f64;
    outcome(
        generation < Duration::from_secs(300) && rate < 0.05 && slowest < Duration::from_secs(1),
        format!(
            "paper-default generation {:.1}s; hamiltonian resample rate {rate:.4} ({resampled}/{instances}), \
             budget {DEFAULT_HAMILTONIAN_BUDGET} extensions, slowest instance {:.1}ms",
            generation.as_secs_f64(),
            slowest.as_secs_f64() * 1e3
        ),
    )
}

fn main() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path();
    let seed = SEED.to_string();
    let preset = ["--preset", "paper-default", "--seed", seed.as_str()];
    let generation = generate(&dir.join("a"), &preset);
    generate(&dir.join("b"), &preset);
    generate(&dir.join("letters"), &["--scheme", "random_letters", "--count", "40", "--seed", "3"]);
    generate(&dir.join("g0"), &["--gamma", "0", "--count", "8", "--seed", "4"]);
    generate(&dir.join("g1"), &["--gamma", "1", "--count", "8", "--seed", "4"]);

    let train = dataset::read_records(&dir.join("a/train.jsonl")).unwrap();
    let test = dataset::read_records(&dir.join("a/test.jsonl")).unwrap();
    let instances = train.iter().chain(&test).map(|r| r.regenerate().unwrap()).collect();
    let corpus = Corpus { train, test, instances };
    let letters = dataset::read_records(&dir.join("letters/data.jsonl")).unwrap();
    let gamma0 = dataset::read_records(&dir.join("g0/data.jsonl")).unwrap();
    let gamma1 = dataset::read_records(&dir.join("g1/data.jsonl")).unwrap();

    let criteria: Vec<(&str, Outcome)> = vec![
        ("oracle suite", oracle_suite()),
        ("trace replay", trace_replay(&corpus)),
        ("verifier contract", verifier_contract(&corpus)),
        ("dataset shape", dataset_shape(&corpus)),
        ("pagerank constants", pagerank_constants(&corpus)),
        ("mask statistics", mask_statistics(&corpus, &letters, &gamma0, &gamma1)),
        ("determinism", determinism(&dir.join("a"), &dir.join("b"))),
        ("scoring sanity", scoring_sanity(&corpus, dir)),
        ("performance", performance(generation, &corpus)),
    ];

    let mut failed = 0;
    for (name, o) in &criteria {
        println!("{} {name}: {}", if o.pass { "PASS" } else { "FAIL" }, o.detail);
        failed += (!o.pass) as usize;
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
