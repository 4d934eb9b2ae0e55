//! Invariants over randomly drawn instances.

use std::collections::HashSet;

use graphforge::factory::{make_instance, TaskInstance};
use graphforge::gdl::{describe, parse_edge_list_labeled, GdlKind, LabelScheme};
use graphforge::generate::{Distribution, GenSpec, SizeClass};
use graphforge::mask::{draw_mask, mark_critical_spans, target_text};
use graphforge::oracle::pagerank_rounds;
use graphforge::solvers::replay;
use graphforge::task::TaskKind;
use graphforge::verifier::{extract_answer, judge};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn any_instance(sizes: &'static [SizeClass]) -> impl Strategy<Value = TaskInstance> {
    (0..TaskKind::ALL.len(), 0..sizes.len(), 0..3usize, 0..3usize, any::<bool>(), any::<bool>(), any::<u64>()).prop_map(
        move |(k, s, d, g, directed, letters, seed)| {
            let kind = TaskKind::ALL[k];
            let gdl = [GdlKind::EdgeList, GdlKind::AdjacencyTable, GdlKind::AdjacencyNl][g];
            let scheme = if letters { LabelScheme::RandomLetters } else { LabelScheme::IntegerId };
            let spec = GenSpec::new(Distribution::ALL[d], sizes[s], directed, seed);
            make_instance(kind, &spec, gdl, scheme).unwrap()
        },
    )
}

const SMALL: &[SizeClass] = &[SizeClass::Mini, SizeClass::Small];
const ALL_SIZES: &[SizeClass] = &SizeClass::ALL;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn replay_reproduces_answer(inst in any_instance(ALL_SIZES)) {
        prop_assert_eq!(replay(inst.kind, &inst.trace), Ok(inst.answer.clone()));
    }

    #[test]
    fn reference_is_self_accepted(inst in any_instance(ALL_SIZES)) {
        let output = format!(
            "Working through it, node 0 has [1, 2] nearby.\n### Answer: {}",
            inst.answer.render_text(&inst.labels)
        );
        let parsed = extract_answer(&output, inst.kind.shape(), &inst.labels);
        prop_assert!(judge(inst.kind, &inst.graph, &inst.query_args, &inst.answer, &parsed));
    }

    #[test]
    fn spans_partition_target_and_cover_labels(inst in any_instance(SMALL), seed in any::<u64>()) {
        let trace = inst.trace.render(&inst.labels).to_labeled();
        let (target, answer_start) = target_text(&trace, inst.answer.render(&inst.labels));
        let mut spans = mark_critical_spans(&target, &inst.labels, answer_start).unwrap();
        draw_mask(&mut spans, answer_start, 0.8, &mut ChaCha8Rng::seed_from_u64(seed));

        let mut cursor = 0;
        for s in &spans {
            prop_assert_eq!(s.start, cursor);
            prop_assert!(s.end > s.start);
            prop_assert!(s.start >= answer_start || s.end <= answer_start);
            cursor = s.end;
        }
        prop_assert_eq!(cursor, target.text.len());

        let critical: HashSet<(usize, usize)> =
            spans.iter().filter(|s| s.critical).map(|s| (s.start, s.end)).collect();
        let refs: HashSet<(usize, usize)> = target.nodes.iter().map(|r| (r.start, r.end)).collect();
        prop_assert_eq!(critical, refs);
        for s in &spans {
            prop_assert_eq!(s.supervised || s.start < answer_start, true);
            prop_assert!(!s.critical || s.supervised);
        }
    }

    #[test]
    fn letter_labels_never_escape_critical_spans(inst in any_instance(SMALL)) {
        prop_assume!(inst.scheme == LabelScheme::RandomLetters);
        let trace = inst.trace.render(&inst.labels).to_labeled();
        let (target, answer_start) = target_text(&trace, inst.answer.render(&inst.labels));
        let spans = mark_critical_spans(&target, &inst.labels, answer_start).unwrap();
        let critical: HashSet<usize> = spans.iter().filter(|s| s.critical).map(|s| s.start).collect();
        let text = target.text.as_bytes();
        for label in inst.labels.as_slice() {
            for (at, _) in target.text.match_indices(label.as_str()) {
                let before = at.checked_sub(1).map(|i| text[i].is_ascii_alphanumeric()).unwrap_or(false);
                let after = text.get(at + label.len()).is_some_and(|b| b.is_ascii_alphanumeric());
                if !before && !after {
                    prop_assert!(critical.contains(&at), "label {} at {} is not critical", label, at);
                }
            }
        }
    }

    #[test]
    fn raising_gamma_only_drops_supervision(inst in any_instance(SMALL), seed in any::<u64>(), a in 0.0..=1.0f64, b in 0.0..=1.0f64) {
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        let trace = inst.trace.render(&inst.labels).to_labeled();
        let (target, answer_start) = target_text(&trace, inst.answer.render(&inst.labels));
        let spans = mark_critical_spans(&target, &inst.labels, answer_start).unwrap();
        let mut low = spans.clone();
        let mut high = spans;
        draw_mask(&mut low, answer_start, lo, &mut ChaCha8Rng::seed_from_u64(seed));
        draw_mask(&mut high, answer_start, hi, &mut ChaCha8Rng::seed_from_u64(seed));
        for (l, h) in low.iter().zip(&high) {
            prop_assert!(!h.supervised || l.supervised);
        }
    }

    #[test]
    fn edge_list_text_round_trips(inst in any_instance(SMALL)) {
        let text = describe(&inst.graph, &inst.labels, GdlKind::EdgeList);
        let (g, labels) = parse_edge_list_labeled(&text).unwrap();
        prop_assert_eq!(labels.as_slice(), inst.labels.as_slice());
        prop_assert_eq!(g.is_directed(), inst.graph.is_directed());
        prop_assert_eq!(g.edges().collect::<Vec<_>>(), inst.graph.edges().collect::<Vec<_>>());
    }

    #[test]
    fn pagerank_rounds_are_distributions(inst in any_instance(ALL_SIZES)) {
        for round in pagerank_rounds(&inst.graph) {
            let sum: f64 = round.iter().sum();
            prop_assert!((sum - 1.0).abs() <= 1e-9, "sum {}", sum);
        }
    }

    #[test]
    fn generation_is_deterministic(k in 0..TaskKind::ALL.len(), seed in any::<u64>(), directed in any::<bool>()) {
        let kind = TaskKind::ALL[k];
        let spec = GenSpec::new(Distribution::Er, SizeClass::Small, directed, seed);
        let a = make_instance(kind, &spec, GdlKind::AdjacencyNl, LabelScheme::RandomLetters).unwrap();
        let b = make_instance(kind, &spec, GdlKind::AdjacencyNl, LabelScheme::RandomLetters).unwrap();
        prop_assert_eq!(&a.prompt_text, &b.prompt_text);
        prop_assert_eq!(&a.answer, &b.answer);
        prop_assert_eq!(a.trace.render(&a.labels).final_text, b.trace.render(&b.labels).final_text);
    }
}
