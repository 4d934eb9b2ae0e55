//! Supervision masks over trace text.
//!
//! The target text is the rendered trace followed by the answer line. It is
//! cut into spans: every node-label occurrence is its own critical span and
//! the remaining text is cut into words, each carrying its trailing
//! whitespace. Critical spans and spans in the answer section are always
//! supervised; any other span is supervised with probability `1 - gamma`.
//!
//! Each span gets exactly one uniform draw `x` and is supervised when
//! `x >= gamma`, so raising `gamma` under a fixed seed only ever removes
//! spans from the supervised set.

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::factory::TaskInstance;
use crate::gdl::NodeLabels;
use crate::trace::LabeledText;
use crate::verifier::ANSWER_MARKER;

pub const DEFAULT_GAMMA: f64 = 0.8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Span {
    pub start: usize,
    pub end: usize,
    pub critical: bool,
    pub supervised: bool,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MaskError {
    #[error("label offsets {start}..{end} are out of order or out of bounds")]
    BadOffsets { start: usize, end: usize },
    #[error("text at {start}..{end} is not the label of node {node}")]
    LabelMismatch { node: usize, start: usize, end: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub struct MaskedSample {
    pub prompt_text: String,
    pub target_text: String,
    /// Byte offset where the answer section begins.
    pub answer_start: usize,
    pub spans: Vec<Span>,
    pub gamma: f64,
}

impl MaskedSample {
    pub fn critical_spans(&self) -> Vec<[usize; 2]> {
        self.spans.iter().filter(|s| s.critical).map(|s| [s.start, s.end]).collect()
    }

    pub fn supervised_spans(&self) -> Vec<[usize; 2]> {
        self.spans.iter().filter(|s| s.supervised).map(|s| [s.start, s.end]).collect()
    }
}

/// Trace text, a line break, then `### Answer: <answer>`. Returns the
/// combined labeled text and the offset of the answer section.
pub fn target_text(trace: &LabeledText, answer: LabeledText) -> (LabeledText, usize) {
    let mut target = trace.clone();
    if !target.text.is_empty() {
        target.push_str("\n");
    }
    let answer_start = target.text.len();
    target.push_str(ANSWER_MARKER);
    target.push_str(" ");
    target.append(answer);
    (target, answer_start)
}

fn push_words(spans: &mut Vec<Span>, text: &str, from: usize, to: usize) {
    let bytes = text.as_bytes();
    let mut start = from;
    while start < to {
        let mut end = start;
        while end < to && !bytes[end].is_ascii_whitespace() {
            end += 1;
        }
        while end < to && bytes[end].is_ascii_whitespace() {
            end += 1;
        }
        spans.push(Span { start, end, critical: false, supervised: false });
        start = end;
    }
}

/// Partitions `text` into critical label spans and word spans. `boundary`
/// is a position no span may straddle (the start of the answer section).
pub fn mark_critical_spans(text: &LabeledText, labels: &NodeLabels, boundary: usize) -> Result<Vec<Span>, MaskError> {
    let mut spans = Vec::new();
    let mut cursor = 0;
    let len = text.text.len();
    for r in &text.nodes {
        if r.start < cursor || r.end > len || r.start >= r.end {
            return Err(MaskError::BadOffsets { start: r.start, end: r.end });
        }
        if text.text.get(r.start..r.end) != Some(labels.get(r.node)) {
            return Err(MaskError::LabelMismatch { node: r.node, start: r.start, end: r.end });
        }
        gap(&mut spans, &text.text, cursor, r.start, boundary);
        spans.push(Span { start: r.start, end: r.end, critical: true, supervised: true });
        cursor = r.end;
    }
    gap(&mut spans, &text.text, cursor, len, boundary);
    Ok(spans)
}

fn gap(spans: &mut Vec<Span>, text: &str, from: usize, to: usize, boundary: usize) {
    if from < boundary && boundary < to {
        push_words(spans, text, from, boundary);
        push_words(spans, text, boundary, to);
    } else {
        push_words(spans, text, from, to);
    }
}

/// Sets supervision bits with one uniform draw per span, in span order.
pub fn draw_mask(spans: &mut [Span], answer_start: usize, gamma: f64, rng: &mut impl Rng) {
    assert!((0.0..=1.0).contains(&gamma), "gamma must lie in [0, 1]");
    for span in spans.iter_mut() {
        let x: f64 = rng.gen();
        span.supervised = span.critical || span.start >= answer_start || x >= gamma;
    }
}

pub fn emit_masked_sample(instance: &TaskInstance, gamma: f64, rng: &mut impl Rng) -> Result<MaskedSample, MaskError> {
    let trace = instance.trace.render(&instance.labels).to_labeled();
    let (target, answer_start) = target_text(&trace, instance.answer.render(&instance.labels));
    let mut spans = mark_critical_spans(&target, &instance.labels, answer_start)?;
    draw_mask(&mut spans, answer_start, gamma, rng);
    Ok(MaskedSample { prompt_text: instance.prompt_text.clone(), target_text: target.text, answer_start, spans, gamma })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::trace::Step;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn visit3() -> (LabeledText, NodeLabels) {
        let labels = NodeLabels::integer(4);
        (Step::Visit { node: 3 }.render(&labels), labels)
    }

    fn pieces(text: &str, spans: &[Span]) -> Vec<(String, bool)> {
        spans.iter().map(|s| (text[s.start..s.end].to_string(), s.critical)).collect()
    }

    #[test]
    fn visit_sentence_spans() {
        let (t, labels) = visit3();
        let spans = mark_critical_spans(&t, &labels, t.text.len()).unwrap();
        assert_eq!(
            pieces(&t.text, &spans),
            vec![("Visit ".into(), false), ("node ".into(), false), ("3".into(), true), (".".into(), false)]
        );
    }

    #[test]
    fn no_labels_no_critical_spans() {
        let t = LabeledText { text: "No cycle found.".into(), nodes: vec![] };
        let spans = mark_critical_spans(&t, &NodeLabels::integer(1), t.text.len()).unwrap();
        assert!(spans.iter().all(|s| !s.critical));
        assert_eq!(spans.len(), 3);
    }

    #[test]
    fn wrong_offsets_are_reported() {
        let (mut t, labels) = visit3();
        t.nodes[0].node = 2;
        assert!(matches!(mark_critical_spans(&t, &labels, 0), Err(MaskError::LabelMismatch { .. })));
    }

    #[test]
    fn degenerate_gammas() {
        let (t, labels) = visit3();
        let (target, answer_start) = target_text(&t, crate::answer::Answer::Int(4).render(&labels));
        let mut spans = mark_critical_spans(&target, &labels, answer_start).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        draw_mask(&mut spans, answer_start, 0.0, &mut rng);
        assert!(spans.iter().all(|s| s.supervised));
        draw_mask(&mut spans, answer_start, 1.0, &mut rng);
        assert!(spans.iter().all(|s| s.supervised == (s.critical || s.start >= answer_start)));
        assert_eq!(&target.text[answer_start..], "### Answer: 4");
    }
}
