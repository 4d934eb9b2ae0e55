//! Typed reference answers and their text form.

use serde::{Deserialize, Serialize};

use crate::gdl::NodeLabels;
use crate::task::AnswerShape;
use crate::trace::LabeledText;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "tag", content = "value", rename_all = "snake_case")]
pub enum Answer {
    Bool(bool),
    Int(i64),
    Float(f64),
    Node(usize),
    NodeList(Vec<usize>),
    /// Always stored sorted ascending.
    NodeSet(Vec<usize>),
    EdgeList(Vec<(usize, usize)>),
}

impl Answer {
    pub fn node_set(mut nodes: Vec<usize>) -> Self {
        nodes.sort_unstable();
        nodes.dedup();
        Answer::NodeSet(nodes)
    }

    pub fn shape(&self) -> AnswerShape {
        match self {
            Answer::Bool(_) => AnswerShape::Bool,
            Answer::Int(_) => AnswerShape::Int,
            Answer::Float(_) => AnswerShape::Float,
            Answer::Node(_) => AnswerShape::Node,
            Answer::NodeList(_) => AnswerShape::NodeList,
            Answer::NodeSet(_) => AnswerShape::NodeSet,
            Answer::EdgeList(_) => AnswerShape::EdgeList,
        }
    }

    pub fn as_bool(&self) -> Option<bool> {
        match self {
            Answer::Bool(b) => Some(*b),
            _ => None,
        }
    }

    /// Renders the answer in the syntax the extractor reads back, tracking
    /// where each node label lands.
    pub fn render(&self, labels: &NodeLabels) -> LabeledText {
        let mut t = LabeledText::default();
        match self {
            Answer::Bool(b) => t.push_str(if *b { "yes" } else { "no" }),
            Answer::Int(x) => t.push_str(&x.to_string()),
            Answer::Float(x) => t.push_str(&format!("{x:.4}")),
            Answer::Node(u) => t.push_node(*u, labels),
            Answer::NodeList(nodes) | Answer::NodeSet(nodes) => {
                t.push_str("[");
                t.push_node_list(nodes, ", ", labels);
                t.push_str("]");
            }
            Answer::EdgeList(edges) => {
                t.push_str("[");
                for (i, &(u, v)) in edges.iter().enumerate() {
                    if i > 0 {
                        t.push_str(", ");
                    }
                    t.push_str("(");
                    t.push_node(u, labels);
                    t.push_str(", ");
                    t.push_node(v, labels);
                    t.push_str(")");
                }
                t.push_str("]");
            }
        }
        t
    }

    pub fn render_text(&self, labels: &NodeLabels) -> String {
        self.render(labels).text
    }
}
