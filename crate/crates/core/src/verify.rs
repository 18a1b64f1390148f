//! Exact gracefulness checks that itemize every violation they find.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::graph::{Edge, Graph, LabeledGraph, Labeling, VertexAddress};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Verdict {
    Graceful,
    AlphaGraceful,
    Fail,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Graceful => "GRACEFUL",
            Verdict::AlphaGraceful => "ALPHA_GRACEFUL",
            Verdict::Fail => "FAIL",
        })
    }
}

impl FromStr for Verdict {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "GRACEFUL" => Ok(Verdict::Graceful),
            "ALPHA_GRACEFUL" => Ok(Verdict::AlphaGraceful),
            "FAIL" => Ok(Verdict::Fail),
            other => Err(format!("unknown verdict `{other}`")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    UnlabeledVertex {
        vertex: VertexAddress,
    },
    DuplicateVertexLabel {
        first: VertexAddress,
        second: VertexAddress,
        label: u64,
    },
    VertexLabelOutOfRange {
        vertex: VertexAddress,
        label: u64,
    },
    DuplicateEdgeLabel {
        first: Edge,
        second: Edge,
        label: u64,
    },
    /// Edge label outside `[1, q]`.
    EdgeLabelOutOfRange {
        edge: Edge,
        label: u64,
    },
    MissingEdgeLabel {
        label: u64,
    },
    NonCrossingEdge {
        edge: Edge,
    },
    /// Vertex declared on neither side, or on both.
    SideMismatch {
        vertex: VertexAddress,
    },
    BoundaryViolation {
        max_low: u64,
        min_high: u64,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::UnlabeledVertex { vertex } => write!(f, "unlabeled vertex {vertex}"),
            Violation::DuplicateVertexLabel {
                first,
                second,
                label,
            } => write!(f, "duplicate vertex label {label} on {first} and {second}"),
            Violation::VertexLabelOutOfRange { vertex, label } => {
                write!(f, "vertex {vertex} label {label} out of range")
            }
            Violation::DuplicateEdgeLabel {
                first,
                second,
                label,
            } => write!(
                f,
                "duplicate edge label {label} on {} -- {} and {} -- {}",
                first.0, first.1, second.0, second.1
            ),
            Violation::EdgeLabelOutOfRange { edge, label } => {
                write!(f, "edge {} -- {} label {label} out of range", edge.0, edge.1)
            }
            Violation::MissingEdgeLabel { label } => write!(f, "missing edge label {label}"),
            Violation::NonCrossingEdge { edge } => {
                write!(f, "edge {} -- {} does not cross the bipartition", edge.0, edge.1)
            }
            Violation::SideMismatch { vertex } => {
                write!(f, "vertex {vertex} is not on exactly one side")
            }
            Violation::BoundaryViolation { max_low, min_high } => {
                write!(f, "boundary violation: max low {max_low} >= min high {min_high}")
            }
        }
    }
}

/// Verdict plus every violation found. `Fail` iff `violations` is nonempty.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub verdict: Verdict,
    pub q: u64,
    pub violations: Vec<Violation>,
}

impl Certificate {
    fn from_violations(q: u64, violations: Vec<Violation>, pass: Verdict) -> Self {
        let verdict = if violations.is_empty() {
            pass
        } else {
            Verdict::Fail
        };
        Self {
            verdict,
            q,
            violations,
        }
    }

    pub fn passed(&self) -> bool {
        self.verdict != Verdict::Fail
    }
}

impl fmt::Display for Certificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "verdict {} q {} violations {}",
            self.verdict,
            self.q,
            self.violations.len()
        )?;
        for v in &self.violations {
            writeln!(f, "  {v}")?;
        }
        Ok(())
    }
}

/// Checks gracefulness of an arbitrary, possibly partial or out-of-range,
/// labeling. `q` is the graph's edge count.
pub fn verify_labels(graph: &Graph, labels: &Labeling) -> Certificate {
    let q = graph.q() as u64;
    let mut violations = Vec::new();
    let aligned = labels.aligned(graph);

    // owner[label] = first vertex position carrying it
    let mut owner: Vec<Option<usize>> = vec![None; q as usize + 1];
    for (i, label) in aligned.iter().enumerate() {
        let vertex = graph.vertices()[i];
        match *label {
            None => violations.push(Violation::UnlabeledVertex { vertex }),
            Some(label) if label > q => {
                violations.push(Violation::VertexLabelOutOfRange { vertex, label })
            }
            Some(label) => match owner[label as usize] {
                Some(j) => violations.push(Violation::DuplicateVertexLabel {
                    first: graph.vertices()[j],
                    second: vertex,
                    label,
                }),
                None => owner[label as usize] = Some(i),
            },
        }
    }

    let mut edge_owner: Vec<Option<usize>> = vec![None; q as usize + 1];
    for (k, &(a, b)) in graph.edge_positions().iter().enumerate() {
        let (Some(fa), Some(fb)) = (aligned[a], aligned[b]) else {
            continue;
        };
        let label = fa.abs_diff(fb);
        let edge = graph.edges()[k];
        if label == 0 || label > q {
            violations.push(Violation::EdgeLabelOutOfRange { edge, label });
            continue;
        }
        match edge_owner[label as usize] {
            Some(j) => violations.push(Violation::DuplicateEdgeLabel {
                first: graph.edges()[j],
                second: edge,
                label,
            }),
            None => edge_owner[label as usize] = Some(k),
        }
    }
    for label in 1..=q {
        if edge_owner[label as usize].is_none() {
            violations.push(Violation::MissingEdgeLabel { label });
        }
    }
    Certificate::from_violations(q, violations, Verdict::Graceful)
}

pub fn verify_graceful(lg: &LabeledGraph) -> Certificate {
    verify_labels(lg.graph(), lg.labels())
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum VerifyError {
    #[error("vertex {0} declared on both sides of the bipartition")]
    OverlappingSides(VertexAddress),
    #[error("no bipartition declared")]
    Undeclared,
}

/// A declared bipartition: `low` must carry the smaller labels.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bipartition {
    low: HashSet<VertexAddress>,
    high: HashSet<VertexAddress>,
}

impl Bipartition {
    pub fn new(
        low: impl IntoIterator<Item = VertexAddress>,
        high: impl IntoIterator<Item = VertexAddress>,
    ) -> Result<Self, VerifyError> {
        let low: HashSet<_> = low.into_iter().collect();
        let high: HashSet<_> = high.into_iter().collect();
        if let Some(v) = low.intersection(&high).min() {
            return Err(VerifyError::OverlappingSides(*v));
        }
        if low.is_empty() && high.is_empty() {
            return Err(VerifyError::Undeclared);
        }
        Ok(Self { low, high })
    }

    pub fn is_low(&self, v: &VertexAddress) -> bool {
        self.low.contains(v)
    }

    pub fn is_high(&self, v: &VertexAddress) -> bool {
        self.high.contains(v)
    }
}

/// Checks for an α-labeling: graceful, every edge crosses `sides`, and every
/// low label is below every high label.
pub fn verify_alpha_labels(graph: &Graph, labels: &Labeling, sides: &Bipartition) -> Certificate {
    let base = verify_labels(graph, labels);
    let mut violations = base.violations;

    for v in graph.vertices() {
        if sides.is_low(v) == sides.is_high(v) {
            violations.push(Violation::SideMismatch { vertex: *v });
        }
    }
    for edge in graph.edges() {
        if sides.is_low(&edge.0) == sides.is_low(&edge.1)
            || sides.is_high(&edge.0) == sides.is_high(&edge.1)
        {
            violations.push(Violation::NonCrossingEdge { edge: *edge });
        }
    }
    let max_low = graph
        .vertices()
        .iter()
        .filter(|v| sides.is_low(v))
        .filter_map(|v| labels.get(v))
        .max();
    let min_high = graph
        .vertices()
        .iter()
        .filter(|v| sides.is_high(v))
        .filter_map(|v| labels.get(v))
        .min();
    if let (Some(max_low), Some(min_high)) = (max_low, min_high) {
        if max_low >= min_high {
            violations.push(Violation::BoundaryViolation { max_low, min_high });
        }
    }
    Certificate::from_violations(base.q, violations, Verdict::AlphaGraceful)
}

pub fn verify_alpha(lg: &LabeledGraph, sides: &Bipartition) -> Certificate {
    verify_alpha_labels(lg.graph(), lg.labels(), sides)
}

/// Replaces every label `f` by `q - f`.
pub fn complement_labeling(lg: &LabeledGraph) -> LabeledGraph {
    let q = lg.q();
    let labels = lg
        .graph()
        .vertices()
        .iter()
        .zip(lg.values())
        .map(|(v, &f)| (*v, q - f))
        .collect();
    LabeledGraph::new(lg.graph().clone(), labels)
        .expect("complement of an in-range total labeling stays in range")
}
