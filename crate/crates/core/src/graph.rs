//! Finite simple undirected graphs keyed by structured vertex addresses.
//!
//! Every vertex of a compound graph is named by where it sits: which branch,
//! which copy of the base graph, which side of the base's bipartition, and its
//! rank on that side. Labeling formulas are written directly against these
//! addresses.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

/// Side of the base bipartition a vertex belongs to.
///
/// `U` is the low-labeled side, `V` the high-labeled side. `Center` marks the
/// hub vertex of open stars and one-point unions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    U,
    V,
    Center,
}

impl Side {
    pub fn as_char(self) -> char {
        match self {
            Side::U => 'U',
            Side::V => 'V',
            Side::Center => 'C',
        }
    }
}

/// Structured vertex name: `(branch, copy, side, index)`.
///
/// Ordering is lexicographic in that field order with absent components
/// sorting first.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexAddress {
    pub branch: Option<u32>,
    pub copy: Option<u32>,
    pub side: Side,
    pub index: u32,
}

impl VertexAddress {
    pub fn u(index: u32) -> Self {
        Self {
            branch: None,
            copy: None,
            side: Side::U,
            index,
        }
    }

    pub fn v(index: u32) -> Self {
        Self {
            branch: None,
            copy: None,
            side: Side::V,
            index,
        }
    }

    pub fn center() -> Self {
        Self {
            branch: None,
            copy: None,
            side: Side::Center,
            index: 1,
        }
    }

    pub fn in_copy(self, copy: u32) -> Self {
        Self {
            copy: Some(copy),
            ..self
        }
    }

    pub fn in_branch(self, branch: u32) -> Self {
        Self {
            branch: Some(branch),
            ..self
        }
    }

    /// The address with branch and copy stripped, i.e. the base-graph vertex
    /// this one is a copy of.
    pub fn base(self) -> Self {
        Self {
            branch: None,
            copy: None,
            ..self
        }
    }

    fn check(&self) -> Result<(), GraphError> {
        let ok = match self.side {
            Side::Center => self.index == 1 && self.branch.is_none() && self.copy.is_none(),
            Side::U | Side::V => self.index >= 1,
        };
        if ok {
            Ok(())
        } else {
            Err(GraphError::MalformedAddress(*self))
        }
    }
}

impl fmt::Display for VertexAddress {
    /// Serializes as `branch/copy/side/index`, with `-` for absent parts.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let part = |x: Option<u32>| x.map_or_else(|| "-".to_string(), |v| v.to_string());
        write!(
            f,
            "{}/{}/{}/{}",
            part(self.branch),
            part(self.copy),
            self.side.as_char(),
            self.index
        )
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("invalid vertex address `{0}`")]
pub struct AddressParseError(pub String);

impl FromStr for VertexAddress {
    type Err = AddressParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || AddressParseError(s.to_string());
        let parts: Vec<&str> = s.split('/').collect();
        let [branch, copy, side, index] = parts.as_slice() else {
            return Err(err());
        };
        let opt = |p: &str| -> Result<Option<u32>, AddressParseError> {
            if p == "-" {
                Ok(None)
            } else {
                p.parse().map(Some).map_err(|_| err())
            }
        };
        let side = match *side {
            "U" => Side::U,
            "V" => Side::V,
            "C" => Side::Center,
            _ => return Err(err()),
        };
        let addr = VertexAddress {
            branch: opt(branch)?,
            copy: opt(copy)?,
            side,
            index: index.parse().map_err(|_| err())?,
        };
        addr.check().map_err(|_| err())?;
        Ok(addr)
    }
}

pub type Edge = (VertexAddress, VertexAddress);

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("malformed vertex address {0}")]
    MalformedAddress(VertexAddress),
    #[error("duplicate vertex {0}")]
    DuplicateVertex(VertexAddress),
    #[error("self-loop at {0}")]
    SelfLoop(VertexAddress),
    #[error("duplicate edge {0} -- {1}")]
    DuplicateEdge(VertexAddress, VertexAddress),
    #[error("edge endpoint {0} is not a vertex of the graph")]
    DanglingEndpoint(VertexAddress),
    #[error("vertex {0} has no label")]
    Unlabeled(VertexAddress),
    #[error("label {label} of vertex {vertex} exceeds q = {q}")]
    LabelOutOfRange {
        vertex: VertexAddress,
        label: u64,
        q: u64,
    },
}

/// A validated finite simple undirected graph.
///
/// Vertex and edge order are kept exactly as given.
#[derive(Clone, Debug)]
pub struct Graph {
    vertices: Vec<VertexAddress>,
    edges: Vec<Edge>,
    positions: HashMap<VertexAddress, usize>,
    edge_positions: Vec<(usize, usize)>,
}

impl PartialEq for Graph {
    fn eq(&self, other: &Self) -> bool {
        self.vertices == other.vertices && self.edges == other.edges
    }
}

impl Eq for Graph {}

impl Graph {
    pub fn new(vertices: Vec<VertexAddress>, edges: Vec<Edge>) -> Result<Self, GraphError> {
        let mut positions = HashMap::with_capacity(vertices.len());
        for (i, v) in vertices.iter().enumerate() {
            v.check()?;
            if positions.insert(*v, i).is_some() {
                return Err(GraphError::DuplicateVertex(*v));
            }
        }
        let mut seen = HashSet::with_capacity(edges.len());
        let mut edge_positions = Vec::with_capacity(edges.len());
        for &(a, b) in &edges {
            if a == b {
                return Err(GraphError::SelfLoop(a));
            }
            let ia = *positions.get(&a).ok_or(GraphError::DanglingEndpoint(a))?;
            let ib = *positions.get(&b).ok_or(GraphError::DanglingEndpoint(b))?;
            if !seen.insert((ia.min(ib), ia.max(ib))) {
                return Err(GraphError::DuplicateEdge(a, b));
            }
            edge_positions.push((ia, ib));
        }
        Ok(Self {
            vertices,
            edges,
            positions,
            edge_positions,
        })
    }

    /// Vertex count `p`.
    pub fn p(&self) -> usize {
        self.vertices.len()
    }

    /// Edge count `q`.
    pub fn q(&self) -> usize {
        self.edges.len()
    }

    pub fn vertices(&self) -> &[VertexAddress] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// Edges as pairs of positions into [`Graph::vertices`].
    pub fn edge_positions(&self) -> &[(usize, usize)] {
        &self.edge_positions
    }

    pub fn position(&self, v: &VertexAddress) -> Option<usize> {
        self.positions.get(v).copied()
    }

    pub fn contains(&self, v: &VertexAddress) -> bool {
        self.positions.contains_key(v)
    }

    /// Adjacency lists by vertex position.
    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.p()];
        for &(a, b) in &self.edge_positions {
            adj[a].push(b);
            adj[b].push(a);
        }
        adj
    }
}

/// A vertex labeling: address to nonnegative integer.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Labeling(HashMap<VertexAddress, u64>);

impl Labeling {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, v: &VertexAddress) -> Option<u64> {
        self.0.get(v).copied()
    }

    pub fn insert(&mut self, v: VertexAddress, label: u64) -> Option<u64> {
        self.0.insert(v, label)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&VertexAddress, &u64)> {
        self.0.iter()
    }

    /// Labels in the graph's vertex order; `None` where a vertex is unlabeled.
    pub fn aligned(&self, graph: &Graph) -> Vec<Option<u64>> {
        graph.vertices().iter().map(|v| self.get(v)).collect()
    }
}

impl FromIterator<(VertexAddress, u64)> for Labeling {
    fn from_iter<I: IntoIterator<Item = (VertexAddress, u64)>>(iter: I) -> Self {
        Self(iter.into_iter().collect())
    }
}

/// Induced edge labels `|f(a) - f(b)|`, one per edge in edge order.
pub fn induced_edge_labels(graph: &Graph, labels: &Labeling) -> Result<Vec<u64>, GraphError> {
    graph
        .edges()
        .iter()
        .map(|(a, b)| {
            let fa = labels.get(a).ok_or(GraphError::Unlabeled(*a))?;
            let fb = labels.get(b).ok_or(GraphError::Unlabeled(*b))?;
            Ok(fa.abs_diff(fb))
        })
        .collect()
}

/// A graph with a total labeling into `[0, q]`, `q` being its edge count.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabeledGraph {
    graph: Graph,
    labels: Labeling,
    values: Vec<u64>,
    q: u64,
}

impl LabeledGraph {
    pub fn new(graph: Graph, labels: Labeling) -> Result<Self, GraphError> {
        let q = graph.q() as u64;
        let mut values = Vec::with_capacity(graph.p());
        for v in graph.vertices() {
            let label = labels.get(v).ok_or(GraphError::Unlabeled(*v))?;
            if label > q {
                return Err(GraphError::LabelOutOfRange {
                    vertex: *v,
                    label,
                    q,
                });
            }
            values.push(label);
        }
        // Drop entries for addresses outside the graph so equality is structural.
        let labels = graph
            .vertices()
            .iter()
            .copied()
            .zip(values.iter().copied())
            .collect();
        Ok(Self {
            graph,
            labels,
            values,
            q,
        })
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn labels(&self) -> &Labeling {
        &self.labels
    }

    /// Labels in vertex order.
    pub fn values(&self) -> &[u64] {
        &self.values
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn label(&self, v: &VertexAddress) -> Option<u64> {
        self.graph.position(v).map(|i| self.values[i])
    }

    pub fn edge_labels(&self) -> Vec<u64> {
        self.graph
            .edge_positions()
            .iter()
            .map(|&(a, b)| self.values[a].abs_diff(self.values[b]))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path(n: u32) -> Graph {
        let vs: Vec<_> = (1..=n).map(VertexAddress::u).collect();
        let es = vs.windows(2).map(|w| (w[0], w[1])).collect();
        Graph::new(vs, es).unwrap()
    }

    fn labeled(g: Graph, labels: &[u64]) -> LabeledGraph {
        let l = g.vertices().iter().copied().zip(labels.iter().copied()).collect();
        LabeledGraph::new(g, l).unwrap()
    }

    #[test]
    fn single_edge() {
        let a = VertexAddress::u(1);
        let b = VertexAddress::v(1);
        let g = Graph::new(vec![a, b], vec![(a, b)]).unwrap();
        assert_eq!((g.p(), g.q()), (2, 1));
        assert_eq!(labeled(g, &[0, 1]).edge_labels(), vec![1]);
    }

    #[test]
    fn path_on_four() {
        let g = path(4);
        assert_eq!(g.q(), 3);
        assert_eq!(labeled(g, &[0, 3, 1, 2]).edge_labels(), vec![3, 2, 1]);
    }

    #[test]
    fn cycle_on_four_edge_labels() {
        let vs: Vec<_> = (1..=4).map(VertexAddress::u).collect();
        let es = (0..4).map(|i| (vs[i], vs[(i + 1) % 4])).collect();
        let g = Graph::new(vs, es).unwrap();
        assert_eq!(labeled(g, &[0, 4, 2, 3]).edge_labels(), vec![4, 2, 1, 3]);
    }

    #[test]
    fn rejects_bad_input() {
        let a = VertexAddress::u(1);
        let b = VertexAddress::u(2);
        let z = VertexAddress::v(9);
        assert_eq!(Graph::new(vec![a], vec![(a, a)]), Err(GraphError::SelfLoop(a)));
        assert_eq!(
            Graph::new(vec![a, a], vec![]),
            Err(GraphError::DuplicateVertex(a))
        );
        assert_eq!(
            Graph::new(vec![a, b], vec![(a, b), (b, a)]),
            Err(GraphError::DuplicateEdge(b, a))
        );
        assert_eq!(
            Graph::new(vec![a, b], vec![(a, z)]),
            Err(GraphError::DanglingEndpoint(z))
        );
        let bad_center = VertexAddress {
            index: 2,
            ..VertexAddress::center()
        };
        assert_eq!(
            Graph::new(vec![bad_center], vec![]),
            Err(GraphError::MalformedAddress(bad_center))
        );
    }

    #[test]
    fn unlabeled_vertex_reported() {
        let g = path(3);
        let mut l = Labeling::new();
        l.insert(VertexAddress::u(1), 0);
        l.insert(VertexAddress::u(2), 2);
        assert_eq!(
            induced_edge_labels(&g, &l),
            Err(GraphError::Unlabeled(VertexAddress::u(3)))
        );
        assert!(matches!(
            LabeledGraph::new(g, l),
            Err(GraphError::Unlabeled(_))
        ));
    }

    #[test]
    fn label_above_q_rejected() {
        let g = path(2);
        let l = [(VertexAddress::u(1), 0), (VertexAddress::u(2), 2)]
            .into_iter()
            .collect();
        assert!(matches!(
            LabeledGraph::new(g, l),
            Err(GraphError::LabelOutOfRange { label: 2, q: 1, .. })
        ));
    }

    #[test]
    fn address_text_form() {
        let a = VertexAddress::v(3).in_copy(2).in_branch(1);
        assert_eq!(a.to_string(), "1/2/V/3");
        assert_eq!("1/2/V/3".parse::<VertexAddress>().unwrap(), a);
        assert_eq!(VertexAddress::center().to_string(), "-/-/C/1");
        assert!("-/-/C/2".parse::<VertexAddress>().is_err());
        assert!("-/-/U/0".parse::<VertexAddress>().is_err());
        assert!("1/2/X/3".parse::<VertexAddress>().is_err());
        assert!("1/2/U".parse::<VertexAddress>().is_err());
    }

    #[test]
    fn construction_is_deterministic() {
        assert_eq!(path(6), path(6));
        assert_eq!(path(6).edges(), path(6).edges());
    }
}
