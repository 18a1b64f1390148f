//! Textual descriptors for base graphs and for plain search targets.
//!
//! Bases: `path:14`, `cycle:8`, `kmn:4,3`, `grid:2,3`, or a custom α-labeled
//! graph given as `g6:<graph6>:<labels>:<low>` or
//! `edges:<order>:<a-b,...>:<labels>:<low>`, where `<labels>` lists one label
//! per vertex and `<low>` lists the indices of the low-labeled side.
//!
//! Search targets take the same shapes without labels (`g6:<graph6>`,
//! `edges:<order>:<a-b,...>`); `cycle:n` accepts any `n >= 3` there.

use std::fmt;
use std::str::FromStr;

use petgraph::graph::UnGraph;
use thiserror::Error;

use crate::atlas::{
    base_complete_bipartite, base_cycle, base_grid, base_path, grid_edges, AlphaLabeledBase,
    AtlasError,
};
use crate::graph::{Graph, GraphError, VertexAddress};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DescriptorError {
    #[error("cannot parse descriptor `{0}`")]
    Syntax(String),
    #[error("invalid graph6 string `{0}`: {1}")]
    Graph6(String, &'static str),
    #[error("vertex index {index} out of range for order {order}")]
    VertexIndex { index: usize, order: usize },
    #[error(transparent)]
    Atlas(#[from] AtlasError),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Vertex count plus edges over `0..order`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Topology {
    pub order: usize,
    pub edges: Vec<(usize, usize)>,
}

impl Topology {
    pub fn path(n: usize) -> Self {
        Self {
            order: n,
            edges: (1..n).map(|k| (k - 1, k)).collect(),
        }
    }

    pub fn cycle(n: usize) -> Self {
        let mut t = Self::path(n);
        t.edges.push((n - 1, 0));
        t
    }

    pub fn complete_bipartite(m: usize, n: usize) -> Self {
        Self {
            order: m + n,
            edges: (0..m).flat_map(|i| (0..n).map(move |j| (i, m + j))).collect(),
        }
    }

    pub fn grid(m: usize, n: usize) -> Self {
        Self {
            order: m * n,
            edges: grid_edges(m, n),
        }
    }

    /// Vertex `k` becomes `-/-/U/k+1`.
    pub fn to_graph(&self) -> Result<Graph, DescriptorError> {
        let vs: Vec<VertexAddress> = (1..=self.order as u32).map(VertexAddress::u).collect();
        let mut es = Vec::with_capacity(self.edges.len());
        for &(a, b) in &self.edges {
            for index in [a, b] {
                if index >= self.order {
                    return Err(DescriptorError::VertexIndex {
                        index,
                        order: self.order,
                    });
                }
            }
            es.push((vs[a], vs[b]));
        }
        Ok(Graph::new(vs, es)?)
    }

    pub fn to_graph6(&self) -> String {
        let mut g = UnGraph::<(), ()>::with_capacity(self.order, self.edges.len());
        for _ in 0..self.order {
            g.add_node(());
        }
        for &(a, b) in &self.edges {
            g.add_edge((a as u32).into(), (b as u32).into(), ());
        }
        petgraph::graph6::get_graph6_representation(&g)
    }
}

/// Decodes graph6, rejecting input the decoder would choke on.
pub fn decode_graph6(code: &str) -> Result<Topology, DescriptorError> {
    let bad = |why| DescriptorError::Graph6(code.to_string(), why);
    let bytes = code.as_bytes();
    if bytes.is_empty() {
        return Err(bad("empty"));
    }
    if bytes.iter().any(|b| !(63..=126).contains(b)) {
        return Err(bad("character outside 63..=126"));
    }
    let (order, header) = if bytes[0] == 126 {
        if bytes.len() < 4 || bytes[1] == 126 {
            return Err(bad("unsupported order header"));
        }
        let n = bytes[1..4]
            .iter()
            .fold(0usize, |acc, &b| (acc << 6) | usize::from(b - 63));
        (n, 4)
    } else {
        (usize::from(bytes[0] - 63), 1)
    };
    let bits = order * order.saturating_sub(1) / 2;
    if bytes.len() - header != bits.div_ceil(6) {
        return Err(bad("length does not match order"));
    }
    let (n, edges) = petgraph::graph6::from_graph6_representation::<u32>(code.to_string());
    Ok(Topology {
        order: n,
        edges: edges
            .into_iter()
            .map(|(a, b)| (a as usize, b as usize))
            .collect(),
    })
}

fn parse_edges(s: &str) -> Result<Vec<(usize, usize)>, ()> {
    if s.is_empty() {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|pair| {
            let (a, b) = pair.split_once('-').ok_or(())?;
            Ok((a.parse().map_err(|_| ())?, b.parse().map_err(|_| ())?))
        })
        .collect()
}

fn parse_list<T: FromStr>(s: &str) -> Result<Vec<T>, ()> {
    if s.is_empty() {
        return Ok(Vec::new());
    }
    s.split(',').map(|x| x.parse().map_err(|_| ())).collect()
}

fn join<T: ToString>(xs: &[T]) -> String {
    xs.iter().map(T::to_string).collect::<Vec<_>>().join(",")
}

fn pair(s: &str) -> Result<(u32, u32), ()> {
    let (a, b) = s.split_once(',').ok_or(())?;
    Ok((a.parse().map_err(|_| ())?, b.parse().map_err(|_| ())?))
}

/// Graph part of a custom descriptor, kept verbatim for round-tripping.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum CustomGraph {
    Graph6(String),
    Edges {
        order: usize,
        edges: Vec<(usize, usize)>,
    },
}

impl CustomGraph {
    pub fn topology(&self) -> Result<Topology, DescriptorError> {
        match self {
            CustomGraph::Graph6(code) => decode_graph6(code),
            CustomGraph::Edges { order, edges } => Ok(Topology {
                order: *order,
                edges: edges.clone(),
            }),
        }
    }

    /// Splits `g6:<code>` / `edges:<order>:<list>` off the front, returning
    /// the remaining `:`-separated fields.
    fn split(s: &str) -> Option<(Self, Vec<&str>)> {
        let mut fields = s.split(':');
        match fields.next()? {
            "g6" => {
                let code = fields.next()?.to_string();
                Some((CustomGraph::Graph6(code), fields.collect()))
            }
            "edges" => {
                let order = fields.next()?.parse().ok()?;
                let edges = parse_edges(fields.next()?).ok()?;
                Some((CustomGraph::Edges { order, edges }, fields.collect()))
            }
            _ => None,
        }
    }
}

impl fmt::Display for CustomGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CustomGraph::Graph6(code) => write!(f, "g6:{code}"),
            CustomGraph::Edges { order, edges } => {
                let list: Vec<String> = edges.iter().map(|(a, b)| format!("{a}-{b}")).collect();
                write!(f, "edges:{order}:{}", list.join(","))
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum BaseDescriptor {
    Path(u32),
    Cycle(u32),
    CompleteBipartite(u32, u32),
    Grid(u32, u32),
    Custom {
        graph: CustomGraph,
        labels: Vec<u64>,
        low: Vec<usize>,
    },
}

impl BaseDescriptor {
    /// Builds the α-labeled base; custom bases must pass the α check.
    pub fn resolve(&self) -> Result<AlphaLabeledBase, DescriptorError> {
        Ok(match self {
            BaseDescriptor::Path(n) => base_path(*n)?,
            BaseDescriptor::Cycle(n) => base_cycle(*n)?,
            BaseDescriptor::CompleteBipartite(m, n) => base_complete_bipartite(*m, *n)?,
            BaseDescriptor::Grid(m, n) => base_grid(*m, *n)?,
            BaseDescriptor::Custom { graph, labels, low } => {
                let topo = graph.topology()?;
                if labels.len() != topo.order {
                    return Err(AtlasError::LabelCount {
                        vertices: topo.order,
                        labels: labels.len(),
                    }
                    .into());
                }
                let mut is_low = vec![false; topo.order];
                for &k in low {
                    *is_low.get_mut(k).ok_or(DescriptorError::VertexIndex {
                        index: k,
                        order: topo.order,
                    })? = true;
                }
                AlphaLabeledBase::from_indexed(labels, &is_low, &topo.edges)?
            }
        })
    }

    /// Short name for file names and tables.
    pub fn slug(&self) -> String {
        match self {
            BaseDescriptor::Custom { .. } => "custom".into(),
            other => other.to_string().replace([':', ','], "_"),
        }
    }
}

impl fmt::Display for BaseDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BaseDescriptor::Path(n) => write!(f, "path:{n}"),
            BaseDescriptor::Cycle(n) => write!(f, "cycle:{n}"),
            BaseDescriptor::CompleteBipartite(m, n) => write!(f, "kmn:{m},{n}"),
            BaseDescriptor::Grid(m, n) => write!(f, "grid:{m},{n}"),
            BaseDescriptor::Custom { graph, labels, low } => {
                write!(f, "{graph}:{}:{}", join(labels), join(low))
            }
        }
    }
}

impl FromStr for BaseDescriptor {
    type Err = DescriptorError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || DescriptorError::Syntax(s.to_string());
        if let Some((graph, rest)) = CustomGraph::split(s) {
            let [labels, low] = rest.as_slice() else {
                return Err(err());
            };
            return Ok(BaseDescriptor::Custom {
                graph,
                labels: parse_list(labels).map_err(|_| err())?,
                low: parse_list(low).map_err(|_| err())?,
            });
        }
        let (kind, args) = s.split_once(':').ok_or_else(err)?;
        match kind {
            "path" => args.parse().map(BaseDescriptor::Path).map_err(|_| err()),
            "cycle" => args.parse().map(BaseDescriptor::Cycle).map_err(|_| err()),
            "kmn" => pair(args)
                .map(|(m, n)| BaseDescriptor::CompleteBipartite(m, n))
                .map_err(|_| err()),
            "grid" => pair(args)
                .map(|(m, n)| BaseDescriptor::Grid(m, n))
                .map_err(|_| err()),
            _ => Err(err()),
        }
    }
}

/// An unlabeled graph to search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GraphDescriptor {
    Path(usize),
    Cycle(usize),
    CompleteBipartite(usize, usize),
    Grid(usize, usize),
    Custom(CustomGraph),
}

impl GraphDescriptor {
    pub fn topology(&self) -> Result<Topology, DescriptorError> {
        Ok(match self {
            GraphDescriptor::Path(n) => Topology::path(*n),
            GraphDescriptor::Cycle(n) => Topology::cycle(*n),
            GraphDescriptor::CompleteBipartite(m, n) => Topology::complete_bipartite(*m, *n),
            GraphDescriptor::Grid(m, n) => Topology::grid(*m, *n),
            GraphDescriptor::Custom(g) => g.topology()?,
        })
    }
}

impl FromStr for GraphDescriptor {
    type Err = DescriptorError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || DescriptorError::Syntax(s.to_string());
        if let Some((graph, rest)) = CustomGraph::split(s) {
            return if rest.is_empty() {
                Ok(GraphDescriptor::Custom(graph))
            } else {
                Err(err())
            };
        }
        let (kind, args) = s.split_once(':').ok_or_else(err)?;
        let positive = |x: usize| if x == 0 { Err(err()) } else { Ok(x) };
        let both = |(m, n): (u32, u32)| Ok((positive(m as usize)?, positive(n as usize)?));
        match kind {
            "path" => positive(args.parse().map_err(|_| err())?).map(GraphDescriptor::Path),
            "cycle" => match args.parse() {
                Ok(n) if n >= 3 => Ok(GraphDescriptor::Cycle(n)),
                _ => Err(err()),
            },
            "kmn" => both(pair(args).map_err(|_| err())?)
                .map(|(m, n)| GraphDescriptor::CompleteBipartite(m, n)),
            "grid" => both(pair(args).map_err(|_| err())?).map(|(m, n)| GraphDescriptor::Grid(m, n)),
            _ => Err(err()),
        }
    }
}
