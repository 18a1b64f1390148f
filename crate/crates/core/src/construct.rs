//! Topology of the five compound families built from copies of a base.
//!
//! Copy `l` of base vertex `U_i` is addressed `-/l/U/i`; in a one-point union
//! the branch is set too (`s/l/U/i`). The hub of an open star or one-point
//! union is the `CENTER` vertex. The central copy of the star of a graph is
//! copy `0`.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::atlas::AlphaLabeledBase;
use crate::graph::{Edge, Graph, GraphError, Side, VertexAddress};
use crate::labelers;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    PathUnion,
    OpenStar,
    OnePointUnionPath,
    CycleOf,
    StarOf,
}

impl Family {
    pub const ALL: [Family; 5] = [
        Family::PathUnion,
        Family::OpenStar,
        Family::OnePointUnionPath,
        Family::CycleOf,
        Family::StarOf,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Family::PathUnion => "PATH_UNION",
            Family::OpenStar => "OPEN_STAR",
            Family::OnePointUnionPath => "ONE_POINT_UNION_PATH",
            Family::CycleOf => "CYCLE_OF",
            Family::StarOf => "STAR_OF",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Family {
    type Err = ConstructionError;

    /// Accepts `PATH_UNION` as well as `path-union`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let normalized = s.trim().to_ascii_uppercase().replace('-', "_");
        Family::ALL
            .into_iter()
            .find(|f| f.as_str() == normalized)
            .ok_or_else(|| ConstructionError::UnknownFamily(s.to_string()))
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConstructionError {
    #[error("unknown family `{0}`")]
    UnknownFamily(String),
    #[error("{family} requires parameter {param}")]
    MissingParameter { family: Family, param: char },
    #[error("{family} does not take parameter {param}")]
    UnexpectedParameter { family: Family, param: char },
    #[error("parameter {param} must be positive")]
    NonPositive { param: char },
    #[error("cycle of graphs needs an even number of copies t >= 2, got {0}")]
    OddCycle(u32),
    #[error("star of a graph needs a base with at least 2 vertices")]
    BaseTooSmall,
    #[error("{0} copies requested, too many")]
    TooLarge(u64),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("cycle link calibration failed: {0}")]
    Calibration(String),
    #[error("no spoke realizes edge label {label} for outer copy {copy}")]
    UnmatchedSpoke { copy: u32, label: u64 },
}

/// Family tag plus the copy-count parameters of one compound instance.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ConstructionSpec {
    pub family: Family,
    pub t: Option<u32>,
    pub n: Option<u32>,
}

impl ConstructionSpec {
    pub fn path_union(n: u32) -> Self {
        Self {
            family: Family::PathUnion,
            t: None,
            n: Some(n),
        }
    }

    pub fn open_star(t: u32) -> Self {
        Self {
            family: Family::OpenStar,
            t: Some(t),
            n: None,
        }
    }

    pub fn one_point_union_path(t: u32, n: u32) -> Self {
        Self {
            family: Family::OnePointUnionPath,
            t: Some(t),
            n: Some(n),
        }
    }

    pub fn cycle_of(t: u32) -> Self {
        Self {
            family: Family::CycleOf,
            t: Some(t),
            n: None,
        }
    }

    pub fn star_of() -> Self {
        Self {
            family: Family::StarOf,
            t: None,
            n: None,
        }
    }

    pub fn validate(&self) -> Result<(), ConstructionError> {
        let family = self.family;
        let need = |param: char, value: Option<u32>| match value {
            None => Err(ConstructionError::MissingParameter { family, param }),
            Some(0) => Err(ConstructionError::NonPositive { param }),
            Some(_) => Ok(()),
        };
        let forbid = |param: char, value: Option<u32>| match value {
            Some(_) => Err(ConstructionError::UnexpectedParameter { family, param }),
            None => Ok(()),
        };
        match family {
            Family::PathUnion => {
                forbid('t', self.t)?;
                need('n', self.n)
            }
            Family::OpenStar => {
                need('t', self.t)?;
                forbid('n', self.n)
            }
            Family::OnePointUnionPath => {
                need('t', self.t)?;
                need('n', self.n)
            }
            Family::CycleOf => {
                forbid('n', self.n)?;
                match self.t {
                    None => Err(ConstructionError::MissingParameter { family, param: 't' }),
                    Some(t) if t < 2 || t % 2 == 1 => Err(ConstructionError::OddCycle(t)),
                    Some(_) => Ok(()),
                }
            }
            Family::StarOf => {
                forbid('t', self.t)?;
                forbid('n', self.n)
            }
        }
    }
}

impl fmt::Display for ConstructionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.family)?;
        if let Some(t) = self.t {
            write!(f, " t={t}")?;
        }
        if let Some(n) = self.n {
            write!(f, " n={n}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ConnectorRole {
    /// Joins consecutive copies of a path union.
    IntraBranch,
    /// Joins a hub (center vertex or central copy) to an outer copy.
    Spoke,
    /// Joins consecutive copies around a cycle of graphs.
    CycleLink,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Connector {
    pub edge: Edge,
    pub role: ConnectorRole,
}

/// A compound graph plus the bookkeeping needed to label and diagnose it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Compound {
    pub graph: Graph,
    pub spec: ConstructionSpec,
    pub base: AlphaLabeledBase,
    pub connectors: Vec<Connector>,
}

impl Compound {
    /// Number of base copies.
    pub fn copies(&self) -> usize {
        let p0 = self.base.p0();
        let hub = usize::from(matches!(
            self.spec.family,
            Family::OpenStar | Family::OnePointUnionPath
        ));
        (self.graph.p() - hub) / p0
    }

    pub fn is_connector(&self, edge: &Edge) -> bool {
        self.connectors.iter().any(|c| c.edge == *edge)
    }
}

/// Which vertex of a side a link uses: lowest or highest labeled.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum End {
    First,
    Last,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct LinkEnd {
    pub side: Side,
    pub end: End,
}

impl LinkEnd {
    pub const U_FIRST: LinkEnd = LinkEnd {
        side: Side::U,
        end: End::First,
    };
    pub const U_LAST: LinkEnd = LinkEnd {
        side: Side::U,
        end: End::Last,
    };
    pub const V_FIRST: LinkEnd = LinkEnd {
        side: Side::V,
        end: End::First,
    };
    pub const V_LAST: LinkEnd = LinkEnd {
        side: Side::V,
        end: End::Last,
    };

    /// Base address this end refers to.
    pub fn resolve(self, base: &AlphaLabeledBase) -> VertexAddress {
        let (side, len) = match self.side {
            Side::V => (base.v_side(), base.r()),
            _ => (base.u_side(), base.m()),
        };
        match self.end {
            End::First => side[0],
            End::Last => side[len - 1],
        }
    }
}

impl fmt::Display for LinkEnd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let side = self.side.as_char().to_ascii_lowercase();
        match (self.side, self.end) {
            (_, End::First) => write!(f, "{side}_1"),
            (Side::U, End::Last) => write!(f, "u_m"),
            (_, End::Last) => write!(f, "{side}_r"),
        }
    }
}

/// Link endpoints of a cycle of graphs. Ascending links in the first half
/// always join `v_{l,1}` to `u_{l+1,1}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct CycleLinks {
    /// Copy `t/2` to copy `t/2 + 1`.
    pub midpoint: (LinkEnd, LinkEnd),
    /// Copy `l` to copy `l + 1` for `l` in `[t/2 + 1, t - 1]`.
    pub descending: (LinkEnd, LinkEnd),
    /// Copy `t` to copy `1`.
    pub closing: (LinkEnd, LinkEnd),
}

impl fmt::Display for CycleLinks {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "midpoint {}-{}, descending {}-{}, closing {}-{}",
            self.midpoint.0,
            self.midpoint.1,
            self.descending.0,
            self.descending.1,
            self.closing.0,
            self.closing.1
        )
    }
}

struct Builder<'b> {
    base: &'b AlphaLabeledBase,
    vertices: Vec<VertexAddress>,
    edges: Vec<Edge>,
    connectors: Vec<Connector>,
}

impl<'b> Builder<'b> {
    fn new(base: &'b AlphaLabeledBase, copies: u64) -> Result<Self, ConstructionError> {
        // keep vertex counts well inside u32 addressing
        if copies.saturating_mul(base.p0() as u64) > 50_000_000 {
            return Err(ConstructionError::TooLarge(copies));
        }
        Ok(Self {
            base,
            vertices: Vec::new(),
            edges: Vec::new(),
            connectors: Vec::new(),
        })
    }

    fn add_copy(&mut self, branch: Option<u32>, copy: u32) {
        let place = |v: &VertexAddress| VertexAddress {
            branch,
            ..v.in_copy(copy)
        };
        self.vertices
            .extend(self.base.graph().vertices().iter().map(place));
        self.edges.extend(
            self.base
                .graph()
                .edges()
                .iter()
                .map(|(a, b)| (place(a), place(b))),
        );
    }

    fn connect(&mut self, a: VertexAddress, b: VertexAddress, role: ConnectorRole) {
        self.edges.push((a, b));
        self.connectors.push(Connector { edge: (a, b), role });
    }

    fn finish(self, spec: ConstructionSpec) -> Result<Compound, ConstructionError> {
        Ok(Compound {
            graph: Graph::new(self.vertices, self.edges)?,
            spec,
            base: self.base.clone(),
            connectors: self.connectors,
        })
    }
}

fn u1(base: &AlphaLabeledBase) -> VertexAddress {
    base.u_side()[0]
}

fn v1(base: &AlphaLabeledBase) -> VertexAddress {
    base.v_side()[0]
}

fn vr(base: &AlphaLabeledBase) -> VertexAddress {
    base.v_side()[base.r() - 1]
}

/// `n` copies chained by `v_{l,1} -- u_{l+1,1}`.
pub fn build_path_union(base: &AlphaLabeledBase, n: u32) -> Result<Compound, ConstructionError> {
    let spec = ConstructionSpec::path_union(n);
    spec.validate()?;
    let mut b = Builder::new(base, u64::from(n))?;
    for l in 1..=n {
        b.add_copy(None, l);
    }
    for l in 1..n {
        b.connect(v1(base).in_copy(l), u1(base).in_copy(l + 1), ConnectorRole::IntraBranch);
    }
    b.finish(spec)
}

/// A center joined to `v_{l,r}` of each of `t` copies.
pub fn build_open_star(base: &AlphaLabeledBase, t: u32) -> Result<Compound, ConstructionError> {
    let spec = ConstructionSpec::open_star(t);
    spec.validate()?;
    let mut b = Builder::new(base, u64::from(t))?;
    b.vertices.push(VertexAddress::center());
    for l in 1..=t {
        b.add_copy(None, l);
    }
    for l in 1..=t {
        b.connect(VertexAddress::center(), vr(base).in_copy(l), ConnectorRole::Spoke);
    }
    b.finish(spec)
}

/// A center joined to `t` branches, each a path union of `n` copies. The
/// spoke of branch `s` lands on `v_{s,1,r}`.
pub fn build_one_point_union_path(
    base: &AlphaLabeledBase,
    t: u32,
    n: u32,
) -> Result<Compound, ConstructionError> {
    let spec = ConstructionSpec::one_point_union_path(t, n);
    spec.validate()?;
    let mut b = Builder::new(base, u64::from(t) * u64::from(n))?;
    b.vertices.push(VertexAddress::center());
    for s in 1..=t {
        for l in 1..=n {
            b.add_copy(Some(s), l);
        }
    }
    for s in 1..=t {
        for l in 1..n {
            b.connect(
                v1(base).in_copy(l).in_branch(s),
                u1(base).in_copy(l + 1).in_branch(s),
                ConnectorRole::IntraBranch,
            );
        }
        b.connect(
            VertexAddress::center(),
            vr(base).in_copy(1).in_branch(s),
            ConnectorRole::Spoke,
        );
    }
    b.finish(spec)
}

/// `t` copies around a cycle, with the calibrated link endpoints.
pub fn build_cycle_of(base: &AlphaLabeledBase, t: u32) -> Result<Compound, ConstructionError> {
    ConstructionSpec::cycle_of(t).validate()?;
    let variant =
        labelers::cycle_variant().map_err(|e| ConstructionError::Calibration(e.to_string()))?;
    build_cycle_of_with(base, t, &variant.links)
}

/// `t` copies around a cycle with explicit link endpoints.
pub fn build_cycle_of_with(
    base: &AlphaLabeledBase,
    t: u32,
    links: &CycleLinks,
) -> Result<Compound, ConstructionError> {
    let spec = ConstructionSpec::cycle_of(t);
    spec.validate()?;
    let mut b = Builder::new(base, u64::from(t))?;
    for l in 1..=t {
        b.add_copy(None, l);
    }
    let half = t / 2;
    let link = |b: &mut Builder, (x, y): (LinkEnd, LinkEnd), from: u32, to: u32| {
        b.connect(
            x.resolve(base).in_copy(from),
            y.resolve(base).in_copy(to),
            ConnectorRole::CycleLink,
        );
    };
    for l in 1..half {
        link(&mut b, (LinkEnd::V_FIRST, LinkEnd::U_FIRST), l, l + 1);
    }
    link(&mut b, links.midpoint, half, half + 1);
    for l in half + 1..t {
        link(&mut b, links.descending, l, l + 1);
    }
    link(&mut b, links.closing, t, 1);
    b.finish(spec)
}

/// A central copy (copy 0) plus one outer copy per base vertex, each joined
/// to the central copy by the spoke the star labeler selects.
pub fn build_star_of(base: &AlphaLabeledBase) -> Result<Compound, ConstructionError> {
    let spokes = labelers::star_of_spokes(base)?;
    build_star_of_with(base, &spokes)
}

/// Star of a graph with explicit spokes, one per outer copy in copy order.
pub fn build_star_of_with(
    base: &AlphaLabeledBase,
    spokes: &[Edge],
) -> Result<Compound, ConstructionError> {
    let spec = ConstructionSpec::star_of();
    let p0 = base.p0() as u32;
    if p0 < 2 {
        return Err(ConstructionError::BaseTooSmall);
    }
    let mut b = Builder::new(base, u64::from(p0) + 1)?;
    for l in 0..=p0 {
        b.add_copy(None, l);
    }
    for &(x, y) in spokes {
        b.connect(x, y, ConnectorRole::Spoke);
    }
    b.finish(spec)
}

/// Builds any family from its spec.
pub fn build(base: &AlphaLabeledBase, spec: &ConstructionSpec) -> Result<Compound, ConstructionError> {
    spec.validate()?;
    match spec.family {
        Family::PathUnion => build_path_union(base, spec.n.unwrap_or_default()),
        Family::OpenStar => build_open_star(base, spec.t.unwrap_or_default()),
        Family::OnePointUnionPath => build_one_point_union_path(
            base,
            spec.t.unwrap_or_default(),
            spec.n.unwrap_or_default(),
        ),
        Family::CycleOf => build_cycle_of(base, spec.t.unwrap_or_default()),
        Family::StarOf => build_star_of(base),
    }
}

/// Edge count each family must have, from the base's `p0` and `q0`.
pub fn expected_edge_count(base: &AlphaLabeledBase, spec: &ConstructionSpec) -> u64 {
    let q0 = base.q0();
    let p0 = base.p0() as u64;
    let t = u64::from(spec.t.unwrap_or(0));
    let n = u64::from(spec.n.unwrap_or(0));
    match spec.family {
        Family::PathUnion => n * (q0 + 1) - 1,
        Family::OpenStar | Family::CycleOf => t * (q0 + 1),
        Family::OnePointUnionPath => t * n * (q0 + 1),
        Family::StarOf => (p0 + 1) * q0 + p0,
    }
}
