//! Line-oriented text format for labeled compound graphs.
//!
//! ```text
//! graceful-document 1
//! family PATH_UNION
//! t -
//! n 2
//! base path:2
//! vertices 4
//! v -/1/U/1 0
//! ...
//! edges 3
//! e -/1/U/1 -/1/V/1 3 copy
//! ...
//! certificate GRACEFUL q=3 violations=0
//! end
//! ```
//!
//! Blank lines and `#` comments are ignored. The closing `end` line is
//! mandatory so a truncated file never parses.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::construct::{build, ConnectorRole, ConstructionSpec, Family};
use crate::descriptor::{BaseDescriptor, DescriptorError};
use crate::graph::{Edge, Graph, GraphError, Labeling, VertexAddress};
use crate::labelers::LabelerReport;
use crate::verify::{verify_labels, Certificate, Verdict};

pub const MAGIC: &str = "graceful-document";
pub const FORMAT_VERSION: u32 = 1;

/// What an edge is for: inside a base copy, or one of the connector kinds.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum EdgeRole {
    Copy,
    Connector(ConnectorRole),
}

impl EdgeRole {
    fn as_str(self) -> &'static str {
        match self {
            EdgeRole::Copy => "copy",
            EdgeRole::Connector(ConnectorRole::IntraBranch) => "chain",
            EdgeRole::Connector(ConnectorRole::Spoke) => "spoke",
            EdgeRole::Connector(ConnectorRole::CycleLink) => "link",
        }
    }
}

impl FromStr for EdgeRole {
    type Err = ();

    fn from_str(s: &str) -> Result<Self, ()> {
        Ok(match s {
            "copy" => EdgeRole::Copy,
            "chain" => EdgeRole::Connector(ConnectorRole::IntraBranch),
            "spoke" => EdgeRole::Connector(ConnectorRole::Spoke),
            "link" => EdgeRole::Connector(ConnectorRole::CycleLink),
            _ => return Err(()),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeRecord {
    pub edge: Edge,
    /// Induced label as stored; only trusted after the tamper check.
    pub label: u64,
    pub role: EdgeRole,
}

/// The stored certificate. Informational: verification always recomputes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CertificateSummary {
    pub verdict: Verdict,
    pub q: u64,
    pub violations: Vec<String>,
}

impl From<&Certificate> for CertificateSummary {
    fn from(c: &Certificate) -> Self {
        Self {
            verdict: c.verdict,
            q: c.q,
            violations: c.violations.iter().map(ToString::to_string).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabeledGraphDocument {
    pub version: u32,
    pub spec: ConstructionSpec,
    pub base: BaseDescriptor,
    pub vertices: Vec<(VertexAddress, u64)>,
    pub edges: Vec<EdgeRecord>,
    pub certificate: CertificateSummary,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("document ends before the `end` line")]
    Truncated,
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("unsupported format version {0}")]
    Version(u32),
}

/// Stored edge label disagreeing with the vertex labels.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tamper {
    pub edge: Edge,
    pub stored: u64,
    /// `None` when an endpoint has no vertex record.
    pub computed: Option<u64>,
}

impl fmt::Display for Tamper {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let computed = self
            .computed
            .map_or_else(|| "nothing".to_string(), |c| c.to_string());
        write!(
            f,
            "edge {} -- {} stores label {} but its endpoints induce {computed}",
            self.edge.0, self.edge.1, self.stored
        )
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LoadError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("base: {0}")]
    Base(#[from] DescriptorError),
    #[error("{0}")]
    Spec(String),
}

/// Outcome of checking a loaded document from its raw vertex labels.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DocumentCheck {
    pub certificate: Certificate,
    pub tampered: Vec<Tamper>,
    /// Set when the vertex and edge records differ from a fresh build of
    /// the declared family over the declared base.
    pub structure: Option<String>,
}

impl DocumentCheck {
    pub fn passed(&self) -> bool {
        self.certificate.passed() && self.tampered.is_empty() && self.structure.is_none()
    }

    pub fn verdict(&self) -> Verdict {
        if self.passed() {
            self.certificate.verdict
        } else {
            Verdict::Fail
        }
    }
}

impl fmt::Display for DocumentCheck {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.verdict())?;
        write!(f, "{}", self.certificate)?;
        for t in &self.tampered {
            writeln!(f, "  tamper: {t}")?;
        }
        if let Some(s) = &self.structure {
            writeln!(f, "  structure: {s}")?;
        }
        Ok(())
    }
}

fn normalized(e: &Edge) -> Edge {
    if e.0 <= e.1 {
        *e
    } else {
        (e.1, e.0)
    }
}

impl LabeledGraphDocument {
    pub fn from_report(report: &LabelerReport, base: BaseDescriptor) -> Self {
        let lg = &report.labeled;
        let graph = lg.graph();
        let role = |e: &Edge| {
            report
                .connectors
                .iter()
                .find(|c| c.edge == *e)
                .map_or(EdgeRole::Copy, |c| EdgeRole::Connector(c.role))
        };
        Self {
            version: FORMAT_VERSION,
            spec: report.spec,
            base,
            vertices: graph.vertices().iter().zip(lg.values()).map(|(v, &x)| (*v, x)).collect(),
            edges: graph
                .edges()
                .iter()
                .zip(lg.edge_labels())
                .map(|(e, label)| EdgeRecord {
                    edge: *e,
                    label,
                    role: role(e),
                })
                .collect(),
            certificate: (&report.certificate).into(),
        }
    }

    pub fn graph(&self) -> Result<Graph, GraphError> {
        Graph::new(
            self.vertices.iter().map(|(v, _)| *v).collect(),
            self.edges.iter().map(|r| r.edge).collect(),
        )
    }

    pub fn labeling(&self) -> Labeling {
        self.vertices.iter().copied().collect()
    }

    pub fn q(&self) -> usize {
        self.edges.len()
    }

    /// Edges whose stored label differs from the one their endpoints induce.
    pub fn tamper_check(&self) -> Vec<Tamper> {
        let labels = self.labeling();
        self.edges
            .iter()
            .filter_map(|r| {
                let computed = labels
                    .get(&r.edge.0)
                    .zip(labels.get(&r.edge.1))
                    .map(|(a, b)| a.abs_diff(b));
                (computed != Some(r.label)).then_some(Tamper {
                    edge: r.edge,
                    stored: r.label,
                    computed,
                })
            })
            .collect()
    }

    /// Compares the recorded topology with a fresh build of the declared
    /// family. Vertex and edge order do not matter.
    pub fn structure_check(&self) -> Result<Option<String>, LoadError> {
        self.spec
            .validate()
            .map_err(|e| LoadError::Spec(e.to_string()))?;
        let base = self.base.resolve()?;
        let compound = build(&base, &self.spec).map_err(|e| LoadError::Spec(e.to_string()))?;
        let expected_v: BTreeSet<_> = compound.graph.vertices().iter().copied().collect();
        let actual_v: BTreeSet<_> = self.vertices.iter().map(|(v, _)| *v).collect();
        if expected_v != actual_v {
            let missing = expected_v.difference(&actual_v).count();
            let extra = actual_v.difference(&expected_v).count();
            return Ok(Some(format!(
                "vertex set differs from {} over {}: {missing} missing, {extra} unexpected",
                self.spec, self.base
            )));
        }
        let expected_e: BTreeSet<_> = compound.graph.edges().iter().map(normalized).collect();
        let actual_e: BTreeSet<_> = self.edges.iter().map(|r| normalized(&r.edge)).collect();
        if expected_e != actual_e {
            let missing = expected_e.difference(&actual_e).count();
            let extra = actual_e.difference(&expected_e).count();
            return Ok(Some(format!(
                "edge set differs from {} over {}: {missing} missing, {extra} unexpected",
                self.spec, self.base
            )));
        }
        Ok(None)
    }

    /// Recomputes the certificate from raw vertex labels, plus the tamper
    /// and structure checks.
    pub fn check(&self) -> Result<DocumentCheck, LoadError> {
        let mut check = self.check_labels()?;
        check.structure = self.structure_check()?;
        Ok(check)
    }

    /// As [`check`](Self::check) without rebuilding the declared family;
    /// for callers that already know the topology is right.
    pub fn check_labels(&self) -> Result<DocumentCheck, GraphError> {
        let graph = self.graph()?;
        Ok(DocumentCheck {
            certificate: verify_labels(&graph, &self.labeling()),
            tampered: self.tamper_check(),
            structure: None,
        })
    }

    pub fn parse(text: &str) -> Result<Self, ParseError> {
        Parser::new(text).document()
    }

    /// Copy with the stored edge labels and certificate recomputed from the
    /// current vertex labels.
    pub fn rerendered(&self) -> Result<Self, GraphError> {
        let graph = self.graph()?;
        let labels = self.labeling();
        let mut doc = self.clone();
        for r in &mut doc.edges {
            r.label = labels
                .get(&r.edge.0)
                .zip(labels.get(&r.edge.1))
                .map_or(0, |(a, b)| a.abs_diff(b));
        }
        doc.certificate = (&verify_labels(&graph, &labels)).into();
        Ok(doc)
    }
}

impl fmt::Display for LabeledGraphDocument {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let opt = |x: Option<u32>| x.map_or_else(|| "-".to_string(), |v| v.to_string());
        writeln!(f, "{MAGIC} {}", self.version)?;
        writeln!(f, "family {}", self.spec.family)?;
        writeln!(f, "t {}", opt(self.spec.t))?;
        writeln!(f, "n {}", opt(self.spec.n))?;
        writeln!(f, "base {}", self.base)?;
        writeln!(f, "vertices {}", self.vertices.len())?;
        for (v, x) in &self.vertices {
            writeln!(f, "v {v} {x}")?;
        }
        writeln!(f, "edges {}", self.edges.len())?;
        for r in &self.edges {
            writeln!(f, "e {} {} {} {}", r.edge.0, r.edge.1, r.label, r.role.as_str())?;
        }
        let c = &self.certificate;
        writeln!(
            f,
            "certificate {} q={} violations={}",
            c.verdict,
            c.q,
            c.violations.len()
        )?;
        for v in &c.violations {
            writeln!(f, "violation {v}")?;
        }
        writeln!(f, "end")
    }
}

impl FromStr for LabeledGraphDocument {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::parse(s)
    }
}

struct Parser<'a> {
    lines: std::iter::Peekable<Box<dyn Iterator<Item = (usize, &'a str)> + 'a>>,
    line: usize,
}

impl<'a> Parser<'a> {
    fn new(text: &'a str) -> Self {
        let it: Box<dyn Iterator<Item = (usize, &'a str)>> = Box::new(
            text.lines()
                .enumerate()
                .map(|(i, l)| (i + 1, l.trim()))
                .filter(|(_, l)| !l.is_empty() && !l.starts_with('#')),
        );
        Self {
            lines: it.peekable(),
            line: 0,
        }
    }

    fn err(&self, message: impl Into<String>) -> ParseError {
        ParseError::Syntax {
            line: self.line,
            message: message.into(),
        }
    }

    fn next(&mut self) -> Result<&'a str, ParseError> {
        let (n, l) = self.lines.next().ok_or(ParseError::Truncated)?;
        self.line = n;
        Ok(l)
    }

    /// Next line, which must start with `key`; returns the remainder.
    fn keyed(&mut self, key: &str) -> Result<&'a str, ParseError> {
        let l = self.next()?;
        match l.split_once(' ') {
            Some((k, rest)) if k == key => Ok(rest.trim()),
            _ if l == key => Ok(""),
            _ => Err(self.err(format!("expected `{key}`, found `{l}`"))),
        }
    }

    fn number<T: FromStr>(&self, s: &str, what: &str) -> Result<T, ParseError> {
        s.parse().map_err(|_| self.err(format!("bad {what} `{s}`")))
    }

    fn address(&self, s: &str) -> Result<VertexAddress, ParseError> {
        s.parse().map_err(|e: crate::graph::AddressParseError| self.err(e.to_string()))
    }

    fn optional(&self, s: &str, what: &str) -> Result<Option<u32>, ParseError> {
        if s == "-" {
            Ok(None)
        } else {
            self.number(s, what).map(Some)
        }
    }

    fn document(mut self) -> Result<LabeledGraphDocument, ParseError> {
        let version: u32 = {
            let v = self.keyed(MAGIC)?;
            self.number(v, "version")?
        };
        if version != FORMAT_VERSION {
            return Err(ParseError::Version(version));
        }
        let family: Family = {
            let s = self.keyed("family")?;
            s.parse().map_err(|_| self.err(format!("unknown family `{s}`")))?
        };
        let t = {
            let s = self.keyed("t")?;
            self.optional(s, "t")?
        };
        let n = {
            let s = self.keyed("n")?;
            self.optional(s, "n")?
        };
        let base: BaseDescriptor = {
            let s = self.keyed("base")?;
            s.parse().map_err(|e: DescriptorError| self.err(e.to_string()))?
        };

        let count: usize = {
            let s = self.keyed("vertices")?;
            self.number(s, "vertex count")?
        };
        let mut vertices = Vec::with_capacity(count.min(1 << 20));
        for _ in 0..count {
            let rest = self.keyed("v")?;
            let [addr, label] = rest.split_whitespace().collect::<Vec<_>>()[..] else {
                return Err(self.err("vertex record needs an address and a label"));
            };
            vertices.push((self.address(addr)?, self.number(label, "label")?));
        }

        let count: usize = {
            let s = self.keyed("edges")?;
            self.number(s, "edge count")?
        };
        let mut edges = Vec::with_capacity(count.min(1 << 20));
        for _ in 0..count {
            let rest = self.keyed("e")?;
            let [a, b, label, role] = rest.split_whitespace().collect::<Vec<_>>()[..] else {
                return Err(self.err("edge record needs two addresses, a label and a role"));
            };
            edges.push(EdgeRecord {
                edge: (self.address(a)?, self.address(b)?),
                label: self.number(label, "label")?,
                role: role.parse().map_err(|_| self.err(format!("unknown role `{role}`")))?,
            });
        }

        let cert = self.keyed("certificate")?;
        let [verdict, q, count] = cert.split_whitespace().collect::<Vec<_>>()[..] else {
            return Err(self.err("certificate line needs verdict, q and violation count"));
        };
        let verdict: Verdict = verdict.parse().map_err(|e: String| self.err(e))?;
        let field = |s: &'a str, key: &str| {
            s.strip_prefix(key)
                .and_then(|x| x.strip_prefix('='))
                .ok_or_else(|| self.err(format!("expected `{key}=`")))
        };
        let q: u64 = self.number(field(q, "q")?, "q")?;
        let count: usize = self.number(field(count, "violations")?, "violation count")?;
        let mut violations = Vec::with_capacity(count.min(1 << 20));
        for _ in 0..count {
            violations.push(self.keyed("violation")?.to_string());
        }

        self.keyed("end")?;
        if let Some((n, l)) = self.lines.next() {
            self.line = n;
            return Err(self.err(format!("content after `end`: `{l}`")));
        }
        Ok(LabeledGraphDocument {
            version,
            spec: ConstructionSpec { family, t, n },
            base,
            vertices,
            edges,
            certificate: CertificateSummary { verdict, q, violations },
        })
    }
}
