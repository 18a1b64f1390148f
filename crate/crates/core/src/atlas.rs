//! α-labeled base graphs: paths, cycles of length `4k`, complete bipartite
//! graphs and grids, plus user-supplied bases behind the same gate.

use std::time::Duration;

use log::warn;
use thiserror::Error;

use crate::graph::{Graph, GraphError, Labeling, VertexAddress};
use crate::oracle::{self, SearchBudget, SearchStatus};
use crate::verify::{verify_alpha_labels, Bipartition, Certificate};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AtlasError {
    #[error("path needs at least 2 vertices, got {0}")]
    PathTooShort(u32),
    #[error("cycle length {0} is not a positive multiple of 4")]
    CycleLength(u32),
    #[error("complete bipartite graph needs positive part sizes, got ({0}, {1})")]
    EmptyPart(u32, u32),
    #[error("grid {0}x{1} has fewer than 2 vertices")]
    GridTooSmall(u32, u32),
    #[error("grid {m}x{n}: closed form failed and oracle fallback gave no labeling ({reason})")]
    GridFallback { m: u32, n: u32, reason: String },
    #[error("base has {labels} labels for {vertices} vertices")]
    LabelCount { vertices: usize, labels: usize },
    #[error("base graph has no vertices")]
    Empty,
    #[error("base graph has no edges")]
    NoEdges,
    #[error("vertex index {0} out of range")]
    VertexIndex(usize),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("labeling is not an α-labeling:\n{0}")]
    NotAlpha(Certificate),
}

/// A base graph with an α-labeling in normalized form.
///
/// Vertices are addressed `U_i` (low side) and `V_j` (high side), ranked by
/// ascending label, so `f0(u_1) = 0`, `f0(v_r) = q0`, and
/// `f0(u_m) + 1 = f0(v_1)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlphaLabeledBase {
    graph: Graph,
    u_side: Vec<VertexAddress>,
    v_side: Vec<VertexAddress>,
    f0: Labeling,
    q0: u64,
}

impl AlphaLabeledBase {
    /// Builds a base from positional data: `edges` index into `0..p`,
    /// `labels[k]` labels vertex `k`, and `low[k]` puts vertex `k` on the
    /// low-labeled side. Vertex order is preserved; addresses are assigned
    /// by label rank within each side. The result must pass the α check.
    pub fn from_indexed(
        labels: &[u64],
        low: &[bool],
        edges: &[(usize, usize)],
    ) -> Result<Self, AtlasError> {
        let p = labels.len();
        if low.len() != p {
            return Err(AtlasError::LabelCount {
                vertices: low.len(),
                labels: p,
            });
        }
        let rank = |side: bool| {
            let mut members: Vec<usize> = (0..p).filter(|&k| low[k] == side).collect();
            members.sort_by_key(|&k| (labels[k], k));
            let mut ranks = vec![0u32; p];
            for (r, &k) in members.iter().enumerate() {
                ranks[k] = r as u32 + 1;
            }
            (members, ranks)
        };
        let (low_members, low_rank) = rank(true);
        let (high_members, high_rank) = rank(false);

        let addresses: Vec<VertexAddress> = (0..p)
            .map(|k| {
                if low[k] {
                    VertexAddress::u(low_rank[k])
                } else {
                    VertexAddress::v(high_rank[k])
                }
            })
            .collect();
        let mut edge_list = Vec::with_capacity(edges.len());
        for &(a, b) in edges {
            let aa = *addresses.get(a).ok_or(AtlasError::VertexIndex(a))?;
            let bb = *addresses.get(b).ok_or(AtlasError::VertexIndex(b))?;
            edge_list.push((aa, bb));
        }
        let graph = Graph::new(addresses.clone(), edge_list)?;
        let f0: Labeling = addresses.iter().copied().zip(labels.iter().copied()).collect();
        let u_side: Vec<_> = low_members.iter().map(|&k| addresses[k]).collect();
        let v_side: Vec<_> = high_members.iter().map(|&k| addresses[k]).collect();

        let sides = Bipartition::new(u_side.iter().copied(), v_side.iter().copied())
            .map_err(|_| AtlasError::Empty)?;
        let cert = verify_alpha_labels(&graph, &f0, &sides);
        if !cert.passed() {
            return Err(AtlasError::NotAlpha(cert));
        }
        let q0 = graph.q() as u64;
        if q0 == 0 {
            return Err(AtlasError::NoEdges);
        }
        Ok(Self {
            graph,
            u_side,
            v_side,
            f0,
            q0,
        })
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn u_side(&self) -> &[VertexAddress] {
        &self.u_side
    }

    pub fn v_side(&self) -> &[VertexAddress] {
        &self.v_side
    }

    pub fn f0(&self) -> &Labeling {
        &self.f0
    }

    pub fn q0(&self) -> u64 {
        self.q0
    }

    /// Size of the low side.
    pub fn m(&self) -> usize {
        self.u_side.len()
    }

    /// Size of the high side.
    pub fn r(&self) -> usize {
        self.v_side.len()
    }

    pub fn p0(&self) -> usize {
        self.m() + self.r()
    }

    /// Label of a base vertex.
    pub fn label(&self, v: &VertexAddress) -> u64 {
        self.f0.get(&v.base()).expect("base labeling is total")
    }

    /// `f0(u_i)` for 1-based `i`.
    pub fn fu(&self, i: usize) -> i64 {
        self.label(&self.u_side[i - 1]) as i64
    }

    /// `f0(v_j)` for 1-based `j`.
    pub fn fv(&self, j: usize) -> i64 {
        self.label(&self.v_side[j - 1]) as i64
    }

    pub fn bipartition(&self) -> Bipartition {
        Bipartition::new(self.u_side.iter().copied(), self.v_side.iter().copied())
            .expect("base sides are disjoint and nonempty")
    }

    pub fn certificate(&self) -> Certificate {
        verify_alpha_labels(&self.graph, &self.f0, &self.bipartition())
    }
}

/// Path on `n` vertices, zigzag labeled `0, q0, 1, q0-1, ...`.
pub fn base_path(n: u32) -> Result<AlphaLabeledBase, AtlasError> {
    if n < 2 {
        return Err(AtlasError::PathTooShort(n));
    }
    let q0 = u64::from(n) - 1;
    let labels: Vec<u64> = (0..u64::from(n))
        .map(|k| if k % 2 == 0 { k / 2 } else { q0 - (k - 1) / 2 })
        .collect();
    let low: Vec<bool> = (0..n).map(|k| k % 2 == 0).collect();
    let edges: Vec<_> = (0..n as usize - 1).map(|k| (k, k + 1)).collect();
    AlphaLabeledBase::from_indexed(&labels, &low, &edges)
}

/// Cycle `x_1 ... x_n` with `n ≡ 0 (mod 4)`.
///
/// Odd `i` gets `(i-1)/2`; even `i` gets `q0 - i/2 + 1` up to `n/2` and
/// `q0 - i/2` past it.
pub fn base_cycle(n: u32) -> Result<AlphaLabeledBase, AtlasError> {
    if n < 4 || !n.is_multiple_of(4) {
        return Err(AtlasError::CycleLength(n));
    }
    let q0 = u64::from(n);
    let labels: Vec<u64> = (1..=q0)
        .map(|i| {
            if i % 2 == 1 {
                (i - 1) / 2
            } else if i <= q0 / 2 {
                q0 - i / 2 + 1
            } else {
                q0 - i / 2
            }
        })
        .collect();
    let low: Vec<bool> = (1..=n).map(|i| i % 2 == 1).collect();
    let len = n as usize;
    let edges: Vec<_> = (0..len).map(|k| (k, (k + 1) % len)).collect();
    AlphaLabeledBase::from_indexed(&labels, &low, &edges)
}

/// `K_{m,n}` with `u_i = i - 1` and `v_j = j * m`.
pub fn base_complete_bipartite(m: u32, n: u32) -> Result<AlphaLabeledBase, AtlasError> {
    if m == 0 || n == 0 {
        return Err(AtlasError::EmptyPart(m, n));
    }
    let (mu, nu) = (m as usize, n as usize);
    let labels: Vec<u64> = (0..u64::from(m))
        .chain((1..=u64::from(n)).map(|j| j * u64::from(m)))
        .collect();
    let low: Vec<bool> = (0..mu + nu).map(|k| k < mu).collect();
    let edges: Vec<_> = (0..mu)
        .flat_map(|i| (0..nu).map(move |j| (i, mu + j)))
        .collect();
    AlphaLabeledBase::from_indexed(&labels, &low, &edges)
}

/// Vertices and edges of `P_m × P_n`: `m` rows, `n` columns, vertex
/// `(i, j)` at position `j * m + i`.
pub fn grid_edges(m: usize, n: usize) -> Vec<(usize, usize)> {
    let at = |i: usize, j: usize| j * m + i;
    let mut edges = Vec::new();
    for j in 0..n {
        for i in 0..m {
            if i + 1 < m {
                edges.push((at(i, j), at(i + 1, j)));
            }
            if j + 1 < n {
                edges.push((at(i, j), at(i, j + 1)));
            }
        }
    }
    edges
}

/// Column-sweep labeling of the grid.
///
/// Each column is zigzag labeled: its low vertices (rows with `i + j` even)
/// count up from `a_j`, its high vertices count down from `b_j`. Columns
/// alternate which offset is pinned against the previous one so the
/// vertical edges of column `j` take the `m - 1` labels just below
/// `q - j(2m - 1)` and the horizontal edges to column `j + 1` take the next
/// `m`.
fn grid_column_sweep(m: usize, n: usize) -> Vec<u64> {
    let q = (2 * m * n - m - n) as i64;
    let mut a = vec![0i64; n];
    let mut b = vec![0i64; n];
    b[0] = q;
    let mut span = q;
    for j in 0..n.saturating_sub(1) {
        let h = span - (m as i64 - 1);
        if j % 2 == 1 {
            a[j + 1] = b[j] - h;
            b[j + 1] = h + a[j] - 1;
        } else {
            b[j + 1] = h + a[j];
            a[j + 1] = b[j] - h + 1;
        }
        span = b[j + 1] - a[j + 1];
    }
    let mut labels = vec![0u64; m * n];
    for j in 0..n {
        let (mut lo, mut hi) = (0i64, 0i64);
        for i in 0..m {
            let value = if (i + j) % 2 == 0 {
                lo += 1;
                a[j] + lo - 1
            } else {
                hi += 1;
                b[j] - hi + 1
            };
            labels[j * m + i] = u64::try_from(value).unwrap_or(u64::MAX);
        }
    }
    labels
}

/// Oracle search budget used when the closed form fails for a small grid.
pub const GRID_FALLBACK_BUDGET: SearchBudget = SearchBudget {
    max_nodes: 50_000_000,
    time_limit: Duration::from_secs(30),
};

/// `P_m × P_n` with the column-sweep α-labeling, gated by the α check.
pub fn base_grid(m: u32, n: u32) -> Result<AlphaLabeledBase, AtlasError> {
    if m == 0 || n == 0 || m * n < 2 {
        return Err(AtlasError::GridTooSmall(m, n));
    }
    let (mu, nu) = (m as usize, n as usize);
    let labels = grid_column_sweep(mu, nu);
    let low: Vec<bool> = (0..mu * nu).map(|k| (k % mu + k / mu) % 2 == 0).collect();
    let edges = grid_edges(mu, nu);
    match AlphaLabeledBase::from_indexed(&labels, &low, &edges) {
        Ok(base) => Ok(base),
        Err(err) => {
            warn!("column sweep failed for grid {m}x{n}: {err}; falling back to oracle");
            grid_via_oracle(m, n, GRID_FALLBACK_BUDGET)
        }
    }
}

/// α-labels the grid by exhaustive search. Only meant for `m, n <= 4`.
pub fn grid_via_oracle(m: u32, n: u32, budget: SearchBudget) -> Result<AlphaLabeledBase, AtlasError> {
    let fallback = |reason: String| AtlasError::GridFallback { m, n, reason };
    if m == 0 || n == 0 || m * n < 2 {
        return Err(AtlasError::GridTooSmall(m, n));
    }
    if m > 4 || n > 4 {
        return Err(fallback("grid too large for exhaustive search".into()));
    }
    let (mu, nu) = (m as usize, n as usize);
    let edges = grid_edges(mu, nu);
    let vertices: Vec<_> = (1..=(mu * nu) as u32).map(VertexAddress::u).collect();
    let graph = Graph::new(
        vertices.clone(),
        edges.iter().map(|&(a, b)| (vertices[a], vertices[b])).collect(),
    )?;
    let outcome = oracle::find_alpha(&graph, budget);
    let labeling = match (outcome.status, outcome.labeling) {
        (SearchStatus::Found, Some(l)) => l,
        (status, _) => return Err(fallback(format!("oracle returned {status}"))),
    };
    let labels: Vec<u64> = vertices
        .iter()
        .map(|v| labeling.get(v).expect("oracle labeling is total"))
        .collect();
    // The 0-labeled vertex sits on the low side; its color class is the low side.
    let zero = labels.iter().position(|&l| l == 0).expect("graceful labeling uses 0");
    let zero_parity = (zero % mu + zero / mu) % 2;
    let low: Vec<bool> = (0..mu * nu)
        .map(|k| (k % mu + k / mu) % 2 == zero_parity)
        .collect();
    AlphaLabeledBase::from_indexed(&labels, &low, &edges)
}
