//! Exhaustive backtracking search for graceful and α-labelings of small
//! graphs, plus a naive enumerator used to cross-check it.
//!
//! The search is deterministic. The edge that receives label `q` is chosen
//! first; its endpoints get `0` and `q`, and only the orientation putting `0`
//! on the edge's first endpoint is explored (the complement `f -> q - f`
//! covers the other). Remaining vertices are assigned in degree-descending
//! order with values ascending, pruning as soon as an induced edge label
//! repeats.

use std::fmt;
use std::time::{Duration, Instant};

use thiserror::Error;

use crate::graph::{Graph, Labeling};
use crate::verify::{verify_alpha_labels, verify_labels, Bipartition};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchBudget {
    pub max_nodes: u64,
    pub time_limit: Duration,
}

impl SearchBudget {
    pub const fn nodes(max_nodes: u64) -> Self {
        Self {
            max_nodes,
            time_limit: Duration::from_secs(3600),
        }
    }
}

impl Default for SearchBudget {
    fn default() -> Self {
        Self {
            max_nodes: 10_000_000,
            time_limit: Duration::from_secs(60),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SearchStatus {
    Found,
    ExhaustedNone,
    Indeterminate,
}

impl fmt::Display for SearchStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SearchStatus::Found => "FOUND",
            SearchStatus::ExhaustedNone => "EXHAUSTED_NONE",
            SearchStatus::Indeterminate => "INDETERMINATE",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchOutcome {
    pub status: SearchStatus,
    pub labeling: Option<Labeling>,
    pub nodes_expanded: u64,
}

impl SearchOutcome {
    fn none(status: SearchStatus, nodes_expanded: u64) -> Self {
        Self {
            status,
            labeling: None,
            nodes_expanded,
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("naive enumeration is limited to q <= 8, got q = {0}")]
    TooLarge(usize),
}

/// Search aborted by the budget.
struct OutOfBudget;

struct Search<'g> {
    graph: &'g Graph,
    adj: Vec<Vec<usize>>,
    q: usize,
    /// `Some(low)` restricts to α-labelings with `low[v]` marking the low side.
    low: Option<Vec<bool>>,
    label: Vec<Option<usize>>,
    vertex_used: Vec<bool>,
    edge_used: Vec<bool>,
    nodes: u64,
    budget: SearchBudget,
    started: Instant,
}

impl<'g> Search<'g> {
    fn new(graph: &'g Graph, budget: SearchBudget, started: Instant) -> Self {
        let q = graph.q();
        Self {
            graph,
            adj: graph.adjacency(),
            q,
            low: None,
            label: vec![None; graph.p()],
            vertex_used: vec![false; q + 1],
            edge_used: vec![false; q + 1],
            nodes: 0,
            budget,
            started,
        }
    }

    fn tick(&mut self) -> Result<(), OutOfBudget> {
        self.nodes += 1;
        if self.nodes > self.budget.max_nodes {
            return Err(OutOfBudget);
        }
        if self.nodes.is_multiple_of(4096) && self.started.elapsed() > self.budget.time_limit {
            return Err(OutOfBudget);
        }
        Ok(())
    }

    /// Edge labels `v` would induce with value `x`, or `None` on a collision.
    fn induced(&self, v: usize, x: usize) -> Option<Vec<usize>> {
        let mut out = Vec::with_capacity(self.adj[v].len());
        for &w in &self.adj[v] {
            if let Some(y) = self.label[w] {
                let d = x.abs_diff(y);
                if d == 0 || self.edge_used[d] || out.contains(&d) {
                    return None;
                }
                out.push(d);
            }
        }
        Some(out)
    }

    fn place(&mut self, v: usize, x: usize, edges: &[usize]) {
        self.label[v] = Some(x);
        self.vertex_used[x] = true;
        for &d in edges {
            self.edge_used[d] = true;
        }
    }

    fn unplace(&mut self, v: usize, x: usize, edges: &[usize]) {
        self.label[v] = None;
        self.vertex_used[x] = false;
        for &d in edges {
            self.edge_used[d] = false;
        }
    }

    /// Tries every root edge for the label `q`, then extends.
    fn run(&mut self) -> Result<bool, OutOfBudget> {
        let degree: Vec<usize> = self.adj.iter().map(Vec::len).collect();
        let mut by_degree: Vec<usize> = (0..self.graph.p()).collect();
        by_degree.sort_by_key(|&v| (std::cmp::Reverse(degree[v]), v));

        for &(a, b) in self.graph.edge_positions() {
            let (zero, top) = match &self.low {
                Some(low) if !low[a] => (b, a),
                _ => (a, b),
            };
            if let Some(low) = &self.low {
                if !low[zero] || low[top] {
                    continue;
                }
            }
            self.tick()?;
            self.place(zero, 0, &[]);
            let edges = self.induced(top, self.q).expect("fresh root edge");
            self.place(top, self.q, &edges);
            let order: Vec<usize> = by_degree
                .iter()
                .copied()
                .filter(|&v| v != zero && v != top)
                .collect();
            let (max_low, min_high) = (0, self.q);
            if self.extend(&order, max_low, min_high)? {
                return Ok(true);
            }
            self.unplace(top, self.q, &edges);
            self.unplace(zero, 0, &[]);
        }
        Ok(false)
    }

    fn extend(&mut self, order: &[usize], max_low: usize, min_high: usize) -> Result<bool, OutOfBudget> {
        let Some((&v, rest)) = order.split_first() else {
            return Ok(true);
        };
        let (lo, hi) = match &self.low {
            None => (0, self.q),
            Some(low) if low[v] => (0, min_high.saturating_sub(1)),
            Some(_) => (max_low + 1, self.q),
        };
        for x in lo..=hi.min(self.q) {
            if self.vertex_used[x] {
                continue;
            }
            let Some(edges) = self.induced(v, x) else {
                continue;
            };
            self.tick()?;
            self.place(v, x, &edges);
            let (nl, nh) = match &self.low {
                Some(low) if low[v] => (max_low.max(x), min_high),
                Some(_) => (max_low, min_high.min(x)),
                None => (max_low, min_high),
            };
            if self.extend(rest, nl, nh)? {
                return Ok(true);
            }
            self.unplace(v, x, &edges);
        }
        Ok(false)
    }

    fn labeling(&self) -> Labeling {
        self.graph
            .vertices()
            .iter()
            .zip(&self.label)
            .map(|(v, l)| (*v, l.expect("complete assignment") as u64))
            .collect()
    }
}

/// Outcome for graphs decided without search: no edges, or more vertices
/// than available labels.
fn trivial(graph: &Graph) -> Option<SearchOutcome> {
    let (p, q) = (graph.p(), graph.q());
    if p > q + 1 {
        return Some(SearchOutcome::none(SearchStatus::ExhaustedNone, 0));
    }
    if q == 0 {
        let labeling = graph.vertices().iter().map(|v| (*v, 0)).collect();
        return Some(SearchOutcome {
            status: SearchStatus::Found,
            labeling: Some(labeling),
            nodes_expanded: 0,
        });
    }
    None
}

/// Decides whether `graph` is graceful, within `budget`.
pub fn find_graceful(graph: &Graph, budget: SearchBudget) -> SearchOutcome {
    if let Some(outcome) = trivial(graph) {
        return outcome;
    }
    let mut search = Search::new(graph, budget, Instant::now());
    match search.run() {
        Ok(true) => {
            let labeling = search.labeling();
            assert!(
                verify_labels(graph, &labeling).passed(),
                "oracle produced a non-graceful labeling"
            );
            SearchOutcome {
                status: SearchStatus::Found,
                labeling: Some(labeling),
                nodes_expanded: search.nodes,
            }
        }
        Ok(false) => SearchOutcome::none(SearchStatus::ExhaustedNone, search.nodes),
        Err(OutOfBudget) => SearchOutcome::none(SearchStatus::Indeterminate, search.nodes),
    }
}

/// Two-colors every component; `None` if some component has an odd cycle.
fn two_coloring(graph: &Graph) -> Option<(Vec<bool>, Vec<usize>)> {
    let adj = graph.adjacency();
    let mut color: Vec<Option<bool>> = vec![None; graph.p()];
    let mut component = vec![0usize; graph.p()];
    let mut count = 0;
    for s in 0..graph.p() {
        if color[s].is_some() {
            continue;
        }
        color[s] = Some(true);
        component[s] = count;
        let mut stack = vec![s];
        while let Some(v) = stack.pop() {
            let c = color[v].expect("colored on push");
            for &w in &adj[v] {
                match color[w] {
                    None => {
                        color[w] = Some(!c);
                        component[w] = count;
                        stack.push(w);
                    }
                    Some(cw) if cw == c => return None,
                    Some(_) => {}
                }
            }
        }
        count += 1;
    }
    let color = color.into_iter().map(|c| c.expect("all colored")).collect();
    Some((color, component))
}

/// Components beyond which side-assignment enumeration is not attempted.
const MAX_ALPHA_COMPONENTS: usize = 16;

/// Decides whether `graph` admits an α-labeling, within `budget`.
///
/// Non-bipartite graphs are rejected without search. Each component's
/// two-coloring may be flipped independently; every combination is tried.
pub fn find_alpha(graph: &Graph, budget: SearchBudget) -> SearchOutcome {
    let Some((color, component)) = two_coloring(graph) else {
        return SearchOutcome::none(SearchStatus::ExhaustedNone, 0);
    };
    let (p, q) = (graph.p(), graph.q());
    if p > q + 1 {
        return SearchOutcome::none(SearchStatus::ExhaustedNone, 0);
    }
    if q == 0 {
        return trivial(graph).expect("edgeless graphs are decided trivially");
    }
    let components = component.iter().max().map_or(0, |c| c + 1);
    if components > MAX_ALPHA_COMPONENTS {
        return SearchOutcome::none(SearchStatus::Indeterminate, 0);
    }
    let started = Instant::now();
    let mut nodes = 0;
    for mask in 0u32..(1 << components) {
        let low: Vec<bool> = (0..p)
            .map(|v| color[v] ^ (mask >> component[v] & 1 == 1))
            .collect();
        let remaining = SearchBudget {
            max_nodes: budget.max_nodes.saturating_sub(nodes),
            ..budget
        };
        let mut search = Search::new(graph, remaining, started);
        search.low = Some(low.clone());
        let result = search.run();
        nodes += search.nodes;
        match result {
            Ok(true) => {
                let labeling = search.labeling();
                let sides = Bipartition::new(
                    (0..p).filter(|&v| low[v]).map(|v| graph.vertices()[v]),
                    (0..p).filter(|&v| !low[v]).map(|v| graph.vertices()[v]),
                )
                .expect("nonempty graph");
                assert!(
                    verify_alpha_labels(graph, &labeling, &sides).passed(),
                    "oracle produced a non-α labeling"
                );
                return SearchOutcome {
                    status: SearchStatus::Found,
                    labeling: Some(labeling),
                    nodes_expanded: nodes,
                };
            }
            Ok(false) => {}
            Err(OutOfBudget) => return SearchOutcome::none(SearchStatus::Indeterminate, nodes),
        }
    }
    SearchOutcome::none(SearchStatus::ExhaustedNone, nodes)
}

/// Decides gracefulness by trying every injection `V -> {0..q}` with no
/// pruning. `nodes_expanded` counts complete assignments examined.
pub fn cross_check_enumeration(graph: &Graph) -> Result<SearchOutcome, OracleError> {
    let q = graph.q();
    if q > 8 {
        return Err(OracleError::TooLarge(q));
    }
    let p = graph.p();
    let mut labels = vec![0u64; p];
    let mut used = vec![false; q + 1];
    let mut checked = 0u64;

    fn rec(
        graph: &Graph,
        k: usize,
        labels: &mut [u64],
        used: &mut [bool],
        checked: &mut u64,
    ) -> bool {
        if k == labels.len() {
            *checked += 1;
            let mut seen = vec![false; used.len()];
            return graph.edge_positions().iter().all(|&(a, b)| {
                let d = labels[a].abs_diff(labels[b]) as usize;
                d > 0 && !std::mem::replace(&mut seen[d], true)
            });
        }
        for x in 0..used.len() {
            if used[x] {
                continue;
            }
            used[x] = true;
            labels[k] = x as u64;
            if rec(graph, k + 1, labels, used, checked) {
                return true;
            }
            used[x] = false;
        }
        false
    }

    let found = rec(graph, 0, &mut labels, &mut used, &mut checked);
    Ok(if found {
        let labeling: Labeling = graph.vertices().iter().copied().zip(labels).collect();
        assert!(verify_labels(graph, &labeling).passed());
        SearchOutcome {
            status: SearchStatus::Found,
            labeling: Some(labeling),
            nodes_expanded: checked,
        }
    } else {
        SearchOutcome::none(SearchStatus::ExhaustedNone, checked)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::VertexAddress;

    fn cycle(n: u32) -> Graph {
        let vs: Vec<_> = (1..=n).map(VertexAddress::u).collect();
        let es = (0..n as usize)
            .map(|i| (vs[i], vs[(i + 1) % n as usize]))
            .collect();
        Graph::new(vs, es).unwrap()
    }

    fn k2() -> Graph {
        let (a, b) = (VertexAddress::u(1), VertexAddress::v(1));
        Graph::new(vec![a, b], vec![(a, b)]).unwrap()
    }

    #[test]
    fn k2_found() {
        let out = find_graceful(&k2(), SearchBudget::default());
        assert_eq!(out.status, SearchStatus::Found);
        let l = out.labeling.unwrap();
        assert_eq!(
            (l.get(&VertexAddress::u(1)), l.get(&VertexAddress::v(1))),
            (Some(0), Some(1))
        );
    }

    #[test]
    fn small_cycles() {
        let budget = SearchBudget::nodes(1_000_000);
        assert_eq!(find_graceful(&cycle(4), budget).status, SearchStatus::Found);
        assert_eq!(find_graceful(&cycle(5), budget).status, SearchStatus::ExhaustedNone);
        assert_eq!(find_graceful(&cycle(6), budget).status, SearchStatus::ExhaustedNone);
        assert_eq!(find_graceful(&cycle(7), budget).status, SearchStatus::Found);
    }

    #[test]
    fn alpha_on_cycles() {
        let budget = SearchBudget::nodes(1_000_000);
        assert_eq!(find_alpha(&cycle(4), budget).status, SearchStatus::Found);
        assert_eq!(find_alpha(&cycle(8), budget).status, SearchStatus::Found);
        let c7 = find_alpha(&cycle(7), budget);
        assert_eq!((c7.status, c7.nodes_expanded), (SearchStatus::ExhaustedNone, 0));
        // C6 is bipartite but not graceful at all.
        assert_eq!(find_alpha(&cycle(6), budget).status, SearchStatus::ExhaustedNone);
    }

    #[test]
    fn enumeration_agrees_on_cycles() {
        let budget = SearchBudget::default();
        for n in 3..=8 {
            let g = cycle(n);
            assert_eq!(
                cross_check_enumeration(&g).unwrap().status,
                find_graceful(&g, budget).status,
                "C{n}"
            );
        }
        assert_eq!(cross_check_enumeration(&cycle(6)).unwrap().status, SearchStatus::ExhaustedNone);
        assert_eq!(cross_check_enumeration(&cycle(9)), Err(OracleError::TooLarge(9)));
    }

    #[test]
    fn budget_exhaustion_is_indeterminate() {
        let out = find_graceful(&cycle(12), SearchBudget::nodes(5));
        assert_eq!(out.status, SearchStatus::Indeterminate);
        assert!(out.labeling.is_none());
    }

    #[test]
    fn budget_growth_is_monotone() {
        for n in [5, 8, 9] {
            let g = cycle(n);
            let full = find_graceful(&g, SearchBudget::default());
            assert_ne!(full.status, SearchStatus::Indeterminate);
            for limit in [1, 10, 100, 1000, 10_000, 100_000] {
                let out = find_graceful(&g, SearchBudget::nodes(limit));
                if out.status != SearchStatus::Indeterminate {
                    assert_eq!(out.status, full.status);
                    assert_eq!(out.nodes_expanded, full.nodes_expanded);
                }
            }
        }
    }

    #[test]
    fn deterministic_node_counts() {
        let a = find_graceful(&cycle(8), SearchBudget::default());
        let b = find_graceful(&cycle(8), SearchBudget::default());
        assert_eq!(a, b);
    }

    #[test]
    fn pigeonhole_and_edgeless() {
        let vs: Vec<_> = (1..=3).map(VertexAddress::u).collect();
        let g = Graph::new(vs.clone(), vec![(vs[0], vs[1])]).unwrap();
        assert_eq!(
            find_graceful(&g, SearchBudget::default()).status,
            SearchStatus::ExhaustedNone
        );
        let single = Graph::new(vec![vs[0]], vec![]).unwrap();
        assert_eq!(
            find_graceful(&single, SearchBudget::default()).status,
            SearchStatus::Found
        );
    }
}
