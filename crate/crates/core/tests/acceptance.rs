//! Acceptance gate. Runs every criterion, prints one PASS/FAIL line each, and
//! exits nonzero if any criterion fails.

use std::collections::{BTreeSet, HashMap};
use std::fs;
use std::process::Command;
use std::time::{Duration, Instant};

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use graceful_core::atlas::{
    base_complete_bipartite, base_cycle, base_grid, base_path, AlphaLabeledBase, AtlasError,
};
use graceful_core::construct::{build, ConnectorRole};
use graceful_core::corpus::{default_bases, default_grid};
use graceful_core::descriptor::Topology;
use graceful_core::document::LabeledGraphDocument;
use graceful_core::graph::{Graph, LabeledGraph, Labeling, Side, VertexAddress};
use graceful_core::labelers::{
    cycle_variant, label_cycle_of, label_one_point_union, label_open_star, label_path_union,
    label_star_of, spoke_targets, LabelerReport,
};
use graceful_core::oracle::{cross_check_enumeration, find_graceful, SearchBudget, SearchStatus};
use graceful_core::verify::{complement_labeling, verify_alpha, verify_graceful, verify_labels, Verdict};

type Check = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn within(started: Instant, limit: Duration, what: &str) -> Result<Duration, String> {
    let elapsed = started.elapsed();
    ensure!(elapsed < limit, "{what} took {elapsed:.2?}, limit {limit:?}");
    Ok(elapsed)
}

/// Every base named by the atlas criterion, with its name.
fn atlas_bases() -> Result<Vec<(String, AlphaLabeledBase)>, String> {
    let mut out = Vec::new();
    let name_err = |name: &str, e: AtlasError| format!("{name}: {e}");
    for n in 2..=50 {
        let name = format!("path:{n}");
        out.push((name.clone(), base_path(n).map_err(|e| name_err(&name, e))?));
    }
    for k in 1..=12 {
        let name = format!("cycle:{}", 4 * k);
        out.push((name.clone(), base_cycle(4 * k).map_err(|e| name_err(&name, e))?));
    }
    for m in 1..=10 {
        for n in 1..=10 {
            let name = format!("kmn:{m},{n}");
            out.push((name.clone(), base_complete_bipartite(m, n).map_err(|e| name_err(&name, e))?));
        }
    }
    for m in 1..=4 {
        for n in 1..=4 {
            // A one-vertex grid has no edges and is outside the operation's domain.
            if m * n < 2 {
                continue;
            }
            let name = format!("grid:{m},{n}");
            out.push((name.clone(), base_grid(m, n).map_err(|e| name_err(&name, e))?));
        }
    }
    Ok(out)
}

fn capped(bases: &[(String, AlphaLabeledBase)]) -> Vec<&(String, AlphaLabeledBase)> {
    bases.iter().filter(|(_, b)| b.q0() <= 30).collect()
}

fn passing(name: &str, r: Result<LabelerReport, impl std::fmt::Display>) -> Result<LabelerReport, String> {
    let report = r.map_err(|e| format!("{name}: {e}"))?;
    let cert = verify_graceful(&report.labeled);
    ensure!(cert.verdict == Verdict::Graceful, "{name}: independent re-verification failed:\n{cert}");
    Ok(report)
}

fn edge_label(lg: &LabeledGraph, (a, b): &(VertexAddress, VertexAddress)) -> u64 {
    lg.label(a).unwrap().abs_diff(lg.label(b).unwrap())
}

fn criterion_1() -> Check {
    let started = Instant::now();
    let bases = atlas_bases()?;
    for (name, base) in &bases {
        let lg = LabeledGraph::new(base.graph().clone(), base.f0().clone()).map_err(|e| e.to_string())?;
        let cert = verify_alpha(&lg, &base.bipartition());
        ensure!(cert.verdict == Verdict::AlphaGraceful, "{name}: {cert}");
    }
    ensure!(
        base_grid(1, 1) == Err(AtlasError::GridTooSmall(1, 1)),
        "grid:1,1 should be rejected (no edges)"
    );
    let elapsed = within(started, Duration::from_secs(5), "atlas")?;
    Ok(format!("{} bases α-verified in {elapsed:.2?}", bases.len()))
}

fn criterion_2(bases: &[&(String, AlphaLabeledBase)]) -> Check {
    let started = Instant::now();
    let mut count = 0;
    for (name, base) in bases {
        for n in 1..=10 {
            let report = passing(name, label_path_union(base, n))?;
            let expected = u64::from(n) * (base.q0() + 1) - 1;
            ensure!(report.labeled.q() == expected, "{name} n={n}: q={} expected {expected}", report.labeled.q());
            count += 1;
        }
    }
    let five_p14 = passing("P(5·P14)", label_path_union(&base_path(14).unwrap(), 5))?;
    ensure!(five_p14.labeled.q() == 69, "P(5·P14) has q={}", five_p14.labeled.q());
    let elapsed = within(started, Duration::from_secs(10), "path unions")?;
    Ok(format!("{count} path unions graceful, P(5·P14) q=69, {elapsed:.2?}"))
}

fn criterion_3(bases: &[&(String, AlphaLabeledBase)]) -> Check {
    let mut count = 0;
    for (name, base) in bases {
        for t in 1..=10 {
            let report = passing(name, label_open_star(base, t))?;
            let expected = u64::from(t) * (base.q0() + 1);
            ensure!(report.labeled.q() == expected, "{name} t={t}: q={}", report.labeled.q());
            count += 1;
        }
    }
    Ok(format!("{count} open stars graceful"))
}

fn criterion_4(bases: &[&(String, AlphaLabeledBase)]) -> Check {
    let mut count = 0;
    for (name, base) in bases {
        for t in 1..=5 {
            for n in 1..=5 {
                let report = passing(name, label_one_point_union(base, t, n))?;
                let expected = u64::from(t * n) * (base.q0() + 1);
                ensure!(report.labeled.q() == expected, "{name} t={t} n={n}: Q={}", report.labeled.q());
                count += 1;
            }
        }
    }

    // The literal spoke center-u_{s,1,1} under the same labels on P2, t=2, n=1.
    let report = passing("P2", label_one_point_union(&base_path(2).unwrap(), 2, 1))?;
    let lg = &report.labeled;
    let edges: Vec<_> = lg
        .graph()
        .edges()
        .iter()
        .map(|&(a, b)| {
            if a.side == Side::Center {
                let branch = b.branch.unwrap();
                (a, VertexAddress::u(1).in_copy(1).in_branch(branch))
            } else {
                (a, b)
            }
        })
        .collect();
    let literal = Graph::new(lg.graph().vertices().to_vec(), edges).map_err(|e| e.to_string())?;
    let labels: Labeling = lg.labels().iter().map(|(v, x)| (*v, *x)).collect();
    let mut multiset: Vec<u64> = literal
        .edges()
        .iter()
        .map(|(a, b)| labels.get(a).unwrap().abs_diff(labels.get(b).unwrap()))
        .collect();
    multiset.sort();
    ensure!(multiset == [1, 1, 3, 3], "literal spoke multiset {multiset:?}");
    ensure!(!verify_labels(&literal, &labels).passed(), "literal spoke unexpectedly graceful");
    Ok(format!("{count} one-point unions graceful; literal spoke on P2 gives {{1,1,3,3}} and fails"))
}

fn criterion_5(bases: &[&(String, AlphaLabeledBase)]) -> Check {
    let variant = cycle_variant().map_err(|e| e.to_string())?;
    let mut count = 0;
    for (name, base) in bases {
        for t in [2, 4, 6, 8] {
            let report = passing(name, label_cycle_of(base, t))?;
            let expected = u64::from(t) * (base.q0() + 1);
            ensure!(report.labeled.q() == expected, "{name} t={t}: q={}", report.labeled.q());
            count += 1;
        }
    }
    Ok(format!("{count} cycles of graphs graceful under calibrated variant [{variant}]"))
}

fn criterion_6(bases: &[(String, AlphaLabeledBase)]) -> Check {
    let mut count = 0;
    for (name, base) in bases.iter().filter(|(_, b)| b.p0() <= 12) {
        let report = passing(name, label_star_of(base))?;
        let (p0, q0) = (base.p0() as u64, base.q0());
        let lg = &report.labeled;
        ensure!(lg.q() == (p0 + 1) * q0 + p0, "{name}: q={}", lg.q());

        let spoke_edges: BTreeSet<_> = report
            .connectors
            .iter()
            .filter(|c| c.role == ConnectorRole::Spoke)
            .map(|c| c.edge)
            .collect();
        ensure!(spoke_edges.len() == p0 as usize, "{name}: {} spokes", spoke_edges.len());
        let copy_labels: BTreeSet<u64> = lg
            .graph()
            .edges()
            .iter()
            .filter(|e| !spoke_edges.contains(e))
            .map(|e| edge_label(lg, e))
            .collect();
        let progression: BTreeSet<u64> = (1..=p0).map(|k| k * (q0 + 1)).collect();
        let expected: BTreeSet<u64> = (1..=lg.q()).filter(|x| !progression.contains(x)).collect();
        ensure!(copy_labels == expected, "{name}: non-spoke labels differ");
        let spoke_labels: Vec<u64> = report.connectors.iter().map(|c| edge_label(lg, &c.edge)).collect();
        ensure!(spoke_labels == spoke_targets(p0 as usize, q0), "{name}: spokes {spoke_labels:?}");
        count += 1;
    }
    Ok(format!("{count} stars of graphs graceful, non-spoke labels = [1,q] minus multiples of q0+1"))
}

fn cycle_graph(n: usize) -> Graph {
    Topology::cycle(n).to_graph().unwrap()
}

/// Distinct corpus compound graphs, plus the corpus bases themselves.
fn corpus_graphs() -> Result<Vec<(String, Graph)>, String> {
    let mut out = Vec::new();
    for d in default_bases() {
        let base = d.resolve().map_err(|e| e.to_string())?;
        out.push((d.to_string(), base.graph().clone()));
    }
    for entry in default_grid() {
        let base = entry.base.resolve().map_err(|e| e.to_string())?;
        let compound = build(&base, &entry.spec).map_err(|e| e.to_string())?;
        out.push((format!("{} over {}", entry.spec, entry.base), compound.graph));
    }
    Ok(out)
}

fn criterion_7(graphs: &[(String, Graph)]) -> Check {
    let budget = SearchBudget::nodes(1_000_000);
    let mut report = Vec::new();
    for (n, want) in [
        (4, SearchStatus::Found),
        (7, SearchStatus::Found),
        (8, SearchStatus::Found),
        (11, SearchStatus::Found),
        (12, SearchStatus::Found),
        (5, SearchStatus::ExhaustedNone),
        (6, SearchStatus::ExhaustedNone),
    ] {
        let out = find_graceful(&cycle_graph(n), budget);
        ensure!(out.status == want, "C{n}: {} after {} nodes", out.status, out.nodes_expanded);
        report.push(format!("C{n}:{}", out.nodes_expanded));
    }
    let mut agreed = 0;
    for (name, g) in graphs.iter().filter(|(_, g)| g.q() <= 8) {
        let naive = cross_check_enumeration(g).map_err(|e| e.to_string())?;
        let fast = find_graceful(g, SearchBudget::default());
        ensure!(naive.status == fast.status, "{name}: enumeration {} vs search {}", naive.status, fast.status);
        agreed += 1;
    }
    Ok(format!("cycles ok (nodes {}); enumeration agrees on {agreed} corpus graphs with q<=8", report.join(" ")))
}

fn random_labeling(g: &Graph, rng: &mut StdRng) -> Labeling {
    let q = g.q() as u64;
    let injective = rng.random_bool(0.5) && g.p() as u64 <= q + 1;
    if injective {
        let picks = rand::seq::index::sample(rng, q as usize + 1, g.p());
        g.vertices().iter().zip(picks).map(|(v, x)| (*v, x as u64)).collect()
    } else {
        g.vertices().iter().map(|v| (*v, rng.random_range(0..=q))).collect()
    }
}

/// Single-vertex changes that keep every induced edge label: a leaf
/// reflected across its only neighbor. If the reflected value is unused the
/// result is a different valid graceful labeling and must be accepted.
fn is_leaf_reflection(doc: &LabeledGraphDocument, k: usize, value: u64) -> bool {
    let v = doc.vertices[k].0;
    let labels: HashMap<_, _> = doc.vertices.iter().copied().collect();
    let neighbors: Vec<u64> = doc
        .edges
        .iter()
        .filter_map(|r| match r.edge {
            (a, b) if a == v => Some(labels[&b]),
            (a, b) if b == v => Some(labels[&a]),
            _ => None,
        })
        .collect();
    let [y] = neighbors[..] else { return false };
    2 * y >= doc.vertices[k].1
        && 2 * y - doc.vertices[k].1 == value
        && !doc.vertices.iter().any(|(_, x)| *x == value)
}

fn criterion_8(graphs: &[(String, Graph)]) -> Check {
    let mut rng = StdRng::seed_from_u64(0x9ace);
    let mut tried = 0usize;
    for (name, g) in graphs {
        for _ in 0..1000 {
            let lg = LabeledGraph::new(g.clone(), random_labeling(g, &mut rng)).map_err(|e| e.to_string())?;
            let comp = complement_labeling(&lg);
            ensure!(complement_labeling(&comp) == lg, "{name}: complement is not an involution");
            ensure!(
                verify_graceful(&lg).passed() == verify_graceful(&comp).passed(),
                "{name}: complement changed the verdict"
            );
            tried += 1;
        }
    }

    // Every single-label corruption of every corpus document: small documents
    // exhaustively, larger ones at every vertex over a fixed sample of values.
    let (mut corruptions, mut reflections, mut graceful_docs) = (0usize, 0usize, 0usize);
    for entry in default_grid() {
        let doc = entry.document()?;
        let name = entry.file_name();
        let comp = complement_labeling(&LabeledGraph::new(doc.graph().unwrap(), doc.labeling()).unwrap());
        ensure!(verify_graceful(&comp).passed(), "{name}: complement of a graceful labeling fails");
        graceful_docs += 1;

        let q = doc.q() as u64;
        for k in 0..doc.vertices.len() {
            let x = doc.vertices[k].1;
            let values: Vec<u64> = if q <= 40 {
                (0..=q).filter(|&y| y != x).collect()
            } else {
                let mut s: BTreeSet<u64> = [0, q, x.saturating_sub(1), (x + 1).min(q), q / 2]
                    .into_iter()
                    .chain(doc.vertices.iter().step_by(7).map(|(_, y)| *y))
                    .collect();
                s.extend((0..4).map(|_| rng.random_range(0..=q)));
                s.into_iter().filter(|&y| y != x).collect()
            };
            for value in values {
                let mut bad = doc.clone();
                bad.vertices[k].1 = value;
                let check = bad.check_labels().map_err(|e| e.to_string())?;
                if is_leaf_reflection(&doc, k, value) {
                    ensure!(check.passed(), "{name}: valid leaf reflection rejected");
                    reflections += 1;
                } else {
                    ensure!(
                        check.verdict() == Verdict::Fail,
                        "{name}: vertex {} set to {value} still passes",
                        doc.vertices[k].0
                    );
                }
                corruptions += 1;
            }
        }
    }
    Ok(format!(
        "{tried} random labelings; {graceful_docs} documents, {corruptions} single-label corruptions \
         all FAIL except {reflections} leaf reflections that are themselves graceful"
    ))
}

fn criterion_9(suite_started: Instant) -> Check {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let out = Command::new(env!("CARGO_BIN_EXE_graceful"))
        .args(["corpus", "--out"])
        .arg(dir.path())
        .output()
        .map_err(|e| e.to_string())?;
    ensure!(
        out.status.code() == Some(0),
        "corpus exited {:?}: {}",
        out.status.code(),
        String::from_utf8_lossy(&out.stderr)
    );
    let summary = fs::read_to_string(dir.path().join("summary.tsv")).map_err(|e| e.to_string())?;
    let rows = summary.lines().skip(1).count();
    ensure!(rows == default_grid().len(), "summary has {rows} rows");
    ensure!(summary.lines().skip(1).all(|l| l.contains("\tGRACEFUL\t")), "summary lists a failure");

    let mut docs = 0;
    for entry in fs::read_dir(dir.path()).map_err(|e| e.to_string())? {
        let path = entry.map_err(|e| e.to_string())?.path();
        if path.extension().is_none_or(|e| e != "gdoc") {
            continue;
        }
        let text = fs::read_to_string(&path).map_err(|e| e.to_string())?;
        let doc = LabeledGraphDocument::parse(&text).map_err(|e| format!("{}: {e}", path.display()))?;
        ensure!(doc.to_string() == text, "{}: does not round-trip", path.display());
        let check = doc.check().map_err(|e| e.to_string())?;
        ensure!(check.verdict() == Verdict::Graceful, "{}: {check}", path.display());
        docs += 1;
    }
    ensure!(docs == rows, "{docs} documents for {rows} rows");
    let total = within(suite_started, Duration::from_secs(120), "acceptance suite")?;
    Ok(format!("corpus exit 0; {docs} documents round-trip and re-verify; suite wall clock {total:.2?}"))
}

fn main() {
    let started = Instant::now();
    let mut failed = 0;
    let mut lap = Instant::now();
    let mut report = |n: u32, title: &str, result: Check| {
        let took = lap.elapsed();
        lap = Instant::now();
        match result {
            Ok(detail) => println!("criterion {n} ({title}): PASS - {detail} [{took:.2?}]"),
            Err(why) => {
                failed += 1;
                println!("criterion {n} ({title}): FAIL - {why}");
            }
        }
    };

    let bases = atlas_bases();
    report(1, "atlas soundness", criterion_1());
    match &bases {
        Ok(bases) => {
            let small = capped(bases);
            report(2, "path union", criterion_2(&small));
            report(3, "open star", criterion_3(&small));
            report(4, "one-point union of paths", criterion_4(&small));
            report(5, "cycle of graphs", criterion_5(&small));
            report(6, "star of a graph", criterion_6(bases));
        }
        Err(e) => {
            for (n, title) in [(2, "path union"), (3, "open star"), (4, "one-point union of paths"), (5, "cycle of graphs"), (6, "star of a graph")] {
                report(n, title, Err(format!("atlas unavailable: {e}")));
            }
        }
    }
    match corpus_graphs() {
        Ok(graphs) => {
            report(7, "oracle ground truth", criterion_7(&graphs));
            report(8, "verifier properties", criterion_8(&graphs));
        }
        Err(e) => {
            report(7, "oracle ground truth", Err(e.clone()));
            report(8, "verifier properties", Err(e));
        }
    }
    report(9, "end to end", criterion_9(started));
    if failed > 0 {
        std::process::exit(1);
    }
}
