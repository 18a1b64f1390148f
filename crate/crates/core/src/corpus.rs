//! The standard grid of (family, base, parameters) instances, generated and
//! verified in parallel.

use std::fmt::Write as _;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use rayon::prelude::*;

use crate::construct::{ConstructionSpec, Family};
use crate::descriptor::BaseDescriptor;
use crate::document::LabeledGraphDocument;
use crate::labelers::label;
use crate::verify::Verdict;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CorpusEntry {
    pub base: BaseDescriptor,
    pub spec: ConstructionSpec,
}

impl CorpusEntry {
    pub fn file_name(&self) -> String {
        let mut name = format!(
            "{}__{}",
            self.spec.family.as_str().to_ascii_lowercase(),
            self.base.slug()
        );
        if let Some(t) = self.spec.t {
            write!(name, "__t{t}").unwrap();
        }
        if let Some(n) = self.spec.n {
            write!(name, "__n{n}").unwrap();
        }
        name + ".gdoc"
    }

    /// Labels and verifies the instance, packaged as a document.
    pub fn document(&self) -> Result<LabeledGraphDocument, String> {
        let base = self.base.resolve().map_err(|e| e.to_string())?;
        let report = label(&base, &self.spec).map_err(|e| e.to_string())?;
        Ok(LabeledGraphDocument::from_report(&report, self.base.clone()))
    }
}

pub fn default_bases() -> Vec<BaseDescriptor> {
    use BaseDescriptor::*;
    vec![
        Path(2),
        Path(4),
        Path(14),
        Cycle(4),
        Cycle(8),
        CompleteBipartite(1, 1),
        CompleteBipartite(2, 2),
        CompleteBipartite(1, 3),
        CompleteBipartite(4, 3),
        Grid(2, 2),
        Grid(2, 3),
        Grid(3, 3),
    ]
}

pub fn default_specs() -> Vec<ConstructionSpec> {
    let mut specs = Vec::new();
    for family in Family::ALL {
        match family {
            Family::PathUnion => {
                specs.extend([1, 2, 3, 5].map(ConstructionSpec::path_union));
            }
            Family::OpenStar => specs.extend((1..=4).map(ConstructionSpec::open_star)),
            Family::OnePointUnionPath => {
                for t in 1..=3 {
                    specs.extend((1..=3).map(|n| ConstructionSpec::one_point_union_path(t, n)));
                }
            }
            Family::CycleOf => specs.extend([2, 4, 6].map(ConstructionSpec::cycle_of)),
            Family::StarOf => specs.push(ConstructionSpec::star_of()),
        }
    }
    specs
}

/// Every default base under every default spec.
pub fn default_grid() -> Vec<CorpusEntry> {
    let specs = default_specs();
    default_bases()
        .into_iter()
        .flat_map(|base| {
            specs.iter().map(move |&spec| CorpusEntry {
                base: base.clone(),
                spec,
            })
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CorpusRow {
    pub entry: CorpusEntry,
    pub q: Option<u64>,
    pub verdict: Verdict,
    pub file: Option<PathBuf>,
    pub error: Option<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CorpusSummary {
    pub rows: Vec<CorpusRow>,
}

impl CorpusSummary {
    pub fn failures(&self) -> impl Iterator<Item = &CorpusRow> {
        self.rows.iter().filter(|r| r.verdict == Verdict::Fail)
    }

    pub fn all_graceful(&self) -> bool {
        self.failures().next().is_none()
    }

    pub fn to_tsv(&self) -> String {
        let mut out = String::from("family\tbase\tt\tn\tq\tverdict\tfile\n");
        let opt = |x: Option<u32>| x.map_or_else(|| "-".into(), |v: u32| v.to_string());
        for r in &self.rows {
            let file = r
                .file
                .as_ref()
                .and_then(|p| p.file_name())
                .map_or_else(|| "-".into(), |f| f.to_string_lossy().into_owned());
            writeln!(
                out,
                "{}\t{}\t{}\t{}\t{}\t{}\t{}",
                r.entry.spec.family,
                r.entry.base,
                opt(r.entry.spec.t),
                opt(r.entry.spec.n),
                r.q.map_or_else(|| "-".into(), |q| q.to_string()),
                r.verdict,
                file
            )
            .unwrap();
        }
        out
    }
}

fn run_one(entry: &CorpusEntry, dir: &Path) -> io::Result<CorpusRow> {
    let doc = match entry.document() {
        Ok(doc) => doc,
        Err(error) => {
            return Ok(CorpusRow {
                entry: entry.clone(),
                q: None,
                verdict: Verdict::Fail,
                file: None,
                error: Some(error),
            })
        }
    };
    // Re-check from the serialized form, exactly as a reader would.
    let text = doc.to_string();
    let (verdict, error) = match LabeledGraphDocument::parse(&text).map(|d| d.check()) {
        Ok(Ok(check)) => (check.verdict(), (!check.passed()).then(|| check.to_string())),
        Ok(Err(e)) => (Verdict::Fail, Some(e.to_string())),
        Err(e) => (Verdict::Fail, Some(e.to_string())),
    };
    let path = dir.join(entry.file_name());
    fs::write(&path, text)?;
    Ok(CorpusRow {
        entry: entry.clone(),
        q: Some(doc.q() as u64),
        verdict,
        file: Some(path),
        error,
    })
}

/// Writes one document per entry plus `summary.tsv` into `dir`.
pub fn generate(entries: &[CorpusEntry], dir: &Path) -> io::Result<CorpusSummary> {
    fs::create_dir_all(dir)?;
    let rows = entries
        .par_iter()
        .map(|e| run_one(e, dir))
        .collect::<io::Result<Vec<_>>>()?;
    let summary = CorpusSummary { rows };
    fs::write(dir.join("summary.tsv"), summary.to_tsv())?;
    Ok(summary)
}
