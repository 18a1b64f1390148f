//! Closed-form graceful labelings of the five compound families.
//!
//! Each labeler evaluates its formulas over signed integers, builds the
//! compound, and runs the verifier. A labeling that fails verification is an
//! error carrying the certificate; it is never returned as a success.

mod cycle;
mod star;

use std::collections::HashMap;

use thiserror::Error;

use crate::atlas::AlphaLabeledBase;
use crate::construct::{
    build_one_point_union_path, build_open_star, build_path_union, Compound, ConstructionError,
    ConstructionSpec, Connector, Family,
};
use crate::graph::{GraphError, LabeledGraph, Labeling, VertexAddress};
use crate::verify::{verify_graceful, Certificate};

pub use cycle::{
    calibrate, calibration_set, cycle_variant, label_cycle_of_with, variant_family, CalibrationError,
    CycleVariant, Step,
};
pub use star::{spoke_targets, star_of_spokes};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LabelerError {
    #[error(transparent)]
    Construction(#[from] ConstructionError),
    #[error("formula gives vertex {vertex} label {value}, outside [0, {q}]")]
    LabelOutOfRange {
        vertex: VertexAddress,
        value: i64,
        q: u64,
    },
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("{spec} labeling ({variant}) failed verification:\n{certificate}")]
    VerificationFailed {
        spec: ConstructionSpec,
        variant: String,
        certificate: Certificate,
    },
    #[error(transparent)]
    Calibration(#[from] CalibrationError),
}

/// A verified labeling plus the audit trail of index choices behind it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabelerReport {
    pub labeled: LabeledGraph,
    pub spec: ConstructionSpec,
    pub connectors: Vec<Connector>,
    pub formula_variant: String,
    pub certificate: Certificate,
}

/// Labels of one base copy: `u[i-1]` for `u_i`, `v[j-1]` for `v_j`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub(crate) struct CopyLabels {
    pub u: Vec<i64>,
    pub v: Vec<i64>,
}

impl CopyLabels {
    fn shifted(&self, du: i64, dv: i64) -> Self {
        Self {
            u: self.u.iter().map(|x| x + du).collect(),
            v: self.v.iter().map(|x| x + dv).collect(),
        }
    }

    fn write(
        &self,
        base: &AlphaLabeledBase,
        branch: Option<u32>,
        copy: u32,
        out: &mut HashMap<VertexAddress, i64>,
    ) {
        let place = |a: &VertexAddress| VertexAddress {
            branch,
            ..a.in_copy(copy)
        };
        for (a, &x) in base.u_side().iter().zip(&self.u) {
            out.insert(place(a), x);
        }
        for (a, &x) in base.v_side().iter().zip(&self.v) {
            out.insert(place(a), x);
        }
    }
}

/// Runs the verifier over formula output and packages the report.
pub(crate) fn finish(
    compound: Compound,
    raw: &HashMap<VertexAddress, i64>,
    formula_variant: String,
) -> Result<LabelerReport, LabelerError> {
    let q = compound.graph.q() as u64;
    let mut labels = Labeling::new();
    for v in compound.graph.vertices() {
        let value = *raw.get(v).ok_or(GraphError::Unlabeled(*v))?;
        match u64::try_from(value) {
            Ok(x) if x <= q => {
                labels.insert(*v, x);
            }
            _ => {
                return Err(LabelerError::LabelOutOfRange {
                    vertex: *v,
                    value,
                    q,
                })
            }
        }
    }
    let labeled = LabeledGraph::new(compound.graph, labels)?;
    let certificate = verify_graceful(&labeled);
    if !certificate.passed() {
        return Err(LabelerError::VerificationFailed {
            spec: compound.spec,
            variant: formula_variant,
            certificate,
        });
    }
    Ok(LabelerReport {
        labeled,
        spec: compound.spec,
        connectors: compound.connectors,
        formula_variant,
        certificate,
    })
}

fn sign(l: u32) -> i64 {
    if l.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// Copy labels of a path union of `n` copies, `q = n(q0 + 1) - 1`.
pub(crate) fn path_union_copies(base: &AlphaLabeledBase, n: u32) -> Vec<CopyLabels> {
    let (m, r) = (base.m(), base.r());
    let q0 = base.q0() as i64;
    let q = i64::from(n) * (q0 + 1) - 1;
    let mut copies: Vec<CopyLabels> = Vec::with_capacity(n as usize);
    copies.push(CopyLabels {
        u: (1..=m).map(|i| base.fu(i)).collect(),
        v: (1..=r).map(|j| q - q0 + base.fv(j)).collect(),
    });
    for _ in 2..=n {
        let prev = copies.last().expect("first copy present");
        let next = CopyLabels {
            u: (1..=m).map(|i| prev.u[m - 1] + base.fu(i) + 1).collect(),
            v: (1..=r).map(|j| prev.v[0] + base.fv(j) - q0 - 1).collect(),
        };
        copies.push(next);
    }
    copies
}

/// Path union `P(n·G)`.
pub fn label_path_union(base: &AlphaLabeledBase, n: u32) -> Result<LabelerReport, LabelerError> {
    let compound = build_path_union(base, n)?;
    let mut raw = HashMap::new();
    for (l, copy) in path_union_copies(base, n).iter().enumerate() {
        copy.write(base, None, l as u32 + 1, &mut raw);
    }
    finish(compound, &raw, "connector v_{l,1}-u_{l+1,1}".into())
}

/// Open star `S(t·G)`: center labeled 0, copies alternate around it.
pub fn label_open_star(base: &AlphaLabeledBase, t: u32) -> Result<LabelerReport, LabelerError> {
    let compound = build_open_star(base, t)?;
    let (m, r) = (base.m(), base.r());
    let q0 = base.q0() as i64;
    let q = i64::from(t) * (q0 + 1);

    let mut copies = vec![CopyLabels {
        u: (1..=m).map(|i| base.fu(i) + 1).collect(),
        v: (1..=r).map(|j| q - q0 + base.fv(j)).collect(),
    }];
    if t >= 2 {
        let shift = q - q0 - 1;
        copies.push(copies[0].shifted(shift, -shift));
    }
    for l in 3..=t {
        let step = sign(l) * (q0 + 1);
        copies.push(copies[l as usize - 3].shifted(-step, step));
    }

    let mut raw = HashMap::from([(VertexAddress::center(), 0)]);
    for (l, copy) in copies.iter().enumerate() {
        copy.write(base, None, l as u32 + 1, &mut raw);
    }
    finish(
        compound,
        &raw,
        "spoke center-v_{l,r}; vertex labels in [0,q]".into(),
    )
}

/// One-point union of `t` path unions of `n` copies each.
pub fn label_one_point_union(
    base: &AlphaLabeledBase,
    t: u32,
    n: u32,
) -> Result<LabelerReport, LabelerError> {
    let compound = build_one_point_union_path(base, t, n)?;
    let q0 = base.q0() as i64;
    let q = i64::from(n) * (q0 + 1) - 1;
    let big_q = i64::from(t) * i64::from(n) * (q0 + 1);

    // One branch labeled as a path union, then lifted to all branches.
    let branch_one: Vec<CopyLabels> = path_union_copies(base, n)
        .iter()
        .map(|c| c.shifted(1, big_q - q))
        .collect();
    let mut branches = vec![branch_one];
    if t >= 2 {
        let shift = big_q - q - 1;
        branches.push(branches[0].iter().map(|c| c.shifted(shift, -shift)).collect());
    }
    for s in 3..=t {
        let step = sign(s) * (q + 1);
        let lifted = branches[s as usize - 3]
            .iter()
            .map(|c| c.shifted(-step, step))
            .collect();
        branches.push(lifted);
    }

    let mut raw = HashMap::from([(VertexAddress::center(), 0)]);
    for (s, branch) in branches.iter().enumerate() {
        for (l, copy) in branch.iter().enumerate() {
            copy.write(base, Some(s as u32 + 1), l as u32 + 1, &mut raw);
        }
    }
    finish(
        compound,
        &raw,
        "spoke center-v_{s,1,r}; connector v_{s,l,1}-u_{s,l+1,1}".into(),
    )
}

pub use cycle::label_cycle_of;
pub use star::label_star_of;

/// Labels any family from its spec.
pub fn label(base: &AlphaLabeledBase, spec: &ConstructionSpec) -> Result<LabelerReport, LabelerError> {
    spec.validate()?;
    let t = spec.t.unwrap_or_default();
    let n = spec.n.unwrap_or_default();
    match spec.family {
        Family::PathUnion => label_path_union(base, n),
        Family::OpenStar => label_open_star(base, t),
        Family::OnePointUnionPath => label_one_point_union(base, t, n),
        Family::CycleOf => label_cycle_of(base, t),
        Family::StarOf => label_star_of(base),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::atlas::{base_complete_bipartite, base_path};

    fn labels_by_copy(report: &LabelerReport, copy: u32) -> (Vec<u64>, Vec<u64>) {
        let lg = &report.labeled;
        let mut u = Vec::new();
        let mut v = Vec::new();
        for a in lg.graph().vertices().iter().filter(|a| a.copy == Some(copy)) {
            let x = lg.label(a).unwrap();
            match a.side {
                crate::graph::Side::U => u.push(x),
                _ => v.push(x),
            }
        }
        u.sort();
        v.sort();
        (u, v)
    }

    fn sorted_edge_labels(report: &LabelerReport) -> Vec<u64> {
        let mut el = report.labeled.edge_labels();
        el.sort();
        el
    }

    #[test]
    fn path_union_single_copy_is_identity() {
        let base = base_complete_bipartite(3, 2).unwrap();
        let report = label_path_union(&base, 1).unwrap();
        for a in base.graph().vertices() {
            assert_eq!(report.labeled.label(&a.in_copy(1)), Some(base.label(a)));
        }
    }

    #[test]
    fn path_union_small_examples() {
        let p2 = base_path(2).unwrap();
        let report = label_path_union(&p2, 2).unwrap();
        assert_eq!(report.labeled.values(), &[0, 3, 1, 2]);
        assert_eq!(report.labeled.edge_labels(), vec![3, 1, 2]);

        let k22 = base_complete_bipartite(2, 2).unwrap();
        let report = label_path_union(&k22, 2).unwrap();
        assert_eq!(labels_by_copy(&report, 1), (vec![0, 1], vec![7, 9]));
        assert_eq!(labels_by_copy(&report, 2), (vec![2, 3], vec![4, 6]));
        assert_eq!(sorted_edge_labels(&report), (1..=9).collect::<Vec<_>>());
    }

    #[test]
    fn open_star_small_examples() {
        let p2 = base_path(2).unwrap();
        let report = label_open_star(&p2, 1).unwrap();
        assert_eq!(report.labeled.values(), &[0, 1, 2]);
        assert_eq!(sorted_edge_labels(&report), vec![1, 2]);

        let report = label_open_star(&p2, 2).unwrap();
        assert_eq!(report.labeled.values(), &[0, 1, 4, 3, 2]);
        let lg = &report.labeled;
        let spokes: Vec<u64> = report
            .connectors
            .iter()
            .map(|c| lg.label(&c.edge.0).unwrap().abs_diff(lg.label(&c.edge.1).unwrap()))
            .collect();
        assert_eq!(spokes, vec![4, 2]);

        let k22 = base_complete_bipartite(2, 2).unwrap();
        let report = label_open_star(&k22, 2).unwrap();
        let lg = &report.labeled;
        let spokes: Vec<u64> = report
            .connectors
            .iter()
            .map(|c| lg.label(&c.edge.0).unwrap().abs_diff(lg.label(&c.edge.1).unwrap()))
            .collect();
        assert_eq!(spokes, vec![10, 5]);
    }

    #[test]
    fn one_point_union_small_examples() {
        let p2 = base_path(2).unwrap();
        let report = label_one_point_union(&p2, 2, 1).unwrap();
        assert_eq!(report.labeled.values(), &[0, 1, 4, 3, 2]);
        assert_eq!(sorted_edge_labels(&report), vec![1, 2, 3, 4]);

        let k22 = base_complete_bipartite(2, 2).unwrap();
        let report = label_one_point_union(&k22, 2, 2).unwrap();
        assert_eq!(sorted_edge_labels(&report), (1..=20).collect::<Vec<_>>());
    }

    #[test]
    fn literal_one_point_spoke_duplicates_labels() {
        // Spokes center-u_{s,1,1} under the same vertex labels: {1,3,3,1}.
        let p2 = base_path(2).unwrap();
        let report = label_one_point_union(&p2, 2, 1).unwrap();
        let lg = &report.labeled;
        let mut labels: Vec<u64> = lg
            .graph()
            .edges()
            .iter()
            .filter(|(a, _)| a.side != crate::graph::Side::Center)
            .map(|(a, b)| lg.label(a).unwrap().abs_diff(lg.label(b).unwrap()))
            .collect();
        for s in 1..=2 {
            let u = VertexAddress::u(1).in_copy(1).in_branch(s);
            labels.push(lg.label(&u).unwrap());
        }
        labels.sort();
        assert_eq!(labels, vec![1, 1, 3, 3]);
    }

    #[test]
    fn out_of_range_labels_are_errors() {
        let p2 = base_path(2).unwrap();
        let compound = build_path_union(&p2, 1).unwrap();
        let raw: HashMap<_, _> = compound
            .graph
            .vertices()
            .iter()
            .map(|v| (*v, -1))
            .collect();
        assert!(matches!(
            finish(compound, &raw, String::new()),
            Err(LabelerError::LabelOutOfRange { value: -1, .. })
        ));
    }

    #[test]
    fn failing_formula_carries_certificate() {
        let p2 = base_path(2).unwrap();
        let compound = build_path_union(&p2, 2).unwrap();
        let raw: HashMap<_, _> = compound
            .graph
            .vertices()
            .iter()
            .enumerate()
            .map(|(k, v)| (*v, k as i64))
            .collect();
        let err = finish(compound, &raw, "identity".into()).unwrap_err();
        let LabelerError::VerificationFailed { certificate, .. } = err else {
            panic!("expected verification failure");
        };
        assert!(!certificate.violations.is_empty());
    }
}
