//! Star of a graph `G*`: a central copy plus one outer copy per base vertex.
//!
//! Copy edges realize every label in `[1, q]` except the multiples of
//! `q0 + 1`; the spokes supply those, assigned to outer copies in the order
//! largest, smallest, second largest, second smallest, ...

use std::collections::HashMap;

use super::{finish, CopyLabels, LabelerError, LabelerReport};
use crate::atlas::AlphaLabeledBase;
use crate::construct::{build_star_of_with, ConstructionError};
use crate::graph::{Edge, VertexAddress};

fn copy_labels(base: &AlphaLabeledBase) -> Vec<CopyLabels> {
    let (m, r) = (base.m(), base.r());
    let p0 = base.p0();
    let q0 = base.q0() as i64;
    let q = (p0 as i64 + 1) * q0 + p0 as i64;
    let (fu, fv) = (|i| base.fu(i), |j| base.fv(j));

    let central = CopyLabels {
        u: (1..=m).map(fu).collect(),
        v: (1..=r).map(|j| q - fv(r) + fv(j)).collect(),
    };
    let first = CopyLabels {
        u: (1..=m).map(|i| central.v[0] - 1 - fu(m) + fu(i)).collect(),
        v: (1..=r).map(fv).collect(),
    };
    let mut copies = vec![central, first];
    for l in 2..=p0 {
        let step = q0 + 1;
        let next = if l % 2 == 0 {
            copies[l - 2].shifted(step, -step)
        } else {
            copies[l - 2].shifted(-step, step)
        };
        copies.push(next);
    }
    copies
}

/// Spoke label assigned to each outer copy `1..=p0`.
pub fn spoke_targets(p0: usize, q0: u64) -> Vec<u64> {
    (1..=p0 as u64)
        .map(|l| {
            let k = l.div_ceil(2);
            let multiple = if l % 2 == 1 { p0 as u64 - k + 1 } else { k };
            multiple * (q0 + 1)
        })
        .collect()
}

fn raw_labels(base: &AlphaLabeledBase) -> HashMap<VertexAddress, i64> {
    let mut raw = HashMap::new();
    for (l, copy) in copy_labels(base).iter().enumerate() {
        copy.write(base, None, l as u32, &mut raw);
    }
    raw
}

/// One spoke per outer copy, each the lexicographically smallest
/// (central vertex, outer vertex) pair whose label difference is the copy's
/// assigned target.
pub fn star_of_spokes(base: &AlphaLabeledBase) -> Result<Vec<Edge>, ConstructionError> {
    if base.p0() < 2 {
        return Err(ConstructionError::BaseTooSmall);
    }
    let raw = raw_labels(base);
    let mut base_vertices: Vec<VertexAddress> = base.graph().vertices().to_vec();
    base_vertices.sort();

    let targets = spoke_targets(base.p0(), base.q0());
    let mut spokes = Vec::with_capacity(targets.len());
    for (k, &target) in targets.iter().enumerate() {
        let copy = k as u32 + 1;
        let outer: HashMap<i64, VertexAddress> = base_vertices
            .iter()
            .map(|v| (raw[&v.in_copy(copy)], v.in_copy(copy)))
            .collect();
        let d = target as i64;
        let pair = base_vertices.iter().find_map(|v| {
            let x = v.in_copy(0);
            let fx = raw[&x];
            [fx - d, fx + d]
                .iter()
                .filter_map(|y| outer.get(y).copied())
                .min()
                .map(|y| (x, y))
        });
        match pair {
            Some(edge) => spokes.push(edge),
            None => return Err(ConstructionError::UnmatchedSpoke { copy, label: target }),
        }
    }
    Ok(spokes)
}

/// Labels `G*`.
pub fn label_star_of(base: &AlphaLabeledBase) -> Result<LabelerReport, LabelerError> {
    let spokes = star_of_spokes(base)?;
    let compound = build_star_of_with(base, &spokes)?;
    finish(
        compound,
        &raw_labels(base),
        "central copy 0; spokes realize multiples of q0+1 largest/smallest alternating, lexicographic tie-break".into(),
    )
}
