//! Cycle of graphs `C(t·G)` for even `t`.
//!
//! The first `t/2` copies are labeled like a path union running down from
//! `q`. The second half mirrors it inside the remaining middle band; how the
//! mirrored copies are anchored and linked is one choice out of a small
//! enumerated family. The choice is fixed once per process by verifying every
//! candidate on a calibration set and keeping the first that passes
//! everywhere.

use std::collections::HashMap;
use std::fmt;
use std::sync::OnceLock;

use thiserror::Error;

use super::{finish, CopyLabels, LabelerError, LabelerReport};
use crate::atlas::{base_complete_bipartite, base_path, AlphaLabeledBase};
use crate::construct::{build_cycle_of_with, ConstructionSpec, CycleLinks, End, LinkEnd};

/// Direction a second-half block moves from one copy to the next.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Step {
    Down,
    Up,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct CycleVariant {
    /// `f(u_{t/2+1,i}) = f(v_{t/2,1}) - gap - f0(u_m) + f0(u_i)`.
    pub mid_u_gap: i64,
    /// Which `u` of copy `t/2` the first mirrored `v` block starts above.
    pub mid_v_anchor: End,
    pub u_step: Step,
    pub v_step: Step,
    pub links: CycleLinks,
}

impl fmt::Display for CycleVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let anchor = match self.mid_v_anchor {
            End::First => "u_{t/2,1}",
            End::Last => "u_{t/2,m}",
        };
        write!(
            f,
            "mirror gap {}, v anchor {anchor}, u blocks {:?}, v blocks {:?}; {}",
            self.mid_u_gap, self.u_step, self.v_step, self.links
        )
    }
}

/// Every candidate, in calibration order.
pub fn variant_family() -> Vec<CycleVariant> {
    let midpoints = [
        (LinkEnd::V_FIRST, LinkEnd::V_FIRST),
        (LinkEnd::U_LAST, LinkEnd::U_LAST),
        (LinkEnd::V_FIRST, LinkEnd::U_LAST),
        (LinkEnd::U_LAST, LinkEnd::V_FIRST),
    ];
    let descending = [
        (LinkEnd::U_FIRST, LinkEnd::V_FIRST),
        (LinkEnd::V_FIRST, LinkEnd::U_FIRST),
        (LinkEnd::U_LAST, LinkEnd::V_LAST),
        (LinkEnd::U_FIRST, LinkEnd::V_LAST),
    ];
    let closing = [
        (LinkEnd::U_FIRST, LinkEnd::U_FIRST),
        (LinkEnd::V_FIRST, LinkEnd::U_FIRST),
        (LinkEnd::U_FIRST, LinkEnd::V_FIRST),
        (LinkEnd::U_LAST, LinkEnd::U_FIRST),
    ];
    let mut out = Vec::with_capacity(1024);
    for mid_u_gap in [2, 1] {
        for mid_v_anchor in [End::Last, End::First] {
            for u_step in [Step::Down, Step::Up] {
                for v_step in [Step::Up, Step::Down] {
                    for &midpoint in &midpoints {
                        for &desc in &descending {
                            for &close in &closing {
                                out.push(CycleVariant {
                                    mid_u_gap,
                                    mid_v_anchor,
                                    u_step,
                                    v_step,
                                    links: CycleLinks {
                                        midpoint,
                                        descending: desc,
                                        closing: close,
                                    },
                                });
                            }
                        }
                    }
                }
            }
        }
    }
    out
}

fn copy_labels(base: &AlphaLabeledBase, t: u32, variant: &CycleVariant) -> Vec<CopyLabels> {
    let (m, r) = (base.m(), base.r());
    let q0 = base.q0() as i64;
    let q = i64::from(t) * (q0 + 1);
    let half = (t / 2) as usize;
    let (fu, fv) = (|i| base.fu(i), |j| base.fv(j));

    let mut copies = vec![CopyLabels {
        u: (1..=m).map(fu).collect(),
        v: (1..=r).map(|j| q - fv(r) + fv(j)).collect(),
    }];
    for _ in 2..=half {
        let prev = copies.last().expect("nonempty");
        let next = CopyLabels {
            u: (1..=m).map(|i| prev.u[m - 1] + 1 + fu(i)).collect(),
            v: (1..=r).map(|j| prev.v[0] - 1 - fv(r) + fv(j)).collect(),
        };
        copies.push(next);
    }

    let last = &copies[half - 1];
    let anchor = match variant.mid_v_anchor {
        End::First => last.u[0],
        End::Last => last.u[m - 1],
    };
    let mirror = CopyLabels {
        u: (1..=m)
            .map(|i| last.v[0] - variant.mid_u_gap - fu(m) + fu(i))
            .collect(),
        v: (1..=r).map(|j| anchor + 1 - fv(1) + fv(j)).collect(),
    };
    copies.push(mirror);
    for _ in half + 2..=t as usize {
        let prev = copies.last().expect("nonempty");
        let u = match variant.u_step {
            Step::Down => (1..=m).map(|i| prev.u[0] - 1 - fu(m) + fu(i)).collect(),
            Step::Up => (1..=m).map(|i| prev.u[m - 1] + 1 - fu(1) + fu(i)).collect(),
        };
        let v = match variant.v_step {
            Step::Up => (1..=r).map(|j| prev.v[r - 1] + 1 - fv(1) + fv(j)).collect(),
            Step::Down => (1..=r).map(|j| prev.v[0] - 1 - fv(r) + fv(j)).collect(),
        };
        copies.push(CopyLabels { u, v });
    }
    copies
}

/// Labels `C(t·G)` under an explicit variant.
pub fn label_cycle_of_with(
    base: &AlphaLabeledBase,
    t: u32,
    variant: &CycleVariant,
) -> Result<LabelerReport, LabelerError> {
    ConstructionSpec::cycle_of(t).validate()?;
    let compound = build_cycle_of_with(base, t, &variant.links)?;
    let mut raw = HashMap::new();
    for (l, copy) in copy_labels(base, t, variant).iter().enumerate() {
        copy.write(base, None, l as u32 + 1, &mut raw);
    }
    finish(compound, &raw, variant.to_string())
}

/// Labels `C(t·G)` under the calibrated variant.
pub fn label_cycle_of(base: &AlphaLabeledBase, t: u32) -> Result<LabelerReport, LabelerError> {
    ConstructionSpec::cycle_of(t).validate()?;
    let variant = cycle_variant()?;
    label_cycle_of_with(base, t, variant)
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("no cycle-of-graphs variant verifies on the calibration set; closest candidates:\n{}", near_misses.join("\n"))]
pub struct CalibrationError {
    pub near_misses: Vec<String>,
}

/// Small bases times the two smallest even copy counts.
pub fn calibration_set() -> Vec<(AlphaLabeledBase, u32)> {
    let bases = [
        base_path(2).expect("atlas"),
        base_path(4).expect("atlas"),
        base_complete_bipartite(2, 2).expect("atlas"),
    ];
    bases
        .into_iter()
        .flat_map(|b| [(b.clone(), 2), (b, 4)])
        .collect()
}

/// Returns the first variant (in family order) passing all instances, or
/// the closest failures.
pub fn calibrate(
    family: &[CycleVariant],
    set: &[(AlphaLabeledBase, u32)],
) -> Result<CycleVariant, CalibrationError> {
    let mut misses: Vec<(usize, String)> = Vec::new();
    'variants: for variant in family {
        for (base, t) in set {
            match label_cycle_of_with(base, *t, variant) {
                Ok(_) => {}
                Err(err) => {
                    let (score, detail) = match &err {
                        LabelerError::VerificationFailed { certificate, .. } => {
                            (certificate.violations.len(), edge_multiset(base, *t, variant))
                        }
                        other => (usize::MAX, other.to_string()),
                    };
                    misses.push((score, format!("  [{variant}] on q0={} t={t}: {detail}", base.q0())));
                    continue 'variants;
                }
            }
        }
        return Ok(*variant);
    }
    misses.sort_by_key(|(score, _)| *score);
    Err(CalibrationError {
        near_misses: misses.into_iter().take(8).map(|(_, s)| s).collect(),
    })
}

fn edge_multiset(base: &AlphaLabeledBase, t: u32, variant: &CycleVariant) -> String {
    let Ok(compound) = build_cycle_of_with(base, t, &variant.links) else {
        return "unbuildable".into();
    };
    let mut raw = HashMap::new();
    for (l, copy) in copy_labels(base, t, variant).iter().enumerate() {
        copy.write(base, None, l as u32 + 1, &mut raw);
    }
    let mut labels: Vec<i64> = compound
        .graph
        .edges()
        .iter()
        .map(|(a, b)| (raw[a] - raw[b]).abs())
        .collect();
    labels.sort();
    format!("edge labels {labels:?}")
}

static FROZEN: OnceLock<Result<CycleVariant, CalibrationError>> = OnceLock::new();

/// The calibrated variant, computed on first use.
pub fn cycle_variant() -> Result<&'static CycleVariant, CalibrationError> {
    FROZEN
        .get_or_init(|| calibrate(&variant_family(), &calibration_set()))
        .as_ref()
        .map_err(Clone::clone)
}
