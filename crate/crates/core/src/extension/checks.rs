use std::collections::BTreeSet;

use serde::Serialize;

use super::{ExtensionError, ExtensionInstance};
use crate::groups::orbit::orbit_of;
use crate::groups::table::quotient_table;
use crate::groups::{PermGroupChain, Subgroup};
use crate::Truncated;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct QuotientIsoReport {
    pub level: usize,
    pub order_hn_mod_n: usize,
    pub order_h_mod_hn: usize,
    pub isomorphic: bool,
}

/// `HN/N ≅ H/(H∩N)` for `H` the chain level `h_level`, by building both
/// quotient tables and searching for an isomorphism.
pub fn quotient_iso_check(chain: &PermGroupChain, normal: &Subgroup, h_level: usize) -> Result<QuotientIsoReport, ExtensionError> {
    let h = chain.levels().get(h_level).ok_or(crate::groups::GroupError::LevelOutOfRange {
        level: h_level,
        depth: chain.depth(),
    })?;
    let hn = h.join(normal);
    let left = quotient_table(&hn, normal)?;
    let right = quotient_table(h, &h.intersect(normal))?;
    Ok(QuotientIsoReport {
        level: h_level,
        order_hn_mod_n: left.order,
        order_h_mod_hn: right.order,
        isomorphic: left.find_isomorphism(&right).is_some(),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InducedActionReport {
    pub union_holds: bool,
    pub quotient_holds: bool,
}

/// For `K = N` acting on `X`: `⋃ π(H*)·[y]_K = H*K·y` and
/// `(H*K·y)/K = π(H*)·[y]_K`.
pub fn induced_action_check(inst: &ExtensionInstance, hstar: &Subgroup, y: usize) -> InducedActionReport {
    let x = inst.x_set();
    let classes = inst.n_partition(0);
    let image_classes: BTreeSet<usize> = hstar.elements().iter().map(|&h| classes.class_index(x.act(h, y))).collect();
    let union: BTreeSet<usize> = image_classes.iter().flat_map(|&c| classes.classes()[c].iter().copied()).collect();
    let mut gens = hstar.generators().to_vec();
    gens.extend_from_slice(inst.normal().generators());
    let joint: BTreeSet<usize> = orbit_of(x, &gens, y).into_iter().collect();
    let joint_classes: BTreeSet<usize> = joint.iter().map(|&p| classes.class_index(p)).collect();
    InducedActionReport {
        union_holds: union == joint,
        quotient_holds: joint_classes == image_classes,
    }
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct InducedActionSweep {
    pub union_failures: Vec<String>,
    pub quotient_failures: Vec<String>,
}

/// Every chain level as `H*`, every point as `y`.
pub fn induced_action_sweep(inst: &ExtensionInstance) -> InducedActionSweep {
    let mut out = InducedActionSweep::default();
    for (n, h) in inst.chain().levels().iter().enumerate() {
        for y in 0..inst.x_set().len() {
            let r = induced_action_check(inst, h, y);
            if !r.union_holds {
                out.union_failures.push(format!("H*=G_{n}, y={y}"));
            }
            if !r.quotient_holds {
                out.quotient_failures.push(format!("H*=G_{n}, y={y}"));
            }
        }
    }
    out
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct OrbitSequenceReport {
    pub s_invariance: Vec<String>,
    pub q_increasing: Vec<String>,
    pub q_step: Vec<String>,
    pub q_least: Vec<String>,
    pub q_invariance: Vec<String>,
}

/// Least `p` with `G_p N_k·x = N_k·x`, by fresh orbit computations.
fn least_absorbing(inst: &ExtensionInstance, k: usize, x: usize) -> Option<usize> {
    let nk = inst.n_level(k)?;
    let target = orbit_of(inst.x_set(), nk.generators(), x).len();
    (0..).map_while(|p| inst.g_level(p).map(|g| (p, g))).find_map(|(p, g)| {
        let mut gens = g.generators().to_vec();
        gens.extend_from_slice(nk.generators());
        (orbit_of(inst.x_set(), &gens, x).len() == target).then_some(p)
    })
}

pub fn orbit_sequence_checks(inst: &ExtensionInstance, qs: &[Vec<usize>]) -> OrbitSequenceReport {
    let mut r = OrbitSequenceReport::default();
    let xs = inst.x_set().len();
    for k in 0..=inst.depth() {
        for x in 0..xs {
            let sx = inst.s_value(x, k);
            for &y in inst.n_orbit(k, x) {
                if inst.s_value(y, k) != sx {
                    r.s_invariance.push(format!("k={k}: s({x}) ≠ s({y})"));
                }
            }
        }
    }
    for (x, q) in qs.iter().enumerate() {
        if q.windows(2).any(|w| w[1] <= w[0]) {
            r.q_increasing.push(format!("{x}: {q:?}"));
        }
        for n in 0..q.len() - 1 {
            let (qn, qn1) = (q[n], q[n + 1]);
            let nk = inst.n_orbit(qn, x).len();
            if inst.joint_orbit(qn1, qn, x).map(<[usize]>::len) != Some(nk) {
                r.q_step.push(format!("{x}: G_{qn1}N_{qn}·x ≠ N_{qn}·x"));
            }
            if inst.joint_orbit(qn, qn, x).map(<[usize]>::len) != Some(nk) {
                match least_absorbing(inst, qn, x) {
                    Some(p) if p == qn1 => {}
                    other => r.q_least.push(format!("{x}, n={n}: q={qn1}, least p={other:?}")),
                }
            }
            for &y in inst.n_orbit(qn, x) {
                let Truncated::Closed(qy) = inst.q_sequence(y) else {
                    r.q_invariance.push(format!("{y} truncated"));
                    continue;
                };
                if qy.len() < n + 2 || qy[..n + 2] != q[..n + 2] {
                    r.q_invariance.push(format!("{x} vs {y} up to {}", n + 1));
                }
            }
        }
    }
    r
}
