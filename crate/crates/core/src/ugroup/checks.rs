//! Property checks on sampled elements of `U`.

use num_bigint::BigInt;
use num_traits::Signed;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::sample::{block_elementary, elementary, sample_for_window, sample_level, sample_normal};
use super::{coset_eq, elementaries, fixing_depth, normal_forms, u_inv, u_mul, window, IntMatrix, UElement, WindowProfile};
use crate::report::Status;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Form {
    F1,
    F2,
    F3,
    Fixed,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FormCheck {
    pub form: Form,
    pub threshold: usize,
    /// Samples checked in the forward direction (`p ≥ threshold`).
    pub forward_checked: usize,
    pub forward_failures: Vec<String>,
    /// Elementary generator of `U_p` breaking the equality, required when
    /// `p < threshold`.
    pub witness: Option<String>,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CosetEquivalenceReport {
    pub p: usize,
    pub window: WindowProfile,
    pub forms: Vec<FormCheck>,
}

impl CosetEquivalenceReport {
    pub fn holds(&self) -> bool {
        self.forms.iter().all(|f| f.holds)
    }
}

fn form_target(form: Form, a: &UElement, x: &UElement) -> UElement {
    match form {
        Form::Fixed => x.clone(),
        _ => {
            let nf = normal_forms(a, x).expect("same truncation");
            match form {
                Form::F1 => nf.f1,
                Form::F2 => nf.f2,
                _ => nf.f3,
            }
        }
    }
}

fn form_holds(form: Form, a: &UElement, x: &UElement, n: usize) -> bool {
    let ax = u_mul(a, x).expect("same truncation");
    coset_eq(&ax, &form_target(form, a, x), n).expect("same truncation")
}

/// For each of `F₁` (threshold `n`), `F₂` (`N₂`), `F₃` (`max(N₂, Rⁿ(v))`)
/// and the fixed coset (`N₃`): when `p` reaches the threshold, `AXU_n` equals
/// the form's coset for every sample `A ∈ U_p`; below it, an elementary
/// generator of `U_p` breaking the equality is found.
pub fn check_coset_equivalences(x: &UElement, n: usize, p: usize, samples: &[UElement]) -> CosetEquivalenceReport {
    let w = window(x, n);
    let rv = x.b.reach(n);
    let thresholds = [(Form::F1, n), (Form::F2, w.n2), (Form::F3, w.n2.max(rv)), (Form::Fixed, w.n3)];
    let forms = thresholds
        .into_iter()
        .map(|(form, threshold)| {
            if p >= threshold {
                let mut failures = Vec::new();
                let mut checked = 0;
                for a in samples.iter().filter(|a| a.in_level(p)) {
                    checked += 1;
                    if !form_holds(form, a, x, n) {
                        failures.push(serde_json::to_string(a).expect("element serialization"));
                    }
                }
                FormCheck {
                    form,
                    threshold,
                    forward_checked: checked,
                    holds: failures.is_empty(),
                    forward_failures: failures,
                    witness: None,
                }
            } else {
                let witness = elementaries(x.k, p)
                    .into_iter()
                    .find(|g| !form_holds(form, &g.to_element(x.k), x, n))
                    .map(|g| g.to_string());
                FormCheck {
                    form,
                    threshold,
                    forward_checked: 0,
                    forward_failures: Vec::new(),
                    holds: witness.is_some(),
                    witness,
                }
            }
        })
        .collect();
    CosetEquivalenceReport { p, window: w, forms }
}

/// Samples from `U_p` together with one elementary generator per block.
pub fn level_samples(rng: &mut ChaCha8Rng, k: usize, p: usize, count: usize, cap: i64) -> Vec<UElement> {
    let mut out: Vec<UElement> = (0..count).map(|_| sample_level(rng, k, p, cap)).collect();
    for _ in 0..6 {
        if let Some(g) = elementary(rng, k, p, cap) {
            out.push(g.to_element(k));
        }
    }
    out.push(block_elementary(rng, k, p, cap, None));
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NodeRankReport {
    pub window: WindowProfile,
    pub fixing_depth: usize,
    /// Elementary generator of `U_{N₃−1}` moving `XU_n`.
    pub moving_witness: Option<String>,
    pub n3_invariance_failures: Vec<String>,
    pub n2_invariance_failures: Vec<String>,
    /// `max(fixing depth of X′) − 1 − N₂` over the sampled `U_{N₂}`-orbit.
    pub sampled_rank: usize,
    pub formula_rank: usize,
    pub status: Status,
}

/// The node `(N₂, U_{N₂}·XU_n)` has rank `max{0, N₃−N₂−1}`: `N₃` is the least
/// fixing level, it is constant on the `U_{N₂}`-orbit and `N₂` is constant on
/// the `U_n`-orbit, so every branch below the node stops at level `N₃−1`.
pub fn node_rank_check(x: &UElement, n: usize, samples: usize, rng: &mut ChaCha8Rng, cap: i64) -> NodeRankReport {
    let w = window(x, n);
    let k = x.k;
    let formula_rank = w.n3.saturating_sub(w.n2 + 1);
    let (depth, witness) = fixing_depth(x, n);
    let mut report = NodeRankReport {
        window: w,
        fixing_depth: depth,
        moving_witness: witness.map(|g| g.to_string()),
        n3_invariance_failures: Vec::new(),
        n2_invariance_failures: Vec::new(),
        sampled_rank: 0,
        formula_rank,
        status: Status::Pass,
    };
    if w.n3 > k {
        report.status = Status::Inconclusive;
        return report;
    }
    let mut fail = depth != w.n3 || (w.n3 > n && witness.is_none_or(|g| g.row + 1 != w.n3));
    let mut best = depth;
    for a in level_samples(rng, k, w.n2, samples, cap) {
        let xp = u_mul(&a, x).expect("same truncation");
        let wp = window(&xp, n);
        if wp.n3 != w.n3 {
            report.n3_invariance_failures.push(format!("N3(AX)={} for A={}", wp.n3, serde_json::to_string(&a).unwrap()));
        }
        best = best.max(fixing_depth(&xp, n).0);
    }
    for a in level_samples(rng, k, n, samples, cap) {
        let xp = u_mul(&a, x).expect("same truncation");
        let wp = window(&xp, n);
        if wp.n2 != w.n2 {
            report.n2_invariance_failures.push(format!("N2(AX)={} for A={}", wp.n2, serde_json::to_string(&a).unwrap()));
        }
    }
    report.sampled_rank = best.saturating_sub(w.n2 + 1);
    fail |= !report.n3_invariance_failures.is_empty() || !report.n2_invariance_failures.is_empty();
    fail |= report.sampled_rank != formula_rank;
    if fail {
        report.status = Status::Fail;
    }
    report
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GrowthReport {
    /// `N₃(A_jX)` for `A_j ∈ U_{N₂−1}` with `b` a multiple of `e_{N₂−1, j}`,
    /// present when `n < Rⁿ(u)`.
    pub n3_sequence: Option<Vec<usize>>,
    /// `N₂(A_jX)` for `A_j ∈ U_{n−1}` with `a` a multiple of `e_{n−1, j}`.
    pub n2_sequence: Vec<usize>,
    pub holds: bool,
}

/// The sequences `(A_j)` along which `N₃` (below a node at level `N₂−1`)
/// and `N₂` (below a node at level `n−1`) grow to the truncation limit.
pub fn growth_witnesses(x: &UElement, n: usize) -> GrowthReport {
    let k = x.k;
    let w = window(x, n);
    let mut holds = true;
    let n3_sequence = (n < x.a.reach(n)).then(|| {
        let p = w.n2 - 1;
        let uv_x = x.a.mul(&x.b).sub(&x.d);
        let t = uv_x.max_abs() + BigInt::from(1);
        (0..k)
            .map(|j| {
                let mut aj = UElement::identity(k);
                aj.b.set(p, j, t.clone());
                let y = u_mul(&aj, x).expect("same truncation");
                let wy = window(&y, n);
                holds &= wy.n3 > j && wy.n2 == w.n2;
                wy.n3
            })
            .collect()
    });
    let t = x.a.max_abs().abs() + BigInt::from(1);
    let n2_sequence = (0..k)
        .map(|j| {
            let mut aj = UElement::identity(k);
            aj.a.set(n - 1, j, t.clone());
            let y = u_mul(&aj, x).expect("same truncation");
            let wy = window(&y, n);
            holds &= wy.n2 > j;
            wy.n2
        })
        .collect();
    GrowthReport {
        n3_sequence,
        n2_sequence,
        holds,
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct NormalSubgroupReport {
    pub samples: usize,
    pub closure_failures: Vec<String>,
    pub abelian_failures: Vec<String>,
    pub conjugation_failures: Vec<String>,
    pub commutator_failures: Vec<String>,
}

impl NormalSubgroupReport {
    pub fn holds(&self) -> bool {
        self.closure_failures.is_empty()
            && self.abelian_failures.is_empty()
            && self.conjugation_failures.is_empty()
            && self.commutator_failures.is_empty()
    }
}

fn js(x: &UElement) -> String {
    serde_json::to_string(x).expect("element serialization")
}

/// `N = {a = b = c = 0}` is an abelian normal subgroup and every commutator
/// of `U` lies in it.
pub fn normal_subgroup_checks(k: usize, samples: usize, rng: &mut ChaCha8Rng, cap: i64) -> NormalSubgroupReport {
    let mut r = NormalSubgroupReport {
        samples,
        ..Default::default()
    };
    for _ in 0..samples {
        let p = sample_normal(rng, k, cap);
        let q = sample_normal(rng, k, cap);
        let g = sample_level(rng, k, 0, cap);
        let h = sample_level(rng, k, 0, cap);
        let pq = u_mul(&p, &q).unwrap();
        if !pq.in_normal() || !u_inv(&p).in_normal() {
            r.closure_failures.push(format!("{} {}", js(&p), js(&q)));
        }
        if pq != u_mul(&q, &p).unwrap() {
            r.abelian_failures.push(format!("{} {}", js(&p), js(&q)));
        }
        let conj = u_mul(&u_mul(&g, &p).unwrap(), &u_inv(&g)).unwrap();
        if !conj.in_normal() {
            r.conjugation_failures.push(format!("{} {}", js(&g), js(&p)));
        }
        let comm = u_mul(&u_mul(&g, &h).unwrap(), &u_mul(&u_inv(&g), &u_inv(&h)).unwrap()).unwrap();
        if !comm.in_normal() {
            r.commutator_failures.push(format!("{} {}", js(&g), js(&h)));
        }
    }
    r
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct SweepConfig {
    pub n: usize,
    pub k: usize,
    pub samples: usize,
    pub seed: u64,
    pub entry_cap: i64,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            n: 1,
            k: 12,
            samples: 40,
            seed: 1,
            entry_cap: 3,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepCase {
    pub index: usize,
    pub element: UElement,
    pub node_rank: NodeRankReport,
    pub equivalences: Vec<CosetEquivalenceReport>,
    pub growth: GrowthReport,
    pub window_class_failures: Vec<String>,
    pub status: Status,
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepReport {
    pub config: SweepConfig,
    pub cases: Vec<SweepCase>,
}

impl SweepReport {
    pub fn count(&self, status: Status) -> usize {
        self.cases.iter().filter(|c| c.status == status).count()
    }
}

/// Per sampled `X`: window equality across its coset, the coset
/// equivalences at each threshold and one below, the node rank formula and
/// the growth sequences.
pub fn sweep_case(config: &SweepConfig, index: usize) -> SweepCase {
    let (k, n, cap) = (config.k, config.n, config.entry_cap);
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed.wrapping_mul(0x9e37_79b9_7f4a_7c15).wrapping_add(index as u64));
    let x = sample_for_window(&mut rng, k, n, cap);
    let w = window(&x, n);

    let mut window_class_failures = Vec::new();
    for _ in 0..4 {
        let b = sample_level(&mut rng, k, n, cap);
        let xb = u_mul(&x, &b).unwrap();
        if window(&xb, n) != w {
            window_class_failures.push(js(&b));
        }
    }

    let rv = x.b.reach(n);
    let mut ps: Vec<usize> = [n, w.n2, w.n2.max(rv), w.n3]
        .into_iter()
        .flat_map(|t| [t.saturating_sub(1), t])
        .filter(|&p| p <= k)
        .collect();
    ps.sort_unstable();
    ps.dedup();
    let equivalences: Vec<CosetEquivalenceReport> = ps
        .into_iter()
        .map(|p| {
            let samples = level_samples(&mut rng, k, p, 4, cap);
            check_coset_equivalences(&x, n, p, &samples)
        })
        .collect();
    let node_rank = node_rank_check(&x, n, 6, &mut rng, cap);
    let growth = growth_witnesses(&x, n);
    let status = if !window_class_failures.is_empty()
        || equivalences.iter().any(|e| !e.holds())
        || !growth.holds
        || node_rank.status == Status::Fail
    {
        Status::Fail
    } else {
        node_rank.status
    };
    SweepCase {
        index,
        element: x,
        node_rank,
        equivalences,
        growth,
        window_class_failures,
        status,
    }
}

pub fn run_sweep(config: &SweepConfig) -> SweepReport {
    let cases = (0..config.samples).into_par_iter().map(|i| sweep_case(config, i)).collect();
    SweepReport {
        config: config.clone(),
        cases,
    }
}

/// Zero matrix helper for callers building elements by hand.
pub fn zero(k: usize) -> IntMatrix {
    IntMatrix::zero(k)
}
