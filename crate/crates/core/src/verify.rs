//! Seeded verification suites, one per module, aggregated into a [`Report`].

use std::str::FromStr;
use std::sync::Arc;
use std::time::Instant;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::json;

use crate::constructions::{
    check_coset_invariance, check_t1_rank_equality, countable_semidirect, rank_bound, semidirect, wreath, ActionTable,
    BoundKind, ConstructionError,
};
use crate::extension::{extension_bound_check, quotient_iso_check};
use crate::groups::balanced::finite_case_sweep;
use crate::groups::{
    reduction_transfer, CayleyTable, EqChain, GSet, Perm, PermGroup, PermGroupChain, Points, DEFAULT_CAP,
};
use crate::random::{
    case_rng, random_aut_generators, random_chain, random_downward_closed, random_extension_instance, random_lex_instance, random_normal,
    random_tree, small_tables,
};
use crate::report::{Case, Report, Status};
use crate::trees::{build_lex_relation, WfRelation, WfTree};
use crate::ugroup::sample::{sample_level, sample_normal};
use crate::ugroup::{self, u_inv, u_mul, SweepConfig};
use crate::Ordinal;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Trees,
    Groups,
    Constructions,
    Extension,
    Ugroup,
    All,
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Ok(match s {
            "trees" => Suite::Trees,
            "groups" => Suite::Groups,
            "constructions" => Suite::Constructions,
            "extension" => Suite::Extension,
            "ugroup" => Suite::Ugroup,
            "all" => Suite::All,
            _ => return Err(format!("unknown suite {s:?}")),
        })
    }
}

impl Suite {
    pub fn name(self) -> &'static str {
        match self {
            Suite::Trees => "trees",
            Suite::Groups => "groups",
            Suite::Constructions => "constructions",
            Suite::Extension => "extension",
            Suite::Ugroup => "ugroup",
            Suite::All => "all",
        }
    }
}

#[derive(Debug, Clone)]
pub struct VerifyOptions {
    pub seed: u64,
    pub cases: usize,
    pub timings: bool,
    pub cap: usize,
    /// Truncation used by the `U` sweeps.
    pub k: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            seed: 1,
            cases: 100,
            timings: false,
            cap: DEFAULT_CAP,
            k: 12,
        }
    }
}

type CaseFn = Box<dyn Fn(&mut ChaCha8Rng) -> Case + Send + Sync>;

struct Job {
    name: String,
    run: CaseFn,
}

fn job(name: String, f: impl Fn(&mut ChaCha8Rng, &str) -> Case + Send + Sync + 'static) -> Job {
    let n = name.clone();
    Job {
        name,
        run: Box::new(move |rng| f(rng, &n)),
    }
}

fn run_jobs(suite: &str, jobs: Vec<Job>, opts: &VerifyOptions) -> Report {
    let cases = jobs
        .into_par_iter()
        .map(|j| {
            let mut rng = case_rng(opts.seed, &j.name);
            let start = Instant::now();
            let mut c = (j.run)(&mut rng);
            if opts.timings {
                c.elapsed_ms = start.elapsed().as_millis() as u64;
            }
            c
        })
        .collect();
    Report::new(suite, opts.seed, cases)
}

pub fn run_suite(suite: Suite, opts: &VerifyOptions) -> Report {
    let jobs = match suite {
        Suite::Trees => tree_jobs(opts),
        Suite::Groups => group_jobs(opts),
        Suite::Constructions => construction_jobs(opts),
        Suite::Extension => extension_jobs(opts),
        Suite::Ugroup => ugroup_jobs(opts),
        Suite::All => {
            let mut all = tree_jobs(opts);
            all.extend(group_jobs(opts));
            all.extend(construction_jobs(opts));
            all.extend(extension_jobs(opts));
            all.extend(ugroup_jobs(opts));
            all
        }
    };
    run_jobs(suite.name(), jobs, opts)
}

/// Heights straight from the definition `ρ_T(s) = sup{level(t)−level(s)}`
/// over descendants `t`.
fn descendant_ranks(t: &WfTree) -> std::collections::BTreeMap<usize, usize> {
    let mut h: std::collections::BTreeMap<usize, usize> = t.nodes().iter().map(|n| (n.id, 0)).collect();
    for n in t.nodes() {
        for (d, a) in t.ancestors(n.id).expect("own node").into_iter().enumerate() {
            let e = h.get_mut(&a).expect("node");
            *e = (*e).max(d + 1);
        }
    }
    h
}

fn tree_jobs(opts: &VerifyOptions) -> Vec<Job> {
    let mut jobs = Vec::new();
    for i in 0..opts.cases {
        jobs.push(job(format!("trees/rank/{i:04}"), |rng, name| {
            let t = random_tree(rng, 300);
            let fast = t.ranks();
            let slow = descendant_ranks(&t);
            let rel = WfRelation::from_tree(&t);
            let rel_ok = t.nodes().iter().enumerate().all(|(j, n)| rel.rank_of(j).ok() == Some(fast[&n.id]));
            let node_ok = t.nodes().iter().all(|n| t.rank_node(n.id).ok() == Some(fast[&n.id]));
            Case::check(name, fast == slow && rel_ok && node_ok && rel.rank() == t.rank(), || json!({ "tree": t }))
        }));
        jobs.push(job(format!("trees/level_bound/{i:04}"), |rng, name| {
            let t = random_tree(rng, 200);
            let top = t.max_level().unwrap_or(0) + 2;
            let k = rng.gen_range(0..top);
            let m = rng.gen_range(k + 1..=top);
            let r = t.check_level_bound(k, m).expect("k < m");
            Case::check(name, r.holds(), || json!({ "report": r, "tree": t }))
        }));
        jobs.push(job(format!("trees/concat/{i:04}"), |rng, name| {
            let t = random_tree(rng, 200);
            let t1 = random_downward_closed(rng, &t, 0.8);
            let ranks = t.ranks();
            let alpha = ranks.iter().filter(|(id, _)| !t1.contains(id)).map(|(_, r)| r + 1).max().unwrap_or(0);
            match t.concat_bound(&t1, alpha) {
                Ok(r) => Case::check(name, r.holds(), || json!({ "report": r })),
                Err(e) => Case::new(name, Status::Fail, Some(json!(e.to_string()))),
            }
        }));
        jobs.push(job(format!("trees/lex/{i:04}"), |rng, name| {
            let (tb, phi) = random_lex_instance(rng, 10, 8);
            match build_lex_relation(&tb, &phi) {
                Ok((_, r)) => Case::check(name, r.holds, || json!({ "report": r })),
                Err(e) => Case::new(name, Status::Fail, Some(json!(e.to_string()))),
            }
        }));
    }
    jobs
}

fn group_jobs(opts: &VerifyOptions) -> Vec<Job> {
    let mut jobs = Vec::new();
    let cases = opts.cases.div_ceil(2);
    for i in 0..cases {
        jobs.push(job(format!("groups/finite_case/{i:04}"), |rng, name| {
            let chain = random_chain(rng, 8, 5, 720, true);
            let bad: Vec<_> = finite_case_sweep(&chain).into_iter().filter(|r| !r.holds).collect();
            Case::check(name, bad.is_empty(), || json!({ "chain": chain.to_spec(), "failures": bad }))
        }));
        jobs.push(job(format!("groups/conjugate_reduction/{i:04}"), |rng, name| {
            let closing = rng.gen_bool(0.5);
            let chain = random_chain(rng, 7, 4, 720, closing);
            let g = chain.group().clone();
            let e = rng.gen_range(0..g.order()) as u32;
            let points = Points::new(g.clone());
            let e1 = EqChain::of_subgroups(&points, chain.levels());
            let conj: Vec<_> = chain.levels().iter().map(|l| l.conjugate_by_inverse(e)).collect();
            let e2 = EqChain::of_subgroups(&points, &conj);
            let gi = g.inv(e);
            let theta: Vec<usize> = (0..points.len()).map(|x| g.act(gi, x)).collect();
            match reduction_transfer(&e1, &e2, &theta) {
                Ok(r) => Case::check(name, r.holds && r.class == crate::trees::MapClass::Isomorphism, || {
                    json!({ "chain": chain.to_spec(), "element": g.perm(e).to_string(), "report": r })
                }),
                Err(err) => Case::new(name, Status::Fail, Some(json!(err.to_string()))),
            }
        }));
    }
    jobs
}

fn parity(p: &Perm) -> bool {
    let n = p.degree();
    let mut seen = vec![false; n];
    let mut cycles = 0;
    for s in 0..n {
        if !seen[s] {
            cycles += 1;
            let mut x = s;
            while !seen[x] {
                seen[x] = true;
                x = p.apply(x);
            }
        }
    }
    (n - cycles) % 2 == 1
}

/// A cyclic group in its regular representation with the chain of
/// subgroups generated by the powers `step_i`.
fn cyclic_chain(n: usize, steps: &[usize]) -> PermGroupChain {
    let perms = CayleyTable::cyclic(n).regular_perms();
    let g = Arc::new(PermGroup::generate(n, &perms, DEFAULT_CAP).expect("small"));
    let levels = steps
        .iter()
        .map(|&s| g.subgroup_of_perms(&[perms[s % n].clone()]).expect("own element"))
        .collect();
    PermGroupChain::from_subgroups(levels)
}

fn construction_jobs(opts: &VerifyOptions) -> Vec<Job> {
    let mut jobs = Vec::new();
    let cases = opts.cases.div_ceil(4);
    let cap = opts.cap;
    for i in 0..cases {
        jobs.push(job(format!("constructions/semidirect/{i:04}"), move |rng, name| {
            let g = random_chain(rng, 4, 3, 24, true);
            let (n, steps) = match rng.gen_range(0..4) {
                0 => (4, vec![1, 2, 0]),
                1 => (6, vec![1, 2, 0]),
                2 => (6, vec![1, 3, 0]),
                _ => (8, vec![1, 2, 4, 0]),
            };
            let h = cyclic_chain(n, &steps);
            let (gg, hg) = (g.group(), h.group());
            // odd permutations act by inversion, even ones trivially
            let rho = ActionTable {
                rho: (0..gg.order() as u32)
                    .map(|x| {
                        let odd = parity(gg.perm(x));
                        (0..hg.order() as u32).map(|y| if odd { hg.inv(y) } else { y }).collect()
                    })
                    .collect(),
            };
            let a = match semidirect(&g, &h, &rho, cap) {
                Ok(a) => a,
                Err(e) => return Case::new(name, Status::Fail, Some(json!(e.to_string()))),
            };
            let mut bad = Vec::new();
            for lvl in 0..=a.depth() {
                let cond = check_coset_invariance(&g, &h, &rho, lvl);
                match check_t1_rank_equality(&a, lvl, cap) {
                    Ok(r) if cond.holds() && r.holds() => {}
                    Err(ConstructionError::CosetInvariance { .. }) if !cond.holds() => {}
                    Ok(r) => bad.push(json!({ "level": lvl, "report": r })),
                    Err(e) => bad.push(json!({ "level": lvl, "error": e.to_string() })),
                }
            }
            Case::check(name, bad.is_empty(), || json!({ "g": g.to_spec(), "h_order": n, "failures": bad }))
        }));
        jobs.push(job(format!("constructions/wreath/{i:04}"), move |rng, name| {
            let g = random_chain(rng, 3, 2, 6, true);
            let h = if rng.gen_bool(0.5) { cyclic_chain(2, &[1, 0]) } else { cyclic_chain(3, &[1, 0]) };
            match wreath(&g, &h, cap) {
                Ok(w) => {
                    let bad: Vec<_> = (0..=w.depth())
                        .filter_map(|lvl| match check_t1_rank_equality(&w, lvl, cap) {
                            Ok(r) if r.holds() => None,
                            Ok(r) => Some(json!({ "level": lvl, "report": r })),
                            Err(e) => Some(json!({ "level": lvl, "error": e.to_string() })),
                        })
                        .collect();
                    Case::check(name, bad.is_empty(), || json!({ "g": g.to_spec(), "failures": bad }))
                }
                Err(ConstructionError::CapExceeded { .. }) => Case::new(name, Status::ExceedsTruncation, None),
                Err(e) => Case::new(name, Status::Fail, Some(json!(e.to_string()))),
            }
        }));
        jobs.push(job(format!("constructions/countable/{i:04}"), move |rng, name| {
            let tables = small_tables();
            let (gname, gamma) = &tables[rng.gen_range(0..tables.len())];
            let gens = random_aut_generators(rng, gamma);
            match countable_semidirect(gamma, &gens, cap) {
                Ok(c) => Case::check(name, c.report.holds(), || {
                    json!({ "gamma": gname, "generators": gens.iter().map(|p| p.to_string()).collect::<Vec<_>>(), "report": c.report })
                }),
                Err(ConstructionError::CapExceeded { .. }) => Case::new(name, Status::ExceedsTruncation, None),
                Err(e) => Case::new(name, Status::Fail, Some(json!(e.to_string()))),
            }
        }));
        jobs.push(job(format!("constructions/bound/{i:04}"), |rng, name| {
            let a = rng.gen_range(0..6u64);
            let b = rng.gen_range(1..6u64);
            let (alpha, beta) = (Ordinal::nat(a), Ordinal::nat(b));
            // β·(ω·α+1) = ω·α + β for finite β ≥ 1
            let ext = rank_bound(BoundKind::Extension, &alpha, &beta).bound;
            let expected = Ordinal::omega().mul_nat(a).add(&beta);
            let sum = rank_bound(BoundKind::Wreath, &alpha, &beta).bound;
            Case::check(name, ext == expected && sum == Ordinal::nat(a + b), || {
                json!({ "alpha": a, "beta": b, "extension": ext.to_string(), "sum": sum.to_string() })
            })
        }));
    }
    jobs
}

fn extension_jobs(opts: &VerifyOptions) -> Vec<Job> {
    let mut jobs = Vec::new();
    let cases = opts.cases.div_ceil(4);
    let cap = opts.cap;
    for i in 0..cases {
        jobs.push(job(format!("extension/pipeline/{i:04}"), move |rng, name| {
            let (inst, spec) = random_extension_instance(rng, cap);
            match extension_bound_check(&inst) {
                Ok(r) if r.holds() && r.truncated => Case::new(name, Status::ExceedsTruncation, None),
                Ok(r) => Case::check(name, r.holds(), || json!({ "instance": spec, "failures": r.failures() })),
                Err(crate::extension::ExtensionError::ExceedsTruncation) => Case::new(name, Status::ExceedsTruncation, None),
                Err(e) => Case::new(name, Status::Fail, Some(json!({ "instance": spec, "error": e.to_string() }))),
            }
        }));
        jobs.push(job(format!("extension/quotient_iso/{i:04}"), |rng, name| {
            let chain = random_chain(rng, 7, 4, 120, false);
            let normal = loop {
                if let Some(n) = random_normal(rng, &chain) {
                    break n;
                }
            };
            let bad: Vec<_> = (0..=chain.depth())
                .filter_map(|h| match quotient_iso_check(&chain, &normal, h) {
                    Ok(r) if r.isomorphic => None,
                    Ok(r) => Some(json!(r)),
                    Err(e) => Some(json!(e.to_string())),
                })
                .collect();
            Case::check(name, bad.is_empty(), || json!({ "chain": chain.to_spec(), "failures": bad }))
        }));
    }
    jobs
}

fn ugroup_jobs(opts: &VerifyOptions) -> Vec<Job> {
    let mut jobs = Vec::new();
    let k = opts.k;
    let per_n = opts.cases.div_ceil(4);
    for n in 1..=4.min(k) {
        for i in 0..per_n {
            jobs.push(job(format!("ugroup/window/n{n}/{i:04}"), move |rng, name| {
                let cfg = SweepConfig {
                    n,
                    k,
                    samples: 1,
                    seed: rng.gen(),
                    entry_cap: 3,
                };
                let c = ugroup::checks::sweep_case(&cfg, 0);
                match c.status {
                    Status::Fail => Case::new(name, Status::Fail, Some(json!(c))),
                    s => Case::new(name, s, None),
                }
            }));
        }
    }
    for i in 0..opts.cases.div_ceil(4) {
        jobs.push(job(format!("ugroup/algebra/{i:04}"), |rng, name| {
            let k = 6;
            let [a, b, c] = [0, 1, 2].map(|_| sample_level(rng, k, 0, 3));
            let p = rng.gen_range(0..=k);
            let [x, y] = [0, 1].map(|_| sample_level(rng, k, p, 3));
            let m = sample_normal(rng, k, 3);
            let assoc = u_mul(&u_mul(&a, &b).unwrap(), &c).unwrap() == u_mul(&a, &u_mul(&b, &c).unwrap()).unwrap();
            let inverse = u_mul(&a, &u_inv(&a)).unwrap().is_identity() && u_mul(&u_inv(&a), &a).unwrap().is_identity();
            let closure = u_mul(&x, &y).unwrap().in_level(p) && u_inv(&x).in_level(p);
            let normal = u_mul(&u_mul(&a, &m).unwrap(), &u_inv(&a)).unwrap().in_normal();
            let comm = u_mul(&u_mul(&a, &b).unwrap(), &u_mul(&u_inv(&a), &u_inv(&b)).unwrap())
                .unwrap()
                .in_normal();
            Case::check(name, assoc && inverse && closure && normal && comm, || {
                json!({ "a": a, "b": b, "c": c, "x": x, "y": y, "level": p, "m": m,
                        "associative": assoc, "inverse": inverse, "closure": closure, "normal": normal, "commutator": comm })
            })
        }));
    }
    jobs
}
