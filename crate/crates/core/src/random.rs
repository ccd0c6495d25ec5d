//! Seeded generators of random instances for the verification suites.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::extension::ExtensionInstance;
use crate::groups::{coset_space, CayleyTable, Elem, GSet, Perm, PermGroup, PermGroupChain, Points, Subgroup};
use crate::trees::{NodeId, TreeBuilder, WfTree};

/// A generator seeded from the suite seed and a case name, stable across
/// platforms and toolchains.
pub fn case_rng(seed: u64, name: &str) -> ChaCha8Rng {
    // FNV-1a
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in name.bytes() {
        h ^= b as u64;
        h = h.wrapping_mul(0x0100_0000_01b3);
    }
    ChaCha8Rng::seed_from_u64(h ^ seed.wrapping_mul(0x9e37_79b9_7f4a_7c15))
}

/// A forest with at most `max_nodes` nodes; each new node is a root with
/// probability `1/8`, otherwise a child of a uniformly chosen earlier node.
pub fn random_tree<R: Rng>(rng: &mut R, max_nodes: usize) -> WfTree {
    let n = rng.gen_range(0..=max_nodes);
    let mut b = TreeBuilder::new();
    for i in 0..n {
        if i == 0 || rng.gen_ratio(1, 8) {
            b.root(format!("n{i}"));
        } else {
            // bias towards recent nodes so that deep branches appear
            let lo = if rng.gen_bool(0.5) { i.saturating_sub(4) } else { 0 };
            let p = rng.gen_range(lo..i);
            b.child(p, format!("n{i}"));
        }
    }
    b.build()
}

/// A downward closed subset: roots are kept with probability 3/4 and each
/// child of a kept node with probability `keep`.
pub fn random_downward_closed<R: Rng>(rng: &mut R, t: &WfTree, keep: f64) -> BTreeSet<NodeId> {
    let mut out = BTreeSet::new();
    for n in t.nodes() {
        let p = match n.parent {
            None => 0.75,
            Some(p) if out.contains(&p) => keep,
            Some(_) => 0.0,
        };
        if p > 0.0 && rng.gen_bool(p) {
            out.insert(n.id);
        }
    }
    out
}

/// A tree together with a nonempty fibre tree for every node.
pub fn random_lex_instance<R: Rng>(rng: &mut R, max_tb: usize, max_fibre: usize) -> (WfTree, BTreeMap<NodeId, WfTree>) {
    let tb = random_tree(rng, max_tb);
    let phi = tb
        .nodes()
        .iter()
        .map(|s| {
            let mut f = random_tree(rng, max_fibre);
            if f.is_empty() {
                f = crate::trees::chain(1);
            }
            (s.id, f)
        })
        .collect();
    (tb, phi)
}

pub fn random_perm<R: Rng>(rng: &mut R, degree: usize) -> Perm {
    let mut v: Vec<u32> = (0..degree as u32).collect();
    v.shuffle(rng);
    Perm::from_images(v).expect("shuffle is a permutation")
}

/// A permutation supported on a random subset of `k` points.
fn random_sparse_perm<R: Rng>(rng: &mut R, degree: usize) -> Perm {
    let k = rng.gen_range(2..=degree.clamp(2, 4));
    let mut pts: Vec<u32> = (0..degree as u32).collect();
    pts.shuffle(rng);
    let support = &pts[..k];
    let mut shuffled = support.to_vec();
    shuffled.shuffle(rng);
    let mut img: Vec<u32> = (0..degree as u32).collect();
    for (a, b) in support.iter().zip(&shuffled) {
        img[*a as usize] = *b;
    }
    Perm::from_images(img).expect("bijection")
}

/// A group of degree `2..=max_degree` with order between 2 and
/// `max_order`, generated by one or two permutations, each either uniform
/// or moving at most four points.
pub fn random_group<R: Rng>(rng: &mut R, max_degree: usize, max_order: usize) -> Arc<PermGroup> {
    loop {
        let degree = rng.gen_range(2..=max_degree.max(2));
        let ngens = rng.gen_range(1..=2);
        let gens: Vec<Perm> = (0..ngens)
            .map(|_| {
                if rng.gen_bool(0.5) {
                    random_perm(rng, degree)
                } else {
                    random_sparse_perm(rng, degree)
                }
            })
            .collect();
        if let Ok(g) = PermGroup::generate(degree, &gens, max_order) {
            if g.order() >= 2 {
                return Arc::new(g);
            }
        }
    }
}

/// A proper subgroup step: a point stabilizer, a subgroup generated by a
/// random element, or the trivial group.
fn smaller<R: Rng>(rng: &mut R, h: &Subgroup) -> Subgroup {
    let g = h.group();
    match rng.gen_range(0..4) {
        0 | 1 => {
            let p = rng.gen_range(0..g.degree());
            h.intersect(&g.stabilizer(&[p]))
        }
        2 => {
            let e: Elem = *h.elements().choose(rng).expect("nonempty");
            g.subgroup(&[e])
        }
        _ => h.clone(),
    }
}

/// A decreasing chain of depth at most `max_depth`. With `closing` the last
/// level is trivial.
pub fn random_chain<R: Rng>(rng: &mut R, max_degree: usize, max_depth: usize, max_order: usize, closing: bool) -> PermGroupChain {
    let g = random_group(rng, max_degree, max_order);
    let depth = rng.gen_range(1..=max_depth.max(1));
    let mut levels = vec![g.full()];
    for _ in 1..depth {
        let next = smaller(rng, levels.last().expect("nonempty"));
        levels.push(next);
    }
    if closing {
        if !levels.last().expect("nonempty").is_trivial() {
            levels.push(g.trivial());
        }
    } else {
        let next = smaller(rng, levels.last().expect("nonempty"));
        levels.push(next);
    }
    PermGroupChain::from_subgroups(levels)
}

/// Normal closure of `gens` in the whole group.
pub fn normal_closure(group: &Arc<PermGroup>, gens: &[Elem]) -> Subgroup {
    let mut conj: BTreeSet<Elem> = BTreeSet::new();
    for &x in gens {
        for g in 0..group.order() as Elem {
            conj.insert(group.conj(g, x));
        }
    }
    group.subgroup(&conj.into_iter().collect::<Vec<_>>())
}

/// A proper normal subgroup of the chain's group: the normal closure of a
/// few random elements, nontrivial when one exists among the draws. `None`
/// when no draw gives a proper subgroup.
pub fn random_normal<R: Rng>(rng: &mut R, chain: &PermGroupChain) -> Option<Subgroup> {
    let g = chain.group();
    let mut fallback = None;
    for _ in 0..8 {
        let e = rng.gen_range(1..g.order()) as Elem;
        let n = normal_closure(g, &[e]);
        if n.order() < g.order() {
            return Some(n);
        }
    }
    if rng.gen_bool(0.5) {
        fallback = Some(g.trivial());
    }
    fallback
}

/// Finite groups `Γ` for the countable construction, as Cayley tables.
pub fn small_tables() -> Vec<(String, CayleyTable)> {
    let z = CayleyTable::cyclic;
    vec![
        ("Z3".into(), z(3)),
        ("Z4".into(), z(4)),
        ("Z5".into(), z(5)),
        ("Z6".into(), z(6)),
        ("Z7".into(), z(7)),
        ("Z8".into(), z(8)),
        ("Z2xZ2".into(), z(2).product(&z(2))),
        ("Z2xZ4".into(), z(2).product(&z(4))),
        ("Z3xZ3".into(), z(3).product(&z(3))),
        ("Z2^3".into(), z(2).product(&z(2)).product(&z(2))),
    ]
}

/// A random nontrivial set of generators of a subgroup of `Aut(Γ)`.
pub fn random_aut_generators<R: Rng>(rng: &mut R, gamma: &CayleyTable) -> Vec<Perm> {
    let autos: Vec<Perm> = gamma.automorphisms().into_iter().filter(|p| !p.is_identity()).collect();
    if autos.is_empty() {
        return Vec::new();
    }
    let k = rng.gen_range(1..=2.min(autos.len()));
    autos.choose_multiple(rng, k).cloned().collect()
}

/// An extension instance `(𝒢, N, X)` with `N` a proper normal subgroup,
/// nontrivial in about nine draws out of ten, and `X` the points or the
/// coset space. Returns the instance with a JSON description.
pub fn random_extension_instance<R: Rng>(rng: &mut R, cap: usize) -> (ExtensionInstance, serde_json::Value) {
    loop {
        let closing = rng.gen_bool(0.85);
        let chain = random_chain(rng, 6, 4, 120, closing);
        let Some(normal) = random_normal(rng, &chain) else { continue };
        if normal.is_trivial() && rng.gen_bool(0.8) {
            continue;
        }
        let gens = normal.perms();
        let points = rng.gen_bool(0.5);
        let x: Box<dyn GSet> = if points {
            Box::new(Points::new(chain.group().clone()))
        } else {
            match coset_space(&chain, cap) {
                Ok(c) => Box::new(c),
                Err(_) => continue,
            }
        };
        let spec = serde_json::json!({
            "g": chain.to_spec(),
            "n_generators": gens,
            "x_set": if points { "points" } else { "coset_space" },
        });
        if let Ok(inst) = ExtensionInstance::new(chain, &gens, x) {
            return (inst, spec);
        }
    }
}
