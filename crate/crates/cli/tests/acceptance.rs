//! Acceptance criteria. One line per criterion; the test fails if any line
//! fails. Oracles here are written against the definitions and share no code
//! with the library beyond the data types.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::process::Command;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use rand::Rng;

use ncg::constructions::countable_semidirect;
use ncg::extension::{extension_bound_check, quotient_iso_check, ExtensionError};
use ncg::groups::balanced::finite_case_sweep;
use ncg::groups::{CayleyTable, Perm, PermGroupChain, DEFAULT_CAP};
use ncg::random::{
    case_rng, random_aut_generators, random_chain, random_downward_closed, random_extension_instance, random_lex_instance,
    random_normal, random_tree, small_tables,
};
use ncg::trees::{build_lex_relation, NodeId, WfRelation, WfTree};
use ncg::ugroup::sample::{sample_level, sample_normal};
use ncg::ugroup::{coset_eq, elementaries, fixing_depth, run_sweep, u_inv, u_mul, window, IntMatrix, IntVector, SweepConfig, UElement};
use ncg::{Status, Truncated};

const SEED: u64 = 20;

const TREES: usize = 1000;
const LEVEL_BOUND_INSTANCES: usize = 1000;
const CONCAT_INSTANCES: usize = 1000;
const LEX_INSTANCES: usize = 500;
const CHAINS: usize = 200;
const MIN_AUT_INSTANCES: usize = 5;
const MIN_PIPELINE_INSTANCES: usize = 50;
const MIN_QUOTIENT_TRIPLES: usize = 20;
const U_K: usize = 12;
const U_SAMPLES_PER_N: usize = 200;
const MAX_INCONCLUSIVE_RATE: f64 = 0.05;
const ALGEBRA_TRIPLES: usize = 1000;

const LIMITS: [Duration; 9] = [
    Duration::from_secs(10),
    Duration::from_secs(20),
    Duration::from_secs(30),
    Duration::from_secs(60),
    Duration::from_secs(10),
    Duration::from_secs(120),
    Duration::from_secs(120),
    Duration::from_secs(30),
    Duration::from_secs(30),
];

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

// ---------------------------------------------------------------- trees

/// Heights from parent pointers: `h(a) = max{level(t) − level(a)}` over `t`
/// at or above `a`.
fn heights(nodes: &[(NodeId, Option<NodeId>, usize)]) -> BTreeMap<NodeId, usize> {
    let parent: HashMap<NodeId, Option<NodeId>> = nodes.iter().map(|&(id, p, _)| (id, p)).collect();
    let level: HashMap<NodeId, usize> = nodes.iter().map(|&(id, _, l)| (id, l)).collect();
    let mut h: BTreeMap<NodeId, usize> = nodes.iter().map(|&(id, _, _)| (id, 0)).collect();
    for &(id, _, l) in nodes {
        let mut cur = parent[&id];
        while let Some(a) = cur {
            let e = h.get_mut(&a).unwrap();
            *e = (*e).max(l - level[&a]);
            cur = parent[&a];
        }
    }
    h
}

fn node_list(t: &WfTree) -> Vec<(NodeId, Option<NodeId>, usize)> {
    t.nodes().iter().map(|n| (n.id, n.parent, n.level)).collect()
}

fn tree_rank(h: &BTreeMap<NodeId, usize>) -> usize {
    h.values().map(|v| v + 1).max().unwrap_or(0)
}

fn criterion_1() -> Outcome {
    let mut nodes = 0;
    for i in 0..TREES {
        let mut rng = case_rng(SEED, &format!("acceptance/tree/{i}"));
        let t = random_tree(&mut rng, 300);
        nodes += t.len();
        let oracle = heights(&node_list(&t));
        ensure(t.ranks() == oracle, || format!("tree {i}: children recursion differs from descendant heights"))?;
        let rel = WfRelation::from_tree(&t);
        for (j, n) in t.nodes().iter().enumerate() {
            let want = oracle[&n.id];
            ensure(rel.rank_of(j) == Ok(want) && rel.rank_of_recursive(j) == Ok(want), || {
                format!("tree {i}: relation rank of node {} differs", n.id)
            })?;
            ensure(t.rank_node(n.id) == Ok(want), || format!("tree {i}: rank_node({}) differs", n.id))?;
        }
        ensure(rel.rank() == tree_rank(&oracle) && t.rank() == tree_rank(&oracle), || format!("tree {i}: tree rank differs"))?;
    }
    Ok(format!("{TREES} trees, {nodes} nodes"))
}

fn criterion_2() -> Outcome {
    for i in 0..LEVEL_BOUND_INSTANCES {
        let mut rng = case_rng(SEED, &format!("acceptance/level/{i}"));
        let t = random_tree(&mut rng, 200);
        let top = t.max_level().unwrap_or(0) + 2;
        let k = rng.gen_range(0..top);
        let m = rng.gen_range(k + 1..=top);
        let h = heights(&node_list(&t));
        let sup_m = t.nodes().iter().filter(|n| n.level == m).map(|n| h[&n.id] + 1).max().unwrap_or(0);
        let bound = sup_m + (m - k - 1);
        let worst = t.nodes().iter().filter(|n| n.level == k).map(|n| h[&n.id]).max();
        ensure(worst.is_none_or(|w| w <= bound), || format!("level bound {i}: rank {worst:?} > {bound}"))?;
        let r = t.check_level_bound(k, m).map_err(|e| e.to_string())?;
        ensure(r.holds() && r.bound == bound, || format!("level bound {i}: library report {r:?}"))?;
    }
    for i in 0..CONCAT_INSTANCES {
        let mut rng = case_rng(SEED, &format!("acceptance/concat/{i}"));
        let t = random_tree(&mut rng, 200);
        let t1 = random_downward_closed(&mut rng, &t, 0.8);
        let h = heights(&node_list(&t));
        let alpha = h.iter().filter(|(id, _)| !t1.contains(id)).map(|(_, r)| r + 1).max().unwrap_or(0);
        let sub: Vec<_> = node_list(&t).into_iter().filter(|(id, _, _)| t1.contains(id)).collect();
        let h1 = heights(&sub);
        for (id, r1) in &h1 {
            ensure(h[id] <= alpha + r1, || format!("concat {i}: node {id} has {} > {alpha}+{r1}", h[id]))?;
        }
        ensure(tree_rank(&h) <= alpha + tree_rank(&h1), || format!("concat {i}: tree bound fails"))?;
        let r = t.concat_bound(&t1, alpha).map_err(|e| format!("concat {i}: {e}"))?;
        ensure(r.holds() && r.rank_t1 == tree_rank(&h1), || format!("concat {i}: library report {r:?}"))?;
    }
    Ok(format!("{LEVEL_BOUND_INSTANCES} level-bound and {CONCAT_INSTANCES} concatenation instances"))
}

fn children(t: &WfTree) -> HashMap<NodeId, Vec<NodeId>> {
    let mut out: HashMap<NodeId, Vec<NodeId>> = t.nodes().iter().map(|n| (n.id, Vec::new())).collect();
    for n in t.nodes() {
        if let Some(p) = n.parent {
            out.get_mut(&p).unwrap().push(n.id);
        }
    }
    out
}

fn strict_descendants(ch: &HashMap<NodeId, Vec<NodeId>>, s: NodeId) -> Vec<NodeId> {
    let mut out = Vec::new();
    let mut stack = ch[&s].clone();
    while let Some(x) = stack.pop() {
        out.push(x);
        stack.extend(ch[&x].iter().copied());
    }
    out
}

/// `ρ(R)` for `(t,D) R (s,C) ⟺ s < t ∨ (s = t ∧ C < D)`, straight from
/// `rank(x) = sup{rank(y)+1 : y R x}`.
fn lex_rank(tb: &WfTree, phi: &BTreeMap<NodeId, WfTree>) -> usize {
    let tb_ch = children(tb);
    let phi_ch: BTreeMap<NodeId, HashMap<NodeId, Vec<NodeId>>> = phi.iter().map(|(&s, f)| (s, children(f))).collect();
    let mut memo: HashMap<(NodeId, NodeId), usize> = HashMap::new();
    fn rank(
        x: (NodeId, NodeId),
        tb_ch: &HashMap<NodeId, Vec<NodeId>>,
        phi: &BTreeMap<NodeId, WfTree>,
        phi_ch: &BTreeMap<NodeId, HashMap<NodeId, Vec<NodeId>>>,
        memo: &mut HashMap<(NodeId, NodeId), usize>,
    ) -> usize {
        if let Some(&r) = memo.get(&x) {
            return r;
        }
        let (s, c) = x;
        let mut above: Vec<(NodeId, NodeId)> = strict_descendants(&phi_ch[&s], c).into_iter().map(|d| (s, d)).collect();
        for t in strict_descendants(tb_ch, s) {
            above.extend(phi[&t].nodes().iter().map(|d| (t, d.id)));
        }
        let r = above.into_iter().map(|y| rank(y, tb_ch, phi, phi_ch, memo) + 1).max().unwrap_or(0);
        memo.insert(x, r);
        r
    }
    let mut best = 0;
    for s in tb.nodes() {
        for c in phi[&s.id].nodes() {
            best = best.max(rank((s.id, c.id), &tb_ch, phi, &phi_ch, &mut memo) + 1);
        }
    }
    best
}

fn lex_oracle(tb: &WfTree, phi: &BTreeMap<NodeId, WfTree>) -> (usize, usize, usize) {
    let sup = tb.nodes().iter().map(|s| tree_rank(&heights(&node_list(&phi[&s.id])))).max().unwrap_or(0);
    (lex_rank(tb, phi), sup, tree_rank(&heights(&node_list(tb))))
}

fn criterion_3() -> Outcome {
    let mut largest = 0;
    for i in 0..LEX_INSTANCES {
        let mut rng = case_rng(SEED, &format!("acceptance/lex/{i}"));
        let (tb, phi) = random_lex_instance(&mut rng, 10, 8);
        let (rank_r, sup, rank_tb) = lex_oracle(&tb, &phi);
        ensure(rank_r <= sup * rank_tb, || format!("lex {i}: {rank_r} > {sup}·{rank_tb}"))?;
        let (_, r) = build_lex_relation(&tb, &phi).map_err(|e| format!("lex {i}: {e}"))?;
        ensure(r.holds && r.rank_r == rank_r && r.sup_phi_rank == sup && r.rank_tb == rank_tb, || {
            format!("lex {i}: library report {r:?}, oracle ({rank_r}, {sup}, {rank_tb})")
        })?;
        largest = largest.max(r.elements);
    }
    Ok(format!("{LEX_INSTANCES} instances, up to {largest} elements"))
}

// ---------------------------------------------------------------- groups

fn level_perms(chain: &PermGroupChain, n: usize) -> Vec<Vec<u32>> {
    let g = chain.group();
    chain.levels()[n].generators().iter().map(|&e| g.perm(e).images().to_vec()).collect()
}

fn orbit(gens: &[Vec<u32>], a: usize) -> BTreeSet<usize> {
    let mut seen = BTreeSet::from([a]);
    let mut queue = VecDeque::from([a]);
    while let Some(x) = queue.pop_front() {
        for g in gens {
            let y = g[x] as usize;
            if seen.insert(y) {
                queue.push_back(y);
            }
        }
    }
    seen
}

fn criterion_4() -> Outcome {
    let mut pairs = 0;
    let mut rank_one = 0;
    for i in 0..CHAINS {
        let mut rng = case_rng(SEED, &format!("acceptance/chain/{i}"));
        let chain = random_chain(&mut rng, 8, 5, 720, true);
        ensure(chain.closes() && chain.degree() <= 8 && chain.depth() <= 5, || format!("chain {i} out of range"))?;
        let reports = finite_case_sweep(&chain);
        let depth = chain.depth();
        let gens: Vec<_> = (0..=depth).map(|n| level_perms(&chain, n)).collect();
        for n in 0..=depth {
            for a in 0..chain.degree() {
                pairs += 1;
                let r = reports.iter().find(|r| r.point == a && r.level == n).ok_or("missing report")?;
                ensure(r.holds, || format!("chain {i}: report {r:?}"))?;
                let o = orbit(&gens[n], a);
                if o.len() == 1 {
                    ensure(r.rank == Truncated::Closed(0) && r.node_rank.is_none(), || format!("chain {i}: fixed point {r:?}"))?;
                    continue;
                }
                let m = (n + 1..=depth)
                    .find(|&m| gens[m].iter().all(|g| o.iter().all(|&b| g[b] as usize == b)))
                    .ok_or_else(|| format!("chain {i}: no level fixes the orbit of {a} at {n}"))?;
                let last = (n..=depth).filter(|&l| o.iter().any(|&b| orbit(&gens[l], b).len() > 1)).max().unwrap();
                let node_rank = last - n;
                ensure(node_rank == m - n - 1, || format!("chain {i}: node rank {node_rank} vs m={m}, n={n}"))?;
                ensure(
                    r.rank == Truncated::Closed(1) && r.witness == Some(m) && r.node_rank == Some(node_rank) && node_rank <= (m - n - 1),
                    || format!("chain {i}: report {r:?}, oracle m={m} rank {node_rank}"),
                )?;
                rank_one += 1;
            }
        }
    }
    Ok(format!("{CHAINS} chains, {pairs} (a, n) pairs, {rank_one} of rank 1"))
}

fn closure(degree: usize, gens: &[Perm]) -> Vec<Vec<u32>> {
    let id: Vec<u32> = (0..degree as u32).collect();
    let mut seen = BTreeSet::from([id.clone()]);
    let mut queue = VecDeque::from([id]);
    while let Some(p) = queue.pop_front() {
        for g in gens {
            let q: Vec<u32> = p.iter().map(|&x| g.images()[x as usize]).collect();
            if seen.insert(q.clone()) {
                queue.push_back(q);
            }
        }
    }
    seen.into_iter().collect()
}

/// Rank of the orbit tree of a decreasing chain given by its members'
/// elements: one past the last level that moves a point.
fn chain_tree_rank(levels: &[Vec<Vec<u32>>]) -> usize {
    levels
        .iter()
        .enumerate()
        .filter(|(_, l)| l.iter().any(|p| p.iter().enumerate().any(|(x, &y)| x != y as usize)))
        .map(|(n, _)| n + 1)
        .max()
        .unwrap_or(0)
}

fn aut_oracle(gamma: &CayleyTable, gens: &[Perm]) -> (usize, usize) {
    let n = gamma.order;
    let g = closure(n, gens);
    let g_levels: Vec<Vec<Vec<u32>>> =
        (0..=n).map(|j| g.iter().filter(|p| (0..j).all(|x| p[x] as usize == x)).cloned().collect()).collect();
    let a0: Vec<Vec<u32>> = g
        .iter()
        .flat_map(|p| (0..n as u32).map(move |y| (0..n).map(|l| gamma.table[y as usize][p[l] as usize]).collect()))
        .collect();
    let mut a_levels = vec![a0];
    a_levels.extend(g_levels.iter().cloned());
    (chain_tree_rank(&g_levels), chain_tree_rank(&a_levels))
}

fn criterion_5() -> Outcome {
    let mut instances: Vec<(String, CayleyTable, Vec<Perm>)> = Vec::new();
    for (name, t) in small_tables() {
        let full = t.automorphisms();
        instances.push((format!("Aut({name})"), t.clone(), full));
        let mut rng = case_rng(SEED, &format!("acceptance/aut/{name}"));
        let gens = random_aut_generators(&mut rng, &t);
        instances.push((format!("<{} autos of {name}>", gens.len()), t, gens));
    }
    for req in ["Aut(Z5)", "Aut(Z2xZ2)"] {
        ensure(instances.iter().any(|(n, _, _)| n == req), || format!("{req} missing"))?;
    }
    let mut shifted = 0;
    for (name, gamma, gens) in &instances {
        let c = countable_semidirect(gamma, gens, DEFAULT_CAP).map_err(|e| format!("{name}: {e}"))?;
        let (rank_g, rank_a) = aut_oracle(gamma, gens);
        let r = &c.report;
        ensure(r.rank_g == rank_g && r.rank_a == rank_a, || format!("{name}: report {r:?}, oracle ({rank_g}, {rank_a})"))?;
        ensure(r.holds(), || format!("{name}: report {r:?}"))?;
        if rank_g > 0 {
            ensure(rank_a == rank_g + 1, || format!("{name}: {rank_a} ≠ {rank_g}+1"))?;
            shifted += 1;
        }
    }
    ensure(shifted >= MIN_AUT_INSTANCES, || format!("only {shifted} instances with a nonempty tree"))?;
    Ok(format!("{} instances, {shifted} with nonempty T_G", instances.len()))
}

fn x_tree_rank(inst: &ncg::extension::ExtensionInstance) -> usize {
    let x = inst.x_set();
    let mut best = 0;
    for (n, level) in inst.chain().levels().iter().enumerate() {
        let gens = level.generators();
        let moves = (0..x.len()).any(|p| gens.iter().any(|&g| x.act(g, p) != p));
        if moves {
            best = n + 1;
        }
    }
    best
}

fn criterion_6() -> Outcome {
    let mut closed = 0;
    let mut truncated = 0;
    let mut largest = 0;
    let mut i = 0;
    while closed < MIN_PIPELINE_INSTANCES {
        ensure(i < 4 * MIN_PIPELINE_INSTANCES, || format!("only {closed} closed instances in {i} draws"))?;
        let mut rng = case_rng(SEED, &format!("acceptance/extension/{i}"));
        i += 1;
        let (inst, spec) = random_extension_instance(&mut rng, DEFAULT_CAP);
        let r = match extension_bound_check(&inst) {
            Ok(r) if !r.truncated => r,
            Ok(_) | Err(ExtensionError::ExceedsTruncation) => {
                truncated += 1;
                continue;
            }
            Err(e) => return Err(format!("{spec}: {e}")),
        };
        for name in ["psi_image_in_a", "psi_compatible", "psi_order_reversing"] {
            ensure(r.checks.iter().any(|c| c.name == name && c.holds), || format!("{spec}: {name} fails"))?;
        }
        ensure(r.holds(), || format!("{spec}: {:?}", r.failures()))?;
        let rank_t = x_tree_rank(&inst);
        let tb = r.tb.as_ref().ok_or("closed report without T_B")?;
        let (rank_r, sup, rank_tb) = lex_oracle(tb, &r.phi);
        ensure(rank_t <= rank_r && rank_r <= sup * rank_tb, || {
            format!("{spec}: ρ(T)={rank_t} ρ(R)={rank_r} sup={sup} ρ(T_B)={rank_tb}")
        })?;
        ensure(r.rank_t == rank_t && r.rank_r == rank_r && r.sup_phi == sup && r.rank_tb == rank_tb, || {
            format!("{spec}: library ranks differ from oracle")
        })?;
        closed += 1;
        largest = largest.max(r.relation_size);
    }

    let mut triples = 0;
    let mut j = 0;
    while triples < MIN_QUOTIENT_TRIPLES {
        let mut rng = case_rng(SEED, &format!("acceptance/quotient/{j}"));
        j += 1;
        let chain = random_chain(&mut rng, 7, 4, 120, false);
        let Some(normal) = random_normal(&mut rng, &chain) else { continue };
        let g = chain.group();
        let nset: BTreeSet<u32> = normal.elements().iter().copied().collect();
        ensure(
            g.elements().iter().enumerate().all(|(x, _)| nset.iter().all(|&y| nset.contains(&g.conj(x as u32, y)))),
            || "sampled subgroup is not normal".into(),
        )?;
        for h in 0..=chain.depth() {
            let q = quotient_iso_check(&chain, &normal, h).map_err(|e| e.to_string())?;
            let hset: BTreeSet<u32> = chain.levels()[h].elements().iter().copied().collect();
            let meet = hset.intersection(&nset).count();
            let hn: BTreeSet<u32> = hset.iter().flat_map(|&a| nset.iter().map(move |&b| g.mul(a, b))).collect();
            ensure(hn.len() / nset.len() == hset.len() / meet && q.order_hn_mod_n == hn.len() / nset.len(), || {
                format!("quotient orders {q:?}")
            })?;
            ensure(q.isomorphic && q.order_h_mod_hn == hset.len() / meet, || format!("quotient {q:?}"))?;
            triples += 1;
        }
    }
    Ok(format!(
        "{closed} closed instances ({truncated} truncated skipped), relations up to {largest} elements, {triples} quotient triples"
    ))
}

// ---------------------------------------------------------------- U

type Dense = Vec<Vec<BigInt>>;

fn dense(x: &UElement) -> Dense {
    let k = x.k;
    let mut m = vec![vec![BigInt::from(0); 3 * k + 1]; 3 * k + 1];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = BigInt::from(1);
    }
    for i in 0..k {
        for j in 0..k {
            m[i][k + j] = x.a.get(i, j).clone();
            m[i][2 * k + j] = x.d.get(i, j).clone();
            m[k + i][2 * k + j] = x.b.get(i, j).clone();
        }
        m[i][3 * k] = x.f.entries()[i].clone();
        m[k + i][3 * k] = x.e.entries()[i].clone();
        m[2 * k + i][3 * k] = x.c.entries()[i].clone();
    }
    m
}

fn undense(k: usize, m: &Dense) -> UElement {
    let block = |r: usize, c: usize| IntMatrix::from_rows((0..k).map(|i| m[r + i][c..c + k].to_vec()).collect()).unwrap();
    let col = |r: usize| IntVector::from_entries((0..k).map(|i| m[r + i][3 * k].clone()).collect());
    UElement {
        k,
        a: block(0, k),
        b: block(k, 2 * k),
        d: block(0, 2 * k),
        c: col(2 * k),
        e: col(k),
        f: col(0),
    }
}

fn dmul(p: &Dense, q: &Dense) -> Dense {
    let n = p.len();
    (0..n).map(|i| (0..n).map(|j| (i..=j).map(|l| &p[i][l] * &q[l][j]).sum()).collect()).collect()
}

/// Inverse of a unit upper triangular matrix by back substitution.
fn dinv(m: &Dense) -> Dense {
    let n = m.len();
    let mut x = vec![vec![BigInt::from(0); n]; n];
    #[allow(clippy::needless_range_loop)]
    for j in 0..n {
        x[j][j] = BigInt::from(1);
        for i in (0..j).rev() {
            let s: BigInt = (i + 1..=j).map(|l| &m[i][l] * &x[l][j]).sum();
            x[i][j] = -s;
        }
    }
    x
}

fn is_identity_row(m: &Dense, r: usize) -> bool {
    m[r].iter().enumerate().all(|(j, v)| *v == BigInt::from((j == r) as i32))
}

/// `U_n`: rows `0..n` of every block row are identity rows.
fn in_level(m: &Dense, k: usize, n: usize) -> bool {
    (0..n).all(|i| (0..3).all(|b| is_identity_row(m, b * k + i)))
}

/// `N`: the `a`, `b` and `c` blocks vanish.
fn in_normal(m: &Dense, k: usize) -> bool {
    (0..k).all(|i| (0..k).all(|j| m[i][k + j] == BigInt::from(0) && m[k + i][2 * k + j] == BigInt::from(0)) && m[2 * k + i][3 * k] == BigInt::from(0))
}

/// `max(n, Rⁿ)` of a `k×k` block stored at `(r, c)` of a dense matrix.
fn block_reach(rows: &[Vec<BigInt>], n: usize) -> usize {
    rows.iter().take(n).map(|r| r.iter().rposition(|v| *v != BigInt::from(0)).map_or(0, |j| j + 1)).max().unwrap_or(0)
}

fn window_oracle(x: &UElement, n: usize) -> (usize, usize) {
    let k = x.k;
    let m = dense(x);
    let u: Vec<Vec<BigInt>> = (0..k).map(|i| m[i][k..2 * k].to_vec()).collect();
    let v: Vec<Vec<BigInt>> = (0..k).map(|i| m[k + i][2 * k..3 * k].to_vec()).collect();
    let xb: Vec<Vec<BigInt>> = (0..k).map(|i| m[i][2 * k..3 * k].to_vec()).collect();
    let uv_x: Vec<Vec<BigInt>> =
        (0..k).map(|i| (0..k).map(|j| (0..k).map(|l| &u[i][l] * &v[l][j]).sum::<BigInt>() - &xb[i][j]).collect()).collect();
    let n2 = n.max(block_reach(&u, n));
    let n3 = n2.max(block_reach(&uv_x, n)).max(block_reach(&v, n));
    (n2, n3)
}

/// `g` fixes `XU_n` iff `X⁻¹gX ∈ U_n`.
fn fixes_oracle(g: &UElement, x: &UElement, n: usize) -> bool {
    let dx = dense(x);
    in_level(&dmul(&dmul(&dinv(&dx), &dense(g)), &dx), x.k, n)
}

fn criterion_7() -> Outcome {
    let (mut total, mut inconclusive, mut witnesses) = (0, 0, 0);
    for n in 1..=4 {
        let cfg = SweepConfig {
            n,
            k: U_K,
            samples: U_SAMPLES_PER_N,
            seed: SEED + n as u64,
            entry_cap: 3,
        };
        let report = run_sweep(&cfg);
        let mut rng = case_rng(SEED, &format!("acceptance/u/{n}"));
        for c in &report.cases {
            total += 1;
            let x = &c.element;
            let tag = || format!("n={n} case {}", c.index);
            ensure(c.status != Status::Fail, || format!("{}: {}", tag(), serde_json::to_string(c).unwrap()))?;
            let (n2, n3) = window_oracle(x, n);
            let w = c.node_rank.window;
            ensure(w == window(x, n) && (w.n2, w.n3) == (n2, n3), || format!("{}: window {w:?} vs ({n2}, {n3})", tag()))?;
            let b = sample_level(&mut rng, U_K, n, 3);
            let xb = undense(U_K, &dmul(&dense(x), &dense(&b)));
            ensure(coset_eq(x, &xb, n) == Ok(true) && window_oracle(&xb, n) == (n2, n3), || {
                format!("{}: window changes inside the coset", tag())
            })?;
            if n3 > U_K {
                ensure(c.status == Status::Inconclusive, || format!("{}: N₃ > k but status {:?}", tag(), c.status))?;
                inconclusive += 1;
                continue;
            }
            let nr = &c.node_rank;
            let formula = n3.saturating_sub(n2 + 1);
            ensure(nr.fixing_depth == n3 && nr.formula_rank == formula && nr.sampled_rank == formula, || {
                format!("{}: node rank report {nr:?}", tag())
            })?;
            ensure(nr.n2_invariance_failures.is_empty() && nr.n3_invariance_failures.is_empty(), || {
                format!("{}: orbit invariance fails", tag())
            })?;
            if n3 > n {
                let g = fixing_depth(x, n).1.ok_or_else(|| format!("{}: no moving witness", tag()))?;
                ensure(nr.moving_witness.as_deref() == Some(g.to_string().as_str()), || format!("{}: reported witness differs", tag()))?;
                ensure(g.row + 1 == n3 && !fixes_oracle(&g.to_element(U_K), x, n), || format!("{}: witness {g} does not move", tag()))?;
                witnesses += 1;
            }
            let fixers = elementaries(U_K, n3);
            for _ in 0..2.min(fixers.len()) {
                let g = fixers[rng.gen_range(0..fixers.len())];
                ensure(fixes_oracle(&g.to_element(U_K), x, n), || format!("{}: {g} at depth ≥ N₃ moves the coset", tag()))?;
            }
        }
    }
    let rate = inconclusive as f64 / total as f64;
    ensure(total >= U_SAMPLES_PER_N && rate < MAX_INCONCLUSIVE_RATE, || format!("inconclusive {inconclusive}/{total}"))?;
    Ok(format!("{total} X, {inconclusive} inconclusive ({:.1}%), {witnesses} moving witnesses", 100.0 * rate))
}

fn criterion_8() -> Outcome {
    let k = 6;
    for i in 0..ALGEBRA_TRIPLES {
        let mut rng = case_rng(SEED, &format!("acceptance/algebra/{i}"));
        let [a, b, c] = [0, 1, 2].map(|_| sample_level(&mut rng, k, 0, 3));
        let p = rng.gen_range(0..=k);
        let [x, y] = [0, 1].map(|_| sample_level(&mut rng, k, p, 3));
        let [m1, m2] = [0, 1].map(|_| sample_normal(&mut rng, k, 3));
        let mul = |p: &UElement, q: &UElement| u_mul(p, q).unwrap();
        let (da, db, dc) = (dense(&a), dense(&b), dense(&c));
        let ab = mul(&a, &b);
        ensure(dense(&ab) == dmul(&da, &db), || format!("triple {i}: product differs from the matrix product"))?;
        ensure(mul(&ab, &c) == mul(&a, &mul(&b, &c)) && dmul(&dense(&ab), &dc) == dense(&mul(&a, &mul(&b, &c))), || {
            format!("triple {i}: associativity")
        })?;
        let ai = u_inv(&a);
        ensure(dense(&ai) == dinv(&da) && mul(&a, &ai).is_identity() && mul(&ai, &a).is_identity(), || format!("triple {i}: inverse"))?;
        ensure(mul(&a, &UElement::identity(k)) == a && mul(&UElement::identity(k), &a) == a, || format!("triple {i}: identity"))?;
        ensure(in_level(&dense(&x), k, p) && in_level(&dense(&y), k, p), || format!("triple {i}: sample outside U_{p}"))?;
        ensure(in_level(&dense(&mul(&x, &y)), k, p) && in_level(&dense(&u_inv(&x)), k, p), || format!("triple {i}: U_{p} not closed"))?;
        ensure(in_normal(&dense(&m1), k) && in_normal(&dense(&m2), k), || format!("triple {i}: sample outside N"))?;
        ensure(in_normal(&dense(&mul(&mul(&a, &m1), &ai)), k), || format!("triple {i}: N not normal"))?;
        ensure(mul(&m1, &m2) == mul(&m2, &m1), || format!("triple {i}: N not abelian"))?;
        let comm = mul(&mul(&a, &b), &mul(&ai, &u_inv(&b)));
        ensure(in_normal(&dense(&comm), k), || format!("triple {i}: commutator outside N"))?;
    }
    Ok(format!("{ALGEBRA_TRIPLES} triples at k={k}"))
}

// ---------------------------------------------------------------- bounds

/// Ordinals below `ω^ω` as coefficient vectors indexed by exponent.
#[derive(Clone, Debug, PartialEq)]
struct Cnf(Vec<u64>);

impl Cnf {
    fn parse(s: &str) -> Cnf {
        let mut c = Vec::new();
        for term in s.split('+') {
            let (base, coef) = match term.split_once('*') {
                Some((b, k)) => (b, k.parse::<u64>().unwrap()),
                None => (term, 1),
            };
            let (e, coef) = match base {
                "w" => (1, coef),
                b if b.starts_with("w^") => (b[2..].parse::<usize>().unwrap(), coef),
                b => (0, b.parse::<u64>().unwrap() * coef),
            };
            if c.len() <= e {
                c.resize(e + 1, 0);
            }
            c[e] += coef;
        }
        Cnf(c).trim()
    }

    fn trim(mut self) -> Cnf {
        while self.0.last() == Some(&0) {
            self.0.pop();
        }
        self
    }

    fn deg(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    fn add(&self, o: &Cnf) -> Cnf {
        let Some(e) = o.deg() else { return self.clone() };
        let mut out = o.0.clone();
        for (i, &v) in self.0.iter().enumerate().skip(e) {
            if i == e {
                out[e] += v;
            } else {
                if out.len() <= i {
                    out.resize(i + 1, 0);
                }
                out[i] = v;
            }
        }
        Cnf(out).trim()
    }

    /// Left distributivity over the terms of `o`, largest first.
    fn mul(&self, o: &Cnf) -> Cnf {
        let Some(d) = self.deg() else { return Cnf(vec![]) };
        let mut acc = Cnf(vec![]);
        for (f, &c) in o.0.iter().enumerate().rev().filter(|(_, &c)| c > 0) {
            let term = if f == 0 {
                let mut t = self.0.clone();
                t[d] *= c;
                Cnf(t)
            } else {
                let mut t = vec![0; d + f + 1];
                t[d + f] = c;
                Cnf(t)
            };
            acc = acc.add(&term);
        }
        acc
    }

    fn render(&self) -> String {
        if self.0.is_empty() {
            return "0".into();
        }
        let mut parts = Vec::new();
        for (e, &c) in self.0.iter().enumerate().rev().filter(|(_, &c)| c > 0) {
            parts.push(match (e, c) {
                (0, c) => c.to_string(),
                (1, 1) => "w".into(),
                (1, c) => format!("w*{c}"),
                (e, 1) => format!("w^{e}"),
                (e, c) => format!("w^{e}*{c}"),
            });
        }
        parts.join("+")
    }
}

fn expected_bound(kind: &str, alpha: &Cnf, beta: &Cnf) -> Cnf {
    match kind {
        "extension" => beta.mul(&Cnf(vec![0, 1]).mul(alpha).add(&Cnf(vec![1]))),
        _ => beta.add(alpha),
    }
}

fn run_bound(kind: &str, alpha: &str, beta: &str) -> Result<String, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_ncg"))
        .args(["bound", "--kind", kind, "--alpha", alpha, "--beta", beta])
        .output()
        .map_err(|e| e.to_string())?;
    ensure(out.status.success(), || format!("bound {kind} {alpha} {beta}: {}", String::from_utf8_lossy(&out.stderr)))?;
    Ok(String::from_utf8_lossy(&out.stdout).trim().to_string())
}

const BOUND_TABLE: [(&str, &str, &str); 20] = [
    ("extension", "1", "1"),
    ("extension", "0", "3"),
    ("extension", "2", "1"),
    ("extension", "1", "2"),
    ("extension", "w", "1"),
    ("extension", "w", "w"),
    ("extension", "w^2*3+w+1", "w+2"),
    ("extension", "3", "w^2"),
    ("extension", "w+1", "w*2"),
    ("extension", "5", "0"),
    ("wreath", "0", "2"),
    ("wreath", "1", "1"),
    ("wreath", "w", "3"),
    ("wreath", "3", "w"),
    ("wreath", "w^2*3+w+1", "w+2"),
    ("wreath", "w+1", "w^3"),
    ("semidirect", "2", "w"),
    ("semidirect", "w*2", "w^2+1"),
    ("semidirect", "0", "w^4*2"),
    ("semidirect", "w^3+5", "w^3*2+w"),
];

fn criterion_9() -> Outcome {
    let headline = run_bound("extension", "1", "1")?;
    ensure(headline == "w+1", || format!("β·(ω·α+1) at α=β=1 printed {headline}"))?;
    for (kind, alpha, beta) in BOUND_TABLE {
        let want = expected_bound(kind, &Cnf::parse(alpha), &Cnf::parse(beta)).render();
        let got = run_bound(kind, alpha, beta)?;
        ensure(got == want, || format!("{kind} α={alpha} β={beta}: printed {got}, oracle {want}"))?;
    }
    Ok(format!("headline w+1 and {} table rows", BOUND_TABLE.len()))
}

fn cnf_oracle_sanity() {
    let w = Cnf::parse("w");
    assert_eq!(Cnf::parse("1").add(&w), w);
    assert_eq!(w.add(&Cnf::parse("1")).render(), "w+1");
    assert_eq!(Cnf::parse("2").mul(&w), w);
    assert_eq!(w.mul(&Cnf::parse("2")).render(), "w*2");
    assert_eq!(Cnf::parse("w+1").mul(&Cnf::parse("w+1")).render(), "w^2+w+1");
    assert_eq!(Cnf::parse("w^2*3+w+1").render(), "w^2*3+w+1");
}

fn main() {
    cnf_oracle_sanity();
    let criteria: [Criterion; 9] = [
        ("tree rank oracles agree", criterion_1),
        ("level and concatenation bounds", criterion_2),
        ("lexicographic relation bound", criterion_3),
        ("finite balanced-rank correspondence", criterion_4),
        ("rank shift for G ≤ Aut(Γ)", criterion_5),
        ("extension pipeline", criterion_6),
        ("U window formulas", criterion_7),
        ("U algebra", criterion_8),
        ("symbolic bounds", criterion_9),
    ];
    let mut failed = Vec::new();
    for (i, ((name, run), limit)) in criteria.into_iter().zip(LIMITS).enumerate() {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let (ok, detail) = match outcome {
            Ok(d) if elapsed < limit => (true, d),
            Ok(d) => (false, format!("{d}; over time")),
            Err(e) => (false, e),
        };
        println!(
            "criterion {}: {} {name}: {detail} [{:.2}s / {}s]",
            i + 1,
            if ok { "PASS" } else { "FAIL" },
            elapsed.as_secs_f64(),
            limit.as_secs()
        );
        if !ok {
            failed.push(i + 1);
        }
    }
    if !failed.is_empty() {
        println!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
    println!("all {} criteria passed", LIMITS.len());
}
