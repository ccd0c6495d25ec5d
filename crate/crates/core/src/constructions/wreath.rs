use std::sync::Arc;

use super::action::ActionTable;
use super::semidirect::{semidirect, SemidirectProduct};
use super::ConstructionError;
use crate::groups::{Perm, PermGroup, PermGroupChain, Subgroup};

/// `H^k` acting on `k` disjoint copies of `H`'s points, with the chain
/// `K_n = Π_{i<n} H_n × Π_{i≥n} H` for `n = 0,…,depth`. Element tuples are
/// returned in the group's element order.
pub fn power_chain(h: &PermGroupChain, k: usize, depth: usize, cap: usize) -> Result<(PermGroupChain, Vec<Vec<u32>>), ConstructionError> {
    let hg = h.group();
    let nh = hg.order();
    let total = nh.checked_pow(k as u32).filter(|&t| t <= cap).ok_or(ConstructionError::CapExceeded {
        cap,
        needed: usize::MAX,
    })?;
    let d = hg.degree();
    let mut tuples = Vec::with_capacity(total);
    let mut perms = Vec::with_capacity(total);
    for code in 0..total {
        let mut t = Vec::with_capacity(k);
        let mut c = code;
        for _ in 0..k {
            t.push((c % nh) as u32);
            c /= nh;
        }
        let mut img = Vec::with_capacity(k * d);
        for (i, &e) in t.iter().enumerate() {
            img.extend(hg.perm(e).images().iter().map(|&x| x + (i * d) as u32));
        }
        perms.push(Perm::from_images(img).expect("blockwise permutation"));
        tuples.push(t);
    }
    let group = Arc::new(PermGroup::from_closed_set(k * d, perms.clone()));
    let mut elem_tuple = vec![Vec::new(); total];
    for (p, t) in perms.iter().zip(tuples) {
        elem_tuple[group.index_of(p).expect("own element") as usize] = t;
    }
    let levels: Vec<Subgroup> = (0..=depth)
        .map(|n| {
            let hn = h.level_or_last(n);
            let full = h.level_or_last(0);
            let mask = elem_tuple
                .iter()
                .map(|t| t.iter().enumerate().all(|(i, &e)| if i < n { hn.contains(e) } else { full.contains(e) }))
                .collect();
            Subgroup::from_mask(&group, mask)
        })
        .collect();
    Ok((PermGroupChain::from_subgroups(levels), elem_tuple))
}

/// `G ≀ H = G ⋉ H^k` with `ρ(g)(F) = F∘g⁻¹`, for `G` acting on `k` points.
/// The chain is `G_⟨n⟩ × Π_{i<n} H_n × Π_{i≥n} H`.
pub fn wreath(g: &PermGroupChain, h: &PermGroupChain, cap: usize) -> Result<SemidirectProduct, ConstructionError> {
    let k = g.degree();
    let gchain = PermGroupChain::stabilizer_chain(g.group().clone());
    let depth = gchain.depth().max(h.depth());
    let (hk, tuples) = power_chain(h, k, depth, cap)?;
    let gg = g.group();
    let hkg = hk.group();
    let mut index = std::collections::HashMap::new();
    for (e, t) in tuples.iter().enumerate() {
        index.insert(t.clone(), e as u32);
    }
    let rho = (0..gg.order() as u32)
        .map(|x| {
            let inv = gg.perm(gg.inv(x));
            tuples
                .iter()
                .map(|f| {
                    let moved: Vec<u32> = (0..k).map(|i| f[inv.apply(i)]).collect();
                    index[&moved]
                })
                .collect()
        })
        .collect();
    debug_assert_eq!(hkg.order(), tuples.len());
    semidirect(&gchain, &hk, &ActionTable { rho }, cap)
}
