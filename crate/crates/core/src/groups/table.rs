use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use super::perm::{Elem, PermGroup, Subgroup};
use super::GroupError;

/// A finite group given by its multiplication table. Element 0 must be the
/// identity.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CayleyTable {
    pub order: usize,
    pub table: Vec<Vec<u32>>,
}

impl CayleyTable {
    pub fn new(order: usize, table: Vec<Vec<u32>>) -> Result<Self, GroupError> {
        let t = CayleyTable { order, table };
        t.validate()?;
        Ok(t)
    }

    pub fn validate(&self) -> Result<(), GroupError> {
        let n = self.order;
        if n == 0 || self.table.len() != n || self.table.iter().any(|r| r.len() != n) {
            return Err(GroupError::NotAGroup(format!("table must be {n}×{n} with n ≥ 1")));
        }
        if self.table.iter().flatten().any(|&x| x as usize >= n) {
            return Err(GroupError::NotAGroup("entry out of range".into()));
        }
        for a in 0..n {
            if self.table[0][a] as usize != a || self.table[a][0] as usize != a {
                return Err(GroupError::NotAGroup("element 0 is not the identity".into()));
            }
            if !self.table[a].contains(&0) {
                return Err(GroupError::NotAGroup(format!("element {a} has no inverse")));
            }
        }
        for a in 0..n {
            for b in 0..n {
                let ab = self.table[a][b] as usize;
                for c in 0..n {
                    if self.table[ab][c] != self.table[a][self.table[b][c] as usize] {
                        return Err(GroupError::NotAGroup(format!("({a}·{b})·{c} ≠ {a}·({b}·{c})")));
                    }
                }
            }
        }
        Ok(())
    }

    /// The cyclic group `ℤ_n`.
    pub fn cyclic(n: usize) -> Self {
        let table = (0..n).map(|a| (0..n).map(|b| ((a + b) % n) as u32).collect()).collect();
        CayleyTable { order: n, table }
    }

    /// Direct product, element `(a, b)` at index `a·|other| + b`.
    pub fn product(&self, other: &CayleyTable) -> Self {
        let m = other.order;
        let n = self.order * m;
        let table = (0..n)
            .map(|x| {
                (0..n)
                    .map(|y| {
                        let (a1, b1) = (x / m, x % m);
                        let (a2, b2) = (y / m, y % m);
                        self.table[a1][a2] * m as u32 + other.table[b1][b2]
                    })
                    .collect()
            })
            .collect();
        CayleyTable { order: n, table }
    }

    pub fn from_perm_group(g: &PermGroup) -> Self {
        let n = g.order() as Elem;
        let table = (0..n).map(|a| (0..n).map(|b| g.mul(a, b)).collect()).collect();
        CayleyTable {
            order: n as usize,
            table,
        }
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        self.table[a as usize][b as usize]
    }

    pub fn inv(&self, a: u32) -> u32 {
        self.table[a as usize].iter().position(|&x| x == 0).expect("validated") as u32
    }

    pub fn element_order(&self, a: u32) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != 0 {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order).all(|a| (0..self.order).all(|b| self.table[a][b] == self.table[b][a]))
    }

    /// Left regular representation as permutations of the element indices.
    pub fn regular_perms(&self) -> Vec<super::perm::Perm> {
        (0..self.order)
            .map(|a| super::perm::Perm::from_images(self.table[a].clone()).expect("rows are permutations"))
            .collect()
    }

    fn generators(&self) -> Vec<u32> {
        let mut closure = vec![false; self.order];
        closure[0] = true;
        let mut members = vec![0u32];
        let mut gens = Vec::new();
        for e in 0..self.order as u32 {
            if closure[e as usize] {
                continue;
            }
            gens.push(e);
            let mut queue: VecDeque<u32> = members.iter().copied().collect();
            while let Some(x) = queue.pop_front() {
                for &g in &gens {
                    let p = self.mul(g, x);
                    if !closure[p as usize] {
                        closure[p as usize] = true;
                        members.push(p);
                        queue.push_back(p);
                    }
                }
            }
        }
        gens
    }

    /// An isomorphism onto `other`, found by backtracking over generator
    /// images with matching element orders.
    pub fn find_isomorphism(&self, other: &CayleyTable) -> Option<Vec<u32>> {
        if self.order != other.order {
            return None;
        }
        let mut profile_a: Vec<usize> = (0..self.order as u32).map(|a| self.element_order(a)).collect();
        let mut profile_b: Vec<usize> = (0..other.order as u32).map(|b| other.element_order(b)).collect();
        let orders_b = profile_b.clone();
        profile_a.sort_unstable();
        profile_b.sort_unstable();
        if profile_a != profile_b {
            return None;
        }
        let gens = self.generators();
        let gen_orders: Vec<usize> = gens.iter().map(|&g| self.element_order(g)).collect();
        let mut images = vec![0u32; gens.len()];
        self.search(other, &gens, &gen_orders, &orders_b, &mut images, 0)
    }

    fn search(
        &self,
        other: &CayleyTable,
        gens: &[u32],
        gen_orders: &[usize],
        orders_b: &[usize],
        images: &mut Vec<u32>,
        i: usize,
    ) -> Option<Vec<u32>> {
        if i == gens.len() {
            return self.extend(other, gens, images);
        }
        for b in 0..other.order as u32 {
            if orders_b[b as usize] != gen_orders[i] {
                continue;
            }
            images[i] = b;
            if let Some(f) = self.search(other, gens, gen_orders, orders_b, images, i + 1) {
                return Some(f);
            }
        }
        None
    }

    /// Every automorphism, as permutations of the element indices.
    pub fn automorphisms(&self) -> Vec<super::perm::Perm> {
        let gens = self.generators();
        let orders: Vec<usize> = (0..self.order as u32).map(|a| self.element_order(a)).collect();
        let mut out = std::collections::BTreeSet::new();
        let mut images = vec![0u32; gens.len()];
        self.collect_autos(&gens, &orders, &mut images, 0, &mut out);
        out.into_iter()
            .map(|f| super::perm::Perm::from_images(f).expect("automorphisms are bijective"))
            .collect()
    }

    fn collect_autos(
        &self,
        gens: &[u32],
        orders: &[usize],
        images: &mut Vec<u32>,
        i: usize,
        out: &mut std::collections::BTreeSet<Vec<u32>>,
    ) {
        if i == gens.len() {
            if let Some(f) = self.extend(self, gens, images) {
                out.insert(f);
            }
            return;
        }
        for b in 0..self.order as u32 {
            if orders[b as usize] == orders[gens[i] as usize] {
                images[i] = b;
                self.collect_autos(gens, orders, images, i + 1, out);
            }
        }
    }

    /// Extends generator images to a homomorphism and checks it is bijective.
    fn extend(&self, other: &CayleyTable, gens: &[u32], images: &[u32]) -> Option<Vec<u32>> {
        let mut f: Vec<Option<u32>> = vec![None; self.order];
        f[0] = Some(0);
        let mut queue = VecDeque::from([0u32]);
        while let Some(x) = queue.pop_front() {
            let fx = f[x as usize].expect("visited");
            for (&g, &h) in gens.iter().zip(images) {
                let y = self.mul(g, x);
                let fy = other.mul(h, fx);
                match f[y as usize] {
                    Some(v) if v != fy => return None,
                    Some(_) => {}
                    None => {
                        f[y as usize] = Some(fy);
                        queue.push_back(y);
                    }
                }
            }
        }
        let f: Vec<u32> = f.into_iter().collect::<Option<_>>()?;
        let mut hit = vec![false; self.order];
        for &v in &f {
            if std::mem::replace(&mut hit[v as usize], true) {
                return None;
            }
        }
        // every product must be respected, not only generator steps
        for a in 0..self.order as u32 {
            for b in 0..self.order as u32 {
                if f[self.mul(a, b) as usize] != other.mul(f[a as usize], f[b as usize]) {
                    return None;
                }
            }
        }
        Some(f)
    }
}

/// `H/K` for `K ⊴ H`, cosets ordered by least element.
pub fn quotient_table(h: &Subgroup, k: &Subgroup) -> Result<CayleyTable, GroupError> {
    if !k.is_subset(h) {
        return Err(GroupError::NotAGroup("quotient by a non-subgroup".into()));
    }
    if !k.is_normalized_by(h) {
        return Err(GroupError::NotNormal);
    }
    let g = h.group();
    let cosets = k.left_cosets(h);
    let mut coset_of = vec![u32::MAX; g.order()];
    for (i, c) in cosets.iter().enumerate() {
        for &e in c {
            coset_of[e as usize] = i as u32;
        }
    }
    let table = cosets
        .iter()
        .map(|a| cosets.iter().map(|b| coset_of[g.mul(a[0], b[0]) as usize]).collect())
        .collect();
    CayleyTable::new(cosets.len(), table)
}
