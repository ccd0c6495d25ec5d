use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::GroupError;

/// Index of an element in a [`PermGroup`]'s sorted element list.
pub type Elem = u32;

/// A permutation of `{0,…,N−1}` stored as its image array.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<u32>", into = "Vec<u32>")]
pub struct Perm(Box<[u32]>);

impl Perm {
    pub fn identity(n: usize) -> Self {
        Perm((0..n as u32).collect())
    }

    pub fn from_images(images: Vec<u32>) -> Result<Self, GroupError> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &i in &images {
            let i = i as usize;
            if i >= n || seen[i] {
                return Err(GroupError::NotAPermutation(images.clone()));
            }
            seen[i] = true;
        }
        Ok(Perm(images.into_boxed_slice()))
    }

    /// Product of disjoint or overlapping cycles, applied right to left.
    pub fn from_cycles(n: usize, cycles: &[&[u32]]) -> Result<Self, GroupError> {
        let mut p = Perm::identity(n);
        for c in cycles.iter().rev() {
            let mut img: Vec<u32> = (0..n as u32).collect();
            for (i, &a) in c.iter().enumerate() {
                let b = c[(i + 1) % c.len()];
                if a as usize >= n || b as usize >= n {
                    return Err(GroupError::NotAPermutation(c.to_vec()));
                }
                img[a as usize] = b;
            }
            p = Perm::from_images(img)?.compose(&p);
        }
        Ok(p)
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn images(&self) -> &[u32] {
        &self.0
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.0[x] as usize
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Perm) -> Perm {
        Perm(other.0.iter().map(|&x| self.0[x as usize]).collect())
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0u32; self.0.len()];
        for (i, &x) in self.0.iter().enumerate() {
            inv[x as usize] = i as u32;
        }
        Perm(inv.into_boxed_slice())
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &x)| i as u32 == x)
    }
}

impl TryFrom<Vec<u32>> for Perm {
    type Error = GroupError;
    fn try_from(v: Vec<u32>) -> Result<Self, GroupError> {
        Perm::from_images(v)
    }
}

impl From<Perm> for Vec<u32> {
    fn from(p: Perm) -> Vec<u32> {
        p.0.into_vec()
    }
}

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{x}")?;
        }
        f.write_str("]")
    }
}

/// A finite permutation group with all elements enumerated. Elements are
/// kept in lexicographic order of their image arrays, so index 0 is the
/// identity.
#[derive(Debug, Clone)]
pub struct PermGroup {
    degree: usize,
    elements: Vec<Perm>,
    index: HashMap<Perm, Elem>,
    inverses: Vec<Elem>,
}

impl PermGroup {
    /// Closure of `gens` under composition, failing once more than `cap`
    /// elements appear.
    pub fn generate(degree: usize, gens: &[Perm], cap: usize) -> Result<Self, GroupError> {
        for g in gens {
            if g.degree() != degree {
                return Err(GroupError::DegreeMismatch {
                    expected: degree,
                    found: g.degree(),
                });
            }
        }
        let id = Perm::identity(degree);
        let mut seen: HashMap<Perm, ()> = HashMap::new();
        seen.insert(id.clone(), ());
        let mut queue = VecDeque::from([id]);
        let mut all = Vec::new();
        while let Some(p) = queue.pop_front() {
            for g in gens {
                let q = g.compose(&p);
                if !seen.contains_key(&q) {
                    if seen.len() >= cap {
                        return Err(GroupError::CapExceeded { cap });
                    }
                    seen.insert(q.clone(), ());
                    queue.push_back(q);
                }
            }
            all.push(p);
        }
        Ok(Self::from_sorted(degree, all))
    }

    /// Indexes a set of permutations already known to be closed under
    /// composition and inverses.
    pub fn from_closed_set(degree: usize, elements: Vec<Perm>) -> Self {
        Self::from_sorted(degree, elements)
    }

    fn from_sorted(degree: usize, mut elements: Vec<Perm>) -> Self {
        elements.sort_unstable();
        elements.dedup();
        let index: HashMap<Perm, Elem> = elements.iter().enumerate().map(|(i, p)| (p.clone(), i as Elem)).collect();
        let inverses = elements.iter().map(|p| index[&p.inverse()]).collect();
        PermGroup {
            degree,
            elements,
            index,
            inverses,
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn identity(&self) -> Elem {
        0
    }

    pub fn elements(&self) -> &[Perm] {
        &self.elements
    }

    pub fn perm(&self, e: Elem) -> &Perm {
        &self.elements[e as usize]
    }

    pub fn index_of(&self, p: &Perm) -> Option<Elem> {
        self.index.get(p).copied()
    }

    /// `a·b`, acting on points as `a ∘ b`.
    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        let p = self.elements[a as usize].compose(&self.elements[b as usize]);
        self.index[&p]
    }

    #[inline]
    pub fn inv(&self, a: Elem) -> Elem {
        self.inverses[a as usize]
    }

    #[inline]
    pub fn act(&self, a: Elem, x: usize) -> usize {
        self.elements[a as usize].apply(x)
    }

    pub fn conj(&self, g: Elem, x: Elem) -> Elem {
        // g x g⁻¹
        self.mul(self.mul(g, x), self.inv(g))
    }

    pub fn full(self: &Arc<Self>) -> Subgroup {
        Subgroup::from_mask(self, vec![true; self.order()])
    }

    pub fn trivial(self: &Arc<Self>) -> Subgroup {
        let mut mask = vec![false; self.order()];
        mask[0] = true;
        Subgroup::from_mask(self, mask)
    }

    /// Subgroup generated by `gens`.
    pub fn subgroup(self: &Arc<Self>, gens: &[Elem]) -> Subgroup {
        let mut mask = vec![false; self.order()];
        mask[0] = true;
        let mut queue = VecDeque::from([0]);
        while let Some(e) = queue.pop_front() {
            for &g in gens {
                let p = self.mul(g, e);
                if !mask[p as usize] {
                    mask[p as usize] = true;
                    queue.push_back(p);
                }
            }
        }
        let elems = (0..self.order() as Elem).filter(|&e| mask[e as usize]).collect();
        let mut gens: Vec<Elem> = gens.iter().copied().filter(|&g| g != 0).collect();
        gens.sort_unstable();
        gens.dedup();
        Subgroup {
            group: Arc::clone(self),
            mask,
            elems,
            gens,
        }
    }

    pub fn subgroup_of_perms(self: &Arc<Self>, gens: &[Perm]) -> Result<Subgroup, GroupError> {
        let idx = gens
            .iter()
            .map(|p| self.index_of(p).ok_or_else(|| GroupError::NotInGroup(p.to_string())))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(self.subgroup(&idx))
    }

    /// Pointwise stabilizer of `points`.
    pub fn stabilizer(self: &Arc<Self>, points: &[usize]) -> Subgroup {
        let mask = self
            .elements
            .iter()
            .map(|p| points.iter().all(|&x| p.apply(x) == x))
            .collect();
        Subgroup::from_mask(self, mask)
    }
}

/// A subgroup of an enumerated [`PermGroup`], with a membership mask and a
/// small generating set.
#[derive(Clone)]
pub struct Subgroup {
    group: Arc<PermGroup>,
    mask: Vec<bool>,
    elems: Vec<Elem>,
    gens: Vec<Elem>,
}

impl fmt::Debug for Subgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Subgroup")
            .field("order", &self.elems.len())
            .field("gens", &self.gens)
            .finish()
    }
}

impl PartialEq for Subgroup {
    fn eq(&self, other: &Self) -> bool {
        self.elems == other.elems
    }
}

impl Eq for Subgroup {}

impl Subgroup {
    /// The mask must describe a subgroup; a generating set is chosen
    /// greedily in element order.
    pub fn from_mask(group: &Arc<PermGroup>, mask: Vec<bool>) -> Self {
        let elems: Vec<Elem> = (0..group.order() as Elem).filter(|&e| mask[e as usize]).collect();
        let mut closure = vec![false; group.order()];
        closure[0] = true;
        let mut members = vec![0 as Elem];
        let mut gens = Vec::new();
        for &e in &elems {
            if closure[e as usize] {
                continue;
            }
            gens.push(e);
            // extend the closure by the new generator
            let mut queue: VecDeque<Elem> = members.iter().copied().collect();
            while let Some(x) = queue.pop_front() {
                for &g in &gens {
                    let p = group.mul(g, x);
                    if !closure[p as usize] {
                        closure[p as usize] = true;
                        members.push(p);
                        queue.push_back(p);
                    }
                }
            }
        }
        debug_assert_eq!(members.len(), elems.len(), "mask is not a subgroup");
        Subgroup {
            group: Arc::clone(group),
            mask,
            elems,
            gens,
        }
    }

    pub fn group(&self) -> &Arc<PermGroup> {
        &self.group
    }

    pub fn order(&self) -> usize {
        self.elems.len()
    }

    pub fn elements(&self) -> &[Elem] {
        &self.elems
    }

    pub fn generators(&self) -> &[Elem] {
        &self.gens
    }

    pub fn mask(&self) -> &[bool] {
        &self.mask
    }

    #[inline]
    pub fn contains(&self, e: Elem) -> bool {
        self.mask[e as usize]
    }

    pub fn is_trivial(&self) -> bool {
        self.elems.len() == 1
    }

    pub fn is_subset(&self, other: &Subgroup) -> bool {
        self.elems.iter().all(|&e| other.contains(e))
    }

    pub fn intersect(&self, other: &Subgroup) -> Subgroup {
        let mask = self.mask.iter().zip(&other.mask).map(|(a, b)| *a && *b).collect();
        Subgroup::from_mask(&self.group, mask)
    }

    /// Subgroup generated by both.
    pub fn join(&self, other: &Subgroup) -> Subgroup {
        let gens: Vec<Elem> = self.gens.iter().chain(&other.gens).copied().collect();
        self.group.subgroup(&gens)
    }

    /// `g⁻¹ H g`.
    pub fn conjugate_by_inverse(&self, g: Elem) -> Subgroup {
        let gi = self.group.inv(g);
        let mut mask = vec![false; self.group.order()];
        for &e in &self.elems {
            mask[self.group.conj(gi, e) as usize] = true;
        }
        Subgroup::from_mask(&self.group, mask)
    }

    /// Whether `self` is normalised by every element of `by`.
    pub fn is_normalized_by(&self, by: &Subgroup) -> bool {
        by.gens
            .iter()
            .all(|&g| self.gens.iter().all(|&n| self.contains(self.group.conj(g, n))))
    }

    pub fn perms(&self) -> Vec<Perm> {
        self.gens.iter().map(|&g| self.group.perm(g).clone()).collect()
    }

    /// Left cosets `gH`, each as its sorted element list, ordered by least
    /// element.
    pub fn left_cosets(&self, within: &Subgroup) -> Vec<Vec<Elem>> {
        let mut seen = vec![false; self.group.order()];
        let mut out = Vec::new();
        for &g in &within.elems {
            if seen[g as usize] {
                continue;
            }
            let mut c: Vec<Elem> = self.elems.iter().map(|&h| self.group.mul(g, h)).collect();
            c.sort_unstable();
            for &x in &c {
                seen[x as usize] = true;
            }
            out.push(c);
        }
        out
    }
}
