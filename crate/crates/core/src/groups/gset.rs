use std::sync::Arc;

use super::perm::{Elem, Perm, PermGroup, Subgroup};
use super::GroupError;

/// A finite set with an action of an enumerated group.
pub trait GSet: Send + Sync {
    fn len(&self) -> usize;
    /// `g·x`.
    fn act(&self, g: Elem, x: usize) -> usize;
    fn label(&self, x: usize) -> String;

    fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// The natural action on `{0,…,N−1}`.
pub struct Points {
    group: Arc<PermGroup>,
}

impl Points {
    pub fn new(group: Arc<PermGroup>) -> Self {
        Points { group }
    }
}

impl GSet for Points {
    fn len(&self) -> usize {
        self.group.degree()
    }

    fn act(&self, g: Elem, x: usize) -> usize {
        self.group.act(g, x)
    }

    fn label(&self, x: usize) -> String {
        x.to_string()
    }
}

/// Disjoint union of left coset spaces `G/H_i` with left translation.
pub struct CosetSpace {
    group: Arc<PermGroup>,
    tags: Vec<usize>,
    offsets: Vec<usize>,
    coset_of: Vec<Vec<u32>>,
    reps: Vec<Vec<Elem>>,
}

impl CosetSpace {
    /// `⋃_i G/H_i`, each block tagged with the given number (usually the
    /// chain level).
    pub fn new(group: Arc<PermGroup>, subgroups: &[(usize, &Subgroup)], cap: usize) -> Result<Self, GroupError> {
        let full = group.full();
        let mut offsets = Vec::new();
        let mut coset_of = Vec::new();
        let mut reps = Vec::new();
        let mut tags = Vec::new();
        let mut total = 0;
        for &(tag, h) in subgroups {
            let cosets = h.left_cosets(&full);
            total += cosets.len();
            if total > cap {
                return Err(GroupError::CapExceeded { cap });
            }
            let mut of = vec![0u32; group.order()];
            for (i, c) in cosets.iter().enumerate() {
                for &e in c {
                    of[e as usize] = i as u32;
                }
            }
            offsets.push(total - cosets.len());
            reps.push(cosets.iter().map(|c| c[0]).collect());
            coset_of.push(of);
            tags.push(tag);
        }
        offsets.push(total);
        Ok(CosetSpace {
            group,
            tags,
            offsets,
            coset_of,
            reps,
        })
    }

    /// Which block a point lies in, and its coset index there.
    pub fn locate(&self, x: usize) -> (usize, usize) {
        let b = self.offsets.partition_point(|&o| o <= x) - 1;
        (b, x - self.offsets[b])
    }

    pub fn block_range(&self, b: usize) -> std::ops::Range<usize> {
        self.offsets[b]..self.offsets[b + 1]
    }

    pub fn blocks(&self) -> usize {
        self.tags.len()
    }

    /// The point `gH_b`.
    pub fn point_of(&self, b: usize, g: Elem) -> usize {
        self.offsets[b] + self.coset_of[b][g as usize] as usize
    }

    /// Least element of the coset at `x`.
    pub fn representative(&self, x: usize) -> Elem {
        let (b, i) = self.locate(x);
        self.reps[b][i]
    }
}

impl GSet for CosetSpace {
    fn len(&self) -> usize {
        *self.offsets.last().unwrap_or(&0)
    }

    fn act(&self, g: Elem, x: usize) -> usize {
        let (b, i) = self.locate(x);
        let y = self.group.mul(g, self.reps[b][i]);
        self.offsets[b] + self.coset_of[b][y as usize] as usize
    }

    fn label(&self, x: usize) -> String {
        let (b, i) = self.locate(x);
        format!("{}:{}", self.tags[b], self.group.perm(self.reps[b][i]))
    }
}

/// An action given by the images of the generators of `G₀`, expanded to a
/// full table and checked to be a homomorphism.
pub struct ExplicitGSet {
    size: usize,
    table: Vec<Vec<u32>>,
}

impl ExplicitGSet {
    pub fn new(group: &Arc<PermGroup>, generators: &[Perm], images: &[Perm]) -> Result<Self, GroupError> {
        if generators.len() != images.len() {
            return Err(GroupError::BadAction(format!(
                "{} generators but {} images",
                generators.len(),
                images.len()
            )));
        }
        let size = images.first().map_or(0, Perm::degree);
        if images.iter().any(|p| p.degree() != size) {
            return Err(GroupError::BadAction("images of different sizes".into()));
        }
        let gens: Vec<Elem> = generators
            .iter()
            .map(|p| group.index_of(p).ok_or_else(|| GroupError::NotInGroup(p.to_string())))
            .collect::<Result<_, _>>()?;
        let mut table: Vec<Option<Perm>> = vec![None; group.order()];
        table[0] = Some(Perm::identity(size));
        let mut queue = std::collections::VecDeque::from([0 as Elem]);
        while let Some(e) = queue.pop_front() {
            let here = table[e as usize].clone().expect("visited");
            for (g, img) in gens.iter().zip(images) {
                let p = group.mul(*g, e);
                let q = img.compose(&here);
                match &table[p as usize] {
                    Some(existing) if *existing != q => {
                        return Err(GroupError::BadAction(format!(
                            "images do not define an action: element {} gets two images",
                            group.perm(p)
                        )))
                    }
                    Some(_) => {}
                    None => {
                        table[p as usize] = Some(q);
                        queue.push_back(p);
                    }
                }
            }
        }
        let table: Vec<Vec<u32>> = table
            .into_iter()
            .map(|p| p.map(Vec::from))
            .collect::<Option<_>>()
            .ok_or_else(|| GroupError::BadAction("generators do not generate the group".into()))?;
        Ok(ExplicitGSet { size, table })
    }
}

impl GSet for ExplicitGSet {
    fn len(&self) -> usize {
        self.size
    }

    fn act(&self, g: Elem, x: usize) -> usize {
        self.table[g as usize][x] as usize
    }

    fn label(&self, x: usize) -> String {
        x.to_string()
    }
}

/// A set of disjoint classes of points of another G-set, acted on through
/// representatives. Only elements that permute the classes may act.
pub struct ClassSet<'a> {
    base: &'a dyn GSet,
    classes: Vec<Vec<usize>>,
    class_of: Vec<Option<usize>>,
}

impl<'a> ClassSet<'a> {
    /// Classes are sorted internally and ordered by least point.
    pub fn new(base: &'a dyn GSet, mut classes: Vec<Vec<usize>>) -> Self {
        for c in &mut classes {
            c.sort_unstable();
        }
        classes.sort();
        let mut class_of = vec![None; base.len()];
        for (i, c) in classes.iter().enumerate() {
            for &x in c {
                class_of[x] = Some(i);
            }
        }
        ClassSet { base, classes, class_of }
    }

    pub fn classes(&self) -> &[Vec<usize>] {
        &self.classes
    }

    pub fn class_of(&self, x: usize) -> Option<usize> {
        self.class_of[x]
    }

    /// Whether every generator of `h` maps classes onto classes.
    pub fn respects(&self, h: &Subgroup) -> bool {
        h.generators().iter().all(|&g| {
            self.classes.iter().all(|c| {
                let target = self.class_of[self.base.act(g, c[0])];
                target.is_some_and(|t| {
                    self.classes[t].len() == c.len()
                        && c.iter().all(|&x| self.class_of[self.base.act(g, x)] == Some(t))
                })
            })
        })
    }
}

impl GSet for ClassSet<'_> {
    fn len(&self) -> usize {
        self.classes.len()
    }

    fn act(&self, g: Elem, c: usize) -> usize {
        self.class_of[self.base.act(g, self.classes[c][0])].expect("acting element permutes the classes")
    }

    fn label(&self, c: usize) -> String {
        let inner: Vec<String> = self.classes[c].iter().map(|&x| self.base.label(x)).collect();
        format!("[{}]", inner.join(" "))
    }
}
