use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::perm::{Perm, PermGroup, Subgroup};
use super::GroupError;

pub const DEFAULT_CAP: usize = 10_000;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelSpec {
    pub generators: Vec<Perm>,
}

/// Serialized form of a chain: generators per level.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainSpec {
    pub degree: usize,
    pub levels: Vec<LevelSpec>,
}

/// A finite permutation group `G₀` with a decreasing chain of subgroups
/// `G₀ ⊇ G₁ ⊇ … ⊇ G_d`.
///
/// When the last level is trivial the chain is treated as continuing with
/// trivial groups forever; otherwise levels past `d` are unknown.
#[derive(Debug, Clone)]
pub struct PermGroupChain {
    group: Arc<PermGroup>,
    levels: Vec<Subgroup>,
    trivial: Subgroup,
}

impl PermGroupChain {
    pub fn from_spec(spec: &ChainSpec, cap: usize) -> Result<Self, GroupError> {
        let first = spec.levels.first().ok_or(GroupError::EmptyChain)?;
        let group = Arc::new(PermGroup::generate(spec.degree, &first.generators, cap)?);
        let mut levels: Vec<Subgroup> = Vec::with_capacity(spec.levels.len());
        levels.push(group.full());
        for (n, level) in spec.levels.iter().enumerate().skip(1) {
            let prev = &levels[n - 1];
            let mut idx = Vec::with_capacity(level.generators.len());
            for p in &level.generators {
                if p.degree() != spec.degree {
                    return Err(GroupError::DegreeMismatch {
                        expected: spec.degree,
                        found: p.degree(),
                    });
                }
                match group.index_of(p) {
                    Some(e) if prev.contains(e) => idx.push(e),
                    _ => {
                        return Err(GroupError::NotDecreasing {
                            level: n,
                            generator: p.to_string(),
                        })
                    }
                }
            }
            levels.push(group.subgroup(&idx));
        }
        Ok(Self::from_subgroups(levels))
    }

    pub fn from_json(s: &str, cap: usize) -> Result<Self, GroupError> {
        let spec: ChainSpec = serde_json::from_str(s).map_err(|e| GroupError::Json(e.to_string()))?;
        Self::from_spec(&spec, cap)
    }

    /// The levels must be decreasing subgroups of one group, starting with
    /// the whole group.
    pub fn from_subgroups(levels: Vec<Subgroup>) -> Self {
        assert!(!levels.is_empty(), "chain needs a level");
        let group = Arc::clone(levels[0].group());
        let trivial = group.trivial();
        PermGroupChain { group, levels, trivial }
    }

    /// `G_⟨n⟩`, the pointwise stabilizer of `{0,…,n−1}`, for `n ≤ degree`.
    pub fn stabilizer_chain(group: Arc<PermGroup>) -> Self {
        let levels = (0..=group.degree())
            .map(|n| group.stabilizer(&(0..n).collect::<Vec<_>>()))
            .collect();
        Self::from_subgroups(levels)
    }

    /// Stabilizer chain along an explicit point order.
    pub fn stabilizer_chain_along(group: Arc<PermGroup>, order: &[usize]) -> Self {
        let levels = (0..=order.len()).map(|n| group.stabilizer(&order[..n])).collect();
        Self::from_subgroups(levels)
    }

    pub fn to_spec(&self) -> ChainSpec {
        ChainSpec {
            degree: self.group.degree(),
            levels: self
                .levels
                .iter()
                .map(|l| LevelSpec {
                    generators: l.perms(),
                })
                .collect(),
        }
    }

    pub fn group(&self) -> &Arc<PermGroup> {
        &self.group
    }

    pub fn degree(&self) -> usize {
        self.group.degree()
    }

    /// Index of the last stored level.
    pub fn depth(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn levels(&self) -> &[Subgroup] {
        &self.levels
    }

    /// Whether levels past the depth are known (the last level is trivial).
    pub fn closes(&self) -> bool {
        self.levels.last().is_some_and(Subgroup::is_trivial)
    }

    /// `G_n`, or `None` past the depth of a chain that does not close.
    pub fn level(&self, n: usize) -> Option<&Subgroup> {
        match self.levels.get(n) {
            Some(l) => Some(l),
            None if self.closes() => Some(&self.trivial),
            None => None,
        }
    }

    /// `G_n`, falling back to the last stored level past the depth.
    pub fn level_or_last(&self, n: usize) -> &Subgroup {
        self.levels.get(n).unwrap_or_else(|| self.levels.last().expect("nonempty"))
    }

    /// `𝒢_k = (G_{k+n})_n`.
    pub fn shifted(&self, k: usize) -> Option<PermGroupChain> {
        let base = self.level(k)?.clone();
        let mut levels = vec![base];
        levels.extend(self.levels.iter().skip(k + 1).cloned());
        Some(PermGroupChain {
            group: Arc::clone(&self.group),
            levels,
            trivial: self.trivial.clone(),
        })
    }

    /// Chain `(G_n ∩ N)_n`.
    pub fn intersect_with(&self, n: &Subgroup) -> PermGroupChain {
        Self::from_subgroups(self.levels.iter().map(|l| l.intersect(n)).collect())
    }
}
