//! Orbit-tree bounds for a chain group `G` with a normal subgroup `N`: the
//! step function `s`, the sequences `q_{x,n}`, the tree `T_B` of selected
//! `N`-orbits, the fibre trees `Φ(s)`, the lexicographic relation `R` and
//! the map `Ψ` from the orbit tree of `G` into it.

mod checks;
mod pipeline;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::groups::orbit::orbits_of_gens;
use crate::groups::{
    coset_space, ChainSpec, ExplicitGSet, GSet, GroupError, Partition, Perm, PermGroupChain, Points, Subgroup,
};
use crate::Truncated;

pub use checks::{
    orbit_sequence_checks, induced_action_check, quotient_iso_check, OrbitSequenceReport, InducedActionReport, QuotientIsoReport,
};
pub use pipeline::{build_phi, build_psi, build_tb, extension_bound_check, Check, ExtensionReport, PhiFibre, PsiReport, TbTree};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExtensionError {
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error("subgroup generated by the given elements is not normal in G")]
    NotNormal,
    #[error("N equals G, so G/N is trivial")]
    NormalIsWhole,
    #[error("invalid instance: {0}")]
    Invalid(String),
    #[error("chain does not close within its depth")]
    ExceedsTruncation,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum XSetSpec {
    Named(String),
    Explicit { size: usize, generator_images: Vec<Perm> },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceSpec {
    pub g: ChainSpec,
    pub n_generators: Vec<Perm>,
    #[serde(default = "default_x")]
    pub x_set: XSetSpec,
}

fn default_x() -> XSetSpec {
    XSetSpec::Named("coset_space".into())
}

/// A chain group, a normal subgroup and a finite G-set, with `N_n = G_n ∩ N`
/// and the orbit partitions of `⟨G_j, N_k⟩` precomputed for `k ≤ j`.
pub struct ExtensionInstance {
    chain: PermGroupChain,
    normal: Subgroup,
    n_levels: Vec<Subgroup>,
    x: Box<dyn GSet>,
    n_parts: Vec<Partition>,
    /// `joint[j][k]` for `k ≤ j ≤ top`: orbits of `G_j N_k`.
    joint: Vec<Vec<Partition>>,
}

impl std::fmt::Debug for ExtensionInstance {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ExtensionInstance")
            .field("depth", &self.chain.depth())
            .field("g_order", &self.chain.group().order())
            .field("n_order", &self.normal.order())
            .field("x_len", &self.x.len())
            .finish()
    }
}

impl ExtensionInstance {
    pub fn new(chain: PermGroupChain, n_generators: &[Perm], x: Box<dyn GSet>) -> Result<Self, ExtensionError> {
        let group = chain.group().clone();
        let normal = group.subgroup_of_perms(n_generators)?;
        if !normal.is_normalized_by(&group.full()) {
            return Err(ExtensionError::NotNormal);
        }
        let top = Self::top_of(&chain);
        let ext = |j: usize| -> Subgroup {
            if j <= chain.depth() {
                chain.levels()[j].clone()
            } else {
                group.trivial()
            }
        };
        let n_levels: Vec<Subgroup> = (0..=top).map(|j| ext(j).intersect(&normal)).collect();
        let n_parts = n_levels.iter().map(|l| orbits_of_gens(x.as_ref(), l.generators())).collect();
        let joint = (0..=top)
            .map(|j| {
                let gj = ext(j);
                (0..=j)
                    .map(|k| {
                        let mut gens = gj.generators().to_vec();
                        gens.extend_from_slice(n_levels[k].generators());
                        orbits_of_gens(x.as_ref(), &gens)
                    })
                    .collect()
            })
            .collect();
        Ok(ExtensionInstance {
            chain,
            normal,
            n_levels,
            x,
            n_parts,
            joint,
        })
    }

    pub fn from_spec(spec: &InstanceSpec, cap: usize) -> Result<Self, ExtensionError> {
        let chain = PermGroupChain::from_spec(&spec.g, cap)?;
        let x: Box<dyn GSet> = match &spec.x_set {
            XSetSpec::Named(s) if s == "coset_space" => Box::new(coset_space(&chain, cap)?),
            XSetSpec::Named(s) if s == "points" => Box::new(Points::new(chain.group().clone())),
            XSetSpec::Named(s) => return Err(ExtensionError::Invalid(format!("unknown x_set {s:?}"))),
            XSetSpec::Explicit { size, generator_images } => {
                let gens = &spec.g.levels.first().ok_or(GroupError::EmptyChain)?.generators;
                if generator_images.iter().any(|p| p.degree() != *size) {
                    return Err(ExtensionError::Invalid("generator image has wrong size".into()));
                }
                Box::new(ExplicitGSet::new(chain.group(), gens, generator_images)?)
            }
        };
        Self::new(chain, &spec.n_generators, x)
    }

    pub fn from_json(s: &str, cap: usize) -> Result<Self, ExtensionError> {
        let spec: InstanceSpec = serde_json::from_str(s).map_err(|e| ExtensionError::Invalid(e.to_string()))?;
        Self::from_spec(&spec, cap)
    }

    /// Last level with precomputed data: one past the depth when the chain
    /// closes, since every later level is trivial.
    fn top_of(chain: &PermGroupChain) -> usize {
        chain.depth() + usize::from(chain.closes())
    }

    fn top(&self) -> usize {
        Self::top_of(&self.chain)
    }

    pub fn chain(&self) -> &PermGroupChain {
        &self.chain
    }

    pub fn normal(&self) -> &Subgroup {
        &self.normal
    }

    pub fn x_set(&self) -> &dyn GSet {
        self.x.as_ref()
    }

    pub fn depth(&self) -> usize {
        self.chain.depth()
    }

    /// `G_j`, trivial past the depth of a closing chain.
    pub fn g_level(&self, j: usize) -> Option<Subgroup> {
        if j <= self.depth() {
            Some(self.chain.levels()[j].clone())
        } else if self.chain.closes() {
            Some(self.chain.group().trivial())
        } else {
            None
        }
    }

    /// `N_j = G_j ∩ N`.
    pub fn n_level(&self, j: usize) -> Option<&Subgroup> {
        if j <= self.top() {
            Some(&self.n_levels[j])
        } else if self.chain.closes() {
            self.n_levels.last()
        } else {
            None
        }
    }

    pub fn n_levels_to_depth(&self) -> &[Subgroup] {
        &self.n_levels[..=self.depth()]
    }

    /// Orbit of `x` under `G_j N_k`, `k ≤ j`.
    pub fn joint_orbit(&self, j: usize, k: usize, x: usize) -> Option<&[usize]> {
        let top = self.top();
        if j <= top {
            Some(self.joint[j][k.min(j)].class_of(x))
        } else if self.chain.closes() {
            // G_j is trivial, so G_j N_k = N_k
            Some(self.n_orbit(k, x))
        } else {
            None
        }
    }

    /// `N_k·x`.
    pub fn n_orbit(&self, k: usize, x: usize) -> &[usize] {
        self.n_parts[k.min(self.n_parts.len() - 1)].class_of(x)
    }

    pub fn n_partition(&self, k: usize) -> &Partition {
        &self.n_parts[k.min(self.n_parts.len() - 1)]
    }

    /// `s(x, 𝒢_k, N_k)`: least `p` with `G_{k+p}N_k·x = N_k·x`.
    pub fn s_value(&self, x: usize, k: usize) -> Truncated<usize> {
        let base = self.n_orbit(k, x).len();
        let mut p = 0;
        loop {
            match self.joint_orbit(k + p, k, x) {
                None => return Truncated::ExceedsTruncation,
                Some(o) if o.len() == base => return Truncated::Closed(p),
                Some(_) => p += 1,
            }
        }
    }

    /// `q_{x,0} = 0`, `q_{x,n} = q_{x,n−1} + max(s(x, 𝒢_{q_{x,n−1}}, N_{q_{x,n−1}}), 1)`,
    /// up to the first value past the last nontrivial level.
    pub fn q_sequence(&self, x: usize) -> Truncated<Vec<usize>> {
        let stop = self.depth() + 1;
        let mut q = vec![0usize];
        while *q.last().unwrap() <= stop {
            let last = *q.last().unwrap();
            match self.s_value(x, last) {
                Truncated::Closed(s) => q.push(last + s.max(1)),
                Truncated::ExceedsTruncation => return Truncated::ExceedsTruncation,
            }
        }
        Truncated::Closed(q)
    }

    pub fn q_sequences(&self) -> Truncated<Vec<Vec<usize>>> {
        (0..self.x.len())
            .map(|x| match self.q_sequence(x) {
                Truncated::Closed(q) => Ok(q),
                Truncated::ExceedsTruncation => Err(()),
            })
            .collect::<Result<Vec<_>, ()>>()
            .map_or(Truncated::ExceedsTruncation, Truncated::Closed)
    }
}
