//! Direct, semidirect and wreath products of chains, the construction over
//! a finite group `Γ`, and the symbolic rank bounds.

pub mod action;
pub mod countable;
pub mod semidirect;
pub mod wreath;

use serde::Serialize;
use thiserror::Error;

pub use action::ActionTable;
pub use countable::{countable_semidirect, CountableReport, CountableSemidirect};
pub use semidirect::{check_coset_invariance, check_t1_rank_equality, semidirect, CosetInvarianceReport, SemidirectProduct, T1Report};
pub use wreath::{power_chain, wreath};

use crate::groups::GroupError;
use crate::Ordinal;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConstructionError {
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error("invalid action: {0}")]
    BadAction(String),
    #[error("level {level} is not a subgroup: {left}·{right} leaves it")]
    ClosureFailure { level: usize, left: String, right: String },
    #[error("G_n does not preserve the cosets of H_n at level {level} ({violations} violations)")]
    CosetInvariance { level: usize, violations: usize },
    #[error("construction needs {needed} elements, cap is {cap}")]
    CapExceeded { cap: usize, needed: usize },
    #[error("internal inconsistency: {0}")]
    Internal(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum BoundKind {
    SemidirectPositive,
    Wreath,
    Extension,
}

impl std::str::FromStr for BoundKind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "semidirect" | "semidirect-positive" => Ok(BoundKind::SemidirectPositive),
            "wreath" => Ok(BoundKind::Wreath),
            "extension" => Ok(BoundKind::Extension),
            _ => Err(format!("unknown bound kind {s:?}")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RankBound {
    pub kind: BoundKind,
    pub alpha: Ordinal,
    pub beta: Ordinal,
    pub bound: Ordinal,
}

/// `β+α` for semidirect and wreath products, `β·(ω·α+1)` for extensions.
pub fn rank_bound(kind: BoundKind, alpha: &Ordinal, beta: &Ordinal) -> RankBound {
    let bound = match kind {
        BoundKind::SemidirectPositive | BoundKind::Wreath => beta.add(alpha),
        BoundKind::Extension => beta.mul(&Ordinal::omega().mul(alpha).succ()),
    };
    RankBound {
        kind,
        alpha: alpha.clone(),
        beta: beta.clone(),
        bound,
    }
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::groups::{CayleyTable, PermGroup, PermGroupChain, DEFAULT_CAP};

    fn regular_chain(n: usize, level_gens: &[&[u32]]) -> PermGroupChain {
        let t = CayleyTable::cyclic(n);
        let perms = t.regular_perms();
        let g = Arc::new(PermGroup::generate(n, &perms, DEFAULT_CAP).unwrap());
        let levels = level_gens
            .iter()
            .map(|gs| g.subgroup_of_perms(&gs.iter().map(|&i| perms[i as usize].clone()).collect::<Vec<_>>()).unwrap())
            .collect();
        PermGroupChain::from_subgroups(levels)
    }

    fn inversion(g: &PermGroup, h: &PermGroup) -> ActionTable {
        let rho = (0..g.order() as u32)
            .map(|x| (0..h.order() as u32).map(|y| if x == 0 { y } else { h.inv(y) }).collect())
            .collect();
        ActionTable { rho }
    }

    #[test]
    fn dihedral_from_inversion() {
        let g = regular_chain(2, &[&[1], &[1], &[]]);
        let h = regular_chain(4, &[&[1], &[2], &[]]);
        let rho = inversion(g.group(), h.group());
        let a = semidirect(&g, &h, &rho, DEFAULT_CAP).unwrap();
        assert_eq!(a.order(), 8);
        assert!(!a.pair_table().is_abelian());
        assert_eq!(a.chain().levels().iter().map(|l| l.order()).collect::<Vec<_>>(), vec![8, 4, 1]);
        for n in 0..=2 {
            assert!(check_coset_invariance(&g, &h, &rho, n).holds());
            let r = check_t1_rank_equality(&a, n, DEFAULT_CAP).unwrap();
            assert!(r.holds(), "{r:?}");
        }
    }

    #[test]
    fn condition_fails_with_trivial_h1() {
        let g = regular_chain(2, &[&[1], &[1], &[]]);
        let h = regular_chain(4, &[&[1], &[], &[]]);
        let rho = inversion(g.group(), h.group());
        let c = check_coset_invariance(&g, &h, &rho, 1);
        assert!(!c.holds());
        let a = semidirect(&g, &h, &rho, DEFAULT_CAP).unwrap();
        assert!(matches!(check_t1_rank_equality(&a, 1, DEFAULT_CAP), Err(ConstructionError::CosetInvariance { .. })));
    }

    #[test]
    fn bad_action_rejected() {
        let g = regular_chain(2, &[&[1], &[]]);
        let h = regular_chain(3, &[&[1], &[]]);
        let rho = ActionTable {
            rho: vec![vec![0, 1, 2], vec![0, 1, 1]],
        };
        assert!(matches!(semidirect(&g, &h, &rho, DEFAULT_CAP), Err(ConstructionError::BadAction(_))));
    }

    #[test]
    fn wreath_z2_z2() {
        let g = regular_chain(2, &[&[1], &[]]);
        let h = regular_chain(2, &[&[1], &[]]);
        let w = wreath(&g, &h, DEFAULT_CAP).unwrap();
        assert_eq!(w.order(), 8);
        assert!(!w.pair_table().is_abelian());
        for n in 0..=w.depth() {
            let r = check_t1_rank_equality(&w, n, DEFAULT_CAP).unwrap();
            assert!(r.holds(), "{r:?}");
        }
    }

    #[test]
    fn countable_shift() {
        let z5 = CayleyTable::cyclic(5);
        let c = countable_semidirect(&z5, &z5.automorphisms(), DEFAULT_CAP).unwrap();
        assert_eq!(c.report.a_order, 20);
        assert!(c.report.holds(), "{:?}", c.report);
        assert_eq!(c.report.rank_shift_holds, Some(true));
        let v4 = CayleyTable::cyclic(2).product(&CayleyTable::cyclic(2));
        let c = countable_semidirect(&v4, &v4.automorphisms(), DEFAULT_CAP).unwrap();
        assert_eq!(c.report.a_order, 24);
        assert!(c.report.holds(), "{:?}", c.report);
        let c = countable_semidirect(&v4, &[], DEFAULT_CAP).unwrap();
        assert_eq!(c.report.rank_shift_holds, None);
        assert_eq!(c.report.rank_a, 1);
    }

    #[test]
    fn bounds() {
        let w = Ordinal::omega();
        let b = rank_bound(BoundKind::SemidirectPositive, &Ordinal::nat(2), &w);
        assert_eq!(b.bound.to_string(), "w+2");
        let b = rank_bound(BoundKind::Wreath, &w, &Ordinal::nat(3));
        assert_eq!(b.bound, w);
        let b = rank_bound(BoundKind::Extension, &Ordinal::one(), &Ordinal::nat(2));
        assert_eq!(b.bound, Ordinal::omega().add(&Ordinal::nat(2)));
    }
}
