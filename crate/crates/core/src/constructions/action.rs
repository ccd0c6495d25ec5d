use serde::{Deserialize, Serialize};

use super::ConstructionError;
use crate::groups::PermGroup;

/// `ρ: G → Aut(H)` as a table: `rho[x][y]` is the index of `ρ(x)(y)`, with
/// elements of both groups in their canonical sorted order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ActionTable {
    pub rho: Vec<Vec<u32>>,
}

impl ActionTable {
    pub fn trivial(g: &PermGroup, h: &PermGroup) -> Self {
        ActionTable {
            rho: vec![(0..h.order() as u32).collect(); g.order()],
        }
    }

    #[inline]
    pub fn apply(&self, x: u32, y: u32) -> u32 {
        self.rho[x as usize][y as usize]
    }

    /// Each `ρ(x)` is an automorphism of `H` and `ρ` is a homomorphism.
    pub fn validate(&self, g: &PermGroup, h: &PermGroup) -> Result<(), ConstructionError> {
        let (ng, nh) = (g.order(), h.order());
        if self.rho.len() != ng || self.rho.iter().any(|r| r.len() != nh) {
            return Err(ConstructionError::BadAction(format!("table must be {ng}×{nh}")));
        }
        for (x, row) in self.rho.iter().enumerate() {
            let mut hit = vec![false; nh];
            for &v in row {
                if v as usize >= nh || std::mem::replace(&mut hit[v as usize], true) {
                    return Err(ConstructionError::BadAction(format!("ρ({x}) is not a bijection")));
                }
            }
            for a in 0..nh as u32 {
                for b in 0..nh as u32 {
                    if row[h.mul(a, b) as usize] != h.mul(row[a as usize], row[b as usize]) {
                        return Err(ConstructionError::BadAction(format!(
                            "ρ({x}) is not a homomorphism at ({a}, {b})"
                        )));
                    }
                }
            }
        }
        if self.rho[0].iter().enumerate().any(|(i, &v)| i as u32 != v) {
            return Err(ConstructionError::BadAction("ρ(1) is not the identity".into()));
        }
        for x1 in 0..ng as u32 {
            for x2 in 0..ng as u32 {
                let prod = g.mul(x1, x2);
                for y in 0..nh as u32 {
                    if self.apply(prod, y) != self.apply(x1, self.apply(x2, y)) {
                        return Err(ConstructionError::BadAction(format!(
                            "ρ({x1}·{x2}) ≠ ρ({x1})∘ρ({x2})"
                        )));
                    }
                }
            }
        }
        Ok(())
    }
}
