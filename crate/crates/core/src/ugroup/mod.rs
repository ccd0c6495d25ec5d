//! The group `U` of 4×4 block unitriangular matrices
//!
//! ```text
//! 1 a d f
//! 0 1 b e
//! 0 0 1 c
//! 0 0 0 1
//! ```
//!
//! with `a, b, d` row-finite integer matrices and `c, e, f ∈ ℤ^ω`, truncated
//! to `k×k` blocks and length-`k` vectors. `U_n` has the first `n` rows of
//! `a, b, d` and the first `n` entries of `c, e, f` zero.

pub mod checks;
mod matrix;
pub mod sample;

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use checks::{
    check_coset_equivalences, growth_witnesses, node_rank_check, normal_subgroup_checks, run_sweep, CosetEquivalenceReport,
    FormCheck, GrowthReport, NodeRankReport, NormalSubgroupReport, SweepConfig, SweepReport,
};
pub use matrix::{IntMatrix, IntVector};

use crate::Truncated;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum UError {
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("matrix is not invertible over the integers")]
    NotInvertible,
    #[error("invalid element: {0}")]
    Invalid(String),
}

/// An element of the truncated `U`. With a second element the blocks are
/// read as `u, v, x, w, y, z` in place of `a, b, d, c, e, f`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct UElement {
    pub k: usize,
    pub a: IntMatrix,
    pub b: IntMatrix,
    pub d: IntMatrix,
    pub c: IntVector,
    pub e: IntVector,
    pub f: IntVector,
}

impl UElement {
    pub fn identity(k: usize) -> Self {
        UElement {
            k,
            a: IntMatrix::zero(k),
            b: IntMatrix::zero(k),
            d: IntMatrix::zero(k),
            c: IntVector::zero(k),
            e: IntVector::zero(k),
            f: IntVector::zero(k),
        }
    }

    pub fn validate(&self) -> Result<(), UError> {
        let k = self.k;
        for m in [&self.a, &self.b, &self.d] {
            if m.dim() != k {
                return Err(UError::DimensionMismatch(m.dim(), k));
            }
        }
        for v in [&self.c, &self.e, &self.f] {
            if v.dim() != k {
                return Err(UError::DimensionMismatch(v.dim(), k));
            }
        }
        Ok(())
    }

    pub fn from_json(s: &str) -> Result<Self, UError> {
        let x: UElement = serde_json::from_str(s).map_err(|e| UError::Invalid(e.to_string()))?;
        x.validate()?;
        Ok(x)
    }

    pub fn is_identity(&self) -> bool {
        self.in_level(self.k)
    }

    /// Membership in `U_n`.
    pub fn in_level(&self, n: usize) -> bool {
        self.a.in_level(n)
            && self.b.in_level(n)
            && self.d.in_level(n)
            && self.c.in_level(n)
            && self.e.in_level(n)
            && self.f.in_level(n)
    }

    /// Membership in `N = {a = b = c = 0}`.
    pub fn in_normal(&self) -> bool {
        self.a.is_zero() && self.b.is_zero() && self.c.is_zero()
    }

    pub fn max_abs(&self) -> BigInt {
        [self.a.max_abs(), self.b.max_abs(), self.d.max_abs(), self.c.max_abs(), self.e.max_abs(), self.f.max_abs()]
            .into_iter()
            .max()
            .unwrap_or_default()
    }
}

fn same_k(p: &UElement, q: &UElement) -> Result<(), UError> {
    if p.k == q.k {
        Ok(())
    } else {
        Err(UError::DimensionMismatch(p.k, q.k))
    }
}

/// `AX = [a+u, av+d+x, ay+dw+f+z; b+v, bw+e+y; c+w]`.
pub fn u_mul(p: &UElement, x: &UElement) -> Result<UElement, UError> {
    same_k(p, x)?;
    Ok(UElement {
        k: p.k,
        a: p.a.add(&x.a),
        d: p.a.mul(&x.b).add(&p.d).add(&x.d),
        f: p.a.mul_vec(&x.e).add(&p.d.mul_vec(&x.c)).add(&p.f).add(&x.f),
        b: p.b.add(&x.b),
        e: p.b.mul_vec(&x.c).add(&p.e).add(&x.e),
        c: p.c.add(&x.c),
    })
}

/// `X⁻¹ = [−u, uv−x, −uvw+uy+xw−z; −v, vw−y; −w]`.
pub fn u_inv(x: &UElement) -> UElement {
    let (u, v, w) = (&x.a, &x.b, &x.c);
    let uv = u.mul(v);
    UElement {
        k: x.k,
        a: u.neg(),
        d: uv.sub(&x.d),
        f: uv.mul_vec(w).neg().add(&u.mul_vec(&x.e)).add(&x.d.mul_vec(w)).sub(&x.f),
        b: v.neg(),
        e: v.mul_vec(w).sub(&x.e),
        c: w.neg(),
    }
}

/// `X₂⁻¹X₁ ∈ U_n`, read off the six entries of the difference
/// `[u₁−u₂, x₁−x₂+u₂(v₂−v₁), Γ; v₁−v₂, y₁−y₂+v₂(w₂−w₁); w₁−w₂]` with
/// `Γ = z₁−z₂+u₂(y₂−y₁)+u₂v₂(w₁−w₂)+x₂(w₂−w₁)`. Only the first `n` rows
/// are computed.
pub fn coset_eq(x1: &UElement, x2: &UElement, n: usize) -> Result<bool, UError> {
    same_k(x1, x2)?;
    let du = x1.a.sub(&x2.a);
    let dv = x1.b.sub(&x2.b);
    let dw = x1.c.sub(&x2.c);
    if !(du.in_level(n) && dv.in_level(n) && dw.in_level(n)) {
        return Ok(false);
    }
    let ex = x1.d.sub(&x2.d).sub(&x2.a.mul_top(&dv, n));
    if !ex.in_level(n) {
        return Ok(false);
    }
    let ey = x1.e.sub(&x2.e).sub(&x2.b.mul_vec_top(&dw, n));
    if !ey.in_level(n) {
        return Ok(false);
    }
    let gamma = x1
        .f
        .sub(&x2.f)
        .sub(&x2.a.mul_vec_top(&x1.e.sub(&x2.e), n))
        .add(&x2.a.mul_vec_top(&x2.b.mul_vec(&dw), n))
        .sub(&x2.d.mul_vec_top(&dw, n));
    Ok(gamma.in_level(n))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct WindowProfile {
    pub n: usize,
    pub n1: usize,
    pub n2: usize,
    pub n3: usize,
}

/// `N₁ = n`, `N₂ = max(N₁, Rⁿ(u))`, `N₃ = max(N₂, Rⁿ(uv−x), Rⁿ(v))`.
pub fn window(x: &UElement, n: usize) -> WindowProfile {
    let n2 = n.max(x.a.reach(n));
    let uv_x = x.a.mul_top(&x.b, n).sub(&x.d);
    let n3 = n2.max(uv_x.reach(n)).max(x.b.reach(n));
    WindowProfile { n, n1: n, n2, n3 }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NormalForms {
    pub f1: UElement,
    pub f2: UElement,
    pub f3: UElement,
}

/// `F₁ = [u, −ub+x, −ubw−ue+ubc−xc+z; v, y−vc; w]`,
/// `F₂ = [u, x, −xc+z; v, y−vc; w]`, `F₃ = [u, x, (uv−x)c+z; v, y; w]`.
pub fn normal_forms(p: &UElement, x: &UElement) -> Result<NormalForms, UError> {
    same_k(p, x)?;
    let (u, v, w) = (&x.a, &x.b, &x.c);
    let (b, c, e) = (&p.b, &p.c, &p.e);
    let ub = u.mul(b);
    let xc = x.d.mul_vec(c);
    let vc = v.mul_vec(c);
    let f1 = UElement {
        k: x.k,
        a: u.clone(),
        d: x.d.sub(&ub),
        f: x.f.sub(&ub.mul_vec(w)).sub(&u.mul_vec(e)).add(&ub.mul_vec(c)).sub(&xc),
        b: v.clone(),
        e: x.e.sub(&vc),
        c: w.clone(),
    };
    let f2 = UElement {
        d: x.d.clone(),
        f: x.f.sub(&xc),
        ..f1.clone()
    };
    let f3 = UElement {
        e: x.e.clone(),
        f: u.mul(v).sub(&x.d).mul_vec(c).add(&x.f),
        ..f2.clone()
    };
    Ok(NormalForms { f1, f2, f3 })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Block {
    A,
    B,
    D,
    C,
    E,
    F,
}

/// A generator of `U` with a single nonzero entry.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Elementary {
    pub block: Block,
    pub row: usize,
    pub col: usize,
    pub value: i64,
}

impl Elementary {
    pub fn to_element(self, k: usize) -> UElement {
        let mut x = UElement::identity(k);
        let (i, j, v) = (self.row, self.col, self.value);
        match self.block {
            Block::A => x.a = IntMatrix::unit(k, i, j, v),
            Block::B => x.b = IntMatrix::unit(k, i, j, v),
            Block::D => x.d = IntMatrix::unit(k, i, j, v),
            Block::C => x.c = IntVector::unit(k, i, v),
            Block::E => x.e = IntVector::unit(k, i, v),
            Block::F => x.f = IntVector::unit(k, i, v),
        }
        x
    }
}

impl fmt::Display for Elementary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = format!("{:?}", self.block).to_lowercase();
        match self.block {
            Block::A | Block::B | Block::D => write!(f, "{name}[{},{}]={}", self.row, self.col, self.value),
            _ => write!(f, "{name}[{}]={}", self.row, self.value),
        }
    }
}

/// The value-1 elementary generators with their entry in row `row`.
pub fn elementaries_in_row(k: usize, row: usize) -> Vec<Elementary> {
    let mut out = Vec::new();
    for block in [Block::A, Block::B, Block::D] {
        for col in 0..k {
            out.push(Elementary { block, row, col, value: 1 });
        }
    }
    for block in [Block::C, Block::E, Block::F] {
        out.push(Elementary { block, row, col: 0, value: 1 });
    }
    out
}

/// Every value-1 elementary generator of `U_p`.
pub fn elementaries(k: usize, p: usize) -> Vec<Elementary> {
    (p..k).flat_map(|row| elementaries_in_row(k, row)).collect()
}

/// Whether `A·XU_n = XU_n`.
/// Reads off the top `n` rows of `X⁻¹AX − I`: `[a, av+d−ub, ay+dw+f−u(bw+e)+uvc−xc; b, bw+e−vc; c]`
/// in the letters of `A` and `u, v, w, x, y, z` of `X`.
pub fn fixes(a: &UElement, x: &UElement, n: usize) -> bool {
    let k = x.k;
    let n = n.min(k);
    if !(a.a.in_level(n) && a.b.in_level(n) && a.c.in_level(n)) {
        return false;
    }
    let dot = |p: &IntMatrix, t: usize, col: &dyn Fn(usize) -> BigInt| -> BigInt {
        let mut s = BigInt::zero();
        for (l, v) in p.rows()[t].iter().enumerate() {
            if !v.is_zero() {
                let c = col(l);
                if !c.is_zero() {
                    s += v * c;
                }
            }
        }
        s
    };
    for t in 0..n {
        for j in 0..k {
            let ex = dot(&a.a, t, &|l| x.b.get(l, j).clone()) + a.d.get(t, j) - dot(&x.a, t, &|l| a.b.get(l, j).clone());
            if !ex.is_zero() {
                return false;
            }
        }
        let ey = dot(&a.b, t, &|l| x.c.entries()[l].clone()) + &a.e.entries()[t]
            - dot(&x.b, t, &|l| a.c.entries()[l].clone());
        if !ey.is_zero() {
            return false;
        }
    }
    let bw_e = a.b.mul_vec(&x.c).add(&a.e);
    let vc = x.b.mul_vec(&a.c);
    for t in 0..n {
        let gamma = dot(&a.a, t, &|l| x.e.entries()[l].clone()) + dot(&a.d, t, &|l| x.c.entries()[l].clone())
            + &a.f.entries()[t]
            - dot(&x.a, t, &|l| bw_e.entries()[l].clone())
            + dot(&x.a, t, &|l| vc.entries()[l].clone())
            - dot(&x.d, t, &|l| a.c.entries()[l].clone());
        if !gamma.is_zero() {
            return false;
        }
    }
    true
}

/// Least `p` such that every elementary generator of `U_p` fixes `XU_n`,
/// with a moving generator from `U_{p−1}` when `p > 0`. The generators span
/// `U_p`, so this is the least `p` with `U_p·XU_n = {XU_n}`.
pub fn fixing_depth(x: &UElement, n: usize) -> (usize, Option<Elementary>) {
    for row in (0..x.k).rev() {
        if let Some(g) = elementaries_in_row(x.k, row).into_iter().find(|g| !fixes(&g.to_element(x.k), x, n)) {
            return (row + 1, Some(g));
        }
    }
    (0, None)
}

/// `d(a,b) = 2^{−m}` for the least row `m` where `a` and `b` differ, and 0
/// when they agree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Dist(pub Option<usize>);

impl Ord for Dist {
    fn cmp(&self, o: &Self) -> Ordering {
        match (self.0, o.0) {
            (None, None) => Ordering::Equal,
            (None, Some(_)) => Ordering::Less,
            (Some(_), None) => Ordering::Greater,
            (Some(a), Some(b)) => b.cmp(&a),
        }
    }
}

impl PartialOrd for Dist {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl fmt::Display for Dist {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            None => f.write_str("0"),
            Some(0) => f.write_str("1"),
            Some(m) => write!(f, "2^-{m}"),
        }
    }
}

pub fn ultrametric_d(a: &IntMatrix, b: &IntMatrix) -> Dist {
    Dist(a.first_difference(b))
}

/// Inverse over the integers, by Gauss–Jordan elimination over the rationals.
pub fn int_inverse(g: &IntMatrix) -> Result<IntMatrix, UError> {
    let k = g.dim();
    let mut m: Vec<Vec<BigRational>> = (0..k)
        .map(|i| {
            let mut row: Vec<BigRational> = g.rows()[i].iter().map(|x| BigRational::from_integer(x.clone())).collect();
            row.extend((0..k).map(|j| if i == j { BigRational::one() } else { BigRational::zero() }));
            row
        })
        .collect();
    for col in 0..k {
        let pivot = (col..k).find(|&r| !m[r][col].is_zero()).ok_or(UError::NotInvertible)?;
        m.swap(col, pivot);
        let inv = m[col][col].recip();
        for x in m[col].iter_mut() {
            *x *= &inv;
        }
        for r in 0..k {
            if r != col && !m[r][col].is_zero() {
                let factor = m[r][col].clone();
                let pivot_row = m[col].clone();
                for (x, p) in m[r].iter_mut().zip(pivot_row) {
                    *x -= &factor * p;
                }
            }
        }
    }
    let rows = m
        .into_iter()
        .map(|row| {
            row[k..]
                .iter()
                .map(|x| x.is_integer().then(|| x.to_integer()).ok_or(UError::NotInvertible))
                .collect::<Result<Vec<_>, _>>()
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(IntMatrix::from_rows(rows).expect("square"))
}

/// Least `M ≤ k` with `g·L_M·g⁻¹ ⊆ L_n`, tested on the unit matrices
/// spanning `L_M`.
pub fn conjugation_window(g: &IntMatrix, n: usize) -> Result<Truncated<usize>, UError> {
    let k = g.dim();
    let gi = int_inverse(g)?;
    if n > k {
        return Ok(Truncated::ExceedsTruncation);
    }
    // rows of L_M are M..k; find the largest row whose units escape L_n
    let mut least = 0;
    for i in (0..k).rev() {
        let escapes = (0..k).any(|j| !g.mul(&IntMatrix::unit(k, i, j, 1)).mul(&gi).in_level(n));
        if escapes {
            least = i + 1;
            break;
        }
    }
    Ok(Truncated::Closed(least))
}

#[cfg(test)]
mod tests;
