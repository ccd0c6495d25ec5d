//! Random elements of `U_p` built from elementary pieces.

use rand::Rng;

use super::{u_mul, Block, Elementary, UElement};

const BLOCKS: [Block; 6] = [Block::A, Block::B, Block::D, Block::C, Block::E, Block::F];

fn value<R: Rng>(rng: &mut R, cap: i64) -> i64 {
    let m = rng.gen_range(1..=cap.max(1));
    if rng.gen_bool(0.5) {
        m
    } else {
        -m
    }
}

/// An elementary generator of `U_p` with a random position and a value of
/// magnitude at most `cap`; `None` when `U_p` is trivial.
pub fn elementary<R: Rng>(rng: &mut R, k: usize, p: usize, cap: i64) -> Option<Elementary> {
    if p >= k {
        return None;
    }
    let block = BLOCKS[rng.gen_range(0..6)];
    let row = rng.gen_range(p..k);
    let col = if matches!(block, Block::A | Block::B | Block::D) { rng.gen_range(0..k) } else { 0 };
    Some(Elementary {
        block,
        row,
        col,
        value: value(rng, cap),
    })
}

/// One nonzero entry in each of a random nonempty set of blocks, all in
/// rows `≥ p`.
pub fn block_elementary<R: Rng>(rng: &mut R, k: usize, p: usize, cap: i64, top: Option<usize>) -> UElement {
    let mut x = UElement::identity(k);
    if p >= k {
        return x;
    }
    let mask = rng.gen_range(1u8..64);
    for (bit, block) in BLOCKS.iter().enumerate() {
        if mask & (1 << bit) == 0 {
            continue;
        }
        let row = match top {
            Some(t) if t > p && rng.gen_bool(0.5) => rng.gen_range(p..t.min(k)),
            _ => rng.gen_range(p..k),
        };
        let col = rng.gen_range(0..k);
        let v = num_bigint::BigInt::from(value(rng, cap));
        match block {
            Block::A => x.a.set(row, col, v),
            Block::B => x.b.set(row, col, v),
            Block::D => x.d.set(row, col, v),
            Block::C => x.c.set(row, v),
            Block::E => x.e.set(row, v),
            Block::F => x.f.set(row, v),
        }
    }
    x
}

/// A product of one to three block elementaries of `U_p`.
pub fn sample_level<R: Rng>(rng: &mut R, k: usize, p: usize, cap: i64) -> UElement {
    let len = rng.gen_range(1..=3);
    let mut x = block_elementary(rng, k, p, cap, None);
    for _ in 1..len {
        x = u_mul(&x, &block_elementary(rng, k, p, cap, None)).expect("same truncation");
    }
    x
}

/// Like [`sample_level`] at `p = 0`, with half of the entries placed in the
/// first `n` rows so that the windows at base level `n` vary.
pub fn sample_for_window<R: Rng>(rng: &mut R, k: usize, n: usize, cap: i64) -> UElement {
    let len = rng.gen_range(1..=3);
    let mut x = block_elementary(rng, k, 0, cap, Some(n));
    for _ in 1..len {
        x = u_mul(&x, &block_elementary(rng, k, 0, cap, Some(n))).expect("same truncation");
    }
    x
}

/// A random element of `N = {a = b = c = 0}`.
pub fn sample_normal<R: Rng>(rng: &mut R, k: usize, cap: i64) -> UElement {
    let mut x = sample_level(rng, k, 0, cap);
    x.a = super::IntMatrix::zero(k);
    x.b = super::IntMatrix::zero(k);
    x.c = super::IntVector::zero(k);
    x
}
