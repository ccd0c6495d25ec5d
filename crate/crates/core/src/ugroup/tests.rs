use num_bigint::BigInt;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::sample::{sample_level, sample_normal};
use super::*;
use crate::report::Status;

fn dense(x: &UElement) -> Vec<Vec<BigInt>> {
    let k = x.k;
    let mut m = vec![vec![BigInt::from(0); 3 * k + 1]; 3 * k + 1];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = BigInt::from(1);
    }
    for i in 0..k {
        for j in 0..k {
            m[i][k + j] = x.a.get(i, j).clone();
            m[i][2 * k + j] = x.d.get(i, j).clone();
            m[k + i][2 * k + j] = x.b.get(i, j).clone();
        }
        m[i][3 * k] = x.f.entries()[i].clone();
        m[k + i][3 * k] = x.e.entries()[i].clone();
        m[2 * k + i][3 * k] = x.c.entries()[i].clone();
    }
    m
}

fn dense_mul(p: &[Vec<BigInt>], q: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let n = p.len();
    (0..n)
        .map(|i| (0..n).map(|j| (0..n).map(|l| &p[i][l] * &q[l][j]).sum()).collect())
        .collect()
}

fn elem(k: usize, a: &[(usize, usize, i64)], b: &[(usize, usize, i64)], d: &[(usize, usize, i64)]) -> UElement {
    let mut x = UElement::identity(k);
    for &(i, j, v) in a {
        x.a.set(i, j, v.into());
    }
    for &(i, j, v) in b {
        x.b.set(i, j, v.into());
    }
    for &(i, j, v) in d {
        x.d.set(i, j, v.into());
    }
    x
}

#[test]
fn product_matches_block_matrix() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..30 {
        let a = sample_level(&mut rng, 3, 0, 3);
        let x = sample_level(&mut rng, 3, 0, 3);
        assert_eq!(dense(&u_mul(&a, &x).unwrap()), dense_mul(&dense(&a), &dense(&x)));
        assert!(u_mul(&x, &u_inv(&x)).unwrap().is_identity());
        assert!(u_mul(&u_inv(&x), &x).unwrap().is_identity());
        let i = UElement::identity(3);
        assert_eq!(u_mul(&a, &i).unwrap(), a);
        assert_eq!(u_mul(&i, &x).unwrap(), x);
    }
    assert!(u_mul(&UElement::identity(2), &UElement::identity(3)).is_err());
}

#[test]
fn inverse_of_w_only_negates() {
    let mut x = UElement::identity(4);
    x.c.set(2, 7.into());
    let inv = u_inv(&x);
    assert_eq!(inv.c, x.c.neg());
    assert!(u_inv(&UElement::identity(4)).is_identity());
}

#[test]
fn coset_eq_matches_definition() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..60 {
        let x1 = sample_level(&mut rng, 4, 0, 2);
        let x2 = if rand::Rng::gen_bool(&mut rng, 0.5) {
            u_mul(&x1, &sample_level(&mut rng, 4, 2, 2)).unwrap()
        } else {
            sample_level(&mut rng, 4, 0, 2)
        };
        for n in 0..=4 {
            let direct = u_mul(&u_inv(&x2), &x1).unwrap().in_level(n);
            assert_eq!(coset_eq(&x1, &x2, n).unwrap(), direct);
            if direct && n >= 1 {
                assert_eq!(window(&x1, n), window(&x2, n));
            }
        }
    }
    let x = sample_level(&mut rng, 4, 0, 2);
    let mut y = x.clone();
    y.f.set(3, BigInt::from(9) + y.f.entries()[3].clone());
    assert!(coset_eq(&x, &y, 3).unwrap());
    assert!(!coset_eq(&x, &y, 4).unwrap());
}

#[test]
fn window_examples() {
    assert_eq!(window(&UElement::identity(8), 2), WindowProfile { n: 2, n1: 2, n2: 2, n3: 2 });
    let x = elem(8, &[(0, 5, 1)], &[], &[]);
    assert_eq!(window(&x, 1).n2, 6);
    let y = elem(8, &[], &[(1, 4, 2)], &[]);
    let w = window(&y, 2);
    assert_eq!((w.n2, w.n3), (2, 5));
}

#[test]
fn normal_form_examples() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let x = sample_level(&mut rng, 4, 0, 3);
    let nf = normal_forms(&UElement::identity(4), &x).unwrap();
    assert_eq!((&nf.f1, &nf.f2, &nf.f3), (&x, &x, &x));
    let mut a = UElement::identity(4);
    a.a.set(2, 1, 2.into());
    a.d.set(3, 3, 1.into());
    assert_eq!(normal_forms(&a, &x).unwrap().f1.f, x.f);
    for n in 1..=4 {
        for _ in 0..10 {
            let a = sample_level(&mut rng, 4, n, 3);
            let f1 = normal_forms(&a, &x).unwrap().f1;
            assert!(coset_eq(&u_mul(&a, &x).unwrap(), &f1, n).unwrap());
        }
    }
}

#[test]
fn coset_equivalence_examples() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let x = elem(8, &[(0, 3, 1)], &[(0, 6, 1)], &[(1, 2, -1)]);
    let n = 1;
    let w = window(&x, n);
    assert_eq!((w.n2, w.n3), (4, 7));
    for p in [n, w.n2 - 1, w.n2, w.n3 - 1, w.n3] {
        let samples = checks::level_samples(&mut rng, 8, p, 10, 3);
        let r = check_coset_equivalences(&x, n, p, &samples);
        assert!(r.holds(), "{r:?}");
    }
    let r = check_coset_equivalences(&x, n, w.n3 - 1, &[]);
    assert!(r.forms.iter().any(|f| f.witness.is_some()));
}

#[test]
fn node_rank_examples() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let id = node_rank_check(&UElement::identity(8), 2, 8, &mut rng, 3);
    assert_eq!((id.formula_rank, id.sampled_rank, id.status), (0, 0, Status::Pass));
    let n = 2;
    let x = elem(10, &[], &[(1, n + 2, 1)], &[]);
    let r = node_rank_check(&x, n, 8, &mut rng, 3);
    assert_eq!((r.formula_rank, r.sampled_rank, r.status), (2, 2, Status::Pass));
    let x = elem(10, &[(0, 5, 1)], &[], &[]);
    let r = node_rank_check(&x, 1, 8, &mut rng, 3);
    assert_eq!(r.window.n2, 6);
    assert_eq!((r.formula_rank, r.status), (0, Status::Pass));
}

#[test]
fn growth_sequences() {
    let x = elem(10, &[(0, 3, 1)], &[(2, 1, 4)], &[(0, 0, 5)]);
    let g = growth_witnesses(&x, 1);
    assert!(g.holds, "{g:?}");
    assert_eq!(g.n3_sequence.as_ref().unwrap().last(), Some(&10));
    assert_eq!(g.n2_sequence.last(), Some(&10));
}

#[test]
fn normal_subgroup_examples() {
    let mut p = UElement::identity(3);
    p.f.set(0, 2.into());
    let mut q = UElement::identity(3);
    q.f.set(1, 5.into());
    let pq = u_mul(&p, &q).unwrap();
    assert_eq!(pq.f, p.f.add(&q.f));
    assert_eq!(pq, u_mul(&q, &p).unwrap());
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let r = normal_subgroup_checks(3, 100, &mut rng, 3);
    assert!(r.holds(), "{r:?}");
    let n = sample_normal(&mut rng, 3, 3);
    assert!(n.in_normal());
}

#[test]
fn ultrametric() {
    let a = IntMatrix::from_i64(&[vec![1, 0], vec![0, 1]]).unwrap();
    let b = IntMatrix::from_i64(&[vec![2, 0], vec![0, 1]]).unwrap();
    assert_eq!(ultrametric_d(&a, &a), Dist(None));
    assert_eq!(ultrametric_d(&a, &b).to_string(), "1");
    let mut rng = ChaCha8Rng::seed_from_u64(19);
    for _ in 0..100 {
        let [x, y, z] = [0, 1, 2].map(|_| sample_level(&mut rng, 4, 0, 1).d);
        assert!(ultrametric_d(&x, &z) <= ultrametric_d(&x, &y).max(ultrametric_d(&y, &z)));
    }
}

#[test]
fn conjugation_window_examples() {
    let id = IntMatrix::identity(6);
    assert_eq!(conjugation_window(&id, 3).unwrap(), Truncated::Closed(3));
    let mut swap = IntMatrix::identity(6);
    swap.set(0, 0, 0.into());
    swap.set(1, 1, 0.into());
    swap.set(0, 1, 1.into());
    swap.set(1, 0, 1.into());
    assert_eq!(conjugation_window(&swap, 1).unwrap(), Truncated::Closed(2));
    let mut band = IntMatrix::identity(8);
    for i in 0..7 {
        band.set(i, i + 1, 1.into());
    }
    for n in 1..6 {
        let m = conjugation_window(&band, n).unwrap();
        assert!(matches!(m, Truncated::Closed(v) if v <= n + 1));
    }
    assert!(conjugation_window(&IntMatrix::zero(3), 1).is_err());
}

#[test]
fn sweep_smoke() {
    let cfg = SweepConfig {
        n: 2,
        k: 8,
        samples: 12,
        seed: 4,
        entry_cap: 3,
    };
    let r = run_sweep(&cfg);
    assert_eq!(r.count(Status::Fail), 0, "{:?}", r.cases.iter().find(|c| c.status == Status::Fail));
}

#[test]
fn fixes_agrees_with_coset_eq() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    for _ in 0..200 {
        let x = sample_level(&mut rng, 5, 0, 3);
        let p = rand::Rng::gen_range(&mut rng, 0..=5);
        let a = sample_level(&mut rng, 5, p, 3);
        for n in 0..=5 {
            let direct = coset_eq(&u_mul(&a, &x).unwrap(), &x, n).unwrap();
            assert_eq!(fixes(&a, &x, n), direct);
        }
    }
}
