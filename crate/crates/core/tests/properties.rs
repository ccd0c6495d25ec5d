use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use ncg::trees::{Node, WfTree};
use ncg::ugroup::sample::{sample_level, sample_normal};
use ncg::ugroup::{coset_eq, u_inv, u_mul, window};
use ncg::Ordinal;

fn ordinal() -> impl Strategy<Value = Ordinal> {
    let leaf = prop_oneof![(0u64..6).prop_map(Ordinal::nat), Just(Ordinal::omega())];
    leaf.prop_recursive(3, 16, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(Ordinal::omega_pow),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a.add(&b)),
            (inner, 1u64..4).prop_map(|(a, n)| a.mul_nat(n)),
        ]
    })
}

/// Parent of node `i` is one of `0..i`, or none.
fn tree() -> impl Strategy<Value = WfTree> {
    prop::collection::vec(prop::option::weighted(0.9, any::<prop::sample::Index>()), 0..60).prop_map(|ps| {
        let mut levels: Vec<usize> = Vec::new();
        let mut nodes = Vec::new();
        for (i, p) in ps.into_iter().enumerate() {
            let parent = if i == 0 { None } else { p.map(|ix| ix.index(i)) };
            let level = parent.map_or(0, |q| levels[q] + 1);
            levels.push(level);
            nodes.push(Node {
                id: i,
                parent,
                level,
                label: String::new(),
            });
        }
        WfTree::from_nodes(nodes).unwrap()
    })
}

proptest! {
    #[test]
    fn ordinal_text_round_trips(a in ordinal()) {
        prop_assert_eq!(a.to_string().parse::<Ordinal>().unwrap(), a);
    }

    #[test]
    fn ordinal_addition_laws(a in ordinal(), b in ordinal(), c in ordinal()) {
        prop_assert_eq!(a.add(&b).add(&c), a.add(&b.add(&c)));
        prop_assert_eq!(a.add(&Ordinal::zero()), a.clone());
        prop_assert_eq!(Ordinal::zero().add(&a), a.clone());
        prop_assert!(a.add(&b) >= a);
        prop_assert!(a.add(&b) >= b);
        prop_assert_eq!(a.succ(), a.add(&Ordinal::one()));
    }

    #[test]
    fn ordinal_multiplication_laws(a in ordinal(), b in ordinal(), c in ordinal()) {
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
        prop_assert_eq!(a.mul(&Ordinal::one()), a.clone());
        prop_assert_eq!(Ordinal::one().mul(&a), a.clone());
        prop_assert!(a.mul(&Ordinal::zero()).is_zero());
    }

    #[test]
    fn ordinal_order_is_strictly_monotone_in_the_right_summand(a in ordinal(), b in ordinal(), c in ordinal()) {
        if b < c {
            prop_assert!(a.add(&b) < a.add(&c));
        }
    }

    #[test]
    fn subtrees_do_not_raise_rank(t in tree()) {
        let ranks = t.ranks();
        for n in t.nodes() {
            let s = t.subtree(n.id);
            prop_assert_eq!(s.rank(), ranks[&n.id] + 1);
            for c in t.nodes().iter().filter(|c| c.parent == Some(n.id)) {
                prop_assert!(ranks[&c.id] < ranks[&n.id]);
            }
        }
        prop_assert_eq!(t.rank(), ranks.values().map(|r| r + 1).max().unwrap_or(0));
    }

    #[test]
    fn json_round_trip(t in tree()) {
        prop_assert_eq!(WfTree::from_json(&t.to_json()).unwrap(), t);
    }

    #[test]
    fn u_group_axioms(seed in any::<u64>(), k in 1usize..6, p in 0usize..6) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = p.min(k);
        let [a, b, c] = [0, 1, 2].map(|_| sample_level(&mut rng, k, 0, 4));
        let x = sample_level(&mut rng, k, p, 4);
        let m = sample_normal(&mut rng, k, 4);
        let mul = |p: &_, q: &_| u_mul(p, q).unwrap();
        prop_assert_eq!(mul(&mul(&a, &b), &c), mul(&a, &mul(&b, &c)));
        prop_assert!(mul(&a, &u_inv(&a)).is_identity());
        prop_assert!(x.in_level(p) && u_inv(&x).in_level(p));
        prop_assert!(mul(&mul(&a, &m), &u_inv(&a)).in_normal());
    }

    #[test]
    fn window_is_a_coset_invariant(seed in any::<u64>(), n in 1usize..5) {
        let k = 7;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = sample_level(&mut rng, k, 0, 3);
        let b = sample_level(&mut rng, k, n, 3);
        let xb = u_mul(&x, &b).unwrap();
        prop_assert!(coset_eq(&x, &xb, n).unwrap());
        prop_assert_eq!(window(&x, n), window(&xb, n));
    }
}
