use std::sync::Arc;

use proptest::prelude::*;

use relconvex::edge::FactorSubgroup;
use relconvex::free::{cayley_order, CayleyOrderConfig};
use relconvex::hnn::{britton_normal_form, HnnSpec};
use relconvex::order::FreeGroup;
use relconvex::raag::{raag_left_order, raag_normal_form, RaagSpec};
use relconvex::snf::quotient_onto_z;
use relconvex::stallings::stallings_graph;
use relconvex::{Alphabet, Generator, Group, Letter, Sign, Word};

fn alphabet(names: &[&str]) -> Alphabet {
    Alphabet::from_names(names).unwrap()
}

/// Unreduced letter sequences over `al`, up to `max` letters.
fn raw(al: &Alphabet, max: usize) -> impl Strategy<Value = Vec<Letter>> {
    let letters = al.letters();
    prop::collection::vec(0..letters.len(), 0..=max).prop_map(move |ix| ix.into_iter().map(|i| letters[i]).collect())
}

fn word(al: &Alphabet, max: usize) -> impl Strategy<Value = Word> {
    raw(al, max).prop_map(Word::reduce)
}

fn path_raag() -> Arc<RaagSpec> {
    let al = alphabet(&["a", "b", "c"]);
    let g = |n| al.get(n).unwrap();
    Arc::new(RaagSpec::new(al.clone(), &[(g("a"), g("b")), (g("b"), g("c"))]).unwrap())
}

fn z2_hnn() -> HnnSpec {
    let al = alphabet(&["a"]);
    let a: Arc<dyn Group> = Arc::new(FreeGroup::new(al.clone()));
    let c = Arc::new(FactorSubgroup::new(&al, vec![al.parse("a").unwrap()]).unwrap());
    HnnSpec::new(a, c.clone(), c, Generator::new("x").unwrap()).unwrap()
}

proptest! {
    #[test]
    fn reduction_is_free(ls in raw(&alphabet(&["a", "b"]), 24)) {
        let w = Word::reduce(ls.clone());
        prop_assert!(w.letters().windows(2).all(|p| !p[0].cancels(p[1])));
        prop_assert_eq!(Word::reduce(w.letters().to_vec()), w.clone());
        prop_assert!(w.mul(&w.inverse()).is_empty());
        let (u, v) = ls.split_at(ls.len() / 2);
        prop_assert_eq!(Word::reduce(u.to_vec()).mul(&Word::reduce(v.to_vec())), w);
    }

    #[test]
    fn cayley_order_is_invariant(
        g in word(&alphabet(&["a", "b"]), 8),
        u in word(&alphabet(&["a", "b"]), 8),
        v in word(&alphabet(&["a", "b"]), 8),
    ) {
        let order = cayley_order(&CayleyOrderConfig::new(alphabet(&["a", "b"])));
        let s = order.compare(&u, &v);
        prop_assert_eq!(s, -order.compare(&v, &u));
        prop_assert_eq!(s == Sign::Zero, u == v);
        prop_assert_eq!(order.compare(&g.mul(&u), &g.mul(&v)), s);
    }

    #[test]
    fn raag_normal_form_is_canonical(u in word(&alphabet(&["a", "b", "c"]), 12), v in word(&alphabet(&["a", "b", "c"]), 12)) {
        let spec = path_raag();
        let nf = raag_normal_form(&spec, &u).unwrap().0;
        prop_assert_eq!(raag_normal_form(&spec, &nf).unwrap().0, nf.clone());
        prop_assert!(nf.len() <= u.len());
        prop_assert!(spec.is_identity(&u.mul(&u.inverse())));
        let lhs = spec.normalize(&spec.mul(&u, &v).mul(&v.inverse()));
        prop_assert_eq!(lhs, nf);
    }

    #[test]
    fn raag_order_is_invariant(
        g in word(&alphabet(&["a", "b", "c"]), 5),
        u in word(&alphabet(&["a", "b", "c"]), 5),
        v in word(&alphabet(&["a", "b", "c"]), 5),
    ) {
        let spec = path_raag();
        let order = raag_left_order(spec.clone()).unwrap();
        let s = order.compare(&u, &v);
        prop_assert_eq!(s == Sign::Zero, spec.normalize(&u) == spec.normalize(&v));
        prop_assert_eq!(order.compare(&spec.mul(&g, &u), &spec.mul(&g, &v)), s);
    }

    #[test]
    fn britton_forms_have_no_pinch(w in word(&alphabet(&["a", "x"]), 16)) {
        let spec = z2_hnn();
        let nf = britton_normal_form(&spec, &w).unwrap();
        // C = D = A here, so stable letters of opposite sign always pinch.
        prop_assert!(nf.head.windows(2).all(|p| p[0].1 == p[1].1));
        prop_assert!(nf.head.iter().all(|(rep, _)| rep.is_empty()));
        let n = spec.normalize(&w);
        prop_assert_eq!(spec.normalize(&n), n.clone());
        let exponent_x: i64 = w.letters().iter().filter(|l| l.gen.to_string() == "x").map(|l| l.exp as i64).sum();
        let exponent_a: i64 = w.letters().iter().filter(|l| l.gen.to_string() == "a").map(|l| l.exp as i64).sum();
        // Z^2 is abelian: the normal form is determined by the exponent sums.
        prop_assert_eq!(n.is_empty(), exponent_x == 0 && exponent_a == 0);
    }

    #[test]
    fn stallings_contains_generator_products(
        gens in prop::collection::vec(word(&alphabet(&["a", "b"]), 5), 1..4),
        picks in prop::collection::vec((0usize..4, any::<bool>()), 0..8),
    ) {
        let al = alphabet(&["a", "b"]);
        let graph = stallings_graph(&al, &gens).unwrap();
        let product = picks.iter().fold(Word::identity(), |acc, &(i, inv)| {
            let g = &gens[i % gens.len()];
            acc.mul(&if inv { g.inverse() } else { g.clone() })
        });
        prop_assert!(graph.contains(&product));
        let basis = graph.basis();
        prop_assert_eq!(basis.len(), graph.rank());
        for b in &basis {
            prop_assert!(graph.contains(b));
        }
    }

    #[test]
    fn quotients_kill_and_surject(
        gens in prop::collection::vec(word(&alphabet(&["a", "b"]), 4), 1..4),
        kill in 0usize..4,
    ) {
        let al = alphabet(&["a", "b"]);
        let kill: Vec<Word> = gens.iter().take(kill).cloned().collect();
        if let Some(q) = quotient_onto_z(&al, &gens, &kill).unwrap() {
            for k in &kill {
                prop_assert_eq!(q.eval(k), Some(0));
            }
            let g = q.map.phi.iter().fold(0i64, |g, &x| num_gcd(g, x));
            prop_assert_eq!(g, 1);
        }
    }
}

fn num_gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        num_gcd(b, a % b)
    }
}
