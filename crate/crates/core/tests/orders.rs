mod common;

use std::cmp::Ordering;

use common::*;
use operad_core::order::parse_order_spec;
use operad_core::tree::{compose, enumerate_trees, Relabeling};
use operad_core::{
    build_poisson_order, builtin, check_admissible, leading_monomial, parse_tree, pathlex_order,
    resolve_order, Error, MonomialOrder, ShuffleTree,
};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn poisson() -> MonomialOrder {
    build_poisson_order(&pois_gens()).unwrap()
}

fn t(s: &str) -> ShuffleTree {
    parse_tree(s, &pois_gens()).unwrap()
}

#[test]
fn compare_examples() {
    let o = poisson();
    assert_eq!(
        o.compare(&t("lam(1, mu(2, 3))"), &t("mu(lam(1, 2), 3)"))
            .unwrap(),
        Ordering::Greater
    );
    assert_eq!(
        o.compare(&t("mu(1, mu(2, 3))"), &t("mu(mu(1, 2), 3)"))
            .unwrap(),
        Ordering::Greater
    );
    for s in ["mu(1, 2)", "lam(mu(1, 3), 2)", "mu(lam(1, 3), lam(2, 4))"] {
        assert_eq!(o.compare(&t(s), &t(s)).unwrap(), Ordering::Equal);
    }
    assert!(matches!(
        o.compare(&t("mu(1, 2)"), &t("mu(1, mu(2, 3))")),
        Err(Error::ArityMismatch(2, 3))
    ));
}

#[test]
fn traces_show_the_deciding_images() {
    let o = poisson();
    let trace = o
        .trace(&t("lam(1, mu(2, 3))"), &t("mu(lam(1, 2), 3)"))
        .unwrap();
    assert_eq!(trace[0].left, "(y, xyq, xyq)");
    assert_eq!(trace[0].right, "(xy, xy, x)");
    assert_eq!(trace[0].verdict, Ordering::Greater);
    let trace = o
        .trace(&t("mu(1, mu(2, 3))"), &t("mu(mu(1, 2), 3)"))
        .unwrap();
    assert_eq!(trace[0].left, "(x, x^2, x^2)");
    assert_eq!(trace[0].right, "(x^2, x^2, x)");
    assert_eq!(trace[0].verdict, Ordering::Greater);
}

#[test]
fn signature_is_checked() {
    assert!(matches!(
        build_poisson_order(&[mu()]),
        Err(Error::WrongSignature(_))
    ));
    assert!(build_poisson_order(&[lam(), mu()]).is_ok());
    // the named order still applies to the sub-signatures
    let lie = builtin("lie").unwrap();
    let o = resolve_order("poisson-qm", &lie.generators).unwrap();
    assert!(o.covers_all(&lie.generators).is_ok());
    assert!(matches!(
        resolve_order("nonsense", &lie.generators),
        Err(Error::UnknownName(_))
    ));
}

#[test]
fn leading_terms_of_the_poisson_relations() {
    let o = poisson();
    let pois = builtin("pois").unwrap();
    let leibniz = &pois.provenance[2];
    let lhs = ["lam(1, mu(2, 3))", "lam(mu(1, 3), 2)", "lam(mu(1, 2), 3)"];
    let kept: Vec<_> = leibniz.kept().collect();
    assert_eq!(kept.len(), 3);
    for (rel, expected) in kept.into_iter().zip(lhs) {
        assert_eq!(leading_monomial(rel, &o).unwrap(), t(expected));
    }
    let com = &pois.shuffle_relations[0];
    assert_eq!(leading_monomial(com, &o).unwrap(), t("mu(1, mu(2, 3))"));
    let jacobi = &pois.shuffle_relations[2];
    assert_eq!(
        leading_monomial(jacobi, &o).unwrap(),
        t("lam(lam(1, 2), 3)")
    );
}

fn comparison_matrix(o: &MonomialOrder, trees: &[ShuffleTree]) -> Vec<Vec<Ordering>> {
    trees
        .iter()
        .map(|a| trees.iter().map(|b| o.cmp(a, b)).collect())
        .collect()
}

#[test]
fn strict_total_order_at_small_arity() {
    for o in [poisson(), pathlex_order(&pois_gens())] {
        for n in 3..=4 {
            let trees = enumerate_trees(&pois_gens(), n).unwrap();
            let m = comparison_matrix(&o, &trees);
            let len = trees.len();
            for i in 0..len {
                assert_eq!(m[i][i], Ordering::Equal);
                for j in 0..len {
                    assert_eq!(m[i][j], m[j][i].reverse(), "{} / {}", trees[i], trees[j]);
                    if i != j {
                        assert_ne!(m[i][j], Ordering::Equal);
                    }
                    if m[i][j] != Ordering::Less {
                        continue;
                    }
                    for (ik, jk) in m[i].iter().zip(&m[j]) {
                        if *jk == Ordering::Less {
                            assert_eq!(*ik, Ordering::Less);
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn poisson_order_is_total_up_to_arity_5() {
    let o = poisson();
    assert!(o.is_total());
    let trees = enumerate_trees(&pois_gens(), 5).unwrap();
    for (i, a) in trees.iter().enumerate() {
        for b in &trees[i + 1..] {
            assert_ne!(o.cmp(a, b), Ordering::Equal, "{a} / {b}");
        }
    }
}

#[test]
fn admissibility() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let report = check_admissible(&poisson(), &pois_gens(), 10_000, 5, &mut rng).unwrap();
    assert!(report.passed(), "{:?}", report.counterexamples);
    assert!(report.exercised > 5_000);
    let report = check_admissible(
        &pathlex_order(&pois_gens()),
        &pois_gens(),
        10_000,
        5,
        &mut rng,
    )
    .unwrap();
    assert!(report.passed(), "{:?}", report.counterexamples);
    let report = check_admissible(
        &pathlex_order(&[lam(), mu()]),
        &pois_gens(),
        2_000,
        5,
        &mut rng,
    )
    .unwrap();
    assert!(report.passed(), "{:?}", report.counterexamples);
}

#[test]
fn non_translation_invariant_monoid_breaks_admissibility() {
    let o =
        parse_order_spec("word(qm-q-first; mu=(x,x), lam=(y,y)) > pathlex(mu<lam) > perm").unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let report = check_admissible(&o, &pois_gens(), 10_000, 5, &mut rng).unwrap();
    assert!(!report.passed());
}

#[test]
fn order_specs() {
    let o = poisson();
    assert_eq!(
        o.spec(),
        "word(qm; lam=(y,y), mu=(x,x)) > pathlex(mu<lam) > perm"
    );
    let parsed = parse_order_spec(&o.spec()).unwrap();
    assert!(parsed.is_total());
    let trees = enumerate_trees(&pois_gens(), 4).unwrap();
    for a in &trees {
        for b in &trees {
            assert_eq!(parsed.cmp(a, b), o.cmp(a, b));
        }
    }
    assert!(!parse_order_spec("word(qm; mu=(x,x), lam=(y,y))")
        .unwrap()
        .is_total());
    assert!(parse_order_spec("word(nope; mu=(x,x))").is_err());
    assert!(parse_order_spec("word(qm; mu=(x,w))").is_err());
}

#[test]
fn later_stages_only_break_word_ties() {
    let o = poisson();
    let word = &o.stages()[0];
    let mut ties = 0;
    for n in 3..=5 {
        let trees = enumerate_trees(&pois_gens(), n).unwrap();
        for a in &trees {
            for b in &trees {
                let w = word.compare(a, b);
                if w == Ordering::Equal {
                    if a != b {
                        ties += 1;
                        let trace = o.trace(a, b).unwrap();
                        assert!(
                            trace.len() > 1 && trace.last().unwrap().verdict != Ordering::Equal
                        );
                    }
                } else {
                    assert_eq!(o.cmp(a, b), w);
                }
            }
        }
    }
    // the word stage alone is not total, so the tiebreak does real work
    assert!(ties > 0);
}

#[test]
fn stage_monotonicity_under_composition() {
    let o = poisson();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut cache = TreeCache::new(pois_gens());
    let mut exercised = 0;
    for _ in 0..5_000 {
        let k = rng.gen_range(2..=3);
        let m = rng.gen_range(1..=6 - k);
        let (t1, t2) = (cache.random(&mut rng, k), cache.random(&mut rng, k));
        let fixed = cache.random(&mut rng, m);
        let slot = rng.gen_range(1..=m);
        let r = Relabeling::all_shuffles(m, slot, k)
            .choose(&mut rng)
            .unwrap()
            .clone();
        let (c1, c2) = (
            compose(&fixed, slot, &t1, &r).unwrap(),
            compose(&fixed, slot, &t2, &r).unwrap(),
        );
        let weakly = |a: &ShuffleTree, b: &ShuffleTree| {
            o.stages()
                .iter()
                .all(|s| s.compare(a, b) != Ordering::Greater)
        };
        if weakly(&c1, &c2) {
            exercised += 1;
            assert_ne!(o.cmp(&c1, &c2), Ordering::Greater);
        }
        // each stage is itself compatible with composition
        for s in o.stages() {
            let before = s.compare(&t1, &t2);
            if before != Ordering::Equal {
                assert_eq!(
                    s.compare(&c1, &c2),
                    before,
                    "{} on {t1} / {t2} in {fixed}",
                    s.label()
                );
            }
        }
    }
    assert!(exercised > 1_000);
}
