//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any
//! criterion fails.

use std::cmp::Ordering;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use operad_core::groebner::polynomial_rank;
use operad_core::monoid::{
    check_ordered_monoid, check_triple, qm_exponents_of_normal_word, qm_rewrite, sample_free_word,
    sample_qm, FreeMonoid, LawReport,
};
use operad_core::word::check_ordered_operad;
use operad_core::{
    buchberger, build_poisson_order, builtin, check_morphism_laws, check_path_injectivity,
    count_normal_forms, ideal_dimension_oracle, leading_monomial, path_sequence, pathlex_order,
    permutation_of, qm_compare, qm_from_word, resolve_order, Generator, GeneratorAssignment,
    MonomialOrder, Qm, QmElement, ShuffleTree, SignSymmetry, SymmetricRelation, TreePolynomial,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn mu() -> Generator {
    Generator::binary("mu", SignSymmetry::Symmetric)
}

fn lam() -> Generator {
    Generator::binary("lam", SignSymmetry::Skew)
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(start: Instant, budget: Duration) -> Result<(), String> {
    let took = start.elapsed();
    ensure(took < budget, || {
        format!("took {took:.1?}, budget {budget:?}")
    })
}

fn law(report: &LawReport, what: &str) -> Result<(), String> {
    ensure(report.passed(), || {
        format!(
            "{what}: {} counterexamples, first: {}",
            report.counterexamples.len(),
            report.counterexamples[0]
        )
    })
}

fn words_up_to(len: usize) -> Vec<String> {
    let mut all = vec![String::new()];
    let mut layer = vec![String::new()];
    for _ in 0..len {
        layer = layer
            .iter()
            .flat_map(|w| ['x', 'y', 'q'].map(|c| format!("{w}{c}")))
            .collect();
        all.extend(layer.iter().cloned());
    }
    all
}

fn qm_normal_forms() -> Check {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let words = words_up_to(8);
    const SCHEDULES: usize = 50;
    for w in &words {
        let expected = qm_from_word(w).map_err(|e| e.to_string())?;
        for _ in 0..SCHEDULES {
            let nf = qm_rewrite(w, |n| rng.gen_range(0..n));
            ensure(
                qm_exponents_of_normal_word(&nf).as_ref() == Some(&expected),
                || format!("{w} rewrote to {nf}, expected {expected}"),
            )?;
        }
    }
    within(start, Duration::from_secs(10))?;
    Ok(format!("{} words x {SCHEDULES} schedules", words.len()))
}

fn ordered_monoid() -> Check {
    let start = Instant::now();
    let qm = Qm::default();
    let mut elems = Vec::new();
    for k in 0..=4 {
        for l in 0..=4 {
            for m in 0..=4 {
                elems.push(QmElement::new(k, l, m));
            }
        }
    }
    let mut report = LawReport::default();
    for a in &elems {
        for b in &elems {
            if qm_compare(a, b) != Ordering::Less {
                continue;
            }
            for c in &elems {
                check_triple(&qm, a, b, c, &mut report);
            }
        }
    }
    law(&report, "exhaustive")?;
    let exhaustive = report.exercised;
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let random = check_ordered_monoid(&qm, |r| sample_qm(r, 1_000_000), 10_000, &mut rng);
    law(&random, "random")?;
    within(start, Duration::from_secs(30))?;
    Ok(format!(
        "{exhaustive} exhaustive triples, {} random",
        random.exercised
    ))
}

fn ordered_operad() -> Check {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let report = check_ordered_operad(&Qm::default(), |r| sample_qm(r, 8), 10_000, 5, &mut rng);
    law(&report, "qm")?;
    let free = FreeMonoid::new(&["a", "b"]);
    let free_report = check_ordered_operad(
        &free,
        |r| sample_free_word(&free, r, 6),
        10_000,
        5,
        &mut rng,
    );
    law(&free_report, "free")?;
    within(start, Duration::from_secs(30))?;
    Ok(format!(
        "{} qm and {} free contexts",
        report.exercised, free_report.exercised
    ))
}

fn theta_sigma_example() -> Check {
    let a = Generator::binary("a", SignSymmetry::None);
    let b = Generator::binary("b", SignSymmetry::None);
    let inner = ShuffleTree::node(b, vec![ShuffleTree::Leaf(1), ShuffleTree::Leaf(3)])
        .map_err(|e| e.to_string())?;
    let t = ShuffleTree::node(a, vec![inner, ShuffleTree::Leaf(2)]).map_err(|e| e.to_string())?;
    let (theta, sigma) = (
        path_sequence(&t).to_string(),
        permutation_of(&t).to_string(),
    );
    ensure(theta == "(ab, a, ab)" && sigma == "(1,3,2)", || {
        format!("got {theta} and {sigma}")
    })?;
    Ok(format!("{t}: {theta}, {sigma}"))
}

/// Children at every vertex sorted by minimal leaf.
fn normalize(t: &ShuffleTree) -> ShuffleTree {
    match t {
        ShuffleTree::Leaf(l) => ShuffleTree::Leaf(*l),
        ShuffleTree::Node(g, children) => {
            let mut cs: Vec<ShuffleTree> = children.iter().map(normalize).collect();
            cs.sort_by_key(ShuffleTree::min_leaf);
            ShuffleTree::Node(g.clone(), cs)
        }
    }
}

fn leibniz_leading_terms() -> Check {
    let pois = builtin("pois").map_err(|e| e.to_string())?;
    let order = build_poisson_order(&pois.generators).map_err(|e| e.to_string())?;
    let leibniz = pois
        .provenance
        .iter()
        .find(|p| p.source.starts_with("lam(a1, mu(a2, a3))"))
        .ok_or("no Leibniz relation")?;
    let source =
        SymmetricRelation::parse(&leibniz.source, &pois.generators).map_err(|e| e.to_string())?;
    let lhs = &source.terms()[0].1;
    let mut shown = Vec::new();
    for e in leibniz.expansions.iter().filter(|e| e.kept) {
        let relabel = &e.relabeling;
        let expected = normalize(&lhs.map_leaves(&|l| relabel[l as usize - 1]));
        let got = leading_monomial(&e.relation, &order).map_err(|x| x.to_string())?;
        ensure(got == expected, || {
            format!("relabeling {relabel:?}: leading term {got}, left side {expected}")
        })?;
        shown.push(got.to_string());
    }
    ensure(shown.len() == 3, || {
        format!("{} Leibniz relations kept", shown.len())
    })?;
    Ok(shown.join("; "))
}

fn poisson_order() -> MonomialOrder {
    resolve_order("poisson-qm", &[mu(), lam()]).expect("named order")
}

fn poisson_basis() -> Check {
    let start = Instant::now();
    let pois = builtin("pois").map_err(|e| e.to_string())?;
    let order = poisson_order();
    let report = buchberger(&pois.shuffle_relations, &order, 4).map_err(|e| e.to_string())?;
    ensure(report.survivors.is_empty(), || report.verdict())?;
    ensure(report.basis.len() == 6, || {
        format!("basis has {} elements", report.basis.len())
    })?;
    let inputs = &pois.shuffle_relations;
    let mut both = inputs.clone();
    both.extend(report.basis.iter().cloned());
    let (r_in, r_basis, r_both) = (
        polynomial_rank(inputs),
        polynomial_rank(&report.basis),
        polynomial_rank(&both),
    );
    ensure(r_in == 6 && r_basis == 6 && r_both == 6, || {
        format!("ranks: inputs {r_in}, basis {r_basis}, together {r_both}")
    })?;
    let monic = |p: &TreePolynomial| p.monic(&order).expect("nonzero");
    let same = inputs
        .iter()
        .filter(|p| report.basis.contains(&monic(p)))
        .count();
    within(start, Duration::from_secs(60))?;
    Ok(format!(
        "{} overlaps, 0 survivors, basis spans the inputs ({same} of 6 coincide after monic scaling)",
        report.processed_overlaps
    ))
}

fn factorial(n: usize) -> usize {
    (1..=n).product()
}

fn poisson_dimensions() -> Check {
    let start = Instant::now();
    let pois = builtin("pois").map_err(|e| e.to_string())?;
    let order = poisson_order();
    let report = buchberger(&pois.shuffle_relations, &order, 6).map_err(|e| e.to_string())?;
    let mut found = Vec::new();
    for n in 2..=6 {
        let nf = count_normal_forms(&report.leading_terms, &pois.generators, n)
            .map_err(|e| e.to_string())?;
        let oracle = ideal_dimension_oracle(&pois.shuffle_relations, &pois.generators, n)
            .map_err(|e| e.to_string())?;
        ensure(nf == oracle && nf == factorial(n), || {
            format!("arity {n}: normal forms {nf}, oracle {oracle}")
        })?;
        found.push(nf.to_string());
    }
    within(start, Duration::from_secs(300))?;
    Ok(format!("arities 2..6: {}", found.join(", ")))
}

fn sub_presentations() -> Check {
    let mut summary = Vec::new();
    for (name, expected) in [
        ("com", (|_| 1) as fn(usize) -> usize),
        ("lie", |n| factorial(n - 1)),
    ] {
        let pres = builtin(name).map_err(|e| e.to_string())?;
        let orders = [poisson_order(), pathlex_order(&pres.generators)];
        for order in &orders {
            let report =
                buchberger(&pres.shuffle_relations, order, 6).map_err(|e| e.to_string())?;
            ensure(report.survivors.is_empty(), || {
                format!("{name} under {}: {}", order.name(), report.verdict())
            })?;
            for n in 1..=6 {
                let nf = count_normal_forms(&report.leading_terms, &pres.generators, n)
                    .map_err(|e| e.to_string())?;
                ensure(nf == expected(n), || {
                    format!("{name} under {} arity {n}: {nf} normal forms", order.name())
                })?;
            }
        }
        let mut dims = Vec::new();
        for n in 1..=6 {
            let oracle = ideal_dimension_oracle(&pres.shuffle_relations, &pres.generators, n)
                .map_err(|e| e.to_string())?;
            ensure(oracle == expected(n), || {
                format!("{name} arity {n}: oracle {oracle}")
            })?;
            dims.push(oracle.to_string());
        }
        summary.push(format!("{name} {}", dims.join(",")));
    }
    Ok(format!(
        "{} under poisson-qm and pathlex",
        summary.join("; ")
    ))
}

fn morphism_laws() -> Check {
    let gens = [mu(), lam()];
    let psi = GeneratorAssignment::new()
        .with(&mu(), vec![QmElement::x(); 2])
        .and_then(|a| a.with(&lam(), vec![QmElement::y(); 2]))
        .map_err(|e| e.to_string())?;
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let report = check_morphism_laws(&Qm::default(), &psi, &gens, 10_000, 5, &mut rng)
        .map_err(|e| e.to_string())?;
    law(&report, "morphism")?;
    let inj = check_path_injectivity(&gens, 5).map_err(|e| e.to_string())?;
    law(&inj, "injectivity")?;
    Ok(format!(
        "{} compositions, {} trees distinguished",
        report.exercised, inj.exercised
    ))
}

fn determinism() -> Check {
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_operad"))
            .args([
                "gb",
                "--preset",
                "pois",
                "--order",
                "poisson-qm",
                "--format",
                "json",
                "--seed",
                "7",
            ])
            .output()
            .map_err(|e| e.to_string())
    };
    let (a, b) = (run()?, run()?);
    ensure(a.status.success() && b.status.success(), || {
        format!("exit status {:?} / {:?}", a.status, b.status)
    })?;
    ensure(a.stdout == b.stdout, || "reports differ".to_string())?;
    Ok(format!("{} identical bytes", a.stdout.len()))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("QM normal forms are unique", qm_normal_forms),
        ("QM is an ordered monoid", ordered_monoid),
        ("word operads are ordered", ordered_operad),
        ("path sequence and permutation example", theta_sigma_example),
        (
            "Leibniz leading terms are the left sides",
            leibniz_leading_terms,
        ),
        ("Poisson relations form a Groebner basis", poisson_basis),
        (
            "Poisson dimensions agree with the oracle",
            poisson_dimensions,
        ),
        ("Com and Lie sub-presentations", sub_presentations),
        ("morphism laws and injectivity", morphism_laws),
        ("gb reports are deterministic", determinism),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = check();
        let took = start.elapsed();
        match result {
            Ok(detail) => println!("PASS {:>2} {name} ({detail}) [{took:.2?}]", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {why} [{took:.2?}]", i + 1);
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
