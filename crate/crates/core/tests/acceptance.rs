//! One line per acceptance criterion. Runtime limits are part of each
//! criterion. Exits nonzero if any line fails, except lines listed in
//! `KNOWN_RED`, which record documented discrepancies in the source
//! examples and stay red.

use essalg::classify::{
    counterexample_construct, enumerate_cminimal, is_cminimal, nonindexed_isomorphic, property_star,
    term_isomorphic, verify_theorems,
};
use essalg::essential::{build_r_leq, clone_generators, essentiality_check, recover_order};
use essalg::nbhd::{congruences, enumerate_neighbourhoods, is_neighbourhood, m_of, Neighbourhood};
use essalg::oracle::{brute_idempotent_search, brute_inv, brute_transport};
use essalg::poset::{bits, j_lattice};
use essalg::relalg::{product_expand, DenseRelation};
use essalg::{Budget, Cube, Poset};
use std::time::Instant;

const KNOWN_RED: &[&str] = &["5b"];

struct Runner {
    unexpected: usize,
}

impl Runner {
    fn check(&mut self, id: &str, name: &str, limit_s: f64, f: impl FnOnce() -> (bool, String)) {
        let t = Instant::now();
        let (ok, detail) = f();
        let secs = t.elapsed().as_secs_f64();
        let pass = ok && secs < limit_s;
        let tag = match (pass, KNOWN_RED.contains(&id)) {
            (true, _) => "PASS",
            (false, true) => "FAIL (documented)",
            (false, false) => {
                self.unexpected += 1;
                "FAIL"
            }
        };
        println!("[{tag}] {id} {name}: {detail} ({secs:.2} s, limit {limit_s} s)");
    }
}

fn labeled_up_to(n: usize) -> Vec<Poset> {
    (0..=n).flat_map(Poset::all_labeled).collect()
}

fn unlabeled_count(posets: &[Poset]) -> usize {
    let mut reps: Vec<&Poset> = Vec::new();
    for p in posets {
        if !reps.iter().any(|r| r.isomorphism_to(p).is_some()) {
            reps.push(p);
        }
    }
    reps.len()
}

fn dense_sorted(mut v: Vec<DenseRelation>) -> Vec<DenseRelation> {
    v.sort_by(|a, b| a.codes().cmp(b.codes()));
    v
}

fn set(p: &Poset, rows: &[&[u32]]) -> Neighbourhood {
    let cube = Cube::new(p.len(), 1).unwrap();
    Neighbourhood::new(p, 1, rows.iter().map(|r| cube.encode(r).unwrap()).collect()).unwrap()
}

fn main() {
    let budget = Budget::default();
    let mut run = Runner { unexpected: 0 };

    run.check("1", "order recovered from R_<=,2 for every poset with n <= 4", 10.0, || {
        let all = labeled_up_to(4);
        let bad = all
            .iter()
            .filter(|p| recover_order(&build_r_leq(p, 2, &budget).unwrap(), p.len()).unwrap() != **p)
            .count();
        let four = Poset::all_labeled(4);
        let unlabeled = unlabeled_count(&four);
        (
            bad == 0 && four.len() == 219 && unlabeled == 16,
            format!("{} posets, n = 4: {} labeled / {unlabeled} unlabeled, {bad} mismatches", all.len(), four.len()),
        )
    });

    run.check("2", "dense Inv of the generators equals the expansions of R_<=,2 at n = 2", 5.0, || {
        let mut ok = true;
        let mut detail = Vec::new();
        for p in Poset::all_labeled(2) {
            let gens: Vec<_> = clone_generators(&p).unwrap().iter().map(|g| g.to_op_table().unwrap()).collect();
            let inv = brute_inv(&gens, 4, 2, &budget).unwrap();
            let candidates = 1u64 << 16;
            let nonempty = dense_sorted(inv.into_iter().filter(|r| !r.is_empty()).collect());
            let expected = dense_sorted(
                build_r_leq(&p, 2, &budget).unwrap().iter().map(|r| product_expand(r, 1, &budget).unwrap()).collect(),
            );
            ok &= nonempty == expected;
            detail.push(format!("{p:?}: {} of {candidates}", nonempty.len()));
        }
        (ok, detail.join(", "))
    });

    run.check("3", "is_neighbourhood agrees with exhaustive idempotent search", 60.0, || {
        let mut cases: Vec<(Poset, u32)> = Vec::new();
        for n in 0..=2 {
            for p in Poset::all_labeled(n) {
                cases.push((p.clone(), 1));
                cases.push((p, 2));
            }
        }
        cases.extend(Poset::all_labeled(3).into_iter().map(|p| (p, 1)));
        let (mut checked, mut disagree) = (0u64, 0u64);
        for (p, l) in &cases {
            let size = Cube::new(p.len(), *l).unwrap().size();
            for mask in 1u64..1 << size {
                let s: Vec<u32> = bits(mask).map(|x| x as u32).collect();
                let a = is_neighbourhood(p, *l, &s).unwrap();
                let b = brute_idempotent_search(&s, p, *l, &budget).unwrap().is_some();
                checked += 1;
                disagree += (a != b) as u64;
            }
        }
        (disagree == 0, format!("{checked} subsets over {} (poset, l) pairs, {disagree} disagreements", cases.len()))
    });

    run.check("4", "Con(E_P) isomorphic to J(reverse P) for every poset with n <= 4", 10.0, || {
        let all = labeled_up_to(4);
        let bad = all
            .iter()
            .filter(|p| {
                let con = congruences(&Neighbourhood::full(p, 1).unwrap()).unwrap();
                con.lattice.isomorphism_to(&j_lattice(&p.reverse()).lattice).is_none()
            })
            .count();
        (bad == 0, format!("{} posets, {bad} without witness", all.len()))
    });

    let chain = Poset::chain(3);
    run.check("5a", "chain-3 has 2 classes", 30.0, || {
        let cat = enumerate_cminimal(&chain, &budget).unwrap();
        let sizes: Vec<usize> = cat.classes.iter().map(|c| c.representative.len()).collect();
        (sizes.len() == 2, format!("class sizes {sizes:?}"))
    });

    run.check("5b", "chain-3 listed representatives lie in distinct classes", 30.0, || {
        let cat = enumerate_cminimal(&chain, &budget).unwrap();
        let x = set(&chain, &[&[0, 0, 0], &[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]);
        let y = set(&chain, &[&[0, 0, 0], &[1, 0, 0], &[0, 1, 0], &[0, 1, 1]]);
        let (cx, cy) = (cat.class_of(&x), cat.class_of(&y));
        let transport = brute_transport(&x, &y, 2).unwrap().bijection.is_some();
        (
            cx.is_some() && cy.is_some() && cx != cy,
            format!("classes {cx:?} and {cy:?}; clone transport finds an isomorphism: {transport}"),
        )
    });

    let vee = Poset::vee();
    run.check("5c", "VEE has 2 classes containing the listed 5- and 4-element sets", 30.0, || {
        let cat = enumerate_cminimal(&vee, &budget).unwrap();
        let x = set(&vee, &[&[0, 0, 0], &[1, 0, 0], &[0, 1, 0], &[0, 0, 1], &[0, 1, 1]]);
        let y = set(&vee, &[&[0, 0, 0], &[1, 0, 0], &[0, 1, 0], &[1, 0, 1]]);
        let (cx, cy) = (cat.class_of(&x), cat.class_of(&y));
        let sizes: Vec<usize> = cat.classes.iter().map(|c| c.representative.len()).collect();
        (
            sizes == [5, 4] && cx == Some(0) && cy == Some(1),
            format!("class sizes {sizes:?}, listed sets in classes {cx:?} and {cy:?}"),
        )
    });

    run.check("5d", "STAR-n has one class, {0,1}^(n-1)x{0} u {0}^(n-1)x{1}, for n <= 5", 30.0, || {
        let mut ok = true;
        let mut detail = Vec::new();
        for n in 1..=5 {
            let p = Poset::star(n);
            let cube = Cube::new(n, 1).unwrap();
            let top = cube.with_component(0, n - 1, 1);
            let lower: Vec<u32> = (0..cube.size() as u32).filter(|&x| cube.component(x, n - 1) == 0).collect();
            let want = Neighbourhood::new(&p, 1, lower.into_iter().chain([top]).collect()).unwrap();
            let cat = enumerate_cminimal(&p, &budget).unwrap();
            ok &= cat.classes.len() == 1 && cat.class_of(&want) == Some(0);
            detail.push(format!("n={n}: {} class, size {}", cat.classes.len(), want.len()));
        }
        (ok, detail.join(", "))
    });

    run.check("5e", "M3 catalogue contains a 7-element class", 30.0, || {
        let p = Poset::m3();
        let cat = enumerate_cminimal(&p, &budget).unwrap();
        let sizes: Vec<usize> = cat.classes.iter().map(|c| c.representative.len()).collect();
        // the listed set with its first factor read as {1}
        let cube = Cube::new(5, 1).unwrap();
        let listed: Vec<u32> = (0..cube.size() as u32)
            .filter(|&x| {
                let c = cube.decode(x);
                (c[0] == 0 && c[3] == 0 && c[4] == 0)
                    || (c[0] == 1 && c[1] == 0 && c[2] == 0 && c[4] == 0)
                    || c == [0, 0, 0, 0, 1]
            })
            .collect();
        let listed = Neighbourhood::new(&p, 1, listed).unwrap();
        let class = cat.class_of(&listed);
        (
            sizes.contains(&7) && class.is_some_and(|c| sizes[c] == 7),
            format!("class sizes {sizes:?}, listed 7-element set in class {class:?}"),
        )
    });

    run.check("6", "classification biconditionals for every poset with n <= 4", 300.0, || {
        let all = labeled_up_to(4);
        let mut bad = Vec::new();
        for p in &all {
            if !verify_theorems(p, &budget).unwrap().pass() {
                bad.push(format!("{p:?}"));
            }
        }
        (bad.is_empty(), format!("{} posets, counterexamples {bad:?}", all.len()))
    });

    run.check("7", "counterexample constructions for non-co-forests with n <= 4", 30.0, || {
        let targets: Vec<Poset> =
            labeled_up_to(4).into_iter().filter(|p| !p.structural_predicates().is_depth1_coforest).collect();
        let bad = targets
            .iter()
            .filter(|p| {
                let c = counterexample_construct(p).unwrap();
                !(is_cminimal(&c.set)
                    && !property_star(&c.set)
                    && nonindexed_isomorphic(&c.set, &m_of(p)).unwrap().is_none())
            })
            .count();
        (bad == 0, format!("{} posets, {bad} failures", targets.len()))
    });

    run.check("8a", "term isomorphism is an equivalence relation, n <= 3, l = 1", 60.0, || {
        let mut pairs = 0u64;
        let mut ok = true;
        for p in labeled_up_to(3) {
            let all: Vec<Neighbourhood> = enumerate_neighbourhoods(&p, 1, &budget).unwrap().collect();
            for size in 1..=all.iter().map(|a| a.len()).max().unwrap_or(0) {
                let group: Vec<&Neighbourhood> = all.iter().filter(|a| a.len() == size).collect();
                let rel: Vec<Vec<bool>> = group
                    .iter()
                    .map(|a| group.iter().map(|b| term_isomorphic(a, b).unwrap().is_some()).collect())
                    .collect();
                pairs += (group.len() * group.len()) as u64;
                let k = group.len();
                ok &= (0..k).all(|i| rel[i][i]);
                ok &= (0..k).all(|i| (0..k).all(|j| rel[i][j] == rel[j][i]));
                ok &= (0..k).all(|i| (0..k).all(|j| !rel[i][j] || (0..k).all(|m| !rel[j][m] || rel[i][m])));
            }
        }
        (ok, format!("{pairs} ordered pairs"))
    });

    run.check("8b", "essentiality identities and irredundant axis covers, n <= 3", 60.0, || {
        let all = labeled_up_to(3);
        let bad = all.iter().filter(|p| !essentiality_check(p, &budget).unwrap().pass()).count();
        (bad == 0, format!("{} posets, {bad} failures", all.len()))
    });

    run.check("8c", "|M(P)| = |J(P)| for every poset with n <= 4", 10.0, || {
        let all = labeled_up_to(4);
        let bad = all.iter().filter(|p| m_of(p).len() != p.antichain_masks().len()).count();
        (bad == 0, format!("{} posets, {bad} mismatches", all.len()))
    });

    if run.unexpected > 0 {
        println!("{} unexpected failures", run.unexpected);
        std::process::exit(1);
    }
}
