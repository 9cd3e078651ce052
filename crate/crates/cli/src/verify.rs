use crate::report::Report;
use clap::ValueEnum;
use essalg::classify::{
    counterexample_construct, enumerate_cminimal, is_cminimal, nonindexed_isomorphic, property_star, verify_theorems,
};
use essalg::essential::{build_r_leq, clone_generators, recover_order};
use essalg::nbhd::{congruences, enumerate_neighbourhoods, is_neighbourhood, m_of, Neighbourhood};
use essalg::oracle::{brute_idempotent_search, brute_inv, brute_transport, MAX_TRANSPORT_SIZE};
use essalg::poset::{birkhoff_roundtrip, j_lattice};
use essalg::relalg::{product_expand, DenseRelation};
use essalg::{Budget, Cube, Poset};
use rayon::prelude::*;
use serde_json::{json, Value};

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Scope {
    Bijection,
    Birkhoff,
    Congruence,
    Theorems,
    OracleCrosscheck,
}

/// Result of one check: `witness` describes the failure, or carries
/// findings worth reporting on success.
struct Outcome {
    pass: bool,
    witness: Value,
}

fn ok() -> Outcome {
    Outcome { pass: true, witness: Value::Null }
}

fn fail(witness: Value) -> Outcome {
    Outcome { pass: false, witness }
}

fn bijection(p: &Poset, budget: &Budget) -> essalg::Result<Outcome> {
    let recovered = recover_order(&build_r_leq(p, 2, budget)?, p.len())?;
    Ok(if &recovered == p { ok() } else { fail(json!({ "recovered": recovered })) })
}

fn birkhoff(p: &Poset) -> Outcome {
    match birkhoff_roundtrip(p) {
        Some(_) => ok(),
        None => fail(json!("no isomorphism found for one of the round trips")),
    }
}

fn congruence(p: &Poset) -> essalg::Result<Outcome> {
    let con = congruences(&Neighbourhood::full(p, 1)?)?;
    let j = j_lattice(&p.reverse());
    Ok(match con.lattice.isomorphism_to(&j.lattice) {
        Some(_) => ok(),
        None => fail(json!({ "congruences": con.lattice.len(), "antichains": j.lattice.len() })),
    })
}

fn theorems(p: &Poset, budget: &Budget) -> essalg::Result<Outcome> {
    let report = verify_theorems(p, budget)?;
    if !report.pass() {
        return Ok(fail(serde_json::to_value(&report).expect("report serializes")));
    }
    if p.structural_predicates().is_depth1_coforest {
        return Ok(ok());
    }
    let c = counterexample_construct(p)?;
    let cmin = is_cminimal(&c.set);
    let star = property_star(&c.set);
    let iso_m = nonindexed_isomorphic(&c.set, &m_of(p))?.is_some();
    Ok(if cmin && !star && !iso_m {
        ok()
    } else {
        fail(json!({
            "counterexample": c.set.decode(), "case": c.case,
            "cminimal": cmin, "property_star": star, "isomorphic_to_m": iso_m,
        }))
    })
}

fn oracle_crosscheck(p: &Poset, budget: &Budget) -> essalg::Result<Outcome> {
    let n = p.len();
    let d = 1usize << n;
    let gens = clone_generators(p)?.iter().map(|g| g.to_op_table()).collect::<essalg::Result<Vec<_>>>()?;
    let mut inv: Vec<DenseRelation> = brute_inv(&gens, d, 2, budget)?.into_iter().filter(|r| !r.is_empty()).collect();
    let mut expected =
        build_r_leq(p, 2, budget)?.iter().map(|r| product_expand(r, 1, budget)).collect::<essalg::Result<Vec<_>>>()?;
    inv.sort_by(|a, b| a.codes().cmp(b.codes()));
    expected.sort_by(|a, b| a.codes().cmp(b.codes()));
    if inv != expected {
        return Ok(fail(json!({
            "dense_inv": inv.iter().map(|r| r.to_file()).collect::<Vec<_>>(),
            "r_leq_2": expected.iter().map(|r| r.to_file()).collect::<Vec<_>>(),
        })));
    }

    let size = Cube::new(n, 1)?.size();
    for mask in 1u64..1 << size {
        let set: Vec<u32> = essalg::poset::bits(mask).map(|x| x as u32).collect();
        let structural = is_neighbourhood(p, 1, &set)?;
        let brute = brute_idempotent_search(&set, p, 1, budget)?.is_some();
        if structural != brute {
            return Ok(fail(json!({ "set": set, "is_neighbourhood": structural, "idempotent_found": brute })));
        }
    }

    let cat = enumerate_cminimal(p, budget)?;
    for x in 0..cat.members.len() {
        for y in x..cat.members.len() {
            let (a, b) = (cat.member(x), cat.member(y));
            if a.len() != b.len() || a.len() > MAX_TRANSPORT_SIZE {
                continue;
            }
            let same = cat.member_class[x] == cat.member_class[y];
            let transport = brute_transport(&a, &b, 2)?.bijection.is_some();
            if same != transport {
                return Ok(fail(json!({ "a": a.decode(), "b": b.decode(), "same_class": same, "transport": transport })));
            }
        }
    }

    // Outside c-minimal sets, transport may find isomorphisms that do not
    // factor as automorphism then term operation; those are findings.
    let small: Vec<Neighbourhood> = enumerate_neighbourhoods(p, 1, budget)?.filter(|a| a.len() <= 4).collect();
    let mut gaps = Vec::new();
    for (x, a) in small.iter().enumerate() {
        for b in small[x + 1..].iter().filter(|b| b.len() == a.len()) {
            let structural = nonindexed_isomorphic(a, b)?.is_some();
            let transport = brute_transport(a, b, 2)?.bijection.is_some();
            if structural && !transport {
                return Ok(fail(json!({ "a": a.decode(), "b": b.decode(), "structural": true, "transport": false })));
            }
            if transport && !structural {
                gaps.push(json!([a.decode(), b.decode()]));
            }
        }
    }
    Ok(Outcome {
        pass: true,
        witness: if gaps.is_empty() { Value::Null } else { json!({ "transport_only_isomorphisms": gaps }) },
    })
}

fn check(scope: Scope, p: &Poset, budget: &Budget) -> essalg::Result<Outcome> {
    match scope {
        Scope::Bijection => bijection(p, budget),
        Scope::Birkhoff => Ok(birkhoff(p)),
        Scope::Congruence => congruence(p),
        Scope::Theorems => theorems(p, budget),
        Scope::OracleCrosscheck => oracle_crosscheck(p, budget),
    }
}

pub fn run(scope: Scope, bound: usize, budget: &Budget) -> anyhow::Result<Report> {
    let posets: Vec<Poset> = (0..=bound).flat_map(Poset::all_labeled).collect();
    let outcomes = posets.par_iter().map(|p| check(scope, p, budget)).collect::<essalg::Result<Vec<_>>>()?;

    let mut extras = Vec::new();
    if scope == Scope::Theorems && budget.max_n >= 5 {
        let cat = enumerate_cminimal(&Poset::m3(), budget)?;
        let sizes: Vec<usize> = cat.classes.iter().map(|c| c.representative.len()).collect();
        extras.push(("M3 catalogue has a 7-element class", sizes.contains(&7), json!({ "class_sizes": sizes })));
    }

    let failures: Vec<(&Poset, &Outcome)> = posets.iter().zip(&outcomes).filter(|(_, o)| !o.pass).collect();
    let findings: Vec<(&Poset, &Outcome)> =
        posets.iter().zip(&outcomes).filter(|(_, o)| o.pass && !o.witness.is_null()).collect();
    let pass = failures.is_empty() && extras.iter().all(|e| e.1);

    let mut r = Report::new(pass);
    let name = scope.to_possible_value().expect("no skipped scopes").get_name().to_string();
    r.line(format!("{name}: {} labeled posets with n <= {bound}", posets.len()));
    r.line(format!("failures: {}", failures.len()));
    for (p, o) in &failures {
        r.line(format!("  {p:?}: {}", o.witness));
    }
    for (what, ok, detail) in &extras {
        r.line(format!("{what}: {} {detail}", if *ok { "pass" } else { "FAIL" }));
    }
    if !findings.is_empty() {
        r.line(format!("findings: {}", findings.len()));
        for (p, o) in &findings {
            r.line(format!("  {p:?}: {}", o.witness));
        }
    }
    r.line(if pass { "result: pass".into() } else { "result: FAIL".into() });
    r.data = json!({
        "scope": name,
        "bound": bound,
        "checked": posets.len(),
        "failures": failures.iter().map(|(p, o)| json!({ "poset": p, "witness": o.witness })).collect::<Vec<_>>(),
        "extras": extras.iter().map(|(w, ok, d)| json!({ "check": w, "pass": ok, "detail": d })).collect::<Vec<_>>(),
        "findings": findings.iter().map(|(p, o)| json!({ "poset": p, "detail": o.witness })).collect::<Vec<_>>(),
    });
    Ok(r)
}
