mod report;
mod verify;

use anyhow::{bail, Context};
use clap::{Parser, Subcommand, ValueEnum};
use essalg::classify::{counterexample_construct, enumerate_cminimal, property_star, verify_theorems};
use essalg::essential::{build_r_leq, canonical_generators, essentiality_check};
use essalg::nbhd::{enumerate_neighbourhoods, m_of, Neighbourhood};
use essalg::poset::PosetFile;
use essalg::{Budget, Poset};
use report::Report;
use serde_json::{json, Value};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser, Debug)]
#[command(name = "essalg", version, about = "Essential algebras of finite posets")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Worker threads for verification (default: all cores).
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    threads: Option<u64>,
    /// Largest dense tuple set or candidate count materialised.
    #[arg(long, global = true, default_value_t = Budget::default().tuples, value_parser = clap::value_parser!(u64).range(1..))]
    budget_tuples: u64,
    /// Largest poset size accepted.
    #[arg(long, global = true, default_value_t = Budget::default().max_n, value_parser = clap::builder::RangedU64ValueParser::<usize>::new().range(1..))]
    max_n: usize,
    /// Largest relation arity.
    #[arg(long, global = true, default_value_t = Budget::default().max_arity, value_parser = clap::builder::RangedU64ValueParser::<usize>::new().range(1..))]
    max_arity: usize,
    /// Largest component width `l`.
    #[arg(long, global = true, default_value_t = 3, value_parser = clap::value_parser!(u32).range(1..))]
    max_l: u32,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Summarise the essential algebra of a poset.
    Build {
        #[arg(long)]
        poset: PathBuf,
    },
    /// List neighbourhoods or c-minimal neighbourhoods.
    Enum {
        #[arg(long)]
        poset: PathBuf,
        #[arg(long, default_value_t = 1)]
        l: u32,
        #[arg(long, value_enum, default_value_t = Kind::Neighbourhoods)]
        kind: Kind,
    },
    /// Catalogue c-minimal classes and check the classification statements.
    Classify {
        #[arg(long)]
        poset: PathBuf,
    },
    /// Check a family of statements over all labeled posets up to a bound.
    Verify {
        #[arg(long, value_enum)]
        scope: verify::Scope,
        #[arg(long, default_value_t = 4)]
        bound: usize,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Format {
    Text,
    Structured,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Kind {
    Neighbourhoods,
    Cminimal,
}

impl Cli {
    fn budget(&self) -> Budget {
        Budget { tuples: self.budget_tuples, max_arity: self.max_arity, max_n: self.max_n }
    }

    fn config(&self) -> Value {
        json!({
            "command": format!("{:?}", self.command),
            "format": format!("{:?}", self.format).to_lowercase(),
            "budget": self.budget(),
            "max_l": self.max_l,
        })
    }
}

fn read_poset(path: &Path) -> anyhow::Result<Poset> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let file: PosetFile = serde_json::from_str(&text).with_context(|| format!("{}: malformed poset file", path.display()))?;
    file.to_poset().with_context(|| format!("{}: invalid order", path.display()))
}

fn build(poset: &Poset, budget: &Budget) -> anyhow::Result<Report> {
    let n = poset.len();
    let rels = build_r_leq(poset, 2, budget)?;
    let gens = canonical_generators(poset)?;
    let full = Neighbourhood::full(poset, 1)?;
    let axes: Vec<Vec<Vec<u32>>> = gens
        .e
        .iter()
        .map(|e| Neighbourhood::new(poset, 1, e.image(full.elements())).map(|a| a.decode()))
        .collect::<essalg::Result<_>>()?;
    let ess = essentiality_check(poset, budget)?;
    let mut r = Report::new(ess.pass());
    r.line(format!("poset: n = {n}, strict pairs {:?}", poset.to_file().pairs));
    r.line(format!("algebra size: {}", full.len()));
    r.line(format!("R_<=,2: {} relations", rels.len()));
    for rel in &rels {
        r.line(format!("  {}", serde_json::to_string(&rel.to_file())?));
    }
    r.line(format!("generators: {} axis projections and d", gens.e.len()));
    r.line(format!("axis neighbourhoods: {}", axes.len()));
    for (i, a) in axes.iter().enumerate() {
        r.line(format!("  e_{}: {a:?}", i + 1));
    }
    r.line(format!("essentiality: {}", if ess.pass() { "pass" } else { "FAIL" }));
    r.data = json!({
        "poset": poset,
        "n": n,
        "size": full.len(),
        "r_leq_2": rels.iter().map(|r| r.to_file()).collect::<Vec<_>>(),
        "generators": {
            "e": gens.e.iter().map(|e| e.to_file()).collect::<Vec<_>>(),
            "d": gens.d.to_file(),
        },
        "axis_neighbourhoods": axes,
        "essentiality": ess,
    });
    Ok(r)
}

fn enumerate(poset: &Poset, l: u32, kind: Kind, budget: &Budget) -> anyhow::Result<Report> {
    let mut r = Report::new(true);
    match kind {
        Kind::Neighbourhoods => {
            let all: Vec<Vec<Vec<u32>>> = enumerate_neighbourhoods(poset, l, budget)?.map(|a| a.decode()).collect();
            r.line(format!("neighbourhoods: {}", all.len()));
            for a in &all {
                r.line(format!("  {a:?}"));
            }
            r.data = json!({ "poset": poset, "l": l, "kind": "neighbourhoods", "count": all.len(), "neighbourhoods": all });
        }
        Kind::Cminimal => {
            if l != 1 {
                bail!("c-minimal catalogues are computed at l = 1 (every class has an l = 1 representative)");
            }
            let cat = enumerate_cminimal(poset, budget)?;
            r.line(format!("c-minimal neighbourhoods: {}", cat.members.len()));
            r.line(format!("classes: {}", cat.classes.len()));
            for (c, class) in cat.classes.iter().enumerate() {
                r.line(format!(
                    "  class {c}: {} elements, {} members{}: {:?}",
                    class.representative.len(),
                    class.members,
                    if class.is_m_of { ", contains M(P)" } else { "" },
                    class.representative.decode()
                ));
            }
            let mut members = Vec::with_capacity(cat.members.len());
            for k in 0..cat.members.len() {
                let a = cat.member(k);
                members.push(json!({
                    "elements": a.decode(),
                    "class": cat.member_class[k],
                    "certificate": cat.certificate(k)?,
                }));
            }
            r.data = json!({
                "poset": poset,
                "l": 1,
                "kind": "cminimal",
                "count": cat.members.len(),
                "classes": cat.classes.iter().map(|c| json!({
                    "representative": c.representative.decode(),
                    "size": c.representative.len(),
                    "members": c.members,
                    "is_m_of": c.is_m_of,
                })).collect::<Vec<_>>(),
                "members": members,
            });
        }
    }
    Ok(r)
}

fn classify(poset: &Poset, budget: &Budget) -> anyhow::Result<Report> {
    let cat = enumerate_cminimal(poset, budget)?;
    let theorems = verify_theorems(poset, budget)?;
    let preds = poset.structural_predicates();
    let m = m_of(poset);
    let mut pass = theorems.pass();
    let counterexample = if preds.is_depth1_coforest {
        None
    } else {
        let c = counterexample_construct(poset)?;
        let cmin = essalg::classify::is_cminimal(&c.set);
        let star = property_star(&c.set);
        let iso_m = essalg::classify::nonindexed_isomorphic(&c.set, &m)?.is_some();
        pass &= cmin && !star && !iso_m;
        Some(json!({
            "i": c.i + 1, "j": c.j + 1, "k": c.k + 1, "case": c.case,
            "set": c.set.decode(), "cminimal": cmin, "property_star": star, "isomorphic_to_m": iso_m,
        }))
    };
    let mut r = Report::new(pass);
    r.line(format!("poset: n = {}, strict pairs {:?}", poset.len(), poset.to_file().pairs));
    r.line(format!(
        "shape: chain {}, discrete {}, depth-1 co-forest {}",
        preds.is_chain, preds.is_discrete, preds.is_depth1_coforest
    ));
    r.line(format!("M(P): {} elements", m.len()));
    r.line(format!("classes: {}", cat.classes.len()));
    for (c, class) in cat.classes.iter().enumerate() {
        r.line(format!(
            "  class {c}: {} elements, {} members, property (*) {}: {:?}",
            class.representative.len(),
            class.members,
            property_star(&class.representative),
            class.representative.decode()
        ));
    }
    let verdict = |b: bool| if b { "holds" } else { "FAILS" };
    r.line(format!("cardinality |P|+1 <=> chain: {}", verdict(theorems.cardinality.holds())));
    r.line(format!("E_P c-minimal <=> discrete: {}", verdict(theorems.full_algebra.holds())));
    r.line(format!("unique class <=> depth-1 co-forest: {}", verdict(theorems.uniqueness.holds())));
    if let Some(c) = &counterexample {
        r.line(format!("counterexample: {c}"));
    }
    r.data = json!({
        "poset": poset,
        "predicates": preds,
        "m_of": m.decode(),
        "classes": cat.classes.iter().map(|c| json!({
            "representative": c.representative.decode(),
            "size": c.representative.len(),
            "members": c.members,
            "is_m_of": c.is_m_of,
            "property_star": property_star(&c.representative),
        })).collect::<Vec<_>>(),
        "theorems": theorems,
        "counterexample": counterexample,
    });
    Ok(r)
}

fn run(cli: &Cli) -> anyhow::Result<Report> {
    let budget = cli.budget();
    let pool = rayon::ThreadPoolBuilder::new().num_threads(cli.threads.unwrap_or(0) as usize).build()?;
    match &cli.command {
        Command::Build { poset } => build(&read_poset(poset)?, &budget),
        Command::Enum { poset, l, kind } => {
            if *l == 0 || *l > cli.max_l {
                bail!("--l {l} is outside 1..={}", cli.max_l);
            }
            enumerate(&read_poset(poset)?, *l, *kind, &budget)
        }
        Command::Classify { poset } => classify(&read_poset(poset)?, &budget),
        Command::Verify { scope, bound } => {
            if *bound > budget.max_n {
                bail!("bound {bound} exceeds the poset size budget {}", budget.max_n);
            }
            pool.install(|| verify::run(*scope, *bound, &budget))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(report) => {
            match cli.format {
                Format::Text => report.print_text(),
                Format::Structured => report.print_structured(cli.config()),
            }
            if report.pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
