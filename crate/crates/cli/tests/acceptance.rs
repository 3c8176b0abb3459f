//! One pass/fail line per acceptance criterion. Runs without the libtest
//! harness so the lines always reach the output; exits nonzero if any fails.

use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use setmap_core::bounds::{
    compare, compare_symbolic, crossover, erdos_rado_upper, s_upper, star_chain, tower, ArrowFact, Cmp, TowerExpr,
};
use setmap_core::ramsey::{arrow_holds, verify_witness, ArrowOutcome};
use setmap_core::setmap::{generate, Carrier, GammaFamily, Rho};
use setmap_core::suites::{self, SuiteReport};
use setmap_core::ElemSet;

const SEED: u64 = 20_241_015;

struct Outcome {
    ok: bool,
    detail: String,
}

fn suite_line(reps: &[SuiteReport]) -> Outcome {
    let ok = reps.iter().all(|r| r.passed());
    let detail = reps
        .iter()
        .map(|r| {
            let mut s = format!("{}: {} trials, {} checks, {} violations", r.suite, r.trials, r.checks, r.violations);
            if let Some(v) = &r.first_violation {
                s += &format!(" (first: {v})");
            }
            s
        })
        .collect::<Vec<_>>()
        .join("; ");
    Outcome { ok, detail }
}

fn lemma_suites() -> Outcome {
    let reps = [
        suites::monotonicity_suite(SEED, 1000).expect("monotonicity suite runs"),
        suites::restriction_suite(SEED, 1000).expect("restriction suite runs"),
    ];
    let mut out = suite_line(&reps);
    out.ok &= reps.iter().all(|r| r.trials == 1000);
    out
}

fn n0_law() -> Outcome {
    let mut checks = 0u64;
    let mut bad = None;
    for m in 2..=10 {
        let gamma = GammaFamily::single(Rho::max_fn(Carrier::new(m).unwrap()));
        for k in 2..=m {
            for (t, img) in generate(&gamma, k).unwrap().iter() {
                checks += 1;
                let expect = ElemSet::range(0, t.max().unwrap() + 1).difference(t);
                if img != expect && bad.is_none() {
                    bad = Some(format!("m={m} k={k} {t:?}: {img:?}"));
                }
            }
        }
    }
    Outcome {
        ok: bad.is_none(),
        detail: format!("{checks} tuples over m <= 10{}", bad.map_or(String::new(), |b| format!(", first mismatch {b}"))),
    }
}

fn claim4() -> Outcome {
    let rep = suites::claim4_suite(SEED, 1000, 1_000_000).expect("claim4 suite runs");
    let mut out = suite_line(std::slice::from_ref(&rep));
    out.ok &= rep.trials == 1000;
    out.detail += &format!(", {} samples without a homogeneous 5-set", rep.skipped);
    out
}

fn claim3() -> Outcome {
    let rep = suites::claim3_suite(SEED, 2000).expect("claim3 suite runs");
    let mut out = suite_line(std::slice::from_ref(&rep));
    out.ok &= rep.trials > 0;
    out.detail += &format!(", {} families with no applicable quad", rep.skipped);
    out
}

fn conditions() -> Outcome {
    let reps = [
        suites::amalgamation_suite(SEED, 1000).expect("amalgamation suite runs"),
        suites::point_extension_suite(SEED, 1000).expect("extension suite runs"),
        suites::chain_suite(SEED, 200).expect("chain suite runs"),
    ];
    let mut out = suite_line(&reps);
    out.ok &= reps[0].trials == 1000 && reps[1].trials == 1000 && reps[2].trials == 200;
    out
}

fn arrows() -> Outcome {
    let budget = u64::MAX;
    let start = Instant::now();
    let six = matches!(arrow_holds(6, 2, &[3, 3], budget).unwrap(), ArrowOutcome::Holds { .. });
    let five = match arrow_holds(5, 2, &[3, 3], budget).unwrap() {
        ArrowOutcome::Fails { witness, .. } => verify_witness(&witness),
        _ => false,
    };
    let small = start.elapsed();
    let (eight, nodes) = match arrow_holds(8, 3, &[4, 4], budget).unwrap() {
        ArrowOutcome::Fails { witness, nodes } => {
            let fact = ArrowFact::from_witness(&witness).unwrap();
            let assumed = ArrowFact::two_l_triples().instantiate(4).unwrap();
            let same = fact.n == assumed.n && fact.k == assumed.k && fact.targets == assumed.targets;
            (verify_witness(&witness) && same, nodes)
        }
        _ => (false, 0),
    };
    Outcome {
        ok: six && five && eight && small < Duration::from_secs(1),
        detail: format!(
            "6->(3,3)^2 {six}, 5-/->(3,3)^2 witness {five} in {:.3}s; 8-/->(4,4)^3 witness {eight} after {nodes} assignments",
            small.as_secs_f64()
        ),
    }
}

fn bounds() -> Outcome {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(SEED);
    let mut grouping_ok = 0u32;
    for _ in 0..10_000 {
        let len = rng.random_range(2..=5usize);
        let vals: Vec<TowerExpr> = (0..len).map(|_| TowerExpr::lit(rng.random_range(1..=6))).collect();
        let split = rng.random_range(1..len);
        let mut grouped = vals[..split].to_vec();
        if len - split >= 2 {
            grouped.push(star_chain(&vals[split..]).unwrap());
        } else {
            grouped.push(vals[split].clone());
        }
        let whole = star_chain(&vals).unwrap();
        let regrouped = star_chain(&grouped).unwrap();
        let agree = whole == regrouped && compare(&whole, &regrouped) != Cmp::Less && compare(&whole, &regrouped) != Cmp::Greater;
        grouping_ok += u32::from(agree);
    }
    let er = erdos_rado_upper(2, 3, &BigUint::from(2u8)).unwrap().eval() == Some(BigUint::from(8u8));
    let t27 = tower(2, &TowerExpr::lit(7)).unwrap().eval() == Some(BigUint::from(128u8));
    let lit = s_upper(0).unwrap().literal.eval();
    let exact = lit.as_ref() == Some(&BigUint::from(3u8).pow(2187)) && lit.map(|v| v.to_string().len()) == Some(1044);
    let big = TowerExpr::pow(TowerExpr::lit(3), TowerExpr::lit(2187));
    let small = TowerExpr::pow(TowerExpr::lit(2), TowerExpr::lit(128));
    let greater = compare(&big, &small) == Cmp::Greater;
    let table = crossover(8).unwrap();
    let mut contradictions = 0;
    let mut unknown = 0;
    let mut spot = 0;
    for r in &table.rows {
        for (s, v) in [(&r.s_literal, r.vs_literal), (&r.s_erdos_rado, r.vs_erdos_rado)] {
            unknown += usize::from(v == Cmp::Unknown);
            if compare(s, &r.t_lower) != v.reverse() {
                contradictions += 1;
            }
            if let (Some(a), Some(b)) = (r.t_lower.eval(), s.eval()) {
                spot += 1;
                if Cmp::from(a.cmp(&b)) != v {
                    contradictions += 1;
                }
            }
        }
    }
    // Chain-shaped pairs small enough to evaluate exactly: the symbolic
    // comparator must agree whenever it commits.
    for _ in 0..2000 {
        let mut side = || {
            let len = rng.random_range(2..=3usize);
            let vals: Vec<TowerExpr> = (0..len).map(|_| TowerExpr::lit(rng.random_range(2..=9))).collect();
            let e = star_chain(&vals).unwrap();
            let scaled = TowerExpr::mul(vec![e, TowerExpr::lit(rng.random_range(1..=4))]);
            TowerExpr::add(vec![scaled, TowerExpr::lit(rng.random_range(0..=3))]).normalize()
        };
        let (x, y) = (side(), side());
        if let (Some(a), Some(b)) = (x.eval_capped(20_000), y.eval_capped(20_000)) {
            spot += 1;
            let sym = compare_symbolic(&x, &y);
            if sym != Cmp::Unknown && sym != Cmp::from(a.cmp(&b)) {
                contradictions += 1;
            }
        }
    }
    let monotone = table.rows.windows(2).all(|w| w[0].vs_literal != Cmp::Greater || w[1].vs_literal == Cmp::Greater);
    Outcome {
        ok: grouping_ok == 10_000 && er && t27 && exact && greater && contradictions == 0 && monotone,
        detail: format!(
            "grouping {grouping_ok}/10000, er(2,3,2)=8 {er}, tower(2,7)=128 {t27}, 3^2187 exact {exact}, 3^2187 > 2^128 {greater}, \
             crossover n={:?}/{:?} with {unknown} unknown, {spot} spot checks, {contradictions} contradictions",
            table.first_literal, table.first_erdos_rado
        ),
    }
}

fn run_cli(args: &[&str]) -> (Vec<u8>, i32) {
    let out = Command::new(env!("CARGO_BIN_EXE_setmap")).args(args).output().expect("binary runs");
    (out.stdout, out.status.code().unwrap_or(-1))
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

fn determinism() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let (gen, _) = run_cli(&["gen", "--random", "9", "--seed", "3", "--k", "3", "--ranges", "2,3", "--with-max", "--json"]);
    let doc: serde_json::Value = serde_json::from_slice(&gen).unwrap();
    let inst = write(dir.path(), "inst.json", &doc["result"]["instance"].to_string());
    let empty = write(dir.path(), "c0.json", r#"{"support":[],"rho":[]}"#);
    let c1 = write(dir.path(), "c1.json", r#"{"support":[0,1,2],"rho":[[0,1,0],[0,2,1],[1,2,0]]}"#);
    let c2 = write(dir.path(), "c2.json", r#"{"support":[1,2,5],"rho":[[1,2,0],[1,5,3],[2,5,2]]}"#);
    let runs: Vec<Vec<&str>> = vec![
        vec!["gen", "--random", "9", "--seed", "3", "--k", "3", "--json"],
        vec!["gen", "--instance", &inst, "--json"],
        vec!["free", "--instance", &inst, "--json"],
        vec!["explore", "--target", "5", "--cap", "4", "--seed", "11", "--budget", "30", "--trials", "3", "--k", "3", "--with-max", "--json"],
        vec!["homog", "--instance", &inst, "--json"],
        vec!["verify", "claim4", "--seed", "5", "--trials", "20", "--json"],
        vec!["verify", "claim4", "--instance", &inst, "--json"],
        vec!["verify", "claim3", "--seed", "5", "--trials", "50", "--json"],
        vec!["verify", "claim3", "--instance", &inst, "--json"],
        vec!["verify", "lemma23", "--seed", "5", "--trials", "50", "--json"],
        vec!["verify", "lemma24", "--instance", &inst, "--json"],
        vec!["verify", "clubsuit", "--instance", &inst, "--json"],
        vec!["arrow", "5", "2", "--targets", "3,3", "--json"],
        vec!["arrow", "6", "2", "--targets", "3,3", "--json"],
        vec!["bounds", "s-upper", "0", "--json"],
        vec!["bounds", "t-lower", "3", "--json"],
        vec!["bounds", "er", "2", "3", "2", "--json"],
        vec!["bounds", "crossover", "--max-n", "8", "--json"],
        vec!["bounds", "step-up", "--l", "4", "--json"],
        vec!["cond", "extend", &empty, "--point", "4", "--instance", &inst, "--json"],
        vec!["cond", "amalg", &c1, &c2, "--instance", &inst, "--json"],
        vec!["cond", "chain", &empty, &c1, "--instance", &inst, "--json"],
    ];
    let mut failures = Vec::new();
    for args in &runs {
        let (a, ca) = run_cli(args);
        let (b, cb) = run_cli(args);
        let parses = serde_json::Deserializer::from_slice(&a)
            .into_iter::<serde_json::Value>()
            .all(|v| v.is_ok_and(|v| v.get("result").is_some()));
        if a != b || ca != cb || ca != 0 || a.is_empty() || !parses {
            failures.push(format!("{} (exit {ca})", args[..2].join(" ")));
        }
    }
    Outcome {
        ok: failures.is_empty(),
        detail: format!("{} invocations run twice, {} differ or fail {:?}", runs.len(), failures.len(), failures),
    }
}

type Criterion = (&'static str, fn() -> Outcome, Duration);

fn main() {
    let criteria: [Criterion; 8] = [
        ("1 monotonicity and restriction suites", lemma_suites, Duration::from_secs(30)),
        ("2 max-function law", n0_law, Duration::from_secs(5)),
        ("3 homogeneous 5-sets and free sets", claim4, Duration::from_secs(120)),
        ("4 quad claim, exhaustive", claim3, Duration::from_secs(120)),
        ("5 forcing-condition suites", conditions, Duration::from_secs(60)),
        ("6 arrow facts", arrows, Duration::from_secs(600)),
        ("7 bounds arithmetic", bounds, Duration::from_secs(30)),
        ("8 determinism", determinism, Duration::from_secs(600)),
    ];
    let mut failed = 0;
    for (name, f, limit) in criteria {
        let start = Instant::now();
        let out = f();
        let took = start.elapsed();
        let ok = out.ok && took <= limit;
        failed += usize::from(!ok);
        println!(
            "[{}] criterion {name}: {:.2}s (limit {}s); {}",
            if ok { "PASS" } else { "FAIL" },
            took.as_secs_f64(),
            limit.as_secs(),
            out.detail
        );
    }
    println!("acceptance: {} of 8 criteria passed", 8 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
