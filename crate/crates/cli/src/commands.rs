use std::fmt::Write as _;
use std::path::Path;
use std::sync::Arc;

use num_bigint::BigUint;
use serde::Serialize;
use serde_json::{json, Value};
use setmap_core::bits::{k_subsets, KSubsets};
use setmap_core::bounds::{
    crossover, erdos_rado_upper, s_upper, t_lower, two_l_stepped, ArrowFact, TowerExpr,
};
use setmap_core::conditions::{amalgamate, chain_union, extend_with_point, Background, Condition, ConditionDoc};
use setmap_core::freeset::{explore_no_free_t, max_free_set, ExploreParams, ProfileFilter};
use setmap_core::io::{mapping_records, parse_instance, InstanceDoc};
use setmap_core::ramsey::{
    arrow_holds, claim3_applies, find_homogeneous, type_classes, type_color, verify_claim_3,
    verify_claim_4, ArrowOutcome,
};
use setmap_core::random::{random_family, rng_from_seed};
use setmap_core::setmap::{
    check_clubsuit, check_monotonicity, check_restriction_eq, generate, restrict, Carrier, GammaFamily,
};
use setmap_core::suites::{self, SuiteReport};
use setmap_core::{ElemSet, Error};

use crate::{
    ArrowArgs, BackgroundArgs, BoundsCmd, Command, CondOp, ExploreArgs, FreeArgs, GenArgs, HomogArgs,
    Profile, VerifyArgs, VerifyCmd,
};

#[derive(Debug)]
pub enum CliError {
    Core(Error),
    Io(String),
    Usage(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

impl CliError {
    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Core(Error::Domain(_)) => "domain",
            CliError::Core(Error::Precondition(_)) => "precondition",
            CliError::Core(Error::Schema(_)) => "schema",
            CliError::Core(Error::Incompatible(_)) => "incompatible",
            CliError::Core(Error::Invariant(_)) => "invariant",
            CliError::Io(_) => "io",
            CliError::Usage(_) => "usage",
        }
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(Error::Invariant(_)) => 3,
            _ => 1,
        }
    }
}

type Result<T> = std::result::Result<T, CliError>;

pub enum Status {
    Ok,
    Infeasible,
    Violated,
}

pub struct Report {
    pub seed: Option<u64>,
    pub result: Value,
    /// `result` is an array emitted one element per line.
    pub lines: bool,
    pub table: String,
    pub status: Status,
}

impl Report {
    fn new(result: impl Serialize, table: String) -> Report {
        Report {
            seed: None,
            result: serde_json::to_value(result).expect("results serialize"),
            lines: false,
            table,
            status: Status::Ok,
        }
    }

    fn seeded(mut self, seed: Option<u64>) -> Report {
        self.seed = seed;
        self
    }

    fn status(mut self, status: Status) -> Report {
        self.status = status;
        self
    }
}

pub fn name(cmd: &Command) -> String {
    match cmd {
        Command::Gen(_) => "gen".into(),
        Command::Free(_) => "free".into(),
        Command::Explore(_) => "explore".into(),
        Command::Homog(_) => "homog".into(),
        Command::Arrow(_) => "arrow".into(),
        Command::Verify { check } => format!(
            "verify {}",
            match check {
                VerifyCmd::Claim4(_) => "claim4",
                VerifyCmd::Claim3(_) => "claim3",
                VerifyCmd::Lemma23(_) => "lemma23",
                VerifyCmd::Lemma24(_) => "lemma24",
                VerifyCmd::Clubsuit(_) => "clubsuit",
            }
        ),
        Command::Bounds { which } => format!(
            "bounds {}",
            match which {
                BoundsCmd::SUpper { .. } => "s-upper",
                BoundsCmd::TLower { .. } => "t-lower",
                BoundsCmd::Er { .. } => "er",
                BoundsCmd::Crossover { .. } => "crossover",
                BoundsCmd::StepUp { .. } => "step-up",
            }
        ),
        Command::Cond { op } => format!(
            "cond {}",
            match op {
                CondOp::Amalg { .. } => "amalg",
                CondOp::Extend { .. } => "extend",
                CondOp::Chain { .. } => "chain",
            }
        ),
    }
}

pub fn run(cmd: &Command) -> Result<Report> {
    match cmd {
        Command::Gen(a) => gen(a),
        Command::Free(a) => free(a),
        Command::Explore(a) => explore(a),
        Command::Homog(a) => homog(a),
        Command::Verify { check } => verify(check),
        Command::Arrow(a) => arrow(a),
        Command::Bounds { which } => bounds(which),
        Command::Cond { op } => cond(op),
    }
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn load_instance(path: &Path, k: Option<usize>) -> Result<(GammaFamily, usize)> {
    let (gamma, own_k) = parse_instance(&read(path)?)?;
    Ok((gamma, k.unwrap_or(own_k)))
}

fn set_str(s: ElemSet) -> String {
    let items: Vec<String> = s.iter().map(|x| x.to_string()).collect();
    format!("{{{}}}", items.join(","))
}

fn gen(a: &GenArgs) -> Result<Report> {
    let (gamma, k) = match (&a.instance, a.random) {
        (Some(path), None) => load_instance(path, a.k)?,
        (None, Some(m)) => {
            let seed = a.seed.ok_or_else(|| CliError::Usage("--random needs --seed".into()))?;
            let k = a.k.ok_or_else(|| CliError::Usage("--random needs --k".into()))?;
            if a.ranges.contains(&0) {
                return Err(CliError::Usage("ranges must be positive".into()));
            }
            let gamma = random_family(&mut rng_from_seed(seed), Carrier::new(m)?, &a.ranges, a.with_max);
            (gamma, k)
        }
        _ => return Err(CliError::Usage("give exactly one of --instance or --random".into())),
    };
    let f = generate(&gamma, k)?;
    let mut table = String::new();
    for (t, img) in f.iter() {
        let _ = writeln!(table, "{} -> {}", set_str(t), set_str(img));
    }
    let result = json!({
        "instance": InstanceDoc::from_family(&gamma, k),
        "mapping": mapping_records(&f),
    });
    Ok(Report::new(result, table).seeded(a.seed))
}

fn free(a: &FreeArgs) -> Result<Report> {
    let (gamma, k) = load_instance(&a.instance, a.k)?;
    let r = max_free_set(&gamma, k, a.budget)?;
    let table = format!(
        "carrier {} k {}: max free set {} of size {} ({}; {} nodes)\n",
        gamma.carrier().size(),
        k,
        set_str(r.witness),
        r.max_size,
        if r.exhausted { "optimal" } else { "budget exhausted, lower bound only" },
        r.nodes_explored
    );
    let status = if r.exhausted { Status::Ok } else { Status::Infeasible };
    let result = json!({ "carrier": gamma.carrier().size(), "k": k, "search": r });
    Ok(Report::new(result, table).status(status))
}

fn explore(a: &ExploreArgs) -> Result<Report> {
    let profile = match a.profile {
        Profile::None => ProfileFilter::None,
        Profile::InsideMiddleGap => ProfileFilter::InsideMiddleGap,
        Profile::AvoidsMiddleGap => ProfileFilter::AvoidsMiddleGap,
    };
    let mut records = Vec::new();
    let mut table = String::new();
    for i in 0..a.trials {
        let params = ExploreParams {
            carrier: a.carrier,
            k: a.k,
            ranges: a.ranges.clone(),
            with_max: a.with_max,
            cap: a.cap,
            target: a.target,
            profile,
            seed: a.seed.wrapping_add(i),
            budget: a.budget,
            search_budget: a.search_budget,
        };
        let rec = explore_no_free_t(&params)?;
        let _ = writeln!(
            table,
            "seed {}: sampled {} accepted {} undecided {} counterexample {} free sizes {}..{}",
            rec.seed,
            rec.sampled,
            rec.accepted,
            rec.undecided,
            rec.found_counterexample,
            rec.min_free_observed.map_or("-".into(), |v| v.to_string()),
            rec.max_free_observed
        );
        records.push(rec);
    }
    let mut rep = Report::new(records, table).seeded(Some(a.seed));
    rep.lines = true;
    Ok(rep)
}

fn homog(a: &HomogArgs) -> Result<Report> {
    let (gamma, _) = load_instance(&a.instance, None)?;
    let full = gamma.carrier().elements();
    let classes = type_classes(&gamma, full)?;
    let found = find_homogeneous(&gamma, full, a.size)?;
    let vector = match found {
        Some(b) if b.len() >= 3 => Some(type_color(&gamma, KSubsets::of(b, 3).next().expect("a triple"))?),
        _ => None,
    };
    let table = format!(
        "{} type classes on {} points; least homogeneous {}-set: {}\n",
        classes.len(),
        gamma.carrier().size(),
        a.size,
        found.map_or("none".into(), set_str)
    );
    let result = json!({
        "carrier": gamma.carrier().size(),
        "type_classes": classes.len(),
        "size": a.size,
        "homogeneous": found,
        "type_vector": vector,
    });
    Ok(Report::new(result, table))
}

#[derive(Serialize)]
struct InstanceCheck<T: Serialize> {
    checked: u64,
    violations: u64,
    items: Vec<T>,
}

fn suite_report(rep: SuiteReport) -> Report {
    let table = format!(
        "{} seed {}: {} trials, {} skipped, {} checks, {} violations\n",
        rep.suite, rep.seed, rep.trials, rep.skipped, rep.checks, rep.violations
    );
    let status = if rep.passed() { Status::Ok } else { Status::Violated };
    let seed = rep.seed;
    Report::new(rep, table).seeded(Some(seed)).status(status)
}

fn instance_report<T: Serialize>(what: &str, checks: Vec<(T, bool)>) -> Report {
    let violations = checks.iter().filter(|(_, ok)| !ok).count() as u64;
    let table = format!("{what}: {} checks, {violations} violations\n", checks.len());
    let result = InstanceCheck {
        checked: checks.len() as u64,
        violations,
        items: checks.into_iter().map(|(t, _)| t).collect(),
    };
    let status = if violations == 0 { Status::Ok } else { Status::Violated };
    Report::new(result, table).status(status)
}

fn quad_of(q: ElemSet) -> [usize; 4] {
    let v = q.to_vec();
    [v[0], v[1], v[2], v[3]]
}

/// Subsets of the carrier with at least two points; capped so the scan stays small.
fn subcarriers(m: usize) -> Result<impl Iterator<Item = ElemSet>> {
    if m > 16 {
        return Err(CliError::Usage(format!("instance checks scan all subsets; {m} points is too many")));
    }
    Ok((0u64..1 << m).map(ElemSet).filter(|s| s.len() >= 2))
}

fn verify(check: &VerifyCmd) -> Result<Report> {
    match check {
        VerifyCmd::Claim4(a) => match suite_or_instance(a)? {
            Mode::Suite(seed) => Ok(suite_report(suites::claim4_suite(seed, a.trials, a.budget)?)),
            Mode::Instance(gamma, _) => {
                let m = gamma.carrier().size();
                let mut checks = Vec::new();
                for b in k_subsets(m, 5).filter(|&b| setmap_core::ramsey::is_type_homogeneous(&gamma, b)) {
                    let v = verify_claim_4(&gamma, b)?;
                    let ok = v.holds();
                    checks.push((json!({ "set": b, "result": v }), ok));
                }
                Ok(instance_report("claim4", checks))
            }
        },
        VerifyCmd::Claim3(a) => match suite_or_instance(a)? {
            Mode::Suite(seed) => Ok(suite_report(suites::claim3_suite(seed, a.trials)?)),
            Mode::Instance(gamma, _) => {
                let m = gamma.carrier().size();
                let mut checks = Vec::new();
                for q in k_subsets(m, 4) {
                    if gamma.rhos().iter().all(|r| claim3_applies(r, quad_of(q))) {
                        let v = verify_claim_3(&gamma, q)?;
                        let ok = v.holds();
                        checks.push((json!({ "quad": q, "result": v }), ok));
                    }
                }
                Ok(instance_report("claim3", checks))
            }
        },
        VerifyCmd::Lemma23(a) => match suite_or_instance(a)? {
            Mode::Suite(seed) => Ok(suite_report(suites::monotonicity_suite(seed, a.trials)?)),
            Mode::Instance(gamma, k) => {
                let mut checks = Vec::new();
                for a1 in subcarriers(gamma.carrier().size())? {
                    let v = check_monotonicity(&restrict(&gamma, a1)?.family, &gamma, a1, k)?;
                    if !v.holds() {
                        checks.push((json!({ "subset": a1, "result": v }), false));
                    } else {
                        checks.push((Value::Null, true));
                    }
                }
                Ok(compact(instance_report("lemma23", checks)))
            }
        },
        VerifyCmd::Lemma24(a) => match suite_or_instance(a)? {
            Mode::Suite(seed) => Ok(suite_report(suites::restriction_suite(seed, a.trials)?)),
            Mode::Instance(gamma, k) => {
                let mut checks = Vec::new();
                for a1 in subcarriers(gamma.carrier().size())? {
                    let v = check_restriction_eq(&restrict(&gamma, a1)?.family, &gamma, a1, k)?;
                    if !v.holds() {
                        checks.push((json!({ "subset": a1, "result": v }), false));
                    } else {
                        checks.push((Value::Null, true));
                    }
                }
                Ok(compact(instance_report("lemma24", checks)))
            }
        },
        VerifyCmd::Clubsuit(a) => {
            let (gamma, _) = load_instance(&a.instance, None)?;
            let offset = a.offset;
            let per_rho: Vec<bool> = gamma
                .rhos()
                .iter()
                .map(|r| check_clubsuit(r, |nu| nu as usize + offset))
                .collect();
            let holds = per_rho.iter().all(|&b| b);
            let table = format!("club property with bound nu+{offset}: {per_rho:?}\n");
            Ok(Report::new(json!({ "offset": offset, "holds": holds, "per_rho": per_rho }), table))
        }
    }
}

/// Drops the placeholder entries of passing checks.
fn compact(mut rep: Report) -> Report {
    if let Some(Value::Array(items)) = rep.result.get_mut("items") {
        items.retain(|v| !v.is_null());
    }
    rep
}

enum Mode {
    Suite(u64),
    Instance(GammaFamily, usize),
}

fn suite_or_instance(a: &VerifyArgs) -> Result<Mode> {
    match (&a.instance, a.seed) {
        (Some(path), None) => {
            let (gamma, k) = load_instance(path, None)?;
            Ok(Mode::Instance(gamma, k))
        }
        (None, Some(seed)) => Ok(Mode::Suite(seed)),
        _ => Err(CliError::Usage("give exactly one of --instance or --seed".into())),
    }
}

fn arrow(a: &ArrowArgs) -> Result<Report> {
    let outcome = arrow_holds(a.n, a.k, &a.targets, a.budget)?;
    let targets: Vec<String> = a.targets.iter().map(|t| t.to_string()).collect();
    let relation = format!("{} -> ({})^{}", a.n, targets.join(","), a.k);
    let (verdict, nodes, witness, status) = match outcome {
        ArrowOutcome::Holds { nodes } => ("holds", nodes, None, Status::Ok),
        ArrowOutcome::Fails { witness, nodes } => ("fails", nodes, Some(witness), Status::Ok),
        ArrowOutcome::Infeasible { nodes } => ("infeasible", nodes, None, Status::Infeasible),
    };
    let table = format!("{relation}: {verdict} ({nodes} nodes)\n");
    let result = json!({
        "n": a.n,
        "k": a.k,
        "targets": a.targets,
        "verdict": verdict,
        "holds": match verdict { "holds" => Some(true), "fails" => Some(false), _ => None },
        "nodes": nodes,
        "witness": witness,
    });
    Ok(Report::new(result, table).status(status))
}

fn expr_doc(e: &TowerExpr) -> Value {
    let value = e.eval();
    json!({
        "expr": e,
        "display": e.to_string(),
        "digits": value.as_ref().map(|v| v.to_string().len()),
        "value": value.map(|v| v.to_string()),
    })
}

fn expr_line(label: &str, e: &TowerExpr) -> String {
    match e.eval() {
        Some(v) if v.to_string().len() <= 40 => format!("{label}: {e} = {v}\n"),
        Some(v) => format!("{label}: {e} ({} digits)\n", v.to_string().len()),
        None => format!("{label}: {e}\n"),
    }
}

fn bounds(which: &BoundsCmd) -> Result<Report> {
    match *which {
        BoundsCmd::SUpper { n } => {
            let s = s_upper(n)?;
            let table = expr_line("literal", &s.literal) + &expr_line("erdos-rado", &s.erdos_rado);
            let result = json!({ "n": n, "literal": expr_doc(&s.literal), "erdos_rado": expr_doc(&s.erdos_rado) });
            Ok(Report::new(result, table))
        }
        BoundsCmd::TLower { n } => {
            let t = t_lower(n)?;
            Ok(Report::new(json!({ "n": n, "t_lower": expr_doc(&t) }), expr_line("t_lower", &t)))
        }
        BoundsCmd::Er { k, l, r } => {
            let e = erdos_rado_upper(k, l, &BigUint::from(r))?;
            Ok(Report::new(json!({ "k": k, "l": l, "r": r, "bound": expr_doc(&e) }), expr_line("bound", &e)))
        }
        BoundsCmd::Crossover { max_n } => {
            let c = crossover(max_n)?;
            let mut table = String::from("n  vs literal  vs erdos-rado\n");
            for r in &c.rows {
                let _ = writeln!(table, "{}  {:?}  {:?}", r.n, r.vs_literal, r.vs_erdos_rado);
            }
            let _ = writeln!(table, "first n with Tower_n(7) above: literal {:?}, erdos-rado {:?}", c.first_literal, c.first_erdos_rado);
            Ok(Report::new(c, table))
        }
        BoundsCmd::StepUp { l } => {
            let fact = two_l_stepped();
            let inst: Option<ArrowFact> = l.map(|l| fact.instantiate(l)).transpose()?;
            let mut table = format!("{fact}\n");
            if let Some(f) = &inst {
                let _ = writeln!(table, "{f}");
            }
            Ok(Report::new(json!({ "fact": fact, "display": fact.to_string(), "instance": inst }), table))
        }
    }
}

fn background(a: &BackgroundArgs) -> Result<Arc<Background>> {
    let (gamma, k) = load_instance(&a.instance, a.k)?;
    Ok(Background::new(gamma, k)?)
}

fn load_condition(bg: &Arc<Background>, path: &Path) -> Result<Condition> {
    let doc: ConditionDoc = serde_json::from_str(&read(path)?)
        .map_err(|e| Error::Schema(format!("{}: {e}", path.display())))?;
    Ok(Condition::from_doc(bg, &doc)?)
}

fn condition_report(c: &Condition) -> Report {
    let table = format!(
        "support {} with {} pair values and {} images\n",
        set_str(c.support()),
        c.rho_values().count(),
        c.images().count()
    );
    Report::new(c.to_doc(), table)
}

fn cond(op: &CondOp) -> Result<Report> {
    match op {
        CondOp::Amalg { first, second, bg } => {
            let bg = background(bg)?;
            let (p, q) = (load_condition(&bg, first)?, load_condition(&bg, second)?);
            Ok(condition_report(&amalgamate(&p, &q)?))
        }
        CondOp::Extend { file, point, bg } => {
            let bg = background(bg)?;
            Ok(condition_report(&extend_with_point(&load_condition(&bg, file)?, *point)?))
        }
        CondOp::Chain { files, bg } => {
            let bg = background(bg)?;
            let chain = files.iter().map(|f| load_condition(&bg, f)).collect::<Result<Vec<_>>>()?;
            Ok(condition_report(&chain_union(&chain)?))
        }
    }
}
