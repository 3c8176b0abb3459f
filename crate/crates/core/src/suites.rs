//! Seeded randomized harnesses over the executable lemmas and claims. Each
//! trial draws from its own generator keyed by `seed + trial`, so a failing
//! trial can be replayed alone.

use rand::Rng;
use serde::Serialize;

use crate::bits::{k_subsets, KSubsets};
use crate::conditions::{
    amalgamate, chain_union, extend_with_point, extends, random_compatible_pair, Background, Condition,
};
use crate::error::Result;
use crate::freeset::max_free_set;
use crate::ramsey::{claim3_applies, find_homogeneous, is_type_homogeneous, verify_claim_3, verify_claim_4};
use crate::random::{random_family, random_rho, rng_from_seed, SeededRng};
use crate::setmap::{
    check_monotonicity, check_restriction_eq, generated_image, restrict, Carrier, GammaFamily, Rho,
};
use crate::ElemSet;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub suite: &'static str,
    pub seed: u64,
    /// Trials whose hypotheses held and were checked.
    pub trials: u64,
    /// Samples discarded because a hypothesis failed.
    pub skipped: u64,
    /// Individual conclusions checked across all trials.
    pub checks: u64,
    pub violations: u64,
    pub first_violation: Option<String>,
}

impl SuiteReport {
    fn new(suite: &'static str, seed: u64) -> Self {
        SuiteReport {
            suite,
            seed,
            trials: 0,
            skipped: 0,
            checks: 0,
            violations: 0,
            first_violation: None,
        }
    }

    fn record(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.violations += 1;
            if self.first_violation.is_none() {
                self.first_violation = Some(what());
            }
        }
    }

    pub fn passed(&self) -> bool {
        self.violations == 0
    }
}

fn trial_rng(seed: u64, trial: u64) -> SeededRng {
    rng_from_seed(seed.wrapping_add(trial))
}

/// `m ≤ 10`, `1..=3` pair functions with ranges `1..=5`.
fn small_family(rng: &mut SeededRng, m: usize) -> GammaFamily {
    let n = rng.random_range(1..=3usize);
    let ranges: Vec<u32> = (0..n).map(|_| rng.random_range(1..=5)).collect();
    random_family(rng, Carrier::new(m).expect("small carrier"), &ranges, false)
}

fn random_subset(rng: &mut SeededRng, m: usize, min: usize) -> ElemSet {
    loop {
        let s: ElemSet = (0..m).filter(|_| rng.random_bool(0.6)).collect();
        if s.len() >= min {
            return s;
        }
    }
}

/// Monotonicity: `Γ₂|_{A₁} ⊆ Γ₁` gives `F₁(γ̄) ⊆ F₂(γ̄)`. `Γ₁` is the
/// restriction plus up to `3 − |Γ₂|` extra random pair functions.
pub fn monotonicity_suite(seed: u64, trials: u64) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("monotonicity", seed);
    for t in 0..trials {
        let mut rng = trial_rng(seed, t);
        let m = rng.random_range(2..=10usize);
        let k = rng.random_range(2..=4usize);
        let gamma2 = small_family(&mut rng, m);
        let a1 = random_subset(&mut rng, m, 2);
        let mut gamma1 = restrict(&gamma2, a1)?.family;
        for _ in 0..rng.random_range(0..=3 - gamma2.len()) {
            let range = rng.random_range(1..=5);
            gamma1 = gamma1.with(random_rho(&mut rng, gamma1.carrier(), range))?;
        }
        let v = check_monotonicity(&gamma1, &gamma2, a1, k)?;
        rep.trials += 1;
        rep.record(v.holds(), || format!("trial {t}: {v:?}"));
    }
    Ok(rep)
}

/// Restriction: `Γ₂|_{A₁} = Γ₁` gives `F₁(γ̄) = F₂(γ̄) ∩ A₁`.
pub fn restriction_suite(seed: u64, trials: u64) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("restriction", seed);
    for t in 0..trials {
        let mut rng = trial_rng(seed, t);
        let m = rng.random_range(2..=10usize);
        let k = rng.random_range(2..=4usize);
        let gamma2 = small_family(&mut rng, m);
        let a1 = random_subset(&mut rng, m, 2);
        let gamma1 = restrict(&gamma2, a1)?.family;
        let v = check_restriction_eq(&gamma1, &gamma2, a1, k)?;
        rep.trials += 1;
        rep.record(v.holds(), || format!("trial {t}: {v:?}"));
    }
    Ok(rep)
}

/// Draws families for `k = 4` until `trials` of them contain a
/// type-homogeneous 5-set. For each, every homogeneous 5-set is checked
/// against the closeness claim, and the maximum free set found within
/// `search_budget` nodes is checked to contain none of them.
pub fn claim4_suite(seed: u64, trials: u64, search_budget: u64) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("claim4", seed);
    let mut sample = 0u64;
    while rep.trials < trials {
        let mut rng = trial_rng(seed, sample);
        sample += 1;
        let m = rng.random_range(7..=11usize);
        let n = rng.random_range(1..=2usize);
        let ranges: Vec<u32> = (0..n).map(|_| rng.random_range(2..=3)).collect();
        let with_max = rng.random_bool(0.5);
        let gamma = random_family(&mut rng, Carrier::new(m)?, &ranges, with_max);
        let full = gamma.carrier().elements();
        if find_homogeneous(&gamma, full, 5)?.is_none() {
            rep.skipped += 1;
            continue;
        }
        rep.trials += 1;
        for b in k_subsets(m, 5).filter(|&b| is_type_homogeneous(&gamma, b)) {
            let v = verify_claim_4(&gamma, b)?;
            rep.record(v.holds(), || format!("sample {}: {b:?}: {v:?}", sample - 1));
        }
        let free = max_free_set(&gamma, 4, search_budget)?;
        let bad = KSubsets::of(free.witness, 5).find(|&b| is_type_homogeneous(&gamma, b));
        rep.record(bad.is_none(), || {
            format!("sample {}: free set {:?} contains {bad:?}", sample - 1, free.witness)
        });
    }
    Ok(rep)
}

/// Every pair function on `m` points with values in `0..range`, in
/// lexicographic order of the pair table.
fn all_rhos(m: usize, range: u32) -> Vec<Rho> {
    let c = Carrier::new(m).expect("small carrier");
    let pairs = c.num_pairs();
    let count = (range as u64).pow(pairs as u32);
    (0..count)
        .map(|mut code| {
            let table = (0..pairs)
                .map(|_| {
                    let v = (code % range as u64) as u32;
                    code /= range as u64;
                    v
                })
                .collect();
            Rho::from_table(c, range, table).expect("values are in range")
        })
        .collect()
}

fn claim3_family(rep: &mut SuiteReport, gamma: &GammaFamily, label: impl Fn() -> String) -> Result<()> {
    let m = gamma.carrier().size();
    let mut applied = false;
    for q in k_subsets(m, 4) {
        let v = q.to_vec();
        let quad = [v[0], v[1], v[2], v[3]];
        if !gamma.rhos().iter().all(|r| claim3_applies(r, quad)) {
            continue;
        }
        applied = true;
        let verdict = verify_claim_3(gamma, q)?;
        let inside = generated_image(gamma, q.without(v[1]))?.contains(v[1]);
        rep.record(verdict.holds() && inside, || format!("{}, quad {q:?}: {verdict:?}", label()));
    }
    if applied {
        rep.trials += 1;
    } else {
        rep.skipped += 1;
    }
    Ok(())
}

/// The quad claim for families of at most two pair functions with values
/// below 3. Its verdict on a quad reads only the six values on that quad, so
/// all such families on 4 points (unordered pairs of tables included) cover
/// every quad of every such family on any carrier. On top of that: every
/// single table on 5 points, every 0/1 table on 6 points, and `random`
/// seeded families on 7 points.
pub fn claim3_suite(seed: u64, random: u64) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("claim3", seed);
    let four = all_rhos(4, 3);
    for (i, a) in four.iter().enumerate() {
        claim3_family(&mut rep, &GammaFamily::single(a.clone()), || format!("table {i}"))?;
        for (j, b) in four.iter().enumerate().skip(i + 1) {
            let gamma = GammaFamily::new(vec![a.clone(), b.clone()])?;
            claim3_family(&mut rep, &gamma, || format!("tables {i},{j}"))?;
        }
    }
    for (i, r) in all_rhos(5, 3).into_iter().enumerate() {
        claim3_family(&mut rep, &GammaFamily::single(r), || format!("5-point table {i}"))?;
    }
    for (i, r) in all_rhos(6, 2).into_iter().enumerate() {
        claim3_family(&mut rep, &GammaFamily::single(r), || format!("6-point table {i}"))?;
    }
    for t in 0..random {
        let mut rng = trial_rng(seed, t);
        let n = rng.random_range(1..=2usize);
        let ranges: Vec<u32> = (0..n).map(|_| rng.random_range(1..=3)).collect();
        let gamma = random_family(&mut rng, Carrier::new(7)?, &ranges, false);
        claim3_family(&mut rep, &gamma, || format!("7-point trial {t}"))?;
    }
    Ok(rep)
}

fn condition_background(rng: &mut SeededRng) -> Result<std::sync::Arc<Background>> {
    let m = rng.random_range(3..=12usize);
    let k = rng.random_range(2..=3usize.min(m));
    let gamma = small_family(rng, m);
    Background::new(gamma, k)
}

/// Amalgamating a compatible pair extends both inputs.
pub fn amalgamation_suite(seed: u64, trials: u64) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("amalgamation", seed);
    for t in 0..trials {
        let mut rng = trial_rng(seed, t);
        let bg = condition_background(&mut rng)?;
        let low = rng.random_range(1..=4);
        let (pi, pj) = random_compatible_pair(&mut rng, &bg, low)?;
        let q = amalgamate(&pi, &pj)?;
        rep.trials += 1;
        let ok = q.is_coherent() && extends(&q, &pi)? && extends(&q, &pj)?;
        rep.record(ok, || format!("trial {t}"));
    }
    Ok(rep)
}

/// Adding a point to a random condition keeps it out of every old image.
/// Conditions already covering the carrier are redrawn.
pub fn point_extension_suite(seed: u64, trials: u64) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("point_extension", seed);
    let mut t = 0u64;
    while rep.trials < trials {
        let mut rng = trial_rng(seed, t);
        t += 1;
        let bg = condition_background(&mut rng)?;
        let (p, _) = random_compatible_pair(&mut rng, &bg, 3)?;
        let outside = bg.carrier().elements().difference(p.support()).to_vec();
        if outside.is_empty() {
            rep.skipped += 1;
            continue;
        }
        let alpha = outside[rng.random_range(0..outside.len())];
        let q = extend_with_point(&p, alpha)?;
        rep.trials += 1;
        let ok = extends(&q, &p)? && p.images().all(|(_, img)| !img.contains(alpha));
        rep.record(ok, || format!("sample {}: point {alpha}", t - 1));
    }
    Ok(rep)
}

/// Chains built by random point extensions and amalgamations; the union
/// extends every member.
pub fn chain_suite(seed: u64, trials: u64) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("chain", seed);
    for t in 0..trials {
        let mut rng = trial_rng(seed, t);
        let bg = condition_background(&mut rng)?;
        let m = bg.carrier().size();
        let mut chain = vec![Condition::empty(&bg)];
        let mut order: Vec<usize> = (0..m).collect();
        for i in (1..m).rev() {
            order.swap(i, rng.random_range(0..=i));
        }
        for alpha in order {
            let prev = chain.last().expect("nonempty chain");
            chain.push(extend_with_point(prev, alpha)?);
        }
        let u = chain_union(&chain)?;
        rep.trials += 1;
        let mut ok = u.is_coherent();
        for c in &chain {
            ok &= extends(&u, c)?;
        }
        rep.record(ok, || format!("trial {t}"));
    }
    Ok(rep)
}
