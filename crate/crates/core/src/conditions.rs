//! Finite forcing conditions `⟨s, g, ϱ⟩` over a fixed background family:
//! the extension order, amalgamation, point extension and chain unions.
//!
//! `g` is always regenerated from `s` and `ϱ`; it is never read from input.

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::bits::{ElemSet, KSubsets};
use crate::error::{Error, Result};
use crate::io::MappingRecord;
use crate::setmap::{check_arity, generate, restrict, Carrier, GammaFamily, Rho};

/// The background family and arity shared by all conditions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Background {
    pub gamma: GammaFamily,
    pub k: usize,
}

impl Background {
    pub fn new(gamma: GammaFamily, k: usize) -> Result<Arc<Background>> {
        check_arity(gamma.carrier(), k)?;
        Ok(Arc::new(Background { gamma, k }))
    }

    pub fn carrier(&self) -> Carrier {
        self.gamma.carrier()
    }
}

type Pair = (usize, usize);

fn pair(x: usize, y: usize) -> Pair {
    (x.min(y), x.max(y))
}

#[derive(Debug, Clone)]
pub struct Condition {
    bg: Arc<Background>,
    support: ElemSet,
    rho: BTreeMap<Pair, u32>,
    g: BTreeMap<ElemSet, ElemSet>,
}

impl PartialEq for Condition {
    fn eq(&self, other: &Self) -> bool {
        same_background(&self.bg, &other.bg)
            && self.support == other.support
            && self.rho == other.rho
            && self.g == other.g
    }
}

fn same_background(a: &Arc<Background>, b: &Arc<Background>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

fn check_same(p: &Condition, q: &Condition) -> Result<()> {
    if same_background(&p.bg, &q.bg) {
        Ok(())
    } else {
        Err(Error::Precondition("conditions live over different backgrounds".into()))
    }
}

/// `{ρ₀|_s, …, ρₙ|_s, ϱ}` k-generates the returned table.
fn generate_on(bg: &Background, support: ElemSet, rho: &BTreeMap<Pair, u32>) -> Result<BTreeMap<ElemSet, ElemSet>> {
    if support.len() < bg.k || support.len() < 2 {
        return Ok(BTreeMap::new());
    }
    let restricted = restrict(&bg.gamma, support)?;
    let emb = &restricted.embedding;
    let range = rho.values().max().map_or(1, |m| m + 1);
    let local = Rho::from_fn(Carrier::new(emb.len())?, range, |i, j| rho[&pair(emb[i], emb[j])])?;
    let family = restricted.family.with(local)?;
    let f = generate(&family, bg.k)?;
    Ok(f.iter()
        .map(|(t, img)| (restricted.lift(t), restricted.lift(img)))
        .collect())
}

impl Condition {
    /// `ϱ` must assign exactly one value to every pair of `support`.
    pub fn new(bg: &Arc<Background>, support: ElemSet, rho: impl IntoIterator<Item = (usize, usize, u32)>) -> Result<Condition> {
        if !support.is_subset(bg.carrier().elements()) {
            return Err(Error::Domain(format!("support {support:?} leaves the carrier")));
        }
        let mut map = BTreeMap::new();
        for (x, y, v) in rho {
            if x == y || !support.contains(x) || !support.contains(y) {
                return Err(Error::Domain(format!("pair [{x},{y}] is not a pair of the support")));
            }
            if map.insert(pair(x, y), v).is_some() {
                return Err(Error::Domain(format!("pair {{{},{}}} is given twice", x.min(y), x.max(y))));
            }
        }
        if let Some(t) = KSubsets::of(support, 2).find(|t| {
            let v = t.to_vec();
            !map.contains_key(&(v[0], v[1]))
        }) {
            return Err(Error::Domain(format!("no value for the pair {t:?}")));
        }
        let g = generate_on(bg, support, &map)?;
        Ok(Condition { bg: Arc::clone(bg), support, rho: map, g })
    }

    /// The condition with empty support.
    pub fn empty(bg: &Arc<Background>) -> Condition {
        Condition::new(bg, ElemSet::EMPTY, []).expect("nothing to validate")
    }

    pub fn background(&self) -> &Arc<Background> {
        &self.bg
    }

    pub fn support(&self) -> ElemSet {
        self.support
    }

    pub fn rho(&self, x: usize, y: usize) -> Option<u32> {
        self.rho.get(&pair(x, y)).copied()
    }

    pub fn rho_values(&self) -> impl Iterator<Item = (usize, usize, u32)> + '_ {
        self.rho.iter().map(|(&(x, y), &v)| (x, y, v))
    }

    /// `g(γ̄)` for `γ̄ ∈ [s]^k`.
    pub fn image(&self, tuple: ElemSet) -> Option<ElemSet> {
        self.g.get(&tuple).copied()
    }

    pub fn images(&self) -> impl Iterator<Item = (ElemSet, ElemSet)> + '_ {
        self.g.iter().map(|(&t, &i)| (t, i))
    }

    fn max_value(&self) -> Option<u32> {
        self.rho.values().max().copied()
    }

    /// The stored table matches a fresh generation.
    pub fn is_coherent(&self) -> bool {
        generate_on(&self.bg, self.support, &self.rho).is_ok_and(|g| g == self.g)
    }

    pub fn to_doc(&self) -> ConditionDoc {
        ConditionDoc {
            support: self.support,
            rho: self.rho_values().collect(),
            g: Some(
                self.images()
                    .map(|(tuple, image)| MappingRecord { tuple, image })
                    .collect(),
            ),
        }
    }

    pub fn from_doc(bg: &Arc<Background>, doc: &ConditionDoc) -> Result<Condition> {
        Condition::new(bg, doc.support, doc.rho.iter().copied()).map_err(|e| Error::Schema(e.to_string()))
    }
}

/// `{"support": […], "rho": [[x, y, v], …]}`; a `g` field is written for
/// reading convenience and ignored on load.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConditionDoc {
    pub support: ElemSet,
    pub rho: Vec<(usize, usize, u32)>,
    #[serde(default, skip_deserializing, skip_serializing_if = "Option::is_none")]
    pub g: Option<Vec<MappingRecord>>,
}

/// `q ≤ p`: `s_q ⊇ s_p`, `g_q` agrees with `g_p` on `[s_p]^k`, and `ϱ_q`
/// agrees with `ϱ_p` on `[s_p]²`.
pub fn extends(q: &Condition, p: &Condition) -> Result<bool> {
    check_same(p, q)?;
    Ok(p.support.is_subset(q.support)
        && p.g.iter().all(|(t, img)| q.g.get(t) == Some(img))
        && p.rho.iter().all(|(pr, v)| q.rho.get(pr) == Some(v)))
}

fn verify_extends(q: &Condition, p: &Condition, what: &str) -> Result<()> {
    if cfg!(debug_assertions) && !(q.is_coherent() && extends(q, p)?) {
        return Err(Error::Invariant(format!("{what} does not extend its input")));
    }
    Ok(())
}

/// Joins two conditions that agree on their common part `a = s_i ∩ s_j`.
/// Cross pairs get one more than the largest value of either `ϱ` (0 when
/// both are empty).
pub fn amalgamate(pi: &Condition, pj: &Condition) -> Result<Condition> {
    check_same(pi, pj)?;
    let a = pi.support.intersection(pj.support);
    for t in KSubsets::of(a, 2) {
        let v = t.to_vec();
        let (x, y) = (v[0], v[1]);
        if pi.rho(x, y) != pj.rho(x, y) {
            return Err(Error::Incompatible(format!(
                "the local functions differ on {{{x},{y}}}: {:?} vs {:?}",
                pi.rho(x, y),
                pj.rho(x, y)
            )));
        }
    }
    for t in KSubsets::of(a, pi.bg.k) {
        if pi.image(t) != pj.image(t) {
            return Err(Error::Incompatible(format!(
                "the mappings differ on {t:?}: {:?} vs {:?}",
                pi.image(t),
                pj.image(t)
            )));
        }
    }
    let fresh = match (pi.max_value(), pj.max_value()) {
        (None, None) => 0,
        (x, y) => x.max(y).expect("one is present") + 1,
    };
    let support = pi.support.union(pj.support);
    let mut rho = pi.rho.clone();
    rho.extend(pj.rho.iter().map(|(&pr, &v)| (pr, v)));
    for t in KSubsets::of(support, 2) {
        let v = t.to_vec();
        rho.entry((v[0], v[1])).or_insert(fresh);
    }
    let g = generate_on(&pi.bg, support, &rho)?;
    let q = Condition { bg: Arc::clone(&pi.bg), support, rho, g };
    verify_extends(&q, pi, "the amalgamation")?;
    verify_extends(&q, pj, "the amalgamation")?;
    Ok(q)
}

/// Adds `alpha` to the support; its pairs get one more than the largest
/// existing value (0 when there is none), which keeps `alpha` out of every
/// old image.
pub fn extend_with_point(p: &Condition, alpha: usize) -> Result<Condition> {
    if !p.bg.carrier().contains(alpha) {
        return Err(Error::Domain(format!("{alpha} is outside the carrier")));
    }
    if p.support.contains(alpha) {
        return Err(Error::Domain(format!("{alpha} is already in the support")));
    }
    let fresh = p.max_value().map_or(0, |m| m + 1);
    let mut rho = p.rho.clone();
    for x in p.support.iter() {
        rho.insert(pair(x, alpha), fresh);
    }
    let support = p.support.with(alpha);
    let g = generate_on(&p.bg, support, &rho)?;
    let q = Condition { bg: Arc::clone(&p.bg), support, rho, g };
    verify_extends(&q, p, "the point extension")?;
    if cfg!(debug_assertions) {
        if let Some((t, _)) = p.g.keys().map(|&t| (t, q.g[&t])).find(|(_, img)| img.contains(alpha)) {
            return Err(Error::Invariant(format!("{alpha} entered the old image of {t:?}")));
        }
    }
    Ok(q)
}

/// The union of a chain in which every member extends its predecessor.
pub fn chain_union(chain: &[Condition]) -> Result<Condition> {
    let first = chain
        .first()
        .ok_or_else(|| Error::Precondition("the chain is empty".into()))?;
    for (i, w) in chain.windows(2).enumerate() {
        if !extends(&w[1], &w[0])? {
            return Err(Error::Precondition(format!(
                "chain[{}] does not extend chain[{i}]",
                i + 1
            )));
        }
    }
    let mut support = ElemSet::EMPTY;
    let mut rho = BTreeMap::new();
    let mut g = BTreeMap::new();
    for c in chain {
        support = support.union(c.support);
        rho.extend(c.rho.iter().map(|(&pr, &v)| (pr, v)));
        g.extend(c.g.iter().map(|(&t, &i)| (t, i)));
    }
    let u = Condition { bg: Arc::clone(&first.bg), support, rho, g };
    if !u.is_coherent() {
        return Err(Error::Invariant("the union table differs from fresh generation".into()));
    }
    for c in chain {
        verify_extends(&u, c, "the chain union")?;
    }
    Ok(u)
}

/// Two conditions that agree on their common part: values on pairs inside
/// the intersection come from `0..low`, values on pairs touching either
/// private part from `low..2·low`, so no private point can enter an image
/// of a tuple from the intersection.
pub fn random_compatible_pair<R: Rng + ?Sized>(rng: &mut R, bg: &Arc<Background>, low: u32) -> Result<(Condition, Condition)> {
    let low = low.max(1);
    let m = bg.carrier().size();
    let mut si = ElemSet::EMPTY;
    let mut sj = ElemSet::EMPTY;
    for x in 0..m {
        match rng.random_range(0..4) {
            0 => si.insert(x),
            1 => sj.insert(x),
            2 => {
                si.insert(x);
                sj.insert(x);
            }
            _ => {}
        }
    }
    let a = si.intersection(sj);
    let mut shared = BTreeMap::new();
    for t in KSubsets::of(a, 2) {
        let v = t.to_vec();
        shared.insert((v[0], v[1]), rng.random_range(0..low));
    }
    let mut side = |s: ElemSet| -> Vec<(usize, usize, u32)> {
        KSubsets::of(s, 2)
            .map(|t| {
                let v = t.to_vec();
                let val = shared
                    .get(&(v[0], v[1]))
                    .copied()
                    .unwrap_or_else(|| rng.random_range(low..2 * low));
                (v[0], v[1], val)
            })
            .collect()
    };
    let ri = side(si);
    let rj = side(sj);
    Ok((Condition::new(bg, si, ri)?, Condition::new(bg, sj, rj)?))
}
