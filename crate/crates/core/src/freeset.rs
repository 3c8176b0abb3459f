//! Free sets: testing, exact maximum search, image-location profiles, and a
//! seeded explorer for "no free set of size t" instances.

use serde::Serialize;

use crate::bits::{ElemSet, KSubsets};
use crate::error::{Error, Result};
use crate::io::InstanceDoc;
use crate::random::{random_family, rng_from_seed};
use crate::setmap::{generate, image_cap_ok, Carrier, GammaFamily, SetMapping};

/// `F(γ̄) ∩ H = ∅` for every `γ̄ ∈ [H]^k`. Sets smaller than `k` are free.
pub fn is_free(f: &SetMapping, h: ElemSet) -> Result<bool> {
    if !h.is_subset(f.carrier().elements()) {
        return Err(Error::Domain(format!("{h:?} is not inside the carrier")));
    }
    Ok(f.iter_within(h).all(|(_, img)| img.is_disjoint(h)))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FreeSearchResult {
    pub max_size: usize,
    /// Lexicographically least free set of size `max_size`.
    pub witness: ElemSet,
    pub nodes_explored: u64,
    /// `true` when the search finished, so `max_size` is optimal.
    pub exhausted: bool,
}

/// Maximum free set of the mapping `gamma` k-generates, within `budget`
/// search nodes.
pub fn max_free_set(gamma: &GammaFamily, k: usize, budget: u64) -> Result<FreeSearchResult> {
    let f = generate(gamma, k)?;
    max_free_set_of(&f, budget)
}

/// Branch and bound over subsets in lexicographic order. Each node adds one
/// element `x` above the current set `H`, checks only the new tuples
/// `S ∪ {x}` (`S ∈ [H]^{k-1}`), and removes every element of their images from
/// the remaining candidates.
pub fn max_free_set_of(f: &SetMapping, budget: u64) -> Result<FreeSearchResult> {
    if budget == 0 {
        return Err(Error::Domain("search budget must be positive".into()));
    }
    let mut search = Search {
        f,
        budget,
        nodes: 0,
        aborted: false,
        best: ElemSet::EMPTY,
    };
    search.dfs(ElemSet::EMPTY, ElemSet::EMPTY, f.carrier().elements());
    Ok(FreeSearchResult {
        max_size: search.best.len(),
        witness: search.best,
        nodes_explored: search.nodes,
        exhausted: !search.aborted,
    })
}

struct Search<'a> {
    f: &'a SetMapping,
    budget: u64,
    nodes: u64,
    aborted: bool,
    best: ElemSet,
}

impl Search<'_> {
    /// `forbidden` is the union of images of all k-subsets of `h`;
    /// `candidates` holds elements above `max h` not in `forbidden`.
    fn dfs(&mut self, h: ElemSet, forbidden: ElemSet, candidates: ElemSet) {
        if self.nodes >= self.budget {
            self.aborted = true;
            return;
        }
        self.nodes += 1;
        if h.len() > self.best.len() {
            self.best = h;
        }
        let k = self.f.arity();
        let mut rest = candidates;
        for x in candidates.iter() {
            rest.remove(x);
            if h.len() + 1 + rest.len() <= self.best.len() {
                break;
            }
            let grown = h.with(x);
            let mut fresh = ElemSet::EMPTY;
            let mut ok = true;
            for s in KSubsets::of(h, k - 1) {
                let img = self.f.image(s.with(x));
                if !img.is_disjoint(grown) {
                    ok = false;
                    break;
                }
                fresh = fresh.union(img);
            }
            if !ok {
                continue;
            }
            let forbidden = forbidden.union(fresh);
            self.dfs(grown, forbidden, rest.difference(forbidden));
            if self.aborted {
                return;
            }
        }
    }
}

/// Which interval patterns hold for every tuple `x₀ < x₁ < …` of a mapping
/// on triples or quadruples.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct LocationProfile {
    /// `F ⊆ [0, x₀)`
    pub below_min: bool,
    /// `F ⊆ (x₀, x₁)`
    pub inside_first_gap: bool,
    /// `F ⊆ (x₁, x₂)`
    pub inside_middle_gap: bool,
    /// `F ⊆ (x_{k-1}, ∞)`
    pub above_max: bool,
    /// `F ∩ (x₁, x₂) = ∅`
    pub avoids_middle_gap: bool,
}

pub fn location_profile(f: &SetMapping) -> Result<LocationProfile> {
    let k = f.arity();
    if !(3..=4).contains(&k) {
        return Err(Error::Domain(format!(
            "location profiles are defined for k = 3 or 4, got {k}"
        )));
    }
    let mut p = LocationProfile {
        below_min: true,
        inside_first_gap: true,
        inside_middle_gap: true,
        above_max: true,
        avoids_middle_gap: true,
    };
    let m = f.carrier().size();
    for (tuple, img) in f.iter() {
        let x: Vec<usize> = tuple.to_vec();
        let middle = ElemSet::range(x[1] + 1, x[2]);
        p.below_min &= img.is_subset(ElemSet::range(0, x[0]));
        p.inside_first_gap &= img.is_subset(ElemSet::range(x[0] + 1, x[1]));
        p.inside_middle_gap &= img.is_subset(middle);
        p.above_max &= img.is_subset(ElemSet::range(x[k - 1] + 1, m));
        p.avoids_middle_gap &= img.is_disjoint(middle);
    }
    Ok(p)
}

/// Optional filter on sampled mappings by their location profile.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ProfileFilter {
    #[default]
    None,
    /// Keep mappings with every image inside `(x₁, x₂)`.
    InsideMiddleGap,
    /// Keep mappings whose images all avoid `(x₁, x₂)`.
    AvoidsMiddleGap,
}

impl ProfileFilter {
    fn accepts(self, f: &SetMapping) -> bool {
        match self {
            ProfileFilter::None => true,
            ProfileFilter::InsideMiddleGap => {
                location_profile(f).is_ok_and(|p| p.inside_middle_gap)
            }
            ProfileFilter::AvoidsMiddleGap => {
                location_profile(f).is_ok_and(|p| p.avoids_middle_gap)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExploreParams {
    pub carrier: usize,
    pub k: usize,
    /// One uniform pair function per entry, values in `0..range`.
    pub ranges: Vec<u32>,
    /// Prepend the max function to every sampled family.
    pub with_max: bool,
    /// Keep only mappings with every image smaller than `cap`.
    pub cap: usize,
    pub target: usize,
    pub profile: ProfileFilter,
    pub seed: u64,
    /// Number of families sampled.
    pub budget: u64,
    /// Node budget for each maximum-free-set search.
    pub search_budget: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InstanceDescriptor {
    pub carrier: usize,
    pub k: usize,
    pub ranges: Vec<u32>,
    pub with_max: bool,
    pub profile: ProfileFilter,
    /// How families are drawn; exploration results depend on it.
    pub sampling: &'static str,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExplorationRecord {
    pub seed: u64,
    pub instance: InstanceDescriptor,
    pub cap: usize,
    pub target: usize,
    pub sampled: u64,
    /// Families passing the cap and profile filters.
    pub accepted: u64,
    /// Accepted families whose search ran out of nodes.
    pub undecided: u64,
    pub found_counterexample: bool,
    pub max_free_observed: usize,
    pub min_free_observed: Option<usize>,
    /// First family proven to have no free set of size `target`.
    pub counterexample: Option<InstanceDoc>,
}

pub const SAMPLING_NOTE: &str = "uniform over pair tables given range sizes";

/// Samples families and records whether any has no free set of size
/// `target`. Only exhausted searches count as counterexamples.
pub fn explore_no_free_t(params: &ExploreParams) -> Result<ExplorationRecord> {
    if params.target < params.k + 1 {
        return Err(Error::Domain(format!(
            "target {} must be at least k + 1 = {}",
            params.target,
            params.k + 1
        )));
    }
    if params.ranges.is_empty() && !params.with_max {
        return Err(Error::Domain("the sampled family would be empty".into()));
    }
    if params.ranges.contains(&0) {
        return Err(Error::Domain("range sizes must be positive".into()));
    }
    let carrier = Carrier::new(params.carrier)?;
    if params.carrier < params.k || params.k < 2 {
        return Err(Error::Domain(format!(
            "need 2 ≤ k ≤ carrier, got k = {} on {} points",
            params.k, params.carrier
        )));
    }
    let mut rec = ExplorationRecord {
        seed: params.seed,
        instance: InstanceDescriptor {
            carrier: params.carrier,
            k: params.k,
            ranges: params.ranges.clone(),
            with_max: params.with_max,
            profile: params.profile,
            sampling: SAMPLING_NOTE,
        },
        cap: params.cap,
        target: params.target,
        sampled: 0,
        accepted: 0,
        undecided: 0,
        found_counterexample: false,
        max_free_observed: 0,
        min_free_observed: None,
        counterexample: None,
    };
    let mut rng = rng_from_seed(params.seed);
    for _ in 0..params.budget {
        let gamma = random_family(&mut rng, carrier, &params.ranges, params.with_max);
        rec.sampled += 1;
        let f = generate(&gamma, params.k)?;
        if !image_cap_ok(&f, params.cap) || !params.profile.accepts(&f) {
            continue;
        }
        rec.accepted += 1;
        let res = max_free_set_of(&f, params.search_budget.max(1))?;
        rec.max_free_observed = rec.max_free_observed.max(res.max_size);
        if !res.exhausted {
            rec.undecided += 1;
            continue;
        }
        rec.min_free_observed = Some(rec.min_free_observed.map_or(res.max_size, |m| m.min(res.max_size)));
        if res.max_size < params.target && rec.counterexample.is_none() {
            rec.found_counterexample = true;
            rec.counterexample = Some(InstanceDoc::from_family(&gamma, params.k));
        }
    }
    Ok(rec)
}
