//! Finite arrow relations `n → (l₁,…,l_c)^k` by backtracking, with
//! verifiable witnesses for the negative cases.

use serde::{Deserialize, Serialize};

use crate::bits::{binomial, colex_rank, ElemSet, KSubsets, MAX_CARRIER};
use crate::error::{Error, Result};

/// Above this many k-subsets the search is refused outright.
pub const MAX_TUPLES: u64 = 1 << 22;

const UNSET: u8 = u8::MAX;

/// A coloring of `[n]^k` with `targets.len()` colors, stored by colex rank.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColoringWitness {
    n: usize,
    k: usize,
    targets: Vec<usize>,
    colors: Vec<u8>,
}

fn check_shape(n: usize, k: usize, targets: &[usize]) -> Result<()> {
    if k == 0 || n < k {
        return Err(Error::Domain(format!("need n ≥ k ≥ 1, got n={n}, k={k}")));
    }
    if n > MAX_CARRIER {
        return Err(Error::Domain(format!("n={n} exceeds {MAX_CARRIER}")));
    }
    if targets.is_empty() || targets.len() > 255 {
        return Err(Error::Domain("between 1 and 255 colors are supported".into()));
    }
    if let Some(l) = targets.iter().find(|&&l| l < k) {
        return Err(Error::Domain(format!("target {l} is below the uniformity {k}")));
    }
    Ok(())
}

impl ColoringWitness {
    /// `colors[r]` is the color of the k-subset with colex rank `r`.
    pub fn new(n: usize, k: usize, targets: Vec<usize>, colors: Vec<u8>) -> Result<Self> {
        check_shape(n, k, &targets)?;
        let expected = binomial(n, k) as usize;
        if colors.len() != expected {
            return Err(Error::Schema(format!(
                "assignment covers {} tuples, expected C({n},{k}) = {expected}",
                colors.len()
            )));
        }
        if let Some(r) = colors.iter().position(|&c| c as usize >= targets.len()) {
            return Err(Error::Schema(format!(
                "tuple #{r} has color {} but only {} colors exist",
                colors[r],
                targets.len()
            )));
        }
        Ok(ColoringWitness { n, k, targets, colors })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn targets(&self) -> &[usize] {
        &self.targets
    }

    pub fn color(&self, tuple: ElemSet) -> u8 {
        self.colors[colex_rank(tuple)]
    }

    /// Colors in colex order of the tuples.
    pub fn colors(&self) -> &[u8] {
        &self.colors
    }
}

#[derive(Serialize, Deserialize)]
struct WitnessDoc {
    n: usize,
    k: usize,
    colors: usize,
    targets: Vec<usize>,
    assignment: Vec<Vec<usize>>,
}

impl Serialize for ColoringWitness {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let assignment = KSubsets::of(ElemSet::full(self.n), self.k)
            .zip(&self.colors)
            .map(|(t, &c)| {
                let mut row = t.to_vec();
                row.push(c as usize);
                row
            })
            .collect();
        WitnessDoc {
            n: self.n,
            k: self.k,
            colors: self.targets.len(),
            targets: self.targets.clone(),
            assignment,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for ColoringWitness {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let doc = WitnessDoc::deserialize(d)?;
        from_doc(doc).map_err(serde::de::Error::custom)
    }
}

fn from_doc(doc: WitnessDoc) -> Result<ColoringWitness> {
    check_shape(doc.n, doc.k, &doc.targets)?;
    if doc.colors != doc.targets.len() {
        return Err(Error::Schema(format!(
            "colors is {} but {} targets are given",
            doc.colors,
            doc.targets.len()
        )));
    }
    let mut colors = vec![UNSET; binomial(doc.n, doc.k) as usize];
    for (j, row) in doc.assignment.iter().enumerate() {
        let Some((&color, tuple)) = row.split_last() else {
            return Err(Error::Schema(format!("assignment[{j}] is empty")));
        };
        if tuple.len() != doc.k {
            return Err(Error::Schema(format!(
                "assignment[{j}] has {} elements, expected {}",
                tuple.len(),
                doc.k
            )));
        }
        if let Some(x) = tuple.iter().find(|&&x| x >= doc.n) {
            return Err(Error::Schema(format!("assignment[{j}]: {x} is outside 0..{}", doc.n)));
        }
        let set: ElemSet = tuple.iter().copied().collect();
        if set.len() != doc.k {
            return Err(Error::Schema(format!("assignment[{j}] repeats an element")));
        }
        if color >= doc.colors {
            return Err(Error::Schema(format!("assignment[{j}]: color {color} is out of range")));
        }
        let slot = &mut colors[colex_rank(set)];
        if *slot != UNSET {
            return Err(Error::Schema(format!("assignment[{j}]: {set:?} is assigned twice")));
        }
        *slot = color as u8;
    }
    if let Some(r) = colors.iter().position(|&c| c == UNSET) {
        let missing = KSubsets::of(ElemSet::full(doc.n), doc.k).nth(r).expect("rank in range");
        return Err(Error::Schema(format!("no color assigned to {missing:?}")));
    }
    ColoringWitness::new(doc.n, doc.k, doc.targets, colors)
}

/// No color `i` has an `lᵢ`-subset all of whose k-subsets carry color `i`.
/// Checks every `lᵢ`-subset directly.
pub fn verify_witness(w: &ColoringWitness) -> bool {
    w.targets.iter().enumerate().all(|(i, &l)| {
        l > w.n
            || KSubsets::of(ElemSet::full(w.n), l)
                .all(|s| KSubsets::of(s, w.k).any(|t| w.color(t) as usize != i))
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ArrowOutcome {
    /// Every coloring has a homogeneous set of some target size.
    Holds { nodes: u64 },
    Fails { witness: ColoringWitness, nodes: u64 },
    /// The budget or the size guard stopped the search; nothing is claimed.
    Infeasible { nodes: u64 },
}

/// Decides `n → (l₁,…,l_c)^k` by backtracking over k-subsets in colex order.
/// `budget` bounds the number of color assignments tried.
///
/// When all targets are equal the first tuple's color is fixed to 0. A
/// returned witness is the first one met in colex order and is re-verified.
pub fn arrow_holds(n: usize, k: usize, targets: &[usize], budget: u64) -> Result<ArrowOutcome> {
    check_shape(n, k, targets)?;
    if budget == 0 {
        return Err(Error::Domain("budget must be positive".into()));
    }
    let total = binomial(n, k);
    if total > MAX_TUPLES {
        return Ok(ArrowOutcome::Infeasible { nodes: 0 });
    }
    let tuples: Vec<ElemSet> = KSubsets::of(ElemSet::full(n), k).collect();
    let symmetric = targets.iter().all(|&l| l == targets[0]);
    let mut search = ArrowSearch {
        k,
        targets,
        tuples: &tuples,
        colors: vec![UNSET; tuples.len()],
        nodes: 0,
        budget,
        exhausted_budget: false,
    };
    let found = search.dfs(0, symmetric);
    let nodes = search.nodes;
    if found {
        let witness = ColoringWitness::new(n, k, targets.to_vec(), search.colors)?;
        if !verify_witness(&witness) {
            return Err(Error::Invariant("search produced a coloring that fails verification".into()));
        }
        Ok(ArrowOutcome::Fails { witness, nodes })
    } else if search.exhausted_budget {
        Ok(ArrowOutcome::Infeasible { nodes })
    } else {
        Ok(ArrowOutcome::Holds { nodes })
    }
}

struct ArrowSearch<'a> {
    k: usize,
    targets: &'a [usize],
    tuples: &'a [ElemSet],
    colors: Vec<u8>,
    nodes: u64,
    budget: u64,
    exhausted_budget: bool,
}

impl ArrowSearch<'_> {
    fn dfs(&mut self, i: usize, fix_first: bool) -> bool {
        if i == self.tuples.len() {
            return true;
        }
        let palette = if fix_first && i == 0 { 1 } else { self.targets.len() };
        for c in 0..palette {
            if self.nodes >= self.budget {
                self.exhausted_budget = true;
                return false;
            }
            self.nodes += 1;
            self.colors[i] = c as u8;
            if !self.closes_mono(self.tuples[i], c) && self.dfs(i + 1, fix_first) {
                return true;
            }
            if self.exhausted_budget {
                return false;
            }
        }
        self.colors[i] = UNSET;
        false
    }

    #[inline]
    fn color(&self, t: ElemSet) -> u8 {
        self.colors[colex_rank(t)]
    }

    /// Whether coloring `top` with `c` completes a `c`-homogeneous set of the
    /// target size whose `k` largest elements are `top`.
    fn closes_mono(&self, top: ElemSet, c: usize) -> bool {
        let extra = self.targets[c] - self.k;
        if extra == 0 {
            return true;
        }
        let floor = top.min().expect("k ≥ 1");
        if floor < extra {
            return false;
        }
        let c = c as u8;
        let candidates: Vec<usize> = (0..floor)
            .filter(|&x| KSubsets::of(top, self.k - 1).all(|s| self.color(s.with(x)) == c))
            .collect();
        if candidates.len() < extra {
            return false;
        }
        self.extend_mono(top, ElemSet::default(), &candidates, extra, c)
    }

    fn extend_mono(&self, top: ElemSet, chosen: ElemSet, cands: &[usize], need: usize, c: u8) -> bool {
        if need == 0 {
            return true;
        }
        let base = top.union(chosen);
        for (j, &x) in cands.iter().enumerate() {
            if cands.len() - j < need {
                break;
            }
            // k-subsets through x that also meet `chosen`; the rest were
            // checked when building the candidate list
            let ok = KSubsets::of(base, self.k - 1)
                .filter(|s| !s.is_disjoint(chosen))
                .all(|s| self.color(s.with(x)) == c);
            if ok && self.extend_mono(top, chosen.with(x), &cands[j + 1..], need - 1, c) {
                return true;
            }
        }
        false
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const BIG: u64 = 50_000_000;

    fn pentagon() -> ColoringWitness {
        // color 0 on the cycle 0-1-2-3-4-0, color 1 on the diagonals
        let colors = KSubsets::of(ElemSet::full(5), 2)
            .map(|t| {
                let v = t.to_vec();
                let d = v[1] - v[0];
                u8::from(!(d == 1 || d == 4))
            })
            .collect();
        ColoringWitness::new(5, 2, vec![3, 3], colors).unwrap()
    }

    #[test]
    fn classical_r33() {
        assert!(matches!(arrow_holds(6, 2, &[3, 3], BIG).unwrap(), ArrowOutcome::Holds { .. }));
        match arrow_holds(5, 2, &[3, 3], BIG).unwrap() {
            ArrowOutcome::Fails { witness, .. } => assert!(verify_witness(&witness)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn single_color_and_trivial_targets() {
        assert!(matches!(arrow_holds(5, 3, &[5], BIG).unwrap(), ArrowOutcome::Holds { .. }));
        assert!(matches!(arrow_holds(4, 3, &[5], BIG).unwrap(), ArrowOutcome::Fails { .. }));
        // a target equal to k forbids that color outright
        assert!(matches!(arrow_holds(4, 3, &[3, 5], BIG).unwrap(), ArrowOutcome::Fails { .. }));
        assert!(arrow_holds(2, 3, &[3], BIG).is_err());
        assert!(arrow_holds(5, 3, &[2, 5], BIG).is_err());
    }

    #[test]
    fn eight_does_not_arrow_four_four_triples() {
        match arrow_holds(8, 3, &[4, 4], BIG).unwrap() {
            ArrowOutcome::Fails { witness, .. } => {
                assert!(verify_witness(&witness));
                assert_eq!(witness.colors()[0], 0);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn pentagon_and_corruptions() {
        let w = pentagon();
        assert!(verify_witness(&w));
        for r in 0..10 {
            let mut colors = w.colors().to_vec();
            colors[r] ^= 1;
            let bad = ColoringWitness::new(5, 2, vec![3, 3], colors).unwrap();
            assert!(!verify_witness(&bad), "flipping tuple {r}");
        }
        let mono = ColoringWitness::new(5, 2, vec![3, 3], vec![0; 10]).unwrap();
        assert!(!verify_witness(&mono));
    }

    #[test]
    fn tiny_budget_is_infeasible() {
        assert!(matches!(
            arrow_holds(6, 2, &[3, 3], 5).unwrap(),
            ArrowOutcome::Infeasible { nodes: 5 }
        ));
        assert!(arrow_holds(6, 2, &[3, 3], 0).is_err());
    }

    #[test]
    fn json_roundtrip_and_errors() {
        let w = pentagon();
        let text = serde_json::to_string(&w).unwrap();
        assert!(text.starts_with(r#"{"n":5,"k":2,"colors":2,"targets":[3,3],"assignment":[[0,1,0],"#));
        let back: ColoringWitness = serde_json::from_str(&text).unwrap();
        assert_eq!(back, w);

        let missing = r#"{"n":3,"k":2,"colors":1,"targets":[3],"assignment":[[0,1,0],[0,2,0]]}"#;
        let e = serde_json::from_str::<ColoringWitness>(missing).unwrap_err().to_string();
        assert!(e.contains("no color assigned to {1, 2}"), "{e}");
        let twice = r#"{"n":3,"k":2,"colors":1,"targets":[3],"assignment":[[0,1,0],[1,0,0],[1,2,0]]}"#;
        assert!(serde_json::from_str::<ColoringWitness>(twice).is_err());
        let color = r#"{"n":3,"k":2,"colors":1,"targets":[3],"assignment":[[0,1,1],[0,2,0],[1,2,0]]}"#;
        assert!(serde_json::from_str::<ColoringWitness>(color).is_err());
    }

    #[test]
    fn monotone_in_n() {
        for (k, targets) in [(2, vec![3, 3]), (1, vec![2, 3]), (3, vec![4, 3]), (2, vec![3, 3, 2])] {
            let mut seen_holds = false;
            for n in k..=7 {
                let holds = match arrow_holds(n, k, &targets, BIG).unwrap() {
                    ArrowOutcome::Holds { .. } => true,
                    ArrowOutcome::Fails { witness, .. } => {
                        assert!(verify_witness(&witness));
                        false
                    }
                    ArrowOutcome::Infeasible { .. } => panic!("budget too small"),
                };
                assert!(!seen_holds || holds, "k={k} targets={targets:?} n={n}");
                seen_holds |= holds;
            }
            assert!(seen_holds);
        }
    }
}
