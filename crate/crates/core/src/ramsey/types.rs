//! ρ-types of triples, the induced coloring of `[A]³`, homogeneous 5-sets,
//! and the two closeness claims that turn homogeneity into non-freeness.

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

use crate::bits::{ElemSet, KSubsets};
use crate::error::{Error, Result};
use crate::setmap::{rho_close, GammaFamily, Rho};

/// Which max-inequality an ordered triple `α < β < γ` satisfies first:
///
/// 1. `max{ρ{α,β}, ρ{β,γ}} ≤ ρ{α,γ}`
/// 2. `max{ρ{α,β}, ρ{α,γ}} ≤ ρ{β,γ}`
/// 3. `max{ρ{β,γ}, ρ{α,γ}} ≤ ρ{α,β}`
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(into = "u8")]
pub enum RhoType {
    One = 1,
    Two = 2,
    Three = 3,
}

impl From<RhoType> for u8 {
    fn from(t: RhoType) -> u8 {
        t as u8
    }
}

fn sorted_triple(a: usize, b: usize, c: usize) -> Result<()> {
    if a < b && b < c {
        Ok(())
    } else {
        Err(Error::Domain(format!("triple ({a},{b},{c}) is not strictly increasing")))
    }
}

fn in_carrier(rho: &Rho, top: usize) -> Result<()> {
    if rho.carrier().contains(top) {
        Ok(())
    } else {
        Err(Error::Domain(format!("{top} is outside the carrier")))
    }
}

#[inline]
fn type_of(ab: u32, bc: u32, ac: u32) -> RhoType {
    if ab.max(bc) <= ac {
        RhoType::One
    } else if ab.max(ac) <= bc {
        RhoType::Two
    } else {
        // the largest of the three values is ρ{α,β}
        debug_assert!(bc.max(ac) <= ab);
        RhoType::Three
    }
}

/// The ρ-type of `a < b < c`.
pub fn rho_type(rho: &Rho, a: usize, b: usize, c: usize) -> Result<RhoType> {
    sorted_triple(a, b, c)?;
    in_carrier(rho, c)?;
    Ok(type_of(rho.get(a, b), rho.get(b, c), rho.get(a, c)))
}

/// One ρ-type per member of the family.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct RhoTypeVector(pub Vec<RhoType>);

impl fmt::Display for RhoTypeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, t) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", *t as u8)?;
        }
        write!(f, ")")
    }
}

fn triple_elems(triple: ElemSet) -> Result<[usize; 3]> {
    let v = triple.to_vec();
    v.try_into()
        .map_err(|v: Vec<usize>| Error::Domain(format!("expected a 3-set, got {} elements", v.len())))
}

/// The ~-color of a 3-subset.
pub fn type_color(gamma: &GammaFamily, triple: ElemSet) -> Result<RhoTypeVector> {
    let [a, b, c] = triple_elems(triple)?;
    gamma
        .rhos()
        .iter()
        .map(|rho| rho_type(rho, a, b, c))
        .collect::<Result<Vec<_>>>()
        .map(RhoTypeVector)
}

/// Packs a type vector two bits per member; distinct vectors, distinct codes.
fn type_code(gamma: &GammaFamily, a: usize, b: usize, c: usize) -> u64 {
    gamma.rhos().iter().fold(0u64, |acc, rho| {
        (acc << 2) | type_of(rho.get(a, b), rho.get(b, c), rho.get(a, c)) as u64
    })
}

/// The distinct ~-classes met by `[A]³`; never more than `3^|Γ|`.
pub fn type_classes(gamma: &GammaFamily, a: ElemSet) -> Result<BTreeSet<RhoTypeVector>> {
    KSubsets::of(a, 3).map(|t| type_color(gamma, t)).collect()
}

/// Every 3-subset of `b` has the same type vector.
pub fn is_type_homogeneous(gamma: &GammaFamily, b: ElemSet) -> bool {
    let mut codes = KSubsets::of(b, 3).map(|t| {
        let [x, y, z] = triple_elems(t).expect("3-subsets");
        type_code(gamma, x, y, z)
    });
    match codes.next() {
        None => true,
        Some(first) => codes.all(|c| c == first),
    }
}

/// The lexicographically least `size`-subset of `a` that is ~-homogeneous.
pub fn find_homogeneous(gamma: &GammaFamily, a: ElemSet, size: usize) -> Result<Option<ElemSet>> {
    if gamma.len() > 32 {
        return Err(Error::Domain("type vectors are packed for at most 32 pair functions".into()));
    }
    if !a.is_subset(gamma.carrier().elements()) {
        return Err(Error::Domain(format!("{a:?} is not inside the carrier")));
    }
    if a.len() < size {
        return Ok(None);
    }
    let elems = a.to_vec();
    let mut chosen = Vec::with_capacity(size);
    Ok(homog_dfs(gamma, &elems, 0, size, &mut chosen, None))
}

fn homog_dfs(
    gamma: &GammaFamily,
    elems: &[usize],
    from: usize,
    size: usize,
    chosen: &mut Vec<usize>,
    code: Option<u64>,
) -> Option<ElemSet> {
    if chosen.len() == size {
        return Some(chosen.iter().copied().collect());
    }
    let need = size - chosen.len();
    for i in from..elems.len() {
        if elems.len() - i < need {
            break;
        }
        let x = elems[i];
        let mut code_here = code;
        let mut ok = true;
        'pairs: for (q, &b) in chosen.iter().enumerate() {
            for &a in &chosen[..q] {
                let c = type_code(gamma, a, b, x);
                match code_here {
                    None => code_here = Some(c),
                    Some(k) if k != c => {
                        ok = false;
                        break 'pairs;
                    }
                    _ => {}
                }
            }
        }
        if !ok {
            continue;
        }
        chosen.push(x);
        if let Some(found) = homog_dfs(gamma, elems, i + 1, size, chosen, code_here) {
            return Some(found);
        }
        chosen.pop();
    }
    None
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum ClaimVerdict {
    Holds,
    /// Member `rho` of the family fails; `case` names the branch of the
    /// argument that broke.
    Violated { rho: usize, case: String },
}

impl ClaimVerdict {
    pub fn holds(&self) -> bool {
        matches!(self, ClaimVerdict::Holds)
    }
}

/// For a ~-homogeneous `α₁ < … < α₅`: `α₃` is ρ-close to the other four for
/// every `ρ`, hence `α₃ ∈ F{α₁,α₂,α₄,α₅}`.
///
/// Closeness is evaluated directly and also re-derived from the explicit
/// per-type inequalities; the two routes must agree.
pub fn verify_claim_4(gamma: &GammaFamily, b: ElemSet) -> Result<ClaimVerdict> {
    let v = b.to_vec();
    if v.len() != 5 {
        return Err(Error::Precondition(format!("expected a 5-set, got {b:?}")));
    }
    if !b.is_subset(gamma.carrier().elements()) {
        return Err(Error::Precondition(format!("{b:?} is not inside the carrier")));
    }
    if !is_type_homogeneous(gamma, b) {
        return Err(Error::Precondition(format!("{b:?} is not type-homogeneous")));
    }
    let [a1, a2, a3, a4, a5] = [v[0], v[1], v[2], v[3], v[4]];
    let rest = b.without(a3);
    for (i, rho) in gamma.rhos().iter().enumerate() {
        let r = |x, y| rho.get(x, y);
        let ty = type_of(r(a1, a2), r(a2, a3), r(a1, a3));
        let derived = match ty {
            RhoType::One => {
                r(a3, a1) <= r(a1, a4)
                    && r(a3, a2) <= r(a2, a4)
                    && r(a3, a4) <= r(a4, a1)
                    && r(a3, a5) <= r(a5, a1)
            }
            RhoType::Two => [a1, a2, a4, a5].iter().all(|&g| r(a3, g) <= r(a4, a5)),
            RhoType::Three => [a1, a2, a4, a5].iter().all(|&g| r(a3, g) <= r(a1, a2)),
        };
        let close = rho_close(rho, a3, rest)?;
        if derived && !close {
            return Err(Error::Invariant(format!(
                "type {} inequalities hold for member {i} but closeness fails",
                ty as u8
            )));
        }
        if !close || !derived {
            return Ok(ClaimVerdict::Violated {
                rho: i,
                case: format!("type {}", ty as u8),
            });
        }
    }
    Ok(ClaimVerdict::Holds)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum CaseI {
    /// `ρ{α,β} ≤ ρ{β,γ}`
    Ia,
    Ib,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum CaseII {
    /// `ρ{α,β} ≤ ρ{α,γ}`
    IIa,
    IIb,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum CaseIII {
    /// `ρ{β,γ} > ρ{α,γ}` (strict)
    IIIa,
    IIIb,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct TripleCases {
    pub first: CaseI,
    pub second: CaseII,
    pub third: CaseIII,
}

#[inline]
fn cases_of(ab: u32, bc: u32, ac: u32) -> TripleCases {
    TripleCases {
        first: if ab <= bc { CaseI::Ia } else { CaseI::Ib },
        second: if ab <= ac { CaseII::IIa } else { CaseII::IIb },
        third: if bc > ac { CaseIII::IIIa } else { CaseIII::IIIb },
    }
}

pub fn triple_cases(rho: &Rho, a: usize, b: usize, c: usize) -> Result<TripleCases> {
    sorted_triple(a, b, c)?;
    in_carrier(rho, c)?;
    Ok(cases_of(rho.get(a, b), rho.get(b, c), rho.get(a, c)))
}

/// Whether a quad meets the hypotheses of [`verify_claim_3`] for `rho`.
pub fn claim3_applies(rho: &Rho, quad: [usize; 4]) -> bool {
    let mut third = None;
    for t in KSubsets::of(quad.into_iter().collect(), 3) {
        let [a, b, c] = triple_elems(t).expect("3-subsets");
        let cs = cases_of(rho.get(a, b), rho.get(b, c), rho.get(a, c));
        if cs.first != CaseI::Ia || cs.second != CaseII::IIa {
            return false;
        }
        match third {
            None => third = Some(cs.third),
            Some(x) if x != cs.third => return false,
            _ => {}
        }
    }
    true
}

/// For `α < β < γ < γ′` where every triple is Ia and IIa and the quad is
/// III-homogeneous (per member): `β` is ρ-close to `{α, γ, γ′}` for every
/// `ρ`, hence `β ∈ F{α,γ,γ′}`.
pub fn verify_claim_3(gamma: &GammaFamily, quad: ElemSet) -> Result<ClaimVerdict> {
    let v = quad.to_vec();
    if v.len() != 4 || !quad.is_subset(gamma.carrier().elements()) {
        return Err(Error::Precondition(format!("expected a 4-subset of the carrier, got {quad:?}")));
    }
    let q = [v[0], v[1], v[2], v[3]];
    if let Some(i) = gamma.rhos().iter().position(|rho| !claim3_applies(rho, q)) {
        return Err(Error::Precondition(format!(
            "{quad:?} is not Ia/IIa/III-homogeneous for member {i}"
        )));
    }
    let [alpha, beta, gamma_, gamma2] = q;
    let rest = quad.without(beta);
    for (i, rho) in gamma.rhos().iter().enumerate() {
        let r = |x, y| rho.get(x, y);
        let third = cases_of(r(beta, gamma_), r(gamma_, gamma2), r(beta, gamma2)).third;
        let last = match third {
            CaseIII::IIIa => r(beta, gamma2) < r(gamma_, gamma2),
            CaseIII::IIIb => r(beta, gamma2) <= r(alpha, gamma2),
        };
        let derived = r(alpha, beta) <= r(alpha, gamma_) && r(beta, gamma_) <= r(gamma_, gamma2) && last;
        let close = rho_close(rho, beta, rest)?;
        if derived && !close {
            return Err(Error::Invariant(format!(
                "{third:?} inequalities hold for member {i} but closeness fails"
            )));
        }
        if !close || !derived {
            return Ok(ClaimVerdict::Violated {
                rho: i,
                case: format!("{third:?}"),
            });
        }
    }
    Ok(ClaimVerdict::Holds)
}

/// Longest `b₀ < b₁ < … ` with `ρ{bᵢ,bᵢ₊₁} > ρ{bᵢ₊₁,bᵢ₊₂}` throughout, i.e.
/// every consecutive triple in case Ib. Its length never exceeds
/// `range + 1`.
pub fn longest_descending_chain(rho: &Rho) -> Vec<usize> {
    let m = rho.carrier().size();
    if m < 2 {
        return (0..m).collect();
    }
    // len[i][j]: longest chain ending with the step i -> j (i < j)
    let mut len = vec![vec![0usize; m]; m];
    let mut prev = vec![vec![usize::MAX; m]; m];
    let mut best = (2, 0, 1);
    for j in 1..m {
        for i in 0..j {
            len[i][j] = 2;
            let v = rho.get(i, j);
            for h in 0..i {
                if rho.get(h, i) > v && len[h][i] + 1 > len[i][j] {
                    len[i][j] = len[h][i] + 1;
                    prev[i][j] = h;
                }
            }
            if len[i][j] > best.0 {
                best = (len[i][j], i, j);
            }
        }
    }
    let (_, mut i, mut j) = best;
    let mut chain = vec![j, i];
    while prev[i][j] != usize::MAX {
        let h = prev[i][j];
        chain.push(h);
        j = i;
        i = h;
    }
    chain.reverse();
    chain
}
