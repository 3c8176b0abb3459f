//! Executable forms of the monotonicity/restriction lemmas and of the
//! small-image arguments for one and two generating functions.
//!
//! Each checker separates a broken hypothesis (returned as
//! [`Error::Precondition`]) from a false conclusion (returned as
//! [`Verdict::Violated`]). Under the hypotheses the conclusions are theorems,
//! so a violation always points at a bug.

use serde::Serialize;

use super::{generate, generated_image, restrict, GammaFamily, Rho};
use crate::bits::{ElemSet, KSubsets};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Verdict {
    Holds,
    /// `tuple` and `element` are in the coordinates of the larger carrier.
    Violated { tuple: ElemSet, element: usize },
}

impl Verdict {
    pub fn holds(self) -> bool {
        matches!(self, Verdict::Holds)
    }
}

fn check_subcarrier(gamma1: &GammaFamily, gamma2: &GammaFamily, a1: ElemSet) -> Result<()> {
    if !a1.is_subset(gamma2.carrier().elements()) {
        return Err(Error::Precondition(format!(
            "{a1:?} is not a subset of the larger carrier"
        )));
    }
    if a1.len() != gamma1.carrier().size() {
        return Err(Error::Precondition(format!(
            "the smaller family lives on {} points but the subset has {}",
            gamma1.carrier().size(),
            a1.len()
        )));
    }
    if a1.len() < 2 {
        return Err(Error::Precondition("the smaller carrier needs two points".into()));
    }
    Ok(())
}

/// With `Γ₂|_{A₁} ⊆ Γ₁`: `F₁(γ̄) ⊆ F₂(γ̄)` for every `γ̄ ∈ [A₁]^k`.
///
/// `gamma1` lives on `A₁` re-indexed onto `0..|A₁|`; `a1` names `A₁` inside
/// the carrier of `gamma2`.
pub fn check_monotonicity(
    gamma1: &GammaFamily,
    gamma2: &GammaFamily,
    a1: ElemSet,
    k: usize,
) -> Result<Verdict> {
    check_subcarrier(gamma1, gamma2, a1)?;
    let restricted = restrict(gamma2, a1)?;
    if let Some(i) = restricted
        .family
        .rhos()
        .iter()
        .position(|r| !gamma1.rhos().contains(r))
    {
        return Err(Error::Precondition(format!(
            "restriction of pair function {i} of the larger family is not in the smaller family"
        )));
    }
    if a1.len() < k {
        return Ok(Verdict::Holds);
    }
    let f1 = generate(gamma1, k)?;
    let f2 = generate(gamma2, k)?;
    for (local, img1) in f1.iter() {
        let tuple = restricted.lift(local);
        let img1 = restricted.lift(img1);
        let img2 = f2.image(tuple);
        if let Some(x) = img1.difference(img2).min() {
            return Ok(Verdict::Violated { tuple, element: x });
        }
    }
    Ok(Verdict::Holds)
}

/// With `Γ₂|_{A₁} = Γ₁`: `F₁(γ̄) = F₂(γ̄) ∩ A₁` for every `γ̄ ∈ [A₁]^k`.
pub fn check_restriction_eq(
    gamma1: &GammaFamily,
    gamma2: &GammaFamily,
    a1: ElemSet,
    k: usize,
) -> Result<Verdict> {
    check_subcarrier(gamma1, gamma2, a1)?;
    let restricted = restrict(gamma2, a1)?;
    if restricted.family != *gamma1 {
        return Err(Error::Precondition(
            "the smaller family is not the restriction of the larger one".into(),
        ));
    }
    if a1.len() < k {
        return Ok(Verdict::Holds);
    }
    let f1 = generate(gamma1, k)?;
    let f2 = generate(gamma2, k)?;
    for (local, img1) in f1.iter() {
        let tuple = restricted.lift(local);
        let img1 = restricted.lift(img1);
        let img2 = f2.image(tuple).intersection(a1);
        let diff = ElemSet(img1.0 ^ img2.0);
        if let Some(x) = diff.min() {
            return Ok(Verdict::Violated { tuple, element: x });
        }
    }
    Ok(Verdict::Holds)
}

/// The ♣ property with an explicit bound: for every `α` and `ν < range`,
/// `|{ξ < α : ρ{ξ,α} ≤ ν}| ≤ bound(ν)`.
pub fn check_clubsuit(rho: &Rho, bound: impl Fn(u32) -> usize) -> bool {
    let m = rho.carrier().size();
    (0..m).all(|alpha| {
        let mut counts = vec![0usize; rho.range() as usize];
        for xi in 0..alpha {
            counts[rho.get(xi, alpha) as usize] += 1;
        }
        // cumulative counts give |{ξ : ρ ≤ ν}|
        let mut acc = 0;
        counts.iter().enumerate().all(|(nu, &c)| {
            acc += c;
            acc <= bound(nu as u32)
        })
    })
}

/// For `Γ = {max, ρ₁}`: `F(γ̄) ⊆ {x ≤ γ* : ρ₁{x,γ*} ≤ ν*}` where `γ* = max γ̄`
/// and `ν*` is the largest `ρ₁` value on a pair of `γ̄`.
pub fn n1_containment(gamma: &GammaFamily, tuple: ElemSet) -> Result<Verdict> {
    let carrier = gamma.carrier();
    let [rho0, rho1] = gamma.rhos() else {
        return Err(Error::Precondition(format!(
            "expected exactly two pair functions, got {}",
            gamma.len()
        )));
    };
    if rho0.table() != Rho::max_fn(carrier).table() {
        return Err(Error::Precondition(
            "the first pair function must be max".into(),
        ));
    }
    let image = generated_image(gamma, tuple)?;
    let top = tuple.max().expect("arity is at least two");
    let nu_star = rho1.max_on(tuple).expect("arity is at least two");
    for x in image.iter() {
        if x > top || rho1.get(x, top) > nu_star {
            return Ok(Verdict::Violated {
                tuple,
                element: x,
            });
        }
    }
    Ok(Verdict::Holds)
}

/// Runs [`n1_containment`] over every k-subset of the carrier.
pub fn n1_containment_all(gamma: &GammaFamily, k: usize) -> Result<Verdict> {
    for tuple in KSubsets::of(gamma.carrier().elements(), k) {
        let v = n1_containment(gamma, tuple)?;
        if !v.holds() {
            return Ok(v);
        }
    }
    Ok(Verdict::Holds)
}
