//! Finite carriers, pair functions, k-generation and restriction.
//!
//! A family `Γ` of pair functions *k-generates* the set mapping `F` where
//! `x ∈ F(γ̄)` iff `x ∉ γ̄` and, for every `ρ ∈ Γ`, `x` is ρ-close to `γ̄`:
//! each `ρ{x,γ}` (γ ∈ γ̄) is bounded by some `ρ{γ′,γ″}` with `γ′ ≠ γ″` in `γ̄`.
//! The existential over pairs collapses to `max ρ` over the pairs of `γ̄`,
//! which is what [`generate`] evaluates.

mod checks;
mod rho;

pub use checks::{
    check_clubsuit, check_monotonicity, check_restriction_eq, n1_containment, n1_containment_all,
    Verdict,
};
pub use rho::{Carrier, GammaFamily, Restriction, Rho};

use crate::bits::{binomial, colex_rank, ElemSet, KSubsets};
use crate::error::{Error, Result};

/// A table `[carrier]^k → P(carrier)` with `F(γ̄) ∩ γ̄ = ∅`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SetMapping {
    carrier: Carrier,
    arity: usize,
    /// Indexed by colex rank of the k-subset.
    images: Vec<ElemSet>,
}

impl SetMapping {
    /// Builds a mapping from an image function, validating disjointness.
    pub fn from_fn(
        carrier: Carrier,
        arity: usize,
        mut image: impl FnMut(ElemSet) -> ElemSet,
    ) -> Result<Self> {
        check_arity(carrier, arity)?;
        let full = carrier.elements();
        let mut images = Vec::with_capacity(binomial(carrier.size(), arity) as usize);
        for tuple in KSubsets::of(full, arity) {
            let img = image(tuple);
            if !img.is_subset(full) {
                return Err(Error::Domain(format!("image of {tuple:?} leaves the carrier")));
            }
            if !img.is_disjoint(tuple) {
                return Err(Error::Domain(format!(
                    "image {img:?} of {tuple:?} meets its own tuple"
                )));
            }
            images.push(img);
        }
        Ok(SetMapping {
            carrier,
            arity,
            images,
        })
    }

    pub fn carrier(&self) -> Carrier {
        self.carrier
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    /// `F(γ̄)`; `tuple` must be an `arity`-subset of the carrier.
    #[inline]
    pub fn image(&self, tuple: ElemSet) -> ElemSet {
        debug_assert_eq!(tuple.len(), self.arity);
        self.images[colex_rank(tuple)]
    }

    /// `(γ̄, F(γ̄))` in colex order of `γ̄`.
    pub fn iter(&self) -> impl Iterator<Item = (ElemSet, ElemSet)> + '_ {
        KSubsets::of(self.carrier.elements(), self.arity).zip(self.images.iter().copied())
    }

    /// The `(γ̄, F(γ̄))` pairs restricted to tuples inside `within`.
    pub fn iter_within(&self, within: ElemSet) -> impl Iterator<Item = (ElemSet, ElemSet)> + '_ {
        KSubsets::of(within, self.arity).map(move |t| (t, self.image(t)))
    }
}

pub(crate) fn check_arity(carrier: Carrier, k: usize) -> Result<()> {
    if k < 2 {
        return Err(Error::Domain(format!("arity must be at least 2, got {k}")));
    }
    if carrier.size() < k {
        return Err(Error::Domain(format!(
            "carrier of size {} has no {k}-subsets",
            carrier.size()
        )));
    }
    Ok(())
}

/// Whether `x` is ρ-close to `b` (`x ∉ b`, `|b| ≥ 2`).
pub fn rho_close(rho: &Rho, x: usize, b: ElemSet) -> Result<bool> {
    let carrier = rho.carrier();
    if !carrier.contains(x) || !b.is_subset(carrier.elements()) {
        return Err(Error::Domain("closeness arguments leave the carrier".into()));
    }
    if b.contains(x) {
        return Err(Error::Domain(format!("{x} belongs to {b:?}")));
    }
    if b.len() < 2 {
        return Err(Error::Domain(format!("{b:?} has fewer than two elements")));
    }
    Ok(close_unchecked(rho, x, b, rho.max_on(b).unwrap_or(0)))
}

#[inline]
fn close_unchecked(rho: &Rho, x: usize, b: ElemSet, pair_max: u32) -> bool {
    b.iter().all(|g| rho.get(x, g) <= pair_max)
}

/// The set mapping k-generated by `gamma`.
pub fn generate(gamma: &GammaFamily, k: usize) -> Result<SetMapping> {
    let carrier = gamma.carrier();
    check_arity(carrier, k)?;
    let mut maxima = vec![0u32; gamma.len()];
    let images = KSubsets::of(carrier.elements(), k)
        .map(|tuple| image_with(gamma, tuple, &mut maxima))
        .collect();
    Ok(SetMapping {
        carrier,
        arity: k,
        images,
    })
}

/// The single image `F(γ̄)` of the mapping generated by `gamma`.
pub fn generated_image(gamma: &GammaFamily, tuple: ElemSet) -> Result<ElemSet> {
    check_arity(gamma.carrier(), tuple.len())?;
    if !tuple.is_subset(gamma.carrier().elements()) {
        return Err(Error::Domain(format!("{tuple:?} is not inside the carrier")));
    }
    Ok(image_with(gamma, tuple, &mut vec![0u32; gamma.len()]))
}

fn image_with(gamma: &GammaFamily, tuple: ElemSet, maxima: &mut [u32]) -> ElemSet {
    for (slot, rho) in maxima.iter_mut().zip(gamma.rhos()) {
        *slot = rho.max_on(tuple).unwrap_or(0);
    }
    gamma
        .carrier()
        .elements()
        .difference(tuple)
        .iter()
        .filter(|&x| {
            gamma
                .rhos()
                .iter()
                .zip(maxima.iter())
                .all(|(rho, &mx)| close_unchecked(rho, x, tuple, mx))
        })
        .collect()
}

/// `Γ|_B`, re-indexed onto `0..|B|`.
pub fn restrict(gamma: &GammaFamily, b: ElemSet) -> Result<Restriction> {
    if b.len() < 2 {
        return Err(Error::Domain(format!(
            "restriction needs at least two points, got {b:?}"
        )));
    }
    let rhos = gamma
        .rhos()
        .iter()
        .map(|r| r.restrict(b))
        .collect::<Result<Vec<_>>>()?;
    Ok(Restriction {
        family: GammaFamily::new(rhos)?,
        embedding: b.to_vec(),
    })
}

/// `|F(γ̄)| < cap` for every `γ̄`.
pub fn image_cap_ok(f: &SetMapping, cap: usize) -> bool {
    f.images.iter().all(|img| img.len() < cap)
}
