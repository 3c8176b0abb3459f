//! ρ-type colorings of triples and small arrow relations.

mod arrow;
mod types;

pub use arrow::{arrow_holds, verify_witness, ArrowOutcome, ColoringWitness, MAX_TUPLES};
pub use types::{
    claim3_applies, find_homogeneous, is_type_homogeneous, longest_descending_chain, rho_type,
    triple_cases, type_classes, type_color, verify_claim_3, verify_claim_4, CaseI, CaseII, CaseIII,
    ClaimVerdict, RhoType, RhoTypeVector, TripleCases,
};
