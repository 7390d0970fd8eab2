//! Differentiation of the 2-groupoid: maps E•ℝ^{0|1} → 𝒯*•ℝᵈ and the
//! 1-jets of multiplicative forms.

mod ev;
mod extension;
mod extract;

pub use ev::{
    check_simplicial, ev_family, ev_family_with, qflow_extract, theta_reindex, CompatibilityFailure, EvFamily,
    FiberCoefficients, QFlow, SimplicialCheckReport, LEVEL_CAP,
};
pub use extension::{
    extension_constraints, extension_ranks, extension_solve, Constraint, Extension, ExtensionRanks, Slot, SlotKind,
    ThetaMonomial, EXTENSION_LEVEL,
};
pub use extract::{
    exact_theorem, exact_theorem_unchecked, integration_theorem, mu_at_ev_formula, pullback_and_extract, theta_pattern,
    verify_lemma_varkappa, verify_lemma_varkappa_unchecked, JetExtraction, LemmaReport,
};
