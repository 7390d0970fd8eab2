//! The standard and exact Courant algebroids on T*[2]T[1]ℝᵈ.

mod courant;
mod forms;
mod poisson;

pub use courant::{
    canonical_omega, de_rham_field, gauge_exp, half_d_iota_iota_kappa, lie_iota_kappa, maurer_cartan_check,
    nq_morphism_check, psi_kappa, standard_q, three_d_kappa_xi_xi_dx, transformed_symplectic, twist,
    twist_unchecked, x_beta, x_kappa, GaugeSeries, MaurerCartanReport, NqReport, PhaseChart,
    TransformedSymplectic, GAUGE_SERIES_CAP,
};
pub use forms::{BaseForm, ClosedThreeForm, TwoFormOnM};
pub use poisson::{hamiltonian_vf, poisson};
