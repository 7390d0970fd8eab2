//! The flat local symplectic 2-groupoid over ℝᵈ.

mod chart;
mod forms;
mod numeric;

pub use chart::{GroupoidChart, MAX_CHART_LEVEL};
pub use forms::{
    alpha, alpha_certificate, cube_symplectic, face_pullback, fiber_integral, mu, mu_of_form, omega_t,
    stokes_check, twisted_form, two_form_components, varkappa, varkappa_report, AlphaCertificate, StokesReport,
    TwistedForm, VarkappaReport,
};
pub use numeric::{adaptive_simpson, mu_quadrature_error};
