use num_traits::Zero;

use super::chart::GroupoidChart;
use crate::error::{Error, Result};
use crate::graded::{de_rham_d, integer, rational, GenId, Generator, Monomial, Poly, Rational};
use crate::linalg::Matrix;
use crate::phase::{BaseForm, ClosedThreeForm};
use crate::simplicial::{is_multiplicative, simplicial_d, FormCochain, MonotoneMap, MultiplicativityReport, SimplicialChart};

/// Σ_k Σ_a du_{k,a} dy_k^a on (T*M)³.
pub fn cube_symplectic(chart: &GroupoidChart) -> Poly {
    let s = chart.cotangent_cube();
    let mut out = Poly::zero(s);
    for k in 0..3u8 {
        for a in 1..=chart.dim() {
            out = &out + &(&Poly::gen(s, Generator::covector(k, a).d()) * &Poly::gen(s, Generator::point(k, a).d()));
        }
    }
    out
}

/// ω_𝒯 = m̃*(Σ ω_{T*M}) on level 2.
pub fn omega_t(chart: &GroupoidChart) -> Result<FormCochain> {
    let pulled = chart.m_tilde()?.pullback(&cube_symplectic(chart))?;
    FormCochain::new(chart, 2, pulled)
}

/// α = q̃_{1/2}*ω_{T*M} = Σ dw₀₁ d((z₀+z₁)/2) on level 1.
pub fn alpha(chart: &GroupoidChart) -> Result<FormCochain> {
    let l1 = chart.level(1);
    let half = rational(1, 2);
    let mut out = Poly::zero(l1);
    for a in 1..=chart.dim() {
        let mid = (&chart.z(1, 0, a) + &chart.z(1, 1, a)).scale(&half);
        let dw = de_rham_d(&chart.w(1, 0, 1, a))?;
        out = &out + &(&dw * &de_rham_d(&mid)?);
    }
    FormCochain::new(chart, 1, out)
}

/// Dα = ω_𝒯 together with D²α = 0.
#[derive(Clone, Debug)]
pub struct AlphaCertificate {
    pub alpha: FormCochain,
    pub d_alpha: FormCochain,
    pub omega: FormCochain,
    pub dd_alpha: FormCochain,
}

impl AlphaCertificate {
    pub fn residual(&self) -> Poly {
        self.d_alpha.form() - self.omega.form()
    }

    pub fn passed(&self) -> bool {
        self.residual().is_zero() && self.dd_alpha.is_zero()
    }
}

pub fn alpha_certificate(chart: &GroupoidChart) -> Result<AlphaCertificate> {
    let alpha = alpha(chart)?;
    let d_alpha = simplicial_d(chart, &alpha)?;
    let dd_alpha = simplicial_d(chart, &d_alpha)?;
    Ok(AlphaCertificate { alpha, d_alpha, omega: omega_t(chart)?, dd_alpha })
}

/// ∫₀¹ (dt-coefficient) dt of a form on [0,1] × level 1, as a form on level 1.
pub fn fiber_integral(chart: &GroupoidChart, form: &Poly) -> Result<Poly> {
    let s = chart.interval();
    let t = s.id(&Generator::time()).expect("interval chart has t");
    let dt = s.id(&Generator::time().d()).expect("interval chart has dt");
    let (a, _) = form.split_off(dt)?;
    let mut integrated = Poly::zero(s);
    for (m, c) in a.terms() {
        let e = m.exponent(t);
        let rest: Vec<(GenId, u16)> = m.factors().iter().copied().filter(|&(id, _)| id != t).collect();
        let c = c / integer(e as i64 + 1);
        integrated.add_term(Monomial::from_sorted(rest), c);
    }
    integrated.embed(chart.level(1))
}

/// μ = ∫_fibre Γ*κ on level 1.
pub fn mu(chart: &GroupoidChart, kappa: &ClosedThreeForm) -> Result<FormCochain> {
    kappa.require_closed()?;
    mu_of_form(chart, kappa.form())
}

/// Fibre integral of Γ*τ for any form τ on M; no closedness check.
pub fn mu_of_form(chart: &GroupoidChart, tau: &BaseForm) -> Result<FormCochain> {
    check_dim(chart, tau.dim())?;
    let pulled = chart.geodesic()?.pullback(tau.poly())?;
    FormCochain::new(chart, 1, fiber_integral(chart, &pulled)?)
}

fn check_dim(chart: &GroupoidChart, dim: u8) -> Result<()> {
    if dim != chart.dim() {
        return Err(Error::Invalid(format!("form on R^{dim} used on the R^{} groupoid", chart.dim())));
    }
    Ok(())
}

/// d_i^*τ on level 1 for a form τ on M.
pub fn face_pullback(chart: &GroupoidChart, tau: &BaseForm, i: u8) -> Result<Poly> {
    let at0 = chart.base_to_level0()?.pullback(tau.poly())?;
    chart.pullback_along(&MonotoneMap::coface(0, i), &at0)
}

/// dμ against the face pullbacks of τ and the correction −∫Γ*dτ.
#[derive(Clone, Debug)]
pub struct StokesReport {
    pub d_mu: Poly,
    /// d₁*τ − d₀*τ.
    pub face_difference: Poly,
    /// −∫_fibre Γ*dτ.
    pub correction: Poly,
}

impl StokesReport {
    /// dμ − (d₁*τ − d₀*τ).
    pub fn printed_residual(&self) -> Poly {
        &self.d_mu - &self.face_difference
    }

    /// dμ − (d₁*τ − d₀*τ) − correction.
    pub fn corrected_residual(&self) -> Poly {
        &self.printed_residual() - &self.correction
    }

    /// dμ − (d₀*τ − d₁*τ) − correction.
    pub fn reversed_residual(&self) -> Poly {
        &(&self.d_mu + &self.face_difference) - &self.correction
    }
}

pub fn stokes_check(chart: &GroupoidChart, tau: &BaseForm) -> Result<StokesReport> {
    let mu = mu_of_form(chart, tau)?;
    let d_mu = de_rham_d(mu.form())?;
    let face_difference = &face_pullback(chart, tau, 1)? - &face_pullback(chart, tau, 0)?;
    let d_tau = tau.d();
    let correction = -mu_of_form(chart, &d_tau)?.form().clone();
    Ok(StokesReport { d_mu, face_difference, correction })
}

/// ϰ = Dμ on level 2.
pub fn varkappa(chart: &GroupoidChart, kappa: &ClosedThreeForm) -> Result<FormCochain> {
    simplicial_d(chart, &mu(chart, kappa)?)
}

/// Dϰ, dϰ and the multiplicativity report of ϰ.
#[derive(Clone, Debug)]
pub struct VarkappaReport {
    pub varkappa: FormCochain,
    pub d_varkappa: Poly,
    pub multiplicativity: MultiplicativityReport,
}

impl VarkappaReport {
    pub fn passed(&self) -> bool {
        self.d_varkappa.is_zero() && self.multiplicativity.passed()
    }
}

pub fn varkappa_report(chart: &GroupoidChart, kappa: &ClosedThreeForm) -> Result<VarkappaReport> {
    let varkappa = varkappa(chart, kappa)?;
    let d_varkappa = de_rham_d(varkappa.form())?;
    let multiplicativity = is_multiplicative(chart, &varkappa)?;
    Ok(VarkappaReport { varkappa, d_varkappa, multiplicativity })
}

/// ω_𝒯 − q_𝒯*ϰ with a structural non-degeneracy certificate.
#[derive(Clone, Debug)]
pub struct TwistedForm {
    pub form: FormCochain,
    /// dw ∧ dw coefficients vanish.
    pub fiber_block_zero: bool,
    /// Coefficients of dw_{ij,a} dz_k^b; rows fibres, columns vertices.
    pub mixed_block: Option<Matrix>,
    pub mixed_determinant: Rational,
}

impl TwistedForm {
    /// det of the full coefficient matrix, ±(det of the mixed block)².
    pub fn determinant_magnitude(&self) -> Rational {
        &self.mixed_determinant * &self.mixed_determinant
    }

    pub fn nondegenerate(&self) -> bool {
        self.fiber_block_zero && self.mixed_block.is_some() && !self.mixed_determinant.is_zero()
    }
}

/// Coefficient c in ω = … + c·dg·dh + …, for differentials dg ≠ dh.
fn pair_coefficient(form: &Poly, dg: GenId, dh: GenId) -> Result<Poly> {
    let scheme = form.scheme().clone();
    let c = form.filter(|m| m.exponent(dg) == 1 && m.exponent(dh) == 1).left_coefficient(&[dg, dh])?;
    Ok(c.filter(|m| m.factors().iter().all(|&(id, _)| !scheme.generator(id).differential)))
}

pub fn twisted_form(chart: &GroupoidChart, kappa: &ClosedThreeForm) -> Result<TwistedForm> {
    let omega = omega_t(chart)?;
    let vk = varkappa(chart, kappa)?;
    let form = omega.checked_sub(&vk)?;
    let s = chart.level(2).clone();
    let mut fibers = Vec::new();
    let mut vertices = Vec::new();
    for (id, g) in s.coordinates() {
        let did = s.differential_of(id).expect("level charts carry differentials");
        match g.family {
            crate::graded::Family::Fiber => fibers.push(did),
            _ => vertices.push(did),
        }
    }
    let mut fiber_block_zero = true;
    for (i, &f) in fibers.iter().enumerate() {
        for &g in &fibers[i + 1..] {
            if !pair_coefficient(form.form(), f, g)?.is_zero() {
                fiber_block_zero = false;
            }
        }
    }
    let mut rows = Vec::new();
    let mut constant = true;
    for &f in &fibers {
        let mut row = Vec::new();
        for &v in &vertices {
            let c = pair_coefficient(form.form(), f, v)?;
            if c.len() > 1 || (c.len() == 1 && c.constant_term().is_zero()) {
                constant = false;
            }
            row.push(c.constant_term());
        }
        rows.push(row);
    }
    let (mixed_block, mixed_determinant) = if constant && fibers.len() == vertices.len() {
        let m = Matrix::from_rows(rows);
        let det = m.determinant();
        (Some(m), det)
    } else {
        (None, Rational::zero())
    };
    Ok(TwistedForm { form, fiber_block_zero, mixed_block, mixed_determinant })
}

/// Components of a 2-form on level 1 along (dz_i^a, dz_j^b), keyed by the
/// pair of differentials in canonical order.
pub fn two_form_components(form: &Poly) -> Result<Vec<((Generator, Generator), Poly)>> {
    let s = form.scheme().clone();
    let diffs: Vec<GenId> = (0..s.len() as GenId).filter(|&id| s.generator(id).differential).collect();
    let mut out = Vec::new();
    for (i, &a) in diffs.iter().enumerate() {
        for &b in &diffs[i + 1..] {
            let c = pair_coefficient(form, a, b)?;
            if !c.is_zero() {
                out.push(((s.generator(a), s.generator(b)), c));
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graded::parse;

    #[test]
    fn omega_in_one_dimension() {
        let g = GroupoidChart::new(1);
        let l2 = g.level(2);
        let expected = parse(
            l2,
            "1/2*dw01_1*(dz0_1 + dz1_1) + 1/2*dw12_1*(dz1_1 + dz2_1) - 1/2*dw02_1*(dz2_1 + dz0_1)",
        )
        .unwrap();
        assert_eq!(omega_t(&g).unwrap().form(), &expected);
    }

    #[test]
    fn alpha_certifies_omega() {
        for d in 1..=2 {
            assert!(alpha_certificate(&GroupoidChart::new(d)).unwrap().passed());
        }
    }

    #[test]
    fn stokes_for_volume_form() {
        let g = GroupoidChart::new(3);
        let k = ClosedThreeForm::constant_volume(3, 1).unwrap();
        let r = stokes_check(&g, k.form()).unwrap();
        assert!(r.correction.is_zero());
        assert!(r.reversed_residual().is_zero());
    }

    #[test]
    fn twisted_form_is_nondegenerate() {
        let g = GroupoidChart::new(3);
        let k = ClosedThreeForm::constant_volume(3, 1).unwrap();
        let t = twisted_form(&g, &k).unwrap();
        assert!(t.nondegenerate());
    }
}
