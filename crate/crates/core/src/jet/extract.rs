use std::sync::Arc;

use crate::error::{Error, Result};
use crate::graded::{ChartScheme, Generator, Poly};
use crate::groupoid::{mu_of_form, omega_t, varkappa, GroupoidChart};
use crate::phase::{
    canonical_omega, half_d_iota_iota_kappa, lie_iota_kappa, three_d_kappa_xi_xi_dx, transformed_symplectic,
    ClosedThreeForm,
};
use crate::simplicial::{simplicial_d, FormCochain};

use super::ev::ev_family;

/// ev₂* of a level-2 form, its (2,0) part and the θ-free factor P with
/// (2,0) part = P·(θ₀θ₁ + θ₁θ₂ + θ₂θ₀).
#[derive(Clone, Debug)]
pub struct JetExtraction {
    pub pullback: Poly,
    pub part_2_0: Poly,
    /// P on the phase chart.
    pub jet: Poly,
}

/// θ₀θ₁ + θ₁θ₂ + θ₂θ₀ on `scheme`.
pub fn theta_pattern(scheme: &Arc<ChartScheme>) -> Poly {
    let t = |i| Poly::gen(scheme, Generator::theta(i));
    &(&(&t(0) * &t(1)) + &(&t(1) * &t(2))) + &(&t(2) * &t(0))
}

pub fn pullback_and_extract(chart: &GroupoidChart, form: &FormCochain) -> Result<JetExtraction> {
    if form.level() != 2 {
        return Err(Error::Invalid(format!("1-Jet extraction needs a level-2 form, got level {}", form.level())));
    }
    let ev = ev_family(chart, 2)?;
    let pullback = ev.map().pullback(form.form())?;
    let scheme = pullback.scheme().clone();
    let part_2_0 = pullback.bihomogeneous_part(2, 0);
    let t0 = scheme.id(&Generator::theta(0)).expect("θ₀");
    let t1 = scheme.id(&Generator::theta(1)).expect("θ₁");
    let factor = part_2_0.left_coefficient(&[t0, t1])?;
    let has_theta = factor
        .support()
        .iter()
        .any(|&id| matches!(scheme.generator(id).family, crate::graded::Family::Theta));
    if has_theta {
        return Err(Error::Extraction(format!("θ₀θ₁-coefficient {factor} depends on θ")));
    }
    let rebuilt = &factor * &theta_pattern(&scheme);
    if rebuilt != part_2_0 {
        return Err(Error::Extraction(format!(
            "(2,0) part is not a multiple of θ₀θ₁ + θ₁θ₂ + θ₂θ₀; remainder {}",
            &part_2_0 - &rebuilt
        )));
    }
    let jet = factor.embed(&ChartScheme::phase(chart.dim()))?;
    Ok(JetExtraction { pullback, part_2_0, jet })
}

/// 1-Jet(ω_𝒯) against the canonical ω.
pub fn integration_theorem(chart: &GroupoidChart) -> Result<(JetExtraction, Poly)> {
    let e = pullback_and_extract(chart, &omega_t(chart)?)?;
    let residual = &e.jet - &canonical_omega(&ChartScheme::phase(chart.dim()));
    Ok((e, residual))
}

/// 1-Jet(ω_𝒯 − q_𝒯*ϰ) against ω − ℒ_{Q_dR}ι_{Q_dR}q_M*κ on the phase chart.
pub fn exact_theorem(chart: &GroupoidChart, kappa: &ClosedThreeForm) -> Result<(JetExtraction, Poly)> {
    let twisted = omega_t(chart)?.checked_sub(&varkappa(chart, kappa)?)?;
    let e = pullback_and_extract(chart, &twisted)?;
    let expected = transformed_symplectic(kappa)?.expected;
    let residual = &e.jet - &expected;
    Ok((e, residual))
}

/// As [`exact_theorem`] with ϰ = D∫Γ*κ for any 3-form, closed or not.
pub fn exact_theorem_unchecked(chart: &GroupoidChart, kappa: &ClosedThreeForm) -> Result<(JetExtraction, Poly)> {
    let vk = simplicial_d(chart, &mu_of_form(chart, kappa.form())?)?;
    let e = pullback_and_extract(chart, &omega_t(chart)?.checked_sub(&vk)?)?;
    let phase = ChartScheme::phase(chart.dim());
    let expected = &canonical_omega(&phase) - &lie_iota_kappa(kappa)?.embed(&phase)?;
    let residual = &e.jet - &expected;
    Ok((e, residual))
}

/// μ(ev(θ₀,θ₁)) as displayed in the proof:
/// κ_{[abc]}(3(θ₁−θ₀)ξ^a dx^b dx^c − 6θ₀θ₁ξ^a dξ^b dx^c) − 3∂_dκ_{[abc]}θ₀θ₁ξ^dξ^a dx^b dx^c.
pub fn mu_at_ev_formula(kappa: &ClosedThreeForm) -> Result<Poly> {
    let dim = kappa.dim();
    let s = ChartScheme::jet(dim, 1);
    let base = ChartScheme::base(dim);
    let g = |gen| Poly::gen(&s, gen);
    let (t0, t1) = (g(Generator::theta(0)), g(Generator::theta(1)));
    let t01 = &t0 * &t1;
    let three = Poly::constant(&s, crate::graded::integer(3));
    let six = Poly::constant(&s, crate::graded::integer(6));
    let mut out = Poly::zero(&s);
    for a in 1..=dim {
        for b in 1..=dim {
            for c in 1..=dim {
                let k = kappa.component(a, b, c);
                if k.is_zero() {
                    continue;
                }
                let kk = k.embed(&s)?;
                let (xa, dxb, dxc) = (g(Generator::xi(a)), g(Generator::x(b).d()), g(Generator::x(c).d()));
                let first = &(&three * &(&t1 - &t0)) * &(&(&xa * &dxb) * &dxc);
                let second = &(&six * &t01) * &(&(&xa * &g(Generator::xi(b).d())) * &dxc);
                out = &out + &(&kk * &(&first - &second));
                for d in 1..=dim {
                    let dk = k.partial(base.id(&Generator::x(d)).expect("x"));
                    if dk.is_zero() {
                        continue;
                    }
                    let term = &(&three * &t01) * &(&(&(&g(Generator::xi(d)) * &xa) * &dxb) * &dxc);
                    out = &out - &(&dk.embed(&s)? * &term);
                }
            }
        }
    }
    Ok(out)
}

/// Residuals of the three-way identity 1-Jet(ϰ̂) = ℒ_{Q_dR}ι_{Q_dR}κ = 3d(κ_{[abc]}ξ^aξ^bdx^c)
/// and of the intermediate expressions, all on the phase chart.
#[derive(Clone, Debug)]
pub struct LemmaReport {
    pub jet: Poly,
    pub lie_iota: Poly,
    pub three_d: Poly,
    pub half_d_iota_iota: Poly,
    /// dθ-free part of ev₁*μ minus the displayed formula.
    pub mu_at_ev_residual: Poly,
}

impl LemmaReport {
    pub fn residuals(&self) -> [(&'static str, Poly); 4] {
        [
            ("jet - lie_iota", &self.jet - &self.lie_iota),
            ("lie_iota - three_d", &self.lie_iota - &self.three_d),
            ("three_d - half_d_iota_iota", &self.three_d - &self.half_d_iota_iota),
            ("mu_at_ev", self.mu_at_ev_residual.clone()),
        ]
    }

    pub fn passed(&self) -> bool {
        self.residuals().iter().all(|(_, r)| r.is_zero())
    }
}

pub fn verify_lemma_varkappa(chart: &GroupoidChart, kappa: &ClosedThreeForm) -> Result<LemmaReport> {
    kappa.require_closed()?;
    verify_lemma_varkappa_unchecked(chart, kappa)
}

/// The same residuals without requiring dκ = 0; ϰ = D∫Γ*κ.
pub fn verify_lemma_varkappa_unchecked(chart: &GroupoidChart, kappa: &ClosedThreeForm) -> Result<LemmaReport> {
    let phase = ChartScheme::phase(chart.dim());
    let mu = mu_of_form(chart, kappa.form())?;
    let jet = pullback_and_extract(chart, &simplicial_d(chart, &mu)?)?.jet;
    let lie_iota = lie_iota_kappa(kappa)?.embed(&phase)?;
    let three_d = three_d_kappa_xi_xi_dx(kappa)?.embed(&phase)?;
    let half_d_iota_iota = half_d_iota_iota_kappa(kappa)?.embed(&phase)?;
    let ev1 = ev_family(chart, 1)?;
    let mu_at_ev = ev1.map().pullback(mu.form())?;
    let no_dtheta = mu_at_ev.filter(|m| {
        m.factors().iter().all(|&(id, _)| {
            let g = mu_at_ev.scheme().generator(id);
            !(g.differential && g.family == crate::graded::Family::Theta)
        })
    });
    let mu_at_ev_residual = &no_dtheta - &mu_at_ev_formula(kappa)?;
    Ok(LemmaReport { jet, lie_iota, three_d, half_d_iota_iota, mu_at_ev_residual })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn omega_integrates_to_canonical_form() {
        for d in 1..=2 {
            let (_, r) = integration_theorem(&GroupoidChart::new(d)).unwrap();
            assert!(r.is_zero(), "{r}");
        }
    }

    #[test]
    fn lemma_for_volume_form() {
        let k = ClosedThreeForm::constant_volume(3, 1).unwrap();
        let r = verify_lemma_varkappa(&GroupoidChart::new(3), &k).unwrap();
        for (name, res) in r.residuals() {
            assert!(res.is_zero(), "{name}: {res}");
        }
    }
}
