use std::sync::Arc;

use num_traits::One;

use super::forms::{ClosedThreeForm, TwoFormOnM};
use super::poisson::{hamiltonian_vf, poisson};
use crate::error::{Error, Result};
use crate::graded::{
    de_rham_d, integer, interior, lie, rational, same_scheme, ChartScheme, CoordinateMap, Derivation,
    Generator, Poly, Rational,
};

/// Hard cap on the number of terms of the gauge series.
pub const GAUGE_SERIES_CAP: usize = 5;

/// T*[2]T[1]ℝᵈ with its canonical symplectic form.
#[derive(Clone, Debug)]
pub struct PhaseChart {
    dim: u8,
    scheme: Arc<ChartScheme>,
    omega: Poly,
}

impl PhaseChart {
    pub fn new(dim: u8) -> Self {
        let scheme = ChartScheme::phase(dim);
        let omega = canonical_omega(&scheme);
        PhaseChart { dim, scheme, omega }
    }

    pub fn dim(&self) -> u8 {
        self.dim
    }

    pub fn scheme(&self) -> &Arc<ChartScheme> {
        &self.scheme
    }

    /// ω = dp_a dx^a + dη_a dξ^a.
    pub fn omega(&self) -> &Poly {
        &self.omega
    }

    /// Q = ξ^a ∂_{x^a} + p_a ∂_{η_a}.
    pub fn q(&self) -> Derivation {
        standard_q(&self.scheme)
    }
}

/// ω = dp_a dx^a + dη_a dξ^a on any chart containing the phase coordinates.
pub fn canonical_omega(scheme: &Arc<ChartScheme>) -> Poly {
    let mut omega = Poly::zero(scheme);
    for a in 1..=scheme.dim() {
        let g = |g: Generator| Poly::gen(scheme, g);
        omega = &omega + &(&g(Generator::p(a).d()) * &g(Generator::x(a).d()));
        omega = &omega + &(&g(Generator::eta(a).d()) * &g(Generator::xi(a).d()));
    }
    omega
}

/// Q on any chart containing the phase coordinates.
pub fn standard_q(scheme: &Arc<ChartScheme>) -> Derivation {
    let mut q = Derivation::zero(scheme, (0, 1));
    for a in 1..=scheme.dim() {
        let x = scheme.id(&Generator::x(a)).expect("x");
        let eta = scheme.id(&Generator::eta(a)).expect("eta");
        q.set(x, Poly::gen(scheme, Generator::xi(a))).expect("degree");
        q.set(eta, Poly::gen(scheme, Generator::p(a))).expect("degree");
    }
    q
}

/// The de Rham vector field ξ^a ∂_{x^a} on T[1]ℝᵈ.
pub fn de_rham_field(dim: u8) -> Derivation {
    let s = ChartScheme::tangent(dim);
    let mut q = Derivation::zero(&s, (0, 1));
    for a in 1..=dim {
        let x = s.id(&Generator::x(a)).expect("x");
        q.set(x, Poly::gen(&s, Generator::xi(a))).expect("degree");
    }
    q
}

/// Both terms of Q(q*κ) + ½{q*κ, q*κ}.
#[derive(Clone, Debug)]
pub struct MaurerCartanReport {
    pub q_term: Poly,
    pub bracket_term: Poly,
}

impl MaurerCartanReport {
    pub fn passed(&self) -> bool {
        self.q_term.is_zero() && self.bracket_term.is_zero()
    }

    /// Name of the first nonzero term.
    pub fn failing_term(&self) -> Option<&'static str> {
        if !self.q_term.is_zero() {
            Some("Q(q*kappa)")
        } else if !self.bracket_term.is_zero() {
            Some("1/2{q*kappa, q*kappa}")
        } else {
            None
        }
    }
}

pub fn maurer_cartan_check(kappa: &ClosedThreeForm) -> Result<MaurerCartanReport> {
    let chart = PhaseChart::new(kappa.dim());
    let qk = kappa.form().as_function(chart.scheme())?;
    let q_term = chart.q().apply(&qk)?;
    let bracket_term = poisson(&qk, &qk)?.scale(&rational(1, 2));
    Ok(MaurerCartanReport { q_term, bracket_term })
}

/// X_κ := {q*κ, ·} on the phase chart.
pub fn x_kappa(kappa: &ClosedThreeForm) -> Result<Derivation> {
    let chart = PhaseChart::new(kappa.dim());
    let h = kappa.form().as_function(chart.scheme())?;
    let x = hamiltonian_vf(&h)?;
    if x.is_zero() {
        return Ok(Derivation::zero(chart.scheme(), (0, 1)));
    }
    Ok(x)
}

/// Q_κ := Q + X_κ without checks.
pub fn twist_unchecked(kappa: &ClosedThreeForm) -> Result<Derivation> {
    let chart = PhaseChart::new(kappa.dim());
    chart.q().checked_add(&x_kappa(kappa)?)
}

/// Q_κ := Q + X_κ for closed κ, with [Q_κ, Q_κ] = 0 verified.
pub fn twist(kappa: &ClosedThreeForm) -> Result<Derivation> {
    kappa.require_closed()?;
    let q = twist_unchecked(kappa)?;
    let square = q.commutator(&q)?;
    if !square.is_zero() {
        return Err(Error::Invalid(format!("[Q_kappa, Q_kappa] = {square}")));
    }
    Ok(q)
}

/// X_β := {q*β, ·} on the phase chart.
pub fn x_beta(beta: &TwoFormOnM) -> Result<Derivation> {
    let chart = PhaseChart::new(beta.dim());
    let h = beta.form().as_function(chart.scheme())?;
    let x = hamiltonian_vf(&h)?;
    if x.is_zero() {
        return Ok(Derivation::zero(chart.scheme(), (0, 0)));
    }
    Ok(x)
}

/// Result of e^{ad X_β} applied to a homological field.
#[derive(Clone, Debug)]
pub struct GaugeSeries {
    pub result: Derivation,
    /// Index of the first vanishing term of Σ (1/k!) ad(X_β)^k.
    pub steps: usize,
}

pub fn gauge_exp(beta: &TwoFormOnM, dk: &Derivation) -> Result<GaugeSeries> {
    let xb = x_beta(beta)?;
    if !same_scheme(xb.scheme(), dk.scheme()) {
        return Err(Error::SchemeMismatch {
            left: xb.scheme().name().to_string(),
            right: dk.scheme().name().to_string(),
        });
    }
    let mut term = dk.clone();
    let mut result = dk.clone();
    for k in 1..=GAUGE_SERIES_CAP {
        term = xb.commutator(&term)?.scale(&(Rational::one() / integer(k as i64)));
        if term.is_zero() {
            return Ok(GaugeSeries { result, steps: k });
        }
        result = result.checked_add(&term)?;
    }
    Err(Error::SeriesCap { cap: GAUGE_SERIES_CAP })
}

/// ψ_κ: p_α ↦ p_α + 3κ_{[αbc]}ξ^bξ^c, identity on x, ξ, η.
pub fn psi_kappa(kappa: &ClosedThreeForm) -> Result<CoordinateMap> {
    kappa.require_closed()?;
    let d = kappa.dim();
    let chart = PhaseChart::new(d);
    let s = chart.scheme();
    let mut images = Vec::new();
    for alpha in 1..=d {
        let mut image = Poly::gen(s, Generator::p(alpha));
        for b in 1..=d {
            for c in 1..=d {
                let k = kappa.component(alpha, b, c);
                if k.is_zero() {
                    continue;
                }
                let xi = &Poly::gen(s, Generator::xi(b)) * &Poly::gen(s, Generator::xi(c));
                image = &image + &(&k.embed(s)? * &xi).scale(&integer(3));
            }
        }
        images.push((Generator::p(alpha), image));
    }
    CoordinateMap::new(s, s, images)
}

/// Per-generator residuals of φ*(D_tgt g) − D_src(φ*g).
#[derive(Clone, Debug)]
pub struct NqReport {
    pub residuals: Vec<(Generator, Poly)>,
}

impl NqReport {
    pub fn passed(&self) -> bool {
        self.residuals.is_empty()
    }
}

/// Checks that `phi` intertwines `d_tgt` (on the generators pulled back)
/// with `d_src` (on the chart they are pulled back to).
pub fn nq_morphism_check(phi: &CoordinateMap, d_src: &Derivation, d_tgt: &Derivation) -> Result<NqReport> {
    let mut residuals = Vec::new();
    for (id, g) in phi.source().coordinates() {
        let gen = Poly::from_id(phi.source(), id);
        let lhs = phi.pullback(&d_tgt.apply(&gen)?)?;
        let rhs = d_src.apply(&phi.pullback(&gen)?)?;
        let r = lhs.checked_sub(&rhs)?;
        if !r.is_zero() {
            residuals.push((g, r));
        }
    }
    Ok(NqReport { residuals })
}

/// ℒ_{Q_dR} ι_{Q_dR} q_M^*κ on the form chart of T[1]ℝᵈ.
pub fn lie_iota_kappa(kappa: &ClosedThreeForm) -> Result<Poly> {
    let qdr = de_rham_field(kappa.dim());
    let k = kappa.form().pulled_to(qdr.scheme())?;
    let i = interior(&qdr)?.apply(&k)?;
    lie(&qdr)?.apply(&i)
}

/// ½ d ι_{Q_dR} ι_{Q_dR} q_M^*κ on the form chart of T[1]ℝᵈ.
pub fn half_d_iota_iota_kappa(kappa: &ClosedThreeForm) -> Result<Poly> {
    let qdr = de_rham_field(kappa.dim());
    let iota = interior(&qdr)?;
    let k = kappa.form().pulled_to(qdr.scheme())?;
    Ok(de_rham_d(&iota.apply(&iota.apply(&k)?)?)?.scale(&rational(1, 2)))
}

/// 3 d(κ_{[abc]} ξ^a ξ^b dx^c) on the form chart of T[1]ℝᵈ.
pub fn three_d_kappa_xi_xi_dx(kappa: &ClosedThreeForm) -> Result<Poly> {
    let d = kappa.dim();
    let s = ChartScheme::tangent(d);
    let mut inner = Poly::zero(&s);
    for a in 1..=d {
        for b in 1..=d {
            for c in 1..=d {
                let k = kappa.component(a, b, c);
                if k.is_zero() {
                    continue;
                }
                let t = &(&k.embed(&s)? * &Poly::gen(&s, Generator::xi(a)))
                    * &(&Poly::gen(&s, Generator::xi(b)) * &Poly::gen(&s, Generator::x(c).d()));
                inner = &inner + &t;
            }
        }
    }
    Ok(de_rham_d(&inner)?.scale(&integer(3)))
}

/// Both evaluation paths of (ψ_κ^{-1})^*ω.
#[derive(Clone, Debug)]
pub struct TransformedSymplectic {
    /// Pullback of ω through ψ_{−κ}.
    pub pulled: Poly,
    /// ω − q^*ℒ_{Q_dR}ι_{Q_dR}q_M^*κ.
    pub expected: Poly,
    /// d of `pulled`.
    pub d_pulled: Poly,
}

impl TransformedSymplectic {
    pub fn passed(&self) -> bool {
        self.pulled == self.expected && self.d_pulled.is_zero()
    }
}

pub fn transformed_symplectic(kappa: &ClosedThreeForm) -> Result<TransformedSymplectic> {
    kappa.require_closed()?;
    let chart = PhaseChart::new(kappa.dim());
    let inverse = psi_kappa(&kappa.neg())?;
    let pulled = inverse.pullback(chart.omega())?;
    let correction = lie_iota_kappa(kappa)?.embed(chart.scheme())?;
    let expected = chart.omega().checked_sub(&correction)?;
    let d_pulled = de_rham_d(&pulled)?;
    Ok(TransformedSymplectic { pulled, expected, d_pulled })
}
