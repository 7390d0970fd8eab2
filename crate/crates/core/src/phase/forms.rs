use std::fmt;
use std::sync::Arc;

use num_traits::One;

use crate::error::{Error, Result};
use crate::graded::{de_rham_d, rational, ChartScheme, CoordinateMap, Family, Generator, Poly};

/// A differential k-form on M = ℝᵈ with polynomial coefficients, stored on
/// the base chart (x^a, dx^a).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BaseForm {
    dim: u8,
    degree: u8,
    poly: Poly,
}

impl BaseForm {
    pub fn zero(dim: u8, degree: u8) -> Self {
        BaseForm { dim, degree, poly: Poly::zero(&ChartScheme::base(dim)) }
    }

    /// Σ coeff · dx^{i₁}⋯dx^{i_k}. Coefficients are functions of x on the
    /// base chart; index order is respected up to sign.
    pub fn from_terms(dim: u8, degree: u8, terms: &[(Vec<u8>, Poly)]) -> Result<Self> {
        let scheme = ChartScheme::base(dim);
        let mut poly = Poly::zero(&scheme);
        for (indices, coeff) in terms {
            if indices.len() != degree as usize {
                return Err(Error::Invalid(format!(
                    "{degree}-form term needs {degree} indices, got {}",
                    indices.len()
                )));
            }
            let coeff = coeff.embed(&scheme)?;
            if coeff.support().iter().any(|&id| scheme.generator(id).differential) {
                return Err(Error::Invalid(format!("coefficient {coeff} contains differentials")));
            }
            let mut term = coeff;
            for &a in indices {
                if a == 0 || a > dim {
                    return Err(Error::Invalid(format!("index {a} out of range 1..={dim}")));
                }
                term = &term * &Poly::gen(&scheme, Generator::x(a).d());
            }
            poly = &poly + &term;
        }
        Ok(BaseForm { dim, degree, poly })
    }

    /// Wraps a polynomial on the base chart, checking its form degree.
    pub fn from_poly(degree: u8, poly: Poly) -> Result<Self> {
        let scheme = poly.scheme().clone();
        let dim = scheme.dim();
        if *scheme != *ChartScheme::base(dim) {
            return Err(Error::Invalid(format!("{} is not a base chart", scheme.name())));
        }
        if let Some(g) = poly.grading()? {
            if g.form != degree as u32 {
                return Err(Error::Degree(format!("{poly} is not a {degree}-form")));
            }
        }
        Ok(BaseForm { dim, degree, poly })
    }

    pub fn dim(&self) -> u8 {
        self.dim
    }

    pub fn degree(&self) -> u8 {
        self.degree
    }

    pub fn poly(&self) -> &Poly {
        &self.poly
    }

    pub fn is_zero(&self) -> bool {
        self.poly.is_zero()
    }

    pub fn d(&self) -> BaseForm {
        let poly = de_rham_d(&self.poly).expect("base charts declare all differentials");
        BaseForm { dim: self.dim, degree: self.degree + 1, poly }
    }

    pub fn is_closed(&self) -> bool {
        self.d().is_zero()
    }

    /// Largest polynomial degree of a coefficient.
    pub fn coefficient_degree(&self) -> u32 {
        self.poly.max_family_degree(Family::X)
    }

    pub fn scale(&self, c: &crate::graded::Rational) -> BaseForm {
        BaseForm { dim: self.dim, degree: self.degree, poly: self.poly.scale(c) }
    }

    pub fn checked_sub(&self, other: &BaseForm) -> Result<BaseForm> {
        if self.degree != other.degree {
            return Err(Error::Degree("forms of different degrees".into()));
        }
        Ok(BaseForm { dim: self.dim, degree: self.degree, poly: self.poly.checked_sub(&other.poly)? })
    }

    pub fn checked_add(&self, other: &BaseForm) -> Result<BaseForm> {
        if self.degree != other.degree {
            return Err(Error::Degree("forms of different degrees".into()));
        }
        Ok(BaseForm { dim: self.dim, degree: self.degree, poly: self.poly.checked_add(&other.poly)? })
    }

    /// The antisymmetrized component τ_{[a₁…a_k]} as a function of x.
    pub fn component(&self, indices: &[u8]) -> Poly {
        let scheme = self.poly.scheme().clone();
        assert_eq!(indices.len(), self.degree as usize, "component arity");
        let mut sorted = indices.to_vec();
        let mut sign = 1i64;
        for i in 0..sorted.len() {
            for j in 0..sorted.len() - 1 - i {
                if sorted[j] > sorted[j + 1] {
                    sorted.swap(j, j + 1);
                    sign = -sign;
                }
            }
        }
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Poly::zero(&scheme);
        }
        let ids: Vec<_> = sorted.iter().map(|&a| scheme.id(&Generator::x(a).d()).expect("dx")).collect();
        let coeff = self.poly.filter(|m| ids.iter().all(|&id| m.exponent(id) == 1));
        let mut out = coeff.left_coefficient(&ids).expect("exponent one");
        out = out.filter(|m| m.factors().iter().all(|&(id, _)| !scheme.generator(id).differential));
        let fact: i64 = (1..=self.degree as i64).product();
        out.scale(&rational(sign, fact))
    }

    /// q*: the function on a chart containing x and ξ obtained by dx ↦ ξ.
    pub fn as_function(&self, target: &Arc<ChartScheme>) -> Result<Poly> {
        let src = self.poly.scheme();
        let mut images = Vec::new();
        for a in 1..=self.dim {
            images.push((Generator::x(a), Poly::try_gen(target, Generator::x(a))?));
            images.push((Generator::x(a).d(), Poly::try_gen(target, Generator::xi(a))?));
        }
        CoordinateMap::substitution(src, target, images)?.pullback(&self.poly)
    }

    /// The same form on a chart containing x and dx (pullback along a
    /// projection).
    pub fn pulled_to(&self, target: &Arc<ChartScheme>) -> Result<Poly> {
        self.poly.embed(target)
    }
}

impl fmt::Display for BaseForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.poly)
    }
}

/// Background 3-form κ. Closedness is verified unless built unchecked.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClosedThreeForm {
    form: BaseForm,
    closed: bool,
}

impl ClosedThreeForm {
    pub fn new(form: BaseForm) -> Result<Self> {
        if form.degree() != 3 {
            return Err(Error::Degree(format!("expected a 3-form, got degree {}", form.degree())));
        }
        let d = form.d();
        if !d.is_zero() {
            return Err(Error::NotClosed { residual: d.to_string() });
        }
        Ok(ClosedThreeForm { form, closed: true })
    }

    /// Skips the closedness check; used for negative tests.
    pub fn unchecked(form: BaseForm) -> Result<Self> {
        if form.degree() != 3 {
            return Err(Error::Degree(format!("expected a 3-form, got degree {}", form.degree())));
        }
        let closed = form.is_closed();
        Ok(ClosedThreeForm { form, closed })
    }

    pub fn zero(dim: u8) -> Self {
        ClosedThreeForm { form: BaseForm::zero(dim, 3), closed: true }
    }

    pub fn from_terms(dim: u8, terms: &[(Vec<u8>, Poly)]) -> Result<Self> {
        Self::new(BaseForm::from_terms(dim, 3, terms)?)
    }

    /// κ = dx¹dx²dx³ scaled by `c`, on ℝᵈ with d ≥ 3.
    pub fn constant_volume(dim: u8, c: i64) -> Result<Self> {
        let s = ChartScheme::base(dim);
        Self::from_terms(dim, &[(vec![1, 2, 3], Poly::constant(&s, rational(c, 1)))])
    }

    pub fn form(&self) -> &BaseForm {
        &self.form
    }

    pub fn dim(&self) -> u8 {
        self.form.dim()
    }

    pub fn is_closed(&self) -> bool {
        self.closed
    }

    pub fn require_closed(&self) -> Result<()> {
        if self.closed {
            Ok(())
        } else {
            Err(Error::NotClosed { residual: self.form.d().to_string() })
        }
    }

    /// κ_{[abc]}.
    pub fn component(&self, a: u8, b: u8, c: u8) -> Poly {
        self.form.component(&[a, b, c])
    }

    pub fn neg(&self) -> Self {
        ClosedThreeForm { form: self.form.scale(&-crate::graded::Rational::one()), closed: self.closed }
    }

    pub fn checked_sub(&self, other: &ClosedThreeForm) -> Result<Self> {
        let form = self.form.checked_sub(&other.form)?;
        let closed = form.is_closed();
        Ok(ClosedThreeForm { form, closed })
    }
}

impl fmt::Display for ClosedThreeForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.form)
    }
}

/// 2-form β on M; no closedness requirement.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwoFormOnM {
    form: BaseForm,
}

impl TwoFormOnM {
    pub fn new(form: BaseForm) -> Result<Self> {
        if form.degree() != 2 {
            return Err(Error::Degree(format!("expected a 2-form, got degree {}", form.degree())));
        }
        Ok(TwoFormOnM { form })
    }

    pub fn zero(dim: u8) -> Self {
        TwoFormOnM { form: BaseForm::zero(dim, 2) }
    }

    pub fn from_terms(dim: u8, terms: &[(Vec<u8>, Poly)]) -> Result<Self> {
        Self::new(BaseForm::from_terms(dim, 2, terms)?)
    }

    pub fn form(&self) -> &BaseForm {
        &self.form
    }

    pub fn dim(&self) -> u8 {
        self.form.dim()
    }

    /// β_{[ab]}.
    pub fn component(&self, a: u8, b: u8) -> Poly {
        self.form.component(&[a, b])
    }

    /// dβ as a background 3-form (always closed).
    pub fn d(&self) -> ClosedThreeForm {
        ClosedThreeForm { form: self.form.d(), closed: true }
    }
}

impl fmt::Display for TwoFormOnM {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.form)
    }
}
