use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};

use super::generator::Generator;
use super::poly::{integer, Monomial, Poly, Rational};
use super::scheme::{same_scheme, ChartScheme, GenId};
use crate::error::{Error, Result};

/// Graded derivation of the algebra of a scheme, determined by its values
/// on generators.
///
/// The shift is (form degree, internal degree − θ-weight); the parity is
/// the parity of their sum.
#[derive(Clone, Debug)]
pub struct Derivation {
    scheme: Arc<ChartScheme>,
    shift: (i32, i32),
    action: BTreeMap<GenId, Poly>,
}

impl PartialEq for Derivation {
    fn eq(&self, other: &Self) -> bool {
        same_scheme(&self.scheme, &other.scheme) && self.shift == other.shift && self.action == other.action
    }
}

impl Eq for Derivation {}

impl Derivation {
    pub fn zero(scheme: &Arc<ChartScheme>, shift: (i32, i32)) -> Self {
        Derivation { scheme: scheme.clone(), shift, action: BTreeMap::new() }
    }

    /// Builds a derivation from generator values, checking schemes and
    /// degrees. Generators not listed are sent to zero.
    pub fn new(
        scheme: &Arc<ChartScheme>,
        shift: (i32, i32),
        action: impl IntoIterator<Item = (Generator, Poly)>,
    ) -> Result<Self> {
        let mut out = Self::zero(scheme, shift);
        for (g, value) in action {
            let id = scheme.id(&g).ok_or_else(|| Error::UnknownGenerator {
                name: g.to_string(),
                scheme: scheme.name().to_string(),
            })?;
            out.set(id, value)?;
        }
        Ok(out)
    }

    /// Sets the value on one generator.
    pub fn set(&mut self, id: GenId, value: Poly) -> Result<()> {
        if !same_scheme(&self.scheme, value.scheme()) {
            return Err(Error::SchemeMismatch {
                left: self.scheme.name().to_string(),
                right: value.scheme().name().to_string(),
            });
        }
        let g = self.scheme.generator(id);
        let (f, w) = Monomial::generator(id).grading(&self.scheme).weight();
        let expected = (f + self.shift.0, w + self.shift.1);
        if let Some(found) = value.weight()? {
            if found != expected {
                return Err(Error::Degree(format!(
                    "value {value} on {g} has weight {found:?}, expected {expected:?}"
                )));
            }
        }
        if value.is_zero() {
            self.action.remove(&id);
        } else {
            self.action.insert(id, value);
        }
        Ok(())
    }

    pub fn scheme(&self) -> &Arc<ChartScheme> {
        &self.scheme
    }

    pub fn shift(&self) -> (i32, i32) {
        self.shift
    }

    pub fn is_odd(&self) -> bool {
        (self.shift.0 + self.shift.1).rem_euclid(2) == 1
    }

    pub fn is_zero(&self) -> bool {
        self.action.is_empty()
    }

    /// Value on a generator (zero if unset).
    pub fn value(&self, id: GenId) -> Poly {
        self.action.get(&id).cloned().unwrap_or_else(|| Poly::zero(&self.scheme))
    }

    pub fn value_on(&self, g: Generator) -> Poly {
        match self.scheme.id(&g) {
            Some(id) => self.value(id),
            None => Poly::zero(&self.scheme),
        }
    }

    /// Nonzero generator values in canonical order.
    pub fn values(&self) -> impl Iterator<Item = (Generator, &Poly)> {
        self.action.iter().map(|(&id, p)| (self.scheme.generator(id), p))
    }

    fn check_scheme(&self, f: &Poly) -> Result<()> {
        if same_scheme(&self.scheme, f.scheme()) {
            Ok(())
        } else {
            Err(Error::SchemeMismatch {
                left: self.scheme.name().to_string(),
                right: f.scheme().name().to_string(),
            })
        }
    }

    /// Graded-Leibniz extension of the generator table.
    pub fn apply(&self, f: &Poly) -> Result<Poly> {
        self.check_scheme(f)?;
        let scheme = &self.scheme;
        let odd = self.is_odd();
        let mut out = Poly::zero(scheme);
        for (m, c) in f.terms() {
            let factors = m.factors();
            let mut left_odd = false;
            for (k, &(id, e)) in factors.iter().enumerate() {
                if let Some(value) = self.action.get(&id) {
                    let mut left = factors[..k].to_vec();
                    if e > 1 {
                        left.push((id, e - 1));
                    }
                    let right = &factors[k + 1..];
                    let mut coeff = c * integer(e as i64);
                    if odd && left_odd {
                        coeff = -coeff;
                    }
                    let l = Monomial::from_sorted(left);
                    let r = Monomial::from_sorted(right.to_vec());
                    accumulate_sandwich(&mut out, &l, value, &r, &coeff, scheme);
                }
                if scheme.is_odd(id) && e % 2 == 1 {
                    left_odd = !left_odd;
                }
            }
        }
        Ok(out)
    }

    /// Graded commutator [self, other], computed generator-wise.
    pub fn commutator(&self, other: &Derivation) -> Result<Derivation> {
        if !same_scheme(&self.scheme, &other.scheme) {
            return Err(Error::SchemeMismatch {
                left: self.scheme.name().to_string(),
                right: other.scheme.name().to_string(),
            });
        }
        let sign = if self.is_odd() && other.is_odd() { Rational::one() } else { -Rational::one() };
        let shift = (self.shift.0 + other.shift.0, self.shift.1 + other.shift.1);
        let mut out = Derivation::zero(&self.scheme, shift);
        for id in 0..self.scheme.len() as GenId {
            let a = self.apply(&other.value(id))?;
            let b = other.apply(&self.value(id))?;
            let v = &a + &b.scale(&sign);
            out.set(id, v)?;
        }
        Ok(out)
    }

    pub fn checked_add(&self, other: &Derivation) -> Result<Derivation> {
        self.combine(other, &Rational::one())
    }

    pub fn checked_sub(&self, other: &Derivation) -> Result<Derivation> {
        self.combine(other, &-Rational::one())
    }

    fn combine(&self, other: &Derivation, sign: &Rational) -> Result<Derivation> {
        if !same_scheme(&self.scheme, &other.scheme) {
            return Err(Error::SchemeMismatch {
                left: self.scheme.name().to_string(),
                right: other.scheme.name().to_string(),
            });
        }
        if self.shift != other.shift && !self.is_zero() && !other.is_zero() {
            return Err(Error::Degree(format!(
                "cannot add derivations of shifts {:?} and {:?}",
                self.shift, other.shift
            )));
        }
        let shift = if self.is_zero() { other.shift } else { self.shift };
        let mut out = Derivation { scheme: self.scheme.clone(), shift, action: self.action.clone() };
        for (&id, v) in &other.action {
            let sum = &out.value(id) + &v.scale(sign);
            out.set(id, sum)?;
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Rational) -> Derivation {
        if c.is_zero() {
            return Derivation::zero(&self.scheme, self.shift);
        }
        Derivation {
            scheme: self.scheme.clone(),
            shift: self.shift,
            action: self.action.iter().map(|(&id, v)| (id, v.scale(c))).collect(),
        }
    }

    /// Generator-wise differences `self(g) − other(g)` that are nonzero.
    pub fn residuals(&self, other: &Derivation) -> Result<Vec<(Generator, Poly)>> {
        if !same_scheme(&self.scheme, &other.scheme) {
            return Err(Error::SchemeMismatch {
                left: self.scheme.name().to_string(),
                right: other.scheme.name().to_string(),
            });
        }
        let mut out = Vec::new();
        for id in 0..self.scheme.len() as GenId {
            let r = &self.value(id) - &other.value(id);
            if !r.is_zero() {
                out.push((self.scheme.generator(id), r));
            }
        }
        Ok(out)
    }

    /// Same derivation on a larger scheme; new generators are sent to zero.
    pub fn embed(&self, target: &Arc<ChartScheme>) -> Result<Derivation> {
        let mut out = Derivation::zero(target, self.shift);
        for (g, v) in self.values() {
            let id = target.id(&g).ok_or_else(|| Error::UnknownGenerator {
                name: g.to_string(),
                scheme: target.name().to_string(),
            })?;
            out.set(id, v.embed(target)?)?;
        }
        Ok(out)
    }
}

fn accumulate_sandwich(
    out: &mut Poly,
    left: &Monomial,
    middle: &Poly,
    right: &Monomial,
    coeff: &Rational,
    scheme: &ChartScheme,
) {
    for (mm, mc) in middle.terms() {
        let Some((lm, s1)) = left.mul(mm, scheme) else { continue };
        let Some((full, s2)) = lm.mul(right, scheme) else { continue };
        let c = coeff * mc;
        out.add_term(full, if s1 ^ s2 { -c } else { c });
    }
}

impl fmt::Display for Derivation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.action.is_empty() {
            return f.write_str("0");
        }
        for (k, (g, v)) in self.values().enumerate() {
            if k > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{g} -> {v}")?;
        }
        Ok(())
    }
}
