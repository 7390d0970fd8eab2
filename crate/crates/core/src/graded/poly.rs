use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::generator::{Family, Generator};
use super::scheme::{same_scheme, ChartScheme, GenId};
use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn rational(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn integer(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Degrees of a homogeneous element.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Grading {
    pub form: u32,
    pub internal: u32,
    pub theta: u32,
}

impl Grading {
    pub fn parity(self) -> bool {
        (self.form + self.internal + self.theta) % 2 == 1
    }

    pub fn bidegree(self) -> (u32, u32) {
        (self.form, self.internal)
    }

    /// (form degree, internal degree − θ-weight): the degree that structure
    /// maps and derivations shift.
    pub fn weight(self) -> (i32, i32) {
        (self.form as i32, self.internal as i32 - self.theta as i32)
    }
}

/// A product of generators in canonical order. Odd generators occur at
/// most once.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<(GenId, u16)>);

impl Ord for Monomial {
    /// Graded lexicographic: fewer factors first, then by factor list.
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        let total = |m: &Monomial| m.0.iter().map(|&(_, e)| e as u32).sum::<u32>();
        total(self).cmp(&total(other)).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn generator(id: GenId) -> Self {
        Monomial(vec![(id, 1)])
    }

    /// Wraps a factor list that is already in canonical order.
    pub(crate) fn from_sorted(factors: Vec<(GenId, u16)>) -> Self {
        debug_assert!(factors.windows(2).all(|w| w[0].0 < w[1].0));
        Monomial(factors)
    }

    pub fn factors(&self) -> &[(GenId, u16)] {
        &self.0
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn exponent(&self, id: GenId) -> u16 {
        self.0
            .binary_search_by_key(&id, |&(g, _)| g)
            .map(|i| self.0[i].1)
            .unwrap_or(0)
    }

    pub fn grading(&self, scheme: &ChartScheme) -> Grading {
        let mut out = Grading { form: 0, internal: 0, theta: 0 };
        for &(id, e) in &self.0 {
            let g = scheme.generator(id);
            let e = e as u32;
            out.form += g.form_degree() as u32 * e;
            out.internal += g.internal_degree() as u32 * e;
            out.theta += g.theta_weight() as u32 * e;
        }
        out
    }

    pub fn is_odd(&self, scheme: &ChartScheme) -> bool {
        self.0.iter().filter(|&&(id, e)| scheme.is_odd(id) && e % 2 == 1).count() % 2 == 1
    }

    /// Canonical product `self · other`; `None` when an odd generator
    /// repeats, otherwise the product and whether the Koszul sign is −1.
    pub fn mul(&self, other: &Monomial, scheme: &ChartScheme) -> Option<(Monomial, bool)> {
        let mut negative = false;
        let odd_left: Vec<GenId> =
            self.0.iter().filter(|(id, _)| scheme.is_odd(*id)).map(|&(id, _)| id).collect();
        for &(h, _) in other.0.iter().filter(|(id, _)| scheme.is_odd(*id)) {
            if odd_left.binary_search(&h).is_ok() {
                return None;
            }
            let above = odd_left.len() - odd_left.partition_point(|&g| g < h);
            negative ^= above % 2 == 1;
        }
        let mut out = Vec::with_capacity(self.0.len() + other.0.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            let (a, ea) = self.0[i];
            let (b, eb) = other.0[j];
            match a.cmp(&b) {
                std::cmp::Ordering::Less => {
                    out.push((a, ea));
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push((b, eb));
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    out.push((a, ea + eb));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.0[i..]);
        out.extend_from_slice(&other.0[j..]);
        Some((Monomial(out), negative))
    }

    /// Removes one factor of `id`; returns the rest and whether moving that
    /// factor to the front costs a sign.
    pub(crate) fn remove_front(&self, id: GenId, scheme: &ChartScheme) -> Option<(Monomial, bool)> {
        let pos = self.0.iter().position(|&(g, _)| g == id)?;
        let mut rest = self.0.clone();
        if rest[pos].1 == 1 {
            rest.remove(pos);
        } else {
            rest[pos].1 -= 1;
        }
        let negative = scheme.is_odd(id)
            && self.0[..pos].iter().filter(|&&(g, e)| scheme.is_odd(g) && e % 2 == 1).count() % 2
                == 1;
        Some((Monomial(rest), negative))
    }
}

/// Exact-rational element of the free graded-commutative algebra of a
/// [`ChartScheme`].
#[derive(Clone, Debug)]
pub struct Poly {
    scheme: Arc<ChartScheme>,
    terms: BTreeMap<Monomial, Rational>,
}

impl PartialEq for Poly {
    fn eq(&self, other: &Self) -> bool {
        same_scheme(&self.scheme, &other.scheme) && self.terms == other.terms
    }
}

impl Eq for Poly {}

impl Poly {
    pub fn zero(scheme: &Arc<ChartScheme>) -> Self {
        Poly { scheme: scheme.clone(), terms: BTreeMap::new() }
    }

    pub fn constant(scheme: &Arc<ChartScheme>, c: Rational) -> Self {
        Self::term(scheme, Monomial::one(), c)
    }

    pub fn one(scheme: &Arc<ChartScheme>) -> Self {
        Self::constant(scheme, Rational::one())
    }

    pub fn term(scheme: &Arc<ChartScheme>, m: Monomial, c: Rational) -> Self {
        let mut p = Self::zero(scheme);
        p.add_term(m, c);
        p
    }

    pub fn from_id(scheme: &Arc<ChartScheme>, id: GenId) -> Self {
        Self::term(scheme, Monomial::generator(id), Rational::one())
    }

    pub fn try_gen(scheme: &Arc<ChartScheme>, g: Generator) -> Result<Self> {
        let id = scheme.id(&g).ok_or_else(|| Error::UnknownGenerator {
            name: g.to_string(),
            scheme: scheme.name().to_string(),
        })?;
        Ok(Self::from_id(scheme, id))
    }

    /// The generator `g` as a polynomial. Panics if `g` is not declared.
    pub fn gen(scheme: &Arc<ChartScheme>, g: Generator) -> Self {
        Self::try_gen(scheme, g).unwrap_or_else(|e| panic!("{e}"))
    }

    pub fn scheme(&self) -> &Arc<ChartScheme> {
        &self.scheme
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    /// The constant term.
    pub fn constant_term(&self) -> Rational {
        self.coefficient(&Monomial::one())
    }

    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn check_scheme(&self, other: &Poly) -> Result<()> {
        if same_scheme(&self.scheme, &other.scheme) {
            Ok(())
        } else {
            Err(Error::SchemeMismatch {
                left: self.scheme.name().to_string(),
                right: other.scheme.name().to_string(),
            })
        }
    }

    pub fn checked_add(&self, other: &Poly) -> Result<Poly> {
        self.check_scheme(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Poly) -> Result<Poly> {
        self.check_scheme(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c.clone());
        }
        Ok(out)
    }

    pub fn checked_mul(&self, other: &Poly) -> Result<Poly> {
        self.check_scheme(other)?;
        let mut out = Poly::zero(&self.scheme);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                if let Some((m, negative)) = m1.mul(m2, &self.scheme) {
                    let c = c1 * c2;
                    out.add_term(m, if negative { -c } else { c });
                }
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        if c.is_zero() {
            return Poly::zero(&self.scheme);
        }
        Poly {
            scheme: self.scheme.clone(),
            terms: self.terms.iter().map(|(m, k)| (m.clone(), k * c)).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut out = Poly::one(&self.scheme);
        for _ in 0..e {
            out = &out * self;
        }
        out
    }

    /// Common degrees of all terms; `None` for the zero polynomial, which
    /// is homogeneous of every degree.
    pub fn grading(&self) -> Result<Option<Grading>> {
        let mut found: Option<Grading> = None;
        for m in self.terms.keys() {
            let g = m.grading(&self.scheme);
            match found {
                None => found = Some(g),
                Some(h) if h != g => {
                    return Err(Error::Inhomogeneous(format!(
                        "{self} mixes degrees {:?} and {:?}",
                        h.bidegree(),
                        g.bidegree()
                    )))
                }
                _ => {}
            }
        }
        Ok(found)
    }

    /// (form degree, internal degree) of a homogeneous polynomial.
    pub fn bidegree(&self) -> Result<Option<(u32, u32)>> {
        Ok(self.grading()?.map(Grading::bidegree))
    }

    /// Common [`Grading::weight`] of all terms; `None` for zero.
    pub fn weight(&self) -> Result<Option<(i32, i32)>> {
        let mut found = None;
        for m in self.terms.keys() {
            let w = m.grading(&self.scheme).weight();
            match found {
                None => found = Some(w),
                Some(v) if v != w => {
                    return Err(Error::Inhomogeneous(format!("{self} mixes weights {v:?} and {w:?}")))
                }
                _ => {}
            }
        }
        Ok(found)
    }

    /// Total parity; `None` for zero. Errors if terms disagree.
    pub fn parity(&self) -> Result<Option<bool>> {
        let mut found = None;
        for m in self.terms.keys() {
            let p = m.is_odd(&self.scheme);
            match found {
                None => found = Some(p),
                Some(q) if q != p => {
                    return Err(Error::Inhomogeneous(format!("{self} mixes parities")))
                }
                _ => {}
            }
        }
        Ok(found)
    }

    /// Terms with exactly `fd` differentials of coordinates and `td`
    /// differentials of θ-parameters.
    pub fn bihomogeneous_part(&self, fd: u32, td: u32) -> Poly {
        self.filter(|m| self.differential_counts(m) == (fd, td))
    }

    /// All bihomogeneous parts keyed by (coordinate-, θ-differential count).
    pub fn bihomogeneous_parts(&self) -> BTreeMap<(u32, u32), Poly> {
        let mut out: BTreeMap<(u32, u32), Poly> = BTreeMap::new();
        for (m, c) in &self.terms {
            out.entry(self.differential_counts(m))
                .or_insert_with(|| Poly::zero(&self.scheme))
                .add_term(m.clone(), c.clone());
        }
        out
    }

    fn differential_counts(&self, m: &Monomial) -> (u32, u32) {
        let (mut fd, mut td) = (0, 0);
        for &(id, e) in m.factors() {
            let g = self.scheme.generator(id);
            if g.differential {
                if matches!(g.family, Family::Theta | Family::Flow) {
                    td += e as u32;
                } else {
                    fd += e as u32;
                }
            }
        }
        (fd, td)
    }

    pub fn filter(&self, keep: impl Fn(&Monomial) -> bool) -> Poly {
        Poly {
            scheme: self.scheme.clone(),
            terms: self.terms.iter().filter(|(m, _)| keep(m)).map(|(m, c)| (m.clone(), c.clone())).collect(),
        }
    }

    /// Writes `self = g·a + b` with `b` free of `g` and returns `(a, b)`.
    /// Errors if `g` occurs with exponent above one.
    pub fn split_off(&self, id: GenId) -> Result<(Poly, Poly)> {
        let mut a = Poly::zero(&self.scheme);
        let mut b = Poly::zero(&self.scheme);
        for (m, c) in &self.terms {
            match m.exponent(id) {
                0 => b.add_term(m.clone(), c.clone()),
                1 => {
                    let (rest, negative) = m.remove_front(id, &self.scheme).expect("factor present");
                    a.add_term(rest, if negative { -c.clone() } else { c.clone() });
                }
                _ => {
                    return Err(Error::Invalid(format!(
                        "{} occurs with exponent above one",
                        self.scheme.generator(id)
                    )))
                }
            }
        }
        Ok((a, b))
    }

    /// The `a` with `self = g₁⋯g_k·a + (terms missing some g_i)`.
    pub fn left_coefficient(&self, ids: &[GenId]) -> Result<Poly> {
        let mut cur = self.clone();
        for &id in ids {
            cur = cur.split_off(id)?.0;
        }
        Ok(cur)
    }

    /// Left partial derivative ∂/∂g.
    pub fn partial(&self, id: GenId) -> Poly {
        let mut out = Poly::zero(&self.scheme);
        for (m, c) in &self.terms {
            let e = m.exponent(id);
            if e == 0 {
                continue;
            }
            let (rest, negative) = m.remove_front(id, &self.scheme).expect("factor present");
            let c = c * integer(e as i64);
            out.add_term(rest, if negative { -c } else { c });
        }
        out
    }

    /// Generators occurring in some term.
    pub fn support(&self) -> BTreeSet<GenId> {
        self.terms.keys().flat_map(|m| m.factors().iter().map(|&(id, _)| id)).collect()
    }

    /// Same polynomial read in another scheme that declares every
    /// generator used.
    pub fn embed(&self, target: &Arc<ChartScheme>) -> Result<Poly> {
        if same_scheme(&self.scheme, target) {
            return Ok(Poly { scheme: target.clone(), terms: self.terms.clone() });
        }
        let mut out = Poly::zero(target);
        for (m, c) in &self.terms {
            let mut acc = Monomial::one();
            let mut negative = false;
            for &(id, e) in m.factors() {
                let g = self.scheme.generator(id);
                let tid = target.id(&g).ok_or_else(|| Error::UnknownGenerator {
                    name: g.to_string(),
                    scheme: target.name().to_string(),
                })?;
                for _ in 0..e {
                    let (next, s) = acc.mul(&Monomial::generator(tid), target).expect("odd exponent ≤ 1");
                    acc = next;
                    negative ^= s;
                }
            }
            out.add_term(acc, if negative { -c.clone() } else { c.clone() });
        }
        Ok(out)
    }

    /// Floating-point value at a point; `value` supplies each generator.
    pub fn eval_f64(&self, value: impl Fn(Generator) -> f64) -> f64 {
        let mut total = 0.0;
        for (m, c) in &self.terms {
            let mut t = c.to_f64().unwrap_or(f64::NAN);
            for &(id, e) in m.factors() {
                t *= value(self.scheme.generator(id)).powi(e as i32);
            }
            total += t;
        }
        total
    }

    /// Largest exponent sum over the non-differential generators of a family.
    pub fn max_family_degree(&self, family: Family) -> u32 {
        self.terms
            .keys()
            .map(|m| {
                m.factors()
                    .iter()
                    .filter(|(id, _)| {
                        let g = self.scheme.generator(*id);
                        g.family == family && !g.differential
                    })
                    .map(|&(_, e)| e as u32)
                    .sum()
            })
            .max()
            .unwrap_or(0)
    }
}

fn write_coefficient(f: &mut fmt::Formatter<'_>, c: &Rational, bare: bool) -> fmt::Result {
    let a = c.abs();
    if bare && a.is_one() {
        return Ok(());
    }
    if a.is_integer() {
        write!(f, "{}", a.numer())?;
    } else {
        write!(f, "{}/{}", a.numer(), a.denom())?;
    }
    if bare {
        f.write_str("*")?;
    }
    Ok(())
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            match (i, c.is_negative()) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            if m.is_one() {
                write_coefficient(f, c, false)?;
                continue;
            }
            write_coefficient(f, c, true)?;
            for (k, &(id, e)) in m.factors().iter().enumerate() {
                if k > 0 {
                    f.write_str("*")?;
                }
                write!(f, "{}", self.scheme.generator(id))?;
                if e > 1 {
                    write!(f, "^{e}")?;
                }
            }
        }
        Ok(())
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        self.checked_add(rhs).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self.checked_sub(rhs).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        self.checked_mul(rhs).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl Add for Poly {
    type Output = Poly;
    fn add(self, rhs: Poly) -> Poly {
        &self + &rhs
    }
}

impl Sub for Poly {
    type Output = Poly;
    fn sub(self, rhs: Poly) -> Poly {
        &self - &rhs
    }
}

impl Mul for Poly {
    type Output = Poly;
    fn mul(self, rhs: Poly) -> Poly {
        &self * &rhs
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        self.scale(&-Rational::one())
    }
}

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}

impl std::iter::Sum for Poly {
    fn sum<I: Iterator<Item = Poly>>(mut iter: I) -> Poly {
        let first = iter.next().expect("sum of an empty iterator has no scheme");
        iter.fold(first, |acc, p| acc + p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tangent() -> Arc<ChartScheme> {
        ChartScheme::tangent(2)
    }

    #[test]
    fn odd_generators_anticommute() {
        let s = tangent();
        let xi1 = Poly::gen(&s, Generator::xi(1));
        let xi2 = Poly::gen(&s, Generator::xi(2));
        assert_eq!(&xi2 * &xi1, -(&xi1 * &xi2));
        assert!((&xi1 * &xi1).is_zero());
        assert_eq!((&xi1 * &xi2).to_string(), "xi1*xi2");
        assert_eq!((&xi2 * &xi1).to_string(), "-xi1*xi2");
    }

    #[test]
    fn split_off_moves_factor_to_front() {
        let s = tangent();
        let xi1 = Poly::gen(&s, Generator::xi(1));
        let xi2 = Poly::gen(&s, Generator::xi(2));
        let f = &xi1 * &xi2;
        let id2 = s.id(&Generator::xi(2)).unwrap();
        let (a, b) = f.split_off(id2).unwrap();
        assert!(b.is_zero());
        assert_eq!(a, -xi1.clone());
        assert_eq!(&xi2 * &a, f);
    }

    #[test]
    fn scheme_mismatch_is_an_error() {
        let a = Poly::one(&ChartScheme::tangent(1));
        let b = Poly::one(&ChartScheme::tangent(2));
        assert!(matches!(a.checked_mul(&b), Err(Error::SchemeMismatch { .. })));
    }

    #[test]
    fn bidegree_of_zero_is_any() {
        let s = tangent();
        assert_eq!(Poly::zero(&s).bidegree().unwrap(), None);
        let mixed = Poly::gen(&s, Generator::x(1)) + Poly::gen(&s, Generator::xi(1));
        assert!(mixed.bidegree().is_err());
    }

    #[test]
    fn embed_preserves_signs() {
        let small = ChartScheme::tangent(2);
        let big = ChartScheme::phase(2);
        let f = &Poly::gen(&small, Generator::xi(2)) * &Poly::gen(&small, Generator::x(1).d());
        let g = f.embed(&big).unwrap();
        let h = &Poly::gen(&big, Generator::xi(2)) * &Poly::gen(&big, Generator::x(1).d());
        assert_eq!(g, h);
    }
}
