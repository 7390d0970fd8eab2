use std::fmt;
use std::sync::Arc;

use super::monotone::MonotoneMap;
use crate::error::{Error, Result};
use crate::graded::{same_scheme, ChartScheme, Poly};

/// A simplicial chart: level schemes and pullbacks along monotone maps.
pub trait SimplicialChart {
    fn level_scheme(&self, n: u8) -> Arc<ChartScheme>;

    /// For f:[l]→[k], the pullback M(f)*: Ω(M_l) → Ω(M_k).
    fn pullback_along(&self, f: &MonotoneMap, form: &Poly) -> Result<Poly>;
}

/// A form on the level-n chart.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormCochain {
    level: u8,
    form: Poly,
}

impl FormCochain {
    pub fn new<C: SimplicialChart + ?Sized>(chart: &C, level: u8, form: Poly) -> Result<Self> {
        let scheme = chart.level_scheme(level);
        if !same_scheme(form.scheme(), &scheme) {
            return Err(Error::SchemeMismatch { left: form.scheme().name().into(), right: scheme.name().into() });
        }
        Ok(FormCochain { level, form })
    }

    pub fn zero<C: SimplicialChart + ?Sized>(chart: &C, level: u8) -> Self {
        FormCochain { level, form: Poly::zero(&chart.level_scheme(level)) }
    }

    pub fn level(&self) -> u8 {
        self.level
    }

    pub fn form(&self) -> &Poly {
        &self.form
    }

    pub fn is_zero(&self) -> bool {
        self.form.is_zero()
    }

    pub fn checked_sub(&self, other: &FormCochain) -> Result<FormCochain> {
        if self.level != other.level {
            return Err(Error::Invalid(format!("levels {} and {} differ", self.level, other.level)));
        }
        Ok(FormCochain { level: self.level, form: self.form.checked_sub(&other.form)? })
    }
}

impl fmt::Display for FormCochain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[level {}] {}", self.level, self.form)
    }
}

/// D = Σ_{i=0}^{n+1} (−1)^i d_i^* : Ω(M_n) → Ω(M_{n+1}).
pub fn simplicial_d<C: SimplicialChart + ?Sized>(chart: &C, alpha: &FormCochain) -> Result<FormCochain> {
    let n = alpha.level;
    let mut out = Poly::zero(&chart.level_scheme(n + 1));
    for i in 0..=n + 1 {
        let pulled = chart.pullback_along(&MonotoneMap::coface(n, i), &alpha.form)?;
        out = if i % 2 == 0 { out.checked_add(&pulled)? } else { out.checked_sub(&pulled)? };
    }
    FormCochain::new(chart, n + 1, out)
}

/// s_i^*α on level n−1 for α on level n.
pub fn degeneracy_pullback<C: SimplicialChart + ?Sized>(
    chart: &C,
    alpha: &FormCochain,
    i: u8,
) -> Result<FormCochain> {
    if alpha.level == 0 || i >= alpha.level {
        return Err(Error::Invalid(format!("no degeneracy s_{i} into level {}", alpha.level)));
    }
    let n = alpha.level - 1;
    let form = chart.pullback_along(&MonotoneMap::codegeneracy(n, i), &alpha.form)?;
    FormCochain::new(chart, n, form)
}

/// Outcome of the multiplicativity test: s_i^*α = 0 for i < n and Dα = 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiplicativityReport {
    pub level: u8,
    pub degeneracy_failures: Vec<(u8, Poly)>,
    pub d_alpha: Poly,
}

impl MultiplicativityReport {
    pub fn passed(&self) -> bool {
        self.degeneracy_failures.is_empty() && self.d_alpha.is_zero()
    }

    /// Human-readable list of failing pullbacks.
    pub fn failures(&self) -> Vec<String> {
        let mut out: Vec<String> =
            self.degeneracy_failures.iter().map(|(i, p)| format!("s_{i}^* = {p}")).collect();
        if !self.d_alpha.is_zero() {
            out.push(format!("D = {}", self.d_alpha));
        }
        out
    }
}

pub fn is_multiplicative<C: SimplicialChart + ?Sized>(
    chart: &C,
    alpha: &FormCochain,
) -> Result<MultiplicativityReport> {
    let mut degeneracy_failures = Vec::new();
    for i in 0..alpha.level {
        let s = degeneracy_pullback(chart, alpha, i)?;
        if !s.is_zero() {
            degeneracy_failures.push((i, s.form));
        }
    }
    let d_alpha = simplicial_d(chart, alpha)?.form;
    Ok(MultiplicativityReport { level: alpha.level, degeneracy_failures, d_alpha })
}
