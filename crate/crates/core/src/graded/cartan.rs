use std::sync::Arc;

use super::derivation::Derivation;
use super::poly::Poly;
use super::scheme::ChartScheme;
use crate::error::{Error, Result};

/// The de Rham differential of a scheme: the odd derivation g ↦ dg.
pub fn de_rham(scheme: &Arc<ChartScheme>) -> Result<Derivation> {
    let mut d = Derivation::zero(scheme, (1, 0));
    for (id, g) in scheme.coordinates() {
        let did = scheme.differential_of(id).ok_or_else(|| Error::MissingDifferential {
            name: g.to_string(),
            scheme: scheme.name().to_string(),
        })?;
        d.set(id, Poly::from_id(scheme, did))?;
    }
    Ok(d)
}

pub fn de_rham_d(f: &Poly) -> Result<Poly> {
    de_rham(f.scheme())?.apply(f)
}

fn check_liftable(v: &Derivation) -> Result<()> {
    let scheme = v.scheme();
    for (g, value) in v.values() {
        if g.differential {
            return Err(Error::Invalid(format!("{g} is a differential; the field is not a base vector field")));
        }
        let has_differential = value.support().into_iter().any(|id| scheme.generator(id).differential);
        if has_differential {
            return Err(Error::Invalid(format!("value on {g} contains differentials")));
        }
    }
    Ok(())
}

/// Contraction with a vector field: ι_V(dg) = V(g) and ι_V(g) = 0.
pub fn interior(v: &Derivation) -> Result<Derivation> {
    check_liftable(v)?;
    let scheme = v.scheme();
    let (form, weight) = v.shift();
    let mut out = Derivation::zero(scheme, (form - 1, weight));
    for (id, _) in scheme.coordinates() {
        if let Some(did) = scheme.differential_of(id) {
            out.set(did, v.value(id))?;
        }
    }
    Ok(out)
}

/// Lie derivative ℒ_V = [d, ι_V] (graded commutator).
pub fn lie(v: &Derivation) -> Result<Derivation> {
    de_rham(v.scheme())?.commutator(&interior(v)?)
}

/// (ι_V f, ℒ_V f).
pub fn interior_and_lie(v: &Derivation, f: &Poly) -> Result<(Poly, Poly)> {
    let i = interior(v)?.apply(f)?;
    let l = lie(v)?.apply(f)?;
    Ok((i, l))
}
