use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use super::cartan::de_rham;
use super::generator::Generator;
use super::poly::{Monomial, Poly};
use super::scheme::{same_scheme, ChartScheme, GenId};
use crate::error::{Error, Result};

/// Algebra morphism given by pulling back the generators of `source` to
/// polynomials on `target`.
///
/// Read geometrically it is a map target → source; [`CoordinateMap::then`]
/// composes pullbacks.
#[derive(Clone, Debug)]
pub struct CoordinateMap {
    source: Arc<ChartScheme>,
    target: Arc<ChartScheme>,
    images: Vec<Poly>,
}

impl PartialEq for CoordinateMap {
    fn eq(&self, other: &Self) -> bool {
        same_scheme(&self.source, &other.source)
            && same_scheme(&self.target, &other.target)
            && self.images == other.images
    }
}

impl CoordinateMap {
    /// Degree-preserving map from images of coordinates. Coordinates not
    /// listed keep their name in `target`; differentials go to d(image).
    pub fn new(
        source: &Arc<ChartScheme>,
        target: &Arc<ChartScheme>,
        images: impl IntoIterator<Item = (Generator, Poly)>,
    ) -> Result<Self> {
        let mut given: BTreeMap<GenId, Poly> = BTreeMap::new();
        for (g, p) in images {
            let id = source.id(&g).ok_or_else(|| unknown(&g, source))?;
            if g.differential {
                return Err(Error::Invalid(format!("image of differential {g} is determined by d")));
            }
            check_target(&p, target)?;
            let expected = Monomial::generator(id).grading(source).weight();
            if let Some(w) = p.weight()? {
                if w != expected {
                    return Err(Error::Degree(format!("image {p} of {g} has weight {w:?}, expected {expected:?}")));
                }
            }
            given.insert(id, p);
        }
        let d = de_rham(target)?;
        let mut out = vec![Poly::zero(target); source.len()];
        for (id, g) in source.coordinates() {
            let image = match given.remove(&id) {
                Some(p) => p,
                None => Poly::try_gen(target, g)?,
            };
            if let Some(did) = source.differential_of(id) {
                out[did as usize] = d.apply(&image)?;
            }
            out[id as usize] = image;
        }
        Ok(CoordinateMap { source: source.clone(), target: target.clone(), images: out })
    }

    /// Parity-preserving substitution with every generator's image given
    /// explicitly (differentials included); degrees are not checked.
    /// Generators not listed are sent to zero.
    pub fn substitution(
        source: &Arc<ChartScheme>,
        target: &Arc<ChartScheme>,
        images: impl IntoIterator<Item = (Generator, Poly)>,
    ) -> Result<Self> {
        let mut out = vec![Poly::zero(target); source.len()];
        for (g, p) in images {
            let id = source.id(&g).ok_or_else(|| unknown(&g, source))?;
            check_target(&p, target)?;
            if let Some(odd) = p.parity()? {
                if odd != source.is_odd(id) {
                    return Err(Error::Degree(format!("image {p} of {g} has the wrong parity")));
                }
            }
            out[id as usize] = p;
        }
        Ok(CoordinateMap { source: source.clone(), target: target.clone(), images: out })
    }

    pub fn identity(scheme: &Arc<ChartScheme>) -> Self {
        CoordinateMap {
            source: scheme.clone(),
            target: scheme.clone(),
            images: (0..scheme.len() as GenId).map(|id| Poly::from_id(scheme, id)).collect(),
        }
    }

    pub fn source(&self) -> &Arc<ChartScheme> {
        &self.source
    }

    pub fn target(&self) -> &Arc<ChartScheme> {
        &self.target
    }

    pub fn image(&self, g: Generator) -> Result<&Poly> {
        let id = self.source.id(&g).ok_or_else(|| unknown(&g, &self.source))?;
        Ok(&self.images[id as usize])
    }

    /// Pullback of a polynomial on `source` to `target`.
    pub fn pullback(&self, f: &Poly) -> Result<Poly> {
        if !same_scheme(f.scheme(), &self.source) {
            return Err(Error::SchemeMismatch {
                left: f.scheme().name().to_string(),
                right: self.source.name().to_string(),
            });
        }
        let mut powers: BTreeMap<(GenId, u16), Poly> = BTreeMap::new();
        let mut out = Poly::zero(&self.target);
        for (m, c) in f.terms() {
            let mut acc = Poly::constant(&self.target, c.clone());
            for &(id, e) in m.factors() {
                let p = powers
                    .entry((id, e))
                    .or_insert_with(|| self.images[id as usize].pow(e as u32))
                    .clone();
                acc = &acc * &p;
                if acc.is_zero() {
                    break;
                }
            }
            out = &out + &acc;
        }
        Ok(out)
    }

    /// `self` followed by `next`: pulls back along both.
    pub fn then(&self, next: &CoordinateMap) -> Result<CoordinateMap> {
        if !same_scheme(&self.target, &next.source) {
            return Err(Error::SchemeMismatch {
                left: self.target.name().to_string(),
                right: next.source.name().to_string(),
            });
        }
        let images = self.images.iter().map(|p| next.pullback(p)).collect::<Result<Vec<_>>>()?;
        Ok(CoordinateMap { source: self.source.clone(), target: next.target.clone(), images })
    }

    /// Generators whose images differ between two maps with equal schemes.
    pub fn residuals(&self, other: &CoordinateMap) -> Vec<(Generator, Poly)> {
        self.images
            .iter()
            .zip(&other.images)
            .enumerate()
            .filter_map(|(id, (a, b))| {
                let r = a - b;
                (!r.is_zero()).then(|| (self.source.generator(id as GenId), r))
            })
            .collect()
    }

    pub fn is_identity(&self) -> bool {
        same_scheme(&self.source, &self.target) && *self == CoordinateMap::identity(&self.source)
    }

    /// Images of the non-differential generators, in canonical order.
    pub fn coordinate_images(&self) -> impl Iterator<Item = (Generator, &Poly)> {
        self.source.coordinates().map(move |(id, g)| (g, &self.images[id as usize]))
    }
}

impl fmt::Display for CoordinateMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, (g, p)) in self.coordinate_images().enumerate() {
            if k > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{g} -> {p}")?;
        }
        Ok(())
    }
}

fn unknown(g: &Generator, scheme: &ChartScheme) -> Error {
    Error::UnknownGenerator { name: g.to_string(), scheme: scheme.name().to_string() }
}

fn check_target(p: &Poly, target: &Arc<ChartScheme>) -> Result<()> {
    if same_scheme(p.scheme(), target) {
        Ok(())
    } else {
        Err(Error::SchemeMismatch { left: p.scheme().name().to_string(), right: target.name().to_string() })
    }
}
