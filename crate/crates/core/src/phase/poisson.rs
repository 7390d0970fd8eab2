use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::graded::{Derivation, Family, GenId, Generator, Poly, Rational};

/// {u, v} on a pair of generators.
fn pairing(u: Generator, v: Generator) -> Rational {
    if u.differential || v.differential || u.slots[0] != v.slots[0] {
        return Rational::zero();
    }
    match (u.family, v.family) {
        (Family::P, Family::X) | (Family::Eta, Family::Xi) | (Family::Xi, Family::Eta) => Rational::one(),
        (Family::X, Family::P) => -Rational::one(),
        _ => Rational::zero(),
    }
}

fn partner(g: Generator) -> Option<Generator> {
    let a = g.slots[0];
    match g.family {
        Family::X => Some(Generator::p(a)),
        Family::P => Some(Generator::x(a)),
        Family::Xi => Some(Generator::eta(a)),
        Family::Eta => Some(Generator::xi(a)),
        _ => None,
    }
}

fn reject_differentials(f: &Poly) -> Result<()> {
    let scheme = f.scheme();
    if let Some(id) = f.support().into_iter().find(|&id| scheme.generator(id).differential) {
        return Err(Error::Invalid(format!(
            "Poisson bracket is defined on functions; {} is a differential",
            scheme.generator(id)
        )));
    }
    Ok(())
}

/// The degree −2 Poisson bracket with {p_a, x^b} = {η_a, ξ^b} = δ_a^b.
///
/// Extended to monomials as f·g with one canonical pair (u, v) contracted:
/// u is moved to the right end of f and v to the left end of g.
pub fn poisson(f: &Poly, g: &Poly) -> Result<Poly> {
    if !crate::graded::same_scheme(f.scheme(), g.scheme()) {
        return Err(Error::SchemeMismatch {
            left: f.scheme().name().to_string(),
            right: g.scheme().name().to_string(),
        });
    }
    reject_differentials(f)?;
    reject_differentials(g)?;
    let scheme = f.scheme().clone();
    let mut out = Poly::zero(&scheme);
    for (m1, c1) in f.terms() {
        for &(u, eu) in m1.factors() {
            let ug = scheme.generator(u);
            let Some(vg) = partner(ug) else { continue };
            let Some(v) = scheme.id(&vg) else { continue };
            let ev = m1.exponent(u);
            debug_assert_eq!(ev, eu);
            let (rest1, front1) = m1.remove_front(u, &scheme).expect("present");
            let back1 = front1 ^ (scheme.is_odd(u) && rest1.is_odd(&scheme));
            let pair = pairing(ug, vg);
            for (m2, c2) in g.terms() {
                let ev2 = m2.exponent(v);
                if ev2 == 0 {
                    continue;
                }
                let (rest2, front2) = m2.remove_front(v, &scheme).expect("present");
                let Some((prod, s)) = rest1.mul(&rest2, &scheme) else { continue };
                let mut c = c1 * c2 * &pair * Rational::from_integer((eu as i64 * ev2 as i64).into());
                if back1 ^ front2 ^ s {
                    c = -c;
                }
                out.add_term(prod, c);
            }
        }
    }
    Ok(out)
}

/// X_h := {h, ·} on the coordinates of the scheme of `h`.
pub fn hamiltonian_vf(h: &Poly) -> Result<Derivation> {
    reject_differentials(h)?;
    let scheme = h.scheme().clone();
    let weight = match h.weight()? {
        Some((_, w)) => w,
        None => return Ok(Derivation::zero(&scheme, (0, 0))),
    };
    let mut x = Derivation::zero(&scheme, (0, weight - 2));
    let ids: Vec<(GenId, Generator)> = scheme.coordinates().collect();
    for (id, g) in ids {
        if partner(g).is_none() {
            continue;
        }
        let value = poisson(h, &Poly::from_id(&scheme, id))?;
        x.set(id, value)?;
    }
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graded::{parse, ChartScheme};

    #[test]
    fn bracket_table() {
        let s = ChartScheme::phase(2);
        let b = |a: &str, c: &str| poisson(&parse(&s, a).unwrap(), &parse(&s, c).unwrap()).unwrap().to_string();
        assert_eq!(b("p1", "x1"), "1");
        assert_eq!(b("eta1", "xi1"), "1");
        assert_eq!(b("x1", "p1"), "-1");
        assert_eq!(b("xi1", "eta1"), "1");
        assert_eq!(b("x1", "xi2"), "0");
        assert_eq!(b("p1", "x2"), "0");
    }

    #[test]
    fn differentials_are_rejected() {
        let s = ChartScheme::phase(1);
        assert!(poisson(&parse(&s, "dx1").unwrap(), &parse(&s, "x1").unwrap()).is_err());
    }
}
