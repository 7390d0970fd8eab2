use std::collections::{BTreeMap, HashMap};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::graded::{Generator, Monomial, Poly};
use crate::phase::BaseForm;

use super::chart::GroupoidChart;
use super::forms::mu_of_form;

/// Adaptive Simpson quadrature of `f` on [a, b] to absolute tolerance `tol`.
pub fn adaptive_simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    fn simpson(fa: f64, fm: f64, fb: f64, a: f64, b: f64) -> f64 {
        (b - a) / 6.0 * (fa + 4.0 * fm + fb)
    }
    #[allow(clippy::too_many_arguments)]
    fn recurse(f: &dyn Fn(f64) -> f64, a: f64, b: f64, fa: f64, fm: f64, fb: f64, whole: f64, tol: f64, depth: u32) -> f64 {
        let m = 0.5 * (a + b);
        let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
        let (flm, frm) = (f(lm), f(rm));
        let left = simpson(fa, flm, fm, a, m);
        let right = simpson(fm, frm, fb, m, b);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol {
            return left + right + delta / 15.0;
        }
        recurse(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1)
            + recurse(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)
    }
    let (fa, fb, fm) = (f(a), f(b), f(0.5 * (a + b)));
    recurse(f, a, b, fa, fm, fb, simpson(fa, fm, fb, a, b), tol, 40)
}

/// Coefficient functions of a form, keyed by its differential monomial.
fn by_differentials(p: &Poly) -> BTreeMap<Vec<String>, Poly> {
    let scheme = p.scheme().clone();
    let mut out: BTreeMap<Vec<String>, Poly> = BTreeMap::new();
    for (m, c) in p.terms() {
        let (diff, rest): (Vec<_>, Vec<_>) =
            m.factors().iter().copied().partition(|&(id, _)| scheme.generator(id).differential);
        let key = diff.iter().map(|&(id, _)| scheme.generator(id).to_string()).collect();
        let entry = out.entry(key).or_insert_with(|| Poly::zero(&scheme));
        entry.add_term(Monomial::from_sorted(rest), c.clone());
    }
    out
}

/// Largest deviation, over `points` random base points of level 1 and all
/// coefficient functions, between the symbolic fibre integral μ(τ) and
/// adaptive quadrature of the dt-coefficient of Γ*τ.
pub fn mu_quadrature_error(chart: &GroupoidChart, tau: &BaseForm, seed: u64, points: usize, tol: f64) -> Result<f64> {
    let symbolic = by_differentials(mu_of_form(chart, tau)?.form());
    let pulled = chart.geodesic()?.pullback(tau.poly())?;
    let dt = chart.interval().id(&Generator::time().d()).expect("interval chart has dt");
    let (integrand, _) = pulled.split_off(dt)?;
    let numeric = by_differentials(&integrand);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    for _ in 0..points {
        let mut at: HashMap<Generator, f64> = HashMap::new();
        for i in 0..=1 {
            for a in 1..=chart.dim() {
                at.insert(Generator::vertex(i, a), rng.gen_range(-1.0..1.0));
            }
        }
        let keys: std::collections::BTreeSet<&Vec<String>> = symbolic.keys().chain(numeric.keys()).collect();
        for key in keys {
            let exact = symbolic.get(key).map_or(0.0, |p| p.eval_f64(|g| at[&g]));
            let approx = numeric.get(key).map_or(0.0, |p| {
                let f = |t: f64| p.eval_f64(|g| if g == Generator::time() { t } else { at[&g] });
                adaptive_simpson(&f, 0.0, 1.0, tol * 1e-2)
            });
            worst = worst.max((exact - approx).abs());
        }
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::phase::ClosedThreeForm;

    #[test]
    fn simpson_integrates_polynomials() {
        let v = adaptive_simpson(&|t: f64| t.powi(4) - 2.0 * t, 0.0, 1.0, 1e-12);
        assert!((v - (0.2 - 1.0)).abs() < 1e-12);
    }

    #[test]
    fn mu_matches_quadrature_for_volume_form() {
        let k = ClosedThreeForm::constant_volume(3, 1).unwrap();
        let e = mu_quadrature_error(&GroupoidChart::new(3), k.form(), 7, 10, 1e-10).unwrap();
        assert!(e < 1e-10, "{e}");
    }
}
