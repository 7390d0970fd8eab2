use std::path::PathBuf;

use courant_core::cli::{kappa_from_str, load_beta, load_kappa};
use courant_core::graded::{parse, ChartScheme, Generator};
use courant_core::groupoid::{mu_quadrature_error, GroupoidChart};
use courant_core::jet::{integration_theorem, qflow_extract};
use courant_core::phase::{
    gauge_exp, poisson, psi_kappa, twist, twist_unchecked, ClosedThreeForm, PhaseChart, TwoFormOnM,
};
use courant_core::simplicial::{em_level, moore_homology};
use courant_core::Error;

fn corpus(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus").join(name)
}

fn corpus_kappas() -> Vec<ClosedThreeForm> {
    ["kappa_volume_d3.json", "kappa_poly_d3.json", "kappa_x1_d4.json", "kappa_quadratic_d4.json"]
        .iter()
        .map(|n| load_kappa(&corpus(n), false).unwrap())
        .collect()
}

fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

#[test]
fn em_dimensions_are_binomial() {
    for dim_v in 1..=3 {
        for n in 0..=2u8 {
            for k in 0..=4u8 {
                assert_eq!(em_level(dim_v, n, k).dim(), dim_v * binomial(k as usize, n as usize), "V={dim_v} n={n} k={k}");
            }
        }
    }
}

#[test]
fn moore_homology_is_concentrated() {
    for dim_v in 1..=3 {
        for n in 0..=2u8 {
            let h = moore_homology(dim_v, n, 4);
            for (k, &dim) in h.iter().enumerate() {
                assert_eq!(dim, if k == n as usize { dim_v } else { 0 });
            }
        }
    }
}

#[test]
fn mu_agrees_with_quadrature_on_corpus() {
    for (seed, k) in corpus_kappas().iter().enumerate() {
        let e = mu_quadrature_error(&GroupoidChart::new(k.dim()), k.form(), seed as u64, 10, 1e-10).unwrap();
        assert!(e <= 1e-10, "kappa {seed}: {e:e}");
    }
}

#[test]
fn poisson_table_literal() {
    let s = ChartScheme::phase(2);
    let b = |f: &str, g: &str| poisson(&parse(&s, f).unwrap(), &parse(&s, g).unwrap()).unwrap().to_string();
    assert_eq!(b("p1", "x1"), "1");
    assert_eq!(b("eta2", "xi2"), "1");
    assert_eq!(b("p1", "x2"), "0");
    assert_eq!(b("xi1*p1", "x1"), "xi1");
    assert_eq!(b("xi1*p1", "eta1"), "p1");
}

#[test]
fn integration_theorem_literal() {
    for (d, text) in [(1, "dp1*dx1 + deta1*dxi1"), (2, "dp1*dx1 + dp2*dx2 + deta1*dxi1 + deta2*dxi2")] {
        let (e, _) = integration_theorem(&GroupoidChart::new(d)).unwrap();
        assert_eq!(e.jet, parse(&ChartScheme::phase(d), text).unwrap());
    }
}

#[test]
fn qflow_literal() {
    let q = qflow_extract(&GroupoidChart::new(1), 2).unwrap();
    let s = q.induced.target().clone();
    for (g, text) in [
        (Generator::x(1), "x1 + th*xi1"),
        (Generator::xi(1), "xi1"),
        (Generator::p(1), "p1"),
        (Generator::eta(1), "eta1 + th*p1"),
    ] {
        assert_eq!(q.induced.image(g).unwrap(), &parse(&s, text).unwrap(), "{g}");
    }
}

#[test]
fn gauge_examples() {
    let b3 = ChartScheme::base(3);
    let beta = TwoFormOnM::from_terms(3, &[(vec![1, 2], parse(&b3, "x3").unwrap())]).unwrap();
    let g = gauge_exp(&beta, &twist(&ClosedThreeForm::zero(3)).unwrap()).unwrap();
    let expected = twist_unchecked(&ClosedThreeForm::constant_volume(3, -1).unwrap()).unwrap();
    assert!(g.result.residuals(&expected).unwrap().is_empty());
    assert_eq!(g.steps, 2);

    let b2 = ChartScheme::base(2);
    let beta2 = TwoFormOnM::from_terms(2, &[(vec![1, 2], parse(&b2, "x1^2*x2 + 3").unwrap())]).unwrap();
    let q2 = PhaseChart::new(2).q();
    assert_eq!(gauge_exp(&beta2, &q2).unwrap().result, q2);

    let q3 = twist(&ClosedThreeForm::constant_volume(3, 2).unwrap()).unwrap();
    assert_eq!(gauge_exp(&TwoFormOnM::zero(3), &q3).unwrap().result, q3);
}

#[test]
fn gauge_on_corpus_pairs() {
    let mut pairs = 0;
    for k in corpus_kappas() {
        for tag in ["a", "b", "c"] {
            let beta = load_beta(&corpus(&format!("beta_{tag}_d{}.json", k.dim())), false).unwrap();
            let g = gauge_exp(&beta, &twist(&k).unwrap()).unwrap();
            let expected = twist_unchecked(&k.checked_sub(&beta.d()).unwrap()).unwrap();
            assert!(g.result.residuals(&expected).unwrap().is_empty());
            assert!(g.steps <= 3);
            pairs += 1;
        }
    }
    assert!(pairs >= 10);
}

#[test]
fn psi_literal() {
    let k = kappa_from_str(r#"{"d":3,"terms":[{"indices":[1,2,3],"coeff":"x1"}]}"#, false).unwrap();
    let psi = psi_kappa(&k).unwrap();
    let s = psi.source().clone();
    assert_eq!(psi.image(Generator::p(1)).unwrap(), &parse(&s, "p1 + x1*xi2*xi3").unwrap());
    assert_eq!(psi.image(Generator::p(3)).unwrap(), &parse(&s, "p3 + x1*xi1*xi2").unwrap());
}

#[test]
fn loader_examples() {
    let vol = kappa_from_str(r#"{"d":3,"terms":[{"indices":[1,2,3],"coeff":"1"}]}"#, false).unwrap();
    assert_eq!(vol, ClosedThreeForm::constant_volume(3, 1).unwrap());
    let arity = kappa_from_str(r#"{"d":3,"terms":[{"indices":[1,2],"coeff":"1"}]}"#, false).unwrap_err();
    assert!(arity.to_string().contains("3-form term needs 3 indices"));
    let err = load_kappa(&corpus("negative/tau_x1_234_d4.json"), false);
    assert!(err.is_ok(), "the document sets unchecked");
    let strict = kappa_from_str(r#"{"d":4,"terms":[{"indices":[2,3,4],"coeff":"x1"}]}"#, false).unwrap_err();
    match strict {
        Error::NotClosed { residual } => assert_eq!(residual, "dx1*dx2*dx3*dx4"),
        e => panic!("{e}"),
    }
}
