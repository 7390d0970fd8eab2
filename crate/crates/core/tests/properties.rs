use std::sync::Arc;

use courant_core::graded::{de_rham, integer, interior, lie, parse, ChartScheme, Derivation, Generator, Poly};
use courant_core::groupoid::GroupoidChart;
use courant_core::phase::{poisson, standard_q};
use courant_core::simplicial::{em_induced, em_level, simplicial_d, FormCochain, MonotoneMap};
use proptest::prelude::*;
use proptest::test_runner::RngSeed;

fn config() -> ProptestConfig {
    ProptestConfig {
        cases: 128,
        rng_seed: RngSeed::Fixed(0x636f_7572_616e_7421),
        failure_persistence: None,
        ..ProptestConfig::default()
    }
}

type Terms = Vec<(i64, Vec<usize>)>;

fn terms() -> impl Strategy<Value = Terms> {
    prop::collection::vec((-4i64..=4, prop::collection::vec(0usize..64, 0..=3)), 1..=4)
}

fn build(scheme: &Arc<ChartScheme>, pool: &[Generator], t: &Terms) -> Poly {
    let mut out = Poly::zero(scheme);
    for (c, factors) in t {
        let mut m = Poly::constant(scheme, integer(*c));
        for &i in factors {
            m = &m * &Poly::gen(scheme, pool[i % pool.len()]);
        }
        out = &out + &m;
    }
    out
}

fn all_gens(s: &Arc<ChartScheme>) -> Vec<Generator> {
    s.generators().to_vec()
}

fn coords(s: &Arc<ChartScheme>) -> Vec<Generator> {
    s.coordinates().map(|(_, g)| g).collect()
}

/// Terms of the parity of the first term.
fn homogeneous(p: Poly) -> Poly {
    let s = p.scheme().clone();
    let first = p.terms().next().map(|(m, _)| m.is_odd(&s));
    match first {
        None => p,
        Some(odd) => p.filter(|m| m.is_odd(&s) == odd),
    }
}

fn odd(p: &Poly) -> bool {
    p.parity().unwrap().unwrap_or(false)
}

fn signed(p: &Poly, negative: bool) -> Poly {
    if negative {
        -p.clone()
    } else {
        p.clone()
    }
}

fn tangent_field(s: &Arc<ChartScheme>, dim: u8, tx: &Terms, txi: &Terms) -> Derivation {
    let xs: Vec<Generator> = (1..=dim).map(Generator::x).collect();
    let mut values = Vec::new();
    for a in 1..=dim {
        let shift = |t: &Terms| t.iter().map(|(c, f)| (*c, f.iter().map(|i| i + a as usize).collect())).collect();
        values.push((Generator::x(a), build(s, &xs, &shift(tx))));
        let coeff = build(s, &xs, &shift(txi));
        values.push((Generator::xi(a), &coeff * &Poly::gen(s, Generator::xi(1 + a % dim))));
    }
    Derivation::new(s, (0, 0), values).unwrap()
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn d_squared_vanishes(t in terms()) {
        let s = ChartScheme::phase(2);
        let d = de_rham(&s).unwrap();
        let f = build(&s, &all_gens(&s), &t);
        prop_assert!(d.apply(&d.apply(&f).unwrap()).unwrap().is_zero());
    }

    #[test]
    fn graded_commutativity(a in terms(), b in terms()) {
        let s = ChartScheme::phase(2);
        let f = homogeneous(build(&s, &all_gens(&s), &a));
        let g = homogeneous(build(&s, &all_gens(&s), &b));
        prop_assert_eq!(&f * &g, signed(&(&g * &f), odd(&f) && odd(&g)));
    }

    #[test]
    fn multiplication_is_associative(a in terms(), b in terms(), c in terms()) {
        let s = ChartScheme::phase(2);
        let pool = all_gens(&s);
        let (f, g, h) = (build(&s, &pool, &a), build(&s, &pool, &b), build(&s, &pool, &c));
        prop_assert_eq!(&(&f * &g) * &h, &f * &(&g * &h));
    }

    #[test]
    fn q_is_a_derivation(a in terms(), b in terms()) {
        let s = ChartScheme::phase(2);
        let q = standard_q(&s);
        let f = homogeneous(build(&s, &coords(&s), &a));
        let g = build(&s, &coords(&s), &b);
        let lhs = q.apply(&(&f * &g)).unwrap();
        let rhs = &(&q.apply(&f).unwrap() * &g) + &signed(&(&f * &q.apply(&g).unwrap()), odd(&f));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn q_squares_to_zero_on_functions(a in terms()) {
        let s = ChartScheme::phase(3);
        let q = standard_q(&s);
        let f = build(&s, &coords(&s), &a);
        prop_assert!(q.apply(&q.apply(&f).unwrap()).unwrap().is_zero());
    }

    #[test]
    fn poisson_jacobi(a in terms(), b in terms(), c in terms()) {
        let s = ChartScheme::phase(2);
        let pool = coords(&s);
        let f = homogeneous(build(&s, &pool, &a));
        let g = homogeneous(build(&s, &pool, &b));
        let h = build(&s, &pool, &c);
        let lhs = poisson(&f, &poisson(&g, &h).unwrap()).unwrap();
        let rhs = &poisson(&poisson(&f, &g).unwrap(), &h).unwrap()
            + &signed(&poisson(&g, &poisson(&f, &h).unwrap()).unwrap(), odd(&f) && odd(&g));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn poisson_is_graded_antisymmetric(a in terms(), b in terms()) {
        let s = ChartScheme::phase(2);
        let pool = coords(&s);
        let f = homogeneous(build(&s, &pool, &a));
        let g = homogeneous(build(&s, &pool, &b));
        let fg = poisson(&f, &g).unwrap();
        prop_assert_eq!(fg, -signed(&poisson(&g, &f).unwrap(), odd(&f) && odd(&g)));
    }

    #[test]
    fn cartan_formula_for_even_fields(tx in terms(), txi in terms(), tf in terms()) {
        let s = ChartScheme::tangent(2);
        let v = tangent_field(&s, 2, &tx, &txi);
        let d = de_rham(&s).unwrap();
        let i = interior(&v).unwrap();
        let f = build(&s, &all_gens(&s), &tf);
        let lhs = lie(&v).unwrap().apply(&f).unwrap();
        let rhs = &d.apply(&i.apply(&f).unwrap()).unwrap() + &i.apply(&d.apply(&f).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn parse_print_round_trip(t in terms()) {
        let s = ChartScheme::phase(3);
        let f = build(&s, &all_gens(&s), &t);
        let printed = f.to_string();
        let back = parse(&s, &printed).unwrap();
        prop_assert_eq!(back.to_string(), printed);
        prop_assert_eq!(back, f);
    }

    #[test]
    fn monotone_factorization(n in 0u8..=4, m in 0u8..=4, pick in any::<prop::sample::Index>()) {
        let maps = MonotoneMap::all(n, m);
        let f = pick.get(&maps);
        let fac = f.factor();
        prop_assert_eq!(&fac.mono.compose(&fac.epi).unwrap(), f);
        prop_assert!(fac.epi.is_surjective() && fac.mono.is_injective());
        let mut g = MonotoneMap::identity(n);
        for &j in fac.codegeneracies.iter().rev() {
            g = MonotoneMap::codegeneracy(g.target() - 1, j).compose(&g).unwrap();
        }
        for &i in fac.cofaces.iter().rev() {
            g = MonotoneMap::coface(g.target(), i).compose(&g).unwrap();
        }
        prop_assert_eq!(&g, f);
    }

    #[test]
    fn em_pullback_is_functorial(
        n in 1u8..=2,
        dk in 0u8..=1,
        l in 0u8..=3,
        m in 0u8..=3,
        coeffs in prop::collection::vec(-3i64..=3, 8),
        ph in any::<prop::sample::Index>(),
        pg in any::<prop::sample::Index>(),
    ) {
        let k = n + dk;
        let space = em_level(2, n, k);
        let mut v = vec![integer(0); space.ambient_dim()];
        for (b, c) in space.basis().iter().zip(coeffs.iter().cycle()) {
            for (x, y) in v.iter_mut().zip(space.to_vector(b)) {
                *x += y * integer(*c);
            }
        }
        let e = space.from_vector(&v);
        let h = ph.get(&MonotoneMap::all(l, k)).clone();
        let g = pg.get(&MonotoneMap::all(m, l)).clone();
        let lhs = em_induced(&h.compose(&g).unwrap(), &e, 2).unwrap();
        let rhs = em_induced(&g, &em_induced(&h, &e, 2).unwrap(), 2).unwrap();
        prop_assert!(em_level(2, n, m).contains(&lhs));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn groupoid_structure_maps_compose(
        k in 0u8..=3, l in 0u8..=3, m in 0u8..=3,
        pf in any::<prop::sample::Index>(), pg in any::<prop::sample::Index>(),
    ) {
        let chart = GroupoidChart::new(2);
        let f = pf.get(&MonotoneMap::all(l, k)).clone();
        let g = pg.get(&MonotoneMap::all(m, l)).clone();
        let lhs = chart.structure_map(&f.compose(&g).unwrap()).unwrap();
        let rhs = chart.structure_map(&g).unwrap().then(&chart.structure_map(&f).unwrap()).unwrap();
        prop_assert!(lhs.residuals(&rhs).is_empty());
    }

    #[test]
    fn simplicial_d_squares_to_zero(level in 0u8..=1, t in terms()) {
        let chart = GroupoidChart::new(1);
        let s = chart.level(level).clone();
        let alpha = FormCochain::new(&chart, level, build(&s, &all_gens(&s), &t)).unwrap();
        let dd = simplicial_d(&chart, &simplicial_d(&chart, &alpha).unwrap()).unwrap();
        prop_assert!(dd.is_zero());
    }
}
