use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graded::{integer, ChartScheme, Derivation, Generator, Poly};

/// Seeded generator of small random polynomials and vector fields.
pub struct RandomPolys {
    rng: ChaCha8Rng,
}

impl RandomPolys {
    pub fn new(seed: u64) -> Self {
        RandomPolys { rng: ChaCha8Rng::seed_from_u64(seed) }
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    fn coefficient(&mut self) -> i64 {
        let c = self.rng.gen_range(1..=3);
        if self.rng.gen_bool(0.5) {
            c
        } else {
            -c
        }
    }

    /// Random polynomial in the given generators, up to `terms` terms of
    /// up to `factors` factors each.
    pub fn poly_in(&mut self, scheme: &Arc<ChartScheme>, pool: &[Generator], terms: usize, factors: usize) -> Poly {
        let mut out = Poly::zero(scheme);
        if pool.is_empty() {
            return out;
        }
        for _ in 0..self.rng.gen_range(1..=terms) {
            let mut t = Poly::constant(scheme, integer(self.coefficient()));
            for _ in 0..self.rng.gen_range(0..=factors) {
                let g = *pool.choose(&mut self.rng).expect("nonempty pool");
                t = &t * &Poly::gen(scheme, g);
            }
            out = &out + &t;
        }
        out
    }

    /// Random polynomial over every generator of the scheme.
    pub fn poly(&mut self, scheme: &Arc<ChartScheme>, terms: usize, factors: usize) -> Poly {
        let pool = scheme.generators().to_vec();
        self.poly_in(scheme, &pool, terms, factors)
    }

    /// Random function (no differentials).
    pub fn function(&mut self, scheme: &Arc<ChartScheme>, terms: usize, factors: usize) -> Poly {
        let pool: Vec<Generator> = scheme.coordinates().map(|(_, g)| g).collect();
        self.poly_in(scheme, &pool, terms, factors)
    }

    /// The terms of `p` with the parity of its first term.
    pub fn parity_homogeneous(p: &Poly) -> Poly {
        let scheme = p.scheme().clone();
        match p.terms().next() {
            None => p.clone(),
            Some((m0, _)) => {
                let odd = m0.is_odd(&scheme);
                p.filter(|m| m.is_odd(&scheme) == odd)
            }
        }
    }

    /// The terms of `p` with the grading of its first term.
    pub fn homogeneous(p: &Poly) -> Poly {
        let scheme = p.scheme().clone();
        match p.terms().next() {
            None => p.clone(),
            Some((m0, _)) => {
                let g = m0.grading(&scheme);
                p.filter(|m| m.grading(&scheme) == g)
            }
        }
    }

    /// Weight-zero vector field on T[1]ℝᵈ acting on coordinates:
    /// x^a ↦ f^a(x), ξ^a ↦ g^a_b(x)ξ^b.
    pub fn even_tangent_field(&mut self, dim: u8) -> Derivation {
        let s = ChartScheme::tangent(dim);
        let xs: Vec<Generator> = (1..=dim).map(Generator::x).collect();
        let mut values = Vec::new();
        for a in 1..=dim {
            values.push((Generator::x(a), self.poly_in(&s, &xs, 2, 2)));
            let b = self.rng.gen_range(1..=dim);
            let coeff = self.poly_in(&s, &xs, 2, 1);
            values.push((Generator::xi(a), &coeff * &Poly::gen(&s, Generator::xi(b))));
        }
        Derivation::new(&s, (0, 0), values).expect("weight-zero values")
    }
}
