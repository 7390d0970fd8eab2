use std::sync::Arc;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::graded::{rational, ChartScheme, CoordinateMap, Generator, Poly, Rational};
use crate::linalg::Matrix;
use crate::simplicial::{MonotoneMap, SimplicialChart};

/// Highest level chart built eagerly; D on level n needs level n+1.
pub const MAX_CHART_LEVEL: u8 = 6;

/// The flat local 2-groupoid over ℝᵈ: level-n charts with vertices z_i and
/// fibre coordinates w_{ij} (i < j, w_{ji} = −w_{ij}).
#[derive(Clone, Debug)]
pub struct GroupoidChart {
    dim: u8,
    levels: Vec<Arc<ChartScheme>>,
    base: Arc<ChartScheme>,
    interval: Arc<ChartScheme>,
    cube: Arc<ChartScheme>,
}

impl GroupoidChart {
    pub fn new(dim: u8) -> Self {
        assert!(dim >= 1, "dimension must be positive");
        GroupoidChart {
            dim,
            levels: (0..=MAX_CHART_LEVEL).map(|n| ChartScheme::groupoid(dim, n)).collect(),
            base: ChartScheme::base(dim),
            interval: ChartScheme::groupoid_interval(dim, 1),
            cube: ChartScheme::cotangent_cube(dim),
        }
    }

    pub fn dim(&self) -> u8 {
        self.dim
    }

    pub fn level(&self, n: u8) -> &Arc<ChartScheme> {
        assert!(n <= MAX_CHART_LEVEL, "level {n} above {MAX_CHART_LEVEL}");
        &self.levels[n as usize]
    }

    pub fn base(&self) -> &Arc<ChartScheme> {
        &self.base
    }

    /// Level 1 with the interval coordinate t.
    pub fn interval(&self) -> &Arc<ChartScheme> {
        &self.interval
    }

    /// (T*M)³.
    pub fn cotangent_cube(&self) -> &Arc<ChartScheme> {
        &self.cube
    }

    pub fn z(&self, n: u8, i: u8, a: u8) -> Poly {
        Poly::gen(self.level(n), Generator::vertex(i, a))
    }

    /// w_{ij,a} on level n for any i ≠ j.
    pub fn w(&self, n: u8, i: u8, j: u8, a: u8) -> Poly {
        let s = self.level(n);
        match i.cmp(&j) {
            std::cmp::Ordering::Less => Poly::gen(s, Generator::fiber(i, j, a)),
            std::cmp::Ordering::Greater => -Poly::gen(s, Generator::fiber(j, i, a)),
            std::cmp::Ordering::Equal => Poly::zero(s),
        }
    }

    /// Pullback along M(f): M_k → M_l for f:[l]→[k]:
    /// z'_i ↦ z_{f(i)}, w'_{ij} ↦ w_{f(i)f(j)}.
    pub fn structure_map(&self, f: &MonotoneMap) -> Result<CoordinateMap> {
        let (l, k) = (f.source(), f.target());
        if l > MAX_CHART_LEVEL || k > MAX_CHART_LEVEL {
            return Err(Error::Cap { what: "groupoid level".into(), value: l.max(k) as usize, cap: MAX_CHART_LEVEL as usize });
        }
        let mut images = Vec::new();
        for a in 1..=self.dim {
            for i in 0..=l {
                images.push((Generator::vertex(i, a), self.z(k, f.apply(i), a)));
                for j in i + 1..=l {
                    images.push((Generator::fiber(i, j, a), self.w(k, f.apply(i), f.apply(j), a)));
                }
            }
        }
        CoordinateMap::new(self.level(l), self.level(k), images)
    }

    /// Forms on M = ℝᵈ pulled to level 0 by x ↦ z₀.
    pub fn base_to_level0(&self) -> Result<CoordinateMap> {
        let images = (1..=self.dim).map(|a| (Generator::x(a), self.z(0, 0, a)));
        CoordinateMap::new(&self.base, self.level(0), images)
    }

    /// The linear vertex part of m: (z₀,z₁,z₂) ↦ midpoints of the edges
    /// (01), (12), (20), as a 3×3 matrix acting on each coordinate.
    pub fn midpoint_matrix() -> Matrix {
        let h = rational(1, 2);
        let o = Rational::zero();
        Matrix::from_rows(vec![
            vec![h.clone(), h.clone(), o.clone()],
            vec![o.clone(), h.clone(), h.clone()],
            vec![h.clone(), o, h],
        ])
    }

    /// m̃: level 2 → (T*M)³, y_k = midpoint of edge k, u = (w₀₁, w₁₂, w₂₀).
    pub fn m_tilde(&self) -> Result<CoordinateMap> {
        let l2 = self.level(2);
        let m = Self::midpoint_matrix();
        let edges = [(0u8, 1u8), (1, 2), (2, 0)];
        let mut images = Vec::new();
        for a in 1..=self.dim {
            for (k, &(i, j)) in edges.iter().enumerate() {
                let y: Poly = (0..3u8).map(|v| self.z(2, v, a).scale(&m[(k, v as usize)])).sum();
                images.push((Generator::point(k as u8, a), y));
                images.push((Generator::covector(k as u8, a), self.w(2, i, j, a)));
            }
        }
        CoordinateMap::new(&self.cube, l2, images)
    }

    /// m̃⁻¹, with the vertex part obtained by solving the midpoint system.
    pub fn m_tilde_inverse(&self) -> Result<CoordinateMap> {
        let m = Self::midpoint_matrix();
        let mut inverse = Matrix::zeros(3, 3);
        for c in 0..3 {
            let mut e = vec![Rational::zero(); 3];
            e[c] = Rational::from_integer(1.into());
            let col = m.solve(&e).ok_or_else(|| Error::Invalid("midpoint matrix is singular".into()))?;
            for r in 0..3 {
                inverse[(r, c)] = col[r].clone();
            }
        }
        let cube = &self.cube;
        let mut images = Vec::new();
        for a in 1..=self.dim {
            for i in 0..3u8 {
                let z: Poly = (0..3u8)
                    .map(|k| Poly::gen(cube, Generator::point(k, a)).scale(&inverse[(i as usize, k as usize)]))
                    .sum();
                images.push((Generator::vertex(i, a), z));
            }
            images.push((Generator::fiber(0, 1, a), Poly::gen(cube, Generator::covector(0, a))));
            images.push((Generator::fiber(1, 2, a), Poly::gen(cube, Generator::covector(1, a))));
            images.push((Generator::fiber(0, 2, a), -Poly::gen(cube, Generator::covector(2, a))));
        }
        CoordinateMap::new(self.level(2), cube, images)
    }

    /// Γ(t, z₀, z₁) = z₀ + t(z₁ − z₀), pulling forms on M to [0,1] × level 1.
    pub fn geodesic(&self) -> Result<CoordinateMap> {
        let s = &self.interval;
        let t = Poly::gen(s, Generator::time());
        let images = (1..=self.dim).map(|a| {
            let z0 = Poly::gen(s, Generator::vertex(0, a));
            let z1 = Poly::gen(s, Generator::vertex(1, a));
            (Generator::x(a), &z0 + &(&t * &(&z1 - &z0)))
        });
        CoordinateMap::new(&self.base, s, images)
    }
}

impl SimplicialChart for GroupoidChart {
    fn level_scheme(&self, n: u8) -> Arc<ChartScheme> {
        self.level(n).clone()
    }

    fn pullback_along(&self, f: &MonotoneMap, form: &Poly) -> Result<Poly> {
        self.structure_map(f)?.pullback(form)
    }
}
