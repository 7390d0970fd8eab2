use std::collections::BTreeMap;

use num_traits::{One, Zero};

use super::monotone::MonotoneMap;
use crate::error::{Error, Result};
use crate::graded::Rational;
use crate::linalg::Matrix;

/// The level K(V,n)_k of the Eilenberg–MacLane object, with V = ℚ^dimV.
///
/// Coordinates are indexed by (injective f:[n]→[k], component of V), f-major.
#[derive(Clone, Debug)]
pub struct EmSpace {
    dim_v: usize,
    n: u8,
    k: u8,
    injective: Vec<MonotoneMap>,
    constraints: Matrix,
    basis: Vec<EmElement>,
}

/// A labeling {v_f}; only injective f are stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EmElement {
    pub n: u8,
    pub k: u8,
    pub labels: BTreeMap<MonotoneMap, Vec<Rational>>,
}

impl EmElement {
    pub fn label(&self, f: &MonotoneMap, dim_v: usize) -> Vec<Rational> {
        self.labels.get(f).cloned().unwrap_or_else(|| vec![Rational::zero(); dim_v])
    }

    pub fn is_zero(&self) -> bool {
        self.labels.values().all(|v| v.iter().all(Zero::is_zero))
    }
}

/// Scalar constraint rows Σᵢ(−1)ⁱ v_{g∘dⁱ} = 0 over all monotone g:[n+1]→[k],
/// written on the coordinates indexed by `injective`.
fn scalar_constraints(n: u8, k: u8, injective: &[MonotoneMap], restrict: impl Fn(&MonotoneMap) -> bool) -> Matrix {
    let index: BTreeMap<&MonotoneMap, usize> = injective.iter().enumerate().map(|(i, f)| (f, i)).collect();
    let mut m = Matrix::zeros(0, injective.len());
    for g in MonotoneMap::all(n + 1, k) {
        if !restrict(&g) {
            continue;
        }
        let mut row = vec![Rational::zero(); injective.len()];
        for i in 0..=n + 1 {
            let f = g.compose(&MonotoneMap::coface(n, i)).expect("composable");
            if let Some(&c) = index.get(&f) {
                let s = if i % 2 == 0 { Rational::one() } else { -Rational::one() };
                row[c] += s;
            }
        }
        if row.iter().any(|x| !x.is_zero()) {
            m.push_row(row);
        }
    }
    m
}

/// Kronecker product with the identity on V.
fn tensor_v(m: &Matrix, dim_v: usize) -> Matrix {
    let mut out = Matrix::zeros(m.rows() * dim_v, m.cols() * dim_v);
    for r in 0..m.rows() {
        for c in 0..m.cols() {
            if !m[(r, c)].is_zero() {
                for a in 0..dim_v {
                    out[(r * dim_v + a, c * dim_v + a)] = m[(r, c)].clone();
                }
            }
        }
    }
    out
}

impl EmSpace {
    pub fn dim_v(&self) -> usize {
        self.dim_v
    }

    pub fn n(&self) -> u8 {
        self.n
    }

    pub fn level(&self) -> u8 {
        self.k
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[EmElement] {
        &self.basis
    }

    pub fn injective_maps(&self) -> &[MonotoneMap] {
        &self.injective
    }

    /// The constraint matrix on coordinates.
    pub fn constraints(&self) -> &Matrix {
        &self.constraints
    }

    pub fn ambient_dim(&self) -> usize {
        self.injective.len() * self.dim_v
    }

    pub fn to_vector(&self, e: &EmElement) -> Vec<Rational> {
        let mut out = Vec::with_capacity(self.ambient_dim());
        for f in &self.injective {
            out.extend(e.label(f, self.dim_v));
        }
        out
    }

    pub fn from_vector(&self, v: &[Rational]) -> EmElement {
        let mut labels = BTreeMap::new();
        for (i, f) in self.injective.iter().enumerate() {
            let chunk = v[i * self.dim_v..(i + 1) * self.dim_v].to_vec();
            if chunk.iter().any(|x| !x.is_zero()) {
                labels.insert(f.clone(), chunk);
            }
        }
        EmElement { n: self.n, k: self.k, labels }
    }

    /// Whether a labeling satisfies the cocycle conditions at this level.
    pub fn contains(&self, e: &EmElement) -> bool {
        if e.n != self.n || e.k != self.k {
            return false;
        }
        if e.labels.keys().any(|f| !f.is_injective() || f.source() != self.n || f.target() != self.k) {
            return false;
        }
        self.constraints.mul_vec(&self.to_vector(e)).iter().all(Zero::is_zero)
    }

    /// V ≅ K(V,n)_n: the labeling supported on the identity.
    pub fn from_v(&self, v: &[Rational]) -> Result<EmElement> {
        if self.k != self.n || v.len() != self.dim_v {
            return Err(Error::Invalid("from_v needs level n and a vector of length dim V".into()));
        }
        let mut labels = BTreeMap::new();
        if v.iter().any(|x| !x.is_zero()) {
            labels.insert(MonotoneMap::identity(self.n), v.to_vec());
        }
        Ok(EmElement { n: self.n, k: self.k, labels })
    }
}

/// Solves the labeling constraints at level k and returns a basis.
pub fn em_level(dim_v: usize, n: u8, k: u8) -> EmSpace {
    let injective = MonotoneMap::injective(n, k);
    let scalar = scalar_constraints(n, k, &injective, |_| true);
    let constraints = tensor_v(&scalar, dim_v);
    let mut space = EmSpace { dim_v, n, k, injective, constraints, basis: Vec::new() };
    let null = if space.ambient_dim() == 0 {
        Vec::new()
    } else if space.constraints.rows() == 0 {
        (0..space.ambient_dim())
            .map(|i| {
                let mut v = vec![Rational::zero(); space.ambient_dim()];
                v[i] = Rational::one();
                v
            })
            .collect()
    } else {
        space.constraints.nullspace()
    };
    space.basis = null.iter().map(|v| space.from_vector(v)).collect();
    space
}

/// The induced map K(V,n)_k → K(V,n)_l for h:[l]→[k], v'_{f'} = v_{h∘f'}.
pub fn em_induced(h: &MonotoneMap, e: &EmElement, dim_v: usize) -> Result<EmElement> {
    if h.target() != e.k {
        return Err(Error::Invalid(format!("{h} does not land in level {}", e.k)));
    }
    let l = h.source();
    let mut labels = BTreeMap::new();
    for f in MonotoneMap::injective(e.n, l) {
        let hf = h.compose(&f)?;
        if hf.is_injective() {
            let v = e.label(&hf, dim_v);
            if v.iter().any(|x| !x.is_zero()) {
                labels.insert(f, v);
            }
        }
    }
    let out = EmElement { n: e.n, k: l, labels };
    let target = em_level(dim_v, e.n, l);
    if !target.contains(&out) {
        return Err(Error::Invalid(format!("induced labeling along {h} violates the cocycle conditions")));
    }
    Ok(out)
}

/// Linear matrix of em_induced(h) on ambient coordinates.
fn induced_matrix(h: &MonotoneMap, n: u8, dim_v: usize) -> Matrix {
    let src = MonotoneMap::injective(n, h.target());
    let dst = MonotoneMap::injective(n, h.source());
    let index: BTreeMap<&MonotoneMap, usize> = src.iter().enumerate().map(|(i, f)| (f, i)).collect();
    let mut m = Matrix::zeros(dst.len(), src.len());
    for (r, f) in dst.iter().enumerate() {
        let hf = h.compose(f).expect("composable");
        if let Some(&c) = index.get(&hf) {
            m[(r, c)] = Rational::one();
        }
    }
    tensor_v(&m, dim_v)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum KanClass {
    Bijective,
    SurjectiveNotBijective,
    Neither,
}

impl KanClass {
    pub fn is_surjective(self) -> bool {
        !matches!(self, KanClass::Neither)
    }
}

impl std::fmt::Display for KanClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            KanClass::Bijective => "bijective",
            KanClass::SurjectiveNotBijective => "surjective-not-bijective",
            KanClass::Neither => "neither",
        })
    }
}

/// Ranks behind a horn classification.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HornRestriction {
    pub simplex_dim: usize,
    pub horn_dim: usize,
    pub rank: usize,
    pub class: KanClass,
}

/// f ∈ Λ^m_j iff f([l]) misses some vertex i ≠ j.
fn in_horn(f: &MonotoneMap, m: u8, j: u8) -> bool {
    (0..=m).any(|i| i != j && !f.values().contains(&i))
}

fn kernel(m: &Matrix, cols: usize) -> Vec<Vec<Rational>> {
    if cols == 0 {
        return Vec::new();
    }
    if m.rows() == 0 {
        return (0..cols)
            .map(|i| {
                let mut v = vec![Rational::zero(); cols];
                v[i] = Rational::one();
                v
            })
            .collect();
    }
    m.nullspace()
}

/// The horn restriction K(V,n)_m → Hom(Λ^m_j, K(V,n)) with its ranks.
pub fn horn_restriction(dim_v: usize, n: u8, m: u8, j: u8) -> HornRestriction {
    assert!(j <= m, "horn index {j} out of range for [{m}]");
    let simplex = em_level(dim_v, n, m);
    let horn_faces: Vec<MonotoneMap> =
        simplex.injective.iter().filter(|f| in_horn(f, m, j)).cloned().collect();
    let horn_constraints = tensor_v(&scalar_constraints(n, m, &horn_faces, |g| in_horn(g, m, j)), dim_v);
    let horn_dim = kernel(&horn_constraints, horn_faces.len() * dim_v).len();

    let positions: Vec<usize> =
        simplex.injective.iter().enumerate().filter(|(_, f)| in_horn(f, m, j)).map(|(i, _)| i).collect();
    let mut restricted = Matrix::zeros(0, simplex.dim());
    for &p in &positions {
        for a in 0..dim_v {
            let row = simplex.basis.iter().map(|b| simplex.to_vector(b)[p * dim_v + a].clone()).collect();
            restricted.push_row(row);
        }
    }
    let rank = if simplex.dim() == 0 || restricted.rows() == 0 { 0 } else { restricted.rank() };
    let surjective = rank == horn_dim;
    let injective = rank == simplex.dim();
    let class = match (surjective, injective) {
        (true, true) => KanClass::Bijective,
        (true, false) => KanClass::SurjectiveNotBijective,
        _ => KanClass::Neither,
    };
    HornRestriction { simplex_dim: simplex.dim(), horn_dim, rank, class }
}

pub fn kan_classify(dim_v: usize, n: u8, m: u8, j: u8) -> KanClass {
    horn_restriction(dim_v, n, m, j).class
}

/// Homology dimensions of the normalized (Moore) complex N_k = ∩_{i≥1} ker d_i
/// with differential d_0, for k = 0..=max_level.
pub fn moore_homology(dim_v: usize, n: u8, max_level: u8) -> Vec<usize> {
    let face = |k: u8, i: u8| induced_matrix(&MonotoneMap::coface(k - 1, i), n, dim_v);
    let stack = |k: u8, from: u8| {
        let level = em_level(dim_v, n, k);
        let mut m = level.constraints.clone();
        for i in from..=k {
            if k > 0 {
                let f = face(k, i);
                for r in 0..f.rows() {
                    m.push_row(f.row(r).to_vec());
                }
            }
        }
        (level.ambient_dim(), m)
    };
    // cycles in N_k: killed by every face
    let cycles = |k: u8| {
        let (cols, m) = stack(k, 0);
        kernel(&m, cols).len()
    };
    // boundaries from N_{k+1}: image of d_0 on ∩_{i≥1} ker d_i
    let boundaries = |k: u8| {
        let (cols, m) = stack(k + 1, 1);
        let normalized = kernel(&m, cols);
        if normalized.is_empty() {
            return 0;
        }
        let d0 = face(k + 1, 0);
        let mut img = Matrix::zeros(0, d0.rows());
        for v in &normalized {
            img.push_row(d0.mul_vec(v));
        }
        img.rank()
    };
    (0..=max_level).map(|k| cycles(k) - boundaries(k)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dimensions() {
        assert_eq!(em_level(2, 2, 1).dim(), 0);
        assert_eq!(em_level(3, 2, 2).dim(), 3);
        assert_eq!(em_level(1, 1, 3).dim(), 3);
    }

    #[test]
    fn degeneracy_then_face() {
        let lvl = em_level(2, 1, 1);
        let e = lvl.from_v(&[Rational::from_integer(3.into()), Rational::from_integer((-1).into())]).unwrap();
        let up = em_induced(&MonotoneMap::codegeneracy(1, 0), &e, 2).unwrap();
        let back = em_induced(&MonotoneMap::coface(1, 0), &up, 2).unwrap();
        assert_eq!(back, e);
    }

    #[test]
    fn kan_pattern() {
        assert_eq!(kan_classify(1, 1, 2, 1), KanClass::Bijective);
        assert_eq!(kan_classify(1, 1, 1, 0), KanClass::SurjectiveNotBijective);
        assert_eq!(kan_classify(1, 2, 1, 0), KanClass::Bijective);
    }

    #[test]
    fn moore_complex_is_concentrated() {
        assert_eq!(moore_homology(2, 1, 4), vec![0, 2, 0, 0, 0]);
    }
}
