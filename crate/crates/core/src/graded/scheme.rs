use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use super::generator::{Family, Generator};

/// Index of a generator inside its scheme. Ids follow the canonical order.
pub type GenId = u16;

/// Generator catalog of a model space: the single source of truth for
/// names, degrees and parities of every coordinate in a chart.
///
/// Every constructor adds the differential partner of each coordinate, so
/// the de Rham differential is defined on the whole chart.
#[derive(Debug)]
pub struct ChartScheme {
    name: String,
    dim: u8,
    gens: Vec<Generator>,
    odd: Vec<bool>,
    ids: HashMap<Generator, GenId>,
    names: HashMap<String, GenId>,
}

impl PartialEq for ChartScheme {
    fn eq(&self, other: &Self) -> bool {
        self.gens == other.gens
    }
}

impl Eq for ChartScheme {}

impl ChartScheme {
    /// Builds a scheme from coordinates; differentials are added.
    pub fn from_coordinates(
        name: impl Into<String>,
        dim: u8,
        coords: impl IntoIterator<Item = Generator>,
    ) -> Arc<Self> {
        let mut gens: Vec<Generator> = Vec::new();
        for g in coords {
            let g = g.undifferentiated();
            if !gens.contains(&g) {
                gens.push(g);
                gens.push(g.d());
            }
        }
        gens.sort_by_key(|g| g.sort_key());
        let odd = gens.iter().map(|g| g.is_odd()).collect();
        let ids = gens.iter().enumerate().map(|(i, g)| (*g, i as GenId)).collect();
        let names = gens.iter().enumerate().map(|(i, g)| (g.to_string(), i as GenId)).collect();
        Arc::new(ChartScheme { name: name.into(), dim, gens, odd, ids, names })
    }

    /// Forms on M = ℝ^d: x^a and dx^a.
    pub fn base(dim: u8) -> Arc<Self> {
        Self::from_coordinates(format!("M(d={dim})"), dim, (1..=dim).map(Generator::x))
    }

    /// Forms on T[1]M: x^a, ξ^a and their differentials.
    pub fn tangent(dim: u8) -> Arc<Self> {
        let coords = (1..=dim).flat_map(|a| [Generator::x(a), Generator::xi(a)]);
        Self::from_coordinates(format!("T[1]M(d={dim})"), dim, coords)
    }

    /// The phase chart of T*[2]T[1]M: x^a, ξ^a, η_a, p_a and differentials.
    pub fn phase(dim: u8) -> Arc<Self> {
        Self::from_coordinates(format!("T*[2]T[1]M(d={dim})"), dim, phase_coords(dim))
    }

    /// The phase chart parametrized by E_nℝ^{0|1}: adds θ_0..θ_n.
    pub fn jet(dim: u8, level: u8) -> Arc<Self> {
        let coords = phase_coords(dim).chain((0..=level).map(Generator::theta));
        Self::from_coordinates(format!("T*[2]T[1]M x E_{level}R(0|1) (d={dim})"), dim, coords)
    }

    /// [`ChartScheme::jet`] plus the odd parameter θ of the diagonal action.
    pub fn jet_with_flow(dim: u8, level: u8) -> Arc<Self> {
        let coords = phase_coords(dim)
            .chain((0..=level).map(Generator::theta))
            .chain(std::iter::once(Generator::flow()));
        Self::from_coordinates(format!("T*[2]T[1]M x R(0|1) x E_{level}R(0|1) (d={dim})"), dim, coords)
    }

    /// Level-n chart of the local 2-groupoid: z_i^a and w_{ij,a} for i < j.
    pub fn groupoid(dim: u8, level: u8) -> Arc<Self> {
        Self::from_coordinates(format!("T*_{level}M(d={dim})"), dim, groupoid_coords(dim, level))
    }

    /// [`ChartScheme::groupoid`] with the interval coordinate t adjoined.
    pub fn groupoid_interval(dim: u8, level: u8) -> Arc<Self> {
        let coords = groupoid_coords(dim, level).chain(std::iter::once(Generator::time()));
        Self::from_coordinates(format!("[0,1] x T*_{level}M(d={dim})"), dim, coords)
    }

    /// (T*M)^3 with base points y_k^a and covectors u_{k,a}.
    pub fn cotangent_cube(dim: u8) -> Arc<Self> {
        let coords = (0..3u8).flat_map(move |k| {
            (1..=dim).flat_map(move |a| [Generator::point(k, a), Generator::covector(k, a)])
        });
        Self::from_coordinates(format!("(T*M)^3(d={dim})"), dim, coords)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> u8 {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn generators(&self) -> &[Generator] {
        &self.gens
    }

    pub fn generator(&self, id: GenId) -> Generator {
        self.gens[id as usize]
    }

    pub fn is_odd(&self, id: GenId) -> bool {
        self.odd[id as usize]
    }

    pub fn id(&self, g: &Generator) -> Option<GenId> {
        self.ids.get(g).copied()
    }

    pub fn contains(&self, g: &Generator) -> bool {
        self.ids.contains_key(g)
    }

    pub fn lookup(&self, name: &str) -> Option<GenId> {
        self.names.get(name).copied()
    }

    /// Id of the differential partner of a coordinate.
    pub fn differential_of(&self, id: GenId) -> Option<GenId> {
        let g = self.generator(id);
        if g.differential {
            None
        } else {
            self.id(&g.d())
        }
    }

    /// Non-differential generators.
    pub fn coordinates(&self) -> impl Iterator<Item = (GenId, Generator)> + '_ {
        self.gens
            .iter()
            .enumerate()
            .filter(|(_, g)| !g.differential)
            .map(|(i, g)| (i as GenId, *g))
    }

    pub fn has_family(&self, family: Family) -> bool {
        self.gens.iter().any(|g| g.family == family)
    }
}

impl fmt::Display for ChartScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

/// Two scheme handles denote the same catalog.
pub fn same_scheme(a: &Arc<ChartScheme>, b: &Arc<ChartScheme>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

fn phase_coords(dim: u8) -> impl Iterator<Item = Generator> {
    (1..=dim).flat_map(|a| [Generator::x(a), Generator::xi(a), Generator::eta(a), Generator::p(a)])
}

fn groupoid_coords(dim: u8, level: u8) -> impl Iterator<Item = Generator> {
    let vertices = (0..=level).flat_map(move |i| (1..=dim).map(move |a| Generator::vertex(i, a)));
    let fibers = (0..=level).flat_map(move |i| {
        (i + 1..=level).flat_map(move |j| (1..=dim).map(move |a| Generator::fiber(i, j, a)))
    });
    vertices.chain(fibers)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn phase_chart_has_four_d_coordinates() {
        for d in 1..=4 {
            let s = ChartScheme::phase(d);
            assert_eq!(s.coordinates().count(), 4 * d as usize);
            assert_eq!(s.len(), 8 * d as usize);
        }
    }

    #[test]
    fn level_zero_has_only_one_vertex() {
        let s = ChartScheme::groupoid(3, 0);
        assert_eq!(s.coordinates().count(), 3);
        assert!(!s.has_family(Family::Fiber));
    }

    #[test]
    fn canonical_order() {
        let s = ChartScheme::jet(1, 1);
        let names: Vec<String> = s.generators().iter().map(|g| g.to_string()).collect();
        assert_eq!(
            names,
            ["x1", "th0", "th1", "xi1", "eta1", "p1", "dx1", "dth0", "dth1", "dxi1", "deta1", "dp1"]
        );
    }

    #[test]
    fn equal_schemes_compare_equal() {
        assert!(same_scheme(&ChartScheme::phase(2), &ChartScheme::phase(2)));
        assert!(!same_scheme(&ChartScheme::phase(2), &ChartScheme::phase(3)));
    }
}
