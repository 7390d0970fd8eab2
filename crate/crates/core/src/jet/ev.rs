use crate::error::{Error, Result};
use crate::graded::{ChartScheme, CoordinateMap, Derivation, Generator, Poly};
use crate::groupoid::GroupoidChart;
use crate::phase::standard_q;
use crate::simplicial::MonotoneMap;

/// Hard cap on the level of an evaluation family.
pub const LEVEL_CAP: u8 = 4;

/// Level-1 data w₀₁ = aθ₀ + bθ₁ + cθ₀θ₁ per coordinate index, as functions
/// on the phase chart. Extended to all levels by w_{ij} = aθ_i + bθ_j + cθ_iθ_j.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiberCoefficients {
    pub a: Vec<Poly>,
    pub b: Vec<Poly>,
    pub c: Vec<Poly>,
}

impl FiberCoefficients {
    /// (a, b, c) = (−η, η, p).
    pub fn canonical(dim: u8) -> Self {
        let s = ChartScheme::phase(dim);
        let eta = |a| Poly::gen(&s, Generator::eta(a));
        FiberCoefficients {
            a: (1..=dim).map(|a| -eta(a)).collect(),
            b: (1..=dim).map(eta).collect(),
            c: (1..=dim).map(|a| Poly::gen(&s, Generator::p(a))).collect(),
        }
    }

    /// The p = 0 sub-family.
    pub fn degenerate(dim: u8) -> Self {
        let mut out = Self::canonical(dim);
        let s = ChartScheme::phase(dim);
        out.c = (1..=dim).map(|_| Poly::zero(&s)).collect();
        out
    }
}

/// ev_n: the pullback of level-n groupoid coordinates to functions of
/// (x, ξ, p, η) parametrized by θ₀..θ_n.
#[derive(Clone, Debug)]
pub struct EvFamily {
    level: u8,
    map: CoordinateMap,
}

impl EvFamily {
    pub fn level(&self) -> u8 {
        self.level
    }

    pub fn map(&self) -> &CoordinateMap {
        &self.map
    }

    pub fn image(&self, g: Generator) -> Result<&Poly> {
        self.map.image(g)
    }
}

fn check_level(n: u8) -> Result<()> {
    if n > LEVEL_CAP {
        return Err(Error::Cap { what: "level".into(), value: n as usize, cap: LEVEL_CAP as usize });
    }
    Ok(())
}

/// z_i ↦ x + θ_iξ, w_{ij} ↦ η(θ_j − θ_i) + pθ_iθ_j.
pub fn ev_family(chart: &GroupoidChart, n: u8) -> Result<EvFamily> {
    ev_family_with(chart, n, &FiberCoefficients::canonical(chart.dim()))
}

/// z_i ↦ x + θ_iξ, w_{ij} ↦ aθ_i + bθ_j + cθ_iθ_j.
pub fn ev_family_with(chart: &GroupoidChart, n: u8, coeffs: &FiberCoefficients) -> Result<EvFamily> {
    check_level(n)?;
    let dim = chart.dim();
    let target = ChartScheme::jet(dim, n);
    let g = |gen| Poly::gen(&target, gen);
    let theta = |i| g(Generator::theta(i));
    let mut images = Vec::new();
    for a in 1..=dim {
        let (ca, cb, cc) = (
            coeffs.a[a as usize - 1].embed(&target)?,
            coeffs.b[a as usize - 1].embed(&target)?,
            coeffs.c[a as usize - 1].embed(&target)?,
        );
        for i in 0..=n {
            images.push((Generator::vertex(i, a), &g(Generator::x(a)) + &(&theta(i) * &g(Generator::xi(a)))));
            for j in i + 1..=n {
                let w = &(&(&ca * &theta(i)) + &(&cb * &theta(j))) + &(&cc * &(&theta(i) * &theta(j)));
                images.push((Generator::fiber(i, j, a), w));
            }
        }
    }
    let map = CoordinateMap::new(chart.level(n), &target, images)?;
    Ok(EvFamily { level: n, map })
}

/// θ'_i ↦ θ_{f(i)} for f:[l]→[k], phase coordinates fixed.
pub fn theta_reindex(dim: u8, f: &MonotoneMap) -> Result<CoordinateMap> {
    let source = ChartScheme::jet(dim, f.source());
    let target = ChartScheme::jet(dim, f.target());
    let images = (0..=f.source()).map(|i| (Generator::theta(i), Poly::gen(&target, Generator::theta(f.apply(i)))));
    CoordinateMap::new(&source, &target, images)
}

/// A failing compatibility: structure_map(f)∘ev_k ≠ ev_l∘reindex(f).
#[derive(Clone, Debug)]
pub struct CompatibilityFailure {
    pub map: MonotoneMap,
    pub generator: Generator,
    pub residual: Poly,
}

#[derive(Clone, Debug)]
pub struct SimplicialCheckReport {
    pub maps_checked: usize,
    pub failures: Vec<CompatibilityFailure>,
}

impl SimplicialCheckReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Checks every monotone f:[l]→[k] with k, l ≤ max_level.
pub fn check_simplicial(
    chart: &GroupoidChart,
    coeffs: &FiberCoefficients,
    max_level: u8,
) -> Result<SimplicialCheckReport> {
    check_level(max_level)?;
    let fams: Vec<EvFamily> =
        (0..=max_level).map(|n| ev_family_with(chart, n, coeffs)).collect::<Result<_>>()?;
    let mut maps_checked = 0;
    let mut failures = Vec::new();
    for l in 0..=max_level {
        for k in 0..=max_level {
            for f in MonotoneMap::all(l, k) {
                maps_checked += 1;
                let lhs = chart.structure_map(&f)?.then(fams[k as usize].map())?;
                let rhs = fams[l as usize].map().then(&theta_reindex(chart.dim(), &f)?)?;
                for (generator, residual) in lhs.residuals(&rhs) {
                    failures.push(CompatibilityFailure { map: f.clone(), generator, residual });
                }
            }
        }
    }
    Ok(SimplicialCheckReport { maps_checked, failures })
}

/// The action of θ on (x, ξ, p, η) read off from ev_n and the diagonal shift.
#[derive(Clone, Debug)]
pub struct QFlow {
    pub level: u8,
    /// jet(n) → jet_with_flow(n): θ_i fixed, phase coordinates moved.
    pub induced: CoordinateMap,
    /// The expected (x+θξ, ξ, p, η+θp).
    pub expected: CoordinateMap,
    /// ∂/∂θ at θ = 0 of the induced action.
    pub generator: Derivation,
    pub q: Derivation,
    /// The induced action at θ = 0 is the identity.
    pub identity_at_zero: bool,
}

impl QFlow {
    pub fn passed(&self) -> bool {
        self.induced.residuals(&self.expected).is_empty()
            && self.generator.residuals(&self.q).map(|r| r.is_empty()).unwrap_or(false)
            && self.identity_at_zero
    }
}

fn without(p: &Poly, ids: &[crate::graded::GenId]) -> Poly {
    p.filter(|m| ids.iter().all(|&id| m.exponent(id) == 0))
}

pub fn qflow_extract(chart: &GroupoidChart, n: u8) -> Result<QFlow> {
    if n == 0 {
        return Err(Error::Invalid("the fibre action is read off from level 1 or higher".into()));
    }
    let dim = chart.dim();
    let ev = ev_family(chart, n)?;
    let jet = ev.map().target().clone();
    let flowing = ChartScheme::jet_with_flow(dim, n);
    let th = Poly::gen(&flowing, Generator::flow());
    let shift_images =
        (0..=n).map(|i| (Generator::theta(i), &Poly::gen(&flowing, Generator::theta(i)) + &th));
    let shift = CoordinateMap::new(&jet, &flowing, shift_images)?;
    let shifted = ev.map().then(&shift)?;

    let id = |g: Generator| flowing.id(&g).expect("generator in flow chart");
    let thetas: Vec<_> = (0..=n).flat_map(|i| [id(Generator::theta(i)), id(Generator::theta(i).d())]).collect();
    let mut images = Vec::new();
    for a in 1..=dim {
        let z0 = shifted.image(Generator::vertex(0, a))?;
        let (xi_part, rest) = z0.split_off(id(Generator::theta(0)))?;
        images.push((Generator::x(a), without(&rest, &thetas)));
        images.push((Generator::xi(a), without(&xi_part, &thetas)));
        let w01 = shifted.image(Generator::fiber(0, 1, a))?;
        let (theta1_part, _) = w01.split_off(id(Generator::theta(1)))?;
        images.push((Generator::eta(a), -without(&theta1_part, &thetas)));
        let p = w01.left_coefficient(&[id(Generator::theta(0)), id(Generator::theta(1))])?;
        images.push((Generator::p(a), without(&p, &thetas)));
    }
    let induced = CoordinateMap::new(&jet, &flowing, images)?;
    let residuals = ev.map().then(&induced)?.residuals(&shifted);
    if !residuals.is_empty() {
        let (g, r) = &residuals[0];
        return Err(Error::Extraction(format!("the shifted family is not of the form ev∘Φ at {g}: {r}")));
    }

    let g = |gen| Poly::gen(&flowing, gen);
    let expected_images = (1..=dim).flat_map(|a| {
        [
            (Generator::x(a), &g(Generator::x(a)) + &(&th * &g(Generator::xi(a)))),
            (Generator::eta(a), &g(Generator::eta(a)) + &(&th * &g(Generator::p(a)))),
        ]
    });
    let expected = CoordinateMap::new(&jet, &flowing, expected_images.collect::<Vec<_>>())?;

    let phase = ChartScheme::phase(dim);
    let flow_id = id(Generator::flow());
    let dflow_id = id(Generator::flow().d());
    let mut derivative = Vec::new();
    let mut identity_at_zero = true;
    for (gen, image) in induced.coordinate_images() {
        if gen.family == crate::graded::Family::Theta {
            continue;
        }
        let at_zero = without(image, &[flow_id, dflow_id]);
        if at_zero != g(gen) {
            identity_at_zero = false;
        }
        let v = without(&image.partial(flow_id), &[flow_id, dflow_id]).embed(&phase)?;
        derivative.push((gen, v));
    }
    let generator = Derivation::new(&phase, (0, 1), derivative)?;
    Ok(QFlow { level: n, induced, expected, generator, q: standard_q(&phase), identity_at_zero })
}
