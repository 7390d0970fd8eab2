use std::fmt;
use std::time::Instant;

use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};
use crate::graded::{de_rham, interior, lie, parse, rational, ChartScheme, Generator, Poly};
use crate::groupoid::{
    alpha, alpha_certificate, mu_quadrature_error, omega_t, stokes_check, twisted_form, varkappa_report,
    GroupoidChart,
};
use crate::jet::{
    check_simplicial, exact_theorem, extension_ranks, extension_solve, integration_theorem, qflow_extract,
    verify_lemma_varkappa, Extension, FiberCoefficients, Slot, SlotKind, LEVEL_CAP,
};
use crate::phase::{
    gauge_exp, half_d_iota_iota_kappa, hamiltonian_vf, lie_iota_kappa, maurer_cartan_check, nq_morphism_check,
    poisson, psi_kappa, three_d_kappa_xi_xi_dx, transformed_symplectic, twist, twist_unchecked, x_kappa,
    BaseForm, ClosedThreeForm, PhaseChart, TwoFormOnM,
};
use crate::simplicial::{
    em_induced, em_level, kan_classify, moore_homology, simplicial_d, FormCochain, KanClass, MonotoneMap,
};

use super::background::{MAX_COEFFICIENT_DEGREE, MAX_DIM};
use super::random::RandomPolys;
use super::report::{Check, ConfigEcho, Status, VerificationReport};

/// Random cases per algebraic property.
pub const PROPERTY_CASES: usize = 100;
/// Random composable pairs for functoriality checks.
pub const FUNCTORIALITY_PAIRS: usize = 30;
/// Base points for the numerical fibre-integration oracle.
pub const QUADRATURE_POINTS: usize = 10;
pub const QUADRATURE_TOLERANCE: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, clap::ValueEnum)]
pub enum Suite {
    Algebra,
    Phase,
    Simplicial,
    Groupoid,
    Jet,
    All,
}

impl Suite {
    pub const EACH: [Suite; 5] = [Suite::Algebra, Suite::Phase, Suite::Simplicial, Suite::Groupoid, Suite::Jet];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Algebra => "algebra",
            Suite::Phase => "phase",
            Suite::Simplicial => "simplicial",
            Suite::Groupoid => "groupoid",
            Suite::Jet => "jet",
            Suite::All => "all",
        }
    }

    pub fn parse(name: &str) -> Result<Suite> {
        <Suite as clap::ValueEnum>::from_str(name, false).map_err(|_| Error::Invalid(format!("unknown suite {name:?}")))
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug)]
pub struct SuiteConfig {
    pub dim: u8,
    pub kappa: ClosedThreeForm,
    pub kappa_label: Option<String>,
    pub beta: TwoFormOnM,
    pub beta_label: Option<String>,
    pub suites: Vec<Suite>,
    pub seed: u64,
    pub level_cap: u8,
    pub unsafe_caps: bool,
    pub timing: bool,
}

impl SuiteConfig {
    /// Every suite, κ = 0, β = 0, seed 0, level cap 3.
    pub fn new(dim: u8) -> Self {
        SuiteConfig {
            dim,
            kappa: ClosedThreeForm::zero(dim),
            kappa_label: None,
            beta: TwoFormOnM::zero(dim),
            beta_label: None,
            suites: vec![Suite::All],
            seed: 0,
            level_cap: 3,
            unsafe_caps: false,
            timing: false,
        }
    }

    pub fn with_kappa(mut self, kappa: ClosedThreeForm, label: impl Into<String>) -> Self {
        self.kappa = kappa;
        self.kappa_label = Some(label.into());
        self
    }

    pub fn with_beta(mut self, beta: TwoFormOnM, label: impl Into<String>) -> Self {
        self.beta = beta;
        self.beta_label = Some(label.into());
        self
    }

    pub fn with_suites(mut self, suites: Vec<Suite>) -> Self {
        self.suites = suites;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.dim == 0 {
            return Err(Error::Invalid("dimension must be at least 1".into()));
        }
        if self.dim > MAX_DIM && !self.unsafe_caps {
            return Err(Error::Cap { what: "dimension".into(), value: self.dim as usize, cap: MAX_DIM as usize });
        }
        if self.level_cap > LEVEL_CAP {
            return Err(Error::Cap { what: "level".into(), value: self.level_cap as usize, cap: LEVEL_CAP as usize });
        }
        if self.kappa.dim() != self.dim || self.beta.dim() != self.dim {
            return Err(Error::Invalid(format!(
                "dimension {} does not match the background forms (kappa on R^{}, beta on R^{})",
                self.dim,
                self.kappa.dim(),
                self.beta.dim()
            )));
        }
        if !self.unsafe_caps {
            for (what, degree) in
                [("kappa", self.kappa.form().coefficient_degree()), ("beta", self.beta.form().coefficient_degree())]
            {
                if degree > MAX_COEFFICIENT_DEGREE {
                    return Err(Error::Cap {
                        what: format!("{what} coefficient degree"),
                        value: degree as usize,
                        cap: MAX_COEFFICIENT_DEGREE as usize,
                    });
                }
            }
        }
        if self.suites.is_empty() {
            return Err(Error::Invalid("no suite selected".into()));
        }
        Ok(())
    }

    /// The selected suites with `all` expanded, in canonical order.
    pub fn selected(&self) -> Vec<Suite> {
        let mut out: Vec<Suite> = if self.suites.contains(&Suite::All) {
            Suite::EACH.to_vec()
        } else {
            self.suites.clone()
        };
        out.sort();
        out.dedup();
        out
    }

    fn suite_name(&self) -> String {
        if self.suites.contains(&Suite::All) {
            return "all".into();
        }
        self.selected().iter().map(|s| s.name()).collect::<Vec<_>>().join("+")
    }

    fn echo(&self) -> ConfigEcho {
        ConfigEcho {
            dim: self.dim,
            kappa: self.kappa_label.clone(),
            beta: self.beta_label.clone(),
            suites: self.selected().iter().map(|s| s.name().to_string()).collect(),
            seed: self.seed,
            level_cap: self.level_cap,
            unsafe_caps: self.unsafe_caps,
        }
    }
}

/// Runs the selected suites concurrently and assembles the checks in id order.
pub fn run_suite(config: &SuiteConfig) -> Result<VerificationReport> {
    config.validate()?;
    let start = Instant::now();
    let mut checks: Vec<Check> = std::thread::scope(|scope| {
        let handles: Vec<_> = config
            .selected()
            .into_iter()
            .map(|suite| scope.spawn(move || run_one(suite, config)))
            .collect();
        handles.into_iter().flat_map(|h| h.join().expect("suite thread panicked")).collect()
    });
    checks.sort_by(|a, b| a.id.cmp(&b.id));
    let elapsed_ms = config.timing.then(|| start.elapsed().as_millis() as u64);
    Ok(VerificationReport { suite: config.suite_name(), checks, config: config.echo(), elapsed_ms })
}

fn run_one(suite: Suite, config: &SuiteConfig) -> Vec<Check> {
    let mut r = Recorder::default();
    match suite {
        Suite::Algebra => algebra(&mut r, config),
        Suite::Phase => phase(&mut r, config),
        Suite::Simplicial => simplicial(&mut r, config),
        Suite::Groupoid => groupoid(&mut r, config),
        Suite::Jet => jet(&mut r, config),
        Suite::All => unreachable!("expanded by selected()"),
    }
    r.checks
}

/// Outcome of a check: `None` passes, `Some(residual)` fails.
type Outcome = Result<Option<String>>;

#[derive(Default)]
struct Recorder {
    checks: Vec<Check>,
}

impl Recorder {
    fn push(&mut self, id: &str, anchor: &str, outcome: Outcome) {
        let (status, residual) = match outcome {
            Ok(None) => (Status::Pass, None),
            Ok(Some(r)) => (Status::Fail, Some(r)),
            Err(e) => (Status::Fail, Some(format!("error: {e}"))),
        };
        self.checks.push(Check { id: id.into(), anchor: anchor.into(), status, residual });
    }
}

fn zero(p: Poly) -> Option<String> {
    (!p.is_zero()).then(|| p.to_string())
}

fn holds(ok: bool, why: impl FnOnce() -> String) -> Option<String> {
    (!ok).then(why)
}

fn render_residuals(rs: &[(Generator, Poly)]) -> Option<String> {
    if rs.is_empty() {
        return None;
    }
    Some(rs.iter().map(|(g, p)| format!("{g}: {p}")).collect::<Vec<_>>().join("; "))
}

fn sign(negative: bool) -> crate::graded::Rational {
    rational(if negative { -1 } else { 1 }, 1)
}

fn parity(p: &Poly) -> Result<bool> {
    Ok(p.parity()?.unwrap_or(false))
}

/// First failing case of a randomized property.
fn property(rp: &mut RandomPolys, cases: usize, mut case: impl FnMut(&mut RandomPolys) -> Outcome) -> Outcome {
    for n in 0..cases {
        if let Some(r) = case(rp)? {
            return Ok(Some(format!("case {n}: {r}")));
        }
    }
    Ok(None)
}

fn algebra(r: &mut Recorder, c: &SuiteConfig) {
    let d = c.dim;
    let phase = ChartScheme::phase(d);
    let tangent = ChartScheme::tangent(d);
    let mut rp = RandomPolys::new(c.seed);

    r.push("algebra.d_squared", "d(d f) = 0", property(&mut rp, PROPERTY_CASES, |rp| {
        let dr = de_rham(&phase)?;
        let f = rp.poly(&phase, 3, 3);
        Ok(zero(dr.apply(&dr.apply(&f)?)?))
    }));

    r.push("algebra.graded_commutativity", "f g = (-1)^{|f||g|} g f", property(&mut rp, PROPERTY_CASES, |rp| {
        let f = RandomPolys::parity_homogeneous(&rp.poly(&phase, 3, 3));
        let g = RandomPolys::parity_homogeneous(&rp.poly(&phase, 3, 3));
        let s = sign(parity(&f)? && parity(&g)?);
        Ok(zero(&(&f * &g) - &(&g * &f).scale(&s)))
    }));

    let q = PhaseChart::new(d).q();
    r.push("algebra.leibniz_q", "Q(f g) = Q(f) g + (-1)^{|f|} f Q(g)", property(&mut rp, PROPERTY_CASES, |rp| {
        let f = RandomPolys::parity_homogeneous(&rp.function(&phase, 3, 3));
        let g = rp.function(&phase, 3, 3);
        let lhs = q.apply(&(&f * &g))?;
        let rhs = &(&q.apply(&f)? * &g) + &(&f * &q.apply(&g)?).scale(&sign(parity(&f)?));
        Ok(zero(&lhs - &rhs))
    }));

    r.push(
        "algebra.poisson_antisymmetry",
        "{f, g} = -(-1)^{|f||g|} {g, f}",
        property(&mut rp, PROPERTY_CASES, |rp| {
            let f = RandomPolys::parity_homogeneous(&rp.function(&phase, 2, 3));
            let g = RandomPolys::parity_homogeneous(&rp.function(&phase, 2, 3));
            let s = sign(parity(&f)? && parity(&g)?);
            Ok(zero(&poisson(&f, &g)? + &poisson(&g, &f)?.scale(&s)))
        }),
    );

    r.push(
        "algebra.poisson_jacobi",
        "{f, {g, h}} = {{f, g}, h} + (-1)^{|f||g|} {g, {f, h}}",
        property(&mut rp, PROPERTY_CASES, |rp| {
            let f = RandomPolys::parity_homogeneous(&rp.function(&phase, 2, 3));
            let g = RandomPolys::parity_homogeneous(&rp.function(&phase, 2, 3));
            let h = rp.function(&phase, 2, 3);
            let s = sign(parity(&f)? && parity(&g)?);
            let lhs = poisson(&f, &poisson(&g, &h)?)?;
            let rhs = &poisson(&poisson(&f, &g)?, &h)? + &poisson(&g, &poisson(&f, &h)?)?.scale(&s);
            Ok(zero(&lhs - &rhs))
        }),
    );

    r.push("algebra.cartan_formula", "L_V = d i_V + i_V d", property(&mut rp, PROPERTY_CASES, |rp| {
        let v = rp.even_tangent_field(d);
        let dr = de_rham(&tangent)?;
        let i = interior(&v)?;
        let f = rp.poly(&tangent, 3, 3);
        let lhs = lie(&v)?.apply(&f)?;
        let rhs = &dr.apply(&i.apply(&f)?)? + &i.apply(&dr.apply(&f)?)?;
        Ok(zero(&lhs - &rhs))
    }));

    r.push("algebra.lie_commutes_with_d", "L_V d = d L_V", property(&mut rp, PROPERTY_CASES, |rp| {
        let v = rp.even_tangent_field(d);
        let dr = de_rham(&tangent)?;
        let l = lie(&v)?;
        let f = rp.poly(&tangent, 3, 3);
        Ok(zero(&l.apply(&dr.apply(&f)?)? - &dr.apply(&l.apply(&f)?)?))
    }));

    r.push("algebra.interior_squared", "i_V i_V = 0", property(&mut rp, PROPERTY_CASES, |rp| {
        let v = rp.even_tangent_field(d);
        let i = interior(&v)?;
        let f = rp.poly(&tangent, 3, 3);
        Ok(zero(i.apply(&i.apply(&f)?)?))
    }));

    r.push("algebra.parse_print_round_trip", "parse(print(f)) = f", property(&mut rp, PROPERTY_CASES, |rp| {
        let f = rp.poly(&phase, 4, 3);
        let printed = f.to_string();
        let back = parse(&phase, &printed)?;
        Ok(holds(back == f && back.to_string() == printed, || format!("{printed} reparsed as {back}")))
    }));
}

fn phase(r: &mut Recorder, c: &SuiteConfig) {
    let d = c.dim;
    let chart = PhaseChart::new(d);
    let s = chart.scheme().clone();
    let q = chart.q();
    let kappa = &c.kappa;

    r.push("phase.q_hamiltonian", "Q = {xi^a p_a, .}", (|| {
        let h = (1..=d).fold(Poly::zero(&s), |acc, a| &acc + &(&Poly::gen(&s, Generator::xi(a)) * &Poly::gen(&s, Generator::p(a))));
        Ok(render_residuals(&hamiltonian_vf(&h)?.residuals(&q)?))
    })());

    r.push("phase.q_squared", "[Q, Q] = 0", (|| {
        let sq = q.commutator(&q)?;
        Ok(holds(sq.is_zero(), || sq.to_string()))
    })());

    r.push("phase.poisson_table", "{p_a, x^b} = {eta_a, xi^b} = delta_a^b, other brackets vanish", (|| {
        let mut bad = Vec::new();
        let families: [fn(u8) -> Generator; 4] = [Generator::x, Generator::xi, Generator::p, Generator::eta];
        for (fi, f) in families.iter().enumerate() {
            for (gi, g) in families.iter().enumerate() {
                for a in 1..=d {
                    for b in 1..=d {
                        let value = poisson(&Poly::gen(&s, f(a)), &Poly::gen(&s, g(b)))?;
                        let paired = matches!((fi, gi), (2, 0) | (3, 1) | (1, 3));
                        let expected = match (fi, gi) {
                            (0, 2) if a == b => -1,
                            _ if paired && a == b => 1,
                            _ => 0,
                        };
                        if value != Poly::constant(&s, rational(expected, 1)) {
                            bad.push(format!("{{{}, {}}} = {value}", f(a), g(b)));
                        }
                    }
                }
            }
        }
        Ok((!bad.is_empty()).then(|| bad.join("; ")))
    })());

    r.push("phase.maurer_cartan", "Q(q*k) + 1/2 {q*k, q*k} = 0, both terms separately", (|| {
        let m = maurer_cartan_check(kappa)?;
        Ok(m.failing_term().map(|t| {
            let residual = if m.q_term.is_zero() { &m.bracket_term } else { &m.q_term };
            format!("{t} = {residual}")
        }))
    })());

    r.push("phase.twist_homological", "[Q_k, Q_k] = 0 for Q_k = Q + X_k", twist(kappa).map(|_| None));

    r.push("phase.gauge_series", "exp(ad X_b) Q_k = Q + X_{k - d b}, series ends by step 3", (|| {
        let g = gauge_exp(&c.beta, &twist(kappa)?)?;
        let expected = twist_unchecked(&kappa.checked_sub(&c.beta.d())?)?;
        let rs = g.result.residuals(&expected)?;
        if g.steps > 3 {
            return Ok(Some(format!("series ended at step {}", g.steps)));
        }
        Ok(render_residuals(&rs))
    })());

    r.push("phase.gauge_trivial_beta", "exp(ad X_0) Q_k = Q_k", (|| {
        let qk = twist(kappa)?;
        let g = gauge_exp(&TwoFormOnM::zero(d), &qk)?;
        Ok(render_residuals(&g.result.residuals(&qk)?))
    })());

    r.push("phase.psi_nq_morphism", "psi_k intertwines Q_k and Q", (|| {
        let report = nq_morphism_check(&psi_kappa(kappa)?, &twist(kappa)?, &q)?;
        Ok(render_residuals(&report.residuals))
    })());

    r.push("phase.psi_detects_twist", "psi_k against Q on both sides leaves exactly X_k on eta", (|| {
        let report = nq_morphism_check(&psi_kappa(kappa)?, &q, &q)?;
        let xk = x_kappa(kappa)?;
        let mut expected: Vec<(Generator, Poly)> = Vec::new();
        for (_, g) in s.coordinates() {
            let v = xk.value_on(g);
            if !v.is_zero() {
                expected.push((g, v));
            }
        }
        Ok(holds(report.residuals == expected, || {
            format!("residuals [{}]", render_residuals(&report.residuals).unwrap_or_default())
        }))
    })());

    r.push("phase.psi_inverse", "psi_k psi_{-k} = id", (|| {
        let comp = psi_kappa(kappa)?.then(&psi_kappa(&kappa.neg())?)?;
        Ok(holds(comp.is_identity(), || "composite is not the identity".into()))
    })());

    r.push("phase.transformed_symplectic", "(psi_k^-1)^* w = w - q^* L_{Q_dR} i_{Q_dR} q_M^* k", (|| {
        let t = transformed_symplectic(kappa)?;
        if !t.d_pulled.is_zero() {
            return Ok(Some(format!("d of pullback = {}", t.d_pulled)));
        }
        Ok(zero(&t.pulled - &t.expected))
    })());

    r.push("phase.lemma_chain", "L_{Q_dR} i_{Q_dR} k = 3 d(k_abc xi^a xi^b dx^c) = 1/2 d i_{Q_dR} i_{Q_dR} k", (|| {
        let l = lie_iota_kappa(kappa)?;
        let three = three_d_kappa_xi_xi_dx(kappa)?;
        let half = half_d_iota_iota_kappa(kappa)?;
        if l != three {
            return Ok(zero(&l - &three));
        }
        Ok(zero(&three - &half))
    })());
}

fn simplicial(r: &mut Recorder, c: &SuiteConfig) {
    let cap = c.level_cap;
    let mut rp = RandomPolys::new(c.seed ^ 0x5349_4d50);

    r.push("simplicial.cosimplicial_identities", "d^j d^i = d^i d^{j-1}, s^j s^i = s^i s^{j+1}, s^j d^i relations", (|| {
        let df = MonotoneMap::coface;
        let sg = MonotoneMap::codegeneracy;
        let mut bad = Vec::new();
        for n in 0..=cap {
            for j in 0..=n + 2 {
                for i in 0..j {
                    if df(n + 1, j).compose(&df(n, i))? != df(n + 1, i).compose(&df(n, j - 1))? {
                        bad.push(format!("d^{j} d^{i} on [{n}]"));
                    }
                }
            }
            for j in 0..=n {
                for i in 0..=j {
                    if sg(n, j).compose(&sg(n + 1, i))? != sg(n, i).compose(&sg(n + 1, j + 1))? {
                        bad.push(format!("s^{j} s^{i} on [{}]", n + 2));
                    }
                }
                for i in 0..=n + 1 {
                    let lhs = sg(n, j).compose(&df(n, i))?;
                    let rhs = if i == j || i == j + 1 {
                        MonotoneMap::identity(n)
                    } else if i < j {
                        df(n - 1, i).compose(&sg(n - 1, j - 1))?
                    } else {
                        df(n - 1, i - 1).compose(&sg(n - 1, j))?
                    };
                    if lhs != rhs {
                        bad.push(format!("s^{j} d^{i} on [{n}]"));
                    }
                }
            }
        }
        Ok((!bad.is_empty()).then(|| bad.join("; ")))
    })());

    r.push("simplicial.factorization", "f = mono . epi with #s = n - rank, #d = m - rank", (|| {
        for n in 0..=cap {
            for m in 0..=cap {
                for f in MonotoneMap::all(n, m) {
                    let fac = f.factor();
                    let rank = fac.epi.target() as usize + 1;
                    let ok = fac.mono.compose(&fac.epi)? == f
                        && fac.epi.is_surjective()
                        && fac.mono.is_injective()
                        && fac.codegeneracies.len() + rank == n as usize + 1
                        && fac.cofaces.len() + rank == m as usize + 1;
                    if !ok {
                        return Ok(Some(format!("{f}")));
                    }
                }
            }
        }
        Ok(None)
    })());

    r.push("simplicial.em_levels", "K(V,n)_k = 0 for k < n and K(V,n)_n = V", (|| {
        for dim_v in 1..=3 {
            for n in 0..=2u8 {
                for k in 0..=n {
                    let dim = em_level(dim_v, n, k).dim();
                    let expected = if k == n { dim_v } else { 0 };
                    if dim != expected {
                        return Ok(Some(format!("dim K({dim_v},{n})_{k} = {dim}, expected {expected}")));
                    }
                }
            }
        }
        Ok(None)
    })());

    r.push("simplicial.moore_homology", "normalized homology of K(V,n) is V in degree n", (|| {
        for dim_v in 1..=3 {
            for n in 0..=2u8 {
                let h = moore_homology(dim_v, n, n + 2);
                let expected: Vec<usize> = (0..h.len()).map(|k| if k == n as usize { dim_v } else { 0 }).collect();
                if h != expected {
                    return Ok(Some(format!("K({dim_v},{n}): {h:?}")));
                }
            }
        }
        Ok(None)
    })());

    r.push("simplicial.kan_grid", "Kan!(m,j) for m > n and Kan(m,j) for m <= n on K(V,n)", (|| {
        for dim_v in 1..=3 {
            for n in 0..=2u8 {
                for m in 1..=4u8 {
                    for j in 0..=m {
                        let class = kan_classify(dim_v, n, m, j);
                        let ok = if m > n { class == KanClass::Bijective } else { class.is_surjective() };
                        if !ok {
                            return Ok(Some(format!("dim V = {dim_v}, n = {n}, horn ({m},{j}): {class}")));
                        }
                    }
                }
            }
        }
        Ok(None)
    })());

    r.push("simplicial.em_functoriality", "(h g)^* = g^* h^* on K(V,n)", property(&mut rp, FUNCTORIALITY_PAIRS, |rp| {
        let rng = rp.rng();
        let dim_v = rng.gen_range(1..=2);
        let n = rng.gen_range(1..=2u8);
        let k = rng.gen_range(n..=n + 1);
        let space = em_level(dim_v, n, k);
        let coeffs: Vec<i64> = (0..space.dim()).map(|_| rng.gen_range(-3..=3)).collect();
        let mut v = vec![crate::graded::Rational::zero(); space.ambient_dim()];
        for (b, c) in space.basis().iter().zip(&coeffs) {
            for (x, y) in v.iter_mut().zip(space.to_vector(b)) {
                *x += y * crate::graded::Rational::from_integer((*c).into());
            }
        }
        let e = space.from_vector(&v);
        let l = rng.gen_range(0..=n + 1);
        let m = rng.gen_range(0..=n + 1);
        let h = MonotoneMap::all(l, k).choose(rng).cloned().expect("maps exist");
        let g = MonotoneMap::all(m, l).choose(rng).cloned().expect("maps exist");
        let lhs = em_induced(&h.compose(&g)?, &e, dim_v)?;
        let rhs = em_induced(&g, &em_induced(&h, &e, dim_v)?, dim_v)?;
        let lands = em_level(dim_v, n, m).contains(&lhs);
        Ok(holds(lhs == rhs && lands, || format!("h = {h}, g = {g}")))
    }));

    let chart = GroupoidChart::new(c.dim.min(2));
    r.push("simplicial.d_squared", "D D = 0 on form cochains", property(&mut rp, 20, |rp| {
        let level = rp.rng().gen_range(0..=1u8);
        let scheme = chart.level(level).clone();
        let alpha = FormCochain::new(&chart, level, rp.poly(&scheme, 2, 3))?;
        Ok(zero(simplicial_d(&chart, &simplicial_d(&chart, &alpha)?)?.form().clone()))
    }));
}

fn groupoid(r: &mut Recorder, c: &SuiteConfig) {
    let d = c.dim;
    let chart = GroupoidChart::new(d);
    let kappa = &c.kappa;
    let cap = c.level_cap;
    let mut rp = RandomPolys::new(c.seed ^ 0x4752_5044);

    r.push("groupoid.functoriality", "(f g)^* = g^* f^* on level charts", property(&mut rp, FUNCTORIALITY_PAIRS, |rp| {
        let rng = rp.rng();
        let (k, l, m) = (rng.gen_range(0..=cap), rng.gen_range(0..=cap), rng.gen_range(0..=cap));
        let f = MonotoneMap::all(l, k).choose(rng).cloned().expect("maps exist");
        let g = MonotoneMap::all(m, l).choose(rng).cloned().expect("maps exist");
        let lhs = chart.structure_map(&f.compose(&g)?)?;
        let rhs = chart.structure_map(&g)?.then(&chart.structure_map(&f)?)?;
        Ok(render_residuals(&lhs.residuals(&rhs)).map(|res| format!("f = {f}, g = {g}: {res}")))
    }));

    r.push("groupoid.m_tilde_inverse", "m~ is invertible with midpoint determinant 1/4", (|| {
        let (m, inv) = (chart.m_tilde()?, chart.m_tilde_inverse()?);
        let det = GroupoidChart::midpoint_matrix().determinant();
        let ok = m.then(&inv)?.is_identity() && inv.then(&m)?.is_identity() && det == rational(1, 4);
        Ok(holds(ok, || format!("det = {det}")))
    })());

    r.push("groupoid.omega_closed", "d w_T = 0", omega_t(&chart).and_then(|w| crate::graded::de_rham_d(w.form())).map(zero));

    r.push("groupoid.omega_multiplicative", "s_i^* w_T = 0 and D w_T = 0", (|| {
        let m = crate::simplicial::is_multiplicative(&chart, &omega_t(&chart)?)?;
        Ok(holds(m.passed(), || m.failures().join("; ")))
    })());

    r.push("groupoid.alpha_primitive", "w_T = D a and D D a = 0", (|| {
        let a = alpha_certificate(&chart)?;
        if !a.dd_alpha.is_zero() {
            return Ok(Some(format!("D D a = {}", a.dd_alpha.form())));
        }
        Ok(zero(a.residual()))
    })());

    r.push("groupoid.alpha_not_multiplicative", "a = sum dw01 d(mid) is not multiplicative", (|| {
        let m = crate::simplicial::is_multiplicative(&chart, &alpha(&chart)?)?;
        Ok(holds(!m.passed(), || "a passed the multiplicativity test".into()))
    })());

    r.push("groupoid.mu_stokes", "d mu = d_0^* k - d_1^* k", (|| Ok(zero(stokes_check(&chart, kappa.form())?.reversed_residual())))());

    r.push("groupoid.mu_stokes_open_form", "d mu(t) = d_0^* t - d_1^* t - int G^* d t", (|| {
        if d < 2 {
            return Ok(None);
        }
        let b = ChartScheme::base(d);
        let tau = BaseForm::from_terms(d, 1, &[(vec![2], Poly::gen(&b, Generator::x(1)))])?;
        let report = stokes_check(&chart, &tau)?;
        if report.correction.is_zero() {
            return Ok(Some("correction vanished for a non-closed form".into()));
        }
        Ok(zero(report.reversed_residual()))
    })());

    r.push("groupoid.mu_quadrature", "mu(k) = int_0^1 G^* k to 1e-10 at 10 random points", (|| {
        let e = mu_quadrature_error(&chart, kappa.form(), c.seed, QUADRATURE_POINTS, QUADRATURE_TOLERANCE)?;
        Ok(holds(e <= QUADRATURE_TOLERANCE, || format!("max deviation {e:e}")))
    })());

    r.push("groupoid.varkappa", "D varkappa = 0, s_i^* varkappa = 0, d varkappa = 0", (|| {
        let v = varkappa_report(&chart, kappa)?;
        if !v.d_varkappa.is_zero() {
            return Ok(Some(format!("d varkappa = {}", v.d_varkappa)));
        }
        Ok(holds(v.multiplicativity.passed(), || v.multiplicativity.failures().join("; ")))
    })());

    r.push("groupoid.twisted_nondegenerate", "w_T - q_T^* varkappa is nondegenerate", (|| {
        let t = twisted_form(&chart, kappa)?;
        Ok(holds(t.nondegenerate(), || format!("mixed block determinant {}", t.mixed_determinant)))
    })());
}

fn jet(r: &mut Recorder, c: &SuiteConfig) {
    let d = c.dim;
    let chart = GroupoidChart::new(d);
    let kappa = &c.kappa;
    let cap = c.level_cap;

    let simplicial_outcome = |coeffs: &FiberCoefficients| -> Outcome {
        let report = check_simplicial(&chart, coeffs, cap)?;
        Ok(report.failures.first().map(|f| format!("{} at {}: {}", f.map, f.generator, f.residual)))
    };
    r.push("jet.ev_simplicial", "ev_l . reindex(f) = f^* . ev_k for all f:[l]->[k]", simplicial_outcome(&FiberCoefficients::canonical(d)));
    r.push("jet.ev_degenerate", "the p = 0 family is simplicial", simplicial_outcome(&FiberCoefficients::degenerate(d)));

    r.push("jet.ev_perturbed_obstructed", "a != -b breaks compatibility at s^0:[1]->[0]", (|| {
        let mut coeffs = FiberCoefficients::canonical(d);
        coeffs.a = coeffs.b.clone();
        let report = check_simplicial(&chart, &coeffs, cap.min(2))?;
        let witness = MonotoneMap::codegeneracy(0, 0);
        Ok(holds(report.failures.iter().any(|f| f.map == witness), || "no failure at s^0".into()))
    })());

    let s = ChartScheme::phase(d);
    let eta = Poly::gen(&s, Generator::eta(1));
    let p = Poly::gen(&s, Generator::p(1));
    let slot = |level, i, j, kind| Slot { level, i, j, kind };

    r.push("jet.extension_unique", "w01 = -eta th0 + eta th1 + p th0 th1 extends uniquely to levels <= 3", (|| {
        match extension_solve(&-eta.clone(), &eta, &p)? {
            Extension::Unique { values, .. } => {
                let ok = values[&slot(3, 0, 2, SlotKind::A)] == -eta.clone()
                    && values[&slot(3, 0, 2, SlotKind::B)] == eta
                    && values[&slot(3, 1, 3, SlotKind::C)] == p;
                Ok(holds(ok, || "extension differs from w_ij = eta (th_j - th_i) + p th_i th_j".into()))
            }
            Extension::Obstructed { constraint, residual } => Ok(Some(format!("{constraint}: {residual}"))),
        }
    })());

    r.push("jet.extension_obstructed", "a + b != 0 has no extension, witness s^0:[1]->[0]", (|| {
        match extension_solve(&eta, &eta, &Poly::zero(&s))? {
            Extension::Obstructed { constraint, .. } if constraint.map == MonotoneMap::codegeneracy(0, 0) => Ok(None),
            Extension::Obstructed { constraint, .. } => Ok(Some(format!("witness {}", constraint.map))),
            Extension::Unique { .. } => Ok(Some("extension exists".into())),
        }
    })());

    let ranks = extension_ranks(3);
    let ok = ranks.nullity == 2 && ranks.level_one_free.len() == 2;
    r.push(
        "jet.extension_ranks",
        "homogeneous system on levels <= 3 has nullity 2 (b, c free; a = -b)",
        Ok(holds(ok, || format!("rank {} of {}, free {:?}", ranks.rank, ranks.unknowns, ranks.level_one_free))),
    );

    for n in 1..=cap.min(3) {
        r.push(&format!("jet.qflow.level{n}"), "th acts by (x + th xi, xi, p, eta + th p) with derivative Q", (|| {
            let q = qflow_extract(&chart, n)?;
            if let Some(res) = render_residuals(&q.induced.residuals(&q.expected)) {
                return Ok(Some(res));
            }
            if let Some(res) = render_residuals(&q.generator.residuals(&q.q)?) {
                return Ok(Some(format!("derivative: {res}")));
            }
            Ok(holds(q.identity_at_zero, || "action at th = 0 is not the identity".into()))
        })());
    }

    r.push("jet.integration_theorem", "1-Jet(w_T) = dp_a dx^a + deta_a dxi^a", integration_theorem(&chart).map(|(_, res)| zero(res)));

    r.push("jet.exact_theorem", "1-Jet(w_T - q_T^* varkappa) = w - L_{Q_dR} i_{Q_dR} q_M^* k", exact_theorem(&chart, kappa).map(|(_, res)| zero(res)));

    r.push("jet.lemma_varkappa", "1-Jet(varkappa) = L_{Q_dR} i_{Q_dR} k = 3 d(k_abc xi^a xi^b dx^c), mu(ev) formula", (|| {
        let report = verify_lemma_varkappa(&chart, kappa)?;
        for (name, res) in report.residuals() {
            if !res.is_zero() {
                return Ok(Some(format!("{name}: {res}")));
            }
        }
        Ok(None)
    })());
}
