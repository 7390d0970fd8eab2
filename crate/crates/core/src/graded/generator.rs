use std::fmt;

/// Coordinate families that can appear in a chart.
///
/// The declaration order is the name-class component of the canonical
/// monomial order: x < ξ < η < p < θ < (everything introduced by the
/// simplicial models).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    /// Base coordinate x^a, degree 0.
    X,
    /// Odd fibre coordinate ξ^a = "dx^a" on T[1]M, degree 1.
    Xi,
    /// Odd momentum η_a conjugate to ξ^a, degree 1.
    Eta,
    /// Momentum p_a conjugate to x^a, degree 2.
    P,
    /// Odd point θ_i of E_nℝ^{0|1}.
    Theta,
    /// Odd parameter of the diagonal ℝ^{0|1}-action on E_•ℝ^{0|1}.
    Flow,
    /// Vertex coordinate z_i^a of a simplex.
    Vertex,
    /// Fibre coordinate w_{ij,a}, stored for i < j only.
    Fiber,
    /// Interval coordinate t used by fibre integration.
    Time,
    /// Base point y_k^a of the k-th factor of (T*M)^3.
    Point,
    /// Covector u_{k,a} of the k-th factor of (T*M)^3.
    Covector,
}

impl Family {
    pub fn internal_degree(self) -> u8 {
        match self {
            Family::Xi | Family::Eta => 1,
            Family::P => 2,
            _ => 0,
        }
    }

    pub fn theta_weight(self) -> u8 {
        match self {
            Family::Theta | Family::Flow => 1,
            _ => 0,
        }
    }

    fn stem(self) -> &'static str {
        match self {
            Family::X => "x",
            Family::Xi => "xi",
            Family::Eta => "eta",
            Family::P => "p",
            Family::Theta | Family::Flow => "th",
            Family::Vertex => "z",
            Family::Fiber => "w",
            Family::Time => "t",
            Family::Point => "y",
            Family::Covector => "u",
        }
    }
}

/// A single generator of a free graded-commutative algebra.
///
/// `slots` holds the indices: the coordinate index for x, ξ, η, p; the
/// vertex for θ; `(i, a)` for vertices and points; `(i, j, a)` for fibres.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Generator {
    pub family: Family,
    pub slots: [u8; 3],
    pub differential: bool,
}

impl Generator {
    pub const fn new(family: Family, slots: [u8; 3]) -> Self {
        Generator { family, slots, differential: false }
    }

    pub const fn x(a: u8) -> Self {
        Self::new(Family::X, [a, 0, 0])
    }
    pub const fn xi(a: u8) -> Self {
        Self::new(Family::Xi, [a, 0, 0])
    }
    pub const fn eta(a: u8) -> Self {
        Self::new(Family::Eta, [a, 0, 0])
    }
    pub const fn p(a: u8) -> Self {
        Self::new(Family::P, [a, 0, 0])
    }
    pub const fn theta(i: u8) -> Self {
        Self::new(Family::Theta, [i, 0, 0])
    }
    pub const fn flow() -> Self {
        Self::new(Family::Flow, [0, 0, 0])
    }
    pub const fn vertex(i: u8, a: u8) -> Self {
        Self::new(Family::Vertex, [i, a, 0])
    }
    /// Fibre coordinate w_{ij,a}; callers must pass `i < j`.
    pub const fn fiber(i: u8, j: u8, a: u8) -> Self {
        Self::new(Family::Fiber, [i, j, a])
    }
    pub const fn time() -> Self {
        Self::new(Family::Time, [0, 0, 0])
    }
    pub const fn point(k: u8, a: u8) -> Self {
        Self::new(Family::Point, [k, a, 0])
    }
    pub const fn covector(k: u8, a: u8) -> Self {
        Self::new(Family::Covector, [k, a, 0])
    }

    /// The differential partner `d(self)`. Panics on a differential.
    pub fn d(self) -> Self {
        assert!(!self.differential, "differentials have no differential partner");
        Generator { differential: true, ..self }
    }

    /// The generator a differential is the differential of.
    pub fn undifferentiated(self) -> Self {
        Generator { differential: false, ..self }
    }

    pub fn form_degree(self) -> u8 {
        self.differential as u8
    }

    pub fn internal_degree(self) -> u8 {
        self.family.internal_degree()
    }

    pub fn theta_weight(self) -> u8 {
        self.family.theta_weight()
    }

    pub fn bidegree(self) -> (u8, u8) {
        (self.form_degree(), self.internal_degree())
    }

    pub fn is_odd(self) -> bool {
        (self.form_degree() + self.internal_degree() + self.theta_weight()) % 2 == 1
    }

    /// Sort key of the canonical monomial order.
    pub(crate) fn sort_key(self) -> (u8, u8, Family, [u8; 3]) {
        (self.form_degree(), self.internal_degree(), self.family, self.slots)
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.differential {
            f.write_str("d")?;
        }
        f.write_str(self.family.stem())?;
        let [s0, s1, s2] = self.slots;
        match self.family {
            Family::X | Family::Xi | Family::Eta | Family::P | Family::Theta => write!(f, "{s0}"),
            Family::Flow | Family::Time => Ok(()),
            Family::Vertex | Family::Point | Family::Covector => write!(f, "{s0}_{s1}"),
            Family::Fiber => write!(f, "{s0}{s1}_{s2}"),
        }
    }
}
