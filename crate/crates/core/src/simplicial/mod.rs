//! The simplex category, Eilenberg–MacLane objects and form cochains.

mod cochain;
mod em;
mod monotone;

pub use cochain::{
    degeneracy_pullback, is_multiplicative, simplicial_d, FormCochain, MultiplicativityReport, SimplicialChart,
};
pub use em::{
    em_induced, em_level, horn_restriction, kan_classify, moore_homology, EmElement, EmSpace, HornRestriction,
    KanClass,
};
pub use monotone::{Factorization, MonotoneMap};
