//! Free graded-commutative polynomial algebras over exact rationals, with
//! derivations, coordinate maps and Cartan calculus.

mod cartan;
mod derivation;
mod generator;
mod map;
mod parse;
mod poly;
mod scheme;

pub use cartan::{de_rham, de_rham_d, interior, interior_and_lie, lie};
pub use derivation::Derivation;
pub use generator::{Family, Generator};
pub use map::CoordinateMap;
pub use parse::parse;
pub use poly::{integer, rational, Grading, Monomial, Poly, Rational};
pub use scheme::{same_scheme, ChartScheme, GenId};
