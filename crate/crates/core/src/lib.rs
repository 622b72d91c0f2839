//! Subgroups of the modular group through their dessins: permutation
//! triples, coset graphs, free generators, Belyi maps and the six-cusp
//! census at index 24.

pub mod belyi;
pub mod catalog;
pub mod cli;
pub mod dessin;
pub mod modular;
pub mod perm;
pub mod scalar;
pub mod search;

pub use belyi::poly::Polynomial;
pub use belyi::ratfunc::RationalFunction;
pub use dessin::{Constellation, RamificationData};
pub use perm::{Partition, Permutation};

pub type Rational = num_rational::BigRational;
pub type RationalPoly = Polynomial<Rational>;
pub type RatFunc = RationalFunction<Rational>;
pub use modular::{GroupWord, Matrix2};
