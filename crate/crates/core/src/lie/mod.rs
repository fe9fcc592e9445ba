mod alcove;
mod algebra;
mod automorphism;

pub use alcove::{alcove_contains, Alcove};
pub use algebra::{AlgebraDescriptor, AlgebraVector, Family, PositiveRoot, SimpleLieAlgebra};
pub use automorphism::DiagramAutomorphism;
