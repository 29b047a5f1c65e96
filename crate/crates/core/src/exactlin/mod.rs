//! Exact linear algebra over the rationals, prime fields and the integers.

pub mod echelon;
pub mod field;
pub mod homology;
pub mod intmat;
pub mod sparse;

pub use field::{Scalar, ScalarField};
pub use homology::{complex_homology, graded_betti, ChainComplex, Homology};
pub use intmat::{hermite_rows, integer_kernel, smith_normal_form, solve_integer, IntMatrix, SmithForm};
pub use sparse::{rank, rank_of_vectors, row_reduce, Coordinates, RowReduction, SparseMatrix, SparseVec, Subspace};
