//! Sparse GF(2) matrices, binary polynomial matrices and their file formats.

mod alist;
mod linalg;
mod poly;
mod sparse;

pub use alist::{read_alist, write_alist};
pub use linalg::{gf2_rank, nullspace_basis, row_space_equal, BitMatrix};
pub use poly::PolyMatrix;
pub use sparse::{DegreeProfile, SparseBinMatrix};
