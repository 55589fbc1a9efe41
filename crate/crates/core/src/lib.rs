pub mod affine;
pub mod algebra;
pub mod branching;
pub mod cli;
pub mod embedding;
pub mod error;
pub mod linalg;
pub mod nimrep;
pub mod quadrature;
pub mod weyl;
