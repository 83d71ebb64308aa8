//! Structured linear algebra and univariate polynomial tools behind the
//! rank algorithm.

pub mod affine;
pub mod hankel;
pub mod poly;
pub mod search;
pub mod vandermonde;

pub use affine::{determinant, AffineSolutionSet};
pub use hankel::{build_hankel, extend_moments, solve_affine, square_blocks, HankelSystem};
pub use poly::{is_squarefree, poly_gcd, poly_roots, resultant, resultant_ttprime, MonicPoly, Roots};
pub use search::{find_squarefree_member, Certainty, SearchOptions, SquarefreeSearch};
pub use vandermonde::{vandermonde_least_squares, vandermonde_solve};
