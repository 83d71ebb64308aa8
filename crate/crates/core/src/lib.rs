//! Waring rank and minimal power-sum decompositions of complex binary forms.
//!
//! A binary form `f(x, y)` of degree `d` is written as a sum of `r` powers
//! `lambda_k (x + beta_k y)^d`, plus possibly one `mu y^d` term, with `r` as
//! small as possible. The driver in [`waring`] finds the rank through Hankel
//! recurrences on the binomial-normalized coefficients; [`apolarity`]
//! recomputes it independently from catalecticant kernels.

pub mod apolarity;
pub mod error;
pub mod form;
pub mod linalg;
pub mod parser;
pub mod sampling;
pub mod scalar;
pub mod waring;

pub use error::{Result, WaringError};
pub use form::{apply_operator, BinaryForm, Decomposition, DiffOperator, LinearFormPower};
pub use linalg::{AffineSolutionSet, Certainty, MonicPoly};
pub use parser::{format_decomposition, format_form, parse_decomposition, parse_form, parse_operator, ParseError};
pub use scalar::{GaussRational, Scalar, C64};
pub use apolarity::{annihilator_space, apolarity_check, oracle_rank, squarefree_binary, AnnihilatorBasis, OracleRank};
pub use waring::{
    decompose, decompose_branch, decompose_with_report, enumerate_decompositions, f_rank, residuals,
    roots_of_unity_decomposition, same_terms, verify, verify_decomposed, waring_rank, Branch, Decomposed, FRank,
    FRankCertificate, RankReport, Settings, VerificationReport,
};
