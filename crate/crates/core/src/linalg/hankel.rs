use crate::error::{Result, WaringError};
use crate::form::BinaryForm;
use crate::linalg::affine::AffineSolutionSet;
use crate::scalar::Scalar;

/// The recurrence system `sum_j a_{i+j} c_j = -a_{i+r}` for `i = 0..=d-r`.
#[derive(Debug, Clone, PartialEq)]
pub struct HankelSystem<S> {
    pub matrix: Vec<Vec<S>>,
    pub rhs: Vec<S>,
    pub degree: usize,
    pub order: usize,
}

/// Builds the `(d-r+1) x r` Hankel system of order `r` for `f`.
pub fn build_hankel<S: Scalar>(f: &BinaryForm<S>, r: usize) -> Result<HankelSystem<S>> {
    let d = f.degree();
    if r < 1 || r > d {
        return Err(WaringError::OutOfRange {
            what: "order",
            value: r,
            min: 1,
            max: d,
        });
    }
    let a = f.coeffs();
    let matrix = (0..=d - r)
        .map(|i| (0..r).map(|j| a[i + j].clone()).collect())
        .collect();
    let rhs = (r..=d).map(|i| -a[i].clone()).collect();
    Ok(HankelSystem {
        matrix,
        rhs,
        degree: d,
        order: r,
    })
}

/// Solves a Hankel system; `None` means it has no solution.
pub fn solve_affine<S: Scalar>(sys: &HankelSystem<S>, rank_tol: f64) -> Option<AffineSolutionSet<S>> {
    S::solve_linear(&sys.matrix, &sys.rhs, rank_tol)
}

/// Extends `a_0..=a_d` to `a_0..a_len` with the recurrence
/// `a_i = -(c_0 a_{i-r} + ... + c_{r-1} a_{i-1})`.
pub fn extend_moments<S: Scalar>(a: &[S], c: &[S], len: usize) -> Vec<S> {
    let r = c.len();
    let mut out = a.to_vec();
    while out.len() < len {
        let i = out.len();
        let next = c
            .iter()
            .enumerate()
            .fold(S::zero(), |acc, (j, cj)| acc + cj.clone() * out[i - r + j].clone());
        out.push(-next);
    }
    out.truncate(len.max(a.len()));
    out
}

/// Square blocks `A0 = [a_{i+j}]` and `A1 = [a_{i+j+1}]` of order `r`, built
/// from the moment sequence extended by the recurrence `c`.
pub fn square_blocks<S: Scalar>(f: &BinaryForm<S>, c: &[S]) -> (Vec<Vec<S>>, Vec<Vec<S>>) {
    let r = c.len();
    let a = extend_moments(f.coeffs(), c, 2 * r);
    let block = |shift: usize| -> Vec<Vec<S>> {
        (0..r)
            .map(|i| (0..r).map(|j| a[i + j + shift].clone()).collect())
            .collect()
    };
    (block(0), block(1))
}
