//! Search for a parameter point at which a polynomial condition holds.
//!
//! The searched predicate is "a polynomial of total degree at most `D` in the
//! `p` integer parameters is nonzero". Small deterministic points go first,
//! then seeded random points. When the principal lattice
//! `{t in N^p : |t| <= D}` has at most `lattice_limit` points the search
//! finishes by walking it; the lattice is unisolvent for polynomials of total
//! degree `D`, so a polynomial vanishing on all of it is identically zero and
//! the negative answer is certified.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::linalg::affine::AffineSolutionSet;
use crate::linalg::poly::{is_squarefree, MonicPoly};
use crate::scalar::Scalar;

/// Random parameters are drawn uniformly from `[-RANDOM_RANGE, RANDOM_RANGE]`.
pub const RANDOM_RANGE: i64 = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Certainty {
    Exact,
    /// The answer is "not found" but the lattice was too large to walk;
    /// `failure_bound` bounds the probability that a witness was missed.
    Probabilistic { failure_bound: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchOptions {
    pub seed: u64,
    pub budget: usize,
    pub lattice_limit: usize,
    /// Relative tolerance for float resultant tests.
    pub tol: f64,
}

impl Default for SearchOptions {
    fn default() -> Self {
        Self {
            seed: 0,
            budget: 64,
            lattice_limit: 100_000,
            tol: 1e-10,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ParamSearch {
    Found(Vec<i64>),
    NotFound(Certainty),
}

/// Deterministic small points: the origin, then `-e_m, +e_m, -2e_m, +2e_m`.
pub fn deterministic_points(p: usize) -> Vec<Vec<i64>> {
    let mut out = vec![vec![0; p]];
    for scale in [1, 2] {
        for m in 0..p {
            for sign in [-1, 1] {
                let mut t = vec![0; p];
                t[m] = sign * scale;
                out.push(t);
            }
        }
    }
    out
}

/// Number of lattice points `C(p + D, D)`, saturating.
pub fn lattice_size(p: usize, degree_bound: usize) -> usize {
    let mut acc: u128 = 1;
    for i in 1..=p as u128 {
        acc = acc * (degree_bound as u128 + i) / i;
        if acc > usize::MAX as u128 {
            return usize::MAX;
        }
    }
    acc as usize
}

/// Visits every `t in N^p` with `|t| <= bound`; stops early when `visit` returns true.
pub fn walk_lattice(p: usize, bound: usize, visit: &mut impl FnMut(&[i64]) -> bool) -> Option<Vec<i64>> {
    fn rec(
        t: &mut Vec<i64>,
        idx: usize,
        remaining: usize,
        visit: &mut impl FnMut(&[i64]) -> bool,
    ) -> bool {
        if idx == t.len() {
            return visit(t);
        }
        for v in 0..=remaining {
            t[idx] = v as i64;
            if rec(t, idx + 1, remaining - v, visit) {
                return true;
            }
        }
        t[idx] = 0;
        false
    }
    let mut t = vec![0; p];
    rec(&mut t, 0, bound, visit).then_some(t)
}

/// Finds integer parameters where `accept` holds, assuming the failure set is
/// the zero set of a polynomial of total degree at most `degree_bound`.
pub fn search_parameters(
    p: usize,
    degree_bound: usize,
    opts: &SearchOptions,
    mut accept: impl FnMut(&[i64]) -> bool,
) -> ParamSearch {
    for t in deterministic_points(p) {
        if accept(&t) {
            return ParamSearch::Found(t);
        }
        if p == 0 {
            return ParamSearch::NotFound(Certainty::Exact);
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    for _ in 0..opts.budget {
        let t: Vec<i64> = (0..p).map(|_| rng.gen_range(-RANDOM_RANGE..=RANDOM_RANGE)).collect();
        if accept(&t) {
            return ParamSearch::Found(t);
        }
    }
    if lattice_size(p, degree_bound) <= opts.lattice_limit {
        return match walk_lattice(p, degree_bound, &mut accept) {
            Some(t) => ParamSearch::Found(t),
            None => ParamSearch::NotFound(Certainty::Exact),
        };
    }
    let failure_bound =
        (degree_bound as f64 * opts.budget as f64 / (2.0 * RANDOM_RANGE as f64 + 1.0)).min(1.0);
    ParamSearch::NotFound(Certainty::Probabilistic { failure_bound })
}

#[derive(Debug, Clone, PartialEq)]
pub enum SquarefreeSearch<S> {
    Found { poly: MonicPoly<S>, params: Vec<i64> },
    NotFound(Certainty),
}

/// Looks for `c` in the affine family with `T(x) = x^r + ... + c_0` squarefree.
///
/// `Res(T, T')` restricted to the family has total degree at most `2r - 1` in
/// the family parameters, which is the degree bound used for certification.
pub fn find_squarefree_member<S: Scalar>(
    set: &AffineSolutionSet<S>,
    opts: &SearchOptions,
) -> SquarefreeSearch<S> {
    let r = set.particular.len();
    let degree_bound = (2 * r).saturating_sub(1);
    let test = |t: &[i64]| is_squarefree(&MonicPoly::new(set.member_i64(t)), opts.tol);
    match search_parameters(set.dim(), degree_bound, opts, test) {
        ParamSearch::Found(params) => SquarefreeSearch::Found {
            poly: MonicPoly::new(set.member_i64(&params)),
            params,
        },
        ParamSearch::NotFound(c) => SquarefreeSearch::NotFound(c),
    }
}
