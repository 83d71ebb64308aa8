//! Apolarity: operators in `dx, dy` acting on forms, graded pieces of the
//! annihilator `f^perp`, and a brute-force Waring rank from them.
//!
//! `(f^perp)_e` is the kernel of the catalecticant `[a_{i+j}]` with
//! `d - e + 1` rows and `e + 1` columns: for `g = sum_j b_j dx^{e-j} dy^j`,
//! the `k`-th normalized coefficient of `g o f` is `d!/(d-e)! sum_j b_j a_{k+j}`.
//! The rank is the least `e` whose piece contains an operator with no
//! repeated projective root.

use num_traits::Zero;

use crate::error::{Result, WaringError};
use crate::form::{apply_operator, BinaryForm, DiffOperator};
use crate::linalg::poly::{is_squarefree, poly_gcd, resultant, trim, MonicPoly};
use crate::linalg::search::{search_parameters, Certainty, ParamSearch, SearchOptions};
use crate::scalar::{falling, Scalar};

/// `(d - e + 1) x (e + 1)` matrix `[a_{i+j}]`.
pub fn catalecticant<S: Scalar>(f: &BinaryForm<S>, e: usize) -> Result<Vec<Vec<S>>> {
    let d = f.degree();
    if e > d {
        return Err(WaringError::OutOfRange {
            what: "operator degree",
            value: e,
            min: 0,
            max: d,
        });
    }
    let a = f.coeffs();
    Ok((0..=d - e)
        .map(|i| (0..=e).map(|j| a[i + j].clone()).collect())
        .collect())
}

/// Basis of the degree-`e` operators annihilating a form.
#[derive(Debug, Clone, PartialEq)]
pub struct AnnihilatorBasis<S> {
    pub degree: usize,
    pub basis: Vec<DiffOperator<S>>,
}

impl<S: Scalar> AnnihilatorBasis<S> {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn combination(&self, params: &[i64]) -> DiffOperator<S> {
        let mut coeffs = vec![S::zero(); self.degree + 1];
        for (t, g) in params.iter().zip(&self.basis) {
            if *t == 0 {
                continue;
            }
            let t = S::from_i64(*t);
            for (c, b) in coeffs.iter_mut().zip(g.coeffs()) {
                *c = c.clone() + t.clone() * b.clone();
            }
        }
        DiffOperator::new(coeffs).expect("nonempty")
    }
}

/// `(f^perp)_e` for `1 <= e <= d`; `rank_tol` only affects the float backend.
pub fn annihilator_space<S: Scalar>(f: &BinaryForm<S>, e: usize, rank_tol: f64) -> Result<AnnihilatorBasis<S>> {
    let d = f.degree();
    if e < 1 || e > d {
        return Err(WaringError::OutOfRange {
            what: "operator degree",
            value: e,
            min: 1,
            max: d,
        });
    }
    let cat = catalecticant(f, e)?;
    let zeros = vec![S::zero(); cat.len()];
    let set = S::solve_linear(&cat, &zeros, rank_tol).ok_or_else(|| {
        WaringError::Inconsistent("homogeneous system reported inconsistent".into())
    })?;
    let basis = set
        .basis
        .into_iter()
        .map(|b| DiffOperator::new(b).expect("nonempty"))
        .collect();
    Ok(AnnihilatorBasis { degree: e, basis })
}

/// Dehomogenized operator `P(t) = sum_j b_j t^j` (set `dx = 1`, `dy = t`),
/// trimmed, and the multiplicity of the root at infinity `e - deg P`.
fn dehomogenize<S: Scalar>(g: &DiffOperator<S>) -> (Vec<S>, usize) {
    let p = trim(g.coeffs().to_vec());
    let at_infinity = g.degree() + 1 - p.len();
    (p, at_infinity)
}

/// True when `g` has no repeated projective root (root at infinity included).
///
/// The exact backend decides `gcd(P, P') = 1` by Euclid; the float backend
/// tests the resultant against its Hadamard scale with tolerance `tol`.
pub fn squarefree_binary<S: Scalar>(g: &DiffOperator<S>, tol: f64) -> Result<bool> {
    if g.is_zero() {
        return Err(WaringError::ZeroOperator);
    }
    let (p, at_infinity) = dehomogenize(g);
    if at_infinity > 1 {
        return Ok(false);
    }
    if p.len() <= 2 {
        return Ok(true);
    }
    if S::EXACT {
        let dp = crate::linalg::poly::derivative(&p);
        Ok(poly_gcd(&p, &dp).len() == 1)
    } else {
        let lead = p.last().expect("nonempty").clone();
        let lower: Vec<S> = p[..p.len() - 1].iter().map(|c| c.clone() / lead.clone()).collect();
        Ok(is_squarefree(&MonicPoly::new(lower), tol))
    }
}

/// `Res(dg/du, dg/dv)` with formal degrees `e - 1`: a homogeneous polynomial
/// of degree `2e - 2` in the coefficients of `g`, nonzero exactly when `g` has
/// no repeated projective root (for `e >= 2`).
pub fn projective_discriminant<S: Scalar>(g: &DiffOperator<S>) -> S {
    let e = g.degree();
    if e < 2 {
        return S::one();
    }
    let b = g.coeffs();
    // g(u, v) = sum_j b_j u^{e-j} v^j, dehomogenized in v/u with ascending powers of v.
    let du: Vec<S> = (0..e).map(|j| b[j].clone() * S::from_usize(e - j)).collect();
    let dv: Vec<S> = (0..e).map(|j| b[j + 1].clone() * S::from_usize(j + 1)).collect();
    resultant(&du, &dv)
}

/// Normalized residual `|g o f|_inf / (d!/(d-e)! |b|_1 |a|_inf)`; zero when
/// `deg g > deg f`.
pub fn operator_residual<S: Scalar>(g: &DiffOperator<S>, f: &BinaryForm<S>) -> f64 {
    let d = f.degree();
    let e = g.degree();
    if e > d {
        return 0.0;
    }
    let image = apply_operator(g, f).expect("operator degree checked");
    let raw = image.norm_inf();
    if raw == 0.0 {
        return 0.0;
    }
    let scale = falling::<S>(d, e).magnitude() * g.norm_l1() * f.norm_inf();
    if scale == 0.0 {
        raw
    } else {
        raw / scale
    }
}

/// Whether `prod (dy - beta dx)`, times `dx` when `include_y`, annihilates `f`.
///
/// Exact backend: exact zero test. Float backend: [`operator_residual`] at most `tol`.
pub fn apolarity_check<S: Scalar>(f: &BinaryForm<S>, betas: &[S], include_y: bool, tol: f64) -> Result<bool> {
    for i in 0..betas.len() {
        if betas[i + 1..].contains(&betas[i]) {
            return Err(WaringError::DuplicateNodes);
        }
    }
    let mut g = DiffOperator::product_of_factors(betas);
    if include_y {
        g = g.compose(&DiffOperator::dx());
    }
    if g.degree() > f.degree() {
        return Ok(true);
    }
    let image = apply_operator(&g, f)?;
    if S::EXACT {
        Ok(image.is_zero())
    } else {
        Ok(operator_residual(&g, f) <= tol)
    }
}

/// Oracle answer: the rank and whether smaller degrees were ruled out exactly.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleRank {
    pub rank: usize,
    pub certainty: Certainty,
}

/// Least `e` such that `(f^perp)_e` contains a squarefree operator.
///
/// Within a kernel of dimension `m` the search runs over integer combinations
/// of the basis; the failure set is the zero set of [`projective_discriminant`],
/// of degree `2e - 2`, which the lattice walk can certify.
pub fn oracle_rank<S: Scalar>(f: &BinaryForm<S>, opts: &SearchOptions, rank_tol: f64) -> Result<OracleRank> {
    if f.is_zero() {
        return Err(WaringError::ZeroForm);
    }
    let d = f.degree();
    if d == 0 {
        return Ok(OracleRank {
            rank: 1,
            certainty: Certainty::Exact,
        });
    }
    let mut missed = 0.0f64;
    for e in 1..=d {
        let space = annihilator_space(f, e, rank_tol)?;
        if space.dim() == 0 {
            continue;
        }
        if S::EXACT && common_factor_obstructs(&space) {
            continue;
        }
        let degree_bound = 2 * e - 2;
        let accept = |t: &[i64]| {
            let g = space.combination(t);
            !g.is_zero() && squarefree_binary(&g, opts.tol).unwrap_or(false)
        };
        match search_parameters(space.dim(), degree_bound, opts, accept) {
            ParamSearch::Found(_) => {
                let certainty = if missed > 0.0 {
                    Certainty::Probabilistic {
                        failure_bound: missed.min(1.0),
                    }
                } else {
                    Certainty::Exact
                };
                return Ok(OracleRank { rank: e, certainty });
            }
            ParamSearch::NotFound(Certainty::Probabilistic { failure_bound }) => missed += failure_bound,
            ParamSearch::NotFound(Certainty::Exact) => {}
        }
    }
    Err(WaringError::SearchExhausted { degree: d })
}

/// True when all operators in the space share a factor with a repeated
/// projective root, so that no element can be squarefree. Exact backend only.
fn common_factor_obstructs<S: Scalar>(space: &AnnihilatorBasis<S>) -> bool {
    let mut at_infinity = usize::MAX;
    let mut common: Option<Vec<S>> = None;
    for g in &space.basis {
        let (p, inf) = dehomogenize(g);
        at_infinity = at_infinity.min(inf);
        common = Some(match common {
            None => p,
            Some(c) => poly_gcd(&c, &p),
        });
    }
    if at_infinity >= 2 {
        return true;
    }
    let Some(common) = common.map(trim) else {
        return false;
    };
    if common.len() <= 2 {
        return false;
    }
    let dc = crate::linalg::poly::derivative(&common);
    poly_gcd(&common, &dc).len() > 1
}

/// Whether every element of the basis kills `f` (exactly, or within `tol`).
pub fn annihilates<S: Scalar>(basis: &AnnihilatorBasis<S>, f: &BinaryForm<S>, tol: f64) -> bool {
    basis.basis.iter().all(|g| {
        if S::EXACT {
            apply_operator(g, f).is_ok_and(|h| h.is_zero())
        } else {
            operator_residual(g, f) <= tol
        }
    })
}

/// True when `g o f` vanishes identically on the exact backend.
pub fn is_apolar<S: Scalar>(g: &DiffOperator<S>, f: &BinaryForm<S>) -> Result<bool> {
    Ok(apply_operator(g, f)?.coeffs().iter().all(Zero::is_zero))
}
