//! Univariate polynomial utilities: monic polynomials, Sylvester resultants,
//! Euclidean gcd, and root extraction.

use num_complex::Complex;
use num_traits::{One, Zero};

use crate::error::{Result, WaringError};
use crate::linalg::affine::determinant;
use crate::scalar::{max_magnitude, Scalar, C64};

/// `T(x) = x^r + c_{r-1} x^{r-1} + ... + c_0`.
#[derive(Debug, Clone, PartialEq)]
pub struct MonicPoly<S> {
    lower: Vec<S>,
}

impl<S: Scalar> MonicPoly<S> {
    /// Monic polynomial with lower coefficients `c_0..c_{r-1}`.
    pub fn new(lower: Vec<S>) -> Self {
        Self { lower }
    }

    /// `prod_k (x - root_k)`.
    pub fn from_roots(roots: &[S]) -> Self {
        let mut coeffs = vec![S::one()];
        for root in roots {
            let mut next = vec![S::zero(); coeffs.len() + 1];
            for (i, c) in coeffs.iter().enumerate() {
                next[i + 1] = next[i + 1].clone() + c.clone();
                next[i] = next[i].clone() - c.clone() * root.clone();
            }
            coeffs = next;
        }
        coeffs.pop();
        Self { lower: coeffs }
    }

    pub fn degree(&self) -> usize {
        self.lower.len()
    }

    pub fn lower_coeffs(&self) -> &[S] {
        &self.lower
    }

    /// All coefficients in ascending order, ending with the leading 1.
    pub fn ascending(&self) -> Vec<S> {
        self.lower
            .iter()
            .cloned()
            .chain(std::iter::once(S::one()))
            .collect()
    }

    pub fn eval(&self, x: &S) -> S {
        horner(&self.ascending(), x)
    }

    /// Ascending coefficients of `T'`.
    pub fn derivative(&self) -> Vec<S> {
        derivative(&self.ascending())
    }

    /// Companion matrix whose characteristic polynomial is `T`.
    pub fn companion(&self) -> Vec<Vec<S>> {
        let r = self.degree();
        let mut m = vec![vec![S::zero(); r]; r];
        for i in 1..r {
            m[i][i - 1] = S::one();
        }
        for (i, c) in self.lower.iter().enumerate() {
            m[i][r - 1] = -c.clone();
        }
        m
    }

    pub fn coeff_norm_inf(&self) -> f64 {
        max_magnitude(&self.lower)
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> MonicPoly<T> {
        MonicPoly {
            lower: self.lower.iter().map(f).collect(),
        }
    }
}

pub(crate) fn horner<S: Scalar>(ascending: &[S], x: &S) -> S {
    ascending
        .iter()
        .rev()
        .fold(S::zero(), |acc, c| acc * x.clone() + c.clone())
}

pub(crate) fn derivative<S: Scalar>(ascending: &[S]) -> Vec<S> {
    ascending
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c.clone() * S::from_usize(i))
        .collect()
}

/// Sylvester matrix of `f` and `g` taken with formal degrees `len - 1`
/// (ascending coefficient input, rows in descending-power layout).
pub fn sylvester_matrix<S: Scalar>(f: &[S], g: &[S]) -> Vec<Vec<S>> {
    let m = f.len() - 1;
    let n = g.len() - 1;
    let size = m + n;
    let mut rows = Vec::with_capacity(size);
    for shift in 0..n {
        let mut row = vec![S::zero(); size];
        for (k, c) in f.iter().rev().enumerate() {
            row[shift + k] = c.clone();
        }
        rows.push(row);
    }
    for shift in 0..m {
        let mut row = vec![S::zero(); size];
        for (k, c) in g.iter().rev().enumerate() {
            row[shift + k] = c.clone();
        }
        rows.push(row);
    }
    rows
}

/// `Res(f, g)` as the Sylvester determinant with formal degrees.
pub fn resultant<S: Scalar>(f: &[S], g: &[S]) -> S {
    determinant(&sylvester_matrix(f, g))
}

/// `Res(T, T')`; nonzero exactly when `T` is squarefree.
pub fn resultant_ttprime<S: Scalar>(t: &MonicPoly<S>) -> S {
    resultant(&t.ascending(), &t.derivative())
}

/// Product of the Euclidean row norms of the Sylvester matrix of `T, T'`.
///
/// This is Hadamard's bound on `|Res(T, T')|` and the natural scale against
/// which a float resultant is compared.
pub fn resultant_ttprime_scale<S: Scalar>(t: &MonicPoly<S>) -> f64 {
    sylvester_matrix(&t.ascending(), &t.derivative())
        .iter()
        .map(|row| row.iter().map(|v| v.magnitude().powi(2)).sum::<f64>().sqrt())
        .product()
}

/// Squarefree test for a monic polynomial with an explicit float tolerance
/// (ignored by the exact backend).
pub fn is_squarefree<S: Scalar>(t: &MonicPoly<S>, tol: f64) -> bool {
    if t.degree() <= 1 {
        return true;
    }
    let res = resultant_ttprime(t);
    !res.is_negligible(resultant_ttprime_scale(t), tol)
}

/// Removes trailing zero coefficients (exact zeros only).
pub(crate) fn trim<S: Scalar>(mut p: Vec<S>) -> Vec<S> {
    while p.len() > 1 && p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
    p
}

/// Monic gcd by the Euclidean algorithm; meaningful on the exact backend.
pub fn poly_gcd<S: Scalar>(a: &[S], b: &[S]) -> Vec<S> {
    let mut a = trim(a.to_vec());
    let mut b = trim(b.to_vec());
    while !(b.len() == 1 && b[0].is_zero()) {
        let r = poly_rem(&a, &b);
        a = b;
        b = r;
    }
    let lead = a.last().cloned().unwrap_or_else(S::one);
    if lead.is_zero() {
        return a;
    }
    a.into_iter().map(|c| c / lead.clone()).collect()
}

fn poly_rem<S: Scalar>(a: &[S], b: &[S]) -> Vec<S> {
    let mut r = a.to_vec();
    let lead = b.last().expect("nonempty divisor").clone();
    while r.len() >= b.len() && !(r.len() == 1 && r[0].is_zero()) {
        let factor = r.last().unwrap().clone() / lead.clone();
        let shift = r.len() - b.len();
        for (i, c) in b.iter().enumerate() {
            r[shift + i] = r[shift + i].clone() - factor.clone() * c.clone();
        }
        r.pop();
        if r.is_empty() {
            r.push(S::zero());
        }
        r = trim(r);
    }
    r
}

/// Roots of a squarefree monic polynomial.
#[derive(Debug, Clone, PartialEq)]
pub enum Roots<S> {
    /// Every root lies in the backend and was verified exactly.
    Exact(Vec<S>),
    /// Float approximations satisfying the residual contract.
    Approx(Vec<C64>),
}

impl<S: Scalar> Roots<S> {
    pub fn to_c64(&self) -> Vec<C64> {
        match self {
            Roots::Exact(v) => v.iter().map(Scalar::to_c64).collect(),
            Roots::Approx(v) => v.clone(),
        }
    }

    pub fn len(&self) -> usize {
        match self {
            Roots::Exact(v) => v.len(),
            Roots::Approx(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Iteration cap for the Aberth-Ehrlich solver.
pub const MAX_ROOT_ITERATIONS: usize = 500;

/// Roots of a squarefree monic `T`.
///
/// Float roots come from Aberth-Ehrlich iteration with Newton polishing. Each
/// must satisfy `|T(b)| <= 2^-40 * max(1, |c|_inf) * r * max(1, |b|)^r`. On the exact backend
/// every float root is first lifted to a nearby Gaussian rational and checked
/// exactly; when all roots verify, exact roots are returned.
pub fn poly_roots<S: Scalar>(t: &MonicPoly<S>) -> Result<Roots<S>> {
    let r = t.degree();
    if r == 0 {
        return Ok(Roots::Exact(Vec::new()));
    }
    if r == 1 {
        return Ok(Roots::Exact(vec![-t.lower_coeffs()[0].clone()]));
    }
    let approx_t = t.map(Scalar::to_c64);
    let approx = aberth_roots(&approx_t)?;

    if S::EXACT {
        let lifted: Option<Vec<S>> = approx
            .iter()
            .map(|z| S::recognize(*z).filter(|b| t.eval(b).is_zero()))
            .collect();
        if let Some(mut roots) = lifted {
            roots.dedup();
            let distinct = (0..roots.len())
                .all(|i| (i + 1..roots.len()).all(|j| roots[i] != roots[j]));
            if distinct && roots.len() == r {
                return Ok(Roots::Exact(roots));
            }
        }
    }

    let base = 2f64.powi(-40) * approx_t.coeff_norm_inf().max(1.0) * r as f64;
    for z in &approx {
        let residual = approx_t.eval(z).norm();
        let bound = base * z.norm().max(1.0).powi(r as i32);
        if residual > bound {
            return Err(WaringError::RootResidual { residual, bound });
        }
    }
    check_separation(&approx)?;
    Ok(Roots::Approx(approx))
}

/// Rejects root sets with a cluster: two roots closer than `1e-7` relative to
/// their size, which means the polynomial is numerically not squarefree.
fn check_separation(roots: &[C64]) -> Result<()> {
    for i in 0..roots.len() {
        for j in i + 1..roots.len() {
            let scale = roots[i].norm().max(roots[j].norm()).max(1.0);
            if (roots[i] - roots[j]).norm() <= 1e-7 * scale {
                return Err(WaringError::RepeatedRoot);
            }
        }
    }
    Ok(())
}

fn horner_abs(coeffs: &[f64], x: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c)
}

/// Aberth-Ehrlich simultaneous iteration followed by two Newton steps per root.
pub fn aberth_roots(t: &MonicPoly<C64>) -> Result<Vec<C64>> {
    let r = t.degree();
    let coeffs = t.ascending();
    let deriv = derivative(&coeffs);

    // Initial guesses on a circle whose radius is the geometric mean of the
    // moduli of the roots that are not forced to zero.
    let low = coeffs.iter().position(|c| c.norm() > 0.0).unwrap_or(0);
    let radius = if low < r {
        coeffs[low].norm().powf(1.0 / (r - low) as f64)
    } else {
        1.0
    }
    .max(1e-3);
    let mut z: Vec<C64> = (0..r)
        .map(|k| {
            let angle = 2.0 * std::f64::consts::PI * k as f64 / r as f64 + 0.4;
            Complex::from_polar(radius, angle)
        })
        .collect();

    let abs_coeffs: Vec<f64> = coeffs.iter().map(|c| c.norm()).collect();
    let mut done = vec![false; r];
    let mut converged = false;
    for _ in 0..MAX_ROOT_ITERATIONS {
        for k in 0..r {
            if done[k] {
                continue;
            }
            let p = horner(&coeffs, &z[k]);
            // Stop once the residual is at the rounding level of Horner's rule.
            let noise = 4.0 * f64::EPSILON * horner_abs(&abs_coeffs, z[k].norm());
            if p.norm() <= noise {
                done[k] = true;
                continue;
            }
            let dp = horner(&deriv, &z[k]);
            let newton = p / dp;
            let repulsion: C64 = (0..r)
                .filter(|&j| j != k)
                .map(|j| (z[k] - z[j]).inv())
                .sum();
            let step = newton / (C64::one() - newton * repulsion);
            if step.is_finite() {
                z[k] -= step;
                if step.norm() <= 1e-14 * z[k].norm().max(1.0) {
                    done[k] = true;
                }
            }
        }
        if done.iter().all(|&d| d) {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(WaringError::NoConvergence {
            iterations: MAX_ROOT_ITERATIONS,
        });
    }
    for root in z.iter_mut() {
        for _ in 0..2 {
            let p = horner(&coeffs, root);
            let dp = horner(&deriv, root);
            if p.norm() == 0.0 || dp.norm() == 0.0 {
                break;
            }
            let step = p / dp;
            if step.is_finite() {
                *root -= step;
            }
        }
    }
    Ok(z)
}
