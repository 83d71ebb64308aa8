//! Binary forms in the binomial-normalized basis, differential operators and
//! power-sum decompositions.
//!
//! A form of degree `d` is stored as `(a_0, ..., a_d)` with
//! `f(x, y) = sum_i C(d, i) a_i x^(d-i) y^i`. In this basis a power
//! `(x + b y)^d` has coefficients `a_i = b^i`, which is what makes the Hankel
//! machinery in [`crate::linalg`] read off the coefficients directly.

use num_traits::Zero;

use crate::error::{Result, WaringError};
use crate::scalar::{binomial, falling, max_magnitude, pow, Scalar, C64};

#[derive(Debug, Clone, PartialEq)]
pub struct BinaryForm<S> {
    coeffs: Vec<S>,
}

impl<S: Scalar> BinaryForm<S> {
    /// Form with binomial-normalized coefficients `a_0..=a_d`.
    pub fn new(coeffs: Vec<S>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(WaringError::LengthMismatch {
                expected: 1,
                actual: 0,
            });
        }
        Ok(Self { coeffs })
    }

    pub fn zero(degree: usize) -> Self {
        Self {
            coeffs: vec![S::zero(); degree + 1],
        }
    }

    /// Converts monomial coefficients `m_i` of `x^(d-i) y^i` to the binomial basis.
    pub fn from_monomial(degree: usize, monomial: &[S]) -> Result<Self> {
        if monomial.len() != degree + 1 {
            return Err(WaringError::LengthMismatch {
                expected: degree + 1,
                actual: monomial.len(),
            });
        }
        let coeffs = monomial
            .iter()
            .enumerate()
            .map(|(i, m)| m.clone() / binomial::<S>(degree, i))
            .collect();
        Ok(Self { coeffs })
    }

    /// `lambda * (p x + q y)^d`.
    pub fn power(degree: usize, weight: &S, p: &S, q: &S) -> Self {
        let coeffs = (0..=degree)
            .map(|i| weight.clone() * pow(p, degree - i) * pow(q, i))
            .collect();
        Self { coeffs }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[S] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> &S {
        &self.coeffs[i]
    }

    /// Coefficients `m_i = C(d, i) a_i` of `x^(d-i) y^i`.
    pub fn monomial_coeffs(&self) -> Vec<S> {
        let d = self.degree();
        self.coeffs
            .iter()
            .enumerate()
            .map(|(i, a)| a.clone() * binomial::<S>(d, i))
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// Sup norm of the binomial-normalized coefficients.
    pub fn norm_inf(&self) -> f64 {
        max_magnitude(&self.coeffs)
    }

    /// `df/dx`; in the binomial basis `a'_i = d * a_i` for `i < d`.
    pub fn derivative_x(&self) -> Result<Self> {
        let d = self.degree();
        if d == 0 {
            return Err(WaringError::ConstantForm);
        }
        let scale = S::from_usize(d);
        let coeffs = self.coeffs[..d]
            .iter()
            .map(|a| a.clone() * scale.clone())
            .collect();
        Ok(Self { coeffs })
    }

    /// Antiderivative in `x` with `constant_term / (d+1)` as the new `y^(d+1)`
    /// coefficient.
    pub fn integrate_x(&self, constant_term: S) -> Self {
        let scale = S::from_usize(self.degree() + 1);
        let coeffs = self
            .coeffs
            .iter()
            .cloned()
            .chain(std::iter::once(constant_term))
            .map(|a| a / scale.clone())
            .collect();
        Self { coeffs }
    }

    pub fn evaluate(&self, x0: &S, y0: &S) -> S {
        let d = self.degree();
        self.coeffs
            .iter()
            .enumerate()
            .fold(S::zero(), |acc, (i, a)| {
                acc + binomial::<S>(d, i) * a.clone() * pow(x0, d - i) * pow(y0, i)
            })
    }

    /// `f(m00 x + m01 y, m10 x + m11 y)`.
    pub fn substitute(&self, m: [[S; 2]; 2]) -> Self {
        let d = self.degree();
        let monomial = self.monomial_coeffs();
        let [[m00, m01], [m10, m11]] = m;
        let xs = powers_of_linear(d, &m00, &m01);
        let ys = powers_of_linear(d, &m10, &m11);
        let mut out = vec![S::zero(); d + 1];
        for (i, coeff) in monomial.iter().enumerate() {
            if coeff.is_zero() {
                continue;
            }
            // x^(d-i) y^i
            let prod = poly_mul(&xs[d - i], &ys[i]);
            for (k, v) in prod.into_iter().enumerate() {
                out[k] = out[k].clone() + coeff.clone() * v;
            }
        }
        Self::from_monomial(d, &out).expect("substitution preserves degree")
    }

    /// Returns `(lambda, p, q)` with `self = lambda (p x + q y)^d` when the form
    /// is a pure power, normalized so that `p = 1` or `(p, q) = (0, 1)`.
    pub fn as_pure_power(&self) -> Option<(S, S, S)> {
        let d = self.degree();
        if self.is_zero() {
            return None;
        }
        let a0 = &self.coeffs[0];
        if !a0.is_zero() {
            let beta = self.coeffs.get(1).cloned().unwrap_or_else(S::zero) / a0.clone();
            let candidate = Self::power(d, a0, &S::one(), &beta);
            return (candidate == *self).then(|| (a0.clone(), S::one(), beta));
        }
        let ad = &self.coeffs[d];
        let is_y_power = self.coeffs[..d].iter().all(Zero::is_zero);
        is_y_power.then(|| (ad.clone(), S::zero(), S::one()))
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> BinaryForm<T> {
        BinaryForm {
            coeffs: self.coeffs.iter().map(f).collect(),
        }
    }

    pub fn to_c64(&self) -> BinaryForm<C64> {
        self.map(Scalar::to_c64)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_degree(other.degree())?;
        Ok(Self {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a.clone() + b.clone())
                .collect(),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_degree(other.degree())?;
        Ok(Self {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a.clone() - b.clone())
                .collect(),
        })
    }

    pub fn scale(&self, s: &S) -> Self {
        self.map(|a| a.clone() * s.clone())
    }

    fn check_degree(&self, other: usize) -> Result<()> {
        if self.degree() != other {
            return Err(WaringError::DegreeMismatch {
                expected: self.degree(),
                actual: other,
            });
        }
        Ok(())
    }
}

/// Homogeneous operator `sum_j b_j dx^(e-j) dy^j` (plain monomial coefficients).
#[derive(Debug, Clone, PartialEq)]
pub struct DiffOperator<S> {
    coeffs: Vec<S>,
}

impl<S: Scalar> DiffOperator<S> {
    pub fn new(coeffs: Vec<S>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(WaringError::LengthMismatch {
                expected: 1,
                actual: 0,
            });
        }
        Ok(Self { coeffs })
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[S] {
        &self.coeffs
    }

    pub fn identity() -> Self {
        Self {
            coeffs: vec![S::one()],
        }
    }

    pub fn dx() -> Self {
        Self {
            coeffs: vec![S::one(), S::zero()],
        }
    }

    pub fn dy() -> Self {
        Self {
            coeffs: vec![S::zero(), S::one()],
        }
    }

    /// `p dy - q dx`, which annihilates `(p x + q y)^d`.
    pub fn annihilating_factor(p: &S, q: &S) -> Self {
        Self {
            coeffs: vec![-q.clone(), p.clone()],
        }
    }

    /// `dy - beta dx`.
    pub fn linear_factor(beta: &S) -> Self {
        Self::annihilating_factor(&S::one(), beta)
    }

    pub fn compose(&self, other: &Self) -> Self {
        Self {
            coeffs: poly_mul(&self.coeffs, &other.coeffs),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn norm_l1(&self) -> f64 {
        self.coeffs.iter().map(Scalar::magnitude).sum()
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> DiffOperator<T> {
        DiffOperator {
            coeffs: self.coeffs.iter().map(f).collect(),
        }
    }

    /// Product of `dy - beta dx` over all `betas`.
    pub fn product_of_factors(betas: &[S]) -> Self {
        betas
            .iter()
            .fold(Self::identity(), |acc, b| acc.compose(&Self::linear_factor(b)))
    }
}

/// Applies `g` to `f` by differentiating monomials exactly.
pub fn apply_operator<S: Scalar>(g: &DiffOperator<S>, f: &BinaryForm<S>) -> Result<BinaryForm<S>> {
    let d = f.degree();
    let e = g.degree();
    if e > d {
        return Err(WaringError::OutOfRange {
            what: "operator degree",
            value: e,
            min: 0,
            max: d,
        });
    }
    let monomial = f.monomial_coeffs();
    let mut out = vec![S::zero(); d - e + 1];
    for (j, b) in g.coeffs().iter().enumerate() {
        if b.is_zero() {
            continue;
        }
        // dx^(e-j) dy^j applied to x^(d-i) y^i
        for (i, m) in monomial.iter().enumerate() {
            if m.is_zero() || i < j || d - i < e - j {
                continue;
            }
            let factor = falling::<S>(d - i, e - j) * falling::<S>(i, j);
            out[i - j] = out[i - j].clone() + b.clone() * m.clone() * factor;
        }
    }
    BinaryForm::from_monomial(d - e, &out)
}

/// Weighted power `weight * (p x + q y)^d`.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearFormPower<S> {
    pub weight: S,
    pub p: S,
    pub q: S,
}

impl<S: Scalar> LinearFormPower<S> {
    pub fn new(weight: S, p: S, q: S) -> Result<Self> {
        if p.is_zero() && q.is_zero() {
            return Err(WaringError::DegenerateLinearForm);
        }
        Ok(Self { weight, p, q })
    }

    /// `weight * (x + beta y)^d`.
    pub fn finite(weight: S, beta: S) -> Self {
        Self {
            weight,
            p: S::one(),
            q: beta,
        }
    }

    /// `weight * y^d`.
    pub fn y_power(weight: S) -> Self {
        Self {
            weight,
            p: S::zero(),
            q: S::one(),
        }
    }

    /// Slope `q / p`, or `None` for the `y^d` direction.
    pub fn slope(&self) -> Option<S> {
        (!self.p.is_zero()).then(|| self.q.clone() / self.p.clone())
    }

    pub fn is_y_power(&self) -> bool {
        self.p.is_zero()
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> LinearFormPower<T> {
        LinearFormPower {
            weight: f(&self.weight),
            p: f(&self.p),
            q: f(&self.q),
        }
    }
}

/// A sum of weighted powers of linear forms.
#[derive(Debug, Clone, PartialEq)]
pub struct Decomposition<S> {
    degree: usize,
    terms: Vec<LinearFormPower<S>>,
    canonical: bool,
}

impl<S: Scalar> Decomposition<S> {
    pub fn new(degree: usize, terms: Vec<LinearFormPower<S>>) -> Result<Self> {
        if terms.is_empty() {
            return Err(WaringError::EmptyDecomposition);
        }
        if terms.iter().any(|t| t.p.is_zero() && t.q.is_zero()) {
            return Err(WaringError::DegenerateLinearForm);
        }
        let canonical = is_canonical_shape(&terms);
        Ok(Self {
            degree,
            terms,
            canonical,
        })
    }

    /// `sum_k weights_k (x + betas_k y)^d + y_weight y^d`, with the finite
    /// terms first.
    pub fn canonical(
        degree: usize,
        finite: Vec<(S, S)>,
        y_weight: Option<S>,
    ) -> Result<Self> {
        let mut terms: Vec<_> = finite
            .into_iter()
            .map(|(w, b)| LinearFormPower::finite(w, b))
            .collect();
        terms.extend(y_weight.map(LinearFormPower::y_power));
        let dec = Self::new(degree, terms)?;
        if !dec.canonical {
            return Err(WaringError::DuplicateNodes);
        }
        Ok(dec)
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn terms(&self) -> &[LinearFormPower<S>] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_canonical(&self) -> bool {
        self.canonical
    }

    /// Finite slopes `q/p` in term order.
    pub fn finite_slopes(&self) -> Vec<S> {
        self.terms.iter().filter_map(LinearFormPower::slope).collect()
    }

    pub fn y_term_weight(&self) -> Option<&S> {
        self.terms
            .iter()
            .find(|t| t.is_y_power())
            .map(|t| &t.weight)
    }

    /// `sum_k lambda_k (p_k x + q_k y)^d` in the binomial basis.
    pub fn expand(&self) -> BinaryForm<S> {
        let d = self.degree;
        let mut coeffs = vec![S::zero(); d + 1];
        for t in &self.terms {
            let term = BinaryForm::power(d, &t.weight, &t.p, &t.q);
            for (c, v) in coeffs.iter_mut().zip(term.coeffs) {
                *c = c.clone() + v;
            }
        }
        BinaryForm { coeffs }
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> Decomposition<T> {
        let terms: Vec<_> = self.terms.iter().map(|t| t.map(&f)).collect();
        let canonical = is_canonical_shape(&terms);
        Decomposition {
            degree: self.degree,
            terms,
            canonical,
        }
    }

    pub fn to_c64(&self) -> Decomposition<C64> {
        self.map(Scalar::to_c64)
    }
}

fn is_canonical_shape<S: Scalar>(terms: &[LinearFormPower<S>]) -> bool {
    let mut y_terms = 0;
    let mut slopes: Vec<&S> = Vec::new();
    for t in terms {
        if t.p.is_zero() {
            if !t.q.is_one() {
                return false;
            }
            y_terms += 1;
        } else {
            if !t.p.is_one() {
                return false;
            }
            if slopes.contains(&&t.q) {
                return false;
            }
            slopes.push(&t.q);
        }
    }
    y_terms <= 1
}

/// Product of two coefficient vectors (ascending or descending, consistently).
pub(crate) fn poly_mul<S: Scalar>(a: &[S], b: &[S]) -> Vec<S> {
    let mut out = vec![S::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] = out[i + j].clone() + x.clone() * y.clone();
        }
    }
    out
}

/// Monomial coefficients (in `x^(k-i) y^i` order) of `(u x + v y)^k` for k = 0..=d.
fn powers_of_linear<S: Scalar>(d: usize, u: &S, v: &S) -> Vec<Vec<S>> {
    let base = vec![u.clone(), v.clone()];
    let mut out = vec![vec![S::one()]];
    for k in 1..=d {
        let next = poly_mul(&out[k - 1], &base);
        out.push(next);
    }
    out
}
