//! Scalar backends.
//!
//! Every algorithm in the crate is generic over [`Scalar`]. Two backends are
//! provided: [`GaussRational`] (exact complex numbers with arbitrary-precision
//! rational parts) and [`C64`] (double-precision complex numbers). The float
//! backend never compares against an implicit epsilon; every approximate
//! comparison goes through [`Scalar::is_negligible`] with an explicit
//! tolerance.

use std::fmt::Debug;
use std::ops::Neg;

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{Num, One, Signed, ToPrimitive, Zero};

use crate::linalg::affine::{self, AffineSolutionSet};

/// Exact complex number with rational real and imaginary parts.
pub type GaussRational = Complex<BigRational>;

/// Double-precision complex number.
pub type C64 = Complex<f64>;

/// Field operations plus the few backend-specific hooks the algorithms need.
pub trait Scalar:
    Clone + Debug + PartialEq + Num + Neg<Output = Self> + Send + Sync + 'static
{
    /// True for backends with exact, decidable arithmetic.
    const EXACT: bool;

    fn from_i64(n: i64) -> Self;

    fn from_gauss(z: &GaussRational) -> Self;

    fn to_c64(&self) -> C64;

    /// Modulus, approximated in `f64` for the exact backend.
    fn magnitude(&self) -> f64 {
        self.to_c64().norm()
    }

    /// Exact backend: `self == 0`. Float backend: `|self| <= tol * scale`.
    fn is_negligible(&self, scale: f64, tol: f64) -> bool;

    /// Lift a float approximation into this backend.
    ///
    /// The float backend returns `z` unchanged. The exact backend returns the
    /// simplest Gaussian rational within a relative distance of `1e-9` and a
    /// denominator below `10^9`, or `None`. Callers must verify the candidate.
    fn recognize(z: C64) -> Option<Self>;

    fn conj(&self) -> Self;

    /// Complete solution set of `m x = rhs`, or `None` when inconsistent.
    ///
    /// The exact backend eliminates fraction-free; the float backend uses a
    /// column-pivoted QR factorization with relative rank tolerance `rank_tol`.
    fn solve_linear(m: &[Vec<Self>], rhs: &[Self], rank_tol: f64) -> Option<AffineSolutionSet<Self>>;

    fn from_usize(n: usize) -> Self {
        Self::from_i64(i64::try_from(n).expect("integer too large for scalar"))
    }
}

impl Scalar for GaussRational {
    const EXACT: bool = true;

    fn from_i64(n: i64) -> Self {
        Complex::new(BigRational::from_integer(BigInt::from(n)), BigRational::zero())
    }

    fn from_gauss(z: &GaussRational) -> Self {
        z.clone()
    }

    fn to_c64(&self) -> C64 {
        Complex::new(ratio_to_f64(&self.re), ratio_to_f64(&self.im))
    }

    fn is_negligible(&self, _scale: f64, _tol: f64) -> bool {
        self.is_zero()
    }

    fn recognize(z: C64) -> Option<Self> {
        let scale = z.norm().max(1.0);
        let re = rationalize(z.re, 1e-9 * scale, 1_000_000_000)?;
        let im = rationalize(z.im, 1e-9 * scale, 1_000_000_000)?;
        Some(Complex::new(re, im))
    }

    fn conj(&self) -> Self {
        Complex::new(self.re.clone(), -self.im.clone())
    }

    fn solve_linear(m: &[Vec<Self>], rhs: &[Self], _rank_tol: f64) -> Option<AffineSolutionSet<Self>> {
        affine::exact_solve(m, rhs)
    }
}

impl Scalar for C64 {
    const EXACT: bool = false;

    fn from_i64(n: i64) -> Self {
        Complex::new(n as f64, 0.0)
    }

    fn from_gauss(z: &GaussRational) -> Self {
        z.to_c64()
    }

    fn to_c64(&self) -> C64 {
        *self
    }

    fn magnitude(&self) -> f64 {
        self.norm()
    }

    fn is_negligible(&self, scale: f64, tol: f64) -> bool {
        self.norm() <= tol * scale
    }

    fn recognize(z: C64) -> Option<Self> {
        Some(z)
    }

    fn conj(&self) -> Self {
        Complex::conj(self)
    }

    fn solve_linear(m: &[Vec<Self>], rhs: &[Self], rank_tol: f64) -> Option<AffineSolutionSet<Self>> {
        affine::qr_solve(m, rhs, rank_tol)
    }
}

pub fn ratio_to_f64(q: &BigRational) -> f64 {
    q.to_f64().unwrap_or_else(|| {
        // Out of f64 range: saturate with the right sign.
        if q.is_negative() {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        }
    })
}

/// Gaussian rational `num/den` with zero imaginary part.
pub fn gauss_ratio(num: i64, den: i64) -> GaussRational {
    Complex::new(
        BigRational::new(BigInt::from(num), BigInt::from(den)),
        BigRational::zero(),
    )
}

/// Gaussian rational `re + im*i` from two rationals.
pub fn gauss(re: BigRational, im: BigRational) -> GaussRational {
    Complex::new(re, im)
}

/// Best rational approximation of `x` by continued fractions, stopping at the
/// first convergent within `tol` of `x` whose denominator is at most `max_den`.
pub fn rationalize(x: f64, tol: f64, max_den: i64) -> Option<BigRational> {
    if !x.is_finite() {
        return None;
    }
    if x.abs() > 1e15 {
        // Beyond 2^53 every representable double is an integer.
        return BigRational::from_float(x.round());
    }
    let (mut h0, mut h1): (i128, i128) = (0, 1);
    let (mut k0, mut k1): (i128, i128) = (1, 0);
    let mut rest = x;
    for _ in 0..64 {
        let a = rest.floor();
        let ai = a as i128;
        let h2 = ai * h1 + h0;
        let k2 = ai * k1 + k0;
        if k2 > max_den as i128 {
            return None;
        }
        (h0, h1) = (h1, h2);
        (k0, k1) = (k1, k2);
        let approx = h1 as f64 / k1 as f64;
        if (approx - x).abs() <= tol {
            return Some(BigRational::new(BigInt::from(h1), BigInt::from(k1)));
        }
        let frac = rest - a;
        if frac == 0.0 {
            return None;
        }
        rest = 1.0 / frac;
    }
    None
}

/// Largest modulus in a slice, `0.0` for an empty slice.
pub fn max_magnitude<S: Scalar>(values: &[S]) -> f64 {
    values.iter().map(Scalar::magnitude).fold(0.0, f64::max)
}

/// Binomial coefficient as a scalar.
pub fn binomial<S: Scalar>(n: usize, k: usize) -> S {
    if k > n {
        return S::zero();
    }
    let k = k.min(n - k);
    // Build through big integers so large degrees cannot overflow.
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    S::from_gauss(&Complex::new(BigRational::from_integer(acc), BigRational::zero()))
}

/// Falling factorial `n (n-1) ... (n-k+1)` as a scalar.
pub fn falling<S: Scalar>(n: usize, k: usize) -> S {
    if k > n {
        return S::zero();
    }
    let mut acc = BigInt::one();
    for i in 0..k {
        acc *= BigInt::from(n - i);
    }
    S::from_gauss(&Complex::new(BigRational::from_integer(acc), BigRational::zero()))
}

/// Integer power by repeated squaring.
pub fn pow<S: Scalar>(base: &S, mut exp: usize) -> S {
    let mut acc = S::one();
    let mut b = base.clone();
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b.clone();
        }
        exp >>= 1;
        if exp > 0 {
            b = b.clone() * b;
        }
    }
    acc
}
