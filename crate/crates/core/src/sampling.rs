//! Seeded generators for random test forms and decompositions.
//!
//! Sample `index` under `seed` always draws from its own ChaCha stream, so
//! results do not depend on the order or the threads samples are drawn in.

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::form::{BinaryForm, Decomposition};
use crate::scalar::{pow, GaussRational, Scalar};

/// Generator for sample `index` under `seed`.
pub fn sample_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Nonzero form whose monomial coefficients are uniform integers in `[-range, range]`.
pub fn random_integer_form<S: Scalar>(degree: usize, range: i64, seed: u64, index: u64) -> BinaryForm<S> {
    assert!(range >= 1, "range must be positive");
    let mut rng = sample_rng(seed, index);
    loop {
        let m: Vec<i64> = (0..=degree).map(|_| rng.gen_range(-range..=range)).collect();
        if m.iter().any(|&v| v != 0) {
            let m: Vec<S> = m.into_iter().map(S::from_i64).collect();
            return BinaryForm::from_monomial(degree, &m).expect("length matches");
        }
    }
}

fn small_rational(rng: &mut ChaCha8Rng, num: i64, den: i64) -> BigRational {
    BigRational::new(
        BigInt::from(rng.gen_range(-num..=num)),
        BigInt::from(rng.gen_range(1..=den)),
    )
}

fn nonzero_rational(rng: &mut ChaCha8Rng, num: i64, den: i64) -> BigRational {
    loop {
        let v = small_rational(rng, num, den);
        if !v.is_zero() {
            return v;
        }
    }
}

fn real(q: BigRational) -> GaussRational {
    Complex::new(q, BigRational::zero())
}

/// Shape of a [`mixed_form`] sample.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FormKind {
    Dense,
    Sparse,
    Monomial,
    PerfectPower,
    TwoPowers,
    Gaussian,
}

impl FormKind {
    pub const ALL: [FormKind; 6] = [
        FormKind::Dense,
        FormKind::Sparse,
        FormKind::Monomial,
        FormKind::PerfectPower,
        FormKind::TwoPowers,
        FormKind::Gaussian,
    ];
}

/// Exact random form of a given kind: dense or sparse rational coefficients,
/// a monomial `c x^a y^b`, a perfect power `c (p x + q y)^d`, a sum of two
/// such powers, or Gaussian-rational coefficients.
pub fn mixed_form(kind: FormKind, degree: usize, seed: u64, index: u64) -> BinaryForm<GaussRational> {
    let mut rng = sample_rng(seed, index);
    let d = degree;
    loop {
        let f = match kind {
            FormKind::Dense => {
                let m: Vec<_> = (0..=d).map(|_| real(small_rational(&mut rng, 9, 4))).collect();
                BinaryForm::from_monomial(d, &m).expect("length")
            }
            FormKind::Sparse => {
                let mut m = vec![GaussRational::zero(); d + 1];
                let mut slots: Vec<usize> = (0..=d).collect();
                slots.shuffle(&mut rng);
                let support = rng.gen_range(1..=d.div_ceil(2).max(1));
                for &i in &slots[..support] {
                    m[i] = real(nonzero_rational(&mut rng, 9, 3));
                }
                BinaryForm::from_monomial(d, &m).expect("length")
            }
            FormKind::Monomial => {
                let mut m = vec![GaussRational::zero(); d + 1];
                m[rng.gen_range(0..=d)] = real(nonzero_rational(&mut rng, 9, 1));
                BinaryForm::from_monomial(d, &m).expect("length")
            }
            FormKind::PerfectPower => {
                let w = real(nonzero_rational(&mut rng, 5, 2));
                let p = real(small_rational(&mut rng, 3, 1));
                let q = real(small_rational(&mut rng, 3, 1));
                BinaryForm::power(d, &w, &p, &q)
            }
            FormKind::TwoPowers => {
                let mut f = BinaryForm::zero(d);
                for _ in 0..2 {
                    let w = real(nonzero_rational(&mut rng, 5, 2));
                    let p = real(small_rational(&mut rng, 3, 1));
                    let q = real(small_rational(&mut rng, 3, 1));
                    f = f.add(&BinaryForm::power(d, &w, &p, &q)).expect("same degree");
                }
                f
            }
            FormKind::Gaussian => {
                let m: Vec<_> = (0..=d)
                    .map(|_| Complex::new(small_rational(&mut rng, 5, 2), small_rational(&mut rng, 5, 2)))
                    .collect();
                BinaryForm::from_monomial(d, &m).expect("length")
            }
        };
        if !f.is_zero() {
            return f;
        }
    }
}

/// Exact random form with the kind, degree `2..=max_degree` and coefficients
/// all chosen by the sample's own stream.
pub fn random_mixed_form(max_degree: usize, seed: u64, index: u64) -> BinaryForm<GaussRational> {
    let mut rng = sample_rng(seed, index);
    let kind = *FormKind::ALL.choose(&mut rng).expect("nonempty");
    let degree = rng.gen_range(2..=max_degree.max(2));
    mixed_form(kind, degree, seed ^ 0x9e37_79b9_7f4a_7c15, index)
}

/// Canonical decomposition with `r` terms of degree `d`: distinct rational
/// slopes and nonzero rational weights.
pub fn random_canonical_decomposition(
    degree: usize,
    r: usize,
    seed: u64,
    index: u64,
) -> Decomposition<GaussRational> {
    assert!(r >= 1, "need at least one term");
    let mut rng = sample_rng(seed, index);
    let mut betas: Vec<BigRational> = Vec::with_capacity(r);
    while betas.len() < r {
        let b = small_rational(&mut rng, 6, 3);
        if !betas.contains(&b) {
            betas.push(b);
        }
    }
    let finite = betas
        .into_iter()
        .map(|b| (real(nonzero_rational(&mut rng, 7, 3)), real(b)))
        .collect();
    Decomposition::canonical(degree, finite, None).expect("distinct slopes")
}

/// Random form with prescribed zero pattern in the end coefficients `a_0`, `a_d`.
pub fn random_form_with_ends<S: Scalar>(
    degree: usize,
    first_zero: bool,
    last_zero: bool,
    seed: u64,
    index: u64,
) -> BinaryForm<S> {
    let mut rng = sample_rng(seed, index);
    loop {
        let m: Vec<i64> = (0..=degree)
            .map(|i| {
                let zero = (i == 0 && first_zero) || (i == degree && last_zero);
                if zero {
                    0
                } else if i == 0 || i == degree {
                    let v = rng.gen_range(1..=9);
                    if rng.gen_bool(0.5) {
                        v
                    } else {
                        -v
                    }
                } else {
                    rng.gen_range(-9..=9)
                }
            })
            .collect();
        if m.iter().any(|&v| v != 0) {
            let m: Vec<S> = m.into_iter().map(S::from_i64).collect();
            return BinaryForm::from_monomial(degree, &m).expect("length");
        }
    }
}

/// Sum `sum_{k=1}^{r} (x + k y)^d`.
pub fn consecutive_powers<S: Scalar>(degree: usize, r: usize) -> BinaryForm<S> {
    let coeffs = (0..=degree)
        .map(|i| {
            (1..=r as i64).fold(S::zero(), |acc, k| acc + pow(&S::from_i64(k), i))
        })
        .collect();
    BinaryForm::new(coeffs).expect("nonempty")
}
