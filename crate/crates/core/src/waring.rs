//! Waring rank and minimal decompositions of binary forms.
//!
//! The F-rank `FR(f)` is the least `r` for which the recurrence
//! `a_i = -(c_0 a_{i-r} + ... + c_{r-1} a_{i-1})`, `i = r..=d`, has a solution
//! whose characteristic polynomial `T(t) = t^r + c_{r-1} t^{r-1} + ... + c_0` is
//! squarefree; the roots of `T` are then the slopes of a decomposition into
//! `r` powers `(x + beta y)^d`. The Waring rank follows from comparing
//! `FR(f)` with `FR(f_x)`:
//!
//! * equal ranks: `WR(f) = FR(f)` and a finite-slope decomposition is minimal;
//! * `FR(f) > FR(f_x)`: `WR(f) = FR(f_x) + 1`, reached by integrating a
//!   decomposition of `f_x` in `x` and adding a `y^d` term.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::apolarity::operator_residual;
use crate::error::{Result, WaringError};
use crate::form::{BinaryForm, Decomposition, DiffOperator, LinearFormPower};
use crate::linalg::affine::AffineSolutionSet;
use crate::linalg::hankel::{build_hankel, solve_affine};
use crate::linalg::poly::{is_squarefree, poly_roots, MonicPoly, Roots};
use crate::linalg::search::{find_squarefree_member, Certainty, SearchOptions, SquarefreeSearch};
use crate::linalg::vandermonde::{vandermonde_least_squares, vandermonde_solve};
use crate::scalar::{max_magnitude, pow, Scalar, C64};

/// Knobs shared by every driver entry point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Settings {
    pub seed: u64,
    /// Random trials per squarefree search.
    pub budget: usize,
    /// Largest parameter lattice walked to certify a negative answer.
    pub lattice_limit: usize,
    /// Relative rank tolerance of the float linear solver.
    pub rank_tol: f64,
    /// Relative tolerance of the float resultant test.
    pub tol: f64,
    /// Relative residual accepted when verifying float decompositions.
    pub verify_tol: f64,
}

impl Default for Settings {
    fn default() -> Self {
        Self {
            seed: 0,
            budget: 64,
            lattice_limit: 100_000,
            rank_tol: 1e-10,
            tol: 1e-10,
            verify_tol: 1e-9,
        }
    }
}

impl Settings {
    pub fn with_seed(seed: u64) -> Self {
        Self {
            seed,
            ..Self::default()
        }
    }

    pub fn search(&self) -> SearchOptions {
        SearchOptions {
            seed: self.seed,
            budget: self.budget,
            lattice_limit: self.lattice_limit,
            tol: self.tol,
        }
    }
}

/// Witness for `FR(f) <= r`, with `certainty` covering the claim that no
/// smaller order works.
#[derive(Debug, Clone, PartialEq)]
pub struct FRankCertificate<S> {
    pub r: usize,
    pub c: Vec<S>,
    pub t_poly: MonicPoly<S>,
    pub solution_set: AffineSolutionSet<S>,
    pub params: Vec<i64>,
    pub certainty: Certainty,
}

#[derive(Debug, Clone, PartialEq)]
pub enum FRank<S> {
    Finite(FRankCertificate<S>),
    /// No order `r <= d` works, so `FR(f) = d + 1`.
    AboveDegree { certainty: Certainty },
}

impl<S> FRank<S> {
    /// Numeric value for a form of degree `d`.
    pub fn value(&self, d: usize) -> usize {
        match self {
            FRank::Finite(cert) => cert.r,
            FRank::AboveDegree { .. } => d + 1,
        }
    }

    pub fn certificate(&self) -> Option<&FRankCertificate<S>> {
        match self {
            FRank::Finite(cert) => Some(cert),
            FRank::AboveDegree { .. } => None,
        }
    }

    pub fn certainty(&self) -> Certainty {
        match self {
            FRank::Finite(cert) => cert.certainty,
            FRank::AboveDegree { certainty } => *certainty,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    /// Only finite slopes: `WR(f) = FR(f)`.
    Finite,
    /// A decomposition of `f_x`, integrated, plus a `y^d` term.
    YTerm,
    /// `f = a_d y^d`.
    DegenerateMonomial,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RankReport<S> {
    pub degree: usize,
    pub f_rank: FRank<S>,
    /// F-rank of `f_x`; `None` when `d = 0` or `f_x = 0`.
    pub fx_rank: Option<FRank<S>>,
    pub waring_rank: usize,
    pub branch: Branch,
}

impl<S> RankReport<S> {
    pub fn f_rank_value(&self) -> usize {
        self.f_rank.value(self.degree)
    }

    pub fn fx_rank_value(&self) -> Option<usize> {
        self.fx_rank.as_ref().map(|r| r.value(self.degree.saturating_sub(1)))
    }

    /// Exact unless some squarefree search fell back to random sampling.
    pub fn certainty(&self) -> Certainty {
        let bounds = [Some(&self.f_rank), self.fx_rank.as_ref()]
            .into_iter()
            .flatten()
            .map(|r| match r.certainty() {
                Certainty::Exact => 0.0,
                Certainty::Probabilistic { failure_bound } => failure_bound,
            })
            .sum::<f64>();
        if bounds > 0.0 {
            Certainty::Probabilistic {
                failure_bound: bounds.min(1.0),
            }
        } else {
            Certainty::Exact
        }
    }
}

fn combine(missed: f64) -> Certainty {
    if missed > 0.0 {
        Certainty::Probabilistic {
            failure_bound: missed.min(1.0),
        }
    } else {
        Certainty::Exact
    }
}

/// `FR(f)` with a certificate, or [`FRank::AboveDegree`].
pub fn f_rank<S: Scalar>(f: &BinaryForm<S>, settings: &Settings) -> Result<FRank<S>> {
    if f.is_zero() {
        return Err(WaringError::ZeroForm);
    }
    let d = f.degree();
    if d == 0 {
        // A constant c is c (x + 0 y)^0.
        return Ok(FRank::Finite(FRankCertificate {
            r: 1,
            c: vec![S::zero()],
            t_poly: MonicPoly::new(vec![S::zero()]),
            solution_set: AffineSolutionSet {
                particular: vec![S::zero()],
                basis: Vec::new(),
            },
            params: Vec::new(),
            certainty: Certainty::Exact,
        }));
    }
    let opts = settings.search();
    let mut missed = 0.0;
    for r in 1..=d {
        let sys = build_hankel(f, r)?;
        let Some(set) = solve_affine(&sys, settings.rank_tol) else {
            continue;
        };
        match find_squarefree_member(&set, &opts) {
            SquarefreeSearch::Found { poly, params } => {
                return Ok(FRank::Finite(FRankCertificate {
                    r,
                    c: poly.lower_coeffs().to_vec(),
                    t_poly: poly,
                    solution_set: set,
                    params,
                    certainty: combine(missed),
                }));
            }
            SquarefreeSearch::NotFound(Certainty::Probabilistic { failure_bound }) => missed += failure_bound,
            SquarefreeSearch::NotFound(Certainty::Exact) => {}
        }
    }
    Ok(FRank::AboveDegree {
        certainty: combine(missed),
    })
}

/// Waring rank from `FR(f)` and `FR(f_x)`.
pub fn waring_rank<S: Scalar>(f: &BinaryForm<S>, settings: &Settings) -> Result<RankReport<S>> {
    if f.is_zero() {
        return Err(WaringError::ZeroForm);
    }
    let d = f.degree();
    let fr = f_rank(f, settings)?;
    if d == 0 {
        return Ok(RankReport {
            degree: 0,
            f_rank: fr,
            fx_rank: None,
            waring_rank: 1,
            branch: Branch::Finite,
        });
    }
    let fx = f.derivative_x()?;
    if fx.is_zero() {
        return Ok(RankReport {
            degree: d,
            f_rank: fr,
            fx_rank: None,
            waring_rank: 1,
            branch: Branch::DegenerateMonomial,
        });
    }
    let fxr = f_rank(&fx, settings)?;
    let (frv, fxv) = (fr.value(d), fxr.value(d - 1));
    let (waring_rank, branch) = if frv <= fxv + 1 {
        (frv, Branch::Finite)
    } else {
        (fxv + 1, Branch::YTerm)
    };
    Ok(RankReport {
        degree: d,
        f_rank: fr,
        fx_rank: Some(fxr),
        waring_rank,
        branch,
    })
}

/// A decomposition in the backend's own scalars, or in floats when the
/// slopes are irrational on the exact backend.
#[derive(Debug, Clone, PartialEq)]
pub enum Decomposed<S> {
    Native(Decomposition<S>),
    Numeric(Decomposition<C64>),
}

impl<S: Scalar> Decomposed<S> {
    pub fn len(&self) -> usize {
        match self {
            Decomposed::Native(d) => d.len(),
            Decomposed::Numeric(d) => d.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn to_c64(&self) -> Decomposition<C64> {
        match self {
            Decomposed::Native(d) => d.to_c64(),
            Decomposed::Numeric(d) => d.clone(),
        }
    }

    pub fn native(&self) -> Option<&Decomposition<S>> {
        match self {
            Decomposed::Native(d) => Some(d),
            Decomposed::Numeric(_) => None,
        }
    }
}

fn from_numeric<S: Scalar>(dec: Decomposition<C64>) -> Decomposed<S> {
    if S::EXACT {
        Decomposed::Numeric(dec)
    } else {
        Decomposed::Native(dec.map(|z| S::recognize(*z).expect("float backend accepts every value")))
    }
}

/// A minimal decomposition of `f`.
pub fn decompose<S: Scalar>(f: &BinaryForm<S>, settings: &Settings) -> Result<Decomposed<S>> {
    let report = waring_rank(f, settings)?;
    decompose_with_report(f, &report, settings)
}

/// Decomposes along the branch chosen in `report`.
pub fn decompose_with_report<S: Scalar>(
    f: &BinaryForm<S>,
    report: &RankReport<S>,
    settings: &Settings,
) -> Result<Decomposed<S>> {
    decompose_branch(f, report, report.branch, settings)
}

/// Decomposes along a given branch. The finite branch uses the certificate of
/// `f`, the y-term branch the one of `f_x`; either may be longer than the rank.
pub fn decompose_branch<S: Scalar>(
    f: &BinaryForm<S>,
    report: &RankReport<S>,
    branch: Branch,
    settings: &Settings,
) -> Result<Decomposed<S>> {
    let d = f.degree();
    match branch {
        Branch::DegenerateMonomial => {
            let weight = f.coeffs()[d].clone();
            Ok(Decomposed::Native(Decomposition::canonical(d, Vec::new(), Some(weight))?))
        }
        Branch::Finite => {
            let cert = report
                .f_rank
                .certificate()
                .ok_or_else(|| WaringError::Inconsistent("no finite certificate for f".into()))?;
            finite_decomposition(f, &cert.t_poly)
        }
        Branch::YTerm => {
            let cert = report
                .fx_rank
                .as_ref()
                .and_then(FRank::certificate)
                .ok_or_else(|| WaringError::Inconsistent("no finite certificate for f_x".into()))?;
            let dec = yterm_decomposition(f, &cert.t_poly, settings.verify_tol)?;
            if branch == report.branch && dec.len() < report.waring_rank {
                return Err(WaringError::Inconsistent(format!(
                    "decomposition of length {} below the rank {}",
                    dec.len(),
                    report.waring_rank
                )));
            }
            Ok(dec)
        }
    }
}

/// Slopes from the roots of `T`, weights from the Vandermonde system on
/// `a_0..a_{r-1}`.
fn finite_decomposition<S: Scalar>(f: &BinaryForm<S>, t: &MonicPoly<S>) -> Result<Decomposed<S>> {
    let d = f.degree();
    let r = t.degree();
    match poly_roots(t)? {
        Roots::Exact(betas) => {
            let weights = vandermonde_solve(&betas, &f.coeffs()[..r])?;
            if weights.iter().any(|w| w.is_zero()) {
                return Err(WaringError::Inconsistent("zero weight in a minimal decomposition".into()));
            }
            Ok(Decomposed::Native(Decomposition::canonical(
                d,
                weights.into_iter().zip(betas).collect(),
                None,
            )?))
        }
        Roots::Approx(betas) => {
            let fc = f.to_c64();
            let weights = vandermonde_least_squares(&betas, fc.coeffs())?;
            let scale = max_magnitude(fc.coeffs());
            let contribution =
                |(w, b): (&C64, &C64)| w.norm() * b.norm().max(1.0).powi(d as i32);
            if weights.iter().zip(&betas).any(|wb| contribution(wb) <= 1e-14 * scale) {
                return Err(WaringError::Inconsistent("zero weight in a minimal decomposition".into()));
            }
            Ok(from_numeric(Decomposition::canonical(
                d,
                weights.into_iter().zip(betas).collect(),
                None,
            )?))
        }
    }
}

fn yterm_decomposition<S: Scalar>(f: &BinaryForm<S>, fx_t: &MonicPoly<S>, tol: f64) -> Result<Decomposed<S>> {
    let fx = f.derivative_x()?;
    match finite_decomposition(&fx, fx_t)? {
        Decomposed::Native(inner) => Ok(Decomposed::Native(integrate(f, &inner, tol)?)),
        Decomposed::Numeric(inner) => Ok(from_numeric(integrate(&f.to_c64(), &inner, tol)?)),
    }
}

/// Lifts `f_x = sum mu_k (x + g_k y)^(d-1)` to
/// `f = (1/d) sum mu_k (x + g_k y)^d + mu y^d`, `mu = a_d - (1/d) sum mu_k g_k^d`.
fn integrate<T: Scalar>(f: &BinaryForm<T>, inner: &Decomposition<T>, tol: f64) -> Result<Decomposition<T>> {
    let d = f.degree();
    let dd = T::from_usize(d);
    let mut finite = Vec::with_capacity(inner.len());
    let mut lifted = T::zero();
    for term in inner.terms() {
        let gamma = term.slope().expect("finite branch");
        let w = term.weight.clone() / dd.clone();
        lifted = lifted + w.clone() * pow(&gamma, d);
        finite.push((w, gamma));
    }
    let mu = f.coeffs()[d].clone() - lifted;
    let y_weight = (!mu.is_negligible(f.norm_inf(), tol)).then_some(mu);
    Decomposition::canonical(d, finite, y_weight)
}

/// Result of checking a decomposition against a form.
#[derive(Debug, Clone, PartialEq)]
pub struct VerificationReport {
    /// `|expand(dec) - f|_inf` over the normalized coefficients.
    pub max_residual: f64,
    /// `max_residual / |f|_inf`.
    pub relative_residual: f64,
    /// Normalized residual of the product of annihilating factors applied to `f`.
    pub apolarity_residual: f64,
    pub length: usize,
    pub waring_rank: usize,
    pub length_ok: bool,
}

impl VerificationReport {
    pub fn passes(&self, tol: f64) -> bool {
        self.relative_residual <= tol && self.apolarity_residual <= tol && self.length_ok
    }
}

/// Expansion and apolarity residuals of `dec` against `f`.
pub fn residuals<T: Scalar>(f: &BinaryForm<T>, dec: &Decomposition<T>) -> Result<(f64, f64, f64)> {
    if dec.degree() != f.degree() {
        return Err(WaringError::DegreeMismatch {
            expected: f.degree(),
            actual: dec.degree(),
        });
    }
    let diff = dec.expand().sub(f)?;
    let max_residual = diff.norm_inf();
    let scale = f.norm_inf();
    let relative = if scale > 0.0 { max_residual / scale } else { max_residual };
    let g = dec
        .terms()
        .iter()
        .fold(DiffOperator::identity(), |acc, t| {
            acc.compose(&DiffOperator::annihilating_factor(&t.p, &t.q))
        });
    Ok((max_residual, relative, operator_residual(&g, f)))
}

/// Checks expansion, apolarity and length against the Waring rank of `f`.
pub fn verify<S: Scalar>(f: &BinaryForm<S>, dec: &Decomposition<S>, settings: &Settings) -> Result<VerificationReport> {
    let (max_residual, relative_residual, apolarity_residual) = residuals(f, dec)?;
    let waring_rank = waring_rank(f, settings)?.waring_rank;
    Ok(VerificationReport {
        max_residual,
        relative_residual,
        apolarity_residual,
        length: dec.len(),
        waring_rank,
        length_ok: dec.len() == waring_rank,
    })
}

/// [`verify`] for either kind of [`Decomposed`] output.
pub fn verify_decomposed<S: Scalar>(
    f: &BinaryForm<S>,
    dec: &Decomposed<S>,
    settings: &Settings,
) -> Result<VerificationReport> {
    match dec {
        Decomposed::Native(d) => verify(f, d, settings),
        Decomposed::Numeric(d) => {
            let (max_residual, relative_residual, apolarity_residual) = residuals(&f.to_c64(), d)?;
            let waring_rank = waring_rank(f, settings)?.waring_rank;
            Ok(VerificationReport {
                max_residual,
                relative_residual,
                apolarity_residual,
                length: d.len(),
                waring_rank,
                length_ok: d.len() == waring_rank,
            })
        }
    }
}

/// Whether two decompositions have the same terms up to order, comparing
/// weights and linear forms within `tol` relative to their size.
pub fn same_terms(a: &Decomposition<C64>, b: &Decomposition<C64>, tol: f64) -> bool {
    if a.len() != b.len() || a.degree() != b.degree() {
        return false;
    }
    let close = |x: &C64, y: &C64| (x - y).norm() <= tol * x.norm().max(y.norm()).max(1.0);
    let mut used = vec![false; b.len()];
    a.terms().iter().all(|s| {
        let hit = b.terms().iter().enumerate().position(|(j, t)| {
            !used[j] && close(&s.weight, &t.weight) && close(&s.p, &t.p) && close(&s.q, &t.q)
        });
        match hit {
            Some(j) => {
                used[j] = true;
                true
            }
            None => false,
        }
    })
}

/// Up to `count` pairwise different minimal decompositions.
///
/// When the rank is at most `(d + 1) / 2` the minimal decomposition is unique
/// and one is returned. Otherwise candidates come from other members of the
/// certificate families of `f` and `f_x`, and from decompositions of
/// antiderivatives `F` with `F_x = f` (each choice of the new `y^(d+1)`
/// coefficient gives one). Every candidate is verified before it is kept.
pub fn enumerate_decompositions<S: Scalar>(
    f: &BinaryForm<S>,
    count: usize,
    settings: &Settings,
) -> Result<Vec<Decomposed<S>>> {
    if count == 0 {
        return Ok(Vec::new());
    }
    let report = waring_rank(f, settings)?;
    let first = decompose_with_report(f, &report, settings)?;
    let mut out = vec![first];
    let d = report.degree;
    let wr = report.waring_rank;
    if count == 1 || wr <= d.div_ceil(2) || report.branch == Branch::DegenerateMonomial {
        return Ok(out);
    }

    let own_family = report
        .f_rank
        .certificate()
        .filter(|c| c.r == wr && c.solution_set.dim() > 0);
    let fx_family = report
        .fx_rank
        .as_ref()
        .and_then(FRank::certificate)
        .filter(|c| c.r + 1 == wr && c.solution_set.dim() > 0);

    let max_trials = 8 * count + 32;
    let mut rng = ChaCha8Rng::seed_from_u64(settings.seed.wrapping_add(1));
    for trial in 0..max_trials {
        if out.len() >= count {
            break;
        }
        let candidate = match trial % 3 {
            0 => own_family.and_then(|c| family_member(&c.solution_set, &mut rng, settings)).and_then(|t| {
                finite_decomposition(f, &t).ok()
            }),
            1 => fx_family.and_then(|c| family_member(&c.solution_set, &mut rng, settings)).and_then(|t| {
                yterm_decomposition(f, &t, settings.verify_tol).ok()
            }),
            _ => {
                let constant = S::from_i64(small_nonzero(trial / 3, &mut rng));
                antiderivative_decomposition(f, constant, wr, settings)
            }
        };
        let Some(candidate) = candidate else { continue };
        if candidate.len() != wr {
            continue;
        }
        let Ok(rep) = verify_decomposed_against(f, &candidate) else { continue };
        if rep.0 > settings.verify_tol || rep.1 > settings.verify_tol {
            continue;
        }
        let c64 = candidate.to_c64();
        if out.iter().any(|o| same_terms(&o.to_c64(), &c64, 1e-6)) {
            continue;
        }
        out.push(candidate);
    }
    Ok(out)
}

fn verify_decomposed_against<S: Scalar>(f: &BinaryForm<S>, dec: &Decomposed<S>) -> Result<(f64, f64)> {
    let (_, rel, apol) = match dec {
        Decomposed::Native(d) => residuals(f, d)?,
        Decomposed::Numeric(d) => residuals(&f.to_c64(), d)?,
    };
    Ok((rel, apol))
}

/// `1, -1, 2, -2, ...` for the first few trials, then random.
fn small_nonzero(k: usize, rng: &mut ChaCha8Rng) -> i64 {
    if k < 8 {
        let m = (k / 2 + 1) as i64;
        if k.is_multiple_of(2) {
            m
        } else {
            -m
        }
    } else {
        let v: i64 = rng.gen_range(1..=1000);
        if rng.gen_bool(0.5) {
            v
        } else {
            -v
        }
    }
}

fn family_member<S: Scalar>(
    set: &AffineSolutionSet<S>,
    rng: &mut ChaCha8Rng,
    settings: &Settings,
) -> Option<MonicPoly<S>> {
    let params: Vec<i64> = (0..set.dim()).map(|_| rng.gen_range(-20..=20)).collect();
    let t = MonicPoly::new(set.member_i64(&params));
    is_squarefree(&t, settings.tol).then_some(t)
}

/// Decomposes `F = integral of f dx` with new coefficient `constant` and
/// differentiates back: `f = (d + 1) sum lambda_k (x + beta_k y)^d`.
fn antiderivative_decomposition<S: Scalar>(
    f: &BinaryForm<S>,
    constant: S,
    wr: usize,
    settings: &Settings,
) -> Option<Decomposed<S>> {
    let big = f.integrate_x(constant);
    let cert = match f_rank(&big, settings).ok()? {
        FRank::Finite(c) if c.r == wr => c,
        _ => return None,
    };
    let scale_terms = |dec: &Decomposition<C64>| -> Option<Decomposition<C64>> {
        let k = C64::from_usize(big.degree());
        let terms = dec
            .terms()
            .iter()
            .map(|t| LinearFormPower::finite(t.weight * k, t.q))
            .collect();
        Decomposition::new(f.degree(), terms).ok()
    };
    match finite_decomposition(&big, &cert.t_poly).ok()? {
        Decomposed::Native(dec) => {
            let k = S::from_usize(big.degree());
            let terms = dec
                .terms()
                .iter()
                .map(|t| LinearFormPower::finite(t.weight.clone() * k.clone(), t.q.clone()))
                .collect();
            Some(Decomposed::Native(Decomposition::new(f.degree(), terms).ok()?))
        }
        Decomposed::Numeric(dec) => scale_terms(&dec).map(from_numeric),
    }
}

/// Upper-bound decomposition with at most `d` terms over the `d`-th roots of unity.
///
/// The form is first brought to `a_0 a_d != 0`: with exactly one end
/// coefficient zero, a shear `x -> x + alpha y` (or `y -> y + alpha x`) with the
/// first integer `alpha` that works; with both zero nothing is done. Scaling
/// `x, y` by `a_0^(1/d)`, `a_d^(1/d)` then makes both ends equal, and the
/// weights are an inverse DFT of `a_0..a_{d-1}`. Weights below `1e-12` times
/// the largest are dropped.
pub fn roots_of_unity_decomposition<S: Scalar>(f: &BinaryForm<S>) -> Result<Decomposition<C64>> {
    if f.is_zero() {
        return Err(WaringError::ZeroForm);
    }
    let d = f.degree();
    if d == 0 {
        let term = LinearFormPower::new(f.coeffs()[0].to_c64(), C64::new(1.0, 0.0), C64::new(0.0, 0.0))?;
        return Decomposition::new(0, vec![term]);
    }
    let first_zero = f.coeffs()[0].is_zero();
    let last_zero = f.coeffs()[d].is_zero();

    enum Shear {
        None,
        X(i64),
        Y(i64),
    }
    let (g, shear) = match (first_zero, last_zero) {
        (false, true) => {
            let alpha = (1..=d as i64 + 1)
                .find(|&a| !f.substitute(shear_x(a)).coeffs()[d].is_zero())
                .expect("at most d shears fail");
            (f.substitute(shear_x(alpha)), Shear::X(alpha))
        }
        (true, false) => {
            let alpha = (1..=d as i64 + 1)
                .find(|&a| !f.substitute(shear_y(a)).coeffs()[0].is_zero())
                .expect("at most d shears fail");
            (f.substitute(shear_y(alpha)), Shear::Y(alpha))
        }
        _ => (f.clone(), Shear::None),
    };

    let a: Vec<C64> = g.coeffs().iter().map(Scalar::to_c64).collect();
    let (s, t) = if first_zero && last_zero {
        (C64::new(1.0, 0.0), C64::new(1.0, 0.0))
    } else {
        let inv = 1.0 / d as f64;
        (a[0].powf(inv), a[d].powf(inv))
    };
    let normalized: Vec<C64> = (0..d).map(|i| a[i] / (s.powi((d - i) as i32) * t.powi(i as i32))).collect();

    let zeta = |k: usize| C64::from_polar(1.0, 2.0 * std::f64::consts::PI * (k % d) as f64 / d as f64);
    let weights: Vec<C64> = (0..d)
        .map(|k| {
            normalized
                .iter()
                .enumerate()
                .fold(C64::new(0.0, 0.0), |acc, (i, ai)| acc + ai * zeta(k * i).conj())
                / d as f64
        })
        .collect();
    let largest = weights.iter().map(|w| w.norm()).fold(0.0, f64::max);

    let mut terms = Vec::new();
    for (k, w) in weights.into_iter().enumerate() {
        if w.norm() <= 1e-12 * largest {
            continue;
        }
        let (p, q) = (s, zeta(k) * t);
        let (p, q) = match shear {
            Shear::None => (p, q),
            Shear::X(alpha) => (p, q - p * alpha as f64),
            Shear::Y(alpha) => (p - q * alpha as f64, q),
        };
        terms.push(LinearFormPower::new(w, p, q)?);
    }
    Decomposition::new(d, terms)
}

/// `(x, y) -> (x + alpha y, y)`.
fn shear_x<S: Scalar>(alpha: i64) -> [[S; 2]; 2] {
    [[S::one(), S::from_i64(alpha)], [S::zero(), S::one()]]
}

/// `(x, y) -> (x, alpha x + y)`.
fn shear_y<S: Scalar>(alpha: i64) -> [[S; 2]; 2] {
    [[S::one(), S::zero()], [S::from_i64(alpha), S::one()]]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{gauss_ratio, GaussRational};

    type Q = GaussRational;

    fn q(n: i64) -> Q {
        Q::from_i64(n)
    }

    fn form(d: usize, m: &[i64]) -> BinaryForm<Q> {
        BinaryForm::from_monomial(d, &m.iter().map(|&v| q(v)).collect::<Vec<_>>()).unwrap()
    }

    fn settings() -> Settings {
        Settings::default()
    }

    #[test]
    fn two_powers_example() {
        let f = form(3, &[3, -3, 9, -1]);
        let report = waring_rank(&f, &settings()).unwrap();
        assert_eq!(report.waring_rank, 2);
        assert_eq!(report.branch, Branch::Finite);
        let dec = decompose(&f, &settings()).unwrap();
        let dec = dec.native().unwrap();
        let mut pairs: Vec<_> = dec.terms().iter().map(|t| (t.weight.clone(), t.q.clone())).collect();
        pairs.sort_by_key(|(_, b)| b.re.clone());
        assert_eq!(pairs, vec![(q(2), q(-1)), (q(1), q(1))]);
        assert_eq!(dec.expand(), f);
    }

    #[test]
    fn y_term_example() {
        let f = form(3, &[8, 12, 6, 0]);
        let report = waring_rank(&f, &settings()).unwrap();
        assert_eq!(report.f_rank_value(), 3);
        assert_eq!(report.fx_rank_value(), Some(1));
        assert_eq!(report.waring_rank, 2);
        assert_eq!(report.branch, Branch::YTerm);
        let dec = decompose(&f, &settings()).unwrap();
        let dec = dec.native().unwrap();
        assert_eq!(dec.expand(), f);
        assert_eq!(dec.y_term_weight(), Some(&q(-1)));
        assert_eq!(dec.finite_slopes(), vec![gauss_ratio(1, 2)]);
    }

    #[test]
    fn certificate_for_x2y() {
        let f = form(3, &[0, 3, 0, 0]);
        let FRank::Finite(cert) = f_rank(&f, &settings()).unwrap() else {
            panic!()
        };
        assert_eq!(cert.r, 3);
        assert_eq!(cert.c, vec![q(-1), q(0), q(0)]);
        let report = waring_rank(&f, &settings()).unwrap();
        assert_eq!(report.waring_rank, 3);
        let dec = decompose(&f, &settings()).unwrap();
        assert!(matches!(dec, Decomposed::Numeric(_)));
        let (_, rel, apol) = residuals(&f.to_c64(), &dec.to_c64()).unwrap();
        assert!(rel < 1e-12 && apol < 1e-12);

        let alt = decompose_branch(&f, &report, Branch::YTerm, &settings()).unwrap();
        let alt = alt.native().unwrap();
        assert_eq!(alt.expand(), f);
        assert_eq!(alt.y_term_weight(), Some(&q(-1)));
    }

    #[test]
    fn special_cases() {
        let s = settings();
        assert_eq!(
            f_rank(&form(4, &[0, 0, 0, 0, 1]), &s).unwrap(),
            FRank::AboveDegree {
                certainty: Certainty::Exact
            }
        );
        let r = waring_rank(&form(4, &[0, 0, 0, 0, 7]), &s).unwrap();
        assert_eq!((r.waring_rank, r.branch), (1, Branch::DegenerateMonomial));
        let dec = decompose(&form(4, &[0, 0, 0, 0, 7]), &s).unwrap();
        assert_eq!(dec.native().unwrap().expand(), form(4, &[0, 0, 0, 0, 7]));

        let f = form(5, &[1, 0, 0, 0, 0, 1]);
        let r = waring_rank(&f, &s).unwrap();
        assert_eq!((r.f_rank_value(), r.fx_rank_value(), r.waring_rank), (5, Some(1), 2));

        let c = BinaryForm::new(vec![q(4)]).unwrap();
        assert_eq!(waring_rank(&c, &s).unwrap().waring_rank, 1);
        assert_eq!(decompose(&c, &s).unwrap().native().unwrap().expand(), c);

        let lin = form(1, &[2, 5]);
        assert_eq!(decompose(&lin, &s).unwrap().native().unwrap().expand(), lin);
        assert_eq!(waring_rank(&BinaryForm::<Q>::zero(3), &s), Err(WaringError::ZeroForm));
    }

    #[test]
    fn f_rank_of_pure_power() {
        let f = BinaryForm::power(2, &q(6), &q(2), &q(1));
        assert_eq!(f_rank(&f, &settings()).unwrap().value(2), 1);
    }

    #[test]
    fn enumerate_unique_and_generic() {
        let s = settings();
        let f = form(3, &[3, -3, 9, -1]);
        assert_eq!(enumerate_decompositions(&f, 5, &s).unwrap().len(), 1);
        assert!(enumerate_decompositions(&f, 0, &s).unwrap().is_empty());

        let g: BinaryForm<Q> = crate::sampling::consecutive_powers(4, 3);
        let decs = enumerate_decompositions(&g, 3, &s).unwrap();
        assert_eq!(decs.len(), 3);
        for d in &decs {
            assert_eq!(d.len(), 3);
            let (_, rel, _) = residuals(&g.to_c64(), &d.to_c64()).unwrap();
            assert!(rel < 1e-9);
        }
    }

    #[test]
    fn roots_of_unity_cases() {
        for f in [form(3, &[0, 3, 0, 0]), form(3, &[1, 0, 0, 1]), form(4, &[1, 4, 6, 4, 1]), form(3, &[2, 1, 0, 0]), form(3, &[0, 0, 1, 5])] {
            let dec = roots_of_unity_decomposition(&f).unwrap();
            assert!(dec.len() <= f.degree());
            let (_, rel, _) = residuals(&f.to_c64(), &dec).unwrap();
            assert!(rel < 1e-12, "{f:?}: {rel}");
        }
        let dec = roots_of_unity_decomposition(&form(4, &[1, 4, 6, 4, 1])).unwrap();
        assert_eq!(dec.len(), 1);
    }

    #[test]
    fn float_backend_agrees() {
        let f = form(3, &[3, -3, 9, -1]).to_c64();
        let dec = decompose(&f, &settings()).unwrap();
        let Decomposed::Native(dec) = dec else { panic!() };
        let (_, rel, apol) = residuals(&f, &dec).unwrap();
        assert!(rel < 1e-12 && apol < 1e-12);
        assert_eq!(dec.len(), 2);
    }

    #[test]
    fn verification() {
        let f = form(3, &[3, -3, 9, -1]);
        let dec = Decomposition::canonical(3, vec![(q(1), q(1)), (q(2), q(-1))], None).unwrap();
        let rep = verify(&f, &dec, &settings()).unwrap();
        assert_eq!((rep.max_residual, rep.apolarity_residual), (0.0, 0.0));
        assert!(rep.length_ok);
        let bad = Decomposition::canonical(3, vec![(gauss_ratio(101, 100), q(1)), (q(2), q(-1))], None).unwrap();
        let rep = verify(&f, &bad, &settings()).unwrap();
        assert!((rep.max_residual - 0.01).abs() < 1e-12);
        assert!(!rep.passes(1e-9));
        let wrong = Decomposition::canonical(2, vec![(q(1), q(1))], None).unwrap();
        assert!(verify(&f, &wrong, &settings()).is_err());
    }
}
