use proptest::prelude::*;

use waring_core::apolarity::catalecticant;
use waring_core::linalg::{poly_gcd, poly_roots, resultant_ttprime};
use waring_core::sampling::{consecutive_powers, mixed_form, random_integer_form, FormKind};
use waring_core::scalar::max_magnitude;
use waring_core::*;

fn g(v: i64) -> GaussRational {
    GaussRational::from_i64(v)
}

fn exact_form(coeffs: &[i64]) -> BinaryForm<GaussRational> {
    BinaryForm::new(coeffs.iter().map(|&v| g(v)).collect()).unwrap()
}

#[test]
fn oracle_agrees_on_gaussian_forms() {
    let settings = Settings::with_seed(11);
    for i in 0..24 {
        let d = 2 + (i as usize % 7);
        let f = mixed_form(FormKind::Gaussian, d, 31, i);
        let report = waring_rank(&f, &settings).unwrap();
        let oracle = oracle_rank(&f, &settings.search(), settings.rank_tol).unwrap();
        assert_eq!(report.waring_rank, oracle.rank, "sample {i}: {}", format_form(&f));
    }
}

#[test]
fn consecutive_powers_have_rank_r() {
    let settings = Settings::default();
    for r in 2..=5 {
        let f: BinaryForm<GaussRational> = consecutive_powers(2 * r - 1, r);
        assert_eq!(waring_rank(&f, &settings).unwrap().waring_rank, r);
    }
}

#[test]
fn x_times_power_of_y_has_full_rank() {
    let settings = Settings::default();
    for d in 2..=8 {
        let mut m = vec![g(0); d + 1];
        m[d - 1] = g(1);
        let f = BinaryForm::from_monomial(d, &m).unwrap();
        assert_eq!(waring_rank(&f, &settings).unwrap().waring_rank, d);
    }
}

#[test]
fn rank_chain_holds() {
    let settings = Settings::with_seed(3);
    for i in 0..60 {
        let f: BinaryForm<GaussRational> = random_integer_form(2 + (i as usize % 6), 5, 77, i);
        let report = waring_rank(&f, &settings).unwrap();
        let d = f.degree();
        assert!(report.waring_rank <= report.f_rank_value());
        if let Some(fx) = report.fx_rank_value() {
            assert!(report.waring_rank <= fx + 1);
        }
        assert!(report.waring_rank <= d);
    }
}

#[test]
fn catalecticant_is_the_coefficient_hankel() {
    let f = exact_form(&[1, 2, 3, 4, 5, 6]);
    let m = catalecticant(&f, 2).unwrap();
    assert_eq!(m.len(), 4);
    for (i, row) in m.iter().enumerate() {
        assert_eq!(row.len(), 3);
        for (j, v) in row.iter().enumerate() {
            assert_eq!(*v, g((i + j + 1) as i64));
        }
    }
}

#[test]
fn kernel_dimension_staircase() {
    for i in 0..20 {
        let d = 2 + (i as usize % 7);
        let f: BinaryForm<GaussRational> = random_integer_form(d, 9, 5, i);
        for e in 1..=d {
            let basis = annihilator_space(&f, e, 1e-10).unwrap();
            assert!(basis.dim() + d >= 2 * e, "d={d} e={e} dim={}", basis.dim());
        }
    }
}

#[test]
fn every_factor_of_a_certificate_is_needed() {
    let f = exact_form(&[3, -1, 3, -1]);
    let betas = [g(1), g(-1)];
    assert!(apolarity_check(&f, &betas, false, 0.0).unwrap());
    for skip in 0..betas.len() {
        let rest: Vec<_> = betas.iter().enumerate().filter(|(k, _)| *k != skip).map(|(_, b)| b.clone()).collect();
        assert!(!apolarity_check(&f, &rest, false, 0.0).unwrap());
    }
}

#[test]
fn certificate_roots_are_apolar() {
    let settings = Settings::with_seed(9);
    for i in 0..30 {
        let f: BinaryForm<GaussRational> = random_integer_form(3 + (i as usize % 5), 9, 13, i);
        if let FRank::Finite(cert) = f_rank(&f, &settings).unwrap() {
            let roots = poly_roots(&cert.t_poly).unwrap().to_c64();
            assert!(apolarity_check(&f.to_c64(), &roots, false, 1e-8).unwrap());
        }
    }
}

#[test]
fn exact_decompositions_expand_back() {
    let settings = Settings::with_seed(1);
    for i in 0..30 {
        let f = mixed_form(FormKind::ALL[i as usize % 6], 2 + (i as usize % 6), 17, i);
        let dec = decompose(&f, &settings).unwrap();
        let report = verify_decomposed(&f, &dec, &settings).unwrap();
        assert!(report.passes(settings.verify_tol), "{}: {report:?}", format_form(&f));
        if let Some(native) = dec.native() {
            assert_eq!(native.expand(), f);
        }
    }
}

fn small_gauss() -> impl Strategy<Value = GaussRational> {
    (-6i64..=6, -6i64..=6).prop_map(|(re, im)| g(re) + g(im) * GaussRational::i())
}

fn small_form(d: usize) -> impl Strategy<Value = BinaryForm<GaussRational>> {
    proptest::collection::vec(small_gauss(), d + 1).prop_map(|c| BinaryForm::new(c).unwrap())
}

fn small_operator(e: usize) -> impl Strategy<Value = DiffOperator<GaussRational>> {
    proptest::collection::vec(small_gauss(), e + 1).prop_map(|c| DiffOperator::new(c).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn apply_operator_is_bilinear(
        f in small_form(5),
        h in small_form(5),
        g1 in small_operator(2),
        g2 in small_operator(2),
        s in small_gauss(),
    ) {
        let lhs = apply_operator(&g1, &f.add(&h.scale(&s)).unwrap()).unwrap();
        let rhs = apply_operator(&g1, &f).unwrap().add(&apply_operator(&g1, &h).unwrap().scale(&s)).unwrap();
        prop_assert_eq!(lhs, rhs);
        let sum = DiffOperator::new(
            g1.coeffs().iter().zip(g2.coeffs()).map(|(a, b)| a + b).collect(),
        ).unwrap();
        let lhs = apply_operator(&sum, &f).unwrap();
        let rhs = apply_operator(&g1, &f).unwrap().add(&apply_operator(&g2, &f).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn resultant_vanishes_iff_gcd_is_nonconstant(roots in proptest::collection::vec(-4i64..=4, 1..6)) {
        let roots: Vec<_> = roots.into_iter().map(g).collect();
        let t = MonicPoly::from_roots(&roots);
        let asc = t.ascending();
        let deriv: Vec<_> = (1..asc.len()).map(|i| &asc[i] * g(i as i64)).collect();
        let common = poly_gcd(&asc, &deriv);
        let repeated = (0..roots.len()).any(|i| roots[i + 1..].contains(&roots[i]));
        prop_assert_eq!(resultant_ttprime(&t) == g(0), repeated);
        prop_assert_eq!(common.len() > 1, repeated);
    }

    #[test]
    fn float_roots_reexpand(roots in proptest::collection::vec((-50.0f64..50.0, -50.0f64..50.0), 2..8)) {
        let roots: Vec<C64> = roots.into_iter().map(|(re, im)| C64::new(re, im)).collect();
        let separated = (0..roots.len())
            .all(|i| (i + 1..roots.len()).all(|j| (roots[i] - roots[j]).norm() > 1e-3));
        prop_assume!(separated);
        let t = MonicPoly::from_roots(&roots);
        let found = poly_roots(&t).unwrap().to_c64();
        let back = MonicPoly::from_roots(&found);
        let scale = max_magnitude(t.lower_coeffs()).max(1.0);
        for (a, b) in t.lower_coeffs().iter().zip(back.lower_coeffs()) {
            prop_assert!((a - b).norm() <= 2f64.powi(-35) * scale, "{a} vs {b}");
        }
    }
}
