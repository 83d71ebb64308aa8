//! Acceptance checks, one line per criterion.
//!
//! Runs as a plain binary (`harness = false`) so the report is always printed.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use waring_core::apolarity::annihilator_space;
use waring_core::form::{apply_operator, DiffOperator};
use waring_core::sampling::{
    mixed_form, random_canonical_decomposition, random_form_with_ends, random_integer_form, FormKind,
};
use waring_core::scalar::gauss_ratio;
use waring_core::{
    decompose, decompose_branch, decompose_with_report, enumerate_decompositions, format_form, oracle_rank,
    parse_form, residuals, roots_of_unity_decomposition, same_terms, waring_rank, BinaryForm, Branch, Decomposed,
    Decomposition, GaussRational, RankReport, Scalar, Settings, C64,
};

type Q = GaussRational;

fn q(n: i64) -> Q {
    Q::from_i64(n)
}

fn form(d: usize, m: &[i64]) -> BinaryForm<Q> {
    BinaryForm::from_monomial(d, &m.iter().map(|&v| q(v)).collect::<Vec<_>>()).unwrap()
}

/// Everything later criteria re-examine.
#[derive(Default)]
struct Ledger {
    exact: Vec<(BinaryForm<Q>, Decomposed<Q>)>,
    float: Vec<(BinaryForm<C64>, Decomposition<C64>)>,
    chains: Vec<(String, usize, usize, Option<usize>)>,
}

impl Ledger {
    fn chain(&mut self, label: String, report: &RankReport<Q>) {
        self.chains
            .push((label, report.f_rank_value(), report.waring_rank, report.fx_rank_value()));
    }
}

type Outcome = Result<String, String>;

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(elapsed: Duration, limit: Duration) -> Result<(), String> {
    check(elapsed <= limit, || format!("took {elapsed:.2?}, limit {limit:?}"))
}

fn relative_residual(f: &BinaryForm<Q>, dec: &Decomposed<Q>) -> f64 {
    match dec {
        Decomposed::Native(d) => residuals(f, d).unwrap().1,
        Decomposed::Numeric(d) => residuals(&f.to_c64(), d).unwrap().1,
    }
}

fn c1_golden(ledger: &mut Ledger) -> Outcome {
    let start = Instant::now();
    let f: BinaryForm<Q> = parse_form("3x^3-3x^2y+9xy^2-y^3", None).map_err(|e| e.to_string())?;
    let s = Settings::default();
    let report = waring_rank(&f, &s).map_err(|e| e.to_string())?;
    check(report.waring_rank == 2, || format!("rank {}", report.waring_rank))?;
    let dec = decompose_with_report(&f, &report, &s).map_err(|e| e.to_string())?;
    let native = dec.native().ok_or("decomposition is not exact")?;
    let mut pairs: Vec<_> = native.terms().iter().map(|t| (t.weight.clone(), t.q.clone())).collect();
    pairs.sort_by(|a, b| a.1.re.cmp(&b.1.re));
    check(pairs == vec![(q(2), q(-1)), (q(1), q(1))], || format!("terms {pairs:?}"))?;
    check(native.terms().iter().all(|t| t.p == q(1)), || "terms not monic in x".into())?;
    check(native.expand() == f, || "nonzero residual".into())?;
    let elapsed = start.elapsed();
    ledger.exact.push((f, dec));
    ledger.chain("golden".into(), &report);
    within(elapsed, Duration::from_millis(100))?;
    Ok(format!("rank 2, terms (1, 1) and (2, -1), exact, {elapsed:.2?}"))
}

fn c2_y_term(ledger: &mut Ledger) -> Outcome {
    let f = form(3, &[8, 12, 6, 0]);
    let s = Settings::default();
    let report = waring_rank(&f, &s).map_err(|e| e.to_string())?;
    let ranks = (report.f_rank_value(), report.fx_rank_value(), report.waring_rank);
    check(ranks == (3, Some(1), 2), || format!("(fRank, fxRank, waringRank) = {ranks:?}"))?;
    let dec = decompose_with_report(&f, &report, &s).map_err(|e| e.to_string())?;
    let native = dec.native().ok_or("decomposition is not exact")?.clone();
    check(native.expand() == f, || "nonzero residual".into())?;
    // (2x + y)^3 = 8 (x + y/2)^3 in the canonical shape.
    let expected = Decomposition::canonical(3, vec![(q(8), gauss_ratio(1, 2))], Some(q(-1))).unwrap();
    check(same_terms(&native.to_c64(), &expected.to_c64(), 0.0), || format!("{native:?}"))?;
    let again = decompose(&f, &Settings::with_seed(99)).map_err(|e| e.to_string())?;
    check(again == dec, || "second seed gave a different decomposition".into())?;
    let all = enumerate_decompositions(&f, 5, &s).map_err(|e| e.to_string())?;
    check(all.len() == 1, || format!("enumeration returned {}", all.len()))?;
    ledger.exact.push((f, dec));
    ledger.chain("worked cubic".into(), &report);
    Ok("ranks (3, 1, 2), (2x + y)^3 - y^3 exact and unique".into())
}

fn c3_three_terms(ledger: &mut Ledger) -> Outcome {
    let f = form(3, &[0, 3, 0, 0]).to_c64();
    let s = Settings::default();
    let report = waring_rank(&f, &s).map_err(|e| e.to_string())?;
    check(report.waring_rank == 3, || format!("rank {}", report.waring_rank))?;

    let Decomposed::Native(roots) = decompose_branch(&f, &report, Branch::Finite, &s).map_err(|e| e.to_string())?
    else {
        return Err("float backend returned a numeric wrapper".into());
    };
    check(roots.len() == 3, || format!("length {}", roots.len()))?;
    for t in roots.terms() {
        let beta = t.q;
        check((beta.powi(3) - 1.0).norm() < 1e-12, || format!("slope {beta} is not a cube root of 1"))?;
        let expected = beta * beta / 3.0;
        check((t.weight - expected).norm() < 1e-12, || format!("weight {} at slope {beta}", t.weight))?;
    }
    let (abs1, ..) = residuals(&f, &roots).unwrap();
    check(abs1 <= 1e-10, || format!("residual {abs1:e}"))?;

    let Decomposed::Native(alt) = decompose_branch(&f, &report, Branch::YTerm, &s).map_err(|e| e.to_string())?
    else {
        return Err("float backend returned a numeric wrapper".into());
    };
    let expected = Decomposition::canonical(
        3,
        vec![(C64::new(0.5, 0.0), C64::new(1.0, 0.0)), (C64::new(-0.5, 0.0), C64::new(-1.0, 0.0))],
        Some(C64::new(-1.0, 0.0)),
    )
    .unwrap();
    check(same_terms(&alt, &expected, 1e-12), || format!("{alt:?}"))?;
    let (abs2, ..) = residuals(&f, &alt).unwrap();
    check(abs2 <= 1e-10, || format!("residual {abs2:e}"))?;

    let dft = roots_of_unity_decomposition(&f).map_err(|e| e.to_string())?;
    let (abs3, ..) = residuals(&f, &dft).unwrap();
    check(dft.len() <= 3 && abs3 <= 1e-10, || format!("upper-bound decomposition: length {}, residual {abs3:e}", dft.len()))?;

    ledger.float.push((f.clone(), roots));
    ledger.float.push((f, alt));
    Ok(format!("rank 3; residuals {abs1:.1e} and {abs2:.1e}"))
}

fn c4_monomials(ledger: &mut Ledger) -> Outcome {
    let start = Instant::now();
    let s = Settings::default();
    for d in 2..=8 {
        let mut m = vec![0; d + 1];
        m[d - 1] = 1;
        let f = form(d, &m);
        let oracle = oracle_rank(&f, &s.search(), s.rank_tol).map_err(|e| e.to_string())?;
        check(oracle.rank == d, || format!("oracle rank {} for d = {d}", oracle.rank))?;
        let report = waring_rank(&f, &s).map_err(|e| e.to_string())?;
        check(report.waring_rank == d, || format!("rank {} for d = {d}", report.waring_rank))?;
        if d >= 3 {
            let space = annihilator_space(&f, 2, s.rank_tol).map_err(|e| e.to_string())?;
            check(space.basis == vec![DiffOperator::new(vec![q(1), q(0), q(0)]).unwrap()], || {
                format!("degree-2 annihilator for d = {d}: {:?}", space.basis)
            })?;
        }
        let dec = decompose_with_report(&f, &report, &s).map_err(|e| e.to_string())?;
        ledger.exact.push((f, dec));
        ledger.chain(format!("x y^{}", d - 1), &report);
    }
    let elapsed = start.elapsed();
    within(elapsed, Duration::from_secs(1))?;
    Ok(format!("ranks d for d = 2..8, degree-2 annihilator dx^2, {elapsed:.2?}"))
}

fn c5_odd_generic(ledger: &mut Ledger) -> Outcome {
    let start = Instant::now();
    let mut summary = Vec::new();
    for d in [3usize, 5, 7, 9] {
        let mut hits = 0;
        for i in 0..200 {
            let f: BinaryForm<Q> = random_integer_form(d, 9, 5_000 + d as u64, i);
            let s = Settings::with_seed(0);
            let report = waring_rank(&f, &s).map_err(|e| e.to_string())?;
            ledger.chain(format!("odd d={d} #{i}"), &report);
            let dec = decompose_with_report(&f, &report, &s).map_err(|e| format!("d = {d} #{i}: {e}"))?;
            if report.waring_rank == d.div_ceil(2) {
                hits += 1;
                let other = decompose(&f, &Settings::with_seed(0xdead_beef)).map_err(|e| e.to_string())?;
                check(same_terms(&dec.to_c64(), &other.to_c64(), 1e-12), || {
                    format!("d = {d} #{i}: seeds disagree")
                })?;
            }
            let rel = relative_residual(&f, &dec);
            check(rel <= 1e-9, || format!("d = {d} #{i}: residual {rel:e}"))?;
            ledger.exact.push((f, dec));
        }
        check(hits >= 199, || format!("d = {d}: generic rank in {hits}/200"))?;
        summary.push(format!("d={d}: {hits}/200"));
    }
    let elapsed = start.elapsed();
    within(elapsed, Duration::from_secs(30))?;
    Ok(format!("{}, {elapsed:.2?}", summary.join(", ")))
}

fn c6_even_generic(ledger: &mut Ledger) -> Outcome {
    let mut summary = Vec::new();
    for d in [4usize, 6, 8] {
        let mut hits = 0;
        let mut enumerated = 0;
        for i in 0..200 {
            let f: BinaryForm<Q> = random_integer_form(d, 9, 6_000 + d as u64, i);
            let s = Settings::with_seed(0);
            let report = waring_rank(&f, &s).map_err(|e| e.to_string())?;
            ledger.chain(format!("even d={d} #{i}"), &report);
            if report.waring_rank == d / 2 + 1 {
                hits += 1;
            }
            let dec = decompose_with_report(&f, &report, &s).map_err(|e| format!("d = {d} #{i}: {e}"))?;
            ledger.exact.push((f.clone(), dec));
            if i % 10 == 0 {
                let all = enumerate_decompositions(&f, 3, &s).map_err(|e| e.to_string())?;
                check(all.len() >= 3, || format!("d = {d} #{i}: {} decompositions", all.len()))?;
                for (a, x) in all.iter().enumerate() {
                    let rel = relative_residual(&f, x);
                    check(rel <= 1e-8, || format!("d = {d} #{i}: residual {rel:e}"))?;
                    check(x.len() == report.waring_rank, || format!("d = {d} #{i}: length {}", x.len()))?;
                    for y in &all[a + 1..] {
                        check(!same_terms(&x.to_c64(), &y.to_c64(), 1e-6), || {
                            format!("d = {d} #{i}: repeated decomposition")
                        })?;
                    }
                }
                enumerated += 1;
                ledger.exact.extend(all.into_iter().map(|x| (f.clone(), x)));
            }
        }
        check(hits >= 199, || format!("d = {d}: generic rank in {hits}/200"))?;
        summary.push(format!("d={d}: {hits}/200, {enumerated} enumerated"));
    }
    Ok(summary.join(", "))
}

fn c7_oracle(ledger: &mut Ledger) -> Outcome {
    let s = Settings::default();
    let mut agree = 0;
    for i in 0..100u64 {
        let kind = FormKind::ALL[(i % 6) as usize];
        let d = 2 + ((i / 6) % 7) as usize;
        let f = mixed_form(kind, d, 7_000, i);
        let report = waring_rank(&f, &s).map_err(|e| e.to_string())?;
        let oracle = oracle_rank(&f, &s.search(), s.rank_tol).map_err(|e| format!("#{i}: {e}"))?;
        if oracle.rank == report.waring_rank {
            agree += 1;
        }
        ledger.chain(format!("mixed #{i}"), &report);
        let dec = decompose_with_report(&f, &report, &s).map_err(|e| format!("#{i}: {e}"))?;
        ledger.exact.push((f, dec));
    }
    check(agree == 100, || format!("agreement {agree}/100"))?;
    Ok("agreement 100/100".into())
}

fn c8_apolarity(ledger: &mut Ledger) -> Outcome {
    let mut exact = 0;
    let mut worst: f64 = 0.0;
    for (f, dec) in &ledger.exact {
        match dec {
            Decomposed::Native(d) => {
                let g = annihilator(d);
                if g.degree() <= f.degree() {
                    let image = apply_operator(&g, f).map_err(|e| e.to_string())?;
                    check(image.is_zero(), || format!("operator does not annihilate {}", format_form(f)))?;
                }
                exact += 1;
            }
            Decomposed::Numeric(d) => {
                let (.., apol) = residuals(&f.to_c64(), d).unwrap();
                worst = worst.max(apol);
            }
        }
    }
    for (f, d) in &ledger.float {
        let (.., apol) = residuals(f, d).unwrap();
        worst = worst.max(apol);
    }
    check(worst <= 1e-9, || format!("float apolarity residual {worst:e}"))?;
    let total = ledger.exact.len() + ledger.float.len();
    Ok(format!("{total} decompositions, {exact} exact, worst float residual {worst:.1e}"))
}

fn annihilator<S: Scalar>(d: &Decomposition<S>) -> DiffOperator<S> {
    d.terms().iter().fold(DiffOperator::identity(), |acc, t| {
        acc.compose(&DiffOperator::annihilating_factor(&t.p, &t.q))
    })
}

fn c9_upper_bound() -> Outcome {
    let patterns = [(false, false), (true, false), (false, true), (true, true)];
    let mut worst: f64 = 0.0;
    for d in 3..=8 {
        for i in 0..50u64 {
            let (first, last) = patterns[(i % 4) as usize];
            let f: BinaryForm<Q> = random_form_with_ends(d, first, last, 9_000 + d as u64, i);
            let dec = roots_of_unity_decomposition(&f).map_err(|e| e.to_string())?;
            check(dec.len() <= d, || format!("d = {d} #{i}: length {}", dec.len()))?;
            let (.., rel, _) = residuals(&f.to_c64(), &dec).unwrap();
            worst = worst.max(rel);
            check(rel <= 1e-9, || format!("d = {d} #{i}: residual {rel:e}"))?;
        }
    }
    Ok(format!("300 forms, all three end patterns, worst residual {worst:.1e}"))
}

fn c10_round_trip() -> Outcome {
    let s = Settings::default();
    for i in 0..100u64 {
        let d = 2 + (i % 7) as usize;
        let r = 1 + (i as usize / 7) % d.div_ceil(2);
        let dec = random_canonical_decomposition(d, r, 10_000, i);
        let f = dec.expand();
        let got = decompose(&f, &s).map_err(|e| e.to_string())?;
        let native = got.native().ok_or_else(|| format!("#{i}: not exact"))?;
        let key = |x: &Decomposition<Q>| {
            let mut v: Vec<_> = x
                .terms()
                .iter()
                .map(|t| (t.q.re.clone(), t.q.im.clone(), t.weight.clone(), t.p.clone()))
                .collect();
            v.sort_by(|a, b| (&a.0, &a.1).cmp(&(&b.0, &b.1)));
            v
        };
        check(key(native) == key(&dec), || format!("#{i}: d = {d}, r = {r}: {native:?} vs {dec:?}"))?;
    }
    Ok("100/100 recovered exactly".into())
}

fn c11_chain(ledger: &Ledger) -> Outcome {
    for (label, fr, wr, fxr) in &ledger.chains {
        check(fr >= wr, || format!("{label}: fRank {fr} < waringRank {wr}"))?;
        if let Some(fxr) = fxr {
            check(wr >= fxr && *fxr + 1 >= *wr, || format!("{label}: waringRank {wr}, fxRank {fxr}"))?;
        }
    }
    Ok(format!("{} forms", ledger.chains.len()))
}

fn c12_parser() -> Outcome {
    for i in 0..500u64 {
        let d = (i % 13) as usize;
        let kind = FormKind::ALL[(i % 6) as usize];
        let f = mixed_form(kind, d, 12_000, i);
        let text = format_form(&f);
        let back: BinaryForm<Q> = parse_form(&text, Some(d)).map_err(|e| format!("{text:?}: {e}"))?;
        check(back == f, || format!("{text:?} parsed to a different form"))?;
    }
    Ok("500/500".into())
}

fn main() -> ExitCode {
    let mut ledger = Ledger::default();
    let criteria: Vec<(&str, Box<dyn FnOnce(&mut Ledger) -> Outcome>)> = vec![
        ("golden two-power cubic", Box::new(c1_golden)),
        ("y-term branch worked cubic", Box::new(c2_y_term)),
        ("three-term cubic, both decompositions", Box::new(c3_three_terms)),
        ("x y^(d-1) ranks and annihilators", Box::new(c4_monomials)),
        ("generic rank, odd degrees", Box::new(c5_odd_generic)),
        ("generic rank and enumeration, even degrees", Box::new(c6_even_generic)),
        ("oracle equivalence", Box::new(c7_oracle)),
        ("apolarity of every decomposition", Box::new(c8_apolarity)),
        ("roots-of-unity upper bound", Box::new(|_| c9_upper_bound())),
        ("round-trip reconstruction", Box::new(|_| c10_round_trip())),
        ("rank chain", Box::new(|l| c11_chain(l))),
        ("parser round-trip", Box::new(|_| c12_parser())),
    ];
    let mut failed = 0;
    for (n, (name, run)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let outcome = run(&mut ledger);
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail} [{secs:.2}s]", n + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {why} [{secs:.2}s]", n + 1);
            }
        }
    }
    if failed == 0 {
        println!("acceptance: all 12 criteria pass");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {failed} of 12 criteria fail");
        ExitCode::FAILURE
    }
}
