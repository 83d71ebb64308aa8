use serde::Serialize;
use waring_core::parser::{format_operator, parse_decomposition};
use waring_core::{
    apply_operator, enumerate_decompositions, format_form, oracle_rank, parse_operator, verify as verify_form, verify_decomposed,
    waring_rank,
};

use crate::render::{certainty_parts, json_of, DecompositionJson, FormReport, Render};
use crate::{parse_input, settings, CliError, CliResult, ConfigArgs, FormInput};

/// The forms named on the command line or in `--file`.
pub fn read_inputs(input: &FormInput) -> CliResult<(Vec<String>, bool)> {
    match (&input.form, &input.file) {
        (Some(f), _) => Ok((vec![f.clone()], true)),
        (None, Some(path)) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
            let forms: Vec<String> = text
                .lines()
                .map(|l| l.split('#').next().unwrap_or("").trim())
                .filter(|l| !l.is_empty())
                .map(str::to_string)
                .collect();
            if forms.is_empty() {
                return Err(CliError::Usage(format!("{} contains no forms", path.display())));
            }
            Ok((forms, false))
        }
        (None, None) => Err(CliError::Usage("give a form or --file".into())),
    }
}

fn emit<T: Serialize>(reports: &[T], single: bool, cfg: &ConfigArgs, text: impl Fn(&T) -> String) -> String {
    if cfg.json {
        json_of(reports, single)
    } else {
        reports.iter().map(text).collect::<Vec<_>>().join("\n")
    }
}

pub fn rank<S: Render>(input: &FormInput, cfg: &ConfigArgs) -> CliResult<String> {
    let (forms, single) = read_inputs(input)?;
    let settings = settings(cfg);
    let mut reports = Vec::new();
    for text in &forms {
        let f = parse_input::<S>(text)?;
        let report = waring_rank(&f, &settings)?;
        reports.push(FormReport::new(text, &report, cfg.mode.name(), cfg.seed));
    }
    Ok(emit(&reports, single, cfg, FormReport::text))
}

pub fn decompose<S: Render>(input: &FormInput, count: usize, cfg: &ConfigArgs) -> CliResult<String> {
    if count == 0 {
        return Err(CliError::Usage("--count must be at least 1".into()));
    }
    let (forms, single) = read_inputs(input)?;
    let settings = settings(cfg);
    let mut reports = Vec::new();
    for text in &forms {
        let f = parse_input::<S>(text)?;
        let report = waring_rank(&f, &settings)?;
        let mut out = FormReport::new(text, &report, cfg.mode.name(), cfg.seed);
        for dec in enumerate_decompositions(&f, count, &settings)? {
            let check = verify_decomposed(&f, &dec, &settings)?;
            if !check.passes(settings.verify_tol) {
                return Err(CliError::Verification(format!(
                    "{text}: relative residual {:e}, apolarity residual {:e}, length {} for rank {}",
                    check.relative_residual, check.apolarity_residual, check.length, check.waring_rank
                )));
            }
            out.decompositions.push(DecompositionJson::of(&dec, check.relative_residual));
        }
        reports.push(out);
    }
    Ok(emit(&reports, single, cfg, FormReport::text))
}

#[derive(Debug, Serialize)]
#[serde(rename_all = "camelCase")]
struct VerifyReport {
    input: String,
    decomposition: String,
    mode: &'static str,
    length: usize,
    waring_rank: usize,
    residual: f64,
    max_residual: f64,
    apolarity_residual: f64,
    minimal: bool,
    passed: bool,
}

pub fn verify<S: Render>(form: &str, decomposition: &str, cfg: &ConfigArgs) -> CliResult<String> {
    let f = parse_input::<S>(form)?;
    let dec = parse_decomposition::<S>(decomposition)?;
    let settings = settings(cfg);
    let check = verify_form(&f, &dec, &settings)?;
    let report = VerifyReport {
        input: form.to_string(),
        decomposition: decomposition.to_string(),
        mode: cfg.mode.name(),
        length: check.length,
        waring_rank: check.waring_rank,
        residual: check.relative_residual,
        max_residual: check.max_residual,
        apolarity_residual: check.apolarity_residual,
        minimal: check.length_ok,
        passed: check.passes(settings.verify_tol),
    };
    let out = emit(std::slice::from_ref(&report), true, cfg, |r| {
        format!(
            "input: {}\ndecomposition: {}\nlength: {} (waringRank {})\nresidual: {:e}\napolarity residual: {:e}\nresult: {}\n",
            r.input,
            r.decomposition,
            r.length,
            r.waring_rank,
            r.residual,
            r.apolarity_residual,
            if r.passed { "pass" } else { "fail" }
        )
    });
    if report.passed {
        Ok(out)
    } else {
        print!("{out}");
        Err(CliError::Verification(if report.minimal {
            "residual above tolerance".into()
        } else {
            format!("length {} is not the Waring rank {}", report.length, report.waring_rank)
        }))
    }
}

#[derive(Debug, Serialize)]
#[serde(rename_all = "camelCase")]
struct ApolarReport {
    input: String,
    operator: String,
    image: String,
    is_zero: bool,
}

pub fn apolar<S: Render>(form: &str, operator: &str, cfg: &ConfigArgs) -> CliResult<String> {
    let f = waring_core::parse_form::<S>(form, None)?;
    let g = parse_operator::<S>(operator)?;
    let image = apply_operator(&g, &f)?;
    let report = ApolarReport {
        input: form.to_string(),
        operator: format_operator(&g),
        image: format_form(&image),
        is_zero: image.is_zero(),
    };
    Ok(emit(std::slice::from_ref(&report), true, cfg, |r| {
        format!("{} applied to {}: {}\n", r.operator, r.input, r.image)
    }))
}

#[derive(Debug, Serialize)]
#[serde(rename_all = "camelCase")]
struct OracleReport {
    input: String,
    degree: usize,
    mode: &'static str,
    oracle_rank: usize,
    certainty: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    failure_bound: Option<f64>,
    waring_rank: usize,
    agrees: bool,
    seed: u64,
}

pub fn oracle<S: Render>(input: &FormInput, cfg: &ConfigArgs) -> CliResult<String> {
    let (forms, single) = read_inputs(input)?;
    let settings = settings(cfg);
    let mut reports = Vec::new();
    for text in &forms {
        let f = parse_input::<S>(text)?;
        let oracle = oracle_rank(&f, &settings.search(), settings.rank_tol)?;
        let report = waring_rank(&f, &settings)?;
        let (certainty, failure_bound) = certainty_parts(oracle.certainty);
        reports.push(OracleReport {
            input: text.clone(),
            degree: f.degree(),
            mode: cfg.mode.name(),
            oracle_rank: oracle.rank,
            certainty,
            failure_bound,
            waring_rank: report.waring_rank,
            agrees: oracle.rank == report.waring_rank,
            seed: cfg.seed,
        });
    }
    Ok(emit(&reports, single, cfg, |r| {
        format!(
            "input: {}\noracleRank: {} ({})\nwaringRank: {}\nagree: {}\n",
            r.input,
            r.oracle_rank,
            r.certainty,
            r.waring_rank,
            if r.agrees { "yes" } else { "no" }
        )
    }))
}
