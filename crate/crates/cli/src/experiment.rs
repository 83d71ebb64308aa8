use std::collections::BTreeMap;

use clap::Args;
use rayon::prelude::*;
use serde::Serialize;
use waring_core::sampling::random_integer_form;
use waring_core::{
    decompose, enumerate_decompositions, oracle_rank, same_terms, verify_decomposed, waring_rank, BinaryForm,
    Settings,
};

use crate::commands::read_inputs;
use crate::render::{Complex, Render};
use crate::{parse_input, settings, CliError, CliResult, ConfigArgs, FormInput};

#[derive(Debug, Clone, Args)]
pub struct ExperimentArgs {
    /// Degree of the random forms.
    #[arg(long, default_value_t = 5)]
    pub degree: usize,
    #[arg(long, default_value_t = 200)]
    pub samples: usize,
    /// Monomial coefficients are drawn from [-range, range].
    #[arg(long, default_value_t = 9)]
    pub range: i64,
    /// Samples, counted from the first, that are also ranked by the oracle.
    #[arg(long, default_value_t = 20)]
    pub oracle_samples: usize,
    /// Distinct decompositions requested when the rank exceeds (d+1)/2.
    #[arg(long, default_value_t = 3)]
    pub witnesses: usize,
    /// Use these forms instead of random ones.
    #[command(flatten)]
    pub input: FormInput,
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
struct Row {
    sample_index: usize,
    coefficients: String,
    f_rank: Option<usize>,
    fx_rank: Option<usize>,
    waring_rank: Option<usize>,
    oracle_rank: Option<usize>,
    decomposition_count: usize,
    max_residual: Option<f64>,
    #[serde(skip)]
    mismatch: bool,
    #[serde(skip)]
    uniqueness_failure: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<String>,
}

#[derive(Debug, Serialize)]
#[serde(rename_all = "camelCase")]
struct Summary {
    degree: usize,
    samples: usize,
    range: i64,
    mode: &'static str,
    seed: u64,
    expected_generic_rank: usize,
    rank_histogram: BTreeMap<usize, usize>,
    mismatches: usize,
    uniqueness_failures: usize,
    failures: usize,
    rows: Vec<Row>,
}

fn blank<T: ToString>(v: Option<T>) -> String {
    v.map(|v| v.to_string()).unwrap_or_default()
}

impl Row {
    fn csv(&self) -> String {
        [
            self.sample_index.to_string(),
            self.coefficients.clone(),
            blank(self.f_rank),
            blank(self.fx_rank),
            blank(self.waring_rank),
            blank(self.oracle_rank),
            self.decomposition_count.to_string(),
            self.max_residual.map(|r| format!("{r:e}")).unwrap_or_default(),
        ]
        .join(",")
    }
}

const HEADER: &str = "sampleIndex,coefficients,fRank,fxRank,waringRank,oracleRank,decompositionCount,maxResidual";

fn sample<S: Render>(
    index: usize,
    f: &BinaryForm<S>,
    args: &ExperimentArgs,
    settings: &Settings,
) -> waring_core::Result<Row> {
    let coefficients = f
        .monomial_coeffs()
        .iter()
        .map(|c| Complex::of(c).text())
        .collect::<Vec<_>>()
        .join(" ");
    let report = waring_rank(f, settings)?;
    let d = report.degree;
    let wr = report.waring_rank;

    let mut uniqueness_failure = false;
    let decompositions = if wr <= d.div_ceil(2) {
        let first = decompose(f, settings)?;
        let other = Settings {
            seed: settings.seed.wrapping_add(1),
            ..*settings
        };
        let second = decompose(f, &other)?;
        uniqueness_failure = !same_terms(&first.to_c64(), &second.to_c64(), 1e-8);
        vec![first]
    } else if d % 2 == 0 && wr == d / 2 + 1 {
        let found = enumerate_decompositions(f, args.witnesses, settings)?;
        uniqueness_failure = found.len() < args.witnesses;
        found
    } else {
        vec![decompose(f, settings)?]
    };
    let mut max_residual: f64 = 0.0;
    for dec in &decompositions {
        max_residual = max_residual.max(verify_decomposed(f, dec, settings)?.relative_residual);
    }

    let oracle = if index < args.oracle_samples {
        Some(oracle_rank(f, &settings.search(), settings.rank_tol)?.rank)
    } else {
        None
    };
    Ok(Row {
        sample_index: index,
        coefficients,
        f_rank: Some(report.f_rank_value()),
        fx_rank: report.fx_rank_value(),
        waring_rank: Some(wr),
        oracle_rank: oracle,
        decomposition_count: decompositions.len(),
        max_residual: Some(max_residual),
        mismatch: oracle.is_some_and(|o| o != wr),
        uniqueness_failure,
        error: None,
    })
}

pub fn run<S: Render>(args: &ExperimentArgs, cfg: &ConfigArgs) -> CliResult<String> {
    let fixed: Option<Vec<BinaryForm<S>>> = if args.input.form.is_some() || args.input.file.is_some() {
        let (texts, _) = read_inputs(&args.input)?;
        Some(texts.iter().map(|t| parse_input::<S>(t)).collect::<CliResult<_>>()?)
    } else {
        None
    };
    let count = fixed.as_ref().map_or(args.samples, Vec::len);
    if count == 0 {
        return Err(CliError::Usage("--samples must be at least 1".into()));
    }
    if args.range < 1 {
        return Err(CliError::Usage("--range must be at least 1".into()));
    }
    let degree = fixed.as_ref().map_or(args.degree, |v| v[0].degree());
    let settings = settings(cfg);

    let rows: Vec<Row> = (0..count)
        .into_par_iter()
        .map(|i| {
            let f = match &fixed {
                Some(forms) => forms[i].clone(),
                None => random_integer_form::<S>(args.degree, args.range, cfg.seed, i as u64),
            };
            sample(i, &f, args, &settings).unwrap_or_else(|e| Row {
                sample_index: i,
                coefficients: String::new(),
                f_rank: None,
                fx_rank: None,
                waring_rank: None,
                oracle_rank: None,
                decomposition_count: 0,
                max_residual: None,
                mismatch: false,
                uniqueness_failure: false,
                error: Some(e.to_string()),
            })
        })
        .collect();

    let mut histogram = BTreeMap::new();
    for r in rows.iter().filter_map(|r| r.waring_rank) {
        *histogram.entry(r).or_insert(0) += 1;
    }
    let summary = Summary {
        degree,
        samples: count,
        range: args.range,
        mode: cfg.mode.name(),
        seed: cfg.seed,
        expected_generic_rank: degree / 2 + 1,
        rank_histogram: histogram,
        mismatches: rows.iter().filter(|r| r.mismatch).count(),
        uniqueness_failures: rows.iter().filter(|r| r.uniqueness_failure).count(),
        failures: rows.iter().filter(|r| r.error.is_some()).count(),
        rows,
    };

    if cfg.json {
        return Ok(serde_json::to_string_pretty(&summary).expect("summary serializes") + "\n");
    }
    let mut out = String::from(HEADER);
    out.push('\n');
    for r in &summary.rows {
        out.push_str(&r.csv());
        out.push('\n');
    }
    let hist: Vec<String> = summary.rank_histogram.iter().map(|(k, v)| format!("{k}: {v}")).collect();
    eprintln!(
        "degree {}, {} samples, expected generic rank {}; ranks {{{}}}; oracle mismatches {}; uniqueness failures {}; numeric failures {}",
        summary.degree,
        summary.samples,
        summary.expected_generic_rank,
        hist.join(", "),
        summary.mismatches,
        summary.uniqueness_failures,
        summary.failures
    );
    for r in summary.rows.iter().filter(|r| r.error.is_some()) {
        eprintln!("sample {}: {}", r.sample_index, r.error.as_deref().unwrap_or(""));
    }
    Ok(out)
}
