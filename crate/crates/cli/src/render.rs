use num_bigint::BigInt;
use num_rational::Ratio;
use num_traits::{One, Zero};
use serde::Serialize;
use waring_core::scalar::pow;
use waring_core::{
    format_decomposition, Branch, Certainty, Decomposed, Decomposition, FRankCertificate, GaussRational,
    LinearFormPower, RankReport, Scalar, C64,
};

/// Scalars that print as a pair of decimal strings.
pub trait Render: Scalar + Send + Sync {
    fn parts(&self) -> (String, String);

    /// Least positive integer clearing the denominators of `self`, if above one.
    fn denominator(&self) -> Option<Self> {
        None
    }
}

impl Render for GaussRational {
    fn parts(&self) -> (String, String) {
        (self.re.to_string(), self.im.to_string())
    }

    fn denominator(&self) -> Option<Self> {
        let (a, b) = (self.re.denom(), self.im.denom());
        let lcm = a * Ratio::new(a.clone(), b.clone()).denom();
        (lcm > BigInt::one()).then(|| GaussRational::new(Ratio::from_integer(lcm), Ratio::zero()))
    }
}

fn float(x: f64) -> String {
    if x == 0.0 {
        "0".into()
    } else {
        format!("{x}")
    }
}

impl Render for C64 {
    fn parts(&self) -> (String, String) {
        (float(self.re), float(self.im))
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Complex {
    pub re: String,
    pub im: String,
}

impl Complex {
    pub fn of<S: Render>(z: &S) -> Self {
        let (re, im) = z.parts();
        Complex { re, im }
    }

    /// `re`, `im i` or `re+im i`, with the same digits as the JSON strings.
    pub fn text(&self) -> String {
        match (self.re.as_str(), self.im.as_str()) {
            (re, "0") => re.to_string(),
            ("0", im) => format!("{im}i"),
            (re, im) if im.starts_with('-') => format!("{re}{im}i"),
            (re, im) => format!("{re}+{im}i"),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Term {
    pub lambda: Complex,
    pub p: Complex,
    pub q: Complex,
}

#[derive(Debug, Clone, Serialize)]
pub struct DecompositionJson {
    pub terms: Vec<Term>,
    pub residual: f64,
    #[serde(skip)]
    pub text: String,
}

impl DecompositionJson {
    pub fn of<S: Render>(dec: &Decomposed<S>, residual: f64) -> Self {
        match dec {
            Decomposed::Native(d) => Self::from_terms(d, residual),
            Decomposed::Numeric(d) => Self::from_terms(d, residual),
        }
    }

    fn from_terms<T: Render>(d: &Decomposition<T>, residual: f64) -> Self {
        let d = &integral_forms(d);
        DecompositionJson {
            terms: d
                .terms()
                .iter()
                .map(|t| Term {
                    lambda: Complex::of(&t.weight),
                    p: Complex::of(&t.p),
                    q: Complex::of(&t.q),
                })
                .collect(),
            residual,
            text: format_decomposition(d),
        }
    }
}

/// Rewrites `w (x + b y)^d` with fractional `b` as `(w / s^d) (s x + s b y)^d`.
fn integral_forms<T: Render>(dec: &Decomposition<T>) -> Decomposition<T> {
    let d = dec.degree();
    let terms = dec
        .terms()
        .iter()
        .map(|t| {
            let s = t.p.denominator().into_iter().chain(t.q.denominator()).fold(None, |acc: Option<T>, s| {
                Some(match acc {
                    Some(a) => a * s,
                    None => s,
                })
            });
            match s {
                Some(s) if !t.p.is_zero() => {
                    let weight = t.weight.clone() / pow(&s, d);
                    LinearFormPower::new(weight, t.p.clone() * s.clone(), t.q.clone() * s).expect("nonzero form")
                }
                _ => t.clone(),
            }
        })
        .collect();
    Decomposition::new(d, terms).expect("same terms")
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct CertificateJson {
    pub r: usize,
    pub c: Vec<Complex>,
    pub certainty: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failure_bound: Option<f64>,
}

pub fn certainty_parts(c: Certainty) -> (&'static str, Option<f64>) {
    match c {
        Certainty::Exact => ("exact", None),
        Certainty::Probabilistic { failure_bound } => ("probabilistic", Some(failure_bound)),
    }
}

impl CertificateJson {
    fn of<S: Render>(cert: &FRankCertificate<S>) -> Self {
        let (certainty, failure_bound) = certainty_parts(cert.certainty);
        CertificateJson {
            r: cert.r,
            c: cert.c.iter().map(Complex::of).collect(),
            certainty,
            failure_bound,
        }
    }

    fn text(&self) -> String {
        let c: Vec<String> = self.c.iter().map(Complex::text).collect();
        let mut s = format!("r = {}, c = [{}], {}", self.r, c.join(", "), self.certainty);
        if let Some(b) = self.failure_bound {
            s.push_str(&format!(" (miss probability <= {b:e})"));
        }
        s
    }
}

pub fn branch_name(b: Branch) -> &'static str {
    match b {
        Branch::Finite => "finite",
        Branch::YTerm => "yTerm",
        Branch::DegenerateMonomial => "degenerateMonomial",
    }
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct FormReport {
    pub input: String,
    pub degree: usize,
    pub mode: &'static str,
    pub f_rank: usize,
    pub fx_rank: Option<usize>,
    pub waring_rank: usize,
    pub branch: &'static str,
    pub decompositions: Vec<DecompositionJson>,
    pub certificate: Option<CertificateJson>,
    pub seed: u64,
}

impl FormReport {
    pub fn new<S: Render>(input: &str, report: &RankReport<S>, mode: &'static str, seed: u64) -> Self {
        let certificate = match report.branch {
            Branch::Finite => report.f_rank.certificate(),
            Branch::YTerm => report.fx_rank.as_ref().and_then(|r| r.certificate()),
            Branch::DegenerateMonomial => None,
        };
        FormReport {
            input: input.to_string(),
            degree: report.degree,
            mode,
            f_rank: report.f_rank_value(),
            fx_rank: report.fx_rank_value(),
            waring_rank: report.waring_rank,
            branch: branch_name(report.branch),
            decompositions: Vec::new(),
            certificate: certificate.map(CertificateJson::of),
            seed,
        }
    }

    pub fn text(&self) -> String {
        let mut s = format!("input: {}\n", self.input);
        s.push_str(&format!("degree: {}\n", self.degree));
        s.push_str(&format!("fRank: {}\n", self.f_rank));
        match self.fx_rank {
            Some(v) => s.push_str(&format!("fxRank: {v}\n")),
            None => s.push_str("fxRank: -\n"),
        }
        s.push_str(&format!("waringRank: {}\n", self.waring_rank));
        s.push_str(&format!("branch: {}\n", self.branch));
        if let Some(c) = &self.certificate {
            s.push_str(&format!("certificate: {}\n", c.text()));
        }
        for (i, d) in self.decompositions.iter().enumerate() {
            s.push_str(&format!("decomposition {}: {}\n", i + 1, d.text));
            s.push_str(&format!("  residual: {:e}\n", d.residual));
        }
        s
    }
}

/// One JSON document: the object itself for a single input, an array otherwise.
pub fn json_of<T: Serialize>(items: &[T], single: bool) -> String {
    let text = if single {
        serde_json::to_string_pretty(&items[0])
    } else {
        serde_json::to_string_pretty(items)
    };
    text.expect("report serializes") + "\n"
}
