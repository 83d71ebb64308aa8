//! Text format for forms, operators and decompositions.
//!
//! ```text
//! sum   := ["+"|"-"] term (("+"|"-") term)*
//! term  := [coeff ["*"]] [var ["^" int]] ["*"] [var ["^" int]]
//! coeff := int | decimal | int "/" int | "(" complex ")"
//! complex := signed real parts, each optionally followed by "i"
//! ```
//!
//! Forms use the variables `x`, `y`; operators use `dx`, `dy`. Every term of a
//! form must have the same total degree. A decomposition is a sum of
//! `[coeff "*"] "(" linear form ")" "^" int` terms.

use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::form::{BinaryForm, Decomposition, DiffOperator, LinearFormPower};
use crate::scalar::{GaussRational, Scalar, C64};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("at column {position}: {kind}")]
pub struct ParseError {
    pub position: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("unexpected character '{0}'")]
    Unexpected(char),
    #[error("unexpected end of input, expected {0}")]
    UnexpectedEnd(&'static str),
    #[error("expected {0}")]
    Expected(&'static str),
    #[error("term of degree {found} in a form of degree {expected} (forms must be homogeneous)")]
    NonHomogeneous { expected: usize, found: usize },
    #[error("degree {found} does not match the expected degree {expected}")]
    DegreeMismatch { expected: usize, found: usize },
    #[error("the polynomial is zero")]
    ZeroPolynomial,
    #[error("division by zero in a coefficient")]
    DivisionByZero,
    #[error("exponent out of range")]
    BadExponent,
    #[error("a decomposition needs at least one term")]
    EmptyDecomposition,
    #[error("linear forms must have both coefficients in the same term list")]
    BadLinearForm,
}

/// Display names for the two variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Variables {
    pub x: String,
    pub y: String,
}

impl Default for Variables {
    fn default() -> Self {
        Self::forms()
    }
}

impl Variables {
    pub fn forms() -> Self {
        Self {
            x: "x".into(),
            y: "y".into(),
        }
    }

    pub fn operators() -> Self {
        Self {
            x: "dx".into(),
            y: "dy".into(),
        }
    }
}

/// Parses a homogeneous form; `expected_degree` is enforced when given.
pub fn parse_form<S: Scalar>(text: &str, expected_degree: Option<usize>) -> Result<BinaryForm<S>, ParseError> {
    let (degree, monomial) = parse_homogeneous(text, &Variables::forms(), expected_degree)?;
    let monomial: Vec<S> = monomial.iter().map(S::from_gauss).collect();
    Ok(BinaryForm::from_monomial(degree, &monomial).expect("length matches degree"))
}

/// Like [`parse_form`] but rejects the zero polynomial.
pub fn parse_nonzero_form<S: Scalar>(
    text: &str,
    expected_degree: Option<usize>,
) -> Result<BinaryForm<S>, ParseError> {
    let f = parse_form::<S>(text, expected_degree)?;
    if f.is_zero() {
        return Err(ParseError {
            position: 0,
            kind: ParseErrorKind::ZeroPolynomial,
        });
    }
    Ok(f)
}

/// Parses an operator over `dx`, `dy` into plain monomial coefficients.
pub fn parse_operator<S: Scalar>(text: &str) -> Result<DiffOperator<S>, ParseError> {
    let (_, monomial) = parse_homogeneous(text, &Variables::operators(), None)?;
    Ok(DiffOperator::new(monomial.iter().map(S::from_gauss).collect()).expect("nonempty"))
}

/// Parses `[coeff *](p x + q y)^d + ...`.
pub fn parse_decomposition<S: Scalar>(text: &str) -> Result<Decomposition<S>, ParseError> {
    let mut p = Parser::new(text, Variables::forms());
    let mut terms: Vec<LinearFormPower<S>> = Vec::new();
    let mut degree: Option<usize> = None;
    let mut first = true;
    while !p.at_end() {
        let sign = p.parse_sign(first)?;
        first = false;
        let start = p.position();
        let mut weight = sign;
        // A parenthesised group is either a complex coefficient or the linear form.
        let coeff = if p.peek() == Some('(') {
            p.try_parse(|p| {
                let c = p.parse_complex()?;
                if p.peek() == Some('*') || p.peek() == Some('(') {
                    p.eat('*');
                    Ok(c)
                } else {
                    Err(p.error(ParseErrorKind::Expected("'*'")))
                }
            })
        } else if p.peek().is_some_and(|c| c.is_ascii_digit() || c == '.') {
            let c = p.parse_real()?;
            p.eat('*');
            Some(Complex::new(c, BigRational::zero()))
        } else {
            None
        };
        if let Some(c) = coeff {
            weight *= c;
        }
        p.expect('(')?;
        let inner_start = p.position();
        let (lin_degree, lin) = p.parse_sum(Some(')'))?;
        if lin_degree != 1 {
            return Err(ParseError {
                position: inner_start,
                kind: ParseErrorKind::BadLinearForm,
            });
        }
        p.expect(')')?;
        p.expect('^')?;
        let d = p.parse_uint()?;
        match degree {
            Some(prev) if prev != d => {
                return Err(ParseError {
                    position: start,
                    kind: ParseErrorKind::NonHomogeneous {
                        expected: prev,
                        found: d,
                    },
                })
            }
            _ => degree = Some(d),
        }
        let term = LinearFormPower::new(
            S::from_gauss(&weight),
            S::from_gauss(&lin[0]),
            S::from_gauss(&lin[1]),
        )
        .map_err(|_| ParseError {
            position: inner_start,
            kind: ParseErrorKind::BadLinearForm,
        })?;
        terms.push(term);
    }
    let degree = degree.ok_or(ParseError {
        position: 0,
        kind: ParseErrorKind::EmptyDecomposition,
    })?;
    Decomposition::new(degree, terms).map_err(|_| ParseError {
        position: 0,
        kind: ParseErrorKind::EmptyDecomposition,
    })
}

fn parse_homogeneous(
    text: &str,
    vars: &Variables,
    expected_degree: Option<usize>,
) -> Result<(usize, Vec<GaussRational>), ParseError> {
    let mut p = Parser::new(text, vars.clone());
    if p.at_end() {
        return Err(p.error(ParseErrorKind::UnexpectedEnd("a term")));
    }
    let terms = p.parse_terms(None)?;
    if !p.at_end() {
        return Err(p.unexpected());
    }
    assemble(terms, expected_degree)
}

struct Term {
    coeff: GaussRational,
    x_exp: usize,
    y_exp: usize,
    position: usize,
}

fn assemble(terms: Vec<Term>, expected_degree: Option<usize>) -> Result<(usize, Vec<GaussRational>), ParseError> {
    let nonzero: Vec<&Term> = terms.iter().filter(|t| !t.coeff.is_zero()).collect();
    let degree = match nonzero.first() {
        Some(t) => t.x_exp + t.y_exp,
        None => expected_degree.unwrap_or_else(|| terms.iter().map(|t| t.x_exp + t.y_exp).max().unwrap_or(0)),
    };
    for t in &nonzero {
        let found = t.x_exp + t.y_exp;
        if found != degree {
            return Err(ParseError {
                position: t.position,
                kind: ParseErrorKind::NonHomogeneous {
                    expected: degree,
                    found,
                },
            });
        }
    }
    if let Some(expected) = expected_degree {
        if expected != degree {
            return Err(ParseError {
                position: 0,
                kind: ParseErrorKind::DegreeMismatch {
                    expected,
                    found: degree,
                },
            });
        }
    }
    let mut monomial = vec![GaussRational::zero(); degree + 1];
    for t in nonzero {
        monomial[t.y_exp] += t.coeff.clone();
    }
    Ok((degree, monomial))
}

struct Parser {
    chars: Vec<(usize, char)>,
    idx: usize,
    len: usize,
    vars: Variables,
}

impl Parser {
    fn new(text: &str, vars: Variables) -> Self {
        let chars: Vec<(usize, char)> = text
            .chars()
            .enumerate()
            .filter(|(_, c)| !c.is_whitespace())
            .map(|(i, c)| (i + 1, c))
            .collect();
        let len = text.chars().count();
        Self {
            chars,
            idx: 0,
            len,
            vars,
        }
    }

    fn at_end(&self) -> bool {
        self.idx >= self.chars.len()
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.idx).map(|&(_, c)| c)
    }

    fn position(&self) -> usize {
        self.chars.get(self.idx).map_or(self.len + 1, |&(p, _)| p)
    }

    fn error(&self, kind: ParseErrorKind) -> ParseError {
        ParseError {
            position: self.position(),
            kind,
        }
    }

    fn unexpected(&self) -> ParseError {
        match self.peek() {
            Some(c) => self.error(ParseErrorKind::Unexpected(c)),
            None => self.error(ParseErrorKind::UnexpectedEnd("more input")),
        }
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.idx += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), ParseError> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.unexpected())
        }
    }

    fn try_parse<T>(&mut self, f: impl FnOnce(&mut Self) -> Result<T, ParseError>) -> Option<T> {
        let saved = self.idx;
        match f(self) {
            Ok(v) => Some(v),
            Err(_) => {
                self.idx = saved;
                None
            }
        }
    }

    fn starts_with(&self, word: &str) -> bool {
        let mut i = self.idx;
        for c in word.chars() {
            match self.chars.get(i) {
                Some(&(_, d)) if d == c => i += 1,
                _ => return false,
            }
        }
        true
    }

    /// Which variable (0 = x, 1 = y) starts here; longest name wins.
    fn peek_var(&self) -> Option<(usize, usize)> {
        let names = [(0, &self.vars.x), (1, &self.vars.y)];
        names
            .iter()
            .filter(|(_, name)| self.starts_with(name))
            .max_by_key(|(_, name)| name.chars().count())
            .map(|&(v, name)| (v, name.chars().count()))
    }

    /// `+`/`-` sequence before a term. Mandatory except for the first term.
    fn parse_sign(&mut self, first: bool) -> Result<GaussRational, ParseError> {
        let mut sign = GaussRational::one();
        let mut seen = false;
        loop {
            if self.eat('+') {
                seen = true;
            } else if self.eat('-') {
                seen = true;
                sign = -sign;
            } else {
                break;
            }
        }
        if !seen && !first {
            return Err(self.unexpected());
        }
        Ok(sign)
    }

    fn parse_terms(&mut self, until: Option<char>) -> Result<Vec<Term>, ParseError> {
        let mut terms = Vec::new();
        let mut first = true;
        while !self.at_end() && self.peek() != until {
            let sign = self.parse_sign(first)?;
            first = false;
            let mut term = self.parse_term()?;
            term.coeff *= sign;
            terms.push(term);
        }
        if terms.is_empty() {
            return Err(match self.peek() {
                Some(c) => self.error(ParseErrorKind::Unexpected(c)),
                None => self.error(ParseErrorKind::UnexpectedEnd("a term")),
            });
        }
        Ok(terms)
    }

    /// Sum inside a decomposition's parentheses: returns `(degree, monomial coefficients)`.
    fn parse_sum(&mut self, until: Option<char>) -> Result<(usize, Vec<GaussRational>), ParseError> {
        let terms = self.parse_terms(until)?;
        assemble(terms, None)
    }

    fn parse_term(&mut self) -> Result<Term, ParseError> {
        let position = self.position();
        let mut coeff = GaussRational::one();
        let mut has_coeff = false;
        match self.peek() {
            Some('(') => {
                coeff = self.parse_complex()?;
                has_coeff = true;
            }
            Some(c) if c.is_ascii_digit() || c == '.' => {
                coeff = Complex::new(self.parse_real()?, BigRational::zero());
                has_coeff = true;
            }
            _ => {}
        }
        let mut exps = [0usize; 2];
        let mut has_var = false;
        loop {
            let save = self.idx;
            let had_star = self.eat('*');
            match self.peek_var() {
                Some((v, width)) => {
                    if had_star && !has_coeff && !has_var {
                        return Err(self.error(ParseErrorKind::Unexpected('*')));
                    }
                    self.idx += width;
                    let e = if self.eat('^') { self.parse_uint()? } else { 1 };
                    exps[v] = exps[v].checked_add(e).ok_or(self.error(ParseErrorKind::BadExponent))?;
                    has_var = true;
                }
                None => {
                    self.idx = save;
                    break;
                }
            }
        }
        if !has_coeff && !has_var {
            return Err(self.unexpected());
        }
        Ok(Term {
            coeff,
            x_exp: exps[0],
            y_exp: exps[1],
            position,
        })
    }

    fn parse_uint(&mut self) -> Result<usize, ParseError> {
        let start = self.idx;
        let mut value: usize = 0;
        while let Some(c) = self.peek().filter(char::is_ascii_digit) {
            value = value
                .checked_mul(10)
                .and_then(|v| v.checked_add(c as usize - '0' as usize))
                .ok_or(self.error(ParseErrorKind::BadExponent))?;
            self.idx += 1;
        }
        if self.idx == start {
            return Err(match self.peek() {
                Some(_) => self.error(ParseErrorKind::Expected("an integer")),
                None => self.error(ParseErrorKind::UnexpectedEnd("an integer")),
            });
        }
        Ok(value)
    }

    fn parse_digits(&mut self) -> String {
        let mut s = String::new();
        while let Some(c) = self.peek().filter(char::is_ascii_digit) {
            s.push(c);
            self.idx += 1;
        }
        s
    }

    /// Unsigned integer, decimal, or `p/q`.
    fn parse_real(&mut self) -> Result<BigRational, ParseError> {
        let int_part = self.parse_digits();
        let mut value = if self.eat('.') {
            let frac = self.parse_digits();
            if int_part.is_empty() && frac.is_empty() {
                return Err(self.error(ParseErrorKind::Expected("a number")));
            }
            let digits = format!("{int_part}{frac}");
            let num: BigInt = digits.parse().expect("digits");
            BigRational::new(num, BigInt::from(10).pow(frac.len() as u32))
        } else {
            if int_part.is_empty() {
                return Err(self.error(ParseErrorKind::Expected("a number")));
            }
            BigRational::from_integer(int_part.parse().expect("digits"))
        };
        if self.peek() == Some('/') && self.chars.get(self.idx + 1).is_some_and(|&(_, c)| c.is_ascii_digit()) {
            self.idx += 1;
            let pos = self.position();
            let den = self.parse_real_no_ratio()?;
            if den.is_zero() {
                return Err(ParseError {
                    position: pos,
                    kind: ParseErrorKind::DivisionByZero,
                });
            }
            value /= den;
        }
        Ok(value)
    }

    fn parse_real_no_ratio(&mut self) -> Result<BigRational, ParseError> {
        let int_part = self.parse_digits();
        let int: BigInt = int_part.parse().map_err(|_| self.error(ParseErrorKind::Expected("a number")))?;
        Ok(BigRational::from_integer(int))
    }

    /// `"(" part (("+"|"-") part)* ")"` where a part is a real, optionally
    /// followed by `i`, or a bare `i`.
    fn parse_complex(&mut self) -> Result<GaussRational, ParseError> {
        self.expect('(')?;
        let mut value = GaussRational::zero();
        let mut first = true;
        loop {
            if self.eat(')') {
                if first {
                    return Err(self.error(ParseErrorKind::Expected("a complex number")));
                }
                break;
            }
            let sign = self.parse_sign(first)?;
            first = false;
            let real = match self.peek() {
                Some(c) if c.is_ascii_digit() || c == '.' => Some(self.parse_real()?),
                _ => None,
            };
            let imaginary = self.eat('i');
            let part = match (real, imaginary) {
                (Some(r), false) => Complex::new(r, BigRational::zero()),
                (Some(r), true) => Complex::new(BigRational::zero(), r),
                (None, true) => Complex::new(BigRational::zero(), BigRational::one()),
                (None, false) => return Err(self.unexpected()),
            };
            value += part * sign.clone();
        }
        Ok(value)
    }
}

/// Monomial-expanded text, e.g. `3x^3 - 3x^2y + 9xy^2 - y^3`.
pub fn format_form<S: Scalar>(f: &BinaryForm<S>) -> String {
    format_form_with(f, &Variables::forms())
}

pub fn format_form_with<S: Scalar>(f: &BinaryForm<S>, vars: &Variables) -> String {
    let d = f.degree();
    let terms: Vec<(Coefficient, String)> = f
        .monomial_coeffs()
        .iter()
        .enumerate()
        .filter(|(_, m)| !m.is_zero())
        .map(|(i, m)| (Coefficient::of(m), monomial(d - i, i, vars)))
        .collect();
    join_terms(terms, false)
}

pub fn format_operator<S: Scalar>(g: &DiffOperator<S>) -> String {
    let e = g.degree();
    let vars = Variables::operators();
    let terms: Vec<(Coefficient, String)> = g
        .coeffs()
        .iter()
        .enumerate()
        .filter(|(_, m)| !m.is_zero())
        .map(|(j, m)| (Coefficient::of(m), monomial_spaced(e - j, j, &vars)))
        .collect();
    join_terms(terms, true)
}

/// `λ1*(p1 x + q1 y)^d + ...`; unit weights are omitted.
pub fn format_decomposition<S: Scalar>(dec: &Decomposition<S>) -> String {
    format_decomposition_with(dec, &Variables::forms())
}

pub fn format_decomposition_with<S: Scalar>(dec: &Decomposition<S>, vars: &Variables) -> String {
    let d = dec.degree();
    let mut out = String::new();
    for (k, t) in dec.terms().iter().enumerate() {
        let lin = BinaryForm::from_monomial(1, &[t.p.clone(), t.q.clone()]).expect("two coefficients");
        let body = format!("({})^{d}", format_form_with(&lin, vars).replace("+ -", "- "));
        let c = Coefficient::of(&t.weight);
        let (negative, magnitude) = c.split_sign();
        let prefix = match (k, negative) {
            (0, true) => "-".to_string(),
            (0, false) => String::new(),
            (_, true) => " - ".to_string(),
            (_, false) => " + ".to_string(),
        };
        out.push_str(&prefix);
        if !magnitude.is_one() {
            out.push_str(&magnitude.text);
            out.push('*');
        }
        out.push_str(&body);
    }
    out
}

fn monomial(x_exp: usize, y_exp: usize, vars: &Variables) -> String {
    let mut s = String::new();
    for (name, e) in [(&vars.x, x_exp), (&vars.y, y_exp)] {
        match e {
            0 => {}
            1 => s.push_str(name),
            _ => s.push_str(&format!("{name}^{e}")),
        }
    }
    s
}

fn monomial_spaced(x_exp: usize, y_exp: usize, vars: &Variables) -> String {
    let parts: Vec<String> = [(&vars.x, x_exp), (&vars.y, y_exp)]
        .iter()
        .filter(|(_, e)| *e > 0)
        .map(|(name, e)| if *e == 1 { name.to_string() } else { format!("{name}^{e}") })
        .collect();
    parts.join("*")
}

fn join_terms(terms: Vec<(Coefficient, String)>, star: bool) -> String {
    if terms.is_empty() {
        return "0".into();
    }
    let mut out = String::new();
    for (k, (c, mono)) in terms.into_iter().enumerate() {
        let (negative, magnitude) = c.split_sign();
        out.push_str(match (k, negative) {
            (0, true) => "-",
            (0, false) => "",
            (_, true) => " - ",
            (_, false) => " + ",
        });
        if mono.is_empty() {
            out.push_str(&magnitude.text);
        } else if magnitude.is_one() {
            out.push_str(&mono);
        } else {
            out.push_str(&magnitude.text);
            if star || !magnitude.integral {
                out.push('*');
            }
            out.push_str(&mono);
        }
    }
    out
}

/// Printed coefficient with enough structure to pull out a leading sign.
#[derive(Debug, Clone)]
struct Coefficient {
    text: String,
    negative: bool,
    /// Positive or negative real integer: safe to juxtapose with a variable.
    integral: bool,
    value: C64,
    negated: Option<Box<Coefficient>>,
}

impl Coefficient {
    fn of<S: Scalar>(z: &S) -> Self {
        if S::EXACT {
            let g = exact_view(z);
            Self::exact(&g)
        } else {
            Self::float(z.to_c64())
        }
    }

    fn exact(z: &GaussRational) -> Self {
        let negative = (z.im.is_zero() && z.re.is_negative()) || (z.re.is_zero() && z.im.is_negative());
        let negated = negative.then(|| Box::new(Self::exact(&-z.clone())));
        let (text, integral) = if z.im.is_zero() {
            (rational_text(&z.re), z.re.is_integer())
        } else if z.re.is_zero() {
            (format!("({}i)", imag_text(&z.im)), false)
        } else {
            let sign = if z.im.is_negative() { "-" } else { "+" };
            (
                format!("({}{}{}i)", rational_text(&z.re), sign, imag_text(&z.im.abs())),
                false,
            )
        };
        Self {
            text,
            negative,
            integral,
            value: z.to_c64(),
            negated,
        }
    }

    fn float(z: C64) -> Self {
        let re = if z.re == 0.0 { 0.0 } else { z.re };
        let im = if z.im == 0.0 { 0.0 } else { z.im };
        let negative = (im == 0.0 && re < 0.0) || (re == 0.0 && im < 0.0);
        let negated = negative.then(|| Box::new(Self::float(C64::new(-re, -im))));
        let text = if im == 0.0 {
            format!("{re}")
        } else if re == 0.0 {
            format!("({}i)", float_imag(im))
        } else {
            let sign = if im < 0.0 { "-" } else { "+" };
            format!("({re}{sign}{}i)", float_imag(im.abs()))
        };
        let integral = im == 0.0 && re.fract() == 0.0 && !format!("{re}").contains('.');
        Self {
            text,
            negative,
            integral,
            value: C64::new(re, im),
            negated,
        }
    }

    fn split_sign(&self) -> (bool, Coefficient) {
        match &self.negated {
            Some(n) if self.negative => (true, (**n).clone()),
            _ => (false, self.clone()),
        }
    }

    fn is_one(&self) -> bool {
        self.value == C64::new(1.0, 0.0) && self.text == "1"
    }
}

fn exact_view<S: Scalar>(z: &S) -> GaussRational {
    // Only the exact backend reaches here; it is `GaussRational` itself.
    let any: &dyn std::any::Any = z;
    any.downcast_ref::<GaussRational>()
        .cloned()
        .expect("exact backend is GaussRational")
}

fn rational_text(q: &BigRational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

fn imag_text(q: &BigRational) -> String {
    if q.is_one() {
        String::new()
    } else if *q == -BigRational::one() {
        "-".into()
    } else {
        rational_text(q)
    }
}

fn float_imag(v: f64) -> String {
    if v == 1.0 {
        String::new()
    } else if v == -1.0 {
        "-".into()
    } else {
        format!("{v}")
    }
}

impl fmt::Display for Variables {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}, {}", self.x, self.y)
    }
}
