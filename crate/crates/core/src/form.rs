//! Homogeneous forms in four variables with rational coefficients, and their
//! text syntax.
//!
//! ```text
//! form   := sign? term (sign term)*
//! term   := factor ('*' factor)*
//! factor := integer ('/' integer)? | variable ('^' integer)?
//! ```
//!
//! Whitespace between tokens is ignored.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::monomial::{Monomial, NVARS};

pub type Variables = [String; NVARS];

pub fn default_variables() -> Variables {
    ["x", "y", "z", "t"].map(String::from)
}

pub fn validate_variables(vars: &[String]) -> Result<Variables> {
    let vars: Variables = vars
        .to_vec()
        .try_into()
        .map_err(|v: Vec<String>| Error::InvalidInput(format!("expected 4 variable names, got {}", v.len())))?;
    for (i, v) in vars.iter().enumerate() {
        let mut chars = v.chars();
        let ok = chars.next().is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
            && chars.all(|c| c.is_ascii_alphanumeric() || c == '_');
        if !ok {
            return Err(Error::InvalidInput(format!("`{v}` is not a valid variable name")));
        }
        if vars[..i].contains(v) {
            return Err(Error::InvalidInput(format!("variable `{v}` is repeated")));
        }
    }
    Ok(vars)
}

/// Homogeneous polynomial; never stores zero coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Form {
    degree: u32,
    terms: BTreeMap<Monomial, BigRational>,
}

impl Form {
    pub fn zero(degree: u32) -> Self {
        Form { degree, terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Self::monomial(Monomial::ONE, BigRational::one())
    }

    pub fn monomial(m: Monomial, c: BigRational) -> Self {
        let mut f = Form::zero(m.degree());
        if !c.is_zero() {
            f.terms.insert(m, c);
        }
        f
    }

    /// Collects terms, dropping zeros. All monomials must share `degree`.
    pub fn from_terms(degree: u32, terms: impl IntoIterator<Item = (Monomial, BigRational)>) -> Result<Self> {
        let mut f = Form::zero(degree);
        for (m, c) in terms {
            if m.degree() != degree {
                return Err(Error::Inhomogeneous { expected: degree, found: m.degree() });
            }
            f.add_term(m, c);
        }
        Ok(f)
    }

    fn add_term(&mut self, m: Monomial, c: BigRational) {
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                if !c.is_zero() {
                    e.insert(c);
                }
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in increasing lex order of exponent vectors.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &BigRational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: Monomial) -> BigRational {
        self.terms.get(&m).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn mul(&self, other: &Form) -> Form {
        let mut out = Form::zero(self.degree + other.degree);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.mul(*m2), c1 * c2);
            }
        }
        out
    }

    pub fn add(&self, other: &Form) -> Result<Form> {
        if self.degree != other.degree {
            return Err(Error::Inhomogeneous { expected: self.degree, found: other.degree });
        }
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(*m, c.clone());
        }
        Ok(out)
    }

    pub fn scale(&self, c: &BigRational) -> Form {
        Form::from_terms(self.degree, self.terms.iter().map(|(m, d)| (*m, d * c))).unwrap()
    }

    pub fn parse(text: &str, vars: &Variables) -> Result<Form> {
        let form = Parser { src: text.as_bytes(), pos: 0, vars }.parse_form()?;
        if form.is_zero() {
            return Err(Error::ZeroForm);
        }
        Ok(form)
    }

    /// Canonical text, terms in decreasing lex order. Parsing it back yields `self`.
    pub fn to_text(&self, vars: &Variables) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            let negative = c.is_negative();
            match (i, negative) {
                (0, true) => out.push('-'),
                (0, false) => {}
                (_, true) => out.push_str(" - "),
                (_, false) => out.push_str(" + "),
            }
            let abs = c.abs();
            let mut factors = Vec::new();
            if !abs.is_one() || *m == Monomial::ONE {
                factors.push(abs.to_string());
            }
            for (v, e) in m.exponents().iter().enumerate() {
                match e {
                    0 => {}
                    1 => factors.push(vars[v].clone()),
                    _ => factors.push(format!("{}^{e}", vars[v])),
                }
            }
            out.push_str(&factors.join("*"));
        }
        out
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    vars: &'a Variables,
}

impl Parser<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn error<T>(&self, message: impl Into<String>) -> Result<T> {
        Err(Error::Syntax { pos: self.pos, message: message.into() })
    }

    fn parse_form(&mut self) -> Result<Form> {
        let mut degree: Option<u32> = None;
        let mut terms = Vec::new();
        let mut first = true;
        loop {
            let negative = match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    false
                }
                Some(b'-') => {
                    self.pos += 1;
                    true
                }
                None if first => return self.error("empty input"),
                None => break,
                Some(_) if first => false,
                Some(c) => return self.error(format!("expected `+` or `-`, found `{}`", c as char)),
            };
            first = false;
            let (mut coeff, mono) = self.parse_term()?;
            if negative {
                coeff = -coeff;
            }
            if !coeff.is_zero() {
                match degree {
                    None => degree = Some(mono.degree()),
                    Some(d) if d != mono.degree() => {
                        return Err(Error::Inhomogeneous { expected: d, found: mono.degree() })
                    }
                    _ => {}
                }
                terms.push((mono, coeff));
            }
        }
        Form::from_terms(degree.unwrap_or(0), terms)
    }

    fn parse_term(&mut self) -> Result<(BigRational, Monomial)> {
        let mut coeff = BigRational::one();
        let mut exps = [0u32; NVARS];
        loop {
            match self.peek() {
                Some(c) if c.is_ascii_digit() => {
                    let num = self.parse_integer()?;
                    let mut q = BigRational::from_integer(num);
                    if self.peek() == Some(b'/') {
                        self.pos += 1;
                        if !matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
                            return self.error("expected a denominator after `/`");
                        }
                        let den_pos = self.pos;
                        let den = self.parse_integer()?;
                        if den.is_zero() {
                            return Err(Error::Syntax { pos: den_pos, message: "zero denominator".into() });
                        }
                        q /= BigRational::from_integer(den);
                    }
                    coeff *= q;
                }
                Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                    let start = self.pos;
                    let name = self.parse_identifier();
                    let Some(v) = self.vars.iter().position(|x| *x == name) else {
                        return Err(Error::UnknownVariable { name, pos: start });
                    };
                    let mut e = 1u32;
                    if self.peek() == Some(b'^') {
                        self.pos += 1;
                        if !matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
                            return self.error("expected an exponent after `^`");
                        }
                        let exp_pos = self.pos;
                        e = self
                            .parse_integer()?
                            .try_into()
                            .ok()
                            .filter(|&e: &u32| e <= 4096)
                            .ok_or(Error::Syntax { pos: exp_pos, message: "exponent too large".into() })?;
                    }
                    exps[v] += e;
                    if exps[v] > 4096 {
                        return Err(Error::Syntax { pos: start, message: "exponent too large".into() });
                    }
                }
                Some(c) => return self.error(format!("expected a number or a variable, found `{}`", c as char)),
                None => return self.error("unexpected end of input"),
            }
            if self.peek() == Some(b'*') {
                self.pos += 1;
            } else {
                break;
            }
        }
        Ok((coeff, Monomial::new(exps)))
    }

    fn parse_integer(&mut self) -> Result<BigInt> {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        let digits = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        Ok(digits.parse().expect("digits form an integer"))
    }

    fn parse_identifier(&mut self) -> String {
        let start = self.pos;
        while self.pos < self.src.len() && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_') {
            self.pos += 1;
        }
        String::from_utf8_lossy(&self.src[start..self.pos]).into_owned()
    }
}
