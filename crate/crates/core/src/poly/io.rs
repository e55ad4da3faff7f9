//! Line-oriented ideal files:
//!
//! ```text
//! p 5
//! vars x0 x1 x2 x3 x4
//! 3*x0^2*x1^3+4*x2*x3^4
//! ...
//! ```

use super::{Monomial, Polynomial};
use crate::error::{Error, Result};
use crate::extalg::NVARS;
use crate::gf::check_prime;

/// A prime together with a list of generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ideal {
    pub p: u32,
    pub generators: Vec<Polynomial>,
}

impl Ideal {
    pub fn new(p: u32, generators: Vec<Polynomial>) -> Self {
        Self { p, generators }
    }

    pub fn to_text(&self) -> String {
        let vars: Vec<String> = (0..NVARS).map(|i| format!("x{i}")).collect();
        let mut out = format!("p {}\nvars {}\n", self.p, vars.join(" "));
        for g in &self.generators {
            out.push_str(&g.to_string());
            out.push('\n');
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'));
        let p = match lines.next().map(|l| l.split_whitespace().collect::<Vec<_>>()) {
            Some(w) if w.len() == 2 && w[0] == "p" => w[1]
                .parse::<u32>()
                .map_err(|_| Error::Parse(format!("bad prime {:?}", w[1])))?,
            other => return Err(Error::Parse(format!("expected `p <prime>`, got {other:?}"))),
        };
        check_prime(p).map_err(|e| Error::Parse(e.to_string()))?;
        let vars: Vec<&str> = match lines.next() {
            Some(l) if l.starts_with("vars") => l.split_whitespace().skip(1).collect(),
            other => return Err(Error::Parse(format!("expected `vars ...`, got {other:?}"))),
        };
        let expected: Vec<String> = (0..NVARS).map(|i| format!("x{i}")).collect();
        if vars != expected {
            return Err(Error::Parse(format!("unsupported variable list {vars:?}")));
        }
        let generators = lines
            .map(|l| parse_polynomial(p, l))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { p, generators })
    }
}

/// Parses `c*x0^a*x1^b+...`. A leading `-` on a term is accepted and negates it.
pub fn parse_polynomial(p: u32, s: &str) -> Result<Polynomial> {
    let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return Err(Error::Parse("empty polynomial".into()));
    }
    if s == "0" {
        return Ok(Polynomial::zero(p));
    }
    let mut terms = Vec::new();
    let mut rest = s.as_str();
    while !rest.is_empty() {
        let (sign, body) = match rest.as_bytes()[0] {
            b'+' => (1, &rest[1..]),
            b'-' => (-1, &rest[1..]),
            _ => (1, rest),
        };
        let end = body.find(['+', '-']).unwrap_or(body.len());
        let (term, tail) = body.split_at(end);
        if term.is_empty() {
            return Err(Error::Parse(format!("empty term in {s:?}")));
        }
        terms.push(parse_term(term).map(|(m, c)| (m, sign * c))?);
        rest = tail;
    }
    Ok(Polynomial::from_terms(p, terms))
}

fn parse_term(t: &str) -> Result<(Monomial, i64)> {
    let bad = || Error::Parse(format!("bad term {t:?}"));
    let mut coeff = 1i64;
    let mut exps = [0u8; NVARS];
    for (k, factor) in t.split('*').enumerate() {
        if let Some(var) = factor.strip_prefix('x') {
            let (idx, exp) = match var.split_once('^') {
                Some((i, e)) => (i, e.parse::<u8>().map_err(|_| bad())?),
                None => (var, 1),
            };
            let idx: usize = idx.parse().map_err(|_| bad())?;
            if idx >= NVARS {
                return Err(bad());
            }
            exps[idx] = exps[idx].checked_add(exp).ok_or_else(bad)?;
        } else if k == 0 {
            coeff = factor.parse().map_err(|_| bad())?;
        } else {
            return Err(bad());
        }
    }
    Ok((Monomial::new(exps), coeff))
}
