//! Hilbert series and Hilbert polynomials of `S/I` from the leading-term ideal.

use std::fmt;

use num_rational::Rational64;
use serde::Serialize;

use super::groebner::GroebnerBasis;
use super::{binomial, Monomial};
use crate::extalg::NVARS;

/// Integer polynomial in `t`, low degree first.
type TPoly = Vec<i64>;

fn tpoly_sub_shifted(a: &TPoly, b: &TPoly, shift: usize) -> TPoly {
    let mut out = a.clone();
    if out.len() < b.len() + shift {
        out.resize(b.len() + shift, 0);
    }
    for (k, &c) in b.iter().enumerate() {
        out[k + shift] -= c;
    }
    while out.len() > 1 && *out.last().unwrap() == 0 {
        out.pop();
    }
    out
}

fn tpoly_mul(a: &TPoly, b: &TPoly) -> TPoly {
    let mut out = vec![0; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn minimalize(mut gens: Vec<Monomial>) -> Vec<Monomial> {
    gens.sort();
    gens.dedup();
    let mut out: Vec<Monomial> = Vec::new();
    for m in gens {
        if !out.iter().any(|g| g.divides(&m)) {
            out.push(m);
        }
    }
    out
}

/// Numerator `K(t)` with `HS(S/M) = K(t) / (1 − t)^NVARS`.
pub fn hilbert_numerator(gens: &[Monomial]) -> Vec<i64> {
    numerator(minimalize(gens.to_vec()))
}

fn numerator(gens: Vec<Monomial>) -> TPoly {
    if gens.is_empty() {
        return vec![1];
    }
    if gens.contains(&Monomial::one()) {
        return vec![0];
    }
    let pairwise_coprime = gens
        .iter()
        .enumerate()
        .all(|(i, a)| gens[i + 1..].iter().all(|b| a.is_coprime(b)));
    if pairwise_coprime {
        return gens.iter().fold(vec![1], |acc, m| {
            let mut f = vec![0; m.degree() as usize + 1];
            f[0] = 1;
            f[m.degree() as usize] -= 1;
            tpoly_mul(&acc, &f)
        });
    }
    // Pivot on the variable occurring in the most generators.
    let var = (0..NVARS)
        .max_by_key(|&v| (gens.iter().filter(|m| m.exps()[v] > 0).count(), NVARS - v))
        .unwrap();
    let e = gens
        .iter()
        .map(|m| m.exps()[var])
        .filter(|&e| e > 0)
        .min()
        .unwrap();
    let mut pe = [0u8; NVARS];
    pe[var] = e;
    let pivot = Monomial::new(pe);
    // K(M) = K(M + (p)) + t^deg(p) K(M : p)
    let mut plus = gens.clone();
    plus.push(pivot);
    let colon: Vec<Monomial> = gens
        .iter()
        .map(|m| {
            let mut x = *m.exps();
            x[var] = x[var].saturating_sub(e);
            Monomial::new(x)
        })
        .collect();
    let a = numerator(minimalize(plus));
    let b = numerator(minimalize(colon));
    tpoly_sub_shifted(&a, &b.iter().map(|c| -c).collect(), e as usize)
}

/// `dim (S/M)_d` from the numerator.
pub fn hilbert_function_value(numerator: &[i64], d: i64) -> i64 {
    numerator
        .iter()
        .enumerate()
        .map(|(k, &c)| {
            let m = d - k as i64;
            if m < 0 {
                0
            } else {
                c * binomial(m as u64 + NVARS as u64 - 1, NVARS as u64 - 1) as i64
            }
        })
        .sum()
}

/// Hilbert polynomial with invariants.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct HilbertPolynomial {
    /// Coefficients in `n`, constant term first.
    #[serde(serialize_with = "ser_ratios")]
    pub coefficients: Vec<Rational64>,
    /// Dimension of the projective scheme; `-1` when empty.
    pub projective_dim: i64,
    pub degree: i64,
    /// For surfaces only.
    pub sectional_genus: Option<i64>,
    /// Constant term when integral.
    pub chi: Option<i64>,
}

fn ser_ratios<S: serde::Serializer>(v: &[Rational64], s: S) -> Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for r in v {
        seq.serialize_element(&r.to_string())?;
    }
    seq.end()
}

impl HilbertPolynomial {
    /// From a Hilbert series numerator over `(1 − t)^NVARS`.
    pub fn from_numerator(num: &[i64]) -> Self {
        // Divide out (1 − t) as often as possible.
        let mut q = num.to_vec();
        let mut c = 0usize;
        while q.iter().any(|&x| x != 0) && q.iter().sum::<i64>() == 0 && c < NVARS {
            // synthetic division by (1 - t): q = (1 - t) r  ⇒  r_k = Σ_{i≤k} q_i
            let mut r = Vec::with_capacity(q.len() - 1);
            let mut acc = 0;
            for &x in &q[..q.len() - 1] {
                acc += x;
                r.push(acc);
            }
            q = r;
            c += 1;
        }
        if q.iter().all(|&x| x == 0) {
            return Self {
                coefficients: vec![],
                projective_dim: -1,
                degree: 0,
                sectional_genus: None,
                chi: Some(0),
            };
        }
        let krull = NVARS - c;
        let degree: i64 = q.iter().sum();
        let mut coeffs = vec![Rational64::from_integer(0); krull.max(1)];
        if krull > 0 {
            // Σ_k q_k binom(n − k + krull − 1, krull − 1)
            for (k, &qk) in q.iter().enumerate() {
                let mut poly = vec![Rational64::from_integer(1)];
                for j in 1..krull {
                    let shift = Rational64::from_integer(j as i64 - k as i64);
                    let mut next = vec![Rational64::from_integer(0); poly.len() + 1];
                    for (i, a) in poly.iter().enumerate() {
                        next[i] += a * shift;
                        next[i + 1] += *a;
                    }
                    poly = next;
                }
                let fact: i64 = (1..krull as i64).product();
                for (i, a) in poly.iter().enumerate() {
                    coeffs[i] += a * Rational64::new(qk, fact);
                }
            }
        }
        let projective_dim = krull as i64 - 1;
        let chi = coeffs
            .first()
            .filter(|c| c.is_integer())
            .map(|c| c.to_integer());
        let sectional_genus = (projective_dim == 2).then(|| {
            // P(n) = (d/2)n² + (d/2 − π + 1)n + χ
            let lin = coeffs[1];
            (Rational64::new(degree, 2) + 1 - lin).to_integer()
        });
        Self {
            coefficients: coeffs,
            projective_dim,
            degree,
            sectional_genus,
            chi,
        }
    }

    pub fn of_basis(gb: &GroebnerBasis) -> Self {
        Self::from_numerator(&hilbert_numerator(&gb.leading_monomials()))
    }

    pub fn evaluate(&self, n: i64) -> Rational64 {
        self.coefficients
            .iter()
            .rev()
            .fold(Rational64::from_integer(0), |acc, c| acc * n + c)
    }

    /// Integer coefficients, when all are integral.
    pub fn integer_coefficients(&self) -> Option<Vec<i64>> {
        self.coefficients
            .iter()
            .map(|c| c.is_integer().then(|| c.to_integer()))
            .collect()
    }
}

/// Renders as `6n^2 - 6n + 1`.
impl fmt::Display for HilbertPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (i, c) in self.coefficients.iter().enumerate().rev() {
            if *c == Rational64::from_integer(0) {
                continue;
            }
            let neg = *c < Rational64::from_integer(0);
            let a = if neg { -c } else { *c };
            let coeff = if a == Rational64::from_integer(1) && i > 0 {
                String::new()
            } else if a.is_integer() {
                a.to_string()
            } else {
                format!("({a})")
            };
            let var = match i {
                0 => String::new(),
                1 => "n".into(),
                _ => format!("n^{i}"),
            };
            let body = format!("{coeff}{var}");
            if parts.is_empty() {
                parts.push(if neg { format!("-{body}") } else { body });
            } else {
                parts.push(format!("{} {body}", if neg { "-" } else { "+" }));
            }
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" "))
        }
    }
}

/// Hilbert polynomial of `S/I` for a Gröbner basis of `I`.
pub fn hilbert_polynomial(gb: &GroebnerBasis) -> HilbertPolynomial {
    HilbertPolynomial::of_basis(gb)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_ideal() {
        let h = HilbertPolynomial::from_numerator(&hilbert_numerator(&[]));
        assert_eq!(h.projective_dim, 4);
        assert_eq!(h.degree, 1);
        for n in 0..8 {
            assert_eq!(h.evaluate(n), Rational64::from_integer(binomial(n as u64 + 4, 4) as i64));
        }
    }

    #[test]
    fn hyperplane() {
        let h = HilbertPolynomial::from_numerator(&hilbert_numerator(&[Monomial::var(0)]));
        assert_eq!(h.projective_dim, 3);
        for n in 0..8 {
            assert_eq!(h.evaluate(n), Rational64::from_integer(binomial(n as u64 + 3, 3) as i64));
        }
    }

    #[test]
    fn numerator_matches_direct_count() {
        let gens = vec![
            Monomial::new([2, 1, 0, 0, 0]),
            Monomial::new([0, 2, 1, 0, 0]),
            Monomial::new([1, 0, 0, 3, 0]),
            Monomial::new([0, 0, 0, 1, 1]),
        ];
        let num = hilbert_numerator(&gens);
        for d in 0..9 {
            let direct = super::super::monomials_of_degree(d)
                .iter()
                .filter(|m| !gens.iter().any(|g| g.divides(m)))
                .count() as i64;
            assert_eq!(hilbert_function_value(&num, d as i64), direct, "degree {d}");
        }
    }

    #[test]
    fn render() {
        let h = HilbertPolynomial {
            coefficients: vec![1.into(), (-6).into(), 6.into()],
            projective_dim: 2,
            degree: 12,
            sectional_genus: Some(13),
            chi: Some(1),
        };
        assert_eq!(h.to_string(), "6n^2 - 6n + 1");
    }
}
