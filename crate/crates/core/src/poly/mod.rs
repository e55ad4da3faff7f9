//! Commutative polynomials in `x_0..x_4` over `F_p`, degrevlex ordered.
//!
//! Submodules: [`groebner`] (Buchberger), [`hilbert`] (Hilbert series and
//! polynomials of monomial ideals), [`jacobian`] (smoothness certificate),
//! [`points`] (rational point scans over `F_p` and `F_{p²}`), [`io`] (the
//! line-oriented ideal file format).

pub mod groebner;
pub mod hilbert;
pub mod io;
pub mod jacobian;
pub mod points;

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;

use crate::extalg::NVARS;
use crate::gf::{inv_mod, residue};

/// Exponent vector of a monomial in `NVARS` variables.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Monomial {
    exps: [u8; NVARS],
}

impl Monomial {
    pub fn one() -> Self {
        Self::default()
    }

    pub fn new(exps: [u8; NVARS]) -> Self {
        Self { exps }
    }

    pub fn var(i: usize) -> Self {
        let mut exps = [0; NVARS];
        exps[i] = 1;
        Self { exps }
    }

    pub fn exps(&self) -> &[u8; NVARS] {
        &self.exps
    }

    pub fn degree(&self) -> u32 {
        self.exps.iter().map(|&e| e as u32).sum()
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut exps = self.exps;
        for (e, o) in exps.iter_mut().zip(other.exps) {
            *e += o;
        }
        Self { exps }
    }

    pub fn divides(&self, other: &Self) -> bool {
        self.exps.iter().zip(other.exps).all(|(&a, b)| a <= b)
    }

    /// `other / self`, assuming divisibility.
    pub fn quotient_of(&self, other: &Self) -> Self {
        let mut exps = other.exps;
        for (e, s) in exps.iter_mut().zip(self.exps) {
            *e -= s;
        }
        Self { exps }
    }

    pub fn lcm(&self, other: &Self) -> Self {
        let mut exps = self.exps;
        for (e, o) in exps.iter_mut().zip(other.exps) {
            *e = (*e).max(o);
        }
        Self { exps }
    }

    pub fn is_coprime(&self, other: &Self) -> bool {
        self.exps.iter().zip(other.exps).all(|(&a, b)| a == 0 || b == 0)
    }

    /// Index of the only variable with nonzero exponent, if this is a pure power.
    pub fn pure_power_var(&self) -> Option<usize> {
        let nz: Vec<usize> = (0..NVARS).filter(|&i| self.exps[i] > 0).collect();
        (nz.len() == 1).then(|| nz[0])
    }
}

impl Ord for Monomial {
    /// Degree reverse lexicographic order with `x_0 > x_1 > … > x_4`.
    fn cmp(&self, other: &Self) -> Ordering {
        match self.degree().cmp(&other.degree()) {
            Ordering::Equal => {}
            o => return o,
        }
        for i in (0..NVARS).rev() {
            match self.exps[i].cmp(&other.exps[i]) {
                Ordering::Equal => continue,
                o => return o.reverse(),
            }
        }
        Ordering::Equal
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = (0..NVARS)
            .filter(|&i| self.exps[i] > 0)
            .map(|i| match self.exps[i] {
                1 => format!("x{i}"),
                e => format!("x{i}^{e}"),
            })
            .collect();
        if parts.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", parts.join("*"))
        }
    }
}

/// All monomials of degree `d`, in decreasing degrevlex order.
pub fn monomials_of_degree(d: u32) -> Vec<Monomial> {
    fn rec(i: usize, left: u32, cur: &mut [u8; NVARS], out: &mut Vec<Monomial>) {
        if i == NVARS - 1 {
            cur[i] = left as u8;
            out.push(Monomial::new(*cur));
            return;
        }
        for e in 0..=left {
            cur[i] = e as u8;
            rec(i + 1, left - e, cur, out);
        }
    }
    let mut out = Vec::new();
    rec(0, d, &mut [0; NVARS], &mut out);
    out.sort_by(|a, b| b.cmp(a));
    out
}

/// `dim S_d = binom(d + n - 1, n - 1)`.
pub fn dim_s(d: i64) -> usize {
    if d < 0 {
        return 0;
    }
    binomial(d as u64 + NVARS as u64 - 1, NVARS as u64 - 1) as usize
}

pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

/// The monomial basis of `S_d` with a reverse index.
#[derive(Clone, Debug)]
pub struct MonomialBasis {
    degree: u32,
    monomials: Vec<Monomial>,
    index: HashMap<Monomial, usize>,
}

impl MonomialBasis {
    pub fn new(degree: u32) -> Self {
        let monomials = monomials_of_degree(degree);
        let index = monomials.iter().enumerate().map(|(i, &m)| (m, i)).collect();
        Self {
            degree,
            monomials,
            index,
        }
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }

    pub fn monomials(&self) -> &[Monomial] {
        &self.monomials
    }

    pub fn get(&self, i: usize) -> Monomial {
        self.monomials[i]
    }

    pub fn index_of(&self, m: &Monomial) -> usize {
        self.index[m]
    }

    /// Polynomial with the given coefficient vector on this basis.
    pub fn polynomial(&self, p: u32, coeffs: &[u8]) -> Polynomial {
        let terms = self
            .monomials
            .iter()
            .zip(coeffs)
            .filter(|(_, &c)| c != 0)
            .map(|(&m, &c)| (m, c))
            .collect();
        Polynomial { p, terms }
    }

    /// Coefficient vector of a homogeneous polynomial of this degree.
    pub fn coefficients(&self, f: &Polynomial) -> Vec<u8> {
        let mut v = vec![0u8; self.len()];
        for &(m, c) in f.terms() {
            v[self.index_of(&m)] = c;
        }
        v
    }
}

/// A polynomial with terms sorted in decreasing degrevlex order and no zero
/// coefficients.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Polynomial {
    p: u32,
    terms: Vec<(Monomial, u8)>,
}

impl Polynomial {
    pub fn zero(p: u32) -> Self {
        Self {
            p,
            terms: Vec::new(),
        }
    }

    pub fn constant(p: u32, c: i64) -> Self {
        Self::from_terms(p, vec![(Monomial::one(), c)])
    }

    pub fn var(p: u32, i: usize) -> Self {
        Self::from_terms(p, vec![(Monomial::var(i), 1)])
    }

    pub fn monomial(p: u32, m: Monomial, c: i64) -> Self {
        Self::from_terms(p, vec![(m, c)])
    }

    /// Collects like terms and sorts.
    pub fn from_terms(p: u32, terms: Vec<(Monomial, i64)>) -> Self {
        let mut acc: HashMap<Monomial, i64> = HashMap::new();
        for (m, c) in terms {
            *acc.entry(m).or_default() += c;
        }
        let mut terms: Vec<(Monomial, u8)> = acc
            .into_iter()
            .map(|(m, c)| (m, residue(c, p)))
            .filter(|&(_, c)| c != 0)
            .collect();
        terms.sort_by_key(|t| std::cmp::Reverse(t.0));
        Self { p, terms }
    }

    pub fn prime(&self) -> u32 {
        self.p
    }

    pub fn terms(&self) -> &[(Monomial, u8)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn leading_monomial(&self) -> Option<Monomial> {
        self.terms.first().map(|t| t.0)
    }

    pub fn leading_coefficient(&self) -> Option<u8> {
        self.terms.first().map(|t| t.1)
    }

    pub fn degree(&self) -> Option<u32> {
        self.terms.iter().map(|t| t.0.degree()).max()
    }

    pub fn is_homogeneous(&self) -> bool {
        self.terms
            .first()
            .is_none_or(|t| self.terms.iter().all(|s| s.0.degree() == t.0.degree()))
    }

    pub fn scale(&self, c: u8) -> Self {
        if c == 0 {
            return Self::zero(self.p);
        }
        let terms = self
            .terms
            .iter()
            .map(|&(m, a)| (m, ((a as u32 * c as u32) % self.p) as u8))
            .collect();
        Self { p: self.p, terms }
    }

    /// Scales so that the leading coefficient is 1.
    pub fn monic(&self) -> Self {
        match self.leading_coefficient() {
            None => self.clone(),
            Some(c) => self.scale(inv_mod(c as u32, self.p).unwrap() as u8),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Self {
        let terms = self.terms.iter().map(|&(t, c)| (t.mul(m), c)).collect();
        Self { p: self.p, terms }
    }

    /// `self + c·m·g`, by a sorted merge.
    pub fn add_scaled(&self, c: u8, m: &Monomial, g: &Polynomial) -> Self {
        let p = self.p;
        let c = c as u32;
        let mut out = Vec::with_capacity(self.terms.len() + g.terms.len());
        let mut a = self.terms.iter().peekable();
        let mut b = g.terms.iter().map(|&(t, v)| (t.mul(m), ((v as u32 * c) % p) as u8)).peekable();
        loop {
            match (a.peek(), b.peek()) {
                (None, None) => break,
                (Some(_), None) => out.push(*a.next().unwrap()),
                (None, Some(_)) => out.push(b.next().unwrap()),
                (Some(&&(ta, va)), Some(&(tb, vb))) => match ta.cmp(&tb) {
                    Ordering::Greater => {
                        out.push((ta, va));
                        a.next();
                    }
                    Ordering::Less => {
                        out.push((tb, vb));
                        b.next();
                    }
                    Ordering::Equal => {
                        let s = ((va as u32 + vb as u32) % p) as u8;
                        if s != 0 {
                            out.push((ta, s));
                        }
                        a.next();
                        b.next();
                    }
                },
            }
        }
        Self { p, terms: out }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.add_scaled(1, &Monomial::one(), other)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add_scaled((self.p - 1) as u8, &Monomial::one(), other)
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut acc = Self::zero(self.p);
        for &(m, c) in &other.terms {
            acc = acc.add_scaled(c, &m, self);
        }
        acc
    }

    /// Partial derivative with respect to `x_i`.
    pub fn derivative(&self, i: usize) -> Self {
        let terms = self
            .terms
            .iter()
            .filter(|(m, _)| m.exps[i] > 0)
            .map(|&(m, c)| {
                let mut e = m.exps;
                let k = e[i] as i64;
                e[i] -= 1;
                (Monomial::new(e), k * c as i64)
            })
            .collect();
        Self::from_terms(self.p, terms)
    }

    /// Evaluates at a point with coordinates in any ring given by closures.
    pub fn evaluate_with<T: Copy>(
        &self,
        point: &[T; NVARS],
        zero: T,
        one: T,
        add: impl Fn(T, T) -> T,
        mul: impl Fn(T, T) -> T,
        from_coeff: impl Fn(u8) -> T,
    ) -> T {
        let mut acc = zero;
        for &(m, c) in &self.terms {
            let mut t = from_coeff(c);
            for (i, &e) in m.exps.iter().enumerate() {
                let mut pw = one;
                for _ in 0..e {
                    pw = mul(pw, point[i]);
                }
                t = mul(t, pw);
            }
            acc = add(acc, t);
        }
        acc
    }

    /// Evaluation over `F_p`.
    pub fn evaluate(&self, point: &[u8; NVARS]) -> u8 {
        let p = self.p as u64;
        let v = self.evaluate_with(
            &point.map(|x| x as u64),
            0u64,
            1u64,
            |a, b| (a + b) % p,
            |a, b| (a * b) % p,
            |c| c as u64,
        );
        v as u8
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Renders in the ideal-file syntax: `3*x0^2*x1^3+4*x2*x3^4`.
impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|&(m, c)| {
                if m == Monomial::one() {
                    format!("{c}")
                } else if c == 1 {
                    format!("{m}")
                } else {
                    format!("{c}*{m}")
                }
            })
            .collect();
        write!(f, "{}", parts.join("+"))
    }
}
