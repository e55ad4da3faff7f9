//! Picard lattice of the plane blown up in `k` points, and the numerical
//! adjunction process `H ← H + K`.
//!
//! A class `(a; m_1..m_k)` stands for `aL − Σ m_i E_i`, so `K = (−3; −1..−1)`.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct PicardClass {
    pub a: i64,
    pub m: Vec<i64>,
}

impl PicardClass {
    pub fn new(a: i64, m: Vec<i64>) -> Self {
        Self { a, m }
    }

    pub fn line(points: usize) -> Self {
        Self::new(1, vec![0; points])
    }

    pub fn exceptional(points: usize, i: usize) -> Self {
        let mut m = vec![0; points];
        m[i] = -1;
        Self::new(0, m)
    }

    pub fn canonical(points: usize) -> Self {
        Self::new(-3, vec![-1; points])
    }

    pub fn points(&self) -> usize {
        self.m.len()
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        check_len(self, other)?;
        Ok(Self::new(
            self.a + other.a,
            self.m.iter().zip(&other.m).map(|(x, y)| x + y).collect(),
        ))
    }

    pub fn neg(&self) -> Self {
        Self::new(-self.a, self.m.iter().map(|x| -x).collect())
    }

    /// Drops the exceptional classes at the given positions.
    pub fn contract(&self, drop: &[usize]) -> Self {
        let m = self
            .m
            .iter()
            .enumerate()
            .filter(|(i, _)| !drop.contains(i))
            .map(|(_, &x)| x)
            .collect();
        Self::new(self.a, m)
    }
}

fn check_len(u: &PicardClass, v: &PicardClass) -> Result<()> {
    if u.m.len() != v.m.len() {
        return Err(Error::InvalidInput(format!(
            "classes live on lattices with {} and {} exceptional classes",
            u.m.len(),
            v.m.len()
        )));
    }
    Ok(())
}

/// `aa′ − Σ m_i m_i′`.
pub fn intersect(u: &PicardClass, v: &PicardClass) -> Result<i64> {
    check_len(u, v)?;
    Ok(u.a * v.a - u.m.iter().zip(&v.m).map(|(x, y)| x * y).sum::<i64>())
}

/// Renders as `12L -4E1 -4E2 -3E3..11`, grouping runs of three or more
/// equal multiplicities.
impl fmt::Display for PicardClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}L", self.a)?;
        let mut i = 0;
        while i < self.m.len() {
            let mut j = i;
            while j + 1 < self.m.len() && self.m[j + 1] == self.m[i] {
                j += 1;
            }
            if self.m[i] != 0 {
                let c = -self.m[i];
                let sign = if c < 0 { "-" } else { "+" };
                if j - i < 2 {
                    for t in i..=j {
                        write!(f, " {sign}{}E{}", c.abs(), t + 1)?;
                    }
                } else {
                    write!(f, " {sign}{}E{}..{}", c.abs(), i + 1, j + 1)?;
                }
            }
            i = j + 1;
        }
        Ok(())
    }
}

/// Parses `12L -4E1 -4E2 -3E3..11 -2E12..14 -1E15..21`. Indices are 1-based;
/// the number of points is the largest index mentioned.
impl FromStr for PicardClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = |t: &str| Error::Parse(format!("bad class token {t:?}"));
        let mut a = None;
        let mut terms: Vec<(usize, usize, i64)> = Vec::new();
        for tok in s.split_whitespace() {
            if let Some(c) = tok.strip_suffix('L') {
                if a.is_some() {
                    return Err(Error::Parse("L given twice".into()));
                }
                a = Some(parse_coeff(c).ok_or_else(|| bad(tok))?);
                continue;
            }
            let (c, idx) = tok.split_once('E').ok_or_else(|| bad(tok))?;
            let c = parse_coeff(c).ok_or_else(|| bad(tok))?;
            let (lo, hi) = match idx.split_once("..") {
                Some((l, h)) => (l.parse::<usize>(), h.parse::<usize>()),
                None => (idx.parse::<usize>(), idx.parse::<usize>()),
            };
            let (lo, hi) = (lo.map_err(|_| bad(tok))?, hi.map_err(|_| bad(tok))?);
            if lo == 0 || hi < lo {
                return Err(bad(tok));
            }
            terms.push((lo, hi, c));
        }
        let a = a.ok_or_else(|| Error::Parse(format!("no L term in {s:?}")))?;
        let k = terms.iter().map(|t| t.1).max().unwrap_or(0);
        let mut m = vec![0; k];
        let mut seen = vec![false; k];
        for (lo, hi, c) in terms {
            for i in lo - 1..hi {
                if seen[i] {
                    return Err(Error::Parse(format!("E{} given twice", i + 1)));
                }
                seen[i] = true;
                m[i] = -c;
            }
        }
        Ok(Self::new(a, m))
    }
}

/// `""`, `"+"` and `"-"` mean ±1.
fn parse_coeff(c: &str) -> Option<i64> {
    match c {
        "" | "+" => Some(1),
        "-" => Some(-1),
        _ => c.strip_prefix('+').unwrap_or(c).parse().ok(),
    }
}

/// Degree, sectional genus and `χ(H)` of a hyperplane class.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SurfaceInvariants {
    pub degree: i64,
    pub sectional_genus: i64,
    /// `χ(𝒪(H)) = χ(𝒪) + H·(H − K)/2` with `χ(𝒪) = 1`.
    pub chi: i64,
}

pub fn surface_invariants(h: &PicardClass) -> SurfaceInvariants {
    let k = PicardClass::canonical(h.points());
    let hh = intersect(h, h).unwrap();
    let hk = intersect(h, &k).unwrap();
    SurfaceInvariants {
        degree: hh,
        sectional_genus: (hh + hk) / 2 + 1,
        chi: 1 + (hh - hk) / 2,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct LedgerRow {
    pub step: usize,
    pub class: String,
    pub degree: i64,
    pub sectional_genus: i64,
    /// Exceptional classes contracted to reach this step.
    pub contracted: Option<usize>,
    pub points: usize,
    pub k_squared: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "camelCase")]
pub enum Terminal {
    /// `H = −K`.
    DelPezzo { degree: i64, points: usize },
    /// `H + K` has `a ≤ 0` and cannot be effective.
    NotEffective,
    /// `H·H = 0` was reached.
    Degenerate,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct AdjunctionLedger {
    pub rows: Vec<LedgerRow>,
    pub terminal: Terminal,
}

impl AdjunctionLedger {
    pub fn total_contracted(&self) -> usize {
        self.rows.iter().filter_map(|r| r.contracted).sum()
    }

    /// `(degree, genus, contracted)` triples.
    pub fn summary(&self) -> Vec<(i64, i64, Option<usize>)> {
        self.rows
            .iter()
            .map(|r| (r.degree, r.sectional_genus, r.contracted))
            .collect()
    }

    pub fn to_table(&self) -> String {
        let mut out = format!(
            "{:>4}  {:>6}  {:>6}  {:>10}  {:>6}  {:>4}  class\n",
            "step", "degree", "genus", "contracted", "points", "K^2"
        );
        for r in &self.rows {
            out.push_str(&format!(
                "{:>4}  {:>6}  {:>6}  {:>10}  {:>6}  {:>4}  {}\n",
                r.step,
                r.degree,
                r.sectional_genus,
                r.contracted.map_or("-".into(), |c| c.to_string()),
                r.points,
                r.k_squared,
                r.class
            ));
        }
        out.push_str(&match &self.terminal {
            Terminal::DelPezzo { degree, points } => {
                format!("end: Del Pezzo surface of degree {degree} ({points} points blown up)\n")
            }
            Terminal::NotEffective => "end: H + K is not effective\n".into(),
            Terminal::Degenerate => "end: H.H = 0\n".into(),
        });
        out
    }
}

fn row(step: usize, h: &PicardClass, contracted: Option<usize>) -> LedgerRow {
    let inv = surface_invariants(h);
    let k = PicardClass::canonical(h.points());
    LedgerRow {
        step,
        class: h.to_string(),
        degree: inv.degree,
        sectional_genus: inv.sectional_genus,
        contracted,
        points: h.points(),
        k_squared: intersect(&k, &k).unwrap(),
    }
}

/// Repeats `H ← H + K`, contracting every `E_i` with `H·E_i = 0`.
pub fn adjunction_replay(h0: &PicardClass) -> Result<AdjunctionLedger> {
    let mut h = h0.clone();
    let mut rows = vec![row(0, &h, None)];
    if rows[0].degree < 0 {
        return Err(Error::AnomalousClass(format!("H·H = {} < 0", rows[0].degree)));
    }
    loop {
        let k = PicardClass::canonical(h.points());
        if h == k.neg() {
            let degree = intersect(&k, &k)?;
            return Ok(AdjunctionLedger {
                rows,
                terminal: Terminal::DelPezzo {
                    degree,
                    points: h.points(),
                },
            });
        }
        if rows.last().unwrap().degree == 0 {
            return Ok(AdjunctionLedger {
                rows,
                terminal: Terminal::Degenerate,
            });
        }
        let next = h.add(&k)?;
        if next.a <= 0 {
            return Ok(AdjunctionLedger {
                rows,
                terminal: Terminal::NotEffective,
            });
        }
        if let Some(i) = next.m.iter().position(|&x| x < 0) {
            return Err(Error::AnomalousClass(format!(
                "H + K meets E{} negatively in {next}",
                i + 1
            )));
        }
        let drop: Vec<usize> = (0..next.points()).filter(|&i| next.m[i] == 0).collect();
        let genus_before = {
            // 2π − 2 = (H+K)·(H+K) + (H+K)·K on the old lattice
            let t = intersect(&next, &next)? + intersect(&next, &k)?;
            t / 2 + 1
        };
        h = next.contract(&drop);
        let r = row(rows.len(), &h, Some(drop.len()));
        if r.sectional_genus != genus_before {
            return Err(Error::AnomalousClass(format!(
                "genus {} after contraction differs from {genus_before}",
                r.sectional_genus
            )));
        }
        if r.degree < 0 {
            return Err(Error::AnomalousClass(format!("H·H = {} < 0 at step {}", r.degree, r.step)));
        }
        rows.push(r);
    }
}

/// The hyperplane class of the surface: `12L − 4E₁ − 4E₂ − 3E₃..₁₁ − 2E₁₂..₁₄ − E₁₅..₂₁`.
pub const MAIN_CLASS: &str = "12L -4E1 -4E2 -3E3..11 -2E12..14 -1E15..21";

pub fn main_class() -> PicardClass {
    MAIN_CLASS.parse().unwrap()
}
