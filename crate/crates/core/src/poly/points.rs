//! `F_p` and `F_{p²}` arithmetic and exhaustive point scans over `P⁴`.

use rayon::prelude::*;
use serde::Serialize;

use super::Polynomial;
use crate::error::{Error, Result};
use crate::extalg::NVARS;
use crate::gf::{check_prime, inv_mod};

/// Element `a + b·t` of `F_p[t]/(t² − r)`; `b = 0` in degree 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize)]
pub struct Fq {
    pub a: u8,
    pub b: u8,
}

/// `F_{p^e}` for `e ∈ {1, 2}`, realized as `F_p[t]/(t² − r)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ExtensionField {
    pub p: u32,
    pub degree: u32,
    /// `r` with `t² = r`; unused when `degree = 1`.
    pub nonresidue: u32,
}

fn is_square(x: u32, p: u32) -> bool {
    (0..p).any(|y| y * y % p == x % p)
}

impl ExtensionField {
    /// Uses `t² − 2` when 2 is a non-square mod `p` (e.g. `p = 5`), otherwise
    /// the smallest non-square.
    pub fn new(p: u32, degree: u32) -> Result<Self> {
        check_prime(p)?;
        if !(1..=2).contains(&degree) {
            return Err(Error::InvalidInput(format!("extension degree {degree} not in 1..=2")));
        }
        if degree == 2 && p == 2 {
            return Err(Error::InvalidInput("F_4 is not supported".into()));
        }
        let nonresidue = if degree == 1 {
            0
        } else {
            (2..p).find(|&r| !is_square(r, p)).unwrap()
        };
        Ok(Self {
            p,
            degree,
            nonresidue,
        })
    }

    /// The defining polynomial, e.g. `t^2-2`.
    pub fn modulus_description(&self) -> String {
        if self.degree == 1 {
            format!("F_{}", self.p)
        } else {
            format!("F_{}[t]/(t^2-{})", self.p, self.nonresidue)
        }
    }

    pub fn order(&self) -> u32 {
        self.p.pow(self.degree)
    }

    pub fn zero(&self) -> Fq {
        Fq::default()
    }

    pub fn one(&self) -> Fq {
        Fq { a: 1, b: 0 }
    }

    pub fn from_base(&self, c: u8) -> Fq {
        Fq { a: c, b: 0 }
    }

    pub fn elements(&self) -> Vec<Fq> {
        let bs = if self.degree == 1 { 1 } else { self.p };
        (0..bs)
            .flat_map(|b| (0..self.p).map(move |a| Fq { a: a as u8, b: b as u8 }))
            .collect()
    }

    #[inline]
    pub fn add(&self, x: Fq, y: Fq) -> Fq {
        let p = self.p;
        Fq {
            a: ((x.a as u32 + y.a as u32) % p) as u8,
            b: ((x.b as u32 + y.b as u32) % p) as u8,
        }
    }

    #[inline]
    pub fn neg(&self, x: Fq) -> Fq {
        let p = self.p;
        Fq {
            a: ((p - x.a as u32) % p) as u8,
            b: ((p - x.b as u32) % p) as u8,
        }
    }

    #[inline]
    pub fn sub(&self, x: Fq, y: Fq) -> Fq {
        self.add(x, self.neg(y))
    }

    #[inline]
    pub fn mul(&self, x: Fq, y: Fq) -> Fq {
        let p = self.p;
        let (a, b, c, d) = (x.a as u32, x.b as u32, y.a as u32, y.b as u32);
        Fq {
            a: ((a * c + self.nonresidue * (b * d % p)) % p) as u8,
            b: ((a * d + b * c) % p) as u8,
        }
    }

    pub fn pow(&self, mut x: Fq, mut e: u64) -> Fq {
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, x);
            }
            x = self.mul(x, x);
            e >>= 1;
        }
        acc
    }

    pub fn inv(&self, x: Fq) -> Option<Fq> {
        // (a + bt)^{-1} = (a − bt) / (a² − r b²)
        let p = self.p;
        let (a, b) = (x.a as u32, x.b as u32);
        let norm = (a * a % p + p - self.nonresidue * (b * b % p) % p) % p;
        let ni = inv_mod(norm, p)?;
        Some(Fq {
            a: (a * ni % p) as u8,
            b: ((p - b) % p * ni % p) as u8,
        })
    }

    pub fn frobenius(&self, x: Fq) -> Fq {
        self.pow(x, self.p as u64)
    }

    /// Evaluates a polynomial at `point`, using precomputed powers.
    pub fn evaluate(&self, f: &Polynomial, powers: &[Vec<Fq>; NVARS]) -> Fq {
        let mut acc = self.zero();
        for &(m, c) in f.terms() {
            let mut t = self.from_base(c);
            for (i, &e) in m.exps().iter().enumerate() {
                if e > 0 {
                    t = self.mul(t, powers[i][e as usize]);
                }
            }
            acc = self.add(acc, t);
        }
        acc
    }

    fn powers(&self, point: &[Fq; NVARS], max_deg: usize) -> [Vec<Fq>; NVARS] {
        std::array::from_fn(|i| {
            let mut v = Vec::with_capacity(max_deg + 1);
            v.push(self.one());
            for k in 1..=max_deg {
                v.push(self.mul(v[k - 1], point[i]));
            }
            v
        })
    }

    /// Rank of a dense matrix over this field.
    pub fn rank(&self, mut rows: Vec<Vec<Fq>>) -> usize {
        let ncols = rows.first().map_or(0, Vec::len);
        let mut rank = 0;
        for col in 0..ncols {
            let Some(piv) = (rank..rows.len()).find(|&r| rows[r][col] != self.zero()) else {
                continue;
            };
            rows.swap(rank, piv);
            let inv = self.inv(rows[rank][col]).unwrap();
            for r in rank + 1..rows.len() {
                if rows[r][col] == self.zero() {
                    continue;
                }
                let f = self.mul(rows[r][col], inv);
                for c in col..ncols {
                    let d = self.mul(f, rows[rank][c]);
                    rows[r][c] = self.sub(rows[r][c], d);
                }
            }
            rank += 1;
        }
        rank
    }
}

/// A common zero found by [`rational_point_scan`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ScannedPoint {
    /// Normalized: first nonzero coordinate is 1.
    pub coords: [Fq; NVARS],
    pub jacobian_rank: Option<usize>,
}

/// Result of an exhaustive scan of `P⁴(F_{p^e})`.
#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct PointScan {
    pub field: String,
    pub candidates: u64,
    pub points: Vec<ScannedPoint>,
}

impl PointScan {
    /// Points where the Jacobian rank drops below `codim`.
    pub fn rank_deficient(&self, codim: usize) -> Vec<&ScannedPoint> {
        self.points
            .iter()
            .filter(|pt| pt.jacobian_rank.is_some_and(|r| r < codim))
            .collect()
    }
}

/// Number of points of `P^{n-1}(F_q)`.
pub fn projective_count(q: u64) -> u64 {
    (q.pow(NVARS as u32) - 1) / (q - 1)
}

/// All common zeros of `gens` in `P⁴(F_{p^degree})`; optionally with the
/// Jacobian rank at each. Parallel over the position of the leading 1;
/// output sorted.
pub fn rational_point_scan(
    gens: &[Polynomial],
    field: &ExtensionField,
    with_jacobian: bool,
) -> PointScan {
    let elems = field.elements();
    let q = elems.len();
    let max_deg = gens.iter().filter_map(|g| g.degree()).max().unwrap_or(0) as usize;
    let jac: Vec<Vec<Polynomial>> = if with_jacobian {
        gens.iter()
            .map(|g| (0..NVARS).map(|i| g.derivative(i)).collect())
            .collect()
    } else {
        Vec::new()
    };
    let mut points: Vec<ScannedPoint> = (0..NVARS)
        .into_par_iter()
        .flat_map_iter(|lead| {
            // Coordinates before `lead` are 0, at `lead` is 1, after are free.
            let free = NVARS - lead - 1;
            let total = q.pow(free as u32);
            let elems = &elems;
            let jac = &jac;
            (0..total).filter_map(move |mut code| {
                let mut pt = [field.zero(); NVARS];
                pt[lead] = field.one();
                for k in (lead + 1..NVARS).rev() {
                    pt[k] = elems[code % q];
                    code /= q;
                }
                let pw = field.powers(&pt, max_deg);
                if gens.iter().any(|g| field.evaluate(g, &pw) != field.zero()) {
                    return None;
                }
                let jacobian_rank = with_jacobian.then(|| {
                    let rows = jac
                        .iter()
                        .map(|row| row.iter().map(|d| field.evaluate(d, &pw)).collect())
                        .collect();
                    field.rank(rows)
                });
                Some(ScannedPoint {
                    coords: pt,
                    jacobian_rank,
                })
            })
        })
        .collect();
    points.sort_by_key(|a| a.coords);
    PointScan {
        field: field.modulus_description(),
        candidates: projective_count(q as u64),
        points,
    }
}
