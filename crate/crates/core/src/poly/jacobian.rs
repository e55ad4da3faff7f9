//! Smoothness certificate for codimension-2 schemes in `P⁴`.
//!
//! `J = I + (2×2 minors of the Jacobian)`. The projective singular locus is
//! empty over the algebraic closure iff the affine cone of `J` is supported
//! at the origin, which is read off the leading monomials.

use std::time::{Duration, Instant};

use serde::Serialize;

use super::groebner::{buchberger, buchberger_with, EarlyExit, GroebnerBasis};
use super::hilbert::hilbert_polynomial;
use super::points::{rational_point_scan, ExtensionField};
use super::{MonomialBasis, Polynomial};
use crate::error::{Error, Result};
use crate::extalg::NVARS;
use crate::gf::EchelonBasis;

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "verdict", rename_all = "camelCase")]
pub enum SingularLocus {
    #[serde(rename_all = "camelCase")]
    Smooth {
        /// Number of independent minors fed to the completion.
        minors_used: usize,
        basis_size: usize,
        elapsed_secs: f64,
    },
    #[serde(rename_all = "camelCase")]
    Singular {
        /// Gröbner basis of `J`.
        #[serde(serialize_with = "ser_polys")]
        witness: Vec<Polynomial>,
        /// `F_p`-points of `V(J)`.
        points: Vec<[u8; NVARS]>,
    },
    #[serde(rename_all = "camelCase")]
    Inconclusive {
        stage: String,
        pending_pairs: usize,
        elapsed_secs: f64,
    },
}

fn ser_polys<S: serde::Serializer>(v: &[Polynomial], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|f| f.to_string()))
}

impl SingularLocus {
    pub fn is_smooth(&self) -> bool {
        matches!(self, SingularLocus::Smooth { .. })
    }

    pub fn is_inconclusive(&self) -> bool {
        matches!(self, SingularLocus::Inconclusive { .. })
    }
}

/// All nonzero `2×2` minors of the Jacobian of `gens`.
pub fn jacobian_minors(gens: &[Polynomial]) -> Vec<Polynomial> {
    let jac: Vec<Vec<Polynomial>> = gens
        .iter()
        .map(|g| (0..NVARS).map(|i| g.derivative(i)).collect())
        .collect();
    let mut out = Vec::new();
    for i in 0..jac.len() {
        for j in i + 1..jac.len() {
            for a in 0..NVARS {
                for b in a + 1..NVARS {
                    let m = jac[i][a].mul(&jac[j][b]).sub(&jac[i][b].mul(&jac[j][a]));
                    if !m.is_zero() {
                        out.push(m);
                    }
                }
            }
        }
    }
    out
}

/// Reduces the minors modulo `gb` and keeps a linearly independent subset
/// in each degree, lowest degree first.
fn interreduce_minors(gb: &GroebnerBasis, minors: Vec<Polynomial>) -> Vec<Polynomial> {
    let p = gb.prime();
    let mut reduced: Vec<Polynomial> = minors
        .iter()
        .map(|m| gb.reduce(m))
        .filter(|m| !m.is_zero())
        .collect();
    if !reduced.iter().all(Polynomial::is_homogeneous) {
        reduced.sort_by_key(|a| a.leading_monomial());
        reduced.dedup();
        return reduced;
    }
    reduced.sort_by_key(|m| m.degree());
    let mut out = Vec::new();
    let mut k = 0;
    while k < reduced.len() {
        let d = reduced[k].degree().unwrap();
        let basis = MonomialBasis::new(d);
        let mut ech = EchelonBasis::new(p, basis.len());
        while k < reduced.len() && reduced[k].degree() == Some(d) {
            if ech.insert(&basis.coefficients(&reduced[k])) {
                out.push(reduced[k].clone());
            }
            k += 1;
        }
    }
    out
}

/// Jacobian criterion. `budget = None` means unlimited.
pub fn jacobian_singular_locus(
    gens: &[Polynomial],
    budget: Option<Duration>,
) -> Result<SingularLocus> {
    let start = Instant::now();
    let remaining = || budget.map(|b| b.saturating_sub(start.elapsed()));
    let inconclusive = |stage: &str, pending: usize| SingularLocus::Inconclusive {
        stage: stage.into(),
        pending_pairs: pending,
        elapsed_secs: start.elapsed().as_secs_f64(),
    };
    if gens.is_empty() {
        return Err(Error::InvalidInput("empty ideal".into()));
    }
    let gb = match buchberger(gens, remaining()) {
        Ok(gb) => gb,
        Err(inc) => return Ok(inconclusive("ideal", inc.pending_pairs)),
    };
    let hp = hilbert_polynomial(&gb);
    if hp.projective_dim != NVARS as i64 - 3 {
        return Err(Error::InvalidInput(format!(
            "expected a codimension-2 scheme, Hilbert polynomial {hp} has dimension {}",
            hp.projective_dim
        )));
    }
    let minors = interreduce_minors(&gb, jacobian_minors(gens));
    let minors_used = minors.len();
    let mut j_gens = gb.generators().to_vec();
    j_gens.extend(minors);
    let jgb = match buchberger_with(&j_gens, remaining(), EarlyExit::ZeroDimensional) {
        Ok(jgb) => jgb,
        Err(inc) => return Ok(inconclusive("jacobian", inc.pending_pairs)),
    };
    if jgb.cone_is_zero_dimensional() {
        return Ok(SingularLocus::Smooth {
            minors_used,
            basis_size: jgb.len(),
            elapsed_secs: start.elapsed().as_secs_f64(),
        });
    }
    let field = ExtensionField::new(gb.prime(), 1)?;
    let points = rational_point_scan(jgb.generators(), &field, false)
        .points
        .into_iter()
        .map(|pt| pt.coords.map(|c| c.a))
        .collect();
    Ok(SingularLocus::Singular {
        witness: jgb.generators().to_vec(),
        points,
    })
}
