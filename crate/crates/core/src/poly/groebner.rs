//! Buchberger's algorithm in degrevlex with the Gebauer–Möller pair update.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use super::{Monomial, Polynomial};
use crate::extalg::NVARS;

/// A Gröbner basis in degrevlex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroebnerBasis {
    p: u32,
    generators: Vec<Polynomial>,
    reduced: bool,
}

/// Budget ran out; carries the partial basis and the number of pending pairs.
#[derive(Clone, Debug)]
pub struct Inconclusive {
    pub partial: Vec<Polynomial>,
    pub pending_pairs: usize,
    pub elapsed: Duration,
}

/// Why the completion loop stopped early.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EarlyExit {
    /// Never stop early.
    Never,
    /// Stop as soon as every variable has a pure power among the leading
    /// monomials, i.e. the affine cone has dimension 0.
    ZeroDimensional,
}

impl GroebnerBasis {
    pub fn prime(&self) -> u32 {
        self.p
    }

    pub fn generators(&self) -> &[Polynomial] {
        &self.generators
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn is_reduced(&self) -> bool {
        self.reduced
    }

    pub fn leading_monomials(&self) -> Vec<Monomial> {
        self.generators
            .iter()
            .filter_map(|g| g.leading_monomial())
            .collect()
    }

    /// Normal form of `f`.
    pub fn reduce(&self, f: &Polynomial) -> Polynomial {
        let all: Vec<usize> = (0..self.generators.len()).collect();
        normal_form(f, &self.generators, &all)
    }

    pub fn contains(&self, f: &Polynomial) -> bool {
        self.reduce(f).is_zero()
    }

    /// True when every S-polynomial reduces to zero.
    pub fn is_groebner(&self) -> bool {
        let g = &self.generators;
        let all: Vec<usize> = (0..g.len()).collect();
        (0..g.len()).all(|i| {
            (i + 1..g.len()).all(|j| normal_form(&s_polynomial(&g[i], &g[j]), g, &all).is_zero())
        })
    }

    /// Whether the affine cone of the ideal is supported at the origin.
    pub fn cone_is_zero_dimensional(&self) -> bool {
        has_all_pure_powers(&self.leading_monomials())
    }
}

pub(crate) fn has_all_pure_powers(lms: &[Monomial]) -> bool {
    let mut seen = [false; NVARS];
    for m in lms {
        if *m == Monomial::one() {
            return true;
        }
        if let Some(v) = m.pure_power_var() {
            seen[v] = true;
        }
    }
    seen.iter().all(|&s| s)
}

fn s_polynomial(f: &Polynomial, g: &Polynomial) -> Polynomial {
    let (mf, mg) = (f.leading_monomial().unwrap(), g.leading_monomial().unwrap());
    let l = mf.lcm(&mg);
    let p = f.prime();
    let cf = f.leading_coefficient().unwrap() as u32;
    let cg = g.leading_coefficient().unwrap() as u32;
    // cg·(l/mf)·f − cf·(l/mg)·g
    let a = Polynomial::zero(p).add_scaled(cg as u8, &mf.quotient_of(&l), f);
    a.add_scaled((p - cf) as u8, &mg.quotient_of(&l), g)
}

/// Full reduction of `f` by the monic polynomials `basis[i]`, `i ∈ active`.
fn normal_form(f: &Polynomial, basis: &[Polynomial], active: &[usize]) -> Polynomial {
    let p = f.prime();
    let mut rem: Vec<(Monomial, u8)> = Vec::new();
    let mut cur = f.clone();
    while let Some(&(m, c)) = cur.terms.first() {
        let reducer = active.iter().map(|&i| &basis[i]).find(|g| {
            g.leading_monomial()
                .is_some_and(|lm| lm.divides(&m))
        });
        match reducer {
            Some(g) => {
                let lm = g.leading_monomial().unwrap();
                let lc = g.leading_coefficient().unwrap() as u32;
                let factor = c as u32 * crate::gf::inv_mod(lc, p).unwrap() % p;
                cur = cur.add_scaled((p - factor) as u8, &lm.quotient_of(&m), g);
            }
            None => {
                rem.push((m, c));
                cur.terms.remove(0);
            }
        }
    }
    Polynomial { p, terms: rem }
}

#[derive(Clone, Copy, PartialEq, Eq)]
struct Pair {
    lcm: Monomial,
    i: usize,
    j: usize,
}

/// Lowest lcm degree first, then lexicographic on the lcm exponents, then
/// indices. Deterministic.
fn pair_key(pr: &Pair) -> (u32, [u8; NVARS], usize, usize) {
    (pr.lcm.degree(), *pr.lcm.exps(), pr.i, pr.j)
}

impl Ord for Pair {
    fn cmp(&self, other: &Self) -> Ordering {
        pair_key(self).cmp(&pair_key(other))
    }
}

impl PartialOrd for Pair {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

struct State {
    polys: Vec<Polynomial>,
    active: Vec<usize>,
    pairs: BTreeSet<Pair>,
}

impl State {
    fn lm(&self, i: usize) -> Monomial {
        self.polys[i].leading_monomial().unwrap()
    }

    /// Gebauer–Möller update after adding `polys[h]`.
    fn update(&mut self, h: usize) {
        let lh = self.lm(h);
        let mut c: Vec<usize> = self.active.clone();
        let mut d: Vec<usize> = Vec::new();
        while let Some(g1) = c.pop() {
            let l1 = lh.lcm(&self.lm(g1));
            let keep = lh.is_coprime(&self.lm(g1))
                || (c.iter().chain(d.iter()).all(|&g2| !lh.lcm(&self.lm(g2)).divides(&l1)));
            if keep {
                d.push(g1);
            }
        }
        let e: Vec<usize> = d
            .into_iter()
            .filter(|&g| !lh.is_coprime(&self.lm(g)))
            .collect();
        let old = std::mem::take(&mut self.pairs);
        for pr in old {
            let drop = lh.divides(&pr.lcm)
                && lh.lcm(&self.lm(pr.i)) != pr.lcm
                && lh.lcm(&self.lm(pr.j)) != pr.lcm;
            if !drop {
                self.pairs.insert(pr);
            }
        }
        for g in e {
            self.pairs.insert(Pair {
                lcm: lh.lcm(&self.lm(g)),
                i: g.min(h),
                j: g.max(h),
            });
        }
        let polys = &self.polys;
        self.active
            .retain(|&g| !lh.divides(&polys[g].leading_monomial().unwrap()));
        self.active.push(h);
    }

    fn snapshot(&self) -> Vec<Polynomial> {
        self.active.iter().map(|&i| self.polys[i].clone()).collect()
    }
}

/// Reduced Gröbner basis of the ideal generated by `gens`.
///
/// `budget = None` means unlimited. A zero budget is reported as
/// [`Inconclusive`] before any work is done.
pub fn buchberger(
    gens: &[Polynomial],
    budget: Option<Duration>,
) -> Result<GroebnerBasis, Inconclusive> {
    buchberger_with(gens, budget, EarlyExit::Never)
}

pub fn buchberger_with(
    gens: &[Polynomial],
    budget: Option<Duration>,
    early: EarlyExit,
) -> Result<GroebnerBasis, Inconclusive> {
    let start = Instant::now();
    let p = gens.first().map(|g| g.prime()).unwrap_or(crate::gf::DEFAULT_PRIME);
    let out_of_time = || budget.is_some_and(|b| start.elapsed() >= b);
    if out_of_time() {
        return Err(Inconclusive {
            partial: gens.to_vec(),
            pending_pairs: 0,
            elapsed: start.elapsed(),
        });
    }
    let mut input: Vec<Polynomial> = gens
        .iter()
        .filter(|g| !g.is_zero())
        .map(|g| g.monic())
        .collect();
    input.sort_by_key(|a| a.leading_monomial());
    input.dedup();

    let mut st = State {
        polys: Vec::new(),
        active: Vec::new(),
        pairs: BTreeSet::new(),
    };
    // Inputs are fed in increasing leading monomial order, each reduced
    // against what is already there.
    for f in input {
        let r = normal_form(&f, &st.polys, &st.active);
        if r.is_zero() {
            continue;
        }
        st.polys.push(r.monic());
        let h = st.polys.len() - 1;
        st.update(h);
    }
    let mut exited_early = early == EarlyExit::ZeroDimensional
        && has_all_pure_powers(&st.active.iter().map(|&i| st.lm(i)).collect::<Vec<_>>());
    while !exited_early {
        let Some(pr) = st.pairs.pop_first() else {
            break;
        };
        if out_of_time() {
            return Err(Inconclusive {
                partial: st.snapshot(),
                pending_pairs: st.pairs.len() + 1,
                elapsed: start.elapsed(),
            });
        }
        let s = s_polynomial(&st.polys[pr.i], &st.polys[pr.j]);
        let r = normal_form(&s, &st.polys, &st.active);
        if r.is_zero() {
            continue;
        }
        st.polys.push(r.monic());
        let h = st.polys.len() - 1;
        st.update(h);
        if early == EarlyExit::ZeroDimensional {
            let lms: Vec<Monomial> = st.active.iter().map(|&i| st.lm(i)).collect();
            exited_early = has_all_pure_powers(&lms);
        }
    }
    if exited_early {
        // A truncated basis: leading monomials are genuine but the S-pair
        // closure was not finished.
        return Ok(GroebnerBasis {
            p,
            generators: st.snapshot(),
            reduced: false,
        });
    }
    Ok(reduce_basis(p, st.snapshot()))
}

/// Minimal, tail-reduced, monic, sorted by leading monomial.
fn reduce_basis(p: u32, mut g: Vec<Polynomial>) -> GroebnerBasis {
    g.sort_by_key(|a| a.leading_monomial());
    let lms: Vec<Monomial> = g.iter().map(|f| f.leading_monomial().unwrap()).collect();
    let minimal: Vec<usize> = (0..g.len())
        .filter(|&i| {
            !(0..g.len()).any(|j| j != i && lms[j].divides(&lms[i]) && (lms[j] != lms[i] || j < i))
        })
        .collect();
    let mut out: Vec<Polynomial> = minimal.iter().map(|&i| g[i].clone()).collect();
    for k in 0..out.len() {
        let others: Vec<usize> = (0..out.len()).filter(|&j| j != k).collect();
        let f = out[k].clone();
        let lead = Polynomial {
            p,
            terms: vec![f.terms[0]],
        };
        let tail = Polynomial {
            p,
            terms: f.terms[1..].to_vec(),
        };
        out[k] = lead.add(&normal_form(&tail, &out, &others)).monic();
    }
    GroebnerBasis {
        p,
        generators: out,
        reduced: true,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::io::parse_polynomial;

    fn polys(src: &[&str]) -> Vec<Polynomial> {
        src.iter().map(|s| parse_polynomial(5, s).unwrap()).collect()
    }

    #[test]
    fn monomial_ideal_is_its_own_basis() {
        let gb = buchberger(&polys(&["x0", "x1"]), None).unwrap();
        assert_eq!(gb.generators(), &polys(&["x1", "x0"])[..]);
        assert!(gb.is_reduced() && gb.is_groebner());
    }

    #[test]
    fn twisted_cubic_like() {
        let gb = buchberger(&polys(&["x0^2-x1*x2", "x0*x1-x2^2"]), None).unwrap();
        assert!(gb.is_groebner());
        for g in polys(&["x0^2-x1*x2", "x0*x1-x2^2"]) {
            assert!(gb.contains(&g));
        }
        // One new element: x1^2*x2 - x0*x2^2 (up to sign).
        assert_eq!(gb.len(), 3);
    }

    #[test]
    fn zero_budget_is_inconclusive() {
        let r = buchberger(&polys(&["x0"]), Some(Duration::ZERO));
        assert!(r.is_err());
    }
}
