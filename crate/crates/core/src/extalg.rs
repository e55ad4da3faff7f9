//! The exterior algebra `E = ΛV` on the dual basis `e_0..e_{n-1}`, its
//! canonical module `ω_E = ΛW`, and maps between twisted free modules.
//!
//! Basis elements of `Λ^k` are bitmasks of weight `k`, ordered by numeric
//! value. `E` acts on `ΛW` by contraction:
//!
//! ```text
//! e_i ⌟ (x_{s1} ∧ … ∧ x_{sk}) = Σ_t (-1)^(t-1) δ(i, s_t) · (omit t-th factor)
//! (u ∧ v) ⌟ w = u ⌟ (v ⌟ w)
//! ```
//!
//! The graded piece of `ω_E(a)` in internal degree `d` is `Λ^(d+a) W`. The
//! free generator of `ω_E(a)` is the volume form `x_0 ∧ … ∧ x_{n-1}`, which
//! sits in internal degree `n - a`.
//!
//! A map `ω_E(a) → ω_E(b)` is an element `u ∈ Λ^(a-b) V` acting by right
//! multiplication on the coefficient of the generator: `v⌟vol ↦ (v∧u)⌟vol`.
//! This makes every [`EModuleMap`] an honest homomorphism of left
//! `E`-modules, so kernels are submodules and composition is
//! `(g∘f)_{rc} = Σ_k f_{kc} ∧ g_{rk}`.

use std::fmt;
use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::gf::{residue, Matrix};

/// Number of variables of the ambient projective space `P(W)`.
pub const NVARS: usize = 5;
/// Number of subsets of the variables, i.e. `dim ΛV`.
pub const BASIS_SIZE: usize = 1 << NVARS;
/// Mask of the volume form.
pub const FULL_MASK: u32 = (1 << NVARS) - 1;

struct Tables {
    by_degree: Vec<Vec<u32>>,
    index: Vec<usize>,
}

fn tables() -> &'static Tables {
    static TABLES: OnceLock<Tables> = OnceLock::new();
    TABLES.get_or_init(|| {
        let mut by_degree = vec![Vec::new(); NVARS + 1];
        let mut index = vec![0; BASIS_SIZE];
        for mask in 0..BASIS_SIZE as u32 {
            let k = mask.count_ones() as usize;
            index[mask as usize] = by_degree[k].len();
            by_degree[k].push(mask);
        }
        Tables { by_degree, index }
    })
}

/// Basis masks of `Λ^k` in increasing numeric order (empty outside `0..=n`).
pub fn basis_masks(k: i32) -> &'static [u32] {
    if k < 0 || k as usize > NVARS {
        return &[];
    }
    &tables().by_degree[k as usize]
}

/// Position of `mask` inside [`basis_masks`] of its weight.
#[inline]
pub fn basis_index(mask: u32) -> usize {
    tables().index[mask as usize]
}

/// `dim Λ^k`.
pub fn lambda_dim(k: i32) -> usize {
    basis_masks(k).len()
}

/// Sign of `e_S ∧ e_T` relative to `e_{S∪T}`; zero when the sets meet.
#[inline]
pub fn wedge_sign(s: u32, t: u32) -> i32 {
    if s & t != 0 {
        return 0;
    }
    let mut inversions = 0;
    let mut rest = t;
    while rest != 0 {
        let j = rest.trailing_zeros();
        inversions += (s >> (j + 1)).count_ones();
        rest &= rest - 1;
    }
    if inversions % 2 == 0 {
        1
    } else {
        -1
    }
}

/// `e_i ⌟ x_mask`: returns the resulting mask and sign, or `None` if zero.
#[inline]
pub fn contract_generator(i: usize, mask: u32) -> Option<(u32, i32)> {
    let bit = 1u32 << i;
    if mask & bit == 0 {
        return None;
    }
    let below = (mask & (bit - 1)).count_ones();
    Some((mask ^ bit, if below.is_multiple_of(2) { 1 } else { -1 }))
}

/// `e_U ⌟ x_W` for basis monomials.
#[inline]
pub fn contract_masks(u: u32, w: u32) -> Option<(u32, i32)> {
    if u & w != u {
        return None;
    }
    let mut sign = 1;
    let mut cur = w;
    let mut rest = u;
    // The innermost contraction is by the highest-index factor.
    while rest != 0 {
        let i = 31 - rest.leading_zeros();
        let (m, s) = contract_generator(i as usize, cur)?;
        cur = m;
        sign *= s;
        rest ^= 1 << i;
    }
    Some((cur, sign))
}

/// Sign `σ` with `e_{FULL∖T} ⌟ vol = σ · x_T`.
#[inline]
pub fn orientation_sign(t: u32) -> i32 {
    contract_masks(FULL_MASK ^ t, FULL_MASK).unwrap().1
}

/// Sign of the reversal anti-automorphism on `Λ^j`: `(-1)^(j(j-1)/2)`.
#[inline]
pub fn reversal_sign(j: usize) -> i32 {
    if (j * j.saturating_sub(1) / 2).is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// A homogeneous element of `Λ^j V`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct ExteriorElement {
    p: u32,
    degree: usize,
    coeffs: [u8; BASIS_SIZE],
}

impl ExteriorElement {
    pub fn zero(p: u32, degree: usize) -> Self {
        assert!(degree <= NVARS, "degree {degree} exceeds {NVARS}");
        Self {
            p,
            degree,
            coeffs: [0; BASIS_SIZE],
        }
    }

    pub fn one(p: u32) -> Self {
        Self::basis(p, 0)
    }

    pub fn basis(p: u32, mask: u32) -> Self {
        let mut e = Self::zero(p, mask.count_ones() as usize);
        e.coeffs[mask as usize] = 1;
        e
    }

    /// The generator `e_i`.
    pub fn generator(p: u32, i: usize) -> Self {
        Self::basis(p, 1 << i)
    }

    /// Product `e_{i1} ∧ … ∧ e_{ik}` in the given order.
    pub fn monomial(p: u32, indices: &[usize]) -> Self {
        indices.iter().fold(Self::one(p), |acc, &i| {
            acc.wedge(&Self::generator(p, i))
                .unwrap_or_else(|_| Self::zero(p, NVARS))
        })
    }

    /// Builds an element from `(mask, coefficient)` pairs of a common weight.
    pub fn from_terms(p: u32, degree: usize, terms: &[(u32, i64)]) -> Result<Self> {
        let mut e = Self::zero(p, degree);
        for &(mask, c) in terms {
            if mask.count_ones() as usize != degree || mask > FULL_MASK {
                return Err(Error::InvalidInput(format!(
                    "mask {mask:#b} is not of weight {degree}"
                )));
            }
            e.coeffs[mask as usize] =
                residue(e.coeffs[mask as usize] as i64 + c, p);
        }
        Ok(e)
    }

    pub fn prime(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn coeff(&self, mask: u32) -> u8 {
        self.coeffs[mask as usize]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    /// Nonzero terms in basis order.
    pub fn terms(&self) -> impl Iterator<Item = (u32, u8)> + '_ {
        basis_masks(self.degree as i32)
            .iter()
            .filter_map(|&m| {
                let c = self.coeffs[m as usize];
                (c != 0).then_some((m, c))
            })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.degree != other.degree && !self.is_zero() && !other.is_zero() {
            return Err(Error::InvalidInput(format!(
                "cannot add elements of degree {} and {}",
                self.degree, other.degree
            )));
        }
        let mut out = if self.is_zero() { *other } else { *self };
        for m in 0..BASIS_SIZE {
            out.coeffs[m] = ((self.coeffs[m] as u32 + other.coeffs[m] as u32) % self.p) as u8;
        }
        Ok(out)
    }

    pub fn scale(&self, c: u32) -> Self {
        let mut out = *self;
        for x in out.coeffs.iter_mut() {
            *x = ((*x as u32 * c) % self.p) as u8;
        }
        out
    }

    pub fn neg(&self) -> Self {
        self.scale(self.p - 1)
    }

    /// Exterior product. Fails when the degrees add up to more than `n`,
    /// where the product would be identically zero.
    pub fn wedge(&self, other: &Self) -> Result<Self> {
        let degree = self.degree + other.degree;
        if degree > NVARS {
            return Err(Error::InvalidInput(format!(
                "wedge degree {degree} exceeds {NVARS}"
            )));
        }
        let p = self.p;
        let mut acc = [0i64; BASIS_SIZE];
        for (s, a) in self.terms() {
            for (t, b) in other.terms() {
                let sign = wedge_sign(s, t);
                if sign != 0 {
                    acc[(s | t) as usize] += sign as i64 * a as i64 * b as i64;
                }
            }
        }
        let mut out = Self::zero(p, degree);
        for (m, v) in acc.iter().enumerate() {
            out.coeffs[m] = residue(*v, p);
        }
        Ok(out)
    }

    /// `self ⌟ x_w` as coefficients on `Λ^(k-j) W`, keyed by mask.
    pub fn contract(&self, w: u32) -> Vec<(u32, u8)> {
        let k = w.count_ones() as usize;
        if self.degree > k {
            return Vec::new();
        }
        let mut acc = [0i64; BASIS_SIZE];
        for (u, c) in self.terms() {
            if let Some((m, s)) = contract_masks(u, w) {
                acc[m as usize] += s as i64 * c as i64;
            }
        }
        basis_masks((k - self.degree) as i32)
            .iter()
            .filter_map(|&m| {
                let v = residue(acc[m as usize], self.p);
                (v != 0).then_some((m, v))
            })
            .collect()
    }

    /// Image under the reversal anti-automorphism.
    pub fn reversed(&self) -> Self {
        if reversal_sign(self.degree) == 1 {
            *self
        } else {
            self.neg()
        }
    }

    /// The element `u` with `u ⌟ vol = w`, for `w` given in the basis of
    /// `Λ^k W` (coefficient vector in [`basis_masks`] order).
    pub fn dual_of(p: u32, k: usize, w: &[u8]) -> Self {
        let masks = basis_masks(k as i32);
        assert_eq!(w.len(), masks.len());
        let mut out = Self::zero(p, NVARS - k);
        for (&t, &c) in masks.iter().zip(w) {
            if c != 0 {
                let s = orientation_sign(t);
                out.coeffs[(FULL_MASK ^ t) as usize] = residue(s as i64 * c as i64, p);
            }
        }
        out
    }

    /// Coefficients of `self ⌟ vol` in the basis of `Λ^(n-j) W`.
    pub fn to_dual(&self) -> Vec<u8> {
        let k = NVARS - self.degree;
        let mut out = vec![0u8; lambda_dim(k as i32)];
        for (u, c) in self.terms() {
            let (m, s) = contract_masks(u, FULL_MASK).unwrap();
            out[basis_index(m)] = residue(s as i64 * c as i64, self.p);
        }
        out
    }
}

impl fmt::Debug for ExteriorElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Renders like `e0*e1 - 2*e3*e4`, coefficients in the symmetric range.
impl fmt::Display for ExteriorElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (mask, c) in self.terms() {
            let c = crate::gf::symmetric(c, self.p);
            let mono = if mask == 0 {
                String::new()
            } else {
                (0..NVARS)
                    .filter(|i| mask >> i & 1 == 1)
                    .map(|i| format!("e{i}"))
                    .collect::<Vec<_>>()
                    .join("*")
            };
            let (neg, mag) = (c < 0, c.abs());
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            match (mag, mono.is_empty()) {
                (_, true) => write!(f, "{mag}")?,
                (1, false) => write!(f, "{mono}")?,
                (_, false) => write!(f, "{mag}*{mono}")?,
            }
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// A direct sum `⊕ ω_E(a_t)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct FreeModuleSpec {
    twists: Vec<i32>,
}

impl FreeModuleSpec {
    pub fn new(twists: Vec<i32>) -> Self {
        Self { twists }
    }

    /// `count` copies of `ω_E(twist)`.
    pub fn uniform(count: usize, twist: i32) -> Self {
        Self::new(vec![twist; count])
    }

    pub fn twists(&self) -> &[i32] {
        &self.twists
    }

    pub fn twist(&self, t: usize) -> i32 {
        self.twists[t]
    }

    pub fn rank(&self) -> usize {
        self.twists.len()
    }

    pub fn is_empty(&self) -> bool {
        self.twists.is_empty()
    }

    pub fn concat(&self, other: &Self) -> Self {
        let mut twists = self.twists.clone();
        twists.extend_from_slice(&other.twists);
        Self { twists }
    }

    /// Exterior weight `d + a_t` of summand `t` in internal degree `d`.
    pub fn weight(&self, t: usize, d: i32) -> i32 {
        d + self.twists[t]
    }

    /// Offsets of each summand inside the degree-`d` piece, plus total.
    pub fn piece_offsets(&self, d: i32) -> (Vec<usize>, usize) {
        let mut offsets = Vec::with_capacity(self.rank());
        let mut total = 0;
        for t in 0..self.rank() {
            offsets.push(total);
            total += lambda_dim(self.weight(t, d));
        }
        (offsets, total)
    }

    pub fn piece_dim(&self, d: i32) -> usize {
        self.piece_offsets(d).1
    }

    /// Internal degrees in which the module has nonzero pieces.
    pub fn degree_range(&self) -> Option<(i32, i32)> {
        let lo = self.twists.iter().map(|&a| -a).min()?;
        let hi = self.twists.iter().map(|&a| NVARS as i32 - a).max()?;
        Some((lo, hi))
    }

    /// The matrix of left multiplication by `e_i` from the degree-`d+1`
    /// piece to the degree-`d` piece.
    pub fn action_matrix(&self, p: u32, i: usize, d: i32) -> Matrix {
        let (src_off, src_dim) = self.piece_offsets(d + 1);
        let (dst_off, dst_dim) = self.piece_offsets(d);
        let mut m = Matrix::zeros(p, dst_dim, src_dim);
        for t in 0..self.rank() {
            for (j, &w) in basis_masks(self.weight(t, d + 1)).iter().enumerate() {
                if let Some((res, s)) = contract_generator(i, w) {
                    m.set(dst_off[t] + basis_index(res), src_off[t] + j, residue(s as i64, p));
                }
            }
        }
        m
    }

    /// Dual twists `-a_t`.
    pub fn dual(&self) -> Self {
        Self::new(self.twists.iter().map(|&a| -a).collect())
    }
}

/// A homomorphism `⊕ ω_E(a_c) → ⊕ ω_E(b_r)` given by a matrix of homogeneous
/// exterior elements; entry `(r, c)` has degree `a_c - b_r`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct EModuleMap {
    p: u32,
    source: FreeModuleSpec,
    target: FreeModuleSpec,
    entries: Vec<ExteriorElement>,
}

impl fmt::Debug for EModuleMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "EModuleMap {:?} -> {:?}",
            self.source.twists, self.target.twists
        )?;
        write!(f, "{}", self.render())
    }
}

/// Degree an entry must have, or `None` if no nonzero entry is possible.
fn entry_degree(source_twist: i32, target_twist: i32) -> Option<usize> {
    let j = source_twist - target_twist;
    (0..=NVARS as i32).contains(&j).then_some(j as usize)
}

impl EModuleMap {
    pub fn zero(p: u32, source: FreeModuleSpec, target: FreeModuleSpec) -> Self {
        let mut entries = Vec::with_capacity(source.rank() * target.rank());
        for r in 0..target.rank() {
            for c in 0..source.rank() {
                let j = entry_degree(source.twist(c), target.twist(r)).unwrap_or(0);
                entries.push(ExteriorElement::zero(p, j));
            }
        }
        Self {
            p,
            source,
            target,
            entries,
        }
    }

    /// Builds a map from row-major entries, checking entry degrees.
    pub fn new(
        p: u32,
        source: FreeModuleSpec,
        target: FreeModuleSpec,
        entries: Vec<ExteriorElement>,
    ) -> Result<Self> {
        if entries.len() != source.rank() * target.rank() {
            return Err(Error::InvalidInput(format!(
                "expected {} entries, got {}",
                source.rank() * target.rank(),
                entries.len()
            )));
        }
        let mut map = Self::zero(p, source, target);
        for (i, e) in entries.into_iter().enumerate() {
            let (r, c) = (i / map.source.rank(), i % map.source.rank());
            map.set(r, c, e)?;
        }
        Ok(map)
    }

    pub fn identity(p: u32, spec: FreeModuleSpec) -> Self {
        let mut m = Self::zero(p, spec.clone(), spec);
        for i in 0..m.source.rank() {
            m.entries[i * m.source.rank() + i] = ExteriorElement::one(p);
        }
        m
    }

    pub fn prime(&self) -> u32 {
        self.p
    }

    pub fn source(&self) -> &FreeModuleSpec {
        &self.source
    }

    pub fn target(&self) -> &FreeModuleSpec {
        &self.target
    }

    pub fn rows(&self) -> usize {
        self.target.rank()
    }

    pub fn cols(&self) -> usize {
        self.source.rank()
    }

    pub fn entry(&self, r: usize, c: usize) -> &ExteriorElement {
        &self.entries[r * self.cols() + c]
    }

    pub fn set(&mut self, r: usize, c: usize, e: ExteriorElement) -> Result<()> {
        let expected = entry_degree(self.source.twist(c), self.target.twist(r));
        if !e.is_zero() && expected != Some(e.degree()) {
            return Err(Error::InvalidInput(format!(
                "entry ({r},{c}) has degree {} but twists require {:?}",
                e.degree(),
                expected
            )));
        }
        let cols = self.cols();
        self.entries[r * cols + c] = if e.is_zero() {
            ExteriorElement::zero(self.p, expected.unwrap_or(0))
        } else {
            e
        };
        Ok(())
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero())
    }

    /// Degree-`d` piece: rows indexed by the target piece basis, columns by
    /// the source piece basis.
    pub fn graded_piece(&self, d: i32) -> Matrix {
        let (src_off, src_dim) = self.source.piece_offsets(d);
        let (dst_off, dst_dim) = self.target.piece_offsets(d);
        let mut m = Matrix::zeros(self.p, dst_dim, src_dim);
        for c in 0..self.cols() {
            let k = self.source.weight(c, d);
            let masks = basis_masks(k);
            if masks.is_empty() {
                continue;
            }
            for r in 0..self.rows() {
                let u = self.entry(r, c);
                if u.is_zero() || lambda_dim(self.target.weight(r, d)) == 0 {
                    continue;
                }
                let j = u.degree();
                let honest = if (j * (NVARS - k as usize)).is_multiple_of(2) { 1 } else { -1 };
                for (col, &w) in masks.iter().enumerate() {
                    for (um, uc) in u.terms() {
                        if let Some((res, s)) = contract_masks(um, w) {
                            let v = residue(honest * s as i64 * uc as i64, self.p) as u32;
                            m.add_to(dst_off[r] + basis_index(res), src_off[c] + col, v);
                        }
                    }
                }
            }
        }
        m
    }

    /// `self ∘ f`.
    pub fn compose(&self, f: &EModuleMap) -> Result<EModuleMap> {
        if f.target != self.source {
            return Err(Error::InvalidInput(format!(
                "cannot compose: {:?} vs {:?}",
                f.target.twists, self.source.twists
            )));
        }
        let mut out = Self::zero(self.p, f.source.clone(), self.target.clone());
        for r in 0..self.rows() {
            for c in 0..f.cols() {
                let mut acc: Option<ExteriorElement> = None;
                for k in 0..self.cols() {
                    let (a, b) = (f.entry(k, c), self.entry(r, k));
                    if a.is_zero() || b.is_zero() {
                        continue;
                    }
                    let prod = a.wedge(b)?;
                    acc = Some(match acc {
                        None => prod,
                        Some(x) => x.add(&prod)?,
                    });
                }
                if let Some(x) = acc {
                    out.set(r, c, x)?;
                }
            }
        }
        Ok(out)
    }

    /// Block map `(self | other)` on the direct sum of the sources.
    pub fn hconcat(&self, other: &EModuleMap) -> Result<EModuleMap> {
        if self.target != other.target {
            return Err(Error::InvalidInput("hconcat target mismatch".into()));
        }
        let source = self.source.concat(&other.source);
        let mut out = Self::zero(self.p, source, self.target.clone());
        for r in 0..self.rows() {
            for c in 0..self.cols() {
                out.set(r, c, *self.entry(r, c))?;
            }
            for c in 0..other.cols() {
                out.set(r, self.cols() + c, *other.entry(r, c))?;
            }
        }
        Ok(out)
    }

    /// Columns `cols` of the map, as a map from the corresponding summands.
    pub fn select_columns(&self, cols: &[usize]) -> EModuleMap {
        let source = FreeModuleSpec::new(cols.iter().map(|&c| self.source.twist(c)).collect());
        let mut out = Self::zero(self.p, source, self.target.clone());
        for r in 0..self.rows() {
            for (j, &c) in cols.iter().enumerate() {
                out.set(r, j, *self.entry(r, c)).unwrap();
            }
        }
        out
    }

    /// Left multiplication by a scalar matrix: the result has `scalars.rows()`
    /// target summands, all of twist `twist`.
    pub fn left_scalar(&self, scalars: &Matrix, twist: i32) -> Result<EModuleMap> {
        if scalars.cols() != self.rows() || self.target.twists.iter().any(|&t| t != twist) {
            return Err(Error::InvalidInput(
                "scalar matrix must match a uniformly twisted target".into(),
            ));
        }
        let target = FreeModuleSpec::uniform(scalars.rows(), twist);
        let mut out = Self::zero(self.p, self.source.clone(), target);
        for r in 0..scalars.rows() {
            for c in 0..self.cols() {
                let j = entry_degree(self.source.twist(c), twist).unwrap_or(0);
                let mut acc = ExteriorElement::zero(self.p, j);
                for k in 0..self.rows() {
                    let s = scalars.get(r, k) as u32;
                    if s != 0 {
                        acc = acc.add(&self.entry(k, c).scale(s))?;
                    }
                }
                out.set(r, c, acc)?;
            }
        }
        Ok(out)
    }

    /// The dual map `Hom_E(target, E) → Hom_E(source, E)`, realized on the
    /// negated twists with entries reversed so that
    /// `(g∘f)ᵀ = fᵀ∘gᵀ` holds exactly.
    pub fn transpose(&self) -> EModuleMap {
        let mut out = Self::zero(self.p, self.target.dual(), self.source.dual());
        for r in 0..self.rows() {
            for c in 0..self.cols() {
                out.set(c, r, self.entry(r, c).reversed()).unwrap();
            }
        }
        out
    }

    /// Text rendering, one row per line, entries separated by `|`.
    pub fn render(&self) -> String {
        let mut s = String::new();
        for r in 0..self.rows() {
            let row: Vec<String> = (0..self.cols()).map(|c| self.entry(r, c).to_string()).collect();
            s.push_str(&row.join(" | "));
            s.push('\n');
        }
        s
    }
}
