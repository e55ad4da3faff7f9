//! The symmetric-algebra side of the monad.
//!
//! A summand `ω_E(a)` of an `E`-module map corresponds to the bundle
//! `Ω^a(a)` on `P⁴`, whose twist by `n` has global sections
//! `ker(κ: Λ^a W ⊗ S_n → Λ^{a-1} W ⊗ S_{n+1})`. An entry `u ∈ Λ^j V`
//! acts on these Koszul representatives by `w ↦ ρ(u) ⌟ w` where `ρ` is the
//! reversal anti-automorphism, which makes composition of `E`-maps match
//! composition of bundle maps.
//!
//! Ambient coordinates of `Λ^a W ⊗ S_n` are `mask_index * dim S_n + monomial_index`
//! with masks in [`basis_masks`] order and monomials in decreasing degrevlex.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::extalg::{
    basis_index, basis_masks, contract_generator, contract_masks, lambda_dim, reversal_sign,
    EModuleMap, ExteriorElement, FreeModuleSpec, NVARS,
};
use crate::gf::{residue, EchelonBasis, Matrix, Reducer};
use crate::monad::MonadData;
use crate::poly::{dim_s, Monomial, MonomialBasis, Polynomial};

/// Degree of the target line bundle `𝒪(PSI_DEGREE)` of the embedding section.
pub const PSI_DEGREE: u32 = 4;

/// Hilbert polynomial of the surface: `6m² − 6m + 1`.
pub fn expected_hilbert(m: i64) -> i64 {
    6 * m * m - 6 * m + 1
}

fn monomial_basis(d: u32) -> Arc<MonomialBasis> {
    static CACHE: OnceLock<Mutex<HashMap<u32, Arc<MonomialBasis>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(b) = cache.lock().unwrap().get(&d) {
        return b.clone();
    }
    let b = Arc::new(MonomialBasis::new(d));
    cache.lock().unwrap().entry(d).or_insert(b).clone()
}

/// `κ: Λ^p W ⊗ S_m → Λ^{p−1} W ⊗ S_{m+1}`, `w ⊗ f ↦ Σ_i (e_i ⌟ w) ⊗ x_i f`.
pub fn koszul_differential(prime: u32, p: usize, m: u32) -> Matrix {
    let src = monomial_basis(m);
    let dst = monomial_basis(m + 1);
    let rows = lambda_dim(p as i32 - 1) * dst.len();
    let cols = lambda_dim(p as i32) * src.len();
    let mut k = Matrix::zeros(prime, rows, cols);
    if rows == 0 {
        return k;
    }
    for (wi, &w) in basis_masks(p as i32).iter().enumerate() {
        for (fi, f) in src.monomials().iter().enumerate() {
            for i in 0..NVARS {
                if let Some((res, s)) = contract_generator(i, w) {
                    let g = f.mul(&Monomial::var(i));
                    let r = basis_index(res) * dst.len() + dst.index_of(&g);
                    k.set(r, wi * src.len() + fi, residue(s as i64, prime));
                }
            }
        }
    }
    k
}

/// Global sections of `Ω^p(p + m)` as a subspace of `Λ^p W ⊗ S_m`.
#[derive(Clone, Debug)]
pub struct KoszulSpace {
    pub p: usize,
    pub m: u32,
    /// One section per row, in reduced echelon form.
    vectors: Matrix,
}

impl KoszulSpace {
    pub fn dim(&self) -> usize {
        self.vectors.rows()
    }

    pub fn ambient_dim(&self) -> usize {
        self.vectors.cols()
    }

    pub fn vectors(&self) -> &Matrix {
        &self.vectors
    }

    /// Basis as columns.
    pub fn basis(&self) -> Matrix {
        self.vectors.transpose()
    }
}

/// Basis of `ker κ` on `Λ^p W ⊗ S_m`. Cached per `(prime, p, m)`.
///
/// Away from `(p, m) = (0, 0)` the Koszul complex is exact, so the kernel is
/// computed as the image of the previous differential, which is much smaller.
pub fn koszul_sections(prime: u32, p: usize, m: u32) -> Arc<KoszulSpace> {
    type Cache = Mutex<HashMap<(u32, usize, u32), Arc<KoszulSpace>>>;
    static CACHE: OnceLock<Cache> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(k) = cache.lock().unwrap().get(&(prime, p, m)) {
        return k.clone();
    }
    let ambient = lambda_dim(p as i32) * dim_s(m as i64);
    let vectors = if p == 0 {
        Matrix::identity(prime, ambient)
    } else if m == 0 {
        Matrix::zeros(prime, 0, ambient)
    } else {
        koszul_differential(prime, p + 1, m - 1).transpose().row_space()
    };
    let k = Arc::new(KoszulSpace { p, m, vectors });
    cache.lock().unwrap().entry((prime, p, m)).or_insert(k).clone()
}

/// `ρ(u) ⌟ −` as a matrix `Λ^a W → Λ^{a−j} W`.
pub fn bundle_block(u: &ExteriorElement, a: usize) -> Matrix {
    let p = u.prime();
    let j = u.degree();
    let rows = if j <= a { lambda_dim((a - j) as i32) } else { 0 };
    let mut m = Matrix::zeros(p, rows, lambda_dim(a as i32));
    if rows == 0 {
        return m;
    }
    let rho = reversal_sign(j) as i64;
    for (ci, &w) in basis_masks(a as i32).iter().enumerate() {
        for (res, c) in u.contract(w) {
            m.set(basis_index(res), ci, residue(rho * c as i64, p));
        }
    }
    m
}

fn summand_index(spec: &FreeModuleSpec, k: usize) -> Result<usize> {
    let a = spec.twist(k);
    if !(0..=NVARS as i32).contains(&a) {
        return Err(Error::InvalidInput(format!("twist {a} has no Ω-bundle")));
    }
    Ok(a as usize)
}

/// Offsets of each summand block in the ambient space at twist `n`.
pub fn ambient_offsets(spec: &FreeModuleSpec, n: u32) -> (Vec<usize>, usize) {
    let ds = dim_s(n as i64);
    let mut offs = Vec::with_capacity(spec.rank());
    let mut acc = 0;
    for &a in spec.twists() {
        offs.push(acc);
        acc += lambda_dim(a) * ds;
    }
    (offs, acc)
}

/// Applies the bundle map of `map` to ambient vectors (one per row).
pub fn apply_ambient(map: &EModuleMap, n: u32, vectors: &Matrix) -> Result<Matrix> {
    let p = map.prime();
    let ds = dim_s(n as i64);
    let (soff, sdim) = ambient_offsets(map.source(), n);
    let (toff, tdim) = ambient_offsets(map.target(), n);
    if vectors.cols() != sdim {
        return Err(Error::InvalidInput(format!(
            "vectors have length {}, expected {sdim}",
            vectors.cols()
        )));
    }
    let mut blocks = Vec::new();
    for c in 0..map.cols() {
        let a = summand_index(map.source(), c)?;
        for r in 0..map.rows() {
            let u = map.entry(r, c);
            if u.is_zero() {
                continue;
            }
            let blk = bundle_block(u, a);
            for ri in 0..blk.rows() {
                for ci in 0..blk.cols() {
                    let v = blk.get(ri, ci);
                    if v != 0 {
                        blocks.push((toff[r] + ri * ds, soff[c] + ci * ds, v));
                    }
                }
            }
        }
    }
    let red = Reducer::new(p);
    let mut out = Matrix::zeros(p, vectors.rows(), tdim);
    for i in 0..vectors.rows() {
        let src = vectors.row(i);
        let dst = out.row_mut(i);
        for &(t, s, v) in &blocks {
            red.axpy(&mut dst[t..t + ds], &src[s..s + ds], v);
        }
    }
    Ok(out)
}

/// Block-diagonal section basis of `⊕ Ω^{a_k}(a_k + n)`, one section per row.
pub fn section_basis(prime: u32, spec: &FreeModuleSpec, n: u32) -> Result<Matrix> {
    let (offs, total) = ambient_offsets(spec, n);
    let spaces: Vec<Arc<KoszulSpace>> = (0..spec.rank())
        .map(|k| Ok(koszul_sections(prime, summand_index(spec, k)?, n)))
        .collect::<Result<_>>()?;
    let rows: usize = spaces.iter().map(|s| s.dim()).sum();
    let mut out = Matrix::zeros(prime, rows, total);
    let mut r = 0;
    for (k, sp) in spaces.iter().enumerate() {
        for i in 0..sp.dim() {
            out.row_mut(r)[offs[k]..offs[k] + sp.ambient_dim()]
                .copy_from_slice(sp.vectors().row(i));
            r += 1;
        }
    }
    Ok(out)
}

/// Degreewise hypercohomology of the monad at one twist.
#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct MonadH0 {
    pub n: u32,
    pub h0: usize,
    /// Only computed at `n = 0`.
    pub h1: Option<usize>,
    pub source_sections: usize,
    pub middle_sections: usize,
    pub target_sections: usize,
    pub rank_a: usize,
    pub kernel_b: usize,
    /// Rows: coefficients on the middle section basis spanning `ker H⁰B`.
    #[serde(skip)]
    pub kernel_basis: Matrix,
}

/// `h⁰` of the monad homology twisted by `n`.
pub fn monad_h0(data: &MonadData, n: u32) -> Result<MonadH0> {
    let p = data.b.prime();
    let src_sec = section_basis(p, data.a.source(), n)?;
    let mid_sec = section_basis(p, data.b.source(), n)?;
    let tgt_dim = section_basis(p, data.b.target(), n)?.rows();
    let b_img = apply_ambient(&data.b, n, &mid_sec)?;
    let a_img = apply_ambient(&data.a, n, &src_sec)?;
    if !apply_ambient(&data.b, n, &a_img)?.is_zero() {
        return Err(Error::MonadDefect(format!("H⁰(B∘A) ≠ 0 at twist {n}")));
    }
    let rank_a = a_img.rank();
    if rank_a != src_sec.rows() {
        return Err(Error::MonadDefect(format!(
            "H⁰A not injective at twist {n}: rank {rank_a} of {}",
            src_sec.rows()
        )));
    }
    // Sections y with B(y) = 0, as rows.
    let kernel_basis = b_img.left_kernel_basis();
    let kernel_b = kernel_basis.rows();
    let rank_b = mid_sec.rows() - kernel_b;
    let (h0, h1) = if n == 0 {
        if src_sec.rows() != 0 || mid_sec.rows() != 0 {
            return Err(Error::MonadDefect(
                "H⁰ of the outer terms is nonzero at twist 0".into(),
            ));
        }
        (0, Some(tgt_dim - rank_b))
    } else {
        (kernel_b - rank_a, None)
    };
    Ok(MonadH0 {
        n,
        h0,
        h1,
        source_sections: src_sec.rows(),
        middle_sections: mid_sec.rows(),
        target_sections: tgt_dim,
        rank_a,
        kernel_b,
        kernel_basis,
    })
}

/// A map `⊕ Ω^{a_k}(a_k) → 𝒪(PSI_DEGREE)` given by components
/// `ψ_k ∈ Λ^{a_k} V ⊗ S_PSI_DEGREE`, acting by full contraction and
/// multiplication: `ψ_k(x_w ⊗ f) = Σ_g ψ_k[w, g] · σ(w) · g f` with
/// `σ(w) = e_w ⌟ x_w`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SectionMap {
    pub prime: u32,
    pub twists: Vec<i32>,
    /// Concatenated components; component `k` is indexed
    /// `mask_index * dim S_4 + monomial_index`.
    pub coeffs: Vec<u8>,
}

impl SectionMap {
    pub fn param_offsets(twists: &[i32]) -> (Vec<usize>, usize) {
        let spec = FreeModuleSpec::new(twists.to_vec());
        ambient_offsets(&spec, PSI_DEGREE)
    }

    pub fn scaled(&self, c: u8) -> Self {
        let p = self.prime;
        Self {
            coeffs: self.coeffs.iter().map(|&x| ((x as u32 * c as u32) % p) as u8).collect(),
            ..self.clone()
        }
    }

    /// Images of ambient vectors at twist `n` (rows) in `S_{n+4}` (rows).
    pub fn apply(&self, n: u32, vectors: &Matrix) -> Result<Matrix> {
        let p = self.prime;
        let spec = FreeModuleSpec::new(self.twists.clone());
        let (offs, total) = ambient_offsets(&spec, n);
        if vectors.cols() != total {
            return Err(Error::InvalidInput("ambient length mismatch".into()));
        }
        let (poffs, _) = Self::param_offsets(&self.twists);
        let src = monomial_basis(n);
        let quart = monomial_basis(PSI_DEGREE);
        let dst = monomial_basis(n + PSI_DEGREE);
        // For each ambient coordinate: (target index, coefficient) pairs.
        let mut action: Vec<Vec<(usize, u8)>> = vec![Vec::new(); total];
        for (k, &a) in self.twists.iter().enumerate() {
            for (wi, &w) in basis_masks(a).iter().enumerate() {
                let sigma = contract_masks(w, w).unwrap().1 as i64;
                let base = poffs[k] + wi * quart.len();
                let comps: Vec<(Monomial, u8)> = (0..quart.len())
                    .filter(|&g| self.coeffs[base + g] != 0)
                    .map(|g| (quart.get(g), residue(sigma * self.coeffs[base + g] as i64, p)))
                    .collect();
                for (fi, f) in src.monomials().iter().enumerate() {
                    action[offs[k] + wi * src.len() + fi] = comps
                        .iter()
                        .map(|&(g, c)| (dst.index_of(&g.mul(f)), c))
                        .collect();
                }
            }
        }
        let mut out = Matrix::zeros(p, vectors.rows(), dst.len());
        for i in 0..vectors.rows() {
            let mut acc = vec![0u32; dst.len()];
            for (j, &v) in vectors.row(i).iter().enumerate() {
                if v == 0 {
                    continue;
                }
                for &(t, c) in &action[j] {
                    acc[t] = (acc[t] + v as u32 * c as u32) % p;
                }
            }
            for (o, a) in out.row_mut(i).iter_mut().zip(acc) {
                *o = a as u8;
            }
        }
        Ok(out)
    }
}

/// The embedding section together with the bookkeeping of its solution space.
#[derive(Clone, Debug)]
pub struct EmbeddingSolution {
    pub psi: SectionMap,
    /// Nullity of the constraint matrix `ψ∘A = 0` on sections of `Ω³(4)`.
    pub nullity: usize,
    /// Parameters acting as zero on all sections at twist 1.
    pub redundancy: usize,
    /// Rank of the maps `q∘B` modulo the redundant parameters.
    pub factoring: usize,
    /// `nullity − redundancy`.
    pub solution_dim: usize,
    /// Basis of redundant + factoring parameters; adding any combination
    /// to `ψ` leaves the ideal unchanged.
    pub gauge: Vec<Vec<u8>>,
}

impl EmbeddingSolution {
    /// Dimension of the solution space modulo the gauge.
    pub fn essential_dim(&self) -> usize {
        self.solution_dim - self.factoring
    }
}

/// Matrix whose columns are the parameters of `ψ` and whose rows are the
/// `S_{n+4}`-coefficients of `ψ(v)` for the given ambient vectors `v`.
fn psi_action_matrix(prime: u32, twists: &[i32], n: u32, vectors: &Matrix) -> Result<Matrix> {
    let (poffs, ptotal) = SectionMap::param_offsets(twists);
    let spec = FreeModuleSpec::new(twists.to_vec());
    let (offs, _) = ambient_offsets(&spec, n);
    let src = monomial_basis(n);
    let quart = monomial_basis(PSI_DEGREE);
    let dst = monomial_basis(n + PSI_DEGREE);
    let nrows = vectors.rows() * dst.len();
    let mut m = Matrix::zeros(prime, nrows, ptotal);
    for (k, &a) in twists.iter().enumerate() {
        for (wi, &w) in basis_masks(a).iter().enumerate() {
            let sigma = contract_masks(w, w).unwrap().1 as i64;
            for v in 0..vectors.rows() {
                let row = vectors.row(v);
                for (fi, f) in src.monomials().iter().enumerate() {
                    let y = row[offs[k] + wi * src.len() + fi];
                    if y == 0 {
                        continue;
                    }
                    let c = residue(sigma * y as i64, prime) as u32;
                    for (gi, g) in quart.monomials().iter().enumerate() {
                        let r = v * dst.len() + dst.index_of(&g.mul(f));
                        let col = poffs[k] + wi * quart.len() + gi;
                        m.add_to(r, col, c);
                    }
                }
            }
        }
    }
    Ok(m)
}

/// Solves for `ψ` with `ψ∘A = 0` and picks the canonical representative:
/// the first echelon basis vector of the solution space not in the gauge
/// subspace, reduced modulo the gauge and made monic.
pub fn embedding_section(data: &MonadData) -> Result<EmbeddingSolution> {
    let p = data.b.prime();
    let twists = data.b.source().twists().to_vec();
    let (poffs, ptotal) = SectionMap::param_offsets(&twists);

    let a_img = apply_ambient(&data.a, 1, &section_basis(p, data.a.source(), 1)?)?;
    let constraints = psi_action_matrix(p, &twists, 1, &a_img)?;
    let solutions = constraints.kernel_basis();
    let nullity = solutions.cols();

    let mid = section_basis(p, data.b.source(), 1)?;
    let redundant = psi_action_matrix(p, &twists, 1, &mid)?.kernel_basis();

    let mut gauge = EchelonBasis::new(p, ptotal);
    for c in 0..redundant.cols() {
        gauge.insert(&redundant.column(c));
    }
    let redundancy = gauge.rank();
    // q∘B: ψ_k[T, g] = ρ(j)·B_{rk}[T] for each target r and quartic g.
    let quart = monomial_basis(PSI_DEGREE);
    for r in 0..data.b.rows() {
        for g in 0..quart.len() {
            let mut v = vec![0u8; ptotal];
            for (k, &a) in twists.iter().enumerate() {
                let u = data.b.entry(r, k);
                let rho = reversal_sign(u.degree()) as i64;
                for (t, c) in u.terms() {
                    let wi = basis_index(t);
                    debug_assert_eq!(t.count_ones() as i32, a);
                    v[poffs[k] + wi * quart.len() + g] = residue(rho * c as i64, p);
                }
            }
            gauge.insert(&v);
        }
    }
    let factoring = gauge.rank() - redundancy;
    let solution_dim = nullity - redundancy;
    let expected = 3 * dim_s(PSI_DEGREE as i64) + 1;
    if solution_dim != expected {
        log::warn!("embedding solution space has dimension {solution_dim}, expected {expected}");
    }
    let psi = (0..nullity)
        .map(|c| gauge.reduce(&solutions.column(c)))
        .find(|v| v.iter().any(|&x| x != 0))
        .ok_or_else(|| Error::MonadDefect("every solution factors through B".into()))?;
    let lead = *psi.iter().find(|&&x| x != 0).unwrap();
    let inv = crate::gf::inv_mod(lead as u32, p).unwrap() as u8;
    let psi = SectionMap {
        prime: p,
        twists,
        coeffs: psi,
    }
    .scaled(inv);
    Ok(EmbeddingSolution {
        psi,
        nullity,
        redundancy,
        factoring,
        solution_dim,
        gauge: gauge.basis().to_vec(),
    })
}

/// A graded piece `I_m` of the ideal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdealSlice {
    pub degree: u32,
    /// Reduced echelon basis over the degrevlex monomial basis of `S_m`.
    pub basis: Vec<Polynomial>,
}

impl IdealSlice {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn coefficient_rows(&self) -> Vec<Vec<u8>> {
        let mb = monomial_basis(self.degree);
        self.basis.iter().map(|f| mb.coefficients(f)).collect()
    }

    /// Whether `f ∈ I_m`.
    pub fn contains(&self, f: &Polynomial) -> bool {
        let p = f.prime();
        let mb = monomial_basis(self.degree);
        let mut ech = EchelonBasis::new(p, mb.len());
        for r in self.coefficient_rows() {
            ech.insert(&r);
        }
        ech.contains(&mb.coefficients(f))
    }
}

/// `I_m = ψ(ker H⁰B at twist m − 4)` for each requested degree.
pub fn ideal_slices(data: &MonadData, psi: &SectionMap, degrees: &[u32]) -> Result<Vec<IdealSlice>> {
    let p = data.b.prime();
    degrees
        .iter()
        .map(|&m| {
            if m <= PSI_DEGREE {
                return Err(Error::InvalidInput(format!("slice degree {m} must exceed {PSI_DEGREE}")));
            }
            let n = m - PSI_DEGREE;
            let h = monad_h0(data, n)?;
            let mid = section_basis(p, data.b.source(), n)?;
            let images = psi.apply(n, &mid)?;
            let slice = h.kernel_basis.mul(&images)?.row_space();
            if slice.rows() != h.h0 {
                return Err(Error::MonadDefect(format!(
                    "slice of degree {m} has dimension {}, expected h⁰ = {}",
                    slice.rows(),
                    h.h0
                )));
            }
            let mb = monomial_basis(m);
            let basis = (0..slice.rows()).map(|r| mb.polynomial(p, slice.row(r))).collect();
            Ok(IdealSlice { degree: m, basis })
        })
        .collect()
}

/// Minimal generators in the given consecutive slices: the lowest slice,
/// then in each next degree a canonical complement of `W · I_{m−1}`.
pub fn minimal_generators(slices: &[IdealSlice]) -> Vec<Polynomial> {
    let mut out = Vec::new();
    let mut prev: Option<&IdealSlice> = None;
    for s in slices {
        let p = s.basis.first().map_or(crate::gf::DEFAULT_PRIME, |f| f.prime());
        let mb = monomial_basis(s.degree);
        let mut ech = EchelonBasis::new(p, mb.len());
        if let Some(pr) = prev.filter(|pr| pr.degree + 1 == s.degree) {
            for f in &pr.basis {
                for i in 0..NVARS {
                    ech.insert(&mb.coefficients(&f.mul_monomial(&Monomial::var(i))));
                }
            }
        }
        for f in &s.basis {
            if ech.insert(&mb.coefficients(f)) {
                out.push(f.clone());
            }
        }
        prev = Some(s);
    }
    out
}

/// Rank of `W ⊗ I_m → S_{m+1}`.
pub fn multiplication_rank(slice: &IdealSlice) -> usize {
    let p = slice.basis.first().map_or(crate::gf::DEFAULT_PRIME, |f| f.prime());
    let mb = monomial_basis(slice.degree + 1);
    let mut ech = EchelonBasis::new(p, mb.len());
    for f in &slice.basis {
        for i in 0..NVARS {
            ech.insert(&mb.coefficients(&f.mul_monomial(&Monomial::var(i))));
        }
    }
    ech.rank()
}

/// Result of fitting `h⁰𝒪_X(m) = dim S_m − dim I_m` by a quadratic.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct HilbertFit {
    /// `(m, dim S_m − dim I_m)`.
    pub values: Vec<(u32, i64)>,
    /// `[c0, c1, c2]` of `c2 m² + c1 m + c0`.
    pub coefficients: [i64; 3],
    pub degree: i64,
    pub sectional_genus: i64,
    pub chi: i64,
}

/// Exact quadratic fit through consecutive slices.
pub fn hilbert_fit(slices: &[IdealSlice]) -> Result<HilbertFit> {
    if slices.len() < 4 {
        return Err(Error::InvalidInput("need at least 4 consecutive degrees".into()));
    }
    if slices.windows(2).any(|w| w[1].degree != w[0].degree + 1) {
        return Err(Error::InvalidInput("degrees must be consecutive".into()));
    }
    let values: Vec<(u32, i64)> = slices
        .iter()
        .map(|s| (s.degree, dim_s(s.degree as i64) as i64 - s.dim() as i64))
        .collect();
    // Second differences are constant iff the values are quadratic.
    let v: Vec<i64> = values.iter().map(|x| x.1).collect();
    let second: Vec<i64> = v.windows(3).map(|w| w[2] - 2 * w[1] + w[0]).collect();
    if second.windows(2).any(|w| w[0] != w[1]) || second[0] % 2 != 0 {
        return Err(Error::NotPolynomialYet(format!("values {v:?} are not quadratic")));
    }
    let c2 = second[0] / 2;
    let m0 = values[0].0 as i64;
    let c1 = (v[1] - v[0]) - c2 * (2 * m0 + 1);
    let c0 = v[0] - c2 * m0 * m0 - c1 * m0;
    let degree = 2 * c2;
    // P(m) = (d/2)m² + (d/2 − π + 1)m + χ
    let sectional_genus = c2 - c1 + 1;
    Ok(HilbertFit {
        values,
        coefficients: [c0, c1, c2],
        degree,
        sectional_genus,
        chi: c0,
    })
}

/// Slice degrees used by [`reconstruct_ideal`].
pub const RECONSTRUCTION_DEGREES: [u32; 6] = [5, 6, 7, 8, 9, 10];

/// Everything recovered from a monad on the symmetric side.
#[derive(Clone, Debug)]
pub struct Reconstruction {
    pub embedding: EmbeddingSolution,
    pub slices: Vec<IdealSlice>,
    pub fit: HilbertFit,
    pub generators: Vec<Polynomial>,
}

/// Embedding section, ideal slices in `degrees`, Hilbert fit and minimal
/// generators.
pub fn reconstruct_ideal(data: &MonadData, degrees: &[u32]) -> Result<Reconstruction> {
    let embedding = embedding_section(data)?;
    let slices = ideal_slices(data, &embedding.psi, degrees)?;
    let fit = hilbert_fit(&slices)?;
    let generators = minimal_generators(&slices);
    Ok(Reconstruction {
        embedding,
        slices,
        fit,
        generators,
    })
}

/// A finitely many graded pieces `M_lo..M_hi` of a graded `S`-module with
/// the multiplication maps `x_j: M_i → M_{i+1}` (matrices acting on columns).
#[derive(Clone, Debug)]
pub struct GradedModule {
    pub prime: u32,
    pub lo: i32,
    pub dims: Vec<usize>,
    /// `mult[i - lo][j]` is `x_j: M_i → M_{i+1}`.
    pub mult: Vec<[Matrix; NVARS]>,
}

impl GradedModule {
    pub fn hi(&self) -> i32 {
        self.lo + self.dims.len() as i32 - 1
    }

    pub fn dim(&self, i: i32) -> usize {
        if i < self.lo || i > self.hi() {
            0
        } else {
            self.dims[(i - self.lo) as usize]
        }
    }

    /// `S` itself in degrees `lo..=hi` (`lo ≥ 0`).
    pub fn polynomial_ring(prime: u32, lo: i32, hi: i32) -> Self {
        let dims = (lo..=hi).map(|d| dim_s(d as i64)).collect();
        let mult = (lo..hi)
            .map(|d| {
                let src = monomial_basis(d as u32);
                let dst = monomial_basis(d as u32 + 1);
                std::array::from_fn(|j| {
                    let mut m = Matrix::zeros(prime, dst.len(), src.len());
                    for (c, f) in src.monomials().iter().enumerate() {
                        m.set(dst.index_of(&f.mul(&Monomial::var(j))), c, 1);
                    }
                    m
                })
            })
            .collect();
        Self {
            prime,
            lo,
            dims,
            mult,
        }
    }

    /// The residue field `K = S/(x)` in degree 0, zero elsewhere.
    pub fn residue_field(prime: u32, lo: i32, hi: i32) -> Self {
        let dims: Vec<usize> = (lo..=hi).map(|d| usize::from(d == 0)).collect();
        let mult = (lo..hi)
            .map(|d| {
                std::array::from_fn(|_| {
                    Matrix::zeros(prime, usize::from(d + 1 == 0), usize::from(d == 0))
                })
            })
            .collect();
        Self {
            prime,
            lo,
            dims,
            mult,
        }
    }

    fn x(&self, i: i32, j: usize) -> &Matrix {
        &self.mult[(i - self.lo) as usize][j]
    }

    /// Multiplication commutes on the window.
    pub fn is_commutative(&self) -> bool {
        (self.lo..self.hi() - 1).all(|i| {
            (0..NVARS).all(|a| {
                (0..NVARS).all(|b| {
                    let ab = self.x(i + 1, a).mul(self.x(i, b)).unwrap();
                    let ba = self.x(i + 1, b).mul(self.x(i, a)).unwrap();
                    ab == ba
                })
            })
        })
    }

    /// `Hom(Λ^k V, M_i) → Hom(Λ^{k−1} V, M_{i+1})`,
    /// `α ↦ (e ↦ Σ_j x_j α(e_j ∧ e))`. Coordinates `mask_index * dim M + basis`.
    pub fn tate_differential(&self, i: i32, k: usize) -> Matrix {
        let (ds, dt) = (self.dim(i), self.dim(i + 1));
        let rows = if k == 0 { 0 } else { lambda_dim(k as i32 - 1) * dt };
        let mut d = Matrix::zeros(self.prime, rows, lambda_dim(k as i32) * ds);
        if rows == 0 || ds == 0 || dt == 0 {
            return d;
        }
        for (si, &s) in basis_masks(k as i32 - 1).iter().enumerate() {
            for j in 0..NVARS {
                if s & (1 << j) != 0 {
                    continue;
                }
                let sign = crate::extalg::wedge_sign(1 << j, s) as i64;
                let ti = basis_index(s | (1 << j));
                let x = self.x(i, j);
                for r in 0..dt {
                    for c in 0..ds {
                        let v = x.get(r, c);
                        if v != 0 {
                            d.add_to(si * dt + r, ti * ds + c, residue(sign * v as i64, self.prime) as u32);
                        }
                    }
                }
            }
        }
        d
    }
}

/// Exactness of the truncated Tate complex at one position.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct TatePosition {
    pub position: i32,
    pub exact: bool,
    /// `dim ker / im` summed over all exterior degrees.
    pub homology: usize,
    pub composes_to_zero: bool,
}

/// Builds `F^i = Hom_K(E, M_i)` with its differential and reports exactness
/// at each position whose neighbours both lie in the window.
pub fn tate_truncation_exactness(module: &GradedModule) -> Result<Vec<TatePosition>> {
    if !module.is_commutative() {
        return Err(Error::InvalidInput("multiplication maps do not commute".into()));
    }
    let mut out = Vec::new();
    for i in module.lo + 1..module.hi() {
        let mut homology = 0;
        let mut composes_to_zero = true;
        for k in 0..=NVARS {
            let dim = lambda_dim(k as i32) * module.dim(i);
            let d_in = module.tate_differential(i - 1, k + 1);
            let d_out = module.tate_differential(i, k);
            let rank_in = if k < NVARS { d_in.rank() } else { 0 };
            if k < NVARS && d_in.rows() > 0 && d_out.rows() > 0 && d_in.cols() > 0 {
                composes_to_zero &= d_out.mul(&d_in)?.is_zero();
            }
            homology += dim - rank_in - d_out.rank();
        }
        out.push(TatePosition {
            position: i,
            exact: homology == 0,
            homology,
            composes_to_zero,
        });
    }
    Ok(out)
}
