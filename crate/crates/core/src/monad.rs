//! The monad construction for the twisted ideal sheaf `I_X(4)`:
//!
//! ```text
//! 4Ω³(3) --A--> 2Ω²(2) ⊕ 2Ω¹(1) --B--> 3𝒪
//! ```
//!
//! realized over `E` as `4ω(3) → 2ω(2) ⊕ 2ω(1) → 3ω → 4ω(-2)` with
//! `B = (B₂ | B₁)` and `C = c·φ`. A point `[c] ∈ G(10,4)` is a member when
//! the degree-3 complex `2Λ⁴W → 3Λ³W → 4W` has two-dimensional middle
//! homology; its homology classes give `B₂`, and the syzygies of `B` in
//! internal degree 2 give `A`.

use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::OnceLock;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::eres::{self, betti_table_of, minimal_resolution, BettiTable, PresentedEModule};
use crate::error::{Error, Result};
use crate::extalg::{lambda_dim, EModuleMap, ExteriorElement, FreeModuleSpec, NVARS};
use crate::gf::{check_prime, residue, symmetric, EchelonBasis, Matrix};

/// Rows of the representing matrix `c`.
pub const QUOTIENT_RANK: usize = 4;
/// `dim T`, the number of columns of `c`.
pub const T_DIM: usize = 10;
/// Dimension of the Hilbert scheme of cubic scrolls in `P(V)`, which the
/// normalization of `B₁` accounts for.
pub const SCROLL_DIM: usize = 18;

const REFERENCE_CANDIDATE_JSON: &str = include_str!("../fixtures/reference_candidate.json");

fn two_form(p: u32, terms: &[(i64, usize, usize)]) -> ExteriorElement {
    let mut acc = ExteriorElement::zero(p, 2);
    for &(c, i, j) in terms {
        let m = ExteriorElement::monomial(p, &[i, j]).scale(residue(c, p) as u32);
        acc = acc.add(&m).expect("two-forms add");
    }
    acc
}

/// `B₁ : 2ω(1) → 3ω`, the matrix `((e0,e1),(e1,e2),(e3,e4))`.
pub fn build_b1(p: u32) -> EModuleMap {
    let e = |i| ExteriorElement::generator(p, i);
    EModuleMap::new(
        p,
        FreeModuleSpec::uniform(2, 1),
        FreeModuleSpec::uniform(3, 0),
        vec![e(0), e(1), e(1), e(2), e(3), e(4)],
    )
    .expect("B1 entries are 1-forms")
}

/// Reference presentation `φ : 3ω → 10ω(-2)` of the cokernel `T`.
pub fn reference_phi(p: u32) -> EModuleMap {
    let z = || ExteriorElement::zero(p, 2);
    let f = |t: &[(i64, usize, usize)]| two_form(p, t);
    let rows: Vec<[ExteriorElement; 3]> = vec![
        [z(), z(), f(&[(1, 3, 4)])],
        [z(), f(&[(-1, 3, 4)]), f(&[(1, 2, 3), (-1, 1, 4)])],
        [f(&[(-1, 3, 4)]), z(), f(&[(1, 1, 3), (-1, 0, 4)])],
        [z(), f(&[(1, 1, 4), (-1, 2, 3)]), f(&[(1, 1, 2)])],
        [
            f(&[(1, 2, 3), (-1, 1, 4)]),
            f(&[(1, 1, 3), (-1, 0, 4)]),
            f(&[(-1, 0, 2)]),
        ],
        [f(&[(1, 0, 4), (-1, 1, 3)]), z(), f(&[(1, 0, 1)])],
        [z(), f(&[(1, 1, 2)]), z()],
        [f(&[(1, 1, 2)]), f(&[(1, 0, 2)]), z()],
        [f(&[(1, 0, 2)]), f(&[(1, 0, 1)]), z()],
        [f(&[(1, 0, 1)]), z(), z()],
    ];
    EModuleMap::new(
        p,
        FreeModuleSpec::uniform(3, 0),
        FreeModuleSpec::uniform(T_DIM, -2),
        rows.into_iter().flatten().collect(),
    )
    .expect("phi entries are 2-forms")
}

/// Derives a presentation of `T = coker(B₁ in degree 2)` from the left
/// kernel of the degree-2 piece of `B₁`, in canonical echelon form.
pub fn derive_phi(p: u32) -> Result<EModuleMap> {
    let b1 = build_b1(p);
    let piece = b1.graded_piece(2);
    let left = piece.left_kernel_basis();
    if left.rows() != T_DIM {
        return Err(Error::InternalInconsistency(format!(
            "dim T = {}, expected {T_DIM}",
            left.rows()
        )));
    }
    // Degree-2 piece of an entry u ∈ Λ²V on Λ²W is the pairing w ↦ u⌟w,
    // which is perfect; invert it basis-wise.
    let masks = crate::extalg::basis_masks(2);
    let per = masks.len();
    let mut entries = Vec::with_capacity(T_DIM * 3);
    for r in 0..T_DIM {
        for c in 0..3 {
            let mut terms = Vec::new();
            for (j, &m) in masks.iter().enumerate() {
                let v = left.get(r, c * per + j);
                if v != 0 {
                    let (_, s) = crate::extalg::contract_masks(m, m).unwrap();
                    terms.push((m, s as i64 * v as i64));
                }
            }
            entries.push(ExteriorElement::from_terms(p, 2, &terms)?);
        }
    }
    EModuleMap::new(
        p,
        FreeModuleSpec::uniform(3, 0),
        FreeModuleSpec::uniform(T_DIM, -2),
        entries,
    )
}

/// Checks that `phi` presents `T`: `φ∘B₁ = 0` and the induced map
/// `3Λ²W / im B₁ → K^10` is an isomorphism.
pub fn presents_cokernel(phi: &EModuleMap, b1: &EModuleMap) -> Result<bool> {
    if !phi.compose(b1)?.is_zero() {
        return Ok(false);
    }
    let piece = phi.graded_piece(2);
    Ok(piece.rank() == T_DIM && b1.graded_piece(2).rank() == 3 * lambda_dim(2) - T_DIM)
}

/// Solves `g · φ_from = φ_to` on degree-2 pieces; returns `g` if it exists and
/// is invertible.
pub fn phi_change_of_basis(from: &EModuleMap, to: &EModuleMap) -> Result<Option<Matrix>> {
    let a = from.graded_piece(2).transpose();
    let b = to.graded_piece(2).transpose();
    let Some(gt) = a.solve(&b)? else {
        return Ok(None);
    };
    let g = gt.transpose();
    if g.rank() != T_DIM {
        return Ok(None);
    }
    Ok(Some(g))
}

/// Where a candidate came from.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum Provenance {
    External,
    Trial { seed: u64, trial: u64 },
}

/// A full-rank `4×10` matrix representing a point of `G(10,4)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Candidate {
    c: Matrix,
    provenance: Provenance,
}

#[derive(Serialize, Deserialize)]
struct CandidateFile {
    p: u32,
    c: Vec<Vec<i64>>,
}

impl Candidate {
    pub fn new(c: Matrix, provenance: Provenance) -> Result<Self> {
        if c.rows() != QUOTIENT_RANK || c.cols() != T_DIM {
            return Err(Error::InvalidInput(format!(
                "candidate must be {QUOTIENT_RANK}x{T_DIM}, got {}x{}",
                c.rows(),
                c.cols()
            )));
        }
        Ok(Self { c, provenance })
    }

    pub fn matrix(&self) -> &Matrix {
        &self.c
    }

    pub fn prime(&self) -> u32 {
        self.c.prime()
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    /// Parses `{"p":5,"c":[[10 ints] x 4]}`; entries may be given in
    /// `(-p/2, p/2]` or `[0, p)`.
    pub fn from_json(s: &str) -> Result<Self> {
        let file: CandidateFile =
            serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        check_prime(file.p)?;
        let p = file.p as i64;
        for row in &file.c {
            for &x in row {
                if !(2 * x > -p && x < p) {
                    return Err(Error::InvalidInput(format!(
                        "entry {x} outside (-p/2, p/2] ∪ [0, p)"
                    )));
                }
            }
        }
        if file.c.iter().any(|r| r.len() != T_DIM) || file.c.len() != QUOTIENT_RANK {
            return Err(Error::InvalidInput(format!(
                "candidate must be {QUOTIENT_RANK}x{T_DIM}"
            )));
        }
        let m = Matrix::from_rows(file.p, &file.c)?;
        Self::new(m, Provenance::External)
    }

    /// Serializes with entries in the symmetric range.
    pub fn to_json(&self) -> String {
        let p = self.prime();
        let rows: Vec<String> = (0..self.c.rows())
            .map(|r| {
                let xs: Vec<String> = self
                    .c
                    .row(r)
                    .iter()
                    .map(|&x| symmetric(x, p).to_string())
                    .collect();
                format!("[{}]", xs.join(","))
            })
            .collect();
        format!("{{\"p\":{p},\"c\":[{}]}}", rows.join(","))
    }

    pub fn entries_symmetric(&self) -> Vec<Vec<i64>> {
        (0..self.c.rows())
            .map(|r| self.c.row(r).iter().map(|&x| symmetric(x, self.prime())).collect())
            .collect()
    }
}

/// The bundled candidate over `F_5` that yields a smooth surface.
pub fn reference_candidate() -> Candidate {
    Candidate::from_json(REFERENCE_CANDIDATE_JSON).expect("bundled fixture parses")
}

/// Outcome of the membership test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Membership {
    Member,
    NonMember { corank: usize },
}

/// Precomputed pieces shared by every candidate over a given prime.
#[derive(Clone, Debug)]
pub struct MonadContext {
    p: u32,
    b1: EModuleMap,
    phi: EModuleMap,
    /// Degree-3 piece of `B₁`: `2Λ⁴W → 3Λ³W` (30×10).
    b1_piece3: Matrix,
    /// Degree-3 piece of `φ`: `3Λ³W → 10W` (50×30).
    phi_piece3: Matrix,
}

impl MonadContext {
    /// Context using the reference `φ` (the basis in which candidate matrices
    /// are expressed).
    pub fn new(p: u32) -> Result<Self> {
        check_prime(p)?;
        let b1 = build_b1(p);
        let phi = reference_phi(p);
        if !presents_cokernel(&phi, &b1)? {
            return Err(Error::InternalInconsistency(
                "reference phi does not present coker B1".into(),
            ));
        }
        Ok(Self {
            p,
            b1_piece3: b1.graded_piece(3),
            phi_piece3: phi.graded_piece(3),
            b1,
            phi,
        })
    }

    /// Shared context for `F_5`.
    pub fn default_prime() -> &'static MonadContext {
        static CTX: OnceLock<MonadContext> = OnceLock::new();
        CTX.get_or_init(|| MonadContext::new(crate::gf::DEFAULT_PRIME).expect("F5 context"))
    }

    pub fn prime(&self) -> u32 {
        self.p
    }

    pub fn b1(&self) -> &EModuleMap {
        &self.b1
    }

    pub fn phi(&self) -> &EModuleMap {
        &self.phi
    }

    pub fn c_map(&self, cand: &Candidate) -> Result<EModuleMap> {
        self.phi.left_scalar(cand.matrix(), -2)
    }

    /// Degree-3 piece `M_C : 3Λ³W → 4W` of `C = c·φ` for an arbitrary
    /// (not necessarily full-rank) `4×10` matrix.
    pub fn degree3_piece(&self, c: &Matrix) -> Matrix {
        let w = lambda_dim(1);
        let cols = self.phi_piece3.cols();
        let mut out = Matrix::zeros(self.p, c.rows() * w, cols);
        let red = crate::gf::Reducer::new(self.p);
        for r in 0..c.rows() {
            for k in 0..c.cols() {
                let s = c.get(r, k);
                if s == 0 {
                    continue;
                }
                for j in 0..w {
                    let src = self.phi_piece3.row(k * w + j).to_vec();
                    red.axpy(out.row_mut(r * w + j), &src, s);
                }
            }
        }
        out
    }

    fn check_candidate(&self, cand: &Candidate) -> Result<()> {
        if cand.prime() != self.p {
            return Err(Error::InvalidInput(format!(
                "candidate over F_{} but context over F_{}",
                cand.prime(),
                self.p
            )));
        }
        if cand.matrix().rank() < QUOTIENT_RANK {
            return Err(Error::InvalidCandidate("rank(c) < 4".into()));
        }
        Ok(())
    }

    /// Corank of the induced map on `3Λ³W / im B₁ → 4W` (20×20).
    pub fn corank(&self, cand: &Candidate) -> Result<usize> {
        self.check_candidate(cand)?;
        let rank = self.degree3_piece(cand.matrix()).rank();
        Ok(self.quotient_dim() - rank)
    }

    fn quotient_dim(&self) -> usize {
        self.b1_piece3.rows() - self.b1_piece3.rank()
    }

    pub fn membership_test(&self, cand: &Candidate) -> Result<Membership> {
        let corank = self.corank(cand)?;
        Ok(if corank == 2 {
            Membership::Member
        } else {
            Membership::NonMember { corank }
        })
    }

    /// Representatives of the middle homology of `2Λ⁴W → 3Λ³W → 4W`,
    /// completing `im B₁` canonically inside `ker M_C`.
    pub fn middle_homology(&self, cand: &Candidate) -> Result<Vec<Vec<u8>>> {
        self.check_candidate(cand)?;
        let m = self.degree3_piece(cand.matrix());
        let kernel = m.kernel_basis();
        let mut span = EchelonBasis::new(self.p, m.cols());
        for v in self.b1_piece3.columns() {
            span.insert(&v);
        }
        Ok(kernel
            .columns()
            .into_iter()
            .filter(|v| span.insert(v))
            .collect())
    }

    /// `B₂ : 2ω(2) → 3ω` from the two homology classes, via `Λ³W ≅ Λ²V`.
    pub fn extract_b2(&self, cand: &Candidate) -> Result<EModuleMap> {
        let classes = self.middle_homology(cand)?;
        if classes.len() != 2 {
            return Err(Error::NotAMember(classes.len()));
        }
        let per = lambda_dim(3);
        let mut b2 = EModuleMap::zero(self.p, FreeModuleSpec::uniform(2, 2), FreeModuleSpec::uniform(3, 0));
        for (col, h) in classes.iter().enumerate() {
            for r in 0..3 {
                let u = ExteriorElement::dual_of(self.p, 3, &h[r * per..(r + 1) * per]);
                b2.set(r, col, u)?;
            }
        }
        Ok(b2)
    }

    /// `A` from the syzygies of `B = (B₂ | B₁)` in internal degree 2 (the
    /// twist-3 generators).
    pub fn extract_a(&self, b: &EModuleMap) -> Result<EModuleMap> {
        let syz = eres::syzygy_step(b);
        let cols: Vec<usize> = (0..syz.cols()).filter(|&c| syz.source().twist(c) == 3).collect();
        if cols.len() != 4 {
            return Err(Error::MonadDegenerate(format!(
                "{} generators of twist 3 in ker B, expected 4",
                cols.len()
            )));
        }
        Ok(syz.select_columns(&cols))
    }

    /// Runs the whole extraction for a member.
    pub fn monad_data(&self, cand: &Candidate) -> Result<MonadData> {
        let middle = self.middle_homology(cand)?.len();
        if middle != 2 {
            return Err(Error::NotAMember(middle));
        }
        let c = self.c_map(cand)?;
        let b2 = self.extract_b2(cand)?;
        let b = b2.hconcat(&self.b1)?;
        let a = self.extract_a(&b)?;
        Ok(MonadData {
            b1: self.b1.clone(),
            phi: self.phi.clone(),
            c,
            b2,
            b,
            a,
            middle_homology_dim: middle,
        })
    }

    pub fn fingerprint(&self, cand: &Candidate) -> Result<Fingerprint> {
        let c = self.c_map(cand)?;
        Ok(classify_betti(&fingerprint_table(&c)))
    }

    /// Rank of `c' ↦ π_coker ∘ M_{C(c')} ∘ ι_ker` over all `4·10` directions.
    pub fn tangent_codim(&self, cand: &Candidate) -> Result<usize> {
        let corank = self.corank(cand)?;
        if corank != 2 {
            return Err(Error::NotOnStratum(corank));
        }
        let classes = self.middle_homology(cand)?;
        let coker = self.degree3_piece(cand.matrix()).left_kernel_basis();
        let mut rows = Vec::with_capacity(QUOTIENT_RANK * T_DIM);
        for i in 0..QUOTIENT_RANK {
            for j in 0..T_DIM {
                rows.push(self.tangent_image(&coker, &classes, i, j));
            }
        }
        Ok(Matrix::from_data(self.p, rows.len(), 4, rows.concat()).rank())
    }

    /// The 2×2 block `π ∘ M_{C(E_ij)} ∘ ι`, flattened.
    fn tangent_image(&self, coker: &Matrix, classes: &[Vec<u8>], i: usize, j: usize) -> Vec<u8> {
        let mut dir = Matrix::zeros(self.p, QUOTIENT_RANK, T_DIM);
        dir.set(i, j, 1);
        self.block_of_direction(&dir, coker, classes)
    }

    /// `π ∘ M_{C(c')} ∘ ι` for an arbitrary direction `c'`.
    pub fn block_of_direction(&self, dir: &Matrix, coker: &Matrix, classes: &[Vec<u8>]) -> Vec<u8> {
        let m = self.degree3_piece(dir);
        let mut out = Vec::with_capacity(coker.rows() * classes.len());
        for a in 0..coker.rows() {
            for h in classes {
                let img = m.apply(h);
                let s: u64 = coker.row(a).iter().zip(&img).map(|(&x, &y)| x as u64 * y as u64).sum();
                out.push((s % self.p as u64) as u8);
            }
        }
        out
    }

    pub fn dimension_ledger(&self, cand: &Candidate) -> Result<DimensionLedger> {
        let codim = self.tangent_codim(cand)?;
        let grassmannian_dim = QUOTIENT_RANK * (T_DIM - QUOTIENT_RANK);
        let strata_dim = grassmannian_dim - codim;
        Ok(DimensionLedger {
            grassmannian_dim,
            codim,
            strata_dim,
            scroll_dim: SCROLL_DIM,
            hilbert_dim: strata_dim + SCROLL_DIM,
        })
    }

    /// Rank bookkeeping of the degree-2 complex
    /// `2Λ⁴W ⊕ 2Λ³W → 3Λ²W → 4K`.
    pub fn degree2_counts(&self, data: &MonadData) -> Degree2Counts {
        let b = data.b.graded_piece(2);
        let c = data.c.graded_piece(2);
        let source = b.cols();
        let middle = b.rows();
        let target = c.rows();
        Degree2Counts {
            source,
            middle,
            target,
            euler: source as i64 - middle as i64 + target as i64,
            kernel_of_b: source - b.rank(),
            rank_b: b.rank(),
            rank_c: c.rank(),
        }
    }

    /// Draws a uniform full-rank `4×10` matrix for trial `trial`.
    pub fn draw_candidate(&self, seed: u64, trial: u64) -> Candidate {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(trial);
        loop {
            let data: Vec<u8> = (0..QUOTIENT_RANK * T_DIM)
                .map(|_| rng.gen_range(0..self.p) as u8)
                .collect();
            let c = Matrix::from_data(self.p, QUOTIENT_RANK, T_DIM, data);
            if c.rank() == QUOTIENT_RANK {
                return Candidate {
                    c,
                    provenance: Provenance::Trial { seed, trial },
                };
            }
        }
    }

    fn run_trial(&self, seed: u64, trial: u64) -> TrialOutcome {
        let cand = self.draw_candidate(seed, trial);
        let corank = self.corank(&cand).expect("drawn candidates have full rank");
        let fingerprint = (corank == 2).then(|| self.fingerprint(&cand).expect("fingerprint"));
        TrialOutcome {
            trial,
            corank,
            candidate: cand,
            fingerprint,
        }
    }

    /// Seeded random search; see [`SearchOptions`].
    pub fn random_search(&self, opts: &SearchOptions, stop: Option<&AtomicBool>) -> SearchReport {
        let start = Instant::now();
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(opts.workers.max(1))
            .build()
            .expect("thread pool");
        let mut report = SearchReport::empty(opts.trials, opts.seed, self.p);
        let batch = 2048u64;
        let mut done = 0u64;
        while done < opts.trials {
            if stop.is_some_and(|s| s.load(Ordering::Relaxed)) {
                report.truncated = true;
                break;
            }
            let end = (done + batch).min(opts.trials);
            let outcomes: Vec<TrialOutcome> = pool.install(|| {
                (done..end)
                    .into_par_iter()
                    .map(|t| self.run_trial(opts.seed, t))
                    .collect()
            });
            for o in outcomes {
                report.record(o);
            }
            done = end;
        }
        report.trials_completed = done;
        if opts.record_time {
            report.wall_time_secs = Some(start.elapsed().as_secs_f64());
        }
        report
    }
}

/// The maps of a monad-bearing candidate.
#[derive(Clone, Debug)]
pub struct MonadData {
    pub b1: EModuleMap,
    pub phi: EModuleMap,
    pub c: EModuleMap,
    pub b2: EModuleMap,
    /// `B = (B₂ | B₁) : 2ω(2) ⊕ 2ω(1) → 3ω`.
    pub b: EModuleMap,
    /// `A : 4ω(3) → 2ω(2) ⊕ 2ω(1)`.
    pub a: EModuleMap,
    pub middle_homology_dim: usize,
}

impl MonadData {
    /// `C∘B₁ = C∘B₂ = B∘A = 0`.
    pub fn composites_vanish(&self) -> Result<bool> {
        Ok(self.c.compose(&self.b1)?.is_zero()
            && self.c.compose(&self.b2)?.is_zero()
            && self.b.compose(&self.a)?.is_zero())
    }

    /// Exactness of the dual segment `Cᵀ, Bᵀ, Aᵀ` at its interior slots.
    pub fn dual_exactness(&self) -> (bool, bool) {
        let (ct, bt, at) = (self.c.transpose(), self.b.transpose(), self.a.transpose());
        (eres::is_exact_at(&bt, &ct), eres::is_exact_at(&at, &bt))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Degree2Counts {
    pub source: usize,
    pub middle: usize,
    pub target: usize,
    pub euler: i64,
    pub kernel_of_b: usize,
    pub rank_b: usize,
    pub rank_c: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct DimensionLedger {
    pub grassmannian_dim: usize,
    pub codim: usize,
    pub strata_dim: usize,
    pub scroll_dim: usize,
    pub hilbert_dim: usize,
}

/// Component fingerprint of a corank-2 point.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum Fingerprint {
    Type1,
    Type2,
    Other(BettiTable),
}

/// Number of free modules in the fingerprint resolution.
pub const FINGERPRINT_STEPS: usize = 4;

fn reference_layout(corner: usize) -> BettiTable {
    BettiTable::from_layout(&[
        (2, vec![4, 0, 0, 0]),
        (1, vec![0, 3, 2, 0]),
        (0, vec![0, 0, 2, 4]),
        (-1, vec![0, 0, 0, corner]),
    ])
}

/// Reference table of the monad-bearing component (corner entry 5).
pub fn type1_table() -> BettiTable {
    reference_layout(5)
}

/// Reference table of the second corank-2 component (corner entry 10).
pub fn type2_table() -> BettiTable {
    reference_layout(10)
}

/// Betti table of the minimal resolution of `coker C`.
pub fn fingerprint_table(c: &EModuleMap) -> BettiTable {
    let m = PresentedEModule::cokernel_of(c.clone());
    betti_table_of(&minimal_resolution(&m, FINGERPRINT_STEPS))
}

pub fn classify_betti(table: &BettiTable) -> Fingerprint {
    if *table == type1_table() {
        Fingerprint::Type1
    } else if *table == type2_table() {
        Fingerprint::Type2
    } else {
        Fingerprint::Other(table.clone())
    }
}

#[derive(Clone, Debug)]
pub struct SearchOptions {
    pub trials: u64,
    pub seed: u64,
    pub workers: usize,
    /// Record wall time in the report (makes it run-dependent).
    pub record_time: bool,
}

struct TrialOutcome {
    trial: u64,
    corank: usize,
    candidate: Candidate,
    fingerprint: Option<Fingerprint>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SearchHit {
    pub trial: u64,
    pub fingerprint: Fingerprint,
    pub c: Vec<Vec<i64>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SearchReport {
    pub trials: u64,
    pub trials_completed: u64,
    pub seed: u64,
    pub prime: u32,
    pub rank_hits: u64,
    pub fingerprint1_hits: u64,
    pub fingerprint2_hits: u64,
    pub other_fingerprint_hits: u64,
    /// Number of trials per observed corank, as `[corank, count]` pairs.
    pub corank_histogram: Vec<(usize, u64)>,
    pub candidates: Vec<SearchHit>,
    pub truncated: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub wall_time_secs: Option<f64>,
}

impl SearchReport {
    fn empty(trials: u64, seed: u64, prime: u32) -> Self {
        Self {
            trials,
            trials_completed: 0,
            seed,
            prime,
            rank_hits: 0,
            fingerprint1_hits: 0,
            fingerprint2_hits: 0,
            other_fingerprint_hits: 0,
            corank_histogram: Vec::new(),
            candidates: Vec::new(),
            truncated: false,
            wall_time_secs: None,
        }
    }

    fn record(&mut self, o: TrialOutcome) {
        match self.corank_histogram.iter_mut().find(|(c, _)| *c == o.corank) {
            Some(entry) => entry.1 += 1,
            None => {
                self.corank_histogram.push((o.corank, 1));
                self.corank_histogram.sort();
            }
        }
        if let Some(fp) = o.fingerprint {
            self.rank_hits += 1;
            match fp {
                Fingerprint::Type1 => self.fingerprint1_hits += 1,
                Fingerprint::Type2 => self.fingerprint2_hits += 1,
                Fingerprint::Other(_) => self.other_fingerprint_hits += 1,
            }
            self.candidates.push(SearchHit {
                trial: o.trial,
                fingerprint: fp,
                c: o.candidate.entries_symmetric(),
            });
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Number of exterior-algebra variables, re-exported for reports.
pub const fn variables() -> usize {
    NVARS
}
