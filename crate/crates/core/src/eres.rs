//! Graded modules over `E`, minimal free resolutions and Betti tables.
//!
//! `E` is finite dimensional, so every submodule of a free module is known
//! once its graded pieces are. Multiplication by `V` lowers the internal
//! degree by one, hence minimal generators of a submodule are found by
//! sweeping the internal degree from the top down and, in each degree,
//! taking a complement of `V·(piece one degree higher)` inside the piece.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::extalg::{EModuleMap, ExteriorElement, FreeModuleSpec, NVARS};
use crate::gf::{EchelonBasis, Matrix};

/// A module given as the cokernel of a presentation map.
#[derive(Clone, Debug)]
pub struct PresentedEModule {
    presentation: EModuleMap,
}

impl PresentedEModule {
    pub fn cokernel_of(presentation: EModuleMap) -> Self {
        Self { presentation }
    }

    /// The free module `F` itself (presented by the zero map from nothing).
    pub fn free(p: u32, spec: FreeModuleSpec) -> Self {
        Self {
            presentation: EModuleMap::zero(p, FreeModuleSpec::default(), spec),
        }
    }

    pub fn presentation(&self) -> &EModuleMap {
        &self.presentation
    }

    /// Dimension of the degree-`d` piece of the module.
    pub fn piece_dim(&self, d: i32) -> usize {
        let dim = self.presentation.target().piece_dim(d);
        dim - self.presentation.graded_piece(d).rank()
    }
}

/// Minimal generators of the submodule of `spec` whose degree-`d` piece is
/// spanned by the columns of `piece(d)`. The submodule must be closed under
/// the `E`-action; the result is a map into `spec`.
fn minimal_generators(
    p: u32,
    spec: &FreeModuleSpec,
    mut piece: impl FnMut(i32) -> Vec<Vec<u8>>,
) -> EModuleMap {
    let Some((lo, hi)) = spec.degree_range() else {
        return EModuleMap::zero(p, FreeModuleSpec::default(), spec.clone());
    };
    let mut generators: Vec<(i32, Vec<u8>)> = Vec::new();
    let mut above: Vec<Vec<u8>> = Vec::new();
    for d in (lo..=hi).rev() {
        let here = piece(d);
        let dim = spec.piece_dim(d);
        let mut span = EchelonBasis::new(p, dim);
        if !above.is_empty() {
            for i in 0..NVARS {
                let act = spec.action_matrix(p, i, d);
                for v in &above {
                    span.insert(&act.apply(v));
                }
            }
        }
        for v in &here {
            if span.insert(v) {
                generators.push((d, v.clone()));
            }
        }
        above = here;
    }

    let twists: Vec<i32> = generators.iter().map(|(d, _)| NVARS as i32 - d).collect();
    let mut map = EModuleMap::zero(p, FreeModuleSpec::new(twists), spec.clone());
    for (col, (d, v)) in generators.iter().enumerate() {
        let (offsets, _) = spec.piece_offsets(*d);
        for t in 0..spec.rank() {
            let k = spec.weight(t, *d);
            if !(0..=NVARS as i32).contains(&k) {
                continue;
            }
            let len = crate::extalg::lambda_dim(k);
            let slice = &v[offsets[t]..offsets[t] + len];
            if slice.iter().any(|&x| x != 0) {
                let u = ExteriorElement::dual_of(p, k as usize, slice);
                map.set(t, col, u).expect("generator entry degree");
            }
        }
    }
    map
}

/// Minimal generators of `ker f`, as a map into `f.source()`.
pub fn syzygy_step(f: &EModuleMap) -> EModuleMap {
    minimal_generators(f.prime(), f.source(), |d| f.graded_piece(d).kernel_basis().columns())
}

/// Minimal generators of `im f`, as a map into `f.target()`.
pub fn image_generators(f: &EModuleMap) -> EModuleMap {
    minimal_generators(f.prime(), f.target(), |d| {
        let piece = f.graded_piece(d);
        let r = piece.transpose().rref();
        (0..r.rank).map(|i| r.reduced.row(i).to_vec()).collect()
    })
}

/// A finite segment `F_0 ← F_1 ← … ← F_k` of a minimal free resolution.
#[derive(Clone, Debug)]
pub struct Resolution {
    /// `maps[i]` is the differential `F_{i+1} → F_i`.
    pub maps: Vec<EModuleMap>,
    pub modules: Vec<FreeModuleSpec>,
}

impl Resolution {
    /// Checks `d_i ∘ d_{i+1} = 0` for all consecutive maps.
    pub fn composites_vanish(&self) -> Result<bool> {
        for w in self.maps.windows(2) {
            if !w[0].compose(&w[1])?.is_zero() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Degreewise exactness at every interior module `F_1 … F_{k-1}`.
    pub fn is_exact(&self) -> bool {
        self.maps.windows(2).all(|w| is_exact_at(&w[0], &w[1]))
    }

    /// True when no differential has a nonzero scalar entry.
    pub fn is_minimal(&self) -> bool {
        self.maps.iter().all(|m| {
            (0..m.rows()).all(|r| (0..m.cols()).all(|c| {
                let e = m.entry(r, c);
                e.is_zero() || e.degree() > 0
            }))
        })
    }
}

/// Exactness of `A --g--> B --f--> C` at `B`, checked degreewise:
/// `rank g_d + rank f_d = dim B_d` for every internal degree.
pub fn is_exact_at(f: &EModuleMap, g: &EModuleMap) -> bool {
    let Some((lo, hi)) = f.source().degree_range() else {
        return true;
    };
    (lo..=hi).all(|d| {
        let dim = f.source().piece_dim(d);
        f.graded_piece(d).rank() + g.graded_piece(d).rank() == dim
    })
}

/// Homology dimension of `A --g--> B --f--> C` at `B` in degree `d`.
pub fn homology_dim(f: &EModuleMap, g: &EModuleMap, d: i32) -> usize {
    f.source().piece_dim(d) - f.graded_piece(d).rank() - g.graded_piece(d).rank()
}

/// Minimal resolution of `m` with free modules `F_0 … F_{steps-1}`.
pub fn minimal_resolution(m: &PresentedEModule, steps: usize) -> Resolution {
    let f0 = m.presentation().target().clone();
    let mut modules = vec![f0];
    let mut maps = Vec::new();
    if steps <= 1 {
        return Resolution { maps, modules };
    }
    let mut current = image_generators(m.presentation());
    for step in 1..steps {
        modules.push(current.source().clone());
        let next = if step + 1 < steps {
            Some(syzygy_step(&current))
        } else {
            None
        };
        maps.push(current);
        match next {
            Some(n) => current = n,
            None => break,
        }
    }
    Resolution { maps, modules }
}

/// Generator counts indexed by `(step, twist)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
pub struct BettiTable {
    pub steps: Vec<BTreeMap<i32, usize>>,
}

impl BettiTable {
    pub fn from_counts(steps: Vec<Vec<(i32, usize)>>) -> Self {
        Self {
            steps: steps
                .into_iter()
                .map(|s| s.into_iter().filter(|&(_, c)| c > 0).collect())
                .collect(),
        }
    }

    pub fn count(&self, step: usize, twist: i32) -> usize {
        self.steps
            .get(step)
            .and_then(|s| s.get(&twist))
            .copied()
            .unwrap_or(0)
    }

    pub fn total(&self, step: usize) -> usize {
        self.steps.get(step).map_or(0, |s| s.values().sum())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("betti table serializes")
    }

    /// The table in the conventional layout: column = step,
    /// row = step − twist. Returns `(row, counts per step)` from the top row
    /// down.
    pub fn layout(&self) -> Vec<(i32, Vec<usize>)> {
        let rows: Vec<i32> = self
            .steps
            .iter()
            .enumerate()
            .flat_map(|(s, m)| m.keys().map(move |&t| s as i32 - t))
            .collect();
        let (Some(&lo), Some(&hi)) = (rows.iter().min(), rows.iter().max()) else {
            return Vec::new();
        };
        (lo..=hi)
            .rev()
            .map(|row| {
                let counts = (0..self.steps.len())
                    .map(|s| self.count(s, s as i32 - row))
                    .collect();
                (row, counts)
            })
            .collect()
    }

    /// Inverse of [`BettiTable::layout`].
    pub fn from_layout(rows: &[(i32, Vec<usize>)]) -> Self {
        let nsteps = rows.iter().map(|(_, c)| c.len()).max().unwrap_or(0);
        let mut steps = vec![BTreeMap::new(); nsteps];
        for (row, counts) in rows {
            for (s, &c) in counts.iter().enumerate() {
                if c > 0 {
                    steps[s].insert(s as i32 - row, c);
                }
            }
        }
        Self { steps }
    }
}

impl fmt::Display for BettiTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (row, counts) in self.layout() {
            let cells: Vec<String> = counts
                .iter()
                .map(|&c| if c == 0 { ".".to_string() } else { c.to_string() })
                .collect();
            writeln!(f, "{row:>3} | {}", cells.join(" "))?;
        }
        Ok(())
    }
}

pub fn betti_table_of(res: &Resolution) -> BettiTable {
    BettiTable::from_counts(
        res.modules
            .iter()
            .map(|m| {
                let mut counts: BTreeMap<i32, usize> = BTreeMap::new();
                for &t in m.twists() {
                    *counts.entry(t).or_default() += 1;
                }
                counts.into_iter().collect()
            })
            .collect(),
    )
}

/// Degreewise Euler characteristic `dim A_d − dim B_d + dim C_d` of a
/// three-term segment; zero in every degree when the segment is short exact.
pub fn euler_characteristic(a: &FreeModuleSpec, b: &FreeModuleSpec, c: &FreeModuleSpec, d: i32) -> i64 {
    a.piece_dim(d) as i64 - b.piece_dim(d) as i64 + c.piece_dim(d) as i64
}

/// Rank of a map's graded piece; convenience for rank bookkeeping reports.
pub fn piece_rank(f: &EModuleMap, d: i32) -> usize {
    let m: Matrix = f.graded_piece(d);
    m.rank()
}
