//! The staged verification pipeline behind `verify` and `ideal`.

use std::time::Instant;

use beilinson::bgg::{
    expected_hilbert, monad_h0, reconstruct_ideal, HilbertFit, MonadH0, Reconstruction,
    RECONSTRUCTION_DEGREES,
};
use beilinson::monad::{
    Candidate, DimensionLedger, Fingerprint, Membership, MonadContext, MonadData,
};
use beilinson::poly::dim_s;
use beilinson::poly::jacobian::{jacobian_singular_locus, SingularLocus};
use beilinson::poly::points::{rational_point_scan, ExtensionField};
use serde::Serialize;

use crate::config::RunConfig;
use crate::outcome::Failure;

const EXPECTED_TANGENT_CODIM: usize = 4;
const EXPECTED_MODULI_DIM: usize = 38;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub enum Status {
    Passed,
    Failed,
    Inconclusive,
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Stage {
    pub name: String,
    pub status: Status,
    pub detail: String,
    pub elapsed_secs: f64,
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct MembershipInfo {
    pub member: bool,
    pub corank: usize,
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct MonadDims {
    pub source_twists: Vec<i32>,
    pub middle_twists: Vec<i32>,
    pub target_twists: Vec<i32>,
    pub middle_homology_dim: usize,
    pub composites_vanish: bool,
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct IdealInfo {
    pub embedding_solution_dim: usize,
    pub gauge_dim: usize,
    pub slice_dims: Vec<(u32, usize)>,
    pub generator_degrees: Vec<u32>,
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ScanSummary {
    pub field: String,
    pub points: usize,
    pub rank_deficient: usize,
}

#[derive(Clone, Debug, Default, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct VerificationReport {
    pub candidate: Vec<Vec<i64>>,
    pub stages: Vec<Stage>,
    pub membership: Option<MembershipInfo>,
    pub fingerprint: Option<Fingerprint>,
    pub monad: Option<MonadDims>,
    pub h0: Vec<MonadH0>,
    pub ideal: Option<IdealInfo>,
    pub hilbert_fit: Option<HilbertFit>,
    pub tangent_codim: Option<usize>,
    pub dimension_ledger: Option<DimensionLedger>,
    pub point_scans: Vec<ScanSummary>,
    pub smoothness: Option<SingularLocus>,
    pub outcome: String,
}

impl VerificationReport {
    /// The failure the exit code should reflect, if any.
    pub fn failure(&self) -> Option<Failure> {
        let bad = self.stages.iter().find(|s| s.status != Status::Passed)?;
        let msg = format!("{}: {}", bad.name, bad.detail);
        Some(match bad.status {
            Status::Inconclusive => Failure::Budget(msg),
            _ => Failure::Math(msg),
        })
    }
}

/// Runs the stages in order and stops at the first that does not pass.
pub struct Pipeline<'a> {
    ctx: &'a MonadContext,
    config: &'a RunConfig,
    pub report: VerificationReport,
    pub data: Option<MonadData>,
    pub reconstruction: Option<Reconstruction>,
}

type StageResult = Result<(Status, String), Failure>;

impl<'a> Pipeline<'a> {
    pub fn new(ctx: &'a MonadContext, config: &'a RunConfig, cand: &Candidate) -> Self {
        Self {
            ctx,
            config,
            report: VerificationReport {
                candidate: cand.entries_symmetric(),
                ..Default::default()
            },
            data: None,
            reconstruction: None,
        }
    }

    /// Records a stage. `Ok(false)` means the pipeline must stop.
    fn stage(&mut self, name: &str, f: impl FnOnce(&mut Self) -> StageResult) -> Result<bool, Failure> {
        let start = Instant::now();
        let (status, detail) = match f(self) {
            Ok(x) => x,
            Err(Failure::Math(m)) => (Status::Failed, m),
            Err(e) => return Err(e),
        };
        log::info!("{name}: {status:?} {detail}");
        self.report.stages.push(Stage {
            name: name.into(),
            status,
            detail,
            elapsed_secs: start.elapsed().as_secs_f64(),
        });
        Ok(status == Status::Passed)
    }

    /// Stages up to and including the ideal reconstruction.
    pub fn run_to_ideal(&mut self, cand: &Candidate) -> Result<bool, Failure> {
        let ctx = self.ctx;
        let ok = self.stage("membership", |s| {
            let verdict = ctx.membership_test(cand)?;
            let corank = ctx.corank(cand)?;
            let member = verdict == Membership::Member;
            s.report.membership = Some(MembershipInfo { member, corank });
            Ok(if member {
                (Status::Passed, format!("corank {corank}"))
            } else {
                (Status::Failed, format!("corank {corank}, expected 2"))
            })
        })? && self.stage("monad", |s| {
            let data = ctx.monad_data(cand)?;
            let dims = MonadDims {
                source_twists: data.a.source().twists().to_vec(),
                middle_twists: data.b.source().twists().to_vec(),
                target_twists: data.b.target().twists().to_vec(),
                middle_homology_dim: data.middle_homology_dim,
                composites_vanish: data.composites_vanish()?,
            };
            let ok = dims.composites_vanish
                && dims.middle_homology_dim == 2
                && dims.source_twists == [3, 3, 3, 3];
            let detail = format!(
                "A: {:?} -> {:?}, homology {}, composites vanish: {}",
                dims.source_twists, dims.middle_twists, dims.middle_homology_dim, dims.composites_vanish
            );
            s.report.monad = Some(dims);
            s.data = Some(data);
            Ok((if ok { Status::Passed } else { Status::Failed }, detail))
        })? && self.stage("fingerprint", |s| {
            let fp = ctx.fingerprint(cand)?;
            let status = if fp == Fingerprint::Type1 { Status::Passed } else { Status::Failed };
            let detail = match &fp {
                Fingerprint::Type1 => "type 1 (corner entry 5)".to_string(),
                Fingerprint::Type2 => "type 2 (corner entry 10)".to_string(),
                Fingerprint::Other(t) => format!("unrecognized table\n{t}"),
            };
            s.report.fingerprint = Some(fp);
            Ok((status, detail))
        })? && self.stage("cohomology", |s| {
            let data = s.data.as_ref().expect("monad stage ran");
            let mut ok = true;
            let mut parts = Vec::new();
            for n in 0..=2u32 {
                let h = monad_h0(data, n)?;
                let m = (n + beilinson::bgg::PSI_DEGREE) as i64;
                let want = dim_s(m) as i64 - expected_hilbert(m);
                if n == 0 {
                    let h1 = h.h1.unwrap_or(0) as i64;
                    ok &= h.h0 == 0 && h1 == -want;
                    parts.push(format!("(h0,h1)(I({m})) = ({}, {h1})", h.h0));
                } else {
                    ok &= h.h0 as i64 == want;
                    parts.push(format!("h0(I({m})) = {}", h.h0));
                }
                s.report.h0.push(h);
            }
            Ok((if ok { Status::Passed } else { Status::Failed }, parts.join(", ")))
        })? && self.stage("ideal", |s| {
            let data = s.data.as_ref().expect("monad stage ran");
            let r = reconstruct_ideal(data, &RECONSTRUCTION_DEGREES)?;
            let info = IdealInfo {
                embedding_solution_dim: r.embedding.solution_dim,
                gauge_dim: r.embedding.gauge.len(),
                slice_dims: r.slices.iter().map(|x| (x.degree, x.dim())).collect(),
                generator_degrees: r.generators.iter().map(|g| g.degree().unwrap_or(0)).collect(),
            };
            let detail = format!(
                "{} generators in degrees {:?}",
                info.generator_degrees.len(),
                info.generator_degrees
            );
            s.report.ideal = Some(info);
            s.report.hilbert_fit = Some(r.fit.clone());
            s.reconstruction = Some(r);
            Ok((Status::Passed, detail))
        })? && self.stage("hilbert-fit", |s| {
            let fit = s.report.hilbert_fit.as_ref().expect("ideal stage ran");
            let ok = fit.values.iter().all(|&(m, v)| v == expected_hilbert(m as i64));
            Ok((
                if ok { Status::Passed } else { Status::Failed },
                format!("d = {}, genus = {}, chi = {}", fit.degree, fit.sectional_genus, fit.chi),
            ))
        })?;
        Ok(ok)
    }

    /// Tangent space and dimension count.
    pub fn run_moduli(&mut self, cand: &Candidate) -> Result<bool, Failure> {
        let ctx = self.ctx;
        Ok(self.stage("tangent", |s| {
            let codim = ctx.tangent_codim(cand)?;
            s.report.tangent_codim = Some(codim);
            let ok = codim == EXPECTED_TANGENT_CODIM;
            Ok((if ok { Status::Passed } else { Status::Failed }, format!("codim {codim}")))
        })? && self.stage("ledger", |s| {
            let l = ctx.dimension_ledger(cand)?;
            let detail = format!(
                "{} - {} + {} = {}",
                l.grassmannian_dim, l.codim, l.scroll_dim, l.hilbert_dim
            );
            let ok = l.hilbert_dim == EXPECTED_MODULI_DIM;
            s.report.dimension_ledger = Some(l);
            Ok((if ok { Status::Passed } else { Status::Failed }, detail))
        })?)
    }

    /// Point scans over `F_p` and `F_{p²}`, then the Jacobian criterion
    /// within the budget.
    pub fn run_smoothness(&mut self) -> Result<bool, Failure> {
        let p = self.config.prime;
        let gens = self.reconstruction.as_ref().expect("ideal stage ran").generators.clone();
        for degree in 1..=2 {
            let Ok(field) = ExtensionField::new(p, degree) else {
                continue;
            };
            let name = format!("scan-{}", field.order());
            let gens = &gens;
            let ok = self.stage(&name, |s| {
                let scan = rational_point_scan(gens, &field, true);
                let summary = ScanSummary {
                    field: field.modulus_description(),
                    points: scan.points.len(),
                    rank_deficient: scan.rank_deficient(2).len(),
                };
                let detail = format!(
                    "{} points over {}, {} with Jacobian rank < 2",
                    summary.points, summary.field, summary.rank_deficient
                );
                let ok = summary.rank_deficient == 0;
                s.report.point_scans.push(summary);
                Ok((if ok { Status::Passed } else { Status::Failed }, detail))
            })?;
            if !ok {
                return Ok(false);
            }
        }
        let budget = self.config.budget();
        self.stage("smoothness", |s| {
            let verdict = jacobian_singular_locus(&gens, budget)?;
            let (status, detail) = match &verdict {
                SingularLocus::Smooth { minors_used, basis_size, .. } => (
                    Status::Passed,
                    format!("smooth ({minors_used} minors, basis of {basis_size})"),
                ),
                SingularLocus::Singular { points, .. } => (
                    Status::Failed,
                    format!("singular; {} rational singular points", points.len()),
                ),
                SingularLocus::Inconclusive { stage, pending_pairs, .. } => (
                    Status::Inconclusive,
                    format!(
                        "INCONCLUSIVE: budget exhausted in the {stage} Gröbner basis with {pending_pairs} \
                         pairs pending; only the point-scan necessary condition was checked"
                    ),
                ),
            };
            s.report.smoothness = Some(verdict);
            Ok((status, detail))
        })
    }

    pub fn finish(mut self) -> VerificationReport {
        self.report.outcome = match self.report.failure() {
            None => "passed",
            Some(Failure::Budget(_)) => "inconclusive",
            Some(_) => "failed",
        }
        .into();
        self.report
    }
}
