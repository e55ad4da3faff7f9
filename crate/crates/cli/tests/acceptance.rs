//! Acceptance suite: one line per criterion, then a nonzero exit if any
//! criterion failed for a reason other than a documented deviation.

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use beilinson::adjunction::{adjunction_replay, main_class, Terminal};
use beilinson::bgg::{koszul_differential, monad_h0, reconstruct_ideal, Reconstruction, RECONSTRUCTION_DEGREES};
use beilinson::eres::{image_generators, minimal_resolution, syzygy_step, PresentedEModule};
use beilinson::extalg::{basis_masks, EModuleMap, ExteriorElement, FreeModuleSpec, NVARS};
use beilinson::gf::Matrix;
use beilinson::monad::*;
use beilinson::poly::groebner::buchberger;
use beilinson::poly::hilbert::hilbert_polynomial;
use beilinson::poly::dim_s;
use num_rational::Rational64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

#[derive(PartialEq)]
enum Verdict {
    Pass,
    /// Criterion held only in its documented fallback form.
    Degraded,
    /// Failed in exactly the documented, analyzed way.
    KnownDeviation,
    Fail,
}

struct Line {
    verdict: Verdict,
    detail: String,
}

impl Line {
    fn new(ok: bool, detail: String) -> Self {
        Self {
            verdict: if ok { Verdict::Pass } else { Verdict::Fail },
            detail,
        }
    }
}

fn ctx() -> &'static MonadContext {
    MonadContext::default_prime()
}

fn criterion1() -> Line {
    let start = Instant::now();
    let phi = derive_phi(5).unwrap();
    let g = phi_change_of_basis(&phi, &reference_phi(5)).unwrap();
    let invertible = g.as_ref().is_some_and(|g| g.rank() == T_DIM);
    let presents = presents_cokernel(&phi, &build_b1(5)).unwrap();
    let t = start.elapsed();
    Line::new(
        phi.rows() == 10 && invertible && presents && t < Duration::from_secs(1),
        format!("dim T = {}, invertible change of basis: {invertible}, {t:.2?}", phi.rows()),
    )
}

fn criterion2(recon: &mut Option<Reconstruction>) -> Line {
    let start = Instant::now();
    let cand = reference_candidate();
    let mut checks: Vec<(&str, bool)> = Vec::new();
    checks.push(("corank 2", ctx().corank(&cand).unwrap() == 2));
    let data = ctx().monad_data(&cand).unwrap();
    checks.push(("homology 2", data.middle_homology_dim == 2));
    checks.push(("A twists [3,3,3,3]", data.a.source().twists() == [3, 3, 3, 3]));
    checks.push(("composites vanish", data.composites_vanish().unwrap()));
    checks.push(("Type1", ctx().fingerprint(&cand).unwrap() == Fingerprint::Type1));
    checks.push(("Type1 corner 5", type1_table().count(3, 4) == 5));
    let h = |n| monad_h0(&data, n).unwrap();
    let h4 = h(0);
    checks.push(("(h0,h1)(I(4)) = (0,3)", (h4.h0, h4.h1) == (0, Some(3))));
    checks.push(("h0(I(5)) = 5", h(1).h0 == 5));
    checks.push(("h0(I(6)) = 29", h(2).h0 == 29));
    let r = reconstruct_ideal(&data, &RECONSTRUCTION_DEGREES).unwrap();
    checks.push(("fit 6n^2-6n+1", r.fit.coefficients == [1, -6, 6]));
    checks.push((
        "d, genus, chi = 12, 13, 1",
        (r.fit.degree, r.fit.sectional_genus, r.fit.chi) == (12, 13, 1),
    ));
    checks.push(("tangent codim 4", ctx().tangent_codim(&cand).unwrap() == 4));
    let l = ctx().dimension_ledger(&cand).unwrap();
    checks.push((
        "24-4+18 = 38",
        (l.grassmannian_dim, l.codim, l.scroll_dim, l.hilbert_dim) == (24, 4, 18, 38),
    ));
    *recon = Some(r);
    let t = start.elapsed();
    checks.push(("< 5 min", t < Duration::from_secs(300)));
    let failed: Vec<&str> = checks.iter().filter(|c| !c.1).map(|c| c.0).collect();
    Line::new(
        failed.is_empty(),
        if failed.is_empty() {
            format!("{} exact checks, {t:.2?}", checks.len())
        } else {
            format!("failed: {failed:?}")
        },
    )
}

fn criterion3(dir: &std::path::Path) -> Line {
    let mut type1 = Vec::new();
    let mut type2_total = 0;
    for seed in 1..=5u64 {
        let out = dir.join(format!("search-{seed}.json"));
        let status = Command::new(env!("CARGO_BIN_EXE_beilinson"))
            .args(["search", "--trials", "6250", "--seed", &seed.to_string(), "--out"])
            .arg(&out)
            .stdout(std::process::Stdio::null())
            .status()
            .unwrap();
        if !status.success() {
            return Line::new(false, format!("search exited with {status}"));
        }
        let v: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
        type1.push(v["result"]["fingerprint1Hits"].as_u64().unwrap());
        type2_total += v["result"]["fingerprint2Hits"].as_u64().unwrap();
    }
    // Throughput of the full search loop (membership plus fingerprints).
    let opts = SearchOptions {
        trials: 10_000,
        seed: 1000,
        workers: std::thread::available_parallelism().map_or(1, |n| n.get()),
        record_time: false,
    };
    let start = Instant::now();
    ctx().random_search(&opts, None);
    let rate = opts.trials as f64 / start.elapsed().as_secs_f64();
    let in_band = type1.iter().all(|&k| (6..=40).contains(&k));
    Line::new(
        in_band && type2_total >= 1 && rate >= 1000.0,
        format!("type1 per seed {type1:?}, type2 total {type2_total}, {rate:.0} trials/s"),
    )
}

fn criterion4(dir: &std::path::Path) -> Line {
    let out = dir.join("verify.json");
    let status = Command::new(env!("CARGO_BIN_EXE_beilinson"))
        .args(["verify", "--full", "--budget-secs", "900", "--out"])
        .arg(&out)
        .stdout(std::process::Stdio::null())
        .status()
        .unwrap();
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    let r = &v["result"];
    let scans: Vec<(u64, u64)> = r["pointScans"]
        .as_array()
        .into_iter()
        .flatten()
        .map(|s| (s["points"].as_u64().unwrap(), s["rankDeficient"].as_u64().unwrap()))
        .collect();
    let scans_ok = scans.len() == 2 && scans.iter().all(|s| s.1 == 0);
    let verdict = r["smoothness"]["verdict"].as_str().unwrap_or("missing").to_string();
    let detail = format!("smoothness {verdict}, scans (points, rank<2) {scans:?}, exit code {:?}", status.code());
    match verdict.as_str() {
        "smooth" => Line::new(scans_ok && status.success(), detail),
        "inconclusive" if scans_ok => Line {
            verdict: Verdict::Degraded,
            detail: format!("{detail}; Gröbner check INCONCLUSIVE, scan condition only"),
        },
        _ => Line::new(false, detail),
    }
}

fn criterion5() -> Line {
    let start = Instant::now();
    let ledger = adjunction_replay(&main_class()).unwrap();
    let t = start.elapsed();
    let ok = ledger.summary()
        == vec![(12, 13, None), (24, 13, Some(7)), (19, 8, Some(3)), (7, 1, Some(9))]
        && ledger.terminal == Terminal::DelPezzo { degree: 7, points: 2 }
        && t < Duration::from_secs(1);
    Line::new(ok, format!("{:?} -> {:?}, {t:.2?}", ledger.summary(), ledger.terminal))
}

fn random_element(rng: &mut ChaCha8Rng, degree: usize) -> ExteriorElement {
    let terms: Vec<(u32, i64)> = basis_masks(degree as i32)
        .iter()
        .map(|&m| (m, rng.gen_range(0..5)))
        .collect();
    ExteriorElement::from_terms(5, degree, &terms).unwrap()
}

fn random_map(rng: &mut ChaCha8Rng, source: &[i32], target: &[i32]) -> EModuleMap {
    let mut m = EModuleMap::zero(5, FreeModuleSpec::new(source.to_vec()), FreeModuleSpec::new(target.to_vec()));
    for (r, &b) in target.iter().enumerate() {
        for (c, &a) in source.iter().enumerate() {
            let j = a - b;
            if (0..=NVARS as i32).contains(&j) {
                m.set(r, c, random_element(rng, j as usize)).unwrap();
            }
        }
    }
    m
}

fn criterion6(recon: &Reconstruction) -> (Line, Vec<(String, bool)>) {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut subs: Vec<(String, bool)> = Vec::new();

    let mut axioms = true;
    for _ in 0..1000 {
        let d: [usize; 3] = loop {
            let d: [usize; 3] = std::array::from_fn(|_| rng.gen_range(0..=NVARS));
            if d.iter().sum::<usize>() <= NVARS {
                break d;
            }
        };
        let (u, v, w) = (random_element(&mut rng, d[0]), random_element(&mut rng, d[1]), random_element(&mut rng, d[2]));
        let l = u.wedge(&v).unwrap().wedge(&w).unwrap();
        let r = u.wedge(&v.wedge(&w).unwrap()).unwrap();
        let sign = if (d[0] * d[1]).is_multiple_of(2) { 1 } else { 4 };
        axioms &= l == r && u.wedge(&v).unwrap() == v.wedge(&u).unwrap().scale(sign);
    }
    subs.push(("exterior axioms on 1000 triples".into(), axioms));

    let mut functorial = true;
    for _ in 0..50 {
        let f = random_map(&mut rng, &[3, 2], &[2, 1, 1]);
        let g = random_map(&mut rng, &[2, 1, 1], &[0, 0]);
        let gf = g.compose(&f).unwrap();
        functorial &= (-6..=6).all(|d| gf.graded_piece(d) == g.graded_piece(d).mul(&f.graded_piece(d)).unwrap());
    }
    subs.push(("graded-piece functoriality".into(), functorial));

    let kk = (2..=5usize).all(|p| {
        (0..=4u32).all(|m| koszul_differential(5, p - 1, m + 1).mul(&koszul_differential(5, p, m)).unwrap().is_zero())
    });
    subs.push(("Koszul differential squares to zero".into(), kk));

    let data = ctx().monad_data(&reference_candidate()).unwrap();
    let mut resolutions = true;
    let mut presentations = vec![data.c.clone()];
    presentations.extend((0..10).map(|_| random_map(&mut rng, &[1, 1, 2], &[0, 0])));
    for f in presentations {
        let res = minimal_resolution(&PresentedEModule::cokernel_of(f), 3);
        resolutions &= res.composites_vanish().unwrap() && res.is_minimal() && res.is_exact();
    }
    subs.push(("resolution minimality and zero composition".into(), resolutions));

    let gb = buchberger(&recon.generators, None).unwrap();
    subs.push((
        "Gröbner reduction of inputs to zero".into(),
        recon.generators.iter().all(|g| gb.reduce(g).is_zero()),
    ));
    let hp = hilbert_polynomial(&gb);
    let agree = recon.slices.iter().all(|s| {
        let m = s.degree as i64;
        hp.evaluate(m) == Rational64::from_integer(dim_s(m) as i64 - s.dim() as i64)
    });
    subs.push(("Hilbert agreement between Gröbner and slices in 5..10".into(), agree));

    let mut invariant = true;
    let base = reference_candidate();
    for _ in 0..100 {
        let g = loop {
            let m = Matrix::from_data(5, 4, 4, (0..16).map(|_| rng.gen_range(0..5u8)).collect());
            if m.rank() == 4 {
                break m;
            }
        };
        let moved = Candidate::new(g.mul(base.matrix()).unwrap(), Provenance::External).unwrap();
        invariant &= ctx().corank(&moved).unwrap() == 2;
    }
    subs.push(("GL4 invariance of membership".into(), invariant));

    let opts = |workers| SearchOptions { trials: 2000, seed: 66, workers, record_time: false };
    subs.push((
        "search determinism across worker counts".into(),
        ctx().random_search(&opts(1), None) == ctx().random_search(&opts(4), None),
    ));

    // Dual segment: the first interior slot is exact; the second is exact only
    // once the Tate summand 5ω(1) is added, which the literal check cannot see.
    let (slot1, slot2) = data.dual_exactness();
    subs.push(("dual exactness at the Cᵀ/Bᵀ slot".into(), slot1));
    subs.push(("dual exactness at the Bᵀ/Aᵀ slot (literal)".into(), slot2));
    let mut ker = syzygy_step(&data.a.transpose()).source().twists().to_vec();
    ker.sort();
    let tate_explained = !slot2
        && ker == [0, 0, 0, 1, 1, 1, 1, 1]
        && image_generators(&data.b.transpose()).source().twists() == [0, 0, 0];

    let t = start.elapsed();
    let others_ok = subs.iter().filter(|s| !s.0.contains("(literal)")).all(|s| s.1);
    let verdict = if !others_ok || t > Duration::from_secs(120) {
        Verdict::Fail
    } else if slot2 {
        Verdict::Pass
    } else if tate_explained {
        Verdict::KnownDeviation
    } else {
        Verdict::Fail
    };
    let passed = subs.iter().filter(|s| s.1).count();
    let mut detail = format!("{passed}/{} sub-checks, {t:.2?}", subs.len());
    if verdict == Verdict::KnownDeviation {
        detail.push_str(
            "; ker Aᵀ needs 5 extra twist-1 generators beyond im Bᵀ (the 5ω(1) Tate summand)",
        );
    }
    (Line { verdict, detail }, subs)
}

fn main() -> ExitCode {
    let dir = tempfile::tempdir().unwrap();
    let mut recon = None;
    let mut lines = vec![("1 phi reproduction", criterion1())];
    lines.push(("2 end-to-end on the bundled candidate", criterion2(&mut recon)));
    lines.push(("3 search statistics", criterion3(dir.path())));
    lines.push(("4 smoothness", criterion4(dir.path())));
    lines.push(("5 adjunction replay", criterion5()));
    let (six, subs) = criterion6(recon.as_ref().expect("criterion 2 ran"));
    lines.push(("6 property suites", six));

    let mut hard_fail = false;
    for (name, line) in &lines {
        let tag = match line.verdict {
            Verdict::Pass => "PASS",
            Verdict::Degraded => "DEGRADED",
            Verdict::KnownDeviation => "FAIL (documented deviation)",
            Verdict::Fail => {
                hard_fail = true;
                "FAIL"
            }
        };
        println!("criterion {name}: {tag}: {}", line.detail);
    }
    for (name, ok) in subs {
        println!("    6.{name}: {}", if ok { "pass" } else { "fail" });
    }
    if hard_fail {
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}
