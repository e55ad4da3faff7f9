use std::sync::OnceLock;

use beilinson::bgg::*;
use beilinson::gf::{EchelonBasis, Matrix};
use beilinson::monad::{reference_candidate, MonadContext, MonadData};
use beilinson::poly::points::{rational_point_scan, ExtensionField};
use beilinson::poly::{binomial, dim_s, Monomial, MonomialBasis, Polynomial};

fn data() -> &'static MonadData {
    static DATA: OnceLock<MonadData> = OnceLock::new();
    DATA.get_or_init(|| MonadContext::default_prime().monad_data(&reference_candidate()).unwrap())
}

fn recon() -> &'static Reconstruction {
    static R: OnceLock<Reconstruction> = OnceLock::new();
    R.get_or_init(|| reconstruct_ideal(data(), &RECONSTRUCTION_DEGREES).unwrap())
}

// Bott's formula: h⁰(Ω^p(d)) = C(d+4−p, d)·C(d−1, p) on P⁴.
fn bott(p: u64, d: u64) -> u64 {
    if p == 0 {
        return binomial(d + 4, 4);
    }
    if d <= p {
        return 0;
    }
    binomial(d + 4 - p, d) * binomial(d - 1, p)
}

#[test]
fn koszul_sections_match_bott() {
    for p in 0..=4usize {
        for m in 0..=4u32 {
            let k = koszul_sections(5, p, m);
            assert_eq!(k.dim() as u64, bott(p as u64, p as u64 + m as u64), "p={p} m={m}");
            // Sections really are cycles.
            if p > 0 && k.dim() > 0 {
                let d = koszul_differential(5, p, m);
                assert!(d.mul(&k.basis()).unwrap().is_zero());
            }
        }
    }
}

#[test]
fn koszul_differential_squares_to_zero() {
    for p in 2..=5usize {
        for m in 0..=4u32 {
            let outer = koszul_differential(5, p - 1, m + 1);
            let inner = koszul_differential(5, p, m);
            assert!(outer.mul(&inner).unwrap().is_zero(), "p={p} m={m}");
        }
    }
}

#[test]
fn monad_cohomology_small_twists() {
    let h = monad_h0(data(), 0).unwrap();
    assert_eq!((h.h0, h.h1), (0, Some(3)));
    let expected = [(1, 5), (2, 29), (3, 77)];
    for (n, h0) in expected {
        let h = monad_h0(data(), n).unwrap();
        assert_eq!(h.h0, h0, "n={n}");
        assert_eq!(h.h0, h.kernel_b - h.rank_a);
    }
    let h1 = monad_h0(data(), 1).unwrap();
    assert_eq!((h1.kernel_b, h1.rank_a, h1.middle_sections), (25, 20, 40));
}

#[test]
fn ideal_dimension_complements_hilbert_polynomial() {
    for n in 1..=6u32 {
        let h = monad_h0(data(), n).unwrap();
        let m = (n + PSI_DEGREE) as i64;
        assert_eq!(h.h0 as i64 + expected_hilbert(m), dim_s(m) as i64, "n={n}");
    }
}

#[test]
fn embedding_solution_space() {
    let e = &recon().embedding;
    assert_eq!(e.solution_dim, 3 * dim_s(PSI_DEGREE as i64) + 1);
    assert_eq!(e.solution_dim, 211);
    assert_eq!(e.factoring, 210);
    assert_eq!(e.essential_dim(), 1);
    assert_eq!(e.nullity, e.redundancy + e.solution_dim);
}

#[test]
fn slices_and_generators() {
    let r = recon();
    let dims: Vec<usize> = r.slices.iter().map(|s| s.dim()).collect();
    assert_eq!(dims, vec![5, 29, 77, 158, 282, 460]);
    let by_degree: Vec<u32> = r.generators.iter().map(|g| g.degree().unwrap()).collect();
    assert_eq!(by_degree, vec![5, 5, 5, 5, 5, 6, 6, 6, 6]);
    // Five quintics times five variables span 25 of the 29 sextics.
    assert_eq!(multiplication_rank(&r.slices[0]), 25);
    for g in &r.generators {
        assert!(g.is_homogeneous());
    }
}

#[test]
fn slices_are_closed_under_multiplication() {
    let r = recon();
    for w in r.slices.windows(2) {
        for f in &w[0].basis {
            for i in 0..5 {
                assert!(w[1].contains(&f.mul_monomial(&Monomial::var(i))));
            }
        }
    }
}

#[test]
fn hilbert_fit_recovers_invariants() {
    let fit = &recon().fit;
    assert_eq!(fit.coefficients, [1, -6, 6]);
    assert_eq!((fit.degree, fit.sectional_genus, fit.chi), (12, 13, 1));
    for &(m, v) in &fit.values {
        assert_eq!(v, expected_hilbert(m as i64));
    }
    // Four consecutive degrees suffice, three do not.
    assert!(hilbert_fit(&recon().slices[..4]).is_ok());
    assert!(hilbert_fit(&recon().slices[..3]).is_err());
}

#[test]
fn ideal_is_independent_of_the_gauge() {
    let r = recon();
    let e = &r.embedding;
    let p = e.psi.prime;
    let mut coeffs = e.psi.scaled(2).coeffs;
    for (k, g) in e.gauge.iter().enumerate().step_by(7) {
        let c = (k % 4 + 1) as u32;
        for (x, &y) in coeffs.iter_mut().zip(g) {
            *x = ((*x as u32 + c * y as u32) % p) as u8;
        }
    }
    let moved = SectionMap {
        prime: p,
        twists: e.psi.twists.clone(),
        coeffs,
    };
    let slices = ideal_slices(data(), &moved, &[5, 6]).unwrap();
    assert_eq!(slices, r.slices[..2].to_vec());
}

#[test]
fn generators_vanish_on_rational_points() {
    let r = recon();
    let f5 = ExtensionField::new(5, 1).unwrap();
    let scan = rational_point_scan(&r.generators, &f5, false);
    assert_eq!(scan.points.len(), 41);
    // Every element of I_7 vanishes there too.
    for pt in &scan.points {
        let coords: [u8; 5] = std::array::from_fn(|i| pt.coords[i].a);
        for f in &r.slices[2].basis {
            assert_eq!(f.evaluate(&coords), 0);
        }
    }
}

#[test]
fn slice_bases_are_reduced_echelon() {
    let s = &recon().slices[1];
    let mb = MonomialBasis::new(s.degree);
    let rows = s.coefficient_rows();
    let m = Matrix::from_data(5, rows.len(), mb.len(), rows.concat());
    assert_eq!(m.rref().reduced, m);
    let mut ech = EchelonBasis::new(5, mb.len());
    for r in &rows {
        assert!(ech.insert(r));
    }
    assert!(!s.contains(&Polynomial::monomial(5, Monomial::new([6, 0, 0, 0, 0]), 1)));
}

#[test]
fn tate_complex_of_the_polynomial_ring() {
    let s = GradedModule::polynomial_ring(5, 0, 6);
    let pos = tate_truncation_exactness(&s).unwrap();
    assert!(pos.iter().all(|t| t.composes_to_zero));
    assert!(pos.iter().all(|t| t.exact), "{pos:?}");
}

#[test]
fn tate_complex_of_the_residue_field() {
    let k = GradedModule::residue_field(5, -3, 3);
    let pos = tate_truncation_exactness(&k).unwrap();
    assert!(pos.iter().all(|t| t.composes_to_zero));
    for t in &pos {
        // K sits in degree 0 only; its complex is ω_E there and zero elsewhere.
        assert_eq!(t.exact, t.position != 0, "{t:?}");
    }
}
