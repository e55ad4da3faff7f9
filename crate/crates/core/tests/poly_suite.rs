use std::sync::OnceLock;
use std::time::Duration;

use beilinson::bgg::{embedding_section, expected_hilbert, ideal_slices, minimal_generators};
use beilinson::gf::EchelonBasis;
use beilinson::monad::{reference_candidate, MonadContext};
use beilinson::poly::groebner::buchberger;
use beilinson::poly::hilbert::{hilbert_polynomial, HilbertPolynomial};
use beilinson::poly::io::{parse_polynomial, Ideal};
use beilinson::poly::jacobian::{jacobian_singular_locus, SingularLocus};
use beilinson::poly::points::{projective_count, rational_point_scan, ExtensionField, Fq};
use beilinson::poly::{dim_s, monomials_of_degree, Monomial, MonomialBasis, Polynomial};
use num_rational::Rational64;
use proptest::prelude::*;

const P: u32 = 5;

fn surface() -> &'static Vec<Polynomial> {
    static GENS: OnceLock<Vec<Polynomial>> = OnceLock::new();
    GENS.get_or_init(|| {
        let data = MonadContext::default_prime().monad_data(&reference_candidate()).unwrap();
        let e = embedding_section(&data).unwrap();
        minimal_generators(&ideal_slices(&data, &e.psi, &[5, 6]).unwrap())
    })
}

/// dim I_d by linear algebra on all monomial multiples of the generators.
fn ideal_dim_oracle(gens: &[Polynomial], d: u32) -> usize {
    let mb = MonomialBasis::new(d);
    let mut ech = EchelonBasis::new(P, mb.len());
    for g in gens {
        let gd = g.degree().unwrap();
        if gd > d {
            continue;
        }
        for m in monomials_of_degree(d - gd) {
            ech.insert(&mb.coefficients(&g.mul_monomial(&m)));
        }
    }
    ech.rank()
}

fn member_oracle(gens: &[Polynomial], f: &Polynomial) -> bool {
    let d = f.degree().unwrap();
    let mb = MonomialBasis::new(d);
    let mut ech = EchelonBasis::new(P, mb.len());
    for g in gens {
        let gd = g.degree().unwrap();
        if gd <= d {
            for m in monomials_of_degree(d - gd) {
                ech.insert(&mb.coefficients(&g.mul_monomial(&m)));
            }
        }
    }
    ech.contains(&mb.coefficients(f))
}

fn homogeneous(degree: u32) -> impl Strategy<Value = Polynomial> {
    let n = dim_s(degree as i64);
    prop::collection::vec(0..P as u8, n)
        .prop_filter("nonzero", |c| c.iter().any(|&x| x != 0))
        .prop_map(move |c| MonomialBasis::new(degree).polynomial(P, &c))
}

fn small_ideal() -> impl Strategy<Value = Vec<Polynomial>> {
    prop::collection::vec((1u32..=2).prop_flat_map(homogeneous), 1..=3)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn groebner_matches_linear_algebra(gens in small_ideal(), probe in homogeneous(3)) {
        let gb = buchberger(&gens, None).unwrap();
        prop_assert!(gb.is_groebner());
        prop_assert!(gb.is_reduced());
        for g in &gens {
            prop_assert!(gb.reduce(g).is_zero());
        }
        prop_assert_eq!(gb.contains(&probe), member_oracle(&gens, &probe));
        // The Hilbert function agrees with the linear-algebra oracle.
        let lms: Vec<Monomial> = gb.leading_monomials();
        let num = beilinson::poly::hilbert::hilbert_numerator(&lms);
        for d in 0..=4u32 {
            let hf = beilinson::poly::hilbert::hilbert_function_value(&num, d as i64);
            prop_assert_eq!(hf as usize, dim_s(d as i64) - ideal_dim_oracle(&gens, d));
        }
    }

    #[test]
    fn groebner_ignores_generator_order(gens in small_ideal()) {
        let a = buchberger(&gens, None).unwrap();
        let mut rev = gens.clone();
        rev.reverse();
        let b = buchberger(&rev, None).unwrap();
        prop_assert_eq!(a.generators(), b.generators());
    }
}

#[test]
fn twisted_cubic() {
    // 2×2 minors of [[x0,x1,x2],[x1,x2,x3]] inside x4 = 0.
    let f = |s: &str| parse_polynomial(P, s).unwrap();
    let gens = vec![
        f("x0*x2-x1^2"),
        f("x0*x3-x1*x2"),
        f("x1*x3-x2^2"),
        f("x4"),
    ];
    let gb = buchberger(&gens, None).unwrap();
    let hp = hilbert_polynomial(&gb);
    assert_eq!(hp.projective_dim, 1);
    assert_eq!(hp.degree, 3);
    assert_eq!(hp.to_string(), "3n + 1");
}

#[test]
fn complete_intersection_hilbert() {
    // Quadric ∩ cubic in P⁴: a surface of degree 6.
    let f = |s: &str| parse_polynomial(P, s).unwrap();
    let gens = vec![f("x0^2+x1*x2+x3*x4"), f("x0^3+x1^3+x2^3+x3^3+x4^3")];
    let gb = buchberger(&gens, None).unwrap();
    let hp = hilbert_polynomial(&gb);
    assert_eq!(hp.projective_dim, 2);
    assert_eq!(hp.degree, 6);
    for n in 4..9 {
        let oracle = dim_s(n) - ideal_dim_oracle(&gens, n as u32);
        assert_eq!(hp.evaluate(n), Rational64::from_integer(oracle as i64));
    }
}

#[test]
fn surface_groebner_basis() {
    let gens = surface();
    assert_eq!(gens.len(), 9);
    let gb = buchberger(gens, None).unwrap();
    assert_eq!(gb.len(), 14);
    assert!(gb.is_groebner());
    assert_eq!(gb.generators().iter().map(|g| g.degree().unwrap()).max(), Some(6));
    let hp: HilbertPolynomial = hilbert_polynomial(&gb);
    assert_eq!(hp.integer_coefficients(), Some(vec![1, -6, 6]));
    assert_eq!((hp.projective_dim, hp.degree), (2, 12));
    assert_eq!((hp.sectional_genus, hp.chi), (Some(13), Some(1)));
    for m in 5..=10 {
        assert_eq!(hp.evaluate(m), Rational64::from_integer(expected_hilbert(m)));
    }
}

#[test]
fn surface_is_smooth() {
    let verdict = jacobian_singular_locus(surface(), None).unwrap();
    assert!(verdict.is_smooth(), "{verdict:?}");
}

#[test]
fn smoothness_respects_budget() {
    let verdict = jacobian_singular_locus(surface(), Some(Duration::ZERO)).unwrap();
    assert!(matches!(verdict, SingularLocus::Inconclusive { .. }));
}

#[test]
fn point_scans() {
    let f5 = ExtensionField::new(P, 1).unwrap();
    let scan = rational_point_scan(surface(), &f5, true);
    assert_eq!(scan.candidates, projective_count(5));
    assert_eq!(scan.points.len(), 41);
    assert!(scan.rank_deficient(2).is_empty());

    let f25 = ExtensionField::new(P, 2).unwrap();
    assert_eq!(f25.modulus_description(), "F_5[t]/(t^2-2)");
    let scan25 = rational_point_scan(surface(), &f25, true);
    assert_eq!(scan25.points.len(), 751);
    assert!(scan25.points.iter().all(|p| p.jacobian_rank == Some(2)));
    // F_5-points are exactly the Frobenius-fixed F_25-points.
    let fixed = scan25
        .points
        .iter()
        .filter(|p| p.coords.iter().all(|&c| f25.frobenius(c) == c))
        .count();
    assert_eq!(fixed, 41);
}

#[test]
fn extension_field_axioms() {
    let f = ExtensionField::new(P, 2).unwrap();
    let elems = f.elements();
    assert_eq!(elems.len(), 25);
    let t = Fq { a: 0, b: 1 };
    assert_eq!(f.mul(t, t), f.from_base(2));
    for &x in &elems {
        assert_eq!(f.pow(x, 25), x);
        if x != f.zero() {
            assert_eq!(f.mul(x, f.inv(x).unwrap()), f.one());
        }
        for &y in elems.iter().step_by(3) {
            assert_eq!(f.frobenius(f.mul(x, y)), f.mul(f.frobenius(x), f.frobenius(y)));
            assert_eq!(f.frobenius(f.add(x, y)), f.add(f.frobenius(x), f.frobenius(y)));
        }
    }
}

#[test]
fn ideal_text_round_trip() {
    let ideal = Ideal::new(P, surface().clone());
    let text = ideal.to_text();
    assert!(text.starts_with("p 5\nvars x0 x1 x2 x3 x4\n"));
    let back = Ideal::parse(&text).unwrap();
    assert_eq!(back.generators, ideal.generators);
    assert!(Ideal::parse("p 6\nvars x0 x1 x2 x3 x4\n").is_err());
    assert!(Ideal::parse("p 5\nvars a b c\n").is_err());
    assert!(Ideal::parse("p 5\nvars x0 x1 x2 x3 x4\nx0^^2\n").is_err());
}
