use kmap_core::poly::{parse_poly, Rational, Ring};
use kmap_core::projmap::*;
use num_bigint::BigInt;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn q(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

fn draw(n: usize, seed: u64) -> FamilyParams {
    FamilyParams::random(n, 64, &mut ChaCha8Rng::seed_from_u64(seed))
}

#[test]
fn iota_is_an_involution() {
    let iota = build_iota();
    assert!(iota.compose(&iota).unwrap().is_identity());
}

#[test]
fn jf_is_an_involution() {
    for n in 0..=4 {
        let jf = build_jf(&draw(n, n as u64));
        assert!(jf.compose(&jf).unwrap().is_identity(), "n = {n}");
    }
}

#[test]
fn closed_form_matches_composition() {
    for n in 1..=4 {
        for seed in 0..3 {
            let p = draw(n, seed);
            let k = build_k(&p).unwrap();
            assert_eq!(k.degree(), 2 * n as u32 + 1);
            let comp = build_jf(&p).compose(&build_iota()).unwrap();
            assert_eq!(comp.components(), k.components(), "n = {n}");
        }
    }
}

#[test]
fn inverse_closed_form() {
    for n in 1..=3 {
        let p = draw(n, 10 + n as u64);
        let k = build_k(&p).unwrap();
        let ki = build_k_inverse(&p).unwrap();
        assert!(k.compose(&ki).unwrap().is_identity(), "k o k^-1, n = {n}");
        assert!(ki.compose(&k).unwrap().is_identity(), "k^-1 o k, n = {n}");
    }
}

#[test]
fn k_is_undefined_at_e1_and_contracts_c4() {
    let p = FamilyParams::new(vec![q(1, 3), q(2, 1), q(-1, 2)]).unwrap();
    let k = build_k(&p).unwrap();
    assert!(matches!(k.apply(&e1()), Err(MapError::Indeterminate(_))));
    // [s(s+t) : s^2 : t(s+t)] at s = 1, t = 2 lies on C4
    let pt = ProjPoint::new([q(3, 1), q(1, 1), q(6, 1)]).unwrap();
    let img = k.apply(&pt).unwrap();
    assert_eq!(img, ProjPoint::new([q(1, 1), q(-2, 3), q(0, 1)]).unwrap());
}

#[test]
fn jacobian_exponents() {
    for n in 1..=4 {
        let p = draw(n, 20 + n as u64);
        let cat = CurveCatalog::new(&p);
        let rep = jacobian_factored(&build_k(&p).unwrap(), &cat.forward).unwrap();
        let n = n as u32;
        assert_eq!(rep.exponents(), vec![3 * n - 3, 3 * n - 1, 2, 1]);
        assert!(rep.remainder_constant);
        let rep = jacobian_factored(&build_k_inverse(&p).unwrap(), &cat.backward).unwrap();
        assert_eq!(rep.exponents(), vec![3 * n - 3, 2, 2, 1], "inverse, n = {n}");
        assert!(rep.remainder_constant);
    }
}

#[test]
fn exceptional_images() {
    let p = draw(2, 5);
    let cat = CurveCatalog::new(&p);
    let k = build_k(&p).unwrap();
    let ki = build_k_inverse(&p).unwrap();
    let a0 = p.a(0).clone();
    let expect_c4 = ProjPoint::new([q(1, 1), a0 - q(1, 1), q(0, 1)]).unwrap();
    assert_eq!(image_of_curve(&k, cat.get("C4").unwrap()).unwrap(), CurveImage::Point(expect_c4));
    for c in ["C1", "C2", "C3"] {
        assert_eq!(image_of_curve(&k, cat.get(c).unwrap()).unwrap(), CurveImage::Point(e1()), "{c}");
    }
    for (c, pt) in [("C1'", e1()), ("C3'", e1()), ("C2'", e2()), ("C4'", e01())] {
        assert_eq!(image_of_curve(&ki, cat.get(c).unwrap()).unwrap(), CurveImage::Point(pt), "{c}");
    }
}

#[test]
fn base_points() {
    let p = draw(2, 6);
    let cat = CurveCatalog::new(&p);
    let k = build_k(&p).unwrap();
    // on the plane, e1 also lies on x2 = 0; e01 is the only other one
    let bp = base_points_on_curve(&k, cat.get("C3").unwrap()).unwrap();
    assert_eq!(bp.points, vec![e1(), e01()]);
    let mut bp = base_points_on_curve(&k, cat.get("C1").unwrap()).unwrap().points;
    bp.sort_by_key(|p| p.to_string());
    let mut want = vec![e1(), e2()];
    want.sort_by_key(|p| p.to_string());
    assert_eq!(bp, want);
}

#[test]
fn invariant_of_cubic_family() {
    let r = Ring::projective();
    let p = FamilyParams::cubic(q(2, 1), q(3, 1)).unwrap();
    let phi1 = parse_poly("x0^2*x2^2", &r).unwrap();
    let phi2 = parse_poly(
        "-2*x0^4 + 4*x0^3*x1 - 2*x0^2*x1^2 + 2*2*x1*x2^2*(x0 + x2) - 2*3*(x0^3*x2 - x0^2*x1*x2)",
        &r,
    )
    .unwrap();
    assert!(check_invariant(&build_k(&p).unwrap(), &phi1, &phi2).unwrap());
}

#[test]
fn degree_sequences() {
    let p = draw(2, 7);
    let opts = DegreeOptions::default();
    let s = degree_sequence(&p, 4, &opts).unwrap();
    assert_eq!(s.degrees, vec![5, 16, 53, 175]);
    let s = degree_sequence(&p, 2, &DegreeOptions { arithmetic: Arithmetic::Rational, method: Method::Symbolic, ..opts.clone() }).unwrap();
    assert_eq!(s.degrees, vec![5, 16]);
    let s = degree_sequence(&p, 3, &DegreeOptions { method: Method::Symbolic, ..opts.clone() }).unwrap();
    assert_eq!(s.degrees, vec![5, 16, 53]);
}
