use kmap_core::picard::*;
use kmap_core::poly::Rational;
use kmap_core::projmap::*;
use kmap_core::tower::*;
use num_bigint::BigInt;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

fn draw(n: usize, seed: u64) -> FamilyParams {
    FamilyParams::random(n, 64, &mut ChaCha8Rng::seed_from_u64(seed))
}

fn mul(a: &[i64], b: &[i64]) -> Vec<i64> {
    let mut out = vec![0; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn newton(f: impl Fn(f64) -> f64, df: impl Fn(f64) -> f64, mut x: f64) -> f64 {
    for _ in 0..100 {
        x -= f(x) / df(x);
    }
    x
}

fn restricted_x(n: usize) -> PicMatrix {
    let m = pic_matrix(&draw(n, 1), Family::X).unwrap();
    let last = format!("P{}", n - 1);
    m.restrict(&["H", "E1", "Q", &last]).unwrap()
}

#[test]
fn even_matrix_n2() {
    let m = restricted_x(2);
    let cols: Vec<Vec<i64>> = (0..4).map(|j| m.rows.iter().map(|r| r[j]).collect()).collect();
    assert_eq!(cols, vec![vec![5, -2, -3, -3], vec![0, 1, 0, 0], vec![1, -1, -1, -1], vec![2, -1, -1, -1]]);
}

#[test]
fn even_matrix_matches_the_printed_4x4() {
    for n in [2i64, 4, 6] {
        let m = restricted_x(n as usize);
        let want = vec![
            vec![2 * n + 1, 0, 1, 2],
            vec![-n, 1, -1, -1],
            vec![-n - 1, 0, -1, -1],
            vec![-n * n + 1, 0, -n + 1, -n + 1],
        ];
        assert_eq!(m.rows, want);
        let full = pic_matrix(&draw(n as usize, 2), Family::X).unwrap();
        for j in 1..(n as usize - 1) {
            let c = full.column(&format!("P{j}")).unwrap();
            assert!(c.coeffs.iter().all(|&x| x == 0), "P{j} -> {c}");
        }
    }
}

#[test]
fn even_charpoly() {
    for n in [2i64, 4, 6] {
        let want = mul(&mul(&[0, 1], &[-1, 1]), &[-1, -(n + 1), 1]);
        assert_eq!(charpoly(&restricted_x(n as usize)), int_poly(&want), "n = {n}");
    }
    let eye = PicMatrix::identity(&PicBasis::new(Family::Y, 1).unwrap());
    let three = eye.restrict(&["H", "E1", "Q"]).unwrap();
    assert_eq!(charpoly(&three), int_poly(&mul(&mul(&[-1, 1], &[-1, 1]), &[-1, 1])));
}

#[test]
fn odd_matrices() {
    for n in [1usize, 3, 5] {
        let m = pic_matrix(&draw(n, 3), Family::Y).unwrap();
        if n >= 3 {
            let c = m.column(&format!("P{}", n - 2)).unwrap();
            assert_eq!(c.to_string(), format!("P{n}"));
        }
        let ni = n as i64;
        let cubic = int_poly(&[-1, -(ni + 1), -ni, 1]);
        assert!(factor_multiplicity(&charpoly(&m), &cubic) >= 1, "n = {n}: {}", format_int_poly(&charpoly(&m)));
    }
    let m = pic_matrix(&draw(3, 4), Family::Y).unwrap();
    let h = m.column("H").unwrap();
    assert_eq!(h.coeffs, vec![7, -3, -4, -4, -8, -9]);
}

#[test]
fn spectral_radii() {
    let golden = (1.0 + 5f64.sqrt()) / 2.0;
    assert!((spectral_radius(&int_poly(&[-1, -1, 1]), 1e-12) - golden).abs() < 1e-11);
    let r = (3.0 + 13f64.sqrt()) / 2.0;
    assert!((spectral_radius(&int_poly(&[-1, -3, 1]), 1e-12) - r).abs() < 1e-11);
    let f = |x: f64| x * x * x - x * x - 2.0 * x - 1.0;
    let df = |x: f64| 3.0 * x * x - 2.0 * x - 2.0;
    let root = newton(f, df, 3.0);
    let got = spectral_radius(&int_poly(&[-1, -2, -1, 1]), 1e-12);
    assert!((got - root).abs() < 1e-11 && (got - 2.1479).abs() < 1e-4);
    // a negative root of larger magnitude
    assert!((spectral_radius(&int_poly(&[-6, 1, 1]), 1e-12) - 3.0).abs() < 1e-11);
    let mut last = 0.0;
    for n in 1..12i64 {
        let d = spectral_radius(&int_poly(&[-1, -(n + 1), 1]), 1e-12);
        assert!(d > last && d > (n + 1) as f64 && d < (n + 2) as f64);
        last = d;
    }
}

#[test]
fn growth_classes() {
    let x = pic_matrix(&draw(2, 5), Family::X).unwrap();
    match growth_class(&x, DEFAULT_TOL) {
        GrowthClass::Exponential { delta } => assert!((delta - (3.0 + 13f64.sqrt()) / 2.0).abs() < 1e-9),
        g => panic!("{g}"),
    }
    let eye = PicMatrix::identity(&x.basis);
    assert_eq!(growth_class(&eye, DEFAULT_TOL), GrowthClass::BoundedOrLinear);
    let z = pic_matrix(&FamilyParams::cubic(int(2), int(3)).unwrap(), Family::Z).unwrap();
    assert_eq!(growth_class(&z, DEFAULT_TOL), GrowthClass::Quadratic);
}

#[test]
fn predicted_degree_sequences() {
    let x = pic_matrix(&draw(2, 6), Family::X).unwrap();
    let mut want = vec![BigInt::from(1), BigInt::from(5)];
    for i in 2..=5 {
        let next = BigInt::from(3) * &want[i - 1] + &want[i - 2];
        want.push(next);
    }
    assert_eq!(predicted_degrees(&x, 5), want[1..].to_vec());
    assert_eq!(predicted_degrees(&x, 5), [5, 16, 53, 175, 578].map(BigInt::from).to_vec());
    let y = pic_matrix(&draw(1, 6), Family::Y).unwrap();
    let d = predicted_degrees(&y, 30);
    let f = |x: &BigInt| x.to_string().parse::<f64>().unwrap();
    let ratio = f(&d[29]) / f(&d[28]);
    assert!((ratio - 2.1479).abs() < 1e-3, "{ratio}");
}

#[test]
fn matrix_prediction_matches_iterates() {
    let opts = DegreeOptions::default();
    for (n, m_max, seed) in [(2usize, 4usize, 10u64), (2, 4, 11), (3, 3, 12), (3, 3, 13)] {
        let p = draw(n, seed);
        let m = pic_matrix(&p, Family::by_parity(&p)).unwrap();
        let seq = degree_sequence(&p, m_max, &opts).unwrap();
        let got: Vec<BigInt> = seq.degrees.iter().map(|&d| BigInt::from(d)).collect();
        assert_eq!(got, predicted_degrees(&m, m_max), "n = {n}");
    }
    let exact = DegreeOptions { arithmetic: Arithmetic::Rational, method: Method::Symbolic, ..opts };
    let p = draw(2, 14);
    let m = pic_matrix(&p, Family::X).unwrap();
    let got: Vec<BigInt> = degree_sequence(&p, 2, &exact).unwrap().degrees.iter().map(|&d| d.into()).collect();
    assert_eq!(got, predicted_degrees(&m, 2));
}

#[test]
fn degenerate_parameters_drop_below_the_prediction() {
    let mut coeffs = draw(2, 15).coeffs().to_vec();
    coeffs[0] = int(2);
    let p = FamilyParams::new(coeffs).unwrap();
    let m = pic_matrix(&p, Family::X).unwrap();
    let seq = degree_sequence(&p, 5, &DegreeOptions::default()).unwrap();
    let pred = predicted_degrees(&m, 5);
    assert!(seq.degrees.iter().zip(&pred).any(|(d, q)| BigInt::from(*d) < *q));
    assert!(seq.degrees.iter().zip(&pred).all(|(d, q)| BigInt::from(*d) <= *q));
}

#[test]
fn h_columns_from_vanishing_orders() {
    for (n, fam) in [(2usize, Family::X), (4, Family::X), (3, Family::Y), (5, Family::Y)] {
        let p = draw(n, 20 + n as u64);
        let atlas = build_tower(&p, fam).unwrap();
        let k = build_k(&p).unwrap();
        let h = pullback_h_column(&atlas, &k).unwrap();
        assert_eq!(Some(h), pic_matrix(&p, fam).unwrap().column("H"), "n = {n}");
    }
    let p = FamilyParams::cubic(int(-3), int(5)).unwrap();
    let atlas = build_tower(&p, Family::Z).unwrap();
    let h = pullback_h_column(&atlas, &build_k(&p).unwrap()).unwrap();
    assert_eq!(h.coeffs, vec![7, -3, -4, -4, -8, -9, -10, -10, -10, -3, -4, -6]);
}

#[test]
fn cubic_family_matrix() {
    let p = FamilyParams::cubic(int(1), int(1)).unwrap();
    let res = resolve_z_variant(&p).unwrap();
    assert_eq!(res.chosen, ZVariant::RToP6);
    assert!(res.checks.iter().filter(|c| c.passes()).count() == 1);
    assert!(res.checks.iter().all(|c| c.matches_tower == (c.variant == ZVariant::RToP6)));
    let z = res.matrix;
    let form = IntersectionForm::of_fibers(&z.basis);
    assert!(check_isometry(&z, &form).unwrap());
    assert!(!check_isometry(&z_matrix(ZVariant::E01ToP6), &form).unwrap());
    let cp = charpoly(&z);
    assert!(roots::root_magnitudes(&cp).iter().all(|r| (r - 1.0).abs() < 1e-9));
    let want = mul(&[1, 1], &[-1, 1]);
    let mut full = vec![1i64];
    for _ in 0..4 {
        full = mul(&full, &want);
    }
    for _ in 0..4 {
        full = mul(&full, &[-1, 1]);
    }
    assert_eq!(cp, int_poly(&full));
    assert_eq!(jordan_index_at_one(&z), 3);
    let seq = degree_sequence(&p, 10, &DegreeOptions::default()).unwrap();
    let got: Vec<BigInt> = seq.degrees.iter().map(|&d| d.into()).collect();
    assert_eq!(got, predicted_degrees(&z, 10));
}

#[test]
fn formula_matrices_agree_with_the_tower() {
    let cases: Vec<(Vec<i64>, Family)> = vec![
        (vec![5, 3, -2], Family::X),
        (vec![1, 2, 3, 4, 5], Family::X),
        (vec![5, 3, -2, 7], Family::Y),
        (vec![1, -2, 3, 5, 2, 7], Family::Y),
        (vec![2, 3, 2, 2], Family::Z),
    ];
    for (c, fam) in cases {
        let p = FamilyParams::from_ints(&c).unwrap();
        let atlas = build_tower(&p, fam).unwrap();
        let derived = pic_matrix_from_tower(&atlas, &build_k(&p).unwrap()).unwrap();
        assert_eq!(derived.rows, pic_matrix(&p, fam).unwrap().rows, "{c:?}");
    }
}

#[test]
fn degree_one_model() {
    let p = draw(1, 50);
    let m = pic_matrix(&p, Family::Y).unwrap();
    assert_eq!(m.basis.labels, ["H", "E1", "Q", "P1", "E2"]);
    assert_eq!(m.column("H").unwrap().to_string(), "3H - E1 - 2Q - E2");
    assert_eq!(m.column("E2").unwrap().to_string(), "P1");
    assert_eq!(m.column("P1").unwrap().to_string(), "H");
    let cp = charpoly(&m);
    let want = mul(&mul(&[-1, 1], &[-1, 1]), &[-1, -2, -1, 1]);
    assert_eq!(cp, int_poly(&want));
    let seq = degree_sequence(&p, 6, &DegreeOptions::default()).unwrap();
    let got: Vec<BigInt> = seq.degrees.iter().map(|&d| d.into()).collect();
    assert_eq!(got, predicted_degrees(&m, 6));
}

#[test]
fn fiber_form() {
    let z = PicBasis::new(Family::Z, 3).unwrap();
    let g = IntersectionForm::of_fibers(&z);
    let idx = |l: &str| z.index(l).unwrap();
    // the last fiber of each chain is a (-1)-curve
    for l in ["P6", "E01", "R"] {
        assert_eq!(g.gram[idx(l)][idx(l)], -1);
    }
    assert_eq!(g.gram[idx("E1")][idx("E1")], -4);
    assert_eq!(g.gram[idx("P2")][idx("P3")], 1);
    assert_eq!(g.gram[idx("E2")][idx("R")], 1);
    assert_eq!(g.gram[0][0], 1);
    let k_h = z_matrix(ZVariant::RToP6).column("H").unwrap();
    assert_eq!(g.pair(&k_h, &k_h), 1);
}

#[test]
fn isometry_checks() {
    let x = pic_matrix(&draw(2, 30), Family::X).unwrap();
    assert!(!check_isometry(&x, &IntersectionForm::of_fibers(&x.basis)).unwrap());
    assert!(!check_isometry(&x, &IntersectionForm::diagonal(&x.basis)).unwrap());
    let eye = PicMatrix::identity(&x.basis);
    assert!(check_isometry(&eye, &IntersectionForm::diagonal(&x.basis)).unwrap());
    let z = PicBasis::new(Family::Z, 3).unwrap();
    assert!(matches!(check_isometry(&eye, &IntersectionForm::diagonal(&z)), Err(PicError::Size(4, 12))));
}

#[test]
fn family_errors() {
    assert!(matches!(pic_matrix(&draw(3, 1), Family::X), Err(PicError::Family { .. })));
    assert!(matches!(pic_matrix(&draw(2, 1), Family::Y), Err(PicError::Family { .. })));
    assert!(matches!(pic_matrix(&draw(3, 1), Family::Z), Err(PicError::Family { .. })));
}

#[test]
fn report_dump() {
    let m = pic_matrix(&draw(2, 40), Family::X).unwrap();
    let r = pic_report(&m, DEFAULT_TOL);
    assert_eq!(r["basis"], serde_json::json!(["H", "E1", "Q", "P1"]));
    assert_eq!(r["charpoly_text"], "x^4 - 4*x^3 + 2*x^2 + x");
    assert_eq!(r["isometry"], false);
    assert_eq!(r["growth_class"]["class"], "exponential");
}
