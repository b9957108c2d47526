use kmap_core::poly::{parse_poly, Rational, Ring, UniPoly};
use kmap_core::projmap::*;
use kmap_core::tower::*;
use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn q(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

fn int(n: i64) -> Rational {
    q(n, 1)
}

fn draws(n: usize, count: u64, seed: u64) -> Vec<FamilyParams> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| FamilyParams::random(n, 64, &mut rng)).collect()
}

fn affine(src: &str, dst: &str, num: [Rational; 2], den: [Rational; 2]) -> MoebiusMap {
    MoebiusMap::from_coeffs(src, dst, num.to_vec(), den.to_vec())
}

fn constant(c: Rational) -> MoebiusMap {
    affine("", "", [c, Rational::zero()], [Rational::one(), Rational::zero()])
}

fn line() -> kmap_core::poly::MultiPoly<Rational> {
    parse_poly("3*x0 - 5*x1 + 7*x2", &Ring::projective()).unwrap()
}

fn atlas(p: &FamilyParams) -> ChartAtlas {
    build_tower(p, Family::by_parity(p)).unwrap()
}

#[test]
fn every_chart_round_trips() {
    let mut params: Vec<FamilyParams> = (1..=5).map(|n| draws(n, 1, n as u64)[0].clone()).collect();
    params.push(FamilyParams::cubic(int(2), int(3)).unwrap());
    for p in &params {
        let fam = if p.cubic_parameters().is_some() { Family::Z } else { Family::by_parity(p) };
        let at = build_tower(p, fam).unwrap();
        for c in &at.charts {
            assert!(c.round_trip().unwrap(), "{} in {fam}", c.name);
            assert!(c.fiber_is_point(), "{} in {fam}", c.name);
        }
        for c in &at.curves {
            assert!(c.round_trip().unwrap(), "{}", c.name);
        }
    }
}

#[test]
fn atlas_contents_and_parity_errors() {
    let y = build_tower(&draws(3, 1, 0)[0], Family::Y).unwrap();
    assert_eq!(y.fiber_names(), ["E1", "Q", "P1", "P2", "P3"]);
    let z = build_tower(&FamilyParams::cubic(int(1), int(1)).unwrap(), Family::Z).unwrap();
    assert_eq!(z.charts.len(), 11);
    assert_eq!(z.fiber_names(), ["E1", "Q", "P1", "P2", "P3", "P4", "P5", "P6", "E2", "E01", "R"]);
    assert!(matches!(build_tower(&draws(3, 1, 0)[0], Family::X), Err(TowerError::Family { .. })));
    assert!(matches!(build_tower(&draws(2, 1, 0)[0], Family::Y), Err(TowerError::Family { .. })));
    let not_cubic = FamilyParams::from_ints(&[2, 1, 3, 1]).unwrap();
    assert!(matches!(build_tower(&not_cubic, Family::Z), Err(TowerError::Family { .. })));
    let dump = z.to_json();
    assert_eq!(dump["charts"].as_array().unwrap().len(), 11);
}

#[test]
fn vanishing_orders() {
    let h = line();
    for n in [2usize, 4] {
        let p = &draws(n, 1, 7)[0];
        let at = atlas(p);
        let k = build_k(p).unwrap();
        assert_eq!(order_of_vanishing(&h, at.chart("E1").unwrap(), Some(&k)).unwrap(), n as u32);
        for j in 1..n {
            let c = at.chart(&format!("P{j}")).unwrap();
            assert_eq!(order_of_vanishing(&h, c, Some(&k)).unwrap(), ((n + 1) * j) as u32);
        }
        let x0 = parse_poly("x0", &Ring::projective()).unwrap();
        let last = at.chart(&format!("P{}", n - 1)).unwrap();
        assert_eq!(order_of_vanishing(&x0, last, None).unwrap(), n as u32);
    }
    let p = &draws(2, 1, 8)[0];
    let at = atlas(p);
    let x1 = parse_poly("x1", &Ring::projective()).unwrap();
    // x1 does not vanish at e1
    assert_eq!(order_of_vanishing(&x1, at.chart("E1").unwrap(), None).unwrap(), 0);
    let zero = parse_poly("x0*x1 - x0*x1", &Ring::projective()).unwrap();
    assert!(order_of_vanishing(&zero, at.chart("E1").unwrap(), None).is_err());
}

#[test]
fn e1_and_last_fiber_maps() {
    for n in [2usize, 3, 4] {
        for p in draws(n, 20, 100 + n as u64) {
            let at = atlas(&p);
            let k = build_k(&p).unwrap();
            let e1 = at.chart("E1").unwrap();
            let m = induced_fiber_map(Some(&k), e1, e1).unwrap();
            assert!(m.same_function(&affine("", "", [int(0), int(-1)], [int(1), int(1)])), "{m}");
            let last = at.chart(&format!("P{}", n - 1)).unwrap();
            let m = induced_fiber_map(Some(&k), last, last).unwrap();
            let an = p.leading().clone();
            // z / (1 + a_n z) for even n, z / (a_n z - 1) for odd n
            let want = if n % 2 == 0 {
                affine("", "", [int(0), int(1)], [int(1), an])
            } else {
                affine("", "", [int(0), int(1)], [int(-1), an])
            };
            assert!(m.same_function(&want), "n = {n}: {m}");
        }
    }
}

#[test]
fn exceptional_curves_land_on_the_last_fiber() {
    for n in [2usize, 4] {
        for p in draws(n, if n == 2 { 20 } else { 4 }, 200 + n as u64) {
            let at = atlas(&p);
            let k = build_k(&p).unwrap();
            let ki = build_k_inverse(&p).unwrap();
            let last = at.chart(&format!("P{}", n - 1)).unwrap();
            let an = p.leading().clone();
            let fwd = Rational::one() / &an;
            let back = if n % 2 == 0 { -fwd.clone() } else { fwd.clone() };
            let mut srcs = vec!["C1".to_string(), "C2".to_string()];
            srcs.extend((1..n - 1).map(|j| format!("P{j}")));
            for s in &srcs {
                let m = induced_fiber_map(Some(&k), at.chart(s).unwrap(), last).unwrap();
                assert!(m.same_function(&constant(fwd.clone())), "{s}: {m}");
                if s != "C2" {
                    let m = induced_fiber_map(Some(&ki), at.chart(s).unwrap(), last).unwrap();
                    assert!(m.same_function(&constant(back.clone())), "inverse {s}: {m}");
                }
            }
        }
    }
}

#[test]
fn odd_n_landing_and_two_cycle() {
    for n in [3usize, 5] {
        for p in draws(n, if n == 3 { 20 } else { 4 }, 300 + n as u64) {
            let at = atlas(&p);
            let k = build_k(&p).unwrap();
            let ki = build_k_inverse(&p).unwrap();
            let (an, an1) = (p.leading().clone(), p.a(n - 1).clone());
            let pn = at.chart(&format!("P{n}")).unwrap();
            let pn2 = at.chart(&format!("P{}", n - 2)).unwrap();
            let start = -&an1 / (&an * &an);
            let bad = (&an1 - int(n as i64 - 1) * &an) / (&an * &an);
            let mut srcs = vec!["C1".to_string(), "C2".to_string()];
            srcs.extend((1..n - 2).map(|j| format!("P{j}")));
            for s in &srcs {
                let m = induced_fiber_map(Some(&k), at.chart(s).unwrap(), pn).unwrap();
                assert!(m.same_function(&constant(start.clone())), "{s}: {m}");
                if s != "C2" {
                    let m = induced_fiber_map(Some(&ki), at.chart(s).unwrap(), pn).unwrap();
                    assert!(m.same_function(&constant(bad.clone())), "inverse {s}: {m}");
                }
            }
            let there = induced_fiber_map(Some(&k), pn, pn2).unwrap();
            let back = induced_fiber_map(Some(&k), pn2, pn).unwrap();
            let cycle = |v: &Rational| back.eval(&there.eval(v).unwrap()).unwrap();
            let mut v = start.clone();
            let n1 = int(n as i64 - 1);
            for m in 1..=10i64 {
                v = cycle(&v);
                // after k^{2m}
                let want = (int(m) * &n1 * &an - int(2 * m + 1) * &an1) / (&an * &an);
                assert_eq!(v, want, "n = {n}, k^{}", 2 * m);
            }
            // the two-cycle applied 2m times
            let mut v = start.clone();
            for m in 1..=10i64 {
                v = cycle(&cycle(&v));
                let want = (int(2 * m) * &n1 * &an - int(4 * m + 1) * &an1) / (&an * &an);
                assert_eq!(v, want);
            }
        }
    }
}

#[test]
fn q_and_c3_exchange() {
    for n in [2usize, 3] {
        for p in draws(n, 20, 400 + n as u64) {
            let at = atlas(&p);
            let k = build_k(&p).unwrap();
            let img = image_in_plane(Some(&k), at.chart("Q").unwrap()).unwrap();
            let want = [
                UniPoly::new(&(), vec![int(1)]),
                UniPoly::new(&(), vec![p.a(0).clone(), int(-1)]),
                UniPoly::zero(&()),
            ];
            assert_eq!(img.coords, want, "{img}");
            let m = induced_fiber_map(Some(&k), at.chart("C3").unwrap(), at.chart("Q").unwrap()).unwrap();
            assert!(m.same_function(&affine("", "", [int(0), int(-1)], [int(1), int(0)])), "{m}");
        }
    }
}

#[test]
fn cubic_family_e2_map_and_cycles() {
    let mut rng = ChaCha8Rng::seed_from_u64(500);
    for i in 0..20 {
        let (a, b) = loop {
            let a = q(rng.gen_range(-9..=9), rng.gen_range(1..=5));
            if !a.is_zero() {
                break (a, q(rng.gen_range(-9..=9), rng.gen_range(1..=5)));
            }
        };
        let p = FamilyParams::cubic(a.clone(), b.clone()).unwrap();
        let at = build_tower(&p, Family::Z).unwrap();
        let k = build_k(&p).unwrap();
        let m = induced_fiber_map(Some(&k), at.chart("E2").unwrap(), at.chart("P5").unwrap()).unwrap();
        let a2 = &a * &a;
        let want = affine("", "", [(int(2) * &b - &a - int(1)) / &a2, int(-1) / &a2], [int(1), int(0)]);
        assert!(m.same_function(&want), "{m}");
        if i >= 3 {
            continue;
        }
        let cat = CurveCatalog::new(&p);
        let eq = |name: &str| cat.get(name).unwrap().equation.clone();
        let image = |name: &str| image_of_fiber(Some(&k), &at, at.chart(name).unwrap()).unwrap();
        let fiber = |name: &str| match image(name) {
            FiberImage::Fiber(m) if !m.is_constant() => m.target,
            other => panic!("{name}: {other}"),
        };
        let curve = |name: &str, on: &str| match image(name) {
            FiberImage::Plane(pi) => assert!(pi.point().is_none() && pi.lies_on(&eq(on)), "{pi}"),
            other => panic!("{name}: {other}"),
        };
        assert_eq!(fiber("C1"), "P4");
        curve("P4", "C1");
        assert_eq!(fiber("E2"), "P5");
        assert_eq!(fiber("P5"), "E2");
        assert_eq!(fiber("C4"), "E01");
        curve("E01", "C4'");
        assert_eq!(fiber("C2"), "P6");
        assert_eq!(fiber("P6"), "R");
        curve("R", "C2'");
        // nothing is contracted any more
        for c in at.charts.iter().chain(&at.curves) {
            match image_of_fiber(Some(&k), &at, c).unwrap() {
                FiberImage::Fiber(m) => assert!(!m.is_constant(), "{m}"),
                FiberImage::Plane(pi) => assert!(pi.point().is_none(), "{pi}"),
            }
        }
    }
}

#[test]
fn orbit_of_the_last_fiber_point() {
    let p = FamilyParams::new(vec![q(1, 3), int(4), int(1)]).unwrap();
    let rep = exceptional_orbit_report(&p, 6).unwrap();
    let o = rep.orbit_of("C1").unwrap();
    assert!(o.curves.contains(&"C2".to_string()));
    let vals: Vec<&str> = o.steps.iter().map(|s| s.value.as_str()).collect();
    assert_eq!(vals, ["1", "1/2", "1/3", "1/4", "1/5", "1/6"]);
    assert!(o.steps.iter().all(|s| s.location == "P1"));
    assert!(rep.first_collision().is_none());
}

#[test]
fn c4_collides_with_e01() {
    for (m, n) in [(3i64, 2usize), (5, 2), (1, 2), (2, 3)] {
        let mut coeffs = draws(n, 1, 600 + m as u64)[0].coeffs().to_vec();
        coeffs[0] = q(2, m);
        let p = FamilyParams::new(coeffs).unwrap();
        let rep = exceptional_orbit_report(&p, 40).unwrap();
        let c = rep.orbit_of("C4").unwrap().collision.clone().unwrap();
        assert_eq!((c.step, c.point.as_str()), ((2 * m - 1) as u32, "e01"));
    }
}

#[test]
fn odd_resonance_collides_on_pn() {
    let p = FamilyParams::new(vec![int(3), int(5), int(1), int(1)]).unwrap();
    assert!(genericity_report(&p, 64).odd_resonance);
    let rep = exceptional_orbit_report(&p, 10).unwrap();
    let c = rep.orbit_of("C1").unwrap().collision.clone().unwrap();
    assert!(c.point.ends_with("in P3"), "{}", c.point);
}

#[test]
fn genericity_examples() {
    assert!(genericity_report(&FamilyParams::from_ints(&[3, 1, 1]).unwrap(), 64).generic);
    let g = genericity_report(&FamilyParams::from_ints(&[3, 0, 1, 1]).unwrap(), 64);
    assert!(g.odd_resonance && g.a0_two_over_m.is_none() && !g.generic);
    let g = genericity_report(&FamilyParams::from_ints(&[2, 1, 1]).unwrap(), 64);
    assert_eq!(g.a0_two_over_m, Some(1));
}

#[test]
fn collision_flags_agree_with_genericity() {
    let mut rng = ChaCha8Rng::seed_from_u64(700);
    let horizon = 12u32;
    for i in 0..100 {
        let n = rng.gen_range(2..=5usize);
        let mut coeffs = FamilyParams::random(n, 64, &mut rng).coeffs().to_vec();
        match i % 4 {
            1 => coeffs[0] = q(2, rng.gen_range(1..=horizon as i64)),
            2 if n % 2 == 1 => coeffs[n - 1] = int(n as i64 - 1) * &coeffs[n] / int(2),
            _ => {}
        }
        let p = FamilyParams::new(coeffs).unwrap();
        let flags = genericity_report(&p, horizon);
        let rep = exceptional_orbit_report(&p, 2 * horizon).unwrap();
        assert_eq!(rep.first_collision().is_some(), !flags.generic, "draw {i}: {:?}", p.coeff_strings());
    }
}
