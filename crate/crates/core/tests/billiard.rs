use decagon::billiard::{rotation_r, MapChoice, Table};
use decagon::dynamics::per_from_induced;
use decagon::geometry::{cross, decagon, dist_sq, Location};
use decagon::sampling::{sample_in, sample_where, Frame};
use decagon::{CycNum, Halt, PlanarMap, Point, Rational, Region};

fn z(k: i64) -> CycNum {
    CycNum::zeta_pow(k)
}

fn q(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

fn outside_points(count: usize, seed: u64) -> Vec<Point> {
    let vs: Vec<Point> = (0..10).map(|k| z(k).scale(&q(5, 1))).collect();
    let table = decagon(&CycNum::zero(), &q(1, 1));
    sample_where(&Frame::around(&vs), count, seed, |p| table.locate(p) == Location::Outside)
}

fn v_prime_points(t: &Table, count: usize, seed: u64) -> Vec<Point> {
    let window = decagon(t.vertex(1), &q(4, 1)).intersect(t.v_prime()).unwrap().unwrap();
    let vs = window.vertices().unwrap().to_vec();
    sample_in(&Region::Convex(window), &Frame::around(&vs), count, seed)
}

#[test]
fn central_symmetry_steps() {
    let t = Table::new();
    // A₃ plus one step along each boundary ray of V₃
    let p = &(&z(3) + &(&z(3) - &z(4))) + &(&z(2) - &z(3));
    assert_eq!(t.sector(3).locate(&p), Location::Interior);
    let (tp, i) = t.step_t(&p).unwrap();
    assert_eq!(i, 3);
    assert_eq!(tp, &z(3).scale(&q(2, 1)) - &p);
    assert_eq!(t.step_t_inv(&tp).unwrap().0, p);
    // on the ray extending A₁A₀ beyond A₀
    let ray = &z(0) + &(&z(0) - &z(1));
    assert!(t.step_t(&ray).is_err());
    assert_eq!(t.period(&ray, MapChoice::T, 5), Halt::Boundary { step: 0 });
    assert!(t.step_t(&CycNum::zero()).is_err());
}

#[test]
fn orbits_of_o2() {
    let t = Table::new();
    let o2 = t.fixed_point_o(2);
    assert_eq!(t.orbit(&o2, MapChoice::TPrime, 10).halt, Halt::Period { step: 1 });
    let rec = t.orbit(&o2, MapChoice::T, 20);
    assert_eq!(rec.halt, Halt::Period { step: 5 });
    assert_eq!(rec.steps.len(), 5);
    assert_eq!(rec.steps[0].z, o2);
}

#[test]
fn representatives() {
    let t = Table::new();
    for p in v_prime_points(&t, 20, 1) {
        assert_eq!(t.r_prime(&p).unwrap(), (p.clone(), 0));
        assert_eq!(t.r_prime(&(&p * &z(1))).unwrap(), (p.clone(), 1));
    }
    for p in outside_points(200, 2) {
        let Ok((r, k)) = t.r_prime(&p) else { continue };
        assert!(k < 10);
        assert_eq!(t.v_prime().locate(&r), Location::Interior);
        assert_eq!(rotation_r(k as i64).apply(&p), r);
    }
}

#[test]
fn induced_pieces() {
    let t = Table::new();
    for i in 1..=4 {
        let o = t.fixed_point_o(i);
        assert_eq!(t.step_t_prime(&o).unwrap(), (o.clone(), i as u8));
        assert_eq!(t.alpha(i).locate(&o), Location::Interior);
        let (d1, d2) = t.o_distances(i);
        assert_eq!(d1, d2);
        assert_eq!(t.alpha_pieces().branches()[i - 1].map.apply(&o), o);
    }
    let shift = t.vertex(1) - t.vertex(6);
    let rot2 = PlanarMap::rotation(&t.fixed_point_o(2), 3);
    for p in v_prime_points(&t, 300, 3) {
        let Ok((tp, v)) = t.step_t_prime(&p) else { continue };
        assert_eq!(t.v_prime().locate(&tp), Location::Interior);
        // T′ = R^{v₀}∘T
        let (tq, _) = t.step_t(&p).unwrap();
        assert_eq!(rotation_r(v as i64).apply(&tq), tp);
        match v {
            5 => assert_eq!(tp, &p + &shift),
            2 => assert_eq!(tp, rot2.apply(&p)),
            _ => {}
        }
    }
}

#[test]
fn alpha_pieces_tile_v_prime() {
    let t = Table::new();
    let window = decagon(t.vertex(1), &q(6, 1)).intersect(t.v_prime()).unwrap().unwrap();
    let pieces: Vec<_> = (1..=5)
        .map(|i| window.intersect(t.alpha(i)).unwrap().unwrap())
        .collect();
    assert_eq!(window.covered_area(&pieces).unwrap(), window.area().unwrap());
    for i in 0..5 {
        for j in i + 1..5 {
            assert!(pieces[i].intersect(&pieces[j]).unwrap().is_none(), "{i} {j}");
        }
    }
    assert!(!t.alpha(5).is_bounded());
    assert!(t.alpha(1).is_bounded() && t.alpha(1).vertices().unwrap().len() == 3);
}

#[test]
fn components_of_fixed_points() {
    let t = Table::new();
    for (i, n) in [(1, 5), (2, 10), (3, 5), (4, 10)] {
        let o = t.fixed_point_o(i);
        let c = t.component_of(&o, MapChoice::TPrime, 20).unwrap();
        let vs = c.vertices().unwrap();
        assert_eq!(vs.len(), n, "O{i}");
        assert!(c.is_regular());
        assert!(vs.iter().all(|v| dist_sq(v, &o) == dist_sq(&vs[0], &o)));
        // T′ maps βᵢ onto itself
        let img = c.image(&t.alpha_pieces().branches()[i - 1].map);
        assert!(img.same_polygon(&c));
        assert_eq!(t.period(&o, MapChoice::T, 100), Halt::Period { step: per_from_induced(1, i as u64) as usize });
    }
    // β₄ is congruent to the table
    let b4 = t.beta(4).unwrap();
    assert_eq!(dist_sq(&b4.labels[0], &b4.labels[1]), dist_sq(&z(0), &z(1)));
}

#[test]
fn beta_interiors() {
    let t = Table::new();
    for i in 1..=4 {
        let b = t.beta(i).unwrap();
        let region = Region::Convex(b.region.clone());
        let pts = sample_in(&region, &Frame::around(&b.labels), 30, 10 + i as u64);
        let sym = char::from(b'0' + i as u8);
        for p in pts {
            assert_eq!(t.map(MapChoice::TPrime).code(&p, 8).unwrap(), sym.to_string().repeat(8));
            let comp = t.component_of(&p, MapChoice::TPrime, 100).unwrap();
            // generic points of a rotated polygon have a longer induced period
            // than its centre, but share the same component
            assert!(comp.same_polygon(&b.region));
            let per = t.period(&p, MapChoice::T, 1000).period().unwrap();
            assert_eq!(per % per_from_induced(1, i as u64) as usize, 0);
        }
    }
}

#[test]
fn sides_parallel_to_table() {
    let t = Table::new();
    let sides: Vec<Point> = (0..5).map(|k| &z(k + 1) - &z(k)).collect();
    for p in v_prime_points(&t, 40, 7) {
        let Ok(c) = t.component_of(&p, MapChoice::TPrime, 2000) else { continue };
        let vs = c.vertices().unwrap();
        for (a, b) in vs.iter().zip(vs.iter().cycle().skip(1)) {
            let d = b - a;
            assert!(sides.iter().any(|s| cross(&d, s).is_zero()));
        }
        assert_eq!(c.locate(&p), Location::Interior);
    }
}

#[test]
fn period_lift_formula() {
    assert_eq!(per_from_induced(1, 2), 5);
    assert_eq!(per_from_induced(1, 5), 2);
    assert_eq!(per_from_induced(3, 10), 3);
    let t = Table::new();
    for p in v_prime_points(&t, 60, 8) {
        let rec = t.orbit(&p, MapChoice::TPrime, 5000);
        let Some(m) = rec.halt.period() else { continue };
        let s: u64 = rec.code().bytes().map(|b| (b - b'0') as u64).sum();
        let per = t.period(&p, MapChoice::T, 100_000).period().unwrap();
        assert_eq!(per as u64, per_from_induced(m as u64, s));
    }
}

#[test]
fn equivariance() {
    let t = Table::new();
    let r = rotation_r(1);
    let mut checked = 0;
    for p in outside_points(1000, 4) {
        let Ok((tp, i)) = t.step_t(&p) else { continue };
        let (trp, j) = t.step_t(&r.apply(&p)).unwrap();
        assert_eq!(trp, r.apply(&tp));
        assert_eq!(j, (i + 9) % 10);
        checked += 1;
    }
    assert!(checked > 990);
}

#[test]
fn code_relation() {
    let t = Table::new();
    for p in v_prime_points(&t, 50, 5) {
        let Ok(induced) = t.map(MapChoice::TPrime).code(&p, 40) else { continue };
        let rec = t.orbit(&p, MapChoice::T, 2000);
        let rho: Vec<i64> = rec.steps.iter().map(|s| s.sector as i64).collect();
        let rho_prime: Vec<i64> = induced.bytes().map(|b| (b - b'0') as i64).collect();
        for i in 1..rho_prime.len().min(rho.len()) {
            assert_eq!(rho_prime[i], (rho[i] - rho[i - 1]).rem_euclid(10));
        }
    }
}
