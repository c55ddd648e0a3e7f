use decagon::geometry::{decagon, Location, MapKind};
use decagon::returns::*;
use decagon::sampling::{sample_in, Frame};
use decagon::selfsim::omega_components;
use decagon::symbolic::Substitution;
use decagon::{ConvexRegion, CycNum, PlanarMap, Point, Rational, Region, Table};

fn piece_points(piece: &ConvexRegion, count: usize, seed: u64) -> Vec<Point> {
    let vs = piece.vertices().unwrap().to_vec();
    sample_in(&Region::Convex(piece.clone()), &Frame::around(&vs), count, seed)
}

/// α_j cut down to a bounded window around A₁
fn alpha_window(t: &Table, j: usize) -> ConvexRegion {
    decagon(t.vertex(1), &Rational::from_integer(4.into()))
        .intersect(t.alpha(j))
        .unwrap()
        .unwrap()
}

#[test]
fn h_and_its_fixed_points() {
    let t = Table::new();
    let h = build_h(&t);
    assert_eq!(h.apply(t.vertex(1)), t.q_point(5));
    assert!(h.is_isometry() && h.u.is_one());
    let tpp = t_double_prime(&t);
    for j in 1..=4 {
        let p = h.apply(&t.fixed_point_o(j));
        let r = tpp.first_return(&p).unwrap();
        assert_eq!(r.point, p);
        assert_eq!(r.time, 6 - j);
    }
    let rep = verify_h_structure(&t).unwrap();
    assert!(rep.ok(), "{:?}", rep.checks);
}

#[test]
fn double_prime_return_times() {
    let t = Table::new();
    let h = build_h(&t);
    let tpp = t_double_prime(&t);
    let psi = Substitution::psi();
    for j in 1..=5 {
        let want = psi.image(char::from(b'0' + j as u8)).unwrap();
        for p in piece_points(&alpha_window(&t, j), 20, j as u64) {
            let r = tpp.first_return(&h.apply(&p)).unwrap();
            assert_eq!(r.time, 6 - j);
            assert_eq!(r.path, want);
            let (tp, _) = t.step_t_prime(&p).unwrap();
            assert_eq!(r.point, h.apply(&tp));
        }
    }
    // the side of α₁ that lies inside V′ is undefined for T′
    let vs = t.alpha(1).vertices().unwrap().to_vec();
    let half = Rational::new(1.into(), 2.into());
    let mid = (0..3)
        .map(|k| (&vs[k] + &vs[(k + 1) % 3]).scale(&half))
        .find(|m| t.v_prime().locate(m) == Location::Interior)
        .unwrap();
    assert!(matches!(tpp.first_return(&h.apply(&mid)), Err(ReturnError::Boundary { .. })));
    assert_eq!(tpp.first_return(t.vertex(1)).unwrap_err(), ReturnError::NotInTarget);
}

#[test]
fn psi_on_words() {
    let psi = Substitution::psi();
    assert_eq!(psi.apply("12").unwrap(), "544445444");
    assert_eq!(psi.apply("").unwrap(), "");
    assert!(psi.apply("6").is_err());
}

#[test]
fn h_conjugacy_sampled() {
    let t = Table::new();
    let h = build_h(&t);
    let o2 = t.fixed_point_o(2);
    let r = t_double_prime(&t).first_return(&h.apply(&o2)).unwrap();
    assert_eq!(r.point, h.apply(&o2));
    let rep = verify_h_conjugacy(&t, 200, 50, 9);
    assert!(rep.ok(), "{:?}", rep.counterexamples.first());
    assert!(rep.checked() > 190);
}

#[test]
fn restricted_systems() {
    let t = Table::new();
    let z = build_z_systems(&t).unwrap();
    let [a2, b2] = &z.t2_pieces;
    assert_eq!((a2.time, a2.path.as_str()), (2, "43"));
    assert_eq!((a2.map.kind, &a2.map.u), (MapKind::Direct, &CycNum::zeta_pow(3)));
    assert_eq!(b2.map, PlanarMap::rotation(&t.fixed_point_o(4), 1));
    let [a1, b1] = &z.t1_pieces;
    assert_eq!((a1.time, a1.path.as_str()), (5, "22211"));
    assert_eq!((b1.time, b1.path.as_str()), (3, "222"));
    // the big branch of T′₁ is T′⁵ pointwise
    for p in piece_points(&z.x1.abe, 20, 3) {
        let mut q = p.clone();
        for _ in 0..5 {
            q = t.step_t_prime(&q).unwrap().0;
        }
        assert_eq!(z.t1.first_return(&p).unwrap().point, q);
    }
    // E lies on the cut between the two branches
    let x = build_abstract_x(&z).unwrap().x;
    assert!(z.t2.first_return(&x.quad.e).is_err());
}

#[test]
fn sampled_return_times() {
    let t = Table::new();
    let z = build_z_systems(&t).unwrap();
    for (sys, quad, want) in [(&z.t1, &z.x1, [3, 5]), (&z.t2, &z.x2, [1, 2])] {
        let mut seen = std::collections::BTreeSet::new();
        for piece in quad.pieces() {
            for p in piece_points(&piece, 50, 4) {
                let r = sys.first_return(&p).unwrap();
                assert!(r.time <= sys.max_return);
                assert_eq!(quad.region.locate(&r.point), Location::Interior);
                seen.insert(r.time);
            }
        }
        assert_eq!(seen.into_iter().collect::<Vec<_>>(), want);
    }
}

#[test]
fn deltas() {
    let t = Table::new();
    let z = build_z_systems(&t).unwrap();
    let ax = build_abstract_x(&z).unwrap();
    assert!(ax.delta(2).is_identity());
    let d1 = ax.delta(1);
    assert_eq!(d1.kind, MapKind::Mirror);
    let q = &ax.x.quad;
    let img = [&q.a, &q.b, &q.c, &q.d].map(|p| d1.apply(p));
    assert_eq!(img, [z.x1.a.clone(), z.x1.b.clone(), z.x1.c.clone(), z.x1.d.clone()]);
    for j in 1..=2 {
        let rep = verify_delta_conjugacy(&ax, &z, j, 150, 30, 6 + j as u64);
        assert!(rep.ok(), "Δ{j}: {:?}", rep.counterexamples.first());
        assert!(rep.checked() > 140);
    }
}

#[test]
fn f_branches() {
    let z = build_z_systems(&Table::new()).unwrap();
    let x = build_abstract_x(&z).unwrap().x;
    let q = &x.quad;
    assert_eq!(x.f_b().apply(&q.c), q.b);
    assert_eq!(x.f_b().apply(&q.e), q.f);
    assert_eq!(x.f_b().apply(&q.d), q.c);
    assert_eq!(x.f_a().apply(&q.a), q.f);
    assert_eq!(x.f_a().apply(&q.b), q.d);
    assert_eq!(x.f_a().apply(&q.e), q.a);
    for br in x.f.branches().iter().chain(z.t1.base.branches()) {
        let region = &br.region;
        if region.is_bounded() {
            assert_eq!(region.image(&br.map).area().unwrap(), region.area().unwrap());
        }
    }
    assert_eq!(x.step_f(&q.e), None);
    assert_eq!(x.code(&q.e, 3), Err(0));
}

#[test]
fn f_codes_of_base_components() {
    let z = build_z_systems(&Table::new()).unwrap();
    let x = build_abstract_x(&z).unwrap().x;
    let om = omega_components(&x).unwrap();
    assert_eq!(x.step_f(&om.o_a), Some((om.o_a.clone(), 'a')));
    let (p1, s1) = x.step_f(&om.o_ba).unwrap();
    let (p2, s2) = x.step_f(&p1).unwrap();
    assert_eq!((s1, s2), ('b', 'a'));
    assert_eq!(p2, om.o_ba);
    for p in piece_points(&om.omega_ab, 10, 5) {
        assert_eq!(x.code(&p, 12).unwrap(), "ab".repeat(6));
    }
}

#[test]
fn lifts() {
    assert_eq!(lift_code(1, "a"), "22211");
    assert_eq!(lift_code(2, "ab"), "434");
    assert_eq!(lift_code(1, ""), "");
    assert_eq!(lift_code(2, ""), "");
}
