use std::cmp::Ordering;
use std::sync::OnceLock;

use decagon::partition::*;
use decagon::selfsim::Tower;
use decagon::{CycNum, Location, Table};

fn parts() -> &'static Partitioner {
    static P: OnceLock<Partitioner> = OnceLock::new();
    P.get_or_init(|| Partitioner::new(&Tower::build(&Table::new()).unwrap()).unwrap())
}

fn lt(a: &CycNum, b: &CycNum) -> bool {
    a.cmp_real(b).unwrap() == Ordering::Less
}

#[test]
fn level_one_is_green() {
    let p = parts();
    let l1 = p.initial();
    let (red, green) = p.areas(&l1);
    assert!(red.scaled().is_zero());
    assert_eq!(green, p.total_area());
}

#[test]
fn level_two_reds_are_the_omegas() {
    let p = parts();
    let l2 = p.level(2);
    let reds: Vec<_> = red_set(&l2).into_iter().map(|c| c.base).collect();
    assert_eq!(reds, [Base::OmegaA, Base::OmegaBa, Base::OmegaAb]);
    let (red, _) = p.areas(&l2);
    let want = &(p.base_area(Base::OmegaA) + p.base_area(Base::OmegaBa)) + p.base_area(Base::OmegaAb);
    assert_eq!(red, want);
    // 7 + 3 green cells
    assert_eq!(l2.count(Color::Green), 10);
}

#[test]
fn green_counts_follow_sigma() {
    let p = parts();
    let mut l = p.initial();
    let (mut a, mut b) = (1usize, 1usize);
    for _ in 0..5 {
        l = p.step(&l);
        (a, b) = (5 * a + 3 * b, 2 * a);
        let ga = l.cells.iter().filter(|c| c.color == Color::Green && c.symbol == 'a').count();
        let gb = l.cells.iter().filter(|c| c.color == Color::Green && c.symbol == 'b').count();
        assert_eq!((ga, gb), (a, b), "level {}", l.level);
    }
}

#[test]
fn epsilon_bounds() {
    let e = parts().epsilon();
    assert!(lt(&CycNum::zero(), &e.value) && lt(&e.value, &CycNum::one()));
    assert!(e.value.cmp_real(&e.ced_ratio).unwrap() != Ordering::Greater);
    assert!(e.value.cmp_real(&e.abe_ratio).unwrap() != Ordering::Greater);
    let (fa, fb) = (e.abe_ratio.to_f64_pair().0, e.ced_ratio.to_f64_pair().0);
    assert!((fa - 0.68189).abs() < 1e-4 && (fb - 0.52786).abs() < 1e-4, "{fa} {fb}");
}

#[test]
fn conservation_and_decay() {
    let p = parts();
    let eps = p.epsilon().value;
    let keep = &CycNum::one() - &eps;
    let mut l = p.initial();
    let mut prev = p.areas(&l);
    let mut reds = red_set(&l).into_iter().cloned().collect::<Vec<_>>();
    for _ in 1..=6 {
        let next = p.step(&l);
        let (red, green) = p.areas(&next);
        assert_eq!(&red + &green, p.total_area(), "level {}", next.level);
        assert!(red.cmp(&prev.0) != Ordering::Less);
        let bound = prev.1.times(&keep);
        assert!(green.cmp(&bound) != Ordering::Greater, "level {}", next.level);
        let now = red_set(&next);
        assert!(reds.iter().all(|c| now.contains(c)), "red cells persist");
        reds = now.into_iter().cloned().collect();
        prev = (red, green);
        l = next;
    }
}

#[test]
fn cell_areas_match_geometry() {
    let p = parts();
    let l = p.level(3);
    for c in &l.cells {
        assert_eq!(p.region(c).area().unwrap(), p.cell_area(c), "{c:?}");
    }
}

#[test]
fn cells_tile_x() {
    let p = parts();
    for level in 1..=4 {
        let l = p.level(level);
        assert!(p.overlaps(&l).unwrap().is_empty(), "level {level}");
        assert!(p.misplaced(&l).unwrap().is_empty(), "level {level}");
    }
}

#[test]
fn red_cells_are_periodic_components() {
    let p = parts();
    let l = p.level(4);
    let reds: Vec<_> = red_set(&l).into_iter().collect();
    assert!(reds.len() >= 20);
    for c in reds.iter().step_by(reds.len() / 20).take(20) {
        let r = p.region(c);
        let centre = r.interior_point().unwrap();
        assert_eq!(r.locate(&centre), Location::Interior);
        let comp = p.x.f.component_of(&centre, 100_000).unwrap();
        assert!(comp.same_polygon(&r), "{c:?}");
    }
}

#[test]
fn sampling_beta2_is_periodic() {
    let t = Table::new();
    let beta = t.beta(2).unwrap();
    let vs = beta.region.vertices().unwrap().to_vec();
    let rep = periodic_fraction(
        t.map(decagon::MapChoice::TPrime),
        &decagon::Region::Convex(beta.region.clone()),
        &decagon::sampling::Frame::around(&vs),
        50,
        1000,
        4,
    );
    assert_eq!(rep.periodic, 50);
    assert_eq!(rep.boundary, 0);
    // T′ rotates β₂ by 3π/5 about O₂: generic points return after 10 steps
    assert_eq!(rep.periods.keys().copied().collect::<Vec<_>>(), [10]);
}

#[test]
fn periodic_fraction_small() {
    let p = parts();
    let rep = periodic_fraction_x(&p.x, 300, 100_000, 9);
    assert_eq!(rep.samples, 300);
    assert_eq!(rep.boundary, 0);
    assert!(rep.periodic_fraction() > 0.95, "{rep:?}");
}
