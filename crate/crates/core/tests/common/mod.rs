//! Helpers shared by the integration tests.
#![allow(dead_code)]

use std::collections::BTreeSet;

use decagon::{CycNum, Rational};
use proptest::prelude::*;

pub fn rational() -> impl Strategy<Value = Rational> {
    (-10_000i64..10_000, 1i64..500).prop_map(|(n, d)| Rational::new(n.into(), d.into()))
}

pub fn cyc() -> impl Strategy<Value = CycNum> {
    [rational(), rational(), rational(), rational()].prop_map(CycNum::new)
}

/// u + v·φ, often very close to zero
pub fn real() -> impl Strategy<Value = CycNum> {
    prop_oneof![
        (rational(), rational()).prop_map(|(u, v)| &CycNum::from_rational(u) + &CycNum::phi().scale(&v)),
        // φ minus ratios of Fibonacci numbers: tiny but nonzero
        (1usize..40, -3i64..=3).prop_map(|(n, s)| {
            let (mut a, mut b) = (1i64, 1i64);
            for _ in 0..n.min(38) {
                (a, b) = (b, a + b);
            }
            let q = CycNum::from_rational(Rational::new(b.into(), a.into()));
            (&CycNum::phi() - &q).scale(&Rational::from_integer(s.into()))
        }),
        cyc().prop_map(|a| &a + &a.conj()),
    ]
}

/// The series of B written out independently, as closures in (k, l).
pub fn oracle_b() -> Vec<Box<dyn Fn(i128, u32) -> i128>> {
    let p = |l: u32| 6i128.pow(l);
    let s = |l: u32| if l % 2 == 0 { 1i128 } else { -1 };
    vec![
        Box::new(move |_, l| 5 * (p(l + 2) - s(l)) / 7),
        Box::new(move |_, l| 5 * (9 * p(l + 1) + 2 * s(l)) / 7),
        Box::new(move |_, l| 20 * p(l)),
        Box::new(|_, _| 30),
        Box::new(move |_, l| 90 * p(l)),
        Box::new(|_, _| 10),
        Box::new(|_, _| 5),
        Box::new(move |k, l| 20 * ((78 + 120 * k) * p(l) - (k + 1) * s(l)) / 7),
        Box::new(move |k, l| 5 * ((276 + 240 * k) * p(l) - (2 * k + 3) * s(l)) / 7),
        Box::new(move |k, l| 5 * ((234 + 180 * k) * p(l) + (2 * k + 4) * s(l)) / 7),
        Box::new(move |k, l| 5 * ((34 + 40 * k) * p(l) + (2 * k + 1) * s(l)) / 7),
        // 34 + 20(2k+1) = 54 + 40k
        Box::new(move |k, l| 10 * ((54 + 40 * k) * p(l) + (2 * k + 2) * s(l)) / 7),
        Box::new(|k, _| 40 * k + 70),
        Box::new(move |k, l| 5 * ((306 + 180 * k) * p(l) + (2 * k + 2) * s(l)) / 7),
        Box::new(|k, _| 40 * k + 50),
        Box::new(|k, _| 60 * k + 40),
        Box::new(|k, _| 30 * k + 35),
        Box::new(|k, _| 20 * k + 30),
        Box::new(|k, _| 20 * k + 20),
        Box::new(|k, _| 10 * k + 15),
    ]
}

pub fn oracle_b2_extra() -> Vec<Box<dyn Fn(i128, u32) -> i128>> {
    let p = |l: u32| 6i128.pow(l);
    let s = |l: u32| if l % 2 == 0 { 1i128 } else { -1 };
    vec![
        Box::new(move |_, l| 10 * (p(l + 2) - s(l)) / 7),
        Box::new(move |k, l| 10 * ((276 + 240 * k) * p(l) - (2 * k + 3) * s(l)) / 7),
        Box::new(move |k, l| 10 * ((34 + 40 * k) * p(l) + (2 * k + 1) * s(l)) / 7),
        Box::new(|k, _| 60 * k + 70),
        Box::new(|k, _| 20 * k + 30),
    ]
}

pub fn grid(fs: &[Box<dyn Fn(i128, u32) -> i128>], limit: i128) -> BTreeSet<u64> {
    let mut out = BTreeSet::new();
    for f in fs {
        for l in 0..12 {
            for k in 0..=limit {
                let v = f(k, l);
                if v <= limit {
                    out.insert(v as u64);
                }
            }
        }
    }
    out
}

/// B₂ up to `limit` from the closures alone.
pub fn oracle_b2(limit: u64) -> BTreeSet<u64> {
    let mut out = grid(&oracle_b(), limit as i128);
    out.extend(grid(&oracle_b2_extra(), limit as i128));
    out
}
