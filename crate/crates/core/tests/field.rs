mod common;

use decagon::cyclotomic::Sign;
use decagon::CycNum;
use proptest::prelude::*;

use common::{cyc, real};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2000))]

    #[test]
    fn ring_axioms(a in cyc(), b in cyc(), c in cyc()) {
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&(&a - &b) + &b, a.clone());
        prop_assert_eq!(&a * &CycNum::one(), a.clone());
    }

    #[test]
    fn inverses(a in cyc()) {
        if a.is_zero() {
            prop_assert!(a.inv().is_err());
        } else {
            prop_assert!((&a * &a.inv().unwrap()).is_one());
        }
    }

    #[test]
    fn conjugation_is_an_involutive_automorphism(a in cyc(), b in cyc()) {
        prop_assert_eq!(a.conj().conj(), a.clone());
        prop_assert_eq!((&a * &b).conj(), &a.conj() * &b.conj());
        prop_assert_eq!((&a + &b).conj(), &a.conj() + &b.conj());
        prop_assert!(a.norm_sq().is_real());
        prop_assert!((&a + &a.conj()).is_real());
    }

    #[test]
    fn sign_agrees_with_intervals(x in real()) {
        let s = x.real_sign().unwrap();
        let iv = x.approx(64).re;
        prop_assert!(iv.lo <= iv.hi);
        if iv.excludes_zero() {
            prop_assert_eq!(s, if iv.lo > 0.0 { Sign::Positive } else { Sign::Negative });
        }
        prop_assert_eq!(s == Sign::Zero, x.is_zero());
        prop_assert_eq!((-&x).real_sign().unwrap().as_i8(), -s.as_i8());
    }

    #[test]
    fn norms_are_nonnegative(a in cyc()) {
        let s = a.norm_sq().real_sign().unwrap();
        prop_assert_eq!(s == Sign::Zero, a.is_zero());
        prop_assert!(s != Sign::Negative);
    }

    #[test]
    fn serialization_round_trips(a in cyc()) {
        prop_assert_eq!(a.to_string().parse::<CycNum>().unwrap(), a);
    }
}

#[test]
fn zeta_identities() {
    assert!(CycNum::zeta_pow(10).is_one());
    assert_eq!(CycNum::zeta_pow(5), CycNum::from_int(-1));
    let mut s = CycNum::zero();
    for k in (0..10).step_by(2) {
        s = &s + &CycNum::zeta_pow(k);
    }
    assert!(s.is_zero());
    assert_eq!((&CycNum::phi() - &CycNum::one()).real_sign(), Ok(Sign::Positive));
    let g = CycNum::phi().approx(64).re;
    assert!(g.contains(1.618_033_988_749_895));
}
