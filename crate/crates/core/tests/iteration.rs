use blowup_core::exponents::SystemParams;
use blowup_core::iteration::{
    critical_base, critical_closed_form, critical_step, geometric_partial_sum, geometric_weight_limit,
    subcritical_base, subcritical_closed_form, subcritical_step, weighted_sum_identity, BaseCase, CriticalConstants,
    IterationConstants,
};
use blowup_core::Power;
use proptest::prelude::*;

fn exponent() -> impl Strategy<Value = Power> {
    (1i64..=9).prop_flat_map(|d| (d + 1..=6 * d).prop_map(move |n| Power::exact(n, d)))
}

proptest! {
    #[test]
    fn weighted_sum_matches_brute_force(p in exponent(), q in exponent(), half in 1usize..=10) {
        let j = 2 * half + 1;
        let pq = p.to_f64() * q.to_f64();
        let brute: f64 = (1..=half).map(|k| (j + 1 - 2 * k) as f64 * pq.powi(k as i32 - 1)).sum();
        let (lhs, rhs) = weighted_sum_identity(&p, &q, j).unwrap();
        prop_assert_eq!(&lhs, &rhs);
        prop_assert!((rhs.to_f64() / brute - 1.0).abs() < 1e-12);
    }

    #[test]
    fn geometric_sum_converges_to_limit(pq in 1.5f64..36.0) {
        let s = geometric_weight_limit(pq);
        prop_assert!((s - pq / (pq - 1.0).powi(2)).abs() < 1e-12 * s);
        prop_assert!(geometric_partial_sum(pq, 5) <= geometric_partial_sum(pq, 6));
    }
}

#[test]
fn subcritical_steps_follow_closed_form() {
    let sp = SystemParams::new(3, Power::int(3), Power::int(2), 1.0, 1.0).unwrap();
    let consts = IterationConstants::unit(&sp).unwrap();
    let mut s = subcritical_base(&sp, &consts, &BaseCase::Standard).unwrap();
    for _ in 0..15 {
        let c = subcritical_closed_form(&sp, s.j).unwrap();
        assert_eq!((&c.b, &c.beta), (&s.b, &s.beta), "j = {}", s.j);
        if let (Some(a), Some(alpha)) = (c.a.value(), c.alpha.value()) {
            assert_eq!((a, alpha), (&s.a, &s.alpha));
        }
        s = subcritical_step(&s, &sp, &consts);
    }
}

#[test]
fn odd_frame_exponents_grow_like_pq() {
    let sp = SystemParams::new(2, Power::int(2), Power::int(2), 1.0, 1.0).unwrap();
    let (c3, c5) = (subcritical_closed_form(&sp, 3).unwrap(), subcritical_closed_form(&sp, 5).unwrap());
    let ratio = c5.b.to_f64() / c3.b.to_f64();
    assert!(ratio > 3.0 && ratio < 5.0, "{ratio}");
    assert!(c3.a.value().is_some() && subcritical_closed_form(&sp, 4).unwrap().a.value().is_none());
    assert!(subcritical_closed_form(&sp, 0).is_err());
}

#[test]
fn critical_recursion_is_exact_on_rational_curve_points() {
    for (n, p, q) in [(4, Power::int(2), Power::int(2)), (3, Power::exact(7, 2), Power::int(2))] {
        let sp = SystemParams::new(n, p, q, 1.0, 1.0).unwrap();
        let consts = CriticalConstants::default();
        let mut s = critical_base(&sp, &consts).unwrap();
        while s.j <= 8 {
            assert_eq!(critical_closed_form(&sp, s.j).unwrap(), (s.a.clone(), s.b.clone()));
            s = critical_step(&s, &sp, &consts).unwrap();
        }
    }
}

#[test]
fn critical_recursion_needs_p_at_least_q() {
    let sp = SystemParams::new(3, Power::int(2), Power::exact(7, 2), 1.0, 1.0).unwrap();
    assert!(critical_base(&sp, &CriticalConstants::default()).is_err());
    assert!(critical_base(&sp.swapped(), &CriticalConstants::default()).is_ok());
}
