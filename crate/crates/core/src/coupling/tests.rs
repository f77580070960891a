use std::sync::Arc;

use super::*;
use crate::schedule::{ParameterSchedule, Profile};
use crate::tiling::{TileConstants, DEFAULT_CAP};

fn lamplighter(n: u32) -> Coupling {
    let dp = Arc::new(DiagonalProduct::lamplighter(2, 2).unwrap());
    Coupling::new(Tiling::new(dp, 2, DEFAULT_CAP).unwrap(), n).unwrap()
}

fn d4(n: u32) -> Coupling {
    let dp = Arc::new(DiagonalProduct::dihedral(&[2], &[4]).unwrap());
    Coupling::new(Tiling::new(dp, 2, DEFAULT_CAP).unwrap(), n).unwrap()
}

#[test]
fn zero_address_is_identity_and_zero() {
    let c = d4(2);
    assert_eq!(c.addr_to_delta(&[0, 0, 0]).unwrap(), c.dp().identity());
    assert_eq!(c.addr_to_int(&[0, 0, 0]).unwrap(), 0);
    assert_eq!(lamplighter(1).addr_to_int(&[3, 5]).unwrap(), 23);
}

#[test]
fn exhaustive_round_trip_d4() {
    let c = d4(2);
    assert_eq!(c.len(), 4096);
    for x in 0..c.len() {
        let addr = c.int_to_addr(x).unwrap();
        let d = c.addr_to_delta(&addr).unwrap();
        assert_eq!(c.delta_to_addr(&d).unwrap(), addr);
        assert_eq!(c.point_of(&d).unwrap(), Some(x));
    }
}

#[test]
fn a_write_on_zero_point() {
    let c = lamplighter(2);
    let y = c.act_delta_addr(Generator::A(1), &[0, 0, 0]).unwrap().inside().unwrap();
    let d = c.addr_to_delta(&y).unwrap();
    assert_eq!(d.base.get(0), c.dp().base_id(1, 0));
    assert_eq!(d.base.len(), 1);
    assert_eq!(d.cursor, 0);
}

#[test]
fn cursor_leaves_at_top_site() {
    let c = lamplighter(2);
    let mut out = 0;
    for x in 0..c.len() {
        let d = c.element(x).unwrap();
        let r = c.act_delta(Generator::Forward, x).unwrap();
        assert_eq!(r.is_out(), d.cursor == 3);
        out += r.is_out() as u64;
    }
    assert_eq!(out * 4, c.len());
}

#[test]
fn z_action() {
    let c = lamplighter(1);
    assert_eq!(c.act_z(1, 5), Outcome::Inside(6));
    assert_eq!(c.act_z(-1, 0), Outcome::OutOfTruncation);
    assert_eq!(c.act_z(1, 31), Outcome::OutOfTruncation);
    for x in 1..32 {
        assert_eq!(c.act_z(1, c.act_z(-1, x).inside().unwrap()), Outcome::Inside(x));
    }
}

#[test]
fn partial_actions_compose() {
    let c = d4(2);
    let dp = c.dp();
    for x in (0..c.len()).step_by(7) {
        for s in dp.generators() {
            for t in dp.generators() {
                let Some(y) = c.act_delta(s, x).unwrap().inside() else { continue };
                let Some(z) = c.act_delta(t, y).unwrap().inside() else { continue };
                let st = dp.multiply(&dp.generator(s), &dp.generator(t)).unwrap();
                let direct = dp.multiply(&c.element(x).unwrap(), &st).unwrap();
                assert_eq!(c.point_of(&direct).unwrap(), Some(z));
            }
        }
    }
}

#[test]
fn sweep_is_deterministic_and_injective() {
    let c = lamplighter(2);
    let p = Profile::Identity;
    let cfg = SweepConfig { exact_samples: 20, ..SweepConfig::default() };
    let a = simulate(&c, &p, &cfg).unwrap();
    let b = simulate(&c, &p, &cfg).unwrap();
    assert_eq!(a.delta_to_z, b.delta_to_z);
    assert!(a.exhaustive);
    for g in &a.delta_to_z {
        assert_eq!(g.injective, Some(true));
        assert!(g.moments.iter().all(|m| m.1.is_finite()));
    }
    assert_eq!(a.generator("t+").unwrap().out_of_truncation * 4, c.len());
    assert_eq!(a.exact_violations, 0);
    assert!(a.exact_known > 0);
    // displacements inside T_N stay below 2R_N
    let r = TileConstants::with_sizes(&ParameterSchedule::explicit(2, 2, &[Some(0), None], &[1]).unwrap(), 4, vec![])
        .unwrap()
        .stats(2)
        .unwrap()
        .r;
    assert!(a.z_to_delta.iter().all(|g| (g.max_distance().unwrap() as f64) <= 2.0 * r));
}

#[test]
fn phi_is_monotone() {
    let p = Profile::power(1.0).unwrap();
    let mut last = 0.0;
    for i in 0..200 {
        let v = phi_eps(&p, 0.5, 1.5f64.powi(i));
        assert!(v >= last && v.is_finite());
        last = v;
    }
}

#[test]
fn lamplighter_series_rows() {
    let s = ParameterSchedule::explicit(2, 2, &[Some(0), None], &[1]).unwrap();
    let c = TileConstants::with_sizes(&s, 4, vec![]).unwrap();
    let rep = series_report(&Profile::Identity, &c, 0.5, 12).unwrap();
    assert_eq!(rep.rows.len(), 12);
    assert!(rep.rows.windows(2).all(|w| w[1].phi_partial >= w[0].phi_partial));
    // exp(c_φ x) is summable here although exp ∘ ρ is not
    assert!(rep.remark_decreasing_from().is_some());
    assert_eq!(rep.psi_decreasing_from(), None);
}
