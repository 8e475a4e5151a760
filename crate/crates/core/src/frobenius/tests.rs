use super::*;
use crate::forms::head_i64;
use crate::hecke::al_eigen_check;

#[test]
fn tilde_f13_head() {
    let f = build_tilde_f13(10).unwrap();
    assert_eq!((f.denom(), f.valuation(), f.stride()), (24, 7, 24));
    assert_eq!(head_i64(&f, 3), vec![6, -65, 291]);
    assert!(tilde_f13_meta().is_consistent());
    assert_eq!(build_tilde_f13_mod(10, 13).unwrap(), f.reduce_mod(13).unwrap());
    let third = EtaQuotient::parse("5^11").unwrap().expand(3);
    assert_eq!(third.valuation(), 55);
}

#[test]
fn lift_of_tilde_f13() {
    let f = build_tilde_f13(300).unwrap();
    let lift = shimura_lift(&tilde_f13_meta(), &f, 7).unwrap();
    assert_eq!(head_i64(&lift.coeffs.truncate(6), 6), vec![0, 6, -96, 486, 1536, 3376]);
    assert_eq!((lift.target_weight, lift.target_level), (10, 30));
    assert_eq!((lift.eps.eps2, lift.eps.eps3), (1, Some(-1)));
    assert!(al_eigen_check(&lift.coeffs, 2, 10, 1).unwrap().passed);
    assert!(al_eigen_check(&lift.coeffs, 3, 10, -1).unwrap().passed);
}

#[test]
fn fl_small_primes() {
    assert!(fl_identity(7, 100).unwrap().passed());
    assert!(fl_identity(11, 100).unwrap().passed());
    let r = fl_identity(13, 100).unwrap();
    assert!(r.passed() && r.checked >= 100, "{r:?}");
    assert_eq!(build_fl(13, 5).unwrap().valuation(), 7);
    assert!(build_fl(5, 10).is_err());
}

#[test]
fn flcong_for_thirteen() {
    let r = flcong_crosscheck(13, 120).unwrap();
    assert!(r.passed() && r.checked >= 120, "{r:?}");
    let cphi = cphi5_table(13, 10).unwrap();
    assert_eq!(cphi.at(4), 6);
}

#[test]
fn g6_from_lift() {
    let g6 = recover_g6_mod13(60).unwrap();
    let ring = *g6.ring();
    for (n, v) in [(1i64, 1i64), (2, -16), (3, 81), (4, 256), (5, 2694)] {
        assert_eq!(g6.at(n), ring.from_i64(v), "n={n}");
    }
    for m in 1..60usize {
        for n in 1..60usize {
            if m * n < 60 && crate::arith::gcd(m as i64, n as i64) == 1 && (m * n) % 5 != 0 {
                assert_eq!(g6.at((m * n) as i64), ring.mul(&g6.at(m as i64), &g6.at(n as i64)));
            }
        }
    }
}

#[test]
fn ramanujan_and_shifted() {
    assert!(ramanujan_scan(7, 2000).unwrap().passed());
    assert!(ramanujan_scan(11, 2000).unwrap().passed());
    let t = cphi5_table(7, 20_000).unwrap();
    assert!(!progression_scan(&t, 7, 3, 2000).unwrap().passed());
    assert!(ramanujan_scan(13, 10).is_err());
}

#[test]
fn small_scans() {
    let table = cphi5_table(13, 300_000).unwrap();
    let n_max = n_max_for(13, 97, 300_000);
    let good = scan_congruence_with(&table, 97, -1, n_max).unwrap();
    assert!(good.passed() && good.n_checked > 0, "{good:?}");
    let other = scan_congruence_with(&table, 97, 1, n_max).unwrap();
    assert_eq!(good.n_checked + other.n_checked, (1..=n_max).filter(|n| (13 * 97 * 97 * n + 5) % 24 == 0 && n % 97 != 0).count());
    assert!(scan_congruence_with(&table, 97, -1, n_max + 100).is_err());
}
