use num_bigint::BigInt;

use super::*;
use crate::forms::EtaQuotient;

fn q(x: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(x))
}

fn eta5_meta() -> HalfIntegralMeta {
    HalfIntegralMeta::new(2, 1, RealCharacter::trivial(1), 5).unwrap()
}

fn quad(t: u64) -> RealCharacter {
    RealCharacter::quadratic(t).unwrap()
}

#[test]
fn lift_of_eta5_is_the_level_six_newform() {
    let f = EtaQuotient::eta_power(5).expand(10_000);
    let lift = shimura_lift(&eta5_meta(), &f, 5).unwrap();
    assert!(!lift.class_mismatch);
    assert!(lift.coeffs.coeffs().len() > 200);
    let newform = EtaQuotient::parse("1^2 2^2 3^2 6^2").unwrap().expand(201);
    let r = CheckReport::compare("S5", &newform, &lift.coeffs.truncate(201)).unwrap();
    assert!(r.passed && r.compared == 201, "{r:?}");
    assert_eq!((lift.target_weight, lift.target_level), (4, 6));
    assert!(newness_checks(&lift).unwrap().iter().all(|r| r.passed));
    assert!(multiplicativity_check(&lift.coeffs).unwrap().passed);
}

#[test]
fn wrong_class_vanishes() {
    let f = EtaQuotient::eta_power(5).expand(500);
    let lift = shimura_lift(&eta5_meta(), &f, 1).unwrap();
    assert!(lift.class_mismatch && lift.coeffs.is_zero());
    assert!(shimura_lift(&eta5_meta(), &f, 4).is_err());
    assert!(!admissible_t(&eta5_meta(), 1) && admissible_t(&eta5_meta(), 29));
}

#[test]
fn lift_of_example_two() {
    let meta = HalfIntegralMeta::new(1, 7, quad(7), 9).unwrap();
    let f = EtaQuotient::parse("7 1^2").unwrap().expand(20_000);
    let lift = shimura_lift(&meta, &f, 3).unwrap();
    let newform = EtaQuotient::parse("1 2 7 14").unwrap().expand(201);
    let r = CheckReport::compare("S3", &newform, &lift.coeffs.truncate(201)).unwrap();
    assert!(r.passed && r.compared == 201, "{r:?}");
    assert_eq!(lift.eps.eps3, None);
    assert!(newness_checks(&lift).unwrap().iter().all(|r| r.passed));
}

#[test]
fn lifts_compare_with_classical() {
    let f = EtaQuotient::eta_power(5).expand(3000);
    assert_eq!(compare_lifts(&eta5_meta(), &f, 5, 50).unwrap(), q(0));
    let meta = HalfIntegralMeta::new(1, 7, RealCharacter::trivial(7), 15).unwrap();
    let f2 = EtaQuotient::parse("7^2 1").unwrap().expand(3000);
    assert_eq!(compare_lifts(&meta, &f2, 5, 50).unwrap(), q(0));
    let zero = f.scale(&q(0));
    assert_eq!(compare_lifts(&eta5_meta(), &zero, 5, 20).unwrap(), q(0));
    assert!(compare_lifts(&eta5_meta(), &f, 5, 10_000).is_err());
}

#[test]
fn equivariance_small() {
    let f = EtaQuotient::eta_power(5).expand(12_000);
    let r = equivariance_check(&eta5_meta(), &f, 5, 7).unwrap();
    assert!(r.passed && r.compared >= 30, "{r:?}");
    let meta = HalfIntegralMeta::new(1, 11, quad(11), 13).unwrap();
    let f4 = EtaQuotient::parse("11 1^2").unwrap().expand(20_000);
    let r = equivariance_check(&meta, &f4, 13, 5).unwrap();
    assert!(r.passed && r.compared >= 20, "{r:?}");
}

#[test]
fn eigen_relations_example_three() {
    let meta = HalfIntegralMeta::new(1, 13, quad(13), 15).unwrap();
    let a = EtaQuotient::parse("13 1^2").unwrap().expand(2000);
    let b = EtaQuotient::parse("13^3").unwrap().expand(2000);
    let f1 = a.add(&b.scale(&(q(13) / q(7)))).unwrap();
    let newform = FracSeries::from_ints(&[0, 1, 1, -3, 1, -1, -3, 1]);
    let reports = eigen_relation_check(&meta, &f1, &newform, &[3, 5, 7]).unwrap();
    assert!(reports.iter().all(|r| r.passed && r.compared >= 10), "{reports:?}");
    let lift = shimura_lift(&meta, &f1, 5).unwrap().coeffs;
    assert!(lift.truncate(8).proportionality(&newform).unwrap().is_some());
}

#[test]
fn lift_is_linear() {
    let meta = HalfIntegralMeta::new(1, 13, quad(13), 15).unwrap();
    let a = EtaQuotient::parse("13 1^2").unwrap().expand(1500);
    let b = EtaQuotient::parse("13^3").unwrap().expand(1500);
    let combo = a.scale(&q(3)).add(&b.scale(&q(-2))).unwrap();
    let lhs = shimura_lift(&meta, &combo, 5).unwrap().coeffs;
    let rhs = shimura_lift(&meta, &a, 5)
        .unwrap()
        .coeffs
        .scale(&q(3))
        .add(&shimura_lift(&meta, &b, 5).unwrap().coeffs.scale(&q(-2)))
        .unwrap();
    assert_eq!(lhs, rhs);
}

#[test]
fn mod_lift_matches_exact() {
    let f = EtaQuotient::eta_power(5).expand(3000);
    let exact = shimura_lift(&eta5_meta(), &f, 5).unwrap().coeffs.reduce_mod(13).unwrap();
    let m = shimura_lift(&eta5_meta(), &f.reduce_mod(13).unwrap(), 5).unwrap().coeffs;
    assert_eq!(exact, m);
}
