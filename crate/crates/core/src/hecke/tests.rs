use num_bigint::BigInt;
use proptest::prelude::*;

use super::*;
use crate::forms::{head_i64, EtaQuotient};
use crate::qseries::Rationals;

fn q(x: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(x))
}

fn eta5() -> (HalfIntegralMeta, FracSeries) {
    let meta = HalfIntegralMeta::new(2, 1, RealCharacter::trivial(1), 5).unwrap();
    (meta, EtaQuotient::eta_power(5).expand(1500))
}

fn example2() -> Vec<(HalfIntegralMeta, FracSeries)> {
    let psi7 = RealCharacter::quadratic(7).unwrap();
    vec![
        (HalfIntegralMeta::new(1, 7, psi7, 9).unwrap(), EtaQuotient::parse("7 1^2").unwrap().expand(2500)),
        (
            HalfIntegralMeta::new(1, 7, RealCharacter::trivial(7), 15).unwrap(),
            EtaQuotient::parse("7^2 1").unwrap().expand(2500),
        ),
    ]
}

#[test]
fn eta5_is_a_t25_eigenform() {
    let (meta, f) = eta5();
    assert!(meta.is_consistent());
    let t = t_p2_eta(&meta, &f, 5).unwrap();
    assert!(t.coeffs().len() >= 20);
    let scaled = f.truncate_end(t.end()).scale(&q(-6));
    assert_eq!(t.to_denom(24).unwrap().compact().first_mismatch(&scaled).unwrap(), None);
    assert!(CheckReport::compare("T25", &scaled, &t).unwrap().passed);
}

#[test]
fn eta5_eigenvalues_for_more_primes() {
    // a(p) of η²(z)η²(2z)η²(3z)η²(6z), times (12/p)
    let (meta, f) = eta5();
    let newform = EtaQuotient::parse("1^2 2^2 3^2 6^2").unwrap().expand(20);
    for p in [5u64, 7, 11] {
        let ap = newform.at(p as i64);
        let lam = ap * q(kronecker(12, p as i64) as i64);
        let t = t_p2_eta(&meta, &f, p).unwrap();
        let r = CheckReport::compare("T", &f.truncate_end(t.end()).scale(&lam), &t).unwrap();
        assert!(r.passed, "p={p} {r:?}");
        assert!(r.compared >= 10);
    }
}

#[test]
fn example_two_eigenvalues() {
    let f = EtaQuotient::parse("1 2 7 14").unwrap().expand(20);
    for (meta, form) in example2() {
        assert!(meta.is_consistent());
        for p in [3u64, 5, 7] {
            let lam = f.at(p as i64) * q(kronecker(-4, p as i64) as i64);
            let t = t_p2_eta(&meta, &form, p).unwrap();
            let r = CheckReport::compare("T", &form.truncate_end(t.end()).scale(&lam), &t).unwrap();
            assert!(r.passed, "r={} p={p} {r:?}", meta.r);
            assert!(r.compared >= 50);
        }
    }
}

#[test]
fn zero_and_bad_inputs() {
    let (meta, f) = eta5();
    let zero = f.scale(&q(0));
    assert!(t_p2_eta(&meta, &zero, 7).unwrap().is_zero());
    assert!(t_p2_eta(&meta, &f, 3).is_err());
    assert!(t_p2_eta(&meta, &f, 9).is_err());
    let wrong = EtaQuotient::eta_power(7).expand(30);
    assert!(matches!(t_p2_eta(&meta, &wrong, 5), Err(Error::SupportViolation { .. })));
    assert!(t_p2_theta(2, &RealCharacter::trivial(1), &f, 5).is_err());
}

#[test]
fn conventions_disagree_only_at_three() {
    let meta = HalfIntegralMeta::new(1, 1, RealCharacter::trivial(1), 3).unwrap();
    let f = EtaQuotient::eta_power(3).expand(3000);
    for p in [3u64, 5, 7, 11] {
        let eight = t_p2_eta_with(&meta, &f, p, HeckeConvention::Eight).unwrap().to_denom(24).unwrap();
        let twelve = t_p2_eta_with(&meta, &f, p, HeckeConvention::Twelve).unwrap();
        let same = CheckReport::compare("conv", &eight, &twelve).unwrap();
        assert_eq!(same.passed, p != 3, "p={p}");
    }
    // η³ = Σ (-4/n) n q^{n²/8} is a T_{p²} eigenform for (n/p)
    let t = t_p2_eta(&meta, &f, 3).unwrap();
    assert!(f.truncate_end(t.end()).proportionality(&t).unwrap().is_some());
}

#[test]
fn eta_and_theta_hecke_agree() {
    let (meta, f) = eta5();
    let psi = meta.theta_psi().unwrap();
    let g = meta.theta_image(&f).unwrap();
    for p in [5u64, 7] {
        let lhs = meta.theta_image(&t_p2_eta(&meta, &f, p).unwrap()).unwrap();
        let rhs = t_p2_theta(meta.lambda, &psi, &g, p).unwrap();
        let r = CheckReport::compare("V24", &lhs, &rhs).unwrap();
        assert!(r.passed && r.compared > 50, "{r:?}");
    }
    for (meta, f) in example2() {
        let psi = meta.theta_psi().unwrap();
        let g = meta.theta_image(&f).unwrap();
        for p in [3u64, 5, 7] {
            let lhs = meta.theta_image(&t_p2_eta(&meta, &f, p).unwrap()).unwrap();
            let rhs = t_p2_theta(meta.lambda, &psi, &g, p).unwrap();
            let r = CheckReport::compare("V8", &lhs, &rhs).unwrap();
            assert!(r.passed && r.compared > 50, "r={} p={p} {r:?}", meta.r);
        }
    }
}

#[test]
fn integral_hecke() {
    let f = EtaQuotient::parse("1^2 2^2 3^2 6^2").unwrap().expand(200);
    let chi = RealCharacter::trivial(6);
    let t5 = t_p_integral(&f, 5, 4, &chi).unwrap();
    assert_eq!(t5.at(1), q(6));
    assert!(CheckReport::compare("T5", &f.truncate_end(t5.end()).scale(&q(6)), &t5).unwrap().passed);
    // T_5 T_7 = T_7 T_5
    let a = t_p_integral(&t_p_integral(&f, 5, 4, &chi).unwrap(), 7, 4, &chi).unwrap();
    let b = t_p_integral(&t_p_integral(&f, 7, 4, &chi).unwrap(), 5, 4, &chi).unwrap();
    assert!(CheckReport::compare("comm", &a, &b).unwrap().passed);
    // mod ℓ, T_ℓ ≡ U_ℓ for k ≥ 2
    let m = f.reduce_mod(7).unwrap();
    let r = CheckReport::compare_generic("T7", &m.u_operator(7), &t_p_integral(&m, 7, 4, &chi).unwrap()).unwrap();
    assert!(r.passed && r.compared >= 28, "{r:?}");
}

#[test]
fn al_relations_on_printed_segments() {
    let g6 = FracSeries::from_ints(&[0, 1, -16, 81, 256]);
    assert!(al_eigen_check(&g6, 2, 10, 1).unwrap().passed);
    assert!(!al_eigen_check(&g6, 2, 10, -1).unwrap().passed);
    let lift = FracSeries::from_ints(&[0, 6, -96, 486, 1536, 3376]);
    assert!(al_eigen_check(&lift, 2, 10, 1).unwrap().passed);
    assert!(al_eigen_check(&lift, 3, 10, -1).unwrap().passed);
    let zero = FracSeries::from_ints(&[0; 10]);
    assert!(al_eigen_check(&zero, 2, 4, 1).unwrap().passed && al_eigen_check(&zero, 2, 4, -1).unwrap().passed);
}

#[test]
fn meta_json_round_trip() {
    let m = HalfIntegralMeta::from_json(r#"{"lambda":2,"N":1,"psi":"1","r":5}"#).unwrap();
    assert_eq!(m, eta5().0);
    let m7 = example2()[0].0;
    assert_eq!(HalfIntegralMeta::from_json(&m7.to_json()).unwrap(), m7);
    assert_eq!(head_i64(&EtaQuotient::eta_power(5).expand(2), 2), vec![1, -5]);
}

fn supported(len: usize) -> impl Strategy<Value = FracSeries> {
    prop::collection::vec(-20i64..20, len).prop_map(|c| {
        Series::new(Rationals, 24, 5, 24, c.into_iter().map(q).collect()).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn hecke_operators_commute(f in supported(2000)) {
        let meta = HalfIntegralMeta::new(2, 1, RealCharacter::trivial(1), 5).unwrap();
        for (p, l) in [(5u64, 7u64), (7, 11), (5, 13)] {
            let a = t_p2_eta(&meta, &t_p2_eta(&meta, &f, p).unwrap(), l).unwrap();
            let b = t_p2_eta(&meta, &t_p2_eta(&meta, &f, l).unwrap(), p).unwrap();
            let r = CheckReport::compare("comm", &a, &b).unwrap();
            prop_assert!(r.passed);
        }
    }

    #[test]
    fn hecke_is_linear(f in supported(300), g in supported(300), x in -5i64..5) {
        let meta = HalfIntegralMeta::new(2, 1, RealCharacter::trivial(1), 5).unwrap();
        let lhs = t_p2_eta(&meta, &f.scale(&q(x)).add(&g).unwrap(), 5).unwrap();
        let rhs = t_p2_eta(&meta, &f, 5).unwrap().scale(&q(x)).add(&t_p2_eta(&meta, &g, 5).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }
}
