use num_rational::BigRational;
use proptest::prelude::*;

use super::*;

fn ints(s: &FracSeries) -> Vec<i64> {
    s.coeffs().iter().map(|c| num_traits::ToPrimitive::to_i64(&c.to_integer()).unwrap()).collect()
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

#[test]
fn truncated_product() {
    let a = FracSeries::from_ints(&[1, -1, 0]);
    let b = FracSeries::from_ints(&[1, 1, 1]);
    let p = a.mul(&b).unwrap();
    assert_eq!(ints(&p), vec![1, 0, 0]);
    assert_eq!(p.precision(), 3);
}

#[test]
fn product_precision_is_minimum() {
    let a = FracSeries::from_ints(&[1, 2, 3, 4, 5]);
    let b = FracSeries::from_ints(&[1, 1]).shift(2);
    let p = a.mul(&b).unwrap();
    assert_eq!(p.valuation(), 2);
    assert_eq!(p.precision(), 2);
    assert_eq!(p.end(), 4);
}

#[test]
fn geometric_inverse_and_partitions() {
    let inv = FracSeries::from_ints(&[1, -1, 0, 0, 0, 0]).invert().unwrap();
    assert_eq!(ints(&inv), vec![1; 6]);
    let p = euler_product(Rationals, 50).invert().unwrap();
    assert_eq!(p.at(4), rat(5, 1));
    assert_eq!(p.at(49), rat(173525, 1));
}

#[test]
fn pentagonal_head() {
    let e = euler_product(Rationals, 16);
    let nz: Vec<(i64, i64)> = e.nonzero_terms().map(|(n, c)| (n, c.to_integer().try_into().unwrap())).collect();
    assert_eq!(nz, vec![(0, 1), (1, -1), (2, -1), (5, 1), (7, 1), (12, -1), (15, -1)]);
}

#[test]
fn non_unit_leading_rejected() {
    let z = Zmod::new(13).unwrap();
    let s = Series::from_q_coeffs(z, vec![13 % 13, 0, 1]);
    assert!(s.trim_leading_zeros().valuation() == 2);
    let s = Series::from_q_coeffs(Zmod::new(169).unwrap(), vec![13, 1]);
    assert!(matches!(s.invert(), Err(Error::NonUnitLeading)));
}

#[test]
fn eta_powers_through_the_lattice() {
    let eta = euler_product(Rationals, 40).to_denom(24).unwrap().shift(1);
    assert_eq!(eta.stride(), 24);
    let eta2 = eta.mul(&eta).unwrap();
    assert_eq!(eta2.order(), Some(2));
    assert_eq!(eta2.at(2), rat(1, 1));
    let eta5 = eta.pow(5).unwrap();
    assert_eq!(eta5.window(5, 5 + 24 * 5, 24), vec![rat(1, 1), rat(-5, 1), rat(5, 1), rat(10, 1), rat(-15, 1)]);
    // η(7z)η(z)^2 = q^{9/24}(1 - 2q + ...)
    let eta7 = euler_product(Rationals, 10).v_operator(7).to_denom(24).unwrap().shift(7);
    let f1 = eta7.mul(&eta2).unwrap();
    assert_eq!(f1.order(), Some(9));
    assert_eq!(f1.at(9), rat(1, 1));
    assert_eq!(f1.at(33), rat(-2, 1));
    let back = eta5.mul(&eta5.invert().unwrap()).unwrap();
    assert_eq!(back.order(), Some(0));
    assert!(back.truncate_end(back.end()).nonzero_terms().count() == 1);
}

#[test]
fn denominators_8_and_24_do_not_mix() {
    let a = FracSeries::from_ints(&[1, 1]).to_denom(8).unwrap();
    let b = FracSeries::from_ints(&[1, 1]).to_denom(24).unwrap();
    assert!(matches!(a.mul(&b), Err(Error::IncompatibleDenominators { .. })));
    assert!(a.mul(&FracSeries::from_ints(&[1, 2])).is_ok());
}

#[test]
fn reducing_denominator_needs_integral_support() {
    let s = Series::new(Rationals, 24, 1, 1, vec![rat(1, 1)]).unwrap();
    assert!(matches!(s.to_denom(1), Err(Error::SupportViolation { .. })));
    let s = FracSeries::from_ints(&[0, 3, 0, 2]).to_denom(24).unwrap();
    let back = s.to_denom(1).unwrap();
    assert_eq!(back.at(1), rat(3, 1));
    assert_eq!(back.at(3), rat(2, 1));
    assert_eq!(back.end(), 4);
}

#[test]
fn u_and_v_small_cases() {
    let s = FracSeries::from_ints(&[0, 1, 1, 0, 1]);
    let u = s.u_operator(2);
    assert_eq!(u.window(0, 3, 1), vec![rat(0, 1), rat(1, 1), rat(1, 1)]);
    assert_eq!(u.end(), 3);
    let v = FracSeries::from_ints(&[0, 1]).v_operator(5);
    assert_eq!(v.at(5), rat(1, 1));
    assert_eq!(v.at(3), rat(0, 1));
    // g6 head under V5
    let g6 = FracSeries::from_ints(&[0, 1, -16, 81, 256]);
    assert_eq!(g6.v_operator(5).at(10), rat(-16, 1));
}

#[test]
fn u_on_a_progression() {
    // support n ≡ 5 (mod 24), U_13 picks n = 13m with 13m ≡ 5
    let eta5 = euler_product(Rationals, 200).to_denom(24).unwrap().shift(1).pow(5).unwrap();
    let u = eta5.u_operator(13);
    assert!(13 * (u.end() - 24) < eta5.end());
    for n in u.valuation()..u.end().min(eta5.end() / 13) {
        assert_eq!(u.at(n), eta5.at(13 * n), "n={n}");
    }
}

#[test]
fn twist_small_cases() {
    let s = FracSeries::from_ints(&[0, 1, 1, 1]);
    let t = s.twist(&RealCharacter::chi12()).unwrap();
    assert_eq!(ints(&t), vec![0, 1, 0, 0]);
    assert_eq!(s.twist(&RealCharacter::trivial(1)).unwrap(), s);
    let s24 = s.to_denom(24).unwrap();
    assert!(s24.twist(&RealCharacter::chi12()).is_err());
}

#[test]
fn frobenius_power_mod_13() {
    let m = Zmod::new(13).unwrap();
    let exact = euler_product(Rationals, 1000).pow(24 * 35).unwrap().shift(35).reduce_mod(13).unwrap();
    let e = euler_product(m, 100_000);
    let e13 = euler_product(m, 100_000 / 13 + 1).v_operator(13).truncate(100_000);
    let fast = e.pow(8).unwrap().mul(&e13.pow(64).unwrap()).unwrap().shift(35);
    assert_eq!(fast.precision(), 100_000);
    for n in 35..1035 {
        assert_eq!(fast.at(n), exact.at(n), "n={n}");
    }
}

#[test]
fn json_round_trip() {
    let s = Series::new(Rationals, 24, -65, 24, vec![rat(1, 1), rat(13, 7), rat(-3, 1)]).unwrap();
    let j = SeriesJson::from_frac(&s);
    let text = serde_json::to_string(&j).unwrap();
    assert!(text.contains("\"13/7\""));
    let back: SeriesJson = serde_json::from_str(&text).unwrap();
    assert_eq!(back.to_frac().unwrap(), s);
    let m = s.scale(&rat(7, 1)).reduce_mod(13).unwrap();
    let jm = SeriesJson::from_mod(&m);
    assert_eq!(jm.to_mod().unwrap(), m);
}

fn arb_series(len: usize) -> impl Strategy<Value = FracSeries> {
    (prop::collection::vec(-30i64..30, len), prop::collection::vec(1i64..4, len)).prop_map(|(n, d)| {
        let coeffs = n.iter().zip(&d).map(|(&n, &d)| rat(n, d)).collect();
        Series::from_q_coeffs(Rationals, coeffs)
    })
}

fn arb_int_series(len: usize) -> impl Strategy<Value = FracSeries> {
    prop::collection::vec(-1000i64..1000, len).prop_map(|c| FracSeries::from_ints(&c))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn ring_axioms(a in arb_series(64), b in arb_series(64), c in arb_series(64)) {
        prop_assert_eq!(a.mul(&b).unwrap().mul(&c).unwrap(), a.mul(&b.mul(&c).unwrap()).unwrap());
        prop_assert_eq!(a.mul(&b).unwrap(), b.mul(&a).unwrap());
        let lhs = a.mul(&b.add(&c).unwrap()).unwrap();
        let rhs = a.mul(&b).unwrap().add(&a.mul(&c).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn reduction_is_a_homomorphism(mut a in arb_int_series(200), b in arb_int_series(200), m in 2u64..2000, k in 1u64..6) {
        let red = |s: &FracSeries| s.reduce_mod(m).unwrap();
        prop_assert_eq!(red(&a.add(&b).unwrap()), red(&a).add(&red(&b)).unwrap());
        prop_assert_eq!(red(&a.mul(&b).unwrap()), red(&a).mul(&red(&b)).unwrap());
        prop_assert_eq!(red(&a.pow(3).unwrap()), red(&a).pow(3).unwrap());
        prop_assert_eq!(red(&a.u_operator(k)), red(&a).u_operator(k));
        prop_assert_eq!(red(&a.v_operator(k)), red(&a).v_operator(k));
        let mut c: Vec<i64> = ints(&a);
        c[0] = 1;
        a = FracSeries::from_ints(&c);
        prop_assert_eq!(red(&a.invert().unwrap()), red(&a).invert().unwrap());
    }

    #[test]
    fn u_after_v(a in arb_series(40), m in 1u64..7) {
        prop_assert_eq!(a.v_operator(m).u_operator(m), a.clone());
        let vu = a.u_operator(m).v_operator(m);
        for n in 0..vu.end() {
            let expect = if n % m as i64 == 0 { a.at(n) } else { BigRational::zero() };
            prop_assert_eq!(vu.at(n), expect);
        }
    }

    #[test]
    fn modular_product_large(a in prop::collection::vec(0u64..13, 1000), b in prop::collection::vec(0u64..13, 1000)) {
        let fa = FracSeries::from_ints(&a.iter().map(|&x| x as i64).collect::<Vec<_>>());
        let fb = FracSeries::from_ints(&b.iter().map(|&x| x as i64).collect::<Vec<_>>());
        let z = Zmod::new(13).unwrap();
        let ma = Series::from_q_coeffs(z, a);
        let mb = Series::from_q_coeffs(z, b);
        prop_assert_eq!(fa.mul(&fb).unwrap().reduce_mod(13).unwrap(), ma.mul(&mb).unwrap());
    }
}
