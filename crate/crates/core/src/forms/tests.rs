use num_traits::ToPrimitive;
use proptest::prelude::*;

use super::*;
use crate::qseries::euler_product;

fn int_head(s: &FracSeries, k: usize) -> Vec<i64> {
    head_i64(s, k)
}

#[test]
fn eta_fifth_power() {
    let s = EtaQuotient::eta_power(5).expand(5);
    assert_eq!(s.denom(), 24);
    assert_eq!(s.valuation(), 5);
    assert_eq!(int_head(&s, 5), vec![1, -5, 5, 10, -15]);
}

#[test]
fn example_newforms() {
    let f1 = EtaQuotient::parse("1^2 2^2 3^2 6^2").unwrap().expand(6);
    assert_eq!(f1.denom(), 1);
    assert_eq!(f1.valuation(), 1);
    assert_eq!(int_head(&f1, 6), vec![1, -2, -3, 4, 6, 6]);
    let f2 = EtaQuotient::parse("1 2 7 14").unwrap().expand(7);
    assert_eq!(int_head(&f2, 7), vec![1, -1, -2, 1, 0, 2, 1]);
}

#[test]
fn denominator_eight_for_three_divisible_orders() {
    let f = EtaQuotient::parse("7 1^2").unwrap().expand(3);
    assert_eq!((f.denom(), f.valuation(), f.stride()), (8, 3, 8));
    assert_eq!(int_head(&f, 2), vec![1, -2]);
}

#[test]
fn delta_is_tau() {
    let d = EtaQuotient::eta_power(24).expand(10);
    assert_eq!(int_head(&d, 10), vec![1, -24, 252, -1472, 4830, -6048, -16744, 84480, -113643, -115920]);
    let one = d.mul(&d.invert().unwrap()).unwrap();
    assert_eq!(int_head(&one, 10), vec![1, 0, 0, 0, 0, 0, 0, 0, 0, 0]);
}

#[test]
fn negative_valuation() {
    let s = EtaQuotient::eta_power(-65).expand(20);
    assert_eq!(s.valuation(), -65);
    let back = s.mul(&EtaQuotient::eta_power(65).expand(20)).unwrap();
    assert_eq!(back.valuation(), 0);
    assert_eq!(int_head(&back, 3), vec![1, 0, 0]);
}

#[test]
fn big_integer_fallback() {
    // E^{-200} overflows i128 quickly
    let big = EtaQuotient::eta_power(-200).expand(400);
    let direct = euler_product(crate::qseries::Rationals, 400).invert().unwrap().pow(200).unwrap();
    assert_eq!(big.coeffs(), direct.coeffs());
}

#[test]
fn modular_expansion_matches_reduction() {
    for spec in ["1^12 5^-1", "5^5 1^6", "5^11", "1^-65", "1^2 2^2 3^2 6^2", "13 1^2"] {
        let q = EtaQuotient::parse(spec).unwrap();
        for m in [13u64, 169, 7] {
            let exact = q.expand(300).reduce_mod(m).unwrap();
            assert_eq!(q.expand_mod(300, m).unwrap(), exact, "{spec} mod {m}");
        }
    }
}

#[test]
fn delta_power_frobenius() {
    let exact = euler_power_exact(1000, 24 * 35).shift(35).reduce_mod(13).unwrap();
    let fast = delta_power_mod(35, 13, 100_000).unwrap();
    assert_eq!(fast.valuation(), 35);
    for n in 35..1035 {
        assert_eq!(fast.at(n), exact.at(n));
    }
    let d1 = delta_power_mod(1, 13, 3).unwrap();
    assert_eq!(d1.coeffs(), &[1, 2, 252 % 13]);
}

#[test]
fn cphi_one_is_partitions() {
    let p = cphi_series(1, 1001).unwrap();
    // pentagonal recurrence oracle
    let mut part = vec![BigInt::from(0); 1001];
    part[0] = BigInt::from(1);
    for n in 1..=1000i64 {
        let mut acc = BigInt::from(0);
        for k in 1i64.. {
            let g1 = k * (3 * k - 1) / 2;
            if g1 > n {
                break;
            }
            let sign = if k % 2 == 1 { 1 } else { -1 };
            acc += &part[(n - g1) as usize] * sign;
            let g2 = k * (3 * k + 1) / 2;
            if g2 <= n {
                acc += &part[(n - g2) as usize] * sign;
            }
        }
        part[n as usize] = acc;
    }
    for (n, pn) in part.iter().enumerate().take(1001) {
        assert_eq!(p.at(n as i64), BigRational::from_integer(pn.clone()));
    }
}

#[test]
fn cphi_five_exact_and_mod() {
    let exact = cphi_series(5, 500).unwrap();
    assert_eq!(exact.at(0).to_integer().to_i64(), Some(1));
    for m in [7u64, 11, 13] {
        assert_eq!(cphi_series_mod(5, 500, m).unwrap(), exact.reduce_mod(m).unwrap());
    }
    for n in 0..70 {
        assert_eq!(exact.at(7 * n + 4).to_integer() % 7, BigInt::from(0));
    }
    // E^5 · Σ cφ₅ qⁿ = A₅
    let a5 = a5_closed_form().unwrap().series(500);
    assert_eq!(exact.mul(&euler_power_exact(500, 5)).unwrap(), a5);
}

#[test]
fn cphi_brute_route_other_m() {
    let c2 = cphi_series(2, 200).unwrap();
    // cφ₂ agrees with direct product θ(q)·E^{-2}
    let mut theta = vec![0i64; 200];
    for x in -15i64..=15 {
        if ((x * x) as usize) < 200 {
            theta[(x * x) as usize] += 1;
        }
    }
    let direct = FracSeries::from_ints(&theta).mul(&euler_power_exact(200, -2)).unwrap();
    assert_eq!(c2, direct);
    assert!(cphi_series(6, 20_000).is_err());
}

#[test]
fn quotient_multiplicativity_fixed() {
    let a = EtaQuotient::parse("1^3 2^-1").unwrap();
    let b = EtaQuotient::parse("2^4 7").unwrap();
    let joint = a.product(&b).expand(60).to_denom(24).unwrap();
    // 8 and 24 never mix implicitly
    assert!(a.expand(60).mul(&b.expand(60)).is_err());
    let split = a.expand(60).mul(&b.expand(60).to_denom(24).unwrap()).unwrap();
    // precision in units of 1/24 may differ; compare on the common window
    for n in joint.valuation()..joint.end().min(split.end()) {
        assert_eq!(joint.at(n), split.at(n));
    }
}

fn arb_quotient() -> impl Strategy<Value = EtaQuotient> {
    prop::collection::vec((1u64..8, -4i64..6), 1..4).prop_map(|f| EtaQuotient::new(&f).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn eta_multiplicativity(a in arb_quotient(), b in arb_quotient()) {
        let joint = a.product(&b);
        let prod = a.expand(80).to_denom(24).unwrap().mul(&b.expand(80).to_denom(24).unwrap()).unwrap();
        let direct = joint.expand(80).to_denom(24).unwrap();
        let end = prod.end().min(direct.end());
        for n in direct.valuation().min(prod.valuation())..end {
            prop_assert_eq!(prod.at(n), direct.at(n));
        }
    }
}
