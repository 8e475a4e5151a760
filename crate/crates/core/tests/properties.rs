use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

use etalift::arith::{kronecker, RealCharacter};
use etalift::forms::{cphi_series, cphi_series_mod, EtaQuotient};
use etalift::hecke::{t_p2_eta, CheckReport, HalfIntegralMeta};
use etalift::lift::shimura_lift;
use etalift::qseries::{FracSeries, Rationals, Series};
use etalift::verify::example_forms;

fn q(x: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(x))
}

fn eta_spec() -> impl Strategy<Value = Vec<(u64, i64)>> {
    prop::collection::vec((prop::sample::select(vec![1u64, 2, 3, 5, 6, 7]), -4i64..6), 1..4)
}

#[test]
fn cphi5_mod_matches_enumeration() {
    // the mod path goes through the Eisenstein closed form, the exact path
    // below the enumeration limit counts lattice points directly
    let exact = cphi_series(5, 400).unwrap();
    for p in [7u64, 11, 13] {
        assert_eq!(exact.reduce_mod(p).unwrap(), cphi_series_mod(5, 400, p).unwrap());
    }
}

#[test]
fn example_lifts_agree_mod_p() {
    for ex in example_forms() {
        let f = ex.expand(ex.terms_for(ex.t, 40, 1)).unwrap();
        let exact = shimura_lift(&ex.meta, &f, ex.t).unwrap().coeffs;
        // 13/7 appears in Example 3, so skip 7
        for p in [11u64, 13] {
            let m = shimura_lift(&ex.meta, &f.reduce_mod(p).unwrap(), ex.t).unwrap().coeffs;
            assert_eq!(exact.reduce_mod(p).unwrap(), m, "{} mod {p}", ex.label);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 24, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn eta_expansion_is_multiplicative(a in eta_spec(), b in eta_spec()) {
        let (ea, eb) = (EtaQuotient::new(&a).unwrap(), EtaQuotient::new(&b).unwrap());
        prop_assume!(ea.natural_denom() == eb.natural_denom());
        let joint = ea.product(&eb);
        prop_assume!(joint.natural_denom() == ea.natural_denom());
        let lhs = ea.expand(60).mul(&eb.expand(60)).unwrap();
        let rhs = joint.expand(60);
        let end = lhs.end().min(rhs.end());
        prop_assert_eq!(lhs.truncate_end(end).compact(), rhs.truncate_end(end).compact());
    }

    #[test]
    fn theta_type_hecke_operators_commute(c in prop::collection::vec(-9i64..9, 1500)) {
        let meta = HalfIntegralMeta::new(1, 7, RealCharacter::quadratic(7).unwrap(), 9).unwrap();
        let f: FracSeries = Series::new(Rationals, 8, 3, 8, c.into_iter().map(q).collect()).unwrap();
        let a = t_p2_eta(&meta, &t_p2_eta(&meta, &f, 3).unwrap(), 5).unwrap();
        let b = t_p2_eta(&meta, &t_p2_eta(&meta, &f, 5).unwrap(), 3).unwrap();
        prop_assert!(CheckReport::compare("comm", &a, &b).unwrap().passed);
    }

    #[test]
    fn kronecker_is_multiplicative_in_the_top(a in -300i64..300, b in -300i64..300, n in 1i64..300) {
        prop_assert_eq!(kronecker(a * b, n), kronecker(a, n) * kronecker(b, n));
    }
}
