//! Self-contained verification suites: the worked examples as data, and one
//! runner per family of checks, each returning a structured report that the
//! CLI prints and the acceptance tests assert on.

use std::time::Instant;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::arith::{
    epsilon_d, hasse_exponent, is_suitable_numeric, kronecker, primes_up_to, FourthRoot, RealCharacter,
};
use crate::error::{invalid, Result};
use crate::forms::{a5_closed_form, cphi_series, rm_count, EtaQuotient, QuadFormCounter};
use crate::frobenius::{
    build_tilde_f13, classify_table, congex_check, cphi5_table, fl_identity, flcong_crosscheck, n_max_for,
    ramanujan_scan, recover_g6_mod13, scan_congruence_with, progression_scan,
};
use crate::hecke::{al_eigen_check, t_p2_eta, t_p2_theta, CheckReport, HalfIntegralMeta};
use crate::lift::{classical_shimura_lift, compare_lifts, equivariance_check, multiplicativity_check, shimura_lift};
use crate::multipliers::{
    check_nu_v_t, nu_eta, nu_theta, sample_point, verify_transform_numeric, Gamma0Sampler, GL2Int, Root24,
};
use crate::qseries::{rational_to_string, FracSeries, Rationals, Series};

/// One line of a suite.
#[derive(Clone, Debug, Serialize)]
pub struct CheckLine {
    pub label: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub name: String,
    pub checks: Vec<CheckLine>,
    #[serde(skip)]
    pub elapsed_ms: f64,
}

impl SuiteReport {
    fn new(name: &str) -> Self {
        SuiteReport { name: name.into(), checks: Vec::new(), elapsed_ms: 0.0 }
    }

    pub fn passed(&self) -> bool {
        !self.checks.is_empty() && self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckLine> {
        self.checks.iter().filter(|c| !c.passed)
    }

    fn push(&mut self, label: impl Into<String>, passed: bool, detail: impl Into<String>) {
        self.checks.push(CheckLine { label: label.into(), passed, detail: detail.into() });
    }

    fn push_report(&mut self, r: &CheckReport, min_compared: usize) {
        let detail = match &r.first_violation {
            None => format!("{} coefficients agree", r.compared),
            Some((n, e, g)) => format!("first mismatch at numerator {n}: expected {e}, got {g}"),
        };
        self.push(r.name.clone(), r.passed && r.compared >= min_compared, detail);
    }

    fn push_result<T>(&mut self, label: &str, res: Result<T>, f: impl FnOnce(&mut Self, T)) {
        match res {
            Ok(v) => f(self, v),
            Err(e) => self.push(label, false, format!("error: {e}")),
        }
    }

    fn finish(mut self, started: Instant) -> Self {
        self.elapsed_ms = started.elapsed().as_secs_f64() * 1e3;
        self
    }
}

fn q(x: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(x))
}

fn quad(t: u64) -> RealCharacter {
    RealCharacter::quadratic(t).expect("squarefree")
}

/// A form from the worked examples: a rational combination of eta quotients
/// together with its multiplier data, a lift parameter in the right class,
/// and the printed head of the newform it lifts to.
#[derive(Clone, Debug)]
pub struct ExampleForm {
    pub label: &'static str,
    pub example: u8,
    pub meta: HalfIntegralMeta,
    /// `(numerator, denominator, eta quotient)`.
    pub combination: Vec<(i64, i64, &'static str)>,
    pub t: u64,
    /// `a(0), a(1), …` of the newform as printed.
    pub newform_head: Vec<i64>,
    /// The newform as an eta quotient when one is known.
    pub newform_eta: Option<&'static str>,
}

impl ExampleForm {
    pub fn expand(&self, terms: usize) -> Result<FracSeries> {
        let mut acc: Option<FracSeries> = None;
        for &(num, den, spec) in &self.combination {
            let c = BigRational::new(num.into(), den.into());
            let s = EtaQuotient::parse(spec)?.expand(terms).scale(&c);
            acc = Some(match acc {
                None => s,
                Some(a) => a.add(&s)?,
            });
        }
        self.meta.normalize(&acc.expect("nonempty combination"))
    }

    /// Steps of `q` needed so that `a(t n²)` is known for `n < lift_terms`
    /// after `T_{p²}` with `p ≤ p_max`.
    pub fn terms_for(&self, t: u64, lift_terms: usize, p_max: u64) -> usize {
        let d = self.meta.denom() as usize;
        t as usize * lift_terms * lift_terms * (p_max * p_max) as usize / d + 8
    }

    pub fn newform_head(&self) -> FracSeries {
        FracSeries::from_ints(&self.newform_head)
    }
}

/// Every eta-multiplier form of the worked examples.
pub fn example_forms() -> Vec<ExampleForm> {
    let ex2 = vec![0, 1, -1, -2, 1, 0, 2, 1];
    let ex3 = vec![0, 1, 1, -3, 1, -1, -3, 1];
    let ex4 = vec![0, 1, 1, 1, 1, -4, 1, -2];
    let m = |lambda, level, psi, r| HalfIntegralMeta::new(lambda, level, psi, r).expect("valid example meta");
    vec![
        ExampleForm {
            label: "η⁵",
            example: 1,
            meta: m(2, 1, RealCharacter::trivial(1), 5),
            combination: vec![(1, 1, "1^5")],
            t: 5,
            newform_head: vec![0, 1, -2, -3, 4, 6, 6],
            newform_eta: Some("1^2 2^2 3^2 6^2"),
        },
        ExampleForm {
            label: "η(7z)η²(z)",
            example: 2,
            meta: m(1, 7, quad(7), 9),
            combination: vec![(1, 1, "7 1^2")],
            t: 3,
            newform_head: ex2.clone(),
            newform_eta: Some("1 2 7 14"),
        },
        ExampleForm {
            label: "η²(7z)η(z)",
            example: 2,
            meta: m(1, 7, RealCharacter::trivial(7), 15),
            combination: vec![(1, 1, "7^2 1")],
            t: 5,
            newform_head: ex2,
            newform_eta: Some("1 2 7 14"),
        },
        ExampleForm {
            label: "η(13z)η²(z) + 13/7·η³(13z)",
            example: 3,
            meta: m(1, 13, quad(13), 15),
            combination: vec![(1, 1, "13 1^2"), (13, 7, "13^3")],
            t: 5,
            newform_head: ex3.clone(),
            newform_eta: None,
        },
        ExampleForm {
            label: "7η²(13z)η(z) + η³(z)",
            example: 3,
            meta: m(1, 13, RealCharacter::trivial(13), 3),
            combination: vec![(7, 1, "13^2 1"), (1, 1, "1^3")],
            t: 1,
            newform_head: ex3,
            newform_eta: None,
        },
        ExampleForm {
            label: "η(11z)η²(z)",
            example: 4,
            meta: m(1, 11, quad(11), 13),
            combination: vec![(1, 1, "11 1^2")],
            t: 13,
            newform_head: ex4.clone(),
            newform_eta: None,
        },
        ExampleForm {
            label: "η²(11z)η(z)",
            example: 4,
            meta: m(1, 11, RealCharacter::trivial(11), 23),
            combination: vec![(1, 1, "11^2 1")],
            t: 23,
            newform_head: ex4,
            newform_eta: None,
        },
    ]
}

/// `ν²⁴ = 1` and `ν(-γ) = iν(γ)` on random `c > 0` matrices, numeric
/// transformation laws for `η, θ, η³, η⁵`, the `V_t` conjugation identity,
/// and the `ε_d` identities for odd `|d| ≤ d_max`.
pub fn multiplier_suite(seed: u64, exact_samples: usize, numeric_samples: usize, nu_v_t_samples: usize, d_max: i64) -> SuiteReport {
    let started = Instant::now();
    let mut rep = SuiteReport::new("multiplier identities");
    let mut s = Gamma0Sampler::new(1, 500, 10_000, seed);
    let mut bad = Vec::new();
    for _ in 0..exact_samples {
        let g = s.sample();
        let (Ok(v), Ok(vm)) = (nu_eta(&g), nu_eta(&g.neg())) else {
            bad.push(g);
            continue;
        };
        if v.pow(24) != Root24::ONE || vm != Root24::from_fourth(FourthRoot::I) * v {
            bad.push(g);
        }
    }
    rep.push("ν²⁴ = 1 and ν(-γ) = iν(γ)", bad.is_empty(), format!("{exact_samples} samples, failures {bad:?}"));

    let eta_terms = 600;
    let theta = {
        let mut c = vec![0i64; 4000];
        c[0] = 1;
        let mut n = 1usize;
        while n * n < c.len() {
            c[n * n] = 2;
            n += 1;
        }
        FracSeries::from_ints(&c)
    };
    let mut numeric = |label: &str, f: &FracSeries, twice: i64, level: i64, k_max: i64, mu: &dyn Fn(&GL2Int) -> Result<Root24>| {
        let mut sampler = Gamma0Sampler::new(level, k_max, 200, seed ^ twice as u64);
        let mut worst = 0.0f64;
        let mut err = None;
        for _ in 0..numeric_samples {
            let g = sampler.sample();
            let res = mu(&g).and_then(|m| verify_transform_numeric(f, twice, &g, m.to_complex(), sample_point(&g)));
            match res {
                Ok(r) => worst = worst.max(r.relative),
                Err(e) => err = Some(format!("{g}: {e}")),
            }
        }
        let passed = err.is_none() && worst < 1e-9;
        rep.push(label, passed, err.unwrap_or(format!("{numeric_samples} matrices, worst relative residual {worst:.2e}")));
    };
    for r in [1i64, 3, 5] {
        let f = EtaQuotient::eta_power(r).expand(eta_terms);
        numeric(&format!("η^{r} transformation law"), &f, r, 1, 12, &|g| Ok(nu_eta(g)?.pow(r)));
    }
    numeric("θ transformation law", &theta, 1, 4, 6, &|g| Ok(Root24::from_fourth(nu_theta(g)?)));

    for (r, t) in [(1i64, 5i64), (9, 7), (13, 11)] {
        let mut sampler = Gamma0Sampler::new(t, 200, 10_000, seed.wrapping_add(t as u64));
        let mut fails = 0;
        for _ in 0..nu_v_t_samples {
            let g = sampler.sample_signed();
            if !check_nu_v_t(&g, r, t).unwrap_or(false) {
                fails += 1;
            }
        }
        rep.push(format!("ν^{r} conjugated by V_{t}"), fails == 0, format!("{nu_v_t_samples} samples, {fails} failures"));
    }

    let mut fails = Vec::new();
    let odd: Vec<i64> = (-d_max..=d_max).filter(|d| d % 2 != 0).collect();
    for &d in &odd {
        let e = epsilon_d(d).expect("odd");
        // e((1-d)/8) as a 24th root
        let lhs = Root24::from_exponent(3 * (1 - d as i128));
        let rhs = Root24::from_sign(kronecker(2, d)) * Root24::from_fourth(e);
        if lhs != rhs || e.pow(2) != FourthRoot::from_sign(kronecker(-1, d)) {
            fails.push(d);
        }
    }
    for &d1 in &odd {
        for &d2 in &odd {
            let Some(p) = d1.checked_mul(d2) else { continue };
            let sign = if ((d1 - 1) * (d2 - 1) / 4) % 2 == 0 { 1 } else { -1 };
            let lhs = epsilon_d(p).expect("odd");
            let rhs = epsilon_d(d1).expect("odd") * epsilon_d(d2).expect("odd") * FourthRoot::from_sign(sign);
            if lhs != rhs {
                fails.push(p);
            }
        }
    }
    rep.push(
        format!("ε_d identities for odd |d| ≤ {d_max}"),
        fails.is_empty(),
        format!("{} values, {} pairs, failures {:?}", odd.len(), odd.len() * odd.len(), &fails[..fails.len().min(5)]),
    );
    rep.finish(started)
}

fn golden(rep: &mut SuiteReport, label: &str, got: &[i64], expected: &[i64]) {
    rep.push(label, got == expected, format!("got {got:?}, printed {expected:?}"));
}

fn head(s: &FracSeries, from: i64, k: usize) -> Vec<i64> {
    (0..k as i64)
        .map(|i| {
            let c = s.at(from + i * s.stride() as i64);
            if c.is_integer() {
                i64::try_from(c.to_integer()).unwrap_or(i64::MIN)
            } else {
                i64::MIN
            }
        })
        .collect()
}

/// Printed expansions, zero tolerance.
pub fn golden_suite() -> SuiteReport {
    let started = Instant::now();
    let mut rep = SuiteReport::new("printed expansions");
    let eta5 = EtaQuotient::eta_power(5).expand(10);
    golden(&mut rep, "η⁵", &head(&eta5, 5, 5), &[1, -5, 5, 10, -15]);
    rep.push("η⁵ starts at q^{5/24}", eta5.denom() == 24 && eta5.valuation() == 5, format!("{}/{}", eta5.valuation(), eta5.denom()));
    let f1 = EtaQuotient::parse("1^2 2^2 3^2 6^2").unwrap().expand(10);
    golden(&mut rep, "Example 1 newform", &head(&f1, 1, 6), &[1, -2, -3, 4, 6, 6]);
    let g = EtaQuotient::parse("2^3 3^2 12^2 6^-2").unwrap().expand(12);
    golden(&mut rep, "Example 1 G", &head(&g, 1, 9), &[1, 0, -3, -2, 0, 6, 6, 0, -3]);
    let f2 = EtaQuotient::parse("1 2 7 14").unwrap().expand(10);
    golden(&mut rep, "Example 2 newform", &head(&f2, 1, 7), &[1, -1, -2, 1, 0, 2, 1]);
    for ex in example_forms().into_iter().filter(|e| e.example >= 3) {
        let label = format!("Example {} newform from 𝒮_{}({})", ex.example, ex.t, ex.label);
        let res = ex.expand(ex.terms_for(ex.t, 8, 1)).and_then(|f| shimura_lift(&ex.meta, &f, ex.t));
        rep.push_result(&label.clone(), res, |rep, lift| {
            let b = lift.coeffs.truncate(8);
            let b1 = b.at(1);
            if b1.is_zero() {
                rep.push(label, false, "b(1) = 0");
                return;
            }
            let normalized = b.scale(&b1.recip());
            golden(rep, &label, &head(&normalized, 1, 7), &ex.newform_head[1..]);
        });
    }
    let ft = build_tilde_f13(10).unwrap();
    golden(&mut rep, "F̃₁₃", &head(&ft, 7, 3), &[6, -65, 291]);
    let lift = build_tilde_f13(60).and_then(|f| shimura_lift(&crate::frobenius::tilde_f13_meta(), &f, 7));
    rep.push_result("𝒮₇(F̃₁₃)", lift, |rep, l| golden(rep, "𝒮₇(F̃₁₃)", &head(&l.coeffs, 1, 5), &[6, -96, 486, 1536, 3376]));
    // the rational decomposition, on the printed segments of g₆ and g₃₀
    let g6 = [1i64, -16, 81, 256, 2694];
    let g30 = [1i64, -16, 81, 256, -625];
    let b: Vec<BigRational> = (1..=5usize)
        .map(|n| {
            let v5 = if n % 5 == 0 { g6[n / 5 - 1] } else { 0 };
            (q(2221) * q(g6[n - 1]) - q(3_544_837) * q(v5) + q(1001) * q(g30[n - 1])) / q(537)
        })
        .collect();
    let want: Vec<BigRational> = [6, -96, 486, 1536, 3376].iter().map(|&x| q(x)).collect();
    rep.push(
        "𝒮₇(F̃₁₃) = (2221 g₆ - 3544837 g₆|V₅ + 1001 g₃₀)/537 on printed terms",
        b == want,
        b.iter().map(rational_to_string).collect::<Vec<_>>().join(", "),
    );
    let mod13: Vec<i64> = (1..=5usize)
        .map(|n| (6 * g6[n - 1] + if n % 5 == 0 { 4 * g6[n / 5 - 1] } else { 0 } - want[n - 1].to_integer().try_into().unwrap_or(0i64)).rem_euclid(13))
        .collect();
    rep.push("𝒮₇(F̃₁₃) ≡ 6g₆ + 4g₆|V₅ (mod 13) on printed terms", mod13.iter().all(|&x| x == 0), format!("{mod13:?}"));
    rep.push_result("g₆ mod 13 from the lift", recover_g6_mod13(6), |rep, c| {
        let got: Vec<i64> = (1..=5).map(|n| c.at(n) as i64).collect();
        let want: Vec<i64> = g6.iter().map(|x| x.rem_euclid(13)).collect();
        rep.push("g₆ mod 13 from the lift", got == want, format!("got {got:?}, printed mod 13 {want:?}"));
    });
    rep.finish(started)
}

/// Lift identities, proportionality and multiplicativity for the worked
/// examples (all when `which` is empty) to `terms` coefficients.
pub fn lift_identity_suite(which: &[u8], terms: usize) -> SuiteReport {
    let started = Instant::now();
    let mut rep = SuiteReport::new("lift identities");
    for ex in example_forms().into_iter().filter(|e| which.is_empty() || which.contains(&e.example)) {
        let label = format!("𝒮_{}({})", ex.t, ex.label);
        let lift = ex.expand(ex.terms_for(ex.t, terms + 1, 1)).and_then(|f| shimura_lift(&ex.meta, &f, ex.t));
        rep.push_result(&label.clone(), lift, |rep, lift| {
            let b = lift.coeffs.truncate(terms + 1);
            if b.coeffs().len() < terms + 1 {
                rep.push(&label, false, format!("only {} coefficients", b.coeffs().len()));
                return;
            }
            match ex.newform_eta {
                Some(spec) => {
                    let f = EtaQuotient::parse(spec).unwrap().expand(terms + 1);
                    let f = f.reframe(0, 1).unwrap_or(f);
                    let r = CheckReport::compare(format!("{label} = {spec}"), &f, &b).unwrap();
                    rep.push_report(&r, terms);
                }
                None => {
                    let prop = b.truncate(ex.newform_head.len()).proportionality(&ex.newform_head());
                    let c = b.at(1);
                    let ok = matches!(&prop, Ok(Some(k)) if *k == c) && !c.is_zero();
                    rep.push(
                        format!("{label} ∝ printed newform"),
                        ok,
                        format!("b(1) = {}, ratio {:?}", rational_to_string(&c), prop.ok().flatten().map(|x| rational_to_string(&x))),
                    );
                    match multiplicativity_check(&b) {
                        Ok(r) => rep.push_report(&CheckReport { name: format!("{label} multiplicative"), ..r }, terms),
                        Err(e) => rep.push(format!("{label} multiplicative"), false, e.to_string()),
                    }
                }
            }
        });
    }
    rep.finish(started)
}

/// Eigenform relations, equivariance, commutation and eta/theta consistency.
pub fn hecke_suite(seed: u64, equivariance_terms: usize) -> SuiteReport {
    let started = Instant::now();
    let mut rep = SuiteReport::new("Hecke operators");
    let forms = example_forms();
    let eta5 = &forms[0];
    let f = eta5.expand(4000).unwrap();
    let t25 = t_p2_eta(&eta5.meta, &f, 5).unwrap();
    let r = CheckReport::compare("T₂₅η⁵ = -6η⁵", &f.truncate_end(t25.end()).scale(&q(-6)), &t25).unwrap();
    rep.push_report(&r, 50);
    for ex in &forms[1..3] {
        let newform = ex.newform_head();
        let f = ex.expand(4000).unwrap();
        match crate::lift::eigen_relation_check(&ex.meta, &f, &newform, &[3, 5, 7]) {
            Ok(rs) => rs.iter().for_each(|r| {
                let r = CheckReport { name: format!("{}: {}", ex.label, r.name), ..r.clone() };
                rep.push_report(&r, 50)
            }),
            Err(e) => rep.push(ex.label, false, e.to_string()),
        }
    }

    let combos: [(usize, u64, u64); 7] = [(0, 5, 7), (1, 3, 5), (2, 5, 3), (3, 5, 3), (4, 1, 3), (4, 1, 5), (5, 13, 5)];
    for (i, t, p) in combos {
        let ex = &forms[i];
        let res = ex
            .expand(ex.terms_for(t, equivariance_terms + 1, p))
            .and_then(|f| equivariance_check(&ex.meta, &f, t, p));
        let label = format!("𝒮_{t}(T_{{{p}²}}F) = χ({p})T_{p}𝒮_{t}(F) for {}", ex.label);
        rep.push_result(&label.clone(), res, |rep, r| rep.push_report(&CheckReport { name: label, ..r }, equivariance_terms));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut fails = 0;
    let cases = 8;
    for _ in 0..cases {
        let coeffs: Vec<BigRational> = (0..2000).map(|_| q(rng.gen_range(-20..=20))).collect();
        let f = Series::new(Rationals, 24, 5, 24, coeffs).unwrap();
        for (p, l) in [(5u64, 7u64), (7, 11)] {
            let a = t_p2_eta(&eta5.meta, &t_p2_eta(&eta5.meta, &f, p).unwrap(), l).unwrap();
            let b = t_p2_eta(&eta5.meta, &t_p2_eta(&eta5.meta, &f, l).unwrap(), p).unwrap();
            if !CheckReport::compare("comm", &a, &b).map(|r| r.passed).unwrap_or(false) {
                fails += 1;
            }
        }
    }
    rep.push("[T_{p²}, T_{q²}] = 0 on random series", fails == 0, format!("{} products, {fails} failures", 2 * cases));

    let psi = eta5.meta.theta_psi().unwrap();
    let g = eta5.meta.theta_image(&f).unwrap();
    for p in [5u64, 7] {
        let lhs = eta5.meta.theta_image(&t_p2_eta(&eta5.meta, &f, p).unwrap()).unwrap();
        let rhs = t_p2_theta(eta5.meta.lambda, &psi, &g, p).unwrap();
        let r = CheckReport::compare(format!("(T_{{{p}²}}η⁵)|V₂₄ = T^s_{{{p}²}}(η⁵|V₂₄)"), &lhs, &rhs).unwrap();
        rep.push_report(&r, 50);
    }
    rep.finish(started)
}

/// Atkin-Lehner relations predicted by the signs, on every lift.
pub fn newness_suite(terms: usize) -> SuiteReport {
    let started = Instant::now();
    let mut rep = SuiteReport::new("newness of lifts");
    for ex in example_forms() {
        let res = ex.expand(ex.terms_for(ex.t, terms + 1, 1)).and_then(|f| shimura_lift(&ex.meta, &f, ex.t));
        rep.push_result(ex.label, res, |rep, lift| match crate::lift::newness_checks(&lift) {
            Ok(rs) => rs.iter().for_each(|r| {
                let name = format!("𝒮_{}({}): {}", ex.t, ex.label, r.name);
                rep.push_report(&CheckReport { name, ..r.clone() }, 10)
            }),
            Err(e) => rep.push(ex.label, false, e.to_string()),
        });
    }
    let meta = crate::frobenius::tilde_f13_meta();
    let eps = meta.eps().unwrap();
    let res = build_tilde_f13(7 * (terms + 1) * (terms + 1) / 24 + 8).and_then(|f| shimura_lift(&meta, &f, 7));
    rep.push_result("𝒮₇(F̃₁₃)", res, |rep, lift| {
        let k = lift.target_weight as u32;
        for (p, e) in [(2, eps.eps2), (3, eps.eps3.unwrap_or(0))] {
            let r = al_eigen_check(&lift.coeffs, p, k, e).unwrap();
            rep.push_report(&CheckReport { name: format!("𝒮₇(F̃₁₃): {}", r.name), ..r }, 10);
        }
    });
    let printed = FracSeries::from_ints(&[0, 6, -96, 486, 1536, 3376]);
    let r2 = al_eigen_check(&printed, 2, 10, eps.eps2).unwrap();
    let r3 = al_eigen_check(&printed, 3, 10, eps.eps3.unwrap_or(0)).unwrap();
    rep.push("printed 𝒮₇(F̃₁₃): b(2)/b(1) = -16 = -ε₂·2⁴", r2.passed, format!("ε₂ = {}", eps.eps2));
    rep.push("printed 𝒮₇(F̃₁₃): b(3)/b(1) = 81 = -ε₃·3⁴", r3.passed, format!("ε₃ = {:?}", eps.eps3));
    rep.finish(started)
}

/// `Sh_t(F|V_D) = χ·𝒮_t(F)` for every example form.
pub fn shcompare_suite(terms: usize) -> SuiteReport {
    let started = Instant::now();
    let mut rep = SuiteReport::new("classical lift comparison");
    for ex in example_forms() {
        let mut ts = vec![ex.t];
        // a second admissible t where it stays cheap
        let alt = ex.t + ex.meta.denom() as u64;
        if crate::arith::is_squarefree(alt) && alt <= 30 {
            ts.push(alt);
        }
        for t in ts {
            let label = format!("Sh_{t} vs 𝒮_{t} for {}", ex.label);
            let res = ex.expand(ex.terms_for(t, terms + 1, 1)).and_then(|f| compare_lifts(&ex.meta, &f, t, terms));
            rep.push_result(&label.clone(), res, |rep, d| rep.push(label, d.is_zero(), format!("max |c(n) - χ(n)b(n)| = {d} over {terms} terms")));
        }
    }
    // the classical lift of Example 1's G is also a nonzero multiple of f
    let g = EtaQuotient::parse("2^3 3^2 12^2 6^-2").unwrap().expand(101 * 101 + 5);
    let f = EtaQuotient::parse("1^2 2^2 3^2 6^2").unwrap().expand(101);
    let res = classical_shimura_lift(&g, 1, 2, &RealCharacter::trivial(12));
    rep.push_result("Sh₁(G) ∝ f", res, |rep, sh| {
        let prop = f.reframe(0, 1).and_then(|f| sh.truncate(101).proportionality(&f));
        let ok = matches!(&prop, Ok(Some(c)) if !c.is_zero()) && sh.coeffs().len() > 100;
        let ratio = prop.ok().flatten().map(|x| rational_to_string(&x));
        rep.push("Sh₁(G) ∝ f", ok, format!("ratio {ratio:?} over {} terms", sh.coeffs().len().min(101)));
    });
    rep.finish(started)
}

/// `F_ℓ` modulo `ℓ` and the cross-check against `cφ₅`.
pub fn fl_suite(terms: usize, flcong_terms: usize) -> SuiteReport {
    let started = Instant::now();
    let mut rep = SuiteReport::new("F_ℓ modulo ℓ");
    for ell in [7u64, 11, 13] {
        let label = if ell == 13 { "F₁₃ ≡ F̃₁₃ (mod 13)".to_string() } else { format!("F_{ell} ≡ 0 (mod {ell})") };
        rep.push_result(&label.clone(), fl_identity(ell, terms), |rep, r| {
            rep.push(label, r.passed() && r.checked >= terms, format!("{} terms, mismatches {:?}", r.checked, &r.mismatches[..r.mismatches.len().min(3)]))
        });
    }
    for ell in [7u64, 11, 13] {
        let label = format!("F_{ell} ≡ Σ cφ₅(({ell}n+5)/24) q^{{n/24}} (mod {ell})");
        rep.push_result(&label.clone(), flcong_crosscheck(ell, flcong_terms), |rep, r| {
            rep.push(label, r.passed() && r.checked >= flcong_terms, format!("{} terms, mismatches {:?}", r.checked, &r.mismatches[..r.mismatches.len().min(3)]))
        });
    }
    rep.finish(started)
}

/// The closed form for `A₅`: validation against enumeration and a long run mod 13.
pub fn a5_suite(out_terms: usize) -> SuiteReport {
    let started = Instant::now();
    let mut rep = SuiteReport::new("A₅ closed form");
    rep.push_result("fit", a5_closed_form(), |rep, fit| {
        rep.push(
            "fit validated by enumeration",
            fit.validated_up_to >= 10_000,
            format!(
                "constants ({}, {}, {}) from {} rows, validated to n = {}",
                rational_to_string(&fit.constants[0]),
                rational_to_string(&fit.constants[1]),
                rational_to_string(&fit.constants[2]),
                fit.fit_rows,
                fit.validated_up_to
            ),
        );
        let bound = 10_000u64;
        let counts = QuadFormCounter::new(5).and_then(|c| c.counts_up_to(bound));
        let series = fit.series(bound as usize + 1);
        let ok = counts
            .as_ref()
            .map(|c| c.iter().enumerate().all(|(n, &v)| series.at(n as i64) == q(v as i64)))
            .unwrap_or(false);
        rep.push(format!("A₅ = enumeration for n ≤ {bound}"), ok, "independent recount");
        let spot: Vec<u64> = (0..=60).chain([97, 143, 200]).collect();
        let ok = spot.iter().all(|&n| rm_count(5, n).map(|c| series.at(n as i64) == q(c as i64)).unwrap_or(false));
        rep.push("A₅ = rm_count at spot values", ok, format!("{} values", spot.len()));
        let t = Instant::now();
        let res = fit.series_mod(out_terms, 13);
        let secs = t.elapsed().as_secs_f64();
        rep.push_result("A₅ mod 13", res, |rep, s| {
            let ok = s.coeffs().len() == out_terms && secs < 60.0;
            rep.push(format!("{out_terms} terms of A₅ mod 13"), ok, format!("{secs:.2} s"));
        });
    });
    rep.finish(started)
}

fn partitions(n: usize) -> Vec<BigInt> {
    let mut p = vec![BigInt::zero(); n + 1];
    p[0] = BigInt::one();
    for m in 1..=n {
        let mut acc = BigInt::zero();
        for k in 1.. {
            let g1 = k * (3 * k - 1) / 2;
            if g1 > m {
                break;
            }
            let sign = if k % 2 == 1 { 1 } else { -1 };
            acc += &p[m - g1] * sign;
            let g2 = k * (3 * k + 1) / 2;
            if g2 <= m {
                acc += &p[m - g2] * sign;
            }
        }
        p[m] = acc;
    }
    p
}

/// `cφ₁ = p` and the Ramanujan-type congruences for `cφ₅`.
pub fn cphi_suite(partition_bound: usize, n_max: u64) -> SuiteReport {
    let started = Instant::now();
    let mut rep = SuiteReport::new("cφ consistency");
    rep.push_result("cφ₁ = p", cphi_series(1, partition_bound + 1), |rep, s| {
        let p = partitions(partition_bound);
        let bad = (0..=partition_bound).find(|&n| s.at(n as i64) != BigRational::from_integer(p[n].clone()));
        rep.push(format!("cφ₁(n) = p(n) for n ≤ {partition_bound}"), bad.is_none(), format!("first mismatch {bad:?}"));
    });
    for ell in [7u64, 11] {
        let b = if ell == 7 { 4 } else { 8 };
        let label = format!("cφ₅({ell}n+{b}) ≡ 0 (mod {ell}), n ≤ {n_max}");
        rep.push_result(&label.clone(), ramanujan_scan(ell, n_max), |rep, r| {
            rep.push(label, r.passed() && r.checked as u64 == n_max + 1, format!("{} checked, {} violations", r.checked, r.mismatches.len()))
        });
    }
    rep.push_result("shifted class", cphi5_table(7, 7 * 1000 + 4).and_then(|t| progression_scan(&t, 7, 3, 1000)), |rep, r| {
        rep.push("cφ₅(7n+3) (mod 7) has nonzero values", !r.passed(), format!("{} nonzero", r.mismatches.len()))
    });
    rep.finish(started)
}

pub const TABLE_PLUS: [u64; 20] =
    [103, 109, 283, 727, 769, 809, 991, 1063, 1223, 1231, 1259, 1291, 1307, 1367, 1409, 1543, 1733, 1789, 1831, 1861];
pub const TABLE_MINUS: [u64; 20] =
    [97, 191, 241, 251, 397, 409, 439, 463, 751, 823, 839, 1229, 1277, 1321, 1361, 1621, 1657, 1933, 1979, 1993];

/// The table of primes `Q < lmax` with `ε_Q = ±1`.
pub fn table_suite(lmax: u64) -> SuiteReport {
    let started = Instant::now();
    let mut rep = SuiteReport::new("table of Q");
    rep.push_result("classification", classify_table(lmax), |rep, t| {
        let expect_plus: Vec<u64> = TABLE_PLUS.iter().copied().filter(|&x| x < lmax).collect();
        let expect_minus: Vec<u64> = TABLE_MINUS.iter().copied().filter(|&x| x < lmax).collect();
        rep.push("ε_Q = +1 row", t.plus == expect_plus, format!("{:?}", t.plus));
        rep.push("ε_Q = -1 row", t.minus == expect_minus, format!("{:?}", t.minus));
        rep.push("101 has no congruence", lmax <= 101 || t.none.contains(&101), format!("{} primes without one", t.none.len()));
    });
    rep.finish(started)
}

/// Direct scans of `cφ₅((13Q²n+5)/24) mod 13` with arguments below `arg_bound`.
pub fn scan_suite(arg_bound: u64) -> SuiteReport {
    let started = Instant::now();
    let mut rep = SuiteReport::new("congruence scans");
    let table = match cphi5_table(13, arg_bound as usize + 1) {
        Ok(t) => t,
        Err(e) => {
            rep.push("cφ₅ mod 13", false, e.to_string());
            return rep.finish(started);
        }
    };
    for (qq, eps) in [(97u64, -1i32), (103, 1)] {
        let n_max = n_max_for(13, qq, arg_bound);
        for (e, expect_clean) in [(eps, true), (-eps, false)] {
            let label = format!("Q = {qq}, ε = {e:+}");
            rep.push_result(&label.clone(), scan_congruence_with(&table, qq, e, n_max), |rep, r| {
                let ok = r.n_checked > 0 && r.passed() == expect_clean;
                let what = if expect_clean { "expected none" } else { "expected some" };
                rep.push(label, ok, format!("n ≤ {n_max}: {} checked, {} violations ({what})", r.n_checked, r.violations.len()));
            });
        }
    }
    rep.push_result("cφ₅(13·97³n + 1014212)", congex_check(&table), |rep, c| {
        rep.push(
            "cφ₅(13·97³n + 1014212) ≡ 0 (mod 13)",
            c.passed,
            format!("n₀ = {}, (n₀/97) = {}, instances {:?}", c.n0, c.legendre, c.instances),
        );
    });
    rep.finish(started)
}

fn suitable_brute(k: u64, ell: u64) -> bool {
    let pow2 = |e: u64| (0..e).fold(1u64, |acc, _| acc * 2 % ell);
    let inv2 = (1..ell).find(|x| 2 * x % ell == 1).expect("ℓ odd");
    let naive_gcd = |a: u64, b: u64| (1..=a.min(b)).rev().find(|d| a.is_multiple_of(*d) && b.is_multiple_of(*d)).unwrap_or(a.max(b));
    let t = pow2(k - 1);
    k < ell
        && t != 2
        && t != inv2
        && 2 * k != ell + 1
        && 2 * k != ell + 3
        && (ell + 1) / naive_gcd(ell + 1, k - 1) >= 6
        && (ell - 1) / naive_gcd(ell - 1, k - 1) >= 6
}

/// Suitability against a brute-force checker, and the density of the Hasse condition.
pub fn predicate_suite(k_max: u64, ell_max: u64, hasse_bound: u64) -> SuiteReport {
    let started = Instant::now();
    let mut rep = SuiteReport::new("predicates");
    let mut mism = Vec::new();
    let mut total = 0;
    for ell in primes_up_to(ell_max).into_iter().filter(|&l| l >= 5) {
        for k in (2..=k_max).step_by(2) {
            total += 1;
            if is_suitable_numeric(k, ell) != suitable_brute(k, ell) {
                mism.push((k, ell));
            }
        }
    }
    rep.push(format!("suitability for k ≤ {k_max}, ℓ ≤ {ell_max}"), mism.is_empty(), format!("{total} pairs, mismatches {mism:?}"));
    let mut bad = Vec::new();
    for ell in primes_up_to(2000).into_iter().filter(|&l| l >= 5) {
        let target = ell - 2;
        let mut x = 1u64;
        let brute = (1..2 * ell).find(|_| {
            x = x * 2 % ell;
            x == target
        });
        if brute != hasse_exponent(ell) {
            bad.push(ell);
        }
    }
    rep.push("Hasse exponent = least solution by search, ℓ < 2000", bad.is_empty(), format!("mismatches {bad:?}"));
    let primes: Vec<u64> = primes_up_to(hasse_bound - 1).into_iter().filter(|&l| l >= 5).collect();
    let hits = primes.iter().filter(|&&l| hasse_exponent(l).is_some()).count();
    let frac = hits as f64 / primes.len() as f64;
    rep.push(
        format!("Hasse density below {hasse_bound}"),
        (frac - 17.0 / 24.0).abs() < 0.01,
        format!("{hits}/{} = {frac:.5} vs 17/24 = {:.5}", primes.len(), 17.0 / 24.0),
    );
    rep.finish(started)
}

/// Runs one of the numbered acceptance suites with default sizes.
pub fn run_criterion(n: u8, seed: u64) -> Result<SuiteReport> {
    Ok(match n {
        1 => multiplier_suite(seed, 1000, 100, 500, 999),
        2 => golden_suite(),
        3 => lift_identity_suite(&[], 200),
        4 => hecke_suite(seed, 100),
        5 => newness_suite(200),
        6 => shcompare_suite(100),
        7 => fl_suite(100, 500),
        8 => a5_suite(1_000_000),
        9 => cphi_suite(1000, 100_000),
        10 => table_suite(2000),
        11 => scan_suite(2_000_000),
        12 => predicate_suite(40, 300, 1_000_000),
        _ => return invalid(format!("no suite numbered {n}")),
    })
}
