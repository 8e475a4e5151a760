//! The eta multiplier `ν` and the theta multiplier `ν_θ` as exact roots of
//! unity, identities relating them, and a floating-point harness that checks
//! transformation laws of truncated expansions at points of the upper half-plane.

use std::fmt;

use num_complex::Complex64;
use num_traits::ToPrimitive;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::arith::{epsilon_d, gcd, kronecker, mod_inv, FourthRoot, RealCharacter};
use crate::error::{invalid, Error, Result};
use crate::qseries::FracSeries;

/// Largest term ratio accepted by the numeric harness.
pub const MAX_TERM_RATIO: f64 = 0.8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct GL2Int {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub d: i64,
}

impl GL2Int {
    pub const IDENTITY: GL2Int = GL2Int { a: 1, b: 0, c: 0, d: 1 };
    pub const T: GL2Int = GL2Int { a: 1, b: 1, c: 0, d: 1 };
    pub const S: GL2Int = GL2Int { a: 0, b: -1, c: 1, d: 0 };

    pub fn new(a: i64, b: i64, c: i64, d: i64) -> Self {
        GL2Int { a, b, c, d }
    }

    pub fn det(&self) -> i64 {
        self.a * self.d - self.b * self.c
    }

    pub fn is_sl2(&self) -> bool {
        self.det() == 1
    }

    pub fn in_gamma0(&self, n: i64) -> bool {
        self.is_sl2() && self.c % n == 0
    }

    pub fn neg(&self) -> Self {
        GL2Int::new(-self.a, -self.b, -self.c, -self.d)
    }

    pub fn mul(&self, o: &GL2Int) -> GL2Int {
        GL2Int::new(
            self.a * o.a + self.b * o.c,
            self.a * o.b + self.b * o.d,
            self.c * o.a + self.d * o.c,
            self.c * o.b + self.d * o.d,
        )
    }

    /// `(a, tb; c/t, d)`, the conjugate by `diag(t, 1)`.
    pub fn conjugate_v(&self, t: i64) -> Result<GL2Int> {
        if self.c % t != 0 {
            return invalid(format!("c = {} is not divisible by {t}", self.c));
        }
        Ok(GL2Int::new(self.a, t * self.b, self.c / t, self.d))
    }

    pub fn act(&self, z: Complex64) -> Complex64 {
        (z * self.a as f64 + self.b as f64) / (z * self.c as f64 + self.d as f64)
    }

    fn require_sl2(&self) -> Result<()> {
        if self.is_sl2() {
            Ok(())
        } else {
            invalid(format!("{self} has determinant {}", self.det()))
        }
    }
}

impl fmt::Display for GL2Int {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} {}; {} {})", self.a, self.b, self.c, self.d)
    }
}

/// `e(k/24)`, stored as `k mod 24`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Root24(u8);

impl Root24 {
    pub const ONE: Root24 = Root24(0);

    pub fn from_exponent(k: i128) -> Self {
        Root24(k.rem_euclid(24) as u8)
    }

    pub fn exponent(self) -> u8 {
        self.0
    }

    pub fn from_sign(s: i32) -> Self {
        match s {
            1 => Root24(0),
            -1 => Root24(12),
            _ => panic!("sign must be ±1, got {s}"),
        }
    }

    pub fn from_fourth(r: FourthRoot) -> Self {
        Root24(6 * r.exponent())
    }

    pub fn pow(self, e: i64) -> Self {
        Self::from_exponent(self.0 as i128 * e as i128)
    }

    pub fn inv(self) -> Self {
        Root24((24 - self.0) % 24)
    }

    pub fn to_complex(self) -> Complex64 {
        Complex64::from_polar(1.0, std::f64::consts::TAU * self.0 as f64 / 24.0)
    }
}

impl std::ops::Mul for Root24 {
    type Output = Root24;
    fn mul(self, rhs: Root24) -> Root24 {
        Root24((self.0 + rhs.0) % 24)
    }
}

impl fmt::Display for Root24 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e({}/24)", self.0)
    }
}

/// The eta multiplier: `η(γz) = ν(γ)(cz+d)^{1/2}η(z)` with the principal
/// branch of the square root.
///
/// For `c > 0` this is Knopp's closed formula. For `c < 0` the principal
/// branch gives `ν(γ) = iν(-γ)`; for `c = 0, d = -1` it gives
/// `ν(γ) = -iν(-γ)` since `arg(-1) = π`.
pub fn nu_eta(g: &GL2Int) -> Result<Root24> {
    g.require_sl2()?;
    let (a, b, c, d) = (g.a as i128, g.b as i128, g.c as i128, g.d as i128);
    if c > 0 {
        let (sym, num) = if c % 2 != 0 {
            (kronecker(g.d, g.c), (a + d) * c - b * d * (c * c - 1) - 3 * c)
        } else {
            (kronecker(g.c, g.d), (a + d) * c - b * d * (c * c - 1) + 3 * d - 3 - 3 * c * d)
        };
        return Ok(Root24::from_sign(sym) * Root24::from_exponent(num));
    }
    if c < 0 {
        return Ok(Root24(6) * nu_eta(&g.neg())?);
    }
    if d == 1 {
        Ok(Root24::from_exponent(b))
    } else {
        Ok(Root24(18) * nu_eta(&g.neg())?)
    }
}

/// `ν_θ(γ) = (c/d) ε_d^{-1}` on `Γ₀(4)`.
pub fn nu_theta(g: &GL2Int) -> Result<FourthRoot> {
    g.require_sl2()?;
    if g.c % 4 != 0 {
        return invalid(format!("{g} is not in Γ₀(4)"));
    }
    Ok(FourthRoot::from_sign(kronecker(g.c, g.d)) * epsilon_d(g.d)?.inv())
}

/// `ν^r((a, tb; c/t, d)) = (d/t) ν^{rt}(γ)` for `γ ∈ Γ₀(t)`.
pub fn check_nu_v_t(g: &GL2Int, r: i64, t: i64) -> Result<bool> {
    if r % 2 == 0 || t % 2 == 0 {
        return invalid("r and t must be odd");
    }
    if r % 3 != 0 && t % 3 == 0 {
        return invalid("3 ∤ r requires 3 ∤ t");
    }
    let conj = g.conjugate_v(t)?;
    let lhs = nu_eta(&conj)?.pow(r);
    let rhs = Root24::from_sign(kronecker(g.d, t)) * nu_eta(g)?.pow(r * t);
    Ok(lhs == rhs)
}

/// Which lattice rescaling turns `ν^r` into a theta-type multiplier.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ThetaCase {
    /// `(r, 6) = 1`: `F|V₂₄` on `Γ₀(576N)`.
    V24,
    /// `(r, 6) = 3`: `F|V₈` on `Γ₀(64N)`.
    V8,
}

impl ThetaCase {
    pub fn of(r: i64) -> Result<Self> {
        match gcd(r, 6) {
            1 => Ok(ThetaCase::V24),
            3 => Ok(ThetaCase::V8),
            _ => invalid(format!("r = {r} must be odd")),
        }
    }

    pub fn scale(self) -> i64 {
        match self {
            ThetaCase::V24 => 24,
            ThetaCase::V8 => 8,
        }
    }

    pub fn level(self) -> i64 {
        self.scale() * self.scale()
    }
}

/// The character `ψ'` with `F|V_m ∈ M(mN·m, ψ' ν_θ^{2λ+1})`:
/// `ψ (-1/·)^{λ+(r-1)/2} (12/·)` for `V₂₄` and `ψ (-1/·)^{λ+(r-1)/2}` for `V₈`.
pub fn theta_character(r: i64, lambda: i64, psi: &RealCharacter) -> Result<RealCharacter> {
    let case = ThetaCase::of(r)?;
    let mut chi = psi.mul(&RealCharacter::trivial(case.level() as u64));
    if (lambda + (r - 1) / 2).rem_euclid(2) == 1 {
        chi = chi.mul(&RealCharacter::chi_minus4());
    }
    if case == ThetaCase::V24 {
        chi = chi.mul(&RealCharacter::chi12());
    }
    Ok(chi)
}

/// Exact check that `ψ(d)ν^r` seen through `V₂₄` (or `V₈`) equals
/// `ψ'(d) ν_θ^{2λ+1}(γ)`. Only the multipliers are compared; `ψ` enters both
/// sides through `d`.
pub fn check_eta_to_theta(r: i64, lambda: i64, g: &GL2Int) -> Result<bool> {
    let case = ThetaCase::of(r)?;
    if !g.in_gamma0(case.level()) {
        return invalid(format!("{g} is not in Γ₀({})", case.level()));
    }
    let m = case.scale();
    let lhs = nu_eta(&g.conjugate_v(m)?)?.pow(r);
    let psi_prime = theta_character(r, lambda, &RealCharacter::trivial(1))?;
    let rhs = Root24::from_sign(psi_prime.value(g.d)) * Root24::from_fourth(nu_theta(g)?.pow(2 * lambda + 1));
    Ok(lhs == rhs)
}

/// Outcome of a numeric transformation check.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct Residual {
    /// `|F(γz) - μ (cz+d)^k F(z)|`.
    pub absolute: f64,
    /// The same, divided by the summed absolute size of the terms on both
    /// sides, so cancellation inside `F` does not inflate it.
    pub relative: f64,
    /// Effective ratio between consecutive terms at the worse of the two points.
    pub term_ratio: f64,
}

/// Point `z₀ = (-d + i)/c` for `c > 0`, where `cz₀ + d = i` and
/// `Im z₀ = Im γz₀ = 1/c`, the best possible for both evaluations.
pub fn sample_point(g: &GL2Int) -> Complex64 {
    if g.c == 0 {
        return Complex64::new(0.1, 1.05);
    }
    let c = g.c as f64;
    Complex64::new(-(g.d as f64) / c, 1.0 / c.abs())
}

/// `F(z) = Σ c_i q^{(v + s i)/D}` by truncated summation.
pub fn evaluate(series: &FracSeries, z: Complex64) -> Result<Complex64> {
    Ok(evaluate_with_mass(series, z)?.0)
}

// Also returns `Σ |c_i q^{...}|`, the scale against which rounding error is measured.
fn evaluate_with_mass(series: &FracSeries, z: Complex64) -> Result<(Complex64, f64)> {
    let d = series.denom() as f64;
    let step = Complex64::new(0.0, std::f64::consts::TAU * series.stride() as f64 / d) * z;
    let ratio = step.exp().norm();
    if ratio >= MAX_TERM_RATIO {
        return Err(Error::Convergence { ratio });
    }
    // the tail beyond the known coefficients must be invisible in f64
    if ratio.powf(series.coeffs().len() as f64) > 1e-30 {
        return Err(Error::Convergence { ratio });
    }
    let start = (Complex64::new(0.0, std::f64::consts::TAU * series.valuation() as f64 / d) * z).exp();
    let w = step.exp();
    let mut power = start;
    let mut acc = Complex64::new(0.0, 0.0);
    let mut mass = 0.0;
    for c in series.coeffs() {
        let cf = c.to_f64().unwrap_or(f64::NAN);
        if cf != 0.0 {
            let term = power * cf;
            acc += term;
            mass += term.norm();
        }
        power *= w;
    }
    Ok((acc, mass))
}

/// Checks `F(γz₀) = μ (cz₀+d)^{k} F(z₀)` for weight `k = twice_weight / 2`,
/// principal branch.
pub fn verify_transform_numeric(
    series: &FracSeries,
    twice_weight: i64,
    g: &GL2Int,
    predicted: Complex64,
    z0: Complex64,
) -> Result<Residual> {
    if z0.im <= 0.0 {
        return invalid("sample point must lie in the upper half-plane");
    }
    if g.det() <= 0 {
        return invalid(format!("{g} is not in GL2+"));
    }
    let gz = g.act(z0);
    let (lhs, lhs_mass) = evaluate_with_mass(series, gz)?;
    let j = z0 * g.c as f64 + g.d as f64;
    let auto = j.powf(twice_weight as f64 / 2.0);
    let (f_z0, rhs_mass) = evaluate_with_mass(series, z0)?;
    let rhs = predicted * auto * f_z0;
    let absolute = (lhs - rhs).norm();
    let scale = (lhs_mass + auto.norm() * rhs_mass).max(f64::MIN_POSITIVE);
    let im = gz.im.min(z0.im);
    let term_ratio = (-std::f64::consts::TAU * im * series.stride() as f64 / series.denom() as f64).exp();
    Ok(Residual { absolute, relative: absolute / scale, term_ratio })
}

/// Seeded sampler for `Γ₀(N)` with `c = N·k`, `1 ≤ k ≤ k_max`, `|d| ≤ d_max`.
pub struct Gamma0Sampler {
    n: i64,
    k_max: i64,
    d_max: i64,
    rng: ChaCha8Rng,
}

impl Gamma0Sampler {
    pub fn new(n: i64, k_max: i64, d_max: i64, seed: u64) -> Self {
        assert!(n >= 1 && k_max >= 1 && d_max >= 1);
        Gamma0Sampler { n, k_max, d_max, rng: ChaCha8Rng::seed_from_u64(seed) }
    }

    /// A matrix with `c > 0`.
    pub fn sample(&mut self) -> GL2Int {
        loop {
            let c = self.n * self.rng.gen_range(1..=self.k_max);
            let d = self.rng.gen_range(-self.d_max..=self.d_max);
            if d == 0 && c != 1 || gcd(c, d) != 1 {
                continue;
            }
            let a = mod_inv(d, c).unwrap_or(0);
            let shift = self.rng.gen_range(-2..=2);
            let a = a + shift * c;
            let b = (a * d - 1) / c;
            let g = GL2Int::new(a, b, c, d);
            debug_assert!(g.in_gamma0(self.n));
            return g;
        }
    }

    /// Any sign of `c`, including `c = 0`.
    pub fn sample_signed(&mut self) -> GL2Int {
        match self.rng.gen_range(0..8) {
            0 => GL2Int::new(-1, self.rng.gen_range(-5..=5), 0, -1),
            1 => GL2Int::new(1, self.rng.gen_range(-5..=5), 0, 1),
            2..=4 => self.sample().neg(),
            _ => self.sample(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::EtaQuotient;
    use crate::qseries::{Rationals, Series};
    use crate::arith::RealCharacter;
    use num_rational::BigRational;

    fn theta_series(terms: usize) -> FracSeries {
        let mut c = vec![BigRational::from_integer(0.into()); terms];
        c[0] = BigRational::from_integer(1.into());
        let mut n = 1usize;
        while n * n < terms {
            c[n * n] = BigRational::from_integer(2.into());
            n += 1;
        }
        Series::from_q_coeffs(Rationals, c)
    }

    #[test]
    fn basic_values() {
        assert_eq!(nu_eta(&GL2Int::T).unwrap(), Root24::from_exponent(1));
        assert_eq!(nu_eta(&GL2Int::S).unwrap(), Root24::from_exponent(-3));
        assert_eq!(nu_theta(&GL2Int::IDENTITY).unwrap(), FourthRoot::ONE);
        assert_eq!(nu_theta(&GL2Int::new(1, 0, 4, 1)).unwrap(), FourthRoot::ONE);
        assert_eq!(nu_theta(&GL2Int::new(3, 1, 8, 3)).unwrap(), FourthRoot::I);
        assert!(nu_theta(&GL2Int::new(1, 0, 2, 1)).is_err());
        assert!(nu_eta(&GL2Int::new(2, 0, 0, 1)).is_err());
    }

    #[test]
    fn eta_is_numerically_consistent_in_every_sign_case() {
        let eta = EtaQuotient::eta_power(1).expand(400);
        let mut s = Gamma0Sampler::new(1, 12, 60, 7);
        for _ in 0..200 {
            let g = s.sample_signed();
            let z0 = sample_point(&g);
            let r = verify_transform_numeric(&eta, 1, &g, nu_eta(&g).unwrap().to_complex(), z0).unwrap();
            assert!(r.relative < 1e-9, "{g}: {r:?}");
        }
    }

    #[test]
    fn theta_transform() {
        let th = theta_series(2000);
        let mut s = Gamma0Sampler::new(4, 6, 60, 3);
        for _ in 0..100 {
            let g = s.sample_signed();
            let mu = Root24::from_fourth(nu_theta(&g).unwrap()).to_complex();
            let r = verify_transform_numeric(&th, 1, &g, mu, sample_point(&g)).unwrap();
            assert!(r.relative < 1e-9, "{g}: {r:?}");
        }
    }

    #[test]
    fn wrong_multiplier_is_detected() {
        let eta = EtaQuotient::eta_power(1).expand(400);
        let g = GL2Int::new(2, 1, 5, 3);
        let wrong = (nu_eta(&g).unwrap() * Root24::from_exponent(1)).to_complex();
        let r = verify_transform_numeric(&eta, 1, &g, wrong, sample_point(&g)).unwrap();
        assert!(r.relative > 1e-3);
    }

    #[test]
    fn convergence_guard() {
        let eta = EtaQuotient::eta_power(1).expand(50);
        let g = GL2Int::new(1, 0, 100, 1);
        assert!(matches!(
            verify_transform_numeric(&eta, 1, &g, Complex64::new(1.0, 0.0), sample_point(&g)),
            Err(Error::Convergence { .. })
        ));
    }

    #[test]
    fn negation_rule_for_positive_c() {
        let mut s = Gamma0Sampler::new(1, 50, 200, 11);
        for _ in 0..300 {
            let g = s.sample();
            assert_eq!(nu_eta(&g.neg()).unwrap(), Root24(6) * nu_eta(&g).unwrap());
            assert_eq!(nu_eta(&g).unwrap().pow(24), Root24::ONE);
        }
    }

    #[test]
    fn eta_to_theta_at_minus_identity() {
        for r in [1i64, 5, 7, 11, 13, 3, 9, 15, -1, -3] {
            let lambda = (r - 1) / 2;
            let minus = GL2Int::new(-1, 0, 0, -1);
            assert!(check_eta_to_theta(r, lambda, &minus).unwrap(), "r={r}");
        }
    }

    #[test]
    fn eta_to_theta_on_samples() {
        for (r, n) in [(1i64, 576i64), (5, 576), (7, 576), (-5, 576), (3, 64), (9, 64), (15, 64)] {
            let mut s = Gamma0Sampler::new(n, 40, 200, (r + 100) as u64);
            for _ in 0..200 {
                let g = s.sample_signed();
                for lambda in [(r - 1) / 2, (r - 1) / 2 + 1, 0] {
                    assert!(check_eta_to_theta(r, lambda, &g).unwrap(), "r={r} λ={lambda} {g}");
                }
            }
        }
        assert!(check_eta_to_theta(5, 2, &GL2Int::new(1, 0, 24, 1)).is_err());
        assert!(check_eta_to_theta(2, 0, &GL2Int::IDENTITY).is_err());
    }

    #[test]
    fn eta_to_theta_numeric() {
        // η⁵(24z) on Γ₀(576) and η⁹(8z) on Γ₀(64)
        for (r, m, n, kmax) in [(5i64, 24u64, 576i64, 1i64), (9, 8, 64, 3), (3, 8, 64, 3)] {
            let f = EtaQuotient::eta_power(r).expand(4000).v_operator(m).to_denom(1).unwrap();
            let psi = theta_character(r, (r - 1) / 2, &RealCharacter::trivial(1)).unwrap();
            let mut s = Gamma0Sampler::new(n, kmax, 200, 5);
            for _ in 0..30 {
                let g = s.sample();
                let mu = Root24::from_sign(psi.value(g.d)) * Root24::from_fourth(nu_theta(&g).unwrap().pow(r));
                let res = verify_transform_numeric(&f, r, &g, mu.to_complex(), sample_point(&g)).unwrap();
                assert!(res.relative < 1e-9, "r={r} {g}: {res:?}");
            }
        }
    }

    #[test]
    fn nu_v_t_identity() {
        for (r, t) in [(1i64, 5i64), (9, 7), (13, 11), (3, 3), (7, 1)] {
            let mut s = Gamma0Sampler::new(t, 30, 200, 17);
            for _ in 0..200 {
                let g = s.sample_signed();
                assert!(check_nu_v_t(&g, r, t).unwrap(), "r={r} t={t} {g}");
            }
        }
        assert!(check_nu_v_t(&GL2Int::IDENTITY, 5, 3).is_err());
    }
}
