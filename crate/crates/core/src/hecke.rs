//! Hecke operators on coefficient expansions: `T_{p²}` on eta-multiplier
//! spaces in both the `q^{1/24}` and `q^{1/8}` normalizations, Shimura's
//! `T^s_{p²}` on theta-multiplier spaces, integral-weight `T_p`, and the
//! `U_p` eigen-relations forced by Atkin-Lehner signs.

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::arith::{atkin_lehner_signs, ceil_div, is_prime, kronecker, EpsilonPair, RealCharacter};
use crate::error::{invalid, Error, Result};
use crate::multipliers::{theta_character, ThetaCase};
use crate::qseries::{rational_to_string, CoeffRing, FracSeries, Series};

/// The data `(λ, N, ψ, r)` of `S_{λ+1/2}(N, ψν^r)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct HalfIntegralMeta {
    pub lambda: i64,
    pub level: u64,
    pub psi: RealCharacter,
    pub r: i64,
}

#[derive(Serialize, Deserialize)]
struct MetaJson {
    lambda: i64,
    #[serde(rename = "N")]
    level: u64,
    psi: String,
    r: i64,
}

impl HalfIntegralMeta {
    pub fn new(lambda: i64, level: u64, psi: RealCharacter, r: i64) -> Result<Self> {
        if lambda < 1 {
            return invalid(format!("λ must be positive, got {lambda}"));
        }
        if r % 2 == 0 {
            return invalid(format!("r must be odd, got {r}"));
        }
        if level == 0 || !level.is_multiple_of(psi.modulus()) {
            return invalid(format!("ψ = {psi} is not a character modulo {level}"));
        }
        let psi = psi.lift_to(level)?;
        Ok(HalfIntegralMeta { lambda, level, psi, r })
    }

    /// Parses `{"lambda": 2, "N": 1, "psi": "1", "r": 5}`; `psi` is `"1"` or an
    /// odd squarefree `t` standing for `(·/t)`.
    pub fn from_json(s: &str) -> Result<Self> {
        let m: MetaJson = serde_json::from_str(s)?;
        let psi = RealCharacter::parse(&m.psi, m.level)?;
        Self::new(m.lambda, m.level, psi, m.r)
    }

    pub fn to_json(&self) -> String {
        let psi = match self.psi.discriminant() {
            1 => "1".to_string(),
            d => d.unsigned_abs().to_string(),
        };
        let m = MetaJson { lambda: self.lambda, level: self.level, psi, r: self.r };
        serde_json::to_string(&m).expect("plain struct serializes")
    }

    pub fn case(&self) -> ThetaCase {
        ThetaCase::of(self.r).expect("r is odd")
    }

    /// Exponent denominator of the natural expansion: 24, or 8 when `3 | r`.
    pub fn denom(&self) -> u32 {
        match self.case() {
            ThetaCase::V24 => 24,
            ThetaCase::V8 => 8,
        }
    }

    /// Every exponent numerator of `F` lies in this class modulo [`Self::denom`].
    pub fn residue(&self) -> i64 {
        match self.case() {
            ThetaCase::V24 => self.r.rem_euclid(24),
            ThetaCase::V8 => (self.r / 3).rem_euclid(8),
        }
    }

    /// `ψ(-1) = (-1/r)(-1)^λ`; otherwise the space is zero.
    pub fn is_consistent(&self) -> bool {
        let sign = if self.lambda % 2 == 0 { 1 } else { -1 };
        self.psi.value(-1) == kronecker(-1, self.r) * sign
    }

    pub fn twice_weight(&self) -> i64 {
        2 * self.lambda + 1
    }

    pub fn target_weight(&self) -> i64 {
        2 * self.lambda
    }

    /// `6N`, or `2N` when `3 | r`.
    pub fn target_level(&self) -> u64 {
        match self.case() {
            ThetaCase::V24 => 6 * self.level,
            ThetaCase::V8 => 2 * self.level,
        }
    }

    /// `(12/·)` or `(-4/·)`: the twist relating the two lifts and the
    /// Hecke equivariance sign.
    pub fn chi(&self) -> RealCharacter {
        match self.case() {
            ThetaCase::V24 => RealCharacter::chi12(),
            ThetaCase::V8 => RealCharacter::chi_minus4(),
        }
    }

    pub fn eps(&self) -> Result<EpsilonPair> {
        atkin_lehner_signs(self.r, &self.psi)
    }

    /// `ψ'` with `F|V_D ∈ M(D²N, ψ' ν_θ^{2λ+1})`.
    pub fn theta_psi(&self) -> Result<RealCharacter> {
        let level = self.case().level() as u64 * self.level;
        theta_character(self.r, self.lambda, &self.psi)?.lift_to(level)
    }

    /// `F|V_D` with `D = 24` or `8`, as an integral-exponent series.
    pub fn theta_image<R: CoeffRing>(&self, f: &Series<R>) -> Result<Series<R>> {
        let f = self.normalize(f)?;
        f.v_operator(self.denom() as u64).to_denom(1)
    }

    /// Brings `F` to this meta's denominator and checks its support.
    pub fn normalize<R: CoeffRing>(&self, f: &Series<R>) -> Result<Series<R>> {
        let f = f.to_denom(self.denom())?;
        let d = self.denom() as i64;
        if let Some((n, _)) = f.nonzero_terms().find(|(n, _)| n.rem_euclid(d) != self.residue()) {
            return Err(Error::SupportViolation { numerator: n, denom: f.denom() });
        }
        Ok(f)
    }
}

/// Which quadratic symbol the middle term of `T_{p²}` uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum HeckeConvention {
    /// `(12n/p)` on numerators over 24.
    Twelve,
    /// `(n/p)` on numerators over 8.
    Eight,
}

fn sign_pow(base: i32, e: i64) -> i32 {
    if e.rem_euclid(2) == 0 {
        1
    } else {
        base
    }
}

fn require_prime(p: u64) -> Result<()> {
    if is_prime(p) {
        Ok(())
    } else {
        invalid(format!("{p} is not prime"))
    }
}

fn signed<R: CoeffRing>(ring: &R, sign: i32, x: &R::Elem) -> R::Elem {
    match sign {
        0 => ring.zero(),
        1 => x.clone(),
        _ => ring.neg(x),
    }
}

// a(p²n) + sym(n)·c1·a(n) + c2·a(n/p²) on the lattice `start + stride·ℤ`.
fn hecke_p2_core<R: CoeffRing>(
    f: &Series<R>,
    p: i64,
    start: i64,
    stride: i64,
    c1: &R::Elem,
    sym: impl Fn(i64) -> i32,
    c2: &R::Elem,
) -> Result<Series<R>> {
    let ring = f.ring();
    let p2 = p * p;
    let end = crate::arith::floor_div(f.end() - 1, p2) + 1;
    let len = if end > start { ((end - start + stride - 1) / stride) as usize } else { 0 };
    let mid_zero = ring.is_zero(c1);
    let last_zero = ring.is_zero(c2);
    let coeffs = (0..len)
        .map(|i| {
            let n = start + stride * i as i64;
            let mut acc = f.at(p2 * n);
            if !mid_zero {
                let s = sym(n);
                if s != 0 {
                    let t = ring.mul(c1, &f.at(n));
                    acc = ring.add(&acc, &signed(ring, s, &t));
                }
            }
            if !last_zero && n % p2 == 0 {
                acc = ring.add(&acc, &ring.mul(c2, &f.at(n / p2)));
            }
            acc
        })
        .collect();
    Series::new(ring.clone(), f.denom(), start, stride as u32, coeffs)
}

fn output_lattice<R: CoeffRing>(f: &Series<R>, p: i64, modulus: i64) -> (i64, i64) {
    let stride = crate::arith::gcd(f.stride() as i64, modulus).max(1);
    let v = f.valuation();
    // a(p²n) reaches down to ⌈v/p²⌉ and a(n/p²) down to p²v
    let lo = ceil_div(v, p * p).min(p * p * v);
    (lo + (v - lo).rem_euclid(stride), stride)
}

/// `T_{p²}` on `S_{λ+1/2}(N, ψν^r)` in the natural normalization of `meta`.
pub fn t_p2_eta<R: CoeffRing>(meta: &HalfIntegralMeta, f: &Series<R>, p: u64) -> Result<Series<R>> {
    let conv = match meta.case() {
        ThetaCase::V24 => HeckeConvention::Twelve,
        ThetaCase::V8 => HeckeConvention::Eight,
    };
    t_p2_eta_with(meta, f, p, conv)
}

/// `T_{p²}` with an explicit convention. For `(r, 6) = 3` both conventions
/// make sense and agree except at `p = 3`; the result is returned over the
/// convention's denominator.
pub fn t_p2_eta_with<R: CoeffRing>(
    meta: &HalfIntegralMeta,
    f: &Series<R>,
    p: u64,
    conv: HeckeConvention,
) -> Result<Series<R>> {
    require_prime(p)?;
    let min_p = match meta.case() {
        ThetaCase::V24 => 5,
        ThetaCase::V8 => 3,
    };
    if p < min_p {
        return invalid(format!("T_{{p²}} needs p ≥ {min_p} when r = {}", meta.r));
    }
    if conv == HeckeConvention::Eight && meta.case() == ThetaCase::V24 {
        return invalid("the (n/p) convention needs 3 | r");
    }
    let f = meta.normalize(f)?;
    let f = match conv {
        HeckeConvention::Twelve => f.to_denom(24)?,
        HeckeConvention::Eight => f,
    };
    let ring = f.ring().clone();
    let pi = p as i64;
    let psi_p = meta.psi.value(pi);
    let lead = sign_pow(kronecker(-1, pi), (meta.r - 1) / 2) * psi_p;
    let pow1 = ring.int_pow(pi, (meta.lambda - 1) as u32);
    let c1 = signed(&ring, lead, &pow1);
    let c2 = if psi_p == 0 { ring.zero() } else { ring.int_pow(pi, (2 * meta.lambda - 1) as u32) };
    let (start, stride) = output_lattice(&f, pi, f.denom() as i64);
    match conv {
        HeckeConvention::Twelve => hecke_p2_core(&f, pi, start, stride, &c1, |n| kronecker(12 * n, pi), &c2),
        HeckeConvention::Eight => hecke_p2_core(&f, pi, start, stride, &c1, |n| kronecker(n, pi), &c2),
    }
}

/// Shimura's `T^s_{p²}` on `M_{λ+1/2}(N, ψ'ν_θ^{2λ+1})`; `g` must have integral exponents.
pub fn t_p2_theta<R: CoeffRing>(lambda: i64, psi: &RealCharacter, g: &Series<R>, p: u64) -> Result<Series<R>> {
    require_prime(p)?;
    if g.denom() != 1 {
        return invalid(format!("T^s needs integral exponents, got denominator {}", g.denom()));
    }
    let ring = g.ring().clone();
    let pi = p as i64;
    let psi_p = psi.value(pi);
    let lead = sign_pow(kronecker(-1, pi), lambda) * psi_p;
    let c1 = signed(&ring, lead, &ring.int_pow(pi, (lambda - 1) as u32));
    let c2 = if psi_p == 0 { ring.zero() } else { ring.int_pow(pi, (2 * lambda - 1) as u32) };
    let (start, stride) = output_lattice(g, pi, 1);
    hecke_p2_core(g, pi, start, stride, &c1, |n| kronecker(n, pi), &c2)
}

/// `T_p = U_p + χ(p)p^{k-1}V_p` on integral weight `k`.
pub fn t_p_integral<R: CoeffRing>(f: &Series<R>, p: u64, k: u32, chi: &RealCharacter) -> Result<Series<R>> {
    require_prime(p)?;
    if f.denom() != 1 {
        return invalid(format!("T_p needs integral exponents, got denominator {}", f.denom()));
    }
    let ring = f.ring().clone();
    let pi = p as i64;
    let c = signed(&ring, chi.value(pi), &ring.int_pow(pi, k.saturating_sub(1)));
    let start = ceil_div(f.valuation(), pi).min(pi * f.valuation());
    let end = crate::arith::floor_div(f.end() - 1, pi) + 1;
    let len = (end - start).max(0) as usize;
    let coeffs = (0..len)
        .map(|i| {
            let n = start + i as i64;
            let mut acc = f.at(pi * n);
            if n % pi == 0 && !ring.is_zero(&c) {
                acc = ring.add(&acc, &ring.mul(&c, &f.at(n / pi)));
            }
            acc
        })
        .collect();
    Series::new(ring, 1, start, 1, coeffs)
}

/// Outcome of a coefficientwise identity check.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckReport {
    pub name: String,
    pub passed: bool,
    /// Coefficients compared.
    pub compared: usize,
    /// First disagreement as `(exponent numerator, expected, got)`.
    pub first_violation: Option<(i64, String, String)>,
}

impl CheckReport {
    /// Compares two exact series on their common known window.
    pub fn compare(name: impl Into<String>, expected: &FracSeries, got: &FracSeries) -> Result<Self> {
        let end = expected.end().min(got.end());
        let diff = got.sub(expected)?.truncate_end(end);
        let first_violation = diff
            .order()
            .map(|n| (n, rational_to_string(&expected.at(n)), rational_to_string(&got.at(n))));
        Ok(CheckReport { name: name.into(), passed: first_violation.is_none(), compared: diff.coeffs().len(), first_violation })
    }

    /// The same for any coefficient ring, rendering values with `Debug`.
    pub fn compare_generic<R: CoeffRing>(name: impl Into<String>, expected: &Series<R>, got: &Series<R>) -> Result<Self>
    where
        R::Elem: std::fmt::Debug,
    {
        let end = expected.end().min(got.end());
        let diff = got.sub(expected)?.truncate_end(end);
        let first_violation =
            diff.order().map(|n| (n, format!("{:?}", expected.at(n)), format!("{:?}", got.at(n))));
        Ok(CheckReport { name: name.into(), passed: first_violation.is_none(), compared: diff.coeffs().len(), first_violation })
    }
}

/// `f|U_p = -ε p^{k/2-1} f`: checks `b(pn) = -ε p^{k/2-1} b(n)` wherever `b(pn)` is known.
pub fn al_eigen_check(f: &FracSeries, p: u64, k: u32, eps: i32) -> Result<CheckReport> {
    require_prime(p)?;
    if f.denom() != 1 {
        return invalid("U_p eigen-relations need integral exponents");
    }
    if !k.is_multiple_of(2) || k < 2 {
        return invalid(format!("weight {k} must be even and at least 2"));
    }
    if eps.abs() != 1 {
        return invalid(format!("ε must be ±1, got {eps}"));
    }
    let up = f.u_operator(p);
    let scale = BigRational::from_integer(num_bigint::BigInt::from(-eps) * num_traits::pow(num_bigint::BigInt::from(p), (k / 2 - 1) as usize));
    let expected = f.truncate_end(up.end()).scale(&scale);
    CheckReport::compare(format!("U_{p} eigenvalue -({eps})·{p}^{}", k / 2 - 1), &expected, &up)
}

#[cfg(test)]
mod tests;
