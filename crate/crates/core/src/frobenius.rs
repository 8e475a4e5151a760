//! Congruences for five-colored generalized Frobenius partitions: the forms
//! `F_ℓ = η^{-5ℓ} T_ℓ(Δ^{5(ℓ²-1)/24} A₅)` modulo `ℓ`, the explicit
//! `F̃₁₃`, recovery of the level 6 newform modulo 13 from its lift, and scans
//! of the resulting quadratic congruences.

use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::arith::{is_prime, kronecker, primes_up_to, RealCharacter};
use crate::error::{invalid, Error, Result};
use crate::forms::{a5_closed_form, cphi_series_mod, delta_power_mod, EtaQuotient};
use crate::hecke::HalfIntegralMeta;
use crate::lift::shimura_lift;
use crate::qseries::{CoeffRing, FracSeries, ModSeries, Rationals, Series, Zmod};

/// The three eta quotients of `F̃₁₃` with their coefficients.
pub const TILDE_F13_TERMS: [(i64, &str); 3] = [(6, "1^12 5^-1"), (7, "5^5 1^6"), (9, "5^11")];

/// `(λ, N, ψ, r) = (5, 5, (·/5), 7)`.
pub fn tilde_f13_meta() -> HalfIntegralMeta {
    let psi = RealCharacter::quadratic(5).expect("5 is squarefree");
    HalfIntegralMeta::new(5, 5, psi, 7).expect("valid meta")
}

/// `F̃₁₃ = 6η¹²(z)/η(5z) + 7η⁵(5z)η⁶(z) + 9η¹¹(5z)` to `terms` steps of `q`.
pub fn build_tilde_f13(terms: usize) -> Result<FracSeries> {
    let mut acc: Option<FracSeries> = None;
    for (c, spec) in TILDE_F13_TERMS {
        let s = EtaQuotient::parse(spec)?.expand(terms).scale(&Rationals.from_i64(c));
        acc = Some(match acc {
            None => s,
            Some(a) => a.add(&s)?,
        });
    }
    Ok(acc.expect("three terms"))
}

/// `F̃₁₃` modulo `modulus`.
pub fn build_tilde_f13_mod(terms: usize, modulus: u64) -> Result<ModSeries> {
    let ring = Zmod::new(modulus)?;
    let mut acc: Option<ModSeries> = None;
    for (c, spec) in TILDE_F13_TERMS {
        let s = EtaQuotient::parse(spec)?.expand_mod(terms, modulus)?.scale(&ring.from_i64(c));
        acc = Some(match acc {
            None => s,
            Some(a) => a.add(&s)?,
        });
    }
    Ok(acc.expect("three terms"))
}

/// `5(ℓ²-1)/24`, the power of `Δ` in `F_ℓ`.
pub fn delta_exponent(ell: u64) -> u64 {
    5 * (ell * ell - 1) / 24
}

fn check_ell(ell: u64) -> Result<()> {
    if ell < 7 || !is_prime(ell) {
        return invalid(format!("ℓ must be a prime ≥ 7, got {ell}"));
    }
    Ok(())
}

/// `F_ℓ mod ℓ` to `terms` steps of `q`. Modulo `ℓ` the Hecke operator `T_ℓ`
/// on weight `k ≥ 2` reduces to `U_ℓ`, so the big weight never enters.
pub fn build_fl(ell: u64, terms: usize) -> Result<ModSeries> {
    check_ell(ell)?;
    let e = delta_exponent(ell);
    // U_ℓ output starts at ⌈e/ℓ⌉ and must reach ⌈e/ℓ⌉ + terms
    let first = e.div_ceil(ell) as usize;
    let need = ell as usize * (first + terms) + 1;
    let delta = delta_power_mod(e, ell, need)?;
    let a5 = a5_closed_form()?.series_mod(need, ell)?;
    let u = delta.mul(&a5)?.u_operator(ell);
    let eta = EtaQuotient::eta_power(-5 * ell as i64).expand_mod(terms + first, ell)?;
    let out = u.to_denom(24)?.mul(&eta)?;
    Ok(out.truncate(24 * terms))
}

/// Coefficientwise congruence check with per-coefficient bookkeeping.
#[derive(Clone, Debug, Serialize)]
pub struct CongruenceCheck {
    pub name: String,
    pub modulus: u64,
    pub checked: usize,
    /// `(exponent numerator, left residue, right residue)`.
    pub mismatches: Vec<(i64, u64, u64)>,
}

impl CongruenceCheck {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// `F_ℓ ≡ Σ cφ₅((ℓn+5)/24) q^{n/24} (mod ℓ)` for every numerator in the
/// known window of `F_ℓ`.
pub fn flcong_crosscheck(ell: u64, terms: usize) -> Result<CongruenceCheck> {
    let fl = build_fl(ell, terms)?;
    let l = ell as i64;
    let args_end = (l * fl.end() + 5) / 24 + 1;
    let cphi = cphi_series_mod(5, args_end as usize, ell)?;
    let mut mismatches = Vec::new();
    let mut checked = 0;
    let residue = (-5 * l).rem_euclid(24);
    let start = fl.valuation() - (fl.valuation() - residue).rem_euclid(24);
    for n in (start.min(0)..fl.end()).filter(|n| n.rem_euclid(24) == residue) {
        let lhs = fl.coeff(n).unwrap_or(0);
        let arg = (l * n + 5) / 24;
        let rhs = if arg < 0 { 0 } else { cphi.at(arg) };
        checked += 1;
        if lhs != rhs {
            mismatches.push((n, lhs, rhs));
        }
    }
    Ok(CongruenceCheck { name: format!("F_{ell} vs cφ₅(({ell}n+5)/24)"), modulus: ell, checked, mismatches })
}

/// `F_ℓ ≡ 0` (`ℓ = 7, 11`) or `F₁₃ ≡ F̃₁₃` (mod 13), on `terms` steps of `q`.
pub fn fl_identity(ell: u64, terms: usize) -> Result<CongruenceCheck> {
    let fl = build_fl(ell, terms)?;
    let target = if ell == 13 {
        build_tilde_f13_mod(terms + 1, 13)?
    } else {
        Series::zero(*fl.ring(), 24, fl.valuation(), fl.stride(), fl.coeffs().len())
    };
    let end = fl.end().min(target.end());
    let diff = fl.sub(&target)?.truncate_end(end);
    let mismatches = diff
        .nonzero_terms()
        .map(|(n, _)| (n, fl.coeff(n).unwrap_or(0), target.coeff(n).unwrap_or(0)))
        .collect();
    let name = if ell == 13 { "F_13 ≡ F̃_13".to_string() } else { format!("F_{ell} ≡ 0") };
    Ok(CongruenceCheck { name, modulus: ell, checked: ((end - fl.valuation()) / 24) as usize, mismatches })
}

/// `𝒮₇(F̃₁₃) mod 13` with `terms` coefficients `b(0..terms)`.
pub fn lift_tilde_f13_mod13(terms: usize) -> Result<ModSeries> {
    let t = 7u64;
    let need = (t as usize * terms * terms) / 24 + 2;
    let f = build_tilde_f13_mod(need, 13)?;
    let lift = shimura_lift(&tilde_f13_meta(), &f, t)?.coeffs;
    if lift.coeffs().len() < terms {
        return Err(Error::PrecisionTooShort { needed: terms as i64, available: lift.coeffs().len() as i64 });
    }
    Ok(lift.truncate(terms))
}

/// `g₆ mod 13` from `𝒮₇(F̃₁₃) ≡ 6g₆ + 4g₆|V₅`: `c(n) = 6⁻¹(b(n) - 4c(n/5))`.
pub fn recover_g6_mod13(terms: usize) -> Result<ModSeries> {
    let b = lift_tilde_f13_mod13(terms)?;
    Ok(recover_from_lift(&b))
}

/// The recursion behind [`recover_g6_mod13`] for a given lift.
pub fn recover_from_lift(b: &ModSeries) -> ModSeries {
    let ring = *b.ring();
    let inv6 = ring.inv(&6).expect("6 is a unit mod 13");
    let mut c = vec![0u64; b.coeffs().len()];
    for n in 1..c.len() {
        let mut x = b.at(n as i64);
        if n % 5 == 0 {
            x = ring.sub(&x, &ring.mul(&4, &c[n / 5]));
        }
        c[n] = ring.mul(&inv6, &x);
    }
    Series::from_q_coeffs(ring, c)
}

/// `ε_Q = β_Q (-5/Q)` when `a_Q ≡ β_Q Q⁴ (mod 13)`; `None` when no sign fits.
pub fn classify_q(q: u64, g6: &ModSeries) -> Result<Option<i32>> {
    if q <= 3 || q == 5 || q == 13 || !is_prime(q) {
        return invalid(format!("Q = {q} must be a prime > 3 other than 5 and 13"));
    }
    let a = g6
        .coeff(q as i64)
        .ok_or(Error::PrecisionTooShort { needed: q as i64, available: g6.end() })?;
    let ring = *g6.ring();
    let q4 = ring.int_pow(q as i64, 4);
    let beta = if a == q4 {
        1
    } else if a == ring.neg(&q4) {
        -1
    } else {
        return Ok(None);
    };
    Ok(Some(beta * kronecker(-5, q as i64)))
}

/// Primes `3 < Q < bound`, `Q ≠ 5, 13`, split by `ε_Q`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QTable {
    pub plus: Vec<u64>,
    pub minus: Vec<u64>,
    /// Primes where `a_Q ≢ ±Q⁴ (mod 13)`.
    pub none: Vec<u64>,
}

pub fn classify_table(bound: u64) -> Result<QTable> {
    let g6 = recover_g6_mod13(bound as usize)?;
    let mut table = QTable { plus: vec![], minus: vec![], none: vec![] };
    for q in primes_up_to(bound - 1) {
        if q <= 3 || q == 5 || q == 13 {
            continue;
        }
        match classify_q(q, &g6)? {
            Some(1) => table.plus.push(q),
            Some(_) => table.minus.push(q),
            None => table.none.push(q),
        }
    }
    Ok(table)
}

#[derive(Clone, Debug, Serialize)]
pub struct CongruenceReport {
    pub ell: u64,
    #[serde(rename = "Q")]
    pub q: u64,
    pub eps_q: i32,
    pub n_checked: usize,
    /// `(n, argument, residue)`.
    pub violations: Vec<(u64, u64, u64)>,
    #[serde(skip)]
    pub elapsed_ms: f64,
}

impl CongruenceReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// `cφ₅ mod ℓ` with arguments `0..len`.
pub fn cphi5_table(ell: u64, len: usize) -> Result<ModSeries> {
    cphi_series_mod(5, len, ell)
}

/// Largest `n` whose argument `(ℓQ²n+5)/24` stays below `arg_bound`.
pub fn n_max_for(ell: u64, q: u64, arg_bound: u64) -> u64 {
    (24 * arg_bound).saturating_sub(5) / (ell * q * q)
}

/// `cφ₅((ℓQ²n+5)/24) ≡ 0 (mod ℓ)` for all `n ≤ n_max` with `(n/Q) = ε_Q`
/// and `24 | ℓQ²n + 5`, against a precomputed table.
pub fn scan_congruence_with(table: &ModSeries, q: u64, eps_q: i32, n_max: u64) -> Result<CongruenceReport> {
    let started = Instant::now();
    let ell = table.modulus();
    if eps_q.abs() != 1 {
        return invalid(format!("ε_Q must be ±1, got {eps_q}"));
    }
    let step = ell as u128 * q as u128 * q as u128;
    let top = (step * n_max as u128 + 5) / 24;
    if top >= table.end() as u128 {
        return Err(Error::PrecisionTooShort { needed: top as i64, available: table.end() });
    }
    let candidates: Vec<u64> = (1..=n_max)
        .filter(|&n| (step * n as u128 + 5).is_multiple_of(24) && kronecker(n as i64, q as i64) == eps_q)
        .collect();
    let violations: Vec<(u64, u64, u64)> = candidates
        .par_iter()
        .filter_map(|&n| {
            let arg = ((step * n as u128 + 5) / 24) as u64;
            let v = table.at(arg as i64);
            (v != 0).then_some((n, arg, v))
        })
        .collect();
    Ok(CongruenceReport {
        ell,
        q,
        eps_q,
        n_checked: candidates.len(),
        violations,
        elapsed_ms: started.elapsed().as_secs_f64() * 1e3,
    })
}

/// Largest cφ₅ table a single scan will build.
pub const MAX_SCAN_TERMS: u128 = 1 << 25;

/// [`scan_congruence_with`] after building `cφ₅ mod ℓ` to the needed length.
pub fn scan_congruence(ell: u64, q: u64, eps_q: i32, n_max: u64) -> Result<CongruenceReport> {
    let len = (ell as u128 * q as u128 * q as u128 * n_max as u128 + 5) / 24 + 1;
    if len > MAX_SCAN_TERMS {
        return invalid(format!("n_max = {n_max} needs {len} terms of cφ₅, above the limit {MAX_SCAN_TERMS}"));
    }
    let table = cphi5_table(ell, len as usize)?;
    scan_congruence_with(&table, q, eps_q, n_max)
}

/// `cφ₅(a·n + b) ≡ 0 (mod ℓ)` for `0 ≤ n ≤ n_max`.
pub fn progression_scan(table: &ModSeries, a: u64, b: u64, n_max: u64) -> Result<CongruenceCheck> {
    let top = a * n_max + b;
    if top as i64 >= table.end() {
        return Err(Error::PrecisionTooShort { needed: top as i64, available: table.end() });
    }
    let mismatches = (0..=n_max)
        .filter_map(|n| {
            let arg = (a * n + b) as i64;
            let v = table.at(arg);
            (v != 0).then_some((arg, v, 0))
        })
        .collect();
    Ok(CongruenceCheck {
        name: format!("cφ₅({a}n+{b}) ≡ 0"),
        modulus: table.modulus(),
        checked: n_max as usize + 1,
        mismatches,
    })
}

/// `cφ₅(7n+4) ≡ 0 (mod 7)` or `cφ₅(11n+8) ≡ 0 (mod 11)` for `n ≤ n_max`.
pub fn ramanujan_scan(ell: u64, n_max: u64) -> Result<CongruenceCheck> {
    let b = match ell {
        7 => 4,
        11 => 8,
        _ => return invalid(format!("no Ramanujan-type progression known for ℓ = {ell}")),
    };
    let table = cphi5_table(ell, (ell * n_max + b + 1) as usize)?;
    progression_scan(&table, ell, b, n_max)
}

/// The reformulation `cφ₅(13·97³n + 1014212) ≡ 0 (mod 13)`.
#[derive(Clone, Debug, Serialize)]
pub struct CongexReport {
    /// The class `n₀ mod 24·97` that produces the progression.
    pub n0: u64,
    pub offset: u64,
    pub legendre: i32,
    /// `(n, argument, residue)` for every `n` whose argument is tabulated.
    pub instances: Vec<(u64, u64, u64)>,
    pub passed: bool,
}

/// Re-derives the progression from the `Q = 97` congruence and checks every
/// instance within reach of `table` (which must be `cφ₅ mod 13`).
pub fn congex_check(table: &ModSeries) -> Result<CongexReport> {
    if table.modulus() != 13 {
        return invalid("the table must be cφ₅ mod 13");
    }
    let (ell, q) = (13u64, 97u64);
    let offset = 1_014_212u64;
    let base = ell * q * q;
    let num = 24 * offset - 5;
    if !num.is_multiple_of(base) {
        return Err(Error::InconsistentSystem(format!("{offset} is not of the form (13·97²m+5)/24")));
    }
    let n0 = num / base;
    let legendre = kronecker(n0 as i64, q as i64);
    // (13·97²(24·97n + n₀) + 5)/24 = 13·97³n + offset
    let step = ell * q * q * q;
    let mut instances = Vec::new();
    let mut n = 0u64;
    while ((step * n + offset) as i64) < table.end() {
        let arg = step * n + offset;
        instances.push((n, arg, table.at(arg as i64)));
        n += 1;
    }
    let passed = legendre == -1 && !instances.is_empty() && instances.iter().all(|&(_, _, v)| v == 0);
    Ok(CongexReport { n0, offset, legendre, instances, passed })
}

#[cfg(test)]
mod tests;
