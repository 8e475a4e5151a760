//! The Shimura-type lifts `𝒮_t` on eta-multiplier forms, Shimura's classical
//! `Sh_t` on theta-multiplier forms, and checks tying them to each other and
//! to the Hecke operators.

use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::arith::{is_squarefree, kronecker, EpsilonPair, RealCharacter};
use crate::error::{invalid, Error, Result};
use crate::hecke::{al_eigen_check, t_p2_eta, t_p_integral, CheckReport, HalfIntegralMeta};
use crate::qseries::{CoeffRing, FracSeries, Series};

#[derive(Clone, Debug)]
pub struct LiftResult<R: CoeffRing> {
    /// `Σ b(n) qⁿ` for `0 ≤ n <` precision, with `b(0) = 0`.
    pub coeffs: Series<R>,
    pub target_weight: i64,
    pub target_level: u64,
    pub eps: EpsilonPair,
    pub source_meta: HalfIntegralMeta,
    pub t: u64,
    /// `t` is outside the class `r mod 24` (resp. `r/3 mod 8`), so the lift vanishes.
    pub class_mismatch: bool,
}

/// Largest `n` with `a(t n²)` known, i.e. `t n² < end`.
fn lift_bound(end: i64, t: u64) -> usize {
    if end <= 0 {
        return 0;
    }
    let limit = (end - 1) / t as i64;
    let mut n = (limit as f64).sqrt() as i64;
    while n * n > limit {
        n -= 1;
    }
    while (n + 1) * (n + 1) <= limit {
        n += 1;
    }
    n.max(0) as usize
}

// Σ_{jk=n} w(j)·A(k) for 1 ≤ n ≤ len-1, where `weight(j)` is a sign times j^{λ-1}.
fn dirichlet_convolve<R: CoeffRing>(
    ring: &R,
    lambda: i64,
    sign: impl Fn(i64) -> i32,
    a: &[R::Elem],
) -> Vec<R::Elem> {
    let len = a.len();
    let mut out = vec![ring.zero(); len];
    let nonzero: Vec<usize> = (1..len).filter(|&k| !ring.is_zero(&a[k])).collect();
    for j in 1..len {
        let s = sign(j as i64);
        if s == 0 {
            continue;
        }
        let mut w = ring.int_pow(j as i64, (lambda - 1) as u32);
        if s < 0 {
            w = ring.neg(&w);
        }
        for &k in &nonzero {
            let n = j * k;
            if n >= len {
                break;
            }
            out[n] = ring.add(&out[n], &ring.mul(&w, &a[k]));
        }
    }
    out
}

fn check_t(t: u64) -> Result<()> {
    if t == 0 || !is_squarefree(t) {
        return invalid(format!("t = {t} must be a squarefree positive integer"));
    }
    Ok(())
}

/// `𝒮_t(F)`: `Σ b(n)n^{-s} = L(s-λ+1, ψ(·/t)) Σ χ(n) a(tn²) n^{-s}` with
/// `χ = (12/·)` when `(r, 6) = 1` and `(-4/·)` when `(r, 6) = 3`; the `a`
/// are indexed by exponent numerators over 24 (resp. 8).
pub fn shimura_lift<R: CoeffRing>(meta: &HalfIntegralMeta, f: &Series<R>, t: u64) -> Result<LiftResult<R>> {
    check_t(t)?;
    let f = meta.normalize(f)?;
    let len = lift_bound(f.end(), t) + 1;
    let ring = f.ring().clone();
    let d = meta.denom() as i64;
    let class_mismatch = (t as i64).rem_euclid(d) != meta.residue();
    let chi = meta.chi();
    let ti = t as i64;
    let a: Vec<R::Elem> = (0..len as i64)
        .map(|k| {
            if k == 0 {
                return ring.zero();
            }
            match chi.value(k) {
                0 => ring.zero(),
                1 => f.at(ti * k * k),
                _ => ring.neg(&f.at(ti * k * k)),
            }
        })
        .collect();
    let psi = meta.psi;
    let b = dirichlet_convolve(&ring, meta.lambda, |j| psi.value(j) * kronecker(j, ti), &a);
    Ok(LiftResult {
        coeffs: Series::from_q_coeffs(ring, b),
        target_weight: meta.target_weight(),
        target_level: meta.target_level(),
        eps: meta.eps()?,
        source_meta: *meta,
        t,
        class_mismatch,
    })
}

/// Shimura's `Sh_t(G)`: `Σ c(n)n^{-s} = L(s-λ+1, ψ'(-1/·)^λ(t/·)) Σ a(tn²) n^{-s}`.
pub fn classical_shimura_lift<R: CoeffRing>(
    g: &Series<R>,
    t: u64,
    lambda: i64,
    psi: &RealCharacter,
) -> Result<Series<R>> {
    check_t(t)?;
    if g.denom() != 1 {
        return invalid("Sh_t needs integral exponents");
    }
    if lambda < 1 {
        return invalid(format!("λ must be positive, got {lambda}"));
    }
    let len = lift_bound(g.end(), t) + 1;
    let ring = g.ring().clone();
    let ti = t as i64;
    let a: Vec<R::Elem> =
        (0..len as i64).map(|k| if k == 0 { ring.zero() } else { g.at(ti * k * k) }).collect();
    let minus = if lambda % 2 == 0 { 1 } else { -1 };
    let c = dirichlet_convolve(
        &ring,
        lambda,
        |j| {
            let m = if minus == 1 { 1 } else { kronecker(-1, j) };
            psi.value(j) * m * kronecker(ti, j)
        },
        &a,
    );
    Ok(Series::from_q_coeffs(ring, c))
}

/// `max_n |c(n) - χ(n)b(n)|` for `n < terms`, where `c` are the coefficients
/// of `Sh_t(F|V_D)` and `b` those of `𝒮_t(F)`.
pub fn compare_lifts(meta: &HalfIntegralMeta, f: &FracSeries, t: u64, terms: usize) -> Result<BigRational> {
    let b = shimura_lift(meta, f, t)?.coeffs;
    let g = meta.theta_image(f)?;
    let c = classical_shimura_lift(&g, t, meta.lambda, &meta.theta_psi()?)?;
    let avail = b.coeffs().len().min(c.coeffs().len());
    if avail < terms {
        return Err(Error::PrecisionTooShort { needed: terms as i64, available: avail as i64 });
    }
    let twisted = b.twist(&meta.chi())?;
    let mut worst = BigRational::zero();
    for n in 0..terms as i64 {
        let d = (c.at(n) - twisted.at(n)).abs();
        if d > worst {
            worst = d;
        }
    }
    Ok(worst)
}

/// `𝒮_t(T_{p²}F) = χ(p) T_p 𝒮_t(F)` with `T_p` of weight `2λ` and character `ψ²`.
pub fn equivariance_check(meta: &HalfIntegralMeta, f: &FracSeries, t: u64, p: u64) -> Result<CheckReport> {
    let lhs = shimura_lift(meta, &t_p2_eta(meta, f, p)?, t)?.coeffs;
    let lifted = shimura_lift(meta, f, t)?.coeffs;
    let char2 = meta.psi.square().lift_to(meta.target_level())?;
    let tp = t_p_integral(&lifted, p, meta.target_weight() as u32, &char2)?;
    let sign = meta.chi().value(p as i64);
    let rhs = tp.scale(&BigRational::from_integer(sign.into()));
    CheckReport::compare(format!("S_{t}(T_{p}²F) = χ({p}) T_{p} S_{t}(F)"), &rhs, &lhs)
}

/// `T_{p²}F = χ(p)a(p)F` for each prime, with `a` the coefficients of the
/// newform spanning the image of the lift.
pub fn eigen_relation_check(
    meta: &HalfIntegralMeta,
    f: &FracSeries,
    newform: &FracSeries,
    primes: &[u64],
) -> Result<Vec<CheckReport>> {
    let f = meta.normalize(f)?;
    primes
        .iter()
        .map(|&p| {
            let ap = newform
                .coeff(p as i64)
                .ok_or(Error::PrecisionTooShort { needed: p as i64, available: newform.end() })?;
            let lam = ap * BigRational::from_integer(meta.chi().value(p as i64).into());
            let t = t_p2_eta(meta, &f, p)?;
            CheckReport::compare(format!("T_{p}² F = {lam}·F"), &f.truncate_end(t.end()).scale(&lam), &t)
        })
        .collect()
}

/// The `U_2` (and `U_3` when `(r, 6) = 1`) eigen-relations forced on a lift
/// by its Atkin-Lehner signs.
pub fn newness_checks(lift: &LiftResult<crate::qseries::Rationals>) -> Result<Vec<CheckReport>> {
    let k = lift.target_weight as u32;
    let mut out = vec![al_eigen_check(&lift.coeffs, 2, k, lift.eps.eps2)?];
    if let Some(e3) = lift.eps.eps3 {
        out.push(al_eigen_check(&lift.coeffs, 3, k, e3)?);
    }
    Ok(out)
}

/// `b(mn) = b(m)b(n)` for coprime `m, n` with `mn` in range, after scaling by `1/b(1)`.
pub fn multiplicativity_check(f: &FracSeries) -> Result<CheckReport> {
    let len = f.end();
    let b1 = f.at(1);
    if b1.is_zero() {
        return invalid("b(1) = 0; cannot normalize");
    }
    let norm = f.scale(&b1.recip());
    for m in 2..len {
        for n in m + 1..len {
            if m * n >= len {
                break;
            }
            if crate::arith::gcd(m, n) != 1 {
                continue;
            }
            let lhs = norm.at(m * n);
            let rhs = norm.at(m) * norm.at(n);
            if lhs != rhs {
                return Ok(CheckReport {
                    name: "multiplicativity".into(),
                    passed: false,
                    compared: (m * n) as usize,
                    first_violation: Some((m * n, rhs.to_string(), lhs.to_string())),
                });
            }
        }
    }
    Ok(CheckReport { name: "multiplicativity".into(), passed: true, compared: len as usize, first_violation: None })
}

/// Which class of `t` gives a nonzero lift.
pub fn admissible_t(meta: &HalfIntegralMeta, t: u64) -> bool {
    is_squarefree(t) && (t as i64).rem_euclid(meta.denom() as i64) == meta.residue()
}


#[cfg(test)]
mod tests;
