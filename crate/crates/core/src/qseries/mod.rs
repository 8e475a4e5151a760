//! Truncated q-expansions `Σ c(n) q^{n/D}` over exponent denominators
//! `D ∈ {1, 8, 24}`.
//!
//! A series stores a window of coefficients on an arithmetic progression of
//! exponent numerators: `coeffs[i]` is the coefficient of
//! `q^{(valuation + stride·i)/D}`. Numerators off the progression are known
//! zeros, numerators below `valuation` are zero, and everything from
//! [`Series::end`] on is unknown. Eta quotients live on progressions of
//! step 24 (resp. 8), so the stride keeps those expansions dense.
//!
//! Precision is counted in units of `1/D`: `precision = stride · coeffs.len()`.
//! Every operation propagates the exact number of trusted terms.

mod json;
pub mod ntt;
mod ring;

use std::fmt;

use num_rational::BigRational;
use num_traits::Zero;

pub use json::SeriesJson;
pub use ring::{parse_rational, rational_to_string, CoeffRing, Rationals, Zmod};

use crate::arith::{ceil_div, floor_div, gcd, mod_inv, RealCharacter};
use crate::error::{invalid, Error, Result};

pub const DENOMINATORS: [u32; 3] = [1, 8, 24];

#[derive(Clone, PartialEq)]
pub struct Series<R: CoeffRing> {
    ring: R,
    denom: u32,
    valuation: i64,
    stride: u32,
    coeffs: Vec<R::Elem>,
}

/// Exact rational coefficients.
pub type FracSeries = Series<Rationals>;
/// Coefficients modulo a word-sized `ℓ^m`.
pub type ModSeries = Series<Zmod>;

impl<R: CoeffRing> fmt::Debug for Series<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Series")
            .field("modulus", &self.ring.modulus())
            .field("denom", &self.denom)
            .field("valuation", &self.valuation)
            .field("stride", &self.stride)
            .field("len", &self.coeffs.len())
            .field("head", &&self.coeffs[..self.coeffs.len().min(8)])
            .finish()
    }
}

fn check_denom(denom: u32) -> Result<()> {
    if DENOMINATORS.contains(&denom) {
        Ok(())
    } else {
        invalid(format!("exponent denominator {denom} not in {{1, 8, 24}}"))
    }
}

impl<R: CoeffRing> Series<R> {
    pub fn new(ring: R, denom: u32, valuation: i64, stride: u32, coeffs: Vec<R::Elem>) -> Result<Self> {
        check_denom(denom)?;
        if stride == 0 {
            return invalid("stride must be positive");
        }
        Ok(Series { ring, denom, valuation, stride, coeffs })
    }

    /// Integral-exponent series `Σ coeffs[n] q^n`.
    pub fn from_q_coeffs(ring: R, coeffs: Vec<R::Elem>) -> Self {
        Series { ring, denom: 1, valuation: 0, stride: 1, coeffs }
    }

    pub fn zero(ring: R, denom: u32, valuation: i64, stride: u32, len: usize) -> Self {
        let coeffs = vec![ring.zero(); len];
        Series { ring, denom, valuation, stride, coeffs }
    }

    /// The constant 1, known to `precision` terms of `q^{1/D}`.
    pub fn one(ring: R, denom: u32, precision: usize) -> Self {
        let mut s = Self::zero(ring, denom, 0, 1, precision);
        if precision > 0 {
            s.coeffs[0] = s.ring.one();
        }
        s
    }

    pub fn ring(&self) -> &R {
        &self.ring
    }
    pub fn denom(&self) -> u32 {
        self.denom
    }
    /// Numerator of the first stored exponent (the window start).
    pub fn valuation(&self) -> i64 {
        self.valuation
    }
    pub fn stride(&self) -> u32 {
        self.stride
    }
    pub fn coeffs(&self) -> &[R::Elem] {
        &self.coeffs
    }
    pub fn into_coeffs(self) -> Vec<R::Elem> {
        self.coeffs
    }
    /// Known terms, in units of `q^{1/D}`, counted from the valuation.
    pub fn precision(&self) -> usize {
        self.stride as usize * self.coeffs.len()
    }
    /// First exponent numerator whose coefficient is unknown.
    pub fn end(&self) -> i64 {
        self.valuation + self.precision() as i64
    }

    /// Coefficient of `q^{n/D}`, or `None` beyond the known window.
    pub fn coeff(&self, n: i64) -> Option<R::Elem> {
        if n >= self.end() {
            return None;
        }
        let off = n - self.valuation;
        if off < 0 || off % self.stride as i64 != 0 {
            return Some(self.ring.zero());
        }
        Some(self.coeffs[(off / self.stride as i64) as usize].clone())
    }

    /// Coefficient of `q^{n/D}`; panics beyond the known window.
    pub fn at(&self, n: i64) -> R::Elem {
        self.coeff(n).unwrap_or_else(|| panic!("coefficient at {n} beyond precision (end {})", self.end()))
    }

    /// `(numerator, coefficient)` for every stored nonzero coefficient.
    pub fn nonzero_terms(&self) -> impl Iterator<Item = (i64, &R::Elem)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !self.ring.is_zero(c))
            .map(|(i, c)| (self.valuation + self.stride as i64 * i as i64, c))
    }

    /// Numerator of the first nonzero coefficient.
    pub fn order(&self) -> Option<i64> {
        self.nonzero_terms().next().map(|(n, _)| n)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| self.ring.is_zero(c))
    }

    /// Re-expresses the series on the progression `valuation + stride·ℤ`,
    /// which must contain the current one.
    pub fn reframe(&self, valuation: i64, stride: u32) -> Result<Self> {
        let s = stride as i64;
        if !self.stride.is_multiple_of(stride) || valuation > self.valuation || (self.valuation - valuation) % s != 0 {
            return invalid(format!(
                "cannot reframe ({}, {}) onto ({valuation}, {stride})",
                self.valuation, self.stride
            ));
        }
        let len = ((self.end() - valuation) / s) as usize;
        let mut coeffs = vec![self.ring.zero(); len];
        let ratio = (self.stride / stride) as usize;
        let shift = ((self.valuation - valuation) / s) as usize;
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[shift + i * ratio] = c.clone();
        }
        Ok(Series { ring: self.ring.clone(), denom: self.denom, valuation, stride, coeffs })
    }

    /// Drops everything at or beyond numerator `end`.
    pub fn truncate_end(&self, end: i64) -> Self {
        let end = end.min(self.end());
        let len = ceil_div(end - self.valuation, self.stride as i64).max(0) as usize;
        let mut out = self.clone();
        out.coeffs.truncate(len);
        out
    }

    /// Keeps `precision` known terms (units of `1/D`) from the valuation.
    pub fn truncate(&self, precision: usize) -> Self {
        self.truncate_end(self.valuation + precision as i64)
    }

    /// Moves the window start past leading zero coefficients.
    pub fn trim_leading_zeros(&self) -> Self {
        let k = self.coeffs.iter().take_while(|c| self.ring.is_zero(c)).count();
        Series {
            ring: self.ring.clone(),
            denom: self.denom,
            valuation: self.valuation + self.stride as i64 * k as i64,
            stride: self.stride,
            coeffs: self.coeffs[k..].to_vec(),
        }
    }

    /// Coarsest progression through the observed nonzero coefficients. The
    /// result asserts zeros off that progression, so use it only when the
    /// support is known a priori.
    pub fn compact(&self) -> Self {
        let trimmed = self.trim_leading_zeros();
        let Some(first) = trimmed.order() else {
            return self.clone();
        };
        let mut g = 0i64;
        for (n, _) in trimmed.nonzero_terms() {
            g = gcd(g, n - first);
        }
        let end = self.end();
        if g == 0 {
            g = end - first;
        }
        let g = g as u32;
        // never claim zeros at or beyond the known end
        let len = ((end - first) / g as i64) as usize;
        let coeffs = (0..len).map(|i| trimmed.at(first + g as i64 * i as i64)).collect();
        Series { ring: self.ring.clone(), denom: self.denom, valuation: first, stride: g, coeffs }
    }

    /// Changes the exponent denominator: multiplying numerators (promotion) or
    /// dividing them, which requires every exponent to be representable.
    pub fn to_denom(&self, denom: u32) -> Result<Self> {
        check_denom(denom)?;
        if denom == self.denom {
            return Ok(self.clone());
        }
        if denom.is_multiple_of(self.denom) {
            let f = denom / self.denom;
            return Ok(Series {
                ring: self.ring.clone(),
                denom,
                valuation: self.valuation * f as i64,
                stride: self.stride * f,
                coeffs: self.coeffs.clone(),
            });
        }
        if !self.denom.is_multiple_of(denom) {
            return Err(Error::IncompatibleDenominators { left: self.denom, right: denom });
        }
        let f = (self.denom / denom) as i64;
        if self.valuation % f == 0 && self.stride as i64 % f == 0 {
            return Ok(Series {
                ring: self.ring.clone(),
                denom,
                valuation: self.valuation / f,
                stride: self.stride / f as u32,
                coeffs: self.coeffs.clone(),
            });
        }
        if let Some((bad, _)) = self.nonzero_terms().find(|(n, _)| n % f != 0) {
            return Err(Error::SupportViolation { numerator: bad, denom: self.denom });
        }
        let v = ceil_div(self.valuation, f);
        let end = floor_div(self.end() - 1, f) + 1;
        let coeffs = (v..end).map(|n| self.at(n * f)).collect();
        Ok(Series { ring: self.ring.clone(), denom, valuation: v, stride: 1, coeffs })
    }

    fn unify_denoms(&self, other: &Self) -> Result<(Self, Self)> {
        if self.ring != other.ring {
            let (l, r) = (self.ring.modulus().unwrap_or(0), other.ring.modulus().unwrap_or(0));
            return Err(Error::ModulusMismatch { left: l, right: r });
        }
        if self.denom == other.denom {
            return Ok((self.clone(), other.clone()));
        }
        // promotion only from D = 1; 8 and 24 never mix silently
        match (self.denom, other.denom) {
            (1, d) => Ok((self.to_denom(d)?, other.clone())),
            (d, 1) => Ok((self.clone(), other.to_denom(d)?)),
            (l, r) => Err(Error::IncompatibleDenominators { left: l, right: r }),
        }
    }

    fn zip_with(&self, other: &Self, f: impl Fn(&R, &R::Elem, &R::Elem) -> R::Elem) -> Result<Self> {
        let (a, b) = self.unify_denoms(other)?;
        let stride = gcd(gcd(a.stride as i64, b.stride as i64), a.valuation - b.valuation) as u32;
        let v = a.valuation.min(b.valuation);
        let end = a.end().min(b.end());
        let a = a.reframe(v, stride)?.truncate_end(end);
        let b = b.reframe(v, stride)?.truncate_end(end);
        let coeffs = a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| f(&a.ring, x, y)).collect();
        Ok(Series { ring: a.ring, denom: a.denom, valuation: v, stride, coeffs })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |r, x, y| r.add(x, y))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |r, x, y| r.sub(x, y))
    }

    pub fn neg(&self) -> Self {
        self.map_coeffs(|r, x| r.neg(x))
    }

    pub fn scale(&self, c: &R::Elem) -> Self {
        self.map_coeffs(|r, x| r.mul(c, x))
    }

    fn map_coeffs(&self, f: impl Fn(&R, &R::Elem) -> R::Elem) -> Self {
        Series {
            ring: self.ring.clone(),
            denom: self.denom,
            valuation: self.valuation,
            stride: self.stride,
            coeffs: self.coeffs.iter().map(|x| f(&self.ring, x)).collect(),
        }
    }

    /// Multiplies by `q^{k/D}`.
    pub fn shift(&self, k: i64) -> Self {
        let mut out = self.clone();
        out.valuation += k;
        out
    }

    /// Cauchy product. Valuations add; precision is the smaller of the two.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        let (a, b) = self.unify_denoms(other)?;
        let stride = gcd(a.stride as i64, b.stride as i64) as u32;
        let a = a.reframe(a.valuation, stride)?;
        let b = b.reframe(b.valuation, stride)?;
        let len = a.coeffs.len().min(b.coeffs.len());
        let coeffs = a.ring.convolve(&a.coeffs, &b.coeffs, len);
        Ok(Series { ring: a.ring, denom: a.denom, valuation: a.valuation + b.valuation, stride, coeffs })
    }

    pub fn pow(&self, e: u64) -> Result<Self> {
        let mut acc: Option<Self> = None;
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = Some(match acc {
                    None => base.clone(),
                    Some(a) => a.mul(&base)?,
                });
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base)?;
            }
        }
        Ok(acc.unwrap_or_else(|| {
            let mut one = Series::zero(self.ring.clone(), self.denom, 0, self.stride, self.coeffs.len());
            if !one.coeffs.is_empty() {
                one.coeffs[0] = self.ring.one();
            }
            one
        }))
    }

    /// Multiplicative inverse; the leading known coefficient must be a unit.
    pub fn invert(&self) -> Result<Self> {
        let t = self.trim_leading_zeros();
        if t.coeffs.is_empty() {
            return Err(Error::NonUnitLeading);
        }
        let coeffs = t.ring.invert_series(&t.coeffs)?;
        Ok(Series { ring: t.ring, denom: t.denom, valuation: -t.valuation, stride: t.stride, coeffs })
    }

    /// `Σ c(n) q^{n/D} ↦ Σ c(mn) q^{n/D}`.
    pub fn u_operator(&self, m: u64) -> Self {
        assert!(m > 0);
        let m = m as i64;
        let (v, s) = (self.valuation, self.stride as i64);
        let start = ceil_div(v, m);
        let new_end = floor_div(self.end() - 1, m) + 1;
        let g = gcd(m, s);
        if v.rem_euclid(g) != 0 {
            let len = (new_end - start).max(0) as usize;
            return Series::zero(self.ring.clone(), self.denom, start, 1, len);
        }
        let s2 = s / g;
        let residue = if s2 == 1 {
            0
        } else {
            let inv = mod_inv((m / g).rem_euclid(s2), s2).expect("m/g is a unit mod s/g");
            (v.div_euclid(g).rem_euclid(s2) * inv).rem_euclid(s2)
        };
        let first = start + (residue - start).rem_euclid(s2);
        let len = if new_end > first { ceil_div(new_end - first, s2) as usize } else { 0 };
        let coeffs = (0..len).map(|i| self.at(m * (first + s2 * i as i64))).collect();
        Series { ring: self.ring.clone(), denom: self.denom, valuation: first, stride: s2 as u32, coeffs }
    }

    /// `Σ c(n) q^{n/D} ↦ Σ c(n) q^{mn/D}`.
    pub fn v_operator(&self, m: u64) -> Self {
        assert!(m > 0);
        Series {
            ring: self.ring.clone(),
            denom: self.denom,
            valuation: self.valuation * m as i64,
            stride: self.stride * m as u32,
            coeffs: self.coeffs.clone(),
        }
    }

    /// Coefficient at `q^n` multiplied by `χ(n)`; integral exponents only.
    pub fn twist(&self, chi: &RealCharacter) -> Result<Self> {
        if self.denom != 1 {
            return invalid(format!(
                "twist needs integral exponents (denominator {}); use twist_numerators",
                self.denom
            ));
        }
        Ok(self.twist_numerators(chi))
    }

    /// Coefficient at `q^{n/D}` multiplied by `χ(n)`.
    pub fn twist_numerators(&self, chi: &RealCharacter) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| {
                let n = self.valuation + self.stride as i64 * i as i64;
                match chi.value(n) {
                    0 => self.ring.zero(),
                    1 => c.clone(),
                    _ => self.ring.neg(c),
                }
            })
            .collect();
        Series { coeffs, ..self.clone() }
    }

    /// The first numerator in the common known window where the two series differ.
    pub fn first_mismatch(&self, other: &Self) -> Result<Option<i64>> {
        let d = self.sub(other)?;
        Ok(d.order())
    }

    /// Coefficients at `q^{(v + stride·i)/D}` for every integer-spaced numerator in
    /// `[from, to)`, zeros included.
    pub fn window(&self, from: i64, to: i64, step: i64) -> Vec<R::Elem> {
        (from..to).step_by(step as usize).map(|n| self.at(n)).collect()
    }
}

impl FracSeries {
    /// Integral-exponent series from integer coefficients starting at `q^0`.
    pub fn from_ints(coeffs: &[i64]) -> Self {
        Series::from_q_coeffs(Rationals, coeffs.iter().map(|&c| Rationals.from_i64(c)).collect())
    }

    /// Reduction modulo `m`; every coefficient must be `m`-integral.
    pub fn reduce_mod(&self, modulus: u64) -> Result<ModSeries> {
        let ring = Zmod::new(modulus)?;
        let coeffs = self.coeffs.iter().map(|c| ring.reduce_rational(c)).collect::<Result<Vec<_>>>()?;
        Ok(Series { ring, denom: self.denom, valuation: self.valuation, stride: self.stride, coeffs })
    }

    pub fn is_integral(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_integer())
    }

    /// Exact rational multiple `c` with `self = c·other` on the common window,
    /// if one exists.
    pub fn proportionality(&self, other: &FracSeries) -> Result<Option<BigRational>> {
        let (a, b) = self.unify_denoms(other)?;
        let end = a.end().min(b.end());
        let lead = b.truncate_end(end).order();
        let Some(n0) = lead else {
            return Ok(if a.truncate_end(end).is_zero() { Some(BigRational::zero()) } else { None });
        };
        let c = a.at(n0) / b.at(n0);
        let diff = a.sub(&b.scale(&c))?.truncate_end(end);
        Ok(diff.is_zero().then_some(c))
    }
}

impl ModSeries {
    pub fn modulus(&self) -> u64 {
        self.ring.m()
    }

    /// Symmetric integer representatives of the stored residues.
    pub fn centered_coeffs(&self) -> Vec<i64> {
        self.coeffs.iter().map(|&c| self.ring.centered(c)).collect()
    }
}

/// `Π_{n≥1} (1 - q^n)` to `precision` terms, from the pentagonal number theorem.
pub fn euler_product<R: CoeffRing>(ring: R, precision: usize) -> Series<R> {
    let mut coeffs = vec![ring.zero(); precision];
    for (n, sign) in pentagonal_terms(precision) {
        coeffs[n] = ring.from_i64(sign);
    }
    Series::from_q_coeffs(ring, coeffs)
}

/// `(k(3k∓1)/2, (-1)^k)` for all generalized pentagonal numbers below `bound`.
pub fn pentagonal_terms(bound: usize) -> Vec<(usize, i64)> {
    let mut out = Vec::new();
    if bound > 0 {
        out.push((0, 1));
    }
    let mut k = 1usize;
    loop {
        let sign = if k.is_multiple_of(2) { 1 } else { -1 };
        let p1 = k * (3 * k - 1) / 2;
        if p1 >= bound {
            break;
        }
        out.push((p1, sign));
        let p2 = k * (3 * k + 1) / 2;
        if p2 < bound {
            out.push((p2, sign));
        }
        k += 1;
    }
    out
}

#[cfg(test)]
mod tests;
