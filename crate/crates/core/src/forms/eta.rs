use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use crate::arith::is_prime;
use crate::error::{invalid, Result};
use crate::qseries::{euler_product, pentagonal_terms, CoeffRing, FracSeries, ModSeries, Rationals, Series, Zmod};

/// A formal eta quotient `Π η(δz)^{r_δ}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct EtaQuotient {
    factors: Vec<(u64, i64)>,
}

impl EtaQuotient {
    /// Merges repeated `δ` and drops zero exponents.
    pub fn new(factors: &[(u64, i64)]) -> Result<Self> {
        let mut merged: BTreeMap<u64, i64> = BTreeMap::new();
        for &(delta, r) in factors {
            if delta == 0 {
                return invalid("eta quotient factor with δ = 0");
            }
            *merged.entry(delta).or_default() += r;
        }
        let factors = merged.into_iter().filter(|&(_, r)| r != 0).collect();
        Ok(EtaQuotient { factors })
    }

    /// `η(z)^r`.
    pub fn eta_power(r: i64) -> Self {
        EtaQuotient::new(&[(1, r)]).expect("δ = 1")
    }

    /// Parses whitespace-separated `δ^r` tokens, e.g. `"1^2 2^2 3^2 6^2"` or
    /// `"1^12 5^-1"`. A bare `δ` means exponent 1.
    pub fn parse(s: &str) -> Result<Self> {
        let mut factors = Vec::new();
        for tok in s.split_whitespace() {
            let (d, r) = tok.split_once('^').unwrap_or((tok, "1"));
            let d: u64 = d.parse().map_err(|_| crate::Error::InvalidInput(format!("bad factor {tok:?}")))?;
            let r: i64 = r.parse().map_err(|_| crate::Error::InvalidInput(format!("bad exponent in {tok:?}")))?;
            factors.push((d, r));
        }
        if factors.is_empty() {
            return invalid("empty eta quotient");
        }
        Self::new(&factors)
    }

    pub fn factors(&self) -> &[(u64, i64)] {
        &self.factors
    }

    /// `2k` for weight `k = Σ r_δ / 2`.
    pub fn twice_weight(&self) -> i64 {
        self.factors.iter().map(|&(_, r)| r).sum()
    }

    /// `Σ δ r_δ`: the leading exponent in units of `1/24`.
    pub fn order24(&self) -> i64 {
        self.factors.iter().map(|&(d, r)| d as i64 * r).sum()
    }

    /// Smallest of `{1, 8, 24}` over which the expansion has integral exponents.
    pub fn natural_denom(&self) -> u32 {
        match self.order24().rem_euclid(24) {
            0 => 1,
            x if x % 3 == 0 => 8,
            _ => 24,
        }
    }

    pub fn product(&self, other: &EtaQuotient) -> EtaQuotient {
        let all: Vec<(u64, i64)> = self.factors.iter().chain(&other.factors).copied().collect();
        EtaQuotient::new(&all).expect("valid factors")
    }

    /// First `terms` coefficients of `Π E(q^δ)^{r_δ}` with `E = Π(1 - q^n)`.
    pub fn product_coeffs(&self, terms: usize) -> Vec<BigInt> {
        match eta_product::<i128>(&self.factors, terms) {
            Some(v) => v.into_iter().map(BigInt::from).collect(),
            None => eta_product::<BigInt>(&self.factors, terms).expect("big integers never overflow"),
        }
    }

    /// Exact expansion with `terms` known coefficients on its natural
    /// progression, i.e. through `q^{order/24 + terms - 1}`.
    pub fn expand(&self, terms: usize) -> FracSeries {
        let coeffs = self.product_coeffs(terms).into_iter().map(BigRational::from_integer).collect();
        self.frame(Rationals, coeffs)
    }

    /// Expansion reduced modulo `modulus`.
    pub fn expand_mod(&self, terms: usize, modulus: u64) -> Result<ModSeries> {
        let ring = Zmod::new(modulus)?;
        let mut acc = Series::one(ring, 1, terms);
        for &(delta, r) in &self.factors {
            let len = (terms - 1) / delta as usize + 1;
            let f = euler_power_mod(ring, len, r)?.v_operator(delta).truncate(terms);
            acc = acc.mul(&f)?;
        }
        let coeffs = acc.into_coeffs();
        Ok(self.frame(ring, coeffs))
    }

    fn frame<R: CoeffRing>(&self, ring: R, coeffs: Vec<R::Elem>) -> Series<R> {
        let s = Series::new(ring, 24, self.order24(), 24, coeffs).expect("valid frame");
        s.to_denom(self.natural_denom()).expect("exponents lie on the natural lattice")
    }
}

impl fmt::Display for EtaQuotient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.factors.iter().map(|(d, r)| format!("{d}^{r}")).collect();
        f.write_str(&parts.join(" "))
    }
}

/// Integer arithmetic that may refuse to overflow.
trait CheckedInt: Clone + Sized {
    fn from_i64(x: i64) -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, o: &Self) -> Option<Self>;
    fn sub(&self, o: &Self) -> Option<Self>;
    fn mul_small(&self, k: i64) -> Option<Self>;
    fn div_exact(&self, k: i64) -> Self;
}

impl CheckedInt for i128 {
    fn from_i64(x: i64) -> Self {
        x as i128
    }
    fn is_zero(&self) -> bool {
        *self == 0
    }
    fn add(&self, o: &Self) -> Option<Self> {
        self.checked_add(*o)
    }
    fn sub(&self, o: &Self) -> Option<Self> {
        self.checked_sub(*o)
    }
    fn mul_small(&self, k: i64) -> Option<Self> {
        self.checked_mul(k as i128)
    }
    fn div_exact(&self, k: i64) -> Self {
        debug_assert_eq!(self % k as i128, 0);
        self / k as i128
    }
}

impl CheckedInt for BigInt {
    fn from_i64(x: i64) -> Self {
        BigInt::from(x)
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, o: &Self) -> Option<Self> {
        Some(self + o)
    }
    fn sub(&self, o: &Self) -> Option<Self> {
        Some(self - o)
    }
    fn mul_small(&self, k: i64) -> Option<Self> {
        Some(self * k)
    }
    fn div_exact(&self, k: i64) -> Self {
        self / k
    }
}

/// `E(q)^α` to `terms` coefficients by the power recurrence
/// `n g_n = Σ_k ((α+1)k - n) e_k g_{n-k}` over the sparse pentagonal `e_k`.
fn euler_power_int<T: CheckedInt>(terms: usize, alpha: i64) -> Option<Vec<T>> {
    let e = pentagonal_terms(terms);
    let mut g: Vec<T> = Vec::with_capacity(terms);
    if terms == 0 {
        return Some(g);
    }
    g.push(T::from_i64(1));
    for n in 1..terms {
        let mut acc = T::from_i64(0);
        for &(k, sign) in e.iter().skip(1) {
            if k > n {
                break;
            }
            let w = ((alpha + 1) * k as i64 - n as i64) * sign;
            if w != 0 && !g[n - k].is_zero() {
                acc = acc.add(&g[n - k].mul_small(w)?)?;
            }
        }
        g.push(acc.div_exact(n as i64));
    }
    Some(g)
}

/// `a ← a·E(q^δ)` in place, truncated.
fn mul_euler<T: CheckedInt>(a: &mut [T], delta: usize, e: &[(usize, i64)]) -> Option<()> {
    for n in (0..a.len()).rev() {
        let mut acc = a[n].clone();
        for &(k, sign) in e.iter().skip(1) {
            let shift = k * delta;
            if shift > n {
                break;
            }
            let term = &a[n - shift];
            if !term.is_zero() {
                acc = if sign > 0 { acc.add(term)? } else { acc.sub(term)? };
            }
        }
        a[n] = acc;
    }
    Some(())
}

/// `a ← a/E(q^δ)` in place, truncated.
fn div_euler<T: CheckedInt>(a: &mut [T], delta: usize, e: &[(usize, i64)]) -> Option<()> {
    for n in 0..a.len() {
        let mut acc = a[n].clone();
        for &(k, sign) in e.iter().skip(1) {
            let shift = k * delta;
            if shift > n {
                break;
            }
            let term = &a[n - shift];
            if !term.is_zero() {
                acc = if sign > 0 { acc.sub(term)? } else { acc.add(term)? };
            }
        }
        a[n] = acc;
    }
    Some(())
}

/// The factor with the largest `|r|` is expanded by the power recurrence; the
/// others are applied one sparse factor `E(q^δ)^{±1}` at a time.
fn eta_product<T: CheckedInt>(factors: &[(u64, i64)], terms: usize) -> Option<Vec<T>> {
    let mut out = vec![T::from_i64(0); terms];
    if terms == 0 {
        return Some(out);
    }
    let Some(&(bd, br)) = factors.iter().max_by_key(|(d, r)| (r.unsigned_abs(), std::cmp::Reverse(*d))) else {
        out[0] = T::from_i64(1);
        return Some(out);
    };
    let base = euler_power_int::<T>((terms - 1) / bd as usize + 1, br)?;
    for (i, c) in base.into_iter().enumerate() {
        out[i * bd as usize] = c;
    }
    let e = pentagonal_terms(terms);
    for &(d, r) in factors {
        if d == bd {
            continue;
        }
        for _ in 0..r.unsigned_abs() {
            if r > 0 {
                mul_euler(&mut out, d as usize, &e)?;
            } else {
                div_euler(&mut out, d as usize, &e)?;
            }
        }
    }
    Some(out)
}

/// `E(q)^r` modulo `ring`, `len` coefficients. For a prime modulus `ℓ`
/// the base-`ℓ` digits of `|r|` are used, since `E(q)^ℓ ≡ E(q^ℓ) (mod ℓ)`.
pub fn euler_power_mod(ring: Zmod, len: usize, r: i64) -> Result<ModSeries> {
    let mut acc = Series::one(ring, 1, len);
    if len == 0 {
        return Ok(acc);
    }
    let m = ring.m();
    let mut e = r.unsigned_abs();
    let mut scale = 1u64;
    let frobenius = is_prime(m);
    while e > 0 && (scale as usize) < len {
        let digit = if frobenius { e % m } else { e };
        if digit > 0 {
            let sub_len = (len - 1) / scale as usize + 1;
            let base = euler_product(ring, sub_len);
            let p = base.pow(digit)?.v_operator(scale).truncate(len);
            acc = acc.mul(&p)?;
        }
        if !frobenius {
            break;
        }
        e /= m;
        scale = scale.saturating_mul(m);
    }
    if r < 0 {
        acc = acc.invert()?;
    }
    Ok(acc)
}

/// `Δ^e = q^e E(q)^{24e}` modulo the prime `ell`, with `terms` coefficients
/// from `q^e` on.
pub fn delta_power_mod(e: u64, ell: u64, terms: usize) -> Result<ModSeries> {
    if !is_prime(ell) {
        return invalid(format!("{ell} is not prime"));
    }
    let ring = Zmod::new(ell)?;
    Ok(euler_power_mod(ring, terms, 24 * e as i64)?.shift(e as i64))
}

/// Exact `E(q)^α` as a rational series; used as an oracle by tests.
pub fn euler_power_exact(terms: usize, alpha: i64) -> FracSeries {
    let coeffs = match euler_power_int::<i128>(terms, alpha) {
        Some(v) => v.into_iter().map(BigInt::from).collect(),
        None => euler_power_int::<BigInt>(terms, alpha).expect("no overflow"),
    };
    Series::from_q_coeffs(Rationals, coeffs.into_iter().map(BigRational::from_integer).collect())
}

/// The leading coefficients as `i64` when they fit; test and CLI convenience.
pub fn head_i64(s: &FracSeries, k: usize) -> Vec<i64> {
    s.coeffs().iter().take(k).map(|c| c.to_integer().to_i64().expect("fits in i64")).collect()
}
