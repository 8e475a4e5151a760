use std::fmt::Debug;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::ntt;
use crate::arith::mod_inv;
use crate::error::{invalid, Error, Result};

/// Coefficient arithmetic shared by the exact and the modular engines.
// constructors need the ring for its modulus
#[allow(clippy::wrong_self_convention)]
pub trait CoeffRing: Clone + Debug + PartialEq + Send + Sync {
    type Elem: Clone + Debug + PartialEq + Send + Sync;

    fn zero(&self) -> Self::Elem;
    fn from_i64(&self, x: i64) -> Self::Elem;
    fn from_bigint(&self, x: &BigInt) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    /// Multiplicative inverse of a unit.
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
    /// `None` for the rationals.
    fn modulus(&self) -> Option<u64>;

    /// First `out_len` terms of the Cauchy product.
    fn convolve(&self, a: &[Self::Elem], b: &[Self::Elem], out_len: usize) -> Vec<Self::Elem>;

    /// First `a.len()` terms of `1/a`; `a[0]` must be a unit.
    fn invert_series(&self, a: &[Self::Elem]) -> Result<Vec<Self::Elem>> {
        let inv0 = a
            .first()
            .and_then(|x| self.inv(x))
            .ok_or(Error::NonUnitLeading)?;
        let nz: Vec<usize> = (1..a.len()).filter(|&k| !self.is_zero(&a[k])).collect();
        let mut b = Vec::with_capacity(a.len());
        b.push(inv0.clone());
        for n in 1..a.len() {
            let mut acc = self.zero();
            for &k in nz.iter().take_while(|&&k| k <= n) {
                acc = self.add(&acc, &self.mul(&a[k], &b[n - k]));
            }
            b.push(self.neg(&self.mul(&inv0, &acc)));
        }
        Ok(b)
    }

    fn one(&self) -> Self::Elem {
        self.from_i64(1)
    }

    /// `base^exp` as a ring element.
    fn int_pow(&self, base: i64, exp: u32) -> Self::Elem {
        self.from_bigint(&num_traits::pow(BigInt::from(base), exp as usize))
    }
}

/// The field of rationals, with arbitrary-precision numerators and denominators.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Rationals;

fn all_integral(xs: &[BigRational]) -> bool {
    xs.iter().all(|x| x.denom().is_one())
}

impl CoeffRing for Rationals {
    type Elem = BigRational;

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn from_i64(&self, x: i64) -> BigRational {
        BigRational::from_integer(x.into())
    }
    fn from_bigint(&self, x: &BigInt) -> BigRational {
        BigRational::from_integer(x.clone())
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn inv(&self, a: &BigRational) -> Option<BigRational> {
        (!a.is_zero()).then(|| a.recip())
    }
    fn modulus(&self) -> Option<u64> {
        None
    }

    fn invert_series(&self, a: &[BigRational]) -> Result<Vec<BigRational>> {
        let lead = a.first().filter(|x| !x.is_zero()).ok_or(Error::NonUnitLeading)?;
        // integer recurrence when the inverse stays integral
        if all_integral(a) && lead.numer().abs().is_one() {
            let u = lead.numer().clone();
            let nz: Vec<(usize, &BigInt)> =
                a.iter().enumerate().skip(1).filter(|(_, x)| !x.is_zero()).map(|(k, x)| (k, x.numer())).collect();
            let mut b: Vec<BigInt> = Vec::with_capacity(a.len());
            b.push(u.clone());
            for n in 1..a.len() {
                let mut acc = BigInt::zero();
                for &(k, x) in nz.iter().take_while(|(k, _)| *k <= n) {
                    acc += x * &b[n - k];
                }
                b.push(-(&u * acc));
            }
            return Ok(b.into_iter().map(BigRational::from_integer).collect());
        }
        let inv0 = lead.recip();
        let nz: Vec<usize> = (1..a.len()).filter(|&k| !a[k].is_zero()).collect();
        let mut b = Vec::with_capacity(a.len());
        b.push(inv0.clone());
        for n in 1..a.len() {
            let mut acc = BigRational::zero();
            for &k in nz.iter().take_while(|&&k| k <= n) {
                acc += &a[k] * &b[n - k];
            }
            b.push(-(&inv0 * acc));
        }
        Ok(b)
    }

    fn convolve(&self, a: &[BigRational], b: &[BigRational], out_len: usize) -> Vec<BigRational> {
        if all_integral(a) && all_integral(b) {
            let ai: Vec<BigInt> = a.iter().take(out_len).map(|x| x.numer().clone()).collect();
            let bi: Vec<BigInt> = b.iter().take(out_len).map(|x| x.numer().clone()).collect();
            return convolve_bigint(&ai, &bi, out_len)
                .into_iter()
                .map(BigRational::from_integer)
                .collect();
        }
        let mut out = vec![BigRational::zero(); out_len];
        for (i, x) in a.iter().enumerate().take(out_len) {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate().take(out_len - i) {
                if !y.is_zero() {
                    out[i + j] += x * y;
                }
            }
        }
        out
    }
}

pub(crate) fn convolve_bigint(a: &[BigInt], b: &[BigInt], out_len: usize) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); out_len];
    let b_nz: Vec<(usize, &BigInt)> = b.iter().enumerate().filter(|(_, y)| !y.is_zero()).collect();
    for (i, x) in a.iter().enumerate().take(out_len) {
        if x.is_zero() {
            continue;
        }
        for &(j, y) in &b_nz {
            if i + j >= out_len {
                break;
            }
            out[i + j] += x * y;
        }
    }
    out
}

/// Integers modulo a word-sized modulus `m < 2^31`, residues in `[0, m)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Zmod {
    modulus: u64,
}

impl Zmod {
    pub fn new(modulus: u64) -> Result<Self> {
        if !(2..1 << 31).contains(&modulus) {
            return invalid(format!("modulus {modulus} outside [2, 2^31)"));
        }
        Ok(Zmod { modulus })
    }

    pub fn m(&self) -> u64 {
        self.modulus
    }

    pub fn reduce_i64(&self, x: i64) -> u64 {
        x.rem_euclid(self.modulus as i64) as u64
    }

    /// Reduces an `ℓ`-integral rational; fails if the denominator is not a unit.
    pub fn reduce_rational(&self, x: &BigRational) -> Result<u64> {
        let num = self.from_bigint(x.numer());
        let den = self.from_bigint(x.denom());
        let inv = self.inv(&den).ok_or_else(|| {
            Error::InvalidInput(format!("denominator of {x} is not invertible mod {}", self.modulus))
        })?;
        Ok(self.mul(&num, &inv))
    }

    /// Symmetric representative in `(-m/2, m/2]`.
    pub fn centered(&self, x: u64) -> i64 {
        let m = self.modulus as i64;
        let x = x as i64;
        if 2 * x > m {
            x - m
        } else {
            x
        }
    }
}

impl CoeffRing for Zmod {
    type Elem = u64;

    fn zero(&self) -> u64 {
        0
    }
    fn from_i64(&self, x: i64) -> u64 {
        self.reduce_i64(x)
    }
    fn from_bigint(&self, x: &BigInt) -> u64 {
        let r = x.mod_floor(&BigInt::from(self.modulus));
        r.to_u64().expect("residue fits")
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        (a + b) % self.modulus
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        (a + self.modulus - b) % self.modulus
    }
    fn neg(&self, a: &u64) -> u64 {
        (self.modulus - a) % self.modulus
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        a * b % self.modulus
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn inv(&self, a: &u64) -> Option<u64> {
        mod_inv(*a as i64, self.modulus as i64).map(|x| x as u64)
    }
    fn modulus(&self) -> Option<u64> {
        Some(self.modulus)
    }
    fn int_pow(&self, base: i64, exp: u32) -> u64 {
        crate::arith::mod_pow(self.reduce_i64(base), exp as u64, self.modulus)
    }

    fn convolve(&self, a: &[u64], b: &[u64], out_len: usize) -> Vec<u64> {
        if a.len().min(b.len()).min(out_len) <= 64 {
            ntt::convolve_naive(a, b, out_len, self.modulus)
        } else {
            ntt::convolve_mod(a, b, out_len, self.modulus)
        }
    }

    /// Newton iteration `g ← g(2 - a g)` doubling the precision each step.
    fn invert_series(&self, a: &[u64]) -> Result<Vec<u64>> {
        let n = a.len();
        let inv0 = a.first().and_then(|x| self.inv(x)).ok_or(Error::NonUnitLeading)?;
        if n <= 256 {
            let nz: Vec<usize> = (1..n).filter(|&k| a[k] != 0).collect();
            let mut b = vec![0u64; n];
            b[0] = inv0;
            let m = self.modulus as u128;
            for i in 1..n {
                let mut acc = 0u128;
                for &k in nz.iter().take_while(|&&k| k <= i) {
                    acc = (acc + a[k] as u128 * b[i - k] as u128) % m;
                }
                b[i] = self.neg(&self.mul(&inv0, &(acc as u64)));
            }
            return Ok(b);
        }
        let mut g = vec![inv0];
        let mut len = 1;
        while len < n {
            len = (2 * len).min(n);
            let ag = self.convolve(&a[..len], &g, len);
            let two_minus: Vec<u64> = ag
                .iter()
                .enumerate()
                .map(|(i, &x)| {
                    let neg = self.neg(&x);
                    if i == 0 {
                        self.add(&neg, &2)
                    } else {
                        neg
                    }
                })
                .collect();
            g = self.convolve(&g, &two_minus, len);
        }
        Ok(g)
    }
}

/// Formats a rational as `"p"` or `"p/q"`.
pub fn rational_to_string(x: &BigRational) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let parse_int = |t: &str| {
        t.trim()
            .parse::<BigInt>()
            .map_err(|_| Error::InvalidInput(format!("not a rational: {s:?}")))
    };
    match s.split_once('/') {
        Some((n, d)) => {
            let d = parse_int(d)?;
            if d.is_zero() {
                return invalid(format!("zero denominator in {s:?}"));
            }
            Ok(BigRational::new(parse_int(n)?, d))
        }
        None => Ok(BigRational::from_integer(parse_int(s)?)),
    }
}
