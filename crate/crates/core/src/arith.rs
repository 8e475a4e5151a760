//! Number-theoretic primitives: Kronecker symbols, real Dirichlet characters,
//! the theta-multiplier root `ε_d`, Atkin-Lehner sign predictions and the
//! numeric predicates used to select congruence primes.

use std::fmt;

use crate::error::{invalid, Result};

pub fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.unsigned_abs(), b.unsigned_abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a as i64
}

pub fn lcm(a: i64, b: i64) -> i64 {
    if a == 0 || b == 0 {
        return 0;
    }
    (a / gcd(a, b) * b).abs()
}

/// Floor division for signed operands, `b > 0`.
pub fn floor_div(a: i64, b: i64) -> i64 {
    a.div_euclid(b)
}

/// Ceiling division for signed operands, `b > 0`.
pub fn ceil_div(a: i64, b: i64) -> i64 {
    -(-a).div_euclid(b)
}

pub fn mod_pow(base: u64, mut exp: u64, modulus: u64) -> u64 {
    if modulus == 1 {
        return 0;
    }
    let m = modulus as u128;
    let mut b = base as u128 % m;
    let mut acc = 1u128;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        exp >>= 1;
    }
    acc as u64
}

/// Inverse of `a` modulo `m`, if it exists.
pub fn mod_inv(a: i64, m: i64) -> Option<i64> {
    assert!(m > 0);
    let (mut old_r, mut r) = (a.rem_euclid(m) as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    if old_r != 1 {
        return if m == 1 { Some(0) } else { None };
    }
    Some(old_s.rem_euclid(m as i128) as i64)
}

/// Extended gcd: returns `(g, x, y)` with `a x + b y = g`.
pub fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    let (mut old_r, mut r) = (a, b);
    let (mut old_s, mut s) = (1i64, 0i64);
    let (mut old_t, mut t) = (0i64, 1i64);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
        (old_t, t) = (t, old_t - q * t);
    }
    if old_r < 0 {
        (-old_r, -old_s, -old_t)
    } else {
        (old_r, old_s, old_t)
    }
}

/// The Kronecker symbol `(a/b)`, fully extended to `b ≤ 0` and even `b`.
///
/// `(a/0)` is 1 when `a = ±1` and 0 otherwise; for `b < 0` the factor
/// `(a/-1)` is 1 for `a ≥ 0` and -1 for `a < 0`.
pub fn kronecker(a: i64, b: i64) -> i32 {
    // (a/2) for odd a, indexed by a mod 8
    const TAB2: [i32; 8] = [0, 1, 0, -1, 0, -1, 0, 1];
    let (mut a, mut b) = (a as i128, b as i128);
    if b == 0 {
        return if a == 1 || a == -1 { 1 } else { 0 };
    }
    if a % 2 == 0 && b % 2 == 0 {
        return 0;
    }
    let mut v = 0;
    while b % 2 == 0 {
        b /= 2;
        v += 1;
    }
    let mut k = if v % 2 == 0 { 1 } else { TAB2[(a & 7) as usize] };
    if b < 0 {
        b = -b;
        if a < 0 {
            k = -k;
        }
    }
    loop {
        if a == 0 {
            return if b > 1 { 0 } else { k };
        }
        let mut v = 0;
        while a % 2 == 0 {
            a /= 2;
            v += 1;
        }
        if v % 2 == 1 {
            k *= TAB2[(b & 7) as usize];
        }
        if a & b & 2 != 0 {
            k = -k;
        }
        let r = a.abs();
        a = b % r;
        b = r;
    }
}

pub fn is_squarefree(n: u64) -> bool {
    if n == 0 {
        return false;
    }
    let mut n = n;
    let mut p = 2u64;
    while p * p <= n {
        if n.is_multiple_of(p) {
            n /= p;
            if n.is_multiple_of(p) {
                return false;
            }
        }
        p += 1;
    }
    true
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = mod_pow(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = (x as u128 * x as u128 % n as u128) as u64;
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// All primes `p ≤ n` by the sieve of Eratosthenes.
pub fn primes_up_to(n: u64) -> Vec<u64> {
    if n < 2 {
        return Vec::new();
    }
    let n = n as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if composite[i] {
            continue;
        }
        out.push(i as u64);
        let mut j = i * i;
        while j <= n {
            composite[j] = true;
            j += i;
        }
    }
    out
}

/// Distinct prime factors of `n`, by trial division.
pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= n {
        if n.is_multiple_of(p) {
            out.push(p);
            while n.is_multiple_of(p) {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Multiplicative order of `a` modulo the prime `p` (`p ∤ a`).
pub fn multiplicative_order(a: u64, p: u64) -> u64 {
    let mut ord = p - 1;
    for q in prime_factors(p - 1) {
        while ord.is_multiple_of(q) && mod_pow(a, ord / q, p) == 1 {
            ord /= q;
        }
    }
    ord
}

/// A fourth root of unity `i^k`, stored as `k mod 4`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FourthRoot(u8);

impl FourthRoot {
    pub const ONE: FourthRoot = FourthRoot(0);
    pub const I: FourthRoot = FourthRoot(1);
    pub const MINUS_ONE: FourthRoot = FourthRoot(2);
    pub const MINUS_I: FourthRoot = FourthRoot(3);

    pub fn from_exponent(k: i64) -> Self {
        FourthRoot(k.rem_euclid(4) as u8)
    }

    pub fn from_sign(s: i32) -> Self {
        match s {
            1 => Self::ONE,
            -1 => Self::MINUS_ONE,
            _ => panic!("sign must be ±1, got {s}"),
        }
    }

    /// The `k` in `i^k`, in `0..4`.
    pub fn exponent(self) -> u8 {
        self.0
    }

    pub fn inv(self) -> Self {
        FourthRoot((4 - self.0) % 4)
    }

    pub fn pow(self, e: i64) -> Self {
        Self::from_exponent(self.0 as i64 * e)
    }
}

impl std::ops::Mul for FourthRoot {
    type Output = FourthRoot;
    fn mul(self, rhs: FourthRoot) -> FourthRoot {
        FourthRoot((self.0 + rhs.0) % 4)
    }
}

impl fmt::Display for FourthRoot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(["1", "i", "-1", "-i"][self.0 as usize])
    }
}

/// `ε_d`: 1 if `d ≡ 1 (mod 4)`, `i` if `d ≡ 3 (mod 4)`.
pub fn epsilon_d(d: i64) -> Result<FourthRoot> {
    match d.rem_euclid(4) {
        1 => Ok(FourthRoot::ONE),
        3 => Ok(FourthRoot::I),
        _ => invalid(format!("ε_d requires odd d, got {d}")),
    }
}

/// A real Dirichlet character modulo `modulus`, realized as
/// `n ↦ (discriminant / n)` on integers coprime to the modulus and 0 elsewhere.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct RealCharacter {
    modulus: u64,
    discriminant: i64,
}

impl RealCharacter {
    /// Validates that the Kronecker kernel is a genuine character with period `modulus`.
    pub fn new(modulus: u64, discriminant: i64) -> Result<Self> {
        if modulus == 0 {
            return invalid("character modulus must be positive");
        }
        if !matches!(discriminant.rem_euclid(4), 0 | 1) {
            return invalid(format!(
                "kernel discriminant {discriminant} is not ≡ 0, 1 (mod 4)"
            ));
        }
        let chi = RealCharacter { modulus, discriminant };
        let n = modulus as i64;
        if (-n..n).any(|k| chi.value(k) != chi.value(k + n)) {
            return invalid(format!(
                "({discriminant}/·) does not have period {modulus}"
            ));
        }
        Ok(chi)
    }

    /// The principal character modulo `modulus`.
    pub fn trivial(modulus: u64) -> Self {
        RealCharacter { modulus: modulus.max(1), discriminant: 1 }
    }

    /// `n ↦ (n/t)` for odd squarefree `t > 0`, as a character modulo `t`.
    pub fn quadratic(t: u64) -> Result<Self> {
        if t.is_multiple_of(2) || !is_squarefree(t) {
            return invalid(format!("(·/t) needs odd squarefree t, got {t}"));
        }
        let ti = t as i64;
        let disc = if ti % 4 == 1 { ti } else { -ti };
        Self::new(t, disc)
    }

    /// `(12/·)` modulo 12.
    pub fn chi12() -> Self {
        RealCharacter { modulus: 12, discriminant: 12 }
    }

    /// `(-4/·)` modulo 4.
    pub fn chi_minus4() -> Self {
        RealCharacter { modulus: 4, discriminant: -4 }
    }

    /// Parses `"1"`, `"1 mod N"`, `"(·/p)"`-style `"p"` labels used on the CLI:
    /// `"1"` is trivial, `"(n/7)"` or `"7"` is the quadratic character modulo 7.
    pub fn parse(label: &str, level: u64) -> Result<Self> {
        let s = label.trim().trim_start_matches("(n/").trim_start_matches("(./");
        let s = s.trim_end_matches(')');
        match s.parse::<u64>() {
            Ok(1) => Ok(Self::trivial(level)),
            Ok(t) => {
                let chi = Self::quadratic(t)?;
                if !level.is_multiple_of(t) {
                    return invalid(format!("character (·/{t}) is not defined modulo {level}"));
                }
                Self::new(level, chi.discriminant)
            }
            Err(_) => invalid(format!("cannot parse character label {label:?}")),
        }
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn discriminant(&self) -> i64 {
        self.discriminant
    }

    pub fn value(&self, n: i64) -> i32 {
        if gcd(n, self.modulus as i64) != 1 {
            return 0;
        }
        kronecker(self.discriminant, n)
    }

    pub fn is_trivial(&self) -> bool {
        self.discriminant == 1
    }

    /// Pointwise product, defined modulo the lcm of the moduli.
    pub fn mul(&self, other: &RealCharacter) -> RealCharacter {
        RealCharacter {
            modulus: lcm(self.modulus as i64, other.modulus as i64) as u64,
            discriminant: self.discriminant * other.discriminant,
        }
    }

    /// `χ²`: the principal character modulo the same modulus.
    pub fn square(&self) -> RealCharacter {
        RealCharacter::trivial(self.modulus)
    }

    /// Same values on integers coprime to `modulus`, reinterpreted modulo a multiple.
    pub fn lift_to(&self, modulus: u64) -> Result<RealCharacter> {
        if !modulus.is_multiple_of(self.modulus) {
            return invalid(format!("{modulus} is not a multiple of {}", self.modulus));
        }
        Ok(RealCharacter { modulus, discriminant: self.discriminant })
    }
}

impl fmt::Display for RealCharacter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}/·) mod {}", self.discriminant, self.modulus)
    }
}

/// Predicted Atkin-Lehner signs at 2 and 3 of the lifted form.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub struct EpsilonPair {
    pub eps2: i32,
    /// Absent when `3 | r`: the lift then has level `2N` and no condition at 3.
    pub eps3: Option<i32>,
}

pub fn atkin_lehner_signs(r: i64, psi: &RealCharacter) -> Result<EpsilonPair> {
    if r % 2 == 0 {
        return invalid(format!("r must be odd, got {r}"));
    }
    let r_prime = r / gcd(r, 3);
    let eps2 = -psi.value(2) * kronecker(8, r_prime);
    if eps2 == 0 {
        return invalid(format!("ψ(2) vanishes for {psi}"));
    }
    let eps3 = if r % 3 == 0 {
        None
    } else {
        let e = -psi.value(3) * kronecker(12, r);
        if e == 0 {
            return invalid(format!("ψ(3) vanishes for {psi}"));
        }
        Some(e)
    };
    Ok(EpsilonPair { eps2, eps3 })
}

/// The four numeric conditions on `(k, ℓ)` that guarantee large residual
/// Galois image for every newform in the relevant spaces.
pub fn is_suitable_numeric(k: u64, ell: u64) -> bool {
    assert!(k.is_multiple_of(2) && k > 0, "k must be even and positive");
    assert!(ell >= 5 && is_prime(ell), "ell must be a prime ≥ 5");
    if k > ell - 1 {
        return false;
    }
    let two_pow = mod_pow(2, k - 1, ell);
    let half = ell.div_ceil(2);
    if two_pow == 2 || two_pow == half {
        return false;
    }
    if 2 * k == ell + 1 || 2 * k == ell + 3 {
        return false;
    }
    let g_plus = gcd((ell + 1) as i64, (k - 1) as i64) as u64;
    let g_minus = gcd((ell - 1) as i64, (k - 1) as i64) as u64;
    (ell + 1) / g_plus >= 6 && (ell - 1) / g_minus >= 6
}

/// The least `a ≥ 1` with `2^a ≡ -2 (mod ℓ)`, if any.
///
/// `2^a ≡ -2` iff `2^(a-1) ≡ -1`, which is solvable iff the order of 2 is
/// even, and then the least solution is `a = ord/2 + 1`.
pub fn hasse_exponent(ell: u64) -> Option<u64> {
    assert!(ell >= 5 && is_prime(ell), "ell must be a prime ≥ 5");
    let ord = multiplicative_order(2, ell);
    ord.is_multiple_of(2).then_some(ord / 2 + 1)
}
