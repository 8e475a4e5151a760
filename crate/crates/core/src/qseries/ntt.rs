//! Truncated convolution modulo a word-sized modulus via number-theoretic
//! transforms over up to three NTT-friendly primes and CRT reconstruction.
//!
//! Every prime is below 2^30, so a product of two residues fits in a `u64`.
//! The number of primes is chosen so that their product exceeds the largest
//! possible exact coefficient `(m-1)^2 * min(len_a, len_b)`.

use rayon::prelude::*;

/// `(prime, primitive root, two-adic valuation of prime - 1)`
const PRIMES: [(u64, u64, u32); 3] = [
    (998_244_353, 3, 23),
    (167_772_161, 3, 25),
    (469_762_049, 3, 26),
];

/// Largest supported transform length.
pub const MAX_LEN: usize = 1 << 23;

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    acc
}

fn transform(a: &mut [u32], p: u64, g: u64, inverse: bool) {
    let n = a.len();
    debug_assert!(n.is_power_of_two());
    let mut j = 0usize;
    for i in 1..n {
        let mut bit = n >> 1;
        while j & bit != 0 {
            j ^= bit;
            bit >>= 1;
        }
        j |= bit;
        if i < j {
            a.swap(i, j);
        }
    }
    let mut len = 2;
    while len <= n {
        let mut w = pow_mod(g, (p - 1) / len as u64, p);
        if inverse {
            w = pow_mod(w, p - 2, p);
        }
        let half = len / 2;
        let mut twiddles = Vec::with_capacity(half);
        let mut cur = 1u64;
        for _ in 0..half {
            twiddles.push(cur);
            cur = cur * w % p;
        }
        let butterfly = |chunk: &mut [u32]| {
            let (lo, hi) = chunk.split_at_mut(half);
            for k in 0..half {
                let u = lo[k] as u64;
                let v = hi[k] as u64 * twiddles[k] % p;
                lo[k] = ((u + v) % p) as u32;
                hi[k] = ((u + p - v) % p) as u32;
            }
        };
        if n / len >= 64 && n >= 1 << 15 {
            a.par_chunks_mut(len).for_each(butterfly);
        } else {
            a.chunks_mut(len).for_each(butterfly);
        }
        len <<= 1;
    }
    if inverse {
        let n_inv = pow_mod(n as u64, p - 2, p);
        a.iter_mut().for_each(|x| *x = (*x as u64 * n_inv % p) as u32);
    }
}

fn convolve_prime(a: &[u64], b: &[u64], size: usize, prime: (u64, u64, u32)) -> Vec<u32> {
    let (p, g, _) = prime;
    let mut fa = vec![0u32; size];
    let mut fb = vec![0u32; size];
    for (dst, &x) in fa.iter_mut().zip(a) {
        *dst = (x % p) as u32;
    }
    for (dst, &x) in fb.iter_mut().zip(b) {
        *dst = (x % p) as u32;
    }
    rayon::join(|| transform(&mut fa, p, g, false), || transform(&mut fb, p, g, false));
    fa.par_iter_mut()
        .zip(fb.par_iter())
        .for_each(|(x, &y)| *x = (*x as u64 * y as u64 % p) as u32);
    transform(&mut fa, p, g, true);
    fa
}

/// How many primes are needed to represent products bounded by `bound` exactly.
pub fn primes_needed(modulus: u64, shorter_len: usize) -> usize {
    let bound = (modulus as u128 - 1).pow(2) * shorter_len as u128;
    let mut range = 1u128;
    for (k, &(p, _, _)) in PRIMES.iter().enumerate() {
        range *= p as u128;
        if range > bound {
            return k + 1;
        }
    }
    panic!("modulus {modulus} with length {shorter_len} exceeds the CRT range");
}

/// First `out_len` coefficients of `a * b`, reduced modulo `modulus`.
/// Inputs must already be reduced.
pub fn convolve_mod(a: &[u64], b: &[u64], out_len: usize, modulus: u64) -> Vec<u64> {
    let a = &a[..a.len().min(out_len)];
    let b = &b[..b.len().min(out_len)];
    if a.is_empty() || b.is_empty() || out_len == 0 {
        return vec![0; out_len];
    }
    let full = a.len() + b.len() - 1;
    let size = full.next_power_of_two();
    assert!(size <= MAX_LEN, "transform length {size} exceeds {MAX_LEN}");
    let k = primes_needed(modulus, a.len().min(b.len()));
    let residues: Vec<Vec<u32>> = PRIMES[..k]
        .par_iter()
        .map(|&prime| convolve_prime(a, b, size, prime))
        .collect();
    let take = out_len.min(full);
    let mut out: Vec<u64> = match k {
        1 => residues[0][..take].iter().map(|&x| x as u64 % modulus).collect(),
        _ => (0..take)
            .into_par_iter()
            .map(|i| garner(&residues, i, k, modulus))
            .collect(),
    };
    out.resize(out_len, 0);
    out
}

// Garner reconstruction of the exact value from residues, reduced mod `modulus`.
fn garner(residues: &[Vec<u32>], i: usize, k: usize, modulus: u64) -> u64 {
    let mut digits = [0u64; 3];
    for j in 0..k {
        let p = PRIMES[j].0;
        let mut x = residues[j][i] as u64;
        let mut prod = 1u64;
        let mut acc = 0u64;
        for (t, digit) in digits.iter().enumerate().take(j) {
            acc = (acc + digit % p * prod) % p;
            prod = prod * (PRIMES[t].0 % p) % p;
        }
        x = (x + p - acc) % p;
        digits[j] = x * pow_mod(prod, p - 2, p) % p;
    }
    let m = modulus as u128;
    let mut value = 0u128;
    let mut scale = 1u128;
    for (j, digit) in digits.iter().enumerate().take(k) {
        value = (value + *digit as u128 % m * scale) % m;
        scale = scale * (PRIMES[j].0 as u128 % m) % m;
    }
    value as u64
}

/// Schoolbook truncated convolution modulo `modulus`.
pub fn convolve_naive(a: &[u64], b: &[u64], out_len: usize, modulus: u64) -> Vec<u64> {
    let m = modulus as u128;
    let mut out = vec![0u128; out_len];
    for (i, &x) in a.iter().enumerate().take(out_len) {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate().take(out_len - i) {
            out[i + j] = (out[i + j] + x as u128 * y as u128) % m;
        }
    }
    out.into_iter().map(|x| x as u64).collect()
}
