use rayon::prelude::*;

use crate::error::{invalid, Error, Result};

/// Largest `n` accepted by the brute-force counter.
pub const RM_GUARD: u64 = 100_000;

/// Refuse enumerations expected to visit more lattice points than this.
const MAX_POINTS: f64 = 4.0e9;

/// Representation counts of `Q(x) = Σ x_i² + Σ_{i<j} x_i x_j` on `ℤ^{m-1}`.
///
/// Enumeration uses `2Q(x) = (Σx_i)² + Σx_i²`. With `j` coordinates fixed
/// (partial sum `s`, partial square sum `n`) and `k` still free, the
/// minimum over real completions is `2Q ≥ n + s²/(k+1)`, which prunes every
/// level of the search. In particular `|x_i| ≤ ⌈√(2N)⌉`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct QuadFormCounter {
    m: u32,
}

impl QuadFormCounter {
    pub fn new(m: u32) -> Result<Self> {
        if m == 0 {
            return invalid("number of colors must be positive");
        }
        Ok(QuadFormCounter { m })
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn arity(&self) -> usize {
        self.m as usize - 1
    }

    pub fn value(&self, x: &[i64]) -> i64 {
        let s: i64 = x.iter().sum();
        let n: i64 = x.iter().map(|v| v * v).sum();
        (s * s + n) / 2
    }

    /// Heuristic lattice-point count of `{Q ≤ bound}`: volume of the ellipsoid.
    pub fn estimated_points(&self, bound: u64) -> f64 {
        let d = self.arity() as f64;
        if d == 0.0 {
            return 1.0;
        }
        // det of the Gram matrix (1 on the diagonal, 1/2 off it) is m / 2^{m-1}
        let det = self.m as f64 / 2f64.powi(self.m as i32 - 1);
        let unit_ball = std::f64::consts::PI.powf(d / 2.0) / gamma_half_int(d / 2.0 + 1.0);
        unit_ball * (bound as f64).powf(d / 2.0) / det.sqrt()
    }

    /// `r_m(n)` for all `0 ≤ n ≤ bound`.
    pub fn counts_up_to(&self, bound: u64) -> Result<Vec<u64>> {
        if bound > RM_GUARD {
            return Err(Error::Unsupported(format!(
                "brute-force r_m is limited to n ≤ {RM_GUARD}; use the fitted closed form for larger n"
            )));
        }
        let est = self.estimated_points(bound);
        if est > MAX_POINTS {
            return Err(Error::Unsupported(format!(
                "enumerating {:.2e} lattice points for m = {} up to {bound} is not feasible",
                est, self.m
            )));
        }
        let size = bound as usize + 1;
        let d = self.arity();
        if d == 0 {
            let mut v = vec![0; size];
            v[0] = 1;
            return Ok(v);
        }
        let two_n = 2 * bound as i64;
        let k = d as i64 - 1;
        let top = ((two_n as f64).sqrt().ceil() as i64) + 1;
        let counts = (-top..=top)
            .into_par_iter()
            .filter(|&y| (k + 1) * y * y + y * y <= two_n * (k + 1))
            .fold(
                || vec![0u64; size],
                |mut acc, y| {
                    enumerate(&mut acc, d - 1, y, y * y, two_n);
                    acc
                },
            )
            .reduce(
                || vec![0u64; size],
                |mut a, b| {
                    a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                    a
                },
            );
        Ok(counts)
    }

    /// `r_m(n)` by enumeration.
    pub fn count(&self, n: u64) -> Result<u64> {
        Ok(self.counts_up_to(n)?[n as usize])
    }
}

/// `Γ(x)` for `x` a positive multiple of 1/2.
fn gamma_half_int(x: f64) -> f64 {
    if (x - 0.5).abs() < 1e-12 {
        return std::f64::consts::PI.sqrt();
    }
    if (x - 1.0).abs() < 1e-12 {
        return 1.0;
    }
    (x - 1.0) * gamma_half_int(x - 1.0)
}

// `free` coordinates remain after the ones summarized by `(s, n)`.
fn enumerate(acc: &mut [u64], free: usize, s: i64, n: i64, two_n: i64) {
    if free == 0 {
        acc[((s * s + n) / 2) as usize] += 1;
        return;
    }
    let k = free as i64 - 1;
    let fits = |y: i64| (k + 1) * (n + y * y) + (s + y) * (s + y) <= two_n * (k + 1);
    // the bound is convex in y with minimum near -s/(k+2)
    let center = (-(s as f64) / (k + 2) as f64).round() as i64;
    let mut y = center;
    while fits(y) {
        enumerate(acc, free - 1, s + y, n + y * y, two_n);
        y += 1;
    }
    let mut y = center - 1;
    while fits(y) {
        enumerate(acc, free - 1, s + y, n + y * y, two_n);
        y -= 1;
    }
}

/// `r_m(n)` by enumeration over the box `|x_i| ≤ ⌈√(2n)⌉`.
pub fn rm_count(m: u32, n: u64) -> Result<u64> {
    QuadFormCounter::new(m)?.count(n)
}
