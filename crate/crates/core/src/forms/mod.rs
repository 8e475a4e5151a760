//! Constructors for the concrete forms: eta quotients, representation counts
//! of the `A_{m-1}` quadratic forms, twisted Eisenstein series, the closed
//! form for `A₅`, generalized Frobenius partition series and powers of `Δ`.

mod eisenstein;
mod eta;
mod lattice;

use num_bigint::BigInt;
use num_rational::BigRational;

pub use eisenstein::{
    a5_closed_form, eisenstein_series, fit_a5, twisted_divisor_sums, A5Fit, A5Series, A5_VALIDATION_BOUND,
};
pub use eta::{delta_power_mod, euler_power_exact, euler_power_mod, head_i64, EtaQuotient};
pub use lattice::{rm_count, QuadFormCounter, RM_GUARD};

use crate::error::{Error, Result};
use crate::qseries::{FracSeries, ModSeries, Rationals, Series, Zmod};

/// Largest precision served by the enumeration route for `cφ_m`.
pub const CPHI_BRUTE_LIMIT: usize = 10_001;

/// `Σ cφ_m(n) qⁿ = E(q)^{-m} Σ r_m(n) qⁿ`, exactly, to `terms` coefficients.
pub fn cphi_series(m: u32, terms: usize) -> Result<FracSeries> {
    let inv = euler_power_exact(terms, -(m as i64));
    if m == 1 {
        return Ok(inv);
    }
    let theta = theta_exact(m, terms)?;
    theta.mul(&inv)
}

/// `Σ cφ_m(n) qⁿ` modulo `modulus` to `terms` coefficients.
pub fn cphi_series_mod(m: u32, terms: usize, modulus: u64) -> Result<ModSeries> {
    let ring = Zmod::new(modulus)?;
    let inv = euler_power_mod(ring, terms, -(m as i64))?;
    if m == 1 {
        return Ok(inv);
    }
    let theta = if m == 5 {
        a5_closed_form()?.series_mod(terms, modulus)?
    } else {
        theta_exact(m, terms)?.reduce_mod(modulus)?
    };
    theta.mul(&inv)
}

fn theta_exact(m: u32, terms: usize) -> Result<FracSeries> {
    if m == 5 && terms > CPHI_BRUTE_LIMIT {
        return Ok(a5_closed_form()?.series(terms));
    }
    if terms > CPHI_BRUTE_LIMIT {
        return Err(Error::Unsupported(format!(
            "cφ_{m} needs enumeration beyond {CPHI_BRUTE_LIMIT} terms; only m = 1 and m = 5 have a fast path"
        )));
    }
    if terms == 0 {
        return Ok(Series::from_q_coeffs(Rationals, Vec::new()));
    }
    let counts = QuadFormCounter::new(m)?.counts_up_to(terms as u64 - 1)?;
    Ok(Series::from_q_coeffs(
        Rationals,
        counts.into_iter().map(|c| BigRational::from_integer(BigInt::from(c))).collect(),
    ))
}

#[cfg(test)]
mod tests;
