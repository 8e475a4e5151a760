use std::sync::OnceLock;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use super::lattice::QuadFormCounter;
use crate::arith::RealCharacter;
use crate::error::{invalid, Error, Result};
use crate::qseries::{rational_to_string, CoeffRing, FracSeries, ModSeries, Rationals, Series, Zmod};

/// Every `n ≤` this bound is checked against enumeration before the closed
/// form for `A₅` is trusted.
pub const A5_VALIDATION_BOUND: u64 = 10_000;

/// `Σ_{d|n} ψ(n/d) φ(d) d^{k-1}` for `1 ≤ n < terms`, with a zero constant
/// term, by a divisor sieve.
pub fn twisted_divisor_sums<R: CoeffRing>(
    ring: &R,
    k: u32,
    psi: &RealCharacter,
    phi: &RealCharacter,
    terms: usize,
) -> Vec<R::Elem> {
    let mut out = vec![ring.zero(); terms];
    for d in 1..terms {
        let pd = phi.value(d as i64);
        if pd == 0 {
            continue;
        }
        let mut w = ring.int_pow(d as i64, k - 1);
        if pd < 0 {
            w = ring.neg(&w);
        }
        let neg_w = ring.neg(&w);
        for (j, n) in (d..terms).step_by(d).enumerate() {
            match psi.value(j as i64 + 1) {
                1 => out[n] = ring.add(&out[n], &w),
                -1 => out[n] = ring.add(&out[n], &neg_w),
                _ => {}
            }
        }
    }
    out
}

/// Eisenstein series with coefficients `Σ_{d|n} ψ(n/d)φ(d)d^{k-1}`; the
/// constant term is left at 0 and treated as a free parameter by callers.
pub fn eisenstein_series(k: u32, psi: &RealCharacter, phi: &RealCharacter, terms: usize) -> Result<FracSeries> {
    if k == 0 {
        return invalid("weight must be positive");
    }
    let sign = psi.value(-1) * phi.value(-1);
    let parity = if k.is_multiple_of(2) { 1 } else { -1 };
    if sign != parity {
        return invalid(format!("ψ(-1)φ(-1) = {sign} but (-1)^k = {parity}"));
    }
    Ok(Series::from_q_coeffs(Rationals, twisted_divisor_sums(&Rationals, k, psi, phi, terms)))
}

/// `A₅ = Σ r₅(n) qⁿ = c₀ + c₁ E₂^{1,χ} + c₂ E₂^{χ,1}` with `χ = (·/5)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct A5Fit {
    #[serde(serialize_with = "ser_rationals")]
    pub constants: [BigRational; 3],
    /// Rows used to solve for the constants.
    pub fit_rows: u64,
    /// Every `n` up to this bound agrees with enumeration.
    pub validated_up_to: u64,
}

fn ser_rationals<S: serde::Serializer>(xs: &[BigRational; 3], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(xs.iter().map(rational_to_string))
}

fn chi5() -> RealCharacter {
    RealCharacter::quadratic(5).expect("5 is squarefree")
}

impl A5Fit {
    /// Solves for the constants from `r₅(n)`, `n ≤ p_fit`, then checks every
    /// `n ≤ validate_to` against enumeration.
    pub fn derive(p_fit: u64, validate_to: u64) -> Result<Self> {
        if p_fit < 20 {
            return invalid("fit needs at least 20 rows");
        }
        let rows = p_fit.max(validate_to) as usize + 1;
        let counts = QuadFormCounter::new(5)?.counts_up_to(rows as u64 - 1)?;
        let (e1, e2) = basis(&Rationals, rows);
        let one = BigRational::one();
        let mut system: Vec<[BigRational; 4]> = Vec::new();
        for n in 0..=p_fit as usize {
            let c0 = if n == 0 { one.clone() } else { BigRational::zero() };
            system.push([c0, e1[n].clone(), e2[n].clone(), BigRational::from_integer(BigInt::from(counts[n]))]);
        }
        let constants = solve3(system)?;
        let fit = A5Fit { constants, fit_rows: p_fit, validated_up_to: 0 };
        let series = fit.series(rows);
        for (n, &expected) in counts.iter().enumerate().take(validate_to as usize + 1) {
            let got = series.at(n as i64);
            if got != BigRational::from_integer(BigInt::from(expected)) {
                return Err(Error::ValidationMismatch {
                    n: n as u64,
                    expected: expected.to_string(),
                    got: rational_to_string(&got),
                });
            }
        }
        Ok(A5Fit { validated_up_to: validate_to, ..fit })
    }

    fn combine<R: CoeffRing>(&self, ring: &R, terms: usize, consts: [R::Elem; 3]) -> Vec<R::Elem> {
        let (e1, e2) = basis(ring, terms);
        let mut out: Vec<R::Elem> =
            e1.iter().zip(&e2).map(|(a, b)| ring.add(&ring.mul(&consts[1], a), &ring.mul(&consts[2], b))).collect();
        if let Some(c) = out.first_mut() {
            *c = ring.add(c, &consts[0]);
        }
        out
    }

    pub fn series(&self, terms: usize) -> FracSeries {
        let coeffs = self.combine(&Rationals, terms, self.constants.clone());
        Series::from_q_coeffs(Rationals, coeffs)
    }

    pub fn series_mod(&self, terms: usize, modulus: u64) -> Result<ModSeries> {
        let ring = Zmod::new(modulus)?;
        let c = [
            ring.reduce_rational(&self.constants[0])?,
            ring.reduce_rational(&self.constants[1])?,
            ring.reduce_rational(&self.constants[2])?,
        ];
        Ok(Series::from_q_coeffs(ring, self.combine(&ring, terms, c)))
    }
}

fn basis<R: CoeffRing>(ring: &R, terms: usize) -> (Vec<R::Elem>, Vec<R::Elem>) {
    let triv = RealCharacter::trivial(1);
    let chi = chi5();
    (
        twisted_divisor_sums(ring, 2, &triv, &chi, terms),
        twisted_divisor_sums(ring, 2, &chi, &triv, terms),
    )
}

/// Exact least-squares-free solve of an overdetermined 3-unknown system;
/// every row must be satisfied.
fn solve3(rows: Vec<[BigRational; 4]>) -> Result<[BigRational; 3]> {
    let mut m = rows;
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..3 {
        let Some(p) = (r..m.len()).find(|&i| !m[i][col].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][col].recip();
        for x in m[r].iter_mut() {
            *x = &*x * &inv;
        }
        let pivot_row = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i != r && !row[col].is_zero() {
                let f = row[col].clone();
                for (x, y) in row.iter_mut().zip(&pivot_row) {
                    *x = &*x - &f * y;
                }
            }
        }
        pivots.push(col);
        r += 1;
    }
    if pivots.len() < 3 {
        return Err(Error::InconsistentSystem("basis does not determine all three constants".into()));
    }
    if let Some(i) = (3..m.len()).find(|&i| !m[i][3].is_zero()) {
        return Err(Error::InconsistentSystem(format!("row {i} has nonzero residual {}", m[i][3])));
    }
    Ok([m[0][3].clone(), m[1][3].clone(), m[2][3].clone()])
}

static A5: OnceLock<std::result::Result<A5Fit, String>> = OnceLock::new();

/// The validated closed form for `A₅`, derived once per process.
pub fn a5_closed_form() -> Result<&'static A5Fit> {
    A5.get_or_init(|| A5Fit::derive(200, A5_VALIDATION_BOUND).map_err(|e| e.to_string()))
        .as_ref()
        .map_err(|e| Error::InconsistentSystem(e.clone()))
}

/// Fits, validates and emits `p_out` coefficients of `A₅`, exact or mod `modulus`.
pub fn fit_a5(p_fit: u64, p_out: usize, modulus: Option<u64>) -> Result<(A5Fit, A5Series)> {
    let fit = if p_fit == 200 { a5_closed_form()?.clone() } else { A5Fit::derive(p_fit, A5_VALIDATION_BOUND)? };
    let series = match modulus {
        Some(m) => A5Series::Mod(fit.series_mod(p_out, m)?),
        None => A5Series::Exact(fit.series(p_out)),
    };
    Ok((fit, series))
}

#[derive(Clone, Debug)]
pub enum A5Series {
    Exact(FracSeries),
    Mod(ModSeries),
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sigma_one() {
        let t = RealCharacter::trivial(1);
        let e = eisenstein_series(2, &t, &t, 10).unwrap();
        assert_eq!(e.at(4), BigRational::from_integer(7.into()));
        assert_eq!(e.at(6), BigRational::from_integer(12.into()));
    }

    #[test]
    fn twisted_at_primes() {
        let chi = chi5();
        let t = RealCharacter::trivial(1);
        let e = eisenstein_series(2, &chi, &t, 50).unwrap();
        let f = eisenstein_series(2, &t, &chi, 50).unwrap();
        for p in [2i64, 3, 7, 11, 13, 47] {
            assert_eq!(e.at(p), BigRational::from_integer((chi.value(p) as i64 + p).into()));
            assert_eq!(f.at(p), BigRational::from_integer((1 + chi.value(p) as i64 * p).into()));
        }
    }

    #[test]
    fn parity_enforced() {
        let chi = RealCharacter::chi_minus4();
        let t = RealCharacter::trivial(1);
        assert!(eisenstein_series(2, &chi, &t, 5).is_err());
        assert!(eisenstein_series(1, &chi, &t, 5).is_ok());
    }

    #[test]
    fn small_fit_validates() {
        let fit = A5Fit::derive(40, 300).unwrap();
        assert_eq!(fit.series(1).at(0), BigRational::one());
        let m = fit.series_mod(300, 13).unwrap();
        assert_eq!(m, fit.series(300).reduce_mod(13).unwrap());
    }

    #[test]
    fn inconsistent_rows_are_rejected() {
        let r = |x: i64| BigRational::from_integer(x.into());
        let rows = vec![
            [r(1), r(0), r(0), r(1)],
            [r(0), r(1), r(0), r(2)],
            [r(0), r(0), r(1), r(3)],
            [r(0), r(1), r(1), r(6)],
        ];
        assert!(matches!(solve3(rows), Err(Error::InconsistentSystem(_))));
    }
}
