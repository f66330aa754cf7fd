//! Exact Fourier coefficients of `F_{j,N}(τ)/η(τ)`.
//!
//! Writing `m = j + 2Nt` in `F_{j,N} = Σ_{m ≡ j (2N)} sgn(m) q^{m²/4N}` gives
//! `m²/4N = j²/4N + jt + Nt²`, and `1/η = q^{−1/24} Σ p(ℓ) q^ℓ`, hence
//!
//! ```text
//! a_{j,N}(n) = Σ_{t ∈ ℤ, jt + Nt² ≤ n} sgn(j + 2Nt) · p(n − jt − Nt²).
//! ```

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Roots;
use num_traits::{Signed, Zero};

use crate::arith::{ExactRational, PartitionTable};
use crate::error::{Error, Result};

/// The triple `(j, N, n)` indexing a coefficient `a_{j,N}(n)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CoefficientParams {
    pub j: i64,
    pub n_level: i64,
    pub n: i64,
}

impl CoefficientParams {
    pub fn new(j: i64, n_level: i64, n: i64) -> Result<Self> {
        if n_level < 2 {
            return Err(Error::InvalidLevel(n_level));
        }
        if !(1..n_level).contains(&j) {
            return Err(Error::IndexOutOfRange {
                index: j,
                max: n_level - 1,
            });
        }
        if n < 0 {
            return Err(Error::InvalidArgument(format!(
                "n must be nonnegative, got {n}"
            )));
        }
        Ok(CoefficientParams { j, n_level, n })
    }

    /// `g_{j,N}(n) = n + j²/4N − 1/24`.
    pub fn g(&self) -> ExactRational {
        ExactRational::from_integer(BigInt::from(self.n))
            + ExactRational::new(
                BigInt::from(self.j * self.j),
                BigInt::from(4 * self.n_level),
            )
            - ExactRational::new(BigInt::from(1), BigInt::from(24))
    }

    pub fn g_f64(&self) -> f64 {
        crate::arith::rational_to_f64(&self.g())
    }

    /// Checks the extra hypotheses of the convergent series: `n ≥ 1` and
    /// `√(N/6) ∉ ℤ`.
    pub fn check_convergent(&self) -> Result<()> {
        if is_excluded_level(self.n_level) {
            return Err(Error::InvalidN(self.n_level));
        }
        if self.n == 0 {
            return Err(Error::ZeroN);
        }
        Ok(())
    }
}

/// `true` when `N = 6m²` for some `m ≥ 1`.
pub fn is_excluded_level(n_level: i64) -> bool {
    if n_level <= 0 || n_level % 6 != 0 {
        return false;
    }
    let q = n_level / 6;
    let s = q.sqrt();
    s * s == q
}

fn sgn(m: i64) -> i32 {
    m.signum() as i32
}

/// `a_{j,N}(n)` from a partition table holding at least `p(n)`.
pub fn coefficient_with_table(params: &CoefficientParams, table: &PartitionTable) -> BigInt {
    let (j, n_level, n) = (params.j, params.n_level, params.n);
    let bound = (n / n_level).sqrt() + 2;
    let mut acc = BigInt::zero();
    for t in -bound..=bound {
        let shift = j * t + n_level * t * t;
        if shift > n {
            continue;
        }
        let p = table
            .get((n - shift) as usize)
            .expect("partition table covers n");
        match sgn(j + 2 * n_level * t) {
            1 => acc += p,
            -1 => acc -= p,
            _ => {}
        }
    }
    acc
}

pub fn coefficient_exact(params: &CoefficientParams) -> BigInt {
    let table = PartitionTable::up_to(params.n as usize);
    coefficient_with_table(params, &table)
}

/// `[a_{j,N}(0), …, a_{j,N}(n_max)]` sharing one partition table.
pub fn coefficient_table(j: i64, n_level: i64, n_max: i64) -> Result<Vec<BigInt>> {
    CoefficientParams::new(j, n_level, n_max)?;
    let table = PartitionTable::up_to(n_max as usize);
    Ok((0..=n_max)
        .map(|n| coefficient_with_table(&CoefficientParams { j, n_level, n }, &table))
        .collect())
}

/// Terms `sgn(m) q^{m²/4N}` of `F_{j,N}` with `m ≡ j (mod 2N)` and exponent
/// at most `cap`, merged by exponent (cancelling pairs dropped) and sorted
/// by increasing exponent.
pub fn false_theta_truncation(
    j: i64,
    n_level: i64,
    cap: &ExactRational,
) -> Result<Vec<(ExactRational, i32)>> {
    if n_level < 2 {
        return Err(Error::InvalidLevel(n_level));
    }
    if cap.is_negative() {
        return Ok(Vec::new());
    }
    let four_n = BigInt::from(4 * n_level);
    // m² ≤ 4N·cap
    let limit = (cap * ExactRational::from_integer(four_n.clone()))
        .floor()
        .to_integer();
    let m_max = limit.sqrt();
    let m_max: i64 = m_max
        .try_into()
        .map_err(|_| Error::InvalidArgument("exponent cap too large".into()))?;
    let modulus = 2 * n_level;
    let mut merged: BTreeMap<ExactRational, i32> = BTreeMap::new();
    let start = -m_max + (j + m_max).rem_euclid(modulus);
    let mut m = start;
    while m <= m_max {
        let s = sgn(m);
        if s != 0 {
            let e = ExactRational::new(BigInt::from(m * m), four_n.clone());
            *merged.entry(e).or_insert(0) += s;
        }
        m += modulus;
    }
    Ok(merged.into_iter().filter(|(_, c)| *c != 0).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::ToPrimitive;

    fn rat(n: i64, d: i64) -> ExactRational {
        ExactRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn table_goldens() {
        let cases = [
            (1, 3, 3, 2),
            (1, 3, 10, 30),
            (1, 3, 18, 272),
            (5, 8, 3, 2),
            (5, 8, 10, 27),
            (5, 8, 18, 216),
            (3, 10, 3, 3),
            (3, 10, 10, 39),
            (3, 10, 18, 336),
        ];
        for (j, n_level, n, expected) in cases {
            let p = CoefficientParams::new(j, n_level, n).unwrap();
            assert_eq!(
                coefficient_exact(&p),
                BigInt::from(expected),
                "({j},{n_level},{n})"
            );
        }
    }

    #[test]
    fn constant_term_is_one() {
        for n_level in 2..=12 {
            for j in 1..n_level {
                let p = CoefficientParams::new(j, n_level, 0).unwrap();
                assert_eq!(coefficient_exact(&p), BigInt::from(1));
            }
        }
    }

    #[test]
    fn coefficient_table_examples() {
        let t = coefficient_table(1, 3, 3).unwrap();
        assert_eq!(t.len(), 4);
        assert_eq!(t[0], BigInt::from(1));
        assert_eq!(t[3], BigInt::from(2));
        assert_eq!(coefficient_table(5, 8, 10).unwrap()[10], BigInt::from(27));
        assert!(coefficient_table(0, 3, 3).is_err());
    }

    #[test]
    fn params_validation() {
        assert!(CoefficientParams::new(3, 3, 1).is_err());
        assert!(CoefficientParams::new(1, 1, 1).is_err());
        assert!(CoefficientParams::new(1, 3, -1).is_err());
        let p = CoefficientParams::new(1, 3, 3).unwrap();
        assert_eq!(p.g(), rat(3, 1) + rat(1, 12) - rat(1, 24));
        assert_eq!(
            CoefficientParams::new(1, 6, 3).unwrap().check_convergent(),
            Err(Error::InvalidN(6))
        );
        assert_eq!(
            CoefficientParams::new(1, 24, 3).unwrap().check_convergent(),
            Err(Error::InvalidN(24))
        );
        assert_eq!(
            CoefficientParams::new(1, 3, 0).unwrap().check_convergent(),
            Err(Error::ZeroN)
        );
        assert!(CoefficientParams::new(1, 12, 1)
            .unwrap()
            .check_convergent()
            .is_ok());
    }

    #[test]
    fn excluded_levels() {
        let excluded: Vec<i64> = (1..=300).filter(|&n| is_excluded_level(n)).collect();
        assert_eq!(excluded, vec![6, 24, 54, 96, 150, 216, 294]);
    }

    #[test]
    fn truncation_examples() {
        assert!(false_theta_truncation(0, 5, &rat(50, 1))
            .unwrap()
            .is_empty());
        assert!(false_theta_truncation(5, 5, &rat(50, 1))
            .unwrap()
            .is_empty());
        let terms = false_theta_truncation(1, 3, &rat(5, 1)).unwrap();
        assert_eq!(
            terms,
            vec![(rat(1, 12), 1), (rat(25, 12), -1), (rat(49, 12), 1)]
        );
    }

    #[test]
    fn truncation_symmetries() {
        for n_level in 2..7 {
            for j in -15..15 {
                let cap = rat(40, 1);
                let base = false_theta_truncation(j, n_level, &cap).unwrap();
                let neg: Vec<_> = false_theta_truncation(-j, n_level, &cap)
                    .unwrap()
                    .into_iter()
                    .map(|(e, c)| (e, -c))
                    .collect();
                assert_eq!(base, neg);
                assert_eq!(
                    base,
                    false_theta_truncation(j + 2 * n_level, n_level, &cap).unwrap()
                );
                assert_eq!(
                    base,
                    false_theta_truncation(j - 2 * n_level, n_level, &cap).unwrap()
                );
            }
        }
    }

    /// Multiplies the truncated `F_{j,N}` against `Σ p(ℓ) q^{ℓ − 1/24}` with
    /// exact exponents and reads off the coefficients.
    #[test]
    fn convolution_matches_series_product() {
        let n_max = 25i64;
        let partitions = PartitionTable::up_to(n_max as usize);
        for (j, n_level) in [(1, 3), (5, 8), (3, 10), (1, 2), (4, 7)] {
            let base = rat(j * j, 4 * n_level) - rat(1, 24);
            let cap = rat(n_max + 1, 1) + rat(j * j, 4 * n_level);
            let theta = false_theta_truncation(j, n_level, &cap).unwrap();
            let mut product: BTreeMap<ExactRational, BigInt> = BTreeMap::new();
            for (e, c) in &theta {
                for l in 0..=n_max {
                    let exp = e + rat(l, 1) - rat(1, 24);
                    *product.entry(exp).or_insert_with(BigInt::zero) +=
                        partitions.get(l as usize).unwrap() * BigInt::from(*c);
                }
            }
            let table = coefficient_table(j, n_level, n_max).unwrap();
            for n in 0..=n_max {
                let exp = &base + rat(n, 1);
                let got = product.get(&exp).cloned().unwrap_or_else(BigInt::zero);
                assert_eq!(got, table[n as usize], "j={j} N={n_level} n={n}");
            }
        }
    }

    /// Compares `q^{g} Σ a(n) qⁿ` with `F_{j,N}(i)/η(i)` evaluated from
    /// truncated series and a 200-factor eta product.
    #[test]
    fn numerical_self_consistency_at_i() {
        let q = (-2.0 * std::f64::consts::PI).exp();
        let mut eta_prod = 1.0;
        for m in 1..=200 {
            eta_prod *= 1.0 - q.powi(m);
        }
        let eta = q.powf(1.0 / 24.0) * eta_prod;
        for (j, n_level) in [(1, 3), (5, 8), (3, 10)] {
            let theta = false_theta_truncation(j, n_level, &rat(60, 1)).unwrap();
            let f: f64 = theta
                .iter()
                .map(|(e, c)| *c as f64 * q.powf(e.to_f64().unwrap()))
                .sum();
            let direct = f / eta;
            let table = coefficient_table(j, n_level, 30).unwrap();
            let shift = (j * j) as f64 / (4 * n_level) as f64 - 1.0 / 24.0;
            let series: f64 = table
                .iter()
                .enumerate()
                .map(|(n, a)| a.to_f64().unwrap() * q.powf(n as f64 + shift))
                .sum();
            assert!(
                (series - direct).abs() <= 1e-8 * direct.abs().max(1.0),
                "{series} vs {direct}"
            );
        }
    }
}
