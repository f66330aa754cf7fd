//! The twisted Kloosterman sum
//!
//! ```text
//! K_{k,j,N}(n, r, κ) = Σ_{0 ≤ h < k, (h,k)=1} χ_{j,r}(N, M_{h,k})
//!                      · ζ_{24k}^{(24N(κ + r/2N)² − 1)h' − 24(n + j²/4N − 1/24)h}
//! ```
//!
//! and an empirical scan of its growth in `k`.
//!
//! Multiplying the exponent through by `N` gives the integer numerator
//! `(24N²κ² + 24Nκr + 6r² − N)h' − (24Nn + 6j² − N)h` over `24kN`, so every
//! phase is an exact `24kN`-th root of unity.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::arith::{gcd, neg_mod_inverse, root_of_unity};
use crate::error::{Error, Result};
use crate::multipliers::{chi_multiplier, matrix_hk};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct KloostermanKey {
    pub k: i64,
    pub j: i64,
    pub r: i64,
    pub n_level: i64,
    pub n: i64,
    pub kappa: i64,
}

impl KloostermanKey {
    /// Validates the ranges and reduces `kappa` mod `k`.
    pub fn new(k: i64, j: i64, r: i64, n_level: i64, n: i64, kappa: i64) -> Result<Self> {
        validate(k, j, r, n_level, n)?;
        Ok(KloostermanKey {
            k,
            j,
            r,
            n_level,
            n,
            kappa: kappa.rem_euclid(k),
        })
    }
}

fn validate(k: i64, j: i64, r: i64, n_level: i64, n: i64) -> Result<()> {
    if k < 1 {
        return Err(Error::NonPositiveModulus(k));
    }
    if n_level < 2 {
        return Err(Error::InvalidLevel(n_level));
    }
    for index in [j, r] {
        if !(1..n_level).contains(&index) {
            return Err(Error::IndexOutOfRange {
                index,
                max: n_level - 1,
            });
        }
    }
    if n < 0 {
        return Err(Error::InvalidArgument(format!(
            "n must be nonnegative, got {n}"
        )));
    }
    Ok(())
}

/// `h'`-coefficient `24N²κ² + 24Nκr + 6r² − N` of the scaled exponent.
fn kappa_coefficient(kappa: i128, r: i128, n_level: i128) -> i128 {
    24 * n_level * n_level * kappa * kappa + 24 * n_level * kappa * r + 6 * r * r - n_level
}

/// `h`-coefficient `24Nn + 6j² − N` of the scaled exponent.
fn index_coefficient(n: i128, j: i128, n_level: i128) -> i128 {
    24 * n_level * n + 6 * j * j - n_level
}

/// Per-`h` data shared by every `κ` and `n` for fixed `(k, j, r, N)`.
#[derive(Debug, Clone)]
pub struct MultiplierRow {
    pub k: i64,
    /// `(h, h', χ_{j,r}(N, M_{h,k}))` for each unit `h` in `[0, k)`.
    pub terms: Vec<(i64, i64, Complex64)>,
}

impl MultiplierRow {
    pub fn new(k: i64, j: i64, r: i64, n_level: i64) -> Result<Self> {
        validate(k, j, r, n_level, 0)?;
        let mut terms = Vec::new();
        for h in 0..k {
            if gcd(h, k) != 1 {
                continue;
            }
            let hp = neg_mod_inverse(h, k)?;
            let chi = chi_multiplier(j, r, n_level, &matrix_hk(h, k)?)?;
            terms.push((h, hp, chi));
        }
        Ok(MultiplierRow { k, terms })
    }

    /// `Σ_h |χ|`, the trivial bound for `|K|`.
    pub fn trivial_bound(&self) -> f64 {
        self.terms.iter().map(|t| t.2.norm()).sum()
    }
}

/// Direct evaluation of a single Kloosterman sum.
pub fn kloosterman_sum(key: &KloostermanKey) -> Result<Complex64> {
    validate(key.k, key.j, key.r, key.n_level, key.n)?;
    let row = MultiplierRow::new(key.k, key.j, key.r, key.n_level)?;
    Ok(sum_with_multipliers(key, &row.terms))
}

/// Kloosterman sum for the given key using caller-supplied `(h, h', χ)` terms.
pub fn sum_with_multipliers(key: &KloostermanKey, terms: &[(i64, i64, Complex64)]) -> Complex64 {
    let ni = key.n_level as i128;
    let den = 24 * key.k as i128 * ni;
    let a = kappa_coefficient(key.kappa as i128, key.r as i128, ni);
    let b = index_coefficient(key.n as i128, key.j as i128, ni);
    terms
        .iter()
        .map(|&(h, hp, chi)| chi * root_of_unity(a * hp as i128 - b * h as i128, den))
        .sum()
}

/// `[K(n, r, 0), …, K(n, r, k−1)]`, evaluating `χ` once per `h`.
pub fn kloosterman_row(k: i64, j: i64, n_level: i64, n: i64, r: i64) -> Result<Vec<Complex64>> {
    validate(k, j, r, n_level, n)?;
    let row = MultiplierRow::new(k, j, r, n_level)?;
    Ok(row_from_multipliers(&row, j, n_level, n, r))
}

/// Row evaluation against a precomputed [`MultiplierRow`].
pub fn row_from_multipliers(
    row: &MultiplierRow,
    j: i64,
    n_level: i64,
    n: i64,
    r: i64,
) -> Vec<Complex64> {
    let table = RootTable::new(24 * row.k as i128 * n_level as i128);
    row_with_table(row, &table, j, n_level, n, r)
}

fn row_with_table(
    row: &MultiplierRow,
    table: &RootTable,
    j: i64,
    n_level: i64,
    n: i64,
    r: i64,
) -> Vec<Complex64> {
    let k = row.k;
    let ni = n_level as i128;
    let den = table.den;
    let b = index_coefficient(n as i128, j as i128, ni);
    // e(−b h/den)·χ does not depend on κ.
    let twisted: Vec<(i128, Complex64)> = row
        .terms
        .iter()
        .map(|&(h, hp, chi)| (hp as i128, chi * table.get(-b * h as i128)))
        .collect();
    (0..k)
        .map(|kappa| {
            let a = kappa_coefficient(kappa as i128, r as i128, ni).rem_euclid(den);
            twisted.iter().map(|&(hp, z)| z * table.get(a * hp)).sum()
        })
        .collect()
}

/// All `den`-th roots of unity, indexed by exponent mod `den`.
struct RootTable {
    den: i128,
    roots: Vec<Complex64>,
}

impl RootTable {
    fn new(den: i128) -> Self {
        let roots = (0..den).map(|t| root_of_unity(t, den)).collect();
        RootTable { den, roots }
    }

    fn get(&self, t: i128) -> Complex64 {
        self.roots[t.rem_euclid(self.den) as usize]
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanKey {
    pub k: i64,
    pub n: i64,
    pub r: i64,
    pub kappa: i64,
}

/// Largest observed values for one modulus `k`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PerKMax {
    pub k: i64,
    /// `max |K| / (n k^{1/2+ε})`
    pub max_ratio: f64,
    /// `max |K| / n`
    pub max_scaled: f64,
    pub argmax: ScanKey,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundScanReport {
    pub j: i64,
    pub n_level: i64,
    pub eps: f64,
    pub max_ratio: f64,
    pub argmax: ScanKey,
    pub per_k: Vec<PerKMax>,
}

impl BoundScanReport {
    /// Least-squares slope of `log(max |K|/n)` against `log k`.
    pub fn loglog_slope(&self) -> f64 {
        let pts: Vec<(f64, f64)> = self
            .per_k
            .iter()
            .filter(|p| p.max_scaled > 0.0)
            .map(|p| ((p.k as f64).ln(), p.max_scaled.ln()))
            .collect();
        least_squares_slope(&pts)
    }

    /// Least-squares slope of `log(max ratio)` against `log k`.
    pub fn ratio_slope(&self) -> f64 {
        let pts: Vec<(f64, f64)> = self
            .per_k
            .iter()
            .filter(|p| p.max_ratio > 0.0)
            .map(|p| ((p.k as f64).ln(), p.max_ratio.ln()))
            .collect();
        least_squares_slope(&pts)
    }
}

pub fn least_squares_slope(pts: &[(f64, f64)]) -> f64 {
    if pts.len() < 2 {
        return 0.0;
    }
    let len = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / len;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / len;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    if sxx == 0.0 {
        0.0
    } else {
        sxy / sxx
    }
}

/// Scans `|K_{k,j,N}(n,r,κ)| / (n k^{1/2+ε})` over `k ≤ k_max`, every `r`,
/// every `κ` and every `n` in `n_set`. Only the per-`k` maxima are kept.
pub fn bound_ratio_scan(
    j: i64,
    n_level: i64,
    n_set: &[i64],
    k_max: i64,
    eps: f64,
) -> Result<BoundScanReport> {
    if k_max < 1 {
        return Err(Error::NonPositiveModulus(k_max));
    }
    if eps.is_nan() || eps <= 0.0 {
        return Err(Error::InvalidArgument(format!(
            "eps must be positive, got {eps}"
        )));
    }
    if n_set.is_empty() || n_set.iter().any(|&n| n < 1) {
        return Err(Error::InvalidArgument(
            "n_set must be nonempty with n >= 1".into(),
        ));
    }
    validate(1, j, 1, n_level, 1)?;
    let per_k: Vec<PerKMax> = (1..=k_max)
        .into_par_iter()
        .map(|k| scan_one_k(k, j, n_level, n_set, eps))
        .collect::<Result<_>>()?;
    let best = per_k
        .iter()
        .fold(None::<&PerKMax>, |acc, p| match acc {
            Some(b) if b.max_ratio >= p.max_ratio => Some(b),
            _ => Some(p),
        })
        .expect("k_max >= 1");
    Ok(BoundScanReport {
        j,
        n_level,
        eps,
        max_ratio: best.max_ratio,
        argmax: best.argmax,
        per_k,
    })
}

fn scan_one_k(k: i64, j: i64, n_level: i64, n_set: &[i64], eps: f64) -> Result<PerKMax> {
    let scale = (k as f64).powf(0.5 + eps);
    let mut best = PerKMax {
        k,
        max_ratio: -1.0,
        max_scaled: -1.0,
        argmax: ScanKey {
            k,
            n: 0,
            r: 0,
            kappa: 0,
        },
    };
    let table = RootTable::new(24 * k as i128 * n_level as i128);
    for r in 1..n_level {
        let row = MultiplierRow::new(k, j, r, n_level)?;
        for &n in n_set {
            let values = row_with_table(&row, &table, j, n_level, n, r);
            for (kappa, value) in values.iter().enumerate() {
                let scaled = value.norm() / n as f64;
                if scaled > best.max_scaled {
                    best.max_scaled = scaled;
                    best.max_ratio = scaled / scale;
                    best.argmax = ScanKey {
                        k,
                        n,
                        r,
                        kappa: kappa as i64,
                    };
                }
            }
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multipliers::chi_via_gauss_odd;

    fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
        (a - b).norm() <= tol
    }

    #[test]
    fn k_one_collapses_to_multiplier() {
        for n_level in 2..8 {
            for j in 1..n_level {
                for r in 1..n_level {
                    let key = KloostermanKey::new(1, j, r, n_level, 3, 0).unwrap();
                    let chi = chi_multiplier(j, r, n_level, &matrix_hk(0, 1).unwrap()).unwrap();
                    assert!(close(kloosterman_sum(&key).unwrap(), chi, 1e-14));
                }
            }
        }
        let key = KloostermanKey::new(1, 1, 1, 3, 3, 0).unwrap();
        let expected = Complex64::new(0.0, 1.0 / 2f64.sqrt());
        assert!(close(kloosterman_sum(&key).unwrap(), expected, 1e-14));
        let row = kloosterman_row(1, 1, 3, 3, 1).unwrap();
        assert_eq!(row.len(), 1);
        assert!(close(row[0], expected, 1e-14));
    }

    #[test]
    fn key_validation() {
        assert!(KloostermanKey::new(0, 1, 1, 3, 1, 0).is_err());
        assert!(KloostermanKey::new(3, 3, 1, 3, 1, 0).is_err());
        assert!(KloostermanKey::new(3, 1, 1, 1, 1, 0).is_err());
        assert_eq!(KloostermanKey::new(5, 1, 1, 3, 1, 12).unwrap().kappa, 2);
    }

    #[test]
    fn row_matches_scalar() {
        for (k, j, r, n_level, n) in [(7, 1, 2, 3, 5), (12, 5, 3, 8, 10), (15, 3, 1, 10, 18)] {
            let row = kloosterman_row(k, j, n_level, n, r).unwrap();
            for (kappa, value) in row.iter().enumerate() {
                let key = KloostermanKey::new(k, j, r, n_level, n, kappa as i64).unwrap();
                assert!(close(*value, kloosterman_sum(&key).unwrap(), 1e-12));
            }
        }
    }

    #[test]
    fn periodic_in_kappa() {
        for k in 1..=12 {
            let row = MultiplierRow::new(k, 2, 3, 5).unwrap();
            for kappa in 0..k {
                let mut key = KloostermanKey::new(k, 2, 3, 5, 4, kappa).unwrap();
                let base = sum_with_multipliers(&key, &row.terms);
                key.kappa = kappa + k;
                let shifted = sum_with_multipliers(&key, &row.terms);
                key.kappa = kappa - 3 * k;
                let back = sum_with_multipliers(&key, &row.terms);
                assert!(close(base, shifted, 1e-12));
                assert!(close(base, back, 1e-12));
            }
        }
    }

    #[test]
    fn triangle_bound() {
        for k in 1..=20 {
            let row = MultiplierRow::new(k, 1, 2, 3).unwrap();
            let bound = row.trivial_bound();
            for value in row_from_multipliers(&row, 1, 3, 7, 2) {
                assert!(value.norm() <= bound + 1e-10);
            }
        }
    }

    #[test]
    fn odd_k_gauss_route_agrees() {
        for k in (1..=15).step_by(2) {
            let row = MultiplierRow::new(k, 3, 2, 10).unwrap();
            let via: Vec<_> = row
                .terms
                .iter()
                .map(|&(h, hp, _)| (h, hp, chi_via_gauss_odd(h, k, 3, 2, 10).unwrap()))
                .collect();
            for kappa in 0..k {
                let key = KloostermanKey::new(k, 3, 2, 10, 6, kappa).unwrap();
                let a = sum_with_multipliers(&key, &row.terms);
                let b = sum_with_multipliers(&key, &via);
                assert!(close(a, b, 1e-9));
            }
        }
    }

    #[test]
    fn scan_single_k() {
        let report = bound_ratio_scan(1, 3, &[1], 1, 0.5).unwrap();
        assert_eq!(report.per_k.len(), 1);
        let expected = (1..3)
            .map(|r| {
                chi_multiplier(1, r, 3, &matrix_hk(0, 1).unwrap())
                    .unwrap()
                    .norm()
            })
            .fold(0.0, f64::max);
        assert!((report.max_ratio - expected).abs() < 1e-14);
    }

    #[test]
    fn scan_is_monotone_in_k_max() {
        let small = bound_ratio_scan(1, 3, &[1, 5], 20, 0.1).unwrap();
        let large = bound_ratio_scan(1, 3, &[1, 5], 40, 0.1).unwrap();
        assert!(large.max_ratio >= small.max_ratio);
        assert_eq!(&large.per_k[..20], &small.per_k[..]);
    }

    #[test]
    fn slope_fit_recovers_power_law() {
        let pts: Vec<(f64, f64)> = (1..50)
            .map(|k| ((k as f64).ln(), 0.5 * (k as f64).ln() + 2.0))
            .collect();
        assert!((least_squares_slope(&pts) - 0.5).abs() < 1e-12);
    }
}
