//! Cross-identity suites: every closed form against an independent
//! evaluation, reported as a maximum residual against a fixed tolerance.

use crate::arith::gcd;
use crate::error::Result;
use crate::gauss::{
    gauss_sum_direct, gauss_sum_even_closed, gauss_sum_odd_closed, sin_sum_identity_check,
};
use crate::kloosterman::{sum_with_multipliers, KloostermanKey, MultiplierRow};
use crate::multipliers::{
    chi_multiplier, chi_via_gauss_odd, eta_multiplier_closed, eta_multiplier_dedekind, matrix_hk,
};
use crate::special_functions::integrate_pv;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Grid {
    Default,
    Large,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteResult {
    pub name: &'static str,
    pub cases: usize,
    pub max_residual: f64,
    pub tolerance: f64,
}

impl SuiteResult {
    pub fn passed(&self) -> bool {
        self.max_residual <= self.tolerance
    }
}

#[derive(Default)]
struct Tally {
    cases: usize,
    max: f64,
}

impl Tally {
    fn push(&mut self, residual: f64) {
        self.cases += 1;
        // NaN must fail the suite, so it wins the max
        if residual.is_nan() || residual > self.max {
            self.max = residual;
        }
    }

    fn finish(self, name: &'static str, tolerance: f64) -> SuiteResult {
        SuiteResult {
            name,
            cases: self.cases,
            max_residual: self.max,
            tolerance,
        }
    }
}

fn units(k: i64) -> impl Iterator<Item = i64> {
    (0..k).filter(move |&h| gcd(h, k) == 1)
}

/// Dedekind-sum and Kronecker-symbol forms of `ν_η(M_{h,k})`, `k ≤ k_max`.
pub fn eta_dual(k_max: i64) -> Result<SuiteResult> {
    let mut t = Tally::default();
    for k in 1..=k_max {
        for h in units(k) {
            let m = matrix_hk(h, k)?;
            t.push((eta_multiplier_dedekind(&m)? - eta_multiplier_closed(&m)?).norm());
        }
    }
    Ok(t.finish("eta_dual", 1e-12))
}

/// `G(hN, hj ± r, k)` closed form against the direct sum, odd `k`.
pub fn gauss_odd(k_max: i64, n_max: i64) -> Result<SuiteResult> {
    let mut t = Tally::default();
    for k in (1..=k_max).step_by(2) {
        for n_level in 2..=n_max {
            for h in units(k) {
                for j in 1..n_level {
                    for r in 1..n_level {
                        for sign in [1, -1] {
                            let closed = gauss_sum_odd_closed(h, n_level, j, r, k, sign)?;
                            let direct = gauss_sum_direct(h * n_level, h * j + sign as i64 * r, k);
                            t.push((closed - direct).norm());
                        }
                    }
                }
            }
        }
    }
    Ok(t.finish("gauss_odd", 1e-9))
}

/// `G(hN, b, k)` closed form against the direct sum, even `k`, odd `h`.
pub fn gauss_even(k_max: i64, n_max: i64) -> Result<SuiteResult> {
    let mut t = Tally::default();
    for k in (2..=k_max).step_by(2) {
        for n_level in 2..=n_max {
            for h in units(k) {
                for b in -2 * n_level..=2 * n_level {
                    let closed = gauss_sum_even_closed(h, n_level, b, k)?;
                    t.push((closed - gauss_sum_direct(h * n_level, b, k)).norm());
                }
            }
        }
    }
    Ok(t.finish("gauss_even", 1e-9))
}

/// `G(a, b, cd) = G(ac, b, d) G(ad, b, c)` for coprime `c, d`.
pub fn gauss_multiplicativity(cd_max: i64, a_max: i64) -> SuiteResult {
    let mut t = Tally::default();
    for c in 1..=cd_max {
        for d in c..=cd_max {
            if gcd(c, d) != 1 {
                continue;
            }
            for a in 1..=a_max {
                for b in 0..4 {
                    let lhs = gauss_sum_direct(a, b, c * d);
                    let rhs = gauss_sum_direct(a * c, b, d) * gauss_sum_direct(a * d, b, c);
                    t.push((lhs - rhs).norm());
                }
            }
        }
    }
    t.finish("gauss_multiplicativity", 1e-9)
}

/// The `sin`-weighted quadratic sum rewritten as two Gauss sums.
pub fn sin_sum(k_max: i64, n_max: i64) -> Result<SuiteResult> {
    let mut t = Tally::default();
    for k in 1..=k_max {
        for n_level in 2..=n_max {
            for h in units(k) {
                for j in 1..n_level {
                    for r in 1..n_level {
                        t.push(sin_sum_identity_check(h, k, j, r, n_level)?);
                    }
                }
            }
        }
    }
    Ok(t.finish("sin_sum", 1e-9))
}

/// `χ_{j,r}(N, M_{h,k})` from the multiplier definition and from Gauss sums,
/// odd `k`.
pub fn chi_gauss(k_max: i64, levels: &[i64]) -> Result<SuiteResult> {
    let mut t = Tally::default();
    for k in (1..=k_max).step_by(2) {
        for &n_level in levels {
            for h in units(k) {
                let m = matrix_hk(h, k)?;
                for j in 1..n_level {
                    for r in 1..n_level {
                        let a = chi_multiplier(j, r, n_level, &m)?;
                        let b = chi_via_gauss_odd(h, k, j, r, n_level)?;
                        t.push((a - b).norm());
                    }
                }
            }
        }
    }
    Ok(t.finish("chi_gauss", 1e-9))
}

/// `K(κ) = K(κ + k)` with the shifted `κ` fed unreduced into the phase.
pub fn kloosterman_periodicity(
    k_max: i64,
    cases: &[(i64, i64)],
    n_max: i64,
) -> Result<SuiteResult> {
    let mut t = Tally::default();
    for &(j, n_level) in cases {
        for k in 1..=k_max {
            for r in 1..n_level {
                let row = MultiplierRow::new(k, j, r, n_level)?;
                for n in 1..=n_max {
                    for kappa in 0..k {
                        let key = KloostermanKey::new(k, j, r, n_level, n, kappa)?;
                        let base = sum_with_multipliers(&key, &row.terms);
                        for shift in [k, 3 * k] {
                            let shifted = KloostermanKey {
                                kappa: kappa + shift,
                                ..key
                            };
                            t.push((base - sum_with_multipliers(&shifted, &row.terms)).norm());
                        }
                    }
                }
            }
        }
    }
    Ok(t.finish("kloosterman_periodicity", 1e-12))
}

/// Principal values of integrands odd about the pole, which vanish.
pub fn pv_oddness() -> Result<SuiteResult> {
    let mut t = Tally::default();
    t.push(integrate_pv(|x| 1.0 / x, -1.0, 1.0, 0.0)?.abs());
    t.push(integrate_pv(|x| x.cos() / x, -2.0, 2.0, 0.0)?.abs());
    for pole in [-0.3, 0.1, 0.45] {
        let f = move |x: f64| (1.0 + (x - pole).powi(2)).exp() / (x - pole);
        t.push(integrate_pv(f, pole - 0.5, pole + 0.5, pole)?.abs());
        let g = move |x: f64| 1.0 / (x - pole).tan();
        t.push(integrate_pv(g, pole - 1.0, pole + 1.0, pole)?.abs());
    }
    Ok(t.finish("pv_oddness", 1e-10))
}

/// Runs every suite on the chosen grid.
pub fn run_all(grid: Grid) -> Result<Vec<SuiteResult>> {
    let (eta_k, odd_k, odd_n, even_k, even_n, cd, sin_k, sin_n, chi_k, kl_k) = match grid {
        Grid::Default => (30, 25, 10, 24, 8, 30, 20, 8, 21, 40),
        Grid::Large => (60, 41, 12, 40, 10, 40, 30, 10, 31, 60),
    };
    Ok(vec![
        eta_dual(eta_k)?,
        gauss_odd(odd_k, odd_n)?,
        gauss_even(even_k, even_n)?,
        gauss_multiplicativity(cd, 10),
        sin_sum(sin_k, sin_n)?,
        chi_gauss(chi_k, &[3, 4, 5, 8, 10])?,
        kloosterman_periodicity(kl_k, &[(1, 3), (5, 8)], 3)?,
        pv_oddness()?,
    ])
}

/// `true` when every suite is under its tolerance.
pub fn all_passed(results: &[SuiteResult]) -> bool {
    results.iter().all(SuiteResult::passed)
}
