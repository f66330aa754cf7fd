//! Truncated Rademacher-type series for `a_{j,N}(n)`:
//!
//! ```text
//! S_J = −(2πi/√g) Σ_{k=1}^{J} Σ_{r=1}^{N−1} Σ_{κ=0}^{k−1} K_{k,j,N}(n,r,κ)/k²
//!       · P.V.∫_{−√(1/24N)}^{√(1/24N)} √(1/24 − Nx²) cot(π(κ + r/2N − x)/k)
//!                                    · I₁((4π√g/k) √(1/24 − Nx²)) dx
//! ```
//!
//! with `g = n + j²/4N − 1/24`. The cotangent has a pole inside the range
//! only for `κ = 0` and `6r² < N`, at `x = r/2N`.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::ToPrimitive;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::kloosterman::{row_from_multipliers, MultiplierRow};
use crate::series_oracle::{coefficient_exact, CoefficientParams};
use crate::special_functions::{i1_series, Quadrature};

/// One line of a convergence study.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceRow {
    pub truncation: usize,
    pub value_real: f64,
    pub value_imag: f64,
    pub oracle: BigInt,
    pub abs_error: f64,
}

/// The nine `(j, N, n)` cases of the reference convergence table.
pub const REFERENCE_ROWS: [(i64, i64, i64); 9] = [
    (1, 3, 3),
    (1, 3, 10),
    (1, 3, 18),
    (5, 8, 3),
    (5, 8, 10),
    (5, 8, 18),
    (3, 10, 3),
    (3, 10, 10),
    (3, 10, 18),
];

/// Truncation depths of the reference convergence table.
pub const REFERENCE_TRUNCATIONS: [usize; 5] = [1, 3, 20, 25, 50];

/// Half-width `√(1/24N)` of the integration range.
pub fn half_width(n_level: i64) -> f64 {
    (1.0 / (24.0 * n_level as f64)).sqrt()
}

/// `true` when the cotangent kernel has its pole inside the integration range.
pub fn has_pole(kappa: i64, r: i64, n_level: i64) -> bool {
    kappa == 0 && 6 * r * r < n_level
}

/// The inner integral for one `(k, κ, r)`, as a principal value when the
/// kernel has a pole.
pub fn term_integral(
    k: i64,
    kappa: i64,
    r: i64,
    params: &CoefficientParams,
    quad: &Quadrature,
) -> Result<f64> {
    params.check_convergent()?;
    if k < 1 {
        return Err(Error::NonPositiveModulus(k));
    }
    if !(0..k).contains(&kappa) {
        return Err(Error::InvalidArgument(format!(
            "kappa = {kappa} outside [0, {k})"
        )));
    }
    let n_level = params.n_level;
    if !(1..n_level).contains(&r) {
        return Err(Error::IndexOutOfRange {
            index: r,
            max: n_level - 1,
        });
    }
    let integrand = TermIntegrand::new(k, kappa, r, params);
    let l = half_width(n_level);
    if has_pole(kappa, r, n_level) {
        let pole = r as f64 / (2 * n_level) as f64;
        quad.pv(|x| integrand.eval(x), -l, l, pole)
    } else {
        Ok(quad.smooth(|x| integrand.eval(x), -l, l))
    }
}

/// The integrand with its parameters folded into constants.
struct TermIntegrand {
    n_level: f64,
    shift: f64,
    inv_k: f64,
    bessel_scale: f64,
}

impl TermIntegrand {
    fn new(k: i64, kappa: i64, r: i64, params: &CoefficientParams) -> Self {
        let kf = k as f64;
        TermIntegrand {
            n_level: params.n_level as f64,
            shift: kappa as f64 + r as f64 / (2 * params.n_level) as f64,
            inv_k: 1.0 / kf,
            bessel_scale: 4.0 * std::f64::consts::PI * params.g_f64().sqrt() / kf,
        }
    }

    fn eval(&self, x: f64) -> f64 {
        let w = (1.0 / 24.0 - self.n_level * x * x).max(0.0).sqrt();
        let theta = std::f64::consts::PI * (self.shift - x) * self.inv_k;
        let cot = theta.cos() / theta.sin();
        w * cot * i1_series(self.bessel_scale * w)
    }
}

/// Contribution `Σ_r Σ_κ K(n,r,κ)/k² · I(k,κ,r)` of a single `k`,
/// summed in ascending `r`, then `κ`.
pub fn k_term(k: i64, params: &CoefficientParams, quad: &Quadrature) -> Result<Complex64> {
    params.check_convergent()?;
    let (j, n_level, n) = (params.j, params.n_level, params.n);
    let k2 = (k * k) as f64;
    let mut acc = Complex64::new(0.0, 0.0);
    for r in 1..n_level {
        let row = MultiplierRow::new(k, j, r, n_level)?;
        let sums = row_from_multipliers(&row, j, n_level, n, r);
        for (kappa, kl) in sums.into_iter().enumerate() {
            let integral = term_integral(k, kappa as i64, r, params, quad)?;
            acc += kl * (integral / k2);
        }
    }
    Ok(acc)
}

/// `−2πi/√g`
pub fn prefactor(params: &CoefficientParams) -> Complex64 {
    Complex64::new(0.0, -2.0 * std::f64::consts::PI / params.g_f64().sqrt())
}

/// `[k_term(1), …, k_term(J)]`, evaluated in parallel and returned in order.
pub fn k_terms(
    params: &CoefficientParams,
    truncation: usize,
    quad: &Quadrature,
) -> Result<Vec<Complex64>> {
    params.check_convergent()?;
    (1..=truncation as i64)
        .into_par_iter()
        .map(|k| k_term(k, params, quad))
        .collect()
}

/// `S_J`; the real part approximates `a_{j,N}(n)`.
pub fn partial_sum(
    params: &CoefficientParams,
    truncation: usize,
    quad: &Quadrature,
) -> Result<Complex64> {
    if truncation == 0 {
        return Err(Error::InvalidArgument(
            "truncation depth J must be >= 1".into(),
        ));
    }
    let terms = k_terms(params, truncation, quad)?;
    let total: Complex64 = terms.iter().sum();
    Ok(prefactor(params) * total)
}

/// Partial sums for every `J` in `truncations` (ascending), against the
/// exact coefficient.
pub fn convergence_table(
    params: &CoefficientParams,
    truncations: &[usize],
    quad: &Quadrature,
) -> Result<Vec<ConvergenceRow>> {
    if truncations.is_empty() {
        return Ok(Vec::new());
    }
    if truncations[0] == 0 || truncations.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidArgument(
            "truncation list must be strictly ascending and start at >= 1".into(),
        ));
    }
    let max_j = *truncations.last().expect("nonempty");
    let terms = k_terms(params, max_j, quad)?;
    let oracle = coefficient_exact(params);
    let oracle_f = oracle.to_f64().unwrap_or(f64::NAN);
    let pre = prefactor(params);
    let mut rows = Vec::with_capacity(truncations.len());
    let mut running = Complex64::new(0.0, 0.0);
    let mut next = 0usize;
    for &jt in truncations {
        while next < jt {
            running += terms[next];
            next += 1;
        }
        let value = pre * running;
        rows.push(ConvergenceRow {
            truncation: jt,
            value_real: value.re,
            value_imag: value.im,
            oracle: oracle.clone(),
            abs_error: (value.re - oracle_f).abs(),
        });
    }
    Ok(rows)
}
