//! `SL₂(ℤ)` matrices and the multiplier systems attached to `η` and to the
//! false theta functions `F_{j,N}`.
//!
//! All phases are assembled as exact fractions of a full turn and reduced
//! mod 1 before they are exponentiated.

use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;

use crate::arith::{dedekind_sum, gcd, kronecker, neg_mod_inverse, phase, root_of_unity};
use crate::error::{Error, Result};
use crate::gauss::gauss_sum_odd_closed;

/// Integer 2×2 matrix with determinant 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SL2Matrix {
    a: i64,
    b: i64,
    c: i64,
    d: i64,
}

impl SL2Matrix {
    pub const IDENTITY: SL2Matrix = SL2Matrix {
        a: 1,
        b: 0,
        c: 0,
        d: 1,
    };
    pub const S: SL2Matrix = SL2Matrix {
        a: 0,
        b: -1,
        c: 1,
        d: 0,
    };
    pub const T: SL2Matrix = SL2Matrix {
        a: 1,
        b: 1,
        c: 0,
        d: 1,
    };

    pub fn new(a: i64, b: i64, c: i64, d: i64) -> Result<Self> {
        let det = (a as i128) * (d as i128) - (b as i128) * (c as i128);
        if det != 1 {
            return Err(Error::NotUnimodular { a, b, c, d });
        }
        Ok(SL2Matrix { a, b, c, d })
    }

    pub fn a(&self) -> i64 {
        self.a
    }
    pub fn b(&self) -> i64 {
        self.b
    }
    pub fn c(&self) -> i64 {
        self.c
    }
    pub fn d(&self) -> i64 {
        self.d
    }

    pub fn entries(&self) -> [[i64; 2]; 2] {
        [[self.a, self.b], [self.c, self.d]]
    }

    pub fn inverse(&self) -> SL2Matrix {
        SL2Matrix {
            a: self.d,
            b: -self.b,
            c: -self.c,
            d: self.a,
        }
    }

    /// Möbius action `τ ↦ (aτ + b)/(cτ + d)`.
    pub fn act(&self, tau: Complex64) -> Complex64 {
        (tau * self.a as f64 + self.b as f64) / (tau * self.c as f64 + self.d as f64)
    }
}

impl std::ops::Mul for SL2Matrix {
    type Output = SL2Matrix;

    fn mul(self, rhs: SL2Matrix) -> SL2Matrix {
        SL2Matrix {
            a: self.a * rhs.a + self.b * rhs.c,
            b: self.a * rhs.b + self.b * rhs.d,
            c: self.c * rhs.a + self.d * rhs.c,
            d: self.c * rhs.b + self.d * rhs.d,
        }
    }
}

impl fmt::Display for SL2Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{}, {}], [{}, {}]]", self.a, self.b, self.c, self.d)
    }
}

/// `M_{h,k} = [[h', −(hh'+1)/k], [k, −h]]` with `hh' ≡ −1 (mod k)`.
pub fn matrix_hk(h: i64, k: i64) -> Result<SL2Matrix> {
    if k < 1 {
        return Err(Error::NonPositiveModulus(k));
    }
    let hp = neg_mod_inverse(h, k)?;
    let b = -((h as i128 * hp as i128 + 1) / k as i128) as i64;
    SL2Matrix::new(hp, b, k, -h)
}

pub fn matrix_inverse(m: &SL2Matrix) -> SL2Matrix {
    m.inverse()
}

/// `ν_η(M) = exp(πi((a+d)/12c − 1/4 + s(−d,c)))` for `c > 0`.
pub fn eta_multiplier_dedekind(m: &SL2Matrix) -> Result<Complex64> {
    if m.c <= 0 {
        return Err(Error::NonPositiveC(m.c));
    }
    let s = dedekind_sum(-m.d, m.c)?;
    // in turns: (a+d)/(24c) − 1/8 + s/2
    let turns = BigRational::new(BigInt::from(m.a + m.d), BigInt::from(24 * m.c))
        - BigRational::new(BigInt::from(1), BigInt::from(8))
        + s / BigRational::from_integer(BigInt::from(2));
    Ok(phase(&turns))
}

/// Kronecker-symbol representation of `ν_η`, with separate odd-`c` and
/// even-`c` branches.
pub fn eta_multiplier_closed(m: &SL2Matrix) -> Result<Complex64> {
    let (a, b, c, d) = (m.a as i128, m.b as i128, m.c as i128, m.d as i128);
    if m.c == 0 && m.d != 1 {
        return Err(Error::UndefinedCase { c: m.c, d: m.d });
    }
    if c % 2 != 0 {
        let sign = kronecker(m.d, m.c.abs());
        let e = (a + d) * c - b * d * (c * c - 1) - 3 * c;
        Ok(root_of_unity(e, 24) * f64::from(sign))
    } else {
        let sign = kronecker(m.c, m.d);
        let e = a * c * (1 - d * d) + d * (b - c + 3) - 3;
        Ok(root_of_unity(e, 24) * f64::from(sign))
    }
}

fn check_index(index: i64, n_level: i64) -> Result<()> {
    if n_level < 2 {
        return Err(Error::InvalidLevel(n_level));
    }
    if !(1..n_level).contains(&index) {
        return Err(Error::IndexOutOfRange {
            index,
            max: n_level - 1,
        });
    }
    Ok(())
}

/// The false-theta multiplier `ψ_{j,r}(N, M)`.
pub fn psi_multiplier(j: i64, r: i64, n_level: i64, m: &SL2Matrix) -> Result<Complex64> {
    check_index(j, n_level)?;
    check_index(r, n_level)?;
    let (a, b, c, d) = (m.a as i128, m.b as i128, m.c as i128, m.d as i128);
    let (ji, ri, ni) = (j as i128, r as i128, n_level as i128);
    if c == 0 {
        if j != r {
            return Ok(Complex64::new(0.0, 0.0));
        }
        // e(ab j²/4N) · e(−(1 − sgn d)/8)
        let sign_term = if d > 0 { 0 } else { -2 };
        return Ok(root_of_unity(a * b * ji * ji, 4 * ni) * root_of_unity(sign_term, 8));
    }
    let abs_c = c.abs();
    let sgn_c = c.signum();
    // exp(πi/(2Nc)(a m² + d r²)) = e((a m² + d r²)·sgn(c) / (4N|c|))
    let den = 4 * ni * abs_c;
    let mut sum = Complex64::new(0.0, 0.0);
    for l in 0..abs_c {
        let mm = 2 * ni * l + ji;
        let num = sgn_c * ((a * mm % den) * mm + d * ri * ri);
        let s = (std::f64::consts::PI * ((ri * mm) % (2 * ni * abs_c)) as f64
            / (ni * abs_c) as f64)
            .sin();
        sum += root_of_unity(num, den) * s;
    }
    let prefactor = root_of_unity(-3 * sgn_c, 8) * (2.0 / (n_level as f64 * abs_c as f64)).sqrt();
    Ok(prefactor * sum)
}

/// `χ_{j,r}(N, M) = ν_η(M) · ψ_{j,r}(N, M⁻¹)`; requires `c > 0`.
pub fn chi_multiplier(j: i64, r: i64, n_level: i64, m: &SL2Matrix) -> Result<Complex64> {
    let nu = eta_multiplier_dedekind(m)?;
    let psi = psi_multiplier(j, r, n_level, &m.inverse())?;
    Ok(nu * psi)
}

/// `χ_{j,r}(N, M_{h,k})` for odd `k`, rebuilt from the closed-form Gauss sums
/// `G(hN, hj ± r, k)` and the Kronecker symbol `(−h/k)`.
pub fn chi_via_gauss_odd(h: i64, k: i64, j: i64, r: i64, n_level: i64) -> Result<Complex64> {
    if k < 1 {
        return Err(Error::NonPositiveModulus(k));
    }
    if k % 2 == 0 {
        return Err(Error::EvenModulus(k));
    }
    if gcd(h, k) != 1 {
        return Err(Error::NotCoprime { a: h, b: k });
    }
    check_index(j, n_level)?;
    check_index(r, n_level)?;
    let hp = neg_mod_inverse(h, k)? as i128;
    let (hi, ki, ji, ri, ni) = (h as i128, k as i128, j as i128, r as i128, n_level as i128);
    let b_entry = (hi * hp + 1) / ki;
    // ((h'−h)k − ((hh'+1)/k)·h(k²−1) − 3k)/24 + 3/8 + (hj² − h'r² ± 2rj)/(4Nk),
    // over the common denominator 96Nk.
    let eta_part = (hp - hi) * ki - b_entry * hi * (ki * ki - 1) - 3 * ki;
    let base = eta_part * 4 * ni * ki + 36 * ni * ki;
    let den = 96 * ni * ki;
    let plus_phase = root_of_unity(base + 24 * (hi * ji * ji - hp * ri * ri + 2 * ri * ji), den);
    let minus_phase = root_of_unity(base + 24 * (hi * ji * ji - hp * ri * ri - 2 * ri * ji), den);
    let g_plus = gauss_sum_odd_closed(h, n_level, j, r, k, 1)?;
    let g_minus = gauss_sum_odd_closed(h, n_level, j, r, k, -1)?;
    let symbol = f64::from(kronecker(-h, k));
    let scale = symbol * (1.0 / (2.0 * n_level as f64 * k as f64)).sqrt();
    let i = Complex64::new(0.0, 1.0);
    Ok((-i * plus_phase * g_plus + i * minus_phase * g_minus) * scale)
}
