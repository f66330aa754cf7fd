//! Generalized quadratic Gauss sums `G(a, b, c) = Σ_{s mod c} e((a s² + b s)/c)`.
//!
//! [`gauss_sum_direct`] is the defining sum. The closed forms reduce by
//! `g = gcd(a, c)` and then complete the square; the odd-modulus case uses
//! `ε_c √c (a/c)` and the 2-power case `(1 + i) ε_a⁻¹ (2^m/a) 2^{m/2}`.
//! Even moduli are split into odd part and 2-power part through
//! `G(a, b, cd) = G(ac, b, d) G(ad, b, c)` for coprime `c`, `d`.

use num_complex::Complex64;

use crate::arith::{epsilon_odd, gcd, kronecker, neg_mod_inverse, root_of_unity, v2};
use crate::error::{Error, Result};

/// Defining sum, one root of unity per residue.
pub fn gauss_sum_direct(a: i64, b: i64, c: i64) -> Complex64 {
    assert!(c >= 1, "modulus must be positive");
    let (a, b, c) = (a as i128, b as i128, c as i128);
    (0..c)
        .map(|s| root_of_unity((a * s % c) * s + b * s, c))
        .sum()
}

/// Closed form of `G(a, b, c)` for odd `c ≥ 1` and any integers `a`, `b`.
pub(crate) fn odd_modulus_closed(a: i64, b: i64, c: i64) -> Complex64 {
    debug_assert!(c >= 1 && c % 2 == 1);
    let g = gcd(a, c);
    if b.rem_euclid(g) != 0 {
        return Complex64::new(0.0, 0.0);
    }
    let (a, b, c) = (a / g, b / g, c / g);
    // ψ* with 4ψ*a ≡ 1 (mod c), assembled as [4]'[a]'.
    let psi = if c == 1 {
        0
    } else {
        let four = neg_mod_inverse(4, c).expect("c odd") as i128;
        let inv_a = neg_mod_inverse(a, c).expect("a coprime to c") as i128;
        (four * inv_a).rem_euclid(c as i128)
    };
    let b = b as i128;
    let phase = root_of_unity(-(psi * (b * b).rem_euclid(c as i128)), c as i128);
    let legendre = f64::from(kronecker(a, c));
    epsilon_odd(c) * (g as f64 * (c as f64).sqrt() * legendre) * phase
}

/// Closed form of `G(a, b, 2^nu)` for any integers `a`, `b` and `nu ≥ 1`.
pub(crate) fn two_power_closed(a: i64, b: i64, nu: u32) -> Complex64 {
    let zero = Complex64::new(0.0, 0.0);
    let modulus = 1i64 << nu;
    let alpha = v2(a);
    if alpha >= nu {
        return if b.rem_euclid(modulus) == 0 {
            Complex64::new(modulus as f64, 0.0)
        } else {
            zero
        };
    }
    let scale = 1i64 << alpha;
    if b.rem_euclid(scale) != 0 {
        return zero;
    }
    let (a_odd, b_red, m) = (a >> alpha, b / scale, nu - alpha);
    if m == 1 {
        return if b_red.rem_euclid(2) == 1 {
            Complex64::new(modulus as f64, 0.0)
        } else {
            zero
        };
    }
    if b_red.rem_euclid(2) == 1 {
        return zero;
    }
    let half = (b_red / 2) as i128;
    let reduced = 1i128 << m;
    let a_inv = {
        let neg = neg_mod_inverse(a_odd, 1i64 << m).expect("odd unit mod 2^m") as i128;
        (-neg).rem_euclid(reduced)
    };
    let shift = root_of_unity(-(a_inv * (half * half).rem_euclid(reduced)), reduced);
    let legendre = f64::from(kronecker(1i64 << m, a_odd));
    let magnitude = scale as f64 * ((1i64 << m) as f64).sqrt() * legendre;
    Complex64::new(1.0, 1.0) / epsilon_odd(a_odd) * magnitude * shift
}

/// `G(hN, hj ± r, k)` for odd `k` through the reduced-modulus closed form.
pub fn gauss_sum_odd_closed(
    h: i64,
    n_level: i64,
    j: i64,
    r: i64,
    k: i64,
    sign: i32,
) -> Result<Complex64> {
    if k < 1 {
        return Err(Error::NonPositiveModulus(k));
    }
    if k % 2 == 0 {
        return Err(Error::EvenModulus(k));
    }
    if gcd(h, k) != 1 {
        return Err(Error::NotCoprime { a: h, b: k });
    }
    let b = h * j + i64::from(sign.signum()) * r;
    Ok(odd_modulus_closed(h * n_level, b, k))
}

/// `G(hN, b, k)` for even `k = 2^ν μ`, assembled as `G(hN 2^ν, b, μ) · G(hN μ, b, 2^ν)`.
pub fn gauss_sum_even_closed(h: i64, n_level: i64, b: i64, k: i64) -> Result<Complex64> {
    if k < 1 {
        return Err(Error::NonPositiveModulus(k));
    }
    if k % 2 == 1 {
        return Err(Error::OddModulus(k));
    }
    if gcd(h, k) != 1 {
        return Err(Error::NotCoprime { a: h, b: k });
    }
    let nu = v2(k);
    let mu = k >> nu;
    let a = h * n_level;
    let odd_part = odd_modulus_closed(a * (1i64 << nu), b, mu);
    let two_part = two_power_closed(a * mu, b, nu);
    Ok(odd_part * two_part)
}

/// `|LHS − RHS|` for the rewriting of the `sin`-weighted quadratic sum
/// into two Gauss sums, both sides by direct summation.
pub fn sin_sum_identity_check(h: i64, k: i64, j: i64, r: i64, n_level: i64) -> Result<f64> {
    let hp = neg_mod_inverse(h, k)?;
    let (hi, hpi, ji, ri, ni, ki) = (
        h as i128,
        hp as i128,
        j as i128,
        r as i128,
        n_level as i128,
        k as i128,
    );
    let den = 4 * ni * ki;
    let mut lhs = Complex64::new(0.0, 0.0);
    for s in 0..ki {
        let m = 2 * ni * s + ji;
        // exp(-(πi/2Nk)(−h m² + h' r²)) = e((h m² − h' r²)/(4Nk))
        let z = root_of_unity(hi * m * m - hpi * ri * ri, den);
        let arg = std::f64::consts::PI * ((ri * m) as f64) / ((ni * ki) as f64);
        lhs += z * arg.sin();
    }
    let plus = root_of_unity(hi * ji * ji - hpi * ri * ri + 2 * ri * ji, den)
        * gauss_sum_direct(h * n_level, h * j + r, k);
    let minus = root_of_unity(hi * ji * ji - hpi * ri * ri - 2 * ri * ji, den)
        * gauss_sum_direct(h * n_level, h * j - r, k);
    let rhs = (plus - minus) / Complex64::new(0.0, 2.0);
    Ok((lhs - rhs).norm())
}
