//! Exact integer and rational primitives: gcd, negative modular inverses,
//! the Kronecker symbol, Dedekind sums, `ε_m`, partition numbers, and the
//! exact root-of-unity phase used throughout the crate.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Exact rational number with a positive, coprime denominator.
pub type ExactRational = BigRational;

pub fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.unsigned_abs(), b.unsigned_abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a as i64
}

/// Modular inverse of `h` mod `k` in `[0, k)`, or `None` if it does not exist.
fn mod_inverse(h: i128, k: i128) -> Option<i128> {
    let (mut r0, mut r1) = (h.rem_euclid(k), k);
    let (mut s0, mut s1) = (1i128, 0i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    (r0 == 1 || k == 1).then(|| s0.rem_euclid(k))
}

/// Returns `h'` in `[0, k)` with `h·h' ≡ −1 (mod k)`.
pub fn neg_mod_inverse(h: i64, k: i64) -> Result<i64> {
    if k < 1 {
        return Err(Error::NonPositiveModulus(k));
    }
    if gcd(h, k) != 1 {
        return Err(Error::NotCoprime { a: h, b: k });
    }
    if k == 1 {
        return Ok(0);
    }
    let inv = mod_inverse(h as i128, k as i128).expect("coprime arguments");
    Ok((-inv).rem_euclid(k as i128) as i64)
}

/// Negative inverse of `h` modulo `x·k`; reduces to [`neg_mod_inverse`] mod `k`.
pub fn neg_mod_inverse_lifted(h: i64, k: i64, x: i64) -> Result<i64> {
    if x < 1 {
        return Err(Error::NonPositiveModulus(x));
    }
    let modulus = k
        .checked_mul(x)
        .ok_or_else(|| Error::InvalidArgument(format!("modulus {k}·{x} overflows")))?;
    neg_mod_inverse(h, modulus)
}

/// Kronecker symbol `(a/n)`, defined for all integers.
pub fn kronecker(a: i64, n: i64) -> i32 {
    let (mut a, mut n) = (a as i128, n as i128);
    if n == 0 {
        return i32::from(a.abs() == 1);
    }
    if a % 2 == 0 && n % 2 == 0 {
        return 0;
    }
    let mut k = 1i32;
    let v = n.trailing_zeros();
    n >>= v;
    if v % 2 == 1 {
        // (a/2) = 0, 1, 0, -1, 0, -1, 0, 1 for a mod 8
        match a.rem_euclid(8) {
            3 | 5 => k = -k,
            _ => {}
        }
    }
    if n < 0 {
        n = -n;
        if a < 0 {
            k = -k;
        }
    }
    // Jacobi symbol for odd positive n.
    a = a.rem_euclid(n);
    while a != 0 {
        let v = a.trailing_zeros();
        a >>= v;
        if v % 2 == 1 && matches!(n % 8, 3 | 5) {
            k = -k;
        }
        if a % 4 == 3 && n % 4 == 3 {
            k = -k;
        }
        (a, n) = (n % a, a);
    }
    if n == 1 {
        k
    } else {
        0
    }
}

/// Dedekind sum `s(h, k)` evaluated exactly through the reciprocity law.
pub fn dedekind_sum(h: i64, k: i64) -> Result<ExactRational> {
    if k < 1 {
        return Err(Error::NonPositiveModulus(k));
    }
    if gcd(h, k) != 1 {
        return Err(Error::NotCoprime { a: h, b: k });
    }
    // s(h, k) = sign * s(|h| mod k, k), and for 0 < h < k:
    // s(h, k) + s(k, h) = (h/k + k/h + 1/(hk))/12 - 1/4.
    let mut h = h.rem_euclid(k);
    let mut k = k;
    let mut acc = ExactRational::zero();
    let mut sign = BigInt::one();
    let twelve = BigInt::from(12);
    let quarter = ExactRational::new(BigInt::one(), BigInt::from(4));
    while h != 0 && k != 1 {
        let (hb, kb) = (BigInt::from(h), BigInt::from(k));
        let recip = (ExactRational::new(hb.clone(), kb.clone())
            + ExactRational::new(kb.clone(), hb.clone())
            + ExactRational::new(BigInt::one(), &hb * &kb))
            / ExactRational::from_integer(twelve.clone())
            - &quarter;
        acc += ExactRational::from_integer(sign.clone()) * recip;
        sign = -sign;
        (h, k) = (k % h, h);
    }
    Ok(acc)
}

/// `ε_m`: 1 for `m ≡ 1 (mod 4)`, `i` for `m ≡ 3 (mod 4)`.
pub fn epsilon_m(m: i64) -> Result<Complex64> {
    if m < 1 || m % 2 == 0 {
        return Err(Error::EvenArgument(m));
    }
    Ok(epsilon_odd(m))
}

/// `ε_m` for any odd `m`, classified by `m mod 4`.
pub(crate) fn epsilon_odd(m: i64) -> Complex64 {
    debug_assert!(m % 2 != 0);
    if m.rem_euclid(4) == 1 {
        Complex64::new(1.0, 0.0)
    } else {
        Complex64::new(0.0, 1.0)
    }
}

/// `exp(2πi·num/den)` with the fraction reduced to `(−1/2, 1/2]` before
/// it is converted to floating point.
pub fn root_of_unity(num: i128, den: i128) -> Complex64 {
    assert!(den > 0, "root_of_unity requires a positive denominator");
    let mut r = num.rem_euclid(den);
    if 2 * r > den {
        r -= den;
    }
    let theta = std::f64::consts::TAU * (r as f64) / (den as f64);
    Complex64::new(theta.cos(), theta.sin())
}

/// `exp(2πi·t)` for an exact rational `t`, reduced mod 1 exactly.
pub fn phase(t: &ExactRational) -> Complex64 {
    let den = t.denom();
    let num = t.numer().mod_floor(den);
    match (num.to_i128(), den.to_i128()) {
        (Some(n), Some(d)) => root_of_unity(n, d),
        _ => {
            let frac = ExactRational::new(num, den.clone());
            let x = frac.to_f64().unwrap_or(0.0);
            let theta = std::f64::consts::TAU * x;
            Complex64::new(theta.cos(), theta.sin())
        }
    }
}

/// 2-adic valuation; `v2(0)` is reported as 64.
pub(crate) fn v2(x: i64) -> u32 {
    if x == 0 {
        64
    } else {
        x.trailing_zeros()
    }
}

/// Partition numbers `p(0..=n)`, built once with Euler's pentagonal
/// recurrence and read-only afterwards.
#[derive(Debug, Clone)]
pub struct PartitionTable {
    values: Vec<BigInt>,
}

impl PartitionTable {
    pub fn up_to(n: usize) -> Self {
        let mut table = PartitionTable {
            values: vec![BigInt::one()],
        };
        table.extend_to(n);
        table
    }

    /// Grows the table so that `p(n)` is available.
    pub fn extend_to(&mut self, n: usize) {
        for m in self.values.len()..=n {
            let mut acc = BigInt::zero();
            for i in 1.. {
                let g1 = i * (3 * i - 1) / 2;
                if g1 > m {
                    break;
                }
                let positive = i % 2 == 1;
                let mut term = self.values[m - g1].clone();
                let g2 = i * (3 * i + 1) / 2;
                if g2 <= m {
                    term += &self.values[m - g2];
                }
                if positive {
                    acc += term;
                } else {
                    acc -= term;
                }
            }
            self.values.push(acc);
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// `p(n)`, or `None` if `n` is beyond the table.
    pub fn get(&self, n: usize) -> Option<&BigInt> {
        self.values.get(n)
    }
}

/// `p(n)` as an exact integer.
pub fn partition(n: usize) -> BigInt {
    PartitionTable::up_to(n).values.swap_remove(n)
}

/// Helper for callers that need `|x|` of an `ExactRational` as `f64`.
pub(crate) fn rational_to_f64(x: &ExactRational) -> f64 {
    x.to_f64().unwrap_or_else(|| {
        if x.is_negative() {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        }
    })
}
