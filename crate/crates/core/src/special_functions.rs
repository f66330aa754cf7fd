//! `I₁` Bessel function, Gauss-Legendre rules, composite quadrature and a
//! principal-value integrator for integrands with one simple pole.

use crate::error::{Error, Result};

const BESSEL_MAX_ARG: f64 = 700.0;

/// Modified Bessel function `I₁(z) = Σ (z/2)^{2m+1} / (m!(m+1)!)` for `0 ≤ z ≤ 700`.
pub fn bessel_i1(z: f64) -> Result<f64> {
    if z.is_nan() || z < 0.0 {
        return Err(Error::InvalidArgument(format!(
            "bessel_i1 needs z >= 0, got {z}"
        )));
    }
    if z > BESSEL_MAX_ARG {
        return Err(Error::Overflow(z));
    }
    Ok(i1_series(z))
}

/// Series summation without argument checks.
pub(crate) fn i1_series(z: f64) -> f64 {
    let half = 0.5 * z;
    let q = half * half;
    let mut term = half;
    let mut sum = half;
    if term == 0.0 {
        return 0.0;
    }
    let mut m = 0.0;
    loop {
        term *= q / ((m + 1.0) * (m + 2.0));
        sum += term;
        m += 1.0;
        // terms decrease once m exceeds z/2
        if term < 1e-17 * sum && m > half {
            break;
        }
    }
    sum
}

/// Nodes and weights of the `order`-point Gauss-Legendre rule on `[−1, 1]`,
/// ordered by increasing node.
pub fn gauss_legendre_rule(order: usize) -> Result<Vec<(f64, f64)>> {
    if !(2..=128).contains(&order) {
        return Err(Error::OrderOutOfRange(order));
    }
    let n = order;
    let mut rule = vec![(0.0, 0.0); n];
    for i in 0..n.div_ceil(2) {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let step = p / d;
            x -= step;
            if step.abs() < 1e-16 {
                let (_, d) = legendre_with_derivative(n, x);
                dp = d;
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule[i] = (-x, w);
        rule[n - 1 - i] = (x, w);
    }
    if n % 2 == 1 {
        rule[n / 2].0 = 0.0;
    }
    Ok(rule)
}

/// `(P_n(x), P_n'(x))` by the three-term recurrence.
fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// A Gauss-Legendre rule applied on a fixed number of equal panels.
#[derive(Debug, Clone)]
pub struct Quadrature {
    order: usize,
    panels: usize,
    rule: Vec<(f64, f64)>,
}

impl Default for Quadrature {
    fn default() -> Self {
        Quadrature::new(Self::DEFAULT_ORDER, Self::DEFAULT_PANELS).expect("default rule is valid")
    }
}

impl Quadrature {
    pub const DEFAULT_ORDER: usize = 32;
    pub const DEFAULT_PANELS: usize = 8;

    pub fn new(order: usize, panels: usize) -> Result<Self> {
        if panels == 0 {
            return Err(Error::InvalidArgument(
                "panel count must be positive".into(),
            ));
        }
        Ok(Quadrature {
            order,
            panels,
            rule: gauss_legendre_rule(order)?,
        })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn panels(&self) -> usize {
        self.panels
    }

    /// Composite rule on `[a, b]`.
    pub fn smooth<F: Fn(f64) -> f64>(&self, f: F, a: f64, b: f64) -> f64 {
        let width = (b - a) / self.panels as f64;
        let half = 0.5 * width;
        let mut total = 0.0;
        for p in 0..self.panels {
            let mid = a + (p as f64 + 0.5) * width;
            let panel: f64 = self.rule.iter().map(|&(x, w)| w * f(mid + half * x)).sum();
            total += half * panel;
        }
        total
    }

    /// Principal value across the simple pole at `pole`, by pairing
    /// `f(pole + u) + f(pole − u)` on `[0, m]` with `m = min(pole − a, b − pole)`
    /// and integrating the leftover one-sided interval separately.
    pub fn pv<F: Fn(f64) -> f64>(&self, f: F, a: f64, b: f64, pole: f64) -> Result<f64> {
        if pole == a || pole == b {
            return Err(Error::PoleOnBoundary(pole));
        }
        if !(a < pole && pole < b) {
            return Err(Error::PoleOutsideInterval { a, b, pole });
        }
        let left = pole - a;
        let right = b - pole;
        let m = left.min(right);
        let paired = self.smooth(|u| f(pole + u) + f(pole - u), 0.0, m);
        let rest = if left > right {
            self.smooth(&f, a, pole - m)
        } else if right > left {
            self.smooth(&f, pole + m, b)
        } else {
            0.0
        };
        Ok(paired + rest)
    }
}

/// Composite Gauss-Legendre integral of `f` over `[a, b]`.
pub fn integrate_smooth<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    panels: usize,
    order: usize,
) -> Result<f64> {
    Ok(Quadrature::new(order, panels)?.smooth(f, a, b))
}

/// Cauchy principal value with the default rule (order 32, 8 panels).
pub fn integrate_pv<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, pole: f64) -> Result<f64> {
    Quadrature::default().pv(f, a, b, pole)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Plain term-by-term series with a fixed number of terms.
    fn i1_fixed_terms(z: f64, terms: usize) -> f64 {
        let mut fact_m = 1.0;
        let mut sum = 0.0;
        for m in 0..terms {
            if m > 0 {
                fact_m *= m as f64;
            }
            let fact_m1 = fact_m * (m as f64 + 1.0);
            sum += (z / 2.0).powi(2 * m as i32 + 1) / (fact_m * fact_m1);
        }
        sum
    }

    fn i1_derivative_series(z: f64, terms: usize) -> f64 {
        let mut fact_m = 1.0;
        let mut sum = 0.0;
        for m in 0..terms {
            if m > 0 {
                fact_m *= m as f64;
            }
            let fact_m1 = fact_m * (m as f64 + 1.0);
            sum += (2.0 * m as f64 + 1.0) * 0.5 * (z / 2.0).powi(2 * m as i32) / (fact_m * fact_m1);
        }
        sum
    }

    #[test]
    fn bessel_examples() {
        assert_eq!(bessel_i1(0.0).unwrap(), 0.0);
        let two = i1_fixed_terms(2.0, 30);
        assert!((bessel_i1(2.0).unwrap() - two).abs() <= 1e-13 * two);
        assert!((two - 1.590_636_854_6).abs() < 1e-9);
        let one = i1_fixed_terms(1.0, 30);
        assert!((bessel_i1(1.0).unwrap() - one).abs() <= 1e-13 * one);
        assert!((one - 0.565_159_104_0).abs() < 1e-9);
        assert_eq!(bessel_i1(701.0), Err(Error::Overflow(701.0)));
        assert!(bessel_i1(-1.0).is_err());
    }

    #[test]
    fn bessel_large_argument() {
        // I₁(50) = 2.903078590103557e20
        let v = bessel_i1(50.0).unwrap();
        assert!((v / 2.903_078_590_103_557e20 - 1.0).abs() < 1e-12);
        assert!(bessel_i1(700.0).unwrap().is_finite());
    }

    #[test]
    fn bessel_derivative_check() {
        let h = 1e-5;
        for z in [0.5, 2.0, 10.0] {
            let fd = (bessel_i1(z + h).unwrap() - bessel_i1(z - h).unwrap()) / (2.0 * h);
            let exact = i1_derivative_series(z, 80);
            assert!((fd - exact).abs() <= 1e-6 * exact.max(1.0), "z={z}");
        }
    }

    #[test]
    fn gauss_legendre_examples() {
        let two = gauss_legendre_rule(2).unwrap();
        let node = 1.0 / 3f64.sqrt();
        assert!((two[0].0 + node).abs() < 1e-15 && (two[1].0 - node).abs() < 1e-15);
        assert!((two[0].1 - 1.0).abs() < 1e-15 && (two[1].1 - 1.0).abs() < 1e-15);
        let three = gauss_legendre_rule(3).unwrap();
        let x4: f64 = three.iter().map(|&(x, w)| w * x.powi(4)).sum();
        assert!((x4 - 0.4).abs() < 1e-15);
        for order in 2..=128 {
            let rule = gauss_legendre_rule(order).unwrap();
            let total: f64 = rule.iter().map(|p| p.1).sum();
            assert!((total - 2.0).abs() < 1e-13, "order {order}");
            let top = 2 * order - 1;
            let moment: f64 = rule.iter().map(|&(x, w)| w * x.powi(top as i32 - 1)).sum();
            assert!((moment - 2.0 / top as f64).abs() < 1e-13, "order {order}");
        }
        assert_eq!(gauss_legendre_rule(1), Err(Error::OrderOutOfRange(1)));
        assert_eq!(gauss_legendre_rule(129), Err(Error::OrderOutOfRange(129)));
    }

    #[test]
    fn smooth_examples() {
        assert!((integrate_smooth(|_| 1.0, 0.0, 1.0, 8, 32).unwrap() - 1.0).abs() < 1e-14);
        let c = integrate_smooth(f64::cos, 0.0, std::f64::consts::FRAC_PI_2, 8, 32).unwrap();
        assert!((c - 1.0).abs() < 1e-12);
        let f = |x: f64| x * bessel_i1(x).unwrap();
        let gl = integrate_smooth(f, 0.0, 1.0, 8, 32).unwrap();
        let n = 10_000;
        let hstep = 1.0 / n as f64;
        let mut trap = 0.5 * (f(0.0) + f(1.0));
        for i in 1..n {
            trap += f(i as f64 * hstep);
        }
        trap *= hstep;
        // trapezoid error ~ h²/12·|f'(1) − f'(0)| ≈ 1e-9
        assert!((gl - trap).abs() < 2e-9, "{gl} vs {trap}");
    }

    #[test]
    fn pv_examples() {
        let odd = integrate_pv(|x| 1.0 / x, -1.0, 1.0, 0.0).unwrap();
        assert!(odd.abs() <= 1e-10);
        let ln2 = integrate_pv(|x| 1.0 / x, -1.0, 2.0, 0.0).unwrap();
        assert!((ln2 - std::f64::consts::LN_2).abs() <= 1e-10);
        let a = 0.4;
        let cot = |x: f64| 1.0 / (std::f64::consts::PI * x).tan();
        assert!(integrate_pv(cot, -a, a, 0.0).unwrap().abs() <= 1e-10);
        assert!(matches!(
            integrate_pv(|x| 1.0 / x, 0.0, 1.0, 0.0),
            Err(Error::PoleOnBoundary(_))
        ));
        assert!(matches!(
            integrate_pv(|x| 1.0 / x, 1.0, 2.0, 0.0),
            Err(Error::PoleOutsideInterval { .. })
        ));
    }

    #[test]
    fn pv_left_leftover() {
        // PV ∫_{-2}^{1} dx/x = ln(1/2)
        let v = integrate_pv(|x| 1.0 / x, -2.0, 1.0, 0.0).unwrap();
        assert!((v + std::f64::consts::LN_2).abs() <= 1e-10);
    }

    #[test]
    fn pv_is_linear() {
        let f = |x: f64| x.exp() / (x - 0.3);
        let g = |x: f64| (2.0 * x).cos() / (x - 0.3);
        let (alpha, beta) = (1.7, -0.4);
        let lhs = integrate_pv(|x| alpha * f(x) + beta * g(x), -0.5, 1.2, 0.3).unwrap();
        let rhs = alpha * integrate_pv(f, -0.5, 1.2, 0.3).unwrap()
            + beta * integrate_pv(g, -0.5, 1.2, 0.3).unwrap();
        assert!((lhs - rhs).abs() <= 1e-10);
    }
}
