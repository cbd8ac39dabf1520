//! Modified Bessel function K_ν(x) for real x > 0 and complex order ν.
//!
//! Everything rests on the integral representation
//!   K_ν(x) = ∫₀^∞ e^{−x cosh t} cosh(νt) dt,
//! which converges for every complex ν since the outer factor decays
//! double-exponentially. The integrand is even in t, so the trapezoid rule
//! on a symmetric grid has no odd Euler–Maclaurin corrections and converges
//! spectrally in the step size; step halving reuses previous evaluations.
//!
//! Orders on the imaginary axis (ν = iτ, the spectral-parameter case) keep
//! the integrand real: cosh(iτt) = cos(τt), so a dedicated real-arithmetic
//! path avoids complex overhead in the hot loop.

use crate::error::{Error, Result};
use num_complex::Complex64;

/// e^{−x cosh t} underflows past this exponent budget; tails beyond are dropped.
const EXP_BUDGET: f64 = 760.0;
/// Initial trapezoid step. Halved until two successive levels agree.
const H0: f64 = 0.25;
const MAX_HALVINGS: u32 = 14;

fn check_x(x: f64) -> Result<()> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Domain(format!("bessel_k requires x > 0, got {x}")));
    }
    Ok(())
}

/// Cutoff t_max with x cosh t − |Re ν| t > EXP_BUDGET, found by fixed-point iteration.
fn tail_cutoff(x: f64, re_nu_abs: f64) -> f64 {
    let mut t = ((EXP_BUDGET / x) + 2.0).max(1.001).acosh();
    for _ in 0..6 {
        t = ((EXP_BUDGET + re_nu_abs * t) / x + 1.0).max(1.001).acosh();
    }
    t.max(1.0)
}

/// K_ν(x) for complex ν, absolute accuracy near machine precision.
///
/// Returns 0 for x > 740 (the value underflows f64). Errors on x ≤ 0.
pub fn bessel_k(nu: Complex64, x: f64) -> Result<Complex64> {
    check_x(x)?;
    if x > 740.0 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let t_max = tail_cutoff(x, nu.re.abs());
    let f = |t: f64| -> Complex64 {
        let e = -x * t.cosh();
        if e < -745.0 {
            return Complex64::new(0.0, 0.0);
        }
        ((nu * t).cosh()) * e.exp()
    };

    let mut h = H0;
    // Trapezoid endpoint weight: f(0)/2, interior nodes weight 1.
    let mut sum = 0.5 * f(0.0);
    let mut k = 1u64;
    while (k as f64) * h <= t_max {
        sum += f(k as f64 * h);
        k += 1;
    }
    let mut i_h = sum * h;
    for _ in 0..MAX_HALVINGS {
        let h2 = h * 0.5;
        let mut odd = Complex64::new(0.0, 0.0);
        let mut j = 1u64;
        while (j as f64) * h2 <= t_max {
            odd += f(j as f64 * h2);
            j += 2;
        }
        let i_h2 = i_h * 0.5 + odd * h2;
        let diff = (i_h2 - i_h).norm();
        i_h = i_h2;
        h = h2;
        if diff <= (1e-14 * i_h.norm()).max(1e-15) {
            return Ok(i_h);
        }
    }
    Err(Error::Accuracy(format!(
        "bessel_k(ν={nu}, x={x}) did not converge after {MAX_HALVINGS} halvings"
    )))
}

/// K_{iT}(x): purely imaginary order, real-valued result.
///
/// Same quadrature as [`bessel_k`] but entirely in real arithmetic, since
/// cosh(iTt) = cos(Tt). This is the critical-line workhorse.
pub fn bessel_k_imag_order(t_param: f64, x: f64) -> Result<f64> {
    check_x(x)?;
    if x > 740.0 {
        return Ok(0.0);
    }
    let t_max = tail_cutoff(x, 0.0);
    let f = |t: f64| -> f64 {
        let e = -x * t.cosh();
        if e < -745.0 {
            return 0.0;
        }
        (t_param * t).cos() * e.exp()
    };

    let mut h = H0;
    let mut sum = 0.5 * f(0.0);
    let mut k = 1u64;
    while (k as f64) * h <= t_max {
        sum += f(k as f64 * h);
        k += 1;
    }
    let mut i_h = sum * h;
    for _ in 0..MAX_HALVINGS {
        let h2 = h * 0.5;
        let mut odd = 0.0;
        let mut j = 1u64;
        while (j as f64) * h2 <= t_max {
            odd += f(j as f64 * h2);
            j += 2;
        }
        let i_h2 = i_h * 0.5 + odd * h2;
        let diff = (i_h2 - i_h).abs();
        i_h = i_h2;
        h = h2;
        if diff <= (1e-14 * i_h.abs()).max(1e-15) {
            return Ok(i_h);
        }
    }
    Err(Error::Accuracy(format!(
        "bessel_k_imag_order(T={t_param}, x={x}) did not converge"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gammafn::gamma;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    /// Ascending-series oracle: K_ν = (π/2)(I_{−ν} − I_ν)/sin(πν), small x only,
    /// ν away from integers. Independent of the integral representation.
    fn bessel_k_series(nu: Complex64, x: f64) -> Complex64 {
        let i_bessel = |nu: Complex64| -> Complex64 {
            let half = Complex64::new(x / 2.0, 0.0);
            let mut term = half.powc(nu) / gamma(nu + 1.0);
            let mut total = term;
            for k in 1..60 {
                let kf = k as f64;
                term = term * (x * x / 4.0) / (kf * (nu + kf));
                total += term;
                if term.norm() < 1e-18 * total.norm() {
                    break;
                }
            }
            total
        };
        let pi_nu = Complex64::new(PI, 0.0) * nu;
        (PI / 2.0) * (i_bessel(-nu) - i_bessel(nu)) / pi_nu.sin()
    }

    #[test]
    fn half_integer_closed_forms() {
        for &x in &[0.3, 1.0, 2.5, 7.0] {
            let want = (PI / (2.0 * x)).sqrt() * (-x).exp();
            let got = bessel_k(c(0.5, 0.0), x).unwrap();
            assert!((got.re - want).abs() < 1e-13 * want.max(1e-10), "K_1/2({x})");
            assert!(got.im.abs() < 1e-15);
            let want32 = want * (1.0 + 1.0 / x);
            let got32 = bessel_k(c(1.5, 0.0), x).unwrap();
            assert!((got32.re - want32).abs() < 1e-12 * want32, "K_3/2({x})");
        }
    }

    #[test]
    fn classical_integer_orders() {
        // Reference values frozen from the standard tables.
        let cases = [
            (0.0, 1.0, 0.42102443824070834),
            (1.0, 1.0, 0.6019072301972346),
            (0.0, 0.1, 2.4270690247020166),
            (1.0, 0.1, 9.853844780870606),
            (0.0, 10.0, 1.778006231616765e-5),
        ];
        for (order, x, want) in cases {
            let got = bessel_k(c(order, 0.0), x).unwrap();
            assert!(
                (got.re - want).abs() < 1e-12 * want.abs().max(1.0),
                "K_{order}({x}) = {} want {want}",
                got.re
            );
        }
    }

    #[test]
    fn series_oracle_complex_order() {
        for &(nr, ni) in &[(0.3, 0.0), (0.25, 0.7), (0.0, 1.3), (0.4, -0.9)] {
            let nu = c(nr, ni);
            for &x in &[0.2, 0.6, 1.1] {
                let got = bessel_k(nu, x).unwrap();
                let want = bessel_k_series(nu, x);
                assert!(
                    (got - want).norm() < 1e-11 * want.norm().max(1.0),
                    "ν={nu} x={x}: {got} vs {want}"
                );
            }
        }
    }

    #[test]
    fn recurrence_complex_order() {
        // K_{ν+1}(x) = K_{ν−1}(x) + (2ν/x) K_ν(x)
        let nu = c(0.35, 1.2);
        let x = 1.7;
        let km = bessel_k(nu - 1.0, x).unwrap();
        let k0 = bessel_k(nu, x).unwrap();
        let kp = bessel_k(nu + 1.0, x).unwrap();
        let rhs = km + (2.0 * nu / x) * k0;
        assert!((kp - rhs).norm() < 1e-12 * kp.norm());
    }

    #[test]
    fn imag_order_real_and_matches_complex_path() {
        for &t in &[0.0, 0.5, 1.0, 3.0] {
            for &x in &[0.05, 0.7, 2.0, 12.0] {
                let fast = bessel_k_imag_order(t, x).unwrap();
                let full = bessel_k(c(0.0, t), x).unwrap();
                assert!(full.im.abs() < 1e-14, "K_i{t}({x}) should be real");
                assert!((fast - full.re).abs() < 1e-13 * fast.abs().max(1e-12));
                let neg = bessel_k_imag_order(-t, x).unwrap();
                assert_eq!(fast, neg, "even in the order");
            }
        }
    }

    #[test]
    fn exponential_decay_and_underflow() {
        let r = bessel_k_imag_order(1.0, 20.0).unwrap() / bessel_k_imag_order(1.0, 10.0).unwrap();
        assert!(r < (-9.0f64).exp(), "decay ratio {r}");
        assert_eq!(bessel_k(c(0.0, 1.0), 800.0).unwrap(), c(0.0, 0.0));
        assert!(bessel_k(c(0.0, 1.0), 0.0).is_err());
        assert!(bessel_k_imag_order(1.0, -2.0).is_err());
    }
}
