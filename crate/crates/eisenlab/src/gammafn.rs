//! Γ, ψ = Γ′/Γ, and Bernoulli numbers on the complex plane.
//!
//! Γ uses the Lanczos approximation (g = 7, 9 coefficients, ~15 significant
//! digits on the half-plane Re z ≥ ½) with the reflection formula elsewhere.
//! ψ uses the recurrence ψ(z) = ψ(z+1) − 1/z up to Re z ≥ 10 followed by the
//! Bernoulli asymptotic series. Everything the crate needs lives within
//! |z| ≲ 30, far from any accuracy cliff.

use crate::jet::Jet;
use num_complex::Complex64;
use std::f64::consts::PI;

/// B₂, B₄, …, B₂₆ as exact rationals rounded once to f64.
pub const BERNOULLI_EVEN: [f64; 13] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
    854513.0 / 138.0,
    -236364091.0 / 2730.0,
    8553103.0 / 6.0,
];

pub const EULER_GAMMA: f64 = 0.5772156649015329;

const LANCZOS_G: f64 = 7.0;
const LANCZOS_C: [f64; 9] = [
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
];

/// Γ(z) for complex z away from the poles 0, −1, −2, …
pub fn gamma(z: Complex64) -> Complex64 {
    if z.re < 0.5 {
        // Γ(z) Γ(1−z) = π / sin(πz)
        return PI / ((PI * z).sin() * gamma(1.0 - z));
    }
    let z = z - 1.0;
    let mut x = Complex64::new(LANCZOS_C[0], 0.0);
    for (i, &c) in LANCZOS_C.iter().enumerate().skip(1) {
        x += c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    (2.0 * PI).sqrt() * t.powc(z + 0.5) * (-t).exp() * x
}

/// ψ(z) = Γ′(z)/Γ(z).
pub fn digamma(z: Complex64) -> Complex64 {
    let mut z = z;
    let mut acc = Complex64::new(0.0, 0.0);
    while z.re < 10.0 {
        acc -= 1.0 / z;
        z += 1.0;
    }
    // ψ(z) ~ ln z − 1/(2z) − Σ B₂ₙ / (2n z²ⁿ)
    let z2 = 1.0 / (z * z);
    let mut term = z2;
    let mut tail = Complex64::new(0.0, 0.0);
    for (k, &b) in BERNOULLI_EVEN.iter().take(8).enumerate() {
        tail += b / (2.0 * (k as f64 + 1.0)) * term;
        term *= z2;
    }
    acc + z.ln() - 0.5 / z - tail
}

/// Γ carried through a jet: d/ds Γ(f(s)) = Γ(f) ψ(f) f′.
pub fn gamma_jet(z: Jet) -> Jet {
    let g = gamma(z.v);
    Jet { v: g, d: g * digamma(z.v) * z.d }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn gamma_special_values() {
        assert!((gamma(c(0.5, 0.0)) - c(PI.sqrt(), 0.0)).norm() < 1e-14);
        let mut fact = 1.0;
        for n in 1..=12u32 {
            assert!(
                (gamma(c(n as f64, 0.0)) - c(fact, 0.0)).norm() < 1e-12 * fact,
                "Γ({n})"
            );
            fact *= n as f64;
        }
    }

    #[test]
    fn gamma_reflection() {
        for &z in &[c(0.3, 1.7), c(-1.2, 0.4), c(-2.6, -3.0)] {
            let lhs = gamma(z) * gamma(1.0 - z);
            let rhs = PI / (PI * z).sin();
            assert!((lhs - rhs).norm() < 1e-12 * rhs.norm(), "z = {z}");
        }
    }

    #[test]
    fn gamma_recurrence() {
        for &z in &[c(0.5, 14.0), c(3.3, -2.0), c(-0.7, 0.9)] {
            let lhs = gamma(z + 1.0);
            let rhs = z * gamma(z);
            assert!((lhs - rhs).norm() < 1e-13 * rhs.norm(), "z = {z}");
        }
    }

    #[test]
    fn digamma_special_values() {
        assert!((digamma(c(1.0, 0.0)) - c(-EULER_GAMMA, 0.0)).norm() < 1e-13);
        let half = -EULER_GAMMA - 2.0 * (2.0f64).ln();
        assert!((digamma(c(0.5, 0.0)) - c(half, 0.0)).norm() < 1e-13);
    }

    #[test]
    fn digamma_recurrence() {
        for &z in &[c(0.25, 0.0), c(1.5, 2.5), c(-1.3, 0.7)] {
            let lhs = digamma(z + 1.0);
            let rhs = digamma(z) + 1.0 / z;
            assert!((lhs - rhs).norm() < 1e-12, "z = {z}");
        }
    }

    #[test]
    fn gamma_jet_derivative() {
        // Compare the jet derivative with a central difference.
        let z0 = c(1.7, 0.6);
        let jet = gamma_jet(Jet::variable(z0));
        let h = 1e-6;
        let fd = (gamma(z0 + h) - gamma(z0 - h)) / (2.0 * h);
        assert!((jet.d - fd).norm() < 1e-8 * jet.v.norm());
        assert!((jet.v - gamma(z0)).norm() < 1e-14 * jet.v.norm());
    }
}
