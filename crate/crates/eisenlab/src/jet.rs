//! First-order jets (dual numbers) over ℂ.
//!
//! A `Jet` carries a value together with its derivative with respect to one
//! complex parameter, so an analytic derivative like L′(s, χ) falls out of
//! the same code path that computes L(s, χ): feed `Jet::variable(s)` through
//! the series and read off `.d`. No finite differences, no second pass.

use num_complex::Complex64;
use std::ops::{Add, Div, Mul, Neg, Sub};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet {
    /// Value f(s₀).
    pub v: Complex64,
    /// Derivative f′(s₀).
    pub d: Complex64,
}

impl Jet {
    pub fn constant(v: Complex64) -> Self {
        Jet { v, d: Complex64::new(0.0, 0.0) }
    }

    pub fn real_constant(v: f64) -> Self {
        Jet::constant(Complex64::new(v, 0.0))
    }

    /// The identity jet s ↦ s at the base point: value s₀, derivative 1.
    pub fn variable(v: Complex64) -> Self {
        Jet { v, d: Complex64::new(1.0, 0.0) }
    }

    pub fn exp(self) -> Self {
        let e = self.v.exp();
        Jet { v: e, d: e * self.d }
    }

    pub fn ln(self) -> Self {
        Jet { v: self.v.ln(), d: self.d / self.v }
    }

    /// c^self for a constant base c, via exp(self · ln c).
    pub fn const_pow(base: Complex64, exponent: Jet) -> Self {
        (exponent * Jet::constant(base.ln())).exp()
    }

    /// self^n for a small integer power.
    pub fn powi(self, n: i32) -> Self {
        match n {
            0 => Jet::real_constant(1.0),
            1 => self,
            _ if n > 1 => {
                let mut acc = self;
                for _ in 1..n {
                    acc = acc * self;
                }
                acc
            }
            _ => Jet::real_constant(1.0) / self.powi(-n),
        }
    }

    pub fn inv(self) -> Self {
        Jet { v: 1.0 / self.v, d: -self.d / (self.v * self.v) }
    }

    pub fn norm_value(self) -> f64 {
        self.v.norm()
    }
}

impl Add for Jet {
    type Output = Jet;
    fn add(self, rhs: Jet) -> Jet {
        Jet { v: self.v + rhs.v, d: self.d + rhs.d }
    }
}

impl Sub for Jet {
    type Output = Jet;
    fn sub(self, rhs: Jet) -> Jet {
        Jet { v: self.v - rhs.v, d: self.d - rhs.d }
    }
}

impl Mul for Jet {
    type Output = Jet;
    fn mul(self, rhs: Jet) -> Jet {
        Jet { v: self.v * rhs.v, d: self.v * rhs.d + self.d * rhs.v }
    }
}

impl Div for Jet {
    type Output = Jet;
    fn div(self, rhs: Jet) -> Jet {
        let v = self.v / rhs.v;
        Jet { v, d: (self.d - v * rhs.d) / rhs.v }
    }
}

impl Neg for Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        Jet { v: -self.v, d: -self.d }
    }
}

impl Mul<f64> for Jet {
    type Output = Jet;
    fn mul(self, rhs: f64) -> Jet {
        Jet { v: self.v * rhs, d: self.d * rhs }
    }
}

impl Mul<Complex64> for Jet {
    type Output = Jet;
    fn mul(self, rhs: Complex64) -> Jet {
        Jet { v: self.v * rhs, d: self.d * rhs }
    }
}
