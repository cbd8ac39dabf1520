//! Frozen cross-module oracles: every expected value here is assembled
//! from classical constants and closed forms that never touch the crate's
//! own evaluation paths, so agreement pins the implementation from the
//! outside.

use eisenlab::characters::character_group;
use eisenlab::cusps::{coset_count, cusp_set, Cusp};
use eisenlab::eisen::{eval_level1_e, eval_level1_g, FourierTruncation};
use eisenlab::scatter::{phi_general, phi_infinity_entry};
use num_complex::Complex64;
use std::f64::consts::PI;

const ZETA_3: f64 = 1.2020569031595942854;
const GAMMA_QUARTER: f64 = 3.6256099082219083119;
const EULER_GAMMA: f64 = 0.5772156649015328606;
const ZETA_PRIME_2: f64 = -0.9375482543158437537;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// φ(s) at level one is ξ(2s−1)/ξ(2s). At s = 2 everything collapses to
/// 45 ζ(3)/π³; on the critical line the entry is unimodular.
#[test]
fn level_one_scattering_matches_the_xi_ratio() {
    let one = character_group(1).unwrap().trivial();
    let inf = Cusp::infinity(1);

    let phi2 = phi_infinity_entry(1, &one, &inf, c(2.0, 0.0)).unwrap();
    let expect = 45.0 * ZETA_3 / PI.powi(3);
    assert!(
        (phi2 - c(expect, 0.0)).norm() <= 1e-12 * expect,
        "phi(2) = {phi2}, xi-ratio {expect}"
    );

    for t in [0.5, 1.0, 3.0] {
        let v = phi_infinity_entry(1, &one, &inf, c(0.5, t)).unwrap();
        assert!((v.norm() - 1.0).abs() <= 1e-11, "|phi(1/2+{t}i)| = {}", v.norm());
    }
}

/// E(i, 3) through the Gaussian integers: Σ′ (m²+n²)^{−s} = 4 ζ(s) β(s),
/// so the coprime-normalized series is 2 ζ(3) β(3)/ζ(6) with β(3) = π³/32.
#[test]
fn the_series_at_i_counts_gaussian_lattice_points() {
    let zeta6 = PI.powi(6) / 945.0;
    let beta3 = PI.powi(3) / 32.0;
    let expect = 2.0 * ZETA_3 * beta3 / zeta6;
    let v = eval_level1_e(c(0.0, 1.0), c(3.0, 0.0), FourierTruncation::default()).unwrap();
    assert!(
        (v - c(expect, 0.0)).norm() <= 1e-10 * expect,
        "E(i,3) = {v}, lattice value {expect}"
    );
}

/// The limit function in closed form:
///   G(z) = (6/π)(γ − log 2 − ½ log y − 2 log|η(z)|) − 36 ζ′(2)/π³,
/// checked at z = i and z = 2i where |η| is classical:
/// |η(i)| = Γ(¼)/(2π^{3/4}), |η(2i)| = |η(i)|·2^{−3/8}.
#[test]
fn the_limit_function_matches_the_eta_closed_form() {
    let closed = |y: f64, log_eta: f64| {
        (6.0 / PI) * (EULER_GAMMA - 2f64.ln() - 0.5 * y.ln() - 2.0 * log_eta)
            - 36.0 * ZETA_PRIME_2 / PI.powi(3)
    };
    let log_eta_i = GAMMA_QUARTER.ln() - (2.0 * PI.powf(0.75)).ln();

    let gi = eval_level1_g(c(0.0, 1.0)).unwrap();
    let want_i = closed(1.0, log_eta_i);
    assert!((gi - want_i).abs() <= 1e-7, "G(i) = {gi}, closed {want_i}");

    let g2i = eval_level1_g(c(0.0, 2.0)).unwrap();
    let want_2i = closed(2.0, log_eta_i - 0.375 * 2f64.ln());
    assert!((g2i - want_2i).abs() <= 1e-7, "G(2i) = {g2i}, closed {want_2i}");

    // the constant cancels in the difference: G(2i) − G(i) = (3/2π) log 2
    let diff = 1.5 * 2f64.ln() / PI;
    assert!((g2i - gi - diff).abs() <= 1e-8, "difference {} vs {diff}", g2i - gi);
}

/// Widths tile the index: Σ_𝔞 W_𝔞 = [SL₂(ℤ) : Γ₀(N)] for every level.
#[test]
fn cusp_widths_tile_the_index() {
    for n in 1..=60u64 {
        let total: u64 = cusp_set(n).unwrap().iter().map(|a| a.width()).sum();
        assert_eq!(total, coset_count(n).unwrap(), "level {n}");
    }

    // frozen table at N = 12
    let cusps = cusp_set(12).unwrap();
    let widths: Vec<(u64, u64)> = cusps.iter().map(|a| (a.f, a.width())).collect();
    assert_eq!(widths, [(1, 12), (2, 3), (3, 4), (4, 3), (6, 1), (12, 1)]);
    assert_eq!(coset_count(12).unwrap(), 24);
}

/// The full scattering matrix at one desk-scale point: symmetric, and
/// unitary on the critical line.
#[test]
fn the_scattering_matrix_is_symmetric_and_unitary() {
    let n = 6u64;
    let chi = character_group(n).unwrap().trivial();
    let s = c(0.5, 0.7);
    let cusps = cusp_set(n).unwrap();
    let k = cusps.len();
    let mut phi = vec![vec![c(0.0, 0.0); k]; k];
    for (i, a) in cusps.iter().enumerate() {
        for (j, b) in cusps.iter().enumerate() {
            phi[i][j] = phi_general(n, &chi, a, b, s).unwrap();
        }
    }
    for i in 0..k {
        for j in 0..k {
            assert!(
                (phi[i][j] - phi[j][i]).norm() <= 1e-10,
                "symmetry fails at ({i},{j}): {} vs {}",
                phi[i][j],
                phi[j][i]
            );
            let mut dot = c(0.0, 0.0);
            for l in 0..k {
                dot += phi[i][l] * phi[j][l].conj();
            }
            let want = if i == j { 1.0 } else { 0.0 };
            assert!(
                (dot - c(want, 0.0)).norm() <= 1e-9,
                "unitarity fails at ({i},{j}): {dot}"
            );
        }
    }
}
