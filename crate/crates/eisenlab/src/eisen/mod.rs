//! Weight-zero Eisenstein series on Γ₀(N) with nebentypus.
//!
//! Two evaluation layers:
//!
//! * character pairs: for primitive χ₁ mod q₁ and χ₂ mod q₂ of equal parity,
//!   E_{χ₁,χ₂}(z,s) = ½ Σ_{(c,d)=1} (q₂y)^s χ₁(c)χ₂(d) |c q₂ z + d|^{−2s},
//!   computed through the completed Fourier expansion
//!   E*_{χ₁,χ₂}(z,s) = e*(y,s) + 2√y Σ_{n≠0} λ(n,s) e(nx) K_{s−½}(2π|n|y)
//!   with E* = θ_{χ₁,χ₂}(s) E, after an automorphy reduction that moves z to
//!   (nearly) the highest point of its Γ₀(q₁q₂)-orbit.  The Fourier series
//!   converges for every s away from the poles, so this path doubles as the
//!   analytic continuation.
//!
//! * cusps: E_𝔞(z,s,χ) for a cusp 𝔞 singular for χ, expanded as an explicit
//!   finite combination Σ c(s) · E_{χ₁,χ₂}(Kz, s) of dilated pair series.
//!
//! Slowly-converging direct sums over cosets ([`direct_char_sum`],
//! [`direct_cusp_sum`]) are kept as independent oracles: they share no code
//! with the Fourier path beyond complex arithmetic.

pub mod bessel;

use crate::arith::{divisors, euler_phi, factorize, gcd, lcm, mobius};
use crate::characters::{character_group, DirichletCharacter};
use crate::cusps::{gamma0_quotient_reps, Cusp, Mat2};
use crate::error::{Error, Result};
use crate::jet::Jet;
use crate::lfun::completed_lambda;
use num_complex::Complex64;
use std::f64::consts::PI;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// x^s for x > 0 along the principal branch.
fn rpow(x: f64, s: Complex64) -> Complex64 {
    (s * x.ln()).exp()
}

/// Truncation policy for Fourier tails.
#[derive(Clone, Copy, Debug)]
pub struct FourierTruncation {
    /// Absolute error target for a single series evaluation.
    pub target: f64,
    /// Hard cap on the number of terms.
    pub cap: usize,
}

impl Default for FourierTruncation {
    fn default() -> Self {
        FourierTruncation { target: 1e-10, cap: 200_000 }
    }
}

impl FourierTruncation {
    /// Terms needed at height y: the Bessel factor decays like e^{−2πny},
    /// so a budget of 37 + |Im s| e-foldings clears the target with margin;
    /// the logarithmic correction covers |λ(n,s)| ≤ d(n) n^{|Re s−½|}.
    fn n_max(&self, s: Complex64, y: f64) -> usize {
        let two_pi_y = 2.0 * PI * y;
        let base = 37.0 + s.im.abs();
        let first = base / two_pi_y;
        let extra = (2.0 * (s.re - 0.5).abs() + 1.5) * (2.0 + first).ln();
        let n = ((base + extra) / two_pi_y).ceil() as usize + 2;
        n.clamp(1, self.cap)
    }
}

fn check_pair(chi1: &DirichletCharacter, chi2: &DirichletCharacter) -> Result<()> {
    if !chi1.is_primitive() || !chi2.is_primitive() {
        return Err(Error::Domain(format!(
            "character pair must be primitive, got ({:?}, {:?})",
            chi1, chi2
        )));
    }
    if chi1.even != chi2.even {
        return Err(Error::Domain(format!(
            "character pair must have equal parity, got ({:?}, {:?})",
            chi1, chi2
        )));
    }
    Ok(())
}

/// θ_{χ₁,χ₂}(s) = q₂^s π^{−s} Γ(s) L(2s, χ₁χ₂) / τ(χ₂), the factor that
/// completes the pair series: E* = θ E.
///
/// Computed through the completed Λ so the Γ factor cancels analytically,
///   θ = (q₂/q*)^s Λ(2s, ψ*) ∏_{p | q₁q₂, p∤q*} (1 − ψ*(p) p^{−2s}) / τ(χ₂),
/// where ψ* mod q* is the primitive character inducing χ₁χ₂.  All poles of θ
/// are then poles of Λ and surface as `Error::Pole`; for the trivial pair
/// θ(s) = ξ(2s) with poles at s = 0 and s = ½.
pub fn theta_pair(
    chi1: &DirichletCharacter,
    chi2: &DirichletCharacter,
    s: Complex64,
) -> Result<Complex64> {
    check_pair(chi1, chi2)?;
    let psi = chi1.multiply(chi2)?.primitive_inducer()?;
    let qstar = psi.modulus;
    let lam = completed_lambda(Jet::constant(s * 2.0), &psi)?.v;
    let mut euler = c(1.0, 0.0);
    for p in factorize(lcm(chi1.modulus, chi2.modulus))?.primes() {
        if qstar % p != 0 {
            euler *= c(1.0, 0.0) - psi.value(p as i64) * rpow(p as f64, -2.0 * s);
        }
    }
    Ok(rpow(chi2.modulus as f64 / qstar as f64, s) * lam * euler / chi2.gauss_sum())
}

/// λ_{χ₁,χ₂}(n, s) = χ₂(sgn n) Σ_{ab=|n|} χ₁(a) χ̄₂(b) (b/a)^{s−½}, the
/// Hecke eigenvalue of the pair series: T_n E = λ(n,s) E for (n, q₁q₂) = 1.
pub fn lambda_coeff(
    chi1: &DirichletCharacter,
    chi2: &DirichletCharacter,
    n: i64,
    s: Complex64,
) -> Result<Complex64> {
    if n == 0 {
        return Err(Error::Domain("λ(0, s) is undefined".into()));
    }
    let sign = if n > 0 || chi2.even { 1.0 } else { -1.0 };
    let nu = s - c(0.5, 0.0);
    let mut total = c(0.0, 0.0);
    for a in divisors(n.unsigned_abs())? {
        let b = n.unsigned_abs() / a;
        let v = chi1.value(a as i64) * chi2.value(b as i64).conj();
        if v != c(0.0, 0.0) {
            total += v * rpow(b as f64 / a as f64, nu);
        }
    }
    Ok(total * sign)
}

/// L(2s, χ₁χ₂) / L(2s, χ₁χ₂ χ₀ mod level): the completed L cancels, leaving
/// the finite product ∏ (1 − ψ*(p) p^{−2s})^{−1} over p | level with
/// p ∤ q₁q₂ q*.  A factor within 1e−10 of zero is reported as a pole.
pub fn l_ratio(
    chi1: &DirichletCharacter,
    chi2: &DirichletCharacter,
    level: u64,
    s: Complex64,
) -> Result<Complex64> {
    let psi = chi1.multiply(chi2)?.primitive_inducer()?;
    let lq = lcm(chi1.modulus.max(1), chi2.modulus.max(1));
    let mut out = c(1.0, 0.0);
    for p in factorize(level)?.primes() {
        if lq % p != 0 && psi.modulus % p != 0 {
            let den = c(1.0, 0.0) - psi.value(p as i64) * rpow(p as f64, -2.0 * s);
            if den.norm() < 1e-10 {
                return Err(Error::Pole {
                    location: format!("s = {s}"),
                    factor: format!("1 − ψ*({p})·{p}^(−2s)"),
                });
            }
            out /= den;
        }
    }
    Ok(out)
}

/// (g, x, y) with a·x + b·y = g = gcd(a, b) ≥ 0.
fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    if b == 0 {
        (a.abs(), a.signum(), 0)
    } else {
        let (g, x, y) = ext_gcd(b, a.rem_euclid(b));
        (g, y, x - (a.div_euclid(b)) * y)
    }
}

/// Some (a b; cc dd) ∈ SL₂(ℤ) with the given coprime bottom row.
fn complete_to_sl2(cc: i64, dd: i64) -> Mat2 {
    let (g, x, y) = ext_gcd(dd, cc);
    debug_assert_eq!(g, 1, "bottom row ({cc}, {dd}) not coprime");
    let m = Mat2::new(x, -y, cc, dd);
    debug_assert_eq!(m.det(), 1);
    m
}

/// Move z toward the highest point of its Γ₀(n0)-orbit.  Returns the new
/// point and the γ applied (z_new = γ z).  Only membership γ ∈ Γ₀(n0) is
/// needed for correctness; height merely buys Fourier decay, so the search
/// is a bounded greedy scan over candidate bottom rows (c, d) = (n0·k, ·).
fn reduce_gamma0(mut z: Complex64, n0: u64) -> (Complex64, Mat2) {
    let n0 = n0.max(1);
    let mut acc = Mat2::IDENTITY;
    for _ in 0..500 {
        let t = z.re.round();
        if t != 0.0 && t.abs() < 4.0e15 {
            z.re -= t;
            acc = Mat2::translation(-(t as i64)).mul(&acc);
        }
        // An improving row needs |cz+d| < 1, hence |c| y < 1.
        let kmax = (1.0 / (n0 as f64 * z.im)).floor() as i64 + 1;
        let kmax = kmax.min(4_000_000 / n0 as i64 + 1);
        let mut best: Option<(f64, i64, i64)> = None;
        for k in 1..=kmax {
            let cc = n0 as i64 * k;
            let d0 = (-(cc as f64) * z.re).round() as i64;
            for dd in (d0 - 6)..=(d0 + 6) {
                if gcd(cc.unsigned_abs(), dd.unsigned_abs()) == 1 {
                    let q = c(cc as f64 * z.re + dd as f64, cc as f64 * z.im).norm_sqr();
                    if best.map_or(true, |(bq, _, _)| q < bq) {
                        best = Some((q, cc, dd));
                    }
                }
            }
        }
        match best {
            Some((q, cc, dd)) if q < 0.999 => {
                let g = complete_to_sl2(cc, dd);
                z = g.apply(z);
                acc = g.mul(&acc);
            }
            _ => break,
        }
    }
    let t = z.re.round();
    if t != 0.0 && t.abs() < 4.0e15 {
        z.re -= t;
        acc = Mat2::translation(-(t as i64)).mul(&acc);
    }
    (z, acc)
}

fn check_upper_half(z: Complex64) -> Result<()> {
    if !(z.im > 0.0) || !z.im.is_finite() || !z.re.is_finite() {
        return Err(Error::Domain(format!("z = {z} is not in the upper half plane")));
    }
    Ok(())
}

/// E*_{χ₁,χ₂}(z, s), the completed pair series.  Satisfies
/// E*_{χ₁,χ₂}(z, s) = E*_{χ̄₂,χ̄₁}(z, 1−s) identically.
pub fn eval_char_star(
    chi1: &DirichletCharacter,
    chi2: &DirichletCharacter,
    z: Complex64,
    s: Complex64,
    trunc: FourierTruncation,
) -> Result<Complex64> {
    check_pair(chi1, chi2)?;
    check_upper_half(z)?;
    let (q1, q2) = (chi1.modulus, chi2.modulus);
    let (w, g) = reduce_gamma0(z, q1 * q2);
    // E(γz) = (χ₁χ̄₂)(d_γ) E(z) for γ ∈ Γ₀(q₁q₂); θ is z-free, so E* too.
    let mult = (chi1.value(g.d) * chi2.value(g.d).conj()).conj();
    let (x, y) = (w.re, w.im);

    let mut total = c(0.0, 0.0);
    if q1 == 1 {
        let one = character_group(1)?.trivial();
        total += theta_pair(&one, chi2, s)? * rpow(q2 as f64 * y, s);
    }
    if q2 == 1 {
        let one = character_group(1)?.trivial();
        let s1 = c(1.0, 0.0) - s;
        total += theta_pair(&one, &chi1.conj(), s1)? * rpow(q1 as f64 * y, s1);
    }

    let nu = s - c(0.5, 0.0);
    let parity = if chi2.even { 1.0 } else { -1.0 };
    let scale = 2.0 * y.sqrt();
    let mut small_run = 0u32;
    for n in 1..=trunc.n_max(s, y) {
        let lam = lambda_coeff(chi1, chi2, n as i64, s)?;
        let kb = bessel::bessel_k(nu, 2.0 * PI * n as f64 * y)?;
        let ph = 2.0 * PI * n as f64 * x;
        let phase = c(0.0, ph).exp() + parity * c(0.0, -ph).exp();
        let term = scale * lam * kb * phase;
        total += term;
        // The Bessel factor is eventually monotone; three consecutive
        // negligible terms end the tail.
        if term.norm() < trunc.target * 1e-3 {
            small_run += 1;
            if small_run >= 3 && n >= 8 {
                break;
            }
        } else {
            small_run = 0;
        }
    }
    Ok(mult * total)
}

/// E_{χ₁,χ₂}(z, s) = E*/θ.  At s = ½ with χ₁χ₂ principal the series vanishes
/// identically (the pole of θ swallows E*), so that point returns 0 exactly.
pub fn eval_char_eisenstein(
    chi1: &DirichletCharacter,
    chi2: &DirichletCharacter,
    z: Complex64,
    s: Complex64,
    trunc: FourierTruncation,
) -> Result<Complex64> {
    check_pair(chi1, chi2)?;
    let principal = chi1.multiply(chi2)?.conductor == 1;
    if principal && (s - c(0.5, 0.0)).norm() < 1e-12 {
        return Ok(c(0.0, 0.0));
    }
    let th = theta_pair(chi1, chi2, s)?;
    if th.norm() < 1e-14 {
        return Err(Error::Degenerate(format!("θ_{{χ₁,χ₂}}({s}) ≈ 0")));
    }
    Ok(eval_char_star(chi1, chi2, z, s, trunc)? / th)
}

/// All primitive pairs (χ₁ mod q₁, χ₂ mod q₂) of equal parity with χ₁χ̄₂
/// induced by ψ (which must itself be primitive).  Deterministic order.
pub(crate) fn primitive_pairs(
    q1: u64,
    q2: u64,
    psi: &DirichletCharacter,
) -> Result<Vec<(DirichletCharacter, DirichletCharacter)>> {
    let firsts: Vec<_> = character_group(q1)?
        .all_characters()
        .into_iter()
        .filter(|x| x.is_primitive())
        .collect();
    let seconds: Vec<_> = character_group(q2)?
        .all_characters()
        .into_iter()
        .filter(|x| x.is_primitive())
        .collect();
    let mut out = Vec::new();
    for chi1 in &firsts {
        for chi2 in &seconds {
            if chi1.even != chi2.even {
                continue;
            }
            let prod = chi1.multiply(&chi2.conj())?;
            if prod.conductor == psi.modulus && prod.primitive_inducer()? == *psi {
                out.push((chi1.clone(), chi2.clone()));
            }
        }
    }
    Ok(out)
}

/// One term of a cusp expansion: E_𝔞 picks up `coeff · E_{χ₁,χ₂}(dilation·z, s)`.
pub type CuspTerm = (Complex64, DirichletCharacter, DirichletCharacter, u64);

/// Expansion of E_𝔞(·, s, χ) over dilated character-pair series, for 𝔞 = u/f
/// singular for χ.  With W the width, d = (f, N/f), ψ the primitive inducer
/// of χ, the coefficient of E_{χ₁,χ₂}((bf/(a q₂)) z, s) is
///
///   (Wf)^{−s}/φ(d) · χ̄₂(−u) · L(2s,χ₁χ₂)/L(2s,χ₁χ₂χ₀) · μ(a)μ(b)χ₁(b)χ₂(a)(ab)^{−s}
///
/// summed over primitive pairs with q₁ | N/f, q₂ | f, χ₁χ̄₂ inducing ψ, and
/// a | f, b | N/f.  Terms with equal (χ₁, χ₂, dilation) are merged.
pub fn cusp_expansion(
    level: u64,
    chi: &DirichletCharacter,
    cusp: &Cusp,
    s: Complex64,
) -> Result<Vec<CuspTerm>> {
    if chi.modulus != level || cusp.level != level {
        return Err(Error::Domain(format!(
            "level mismatch: χ mod {}, cusp at level {}, want {}",
            chi.modulus, cusp.level, level
        )));
    }
    if !cusp.is_singular_for(chi) {
        return Err(Error::Domain(format!(
            "cusp {:?} is not singular for {}",
            cusp,
            chi.label()
        )));
    }
    let f = cusp.f;
    let nf = level / f;
    let pre = rpow((cusp.width() * f) as f64, -s) / euler_phi(gcd(f, nf))? as f64;
    let psi = chi.primitive_inducer()?;

    let mut terms: Vec<CuspTerm> = Vec::new();
    for q1 in divisors(nf)? {
        for q2 in divisors(f)? {
            for (chi1, chi2) in &primitive_pairs(q1, q2, &psi)? {
                let head = pre
                    * chi2.value(-(cusp.u as i64)).conj()
                    * l_ratio(chi1, chi2, level, s)?;
                for a in divisors(f)? {
                    let mu_a = mobius(a)?;
                    if mu_a == 0 {
                        continue;
                    }
                    let x2a = chi2.value(a as i64);
                    if x2a == c(0.0, 0.0) {
                        continue;
                    }
                    for b in divisors(nf)? {
                        let mu_b = mobius(b)?;
                        if mu_b == 0 {
                            continue;
                        }
                        let x1b = chi1.value(b as i64);
                        if x1b == c(0.0, 0.0) {
                            continue;
                        }
                        debug_assert_eq!((b * f) % (a * q2), 0);
                        let k = b * f / (a * q2);
                        let coeff = head
                            * ((mu_a * mu_b) as f64)
                            * x1b
                            * x2a
                            * rpow((a * b) as f64, -s);
                        match terms
                            .iter_mut()
                            .find(|(_, c1, c2, kk)| *kk == k && c1 == chi1 && c2 == chi2)
                        {
                            Some(t) => t.0 += coeff,
                            None => terms.push((coeff, chi1.clone(), chi2.clone(), k)),
                        }
                    }
                }
            }
        }
    }
    terms.retain(|(co, _, _, _)| co.norm() > 1e-300);
    Ok(terms)
}

fn eval_terms(
    terms: &[CuspTerm],
    z: Complex64,
    s: Complex64,
    trunc: FourierTruncation,
) -> Result<Complex64> {
    let mut total = c(0.0, 0.0);
    for (coeff, chi1, chi2, k) in terms {
        let kz = c(*k as f64 * z.re, *k as f64 * z.im);
        total += coeff * eval_char_eisenstein(chi1, chi2, kz, s, trunc)?;
    }
    Ok(total)
}

/// E_𝔞(z, s, χ) = Σ_{γ ∈ Γ_𝔞\Γ₀(N)} χ̄(γ) (Im σ_𝔞⁻¹γz)^s, continued in s via
/// the finite expansion into character-pair series.
pub fn eval_cusp_eisenstein(
    level: u64,
    chi: &DirichletCharacter,
    cusp: &Cusp,
    z: Complex64,
    s: Complex64,
    trunc: FourierTruncation,
) -> Result<Complex64> {
    check_upper_half(z)?;
    let terms = cusp_expansion(level, chi, cusp, s)?;
    eval_terms(&terms, z, s, trunc)
}

/// The classical level-one series E(z, s) = ½ Σ_{(c,d)=1} y^s |cz+d|^{−2s}.
///
/// Full SL₂(ℤ)-invariance lets the point be reduced to the standard domain
/// before the Fourier series is summed, so low-height arguments cost the
/// same as high ones.
pub fn eval_level1_e(z: Complex64, s: Complex64, trunc: FourierTruncation) -> Result<Complex64> {
    let (w, _) = crate::geom::reduce_to_domain(z)?;
    let one = character_group(1)?.trivial();
    eval_char_eisenstein(&one, &one, w, s, trunc)
}

/// G(z): the constant term of E(z, s) at s = 1, i.e. the Kronecker limit
/// function, normalized by E(z, s) = (3/π)/(s−1) + G(z) + O(s−1).
///
/// Extracted by Richardson extrapolation of the symmetric average
/// ½(E(z,1+h) + E(z,1−h)) = G(z) + O(h²), evaluated at h and h/2; the pole
/// and all odd orders cancel, so the extrapolant is G + O(h⁴).
pub fn eval_level1_g(z: Complex64) -> Result<f64> {
    eval_level1_g_step(z, 1e-2)
}

/// Same, with the base step exposed so callers can cross-check two ladders.
pub fn eval_level1_g_step(z: Complex64, h: f64) -> Result<f64> {
    let trunc = FourierTruncation::default();
    let avg = |h: f64| -> Result<Complex64> {
        let p = eval_level1_e(z, c(1.0 + h, 0.0), trunc)?;
        let m = eval_level1_e(z, c(1.0 - h, 0.0), trunc)?;
        Ok((p + m) * 0.5)
    };
    let g = (avg(0.5 * h)? * 4.0 - avg(h)?) / 3.0;
    if g.im.abs() > 1e-8 * (1.0 + g.re.abs()) {
        return Err(Error::Accuracy(format!(
            "G(z) should be real, got imaginary part {:e}",
            g.im
        )));
    }
    Ok(g.re)
}

/// (T_n f)(z) = n^{−½} Σ_{ad=n} Σ_{b mod d} f((az + b)/d).
pub fn hecke_apply<F>(n: u64, z: Complex64, f: F) -> Result<Complex64>
where
    F: Fn(Complex64) -> Result<Complex64>,
{
    if n == 0 {
        return Err(Error::Domain("T_0 is undefined".into()));
    }
    check_upper_half(z)?;
    let mut total = c(0.0, 0.0);
    for a in divisors(n)? {
        let d = n / a;
        for b in 0..d {
            let w = c((a as f64 * z.re + b as f64) / d as f64, a as f64 * z.im / d as f64);
            total += f(w)?;
        }
    }
    Ok(total / (n as f64).sqrt())
}

/// Σ_{γ ∈ Γ₀(N)\Γ₀(M)} E^{(N)}_𝔞(γz, s) for M | N and trivial nebentypus:
/// the relative trace of a level-N cusp series down to level M.
pub fn trace_down(
    level_n: u64,
    level_m: u64,
    cusp: &Cusp,
    z: Complex64,
    s: Complex64,
    trunc: FourierTruncation,
) -> Result<Complex64> {
    check_upper_half(z)?;
    let chi = character_group(level_n)?.trivial();
    let terms = cusp_expansion(level_n, &chi, cusp, s)?;
    let mut total = c(0.0, 0.0);
    for g in gamma0_quotient_reps(level_n, level_m)? {
        total += eval_terms(&terms, g.apply(z), s, trunc)?;
    }
    Ok(total)
}

/// |E_{χ₁,χ₂}(σ_𝔞 z, s)| / |E_{1,χ₁χ₂}(z + q̄₂/q₁, s)| for 𝔞 = 1/q₂ at level
/// q₁q₂, (q₁,q₂) = 1.  Slashing the pair series down its own cusp gives a
/// unimodular multiple of the one-sided series, so the ratio should be 1.
///
/// Scaling matrices are only canonical up to a right translation, which
/// shows up as a rational shift of the comparison point.  Unfolding the
/// lattice sum against σ_𝔞 = (1 0; q₂ 1)·diag(√q₁, 1/√q₁), the choice made
/// by [`Cusp::scaling_matrix`], pins the identity down exactly:
///   E_{χ₁,χ₂}(σ_𝔞 z, s) = χ₁(−1) · E_{1,χ₁χ₂}(z + q̄₂/q₁, s),
/// with q̄₂ q₂ ≡ 1 mod q₁ (no shift when q₁ = 1).
pub fn slash_modulus_check(
    chi1: &DirichletCharacter,
    chi2: &DirichletCharacter,
    z: Complex64,
    s: Complex64,
    trunc: FourierTruncation,
) -> Result<f64> {
    check_pair(chi1, chi2)?;
    check_upper_half(z)?;
    let (q1, q2) = (chi1.modulus, chi2.modulus);
    if gcd(q1, q2) != 1 {
        return Err(Error::Domain(format!("moduli ({q1}, {q2}) must be coprime")));
    }
    let cusp = crate::cusps::reduce(1, q2 as i64, q1 * q2)?;
    let num = eval_char_eisenstein(chi1, chi2, cusp.scaling_matrix().apply(z), s, trunc)?;
    let one = character_group(1)?.trivial();
    let prod = chi1.multiply(chi2)?;
    let shift = if q1 == 1 {
        0.0
    } else {
        crate::arith::mod_inverse(q2 % q1, q1)
            .ok_or_else(|| Error::Domain(format!("{q2} not invertible mod {q1}")))? as f64
            / q1 as f64
    };
    let den = eval_char_eisenstein(&one, &prod, z + shift, s, trunc)?;
    if den.norm() < 1e-12 {
        return Err(Error::Degenerate(format!(
            "reference series vanishes at z = {z}, s = {s}: |E| = {:e}",
            den.norm()
        )));
    }
    Ok(num.norm() / den.norm())
}

/// Direct lattice sum ½ Σ_{(c,d)=1, |c|,|d| ≤ bound} for E_{χ₁,χ₂}(z, s).
/// Converges only for Re s > 1 and slowly (tail ~ bound^{2−2 Re s}); this is
/// an oracle, not a production path.
pub fn direct_char_sum(
    chi1: &DirichletCharacter,
    chi2: &DirichletCharacter,
    z: Complex64,
    s: Complex64,
    bound: i64,
) -> Result<Complex64> {
    check_pair(chi1, chi2)?;
    check_upper_half(z)?;
    let q2 = chi2.modulus;
    let ysc = rpow(q2 as f64 * z.im, s);
    let mut total = c(0.0, 0.0);
    for cc in -bound..=bound {
        for dd in -bound..=bound {
            if gcd(cc.unsigned_abs(), dd.unsigned_abs()) != 1 {
                continue;
            }
            let v = chi1.value(cc) * chi2.value(dd);
            if v == c(0.0, 0.0) {
                continue;
            }
            let den = c(
                cc as f64 * q2 as f64 * z.re + dd as f64,
                cc as f64 * q2 as f64 * z.im,
            );
            total += v * rpow(den.norm_sqr(), -s);
        }
    }
    Ok(ysc * total * 0.5)
}

/// Direct coset sum Σ_{γ ∈ Γ_𝔞\Γ₀(N)} χ̄(γ) (Im σ_𝔞⁻¹γz)^s.
///
/// Cosets are parametrized by coprime bottom rows ±(c, d) of γ_𝔞⁻¹γ: each
/// row carries at most one coset, witnessed by the unique j mod W with
/// γ_𝔞 Tʲ (· ·; c d) ∈ Γ₀(N).  Converges for Re s > 1; oracle only.
pub fn direct_cusp_sum(
    level: u64,
    chi: &DirichletCharacter,
    cusp: &Cusp,
    z: Complex64,
    s: Complex64,
    bound: i64,
) -> Result<Complex64> {
    check_upper_half(z)?;
    if !cusp.is_singular_for(chi) {
        return Err(Error::Domain(format!(
            "cusp {:?} is not singular for {}",
            cusp,
            chi.label()
        )));
    }
    let sm = cusp.scaling_matrix();
    let ga = sm.gamma;
    let w = sm.width;
    let mut total = c(0.0, 0.0);
    for cc in 0..=bound {
        for dd in -bound..=bound {
            if cc == 0 && dd != 1 {
                continue;
            }
            if gcd(cc.unsigned_abs(), dd.unsigned_abs()) != 1 {
                continue;
            }
            let m0 = complete_to_sl2(cc, dd);
            for j in 0..w {
                let g = ga.mul(&Mat2::translation(j as i64)).mul(&m0);
                if g.in_gamma0(level) {
                    let im = z.im
                        / (w as f64 * c(cc as f64 * z.re + dd as f64, cc as f64 * z.im).norm_sqr());
                    total += chi.value(g.d).conj() * rpow(im, s);
                    break;
                }
            }
        }
    }
    Ok(total)
}
