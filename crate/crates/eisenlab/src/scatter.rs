//! Scattering matrices of Γ₀(N) Eisenstein series.
//!
//! The constant term of E_𝔞(σ_𝔟 z, s, χ) is δ_𝔞𝔟 y^s + φ_𝔞𝔟(s,χ) y^{1−s};
//! the entries φ_𝔞𝔟 form the scattering matrix Φ(s,χ), unitary on Re s = ½.
//! Everything here is a finite expression in gcds, character values, and
//! completed Dirichlet L-functions:
//!
//! * [`constant_term_coeffs`]: the pair series E_{χ₁,χ₂}(Kγz, s) opens up as
//!   C y^s + D y^{1−s} + o(1) with explicit coefficients,
//! * [`phi_general`]: the double divisor sum for an arbitrary entry φ_𝔞𝔟,
//! * [`phi_infinity_row`]: the closed form for the row at ∞, through Λ,
//! * [`al_pair_entry`]: the Atkin-Lehner pair formula (primitive χ), with
//!   |φ_{𝔞𝔞*}| = 1 exactly on the critical line,
//! * [`phi_log_derivative`], [`al_log_derivative`]: analytic φ′/φ at ½ − iT,
//! * [`hard_sums`]: the unitarity-weighted identity
//!   Σ_𝔞 |φ_{∞𝔞}|² (log f_𝔞 + log N/(q f_𝔞)) = log N/q.
//!
//! Entries are never produced by numeric constant-term extraction; the
//! two-height fit [`extract_constant_term`] exists only as an oracle against
//! the closed forms.

use crate::arith::{divisors, euler_phi, factorize, gcd, mobius, mod_inverse};
use crate::characters::{character_group, DirichletCharacter};
use crate::cusps::{cusp_set, Cusp, Mat2};
use crate::eisen::{
    eval_cusp_eisenstein, l_ratio, primitive_pairs, theta_pair, FourierTruncation,
};
use crate::error::{Error, Result};
use crate::jet::Jet;
use crate::lfun::{completed_lambda, lambda_log_derivative};
use num_complex::Complex64;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// x^s for x > 0 along the principal branch.
fn rpow(x: f64, s: Complex64) -> Complex64 {
    (s * x.ln()).exp()
}

/// Leading coefficients of a dilated, slashed pair series:
/// E_{χ₁,χ₂}(Kγz, s) = C y^s + D y^{1−s} + o(1) as y → ∞.
#[derive(Clone, Copy, Debug)]
pub struct ConstantTermPair {
    pub c: Complex64,
    pub d: Complex64,
}

/// The row (φ_{∞𝔞}(s,χ))_𝔞 over the singular cusps 𝔞 ∈ C_χ(N), in the
/// deterministic [`cusp_set`] order.
#[derive(Clone, Debug)]
pub struct ScatteringRow {
    pub level: u64,
    pub chi: DirichletCharacter,
    pub s: Complex64,
    pub entries: Vec<(Cusp, Complex64)>,
}

impl ScatteringRow {
    /// Entry at a cusp, looked up by (denominator, class) rather than by the
    /// exact numerator representative.
    pub fn entry(&self, cusp: &Cusp) -> Option<Complex64> {
        self.entries
            .iter()
            .find(|(a, _)| a.f == cusp.f && a.class_v() == cusp.class_v())
            .map(|(_, v)| *v)
    }

    /// Σ_𝔞 |φ_{∞𝔞}|², which is exactly 1 on Re s = ½.
    pub fn weight_sum(&self) -> f64 {
        self.entries.iter().map(|(_, v)| v.norm_sqr()).sum()
    }

    /// |Σ |φ_{∞𝔞}|² − 1|; meaningful only on the unitary line Re s = ½.
    pub fn unitarity_residual(&self) -> f64 {
        (self.weight_sum() - 1.0).abs()
    }

    /// On-demand general entry φ_𝔞𝔟 at this row's (level, χ, s).
    pub fn general(&self, a: &Cusp, b: &Cusp) -> Result<Complex64> {
        phi_general(self.level, &self.chi, a, b, self.s)
    }
}

/// Constant-term coefficients of E_{χ₁,χ₂}(Kγz, s) for γ = (u v; f w) in
/// SL₂(ℤ):
///
///   C = δ_{q₂|f} (q₂K, f)^{2s} (q₂K)^{−s} χ₁(−f/(q₂K,f)) χ₂(q₂Ku/(q₂K,f)),
///   D = δ_{q₁|f} [θ_{χ̄₂,χ̄₁}(1−s)/θ_{χ₁,χ₂}(s)] (q₁K, f)^{2−2s} (q₁K)^{s−1}
///       χ̄₁(q₁Ku/(q₁K,f)) χ̄₂(−f/(q₁K,f)).
///
/// f = 0 (the identity, or any translation) is the ∞ direction: every
/// modulus divides it and the gcds collapse to q_i·K.
pub fn constant_term_coeffs(
    chi1: &DirichletCharacter,
    chi2: &DirichletCharacter,
    k: u64,
    gamma: &Mat2,
    s: Complex64,
) -> Result<ConstantTermPair> {
    if k == 0 {
        return Err(Error::Domain("dilation K must be positive".into()));
    }
    if gamma.det() != 1 {
        return Err(Error::Domain(format!("γ must be unimodular, det = {}", gamma.det())));
    }
    let (u, f) = (gamma.a, gamma.c);
    let (q1, q2) = (chi1.modulus, chi2.modulus);

    let c_coeff = if f.rem_euclid(q2 as i64) == 0 {
        let q2k = q2 * k;
        let g = gcd(q2k, f.unsigned_abs());
        rpow(g as f64, 2.0 * s) * rpow(q2k as f64, -s)
            * chi1.value(-f / g as i64)
            * chi2.value(q2k as i64 * u / g as i64)
    } else {
        c(0.0, 0.0)
    };

    let d_coeff = if f.rem_euclid(q1 as i64) == 0 {
        let th_den = theta_pair(chi1, chi2, s)?;
        if th_den.norm() < 1e-14 {
            return Err(Error::Degenerate(format!("θ_{{χ₁,χ₂}}({s}) ≈ 0")));
        }
        let th = theta_pair(&chi2.conj(), &chi1.conj(), c(1.0, 0.0) - s)? / th_den;
        let q1k = q1 * k;
        let g = gcd(q1k, f.unsigned_abs());
        th * rpow(g as f64, c(2.0, 0.0) - 2.0 * s) * rpow(q1k as f64, s - 1.0)
            * chi1.value(q1k as i64 * u / g as i64).conj()
            * chi2.value(-f / g as i64).conj()
    } else {
        c(0.0, 0.0)
    };

    Ok(ConstantTermPair { c: c_coeff, d: d_coeff })
}

/// General scattering entry φ_𝔞𝔟(s,χ), both cusps singular for χ:
///
///   φ_𝔞𝔟 = f_𝔞^{−1} W_𝔞^{−s} W_𝔟^{1−s} / φ((f_𝔞, N/f_𝔞))
///     · Σ_{q₁|(N/f_𝔞, f_𝔟)} Σ_{q₂|f_𝔞} Σ*_{χ₁,χ₂} χ̄₁(u_𝔟) χ̄₂(u_𝔞)
///       [L(2s,χ₁χ₂)/L(2s,χ₁χ₂χ₀)] [θ_{χ̄₂,χ̄₁}(1−s)/θ_{χ₁,χ₂}(s)] (q₂/q₁)^{1−s}
///     · Σ_{a|f_𝔞} Σ_{b|N/f_𝔞} μ(a)μ(b)χ₁(b)χ₂(a) a^{1−2s} b^{−1}
///       (q₁K, f_𝔟)^{2−2s} χ̄₁(q₁K/(q₁K,f_𝔟)) χ̄₂(f_𝔟/(q₁K,f_𝔟)),  K = bf_𝔞/(aq₂),
///
/// summed over primitive pairs with χ₁χ̄₂ inducing the same primitive
/// character as χ.
pub fn phi_general(
    level: u64,
    chi: &DirichletCharacter,
    a: &Cusp,
    b: &Cusp,
    s: Complex64,
) -> Result<Complex64> {
    if chi.modulus != level || a.level != level || b.level != level {
        return Err(Error::Domain(format!(
            "level mismatch: χ mod {}, cusps at levels {} and {}, want {}",
            chi.modulus, a.level, b.level, level
        )));
    }
    for cusp in [a, b] {
        if !cusp.is_singular_for(chi) {
            return Err(Error::Domain(format!(
                "cusp {:?} is not singular for {}",
                cusp,
                chi.label()
            )));
        }
    }
    let (fa, fb) = (a.f, b.f);
    let nfa = level / fa;
    let psi = chi.primitive_inducer()?;
    let pre = rpow(a.width() as f64, -s) * rpow(b.width() as f64, c(1.0, 0.0) - s)
        / (fa as f64 * euler_phi(gcd(fa, nfa))? as f64);

    let mut total = c(0.0, 0.0);
    for q1 in divisors(gcd(nfa, fb))? {
        for q2 in divisors(fa)? {
            for (chi1, chi2) in &primitive_pairs(q1, q2, &psi)? {
                let th_den = theta_pair(chi1, chi2, s)?;
                if th_den.norm() < 1e-14 {
                    return Err(Error::Degenerate(format!("θ_{{χ₁,χ₂}}({s}) ≈ 0")));
                }
                let th = theta_pair(&chi2.conj(), &chi1.conj(), c(1.0, 0.0) - s)? / th_den;
                let head = chi1.value(b.u as i64).conj()
                    * chi2.value(a.u as i64).conj()
                    * l_ratio(chi1, chi2, level, s)?
                    * th
                    * rpow(q2 as f64 / q1 as f64, c(1.0, 0.0) - s);
                let mut inner = c(0.0, 0.0);
                for aa in divisors(fa)? {
                    let mu_a = mobius(aa)?;
                    if mu_a == 0 {
                        continue;
                    }
                    let x2a = chi2.value(aa as i64);
                    if x2a == c(0.0, 0.0) {
                        continue;
                    }
                    for bb in divisors(nfa)? {
                        let mu_b = mobius(bb)?;
                        if mu_b == 0 {
                            continue;
                        }
                        let x1b = chi1.value(bb as i64);
                        if x1b == c(0.0, 0.0) {
                            continue;
                        }
                        debug_assert_eq!((bb * fa) % (aa * q2), 0);
                        let kk = q1 * (bb * fa / (aa * q2));
                        let g = gcd(kk, fb);
                        inner += ((mu_a * mu_b) as f64)
                            * x1b
                            * x2a
                            * rpow(aa as f64, c(1.0, 0.0) - 2.0 * s)
                            / (bb as f64)
                            * rpow(g as f64, c(2.0, 0.0) - 2.0 * s)
                            * chi1.value((kk / g) as i64).conj()
                            * chi2.value((fb / g) as i64).conj();
                    }
                }
                total += head * inner;
            }
        }
    }
    Ok(pre * total)
}

/// Closed form for the ∞ row, 𝔟 = u/f singular for χ with inducer ψ mod q:
///
///   φ_{∞𝔟}(s,χ) = δ_{f|N/q} τ(ψ̄) W_𝔟^{−s} f^{1−2s} / φ((f, N/f))
///     · Λ(2−2s,ψ)/Λ(2s,ψ̄)
///     · ∏_{p|N} (1 − ψ̄(p)p^{−2s})^{−1} ∏_{p|f} (1 − p^{−1})
///     · ∏_{p|N/f} (1 − ψ̄(p)p^{1−2s}).
///
/// For trivial χ the Λ-ratio degenerates at the center; the removable value
/// there is φ_{∞𝔟}(½) = −δ_{𝔟 ≐ ∞}, returned directly.
pub fn phi_infinity_entry(
    level: u64,
    chi: &DirichletCharacter,
    b: &Cusp,
    s: Complex64,
) -> Result<Complex64> {
    if chi.modulus != level || b.level != level {
        return Err(Error::Domain(format!(
            "level mismatch: χ mod {}, cusp at level {}, want {}",
            chi.modulus, b.level, level
        )));
    }
    if !chi.even {
        return Err(Error::Domain(format!("{} is odd, no scattering row", chi.label())));
    }
    if !b.is_singular_for(chi) {
        return Err(Error::Domain(format!(
            "cusp {:?} is not singular for {}",
            b,
            chi.label()
        )));
    }
    let q = chi.conductor;
    if q == 1 && (s - c(0.5, 0.0)).norm() < 1e-10 {
        return Ok(if b.is_infinity_class() { c(-1.0, 0.0) } else { c(0.0, 0.0) });
    }
    let f = b.f;
    if (level / q) % f != 0 {
        return Ok(c(0.0, 0.0));
    }
    let psi = chi.primitive_inducer()?;
    let lam = completed_lambda(Jet::constant(c(2.0, 0.0) - 2.0 * s), &psi)?.v
        / completed_lambda(Jet::constant(2.0 * s), &psi.conj())?.v;
    let mut prod = c(1.0, 0.0);
    for p in factorize(level)?.primes() {
        let den = c(1.0, 0.0) - psi.value(p as i64).conj() * rpow(p as f64, -2.0 * s);
        if den.norm() < 1e-12 {
            return Err(Error::Pole {
                location: format!("s = {s}"),
                factor: format!("1 − ψ̄({p})·{p}^(−2s)"),
            });
        }
        prod /= den;
    }
    for p in factorize(f)?.primes() {
        prod *= 1.0 - 1.0 / p as f64;
    }
    for p in factorize(level / f)?.primes() {
        prod *= c(1.0, 0.0) - psi.value(p as i64).conj() * rpow(p as f64, c(1.0, 0.0) - 2.0 * s);
    }
    Ok(psi.conj().gauss_sum()
        * rpow(b.width() as f64, -s)
        * rpow(f as f64, c(1.0, 0.0) - 2.0 * s)
        / euler_phi(gcd(f, level / f))? as f64
        * lam
        * prod)
}

/// The full row (φ_{∞𝔞}(s,χ))_{𝔞 ∈ C_χ(N)}.
pub fn phi_infinity_row(level: u64, chi: &DirichletCharacter, s: Complex64) -> Result<ScatteringRow> {
    if !chi.even {
        return Err(Error::Domain(format!("{} is odd, no scattering row", chi.label())));
    }
    let mut entries = Vec::new();
    for cusp in cusp_set(level)? {
        if cusp.is_singular_for(chi) {
            let v = phi_infinity_entry(level, chi, &cusp, s)?;
            entries.push((cusp, v));
        }
    }
    Ok(ScatteringRow { level, chi: chi.clone(), s, entries })
}

/// Analytic logarithmic derivative (φ′/φ)_{∞𝔞}(½−iT, χ̄) for s = ½+iT:
///
///   −(φ′/φ)_{∞𝔞}(½−iT, χ̄) = log(fN/(f,N/f)) + 4 Re Λ′/Λ(1+2iT, ψ̄)
///     + 2 Σ_{p|N} ψ(p)p^{−1+2iT} log p / (1 − ψ(p)p^{−1+2iT})
///     − 2 Σ_{p|N/f} ψ(p)p^{2iT} log p / (1 − ψ(p)p^{2iT}).
///
/// The Re is exact: the two Λ factors of the entry sit at conjugate
/// arguments, so their logarithmic derivatives pair into a real part.
pub fn phi_log_derivative(
    level: u64,
    chi: &DirichletCharacter,
    cusp: &Cusp,
    s: Complex64,
) -> Result<Complex64> {
    if (s.re - 0.5).abs() > 1e-9 {
        return Err(Error::Domain(format!("log-derivative lives on Re s = 1/2, got {s}")));
    }
    if chi.modulus != level || cusp.level != level {
        return Err(Error::Domain(format!(
            "level mismatch: χ mod {}, cusp at level {}, want {}",
            chi.modulus, cusp.level, level
        )));
    }
    let q = chi.conductor;
    let f = cusp.f;
    if !cusp.is_singular_for(chi) || (level / q) % f != 0 {
        return Err(Error::Domain(format!(
            "φ_{{∞𝔞}} vanishes identically at {:?}, log-derivative undefined",
            cusp
        )));
    }
    let t = s.im;
    let psi = chi.primitive_inducer()?;
    let lam = lambda_log_derivative(c(1.0, 2.0 * t), &psi.conj())?;
    let d = gcd(f, level / f);
    let mut sum = c((f as f64 * level as f64 / d as f64).ln() + 4.0 * lam.re, 0.0);
    for p in factorize(level)?.primes() {
        let w = psi.value(p as i64) * rpow(p as f64, c(-1.0, 2.0 * t));
        sum += 2.0 * (p as f64).ln() * w / (c(1.0, 0.0) - w);
    }
    for p in factorize(level / f)?.primes() {
        let w = psi.value(p as i64) * rpow(p as f64, c(0.0, 2.0 * t));
        let den = c(1.0, 0.0) - w;
        if den.norm() < 1e-12 {
            return Err(Error::Pole {
                location: format!("T = {t}"),
                factor: format!("1 − ψ({p})·{p}^(2iT), the entry vanishes here"),
            });
        }
        sum -= 2.0 * (p as f64).ln() * w / den;
    }
    Ok(-sum)
}

/// The component of χ at the modulus m, for χ mod N primitive and m·(N/m) a
/// coprime splitting: the unique character mod m with χ = χ^(m) · χ^(N/m).
/// Found by matching exact value exponents on the CRT section x ≡ a (m),
/// x ≡ 1 (N/m).
fn crt_component(chi: &DirichletCharacter, m: u64) -> Result<DirichletCharacter> {
    let n = chi.modulus;
    let other = n / m;
    debug_assert_eq!(gcd(m, other), 1);
    if m == n {
        return Ok(chi.clone());
    }
    if m == 1 {
        return Ok(character_group(1)?.trivial());
    }
    let om_inv = mod_inverse(other % m, m)
        .ok_or_else(|| Error::Domain(format!("split {m}·{other} is not coprime")))?;
    let mo_inv = mod_inverse(m % other, other)
        .ok_or_else(|| Error::Domain(format!("split {m}·{other} is not coprime")))?;
    let section = |a: u64| (a * (other * om_inv % n) + m * mo_inv) % n;
    'cands: for cand in character_group(m)?.all_characters() {
        for a in 1..m {
            if gcd(a, m) == 1
                && cand.value_exponent(a as i64) != chi.value_exponent(section(a) as i64)
            {
                continue 'cands;
            }
        }
        return Ok(cand);
    }
    Err(Error::Degenerate(format!("no component of {} at modulus {m}", chi.label())))
}

pub(crate) fn al_split(
    level: u64,
    chi: &DirichletCharacter,
    a: &Cusp,
) -> Result<(DirichletCharacter, DirichletCharacter)> {
    if chi.conductor != level || !chi.even {
        return Err(Error::Domain(format!(
            "Atkin-Lehner entries need an even primitive character mod {level}, got {}",
            chi.label()
        )));
    }
    if a.level != level || gcd(a.f, level / a.f) != 1 {
        return Err(Error::Domain(format!("{:?} is not an Atkin-Lehner cusp of level {level}", a)));
    }
    let chi1 = crt_component(chi, level / a.f)?;
    let chi2 = crt_component(chi, a.f)?.conj();
    Ok((chi1, chi2))
}

/// Atkin-Lehner entry for primitive χ mod N, factored as χ = χ₁χ̄₂ with χ₁
/// primitive mod N/f_𝔞 and χ₂ primitive mod f_𝔞:
///
///   φ_𝔞𝔟(s,χ) = χ₁(−1) τ(χ₁) τ(χ₂) N^{−s} Λ(2−2s, χ̄₁χ̄₂)/Λ(2s, χ₁χ₂)
///
/// when 𝔟 = 𝔞* is the complement 1/(N/f_𝔞), and 0 for every other cusp.
/// On Re s = ½ the entry has modulus exactly 1.
pub fn al_pair_entry(
    level: u64,
    chi: &DirichletCharacter,
    a: &Cusp,
    b: &Cusp,
    s: Complex64,
) -> Result<Complex64> {
    let (chi1, chi2) = al_split(level, chi, a)?;
    if b.level != level || gcd(b.f, level / b.f) != 1 {
        return Err(Error::Domain(format!("{:?} is not an Atkin-Lehner cusp of level {level}", b)));
    }
    if b.f != level / a.f {
        return Ok(c(0.0, 0.0));
    }
    let prod = chi1.multiply(&chi2)?.primitive_inducer()?;
    let lam = completed_lambda(Jet::constant(c(2.0, 0.0) - 2.0 * s), &prod.conj())?.v
        / completed_lambda(Jet::constant(2.0 * s), &prod)?.v;
    Ok(chi1.value(-1) * chi1.gauss_sum() * chi2.gauss_sum() * rpow(level as f64, -s) * lam)
}

/// (φ′/φ)_{𝔞𝔞*}(½−iT, χ̄) for an Atkin-Lehner cusp and primitive χ mod N:
/// with χ = χ₁χ̄₂ as in [`al_pair_entry`], the pair of Λ factors sits at
/// conjugate arguments, leaving exactly
///
///   (φ′/φ)_{𝔞𝔞*}(½−iT, χ̄) = −log N − 4 Re Λ′/Λ(1+2iT, χ₁χ₂).
pub fn al_log_derivative(
    level: u64,
    chi: &DirichletCharacter,
    a: &Cusp,
    s: Complex64,
) -> Result<Complex64> {
    if (s.re - 0.5).abs() > 1e-9 {
        return Err(Error::Domain(format!("log-derivative lives on Re s = 1/2, got {s}")));
    }
    let (chi1, chi2) = al_split(level, chi, a)?;
    let prod = chi1.multiply(&chi2)?.primitive_inducer()?;
    let lam = lambda_log_derivative(c(1.0, 2.0 * s.im), &prod)?;
    Ok(c(-(level as f64).ln() - 4.0 * lam.re, 0.0))
}

/// |E_𝔞(σ_𝔟(x+iy), s, χ)| sampled along increasing y at a cusp 𝔟 that is
/// not singular for χ: the values must sink to 0, there being no constant
/// term to hold them up.
pub fn nonsingular_decay_probe(
    level: u64,
    chi: &DirichletCharacter,
    a: &Cusp,
    b: &Cusp,
    s: Complex64,
    ys: &[f64],
) -> Result<Vec<f64>> {
    if b.is_singular_for(chi) {
        return Err(Error::Domain(format!(
            "{:?} is singular for {}, the probe needs a non-singular target",
            b,
            chi.label()
        )));
    }
    let sm = b.scaling_matrix();
    let trunc = FourierTruncation::default();
    ys.iter()
        .map(|&y| Ok(eval_cusp_eisenstein(level, chi, a, sm.apply(c(0.3, y)), s, trunc)?.norm()))
        .collect()
}

/// Per-cusp contribution to the weighted log sums.
#[derive(Clone, Debug)]
pub struct HardSumsRow {
    pub cusp: Cusp,
    /// |φ_{∞𝔞}(½+iT, χ)|².
    pub weight: f64,
    /// weight · log f_𝔞.
    pub log_f: f64,
    /// weight · log N/(q f_𝔞).
    pub log_rest: f64,
}

/// The three weighted sums over the singular cusps at s = ½ + iT.
#[derive(Clone, Debug)]
pub struct HardSumsReport {
    pub level: u64,
    pub conductor: u64,
    pub t_param: f64,
    /// S1 = Σ weight · log N/(q f_𝔞).
    pub s1: f64,
    /// S2 = Σ weight · Σ_{p|N/f_𝔞} ψ(p) log p / (ψ(p) p^{2iT} − 1).
    pub s2: Complex64,
    /// S3 = Σ weight · log f_𝔞.
    pub s3: f64,
    /// |S3 + S1 − log N/q|: zero in exact arithmetic, by unitarity.
    pub identity_residual: f64,
    pub rows: Vec<HardSumsRow>,
}

/// Weighted log sums of the ∞ row. Unitarity forces the exact identity
/// Σ |φ_{∞𝔞}|² (log f_𝔞 + log N/(q f_𝔞)) = log N/q, which the report
/// records as `identity_residual`.
pub fn hard_sums(level: u64, chi: &DirichletCharacter, t_param: f64) -> Result<HardSumsReport> {
    let s = c(0.5, t_param);
    let row = phi_infinity_row(level, chi, s)?;
    let q = chi.conductor;
    let psi = chi.primitive_inducer()?;
    let (mut s1, mut s2, mut s3) = (0.0, c(0.0, 0.0), 0.0);
    let mut rows = Vec::new();
    for (cusp, v) in &row.entries {
        let weight = v.norm_sqr();
        let log_f = weight * (cusp.f as f64).ln();
        let log_rest = weight * (level as f64 / (q * cusp.f) as f64).ln();
        s1 += log_rest;
        s3 += log_f;
        if weight > 1e-300 {
            for p in factorize(level / cusp.f)?.primes() {
                let xp = psi.value(p as i64);
                s2 += weight * xp * (p as f64).ln()
                    / (xp * rpow(p as f64, c(0.0, 2.0 * t_param)) - 1.0);
            }
        }
        rows.push(HardSumsRow { cusp: cusp.clone(), weight, log_f, log_rest });
    }
    let identity_residual = (s3 + s1 - (level as f64 / q as f64).ln()).abs();
    Ok(HardSumsReport {
        level,
        conductor: q,
        t_param,
        s1,
        s2,
        s3,
        identity_residual,
        rows,
    })
}

/// Σ_{g|L} (log g / g) k^{ω(g)} for squarefree L, in closed form: the sum is
/// −F′(1) for F(σ) = ∏_{p|L}(1 + k p^{−σ}).
pub fn divisor_log_weight_sum(l: u64, k: u32) -> Result<f64> {
    let fac = factorize(l)?;
    if !fac.is_squarefree() {
        return Err(Error::Domain(format!("{l} is not squarefree")));
    }
    let mut prod = 1.0;
    let mut sum = 0.0;
    for p in fac.primes() {
        let r = k as f64 / p as f64;
        prod *= 1.0 + r;
        sum += r * (p as f64).ln() / (1.0 + r);
    }
    Ok(prod * sum)
}

/// Numeric constant-term oracle: solve E_𝔞(σ_𝔟(x+iy_j)) = C y_j^s + D y_j^{1−s}
/// at two heights for (C, D). Validates the closed forms, never replaces them.
pub fn extract_constant_term(
    level: u64,
    chi: &DirichletCharacter,
    a: &Cusp,
    b: &Cusp,
    s: Complex64,
    y1: f64,
    y2: f64,
) -> Result<ConstantTermPair> {
    let sm = b.scaling_matrix();
    let trunc = FourierTruncation::default();
    let x = 0.27;
    let e1 = eval_cusp_eisenstein(level, chi, a, sm.apply(c(x, y1)), s, trunc)?;
    let e2 = eval_cusp_eisenstein(level, chi, a, sm.apply(c(x, y2)), s, trunc)?;
    let (a11, a12) = (rpow(y1, s), rpow(y1, c(1.0, 0.0) - s));
    let (a21, a22) = (rpow(y2, s), rpow(y2, c(1.0, 0.0) - s));
    let det = a11 * a22 - a12 * a21;
    if det.norm() < 1e-12 {
        return Err(Error::Degenerate(format!("heights {y1}, {y2} cannot separate y^s from y^(1-s)")));
    }
    Ok(ConstantTermPair { c: (e1 * a22 - e2 * a12) / det, d: (a11 * e2 - a21 * e1) / det })
}
