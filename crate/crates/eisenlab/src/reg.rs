//! Renormalized integrals on Y₀(N) and the finite part of |E_∞(z, ½+iT, χ)|².
//!
//! Divergent unfolding integrals are made finite by the classical truncation
//! recipe: pick a height R ≥ 3/2, cut the surface into a compact core and one
//! horoball zone σ_𝔞{0 < x < 1, y > R} per cusp, and replace each zone
//! integral of F by ∫ (F − ψ_𝔞) dμ − Σᵢ cᵢ R^{αᵢ−1}/(αᵢ−1), where
//! ψ_𝔞(y) = Σᵢ cᵢ y^{αᵢ} is the declared growth of F at 𝔞. The result is
//! independent of R and equals the ordinary integral whenever that converges.
//!
//! On top of the quadrature sits the closed form of the renormalized square:
//!
//!   ℰ(z) = lim_{β→0} [ E_∞(z, 1+β) + Σ_𝔞 φ_{∞𝔞}(½+iT, χ) φ_{∞𝔞}(½+β−iT, χ̄)
//!              · E_𝔞(z, 1−β) ] + 2 Re( φ_{∞∞}(½+iT, χ) E_∞(z, 1−2iT) ),
//!
//! with trivial-character series of the same level on the right. ℰ captures
//! |E_∞(z, ½+iT, χ)|² up to terms that integrate to zero against bounded
//! invariant test functions, and its trace down to any divisor level M | N
//! collapses to the closed shape
//!
//!   Tr ℰ = c₀ + Σ_{g|M} c_g G(gz) + Σ_{g|M} 2 Re( w_g E(gz, 1+2iT) ),
//!
//! where G is the level-one Kronecker limit function. The c's come from the
//! Laurent data of trivial-character series at s = 1 together with one
//! logarithmic-derivative term of the scattering row; everything downstream
//! of the scattering matrix is exact arithmetic in the divisor structure.

use crate::arith::{divisors, euler_phi, factorize, gcd, mobius};
use crate::characters::{character_group, DirichletCharacter};
use crate::cusps::{coset_count, cusp_set, gamma0_quotient_reps, reduce, Cusp, Mat2};
use crate::eisen::{
    eval_cusp_eisenstein, eval_level1_e, eval_level1_g, FourierTruncation,
};
use crate::error::{Error, Result};
use crate::geom::{inner_product, BumpProfile, CosetSelect, Kahan, QuadratureSpec, TestFunction};
use crate::jet::Jet;
use crate::lfun::log_derivative;
use crate::scatter::{
    al_log_derivative, al_pair_entry, al_split, phi_infinity_entry, phi_infinity_row,
    phi_log_derivative,
};
use num_complex::Complex64;
use rayon::prelude::*;
use std::collections::BTreeMap;
use std::f64::consts::PI;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Real part extraction that refuses to discard a non-negligible imaginary
/// component: assembled constants are real only because of identities that
/// the computation should actually satisfy.
fn re_strict(v: Complex64, tol: f64, what: &str) -> Result<f64> {
    if !v.is_finite() {
        return Err(Error::Accuracy(format!("{what} is not finite: {v}")));
    }
    if v.im.abs() > tol * v.re.abs().max(1.0) {
        return Err(Error::Accuracy(format!(
            "{what} should be real, got imaginary part {:.3e}",
            v.im
        )));
    }
    Ok(v.re)
}

/// How far above the truncation height a zone integral follows the
/// integrand. The renormalized integrand must decay like a Fourier tail in
/// the zone, so e^{−2π(R+5)} of headroom is ample for double precision.
const ZONE_SPAN: f64 = 5.0;

/// Declared growth ψ_𝔞(y) = Σᵢ cᵢ y^{αᵢ} of an integrand at one cusp.
/// Cusps without a profile are treated as ψ ≡ 0.
#[derive(Clone, Debug)]
pub struct CuspProfile {
    pub cusp: Cusp,
    /// (cᵢ, αᵢ) pairs. Exponent 1 is rejected: its antiderivative is the
    /// logarithm and the R-independence of the recipe breaks down.
    pub terms: Vec<(Complex64, Complex64)>,
}

impl CuspProfile {
    /// Σᵢ cᵢ R^{αᵢ−1}/(αᵢ−1): the exact value the truncated tail integral
    /// ∫_R^∞ ψ dμ is replaced by (its analytic continuation in the αᵢ).
    fn antiderivative(&self, r: f64) -> Complex64 {
        let mut v = c(0.0, 0.0);
        for &(coeff, alpha) in &self.terms {
            v += coeff * Complex64::from(r).powc(alpha - 1.0) / (alpha - 1.0);
        }
        v
    }
}

fn eval_tail(terms: &[(Complex64, Complex64)], y: f64) -> Complex64 {
    let mut v = c(0.0, 0.0);
    for &(coeff, alpha) in terms {
        v += coeff * Complex64::from(y).powc(alpha);
    }
    v
}

#[derive(Clone, Debug)]
pub struct RenormResult {
    pub value: Complex64,
    pub r_used: f64,
    /// |value(2R) − value(R)| at the final resolution. Should sit at the
    /// quadrature noise floor; anything larger means the declared profiles
    /// do not actually match the integrand's growth.
    pub r_independence_residual: f64,
    pub resolution_used: u32,
}

/// Core + zone quadrature at one resolution. The core is gridded chart by
/// chart: coset translates α_k of the SL₂(ℤ) domain D, log-y rows, columns
/// at x midpoints, each chart capped at its own zone boundary y = W_k R,
/// where W_k is the width of the chart's limit cusp α_k(∞).
///
/// The cap is exact, not an approximation: for R ≥ 3/2 the zones are
/// disjoint and the zone of 𝔟 is tiled, up to measure zero, by the top
/// slabs {y > W_k R} of precisely the W_𝔟 charts whose limit cusp is 𝔟
/// (the slab areas 1/(W_𝔟 R) sum over those charts to the zone area 1/R).
/// So "below every cap" is the truncated core on the nose, and no
/// point-by-point zone membership test is needed.
fn grid_value<F>(
    f: &F,
    level: u64,
    charts: &[(Mat2, f64)],
    profiles: &BTreeMap<(u64, u64), CuspProfile>,
    r: f64,
    res: u32,
) -> Result<Complex64>
where
    F: Fn(Complex64) -> Result<Complex64> + Sync,
{
    let nx = res as usize;
    let hx = 1.0 / nx as f64;
    let columns: Vec<(usize, usize)> =
        (0..charts.len()).flat_map(|k| (0..nx).map(move |ix| (k, ix))).collect();
    let sums = columns
        .par_iter()
        .map(|&(k, ix)| -> Result<Complex64> {
            let (chart, w_k) = (&charts[k].0, charts[k].1);
            let x = -0.5 + (ix as f64 + 0.5) * hx;
            let t0 = (1.0 - x * x).sqrt().ln();
            let t1 = (w_k * r).ln();
            let nt = ((t1 - t0) * res as f64).ceil().max(1.0) as usize;
            let ht = (t1 - t0) / nt as f64;
            let mut acc = Kahan::new();
            for it in 0..nt {
                let y = (t0 + (it as f64 + 0.5) * ht).exp();
                // dμ = dx dy/y² = dx dt/y in log-height coordinates
                acc.add(f(chart.apply(c(x, y)))? * (hx * ht / y));
            }
            Ok(acc.total())
        })
        .collect::<Result<Vec<_>>>()?;
    let mut total = Kahan::new();
    for v in sums {
        total.add(v);
    }

    for cusp in cusp_set(level)? {
        let sigma = cusp.scaling_matrix();
        let empty: &[(Complex64, Complex64)] = &[];
        let terms: &[(Complex64, Complex64)] = profiles
            .get(&(cusp.f, cusp.u))
            .map(|p| p.terms.as_slice())
            .unwrap_or(empty);
        let nxz = (res as usize / 2).max(24);
        let hxz = 1.0 / nxz as f64;
        let (t0, t1) = (r.ln(), (r + ZONE_SPAN).ln());
        let nt = ((t1 - t0) * nxz as f64).ceil() as usize;
        let ht = (t1 - t0) / nt as f64;
        let sums = (0..nxz)
            .into_par_iter()
            .map(|ix| -> Result<Complex64> {
                let x = (ix as f64 + 0.5) * hxz;
                let mut acc = Kahan::new();
                for it in 0..nt {
                    let y = (t0 + (it as f64 + 0.5) * ht).exp();
                    let v = f(sigma.apply(c(x, y)))? - eval_tail(terms, y);
                    acc.add(v * (hxz * ht / y));
                }
                Ok(acc.total())
            })
            .collect::<Result<Vec<_>>>()?;
        for v in sums {
            total.add(v);
        }
        if let Some(p) = profiles.get(&(cusp.f, cusp.u)) {
            total.add(-p.antiderivative(r));
        }
    }
    Ok(total.total())
}

/// Renormalized integral of `f` over Y₀(level) with declared cusp growth.
///
/// `f` is sampled through coset charts of the surface, so it must be
/// Γ₀(level)-invariant; `profiles` lists ψ_𝔞 for every cusp where f grows
/// (missing cusps get ψ ≡ 0, i.e. f itself must decay there). Refines the
/// grid until two consecutive resolutions agree to `spec.target_rel_error`,
/// then repeats the whole evaluation at height 2R to report how R-dependent
/// the answer still is.
pub fn renormalized_integral<F>(
    f: &F,
    level: u64,
    profiles: &[CuspProfile],
    r: f64,
    spec: &QuadratureSpec,
) -> Result<RenormResult>
where
    F: Fn(Complex64) -> Result<Complex64> + Sync,
{
    if level == 0 {
        return Err(Error::Domain("level must be positive".into()));
    }
    if !(r >= 1.5) {
        return Err(Error::Domain(format!(
            "truncation height {r} too low: zones must embed disjointly, need R ≥ 1.5"
        )));
    }
    let mut map: BTreeMap<(u64, u64), CuspProfile> = BTreeMap::new();
    for p in profiles {
        if p.cusp.level != level {
            return Err(Error::Domain(format!(
                "profile cusp {:?} does not live at level {level}",
                p.cusp
            )));
        }
        let canon = reduce(p.cusp.u as i64, p.cusp.f as i64, level)?;
        if canon != p.cusp {
            return Err(Error::Domain(format!(
                "profile cusp {:?} is not canonical (reduces to {:?})",
                p.cusp, canon
            )));
        }
        for &(_, alpha) in &p.terms {
            if (alpha - 1.0).norm() < 1e-9 {
                return Err(Error::Domain(
                    "growth exponent 1 is not renormalizable (logarithmic antiderivative)".into(),
                ));
            }
        }
        if map.insert((p.cusp.f, p.cusp.u), p.clone()).is_some() {
            return Err(Error::Domain(format!("duplicate profile for cusp {:?}", p.cusp)));
        }
    }

    // chart k is capped at y = W_k R, W_k the width of its limit cusp
    let charts: Vec<(Mat2, f64)> = gamma0_quotient_reps(level, 1)?
        .into_iter()
        .map(|g| -> Result<(Mat2, f64)> {
            let w = if g.c == 0 { 1 } else { reduce(g.a, g.c, level)?.width() };
            Ok((g, w as f64))
        })
        .collect::<Result<Vec<_>>>()?;

    let mut res = spec.resolution.max(24);
    let mut prev = grid_value(f, level, &charts, &map, r, res)?;
    for _ in 0..4 {
        res *= 2;
        let value = grid_value(f, level, &charts, &map, r, res)?;
        if (value - prev).norm() <= spec.target_rel_error * value.norm().max(1.0) {
            let again = grid_value(f, level, &charts, &map, 2.0 * r, res)?;
            return Ok(RenormResult {
                value,
                r_used: r,
                r_independence_residual: (again - value).norm(),
                resolution_used: res,
            });
        }
        prev = value;
    }
    Err(Error::Accuracy(format!(
        "renormalized integral did not settle by resolution {res} (level {level}, R = {r})"
    )))
}

/// Laurent data at s = 1 of a trivial-character Eisenstein series: the
/// finite part of E_𝔞(z, s) is
///
///   constant + Σ_{g|N} g_coeffs[g] · G(gz)   (+ η-twisted terms when the
///   cusp has gcd(f, N/f) > 2; those never survive the weighted sums this
///   module builds, see [`eta_cancellation_check`]).
///
/// Both pieces come from the same divisor sum F_𝔞(s) = (Wf)^{−s}/φ(d) ·
/// Π_{p|N}(1−p^{−2s})⁻¹ · Σ_{a|f, b|N/f} μ(a)μ(b)(ab)^{−s}, evaluated as a
/// first-order jet at s = 1: the per-dilation values are the coefficients
/// of G, and (3/π)·dF_𝔞/ds(1) is the constant.
#[derive(Clone, Debug)]
pub struct LaurentData {
    pub level: u64,
    pub cusp: Cusp,
    pub constant: f64,
    pub g_coeffs: BTreeMap<u64, f64>,
}

impl LaurentData {
    /// F_𝔞(1) = Σ_g g_coeffs[g]. Times 3/π this is the residue of E_𝔞 at
    /// s = 1, which must equal 1/vol(Y₀(N)) for every cusp.
    pub fn residue_factor(&self) -> f64 {
        self.g_coeffs.values().sum()
    }
}

pub fn laurent_finite_part(level: u64, cusp: &Cusp) -> Result<LaurentData> {
    if cusp.level != level {
        return Err(Error::Domain(format!(
            "cusp {:?} does not live at level {level}",
            cusp
        )));
    }
    let cusp = reduce(cusp.u as i64, cusp.f as i64, level)?;
    let f = cusp.f;
    let nf = level / f;
    let d = gcd(f, nf);
    let wf = cusp.width() * f; // = N/d
    let s = Jet::variable(c(1.0, 0.0));

    // (Wf)^{−s}/φ(d) · ζ(2s)/L(2s, χ₀ mod N): the ζ cancels, leaving the
    // finite Euler product over p | N.
    let mut pre = Jet::const_pow(c(wf as f64, 0.0), -s) * (1.0 / euler_phi(d)? as f64);
    for p in factorize(level)?.primes() {
        let factor = Jet::real_constant(1.0) - Jet::const_pow(c(p as f64, 0.0), s * (-2.0));
        pre = pre / factor;
    }

    let mut vals: BTreeMap<u64, Complex64> = BTreeMap::new();
    let mut deriv = c(0.0, 0.0);
    for a in divisors(f)? {
        let ma = mobius(a)?;
        if ma == 0 {
            continue;
        }
        for b in divisors(nf)? {
            let mb = mobius(b)?;
            if mb == 0 {
                continue;
            }
            let g = b * (f / a);
            let term = pre * Jet::const_pow(c((a * b) as f64, 0.0), -s) * ((ma * mb) as f64);
            *vals.entry(g).or_insert_with(|| c(0.0, 0.0)) += term.v;
            deriv += term.d;
        }
    }

    let mut g_coeffs = BTreeMap::new();
    for (g, v) in vals {
        g_coeffs.insert(g, re_strict(v, 1e-9, "dilation coefficient")?);
    }
    let constant = (3.0 / PI) * re_strict(deriv, 1e-9, "Laurent constant")?;
    Ok(LaurentData { level, cusp, constant, g_coeffs })
}

/// The same constant in closed form:
///   vol⁻¹ ( log(d/N) + Σ_{p|N} log p/(p+1) + Σ_{p|d} log p/(p−1) ),
/// d = (f, N/f). Follows from the Euler factorization
///   F(s) = (N/d)^{−s}/φ(d) · ∏_{p|N}(1+p^{−s})⁻¹ · ∏_{p|d}(1−p^{−s});
/// both p-products contribute positive log-derivatives at s = 1. Used to
/// cross-check the jet assembly.
pub fn laurent_constant_closed_form(level: u64, cusp: &Cusp) -> Result<f64> {
    let d = gcd(cusp.f, level / cusp.f);
    let vol = PI / 3.0 * coset_count(level)? as f64;
    let mut v = (d as f64 / level as f64).ln();
    for p in factorize(level)?.primes() {
        v += (p as f64).ln() / (p as f64 + 1.0);
    }
    for p in factorize(d)?.primes() {
        v += (p as f64).ln() / (p as f64 - 1.0);
    }
    Ok(v / vol)
}

/// Exact vanishing of the η-twisted Laurent terms in u-averaged sums.
///
/// The finite part of E_𝔞 at a cusp with r | (f_M, M/f_M), r > 2, carries
/// terms weighted by η̄(u) for primitive η mod r. Every aggregate this
/// module forms sums over full orbits u ∈ (ℤ/d_N)ˣ with u-independent
/// weights, so those terms drop out exactly when, orbit by orbit, the
/// values η(u_M) distribute evenly over all ord(η)-th roots of unity.
/// This checks that combinatorial fact directly on the reduced cusps, with
/// no floating point: `false` means some η-sum would survive.
pub fn eta_cancellation_check(level: u64, m: u64) -> Result<bool> {
    if m == 0 || level % m != 0 {
        return Err(Error::Domain(format!("{m} must divide {level}")));
    }
    for f in divisors(level)? {
        let dn = gcd(f, level / f);
        let orbit: Vec<u64> = (1..=dn).filter(|&u| gcd(u, dn) == 1).collect();
        let reduced = orbit
            .iter()
            .map(|&u| {
                // lift the class mod dn to a numerator coprime to f, so the
                // fraction u/f really names a denominator-f cusp
                let uu = (0..)
                    .map(|k| u + k * dn)
                    .find(|&uu| gcd(uu, f) == 1)
                    .unwrap();
                reduce(uu as i64, f as i64, m)
            })
            .collect::<Result<Vec<Cusp>>>()?;
        let fm = reduced[0].f;
        if reduced.iter().any(|cm| cm.f != fm) {
            return Ok(false); // orbit members would not even share coefficients
        }
        let dm = gcd(fm, m / fm);
        for r in divisors(dm)? {
            if r <= 2 {
                continue; // no primitive characters to twist by
            }
            for eta in character_group(r)?.all_characters() {
                if !eta.is_primitive() {
                    continue;
                }
                let ord = eta.order();
                let mut counts: BTreeMap<u64, u64> = BTreeMap::new();
                for cm in &reduced {
                    match eta.value_exponent(cm.u as i64) {
                        // value e(k/den) with den | ord: normalize to j/ord
                        Some((k, den)) => *counts.entry(k * (ord / den) % ord).or_insert(0) += 1,
                        None => return Ok(false),
                    }
                }
                let want = orbit.len() as u64 / ord;
                if counts.len() as u64 != ord || counts.values().any(|&n| n != want) {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// Which member of the β-family a kernel term belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LimitPoint {
    /// E_𝔞(z, 1+β): carries the growing main term.
    OnePlusBeta,
    /// E_𝔞(z, 1−β), weighted by the scattering product at β.
    OneMinusBeta,
    /// E_𝔞(z, 1−2iT): the oscillating cross term.
    OneMinusTwoIT,
    /// E_𝔞(z, 1+2iT): its conjugate partner.
    OnePlusTwoIT,
}

/// One term of the defining limit, recorded at β = 0.
#[derive(Clone, Debug)]
pub struct KernelTerm {
    pub weight: Complex64,
    pub cusp: Cusp,
    pub at: LimitPoint,
}

/// Closed form of Tr^N_M ℰ as a finite cocktail of level-one objects:
///
///   c₀ + Σ_{g|M} cg[g] · G(gz) + Σ_{g|M} 2 Re( osc[g] · E(gz, 1+2iT) ).
///
/// `c0_display` is the compact two-term shape vol⁻¹(log(N²/(M(M,N/q))) +
/// 4 Re L′/L(1+2iT, ψ̄)) (or its Atkin-Lehner analogue); the gap between the
/// exact constant and the display is the genuinely unmodeled O_T(1) part.
#[derive(Clone, Debug)]
pub struct TracedForm {
    pub level: u64,
    pub traced_level: u64,
    pub conductor: u64,
    pub t_param: f64,
    pub c0: f64,
    pub c0_display: f64,
    pub c0_gap: f64,
    pub cg: BTreeMap<u64, f64>,
    pub osc: BTreeMap<u64, Complex64>,
}

impl TracedForm {
    pub fn eval(&self, z: Complex64, trunc: FourierTruncation) -> Result<f64> {
        let mut v = self.c0;
        for (&g, &coeff) in &self.cg {
            v += coeff * eval_level1_g(z * g as f64)?;
        }
        let s_osc = c(1.0, 2.0 * self.t_param);
        for (&g, &w) in &self.osc {
            v += 2.0 * (w * eval_level1_e(z * g as f64, s_osc, trunc)?).re;
        }
        Ok(v)
    }

    /// Σ_g |c_g| + 2 Σ_g |w_g|: total mass of the non-constant coefficients,
    /// the quantity that shrinks like M⁻¹(log log M)³ as the traced level
    /// grows.
    pub fn coefficient_mass(&self) -> f64 {
        self.cg.values().map(|v| v.abs()).sum::<f64>()
            + 2.0 * self.osc.values().map(|v| v.norm()).sum::<f64>()
    }
}

#[derive(Clone, Debug)]
enum KernelStyle {
    /// |E_∞(·, ½+iT, χ)|²: full scattering row from the ∞ cusp.
    Full,
    /// |E_𝔞(·, ½+iT, χ)|² for an Atkin-Lehner cusp of a primitive χ:
    /// the row has the single entry at 𝔞* and no oscillating term.
    Pair(Cusp),
}

fn assemble_traced(
    level: u64,
    chi: &DirichletCharacter,
    t: f64,
    m: u64,
    style: &KernelStyle,
) -> Result<TracedForm> {
    if m == 0 || level % m != 0 {
        return Err(Error::Domain(format!("traced level {m} must divide {level}")));
    }
    if t == 0.0 {
        return Err(Error::Domain("the spectral point must sit off the real axis (T ≠ 0)".into()));
    }
    let s = c(0.5, t);
    let vol_m = PI / 3.0 * coset_count(m)? as f64;
    let mut finite = c(0.0, 0.0);
    let mut cg: BTreeMap<u64, f64> = BTreeMap::new();
    let mut osc: BTreeMap<u64, Complex64> = BTreeMap::new();
    let mut fp_cache: BTreeMap<(u64, u64), LaurentData> = BTreeMap::new();
    let mut fp_at = |cusp_m: Cusp| -> Result<LaurentData> {
        if let Some(hit) = fp_cache.get(&(cusp_m.f, cusp_m.u)) {
            return Ok(hit.clone());
        }
        let data = laurent_finite_part(m, &cusp_m)?;
        fp_cache.insert((cusp_m.f, cusp_m.u), data.clone());
        Ok(data)
    };
    // weight × (finite part at the level-M reduction, plus the slope of the
    // β-family: log-derivative of the row entry and the width ratio log)
    let mut add_cusp = |finite: &mut Complex64,
                        cg: &mut BTreeMap<u64, f64>,
                        cusp_n: &Cusp,
                        weight: Complex64,
                        slope: Complex64|
     -> Result<()> {
        let cusp_m = reduce(cusp_n.u as i64, cusp_n.f as i64, m)?;
        let fp = fp_at(cusp_m)?;
        *finite += weight * fp.constant;
        for (&g, &v) in &fp.g_coeffs {
            *cg.entry(g).or_insert(0.0) += re_strict(weight * v, 1e-7, "G coefficient")?;
        }
        let log_width_ratio = (cusp_n.width() as f64 / cusp_n.width_at_level(m) as f64).ln();
        *finite -= weight * (slope + log_width_ratio) / vol_m;
        Ok(())
    };

    let display;
    match style {
        KernelStyle::Full => {
            let row = phi_infinity_row(level, chi, s)?;
            // the E_∞(1+β) member contributes its finite part with weight 1
            // and no slope (its width ratio is 1, its weight is constant)
            let inf_n = Cusp::infinity(level);
            add_cusp(&mut finite, &mut cg, &inf_n, c(1.0, 0.0), c(0.0, 0.0))?;
            for (cusp, val) in &row.entries {
                let w2 = val.norm_sqr();
                if w2 < 1e-30 {
                    continue;
                }
                let ld = phi_log_derivative(level, chi, cusp, s)?;
                add_cusp(&mut finite, &mut cg, cusp, c(w2, 0.0), ld)?;
            }
            // oscillating part: only the trivial character keeps φ_∞∞ ≠ 0
            if let Some(v_inf) = row.entry(&Cusp::infinity(level)) {
                if v_inf.norm_sqr() >= 1e-30 {
                    let wbar = v_inf.conj();
                    let s2 = c(2.0, 4.0 * t);
                    let mut euler = c(1.0, 0.0);
                    for p in factorize(m)?.primes() {
                        euler *= c(1.0, 0.0) - Complex64::from(p as f64).powc(-s2);
                    }
                    for g in divisors(m)? {
                        let mu = mobius(m / g)?;
                        if mu == 0 {
                            continue;
                        }
                        let cpg = mu as f64 * Complex64::from(m as f64).powc(-s2)
                            * Complex64::from(g as f64).powc(c(1.0, 2.0 * t))
                            / euler;
                        osc.insert(g, wbar * cpg);
                    }
                }
            }
            let psi = chi.primitive_inducer()?;
            let q = psi.modulus;
            display = ((level as f64 * level as f64 / (m as f64 * gcd(m, level / q) as f64)).ln()
                + 4.0 * log_derivative(c(1.0, 2.0 * t), &psi.conj())?.re)
                / vol_m;
        }
        KernelStyle::Pair(a) => {
            let astar = a.fricke_image()?;
            let pair = al_pair_entry(level, chi, a, &astar, s)?;
            let pair_back = al_pair_entry(level, &chi.conj(), a, &astar, c(0.5, -t))?;
            let w2 = pair * pair_back; // |φ_{𝔞𝔞*}|² = 1 up to rounding
            let ld = al_log_derivative(level, chi, a, s)?;
            // the log-derivative rides with the 1−β term; each member's own
            // width ratio log is handled inside add_cusp
            add_cusp(&mut finite, &mut cg, a, c(1.0, 0.0), c(0.0, 0.0))?;
            add_cusp(&mut finite, &mut cg, &astar, w2, ld)?;
            let (chi1, chi2) = al_split(level, chi, a)?;
            let prod = chi1.multiply(&chi2)?;
            display = (2.0 * (level as f64).ln()
                + 4.0 * log_derivative(c(1.0, 2.0 * t), &prod.conj())?.re)
                / vol_m;
        }
    }

    let c0 = re_strict(finite, 1e-7, "traced constant")?;
    Ok(TracedForm {
        level,
        traced_level: m,
        conductor: chi.conductor,
        t_param: t,
        c0,
        c0_display: display,
        c0_gap: c0 - display,
        cg,
        osc,
    })
}

/// The renormalized square of one Eisenstein series at its spectral point,
/// as a closed object: the defining β-family (`assembly`) plus the evaluated
/// finite form at M = N (`form`).
#[derive(Clone, Debug)]
pub struct RegKernel {
    pub level: u64,
    pub chi: DirichletCharacter,
    pub t_param: f64,
    /// Whose square this is: ∞ for the full row, the chosen cusp otherwise.
    pub base: Cusp,
    pub assembly: Vec<KernelTerm>,
    form: TracedForm,
    style: KernelStyle,
}

impl RegKernel {
    pub fn form(&self) -> &TracedForm {
        &self.form
    }

    /// ℰ(z) through the closed form at M = N.
    pub fn eval(&self, z: Complex64, trunc: FourierTruncation) -> Result<f64> {
        self.form.eval(z, trunc)
    }

    /// Tr^N_M ℰ for any M | N, reassembled at the traced level.
    pub fn traced_form(&self, m: u64) -> Result<TracedForm> {
        assemble_traced(self.level, &self.chi, self.t_param, m, &self.style)
    }

    /// |E_base(σ_𝔟(x+iy), ½+iT, χ)|² − ℰ(σ_𝔟(x+iy)) along a vertical ray at
    /// the cusp 𝔟. The difference is the reattached main growth: it must
    /// stay within linear growth in y at every cusp, which is what the
    /// boundedness harness checks.
    pub fn cancellation_probe(
        &self,
        b: &Cusp,
        x: f64,
        ys: &[f64],
        trunc: FourierTruncation,
    ) -> Result<Vec<f64>> {
        let sb = b.scaling_matrix();
        ys.iter()
            .map(|&y| {
                let z = sb.apply(c(x, y));
                let e = eval_cusp_eisenstein(
                    self.level,
                    &self.chi,
                    &self.base,
                    z,
                    c(0.5, self.t_param),
                    trunc,
                )?;
                Ok(e.norm_sqr() - self.form.eval(z, trunc)?)
            })
            .collect()
    }
}

/// Kernel for |E_∞(z, ½+iT, χ)|², χ even mod N.
pub fn build_kernel(level: u64, chi: &DirichletCharacter, t: f64) -> Result<RegKernel> {
    if chi.modulus != level {
        return Err(Error::Domain(format!(
            "character modulus {} does not match level {level}",
            chi.modulus
        )));
    }
    let style = KernelStyle::Full;
    let form = assemble_traced(level, chi, t, level, &style)?;
    let s = c(0.5, t);
    let row = phi_infinity_row(level, chi, s)?;
    let inf = Cusp::infinity(level);
    let mut assembly = vec![KernelTerm { weight: c(1.0, 0.0), cusp: inf, at: LimitPoint::OnePlusBeta }];
    for (cusp, val) in &row.entries {
        let w2 = val.norm_sqr();
        if w2 >= 1e-30 {
            assembly.push(KernelTerm {
                weight: c(w2, 0.0),
                cusp: *cusp,
                at: LimitPoint::OneMinusBeta,
            });
        }
    }
    if let Some(v_inf) = row.entry(&inf) {
        if v_inf.norm_sqr() >= 1e-30 {
            assembly.push(KernelTerm { weight: v_inf, cusp: inf, at: LimitPoint::OneMinusTwoIT });
            assembly.push(KernelTerm {
                weight: v_inf.conj(),
                cusp: inf,
                at: LimitPoint::OnePlusTwoIT,
            });
        }
    }
    Ok(RegKernel { level, chi: chi.clone(), t_param: t, base: inf, assembly, form, style })
}

/// Kernel for |E_𝔞(z, ½+iT, χ)|² at an Atkin-Lehner cusp ((f, N/f) = 1) of a
/// primitive even χ mod N. The scattering row from 𝔞 has a single entry, at
/// the complementary cusp 𝔞* = fricke image of 𝔞, of modulus one; there is
/// no oscillating term.
pub fn build_al_kernel(level: u64, chi: &DirichletCharacter, a: &Cusp, t: f64) -> Result<RegKernel> {
    if gcd(a.f, level / a.f) != 1 {
        return Err(Error::Domain(format!(
            "{:?} is not an Atkin-Lehner cusp of level {level}",
            a
        )));
    }
    let a = reduce(a.u as i64, a.f as i64, level)?;
    let style = KernelStyle::Pair(a);
    let form = assemble_traced(level, chi, t, level, &style)?;
    let astar = a.fricke_image()?;
    let s = c(0.5, t);
    let pair = al_pair_entry(level, chi, &a, &astar, s)?;
    let pair_back = al_pair_entry(level, &chi.conj(), &a, &astar, c(0.5, -t))?;
    let assembly = vec![
        KernelTerm { weight: c(1.0, 0.0), cusp: a, at: LimitPoint::OnePlusBeta },
        KernelTerm { weight: pair * pair_back, cusp: astar, at: LimitPoint::OneMinusBeta },
    ];
    Ok(RegKernel { level, chi: chi.clone(), t_param: t, base: a, assembly, form, style })
}

/// Polynomial extrapolation of (βᵢ, vᵢ) samples to β = 0 (Neville's scheme).
fn extrapolate_to_zero(pts: &[(f64, Complex64)]) -> Complex64 {
    let mut v: Vec<Complex64> = pts.iter().map(|&(_, v)| v).collect();
    let n = v.len();
    for k in 1..n {
        for i in 0..n - k {
            let (xi, xk) = (pts[i].0, pts[i + k].0);
            v[i] = (v[i] * xk - v[i + 1] * xi) / (xk - xi);
        }
    }
    v[0]
}

/// Numerical oracle for the full-row kernel: evaluate the defining β-family
/// at the sample offsets and extrapolate to β = 0. Independent of all the
/// Laurent bookkeeping: only trivial-character series values and scattering
/// entries at β-shifted points enter. Near β = 0 the two growing members
/// cancel a 1/β pole, so offsets should stay ≥ 10⁻³ or so.
pub fn defining_limit_probe(
    level: u64,
    chi: &DirichletCharacter,
    t: f64,
    z: Complex64,
    betas: &[f64],
    trunc: FourierTruncation,
) -> Result<f64> {
    if betas.len() < 2 {
        return Err(Error::Domain("need at least two β samples to extrapolate".into()));
    }
    let row = phi_infinity_row(level, chi, c(0.5, t))?;
    let triv = character_group(level)?.trivial();
    let chibar = chi.conj();
    let inf = Cusp::infinity(level);
    let mut pts = Vec::with_capacity(betas.len());
    for &beta in betas {
        let mut v = eval_cusp_eisenstein(level, &triv, &inf, z, c(1.0 + beta, 0.0), trunc)?;
        for (cusp, val) in &row.entries {
            if val.norm_sqr() < 1e-30 {
                continue;
            }
            let back = phi_infinity_entry(level, &chibar, cusp, c(0.5 + beta, -t))?;
            v += val * back * eval_cusp_eisenstein(level, &triv, cusp, z, c(1.0 - beta, 0.0), trunc)?;
        }
        pts.push((beta, v));
    }
    let mut v0 = extrapolate_to_zero(&pts);
    if let Some(v_inf) = row.entry(&inf) {
        if v_inf.norm_sqr() >= 1e-30 {
            let osc = eval_cusp_eisenstein(level, &triv, &inf, z, c(1.0, -2.0 * t), trunc)?;
            v0 += 2.0 * (v_inf * osc).re;
        }
    }
    re_strict(v0, 1e-4, "kernel limit")
}

/// Same oracle for the Atkin-Lehner kernel of [`build_al_kernel`].
pub fn al_defining_limit_probe(
    level: u64,
    chi: &DirichletCharacter,
    a: &Cusp,
    t: f64,
    z: Complex64,
    betas: &[f64],
    trunc: FourierTruncation,
) -> Result<f64> {
    if betas.len() < 2 {
        return Err(Error::Domain("need at least two β samples to extrapolate".into()));
    }
    let astar = a.fricke_image()?;
    let triv = character_group(level)?.trivial();
    let chibar = chi.conj();
    let forward = al_pair_entry(level, chi, a, &astar, c(0.5, t))?;
    let mut pts = Vec::with_capacity(betas.len());
    for &beta in betas {
        let mut v = eval_cusp_eisenstein(level, &triv, a, z, c(1.0 + beta, 0.0), trunc)?;
        let back = al_pair_entry(level, &chibar, a, &astar, c(0.5 + beta, -t))?;
        v += forward * back * eval_cusp_eisenstein(level, &triv, &astar, z, c(1.0 - beta, 0.0), trunc)?;
        pts.push((beta, v));
    }
    re_strict(extrapolate_to_zero(&pts), 1e-4, "kernel limit")
}

/// The weighted average −Σ_𝔞 |φ_{∞𝔞}(½+iT, χ)|² [ (φ′/φ)_{∞𝔞}(½−iT, χ̄) +
/// log W(𝔞) ], computed along two independent routes, with the compact
/// display 2 log N + 4 Re L′/L(1+2iT, ψ̄) it concentrates around.
#[derive(Clone, Debug)]
pub struct WeightedAverage {
    pub level: u64,
    pub conductor: u64,
    pub t_param: f64,
    /// Central differences of the actual scattering entries.
    pub from_entries: f64,
    /// The closed factorization into Λ′/Λ and prime logs.
    pub from_identity: f64,
    pub path_gap: f64,
    pub display: f64,
    /// from_identity − display: the O_T(1) content left unmodeled.
    pub remainder: f64,
}

pub fn weighted_average(level: u64, chi: &DirichletCharacter, t: f64) -> Result<WeightedAverage> {
    if t == 0.0 {
        return Err(Error::Domain("the weighted average needs T ≠ 0".into()));
    }
    let s = c(0.5, t);
    let row = phi_infinity_row(level, chi, s)?;
    let chibar = chi.conj();
    let s0 = c(0.5, -t);
    let mut from_entries = c(0.0, 0.0);
    let mut from_identity = c(0.0, 0.0);
    for (cusp, val) in &row.entries {
        let w2 = val.norm_sqr();
        if w2 < 1e-30 {
            continue;
        }
        let diff = |h: f64| -> Result<Complex64> {
            let plus = phi_infinity_entry(level, &chibar, cusp, s0 + c(h, 0.0))?;
            let minus = phi_infinity_entry(level, &chibar, cusp, s0 - c(h, 0.0))?;
            Ok((plus - minus) / (2.0 * h))
        };
        // central differences at steps h, h/2 collapse the h² error
        let h = 1e-3;
        let der = (diff(h / 2.0)? * 4.0 - diff(h)?) / 3.0;
        let ld_fd = der / phi_infinity_entry(level, &chibar, cusp, s0)?;
        let ld_closed = phi_log_derivative(level, chi, cusp, s)?;
        let lw = (cusp.width() as f64).ln();
        from_entries -= (ld_fd + lw) * w2;
        from_identity -= (ld_closed + lw) * w2;
    }
    let from_entries = re_strict(from_entries, 1e-5, "weighted average (differences)")?;
    let from_identity = re_strict(from_identity, 1e-8, "weighted average (identity)")?;
    let psi = chi.primitive_inducer()?;
    let display =
        2.0 * (level as f64).ln() + 4.0 * log_derivative(c(1.0, 2.0 * t), &psi.conj())?.re;
    Ok(WeightedAverage {
        level,
        conductor: chi.conductor,
        t_param: t,
        from_entries,
        from_identity,
        path_gap: from_entries - from_identity,
        display,
        remainder: from_identity - display,
    })
}

/// α_φ = Σ_g c_g ⟨G(g·), φ⟩_M + Σ_g 2 Re( w_g ⟨E(g·, 1+2iT), φ⟩_M ): the
/// non-constant part of ⟨Tr ℰ, φ⟩, with every summand kept.
#[derive(Clone, Debug)]
pub struct AlphaBreakdown {
    pub value: f64,
    /// (g, c_g, ⟨G(g·), φ⟩_M) per divisor.
    pub g_terms: Vec<(u64, f64, f64)>,
    /// (g, w_g, ⟨E(g·, 1+2iT), φ⟩_M) per divisor with a surviving weight.
    pub osc_terms: Vec<(u64, Complex64, Complex64)>,
}

pub fn alpha_phi(
    form: &TracedForm,
    phi: &TestFunction,
    spec: &QuadratureSpec,
    trunc: FourierTruncation,
) -> Result<AlphaBreakdown> {
    if phi.level != form.traced_level {
        return Err(Error::Domain(format!(
            "test function lives at level {}, form is traced to {}",
            phi.level, form.traced_level
        )));
    }
    let m = form.traced_level;
    let mut value = 0.0;
    let mut g_terms = Vec::new();
    let mut osc_terms = Vec::new();
    for (&g, &coeff) in &form.cg {
        let gf = g as f64;
        let ip = inner_product(
            &|z| Ok(c(eval_level1_g(z * gf)?, 0.0)),
            &|z| Ok(c(phi.value(z)?, 0.0)),
            m,
            spec,
        )?;
        let pairing = ip.value.re; // G and φ are real
        value += coeff * pairing;
        g_terms.push((g, coeff, pairing));
    }
    let s_osc = c(1.0, 2.0 * form.t_param);
    for (&g, &w) in &form.osc {
        let gf = g as f64;
        let ip = inner_product(
            &|z| eval_level1_e(z * gf, s_osc, trunc),
            &|z| Ok(c(phi.value(z)?, 0.0)),
            m,
            spec,
        )?;
        value += 2.0 * (w * ip.value).re;
        osc_terms.push((g, w, ip.value));
    }
    Ok(AlphaBreakdown { value, g_terms, osc_terms })
}

/// T_n-eigenvalue of G up to its additive shift: T_n G = λ(n) G +
/// (3/π) √n Σ_{a|n} a⁻¹ log(n/a²), with λ(n) = √n Σ_{b|n} 1/b.
fn hecke_lambda(n: u64) -> Result<f64> {
    let mut v = 0.0;
    for b in divisors(n)? {
        v += 1.0 / b as f64;
    }
    Ok((n as f64).sqrt() * v)
}

fn hecke_log_sum(n: u64) -> Result<f64> {
    let mut v = 0.0;
    for a in divisors(n)? {
        v += (n as f64 / (a * a) as f64).ln() / a as f64;
    }
    Ok(v)
}

/// Coset-summed pairing check for a form traced to a prime level M from a
/// primitive-character kernel. Route one pairs the form against each slice
/// φ_j of the level-M partition by quadrature and adds them up. Route two
/// never touches level M: Σ_j φ_j unfolds through T_g, leaving level-one
/// pairings against φ₀ with exact divisor-sum coefficients. For prime M the
/// G-coefficient Σ_g c_g (ν(M)/ν(g)) √g λ(g) collapses to exactly 2 and the
/// log part to (3/π)((M−1)/(M+1)) log M.
#[derive(Clone, Debug)]
pub struct ConsistencyReport {
    pub traced_level: u64,
    /// c₀⟨1, φ_j⟩_M + α_{φ_j} per coset slice.
    pub per_coset: Vec<f64>,
    pub quadrature_total: f64,
    pub hecke_total: f64,
    /// The closed prime-level prediction assembled from ⟨G, φ₀⟩₁, ⟨1, φ₀⟩₁.
    pub predicted: f64,
    pub g_coefficient: f64,
    /// Coefficient of (3/π) log M ⟨1, φ₀⟩₁, exactly (M−1)/(M+1) for prime M.
    pub log_coefficient: f64,
    pub route_gap: f64,
}

pub fn consistency_sum(
    form: &TracedForm,
    base: BumpProfile,
    spec: &QuadratureSpec,
    trunc: FourierTruncation,
) -> Result<ConsistencyReport> {
    if form.conductor != form.level {
        return Err(Error::Domain(
            "consistency sum expects a primitive character (conductor = level)".into(),
        ));
    }
    if !form.osc.is_empty() {
        return Err(Error::Domain("consistency sum expects no oscillating terms".into()));
    }
    let m = form.traced_level;
    let primes: Vec<u64> = factorize(m)?.primes().collect();
    if primes.len() != 1 || primes[0] != m {
        return Err(Error::Domain(format!("traced level {m} must be prime")));
    }

    let probe = TestFunction::new(base, m, CosetSelect::All)?;
    let nu_m = probe.class_count();
    let mut per_coset = Vec::with_capacity(nu_m);
    for j in 0..nu_m {
        let phi_j = TestFunction::new(base, m, CosetSelect::Index(j))?;
        let alpha = alpha_phi(form, &phi_j, spec, trunc)?;
        let one = inner_product(
            &|_| Ok(c(1.0, 0.0)),
            &|z| Ok(c(phi_j.value(z)?, 0.0)),
            m,
            spec,
        )?;
        per_coset.push(form.c0 * one.value.re + alpha.value);
    }
    let quadrature_total: f64 = per_coset.iter().sum();

    let phi0 = TestFunction::new(base, 1, CosetSelect::All)?;
    let ip_g = inner_product(
        &|z| Ok(c(eval_level1_g(z)?, 0.0)),
        &|z| Ok(c(phi0.value(z)?, 0.0)),
        1,
        spec,
    )?
    .value
    .re;
    let ip_1 = inner_product(&|_| Ok(c(1.0, 0.0)), &|z| Ok(c(phi0.value(z)?, 0.0)), 1, spec)?
        .value
        .re;

    let mut g_coefficient = 0.0;
    let mut log_part = 0.0;
    for (&g, &coeff) in &form.cg {
        let cover = coset_count(m)? as f64 / coset_count(g)? as f64;
        g_coefficient += coeff * cover * (g as f64).sqrt() * hecke_lambda(g)?;
        log_part += coeff * cover * g as f64 * hecke_log_sum(g)?;
    }
    let hecke_total = form.c0 * coset_count(m)? as f64 * ip_1
        + g_coefficient * ip_g
        + (3.0 / PI) * log_part * ip_1;
    let mf = m as f64;
    let predicted = form.c0 * coset_count(m)? as f64 * ip_1
        + 2.0 * ip_g
        + (3.0 / PI) * ((mf - 1.0) / (mf + 1.0)) * mf.ln() * ip_1;
    Ok(ConsistencyReport {
        traced_level: m,
        per_coset,
        quadrature_total,
        hecke_total,
        predicted,
        g_coefficient,
        log_coefficient: log_part / mf.ln(),
        route_gap: quadrature_total - hecke_total,
    })
}
