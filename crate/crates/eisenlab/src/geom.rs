//! Hyperbolic geometry and quadrature on modular curves Y₀(L).
//!
//! * [`reduce_to_domain`]: reduction to the standard fundamental domain D of
//!   SL₂(ℤ), returning the reducing matrix,
//! * [`TestFunction`]: the coset test-function system: a fixed C∞ bump φ₀
//!   supported in the interior of D, sliced into φ_j on Y₀(M) by the class
//!   of the reducing matrix in P¹(ℤ/M), so that φ₀ = Σ_j φ_j pointwise,
//! * [`inner_product`]: ⟨f,g⟩_L = ∫_{Y₀(L)} f ḡ dμ by midpoint quadrature in
//!   (x, log y) over coset translates of D, refined until two consecutive
//!   resolutions agree,
//! * [`ford_membership`] and [`portion_set`]: the horizontal strip
//!   B_M = {M⁻¹ < y ≤ 20000·M⁻¹} and the explicit family of coset
//!   representatives γ with γ(D^c(100)) ⊂ B_M.

use crate::arith::{gcd, mod_inverse};
use crate::cusps::{CosetTable, Mat2};
use crate::error::{Error, Result};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;
use std::sync::Arc;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Reduce z to the standard fundamental domain D = {|x| ≤ ½, |z| ≥ 1},
/// returning (z′, δ) with δz = z′. Terminates in O(log 1/y) steps.
pub fn reduce_to_domain(z: Complex64) -> Result<(Complex64, Mat2)> {
    if !(z.im > 0.0) {
        return Err(Error::Domain(format!("z = {z} is not in the upper half-plane")));
    }
    let s = Mat2::new(0, -1, 1, 0);
    let mut w = z;
    let mut delta = Mat2::IDENTITY;
    for _ in 0..10_000 {
        let n = w.re.round();
        if n != 0.0 {
            w.re -= n;
            delta = Mat2::translation(-(n as i64)).mul(&delta);
        }
        if w.norm_sqr() < 1.0 - 1e-15 {
            w = s.apply(w);
            delta = s.mul(&delta);
        } else {
            return Ok((w, delta));
        }
    }
    Err(Error::Accuracy(format!("fundamental-domain reduction stalled at z = {z}")))
}

/// Product bump b((x−x₀)/w)·b((2y−y₁−y₂)/(y₂−y₁)) with b(t) = e^{1−1/(1−t²)}
/// on |t| < 1: C∞, non-negative, supported in [x₀±w] × [y₁, y₂].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BumpProfile {
    pub x_center: f64,
    pub x_halfwidth: f64,
    pub y_low: f64,
    pub y_high: f64,
}

impl BumpProfile {
    /// Default profile: centered, width 0.4, heights 1.5 to 2.5.
    pub const STANDARD: BumpProfile =
        BumpProfile { x_center: 0.0, x_halfwidth: 0.4, y_low: 1.5, y_high: 2.5 };

    /// Higher support 2 ≤ y ≤ 3, used by the bad-coset experiment.
    pub const HIGH: BumpProfile =
        BumpProfile { x_center: 0.0, x_halfwidth: 0.4, y_low: 2.0, y_high: 3.0 };

    fn bump(t: f64) -> f64 {
        if t.abs() < 1.0 {
            (1.0 - 1.0 / (1.0 - t * t)).exp()
        } else {
            0.0
        }
    }

    pub fn eval(&self, z: Complex64) -> f64 {
        Self::bump((z.re - self.x_center) / self.x_halfwidth)
            * Self::bump((2.0 * z.im - self.y_low - self.y_high) / (self.y_high - self.y_low))
    }

    /// The closed support must sit inside the interior of D, so that the
    /// reduction (hence the coset class) is unambiguous wherever the bump
    /// is nonzero.
    fn validate(&self) -> Result<()> {
        if !(self.x_halfwidth > 0.0 && self.y_low > 0.0 && self.y_high > self.y_low) {
            return Err(Error::Domain("bump profile is empty".into()));
        }
        let xr = self.x_center.abs() + self.x_halfwidth;
        let x_near = if self.x_center.abs() <= self.x_halfwidth {
            0.0
        } else {
            self.x_center.abs() - self.x_halfwidth
        };
        if xr >= 0.5 || x_near * x_near + self.y_low * self.y_low <= 1.0 {
            return Err(Error::Domain(
                "bump support must lie in the interior of the fundamental domain".into(),
            ));
        }
        Ok(())
    }
}

/// Which slice of the partition the function represents.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CosetSelect {
    /// φ₀ itself: the full SL₂(ℤ)-invariant bump.
    All,
    /// φ_j on Y₀(M): supported on the single coset translate of index j.
    Index(usize),
}

/// A test function of the coset system at level M. For z with reduction
/// δz = z′ ∈ D, the value is base(z′) when the class of δ⁻¹ in P¹(ℤ/M)
/// equals the selected index (always, for `All`), else 0. This makes each
/// φ_j exactly Γ₀(M)-invariant and Σ_j φ_j = φ₀ pointwise.
#[derive(Clone)]
pub struct TestFunction {
    pub base: BumpProfile,
    pub level: u64,
    pub coset: CosetSelect,
    table: Arc<CosetTable>,
}

impl TestFunction {
    pub fn new(base: BumpProfile, level: u64, coset: CosetSelect) -> Result<TestFunction> {
        base.validate()?;
        let table = Arc::new(CosetTable::build(level)?);
        if let CosetSelect::Index(j) = coset {
            if j >= table.len() {
                return Err(Error::Domain(format!(
                    "coset index {j} out of range, ν({level}) = {}",
                    table.len()
                )));
            }
        }
        Ok(TestFunction { base, level, coset, table })
    }

    /// The level-1 bump φ₀ with the standard profile.
    pub fn phi0() -> TestFunction {
        TestFunction::new(BumpProfile::STANDARD, 1, CosetSelect::All).expect("valid profile")
    }

    /// ν(level): how many slices the partition has.
    pub fn class_count(&self) -> usize {
        self.table.len()
    }

    pub fn value(&self, z: Complex64) -> Result<f64> {
        eval_test_function(self, z)
    }
}

/// Evaluate a test function: reduce to D, then gate on the P¹(ℤ/M) class of
/// δ⁻¹. Points where the bump vanishes are gated out before classification,
/// so boundary ambiguity of the reduction never matters.
pub fn eval_test_function(phi: &TestFunction, z: Complex64) -> Result<f64> {
    let (zp, delta) = reduce_to_domain(z)?;
    let v = phi.base.eval(zp);
    match phi.coset {
        CosetSelect::All => Ok(v),
        CosetSelect::Index(j) => {
            if v == 0.0 {
                Ok(0.0)
            } else if phi.table.class_of(&delta.inv()) == j {
                Ok(v)
            } else {
                Ok(0.0)
            }
        }
    }
}

/// Quadrature controls: grid density per unit of (x, log y), the height at
/// which the y-integration is cut (the region above it is integrated on an
/// exact grid in −1/y), and the relative agreement required between two
/// consecutive refinements.
#[derive(Clone, Copy, Debug)]
pub struct QuadratureSpec {
    pub resolution: u32,
    pub y_max: f64,
    pub target_rel_error: f64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec { resolution: 256, y_max: 6.0, target_rel_error: 1e-6 }
    }
}

impl QuadratureSpec {
    fn validate(&self) -> Result<()> {
        if self.resolution < 16 {
            return Err(Error::Domain(format!("resolution {} < 16", self.resolution)));
        }
        if !(self.y_max >= 5.0) {
            return Err(Error::Domain(format!("y_max {} < 5", self.y_max)));
        }
        if !(self.target_rel_error > 0.0) {
            return Err(Error::Domain("target_rel_error must be positive".into()));
        }
        Ok(())
    }
}

/// A converged inner product with its refinement diagnostics.
#[derive(Clone, Copy, Debug)]
pub struct InnerProduct {
    pub value: Complex64,
    /// |I(r) − I(r/2)| at the accepted resolution r.
    pub refinement_delta: f64,
    pub resolution_used: u32,
    pub cells: u64,
}

pub(crate) struct Kahan {
    s: Complex64,
    e: Complex64,
}

impl Kahan {
    pub(crate) fn new() -> Kahan {
        Kahan { s: c(0.0, 0.0), e: c(0.0, 0.0) }
    }

    pub(crate) fn add(&mut self, v: Complex64) {
        let y = v - self.e;
        let t = self.s + y;
        self.e = (t - self.s) - y;
        self.s = t;
    }

    pub(crate) fn total(&self) -> Complex64 {
        self.s
    }
}

/// One grid pass at a fixed resolution. Cells are grouped into columns
/// (coset, x-index); each column is summed sequentially and the column sums
/// are folded in index order, so the result is independent of thread count.
fn integrate_once<F, G>(
    f: &F,
    g: &G,
    table: &CosetTable,
    spec: &QuadratureSpec,
    res: u32,
) -> Result<(Complex64, u64)>
where
    F: Fn(Complex64) -> Result<Complex64> + Sync,
    G: Fn(Complex64) -> Result<Complex64> + Sync,
{
    let nx = res as usize;
    let hx = 1.0 / nx as f64;
    let nu = table.len();
    let t_top = spec.y_max.ln();
    let columns: Vec<Result<(Complex64, u64)>> = (0..nu * nx)
        .into_par_iter()
        .map(|col| {
            let lift = table.lifts[col / nx];
            let ix = col % nx;
            let x = -0.5 + (ix as f64 + 0.5) * hx;
            let y0 = (1.0 - x * x).sqrt();
            let t0 = y0.ln();
            let nt = ((t_top - t0) * res as f64).ceil().max(1.0) as usize;
            let ht = (t_top - t0) / nt as f64;
            let mut acc = Kahan::new();
            let mut cells = 0u64;
            for it in 0..nt {
                let t = t0 + (it as f64 + 0.5) * ht;
                let y = t.exp();
                let w = lift.apply(c(x, y));
                let gv = g(w)?;
                cells += 1;
                if gv != c(0.0, 0.0) {
                    acc.add(f(w)? * gv.conj() * (hx * ht / y));
                }
            }
            // Tail above y_max on the exact grid v = −1/y: dμ = dx dv there.
            let v_span = 1.0 / spec.y_max;
            let nv = (res / 16).max(4) as usize;
            let hv = v_span / nv as f64;
            for iv in 0..nv {
                let v = -v_span + (iv as f64 + 0.5) * hv;
                let y = -1.0 / v;
                let w = lift.apply(c(x, y));
                let gv = g(w)?;
                cells += 1;
                if gv != c(0.0, 0.0) {
                    acc.add(f(w)? * gv.conj() * (hx * hv));
                }
            }
            Ok((acc.s, cells))
        })
        .collect();
    let mut total = Kahan::new();
    let mut cells = 0u64;
    for col in columns {
        let (v, n) = col?;
        total.add(v);
        cells += n;
    }
    Ok((total.s, cells))
}

/// ⟨f, g⟩_L = ∫_{Y₀(L)} f ḡ dμ. The fundamental domain is realized as the
/// translates of D under the deterministic P¹(ℤ/L) lift list; within each
/// translate the grid is midpoint in (x, log y) with the curved bottom
/// boundary y = √(1−x²) honored exactly per column. g is evaluated first
/// and f is skipped where g vanishes, so compactly supported g keeps
/// expensive f cheap. The resolution doubles until two passes agree to
/// target_rel_error (relative, with an absolute floor of the same size).
pub fn inner_product<F, G>(f: &F, g: &G, level: u64, spec: &QuadratureSpec) -> Result<InnerProduct>
where
    F: Fn(Complex64) -> Result<Complex64> + Sync,
    G: Fn(Complex64) -> Result<Complex64> + Sync,
{
    spec.validate()?;
    let table = CosetTable::build(level)?;
    let res_cap = spec.resolution.max(512) * 16;
    let mut res = spec.resolution;
    let mut prev: Option<Complex64> = None;
    loop {
        let (value, cells) = integrate_once(f, g, &table, spec, res)?;
        if let Some(p) = prev {
            let delta = (value - p).norm();
            if delta <= spec.target_rel_error * value.norm().max(1.0) {
                return Ok(InnerProduct { value, refinement_delta: delta, resolution_used: res, cells });
            }
        }
        prev = Some(value);
        if res >= res_cap {
            return Err(Error::Accuracy(format!(
                "quadrature not converged at resolution {res} (cap {res_cap})"
            )));
        }
        res *= 2;
    }
}

/// The strip B_M = {x + iy : M⁻¹ < y ≤ 20000·M⁻¹}, closed above.
pub fn ford_membership(z: Complex64, m: u64) -> bool {
    let y = z.im;
    y > 1.0 / m as f64 && y <= 20000.0 / m as f64
}

/// Complete a primitive bottom row (c, d), c ≥ 1, to a matrix in SL₂(ℤ).
fn complete_to_sl2(cc: u64, dd: u64) -> Mat2 {
    if cc == 1 {
        return Mat2::new(0, -1, 1, dd as i64);
    }
    let a = mod_inverse(dd % cc, cc).expect("row is primitive") as i64;
    let b = (a * dd as i64 - 1) / cc as i64;
    let g = Mat2::new(a, b, cc as i64, dd as i64);
    debug_assert_eq!(g.det(), 1);
    g
}

/// 50 points on the boundary of D^c(R) = {z ∈ D : Im z ≤ R}: the unit-circle
/// arc, both vertical walls (log-spaced, to press on the small-y end where
/// the strip bounds are tight), and the ceiling y = R.
fn boundary_samples(r: f64) -> Vec<Complex64> {
    let mut pts = Vec::with_capacity(50);
    for i in 0..14 {
        let th = std::f64::consts::PI * (1.0 / 3.0 + (i as f64 + 0.5) / 14.0 / 3.0);
        pts.push(c(th.cos(), th.sin()));
    }
    let y_base = 0.75f64.sqrt();
    for i in 0..12 {
        let y = y_base * (r / y_base).powf((i as f64 + 0.5) / 12.0);
        pts.push(c(0.5, y));
    }
    for i in 0..12 {
        let y = y_base * (r / y_base).powf((i as f64 + 0.5) / 12.0);
        pts.push(c(-0.5, y));
    }
    for i in 0..12 {
        pts.push(c(-0.5 + (i as f64 + 0.5) / 12.0, r));
    }
    pts
}

/// The explicit coset family of level M and its verification record.
#[derive(Clone, Debug, Serialize)]
pub struct PortionReport {
    pub level: u64,
    /// Bottom rows (c, d): √M/100 ≤ c ≤ √M/20, 0 ≤ d ≤ c/4, (c, d) = 1.
    pub pairs: Vec<(u64, u64)>,
    pub count: u64,
    pub c_range: (u64, u64),
    /// count / M.
    pub density: f64,
    /// The large-M limit of count/M: (6/π²)·(1/8)·(1/400 − 1/10⁴).
    pub density_limit: f64,
    /// Every 50-point boundary sample of every γ(D^c(100)) lies in B_M.
    pub boundary_ok: bool,
    /// Smallest value of min(Im·M − 1, 20000 − Im·M) over all samples.
    pub boundary_margin: f64,
    /// c₁d₂ ≢ c₂d₁ (mod M) for all distinct pairs: the cosets Γ₀(M)γ differ.
    pub distinct: bool,
}

/// Enumerate S = {(c, d) : √M/100 ≤ c ≤ √M/20, 0 ≤ d ≤ c/4, (c,d) = 1},
/// complete each row to γ ∈ SL₂(ℤ), and verify on boundary samples that
/// γ(D^c(100)) lands inside the strip B_M, with all cosets pairwise
/// distinct. The c-bounds are applied as exact integer inequalities
/// 10⁴c² ≥ M and 400c² ≤ M.
pub fn portion_set(m: u64) -> Result<PortionReport> {
    if m < 10_000 {
        return Err(Error::Domain(format!("portion construction needs M ≥ 10⁴, got {m}")));
    }
    let mut pairs = Vec::new();
    let mut cc = 1u64;
    let mut c_range = (u64::MAX, 0u64);
    while 400 * cc * cc <= m {
        if 10_000 * cc * cc >= m {
            c_range = (c_range.0.min(cc), c_range.1.max(cc));
            for dd in 0..=cc / 4 {
                if gcd(cc, dd) == 1 {
                    pairs.push((cc, dd));
                }
            }
        }
        cc += 1;
    }
    if pairs.is_empty() {
        return Err(Error::Degenerate(format!("empty portion set at M = {m}")));
    }
    let samples = boundary_samples(100.0);
    let mut boundary_ok = true;
    let mut margin = f64::INFINITY;
    for &(cc, dd) in &pairs {
        let gam = complete_to_sl2(cc, dd);
        for &z in &samples {
            let im = gam.apply(z).im * m as f64;
            margin = margin.min((im - 1.0).min(20000.0 - im));
            if !(im > 1.0 && im <= 20000.0) {
                boundary_ok = false;
            }
        }
    }
    let mut distinct = true;
    'outer: for (i, &(c1, d1)) in pairs.iter().enumerate() {
        for &(c2, d2) in &pairs[i + 1..] {
            if (c1 * d2) % m == (c2 * d1) % m {
                distinct = false;
                break 'outer;
            }
        }
    }
    let count = pairs.len() as u64;
    Ok(PortionReport {
        level: m,
        count,
        c_range,
        density: count as f64 / m as f64,
        density_limit: 6.0 / (std::f64::consts::PI * std::f64::consts::PI) / 8.0
            * (1.0 / 400.0 - 1.0 / 10_000.0),
        boundary_ok,
        boundary_margin: margin,
        distinct,
        pairs,
    })
}
