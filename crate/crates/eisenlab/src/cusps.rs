//! Cusps of Γ₀(N): canonical representatives, equivalence, widths, scaling
//! matrices, and coset tables.
//!
//! A cusp class of Γ₀(N) is determined by a divisor f | N (the gcd of the
//! denominator with N) together with a unit v mod d, d = (f, N/f). The
//! canonical representative is u/f where u is the first entry of
//! v, v+d, v+2d, … coprime to f. Equivalence of arbitrary fractions p₁/q₁,
//! p₂/q₂ is decided by the congruence s₁q₂ ≡ s₂q₁ mod (q₁q₂, N) with
//! pᵢsᵢ ≡ 1 mod qᵢ, and the same computation produces an explicit witness
//! γ ∈ Γ₀(N).

use crate::arith::{divisors, euler_phi, factorize, gcd, mod_inverse};
use crate::characters::DirichletCharacter;
use crate::error::{Error, Result};
use num_complex::Complex64;
use std::collections::HashMap;
use std::fmt;

/// 2×2 integer matrix, in practice always of determinant ±1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Mat2 {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub d: i64,
}

impl Mat2 {
    pub const IDENTITY: Mat2 = Mat2 { a: 1, b: 0, c: 0, d: 1 };

    pub fn new(a: i64, b: i64, c: i64, d: i64) -> Mat2 {
        Mat2 { a, b, c, d }
    }

    pub fn det(&self) -> i64 {
        self.a * self.d - self.b * self.c
    }

    pub fn mul(&self, o: &Mat2) -> Mat2 {
        Mat2 {
            a: self.a * o.a + self.b * o.c,
            b: self.a * o.b + self.b * o.d,
            c: self.c * o.a + self.d * o.c,
            d: self.c * o.b + self.d * o.d,
        }
    }

    /// Inverse, valid for determinant ±1.
    pub fn inv(&self) -> Mat2 {
        match self.det() {
            1 => Mat2 { a: self.d, b: -self.b, c: -self.c, d: self.a },
            -1 => Mat2 { a: -self.d, b: self.b, c: self.c, d: -self.a },
            d => panic!("inverse of non-unimodular matrix (det {d})"),
        }
    }

    /// Möbius action on the upper half plane.
    pub fn apply(&self, z: Complex64) -> Complex64 {
        (self.a as f64 * z + self.b as f64) / (self.c as f64 * z + self.d as f64)
    }

    /// The automorphy denominator cz + d.
    pub fn bottom(&self, z: Complex64) -> Complex64 {
        self.c as f64 * z + self.d as f64
    }

    /// Action on a cusp written as a primitive column (p, q)ᵗ, with the
    /// result renormalized to q ≥ 0 (and p = 1 when q = 0).
    pub fn apply_frac(&self, p: i64, q: i64) -> (i64, i64) {
        normalize_frac(self.a * p + self.b * q, self.c * p + self.d * q)
    }

    pub fn in_gamma0(&self, level: u64) -> bool {
        self.det() == 1 && self.c.rem_euclid(level as i64) == 0
    }

    pub fn translation(k: i64) -> Mat2 {
        Mat2 { a: 1, b: k, c: 0, d: 1 }
    }
}

/// Reduce (p, q) to a primitive vector with q ≥ 0, q = 0 forcing p = 1.
fn normalize_frac(p: i64, q: i64) -> (i64, i64) {
    assert!(p != 0 || q != 0, "0/0 is not a cusp");
    let g = gcd(p.unsigned_abs(), q.unsigned_abs()) as i64;
    let (mut p, mut q) = (p / g, q / g);
    if q < 0 || (q == 0 && p < 0) {
        p = -p;
        q = -q;
    }
    (p, q)
}

/// s with p·s ≡ 1 mod q (s = sign p when q = 0, s = 0 when q = 1).
fn denominator_inverse(p: i64, q: i64) -> i64 {
    match q {
        0 => p.signum(),
        1 => 0,
        _ => {
            let qq = q.unsigned_abs();
            mod_inverse(p.rem_euclid(qq as i64) as u64, qq).expect("p, q coprime") as i64
        }
    }
}

/// Index ν(N) = [SL₂(ℤ) : Γ₀(N)] = N ∏_{p|N} (1 + 1/p).
pub fn coset_count(level: u64) -> Result<u64> {
    let fac = factorize(level)?;
    let mut nu = level;
    for p in fac.primes() {
        nu = nu / p * (p + 1);
    }
    Ok(nu)
}

/// Canonical cusp u/f of Γ₀(level), gcd(u, f) = 1, f | level.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Cusp {
    pub u: u64,
    pub f: u64,
    pub level: u64,
}

impl fmt::Debug for Cusp {
    fn fmt(&self, fm: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(fm, "{}/{}@{}", self.u, self.f, self.level)
    }
}

/// First element of v, v+d, v+2d, … coprime to f.
fn scan_up(v: u64, d: u64, f: u64) -> u64 {
    let mut u = v;
    while gcd(u, f) != 1 {
        u += d;
    }
    u
}

/// All cusps of Γ₀(level), grouped by ascending f and, within an f, by
/// ascending class v mod (f, level/f).
pub fn cusp_set(level: u64) -> Result<Vec<Cusp>> {
    if level == 0 {
        return Err(Error::Domain("level must be positive".into()));
    }
    let mut out = Vec::new();
    for f in divisors(level)? {
        let d = gcd(f, level / f);
        for v in 1..=d {
            if gcd(v, d) == 1 {
                out.push(Cusp { u: scan_up(v, d, f), f, level });
            }
        }
    }
    Ok(out)
}

/// Are the cusps p₁/q₁ and p₂/q₂ Γ₀(level)-equivalent?
pub fn equivalent(p1: i64, q1: i64, p2: i64, q2: i64, level: u64) -> bool {
    let (p1, q1) = normalize_frac(p1, q1);
    let (p2, q2) = normalize_frac(p2, q2);
    let s1 = denominator_inverse(p1, q1);
    let s2 = denominator_inverse(p2, q2);
    let m = gcd((q1 as i128 * q2 as i128).unsigned_abs() as u64 % level, level).max(1);
    let lhs = s1 as i128 * q2 as i128 - s2 as i128 * q1 as i128;
    lhs.rem_euclid(m as i128) == 0
}

/// Explicit γ ∈ Γ₀(level) with γ(p₁/q₁) = p₂/q₂, if the cusps are equivalent.
pub fn equivalence_witness(p1: i64, q1: i64, p2: i64, q2: i64, level: u64) -> Option<Mat2> {
    let (p1, q1) = normalize_frac(p1, q1);
    let (p2, q2) = normalize_frac(p2, q2);
    let s1 = denominator_inverse(p1, q1);
    let s2 = denominator_inverse(p2, q2);
    let r1 = if q1 == 0 { 0 } else { (p1 * s1 - 1) / q1 };
    let r2 = if q2 == 0 { 0 } else { (p2 * s2 - 1) / q2 };
    let g1 = Mat2::new(p1, r1, q1, s1);
    let g2 = Mat2::new(p2, r2, q2, s2);
    debug_assert_eq!(g1.det(), 1);
    debug_assert_eq!(g2.det(), 1);
    // Lower-left of g₂ Tᵏ g₁⁻¹ is q₂s₁ − q₁s₂ − k·q₁q₂; solve ≡ 0 mod level.
    let n = level as i64;
    let qq = (q1 * q2).rem_euclid(n);
    let diff = (q2 * s1 - q1 * s2).rem_euclid(n);
    let g = gcd(qq as u64, level).max(1) as i64;
    if diff % g != 0 {
        return None;
    }
    let n_red = n / g;
    let k = if n_red == 1 {
        0
    } else {
        let inv = mod_inverse((qq / g).rem_euclid(n_red) as u64, n_red as u64)? as i64;
        ((diff / g) as i128 * inv as i128).rem_euclid(n_red as i128) as i64
    };
    let gamma = g2.mul(&Mat2::translation(k)).mul(&g1.inv());
    debug_assert!(gamma.in_gamma0(level), "witness not in Γ₀({level})");
    debug_assert_eq!(gamma.apply_frac(p1, q1), (p2, q2));
    Some(gamma)
}

/// Canonical representative of the class of p/q in Γ₀(level).
pub fn reduce(p: i64, q: i64, level: u64) -> Result<Cusp> {
    if level == 0 {
        return Err(Error::Domain("level must be positive".into()));
    }
    let (p, q) = normalize_frac(p, q);
    let f = if q == 0 { level } else { gcd(q.unsigned_abs() % level, level) };
    let d = gcd(f, level / f);
    let mut found = None;
    for v in 1..=d {
        if gcd(v, d) != 1 {
            continue;
        }
        let u = scan_up(v, d, f);
        if equivalent(p, q, u as i64, f as i64, level) {
            if found.is_some() {
                return Err(Error::Degenerate(format!(
                    "two canonical cusps equivalent to {p}/{q} at level {level}"
                )));
            }
            found = Some(Cusp { u, f, level });
        }
    }
    found.ok_or_else(|| {
        Error::Degenerate(format!("no canonical cusp equivalent to {p}/{q} at level {level}"))
    })
}

/// σ_𝔞 = γ_𝔞 · diag(√W, 1/√W) with γ_𝔞 ∈ SL₂(ℤ), γ_𝔞 ∞ = 𝔞.
#[derive(Debug, Clone, Copy)]
pub struct ScalingMatrix {
    pub gamma: Mat2,
    pub width: u64,
}

impl ScalingMatrix {
    /// σ_𝔞 z = γ_𝔞 (W z).
    pub fn apply(&self, z: Complex64) -> Complex64 {
        self.gamma.apply(z * self.width as f64)
    }

    /// σ_𝔞⁻¹ z = γ_𝔞⁻¹(z) / W.
    pub fn apply_inv(&self, z: Complex64) -> Complex64 {
        self.gamma.inv().apply(z) / self.width as f64
    }
}

impl Cusp {
    pub fn infinity(level: u64) -> Cusp {
        Cusp { u: 1, f: level, level }
    }

    /// The class parameter v = u mod (f, N/f).
    pub fn class_v(&self) -> u64 {
        let d = gcd(self.f, self.level / self.f);
        if d == 0 {
            1
        } else {
            self.u % d
        }
    }

    /// Width W = N / (N, f²).
    pub fn width(&self) -> u64 {
        width_for_denominator(self.f, self.level)
    }

    /// Width of the same point viewed as a cusp of Γ₀(m).
    pub fn width_at_level(&self, m: u64) -> u64 {
        width_for_denominator(self.f, m)
    }

    /// Is this the class of ∞ (denominator divisible by N)?
    pub fn is_infinity_class(&self) -> bool {
        self.f == self.level
    }

    /// A cusp is singular for χ mod N exactly when χ is even and its
    /// conductor divides lcm(f, N/f); only those carry an Eisenstein series.
    pub fn is_singular_for(&self, chi: &DirichletCharacter) -> bool {
        debug_assert_eq!(chi.modulus, self.level);
        let l = crate::arith::lcm(self.f, self.level / self.f);
        chi.even && l % chi.conductor == 0
    }

    /// Image under the Fricke involution z ↦ −1/(Nz), reduced to canonical
    /// form. Denominator class maps f ↦ N/f.
    pub fn fricke_image(&self) -> Result<Cusp> {
        // W_N(u/f) = −f/(Nu) = −1/(Nu/f) since f | N and gcd(u, f) = 1.
        let q = (self.level / self.f) as i64 * self.u as i64;
        reduce(-1, q, self.level)
    }

    /// γ_𝔞 = (u v; f w) with uw − vf = 1 and |v| minimal (ties prefer v ≥ 0).
    pub fn scaling_matrix(&self) -> ScalingMatrix {
        let (u, f) = (self.u as i64, self.f as i64);
        let w0 = mod_inverse(self.u % self.f.max(1), self.f.max(1)).expect("gcd(u, f) = 1") as i64;
        let v0 = (u * w0 - 1) / f;
        // v = v₀ + t·u, w = w₀ + t·f; minimize |v|.
        let t0 = -(v0 as f64) / u as f64;
        let mut best: Option<(i64, i64)> = None;
        for t in [t0.floor() as i64, t0.ceil() as i64, t0.round() as i64] {
            let v = v0 + t * u;
            let w = w0 + t * f;
            let better = match best {
                None => true,
                Some((bv, _)) => v.abs() < bv.abs() || (v.abs() == bv.abs() && v > bv),
            };
            if better {
                best = Some((v, w));
            }
        }
        let (v, w) = best.unwrap();
        let gamma = Mat2::new(u, v, f, w);
        debug_assert_eq!(gamma.det(), 1);
        ScalingMatrix { gamma, width: self.width() }
    }
}

fn width_for_denominator(f: u64, level: u64) -> u64 {
    // gcd(level, f²) without squaring f: valuations min(a, 2b).
    let g1 = gcd(level, f);
    let g = g1 * gcd(level / g1, f);
    level / g
}

/// P¹(ℤ/M): classes (c : d), canonical pair = lexicographic minimum over the
/// unit orbit, together with SL₂(ℤ) lifts whose bottom rows realize them.
pub struct CosetTable {
    pub modulus: u64,
    pub reps: Vec<(u64, u64)>,
    pub lifts: Vec<Mat2>,
    index: HashMap<(u64, u64), usize>,
}

impl CosetTable {
    pub fn build(modulus: u64) -> Result<CosetTable> {
        if modulus == 0 {
            return Err(Error::Domain("modulus must be positive".into()));
        }
        let m = modulus;
        if m == 1 {
            let mut index = HashMap::new();
            index.insert((0, 0), 0);
            return Ok(CosetTable {
                modulus,
                reps: vec![(0, 0)],
                lifts: vec![Mat2::IDENTITY],
                index,
            });
        }
        let units: Vec<u64> = (1..m).filter(|&l| gcd(l, m) == 1).collect();
        let mut index = HashMap::new();
        let mut reps = Vec::new();
        let mut lifts = Vec::new();
        for c in 0..m {
            for d in 0..m {
                if gcd(gcd(c, d), m) != 1 {
                    continue;
                }
                let can = canonical_pair(c, d, m, &units);
                if can != (c, d) {
                    continue;
                }
                index.insert(can, reps.len());
                reps.push(can);
                lifts.push(lift_pair(c, d, m));
            }
        }
        let nu = coset_count(m)?;
        debug_assert_eq!(reps.len() as u64, nu);
        Ok(CosetTable { modulus, reps, lifts, index })
    }

    pub fn len(&self) -> usize {
        self.reps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reps.is_empty()
    }

    /// Index of the class of the bottom row of g.
    pub fn class_of(&self, g: &Mat2) -> usize {
        self.class_of_pair(g.c, g.d)
    }

    pub fn class_of_pair(&self, c: i64, d: i64) -> usize {
        let m = self.modulus;
        if m == 1 {
            return 0;
        }
        let c = c.rem_euclid(m as i64) as u64;
        let d = d.rem_euclid(m as i64) as u64;
        let units: Vec<u64> = (1..m).filter(|&l| gcd(l, m) == 1).collect();
        let can = canonical_pair(c, d, m, &units);
        *self.index.get(&can).expect("row is primitive mod M")
    }
}

fn canonical_pair(c: u64, d: u64, m: u64, units: &[u64]) -> (u64, u64) {
    let mut best = (u64::MAX, u64::MAX);
    for &l in units {
        let cand = (l * c % m, l * d % m);
        if cand < best {
            best = cand;
        }
    }
    best
}

/// SL₂(ℤ) matrix with bottom row ≡ (c, d) mod m.
fn lift_pair(c: u64, d: u64, m: u64) -> Mat2 {
    // Shift d until gcd(c, d') = 1, then Bezout for the top row.
    let mut dd = d;
    if c == 0 {
        // class (0 : d) with d a unit; lift via bottom row (m, d').
        while gcd(m, dd) != 1 {
            dd += m;
        }
        let b = -(mod_inverse(dd % m, m).expect("unit") as i64);
        let a = (1 + b * m as i64) / dd as i64;
        let g = Mat2::new(a, b, m as i64, dd as i64);
        debug_assert_eq!(g.det(), 1);
        return g;
    }
    while gcd(c, dd.max(1)) != 1 || dd == 0 {
        dd += m;
    }
    // a·d' − b·c = 1
    let a = mod_inverse(dd % c, c).expect("coprime") as i64;
    let b = (a * dd as i64 - 1) / c as i64;
    let g = Mat2::new(a, b, c as i64, dd as i64);
    debug_assert_eq!(g.det(), 1);
    g
}

/// Right-coset representatives of Γ₀(N) \ Γ₀(M) for M | N: the P¹(ℤ/N)
/// classes whose c-coordinate vanishes mod M, with lifts in Γ₀(M).
pub fn gamma0_quotient_reps(level_n: u64, level_m: u64) -> Result<Vec<Mat2>> {
    if level_m == 0 || level_n % level_m != 0 {
        return Err(Error::Domain(format!("{level_m} must divide {level_n}")));
    }
    let table = CosetTable::build(level_n)?;
    let mut out = Vec::new();
    for (i, &(c, _)) in table.reps.iter().enumerate() {
        if c % level_m == 0 {
            let g = table.lifts[i];
            debug_assert!(g.in_gamma0(level_m));
            out.push(g);
        }
    }
    debug_assert_eq!(
        out.len() as u64 * coset_count(level_m)?,
        coset_count(level_n)?
    );
    Ok(out)
}

/// Number of cusps Σ_{f|N} φ((f, N/f)).
pub fn cusp_count(level: u64) -> Result<u64> {
    let mut total = 0;
    for f in divisors(level)? {
        total += euler_phi(gcd(f, level / f).max(1))?;
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::characters::character_group;

    #[test]
    fn set_size_matches_formula() {
        for n in 1..=120u64 {
            let set = cusp_set(n).unwrap();
            assert_eq!(set.len() as u64, cusp_count(n).unwrap(), "N = {n}");
            for c in &set {
                assert_eq!(gcd(c.u, c.f), 1);
                assert_eq!(n % c.f, 0);
            }
        }
    }

    #[test]
    fn canonical_reps_are_inequivalent() {
        for n in [11u64, 12, 24, 36, 45, 50] {
            let set = cusp_set(n).unwrap();
            for (i, a) in set.iter().enumerate() {
                for b in set.iter().skip(i + 1) {
                    assert!(
                        !equivalent(a.u as i64, a.f as i64, b.u as i64, b.f as i64, n),
                        "N = {n}: {a:?} ~ {b:?}"
                    );
                }
                // reduce is idempotent on representatives
                assert_eq!(reduce(a.u as i64, a.f as i64, n).unwrap(), *a);
            }
        }
    }

    #[test]
    fn reduce_covers_all_fractions() {
        for n in [11u64, 12, 36] {
            let set = cusp_set(n).unwrap();
            for q in 0..=(2 * n as i64) {
                for p in -12..=12i64 {
                    if p == 0 && q == 0 {
                        continue;
                    }
                    if q != 0 && gcd(p.unsigned_abs(), q.unsigned_abs()) != 1 {
                        continue;
                    }
                    let c = reduce(p, q, n).unwrap();
                    assert!(set.contains(&c), "N = {n}, {p}/{q} -> {c:?}");
                    assert!(equivalent(p, q, c.u as i64, c.f as i64, n));
                }
            }
        }
    }

    #[test]
    fn infinity_reduces_to_one_over_n() {
        for n in [1u64, 7, 12, 45] {
            assert_eq!(reduce(1, 0, n).unwrap(), Cusp::infinity(n));
            assert_eq!(reduce(-3, 0, n).unwrap(), Cusp::infinity(n));
        }
    }

    #[test]
    fn witnesses_map_cusps() {
        for n in [12u64, 15, 36] {
            for q in 0..=(n as i64) {
                for p in -6..=6i64 {
                    if (p == 0 && q == 0)
                        || (q != 0 && gcd(p.unsigned_abs(), q.unsigned_abs()) != 1)
                    {
                        continue;
                    }
                    let c = reduce(p, q, n).unwrap();
                    let gamma = equivalence_witness(p, q, c.u as i64, c.f as i64, n)
                        .expect("equivalent by construction");
                    assert!(gamma.in_gamma0(n));
                    assert_eq!(gamma.apply_frac(p, q), (c.u as i64, c.f as i64));
                }
            }
        }
    }

    #[test]
    fn widths_sum_to_index() {
        for n in 1..=100u64 {
            let total: u64 = cusp_set(n).unwrap().iter().map(|c| c.width()).sum();
            assert_eq!(total, coset_count(n).unwrap(), "N = {n}");
        }
    }

    #[test]
    fn scaling_matrix_examples() {
        let inf = Cusp::infinity(7);
        let s = inf.scaling_matrix();
        assert_eq!(s.gamma, Mat2::new(1, 0, 7, 1));
        assert_eq!(s.width, 1);

        let zero = Cusp { u: 1, f: 1, level: 7 };
        let s0 = zero.scaling_matrix();
        assert_eq!(s0.gamma, Mat2::new(1, 0, 1, 1));
        assert_eq!(s0.width, 7);
    }

    #[test]
    fn scaling_matrix_conjugates_stabilizer() {
        // γ_𝔞 (1 W; 0 1) γ_𝔞⁻¹ must lie in Γ₀(N) and fix 𝔞.
        for n in [6u64, 12, 45, 50] {
            for cusp in cusp_set(n).unwrap() {
                let s = cusp.scaling_matrix();
                let t = Mat2::new(1, s.width as i64, 0, 1);
                let g = s.gamma.mul(&t).mul(&s.gamma.inv());
                assert!(g.in_gamma0(n), "N = {n}, {cusp:?}");
                assert_eq!(
                    g.apply_frac(cusp.u as i64, cusp.f as i64),
                    (cusp.u as i64, cusp.f as i64)
                );
                // Minimality: no smaller multiple of the translation works.
                for w in 1..s.width {
                    let t = Mat2::new(1, w as i64, 0, 1);
                    let g = s.gamma.mul(&t).mul(&s.gamma.inv());
                    assert!(!g.in_gamma0(n), "width not minimal: N = {n}, {cusp:?}");
                }
            }
        }
    }

    #[test]
    fn coset_table_sizes() {
        for m in 1..=60u64 {
            let t = CosetTable::build(m).unwrap();
            assert_eq!(t.len() as u64, coset_count(m).unwrap(), "M = {m}");
            for (i, g) in t.lifts.iter().enumerate() {
                assert_eq!(g.det(), 1);
                assert_eq!(t.class_of(g), i);
            }
        }
    }

    #[test]
    fn gamma0_elements_all_in_identity_class() {
        let t = CosetTable::build(12).unwrap();
        let id = t.class_of(&Mat2::IDENTITY);
        assert_eq!(t.class_of(&Mat2::new(1, 0, 12, 1)), id);
        assert_eq!(t.class_of(&Mat2::new(5, 2, 12, 5)), id);
        assert_eq!(t.class_of(&Mat2::new(-1, 0, 24, -1)), id);
        assert_ne!(t.class_of(&Mat2::new(0, -1, 1, 0)), id);
    }

    #[test]
    fn quotient_reps_partition() {
        for (n, m) in [(12u64, 3u64), (12, 4), (45, 9), (22, 11), (8, 1)] {
            let reps = gamma0_quotient_reps(n, m).unwrap();
            assert_eq!(
                reps.len() as u64,
                coset_count(n).unwrap() / coset_count(m).unwrap()
            );
            // Pairwise in distinct Γ₀(N)-cosets: γᵢγⱼ⁻¹ ∉ Γ₀(N).
            for (i, gi) in reps.iter().enumerate() {
                assert!(gi.in_gamma0(m));
                for gj in reps.iter().skip(i + 1) {
                    assert!(!gi.mul(&gj.inv()).in_gamma0(n));
                }
            }
        }
    }

    #[test]
    fn fricke_is_an_involution() {
        for n in [12u64, 36, 45] {
            for c in cusp_set(n).unwrap() {
                let img = c.fricke_image().unwrap();
                assert_eq!(img.f, n / c.f, "{c:?}");
                assert_eq!(img.fricke_image().unwrap(), c, "{c:?}");
            }
        }
    }

    #[test]
    fn singular_cusp_counts() {
        // Trivial character: every cusp is singular.
        let n = 36u64;
        let triv = character_group(n).unwrap().trivial();
        for c in cusp_set(n).unwrap() {
            assert!(c.is_singular_for(&triv));
        }
        // Primitive even character mod 5 lifted to level 5: f ∈ {1, 5},
        // lcm(f, 5/f) = 5 in both cases, so both cusps are singular.
        let chi = character_group(5).unwrap().character(&[2]).unwrap();
        let singular: Vec<Cusp> = cusp_set(5)
            .unwrap()
            .into_iter()
            .filter(|c| c.is_singular_for(&chi))
            .collect();
        assert_eq!(singular.len(), 2);
        // Odd character: nothing is singular.
        let odd = character_group(5).unwrap().character(&[1]).unwrap();
        assert!(cusp_set(5).unwrap().iter().all(|c| !c.is_singular_for(&odd)));
    }

    #[test]
    fn relative_widths_divide() {
        for n in [24u64, 45, 72] {
            for m in divisors(n).unwrap() {
                for c in cusp_set(n).unwrap() {
                    let wn = c.width();
                    let wm = c.width_at_level(m);
                    assert_eq!(wn % wm, 0, "N = {n}, M = {m}, {c:?}");
                }
            }
        }
    }
}
