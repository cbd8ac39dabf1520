//! Dirichlet characters with exact root-of-unity values.
//!
//! (ℤ/N)^× is presented through its CRT factorization: one generator per odd
//! prime-power component, the pair (−1, 5) for 2^e with e ≥ 3. A character is
//! an exponent vector against that generating set, and every evaluation goes
//! through discrete-log tables to an exact rational k/m with χ(a) = e^{2πi k/m}.
//! Conductors, parity, Gauss sums, products across different moduli, and
//! primitive inducers are all computed from that exact data.

use crate::arith::{factorize, gcd, lcm, mod_inverse, mod_pow};
use crate::error::{Error, Result};
use num_complex::Complex64;
use std::collections::HashMap;
use std::f64::consts::TAU;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

/// Discrete-log tables take O(modulus) memory; refuse anything huge.
const MAX_TABLE_MODULUS: u64 = 2_000_000;

/// One prime-power block of (ℤ/N)^×.
pub struct Component {
    pub p: u64,
    pub e: u32,
    pub pe: u64,
    /// Generator residues mod p^e (one for odd p; −1 and 5 for 2^e, e ≥ 3).
    pub gens: Vec<u64>,
    pub orders: Vec<u64>,
    /// dlog[r] = exponent vector of r, `[u32::MAX; 2]` marks non-units.
    dlog: Vec<[u32; 2]>,
}

impl fmt::Debug for Component {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Component")
            .field("pe", &self.pe)
            .field("gens", &self.gens)
            .field("orders", &self.orders)
            .finish()
    }
}

fn primitive_root(p: u64, e: u32) -> u64 {
    let pm1 = factorize(p - 1).expect("p - 1 ≥ 2");
    let mut g = 0;
    'cand: for cand in 2..p {
        for q in pm1.primes() {
            if mod_pow(cand, (p - 1) / q, p) == 1 {
                continue 'cand;
            }
        }
        g = cand;
        break;
    }
    if e == 1 {
        return g;
    }
    // g generates mod every p^e exactly when g^{p−1} ≢ 1 mod p²; otherwise
    // g + p does.
    if mod_pow(g, p - 1, p * p) == 1 {
        g + p
    } else {
        g
    }
}

impl Component {
    fn build(p: u64, e: u32) -> Component {
        let pe = p.pow(e);
        let mut dlog = vec![[u32::MAX; 2]; pe as usize];
        if p == 2 {
            match e {
                1 => {
                    dlog[1] = [0, 0];
                    Component { p, e, pe, gens: vec![], orders: vec![], dlog }
                }
                2 => {
                    dlog[1] = [0, 0];
                    dlog[3] = [1, 0];
                    Component { p, e, pe, gens: vec![3], orders: vec![2], dlog }
                }
                _ => {
                    // (ℤ/2^e)^× = ⟨−1⟩ × ⟨5⟩
                    let half = pe / 4;
                    let mut x = 1u64;
                    for j in 0..half {
                        dlog[x as usize] = [0, j as u32];
                        dlog[(pe - x) as usize] = [1, j as u32];
                        x = x * 5 % pe;
                    }
                    Component { p, e, pe, gens: vec![pe - 1, 5], orders: vec![2, half], dlog }
                }
            }
        } else {
            let g = primitive_root(p, e);
            let phi = pe / p * (p - 1);
            let mut x = 1u64;
            for k in 0..phi {
                dlog[x as usize] = [k as u32, 0];
                x = (x as u128 * g as u128 % pe as u128) as u64;
            }
            Component { p, e, pe, gens: vec![g], orders: vec![phi], dlog }
        }
    }

    fn dlog_of(&self, r: u64) -> Option<[u32; 2]> {
        let d = self.dlog[r as usize];
        if d[0] == u32::MAX {
            None
        } else {
            Some(d)
        }
    }

    /// Conductor contribution p^c given this component's character exponents.
    fn conductor_factor(&self, exps: &[u64]) -> u64 {
        if self.p == 2 {
            match self.e {
                1 => 1,
                2 => {
                    if exps[0] % 2 == 0 {
                        1
                    } else {
                        4
                    }
                }
                _ => {
                    let t1 = exps[0] % 2;
                    let t2 = exps[1] % self.orders[1];
                    if t2 != 0 {
                        // value on 5 has order 2^κ, conductor 2^{κ+2}
                        4 * (self.orders[1] / gcd(t2, self.orders[1]))
                    } else if t1 != 0 {
                        4
                    } else {
                        1
                    }
                }
            }
        } else {
            let o = self.orders[0];
            let t = exps[0] % o;
            if t == 0 {
                return 1;
            }
            // Character order r = p^α·β with β | p−1 lives mod p^{α+1}.
            let mut r = o / gcd(t, o);
            let mut alpha = 0u32;
            while r % self.p == 0 {
                r /= self.p;
                alpha += 1;
            }
            self.p.pow(alpha + 1)
        }
    }
}

#[derive(Debug)]
pub struct CharacterGroup {
    pub modulus: u64,
    pub components: Vec<Component>,
    /// Flattened (component index, generator index, order) per generator.
    pub slots: Vec<(usize, usize, u64)>,
    /// lcm of the slot orders: the exponent of (ℤ/N)^×.
    pub exponent: u64,
}

/// Shared, memoized group for a modulus.
pub fn character_group(modulus: u64) -> Result<Arc<CharacterGroup>> {
    if modulus == 0 {
        return Err(Error::Domain("modulus 0 has no character group".into()));
    }
    if modulus > MAX_TABLE_MODULUS {
        return Err(Error::Domain(format!(
            "character tables for modulus {modulus} exceed the {MAX_TABLE_MODULUS} limit"
        )));
    }
    static GROUPS: OnceLock<Mutex<HashMap<u64, Arc<CharacterGroup>>>> = OnceLock::new();
    let cache = GROUPS.get_or_init(|| Mutex::new(HashMap::new()));
    let mut map = cache.lock().unwrap();
    if let Some(g) = map.get(&modulus) {
        return Ok(g.clone());
    }
    let fac = factorize(modulus)?;
    let components: Vec<Component> =
        fac.factors.iter().map(|&(p, e)| Component::build(p, e)).collect();
    let mut slots = Vec::new();
    let mut exponent = 1u64;
    for (ci, comp) in components.iter().enumerate() {
        for (gi, &o) in comp.orders.iter().enumerate() {
            slots.push((ci, gi, o));
            exponent = lcm(exponent, o);
        }
    }
    let group = Arc::new(CharacterGroup { modulus, components, slots, exponent });
    map.insert(modulus, group.clone());
    Ok(group)
}

impl CharacterGroup {
    pub fn phi(&self) -> u64 {
        self.slots.iter().map(|s| s.2).product()
    }

    /// CRT element ≡ gens[gi] mod its component, ≡ 1 mod all others.
    fn crt_generator_lift(&self, ci: usize, gi: usize) -> u64 {
        let target = self.components[ci].gens[gi];
        let pe = self.components[ci].pe;
        let rest = self.modulus / pe;
        if rest == 1 {
            return target;
        }
        // x = 1 + rest·k with k = (target − 1)·rest⁻¹ mod p^e
        let inv = mod_inverse(rest % pe, pe).expect("CRT moduli are coprime");
        let k = ((target + pe - 1) % pe) as u128 * inv as u128 % pe as u128;
        1 + rest * k as u64
    }

    pub fn character(self: &Arc<Self>, exps: &[u64]) -> Result<DirichletCharacter> {
        if exps.len() != self.slots.len() {
            return Err(Error::Domain(format!(
                "modulus {} needs {} exponents, got {}",
                self.modulus,
                self.slots.len(),
                exps.len()
            )));
        }
        let exps = exps.iter().zip(&self.slots).map(|(&t, s)| t % s.2).collect();
        Ok(DirichletCharacter::assemble(self.clone(), exps))
    }

    pub fn trivial(self: &Arc<Self>) -> DirichletCharacter {
        DirichletCharacter::assemble(self.clone(), vec![0; self.slots.len()])
    }

    /// All φ(N) characters, exponent vectors in odometer order.
    pub fn all_characters(self: &Arc<Self>) -> Vec<DirichletCharacter> {
        let k = self.slots.len();
        let mut out = Vec::with_capacity(self.phi() as usize);
        let mut exps = vec![0u64; k];
        loop {
            out.push(DirichletCharacter::assemble(self.clone(), exps.clone()));
            let mut i = 0;
            loop {
                if i == k {
                    return out;
                }
                exps[i] += 1;
                if exps[i] < self.slots[i].2 {
                    break;
                }
                exps[i] = 0;
                i += 1;
            }
        }
    }
}

#[derive(Clone)]
pub struct DirichletCharacter {
    pub modulus: u64,
    pub exps: Vec<u64>,
    pub conductor: u64,
    pub even: bool,
    group: Arc<CharacterGroup>,
}

impl fmt::Debug for DirichletCharacter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "chi({};{:?}) cond {}", self.modulus, self.exps, self.conductor)
    }
}

impl PartialEq for DirichletCharacter {
    fn eq(&self, other: &Self) -> bool {
        self.modulus == other.modulus && self.exps == other.exps
    }
}
impl Eq for DirichletCharacter {}

impl DirichletCharacter {
    fn assemble(group: Arc<CharacterGroup>, exps: Vec<u64>) -> Self {
        let mut conductor = 1u64;
        for (ci, comp) in group.components.iter().enumerate() {
            let e: Vec<u64> = group
                .slots
                .iter()
                .zip(&exps)
                .filter(|(s, _)| s.0 == ci)
                .map(|(_, &t)| t)
                .collect();
            conductor *= comp.conductor_factor(&e);
        }
        let mut chi =
            DirichletCharacter { modulus: group.modulus, exps, conductor, even: true, group };
        chi.even = matches!(chi.value_exponent(-1), Some((0, _)));
        chi
    }

    /// χ(a) = e^{2πi k/m} as the reduced fraction (k, m); None when χ(a) = 0.
    pub fn value_exponent(&self, a: i64) -> Option<(u64, u64)> {
        if self.modulus == 1 {
            return Some((0, 1));
        }
        let r = a.rem_euclid(self.modulus as i64) as u64;
        if gcd(r, self.modulus) != 1 {
            return None;
        }
        let big_l = self.group.exponent;
        let mut k = 0u64;
        for (slot, &(ci, gi, o)) in self.group.slots.iter().enumerate() {
            let comp = &self.group.components[ci];
            let d = comp.dlog_of(r % comp.pe).expect("unit has discrete log")[gi] as u64;
            let t = self.exps[slot];
            let contrib =
                (t as u128 * d as u128 % big_l as u128) * (big_l / o) as u128 % big_l as u128;
            k = ((k as u128 + contrib) % big_l as u128) as u64;
        }
        if k == 0 {
            return Some((0, 1));
        }
        let g = gcd(k, big_l);
        Some((k / g, big_l / g))
    }

    pub fn value(&self, a: i64) -> Complex64 {
        match self.value_exponent(a) {
            None => Complex64::new(0.0, 0.0),
            Some((_, 1)) => Complex64::new(1.0, 0.0),
            Some((1, 2)) => Complex64::new(-1.0, 0.0),
            Some((1, 4)) => Complex64::new(0.0, 1.0),
            Some((3, 4)) => Complex64::new(0.0, -1.0),
            Some((k, m)) => {
                let theta = TAU * k as f64 / m as f64;
                Complex64::new(theta.cos(), theta.sin())
            }
        }
    }

    /// Table of χ(a) for a = 0 .. modulus−1, for hot loops.
    pub fn values_table(&self) -> Vec<Complex64> {
        (0..self.modulus).map(|a| self.value(a as i64)).collect()
    }

    pub fn is_trivial(&self) -> bool {
        self.exps.iter().all(|&t| t == 0)
    }

    pub fn order(&self) -> u64 {
        self.group
            .slots
            .iter()
            .zip(&self.exps)
            .fold(1, |acc, (&(_, _, o), &t)| lcm(acc, o / gcd(t, o)))
    }

    pub fn is_primitive(&self) -> bool {
        self.conductor == self.modulus
    }

    pub fn conj(&self) -> DirichletCharacter {
        let exps = self
            .group
            .slots
            .iter()
            .zip(&self.exps)
            .map(|(&(_, _, o), &t)| (o - t) % o)
            .collect();
        DirichletCharacter::assemble(self.group.clone(), exps)
    }

    /// χ₁χ₂ as a character mod lcm(q₁, q₂).
    pub fn multiply(&self, other: &DirichletCharacter) -> Result<DirichletCharacter> {
        let l = lcm(self.modulus, other.modulus);
        let group = character_group(l)?;
        let mut exps = Vec::with_capacity(group.slots.len());
        for (ci, gi, o) in group.slots.iter().copied() {
            let x = group.crt_generator_lift(ci, gi) as i64;
            let (k1, m1) = self.value_exponent(x).expect("lift is a unit");
            let (k2, m2) = other.value_exponent(x).expect("lift is a unit");
            debug_assert!(o % m1 == 0 && o % m2 == 0);
            let t = (k1 as u128 * (o / m1) as u128 + k2 as u128 * (o / m2) as u128) % o as u128;
            exps.push(t as u64);
        }
        group.character(&exps)
    }

    /// The primitive character mod conductor inducing χ.
    pub fn primitive_inducer(&self) -> Result<DirichletCharacter> {
        let q = self.conductor;
        let group = character_group(q)?;
        let mut exps = Vec::with_capacity(group.slots.len());
        for (ci, gi, o) in group.slots.iter().copied() {
            // Lift the slot generator to a residue coprime to the full
            // modulus; χ is constant mod q on such residues.
            let mut x = group.crt_generator_lift(ci, gi);
            while gcd(x, self.modulus) != 1 {
                x += q;
            }
            let (k, m) = self.value_exponent(x as i64).expect("x is a unit");
            debug_assert_eq!(o % m, 0, "conductor inconsistency");
            exps.push(k * (o / m) % o);
        }
        let chi = group.character(&exps)?;
        debug_assert_eq!(chi.conductor, q);
        Ok(chi)
    }

    /// The character mod `modulus` induced by χ's primitive inducer.
    pub fn induced_to(&self, modulus: u64) -> Result<DirichletCharacter> {
        if modulus % self.conductor != 0 {
            return Err(Error::Domain(format!(
                "conductor {} does not divide target modulus {modulus}",
                self.conductor
            )));
        }
        let triv = character_group(modulus)?.trivial();
        self.primitive_inducer()?.multiply(&triv)
    }

    /// τ(χ) = Σ_a χ(a) e(a/q) over a mod q.
    pub fn gauss_sum(&self) -> Complex64 {
        let q = self.modulus;
        if q == 1 {
            return Complex64::new(1.0, 0.0);
        }
        let mut s = Complex64::new(0.0, 0.0);
        for a in 1..q {
            if gcd(a, q) != 1 {
                continue;
            }
            let theta = TAU * a as f64 / q as f64;
            s += self.value(a as i64) * Complex64::new(theta.cos(), theta.sin());
        }
        s
    }

    pub fn label(&self) -> String {
        let exps: Vec<String> = self.exps.iter().map(|t| t.to_string()).collect();
        format!("chi({};{})", self.modulus, exps.join(","))
    }
}
