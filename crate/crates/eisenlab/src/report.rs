//! Machine-readable reports behind the command line.
//!
//! Every command produces exactly one serializable record. Field order is
//! the struct declaration order, map-like tables are sorted by key, and
//! floats serialize as shortest round-trip decimals, so a fixed config
//! yields byte-identical output. Each record names the identity it
//! exercised in plain notation under `identity`.

use num_complex::Complex64;
use serde::Serialize;

use crate::characters::{character_group, DirichletCharacter};
use crate::cusps::{coset_count, cusp_set, reduce, Cusp};
use crate::eisen::{
    eval_char_eisenstein, eval_char_star, eval_cusp_eisenstein, eval_level1_e, FourierTruncation,
};
use crate::error::{Error, Result};
use crate::geom::{
    inner_product, portion_set, BumpProfile, CosetSelect, PortionReport, QuadratureSpec,
    TestFunction,
};
use crate::reg::{
    build_al_kernel, build_kernel, consistency_sum, eta_cancellation_check, RegKernel, TracedForm,
};
use crate::scatter::{hard_sums, phi_infinity_row};
use crate::{arith, reg};

pub const SCHEMA: &str = "eisenlab/1";

fn c2(v: Complex64) -> [f64; 2] {
    [v.re, v.im]
}

/// Character identity as carried in reports: the exact exponent vector on
/// the group generators plus derived attributes.
#[derive(Clone, Debug, Serialize)]
pub struct CharacterId {
    pub modulus: u64,
    pub exponents: Vec<u64>,
    pub conductor: u64,
    pub even: bool,
    pub label: String,
}

impl CharacterId {
    pub fn of(chi: &DirichletCharacter) -> CharacterId {
        CharacterId {
            modulus: chi.modulus,
            exponents: chi.exps.clone(),
            conductor: chi.conductor,
            even: chi.even,
            label: chi.label(),
        }
    }
}

/// Resolve a character selector against an optional ambient modulus.
///
/// Grammar: `trivial` (needs the ambient modulus), a bare modulus `q`
/// (trivial character mod q), `q:e1,e2,...` (exponent vector on the
/// generators of (ℤ/q)ˣ), or `primitive:q` (the first even primitive
/// character mod q in enumeration order).
pub fn parse_character(sel: &str, ambient: Option<u64>) -> Result<DirichletCharacter> {
    let usage = |msg: &str| Error::Domain(format!("character selector '{sel}': {msg}"));
    if sel == "trivial" {
        let q = ambient.ok_or_else(|| usage("no modulus in scope for 'trivial'"))?;
        return Ok(character_group(q)?.trivial());
    }
    if let Some(qs) = sel.strip_prefix("primitive:") {
        let q: u64 = qs.parse().map_err(|_| usage("bad modulus"))?;
        return character_group(q)?
            .all_characters()
            .into_iter()
            .find(|ch| ch.even && ch.is_primitive())
            .ok_or_else(|| usage("no even primitive character of that modulus"));
    }
    if let Some((qs, es)) = sel.split_once(':') {
        let q: u64 = qs.parse().map_err(|_| usage("bad modulus"))?;
        let exps = if es.is_empty() {
            Vec::new()
        } else {
            es.split(',')
                .map(|e| e.parse::<u64>().map_err(|_| usage("bad exponent")))
                .collect::<Result<Vec<u64>>>()?
        };
        return character_group(q)?.character(&exps);
    }
    let q: u64 = sel.parse().map_err(|_| usage("expected trivial | q | q:exps | primitive:q"))?;
    Ok(character_group(q)?.trivial())
}

/// Parse `u/f`, `inf`, or `oo` as a cusp of the given level.
pub fn parse_cusp(text: &str, level: u64) -> Result<Cusp> {
    if text == "inf" || text == "oo" {
        return Ok(Cusp::infinity(level));
    }
    let (us, fs) = text
        .split_once('/')
        .ok_or_else(|| Error::Domain(format!("cusp '{text}': expected u/f or inf")))?;
    let u: i64 = us.parse().map_err(|_| Error::Domain(format!("cusp '{text}': bad numerator")))?;
    let f: i64 =
        fs.parse().map_err(|_| Error::Domain(format!("cusp '{text}': bad denominator")))?;
    reduce(u, f, level)
}

fn cusp_name(cusp: &Cusp) -> String {
    format!("{}/{}", cusp.u, cusp.f)
}

#[derive(Clone, Debug, Serialize)]
pub struct CuspRow {
    pub cusp: String,
    pub u: u64,
    pub f: u64,
    pub width: u64,
    /// Is the stabilizer inside ker χ (present only when a χ was given)?
    #[serde(skip_serializing_if = "Option::is_none")]
    pub singular: Option<bool>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CuspsReport {
    pub schema: &'static str,
    pub command: &'static str,
    pub identity: &'static str,
    pub level: u64,
    pub index: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub character: Option<CharacterId>,
    pub count: usize,
    pub rows: Vec<CuspRow>,
}

pub fn cusps_report(level: u64, chi: Option<&DirichletCharacter>) -> Result<CuspsReport> {
    let rows = cusp_set(level)?
        .into_iter()
        .map(|cusp| CuspRow {
            cusp: cusp_name(&cusp),
            u: cusp.u,
            f: cusp.f,
            width: cusp.width(),
            singular: chi.map(|ch| cusp.is_singular_for(ch)),
        })
        .collect::<Vec<_>>();
    Ok(CuspsReport {
        schema: SCHEMA,
        command: "cusps",
        identity: "classes u/f with f | N, u in (Z/(f,N/f))^x; width = N/(N,f^2)",
        level,
        index: coset_count(level)?,
        character: chi.map(CharacterId::of),
        count: rows.len(),
        rows,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct ScatteringRowOut {
    pub cusp: String,
    pub f: u64,
    pub width: u64,
    pub entry: [f64; 2],
    pub weight: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct ScatteringReport {
    pub schema: &'static str,
    pub command: &'static str,
    pub identity: &'static str,
    pub level: u64,
    pub character: CharacterId,
    pub t: f64,
    pub rows: Vec<ScatteringRowOut>,
    pub weight_sum: f64,
    pub unitarity_residual: f64,
    /// |S1 + S3 − log N/q| from the weighted log sums at the same point.
    pub log_identity_residual: f64,
}

pub fn scattering_report(level: u64, chi: &DirichletCharacter, t: f64) -> Result<ScatteringReport> {
    let row = phi_infinity_row(level, chi, Complex64::new(0.5, t))?;
    let sums = hard_sums(level, chi, t)?;
    let rows = row
        .entries
        .iter()
        .map(|(cusp, val)| ScatteringRowOut {
            cusp: cusp_name(cusp),
            f: cusp.f,
            width: cusp.width(),
            entry: c2(*val),
            weight: val.norm_sqr(),
        })
        .collect();
    Ok(ScatteringReport {
        schema: SCHEMA,
        command: "scattering",
        identity: "sum_a |phi_{inf,a}(1/2+iT, chi)|^2 = 1; sum_a |phi|^2 log(f_a N/(q f_a)) = log N/q",
        level,
        character: CharacterId::of(chi),
        t,
        rows,
        weight_sum: row.weight_sum(),
        unitarity_residual: row.unitarity_residual(),
        log_identity_residual: sums.identity_residual,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct EvalReport {
    pub schema: &'static str,
    pub command: &'static str,
    pub identity: &'static str,
    pub kind: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub level: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub character: Option<CharacterId>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pair: Option<(CharacterId, CharacterId)>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cusp: Option<String>,
    pub z: [f64; 2],
    pub s: [f64; 2],
    pub value: [f64; 2],
}

pub enum EvalTarget<'a> {
    Classical,
    Pair { chi1: &'a DirichletCharacter, chi2: &'a DirichletCharacter, star: bool },
    CuspSeries { level: u64, chi: &'a DirichletCharacter, cusp: &'a Cusp },
}

pub fn eval_report(target: &EvalTarget, z: Complex64, s: Complex64) -> Result<EvalReport> {
    let trunc = FourierTruncation::default();
    let (kind, level, character, pair, cusp, value) = match target {
        EvalTarget::Classical => (
            "classical".to_string(),
            None,
            None,
            None,
            None,
            eval_level1_e(z, s, trunc)?,
        ),
        EvalTarget::Pair { chi1, chi2, star } => {
            let v = if *star {
                eval_char_star(chi1, chi2, z, s, trunc)?
            } else {
                eval_char_eisenstein(chi1, chi2, z, s, trunc)?
            };
            (
                if *star { "pair-star".to_string() } else { "pair".to_string() },
                None,
                None,
                Some((CharacterId::of(chi1), CharacterId::of(chi2))),
                None,
                v,
            )
        }
        EvalTarget::CuspSeries { level, chi, cusp } => (
            "cusp".to_string(),
            Some(*level),
            Some(CharacterId::of(chi)),
            None,
            Some(cusp_name(cusp)),
            eval_cusp_eisenstein(*level, chi, cusp, z, s, trunc)?,
        ),
    };
    Ok(EvalReport {
        schema: SCHEMA,
        command: "eval",
        identity: "Fourier expansion: delta y^s + phi y^{1-s} + K-Bessel tail",
        kind,
        level,
        character,
        pair,
        cusp,
        z: c2(z),
        s: c2(s),
        value: c2(value),
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct KernelReport {
    pub schema: &'static str,
    pub command: &'static str,
    pub identity: &'static str,
    pub level: u64,
    pub traced_to: u64,
    pub character: CharacterId,
    pub t: f64,
    /// ∞ for the full row kernel, the chosen cusp for the pair kernel.
    pub base_cusp: String,
    pub c0: f64,
    /// The two-term shape vol⁻¹(log(N²/(M(M,N/q))) + 4 Re L′/L(1+2iT, ψ̄)).
    pub c0_display: f64,
    pub c0_gap: f64,
    pub cg: Vec<(u64, f64)>,
    pub osc: Vec<(u64, [f64; 2])>,
    pub coefficient_mass: f64,
}

pub fn kernel_report(kernel: &RegKernel, m: u64) -> Result<KernelReport> {
    let form = kernel.traced_form(m)?;
    Ok(KernelReport {
        schema: SCHEMA,
        command: "kernel",
        identity: "Tr E = c0 + sum_g c_g G(g z) + sum_g 2 Re(w_g E(g z, 1+2iT)); c0 ~ vol^{-1}(log(N^2/(M gcd(M,N/q))) + 4 Re L'/L(1+2iT))",
        level: form.level,
        traced_to: form.traced_level,
        character: CharacterId::of(&kernel.chi),
        t: form.t_param,
        base_cusp: cusp_name(&kernel.base),
        c0: form.c0,
        c0_display: form.c0_display,
        c0_gap: form.c0_gap,
        cg: form.cg.iter().map(|(&g, &v)| (g, v)).collect(),
        osc: form.osc.iter().map(|(&g, &w)| (g, c2(w))).collect(),
        coefficient_mass: form.coefficient_mass(),
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct QueCosetRow {
    pub coset: String,
    /// ⟨Tr ℰ, φ_j⟩ through the closed form: c₀⟨1,φ_j⟩ + α.
    pub main: f64,
    pub alpha: f64,
    pub total: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct QueReport {
    pub schema: &'static str,
    pub command: &'static str,
    pub identity: &'static str,
    pub level: u64,
    pub traced_to: u64,
    pub character: CharacterId,
    pub t: f64,
    pub coset: String,
    /// ⟨ℰ, φ⟩ by direct quadrature against the level-N closed form.
    pub lhs: f64,
    pub c0: f64,
    /// c₀ ⟨1, φ⟩.
    pub main: f64,
    pub alpha: f64,
    /// lhs − main − alpha: pure quadrature error, reported not judged.
    pub residual: f64,
    pub mass: f64,
    pub resolution_used: u32,
}

pub fn que_report(
    kernel: &RegKernel,
    m: u64,
    coset: CosetSelect,
    spec: &QuadratureSpec,
) -> Result<QueReport> {
    let trunc = FourierTruncation::default();
    let form = kernel.traced_form(m)?;
    let phi = TestFunction::new(BumpProfile::STANDARD, m, coset)?;
    let lhs_ip = inner_product(
        &|z| Ok(Complex64::new(kernel.eval(z, trunc)?, 0.0)),
        &|z| Ok(Complex64::new(phi.value(z)?, 0.0)),
        kernel.level,
        spec,
    )?;
    let mass =
        inner_product(&|_| Ok(Complex64::new(1.0, 0.0)), &|z| Ok(Complex64::new(phi.value(z)?, 0.0)), m, spec)?
            .value
            .re;
    let alpha = reg::alpha_phi(&form, &phi, spec, trunc)?;
    let main = form.c0 * mass;
    let coset_name = match coset {
        CosetSelect::All => "all".to_string(),
        CosetSelect::Index(j) => j.to_string(),
    };
    Ok(QueReport {
        schema: SCHEMA,
        command: "que",
        identity: "<E, phi>_N = <Tr E, phi>_M = c0 <1, phi>_M + alpha_phi",
        level: kernel.level,
        traced_to: m,
        character: CharacterId::of(&kernel.chi),
        t: kernel.t_param,
        coset: coset_name,
        lhs: lhs_ip.value.re,
        c0: form.c0,
        main,
        alpha: alpha.value,
        residual: lhs_ip.value.re - main - alpha.value,
        mass,
        resolution_used: lhs_ip.resolution_used,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct PortionOut {
    pub schema: &'static str,
    pub command: &'static str,
    pub identity: &'static str,
    #[serde(flatten)]
    pub report: PortionReport,
}

pub fn portion_report(m: u64) -> Result<PortionOut> {
    Ok(PortionOut {
        schema: SCHEMA,
        command: "portion",
        identity: "rows sqrt(M)/100 <= c <= sqrt(M)/20, 0 <= d <= c/4, (c,d)=1; gamma D^c(100) inside 1/M < y <= 20000/M; cosets distinct",
        report: portion_set(m)?,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteCheck {
    pub name: &'static str,
    pub instances: u64,
    pub max_residual: f64,
    pub tol: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub schema: &'static str,
    pub command: &'static str,
    pub identity: &'static str,
    pub max_level: u64,
    pub t: f64,
    pub checks: Vec<SuiteCheck>,
    pub all_pass: bool,
}

/// Fast identity battery over all levels ≤ max_level: row unitarity and the
/// weighted log identity for every even character, exact η-orbit
/// cancellation for every divisor pair, and the cusp-count class formula.
pub fn suite_report(max_level: u64, t: f64) -> Result<SuiteReport> {
    let mut checks = Vec::new();

    let mut unit_res: f64 = 0.0;
    let mut log_res: f64 = 0.0;
    let mut rows = 0u64;
    for n in 1..=max_level {
        for chi in character_group(n)?.all_characters() {
            if !chi.even {
                continue;
            }
            let row = phi_infinity_row(n, &chi, Complex64::new(0.5, t))?;
            unit_res = unit_res.max(row.unitarity_residual());
            log_res = log_res.max(hard_sums(n, &chi, t)?.identity_residual);
            rows += 1;
        }
    }
    checks.push(SuiteCheck {
        name: "row unitarity on Re s = 1/2",
        instances: rows,
        max_residual: unit_res,
        tol: 1e-9,
        pass: unit_res <= 1e-9,
    });
    checks.push(SuiteCheck {
        name: "weighted log identity sum |phi|^2 log(f N/(q f)) = log N/q",
        instances: rows,
        max_residual: log_res,
        tol: 1e-9,
        pass: log_res <= 1e-9,
    });

    let mut eta_fail = 0u64;
    let mut eta_n = 0u64;
    for n in 1..=max_level {
        for m in arith::divisors(n)? {
            eta_n += 1;
            if !eta_cancellation_check(n, m)? {
                eta_fail += 1;
            }
        }
    }
    checks.push(SuiteCheck {
        name: "eta-orbit cancellation over all (N, M | N)",
        instances: eta_n,
        max_residual: eta_fail as f64,
        tol: 0.0,
        pass: eta_fail == 0,
    });

    let mut count_bad = 0u64;
    for n in 1..=max_level {
        let by_formula: u64 = arith::divisors(n)?
            .into_iter()
            .map(|f| arith::euler_phi(arith::gcd(f, n / f)).unwrap())
            .sum();
        if by_formula != cusp_set(n)?.len() as u64 {
            count_bad += 1;
        }
    }
    checks.push(SuiteCheck {
        name: "cusp count equals sum_f phi((f, N/f))",
        instances: max_level,
        max_residual: count_bad as f64,
        tol: 0.0,
        pass: count_bad == 0,
    });

    let all_pass = checks.iter().all(|ch| ch.pass);
    Ok(SuiteReport {
        schema: SCHEMA,
        command: "suite",
        identity: "identity battery: exact relations that hold at every level",
        max_level,
        t,
        checks,
        all_pass,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct ConsistencyOut {
    pub schema: &'static str,
    pub command: &'static str,
    pub identity: &'static str,
    pub level: u64,
    pub traced_to: u64,
    pub character: CharacterId,
    pub t: f64,
    pub per_coset: Vec<f64>,
    pub quadrature_total: f64,
    pub hecke_total: f64,
    pub predicted: f64,
    pub g_coefficient: f64,
    pub log_coefficient: f64,
    pub route_gap: f64,
}

pub fn consistency_report(
    kernel: &RegKernel,
    m: u64,
    spec: &QuadratureSpec,
) -> Result<ConsistencyOut> {
    let form = kernel.traced_form(m)?;
    let rep = consistency_sum(&form, BumpProfile::STANDARD, spec, FourierTruncation::default())?;
    Ok(ConsistencyOut {
        schema: SCHEMA,
        command: "consistency",
        identity: "sum_j <Tr E, phi_j>_M = c0 <1, phi_0>_1 nu(M) + sum_g c_g (nu(M)/nu(g)) (sqrt(g) lambda(g) <G, phi_0>_1 + (3/pi) g S_g <1, phi_0>_1)",
        level: kernel.level,
        traced_to: m,
        character: CharacterId::of(&kernel.chi),
        t: kernel.t_param,
        per_coset: rep.per_coset,
        quadrature_total: rep.quadrature_total,
        hecke_total: rep.hecke_total,
        predicted: rep.predicted,
        g_coefficient: rep.g_coefficient,
        log_coefficient: rep.log_coefficient,
        route_gap: rep.route_gap,
    })
}

/// Flatten any report's JSON value into CSV: one `key,value` line per leaf
/// in depth-first field order, arrays of objects as row blocks with a
/// header. Deterministic because the JSON itself is.
pub fn to_csv(value: &serde_json::Value) -> String {
    let mut out = String::new();
    fn scalar(v: &serde_json::Value) -> Option<String> {
        match v {
            serde_json::Value::Null => Some(String::new()),
            serde_json::Value::Bool(b) => Some(b.to_string()),
            serde_json::Value::Number(n) => Some(n.to_string()),
            serde_json::Value::String(s) => Some(format!("\"{}\"", s.replace('"', "\"\""))),
            serde_json::Value::Array(items) => {
                // short scalar arrays (complex values, intervals) join with ';'
                let parts: Option<Vec<String>> = items
                    .iter()
                    .map(|it| if it.is_array() || it.is_object() { None } else { scalar(it) })
                    .collect();
                parts.map(|p| p.join(";"))
            }
            _ => None,
        }
    }
    fn walk(prefix: &str, v: &serde_json::Value, out: &mut String) {
        if let Some(s) = scalar(v) {
            out.push_str(prefix);
            out.push(',');
            out.push_str(&s);
            out.push('\n');
            return;
        }
        match v {
            serde_json::Value::Array(items) => {
                // homogeneous object rows become a CSV block
                if !items.is_empty() && items.iter().all(|it| it.is_object()) {
                    let first = items[0].as_object().unwrap();
                    let cols: Vec<&String> = first.keys().collect();
                    out.push_str(prefix);
                    out.push_str(".header,");
                    out.push_str(&cols.iter().map(|s| s.as_str()).collect::<Vec<_>>().join(","));
                    out.push('\n');
                    for it in items {
                        let obj = it.as_object().unwrap();
                        let row: Vec<String> = cols
                            .iter()
                            .map(|k| obj.get(*k).and_then(scalar).unwrap_or_default())
                            .collect();
                        out.push_str(prefix);
                        out.push_str(".row,");
                        out.push_str(&row.join(","));
                        out.push('\n');
                    }
                } else {
                    for (i, it) in items.iter().enumerate() {
                        walk(&format!("{prefix}[{i}]"), it, out);
                    }
                }
            }
            serde_json::Value::Object(map) => {
                for (k, it) in map {
                    let p = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                    walk(&p, it, out);
                }
            }
            _ => unreachable!(),
        }
    }
    walk("", value, &mut out);
    out
}

/// Build the kernel a CLI invocation names: the full-row kernel by default,
/// the Atkin-Lehner pair kernel when a base cusp is given.
pub fn kernel_for(
    level: u64,
    chi: &DirichletCharacter,
    t: f64,
    al_cusp: Option<&Cusp>,
) -> Result<RegKernel> {
    match al_cusp {
        None => build_kernel(level, chi, t),
        Some(a) => build_al_kernel(level, chi, a, t),
    }
}

/// The traced form alone, for callers that do not need the kernel.
pub fn traced_form_for(
    level: u64,
    chi: &DirichletCharacter,
    t: f64,
    m: u64,
    al_cusp: Option<&Cusp>,
) -> Result<TracedForm> {
    kernel_for(level, chi, t, al_cusp)?.traced_form(m)
}

#[derive(Clone, Debug, Serialize)]
pub struct ErrorObject {
    pub schema: &'static str,
    pub error: ErrorBody,
}

#[derive(Clone, Debug, Serialize)]
pub struct ErrorBody {
    pub kind: &'static str,
    pub message: String,
}

pub fn error_object(err: &Error) -> ErrorObject {
    let kind = match err {
        Error::Domain(_) => "domain",
        Error::Pole { .. } => "pole",
        Error::Accuracy(_) => "accuracy",
        Error::Degenerate(_) => "degenerate",
    };
    ErrorObject {
        schema: SCHEMA,
        error: ErrorBody { kind, message: err.to_string() },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn selectors_cover_the_grammar() {
        let t5 = parse_character("trivial", Some(5)).unwrap();
        assert!(t5.is_trivial() && t5.modulus == 5);
        let bare = parse_character("7", None).unwrap();
        assert!(bare.is_trivial() && bare.modulus == 7);
        let quad = parse_character("5:2", None).unwrap();
        assert_eq!(quad.value(2).re, -1.0);
        let prim = parse_character("primitive:11", None).unwrap();
        assert!(prim.even && prim.is_primitive() && prim.modulus == 11);
        assert!(parse_character("trivial", None).is_err());
        assert!(parse_character("5:9,9,9", None).is_err());

        assert_eq!(parse_cusp("inf", 6).unwrap(), Cusp::infinity(6));
        assert_eq!(parse_cusp("1/2", 6).unwrap().f, 2);
        assert!(parse_cusp("x/2", 6).is_err());
    }

    #[test]
    fn reports_serialize_deterministically() {
        let rep = cusps_report(12, None).unwrap();
        let a = serde_json::to_string_pretty(&rep).unwrap();
        let b = serde_json::to_string_pretty(&cusps_report(12, None).unwrap()).unwrap();
        assert_eq!(a, b);
        assert!(a.contains("\"schema\": \"eisenlab/1\""));
        assert_eq!(rep.rows.len(), 6);

        let chi = parse_character("trivial", Some(6)).unwrap();
        let sc = scattering_report(6, &chi, 1.0).unwrap();
        assert!(sc.unitarity_residual < 1e-9);
        let js = serde_json::to_value(&sc).unwrap();
        let csv = to_csv(&js);
        assert!(csv.contains("rows.header,cusp,f,width,entry,weight"));
        assert!(csv.lines().count() > sc.rows.len());
    }

    #[test]
    fn the_identity_battery_passes_at_desk_scale() {
        let suite = suite_report(10, 1.0).unwrap();
        assert!(suite.all_pass, "{:?}", suite.checks);
    }
}
