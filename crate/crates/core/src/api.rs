//! One-shot commands on string inputs, returning JSON and a text rendering.
//!
//! These back the command-line tool and the browser demo, so both print the
//! same values.

use serde_json::{json, Value};

use crate::checks;
use crate::coeq;
use crate::error::{Error, Result};
use crate::prism::{self, PrismKind, PrismModel};
use crate::report::Report;
use crate::ring::{Ring, RingHom};
use crate::sigma::{self, witt_json, Gmat, SigmaPoint};
use crate::witt::ghost::{dwork_lift, GhostSeq};
use crate::witt::{parse_list, Strategy, WittVector};

#[derive(Clone, Debug, PartialEq)]
pub struct Output {
    pub json: Value,
    pub text: String,
}

impl Output {
    fn new(json: Value, text: impl Into<String>) -> Output {
        Output { json, text: text.into() }
    }
}

fn elems_text(ring: &Ring, xs: &[crate::ring::Elem]) -> String {
    let parts: Vec<String> = xs.iter().map(|x| ring.fmt_elem(x)).collect();
    format!("[{}]", parts.join(", "))
}

/// A vector padded with zero components to length `n`.
fn padded(ring: &Ring, s: &str, n: Option<usize>, degree: i64) -> Result<WittVector> {
    let mut comps = parse_list(ring, s)?;
    if let Some(n) = n {
        if comps.len() > n {
            return Err(Error::LengthMismatch(comps.len(), n));
        }
        comps.resize(n, ring.zero());
    }
    WittVector::new(ring, comps, degree)
}

/// `op` is one of `add`, `sub`, `mul`, `neg`, `frob`, `ver`, `inv`. Inputs are
/// padded to the longest input, and to at least two components.
pub fn witt_eval(ring: &str, op: &str, a: &str, b: Option<&str>, n: Option<usize>, degree: i64, strategy: &str) -> Result<Output> {
    let r = Ring::parse(ring)?;
    let s = Strategy::parse(strategy)?;
    let len = |x: &str| parse_list(&r, x).map(|v| v.len());
    let n = match n {
        Some(n) => n,
        None => len(a)?.max(b.map(len).transpose()?.unwrap_or(0)).max(2),
    };
    let x = padded(&r, a, Some(n), degree)?;
    let other = || -> Result<WittVector> {
        let b = b.ok_or_else(|| Error::Precondition(format!("{op} needs --b")))?;
        padded(&r, b, Some(n), degree)
    };
    let out = match op {
        "add" => x.add_with(&other()?, s)?,
        "sub" => x.sub_with(&other()?, s)?,
        "mul" => x.mul_with(&other()?, s)?,
        "neg" => x.neg_with(s)?,
        "frob" | "F" => x.frobenius_with(s)?,
        "ver" | "V" => x.verschiebung()?,
        "inv" => x.invert()?,
        _ => return Err(Error::Parse { pos: 0, msg: format!("unknown operation {op:?}") }),
    };
    Ok(Output::new(witt_json(&out), out.to_string()))
}

/// Ghost components with their precision in digits.
pub fn witt_ghost(ring: &str, vec: &str, degree: i64) -> Result<Output> {
    let r = Ring::parse(ring)?;
    let x = WittVector::parse(&r, vec, degree)?;
    let g = x.ghost();
    let json = json!({
        "ring": r.spec().to_string(),
        "ghost": g.entries().iter().map(|e| r.fmt_elem(e)).collect::<Vec<_>>(),
        "precision": g.precisions(),
    });
    Ok(Output::new(json, elems_text(&r, g.entries())))
}

/// The Witt vector with ghost components `ghost`, for the Frobenius lift `t -> phi`
/// (default `t^p`), after checking the Dwork congruences.
pub fn witt_dwork(ring: &str, ghost: &str, phi: Option<&str>) -> Result<Output> {
    let r = Ring::parse(ring)?;
    let image = match phi {
        Some(s) => r.parse_elem(s)?,
        None => r.pow(&r.gen(), r.p()),
    };
    let h = RingHom::frobenius_lift(&r, image)?;
    let g = GhostSeq::exact(&r, parse_list(&r, ghost)?)?;
    let x = dwork_lift(&h, &g)?;
    let mut json = witt_json(&x);
    json["precision"] = json!(x.ring().spec().factors.iter().map(|f| f.k).min());
    Ok(Output::new(json, x.to_string()))
}

fn sigma_point(ring: &Ring, v: &str, zeta: &str, gamma: Option<&str>) -> Result<SigmaPoint> {
    let p = ring.p() as i64;
    let v = ring.parse_elem(v)?;
    let zeta = WittVector::parse(ring, zeta, p)?;
    match gamma {
        Some(g) => SigmaPoint::new(ring, v, zeta, WittVector::parse(ring, g, 0)?),
        None => SigmaPoint::economic(ring, v, zeta),
    }
}

/// Loci of a point `(v, zeta, gamma)`; `gamma` defaults to 1.
pub fn sigma_classify(ring: &str, v: &str, zeta: &str, gamma: Option<&str>) -> Result<Output> {
    let r = Ring::parse(ring)?;
    let pt = sigma_point(&r, v, zeta, gamma)?;
    let loci = sigma::classify_locus(&pt)?;
    let fp = pt.f_prime()?;
    let json = json!({
        "point": pt.to_json(),
        "loci": loci,
        "f_prime": witt_json(&fp),
        "economic": pt.is_economic(),
    });
    let names: Vec<String> = loci.iter().map(|l| format!("{l:?}")).collect();
    Ok(Output::new(json, format!("{pt}\nloci: {}\nF': {fp}", names.join(", "))))
}

/// The point moved by `(alpha, w)`; `w` defaults to `1 - [v^p] alpha`.
pub fn sigma_act(ring: &str, v: &str, zeta: &str, gamma: Option<&str>, alpha: &str, w: Option<&str>) -> Result<Output> {
    let r = Ring::parse(ring)?;
    let pt = sigma_point(&r, v, zeta, gamma)?;
    let a = padded(&r, alpha, Some(pt.len()), r.p() as i64)?;
    let g = match w {
        Some(w) => Gmat::new(a, padded(&r, w, Some(pt.len()), 0)?)?,
        None => Gmat::from_alpha(pt.v(), &a)?,
    };
    let moved = sigma::g_act(&pt, &g)?;
    let json = json!({ "point": moved.to_json(), "alpha": witt_json(&g.alpha), "w": witt_json(&g.w) });
    Ok(Output::new(json, moved.to_string()))
}

/// `F' = [v^p] zeta + p gamma` and whether it is primitive.
pub fn sigma_fprime(ring: &str, v: &str, zeta: &str, gamma: Option<&str>) -> Result<Output> {
    let r = Ring::parse(ring)?;
    let pt = sigma_point(&r, v, zeta, gamma)?;
    let fp = pt.f_prime()?;
    let primitive = sigma::is_primitive(&fp)?;
    let json = json!({ "f_prime": witt_json(&fp), "primitive": primitive });
    Ok(Output::new(json, format!("{fp}{}", if primitive { "" } else { " (not primitive)" })))
}

fn toy_object(inst: &coeq::CoeqInstance, label: &str) -> Result<usize> {
    let compact: String = label.chars().filter(|c| !c.is_whitespace()).collect();
    let c = &inst.c;
    c.object_index(&compact)
        .ok_or_else(|| Error::Parse { pos: 0, msg: format!("unknown object {label:?}; objects are {:?}", (0..c.num_objects()).map(|o| c.object_label(o)).collect::<Vec<_>>()) })
}

/// `Mor^degree(src, dst)` in the coequalizer of the toy model over `F_q`, by brute force
/// and by the closed form.
pub fn coeq_homs(q: u64, src: &str, dst: &str, degree: i64, max_len: usize) -> Result<Output> {
    let inst = coeq::toy_instance(q)?;
    let adj = inst.check_assumptions()?;
    let (a, b) = (toy_object(&inst, src)?, toy_object(&inst, dst)?);
    let brute = coeq::coeq_bruteforce(&inst, (degree.min(-2), degree.max(1)), max_len)?;
    let closed = coeq::coeq_closed_form(&inst, &adj, a, b, degree)?;
    let agree = coeq::closed_form_matches(&inst, &adj, &brute, a, b, degree)?;
    let show = |w: &coeq::Word| format!("{:?}", w.letters);
    let json = json!({
        "q": q,
        "src": inst.c.object_label(a),
        "dst": inst.c.object_label(b),
        "degree": degree,
        "count": brute.hom_count(a, b, degree),
        "closed_form": closed.iter().map(show).collect::<Vec<_>>(),
        "agree": agree,
    });
    let text = format!("{} morphisms of degree {degree} (closed form {})", brute.hom_count(a, b, degree), if agree { "agrees" } else { "disagrees" });
    Ok(Output::new(json, text))
}

/// Nonzero hom-set sizes of the toy coequalizer over `F_q` in degrees `window`.
pub fn coeq_count(q: u64, window: (i64, i64), max_len: usize) -> Result<Output> {
    let inst = coeq::toy_instance(q)?;
    let brute = coeq::coeq_bruteforce(&inst, window, max_len)?;
    let c = &inst.c;
    let mut rows = Vec::new();
    let mut text = Vec::new();
    for ((a, b, n), k) in brute.counts(c.num_objects(), window) {
        if k > 0 {
            rows.push(json!({ "src": c.object_label(a), "dst": c.object_label(b), "degree": n, "count": k }));
            text.push(format!("{:>8} -> {:<8} {:>3}  {k}", c.object_label(a), c.object_label(b), n));
        }
    }
    Ok(Output::new(json!({ "q": q, "window": [window.0, window.1], "homs": rows }), text.join("\n")))
}

/// The graded category `Gamma''(F_q)` in degrees `[-1, max_degree]`.
pub fn toy_gamma2(q: u64, max_degree: i64) -> Result<Output> {
    let g = coeq::gamma_double_prime(q, max_degree)?;
    let classes = g.iso_classes();
    let mut distinct = classes.clone();
    distinct.sort();
    distinct.dedup();
    let text = format!("{} objects, {} arrows, {} isomorphism classes", g.num_objects(), g.arrows().len(), distinct.len());
    let mut json = g.to_json();
    json["iso_classes"] = json!(classes);
    Ok(Output::new(json, text))
}

fn model(kind: &str, u: Option<i64>, p: u64, k: u32, m: usize) -> Result<PrismModel> {
    prism::make_prism(PrismKind::parse(kind, u)?, p, k, m)
}

pub fn prism_make(kind: &str, u: Option<i64>, p: u64, k: u32, m: usize) -> Result<Output> {
    let pm = model(kind, u, p, k, m)?;
    let j = pm.to_json();
    let text = format!("{} over {}: phi(gen) = {}, d = {}", pm.kind().name(), j["ring"].as_str().unwrap_or(""), j["phi"].as_str().unwrap_or(""), j["d"].as_str().unwrap_or(""));
    Ok(Output::new(j, text))
}

/// `delta(a)`, which is only known to one digit less than `a`.
pub fn prism_delta(kind: &str, u: Option<i64>, p: u64, k: u32, m: usize, a: &str) -> Result<Output> {
    let pm = model(kind, u, p, k, m)?;
    let x = pm.ring().parse_elem(a)?;
    let (lo, d) = pm.delta(&x)?;
    let json = json!({ "value": lo.fmt_elem(&d), "ring": lo.spec().to_string(), "precision": k - 1 });
    Ok(Output::new(json, lo.fmt_elem(&d)))
}

/// The splitting `f(a)` in `W_n`.
pub fn prism_split(kind: &str, u: Option<i64>, p: u64, k: u32, m: usize, a: &str, n: usize) -> Result<Output> {
    let pm = model(kind, u, p, k, m)?;
    let x = pm.ring().parse_elem(a)?;
    let f = pm.joyal_split(&x, n)?;
    let mut json = witt_json(&f);
    json["precision"] = json!(f.ring().spec().factors[0].k);
    Ok(Output::new(json, f.to_string()))
}

pub fn prism_check(kind: &str, u: Option<i64>, p: u64, k: u32, m: usize, n: usize) -> Result<(Output, bool)> {
    let pm = model(kind, u, p, k, m)?;
    let t = prism::distinguished_check(&pm, n)?;
    let r = Report::from_tally("B-distinguished", t).note("model", pm.kind().name());
    let ok = r.passed();
    Ok((Output::new(serde_json::to_value(&r).expect("reports serialize"), report_line(&r)), ok))
}

pub fn report_line(r: &Report) -> String {
    let mut s = format!("{:<26} {:<4} {:>8} cases", r.id, if r.passed() { "pass" } else { "FAIL" }, r.cases);
    for (k, v) in &r.notes {
        s.push_str(&format!("  {k}: {v}"));
    }
    for c in &r.counterexamples {
        s.push_str(&format!("\n    {c}"));
    }
    s
}

/// Runs checks matching `pattern`; the flag is whether all passed.
pub fn check_run(pattern: &str, seed: u64) -> Result<(Output, bool)> {
    let reports = checks::run(pattern, seed)?;
    let ok = reports.iter().all(|r| r.passed());
    let text: Vec<String> = reports.iter().map(report_line).collect();
    Ok((Output::new(serde_json::to_value(&reports).expect("reports serialize"), text.join("\n")), ok))
}

pub fn check_list(filter: Option<&str>, seed: u64) -> Output {
    let list = checks::list(filter, seed);
    let text: Vec<String> = list.iter().map(|d| format!("{:<26} {:<10} {}  [{}]", d.id, d.module, d.statement, d.rings.join("; "))).collect();
    Output::new(serde_json::to_value(&list).expect("descriptors serialize"), text.join("\n"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        assert_eq!(witt_ghost("Zmod(2^4)", "[2,1]", 0).unwrap().text, "[2, 6]");
        assert_eq!(witt_eval("Zmod(2^2)", "mul", "[3]", Some("[3]"), None, 0, "auto").unwrap().text, "[1, 0]");
        let (_, ok) = prism_check("qde", None, 2, 4, 4, 3).unwrap();
        assert!(ok);
        assert!(matches!(witt_ghost("Zmod(2^4)", "[2,", 0), Err(Error::Parse { .. })));
    }
}
