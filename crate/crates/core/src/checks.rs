//! The registry of named checks.
//!
//! Each check is a pure function of the seed. Running a selection executes
//! the checks in parallel and returns the reports ordered by id.

use rayon::prelude::*;
use serde::Serialize;

use crate::coeq;
use crate::error::{Error, Result};
use crate::prism::{self, PrismKind};
use crate::report::{Report, Tally};
use crate::ring::{Elem, LocalSpec, Ring, RingHom, RingSpec};
use crate::sampling::rng_for;
use crate::sharp;
use crate::sigma;
use crate::witt::ghost::{ghost_lift, GhostSeq};
use crate::witt::{all_vectors, check_pi_f_hom, random_vector, Strategy, WittVector};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Mode {
    Exhaustive,
    Sampled { count: usize, seed: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckDescriptor {
    pub id: &'static str,
    pub module: &'static str,
    pub statement: &'static str,
    pub rings: Vec<String>,
    pub mode: Mode,
}

type Runner = fn(u64) -> Result<Report>;

struct Entry {
    id: &'static str,
    module: &'static str,
    statement: &'static str,
    rings: &'static [&'static str],
    samples: Option<usize>,
    run: Runner,
}

const ENTRIES: &[Entry] = &[
    // ring-core
    Entry { id: "R-ring-axioms", module: "ring-core", statement: "commutative ring axioms", rings: &["Zmod(2^2)", "Zmod(3^1)[t]/(t^2)", "Zmod(2^1) x Zmod(2^2)", "GF(4)"], samples: None, run: ring_axioms },
    Entry { id: "R-unit-nilpotent", module: "ring-core", statement: "unit iff constant term is prime to p, nilpotent otherwise, factorwise on products", rings: &["Zmod(2^3)", "Zmod(3^1)[t]/(t^2)", "Zmod(2^1) x Zmod(2^2)", "GF(4)", "Zmod(2^2)[q]/((q-1)^2)"], samples: None, run: unit_nilpotent },
    Entry { id: "R-frobenius-lift", module: "ring-core", statement: "phi(q) = q^p is a ring endomorphism lifting Frobenius; q -> 1 sends 1 + q to p", rings: &["Zmod(2^3)[q]/((q-1)^4)", "Zmod(3^2)[q]/((q-1)^3)"], samples: Some(300), run: frobenius_lift },
    // witt-core
    Entry { id: "W-ring-laws", module: "witt-core", statement: "W_n(R) is a commutative ring", rings: &["W_2(Zmod(3^1))", "W_3(Zmod(2^1))"], samples: None, run: witt_ring_laws },
    Entry { id: "W-strategy-equivalence", module: "witt-core", statement: "universal polynomials, ghost transport and differential evaluation agree", rings: &["W_2(Zmod(3^1))", "W_3(Zmod(2^1))", "W_4(Zmod(3^4)[t]/(t^3))"], samples: Some(1000), run: strategy_equivalence },
    Entry { id: "W-FV-p", module: "witt-core", statement: "FV = p; in characteristic p also VF = p and F is the componentwise p-th power; (Vx)^2 = p V(x^2)", rings: &["W_3(Zmod(2^1))", "W_2(Zmod(2^2))"], samples: None, run: fv_p },
    Entry { id: "W-projection-formula", module: "witt-core", statement: "V(x) y = V(x F(y))", rings: &["W_3(Zmod(2^1))", "W_2(Zmod(2^2))"], samples: None, run: projection_formula },
    Entry { id: "W-teichmuller", module: "witt-core", statement: "[ab] = [a][b] and F([a]) = [a^p]", rings: &["W_3(Zmod(2^1))", "W_2(Zmod(2^2))", "W_3(Zmod(3^1)[t]/(t^2))"], samples: None, run: teichmuller },
    Entry { id: "L-invertible-in-W", module: "witt-core", statement: "x is a unit of W_n(R) iff x_0 is a unit of R", rings: &["W_3(Zmod(2^1))", "W_2(Zmod(2^2))", "W_2(Zmod(2^1)[t]/(t^2))"], samples: None, run: invertible_in_w },
    Entry { id: "W-ghost-roundtrip", module: "witt-core", statement: "the ghost map is a ring map and ghost lifting inverts it up to the tracked precision", rings: &["W_3(Zmod(2^6))", "W_3(Zmod(3^4))"], samples: Some(500), run: ghost_roundtrip },
    Entry { id: "B-p2-over-p", module: "witt-core", statement: "the Dwork lift a of (p^(2p^n - 1)) satisfies p a = [p^2]", rings: &["W_4(Zmod(2^6))", "W_4(Zmod(3^6))"], samples: None, run: p2_over_p },
    Entry { id: "C-pi-F-hom", module: "witt-core", statement: "pi_n o F^m: W_{n+m} -> W_n is a ring homomorphism", rings: &["Zmod(2^1)", "Zmod(3^1)"], samples: None, run: pi_f_hom },
    // sharp-hopf
    Entry { id: "H-dp-rewriting", module: "sharp-hopf", statement: "x^m x^m' = x^(m+m') in the divided power basis u_n^p = p u_{n+1}", rings: &["Z[u_0, u_1, ...]"], samples: None, run: dp_rewriting },
    Entry { id: "L-not-additive", module: "sharp-hopf", statement: "Delta(u_n) - u_n (x) 1 - 1 (x) u_n is integral with content 1", rings: &["Z[u] (x) Z[u]"], samples: None, run: not_additive },
    Entry { id: "H-coassociativity", module: "sharp-hopf", statement: "the comultiplication of G_a^sharp is coassociative", rings: &["Z[u] (x) Z[u] (x) Z[u]"], samples: None, run: coassociativity },
    Entry { id: "L-Ga-sharp-joyal", module: "sharp-hopf", statement: "Ker F is a W-module and the free delta-ring on y_0 splits it", rings: &["Zmod(2^2)", "Zmod(2^3)", "Zmod(3^2)"], samples: None, run: ga_sharp_joyal },
    Entry { id: "L-Gm-sharp-mod-p", module: "sharp-hopf", statement: "modulo p, x -> 1 + Vx identifies Ker F on W with Ker F on units", rings: &["W_3(Zmod(2^1))", "W_2(Zmod(3^1))", "W_2(Zmod(2^1)[t]/(t^2))"], samples: None, run: gm_sharp_mod_p },
    Entry { id: "L-annihilators", module: "sharp-hopf", statement: "Ker F and V(W^(1)) are each other's annihilators", rings: &["W_3(Zmod(2^1))", "W_2(Zmod(3^1))"], samples: None, run: annihilators },
    Entry { id: "Q-quasi-ideal", module: "sharp-hopf", statement: "d(x) y = d(y) x", rings: &["W_2(Zmod(2^1))", "W_2(Zmod(2^2))"], samples: None, run: quasi_ideal },
    // primitive vectors
    Entry { id: "L-contracting-1", module: "sigma-lab", statement: "some F^n of a primitive x equals p times a unit", rings: &["W_4(Zmod(2^2))", "W_4(Zmod(2^3))"], samples: None, run: contracting1 },
    Entry { id: "L-contracting-2", module: "sigma-lab", statement: "a unit u with p u = p has some F^n(u) = 1", rings: &["W_3(Zmod(2^2))"], samples: None, run: contracting2 },
    Entry { id: "L-orbit-of-p", module: "sigma-lab", statement: "z = p mod p^2 is p times a unit", rings: &["W_3(Zmod(2^3))", "W_3(Zmod(3^2))"], samples: None, run: orbit_of_p },
    Entry { id: "L-F-on-Wprim", module: "sigma-lab", statement: "F preserves primitivity", rings: &["W_3(Zmod(2^2))", "W_3(Zmod(2^1)[t]/(t^2))"], samples: None, run: f_on_wprim },
    Entry { id: "L-perfect-normal-form", module: "sigma-lab", statement: "over a perfect field every primitive x is u V(1) for exactly one unit u", rings: &["W_3(GF(2))", "W_3(GF(4))"], samples: None, run: perfect_normal_form },
    Entry { id: "L-g-stack", module: "sigma-lab", statement: "W^x acts on W_prim with the expected stabilizers", rings: &["W_2(Zmod(2^2))", "W_2(Zmod(2^1)[t]/(t^2))"], samples: None, run: g_stack },
    // sigma-lab
    Entry { id: "S-g-group-law", module: "sigma-lab", statement: "the rescaled unit group law is an abelian group law", rings: &["W_2(Zmod(2^2))", "W_2(Zmod(2^1)[t]/(t^2))"], samples: None, run: g_group_law },
    Entry { id: "S-action-primitivity", module: "sigma-lab", statement: "the action preserves primitivity and respects composition", rings: &["W_2(Zmod(2^2))", "W_2(Zmod(2^1)[t]/(t^2))"], samples: Some(2000), run: action_primitivity },
    Entry { id: "E-F-vx-gamma-Vy", module: "sigma-lab", statement: "F([v] x + V(gamma y)) = y ([v^p] zeta + p gamma) on module points", rings: &["W_2(Zmod(2^2))", "W_2(Zmod(2^1)[t]/(t^2))"], samples: None, run: f_vx_gamma_vy },
    Entry { id: "S-fprime-j-minus", module: "sigma-lab", statement: "F' o j_- = id on primitive vectors", rings: &["W_2(Zmod(2^2))", "W_2(Zmod(2^1)[t]/(t^2))"], samples: None, run: fprime_j_minus },
    Entry { id: "S-xi-transformation", module: "sigma-lab", statement: "xi transforms by the module transport of the group action", rings: &["W_2(Zmod(2^2))", "W_2(Zmod(2^1)[t]/(t^2))"], samples: Some(500), run: xi_transformation },
    Entry { id: "S-loci", module: "sigma-lab", statement: "the plus and minus loci are disjoint and stable under the action", rings: &["W_2(Zmod(2^2))", "W_2(Zmod(2^1)[t]/(t^2))"], samples: None, run: loci },
    Entry { id: "S-char-p-affine-linear", module: "sigma-lab", statement: "in characteristic p the action on zeta_0 is affine-linear", rings: &["W_2(Zmod(2^1))", "W_2(Zmod(2^1)[t]/(t^2))"], samples: None, run: char_p_affine },
    Entry { id: "S-normalize-gamma", module: "sigma-lab", statement: "every rigidified point is equivalent to an economic one", rings: &["W_2(Zmod(2^2))", "W_2(Zmod(2^1)[t]/(t^2))"], samples: None, run: normalize_gamma },
    Entry { id: "S-rescaling", module: "sigma-lab", statement: "rescaling by units is compatible with F', the loci and the action", rings: &["W_2(Zmod(2^2))", "W_2(Zmod(2^1)[t]/(t^2))"], samples: None, run: rescaling },
    Entry { id: "S-delta0-degeneracy", module: "sigma-lab", statement: "on the v = 0 locus the action degenerates to translation of zeta by p alpha", rings: &["W_2(Zmod(2^2))", "W_2(Zmod(2^1)[t]/(t^2))"], samples: None, run: delta0_degeneracy },
    // cat-coeq
    Entry { id: "K-lax-quotient", module: "cat-coeq", statement: "(C - C_-)_Phi and C_Phi agree with the coequalizer in degrees >= 0", rings: &["S'(GF(2))", "S'(GF(3))"], samples: None, run: lax_quotient },
    Entry { id: "K-coeq-closed-form", module: "cat-coeq", statement: "coequalizer hom-sets: Mor(Phi_+^n c, c') for n >= 0, Mor(c, j_+ d) for n = -1, empty below", rings: &["S'(GF(2))", "S'(GF(3))"], samples: None, run: coeq_closed_form },
    Entry { id: "K-gamma-double-prime", module: "cat-coeq", statement: "Gamma'' is a graded category with unique graded composites and matches the coequalizer", rings: &["Gamma''(GF(2))", "Gamma''(GF(3))"], samples: None, run: gamma_double_prime },
    Entry { id: "K-nodal-model", module: "cat-coeq", statement: "object classes of Gamma'' match the nodal curve and admissible collections", rings: &["GF(2)", "GF(3)", "GF(4)"], samples: None, run: nodal_model },
    Entry { id: "K-groupoid-commutation", module: "cat-coeq", statement: "isomorphism classes of the coequalizer are those of the coequalizer of groupoids", rings: &["S'(GF(2))", "S'(GF(3))"], samples: None, run: groupoid_commutation },
    // prisms
    Entry { id: "B-qdr-delta-laws", module: "prisms", statement: "delta(a + b), delta(a b), delta(1) laws on the q-de Rham prism", rings: &["Zmod(2^5)[q]/((q-1)^4)", "Zmod(3^4)[q]/((q-1)^3)"], samples: Some(200), run: qdr_delta_laws },
    Entry { id: "B-joyal-split", module: "prisms", statement: "the delta-structure gives a ring map f: A -> W_n(A) with F o f = f o phi", rings: &["Zmod(2^5)[q]/((q-1)^4)", "Zmod(3^4)[q]/((q-1)^3)"], samples: Some(30), run: joyal_split },
    Entry { id: "B-distinguished", module: "prisms", statement: "the q-de Rham and Lubin-Tate ideals are distinguished", rings: &["q-dR p = 2, 3", "LT u = 1, 1 + p"], samples: None, run: distinguished },
    Entry { id: "B-economic", module: "prisms", statement: "the economic Lubin-Tate variant is a delta-ring with phi = u^(p-1) y (y + p)^(p-1)", rings: &["p = 2, 3, 5"], samples: None, run: economic },
    Entry { id: "B-q-power", module: "prisms", statement: "q^n for n in Z_p is multiplicative, compatible with phi and agrees with integer powers", rings: &["Zmod(2^6)[q]/((q-1)^3)", "Zmod(3^5)[q]/((q-1)^3)"], samples: Some(100), run: q_power },
];

fn mode(e: &Entry, seed: u64) -> Mode {
    match e.samples {
        Some(count) => Mode::Sampled { count, seed },
        None => Mode::Exhaustive,
    }
}

fn descriptor(e: &Entry, seed: u64) -> CheckDescriptor {
    CheckDescriptor {
        id: e.id,
        module: e.module,
        statement: e.statement,
        rings: e.rings.iter().map(|s| s.to_string()).collect(),
        mode: mode(e, seed),
    }
}

/// The full registry, sorted by id.
pub fn registry(seed: u64) -> Vec<CheckDescriptor> {
    let mut out: Vec<_> = ENTRIES.iter().map(|e| descriptor(e, seed)).collect();
    out.sort_by_key(|d| d.id);
    out
}

/// `*` matches any run of characters; everything else is literal.
pub fn glob_match(pattern: &str, s: &str) -> bool {
    let (p, s) = (pattern.as_bytes(), s.as_bytes());
    let (mut i, mut j) = (0, 0);
    let mut star: Option<(usize, usize)> = None;
    while j < s.len() {
        if i < p.len() && p[i] == b'*' {
            star = Some((i, j));
            i += 1;
        } else if i < p.len() && p[i] == s[j] {
            i += 1;
            j += 1;
        } else if let Some((si, sj)) = star {
            i = si + 1;
            j = sj + 1;
            star = Some((si, sj + 1));
        } else {
            return false;
        }
    }
    p[i..].iter().all(|&c| c == b'*')
}

/// Descriptors whose module contains `filter` or whose id matches it as a glob.
pub fn list(filter: Option<&str>, seed: u64) -> Vec<CheckDescriptor> {
    registry(seed)
        .into_iter()
        .filter(|d| filter.is_none_or(|f| d.module.contains(f) || glob_match(f, d.id)))
        .collect()
}

fn select(pattern: &str) -> Result<Vec<&'static Entry>> {
    let sel: Vec<&Entry> = ENTRIES.iter().filter(|e| glob_match(pattern, e.id)).collect();
    if sel.is_empty() {
        return Err(Error::UnknownCheck(pattern.to_string()));
    }
    Ok(sel)
}

fn execute(e: &Entry, seed: u64) -> Report {
    match (e.run)(seed) {
        Ok(r) => r,
        Err(err) => Report::from_tally(e.id, Tally { cases: 1, failures: 1, counterexamples: vec![err.to_string()] }),
    }
}

/// Runs every check whose id matches `pattern`, in parallel, ordered by id.
pub fn run(pattern: &str, seed: u64) -> Result<Vec<Report>> {
    let sel = select(pattern)?;
    let mut out: Vec<Report> = sel.par_iter().map(|e| execute(e, seed)).collect();
    out.sort_by(|a, b| a.id.cmp(&b.id));
    Ok(out)
}

/// Runs the whole registry.
pub fn run_all(seed: u64) -> Vec<Report> {
    run("*", seed).expect("the registry is not empty")
}

// ---- helpers ----

fn ring(s: &str) -> Result<Ring> {
    Ring::parse(s)
}

fn field(q: u64) -> Result<Ring> {
    Ring::field(q)
}

fn elements(r: &Ring) -> Result<Vec<Elem>> {
    Ok(r.elements()?.collect())
}

fn report(id: &str, t: Tally) -> Report {
    Report::from_tally(id, t)
}

/// Merges tallies from several rings into one.
fn merged(parts: impl IntoIterator<Item = Result<Tally>>) -> Result<Tally> {
    let mut t = Tally::default();
    for p in parts {
        t.merge(p?);
    }
    Ok(t)
}

fn small_witt_rings() -> Result<Vec<(Ring, usize)>> {
    Ok(vec![(Ring::zmod(2, 1)?, 3), (Ring::zmod(2, 2)?, 2)])
}

fn sigma_rings() -> Result<Vec<Ring>> {
    Ok(vec![Ring::zmod(2, 2)?, ring("Zmod(2^1)[t]/(t^2)")?])
}

// ---- ring-core ----

fn ring_axioms(_: u64) -> Result<Report> {
    let mut t = Tally::default();
    let rings = [Ring::zmod(2, 2)?, ring("Zmod(3^1)[t]/(t^2)")?, ring("Zmod(2^1) x Zmod(2^2)")?, field(4)?];
    for r in &rings {
        let els = elements(r)?;
        let (zero, one) = (r.zero(), r.one());
        for a in &els {
            t.record(r.add(a, &zero) == *a && r.mul(a, &one) == *a, || format!("identities at {}", r.fmt_elem(a)));
            t.record(r.is_zero(&r.add(a, &r.neg(a))), || format!("negation at {}", r.fmt_elem(a)));
            for b in &els {
                t.record(r.add(a, b) == r.add(b, a) && r.mul(a, b) == r.mul(b, a), || {
                    format!("commutativity at {}, {}", r.fmt_elem(a), r.fmt_elem(b))
                });
                t.record(r.sub(a, b) == r.add(a, &r.neg(b)), || format!("subtraction at {}, {}", r.fmt_elem(a), r.fmt_elem(b)));
                for c in &els {
                    let assoc = r.add(&r.add(a, b), c) == r.add(a, &r.add(b, c)) && r.mul(&r.mul(a, b), c) == r.mul(a, &r.mul(b, c));
                    let dist = r.mul(a, &r.add(b, c)) == r.add(&r.mul(a, b), &r.mul(a, c));
                    t.record(assoc && dist, || format!("{} at {}, {}, {}", r.spec(), r.fmt_elem(a), r.fmt_elem(b), r.fmt_elem(c)));
                }
            }
        }
    }
    Ok(report("R-ring-axioms", t))
}

fn unit_nilpotent(_: u64) -> Result<Report> {
    let mut t = Tally::default();
    let rings = [
        Ring::zmod(2, 3)?,
        ring("Zmod(3^1)[t]/(t^2)")?,
        ring("Zmod(2^1) x Zmod(2^2)")?,
        field(4)?,
        Ring::new(RingSpec::product(2, vec![LocalSpec::shifted(2, 2, 'q')]))?,
    ];
    for r in &rings {
        let els = elements(r)?;
        for a in &els {
            let unit = els.iter().any(|b| r.mul(a, b) == r.one());
            let nil = r.is_zero(&r.pow(a, 64));
            t.record(r.is_unit(a) == unit && r.is_nilpotent(a) == nil, || format!("{} in {}", r.fmt_elem(a), r.spec()));
            if unit {
                t.record_result(r.inv(a).map(|b| r.mul(a, &b) == r.one()), || format!("inverse of {}", r.fmt_elem(a)));
            }
            let pattern = r.unit_pattern(a);
            let by_factor: Vec<bool> = (0..r.num_factors()).map(|f| r.factor_ring(f).is_unit(&r.project(a, f))).collect();
            t.record(pattern == by_factor && r.is_unit(a) == pattern.iter().all(|&u| u), || format!("unit pattern of {}", r.fmt_elem(a)));
            for f in 0..r.num_factors() {
                let fr = r.factor_ring(f);
                let x = r.project(a, f);
                t.record(fr.is_unit(&x) != fr.is_nilpotent(&x), || format!("local dichotomy at {}", fr.fmt_elem(&x)));
            }
        }
    }
    Ok(report("R-unit-nilpotent", t))
}

fn frobenius_lift(seed: u64) -> Result<Report> {
    let mut t = Tally::default();
    let mut rng = rng_for(seed, "R-frobenius-lift");
    for (p, k, e) in [(2u64, 3u32, 4usize), (3, 2, 3)] {
        let r = Ring::new(RingSpec::product(p, vec![LocalSpec::shifted(k, e, 'q')]))?;
        let q = r.add(&r.one(), &r.gen());
        let phi = RingHom::frobenius_lift(&r, r.sub(&r.pow(&q, p), &r.one()))?;
        t.record(phi.apply(&q) == r.pow(&q, p), || "phi(q) != q^p".into());
        let modp = r.mod_p()?;
        for a in r.elements()? {
            let ok = modp.reduce_from(&phi.apply(&a)) == modp.reduce_from(&r.pow(&a, p));
            t.record(ok, || format!("phi({}) is not a^p mod p", r.fmt_elem(&a)));
        }
        let base = Ring::zmod(p, k)?;
        let at_one = RingHom::specialization(&r, &base, base.zero())?;
        let one_plus_q = r.add(&r.one(), &q);
        t.record(at_one.apply(&one_plus_q) == base.from_int(2), || "1 + q does not specialize to 2".into());
        let cyclo = (0..p).fold(r.zero(), |acc, i| r.add(&acc, &r.pow(&q, i)));
        t.record(at_one.apply(&cyclo) == base.from_int(p as i64), || "the cyclotomic polynomial does not specialize to p".into());
        for _ in 0..300 {
            let (a, b) = (r.random(&mut rng), r.random(&mut rng));
            for h in [&phi, &at_one] {
                let tr = h.target();
                let ok = h.apply(&r.add(&a, &b)) == tr.add(&h.apply(&a), &h.apply(&b))
                    && h.apply(&r.mul(&a, &b)) == tr.mul(&h.apply(&a), &h.apply(&b))
                    && h.apply(&r.one()) == tr.one();
                t.record(ok, || format!("homomorphism laws at {}, {}", r.fmt_elem(&a), r.fmt_elem(&b)));
            }
        }
    }
    Ok(report("R-frobenius-lift", t))
}

// ---- witt-core ----

fn witt_ring_laws(_: u64) -> Result<Report> {
    let mut t = Tally::default();
    for (r, n) in [(Ring::zmod(3, 1)?, 2), (Ring::zmod(2, 1)?, 3)] {
        let all = all_vectors(&r, n, 0)?;
        let (zero, one) = (WittVector::zero(&r, n), WittVector::one(&r, n));
        for x in &all {
            t.record(x.add(&zero)? == *x && x.mul(&one)? == *x && x.add(&x.neg()?)?.is_zero(), || format!("identities at {x}"));
            for y in &all {
                t.record(x.add(y)? == y.add(x)? && x.mul(y)? == y.mul(x)?, || format!("commutativity at {x}, {y}"));
                for z in &all {
                    let assoc = x.add(y)?.add(z)? == x.add(&y.add(z)?)? && x.mul(y)?.mul(z)? == x.mul(&y.mul(z)?)?;
                    let dist = x.mul(&y.add(z)?)? == x.mul(y)?.add(&x.mul(z)?)?;
                    t.record(assoc && dist, || format!("{x}, {y}, {z}"));
                }
            }
        }
    }
    Ok(report("W-ring-laws", t))
}

const STRATEGIES: [Strategy; 3] = [Strategy::Universal, Strategy::Ghost, Strategy::Differential];

fn strategies_agree(x: &WittVector, y: &WittVector) -> Result<bool> {
    let mut outs = Vec::new();
    for s in STRATEGIES {
        outs.push([x.add_with(y, s)?, x.mul_with(y, s)?, x.sub_with(y, s)?, x.neg_with(s)?, x.frobenius_with(s)?]);
    }
    Ok(outs.windows(2).all(|w| w[0] == w[1]))
}

fn strategy_equivalence(seed: u64) -> Result<Report> {
    let mut t = Tally::default();
    for (r, n) in [(Ring::zmod(3, 1)?, 2), (Ring::zmod(2, 1)?, 3)] {
        let all = all_vectors(&r, n, 0)?;
        for x in &all {
            for y in &all {
                t.record_result(strategies_agree(x, y), || format!("{x}, {y}"));
            }
        }
    }
    let r = ring("Zmod(3^4)[t]/(t^3)")?;
    let mut rng = rng_for(seed, "W-strategy-equivalence");
    let pairs: Vec<(WittVector, WittVector)> =
        (0..1000).map(|_| (random_vector(&r, 4, 0, &mut rng), random_vector(&r, 4, 0, &mut rng))).collect();
    let results: Vec<Result<bool>> = pairs.par_iter().map(|(x, y)| strategies_agree(x, y)).collect();
    for ((x, y), ok) in pairs.iter().zip(results) {
        t.record_result(ok, || format!("{x}, {y}"));
    }
    Ok(report("W-strategy-equivalence", t))
}

fn fv_p(_: u64) -> Result<Report> {
    let mut t = Tally::default();
    for (r, n) in small_witt_rings()? {
        let p = r.p();
        for x in all_vectors(&r, n, 0)? {
            let px = x.mul_int(p as i64)?;
            t.record(x.verschiebung()?.frobenius()? == px, || format!("FV at {x}"));
            let vx = x.verschiebung()?;
            t.record(vx.mul(&vx)? == x.mul(&x)?.verschiebung()?.mul_int(p as i64)?, || format!("(Vx)^2 at {x}"));
            if r.is_char_p() {
                t.record(x.frobenius()?.verschiebung()? == px, || format!("VF at {x}"));
                let pth: Vec<Elem> = x.comps()[..n - 1].iter().map(|a| r.pow(a, p)).collect();
                t.record(x.frobenius()?.comps() == &pth[..], || format!("F is not componentwise at {x}"));
            }
        }
    }
    Ok(report("W-FV-p", t))
}

fn projection_formula(_: u64) -> Result<Report> {
    let mut t = Tally::default();
    for (r, n) in small_witt_rings()? {
        let short = all_vectors(&r, n, 0)?;
        let long = all_vectors(&r, n + 1, 0)?;
        for x in &short {
            let vx = x.verschiebung()?;
            for y in &long {
                t.record(vx.mul(y)? == x.mul(&y.frobenius()?)?.verschiebung()?, || format!("x = {x}, y = {y}"));
            }
        }
    }
    Ok(report("W-projection-formula", t))
}

fn teichmuller(_: u64) -> Result<Report> {
    let mut t = Tally::default();
    let mut rings = small_witt_rings()?;
    rings.push((ring("Zmod(3^1)[t]/(t^2)")?, 3));
    for (r, n) in rings {
        let p = r.p();
        let els = elements(&r)?;
        for a in &els {
            let ta = WittVector::teichmuller(&r, a, n, 0);
            let fa = WittVector::teichmuller(&r, &r.pow(a, p), n - 1, 0);
            t.record(ta.frobenius()? == fa, || format!("F([{}])", r.fmt_elem(a)));
            for b in &els {
                let prod = WittVector::teichmuller(&r, &r.mul(a, b), n, 0);
                t.record(prod == ta.mul(&WittVector::teichmuller(&r, b, n, 0))?, || {
                    format!("[{}][{}]", r.fmt_elem(a), r.fmt_elem(b))
                });
            }
        }
    }
    Ok(report("W-teichmuller", t))
}

fn invertible_in_w(_: u64) -> Result<Report> {
    let mut t = Tally::default();
    let mut rings = small_witt_rings()?;
    rings.push((ring("Zmod(2^1)[t]/(t^2)")?, 2));
    for (r, n) in rings {
        let all = all_vectors(&r, n, 0)?;
        let one = WittVector::one(&r, n);
        for x in &all {
            let mut has_inverse = false;
            for y in &all {
                if x.mul(y)? == one {
                    has_inverse = true;
                    break;
                }
            }
            t.record(has_inverse == r.is_unit(x.comp(0)) && x.is_unit() == has_inverse, || format!("{x}"));
            if has_inverse {
                t.record_result(x.invert().and_then(|y| Ok(x.mul(&y)?.is_one())), || format!("inverse of {x}"));
            }
        }
    }
    Ok(report("L-invertible-in-W", t))
}

fn ghost_roundtrip(seed: u64) -> Result<Report> {
    let mut t = Tally::default();
    let z16 = Ring::zmod(2, 4)?;
    let g = WittVector::from_ints(&z16, &[2, 1])?.ghost();
    t.record(g.entries() == [z16.from_int(2), z16.from_int(6)], || "ghost of [2, 1] over Z/16".into());
    let mut rng = rng_for(seed, "W-ghost-roundtrip");
    for r in [Ring::zmod(2, 6)?, Ring::zmod(3, 4)?] {
        let n = 3;
        for _ in 0..500 {
            let x = random_vector(&r, n, 0, &mut rng);
            let y = random_vector(&r, n, 0, &mut rng);
            let (gx, gy) = (x.ghost(), y.ghost());
            let sum = x.add(&y)?.ghost();
            let prod = x.mul(&y)?.ghost();
            let hom = (0..n).all(|i| {
                sum.entries()[i] == r.add(&gx.entries()[i], &gy.entries()[i])
                    && prod.entries()[i] == r.mul(&gx.entries()[i], &gy.entries()[i])
            });
            t.record(hom, || format!("ghost map at {x}, {y}"));
            let lifted = ghost_lift(&gx)?;
            t.record(lifted == x.reduce_into(lifted.ring()), || format!("roundtrip of {x}"));
            let exact = GhostSeq::exact(&r, gx.entries().to_vec())?;
            t.record(ghost_lift(&exact)? == lifted, || format!("explicit ghost sequence of {x}"));
        }
    }
    Ok(report("W-ghost-roundtrip", t))
}

fn p2_over_p(_: u64) -> Result<Report> {
    let mut t = Tally::default();
    let mut witnesses = Vec::new();
    for p in [2u64, 3] {
        let a = sigma::p2_over_p(p, 4, 6)?;
        let r = a.ring().clone();
        let p2 = WittVector::teichmuller(&r, &r.from_int((p * p) as i64), 4, 0);
        t.record(a.mul_int(p as i64)? == p2, || format!("p = {p}: p a != [p^2] for a = {a}"));
        witnesses.push(format!("p={p}: {a}"));
    }
    Ok(report("B-p2-over-p", t).note("witness", witnesses.join("; ")))
}

fn pi_f_hom(_: u64) -> Result<Report> {
    let mut parts = Vec::new();
    for p in [2u64, 3] {
        let r = Ring::zmod(p, 1)?;
        for (m, n) in [(1, 1), (2, 1), (1, 2)] {
            parts.push(check_pi_f_hom(m, n, &r));
        }
    }
    Ok(report("C-pi-F-hom", merged(parts)?))
}

// ---- sharp-hopf ----

fn dp_rewriting(_: u64) -> Result<Report> {
    let mut t = sharp::check_rewriting(2, 40);
    t.merge(sharp::check_rewriting(3, 30));
    Ok(report("H-dp-rewriting", t))
}

fn not_additive(_: u64) -> Result<Report> {
    let mut t = Tally::default();
    for (p, n) in [(2u64, 1u32), (2, 2), (3, 1)] {
        let ok = sharp::dp_defect(p, n).and_then(|d| d.content()).map(|c| c == 1.into());
        t.record_result(ok, || format!("p = {p}, n = {n}"));
    }
    Ok(report("L-not-additive", t))
}

fn coassociativity(_: u64) -> Result<Report> {
    let mut t = Tally::default();
    for (p, n) in [(2u64, 1u32), (2, 2), (3, 1), (5, 1)] {
        t.record_result(sharp::check_coassociative(p, n), || format!("p = {p}, n = {n}"));
    }
    Ok(report("H-coassociativity", t))
}

fn ga_sharp_joyal(_: u64) -> Result<Report> {
    let t = merged([
        sharp::check_sharp_module(&Ring::zmod(2, 2)?, 1),
        sharp::check_sharp_module(&Ring::zmod(2, 3)?, 2),
        sharp::joyal_check(&Ring::zmod(2, 3)?, 2),
        sharp::joyal_check(&Ring::zmod(3, 2)?, 1),
    ])?;
    Ok(report("L-Ga-sharp-joyal", t))
}

fn gm_sharp_mod_p(_: u64) -> Result<Report> {
    let t = merged([
        sharp::check_unit_splitting(&Ring::zmod(2, 1)?, 3),
        sharp::check_unit_splitting(&Ring::zmod(3, 1)?, 2),
        sharp::check_unit_splitting(&ring("Zmod(2^1)[t]/(t^2)")?, 2),
    ])?;
    Ok(report("L-Gm-sharp-mod-p", t))
}

fn annihilators(_: u64) -> Result<Report> {
    let t = merged([sharp::annihilator_check(&Ring::zmod(2, 1)?, 3), sharp::annihilator_check(&Ring::zmod(3, 1)?, 2)])?;
    Ok(report("L-annihilators", t))
}

fn quasi_ideal(_: u64) -> Result<Report> {
    let t = merged([
        sharp::quasi_ideal_check(&Ring::zmod(2, 1)?, 2),
        sigma::check_quasi_ideal(&Ring::zmod(2, 1)?, 2, 64),
        sigma::check_quasi_ideal(&Ring::zmod(2, 2)?, 2, 64),
    ])?;
    Ok(report("Q-quasi-ideal", t))
}

// ---- primitive vectors ----

fn contracting1(_: u64) -> Result<Report> {
    let t = merged([sigma::check_contracting1(&Ring::zmod(2, 2)?, 4), sigma::check_contracting1(&Ring::zmod(2, 3)?, 4)])?;
    Ok(report("L-contracting-1", t))
}

fn contracting2(_: u64) -> Result<Report> {
    let (t, max_n) = sigma::check_contracting2(&Ring::zmod(2, 2)?, 3)?;
    Ok(report("L-contracting-2", t).note("max_n", max_n.to_string()))
}

fn orbit_of_p(_: u64) -> Result<Report> {
    let t = merged([sigma::check_orbit_of_p(&Ring::zmod(2, 3)?, 3), sigma::check_orbit_of_p(&Ring::zmod(3, 2)?, 3)])?;
    Ok(report("L-orbit-of-p", t))
}

fn f_on_wprim(_: u64) -> Result<Report> {
    let t = merged([sigma::check_f_on_wprim(&Ring::zmod(2, 2)?, 3), sigma::check_f_on_wprim(&ring("Zmod(2^1)[t]/(t^2)")?, 3)])?;
    Ok(report("L-F-on-Wprim", t))
}

fn perfect_normal_form(_: u64) -> Result<Report> {
    let t = merged([sigma::check_perfect_normal_form(&field(2)?, 3), sigma::check_perfect_normal_form(&field(4)?, 3)])?;
    Ok(report("L-perfect-normal-form", t))
}

fn g_stack(_: u64) -> Result<Report> {
    let t = merged(sigma_rings()?.iter().map(|r| sigma::check_g_stack(r, 2)))?;
    Ok(report("L-g-stack", t))
}

// ---- sigma-lab ----

fn g_group_law(_: u64) -> Result<Report> {
    let t = merged(sigma_rings()?.iter().map(|r| sigma::check_group_law(r, 2)))?;
    Ok(report("S-g-group-law", t))
}

fn action_primitivity(seed: u64) -> Result<Report> {
    let t = merged(sigma_rings()?.iter().map(|r| sigma::check_action(r, 2, 2000, seed)))?;
    Ok(report("S-action-primitivity", t))
}

fn f_vx_gamma_vy(_: u64) -> Result<Report> {
    let mut parts = Vec::new();
    for r in sigma_rings()? {
        parts.push(sigma::check_module_identity(&r, 2, true));
        parts.push(sigma::check_module_identity(&r, 2, false));
    }
    Ok(report("E-F-vx-gamma-Vy", merged(parts)?))
}

fn fprime_j_minus(_: u64) -> Result<Report> {
    let t = merged(sigma_rings()?.iter().map(|r| sigma::check_f_prime(r, 2)))?;
    Ok(report("S-fprime-j-minus", t))
}

fn xi_transformation(seed: u64) -> Result<Report> {
    let t = merged(sigma_rings()?.iter().map(|r| sigma::check_xi_transformation(r, 2, 500, seed)))?;
    Ok(report("S-xi-transformation", t))
}

fn loci(_: u64) -> Result<Report> {
    let t = merged(sigma_rings()?.iter().map(|r| sigma::check_loci(r, 2)))?;
    Ok(report("S-loci", t))
}

fn char_p_affine(_: u64) -> Result<Report> {
    let t = merged([sigma::check_char_p_suite(&Ring::zmod(2, 1)?, 2), sigma::check_char_p_suite(&ring("Zmod(2^1)[t]/(t^2)")?, 2)])?;
    Ok(report("S-char-p-affine-linear", t))
}

fn normalize_gamma(_: u64) -> Result<Report> {
    let t = merged(sigma_rings()?.iter().map(|r| sigma::check_normalize(r, 2)))?;
    Ok(report("S-normalize-gamma", t))
}

fn rescaling(_: u64) -> Result<Report> {
    let t = merged(sigma_rings()?.iter().map(|r| sigma::check_rescaling(r, 2)))?;
    Ok(report("S-rescaling", t))
}

fn delta0_degeneracy(_: u64) -> Result<Report> {
    let t = merged(sigma_rings()?.iter().map(|r| sigma::check_delta0_degeneracy(r, 2)))?;
    Ok(report("S-delta0-degeneracy", t))
}

// ---- cat-coeq ----

fn lax_quotient(_: u64) -> Result<Report> {
    let t = merged([coeq::check_lax_embedding(&coeq::toy_instance(2)?, 3, 8), coeq::check_lax_embedding(&coeq::toy_instance(3)?, 2, 6)])?;
    Ok(report("K-lax-quotient", t))
}

fn coeq_closed_form(_: u64) -> Result<Report> {
    let t = merged([coeq::check_closed_form(&coeq::toy_instance(2)?, (-1, 3), 8), coeq::check_closed_form(&coeq::toy_instance(3)?, (-1, 2), 6)])?;
    Ok(report("K-coeq-closed-form", t))
}

fn gamma_double_prime(_: u64) -> Result<Report> {
    let mut t = Tally::default();
    for q in [2u64, 3] {
        t.record_result(coeq::gamma_double_prime(q, 3).map(|_| true), || format!("Gamma''(F_{q})"));
    }
    t.merge(coeq::check_gamma_vs_coeq(2, 3, 8)?);
    t.merge(coeq::check_gamma_vs_coeq(3, 2, 6)?);
    Ok(report("K-gamma-double-prime", t))
}

fn nodal_model(_: u64) -> Result<Report> {
    let mut t = Tally::default();
    let mut counts = Vec::new();
    for q in [2u64, 3, 4] {
        let (tq, notes) = coeq::nodal_model_check(q, 3)?;
        t.merge(tq);
        counts.push(format!("q={q}: {} points, {} classes", notes["nodal_points"], notes["object_classes"]));
    }
    Ok(report("K-nodal-model", t).note("counts", counts.join("; ")))
}

fn groupoid_commutation(_: u64) -> Result<Report> {
    let t = merged([coeq::check_groupoid_commutation(&coeq::toy_instance(2)?, 6), coeq::check_groupoid_commutation(&coeq::toy_instance(3)?, 4)])?;
    Ok(report("K-groupoid-commutation", t))
}

// ---- prisms ----

fn qdr_delta_laws(seed: u64) -> Result<Report> {
    let mut rng = rng_for(seed, "B-qdr-delta-laws");
    let t = merged([
        prism::check_delta_laws(&prism::make_prism(PrismKind::QdeRham, 2, 5, 4)?, 200, &mut rng),
        prism::check_delta_laws(&prism::make_prism(PrismKind::QdeRham, 3, 4, 3)?, 200, &mut rng),
    ])?;
    Ok(report("B-qdr-delta-laws", t))
}

fn joyal_split(seed: u64) -> Result<Report> {
    let mut rng = rng_for(seed, "B-joyal-split");
    let m2 = prism::make_prism(PrismKind::QdeRham, 2, 5, 4)?;
    let m3 = prism::make_prism(PrismKind::QdeRham, 3, 4, 3)?;
    let mut parts = Vec::new();
    for n in 1..=3 {
        parts.push(prism::check_joyal(&m2, n, 30, &mut rng));
    }
    for n in 1..=2 {
        parts.push(prism::check_joyal(&m3, n, 30, &mut rng));
    }
    Ok(report("B-joyal-split", merged(parts)?))
}

fn distinguished(_: u64) -> Result<Report> {
    let mut parts = Vec::new();
    for p in [2u64, 3] {
        parts.push(prism::make_prism(PrismKind::QdeRham, p, 4, 4).and_then(|m| prism::distinguished_check(&m, 3)));
        for u in [1, 1 + p as i64] {
            parts.push(prism::make_prism(PrismKind::LubinTate(u), p, 4, 4).and_then(|m| prism::distinguished_check(&m, 3)));
        }
    }
    Ok(report("B-distinguished", merged(parts)?))
}

fn economic(_: u64) -> Result<Report> {
    let t = merged([2u64, 3, 5].into_iter().map(|p| prism::economic_consistency(p, 1, 4, 4)))?;
    Ok(report("B-economic", t))
}

fn q_power(seed: u64) -> Result<Report> {
    let mut rng = rng_for(seed, "B-q-power");
    let t = merged([
        prism::check_q_power(&prism::make_prism(PrismKind::QdeRham, 2, 6, 3)?, 100, &mut rng),
        prism::check_q_power(&prism::make_prism(PrismKind::QdeRham, 3, 5, 3)?, 100, &mut rng),
    ])?;
    Ok(report("B-q-power", t))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ids_are_unique() {
        let reg = registry(0);
        let mut ids: Vec<&str> = reg.iter().map(|d| d.id).collect();
        ids.dedup();
        assert_eq!(ids.len(), reg.len());
        assert!(reg.len() >= 25);
    }

    #[test]
    fn globs() {
        assert!(glob_match("L-contracting-*", "L-contracting-2"));
        assert!(glob_match("*", "x"));
        assert!(!glob_match("S-*", "L-contracting-1"));
        assert!(glob_match("*-p", "W-FV-p"));
        assert_eq!(select("L-contracting-*").unwrap().len(), 2);
        assert!(matches!(run("nonexistent", 0), Err(Error::UnknownCheck(_))));
        assert!(list(Some("sigma"), 0).iter().all(|d| d.module == "sigma-lab"));
    }
}
