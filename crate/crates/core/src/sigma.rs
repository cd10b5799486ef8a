//! Primitive Witt vectors and the quotient presentation of their moduli.
//!
//! A point is a triple `(v, zeta, gamma)` with every line bundle trivialized:
//! `v` has degree `-1`, `zeta` degree `p`, `gamma` degree `0`, and
//! `[v^p] zeta + p gamma` must be primitive. Points with `gamma = 1` are the
//! economic ones. Group elements are matrices `(1 alpha; 0 w)` with `w` a
//! unit; the subgroup with `w = 1 - [v^p] alpha` preserves `gamma = 1`.
//!
//! With `zeta` in `W_N`, a module point is `x` in `W_{N+1}` and `y` in `W_N`
//! with `F(x) = y zeta`, and `xi(x, y) = [v] x + V(gamma y)` lies in `W_{N+1}`.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::report::Tally;
use crate::ring::{Elem, Ring};
use crate::witt::{all_vectors, dwork_lift, GhostSeq, WittVector};

/// `x_0` nilpotent and `x_1` a unit, in every local factor.
pub fn is_primitive(x: &WittVector) -> Result<bool> {
    if x.len() < 2 {
        return Err(Error::TooShort { need: 2, got: x.len() });
    }
    let r = x.ring();
    Ok(r.is_nilpotent(x.comp(0)) && r.is_unit(x.comp(1)))
}

/// `[v^(p^k)]`, of degree `-p^k`.
fn teich_v_pow(ring: &Ring, v: &Elem, k: u32, n: usize) -> WittVector {
    let e = ring.p().pow(k);
    WittVector::teichmuller(ring, &ring.pow(v, e), n, -(e as i64))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SigmaPoint {
    ring: Ring,
    v: Elem,
    zeta: WittVector,
    gamma: WittVector,
}

impl fmt::Display for SigmaPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(v = {}, zeta = {}, gamma = {})", self.ring.fmt_elem(&self.v), self.zeta, self.gamma)
    }
}

impl SigmaPoint {
    pub fn new(ring: &Ring, v: Elem, zeta: WittVector, gamma: WittVector) -> Result<SigmaPoint> {
        let p = ring.p() as i64;
        if zeta.ring() != ring || gamma.ring() != ring || !ring.contains(&v) {
            return Err(Error::RingMismatch);
        }
        if zeta.len() != gamma.len() {
            return Err(Error::LengthMismatch(zeta.len(), gamma.len()));
        }
        if zeta.degree() != p {
            return Err(Error::DegreeMismatch(zeta.degree(), p));
        }
        if gamma.degree() != 0 {
            return Err(Error::DegreeMismatch(gamma.degree(), 0));
        }
        let pt = SigmaPoint { ring: ring.clone(), v, zeta, gamma };
        let prim = is_primitive(&pt.f_prime()?)?;
        let (i, ii) = pt.conditions();
        if prim != (i && ii) {
            return Err(Error::Internal(format!("primitivity conditions disagree at {pt}")));
        }
        if !prim {
            return Err(Error::Precondition(format!("{pt} is not primitive")));
        }
        Ok(pt)
    }

    /// A point with `gamma = 1`.
    pub fn economic(ring: &Ring, v: Elem, zeta: WittVector) -> Result<SigmaPoint> {
        let n = zeta.len();
        Self::new(ring, v, zeta, WittVector::one(ring, n))
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn v(&self) -> &Elem {
        &self.v
    }

    pub fn zeta(&self) -> &WittVector {
        &self.zeta
    }

    pub fn gamma(&self) -> &WittVector {
        &self.gamma
    }

    /// Truncation length `N` of `zeta`.
    pub fn len(&self) -> usize {
        self.zeta.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn is_economic(&self) -> bool {
        self.gamma.is_one()
    }

    /// `([v^p] zeta)_0 = v^p zeta_0` nilpotent, and `v^(p^2) zeta_1 + gamma_0^p` a unit.
    pub fn conditions(&self) -> (bool, bool) {
        let r = &self.ring;
        let p = r.p();
        let i = r.is_nilpotent(&r.mul(&r.pow(&self.v, p), self.zeta.comp(0)));
        let ii = r.is_unit(&r.add(&r.mul(&r.pow(&self.v, p * p), self.zeta.comp(1)), &r.pow(self.gamma.comp(0), p)));
        (i, ii)
    }

    /// `[v^p] zeta + p gamma`.
    pub fn f_prime(&self) -> Result<WittVector> {
        let tv = teich_v_pow(&self.ring, &self.v, 1, self.len());
        tv.mul(&self.zeta)?.add(&self.gamma.mul_int(self.ring.p() as i64)?)
    }

    pub fn project(&self, f: usize) -> SigmaPoint {
        let ring = self.ring.factor_ring(f);
        SigmaPoint {
            v: self.ring.project(&self.v, f),
            zeta: self.zeta.project(f),
            gamma: self.gamma.project(f),
            ring,
        }
    }

    /// `(lambda^-1 v, [lambda^p] zeta)`, the same point in another trivialization.
    pub fn rescale(&self, lambda: &Elem) -> Result<SigmaPoint> {
        let r = &self.ring;
        let li = r.inv(lambda)?;
        let lp = WittVector::teichmuller(r, &r.pow(lambda, r.p()), self.len(), 0);
        SigmaPoint::new(r, r.mul(&li, &self.v), lp.mul(&self.zeta)?, self.gamma.clone())
    }

    pub fn to_json(&self) -> Value {
        json!({
            "ring": self.ring.spec().to_string(),
            "v_minus": self.ring.fmt_elem(&self.v),
            "zeta": witt_json(&self.zeta),
            "gamma": witt_json(&self.gamma),
        })
    }
}

/// A Witt vector as `{p, n, degree, ring, components}`.
pub fn witt_json(x: &WittVector) -> Value {
    let r = x.ring();
    json!({
        "p": r.p(),
        "n": x.len(),
        "degree": x.degree(),
        "ring": r.spec().to_string(),
        "components": x.comps().iter().map(|c| r.fmt_elem(c)).collect::<Vec<_>>(),
    })
}

/// `j_-(u) = (1, u - p, 1)`.
pub fn j_minus(u: &WittVector) -> Result<SigmaPoint> {
    let r = u.ring();
    let p = r.p() as i64;
    let zeta = u.sub(&WittVector::integer(r, p, u.len())?)?.with_degree(p);
    SigmaPoint::economic(r, r.one(), zeta)
}

/// The matrix `(1 alpha; 0 w)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Gmat {
    pub alpha: WittVector,
    pub w: WittVector,
}

impl fmt::Display for Gmat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(alpha = {}, w = {})", self.alpha, self.w)
    }
}

impl Gmat {
    pub fn new(alpha: WittVector, w: WittVector) -> Result<Gmat> {
        let p = alpha.ring().p() as i64;
        if alpha.degree() != p {
            return Err(Error::DegreeMismatch(alpha.degree(), p));
        }
        if !w.is_unit() {
            return Err(Error::NotAUnit(w.to_string()));
        }
        Ok(Gmat { alpha, w })
    }

    pub fn identity(ring: &Ring, n: usize) -> Gmat {
        let p = ring.p() as i64;
        Gmat { alpha: WittVector::zero(ring, n).with_degree(p), w: WittVector::one(ring, n) }
    }

    /// The element `alpha` of the rescaled unit group: `w = 1 - [v^p] alpha`.
    pub fn from_alpha(v: &Elem, alpha: &WittVector) -> Result<Gmat> {
        Gmat::new(alpha.clone(), g_weight(v, alpha)?)
    }

    /// First `self`, then `next`: the matrix product `next * self`.
    pub fn then(&self, next: &Gmat) -> Result<Gmat> {
        Gmat::new(self.alpha.add(&self.w.mul(&next.alpha)?)?, self.w.mul(&next.w)?)
    }
}

/// `1 - [v^p] alpha`.
pub fn g_weight(v: &Elem, alpha: &WittVector) -> Result<WittVector> {
    let r = alpha.ring();
    let n = alpha.len();
    WittVector::one(r, n).sub(&teich_v_pow(r, v, 1, n).mul(alpha)?)
}

/// `alpha` lies in the group iff `1 - [v^p] alpha` is a unit.
pub fn g_valid(v: &Elem, alpha: &WittVector) -> Result<bool> {
    Ok(g_weight(v, alpha)?.is_unit())
}

/// `alpha_1 * alpha_2 = alpha_1 + alpha_2 - [v^p] alpha_1 alpha_2`.
pub fn g_law(v: &Elem, a1: &WittVector, a2: &WittVector) -> Result<WittVector> {
    let r = a1.ring();
    let tv = teich_v_pow(r, v, 1, a1.len());
    let out = a1.add(a2)?.sub(&tv.mul(a1)?.mul(a2)?)?;
    if !g_valid(v, &out)? {
        return Err(Error::Internal("group law left the group".into()));
    }
    Ok(out)
}

/// `-alpha / (1 - [v^p] alpha)`.
pub fn g_inverse(v: &Elem, alpha: &WittVector) -> Result<WittVector> {
    alpha.neg()?.mul(&g_weight(v, alpha)?.invert()?)
}

/// `zeta -> w^-1 (zeta + p alpha)`, `gamma -> w^-1 (gamma - [v^p] alpha)`.
pub fn g_act(pt: &SigmaPoint, g: &Gmat) -> Result<SigmaPoint> {
    g_act_with_inverse(pt, g, &g.w.invert()?)
}

/// As [`g_act`], with `w^-1` supplied.
pub fn g_act_with_inverse(pt: &SigmaPoint, g: &Gmat, w_inv: &WittVector) -> Result<SigmaPoint> {
    let r = &pt.ring;
    let p = r.p() as i64;
    let tv = teich_v_pow(r, &pt.v, 1, pt.len());
    let zeta = w_inv.mul(&pt.zeta.add(&g.alpha.mul_int(p)?)?)?;
    let gamma = w_inv.mul(&pt.gamma.sub(&tv.mul(&g.alpha)?)?)?;
    SigmaPoint::new(r, pt.v.clone(), zeta, gamma).map_err(|e| match e {
        Error::Precondition(m) => Error::Internal(format!("action broke primitivity: {m}")),
        e => e,
    })
}

/// A translate with `gamma = 1`, and the matrix reaching it. Works factor by
/// factor: where `gamma` is a unit divide by it, where `v` is a unit shift by
/// `alpha = [v^-p](gamma - 1)`.
pub fn normalize_gamma(pt: &SigmaPoint) -> Result<(SigmaPoint, Gmat)> {
    let r = &pt.ring;
    let n = pt.len();
    let p = r.p();
    let mut alphas = Vec::new();
    let mut ws = Vec::new();
    for f in 0..r.num_factors() {
        let q = pt.project(f);
        let fr = q.ring.clone();
        if q.gamma.is_unit() {
            alphas.push(WittVector::zero(&fr, n).with_degree(p as i64));
            ws.push(q.gamma.clone());
        } else if fr.is_unit(&q.v) {
            let vinv = fr.inv(&q.v)?;
            let t = WittVector::teichmuller(&fr, &fr.pow(&vinv, p), n, p as i64);
            alphas.push(t.mul(&q.gamma.sub(&WittVector::one(&fr, n))?)?);
            ws.push(WittVector::one(&fr, n));
        } else {
            return Err(Error::Precondition(format!("neither gamma nor v is a unit at {q}")));
        }
    }
    let g = Gmat::new(WittVector::from_factors(r, &alphas)?, WittVector::from_factors(r, &ws)?)?;
    let out = g_act(pt, &g)?;
    if !out.is_economic() {
        return Err(Error::Internal(format!("normalization of {pt} missed gamma = 1")));
    }
    Ok((out, g))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModulePoint {
    pub x: WittVector,
    pub y: WittVector,
}

impl fmt::Display for ModulePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(x = {}, y = {})", self.x, self.y)
    }
}

impl ModulePoint {
    pub fn add(&self, o: &ModulePoint) -> Result<ModulePoint> {
        Ok(ModulePoint { x: self.x.add(&o.x)?, y: self.y.add(&o.y)? })
    }

    /// `a . (x, y) = (a x, F(a) y)` for `a` in `W_{N+1}`.
    pub fn scale(&self, a: &WittVector) -> Result<ModulePoint> {
        Ok(ModulePoint { x: a.mul(&self.x)?, y: a.frobenius()?.mul(&self.y)? })
    }
}

/// Whether `F(x) = y zeta`.
pub fn is_module_point(pt: &SigmaPoint, m: &ModulePoint) -> Result<bool> {
    Ok(m.x.frobenius()? == m.y.mul(&pt.zeta)?)
}

/// Every `(x, y)` with `F(x) = y zeta`.
pub fn module_points(pt: &SigmaPoint) -> Result<Vec<ModulePoint>> {
    let r = &pt.ring;
    let n = pt.len();
    let mut by_image: HashMap<Vec<Elem>, Vec<WittVector>> = HashMap::new();
    for x in all_vectors(r, n + 1, 1)? {
        by_image.entry(x.frobenius()?.comps().to_vec()).or_default().push(x);
    }
    let mut out = Vec::new();
    for y in all_vectors(r, n, 0)? {
        let image = y.mul(&pt.zeta)?;
        if let Some(xs) = by_image.get(image.comps()) {
            for x in xs {
                out.push(ModulePoint { x: x.clone(), y: y.clone() });
            }
        }
    }
    Ok(out)
}

/// `xi(x, y) = [v] x + V(gamma y)`.
pub fn xi(pt: &SigmaPoint, m: &ModulePoint) -> Result<WittVector> {
    let tv = WittVector::teichmuller(&pt.ring, &pt.v, pt.len() + 1, -1);
    tv.mul(&m.x)?.add(&pt.gamma.mul(&m.y)?.verschiebung()?)
}

/// `(x, y) -> (x + V(alpha y), w y)`, covering the action of `g` on the point.
pub fn transport(g: &Gmat, m: &ModulePoint) -> Result<ModulePoint> {
    Ok(ModulePoint { x: m.x.add(&g.alpha.mul(&m.y)?.verschiebung()?)?, y: g.w.mul(&m.y)? })
}

/// `xi_zeta = [v] + V(zeta^-1)` in `W_{N+1}`, defined when `zeta` is a unit.
pub fn xi_plus(pt: &SigmaPoint) -> Result<WittVector> {
    if !pt.zeta.is_unit() {
        return Err(Error::NotAUnit(pt.zeta.to_string()));
    }
    let tv = WittVector::teichmuller(&pt.ring, &pt.v, pt.len() + 1, -1);
    tv.add(&pt.zeta.invert()?.verschiebung()?)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Locus {
    SigmaPlus,
    SigmaMinus,
    DeltaPrime0,
    Yplus,
    Yminus,
}

/// Loci containing the point; a tag is present when it holds in every local factor.
pub fn classify_locus(pt: &SigmaPoint) -> Result<BTreeSet<Locus>> {
    let r = &pt.ring;
    let z0 = pt.zeta.comp(0);
    let mut tags = BTreeSet::new();
    if r.is_zero(&pt.v) {
        tags.insert(Locus::DeltaPrime0);
    }
    if r.is_unit(&pt.v) {
        tags.insert(Locus::SigmaMinus);
    }
    if r.is_unit(z0) {
        tags.insert(Locus::SigmaPlus);
    }
    if r.is_char_p() {
        if r.is_zero(z0) {
            tags.insert(Locus::Yplus);
        }
        if r.is_zero(&pt.v) {
            tags.insert(Locus::Yminus);
        }
    }
    if tags.contains(&Locus::SigmaPlus) && tags.contains(&Locus::SigmaMinus) {
        return Err(Error::Internal(format!("{pt} lies on both open loci")));
    }
    Ok(tags)
}

/// Every element of `W_n(R)` of degree `p`.
fn all_alphas(ring: &Ring, n: usize) -> Result<Vec<WittVector>> {
    all_vectors(ring, n, ring.p() as i64)
}

/// Every point over `ring` with `zeta` in `W_n`; economic only, or with all `gamma`.
pub fn all_points(ring: &Ring, n: usize, economic: bool) -> Result<Vec<SigmaPoint>> {
    let zetas = all_alphas(ring, n)?;
    let gammas = if economic { vec![WittVector::one(ring, n)] } else { all_vectors(ring, n, 0)? };
    let mut out = Vec::new();
    for v in ring.elements()? {
        for z in &zetas {
            for g in &gammas {
                match SigmaPoint::new(ring, v.clone(), z.clone(), g.clone()) {
                    Ok(pt) => out.push(pt),
                    Err(Error::Precondition(_)) => {}
                    Err(e) => return Err(e),
                }
            }
        }
    }
    Ok(out)
}

/// Minimal `n >= 1` with `x_0^(p^n) = 0`, and `u = F^(n-1)(x_1, x_2, ...)`, so that `F^n(x) = p u`.
pub fn contract_to_p(x: &WittVector) -> Result<(usize, WittVector)> {
    if !is_primitive(x)? {
        return Err(Error::Precondition(format!("{x} is not primitive")));
    }
    let r = x.ring();
    let p = r.p();
    let mut n = 1;
    let mut a = r.pow(x.comp(0), p);
    while !r.is_zero(&a) {
        a = r.pow(&a, p);
        n += 1;
    }
    if n >= x.len() {
        return Err(Error::TooShort { need: n + 1, got: x.len() });
    }
    let y = WittVector::new(r, x.comps()[1..].to_vec(), 0)?;
    let u = y.frobenius_pow(n - 1)?;
    let fx = x.frobenius_pow(n)?;
    if fx != u.mul_int(p as i64)? || !u.is_unit() {
        return Err(Error::Internal(format!("F^{n}({x}) != p u")));
    }
    Ok((n, u))
}

/// Minimal `n` with `F^n(u) = 1`, for a unit `u` with `p u = p`.
pub fn unit_to_one(u: &WittVector) -> Result<usize> {
    let r = u.ring();
    let p = WittVector::integer(r, r.p() as i64, u.len())?;
    if !u.is_unit() || u.mul(&p)? != p {
        return Err(Error::Precondition(format!("{u} is not a unit with p u = p")));
    }
    let mut cur = u.clone();
    let mut n = 0;
    loop {
        if cur.is_one() {
            return Ok(n);
        }
        if cur.len() == 1 {
            return Err(Error::TooShort { need: u.len() + 1, got: u.len() });
        }
        cur = cur.frobenius()?;
        n += 1;
    }
}

/// `a` with `p a = [p^2]`, in `W_n(Z/p^k)`, by the Dwork lift of the ghost
/// sequence `p^(2 p^i - 1)`.
pub fn p2_over_p(p: u64, n: usize, k: u32) -> Result<WittVector> {
    let big = Ring::zmod(p, k + n as u32 - 1)?;
    let ghosts = (0..n)
        .map(|i| {
            let e = 2 * p.pow(i as u32) - 1;
            let pe = big.pow(&big.from_int(p as i64), e);
            pe
        })
        .collect();
    let phi = crate::ring::RingHom::frobenius_lift(&big, big.zero())?;
    let a = dwork_lift(&phi, &GhostSeq::exact(&big, ghosts)?)?;
    Ok(a.reduce_into(&Ring::zmod(p, k)?))
}

/// For `z = p mod W(p^2 R)`: `u = 1 + sum V^i(a [b_i])` with `z - p = sum V^i [p^2 b_i]`.
pub fn orbit_normalize(z: &WittVector, a: &WittVector) -> Result<WittVector> {
    let r = z.ring();
    let p = r.p();
    let n = z.len();
    let diff = z.sub(&WittVector::integer(r, p as i64, n)?)?;
    let p2 = r.from_int((p * p) as i64);
    let mut u = WittVector::one(r, n);
    for (i, c) in diff.comps().iter().enumerate() {
        let b = divide_by(r, c, &p2).ok_or_else(|| Error::Precondition(format!("{z} is not p modulo p^2")))?;
        let mut term = a.truncate(n - i)?.mul(&WittVector::teichmuller(r, &b, n - i, 0))?;
        for _ in 0..i {
            term = term.verschiebung()?;
        }
        u = u.add(&term)?;
    }
    if u.mul_int(p as i64)? != *z || !u.is_unit() {
        return Err(Error::Internal(format!("p u != {z}")));
    }
    Ok(u)
}

/// Some `b` with `d b = c`, by search over the ring.
fn divide_by(r: &Ring, c: &Elem, d: &Elem) -> Option<Elem> {
    r.elements().ok()?.find(|b| r.mul(d, b) == *c)
}

/// `h(beta) = beta / (1 - [v^(p^2)] beta)`.
fn h_map(v: &Elem, beta: &WittVector) -> Result<WittVector> {
    let r = beta.ring();
    let w = WittVector::one(r, beta.len()).sub(&teich_v_pow(r, v, 2, beta.len()).mul(beta)?)?;
    beta.mul(&w.invert()?)
}

/// Over `p = 0` with `v^p zeta_0 = 0`:
/// `([zeta_0] + p alpha) / (1 - [v^p] alpha) = [zeta_0] + V(h(F(alpha)))`.
pub fn char_p_affine_identity(v: &Elem, zeta0: &Elem, alpha: &WittVector) -> Result<bool> {
    let r = alpha.ring();
    let p = r.p() as i64;
    let n = alpha.len();
    let t = WittVector::teichmuller(r, zeta0, n, p);
    let lhs = t.add(&alpha.mul_int(p)?)?.mul(&g_weight(v, alpha)?.invert()?)?;
    let rhs = t.add(&h_map(v, &alpha.frobenius()?)?.verschiebung()?)?;
    Ok(lhs == rhs)
}

// ---- suites ----

/// Group laws of `alpha_1 * alpha_2` for every `v`, exhaustively over `W_n(R)`.
pub fn check_group_law(ring: &Ring, n: usize) -> Result<Tally> {
    let mut t = Tally::default();
    let all = all_alphas(ring, n)?;
    let zero = WittVector::zero(ring, n).with_degree(ring.p() as i64);
    for v in ring.elements()? {
        let g: Vec<&WittVector> = all.iter().filter(|a| g_valid(&v, a).unwrap_or(false)).collect();
        t.record(g_valid(&v, &zero)?, || "0 is not in the group".into());
        for a in &g {
            t.record(g_law(&v, a, &zero)? == **a, || format!("{a} * 0 != {a}"));
            let inv = g_inverse(&v, a)?;
            t.record(g_valid(&v, &inv)? && g_law(&v, a, &inv)?.is_zero(), || format!("bad inverse of {a}"));
            for b in &g {
                let ab = g_law(&v, a, b)?;
                t.record(ab == g_law(&v, b, a)?, || format!("{a}, {b} do not commute"));
                let ma = Gmat::from_alpha(&v, a)?.then(&Gmat::from_alpha(&v, b)?)?;
                t.record(ma == Gmat::from_alpha(&v, &ab)?, || format!("matrix product at {a}, {b}"));
                for c in &g {
                    let l = g_law(&v, &ab, c)?;
                    let rr = g_law(&v, a, &g_law(&v, b, c)?)?;
                    t.record(l == rr, || format!("associativity at {a}, {b}, {c}"));
                }
            }
        }
        if r_is_zero(ring, &v) {
            for a in &g {
                for b in &g {
                    t.record(g_law(&v, a, b)? == a.add(b)?, || "v = 0 law is not addition".into());
                }
            }
        }
    }
    Ok(t)
}

fn r_is_zero(r: &Ring, a: &Elem) -> bool {
    r.is_zero(a)
}

/// Both actions keep points primitive, the rescaled group keeps `gamma = 1`,
/// and acting twice is acting by the product.
pub fn check_action(ring: &Ring, n: usize, sample_pairs: usize, seed: u64) -> Result<Tally> {
    use rand::seq::SliceRandom;
    let mut t = Tally::default();
    let econ = all_points(ring, n, true)?;
    let alphas = all_alphas(ring, n)?;
    for pt in &econ {
        let g: Vec<Gmat> = alphas.iter().filter_map(|a| Gmat::from_alpha(&pt.v, a).ok()).collect();
        for m in &g {
            let r = g_act(pt, m);
            t.record_result(r.as_ref().map(|q| q.is_economic()).map_err(Clone::clone), || format!("{m} on {pt}"));
        }
    }
    let rig = all_points(ring, n, false)?;
    let units: Vec<(WittVector, WittVector)> = all_vectors(ring, n, 0)?
        .into_iter()
        .filter(|w| w.is_unit())
        .map(|w| {
            let inv = w.invert().unwrap();
            (w, inv)
        })
        .collect();
    let mats: Vec<(Gmat, WittVector)> = alphas
        .iter()
        .flat_map(|a| units.iter().map(move |(w, wi)| (Gmat { alpha: a.clone(), w: w.clone() }, wi.clone())))
        .collect();
    for pt in &rig {
        for (m, wi) in &mats {
            t.record_result(g_act_with_inverse(pt, m, wi).map(|_| true), || format!("{m} on {pt}"));
        }
    }
    let mut rng = crate::sampling::rng_for(seed, "sigma-action");
    for _ in 0..sample_pairs {
        let pt = rig.choose(&mut rng).unwrap();
        let (m1, w1) = mats.choose(&mut rng).unwrap();
        let (m2, w2) = mats.choose(&mut rng).unwrap();
        let two = g_act_with_inverse(&g_act_with_inverse(pt, m1, w1)?, m2, w2)?;
        let once = g_act(pt, &m1.then(m2)?)?;
        t.record(two == once, || format!("{m1} then {m2} on {pt}"));
    }
    Ok(t)
}

/// `F([v] x + V(gamma y)) = y ([v^p] zeta + p gamma)` and `xi` is additive, on every module point.
pub fn check_module_identity(ring: &Ring, n: usize, economic: bool) -> Result<Tally> {
    let mut t = Tally::default();
    for pt in all_points(ring, n, economic)? {
        let fp = pt.f_prime()?;
        let ms = module_points(&pt)?;
        for m in &ms {
            let x = xi(&pt, m)?;
            t.record(x.frobenius()? == m.y.mul(&fp)?, || format!("{m} over {pt}"));
        }
        for pair in ms.windows(2) {
            let s = pair[0].add(&pair[1])?;
            let ok = is_module_point(&pt, &s)? && xi(&pt, &s)? == xi(&pt, &pair[0])?.add(&xi(&pt, &pair[1])?)?;
            t.record(ok, || format!("additivity at {} and {}", pair[0], pair[1]));
        }
    }
    Ok(t)
}

/// `xi(m) . m' = xi(m') . m` over every point, for all pairs of module points.
pub fn check_quasi_ideal(ring: &Ring, n: usize, max_pairs: usize) -> Result<Tally> {
    let mut t = Tally::default();
    for pt in all_points(ring, n, true)? {
        let ms = module_points(&pt)?;
        let mut count = 0;
        'outer: for a in &ms {
            for b in &ms {
                if count == max_pairs {
                    break 'outer;
                }
                count += 1;
                let ok = b.scale(&xi(&pt, a)?)? == a.scale(&xi(&pt, b)?)?;
                t.record(ok, || format!("{a}, {b} over {pt}"));
            }
        }
    }
    Ok(t)
}

/// `F'(j_-(u)) = u` for every primitive `u`, and `F'` transforms by `(1 - [v^p] alpha)^-1`.
pub fn check_f_prime(ring: &Ring, n: usize) -> Result<Tally> {
    let mut t = Tally::default();
    for u in all_vectors(ring, n, 0)? {
        if is_primitive(&u)? {
            t.record_result(j_minus(&u).and_then(|pt| Ok(pt.f_prime()? == u)), || format!("u = {u}"));
        }
    }
    let alphas = all_alphas(ring, n)?;
    for pt in all_points(ring, n, true)? {
        if ring.is_zero(&pt.v) {
            t.record(pt.f_prime()? == WittVector::integer(ring, ring.p() as i64, n)?, || format!("{pt}"));
        }
        for a in &alphas {
            if let Ok(g) = Gmat::from_alpha(&pt.v, a) {
                let lhs = g_act(&pt, &g)?.f_prime()?;
                let rhs = g.w.invert()?.mul(&pt.f_prime()?)?;
                t.record(lhs == rhs, || format!("alpha = {a} at {pt}"));
            }
        }
    }
    Ok(t)
}

/// Tags never contain both open loci, and are stable under the group.
pub fn check_loci(ring: &Ring, n: usize) -> Result<Tally> {
    let mut t = Tally::default();
    let alphas = all_alphas(ring, n)?;
    for pt in all_points(ring, n, true)? {
        let tags = match classify_locus(&pt) {
            Ok(tags) => tags,
            Err(e) => {
                t.record(false, || e.to_string());
                continue;
            }
        };
        t.record(!(tags.contains(&Locus::SigmaPlus) && tags.contains(&Locus::SigmaMinus)), || format!("{pt}"));
        for a in &alphas {
            if let Ok(g) = Gmat::from_alpha(&pt.v, a) {
                let moved = classify_locus(&g_act(&pt, &g)?)?;
                t.record(moved == tags, || format!("tags move under {a} at {pt}"));
            }
        }
    }
    Ok(t)
}

/// `xi_zeta~ = (1 + V(zeta^-1 alpha))^-1 xi_zeta` on sampled points with `zeta` a unit.
pub fn check_xi_transformation(ring: &Ring, n: usize, samples: usize, seed: u64) -> Result<Tally> {
    use rand::seq::SliceRandom;
    let mut t = Tally::default();
    let plus: Vec<SigmaPoint> = all_points(ring, n, true)?.into_iter().filter(|pt| pt.zeta.is_unit()).collect();
    if plus.is_empty() {
        return Err(Error::Precondition("no points with zeta a unit".into()));
    }
    let alphas = all_alphas(ring, n)?;
    let mut rng = crate::sampling::rng_for(seed, "xi-transformation");
    let mut done = 0;
    while done < samples {
        let pt = plus.choose(&mut rng).unwrap();
        let a = alphas.choose(&mut rng).unwrap();
        let Ok(g) = Gmat::from_alpha(&pt.v, a) else { continue };
        done += 1;
        let moved = g_act(pt, &g)?;
        let one = WittVector::one(ring, n + 1);
        let corr = one.add(&pt.zeta.invert()?.mul(a)?.verschiebung()?)?;
        let ok = xi_plus(&moved)? == corr.invert()?.mul(&xi_plus(pt)?)?;
        t.record(ok, || format!("alpha = {a} at {pt}"));
    }
    Ok(t)
}

/// Over `p = 0`: the affine-linear identity, `xi`-compatible transport of module
/// points, and triviality of `Ker F` on Teichmuller points of the divisor `v^p zeta_0 = 0`.
pub fn check_char_p_suite(ring: &Ring, n: usize) -> Result<Tally> {
    if !ring.is_char_p() {
        return Err(Error::Precondition("needs p = 0".into()));
    }
    let mut t = Tally::default();
    let p = ring.p();
    let alphas = all_alphas(ring, n)?;
    for v in ring.elements()? {
        for z0 in ring.elements()? {
            if !ring.is_zero(&ring.mul(&ring.pow(&v, p), &z0)) {
                continue;
            }
            for a in &alphas {
                if !g_valid(&v, a)? {
                    continue;
                }
                t.record_result(char_p_affine_identity(&v, &z0, a), || format!("v = {v:?}, zeta_0 = {z0:?}, alpha = {a}"));
                if a.frobenius()?.is_zero() {
                    let zeta = WittVector::teichmuller(ring, &z0, n, p as i64);
                    if let Ok(pt) = SigmaPoint::economic(ring, v.clone(), zeta) {
                        let moved = g_act(&pt, &Gmat::from_alpha(&v, a)?)?;
                        t.record(moved == pt, || format!("{a} moves {pt}"));
                    }
                }
            }
        }
    }
    for pt in all_points(ring, n, true)? {
        let ms = module_points(&pt)?;
        for a in alphas.iter().step_by(3) {
            let Ok(g) = Gmat::from_alpha(&pt.v, a) else { continue };
            let moved = g_act(&pt, &g)?;
            for m in ms.iter().step_by(5) {
                let tm = transport(&g, m)?;
                let ok = is_module_point(&moved, &tm)? && xi(&moved, &tm)? == xi(&pt, m)?;
                t.record(ok, || format!("transport of {m} by {a}"));
            }
        }
    }
    Ok(t)
}

/// Every rigidified point has an economic translate.
pub fn check_normalize(ring: &Ring, n: usize) -> Result<Tally> {
    let mut t = Tally::default();
    for pt in all_points(ring, n, false)? {
        let r = normalize_gamma(&pt).and_then(|(q, g)| Ok(q.is_economic() && g_act(&pt, &g)? == q));
        t.record_result(r, || format!("{pt}"));
    }
    Ok(t)
}

/// `(v, zeta, alpha, x) -> (lambda^-1 v, [lambda^p] zeta, [lambda^p] alpha, [lambda] x)`
/// preserves `F'`, `xi`, module points, the action and the loci.
pub fn check_rescaling(ring: &Ring, n: usize) -> Result<Tally> {
    let mut t = Tally::default();
    let p = ring.p();
    let lambdas: Vec<Elem> = ring.elements()?.filter(|l| ring.is_unit(l)).collect();
    let alphas = all_alphas(ring, n)?;
    for pt in all_points(ring, n, true)? {
        let ms = module_points(&pt)?;
        for l in &lambdas {
            let q = pt.rescale(l)?;
            let lp = WittVector::teichmuller(ring, &ring.pow(l, p), n, 0);
            let l1 = WittVector::teichmuller(ring, l, n + 1, 0);
            t.record(q.f_prime()? == pt.f_prime()? && classify_locus(&q)? == classify_locus(&pt)?, || {
                format!("{pt} at lambda = {}", ring.fmt_elem(l))
            });
            for m in ms.iter().step_by(4) {
                let qm = ModulePoint { x: l1.mul(&m.x)?, y: m.y.clone() };
                let ok = is_module_point(&q, &qm)? && xi(&q, &qm)? == xi(&pt, m)?;
                t.record(ok, || format!("{m} at lambda = {}", ring.fmt_elem(l)));
            }
            for a in alphas.iter().step_by(2) {
                let Ok(g) = Gmat::from_alpha(&pt.v, a) else { continue };
                let gq = Gmat::from_alpha(&q.v, &lp.mul(a)?)?;
                t.record(g_act(&pt, &g)?.rescale(l)? == g_act(&q, &gq)?, || format!("alpha = {a}"));
            }
        }
    }
    Ok(t)
}

/// `F(x)` primitive exactly when `x` is, on all of `W_n(R)`.
pub fn check_f_on_wprim(ring: &Ring, n: usize) -> Result<Tally> {
    let mut t = Tally::default();
    for x in all_vectors(ring, n, 0)? {
        t.record(is_primitive(&x)? == is_primitive(&x.frobenius()?)?, || format!("x = {x}"));
    }
    Ok(t)
}

/// If `beta` and `alpha beta` are primitive then `alpha` is a unit, on all of `W_n(R)`.
pub fn check_g_stack(ring: &Ring, n: usize) -> Result<Tally> {
    let mut t = Tally::default();
    let all = all_vectors(ring, n, 0)?;
    let prim: Vec<&WittVector> = all.iter().filter(|x| is_primitive(x).unwrap_or(false)).collect();
    for a in &all {
        for b in &prim {
            if is_primitive(&a.mul(b)?)? {
                t.record(a.is_unit(), || format!("alpha = {a}, beta = {b}"));
            }
        }
    }
    Ok(t)
}

/// Over a perfect field every primitive `x` in `W_n` is `u V(1)` for a unit `u`
/// that is unique in `W_{n-1}`: only `u_0..u_{n-2}` reach `u V(1)` after truncation.
pub fn check_perfect_normal_form(ring: &Ring, n: usize) -> Result<Tally> {
    let mut t = Tally::default();
    let all = all_vectors(ring, n, 0)?;
    let v1 = WittVector::one(ring, n - 1).verschiebung()?;
    let mut reps: HashMap<Vec<Elem>, BTreeSet<Vec<Elem>>> = HashMap::new();
    for u in all.iter().filter(|u| u.is_unit()) {
        let x = u.mul(&v1)?;
        reps.entry(x.comps().to_vec()).or_default().insert(u.truncate(n - 1)?.comps().to_vec());
    }
    for x in &all {
        if is_primitive(x)? {
            let count = reps.get(x.comps()).map_or(0, |s| s.len());
            t.record(count == 1, || format!("{x} has {count} normal forms"));
        }
    }
    Ok(t)
}

/// For `x_0 = 0` and primitive `x` in `W_{n+1}(R)`, `w_n(x) = 0` happens iff `p = 0` in `R`.
pub fn check_delta0_degeneracy(ring: &Ring, n: usize) -> Result<Tally> {
    let mut t = Tally::default();
    let mut found = false;
    for x in all_vectors(ring, n + 1, 0)? {
        if ring.is_zero(x.comp(0)) && is_primitive(&x)? && ring.is_zero(&x.ghost().entries()[n]) {
            found = true;
            break;
        }
    }
    t.record(found == ring.is_char_p(), || format!("found = {found} over {}", ring.spec()));
    Ok(t)
}

/// `contract_to_p` on every primitive `x` in `W_n(R)`.
pub fn check_contracting1(ring: &Ring, n: usize) -> Result<Tally> {
    let mut t = Tally::default();
    let p = ring.p() as i64;
    for x in all_vectors(ring, n, 0)? {
        if is_primitive(&x)? {
            let r = contract_to_p(&x).and_then(|(k, u)| Ok(u.is_unit() && x.frobenius_pow(k)? == u.mul_int(p)?));
            t.record_result(r, || format!("x = {x}"));
        }
    }
    Ok(t)
}

/// `unit_to_one` on every unit `u` in `W_n(R)` with `p u = p`.
pub fn check_contracting2(ring: &Ring, n: usize) -> Result<(Tally, usize)> {
    let mut t = Tally::default();
    let p = WittVector::integer(ring, ring.p() as i64, n)?;
    let mut max_n = 0;
    for u in all_vectors(ring, n, 0)? {
        if u.is_unit() && u.mul(&p)? == p {
            let r = unit_to_one(&u).map(|k| {
                max_n = max_n.max(k);
                u.frobenius_pow(k).map(|f| f.is_one()).unwrap_or(false)
            });
            t.record_result(r, || format!("u = {u}"));
        }
    }
    Ok((t, max_n))
}

/// `orbit_normalize` on every `z = p + (W(p^2 R))` in `W_n(R)`.
pub fn check_orbit_of_p(ring: &Ring, n: usize) -> Result<Tally> {
    let mut t = Tally::default();
    let p = ring.p();
    let k = ring.p_nilpotency();
    let a = p2_over_p(p, n, k)?.reduce_into(ring);
    let pw = WittVector::integer(ring, p as i64, n)?;
    let p2 = ring.from_int((p * p) as i64);
    let ideal: Vec<Elem> = ring.elements()?.filter(|c| divide_by(ring, c, &p2).is_some()).collect();
    let mut idx = vec![0usize; n];
    loop {
        let d = WittVector::new(ring, idx.iter().map(|&i| ideal[i].clone()).collect(), 0)?;
        let z = pw.add(&d)?;
        t.record_result(orbit_normalize(&z, &a).map(|u| u.is_unit()), || format!("z = {z}"));
        let mut j = 0;
        loop {
            if j == n {
                return Ok(t);
            }
            idx[j] += 1;
            if idx[j] < ideal.len() {
                break;
            }
            idx[j] = 0;
            j += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(r: &Ring, v: &[i64], d: i64) -> WittVector {
        WittVector::from_ints(r, v).unwrap().with_degree(d)
    }

    #[test]
    fn primitivity() {
        let z4 = Ring::zmod(2, 2).unwrap();
        assert!(is_primitive(&w(&z4, &[2, 1, 0], 0)).unwrap());
        assert!(!is_primitive(&w(&z4, &[1, 1], 0)).unwrap());
        let z8 = Ring::zmod(2, 3).unwrap();
        assert!(is_primitive(&WittVector::integer(&z8, 2, 3).unwrap()).unwrap());
        assert!(is_primitive(&w(&z4, &[0], 0)).is_err());
    }

    #[test]
    fn points_and_actions() {
        let z4 = Ring::zmod(2, 2).unwrap();
        assert!(SigmaPoint::economic(&z4, z4.zero(), w(&z4, &[1, 3], 2)).is_ok());
        assert!(SigmaPoint::economic(&z4, z4.one(), w(&z4, &[1, 0], 2)).is_err());
        let u = w(&z4, &[2, 1], 0);
        let pt = j_minus(&u).unwrap();
        assert_eq!(pt.f_prime().unwrap(), u);
        let id = Gmat::identity(&z4, 2);
        assert_eq!(g_act(&pt, &id).unwrap(), pt);
        assert_eq!(classify_locus(&pt).unwrap(), BTreeSet::from([Locus::SigmaMinus]));
        let f2 = Ring::zmod(2, 1).unwrap();
        let hdg = SigmaPoint::economic(&f2, f2.zero(), w(&f2, &[0, 1], 2)).unwrap();
        assert_eq!(classify_locus(&hdg).unwrap(), BTreeSet::from([Locus::DeltaPrime0, Locus::Yminus, Locus::Yplus]));
    }

    #[test]
    fn hodge_tate_functional() {
        let f2 = Ring::zmod(2, 1).unwrap();
        let pt = SigmaPoint::economic(&f2, f2.zero(), w(&f2, &[1, 0], 2)).unwrap();
        assert_eq!(xi_plus(&pt).unwrap(), w(&f2, &[0, 1, 0], -1));
    }

    #[test]
    fn contracting() {
        let z4 = Ring::zmod(2, 2).unwrap();
        let (n, u) = contract_to_p(&w(&z4, &[2, 1, 0, 0], 0)).unwrap();
        assert_eq!(n, 1);
        assert!(u.is_unit());
        let z8 = Ring::zmod(2, 3).unwrap();
        let (n, _) = contract_to_p(&w(&z8, &[2, 1, 0, 0], 0)).unwrap();
        assert_eq!(n, 2);
        assert_eq!(unit_to_one(&WittVector::one(&z4, 3)).unwrap(), 0);
    }

    #[test]
    fn p2_witness() {
        for p in [2u64, 3] {
            let a = p2_over_p(p, 4, 6).unwrap();
            let r = a.ring().clone();
            let p2 = WittVector::teichmuller(&r, &r.from_int((p * p) as i64), 4, 0);
            assert_eq!(a.mul_int(p as i64).unwrap(), p2);
        }
        let z8 = Ring::zmod(2, 3).unwrap();
        let a = p2_over_p(2, 3, 3).unwrap();
        let z = WittVector::integer(&z8, 2, 3).unwrap().add(&WittVector::teichmuller(&z8, &z8.from_int(4), 3, 0)).unwrap();
        let u = orbit_normalize(&z, &a).unwrap();
        assert_eq!(u.mul_int(2).unwrap(), z);
    }

    #[test]
    fn normalization() {
        let z4 = Ring::zmod(2, 2).unwrap();
        let pt = SigmaPoint::new(&z4, z4.one(), w(&z4, &[2, 1], 2), w(&z4, &[2, 0], 0)).unwrap();
        let (q, g) = normalize_gamma(&pt).unwrap();
        assert!(q.is_economic());
        assert_eq!(g_act(&pt, &g).unwrap(), q);
    }
}
