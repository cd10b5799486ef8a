//! Truncated prisms: the q-de Rham prism, Lubin–Tate prisms and their
//! economic variant, each as `Z/p^K[t]/(t^M)` with an explicit Frobenius lift.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};
use rand::Rng;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::report::Tally;
use crate::ring::{Elem, LocalSpec, Ring, RingHom, RingSpec};
use crate::witt::{dwork_lift, GhostSeq, WittVector};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PrismKind {
    /// `Z_p[[q - 1]]`, `phi(q) = q^p`, `d = 1 + q + ... + q^(p-1)`.
    QdeRham,
    /// `Z_p[[x]]`, `phi(x) = x^p + p u x`, `d = x^(p-1) + p u`.
    LubinTate(i64),
    /// `Z_p[[y]]`, `phi(y) = u^(p-1) y (y + p)^(p-1)`, `d = y + p`.
    Economic(i64),
}

impl PrismKind {
    pub fn parse(kind: &str, u: Option<i64>) -> Result<PrismKind> {
        let u = u.unwrap_or(1);
        match kind {
            "qde" | "qdr" | "q-de-rham" | "q_de_rham" => Ok(PrismKind::QdeRham),
            "lt" | "lubin-tate" | "lubin_tate" => Ok(PrismKind::LubinTate(u)),
            "econ" | "economic" => Ok(PrismKind::Economic(u)),
            _ => Err(Error::Parse { pos: 0, msg: format!("unknown prism kind {kind:?}") }),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            PrismKind::QdeRham => "q_de_rham",
            PrismKind::LubinTate(_) => "lubin_tate",
            PrismKind::Economic(_) => "economic",
        }
    }

    pub fn unit(&self) -> Option<i64> {
        match self {
            PrismKind::QdeRham => None,
            PrismKind::LubinTate(u) | PrismKind::Economic(u) => Some(*u),
        }
    }
}

#[derive(Clone, Debug)]
pub struct PrismModel {
    kind: PrismKind,
    ring: Ring,
    phi: RingHom,
    d: Elem,
}

impl fmt::Display for PrismModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} over {}", self.kind.name(), self.ring.spec())
    }
}

/// `phi(t)` and `d` for the given kind, over a ring whose generator is the coordinate.
fn structure(ring: &Ring, kind: PrismKind) -> (Elem, Elem) {
    let p = ring.p();
    let t = ring.gen();
    let one = ring.one();
    let pe = ring.from_int(p as i64);
    match kind {
        PrismKind::QdeRham => {
            let q = ring.add(&one, &t);
            let phi = ring.sub(&ring.pow(&q, p), &one);
            let mut d = ring.zero();
            for i in 0..p {
                d = ring.add(&d, &ring.pow(&q, i));
            }
            (phi, d)
        }
        PrismKind::LubinTate(u) => {
            let pu = ring.scale(&pe, u);
            let phi = ring.add(&ring.pow(&t, p), &ring.mul(&pu, &t));
            (phi, ring.add(&ring.pow(&t, p - 1), &pu))
        }
        PrismKind::Economic(u) => {
            let up = ring.pow(&ring.from_int(u), p - 1);
            let phi = ring.mul(&ring.mul(&up, &t), &ring.pow(&ring.add(&t, &pe), p - 1));
            (phi, ring.add(&t, &pe))
        }
    }
}

/// The prism over `Z/p^K[t]/(t^M)`, with `t = q - 1`, `x` or `y` by kind.
pub fn make_prism(kind: PrismKind, p: u64, k: u32, m: usize) -> Result<PrismModel> {
    if let Some(u) = kind.unit() {
        if u.rem_euclid(p as i64) == 0 {
            return Err(Error::NotAUnit(format!("u = {u}")));
        }
    }
    let local = match kind {
        PrismKind::QdeRham => LocalSpec::shifted(k, m, 'q'),
        PrismKind::LubinTate(_) => LocalSpec::nil(k, m).with_var('x'),
        PrismKind::Economic(_) => LocalSpec::nil(k, m).with_var('y'),
    };
    let ring = Ring::new(RingSpec::product(p, vec![local]))?;
    let (phi_t, d) = structure(&ring, kind);
    let phi = RingHom::frobenius_lift(&ring, phi_t)?;
    Ok(PrismModel { kind, ring, phi, d })
}

impl PrismModel {
    pub fn kind(&self) -> PrismKind {
        self.kind
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn phi(&self) -> &RingHom {
        &self.phi
    }

    pub fn d(&self) -> &Elem {
        &self.d
    }

    pub fn p(&self) -> u64 {
        self.ring.p()
    }

    pub fn precision(&self) -> u32 {
        self.ring.spec().factors[0].k
    }

    /// The same prism with `K` lowered by `loss`.
    pub fn at_precision(&self, loss: u32) -> Result<PrismModel> {
        if loss == 0 {
            return Ok(self.clone());
        }
        let ring = self.ring.drop_precision(loss)?;
        let (phi_t, d) = structure(&ring, self.kind);
        let phi = RingHom::frobenius_lift(&ring, phi_t)?;
        Ok(PrismModel { kind: self.kind, ring, phi, d })
    }

    /// `delta(a) = (phi(a) - a^p) / p`, known to precision `K - 1`.
    pub fn delta(&self, a: &Elem) -> Result<(Ring, Elem)> {
        let r = &self.ring;
        let diff = r.sub(&self.phi.apply(a), &r.pow(a, r.p()));
        let q = r.div_p_pow(&diff, 1).ok_or_else(|| Error::Internal(format!("p does not divide phi(a) - a^p at {}", r.fmt_elem(a))))?;
        let out = r.drop_precision(1)?;
        let q = out.reduce_from(&q);
        Ok((out, q))
    }

    /// The splitting `f: A -> W_n(A)` with `f o phi = F o f`: the Dwork lift of
    /// `(a, phi(a), ..., phi^(n-1)(a))`. Known to precision `K - n + 1`.
    pub fn joyal_split(&self, a: &Elem, n: usize) -> Result<WittVector> {
        if n == 0 || n as u32 > self.precision() {
            return Err(Error::Precondition(format!("need 1 <= n <= K = {}", self.precision())));
        }
        let ghosts: Vec<Elem> = (0..n).map(|i| self.phi.iterate(a, i)).collect();
        let f = dwork_lift(&self.phi, &GhostSeq::exact(&self.ring, ghosts)?)?;
        let r = f.ring();
        if *f.comp(0) != r.reduce_from(a) {
            return Err(Error::Internal("zeroth component of the splitting is not a".into()));
        }
        if n >= 2 {
            let fphi = dwork_lift(&self.phi, &GhostSeq::exact(&self.ring, (1..=n).map(|i| self.phi.iterate(a, i)).collect())?)?;
            if f.frobenius()? != fphi.truncate(n - 1)? {
                return Err(Error::Internal("F o f != f o phi".into()));
            }
        }
        if self.kind == PrismKind::QdeRham && *a == self.q() {
            let tq = WittVector::teichmuller(r, &r.reduce_from(a), n, 0);
            if f != tq {
                return Err(Error::Internal("f(q) != [q]".into()));
            }
        }
        Ok(f)
    }

    /// `q = 1 + t` (meaningful for the q-de Rham prism).
    pub fn q(&self) -> Elem {
        self.ring.add(&self.ring.one(), &self.ring.gen())
    }

    /// `d([g])` computed with Witt arithmetic, `g` the generator `q`, `x` or `y`.
    pub fn d_of_teichmuller(&self, r: &Ring, n: usize) -> Result<WittVector> {
        let p = self.p();
        let g = match self.kind {
            PrismKind::QdeRham => r.add(&r.one(), &r.gen()),
            _ => r.gen(),
        };
        let tg = WittVector::teichmuller(r, &g, n, 0);
        match self.kind {
            PrismKind::QdeRham => {
                let mut s = WittVector::zero(r, n);
                for i in 0..p {
                    s = s.add(&WittVector::teichmuller(r, &r.pow(&g, i), n, 0))?;
                }
                Ok(s)
            }
            PrismKind::LubinTate(u) => {
                let tp = WittVector::teichmuller(r, &r.pow(&g, p - 1), n, 0);
                tp.add(&WittVector::integer(r, p as i64 * u, n)?)
            }
            PrismKind::Economic(_) => tg.add(&WittVector::integer(r, p as i64, n)?),
        }
    }

    /// `q^n = sum_i C(n, i) (q - 1)^i` for `n` given modulo `p^K`. Dividing by
    /// `i!` for `i < M` costs `v_p((M - 1)!)` digits of precision.
    pub fn q_power(&self, n: i64) -> Result<(Ring, Elem)> {
        if self.kind != PrismKind::QdeRham {
            return Err(Error::Precondition("q_power needs the q-de Rham prism".into()));
        }
        let p = self.p();
        let k = self.precision();
        let m = self.ring.spec().factors[0].degree();
        let loss = factorial_valuation(p, m.saturating_sub(1) as u64);
        if loss >= k {
            return Err(Error::PrecisionExhausted(m - 1));
        }
        let out = if loss == 0 { self.ring.clone() } else { self.ring.drop_precision(loss)? };
        let modulus = BigInt::from(p).pow(k);
        let nn = BigInt::from(n).mod_floor(&modulus);
        let t = out.gen();
        let mut acc = out.zero();
        let mut binom = BigInt::one();
        let mut tp = out.one();
        for i in 0..m {
            if i > 0 {
                binom = binom * (&nn - (i as u64 - 1)) / i as u64;
                tp = out.mul(&tp, &t);
            }
            acc = out.add(&acc, &out.mul(&out.from_bigint(&binom), &tp));
        }
        Ok((out, acc))
    }

    pub fn to_json(&self) -> Value {
        json!({
            "kind": self.kind.name(),
            "u": self.kind.unit(),
            "p": self.p(),
            "precision": self.precision(),
            "ring": self.ring.spec().to_string(),
            "phi": self.ring.fmt_elem(match self.phi.kind() {
                crate::ring::HomKind::FrobeniusLift(g) => g,
                _ => unreachable!(),
            }),
            "d": self.ring.fmt_elem(&self.d),
        })
    }
}

/// `v_p(m!)`.
pub fn factorial_valuation(p: u64, m: u64) -> u32 {
    let mut v = 0;
    let mut q = m / p;
    while q > 0 {
        v += q as u32;
        q /= p;
    }
    v
}

/// `C(p, i) / p`.
fn binom_over_p(p: u64, i: u64) -> i64 {
    let mut c = BigInt::one();
    for j in 0..i {
        c = c * (p - j) / (j + 1);
    }
    (c / p).to_i64().unwrap()
}

/// The product and sum rules for `delta` on random pairs.
pub fn check_delta_laws<R: Rng>(model: &PrismModel, samples: usize, rng: &mut R) -> Result<Tally> {
    let r = model.ring();
    let p = model.p();
    let mut t = Tally::default();
    for _ in 0..samples {
        let a = r.random(rng);
        let b = r.random(rng);
        let (lo, da) = model.delta(&a)?;
        let (_, db) = model.delta(&b)?;
        let (_, dab) = model.delta(&r.mul(&a, &b))?;
        let (_, dsum) = model.delta(&r.add(&a, &b))?;
        let (al, bl) = (lo.reduce_from(&a), lo.reduce_from(&b));
        let pe = lo.from_int(p as i64);
        let prod = lo.add(
            &lo.add(&lo.mul(&lo.pow(&al, p), &db), &lo.mul(&lo.pow(&bl, p), &da)),
            &lo.mul(&pe, &lo.mul(&da, &db)),
        );
        let mut sum = lo.add(&da, &db);
        for i in 1..p {
            let c = lo.scale(&lo.mul(&lo.pow(&al, i), &lo.pow(&bl, p - i)), binom_over_p(p, i));
            sum = lo.sub(&sum, &c);
        }
        t.record(dab == prod, || format!("product rule at a = {}, b = {}", r.fmt_elem(&a), r.fmt_elem(&b)));
        t.record(dsum == sum, || format!("sum rule at a = {}, b = {}", r.fmt_elem(&a), r.fmt_elem(&b)));
    }
    Ok(t)
}

/// The splitting is additive, multiplicative and intertwines `phi` with `F`, at every length up to `n`.
pub fn check_joyal<R: Rng>(model: &PrismModel, n: usize, samples: usize, rng: &mut R) -> Result<Tally> {
    let r = model.ring();
    let mut t = Tally::default();
    for len in 1..=n {
        for _ in 0..samples {
            let a = r.random(rng);
            let b = r.random(rng);
            let res = (|| {
                let (fa, fb) = (model.joyal_split(&a, len)?, model.joyal_split(&b, len)?);
                let add = model.joyal_split(&r.add(&a, &b), len)? == fa.add(&fb)?;
                let mul = model.joyal_split(&r.mul(&a, &b), len)? == fa.mul(&fb)?;
                Ok(add && mul)
            })();
            t.record_result(res, || format!("n = {len}, a = {}, b = {}", r.fmt_elem(&a), r.fmt_elem(&b)));
        }
    }
    if model.kind() == PrismKind::QdeRham {
        for len in 1..=n {
            t.record_result(model.joyal_split(&model.q(), len).map(|_| true), || format!("f(q) at n = {len}"));
        }
    }
    Ok(t)
}

/// (a) At the distinguished point `f(d)` specializes to `d(0) = p u` (or `p`);
/// (b) modulo `p` it is primitive; (c) `d([g])` has zeroth component `d`.
pub fn distinguished_check(model: &PrismModel, n: usize) -> Result<Tally> {
    let mut t = Tally::default();
    let fd = model.joyal_split(model.d(), n)?;
    let r = fd.ring().clone();
    let p = model.p() as i64;
    let base = Ring::zmod(model.p(), r.spec().factors[0].k)?;
    let at_point = RingHom::specialization(&r, &base, base.zero())?;
    let value = match model.kind() {
        PrismKind::LubinTate(u) => p * u,
        _ => p,
    };
    let special = fd.map(&at_point)?;
    t.record(special == WittVector::integer(&base, value, n)?, || format!("f(d) at the distinguished point is {special}"));
    let modp = r.mod_p()?;
    let reduced = fd.map(&RingHom::reduction(&r, &modp)?)?;
    t.record_result(crate::sigma::is_primitive(&reduced), || format!("f(d) mod p = {reduced} is not primitive"));
    let dt = model.d_of_teichmuller(&r, n)?;
    t.record(*dt.comp(0) == r.reduce_from(model.d()), || format!("zeroth component of d([g]) is {}", r.fmt_elem(dt.comp(0))));
    if model.kind() == PrismKind::QdeRham {
        t.record(dt == fd, || format!("f(d) = {fd} but d([q]) = {dt}"));
    }
    Ok(t)
}

/// Under `y = u^-1 x^(p-1)`: `u^-1 phi_LT(x)^(p-1) = u^(p-1) y (y + p)^(p-1)` and `x^(p-1) + p u = u (y + p)`,
/// exactly in `Z/p^K[x]/(x^e)`.
pub fn economic_consistency(p: u64, u: i64, k: u32, e: usize) -> Result<Tally> {
    let lt = make_prism(PrismKind::LubinTate(u), p, k, e)?;
    let r = lt.ring();
    let x = r.gen();
    let ue = r.from_int(u);
    let ui = r.inv(&ue)?;
    let y = r.mul(&ui, &r.pow(&x, p - 1));
    let pe = r.from_int(p as i64);
    let phi_x = lt.phi().apply(&x);
    let lhs = r.mul(&ui, &r.pow(&phi_x, p - 1));
    let rhs = r.mul(&r.mul(&r.pow(&ue, p - 1), &y), &r.pow(&r.add(&y, &pe), p - 1));
    let mut t = Tally::default();
    t.record(lhs == rhs, || format!("{} != {}", r.fmt_elem(&lhs), r.fmt_elem(&rhs)));
    let d = r.mul(&ue, &r.add(&y, &pe));
    t.record(*lt.d() == d, || format!("d = {} but u (y + p) = {}", r.fmt_elem(lt.d()), r.fmt_elem(&d)));
    Ok(t)
}

/// Exponent laws for `q^n` on random exponents, plus agreement with repeated multiplication.
pub fn check_q_power<R: Rng>(model: &PrismModel, samples: usize, rng: &mut R) -> Result<Tally> {
    let mut t = Tally::default();
    let p = model.p() as i64;
    let (out, q1) = model.q_power(1)?;
    let lowered = model.at_precision(model.precision() - out.spec().factors[0].k)?;
    t.record(q1 == lowered.q(), || "q^1 != q".into());
    let mut acc = out.one();
    for n in 0..8 {
        t.record(model.q_power(n)?.1 == acc, || format!("q^{n} differs from repeated multiplication"));
        acc = out.mul(&acc, &q1);
    }
    let (_, qi) = model.q_power(-1)?;
    t.record(out.mul(&q1, &qi) == out.one(), || "q q^-1 != 1".into());
    for _ in 0..samples {
        let n: i64 = rng.gen_range(-1000..1000);
        let m: i64 = rng.gen_range(-1000..1000);
        let (_, qn) = model.q_power(n)?;
        let (_, qm) = model.q_power(m)?;
        t.record(out.mul(&qn, &qm) == model.q_power(n + m)?.1, || format!("q^{n} q^{m} != q^{}", n + m));
        t.record(lowered.phi().apply(&qn) == model.q_power(p * n)?.1, || format!("phi(q^{n}) != q^{}", p * n));
        if m >= 0 {
            t.record(out.pow(&qn, m as u64) == model.q_power(n * m)?.1, || format!("(q^{n})^{m} != q^{}", n * m));
        }
    }
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn structures() {
        let m = make_prism(PrismKind::QdeRham, 2, 5, 4).unwrap();
        assert_eq!(m.ring().fmt_elem(m.d()), m.ring().fmt_elem(&m.ring().parse_elem("1+q").unwrap()));
        let lt = make_prism(PrismKind::LubinTate(1), 2, 5, 4).unwrap();
        let x = lt.ring().gen();
        assert_eq!(lt.phi().apply(&x), lt.ring().parse_elem("x^2+2*x").unwrap());
        let ec = make_prism(PrismKind::Economic(1), 3, 4, 6).unwrap();
        assert_eq!(ec.phi().apply(&ec.ring().gen()), ec.ring().parse_elem("y*(y+3)^2").unwrap());
        assert!(make_prism(PrismKind::LubinTate(2), 2, 3, 3).is_err());
    }

    #[test]
    fn delta_values() {
        let m = make_prism(PrismKind::QdeRham, 2, 5, 4).unwrap();
        let r = m.ring();
        let (lo, d) = m.delta(&m.q()).unwrap();
        assert!(lo.is_zero(&d));
        let (lo, d) = m.delta(&r.gen()).unwrap();
        assert_eq!(d, lo.gen());
        let (lo, d) = m.delta(&r.from_int(2)).unwrap();
        assert_eq!(d, lo.from_int(-1));
    }

    #[test]
    fn splitting() {
        let m = make_prism(PrismKind::QdeRham, 2, 5, 4).unwrap();
        let f = m.joyal_split(&m.q(), 3).unwrap();
        let r = f.ring().clone();
        assert_eq!(f, WittVector::teichmuller(&r, &r.reduce_from(&m.q()), 3, 0));
        assert!(m.joyal_split(&m.ring().one(), 3).unwrap().is_one());
        let a = m.ring().add(&m.q(), &m.ring().one());
        let f = m.joyal_split(&a, 2).unwrap();
        let g = f.ghost();
        let phi = m.at_precision(1).unwrap();
        let expect = [phi.ring().reduce_from(&a), phi.phi().apply(&phi.ring().reduce_from(&a))];
        assert_eq!(g.entries(), &expect[..]);
    }

    #[test]
    fn q_powers() {
        let m = make_prism(PrismKind::QdeRham, 2, 6, 3).unwrap();
        let (out, q2) = m.q_power(2).unwrap();
        let q = out.add(&out.one(), &out.gen());
        assert_eq!(q2, out.mul(&q, &q));
        let (_, qi) = m.q_power(-1).unwrap();
        assert_eq!(out.mul(&qi, &q), out.one());
        assert_eq!(factorial_valuation(2, 4), 3);
    }
}
