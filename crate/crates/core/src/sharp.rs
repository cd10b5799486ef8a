//! Divided powers and the kernel of Frobenius.
//!
//! The coordinate ring of the divided-power additive group is spanned by
//! monomials in `u_n = x^(p^n) / p^((p^n - 1)/(p - 1))` with every exponent
//! below `p`, using the rewriting rule `u_n^p = p u_{n+1}`. Its points over
//! a ring are realized as Witt vectors killed by `F`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::report::Tally;
use crate::ring::{Elem, Ring};
use crate::witt::{all_vectors, universal_polys, WittOp, WittVector};

/// Exponents of `u_0, u_1, ...`, without trailing zeros.
pub type Monomial = Vec<u32>;

/// An element of the `k`-fold tensor power of the divided-power algebra;
/// `arity = 1` is the algebra itself.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DpElement {
    p: u64,
    arity: usize,
    terms: BTreeMap<Vec<Monomial>, BigInt>,
}

fn trim(m: &mut Monomial) {
    while m.last() == Some(&0) {
        m.pop();
    }
}

/// Base-`p` digits of `m`, least significant first.
pub fn digits(p: u64, mut m: u64) -> Monomial {
    let mut d = Vec::new();
    while m > 0 {
        d.push((m % p) as u32);
        m /= p;
    }
    d
}

/// `E(m) = sum a_i (p^i - 1)/(p - 1)`, which is also `v_p(m!)`.
pub fn dp_exponent(p: u64, m: u64) -> u32 {
    let s: u64 = digits(p, m).iter().map(|&a| a as u64).sum();
    ((m - s) / (p - 1)) as u32
}

impl DpElement {
    pub fn zero(p: u64, arity: usize) -> DpElement {
        DpElement { p, arity, terms: BTreeMap::new() }
    }

    pub fn one(p: u64, arity: usize) -> DpElement {
        Self::monomial(p, vec![Vec::new(); arity], BigInt::one())
    }

    /// `c * m`, with `m` rewritten into the reduced basis.
    pub fn monomial(p: u64, m: Vec<Monomial>, c: BigInt) -> DpElement {
        let mut e = Self::zero(p, m.len());
        e.add_term(m, c);
        e
    }

    /// `u_n` in tensor slot `slot`.
    pub fn u(p: u64, n: usize, arity: usize, slot: usize) -> DpElement {
        let mut m = vec![Vec::new(); arity];
        m[slot] = vec![0; n + 1];
        m[slot][n] = 1;
        Self::monomial(p, m, BigInt::one())
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<Monomial>, &BigInt)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &[Monomial]) -> BigInt {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn add_term(&mut self, mut m: Vec<Monomial>, mut c: BigInt) {
        let p = self.p as u32;
        for f in m.iter_mut() {
            let mut i = 0;
            while i < f.len() {
                if f[i] >= p {
                    let carry = f[i] / p;
                    f[i] %= p;
                    if i + 1 == f.len() {
                        f.push(0);
                    }
                    f[i + 1] += carry;
                    c *= BigInt::from(self.p).pow(carry);
                }
                i += 1;
            }
            trim(f);
        }
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(m).or_default();
        *e += c;
        if e.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
    }

    pub fn add(&self, o: &DpElement) -> DpElement {
        assert_eq!((self.p, self.arity), (o.p, o.arity));
        let mut r = self.clone();
        for (m, c) in &o.terms {
            r.add_term(m.clone(), c.clone());
        }
        r
    }

    pub fn neg(&self) -> DpElement {
        DpElement { p: self.p, arity: self.arity, terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect() }
    }

    pub fn sub(&self, o: &DpElement) -> DpElement {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &DpElement) -> DpElement {
        assert_eq!((self.p, self.arity), (o.p, o.arity));
        let mut r = Self::zero(self.p, self.arity);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &o.terms {
                let m = m1
                    .iter()
                    .zip(m2)
                    .map(|(a, b)| {
                        let len = a.len().max(b.len());
                        (0..len).map(|i| a.get(i).unwrap_or(&0) + b.get(i).unwrap_or(&0)).collect()
                    })
                    .collect();
                r.add_term(m, c1 * c2);
            }
        }
        r
    }

    pub fn pow(&self, n: u32) -> DpElement {
        (0..n).fold(Self::one(self.p, self.arity), |acc, _| acc.mul(self))
    }

    /// Divide every coefficient by `d`, failing unless exact.
    pub fn div_exact(&self, d: &BigInt) -> Option<DpElement> {
        let mut terms = BTreeMap::new();
        for (m, c) in &self.terms {
            let (q, r) = c.div_rem(d);
            if !r.is_zero() {
                return None;
            }
            terms.insert(m.clone(), q);
        }
        Some(DpElement { p: self.p, arity: self.arity, terms })
    }

    /// Gcd of the coefficients.
    pub fn content(&self) -> Result<BigInt> {
        if self.is_zero() {
            return Err(Error::Precondition("content of zero".into()));
        }
        Ok(self.terms.values().fold(BigInt::zero(), |g, c| g.gcd(c)))
    }

    /// Tensor `self` (arity `a`) with `o` (arity `b`) into arity `a + b`.
    pub fn tensor(&self, o: &DpElement) -> DpElement {
        let mut r = Self::zero(self.p, self.arity + o.arity);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &o.terms {
                let mut m = m1.clone();
                m.extend(m2.iter().cloned());
                r.add_term(m, c1 * c2);
            }
        }
        r
    }

    /// Apply the comultiplication to tensor slot `slot`, raising the arity by one.
    pub fn comult_slot(&self, slot: usize) -> Result<DpElement> {
        let mut r = Self::zero(self.p, self.arity + 1);
        for (m, c) in &self.terms {
            let image = comult_monomial(self.p, &m[slot])?;
            for (im, ic) in &image.terms {
                let mut nm = m[..slot].to_vec();
                nm.extend(im.iter().cloned());
                nm.extend(m[slot + 1..].iter().cloned());
                r.add_term(nm, c * ic);
            }
        }
        Ok(r)
    }

    /// `[[exponents per slot], "coefficient"]` pairs.
    pub fn to_json(&self) -> Value {
        Value::Array(self.terms.iter().map(|(m, c)| json!([m, c.to_string()])).collect())
    }
}

impl std::fmt::Display for DpElement {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let mut first = true;
        for (m, c) in &self.terms {
            let slots: Vec<String> = m
                .iter()
                .map(|mon| {
                    let factors: Vec<String> = mon
                        .iter()
                        .enumerate()
                        .filter(|(_, &e)| e > 0)
                        .map(|(i, &e)| if e == 1 { format!("u{i}") } else { format!("u{i}^{e}") })
                        .collect();
                    if factors.is_empty() {
                        "1".to_string()
                    } else {
                        factors.join("*")
                    }
                })
                .collect();
            let body = slots.join(" (x) ");
            let sign = if c.is_negative() { "-" } else if first { "" } else { "+" };
            let mag = c.abs();
            if first {
                write!(f, "{sign}")?;
            } else {
                write!(f, " {sign} ")?;
            }
            if mag.is_one() {
                write!(f, "{body}")?;
            } else {
                write!(f, "{mag}*{body}")?;
            }
            first = false;
        }
        Ok(())
    }
}

/// `x^m = p^E(m) * prod u_i^(a_i)` for the base-`p` digits `a_i` of `m`.
pub fn dp_reduce(p: u64, m: u64) -> DpElement {
    DpElement::monomial(p, vec![digits(p, m)], BigInt::from(p).pow(dp_exponent(p, m)))
}

/// `Delta(u_n) = sum_j C(p^n, j) x^j (x) x^(p^n - j) / p^E(p^n)`.
pub fn dp_comult(p: u64, n: u32) -> Result<DpElement> {
    let pn = p.pow(n);
    let denom = BigInt::from(p).pow(dp_exponent(p, pn));
    let mut acc = DpElement::zero(p, 2);
    let mut binom = BigInt::one();
    for j in 0..=pn {
        if j > 0 {
            binom = binom * BigInt::from(pn - j + 1) / BigInt::from(j);
        }
        let c = &binom * BigInt::from(p).pow(dp_exponent(p, j) + dp_exponent(p, pn - j));
        let (q, r) = c.div_rem(&denom);
        if !r.is_zero() {
            return Err(Error::Internal(format!("non-integral coefficient at j = {j}")));
        }
        acc.add_term(vec![digits(p, j), digits(p, pn - j)], q);
    }
    Ok(acc)
}

fn comult_monomial(p: u64, m: &Monomial) -> Result<DpElement> {
    let mut acc = DpElement::one(p, 2);
    for (i, &a) in m.iter().enumerate() {
        if a > 0 {
            acc = acc.mul(&dp_comult(p, i as u32)?.pow(a));
        }
    }
    Ok(acc)
}

/// `Delta(u_n) - u_n (x) 1 - 1 (x) u_n`.
pub fn dp_defect(p: u64, n: u32) -> Result<DpElement> {
    let u = |slot| DpElement::u(p, n as usize, 2, slot);
    Ok(dp_comult(p, n)?.sub(&u(0)).sub(&u(1)))
}

/// `x^m * x^m' = x^(m + m')` in the reduced basis, for all `m, m' <= bound`.
pub fn check_rewriting(p: u64, bound: u64) -> Tally {
    let mut t = Tally::default();
    for a in 0..=bound {
        for b in 0..=bound {
            let ok = dp_reduce(p, a).mul(&dp_reduce(p, b)) == dp_reduce(p, a + b);
            t.record(ok, || format!("p = {p}, m = {a}, m' = {b}"));
        }
    }
    t
}

/// `(Delta (x) 1) Delta(u_n) = (1 (x) Delta) Delta(u_n)`.
pub fn check_coassociative(p: u64, n: u32) -> Result<bool> {
    let d = dp_comult(p, n)?;
    Ok(d.comult_slot(0)? == d.comult_slot(1)?)
}

/// All `x` in `W_{n+1}(R)` with `F(x) = 0`.
pub fn sharp_points(ring: &Ring, n: usize) -> Result<Vec<WittVector>> {
    let mut out = Vec::new();
    for x in all_vectors(ring, n + 1, 0)? {
        if x.frobenius()?.is_zero() {
            out.push(x);
        }
    }
    Ok(out)
}

/// Closure under addition and the action `w . x = [w_0] x` of `W_{n+1}(R)`.
pub fn check_sharp_module(ring: &Ring, n: usize) -> Result<Tally> {
    let pts = sharp_points(ring, n)?;
    let mut t = Tally::default();
    t.record(pts.iter().any(|x| x.is_zero()), || "0 is not a point".into());
    for x in &pts {
        for y in &pts {
            let s = x.add(y)?;
            t.record(s.frobenius()?.is_zero(), || format!("{x} + {y} leaves the kernel"));
        }
    }
    for w in all_vectors(ring, n + 1, 0)? {
        let tw = WittVector::teichmuller(ring, w.comp(0), n + 1, 0);
        for x in &pts {
            let ok = w.mul(x)? == tw.mul(x)?;
            t.record(ok, || format!("w = {w}, x = {x}"));
        }
    }
    Ok(t)
}

/// `[c] (1 + V(x))` for `x` in `W_n` with `F(x) = 0`, over a ring with `p = 0`.
pub fn unit_splitting(x: &WittVector, c: &Elem) -> Result<WittVector> {
    let r = x.ring();
    if !r.is_char_p() {
        return Err(Error::Precondition("the splitting needs p = 0".into()));
    }
    if r.pow(c, r.p()) != r.one() {
        return Err(Error::Precondition(format!("{} is not a p-th root of 1", r.fmt_elem(c))));
    }
    if x.len() > 1 && !x.frobenius()?.is_zero() {
        return Err(Error::Precondition(format!("F({x}) is not 0")));
    }
    let n = x.len() + 1;
    let one_vx = WittVector::one(r, n).add(&x.verschiebung()?)?;
    WittVector::teichmuller(r, c, n, 0).mul(&one_vx)
}

/// `(1+Vx)(1+Vy) = 1 + V(x + y + VF(xy))` for all `x, y` in `W_n(R)`, and
/// `x -> [c](1 + Vx)` lands in `Ker F`, is injective and multiplicative.
pub fn check_unit_splitting(ring: &Ring, n: usize) -> Result<Tally> {
    if n < 2 {
        return Err(Error::TooShort { need: 2, got: n });
    }
    let mut t = Tally::default();
    let all = all_vectors(ring, n, 0)?;
    let one = WittVector::one(ring, n + 1);
    for x in &all {
        for y in &all {
            let lhs = one.add(&x.verschiebung()?)?.mul(&one.add(&y.verschiebung()?)?)?;
            let vf = x.mul(y)?.frobenius()?.verschiebung()?;
            let rhs = one.add(&x.add(y)?.add(&vf)?.verschiebung()?)?;
            t.record(lhs == rhs, || format!("x = {x}, y = {y}"));
        }
    }
    let pts: Vec<&WittVector> = all.iter().filter(|x| x.frobenius().map(|f| f.is_zero()).unwrap_or(false)).collect();
    let roots: Vec<Elem> = ring.elements()?.filter(|c| ring.pow(c, ring.p()) == ring.one()).collect();
    let mut images = std::collections::HashSet::new();
    for c in &roots {
        for x in &pts {
            let s = unit_splitting(x, c)?;
            t.record(s.frobenius()?.is_one(), || format!("F of the image of {x} is not 1"));
            t.record(images.insert(s.comps().to_vec()), || format!("image of ({x}, c) repeats"));
            for y in &pts {
                let prod = unit_splitting(x, c)?.mul(&unit_splitting(y, &ring.one())?)?;
                t.record(prod == unit_splitting(&x.add(y)?, c)?, || format!("not multiplicative at {x}, {y}"));
            }
        }
    }
    Ok(t)
}

/// `x V(y) = 0` exactly when `F(x) = 0`, for `x` in `W_n(R)` and `y` in `W_{n-1}(R)`.
pub fn annihilator_check(ring: &Ring, n: usize) -> Result<Tally> {
    if n < 2 {
        return Err(Error::TooShort { need: 2, got: n });
    }
    let mut t = Tally::default();
    let ys = all_vectors(ring, n - 1, 0)?;
    let vys: Vec<WittVector> = ys.iter().map(|y| y.verschiebung()).collect::<Result<_>>()?;
    for x in all_vectors(ring, n, 0)? {
        let sharp = x.frobenius()?.is_zero();
        let mut kills_all = true;
        for (y, vy) in ys.iter().zip(&vys) {
            let z = x.mul(vy)?.is_zero();
            kills_all &= z;
            if sharp {
                t.record(z, || format!("x = {x}, y = {y}"));
            }
        }
        t.record(kills_all == sharp, || format!("{x} kills V(W) but F(x) != 0"));
    }
    Ok(t)
}

/// `d(x) . y = d(y) . x` for `d: x -> x_0` and the action `a . x = [a] x`.
pub fn quasi_ideal_check(ring: &Ring, n: usize) -> Result<Tally> {
    let pts = sharp_points(ring, n)?;
    let mut t = Tally::default();
    for x in &pts {
        for y in &pts {
            let lhs = WittVector::teichmuller(ring, x.comp(0), n + 1, 0).mul(y)?;
            let rhs = WittVector::teichmuller(ring, y.comp(0), n + 1, 0).mul(x)?;
            t.record(lhs == rhs, || format!("x = {x}, y = {y}"));
        }
    }
    Ok(t)
}

/// The free `delta`-ring generators `y_0 = x_0`, `y_{k+1} = (F^*(y_k) - y_k^p)/p`,
/// as polynomials in `x_0..x_n`.
pub fn joyal_generators(p: u64, n: usize) -> Result<Vec<Poly>> {
    let nv = n + 1;
    let f = universal_polys(p, nv, WittOp::Frobenius)?;
    let mut subs: Vec<Poly> = f.polys().to_vec();
    subs.push(Poly::zero(nv));
    let pb = BigInt::from(p);
    let mut ys = vec![Poly::var(nv, 0)];
    for k in 0..n {
        let y = &ys[k];
        let next = y
            .compose(&subs)
            .sub(&y.pow(p))
            .div_exact(&pb)
            .ok_or_else(|| Error::Internal(format!("y_{} is not integral", k + 1)))?;
        ys.push(next);
    }
    Ok(ys)
}

/// Signs `e_k` with `y_k -> e_k u_k` respecting `u_k^p = p u_{k+1}`:
/// `e_0 = 1`, `e_{k+1} = -e_k^p`. For odd `p` this is `(-1)^k`.
pub fn joyal_signs(p: u64, n: usize) -> Vec<i64> {
    let mut e = vec![1i64];
    for k in 0..n {
        let prev = e[k];
        e.push(-prev.pow(p as u32));
    }
    e
}

/// On every point of `Ker F` in `W_{n+1}(R)`, `a_k = e_k y_k(x)` satisfies `a_k^p = p a_{k+1}`.
pub fn joyal_check(ring: &Ring, n: usize) -> Result<Tally> {
    let p = ring.p();
    let ys = joyal_generators(p, n)?;
    let signs = joyal_signs(p, n);
    let mut t = Tally::default();
    for x in sharp_points(ring, n)? {
        let table = crate::poly::PowerTable::new(ring, x.comps(), &vec![p.pow(n as u32) as u32; n + 1]);
        let a: Vec<Elem> = ys
            .iter()
            .zip(&signs)
            .map(|(y, &s)| ring.scale(&y.compile().eval(ring, &table), s))
            .collect();
        for k in 0..n {
            let ok = ring.pow(&a[k], p) == ring.scale(&a[k + 1], p as i64);
            t.record(ok, || format!("x = {x}, k = {k}"));
        }
    }
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(n: i64) -> BigInt {
        BigInt::from(n)
    }

    #[test]
    fn reduced_powers() {
        assert_eq!(dp_reduce(2, 2), DpElement::monomial(2, vec![vec![0, 1]], b(2)));
        assert_eq!(dp_reduce(2, 1), DpElement::u(2, 0, 1, 0));
        assert_eq!(dp_reduce(3, 4), DpElement::monomial(3, vec![vec![1, 1]], b(3)));
        assert!(check_rewriting(3, 27).passed());
    }

    #[test]
    fn comultiplication() {
        let d1 = dp_comult(2, 1).unwrap();
        let want = DpElement::u(2, 1, 2, 0)
            .add(&DpElement::u(2, 1, 2, 1))
            .add(&DpElement::u(2, 0, 2, 0).mul(&DpElement::u(2, 0, 2, 1)));
        assert_eq!(d1, want);
        let d0 = dp_comult(5, 0).unwrap();
        assert_eq!(d0, DpElement::u(5, 0, 2, 0).add(&DpElement::u(5, 0, 2, 1)));
        let d2 = dp_comult(2, 2).unwrap();
        assert_eq!(d2.coeff(&[vec![1], vec![1, 1]]), b(1));
        for (p, n) in [(2, 1), (2, 2), (3, 1)] {
            assert_eq!(dp_defect(p, n).unwrap().content().unwrap(), b(1));
        }
        assert_eq!(DpElement::monomial(2, vec![vec![0, 1]], b(2)).content().unwrap(), b(2));
        assert!(check_coassociative(2, 2).unwrap());
    }

    #[test]
    fn kernel_of_frobenius() {
        let f2 = Ring::zmod(2, 1).unwrap();
        assert_eq!(sharp_points(&f2, 1).unwrap().len(), 2);
        let z4 = Ring::zmod(2, 2).unwrap();
        for x in sharp_points(&z4, 1).unwrap() {
            let (a, c) = (x.comp(0).coeffs()[0], x.comp(1).coeffs()[0]);
            assert_eq!((a * a + 2 * c) % 4, 0);
        }
        assert!(check_sharp_module(&z4, 1).unwrap().passed());
        assert!(annihilator_check(&f2, 3).unwrap().passed());
        assert!(quasi_ideal_check(&f2, 2).unwrap().passed());
    }

    #[test]
    fn joyal_presentation() {
        assert_eq!(joyal_signs(2, 3), vec![1, -1, -1, -1]);
        assert_eq!(joyal_signs(3, 2), vec![1, -1, 1]);
        let ys = joyal_generators(2, 2).unwrap();
        assert_eq!(ys[1], Poly::var(3, 1));
        assert!(joyal_check(&Ring::zmod(2, 3).unwrap(), 2).unwrap().passed());
        assert!(joyal_check(&Ring::zmod(3, 2).unwrap(), 1).unwrap().passed());
    }

    #[test]
    fn splitting_mod_p() {
        let f2 = Ring::zmod(2, 1).unwrap();
        let x = WittVector::zero(&f2, 2);
        assert!(unit_splitting(&x, &f2.one()).unwrap().is_one());
        assert!(check_unit_splitting(&f2, 3).unwrap().passed());
        let r = Ring::parse("Zmod(2^1)[t]/(t^2)").unwrap();
        assert!(check_unit_splitting(&r, 2).unwrap().passed());
    }
}
