//! Truncated `p`-typical Witt vectors `W_n(R)`.
//!
//! Ring operations come in two interchangeable strategies: evaluation of the
//! universal polynomials, and ghost transport (lift to `Z/p^(K+n)`, operate
//! on ghost components, divide back down). `Strategy::Differential` runs
//! both and fails loudly on disagreement.
//!
//! Frobenius is truncated: `F: W_n -> W_{n-1}`. Every vector carries a
//! degree tag for trivialized twists: products add degrees, `F` multiplies
//! by `p` and `V` divides by `p`.

pub mod ghost;
pub mod universal;

use std::fmt;

use crate::error::{Error, Result};
use crate::ring::{Elem, Ring, RingHom};

pub use ghost::{dwork_lift, ghost, ghost_components, ghost_lift, GhostSeq};
pub use universal::{universal_polys, WittOp, WittPolyFamily, SYMBOLIC_BOUND};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum Strategy {
    /// Universal polynomials when they are cheap, ghost transport otherwise.
    #[default]
    Auto,
    Universal,
    Ghost,
    /// Both, compared.
    Differential,
}

impl Strategy {
    pub fn parse(s: &str) -> Result<Strategy> {
        Ok(match s {
            "auto" => Strategy::Auto,
            "universal" | "poly" => Strategy::Universal,
            "ghost" => Strategy::Ghost,
            "differential" | "diff" => Strategy::Differential,
            _ => return Err(Error::Precondition(format!("unknown strategy {s}"))),
        })
    }

    fn resolve(self, p: u64, n: usize) -> Strategy {
        match self {
            Strategy::Auto if n <= SYMBOLIC_BOUND && (p as u128).pow(n as u32 - 1) <= 27 => Strategy::Universal,
            Strategy::Auto => Strategy::Ghost,
            s => s,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WittVector {
    ring: Ring,
    comps: Vec<Elem>,
    degree: i64,
}

impl fmt::Display for WittVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.comps.iter().map(|c| self.ring.fmt_elem(c)).collect();
        write!(f, "[{}]", parts.join(", "))
    }
}

impl WittVector {
    pub fn new(ring: &Ring, comps: Vec<Elem>, degree: i64) -> Result<WittVector> {
        if comps.is_empty() {
            return Err(Error::TooShort { need: 1, got: 0 });
        }
        if comps.iter().any(|c| !ring.contains(c)) {
            return Err(Error::RingMismatch);
        }
        Ok(WittVector { ring: ring.clone(), comps, degree })
    }

    pub fn from_ints(ring: &Ring, v: &[i64]) -> Result<WittVector> {
        Self::new(ring, v.iter().map(|&a| ring.from_int(a)).collect(), 0)
    }

    /// Parse `[a, b, ...]`, each entry an element string of the ring.
    pub fn parse(ring: &Ring, s: &str, degree: i64) -> Result<WittVector> {
        Self::new(ring, parse_list(ring, s)?, degree)
    }

    pub fn zero(ring: &Ring, n: usize) -> WittVector {
        WittVector { ring: ring.clone(), comps: vec![ring.zero(); n], degree: 0 }
    }

    pub fn one(ring: &Ring, n: usize) -> WittVector {
        Self::teichmuller(ring, &ring.one(), n, 0)
    }

    /// `[a] = (a, 0, 0, ...)`.
    pub fn teichmuller(ring: &Ring, a: &Elem, n: usize, degree: i64) -> WittVector {
        let mut comps = vec![ring.zero(); n];
        comps[0] = a.clone();
        WittVector { ring: ring.clone(), comps, degree }
    }

    /// The image of the integer `k` under `Z -> W_n(R)`.
    pub fn integer(ring: &Ring, k: i64, n: usize) -> Result<WittVector> {
        WittVector::one(ring, n).mul_int(k)
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn comps(&self) -> &[Elem] {
        &self.comps
    }

    pub fn comp(&self, i: usize) -> &Elem {
        &self.comps[i]
    }

    pub fn len(&self) -> usize {
        self.comps.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn degree(&self) -> i64 {
        self.degree
    }

    pub fn with_degree(mut self, d: i64) -> WittVector {
        self.degree = d;
        self
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(|c| self.ring.is_zero(c))
    }

    pub fn is_one(&self) -> bool {
        self.ring.is_zero(&self.ring.sub(&self.comps[0], &self.ring.one()))
            && self.comps[1..].iter().all(|c| self.ring.is_zero(c))
    }

    /// Invertible iff the zeroth component is.
    pub fn is_unit(&self) -> bool {
        self.ring.is_unit(&self.comps[0])
    }

    pub fn truncate(&self, n: usize) -> Result<WittVector> {
        if n == 0 || n > self.len() {
            return Err(Error::TooShort { need: n, got: self.len() });
        }
        Ok(WittVector { ring: self.ring.clone(), comps: self.comps[..n].to_vec(), degree: self.degree })
    }

    fn same_shape(&self, o: &WittVector) -> Result<()> {
        if self.ring != o.ring {
            return Err(Error::RingMismatch);
        }
        if self.len() != o.len() {
            return Err(Error::LengthMismatch(self.len(), o.len()));
        }
        Ok(())
    }

    fn with_comps(&self, comps: Vec<Elem>, degree: i64) -> WittVector {
        WittVector { ring: self.ring.clone(), comps, degree }
    }

    fn universal(&self, op: WittOp, other: Option<&WittVector>) -> Result<Vec<Elem>> {
        let fam = universal_polys(self.ring.p(), self.len(), op)?;
        let mut inputs = self.comps.clone();
        if let Some(o) = other {
            inputs.extend_from_slice(&o.comps);
        }
        Ok(fam.eval(&self.ring, &inputs))
    }

    fn transport(&self, op: WittOp, other: Option<&WittVector>) -> Result<Vec<Elem>> {
        let n = self.len();
        let big = self.ring.lift(n as u32)?;
        let gx = ghost_components(&big, &self.comps);
        let combined: Vec<Elem> = match (op, other) {
            (WittOp::Sum, Some(o)) => {
                let gy = ghost_components(&big, &o.comps);
                gx.iter().zip(&gy).map(|(a, b)| big.add(a, b)).collect()
            }
            (WittOp::Product, Some(o)) => {
                let gy = ghost_components(&big, &o.comps);
                gx.iter().zip(&gy).map(|(a, b)| big.mul(a, b)).collect()
            }
            (WittOp::Negation, None) => gx.iter().map(|a| big.neg(a)).collect(),
            (WittOp::Frobenius, None) => gx[1..].to_vec(),
            _ => return Err(Error::Internal("bad transport arity".into())),
        };
        let lifted = ghost_lift(&GhostSeq::exact(&big, combined)?)?;
        Ok(lifted.comps().iter().map(|c| self.ring.reduce_from(c)).collect())
    }

    fn run(&self, op: WittOp, other: Option<&WittVector>, s: Strategy) -> Result<Vec<Elem>> {
        let n = self.len();
        match s.resolve(self.ring.p(), n) {
            Strategy::Universal => self.universal(op, other),
            Strategy::Ghost => self.transport(op, other),
            Strategy::Differential => {
                let a = self.universal(op, other)?;
                let b = self.transport(op, other)?;
                if a != b {
                    return Err(Error::StrategyDisagreement(format!("{} on {}", op.name(), self)));
                }
                Ok(a)
            }
            Strategy::Auto => unreachable!(),
        }
    }

    pub fn add_with(&self, o: &WittVector, s: Strategy) -> Result<WittVector> {
        self.same_shape(o)?;
        if self.degree != o.degree {
            return Err(Error::DegreeMismatch(self.degree, o.degree));
        }
        Ok(self.with_comps(self.run(WittOp::Sum, Some(o), s)?, self.degree))
    }

    pub fn mul_with(&self, o: &WittVector, s: Strategy) -> Result<WittVector> {
        self.same_shape(o)?;
        Ok(self.with_comps(self.run(WittOp::Product, Some(o), s)?, self.degree + o.degree))
    }

    pub fn neg_with(&self, s: Strategy) -> Result<WittVector> {
        if self.ring.p() != 2 && s == Strategy::Auto {
            // [-1] = -1 for odd p
            let comps = self.comps.iter().map(|c| self.ring.neg(c)).collect();
            return Ok(self.with_comps(comps, self.degree));
        }
        Ok(self.with_comps(self.run(WittOp::Negation, None, s)?, self.degree))
    }

    pub fn sub_with(&self, o: &WittVector, s: Strategy) -> Result<WittVector> {
        self.add_with(&o.neg_with(s)?, s)
    }

    /// `F: W_n -> W_{n-1}`.
    pub fn frobenius_with(&self, s: Strategy) -> Result<WittVector> {
        if self.len() < 2 {
            return Err(Error::TooShort { need: 2, got: self.len() });
        }
        let d = self.degree * self.ring.p() as i64;
        Ok(self.with_comps(self.run(WittOp::Frobenius, None, s)?, d))
    }

    pub fn add(&self, o: &WittVector) -> Result<WittVector> {
        self.add_with(o, Strategy::Auto)
    }

    pub fn sub(&self, o: &WittVector) -> Result<WittVector> {
        self.sub_with(o, Strategy::Auto)
    }

    pub fn mul(&self, o: &WittVector) -> Result<WittVector> {
        self.mul_with(o, Strategy::Auto)
    }

    pub fn neg(&self) -> Result<WittVector> {
        self.neg_with(Strategy::Auto)
    }

    pub fn frobenius(&self) -> Result<WittVector> {
        self.frobenius_with(Strategy::Auto)
    }

    /// `F^m`, landing in `W_{n-m}`.
    pub fn frobenius_pow(&self, m: usize) -> Result<WittVector> {
        let mut x = self.clone();
        for _ in 0..m {
            x = x.frobenius()?;
        }
        Ok(x)
    }

    /// `V: W_n -> W_{n+1}`, `(x_0, ...) -> (0, x_0, ...)`.
    pub fn verschiebung(&self) -> Result<WittVector> {
        let p = self.ring.p() as i64;
        if self.degree % p != 0 {
            return Err(Error::DegreeNotDivisible { degree: self.degree, p: p as u64 });
        }
        let mut comps = Vec::with_capacity(self.len() + 1);
        comps.push(self.ring.zero());
        comps.extend_from_slice(&self.comps);
        Ok(self.with_comps(comps, self.degree / p))
    }

    /// `V` followed by truncation back to the same length.
    pub fn verschiebung_trunc(&self) -> Result<WittVector> {
        self.verschiebung()?.truncate(self.len())
    }

    /// `k`-fold sum by double-and-add.
    pub fn mul_int(&self, k: i64) -> Result<WittVector> {
        let mut acc = WittVector::zero(&self.ring, self.len()).with_degree(self.degree);
        let mut base = self.clone();
        let mut m = k.unsigned_abs();
        while m > 0 {
            if m & 1 == 1 {
                acc = acc.add(&base)?;
            }
            m >>= 1;
            if m > 0 {
                base = base.add(&base)?;
            }
        }
        if k < 0 {
            acc = acc.neg()?;
        }
        Ok(acc)
    }

    /// Newton iteration from `[x_0^-1]`; the error term is topologically nilpotent.
    pub fn invert(&self) -> Result<WittVector> {
        let r = &self.ring;
        let x0inv = r.inv(&self.comps[0])?;
        let n = self.len();
        let one = WittVector::one(r, n);
        let mut y = WittVector::teichmuller(r, &x0inv, n, -self.degree);
        let bound = n + r.max_k_e();
        for _ in 0..=bound {
            let e = one.sub(&self.mul(&y)?)?;
            if e.is_zero() {
                return Ok(y);
            }
            y = y.add(&y.mul(&e)?)?;
        }
        Err(Error::Internal(format!("inversion of {self} exceeded {bound} iterations")))
    }

    pub fn ghost(&self) -> GhostSeq {
        ghost(self)
    }

    /// Apply a ring homomorphism componentwise.
    pub fn map(&self, h: &RingHom) -> Result<WittVector> {
        if h.source() != &self.ring {
            return Err(Error::RingMismatch);
        }
        let comps = self.comps.iter().map(|c| h.apply(c)).collect();
        Ok(WittVector { ring: h.target().clone(), comps, degree: self.degree })
    }

    /// Reinterpret in a same-shape ring, reducing coefficients.
    pub fn reduce_into(&self, target: &Ring) -> WittVector {
        let comps = self.comps.iter().map(|c| target.reduce_from(c)).collect();
        WittVector { ring: target.clone(), comps, degree: self.degree }
    }
}

impl WittVector {
    /// The image in `W_n` of the `f`-th factor ring.
    pub fn project(&self, f: usize) -> WittVector {
        let ring = self.ring.factor_ring(f);
        let comps = self.comps.iter().map(|c| self.ring.project(c, f)).collect();
        WittVector { ring, comps, degree: self.degree }
    }

    /// Reassemble from one vector per factor; `W` commutes with finite products.
    pub fn from_factors(ring: &Ring, parts: &[WittVector]) -> Result<WittVector> {
        let n = parts.first().map_or(0, |x| x.len());
        if parts.len() != ring.num_factors() || parts.iter().any(|x| x.len() != n) {
            return Err(Error::RingMismatch);
        }
        let comps = (0..n)
            .map(|i| ring.from_factors(&parts.iter().map(|x| x.comps[i].clone()).collect::<Vec<_>>()))
            .collect::<Result<_>>()?;
        Ok(WittVector { ring: ring.clone(), comps, degree: parts[0].degree })
    }
}

/// Parse a bracketed, comma-separated list of element strings.
pub fn parse_list(ring: &Ring, s: &str) -> Result<Vec<Elem>> {
    let t = s.trim();
    let inner = t
        .strip_prefix('[')
        .and_then(|x| x.strip_suffix(']'))
        .ok_or(Error::Parse { pos: 0, msg: "expected a bracketed list".into() })?;
    let offset = s.find('[').unwrap() + 1;
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    let bytes = inner.as_bytes();
    for i in 0..=bytes.len() {
        let c = bytes.get(i).copied();
        match c {
            Some(b'(') => depth += 1,
            Some(b')') => depth -= 1,
            Some(b',') | None if depth == 0 => {
                let piece = inner[start..i].trim_matches(|c: char| c.is_whitespace() || c == '"');
                if piece.is_empty() {
                    if c.is_none() && out.is_empty() {
                        break;
                    }
                    return Err(Error::Parse { pos: offset + start, msg: "empty entry".into() });
                }
                out.push(ring.parse_elem(piece).map_err(|e| match e {
                    Error::Parse { pos, msg } => Error::Parse { pos: offset + start + pos, msg },
                    e => e,
                })?);
                start = i + 1;
            }
            _ => {}
        }
    }
    if out.is_empty() {
        return Err(Error::Parse { pos: offset, msg: "empty list".into() });
    }
    Ok(out)
}

/// All of `W_n(R)`, first component varying fastest.
pub fn all_vectors(ring: &Ring, n: usize, degree: i64) -> Result<Vec<WittVector>> {
    let card = ring.cardinality().checked_pow(n as u32).unwrap_or(u128::MAX);
    let bound = crate::ring::DEFAULT_ENUMERATION_BOUND;
    if card > bound as u128 {
        return Err(Error::BoundExceeded { card, bound });
    }
    let elems: Vec<Elem> = ring.elements()?.collect();
    let mut out = Vec::with_capacity(card as usize);
    let mut idx = vec![0usize; n];
    loop {
        let comps = idx.iter().map(|&i| elems[i].clone()).collect();
        out.push(WittVector { ring: ring.clone(), comps, degree });
        let mut j = 0;
        loop {
            if j == n {
                return Ok(out);
            }
            idx[j] += 1;
            if idx[j] < elems.len() {
                break;
            }
            idx[j] = 0;
            j += 1;
        }
    }
}

/// A random vector with uniformly random components.
pub fn random_vector<R: rand::Rng + ?Sized>(ring: &Ring, n: usize, degree: i64, rng: &mut R) -> WittVector {
    let comps = (0..n).map(|_| ring.random(rng)).collect();
    WittVector { ring: ring.clone(), comps, degree }
}

/// Checks that `x -> pi_n(F^m(x))` preserves sums, products and `1` on all of `W_{n+m}(R)`.
pub fn check_pi_f_hom(m: usize, n: usize, ring: &Ring) -> Result<crate::report::Tally> {
    let mut tally = crate::report::Tally::default();
    let map = |x: &WittVector| -> Result<WittVector> { x.frobenius_pow(m)?.truncate(n) };
    let all = all_vectors(ring, n + m, 0)?;
    let images: Vec<WittVector> = all.iter().map(map).collect::<Result<_>>()?;
    let one = WittVector::one(ring, n + m);
    tally.record(map(&one)?.is_one(), || "1 is not sent to 1".to_string());
    for (x, fx) in all.iter().zip(&images) {
        for (y, fy) in all.iter().zip(&images) {
            let sum = map(&x.add(y)?)? == fx.add(fy)?;
            let prod = map(&x.mul(y)?)? == fx.mul(fy)?;
            tally.record(sum && prod, || format!("x = {x}, y = {y}"));
        }
    }
    Ok(tally)
}


#[cfg(test)]
mod tests {
    use super::*;

    fn w(r: &Ring, v: &[i64]) -> WittVector {
        WittVector::from_ints(r, v).unwrap()
    }

    #[test]
    fn small_sums_and_products() {
        let z9 = Ring::zmod(3, 2).unwrap();
        assert_eq!(w(&z9, &[1, 0]).add(&w(&z9, &[1, 0])).unwrap(), w(&z9, &[2, 7]));
        let z4 = Ring::zmod(2, 2).unwrap();
        assert_eq!(w(&z4, &[3, 0]).mul(&w(&z4, &[3, 0])).unwrap(), w(&z4, &[1, 0]));
        assert_eq!(w(&z4, &[0, 1]).frobenius().unwrap(), w(&z4, &[2]));
        let f2 = Ring::zmod(2, 1).unwrap();
        assert_eq!(WittVector::integer(&f2, 2, 2).unwrap(), w(&f2, &[0, 1]));
        let z16 = Ring::zmod(2, 4).unwrap();
        let two = WittVector::integer(&z16, 2, 3).unwrap();
        let g: Vec<Elem> = ints(&z16, &[2, 2, 2]);
        assert_eq!(two.ghost().entries(), &g[..]);
    }

    fn ints(r: &Ring, v: &[i64]) -> Vec<Elem> {
        v.iter().map(|&a| r.from_int(a)).collect()
    }

    #[test]
    fn strategies_agree() {
        let r = Ring::parse("Zmod(3^2)[t]/(t^2)").unwrap();
        let all = all_vectors(&Ring::zmod(3, 1).unwrap(), 2, 0).unwrap();
        for x in &all {
            for y in &all {
                x.add_with(y, Strategy::Differential).unwrap();
                x.mul_with(y, Strategy::Differential).unwrap();
            }
        }
        let mut rng = crate::sampling::rng_for(1, "witt-test");
        for _ in 0..20 {
            let x = random_vector(&r, 3, 0, &mut rng);
            let y = random_vector(&r, 3, 0, &mut rng);
            x.mul_with(&y, Strategy::Differential).unwrap();
            x.neg_with(Strategy::Differential).unwrap();
            x.frobenius_with(Strategy::Differential).unwrap();
        }
    }

    #[test]
    fn inverse_and_degrees() {
        let z4 = Ring::zmod(2, 2).unwrap();
        let x = w(&z4, &[3, 1]);
        let y = x.invert().unwrap();
        assert!(x.mul(&y).unwrap().is_one());
        assert!(w(&z4, &[2, 1]).invert().is_err());
        let a = w(&z4, &[1, 1]).with_degree(2);
        assert_eq!(a.frobenius().unwrap().degree(), 4);
        assert_eq!(a.verschiebung().unwrap().degree(), 1);
        assert!(a.clone().with_degree(1).verschiebung().is_err());
        assert!(a.add(&w(&z4, &[1, 1])).is_err());
        assert_eq!(a.mul(&a).unwrap().degree(), 4);
    }

    #[test]
    fn parse_lists() {
        let r = Ring::parse("Zmod(2^3)[q]/((q-1)^4)").unwrap();
        let x = WittVector::parse(&r, "[q, 1+q, 0]", 0).unwrap();
        assert_eq!(x.len(), 3);
        assert!(parse_list(&r, "[q,,1]").is_err());
    }
}
