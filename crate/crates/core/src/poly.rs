//! Sparse multivariate polynomials with big-integer coefficients.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::ring::{Elem, Ring};

pub type Monomial = Vec<u32>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly {
    nvars: usize,
    terms: BTreeMap<Monomial, BigInt>,
}

impl Poly {
    pub fn zero(nvars: usize) -> Self {
        Poly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: BigInt) -> Self {
        let mut p = Self::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(vec![0; nvars], c);
        }
        p
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut m = vec![0; nvars];
        m[i] = 1;
        let mut p = Self::zero(nvars);
        p.terms.insert(m, BigInt::one());
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigInt)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &[u32]) -> BigInt {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    fn add_term(&mut self, m: Monomial, c: BigInt) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let mut r = self.clone();
        for (m, c) in &other.terms {
            r.add_term(m.clone(), c.clone());
        }
        r
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Poly {
        Poly { nvars: self.nvars, terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect() }
    }

    pub fn scale(&self, k: &BigInt) -> Poly {
        if k.is_zero() {
            return Poly::zero(self.nvars);
        }
        Poly { nvars: self.nvars, terms: self.terms.iter().map(|(m, c)| (m.clone(), c * k)).collect() }
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut acc: std::collections::HashMap<Monomial, BigInt> = std::collections::HashMap::new();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                let m: Monomial = m1.iter().zip(m2).map(|(a, b)| a + b).collect();
                *acc.entry(m).or_default() += c1 * c2;
            }
        }
        Poly { nvars: self.nvars, terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect() }
    }

    pub fn pow(&self, mut n: u64) -> Poly {
        let mut base = self.clone();
        let mut acc = Poly::constant(self.nvars, BigInt::one());
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(&base);
            }
            n >>= 1;
            if n > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Exact division by an integer; `None` if some coefficient is not divisible.
    pub fn div_exact(&self, d: &BigInt) -> Option<Poly> {
        let mut terms = BTreeMap::new();
        for (m, c) in &self.terms {
            let (q, r) = c.div_rem(d);
            if !r.is_zero() {
                return None;
            }
            terms.insert(m.clone(), q);
        }
        Some(Poly { nvars: self.nvars, terms })
    }

    /// Substitute polynomials (all in a common variable set) for the variables.
    pub fn compose(&self, subs: &[Poly]) -> Poly {
        assert_eq!(subs.len(), self.nvars);
        let nv = subs.first().map_or(0, |s| s.nvars);
        let maxdeg: Vec<u32> = (0..self.nvars).map(|i| self.terms.keys().map(|m| m[i]).max().unwrap_or(0)).collect();
        let powers: Vec<Vec<Poly>> = subs
            .iter()
            .zip(&maxdeg)
            .map(|(s, &d)| {
                let mut v = vec![Poly::constant(nv, BigInt::one())];
                for _ in 0..d {
                    v.push(v.last().unwrap().mul(s));
                }
                v
            })
            .collect();
        let mut acc = Poly::zero(nv);
        for (m, c) in &self.terms {
            let mut t = Poly::constant(nv, c.clone());
            for (i, &e) in m.iter().enumerate() {
                if e > 0 {
                    t = t.mul(&powers[i][e as usize]);
                }
            }
            acc = acc.add(&t);
        }
        acc
    }

    /// Rename variables into a larger variable set via `map[i]`.
    pub fn embed(&self, nvars: usize, map: &[usize]) -> Poly {
        let mut r = Poly::zero(nvars);
        for (m, c) in &self.terms {
            let mut nm = vec![0; nvars];
            for (i, &e) in m.iter().enumerate() {
                nm[map[i]] += e;
            }
            r.add_term(nm, c.clone());
        }
        r
    }

    pub fn max_degree(&self, i: usize) -> u32 {
        self.terms.keys().map(|m| m[i]).max().unwrap_or(0)
    }

    /// A form of the polynomial ready for repeated evaluation.
    pub fn compile(&self) -> CompiledPoly {
        let small = self.terms.values().all(|c| c.abs() < BigInt::from(i64::MAX));
        CompiledPoly {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| {
                    let vars: Vec<(usize, u32)> =
                        m.iter().enumerate().filter(|(_, &e)| e > 0).map(|(i, &e)| (i, e)).collect();
                    let coeff = if small { Coeff::Small(c.to_i64().unwrap()) } else { Coeff::Big(c.clone()) };
                    (vars, coeff)
                })
                .collect(),
            maxdeg: (0..self.nvars).map(|i| self.max_degree(i)).collect(),
        }
    }
}

#[derive(Clone, Debug)]
enum Coeff {
    Small(i64),
    Big(BigInt),
}

#[derive(Clone, Debug)]
pub struct CompiledPoly {
    terms: Vec<(Vec<(usize, u32)>, Coeff)>,
    maxdeg: Vec<u32>,
}

/// Powers `x_i^0..=x_i^d` of every input, shared between the polynomials of a family.
pub struct PowerTable {
    pows: Vec<Vec<Elem>>,
}

impl PowerTable {
    pub fn new(ring: &Ring, inputs: &[Elem], maxdeg: &[u32]) -> Self {
        let pows = inputs
            .iter()
            .zip(maxdeg)
            .map(|(x, &d)| {
                let mut v = vec![ring.one()];
                for _ in 0..d {
                    v.push(ring.mul(v.last().unwrap(), x));
                }
                v
            })
            .collect();
        PowerTable { pows }
    }
}

impl CompiledPoly {
    pub fn maxdeg(&self) -> &[u32] {
        &self.maxdeg
    }

    pub fn eval(&self, ring: &Ring, table: &PowerTable) -> Elem {
        let mut acc = ring.zero();
        for (vars, c) in &self.terms {
            let mut t = match c {
                Coeff::Small(k) => ring.from_int(*k),
                Coeff::Big(k) => ring.from_bigint(k),
            };
            for &(i, e) in vars {
                t = ring.mul(&t, &table.pows[i][e as usize]);
            }
            acc = ring.add(&acc, &t);
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic() {
        let x = Poly::var(2, 0);
        let y = Poly::var(2, 1);
        let s = x.add(&y);
        let sq = s.pow(2);
        assert_eq!(sq.coeff(&[1, 1]), BigInt::from(2));
        assert_eq!(sq.sub(&x.pow(2)).sub(&y.pow(2)).div_exact(&BigInt::from(2)).unwrap(), x.mul(&y));
        assert!(sq.div_exact(&BigInt::from(2)).is_none());
        let c = s.compose(&[y.clone(), y.clone()]);
        assert_eq!(c, y.scale(&BigInt::from(2)));
    }
}
