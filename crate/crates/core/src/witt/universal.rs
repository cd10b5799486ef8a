//! The universal Witt polynomials, generated by recursive exact division and memoized.

use std::collections::HashMap;
use std::sync::{Arc, LazyLock, RwLock};

use num_bigint::BigInt;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::poly::{CompiledPoly, Poly, PowerTable};
use crate::ring::{Elem, Ring};

/// Largest length for which polynomials are generated.
pub const SYMBOLIC_BOUND: usize = 5;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum WittOp {
    Sum,
    Product,
    Negation,
    Frobenius,
}

impl WittOp {
    pub fn name(self) -> &'static str {
        match self {
            WittOp::Sum => "S",
            WittOp::Product => "P",
            WittOp::Negation => "N",
            WittOp::Frobenius => "F",
        }
    }

    fn arity(self) -> usize {
        match self {
            WittOp::Sum | WittOp::Product => 2,
            _ => 1,
        }
    }
}

/// Polynomials `Q_0, Q_1, ...` with integer coefficients such that the ghost
/// components of `Q(x, y)` are the corresponding operation applied to the ghost
/// components of `x` and `y`.
#[derive(Debug)]
pub struct WittPolyFamily {
    pub p: u64,
    pub n: usize,
    pub op: WittOp,
    polys: Vec<Poly>,
    compiled: Vec<CompiledPoly>,
    maxdeg: Vec<u32>,
}

fn bump(v: &mut [u32], other: &[u32]) {
    for (a, &b) in v.iter_mut().zip(other) {
        *a = (*a).max(b);
    }
}

/// `w_i` in the variables `first..first + i`.
pub fn ghost_poly(p: u64, i: usize, nvars: usize, first: usize) -> Poly {
    let mut acc = Poly::zero(nvars);
    for j in 0..=i {
        let term = Poly::var(nvars, first + j).pow(p.pow((i - j) as u32)).scale(&BigInt::from(p).pow(j as u32));
        acc = acc.add(&term);
    }
    acc
}

impl WittPolyFamily {
    /// Variables: `x_0..x_{n-1}` then (for binary operations) `y_0..y_{n-1}`.
    pub fn nvars(&self) -> usize {
        self.n * self.op.arity()
    }

    pub fn polys(&self) -> &[Poly] {
        &self.polys
    }

    pub fn eval(&self, ring: &Ring, inputs: &[Elem]) -> Vec<Elem> {
        let table = PowerTable::new(ring, inputs, &self.maxdeg);
        self.compiled.iter().map(|c| c.eval(ring, &table)).collect()
    }

    fn generate(p: u64, n: usize, op: WittOp) -> Result<WittPolyFamily> {
        let nv = n * op.arity();
        let count = if op == WittOp::Frobenius { n - 1 } else { n };
        let mut polys: Vec<Poly> = Vec::with_capacity(count);
        let pb = BigInt::from(p);
        for i in 0..count {
            let target = match op {
                WittOp::Sum => ghost_poly(p, i, nv, 0).add(&ghost_poly(p, i, nv, n)),
                WittOp::Product => ghost_poly(p, i, nv, 0).mul(&ghost_poly(p, i, nv, n)),
                WittOp::Negation => ghost_poly(p, i, nv, 0).neg(),
                WittOp::Frobenius => ghost_poly(p, i + 1, nv, 0),
            };
            let mut rest = target;
            for (j, q) in polys.iter().enumerate() {
                rest = rest.sub(&q.pow(p.pow((i - j) as u32)).scale(&pb.pow(j as u32)));
            }
            let q = rest.div_exact(&pb.pow(i as u32)).ok_or_else(|| {
                Error::Internal(format!("{}_{i} for p = {p} is not integral", op.name()))
            })?;
            polys.push(q);
        }
        let compiled: Vec<CompiledPoly> = polys.iter().map(|q| q.compile()).collect();
        let mut maxdeg = vec![0; nv];
        for c in &compiled {
            bump(&mut maxdeg, c.maxdeg());
        }
        Ok(WittPolyFamily { p, n, op, polys, compiled, maxdeg })
    }

    /// Recompute the ghost side symbolically and compare with the target.
    pub fn verify_ghost_compatibility(&self) -> bool {
        let nv = self.nvars();
        let n = self.n;
        let p = self.p;
        let pb = BigInt::from(p);
        (0..self.polys.len()).all(|i| {
            let mut w = Poly::zero(nv);
            for j in 0..=i {
                w = w.add(&self.polys[j].pow(p.pow((i - j) as u32)).scale(&pb.pow(j as u32)));
            }
            let target = match self.op {
                WittOp::Sum => ghost_poly(p, i, nv, 0).add(&ghost_poly(p, i, nv, n)),
                WittOp::Product => ghost_poly(p, i, nv, 0).mul(&ghost_poly(p, i, nv, n)),
                WittOp::Negation => ghost_poly(p, i, nv, 0).neg(),
                WittOp::Frobenius => ghost_poly(p, i + 1, nv, 0),
            };
            w == target
        })
    }
}

type Key = (u64, usize, WittOp);

static CACHE: LazyLock<RwLock<HashMap<Key, Arc<WittPolyFamily>>>> = LazyLock::new(Default::default);

/// The memoized family for `(p, n, op)`.
pub fn universal_polys(p: u64, n: usize, op: WittOp) -> Result<Arc<WittPolyFamily>> {
    if n > SYMBOLIC_BOUND {
        return Err(Error::SymbolicBound { n, bound: SYMBOLIC_BOUND });
    }
    if n == 0 || (op == WittOp::Frobenius && n < 2) {
        return Err(Error::TooShort { need: if op == WittOp::Frobenius { 2 } else { 1 }, got: n });
    }
    if let Some(f) = CACHE.read().unwrap().get(&(p, n, op)) {
        return Ok(f.clone());
    }
    let fam = Arc::new(WittPolyFamily::generate(p, n, op)?);
    Ok(CACHE.write().unwrap().entry((p, n, op)).or_insert(fam).clone())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(nvars: usize, i: usize) -> Poly {
        Poly::var(nvars, i)
    }

    #[test]
    fn low_degree_polynomials() {
        let s = universal_polys(2, 2, WittOp::Sum).unwrap();
        // S_0 = x0 + y0, S_1 = x1 + y1 - x0 y0 (p = 2)
        let nv = 4;
        assert_eq!(s.polys()[0], x(nv, 0).add(&x(nv, 2)));
        assert_eq!(s.polys()[1], x(nv, 1).add(&x(nv, 3)).sub(&x(nv, 0).mul(&x(nv, 2))));
        for p in [2u64, 3, 5] {
            let f = universal_polys(p, 2, WittOp::Frobenius).unwrap();
            let want = x(2, 0).pow(p).add(&x(2, 1).scale(&BigInt::from(p)));
            assert_eq!(f.polys()[0], want);
        }
    }

    #[test]
    fn odd_negation_is_componentwise() {
        let n = universal_polys(3, 3, WittOp::Negation).unwrap();
        for i in 0..3 {
            assert_eq!(n.polys()[i], x(3, i).neg());
        }
        let n2 = universal_polys(2, 2, WittOp::Negation).unwrap();
        assert_ne!(n2.polys()[1], x(2, 1).neg());
    }

    #[test]
    fn ghost_compatible() {
        for op in [WittOp::Sum, WittOp::Product, WittOp::Negation, WittOp::Frobenius] {
            for (p, n) in [(2, 3), (3, 2)] {
                assert!(universal_polys(p, n, op).unwrap().verify_ghost_compatibility());
            }
        }
        assert!(matches!(universal_polys(2, 6, WittOp::Sum), Err(Error::SymbolicBound { .. })));
    }
}
