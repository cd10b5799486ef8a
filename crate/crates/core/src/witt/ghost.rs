//! Ghost components, and their inverse by exact division with precision tracking.

use crate::error::{Error, Result};
use crate::ring::{Elem, HomKind, Ring, RingHom};
use crate::witt::WittVector;

/// Ghost components `w_0, w_1, ...` in a ring `Z/p^K[t]/(f)` read as a
/// precision model: entry `i` is trusted modulo `p^(K - loss[i])`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GhostSeq {
    ring: Ring,
    entries: Vec<Elem>,
    loss: Vec<u32>,
}

impl GhostSeq {
    pub fn new(ring: &Ring, entries: Vec<Elem>, loss: Vec<u32>) -> Result<GhostSeq> {
        if entries.len() != loss.len() {
            return Err(Error::LengthMismatch(entries.len(), loss.len()));
        }
        if entries.is_empty() {
            return Err(Error::TooShort { need: 1, got: 0 });
        }
        if loss.windows(2).any(|w| w[1] < w[0]) {
            return Err(Error::Precondition("precisions must be non-increasing".into()));
        }
        if entries.iter().any(|e| !ring.contains(e)) {
            return Err(Error::RingMismatch);
        }
        Ok(GhostSeq { ring: ring.clone(), entries, loss })
    }

    /// Every entry known to full precision.
    pub fn exact(ring: &Ring, entries: Vec<Elem>) -> Result<GhostSeq> {
        let n = entries.len();
        Self::new(ring, entries, vec![0; n])
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn entries(&self) -> &[Elem] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn loss(&self) -> &[u32] {
        &self.loss
    }

    /// Trusted `p`-adic digits of each entry in the first factor.
    pub fn precisions(&self) -> Vec<u32> {
        let k = self.ring.spec().factors[0].k;
        self.loss.iter().map(|&l| k.saturating_sub(l)).collect()
    }
}

/// `w_i = sum_{j <= i} p^j x_j^(p^(i-j))`, computed in the ring of the components.
pub fn ghost_components(ring: &Ring, comps: &[Elem]) -> Vec<Elem> {
    let p = ring.p();
    let mut pw: Vec<Elem> = Vec::with_capacity(comps.len());
    let mut out = Vec::with_capacity(comps.len());
    for (i, x) in comps.iter().enumerate() {
        for q in pw.iter_mut() {
            *q = ring.pow(q, p);
        }
        pw.push(x.clone());
        let mut w = ring.zero();
        let mut pj = ring.one();
        for q in &pw {
            w = ring.add(&w, &ring.mul(&pj, q));
            pj = ring.scale(&pj, p as i64);
        }
        out.push(w);
        debug_assert_eq!(pw.len(), i + 1);
    }
    out
}

pub fn ghost(x: &WittVector) -> GhostSeq {
    GhostSeq::exact(x.ring(), ghost_components(x.ring(), x.comps())).unwrap()
}

/// Invert the ghost map: `x_i = (w_i - sum_{j<i} p^j x_j^(p^(i-j))) / p^i`.
///
/// The result lives over `Z/p^(K - L)` where `L` is the accumulated loss of
/// precision: each division by `p^i` costs `i` digits, and a term
/// `p^j x_j^(p^(i-j))` is known to `i` more digits than `x_j` itself.
pub fn ghost_lift(g: &GhostSeq) -> Result<WittVector> {
    let ring = &g.ring;
    let p = ring.p();
    let min_k = ring.spec().factors.iter().map(|f| f.k).min().unwrap() as i64;
    let mut xs: Vec<Elem> = Vec::with_capacity(g.len());
    let mut big_l: Vec<i64> = Vec::with_capacity(g.len());
    let mut pw: Vec<Elem> = Vec::new();
    for i in 0..g.len() {
        for q in pw.iter_mut() {
            *q = ring.pow(q, p);
        }
        let mut d = g.entries[i].clone();
        let mut pj = ring.one();
        for q in &pw {
            d = ring.sub(&d, &ring.mul(&pj, q));
            pj = ring.scale(&pj, p as i64);
        }
        let ii = i as i64;
        let dl = big_l.iter().map(|&l| l - ii).fold(g.loss[i] as i64, i64::max).max(0);
        if min_k - dl < ii + 1 {
            return Err(Error::PrecisionExhausted(i));
        }
        let d = ring.truncate_digits(&d, dl as u32);
        let xi = ring.div_p_pow(&d, i as u32).ok_or(Error::NotGhost(i))?;
        big_l.push(dl + ii);
        pw.push(xi.clone());
        xs.push(xi);
    }
    let total = *big_l.last().unwrap() as u32;
    let out = if total == 0 { ring.clone() } else { ring.drop_precision(total)? };
    let comps = xs.iter().map(|x| out.reduce_from(x)).collect();
    WittVector::new(&out, comps, 0)
}

/// Ghost lift after checking the Dwork congruences `w_{i+1} = phi(w_i) mod p^(i+1)`.
pub fn dwork_lift(phi: &RingHom, g: &GhostSeq) -> Result<WittVector> {
    if !matches!(phi.kind(), HomKind::FrobeniusLift(_)) || phi.source() != g.ring() {
        return Err(Error::InvalidHom("Dwork lifting needs a Frobenius lift on the ghost ring".into()));
    }
    let ring = g.ring();
    let min_k = ring.spec().factors.iter().map(|f| f.k).min().unwrap();
    for i in 0..g.len().saturating_sub(1) {
        let diff = ring.sub(&g.entries[i + 1], &phi.apply(&g.entries[i]));
        let l = g.loss[i + 1];
        let digits = (i as u32 + 1).min(min_k.saturating_sub(l));
        let diff = ring.truncate_digits(&diff, l);
        if ring.div_p_pow(&diff, digits).is_none() {
            return Err(Error::DworkViolated(i + 1));
        }
    }
    ghost_lift(g)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(r: &Ring, v: &[i64]) -> Vec<Elem> {
        v.iter().map(|&a| r.from_int(a)).collect()
    }

    #[test]
    fn lifts_small_sequences() {
        let z16 = Ring::zmod(2, 4).unwrap();
        let x = ghost_lift(&GhostSeq::exact(&z16, ints(&z16, &[2, 2])).unwrap()).unwrap();
        // x_1 = (2 - 4) / 2 = -1, known modulo 2^3
        assert_eq!(x.ring().spec().factors[0].k, 3);
        assert_eq!(x.comps(), &ints(x.ring(), &[2, 7])[..]);
        let x = ghost_lift(&GhostSeq::exact(&z16, ints(&z16, &[1, 1, 1])).unwrap()).unwrap();
        assert_eq!(x.comps(), &ints(x.ring(), &[1, 0, 0])[..]);
        let z27 = Ring::zmod(3, 3).unwrap();
        let x = ghost_lift(&GhostSeq::exact(&z27, ints(&z27, &[0, 3])).unwrap()).unwrap();
        assert_eq!(x.comps(), &ints(x.ring(), &[0, 1])[..]);
    }

    #[test]
    fn rejects_non_ghost_sequences() {
        let z16 = Ring::zmod(2, 4).unwrap();
        let g = GhostSeq::exact(&z16, ints(&z16, &[1, 2])).unwrap();
        assert_eq!(ghost_lift(&g), Err(Error::NotGhost(1)));
        let z2 = Ring::zmod(2, 1).unwrap();
        let g = GhostSeq::exact(&z2, ints(&z2, &[0, 0])).unwrap();
        assert_eq!(ghost_lift(&g), Err(Error::PrecisionExhausted(1)));
    }

    #[test]
    fn p2_over_p_ghosts() {
        let z = Ring::zmod(2, 9).unwrap();
        let id = RingHom::frobenius_lift(&z, z.zero()).unwrap();
        let g = GhostSeq::exact(&z, ints(&z, &[2, 8, 128])).unwrap();
        let a = dwork_lift(&id, &g).unwrap();
        assert_eq!(a.comps(), &ints(a.ring(), &[2, 2, 26])[..]);
        let bad = GhostSeq::exact(&z, ints(&z, &[2, 3, 128])).unwrap();
        assert_eq!(dwork_lift(&id, &bad), Err(Error::DworkViolated(1)));
    }
}
