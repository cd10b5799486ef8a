//! Finite local rings `Z/p^K[t]/(f)` and finite products of them.
//!
//! Two shapes of local factor are supported: `f = t^e` (a truncated power
//! series ring in `t`, optionally written in the variable `q = 1 + t`), and
//! `f` monic and irreducible modulo `p` (an unramified extension, which gives
//! the finite fields `F_{p^r}` at `K = 1`).
//!
//! Elements are flat coefficient vectors with every entry in `[0, p^K)`, so
//! equality is plain vector equality.

use std::fmt::Write as _;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use rand::Rng;

use crate::error::{parse_err, Error, Result};

/// Default cap on the number of elements an enumeration may produce.
pub const DEFAULT_ENUMERATION_BOUND: u64 = 1_000_000;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Modulus {
    /// `t^e`.
    Nil(usize),
    /// Monic `f` irreducible mod `p`; holds the non-leading coefficients, low degree first.
    Poly(Vec<u64>),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LocalSpec {
    pub k: u32,
    pub modulus: Modulus,
    /// Name of the variable used when printing and parsing.
    pub var: char,
    /// If set, the printed variable is `1 + t` rather than `t` (only for `Nil`).
    pub shifted: bool,
}

impl LocalSpec {
    pub fn nil(k: u32, e: usize) -> Self {
        LocalSpec { k, modulus: Modulus::Nil(e), var: 't', shifted: false }
    }

    /// `Z/p^k[q]/((q-1)^e)`, stored in the coordinate `t = q - 1`.
    pub fn shifted(k: u32, e: usize, var: char) -> Self {
        LocalSpec { k, modulus: Modulus::Nil(e), var, shifted: true }
    }

    pub fn unramified(k: u32, f: Vec<u64>) -> Self {
        LocalSpec { k, modulus: Modulus::Poly(f), var: 't', shifted: false }
    }

    pub fn with_var(mut self, var: char) -> Self {
        self.var = var;
        self
    }

    pub fn degree(&self) -> usize {
        match &self.modulus {
            Modulus::Nil(e) => *e,
            Modulus::Poly(f) => f.len(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RingSpec {
    pub p: u64,
    pub factors: Vec<LocalSpec>,
}

impl RingSpec {
    pub fn local(p: u64, k: u32, e: usize) -> Self {
        RingSpec { p, factors: vec![LocalSpec::nil(k, e)] }
    }

    pub fn zmod(p: u64, k: u32) -> Self {
        Self::local(p, k, 1)
    }

    pub fn product(p: u64, factors: Vec<LocalSpec>) -> Self {
        RingSpec { p, factors }
    }

    /// Number of elements, saturating at `u128::MAX`.
    pub fn cardinality(&self) -> u128 {
        let mut c: u128 = 1;
        for f in &self.factors {
            for _ in 0..(f.k as usize * f.degree()) {
                c = c.saturating_mul(self.p as u128);
            }
        }
        c
    }

    pub fn parse(s: &str) -> Result<Self> {
        SpecParser { s: s.as_bytes(), pos: 0 }.spec()
    }
}

impl std::fmt::Display for RingSpec {
    fn fmt(&self, out: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for (i, f) in self.factors.iter().enumerate() {
            if i > 0 {
                out.write_str(" x ")?;
            }
            write!(out, "Zmod({}^{})", self.p, f.k)?;
            let v = f.var;
            match &f.modulus {
                Modulus::Nil(1) if !f.shifted => {}
                Modulus::Nil(e) if f.shifted => write!(out, "[{v}]/(({v}-1)^{e})")?,
                Modulus::Nil(e) => write!(out, "[{v}]/({v}^{e})")?,
                Modulus::Poly(c) => {
                    let mut full: Vec<u64> = c.clone();
                    full.push(1);
                    write!(out, "[{v}]/({})", int_poly_string(&full, v))?;
                }
            }
        }
        Ok(())
    }
}

fn int_poly_string(c: &[u64], v: char) -> String {
    let mut s = String::new();
    for i in (0..c.len()).rev() {
        if c[i] == 0 {
            continue;
        }
        if !s.is_empty() {
            s.push('+');
        }
        match (i, c[i]) {
            (0, a) => write!(s, "{a}").unwrap(),
            (1, 1) => write!(s, "{v}").unwrap(),
            (1, a) => write!(s, "{a}*{v}").unwrap(),
            (i, 1) => write!(s, "{v}^{i}").unwrap(),
            (i, a) => write!(s, "{a}*{v}^{i}").unwrap(),
        }
    }
    if s.is_empty() {
        s.push('0');
    }
    s
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

fn pow_u64(p: u64, k: u32) -> Option<u64> {
    let mut r: u64 = 1;
    for _ in 0..k {
        r = r.checked_mul(p)?;
    }
    Some(r)
}

/// An element: the concatenated coefficient vectors of all factors.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Elem(pub(crate) Vec<u64>);

impl Elem {
    pub fn coeffs(&self) -> &[u64] {
        &self.0
    }
}

#[derive(Debug)]
struct RingData {
    spec: RingSpec,
    moduli: Vec<u64>,
    offs: Vec<usize>,
    width: usize,
}

/// A shared handle to a ring. Cloning is cheap.
#[derive(Clone, Debug)]
pub struct Ring(Arc<RingData>);

impl PartialEq for Ring {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.spec == other.0.spec
    }
}
impl Eq for Ring {}

impl Ring {
    pub fn new(spec: RingSpec) -> Result<Ring> {
        let p = spec.p;
        if !is_prime(p) {
            return Err(Error::NonPrime(p));
        }
        if spec.factors.is_empty() {
            return Err(Error::Precondition("a ring needs at least one factor".into()));
        }
        let mut moduli = Vec::new();
        let mut offs = Vec::new();
        let mut width = 0;
        for f in &spec.factors {
            if f.k == 0 || f.degree() == 0 {
                return Err(Error::Precondition("K and e must be at least 1".into()));
            }
            let m = pow_u64(p, f.k)
                .filter(|m| *m < (1u64 << 62))
                .ok_or(Error::ModulusOverflow { p, k: f.k })?;
            if let Modulus::Poly(c) = &f.modulus {
                if c.len() < 2 || c.iter().any(|&a| a >= p) || !irreducible_mod_p(c, p) {
                    return Err(Error::Precondition(
                        "modulus must be monic of degree >= 2 and irreducible mod p".into(),
                    ));
                }
                if f.shifted {
                    return Err(Error::Precondition("shifted variable needs a t^e modulus".into()));
                }
            }
            moduli.push(m);
            offs.push(width);
            width += f.degree();
        }
        Ok(Ring(Arc::new(RingData { spec, moduli, offs, width })))
    }

    pub fn zmod(p: u64, k: u32) -> Result<Ring> {
        Ring::new(RingSpec::zmod(p, k))
    }

    pub fn local(p: u64, k: u32, e: usize) -> Result<Ring> {
        Ring::new(RingSpec::local(p, k, e))
    }

    /// The field with `q` elements; `q` must be a prime power.
    pub fn field(q: u64) -> Result<Ring> {
        let (p, r) = prime_power(q).ok_or_else(|| Error::Precondition(format!("{q} is not a prime power")))?;
        if r == 1 {
            return Ring::zmod(p, 1);
        }
        Ring::new(RingSpec { p, factors: vec![LocalSpec::unramified(1, conway_like(p, r as usize))] })
    }

    pub fn parse(s: &str) -> Result<Ring> {
        Ring::new(RingSpec::parse(s)?)
    }

    pub fn spec(&self) -> &RingSpec {
        &self.0.spec
    }

    pub fn p(&self) -> u64 {
        self.0.spec.p
    }

    pub fn num_factors(&self) -> usize {
        self.0.spec.factors.len()
    }

    pub fn width(&self) -> usize {
        self.0.width
    }

    pub fn cardinality(&self) -> u128 {
        self.0.spec.cardinality()
    }

    /// `p = 0` in the ring.
    pub fn is_char_p(&self) -> bool {
        self.0.spec.factors.iter().all(|f| f.k == 1)
    }

    /// Smallest `N` with `p^N = 0`.
    pub fn p_nilpotency(&self) -> u32 {
        self.0.spec.factors.iter().map(|f| f.k).max().unwrap_or(1)
    }

    /// Largest `K * e` over the factors: a bound on the nilpotency order of the maximal ideal.
    pub fn max_k_e(&self) -> usize {
        self.0.spec.factors.iter().map(|f| f.k as usize * f.degree()).max().unwrap_or(1)
    }

    fn range(&self, f: usize) -> std::ops::Range<usize> {
        let o = self.0.offs[f];
        o..o + self.0.spec.factors[f].degree()
    }

    pub fn zero(&self) -> Elem {
        Elem(vec![0; self.0.width])
    }

    pub fn one(&self) -> Elem {
        self.from_int(1)
    }

    pub fn from_int(&self, n: i64) -> Elem {
        let mut c = vec![0; self.0.width];
        for (f, &m) in self.0.moduli.iter().enumerate() {
            c[self.0.offs[f]] = n.rem_euclid(m as i64) as u64;
        }
        Elem(c)
    }

    pub fn from_bigint(&self, n: &BigInt) -> Elem {
        let mut c = vec![0; self.0.width];
        for (f, &m) in self.0.moduli.iter().enumerate() {
            let r: BigInt = ((n % m) + m) % m;
            c[self.0.offs[f]] = r.to_u64().unwrap();
        }
        Elem(c)
    }

    /// The canonical generator `t` of every factor (zero in factors `Z/p^K`).
    pub fn gen(&self) -> Elem {
        let mut c = vec![0; self.0.width];
        for f in 0..self.num_factors() {
            let r = self.range(f);
            match &self.0.spec.factors[f].modulus {
                Modulus::Nil(1) => {}
                _ => c[r.start + 1] = 1,
            }
        }
        Elem(c)
    }

    pub fn from_coeffs(&self, c: Vec<u64>) -> Result<Elem> {
        if c.len() != self.0.width {
            return Err(Error::RingMismatch);
        }
        for f in 0..self.num_factors() {
            if c[self.range(f)].iter().any(|&a| a >= self.0.moduli[f]) {
                return Err(Error::Precondition("coefficient outside canonical range".into()));
            }
        }
        Ok(Elem(c))
    }

    pub fn contains(&self, a: &Elem) -> bool {
        a.0.len() == self.0.width
            && (0..self.num_factors()).all(|f| a.0[self.range(f)].iter().all(|&c| c < self.0.moduli[f]))
    }

    pub fn add(&self, a: &Elem, b: &Elem) -> Elem {
        let mut c = a.0.clone();
        for f in 0..self.num_factors() {
            let m = self.0.moduli[f];
            for i in self.range(f) {
                let s = c[i] + b.0[i];
                c[i] = if s >= m { s - m } else { s };
            }
        }
        Elem(c)
    }

    pub fn neg(&self, a: &Elem) -> Elem {
        let mut c = a.0.clone();
        for f in 0..self.num_factors() {
            let m = self.0.moduli[f];
            for i in self.range(f) {
                c[i] = if c[i] == 0 { 0 } else { m - c[i] };
            }
        }
        Elem(c)
    }

    pub fn sub(&self, a: &Elem, b: &Elem) -> Elem {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &Elem, b: &Elem) -> Elem {
        let mut out = vec![0u64; self.0.width];
        for f in 0..self.num_factors() {
            let r = self.range(f);
            let m = self.0.moduli[f] as u128;
            let x = &a.0[r.clone()];
            let y = &b.0[r.clone()];
            let e = x.len();
            let fm = &self.0.spec.factors[f].modulus;
            let full = matches!(fm, Modulus::Poly(_));
            let mut conv = vec![0u128; if full { 2 * e - 1 } else { e }];
            for (i, &xi) in x.iter().enumerate() {
                if xi == 0 {
                    continue;
                }
                let lim = if full { e } else { e - i };
                for (j, &yj) in y.iter().take(lim).enumerate() {
                    conv[i + j] += (xi as u128 * yj as u128) % m;
                }
            }
            for c in conv.iter_mut() {
                *c %= m;
            }
            if let Modulus::Poly(fc) = fm {
                for i in (e..2 * e - 1).rev() {
                    let c = conv[i];
                    if c == 0 {
                        continue;
                    }
                    for (j, &fj) in fc.iter().enumerate() {
                        conv[i - e + j] = (conv[i - e + j] + (m - fj as u128 % m) * c) % m;
                    }
                }
            }
            for (i, c) in conv.into_iter().take(e).enumerate() {
                out[r.start + i] = c as u64;
            }
        }
        Elem(out)
    }

    pub fn pow(&self, a: &Elem, mut n: u64) -> Elem {
        let mut base = a.clone();
        let mut acc = self.one();
        while n > 0 {
            if n & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            n >>= 1;
            if n > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    pub fn scale(&self, a: &Elem, n: i64) -> Elem {
        self.mul(a, &self.from_int(n))
    }

    pub fn is_zero(&self, a: &Elem) -> bool {
        a.0.iter().all(|&c| c == 0)
    }

    fn factor_is_unit(&self, a: &Elem, f: usize) -> bool {
        let p = self.p();
        let r = self.range(f);
        match &self.0.spec.factors[f].modulus {
            Modulus::Nil(_) => a.0[r.start] % p != 0,
            Modulus::Poly(_) => a.0[r].iter().any(|&c| c % p != 0),
        }
    }

    fn factor_is_nilpotent(&self, a: &Elem, f: usize) -> bool {
        let p = self.p();
        let r = self.range(f);
        match &self.0.spec.factors[f].modulus {
            Modulus::Nil(_) => a.0[r.start] % p == 0,
            Modulus::Poly(_) => a.0[r].iter().all(|&c| c % p == 0),
        }
    }

    /// Unit in every factor.
    pub fn is_unit(&self, a: &Elem) -> bool {
        (0..self.num_factors()).all(|f| self.factor_is_unit(a, f))
    }

    /// Nilpotent in every factor.
    pub fn is_nilpotent(&self, a: &Elem) -> bool {
        (0..self.num_factors()).all(|f| self.factor_is_nilpotent(a, f))
    }

    /// Per-factor unit flags.
    pub fn unit_pattern(&self, a: &Elem) -> Vec<bool> {
        (0..self.num_factors()).map(|f| self.factor_is_unit(a, f)).collect()
    }

    pub fn inv(&self, a: &Elem) -> Result<Elem> {
        if !self.is_unit(a) {
            return Err(Error::NotAUnit(self.fmt_elem(a)));
        }
        // a^N = 1 modulo the maximal ideals, N a common multiple of the residue unit orders.
        let mut n: u64 = 1;
        for f in &self.0.spec.factors {
            let r = pow_u64(self.p(), f.degree() as u32).unwrap() - 1;
            n = num_integer::lcm(n, r);
        }
        let one = self.one();
        let two = self.from_int(2);
        let mut b = self.pow(a, n - 1);
        for _ in 0..64 {
            let ab = self.mul(a, &b);
            if ab == one {
                return Ok(b);
            }
            b = self.mul(&b, &self.sub(&two, &ab));
        }
        Err(Error::Internal("Newton inversion did not converge".into()))
    }

    /// Same shape with every `K` increased by `n`.
    pub fn lift(&self, n: u32) -> Result<Ring> {
        let mut spec = self.0.spec.clone();
        for f in spec.factors.iter_mut() {
            f.k += n;
        }
        Ring::new(spec)
    }

    /// Same shape with every `K` decreased by `n` (clamped below at 1).
    pub fn drop_precision(&self, n: u32) -> Result<Ring> {
        let mut spec = self.0.spec.clone();
        for f in spec.factors.iter_mut() {
            if f.k <= n {
                return Err(Error::PrecisionExhausted(0));
            }
            f.k -= n;
        }
        Ring::new(spec)
    }

    /// The ring modulo `p`.
    pub fn mod_p(&self) -> Result<Ring> {
        let mut spec = self.0.spec.clone();
        for f in spec.factors.iter_mut() {
            f.k = 1;
        }
        Ring::new(spec)
    }

    /// Reduce the coefficients of an element of a same-shape ring into `self`.
    pub fn reduce_from(&self, a: &Elem) -> Elem {
        let mut c = a.0.clone();
        for f in 0..self.num_factors() {
            let m = self.0.moduli[f];
            for i in self.range(f) {
                c[i] %= m;
            }
        }
        Elem(c)
    }

    /// Exact coefficientwise division by `p^i`, if possible.
    pub fn div_p_pow(&self, a: &Elem, i: u32) -> Option<Elem> {
        let d = pow_u64(self.p(), i)?;
        if a.0.iter().any(|&c| c % d != 0) {
            return None;
        }
        Some(Elem(a.0.iter().map(|&c| c / d).collect()))
    }

    /// Keep only the lowest `K_f - loss` `p`-adic digits in each factor.
    pub fn truncate_digits(&self, a: &Elem, loss: u32) -> Elem {
        let mut c = a.0.clone();
        for f in 0..self.num_factors() {
            let k = self.0.spec.factors[f].k;
            let m = if k > loss { pow_u64(self.p(), k - loss).unwrap() } else { 1 };
            for i in self.range(f) {
                c[i] %= m;
            }
        }
        Elem(c)
    }

    pub fn factor_ring(&self, f: usize) -> Ring {
        Ring::new(RingSpec { p: self.p(), factors: vec![self.0.spec.factors[f].clone()] }).unwrap()
    }

    pub fn project(&self, a: &Elem, f: usize) -> Elem {
        Elem(a.0[self.range(f)].to_vec())
    }

    pub fn from_factors(&self, parts: &[Elem]) -> Result<Elem> {
        if parts.len() != self.num_factors() {
            return Err(Error::RingMismatch);
        }
        let mut c = Vec::with_capacity(self.0.width);
        for (f, part) in parts.iter().enumerate() {
            if part.0.len() != self.range(f).len() {
                return Err(Error::RingMismatch);
            }
            c.extend_from_slice(&part.0);
        }
        self.from_coeffs(c)
    }

    pub fn elements(&self) -> Result<ElemIter> {
        self.elements_bounded(DEFAULT_ENUMERATION_BOUND)
    }

    /// Every element exactly once, first coefficient varying fastest.
    pub fn elements_bounded(&self, bound: u64) -> Result<ElemIter> {
        let card = self.cardinality();
        if card > bound as u128 {
            return Err(Error::BoundExceeded { card, bound });
        }
        let radix: Vec<u64> = (0..self.num_factors())
            .flat_map(|f| std::iter::repeat(self.0.moduli[f]).take(self.range(f).len()))
            .collect();
        Ok(ElemIter { radix, cur: Some(vec![0; self.0.width]) })
    }

    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> Elem {
        let mut c = vec![0; self.0.width];
        for f in 0..self.num_factors() {
            for i in self.range(f) {
                c[i] = rng.gen_range(0..self.0.moduli[f]);
            }
        }
        Elem(c)
    }

    /// Checked arithmetic entry point: `op` is one of `add`, `mul`, `neg`, `sub`.
    pub fn arith(&self, op: &str, a: &Elem, b: Option<&Elem>) -> Result<Elem> {
        if !self.contains(a) || b.is_some_and(|b| !self.contains(b)) {
            return Err(Error::RingMismatch);
        }
        let need = || b.ok_or_else(|| Error::Precondition(format!("{op} needs two operands")));
        Ok(match op {
            "add" => self.add(a, need()?),
            "sub" => self.sub(a, need()?),
            "mul" => self.mul(a, need()?),
            "neg" => self.neg(a),
            _ => return Err(Error::Precondition(format!("unknown ring operation {op}"))),
        })
    }

    fn fmt_factor(&self, a: &Elem, f: usize) -> String {
        let spec = &self.0.spec.factors[f];
        let m = self.0.moduli[f];
        let mut c: Vec<u64> = a.0[self.range(f)].to_vec();
        if spec.shifted {
            // (q-1)^i = sum_j C(i,j) (-1)^(i-j) q^j
            let m = m as i128;
            let mut d = vec![0i128; c.len()];
            for (i, &ci) in c.iter().enumerate() {
                for (j, dj) in d.iter_mut().enumerate().take(i + 1) {
                    let b = binom_i128(i as u64, j as u64) % m;
                    let term = ci as i128 * b % m;
                    *dj = (*dj + if (i - j) % 2 == 1 { m - term } else { term }) % m;
                }
            }
            c = d.into_iter().map(|x| x as u64).collect();
        }
        int_poly_string(&c, spec.var)
    }

    pub fn fmt_elem(&self, a: &Elem) -> String {
        if self.num_factors() == 1 {
            return self.fmt_factor(a, 0);
        }
        let parts: Vec<String> = (0..self.num_factors()).map(|f| self.fmt_factor(a, f)).collect();
        format!("({})", parts.join(","))
    }

    pub fn parse_elem(&self, s: &str) -> Result<Elem> {
        let mut p = ElemParser { s: s.as_bytes(), pos: 0 };
        let v = p.expr(self)?;
        p.ws();
        if p.pos != p.s.len() {
            return parse_err(p.pos, "trailing input");
        }
        Ok(v)
    }

    fn var_elem(&self, name: char) -> Option<Elem> {
        let mut c = vec![0; self.0.width];
        for f in 0..self.num_factors() {
            let spec = &self.0.spec.factors[f];
            if spec.var != name {
                return None;
            }
            let r = self.range(f);
            if spec.shifted {
                c[r.start] = 1;
            }
            if r.len() > 1 {
                c[r.start + 1] = 1;
            } else if let Modulus::Poly(_) = spec.modulus {
                unreachable!()
            }
        }
        Some(Elem(c))
    }
}

pub struct ElemIter {
    radix: Vec<u64>,
    cur: Option<Vec<u64>>,
}

impl Iterator for ElemIter {
    type Item = Elem;
    fn next(&mut self) -> Option<Elem> {
        let out = self.cur.clone()?;
        let mut c = out.clone();
        let mut i = 0;
        loop {
            if i == c.len() {
                self.cur = None;
                break;
            }
            c[i] += 1;
            if c[i] < self.radix[i] {
                self.cur = Some(c);
                break;
            }
            c[i] = 0;
            i += 1;
        }
        Some(Elem(out))
    }
}

/// `q = p^r` with `p` prime.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let mut p = 2;
    while q % p != 0 {
        p += 1;
    }
    let (mut r, mut m) = (0, q);
    while m % p == 0 {
        m /= p;
        r += 1;
    }
    (m == 1).then_some((p, r))
}

/// Remainder of `a` modulo the monic `g` over `F_p` (coefficients low first, `g` includes its leading 1).
fn poly_rem_mod_p(a: &[u64], g: &[u64], p: u64) -> Vec<u64> {
    let mut r = a.to_vec();
    let dg = g.len() - 1;
    while r.len() > dg {
        let c = r.pop().unwrap() % p;
        let base = r.len() - dg;
        for j in 0..dg {
            r[base + j] = (r[base + j] + (p - c) * g[j]) % p;
        }
    }
    r
}

fn irreducible_mod_p(f: &[u64], p: u64) -> bool {
    let mut full = f.to_vec();
    full.push(1);
    let n = f.len();
    for d in 1..=n / 2 {
        let count = p.pow(d as u32);
        for idx in 0..count {
            let mut g = Vec::with_capacity(d + 1);
            let mut x = idx;
            for _ in 0..d {
                g.push(x % p);
                x /= p;
            }
            g.push(1);
            if poly_rem_mod_p(&full, &g, p).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

/// The lexicographically first monic irreducible polynomial of degree `r` over `F_p`.
fn conway_like(p: u64, r: usize) -> Vec<u64> {
    let count = p.pow(r as u32);
    for idx in 0..count {
        let mut f = Vec::with_capacity(r);
        let mut x = idx;
        for _ in 0..r {
            f.push(x % p);
            x /= p;
        }
        if irreducible_mod_p(&f, p) {
            return f;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

struct ElemParser<'a> {
    s: &'a [u8],
    pos: usize,
}

impl ElemParser<'_> {
    fn ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.ws();
        self.s.get(self.pos).copied()
    }

    fn expr(&mut self, r: &Ring) -> Result<Elem> {
        let mut acc = self.term(r)?;
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    let t = self.term(r)?;
                    acc = r.add(&acc, &t);
                }
                Some(b'-') => {
                    self.pos += 1;
                    let t = self.term(r)?;
                    acc = r.sub(&acc, &t);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self, r: &Ring) -> Result<Elem> {
        let mut acc = self.power(r)?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            let t = self.power(r)?;
            acc = r.mul(&acc, &t);
        }
        Ok(acc)
    }

    fn power(&mut self, r: &Ring) -> Result<Elem> {
        let base = self.unary(r)?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            let n = self.uint()?;
            let n = n.to_u64().ok_or(Error::Parse { pos: self.pos, msg: "exponent too large".into() })?;
            return Ok(r.pow(&base, n));
        }
        Ok(base)
    }

    fn unary(&mut self, r: &Ring) -> Result<Elem> {
        if self.peek() == Some(b'-') {
            self.pos += 1;
            let v = self.unary(r)?;
            return Ok(r.neg(&v));
        }
        self.atom(r)
    }

    fn uint(&mut self) -> Result<BigInt> {
        self.ws();
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return parse_err(start, "expected an integer");
        }
        let txt = std::str::from_utf8(&self.s[start..self.pos]).unwrap();
        Ok(txt.parse::<BigInt>().unwrap())
    }

    /// Is the parenthesis at `self.pos` the start of a tuple?
    fn is_tuple(&self) -> bool {
        let mut depth = 0;
        for &c in &self.s[self.pos..] {
            match c {
                b'(' => depth += 1,
                b')' => {
                    depth -= 1;
                    if depth == 0 {
                        return false;
                    }
                }
                b',' if depth == 1 => return true,
                _ => {}
            }
        }
        false
    }

    fn atom(&mut self, r: &Ring) -> Result<Elem> {
        match self.peek() {
            Some(b'(') => {
                if self.is_tuple() {
                    self.pos += 1;
                    let mut parts = Vec::new();
                    for f in 0..r.num_factors() {
                        let fr = r.factor_ring(f);
                        parts.push(self.expr(&fr)?);
                        let want = if f + 1 == r.num_factors() { b')' } else { b',' };
                        if self.peek() != Some(want) {
                            return parse_err(self.pos, format!("expected '{}'", want as char));
                        }
                        self.pos += 1;
                    }
                    return r.from_factors(&parts);
                }
                self.pos += 1;
                let v = self.expr(r)?;
                if self.peek() != Some(b')') {
                    return parse_err(self.pos, "expected ')'");
                }
                self.pos += 1;
                Ok(v)
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.uint()?;
                Ok(r.from_bigint(&n))
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let at = self.pos;
                self.pos += 1;
                r.var_elem(c as char).ok_or(Error::Parse { pos: at, msg: format!("unknown variable '{}'", c as char) })
            }
            Some(_) => parse_err(self.pos, "unexpected character"),
            None => parse_err(self.pos, "unexpected end of input"),
        }
    }
}

struct SpecParser<'a> {
    s: &'a [u8],
    pos: usize,
}

impl SpecParser<'_> {
    fn ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn eat(&mut self, lit: &str) -> bool {
        self.ws();
        if self.s[self.pos..].starts_with(lit.as_bytes()) {
            self.pos += lit.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, lit: &str) -> Result<()> {
        if self.eat(lit) {
            Ok(())
        } else {
            parse_err(self.pos, format!("expected '{lit}'"))
        }
    }

    fn uint(&mut self) -> Result<u64> {
        self.ws();
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        std::str::from_utf8(&self.s[start..self.pos])
            .unwrap()
            .parse::<u64>()
            .or_else(|_| parse_err(start, "expected an integer"))
    }

    fn spec(&mut self) -> Result<RingSpec> {
        let (p, first) = self.factor()?;
        let mut factors = vec![first];
        loop {
            self.ws();
            if self.pos == self.s.len() {
                break;
            }
            if !(self.eat("x") || self.eat("×") || self.eat("*")) {
                return parse_err(self.pos, "expected 'x' between factors");
            }
            let at = self.pos;
            let (q, f) = self.factor()?;
            if q != p {
                return parse_err(at, "all factors must share the prime");
            }
            factors.push(f);
        }
        Ok(RingSpec { p, factors })
    }

    fn factor(&mut self) -> Result<(u64, LocalSpec)> {
        self.ws();
        let at = self.pos;
        if self.eat("GF(") || self.eat("F(") {
            let q = self.uint()?;
            self.expect(")")?;
            let (p, r) = prime_power(q).ok_or(Error::Parse { pos: at, msg: format!("{q} is not a prime power") })?;
            let f = if r == 1 { LocalSpec::nil(1, 1) } else { LocalSpec::unramified(1, conway_like(p, r as usize)) };
            return Ok((p, f));
        }
        self.expect("Zmod(")?;
        let base = self.uint()?;
        let (p, k) = if self.eat("^") {
            let k = self.uint()?;
            (base, k as u32)
        } else {
            let (p, k) = prime_power(base).ok_or(Error::Parse { pos: at, msg: format!("{base} is not a prime power") })?;
            (p, k)
        };
        if !is_prime(p) {
            return parse_err(at, format!("{p} is not prime"));
        }
        self.expect(")")?;
        if !self.eat("[") {
            return Ok((p, LocalSpec::nil(k, 1)));
        }
        self.ws();
        let var = match self.s.get(self.pos) {
            Some(c) if c.is_ascii_alphabetic() => *c as char,
            _ => return parse_err(self.pos, "expected a variable name"),
        };
        self.pos += 1;
        self.expect("]")?;
        self.expect("/")?;
        self.expect("(")?;
        let rel_at = self.pos;
        let rel = self.int_poly(var)?;
        self.expect(")")?;
        let e = rel.len() - 1;
        if e == 0 || rel[e] != 1 {
            return parse_err(rel_at, "relation must be monic of positive degree");
        }
        if rel[..e].iter().all(|&c| c == 0) {
            return Ok((p, LocalSpec::nil(k, e).with_var(var)));
        }
        let shifted: Vec<i128> = (0..=e)
            .map(|j| {
                let b = binom_i128(e as u64, j as u64);
                if (e - j) % 2 == 1 {
                    -b
                } else {
                    b
                }
            })
            .collect();
        if rel == shifted {
            return Ok((p, LocalSpec::shifted(k, e, var)));
        }
        let f: Vec<u64> = rel[..e].iter().map(|&c| c.rem_euclid(p as i128) as u64).collect();
        if e < 2 || !irreducible_mod_p(&f, p) {
            return parse_err(rel_at, "relation must be v^e, (v-1)^e, or irreducible mod p");
        }
        Ok((p, LocalSpec::unramified(k, f).with_var(var)))
    }

    /// Integer polynomial in `var`, coefficients low degree first.
    fn int_poly(&mut self, var: char) -> Result<Vec<i128>> {
        let mut acc = self.ip_term(var)?;
        loop {
            if self.eat("+") {
                let t = self.ip_term(var)?;
                acc = ip_add(&acc, &t, 1);
            } else if self.eat("-") {
                let t = self.ip_term(var)?;
                acc = ip_add(&acc, &t, -1);
            } else {
                return Ok(acc);
            }
        }
    }

    fn ip_term(&mut self, var: char) -> Result<Vec<i128>> {
        let mut acc = self.ip_power(var)?;
        while self.eat("*") {
            let t = self.ip_power(var)?;
            acc = ip_mul(&acc, &t);
        }
        Ok(acc)
    }

    fn ip_power(&mut self, var: char) -> Result<Vec<i128>> {
        let base = self.ip_atom(var)?;
        if self.eat("^") {
            let n = self.uint()?;
            let mut acc = vec![1];
            for _ in 0..n {
                acc = ip_mul(&acc, &base);
            }
            return Ok(acc);
        }
        Ok(base)
    }

    fn ip_atom(&mut self, var: char) -> Result<Vec<i128>> {
        self.ws();
        match self.s.get(self.pos) {
            Some(b'(') => {
                self.pos += 1;
                let v = self.int_poly(var)?;
                self.expect(")")?;
                Ok(v)
            }
            Some(c) if c.is_ascii_digit() => Ok(vec![self.uint()? as i128]),
            Some(&c) if c as char == var => {
                self.pos += 1;
                Ok(vec![0, 1])
            }
            _ => parse_err(self.pos, "expected a polynomial term"),
        }
    }
}

fn ip_add(a: &[i128], b: &[i128], sign: i128) -> Vec<i128> {
    let mut r = vec![0; a.len().max(b.len())];
    for (i, &c) in a.iter().enumerate() {
        r[i] += c;
    }
    for (i, &c) in b.iter().enumerate() {
        r[i] += sign * c;
    }
    while r.len() > 1 && *r.last().unwrap() == 0 {
        r.pop();
    }
    r
}

fn ip_mul(a: &[i128], b: &[i128]) -> Vec<i128> {
    let mut r = vec![0; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            r[i + j] += x * y;
        }
    }
    while r.len() > 1 && *r.last().unwrap() == 0 {
        r.pop();
    }
    r
}

pub(crate) fn binom_i128(n: u64, k: u64) -> i128 {
    let mut r: i128 = 1;
    for i in 0..k {
        r = r * (n - i) as i128 / (i + 1) as i128;
    }
    r
}

/// What a homomorphism does to coefficients and to the generator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum HomKind {
    /// Reduce `K` and/or `e`, factor by factor.
    Reduction,
    /// Endomorphism sending `t` to the given element; it must reduce to `t^p` modulo `p`.
    FrobeniusLift(Elem),
    /// Send `t` to the given element of the target, factor by factor.
    Specialization(Elem),
    /// Project onto the given factor.
    FactorProjection(usize),
}

#[derive(Clone, Debug)]
pub struct RingHom {
    source: Ring,
    target: Ring,
    kind: HomKind,
}

impl RingHom {
    pub fn source(&self) -> &Ring {
        &self.source
    }
    pub fn target(&self) -> &Ring {
        &self.target
    }
    pub fn kind(&self) -> &HomKind {
        &self.kind
    }

    pub fn reduction(source: &Ring, target: &Ring) -> Result<RingHom> {
        let (s, t) = (source.spec(), target.spec());
        if s.p != t.p || s.factors.len() != t.factors.len() {
            return Err(Error::InvalidHom("reduction needs matching prime and factor count".into()));
        }
        for (a, b) in s.factors.iter().zip(&t.factors) {
            let ok = b.k <= a.k
                && match (&a.modulus, &b.modulus) {
                    (Modulus::Nil(ea), Modulus::Nil(eb)) => eb <= ea && a.shifted == b.shifted,
                    (Modulus::Poly(fa), Modulus::Poly(fb)) => fa == fb,
                    _ => false,
                };
            if !ok {
                return Err(Error::InvalidHom(format!("cannot reduce {s} to {t}")));
            }
        }
        Self::finish(source, target, HomKind::Reduction)
    }

    pub fn frobenius_lift(ring: &Ring, image_of_t: Elem) -> Result<RingHom> {
        if !ring.contains(&image_of_t) {
            return Err(Error::RingMismatch);
        }
        let modp = ring.mod_p()?;
        let tp = modp.pow(&modp.gen(), ring.p());
        if modp.reduce_from(&image_of_t) != tp {
            return Err(Error::InvalidHom("frobenius lift must send t to t^p modulo p".into()));
        }
        if !relation_holds(ring, ring, &image_of_t) {
            return Err(Error::InvalidHom("image of t violates the defining relation".into()));
        }
        let h = Self::finish(ring, ring, HomKind::FrobeniusLift(image_of_t))?;
        // x -> x^p modulo p on samples
        for a in sample_elements(ring, 64) {
            let lhs = modp.reduce_from(&h.apply(&a));
            let rhs = modp.reduce_from(&ring.pow(&a, ring.p()));
            if lhs != rhs {
                return Err(Error::InvalidHom(format!("phi({}) is not a^p mod p", ring.fmt_elem(&a))));
            }
        }
        Ok(h)
    }

    pub fn specialization(source: &Ring, target: &Ring, value: Elem) -> Result<RingHom> {
        let (s, t) = (source.spec(), target.spec());
        if s.p != t.p || s.factors.len() != t.factors.len() || !target.contains(&value) {
            return Err(Error::InvalidHom("specialization needs matching prime and factor count".into()));
        }
        for (a, b) in s.factors.iter().zip(&t.factors) {
            if b.k > a.k || !matches!(a.modulus, Modulus::Nil(_)) {
                return Err(Error::InvalidHom(format!("cannot specialize {s} into {t}")));
            }
        }
        if !relation_holds(source, target, &value) {
            return Err(Error::InvalidHom("value violates the defining relation".into()));
        }
        Self::finish(source, target, HomKind::Specialization(value))
    }

    pub fn factor_projection(source: &Ring, f: usize) -> Result<RingHom> {
        if f >= source.num_factors() {
            return Err(Error::InvalidHom(format!("no factor {f}")));
        }
        Self::finish(source, &source.factor_ring(f), HomKind::FactorProjection(f))
    }

    fn finish(source: &Ring, target: &Ring, kind: HomKind) -> Result<RingHom> {
        let h = RingHom { source: source.clone(), target: target.clone(), kind };
        if h.apply(&source.one()) != target.one() {
            return Err(Error::InvalidHom("not unital".into()));
        }
        let xs = sample_elements(source, 24);
        for a in &xs {
            for b in &xs {
                let sum = h.apply(&source.add(a, b)) == target.add(&h.apply(a), &h.apply(b));
                let prod = h.apply(&source.mul(a, b)) == target.mul(&h.apply(a), &h.apply(b));
                if !(sum && prod) {
                    return Err(Error::InvalidHom("not additive and multiplicative on samples".into()));
                }
            }
        }
        Ok(h)
    }

    pub fn apply(&self, a: &Elem) -> Elem {
        match &self.kind {
            HomKind::Reduction => {
                let mut c = Vec::with_capacity(self.target.width());
                for f in 0..self.source.num_factors() {
                    let part = self.source.project(a, f);
                    let e = self.target.spec().factors[f].degree();
                    c.extend_from_slice(&part.0[..e]);
                }
                self.target.reduce_from(&Elem(c))
            }
            HomKind::FrobeniusLift(g) => eval_in(&self.source, &self.target, a, g),
            HomKind::Specialization(v) => eval_in(&self.source, &self.target, a, v),
            HomKind::FactorProjection(f) => self.source.project(a, *f),
        }
    }

    /// Apply `n` times (endomorphisms only).
    pub fn iterate(&self, a: &Elem, n: usize) -> Elem {
        let mut x = a.clone();
        for _ in 0..n {
            x = self.apply(&x);
        }
        x
    }
}

/// Evaluate `a(t)` at `t = v`, factor by factor, reducing coefficients into `target`.
fn eval_in(source: &Ring, target: &Ring, a: &Elem, v: &Elem) -> Elem {
    let mut parts = Vec::with_capacity(source.num_factors());
    for f in 0..source.num_factors() {
        let tr = target.factor_ring(f);
        let vf = target.project(v, f);
        let af = source.project(a, f);
        let mut acc = tr.zero();
        for &c in af.0.iter().rev() {
            acc = tr.mul(&acc, &vf);
            acc = tr.add(&acc, &tr.from_int(c as i64));
        }
        parts.push(acc);
    }
    target.from_factors(&parts).unwrap()
}

/// Does `v` (in `target`) satisfy the defining relation of each factor of `source`?
fn relation_holds(source: &Ring, target: &Ring, v: &Elem) -> bool {
    (0..source.num_factors()).all(|f| {
        let tr = target.factor_ring(f);
        let vf = target.project(v, f);
        match &source.spec().factors[f].modulus {
            Modulus::Nil(e) => tr.is_zero(&tr.pow(&vf, *e as u64)),
            Modulus::Poly(c) => {
                let mut acc = tr.one();
                for &ci in c.iter().rev() {
                    acc = tr.add(&tr.mul(&acc, &vf), &tr.from_int(ci as i64));
                }
                tr.is_zero(&acc)
            }
        }
    })
}

/// All elements if there are at most `n`, otherwise a fixed pseudo-random sample of size `n`.
pub fn sample_elements(ring: &Ring, n: usize) -> Vec<Elem> {
    if ring.cardinality() <= n as u128 {
        return ring.elements_bounded(n as u64).unwrap().collect();
    }
    let mut rng = crate::sampling::rng_for(crate::sampling::DEFAULT_SEED, "ring-sample");
    let mut out = vec![ring.zero(), ring.one(), ring.gen()];
    while out.len() < n {
        out.push(ring.random(&mut rng));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(s: &str) -> Ring {
        Ring::parse(s).unwrap()
    }

    #[test]
    fn cardinalities() {
        assert_eq!(r("Zmod(2^2)").cardinality(), 4);
        assert_eq!(r("Zmod(3)[t]/(t^2)").cardinality(), 9);
        assert_eq!(r("Zmod(2) x Zmod(2^2)").cardinality(), 8);
        assert_eq!(Ring::field(4).unwrap().cardinality(), 4);
    }

    #[test]
    fn basic_arithmetic() {
        let z4 = r("Zmod(4)");
        assert_eq!(z4.add(&z4.from_int(3), &z4.from_int(3)), z4.from_int(2));
        let f2t = r("Zmod(2)[t]/(t^2)");
        let t = f2t.gen();
        assert!(f2t.is_zero(&f2t.mul(&t, &t)));
        let z9 = r("Zmod(3^2)");
        assert_eq!(z9.neg(&z9.from_int(4)), z9.from_int(5));
    }

    #[test]
    fn units_and_nilpotents() {
        let z4 = r("Zmod(4)");
        assert!(z4.is_unit(&z4.from_int(3)));
        assert!(z4.is_nilpotent(&z4.from_int(2)));
        let f3t = r("Zmod(3)[t]/(t^2)");
        assert!(f3t.is_unit(&f3t.parse_elem("1+t").unwrap()));
        let prod = r("Zmod(2) x Zmod(4)");
        assert!(!prod.is_unit(&prod.parse_elem("(1,2)").unwrap()));
        assert!(prod.is_unit(&prod.parse_elem("(1,3)").unwrap()));
    }

    #[test]
    fn enumeration_order() {
        let f2 = r("Zmod(2)");
        let v: Vec<String> = f2.elements().unwrap().map(|a| f2.fmt_elem(&a)).collect();
        assert_eq!(v, ["0", "1"]);
        let z4 = r("Zmod(4)");
        let v: Vec<String> = z4.elements().unwrap().map(|a| z4.fmt_elem(&a)).collect();
        assert_eq!(v, ["0", "1", "2", "3"]);
        assert_eq!(r("Zmod(2)[t]/(t^2)").elements().unwrap().count(), 4);
        assert!(matches!(r("Zmod(2^21)").elements(), Err(Error::BoundExceeded { .. })));
    }

    #[test]
    fn homomorphisms() {
        let a = r("Zmod(2^3)[q]/((q-1)^4)");
        let q = a.parse_elem("q").unwrap();
        let phi = RingHom::frobenius_lift(&a, a.sub(&a.pow(&q, 2), &a.one())).unwrap();
        assert_eq!(phi.apply(&q), a.pow(&q, 2));
        let z8 = r("Zmod(8)");
        let spec = RingHom::specialization(&a, &z8, z8.zero()).unwrap();
        assert_eq!(spec.apply(&a.parse_elem("1+q").unwrap()), z8.from_int(2));
        let z2 = r("Zmod(2)");
        let red = RingHom::reduction(&z8, &z2).unwrap();
        assert_eq!(red.apply(&z8.from_int(5)), z2.one());
        assert!(RingHom::frobenius_lift(&a, a.gen()).is_err());
    }

    #[test]
    fn parse_and_print_roundtrip() {
        for s in ["Zmod(2^4)", "Zmod(3^1)[t]/(t^2)", "Zmod(2^3)[q]/((q-1)^4)", "Zmod(2^1) x Zmod(2^2)", "Zmod(2^1)[t]/(t^2+t+1)"] {
            assert_eq!(r(s).spec().to_string(), s);
        }
        let a = r("Zmod(2^3)[q]/((q-1)^4)");
        for x in a.elements_bounded(1 << 12).unwrap().step_by(37) {
            assert_eq!(a.parse_elem(&a.fmt_elem(&x)).unwrap(), x);
        }
        assert!(matches!(a.parse_elem("1+*"), Err(Error::Parse { pos: 2, .. })));
        assert!(Ring::parse("Zmod(6)").is_err());
    }

    #[test]
    fn field_inverses() {
        let f4 = Ring::field(4).unwrap();
        for a in f4.elements().unwrap().filter(|a| !f4.is_zero(a)) {
            assert_eq!(f4.mul(&a, &f4.inv(&a).unwrap()), f4.one());
        }
    }
}
