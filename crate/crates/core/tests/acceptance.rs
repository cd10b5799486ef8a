//! End-to-end acceptance run: one line per criterion, nonzero exit on failure.
//!
//! Each criterion runs the relevant registry checks and adds a few direct
//! oracles computed here from first principles, all at exact equality.

use std::process::ExitCode;
use std::time::Instant;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use wittforge::checks;
use wittforge::coeq;
use wittforge::prism::{self, PrismKind};
use wittforge::sampling::DEFAULT_SEED;
use wittforge::sharp;
use wittforge::sigma;
use wittforge::witt::all_vectors;
use wittforge::{Ring, WittVector};

type Outcome = Result<(), String>;

fn registry(ids: &[&str]) -> Outcome {
    for id in ids {
        let reports = checks::run(id, DEFAULT_SEED).map_err(|e| e.to_string())?;
        for r in reports {
            if !r.passed() {
                return Err(format!("{} failed {}/{}: {:?}", r.id, r.failures, r.cases, r.counterexamples));
            }
        }
    }
    Ok(())
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Outcome {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn e<T, E: std::fmt::Display>(r: Result<T, E>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn int(r: &Ring, a: &wittforge::Elem) -> i64 {
    r.fmt_elem(a).parse().expect("an integer residue")
}

/// Sums and products in `W_2(F_3)` from the ghost equations
/// `s_0 = a_0 + b_0`, `3 s_1 = a_0^3 + b_0^3 - s_0^3 + 3 (a_1 + b_1)` over the integers.
fn criterion_1() -> Outcome {
    registry(&["W-ring-laws", "W-strategy-equivalence"])?;
    let f3 = e(Ring::zmod(3, 1))?;
    let all = e(all_vectors(&f3, 2, 0))?;
    ensure(all.len() == 9, || format!("W_2(F_3) has {} elements", all.len()))?;
    for x in &all {
        for y in &all {
            let (a0, a1) = (int(&f3, x.comp(0)), int(&f3, x.comp(1)));
            let (b0, b1) = (int(&f3, y.comp(0)), int(&f3, y.comp(1)));
            let carry = (a0.pow(3) + b0.pow(3) - (a0 + b0).pow(3)) / 3;
            let sum = e(WittVector::from_ints(&f3, &[a0 + b0, a1 + b1 + carry]))?;
            let prod = e(WittVector::from_ints(&f3, &[a0 * b0, a1 * b0.pow(3) + a0.pow(3) * b1]))?;
            ensure(e(x.add(y))? == sum, || format!("{x} + {y}"))?;
            ensure(e(x.mul(y))? == prod, || format!("{x} * {y}"))?;
        }
    }
    Ok(())
}

fn criterion_2() -> Outcome {
    registry(&["W-FV-p", "W-projection-formula", "W-teichmuller", "L-invertible-in-W"])?;
    // in characteristic 2, V(1) * V(1) = V(F(V(1))) = V(2) = (0, 0, 1)
    let f2 = e(Ring::zmod(2, 1))?;
    let v1 = e(e(WittVector::from_ints(&f2, &[1, 0]))?.verschiebung())?;
    ensure(e(v1.mul(&v1))? == e(WittVector::from_ints(&f2, &[0, 0, 1]))?, || "V(1)^2 over F_2".into())
}

/// `p w_i(a) = p^(2 p^i)` modulo `p^6` for the integer lifts of the components.
fn criterion_3() -> Outcome {
    registry(&["B-p2-over-p"])?;
    for p in [2u64, 3] {
        let a = e(sigma::p2_over_p(p, 4, 6))?;
        let r = a.ring();
        let modulus = BigInt::from(p).pow(6);
        let xs: Vec<BigInt> = a.comps().iter().map(|c| BigInt::from(int(r, c))).collect();
        for i in 0..4u32 {
            let mut w = BigInt::zero();
            for (j, x) in xs.iter().enumerate().take(i as usize + 1) {
                w += BigInt::from(p).pow(j as u32) * x.pow(p.pow(i - j as u32) as u32);
            }
            let lhs = (BigInt::from(p) * w) % &modulus;
            let rhs = BigInt::from(p).pow(2 * p.pow(i) as u32) % &modulus;
            ensure(lhs == rhs, || format!("p = {p}, ghost component {i}"))?;
        }
    }
    Ok(())
}

fn criterion_4() -> Outcome {
    registry(&["L-contracting-1", "L-contracting-2"])?;
    for k in [2u32, 3] {
        let r = e(Ring::zmod(2, k))?;
        let mut count = 0;
        for x in e(all_vectors(&r, 4, 0))? {
            let (x0, x1) = (int(&r, x.comp(0)), int(&r, x.comp(1)));
            if x0 % 2 != 0 || x1 % 2 != 1 {
                continue;
            }
            count += 1;
            let (n, u) = e(sigma::contract_to_p(&x))?;
            let want = if x0 == 0 { 1 } else { (1..).find(|&m: &u32| (x0 as u64).pow(1 << m) % (1 << k) == 0).unwrap() };
            ensure(n as u32 == want, || format!("{x}: n = {n}, expected {want}"))?;
            ensure(u.is_unit() && e(x.frobenius_pow(n))? == e(u.mul_int(2))?, || format!("{x}: F^{n}(x) != 2 u"))?;
        }
        ensure(count == 1usize << (4 * k - 2), || format!("{count} primitive vectors over Z/2^{k}"))?;
    }
    let z4 = e(Ring::zmod(2, 2))?;
    let one = WittVector::one(&z4, 3);
    ensure(e(sigma::unit_to_one(&one))? == 0, || "unit_to_one(1)".into())
}

fn criterion_5() -> Outcome {
    registry(&[
        "S-g-group-law",
        "S-action-primitivity",
        "E-F-vx-gamma-Vy",
        "S-fprime-j-minus",
        "S-loci",
        "S-xi-transformation",
        "S-char-p-affine-linear",
    ])?;
    let z4 = e(Ring::zmod(2, 2))?;
    let mut primitive = 0;
    for u in e(all_vectors(&z4, 2, 0))? {
        if e(sigma::is_primitive(&u))? {
            primitive += 1;
            ensure(e(e(sigma::j_minus(&u))?.f_prime())? == u, || format!("F'(j_-({u}))"))?;
        }
    }
    ensure(primitive == 4, || format!("{primitive} primitive vectors in W_2(Z/4)"))
}

fn criterion_6() -> Outcome {
    registry(&["K-coeq-closed-form", "K-gamma-double-prime", "K-nodal-model"])?;
    let inst = e(coeq::toy_instance(2))?;
    let brute = e(coeq::coeq_bruteforce(&inst, (-3, 3), 8))?;
    let c = &inst.c;
    let plus = c.object_index("(1,0)").unwrap();
    let minus = c.object_index("(0,1)").unwrap();
    for c1 in 0..c.num_objects() {
        for c2 in 0..c.num_objects() {
            for n in -3..=3i64 {
                let want = match n {
                    n if n < -1 => 0,
                    -1 => usize::from(c1 == plus && c2 == minus),
                    0 => c.hom(c1, c2, 0).len(),
                    _ => 1,
                };
                ensure(brute.hom_count(c1, c2, n) == want, || format!("Mor^{n}({c1}, {c2})"))?;
            }
        }
    }
    for q in [2u64, 3] {
        e(coeq::gamma_double_prime(q, 3))?;
    }
    for q in [2u64, 3, 4] {
        let (t, notes) = e(coeq::nodal_model_check(q, 4))?;
        ensure(t.passed() && notes["object_classes"] == 2 && notes["nodal_points"] == q as usize, || format!("nodal counts at q = {q}"))?;
    }
    Ok(())
}

fn criterion_7() -> Outcome {
    registry(&["L-not-additive", "L-Gm-sharp-mod-p", "L-annihilators"])?;
    for (p, n) in [(2u64, 1u32), (2, 2), (3, 1)] {
        let d = e(sharp::dp_defect(p, n))?;
        ensure(!d.is_zero() && e(d.content())?.is_one(), || format!("content at p = {p}, n = {n}"))?;
    }
    // Delta(u_1) = u_1 (x) 1 + 1 (x) u_1 + u_0 (x) u_0 for p = 2
    let d = e(sharp::dp_comult(2, 1))?;
    ensure(d.coeff(&[vec![1], vec![1]]).is_one(), || "u_0 (x) u_0 coefficient".into())
}

fn criterion_8() -> Outcome {
    registry(&["B-qdr-delta-laws", "B-joyal-split", "B-distinguished", "B-economic"])?;
    // delta(q) = 0 and delta(p) = (p - p^p)/p on the q-de Rham prism
    let m = e(prism::make_prism(PrismKind::QdeRham, 2, 5, 4))?;
    let (lo, dq) = e(m.delta(&m.q()))?;
    ensure(lo.is_zero(&dq), || "delta(q) != 0".into())?;
    let (lo, d2) = e(m.delta(&m.ring().from_int(2)))?;
    ensure(d2 == lo.from_int(-1), || "delta(2) != -1".into())
}

fn criterion_9() -> Outcome {
    registry(&["L-perfect-normal-form"])?;
    for q in [2u64, 4] {
        let f = e(Ring::field(q))?;
        let all = e(all_vectors(&f, 3, 0))?;
        let prim = all.iter().filter(|x| f.is_zero(x.comp(0)) && f.is_unit(x.comp(1))).count();
        ensure(prim == (q as usize - 1) * q as usize, || format!("{prim} primitive vectors in W_3(F_{q})"))?;
    }
    Ok(())
}

fn criterion_10() -> Outcome {
    registry(&["C-pi-F-hom"])
}

fn criterion_11() -> Outcome {
    let first = checks::run_all(DEFAULT_SEED);
    let a = e(serde_json::to_string(&first))?;
    let b = e(serde_json::to_string(&checks::run_all(DEFAULT_SEED)))?;
    ensure(a == b, || "registry JSON differs between runs".into())?;
    let failed = first.into_iter().filter(|r| !r.passed()).map(|r| r.id).collect::<Vec<_>>();
    ensure(failed.is_empty(), || format!("failing checks: {failed:?}"))
}

fn main() -> ExitCode {
    let criteria: [(u32, fn() -> Outcome); 11] = [
        (1, criterion_1),
        (2, criterion_2),
        (3, criterion_3),
        (4, criterion_4),
        (5, criterion_5),
        (6, criterion_6),
        (7, criterion_7),
        (8, criterion_8),
        (9, criterion_9),
        (10, criterion_10),
        (11, criterion_11),
    ];
    let mut ok = true;
    for (n, f) in criteria {
        let start = Instant::now();
        let out = f();
        let secs = start.elapsed().as_secs_f64();
        match out {
            Ok(()) => println!("criterion {n}: PASS ({secs:.1}s)"),
            Err(msg) => {
                ok = false;
                println!("criterion {n}: FAIL ({secs:.1}s) {msg}");
            }
        }
    }
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
