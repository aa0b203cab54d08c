//! Acceptance suite. Runs every criterion, prints one line per criterion and
//! exits nonzero if any fails. Oracles here are written independently of the
//! library code paths they check.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use frey_core::cubic::BinaryCubic;
use frey_core::curve::{frey_curve, frey_invariants, KFraction, ReductionType, WeierstrassCurve};
use frey_core::nf::{
    factor_rational_prime, primes_up_to_norm, AlgInt, IdealClassGroup, PrimeIdeal, QuadField,
};
use frey_core::pipeline::audit::{
    EQUATION_HOLDS, FAKE_CURVE_EXCLUDED, GCD_SUPPORT_OK, Q_NOT_DIVIDING_Z,
};
use frey_core::pipeline::{
    audit_solution, build_sf, distinguishing_prime, principal_generator, theorem_hypothesis,
    tm_search_first, AuditInput, ExceptionalSet, SearchOptions, Verdict,
};
use frey_core::Error;
use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn rand_elem(k: QuadField, r: &mut ChaCha8Rng, bound: i64) -> AlgInt {
    if k.is_rationals() {
        k.int(r.random_range(-bound..=bound))
    } else {
        k.elem(
            r.random_range(-bound..=bound),
            r.random_range(-bound..=bound),
        )
        .unwrap()
    }
}

fn rand_cubic(k: QuadField, r: &mut ChaCha8Rng, bound: i64) -> BinaryCubic {
    loop {
        let cs = [0; 4].map(|_| rand_elem(k, r, bound));
        let f = BinaryCubic::new(cs).unwrap();
        if !f.discriminant().is_zero() {
            return f;
        }
    }
}

// ---- polynomial oracle over coefficient vectors, x^{n-i} y^i ----

type Poly = Vec<AlgInt>;

fn padd(a: &Poly, b: &Poly) -> Poly {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

fn pscale(a: &Poly, c: &AlgInt) -> Poly {
    a.iter().map(|x| x * c).collect()
}

fn pmul(a: &Poly, b: &Poly) -> Poly {
    let k = a[0].field();
    let mut out = vec![k.zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] = &out[i + j] + &(x * y);
        }
    }
    out
}

fn dx(a: &Poly) -> Poly {
    let n = a.len() - 1;
    let k = a[0].field();
    (0..n).map(|i| &a[i] * &k.int((n - i) as i64)).collect()
}

fn dy(a: &Poly) -> Poly {
    let k = a[0].field();
    (1..a.len()).map(|i| &a[i] * &k.int(i as i64)).collect()
}

fn hessian_oracle(f: &Poly) -> Poly {
    let (fxx, fyy, fxy) = (dx(&dx(f)), dy(&dy(f)), dx(&dy(f)));
    let k = f[0].field();
    let four_h = padd(&pmul(&fxx, &fyy), &pscale(&pmul(&fxy, &fxy), &k.int(-1)));
    four_h
        .iter()
        .map(|c| c.div_int_exact(&BigInt::from(4)).unwrap())
        .collect()
}

fn disc_oracle(f: &Poly) -> AlgInt {
    let k = f[0].field();
    let (a, b, c, d) = (&f[0], &f[1], &f[2], &f[3]);
    let m = |xs: &[&AlgInt], n: i64| xs.iter().fold(k.int(n), |acc, x| &acc * *x);
    let terms = [
        m(&[b, b, c, c], 1),
        m(&[a, c, c, c], -4),
        m(&[b, b, b, d], -4),
        m(&[a, a, d, d], -27),
        m(&[a, b, c, d], 18),
    ];
    terms.iter().fold(k.zero(), |acc, t| &acc + t)
}

/// Fraction-free Gaussian elimination.
fn bareiss_det(mut m: Vec<Vec<AlgInt>>) -> AlgInt {
    let n = m.len();
    let k = m[0][0].field();
    let mut sign = false;
    let mut prev = k.one();
    for i in 0..n {
        if m[i][i].is_zero() {
            match (i + 1..n).find(|&r| !m[r][i].is_zero()) {
                Some(r) => {
                    m.swap(i, r);
                    sign = !sign;
                }
                None => return k.zero(),
            }
        }
        for r in i + 1..n {
            for c in i + 1..n {
                let num = &(&m[r][c] * &m[i][i]) - &(&m[r][i] * &m[i][c]);
                m[r][c] = num.div_exact(&prev).expect("Bareiss division is exact");
            }
        }
        prev = m[i][i].clone();
    }
    if sign {
        -m[n - 1][n - 1].clone()
    } else {
        m[n - 1][n - 1].clone()
    }
}

fn sylvester(h: &Poly, f: &Poly) -> Vec<Vec<AlgInt>> {
    let k = h[0].field();
    let size = h.len() + f.len() - 2;
    let mut rows = Vec::new();
    for (p, copies) in [(h, f.len() - 1), (f, h.len() - 1)] {
        for s in 0..copies {
            let mut row = vec![k.zero(); size];
            for (i, c) in p.iter().enumerate() {
                row[s + i] = c.clone();
            }
            rows.push(row);
        }
    }
    rows
}

// ---- criterion 1 and 2 ----

fn syzygy_corpus() -> Vec<BinaryCubic> {
    let mut r = rng(1);
    let k5 = QuadField::new(-5).unwrap();
    let mut out: Vec<BinaryCubic> = (0..1000)
        .map(|_| rand_cubic(QuadField::rationals(), &mut r, 50))
        .collect();
    out.extend((0..1000).map(|_| rand_cubic(k5, &mut r, 50)));
    out
}

fn criterion_1(corpus: &[BinaryCubic]) -> Outcome {
    let start = Instant::now();
    let mut bad = 0;
    for f in corpus {
        let k = f.field();
        let fp: Poly = f.coeffs().to_vec();
        let h = hessian_oracle(&fp);
        let g = padd(
            &pmul(&dx(&fp), &dy(&h)),
            &pscale(&pmul(&dy(&fp), &dx(&h)), &k.int(-1)),
        );
        let disc = disc_oracle(&fp);
        let lhs = padd(
            &padd(&pscale(&pmul(&pmul(&h, &h), &h), &k.int(4)), &pmul(&g, &g)),
            &pscale(&pmul(&fp, &fp), &(&k.int(27) * &disc)),
        );
        let lib_ok = f.syzygy_residual().is_zero()
            && f.hessian().coeffs() == h.as_slice()
            && f.covariant_g().coeffs() == g.as_slice()
            && f.discriminant() == disc;
        if !lhs.iter().all(AlgInt::is_zero) || !lib_ok {
            bad += 1;
        }
    }
    let t = start.elapsed();
    outcome(
        bad == 0 && t < Duration::from_secs(10),
        format!(
            "syzygy 4H^3 + G^2 + 27 Disc F^2 = 0 on {} cubics (1000 over Z, 1000 over Z[sqrt(-5)]): {bad} nonzero residuals, tolerance exact, {:.2}s (limit 10s)",
            corpus.len(),
            t.as_secs_f64()
        ),
    )
}

fn criterion_2(corpus: &[BinaryCubic]) -> Outcome {
    let mut bad = 0;
    for f in corpus {
        let fp: Poly = f.coeffs().to_vec();
        let h = hessian_oracle(&fp);
        let det = bareiss_det(sylvester(&h, &fp));
        let minus_d2 = -(&f.discriminant() * &f.discriminant());
        if det != minus_d2 || f.resultant_hf() != minus_d2 {
            bad += 1;
        }
    }
    outcome(
        bad == 0,
        format!(
            "Res(H, F) = -Disc^2 on {} cubics, Sylvester determinant by Bareiss elimination: {bad} mismatches, tolerance exact",
            corpus.len()
        ),
    )
}

// ---- criterion 3 ----

struct Tate {
    c4: AlgInt,
    c6: AlgInt,
    delta: AlgInt,
}

/// General Weierstrass invariants with a1 = a3 = 0 substituted as values.
fn tate(k: QuadField, a: [&AlgInt; 5]) -> Tate {
    let [a1, a2, a3, a4, a6] = a;
    let n = |v: i64| k.int(v);
    let b2 = &(a1 * a1) + &(&n(4) * a2);
    let b4 = &(&n(2) * a4) + &(a1 * a3);
    let b6 = &(a3 * a3) + &(&n(4) * a6);
    let b8 = &(&(&(&(&(a1 * a1) * a6) + &(&(&n(4) * a2) * a6)) - &(&(a1 * a3) * a4))
        + &(&(a2 * a3) * a3))
        - &(a4 * a4);
    let c4 = &(&b2 * &b2) - &(&n(24) * &b4);
    let c6 = &(&(&n(-1) * &(&(&b2 * &b2) * &b2)) + &(&(&n(36) * &b2) * &b4)) - &(&n(216) * &b6);
    let delta = &(&(&(&n(-1) * &(&(&b2 * &b2) * &b8)) - &(&n(8) * &(&(&b4 * &b4) * &b4)))
        - &(&n(27) * &(&b6 * &b6)))
        + &(&(&(&n(9) * &b2) * &b4) * &b6);
    Tate { c4, c6, delta }
}

fn criterion_3() -> Outcome {
    let mut r = rng(3);
    let fields = [
        QuadField::rationals(),
        QuadField::new(-5).unwrap(),
        QuadField::new(-7).unwrap(),
    ];
    let mut bad = 0;
    let mut identity_bad = 0;
    let mut done = 0;
    while done < 1000 {
        let k = fields[done % fields.len()];
        let f = rand_cubic(k, &mut r, 20);
        let (x, y) = (rand_elem(k, &mut r, 20), rand_elem(k, &mut r, 20));
        if f.evaluate(&x, &y).is_zero() {
            continue;
        }
        done += 1;
        let e = frey_curve(&f, &x, &y).unwrap();
        let closed = frey_invariants(&f, &x, &y).unwrap();
        let z = k.zero();
        let std = tate(k, [&z, &e.a2, &z, &e.a4, &e.a6]);
        let j_std = KFraction::new(&(&std.c4 * &std.c4) * &std.c4, &std.delta);
        if closed.c4 != std.c4
            || closed.c6 != std.c6
            || closed.delta != std.delta
            || closed.j != j_std
        {
            bad += 1;
        }
        let lhs = &(&(&std.c4 * &std.c4) * &std.c4) - &(&std.c6 * &std.c6);
        if lhs != &k.int(1728) * &std.delta {
            identity_bad += 1;
        }
    }
    let q = QuadField::rationals();
    let golden = frey_invariants(
        &BinaryCubic::from_ints(q, [1, 0, 0, 1]),
        &q.int(1),
        &q.int(0),
    )
    .unwrap();
    let golden_ok = golden.c4 == q.int(0)
        && golden.c6 == q.int(-864)
        && golden.delta == q.int(-432)
        && golden.j.as_ref().is_some_and(KFraction::is_zero);
    outcome(
        bad == 0 && identity_bad == 0 && golden_ok,
        format!(
            "Frey invariants vs general Weierstrass formulas on {done} (F, x, y): {bad} mismatches, {identity_bad} failures of c4^3 - c6^2 = 1728 Disc; golden x^3 + y^3 at (1, 0) gives (0, -864, -432, 0): {golden_ok}; tolerance exact"
        ),
    )
}

// ---- criterion 4 ----

fn criterion_4() -> Outcome {
    let start = Instant::now();
    let mut r = rng(4);
    let fields: Vec<QuadField> = [1i64, -1, -2, -3, -5, -7, -23]
        .iter()
        .map(|&d| {
            if d == 1 {
                QuadField::rationals()
            } else {
                QuadField::new(d).unwrap()
            }
        })
        .collect();
    let prime_lists: Vec<Vec<PrimeIdeal>> = fields
        .iter()
        .map(|&k| primes_up_to_norm(k, 10_000))
        .collect();
    let mut instances = Vec::new();
    while instances.len() < 200 {
        let i = instances.len() % fields.len();
        let k = fields[i];
        let f = rand_cubic(k, &mut r, 10);
        let (x, y) = (rand_elem(k, &mut r, 30), rand_elem(k, &mut r, 30));
        if f.evaluate(&x, &y).is_zero() {
            continue;
        }
        instances.push((i, f, x, y));
    }
    let results: Vec<(usize, usize, usize)> = instances
        .par_iter()
        .map(|(i, f, x, y)| {
            let s = build_sf(f, 1000).unwrap();
            let e = frey_curve(f, x, y).unwrap();
            let (mut checked, mut additive, mut other) = (0, 0, 0);
            for p in &prime_lists[*i] {
                if s.contains(p) || (p.divides(x) && p.divides(y)) {
                    continue;
                }
                checked += 1;
                match e.reduction_type(p).unwrap() {
                    ReductionType::Good | ReductionType::Multiplicative => {}
                    ReductionType::Additive => additive += 1,
                    ReductionType::UndeterminedSmallPrime => other += 1,
                }
            }
            (checked, additive, other)
        })
        .collect();
    let t = start.elapsed();
    let checked: usize = results.iter().map(|r| r.0).sum();
    let additive: usize = results.iter().map(|r| r.1).sum();
    let undetermined: usize = results.iter().map(|r| r.2).sum();
    outcome(
        additive == 0 && undetermined == 0 && t < Duration::from_secs(60),
        format!(
            "semistability outside S_F and gcd(x, y): 200 instances over Q and Q(sqrt d), d in {{-1,-2,-3,-5,-7,-23}}, {checked} primes of norm <= 10^4 checked, {additive} ADDITIVE, {undetermined} undetermined, {:.2}s (limit 60s)",
            t.as_secs_f64()
        ),
    )
}

// ---- constructed solutions, shared by criteria 5 and 9 ----

struct Instance {
    f: BinaryCubic,
    x0: AlgInt,
    y0: AlgInt,
    z0: AlgInt,
    t: AlgInt,
    l: u64,
    q: PrimeIdeal,
    s: ExceptionalSet,
}

fn small_primes(lo: u64, hi: u64) -> Vec<u64> {
    (lo..=hi)
        .filter(|&n| n > 1 && (2..n).take_while(|d| d * d <= n).all(|d| n % d != 0))
        .collect()
}

fn divides_norm(p: u64, x: &AlgInt) -> bool {
    (x.norm() % BigInt::from(p)).is_zero()
}

/// An element supported only over 2.
fn two_element(k: QuadField) -> AlgInt {
    match k.d() {
        None => k.int(2),
        Some(-1) => k.elem(1, 1).unwrap(),
        Some(-2) => k.elem(0, 1).unwrap(),
        Some(-7) => k.elem(0, 1).unwrap(),
        _ => k.int(2),
    }
}

/// x0 = z0^s, y0 = z0^s t and α₀ = z0^r − α₁t − α₂t² − α₃t³ with l = 3s + r,
/// so F(x0, y0) = z0^{3s} F(1, t) = z0^l.
fn constructed(k: QuadField, r: &mut ChaCha8Rng) -> Instance {
    let primes = small_primes(29, 200);
    loop {
        let z0 = two_element(k);
        let l = primes[r.random_range(0..primes.len())];
        let (s_exp, r_exp) = ((l / 3) as u32, (l % 3) as u32);
        let t = rand_elem(k, r, 3);
        let a: Vec<AlgInt> = (0..3).map(|_| rand_elem(k, r, 6)).collect();
        let a0 = &(&(&z0.pow(r_exp) - &(&a[0] * &t)) - &(&a[1] * &t.pow(2))) - &(&a[2] * &t.pow(3));
        let Ok(f) = BinaryCubic::new([a0, a[0].clone(), a[1].clone(), a[2].clone()]) else {
            continue;
        };
        let disc = f.discriminant();
        if disc.is_zero()
            || disc.norm().abs() > BigInt::from(10u64.pow(12))
            || divides_norm(l, &disc)
        {
            continue;
        }
        let h1t = f.hessian().evaluate(&k.one(), &t);
        let Some(q) = theorem_hypothesis(&f)
            .unwrap()
            .into_iter()
            .find(|q| !q.divides(&h1t))
        else {
            continue;
        };
        let Ok(s) = build_sf(&f, 1000) else { continue };
        let x0 = z0.pow(s_exp);
        let y0 = &x0 * &t;
        return Instance {
            f,
            x0,
            y0,
            z0,
            t,
            l,
            q,
            s,
        };
    }
}

fn audit(i: &Instance) -> frey_core::pipeline::AuditReport {
    audit_solution(&AuditInput {
        f: &i.f,
        x0: &i.x0,
        y0: &i.y0,
        z0: &i.z0,
        l: i.l,
        q: &i.q,
        s: &i.s,
    })
    .unwrap()
}

fn instance_fields() -> Vec<QuadField> {
    [1i64, -1, -2, -3, -5, -7]
        .iter()
        .map(|&d| {
            if d == 1 {
                QuadField::rationals()
            } else {
                QuadField::new(d).unwrap()
            }
        })
        .collect()
}

// ---- criterion 5 ----

fn criterion_5() -> Outcome {
    let mut r = rng(5);
    let fields = instance_fields();
    let (mut done, mut bad, mut positive) = (0, 0, 0);
    while done < 100 {
        let k = fields[done % fields.len()];
        let f = rand_cubic(k, &mut r, 6);
        let Some(q) = theorem_hypothesis(&f).unwrap().into_iter().next() else {
            continue;
        };
        // half the instances put (x0 : y0) on a simple root of F mod q
        let (x0, y0) = if done % 2 == 0 && q.residue_degree() == 1 && q.norm() < 50_000 {
            let p = q.p() as i64;
            let root = (0..p).find(|&a| {
                let (x, y) = (k.int(a), k.one());
                q.divides(&f.evaluate(&x, &y)) && !q.divides(&f.hessian().evaluate(&x, &y))
            });
            match root {
                Some(a) => (k.int(a + p * r.random_range(-3i64..=3)), k.one()),
                None => continue,
            }
        } else {
            (rand_elem(k, &mut r, 40), rand_elem(k, &mut r, 40))
        };
        let value = f.evaluate(&x0, &y0);
        if value.is_zero() || q.divides(&f.hessian().evaluate(&x0, &y0)) {
            continue;
        }
        done += 1;
        let vf = q.valuation(&value).unwrap() as i64;
        if vf > 0 {
            positive += 1;
        }
        let vj = frey_invariants(&f, &x0, &y0)
            .unwrap()
            .j
            .and_then(|j| j.valuation(&q));
        if vj != Some(-1 - 2 * vf) {
            bad += 1;
        }
    }
    // audited specialization: q does not divide z0
    let mut audited_bad = 0;
    for i in 0..30 {
        let inst = constructed(fields[i % fields.len()], &mut r);
        if audit(&inst).j_valuation != Some(-1) {
            audited_bad += 1;
        }
    }
    outcome(
        bad == 0 && audited_bad == 0 && positive > 0,
        format!(
            "v_q(j) = -1 - 2 v_q(F(x0, y0)) on {done} instances ({positive} with v_q(F) > 0): {bad} mismatches; v_q(j) = -1 on 30 audited solutions: {audited_bad} mismatches; tolerance exact"
        ),
    )
}

// ---- criterion 6 ----

fn criterion_6() -> Outcome {
    let k5 = QuadField::new(-5).unwrap();
    let g5 = IdealClassGroup::new(k5).unwrap();
    let f = BinaryCubic::from_ints(k5, [1, 0, 1, 1]);
    let s = build_sf(&f, 1000).unwrap();
    let hk: Vec<String> = s.hk_members().iter().map(|m| m.prime.to_string()).collect();
    let g23 = IdealClassGroup::new(QuadField::new(-23).unwrap()).unwrap();
    let pass = g5.class_number() == 2 && hk == ["[3, 1, 1]"] && g23.class_number() == 3;
    outcome(
        pass,
        format!(
            "h(Q(sqrt -5)) = {} with H_K = {{{}}} (HNF of (3, 1 + sqrt -5) is [3, 1, 1]); h(Q(sqrt -23)) = {}; tolerance exact",
            g5.class_number(),
            hk.join(", "),
            g23.class_number()
        ),
    )
}

// ---- criterion 7 ----

fn criterion_7() -> Outcome {
    let start = Instant::now();
    let q = QuadField::rationals();
    let limit = 2200i64;
    let mut forms = Vec::new();
    for a in -6i64..=6 {
        for b in -6i64..=6 {
            for c in -6i64..=6 {
                for d in -6i64..=6 {
                    let disc =
                        b * b * c * c - 4 * a * c * c * c - 4 * b * b * b * d - 27 * a * a * d * d
                            + 18 * a * b * c * d;
                    if disc != 0 && disc.abs() < limit && a != 0 && d != 0 {
                        forms.push((disc.abs(), [a, b, c, d]));
                    }
                }
            }
        }
    }
    forms.sort();
    let forms: Vec<(i64, [i64; 4])> = forms
        .into_iter()
        .filter(|(_, c)| BinaryCubic::from_ints(q, *c).is_irreducible().unwrap())
        .collect();
    let opts = SearchOptions::default();
    let insoluble: Vec<(i64, [i64; 4])> = forms
        .iter()
        .filter(|(_, c)| {
            let f = BinaryCubic::from_ints(q, *c);
            let s = build_sf(&f, 100).unwrap();
            tm_search_first(&f, &s, 50, &opts).unwrap().is_none()
        })
        .cloned()
        .collect();
    let t = start.elapsed();
    let first = insoluble.iter().min();
    let below = forms.iter().filter(|(d, _)| *d < 2063).count();
    let pass = first.is_none_or(|(d, _)| *d >= 2063) && t < Duration::from_secs(600);
    let found = match first {
        Some((d, c)) => {
            format!("smallest |Disc| with no solution up to height 50 is {d}, form {c:?}")
        }
        None => format!("no insoluble form with |Disc| < {limit}"),
    };
    outcome(
        pass,
        format!(
            "irreducible cubics over Z with coefficients in [-6, 6] and |Disc| < {limit}: {} forms ({below} with |Disc| < 2063); {found}; expected >= 2063; {:.1}s (limit 600s)",
            forms.len(),
            t.as_secs_f64()
        ),
    )
}

// ---- criterion 8 ----

/// #E(F_p) by counting square roots of x³ + a2x² + a4x + a6 directly.
fn naive_trace(e: &WeierstrassCurve, p: i64) -> i64 {
    let a = |x: &AlgInt| x.a().to_i64().unwrap().rem_euclid(p);
    let (a2, a4, a6) = (a(&e.a2), a(&e.a4), a(&e.a6));
    let mut sq = vec![0i64; p as usize];
    for y in 0..p {
        sq[(y * y % p) as usize] += 1;
    }
    let mut count = 1;
    for x in 0..p {
        let v = ((x * x % p * x + a2 * x % p * x + a4 * x + a6) % p + p) % p;
        count += sq[v as usize];
    }
    p + 1 - count
}

fn criterion_8() -> Outcome {
    let mut r = rng(8);
    let q = QuadField::rationals();
    let avoid: Vec<PrimeIdeal> = [2, 3]
        .iter()
        .map(|&p| factor_rational_prime(q, p)[0].0.clone())
        .collect();
    let nonsingular = |e: &WeierstrassCurve| !e.invariants().is_singular();
    let (mut found, mut verified) = (0, 0);
    for _ in 0..20 {
        let e1 = loop {
            let e = WeierstrassCurve::from_ints(
                q,
                0,
                r.random_range(-20..=20),
                r.random_range(-20..=20),
            );
            if nonsingular(&e) && e.two_torsion_irreducible().unwrap() {
                break e;
            }
        };
        let e2 = loop {
            let e = WeierstrassCurve::from_ints(
                q,
                r.random_range(-20..=20),
                r.random_range(-20..=20),
                0,
            );
            if nonsingular(&e) {
                break e;
            }
        };
        if let Ok(d) =
            distinguishing_prime(&e1, &e2, 2, &avoid, 1000, &SearchOptions { workers: 2 })
        {
            found += 1;
            let p = d.prime.p() as i64;
            let (t1, t2) = (naive_trace(&e1, p), naive_trace(&e2, p));
            if d.prime.norm() <= 1000
                && (t1 - t2) % 2 != 0
                && (t1, t2) == (d.a1 as i64, d.a2 as i64)
            {
                verified += 1;
            }
        }
    }
    let mut not_found = 0;
    for _ in 0..20 {
        let e = loop {
            let e = WeierstrassCurve::from_ints(
                q,
                r.random_range(-20..=20),
                r.random_range(-20..=20),
                r.random_range(-20..=20),
            );
            if nonsingular(&e) {
                break e;
            }
        };
        if matches!(
            distinguishing_prime(&e, &e, 2, &avoid, 1000, &SearchOptions::default()),
            Err(Error::NotFound(_))
        ) {
            not_found += 1;
        }
    }
    outcome(
        found == 20 && verified == 20 && not_found == 20,
        format!(
            "distinguishing primes mod 2 with norm <= 1000: {found}/20 non-congruent pairs separated ({verified} confirmed by naive point counts), {not_found}/20 identical pairs NOT_FOUND"
        ),
    )
}

// ---- criterion 9 ----

fn failures(i: &Instance) -> Vec<&'static str> {
    match audit(i).verdict {
        Verdict::Consistent => vec![],
        Verdict::Violation(names) => names,
    }
}

fn scaled(i: &Instance, pi: &AlgInt) -> Instance {
    let pl = pi.pow(i.l as u32);
    Instance {
        x0: &i.x0 * &pl,
        y0: &i.y0 * &pl,
        z0: &i.z0 * &pi.pow(3),
        f: i.f.clone(),
        t: i.t.clone(),
        l: i.l,
        q: i.q.clone(),
        s: i.s.clone(),
    }
}

fn with_power(i: &Instance, l: u64) -> Instance {
    let x0 = i.z0.pow((l / 3) as u32);
    Instance {
        y0: &x0 * &i.t,
        x0,
        f: i.f.clone(),
        z0: i.z0.clone(),
        t: i.t.clone(),
        l,
        q: i.q.clone(),
        s: i.s.clone(),
    }
}

fn criterion_9() -> Outcome {
    let mut r = rng(9);
    let fields = instance_fields();
    let (mut base_ok, mut flips_ok) = (0, [0usize; 4]);
    for n in 0..50 {
        let k = fields[n % fields.len()];
        let inst = constructed(k, &mut r);
        if failures(&inst).is_empty() {
            base_ok += 1;
        }
        let disc = inst.f.discriminant();
        let h = IdealClassGroup::new(k).unwrap().class_number() as u32;

        // q | z0
        let pi = principal_generator(&inst.q.ideal().pow(h)).unwrap();
        if failures(&scaled(&inst, &pi)) == [Q_NOT_DIVIDING_Z] {
            flips_ok[0] += 1;
        }

        // wrong power
        let other = small_primes(inst.l + 1, inst.l + 200)
            .into_iter()
            .find(|&p| !divides_norm(p, &disc))
            .unwrap();
        let wrong = Instance {
            l: other,
            ..with_power(&inst, inst.l)
        };
        if failures(&wrong) == [EQUATION_HOLDS] {
            flips_ok[1] += 1;
        }

        // gcd off-support: a rational prime with no prime of S above it
        let rho = small_primes(5, 1000)
            .into_iter()
            .find(|&p| p != inst.l && !inst.s.finite_primes().iter().any(|pr| pr.p() == p))
            .unwrap();
        if failures(&scaled(&inst, &k.int(rho))) == [GCD_SUPPORT_OK] {
            flips_ok[2] += 1;
        }

        // l <= 24
        let small = small_primes(5, 23)
            .into_iter()
            .find(|&p| p % 3 == inst.l % 3 && !divides_norm(p, &disc));
        match small {
            Some(p) if failures(&with_power(&inst, p)) == [FAKE_CURVE_EXCLUDED] => flips_ok[3] += 1,
            _ => {}
        }
    }
    outcome(
        base_ok == 50 && flips_ok == [50; 4],
        format!(
            "audit mutations on 50 constructed solutions over Q and Q(sqrt d), d in {{-1,-2,-3,-5,-7}}: {base_ok}/50 CONSISTENT; single flag flipped for q | z0 {}/50, wrong power {}/50, gcd off-support {}/50, l <= 24 {}/50; tolerance exact",
            flips_ok[0], flips_ok[1], flips_ok[2], flips_ok[3]
        ),
    )
}

fn main() -> ExitCode {
    let corpus = syzygy_corpus();
    let criteria: Vec<(u32, Box<dyn Fn() -> Outcome + '_>)> = vec![
        (1, Box::new(|| criterion_1(&corpus))),
        (2, Box::new(|| criterion_2(&corpus))),
        (3, Box::new(criterion_3)),
        (4, Box::new(criterion_4)),
        (5, Box::new(criterion_5)),
        (6, Box::new(criterion_6)),
        (7, Box::new(criterion_7)),
        (8, Box::new(criterion_8)),
        (9, Box::new(criterion_9)),
    ];
    let mut failed = 0;
    for (n, run) in criteria {
        let o = run();
        println!(
            "criterion {n}: {} | {}",
            if o.pass { "PASS" } else { "FAIL" },
            o.detail
        );
        if !o.pass {
            failed += 1;
        }
    }
    println!("acceptance: {} of 9 criteria passed", 9 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
