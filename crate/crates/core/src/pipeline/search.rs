//! Bounded Thue–Mahler search: pairs (x, y) with F(x, y) an S-unit.
//!
//! The height of a pair is the largest absolute value among the coordinates
//! of x and y over {1, ω}. The search runs shell by shell (all pairs of a
//! given height), which makes it restartable, and splits each shell across
//! worker threads. Solutions are reported once per orbit of the torsion
//! units acting diagonally on (x, y).

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use super::sf::ExceptionalSet;
use crate::cubic::BinaryCubic;
use crate::error::{Error, Result};
use crate::nf::{element_supported_on, factor_element, AlgInt, PrimeIdeal, QuadField};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TMSolution {
    pub x: AlgInt,
    pub y: AlgInt,
    pub value: AlgInt,
    pub support: Vec<PrimeIdeal>,
}

impl TMSolution {
    pub fn height(&self) -> BigInt {
        self.x.height().max(self.y.height())
    }
}

/// State after the last fully searched shell.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SearchProgress {
    pub completed_height: u64,
    pub solutions: Vec<TMSolution>,
}

#[derive(Clone, Debug)]
pub struct SearchOptions {
    pub workers: usize,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions { workers: 1 }
    }
}

/// All orbits of solutions whose canonical member has height ≤ `height`.
pub fn tm_search(f: &BinaryCubic, s: &ExceptionalSet, height: u64) -> Result<Vec<TMSolution>> {
    tm_search_with(f, s, height, &SearchOptions::default(), None, |_| {})
}

/// [`tm_search`] with parallelism, a resume point and a per-shell callback
/// receiving the cumulative progress after each completed shell.
pub fn tm_search_with(
    f: &BinaryCubic,
    s: &ExceptionalSet,
    height: u64,
    opts: &SearchOptions,
    resume: Option<SearchProgress>,
    mut on_shell: impl FnMut(&SearchProgress),
) -> Result<Vec<TMSolution>> {
    check_inputs(f, s, height)?;
    let pool = thread_pool(opts.workers)?;
    let mut progress = resume.unwrap_or_default();
    for h in progress.completed_height + 1..=height {
        let found = run_shell(pool.as_ref(), f, s, h, false)?;
        progress.solutions.extend(found);
        progress.solutions.sort_by(canonical_order);
        progress.completed_height = h;
        on_shell(&progress);
    }
    Ok(progress.solutions)
}

/// The first solution in canonical order, if any, stopping at the first
/// shell that has one.
pub fn tm_search_first(
    f: &BinaryCubic,
    s: &ExceptionalSet,
    height: u64,
    opts: &SearchOptions,
) -> Result<Option<TMSolution>> {
    check_inputs(f, s, height)?;
    let pool = thread_pool(opts.workers)?;
    for h in 1..=height {
        let found = run_shell(pool.as_ref(), f, s, h, true)?;
        if let Some(first) = found.into_iter().min_by(canonical_order) {
            return Ok(Some(first));
        }
    }
    Ok(None)
}

fn check_inputs(f: &BinaryCubic, s: &ExceptionalSet, height: u64) -> Result<()> {
    if height == 0 {
        return Err(Error::Malformed("height must be at least 1".into()));
    }
    if f.field() != s.field() {
        return Err(Error::FieldMismatch);
    }
    f.field().require_desk_scale("Thue-Mahler search")
}

/// A dedicated pool for `workers > 1`; a single worker runs on the calling
/// thread, which also keeps searches usable from inside other rayon jobs.
pub(crate) fn thread_pool(workers: usize) -> Result<Option<rayon::ThreadPool>> {
    if workers <= 1 {
        return Ok(None);
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map(Some)
        .map_err(|e| Error::Malformed(format!("cannot start worker pool: {e}")))
}

fn run_shell(
    pool: Option<&rayon::ThreadPool>,
    f: &BinaryCubic,
    s: &ExceptionalSet,
    h: u64,
    stop_early: bool,
) -> Result<Vec<TMSolution>> {
    match pool {
        Some(pool) => pool.install(|| shell_solutions(f, s, h, stop_early, true)),
        None => shell_solutions(f, s, h, stop_early, false),
    }
}

/// Order by height, then by coordinates (x.a, x.b, y.a, y.b).
pub fn canonical_order(a: &TMSolution, b: &TMSolution) -> Ordering {
    a.height()
        .cmp(&b.height())
        .then_with(|| coords(&a.x, &a.y).cmp(&coords(&b.x, &b.y)))
}

fn coords(x: &AlgInt, y: &AlgInt) -> [BigInt; 4] {
    [x.a().clone(), x.b().clone(), y.a().clone(), y.b().clone()]
}

/// The orbit representative under (x, y) ↦ (ux, uy): least height, then the
/// lexicographically largest coordinate tuple. So (1, 0) beats (−1, 0).
pub fn orbit_representative(x: &AlgInt, y: &AlgInt) -> (AlgInt, AlgInt) {
    x.field()
        .units()
        .iter()
        .map(|u| (u * x, u * y))
        .min_by(|(x1, y1), (x2, y2)| {
            let h1 = x1.height().max(y1.height());
            let h2 = x2.height().max(y2.height());
            h1.cmp(&h2)
                .then_with(|| coords(x2, y2).cmp(&coords(x1, y1)))
        })
        .unwrap()
}

/// Coordinate tuples of length `n` with max |cᵢ| = h, in lexicographic order.
fn shell_tuples(n: usize, h: i64) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    let mut cur = vec![-h; n];
    loop {
        if cur.iter().any(|c| c.abs() == h) {
            out.push(cur.clone());
        }
        let mut i = n;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if cur[i] < h {
                cur[i] += 1;
                break;
            }
            cur[i] = -h;
        }
    }
}

fn shell_solutions(
    f: &BinaryCubic,
    s: &ExceptionalSet,
    h: u64,
    stop_early: bool,
    parallel: bool,
) -> Result<Vec<TMSolution>> {
    let field = f.field();
    let n = if field.is_rationals() { 2 } else { 4 };
    let h = i64::try_from(h).map_err(|_| Error::Malformed("height too large".into()))?;
    let tuples = shell_tuples(n, h);
    let rational_primes: Vec<BigInt> = {
        let mut ps: Vec<u64> = s.finite_primes().iter().map(|p| p.p()).collect();
        ps.dedup();
        ps.into_iter().map(BigInt::from).collect()
    };
    let test = |t: &Vec<i64>| -> Option<TMSolution> {
        let (x, y) = pair_from(field, t);
        let value = f.evaluate(&x, &y);
        if value.is_zero() || !norm_is_s_unit(&value.norm(), &rational_primes) {
            return None;
        }
        if !element_supported_on(&value, s.finite_primes()) {
            return None;
        }
        let (rx, ry) = orbit_representative(&x, &y);
        if rx != x || ry != y {
            return None;
        }
        let support = factor_element(&value)
            .ok()?
            .into_iter()
            .map(|(p, _)| p)
            .collect();
        Some(TMSolution {
            x,
            y,
            value,
            support,
        })
    };
    let found: Vec<TMSolution> = match (parallel, stop_early) {
        (true, true) => tuples.par_iter().find_map_first(test).into_iter().collect(),
        (true, false) => tuples.par_iter().filter_map(test).collect(),
        (false, true) => tuples.iter().find_map(test).into_iter().collect(),
        (false, false) => tuples.iter().filter_map(test).collect(),
    };
    Ok(found)
}

fn pair_from(field: QuadField, t: &[i64]) -> (AlgInt, AlgInt) {
    if field.is_rationals() {
        (field.int(t[0]), field.int(t[1]))
    } else {
        (
            field.elem(t[0], t[1]).unwrap(),
            field.elem(t[2], t[3]).unwrap(),
        )
    }
}

fn norm_is_s_unit(norm: &BigInt, primes: &[BigInt]) -> bool {
    let mut n = norm.abs();
    for p in primes {
        while (&n % p).is_zero() {
            n /= p;
        }
    }
    n.is_one()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pipeline::sf::build_sf;

    #[test]
    fn shell_sizes() {
        assert_eq!(shell_tuples(2, 1).len(), 8);
        assert_eq!(shell_tuples(2, 3).len(), 49 - 25);
        assert_eq!(shell_tuples(4, 2).len(), 625 - 81);
    }

    #[test]
    fn x3_minus_2y3() {
        let q = QuadField::rationals();
        let f = BinaryCubic::from_ints(q, [1, 0, 0, -2]);
        let s = build_sf(&f, 100).unwrap();
        let sols = tm_search(&f, &s, 10).unwrap();
        let find = |x: i64, y: i64| sols.iter().find(|t| t.x == q.int(x) && t.y == q.int(y));
        assert_eq!(find(1, 0).unwrap().value, q.int(1));
        assert_eq!(find(1, 1).unwrap().value, q.int(-1));
        assert!(find(-1, 0).is_none());
        let first = tm_search_first(&f, &s, 10, &SearchOptions::default())
            .unwrap()
            .unwrap();
        assert_eq!((first.x, first.y), (q.int(0), q.int(1)));
    }

    #[test]
    fn larger_height_gives_superset() {
        let k = QuadField::new(-5).unwrap();
        let f = BinaryCubic::from_ints(k, [1, 0, 1, 1]);
        let s = build_sf(&f, 100).unwrap();
        let small = tm_search(&f, &s, 2).unwrap();
        let big = tm_search(&f, &s, 3).unwrap();
        assert!(small.iter().all(|t| big.contains(t)));
        assert!(!small.is_empty());
    }

    #[test]
    fn resume_matches_single_run() {
        let k = QuadField::new(-3).unwrap();
        let f = BinaryCubic::from_ints(k, [1, 2, 0, 3]);
        let s = build_sf(&f, 100).unwrap();
        let full = tm_search(&f, &s, 3).unwrap();
        let mut saved = None;
        tm_search_with(&f, &s, 2, &SearchOptions::default(), None, |p| {
            saved = Some(p.clone())
        })
        .unwrap();
        let resumed =
            tm_search_with(&f, &s, 3, &SearchOptions { workers: 3 }, saved, |_| {}).unwrap();
        assert_eq!(full, resumed);
    }

    #[test]
    fn unit_orbits_are_reported_once() {
        let k = QuadField::new(-3).unwrap();
        let f = BinaryCubic::from_ints(k, [1, 0, 0, 1]);
        let s = build_sf(&f, 100).unwrap();
        let sols = tm_search(&f, &s, 2).unwrap();
        for (i, a) in sols.iter().enumerate() {
            for b in &sols[i + 1..] {
                for u in k.units() {
                    assert!(!(&u * &a.x == b.x && &u * &a.y == b.y));
                }
            }
        }
    }
}
