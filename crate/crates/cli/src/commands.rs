use std::fs;
use std::io::Write;
use std::path::Path;

use frey_core::curve::{frey_curve, frey_invariants, frey_t};
use frey_core::json::{
    audit_to_json, check_json, covariants_to_json, curve_to_json, distinguisher_to_json,
    element_to_json, field_to_json, form_to_json, ideal_to_json, invariants_to_json, parse_curve,
    parse_prime, parse_progress, prime_to_json, progress_to_json, report, sf_to_json,
    solution_to_json, to_pretty,
};
use frey_core::nf::{factor_rational_prime, IdealClassGroup, PrimeIdeal};
use frey_core::pipeline::{
    audit_solution, build_sf_with_policy, candidate_count, distinguishing_prime, normalize_pair,
    serre_level_candidates, theorem_hypothesis, tm_search_with, AuditInput, HkPolicy,
    SearchOptions, SearchProgress, Verdict, DEFAULT_LEVEL_CAP,
};
use frey_core::{Error, Result};
use serde_json::{json, Map, Value};

use crate::config::JobConfig;

const DEFAULT_CLASS_BOUND: u64 = 1000;
const DEFAULT_NORM_BOUND: u64 = 1000;

pub struct Output {
    pub report: Value,
    pub status: u8,
}

fn done(command: &str, body: Map<String, Value>, ok: bool) -> Output {
    Output {
        report: report(command, body),
        status: if ok { 0 } else { 1 },
    }
}

macro_rules! body {
    ($($k:expr => $v:expr),* $(,)?) => {{
        let mut m = Map::new();
        $(m.insert($k.to_string(), json!($v));)*
        m
    }};
}

pub fn run(command: &str, cfg: &JobConfig) -> Result<Output> {
    match command {
        "covariants" => covariants(cfg),
        "frey" => frey(cfg),
        "sf-set" => sf_set(cfg),
        "check-hypotheses" => check_hypotheses(cfg),
        "tm-search" => tm_search(cfg),
        "audit" => audit(cfg),
        "distinguish" => distinguish(cfg),
        "levels" => levels(cfg),
        "normalize" => normalize(cfg),
        _ => unreachable!("clap only produces known commands"),
    }
}

pub fn emit(report: &Value, path: Option<&Path>) -> Result<()> {
    let text = to_pretty(report);
    match path {
        Some(p) => fs::write(p, text)
            .map_err(|e| Error::Malformed(format!("cannot write {}: {e}", p.display()))),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| Error::Malformed(format!("cannot write report: {e}"))),
    }
}

fn policy(cfg: &JobConfig) -> HkPolicy {
    if cfg.all_classes == Some(true) {
        HkPolicy::AllClasses
    } else {
        HkPolicy::NonPrincipal
    }
}

fn covariants(cfg: &JobConfig) -> Result<Output> {
    let f = cfg.cubic()?;
    let cov = f.covariants();
    let residual = f.syzygy_residual();
    let res = f.resultant_hf();
    let minus_d2 = -(&cov.disc * &cov.disc);
    let degenerate = cov.disc.is_zero();
    let checks = vec![
        check_json(
            "syzygy",
            "4H^3 + G^2 + 27 Disc F^2 = 0",
            form_to_json(&residual)["text"].clone(),
            residual.is_zero(),
        ),
        check_json(
            "resultant",
            element_to_json(&minus_d2),
            element_to_json(&res),
            res == minus_d2,
        ),
    ];
    let ok = residual.is_zero() && res == minus_d2;
    Ok(done(
        "covariants",
        body! {
            "field" => field_to_json(f.field()),
            "covariants" => covariants_to_json(&cov),
            "resultant" => element_to_json(&res),
            "degenerate" => degenerate,
            "checks" => checks,
        },
        ok,
    ))
}

fn frey(cfg: &JobConfig) -> Result<Output> {
    let f = cfg.cubic()?;
    let (x, y) = cfg.point()?;
    let curve = frey_curve(&f, &x, &y)?;
    let closed = frey_invariants(&f, &x, &y)?;
    let standard = curve.invariants();
    let checks = vec![
        check_json(
            "closed_forms_match",
            "c4, c6, Disc, j from the model",
            if closed == standard {
                "equal"
            } else {
                "differ"
            },
            closed == standard,
        ),
        check_json(
            "c4^3 - c6^2 = 1728 Disc",
            true,
            standard.satisfies_identity(),
            standard.satisfies_identity(),
        ),
    ];
    let ok = closed == standard && standard.satisfies_identity();
    Ok(done(
        "frey",
        body! {
            "field" => field_to_json(f.field()),
            "form" => form_to_json(f.as_form()),
            "point" => [element_to_json(&x), element_to_json(&y)],
            "T" => element_to_json(&frey_t(&f, &x, &y)),
            "curve" => curve_to_json(&curve),
            "invariants" => invariants_to_json(&standard),
            "checks" => checks,
        },
        ok,
    ))
}

fn sf_set(cfg: &JobConfig) -> Result<Output> {
    let f = cfg.cubic()?;
    let s = build_sf_with_policy(
        &f,
        cfg.class_bound.unwrap_or(DEFAULT_CLASS_BOUND),
        policy(cfg),
    )?;
    let h = IdealClassGroup::new(f.field())?.class_number();
    Ok(done(
        "sf-set",
        body! {
            "form" => form_to_json(f.as_form()),
            "class_number" => h,
            "sf" => sf_to_json(&s),
            "checks" => Vec::<Value>::new(),
        },
        true,
    ))
}

fn check_hypotheses(cfg: &JobConfig) -> Result<Output> {
    let f = cfg.cubic()?;
    let qs = theorem_hypothesis(&f)?;
    let holds = !qs.is_empty();
    Ok(done(
        "check-hypotheses",
        body! {
            "form" => form_to_json(f.as_form()),
            "disc" => element_to_json(&f.discriminant()),
            "primes" => qs.iter().map(prime_to_json).collect::<Vec<_>>(),
            "holds" => holds,
            "checks" => [check_json("q || Disc, q not dividing 2*alpha0", "at least one prime", qs.len().to_string(), holds)],
        },
        holds,
    ))
}

fn tm_search(cfg: &JobConfig) -> Result<Output> {
    let f = cfg.cubic()?;
    let height = *cfg.require(&cfg.height, "height")?;
    if height == 0 {
        return Err(Error::Malformed("height must be at least 1".into()));
    }
    let s = build_sf_with_policy(
        &f,
        cfg.class_bound.unwrap_or(DEFAULT_CLASS_BOUND),
        policy(cfg),
    )?;
    let resume = match &cfg.resume {
        Some(path) if path.exists() => {
            let text = fs::read_to_string(path)
                .map_err(|e| Error::Malformed(format!("cannot read {}: {e}", path.display())))?;
            let v: Value = serde_json::from_str(&text)
                .map_err(|e| Error::Malformed(format!("{}: {e}", path.display())))?;
            let p = parse_progress(&f, &v)?;
            eprintln!("tm-search: resuming after height {}", p.completed_height);
            Some(p)
        }
        _ => None,
    };
    let opts = SearchOptions {
        workers: cfg.workers.unwrap_or(1),
    };
    let mut write_error = None;
    let solutions = tm_search_with(&f, &s, height, &opts, resume, |p: &SearchProgress| {
        eprintln!(
            "tm-search: height {} done, {} solutions so far",
            p.completed_height,
            p.solutions.len()
        );
        if let Some(path) = &cfg.resume {
            if let Err(e) = save_checkpoint(path, &to_pretty(&progress_to_json(&f, p))) {
                write_error.get_or_insert(e);
            }
        }
    })?;
    if let Some(e) = write_error {
        return Err(e);
    }
    let found = !solutions.is_empty();
    let mut body = body! {
        "field" => field_to_json(f.field()),
        "form" => form_to_json(f.as_form()),
        "height" => height,
        "sf" => sf_to_json(&s),
        "count" => solutions.len(),
        "solutions" => solutions.iter().map(solution_to_json).collect::<Vec<_>>(),
        "checks" => Vec::<Value>::new(),
    };
    if !found {
        body.insert(
            "note".into(),
            json!(format!("no solution up to height {height}")),
        );
    }
    Ok(done("tm-search", body, found))
}

/// Write-then-rename, so an interrupted run never leaves half a checkpoint.
fn save_checkpoint(path: &Path, text: &str) -> Result<()> {
    let tmp = path.with_extension("tmp");
    fs::write(&tmp, text)
        .and_then(|_| fs::rename(&tmp, path))
        .map_err(|e| Error::Malformed(format!("cannot write checkpoint {}: {e}", path.display())))
}

fn audit(cfg: &JobConfig) -> Result<Output> {
    let f = cfg.cubic()?;
    let k = f.field();
    let x0 = cfg.element(&cfg.x0, "x0")?;
    let y0 = cfg.element(&cfg.y0, "y0")?;
    let z0 = cfg.element(&cfg.z0, "z0")?;
    let l = *cfg.require(&cfg.l, "l")?;
    let q = parse_prime(k, cfg.require(&cfg.q, "q")?)?;
    let s = build_sf_with_policy(
        &f,
        cfg.class_bound.unwrap_or(DEFAULT_CLASS_BOUND),
        policy(cfg),
    )?;
    let r = audit_solution(&AuditInput {
        f: &f,
        x0: &x0,
        y0: &y0,
        z0: &z0,
        l,
        q: &q,
        s: &s,
    })?;
    let mut body = audit_to_json(&r);
    body.insert("field".into(), field_to_json(k));
    body.insert("form".into(), form_to_json(f.as_form()));
    body.insert(
        "solution".into(),
        json!({
            "x0": element_to_json(&x0),
            "y0": element_to_json(&y0),
            "z0": element_to_json(&z0),
            "l": l,
            "q": ideal_to_json(q.ideal()),
        }),
    );
    Ok(done("audit", body, r.verdict == Verdict::Consistent))
}

fn distinguish(cfg: &JobConfig) -> Result<Output> {
    let k = cfg.field()?;
    let e1 = parse_curve(k, cfg.require(&cfg.curve1, "curve1")?)?;
    let e2 = parse_curve(k, cfg.require(&cfg.curve2, "curve2")?)?;
    let p = cfg.p.unwrap_or(2);
    let bound = cfg.norm_bound.unwrap_or(DEFAULT_NORM_BOUND);
    let avoid: Vec<PrimeIdeal> = match &cfg.avoid {
        Some(Value::Array(xs)) => xs
            .iter()
            .map(|v| parse_prime(k, v))
            .collect::<Result<_>>()?,
        Some(other) => {
            return Err(Error::Malformed(format!(
                "avoid must be a list, got {other}"
            )))
        }
        None => [2, 3]
            .iter()
            .flat_map(|&r| factor_rational_prime(k, r))
            .map(|(pr, _)| pr)
            .collect(),
    };
    let opts = SearchOptions {
        workers: cfg.workers.unwrap_or(1),
    };
    let mut body = body! {
        "field" => field_to_json(k),
        "curve1" => curve_to_json(&e1),
        "curve2" => curve_to_json(&e2),
        "p" => p,
        "norm_bound" => bound,
        "avoid" => avoid.iter().map(|a| ideal_to_json(a.ideal())).collect::<Vec<_>>(),
    };
    match distinguishing_prime(&e1, &e2, p, &avoid, bound, &opts) {
        Ok(d) => {
            body.insert("found".into(), json!(true));
            body.insert("result".into(), distinguisher_to_json(&d));
            body.insert(
                "checks".into(),
                json!([check_json(
                    "traces differ mod p",
                    "a1 != a2 mod p",
                    format!("{} vs {}", d.a1, d.a2),
                    true
                )]),
            );
            Ok(done("distinguish", body, true))
        }
        Err(Error::NotFound(msg)) => {
            body.insert("found".into(), json!(false));
            body.insert("note".into(), json!(format!("NOT_FOUND: {msg}")));
            body.insert("checks".into(), json!([]));
            Ok(done("distinguish", body, false))
        }
        Err(e) => Err(e),
    }
}

fn levels(cfg: &JobConfig) -> Result<Output> {
    let f = cfg.cubic()?;
    let s = build_sf_with_policy(
        &f,
        cfg.class_bound.unwrap_or(DEFAULT_CLASS_BOUND),
        policy(cfg),
    )?;
    let cap = cfg.cap.map_or(DEFAULT_LEVEL_CAP, u128::from);
    let mut body = body! {
        "form" => form_to_json(f.as_form()),
        "sf" => sf_to_json(&s),
        "count" => candidate_count(&s).to_string(),
        "cap" => cap.to_string(),
        "checks" => Vec::<Value>::new(),
    };
    match serre_level_candidates(&s, cap) {
        Ok(c) => {
            body.insert("candidates".into(), c.iter().map(ideal_to_json).collect());
            Ok(done("levels", body, true))
        }
        Err(Error::SetTooLarge { count, cap }) => {
            body.insert(
                "note".into(),
                json!(format!(
                    "SET_TOO_LARGE: {count} candidates exceed the cap {cap}"
                )),
            );
            Ok(done("levels", body, false))
        }
        Err(e) => Err(e),
    }
}

fn normalize(cfg: &JobConfig) -> Result<Output> {
    let f = cfg.cubic()?;
    let (x1, y1) = cfg.fraction_point()?;
    let group = IdealClassGroup::new(f.field())?;
    let s = build_sf_with_policy(
        &f,
        cfg.class_bound.unwrap_or(DEFAULT_CLASS_BOUND),
        policy(cfg),
    )?;
    let n = normalize_pair(&f, &x1, &y1, &group, &s)?;
    Ok(done(
        "normalize",
        body! {
            "field" => field_to_json(f.field()),
            "x" => element_to_json(&n.x),
            "y" => element_to_json(&n.y),
            "gcd" => ideal_to_json(&n.gcd),
            "gcd_class" => n.gcd_class,
            "j_preserved" => n.j_preserved,
            "checks" => [check_json("j_preserved", true, json!(n.j_preserved), n.j_preserved != Some(false))],
        },
        true,
    ))
}
