//! `frey`: JSON reports for cubic covariants, Frey curves, exceptional sets,
//! Thue–Mahler searches, solution audits and trace comparisons.
//!
//! Exit status: 0 = consistent / found, 1 = violation / not found,
//! 2 = input error.

mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use frey_core::Error;

use crate::config::{field_arg, point_arg, read_json_arg, JobConfig};

#[derive(Parser)]
#[command(
    name = "frey",
    version,
    about = "Frey curves and Thue-Mahler searches over Q and imaginary quadratic fields"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    #[command(flatten)]
    global: Global,
}

#[derive(Args)]
struct Global {
    /// Number field: "Q" or a squarefree d < 0 for Q(sqrt d).
    #[arg(long, global = true, allow_hyphen_values = true)]
    field: Option<String>,
    /// Binary cubic: a JSON file or inline JSON, e.g. '{"coeffs":[1,0,0,-2]}'.
    #[arg(long, global = true)]
    form: Option<String>,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads for searches.
    #[arg(long, global = true)]
    workers: Option<usize>,
    /// Checkpoint file for tm-search; resumed from if it exists.
    #[arg(long, global = true)]
    resume: Option<PathBuf>,
    /// JSON job file; flags override its entries.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Hessian, G covariant, discriminant, resultant and the syzygy check.
    Covariants,
    /// The Frey curve at a point (x, y).
    Frey {
        /// "x,y", e.g. "1,0" or "[1,2],[0,1]".
        #[arg(long)]
        point: Option<String>,
    },
    /// The exceptional set S_F.
    SfSet {
        #[arg(long)]
        class_bound: Option<u64>,
        /// Give the principal class a representative prime too.
        #[arg(long)]
        all_classes: bool,
    },
    /// Primes q with v_q(Disc) = 1 and q not dividing 2*alpha0.
    CheckHypotheses,
    /// Pairs (x, y) up to a height with F(x, y) an S_F-unit.
    TmSearch {
        #[arg(long)]
        height: Option<u64>,
        #[arg(long)]
        class_bound: Option<u64>,
    },
    /// Audit a putative solution F(x0, y0) = z0^l.
    Audit {
        #[arg(long, allow_hyphen_values = true)]
        x0: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        y0: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        z0: Option<String>,
        #[arg(long)]
        l: Option<u64>,
        /// Prime ideal q as an HNF triple, or a rational prime over Q.
        #[arg(long)]
        q: Option<String>,
        #[arg(long)]
        class_bound: Option<u64>,
    },
    /// Smallest prime separating the Frobenius traces of two curves mod p.
    Distinguish {
        /// '{"a2":..,"a4":..,"a6":..}' or a JSON file.
        #[arg(long)]
        curve1: Option<String>,
        #[arg(long)]
        curve2: Option<String>,
        #[arg(long)]
        p: Option<u64>,
        #[arg(long)]
        norm_bound: Option<u64>,
        /// JSON list of primes to skip; default: the primes over 6.
        #[arg(long)]
        avoid: Option<String>,
    },
    /// Candidate Serre levels supported on S_F.
    Levels {
        #[arg(long)]
        class_bound: Option<u64>,
        #[arg(long)]
        cap: Option<u64>,
    },
    /// Rescale (x1, y1) in K^2 to an integral pair with normalized gcd.
    Normalize {
        /// "x1,y1", entries may carry denominators: "1/2,3/2".
        #[arg(long, allow_hyphen_values = true)]
        point: Option<String>,
        #[arg(long)]
        class_bound: Option<u64>,
    },
}

fn json_value(s: &str) -> frey_core::Result<serde_json::Value> {
    serde_json::from_str(s).map_err(|e| Error::Malformed(format!("{s:?}: {e}")))
}

fn build_config(cli: &Cli) -> frey_core::Result<JobConfig> {
    let mut cfg = match &cli.global.config {
        Some(path) => JobConfig::load(path)?,
        None => JobConfig::default(),
    };
    let g = &cli.global;
    if let Some(f) = &g.field {
        cfg.field = Some(field_arg(f)?);
    }
    if let Some(f) = &g.form {
        cfg.form = Some(read_json_arg(f)?);
    }
    if g.out.is_some() {
        cfg.out = g.out.clone();
    }
    if g.workers.is_some() {
        cfg.workers = g.workers;
    }
    if g.resume.is_some() {
        cfg.resume = g.resume.clone();
    }
    fn set<T: Clone>(dst: &mut Option<T>, src: &Option<T>) {
        if src.is_some() {
            *dst = src.clone();
        }
    }
    match &cli.command {
        Command::Covariants | Command::CheckHypotheses => {}
        Command::Frey { point } => {
            if let Some(p) = point {
                cfg.point = Some(point_arg(p)?);
            }
        }
        Command::SfSet {
            class_bound,
            all_classes,
        } => {
            set(&mut cfg.class_bound, class_bound);
            if *all_classes {
                cfg.all_classes = Some(true);
            }
        }
        Command::TmSearch {
            height,
            class_bound,
        } => {
            set(&mut cfg.height, height);
            set(&mut cfg.class_bound, class_bound);
        }
        Command::Audit {
            x0,
            y0,
            z0,
            l,
            q,
            class_bound,
        } => {
            for (dst, src) in [
                (&mut cfg.x0, x0),
                (&mut cfg.y0, y0),
                (&mut cfg.z0, z0),
                (&mut cfg.q, q),
            ] {
                if let Some(s) = src {
                    *dst = Some(json_value(s)?);
                }
            }
            set(&mut cfg.l, l);
            set(&mut cfg.class_bound, class_bound);
        }
        Command::Distinguish {
            curve1,
            curve2,
            p,
            norm_bound,
            avoid,
        } => {
            if let Some(c) = curve1 {
                cfg.curve1 = Some(read_json_arg(c)?);
            }
            if let Some(c) = curve2 {
                cfg.curve2 = Some(read_json_arg(c)?);
            }
            if let Some(a) = avoid {
                cfg.avoid = Some(read_json_arg(a)?);
            }
            set(&mut cfg.p, p);
            set(&mut cfg.norm_bound, norm_bound);
        }
        Command::Levels { class_bound, cap } => {
            set(&mut cfg.class_bound, class_bound);
            set(&mut cfg.cap, cap);
        }
        Command::Normalize { point, class_bound } => {
            if let Some(p) = point {
                cfg.point = Some(point_arg(p)?);
            }
            set(&mut cfg.class_bound, class_bound);
        }
    }
    Ok(cfg)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = build_config(&cli).and_then(|cfg| {
        let name = match cli.command {
            Command::Covariants => "covariants",
            Command::Frey { .. } => "frey",
            Command::SfSet { .. } => "sf-set",
            Command::CheckHypotheses => "check-hypotheses",
            Command::TmSearch { .. } => "tm-search",
            Command::Audit { .. } => "audit",
            Command::Distinguish { .. } => "distinguish",
            Command::Levels { .. } => "levels",
            Command::Normalize { .. } => "normalize",
        };
        commands::run(name, &cfg).map(|out| (out, cfg.out.clone()))
    });
    match outcome {
        Ok((out, path)) => match commands::emit(&out.report, path.as_deref()) {
            Ok(()) => ExitCode::from(out.status),
            Err(e) => {
                eprintln!("error: {e}");
                ExitCode::from(2)
            }
        },
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
